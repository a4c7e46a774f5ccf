//! The `kga` command line.
//!
//! Exit codes: 0 on success, 2 on unreadable or malformed input or bad
//! flags, 3 when a repair result is flagged (soft-mode iteration cap reached
//! or justification sets truncated). Flagged results are still written.
//! Logging goes to stderr and is controlled by `KGA_LOG` (off, info, debug).

mod report;

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use sha2::{Digest, Sha256};

pub use report::{justification_text, key_text, RunReport};

use crate::alignment::Alignment;
use crate::benchgen::{self, BenchConfig};
use crate::error::{Error, Result};
use crate::evaluation::{calibrate, evaluate};
use crate::ingest::{parse_ontology, read_alignment, write_alignment};
use crate::lexical::{generate_candidates, Blocking, MatcherConfig, Metric};
use crate::model::{Iri, KnowledgeGraph};
use crate::reasoner::{base_and_aligned_axioms, deductive_diff, unsat_count, Reasoner, DEFAULT_J_CAP};
use crate::selector::{select, select_exact, Mode, Selection, SelectorConfig};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_FLAGGED: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "kga", version, about = "Lexical ontology matching with logical repair")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Propose equivalence candidates from label similarity.
    Match(MatchArgs),
    /// Filter an alignment under a consistency objective.
    Repair(RepairArgs),
    /// Report unsatisfiable concepts and their justifications.
    Diagnose(DiagnoseArgs),
    /// Compare an alignment with a reference.
    Eval(EvalArgs),
    /// Sweep the selector parameter for the best F1 against a reference.
    Calibrate(CalibrateArgs),
    /// Atomic statements entailed by the second graph but not the first.
    Diff(DiffArgs),
    /// Write a synthetic benchmark with planted conflicts.
    Benchgen(BenchgenArgs),
}

#[derive(Debug, Args)]
pub struct MatchArgs {
    #[arg(long)]
    pub source: PathBuf,
    #[arg(long)]
    pub target: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value = "combined")]
    pub metric: Metric,
    #[arg(long, default_value_t = 0.5)]
    pub candidate_threshold: f64,
    #[arg(long, default_value = "shared-token")]
    pub blocking: Blocking,
}

#[derive(Debug, Clone, Args)]
pub struct SelectorArgs {
    #[arg(long, default_value = "hard")]
    pub mode: Mode,
    /// Threshold mode: confidence at or above which consistency is not checked.
    #[arg(long, default_value_t = 0.7)]
    pub theta: f64,
    #[arg(long, default_value_t = 1)]
    pub cardinality: usize,
    /// Soft mode: minimum score an accepted mapping must keep.
    #[arg(long, default_value_t = 0.0)]
    pub gamma: f64,
    #[arg(long, default_value_t = 10)]
    pub max_soft_iterations: usize,
    /// Bound on stored justification sets per derived pair.
    #[arg(long, default_value_t = DEFAULT_J_CAP)]
    pub j_cap: usize,
}

impl SelectorArgs {
    fn config(&self) -> SelectorConfig {
        SelectorConfig {
            mode: self.mode,
            theta: self.theta,
            cardinality_t: self.cardinality,
            gamma: self.gamma,
            max_soft_iterations: self.max_soft_iterations,
            j_cap: self.j_cap,
        }
    }
}

#[derive(Debug, Args)]
pub struct RepairArgs {
    #[arg(long)]
    pub source: PathBuf,
    #[arg(long)]
    pub target: PathBuf,
    #[arg(long)]
    pub alignment: PathBuf,
    #[command(flatten)]
    pub selector: SelectorArgs,
    /// Exhaustive optimum of the hard objective (at most 20 candidates).
    #[arg(long)]
    pub exact: bool,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DiagnoseArgs {
    #[arg(long)]
    pub source: PathBuf,
    #[arg(long)]
    pub target: PathBuf,
    #[arg(long)]
    pub alignment: PathBuf,
    #[arg(long, default_value_t = DEFAULT_J_CAP)]
    pub j_cap: usize,
    /// Defaults to standard output.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub alignment: PathBuf,
    #[arg(long)]
    pub reference: PathBuf,
}

#[derive(Debug, Args)]
pub struct CalibrateArgs {
    #[arg(long)]
    pub source: PathBuf,
    #[arg(long)]
    pub target: PathBuf,
    #[arg(long)]
    pub alignment: PathBuf,
    #[arg(long)]
    pub reference: PathBuf,
    #[command(flatten)]
    pub selector: SelectorArgs,
    #[arg(long, default_value_t = 0.01)]
    pub grid_step: f64,
}

#[derive(Debug, Args)]
pub struct DiffArgs {
    #[arg(long)]
    pub kg1: PathBuf,
    #[arg(long)]
    pub kg2: PathBuf,
    /// Compare KG1 ∪ KG2 with the graph aligned by this alignment instead.
    #[arg(long)]
    pub alignment: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchgenArgs {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 200)]
    pub n_classes: usize,
    #[arg(long, default_value_t = 4)]
    pub branching: usize,
    #[arg(long, default_value_t = 0.1)]
    pub label_noise: f64,
    #[arg(long, default_value_t = 0.05)]
    pub edge_delete_rate: f64,
    #[arg(long, default_value_t = 5)]
    pub n_conflicts: usize,
    #[arg(long)]
    pub out_dir: PathBuf,
}

/// Parses `std::env::args` and runs the command.
pub fn run() -> ExitCode {
    init_logging();
    let cli = Cli::parse();
    ExitCode::from(execute(cli.command))
}

fn init_logging() {
    let _ = env_logger::Builder::new()
        .filter_level(log::LevelFilter::Off)
        .parse_env(env_logger::Env::new().filter("KGA_LOG"))
        .try_init();
}

/// Runs one command and returns its exit code. Diagnostics go to stderr.
pub fn execute(command: Command) -> u8 {
    let started = Instant::now();
    let outcome = match command {
        Command::Match(a) => cmd_match(&a),
        Command::Repair(a) => cmd_repair(&a, started),
        Command::Diagnose(a) => cmd_diagnose(&a, started),
        Command::Eval(a) => cmd_eval(&a),
        Command::Calibrate(a) => cmd_calibrate(&a),
        Command::Diff(a) => cmd_diff(&a),
        Command::Benchgen(a) => cmd_benchgen(&a),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("kga: {e}");
            EXIT_INPUT
        }
    }
}

struct Input {
    text: String,
    display: String,
    digest: String,
}

fn read_input(path: &Path) -> Result<Input> {
    let bytes = fs::read(path).map_err(|source| Error::File { path: path.display().to_string(), source })?;
    let digest = Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect();
    let text = String::from_utf8(bytes).map_err(|e| Error::File {
        path: path.display().to_string(),
        source: std::io::Error::new(std::io::ErrorKind::InvalidData, e),
    })?;
    Ok(Input { text, display: path.display().to_string(), digest })
}

fn ontology(input: &Input, path: &Path) -> Result<KnowledgeGraph> {
    let id = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "kg".into());
    let parsed = parse_ontology(&input.text, &id, &input.display)?;
    for w in &parsed.warnings {
        eprintln!("{w}");
    }
    Ok(parsed.value)
}

fn alignment(input: &Input) -> Result<Alignment> {
    Ok(read_alignment(&input.text, &input.display)?)
}

fn write_file(path: &Path, body: &str) -> Result<()> {
    fs::write(path, body).map_err(|source| Error::File { path: path.display().to_string(), source })
}

fn cmd_match(a: &MatchArgs) -> Result<u8> {
    let (si, ti) = (read_input(&a.source)?, read_input(&a.target)?);
    let (kg1, kg2) = (ontology(&si, &a.source)?, ontology(&ti, &a.target)?);
    let cfg = MatcherConfig { metric: a.metric, candidate_threshold: a.candidate_threshold, blocking: a.blocking };
    let candidates = generate_candidates(&kg1, &kg2, &cfg)?;
    write_file(&a.out, &write_alignment(&candidates, None))?;
    log::info!("wrote {} candidates to {}", candidates.len(), a.out.display());
    Ok(EXIT_OK)
}

struct Loaded {
    kg1: KnowledgeGraph,
    kg2: KnowledgeGraph,
    m: Alignment,
    inputs: [(&'static str, Input); 3],
}

fn load_triple(source: &Path, target: &Path, al: &Path) -> Result<Loaded> {
    let (si, ti, ai) = (read_input(source)?, read_input(target)?, read_input(al)?);
    let kg1 = ontology(&si, source)?;
    let kg2 = ontology(&ti, target)?;
    let m = alignment(&ai)?;
    m.check_endpoints(&kg1, &kg2)?;
    Ok(Loaded { kg1, kg2, m, inputs: [("source", si), ("target", ti), ("alignment", ai)] })
}

fn report_inputs(r: &mut RunReport, inputs: &[(&str, Input)]) {
    for (name, i) in inputs {
        r.input(name, &i.display, &i.digest);
    }
}

fn repair_report(l: &Loaded, a: &RepairArgs, cfg: &SelectorConfig, sel: &Selection) -> RunReport {
    let mut r = RunReport::new("repair");
    report_inputs(&mut r, &l.inputs);
    r.kv("config", "mode", cfg.mode);
    r.kv("config", "theta", format!("{:.6}", cfg.theta));
    r.kv("config", "cardinality", cfg.cardinality_t);
    r.kv("config", "gamma", format!("{:.6}", cfg.gamma));
    r.kv("config", "max_soft_iterations", cfg.max_soft_iterations);
    r.kv("config", "j_cap", cfg.j_cap);
    r.kv("config", "exact", a.exact);
    r.kv("summary", "candidates", sel.scored.len());
    r.kv("summary", "accepted", sel.alignment.len());
    r.kv("summary", "objective_value", format!("{:.6}", sel.objective_value()));
    r.kv("summary", "unsat", sel.unsat.len());
    r.kv("summary", "truncated", sel.truncated);
    r.kv("summary", "hit_iteration_cap", sel.hit_iteration_cap);
    r.kv("summary", "soft_iterations", sel.soft_iterations);
    r.mappings(&sel.scored);
    r.unsat(&sel.unsat);
    r
}

fn cmd_repair(a: &RepairArgs, started: Instant) -> Result<u8> {
    let l = load_triple(&a.source, &a.target, &a.alignment)?;
    let cfg = a.selector.config();
    let sel = if a.exact {
        if cfg.mode != Mode::Hard {
            return Err(Error::Config("--exact applies to --mode hard only".into()));
        }
        select_exact(&l.kg1, &l.kg2, &l.m, &cfg)?
    } else {
        select(&l.kg1, &l.kg2, &l.m, &cfg)?
    };
    write_file(&a.out, &write_alignment(&sel.alignment, Some(&sel.scored)))?;
    if let Some(path) = &a.report {
        let mut r = repair_report(&l, a, &cfg, &sel);
        r.set_elapsed(started.elapsed().as_millis());
        write_file(path, &r.render())?;
    }
    if sel.hit_iteration_cap {
        eprintln!("kga: soft mode stopped after {} iterations with mappings below the floor", sel.soft_iterations);
    }
    if sel.truncated {
        eprintln!("kga: justification sets truncated at {}; provenance may be incomplete", cfg.j_cap);
    }
    Ok(if sel.flagged() { EXIT_FLAGGED } else { EXIT_OK })
}

fn cmd_diagnose(a: &DiagnoseArgs, started: Instant) -> Result<u8> {
    let l = load_triple(&a.source, &a.target, &a.alignment)?;
    let cr = Reasoner::new(&l.kg1, &l.kg2).with_j_cap(a.j_cap).closure(&l.m)?;
    let mut r = RunReport::new("diagnose");
    report_inputs(&mut r, &l.inputs);
    r.kv("config", "j_cap", a.j_cap);
    r.kv("summary", "mappings", l.m.len());
    r.kv("summary", "unsat", cr.unsat().len());
    r.kv("summary", "involved_mappings", cr.involved_mappings().len());
    r.kv("summary", "truncated", cr.truncated());
    r.unsat(cr.unsat());
    r.row("entities", "# entity\tunsat_count".into());
    let endpoints: BTreeSet<&Iri> = l.m.iter().flat_map(|m| [&m.source, &m.target]).collect();
    for e in endpoints {
        let n = unsat_count(e, &l.m, &cr);
        if n > 0 {
            r.row("entities", format!("{e}\t{n}"));
        }
    }
    r.set_elapsed(started.elapsed().as_millis());
    match &a.report {
        Some(path) => write_file(path, &r.render())?,
        None => print!("{}", r.render()),
    }
    Ok(EXIT_OK)
}

fn cmd_eval(a: &EvalArgs) -> Result<u8> {
    let m = alignment(&read_input(&a.alignment)?)?;
    let reference = alignment(&read_input(&a.reference)?)?;
    println!("{}", evaluate(&m, &reference));
    Ok(EXIT_OK)
}

fn cmd_calibrate(a: &CalibrateArgs) -> Result<u8> {
    let l = load_triple(&a.source, &a.target, &a.alignment)?;
    let reference = alignment(&read_input(&a.reference)?)?;
    let cfg = a.selector.config();
    let c = calibrate(&l.kg1, &l.kg2, &l.m, &reference, &cfg, a.grid_step)?;
    println!("mode = {}", cfg.mode);
    println!("{} = {:.6}", c.parameter, c.value);
    println!("{}", c.report);
    println!("reference_hits = {}", c.literal_objective);
    Ok(EXIT_OK)
}

fn cmd_diff(a: &DiffArgs) -> Result<u8> {
    let (i1, i2) = (read_input(&a.kg1)?, read_input(&a.kg2)?);
    let (kg1, kg2) = (ontology(&i1, &a.kg1)?, ontology(&i2, &a.kg2)?);
    let sigma: BTreeSet<Iri> = kg1.signature().all().into_iter().chain(kg2.signature().all()).collect();
    let statements = match &a.alignment {
        Some(path) => {
            let m = alignment(&read_input(path)?)?;
            let (base, aligned) = base_and_aligned_axioms(&kg1, &kg2, &m)?;
            deductive_diff(&base, &aligned, &sigma)
        }
        None => deductive_diff(kg1.axioms(), kg2.axioms(), &sigma),
    };
    for s in &statements {
        println!("{s}");
    }
    println!("{} statements", statements.len());
    Ok(EXIT_OK)
}

fn cmd_benchgen(a: &BenchgenArgs) -> Result<u8> {
    let cfg = BenchConfig {
        seed: a.seed,
        n_classes: a.n_classes,
        branching: a.branching,
        label_noise: a.label_noise,
        edge_delete_rate: a.edge_delete_rate,
        n_conflicts: a.n_conflicts,
    };
    let bench = benchgen::generate(&cfg)?;
    bench.write_dir(&a.out_dir)?;
    log::info!("wrote benchmark to {}", a.out_dir.display());
    Ok(EXIT_OK)
}
