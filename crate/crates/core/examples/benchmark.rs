//! Writes a seeded benchmark to a directory and reads its files back.

use kgalign::benchgen::{generate, read_manifest, BenchConfig};
use kgalign::ingest::{load_alignment, load_ontology};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir =
        std::env::args().nth(1).map(std::path::PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("kga-bench"));
    let bench = generate(&BenchConfig { seed: 3, n_classes: 50, n_conflicts: 2, ..BenchConfig::default() })?;
    bench.write_dir(&dir)?;
    for (name, _) in bench.files() {
        println!("wrote {}", dir.join(name).display());
    }

    let source = load_ontology(dir.join("source.ttl"))?.value;
    let truth = load_alignment(dir.join("reference.tsv"))?;
    let conflicts = read_manifest(&std::fs::read_to_string(dir.join("manifest.tsv"))?)?;
    println!(
        "{} classes, {} reference mappings, {} planted conflicts",
        source.signature().classes.len(),
        truth.len(),
        conflicts.len()
    );
    assert_eq!(source, bench.source);
    Ok(())
}
