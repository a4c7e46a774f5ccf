//! Picks the candidate threshold (hard mode) and θ (threshold mode) that
//! maximise F1 against a generated reference alignment.

use kgalign::benchgen::{generate, BenchConfig};
use kgalign::evaluation::calibrate;
use kgalign::lexical::{generate_candidates, MatcherConfig};
use kgalign::selector::{Mode, SelectorConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let bench = generate(&BenchConfig { seed: 7, n_classes: 120, label_noise: 0.25, ..BenchConfig::default() })?;
    let matcher = MatcherConfig { candidate_threshold: 0.3, ..MatcherConfig::default() };
    let candidates = generate_candidates(&bench.source, &bench.target, &matcher)?;
    for mode in [Mode::Hard, Mode::Threshold] {
        let cfg = SelectorConfig::with_mode(mode);
        let c = calibrate(&bench.source, &bench.target, &candidates, &bench.ground_truth, &cfg, 0.05)?;
        println!("{mode}: {} = {:.2}\n{}\n", c.parameter, c.value, c.report);
    }
    Ok(())
}
