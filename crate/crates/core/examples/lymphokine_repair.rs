//! Two correct mappings that are jointly incoherent: hard repair drops the
//! weaker one, soft repair keeps both at a reduced score.

use kgalign::fixtures::lymphokine;
use kgalign::selector::{select, Mode, SelectorConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = lymphokine();
    let candidates = f.candidates();
    for mode in [Mode::Hard, Mode::Threshold, Mode::Soft, Mode::None] {
        let cfg = SelectorConfig { theta: 0.4, ..SelectorConfig::with_mode(mode) };
        let sel = select(&f.source, &f.target, &candidates, &cfg)?;
        println!("{mode}: objective {:.6}, {} unsat", sel.objective_value(), sel.unsat.len());
        for s in &sel.scored {
            println!("  {:<22} {:.6}  {}", s.status.to_string(), s.objective_score, s.mapping.key());
        }
    }
    Ok(())
}
