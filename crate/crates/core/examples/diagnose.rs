//! Finds unsatisfiable concepts under an alignment and lists their minimal
//! mapping justifications, plus the graded consistency of each endpoint.

use kgalign::fixtures::lymphokine;
use kgalign::reasoner::{closure, consist, involved, softconsist, unsat_count};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = lymphokine();
    let m = f.candidates();
    let cr = closure(&f.source, &f.target, &m)?;
    for u in cr.unsat() {
        println!("{} is unsatisfiable", u.concept);
        for j in &u.justifications {
            let keys: Vec<String> = j.iter().map(ToString::to_string).collect();
            println!("  because of {{{}}}", keys.join(", "));
        }
    }
    for mapping in m.iter() {
        let k = mapping.key();
        let bot = unsat_count(&mapping.source, &m, &cr);
        println!(
            "{k}\n  involved {}  consist(source) {}  unsat count {bot}  softconsist {:.6}",
            involved(&k, &cr)?,
            consist(&mapping.source, &m, &cr),
            softconsist(bot)
        );
    }
    Ok(())
}
