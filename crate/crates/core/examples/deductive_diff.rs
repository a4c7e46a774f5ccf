//! New atomic consequences an alignment introduces over the union of the
//! two graphs, restricted to the shared signature.

use std::collections::BTreeSet;

use kgalign::fixtures::lymphokine;
use kgalign::reasoner::{base_and_aligned_axioms, deductive_diff};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = lymphokine();
    let sigma: BTreeSet<_> =
        f.source.signature().classes.iter().chain(f.target.signature().classes.iter()).cloned().collect();
    for (name, m) in [("m1 only", f.only_m1()), ("m1 and m2", f.candidates())] {
        let (base, aligned) = base_and_aligned_axioms(&f.source, &f.target, &m)?;
        let diff = deductive_diff(&base, &aligned, &sigma);
        println!("{name}: {} new statements", diff.len());
        for s in diff {
            println!("  {s}");
        }
    }
    Ok(())
}
