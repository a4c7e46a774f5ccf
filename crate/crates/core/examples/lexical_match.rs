//! Scores a few label pairs with each metric, then runs the matcher on two
//! tiny graphs with and without shared-token blocking.

use kgalign::lexical::{
    generate_candidates, jaccard_sim, jaro_winkler_sim, levenshtein_sim, normalize, Blocking, MatcherConfig,
};
use kgalign::{EntityKind, Iri, KnowledgeGraph, Label};

fn graph(name: &str, ns: &str, labels: &[&str]) -> kgalign::Result<KnowledgeGraph> {
    let mut b = KnowledgeGraph::builder(name);
    for (i, l) in labels.iter().enumerate() {
        b.declare(Iri::new(format!("{ns}{i}"))?, EntityKind::Class)?.add_label(Label::new(*l));
    }
    b.build()
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let pairs = [
        ("TherapeuticLymphokine", "Therapeutic_Lymphokine"),
        ("Heart valve", "valve of heart"),
        ("HTTPServer", "http server"),
        ("Martha", "Marhta"),
    ];
    println!("{:<24} {:<24} {:>6} {:>6} {:>6}", "a", "b", "lev", "jw", "jac");
    for (a, b) in pairs {
        let (na, nb) = (normalize(a), normalize(b));
        println!(
            "{a:<24} {b:<24} {:>6.3} {:>6.3} {:>6.3}",
            levenshtein_sim(&na.joined, &nb.joined),
            jaro_winkler_sim(&na.joined, &nb.joined),
            jaccard_sim(&na, &nb)
        );
    }

    let kg1 = graph("left", "urn:left:", &["Heart valve", "Aorta", "Cardiac muscle"])?;
    let kg2 = graph("right", "urn:right:", &["valve of heart", "Aortae", "heart muscle", "Nerve"])?;
    for blocking in [Blocking::None, Blocking::SharedToken] {
        let cfg = MatcherConfig { blocking, ..MatcherConfig::default() };
        let found = generate_candidates(&kg1, &kg2, &cfg)?;
        println!("\nblocking {blocking}: {} candidates", found.len());
        for m in found.iter() {
            println!("  {} = {}  {:.3}", m.source, m.target, m.confidence());
        }
    }
    Ok(())
}
