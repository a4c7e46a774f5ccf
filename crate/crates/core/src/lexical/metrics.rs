//! String similarity metrics, all mapping into [0, 1] with 1 for equal
//! inputs. Strings are compared as sequences of Unicode scalar values.

use std::collections::BTreeSet;

use super::NormalizedName;

/// Edit distance with unit insert/delete/substitute costs.
pub fn levenshtein_distance(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    if a.is_empty() {
        return b.len();
    }
    let mut row: Vec<usize> = (0..=b.len()).collect();
    for (i, ca) in a.iter().enumerate() {
        let mut diag = row[0];
        row[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let above = row[j + 1];
            row[j + 1] = if ca == cb { diag } else { 1 + diag.min(above).min(row[j]) };
            diag = above;
        }
    }
    row[b.len()]
}

/// `1 - d(a, b) / max(|a|, |b|)`, and 1 when both are empty.
pub fn levenshtein_sim(a: &str, b: &str) -> f64 {
    let longest = a.chars().count().max(b.chars().count());
    if longest == 0 {
        return 1.0;
    }
    1.0 - levenshtein_distance(a, b) as f64 / longest as f64
}

pub fn jaro_sim(a: &str, b: &str) -> f64 {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    if a.is_empty() && b.is_empty() {
        return 1.0;
    }
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    let window = (a.len().max(b.len()) / 2).saturating_sub(1);
    let mut a_matched = vec![false; a.len()];
    let mut b_matched = vec![false; b.len()];
    let mut matches = 0usize;
    for (i, ca) in a.iter().enumerate() {
        let lo = i.saturating_sub(window);
        let hi = (i + window + 1).min(b.len());
        for j in lo..hi {
            if !b_matched[j] && b[j] == *ca {
                a_matched[i] = true;
                b_matched[j] = true;
                matches += 1;
                break;
            }
        }
    }
    if matches == 0 {
        return 0.0;
    }
    let a_seq = a.iter().zip(&a_matched).filter(|(_, m)| **m).map(|(c, _)| c);
    let b_seq = b.iter().zip(&b_matched).filter(|(_, m)| **m).map(|(c, _)| c);
    let half_transpositions = a_seq.zip(b_seq).filter(|(x, y)| x != y).count() / 2;
    let m = matches as f64;
    (m / a.len() as f64 + m / b.len() as f64 + (m - half_transpositions as f64) / m) / 3.0
}

/// Jaro similarity with the Winkler common-prefix boost (scale 0.1, prefix
/// capped at 4 characters).
pub fn jaro_winkler_sim(a: &str, b: &str) -> f64 {
    let jaro = jaro_sim(a, b);
    let prefix = a.chars().zip(b.chars()).take(4).take_while(|(x, y)| x == y).count();
    (jaro + 0.1 * prefix as f64 * (1.0 - jaro)).clamp(0.0, 1.0)
}

/// Token-set Jaccard index, 1 when both token sets are empty.
pub fn jaccard_sim(a: &NormalizedName, b: &NormalizedName) -> f64 {
    let sa: BTreeSet<&str> = a.tokens.iter().map(String::as_str).collect();
    let sb: BTreeSet<&str> = b.tokens.iter().map(String::as_str).collect();
    let union = sa.union(&sb).count();
    if union == 0 {
        return 1.0;
    }
    sa.intersection(&sb).count() as f64 / union as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexical::normalize;
    use proptest::prelude::*;

    #[test]
    fn levenshtein_examples() {
        assert!((levenshtein_sim("kitten", "sitting") - (1.0 - 3.0 / 7.0)).abs() < 1e-12);
        assert_eq!(levenshtein_sim("protein", "protein"), 1.0);
        assert_eq!(levenshtein_sim("", "abc"), 0.0);
        assert_eq!(levenshtein_sim("", ""), 1.0);
        assert_eq!(levenshtein_distance("lymphokine", "therapeutic lymphokine"), 12);
    }

    #[test]
    fn jaro_winkler_examples() {
        assert!((jaro_winkler_sim("martha", "marhta") - 0.961111).abs() < 1e-6);
        assert_eq!(jaro_winkler_sim("protein", "protein"), 1.0);
        assert_eq!(jaro_winkler_sim("abc", "xyz"), 0.0);
        assert_eq!(jaro_winkler_sim("", ""), 1.0);
        assert_eq!(jaro_winkler_sim("a", ""), 0.0);
    }

    #[test]
    fn jaccard_examples() {
        let n = |s: &str| normalize(s);
        assert_eq!(jaccard_sim(&n("Lymphokine"), &n("Therapeutic_Lymphokine")), 0.5);
        assert!((jaccard_sim(&n("a b"), &n("b c")) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(jaccard_sim(&n("a"), &n("a")), 1.0);
        assert_eq!(jaccard_sim(&n(""), &n("")), 1.0);
    }

    proptest! {
        #[test]
        fn metrics_are_symmetric_bounded_and_reflexive(a in "[a-d ]{0,12}", b in "[a-d ]{0,12}") {
            for f in [levenshtein_sim, jaro_winkler_sim] {
                let ab = f(&a, &b);
                prop_assert!((0.0..=1.0).contains(&ab));
                prop_assert!((ab - f(&b, &a)).abs() < 1e-12);
                prop_assert_eq!(f(&a, &a), 1.0);
            }
            let (na, nb) = (normalize(&a), normalize(&b));
            let j = jaccard_sim(&na, &nb);
            prop_assert!((0.0..=1.0).contains(&j));
            prop_assert_eq!(j, jaccard_sim(&nb, &na));
            prop_assert_eq!(jaccard_sim(&na, &na), 1.0);
        }
    }
}
