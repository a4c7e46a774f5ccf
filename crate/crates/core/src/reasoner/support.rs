//! Support sets (which mappings a derivation depends on) and minimal
//! antichains of them.

/// A sorted, duplicate-free set of mapping indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct Support(Vec<u32>);

impl Support {
    pub fn empty() -> Self {
        Support(Vec::new())
    }

    pub fn single(i: u32) -> Self {
        Support(vec![i])
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }

    pub fn union(&self, other: &Support) -> Support {
        if other.0.is_empty() {
            return self.clone();
        }
        if self.0.is_empty() {
            return other.clone();
        }
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Support(out)
    }

    pub fn is_subset(&self, other: &Support) -> bool {
        if self.0.len() > other.0.len() {
            return false;
        }
        let mut it = other.0.iter();
        self.0.iter().all(|x| it.by_ref().any(|y| y == x))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Insert {
    Added,
    /// An existing member is a subset of the candidate.
    Dominated,
    /// The antichain is full.
    Capped,
}

/// Set of supports in which no member is a subset of another.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub(crate) struct Antichain(Vec<Support>);

impl Antichain {
    pub fn new() -> Self {
        Antichain(Vec::new())
    }

    pub fn members(&self) -> &[Support] {
        &self.0
    }

    pub fn contains(&self, s: &Support) -> bool {
        self.0.contains(s)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn insert(&mut self, s: Support, cap: usize) -> Insert {
        if self.0.iter().any(|m| m.is_subset(&s)) {
            return Insert::Dominated;
        }
        self.0.retain(|m| !s.is_subset(m));
        if self.0.len() >= cap {
            return Insert::Capped;
        }
        self.0.push(s);
        Insert::Added
    }

    pub fn sort(&mut self) {
        self.0.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[u32]) -> Support {
        Support(v.to_vec())
    }

    #[test]
    fn union_and_subset() {
        assert_eq!(s(&[1, 3]).union(&s(&[2, 3, 5])), s(&[1, 2, 3, 5]));
        assert!(s(&[]).is_subset(&s(&[1])));
        assert!(s(&[1, 3]).is_subset(&s(&[1, 2, 3])));
        assert!(!s(&[1, 4]).is_subset(&s(&[1, 2, 3])));
    }

    #[test]
    fn antichain_keeps_minimal_sets() {
        let mut a = Antichain::new();
        assert_eq!(a.insert(s(&[1, 2]), 16), Insert::Added);
        assert_eq!(a.insert(s(&[1, 2, 3]), 16), Insert::Dominated);
        assert_eq!(a.insert(s(&[3]), 16), Insert::Added);
        assert_eq!(a.insert(s(&[1]), 16), Insert::Added);
        a.sort();
        assert_eq!(a.members(), &[s(&[1]), s(&[3])]);
        assert_eq!(a.insert(s(&[]), 16), Insert::Added);
        assert_eq!(a.members(), &[s(&[])]);
    }

    #[test]
    fn antichain_cap() {
        let mut a = Antichain::new();
        assert_eq!(a.insert(s(&[1]), 2), Insert::Added);
        assert_eq!(a.insert(s(&[2]), 2), Insert::Added);
        assert_eq!(a.insert(s(&[3]), 2), Insert::Capped);
        // a smaller set replacing a member still fits
        assert_eq!(a.insert(s(&[]), 2), Insert::Added);
    }
}
