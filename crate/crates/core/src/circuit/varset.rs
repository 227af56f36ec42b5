use std::fmt;

use crate::lit::Var;

/// A set of variables stored as a bitset indexed by variable number.
#[derive(Clone, Default)]
pub struct VarSet {
    words: Vec<u64>,
}

impl VarSet {
    pub fn new() -> VarSet {
        VarSet::default()
    }

    pub fn singleton(v: Var) -> VarSet {
        let mut s = VarSet::new();
        s.insert(v);
        s
    }

    /// The set `{1, …, n}`.
    pub fn range(n: u32) -> VarSet {
        (1..=n).collect()
    }

    pub fn insert(&mut self, v: Var) {
        let (w, b) = (v as usize / 64, v as usize % 64);
        if self.words.len() <= w {
            self.words.resize(w + 1, 0);
        }
        self.words[w] |= 1 << b;
    }

    pub fn contains(&self, v: Var) -> bool {
        let (w, b) = (v as usize / 64, v as usize % 64);
        self.words.get(w).is_some_and(|x| x & (1 << b) != 0)
    }

    pub fn union_with(&mut self, other: &VarSet) {
        if self.words.len() < other.words.len() {
            self.words.resize(other.words.len(), 0);
        }
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Smallest variable in both sets.
    pub fn first_common(&self, other: &VarSet) -> Option<Var> {
        self.words
            .iter()
            .zip(&other.words)
            .enumerate()
            .find_map(|(i, (a, b))| {
                let x = a & b;
                (x != 0).then(|| (i * 64 + x.trailing_zeros() as usize) as Var)
            })
    }

    pub fn is_disjoint(&self, other: &VarSet) -> bool {
        self.first_common(other).is_none()
    }

    /// Smallest variable in exactly one of the two sets.
    pub fn first_difference(&self, other: &VarSet) -> Option<Var> {
        let n = self.words.len().max(other.words.len());
        (0..n).find_map(|i| {
            let a = self.words.get(i).copied().unwrap_or(0);
            let b = other.words.get(i).copied().unwrap_or(0);
            let x = a ^ b;
            (x != 0).then(|| (i * 64 + x.trailing_zeros() as usize) as Var)
        })
    }

    /// Elements of `self` missing from `other`, ascending.
    pub fn difference(&self, other: &VarSet) -> Vec<Var> {
        self.iter().filter(|&v| !other.contains(v)).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = Var> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros();
                w &= w - 1;
                Some((i * 64 + b as usize) as Var)
            })
        })
    }
}

impl PartialEq for VarSet {
    fn eq(&self, other: &VarSet) -> bool {
        self.first_difference(other).is_none()
    }
}

impl Eq for VarSet {}

impl FromIterator<Var> for VarSet {
    fn from_iter<I: IntoIterator<Item = Var>>(iter: I) -> VarSet {
        let mut s = VarSet::new();
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl fmt::Debug for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_operations() {
        let a: VarSet = [1, 5, 70].into_iter().collect();
        let b: VarSet = [5, 70, 2].into_iter().collect();
        assert_eq!(a.first_common(&b), Some(5));
        assert_eq!(a.first_difference(&b), Some(1));
        assert_eq!(a.difference(&b), vec![1]);
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![1, 5, 70]);
        let mut u = a.clone();
        u.union_with(&b);
        assert_eq!(u.len(), 4);
        assert!(VarSet::singleton(3).is_disjoint(&a));
    }

    #[test]
    fn equality_ignores_trailing_words() {
        let mut a = VarSet::singleton(100);
        let b = VarSet::new();
        assert_ne!(a, b);
        a = VarSet::new();
        a.union_with(&VarSet { words: vec![0, 0] });
        assert_eq!(a, b);
        assert!(a.is_empty());
    }
}
