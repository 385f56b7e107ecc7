//! Finite multisets over an ordered key type.
//!
//! Sequent antecedents and the resource bookkeeping of the focused prover are
//! multisets of formulas. The representation maps each key to a multiplicity
//! ≥ 1, so structural equality coincides with multiset equality and iteration
//! follows the key order, which keeps every derived artifact deterministic.

use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Multiset<T: Ord> {
    counts: BTreeMap<T, u32>,
}

impl<T: Ord> Multiset<T> {
    pub fn new() -> Self {
        Multiset { counts: BTreeMap::new() }
    }

    pub fn singleton(item: T) -> Self {
        let mut m = Multiset::new();
        m.insert(item);
        m
    }

    /// Multiplicity of `item` (0 when absent).
    pub fn count(&self, item: &T) -> u32 {
        self.counts.get(item).copied().unwrap_or(0)
    }

    pub fn contains(&self, item: &T) -> bool {
        self.counts.contains_key(item)
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Total number of occurrences (with multiplicity).
    pub fn total(&self) -> u64 {
        self.counts.values().map(|&n| u64::from(n)).sum()
    }

    /// Number of distinct elements.
    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    pub fn insert(&mut self, item: T) {
        *self.counts.entry(item).or_insert(0) += 1;
    }

    pub fn insert_n(&mut self, item: T, n: u32) {
        if n > 0 {
            *self.counts.entry(item).or_insert(0) += n;
        }
    }

    /// Removes one occurrence; returns false (and leaves the multiset
    /// unchanged) when `item` is absent.
    pub fn remove_one(&mut self, item: &T) -> bool {
        match self.counts.get_mut(item) {
            None => false,
            Some(n) if *n > 1 => {
                *n -= 1;
                true
            }
            Some(_) => {
                self.counts.remove(item);
                true
            }
        }
    }

    /// Iterates over `(element, multiplicity)` pairs in key order.
    pub fn iter(&self) -> impl Iterator<Item = (&T, u32)> {
        self.counts.iter().map(|(k, &n)| (k, n))
    }

    /// Iterates over each occurrence (elements repeated by multiplicity).
    pub fn occurrences(&self) -> impl Iterator<Item = &T> {
        self.counts
            .iter()
            .flat_map(|(k, &n)| std::iter::repeat(k).take(n as usize))
    }

    /// The support: distinct elements in key order.
    pub fn support(&self) -> impl Iterator<Item = &T> {
        self.counts.keys()
    }

    /// Componentwise ≤.
    pub fn is_subset(&self, other: &Self) -> bool {
        self.counts.iter().all(|(k, &n)| n <= other.count(k))
    }

    pub fn same_support(&self, other: &Self) -> bool {
        self.counts.len() == other.counts.len()
            && self.counts.keys().zip(other.counts.keys()).all(|(a, b)| a == b)
    }
}

impl<T: Ord + Clone> Multiset<T> {
    pub fn from_slice(items: &[T]) -> Self {
        items.iter().cloned().collect()
    }

    /// Additive union.
    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, n) in other.iter() {
            out.insert_n(k.clone(), n);
        }
        out
    }

    pub fn plus_item(&self, item: &T) -> Self {
        let mut out = self.clone();
        out.insert(item.clone());
        out
    }

    /// Removes one occurrence, or `None` when absent.
    pub fn minus_item(&self, item: &T) -> Option<Self> {
        let mut out = self.clone();
        if out.remove_one(item) {
            Some(out)
        } else {
            None
        }
    }

    /// Exact difference, or `None` when `other` is not a submultiset.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        let mut out = self.clone();
        for (k, n) in other.iter() {
            let have = out.count(k);
            if have < n {
                return None;
            }
            if have == n {
                out.counts.remove(k);
            } else {
                *out.counts.get_mut(k).unwrap() = have - n;
            }
        }
        Some(out)
    }

    /// Componentwise difference clamped at zero.
    pub fn saturating_sub(&self, other: &Self) -> Self {
        let mut out = Multiset::new();
        for (k, n) in self.iter() {
            let deduct = other.count(k);
            if n > deduct {
                out.insert_n(k.clone(), n - deduct);
            }
        }
        out
    }

    pub fn pointwise_min(&self, other: &Self) -> Self {
        let mut out = Multiset::new();
        for (k, n) in self.iter() {
            let m = n.min(other.count(k));
            if m > 0 {
                out.insert_n(k.clone(), m);
            }
        }
        out
    }

    pub fn pointwise_max(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, n) in other.iter() {
            let have = out.count(k);
            if n > have {
                out.insert_n(k.clone(), n - have);
            }
        }
        out
    }

    /// One occurrence of every element in the support.
    pub fn support_ones(&self) -> Self {
        let mut out = Multiset::new();
        for k in self.support() {
            out.insert(k.clone());
        }
        out
    }
}

impl<T: Ord> FromIterator<T> for Multiset<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut m = Multiset::new();
        for item in iter {
            m.insert(item);
        }
        m
    }
}

impl<T: Ord> Extend<T> for Multiset<T> {
    fn extend<I: IntoIterator<Item = T>>(&mut self, iter: I) {
        for item in iter {
            self.insert(item);
        }
    }
}

impl<T: Ord + fmt::Debug> fmt::Debug for Multiset<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.counts.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_round_trips() {
        let a: Multiset<&str> = ["x", "y", "x"].into_iter().collect();
        let b: Multiset<&str> = ["x", "z"].into_iter().collect();
        assert_eq!(a.count(&"x"), 2);
        assert_eq!(a.total(), 3);
        assert_eq!(a.distinct(), 2);

        let sum = a.plus(&b);
        assert_eq!(sum.count(&"x"), 3);
        assert_eq!(sum.checked_sub(&b), Some(a.clone()));
        assert_eq!(sum.checked_sub(&sum), Some(Multiset::new()));
        assert_eq!(a.checked_sub(&b), None);
        assert!(a.is_subset(&sum));
        assert!(!sum.is_subset(&a));
    }

    #[test]
    fn removal_preserves_invariants() {
        let mut m: Multiset<u32> = [1, 1, 2].into_iter().collect();
        assert!(m.remove_one(&1));
        assert_eq!(m.count(&1), 1);
        assert!(m.remove_one(&1));
        assert!(!m.contains(&1));
        assert!(!m.remove_one(&1));
        assert_eq!(m.total(), 1);
    }

    #[test]
    fn support_and_clamping() {
        let a: Multiset<u32> = [1, 1, 1, 2].into_iter().collect();
        let b: Multiset<u32> = [1, 2, 2].into_iter().collect();
        assert!(a.same_support(&b));
        assert_eq!(a.saturating_sub(&b).count(&1), 2);
        assert_eq!(a.saturating_sub(&b).count(&2), 0);
        assert_eq!(a.pointwise_min(&b).count(&1), 1);
        assert_eq!(a.pointwise_max(&b).count(&2), 2);
        assert_eq!(a.support_ones().total(), 2);
    }
}
