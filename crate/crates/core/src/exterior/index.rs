use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

pub const DIM: usize = 6;

/// An increasing multi-index `i₁ < … < i_k` in `1..=6`, stored as a bit mask
/// (bit `i - 1` for index `i`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MultiIndex(u8);

impl MultiIndex {
    pub const EMPTY: MultiIndex = MultiIndex(0);
    pub const TOP: MultiIndex = MultiIndex(0b11_1111);

    pub fn from_mask(mask: u8) -> Result<Self> {
        if mask > Self::TOP.0 {
            return Err(Error::Invalid(format!("mask {mask:#b} exceeds dimension 6")));
        }
        Ok(MultiIndex(mask))
    }

    pub fn single(i: usize) -> Self {
        assert!((1..=DIM).contains(&i), "basis index {i} out of range");
        MultiIndex(1 << (i - 1))
    }

    /// Sort 1-based indices into a multi-index, returning the permutation sign;
    /// `None` when an index repeats.
    pub fn from_indices(idx: &[usize]) -> Result<Option<(i32, MultiIndex)>> {
        let mut mask = 0u8;
        let mut sign = 1;
        for (k, &i) in idx.iter().enumerate() {
            if !(1..=DIM).contains(&i) {
                return Err(Error::Invalid(format!("basis index {i} out of range 1..6")));
            }
            let bit = 1u8 << (i - 1);
            if mask & bit != 0 {
                return Ok(None);
            }
            mask |= bit;
            if idx[..k].iter().filter(|&&j| j > i).count() % 2 == 1 {
                sign = -sign;
            }
        }
        Ok(Some((sign, MultiIndex(mask))))
    }

    pub fn mask(self) -> u8 {
        self.0
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << (i - 1)) != 0
    }

    pub fn indices(self) -> Vec<usize> {
        (1..=DIM).filter(|&i| self.contains(i)).collect()
    }

    /// All multi-indices of degree `k` in lexicographic order.
    pub fn all_of_degree(k: usize) -> Vec<MultiIndex> {
        let mut v: Vec<MultiIndex> =
            (0u8..64).map(MultiIndex).filter(|m| m.degree() == k).collect();
        v.sort();
        v
    }

    /// Sign of `e^I ∧ e^J` relative to `e^{I∪J}`; zero when they overlap.
    pub fn wedge_sign(self, other: MultiIndex) -> i32 {
        if self.0 & other.0 != 0 {
            return 0;
        }
        let mut inversions = 0;
        for i in self.indices() {
            inversions += other.indices().iter().filter(|&&j| j < i).count();
        }
        if inversions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn union(self, other: MultiIndex) -> MultiIndex {
        MultiIndex(self.0 | other.0)
    }

    /// Remove index `i`; the sign is `(-1)^{position of i}`.
    pub fn remove(self, i: usize) -> Option<(i32, MultiIndex)> {
        if !self.contains(i) {
            return None;
        }
        let pos = self.indices().iter().position(|&j| j == i).expect("present");
        Some((if pos % 2 == 0 { 1 } else { -1 }, MultiIndex(self.0 & !(1 << (i - 1)))))
    }

    pub fn complement(self) -> MultiIndex {
        MultiIndex(Self::TOP.0 & !self.0)
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.indices().cmp(&other.indices()))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return f.write_str("1");
        }
        f.write_str("e")?;
        for i in self.indices() {
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(idx: &[usize]) -> MultiIndex {
        MultiIndex::from_indices(idx).unwrap().unwrap().1
    }

    #[test]
    fn sorting_signs() {
        assert_eq!(MultiIndex::from_indices(&[2, 1]).unwrap(), Some((-1, mi(&[1, 2]))));
        assert_eq!(MultiIndex::from_indices(&[3, 1, 2]).unwrap(), Some((1, mi(&[1, 2, 3]))));
        assert_eq!(MultiIndex::from_indices(&[1, 1]).unwrap(), None);
        assert!(MultiIndex::from_indices(&[7]).is_err());
    }

    #[test]
    fn wedge_signs() {
        assert_eq!(mi(&[1, 3]).wedge_sign(mi(&[5])), 1);
        assert_eq!(mi(&[2]).wedge_sign(mi(&[1])), -1);
        assert_eq!(mi(&[1, 2]).wedge_sign(mi(&[2, 3])), 0);
        assert_eq!(mi(&[3, 4]).wedge_sign(mi(&[1, 2])), 1);
    }

    #[test]
    fn ordering_and_display() {
        let all = MultiIndex::all_of_degree(3);
        assert_eq!(all.len(), 20);
        assert_eq!(all[0].to_string(), "e123");
        assert_eq!(all[1].to_string(), "e124");
        assert_eq!(all[19].to_string(), "e456");
        assert_eq!(mi(&[1, 3, 5]).remove(3), Some((-1, mi(&[1, 5]))));
    }
}
