use itertools::Itertools;

use crate::{Error, Result};

/// Largest moment order the permutation layer will enumerate (6! = 720 Gram
/// rows; the experiments use k <= 5).
pub const PERMUTATION_ORDER_CAP: usize = 6;

/// Element of S_k with its cycle count fixed at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    mapping: Vec<usize>,
    cycle_count: usize,
}

impl Permutation {
    /// Validates that `mapping` is a bijection on 0..k.
    pub fn new(mapping: Vec<usize>) -> Result<Self> {
        let k = mapping.len();
        let mut seen = vec![false; k];
        for &m in &mapping {
            if m >= k || seen[m] {
                return Err(Error::NotABijection { mapping, k });
            }
            seen[m] = true;
        }
        let cycle_count = count_cycles(&mapping);
        Ok(Self { mapping, cycle_count })
    }

    pub fn identity(k: usize) -> Self {
        Self {
            mapping: (0..k).collect(),
            cycle_count: k,
        }
    }

    /// Transposition of two slots.
    pub fn swap(k: usize, a: usize, b: usize) -> Self {
        let mut mapping: Vec<usize> = (0..k).collect();
        mapping.swap(a, b);
        Self::new(mapping).expect("swap of valid slots is a bijection")
    }

    pub fn order(&self) -> usize {
        self.mapping.len()
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    pub fn cycle_count(&self) -> usize {
        self.cycle_count
    }

    pub fn apply(&self, slot: usize) -> usize {
        self.mapping[slot]
    }

    pub fn inverse(&self) -> Self {
        let k = self.mapping.len();
        let mut inv = vec![0usize; k];
        for (i, &m) in self.mapping.iter().enumerate() {
            inv[m] = i;
        }
        Self {
            mapping: inv,
            cycle_count: self.cycle_count,
        }
    }

    /// Function composition: (self . other)(x) = self(other(x)).
    pub fn compose(&self, other: &Self) -> Self {
        debug_assert_eq!(self.order(), other.order());
        let mapping: Vec<usize> = (0..self.order()).map(|x| self.apply(other.apply(x))).collect();
        let cycle_count = count_cycles(&mapping);
        Self { mapping, cycle_count }
    }
}

fn count_cycles(mapping: &[usize]) -> usize {
    let mut visited = vec![false; mapping.len()];
    let mut cycles = 0;
    for start in 0..mapping.len() {
        if visited[start] {
            continue;
        }
        cycles += 1;
        let mut cur = start;
        while !visited[cur] {
            visited[cur] = true;
            cur = mapping[cur];
        }
    }
    cycles
}

/// All k! permutations in lexicographic order of their mapping arrays.
pub fn enumerate_permutations(k: usize) -> Result<Vec<Permutation>> {
    if k == 0 || k > PERMUTATION_ORDER_CAP {
        return Err(Error::OrderCap {
            k,
            cap: PERMUTATION_ORDER_CAP,
        });
    }
    Ok((0..k)
        .permutations(k)
        .map(|mapping| {
            let cycle_count = count_cycles(&mapping);
            Permutation { mapping, cycle_count }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_counts() {
        assert_eq!(Permutation::identity(4).cycle_count(), 4);
        assert_eq!(Permutation::swap(3, 0, 2).cycle_count(), 2);
        // 3-cycle 0 -> 1 -> 2 -> 0
        assert_eq!(Permutation::new(vec![1, 2, 0]).unwrap().cycle_count(), 1);
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::new(vec![0, 0, 1]).is_err());
        assert!(Permutation::new(vec![0, 3]).is_err());
    }

    #[test]
    fn compose_and_inverse() {
        let p = Permutation::new(vec![1, 2, 0]).unwrap();
        let q = p.inverse();
        assert_eq!(p.compose(&q), Permutation::identity(3));
        assert_eq!(q.compose(&p), Permutation::identity(3));
        // (p . p)(0) = p(p(0)) = p(1) = 2
        assert_eq!(p.compose(&p).apply(0), 2);
    }

    #[test]
    fn enumeration_is_lexicographic_and_complete() {
        let perms = enumerate_permutations(3).unwrap();
        assert_eq!(perms.len(), 6);
        assert_eq!(perms[0].mapping(), &[0, 1, 2]);
        assert_eq!(perms[1].mapping(), &[0, 2, 1]);
        assert_eq!(perms[5].mapping(), &[2, 1, 0]);
        assert!(enumerate_permutations(7).is_err());
    }
}
