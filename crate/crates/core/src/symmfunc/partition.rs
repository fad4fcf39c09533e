//! Partitions, Young-diagram transposition, and Frobenius notation.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use serde::{Deserialize, Serialize};

/// A partition: weakly decreasing sequence of positive integers. The empty
/// partition is a first-class value (it indexes s_empty = 1).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Build from parts; they must be positive and weakly decreasing.
    pub fn new(parts: Vec<u32>) -> Self {
        assert!(
            parts.windows(2).all(|w| w[0] >= w[1]) && parts.iter().all(|&p| p > 0),
            "parts must be weakly decreasing and positive: {parts:?}"
        );
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// |lambda| = sum of parts.
    pub fn size(&self) -> u64 {
        self.0.iter().map(|&p| p as u64).sum()
    }

    /// l(lambda) = number of parts.
    pub fn length(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// lambda_i with 1-based index, 0 beyond the length.
    pub fn part(&self, i: usize) -> u32 {
        if i >= 1 && i <= self.0.len() {
            self.0[i - 1]
        } else {
            0
        }
    }

    /// lambda^t: column lengths of the Young diagram.
    pub fn transpose(&self) -> Partition {
        if self.0.is_empty() {
            return Partition::empty();
        }
        let cols = self.0[0] as usize;
        let mut t = Vec::with_capacity(cols);
        for j in 1..=cols {
            t.push(self.0.iter().filter(|&&p| p as usize >= j).count() as u32);
        }
        Partition(t)
    }

    /// Frobenius notation (m_1,...,m_k | n_1,...,n_k): arm and leg lengths of
    /// the diagonal boxes, m_i = lambda_i - i, n_i = lambda^t_i - i.
    pub fn frobenius(&self) -> FrobeniusForm {
        let t = self.transpose();
        let mut arms = Vec::new();
        let mut legs = Vec::new();
        let mut i = 1usize;
        while self.part(i) as usize >= i {
            arms.push(self.part(i) as u64 - i as u64);
            legs.push(t.part(i) as u64 - i as u64);
            i += 1;
        }
        FrobeniusForm { arms, legs }
    }

    /// z_lambda = prod i^{k_i} k_i! where k_i is the multiplicity of i in lambda.
    pub fn z_aut(&self) -> BigInt {
        let mut z = BigInt::one();
        let mut i = 0usize;
        while i < self.0.len() {
            let part = self.0[i];
            let mut mult = 0u32;
            while i < self.0.len() && self.0[i] == part {
                mult += 1;
                i += 1;
            }
            z *= BigInt::from(part).pow(mult);
            for k in 2..=mult {
                z *= BigInt::from(k);
            }
        }
        z
    }

    /// Remove a border strip of length `len` ending at... rather: used by the
    /// Murnaghan-Nakayama rule; see `character`. Returns `(shrunk, height)`
    /// for every valid border strip of size `len`.
    pub(crate) fn border_strips(&self, len: u32) -> Vec<(Partition, u32)> {
        // A border strip of size `len` removed from lambda corresponds to a row
        // index r such that removing boxes works out: using the beta-set
        // formulation, lambda_i - i are distinct; removing a strip of size `len`
        // means replacing some lambda_r - r by lambda_r - r - len, provided the result
        // is again a valid (distinct) beta-set. Height = number of rows the
        // strip spans.
        let l = self.0.len();
        let mut out = Vec::new();
        // beta[i] = lambda_{i+1} - (i+1), strictly decreasing.
        let beta: Vec<i64> = (0..l).map(|i| self.0[i] as i64 - (i as i64 + 1)).collect();
        for r in 0..l {
            let target = beta[r] - len as i64;
            // The new value must not collide with another beta value and must
            // stay >= -(length of the new partition); colliding means the
            // strip is not removable at this row.
            if beta.contains(&target) {
                continue;
            }
            // Rebuild the partition from the modified beta-set.
            let mut nb: Vec<i64> = beta.clone();
            nb[r] = target;
            nb.sort_unstable_by(|a, b| b.cmp(a));
            // Height of the strip = number of positions the modified entry
            // moved down = rows spanned - 1.
            let new_pos = nb.iter().position(|&b| b == target).unwrap();
            let height = new_pos as u32 - r as u32;
            let mut parts = Vec::with_capacity(l);
            let mut valid = true;
            for (i, &b) in nb.iter().enumerate() {
                let p = b + (i as i64 + 1);
                if p < 0 {
                    // The strip would eat past the first column.
                    valid = false;
                    break;
                }
                if p > 0 {
                    parts.push(p as u32);
                }
            }
            if !valid {
                continue;
            }
            // Trailing zero rows drop; the prefix stays weakly decreasing.
            out.push((Partition(parts), height));
        }
        out
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// Frobenius form (m_1,...,m_k | n_1,...,n_k) with m_1 > ... > m_k >= 0 and
/// n_1 > ... > n_k >= 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusForm {
    pub arms: Vec<u64>,
    pub legs: Vec<u64>,
}

impl FrobeniusForm {
    pub fn rank(&self) -> usize {
        self.arms.len()
    }

    /// Reconstruct the partition, inverting `Partition::frobenius`.
    pub fn to_partition(&self) -> Partition {
        let k = self.rank();
        if k == 0 {
            return Partition::empty();
        }
        // Row i (1-based, i <= k): lambda_i = m_i + i. Column data give the rows
        // below the diagonal: column j has n_j + j boxes, so row index
        // i > k has lambda_i = #{j : n_j + j >= i}.
        let mut parts: Vec<u32> = Vec::new();
        for i in 1..=k {
            parts.push((self.arms[i - 1] + i as u64) as u32);
        }
        let max_len = self.legs[0] + 1;
        for i in (k as u64 + 1)..=max_len {
            let row = self
                .legs
                .iter()
                .enumerate()
                .filter(|(j, &n)| n + (*j as u64 + 1) >= i)
                .count() as u32;
            if row == 0 {
                break;
            }
            parts.push(row);
        }
        Partition::new(parts)
    }
}

/// All partitions of `n`, in descending lexicographic order. `partitions_of(0)`
/// is the singleton list containing the empty partition.
pub fn partitions_of(n: u32) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(remaining: u32, max_part: u32, current: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition(current.clone()));
            return;
        }
        let top = max_part.min(remaining);
        for p in (1..=top).rev() {
            current.push(p);
            rec(remaining - p, p, current, out);
            current.pop();
        }
    }
    rec(n, n.max(1), &mut current, &mut out);
    out
}

/// All partitions of every size `0..=n`.
pub fn partitions_up_to(n: u32) -> Vec<Partition> {
    (0..=n).flat_map(partitions_of).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec())
    }

    #[test]
    fn transpose_examples() {
        assert_eq!(p(&[4]).transpose(), p(&[1, 1, 1, 1]));
        assert_eq!(p(&[3, 1]).transpose(), p(&[2, 1, 1]));
        assert_eq!(p(&[2, 2]).transpose(), p(&[2, 2]));
        assert_eq!(Partition::empty().transpose(), Partition::empty());
    }

    #[test]
    fn transpose_is_involutive() {
        for lam in partitions_up_to(12) {
            assert_eq!(lam.transpose().transpose(), lam);
            assert_eq!(lam.size(), lam.transpose().size());
        }
    }

    #[test]
    fn frobenius_examples() {
        let f = p(&[1, 1, 1, 1]).frobenius();
        assert_eq!((f.arms.clone(), f.legs.clone()), (vec![0], vec![3]));
        let f = p(&[3, 1]).frobenius();
        assert_eq!((f.arms.clone(), f.legs.clone()), (vec![2], vec![1]));
        let f = Partition::empty().frobenius();
        assert_eq!(f.rank(), 0);
    }

    #[test]
    fn frobenius_roundtrip() {
        for lam in partitions_up_to(12) {
            let f = lam.frobenius();
            assert!(f.arms.windows(2).all(|w| w[0] > w[1]));
            assert!(f.legs.windows(2).all(|w| w[0] > w[1]));
            assert_eq!(f.to_partition(), lam, "roundtrip failed for {lam}");
        }
    }

    #[test]
    fn hook_from_frobenius() {
        // (m|n) is the hook (m+1, 1^n).
        for m in 0..6u64 {
            for n in 0..6u64 {
                let f = FrobeniusForm { arms: vec![m], legs: vec![n] };
                let mut parts = vec![m as u32 + 1];
                parts.extend(std::iter::repeat(1).take(n as usize));
                assert_eq!(f.to_partition(), Partition::new(parts));
            }
        }
    }

    #[test]
    fn z_aut_examples() {
        assert_eq!(p(&[1, 1, 1]).z_aut(), BigInt::from(6));
        assert_eq!(p(&[2, 1]).z_aut(), BigInt::from(2));
        assert_eq!(p(&[2, 2]).z_aut(), BigInt::from(8));
        assert_eq!(Partition::empty().z_aut(), BigInt::from(1));
    }

    #[test]
    fn partition_counts() {
        assert_eq!(partitions_of(0).len(), 1);
        assert_eq!(partitions_of(4).len(), 5);
        assert_eq!(partitions_of(9).len(), 30);
        assert_eq!(partitions_of(12).len(), 77);
    }

    #[test]
    fn z_aut_sums_to_factorial() {
        // sum_{lambda of n} n!/z_lambda = n! * sum 1/z_lambda counts permutations by cycle type.
        use crate::rational::{factorial, Rat};
        use num_traits::Zero;
        for n in 1..=8u32 {
            let mut total = Rat::zero();
            for lam in partitions_of(n) {
                total += Rat::new(factorial(n as u64), lam.z_aut());
            }
            assert_eq!(total, Rat::from_integer(factorial(n as u64)));
        }
    }
}
