//! Irreducible characters of the symmetric group by the Murnaghan-Nakayama
//! rule, chi^lambda_mu = sum_strips (-1)^{height} chi^{lambdaminusstrip}_{muminusmu_1}.

use std::collections::HashMap;

use crate::error::{Error, Result};

use super::partition::Partition;

/// Memo table for character values. One cache can be shared across many
/// evaluations of the same total size; entries are keyed by (lambda, remaining mu).
#[derive(Default)]
pub struct CharCache {
    memo: HashMap<(Partition, Vec<u32>), i64>,
}

impl CharCache {
    pub fn new() -> Self {
        Self::default()
    }

    fn eval(&mut self, lambda: &Partition, mu: &[u32]) -> i64 {
        if mu.is_empty() {
            return if lambda.is_empty() { 1 } else { 0 };
        }
        let key = (lambda.clone(), mu.to_vec());
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let first = mu[0];
        let rest = &mu[1..];
        let mut total = 0i64;
        for (shrunk, height) in lambda.border_strips(first) {
            let sign = if height % 2 == 0 { 1 } else { -1 };
            total += sign * self.eval(&shrunk, rest);
        }
        self.memo.insert(key, total);
        total
    }

    /// chi^lambda_mu. Errors unless |lambda| = |mu|.
    pub fn character(&mut self, lambda: &Partition, mu: &Partition) -> Result<i64> {
        if lambda.size() != mu.size() {
            return Err(Error::CharacterSizeMismatch {
                lambda_size: lambda.size(),
                mu_size: mu.size(),
            });
        }
        Ok(self.eval(lambda, mu.parts()))
    }
}

/// One-shot chi^lambda_mu with a private cache.
pub fn character(lambda: &Partition, mu: &Partition) -> Result<i64> {
    CharCache::new().character(lambda, mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Rat;
    use crate::symmfunc::partition::partitions_of;
    use num_traits::Zero;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec())
    }

    #[test]
    fn trivial_representation() {
        for mu in partitions_of(6) {
            assert_eq!(character(&p(&[6]), &mu).unwrap(), 1);
        }
    }

    #[test]
    fn hand_values() {
        assert_eq!(character(&p(&[1, 1]), &p(&[2])).unwrap(), -1);
        assert_eq!(character(&p(&[2]), &p(&[1, 1])).unwrap(), 1);
        assert_eq!(character(&p(&[2, 1]), &p(&[3])).unwrap(), -1);
        assert_eq!(character(&p(&[2, 1]), &p(&[1, 1, 1])).unwrap(), 2);
        assert_eq!(character(&p(&[2, 1]), &p(&[2, 1])).unwrap(), 0);
    }

    #[test]
    fn sign_representation() {
        // chi^{(1^n)}_mu = sign of the class = (-1)^{n - l(mu)}.
        for n in 1..=7u32 {
            let sign_rep = Partition::new(vec![1; n as usize]);
            for mu in partitions_of(n) {
                let expect = if (n as usize - mu.length()) % 2 == 0 { 1 } else { -1 };
                assert_eq!(character(&sign_rep, &mu).unwrap(), expect);
            }
        }
    }

    #[test]
    fn size_mismatch_is_an_error() {
        assert!(character(&p(&[2]), &p(&[3])).is_err());
    }

    #[test]
    fn orthogonality_of_rows() {
        // sum_mu chi^lambda_mu chi^{lambda'}_mu / z_mu = delta_{lambda,lambda'} for |lambda| = |lambda'| <= 6.
        for n in 1..=6u32 {
            let parts = partitions_of(n);
            let mut cache = CharCache::new();
            for a in &parts {
                for b in &parts {
                    let mut sum = Rat::zero();
                    for mu in &parts {
                        let ca = cache.character(a, mu).unwrap();
                        let cb = cache.character(b, mu).unwrap();
                        sum += Rat::new((ca * cb).into(), mu.z_aut());
                    }
                    let expect = if a == b { Rat::from_integer(1.into()) } else { Rat::zero() };
                    assert_eq!(sum, expect, "orthogonality failed at {a}, {b}");
                }
            }
        }
    }
}
