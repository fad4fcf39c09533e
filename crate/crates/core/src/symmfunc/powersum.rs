//! Symmetric functions expanded in the power-sum basis {p_lambda}, and the two
//! routes from Schur functions into that basis:
//!
//! - the character route  s_mu = sum_lambda (chi^mu_lambda / z_lambda) p_lambda,
//! - the Jacobi-Trudi route through hooks, s_{(m|n)} = sum_i (-1)^i h_{m+1+i} e_{n-i}
//!   and s_lambda = det(s_{(m_i|n_j)}).
//!
//! The h_n and e_n expansions come from the Newton recurrences
//! n*h_n = sum p_k h_{n-k} and n*e_n = sum (-1)^{k-1} p_k e_{n-k}, i.e. from the
//! generating series exp(sum p_k x^k / k).

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::rational::{rat_int, Rat};

use super::character::CharCache;
use super::partition::{partitions_of, Partition};

/// A finite linear combination of power-sum monomials p_lambda with exact
/// rational coefficients. No zero coefficients are stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct PowerSumPolynomial {
    terms: BTreeMap<Partition, Rat>,
}

impl PowerSumPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        let mut t = BTreeMap::new();
        t.insert(Partition::empty(), rat_int(1));
        PowerSumPolynomial { terms: t }
    }

    /// The single monomial p_n.
    pub fn p(n: u32) -> Self {
        assert!(n >= 1);
        let mut t = BTreeMap::new();
        t.insert(Partition::new(vec![n]), rat_int(1));
        PowerSumPolynomial { terms: t }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &Rat)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, lambda: &Partition) -> Rat {
        self.terms.get(lambda).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, lambda: Partition, c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(lambda);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (lam, c) in &other.terms {
            out.add_term(lam.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        PowerSumPolynomial {
            terms: self.terms.iter().map(|(l, v)| (l.clone(), v * c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&rat_int(-1)))
    }

    /// Product: p_lambda * p_nu = p_{lambdaornu} (merge of parts).
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let mut parts: Vec<u32> = a.parts().iter().chain(b.parts()).copied().collect();
                parts.sort_unstable_by(|x, y| y.cmp(x));
                out.add_term(Partition::new(parts), ca * cb);
            }
        }
        out
    }
}

impl fmt::Debug for PowerSumPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (lam, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}*p{lam}")?;
        }
        Ok(())
    }
}

/// s_mu in the power-sum basis by the character route.
pub fn schur_in_powersums(mu: &Partition) -> PowerSumPolynomial {
    let mut cache = CharCache::new();
    schur_in_powersums_cached(mu, &mut cache)
}

/// Character route with a shared cache (cheaper across many mu of one size).
pub fn schur_in_powersums_cached(mu: &Partition, cache: &mut CharCache) -> PowerSumPolynomial {
    let n = mu.size() as u32;
    let mut out = PowerSumPolynomial::zero();
    for lam in partitions_of(n) {
        let chi = cache.character(mu, &lam).expect("sizes match by construction");
        if chi != 0 {
            out.add_term(lam.clone(), Rat::new(chi.into(), lam.z_aut()));
        }
    }
    out
}

/// h_0..h_n in the power-sum basis via n*h_n = sum_{k=1}^n p_k h_{n-k}.
pub fn homogeneous_in_powersums(n: u32) -> Vec<PowerSumPolynomial> {
    let mut h = vec![PowerSumPolynomial::one()];
    for d in 1..=n {
        let mut acc = PowerSumPolynomial::zero();
        for k in 1..=d {
            acc = acc.add(&PowerSumPolynomial::p(k).mul(&h[(d - k) as usize]));
        }
        h.push(acc.scale(&Rat::new(1.into(), (d as i64).into())));
    }
    h
}

/// e_0..e_n via n*e_n = sum_{k=1}^n (-1)^{k-1} p_k e_{n-k}.
pub fn elementary_in_powersums(n: u32) -> Vec<PowerSumPolynomial> {
    let mut e = vec![PowerSumPolynomial::one()];
    for d in 1..=n {
        let mut acc = PowerSumPolynomial::zero();
        for k in 1..=d {
            let sign = if k % 2 == 1 { 1 } else { -1 };
            acc = acc.add(&PowerSumPolynomial::p(k).mul(&e[(d - k) as usize]).scale(&rat_int(sign)));
        }
        e.push(acc.scale(&Rat::new(1.into(), (d as i64).into())));
    }
    e
}

/// s_mu through hooks and the Giambelli determinant; the independent
/// cross-check for `schur_in_powersums`.
pub fn schur_in_powersums_jacobi_trudi(mu: &Partition) -> PowerSumPolynomial {
    if mu.is_empty() {
        return PowerSumPolynomial::one();
    }
    let frob = mu.frobenius();
    let k = frob.rank();
    let max_h = (frob.arms[0] + frob.legs[0] + 1) as u32;
    let h = homogeneous_in_powersums(max_h);
    let e = elementary_in_powersums(max_h);
    let hook = |m: u64, n: u64| -> PowerSumPolynomial {
        // s_{(m|n)} = h_{m+1} e_n - h_{m+2} e_{n-1} + ... + (-1)^n h_{m+n+1}.
        let mut acc = PowerSumPolynomial::zero();
        for i in 0..=n {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            let term = h[(m + 1 + i) as usize].mul(&e[(n - i) as usize]).scale(&rat_int(sign));
            acc = acc.add(&term);
        }
        acc
    };
    let entries: Vec<Vec<PowerSumPolynomial>> = (0..k)
        .map(|i| (0..k).map(|j| hook(frob.arms[i], frob.legs[j])).collect())
        .collect();
    poly_determinant(&entries)
}

/// Laplace-expansion determinant over PowerSumPolynomial entries (the
/// matrices here have rank at most ~4).
fn poly_determinant(m: &[Vec<PowerSumPolynomial>]) -> PowerSumPolynomial {
    let n = m.len();
    if n == 0 {
        return PowerSumPolynomial::one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = PowerSumPolynomial::zero();
    for j in 0..n {
        let minor: Vec<Vec<PowerSumPolynomial>> = (1..n)
            .map(|r| (0..n).filter(|&c| c != j).map(|c| m[r][c].clone()).collect())
            .collect();
        let sign = if j % 2 == 0 { 1 } else { -1 };
        acc = acc.add(&m[0][j].mul(&poly_determinant(&minor)).scale(&rat_int(sign)));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::symmfunc::partition::partitions_up_to;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec())
    }

    #[test]
    fn small_schur_expansions() {
        let s1 = schur_in_powersums(&p(&[1]));
        assert_eq!(s1.coefficient(&p(&[1])), rat(1, 1));

        let s2 = schur_in_powersums(&p(&[2]));
        assert_eq!(s2.coefficient(&p(&[1, 1])), rat(1, 2));
        assert_eq!(s2.coefficient(&p(&[2])), rat(1, 2));

        let s11 = schur_in_powersums(&p(&[1, 1]));
        assert_eq!(s11.coefficient(&p(&[1, 1])), rat(1, 2));
        assert_eq!(s11.coefficient(&p(&[2])), rat(-1, 2));
    }

    #[test]
    fn newton_h_and_e() {
        let h = homogeneous_in_powersums(3);
        // h_2 = p_1^2/2 + p_2/2, h_3 = p_1^3/6 + p_1 p_2 / 2 + p_3/3.
        assert_eq!(h[2].coefficient(&p(&[1, 1])), rat(1, 2));
        assert_eq!(h[2].coefficient(&p(&[2])), rat(1, 2));
        assert_eq!(h[3].coefficient(&p(&[1, 1, 1])), rat(1, 6));
        assert_eq!(h[3].coefficient(&p(&[2, 1])), rat(1, 2));
        assert_eq!(h[3].coefficient(&p(&[3])), rat(1, 3));
        let e = elementary_in_powersums(2);
        assert_eq!(e[2].coefficient(&p(&[1, 1])), rat(1, 2));
        assert_eq!(e[2].coefficient(&p(&[2])), rat(-1, 2));
    }

    #[test]
    fn character_route_matches_jacobi_trudi() {
        for mu in partitions_up_to(8) {
            let a = schur_in_powersums(&mu);
            let b = schur_in_powersums_jacobi_trudi(&mu);
            assert_eq!(a, b, "routes disagree for {mu}");
        }
    }
}
