//! The tau-function as a Schur-function sum and as a truncated weighted
//! polynomial in time variables, its free energy, and the bosonic verifiers.
//!
//! The Schur coefficient of s_mu with Frobenius form (m_1..m_k | n_1..n_k) is
//! the minor
//!
//!   c_mu = (-1)^{n_1+...+n_k} det( a_{n_i, m_j} )_{1<=i,j<=k},
//!
//! evaluated by exact fraction-free elimination. In time variables T_k
//! (weight k) the tau-function truncates to a weighted polynomial through
//! s_mu = sum_lambda (chi^mu_lambda / z_lambda) p_lambda with p_k = k T_k; the couplings (t_i, s_i)
//! correspond through t_n = (2n+1)!! T_{2n+1}, s_n = 2^{n+1} (n+1)! T_{2n+2}.
//!
//! Verifiers: the Virasoro operators annihilate the truncated tau-function
//! up to the weight the truncation guarantees, and the Hirota bilinear
//! residue vanishes identically in two independent truncated time vectors -
//! a pass is a proof at that truncation weight, not a numerical sample.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{factorial, format_rat, int_pow, odd_double_factorial, rat, rat_int, Rat};
use crate::report::VerificationReport;
use crate::symmfunc::{partitions_up_to, CharCache, Partition};
use crate::wk::CoordTable;

// ----- exact determinants ----------------------------------------------------

/// Determinant by fraction-free (Bareiss) elimination: rows are scaled to
/// integers, the integer determinant is computed division-controlled, and
/// the scaling is divided back out.
pub fn determinant(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    if n == 0 {
        return rat_int(1);
    }
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for row in m {
        assert_eq!(row.len(), n);
        let mut l = BigInt::one();
        for x in row {
            l = l.lcm(x.denom());
        }
        scale *= &l;
        a.push(row.iter().map(|x| x.numer() * (&l / x.denom())).collect());
    }
    // Bareiss: a[i][j] <- (a[i][j]*a[k][k] - a[i][k]*a[k][j]) / prev
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return Rat::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    Rat::new(sign * a[n - 1][n - 1].clone(), scale)
}

// ----- Schur expansion --------------------------------------------------------

/// c_mu for the tau-function of `table`: the Frobenius minor of the affine
/// coordinates. Errors if the table does not cover the needed entries.
pub fn schur_coefficient(mu: &Partition, table: &CoordTable) -> Result<Rat> {
    let f = mu.frobenius();
    let k = f.rank();
    if k == 0 {
        return Ok(rat_int(1));
    }
    let mut m = Vec::with_capacity(k);
    for i in 0..k {
        let mut row = Vec::with_capacity(k);
        for j in 0..k {
            row.push(table.try_get(f.legs[i] as i64, f.arms[j] as i64)?);
        }
        m.push(row);
    }
    let det = determinant(&m);
    let legs_sum: u64 = f.legs.iter().sum();
    Ok(if legs_sum.is_multiple_of(2) { det } else { -det })
}

/// The Schur coefficients c_mu of a tau-function for all |mu| <= max_size.
#[derive(Clone, Debug)]
pub struct SchurExpansion {
    pub max_size: u32,
    coefficients: BTreeMap<Partition, Rat>,
}

impl SchurExpansion {
    pub fn coefficient(&self, mu: &Partition) -> Rat {
        self.coefficients.get(mu).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (&Partition, &Rat)> {
        self.coefficients.iter()
    }

    /// Replace one coefficient (negative controls in the verifier tests).
    pub fn set_coefficient(&mut self, mu: Partition, c: Rat) {
        self.coefficients.insert(mu, c);
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .coefficients
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(mu, c)| serde_json::json!({ "mu": mu.parts(), "c": format_rat(c) }))
            .collect();
        serde_json::json!({ "basis": "schur", "max_size": self.max_size, "terms": terms })
    }
}

/// Expand the tau-function of `table` in Schur functions to |mu| <= max_size.
pub fn tau_schur_expansion(max_size: u32, table: &CoordTable) -> Result<SchurExpansion> {
    let mut coefficients = BTreeMap::new();
    for mu in partitions_up_to(max_size) {
        let c = schur_coefficient(&mu, table)?;
        if !c.is_zero() {
            coefficients.insert(mu, c);
        }
    }
    Ok(SchurExpansion { max_size, coefficients })
}

// ----- weighted polynomials in time variables ----------------------------------

/// Time-variable bases: the KP times T_k, or the coupling constants
/// (t_i, s_i) with t_n = (2n+1)!! T_{2n+1} and s_n = 2^{n+1} (n+1)! T_{2n+2}.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TimeBasis {
    T,
    Ts,
}

impl fmt::Display for TimeBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TimeBasis::T => write!(f, "T"),
            TimeBasis::Ts => write!(f, "ts"),
        }
    }
}

/// One time variable. Weights: T_k has weight k, t_i weight 2i+1, s_i
/// weight 2i+2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum TimeVar {
    T(u32),
    SmallT(u32),
    SmallS(u32),
}

impl TimeVar {
    pub fn weight(self) -> u32 {
        match self {
            TimeVar::T(k) => k,
            TimeVar::SmallT(i) => 2 * i + 1,
            TimeVar::SmallS(i) => 2 * i + 2,
        }
    }
}

impl fmt::Display for TimeVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TimeVar::T(k) => write!(f, "T{k}"),
            TimeVar::SmallT(i) => write!(f, "t{i}"),
            TimeVar::SmallS(i) => write!(f, "s{i}"),
        }
    }
}

/// A monomial: sorted (variable, power) pairs with positive powers.
pub type Monomial = Vec<(TimeVar, u32)>;

pub fn monomial_weight(m: &Monomial) -> u32 {
    m.iter().map(|&(v, p)| v.weight() * p).sum()
}

pub fn format_monomial(m: &Monomial) -> String {
    if m.is_empty() {
        return "1".into();
    }
    m.iter()
        .map(|&(v, p)| if p == 1 { v.to_string() } else { format!("{v}^{p}") })
        .collect::<Vec<_>>()
        .join("*")
}

/// A polynomial in time variables truncated at a weighted degree: terms of
/// weight above `max_weight` are identically dropped by every operation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedPolynomial {
    pub basis: TimeBasis,
    pub max_weight: u32,
    terms: BTreeMap<Monomial, Rat>,
}

impl WeightedPolynomial {
    pub fn zero(basis: TimeBasis, max_weight: u32) -> Self {
        WeightedPolynomial { basis, max_weight, terms: BTreeMap::new() }
    }

    pub fn constant(basis: TimeBasis, max_weight: u32, c: Rat) -> Self {
        let mut p = Self::zero(basis, max_weight);
        p.add_term(Vec::new(), c);
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() || monomial_weight(&m) > self.max_weight {
            return;
        }
        debug_assert!(m.windows(2).all(|w| w[0].0 < w[1].0) && m.iter().all(|&(_, p)| p > 0));
        let entry = self.terms.entry(m);
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
        assert_eq!(self.basis, other.basis);
        let mut out = self.clone();
        out.max_weight = self.max_weight.min(other.max_weight);
        out.terms.retain(|m, _| monomial_weight(m) <= out.max_weight);
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&rat_int(-1)))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.basis, self.max_weight);
        }
        WeightedPolynomial {
            basis: self.basis,
            max_weight: self.max_weight,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.basis, other.basis);
        let mut out = Self::zero(self.basis, self.max_weight.min(other.max_weight));
        for (ma, ca) in &self.terms {
            let wa = monomial_weight(ma);
            for (mb, cb) in &other.terms {
                if wa + monomial_weight(mb) > out.max_weight {
                    continue;
                }
                out.add_term(merge_monomials(ma, mb), ca * cb);
            }
        }
        out
    }

    /// Multiply by a single variable.
    pub fn mul_var(&self, v: TimeVar) -> Self {
        let mut out = Self::zero(self.basis, self.max_weight);
        for (m, c) in &self.terms {
            out.add_term(merge_monomials(m, &[(v, 1)]), c.clone());
        }
        out
    }

    /// Partial derivative with respect to a variable.
    pub fn derivative(&self, v: TimeVar) -> Self {
        let mut out = Self::zero(self.basis, self.max_weight);
        for (m, c) in &self.terms {
            if let Some(pos) = m.iter().position(|&(w, _)| w == v) {
                let p = m[pos].1;
                let mut nm = m.clone();
                if p == 1 {
                    nm.remove(pos);
                } else {
                    nm[pos].1 = p - 1;
                }
                out.add_term(nm, c * rat_int(p as i64));
            }
        }
        out
    }

    /// The largest variable index that can matter at this truncation: any
    /// variable of weight above max_weight cannot appear.
    pub fn max_var_weight(&self) -> u32 {
        self.max_weight
    }

    /// log of a polynomial with constant term 1, exact to the truncation
    /// weight.
    pub fn log_one_plus(&self) -> Self {
        assert_eq!(self.coefficient(&Vec::new()), rat_int(1), "log needs constant term 1");
        let mut u = self.clone();
        u.add_term(Vec::new(), rat_int(-1));
        // smallest positive weight present bounds the number of series terms
        let min_w = u.terms.keys().map(monomial_weight).min().unwrap_or(self.max_weight + 1);
        let mut out = Self::zero(self.basis, self.max_weight);
        if min_w > self.max_weight {
            return out;
        }
        let mut power = u.clone();
        let mut k = 1i64;
        loop {
            let sign = if k % 2 == 1 { rat_int(1) } else { rat_int(-1) };
            out = out.add(&power.scale(&(sign / rat_int(k))));
            k += 1;
            if (k as u32) * min_w > self.max_weight {
                break;
            }
            power = power.mul(&u);
        }
        out
    }

    /// exp of a polynomial with constant term 0, exact to the truncation
    /// weight.
    pub fn exp(&self) -> Self {
        assert!(self.coefficient(&Vec::new()).is_zero(), "exp needs constant term 0");
        let min_w = self.terms.keys().map(monomial_weight).min().unwrap_or(self.max_weight + 1);
        let mut out = Self::constant(self.basis, self.max_weight, rat_int(1));
        if min_w > self.max_weight {
            return out;
        }
        let mut power = self.clone();
        let mut kfac = rat_int(1);
        let mut k = 1i64;
        loop {
            kfac *= rat_int(k);
            out = out.add(&power.scale(&(rat_int(1) / kfac.clone())));
            k += 1;
            if (k as u32) * min_w > self.max_weight {
                break;
            }
            power = power.mul(self);
        }
        out
    }

    /// Substitute the T variables by the coupling constants,
    /// T_{2i+1} = t_i/(2i+1)!!, T_{2i+2} = s_i/(2^{i+1} (i+1)!).
    pub fn to_ts(&self) -> Self {
        assert_eq!(self.basis, TimeBasis::T);
        let mut out = Self::zero(TimeBasis::Ts, self.max_weight);
        for (m, c) in &self.terms {
            let mut nm: Monomial = Vec::with_capacity(m.len());
            let mut factor = c.clone();
            for &(v, p) in m {
                let TimeVar::T(k) = v else { unreachable!() };
                let (nv, scale) = if k % 2 == 1 {
                    let i = (k - 1) / 2;
                    (TimeVar::SmallT(i), Rat::new(BigInt::one(), odd_double_factorial(k as i64)))
                } else {
                    let i = (k - 2) / 2;
                    (
                        TimeVar::SmallS(i),
                        Rat::new(BigInt::one(), int_pow(2, i + 1) * factorial(i as u64 + 1)),
                    )
                };
                for _ in 0..p {
                    factor *= scale.clone();
                }
                nm.push((nv, p));
            }
            nm.sort_by_key(|&(v, _)| v);
            out.add_term(nm, factor);
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let e: Vec<serde_json::Value> = m
                    .iter()
                    .map(|&(v, p)| serde_json::json!([v.to_string(), p]))
                    .collect();
                serde_json::json!({ "monomial": format_monomial(m), "e": e, "c": format_rat(c) })
            })
            .collect();
        serde_json::json!({
            "basis": self.basis.to_string(),
            "max_weight": self.max_weight,
            "terms": terms,
        })
    }
}

fn merge_monomials(a: &[(TimeVar, u32)], b: &[(TimeVar, u32)]) -> Monomial {
    let mut out: Monomial = a.to_vec();
    for &(v, p) in b {
        match out.iter_mut().find(|(w, _)| *w == v) {
            Some(slot) => slot.1 += p,
            None => out.push((v, p)),
        }
    }
    out.sort_by_key(|&(v, _)| v);
    out
}

impl fmt::Display for WeightedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}*{}", format_rat(c), format_monomial(m))?;
        }
        Ok(())
    }
}

// ----- the tau-function in time variables ---------------------------------------

/// tau as a weighted polynomial from its Schur expansion: sum_mu c_mu s_mu with
/// s_mu = sum_lambda (chi^mu_lambda / z_lambda) p_lambda and p_k = k T_k.
pub fn tau_polynomial_from_expansion(exp: &SchurExpansion, basis: TimeBasis) -> WeightedPolynomial {
    let max_weight = exp.max_size;
    let mut out = WeightedPolynomial::zero(TimeBasis::T, max_weight);
    let mut cache = CharCache::new();
    for (mu, c) in exp.coefficients() {
        let s = crate::symmfunc::schur_in_powersums_cached(mu, &mut cache);
        for (lam, coeff) in s.terms() {
            // p_lambda = (prod lambda_i) prod T_{lambda_i}
            let mut mono: Monomial = Vec::new();
            let mut mult = rat_int(1);
            let mut i = 0;
            let parts = lam.parts();
            while i < parts.len() {
                let part = parts[i];
                let mut p = 0u32;
                while i < parts.len() && parts[i] == part {
                    p += 1;
                    i += 1;
                }
                mult *= Rat::from_integer(int_pow(part as i64, p));
                mono.push((TimeVar::T(part), p));
            }
            mono.sort_by_key(|&(v, _)| v);
            out.add_term(mono, c * coeff * mult);
        }
    }
    match basis {
        TimeBasis::T => out,
        TimeBasis::Ts => out.to_ts(),
    }
}

/// tau of the table's tau-function to weighted degree max_weight.
pub fn tau_polynomial(max_weight: u32, basis: TimeBasis, table: &CoordTable) -> Result<WeightedPolynomial> {
    let exp = tau_schur_expansion(max_weight, table)?;
    Ok(tau_polynomial_from_expansion(&exp, basis))
}

/// log tau to weighted degree max_weight; constant term 0.
pub fn free_energy(max_weight: u32, basis: TimeBasis, table: &CoordTable) -> Result<WeightedPolynomial> {
    Ok(tau_polynomial(max_weight, basis, table)?.log_one_plus())
}

// ----- bosonic Virasoro verifiers -----------------------------------------------

/// Apply the Virasoro operator of index n (u = 1) to tau.
///
/// n = -1, 0 act in the coupling constants:
///   L_{-1} = t_0^2/2 + s_0 + sum_{i>=1} (t_i - delta_{i,1}) d_{t_{i-1}}
///            + sum_{i>=1} s_i d_{s_{i-1}},
///   L_0    = 1/16 + 3/4 + sum_{i>=0} (2i+1)/2 (t_i - delta_{i,1}) d_{t_i}
///            + sum_{i>=0} (i+1) s_i d_{s_i};
/// n >= 1 act on the KP times:
///   L_n = -d_{T_{2n+3}} + (n+2) d_{T_{2n}} + 1/2 sum_{k=1}^{2n-1} d^2_{T_k T_{2n-k}}
///         + sum_{k>=1} k T_k d_{T_{2n+k}};
/// derivatives with negative index are zero.
fn apply_virasoro(n: i64, tau: &WeightedPolynomial) -> WeightedPolynomial {
    let w = tau.max_weight;
    match n {
        -1 => {
            assert_eq!(tau.basis, TimeBasis::Ts);
            let mut out = tau.mul_var(TimeVar::SmallT(0)).mul_var(TimeVar::SmallT(0)).scale(&rat(1, 2));
            out = out.add(&tau.mul_var(TimeVar::SmallS(0)));
            let mut i = 1u32;
            while 2 * i - 1 <= w {
                let d = tau.derivative(TimeVar::SmallT(i - 1));
                out = out.add(&d.mul_var(TimeVar::SmallT(i)));
                if i == 1 {
                    out = out.sub(&d);
                }
                let ds = tau.derivative(TimeVar::SmallS(i - 1));
                out = out.add(&ds.mul_var(TimeVar::SmallS(i)));
                i += 1;
            }
            out
        }
        0 => {
            assert_eq!(tau.basis, TimeBasis::Ts);
            let mut out = tau.scale(&(rat(1, 16) + rat(3, 4)));
            let mut i = 0u32;
            while 2 * i < w {
                let coef = rat(2 * i as i64 + 1, 2);
                let d = tau.derivative(TimeVar::SmallT(i));
                out = out.add(&d.mul_var(TimeVar::SmallT(i)).scale(&coef));
                if i == 1 {
                    out = out.sub(&d.scale(&coef));
                }
                if 2 * i + 2 <= w {
                    let ds = tau.derivative(TimeVar::SmallS(i));
                    out = out.add(&ds.mul_var(TimeVar::SmallS(i)).scale(&rat_int(i as i64 + 1)));
                }
                i += 1;
            }
            out
        }
        _ => {
            assert!(n >= 1);
            assert_eq!(tau.basis, TimeBasis::T);
            let n = n as u32;
            let mut out = tau.derivative(TimeVar::T(2 * n + 3)).scale(&rat_int(-1));
            out = out.add(&tau.derivative(TimeVar::T(2 * n)).scale(&rat_int(n as i64 + 2)));
            for k in 1..=(2 * n - 1) {
                let dd = tau.derivative(TimeVar::T(k)).derivative(TimeVar::T(2 * n - k));
                out = out.add(&dd.scale(&rat(1, 2)));
            }
            for k in 1..=w {
                let d = tau.derivative(TimeVar::T(2 * n + k));
                if d.is_zero() {
                    continue;
                }
                out = out.add(&d.mul_var(TimeVar::T(k)).scale(&rat_int(k as i64)));
            }
            out
        }
    }
}

/// How far a truncated tau guarantees the vanishing of L_n tau: the operator
/// term that lowers weight the most sets the horizon.
fn virasoro_weight_drop(n: i64) -> u32 {
    match n {
        -1 => 1,
        0 => 3,
        _ => 2 * n as u32 + 3,
    }
}

/// Check L_n tau = 0 through the given weight, for n in -1..=2, on a given
/// Schur expansion (the expansion must reach check_weight + the operator's
/// weight drop; use `verify_virasoro_bosonic` for the table-driven entry).
pub fn virasoro_report(n: i64, check_weight: u32, exp: &SchurExpansion) -> Result<VerificationReport> {
    let drop = virasoro_weight_drop(n);
    if exp.max_size < check_weight + drop {
        return Err(Error::TruncationTooShallow(format!(
            "Virasoro n={n} at weight {check_weight} needs the expansion to weight {}",
            check_weight + drop
        )));
    }
    let basis = if n <= 0 { TimeBasis::Ts } else { TimeBasis::T };
    let tau = tau_polynomial_from_expansion(exp, basis);
    let image = apply_virasoro(n, &tau);
    let mut report = VerificationReport::new(
        format!("virasoro-bosonic n={n}"),
        format!("weight <= {check_weight}"),
    );
    // every monomial slot of weight <= check_weight must vanish
    for m in enumerate_monomials(basis, check_weight) {
        report.check_eq(format_monomial(&m), &Rat::zero(), &image.coefficient(&m));
    }
    Ok(report)
}

/// All monomials of weighted degree <= max_weight over the basis variables.
fn enumerate_monomials(basis: TimeBasis, max_weight: u32) -> Vec<Monomial> {
    let vars: Vec<TimeVar> = match basis {
        TimeBasis::T => (1..=max_weight).map(TimeVar::T).collect(),
        TimeBasis::Ts => {
            let mut v = Vec::new();
            let mut i = 0;
            while 2 * i < max_weight {
                v.push(TimeVar::SmallT(i));
                if 2 * i + 2 <= max_weight {
                    v.push(TimeVar::SmallS(i));
                }
                i += 1;
            }
            v
        }
    };
    fn rec(vars: &[TimeVar], budget: u32, current: &mut Monomial, out: &mut Vec<Monomial>) {
        match vars.split_first() {
            None => out.push(current.clone()),
            Some((&v, rest)) => {
                rec(rest, budget, current, out);
                let w = v.weight();
                let mut p = 1u32;
                while p * w <= budget {
                    current.push((v, p));
                    rec(rest, budget - p * w, current, out);
                    current.pop();
                    p += 1;
                }
            }
        }
    }
    let mut out = Vec::new();
    let mut cur = Vec::new();
    rec(&vars, max_weight, &mut cur, &mut out);
    for m in &mut out {
        m.sort_by_key(|&(v, _)| v);
    }
    out.sort();
    out.dedup();
    out
}

/// Table-driven Virasoro verification.
pub fn verify_virasoro_bosonic(n: i64, check_weight: u32, table: &CoordTable) -> Result<VerificationReport> {
    let exp = tau_schur_expansion(check_weight + virasoro_weight_drop(n), table)?;
    virasoro_report(n, check_weight, &exp)
}

// ----- Hirota bilinear residue ----------------------------------------------------

/// Monomial in one truncated time vector: sorted (index j, power).
type JMono = Vec<(u32, u32)>;

fn jmono_weight(m: &JMono) -> u32 {
    m.iter().map(|&(j, p)| j * p).sum()
}

fn jmono_mul(a: &JMono, b: &[(u32, u32)]) -> JMono {
    let mut out = a.clone();
    for &(j, p) in b {
        match out.iter_mut().find(|(k, _)| *k == j) {
            Some(slot) => slot.1 += p,
            None => out.push((j, p)),
        }
    }
    out.sort();
    out
}

fn format_jmono(name: &str, m: &JMono) -> String {
    if m.is_empty() {
        return "1".into();
    }
    m.iter()
        .map(|&(j, p)| if p == 1 { format!("{name}{j}") } else { format!("{name}{j}^{p}") })
        .collect::<Vec<_>>()
        .join("*")
}

/// tau(v +- [z^{-1}]) as a map z-exponent -> polynomial in the time vector v:
/// every tau-monomial prod T_j^{k_j} expands binomially with T_j -> v_j +- z^{-j}/j.
fn shifted_tau(tau: &WeightedPolynomial, sign: i64) -> BTreeMap<i64, BTreeMap<JMono, Rat>> {
    let mut out: BTreeMap<i64, BTreeMap<JMono, Rat>> = BTreeMap::new();
    for (mono, c) in tau.terms() {
        // expansion states: (z-exponent, monomial, coefficient)
        let mut states: Vec<(i64, JMono, Rat)> = vec![(0, Vec::new(), c.clone())];
        for &(v, p) in mono {
            let TimeVar::T(j) = v else { unreachable!() };
            // (v_j + sign z^{-j}/j)^p
            let mut next: Vec<(i64, JMono, Rat)> = Vec::new();
            for (ze, m, coef) in &states {
                let mut binom = rat_int(1);
                for r in 0..=p {
                    // C(p, r) v_j^{p-r} (sign/j)^r z^{-jr}
                    let mut term_coef = coef.clone() * binom.clone();
                    if sign < 0 && r % 2 == 1 {
                        term_coef = -term_coef;
                    }
                    term_coef /= Rat::from_integer(int_pow(j as i64, r));
                    let mut nm = m.clone();
                    if p - r > 0 {
                        nm = jmono_mul(&nm, &[(j, p - r)]);
                    }
                    next.push((*ze - (j as i64) * (r as i64), nm, term_coef));
                    // update binomial C(p, r) -> C(p, r+1)
                    binom = binom * rat_int((p - r) as i64) / rat_int(r as i64 + 1);
                }
            }
            states = next;
        }
        for (ze, m, coef) in states {
            if coef.is_zero() {
                continue;
            }
            let slot = out.entry(ze).or_default();
            let entry = slot.entry(m.clone()).or_insert_with(Rat::zero);
            *entry += coef;
            if entry.is_zero() {
                slot.remove(&m);
            }
        }
    }
    out
}

/// All weighted monomials of weight exactly w over indices 1..=w, with the
/// coefficient 1/prod(a_j!) of exp(sum v_j z^j)'s z^w coefficient.
fn exp_monomials(w: u32) -> Vec<(JMono, Rat)> {
    fn rec(remaining: u32, max_j: u32, current: &mut JMono, out: &mut Vec<(JMono, Rat)>) {
        if remaining == 0 {
            let mut denom = BigInt::one();
            for &(_, p) in current.iter() {
                denom *= factorial(p as u64);
            }
            let mut m = current.clone();
            m.sort();
            out.push((m, Rat::new(BigInt::one(), denom)));
            return;
        }
        for j in (1..=max_j.min(remaining)).rev() {
            let p = current.iter_mut().find(|(k, _)| *k == j);
            match p {
                Some(slot) => slot.1 += 1,
                None => current.push((j, 1)),
            }
            rec(remaining - j, j, current, out);
            let slot = current.iter_mut().position(|(k, _)| *k == j).unwrap();
            if current[slot].1 == 1 {
                current.remove(slot);
            } else {
                current[slot].1 -= 1;
            }
        }
    }
    let mut out = Vec::new();
    let mut cur = Vec::new();
    rec(w, w, &mut cur, &mut out);
    out
}

/// Check the Hirota bilinear residue on a Schur expansion: the z^{-1}
/// coefficient of exp(sum (x_j - y_j) z^j) tau(x - [z^{-1}]) tau(y + [z^{-1}])
/// must vanish identically; violations are reported per (x, y)-monomial of
/// combined weight <= check_weight. The expansion must reach weight
/// check_weight + 1.
pub fn hirota_report(exp: &SchurExpansion, check_weight: u32) -> Result<VerificationReport> {
    if exp.max_size < check_weight + 1 {
        return Err(Error::TruncationTooShallow(format!(
            "Hirota at weight {check_weight} needs the expansion to weight {}",
            check_weight + 1
        )));
    }
    let tau = tau_polynomial_from_expansion(exp, TimeBasis::T);
    let p1 = shifted_tau(&tau, -1); // tau(x - [z^{-1}])
    let p2 = shifted_tau(&tau, 1); // tau(y + [z^{-1}])
    // residue monomial accumulator: (x-mono, y-mono) -> coefficient
    let mut residue: BTreeMap<(JMono, JMono), Rat> = BTreeMap::new();
    let mut add = |xm: JMono, ym: JMono, c: Rat| {
        if c.is_zero() || jmono_weight(&xm) + jmono_weight(&ym) > check_weight {
            return;
        }
        let entry = residue.entry((xm, ym)).or_insert_with(Rat::zero);
        *entry += c;
    };
    // k = 0 part of the exponential (constant 1)
    for (ze1, terms1) in &p1 {
        let need = -1 - ze1;
        if let Some(terms2) = p2.get(&need) {
            for (xm, c1) in terms1 {
                for (ym, c2) in terms2 {
                    add(xm.clone(), ym.clone(), c1 * c2);
                }
            }
        }
    }
    // k >= 1: exp contributes z^k with monomials of weight k in x and -y
    for k in 1..=check_weight {
        for split in 0..=k {
            // weight `split` from x, `k - split` from y
            let xs = exp_monomials(split);
            let ys = exp_monomials(k - split);
            for (exm, exc) in &xs {
                for (eym, eyc) in &ys {
                    let sign = if eym.iter().map(|&(_, p)| p).sum::<u32>() % 2 == 1 {
                        rat_int(-1)
                    } else {
                        rat_int(1)
                    };
                    let ecoef = exc * eyc * sign;
                    for (ze1, terms1) in &p1 {
                        let need = -1 - k as i64 - ze1;
                        if need > 0 {
                            continue;
                        }
                        if let Some(terms2) = p2.get(&need) {
                            for (xm, c1) in terms1 {
                                for (ym, c2) in terms2 {
                                    add(
                                        jmono_mul(xm, exm),
                                        jmono_mul(ym, eym),
                                        c1 * c2 * ecoef.clone(),
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    let mut report = VerificationReport::new("hirota", format!("combined weight <= {check_weight}"));
    let mut seen = 0u64;
    for ((xm, ym), c) in &residue {
        report.check_eq(
            format!("{} (x) {}", format_jmono("x", xm), format_jmono("y", ym)),
            &Rat::zero(),
            c,
        );
        seen += 1;
    }
    if seen == 0 {
        report.checked += 1;
    }
    Ok(report)
}

/// Table-driven Hirota verification.
pub fn verify_hirota(check_weight: u32, table: &CoordTable) -> Result<VerificationReport> {
    let exp = tau_schur_expansion(check_weight + 1, table)?;
    hirota_report(&exp, check_weight)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::open::{open_table_closed, open_table_recursive};

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec())
    }

    #[test]
    fn determinant_small() {
        assert_eq!(determinant(&[]), rat_int(1));
        assert_eq!(determinant(&[vec![rat(3, 2)]]), rat(3, 2));
        let m = vec![vec![rat_int(1), rat_int(2)], vec![rat_int(3), rat_int(4)]];
        assert_eq!(determinant(&m), rat_int(-2));
        let m = vec![
            vec![rat(1, 2), rat_int(0), rat_int(1)],
            vec![rat_int(2), rat(1, 3), rat_int(0)],
            vec![rat_int(0), rat_int(1), rat(1, 5)],
        ];
        // det = 1/2 (1/15 - 0) - 0 + 1 (2 - 0) = 1/30 + 2
        assert_eq!(determinant(&m), rat(1, 30) + rat_int(2));
    }

    #[test]
    fn schur_coefficient_examples() {
        let table = open_table_closed(12);
        assert_eq!(schur_coefficient(&p(&[3]), &table).unwrap(), rat(41, 24));
        assert_eq!(schur_coefficient(&p(&[2, 1]), &table).unwrap(), rat(-5, 24));
        assert_eq!(schur_coefficient(&p(&[1, 1, 1]), &table).unwrap(), rat(-7, 24));
        assert_eq!(schur_coefficient(&p(&[3, 2, 1]), &table).unwrap(), rat(287, 576));
        assert_eq!(schur_coefficient(&p(&[3, 3]), &table).unwrap(), rat(205, 576));
        assert_eq!(schur_coefficient(&p(&[2, 2, 2]), &table).unwrap(), rat(-35, 576));
        assert_eq!(schur_coefficient(&Partition::empty(), &table).unwrap(), rat_int(1));
    }

    #[test]
    fn hook_coefficients_are_signed_table_entries() {
        let table = open_table_closed(12);
        for m in 0..6u32 {
            for n in 0..6u32 {
                if (n + m) % 3 != 2 {
                    continue;
                }
                let mut parts = vec![m + 1];
                parts.extend(std::iter::repeat(1).take(n as usize));
                let mu = Partition::new(parts);
                let sign = if n % 2 == 0 { 1 } else { -1 };
                assert_eq!(
                    schur_coefficient(&mu, &table).unwrap(),
                    table.get(n as i64, m as i64) * rat_int(sign),
                    "hook ({m}|{n})"
                );
            }
        }
    }

    #[test]
    fn mod3_support_of_schur_coefficients() {
        let table = open_table_closed(12);
        let exp = tau_schur_expansion(12, &table).unwrap();
        for (mu, c) in exp.coefficients() {
            if mu.size() % 3 != 0 {
                assert!(c.is_zero(), "c_{mu} should vanish");
            }
        }
    }

    #[test]
    fn giambelli_consistency() {
        // c_mu equals the determinant of the hook coefficients.
        let table = open_table_closed(12);
        for mu in partitions_up_to(9) {
            let f = mu.frobenius();
            let k = f.rank();
            if k < 2 {
                continue;
            }
            let mut m = Vec::new();
            for i in 0..k {
                let mut row = Vec::new();
                for j in 0..k {
                    let mut parts = vec![f.arms[j] as u32 + 1];
                    parts.extend(std::iter::repeat(1).take(f.legs[i] as usize));
                    row.push(schur_coefficient(&Partition::new(parts), &table).unwrap());
                }
                m.push(row);
            }
            assert_eq!(
                schur_coefficient(&mu, &table).unwrap(),
                determinant(&m),
                "Giambelli failed for {mu}"
            );
        }
    }

    #[test]
    fn tau_polynomial_weight3() {
        let table = open_table_closed(6);
        let tau = tau_polynomial(3, TimeBasis::T, &table).unwrap();
        assert_eq!(tau.coefficient(&vec![]), rat_int(1));
        assert_eq!(tau.coefficient(&vec![(TimeVar::T(1), 3)]), rat(1, 6));
        assert_eq!(tau.coefficient(&vec![(TimeVar::T(1), 1), (TimeVar::T(2), 1)]), rat_int(2));
        assert_eq!(tau.coefficient(&vec![(TimeVar::T(3), 1)]), rat(13, 8));
    }

    #[test]
    fn free_energy_values() {
        let table = open_table_closed(7);
        let f = free_energy(6, TimeBasis::T, &table).unwrap();
        assert_eq!(f.coefficient(&vec![]), rat_int(0));
        assert_eq!(f.coefficient(&vec![(TimeVar::T(3), 1)]), rat(13, 8));
        assert_eq!(f.coefficient(&vec![(TimeVar::T(1), 1), (TimeVar::T(2), 1)]), rat_int(2));
        assert_eq!(f.coefficient(&vec![(TimeVar::T(1), 3)]), rat(1, 6));
        assert_eq!(f.coefficient(&vec![(TimeVar::T(6), 1)]), rat_int(8));
        assert_eq!(f.coefficient(&vec![(TimeVar::T(3), 2)]), rat(39, 16));
        // exp(F) = tau
        let tau = tau_polynomial(6, TimeBasis::T, &table).unwrap();
        assert_eq!(f.exp(), tau);
    }

    #[test]
    fn ts_substitution_consistent() {
        let table = open_table_closed(10);
        let f_t = free_energy(9, TimeBasis::T, &table).unwrap();
        let f_ts = free_energy(9, TimeBasis::Ts, &table).unwrap();
        assert_eq!(f_t.to_ts(), f_ts);
    }

    #[test]
    fn virasoro_annihilates() {
        let table = open_table_recursive(16);
        for n in -1..=2i64 {
            let check = 9;
            let r = verify_virasoro_bosonic(n, check, &table).unwrap();
            assert!(r.passed(), "L_{n} failed: {r}");
            assert!(r.checked > 0);
        }
    }

    #[test]
    fn virasoro_negative_control() {
        let table = open_table_closed(10);
        let mut exp = tau_schur_expansion(10, &table).unwrap();
        exp.set_coefficient(p(&[3]), exp.coefficient(&p(&[3])) + rat_int(1));
        let r = virasoro_report(-1, 6, &exp).unwrap();
        assert!(!r.passed(), "perturbed expansion must violate the string equation");
    }

    #[test]
    fn hirota_trivial_tau() {
        // tau = 1: the residue of exp(sum (x_j - y_j) z^j) has no z^{-1} part.
        let exp = SchurExpansion { max_size: 5, coefficients: BTreeMap::new() };
        let mut exp = exp;
        exp.set_coefficient(Partition::empty(), rat_int(1));
        let r = hirota_report(&exp, 4).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn hirota_open_tau_and_negative_control() {
        let table = open_table_closed(7);
        let exp = tau_schur_expansion(7, &table).unwrap();
        let r = hirota_report(&exp, 6).unwrap();
        assert!(r.passed(), "{r}");
        assert!(r.checked > 1);
        let mut bad = exp.clone();
        bad.set_coefficient(p(&[3]), bad.coefficient(&p(&[3])) + rat_int(1));
        let r = hirota_report(&bad, 6).unwrap();
        assert!(!r.passed(), "perturbing c_(3) must break the bilinear identity");
    }
}
