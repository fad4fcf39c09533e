//! Sparse multivariate truncated Laurent series over the exact rationals.
//!
//! A series stores finitely many terms of a formal object that may have an
//! infinite tail of negative-exponent terms (a "Laurent tail"). Alongside the
//! terms it carries a window:
//!
//! - structural support: a box (per variable plus total degree) that provably
//!   contains the support of the *true* series;
//! - a list of missing boxes: regions that may contain true terms not stored
//!   (truncation tails). Outside every missing box the stored coefficient
//!   provably equals the true one.
//!
//! Arithmetic propagates both: under multiplication a missing term of one
//! operand can only land in (its box) + (the partner's box), so the missing
//! list of a product is the Minkowski sums of the operands' missing boxes
//! with the partner's stored box, plus the pairwise sums. Truncation never
//! silently invents or corrupts a coefficient: queries inside a missing box
//! return an error instead of a wrong value.
//!
//! Half-integer exponents (z^{k/2}) are handled by a doubled-exponent
//! convention: a series with `scale() == 2` stores 2*exponent.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{format_rat, parse_rat, rat_int, Rat};

/// Sentinel for -infinity in window bounds.
pub const NEG_INF: i64 = i64::MIN / 4;
/// Sentinel for +infinity in window bounds.
pub const POS_INF: i64 = i64::MAX / 4;

fn is_fin(x: i64) -> bool {
    x > NEG_INF && x < POS_INF
}

/// Sum used for upper bounds: an empty interval end (NEG_INF) absorbs,
/// then +inf.
fn add_ub(a: i64, b: i64) -> i64 {
    if a == NEG_INF || b == NEG_INF {
        NEG_INF
    } else if a == POS_INF || b == POS_INF {
        POS_INF
    } else {
        a + b
    }
}

/// Sum used for lower bounds: an empty interval end (POS_INF) absorbs,
/// then -inf.
fn add_lb(a: i64, b: i64) -> i64 {
    if a == POS_INF || b == POS_INF {
        POS_INF
    } else if a == NEG_INF || b == NEG_INF {
        NEG_INF
    } else {
        a + b
    }
}

fn fmt_bound(x: i64) -> String {
    if x <= NEG_INF {
        "-inf".into()
    } else if x >= POS_INF {
        "+inf".into()
    } else {
        x.to_string()
    }
}

/// A box of exponent vectors: per-variable intervals plus a total-degree
/// interval. Used for structural supports, missing regions, and truncation
/// requests.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Region {
    pub var_min: Vec<i64>,
    pub var_max: Vec<i64>,
    pub tot_min: i64,
    pub tot_max: i64,
}

impl Region {
    /// The whole lattice.
    pub fn all(nvars: usize) -> Self {
        Region {
            var_min: vec![NEG_INF; nvars],
            var_max: vec![POS_INF; nvars],
            tot_min: NEG_INF,
            tot_max: POS_INF,
        }
    }

    /// The empty box.
    pub fn empty(nvars: usize) -> Self {
        Region {
            var_min: vec![POS_INF; nvars],
            var_max: vec![NEG_INF; nvars],
            tot_min: POS_INF,
            tot_max: NEG_INF,
        }
    }

    /// Lower bounds only: e_i >= var_min[i] and sum e_i >= tot_min.
    pub fn above(var_min: Vec<i64>, tot_min: i64) -> Self {
        let n = var_min.len();
        Region { var_min, var_max: vec![POS_INF; n], tot_min, tot_max: POS_INF }
    }

    pub fn contains(&self, e: &[i64]) -> bool {
        let tot: i64 = e.iter().sum();
        e.iter().zip(&self.var_min).all(|(&x, &lo)| x >= lo)
            && e.iter().zip(&self.var_max).all(|(&x, &hi)| x <= hi)
            && tot >= self.tot_min
            && tot <= self.tot_max
    }

    fn contains_region(&self, other: &Region) -> bool {
        self.var_min.iter().zip(&other.var_min).all(|(&a, &b)| a <= b)
            && self.var_max.iter().zip(&other.var_max).all(|(&a, &b)| a >= b)
            && self.tot_min <= other.tot_min
            && self.tot_max >= other.tot_max
    }

    pub fn intersect(&self, other: &Region) -> Region {
        Region {
            var_min: self.var_min.iter().zip(&other.var_min).map(|(&a, &b)| a.max(b)).collect(),
            var_max: self.var_max.iter().zip(&other.var_max).map(|(&a, &b)| a.min(b)).collect(),
            tot_min: self.tot_min.max(other.tot_min),
            tot_max: self.tot_max.min(other.tot_max),
        }
    }

    fn disjoint(&self, other: &Region) -> bool {
        self.intersect(other).propagate().is_none()
    }

    /// One pass of interval constraint propagation between the per-variable
    /// and total bounds. Returns None if the box is empty.
    pub fn propagate(mut self) -> Option<Self> {
        let n = self.var_min.len();
        let sum_lo = self.var_min.iter().fold(0i64, |a, &b| add_lb(a, b));
        let sum_hi = self.var_max.iter().fold(0i64, |a, &b| add_ub(a, b));
        if sum_lo > self.tot_min {
            self.tot_min = sum_lo;
        }
        if sum_hi < self.tot_max {
            self.tot_max = sum_hi;
        }
        for i in 0..n {
            let others_lo = (0..n)
                .filter(|&j| j != i)
                .fold(0i64, |a, j| add_lb(a, self.var_min[j]));
            let others_hi = (0..n)
                .filter(|&j| j != i)
                .fold(0i64, |a, j| add_ub(a, self.var_max[j]));
            if is_fin(self.tot_max) && others_lo != NEG_INF && others_lo != POS_INF {
                let hi = self.tot_max - others_lo;
                if hi < self.var_max[i] {
                    self.var_max[i] = hi;
                }
            }
            if is_fin(self.tot_min) && others_hi != POS_INF && others_hi != NEG_INF {
                let lo = self.tot_min - others_hi;
                if lo > self.var_min[i] {
                    self.var_min[i] = lo;
                }
            }
        }
        let empty = self
            .var_min
            .iter()
            .zip(&self.var_max)
            .any(|(&lo, &hi)| lo > hi)
            || self.tot_min > self.tot_max;
        if empty {
            None
        } else {
            Some(self)
        }
    }

    /// Minkowski sum of boxes.
    fn minkowski(&self, other: &Region) -> Region {
        Region {
            var_min: self
                .var_min
                .iter()
                .zip(&other.var_min)
                .map(|(&a, &b)| add_lb(a, b))
                .collect(),
            var_max: self
                .var_max
                .iter()
                .zip(&other.var_max)
                .map(|(&a, &b)| add_ub(a, b))
                .collect(),
            tot_min: add_lb(self.tot_min, other.tot_min),
            tot_max: add_ub(self.tot_max, other.tot_max),
        }
    }

    /// The complement of this region as a list of half-space boxes.
    fn complement(&self) -> Vec<Region> {
        let n = self.var_min.len();
        let mut out = Vec::new();
        for i in 0..n {
            if self.var_min[i] > NEG_INF {
                let mut b = Region::all(n);
                b.var_max[i] = self.var_min[i] - 1;
                out.push(b);
            }
            if self.var_max[i] < POS_INF {
                let mut b = Region::all(n);
                b.var_min[i] = self.var_max[i] + 1;
                out.push(b);
            }
        }
        if self.tot_min > NEG_INF {
            let mut b = Region::all(n);
            b.tot_max = self.tot_min - 1;
            out.push(b);
        }
        if self.tot_max < POS_INF {
            let mut b = Region::all(n);
            b.tot_min = self.tot_max + 1;
            out.push(b);
        }
        out
    }

    fn shift_var(&self, idx: usize, k: i64) -> Region {
        let mut r = self.clone();
        if is_fin(r.var_min[idx]) {
            r.var_min[idx] += k;
        }
        if is_fin(r.var_max[idx]) {
            r.var_max[idx] += k;
        }
        if is_fin(r.tot_min) {
            r.tot_min += k;
        }
        if is_fin(r.tot_max) {
            r.tot_max += k;
        }
        r
    }
}

/// Window of a series: structural support plus the boxes where true terms
/// may be missing from the stored data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    /// The true series has no terms outside this region.
    pub support: Region,
    /// Possibly-missing terms all lie inside these boxes.
    missing: Vec<Region>,
}

impl Window {
    fn exact(support: Region) -> Self {
        Window { support, missing: Vec::new() }
    }

    fn add_missing(&mut self, b: Region) {
        if let Some(b) = b.intersect(&self.support).propagate() {
            self.missing.push(b);
        }
    }

    /// Drop duplicate and contained boxes; hull-merge beyond a safety cap.
    fn normalize(&mut self) {
        self.missing.retain(|b| b.clone().propagate().is_some());
        self.missing.sort();
        self.missing.dedup();
        let mut keep: Vec<Region> = Vec::with_capacity(self.missing.len());
        'outer: for b in std::mem::take(&mut self.missing) {
            for k in &keep {
                if k.contains_region(&b) {
                    continue 'outer;
                }
            }
            keep.retain(|k| !b.contains_region(k));
            keep.push(b);
        }
        const CAP: usize = 1500;
        if keep.len() > CAP {
            // hull-merge the tail; coarser but sound
            let mut hull = keep[CAP - 1].clone();
            for b in keep.drain(CAP..) {
                hull = Region {
                    var_min: hull.var_min.iter().zip(&b.var_min).map(|(&a, &x)| a.min(x)).collect(),
                    var_max: hull.var_max.iter().zip(&b.var_max).map(|(&a, &x)| a.max(x)).collect(),
                    tot_min: hull.tot_min.min(b.tot_min),
                    tot_max: hull.tot_max.max(b.tot_max),
                };
            }
            keep[CAP - 1] = hull;
        }
        self.missing = keep;
    }

    pub fn is_complete_at(&self, e: &[i64]) -> bool {
        !self.missing.iter().any(|b| b.contains(e))
    }

    fn in_support(&self, e: &[i64]) -> bool {
        self.support.contains(e)
    }

    /// True when every point of `target` has a provably exact coefficient.
    pub fn covers(&self, target: &Region) -> bool {
        self.missing.iter().all(|b| b.disjoint(target))
    }

    pub fn missing_boxes(&self) -> &[Region] {
        &self.missing
    }

    fn describe(&self, vars: &[String]) -> String {
        let mut parts = Vec::new();
        for (i, v) in vars.iter().enumerate() {
            parts.push(format!(
                "{v} support [{}, {}]",
                fmt_bound(self.support.var_min[i]),
                fmt_bound(self.support.var_max[i])
            ));
        }
        parts.push(format!("{} missing boxes", self.missing.len()));
        parts.join(", ")
    }
}

/// Exact-rational truncated Laurent series in named variables.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    vars: Vec<String>,
    scale: u8,
    terms: BTreeMap<Vec<i64>, Rat>,
    win: Window,
}

impl TruncatedSeries {
    // ----- constructors ------------------------------------------------

    /// The zero series (empty structural support, exact everywhere).
    pub fn zero(vars: &[&str], scale: u8) -> Self {
        let vars: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let n = vars.len();
        TruncatedSeries {
            win: Window::exact(Region::empty(n)),
            vars,
            scale,
            terms: BTreeMap::new(),
        }
    }

    /// An exact finite sum of monomials (complete everywhere). Exponents are
    /// in stored units (already doubled if scale == 2).
    pub fn polynomial(vars: &[&str], scale: u8, terms: &[(Vec<i64>, Rat)]) -> Self {
        let mut s = Self::zero(vars, scale);
        for (e, c) in terms {
            assert_eq!(e.len(), s.vars.len());
            if c.is_zero() {
                continue;
            }
            for i in 0..e.len() {
                s.win.support.var_min[i] = s.win.support.var_min[i].min(e[i]);
                s.win.support.var_max[i] = s.win.support.var_max[i].max(e[i]);
            }
            let tot: i64 = e.iter().sum();
            s.win.support.tot_min = s.win.support.tot_min.min(tot);
            s.win.support.tot_max = s.win.support.tot_max.max(tot);
            let entry = s.terms.entry(e.clone()).or_insert_with(Rat::zero);
            *entry += c.clone();
            if entry.is_zero() {
                s.terms.remove(e);
            }
        }
        s
    }

    /// A single monomial.
    pub fn monomial(vars: &[&str], scale: u8, exps: &[i64], c: Rat) -> Self {
        Self::polynomial(vars, scale, &[(exps.to_vec(), c)])
    }

    /// The constant 1.
    pub fn one(vars: &[&str], scale: u8) -> Self {
        let n = vars.len();
        Self::monomial(vars, scale, &vec![0; n], rat_int(1))
    }

    /// A univariate Laurent tail: the true series has support in
    /// (-inf, sup_max] and the given terms are exactly its coefficients on
    /// [comp_min, sup_max]. Exponents in stored units.
    pub fn laurent_tail(var: &str, scale: u8, terms: &[(i64, Rat)], comp_min: i64, sup_max: i64) -> Self {
        let mut map = BTreeMap::new();
        for (e, c) in terms {
            assert!(*e >= comp_min && *e <= sup_max, "term exponent {e} outside [{comp_min}, {sup_max}]");
            if !c.is_zero() {
                map.insert(vec![*e], c.clone());
            }
        }
        let support = Region {
            var_min: vec![NEG_INF],
            var_max: vec![sup_max],
            tot_min: NEG_INF,
            tot_max: sup_max,
        };
        let mut win = Window::exact(support);
        let mut tail = Region::all(1);
        tail.var_max[0] = comp_min - 1;
        win.add_missing(tail);
        TruncatedSeries { vars: vec![var.to_string()], scale, terms: map, win }
    }

    /// Low-level constructor: the stored terms are exact on `complete`
    /// (missing boxes = complement of `complete` within `support`).
    pub fn from_parts(
        vars: Vec<String>,
        scale: u8,
        terms: BTreeMap<Vec<i64>, Rat>,
        support: Region,
        complete: Region,
    ) -> Self {
        let terms: BTreeMap<Vec<i64>, Rat> = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let n = vars.len();
        debug_assert!(terms.keys().all(|e| e.len() == n));
        let mut win = Window::exact(support);
        for b in complete.complement() {
            win.add_missing(b);
        }
        win.normalize();
        TruncatedSeries { vars, scale, terms, win }
    }

    // ----- accessors ----------------------------------------------------

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn scale(&self) -> u8 {
        self.scale
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn window(&self) -> &Window {
        &self.win
    }

    pub fn is_zero_on_window(&self) -> bool {
        self.terms.is_empty()
    }

    fn var_index(&self, var: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v == var)
            .ok_or_else(|| Error::IncompatibleSeries(format!("no variable {var} in {:?}", self.vars)))
    }

    /// Coefficient at an exponent vector (stored units). Returns 0 outside
    /// the structural support, the stored value where the window is
    /// complete, and an error inside a missing box.
    pub fn coefficient(&self, exps: &[i64]) -> Result<Rat> {
        assert_eq!(exps.len(), self.vars.len());
        if !self.win.in_support(exps) {
            return Ok(Rat::zero());
        }
        if self.win.is_complete_at(exps) {
            return Ok(self.terms.get(exps).cloned().unwrap_or_else(Rat::zero));
        }
        Err(Error::IncompleteCoefficient {
            vars: self.vars.clone(),
            exponents: exps.to_vec(),
            window: self.win.describe(&self.vars),
        })
    }

    /// Convenience for univariate series.
    pub fn coefficient1(&self, e: i64) -> Result<Rat> {
        self.coefficient(&[e])
    }

    /// The bounding box of the stored terms, or None when nothing is stored.
    fn stored_box(&self) -> Option<Region> {
        if self.terms.is_empty() {
            return None;
        }
        let n = self.vars.len();
        let mut r = Region::empty(n);
        for e in self.terms.keys() {
            for i in 0..n {
                r.var_min[i] = r.var_min[i].min(e[i]);
                r.var_max[i] = r.var_max[i].max(e[i]);
            }
            let tot: i64 = e.iter().sum();
            r.tot_min = r.tot_min.min(tot);
            r.tot_max = r.tot_max.max(tot);
        }
        Some(r)
    }

    // ----- alignment ----------------------------------------------------

    /// Embed into a larger (sorted) variable set; absent variables get
    /// exponent 0.
    pub fn embed(&self, vars: &[String]) -> Self {
        if self.vars == vars {
            return self.clone();
        }
        let map: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v).expect("embed: target must contain all vars"))
            .collect();
        let n = vars.len();
        let embed_region = |r: &Region, fill_lo: i64, fill_hi: i64| -> Region {
            let mut out = Region {
                var_min: vec![fill_lo; n],
                var_max: vec![fill_hi; n],
                tot_min: r.tot_min,
                tot_max: r.tot_max,
            };
            for (i, &j) in map.iter().enumerate() {
                out.var_min[j] = r.var_min[i];
                out.var_max[j] = r.var_max[i];
            }
            out
        };
        let win = Window {
            support: embed_region(&self.win.support, 0, 0),
            missing: self.win.missing.iter().map(|b| embed_region(b, 0, 0)).collect(),
        };
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut ne = vec![0i64; n];
            for (i, &j) in map.iter().enumerate() {
                ne[j] = e[i];
            }
            terms.insert(ne, c.clone());
        }
        TruncatedSeries { vars: vars.to_vec(), scale: self.scale, terms, win }
    }

    fn union_vars(&self, other: &Self) -> Vec<String> {
        let mut vars = self.vars.clone();
        for v in &other.vars {
            if !vars.contains(v) {
                vars.push(v.clone());
            }
        }
        vars.sort();
        vars
    }

    pub fn rename_var(&self, from: &str, to: &str) -> Result<Self> {
        let idx = self.var_index(from)?;
        let mut vars = self.vars.clone();
        vars[idx] = to.to_string();
        let mut order: Vec<usize> = (0..vars.len()).collect();
        order.sort_by(|&a, &b| vars[a].cmp(&vars[b]));
        let sorted_vars: Vec<String> = order.iter().map(|&i| vars[i].clone()).collect();
        let permute = |v: &[i64]| -> Vec<i64> { order.iter().map(|&i| v[i]).collect() };
        let permute_region = |r: &Region| Region {
            var_min: permute(&r.var_min),
            var_max: permute(&r.var_max),
            tot_min: r.tot_min,
            tot_max: r.tot_max,
        };
        let terms = self.terms.iter().map(|(e, c)| (permute(e), c.clone())).collect();
        let win = Window {
            support: permute_region(&self.win.support),
            missing: self.win.missing.iter().map(permute_region).collect(),
        };
        Ok(TruncatedSeries { vars: sorted_vars, scale: self.scale, terms, win })
    }

    /// Permute the variable roles in place: position i takes the exponents
    /// previously at position `images[i]`... more precisely, old variable i
    /// becomes variable `images[i]` (the variable set itself is unchanged).
    pub fn permute_vars(&self, images: &[usize]) -> Self {
        let n = self.vars.len();
        assert_eq!(images.len(), n);
        let permute = |e: &[i64]| -> Vec<i64> {
            let mut ne = vec![0i64; n];
            for i in 0..n {
                ne[images[i]] = e[i];
            }
            ne
        };
        let permute_region = |r: &Region| Region {
            var_min: permute(&r.var_min),
            var_max: permute(&r.var_max),
            tot_min: r.tot_min,
            tot_max: r.tot_max,
        };
        TruncatedSeries {
            vars: self.vars.clone(),
            scale: self.scale,
            terms: self.terms.iter().map(|(e, c)| (permute(e), c.clone())).collect(),
            win: Window {
                support: permute_region(&self.win.support),
                missing: self.win.missing.iter().map(permute_region).collect(),
            },
        }
    }

    /// Convert a scale-1 series to scale 2 (exponents double).
    pub fn to_scale2(&self) -> Self {
        assert_eq!(self.scale, 1);
        let double = |x: i64| if is_fin(x) { 2 * x } else { x };
        let dr = |r: &Region| Region {
            var_min: r.var_min.iter().map(|&x| double(x)).collect(),
            var_max: r.var_max.iter().map(|&x| double(x)).collect(),
            tot_min: double(r.tot_min),
            tot_max: double(r.tot_max),
        };
        TruncatedSeries {
            vars: self.vars.clone(),
            scale: 2,
            terms: self.terms.iter().map(|(e, c)| (e.iter().map(|&x| 2 * x).collect(), c.clone())).collect(),
            win: Window {
                support: dr(&self.win.support),
                missing: self.win.missing.iter().map(dr).collect(),
            },
        }
    }

    // ----- ring operations ----------------------------------------------

    fn check_scale(&self, other: &Self) -> Result<()> {
        if self.scale != other.scale {
            return Err(Error::IncompatibleSeries(format!(
                "exponent scale mismatch: {} vs {}",
                self.scale, other.scale
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_scale(other)?;
        let vars = self.union_vars(other);
        let a = self.embed(&vars);
        let b = other.embed(&vars);
        let n = vars.len();
        let support = Region {
            var_min: (0..n).map(|i| a.win.support.var_min[i].min(b.win.support.var_min[i])).collect(),
            var_max: (0..n).map(|i| a.win.support.var_max[i].max(b.win.support.var_max[i])).collect(),
            tot_min: a.win.support.tot_min.min(b.win.support.tot_min),
            tot_max: a.win.support.tot_max.max(b.win.support.tot_max),
        };
        let mut win = Window::exact(support);
        for m in a.win.missing.iter().chain(b.win.missing.iter()) {
            win.add_missing(m.clone());
        }
        win.normalize();
        let mut terms = a.terms;
        for (e, c) in b.terms {
            let entry = terms.entry(e).or_insert_with(Rat::zero);
            *entry += c;
        }
        terms.retain(|e, c| !c.is_zero() && win.is_complete_at(e));
        Ok(TruncatedSeries { vars, scale: self.scale, terms, win })
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale_by(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(
                &self.vars.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
                self.scale,
            );
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= c;
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_scale(other)?;
        let vars = self.union_vars(other);
        let a = self.embed(&vars);
        let b = other.embed(&vars);
        let support = a.win.support.minkowski(&b.win.support);
        let mut win = Window::exact(support);
        // missing(a*b) lies in the union of the Minkowski sums
        // miss_a + stored_b, stored_a + miss_b, and miss_a + miss_b
        if let Some(sb) = b.stored_box() {
            for m in &a.win.missing {
                win.add_missing(m.minkowski(&sb));
            }
        }
        if let Some(sa) = a.stored_box() {
            for m in &b.win.missing {
                win.add_missing(m.minkowski(&sa));
            }
        }
        for ma in &a.win.missing {
            for mb in &b.win.missing {
                win.add_missing(ma.minkowski(mb));
            }
        }
        win.normalize();
        let mut terms: BTreeMap<Vec<i64>, Rat> = BTreeMap::new();
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e: Vec<i64> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                if !win.is_complete_at(&e) {
                    continue;
                }
                let entry = terms.entry(e).or_insert_with(Rat::zero);
                *entry += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(TruncatedSeries { vars, scale: self.scale, terms, win })
    }

    /// Restrict to a region: stored terms outside it are dropped and marked
    /// missing. Only stored terms can be lost this way, so the new missing
    /// boxes are clipped to the stored bounding box (everything else was
    /// already accounted for). `region` must be aligned with this series'
    /// variables.
    pub fn truncate(&self, region: &Region) -> Self {
        let mut out = self.clone();
        if let Some(sb) = self.stored_box() {
            for b in region.complement() {
                out.win.add_missing(b.intersect(&sb));
            }
        }
        out.win.normalize();
        let win = out.win.clone();
        out.terms.retain(|e, _| win.is_complete_at(e));
        out
    }

    /// Forget every missing box that does not touch `region` and mark the
    /// whole outside of `region` missing instead (clipped to the structural
    /// support, not the stored box: the dropped boxes may have covered
    /// never-stored territory). Keeps window bookkeeping small across large
    /// sums at the cost of completeness outside `region`.
    pub fn coarsen(&self, region: &Region) -> Self {
        let mut out = self.clone();
        out.win.missing.retain(|b| !b.disjoint(region));
        for b in region.complement() {
            out.win.add_missing(b);
        }
        out.win.normalize();
        let win = out.win.clone();
        out.terms.retain(|e, _| win.is_complete_at(e));
        out
    }

    // ----- variable substitutions ----------------------------------------

    /// Substitute var -> -var (integer-exponent series only).
    pub fn negate_var(&self, var: &str) -> Result<Self> {
        if self.scale != 1 {
            return Err(Error::IncompatibleSeries(
                "negate_var needs integer exponents (scale 1)".into(),
            ));
        }
        let idx = self.var_index(var)?;
        let mut out = self.clone();
        out.terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let c = if e[idx].rem_euclid(2) == 1 { -c.clone() } else { c.clone() };
                (e.clone(), c)
            })
            .collect();
        Ok(out)
    }

    /// Identify `removed` with `kept` (set both variables equal), e.g. to
    /// form the diagonal A(z, z).
    pub fn identify_vars(&self, kept: &str, removed: &str) -> Result<Self> {
        let ik = self.var_index(kept)?;
        let ir = self.var_index(removed)?;
        if ik == ir {
            return Err(Error::IncompatibleSeries("identify_vars needs distinct variables".into()));
        }
        let new_vars: Vec<String> = self
            .vars
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != ir)
            .map(|(_, v)| v.clone())
            .collect();
        let map_index = |i: usize| -> usize {
            let target = if i == ir { ik } else { i };
            new_vars
                .iter()
                .position(|v| v == &self.vars[target])
                .expect("kept variable survives")
        };
        let nn = new_vars.len();
        let proj = |e: &[i64]| -> Vec<i64> {
            let mut ne = vec![0i64; nn];
            for (i, &x) in e.iter().enumerate() {
                ne[map_index(i)] += x;
            }
            ne
        };
        let proj_region = |r: &Region| -> Region {
            let mut lo = vec![0i64; nn];
            let mut hi = vec![0i64; nn];
            let mut seen = vec![false; nn];
            for i in 0..self.vars.len() {
                let j = map_index(i);
                if !seen[j] {
                    lo[j] = r.var_min[i];
                    hi[j] = r.var_max[i];
                    seen[j] = true;
                } else {
                    lo[j] = add_lb(lo[j], r.var_min[i]);
                    hi[j] = add_ub(hi[j], r.var_max[i]);
                }
            }
            Region { var_min: lo, var_max: hi, tot_min: r.tot_min, tot_max: r.tot_max }
        };
        let mut win = Window::exact(proj_region(&self.win.support));
        for m in &self.win.missing {
            win.add_missing(proj_region(m));
        }
        win.normalize();
        let mut terms: BTreeMap<Vec<i64>, Rat> = BTreeMap::new();
        for (e, c) in &self.terms {
            let ne = proj(e);
            if !win.is_complete_at(&ne) {
                continue;
            }
            let entry = terms.entry(ne).or_insert_with(Rat::zero);
            *entry += c.clone();
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(TruncatedSeries { vars: new_vars, scale: self.scale, terms, win })
    }

    // ----- calculus -------------------------------------------------------

    /// Term-wise d/d(var). With scale 2, d/dz z^{h/2} = (h/2) z^{h/2-1}.
    pub fn formal_derivative(&self, var: &str) -> Result<Self> {
        let idx = self.var_index(var)?;
        let step = self.scale as i64;
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let factor = Rat::new(e[idx].into(), (self.scale as i64).into());
            if factor.is_zero() {
                continue;
            }
            let mut ne = e.clone();
            ne[idx] -= step;
            terms.insert(ne, c * factor);
        }
        Ok(TruncatedSeries {
            vars: self.vars.clone(),
            scale: self.scale,
            terms,
            win: Window {
                support: self.win.support.shift_var(idx, -step),
                missing: self.win.missing.iter().map(|b| b.shift_var(idx, -step)).collect(),
            },
        })
    }

    /// Multiply by var^k (k may be negative); exact shift. `k` is in stored
    /// units.
    pub fn shift_var(&self, var: &str, k: i64) -> Result<Self> {
        let idx = self.var_index(var)?;
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            ne[idx] += k;
            terms.insert(ne, c.clone());
        }
        Ok(TruncatedSeries {
            vars: self.vars.clone(),
            scale: self.scale,
            terms,
            win: Window {
                support: self.win.support.shift_var(idx, k),
                missing: self.win.missing.iter().map(|b| b.shift_var(idx, k)).collect(),
            },
        })
    }

    // ----- serialization --------------------------------------------------

    /// JSON per the export schema:
    /// `{"vars": [...], "scale": 1|2, "terms": [{"e": [...], "c": "p/q"}, ...]}`.
    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(e, c)| serde_json::json!({ "e": e, "c": format_rat(c) }))
            .collect();
        serde_json::json!({ "vars": self.vars, "scale": self.scale, "terms": terms })
    }

    /// Parse the export schema. The imported series is treated as an exact
    /// finite object: structural support = bounding box of the terms,
    /// complete everywhere.
    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::Parse("series: expected object".into()))?;
        let vars: Vec<String> = obj
            .get("vars")
            .and_then(|x| x.as_array())
            .ok_or_else(|| Error::Parse("series: missing vars".into()))?
            .iter()
            .map(|x| x.as_str().map(|s| s.to_string()))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Parse("series: bad vars".into()))?;
        let scale = obj
            .get("scale")
            .and_then(|x| x.as_u64())
            .ok_or_else(|| Error::Parse("series: missing scale".into()))? as u8;
        if scale != 1 && scale != 2 {
            return Err(Error::Parse(format!("series: bad scale {scale}")));
        }
        let mut terms = Vec::new();
        for t in obj
            .get("terms")
            .and_then(|x| x.as_array())
            .ok_or_else(|| Error::Parse("series: missing terms".into()))?
        {
            let e: Vec<i64> = t
                .get("e")
                .and_then(|x| x.as_array())
                .ok_or_else(|| Error::Parse("series: term missing e".into()))?
                .iter()
                .map(|x| x.as_i64())
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| Error::Parse("series: bad exponent".into()))?;
            if e.len() != vars.len() {
                return Err(Error::Parse("series: exponent arity mismatch".into()));
            }
            let c = parse_rat(
                t.get("c")
                    .and_then(|x| x.as_str())
                    .ok_or_else(|| Error::Parse("series: term missing c".into()))?,
            )?;
            terms.push((e, c));
        }
        let vars_ref: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
        Ok(Self::polynomial(&vars_ref, scale, &terms))
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", format_rat(c))?;
            for (v, &k) in self.vars.iter().zip(e) {
                if k != 0 {
                    if self.scale == 2 {
                        if k % 2 == 0 {
                            write!(f, "*{v}^{}", k / 2)?;
                        } else {
                            write!(f, "*{v}^{k}/2")?;
                        }
                    } else {
                        write!(f, "*{v}^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

// ----- region expansions -------------------------------------------------

/// The expansion of 1/(hi - lo)^power valid for |hi| > |lo|:
/// power 1: sum_{k>=0} hi^{-1-k} lo^k; power 2: sum_{k>=1} k hi^{-1-k} lo^{k-1}.
/// Truncated so every kept exponent has absolute value <= bound.
pub fn expand_inverse_difference(hi: &str, lo: &str, power: u8, bound: i64) -> Result<TruncatedSeries> {
    if hi == lo {
        return Err(Error::IncompatibleSeries(
            "expand_inverse_difference needs distinct variables".into(),
        ));
    }
    assert!(power == 1 || power == 2);
    assert!(bound >= 1);
    let mut vars = vec![hi.to_string(), lo.to_string()];
    vars.sort();
    let ih = vars.iter().position(|v| v == hi).unwrap();
    let il = 1 - ih;
    let mut terms: BTreeMap<Vec<i64>, Rat> = BTreeMap::new();
    for k in 0..bound {
        let mut e = vec![0i64; 2];
        let c = if power == 1 {
            e[ih] = -1 - k;
            e[il] = k;
            rat_int(1)
        } else {
            e[ih] = -2 - k;
            e[il] = k;
            rat_int(k + 1)
        };
        terms.insert(e, c);
    }
    let p = power as i64;
    let mut support = Region::all(2);
    support.var_max[ih] = -p;
    support.var_min[il] = 0;
    support.tot_min = -p;
    support.tot_max = -p;
    let mut win = Window::exact(support);
    let mut tail = Region::all(2);
    tail.var_max[ih] = -p - bound;
    win.add_missing(tail);
    Ok(TruncatedSeries { vars, scale: 1, terms, win })
}

// ----- exact division ------------------------------------------------------

/// Divisors for exact division: a single variable (pure exponent shift),
/// x - y, or x^2 - y^2. For the two-variable forms the first variable is the
/// descending pivot of the division recurrence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Divisor {
    Var(String),
    XMinusY(String, String),
    X2MinusY2(String, String),
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Divisor::Var(v) => write!(f, "{v}"),
            Divisor::XMinusY(a, b) => write!(f, "{a} - {b}"),
            Divisor::X2MinusY2(a, b) => write!(f, "{a}^2 - {b}^2"),
        }
    }
}

impl Divisor {
    /// The divisor as an exact polynomial over the given variable order.
    pub fn to_series(&self, vars: &[String], scale: u8) -> TruncatedSeries {
        let vr: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
        let pos = |name: &String| vars.iter().position(|v| v == name).expect("divisor var present");
        let unit = scale as i64;
        match self {
            Divisor::Var(v) => {
                let mut e = vec![0i64; vars.len()];
                e[pos(v)] = unit;
                TruncatedSeries::monomial(&vr, scale, &e, rat_int(1))
            }
            Divisor::XMinusY(a, b) => {
                let mut ea = vec![0i64; vars.len()];
                ea[pos(a)] = unit;
                let mut eb = vec![0i64; vars.len()];
                eb[pos(b)] = unit;
                TruncatedSeries::polynomial(&vr, scale, &[(ea, rat_int(1)), (eb, rat_int(-1))])
            }
            Divisor::X2MinusY2(a, b) => {
                let mut ea = vec![0i64; vars.len()];
                ea[pos(a)] = 2 * unit;
                let mut eb = vec![0i64; vars.len()];
                eb[pos(b)] = 2 * unit;
                TruncatedSeries::polynomial(&vr, scale, &[(ea, rat_int(1)), (eb, rat_int(-1))])
            }
        }
    }
}

/// Exact division `f / divisor`.
///
/// For the Var divisor this is a pure exponent shift. For x - y and
/// x^2 - y^2 the quotient is computed by the descending-pivot recurrence
/// q_{i-s} = f_i + y^s q_i; the caller may pass a `request` region on which
/// the quotient must be complete (mandatory when f has three or more
/// variables; auto-derived from f's window otherwise). Divisibility is
/// verified by multiplying back; a mismatch reports the first offending
/// coefficient.
pub fn exact_divide(
    f: &TruncatedSeries,
    divisor: &Divisor,
    request: Option<&Region>,
) -> Result<TruncatedSeries> {
    match divisor {
        Divisor::Var(v) => f.shift_var(v, -(f.scale() as i64)),
        Divisor::XMinusY(a, b) => divide_power_difference(f, a, b, 1, request, divisor),
        Divisor::X2MinusY2(a, b) => divide_power_difference(f, a, b, 2, request, divisor),
    }
}

fn divide_power_difference(
    f: &TruncatedSeries,
    a: &str,
    b: &str,
    step_vars: i64,
    request: Option<&Region>,
    divisor: &Divisor,
) -> Result<TruncatedSeries> {
    // Make sure both variables exist.
    let mut vars = f.vars.clone();
    for v in [a, b] {
        if !vars.iter().any(|w| w == v) {
            vars.push(v.to_string());
        }
    }
    vars.sort();
    let f = f.embed(&vars);
    let n = vars.len();
    let ia = vars.iter().position(|v| v == a).unwrap();
    let ib = vars.iter().position(|v| v == b).unwrap();
    let s = step_vars * f.scale as i64;

    // an empty structural support means the dividend is exactly zero
    if f.win.support.clone().propagate().is_none() {
        let vr: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
        return Ok(TruncatedSeries::zero(&vr, f.scale));
    }
    let supp = &f.win.support;
    if supp.var_max[ia] >= POS_INF {
        return Err(Error::WindowCollapse(format!(
            "cannot divide by {divisor}: series unbounded above in pivot {a}"
        )));
    }

    // Target region for the quotient.
    let region = match request {
        Some(r) => {
            assert_eq!(r.var_min.len(), n, "request region arity mismatch after alignment");
            r.clone()
        }
        None => {
            if n != 2 {
                return Err(Error::WindowCollapse(format!(
                    "division by {divisor} on {n} variables needs an explicit request region"
                )));
            }
            // derive the deepest certifiable lower bounds from f's missing
            // boxes: complete-from per variable and in total
            let mut comp_min = vec![NEG_INF; n];
            let mut comp_tot = NEG_INF;
            for m in &f.win.missing {
                for i in 0..n {
                    if is_fin(m.var_max[i]) {
                        comp_min[i] = comp_min[i].max(m.var_max[i] + 1);
                    }
                }
                if is_fin(m.tot_max) {
                    comp_tot = comp_tot.max(m.tot_max + 1);
                }
            }
            let fallback = |x: i64, alt: i64| if is_fin(x) { x } else { alt };
            let floor = supp.var_min[ia].min(supp.var_min[ib]).max(NEG_INF);
            let base_a = fallback(comp_min[ia], floor);
            let base_b = fallback(comp_min[ib], floor);
            let ra = if is_fin(base_a) { base_a - s } else { base_a };
            let pair = if is_fin(base_b) { add_ub(base_b, supp.var_max[ia] - s) } else { NEG_INF };
            let tot = {
                let t1 = if is_fin(comp_tot) { comp_tot - s } else { NEG_INF };
                t1.max(pair)
            };
            let mut var_min = vec![NEG_INF; n];
            var_min[ia] = ra;
            var_min[ib] = base_b;
            Region::above(var_min, tot)
        }
    };
    if !is_fin(region.var_min[ia]) {
        return Err(Error::WindowCollapse(format!(
            "division by {divisor}: request region unbounded below in pivot {a}"
        )));
    }

    // Certification: the recurrence for a target e in `region` needs f at
    // (e_a + s + s t, e_b - s t, rest) for 0 <= t <= (sup_max_a - e_a - s)/s.
    // Build a box containing all such argument points and require that no
    // missing box of f touches it.
    let qbox = {
        let mut r = region.clone();
        r.var_max[ia] = r.var_max[ia].min(supp.var_max[ia] - s);
        for j in 0..n {
            if j != ia {
                r.var_max[j] = r.var_max[j].min(supp.var_max[j]);
            }
        }
        r.var_max[ib] = r.var_max[ib].min(add_ub(supp.var_max[ia].max(supp.var_max[ib]), -s));
        if is_fin(supp.tot_min) {
            r.tot_min = r.tot_min.max(supp.tot_min - s);
        }
        if is_fin(supp.tot_max) {
            r.tot_max = r.tot_max.min(supp.tot_max - s);
        }
        r.propagate()
    };
    if let Some(qbox) = qbox {
        let t_span = supp.var_max[ia] - qbox.var_min[ia] - s; // s * t_max
        let args = {
            let mut r = qbox.clone();
            r.var_min[ia] = add_lb(qbox.var_min[ia], s);
            r.var_max[ia] = supp.var_max[ia];
            r.var_min[ib] = add_lb(qbox.var_min[ib], -t_span.max(0));
            // b-exponents never increase along the recurrence
            if is_fin(r.tot_min) {
                r.tot_min += s;
            }
            if is_fin(r.tot_max) {
                r.tot_max += s;
            }
            r
        };
        for m in &f.win.missing {
            if !m.disjoint(&args) {
                return Err(Error::WindowCollapse(format!(
                    "division by {divisor}: request needs coefficients inside a missing window \
                     (args reach {} in {})",
                    fmt_bound(args.var_min[ib]),
                    vars[ib]
                )));
            }
        }
    }

    // Slice recurrence, descending in the pivot: q_{i-s} = f_i + b^s q_i.
    type Slice = BTreeMap<Vec<i64>, Rat>;
    let strip = |e: &[i64]| -> Vec<i64> {
        e.iter().enumerate().filter(|(i, _)| *i != ia).map(|(_, &x)| x).collect()
    };
    let ib_stripped = if ib > ia { ib - 1 } else { ib };
    let mut f_slices: BTreeMap<i64, Slice> = BTreeMap::new();
    for (e, c) in &f.terms {
        f_slices.entry(e[ia]).or_default().insert(strip(e), c.clone());
    }
    let top = supp.var_max[ia];
    let bottom = region.var_min[ia];
    let mut q_slices: BTreeMap<i64, Slice> = BTreeMap::new();
    let mut level = top - s;
    while level >= bottom {
        let mut slice: Slice = f_slices.get(&(level + s)).cloned().unwrap_or_default();
        if let Some(above) = q_slices.get(&(level + s)) {
            for (rest, c) in above {
                let mut r = rest.clone();
                r[ib_stripped] += s;
                let entry = slice.entry(r).or_insert_with(Rat::zero);
                *entry += c.clone();
            }
        }
        slice.retain(|_, c| !c.is_zero());
        q_slices.insert(level, slice);
        level -= 1;
    }

    // Assemble the quotient.
    let mut q_terms: BTreeMap<Vec<i64>, Rat> = BTreeMap::new();
    let mut q_sup_b_max: i64 = NEG_INF;
    for (&lvl, slice) in &q_slices {
        for (rest, c) in slice {
            let mut e = Vec::with_capacity(n);
            let mut it = rest.iter();
            for i in 0..n {
                if i == ia {
                    e.push(lvl);
                } else {
                    e.push(*it.next().unwrap());
                }
            }
            if region.contains(&e) {
                q_sup_b_max = q_sup_b_max.max(e[ib]);
                q_terms.insert(e, c.clone());
            }
        }
    }

    // Expansion detection: a genuine quotient can have no terms above the
    // numerator's own degrees in the non-pivot variable of the divisor.
    let b_cap = add_ub(supp.var_max[ia].max(supp.var_max[ib]), -s);
    if q_sup_b_max > b_cap {
        let witness = q_terms
            .iter()
            .find(|(e, _)| e[ib] == q_sup_b_max)
            .map(|(e, c)| (e.clone(), format_rat(c)))
            .unwrap();
        return Err(Error::DivisionRemainder {
            divisor: divisor.to_string(),
            exponents: witness.0,
            coeff: witness.1,
        });
    }

    let mut q_support = supp.clone();
    q_support.var_max[ia] = supp.var_max[ia] - s;
    q_support.var_min[ia] = NEG_INF;
    q_support.var_max[ib] = b_cap;
    q_support.var_min[ib] = supp.var_min[ib].min(supp.var_min[ia]);
    q_support.tot_min = add_lb(supp.tot_min, -s);
    q_support.tot_max = add_ub(supp.tot_max, -s);
    let q = TruncatedSeries::from_parts(
        vars.clone(),
        f.scale,
        q_terms,
        q_support,
        region.clone(),
    );

    // Multiply back and compare with f on the common complete window: any
    // mismatch means the divisor does not divide f.
    let d = divisor.to_series(&vars, f.scale);
    let back = q.mul(&d)?;
    let mut keys: Vec<Vec<i64>> = back.terms.keys().cloned().collect();
    keys.extend(f.terms.keys().cloned());
    keys.sort();
    keys.dedup();
    for e in keys {
        if !back.win.is_complete_at(&e) || !f.win.is_complete_at(&e) {
            continue;
        }
        let lhs = back.terms.get(&e).cloned().unwrap_or_else(Rat::zero);
        let rhs = f.terms.get(&e).cloned().unwrap_or_else(Rat::zero);
        if lhs != rhs {
            let diff = &rhs - &lhs;
            return Err(Error::DivisionRemainder {
                divisor: divisor.to_string(),
                exponents: e,
                coeff: format_rat(&diff),
            });
        }
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn sv(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn add_and_mul_trivial() {
        // (1 + z^{-1}) + (-z^{-1}) = 1
        let a = TruncatedSeries::polynomial(&["z"], 1, &[(vec![0], rat_int(1)), (vec![-1], rat_int(1))]);
        let b = TruncatedSeries::monomial(&["z"], 1, &[-1], rat_int(-1));
        let s = a.add(&b).unwrap();
        assert_eq!(s.coefficient(&[0]).unwrap(), rat_int(1));
        assert_eq!(s.coefficient(&[-1]).unwrap(), rat_int(0));
        // z^{-1} * z^{-2} = z^{-3}
        let x = TruncatedSeries::monomial(&["z"], 1, &[-1], rat_int(1));
        let y = TruncatedSeries::monomial(&["z"], 1, &[-2], rat_int(1));
        let p = x.mul(&y).unwrap();
        assert_eq!(p.coefficient(&[-3]).unwrap(), rat_int(1));
        assert_eq!(p.coefficient(&[-2]).unwrap(), rat_int(0));
    }

    #[test]
    fn window_blocks_incomplete_queries() {
        // A tail known only down to z^{-3}: querying z^{-4} must error,
        // querying z^{+1} must return the structural zero.
        let t = TruncatedSeries::laurent_tail("z", 1, &[(0, rat_int(1)), (-3, rat(5, 24))], -3, 0);
        assert_eq!(t.coefficient(&[-3]).unwrap(), rat(5, 24));
        assert_eq!(t.coefficient(&[1]).unwrap(), rat_int(0));
        assert!(matches!(t.coefficient(&[-4]), Err(Error::IncompleteCoefficient { .. })));
    }

    #[test]
    fn mul_completeness_shrinks() {
        let t = TruncatedSeries::laurent_tail(
            "z",
            1,
            &[(0, rat_int(1)), (-1, rat_int(2)), (-2, rat_int(3)), (-3, rat_int(4))],
            -3,
            0,
        );
        let p = t.mul(&t).unwrap();
        assert_eq!(p.coefficient(&[-3]).unwrap(), rat_int(2 * 1 * 4 + 2 * 2 * 3));
        assert!(p.coefficient(&[-4]).is_err());
    }

    #[test]
    fn expansion_examples() {
        // (x, y, 1, bound): x^{-1} + x^{-2} y + x^{-3} y^2 ...
        let e = expand_inverse_difference("x", "y", 1, 3).unwrap();
        assert_eq!(e.vars(), &sv(&["x", "y"])[..]);
        assert_eq!(e.coefficient(&[-1, 0]).unwrap(), rat_int(1));
        assert_eq!(e.coefficient(&[-2, 1]).unwrap(), rat_int(1));
        assert_eq!(e.coefficient(&[-3, 2]).unwrap(), rat_int(1));
        assert_eq!(e.coefficient(&[-2, 0]).unwrap(), rat_int(0));
        // power 2: x^{-2} + 2 x^{-3} y + ...
        let e2 = expand_inverse_difference("x", "y", 2, 3).unwrap();
        assert_eq!(e2.coefficient(&[-2, 0]).unwrap(), rat_int(1));
        assert_eq!(e2.coefficient(&[-3, 1]).unwrap(), rat_int(2));
    }

    #[test]
    fn expansion_antisymmetry() {
        // i_{x,y} 1/(x-y) * (x - y) = 1 within the window.
        let e = expand_inverse_difference("x", "y", 1, 6).unwrap();
        let d = Divisor::XMinusY("x".into(), "y".into()).to_series(&sv(&["x", "y"]), 1);
        let p = e.mul(&d).unwrap();
        assert_eq!(p.coefficient(&[0, 0]).unwrap(), rat_int(1));
        for k in 1..4 {
            assert_eq!(p.coefficient(&[-k, k]).unwrap(), rat_int(0));
            assert_eq!(p.coefficient(&[-k - 1, k]).unwrap(), rat_int(0));
        }
    }

    #[test]
    fn divide_x_minus_y_example() {
        // f = x^{-1} - y^{-1} = -(x - y)/(xy): quotient -x^{-1} y^{-1}.
        let f = TruncatedSeries::polynomial(
            &["x", "y"],
            1,
            &[(vec![-1, 0], rat_int(1)), (vec![0, -1], rat_int(-1))],
        );
        let q = exact_divide(&f, &Divisor::XMinusY("x".into(), "y".into()), None).unwrap();
        assert_eq!(q.coefficient(&[-1, -1]).unwrap(), rat_int(-1));
        assert_eq!(q.coefficient(&[-1, 0]).unwrap(), rat_int(0));
    }

    #[test]
    fn divide_detects_remainder() {
        // f = 1 is not divisible by x - y.
        let f = TruncatedSeries::one(&["x", "y"], 1);
        let r = exact_divide(&f, &Divisor::XMinusY("x".into(), "y".into()), None);
        assert!(matches!(r, Err(Error::DivisionRemainder { .. }) | Err(Error::WindowCollapse(_))), "got {r:?}");
        // f = x^2 - y^2 divided by x - y = x + y.
        let f = TruncatedSeries::polynomial(
            &["x", "y"],
            1,
            &[(vec![2, 0], rat_int(1)), (vec![0, 2], rat_int(-1))],
        );
        let q = exact_divide(&f, &Divisor::XMinusY("x".into(), "y".into()), None).unwrap();
        assert_eq!(q.coefficient(&[1, 0]).unwrap(), rat_int(1));
        assert_eq!(q.coefficient(&[0, 1]).unwrap(), rat_int(1));
        // and a genuinely non-divisible series with the right shape
        let f = TruncatedSeries::polynomial(
            &["x", "y"],
            1,
            &[(vec![-1, 0], rat_int(1)), (vec![0, -1], rat_int(2))],
        );
        let r = exact_divide(&f, &Divisor::XMinusY("x".into(), "y".into()), None);
        assert!(matches!(r, Err(Error::DivisionRemainder { .. })), "got {r:?}");
    }

    #[test]
    fn divide_by_single_variable_shifts() {
        let f = TruncatedSeries::monomial(&["x", "y"], 1, &[2, -1], rat(3, 2));
        let q = exact_divide(&f, &Divisor::Var("x".into()), None).unwrap();
        assert_eq!(q.coefficient(&[1, -1]).unwrap(), rat(3, 2));
    }

    #[test]
    fn derivative_examples() {
        let f = TruncatedSeries::monomial(&["z"], 1, &[-3], rat_int(1));
        let d = f.formal_derivative("z").unwrap();
        assert_eq!(d.coefficient(&[-4]).unwrap(), rat_int(-3));
        let c = TruncatedSeries::one(&["z"], 1);
        let dc = c.formal_derivative("z").unwrap();
        assert!(dc.is_zero_on_window());
        // scale 2: d/dz z^{1/2} = (1/2) z^{-1/2}
        let h = TruncatedSeries::monomial(&["z"], 2, &[1], rat_int(1));
        let dh = h.formal_derivative("z").unwrap();
        assert_eq!(dh.coefficient(&[-1]).unwrap(), rat(1, 2));
    }

    #[test]
    fn identify_vars_diagonal() {
        // (x^{-1} y^{-2} + x^{-2} y^{-1}) at y = x: 2 x^{-3}.
        let f = TruncatedSeries::polynomial(
            &["x", "y"],
            1,
            &[(vec![-1, -2], rat_int(1)), (vec![-2, -1], rat_int(1))],
        );
        let d = f.identify_vars("x", "y").unwrap();
        assert_eq!(d.coefficient(&[-3]).unwrap(), rat_int(2));
    }

    #[test]
    fn truncate_marks_missing() {
        let f = TruncatedSeries::polynomial(
            &["x"],
            1,
            &[(vec![-1], rat_int(1)), (vec![-5], rat_int(7))],
        );
        let t = f.truncate(&Region::above(vec![-3], NEG_INF));
        assert_eq!(t.coefficient(&[-1]).unwrap(), rat_int(1));
        assert!(t.coefficient(&[-5]).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let f = TruncatedSeries::polynomial(
            &["x", "y"],
            1,
            &[(vec![-1, 2], rat(5, 24)), (vec![0, 0], rat_int(-3))],
        );
        let j = f.to_json();
        let g = TruncatedSeries::from_json(&j).unwrap();
        assert_eq!(g.coefficient(&[-1, 2]).unwrap(), rat(5, 24));
        assert_eq!(g.coefficient(&[0, 0]).unwrap(), rat_int(-3));
        let s = serde_json::to_string(&j).unwrap();
        assert!(s.contains("\"c\":\"5/24\""));
    }
}
