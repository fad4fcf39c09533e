//! Affine coordinates of the Witten-Kontsevich tau-function on the big cell
//! of the Sato Grassmannian, and the series built from them.
//!
//! The closed formulas split by n mod 3 (writing a_{n,m} for the coordinate
//! in row n, column m; everything vanishes unless n + m = 2 mod 3):
//!
//!   a_{3k,3j-1} = a_{3k+2,3j-3}
//!     = (-1)^k/36^{j+k} * (6j+1)!!/(2j+2k)! * prod_{i=0}^{k-1}(j+i)
//!       * prod_{i=1}^{k}(2j+2i-1) * (B_k(j) + 2^k (6k+1)!!/((2k)! (6j+1))),
//!   a_{3k+1,3j-2}
//!     = (-1)^{k+1}/36^{j+k} * (same prefactors) * (B_k(j) + 2^k (6k+1)!!/((2k)! (6j-1))),
//!
//! with B_k(j) = (1/6) sum_{i=1}^k 108^i * 2^{k-i} (6k-6i+1)!!/(2k-2i)! *
//! (j+k)!/(j+k-i+1)!. The same coordinates also satisfy a one-step string
//! recursion, which gives an independent route used as a cross-check, and
//! they are generated by the Faber-Zagier series a(z), b(z) through
//!
//!   sum a_{n,m} x^{-n-1} y^{-m-1} = 1/(y-x) + (a(y)b(-x) - a(-x)b(y))/(y^2-x^2).

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{big, factorial, format_rat, int_pow, odd_double_factorial, parse_rat, rat_int, Rat};
use crate::series::{exact_divide, Divisor, Region, TruncatedSeries, POS_INF};

// ----- coordinate tables ----------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableKind {
    Wk,
    Open,
}

impl fmt::Display for TableKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableKind::Wk => write!(f, "wk"),
            TableKind::Open => write!(f, "open"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableRoute {
    ClosedForm,
    Recursion,
}

impl fmt::Display for TableRoute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableRoute::ClosedForm => write!(f, "closed_form"),
            TableRoute::Recursion => write!(f, "recursion"),
        }
    }
}

/// A triangular grid of affine coordinates: every (n, m) with
/// n + m <= max_weight is populated (zeros included, so the mod-3 vanishing
/// is visible data, not absence).
#[derive(Clone, Debug)]
pub struct CoordTable {
    pub kind: TableKind,
    pub route: TableRoute,
    pub max_weight: u32,
    entries: BTreeMap<(u32, u32), Rat>,
}

impl CoordTable {
    pub fn new(kind: TableKind, route: TableRoute, max_weight: u32) -> Self {
        CoordTable { kind, route, max_weight, entries: BTreeMap::new() }
    }

    pub fn insert(&mut self, n: u32, m: u32, v: Rat) {
        debug_assert!(n + m <= self.max_weight);
        self.entries.insert((n, m), v);
    }

    /// Coordinate with zero-extension for negative indices. Panics only on
    /// indices beyond the populated grid (a programming error in callers
    /// that sized the table); use `try_get` for checked access.
    pub fn get(&self, n: i64, m: i64) -> Rat {
        self.try_get(n, m).unwrap()
    }

    pub fn try_get(&self, n: i64, m: i64) -> Result<Rat> {
        if n < 0 || m < 0 {
            return Ok(Rat::zero());
        }
        if n + m > self.max_weight as i64 {
            return Err(Error::TableCoverage {
                kind: self.kind.to_string(),
                max_weight: self.max_weight,
                n,
                m,
            });
        }
        Ok(self
            .entries
            .get(&(n as u32, m as u32))
            .cloned()
            .unwrap_or_else(Rat::zero))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(u32, u32), &Rat)> {
        self.entries.iter()
    }

    /// The generating series sum a_{n,m} x^{-n-1} y^{-m-1} restricted to the
    /// box n, m <= depth: entries beyond the box are left to the missing
    /// window even when the table knows them, which keeps the stored
    /// bounding box tight for downstream window propagation.
    pub fn generating_series(&self, var_x: &str, var_y: &str, depth: u32) -> Result<TruncatedSeries> {
        if 2 * depth > self.max_weight {
            return Err(Error::TableCoverage {
                kind: self.kind.to_string(),
                max_weight: self.max_weight,
                n: depth as i64,
                m: depth as i64,
            });
        }
        let mut vars = vec![var_x.to_string(), var_y.to_string()];
        vars.sort();
        let ix = vars.iter().position(|v| v == var_x).unwrap();
        let iy = 1 - ix;
        let d = depth as i64;
        let mut terms: BTreeMap<Vec<i64>, Rat> = BTreeMap::new();
        for (&(n, m), c) in &self.entries {
            if c.is_zero() || n > depth || m > depth {
                continue;
            }
            let mut e = vec![0i64; 2];
            e[ix] = -(n as i64) - 1;
            e[iy] = -(m as i64) - 1;
            terms.insert(e, c.clone());
        }
        let mut support = Region::all(2);
        support.var_max[ix] = -1;
        support.var_max[iy] = -1;
        support.tot_max = -2;
        let mut complete = Region::all(2);
        complete.var_min[ix] = -d - 1;
        complete.var_min[iy] = -d - 1;
        Ok(TruncatedSeries::from_parts(vars, 1, terms, support, complete))
    }

    /// The generating series over the whole stored triangle n + m <=
    /// max_weight, complete for total degree >= -(max_weight + 2). Deeper in
    /// total degree than the box variant, at the cost of a wide stored box.
    pub fn generating_series_full(&self, var_x: &str, var_y: &str) -> TruncatedSeries {
        let mut vars = vec![var_x.to_string(), var_y.to_string()];
        vars.sort();
        let ix = vars.iter().position(|v| v == var_x).unwrap();
        let iy = 1 - ix;
        let mut terms: BTreeMap<Vec<i64>, Rat> = BTreeMap::new();
        for (&(n, m), c) in &self.entries {
            if c.is_zero() {
                continue;
            }
            let mut e = vec![0i64; 2];
            e[ix] = -(n as i64) - 1;
            e[iy] = -(m as i64) - 1;
            terms.insert(e, c.clone());
        }
        let mut support = Region::all(2);
        support.var_max[ix] = -1;
        support.var_max[iy] = -1;
        support.tot_max = -2;
        let mut complete = Region::all(2);
        complete.tot_min = -(self.max_weight as i64) - 2;
        TruncatedSeries::from_parts(vars, 1, terms, support, complete)
    }

    /// Serialize as the series JSON schema plus a header.
    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .entries
            .iter()
            .map(|(&(n, m), c)| serde_json::json!({ "e": [n, m], "c": format_rat(c) }))
            .collect();
        serde_json::json!({
            "kind": self.kind.to_string(),
            "max_weight": self.max_weight,
            "route": self.route.to_string(),
            "vars": ["n", "m"],
            "scale": 1,
            "terms": terms,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::Parse("table: expected object".into()))?;
        let kind = match obj.get("kind").and_then(|x| x.as_str()) {
            Some("wk") => TableKind::Wk,
            Some("open") => TableKind::Open,
            other => return Err(Error::Parse(format!("table: bad kind {other:?}"))),
        };
        let route = match obj.get("route").and_then(|x| x.as_str()) {
            Some("closed_form") => TableRoute::ClosedForm,
            Some("recursion") => TableRoute::Recursion,
            other => return Err(Error::Parse(format!("table: bad route {other:?}"))),
        };
        let max_weight = obj
            .get("max_weight")
            .and_then(|x| x.as_u64())
            .ok_or_else(|| Error::Parse("table: missing max_weight".into()))? as u32;
        let mut table = CoordTable::new(kind, route, max_weight);
        for t in obj
            .get("terms")
            .and_then(|x| x.as_array())
            .ok_or_else(|| Error::Parse("table: missing terms".into()))?
        {
            let e = t.get("e").and_then(|x| x.as_array()).ok_or_else(|| Error::Parse("table: bad term".into()))?;
            if e.len() != 2 {
                return Err(Error::Parse("table: exponent arity".into()));
            }
            let n = e[0].as_u64().ok_or_else(|| Error::Parse("table: bad n".into()))? as u32;
            let m = e[1].as_u64().ok_or_else(|| Error::Parse("table: bad m".into()))? as u32;
            let c = parse_rat(t.get("c").and_then(|x| x.as_str()).ok_or_else(|| Error::Parse("table: bad c".into()))?)?;
            if n + m > max_weight {
                return Err(Error::Parse(format!("table: entry ({n},{m}) beyond max_weight {max_weight}")));
            }
            table.insert(n, m, c);
        }
        Ok(table)
    }

    /// Restrict to a smaller weight (used when serving a request from a
    /// larger cached table, keeping outputs identical to a fresh build).
    pub fn sliced(&self, max_weight: u32) -> CoordTable {
        assert!(max_weight <= self.max_weight);
        let mut t = CoordTable::new(self.kind, self.route, max_weight);
        for (&(n, m), c) in &self.entries {
            if n + m <= max_weight {
                t.insert(n, m, c.clone());
            }
        }
        t
    }
}

// ----- closed formulas -------------------------------------------------------

/// B_n(m) = (1/6) sum_{j=1}^n 108^j * 2^{n-j} (6n-6j+1)!!/(2n-2j)! * (m+n)!/(m+n-j+1)!.
pub fn wk_b(n: u32, m: u32) -> Rat {
    let mut sum = Rat::zero();
    for j in 1..=n {
        let mut num = int_pow(108, j);
        num *= int_pow(2, n - j);
        num *= odd_double_factorial(6 * (n as i64) - 6 * (j as i64) + 1);
        // (m+n)!/(m+n-j+1)! = product of (m+n-j+2 ..= m+n)
        let mut falling = BigInt::one();
        for t in (m + n - j + 2)..=(m + n) {
            falling *= big(t as i64);
        }
        num *= falling;
        sum += Rat::new(num, factorial(2 * (n as u64 - j as u64)));
    }
    sum / rat_int(6)
}

fn wk_case_common(k: u32, j: u32) -> Rat {
    // (-1)^k / 36^{j+k} * (6j+1)!!/(2j+2k)! * prod_{i=0}^{k-1}(j+i) * prod_{i=1}^{k}(2j+2i-1)
    let mut num = odd_double_factorial(6 * j as i64 + 1);
    for i in 0..k {
        num *= big((j + i) as i64);
    }
    for i in 1..=k {
        num *= big(2 * (j + i) as i64 - 1);
    }
    if k % 2 == 1 {
        num = -num;
    }
    let den = int_pow(36, j + k) * factorial(2 * (j as u64 + k as u64));
    Rat::new(num, den)
}

/// a_{n,m} for the Witten-Kontsevich tau-function by the closed formula;
/// zero when n + m is not congruent to 2 mod 3.
pub fn wk_coord(n: u32, m: u32) -> Rat {
    if (n + m) % 3 != 2 {
        return Rat::zero();
    }
    match n % 3 {
        0 => {
            // n = 3k, m = 3j-1
            let k = n / 3;
            let j = (m + 1) / 3;
            let bracket = wk_b(k, j)
                + Rat::new(
                    int_pow(2, k) * odd_double_factorial(6 * k as i64 + 1),
                    factorial(2 * k as u64) * big(6 * j as i64 + 1),
                );
            wk_case_common(k, j) * bracket
        }
        1 => {
            // n = 3k+1, m = 3j-2
            let k = (n - 1) / 3;
            let j = m.div_ceil(3);
            let bracket = wk_b(k, j)
                + Rat::new(
                    int_pow(2, k) * odd_double_factorial(6 * k as i64 + 1),
                    factorial(2 * k as u64) * big(6 * j as i64 - 1),
                );
            -wk_case_common(k, j) * bracket
        }
        _ => {
            // n = 3k+2, m = 3j-3: equal to the (3k, 3j-1) case
            let k = (n - 2) / 3;
            let j = (m + 3) / 3;
            let bracket = wk_b(k, j)
                + Rat::new(
                    int_pow(2, k) * odd_double_factorial(6 * k as i64 + 1),
                    factorial(2 * k as u64) * big(6 * j as i64 + 1),
                );
            wk_case_common(k, j) * bracket
        }
    }
}

/// Row n = 0 of the table: a_{0,3q-1} = (6q+1)!!/(36^q (2q)! (6q+1)); these
/// are the Faber-Zagier coefficients.
pub fn wk_row0(m: u32) -> Rat {
    if m % 3 != 2 {
        return Rat::zero();
    }
    let q = (m + 1) / 3;
    Rat::new(
        odd_double_factorial(6 * q as i64 + 1),
        int_pow(36, q) * factorial(2 * q as u64) * big(6 * q as i64 + 1),
    )
}

/// The full closed-form table for n + m <= max_weight.
pub fn wk_table_closed(max_weight: u32) -> CoordTable {
    let mut t = CoordTable::new(TableKind::Wk, TableRoute::ClosedForm, max_weight);
    for n in 0..=max_weight {
        for m in 0..=(max_weight - n) {
            t.insert(n, m, wk_coord(n, m));
        }
    }
    t
}

/// One step of the string-equation recursion: a_{n+1,m} from entries of
/// weight n+m+1 and lower,
///
///   a_{n+1,m} = a_{n,m+1} - a_{0,m} a_{n,0} - (m-1/2) a_{n,m-2} - (n-1/2) a_{n-2,m},
///
/// valid for n + m >= 2. The prerequisite entries must be in the table.
pub fn wk_coord_step(n: u32, m: u32, table: &CoordTable) -> Result<Rat> {
    assert!(n + m >= 2, "string recursion needs n + m >= 2");
    let n = n as i64;
    let m = m as i64;
    let v = table.try_get(n, m + 1)?
        - table.try_get(0, m)? * table.try_get(n, 0)?
        - (rat_int(m) - Rat::new(1.into(), 2.into())) * table.try_get(n, m - 2)?
        - (rat_int(n) - Rat::new(1.into(), 2.into())) * table.try_get(n - 2, m)?;
    Ok(v)
}

/// The table generated by the string recursion, seeded with the row n = 0
/// closed form and the weight-2 values of rows 1 and 2.
pub fn wk_table_recursive(max_weight: u32) -> CoordTable {
    let mut t = CoordTable::new(TableKind::Wk, TableRoute::Recursion, max_weight);
    // Seed row 0 (Faber-Zagier coefficients) across the whole grid.
    for m in 0..=max_weight {
        t.insert(0, m, wk_row0(m));
    }
    // Seed the remaining weight <= 2 entries from the first-rows formulas.
    if max_weight >= 1 {
        t.insert(1, 0, Rat::zero());
    }
    if max_weight >= 2 {
        // a_{1,1} = -(1/36)*(7!!/2!)*(1/5) = -7/24, a_{2,0} = 5/24.
        t.insert(1, 1, Rat::new(big(-7), big(24)));
        t.insert(2, 0, Rat::new(big(5), big(24)));
    }
    for w in 3..=max_weight {
        // Fill the shell n + m = w downward from (1, w-1), which the string
        // step derives from the seeded (0, w).
        for n in 0..w {
            let m = w - 1 - n;
            let v = wk_coord_step(n, m, &t).expect("prerequisites filled by weight order");
            t.insert(n + 1, m, v);
        }
    }
    t
}

// ----- Faber-Zagier series ---------------------------------------------------

/// a(z) = sum_{m>=0} (6m-1)!!/(36^m (2m)!) z^{-3m}, complete to z^{-3*depth}.
pub fn faber_zagier_a(var: &str, depth: u32) -> TruncatedSeries {
    let mut terms = Vec::new();
    for m in 0..=depth {
        let c = Rat::new(odd_double_factorial(6 * m as i64 - 1), int_pow(36, m) * factorial(2 * m as u64));
        terms.push((-(3 * m as i64), c));
    }
    TruncatedSeries::laurent_tail(var, 1, &terms, -(3 * depth as i64), 0)
}

/// b(z) = -sum_{m>=0} (6m-1)!!/(36^m (2m)!) * (6m+1)/(6m-1) * z^{-3m+1};
/// leading term +z.
pub fn faber_zagier_b(var: &str, depth: u32) -> TruncatedSeries {
    let mut terms = Vec::new();
    for m in 0..=depth {
        let c = -Rat::new(
            odd_double_factorial(6 * m as i64 - 1) * big(6 * m as i64 + 1),
            int_pow(36, m) * factorial(2 * m as u64) * big(6 * m as i64 - 1),
        );
        terms.push((-(3 * m as i64) + 1, c));
    }
    TruncatedSeries::laurent_tail(var, 1, &terms, -(3 * depth as i64) + 1, 1)
}

/// The generating series A(x, y) = sum a_{n,m} x^{-n-1} y^{-m-1} of the
/// Witten-Kontsevich coordinates, computed by exact division:
///
///   A(x, y) = -[(x + y) + a(y)b(-x) - a(-x)b(y)] / (x^2 - y^2).
///
/// The divisibility check is itself a verification of the Faber-Zagier
/// relation a(z)b(-z) - a(-z)b(z) = -2z. The result is complete on the box
/// of coordinates n, m <= depth.
pub fn wk_generating(depth: u32) -> Result<TruncatedSeries> {
    let d = depth as i64;
    // Numerator complete deep enough that the quotient is certified on the
    // requested box: the division costs sup_max_x - s = 0 extra in the pair
    // direction, so 2*depth + a margin suffices.
    let build = 2 * depth + 4;
    let ay = faber_zagier_a("y", build);
    let bx = faber_zagier_b("x", build);
    let ax = faber_zagier_a("x", build);
    let by = faber_zagier_b("y", build);
    let xy = TruncatedSeries::polynomial(
        &["x", "y"],
        1,
        &[(vec![1, 0], rat_int(1)), (vec![0, 1], rat_int(1))],
    );
    let num = xy
        .add(&ay.mul(&bx.negate_var("x")?)?)?
        .sub(&ax.negate_var("x")?.mul(&by)?)?;
    let request = Region::above(vec![-2 * d - 3, -2 * d - 3], -2 * d - 4);
    let q = exact_divide(&num, &Divisor::X2MinusY2("x".into(), "y".into()), Some(&request))?;
    let a = q.neg().truncate(&Region {
        var_min: vec![-d - 1, -d - 1],
        var_max: vec![POS_INF, POS_INF],
        tot_min: -2 * d - 2,
        tot_max: POS_INF,
    });
    Ok(a)
}

/// G^{WK}_{(1)}(z) = sum_{g>=1} (6g-3)!!/(24^g g!) z^{-6g+2}; the one-point
/// series of the Witten-Kontsevich tau-function. Complete to z^{-depth}.
pub fn wk_onepoint(depth: u32) -> TruncatedSeries {
    let mut terms = Vec::new();
    let mut g = 1u32;
    while 6 * g as i64 - 2 <= depth as i64 {
        let c = Rat::new(odd_double_factorial(6 * g as i64 - 3), int_pow(24, g) * factorial(g as u64));
        terms.push((-(6 * g as i64) + 2, c));
        g += 1;
    }
    TruncatedSeries::laurent_tail("z", 1, &terms, -(depth as i64), -4)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn b_examples() {
        assert_eq!(wk_b(0, 5), Rat::zero());
        assert_eq!(wk_b(1, 0), rat_int(18));
        assert_eq!(wk_b(1, 1), rat_int(18));
        assert_eq!(wk_b(1, 7), rat_int(18));
    }

    #[test]
    fn coord_examples() {
        assert_eq!(wk_coord(0, 0), Rat::zero());
        assert_eq!(wk_coord(0, 2), rat(5, 24));
        assert_eq!(wk_coord(1, 1), rat(-7, 24));
        assert_eq!(wk_coord(2, 0), rat(5, 24));
        assert_eq!(wk_coord(3, 2), rat(-385, 1152));
        assert_eq!(wk_coord(1, 4), rat(-455, 1152));
        assert_eq!(wk_coord(5, 0), rat(-385, 1152));
    }

    #[test]
    fn row0_matches_closed_form() {
        for m in 0..20 {
            assert_eq!(wk_row0(m), wk_coord(0, m));
        }
    }

    #[test]
    fn first_rows_match_general_formula() {
        // Rows n = 0, 1, 2 against the special formulas for all m <= 13*3.
        for q in 1..=13u32 {
            let common = Rat::new(
                odd_double_factorial(6 * q as i64 + 1),
                int_pow(36, q) * factorial(2 * q as u64),
            );
            assert_eq!(wk_coord(0, 3 * q - 1), common.clone() / rat_int(6 * q as i64 + 1));
            assert_eq!(wk_coord(1, 3 * q - 2), -common.clone() / rat_int(6 * q as i64 - 1));
            assert_eq!(wk_coord(2, 3 * q - 3), common / rat_int(6 * q as i64 + 1));
        }
    }

    #[test]
    fn symmetry_and_mod3() {
        let w = 16;
        for n in 0..=w {
            for m in 0..=(w - n) {
                let v = wk_coord(n, m);
                if (n + m) % 3 != 2 {
                    assert!(v.is_zero(), "({n},{m}) should vanish");
                }
                let sign = if (n + m) % 2 == 0 { 1 } else { -1 };
                assert_eq!(v, wk_coord(m, n) * rat_int(sign), "symmetry at ({n},{m})");
            }
        }
    }

    #[test]
    fn recursion_route_matches_closed_form() {
        let w = 20;
        let rec = wk_table_recursive(w);
        for n in 0..=w {
            for m in 0..=(w - n) {
                assert_eq!(rec.get(n as i64, m as i64), wk_coord(n, m), "mismatch at ({n},{m})");
            }
        }
    }

    #[test]
    fn faber_zagier_leading_terms() {
        let a = faber_zagier_a("z", 4);
        assert_eq!(a.coefficient1(0).unwrap(), rat_int(1));
        assert_eq!(a.coefficient1(-3).unwrap(), rat(5, 24));
        let b = faber_zagier_b("z", 4);
        assert_eq!(b.coefficient1(1).unwrap(), rat_int(1));
        assert_eq!(b.coefficient1(-2).unwrap(), rat(-7, 24));
    }

    #[test]
    fn relation_ab_holds() {
        // a(z)b(-z) - a(-z)b(z) = -2z to order 30.
        let depth = 10; // z^{-30}
        let a = faber_zagier_a("z", depth);
        let b = faber_zagier_b("z", depth);
        let am = a.negate_var("z").unwrap();
        let bm = b.negate_var("z").unwrap();
        let lhs = a.mul(&bm).unwrap().sub(&am.mul(&b).unwrap()).unwrap();
        assert_eq!(lhs.coefficient1(1).unwrap(), rat_int(-2));
        for e in (-(3 * depth as i64 - 2)..=0).rev() {
            assert_eq!(lhs.coefficient1(e).unwrap(), Rat::zero(), "residual at z^{e}");
        }
    }

    #[test]
    fn generating_series_matches_table() {
        let depth = 7;
        let a = wk_generating(depth).unwrap();
        assert_eq!(a.coefficient(&[-1, -3]).unwrap(), rat(5, 24)); // a_{0,2}
        assert_eq!(a.coefficient(&[-2, -2]).unwrap(), rat(-7, 24)); // a_{1,1}
        for n in 0..=depth {
            for m in 0..=(depth - n) {
                let c = a.coefficient(&[-(n as i64) - 1, -(m as i64) - 1]).unwrap();
                assert_eq!(c, wk_coord(n, m), "generating series vs closed form at ({n},{m})");
            }
        }
        // normalized-basis property: nothing at nonnegative exponents
        assert_eq!(a.coefficient(&[0, -3]).unwrap(), Rat::zero());
        assert_eq!(a.coefficient(&[2, -1]).unwrap(), Rat::zero());
    }

    #[test]
    fn onepoint_examples() {
        let g = wk_onepoint(12);
        assert_eq!(g.coefficient1(-4).unwrap(), rat(1, 8));
        assert_eq!(g.coefficient1(-10).unwrap(), rat(105, 128)); // 9!!/(24^2*2!) = 945/1152
        // support: only exponents = 2 mod 6
        for e in -12..=-1i64 {
            if e.rem_euclid(6) != 2 {
                assert_eq!(g.coefficient1(e).unwrap(), Rat::zero());
            }
        }
    }

    #[test]
    fn onepoint_matches_generating_diagonal() {
        let depth = 8;
        let a = wk_generating(depth).unwrap();
        let diag = a.identify_vars("x", "y").unwrap();
        let g = wk_onepoint(2 * depth);
        for e in -(depth as i64 + 2)..=-2 {
            assert_eq!(
                diag.coefficient1(e).unwrap(),
                g.coefficient1(e).unwrap(),
                "diagonal vs one-point at z^{e}"
            );
        }
    }
}
