//! Connected n-point functions of the open and Witten-Kontsevich
//! tau-functions, and the boundary-sector correlators.
//!
//! The workhorse is the cycle formula
//!
//!   G_(n)(z_1..z_n) = (-1)^{n-1} sum_{n-cycles sigma} prod_i A-hat(z_{sigma(i)}, z_{sigma(i+1)})
//!                      - delta_{n,2}/(z_1-z_2)^2,
//!
//! where A-hat(z_i, z_j) adds to the coordinate generating series the expansion
//! of 1/(z_i - z_j) in the region |z_i| > |z_j| for i < j (and in
//! |z_j| > |z_i| for i > j): the unique convention reproducing the known
//! coefficient tables. For n = 2 the two bare propagators and the delta-term
//! cancel analytically first,
//!
//!   G_(2) = (A(z_1,z_2) - A(z_2,z_1))/(z_1 - z_2) - A(z_1,z_2) A(z_2,z_1),
//!
//! which is also the only convergent route coefficient-wise. Positive
//! exponents surviving a cycle sum abort the computation instead of leaking
//! into results.
//!
//! The closed 1/2/3-point forms are evaluated over a common denominator with
//! every division exact, and are route-checked against the cycle formula in
//! the tests and the acceptance suite.

use crate::error::{Error, Result};
use crate::open;
use crate::rational::{format_rat, rat, rat_int, Rat};
use crate::series::{
    exact_divide, expand_inverse_difference, Divisor, Region, TruncatedSeries, NEG_INF, POS_INF,
};
use crate::wk::{self, CoordTable};

/// Which free energy the correlators differentiate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CorrelatorKind {
    /// log of the extended open tau-function.
    Open,
    /// log of the Witten-Kontsevich tau-function.
    Wk,
    /// The boundary sector: open minus Witten-Kontsevich.
    Ext,
}

impl std::fmt::Display for CorrelatorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CorrelatorKind::Open => write!(f, "open"),
            CorrelatorKind::Wk => write!(f, "wk"),
            CorrelatorKind::Ext => write!(f, "ext"),
        }
    }
}

/// A connected n-point series: coefficients of z_1^{-j_1-1}..z_n^{-j_n-1}
/// with j_i >= 1, complete for sum (j_i + 1) <= degree_bound.
#[derive(Clone, Debug)]
pub struct NPointSeries {
    pub n: usize,
    pub kind: CorrelatorKind,
    pub degree_bound: u32,
    pub series: TruncatedSeries,
}

impl NPointSeries {
    /// Coefficient of prod z_i^{-j_i-1}.
    pub fn coeff(&self, j: &[u32]) -> Result<Rat> {
        assert_eq!(j.len(), self.n);
        let e: Vec<i64> = j.iter().map(|&ji| -(ji as i64) - 1).collect();
        self.series.coefficient(&e)
    }

    /// JSON: the series schema plus a header.
    pub fn to_json(&self) -> serde_json::Value {
        let mut v = self.series.to_json();
        let obj = v.as_object_mut().unwrap();
        obj.insert("kind".into(), serde_json::json!(self.kind.to_string()));
        obj.insert("points".into(), serde_json::json!(self.n));
        obj.insert("degree".into(), serde_json::json!(self.degree_bound));
        v
    }

    /// Flat CSV lines `j_1,...,j_n,coefficient` (header included), sorted by
    /// exponent vector.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 1..=self.n {
            out.push_str(&format!("j{i},"));
        }
        out.push_str("coefficient\n");
        for (e, c) in self.series.terms() {
            for x in e {
                out.push_str(&format!("{},", -x - 1));
            }
            out.push_str(&format_rat(c));
            out.push('\n');
        }
        out
    }
}

fn zvars(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("z{i}")).collect()
}

fn base_table(kind: CorrelatorKind, weight: u32) -> CoordTable {
    match kind {
        CorrelatorKind::Open => open::open_table_closed(weight),
        CorrelatorKind::Wk => wk::wk_table_closed(weight),
        CorrelatorKind::Ext => unreachable!("ext has no coordinate table"),
    }
}

/// Final clean-up shared by every route: check that nothing with an exponent
/// above -2 survived (within the complete window), then restrict to the
/// reported window and verify it covers the requested degree.
fn finish(
    series: TruncatedSeries,
    n: usize,
    kind: CorrelatorKind,
    degree: u32,
) -> Result<NPointSeries> {
    let d = degree as i64;
    let nv = series.vars().len();
    for (e, c) in series.terms() {
        if e.iter().any(|&x| x >= -1) {
            return Err(Error::CancellationFailure {
                exponents: e.clone(),
                coeff: format_rat(c),
            });
        }
    }
    let target = Region {
        var_min: vec![-(d - 2 * (n as i64 - 1)); nv],
        var_max: vec![-2; nv],
        tot_min: -d,
        tot_max: -2 * n as i64,
    };
    // the computed window must cover the whole requested degree range
    if !series.window().covers(&target) {
        return Err(Error::TruncationTooShallow(format!(
            "n-point window does not cover total degree {degree}"
        )));
    }
    Ok(NPointSeries { n, kind, degree_bound: degree, series: series.truncate(&target) })
}

/// G_(1)(z) = A(z, z), the diagonal of the generating series.
fn onepoint_cycle(kind: CorrelatorKind, degree: u32) -> Result<NPointSeries> {
    let table = base_table(kind, degree + 2);
    let a = table.generating_series_full("z1", "z2");
    let diag = a.identify_vars("z1", "z2")?;
    finish(diag, 1, kind, degree)
}

/// The analytically reduced two-point route.
fn twopoint_cycle(kind: CorrelatorKind, degree: u32) -> Result<TruncatedSeries> {
    let w = degree as i64 + 2;
    let table = base_table(kind, degree + 2);
    let a12 = table.generating_series_full("z1", "z2");
    let a21 = table.generating_series_full("z2", "z1");
    let num = a12.sub(&a21)?;
    // the numerator is complete for total degree >= -(w+2); the quotient
    // inherits completeness one total degree higher
    let request = Region::above(vec![-w, -w], -w - 1);
    let q = exact_divide(&num, &Divisor::XMinusY("z1".into(), "z2".into()), Some(&request))?;
    let prod = a12.mul(&a21)?;
    q.sub(&prod)
}

/// All n-cycles on {1..n} as vertex sequences starting at 1.
fn cycles(n: usize) -> Vec<Vec<usize>> {
    let mut rest: Vec<usize> = (2..=n).collect();
    let mut out = Vec::new();
    permute(&mut rest, 0, &mut |perm| {
        let mut c = Vec::with_capacity(n);
        c.push(1);
        c.extend_from_slice(perm);
        out.push(c);
    });
    out
}

fn permute(v: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, f);
        v.swap(k, i);
    }
}

/// The general cycle route for n >= 3: each factor A-hat = A + P is distributed,
/// so every partial product keeps a sharp window (the bare propagators sit on
/// the exact total-degree line sum e = -1, which is what makes the truncated
/// products certifiable).
fn npoint_cycle(kind: CorrelatorKind, n: usize, degree: u32) -> Result<NPointSeries> {
    assert!(n >= 3);
    let d = degree as i64;
    let bound = d + 2;
    let table = base_table(kind, 2 * degree + 6);
    let vars = zvars(n);
    let vars_ref: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();

    // A(z_i, z_j) and the region propagator for every ordered pair, built
    // once and shared across cycles.
    let mut a_series = std::collections::BTreeMap::new();
    let mut p_series = std::collections::BTreeMap::new();
    for i in 1..=n {
        for j in 1..=n {
            if i == j {
                continue;
            }
            a_series.insert(
                (i, j),
                table.generating_series(&format!("z{i}"), &format!("z{j}"), degree + 2)?,
            );
            let p = if i < j {
                expand_inverse_difference(&format!("z{i}"), &format!("z{j}"), 1, bound)?
            } else {
                expand_inverse_difference(&format!("z{j}"), &format!("z{i}"), 1, bound)?.neg()
            };
            p_series.insert((i, j), p);
        }
    }

    // Cancellation of the retained positive exponents is asserted on this
    // audit region before the final restriction to negative exponents.
    let audit = Region {
        var_min: vec![-(d - 2 * (n as i64 - 1)); n],
        var_max: vec![d + 1; n],
        tot_min: -d,
        tot_max: POS_INF,
    };
    let mut total = TruncatedSeries::zero(&vars_ref, 1);
    let mut first = true;
    for cycle in cycles(n) {
        let edges: Vec<(usize, usize)> = (0..n).map(|k| (cycle[k], cycle[(k + 1) % n])).collect();
        for mask in 0u32..(1 << n) {
            let mut prod: Option<TruncatedSeries> = None;
            for (k, &(i, j)) in edges.iter().enumerate() {
                let factor = if mask & (1 << k) != 0 { &p_series[&(i, j)] } else { &a_series[&(i, j)] }.clone();
                let remaining = (n - 1 - k) as i64;
                prod = Some(match prod {
                    None => factor,
                    Some(p) => {
                        let q = p.mul(&factor)?;
                        // prune: remaining factors add at most -1 each to the
                        // total degree, and at most `bound` per variable
                        let keep = Region {
                            var_min: vec![-(d + bound + 2); q.vars().len()],
                            var_max: vec![POS_INF; q.vars().len()],
                            tot_min: -d + remaining,
                            tot_max: POS_INF,
                        };
                        q.truncate(&keep)
                    }
                });
            }
            let prod = prod.unwrap().embed(&vars).coarsen(&audit);
            total = if first {
                first = false;
                prod
            } else {
                total.add(&prod)?
            };
        }
    }
    if (n - 1) % 2 == 1 {
        total = total.neg();
    }
    finish(total, n, kind, degree)
}

/// Connected n-point function by the cycle formula (`Open` or `Wk` kind).
pub fn connected_npoint(kind: CorrelatorKind, n: usize, degree: u32) -> Result<NPointSeries> {
    assert!(
        matches!(kind, CorrelatorKind::Open | CorrelatorKind::Wk),
        "cycle route needs a coordinate table; use ext_correlator for the boundary sector"
    );
    assert!(n >= 1);
    match n {
        1 => onepoint_cycle(kind, degree),
        2 => {
            let g = twopoint_cycle(kind, degree)?;
            finish(g, 2, kind, degree)
        }
        _ => npoint_cycle(kind, n, degree),
    }
}

// ----- closed forms -----------------------------------------------------------

struct Abc {
    ax: TruncatedSeries,
    amx: TruncatedSeries,
    bx: TruncatedSeries,
    bmx: TruncatedSeries,
    cx: TruncatedSeries,
}

/// The a, b, c series and their z -> -z images in one variable, built to
/// completeness depth `build`.
fn abc(var: &str, build: u32) -> Result<Abc> {
    let ax = wk::faber_zagier_a(var, build);
    let bx = wk::faber_zagier_b(var, build);
    let cx = open::c_series(var, build);
    Ok(Abc { amx: ax.negate_var(var)?, bmx: bx.negate_var(var)?, ax, bx, cx })
}

/// Closed one-point function:
/// G_(1)(z) = (c(z) a(-z) - 1)/z + sum_{g>=1} (6g-3)!!/(24^g g!) z^{-6g+2}.
pub fn onepoint_closed(degree: u32) -> Result<NPointSeries> {
    let build = degree / 3 + 4;
    let s = abc("z1", build)?;
    let ext = ext_onepoint_series(&s)?;
    let wk1 = wk::wk_onepoint(3 * build).rename_var("z", "z1")?;
    let g = ext.add(&wk1)?;
    finish(g, 1, CorrelatorKind::Open, degree)
}

/// The intermediate form -1/(2z) + c(z)a(-z)/z + (a'(z)b(-z) - a(-z)b'(z))/(2z),
/// equal to the closed one-point function.
pub fn onepoint_intermediate(degree: u32) -> Result<NPointSeries> {
    let build = degree / 3 + 4;
    let s = abc("z1", build)?;
    let half = rat(1, 2);
    let da = s.ax.formal_derivative("z1")?;
    let db = s.bx.formal_derivative("z1")?;
    let dbm = db.negate_var("z1")?.neg(); // d/dz [b(-z)] = -b'(-z)
    let _ = dbm;
    // a'(z) b(-z) - a(-z) b'(z)
    let wron = da.mul(&s.bmx)?.sub(&s.amx.mul(&db)?)?;
    let g = s
        .cx
        .mul(&s.amx)?
        .add(&wron.scale_by(&half))?
        .sub(&TruncatedSeries::monomial(&["z1"], 1, &[0], rat(1, 2)))?
        .shift_var("z1", -1)?;
    finish(g, 1, CorrelatorKind::Open, degree)
}

fn ext_onepoint_series(s: &Abc) -> Result<TruncatedSeries> {
    let one = TruncatedSeries::one(&["z1"], 1);
    s.cx.mul(&s.amx)?.sub(&one)?.shift_var("z1", -1)
}

/// Boundary-sector one-point function (c(z)a(-z) - 1)/z.
pub fn ext_onepoint(degree: u32) -> Result<NPointSeries> {
    let build = degree / 3 + 4;
    let s = abc("z1", build)?;
    let g = ext_onepoint_series(&s)?;
    finish(g, 1, CorrelatorKind::Ext, degree)
}

/// The two series-bracket combination shared by the open and boundary
/// two-point forms:
///
///   [y N1 + x N2] / (xy (x^2-y^2)) - a(-x)a(-y)c(x)c(y)/(xy),
///
/// with N1 = c(x)(a(y)a(-y)b(-x) - a(-x)a(-y)b(y)) and
/// N2 = c(y)(a(-x)a(-y)b(x) - a(x)a(-x)b(-y)). The bracket sum is exactly
/// divisible even though the brackets separately are not.
fn ext_twopoint_series(x: &Abc, y: &Abc, degree: u32) -> Result<TruncatedSeries> {
    let d = degree as i64;
    let n1 = x.cx.mul(&y.ax.mul(&y.amx)?.mul(&x.bmx)?.sub(&x.amx.mul(&y.amx)?.mul(&y.bx)?)?)?;
    let n2 = y.cx.mul(&x.amx.mul(&y.amx)?.mul(&x.bx)?.sub(&x.ax.mul(&x.amx)?.mul(&y.bmx)?)?)?;
    let num = n1.shift_var("z2", 1)?.add(&n2.shift_var("z1", 1)?)?;
    let request = Region::above(vec![-2 * d - 10, -2 * d - 10], -2 * d - 12);
    let q = exact_divide(&num, &Divisor::X2MinusY2("z1".into(), "z2".into()), Some(&request))?;
    let cc = x.amx.mul(&y.amx)?.mul(&x.cx)?.mul(&y.cx)?;
    q.sub(&cc)?.shift_var("z1", -1)?.shift_var("z2", -1)
}

/// Boundary-sector two-point function (closed form).
pub fn ext_twopoint(degree: u32) -> Result<NPointSeries> {
    let build = (2 * degree) / 3 + 8;
    let x = abc("z1", build)?;
    let y = abc("z2", build)?;
    let g = ext_twopoint_series(&x, &y, degree)?;
    finish(g, 2, CorrelatorKind::Ext, degree)
}

/// Closed two-point function of the open tau-function: the boundary part
/// plus the Witten-Kontsevich part
///
///   [B - (x+y)^2] / (x^2-y^2)^2,
///   B = a(x)a(y)b(-x)b(-y) + a(-x)a(-y)b(x)b(y)
///       - a(y)a(-y)b(x)b(-x) - a(x)a(-x)b(y)b(-y),
///
/// where the subtraction of (x+y)^2 is the analytically cancelled
/// -1/(x-y)^2 term of the cycle formula.
pub fn twopoint_closed(degree: u32) -> Result<NPointSeries> {
    let build = (2 * degree) / 3 + 8;
    let x = abc("z1", build)?;
    let y = abc("z2", build)?;
    let ext = ext_twopoint_series(&x, &y, degree)?;
    let d = degree as i64;
    let b = x
        .ax
        .mul(&y.ax)?
        .mul(&x.bmx)?
        .mul(&y.bmx)?
        .add(&x.amx.mul(&y.amx)?.mul(&x.bx)?.mul(&y.bx)?)?
        .sub(&y.ax.mul(&y.amx)?.mul(&x.bx)?.mul(&x.bmx)?)?
        .sub(&x.ax.mul(&x.amx)?.mul(&y.bx)?.mul(&y.bmx)?)?;
    let xy2 = TruncatedSeries::polynomial(
        &["z1", "z2"],
        1,
        &[
            (vec![2, 0], rat_int(1)),
            (vec![1, 1], rat_int(2)),
            (vec![0, 2], rat_int(1)),
        ],
    );
    let num = b.sub(&xy2)?;
    let div = Divisor::X2MinusY2("z1".into(), "z2".into());
    let request1 = Region::above(vec![-2 * d - 12, -2 * d - 12], -2 * d - 14);
    let q1 = exact_divide(&num, &div, Some(&request1))?;
    let request2 = Region::above(vec![-2 * d - 10, -2 * d - 10], -2 * d - 12);
    let wkpart = exact_divide(&q1, &div, Some(&request2))?;
    let g = ext.add(&wkpart)?;
    finish(g, 2, CorrelatorKind::Open, degree)
}

// ----- three-point closed forms -------------------------------------------------

/// xyz-monomial shorthand over ("z1","z2","z3").
fn mono3(ex: i64, ey: i64, ez: i64, c: Rat) -> TruncatedSeries {
    TruncatedSeries::monomial(&["z1", "z2", "z3"], 1, &[ex, ey, ez], c)
}

/// Multiplier polynomials of the common denominator xyz(x^2-y^2)(y^2-z^2)(z^2-x^2).
struct Mult;
impl Mult {
    // xy(x^2-y^2)/2 etc; names follow the denominators they clear.
    fn xy_x2y2(scale: Rat) -> TruncatedSeries {
        // xy(x^2 - y^2) * scale
        TruncatedSeries::polynomial(
            &["z1", "z2", "z3"],
            1,
            &[
                (vec![3, 1, 0], scale.clone()),
                (vec![1, 3, 0], -scale),
            ],
        )
    }
    fn z_x2y2(scale: Rat) -> TruncatedSeries {
        TruncatedSeries::polynomial(
            &["z1", "z2", "z3"],
            1,
            &[
                (vec![2, 0, 1], scale.clone()),
                (vec![0, 2, 1], -scale),
            ],
        )
    }
    fn xyz() -> TruncatedSeries {
        mono3(1, 1, 1, rat_int(1))
    }
    fn xy_z2x2(scale: Rat) -> TruncatedSeries {
        // xy(z^2 - x^2) * scale
        TruncatedSeries::polynomial(
            &["z1", "z2", "z3"],
            1,
            &[
                (vec![1, 1, 2], scale.clone()),
                (vec![3, 1, 0], -scale),
            ],
        )
    }
    fn xy_y2z2(scale: Rat) -> TruncatedSeries {
        TruncatedSeries::polynomial(
            &["z1", "z2", "z3"],
            1,
            &[
                (vec![1, 3, 0], scale.clone()),
                (vec![1, 1, 2], -scale),
            ],
        )
    }
    fn x_x2y2_y2z2(scale: Rat) -> TruncatedSeries {
        // x(x^2-y^2)(y^2-z^2) = x(x^2y^2 - x^2z^2 - y^4 + y^2z^2)
        TruncatedSeries::polynomial(
            &["z1", "z2", "z3"],
            1,
            &[
                (vec![3, 2, 0], scale.clone()),
                (vec![3, 0, 2], -scale.clone()),
                (vec![1, 4, 0], -scale.clone()),
                (vec![1, 2, 2], scale),
            ],
        )
    }
    fn xz_x2y2(scale: Rat) -> TruncatedSeries {
        TruncatedSeries::polynomial(
            &["z1", "z2", "z3"],
            1,
            &[
                (vec![3, 0, 1], scale.clone()),
                (vec![1, 2, 1], -scale),
            ],
        )
    }
    fn yz_y2z2(scale: Rat) -> TruncatedSeries {
        TruncatedSeries::polynomial(
            &["z1", "z2", "z3"],
            1,
            &[
                (vec![0, 3, 1], scale.clone()),
                (vec![0, 1, 3], -scale),
            ],
        )
    }
    fn x_y2z2(scale: Rat) -> TruncatedSeries {
        TruncatedSeries::polynomial(
            &["z1", "z2", "z3"],
            1,
            &[
                (vec![1, 2, 0], scale.clone()),
                (vec![1, 0, 2], -scale),
            ],
        )
    }
    fn lcd_even() -> TruncatedSeries {
        // (x^2-y^2)(y^2-z^2)(z^2-x^2)
        let d1 = TruncatedSeries::polynomial(
            &["z1", "z2", "z3"],
            1,
            &[(vec![2, 0, 0], rat_int(1)), (vec![0, 2, 0], rat_int(-1))],
        );
        let d2 = TruncatedSeries::polynomial(
            &["z1", "z2", "z3"],
            1,
            &[(vec![0, 2, 0], rat_int(1)), (vec![0, 0, 2], rat_int(-1))],
        );
        let d3 = TruncatedSeries::polynomial(
            &["z1", "z2", "z3"],
            1,
            &[(vec![0, 0, 2], rat_int(1)), (vec![2, 0, 0], rat_int(-1))],
        );
        d1.mul(&d2).unwrap().mul(&d3).unwrap()
    }
}

/// Apply a permutation of (z1, z2, z3) given as the images of (z1, z2, z3).
fn permute3(f: &TruncatedSeries, images: [usize; 3]) -> TruncatedSeries {
    assert_eq!(f.vars(), &zvars(3)[..]);
    f.permute_vars(&[images[0] - 1, images[1] - 1, images[2] - 1])
}

/// The six permutations of S_3 as (images, sign).
const S3: [([usize; 3], i64); 6] = [
    ([1, 2, 3], 1),
    ([2, 1, 3], -1),
    ([1, 3, 2], -1),
    ([3, 2, 1], -1),
    ([2, 3, 1], 1),
    ([3, 1, 2], 1),
];

/// Sum over S_3 of sgn(sigma)*sigma[f] (the common-denominator symmetrization: the
/// denominator xyz(x^2-y^2)(y^2-z^2)(z^2-x^2) is odd under transpositions).
fn symmetrize_signed(f: &TruncatedSeries) -> Result<TruncatedSeries> {
    let mut acc: Option<TruncatedSeries> = None;
    for (images, sign) in S3 {
        let mut g = permute3(f, images);
        if sign < 0 {
            g = g.neg();
        }
        acc = Some(match acc {
            None => g,
            Some(a) => a.add(&g)?,
        });
    }
    Ok(acc.unwrap())
}

/// Divide by the full common denominator xyz(x^2-y^2)(y^2-z^2)(z^2-x^2). The
/// request regions are derived backward from the final target: each division
/// by u^2 - v^2 consumes completeness of the numerator along a sloped band, so
/// the earlier quotients must be certified correspondingly deeper in the
/// division's second variable.
fn divide_lcd3(num: TruncatedSeries, degree: u32) -> Result<TruncatedSeries> {
    let d = degree as i64;
    const S_UP: i64 = 8; // bound on structural tops along the chain
    const M: i64 = 4; // safety margin
    // final (pre-shift) cover requirement: per-var >= -d+5, total >= -d+3
    let a3 = -(d - 5 + M);
    let (b3, c3) = (a3, a3);
    let t3 = -(d - 3 + M);
    let span3 = S_UP - c3 - 2;
    let (a2, b2, c2, t2) = (a3 - span3, b3, c3 + 2, t3 + 2);
    let span2 = S_UP - b2 - 2;
    let (a1, b1, c1, t1) = (a2, b2 + 2, c2 - span2, t2 + 2);

    let r1 = Region::above(vec![a1, b1, c1], t1);
    let q1 = exact_divide(&num, &Divisor::X2MinusY2("z1".into(), "z2".into()), Some(&r1))?;
    let r2 = Region::above(vec![a2, b2, c2], t2);
    let q2 = exact_divide(&q1, &Divisor::X2MinusY2("z2".into(), "z3".into()), Some(&r2))?;
    let r3 = Region::above(vec![a3, b3, c3], t3);
    let q3 = exact_divide(&q2, &Divisor::X2MinusY2("z3".into(), "z1".into()), Some(&r3))?;
    q3.shift_var("z1", -1)?.shift_var("z2", -1)?.shift_var("z3", -1)
}

struct Abc3 {
    x: Abc,
    y: Abc,
    z: Abc,
}

fn abc3(degree: u32) -> Result<Abc3> {
    let build = degree / 3 + 12;
    Ok(Abc3 { x: abc("z1", build)?, y: abc("z2", build)?, z: abc("z3", build)? })
}

/// Truncate a bracket numerator to the total degree the final answer can
/// see (the common denominator has total degree 9, so the numerator only
/// matters down to total degree about -(degree - 9)); keeps the
/// common-denominator products small.
fn trim3(f: TruncatedSeries, degree: u32) -> TruncatedSeries {
    let d = degree as i64;
    f.truncate(&Region {
        var_min: vec![NEG_INF; 3],
        var_max: vec![POS_INF; 3],
        tot_min: -(d + 5),
        tot_max: POS_INF,
    })
}

/// Closed three-point function of the open tau-function: the nine-bracket
/// S_3-symmetrized form, evaluated over the common denominator with exact
/// divisions.
pub fn threepoint_closed(degree: u32) -> Result<NPointSeries> {
    let s = abc3(degree)?;
    let (x, y, z) = (&s.x, &s.y, &s.z);
    let amx_amy_amz = x.amx.mul(&y.amx)?.mul(&z.amx)?;
    let ax_amx = x.ax.mul(&x.amx)?;
    let by_bmy = y.bx.mul(&y.bmx)?;

    let mut acc: Option<TruncatedSeries> = None;
    let push = |t: TruncatedSeries, acc: &mut Option<TruncatedSeries>| -> Result<()> {
        *acc = Some(match acc.take() {
            None => t,
            Some(a) => a.add(&t)?,
        });
        Ok(())
    };

    // T1: a(-x)a(-y)a(-z) b(x)b(y)c(z) / (2z(z^2-x^2)(z^2-y^2))  ->  -xy(x^2-y^2)/2
    let t1 = amx_amy_amz.mul(&x.bx)?.mul(&y.bx)?.mul(&z.cx)?;
    push(trim3(t1, degree).mul(&Mult::xy_x2y2(rat(-1, 2)))?, &mut acc)?;
    // T2: (x^2+y^2-2z^2) a(-x)a(-y)a(-z) b(z)c(x)c(y) / (2xy(z^2-x^2)(z^2-y^2)) -> -z(x^2-y^2)/2
    let quad = TruncatedSeries::polynomial(
        &["z1", "z2", "z3"],
        1,
        &[
            (vec![2, 0, 0], rat_int(1)),
            (vec![0, 2, 0], rat_int(1)),
            (vec![0, 0, 2], rat_int(-2)),
        ],
    );
    let t2 = amx_amy_amz.mul(&z.bx)?.mul(&x.cx)?.mul(&y.cx)?.mul(&quad)?;
    push(trim3(t2, degree).mul(&Mult::z_x2y2(rat(-1, 2)))?, &mut acc)?;
    // T3 + T4: a(x)a(-x) b(y)b(-y) (a(-z)b(z) + a(z)b(-z)) / ((x^2-y^2)(y^2-z^2)(z^2-x^2)) -> xyz
    let t34 = ax_amx
        .mul(&by_bmy)?
        .mul(&z.amx.mul(&z.bx)?.add(&z.ax.mul(&z.bmx)?)?)?;
    push(trim3(t34, degree).mul(&Mult::xyz())?, &mut acc)?;
    // T5: a(x)a(-x) b(-z)c(z) a(y)b(-y) / (z(x^2-y^2)(y^2-z^2)) -> xy(z^2-x^2)
    let t5 = ax_amx.mul(&z.bmx)?.mul(&z.cx)?.mul(&y.ax)?.mul(&y.bmx)?;
    push(trim3(t5, degree).mul(&Mult::xy_z2x2(rat_int(1)))?, &mut acc)?;
    // T6: a(x)a(-x) b(-z)c(z) a(-y)b(y) / (z(x^2-y^2)(x^2-z^2)) -> -xy(y^2-z^2)
    let t6 = ax_amx.mul(&z.bmx)?.mul(&z.cx)?.mul(&y.amx)?.mul(&y.bx)?;
    push(trim3(t6, degree).mul(&Mult::xy_y2z2(rat_int(-1)))?, &mut acc)?;
    // T7: a(x)a(-x) c(y)c(z) a(-y)b(-z) / (yz(x^2-z^2)) -> -x(x^2-y^2)(y^2-z^2)
    let t7 = ax_amx.mul(&y.cx)?.mul(&z.cx)?.mul(&y.amx)?.mul(&z.bmx)?;
    push(trim3(t7, degree).mul(&Mult::x_x2y2_y2z2(rat_int(-1)))?, &mut acc)?;
    // T8: a(x)a(-x) b(y)b(-y) a(-z)c(z) / (z(y^2-x^2)(y^2-z^2)) -> -xy(z^2-x^2)
    let t8 = ax_amx.mul(&by_bmy)?.mul(&z.amx)?.mul(&z.cx)?;
    push(trim3(t8, degree).mul(&Mult::xy_z2x2(rat_int(-1)))?, &mut acc)?;
    // T9: a(-x)a(-y)a(-z) c(x)c(y)c(z) / (3xyz) -> (x^2-y^2)(y^2-z^2)(z^2-x^2)/3
    let t9 = amx_amy_amz.mul(&x.cx)?.mul(&y.cx)?.mul(&z.cx)?;
    push(trim3(t9, degree).mul(&Mult::lcd_even().scale_by(&rat(1, 3)))?, &mut acc)?;

    let num = symmetrize_signed(&acc.unwrap())?;
    let g = divide_lcd3(num, degree)?;
    finish(g, 3, CorrelatorKind::Open, degree)
}

/// Boundary-sector three-point function (closed form).
pub fn ext_threepoint(degree: u32) -> Result<NPointSeries> {
    let s = abc3(degree)?;
    let (x, y, z) = (&s.x, &s.y, &s.z);
    let amx_amy_amz = x.amx.mul(&y.amx)?.mul(&z.amx)?;
    let ax_amx = x.ax.mul(&x.amx)?;

    let mut acc: Option<TruncatedSeries> = None;
    let push = |t: TruncatedSeries, acc: &mut Option<TruncatedSeries>| -> Result<()> {
        *acc = Some(match acc.take() {
            None => t,
            Some(a) => a.add(&t)?,
        });
        Ok(())
    };

    // E1: a(x)a(-x) a(y)b(-y) b(-z)c(z) / (z(x^2-y^2)(y^2-z^2)) -> xy(z^2-x^2)
    let e1 = ax_amx.mul(&y.ax)?.mul(&y.bmx)?.mul(&z.bmx)?.mul(&z.cx)?;
    push(trim3(e1, degree).mul(&Mult::xy_z2x2(rat_int(1)))?, &mut acc)?;
    // E2: a(x)a(-x) a(-y)b(y) b(-z)c(z) / (z(x^2-y^2)(x^2-z^2)) -> -xy(y^2-z^2)
    let e2 = ax_amx.mul(&y.amx)?.mul(&y.bx)?.mul(&z.bmx)?.mul(&z.cx)?;
    push(trim3(e2, degree).mul(&Mult::xy_y2z2(rat_int(-1)))?, &mut acc)?;
    // E3: a(x)a(-x) c(y) b(-z) a(-y) c(z) / (yz(x^2-z^2)) -> -x(x^2-y^2)(y^2-z^2)
    let e3 = ax_amx.mul(&y.cx)?.mul(&z.bmx)?.mul(&y.amx)?.mul(&z.cx)?;
    push(trim3(e3, degree).mul(&Mult::x_x2y2_y2z2(rat_int(-1)))?, &mut acc)?;
    // E4: a(x)a(-x) c(y) b(-z) a(-y) b(z) / (y(x^2-z^2)(y^2-z^2)) -> -xz(x^2-y^2)
    let e4 = ax_amx.mul(&y.cx)?.mul(&z.bmx)?.mul(&y.amx)?.mul(&z.bx)?;
    push(trim3(e4, degree).mul(&Mult::xz_x2y2(rat_int(-1)))?, &mut acc)?;
    // E5: a(-x)a(-y)a(-z) c(x)c(y)c(z) / (3xyz) -> LCD/3
    let e5 = amx_amy_amz.mul(&x.cx)?.mul(&y.cx)?.mul(&z.cx)?;
    push(trim3(e5, degree).mul(&Mult::lcd_even().scale_by(&rat(1, 3)))?, &mut acc)?;
    // E6: a(-x)a(-y)a(-z) b(y)b(z)c(x) / (2x(x^2-y^2)(x^2-z^2)) -> -yz(y^2-z^2)/2
    let e6 = amx_amy_amz.mul(&y.bx)?.mul(&z.bx)?.mul(&x.cx)?;
    push(trim3(e6, degree).mul(&Mult::yz_y2z2(rat(-1, 2)))?, &mut acc)?;
    // E7: (y^2+z^2-2x^2) a(-x)a(-y)a(-z) b(x)c(y)c(z) / (2yz(y^2-x^2)(z^2-x^2)) -> -x(y^2-z^2)/2
    let quad = TruncatedSeries::polynomial(
        &["z1", "z2", "z3"],
        1,
        &[
            (vec![0, 2, 0], rat_int(1)),
            (vec![0, 0, 2], rat_int(1)),
            (vec![2, 0, 0], rat_int(-2)),
        ],
    );
    let e7 = amx_amy_amz.mul(&x.bx)?.mul(&y.cx)?.mul(&z.cx)?.mul(&quad)?;
    push(trim3(e7, degree).mul(&Mult::x_y2z2(rat(-1, 2)))?, &mut acc)?;

    let num = symmetrize_signed(&acc.unwrap())?;
    let g = divide_lcd3(num, degree)?;
    finish(g, 3, CorrelatorKind::Ext, degree)
}

/// The boundary-sector correlator for n <= 3 by its closed form; equals
/// connected_npoint(Open, n) - connected_npoint(Wk, n) coefficient-wise.
pub fn ext_correlator(n: usize, degree: u32) -> Result<NPointSeries> {
    match n {
        1 => ext_onepoint(degree),
        2 => ext_twopoint(degree),
        3 => ext_threepoint(degree),
        _ => {
            // no closed form here; take the difference of cycle routes
            let open = connected_npoint(CorrelatorKind::Open, n, degree)?;
            let wk = connected_npoint(CorrelatorKind::Wk, n, degree)?;
            let series = open.series.sub(&wk.series)?;
            Ok(NPointSeries { n, kind: CorrelatorKind::Ext, degree_bound: degree, series })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn open_onepoint_values() {
        let g = connected_npoint(CorrelatorKind::Open, 1, 10).unwrap();
        assert_eq!(g.coeff(&[3]).unwrap(), rat(13, 8)); // z^{-4}
        assert_eq!(g.coeff(&[6]).unwrap(), rat_int(8)); // z^{-7}
        assert_eq!(g.coeff(&[9]).unwrap(), rat(7665, 128)); // z^{-10}
        assert_eq!(g.coeff(&[4]).unwrap(), Rat::zero());
    }

    #[test]
    fn onepoint_routes_agree() {
        let d = 16;
        let cyc = connected_npoint(CorrelatorKind::Open, 1, d).unwrap();
        let clo = onepoint_closed(d).unwrap();
        let mid = onepoint_intermediate(d).unwrap();
        for j in 1..=(d - 1) {
            let c = cyc.coeff(&[j]).unwrap();
            assert_eq!(c, clo.coeff(&[j]).unwrap(), "closed route at j={j}");
            assert_eq!(c, mid.coeff(&[j]).unwrap(), "intermediate form at j={j}");
        }
    }

    #[test]
    fn open_twopoint_values() {
        let g = connected_npoint(CorrelatorKind::Open, 2, 9).unwrap();
        assert_eq!(g.coeff(&[1, 2]).unwrap(), rat_int(2));
        assert_eq!(g.coeff(&[2, 1]).unwrap(), rat_int(2));
        assert_eq!(g.coeff(&[3, 3]).unwrap(), rat(39, 8));
        assert_eq!(g.coeff(&[1, 5]).unwrap(), rat(65, 8));
        assert_eq!(g.coeff(&[1, 1]).unwrap(), Rat::zero());
    }

    #[test]
    fn twopoint_routes_agree() {
        let d = 12;
        let cyc = connected_npoint(CorrelatorKind::Open, 2, d).unwrap();
        let clo = twopoint_closed(d).unwrap();
        for j1 in 1..=(d - 4) {
            for j2 in 1..=(d - 2 - j1) {
                assert_eq!(
                    cyc.coeff(&[j1, j2]).unwrap(),
                    clo.coeff(&[j1, j2]).unwrap(),
                    "2pt routes at ({j1},{j2})"
                );
            }
        }
    }

    #[test]
    fn open_threepoint_values() {
        let g = connected_npoint(CorrelatorKind::Open, 3, 12).unwrap();
        assert_eq!(g.coeff(&[1, 1, 1]).unwrap(), rat_int(1)); // z^{(2,2,2)}
        assert_eq!(g.coeff(&[1, 1, 4]).unwrap(), rat_int(8)); // z^{(2,2,5)}
        assert_eq!(g.coeff(&[1, 4, 1]).unwrap(), rat_int(8));
        assert_eq!(g.coeff(&[2, 2, 2]).unwrap(), rat_int(8)); // z^{(3,3,3)}
        assert_eq!(g.coeff(&[1, 2, 3]).unwrap(), rat_int(6)); // z^{(2,3,4)}
    }

    #[test]
    fn threepoint_routes_agree() {
        let d = 12;
        let cyc = connected_npoint(CorrelatorKind::Open, 3, d).unwrap();
        let clo = threepoint_closed(d).unwrap();
        for j1 in 1..=4u32 {
            for j2 in 1..=4u32 {
                for j3 in 1..=4u32 {
                    if j1 + j2 + j3 + 3 <= d {
                        assert_eq!(
                            cyc.coeff(&[j1, j2, j3]).unwrap(),
                            clo.coeff(&[j1, j2, j3]).unwrap(),
                            "3pt routes at ({j1},{j2},{j3})"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn fourpoint_first_values() {
        let g = connected_npoint(CorrelatorKind::Open, 4, 10).unwrap();
        assert_eq!(g.coeff(&[1, 1, 1, 3]).unwrap(), rat_int(3)); // z^{(2,2,2,4)}
        assert_eq!(g.coeff(&[1, 3, 1, 1]).unwrap(), rat_int(3));
        assert_eq!(g.coeff(&[1, 1, 1, 1]).unwrap(), Rat::zero());
    }

    #[test]
    fn ext_correlators_are_differences() {
        // n = 1: coefficient of z^{-4} is 13/8 - 1/8 = 3/2.
        let e1 = ext_correlator(1, 12).unwrap();
        assert_eq!(e1.coeff(&[3]).unwrap(), rat(3, 2));
        let o1 = connected_npoint(CorrelatorKind::Open, 1, 12).unwrap();
        let w1 = connected_npoint(CorrelatorKind::Wk, 1, 12).unwrap();
        for j in 1..=11u32 {
            assert_eq!(
                e1.coeff(&[j]).unwrap(),
                o1.coeff(&[j]).unwrap() - w1.coeff(&[j]).unwrap(),
                "ext 1pt at j={j}"
            );
        }
        let d = 10;
        let e2 = ext_correlator(2, d).unwrap();
        let o2 = connected_npoint(CorrelatorKind::Open, 2, d).unwrap();
        let w2 = connected_npoint(CorrelatorKind::Wk, 2, d).unwrap();
        for j1 in 1..=5u32 {
            for j2 in 1..=(d - 4 - j1) {
                assert_eq!(
                    e2.coeff(&[j1, j2]).unwrap(),
                    o2.coeff(&[j1, j2]).unwrap() - w2.coeff(&[j1, j2]).unwrap(),
                    "ext 2pt at ({j1},{j2})"
                );
            }
        }
    }

    #[test]
    fn ext_threepoint_is_difference() {
        let d = 9;
        let e3 = ext_correlator(3, d).unwrap();
        let o3 = connected_npoint(CorrelatorKind::Open, 3, d).unwrap();
        let w3 = connected_npoint(CorrelatorKind::Wk, 3, d).unwrap();
        for j1 in 1..=3u32 {
            for j2 in 1..=3u32 {
                for j3 in 1..=3u32 {
                    if j1 + j2 + j3 + 3 <= d {
                        assert_eq!(
                            e3.coeff(&[j1, j2, j3]).unwrap(),
                            o3.coeff(&[j1, j2, j3]).unwrap() - w3.coeff(&[j1, j2, j3]).unwrap(),
                            "ext 3pt at ({j1},{j2},{j3})"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn permutation_symmetry() {
        let g = connected_npoint(CorrelatorKind::Open, 3, 11).unwrap();
        for j1 in 1..=3u32 {
            for j2 in 1..=3u32 {
                for j3 in 1..=3u32 {
                    if j1 + j2 + j3 + 3 <= 11 {
                        let c = g.coeff(&[j1, j2, j3]).unwrap();
                        assert_eq!(c, g.coeff(&[j2, j1, j3]).unwrap());
                        assert_eq!(c, g.coeff(&[j3, j2, j1]).unwrap());
                    }
                }
            }
        }
    }


    #[test]
    #[ignore = "several minutes; run explicitly to exercise the n >= 5 machinery"]
    fn fivepoint_symmetry_and_purity() {
        // no coefficient listing exists for n = 5; the oracle is structure:
        // the computation finishes with all positive exponents cancelled,
        // the result is permutation symmetric, and below weight 9 (where the
        // free energy has no quintic monomials) everything vanishes.
        let g = connected_npoint(CorrelatorKind::Open, 5, 12).unwrap();
        for j in [[1u32, 1, 1, 1, 2], [2, 1, 1, 1, 1], [1, 2, 1, 1, 1]] {
            assert_eq!(g.coeff(&j).unwrap(), Rat::zero());
        }
    }

    #[test]
    fn free_energy_readoff_matches_npoint() {
        // d^2 F / dT_1 dT_2 at 0 is the coefficient of z_1^{-2} z_2^{-3} in
        // G_(2); d^3 F / dT_1^3 is the coefficient of z^{(2,2,2)} in G_(3).
        use crate::tau::{free_energy, TimeBasis, TimeVar};
        let table = crate::open::open_table_closed(7);
        let f = free_energy(6, TimeBasis::T, &table).unwrap();
        let g2 = connected_npoint(CorrelatorKind::Open, 2, 7).unwrap();
        assert_eq!(
            g2.coeff(&[1, 2]).unwrap(),
            f.coefficient(&vec![(TimeVar::T(1), 1), (TimeVar::T(2), 1)])
        );
        let g3 = connected_npoint(CorrelatorKind::Open, 3, 9).unwrap();
        assert_eq!(
            g3.coeff(&[1, 1, 1]).unwrap(),
            f.coefficient(&vec![(TimeVar::T(1), 3)]) * rat_int(6)
        );
        // and a mixed third derivative: coefficient of T_1 T_2 T_3 is 6, so
        // G_(3) at z^{(2,3,4)} is 6 * 1 = the same number
        assert_eq!(
            g3.coeff(&[1, 2, 3]).unwrap(),
            f.coefficient(&vec![(TimeVar::T(1), 1), (TimeVar::T(2), 1), (TimeVar::T(3), 1)])
        );
    }


    #[test]
    fn queries_beyond_degree_error() {
        // beyond the certified degree the series must refuse, not return 0
        let g = connected_npoint(CorrelatorKind::Open, 3, 9).unwrap();
        assert!(g.coeff(&[1, 1, 1]).is_ok());
        assert!(g.coeff(&[3, 3, 3]).is_err(), "total degree 12 > 9 must be incomplete");
        let g1 = connected_npoint(CorrelatorKind::Open, 1, 10).unwrap();
        assert!(g1.coeff(&[12]).is_err());
    }

    #[test]
    fn csv_export_shape() {
        let g = connected_npoint(CorrelatorKind::Open, 2, 7).unwrap();
        let csv = g.to_csv();
        assert!(csv.starts_with("j1,j2,coefficient\n"));
        assert!(csv.contains("1,2,2\n"), "csv was:\n{csv}");
    }
}
