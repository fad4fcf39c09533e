//! Affine coordinates of the extended open intersection-number tau-function.
//!
//! Two independent routes produce the same table:
//!
//! - the closed route: row 0 is the c(z) series
//!   a_{0,3q-1} = (3/2)^q (2q-1)!! sum_{j=0}^q (6j-1)!!/(54^j (2j)! (2j-1)!!),
//!   and for n >= 1 the rows are Witten-Kontsevich data,
//!   a_{n,m} = a^{WK}_{n-1,m+1} - [n = 0 mod 3] a_{0,m} a^{WK}_{n-1,0};
//! - the recursive route: the one-step string recursion
//!   a_{n,m+1} = a_{n+1,m} + a_{0,m} a_{n,0} + (m+1/2) a_{n,m-2} + (n-3/2) a_{n-2,m}
//!   (valid for n+m >= 2, zero extension for negative indices) together with
//!   the seed row a_{1,3q-2} = (6q+1)!!/(36^q (2q)! (6q+1)) and the weight-2
//!   string constants a_{0,2} = 3/2 + a_{1,1}, a_{2,0} = a_{1,1} - 1/2.
//!
//! Everything vanishes unless n + m = 2 mod 3. The verifiers at the bottom
//! check the higher Virasoro recursions, the linear constraints with the
//! n = 0 central value 13/8, the index symmetry, and the Kac-Schwarz-style
//! relations among the a, b, c series.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{big, factorial, int_pow, odd_double_factorial, rat, rat_int, Rat};
use crate::report::VerificationReport;
use crate::series::{exact_divide, Divisor, Region, TruncatedSeries, POS_INF};
use crate::wk::{self, CoordTable, TableKind, TableRoute};

// ----- the c(z) series and the closed route ---------------------------------

/// Coefficient of z^{-3q} in c(z) (row 0 of the open table at m = 3q-1).
pub fn c_coefficient(q: u32) -> Rat {
    let mut inner = Rat::zero();
    for j in 0..=q {
        inner += Rat::new(
            odd_double_factorial(6 * j as i64 - 1),
            int_pow(54, j) * factorial(2 * j as u64) * odd_double_factorial(2 * j as i64 - 1),
        );
    }
    Rat::new(int_pow(3, q), int_pow(2, q)) * Rat::from_integer(odd_double_factorial(2 * q as i64 - 1)) * inner
}

/// c(z) = sum_{q>=0} c_q z^{-3q}, the generating series of row 0. Complete to
/// z^{-3*depth}.
pub fn c_series(var: &str, depth: u32) -> TruncatedSeries {
    let terms: Vec<(i64, Rat)> = (0..=depth).map(|q| (-(3 * q as i64), c_coefficient(q))).collect();
    TruncatedSeries::laurent_tail(var, 1, &terms, -(3 * depth as i64), 0)
}

/// Seed row n = 1: a_{1,3q-2} = (6q+1)!!/(36^q (2q)! (6q+1)) for q >= 1,
/// zero elsewhere.
pub fn open_row1(m: u32) -> Rat {
    if m % 3 != 1 {
        return Rat::zero();
    }
    let q = m.div_ceil(3);
    Rat::new(
        odd_double_factorial(6 * q as i64 + 1),
        int_pow(36, q) * factorial(2 * q as u64) * big(6 * q as i64 + 1),
    )
}

/// a_{n,m} for the open tau-function by the closed relations.
pub fn open_coord(n: u32, m: u32) -> Rat {
    if (n + m) % 3 != 2 {
        return Rat::zero();
    }
    if n == 0 {
        return c_coefficient((m + 1) / 3);
    }
    let base = wk::wk_coord(n - 1, m + 1);
    if n.is_multiple_of(3) {
        base - open_coord(0, m) * wk::wk_coord(n - 1, 0)
    } else {
        base
    }
}

/// Closed-route table for n + m <= max_weight.
pub fn open_table_closed(max_weight: u32) -> CoordTable {
    let mut t = CoordTable::new(TableKind::Open, TableRoute::ClosedForm, max_weight);
    for n in 0..=max_weight {
        for m in 0..=(max_weight - n) {
            t.insert(n, m, open_coord(n, m));
        }
    }
    t
}

/// Recursive-route table: the one-step string recursion plus the seeds.
pub fn open_table_recursive(max_weight: u32) -> CoordTable {
    let mut t = CoordTable::new(TableKind::Open, TableRoute::Recursion, max_weight);
    t.insert(0, 0, Rat::zero());
    if max_weight >= 1 {
        t.insert(0, 1, Rat::zero());
        t.insert(1, 0, Rat::zero());
    }
    if max_weight >= 2 {
        // Weight-2 shell from the string equation's creator-creator terms:
        // 3/2 - a_{0,2} + a_{1,1} = 0 and 1/2 - a_{1,1} + a_{2,0} = 0.
        let a11 = open_row1(1);
        t.insert(1, 1, a11.clone());
        t.insert(0, 2, rat(3, 2) + a11.clone());
        t.insert(2, 0, a11 - rat(1, 2));
    }
    for w in 3..=max_weight {
        // Seed a_{1,w-1}, go up to a_{0,w}, then descend the shell.
        let a1 = open_row1(w - 1);
        t.insert(1, w - 1, a1.clone());
        let m = (w - 1) as i64;
        let up = a1 + (rat_int(m) + rat(1, 2)) * t.get(0, m - 2);
        t.insert(0, w, up);
        for n in 1..w {
            let n = n as i64;
            let m = (w as i64) - 1 - n;
            // a_{n+1,m} = a_{n,m+1} - a_{0,m} a_{n,0} - (m+1/2) a_{n,m-2} - (n-3/2) a_{n-2,m}
            let v = t.get(n, m + 1)
                - t.get(0, m) * t.get(n, 0)
                - (rat_int(m) + rat(1, 2)) * t.get(n, m - 2)
                - (rat_int(n) - rat(3, 2)) * t.get(n - 2, m);
            t.insert(n as u32 + 1, m as u32, v);
        }
    }
    t
}

// ----- normalized basis vectors ----------------------------------------------

/// A vector of the normalized basis: z^{n+1/2} plus a strictly
/// negative-degree tail sum_m a_{n,m} z^{-m-1/2}; stored with doubled
/// exponents.
#[derive(Clone, Debug)]
pub struct BasisVector {
    pub index: u32,
    pub series: TruncatedSeries,
}

impl BasisVector {
    fn build(index: u32, coord: impl Fn(u32, u32) -> Rat, tail_depth: u32) -> Self {
        let mut terms: Vec<(i64, Rat)> = vec![(2 * index as i64 + 1, rat_int(1))];
        for m in 0..=tail_depth {
            terms.push((-(2 * m as i64) - 1, coord(index, m)));
        }
        let series =
            TruncatedSeries::laurent_tail("z", 2, &terms, -(2 * tail_depth as i64) - 1, 2 * index as i64 + 1);
        // normalized-basis property: the leading term is the only one with
        // nonnegative exponent
        debug_assert!(series.terms().all(|(e, _)| e[0] < 0 || e[0] == 2 * index as i64 + 1));
        BasisVector { index, series }
    }

    /// Tail coefficient a_{n,m} (the coefficient of z^{-m-1/2}).
    pub fn tail_coefficient(&self, m: u32) -> Result<Rat> {
        self.series.coefficient(&[-(2 * m as i64) - 1])
    }
}

/// f^o_n to tail depth `depth` (tail exponents down to z^{-depth-1/2}).
pub fn open_basis_vector(n: u32, depth: u32) -> BasisVector {
    BasisVector::build(n, open_coord, depth)
}

/// f^{WK}_n, the Witten-Kontsevich normalized basis vector.
pub fn wk_basis_vector(n: u32, depth: u32) -> BasisVector {
    BasisVector::build(n, wk::wk_coord, depth)
}

// ----- generating series ------------------------------------------------------

/// A^o(x, y) = sum a_{n,m} x^{-n-1} y^{-m-1}, computed as
///
///   -[x(x+y) + y(a(y)b(-x) - a(-x)b(y))] / (x (x^2-y^2)) + c(y) a(-x) / x
///
/// with the division exact (its divisibility check verifies the
/// Faber-Zagier relation at y = +-x). Complete on the coordinate box
/// n, m <= depth; only negative exponents survive.
pub fn open_generating(depth: u32) -> Result<TruncatedSeries> {
    let d = depth as i64;
    let build = 2 * depth + 6;
    let ax = wk::faber_zagier_a("x", build);
    let ay = wk::faber_zagier_a("y", build);
    let bx = wk::faber_zagier_b("x", build);
    let by = wk::faber_zagier_b("y", build);
    let cy = c_series("y", build);
    let a_mx = ax.negate_var("x")?;
    let b_mx = bx.negate_var("x")?;
    // W = a(y) b(-x) - a(-x) b(y)
    let w = ay.mul(&b_mx)?.sub(&a_mx.mul(&by)?)?;
    // N = x(x+y) + y W
    let x_x_plus_y = TruncatedSeries::polynomial(
        &["x", "y"],
        1,
        &[(vec![2, 0], rat_int(1)), (vec![1, 1], rat_int(1))],
    );
    let yw = w.shift_var("y", 1)?;
    let num = x_x_plus_y.add(&yw)?;
    let request = Region::above(vec![-2 * d - 5, -2 * d - 5], -2 * d - 7);
    let q = exact_divide(&num, &Divisor::X2MinusY2("x".into(), "y".into()), Some(&request))?;
    // A = (-q + c(y) a(-x)) / x
    let sum = q.neg().add(&cy.mul(&a_mx)?)?;
    let a = sum.shift_var("x", -1)?;
    // Normalized-basis property: no coefficient at any nonnegative exponent.
    for (e, c) in a.terms() {
        if e[0] >= 0 || e[1] >= 0 {
            return Err(Error::CancellationFailure {
                exponents: e.clone(),
                coeff: crate::rational::format_rat(c),
            });
        }
    }
    Ok(a.truncate(&Region {
        var_min: vec![-d - 1, -d - 1],
        var_max: vec![POS_INF, POS_INF],
        tot_min: -2 * d - 2,
        tot_max: POS_INF,
    }))
}

// ----- verifiers ---------------------------------------------------------------

/// The (2n+3)-step recursion derived from the Virasoro constraint of index
/// n >= -1:
///
///   a_{l,2n+3+m} - a_{2n+3+l,m}
///     = (2n+5/2+m) a_{l,2n+m} + (l-3/2) a_{2n+l,m}
///       + sum_{k=0}^{2n+2} a_{k,m} a_{l,2n+2-k}
///       - sum_{k=0}^{2n-1} (2n+3/2-k) a_{k,m} a_{l,2n-1-k}
///
/// checked for all l + m <= max_weight (for n = -1 only on l + m >= 2, the
/// validity domain of the string identity). The table must cover weight
/// max_weight + 2n + 3.
pub fn verify_virasoro_recursion(n: i64, max_weight: u32, table: &CoordTable) -> Result<VerificationReport> {
    assert!(n >= -1);
    let need = max_weight as i64 + 2 * n + 3;
    if (table.max_weight as i64) < need {
        return Err(Error::TableCoverage {
            kind: table.kind.to_string(),
            max_weight: table.max_weight,
            n: need,
            m: 0,
        });
    }
    let mut report = VerificationReport::new(
        format!("virasoro-recursion n={n}"),
        format!("l+m <= {max_weight}"),
    );
    for l in 0..=(max_weight as i64) {
        for m in 0..=(max_weight as i64 - l) {
            if n == -1 && l + m < 2 {
                continue;
            }
            let lhs = table.get(l, 2 * n + 3 + m) - table.get(2 * n + 3 + l, m);
            let mut rhs = (rat_int(2 * n + m) + rat(5, 2)) * table.get(l, 2 * n + m)
                + (rat_int(l) - rat(3, 2)) * table.get(2 * n + l, m);
            for k in 0..=(2 * n + 2) {
                rhs += table.get(k, m) * table.get(l, 2 * n + 2 - k);
            }
            for k in 0..=(2 * n - 1) {
                rhs -= (rat_int(2 * n - k) + rat(3, 2)) * table.get(k, m) * table.get(l, 2 * n - 1 - k);
            }
            report.check_eq(format!("(l,m)=({l},{m})"), &lhs, &rhs);
        }
    }
    Ok(report)
}

/// The linear constraints: for n >= 1,
/// sum_{k=0}^{2n+2} a_{k,2n+2-k} = sum_{k=0}^{2n-1} (2n+3/2-k) a_{k,2n-1-k};
/// for n = -1 the constraint a_{0,0} = 0; for n = 0 the constant term of
/// the Virasoro operator makes the weight-2 diagonal sum equal 13/8.
pub fn verify_linear_constraint(n: i64, table: &CoordTable) -> Result<VerificationReport> {
    assert!(n >= -1);
    let need = (2 * n + 2).max(0);
    if (table.max_weight as i64) < need {
        return Err(Error::TableCoverage {
            kind: table.kind.to_string(),
            max_weight: table.max_weight,
            n: need,
            m: 0,
        });
    }
    let mut report = VerificationReport::new(format!("linear-constraint n={n}"), format!("weight {need}"));
    match n {
        -1 => report.check_eq("a_{0,0}", &Rat::zero(), &table.get(0, 0)),
        0 => {
            let sum: Rat = (0..=2).map(|k| table.get(k, 2 - k)).sum();
            report.check_eq("sum_{k<=2} a_{k,2-k}", &rat(13, 8), &sum);
        }
        _ => {
            let lhs: Rat = (0..=(2 * n + 2)).map(|k| table.get(k, 2 * n + 2 - k)).sum();
            let rhs: Rat = (0..=(2 * n - 1))
                .map(|k| (rat_int(2 * n - k) + rat(3, 2)) * table.get(k, 2 * n - 1 - k))
                .sum();
            report.check_eq(format!("diagonal sums at n={n}"), &lhs, &rhs);
        }
    }
    Ok(report)
}

/// Index symmetry inherited from the Witten-Kontsevich symmetry
/// a^{WK}_{n,m} = (-1)^{n+m} a^{WK}_{m,n}: for p, q in range (q >= 1; the
/// middle relation needs p >= 1),
///
///   a_{3p+2,3q-3} = (-1)^{p+q+1} a_{3q-1,3p},
///   a_{3p+1,3q-2} = (-1)^{p+q+1} (a_{3q,3p-1} + a_{0,3p-1} a^{WK}_{3q-1,0}),
///   a_{3p+3,3q-1} = (-1)^{p+q} a_{3q+1,3p+1} - a_{0,3q-1} a^{WK}_{3p+2,0}.
pub fn verify_symmetry(pq_max: u32, table: &CoordTable) -> Result<VerificationReport> {
    let p_max = pq_max as i64;
    let need = 6 * p_max + 4;
    if (table.max_weight as i64) < need {
        return Err(Error::TableCoverage {
            kind: table.kind.to_string(),
            max_weight: table.max_weight,
            n: need,
            m: 0,
        });
    }
    let mut report = VerificationReport::new("symmetry", format!("p,q <= {pq_max}"));
    let sign = |k: i64| if k.rem_euclid(2) == 0 { rat_int(1) } else { rat_int(-1) };
    for p in 0..=p_max {
        for q in 1..=p_max {
            let lhs = table.get(3 * p + 2, 3 * q - 3);
            let rhs = sign(p + q + 1) * table.get(3 * q - 1, 3 * p);
            report.check_eq(format!("rel1 (p,q)=({p},{q})"), &lhs, &rhs);

            if p >= 1 {
                let lhs = table.get(3 * p + 1, 3 * q - 2);
                let rhs = sign(p + q + 1)
                    * (table.get(3 * q, 3 * p - 1)
                        + table.get(0, 3 * p - 1) * wk::wk_coord(3 * q as u32 - 1, 0));
                report.check_eq(format!("rel2 (p,q)=({p},{q})"), &lhs, &rhs);
            }

            let lhs = table.get(3 * p + 3, 3 * q - 1);
            let rhs = sign(p + q) * table.get(3 * q + 1, 3 * p + 1)
                - table.get(0, 3 * q - 1) * wk::wk_coord(3 * p as u32 + 2, 0);
            report.check_eq(format!("rel3 (p,q)=({p},{q})"), &lhs, &rhs);
        }
    }
    Ok(report)
}

/// The operator z^{-2} d/dz + 1 - (3/2) z^{-3} applied to a series.
fn string_operator(f: &TruncatedSeries) -> Result<TruncatedSeries> {
    let d = f.formal_derivative("z")?.shift_var("z", -2)?;
    let last = f.shift_var("z", -3)?.scale_by(&rat(-3, 2));
    d.add(f)?.add(&last)
}

/// Kac-Schwarz-style relations among the series:
/// a(z) = (z^{-2} d/dz + 1 - (3/2) z^{-3}) c(z) and
/// b(z) = (z^{-2} d/dz + 1 - (3/2) z^{-3}) (z a(z)), checked to order
/// z^{-depth}.
pub fn verify_ks_relations(depth: u32) -> Result<VerificationReport> {
    let build = depth / 3 + 3;
    let a = wk::faber_zagier_a("z", build);
    let b = wk::faber_zagier_b("z", build);
    let c = c_series("z", build);
    let mut report = VerificationReport::new("ks-relations", format!("order z^-{depth}"));
    let oc = string_operator(&c)?;
    let oza = string_operator(&a.shift_var("z", 1)?)?;
    for e in (-(depth as i64)..=1).rev() {
        report.check_eq(
            format!("a(z) relation at z^{e}"),
            &a.coefficient1(e)?,
            &oc.coefficient1(e)?,
        );
        report.check_eq(
            format!("b(z) relation at z^{e}"),
            &b.coefficient1(e)?,
            &oza.coefficient1(e)?,
        );
    }
    Ok(report)
}
