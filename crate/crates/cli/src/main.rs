//! Command-line interface: exact affine coordinates, generating series,
//! Schur/time expansions, connected n-point functions, and the verification
//! suites, with reproducible file outputs and an optional coordinate-table
//! cache.
//!
//! Exit status: 0 on success / all checks passed, 1 on verification failure
//! or computational error, 2 on usage errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use openkp::npoint::{self, CorrelatorKind};
use openkp::open;
use openkp::rational::format_rat;
use openkp::report::VerificationReport;
use openkp::series::TruncatedSeries;
use openkp::tau::{self, TimeBasis};
use openkp::wk::{self, CoordTable, TableKind, TableRoute};

/// Cache format version; bump on any schema change to invalidate old files.
const CACHE_VERSION: u64 = 1;

#[derive(Parser)]
#[command(
    name = "openkp",
    version,
    about = "Exact affine coordinates, Schur expansions, and connected n-point functions \
             of the extended open intersection-number tau-function",
    propagate_version = true
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Pretty)]
    format: Format,
    /// Directory for the coordinate-table cache (also via OPENKP_CACHE_DIR).
    #[arg(long, global = true, env = "OPENKP_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Wk,
    Open,
}

#[derive(Clone, Copy, ValueEnum)]
enum RouteArg {
    Closed,
    Recursion,
}

#[derive(Clone, Copy, ValueEnum)]
enum SeriesArg {
    /// The first Faber-Zagier series a(z).
    A,
    /// The second Faber-Zagier series b(z).
    B,
    /// The series c(z) generating row 0 of the open coordinates.
    C,
    /// The bivariate generating series of the open coordinates.
    AoGen,
    /// The bivariate generating series of the Witten-Kontsevich coordinates.
    WkGen,
}

#[derive(Clone, Copy, ValueEnum)]
enum NKindArg {
    Open,
    Wk,
    Ext,
}

#[derive(Clone, Copy, ValueEnum)]
enum BasisArg {
    Schur,
    T,
    Ts,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    All,
    Recursion,
    Linear,
    Symmetry,
    Ks,
    Virasoro,
    Hirota,
    NpointRoutes,
}

#[derive(Subcommand)]
enum Command {
    /// Affine coordinates a_{n,m}: a single entry or a triangular grid.
    Coords {
        #[arg(value_enum)]
        kind: KindArg,
        /// Row index (with --m).
        #[arg(long, requires = "m", conflicts_with = "grid")]
        n: Option<u32>,
        /// Column index (with --n).
        #[arg(long, requires = "n")]
        m: Option<u32>,
        /// Emit the whole grid n + m <= GRID instead.
        #[arg(long)]
        grid: Option<u32>,
        /// Which route builds the table.
        #[arg(long, value_enum, default_value_t = RouteArg::Closed)]
        route: RouteArg,
    },
    /// The series a(z), b(z), c(z), or a generating series of coordinates.
    Series {
        #[arg(value_enum)]
        which: SeriesArg,
        /// Truncation depth (lowest exponent is -DEPTH for the univariate
        /// series; coordinate box n, m <= DEPTH for the generating series).
        #[arg(long)]
        depth: u32,
    },
    /// Connected n-point functions.
    Npoint {
        #[arg(long, value_enum)]
        kind: NKindArg,
        /// Number of insertion points.
        #[arg(long)]
        points: usize,
        /// Total degree: all coefficients with sum of (j_i + 1) <= DEGREE.
        #[arg(long)]
        degree: u32,
    },
    /// The tau-function expanded in Schur functions or time variables.
    Tau {
        #[arg(long)]
        max_weight: u32,
        #[arg(long, value_enum)]
        basis: BasisArg,
        #[arg(long, value_enum, default_value_t = KindArg::Open)]
        kind: KindArg,
    },
    /// log of the tau-function in time variables.
    FreeEnergy {
        #[arg(long)]
        max_weight: u32,
        #[arg(long, value_enum)]
        basis: BasisArg,
        #[arg(long, value_enum, default_value_t = KindArg::Open)]
        kind: KindArg,
    },
    /// Run a verification suite; exits 1 if any check fails.
    Verify {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        /// Suite size: recursion/linear check Virasoro indices n <= MAX,
        /// symmetry checks p, q <= MAX, ks checks to order z^-MAX, virasoro
        /// checks annihilation to weight MAX, hirota to combined weight MAX,
        /// npoint-routes to total degree MAX.
        #[arg(long)]
        max: Option<i64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(all_passed) => {
            if all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

/// Build or load a coordinate table of at least the given weight. Cached
/// tables of larger weight are sliced down so outputs do not depend on the
/// cache state.
fn get_table(
    kind: TableKind,
    route: TableRoute,
    weight: u32,
    cache_dir: &Option<PathBuf>,
) -> openkp::Result<CoordTable> {
    let file = cache_dir
        .as_ref()
        .map(|d| d.join(format!("{kind}_{route}.json")));
    if let Some(path) = &file {
        if let Ok(text) = std::fs::read_to_string(path) {
            if let Ok(v) = serde_json::from_str::<serde_json::Value>(&text) {
                let version_ok = v.get("version").and_then(|x| x.as_u64()) == Some(CACHE_VERSION);
                if version_ok {
                    if let Ok(table) = CoordTable::from_json(&v) {
                        if table.max_weight >= weight {
                            return Ok(table.sliced(weight));
                        }
                    }
                }
            }
        }
    }
    let table = match (kind, route) {
        (TableKind::Wk, TableRoute::ClosedForm) => wk::wk_table_closed(weight),
        (TableKind::Wk, TableRoute::Recursion) => wk::wk_table_recursive(weight),
        (TableKind::Open, TableRoute::ClosedForm) => open::open_table_closed(weight),
        (TableKind::Open, TableRoute::Recursion) => open::open_table_recursive(weight),
    };
    if let Some(path) = &file {
        if let Some(dir) = path.parent() {
            let _ = std::fs::create_dir_all(dir);
        }
        let mut v = table.to_json();
        v.as_object_mut()
            .unwrap()
            .insert("version".into(), serde_json::json!(CACHE_VERSION));
        let _ = std::fs::write(path, serde_json::to_string(&v).unwrap());
    }
    Ok(table)
}

fn print_series(s: &TruncatedSeries, format: Format) {
    match format {
        Format::Json => println!("{}", serde_json::to_string(&s.to_json()).unwrap()),
        Format::Csv => {
            let vars: Vec<String> = s.vars().to_vec();
            println!("{},coefficient", vars.join(","));
            for (e, c) in s.terms() {
                let exps: Vec<String> = e.iter().map(|x| x.to_string()).collect();
                println!("{},{}", exps.join(","), format_rat(c));
            }
        }
        Format::Pretty => println!("{s}"),
    }
}

fn run(cli: Cli) -> openkp::Result<bool> {
    let format = cli.format;
    let cache = &cli.cache_dir;
    match cli.command {
        Command::Coords { kind, n, m, grid, route } => {
            let kind = match kind {
                KindArg::Wk => TableKind::Wk,
                KindArg::Open => TableKind::Open,
            };
            let route = match route {
                RouteArg::Closed => TableRoute::ClosedForm,
                RouteArg::Recursion => TableRoute::Recursion,
            };
            match (n, m, grid) {
                (Some(n), Some(m), None) => {
                    let table = get_table(kind, route, n + m, cache)?;
                    let v = table.get(n as i64, m as i64);
                    match format {
                        Format::Json => println!(
                            "{}",
                            serde_json::json!({ "n": n, "m": m, "c": format_rat(&v) })
                        ),
                        Format::Csv => {
                            println!("n,m,coefficient");
                            println!("{n},{m},{}", format_rat(&v));
                        }
                        Format::Pretty => println!("{}", format_rat(&v)),
                    }
                }
                (None, None, Some(w)) => {
                    let table = get_table(kind, route, w, cache)?;
                    match format {
                        Format::Json => println!("{}", serde_json::to_string(&table.to_json()).unwrap()),
                        Format::Csv => {
                            println!("n,m,coefficient");
                            for (&(n, m), c) in table.entries() {
                                println!("{n},{m},{}", format_rat(c));
                            }
                        }
                        Format::Pretty => {
                            for (&(n, m), c) in table.entries() {
                                if *c != openkp::Rat::from_integer(0.into()) {
                                    println!("a[{n},{m}] = {}", format_rat(c));
                                }
                            }
                        }
                    }
                }
                _ => {
                    eprintln!("error: pass either --n N --m M or --grid W");
                    std::process::exit(2);
                }
            }
            Ok(true)
        }
        Command::Series { which, depth } => {
            let s = match which {
                SeriesArg::A => wk::faber_zagier_a("z", depth.div_ceil(3)),
                SeriesArg::B => wk::faber_zagier_b("z", depth.div_ceil(3)),
                SeriesArg::C => open::c_series("z", depth.div_ceil(3)),
                SeriesArg::AoGen => open::open_generating(depth)?,
                SeriesArg::WkGen => wk::wk_generating(depth)?,
            };
            print_series(&s, format);
            Ok(true)
        }
        Command::Npoint { kind, points, degree } => {
            let g = match kind {
                NKindArg::Open => npoint::connected_npoint(CorrelatorKind::Open, points, degree)?,
                NKindArg::Wk => npoint::connected_npoint(CorrelatorKind::Wk, points, degree)?,
                NKindArg::Ext => npoint::ext_correlator(points, degree)?,
            };
            match format {
                Format::Json => println!("{}", serde_json::to_string(&g.to_json()).unwrap()),
                Format::Csv => print!("{}", g.to_csv()),
                Format::Pretty => println!("{}", g.series),
            }
            Ok(true)
        }
        Command::Tau { max_weight, basis, kind } => {
            let kind = match kind {
                KindArg::Wk => TableKind::Wk,
                KindArg::Open => TableKind::Open,
            };
            let table = get_table(kind, TableRoute::ClosedForm, max_weight.max(1), cache)?;
            emit_expansion(max_weight, basis, &table, format, false)
        }
        Command::FreeEnergy { max_weight, basis, kind } => {
            let kind = match kind {
                KindArg::Wk => TableKind::Wk,
                KindArg::Open => TableKind::Open,
            };
            let table = get_table(kind, TableRoute::ClosedForm, max_weight.max(1), cache)?;
            emit_expansion(max_weight, basis, &table, format, true)
        }
        Command::Verify { suite, max } => run_verify(suite, max, cache),
    }
}

fn emit_expansion(
    max_weight: u32,
    basis: BasisArg,
    table: &CoordTable,
    format: Format,
    log: bool,
) -> openkp::Result<bool> {
    match basis {
        BasisArg::Schur => {
            if log {
                eprintln!("error: free-energy needs a time basis (T or ts)");
                std::process::exit(2);
            }
            let exp = tau::tau_schur_expansion(max_weight, table)?;
            match format {
                Format::Json => println!("{}", serde_json::to_string(&exp.to_json()).unwrap()),
                Format::Csv => {
                    println!("partition,coefficient");
                    for (mu, c) in exp.coefficients() {
                        println!("\"{mu}\",{}", format_rat(c));
                    }
                }
                Format::Pretty => {
                    for (mu, c) in exp.coefficients() {
                        println!("c{mu} = {}", format_rat(c));
                    }
                }
            }
        }
        BasisArg::T | BasisArg::Ts => {
            let b = if matches!(basis, BasisArg::T) { TimeBasis::T } else { TimeBasis::Ts };
            let poly = if log {
                tau::free_energy(max_weight, b, table)?
            } else {
                tau::tau_polynomial(max_weight, b, table)?
            };
            match format {
                Format::Json => println!("{}", serde_json::to_string(&poly.to_json()).unwrap()),
                Format::Csv => {
                    println!("monomial,coefficient");
                    for (m, c) in poly.terms() {
                        println!("{},{}", tau::format_monomial(m), format_rat(c));
                    }
                }
                Format::Pretty => {
                    for (m, c) in poly.terms() {
                        println!("{} : {}", tau::format_monomial(m), format_rat(c));
                    }
                }
            }
        }
    }
    Ok(true)
}

fn emit_report(report: &VerificationReport, format: Format) -> bool {
    match format {
        Format::Json => println!("{}", serde_json::to_string(&report.to_json()).unwrap()),
        _ => println!("{report}"),
    }
    report.passed()
}

fn run_verify(suite: SuiteArg, max: Option<i64>, cache: &Option<PathBuf>) -> openkp::Result<bool> {
    let mut ok = true;
    let format = Format::Pretty;
    let mut run_one = |r: VerificationReport| {
        ok &= emit_report(&r, format);
    };
    let suites: Vec<SuiteArg> = match suite {
        SuiteArg::All => vec![
            SuiteArg::Recursion,
            SuiteArg::Linear,
            SuiteArg::Symmetry,
            SuiteArg::Ks,
            SuiteArg::Virasoro,
            SuiteArg::Hirota,
            SuiteArg::NpointRoutes,
        ],
        s => vec![s],
    };
    for s in suites {
        match s {
            SuiteArg::All => unreachable!(),
            SuiteArg::Recursion => {
                let n_max = max.unwrap_or(5);
                let lm = 30u32;
                let table = get_table(
                    TableKind::Open,
                    TableRoute::ClosedForm,
                    lm + (2 * n_max.max(0) as u32 + 3),
                    cache,
                )?;
                for n in -1..=n_max {
                    run_one(open::verify_virasoro_recursion(n, lm, &table)?);
                }
            }
            SuiteArg::Linear => {
                let n_max = max.unwrap_or(6);
                let table = get_table(
                    TableKind::Open,
                    TableRoute::ClosedForm,
                    (2 * n_max.max(1) as u32) + 2,
                    cache,
                )?;
                for n in -1..=n_max {
                    run_one(open::verify_linear_constraint(n, &table)?);
                }
            }
            SuiteArg::Symmetry => {
                let pq = max.unwrap_or(5) as u32;
                let table = get_table(TableKind::Open, TableRoute::ClosedForm, 6 * pq + 4, cache)?;
                run_one(open::verify_symmetry(pq, &table)?);
            }
            SuiteArg::Ks => {
                let order = max.unwrap_or(30) as u32;
                run_one(open::verify_ks_relations(order)?);
            }
            SuiteArg::Virasoro => {
                let weight = max.unwrap_or(9) as u32;
                let table = get_table(TableKind::Open, TableRoute::ClosedForm, weight + 7, cache)?;
                for n in -1..=2 {
                    run_one(tau::verify_virasoro_bosonic(n, weight, &table)?);
                }
            }
            SuiteArg::Hirota => {
                let weight = max.unwrap_or(6) as u32;
                let table = get_table(TableKind::Open, TableRoute::ClosedForm, weight + 1, cache)?;
                run_one(tau::verify_hirota(weight, &table)?);
            }
            SuiteArg::NpointRoutes => {
                let degree = max.unwrap_or(12) as u32;
                run_one(npoint_routes_report(degree)?);
            }
        }
    }
    Ok(ok)
}

/// Compare the closed 1/2/3-point forms against the cycle formula and the
/// boundary-sector correlators against the difference of kinds.
fn npoint_routes_report(degree: u32) -> openkp::Result<VerificationReport> {
    let mut report = VerificationReport::new("npoint-routes", format!("total degree <= {degree}"));
    let d1 = degree;
    let cyc1 = npoint::connected_npoint(CorrelatorKind::Open, 1, d1)?;
    let clo1 = npoint::onepoint_closed(d1)?;
    let wk1 = npoint::connected_npoint(CorrelatorKind::Wk, 1, d1)?;
    let ext1 = npoint::ext_correlator(1, d1)?;
    for j in 1..d1 {
        report.check_eq(
            format!("1pt j={j}"),
            &cyc1.coeff(&[j])?,
            &clo1.coeff(&[j])?,
        );
        report.check_eq(
            format!("ext 1pt j={j}"),
            &(cyc1.coeff(&[j])? - wk1.coeff(&[j])?),
            &ext1.coeff(&[j])?,
        );
    }
    let d2 = degree.min(14);
    let cyc2 = npoint::connected_npoint(CorrelatorKind::Open, 2, d2)?;
    let clo2 = npoint::twopoint_closed(d2)?;
    for j1 in 1..=(d2 - 4) {
        for j2 in 1..=(d2 - 2 - j1) {
            report.check_eq(
                format!("2pt ({j1},{j2})"),
                &cyc2.coeff(&[j1, j2])?,
                &clo2.coeff(&[j1, j2])?,
            );
        }
    }
    let d3 = degree.min(12);
    let cyc3 = npoint::connected_npoint(CorrelatorKind::Open, 3, d3)?;
    let clo3 = npoint::threepoint_closed(d3)?;
    for j1 in 1..=(d3.saturating_sub(7)) {
        for j2 in 1..=(d3 - 6 - j1) {
            for j3 in 1..=(d3 - 5 - j1 - j2) {
                report.check_eq(
                    format!("3pt ({j1},{j2},{j3})"),
                    &cyc3.coeff(&[j1, j2, j3])?,
                    &clo3.coeff(&[j1, j2, j3])?,
                );
            }
        }
    }
    Ok(report)
}
