//! Command-line front end. Every command writes CSV with a header line;
//! floats are printed with 17 significant digits.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DVector;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::oracle::{duffy_reference, monomial_suite, GeometryCase, REFERENCE_ORDER};
use crate::quad1d::{gauss_jacobi, gauss_legendre};
use crate::singquad::{
    integrate_adaptive, integrate_singular, monomial, monomial_exponents, monomial_vector,
    QuadratureBudget, SingularIntegrand, SingularRules, SingularitySpec, DEFAULT_MAX_DEPTH,
};
use crate::tetgeom::{Tetrahedron, Vec3};
use crate::volquad::{
    biot_savart, fixed_tet_rule, line_samples, load_mesh, ring_error_metric,
    ring_reference_velocity, BiotSavartOptions, NearField, RingSpec, VorticityMode,
};

#[derive(Parser, Debug)]
#[command(name = "tetquad", version, about = "Singular quadrature on tetrahedra")]
struct Cli {
    /// Write the CSV to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Number of worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Nodes and weights of a Gauss rule on [-1, 1].
    Rule(RuleArgs),
    /// One monomial integral over a tetrahedron.
    Integrate(IntegrateArgs),
    /// Duffy reference value of one monomial integral.
    Oracle(OracleArgs),
    /// Relative error of all monomials up to a total degree, per rule length.
    Suite(SuiteArgs),
    /// Error against rule length over a family of tetrahedra.
    Converge(ConvergeArgs),
    /// Evaluation counts of the adaptive scheme.
    Adaptive(AdaptiveArgs),
    /// Vortex-ring velocity on the line (1, 0, z) from a tetgen mesh.
    Ring(RingArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Kind {
    Legendre,
    Jacobi,
}

#[derive(Args, Debug)]
struct RuleArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long)]
    n: usize,
    /// Jacobi weight exponent, weight (1 + t)^gamma.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    gamma: f64,
}

#[derive(Args, Debug)]
struct TetArg {
    /// Twelve coordinates "x0 y0 z0 x1 ... z3"; vertex 0 is singular.
    #[arg(long, allow_hyphen_values = true)]
    tet: String,
    /// Singularity exponent, integrand f / R^alpha.
    #[arg(long, allow_negative_numbers = true)]
    alpha: f64,
}

#[derive(Args, Debug)]
struct IntegrateArgs {
    #[command(flatten)]
    tet: TetArg,
    /// Rule lengths n_theta,n_phi,n_rho, or one length for all three.
    #[arg(long, value_delimiter = ',', default_value = "8")]
    order: Vec<usize>,
    /// Exponents i,j,k of x^i y^j z^k.
    #[arg(long, value_delimiter = ',', default_value = "0,0,0")]
    monomial: Vec<u32>,
    #[arg(long)]
    adaptive: bool,
    /// Absolute tolerance of the adaptive split test.
    #[arg(long, default_value_t = 1e-8, requires = "adaptive")]
    tol: f64,
    /// Scale the tolerance by a length-4 estimate of the integral.
    #[arg(long, requires = "adaptive")]
    relative: bool,
    #[arg(long, default_value_t = DEFAULT_MAX_DEPTH, requires = "adaptive")]
    max_depth: usize,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[command(flatten)]
    tet: TetArg,
    /// Gauss-Legendre length per Duffy coordinate.
    #[arg(long, default_value_t = REFERENCE_ORDER)]
    order: usize,
    #[arg(long, value_delimiter = ',', default_value = "0,0,0")]
    monomial: Vec<u32>,
}

#[derive(Args, Debug)]
struct SuiteArgs {
    #[command(flatten)]
    tet: TetArg,
    /// Highest total monomial degree.
    #[arg(long, default_value_t = 4)]
    nmax: u32,
    #[arg(long, value_delimiter = ',', default_value = "4,8,12,16,20")]
    orders: Vec<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Case {
    Height,
    Angle,
    Aspect,
}

#[derive(Args, Debug)]
struct ConvergeArgs {
    #[arg(long, value_enum)]
    case: Case,
    /// Family parameter: height h, base angle in radians, or aspect a.
    #[arg(long, value_delimiter = ',', required = true)]
    values: Vec<f64>,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, value_delimiter = ',', default_value = "4,8,12,16,20")]
    orders: Vec<usize>,
    #[arg(long, default_value_t = 4)]
    nmax: u32,
}

#[derive(Args, Debug)]
struct AdaptiveArgs {
    #[arg(long, value_delimiter = ',', default_value = "0.05,0.1,0.2,0.5,1")]
    heights: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "1e-3,1e-6,1e-9")]
    tols: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "4,8,12,16,20")]
    orders: Vec<usize>,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, default_value_t = 4)]
    nmax: u32,
    #[arg(long, default_value_t = DEFAULT_MAX_DEPTH)]
    max_depth: usize,
}

#[derive(Args, Debug)]
struct RingArgs {
    #[arg(long)]
    node: PathBuf,
    #[arg(long)]
    ele: PathBuf,
    /// Core radius of the Gaussian ring.
    #[arg(long, default_value_t = 0.3)]
    sigma: f64,
    /// Degree of the fixed rule on elements away from the target.
    #[arg(long, default_value_t = 13)]
    fixed_degree: usize,
    /// Singular rule lengths n_theta,n_phi,n_rho, or one length for all three.
    #[arg(long, value_delimiter = ',', default_value = "3")]
    singular_order: Vec<usize>,
    /// Use the fixed rule on elements touching the target as well.
    #[arg(long, conflicts_with = "adaptive_tol")]
    no_singular: bool,
    /// Integrate elements touching the target adaptively to this tolerance.
    #[arg(long)]
    adaptive_tol: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_MAX_DEPTH)]
    max_depth: usize,
    #[arg(long, default_value_t = 101)]
    line_samples: usize,
    /// Evaluate the exact vorticity at quadrature points instead of
    /// interpolating the nodal values.
    #[arg(long)]
    analytic_vorticity: bool,
}

/// Formats like C's `%.17g`.
pub fn fmt_g17(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0" } else { "0" }.into();
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if !(-4..17).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim(mantissa), sign, exp.abs())
    } else {
        trim(&format!("{:.*}", (16 - exp) as usize, x))
    }
}

fn row(cells: &[String]) -> String {
    let mut s = cells.join(",");
    s.push('\n');
    s
}

fn parse_tet(text: &str) -> Result<Tetrahedron> {
    let coords = text
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| Error::InvalidArgument(format!("cannot parse coordinate '{s}'")))
        })
        .collect::<Result<Vec<_>>>()?;
    Tetrahedron::from_coords(&coords)
}

fn parse_budget(order: &[usize]) -> Result<QuadratureBudget> {
    match *order {
        [n] => Ok(QuadratureBudget::uniform(n)),
        [a, b, c] => Ok(QuadratureBudget {
            n_theta: a,
            n_phi: b,
            n_rho: c,
        }),
        _ => Err(Error::InvalidArgument(format!(
            "expected one or three rule lengths, got {}",
            order.len()
        ))),
    }
}

fn parse_monomial(e: &[u32]) -> Result<[u32; 3]> {
    match *e {
        [i, j, k] => Ok([i, j, k]),
        _ => Err(Error::InvalidArgument(format!(
            "expected three monomial exponents, got {}",
            e.len()
        ))),
    }
}

fn cmd_rule(a: &RuleArgs) -> Result<String> {
    let rule = match a.kind {
        Kind::Legendre => gauss_legendre(a.n)?,
        Kind::Jacobi => gauss_jacobi(a.n, a.gamma)?,
    };
    let mut out = row(&["node".into(), "weight".into()]);
    for (t, w) in rule.iter() {
        out += &row(&[fmt_g17(t), fmt_g17(w)]);
    }
    Ok(out)
}

fn cmd_integrate(a: &IntegrateArgs) -> Result<String> {
    let tet = parse_tet(&a.tet.tet)?;
    let spec = SingularitySpec::new(a.tet.alpha)?;
    let e = parse_monomial(&a.monomial)?;
    let rules = SingularRules::new(parse_budget(&a.order)?, &spec)?;
    let g = SingularIntegrand::new(move |x: &Vec3| monomial(x, e), spec);
    if !a.adaptive {
        let r = integrate_singular(&tet, &g, &rules)?;
        return Ok(row(&["value".into(), "evals".into()])
            + &row(&[fmt_g17(r.value), r.evaluations.to_string()]));
    }
    let mut tol = a.tol;
    if a.relative {
        let pilot: f64 = integrate_singular(&tet, &g, &SingularRules::uniform(4, &spec)?)?.value;
        // a vanishing estimate leaves the tolerance absolute
        if pilot != 0.0 {
            tol *= pilot.abs();
        }
    }
    let r = integrate_adaptive(&tet, &g, &rules, tol, a.max_depth)?;
    Ok(
        row(&["value", "evals", "discrepancy", "splits", "depth"].map(String::from))
            + &row(&[
                fmt_g17(r.value),
                r.evaluations.to_string(),
                fmt_g17(r.discrepancy),
                r.splits.to_string(),
                r.depth.to_string(),
            ]),
    )
}

fn cmd_oracle(a: &OracleArgs) -> Result<String> {
    let tet = parse_tet(&a.tet.tet)?;
    let spec = SingularitySpec::new(a.tet.alpha)?;
    let e = parse_monomial(&a.monomial)?;
    let g = SingularIntegrand::new(move |x: &Vec3| monomial(x, e), spec);
    let v: f64 = duffy_reference(&tet, &g, a.order)?;
    Ok(row(&["value".into()]) + &row(&[fmt_g17(v)]))
}

fn cmd_suite(a: &SuiteArgs) -> Result<String> {
    let tet = parse_tet(&a.tet.tet)?;
    let suite = monomial_suite(&tet, a.nmax, a.tet.alpha, &a.orders)?;
    let mut out = row(&["order", "evals", "rel_error"].map(String::from));
    for r in &suite.rows {
        out += &row(&[
            r.order.to_string(),
            r.evaluations.to_string(),
            fmt_g17(r.rel_error),
        ]);
    }
    Ok(out)
}

fn cmd_converge(a: &ConvergeArgs) -> Result<String> {
    let case = match a.case {
        Case::Height => GeometryCase::Height,
        Case::Angle => GeometryCase::Angle,
        Case::Aspect => GeometryCase::Aspect,
    };
    let tables = a
        .values
        .par_iter()
        .map(|&p| monomial_suite(&case.tet(p), a.nmax, a.alpha, &a.orders))
        .collect::<Result<Vec<_>>>()?;
    let mut out = row(&["param", "order", "evals", "max_rel_error"].map(String::from));
    for (p, suite) in a.values.iter().zip(&tables) {
        for r in &suite.rows {
            out += &row(&[
                fmt_g17(*p),
                r.order.to_string(),
                r.evaluations.to_string(),
                fmt_g17(r.rel_error),
            ]);
        }
    }
    Ok(out)
}

fn cmd_adaptive(a: &AdaptiveArgs) -> Result<String> {
    let spec = SingularitySpec::new(a.alpha)?;
    let exps = monomial_exponents(a.nmax);
    let mut cells = Vec::new();
    for &h in &a.heights {
        for &tol in &a.tols {
            for &order in &a.orders {
                cells.push((h, tol, order));
            }
        }
    }
    let g = SingularIntegrand::new(|x: &Vec3| monomial_vector(x, &exps), spec);
    let evals = cells
        .par_iter()
        .map(|&(h, tol, order)| -> Result<usize> {
            let rules = SingularRules::uniform(order, &spec)?;
            let r = integrate_adaptive::<DVector<f64>, _>(
                &GeometryCase::Adaptive.tet(h),
                &g,
                &rules,
                tol,
                a.max_depth,
            )?;
            Ok(r.evaluations)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = row(&["h", "tol", "order", "evals"].map(String::from));
    for ((h, tol, order), n) in cells.iter().zip(evals) {
        out += &row(&[fmt_g17(*h), fmt_g17(*tol), order.to_string(), n.to_string()]);
    }
    Ok(out)
}

fn cmd_ring(a: &RingArgs) -> Result<String> {
    let spec = RingSpec::new(a.sigma)?;
    let mesh = load_mesh(&a.node, &a.ele, &spec)?;
    let budget = parse_budget(&a.singular_order)?;
    let near = match (a.no_singular, a.adaptive_tol) {
        (true, _) => NearField::FixedRule,
        (false, Some(tol)) => NearField::Adaptive {
            budget,
            tol,
            max_depth: a.max_depth,
        },
        (false, None) => NearField::Singular(budget),
    };
    let opts = BiotSavartOptions {
        fixed: fixed_tet_rule(a.fixed_degree)?,
        near,
        vorticity: if a.analytic_vorticity {
            VorticityMode::Analytic(spec)
        } else {
            VorticityMode::Interpolated
        },
    };
    let zs = line_samples(a.line_samples)?;
    let targets: Vec<Vec3> = zs.iter().map(|&z| Vec3::new(1.0, 0.0, z)).collect();
    let u = biot_savart(&mesh, &targets, &opts)?;
    let reference = zs
        .par_iter()
        .map(|&z| ring_reference_velocity(&spec, 1.0, z))
        .collect::<Result<Vec<_>>>()?;

    let mut out = row(&[
        "z",
        "u_z_computed",
        "u_z_reference",
        "u_r_computed",
        "u_r_reference",
    ]
    .map(String::from));
    for ((z, v), (ur, uz)) in zs.iter().zip(&u).zip(&reference) {
        out += &row(&[
            fmt_g17(*z),
            fmt_g17(v.z),
            fmt_g17(*uz),
            fmt_g17(v.x),
            fmt_g17(*ur),
        ]);
    }
    let computed: Vec<f64> = u.iter().map(|v| v.z).collect();
    let expected: Vec<f64> = reference.iter().map(|r| r.1).collect();
    let eps = ring_error_metric(&computed, &expected)?;
    let _ = writeln!(out, "error,{}", fmt_g17(eps));
    Ok(out)
}

fn execute(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Rule(a) => cmd_rule(a),
        Command::Integrate(a) => cmd_integrate(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Suite(a) => cmd_suite(a),
        Command::Converge(a) => cmd_converge(a),
        Command::Adaptive(a) => cmd_adaptive(a),
        Command::Ring(a) => cmd_ring(a),
    }
}

fn emit(cli: &Cli, csv: &str) -> Result<()> {
    match &cli.output {
        Some(path) => fs::write(path, csv)?,
        None => std::io::stdout().lock().write_all(csv.as_bytes())?,
    }
    Ok(())
}

/// Runs the tool on `args` (program name first) and returns the exit code:
/// 0 on success, 1 for usage errors, 2 for numerical failures.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    if let Some(k) = cli.threads {
        if k == 0 {
            eprintln!("error: --threads must be at least 1");
            return 1;
        }
        // a pool built earlier in the same process stays in place
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global();
    }
    match execute(&cli).and_then(|csv| emit(&cli, &csv)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_usage() {
                1
            } else {
                2
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g17_formatting() {
        assert_eq!(fmt_g17(0.5), "0.5");
        assert_eq!(fmt_g17(1.0 / 3.0), "0.33333333333333331");
        assert_eq!(fmt_g17(-2.0), "-2");
        assert_eq!(fmt_g17(1e-5), "1.0000000000000001e-05");
        assert_eq!(fmt_g17(1e20), "1e+20");
        assert_eq!(fmt_g17(123456.0), "123456");
        for x in [0.1, 1.0 / 7.0, 6.02e23, -3.3e-12, 0.577_350_269_189_625_8] {
            assert_eq!(fmt_g17(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn tet_parsing() {
        assert!(parse_tet("0 0 0 1 0 0 0 1 0 0 0 1").is_ok());
        assert!(parse_tet("0,0,0, 1,0,0, 0,1,0, 0,0,1").is_ok());
        assert!(matches!(parse_tet("0 0 0"), Err(Error::InvalidArgument(_))));
        assert!(matches!(
            parse_tet("0 0 0 1 0 0 0 1 0 0 0 x"),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn budget_parsing() {
        assert_eq!(parse_budget(&[5]).unwrap(), QuadratureBudget::uniform(5));
        assert_eq!(parse_budget(&[2, 3, 4]).unwrap().per_pass(), 24);
        assert!(parse_budget(&[2, 3]).is_err());
    }
}
