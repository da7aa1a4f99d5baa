//! `bergq`: evaluate quotient Bergman kernels, run verification suites and
//! inspect groups and integer matrices. Output is JSON on stdout.
//!
//! Exit codes: 0 success or passing suite, 1 failing suite, 2 invalid input
//! (including near-singular evaluation points).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::io::Write;
use std::process::ExitCode;
use std::sync::Arc;

use bergq::group::{build_group, relative_invariant_for, Character, FiniteGroup, GroupSpec};
use bergq::intlin::{smith_normal_form, IntMatrix};
use bergq::kernels::{
    base_kernel, dihedral_kernels, ellipsoid_kernel, fat_hartogs_kernel,
    monomial_polyhedron_kernel, quotient_kernel_sum, rudin_ball_kernel, symmetrized_kernel_det,
    symmetrized_kernel_perm, BaseKind, KernelOracle,
};
use bergq::maps::{basic_map, BallAutomorphism, DomainSpec, HolomorphicMap, MapSpec, PolyMap};
use bergq::mpoly::{jacobian_det_poly, MultiPoly, PolyMapExpr};
use bergq::suites::{self, SuiteConfig};
use bergq::{point_from_interleaved, point_to_interleaved, Error, C64};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "bergq", version, about = "Bergman kernels of quotient domains")]
struct Cli {
    /// Write the JSON result to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a kernel at a pair of fiber representatives.
    Kernel(KernelArgs),
    /// Run a verification suite and print its report.
    Verify(VerifyArgs),
    /// Print a group, its hyperplanes or characters, an SNF, or a Jacobian.
    Inspect(InspectArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Preset {
    Polydisc,
    Ball,
    WeightedPolydisc,
    SymDet,
    SymPerm,
    DihedralSign,
    DihedralTrivial,
    Monomial,
    FatHartogs,
    Ellipsoid,
    QuotientSum,
    Rudin,
}

#[derive(Args, Debug)]
#[command(
    after_help = "Points are flat interleaved arrays [re1, im1, re2, im2, ...] of fiber \
representatives, e.g. --z '[0.5,0,0,0]' for (0.5, 0)."
)]
struct KernelArgs {
    #[arg(long, value_enum)]
    preset: Preset,
    /// Dimension; defaults to the length of --z.
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    p: Option<u32>,
    #[arg(long)]
    q: Option<u32>,
    #[arg(long)]
    gamma: Option<u32>,
    /// Integer matrix as nested JSON arrays, e.g. '[[2,-1],[0,1]]'.
    #[arg(long)]
    matrix: Option<String>,
    /// sym:d, dihedral:k, cyclic:n1,n2,... or trivial:d.
    #[arg(long)]
    group: Option<String>,
    /// Character name: trivial, sign, rho1, rho2 or exp(e1,...).
    #[arg(long)]
    character: Option<String>,
    /// Proper map: sym:d, dihedral:k, power:p,q or monomial:[[..]].
    #[arg(long)]
    map: Option<String>,
    /// Center of the ball automorphism, interleaved.
    #[arg(long)]
    psi_center: Option<String>,
    #[arg(long)]
    z: String,
    #[arg(long)]
    w: String,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(suites::SUITES))]
    suite: String,
    #[arg(long, default_value_t = 200_000)]
    samples: usize,
    /// Required by the Monte-Carlo suites.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 4.0)]
    tol_sigma: f64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum What {
    Group,
    Hyperplanes,
    Characters,
    Snf,
    Jacobian,
}

#[derive(Args, Debug)]
struct InspectArgs {
    #[arg(long, value_enum)]
    what: What,
    #[arg(long)]
    group: Option<String>,
    #[arg(long)]
    matrix: Option<String>,
    #[arg(long)]
    map: Option<String>,
}

/// Output plus exit code, or an error record.
type Outcome = Result<(Value, u8), Error>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match &cli.command {
        Command::Kernel(a) => cmd_kernel(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Inspect(a) => cmd_inspect(a),
    };
    let (value, code) = match outcome {
        Ok(v) => v,
        Err(e) => {
            let kind = match &e {
                Error::NearSingular(_) => "near-singular",
                Error::Domain(_) => "domain",
                Error::Unsupported(_) => "unsupported",
                _ => "invalid-input",
            };
            eprintln!("bergq: {e}");
            (json!({"error": kind, "detail": e.to_string()}), 2)
        }
    };
    let text = value.to_string();
    let written = match &cli.out {
        Some(path) => std::fs::write(path, format!("{text}\n")),
        None => writeln!(std::io::stdout(), "{text}"),
    };
    if let Err(e) = written {
        eprintln!("bergq: cannot write output: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

fn parse_point(flag: &str, s: &str) -> Result<Vec<C64>, Error> {
    let xs: Vec<f64> = serde_json::from_str(s).map_err(|e| invalid(format!("--{flag}: {e}")))?;
    if xs.is_empty() {
        return Err(invalid(format!("--{flag} is empty")));
    }
    if xs.iter().any(|x| !x.is_finite()) {
        return Err(invalid(format!("--{flag} has non-finite entries")));
    }
    point_from_interleaved(&xs)
}

fn parse_matrix(s: &str) -> Result<IntMatrix, Error> {
    serde_json::from_str(s).map_err(|e| invalid(format!("--matrix: {e}")))
}

fn need<T: Copy>(v: Option<T>, flag: &str) -> Result<T, Error> {
    v.ok_or_else(|| invalid(format!("this preset needs --{flag}")))
}

fn parse_group(s: Option<&str>) -> Result<FiniteGroup, Error> {
    let spec: GroupSpec = s
        .ok_or_else(|| invalid("this command needs --group"))?
        .parse()?;
    build_group(&spec)
}

fn find_character(g: &FiniteGroup, name: &str) -> Result<Character, Error> {
    match name {
        "trivial" => return Ok(g.trivial_character()),
        "sign" => return Ok(g.sign_character()),
        _ => {}
    }
    g.one_dim_characters()?
        .into_iter()
        .find(|c| c.name() == name)
        .ok_or_else(|| Error::NotACharacter(format!("'{name}' is not a character of {}", g.name())))
}

fn build_kernel(a: &KernelArgs, d: usize) -> Result<(KernelOracle, Value), Error> {
    let lambda = a.lambda.unwrap_or(2.0);
    Ok(match a.preset {
        Preset::Polydisc => (base_kernel(BaseKind::Polydisc(d))?, json!({"d": d})),
        Preset::Ball => (base_kernel(BaseKind::Ball(d))?, json!({"d": d})),
        Preset::WeightedPolydisc => {
            let lambda = need(a.lambda, "lambda")?;
            (
                base_kernel(BaseKind::WeightedPolydisc(d, lambda))?,
                json!({"d": d, "lambda": lambda}),
            )
        }
        Preset::SymDet => (
            symmetrized_kernel_det(d, lambda)?,
            json!({"d": d, "lambda": lambda}),
        ),
        Preset::SymPerm => (
            symmetrized_kernel_perm(d, lambda)?,
            json!({"d": d, "lambda": lambda}),
        ),
        Preset::DihedralSign | Preset::DihedralTrivial => {
            let k = need(a.k, "k")?;
            let (sign, trivial) = dihedral_kernels(k)?;
            let kern = if matches!(a.preset, Preset::DihedralSign) {
                sign
            } else {
                trivial
            };
            (kern, json!({"k": k}))
        }
        Preset::Monomial => {
            let m = a
                .matrix
                .as_deref()
                .ok_or_else(|| invalid("this preset needs --matrix"))?;
            let b = parse_matrix(m)?;
            (
                monomial_polyhedron_kernel(&b)?,
                json!({"matrix": b.to_rows()}),
            )
        }
        Preset::FatHartogs => {
            let gamma = need(a.gamma, "gamma")?;
            (fat_hartogs_kernel(gamma)?, json!({"gamma": gamma}))
        }
        Preset::Ellipsoid => {
            let (p, q) = (need(a.p, "p")?, need(a.q, "q")?);
            (ellipsoid_kernel(p, q)?, json!({"p": p, "q": q}))
        }
        Preset::QuotientSum => {
            let g = parse_group(a.group.as_deref())?;
            let chi = find_character(&g, a.character.as_deref().unwrap_or("sign"))?;
            let ell = relative_invariant_for(&g, &chi)?;
            let base = match a.lambda {
                Some(l) => BaseKind::WeightedPolydisc(g.dim(), l),
                None => BaseKind::Polydisc(g.dim()),
            };
            let params = json!({
                "group": g.spec().to_string(),
                "character": chi.name(),
                "lambda": a.lambda.unwrap_or(2.0),
            });
            (
                quotient_kernel_sum(&g, &chi, &ell, base_kernel(base)?)?,
                params,
            )
        }
        Preset::Rudin => {
            let g = parse_group(a.group.as_deref())?;
            let (theta, map_name): (Arc<dyn HolomorphicMap>, String) = match &a.map {
                Some(m) => (m.parse::<MapSpec>()?.build()?, m.clone()),
                None => (
                    Arc::new(PolyMap::new(basic_map(g.spec())?)),
                    format!("basic({})", g.spec()),
                ),
            };
            let psi = match &a.psi_center {
                Some(c) => BallAutomorphism::with_center(parse_point("psi-center", c)?)?,
                None => BallAutomorphism::identity(g.dim()),
            };
            let params = json!({
                "group": g.spec().to_string(),
                "map": map_name,
                "psi_center": point_to_interleaved(psi.center()),
            });
            let f: Arc<dyn HolomorphicMap> = Arc::new(bergq::maps::ProperMap {
                psi: Some(psi.clone()),
                theta,
            });
            (rudin_ball_kernel(&g, &psi, f)?, params)
        }
    })
}

fn cmd_kernel(a: &KernelArgs) -> Outcome {
    let z = parse_point("z", &a.z)?;
    let w = parse_point("w", &a.w)?;
    let d = a.d.unwrap_or(z.len());
    let (kernel, params) = build_kernel(a, d)?;
    let domain = match a.preset {
        Preset::Ball | Preset::Ellipsoid | Preset::Rudin => DomainSpec::Ball(kernel.dim()),
        _ => DomainSpec::Polydisc(kernel.dim()),
    };
    for (flag, p) in [("z", &z), ("w", &w)] {
        if p.len() == kernel.dim() && !domain.contains(p) {
            return Err(Error::Domain(format!(
                "--{flag} lies outside the {domain:?} fiber domain"
            )));
        }
    }
    let v = kernel.eval(&z, &w)?;
    if !v.re.is_finite() || !v.im.is_finite() {
        return Err(Error::NearSingular("kernel value is not finite".into()));
    }
    let preset = a
        .preset
        .to_possible_value()
        .map(|p| p.get_name().to_string())
        .unwrap_or_default();
    Ok((
        json!({
            "preset": preset,
            "params": params,
            "z": point_to_interleaved(&z),
            "w": point_to_interleaved(&w),
            "re": v.re,
            "im": v.im,
        }),
        0,
    ))
}

fn cmd_verify(a: &VerifyArgs) -> Outcome {
    let seed = match a.seed {
        Some(s) => s,
        None if suites::is_stochastic(&a.suite) => {
            return Err(invalid(format!("suite '{}' needs --seed", a.suite)));
        }
        None => SuiteConfig::default().seed,
    };
    if !(a.tol_sigma > 0.0) {
        return Err(invalid("--tol-sigma must be positive"));
    }
    let cfg = SuiteConfig {
        samples: a.samples,
        seed,
        tol_sigma: a.tol_sigma,
    };
    let report = suites::run_suite(&a.suite, &cfg)?;
    let code = if report.pass { 0 } else { 1 };
    let mut v = serde_json::to_value(&report).map_err(|e| invalid(e.to_string()))?;
    v["config"] = json!({
        "suite": a.suite,
        "samples": a.samples,
        "seed": seed,
        "tol_sigma": a.tol_sigma,
    });
    Ok((v, code))
}

/// Polynomial Jacobian of a map preset, or of the basic map of a group.
fn jacobian_of(a: &InspectArgs) -> Result<(MultiPoly, String), Error> {
    if let Some(m) = &a.map {
        let expr = match m.parse::<MapSpec>()? {
            MapSpec::Sym(d) => bergq::maps::symmetrization_map(d)?,
            MapSpec::Dihedral(k) => bergq::maps::dihedral_map(k)?,
            MapSpec::Power(p, q) => bergq::maps::power_map(p, q)?,
            MapSpec::Monomial(mat) => monomial_expr(&mat)?,
        };
        return Ok((jacobian_det_poly(&expr), m.clone()));
    }
    let g = parse_group(a.group.as_deref())?;
    Ok((
        jacobian_det_poly(&basic_map(g.spec())?),
        format!("basic({})", g.spec()),
    ))
}

fn monomial_expr(a: &IntMatrix) -> Result<PolyMapExpr, Error> {
    let d = a.rows();
    if !a.is_square() {
        return Err(invalid("monomial matrix must be square"));
    }
    let comps = (0..d)
        .map(|i| {
            let exp = a
                .row(i)
                .iter()
                .map(|&x| {
                    u32::try_from(x).map_err(|_| invalid("monomial exponents must be non-negative"))
                })
                .collect::<Result<Vec<_>, _>>()?;
            MultiPoly::monomial(d, exp, C64::new(1.0, 0.0))
        })
        .collect::<Result<Vec<_>, _>>()?;
    PolyMapExpr::new(comps)
}

fn cmd_inspect(a: &InspectArgs) -> Outcome {
    let v = match a.what {
        What::Group => {
            let g = parse_group(a.group.as_deref())?;
            json!({"what": "group", "group": g.spec().to_string(), "order": g.order(), "structure": g.to_json()})
        }
        What::Hyperplanes => {
            let g = parse_group(a.group.as_deref())?;
            let hs = g.reflecting_hyperplanes()?;
            json!({
                "what": "hyperplanes",
                "group": g.spec().to_string(),
                "count": hs.len(),
                "hyperplanes": hs.iter().map(|h| h.to_json()).collect::<Vec<_>>(),
            })
        }
        What::Characters => {
            let g = parse_group(a.group.as_deref())?;
            let chars = g.one_dim_characters()?;
            json!({
                "what": "characters",
                "group": g.spec().to_string(),
                "count": chars.len(),
                "characters": chars.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
            })
        }
        What::Snf => {
            let m = parse_matrix(
                a.matrix
                    .as_deref()
                    .ok_or_else(|| invalid("--what snf needs --matrix"))?,
            )?;
            let s = smith_normal_form(&m)?;
            json!({
                "what": "snf",
                "matrix": m.to_rows(),
                "p": s.p.to_rows(),
                "d": s.delta,
                "d_matrix": s.d.to_rows(),
                "q": s.q.to_rows(),
            })
        }
        What::Jacobian => {
            let (j, name) = jacobian_of(a)?;
            json!({"what": "jacobian", "map": name, "jacobian": j})
        }
    };
    Ok((v, 0))
}
