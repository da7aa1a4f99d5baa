//! Seeded Monte-Carlo quadrature against normalized Lebesgue measure and the
//! verification harnesses built on it.
//!
//! Sampling is split into fixed-size chunks; chunk `j` draws from
//! `ChaCha8Rng::seed_from_u64(seed ^ j)`. Chunks run in parallel and their
//! statistics are merged in chunk order, so results are bit-identical for a
//! given seed regardless of thread count.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::group::{
    character_exponents, relative_invariant_for, Character, FiniteGroup, GroupSpec,
};
use crate::kernels::{quotient_kernel_sum, KernelOracle};
use crate::maps::{DomainSpec, HolomorphicMap, PolyMap, WeightSpec};
use crate::mpoly::MultiPoly;
use crate::C64;

pub const MIN_SAMPLES: usize = 1000;
pub const MIN_ACCEPTANCE: f64 = 1e-4;
const CHUNK: usize = 4096;

/// A point function on fiber representatives or on quotient coordinates.
pub type PointFn = Arc<dyn Fn(&[C64]) -> Result<C64> + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MCEstimate {
    pub mean: C64,
    /// Standard error of the mean, the larger of the real and imaginary parts.
    pub stderr: f64,
    pub n: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: f64,
    mean_re: f64,
    m2_re: f64,
    mean_im: f64,
    m2_im: f64,
}

impl Moments {
    fn push(&mut self, x: C64) {
        self.n += 1.0;
        let d = x.re - self.mean_re;
        self.mean_re += d / self.n;
        self.m2_re += d * (x.re - self.mean_re);
        let d = x.im - self.mean_im;
        self.mean_im += d / self.n;
        self.m2_im += d * (x.im - self.mean_im);
    }

    fn merge(&mut self, o: &Moments) {
        if o.n == 0.0 {
            return;
        }
        let n = self.n + o.n;
        let d = o.mean_re - self.mean_re;
        self.mean_re += d * o.n / n;
        self.m2_re += o.m2_re + d * d * self.n * o.n / n;
        let d = o.mean_im - self.mean_im;
        self.mean_im += d * o.n / n;
        self.m2_im += o.m2_im + d * d * self.n * o.n / n;
        self.n = n;
    }

    fn estimate(&self, seed: u64) -> MCEstimate {
        let var = self.m2_re.max(self.m2_im) / (self.n - 1.0);
        MCEstimate {
            mean: C64::new(self.mean_re, self.mean_im),
            stderr: (var / self.n).sqrt(),
            n: self.n as usize,
            seed,
        }
    }
}

/// Estimates `∫ f_k · ω dV` for `m` integrands sharing the same samples.
/// `f` returns the `m` integrand values at one point.
pub fn mc_integrate_many<F>(
    domain: DomainSpec,
    m: usize,
    f: F,
    weight: &WeightSpec,
    n: usize,
    seed: u64,
) -> Result<Vec<MCEstimate>>
where
    F: Fn(&[C64]) -> Result<Vec<C64>> + Sync,
{
    if n < MIN_SAMPLES {
        return Err(Error::InvalidInput(format!(
            "need at least {MIN_SAMPLES} samples, got {n}"
        )));
    }
    if domain.acceptance_rate() < MIN_ACCEPTANCE {
        return Err(Error::Sampler(format!(
            "rejection efficiency {:.2e} is below {MIN_ACCEPTANCE:e}",
            domain.acceptance_rate()
        )));
    }
    let chunks = n.div_ceil(CHUNK);
    let per_chunk: Vec<Vec<Moments>> = (0..chunks)
        .into_par_iter()
        .map(|j| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ j as u64);
            let count = CHUNK.min(n - j * CHUNK);
            let mut stats = vec![Moments::default(); m];
            for _ in 0..count {
                let z = domain.sample(&mut rng);
                let w = weight.eval(&z)?;
                let vals = f(&z)?;
                if vals.len() != m {
                    return Err(Error::DimensionMismatch {
                        expected: m,
                        got: vals.len(),
                    });
                }
                for (s, v) in stats.iter_mut().zip(vals) {
                    s.push(v * w);
                }
            }
            Ok(stats)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut total = vec![Moments::default(); m];
    for chunk in &per_chunk {
        for (t, c) in total.iter_mut().zip(chunk) {
            t.merge(c);
        }
    }
    Ok(total.iter().map(|s| s.estimate(seed)).collect())
}

/// `∫_Ω f · ω dV` with `dV` Lebesgue measure divided by the volume of `Ω`.
pub fn mc_integrate<F>(
    domain: DomainSpec,
    f: F,
    weight: &WeightSpec,
    n: usize,
    seed: u64,
) -> Result<MCEstimate>
where
    F: Fn(&[C64]) -> Result<C64> + Sync,
{
    Ok(mc_integrate_many(domain, 1, |z| Ok(vec![f(z)?]), weight, n, seed)?[0])
}

/// `∫_{θ(Ω)} g · ω dV`, pulled back to `Ω` as
/// `(1/|G|) ∫_Ω g(θ(z)) ω(θ(z)) |J_θ(z)|² dV(z)`. Both `g` and the weight
/// are given on fiber representatives.
#[allow(clippy::too_many_arguments)]
pub fn mc_integrate_quotient_many<F>(
    domain: DomainSpec,
    group_order: usize,
    theta: &dyn HolomorphicMap,
    m: usize,
    g: F,
    weight: &WeightSpec,
    n: usize,
    seed: u64,
) -> Result<Vec<MCEstimate>>
where
    F: Fn(&[C64]) -> Result<Vec<C64>> + Sync,
{
    let est = mc_integrate_many(
        domain,
        m,
        |z| {
            let j = theta.jacobian_det(z)?.norm_sqr();
            Ok(g(z)?.into_iter().map(|v| v * j).collect())
        },
        weight,
        n,
        seed,
    )?;
    let k = group_order as f64;
    Ok(est
        .into_iter()
        .map(|e| MCEstimate {
            mean: e.mean / k,
            stderr: e.stderr / k,
            ..e
        })
        .collect())
}

pub fn mc_integrate_quotient<F>(
    domain: DomainSpec,
    group_order: usize,
    theta: &dyn HolomorphicMap,
    g: F,
    weight: &WeightSpec,
    n: usize,
    seed: u64,
) -> Result<MCEstimate>
where
    F: Fn(&[C64]) -> Result<C64> + Sync,
{
    Ok(mc_integrate_quotient_many(
        domain,
        group_order,
        theta,
        1,
        |z| Ok(vec![g(z)?]),
        weight,
        n,
        seed,
    )?[0])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckDetail {
    pub label: String,
    pub residual: f64,
    pub threshold: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub name: String,
    pub inputs_digest: String,
    pub pass: bool,
    pub details: Vec<CheckDetail>,
    /// Values recorded for reference only; they do not affect `pass`.
    pub info: Vec<Value>,
}

impl VerificationReport {
    pub fn new(name: impl Into<String>, inputs: &Value) -> Self {
        Self {
            name: name.into(),
            inputs_digest: digest(inputs),
            pass: true,
            details: Vec::new(),
            info: Vec::new(),
        }
    }

    pub fn check(&mut self, label: impl Into<String>, residual: f64, threshold: f64) {
        // NaN residuals fail
        let ok = residual <= threshold;
        self.pass &= ok;
        self.details.push(CheckDetail {
            label: label.into(),
            residual,
            threshold,
        });
    }

    pub fn absorb(&mut self, other: VerificationReport) {
        for d in other.details {
            self.check(
                format!("{}/{}", other.name, d.label),
                d.residual,
                d.threshold,
            );
        }
        self.info.extend(other.info);
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckDetail> {
        self.details.iter().filter(|d| !(d.residual <= d.threshold))
    }
}

pub fn digest(v: &Value) -> String {
    hex::encode(Sha256::digest(v.to_string().as_bytes()))
}

/// Derives an independent sub-seed for check number `tag`.
pub fn sub_seed(seed: u64, tag: u64) -> u64 {
    seed.wrapping_add(tag.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// A named function of quotient coordinates `u = θ(z)`.
#[derive(Clone)]
pub struct TestFunction {
    pub label: String,
    pub f: PointFn,
}

impl TestFunction {
    pub fn new<F>(label: &str, f: F) -> Self
    where
        F: Fn(&[C64]) -> Result<C64> + Send + Sync + 'static,
    {
        Self {
            label: label.into(),
            f: Arc::new(f),
        }
    }

    /// `1, u₁, u₂, u₁u₂`.
    pub fn standard() -> Vec<TestFunction> {
        vec![
            TestFunction::new("1", |_| Ok(C64::new(1.0, 0.0))),
            TestFunction::new("u1", |u| Ok(u[0])),
            TestFunction::new("u2", |u| Ok(u[1])),
            TestFunction::new("u1u2", |u| Ok(u[0] * u[1])),
        ]
    }
}

/// Setting shared by the reproducing and projection harnesses: a quotient
/// `θ(Ω)` of a base domain by a group of the given order.
#[derive(Clone)]
pub struct QuotientSetting {
    pub domain: DomainSpec,
    pub group_order: usize,
    pub theta: Arc<dyn HolomorphicMap>,
}

/// Checks `⟨f, K(·, z)⟩ = f(θ(z))` for every test function and point,
/// with `⟨f, K(·, z)⟩ = ∫ f(w) conj K(w, z) ω dV(w)` over the quotient.
#[allow(clippy::too_many_arguments)]
pub fn verify_reproducing(
    name: &str,
    kernel: &KernelOracle,
    setting: &QuotientSetting,
    weight: &WeightSpec,
    tests: &[TestFunction],
    points: &[Vec<C64>],
    n: usize,
    seed: u64,
    tol_sigma: f64,
) -> Result<VerificationReport> {
    let inputs = json!({
        "suite": "reproducing",
        "name": name,
        "kernel": kernel.label(),
        "domain": format!("{:?}", setting.domain),
        "group_order": setting.group_order,
        "weight": format!("{weight:?}"),
        "tests": tests.iter().map(|t| t.label.clone()).collect::<Vec<_>>(),
        "points": points.iter().map(|p| crate::point_to_interleaved(p)).collect::<Vec<_>>(),
        "n": n, "seed": seed, "tol_sigma": tol_sigma,
    });
    let mut report = VerificationReport::new(name, &inputs);
    for (pi, z) in points.iter().enumerate() {
        let theta = setting.theta.clone();
        let integrand = |w: &[C64]| {
            let k = kernel.eval(w, z)?.conj();
            let u = theta.eval(w)?;
            tests
                .iter()
                .map(|t| Ok((t.f)(&u)? * k))
                .collect::<Result<Vec<_>>>()
        };
        let est = mc_integrate_quotient_many(
            setting.domain,
            setting.group_order,
            setting.theta.as_ref(),
            tests.len(),
            integrand,
            weight,
            n,
            sub_seed(seed, pi as u64),
        )?;
        let uz = setting.theta.eval(z)?;
        for (t, e) in tests.iter().zip(est) {
            let expected = (t.f)(&uz)?;
            let resid = (e.mean - expected).norm();
            report.check(format!("f={} z#{pi}", t.label), resid, tol_sigma * e.stderr);
            report.info.push(json!({
                "check": format!("f={} z#{pi}", t.label),
                "estimate": [e.mean.re, e.mean.im],
                "expected": [expected.re, expected.im],
                "stderr": e.stderr,
            }));
        }
    }
    Ok(report)
}

/// Weighted Bergman data on the base domain: kernel `B_ω` and weight `ω`.
#[derive(Clone)]
pub struct WeightedSpace {
    pub kernel: KernelOracle,
    pub weight: WeightSpec,
}

/// Checks `P^ω_Ω(ℓ_ρ · (φ∘θ))(w) = ℓ_ρ(w) · (P^{ω_ρ}_{θ(Ω)} φ)(θ(w))`.
///
/// The left side integrates `B_ω(w, v) ℓ_ρ(v) φ(θ(v)) ω(v)` over `Ω`; the
/// right side integrates `B_{ω_ρ}(θw, θv) φ(θ(v)) ω_ρ(θ(v))` over `θ(Ω)`
/// with `B_{ω_ρ}` from the group sum. The two sides use independent seeds
/// and agree when `|L − R| ≤ tol · √(se_L² + se_R²)`.
#[allow(clippy::too_many_arguments)]
pub fn verify_projection_identity(
    name: &str,
    group: &FiniteGroup,
    chi: &Character,
    setting: &QuotientSetting,
    space: &WeightedSpace,
    phis: &[TestFunction],
    points: &[Vec<C64>],
    n: usize,
    seed: u64,
    tol_sigma: f64,
) -> Result<VerificationReport> {
    let inputs = json!({
        "suite": "projection-identity",
        "name": name,
        "group": group.name(),
        "character": chi.name(),
        "kernel": space.kernel.label(),
        "weight": format!("{:?}", space.weight),
        "phis": phis.iter().map(|t| t.label.clone()).collect::<Vec<_>>(),
        "points": points.iter().map(|p| crate::point_to_interleaved(p)).collect::<Vec<_>>(),
        "n": n, "seed": seed, "tol_sigma": tol_sigma,
    });
    let mut report = VerificationReport::new(name, &inputs);
    let ell = relative_invariant_for(group, chi)?;
    let k_rho = quotient_kernel_sum(group, chi, &ell, space.kernel.clone())?;
    let w_rho = WeightSpec::Relative {
        base: Box::new(space.weight.clone()),
        ell: ell.clone(),
        theta: setting.theta.clone(),
    };
    for (pi, w) in points.iter().enumerate() {
        let theta = setting.theta.clone();
        let lhs = mc_integrate_many(
            setting.domain,
            phis.len(),
            |v| {
                let b = space.kernel.eval(w, v)? * ell.eval(v)?;
                let u = theta.eval(v)?;
                phis.iter().map(|p| Ok((p.f)(&u)? * b)).collect()
            },
            &space.weight,
            n,
            sub_seed(seed, 2 * pi as u64),
        )?;
        let rhs = mc_integrate_quotient_many(
            setting.domain,
            setting.group_order,
            setting.theta.as_ref(),
            phis.len(),
            |v| {
                let k = k_rho.eval(w, v)?;
                let u = theta.eval(v)?;
                phis.iter().map(|p| Ok((p.f)(&u)? * k)).collect()
            },
            &w_rho,
            n,
            sub_seed(seed, 2 * pi as u64 + 1),
        )?;
        let lw = ell.eval(w)?;
        for ((p, l), r) in phis.iter().zip(lhs).zip(rhs) {
            let right = lw * r.mean;
            let se = (l.stderr.powi(2) + (lw.norm() * r.stderr).powi(2)).sqrt();
            let label = format!("phi={} w#{pi}", p.label);
            report.check(label.clone(), (l.mean - right).norm(), tol_sigma * se);
            report.info.push(json!({
                "check": label,
                "lhs": [l.mean.re, l.mean.im],
                "rhs": [right.re, right.im],
                "combined_stderr": se,
            }));
        }
    }
    Ok(report)
}

/// Deterministic test points in the polydisc of radius 0.9, redrawn while
/// `reject` holds.
pub fn structural_points<P>(d: usize, count: usize, seed: u64, reject: P) -> Vec<Vec<C64>>
where
    P: Fn(&[C64]) -> bool,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let z: Vec<C64> = DomainSpec::Polydisc(d)
            .sample(&mut rng)
            .into_iter()
            .map(|c| c * 0.9)
            .collect();
        if !reject(&z) {
            out.push(z);
        }
    }
    out
}

/// Polynomial with every monomial of total degree at most `deg`, with
/// fixed pseudo-random coefficients.
pub fn generic_polynomial(d: usize, deg: u32, seed: u64) -> MultiPoly {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut terms = Vec::new();
    let mut exp = vec![0u32; d];
    loop {
        if exp.iter().sum::<u32>() <= deg {
            terms.push((
                exp.clone(),
                C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            ));
        }
        let mut k = 0;
        loop {
            if k == d {
                return MultiPoly::from_terms(d, terms).expect("well-formed exponents");
            }
            exp[k] += 1;
            if exp[k] <= deg {
                break;
            }
            exp[k] = 0;
            k += 1;
        }
    }
}

fn rel_diff(a: C64, b: C64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}

/// Bundles the group-module invariants for a catalog group and its basic
/// map: projection idempotency and equivariance, completeness (abelian
/// groups), invariance of `P_ρ f / ℓ_ρ`, constancy of
/// `J_θ / ∏ ℓ_i^{m_i − 1}`, sign exponents `c_i = m_i − 1`, and
/// `θ`-invariance.
pub fn verify_structural(
    group: &FiniteGroup,
    theta: &PolyMap,
    seed: u64,
) -> Result<VerificationReport> {
    let inputs = json!({"suite": "structural", "group": group.name(), "seed": seed});
    let mut report = VerificationReport::new(format!("structural({})", group.name()), &inputs);
    let d = group.dim();
    let hyperplanes = group.reflecting_hyperplanes()?;
    let chars = group.one_dim_characters()?;
    let off_planes = |z: &[C64]| {
        hyperplanes.iter().any(|h| {
            h.linear_form
                .eval(z)
                .map(|v| v.norm() < 1e-3)
                .unwrap_or(true)
        })
    };
    let points = structural_points(d, 20, seed, off_planes);
    let poly = generic_polynomial(d, 5, seed ^ 0x5eed);
    let f = |z: &[C64]| poly.eval(z);

    let mut idem = 0.0f64;
    let mut equiv = 0.0f64;
    let mut quo = 0.0f64;
    for chi in &chars {
        let ell = relative_invariant_for(group, chi)?;
        let pf = |y: &[C64]| group.project(chi, f, y);
        for z in &points {
            let once = pf(z)?;
            idem = idem.max((group.project(chi, pf, z)? - once).norm());
            for (t, tau) in group.elements().iter().enumerate() {
                let moved = pf(&tau.apply_matrix(z)?)?;
                equiv = equiv.max((moved - chi.value(t) * once).norm());
            }
            let ratio = once / ell.eval(z)?;
            for g in group.elements() {
                let y = g.apply_matrix(z)?;
                quo = quo.max(rel_diff(pf(&y)? / ell.eval(&y)?, ratio));
            }
        }
    }
    report.check("projection idempotency", idem, 1e-10);
    report.check("projection equivariance", equiv, 1e-10);
    report.check("quotient P_rho f / l_rho invariance", quo, 1e-8);

    if group.is_abelian() {
        let mut worst = 0.0f64;
        for z in &points {
            let mut s = C64::new(0.0, 0.0);
            for chi in &chars {
                s += group.project(chi, f, z)?;
            }
            worst = worst.max((s - f(z)?).norm());
        }
        report.check("abelian completeness", worst, 1e-10);
    }

    let mut prod = MultiPoly::one(d);
    for h in &hyperplanes {
        prod = &prod * &h.linear_form.pow(h.order - 1);
    }
    let jac_points = structural_points(d, 50, seed ^ 0x1ac, off_planes);
    let ratios = jac_points
        .iter()
        .map(|z| Ok(theta.jacobian_det(z)? / prod.eval(z)?))
        .collect::<Result<Vec<_>>>()?;
    let spread = ratios
        .iter()
        .map(|r| rel_diff(*r, ratios[0]))
        .fold(0.0, f64::max);
    report.check("jacobian factorization spread", spread, 1e-8);
    report
        .info
        .push(json!({"jacobian_constant": [ratios[0].re, ratios[0].im]}));

    let exps = character_exponents(&group.sign_character(), &hyperplanes)?;
    let mismatches = exps
        .iter()
        .zip(&hyperplanes)
        .filter(|(c, h)| **c != h.order - 1)
        .count();
    report.check(
        "sign exponents c_i = m_i - 1 (mismatches)",
        mismatches as f64,
        0.0,
    );

    let mut inv = 0.0f64;
    for z in &points {
        let base = theta.eval(z)?;
        for g in group.elements() {
            let moved = theta.eval(&g.act_point(z)?)?;
            for (a, b) in moved.iter().zip(&base) {
                inv = inv.max((a - b).norm());
            }
        }
    }
    report.check("theta invariance", inv, 1e-10);
    Ok(report)
}

/// Structural report for a catalog group with its catalog basic map.
pub fn verify_structural_catalog(spec: &GroupSpec, seed: u64) -> Result<VerificationReport> {
    let group = crate::group::build_group(spec)?;
    let theta = PolyMap::new(crate::maps::basic_map(spec)?);
    verify_structural(&group, &theta, seed)
}
