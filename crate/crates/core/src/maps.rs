//! Basic polynomial maps, monomial maps, ball automorphisms, domains and
//! weights.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{check_dim, Error, Result};
use crate::group::{mat_vec, Character, FiniteGroup, GroupElement, GroupSpec};
use crate::intlin::IntMatrix;
use crate::mpoly::{elementary_symmetric, jacobian_det_poly, MultiPoly, PolyMapExpr};
use crate::{inner, norm_sqr, C64};

/// Guard used by every division by `ℓ_ρ` or `J_θ`.
pub const SINGULAR_EPS: f64 = 1e-9;

/// Finite-difference step for numerically differentiated maps.
pub const FD_STEP: f64 = 1e-6;

/// A holomorphic self-map of `Cᵈ` with a pointwise Jacobian determinant.
pub trait HolomorphicMap: Send + Sync + fmt::Debug {
    fn dim(&self) -> usize;
    fn eval(&self, z: &[C64]) -> Result<Vec<C64>>;
    fn jacobian_det(&self, z: &[C64]) -> Result<C64>;
}

/// Polynomial map with its Jacobian determinant expanded once.
#[derive(Debug, Clone)]
pub struct PolyMap {
    expr: PolyMapExpr,
    jacobian: MultiPoly,
}

impl PolyMap {
    pub fn new(expr: PolyMapExpr) -> Self {
        let jacobian = jacobian_det_poly(&expr);
        Self { expr, jacobian }
    }

    pub fn expr(&self) -> &PolyMapExpr {
        &self.expr
    }

    pub fn jacobian_poly(&self) -> &MultiPoly {
        &self.jacobian
    }
}

impl HolomorphicMap for PolyMap {
    fn dim(&self) -> usize {
        self.expr.dim()
    }

    fn eval(&self, z: &[C64]) -> Result<Vec<C64>> {
        self.expr.eval(z)
    }

    fn jacobian_det(&self, z: &[C64]) -> Result<C64> {
        self.jacobian.eval(z)
    }
}

/// `(s₁, …, s_d)`.
pub fn symmetrization_map(d: usize) -> Result<PolyMapExpr> {
    if d == 0 {
        return Err(Error::InvalidInput(
            "symmetrization map needs d >= 1".into(),
        ));
    }
    PolyMapExpr::new(
        (1..=d)
            .map(|k| elementary_symmetric(d, k))
            .collect::<Result<_>>()?,
    )
}

/// `(z₁ᵏ + z₂ᵏ, z₁z₂)`.
pub fn dihedral_map(k: u32) -> Result<PolyMapExpr> {
    if k < 2 {
        return Err(Error::InvalidInput("dihedral map needs k >= 2".into()));
    }
    let z1 = MultiPoly::var(2, 0)?;
    let z2 = MultiPoly::var(2, 1)?;
    PolyMapExpr::new(vec![&z1.pow(k) + &z2.pow(k), &z1 * &z2])
}

/// `(z₁ᵖ, z₂^q)`.
pub fn power_map(p: u32, q: u32) -> Result<PolyMapExpr> {
    diagonal_power_map(&[p, q])
}

/// `(z₁^{n₁}, …, z_d^{n_d})`, the basic map of a diagonal cyclic product.
pub fn diagonal_power_map(ns: &[u32]) -> Result<PolyMapExpr> {
    if ns.is_empty() || ns.contains(&0) {
        return Err(Error::InvalidInput(
            "power map exponents must be >= 1".into(),
        ));
    }
    let d = ns.len();
    PolyMapExpr::new(
        ns.iter()
            .enumerate()
            .map(|(j, &n)| Ok(MultiPoly::var(d, j)?.pow(n)))
            .collect::<Result<_>>()?,
    )
}

/// The catalog basic map for a catalog group.
pub fn basic_map(spec: &GroupSpec) -> Result<PolyMapExpr> {
    match spec {
        GroupSpec::Symmetric(d) => symmetrization_map(*d),
        GroupSpec::Dihedral(k) => dihedral_map(*k),
        GroupSpec::CyclicProduct(ns) => diagonal_power_map(ns),
        GroupSpec::Explicit(_) => Err(Error::Unsupported(
            "no catalog basic map for explicit groups".into(),
        )),
    }
}

/// `Φ_A(z) = (z^{a¹}, …, z^{aᵈ})` for the rows `aⁱ` of `A`.
#[derive(Debug, Clone)]
pub struct MonomialMap {
    a: IntMatrix,
    det: i64,
    /// Exponents of the simplified Jacobian `det A · ∏ z_j^{colsum_j − 1}`.
    jac_exps: Vec<u32>,
}

impl MonomialMap {
    pub fn new(a: IntMatrix) -> Result<Self> {
        let det = a.determinant()?;
        if det == 0 {
            return Err(Error::InvalidInput(
                "monomial map needs a nonsingular matrix".into(),
            ));
        }
        if (0..a.rows()).any(|i| a.row(i).iter().any(|&x| x < 0)) {
            return Err(Error::InvalidInput(
                "monomial map needs non-negative exponents".into(),
            ));
        }
        let jac_exps = (0..a.cols())
            .map(|j| {
                let s: i64 = (0..a.rows()).map(|i| a.get(i, j)).sum();
                // a zero column would make A singular
                (s - 1) as u32
            })
            .collect();
        Ok(Self { a, det, jac_exps })
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.a
    }

    pub fn det(&self) -> i64 {
        self.det
    }
}

fn monomial(z: &[C64], exps: impl Iterator<Item = i64>) -> C64 {
    z.iter().zip(exps).fold(C64::new(1.0, 0.0), |acc, (zj, e)| {
        if e >= 0 {
            acc * zj.powu(e as u32)
        } else {
            acc / zj.powu((-e) as u32)
        }
    })
}

impl HolomorphicMap for MonomialMap {
    fn dim(&self) -> usize {
        self.a.rows()
    }

    fn eval(&self, z: &[C64]) -> Result<Vec<C64>> {
        check_dim(self.dim(), z.len())?;
        Ok((0..self.a.rows())
            .map(|i| monomial(z, self.a.row(i).iter().copied()))
            .collect())
    }

    /// The closed form `det A · ∏z^{aⁱ} / ∏z_j` simplified to a single
    /// monomial, so it is defined at zero coordinates as well.
    fn jacobian_det(&self, z: &[C64]) -> Result<C64> {
        check_dim(self.dim(), z.len())?;
        Ok(monomial(z, self.jac_exps.iter().map(|&e| e as i64)) * self.det as f64)
    }
}

/// `Ψ(z) = U·T_c(z)` where `T_c` is the ball automorphism exchanging `0`
/// and `c`: `T_c(z) = (c + P_c z + s Q_c z)/(1 + ⟨z, c⟩)` with
/// `s = √(1 − |c|²)`, `P_c` the projection onto `c` and `Q_c = I − P_c`.
///
/// `T_c = φ_c ∘ (−id)` for the usual involution `φ_c`, so `T_0 = id` and
/// `T_c⁻¹ = T_{−c}`. The involution itself is
/// `BallAutomorphism::new(−c, −I)`.
#[derive(Debug, Clone)]
pub struct BallAutomorphism {
    center: Vec<C64>,
    unitary: DMatrix<C64>,
    unitary_inv: DMatrix<C64>,
    unitary_det: C64,
}

impl BallAutomorphism {
    pub fn new(center: Vec<C64>, unitary: DMatrix<C64>) -> Result<Self> {
        let u = GroupElement::new(unitary)?;
        check_dim(u.dim(), center.len())?;
        if norm_sqr(&center) >= 1.0 {
            return Err(Error::Domain(
                "automorphism center must lie in the open ball".into(),
            ));
        }
        Ok(Self {
            center,
            unitary: u.matrix().clone(),
            unitary_inv: u.inverse_matrix().clone(),
            unitary_det: u.det(),
        })
    }

    pub fn identity(d: usize) -> Self {
        Self::new(vec![C64::new(0.0, 0.0); d], DMatrix::identity(d, d)).expect("identity")
    }

    pub fn with_center(center: Vec<C64>) -> Result<Self> {
        let d = center.len();
        Self::new(center, DMatrix::identity(d, d))
    }

    /// The standard involution `φ_a`.
    pub fn involution(a: Vec<C64>) -> Result<Self> {
        let d = a.len();
        let minus = DMatrix::<C64>::identity(d, d) * C64::new(-1.0, 0.0);
        Self::new(a.iter().map(|c| -c).collect(), minus)
    }

    pub fn center(&self) -> &[C64] {
        &self.center
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    fn is_linear(&self) -> bool {
        self.center.iter().all(|c| c.norm() == 0.0)
    }

    fn translate(c: &[C64], z: &[C64]) -> Result<Vec<C64>> {
        let c2 = norm_sqr(c);
        if c2 == 0.0 {
            return Ok(z.to_vec());
        }
        let s = (1.0 - c2).sqrt();
        let zc = inner(z, c);
        let denom = C64::new(1.0, 0.0) + zc;
        if denom.norm() < 1e-14 {
            return Err(Error::NearSingular("automorphism pole".into()));
        }
        let proj = zc / c2;
        Ok(z.iter()
            .zip(c)
            .map(|(zj, cj)| (cj + proj * cj + (zj - proj * cj) * s) / denom)
            .collect())
    }

    fn raw(&self, z: &[C64]) -> Result<Vec<C64>> {
        mat_vec(&self.unitary, &Self::translate(&self.center, z)?)
    }

    fn raw_inverse(&self, y: &[C64]) -> Result<Vec<C64>> {
        let neg: Vec<C64> = self.center.iter().map(|c| -c).collect();
        Self::translate(&neg, &mat_vec(&self.unitary_inv, y)?)
    }

    fn check_in_ball(z: &[C64]) -> Result<()> {
        if norm_sqr(z) >= 1.0 {
            return Err(Error::Domain("point outside the open unit ball".into()));
        }
        Ok(())
    }

    /// `(Ψ(z), J_Ψ(z))`.
    pub fn eval_with_jacobian(&self, z: &[C64]) -> Result<(Vec<C64>, C64)> {
        check_dim(self.dim(), z.len())?;
        Self::check_in_ball(z)?;
        let y = self.raw(z)?;
        let jac = if self.is_linear() {
            self.unitary_det
        } else {
            fd_jacobian(|x| self.raw(x), z)?
        };
        Ok((y, jac))
    }

    /// `(Ψ⁻¹(y), J_{Ψ⁻¹}(y))`.
    pub fn inverse_with_jacobian(&self, y: &[C64]) -> Result<(Vec<C64>, C64)> {
        check_dim(self.dim(), y.len())?;
        Self::check_in_ball(y)?;
        let z = self.raw_inverse(y)?;
        let jac = if self.is_linear() {
            self.unitary_det.conj()
        } else {
            fd_jacobian(|x| self.raw_inverse(x), y)?
        };
        Ok((z, jac))
    }
}

impl HolomorphicMap for BallAutomorphism {
    fn dim(&self) -> usize {
        self.center.len()
    }

    fn eval(&self, z: &[C64]) -> Result<Vec<C64>> {
        Ok(self.eval_with_jacobian(z)?.0)
    }

    fn jacobian_det(&self, z: &[C64]) -> Result<C64> {
        Ok(self.eval_with_jacobian(z)?.1)
    }
}

/// Determinant of the complex Jacobian of a holomorphic `f` by central
/// differences along the real coordinate directions.
pub fn fd_jacobian<F>(f: F, z: &[C64]) -> Result<C64>
where
    F: Fn(&[C64]) -> Result<Vec<C64>>,
{
    let d = z.len();
    let mut jac = DMatrix::<C64>::zeros(d, d);
    let mut zp = z.to_vec();
    for j in 0..d {
        zp[j] = z[j] + FD_STEP;
        let fp = f(&zp)?;
        zp[j] = z[j] - FD_STEP;
        let fm = f(&zp)?;
        zp[j] = z[j];
        for i in 0..d {
            jac[(i, j)] = (fp[i] - fm[i]) / (2.0 * FD_STEP);
        }
    }
    Ok(jac.determinant())
}

/// `Ψ_σ = Ψ⁻¹ ∘ σ⁻¹ ∘ Ψ`, with `σ⁻¹` the inverse matrix. With this
/// convention `Ψ_σ ∘ Ψ_τ = Ψ_{τσ}`.
#[derive(Debug, Clone)]
pub struct ConjugatedMap {
    psi: BallAutomorphism,
    sigma: GroupElement,
}

impl ConjugatedMap {
    pub fn new(psi: BallAutomorphism, sigma: GroupElement) -> Result<Self> {
        check_dim(psi.dim(), sigma.dim())?;
        Ok(Self { psi, sigma })
    }

    /// `(Ψ_σ(z), J_{Ψ_σ}(z))` by the chain rule over the three factors.
    pub fn eval_with_jacobian(&self, z: &[C64]) -> Result<(Vec<C64>, C64)> {
        let (y, j1) = self.psi.eval_with_jacobian(z)?;
        let moved = self.sigma.act_point(&y)?;
        let (x, j3) = self.psi.inverse_with_jacobian(&moved)?;
        Ok((x, j3 * self.sigma.det().conj() * j1))
    }
}

impl HolomorphicMap for ConjugatedMap {
    fn dim(&self) -> usize {
        self.psi.dim()
    }

    fn eval(&self, z: &[C64]) -> Result<Vec<C64>> {
        Ok(self.eval_with_jacobian(z)?.0)
    }

    fn jacobian_det(&self, z: &[C64]) -> Result<C64> {
        Ok(self.eval_with_jacobian(z)?.1)
    }
}

/// `F = θ ∘ Ψ`, the proper maps handled here (the post-biholomorphism is
/// always the identity).
#[derive(Debug, Clone)]
pub struct ProperMap {
    pub psi: Option<BallAutomorphism>,
    pub theta: Arc<dyn HolomorphicMap>,
}

impl HolomorphicMap for ProperMap {
    fn dim(&self) -> usize {
        self.theta.dim()
    }

    fn eval(&self, z: &[C64]) -> Result<Vec<C64>> {
        match &self.psi {
            Some(psi) => self.theta.eval(&psi.eval(z)?),
            None => self.theta.eval(z),
        }
    }

    fn jacobian_det(&self, z: &[C64]) -> Result<C64> {
        match &self.psi {
            Some(psi) => {
                let (y, j) = psi.eval_with_jacobian(z)?;
                Ok(self.theta.jacobian_det(&y)? * j)
            }
            None => self.theta.jacobian_det(z),
        }
    }
}

/// CLI-facing map presets: `sym:d`, `dihedral:k`, `power:p,q`,
/// `monomial:[[..],[..]]`.
#[derive(Debug, Clone, PartialEq)]
pub enum MapSpec {
    Sym(usize),
    Dihedral(u32),
    Power(u32, u32),
    Monomial(IntMatrix),
}

impl FromStr for MapSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, arg) = s.split_once(':').ok_or_else(|| {
            Error::InvalidInput(format!("map spec '{s}' must look like kind:args"))
        })?;
        let bad = || Error::InvalidInput(format!("cannot parse map spec '{s}'"));
        match kind {
            "sym" => Ok(MapSpec::Sym(arg.trim().parse().map_err(|_| bad())?)),
            "dihedral" => Ok(MapSpec::Dihedral(arg.trim().parse().map_err(|_| bad())?)),
            "power" => {
                let (p, q) = arg.split_once(',').ok_or_else(bad)?;
                Ok(MapSpec::Power(
                    p.trim().parse().map_err(|_| bad())?,
                    q.trim().parse().map_err(|_| bad())?,
                ))
            }
            "monomial" => Ok(MapSpec::Monomial(
                serde_json::from_str(arg).map_err(|_| bad())?,
            )),
            _ => Err(bad()),
        }
    }
}

impl MapSpec {
    pub fn build(&self) -> Result<Arc<dyn HolomorphicMap>> {
        Ok(match self {
            MapSpec::Sym(d) => Arc::new(PolyMap::new(symmetrization_map(*d)?)),
            MapSpec::Dihedral(k) => Arc::new(PolyMap::new(dihedral_map(*k)?)),
            MapSpec::Power(p, q) => Arc::new(PolyMap::new(power_map(*p, *q)?)),
            MapSpec::Monomial(a) => Arc::new(MonomialMap::new(a.clone())?),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DomainSpec {
    Polydisc(usize),
    Ball(usize),
}

impl DomainSpec {
    pub fn dim(&self) -> usize {
        match *self {
            DomainSpec::Polydisc(d) | DomainSpec::Ball(d) => d,
        }
    }

    /// Euclidean volume `κ`.
    pub fn measure_constant(&self) -> f64 {
        use std::f64::consts::PI;
        match *self {
            DomainSpec::Polydisc(d) => PI.powi(d as i32),
            DomainSpec::Ball(d) => PI.powi(d as i32) / (1..=d).map(|k| k as f64).product::<f64>(),
        }
    }

    pub fn contains(&self, z: &[C64]) -> bool {
        z.len() == self.dim()
            && match self {
                DomainSpec::Polydisc(_) => z.iter().all(|c| c.norm_sqr() < 1.0),
                DomainSpec::Ball(_) => norm_sqr(z) < 1.0,
            }
    }

    /// Fraction of proposals accepted by [`DomainSpec::sample`].
    pub fn acceptance_rate(&self) -> f64 {
        match *self {
            DomainSpec::Polydisc(_) => 1.0,
            DomainSpec::Ball(d) => 1.0 / (1..=d).map(|k| k as f64).product::<f64>(),
        }
    }

    /// Uniform point; the ball is sampled by rejection from the polydisc.
    /// Points with an exactly zero coordinate are redrawn.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Vec<C64> {
        loop {
            let z: Vec<C64> = (0..self.dim())
                .map(|_| {
                    let r = rng.gen::<f64>().sqrt();
                    let t = rng.gen::<f64>() * std::f64::consts::TAU;
                    C64::from_polar(r, t)
                })
                .collect();
            if z.iter().any(|c| c.norm_sqr() == 0.0) {
                continue;
            }
            if self.contains(&z) {
                return z;
            }
        }
    }
}

/// Weights on `Ω`, or on `θ(Ω)` through fiber representatives.
#[derive(Debug, Clone)]
pub enum WeightSpec {
    Unit,
    /// `∏(1 − |z_j|²)^{λ−2}`, times `(λ−1)^d` when `normalized`.
    PolydiscLambda {
        lambda: f64,
        normalized: bool,
    },
    Pullback {
        base: Box<WeightSpec>,
        map: Arc<dyn HolomorphicMap>,
    },
    /// `|ℓ_ρ(z)|² / |J_θ(z)|² · ω(z)` with `ω = base` a `G`-invariant weight.
    Relative {
        base: Box<WeightSpec>,
        ell: MultiPoly,
        theta: Arc<dyn HolomorphicMap>,
    },
}

impl WeightSpec {
    pub fn polydisc_lambda(lambda: f64) -> Result<Self> {
        if !(lambda > 1.0) {
            return Err(Error::InvalidInput(format!(
                "weight exponent λ = {lambda} must exceed 1"
            )));
        }
        Ok(WeightSpec::PolydiscLambda {
            lambda,
            normalized: false,
        })
    }

    pub fn polydisc_lambda_normalized(lambda: f64) -> Result<Self> {
        if !(lambda > 1.0) {
            return Err(Error::InvalidInput(format!(
                "weight exponent λ = {lambda} must exceed 1"
            )));
        }
        Ok(WeightSpec::PolydiscLambda {
            lambda,
            normalized: true,
        })
    }

    pub fn relative(
        group: &FiniteGroup,
        chi: &Character,
        theta: Arc<dyn HolomorphicMap>,
        base: WeightSpec,
    ) -> Result<Self> {
        let ell = crate::group::relative_invariant_for(group, chi)?;
        Ok(WeightSpec::Relative {
            base: Box::new(base),
            ell,
            theta,
        })
    }

    pub fn eval(&self, z: &[C64]) -> Result<f64> {
        match self {
            WeightSpec::Unit => Ok(1.0),
            WeightSpec::PolydiscLambda { lambda, normalized } => {
                let mut w = 1.0;
                for zj in z {
                    let t = 1.0 - zj.norm_sqr();
                    if t <= 0.0 {
                        return Err(Error::Domain(
                            "weight evaluated outside the polydisc".into(),
                        ));
                    }
                    w *= t.powf(lambda - 2.0);
                }
                if *normalized {
                    w *= (lambda - 1.0).powi(z.len() as i32);
                }
                Ok(w)
            }
            WeightSpec::Pullback { base, map } => base.eval(&map.eval(z)?),
            WeightSpec::Relative { base, ell, theta } => {
                let l = ell.eval(z)?;
                let j = theta.jacobian_det(z)?;
                if l.norm() < SINGULAR_EPS || j.norm() < SINGULAR_EPS {
                    return Err(Error::NearSingular(
                        "relative weight evaluated near a reflecting hyperplane".into(),
                    ));
                }
                Ok(l.norm_sqr() / j.norm_sqr() * base.eval(z)?)
            }
        }
    }
}
