//! Kernel evaluators. Every kernel takes fiber representatives `z, w ∈ Ω`
//! and returns the kernel of the quotient at `(θ(z), θ(w))`.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{check_dim, Error, Result};
use crate::group::{
    relative_invariant_for, root_of_unity, Character, FiniteGroup, GroupElement, GroupSpec,
};
use crate::intlin::{adjugate, monomial_deck_group, IntMatrix};
use crate::maps::{
    dihedral_map, BallAutomorphism, ConjugatedMap, HolomorphicMap, PolyMap, SINGULAR_EPS,
};
use crate::mpoly::MultiPoly;
use crate::{inner, C64};

/// Entries `1 − z w̄` smaller than this are treated as singular.
pub const BASE_EPS: f64 = 1e-12;

type KernelFn = dyn Fn(&[C64], &[C64]) -> Result<C64> + Send + Sync;

/// A two-point kernel `K(z, w)`, Hermitian in its arguments.
#[derive(Clone)]
pub struct KernelOracle {
    label: String,
    dim: usize,
    f: Arc<KernelFn>,
}

impl fmt::Debug for KernelOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KernelOracle({}, dim {})", self.label, self.dim)
    }
}

impl KernelOracle {
    pub fn new<F>(label: impl Into<String>, dim: usize, f: F) -> Self
    where
        F: Fn(&[C64], &[C64]) -> Result<C64> + Send + Sync + 'static,
    {
        Self {
            label: label.into(),
            dim,
            f: Arc::new(f),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, z: &[C64], w: &[C64]) -> Result<C64> {
        check_dim(self.dim, z.len())?;
        check_dim(self.dim, w.len())?;
        (self.f)(z, w)
    }
}

/// `t^{−λ}` on the principal branch; integer `λ` uses exact powers.
fn neg_power(t: C64, lambda: f64) -> Result<C64> {
    if t.norm() < BASE_EPS {
        return Err(Error::NearSingular(format!("|1 - z w̄| = {:.3e}", t.norm())));
    }
    if lambda.fract() == 0.0 && lambda.abs() < 64.0 {
        Ok(t.powi(-(lambda as i32)))
    } else {
        Ok((-lambda * t.ln()).exp())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BaseKind {
    Polydisc(usize),
    Ball(usize),
    WeightedPolydisc(usize, f64),
}

/// `∏(1 − z_j w̄_j)^{−2}`, `(1 − ⟨z, w⟩)^{−(d+1)}` or `∏(1 − z_j w̄_j)^{−λ}`.
pub fn base_kernel(kind: BaseKind) -> Result<KernelOracle> {
    match kind {
        BaseKind::Polydisc(d) => Ok(KernelOracle::new(
            format!("polydisc({d})"),
            d,
            move |z, w| polydisc_product(z, w, 2.0),
        )),
        BaseKind::Ball(d) => Ok(KernelOracle::new(format!("ball({d})"), d, move |z, w| {
            neg_power(C64::new(1.0, 0.0) - inner(z, w), (d + 1) as f64)
        })),
        BaseKind::WeightedPolydisc(d, lambda) => {
            if !(lambda > 1.0) {
                return Err(Error::InvalidInput(format!("λ = {lambda} must exceed 1")));
            }
            Ok(KernelOracle::new(
                format!("weighted-polydisc({d}, {lambda})"),
                d,
                move |z, w| polydisc_product(z, w, lambda),
            ))
        }
    }
}

fn polydisc_product(z: &[C64], w: &[C64], lambda: f64) -> Result<C64> {
    z.iter().zip(w).try_fold(C64::new(1.0, 0.0), |acc, (a, b)| {
        Ok(acc * neg_power(C64::new(1.0, 0.0) - a * b.conj(), lambda)?)
    })
}

fn guarded(value: C64, what: &str) -> Result<C64> {
    if value.norm() < SINGULAR_EPS {
        return Err(Error::NearSingular(format!(
            "|{what}| = {:.3e}",
            value.norm()
        )));
    }
    Ok(value)
}

/// `(z, w) ↦ (1/(ℓ(z) conj ℓ(w))) Σ_σ coeff_σ · base(σz, w)`.
fn group_sum<L>(
    label: String,
    group: &FiniteGroup,
    coeffs: Vec<C64>,
    ell: L,
    base: KernelOracle,
) -> KernelOracle
where
    L: Fn(&[C64]) -> Result<C64> + Send + Sync + 'static,
{
    let elements: Vec<GroupElement> = group.elements().to_vec();
    KernelOracle::new(label, group.dim(), move |z, w| {
        let lz = guarded(ell(z)?, "ℓ(z)")?;
        let lw = guarded(ell(w)?, "ℓ(w)")?;
        let mut acc = C64::new(0.0, 0.0);
        for (g, c) in elements.iter().zip(&coeffs) {
            acc += c * base.eval(&g.apply_matrix(z)?, w)?;
        }
        Ok(acc / (lz * lw.conj()))
    })
}

/// `B_{ω_ρ}(θz, θw) = (1/(ℓ_ρ(z) conj ℓ_ρ(w))) Σ_σ χ(σ⁻¹) base(σ⁻¹·z, w)`.
pub fn quotient_kernel_sum(
    group: &FiniteGroup,
    chi: &Character,
    ell: &MultiPoly,
    base: KernelOracle,
) -> Result<KernelOracle> {
    check_dim(group.order(), chi.values().len())?;
    check_dim(group.dim(), ell.dim())?;
    check_dim(group.dim(), base.dim())?;
    let coeffs = (0..group.order())
        .map(|i| chi.value(group.inverse_index(i)))
        .collect();
    let ell = ell.clone();
    let label = format!(
        "quotient-sum({}, {}, {})",
        group.name(),
        chi.name(),
        base.label()
    );
    Ok(group_sum(label, group, coeffs, move |z| ell.eval(z), base))
}

/// Sign specialization with `ℓ = J_θ`.
pub fn quotient_kernel_sign(
    group: &FiniteGroup,
    theta: Arc<dyn HolomorphicMap>,
    base: KernelOracle,
) -> Result<KernelOracle> {
    check_dim(group.dim(), theta.dim())?;
    check_dim(group.dim(), base.dim())?;
    let sgn = group.sign_character();
    let coeffs = (0..group.order())
        .map(|i| sgn.value(group.inverse_index(i)))
        .collect();
    let label = format!("quotient-sign({}, {})", group.name(), base.label());
    Ok(group_sum(
        label,
        group,
        coeffs,
        move |z| theta.jacobian_det(z),
        base,
    ))
}

/// `(1/(J_F(z) conj J_F(w))) Σ_σ J_{Ψ_σ}(z) · base(Ψ_σ(z), w)`.
pub fn conjugated_kernel(
    group: &FiniteGroup,
    psi: &BallAutomorphism,
    f: Arc<dyn HolomorphicMap>,
    base: KernelOracle,
) -> Result<KernelOracle> {
    check_dim(group.dim(), psi.dim())?;
    check_dim(group.dim(), f.dim())?;
    check_dim(group.dim(), base.dim())?;
    let maps = group
        .elements()
        .iter()
        .map(|g| ConjugatedMap::new(psi.clone(), g.clone()))
        .collect::<Result<Vec<_>>>()?;
    let label = format!("conjugated({}, {})", group.name(), base.label());
    Ok(KernelOracle::new(label, group.dim(), move |z, w| {
        let jz = guarded(f.jacobian_det(z)?, "J_F(z)")?;
        let jw = guarded(f.jacobian_det(w)?, "J_F(w)")?;
        let mut acc = C64::new(0.0, 0.0);
        for m in &maps {
            let (y, j) = m.eval_with_jacobian(z)?;
            acc += j * base.eval(&y, w)?;
        }
        Ok(acc / (jz * jw.conj()))
    }))
}

/// Kernel of the Rudin domain `F(B_d)`.
pub fn rudin_ball_kernel(
    group: &FiniteGroup,
    psi: &BallAutomorphism,
    f: Arc<dyn HolomorphicMap>,
) -> Result<KernelOracle> {
    conjugated_kernel(group, psi, f, base_kernel(BaseKind::Ball(group.dim()))?)
}

fn entry_matrix(z: &[C64], w: &[C64], lambda: f64) -> Result<DMatrix<C64>> {
    let d = z.len();
    let mut m = DMatrix::<C64>::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            m[(i, j)] = neg_power(C64::new(1.0, 0.0) - z[i] * w[j].conj(), lambda)?;
        }
    }
    Ok(m)
}

fn vandermonde(z: &[C64]) -> C64 {
    let mut v = C64::new(1.0, 0.0);
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            v *= z[i] - z[j];
        }
    }
    v
}

/// `det((1 − z_i w̄_j)^{−λ}) / (V(z) conj V(w))` with `V` the Vandermonde
/// product `∏_{i<j}(z_i − z_j)`.
pub fn symmetrized_kernel_det(d: usize, lambda: f64) -> Result<KernelOracle> {
    if d == 0 || !(lambda > 1.0) {
        return Err(Error::InvalidInput("need d >= 1 and λ > 1".into()));
    }
    Ok(KernelOracle::new(
        format!("sym-det({d}, {lambda})"),
        d,
        move |z, w| {
            let vz = guarded(vandermonde(z), "V(z)")?;
            let vw = guarded(vandermonde(w), "V(w)")?;
            Ok(entry_matrix(z, w, lambda)?.determinant() / (vz * vw.conj()))
        },
    ))
}

/// `perm((1 − z_i w̄_j)^{−λ})`.
pub fn symmetrized_kernel_perm(d: usize, lambda: f64) -> Result<KernelOracle> {
    if d == 0 || d > 12 || !(lambda > 1.0) {
        return Err(Error::InvalidInput("need 1 <= d <= 12 and λ > 1".into()));
    }
    Ok(KernelOracle::new(
        format!("sym-perm({d}, {lambda})"),
        d,
        move |z, w| permanent(&entry_matrix(z, w, lambda)?),
    ))
}

/// Ryser's formula, `O(2ⁿ n)` with Gray-code updates. Sizes up to 12.
pub fn permanent(m: &DMatrix<C64>) -> Result<C64> {
    let n = m.nrows();
    if n != m.ncols() || n == 0 || n > 12 {
        return Err(Error::InvalidInput(
            "permanent needs a square matrix of size 1..=12".into(),
        ));
    }
    let mut row_sums = vec![C64::new(0.0, 0.0); n];
    let mut total = C64::new(0.0, 0.0);
    let mut prev_gray = 0usize;
    for k in 1..(1usize << n) {
        let gray = k ^ (k >> 1);
        let changed = (gray ^ prev_gray).trailing_zeros() as usize;
        let sign = if gray & (1 << changed) != 0 {
            1.0
        } else {
            -1.0
        };
        for (i, s) in row_sums.iter_mut().enumerate() {
            *s += m[(i, changed)] * sign;
        }
        prev_gray = gray;
        let prod: C64 = row_sums.iter().product();
        if (n - gray.count_ones() as usize).is_multiple_of(2) {
            total += prod;
        } else {
            total -= prod;
        }
    }
    Ok(total)
}

/// Sum over all permutations; the oracle for [`permanent`] at small sizes.
pub fn permanent_naive(m: &DMatrix<C64>) -> Result<C64> {
    let n = m.nrows();
    if n != m.ncols() || n == 0 || n > 8 {
        return Err(Error::InvalidInput(
            "naive permanent needs a square matrix of size 1..=8".into(),
        ));
    }
    fn go(m: &DMatrix<C64>, row: usize, used: &mut [bool], acc: C64) -> C64 {
        if row == m.nrows() {
            return acc;
        }
        let mut s = C64::new(0.0, 0.0);
        for j in 0..m.ncols() {
            if !used[j] {
                used[j] = true;
                s += go(m, row + 1, used, acc * m[(row, j)]);
                used[j] = false;
            }
        }
        s
    }
    Ok(go(m, 0, &mut vec![false; n], C64::new(1.0, 0.0)))
}

fn bidisc_term(a: C64, b: C64) -> Result<C64> {
    Ok(neg_power(C64::new(1.0, 0.0) - a, 2.0)? * neg_power(C64::new(1.0, 0.0) - b, 2.0)?)
}

/// Sign-representation (Bergman) kernel and trivial-representation weighted
/// kernel of `D²/D_{2k}`, both as explicit sums over the group.
pub fn dihedral_kernels(k: u32) -> Result<(KernelOracle, KernelOracle)> {
    if k < 2 {
        return Err(Error::InvalidInput("dihedral kernels need k >= 2".into()));
    }
    let kf = k as f64;
    let sign = KernelOracle::new(format!("dihedral-sign({k})"), 2, move |z, w| {
        let jz = guarded(kf * (z[0].powu(k) - z[1].powu(k)), "J(z)")?;
        let jw = guarded(kf * (w[0].powu(k) - w[1].powu(k)), "J(w)")?;
        let mut acc = C64::new(0.0, 0.0);
        for i in 1..=k {
            let (wi, wk) = (root_of_unity(k, i as i64), root_of_unity(k, (k - i) as i64));
            let (w1, w2) = (w[0].conj(), w[1].conj());
            acc += bidisc_term(wi * z[0] * w1, wk * z[1] * w2)?
                - bidisc_term(wi * z[1] * w1, wk * z[0] * w2)?;
        }
        Ok(acc / (jz * jw.conj()))
    });
    let trivial = KernelOracle::new(format!("dihedral-trivial({k})"), 2, move |z, w| {
        let mut acc = C64::new(0.0, 0.0);
        for i in 1..=k {
            let (wi, wk) = (root_of_unity(k, i as i64), root_of_unity(k, (k - i) as i64));
            let (w1, w2) = (w[0].conj(), w[1].conj());
            acc += bidisc_term(wi * z[0] * w1, wk * z[1] * w2)?
                + bidisc_term(wi * z[1] * w1, wk * z[0] * w2)?;
        }
        Ok(acc)
    });
    Ok((sign, trivial))
}

/// The single-fraction form of the dihedral sign kernel obtained by
/// combining each pair of terms. Kept separate so it can be checked against
/// the group sum.
pub fn dihedral_sign_simplified(k: u32) -> Result<KernelOracle> {
    if k < 2 {
        return Err(Error::InvalidInput("dihedral kernels need k >= 2".into()));
    }
    let kf = k as f64;
    Ok(KernelOracle::new(
        format!("dihedral-sign-simplified({k})"),
        2,
        move |z, w| {
            let (z1, z2) = (z[0], z[1]);
            let (w1, w2) = (w[0].conj(), w[1].conj());
            let denom = guarded(
                kf * kf * (z1.powu(k) - z2.powu(k)) * (w1.powu(k) - w2.powu(k)),
                "J(z) J(w)",
            )?;
            let x1 = 1.0 + z1 * z1 * w1 * w2;
            let x2 = 1.0 + z2 * z2 * w1 * w2;
            let mut acc = C64::new(0.0, 0.0);
            for i in 1..=k {
                let s = root_of_unity(k, i as i64) * w1 + root_of_unity(k, (k - i) as i64) * w2;
                let t = root_of_unity(k, i as i64) * w1 - root_of_unity(k, (k - i) as i64) * w2;
                let num = (2.0 * (1.0 + z1 * z2 * w1 * w2) - (z1 + z2) * s) * t;
                let den = x1 * x2 - s * (z2 * x1 + z1 * x2) + z1 * z2 * s * s;
                let den2 = den * den;
                if den2.norm() < BASE_EPS {
                    return Err(Error::NearSingular(
                        "simplified dihedral denominator".into(),
                    ));
                }
                acc += num / den2;
            }
            Ok((z1 - z2) * acc / denom)
        },
    ))
}

/// Exponents `e_j = 1 − Σ_i A_ij` of the prefactor `z^e w̄^e / (det A)²`.
fn monomial_prefactor_exponents(a: &IntMatrix) -> Vec<i64> {
    (0..a.cols())
        .map(|j| 1 - (0..a.rows()).map(|i| a.get(i, j)).sum::<i64>())
        .collect()
}

fn signed_monomial(z: &[C64], exps: &[i64]) -> Result<C64> {
    let mut acc = C64::new(1.0, 0.0);
    for (zj, &e) in z.iter().zip(exps) {
        if e >= 0 {
            acc *= zj.powu(e as u32);
        } else {
            let p = guarded(zj.powu((-e) as u32), "z_j")?;
            acc /= p;
        }
    }
    Ok(acc)
}

/// Bergman kernel of the monomial polyhedron of `B`, with `A = adj B`:
/// `(1/(det A)²) · z^e w̄^e · Σ_σ det(σ) B_{Dᵈ}(σ⁻¹·z, w)`.
///
/// The prefactor `∏ z_i w̄_i / ∏ z^{aⁱ} w̄^{aⁱ}` is reduced to the single
/// monomial `z^e w̄^e`, so a zero coordinate is singular only where
/// `e_j < 0`.
pub fn monomial_polyhedron_kernel(b: &IntMatrix) -> Result<KernelOracle> {
    let a = adjugate(b)?;
    let det = a.determinant()?;
    if det == 0 {
        return Err(Error::InvalidInput("adj B is singular".into()));
    }
    if (0..a.rows()).any(|i| a.row(i).iter().any(|&x| x < 0)) {
        return Err(Error::InvalidInput(
            "adj B must have non-negative entries".into(),
        ));
    }
    let group = monomial_deck_group(&a)?;
    let d = a.rows();
    let exps = monomial_prefactor_exponents(&a);
    let coeffs: Vec<C64> = group.elements().iter().map(|g| g.det()).collect();
    let base = base_kernel(BaseKind::Polydisc(d))?;
    let scale = 1.0 / (det as f64 * det as f64);
    let elements: Vec<GroupElement> = group.elements().to_vec();
    Ok(KernelOracle::new(
        format!("monomial{:?}", b.to_rows()),
        d,
        move |z, w| {
            let pz = signed_monomial(z, &exps)?;
            let pw = signed_monomial(w, &exps)?;
            let mut acc = C64::new(0.0, 0.0);
            for (g, c) in elements.iter().zip(&coeffs) {
                acc += c * base.eval(&g.apply_matrix(z)?, w)?;
            }
            Ok(acc * pz * pw.conj() * scale)
        },
    ))
}

/// `B = [[γ, −1], [0, 1]]`.
pub fn fat_hartogs_matrix(gamma: u32) -> Result<IntMatrix> {
    if gamma == 0 {
        return Err(Error::InvalidInput("γ must be >= 1".into()));
    }
    IntMatrix::from_rows(&[[gamma as i64, -1], [0, 1]])
}

/// Explicit fat Hartogs kernel
/// `(1/(γ² (z₂w̄₂)^γ)) Σ_k 1/((1 − ω^k z₁w̄₁)² (1 − ω^{−k} z₂w̄₂)²)`.
///
/// The deck elements `diag(ω^{−k}, ω^k)` have determinant 1, so every term
/// carries coefficient 1.
pub fn fat_hartogs_kernel(gamma: u32) -> Result<KernelOracle> {
    fat_hartogs_matrix(gamma)?;
    let g = gamma as f64;
    Ok(KernelOracle::new(
        format!("fat-hartogs({gamma})"),
        2,
        move |z, w| {
            let p = guarded((z[1] * w[1].conj()).powu(gamma), "(z₂w̄₂)^γ")?;
            let mut acc = C64::new(0.0, 0.0);
            for k in 1..=gamma {
                let om = root_of_unity(gamma, k as i64);
                acc += bidisc_term(om * z[0] * w[0].conj(), om.conj() * z[1] * w[1].conj())?;
            }
            Ok(acc / (g * g * p))
        },
    ))
}

/// Kernel of `{|z₁|^{2/p} + |z₂|^{2/q} < 1}` through `(z₁, z₂) ↦ (z₁ᵖ, z₂^q)`.
pub fn ellipsoid_kernel(p: u32, q: u32) -> Result<KernelOracle> {
    if p == 0 || q == 0 {
        return Err(Error::InvalidInput(
            "ellipsoid exponents must be >= 1".into(),
        ));
    }
    let pq = (p * q) as f64;
    Ok(KernelOracle::new(
        format!("ellipsoid({p}, {q})"),
        2,
        move |z, w| {
            let a = z[0] * w[0].conj();
            let b = z[1] * w[1].conj();
            let pre = guarded(
                pq * pq * a.powu(p - 1) * b.powu(q - 1),
                "ellipsoid prefactor",
            )?;
            let mut acc = C64::new(0.0, 0.0);
            for a1 in 1..=p {
                for a2 in 1..=q {
                    let c = root_of_unity(p, a1 as i64) * root_of_unity(q, a2 as i64);
                    let t = C64::new(1.0, 0.0)
                        - (root_of_unity(p, a1 as i64) * a + root_of_unity(q, a2 as i64) * b);
                    acc += c * neg_power(t, 3.0)?;
                }
            }
            Ok(acc / pre)
        },
    ))
}

/// `(1/|G|) Σ_ρ ℓ_ρ(z) · B_ρ(z, w) · conj ℓ_ρ(w)` over all characters of an
/// abelian catalog group, each `B_ρ` from [`quotient_kernel_sum`].
pub fn abelian_kernel_reassembly(group: &FiniteGroup, base: KernelOracle) -> Result<KernelOracle> {
    if !matches!(group.spec(), GroupSpec::CyclicProduct(_)) {
        return Err(Error::Unsupported(
            "reassembly needs a cyclic product group".into(),
        ));
    }
    let parts = group
        .one_dim_characters()?
        .iter()
        .map(|chi| {
            let ell = relative_invariant_for(group, chi)?;
            let k = quotient_kernel_sum(group, chi, &ell, base.clone())?;
            Ok((ell, k))
        })
        .collect::<Result<Vec<_>>>()?;
    let n = group.order() as f64;
    Ok(KernelOracle::new(
        format!("reassembly({})", group.name()),
        group.dim(),
        move |z, w| {
            let mut acc = C64::new(0.0, 0.0);
            for (ell, k) in &parts {
                acc += ell.eval(z)? * k.eval(z, w)? * ell.eval(w)?.conj();
            }
            Ok(acc / n)
        },
    ))
}

/// The sign kernel of `D_{2k}` through the generic group sum, for
/// comparison with [`dihedral_kernels`].
pub fn dihedral_sign_group_sum(k: u32) -> Result<KernelOracle> {
    let g = crate::group::build_group(&GroupSpec::Dihedral(k))?;
    quotient_kernel_sign(
        &g,
        Arc::new(PolyMap::new(dihedral_map(k)?)),
        base_kernel(BaseKind::Polydisc(2))?,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::build_group;
    use crate::maps::{power_map, symmetrization_map};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn r(xs: &[f64]) -> Vec<C64> {
        xs.iter().map(|&x| c(x, 0.0)).collect()
    }

    fn assert_close(a: C64, b: C64, tol: f64) {
        assert!((a - b).norm() <= tol * b.norm().max(1.0), "{a} vs {b}");
    }

    #[test]
    fn base_examples() {
        let o = r(&[0.0, 0.0]);
        assert_eq!(
            base_kernel(BaseKind::Polydisc(2))
                .unwrap()
                .eval(&o, &o)
                .unwrap(),
            c(1.0, 0.0)
        );
        assert_eq!(
            base_kernel(BaseKind::Ball(2))
                .unwrap()
                .eval(&o, &o)
                .unwrap(),
            c(1.0, 0.0)
        );
        let v = base_kernel(BaseKind::Polydisc(1))
            .unwrap()
            .eval(&r(&[0.5]), &r(&[0.5]))
            .unwrap();
        assert_close(v, c(16.0 / 9.0, 0.0), 1e-15);
        let half = base_kernel(BaseKind::WeightedPolydisc(1, 2.5)).unwrap();
        let v = half.eval(&r(&[0.5]), &r(&[0.5])).unwrap();
        assert_close(v, c(0.75f64.powf(-2.5), 0.0), 1e-14);
        assert!(matches!(
            base_kernel(BaseKind::Polydisc(1))
                .unwrap()
                .eval(&r(&[1.0]), &r(&[1.0])),
            Err(Error::NearSingular(_))
        ));
        assert!(base_kernel(BaseKind::WeightedPolydisc(1, 1.0)).is_err());
    }

    #[test]
    fn quotient_sum_examples() {
        let s2 = build_group(&GroupSpec::Symmetric(2)).unwrap();
        let hs = s2.reflecting_hyperplanes().unwrap();
        let base = base_kernel(BaseKind::Polydisc(2)).unwrap();
        let z = r(&[0.5, 0.0]);
        let sgn = s2.sign_character();
        let ell = crate::group::relative_invariant(&sgn, &hs).unwrap();
        let k = quotient_kernel_sum(&s2, &sgn, &ell, base.clone()).unwrap();
        assert_close(k.eval(&z, &z).unwrap(), c(28.0 / 9.0, 0.0), 1e-12);
        let k = quotient_kernel_sum(
            &s2,
            &s2.trivial_character(),
            &MultiPoly::one(2),
            base.clone(),
        )
        .unwrap();
        assert_close(k.eval(&z, &z).unwrap(), c(25.0 / 9.0, 0.0), 1e-12);

        let triv = FiniteGroup::trivial(2);
        let k = quotient_kernel_sum(
            &triv,
            &triv.trivial_character(),
            &MultiPoly::one(2),
            base.clone(),
        )
        .unwrap();
        let (a, b) = (
            vec![c(0.1, 0.2), c(-0.3, 0.4)],
            vec![c(0.5, -0.1), c(0.2, 0.2)],
        );
        assert_eq!(k.eval(&a, &b).unwrap(), base.eval(&a, &b).unwrap());

        let on_plane = r(&[0.3, 0.3]);
        let k = quotient_kernel_sum(&s2, &sgn, &ell, base).unwrap();
        assert!(matches!(k.eval(&on_plane, &z), Err(Error::NearSingular(_))));
    }

    #[test]
    fn sign_kernel_examples() {
        let s2 = build_group(&GroupSpec::Symmetric(2)).unwrap();
        let base = base_kernel(BaseKind::Polydisc(2)).unwrap();
        let k = quotient_kernel_sign(
            &s2,
            Arc::new(PolyMap::new(symmetrization_map(2).unwrap())),
            base,
        )
        .unwrap();
        let z = r(&[0.5, 0.0]);
        assert_close(k.eval(&z, &z).unwrap(), c(28.0 / 9.0, 0.0), 1e-12);
        assert_close(
            dihedral_sign_group_sum(2).unwrap().eval(&z, &z).unwrap(),
            c(376.0 / 225.0, 0.0),
            1e-12,
        );
    }

    #[test]
    fn closed_form_examples() {
        let z = r(&[0.5, 0.0]);
        assert_close(
            symmetrized_kernel_det(2, 2.0)
                .unwrap()
                .eval(&z, &z)
                .unwrap(),
            c(28.0 / 9.0, 0.0),
            1e-12,
        );
        assert_close(
            symmetrized_kernel_perm(2, 2.0)
                .unwrap()
                .eval(&z, &z)
                .unwrap(),
            c(25.0 / 9.0, 0.0),
            1e-12,
        );
        let (sign, triv) = dihedral_kernels(2).unwrap();
        assert_close(sign.eval(&z, &z).unwrap(), c(376.0 / 225.0, 0.0), 1e-12);
        let o = r(&[0.0, 0.0]);
        assert_close(triv.eval(&o, &o).unwrap(), c(4.0, 0.0), 1e-15);
        let fh = r(&[0.0, 0.5]);
        let m = monomial_polyhedron_kernel(&fat_hartogs_matrix(1).unwrap()).unwrap();
        assert_close(m.eval(&fh, &fh).unwrap(), c(64.0 / 9.0, 0.0), 1e-12);
        assert_close(
            fat_hartogs_kernel(1).unwrap().eval(&fh, &fh).unwrap(),
            c(64.0 / 9.0, 0.0),
            1e-12,
        );
        let e = ellipsoid_kernel(2, 1).unwrap().eval(&z, &z).unwrap();
        assert_close(
            e,
            c(1.0 / 0.75f64.powi(3) - 1.0 / 1.25f64.powi(3), 0.0),
            1e-12,
        );
        assert!((e.re - 1.858370).abs() < 1e-6);
    }

    #[test]
    fn permanent_helpers() {
        let m =
            DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0)]);
        assert_eq!(permanent(&m).unwrap(), c(10.0, 0.0));
        assert_eq!(permanent_naive(&m).unwrap(), c(10.0, 0.0));
        let n = 5;
        let m = DMatrix::from_fn(n, n, |i, j| {
            c((i * 3 + j) as f64 * 0.1, (i as f64 - j as f64) * 0.2)
        });
        assert_close(permanent(&m).unwrap(), permanent_naive(&m).unwrap(), 1e-12);
        let ones = DMatrix::from_element(4, 4, c(1.0, 0.0));
        assert_close(permanent(&ones).unwrap(), c(24.0, 0.0), 1e-14);
    }

    #[test]
    fn rudin_examples() {
        let s2 = build_group(&GroupSpec::Symmetric(2)).unwrap();
        let f: Arc<dyn HolomorphicMap> = Arc::new(PolyMap::new(symmetrization_map(2).unwrap()));
        let k = rudin_ball_kernel(&s2, &BallAutomorphism::identity(2), f).unwrap();
        let z = r(&[0.5, 0.0]);
        let expected = 4.0 * (0.75f64.powi(-3) - 1.0);
        assert_close(k.eval(&z, &z).unwrap(), c(expected, 0.0), 1e-12);
        assert!((expected - 5.481481).abs() < 1e-6);

        let triv = FiniteGroup::trivial(2);
        let id: Arc<dyn HolomorphicMap> = Arc::new(PolyMap::new(power_map(1, 1).unwrap()));
        let k = rudin_ball_kernel(&triv, &BallAutomorphism::identity(2), id).unwrap();
        let ball = base_kernel(BaseKind::Ball(2)).unwrap();
        let (a, b) = (
            vec![c(0.1, 0.2), c(-0.3, 0.4)],
            vec![c(0.5, -0.1), c(0.2, 0.2)],
        );
        assert_close(k.eval(&a, &b).unwrap(), ball.eval(&a, &b).unwrap(), 1e-14);
    }

    #[test]
    fn automorphism_transformation_rule() {
        let psi = BallAutomorphism::with_center(r(&[0.3, 0.0])).unwrap();
        let triv = FiniteGroup::trivial(2);
        let ball = base_kernel(BaseKind::Ball(2)).unwrap();
        let k = conjugated_kernel(&triv, &psi, Arc::new(psi.clone()), ball.clone()).unwrap();
        let (a, b) = (
            vec![c(0.1, 0.2), c(-0.3, 0.4)],
            vec![c(0.5, -0.1), c(0.2, 0.2)],
        );
        let lhs = ball
            .eval(&psi.eval(&a).unwrap(), &psi.eval(&b).unwrap())
            .unwrap();
        assert_close(k.eval(&a, &b).unwrap(), lhs, 1e-7);
        let ja = psi.jacobian_det(&a).unwrap();
        let jb = psi.jacobian_det(&b).unwrap();
        assert_close(lhs * ja * jb.conj(), ball.eval(&a, &b).unwrap(), 1e-7);
    }
}
