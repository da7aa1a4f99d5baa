//! Weighted Bergman kernels of quotient domains `Ω/G` for finite
//! pseudoreflection groups `G`.
//!
//! Quotient points are always passed as fiber representatives `z ∈ Ω`
//! standing for `θ(z)`. Groups act on points by `σ·z = σ⁻¹z`.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod group;
pub mod intlin;
pub mod kernels;
pub mod maps;
pub mod mpoly;
pub mod quad;
pub mod suites;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

/// Builds a complex point from interleaved `[re, im, re, im, ...]` values.
pub fn point_from_interleaved(xs: &[f64]) -> Result<Vec<C64>> {
    if !xs.len().is_multiple_of(2) {
        return Err(Error::InvalidInput(format!(
            "interleaved point needs an even number of reals, got {}",
            xs.len()
        )));
    }
    Ok(xs.chunks(2).map(|c| C64::new(c[0], c[1])).collect())
}

pub fn point_to_interleaved(z: &[C64]) -> Vec<f64> {
    z.iter().flat_map(|c| [c.re, c.im]).collect()
}

/// Hermitian inner product `⟨z, w⟩ = Σ z_j w̄_j`.
pub fn inner(z: &[C64], w: &[C64]) -> C64 {
    z.iter().zip(w).map(|(a, b)| a * b.conj()).sum()
}

pub fn norm_sqr(z: &[C64]) -> f64 {
    z.iter().map(|c| c.norm_sqr()).sum()
}
