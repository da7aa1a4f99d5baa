//! Sparse multivariate polynomials with complex coefficients.
//!
//! Terms live in a `BTreeMap` keyed by exponent vector, so two polynomials are
//! equal exactly when their term tables are equal. Coefficients are `f64`
//! complex numbers; small integer coefficients stay exact under the ring
//! operations used here (sums and products of integers), which is what the
//! Vandermonde and dihedral Jacobian identities rely on.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};

pub type Exponent = Vec<u32>;

#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolyJson", into = "PolyJson")]
pub struct MultiPoly {
    dim: usize,
    terms: BTreeMap<Exponent, Complex64>,
}

impl MultiPoly {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: Complex64) -> Self {
        Self::monomial(dim, vec![0; dim], c).expect("constant exponent has correct length")
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, Complex64::new(1.0, 0.0))
    }

    pub fn monomial(dim: usize, exp: Exponent, coeff: Complex64) -> Result<Self> {
        Self::from_terms(dim, [(exp, coeff)])
    }

    /// The coordinate function `z_var` (0-based).
    pub fn var(dim: usize, var: usize) -> Result<Self> {
        if var >= dim {
            return Err(Error::InvalidInput(format!(
                "variable index {var} out of range for dimension {dim}"
            )));
        }
        let mut exp = vec![0; dim];
        exp[var] = 1;
        Self::monomial(dim, exp, Complex64::new(1.0, 0.0))
    }

    /// Linear form `sum_j coeffs[j] * z_j`.
    pub fn linear(coeffs: &[Complex64]) -> Self {
        let dim = coeffs.len();
        let terms = coeffs.iter().enumerate().map(|(j, &c)| {
            let mut exp = vec![0; dim];
            exp[j] = 1;
            (exp, c)
        });
        Self::from_terms(dim, terms).expect("exponents built with correct length")
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs, collecting
    /// repeated exponents and dropping zero coefficients.
    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponent, Complex64)>,
    {
        if dim == 0 {
            return Err(Error::InvalidInput(
                "polynomial dimension must be positive".into(),
            ));
        }
        let mut p = Self::zero(dim);
        for (exp, c) in terms {
            check_dim(dim, exp.len())?;
            p.add_term(exp, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, exp: Exponent, c: Complex64) {
        if c == Complex64::new(0.0, 0.0) {
            return;
        }
        match self.terms.entry(exp) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == Complex64::new(0.0, 0.0) {
                    o.remove();
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Complex64)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: &[u32]) -> Complex64 {
        self.terms.get(exp).copied().unwrap_or_default()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn eval(&self, z: &[Complex64]) -> Result<Complex64> {
        check_dim(self.dim, z.len())?;
        let mut acc = Complex64::new(0.0, 0.0);
        for (exp, c) in &self.terms {
            let mut m = *c;
            for (zj, &e) in z.iter().zip(exp) {
                if e > 0 {
                    m *= zj.powu(e);
                }
            }
            acc += m;
        }
        Ok(acc)
    }

    /// Formal partial derivative with respect to `z_var` (0-based).
    pub fn partial(&self, var: usize) -> Result<Self> {
        if var >= self.dim {
            return Err(Error::InvalidInput(format!(
                "variable index {var} out of range for dimension {}",
                self.dim
            )));
        }
        let mut out = Self::zero(self.dim);
        for (exp, c) in &self.terms {
            let e = exp[var];
            if e == 0 {
                continue;
            }
            let mut new_exp = exp.clone();
            new_exp[var] = e - 1;
            out.add_term(new_exp, c * e as f64);
        }
        Ok(out)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = Self::zero(self.dim);
        for (exp, c) in &self.terms {
            out.add_term(exp.clone(), c * s);
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one(self.dim);
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    fn assert_same_dim(&self, other: &Self) {
        assert_eq!(
            self.dim, other.dim,
            "polynomial arithmetic on mismatched dimensions"
        );
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[{}](", self.dim)?;
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        for (i, (exp, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({}{:+}i)", c.re, c.im)?;
            for (j, &e) in exp.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*z{}", j + 1)?,
                    _ => write!(f, "*z{}^{}", j + 1, e)?,
                }
            }
        }
        write!(f, ")")
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;

    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.assert_same_dim(rhs);
        let mut out = self.clone();
        for (exp, c) in &rhs.terms {
            out.add_term(exp.clone(), *c);
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;

    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self + &(-rhs)
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;

    fn neg(self) -> MultiPoly {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.assert_same_dim(rhs);
        let mut out = MultiPoly::zero(self.dim);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let exp = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(exp, ca * cb);
            }
        }
        out
    }
}

/// A polynomial self-map of `C^d`: one component per coordinate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyMapExpr {
    dim: usize,
    components: Vec<MultiPoly>,
}

impl PolyMapExpr {
    pub fn new(components: Vec<MultiPoly>) -> Result<Self> {
        let dim = components.len();
        if dim == 0 {
            return Err(Error::InvalidInput(
                "polynomial map needs at least one component".into(),
            ));
        }
        for c in &components {
            check_dim(dim, c.dim())?;
        }
        Ok(Self { dim, components })
    }

    pub fn identity(dim: usize) -> Self {
        let comps = (0..dim)
            .map(|j| MultiPoly::var(dim, j).expect("index in range"))
            .collect();
        Self::new(comps).expect("identity is well formed")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &[MultiPoly] {
        &self.components
    }

    pub fn eval(&self, z: &[Complex64]) -> Result<Vec<Complex64>> {
        self.components.iter().map(|c| c.eval(z)).collect()
    }

    /// Matrix of partial derivatives `(d m_i / d z_j)`.
    pub fn jacobian_matrix(&self) -> Vec<Vec<MultiPoly>> {
        self.components
            .iter()
            .map(|c| {
                (0..self.dim)
                    .map(|j| c.partial(j).expect("index in range"))
                    .collect()
            })
            .collect()
    }
}

/// Determinant of the complex Jacobian of `m`, expanded exactly as a polynomial.
pub fn jacobian_det_poly(m: &PolyMapExpr) -> MultiPoly {
    cofactor_det(&m.jacobian_matrix(), m.dim())
}

fn cofactor_det(mat: &[Vec<MultiPoly>], dim: usize) -> MultiPoly {
    let n = mat.len();
    match n {
        0 => MultiPoly::one(dim),
        1 => mat[0][0].clone(),
        _ => {
            let mut acc = MultiPoly::zero(dim);
            for col in 0..n {
                if mat[0][col].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<MultiPoly>> = mat[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(j, _)| *j != col)
                            .map(|(_, p)| p.clone())
                            .collect()
                    })
                    .collect();
                let term = &mat[0][col] * &cofactor_det(&minor, dim);
                acc = if col % 2 == 0 {
                    &acc + &term
                } else {
                    &acc - &term
                };
            }
            acc
        }
    }
}

/// Elementary symmetric polynomial `s_k` in `d` variables.
pub fn elementary_symmetric(d: usize, k: usize) -> Result<MultiPoly> {
    if k == 0 || k > d {
        return Err(Error::InvalidInput(format!(
            "elementary symmetric degree {k} out of range 1..={d}"
        )));
    }
    let mut terms = Vec::new();
    let mut subset: Vec<usize> = (0..k).collect();
    loop {
        let mut exp = vec![0u32; d];
        for &i in &subset {
            exp[i] = 1;
        }
        terms.push((exp, Complex64::new(1.0, 0.0)));
        // next k-subset in lexicographic order
        let mut i = k;
        while i > 0 && subset[i - 1] == d - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        subset[i - 1] += 1;
        for j in i..k {
            subset[j] = subset[j - 1] + 1;
        }
    }
    MultiPoly::from_terms(d, terms)
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exp: Vec<u32>,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    dim: usize,
    terms: Vec<TermJson>,
}

impl From<MultiPoly> for PolyJson {
    fn from(p: MultiPoly) -> Self {
        PolyJson {
            dim: p.dim,
            terms: p
                .terms
                .into_iter()
                .map(|(exp, c)| TermJson {
                    exp,
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
    }
}

impl TryFrom<PolyJson> for MultiPoly {
    type Error = Error;

    fn try_from(j: PolyJson) -> Result<Self> {
        MultiPoly::from_terms(
            j.dim,
            j.terms
                .into_iter()
                .map(|t| (t.exp, Complex64::new(t.re, t.im))),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn pt(xs: &[f64]) -> Vec<Complex64> {
        xs.iter().map(|&x| c(x)).collect()
    }

    #[test]
    fn eval_examples() {
        let p = MultiPoly::monomial(2, vec![2, 1], c(1.0)).unwrap();
        assert_eq!(p.eval(&pt(&[2.0, 3.0])).unwrap(), c(12.0));
        assert_eq!(
            MultiPoly::zero(3).eval(&pt(&[1.0, 5.0, 7.0])).unwrap(),
            c(0.0)
        );
        let e2 = elementary_symmetric(3, 2).unwrap();
        // 1*2 + 1*3 + 2*3
        assert_eq!(e2.eval(&pt(&[1.0, 2.0, 3.0])).unwrap(), c(11.0));
    }

    #[test]
    fn eval_dimension_mismatch() {
        let p = MultiPoly::one(2);
        assert!(matches!(
            p.eval(&pt(&[1.0])),
            Err(Error::DimensionMismatch {
                expected: 2,
                got: 1
            })
        ));
    }

    #[test]
    fn partial_examples() {
        let p = MultiPoly::monomial(2, vec![2, 1], c(1.0)).unwrap();
        let expected = MultiPoly::monomial(2, vec![1, 1], c(2.0)).unwrap();
        assert_eq!(p.partial(0).unwrap(), expected);

        assert!(MultiPoly::constant(2, c(5.0)).partial(0).unwrap().is_zero());

        let q = &MultiPoly::var(2, 0).unwrap() + &MultiPoly::var(2, 1).unwrap().pow(2);
        assert_eq!(
            q.partial(1).unwrap(),
            MultiPoly::monomial(2, vec![0, 1], c(2.0)).unwrap()
        );
        assert!(q.partial(2).is_err());
    }

    #[test]
    fn cancellation_drops_terms() {
        let x = MultiPoly::var(2, 0).unwrap();
        let zero = &x - &x;
        assert!(zero.is_zero());
        assert_eq!(zero, MultiPoly::zero(2));
    }

    #[test]
    fn elementary_symmetric_examples() {
        let s1 = elementary_symmetric(2, 1).unwrap();
        let s2 = elementary_symmetric(2, 2).unwrap();
        assert_eq!(s1.eval(&pt(&[1.0, 2.0])).unwrap(), c(3.0));
        assert_eq!(s2.eval(&pt(&[1.0, 2.0])).unwrap(), c(2.0));
        assert_eq!(elementary_symmetric(5, 3).unwrap().num_terms(), 10);
        assert!(elementary_symmetric(2, 0).is_err());
        assert!(elementary_symmetric(2, 3).is_err());
    }

    #[test]
    fn identity_jacobian_is_one() {
        for d in 1..=4 {
            assert_eq!(
                jacobian_det_poly(&PolyMapExpr::identity(d)),
                MultiPoly::one(d)
            );
        }
    }

    #[test]
    fn json_shape() {
        let p = MultiPoly::from_terms(
            2,
            [
                (vec![1, 0], Complex64::new(1.0, -2.0)),
                (vec![0, 3], c(4.0)),
            ],
        )
        .unwrap();
        let v: serde_json::Value = serde_json::to_value(&p).unwrap();
        assert_eq!(v["dim"], 2);
        assert_eq!(v["terms"].as_array().unwrap().len(), 2);
        assert_eq!(v["terms"][1]["exp"], serde_json::json!([1, 0]));
        assert_eq!(v["terms"][1]["im"], -2.0);
        let back: MultiPoly = serde_json::from_value(v).unwrap();
        assert_eq!(back, p);

        let bad = serde_json::json!({"dim": 2, "terms": [{"exp": [1], "re": 1.0, "im": 0.0}]});
        assert!(serde_json::from_value::<MultiPoly>(bad).is_err());
    }

    fn poly_strategy(dim: usize) -> impl proptest::strategy::Strategy<Value = MultiPoly> {
        use proptest::prelude::*;
        proptest::collection::vec(
            (
                proptest::collection::vec(0u32..4, dim),
                -10.0f64..10.0,
                -10.0f64..10.0,
            ),
            0..6,
        )
        .prop_map(move |ts| {
            MultiPoly::from_terms(
                dim,
                ts.into_iter().map(|(e, a, b)| (e, Complex64::new(a, b))),
            )
            .unwrap()
        })
    }

    fn point_strategy(dim: usize) -> impl proptest::strategy::Strategy<Value = Vec<Complex64>> {
        use proptest::prelude::*;
        proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim)
            .prop_map(|v| v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect())
    }

    proptest::proptest! {
        #[test]
        fn partial_matches_central_difference(p in poly_strategy(3), z in point_strategy(3), i in 0usize..3) {
            let h = 1e-5;
            let mut zp = z.clone();
            let mut zm = z.clone();
            zp[i] += h;
            zm[i] -= h;
            let fd = (p.eval(&zp).unwrap() - p.eval(&zm).unwrap()) / (2.0 * h);
            let exact = p.partial(i).unwrap().eval(&z).unwrap();
            proptest::prop_assert!((fd - exact).norm() < 1e-6, "fd {} exact {}", fd, exact);
        }

        #[test]
        fn eval_is_linear(
            p in poly_strategy(2),
            q in poly_strategy(2),
            z in point_strategy(2),
            a in (-3.0f64..3.0, -3.0f64..3.0),
            b in (-3.0f64..3.0, -3.0f64..3.0),
        ) {
            let (a, b) = (Complex64::new(a.0, a.1), Complex64::new(b.0, b.1));
            let combo = &p.scale(a) + &q.scale(b);
            let lhs = combo.eval(&z).unwrap();
            let rhs = a * p.eval(&z).unwrap() + b * q.eval(&z).unwrap();
            let scale = 1.0 + rhs.norm() + (a * p.eval(&z).unwrap()).norm() + (b * q.eval(&z).unwrap()).norm();
            proptest::prop_assert!((lhs - rhs).norm() <= 1e-12 * scale);
        }
    }
}
