//! Exact integer matrices: determinant, adjugate, Smith normal form, and the
//! deck group of a monomial map `z ↦ (z^{a¹}, …, z^{aᵈ})`.
//!
//! Entries are `i64`; intermediate arithmetic runs in `i128` and any result
//! that does not fit back into `i64` is reported as invalid input. Sizes are
//! capped at 8.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{root_of_unity, FiniteGroup, GroupElement};

pub const MAX_SIZE: usize = 8;

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<i64>>", into = "Vec<Vec<i64>>")]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<i64>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_rows())
    }
}

impl TryFrom<Vec<Vec<i64>>> for IntMatrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<i64>>) -> Result<Self> {
        IntMatrix::from_rows(&rows)
    }
}

impl From<IntMatrix> for Vec<Vec<i64>> {
    fn from(m: IntMatrix) -> Self {
        m.to_rows()
    }
}

fn narrow(x: i128) -> Result<i64> {
    i64::try_from(x).map_err(|_| Error::InvalidInput("integer overflow beyond 64 bits".into()))
}

impl IntMatrix {
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(|row| row.as_ref().len()).unwrap_or(0);
        if r == 0 || c == 0 {
            return Err(Error::InvalidInput("matrix must be nonempty".into()));
        }
        if rows.iter().any(|row| row.as_ref().len() != c) {
            return Err(Error::InvalidInput("ragged matrix rows".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            entries: rows
                .iter()
                .flat_map(|row| row.as_ref().iter().copied())
                .collect(),
        })
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn diagonal(d: &[i64]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &v) in d.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    fn require_square(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::InvalidInput(format!(
                "expected a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        if self.rows > MAX_SIZE {
            return Err(Error::InvalidInput(format!(
                "matrix size {} exceeds {MAX_SIZE}",
                self.rows
            )));
        }
        Ok(())
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let s: i128 = (0..self.cols)
                    .map(|k| self.get(i, k) as i128 * other.get(k, j) as i128)
                    .sum();
                out.set(i, j, narrow(s)?);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[i64]) -> Result<Vec<i64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        (0..self.rows)
            .map(|i| {
                narrow(
                    (0..self.cols)
                        .map(|k| self.get(i, k) as i128 * v[k] as i128)
                        .sum(),
                )
            })
            .collect()
    }

    /// Fraction-free (Bareiss) determinant.
    pub fn determinant(&self) -> Result<i64> {
        self.require_square()?;
        let n = self.rows;
        let mut a: Vec<Vec<i128>> = (0..n)
            .map(|i| self.row(i).iter().map(|&x| x as i128).collect())
            .collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n {
            if a[k][k] == 0 {
                match (k + 1..n).find(|&i| a[i][k] != 0) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return Ok(0),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                }
            }
            prev = a[k][k];
        }
        narrow(sign * a[n - 1][n - 1])
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> IntMatrix {
        let rows: Vec<Vec<i64>> = (0..self.rows)
            .filter(|&i| i != skip_row)
            .map(|i| {
                (0..self.cols)
                    .filter(|&j| j != skip_col)
                    .map(|j| self.get(i, j))
                    .collect()
            })
            .collect();
        IntMatrix::from_rows(&rows).expect("minor of a matrix with size >= 2")
    }

    /// Classical adjugate: the transposed cofactor matrix.
    pub fn adjugate(&self) -> Result<IntMatrix> {
        self.require_square()?;
        let n = self.rows;
        if n == 1 {
            return Ok(IntMatrix::identity(1));
        }
        let mut out = IntMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let c = self.minor(i, j).determinant()?;
                out.set(j, i, if (i + j) % 2 == 0 { c } else { -c });
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }
}

pub fn adjugate(b: &IntMatrix) -> Result<IntMatrix> {
    b.adjugate()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnfResult {
    pub p: IntMatrix,
    pub d: IntMatrix,
    pub q: IntMatrix,
    pub delta: Vec<i64>,
}

struct Work {
    d: Vec<Vec<i128>>,
    p: Vec<Vec<i128>>,
    q: Vec<Vec<i128>>,
}

impl Work {
    // Row operations on D are undone on the columns of P and column operations
    // on the rows of Q, so that A = P·D·Q holds throughout.
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.d.swap(i, j);
        for row in &mut self.p {
            row.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in &mut self.d {
            row.swap(i, j);
        }
        self.q.swap(i, j);
    }

    /// row_i += c·row_j
    fn add_row(&mut self, i: usize, j: usize, c: i128) {
        for k in 0..self.d[0].len() {
            self.d[i][k] += c * self.d[j][k];
        }
        for row in &mut self.p {
            row[j] -= c * row[i];
        }
    }

    /// col_i += c·col_j
    fn add_col(&mut self, i: usize, j: usize, c: i128) {
        for row in &mut self.d {
            row[i] += c * row[j];
        }
        let n = self.q[0].len();
        for k in 0..n {
            self.q[j][k] -= c * self.q[i][k];
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.d[i] {
            *x = -*x;
        }
        for row in &mut self.p {
            row[i] = -row[i];
        }
    }
}

fn to_int(m: &[Vec<i128>]) -> Result<IntMatrix> {
    let rows = m
        .iter()
        .map(|r| r.iter().map(|&x| narrow(x)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    IntMatrix::from_rows(&rows)
}

/// `A = P·D·Q` with `P, Q` unimodular and `D = diag(δ_i)`, `δ_i | δ_{i+1}`,
/// `δ_i > 0`.
pub fn smith_normal_form(a: &IntMatrix) -> Result<SnfResult> {
    a.require_square()?;
    if a.determinant()? == 0 {
        return Err(Error::InvalidInput(
            "Smith normal form requires a nonsingular matrix".into(),
        ));
    }
    let n = a.rows();
    let ident = |n: usize| -> Vec<Vec<i128>> {
        (0..n)
            .map(|i| (0..n).map(|j| (i == j) as i128).collect())
            .collect()
    };
    let mut w = Work {
        d: (0..n)
            .map(|i| a.row(i).iter().map(|&x| x as i128).collect())
            .collect(),
        p: ident(n),
        q: ident(n),
    };
    for t in 0..n {
        loop {
            // pivot on the least nonzero absolute value in the trailing block
            let (pi, pj) = (t..n)
                .flat_map(|i| (t..n).map(move |j| (i, j)))
                .filter(|&(i, j)| w.d[i][j] != 0)
                .min_by_key(|&(i, j)| w.d[i][j].abs())
                .expect("nonsingular matrix has a nonzero trailing block");
            w.swap_rows(t, pi);
            w.swap_cols(t, pj);
            let piv = w.d[t][t];
            let mut dirty = false;
            for i in t + 1..n {
                let qt = w.d[i][t] / piv;
                if qt != 0 {
                    w.add_row(i, t, -qt);
                }
                dirty |= w.d[i][t] != 0;
            }
            for j in t + 1..n {
                let qt = w.d[t][j] / piv;
                if qt != 0 {
                    w.add_col(j, t, -qt);
                }
                dirty |= w.d[t][j] != 0;
            }
            if dirty {
                continue;
            }
            let bad = (t + 1..n)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| w.d[i][j] % piv != 0);
            match bad {
                Some((i, _)) => w.add_row(t, i, 1),
                None => break,
            }
        }
        if w.d[t][t] < 0 {
            w.negate_row(t);
        }
    }
    let delta = (0..n)
        .map(|i| narrow(w.d[i][i]))
        .collect::<Result<Vec<_>>>()?;
    Ok(SnfResult {
        p: to_int(&w.p)?,
        d: to_int(&w.d)?,
        q: to_int(&w.q)?,
        delta,
    })
}

/// Diagonal unitary matrices `t` with `t^{aⁱ} = 1` for every row `aⁱ` of `A`.
///
/// Elements are `diag(exp(2πi (A⁻¹m)_j))` for coset representatives
/// `m = P·n`, `0 ≤ n_i < δ_i` of `Zᵈ/AZᵈ`. The indices `n_i` start at 0.
pub fn monomial_deck_group(a: &IntMatrix) -> Result<FiniteGroup> {
    let snf = smith_normal_form(a)?;
    let det = a.determinant()?;
    let order = det.unsigned_abs();
    if order > crate::group::DEFAULT_GROUP_CAP as u64 {
        return Err(Error::GroupTooLarge {
            cap: crate::group::DEFAULT_GROUP_CAP,
        });
    }
    let adj = a.adjugate()?;
    let n = a.rows();
    let modulus = order as u32;
    let mut elements = Vec::with_capacity(order as usize);
    let mut idx = vec![0i64; n];
    loop {
        let m = snf.p.mul_vec(&idx)?;
        // A⁻¹m = adj(A)·m / det
        let x = adj.mul_vec(&m)?;
        let diag: Vec<_> = x
            .iter()
            .map(|&xj| root_of_unity(modulus, xj * det.signum()))
            .collect();
        elements.push(GroupElement::diagonal(&diag)?);
        let mut k = 0;
        loop {
            if k == n {
                return FiniteGroup::from_elements(&format!("deck{:?}", a.to_rows()), elements);
            }
            idx[k] += 1;
            if idx[k] < snf.delta[k] {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}
