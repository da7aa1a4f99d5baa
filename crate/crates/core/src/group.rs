//! Finite matrix groups, their reflecting hyperplanes and one-dimensional
//! characters.
//!
//! An element `σ` acts on points by `σ·z = σ⁻¹z`, so [`GroupElement::act_point`]
//! multiplies by the cached inverse. Group sums in the kernel formulas run
//! over `σ⁻¹·z = σz`, which is [`GroupElement::apply_matrix`].

use std::collections::{HashMap, VecDeque};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use serde_json::{json, Value};

use crate::error::{check_dim, Error, Result};
use crate::mpoly::MultiPoly;
use crate::C64;

pub const DEFAULT_GROUP_CAP: usize = 10_000;

const MATRIX_TOL: f64 = 1e-10;
const RANK_TOL: f64 = 1e-9;
const CHAR_TOL: f64 = 1e-10;

/// Primitive `n`-th root of unity raised to `k`.
pub fn root_of_unity(n: u32, k: i64) -> C64 {
    let k = k.rem_euclid(n as i64);
    C64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64)
}

#[derive(Clone)]
pub struct GroupElement {
    matrix: DMatrix<C64>,
    inverse: DMatrix<C64>,
    det: C64,
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupElement{}", self.matrix)
    }
}

impl GroupElement {
    /// Wraps a unitary matrix. The inverse is the conjugate transpose.
    pub fn new(matrix: DMatrix<C64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() == 0 {
            return Err(Error::InvalidInput(format!(
                "group element must be a nonempty square matrix, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::InvalidInput("matrix has non-finite entries".into()));
        }
        let inverse = matrix.adjoint();
        let d = matrix.nrows();
        let defect = (&matrix * &inverse - DMatrix::<C64>::identity(d, d)).norm();
        if defect > MATRIX_TOL {
            return Err(Error::InvalidInput(format!(
                "matrix is not unitary (|M M* - I| = {defect:.3e})"
            )));
        }
        let det = matrix.determinant();
        Ok(Self {
            matrix,
            inverse,
            det,
        })
    }

    pub fn identity(d: usize) -> Self {
        Self::new(DMatrix::identity(d, d)).expect("identity is unitary")
    }

    pub fn diagonal(entries: &[C64]) -> Result<Self> {
        Self::new(DMatrix::from_diagonal(&DVector::from_column_slice(entries)))
    }

    /// Permutation matrix sending `e_j` to `e_{perm[j]}`.
    pub fn permutation(perm: &[usize]) -> Result<Self> {
        let d = perm.len();
        let mut m = DMatrix::<C64>::zeros(d, d);
        for (j, &i) in perm.iter().enumerate() {
            if i >= d {
                return Err(Error::InvalidInput(format!(
                    "permutation entry {i} out of range"
                )));
            }
            m[(i, j)] = C64::new(1.0, 0.0);
        }
        Self::new(m)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn inverse_matrix(&self) -> &DMatrix<C64> {
        &self.inverse
    }

    pub fn det(&self) -> C64 {
        self.det
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement {
            matrix: self.inverse.clone(),
            inverse: self.matrix.clone(),
            det: self.det.conj(),
        }
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        GroupElement {
            matrix: &self.matrix * &other.matrix,
            inverse: &other.inverse * &self.inverse,
            det: self.det * other.det,
        }
    }

    /// `σ·z = σ⁻¹z`.
    pub fn act_point(&self, z: &[C64]) -> Result<Vec<C64>> {
        mat_vec(&self.inverse, z)
    }

    /// `σz`, which is `σ⁻¹·z` in the action convention.
    pub fn apply_matrix(&self, z: &[C64]) -> Result<Vec<C64>> {
        mat_vec(&self.matrix, z)
    }

    /// `z ↦ f(σ⁻¹·z)`.
    pub fn act_function<'a, F>(&'a self, f: F) -> impl Fn(&[C64]) -> Result<C64> + 'a
    where
        F: Fn(&[C64]) -> Result<C64> + 'a,
    {
        move |z| f(&self.apply_matrix(z)?)
    }

    pub fn distance(&self, other: &GroupElement) -> f64 {
        (&self.matrix - &other.matrix).norm()
    }

    /// True iff `id − σ` has rank exactly one.
    pub fn is_pseudoreflection(&self) -> bool {
        numeric_rank(&self.defect_matrix()) == 1
    }

    fn defect_matrix(&self) -> DMatrix<C64> {
        let d = self.dim();
        DMatrix::<C64>::identity(d, d) - &self.matrix
    }

    /// Row-major `[[re, im], ...]` rows.
    pub fn to_json(&self) -> Value {
        matrix_to_json(&self.matrix)
    }
}

pub fn matrix_to_json(m: &DMatrix<C64>) -> Value {
    let rows: Vec<Value> = (0..m.nrows())
        .map(|i| {
            Value::Array(
                (0..m.ncols())
                    .map(|j| json!([m[(i, j)].re, m[(i, j)].im]))
                    .collect(),
            )
        })
        .collect();
    Value::Array(rows)
}

pub(crate) fn mat_vec(m: &DMatrix<C64>, z: &[C64]) -> Result<Vec<C64>> {
    check_dim(m.ncols(), z.len())?;
    let mut out = vec![C64::new(0.0, 0.0); m.nrows()];
    for (i, o) in out.iter_mut().enumerate() {
        for (j, zj) in z.iter().enumerate() {
            *o += m[(i, j)] * zj;
        }
    }
    Ok(out)
}

fn numeric_rank(m: &DMatrix<C64>) -> usize {
    let svd = m.clone().svd(false, false);
    svd.singular_values
        .iter()
        .filter(|&&s| s > RANK_TOL)
        .count()
}

/// Catalog description of a group.
#[derive(Debug, Clone, PartialEq)]
pub enum GroupSpec {
    Symmetric(usize),
    Dihedral(u32),
    CyclicProduct(Vec<u32>),
    Explicit(Vec<DMatrix<C64>>),
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Symmetric(d) => write!(f, "sym:{d}"),
            GroupSpec::Dihedral(k) => write!(f, "dihedral:{k}"),
            GroupSpec::CyclicProduct(ns) => {
                let parts: Vec<String> = ns.iter().map(|n| n.to_string()).collect();
                write!(f, "cyclic:{}", parts.join(","))
            }
            GroupSpec::Explicit(ms) => write!(f, "explicit[{}]", ms.len()),
        }
    }
}

/// Parses `sym:d`, `dihedral:k`, `cyclic:n1,n2,...` and `trivial:d`.
impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, arg) = s.split_once(':').ok_or_else(|| {
            Error::InvalidInput(format!("group spec '{s}' must look like kind:args"))
        })?;
        let bad = || Error::InvalidInput(format!("cannot parse group spec '{s}'"));
        match kind {
            "sym" | "symmetric" => Ok(GroupSpec::Symmetric(arg.trim().parse().map_err(|_| bad())?)),
            "dihedral" => Ok(GroupSpec::Dihedral(arg.trim().parse().map_err(|_| bad())?)),
            "cyclic" => {
                let ns = arg
                    .split(',')
                    .map(|p| p.trim().parse::<u32>().map_err(|_| bad()))
                    .collect::<Result<Vec<_>>>()?;
                Ok(GroupSpec::CyclicProduct(ns))
            }
            "trivial" => {
                let d: usize = arg.trim().parse().map_err(|_| bad())?;
                Ok(GroupSpec::CyclicProduct(vec![1; d]))
            }
            _ => Err(bad()),
        }
    }
}

/// A finite group of unitary matrices, stored as its full element list.
///
/// Elements are discovered breadth-first from the generators, so every
/// element other than the identity (index 0) records a parent and the
/// generator that reaches it. Characters are propagated along this tree.
#[derive(Clone)]
pub struct FiniteGroup {
    dim: usize,
    name: String,
    spec: GroupSpec,
    elements: Vec<GroupElement>,
    generators: Vec<GroupElement>,
    tree: Vec<Option<(usize, usize)>>,
    right_gen: Vec<Vec<usize>>,
    inverse_index: Vec<usize>,
    lookup: HashMap<Vec<i64>, usize>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.name, self.order())
    }
}

fn element_key(m: &DMatrix<C64>) -> Vec<i64> {
    m.iter()
        .flat_map(|c| [(c.re * 1e6).round() as i64, (c.im * 1e6).round() as i64])
        .collect()
}

pub fn build_group(spec: &GroupSpec) -> Result<FiniteGroup> {
    build_group_with_cap(spec, DEFAULT_GROUP_CAP)
}

pub fn build_group_with_cap(spec: &GroupSpec, cap: usize) -> Result<FiniteGroup> {
    let (dim, gens) = match spec {
        GroupSpec::Symmetric(d) => {
            if *d == 0 {
                return Err(Error::InvalidInput("symmetric group needs d >= 1".into()));
            }
            let gens = (0..d - 1)
                .map(|i| {
                    let mut perm: Vec<usize> = (0..*d).collect();
                    perm.swap(i, i + 1);
                    GroupElement::permutation(&perm)
                })
                .collect::<Result<Vec<_>>>()?;
            (*d, gens)
        }
        GroupSpec::Dihedral(k) => {
            if *k < 2 {
                return Err(Error::InvalidInput("dihedral group needs k >= 2".into()));
            }
            let w = root_of_unity(*k, 1);
            let delta = GroupElement::diagonal(&[w, w.conj()])?;
            let swap = GroupElement::permutation(&[1, 0])?;
            (2, vec![delta, swap])
        }
        GroupSpec::CyclicProduct(ns) => {
            if ns.is_empty() || ns.contains(&0) {
                return Err(Error::InvalidInput(
                    "cyclic product needs at least one factor, all orders >= 1".into(),
                ));
            }
            let d = ns.len();
            let gens = ns
                .iter()
                .enumerate()
                .map(|(j, &n)| {
                    let mut diag = vec![C64::new(1.0, 0.0); d];
                    diag[j] = root_of_unity(n, 1);
                    GroupElement::diagonal(&diag)
                })
                .collect::<Result<Vec<_>>>()?;
            (d, gens)
        }
        GroupSpec::Explicit(ms) => {
            if ms.is_empty() {
                return Err(Error::InvalidInput(
                    "explicit group needs at least one matrix".into(),
                ));
            }
            let gens = ms
                .iter()
                .map(|m| GroupElement::new(m.clone()))
                .collect::<Result<Vec<_>>>()?;
            let d = gens[0].dim();
            for g in &gens {
                check_dim(d, g.dim())?;
            }
            (d, gens)
        }
    };
    FiniteGroup::close(dim, spec.to_string(), spec.clone(), gens, cap)
}

impl FiniteGroup {
    fn close(
        dim: usize,
        name: String,
        spec: GroupSpec,
        generators: Vec<GroupElement>,
        cap: usize,
    ) -> Result<Self> {
        let mut elements = vec![GroupElement::identity(dim)];
        let mut tree = vec![None];
        let mut lookup = HashMap::new();
        lookup.insert(element_key(elements[0].matrix()), 0);
        let mut right_gen: Vec<Vec<usize>> = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            let mut row = Vec::with_capacity(generators.len());
            for (gi, g) in generators.iter().enumerate() {
                let prod = elements[i].compose(g);
                let key = element_key(prod.matrix());
                let idx = match lookup.get(&key) {
                    Some(&idx) => idx,
                    None => {
                        if elements.len() >= cap {
                            return Err(Error::GroupTooLarge { cap });
                        }
                        let idx = elements.len();
                        elements.push(prod);
                        tree.push(Some((i, gi)));
                        lookup.insert(key, idx);
                        queue.push_back(idx);
                        idx
                    }
                };
                row.push(idx);
            }
            if right_gen.len() <= i {
                right_gen.resize(i + 1, Vec::new());
            }
            right_gen[i] = row;
        }
        let mut group = FiniteGroup {
            dim,
            name,
            spec,
            elements,
            generators,
            tree,
            right_gen,
            inverse_index: Vec::new(),
            lookup,
        };
        group.inverse_index = (0..group.order())
            .map(|i| {
                group
                    .index_of(group.elements[i].inverse_matrix())
                    .ok_or_else(|| {
                        Error::InvalidInput("generated set is not closed under inverses".into())
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(group)
    }

    /// Group closed from an explicit list of elements (used for deck groups).
    pub fn from_elements(name: &str, elements: Vec<GroupElement>) -> Result<Self> {
        let dim = elements
            .first()
            .ok_or_else(|| Error::InvalidInput("empty element list".into()))?
            .dim();
        let matrices = elements.iter().map(|e| e.matrix().clone()).collect();
        let mut g = Self::close(
            dim,
            name.to_string(),
            GroupSpec::Explicit(matrices),
            elements,
            DEFAULT_GROUP_CAP,
        )?;
        g.name = name.to_string();
        Ok(g)
    }

    pub fn trivial(dim: usize) -> Self {
        build_group(&GroupSpec::CyclicProduct(vec![1; dim])).expect("trivial group")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &GroupElement {
        &self.elements[i]
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn inverse_index(&self, i: usize) -> usize {
        self.inverse_index[i]
    }

    pub fn index_of(&self, m: &DMatrix<C64>) -> Option<usize> {
        if m.nrows() != self.dim || m.ncols() != self.dim {
            return None;
        }
        let idx = *self.lookup.get(&element_key(m))?;
        ((&self.elements[idx].matrix - m).norm() < 1e-6).then_some(idx)
    }

    /// Index of the product `elements[i] · elements[j]`.
    pub fn mul_index(&self, i: usize, j: usize) -> usize {
        let prod = &self.elements[i].matrix * &self.elements[j].matrix;
        self.index_of(&prod)
            .expect("group is closed under products")
    }

    pub fn is_abelian(&self) -> bool {
        self.generators.iter().all(|a| {
            self.generators
                .iter()
                .all(|b| (a.matrix() * b.matrix() - b.matrix() * a.matrix()).norm() < MATRIX_TOL)
        })
    }

    /// Orbit `{σ·z}` in element order.
    pub fn orbit(&self, z: &[C64]) -> Result<Vec<Vec<C64>>> {
        self.elements.iter().map(|g| g.act_point(z)).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "dim": self.dim,
            "order": self.order(),
            "elements": self.elements.iter().map(|e| e.to_json()).collect::<Vec<_>>(),
        })
    }

    pub fn trivial_character(&self) -> Character {
        Character {
            name: "trivial".into(),
            values: vec![C64::new(1.0, 0.0); self.order()],
        }
    }

    /// `sgn(σ) = 1/det σ`.
    pub fn sign_character(&self) -> Character {
        Character {
            name: "sign".into(),
            values: self.elements.iter().map(|e| e.det().inv()).collect(),
        }
    }

    /// Extends prescribed generator values to a character, checking that
    /// the result is multiplicative on every Cayley-graph edge.
    pub fn character_from_generators(&self, name: &str, gen_values: &[C64]) -> Result<Character> {
        check_dim(self.generators.len(), gen_values.len())?;
        if let Some(v) = gen_values
            .iter()
            .find(|v| (v.norm() - 1.0).abs() > CHAR_TOL)
        {
            return Err(Error::NotACharacter(format!(
                "generator value {v} is not unimodular"
            )));
        }
        let mut values = vec![C64::new(0.0, 0.0); self.order()];
        values[0] = C64::new(1.0, 0.0);
        for i in 1..self.order() {
            let (parent, gen) = self.tree[i].expect("non-identity elements have parents");
            values[i] = values[parent] * gen_values[gen];
        }
        for (i, row) in self.right_gen.iter().enumerate() {
            for (gen, &j) in row.iter().enumerate() {
                if (values[j] - values[i] * gen_values[gen]).norm() > CHAR_TOL {
                    return Err(Error::NotACharacter(format!(
                        "generator values for '{name}' violate a group relation"
                    )));
                }
            }
        }
        Ok(Character {
            name: name.into(),
            values,
        })
    }

    /// All one-dimensional characters of a catalog group.
    pub fn one_dim_characters(&self) -> Result<Vec<Character>> {
        match &self.spec {
            GroupSpec::Symmetric(d) => {
                if *d == 1 {
                    Ok(vec![self.trivial_character()])
                } else {
                    Ok(vec![self.trivial_character(), self.sign_character()])
                }
            }
            GroupSpec::Dihedral(k) => {
                let one = C64::new(1.0, 0.0);
                let mut out = vec![
                    self.character_from_generators("trivial", &[one, one])?,
                    self.character_from_generators("sign", &[one, -one])?,
                ];
                if k % 2 == 0 {
                    out.push(self.character_from_generators("rho1", &[-one, one])?);
                    out.push(self.character_from_generators("rho2", &[-one, -one])?);
                }
                Ok(out)
            }
            GroupSpec::CyclicProduct(ns) => {
                let total: usize = ns.iter().map(|&n| n as usize).product();
                (0..total)
                    .map(|mut idx| {
                        let mut exps = vec![0u32; ns.len()];
                        for j in (0..ns.len()).rev() {
                            exps[j] = (idx % ns[j] as usize) as u32;
                            idx /= ns[j] as usize;
                        }
                        self.cyclic_character(&exps)
                    })
                    .collect()
            }
            GroupSpec::Explicit(_) => Err(Error::Unsupported(
                "character tables are only available for catalog groups".into(),
            )),
        }
    }

    /// Character of a cyclic product with `χ(g_j) = ω_{n_j}^{e_j}`.
    pub fn cyclic_character(&self, exps: &[u32]) -> Result<Character> {
        let GroupSpec::CyclicProduct(ns) = &self.spec else {
            return Err(Error::Unsupported(
                "exponent characters need a cyclic product".into(),
            ));
        };
        check_dim(ns.len(), exps.len())?;
        let vals: Vec<C64> = ns
            .iter()
            .zip(exps)
            .map(|(&n, &e)| root_of_unity(n, e as i64))
            .collect();
        let parts: Vec<String> = exps.iter().map(|e| e.to_string()).collect();
        self.character_from_generators(&format!("exp({})", parts.join(",")), &vals)
    }

    /// Checks `χ(gh) = χ(g)χ(h)` on all pairs (quadratic in |G|).
    pub fn check_character(&self, chi: &Character) -> Result<()> {
        check_dim(self.order(), chi.values.len())?;
        if (chi.values[0] - 1.0).norm() > CHAR_TOL {
            return Err(Error::NotACharacter("χ(id) != 1".into()));
        }
        for i in 0..self.order() {
            for j in 0..self.order() {
                let k = self.mul_index(i, j);
                if (chi.values[k] - chi.values[i] * chi.values[j]).norm() > CHAR_TOL {
                    return Err(Error::NotACharacter(format!(
                        "'{}' is not multiplicative at ({i}, {j})",
                        chi.name
                    )));
                }
            }
        }
        Ok(())
    }

    /// `(P_ρ f)(z) = (1/|G|) Σ χ(σ⁻¹) f(σ⁻¹·z)`.
    pub fn project<F>(&self, chi: &Character, f: F, z: &[C64]) -> Result<C64>
    where
        F: Fn(&[C64]) -> Result<C64>,
    {
        check_dim(self.order(), chi.values.len())?;
        let mut acc = C64::new(0.0, 0.0);
        for (i, g) in self.elements.iter().enumerate() {
            acc += chi.values[self.inverse_index[i]] * f(&g.apply_matrix(z)?)?;
        }
        Ok(acc / self.order() as f64)
    }

    /// Groups the pseudoreflections by fixed hyperplane.
    pub fn reflecting_hyperplanes(&self) -> Result<Vec<ReflectionHyperplane>> {
        let mut found: Vec<(Vec<C64>, Vec<usize>)> = Vec::new();
        for (i, g) in self.elements.iter().enumerate() {
            if !g.is_pseudoreflection() {
                continue;
            }
            let form = normalized_form(&g.defect_matrix());
            match found
                .iter_mut()
                .find(|(f, _)| f.iter().zip(&form).all(|(a, b)| (a - b).norm() < 1e-8))
            {
                Some((_, members)) => members.push(i),
                None => found.push((form, vec![i])),
            }
        }
        if found.is_empty() {
            return Err(Error::InvalidInput(format!(
                "group {} contains no pseudoreflections",
                self.name
            )));
        }
        found
            .into_iter()
            .map(|(form, members)| {
                let order = members.len() as u32 + 1;
                let target = root_of_unity(order, 1);
                let generator_index = *members
                    .iter()
                    .min_by(|&&a, &&b| {
                        let da = (self.elements[a].det() - target).norm();
                        let db = (self.elements[b].det() - target).norm();
                        da.total_cmp(&db)
                    })
                    .expect("nonempty");
                if (self.elements[generator_index].det() - target).norm() > 1e-8 {
                    return Err(Error::InvalidInput(
                        "hyperplane stabilizer is not cyclic with the expected determinant".into(),
                    ));
                }
                Ok(ReflectionHyperplane {
                    linear_form: MultiPoly::linear(&form),
                    coefficients: form,
                    generator_index,
                    generator: self.elements[generator_index].clone(),
                    order,
                })
            })
            .collect()
    }
}

/// Row of largest norm of a rank-one matrix, scaled so that its first
/// largest-magnitude coefficient is exactly 1.
fn normalized_form(m: &DMatrix<C64>) -> Vec<C64> {
    let best_row = (0..m.nrows())
        .max_by(|&a, &b| m.row(a).norm().total_cmp(&m.row(b).norm()))
        .expect("nonempty matrix");
    let row: Vec<C64> = m.row(best_row).iter().copied().collect();
    let max = row.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let pivot = row
        .iter()
        .find(|c| c.norm() >= max - 1e-9)
        .copied()
        .expect("nonzero row");
    row.iter()
        .map(|c| {
            let v = c / pivot;
            if (v - 1.0).norm() < 1e-12 {
                C64::new(1.0, 0.0)
            } else {
                v
            }
        })
        .collect()
}

/// One-dimensional character as a value table indexed by element position.
#[derive(Debug, Clone, PartialEq)]
pub struct Character {
    name: String,
    values: Vec<C64>,
}

impl Character {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn value(&self, i: usize) -> C64 {
        self.values[i]
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "values": self.values.iter().map(|v| json!([v.re, v.im])).collect::<Vec<_>>(),
        })
    }
}

#[derive(Debug, Clone)]
pub struct ReflectionHyperplane {
    /// `ℓ_i` as a degree-one polynomial.
    pub linear_form: MultiPoly,
    pub coefficients: Vec<C64>,
    /// `a_i`, with `det a_i = exp(2πi/m_i)`.
    pub generator: GroupElement,
    pub generator_index: usize,
    /// `m_i`.
    pub order: u32,
}

impl ReflectionHyperplane {
    pub fn to_json(&self) -> Value {
        json!({
            "form": self.coefficients.iter().map(|c| json!([c.re, c.im])).collect::<Vec<_>>(),
            "order": self.order,
            "generator": self.generator.to_json(),
        })
    }
}

/// Least `c_i ≥ 0` with `χ(a_i) = det(a_i)^{c_i}` for each hyperplane.
pub fn character_exponents(
    chi: &Character,
    hyperplanes: &[ReflectionHyperplane],
) -> Result<Vec<u32>> {
    hyperplanes
        .iter()
        .map(|h| {
            let target = chi.value(h.generator_index);
            let det = h.generator.det();
            let mut p = C64::new(1.0, 0.0);
            for c in 0..h.order {
                if (p - target).norm() < 1e-8 {
                    return Ok(c);
                }
                p *= det;
            }
            Err(Error::NotACharacter(format!(
                "no exponent matches χ(a_i) = {target} for '{}'",
                chi.name()
            )))
        })
        .collect()
}

/// `ℓ_ρ = ∏ ℓ_i^{c_i}`.
pub fn relative_invariant(
    chi: &Character,
    hyperplanes: &[ReflectionHyperplane],
) -> Result<MultiPoly> {
    let exps = character_exponents(chi, hyperplanes)?;
    let dim = hyperplanes
        .first()
        .map(|h| h.linear_form.dim())
        .ok_or_else(|| Error::InvalidInput("no hyperplanes".into()))?;
    let mut out = MultiPoly::one(dim);
    for (h, &c) in hyperplanes.iter().zip(&exps) {
        out = &out * &h.linear_form.pow(c);
    }
    Ok(out)
}

/// `ℓ_ρ` for groups that may lack pseudoreflections (then only the trivial
/// character is allowed and `ℓ_ρ = 1`).
pub fn relative_invariant_for(group: &FiniteGroup, chi: &Character) -> Result<MultiPoly> {
    match group.reflecting_hyperplanes() {
        Ok(hs) => relative_invariant(chi, &hs),
        Err(_) if chi.values().iter().all(|v| (v - 1.0).norm() < CHAR_TOL) => {
            Ok(MultiPoly::one(group.dim()))
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn sym(d: usize) -> FiniteGroup {
        build_group(&GroupSpec::Symmetric(d)).unwrap()
    }

    #[test]
    fn catalog_orders() {
        assert_eq!(sym(2).order(), 2);
        assert_eq!(sym(3).order(), 6);
        assert_eq!(sym(4).order(), 24);
        assert_eq!(build_group(&GroupSpec::Dihedral(3)).unwrap().order(), 6);
        assert_eq!(build_group(&GroupSpec::Dihedral(4)).unwrap().order(), 8);
        let z23 = build_group(&GroupSpec::CyclicProduct(vec![2, 3])).unwrap();
        assert_eq!(z23.order(), 6);
        assert!(z23
            .elements()
            .iter()
            .all(|e| e.matrix()[(0, 1)].norm() == 0.0 && e.matrix()[(1, 0)].norm() == 0.0));
    }

    #[test]
    fn cap_and_unitarity_errors() {
        assert_eq!(
            build_group_with_cap(&GroupSpec::Symmetric(4), 10).unwrap_err(),
            Error::GroupTooLarge { cap: 10 }
        );
        let m = DMatrix::from_row_slice(1, 1, &[c(2.0, 0.0)]);
        assert!(matches!(
            build_group(&GroupSpec::Explicit(vec![m])),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn act_point_examples() {
        let id = GroupElement::identity(2);
        assert_eq!(
            id.act_point(&[c(1.0, 0.0), c(0.0, 2.0)]).unwrap(),
            vec![c(1.0, 0.0), c(0.0, 2.0)]
        );
        let swap = GroupElement::permutation(&[1, 0]).unwrap();
        let (a, b) = (c(0.3, 0.1), c(-0.2, 0.5));
        assert_eq!(swap.act_point(&[a, b]).unwrap(), vec![b, a]);
        let g = GroupElement::diagonal(&[c(0.0, 1.0), c(1.0, 0.0)]).unwrap();
        let out = g.act_point(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!((out[0] - c(0.0, -1.0)).norm() < 1e-15);
        assert!(swap.act_point(&[a]).is_err());
    }

    #[test]
    fn act_function_examples() {
        let swap = GroupElement::permutation(&[1, 0]).unwrap();
        let f = |z: &[C64]| Ok(z[0]);
        let z = [c(0.3, 0.0), c(0.7, 0.0)];
        assert_eq!(swap.act_function(f)(&z).unwrap(), z[1]);
        assert_eq!(GroupElement::identity(2).act_function(f)(&z).unwrap(), z[0]);

        let d6 = build_group(&GroupSpec::Dihedral(3)).unwrap();
        let delta = &d6.generators()[0];
        let prod = |z: &[C64]| Ok(z[0] * z[1]);
        let z = [c(0.3, 0.2), c(-0.1, 0.4)];
        assert!((delta.act_function(prod)(&z).unwrap() - prod(&z).unwrap()).norm() < 1e-14);
    }

    #[test]
    fn pseudoreflection_examples() {
        assert!(GroupElement::permutation(&[1, 0])
            .unwrap()
            .is_pseudoreflection());
        assert!(!GroupElement::identity(2).is_pseudoreflection());
        let minus = GroupElement::diagonal(&[c(-1.0, 0.0), c(-1.0, 0.0)]).unwrap();
        assert!(!minus.is_pseudoreflection());
    }

    #[test]
    fn hyperplane_examples() {
        let hs = sym(2).reflecting_hyperplanes().unwrap();
        assert_eq!(hs.len(), 1);
        assert_eq!(hs[0].order, 2);
        assert_eq!(hs[0].coefficients, vec![c(1.0, 0.0), c(-1.0, 0.0)]);

        let hs3 = sym(3).reflecting_hyperplanes().unwrap();
        assert_eq!(hs3.len(), 3);
        assert!(hs3.iter().all(|h| h.order == 2));

        for k in 2..=6 {
            let hs = build_group(&GroupSpec::Dihedral(k))
                .unwrap()
                .reflecting_hyperplanes()
                .unwrap();
            assert_eq!(hs.len(), k as usize);
            assert!(hs.iter().all(|h| h.order == 2));
        }

        let z4 = build_group(&GroupSpec::CyclicProduct(vec![4])).unwrap();
        let hs = z4.reflecting_hyperplanes().unwrap();
        assert_eq!(hs.len(), 1);
        assert_eq!(hs[0].order, 4);

        let minus = DMatrix::from_diagonal(&DVector::from_vec(vec![c(-1.0, 0.0), c(-1.0, 0.0)]));
        let g = build_group(&GroupSpec::Explicit(vec![minus])).unwrap();
        assert!(g.reflecting_hyperplanes().is_err());
    }

    #[test]
    fn hyperplane_generators_fix_their_hyperplane() {
        for spec in [
            GroupSpec::Symmetric(3),
            GroupSpec::Dihedral(4),
            GroupSpec::Dihedral(5),
            GroupSpec::CyclicProduct(vec![2, 3]),
        ] {
            let g = build_group(&spec).unwrap();
            for h in g.reflecting_hyperplanes().unwrap() {
                // ker(ℓ) basis: vectors e_j - (ℓ_j/ℓ_p) e_p for the pivot p
                let p = h
                    .coefficients
                    .iter()
                    .position(|c| (c - 1.0).norm() < 1e-12)
                    .unwrap();
                for j in (0..g.dim()).filter(|&j| j != p) {
                    let mut v = vec![c(0.0, 0.0); g.dim()];
                    v[j] = c(1.0, 0.0);
                    v[p] = -h.coefficients[j];
                    assert!(h.linear_form.eval(&v).unwrap().norm() < 1e-12);
                    let moved = h.generator.act_point(&v).unwrap();
                    let err: f64 = moved.iter().zip(&v).map(|(a, b)| (a - b).norm()).sum();
                    assert!(err < 1e-10);
                }
                // order exactly m
                let mut pw = h.generator.clone();
                for step in 1..h.order {
                    assert!(
                        pw.distance(&GroupElement::identity(g.dim())) > 1e-6,
                        "order below {step}"
                    );
                    pw = pw.compose(&h.generator);
                }
                assert!(pw.distance(&GroupElement::identity(g.dim())) < 1e-10);
            }
        }
    }

    #[test]
    fn characters_and_exponents() {
        let s2 = sym(2);
        let hs = s2.reflecting_hyperplanes().unwrap();
        let sgn = s2.sign_character();
        assert_eq!(character_exponents(&sgn, &hs).unwrap(), vec![1]);
        assert_eq!(
            character_exponents(&s2.trivial_character(), &hs).unwrap(),
            vec![0]
        );
        let swap_idx = s2
            .index_of(&GroupElement::permutation(&[1, 0]).unwrap().matrix().clone())
            .unwrap();
        assert_eq!(sgn.value(swap_idx), c(-1.0, 0.0));
        assert_eq!(sgn.value(0), c(1.0, 0.0));

        let z4 = build_group(&GroupSpec::CyclicProduct(vec![4])).unwrap();
        let hs = z4.reflecting_hyperplanes().unwrap();
        let chi = z4.cyclic_character(&[2]).unwrap();
        assert_eq!(character_exponents(&chi, &hs).unwrap(), vec![2]);

        let d6 = build_group(&GroupSpec::Dihedral(3)).unwrap();
        let delta_idx = d6.index_of(d6.generators()[0].matrix()).unwrap();
        assert!((d6.sign_character().value(delta_idx) - 1.0).norm() < 1e-12);
    }

    #[test]
    fn one_dim_character_counts() {
        assert_eq!(sym(3).one_dim_characters().unwrap().len(), 2);
        assert_eq!(
            build_group(&GroupSpec::Dihedral(3))
                .unwrap()
                .one_dim_characters()
                .unwrap()
                .len(),
            2
        );
        assert_eq!(
            build_group(&GroupSpec::Dihedral(4))
                .unwrap()
                .one_dim_characters()
                .unwrap()
                .len(),
            4
        );
        let z22 = build_group(&GroupSpec::CyclicProduct(vec![2, 2])).unwrap();
        let chars = z22.one_dim_characters().unwrap();
        assert_eq!(chars.len(), 4);
        for chi in &chars {
            z22.check_character(chi).unwrap();
        }
        let expl = build_group(&GroupSpec::Explicit(vec![GroupElement::permutation(&[
            1, 0,
        ])
        .unwrap()
        .matrix()
        .clone()]))
        .unwrap();
        assert!(matches!(
            expl.one_dim_characters(),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn every_catalog_character_is_multiplicative() {
        for spec in [
            GroupSpec::Symmetric(3),
            GroupSpec::Symmetric(4),
            GroupSpec::Dihedral(4),
            GroupSpec::Dihedral(6),
            GroupSpec::CyclicProduct(vec![2, 3]),
        ] {
            let g = build_group(&spec).unwrap();
            for chi in g.one_dim_characters().unwrap() {
                g.check_character(&chi).unwrap();
            }
            g.check_character(&g.sign_character()).unwrap();
        }
    }

    #[test]
    fn bad_generator_values_rejected() {
        let d6 = build_group(&GroupSpec::Dihedral(3)).unwrap();
        let one = c(1.0, 0.0);
        assert!(matches!(
            d6.character_from_generators("bad", &[-one, one]),
            Err(Error::NotACharacter(_))
        ));
    }

    #[test]
    fn relative_invariant_examples() {
        let s2 = sym(2);
        let hs = s2.reflecting_hyperplanes().unwrap();
        assert_eq!(
            relative_invariant(&s2.trivial_character(), &hs).unwrap(),
            MultiPoly::one(2)
        );
        let l = relative_invariant(&s2.sign_character(), &hs).unwrap();
        let expected = MultiPoly::linear(&[c(1.0, 0.0), c(-1.0, 0.0)]);
        assert_eq!(l, expected);

        // ρ₁ of D_{2k}, k even: z₁^{k/2} + z₂^{k/2} up to scale
        for k in [2u32, 4, 6] {
            let g = build_group(&GroupSpec::Dihedral(k)).unwrap();
            let hs = g.reflecting_hyperplanes().unwrap();
            let rho1 = g
                .one_dim_characters()
                .unwrap()
                .into_iter()
                .find(|c| c.name() == "rho1")
                .unwrap();
            let l = relative_invariant(&rho1, &hs).unwrap();
            let h = k / 2;
            let target =
                &MultiPoly::var(2, 0).unwrap().pow(h) + &MultiPoly::var(2, 1).unwrap().pow(h);
            let pts = [[c(0.3, 0.1), c(-0.2, 0.4)], [c(0.5, -0.1), c(0.1, 0.2)]];
            let r0 = l.eval(&pts[0]).unwrap() / target.eval(&pts[0]).unwrap();
            let r1 = l.eval(&pts[1]).unwrap() / target.eval(&pts[1]).unwrap();
            assert!((r0 - r1).norm() < 1e-10 * r0.norm(), "k = {k}");
            assert_eq!(l.degree(), Some(h));
        }
    }

    #[test]
    fn project_examples() {
        let s2 = sym(2);
        let (a, b) = (c(0.3, 0.2), c(-0.4, 0.1));
        let f = |z: &[C64]| Ok(z[0]);
        let p = s2.project(&s2.trivial_character(), f, &[a, b]).unwrap();
        assert!((p - (a + b) / 2.0).norm() < 1e-15);
        let p = s2.project(&s2.sign_character(), f, &[a, b]).unwrap();
        assert!((p - (a - b) / 2.0).norm() < 1e-15);
        let inv = |z: &[C64]| Ok(z[0] * z[1]);
        let p = s2.project(&s2.trivial_character(), inv, &[a, b]).unwrap();
        assert!((p - a * b).norm() < 1e-15);
    }

    #[test]
    fn spec_parsing() {
        assert_eq!(
            "sym:3".parse::<GroupSpec>().unwrap(),
            GroupSpec::Symmetric(3)
        );
        assert_eq!(
            "dihedral:4".parse::<GroupSpec>().unwrap(),
            GroupSpec::Dihedral(4)
        );
        assert_eq!(
            "cyclic:2,3".parse::<GroupSpec>().unwrap(),
            GroupSpec::CyclicProduct(vec![2, 3])
        );
        assert!("bogus".parse::<GroupSpec>().is_err());
        assert!("sym:x".parse::<GroupSpec>().is_err());
    }

    fn point(d: usize) -> impl Strategy<Value = Vec<C64>> {
        proptest::collection::vec((-0.6f64..0.6, -0.6f64..0.6), d)
            .prop_map(|v| v.into_iter().map(|(a, b)| C64::new(a, b)).collect())
    }

    proptest! {
        #[test]
        fn projection_is_idempotent_and_equivariant(z in point(2), k in 2u32..6) {
            let g = build_group(&GroupSpec::Dihedral(k)).unwrap();
            let f = |z: &[C64]| Ok(z[0].powu(3) + z[1] * 2.0 + z[0] * z[1].powu(2) + 0.5);
            for chi in g.one_dim_characters().unwrap() {
                let pf = |y: &[C64]| g.project(&chi, f, y);
                let once = pf(&z).unwrap();
                let twice = g.project(&chi, pf, &z).unwrap();
                prop_assert!((once - twice).norm() < 1e-10);
                for (t, tau) in g.elements().iter().enumerate() {
                    let moved = pf(&tau.apply_matrix(&z).unwrap()).unwrap();
                    prop_assert!((moved - chi.value(t) * once).norm() < 1e-10);
                }
            }
        }
    }
}
