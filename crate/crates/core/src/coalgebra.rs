//! Finite-dimensional coalgebras given by structure constants.
//!
//! The comultiplication of basis element `x` is stored as a sparse list of
//! `(y, z, c)` triples meaning `Δ(x) ∋ c·(b_y ⊗ b_z)`; the counit is a vector.
//! Everything here is generic: nothing assumes the coalgebra came from a graph.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::caps::saturating_pow;
use crate::error::ErrorKind;
use crate::field::{Field, FieldElement};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoalgebraError {
    #[error("coalgebras or maps are defined over different fields")]
    FieldMismatch,
    #[error("shape mismatch: expected {expected_rows}x{expected_cols}, found {rows}x{cols}")]
    ShapeMismatch {
        expected_rows: usize,
        expected_cols: usize,
        rows: usize,
        cols: usize,
    },
    #[error("basis index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("{what} has length {found}, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("coefficient is not an element of the field")]
    InvalidElement,
    #[error("grouplike scan over {} vectors exceeds cap {cap}", show_space(*space))]
    EnumerationCapExceeded { space: u64, cap: u64 },
    #[error("brute automorphism scan over {} matrices exceeds cap {cap}", show_space(*space))]
    OracleCapExceeded { space: u64, cap: u64 },
}

/// Search-space sizes saturate at `u64::MAX`.
fn show_space(space: u64) -> String {
    if space == u64::MAX {
        "more than 2^64".into()
    } else {
        space.to_string()
    }
}

impl CoalgebraError {
    pub fn kind(&self) -> ErrorKind {
        match self {
            CoalgebraError::EnumerationCapExceeded { .. }
            | CoalgebraError::OracleCapExceeded { .. } => ErrorKind::CapExceeded,
            _ => ErrorKind::Input,
        }
    }
}

/// Sparse vector: `(index, coefficient)` sorted by index, no zero coefficients.
pub type SparseVec = Vec<(usize, FieldElement)>;

type Tensor2 = BTreeMap<(usize, usize), FieldElement>;
type Tensor3 = BTreeMap<(usize, usize, usize), FieldElement>;

fn accumulate<K: Ord>(field: &Field, t: &mut BTreeMap<K, FieldElement>, key: K, c: FieldElement) {
    if c.is_zero() {
        return;
    }
    let entry = t.entry(key).or_insert(FieldElement::ZERO);
    *entry = field.add(*entry, c);
}

fn prune<K: Ord>(mut t: BTreeMap<K, FieldElement>) -> BTreeMap<K, FieldElement> {
    t.retain(|_, c| !c.is_zero());
    t
}

fn normalize(field: &Field, entries: impl IntoIterator<Item = (usize, FieldElement)>) -> SparseVec {
    let mut acc: BTreeMap<usize, FieldElement> = BTreeMap::new();
    for (i, c) in entries {
        accumulate(field, &mut acc, i, c);
    }
    prune(acc).into_iter().collect()
}

/// A linear map `k^cols -> k^rows`, stored by sparse columns: column `j`
/// is the image of basis element `j`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinearMap {
    rows: usize,
    columns: Vec<SparseVec>,
}

impl LinearMap {
    pub fn identity(d: usize) -> Self {
        LinearMap {
            rows: d,
            columns: (0..d).map(|j| vec![(j, FieldElement::ONE)]).collect(),
        }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        LinearMap {
            rows,
            columns: vec![Vec::new(); cols],
        }
    }

    /// Columns may contain repeated indices and zeros; they are normalized.
    pub fn from_columns(
        field: &Field,
        rows: usize,
        columns: Vec<SparseVec>,
    ) -> Result<Self, CoalgebraError> {
        let mut out = Vec::with_capacity(columns.len());
        for col in columns {
            for &(i, c) in &col {
                if i >= rows {
                    return Err(CoalgebraError::IndexOutOfRange(i));
                }
                if !field.contains(c) {
                    return Err(CoalgebraError::InvalidElement);
                }
            }
            out.push(normalize(field, col));
        }
        Ok(LinearMap { rows, columns: out })
    }

    /// From a row-major dense matrix.
    pub fn from_dense(field: &Field, dense: &[Vec<FieldElement>]) -> Result<Self, CoalgebraError> {
        let rows = dense.len();
        let cols = dense.first().map_or(0, Vec::len);
        let mut columns = vec![Vec::new(); cols];
        for (i, row) in dense.iter().enumerate() {
            if row.len() != cols {
                return Err(CoalgebraError::LengthMismatch {
                    what: "matrix row",
                    expected: cols,
                    found: row.len(),
                });
            }
            for (j, &c) in row.iter().enumerate() {
                columns[j].push((i, c));
            }
        }
        LinearMap::from_columns(field, rows, columns)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &[(usize, FieldElement)] {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.columns
    }

    pub fn entry(&self, i: usize, j: usize) -> FieldElement {
        self.columns[j]
            .binary_search_by_key(&i, |&(r, _)| r)
            .map_or(FieldElement::ZERO, |k| self.columns[j][k].1)
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<Vec<FieldElement>> {
        let mut out = vec![vec![FieldElement::ZERO; self.cols()]; self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for &(i, c) in col {
                out[i][j] = c;
            }
        }
        out
    }

    /// The product `self · other` (apply `other` first).
    pub fn compose(&self, field: &Field, other: &LinearMap) -> Result<LinearMap, CoalgebraError> {
        if other.rows != self.cols() {
            return Err(CoalgebraError::ShapeMismatch {
                expected_rows: self.cols(),
                expected_cols: other.cols(),
                rows: other.rows,
                cols: other.cols(),
            });
        }
        let columns = other
            .columns
            .iter()
            .map(|col| {
                normalize(
                    field,
                    col.iter().flat_map(|&(k, b)| {
                        self.columns[k]
                            .iter()
                            .map(move |&(i, a)| (i, field.mul(a, b)))
                    }),
                )
            })
            .collect();
        Ok(LinearMap {
            rows: self.rows,
            columns,
        })
    }

    pub fn apply(&self, field: &Field, v: &[(usize, FieldElement)]) -> SparseVec {
        normalize(
            field,
            v.iter().flat_map(|&(k, b)| {
                self.columns[k]
                    .iter()
                    .map(move |&(i, a)| (i, field.mul(a, b)))
            }),
        )
    }

    pub fn rank(&self, field: &Field) -> usize {
        let mut m = self.to_dense();
        let (rows, cols) = (self.rows, self.cols());
        let mut rank = 0;
        for c in 0..cols {
            let Some(pivot) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
                continue;
            };
            m.swap(rank, pivot);
            let inv = field.inv(m[rank][c]).expect("pivot is nonzero");
            for r in 0..rows {
                if r != rank && !m[r][c].is_zero() {
                    let factor = field.mul(m[r][c], inv);
                    for k in c..cols {
                        let sub = field.mul(factor, m[rank][k]);
                        m[r][k] = field.sub(m[r][k], sub);
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn is_invertible(&self, field: &Field) -> bool {
        self.rows == self.cols() && self.rank(field) == self.rows
    }

    /// Gauss-Jordan inverse, `None` when singular.
    pub fn inverse(&self, field: &Field) -> Option<LinearMap> {
        let d = self.rows;
        if d != self.cols() {
            return None;
        }
        let mut m = self.to_dense();
        let mut inv = LinearMap::identity(d).to_dense();
        for c in 0..d {
            let pivot = (c..d).find(|&r| !m[r][c].is_zero())?;
            m.swap(c, pivot);
            inv.swap(c, pivot);
            let p = field.inv(m[c][c]).ok()?;
            for k in 0..d {
                m[c][k] = field.mul(m[c][k], p);
                inv[c][k] = field.mul(inv[c][k], p);
            }
            for r in 0..d {
                if r != c && !m[r][c].is_zero() {
                    let factor = m[r][c];
                    for k in 0..d {
                        let (a, b) = (field.mul(factor, m[c][k]), field.mul(factor, inv[c][k]));
                        m[r][k] = field.sub(m[r][k], a);
                        inv[r][k] = field.sub(inv[r][k], b);
                    }
                }
            }
        }
        LinearMap::from_dense(field, &inv).ok()
    }
}

/// A coalgebra `(C, Δ, ε)` on a finite basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coalgebra {
    field: Field,
    basis: Vec<String>,
    comult: Vec<Vec<(usize, usize, FieldElement)>>,
    counit: Vec<FieldElement>,
}

impl Coalgebra {
    /// Validates indices and coefficients; the axioms are checked separately
    /// by [`Coalgebra::verify_axioms`].
    pub fn new(
        field: Field,
        basis: Vec<String>,
        comult: Vec<Vec<(usize, usize, FieldElement)>>,
        counit: Vec<FieldElement>,
    ) -> Result<Self, CoalgebraError> {
        let d = basis.len();
        for (what, found) in [("comultiplication", comult.len()), ("counit", counit.len())] {
            if found != d {
                return Err(CoalgebraError::LengthMismatch {
                    what,
                    expected: d,
                    found,
                });
            }
        }
        if counit.iter().any(|&c| !field.contains(c)) {
            return Err(CoalgebraError::InvalidElement);
        }
        let mut normalized = Vec::with_capacity(d);
        for terms in comult {
            let mut t = Tensor2::new();
            for (y, z, c) in terms {
                if y >= d || z >= d {
                    return Err(CoalgebraError::IndexOutOfRange(y.max(z)));
                }
                if !field.contains(c) {
                    return Err(CoalgebraError::InvalidElement);
                }
                accumulate(&field, &mut t, (y, z), c);
            }
            normalized.push(prune(t).into_iter().map(|((y, z), c)| (y, z, c)).collect());
        }
        Ok(Coalgebra {
            field,
            basis,
            comult: normalized,
            counit,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn comult(&self, x: usize) -> &[(usize, usize, FieldElement)] {
        &self.comult[x]
    }

    pub fn counit(&self) -> &[FieldElement] {
        &self.counit
    }

    /// Replace `Δ(x)`; for building deliberately broken variants in tests and tools.
    pub fn with_comult(
        &self,
        x: usize,
        terms: Vec<(usize, usize, FieldElement)>,
    ) -> Result<Self, CoalgebraError> {
        let mut comult = self.comult.clone();
        comult[x] = terms;
        Coalgebra::new(
            self.field.clone(),
            self.basis.clone(),
            comult,
            self.counit.clone(),
        )
    }

    pub fn with_counit(&self, x: usize, c: FieldElement) -> Result<Self, CoalgebraError> {
        let mut counit = self.counit.clone();
        counit[x] = c;
        Coalgebra::new(
            self.field.clone(),
            self.basis.clone(),
            self.comult.clone(),
            counit,
        )
    }

    /// `Δ(v)` for a sparse vector `v`.
    fn delta_of(&self, v: &[(usize, FieldElement)]) -> Tensor2 {
        let f = &self.field;
        let mut t = Tensor2::new();
        for &(i, a) in v {
            for &(y, z, c) in &self.comult[i] {
                accumulate(f, &mut t, (y, z), f.mul(a, c));
            }
        }
        prune(t)
    }

    fn epsilon_of(&self, v: &[(usize, FieldElement)]) -> FieldElement {
        v.iter().fold(FieldElement::ZERO, |acc, &(i, a)| {
            self.field.add(acc, self.field.mul(a, self.counit[i]))
        })
    }

    /// Evaluates coassociativity and both counit laws on every basis element.
    pub fn verify_axioms(&self) -> AxiomReport {
        let f = &self.field;
        let mut report = AxiomReport {
            coassoc: true,
            counit: true,
            failures: Vec::new(),
        };
        let show = |c: FieldElement| f.format(c);
        for x in 0..self.dim() {
            let mut lhs = Tensor3::new();
            let mut rhs = Tensor3::new();
            for &(y, z, c) in &self.comult[x] {
                for &(a, b, d) in &self.comult[y] {
                    accumulate(f, &mut lhs, (a, b, z), f.mul(c, d));
                }
                for &(a, b, d) in &self.comult[z] {
                    accumulate(f, &mut rhs, (y, a, b), f.mul(c, d));
                }
            }
            let (lhs, rhs) = (prune(lhs), prune(rhs));
            if lhs != rhs {
                report.coassoc = false;
                report.failures.push(AxiomFailure {
                    basis: self.basis[x].clone(),
                    law: AxiomLaw::Coassociativity,
                    differences: diff(&lhs, &rhs)
                        .into_iter()
                        .map(|((a, b, c), l, r)| TermDifference {
                            term: vec![
                                self.basis[a].clone(),
                                self.basis[b].clone(),
                                self.basis[c].clone(),
                            ],
                            lhs: show(l),
                            rhs: show(r),
                        })
                        .collect(),
                });
            }

            let expected: BTreeMap<usize, FieldElement> = BTreeMap::from([(x, FieldElement::ONE)]);
            for law in [AxiomLaw::LeftCounit, AxiomLaw::RightCounit] {
                let mut got = BTreeMap::new();
                for &(y, z, c) in &self.comult[x] {
                    let (kept, dropped) = if law == AxiomLaw::LeftCounit {
                        (z, y)
                    } else {
                        (y, z)
                    };
                    accumulate(f, &mut got, kept, f.mul(c, self.counit[dropped]));
                }
                let got = prune(got);
                if got != expected {
                    report.counit = false;
                    report.failures.push(AxiomFailure {
                        basis: self.basis[x].clone(),
                        law,
                        differences: diff(&got, &expected)
                            .into_iter()
                            .map(|(k, l, r)| TermDifference {
                                term: vec![self.basis[k].clone()],
                                lhs: show(l),
                                rhs: show(r),
                            })
                            .collect(),
                    });
                }
            }
        }
        report
    }

    /// Whether `Δ ∘ f(b_j) = (f ⊗ f) ∘ Δ(b_j)` and `ε ∘ f(b_j) = ε(b_j)`,
    /// reading columns of `f` through `col`.
    fn respects_basis<'a>(
        &self,
        target: &Coalgebra,
        j: usize,
        col: impl Fn(usize) -> &'a [(usize, FieldElement)],
    ) -> bool {
        let f = &self.field;
        if target.epsilon_of(col(j)) != self.counit[j] {
            return false;
        }
        let lhs = target.delta_of(col(j));
        let mut rhs = Tensor2::new();
        for &(y, z, c) in &self.comult[j] {
            for &(a, ca) in col(y) {
                let cc = f.mul(c, ca);
                for &(b, cb) in col(z) {
                    accumulate(f, &mut rhs, (a, b), f.mul(cc, cb));
                }
            }
        }
        lhs == prune(rhs)
    }

    /// Whether `map: self -> target` is a coalgebra morphism.
    pub fn is_morphism(&self, target: &Coalgebra, map: &LinearMap) -> Result<bool, CoalgebraError> {
        if self.field != target.field {
            return Err(CoalgebraError::FieldMismatch);
        }
        if map.rows() != target.dim() || map.cols() != self.dim() {
            return Err(CoalgebraError::ShapeMismatch {
                expected_rows: target.dim(),
                expected_cols: self.dim(),
                rows: map.rows(),
                cols: map.cols(),
            });
        }
        Ok((0..self.dim()).all(|j| self.respects_basis(target, j, |k| map.column(k))))
    }

    /// Whether the dense vector `x` is grouplike: `Δ(x) = x ⊗ x`, `ε(x) = 1`.
    pub fn is_grouplike(&self, x: &[FieldElement]) -> bool {
        let f = &self.field;
        let sparse: SparseVec = x
            .iter()
            .copied()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        if self.epsilon_of(&sparse) != FieldElement::ONE {
            return false;
        }
        let mut square = Tensor2::new();
        for &(i, a) in &sparse {
            for &(k, b) in &sparse {
                accumulate(f, &mut square, (i, k), f.mul(a, b));
            }
        }
        self.delta_of(&sparse) == prune(square)
    }

    /// All grouplike elements, by scanning every vector in `k^dim`.
    /// Returned as dense coordinate vectors, ordered by their packed index
    /// (coordinate 0 least significant).
    pub fn grouplikes(&self, cap: u64) -> Result<Vec<Vec<FieldElement>>, CoalgebraError> {
        let q = self.field.order() as u64;
        let space = saturating_pow(q, self.dim() as u64);
        if space > cap {
            return Err(CoalgebraError::EnumerationCapExceeded { space, cap });
        }
        let mut out = Vec::new();
        let mut x = vec![FieldElement::ZERO; self.dim()];
        for _ in 1..space {
            increment(&self.field, &mut x);
            if self.is_grouplike(&x) {
                out.push(x.clone());
            }
        }
        Ok(out)
    }

    /// Every invertible coalgebra endomorphism, found by scanning the full
    /// matrix space column by column. A partial assignment is abandoned as
    /// soon as some basis element whose image is fully determined violates
    /// the morphism equations, which never discards a valid matrix.
    pub fn automorphisms_brute(&self, cap: u64) -> Result<Vec<LinearMap>, CoalgebraError> {
        let d = self.dim();
        let q = self.field.order() as u64;
        let space = saturating_pow(q, (d * d) as u64);
        if space > cap {
            return Err(CoalgebraError::OracleCapExceeded { space, cap });
        }
        // Constraint for basis k becomes checkable once every column it reads is fixed.
        let mut ready: Vec<Vec<usize>> = vec![Vec::new(); d];
        let mut local_only = vec![Vec::new(); d];
        for k in 0..d {
            let reads = self.comult[k].iter().flat_map(|&(y, z, _)| [y, z]);
            let last = reads.clone().chain([k]).max().unwrap();
            if reads.clone().all(|i| i == k) {
                local_only[k].push(k);
            } else {
                ready[last].push(k);
            }
        }
        let all_columns = all_vectors(&self.field, d);
        let candidates: Vec<Vec<SparseVec>> = (0..d)
            .map(|m| {
                all_columns
                    .iter()
                    .filter(|col| {
                        local_only[m]
                            .iter()
                            .all(|&k| self.respects_basis(self, k, |_| col.as_slice()))
                    })
                    .cloned()
                    .collect()
            })
            .collect();
        let mut found = Vec::new();
        let mut assigned: Vec<SparseVec> = Vec::with_capacity(d);
        self.brute_step(&candidates, &ready, &mut assigned, &mut found);
        found.sort();
        Ok(found)
    }

    fn brute_step(
        &self,
        candidates: &[Vec<SparseVec>],
        ready: &[Vec<usize>],
        assigned: &mut Vec<SparseVec>,
        found: &mut Vec<LinearMap>,
    ) {
        let m = assigned.len();
        if m == self.dim() {
            let map = LinearMap {
                rows: self.dim(),
                columns: assigned.clone(),
            };
            if map.is_invertible(&self.field) {
                found.push(map);
            }
            return;
        }
        for col in &candidates[m] {
            assigned.push(col.clone());
            let ok = ready[m]
                .iter()
                .all(|&k| self.respects_basis(self, k, |i| assigned[i].as_slice()));
            if ok {
                self.brute_step(candidates, ready, assigned, found);
            }
            assigned.pop();
        }
    }
}

fn increment(field: &Field, x: &mut [FieldElement]) {
    let q = field.order();
    for c in x.iter_mut() {
        let next = c.index() + 1;
        if next < q {
            *c = field.element(next).expect("below field order");
            return;
        }
        *c = FieldElement::ZERO;
    }
}

fn all_vectors(field: &Field, d: usize) -> Vec<SparseVec> {
    let space = saturating_pow(field.order() as u64, d as u64);
    let mut x = vec![FieldElement::ZERO; d];
    let mut out = Vec::with_capacity(space as usize);
    for k in 0..space {
        if k > 0 {
            increment(field, &mut x);
        }
        out.push(
            x.iter()
                .copied()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        );
    }
    out
}

fn diff<K: Ord + Copy>(
    a: &BTreeMap<K, FieldElement>,
    b: &BTreeMap<K, FieldElement>,
) -> Vec<(K, FieldElement, FieldElement)> {
    let mut keys: Vec<K> = a.keys().chain(b.keys()).copied().collect();
    keys.sort();
    keys.dedup();
    keys.into_iter()
        .filter_map(|k| {
            let (x, y) = (
                a.get(&k).copied().unwrap_or(FieldElement::ZERO),
                b.get(&k).copied().unwrap_or(FieldElement::ZERO),
            );
            (x != y).then_some((k, x, y))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AxiomLaw {
    Coassociativity,
    /// `(ε ⊗ id) ∘ Δ = id`
    LeftCounit,
    /// `(id ⊗ ε) ∘ Δ = id`
    RightCounit,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TermDifference {
    pub term: Vec<String>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomFailure {
    pub basis: String,
    pub law: AxiomLaw,
    pub differences: Vec<TermDifference>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub coassoc: bool,
    pub counit: bool,
    pub failures: Vec<AxiomFailure>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.coassoc && self.counit
    }
}
