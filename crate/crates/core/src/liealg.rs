//! Finite-dimensional Lie algebras over exact scalars: structure constants,
//! Jacobi verification, adjoint actions on tensors, invariant symmetric
//! forms and tensors, and structure-preserving linear maps.

use crate::coeff::{Bindings, CoeffError, Rat, Scalar};
use crate::linalg::{self, RatMat};
use crate::tensor::{Bivector, Tensor2, Trivector};
use num_traits::{One, Zero};
use std::collections::BTreeMap;

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum LieError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("structure constants contain the free parameter {0}; bind it first")]
    SymbolicConstants(String),
    #[error("form is singular and cannot be inverted")]
    SingularForm,
    #[error("map is not an isomorphism: {0}")]
    NotIsomorphism(String),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

/// A Lie algebra given by structure constants over exact scalars.
/// Brackets are stored once per unordered pair, at increasing indices.
#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebra {
    names: Vec<String>,
    table: BTreeMap<(usize, usize), Vec<Scalar>>,
}

impl LieAlgebra {
    /// Builds an algebra from bracket entries `(i, j, k, c)` meaning
    /// `[X_i, X_j] = ... + c X_k + ...`. Pairs may appear in any order;
    /// reversed pairs contribute with a sign flip.
    pub fn new(names: &[&str], entries: &[(usize, usize, usize, Scalar)]) -> Self {
        let dim = names.len();
        let mut table: BTreeMap<(usize, usize), Vec<Scalar>> = BTreeMap::new();
        for (i, j, k, c) in entries {
            assert!(*i < dim && *j < dim && *k < dim, "index out of range");
            assert_ne!(i, j, "diagonal bracket must vanish");
            let (key, val) = if i < j {
                ((*i, *j), c.clone())
            } else {
                ((*j, *i), -c)
            };
            let row = table
                .entry(key)
                .or_insert_with(|| vec![Scalar::zero(); dim]);
            row[*k] = &row[*k] + &val;
        }
        table.retain(|_, row| row.iter().any(|s| !s.is_zero()));
        LieAlgebra {
            names: names.iter().map(|s| s.to_string()).collect(),
            table,
        }
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn basis_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// `[X_i, X_j]` as a dense coefficient vector.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<Scalar> {
        let dim = self.dim();
        if i == j {
            return vec![Scalar::zero(); dim];
        }
        let (key, flip) = if i < j { ((i, j), false) } else { ((j, i), true) };
        match self.table.get(&key) {
            Some(row) if !flip => row.clone(),
            Some(row) => row.iter().map(|s| -s).collect(),
            None => vec![Scalar::zero(); dim],
        }
    }

    /// `c^k_{ij}`.
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> Scalar {
        self.bracket_basis(i, j)[k].clone()
    }

    /// Bracket of coefficient vectors.
    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let dim = self.dim();
        assert_eq!(x.len(), dim);
        assert_eq!(y.len(), dim);
        let mut out = vec![Scalar::zero(); dim];
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() || i == j {
                    continue;
                }
                let br = self.bracket_basis(i, j);
                let f = a * b;
                for k in 0..dim {
                    if !br[k].is_zero() {
                        out[k] = &out[k] + &(&br[k] * &f);
                    }
                }
            }
        }
        out
    }

    /// All Jacobi identity violations `[[Xi,Xj],Xk] + cyclic != 0`.
    pub fn jacobi_check(&self) -> Vec<JacobiViolation> {
        let dim = self.dim();
        let mut out = Vec::new();
        for i in 0..dim {
            for j in i + 1..dim {
                for k in j + 1..dim {
                    let ei = basis_vector(dim, i);
                    let ej = basis_vector(dim, j);
                    let ek = basis_vector(dim, k);
                    let mut acc = self.bracket(&self.bracket(&ei, &ej), &ek);
                    let t2 = self.bracket(&self.bracket(&ej, &ek), &ei);
                    let t3 = self.bracket(&self.bracket(&ek, &ei), &ej);
                    for a in 0..dim {
                        acc[a] = &acc[a] + &t2[a];
                        acc[a] = &acc[a] + &t3[a];
                    }
                    if acc.iter().any(|s| !s.is_zero()) {
                        out.push(JacobiViolation {
                            i,
                            j,
                            k,
                            residual: acc,
                        });
                    }
                }
            }
        }
        out
    }

    /// Exact parameter substitution in every structure constant.
    pub fn substitute_param(&self, name: &str, value: &Scalar) -> Result<LieAlgebra, CoeffError> {
        let mut table = BTreeMap::new();
        for (key, row) in &self.table {
            let new_row: Result<Vec<Scalar>, CoeffError> =
                row.iter().map(|s| s.substitute_param(name, value)).collect();
            table.insert(*key, new_row?);
        }
        let mut out = LieAlgebra {
            names: self.names.clone(),
            table,
        };
        out.table.retain(|_, row| row.iter().any(|s| !s.is_zero()));
        Ok(out)
    }

    /// Free parameters appearing in the structure constants.
    pub fn free_params(&self) -> Vec<String> {
        let mut names = std::collections::BTreeSet::new();
        for row in self.table.values() {
            for s in row {
                names.extend(s.free_params());
            }
        }
        names.into_iter().collect()
    }

    /// Rational structure constants, or the name of a blocking parameter.
    fn rational_constant(&self, i: usize, j: usize, k: usize) -> Result<Rat, LieError> {
        let c = self.structure_constant(i, j, k);
        c.as_rational().ok_or_else(|| {
            let p = c
                .free_params()
                .into_iter()
                .next()
                .unwrap_or_else(|| "?".to_string());
            LieError::SymbolicConstants(p)
        })
    }

    /// Adjoint action of the basis element `X_x` on a bivector.
    pub fn ad_bivector(&self, x: usize, b: &Bivector) -> Bivector {
        let dim = self.dim();
        assert_eq!(b.dim(), dim);
        let mut out = Bivector::zero(dim);
        for (&(i, j), c) in b.terms() {
            let bi = self.bracket_basis(x, i);
            for (a, ca) in bi.iter().enumerate() {
                if !ca.is_zero() {
                    out.add_term(a, j, ca * c);
                }
            }
            let bj = self.bracket_basis(x, j);
            for (a, ca) in bj.iter().enumerate() {
                if !ca.is_zero() {
                    out.add_term(i, a, ca * c);
                }
            }
        }
        out
    }

    /// Adjoint action of `X_x` on a trivector.
    pub fn ad_trivector(&self, x: usize, t: &Trivector) -> Trivector {
        let dim = self.dim();
        assert_eq!(t.dim(), dim);
        let mut out = Trivector::zero(dim);
        for (&(i, j, k), c) in t.terms() {
            for (slot, idx) in [(0usize, i), (1, j), (2, k)] {
                let br = self.bracket_basis(x, idx);
                for (a, ca) in br.iter().enumerate() {
                    if ca.is_zero() {
                        continue;
                    }
                    let (ii, jj, kk) = match slot {
                        0 => (a, j, k),
                        1 => (i, a, k),
                        _ => (i, j, a),
                    };
                    out.add_term(ii, jj, kk, ca * c);
                }
            }
        }
        out
    }

    /// Adjoint action of `X_x` on a general 2-tensor (both slots upper).
    pub fn ad_tensor2(&self, x: usize, t: &Tensor2) -> Tensor2 {
        let dim = self.dim();
        assert_eq!(t.dim(), dim);
        let mut out = Tensor2::zero(dim);
        for (&(i, j), c) in t.terms() {
            let bi = self.bracket_basis(x, i);
            for (a, ca) in bi.iter().enumerate() {
                if !ca.is_zero() {
                    out.add_term(a, j, ca * c);
                }
            }
            let bj = self.bracket_basis(x, j);
            for (a, ca) in bj.iter().enumerate() {
                if !ca.is_zero() {
                    out.add_term(i, a, ca * c);
                }
            }
        }
        out
    }

    /// True when the tensor is invariant under every `ad_{X_i}`.
    pub fn is_invariant_tensor2(&self, t: &Tensor2) -> bool {
        (0..self.dim()).all(|x| self.ad_tensor2(x, t).is_zero())
    }

    pub fn is_invariant_trivector(&self, t: &Trivector) -> bool {
        (0..self.dim()).all(|x| self.ad_trivector(x, t).is_zero())
    }

    /// Solves the invariance equations for symmetric bilinear forms
    /// `g([x,y], z) + g(y, [x,z]) = 0` exactly over the rationals and
    /// reports degeneracy information for the solution space.
    pub fn invariant_symmetric_forms(&self) -> Result<InvariantForms, LieError> {
        let dim = self.dim();
        // Unknowns: g_{ij} for i <= j.
        let unknowns: Vec<(usize, usize)> = (0..dim)
            .flat_map(|i| (i..dim).map(move |j| (i, j)))
            .collect();
        let index_of = |i: usize, j: usize| -> usize {
            let (a, b) = if i <= j { (i, j) } else { (j, i) };
            unknowns.iter().position(|&(x, y)| (x, y) == (a, b)).unwrap()
        };
        let mut rows = Vec::new();
        for k in 0..dim {
            for i in 0..dim {
                for j in i..dim {
                    let mut row = vec![Rat::zero(); unknowns.len()];
                    for l in 0..dim {
                        let c1 = self.rational_constant(k, i, l)?;
                        if !c1.is_zero() {
                            row[index_of(l, j)] += c1;
                        }
                        let c2 = self.rational_constant(k, j, l)?;
                        if !c2.is_zero() {
                            row[index_of(i, l)] += c2;
                        }
                    }
                    if row.iter().any(|v| !v.is_zero()) {
                        rows.push(row);
                    }
                }
            }
        }
        let basis_vecs = if rows.is_empty() {
            RatMat::identity(unknowns.len())
                .nullspace()
                .into_iter()
                .collect::<Vec<_>>()
        } else {
            RatMat::from_rows(rows).nullspace()
        };
        // An empty constraint system means every symmetric form is invariant.
        let basis_vecs = if self.table.is_empty() {
            (0..unknowns.len())
                .map(|u| {
                    let mut v = vec![Rat::zero(); unknowns.len()];
                    v[u] = Rat::one();
                    v
                })
                .collect()
        } else {
            basis_vecs
        };
        let mut basis = Vec::new();
        for v in &basis_vecs {
            let mut form = SymmetricForm::zero(dim);
            for (u, &(i, j)) in unknowns.iter().enumerate() {
                if !v[u].is_zero() {
                    form.set(i, j, Scalar::from_rat(v[u].clone()));
                }
            }
            basis.push(form);
        }
        let each_nondegenerate: Vec<bool> = basis
            .iter()
            .map(|f| !linalg::scalar_det(f.entries()).is_zero())
            .collect();
        let generic = generic_combination_nondegenerate(&basis);
        let identically_degenerate = combination_det_identically_zero(&basis);
        Ok(InvariantForms {
            basis,
            each_nondegenerate,
            generic_sample_nondegenerate: generic,
            identically_degenerate,
        })
    }

    /// Solves the invariance equations for symmetric 2-tensors (both indices
    /// upper): the tensors annihilated by every adjoint action. These are
    /// the quadratic Casimir coefficient tensors.
    pub fn invariant_symmetric_tensors(&self) -> Result<Vec<Tensor2>, LieError> {
        let dim = self.dim();
        let unknowns: Vec<(usize, usize)> = (0..dim)
            .flat_map(|i| (i..dim).map(move |j| (i, j)))
            .collect();
        let index_of = |i: usize, j: usize| -> usize {
            let (a, b) = if i <= j { (i, j) } else { (j, i) };
            unknowns.iter().position(|&(x, y)| (x, y) == (a, b)).unwrap()
        };
        let mut rows = Vec::new();
        for x in 0..dim {
            for i in 0..dim {
                for j in i..dim {
                    // (ad T)^{ij} = c^i_{xl} T^{lj} + c^j_{xl} T^{il}
                    let mut row = vec![Rat::zero(); unknowns.len()];
                    for l in 0..dim {
                        let c1 = self.rational_constant(x, l, i)?;
                        if !c1.is_zero() {
                            row[index_of(l, j)] += c1;
                        }
                        let c2 = self.rational_constant(x, l, j)?;
                        if !c2.is_zero() {
                            row[index_of(i, l)] += c2;
                        }
                    }
                    if row.iter().any(|v| !v.is_zero()) {
                        rows.push(row);
                    }
                }
            }
        }
        let basis_vecs = if rows.is_empty() {
            (0..unknowns.len())
                .map(|u| {
                    let mut v = vec![Rat::zero(); unknowns.len()];
                    v[u] = Rat::one();
                    v
                })
                .collect()
        } else {
            RatMat::from_rows(rows).nullspace()
        };
        let mut out = Vec::new();
        for v in basis_vecs {
            let mut t = Tensor2::zero(dim);
            for (u, &(i, j)) in unknowns.iter().enumerate() {
                if v[u].is_zero() {
                    continue;
                }
                t.add_term(i, j, Scalar::from_rat(v[u].clone()));
                if i != j {
                    t.add_term(j, i, Scalar::from_rat(v[u].clone()));
                }
            }
            out.push(t);
        }
        Ok(out)
    }

    /// Certifies a quadratic Casimir: the symmetric 2-tensor must be
    /// invariant under every adjoint action.
    pub fn casimir_check_tensor(&self, t: &Tensor2) -> bool {
        t == &t.transpose() && self.is_invariant_tensor2(t)
    }

    /// Casimir check through a nondegenerate invariant form: inverts the
    /// form and checks the resulting tensor.
    pub fn casimir_check_form(&self, g: &SymmetricForm) -> Result<bool, LieError> {
        let inv = linalg::scalar_inverse(g.entries()).map_err(|_| LieError::SingularForm)?;
        let dim = self.dim();
        let mut t = Tensor2::zero(dim);
        for (i, row) in inv.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                t.add_term(i, j, v.clone());
            }
        }
        Ok(self.casimir_check_tensor(&t))
    }

    /// Numeric structure constants under bindings.
    pub fn bracket_basis_numeric(
        &self,
        i: usize,
        j: usize,
        b: &Bindings,
    ) -> Result<Vec<f64>, CoeffError> {
        self.bracket_basis(i, j)
            .iter()
            .map(|s| s.substitute_numeric(b))
            .collect()
    }
}

pub fn basis_vector(dim: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); dim];
    v[i] = Scalar::one();
    v
}

#[derive(Debug, Clone, PartialEq)]
pub struct JacobiViolation {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub residual: Vec<Scalar>,
}

/// Symmetric bilinear form with scalar entries.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricForm {
    entries: Vec<Vec<Scalar>>,
}

impl SymmetricForm {
    pub fn zero(dim: usize) -> Self {
        SymmetricForm {
            entries: vec![vec![Scalar::zero(); dim]; dim],
        }
    }

    pub fn from_pairs(dim: usize, pairs: &[(usize, usize, Scalar)]) -> Self {
        let mut f = SymmetricForm::zero(dim);
        for (i, j, s) in pairs {
            f.set(*i, *j, s.clone());
        }
        f
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn set(&mut self, i: usize, j: usize, s: Scalar) {
        self.entries[i][j] = s.clone();
        self.entries[j][i] = s;
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &Vec<Vec<Scalar>> {
        &self.entries
    }

    pub fn det(&self) -> Scalar {
        linalg::scalar_det(&self.entries)
    }

    pub fn scale(&self, s: &Scalar) -> SymmetricForm {
        let dim = self.dim();
        let mut out = SymmetricForm::zero(dim);
        for i in 0..dim {
            for j in 0..dim {
                out.entries[i][j] = &self.entries[i][j] * s;
            }
        }
        out
    }

    /// Flattened upper triangle, for span computations.
    pub fn upper_triangle(&self) -> Vec<Scalar> {
        let dim = self.dim();
        let mut v = Vec::new();
        for i in 0..dim {
            for j in i..dim {
                v.push(self.entries[i][j].clone());
            }
        }
        v
    }

    /// Invariance residuals `g([Xk,Xi],Xj) + g(Xi,[Xk,Xj])` for all triples.
    pub fn invariance_violations(&self, alg: &LieAlgebra) -> Vec<(usize, usize, usize, Scalar)> {
        let dim = self.dim();
        let mut out = Vec::new();
        for k in 0..dim {
            for i in 0..dim {
                for j in i..dim {
                    let mut acc = Scalar::zero();
                    let bki = alg.bracket_basis(k, i);
                    let bkj = alg.bracket_basis(k, j);
                    for l in 0..dim {
                        if !bki[l].is_zero() {
                            acc = &acc + &(&bki[l] * self.get(l, j));
                        }
                        if !bkj[l].is_zero() {
                            acc = &acc + &(&bkj[l] * self.get(i, l));
                        }
                    }
                    if !acc.is_zero() {
                        out.push((k, i, j, acc));
                    }
                }
            }
        }
        out
    }
}

/// Result of the invariant-form solver.
#[derive(Debug, Clone)]
pub struct InvariantForms {
    pub basis: Vec<SymmetricForm>,
    /// Exact nondegeneracy of each basis form.
    pub each_nondegenerate: Vec<bool>,
    /// Nondegeneracy of sampled generic combinations (deterministic sample
    /// coefficients, exact determinants).
    pub generic_sample_nondegenerate: Vec<(Vec<i64>, bool)>,
    /// Whether the determinant vanishes identically as a polynomial in the
    /// combination coefficients (decided exactly on a grid exceeding the
    /// per-variable degree); None when the solution space is too large for
    /// the grid.
    pub identically_degenerate: Option<bool>,
}

impl InvariantForms {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Expresses a given form in this basis, if it lies in the span.
    pub fn express(&self, form: &SymmetricForm) -> Option<Vec<Scalar>> {
        let columns: Vec<Vec<Rat>> = self
            .basis
            .iter()
            .map(|f| {
                f.upper_triangle()
                    .iter()
                    .map(|s| s.as_rational().expect("rational basis form"))
                    .collect()
            })
            .collect();
        linalg::express_in_rational_span(&columns, &form.upper_triangle())
    }
}

fn generic_combination_nondegenerate(basis: &[SymmetricForm]) -> Vec<(Vec<i64>, bool)> {
    if basis.is_empty() {
        return Vec::new();
    }
    let dim = basis[0].dim();
    // Small deterministic coefficient tuples; primes keep combinations
    // generic enough to separate the degenerate locus.
    let coeff_sets: [&[i64]; 5] = [&[1, 2, 3, 5, 7], &[2, 3, 5, 7, 11], &[1, -1, 2, -2, 3], &[3, 1, 4, 1, 5], &[1, 0, 1, 0, 1]];
    coeff_sets
        .iter()
        .map(|set| {
            let coeffs: Vec<i64> = basis.iter().enumerate().map(|(a, _)| set[a % set.len()]).collect();
            let mut combo = SymmetricForm::zero(dim);
            for (a, f) in basis.iter().enumerate() {
                for i in 0..dim {
                    for j in 0..dim {
                        combo.entries[i][j] =
                            &combo.entries[i][j] + &f.entries[i][j].scale(&crate::coeff::rat(coeffs[a], 1));
                    }
                }
            }
            let nondeg = !combo.det().is_zero();
            (coeffs, nondeg)
        })
        .collect()
}

/// Decides whether det(sum_a t_a g_a) vanishes identically in the t_a,
/// by exact evaluation on a grid larger than the per-variable degree.
fn combination_det_identically_zero(basis: &[SymmetricForm]) -> Option<bool> {
    if basis.is_empty() {
        return Some(true);
    }
    let m = basis.len();
    if m > 4 {
        return None;
    }
    let dim = basis[0].dim();
    let grid = dim + 1; // det has degree <= dim in each coefficient
    let mut point = vec![0i64; m];
    loop {
        let mut combo = SymmetricForm::zero(dim);
        for (a, f) in basis.iter().enumerate() {
            if point[a] == 0 {
                continue;
            }
            for i in 0..dim {
                for j in 0..dim {
                    combo.entries[i][j] =
                        &combo.entries[i][j] + &f.entries[i][j].scale(&crate::coeff::rat(point[a], 1));
                }
            }
        }
        if !combo.det().is_zero() {
            return Some(false);
        }
        // Advance the grid point.
        let mut a = 0;
        loop {
            if a == m {
                return Some(true);
            }
            point[a] += 1;
            if point[a] < grid as i64 {
                break;
            }
            point[a] = 0;
            a += 1;
        }
    }
}

/// Linear map between algebras; column `j` holds the target coordinates of
/// the image of the j-th source basis vector.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap {
    source_dim: usize,
    target_dim: usize,
    cols: Vec<Vec<Scalar>>,
}

impl LinearMap {
    pub fn from_columns(target_dim: usize, cols: Vec<Vec<Scalar>>) -> Self {
        assert!(cols.iter().all(|c| c.len() == target_dim));
        LinearMap {
            source_dim: cols.len(),
            target_dim,
            cols,
        }
    }

    pub fn identity(dim: usize) -> Self {
        LinearMap::from_columns(
            dim,
            (0..dim).map(|i| basis_vector(dim, i)).collect(),
        )
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn column(&self, j: usize) -> &[Scalar] {
        &self.cols[j]
    }

    pub fn entry(&self, row: usize, col: usize) -> &Scalar {
        &self.cols[col][row]
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.source_dim);
        let mut out = vec![Scalar::zero(); self.target_dim];
        for (j, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for a in 0..self.target_dim {
                if !self.cols[j][a].is_zero() {
                    out[a] = &out[a] + &(&self.cols[j][a] * c);
                }
            }
        }
        out
    }

    /// Rows-by-columns matrix (target_dim x source_dim).
    pub fn to_matrix(&self) -> Vec<Vec<Scalar>> {
        (0..self.target_dim)
            .map(|a| (0..self.source_dim).map(|j| self.cols[j][a].clone()).collect())
            .collect()
    }

    pub fn det(&self) -> Scalar {
        assert_eq!(self.source_dim, self.target_dim);
        linalg::scalar_det(&self.to_matrix())
    }

    /// Exact inverse; requires a square map whose determinant is a single
    /// invertible term.
    pub fn inverse(&self) -> Result<LinearMap, LieError> {
        if self.source_dim != self.target_dim {
            return Err(LieError::DimensionMismatch {
                expected: self.source_dim,
                got: self.target_dim,
            });
        }
        let inv = linalg::scalar_inverse(&self.to_matrix())
            .map_err(|e| LieError::NotIsomorphism(format!("matrix not invertible: {e}")))?;
        let n = self.source_dim;
        let cols = (0..n)
            .map(|j| (0..n).map(|a| inv[a][j].clone()).collect())
            .collect();
        Ok(LinearMap::from_columns(n, cols))
    }

    pub fn compose(&self, inner: &LinearMap) -> LinearMap {
        assert_eq!(inner.target_dim, self.source_dim);
        let cols = (0..inner.source_dim)
            .map(|j| self.apply(inner.column(j)))
            .collect();
        LinearMap::from_columns(self.target_dim, cols)
    }

    pub fn substitute_param(&self, name: &str, value: &Scalar) -> Result<LinearMap, CoeffError> {
        let cols: Result<Vec<Vec<Scalar>>, CoeffError> = self
            .cols
            .iter()
            .map(|c| c.iter().map(|s| s.substitute_param(name, value)).collect())
            .collect();
        Ok(LinearMap {
            source_dim: self.source_dim,
            target_dim: self.target_dim,
            cols: cols?,
        })
    }

    /// Numeric matrix under bindings.
    pub fn to_matrix_numeric(&self, b: &Bindings) -> Result<Vec<Vec<f64>>, CoeffError> {
        (0..self.target_dim)
            .map(|a| {
                (0..self.source_dim)
                    .map(|j| self.cols[j][a].substitute_numeric(b))
                    .collect()
            })
            .collect()
    }
}

/// Declared parameter-domain constraints for sampling.
#[derive(Debug, Clone, PartialEq)]
pub enum Constraint {
    Positive(String),
    Negative(String),
    NonZero(String),
    /// The product of the two parameters is positive.
    ProductPositive(String, String),
    /// The parameter lies strictly between the two bounds.
    OpenInterval(String, f64, f64),
}

impl Constraint {
    pub fn satisfied(&self, b: &Bindings) -> bool {
        match self {
            Constraint::Positive(p) => b.get(p).map(|v| v > 0.0).unwrap_or(false),
            Constraint::Negative(p) => b.get(p).map(|v| v < 0.0).unwrap_or(false),
            Constraint::NonZero(p) => b.get(p).map(|v| v != 0.0).unwrap_or(false),
            Constraint::ProductPositive(p, q) => match (b.get(p), b.get(q)) {
                (Some(a), Some(c)) => a * c > 0.0,
                _ => false,
            },
            Constraint::OpenInterval(p, lo, hi) => {
                b.get(p).map(|v| v > *lo && v < *hi).unwrap_or(false)
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Constraint::Positive(p) => format!("{p} > 0"),
            Constraint::Negative(p) => format!("{p} < 0"),
            Constraint::NonZero(p) => format!("{p} != 0"),
            Constraint::ProductPositive(p, q) => format!("{p}*{q} > 0"),
            Constraint::OpenInterval(p, lo, hi) => format!("{lo} < {p} < {hi}"),
        }
    }
}

/// Deterministic parameter bindings satisfying the constraints: a fixed
/// ladder of magnitudes, sign-adjusted per parameter.
pub fn sample_bindings(params: &[String], constraints: &[Constraint], count: usize) -> Vec<Bindings> {
    let magnitudes = [0.5, 1.0, 2.0, 3.0, 1.0 / 3.0, 2.5, 0.25, 4.0];
    let mut out = Vec::new();
    for s in 0..count {
        let mut b = Bindings::new();
        for (pi, p) in params.iter().enumerate() {
            let mag = magnitudes[(s + pi) % magnitudes.len()];
            let negative = constraints.iter().any(|c| matches!(c, Constraint::Negative(q) if q == p));
            b.set(p, if negative { -mag } else { mag });
        }
        // Fix up product constraints: give both parameters the same sign.
        for c in constraints {
            if let Constraint::ProductPositive(p, q) = c {
                let vp = b.get(p).unwrap_or(1.0);
                let vq = b.get(q).unwrap_or(1.0);
                if vp * vq <= 0.0 {
                    b.set(q, -vq);
                }
            }
        }
        // Fold out-of-range values into open intervals, keeping the ladder
        // injective via mag -> mag/(1+mag).
        for c in constraints {
            if let Constraint::OpenInterval(p, lo, hi) = c {
                if !c.satisfied(&b) {
                    let mag = b.get(p).unwrap_or(1.0).abs();
                    b.set(p, lo + (hi - lo) * mag / (1.0 + mag));
                }
            }
        }
        debug_assert!(constraints.iter().all(|c| c.satisfied(&b)));
        out.push(b);
    }
    out
}

/// Verifies that a linear map is a Lie algebra isomorphism: exactly over
/// scalars, and numerically at sampled parameter bindings when the data is
/// parametric.
pub fn is_isomorphism(
    map: &LinearMap,
    source: &LieAlgebra,
    target: &LieAlgebra,
    constraints: &[Constraint],
) -> Result<(), LieError> {
    if map.source_dim() != source.dim() || map.target_dim() != target.dim() {
        return Err(LieError::DimensionMismatch {
            expected: source.dim(),
            got: map.source_dim(),
        });
    }
    if source.dim() != target.dim() {
        return Err(LieError::DimensionMismatch {
            expected: source.dim(),
            got: target.dim(),
        });
    }
    // Exact homomorphism property on basis pairs.
    for i in 0..source.dim() {
        for j in i + 1..source.dim() {
            let lhs = map.apply(&source.bracket_basis(i, j));
            let rhs = target.bracket(map.column(i), map.column(j));
            if lhs != rhs {
                return Err(LieError::NotIsomorphism(format!(
                    "bracket of basis pair ({}, {}) is not preserved",
                    source.name(i),
                    source.name(j)
                )));
            }
        }
    }
    // Exact invertibility when the determinant is decisive.
    let det = map.det();
    if det.is_zero() {
        return Err(LieError::NotIsomorphism("determinant is zero".into()));
    }
    // Numeric confirmation at sampled bindings for parametric data.
    let mut params: std::collections::BTreeSet<String> = std::collections::BTreeSet::new();
    for col in 0..map.source_dim() {
        for s in map.column(col) {
            params.extend(s.free_params());
        }
    }
    params.extend(source.free_params());
    params.extend(target.free_params());
    params.extend(det.free_params());
    if !params.is_empty() {
        let params: Vec<String> = params.into_iter().collect();
        for b in sample_bindings(&params, constraints, 5) {
            let d = det.substitute_numeric(&b)?;
            if d.abs() <= 1e-10 {
                return Err(LieError::NotIsomorphism(format!(
                    "determinant vanishes numerically at a sampled binding ({d:.3e})"
                )));
            }
            let m = map.to_matrix_numeric(&b)?;
            for i in 0..source.dim() {
                for j in i + 1..source.dim() {
                    let src = source.bracket_basis_numeric(i, j, &b)?;
                    // lhs = map(src)
                    let mut lhs = vec![0.0; target.dim()];
                    for (col, c) in src.iter().enumerate() {
                        for a in 0..target.dim() {
                            lhs[a] += m[a][col] * c;
                        }
                    }
                    // rhs = [map(e_i), map(e_j)]_target numerically
                    let mut rhs = vec![0.0; target.dim()];
                    for ii in 0..target.dim() {
                        if m[ii][i] == 0.0 {
                            continue;
                        }
                        for jj in 0..target.dim() {
                            if m[jj][j] == 0.0 || ii == jj {
                                continue;
                            }
                            let br = target.bracket_basis_numeric(ii, jj, &b)?;
                            for a in 0..target.dim() {
                                rhs[a] += m[ii][i] * m[jj][j] * br[a];
                            }
                        }
                    }
                    for a in 0..target.dim() {
                        if (lhs[a] - rhs[a]).abs() > 1e-10 {
                            return Err(LieError::NotIsomorphism(format!(
                                "numeric bracket mismatch at pair ({}, {}), component {}",
                                source.name(i),
                                source.name(j),
                                target.name(a)
                            )));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat;

    /// sl(2,R) in the ladder basis: [H, E] = 2E, [H, F] = -2F, [E, F] = H.
    fn sl2() -> LieAlgebra {
        LieAlgebra::new(
            &["H", "E", "F"],
            &[
                (0, 1, 1, Scalar::from_int(2)),
                (0, 2, 2, Scalar::from_int(-2)),
                (1, 2, 0, Scalar::one()),
            ],
        )
    }

    #[test]
    fn sl2_jacobi_holds() {
        assert!(sl2().jacobi_check().is_empty());
    }

    #[test]
    fn perturbed_bracket_breaks_jacobi() {
        let bad = LieAlgebra::new(
            &["H", "E", "F"],
            &[
                (0, 1, 1, Scalar::from_int(2)),
                (0, 2, 2, Scalar::from_int(-2)),
                (1, 2, 0, Scalar::one()),
                (1, 2, 1, Scalar::one()),
            ],
        );
        assert!(!bad.jacobi_check().is_empty());
    }

    #[test]
    fn sl2_killing_form_invariant() {
        let forms = sl2().invariant_symmetric_forms().unwrap();
        assert_eq!(forms.basis.len(), 1);
        assert!(forms.each_nondegenerate[0]);
        assert_eq!(forms.identically_degenerate, Some(false));
        assert!(forms.basis[0].invariance_violations(&sl2()).is_empty());
    }

    #[test]
    fn ad_bivector_derivation() {
        let alg = sl2();
        // ad_H(E ^ F) = [H,E]^F + E^[H,F] = 2E^F - 2E^F = 0
        let b = Bivector::from_terms(3, &[(1, 2, Scalar::one())]);
        assert!(alg.ad_bivector(0, &b).is_zero());
    }

    #[test]
    fn isomorphism_detects_scaling() {
        let alg = sl2();
        let id = LinearMap::identity(3);
        assert!(is_isomorphism(&id, &alg, &alg, &[]).is_ok());
        // Scaling E by 2 and F by 1/2 preserves all brackets.
        let good = LinearMap::from_columns(
            3,
            vec![
                basis_vector(3, 0),
                basis_vector(3, 1).iter().map(|s| s.scale(&rat(2, 1))).collect(),
                basis_vector(3, 2).iter().map(|s| s.scale(&rat(1, 2))).collect(),
            ],
        );
        assert!(is_isomorphism(&good, &alg, &alg, &[]).is_ok());
        // Scaling only E breaks [E, F] = H.
        let bad = LinearMap::from_columns(
            3,
            vec![
                basis_vector(3, 0),
                basis_vector(3, 1).iter().map(|s| s.scale(&rat(2, 1))).collect(),
                basis_vector(3, 2),
            ],
        );
        assert!(is_isomorphism(&bad, &alg, &alg, &[]).is_err());
    }

    #[test]
    fn inverse_round_trip() {
        let m = LinearMap::from_columns(
            2,
            vec![
                vec![Scalar::one(), Scalar::one()],
                vec![Scalar::zero(), Scalar::param("lambda")],
            ],
        );
        let inv = m.inverse().unwrap();
        let id = m.compose(&inv);
        assert_eq!(id, LinearMap::identity(2));
    }
}
