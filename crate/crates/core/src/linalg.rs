//! Exact linear algebra: Gaussian elimination over the rationals and
//! small determinant/adjugate computations over the full scalar ring.

use crate::coeff::{Rat, Scalar};
use num_traits::{One, Zero};

/// Dense rational matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rat>,
}

impl RatMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMat {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let mut m = RatMat::zeros(r, c);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    /// Reduced row echelon form; returns the pivot column per pivot row.
    pub fn rref(mut self) -> (RatMat, Vec<usize>) {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for j in 0..self.cols {
                    let a = self.get(row, j).clone();
                    let b = self.get(p, j).clone();
                    self.set(row, j, b);
                    self.set(p, j, a);
                }
            }
            let inv = self.get(row, col).clone().recip();
            for j in 0..self.cols {
                let v = self.get(row, j) * &inv;
                self.set(row, j, v);
            }
            for r in 0..self.rows {
                if r != row && !self.get(r, col).is_zero() {
                    let f = self.get(r, col).clone();
                    for j in 0..self.cols {
                        let v = self.get(r, j) - &(self.get(row, j) * &f);
                        self.set(r, j, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (self, pivots)
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().1.len()
    }

    /// Basis of the right nullspace.
    pub fn nullspace(&self) -> Vec<Vec<Rat>> {
        let (r, pivots) = self.clone().rref();
        let mut basis = Vec::new();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![Rat::zero(); self.cols];
            v[free] = Rat::one();
            for (prow, &pcol) in pivots.iter().enumerate() {
                v[pcol] = -r.get(prow, free).clone();
            }
            basis.push(v);
        }
        basis
    }

    pub fn det(&self) -> Rat {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let mut m = self.clone();
        let n = m.rows;
        let mut det = Rat::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m.get(r, col).is_zero()) else {
                return Rat::zero();
            };
            if p != col {
                det = -det;
                for j in 0..n {
                    let a = m.get(col, j).clone();
                    let b = m.get(p, j).clone();
                    m.set(col, j, b);
                    m.set(p, j, a);
                }
            }
            let pivot = m.get(col, col).clone();
            det *= &pivot;
            let inv = pivot.recip();
            for r in col + 1..n {
                if !m.get(r, col).is_zero() {
                    let f = m.get(r, col) * &inv;
                    for j in col..n {
                        let v = m.get(r, j) - &(m.get(col, j) * &f);
                        m.set(r, j, v);
                    }
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<RatMat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = RatMat::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Rat::one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        let mut inv = RatMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Some(inv)
    }

    pub fn mul(&self, other: &RatMat) -> RatMat {
        assert_eq!(self.cols, other.rows);
        let mut out = RatMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.get(i, k).is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + &(self.get(i, k) * other.get(k, j));
                    out.set(i, j, v);
                }
            }
        }
        out
    }
}

/// Writes `target` as an exact scalar-coefficient combination of the given
/// rational column vectors, or reports that no such combination exists.
/// The columns must be linearly independent.
pub fn express_in_rational_span(
    columns: &[Vec<Rat>],
    target: &[Scalar],
) -> Option<Vec<Scalar>> {
    let m = columns.len();
    if m == 0 {
        return if target.iter().all(|s| s.is_zero()) {
            Some(Vec::new())
        } else {
            None
        };
    }
    let n = columns[0].len();
    assert!(columns.iter().all(|c| c.len() == n));
    assert_eq!(target.len(), n);
    // Independent rows of the column matrix = pivot columns of its transpose.
    let transpose = RatMat::from_rows(
        (0..m)
            .map(|a| (0..n).map(|i| columns[a][i].clone()).collect())
            .collect(),
    );
    let (_, pivot_rows) = transpose.rref();
    if pivot_rows.len() < m {
        return None; // dependent columns: coefficients would not be unique
    }
    let square = RatMat::from_rows(
        pivot_rows
            .iter()
            .map(|&i| (0..m).map(|a| columns[a][i].clone()).collect())
            .collect(),
    );
    let inv = square.inverse()?;
    let coeffs: Vec<Scalar> = (0..m)
        .map(|a| {
            let mut acc = Scalar::zero();
            for (b, &i) in pivot_rows.iter().enumerate() {
                acc = &acc + &target[i].scale(inv.get(a, b));
            }
            acc
        })
        .collect();
    // Verify the combination reproduces the target everywhere.
    for i in 0..n {
        let mut acc = Scalar::zero();
        for a in 0..m {
            acc = &acc + &coeffs[a].scale(&columns[a][i]);
        }
        if acc != target[i] {
            return None;
        }
    }
    Some(coeffs)
}

/// Determinant of a matrix with scalar entries, by cofactor expansion along
/// the row with the fewest nonzero entries. Intended for the small matrices
/// (dimension at most ten) this crate works with.
pub fn scalar_det(m: &[Vec<Scalar>]) -> Scalar {
    let n = m.len();
    assert!(m.iter().all(|r| r.len() == n));
    let cols: Vec<usize> = (0..n).collect();
    scalar_det_rec(m, &(0..n).collect::<Vec<_>>(), &cols)
}

fn scalar_det_rec(m: &[Vec<Scalar>], rows: &[usize], cols: &[usize]) -> Scalar {
    let n = rows.len();
    if n == 0 {
        return Scalar::one();
    }
    if n == 1 {
        return m[rows[0]][cols[0]].clone();
    }
    // Pick the row (within the submatrix) with the fewest nonzeros.
    let (ri, _) = rows
        .iter()
        .enumerate()
        .map(|(ri, &r)| (ri, cols.iter().filter(|&&c| !m[r][c].is_zero()).count()))
        .min_by_key(|&(_, cnt)| cnt)
        .unwrap();
    let r = rows[ri];
    let sub_rows: Vec<usize> = rows
        .iter()
        .copied()
        .filter(|&x| x != r)
        .collect();
    let mut acc = Scalar::zero();
    for (ci, &c) in cols.iter().enumerate() {
        let entry = &m[r][c];
        if entry.is_zero() {
            continue;
        }
        let sub_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let minor = scalar_det_rec(m, &sub_rows, &sub_cols);
        let signed = if (ri + ci) % 2 == 0 {
            &minor * entry
        } else {
            -&(&minor * entry)
        };
        acc = &acc + &signed;
    }
    acc
}

/// Inverse of a scalar matrix via the adjugate. Fails when the determinant
/// is zero or is a sum (only single-term scalars are invertible exactly).
pub fn scalar_inverse(m: &[Vec<Scalar>]) -> Result<Vec<Vec<Scalar>>, crate::coeff::CoeffError> {
    let n = m.len();
    let det = scalar_det(m);
    let det_inv = det.inverse()?;
    let all_rows: Vec<usize> = (0..n).collect();
    let mut inv = vec![vec![Scalar::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            // adjugate: inv[i][j] = cofactor(j, i) / det
            let sub_rows: Vec<usize> = all_rows.iter().copied().filter(|&r| r != j).collect();
            let sub_cols: Vec<usize> = all_rows.iter().copied().filter(|&c| c != i).collect();
            let minor = scalar_det_rec(m, &sub_rows, &sub_cols);
            let signed = if (i + j) % 2 == 0 { minor } else { -&minor };
            inv[i][j] = &signed * &det_inv;
        }
    }
    Ok(inv)
}

pub fn scalar_mat_mul(a: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let n = a.len();
    let k = b.len();
    let m = b.first().map(|r| r.len()).unwrap_or(0);
    assert!(a.iter().all(|r| r.len() == k));
    let mut out = vec![vec![Scalar::zero(); m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                if b[l][j].is_zero() {
                    continue;
                }
                out[i][j] = &out[i][j] + &(&a[i][l] * &b[l][j]);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat;

    #[test]
    fn rref_nullspace() {
        // x + y + z = 0 has a 2-dimensional nullspace.
        let m = RatMat::from_rows(vec![vec![rat(1, 1), rat(1, 1), rat(1, 1)]]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            let s = v.iter().fold(Rat::zero(), |a, b| a + b);
            assert!(s.is_zero());
        }
    }

    #[test]
    fn det_and_inverse() {
        let m = RatMat::from_rows(vec![
            vec![rat(2, 1), rat(1, 1)],
            vec![rat(1, 1), rat(1, 1)],
        ]);
        assert_eq!(m.det(), rat(1, 1));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), RatMat::identity(2));
    }

    #[test]
    fn scalar_det_symbolic() {
        let l = Scalar::param("lambda");
        let m = vec![
            vec![l.clone(), Scalar::zero()],
            vec![Scalar::one(), l.clone()],
        ];
        assert_eq!(scalar_det(&m), &l * &l);
        let inv = scalar_inverse(&m).unwrap();
        let prod = scalar_mat_mul(&m, &inv);
        assert!(prod[0][0].is_one() && prod[1][1].is_one());
        assert!(prod[0][1].is_zero() && prod[1][0].is_zero());
    }

    #[test]
    fn express_span() {
        let cols = vec![
            vec![rat(1, 1), rat(0, 1), rat(1, 1)],
            vec![rat(0, 1), rat(1, 1), rat(1, 1)],
        ];
        let lam = Scalar::param("lambda");
        let target = vec![lam.clone(), Scalar::one(), &lam + &Scalar::one()];
        let coeffs = express_in_rational_span(&cols, &target).unwrap();
        assert_eq!(coeffs[0], lam);
        assert_eq!(coeffs[1], Scalar::one());
        let bad = vec![Scalar::one(), Scalar::zero(), Scalar::zero()];
        assert!(express_in_rational_span(&cols, &bad).is_none());
    }
}
