//! Matrix realizations of the two kinematical groups: exponential charts,
//! left and right invariant vector fields, Sklyanin brackets, and polynomial
//! fits of the Poisson structures induced on the homogeneous coordinates.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::coeff::{rat_to_f64, Bindings, CoeffError};
use crate::doubles::{extended_poincare11, poincare21};
use crate::liealg::LieAlgebra;
use crate::tensor::Bivector;

#[derive(Debug, Error)]
pub enum PlgroupError {
    #[error("chart jacobian is singular: solve residual {residual:e}")]
    SingularChart { residual: f64 },
    #[error("projection onto the homogeneous coordinates is not closed for verdict \"{0}\"")]
    NotCoisotropic(String),
    #[error("bracket fit residual {residual:e} exceeds tolerance at sample {worst:?}")]
    FitResidualExceeded { residual: f64, worst: Vec<f64> },
}

/// Orientation of left-field commutators against the algebra bracket,
/// calibrated once numerically and then frozen.
pub const LEFT_FIELD_BRACKET_SIGN: f64 = 1.0;

/// Generator matrices alongside the algebra they represent. Construction
/// checks that commutators reproduce every structure constant.
#[derive(Debug, Clone)]
pub struct MatrixRep {
    pub algebra: LieAlgebra,
    pub mats: Vec<DMatrix<f64>>,
}

impl MatrixRep {
    pub fn new(algebra: LieAlgebra, mats: Vec<DMatrix<f64>>) -> Self {
        assert_eq!(algebra.dim(), mats.len());
        let rep = MatrixRep { algebra, mats };
        let dev = rep.bracket_fidelity();
        assert!(dev < 1e-12, "representation drifts from the brackets: {dev:e}");
        rep
    }

    pub fn dim_rep(&self) -> usize {
        self.mats[0].nrows()
    }

    /// Largest deviation between a represented bracket and the matrix
    /// commutator, over all generator pairs.
    pub fn bracket_fidelity(&self) -> f64 {
        let none = Bindings::new();
        let n = self.mats.len();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let comm = &self.mats[i] * &self.mats[j] - &self.mats[j] * &self.mats[i];
                let mut expected = DMatrix::zeros(self.dim_rep(), self.dim_rep());
                for (k, c) in self.algebra.bracket_basis(i, j).iter().enumerate() {
                    let v = c.substitute_numeric(&none).expect("constant brackets");
                    if v != 0.0 {
                        expected += &self.mats[k] * v;
                    }
                }
                worst = worst.max((comm - expected).amax());
            }
        }
        worst
    }
}

/// Exponential coordinates on the group: one factor per generator, in a
/// fixed order, with a distinguished homogeneous subset.
#[derive(Debug, Clone)]
pub struct Chart {
    pub coords: Vec<&'static str>,
    /// Algebra index of the generator behind each exponential factor.
    pub factors: Vec<usize>,
    /// Positions into `coords` of the homogeneous coordinates, in the order
    /// the quotient space lists them.
    pub homogeneous: Vec<usize>,
}

impl Chart {
    pub fn new(coords: Vec<&'static str>, factors: Vec<usize>, homogeneous: Vec<usize>) -> Self {
        assert_eq!(coords.len(), factors.len());
        let mut seen = factors.clone();
        seen.sort_unstable();
        assert_eq!(seen, (0..coords.len()).collect::<Vec<_>>());
        assert!(homogeneous.iter().all(|&p| p < coords.len()));
        Chart {
            coords,
            factors,
            homogeneous,
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

pub fn poincare21_rep() -> MatrixRep {
    let mut j = DMatrix::zeros(4, 4);
    j[(2, 3)] = -1.0;
    j[(3, 2)] = 1.0;
    let mut k1 = DMatrix::zeros(4, 4);
    k1[(1, 2)] = 1.0;
    k1[(2, 1)] = 1.0;
    let mut k2 = DMatrix::zeros(4, 4);
    k2[(1, 3)] = 1.0;
    k2[(3, 1)] = 1.0;
    let mut p0 = DMatrix::zeros(4, 4);
    p0[(1, 0)] = 1.0;
    let mut p1 = DMatrix::zeros(4, 4);
    p1[(2, 0)] = 1.0;
    let mut p2 = DMatrix::zeros(4, 4);
    p2[(3, 0)] = 1.0;
    MatrixRep::new(poincare21(), vec![j, k1, k2, p0, p1, p2])
}

pub fn extended_rep() -> MatrixRep {
    let mut k = DMatrix::zeros(4, 4);
    k[(1, 2)] = 1.0;
    k[(2, 1)] = 1.0;
    let mut p0 = DMatrix::zeros(4, 4);
    p0[(1, 0)] = 1.0;
    p0[(3, 2)] = 1.0;
    let mut p1 = DMatrix::zeros(4, 4);
    p1[(2, 0)] = 1.0;
    p1[(3, 1)] = -1.0;
    let mut f = DMatrix::zeros(4, 4);
    f[(3, 0)] = -2.0;
    MatrixRep::new(extended_poincare11(), vec![k, p0, p1, f])
}

/// Translations first, then boosts, then the rotation; the translation
/// coordinates descend to the homogeneous spacetime.
pub fn poincare21_chart() -> Chart {
    Chart::new(
        vec!["x0", "x1", "x2", "xi1", "xi2", "theta"],
        vec![3, 4, 5, 1, 2, 0],
        vec![0, 1, 2],
    )
}

/// Central coordinate first; the quotient keeps the translations and the
/// central coordinate, dropping only the boost.
pub fn extended_chart() -> Chart {
    Chart::new(
        vec!["phi", "x0", "x1", "xi"],
        vec![3, 1, 2, 0],
        vec![1, 2, 0],
    )
}

/// Ordered product of the chart's exponential factors at `q`.
pub fn group_element(chart: &Chart, rep: &MatrixRep, q: &[f64]) -> DMatrix<f64> {
    assert_eq!(q.len(), chart.dim());
    let n = rep.dim_rep();
    let mut g = DMatrix::identity(n, n);
    for (qk, &gi) in q.iter().zip(&chart.factors) {
        g *= (&rep.mats[gi] * *qk).exp();
    }
    g
}

fn flatten(m: &DMatrix<f64>) -> DVector<f64> {
    let (rows, cols) = m.shape();
    DVector::from_fn(rows * cols, |idx, _| m[(idx / cols, idx % cols)])
}

/// Derivative of the group element with respect to each chart coordinate,
/// one flattened matrix per column. Exact product-rule differentiation of
/// the factor product, no finite differences.
pub fn chart_jacobian(chart: &Chart, rep: &MatrixRep, q: &[f64]) -> DMatrix<f64> {
    assert_eq!(q.len(), chart.dim());
    let m = chart.dim();
    let n = rep.dim_rep();
    let factors: Vec<DMatrix<f64>> = q
        .iter()
        .zip(&chart.factors)
        .map(|(qk, &gi)| (&rep.mats[gi] * *qk).exp())
        .collect();
    let mut jac = DMatrix::zeros(n * n, m);
    for k in 0..m {
        let mut col = DMatrix::identity(n, n);
        for f in factors.iter().take(k) {
            col *= f;
        }
        // The generator commutes with its own exponential, so the factor at
        // k may stay on either side.
        col *= &rep.mats[chart.factors[k]];
        for f in factors.iter().skip(k) {
            col *= f;
        }
        jac.set_column(k, &flatten(&col));
    }
    jac
}

/// Left and right invariant vector fields at `q`, as coordinate components:
/// rows follow the chart, columns the algebra generators. Left fields push
/// the generator in from the right of the group element, right fields from
/// the left.
pub fn invariant_fields(
    chart: &Chart,
    rep: &MatrixRep,
    q: &[f64],
) -> Result<(DMatrix<f64>, DMatrix<f64>), PlgroupError> {
    let m = chart.dim();
    assert_eq!(m, rep.mats.len());
    let jac = chart_jacobian(chart, rep, q);
    let g = group_element(chart, rep, q);
    let svd = jac.clone().svd(true, true);
    let mut left = DMatrix::zeros(m, m);
    let mut right = DMatrix::zeros(m, m);
    for i in 0..m {
        for (is_left, out) in [(true, &mut left), (false, &mut right)] {
            let rhs = if is_left {
                flatten(&(&g * &rep.mats[i]))
            } else {
                flatten(&(&rep.mats[i] * &g))
            };
            let sol = svd.solve(&rhs, 1e-13).expect("svd factors requested");
            let residual = (&jac * &sol - &rhs).amax();
            if residual > 1e-9 {
                return Err(PlgroupError::SingularChart { residual });
            }
            out.set_column(i, &sol);
        }
    }
    Ok((left, right))
}

/// Numeric antisymmetric matrix of an r-matrix, parameters bound.
pub fn numeric_r(r: &Bivector, b: &Bindings) -> Result<DMatrix<f64>, CoeffError> {
    let n = r.dim();
    let mut m = DMatrix::zeros(n, n);
    for (&(i, j), c) in r.terms() {
        let v = c.substitute_numeric(b)?;
        m[(i, j)] += v;
        m[(j, i)] -= v;
    }
    Ok(m)
}

/// Poisson bracket of the coordinate functions at positions `a`, `b` under
/// the structure r: sum of r^{ij} (L_i^a L_j^b - R_i^a R_j^b). Orientation
/// is fixed so the split case reproduces the rotation-algebra brackets on
/// the spatial coordinates.
pub fn sklyanin_eval(
    r: &DMatrix<f64>,
    chart: &Chart,
    rep: &MatrixRep,
    q: &[f64],
    a: usize,
    b: usize,
) -> Result<f64, PlgroupError> {
    let (left, right) = invariant_fields(chart, rep, q)?;
    Ok(bracket_value(r, &left, &right, a, b))
}

// Upper-triangle accumulation keeps antisymmetry exact: each term cancels
// within itself when a == b or under an a/b swap.
fn bracket_value(r: &DMatrix<f64>, left: &DMatrix<f64>, right: &DMatrix<f64>, a: usize, b: usize) -> f64 {
    let m = left.nrows();
    let mut acc = 0.0;
    for i in 0..m {
        for j in (i + 1)..m {
            let c = r[(i, j)];
            if c != 0.0 {
                let l = left[(a, i)] * left[(b, j)] - left[(a, j)] * left[(b, i)];
                let rr = right[(a, i)] * right[(b, j)] - right[(a, j)] * right[(b, i)];
                acc += c * (l - rr);
            }
        }
    }
    acc
}

/// Brackets of the homogeneous coordinates as fitted polynomials; pair
/// indices point into `coords`, coefficient vectors align with `monomials`.
#[derive(Debug, Clone)]
pub struct PoissonTable {
    pub coords: Vec<String>,
    pub monomials: Vec<Vec<u32>>,
    pub brackets: Vec<(usize, usize, Vec<f64>)>,
    pub residual: f64,
}

fn degree_two_monomials(vars: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![0; vars]];
    for i in 0..vars {
        let mut m = vec![0; vars];
        m[i] = 1;
        out.push(m);
    }
    for i in 0..vars {
        for j in i..vars {
            let mut m = vec![0; vars];
            m[i] += 1;
            m[j] += 1;
            out.push(m);
        }
    }
    out
}

fn eval_monomial(z: &[f64], m: &[u32]) -> f64 {
    z.iter()
        .zip(m)
        .map(|(zi, &p)| zi.powi(p as i32))
        .product()
}

/// Samples the Sklyanin brackets of the homogeneous coordinates and fits
/// each one by a polynomial of degree at most two in those coordinates
/// alone. A residual above 1e-8 means the bracket leaks into the group
/// directions and the projection does not close. Degree is capped, never
/// raised silently; sampling is uniform on [-1, 1] per coordinate and
/// deterministic in `seed`. Fewer than 50 requested samples are raised
/// to 50.
pub fn poisson_fit(
    r: &DMatrix<f64>,
    chart: &Chart,
    rep: &MatrixRep,
    verdict: &str,
    samples: usize,
    seed: u64,
) -> Result<PoissonTable, PlgroupError> {
    if verdict == "neither" {
        return Err(PlgroupError::NotCoisotropic(verdict.to_string()));
    }
    let n = samples.max(50);
    let m = chart.dim();
    let h = chart.homogeneous.len();
    let monomials = degree_two_monomials(h);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..m).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();

    let mut design = DMatrix::zeros(n, monomials.len());
    let mut values: Vec<DVector<f64>> = vec![DVector::zeros(n); h * (h - 1) / 2];
    for (s, q) in points.iter().enumerate() {
        let (left, right) = invariant_fields(chart, rep, q)?;
        let z: Vec<f64> = chart.homogeneous.iter().map(|&p| q[p]).collect();
        for (c, mono) in monomials.iter().enumerate() {
            design[(s, c)] = eval_monomial(&z, mono);
        }
        let mut pair = 0;
        for u in 0..h {
            for v in (u + 1)..h {
                let (a, b) = (chart.homogeneous[u], chart.homogeneous[v]);
                values[pair][s] = bracket_value(r, &left, &right, a, b);
                pair += 1;
            }
        }
    }

    let svd = design.clone().svd(true, true);
    let mut brackets = Vec::new();
    let mut residual = 0.0f64;
    let mut worst = points[0].clone();
    let mut pair = 0;
    for u in 0..h {
        for v in (u + 1)..h {
            let sol = svd.solve(&values[pair], 1e-13).expect("svd factors requested");
            let errs = &design * &sol - &values[pair];
            for (s, e) in errs.iter().enumerate() {
                if e.abs() > residual {
                    residual = e.abs();
                    worst = points[s].clone();
                }
            }
            let coeffs = sol
                .iter()
                .map(|&c| if c.abs() < 1e-8 { 0.0 } else { c })
                .collect();
            brackets.push((u, v, coeffs));
            pair += 1;
        }
    }
    if residual > 1e-8 {
        return Err(PlgroupError::FitResidualExceeded { residual, worst });
    }
    Ok(PoissonTable {
        coords: chart
            .homogeneous
            .iter()
            .map(|&p| chart.coords[p].to_string())
            .collect(),
        monomials,
        brackets,
        residual,
    })
}

type Poly = BTreeMap<Vec<u32>, BigRational>;

/// Nearest low-denominator rational within 1e-8, by continued fractions;
/// exact binary expansion when nothing small is that close.
fn snap_rational(x: f64) -> BigRational {
    if x == 0.0 {
        return BigRational::zero();
    }
    let target = x.abs();
    let mut v = target;
    let (mut p0, mut q0, mut p1, mut q1) = (1i64, 0i64, v.floor() as i64, 1i64);
    loop {
        let approx = p1 as f64 / q1 as f64;
        if (approx - target).abs() < 1e-8 {
            let num = if x < 0.0 { -p1 } else { p1 };
            return BigRational::new(BigInt::from(num), BigInt::from(q1));
        }
        let frac = v - v.floor();
        if frac <= f64::EPSILON || q1 > 1_000_000 {
            break;
        }
        v = 1.0 / frac;
        let a = v.floor() as i64;
        let p2 = a * p1 + p0;
        let q2 = a * q1 + q0;
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
    BigRational::from_float(x).expect("finite coefficient")
}

fn poly_add(acc: &mut Poly, mono: Vec<u32>, c: BigRational) {
    use std::collections::btree_map::Entry;
    match acc.entry(mono) {
        Entry::Vacant(e) => {
            if !c.is_zero() {
                e.insert(c);
            }
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// Bracket of the variable at `a` with a polynomial, by the Leibniz rule
/// over a table of pairwise variable brackets.
fn bracket_with_poly(pairs: &BTreeMap<(usize, usize), Poly>, h: usize, a: usize, p: &Poly) -> Poly {
    let mut out = Poly::new();
    for (mono, coef) in p {
        for b in 0..h {
            if mono[b] == 0 || a == b {
                continue;
            }
            let mut reduced = mono.clone();
            reduced[b] -= 1;
            let factor = coef * BigRational::from_integer(BigInt::from(mono[b]));
            let (key, sign) = if a < b { ((a, b), 1) } else { ((b, a), -1) };
            if let Some(zz) = pairs.get(&key) {
                for (m2, c2) in zz {
                    let mut prod = reduced.clone();
                    for (t, e) in prod.iter_mut().zip(m2) {
                        *t += e;
                    }
                    let term = &factor * c2 * BigRational::from_integer(BigInt::from(sign));
                    poly_add(&mut out, prod, term);
                }
            }
        }
    }
    out
}

/// Largest coefficient left in the cyclic bracket sums of the fitted table,
/// computed exactly after snapping the coefficients to rationals. Zero means
/// the table is a Poisson bracket.
pub fn jacobi_poisson(table: &PoissonTable) -> f64 {
    let h = table.coords.len();
    let mut pairs: BTreeMap<(usize, usize), Poly> = BTreeMap::new();
    for (a, b, coeffs) in &table.brackets {
        let mut p = Poly::new();
        for (mono, &c) in table.monomials.iter().zip(coeffs) {
            if c != 0.0 {
                poly_add(&mut p, mono.clone(), snap_rational(c));
            }
        }
        pairs.insert((*a, *b), p);
    }
    let neg = |p: &Poly| -> Poly {
        p.iter().map(|(m, c)| (m.clone(), -c)).collect()
    };
    let mut max = BigRational::zero();
    for a in 0..h {
        for b in (a + 1)..h {
            for c in (b + 1)..h {
                let bc = pairs.get(&(b, c)).cloned().unwrap_or_default();
                let ab = pairs.get(&(a, b)).cloned().unwrap_or_default();
                let ca = neg(&pairs.get(&(a, c)).cloned().unwrap_or_default());
                let mut sum = bracket_with_poly(&pairs, h, a, &bc);
                for (m, v) in bracket_with_poly(&pairs, h, b, &ca) {
                    poly_add(&mut sum, m, v);
                }
                for (m, v) in bracket_with_poly(&pairs, h, c, &ab) {
                    poly_add(&mut sum, m, v);
                }
                for v in sum.values() {
                    let mag = v.abs();
                    if mag > max {
                        max = mag;
                    }
                }
            }
        }
    }
    rat_to_f64(&max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Scalar;
    use crate::doubles::{catalog, DoubleCase};
    use proptest::prelude::*;

    fn sample_q(rng: &mut ChaCha8Rng, m: usize) -> Vec<f64> {
        (0..m).map(|_| rng.random_range(-1.0..1.0)).collect()
    }

    fn p21_closed_form(q: &[f64]) -> DMatrix<f64> {
        let (x0, x1, x2) = (q[0], q[1], q[2]);
        let (c1, s1) = (q[3].cosh(), q[3].sinh());
        let (c2, s2) = (q[4].cosh(), q[4].sinh());
        let (ct, st) = (q[5].cos(), q[5].sin());
        DMatrix::from_row_slice(
            4,
            4,
            &[
                1.0, 0.0, 0.0, 0.0,
                x0, c1 * c2, ct * s1 + st * c1 * s2, ct * c1 * s2 - st * s1,
                x1, s1 * c2, ct * c1 + st * s1 * s2, ct * s1 * s2 - st * c1,
                x2, s2, st * c2, ct * c2,
            ],
        )
    }

    fn ext_closed_form(q: &[f64]) -> DMatrix<f64> {
        let (phi, x0, x1) = (q[0], q[1], q[2]);
        let (ch, sh) = (q[3].cosh(), q[3].sinh());
        DMatrix::from_row_slice(
            4,
            4,
            &[
                1.0, 0.0, 0.0, 0.0,
                x0, ch, sh, 0.0,
                x1, sh, ch, 0.0,
                x0 * x1 - 2.0 * phi, -x1 * ch + x0 * sh, x0 * ch - x1 * sh, 1.0,
            ],
        )
    }

    fn p21_left_oracle(q: &[f64]) -> DMatrix<f64> {
        let (c1, s1) = (q[3].cosh(), q[3].sinh());
        let (c2, s2) = (q[4].cosh(), q[4].sinh());
        let (ct, st) = (q[5].cos(), q[5].sin());
        let mut l = DMatrix::zeros(6, 6);
        l[(5, 0)] = 1.0;
        l[(3, 1)] = ct / c2;
        l[(4, 1)] = st;
        l[(5, 1)] = ct * s2 / c2;
        l[(3, 2)] = -st / c2;
        l[(4, 2)] = ct;
        l[(5, 2)] = -st * s2 / c2;
        l[(0, 3)] = c1 * c2;
        l[(1, 3)] = s1 * c2;
        l[(2, 3)] = s2;
        l[(0, 4)] = ct * s1 + st * s2 * c1;
        l[(1, 4)] = ct * c1 + st * s2 * s1;
        l[(2, 4)] = st * c2;
        l[(0, 5)] = -st * s1 + ct * s2 * c1;
        l[(1, 5)] = -st * c1 + ct * s2 * s1;
        l[(2, 5)] = ct * c2;
        l
    }

    fn p21_right_oracle(q: &[f64]) -> DMatrix<f64> {
        let (x0, x1, x2) = (q[0], q[1], q[2]);
        let (c1, s1) = (q[3].cosh(), q[3].sinh());
        let (c2, s2) = (q[4].cosh(), q[4].sinh());
        let mut r = DMatrix::zeros(6, 6);
        r[(1, 0)] = -x2;
        r[(2, 0)] = x1;
        r[(3, 0)] = -c1 * s2 / c2;
        r[(4, 0)] = s1;
        r[(5, 0)] = c1 / c2;
        r[(0, 1)] = x1;
        r[(1, 1)] = x0;
        r[(3, 1)] = 1.0;
        r[(0, 2)] = x2;
        r[(2, 2)] = x0;
        r[(3, 2)] = -s1 * s2 / c2;
        r[(4, 2)] = c1;
        r[(5, 2)] = s1 / c2;
        r[(0, 3)] = 1.0;
        r[(1, 4)] = 1.0;
        r[(2, 5)] = 1.0;
        r
    }

    fn ext_left_oracle(q: &[f64]) -> DMatrix<f64> {
        let x1 = q[2];
        let (ch, sh) = (q[3].cosh(), q[3].sinh());
        let mut l = DMatrix::zeros(4, 4);
        l[(3, 0)] = 1.0;
        l[(0, 1)] = x1 * ch;
        l[(1, 1)] = ch;
        l[(2, 1)] = sh;
        l[(0, 2)] = x1 * sh;
        l[(1, 2)] = sh;
        l[(2, 2)] = ch;
        l[(0, 3)] = 1.0;
        l
    }

    fn ext_right_oracle(q: &[f64]) -> DMatrix<f64> {
        let (x0, x1) = (q[1], q[2]);
        let mut r = DMatrix::zeros(4, 4);
        r[(0, 0)] = 0.5 * (x0 * x0 + x1 * x1);
        r[(1, 0)] = x1;
        r[(2, 0)] = x0;
        r[(3, 0)] = 1.0;
        r[(1, 1)] = 1.0;
        r[(0, 2)] = x0;
        r[(2, 2)] = 1.0;
        r[(0, 3)] = 1.0;
        r
    }

    fn double_data(id: &str) -> &'static DoubleCase {
        catalog(id).unwrap().as_double().unwrap()
    }

    #[test]
    fn representations_close_their_brackets() {
        assert!(poincare21_rep().bracket_fidelity() < 1e-12);
        assert!(extended_rep().bracket_fidelity() < 1e-12);
        let p = poincare21_rep();
        let boosts = &p.mats[1] * &p.mats[2] - &p.mats[2] * &p.mats[1];
        assert_eq!(boosts, -&p.mats[0]);
        let e = extended_rep();
        let translations = &e.mats[1] * &e.mats[2] - &e.mats[2] * &e.mats[1];
        assert_eq!(translations, -&e.mats[3]);
    }

    #[test]
    fn group_element_at_the_origin_is_the_identity() {
        let g = group_element(&poincare21_chart(), &poincare21_rep(), &[0.0; 6]);
        assert!((g - DMatrix::identity(4, 4)).amax() < 1e-15);
        let g = group_element(&extended_chart(), &extended_rep(), &[0.0; 4]);
        assert!((g - DMatrix::identity(4, 4)).amax() < 1e-15);
    }

    #[test]
    fn translation_only_element_fills_the_first_column() {
        let q = [0.3, -0.8, 1.7, 0.0, 0.0, 0.0];
        let g = group_element(&poincare21_chart(), &poincare21_rep(), &q);
        let mut expected = DMatrix::identity(4, 4);
        expected[(1, 0)] = 0.3;
        expected[(2, 0)] = -0.8;
        expected[(3, 0)] = 1.7;
        assert!((g - expected).amax() < 1e-15);
    }

    #[test]
    fn group_elements_match_the_closed_forms() {
        let chart = poincare21_chart();
        let rep = poincare21_rep();
        let echart = extended_chart();
        let erep = extended_rep();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let q = sample_q(&mut rng, 6);
            let g = group_element(&chart, &rep, &q);
            assert!((g - p21_closed_form(&q)).amax() < 1e-12);
            let q = sample_q(&mut rng, 4);
            let g = group_element(&echart, &erep, &q);
            assert!((g - ext_closed_form(&q)).amax() < 1e-12);
        }
    }

    #[test]
    fn central_coordinate_accumulates_twice_in_the_corner() {
        let g = group_element(&extended_chart(), &extended_rep(), &[1.0, 0.0, 0.0, 0.0]);
        assert_eq!(g[(3, 0)], -2.0);
    }

    #[test]
    fn jacobian_at_the_origin_flattens_the_generators() {
        for (chart, rep) in [
            (poincare21_chart(), poincare21_rep()),
            (extended_chart(), extended_rep()),
        ] {
            let jac = chart_jacobian(&chart, &rep, &vec![0.0; chart.dim()]);
            for k in 0..chart.dim() {
                let expected = flatten(&rep.mats[chart.factors[k]]);
                assert!((jac.column(k) - expected).amax() < 1e-15);
            }
        }
    }

    #[test]
    fn jacobian_agrees_with_finite_differences() {
        let step = 1e-6;
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for (chart, rep) in [
            (poincare21_chart(), poincare21_rep()),
            (extended_chart(), extended_rep()),
        ] {
            for _ in 0..20 {
                let q = sample_q(&mut rng, chart.dim());
                let jac = chart_jacobian(&chart, &rep, &q);
                for k in 0..chart.dim() {
                    let mut qp = q.clone();
                    qp[k] += step;
                    let mut qm = q.clone();
                    qm[k] -= step;
                    let fd = (flatten(&group_element(&chart, &rep, &qp))
                        - flatten(&group_element(&chart, &rep, &qm)))
                        / (2.0 * step);
                    assert!((jac.column(k) - fd).amax() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn jacobian_keeps_full_rank_at_random_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (chart, rep) in [
            (poincare21_chart(), poincare21_rep()),
            (extended_chart(), extended_rep()),
        ] {
            for _ in 0..10 {
                let q = sample_q(&mut rng, chart.dim());
                let jac = chart_jacobian(&chart, &rep, &q);
                let sv = jac.svd(false, false).singular_values;
                let rank = sv.iter().filter(|s| **s > 1e-9).count();
                assert_eq!(rank, chart.dim());
            }
        }
    }

    #[test]
    fn fields_match_their_closed_forms() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let chart = poincare21_chart();
        let rep = poincare21_rep();
        for _ in 0..50 {
            let q = sample_q(&mut rng, 6);
            let (l, r) = invariant_fields(&chart, &rep, &q).unwrap();
            assert!((l - p21_left_oracle(&q)).amax() < 1e-9);
            assert!((r - p21_right_oracle(&q)).amax() < 1e-9);
        }
        let chart = extended_chart();
        let rep = extended_rep();
        for _ in 0..50 {
            let q = sample_q(&mut rng, 4);
            let (l, r) = invariant_fields(&chart, &rep, &q).unwrap();
            assert!((l - ext_left_oracle(&q)).amax() < 1e-9);
            assert!((r - ext_right_oracle(&q)).amax() < 1e-9);
        }
    }

    #[test]
    fn right_translation_fields_are_coordinate_directions() {
        let chart = poincare21_chart();
        let rep = poincare21_rep();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let q = sample_q(&mut rng, 6);
            let (_, r) = invariant_fields(&chart, &rep, &q).unwrap();
            let mut e0 = DVector::zeros(6);
            e0[0] = 1.0;
            assert!((r.column(3) - e0).amax() < 1e-9);
        }
        // A boost field straightens out once the rotation and the other
        // boost are switched off.
        let q = [0.4, -0.2, 0.9, 0.6, 0.0, 0.0];
        let (l, _) = invariant_fields(&chart, &rep, &q).unwrap();
        let mut e31 = DVector::zeros(6);
        e31[3] = 1.0;
        assert!((l.column(1) - e31).amax() < 1e-9);
    }

    #[test]
    fn left_field_commutators_close_onto_the_algebra() {
        let none = Bindings::new();
        let step = 1e-5;
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for (chart, rep) in [
            (poincare21_chart(), poincare21_rep()),
            (extended_chart(), extended_rep()),
        ] {
            let m = chart.dim();
            for _ in 0..3 {
                let q = sample_q(&mut rng, m);
                let (l0, _) = invariant_fields(&chart, &rep, &q).unwrap();
                let mut deriv = vec![DMatrix::zeros(m, m); m];
                for b in 0..m {
                    let mut qp = q.clone();
                    qp[b] += step;
                    let mut qm = q.clone();
                    qm[b] -= step;
                    let (lp, _) = invariant_fields(&chart, &rep, &qp).unwrap();
                    let (lm, _) = invariant_fields(&chart, &rep, &qm).unwrap();
                    deriv[b] = (lp - lm) / (2.0 * step);
                }
                for i in 0..m {
                    for j in (i + 1)..m {
                        let consts = rep.algebra.bracket_basis(i, j);
                        for a in 0..m {
                            let mut comm = 0.0;
                            for b in 0..m {
                                comm += l0[(b, i)] * deriv[b][(a, j)]
                                    - l0[(b, j)] * deriv[b][(a, i)];
                            }
                            let mut expected = 0.0;
                            for (k, c) in consts.iter().enumerate() {
                                expected +=
                                    c.substitute_numeric(&none).unwrap() * l0[(a, k)];
                            }
                            assert!(
                                (comm - LEFT_FIELD_BRACKET_SIGN * expected).abs() < 1e-6,
                                "pair ({i},{j}) component {a}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn split_case_reproduces_the_rotation_brackets() {
        let chart = poincare21_chart();
        let rep = poincare21_rep();
        let r = numeric_r(&double_data("P21-Case0").expected_r_skew, &Bindings::new()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let mut q = sample_q(&mut rng, 6);
            q[0] = 1.0;
            q[1] = 2.0;
            q[2] = 3.0;
            let b01 = sklyanin_eval(&r, &chart, &rep, &q, 0, 1).unwrap();
            let b02 = sklyanin_eval(&r, &chart, &rep, &q, 0, 2).unwrap();
            let b12 = sklyanin_eval(&r, &chart, &rep, &q, 1, 2).unwrap();
            assert!((b01 - (-3.0)).abs() < 1e-9);
            assert!((b02 - 2.0).abs() < 1e-9);
            assert!((b12 - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn bracket_of_a_coordinate_with_itself_vanishes() {
        let chart = poincare21_chart();
        let rep = poincare21_rep();
        let r = numeric_r(&double_data("P21-Case2").expected_r_skew, &Bindings::new()).unwrap();
        let q = [0.2, -0.5, 0.8, 0.1, -0.3, 0.7];
        for a in 0..6 {
            assert_eq!(sklyanin_eval(&r, &chart, &rep, &q, a, a).unwrap(), 0.0);
        }
    }

    #[test]
    fn lorentz_sector_brackets_vanish_on_the_split_case() {
        let chart = poincare21_chart();
        let rep = poincare21_rep();
        let r = numeric_r(&double_data("P21-Case0").expected_r_skew, &Bindings::new()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..5 {
            let q = sample_q(&mut rng, 6);
            for a in 3..6 {
                for b in (a + 1)..6 {
                    assert!(sklyanin_eval(&r, &chart, &rep, &q, a, b).unwrap().abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn quadratic_family_matches_its_printed_brackets() {
        let chart = poincare21_chart();
        let rep = poincare21_rep();
        let one = Scalar::from_int(1);
        let family = double_data("P21-Case1").parametric.as_ref().unwrap();
        let r = numeric_r(&family.at(&one, &one), &Bindings::new()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut q = sample_q(&mut rng, 6);
        q[0] = 1.0;
        q[1] = 1.0;
        q[2] = 0.0;
        assert!(sklyanin_eval(&r, &chart, &rep, &q, 0, 1).unwrap().abs() < 1e-9);
        assert!(sklyanin_eval(&r, &chart, &rep, &q, 1, 2).unwrap().abs() < 1e-9);
        let mut q = sample_q(&mut rng, 6);
        let (x0, x1, x2) = (0.3, -0.7, 0.2);
        q[0] = x0;
        q[1] = x1;
        q[2] = x2;
        let b01 = sklyanin_eval(&r, &chart, &rep, &q, 0, 1).unwrap();
        let b02 = sklyanin_eval(&r, &chart, &rep, &q, 0, 2).unwrap();
        let b12 = sklyanin_eval(&r, &chart, &rep, &q, 1, 2).unwrap();
        assert!((b01 - (-x2 * (x0 + x1) + 2.0 * x2)).abs() < 1e-9);
        assert!((b02 - (x1 * (x0 + x1) - 2.0 * x1)).abs() < 1e-9);
        assert!((b12 - (x0 * (x0 + x1) - 2.0 * x0)).abs() < 1e-9);
    }

    #[test]
    fn projection_is_closed_for_coisotropic_cases() {
        let ids = [
            "P21-Case0",
            "P21-Case1",
            "P21-Case2",
            "P21-Case6",
            "P21-Case7",
            "EXT11-Case0",
            "EXT11-Case1",
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for id in ids {
            let d = double_data(id);
            let (chart, rep) = if id.starts_with("EXT") {
                (extended_chart(), extended_rep())
            } else {
                (poincare21_chart(), poincare21_rep())
            };
            let r = numeric_r(&d.expected_r_skew, &Bindings::new()).unwrap();
            let q1 = sample_q(&mut rng, chart.dim());
            let mut q2 = sample_q(&mut rng, chart.dim());
            for &p in &chart.homogeneous {
                q2[p] = q1[p];
            }
            let h = chart.homogeneous.len();
            for u in 0..h {
                for v in (u + 1)..h {
                    let (a, b) = (chart.homogeneous[u], chart.homogeneous[v]);
                    let first = sklyanin_eval(&r, &chart, &rep, &q1, a, b).unwrap();
                    let second = sklyanin_eval(&r, &chart, &rep, &q2, a, b).unwrap();
                    assert!((first - second).abs() < 1e-9, "{id} pair ({a},{b})");
                }
            }
        }
    }

    fn expected_coefficients(
        d: &DoubleCase,
        table: &PoissonTable,
        bindings: &Bindings,
    ) -> Vec<(usize, usize, Vec<f64>)> {
        let stored = d.spacetime.as_ref().unwrap();
        assert_eq!(
            stored.coords,
            table.coords.iter().map(|s| s.as_str()).collect::<Vec<_>>()
        );
        let mut out = Vec::new();
        for (a, b, terms) in &stored.brackets {
            let (u, v, sign) = if a < b { (*a, *b, 1.0) } else { (*b, *a, -1.0) };
            let mut coeffs = vec![0.0; table.monomials.len()];
            for t in terms {
                let idx = table
                    .monomials
                    .iter()
                    .position(|m| *m == t.powers)
                    .expect("stored term within degree bound");
                coeffs[idx] += sign * t.coeff.substitute_numeric(bindings).unwrap();
            }
            out.push((u, v, coeffs));
        }
        out
    }

    #[test]
    fn fits_recover_the_stored_spacetime_tables() {
        let ids = [
            "P21-Case0",
            "P21-Case1",
            "P21-Case2",
            "P21-Case6",
            "P21-Case7",
            "EXT11-Case0",
            "EXT11-Case1",
        ];
        let one = Scalar::from_int(1);
        for id in ids {
            let d = double_data(id);
            let (chart, rep) = if id.starts_with("EXT") {
                (extended_chart(), extended_rep())
            } else {
                (poincare21_chart(), poincare21_rep())
            };
            let mut bindings = Bindings::new();
            let r_biv = match &d.parametric {
                Some(family) => {
                    bindings.set(family.alpha, 1.0);
                    bindings.set(family.beta, 1.0);
                    family.at(&one, &one)
                }
                None => d.expected_r_skew.clone(),
            };
            let r = numeric_r(&r_biv, &Bindings::new()).unwrap();
            let table =
                poisson_fit(&r, &chart, &rep, d.expected_verdict, 60, 0).unwrap();
            assert!(table.residual < 1e-8, "{id}");
            for (u, v, expected) in expected_coefficients(d, &table, &bindings) {
                let (_, _, fitted) = table
                    .brackets
                    .iter()
                    .find(|(a, b, _)| *a == u && *b == v)
                    .unwrap();
                for (f, e) in fitted.iter().zip(&expected) {
                    assert!((f - e).abs() < 1e-7, "{id} pair ({u},{v})");
                }
            }
        }
    }

    #[test]
    fn open_projections_are_refused() {
        let chart = poincare21_chart();
        let rep = poincare21_rep();
        let d = double_data("P21-Case3");
        let r = numeric_r(
            &d.expected_r_skew,
            &Bindings::new().bind("lambda", 1.0),
        )
        .unwrap();
        match poisson_fit(&r, &chart, &rep, d.expected_verdict, 60, 0) {
            Err(PlgroupError::NotCoisotropic(v)) => assert_eq!(v, "neither"),
            other => panic!("expected refusal, got {other:?}"),
        }
    }

    #[test]
    fn leaking_brackets_fail_the_fit() {
        // The translation-square term drags boost coordinates into the
        // spacetime brackets, so no polynomial in the homogeneous block fits.
        let chart = poincare21_chart();
        let rep = poincare21_rep();
        let d = double_data("P21-Case4");
        let r = numeric_r(
            &d.expected_r_skew,
            &Bindings::new().bind("lambda", 1.0),
        )
        .unwrap();
        match poisson_fit(&r, &chart, &rep, "coisotropic", 60, 0) {
            Err(PlgroupError::FitResidualExceeded { residual, .. }) => {
                assert!(residual > 1e-8)
            }
            other => panic!("expected a residual failure, got {other:?}"),
        }
    }

    #[test]
    fn fitted_tables_satisfy_jacobi() {
        let one = Scalar::from_int(1);
        for id in ["P21-Case0", "P21-Case1", "EXT11-Case1"] {
            let d = double_data(id);
            let (chart, rep) = if id.starts_with("EXT") {
                (extended_chart(), extended_rep())
            } else {
                (poincare21_chart(), poincare21_rep())
            };
            let r_biv = match &d.parametric {
                Some(family) => family.at(&one, &one),
                None => d.expected_r_skew.clone(),
            };
            let r = numeric_r(&r_biv, &Bindings::new()).unwrap();
            let table =
                poisson_fit(&r, &chart, &rep, d.expected_verdict, 60, 0).unwrap();
            assert_eq!(jacobi_poisson(&table), 0.0, "{id}");
        }
    }

    #[test]
    fn empty_table_satisfies_jacobi() {
        let table = PoissonTable {
            coords: vec!["a".into(), "b".into(), "c".into()],
            monomials: degree_two_monomials(3),
            brackets: vec![
                (0, 1, vec![0.0; 10]),
                (0, 2, vec![0.0; 10]),
                (1, 2, vec![0.0; 10]),
            ],
            residual: 0.0,
        };
        assert_eq!(jacobi_poisson(&table), 0.0);
    }

    #[test]
    fn perturbed_table_fails_jacobi() {
        // so(2,1)-type brackets with one sign broken.
        let monomials = degree_two_monomials(3);
        let linear = |var: usize, c: f64| {
            let mut coeffs = vec![0.0; monomials.len()];
            let idx = monomials
                .iter()
                .position(|m| m.iter().sum::<u32>() == 1 && m[var] == 1)
                .unwrap();
            coeffs[idx] = c;
            coeffs
        };
        let good = PoissonTable {
            coords: vec!["x0".into(), "x1".into(), "x2".into()],
            monomials: monomials.clone(),
            brackets: vec![
                (0, 1, linear(2, -1.0)),
                (0, 2, linear(1, 1.0)),
                (1, 2, linear(0, 1.0)),
            ],
            residual: 0.0,
        };
        assert_eq!(jacobi_poisson(&good), 0.0);
        let mut bad = good.clone();
        bad.brackets[2] = (1, 2, linear(0, 1.5));
        assert!(jacobi_poisson(&bad) == 0.0);
        let mut broken = good;
        broken.brackets[0] = (0, 1, linear(0, 1.0));
        assert!(jacobi_poisson(&broken) > 0.0);
    }

    proptest! {
        #[test]
        fn group_elements_stay_unimodular(q in prop::collection::vec(-1.0f64..1.0, 6)) {
            let g = group_element(&poincare21_chart(), &poincare21_rep(), &q);
            prop_assert!((g.determinant() - 1.0).abs() < 1e-9);
            prop_assert!((g[(0, 0)] - 1.0).abs() < 1e-12);
            for j in 1..4 {
                prop_assert!(g[(0, j)].abs() < 1e-12);
            }
        }
    }
}
