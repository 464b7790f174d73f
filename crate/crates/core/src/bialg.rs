//! Lie bialgebra layer: cocommutators, cocycle and co-Jacobi verification,
//! coboundary structures from r-matrices, Schouten brackets, the modified
//! classical Yang-Baxter check, and coisotropy classification.

use crate::coeff::{CoeffError, Scalar};
use crate::liealg::{JacobiViolation, LieAlgebra};
use crate::tensor::{Bivector, Trivector};

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum BialgError {
    #[error("span is not closed under the bracket: [{i}, {j}] leaves the span at index {k}")]
    NotClosed { i: usize, j: usize, k: usize },
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

/// Cocommutator delta: g -> g^g, stored one bivector per basis element,
/// rows[i] = delta(X_i). The dual brackets [y^j, y^k] = f^{jk}_i y^i carry
/// the same constants with the roles of upper and lower indices exchanged.
#[derive(Debug, Clone, PartialEq)]
pub struct Cocommutator {
    rows: Vec<Bivector>,
}

impl Cocommutator {
    pub fn zero(dim: usize) -> Self {
        Cocommutator {
            rows: vec![Bivector::zero(dim); dim],
        }
    }

    pub fn from_rows(rows: Vec<Bivector>) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|b| b.dim() == dim));
        Cocommutator { rows }
    }

    /// Builds from dual-bracket entries `(i, j, k, c)` meaning
    /// `[y^i, y^j] = ... + c y^k + ...`, i.e. f^{ij}_k = c.
    pub fn from_dual_brackets(dim: usize, entries: &[(usize, usize, usize, Scalar)]) -> Self {
        let mut rows = vec![Bivector::zero(dim); dim];
        for (i, j, k, c) in entries {
            rows[*k].add_term(*i, *j, c.clone());
        }
        Cocommutator { rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, i: usize) -> &Bivector {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Bivector] {
        &self.rows
    }

    /// Signed dual constant f^{jk}_i.
    pub fn f(&self, j: usize, k: usize, i: usize) -> Scalar {
        self.rows[i].get(j, k)
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|b| b.is_zero())
    }

    /// The dual algebra carrying [y^i, y^j] = f^{ij}_k y^k.
    pub fn dual_algebra(&self, names: &[&str]) -> LieAlgebra {
        let dim = self.dim();
        assert_eq!(names.len(), dim);
        let mut entries = Vec::new();
        for (k, row) in self.rows.iter().enumerate() {
            for (&(i, j), c) in row.terms() {
                entries.push((i, j, k, c.clone()));
            }
        }
        LieAlgebra::new(names, &entries)
    }

    pub fn substitute_param(&self, name: &str, value: &Scalar) -> Result<Cocommutator, CoeffError> {
        let rows: Result<Vec<Bivector>, CoeffError> = self
            .rows
            .iter()
            .map(|b| b.substitute_param(name, value))
            .collect();
        Ok(Cocommutator { rows: rows? })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CocycleViolation {
    /// Bracket pair (i, j) and dual pair (l, m) of the failing equation.
    pub i: usize,
    pub j: usize,
    pub l: usize,
    pub m: usize,
    pub residual: Scalar,
}

/// Compatibility between a bracket and a cocommutator:
/// f^{lm}_k c^k_{ij} = f^{lk}_i c^m_{kj} + f^{km}_i c^l_{kj}
///                   + f^{lk}_j c^m_{ik} + f^{km}_j c^l_{ik}.
pub fn cocycle_check(alg: &LieAlgebra, delta: &Cocommutator) -> Vec<CocycleViolation> {
    let dim = alg.dim();
    assert_eq!(delta.dim(), dim);
    let mut out = Vec::new();
    for i in 0..dim {
        for j in i + 1..dim {
            for l in 0..dim {
                for m in l + 1..dim {
                    let mut lhs = Scalar::zero();
                    let mut rhs = Scalar::zero();
                    for k in 0..dim {
                        let c_ij = alg.structure_constant(i, j, k);
                        if !c_ij.is_zero() {
                            lhs = &lhs + &(&delta.f(l, m, k) * &c_ij);
                        }
                        rhs = &rhs + &(&delta.f(l, k, i) * &alg.structure_constant(k, j, m));
                        rhs = &rhs + &(&delta.f(k, m, i) * &alg.structure_constant(k, j, l));
                        rhs = &rhs + &(&delta.f(l, k, j) * &alg.structure_constant(i, k, m));
                        rhs = &rhs + &(&delta.f(k, m, j) * &alg.structure_constant(i, k, l));
                    }
                    let residual = &lhs - &rhs;
                    if !residual.is_zero() {
                        out.push(CocycleViolation { i, j, l, m, residual });
                    }
                }
            }
        }
    }
    out
}

/// Jacobi identity for the dual brackets.
pub fn cojacobi_check(delta: &Cocommutator) -> Vec<JacobiViolation> {
    let dim = delta.dim();
    let names: Vec<String> = (0..dim).map(|i| format!("y{i}")).collect();
    let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    delta.dual_algebra(&name_refs).jacobi_check()
}

/// Coboundary cocommutator delta(X_i) = ad_{X_i}(r).
pub fn coboundary_delta(alg: &LieAlgebra, r: &Bivector) -> Cocommutator {
    let rows = (0..alg.dim()).map(|i| alg.ad_bivector(i, r)).collect();
    let delta = Cocommutator { rows };
    debug_assert!(cocycle_check(alg, &delta).is_empty());
    delta
}

/// One-sided Schouten accumulation [x_12, y_13] + [x_12, y_23] + [x_13, y_23]
/// as a dense rank-3 tensor.
fn schouten_half(alg: &LieAlgebra, x: &Bivector, y: &Bivector, t: &mut [Vec<Vec<Scalar>>]) {
    let full = |b: &Bivector| -> Vec<(usize, usize, Scalar)> {
        let mut v = Vec::new();
        for (&(i, j), c) in b.terms() {
            v.push((i, j, c.clone()));
            v.push((j, i, -c));
        }
        v
    };
    for (i, j, xc) in full(x) {
        for (k, l, yc) in full(y) {
            let f = &xc * &yc;
            let br = alg.bracket_basis(i, k);
            for (a, ca) in br.iter().enumerate() {
                if !ca.is_zero() {
                    t[a][j][l] = &t[a][j][l] + &(ca * &f);
                }
            }
            let br = alg.bracket_basis(j, k);
            for (a, ca) in br.iter().enumerate() {
                if !ca.is_zero() {
                    t[i][a][l] = &t[i][a][l] + &(ca * &f);
                }
            }
            let br = alg.bracket_basis(j, l);
            for (a, ca) in br.iter().enumerate() {
                if !ca.is_zero() {
                    t[i][k][a] = &t[i][k][a] + &(ca * &f);
                }
            }
        }
    }
}

/// Polarized Schouten bracket [[x, y]] of two bivectors, the symmetric
/// bilinear map whose diagonal is [[r, r]]. The result is totally
/// antisymmetric (asserted), so it is returned as a trivector.
pub fn schouten_mixed(alg: &LieAlgebra, x: &Bivector, y: &Bivector) -> Trivector {
    let dim = alg.dim();
    assert_eq!(x.dim(), dim);
    assert_eq!(y.dim(), dim);
    let mut t = vec![vec![vec![Scalar::zero(); dim]; dim]; dim];
    schouten_half(alg, x, y, &mut t);
    schouten_half(alg, y, x, &mut t);
    let half = crate::coeff::rat(1, 2);
    let mut out = Trivector::zero(dim);
    for a in 0..dim {
        for b in a + 1..dim {
            for c in b + 1..dim {
                let s = t[a][b][c].scale(&half);
                if !s.is_zero() {
                    out.add_term(a, b, c, s);
                }
            }
        }
    }
    // The accumulated tensor must be totally antisymmetric; anything else
    // signals a bookkeeping error in the contraction pattern.
    for a in 0..dim {
        for b in 0..dim {
            for c in 0..dim {
                let expected = if a == b || b == c || a == c {
                    Scalar::zero()
                } else {
                    out.get(a, b, c).scale(&crate::coeff::rat(2, 1))
                };
                assert_eq!(t[a][b][c], expected, "schouten tensor not alternating");
            }
        }
    }
    out
}

/// Schouten bracket [[r, r]] = [r_12, r_13] + [r_12, r_23] + [r_13, r_23].
pub fn schouten(alg: &LieAlgebra, r: &Bivector) -> Trivector {
    schouten_mixed(alg, r, r)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum McybeVerdict {
    /// [[r, r]] = 0: a solution of the classical Yang-Baxter equation.
    Triangular,
    /// [[r, r]] nonzero but ad-invariant.
    Quasitriangular,
    /// [[r, r]] not ad-invariant.
    Fails,
}

impl std::fmt::Display for McybeVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            McybeVerdict::Triangular => write!(f, "triangular"),
            McybeVerdict::Quasitriangular => write!(f, "quasitriangular"),
            McybeVerdict::Fails => write!(f, "fails"),
        }
    }
}

pub fn mcybe_check(alg: &LieAlgebra, r: &Bivector) -> McybeVerdict {
    let t = schouten(alg, r);
    if t.is_zero() {
        McybeVerdict::Triangular
    } else if alg.is_invariant_trivector(&t) {
        McybeVerdict::Quasitriangular
    } else {
        McybeVerdict::Fails
    }
}

/// A subalgebra given by a subset of basis indices, closed under the bracket.
#[derive(Debug, Clone, PartialEq)]
pub struct SubalgebraSpec {
    indices: Vec<usize>,
}

impl SubalgebraSpec {
    pub fn new(alg: &LieAlgebra, indices: &[usize]) -> Result<Self, BialgError> {
        let mut sorted = indices.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for &i in &sorted {
            for &j in &sorted {
                if i >= j {
                    continue;
                }
                let br = alg.bracket_basis(i, j);
                for (k, c) in br.iter().enumerate() {
                    if !c.is_zero() && !sorted.contains(&k) {
                        return Err(BialgError::NotClosed { i, j, k });
                    }
                }
            }
        }
        Ok(SubalgebraSpec { indices: sorted })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.contains(&i)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoisotropyWitness {
    /// Subalgebra generator whose cocommutator leaves the allowed span.
    pub generator: usize,
    /// Offending wedge term indices.
    pub term: (usize, usize),
    pub coefficient: Scalar,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CoisotropyVerdict {
    /// delta(h) inside h^h.
    PoissonSubgroup,
    /// delta(h) inside h^g but not h^h.
    Coisotropic,
    /// Some delta(X), X in h, has a term with both legs outside h.
    Neither(CoisotropyWitness),
}

impl CoisotropyVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            CoisotropyVerdict::PoissonSubgroup => "poisson_subgroup",
            CoisotropyVerdict::Coisotropic => "coisotropic",
            CoisotropyVerdict::Neither(_) => "neither",
        }
    }

    /// Coisotropy in the weak sense: poisson_subgroup counts as coisotropic.
    pub fn is_coisotropic(&self) -> bool {
        !matches!(self, CoisotropyVerdict::Neither(_))
    }
}

pub fn coisotropy_classify(delta: &Cocommutator, h: &SubalgebraSpec) -> CoisotropyVerdict {
    let mut all_inside = true;
    for &g in h.indices() {
        for (&(i, j), c) in delta.row(g).terms() {
            let in_i = h.contains(i);
            let in_j = h.contains(j);
            if !in_i && !in_j {
                return CoisotropyVerdict::Neither(CoisotropyWitness {
                    generator: g,
                    term: (i, j),
                    coefficient: c.clone(),
                });
            }
            if !(in_i && in_j) {
                all_inside = false;
            }
        }
    }
    if all_inside {
        CoisotropyVerdict::PoissonSubgroup
    } else {
        CoisotropyVerdict::Coisotropic
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::basis_vector;

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

    /// Solvable algebra with [Y0,Y1] = Y1, [Y0,Y2] = Y1 + Y2.
    fn r3_prime() -> LieAlgebra {
        LieAlgebra::new(
            &["Y0", "Y1", "Y2"],
            &[
                (0, 1, 1, Scalar::one()),
                (0, 2, 1, Scalar::one()),
                (0, 2, 2, Scalar::one()),
            ],
        )
    }

    #[test]
    fn schouten_of_wedge_square() {
        // [[X^Y, X^Y]] = X^Y^[X,Y]; on sl2 with E^F this is E^F^H = H^E^F.
        let alg = sl2();
        let r = Bivector::from_terms(3, &[(1, 2, Scalar::one())]);
        let t = schouten(&alg, &r);
        let mut expect = Trivector::zero(3);
        expect.add_term(0, 1, 2, Scalar::one());
        assert_eq!(t, expect);
    }

    #[test]
    fn schouten_quadratic_scaling() {
        let alg = sl2();
        let r = Bivector::from_terms(3, &[(0, 1, Scalar::one()), (1, 2, Scalar::from_int(3))]);
        let t = Scalar::param("t");
        let scaled = r.scale(&t);
        let lhs = schouten(&alg, &scaled);
        let rhs = schouten(&alg, &r).scale(&(&t * &t));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn schouten_polarization_bilinear() {
        let alg = r3_prime();
        let x = Bivector::from_terms(3, &[(0, 1, Scalar::param("u"))]);
        let y = Bivector::from_terms(3, &[(0, 2, Scalar::one()), (1, 2, Scalar::from_int(2))]);
        let sum = x.add(&y);
        let lhs = schouten(&alg, &sum);
        let mut rhs = schouten(&alg, &x).add(&schouten(&alg, &y));
        rhs = rhs.add(&schouten_mixed(&alg, &x, &y).scale(&Scalar::from_int(2)));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn mcybe_three_verdicts() {
        // H^E spans a two-dimensional subalgebra: triangular.
        let alg = sl2();
        let tri = Bivector::from_terms(3, &[(0, 1, Scalar::one())]);
        assert_eq!(mcybe_check(&alg, &tri), McybeVerdict::Triangular);
        // E^F has [[r,r]] = H^E^F, the invariant volume element of sl2.
        let quasi = Bivector::from_terms(3, &[(1, 2, Scalar::one())]);
        assert_eq!(mcybe_check(&alg, &quasi), McybeVerdict::Quasitriangular);
        // Y0^Y2 on the solvable algebra: [[r,r]] = -Y0^Y1^Y2, not invariant
        // because ad_{Y0} has nonzero trace.
        let bad_alg = r3_prime();
        let bad = Bivector::from_terms(3, &[(0, 2, Scalar::one())]);
        assert_eq!(mcybe_check(&bad_alg, &bad), McybeVerdict::Fails);
    }

    #[test]
    fn coboundary_is_cocycle() {
        let alg = r3_prime();
        let r = Bivector::from_terms(
            3,
            &[(0, 1, Scalar::from_int(2)), (0, 2, Scalar::one()), (1, 2, Scalar::rational(1, 2))],
        );
        let delta = coboundary_delta(&alg, &r);
        assert!(cocycle_check(&alg, &delta).is_empty());
    }

    #[test]
    fn cojacobi_detects_bad_dual() {
        // f^{12}_0 = 1 and f^{01}_1 = 1 break the dual Jacobi identity.
        let delta = Cocommutator::from_dual_brackets(
            3,
            &[(1, 2, 0, Scalar::one()), (0, 1, 1, Scalar::one())],
        );
        assert!(!cojacobi_check(&delta).is_empty());
        let good = Cocommutator::zero(3);
        assert!(cojacobi_check(&good).is_empty());
    }

    #[test]
    fn coisotropy_three_verdicts() {
        let alg = r3_prime();
        let h = SubalgebraSpec::new(&alg, &[1, 2]).unwrap();
        // delta(Y1) = Y1^Y2: inside h^h.
        let mut rows = vec![Bivector::zero(3); 3];
        rows[1] = Bivector::from_terms(3, &[(1, 2, Scalar::one())]);
        assert_eq!(
            coisotropy_classify(&Cocommutator::from_rows(rows.clone()), &h).label(),
            "poisson_subgroup"
        );
        // delta(Y2) = Y0^Y1: one leg outside.
        rows[2] = Bivector::from_terms(3, &[(0, 1, Scalar::one())]);
        assert_eq!(
            coisotropy_classify(&Cocommutator::from_rows(rows.clone()), &h).label(),
            "coisotropic"
        );
        // Subalgebra {Y0} with delta(Y0) = Y1^Y2: both legs outside.
        let h0 = SubalgebraSpec::new(&alg, &[0]).unwrap();
        let mut rows2 = vec![Bivector::zero(3); 3];
        rows2[0] = Bivector::from_terms(3, &[(1, 2, Scalar::one())]);
        let verdict = coisotropy_classify(&Cocommutator::from_rows(rows2), &h0);
        match verdict {
            CoisotropyVerdict::Neither(w) => {
                assert_eq!(w.generator, 0);
                assert_eq!(w.term, (1, 2));
            }
            other => panic!("expected neither, got {}", other.label()),
        }
    }

    #[test]
    fn subalgebra_closure_enforced() {
        let alg = sl2();
        assert!(SubalgebraSpec::new(&alg, &[0, 1]).is_ok());
        assert!(SubalgebraSpec::new(&alg, &[1, 2]).is_err());
    }

    #[test]
    fn basis_vector_sanity() {
        let v = basis_vector(3, 1);
        assert!(v[1].is_one() && v[0].is_zero() && v[2].is_zero());
    }

    // The two quadratic obstructions of the fully generic bivector, pinned to
    // the trivector components that actually carry them.
    #[test]
    fn generic_schouten_quadratics_sit_on_their_components() {
        let names = ["J", "K1", "K2", "P0", "P1", "P2"];
        let alg = LieAlgebra::new(
            &names,
            &[
                (0, 1, 2, Scalar::one()),
                (0, 2, 1, Scalar::from_int(-1)),
                (1, 2, 0, Scalar::from_int(-1)),
                (0, 4, 5, Scalar::one()),
                (0, 5, 4, Scalar::from_int(-1)),
                (1, 3, 4, Scalar::one()),
                (1, 4, 3, Scalar::one()),
                (2, 3, 5, Scalar::one()),
                (2, 5, 3, Scalar::one()),
            ],
        );
        assert!(alg.jacobi_check().is_empty());
        let p = Scalar::param;
        let mut r = Bivector::zero(6);
        r.add_term(0, 4, p("a1"));
        r.add_term(0, 1, p("a2"));
        r.add_term(3, 4, p("a3"));
        r.add_term(3, 1, p("a4"));
        r.add_term(4, 1, p("a5"));
        r.add_term(4, 2, p("a6"));
        r.add_term(0, 5, p("b1"));
        r.add_term(0, 2, p("b2"));
        r.add_term(3, 5, p("b3"));
        r.add_term(3, 2, p("b4"));
        r.add_term(5, 2, p("b5"));
        r.add_term(5, 1, p("b6"));
        r.add_term(0, 3, p("c1"));
        r.add_term(1, 2, p("c2"));
        r.add_term(4, 5, p("c3"));
        let t = schouten(&alg, &r);
        let prod = |x: &str, y: &str| &p(x) * &p(y);
        let translations = &(&(&prod("a1", "a3") + &prod("a4", "b3")) + &prod("b1", "b3"))
            - &(&(&prod("a3", "b4") + &prod("a5", "c3")) + &prod("b5", "c3"));
        assert_eq!(t.get(3, 4, 5), translations);
        let boosted = &(&(&prod("a4", "a4") + &prod("a2", "b3")) + &(&prod("a6", "c1") + &prod("b6", "c1")))
            - &(&(&prod("a1", "b4") + &prod("a5", "a5")) + &(&prod("a6", "b6") + &prod("c2", "c3")));
        assert_eq!(t.get(1, 3, 4), boosted);
    }
}
