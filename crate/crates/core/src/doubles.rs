//! Manin triples, their double Lie algebras, canonical r-matrices, and the
//! built-in catalog of kinematical realizations.
//!
//! A triple stores the structure constants `c` of an algebra g and `f` of a
//! dual algebra g*; the two are compatible when `f` is a cocycle over g. The
//! double carries both factors plus the mixed bracket
//! `[y^i, Y_j] = c^i_{jk} y^k - f^{ik}_j Y_k` and the canonical pairing
//! `<y^i, Y_j> = delta^i_j`, which is ad-invariant by construction.

use std::sync::OnceLock;

use thiserror::Error;

use crate::bialg::{cocycle_check, Cocommutator};
use crate::coeff::{rat, CoeffError, ContractionScale, Rat, Scalar};
use crate::liealg::{is_isomorphism, Constraint, LieAlgebra, LieError, LinearMap, SymmetricForm};
use crate::linalg::{express_in_rational_span, scalar_mat_mul};
use crate::tensor::{Bivector, Tensor2};

#[derive(Debug, Error)]
pub enum DoubleError {
    #[error("{factor} factor violates Jacobi at ({i}, {j}, {k})")]
    FactorJacobi {
        factor: &'static str,
        i: usize,
        j: usize,
        k: usize,
    },
    #[error("dual row pair ({l}, {m}) is not a cocycle against bracket ({i}, {j})")]
    IncompatibleTriple {
        l: usize,
        m: usize,
        i: usize,
        j: usize,
    },
    #[error("map is not an isomorphism: {0}")]
    NotIsomorphism(String),
    #[error("transported bracket [{x}, {y}] differs from the target constants")]
    TargetMismatch { x: String, y: String },
    #[error("symmetric part lies outside the invariant tensor span: {0}")]
    NotReducible(String),
    #[error("unknown catalog id `{0}`")]
    UnknownId(String),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

/// A pair of Lie algebra structures on dual spaces, checked for cocycle
/// compatibility on construction. Entry `(i, j, k, v)` in `c` means
/// `[Y_i, Y_j]` contains `v Y_k`; entries of `f` read the same way on the
/// `y^i`.
#[derive(Debug, Clone)]
pub struct ManinTriple {
    primal_names: Vec<String>,
    dual_names: Vec<String>,
    c: Vec<(usize, usize, usize, Scalar)>,
    f: Vec<(usize, usize, usize, Scalar)>,
    constraints: Vec<Constraint>,
}

impl ManinTriple {
    pub fn new(
        primal_names: &[&str],
        dual_names: &[&str],
        c: &[(usize, usize, usize, Scalar)],
        f: &[(usize, usize, usize, Scalar)],
        constraints: &[Constraint],
    ) -> Result<Self, DoubleError> {
        assert_eq!(primal_names.len(), dual_names.len());
        let triple = ManinTriple {
            primal_names: primal_names.iter().map(|s| s.to_string()).collect(),
            dual_names: dual_names.iter().map(|s| s.to_string()).collect(),
            c: c.to_vec(),
            f: f.to_vec(),
            constraints: constraints.to_vec(),
        };
        if let Some(v) = triple.primal_algebra().jacobi_check().first() {
            return Err(DoubleError::FactorJacobi {
                factor: "primal",
                i: v.i,
                j: v.j,
                k: v.k,
            });
        }
        if let Some(v) = triple.dual_algebra().jacobi_check().first() {
            return Err(DoubleError::FactorJacobi {
                factor: "dual",
                i: v.i,
                j: v.j,
                k: v.k,
            });
        }
        if let Some(v) =
            cocycle_check(&triple.primal_algebra(), &triple.dual_cocommutator()).first()
        {
            return Err(DoubleError::IncompatibleTriple {
                l: v.l,
                m: v.m,
                i: v.i,
                j: v.j,
            });
        }
        Ok(triple)
    }

    pub fn dim(&self) -> usize {
        self.primal_names.len()
    }

    pub fn primal_algebra(&self) -> LieAlgebra {
        let names: Vec<&str> = self.primal_names.iter().map(|s| s.as_str()).collect();
        LieAlgebra::new(&names, &self.c)
    }

    pub fn dual_algebra(&self) -> LieAlgebra {
        let names: Vec<&str> = self.dual_names.iter().map(|s| s.as_str()).collect();
        LieAlgebra::new(&names, &self.f)
    }

    /// The dual brackets viewed as a cocommutator on the primal factor.
    pub fn dual_cocommutator(&self) -> Cocommutator {
        Cocommutator::from_dual_brackets(self.dim(), &self.f)
    }

    /// Swaps the two factors. Compatibility is symmetric, so this always
    /// yields a valid triple.
    pub fn dual(&self) -> ManinTriple {
        let primal_names: Vec<&str> = self.dual_names.iter().map(|s| s.as_str()).collect();
        let dual_names: Vec<&str> = self.primal_names.iter().map(|s| s.as_str()).collect();
        ManinTriple::new(
            &primal_names,
            &dual_names,
            &self.f,
            &self.c,
            &self.constraints,
        )
        .expect("factor swap preserves compatibility")
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn free_params(&self) -> Vec<String> {
        let mut params = self.primal_algebra().free_params();
        for p in self.dual_algebra().free_params() {
            if !params.contains(&p) {
                params.push(p);
            }
        }
        params.sort();
        params
    }
}

/// The double algebra of a triple: dimension `2d`, basis `Y_0..Y_{d-1}`
/// followed by `y^0..y^{d-1}`, with the canonical pairing.
#[derive(Debug, Clone)]
pub struct DoubleAlgebra {
    algebra: LieAlgebra,
    pairing: SymmetricForm,
    d: usize,
}

impl DoubleAlgebra {
    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn pairing(&self) -> &SymmetricForm {
        &self.pairing
    }

    pub fn half_dim(&self) -> usize {
        self.d
    }

    pub fn dim(&self) -> usize {
        2 * self.d
    }
}

pub fn assemble_double(t: &ManinTriple) -> Result<DoubleAlgebra, DoubleError> {
    let d = t.dim();
    let primal = t.primal_algebra();
    let dual = t.dual_algebra();
    let mut entries: Vec<(usize, usize, usize, Scalar)> = Vec::new();
    for &(i, j, k, ref v) in &t.c {
        entries.push((i, j, k, v.clone()));
    }
    for &(i, j, k, ref v) in &t.f {
        entries.push((d + i, d + j, d + k, v.clone()));
    }
    // [y^i, Y_j] = c^i_{jk} y^k - f^{ik}_j Y_k.
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                let cv = primal.structure_constant(j, k, i);
                if !cv.is_zero() {
                    entries.push((d + i, j, d + k, cv));
                }
                let fv = dual.structure_constant(i, k, j);
                if !fv.is_zero() {
                    entries.push((d + i, j, k, -&fv));
                }
            }
        }
    }
    let mut names: Vec<&str> = t.primal_names.iter().map(|s| s.as_str()).collect();
    names.extend(t.dual_names.iter().map(|s| s.as_str()));
    let algebra = LieAlgebra::new(&names, &entries);
    if let Some(v) = algebra.jacobi_check().first() {
        // Compatibility was checked at triple construction, so a Jacobi
        // failure here is a bookkeeping bug, not bad input.
        panic!(
            "double of a compatible triple broke Jacobi at ({}, {}, {})",
            v.i, v.j, v.k
        );
    }
    let mut pairing = SymmetricForm::zero(2 * d);
    for i in 0..d {
        pairing.set(i, d + i, Scalar::one());
    }
    assert!(
        pairing.invariance_violations(&algebra).is_empty(),
        "canonical pairing must be ad-invariant"
    );
    Ok(DoubleAlgebra {
        algebra,
        pairing,
        d,
    })
}

/// The canonical r-matrix of a double: the mixed tensor `sum_i y^i (x) Y_i`,
/// its skew half `1/2 sum_i y^i ^ Y_i`, and the ad-invariant symmetric
/// remainder `Omega = r - r'`.
pub fn canonical_r(dbl: &DoubleAlgebra) -> (Tensor2, Bivector, Tensor2) {
    let d = dbl.half_dim();
    let n = dbl.dim();
    let mut r = Tensor2::zero(n);
    let mut skew = Bivector::zero(n);
    for i in 0..d {
        r.add_term(d + i, i, Scalar::one());
        skew.add_term(d + i, i, Scalar::rational(1, 2));
    }
    let omega = r.sub(&Tensor2::from_bivector(&skew));
    assert!(
        dbl.algebra().is_invariant_tensor2(&omega),
        "split of the canonical r-matrix must leave an invariant symmetric part"
    );
    (r, skew, omega)
}

/// A double rewritten in a chosen target basis.
#[derive(Debug, Clone)]
pub struct TransportedDouble {
    pub algebra: LieAlgebra,
    pub r_mixed: Tensor2,
    pub r_skew: Bivector,
    pub pairing: SymmetricForm,
}

/// Rewrites a double through `map`, whose column `j` expresses the j-th
/// target basis vector in double coordinates. The transported structure
/// constants must equal `target`'s exactly; anything else is reported as the
/// first differing bracket.
pub fn transport(
    dbl: &DoubleAlgebra,
    map: &LinearMap,
    target: &LieAlgebra,
    constraints: &[Constraint],
) -> Result<TransportedDouble, DoubleError> {
    let n = target.dim();
    if map.source_dim() != n || map.target_dim() != dbl.dim() {
        return Err(DoubleError::NotIsomorphism(format!(
            "map shape {}x{} does not match algebras of dimension {} and {}",
            map.target_dim(),
            map.source_dim(),
            dbl.dim(),
            n
        )));
    }
    // Exact bracket comparison first: the map must intertwine the target
    // constants with the double's.
    for i in 0..n {
        for j in (i + 1)..n {
            let lhs = map.apply(&target.bracket_basis(i, j));
            let rhs = dbl.algebra().bracket(map.column(i), map.column(j));
            if lhs != rhs {
                return Err(DoubleError::TargetMismatch {
                    x: target.name(i).to_string(),
                    y: target.name(j).to_string(),
                });
            }
        }
    }
    is_isomorphism(map, target, dbl.algebra(), constraints)
        .map_err(|e| DoubleError::NotIsomorphism(e.to_string()))?;
    let inv = map
        .inverse()
        .map_err(|e| DoubleError::NotIsomorphism(e.to_string()))?;
    let (r_mixed, r_skew, _) = canonical_r(dbl);
    let r_mixed = r_mixed.pushforward(&inv);
    let r_skew = r_skew.pushforward(&inv);
    // <a, b>_target = <m(a), m(b)>.
    let m = map.to_matrix();
    let mt: Vec<Vec<Scalar>> = (0..n)
        .map(|i| (0..dbl.dim()).map(|a| m[a][i].clone()).collect())
        .collect();
    let p = scalar_mat_mul(&mt, &scalar_mat_mul(dbl.pairing().entries(), &m));
    let mut pairing = SymmetricForm::zero(n);
    for i in 0..n {
        for j in i..n {
            pairing.set(i, j, p[i][j].clone());
        }
    }
    let names: Vec<&str> = target.names().iter().map(|s| s.as_str()).collect();
    let mut entries = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let w = inv.apply(&dbl.algebra().bracket(map.column(i), map.column(j)));
            for (k, s) in w.into_iter().enumerate() {
                if !s.is_zero() {
                    entries.push((i, j, k, s));
                }
            }
        }
    }
    let algebra = LieAlgebra::new(&names, &entries);
    Ok(TransportedDouble {
        algebra,
        r_mixed,
        r_skew,
        pairing,
    })
}

fn sym_upper(t: &Tensor2) -> Vec<Scalar> {
    let n = t.dim();
    (0..n)
        .flat_map(|i| (i..n).map(move |j| (i, j)))
        .map(|(i, j)| t.get(i, j))
        .collect()
}

/// Strips the symmetric part of a mixed r-matrix, provided that part is a
/// combination of the algebra's invariant symmetric tensors, and returns the
/// skew remainder. The solve is exact; the combination coefficients may be
/// symbolic.
pub fn skew_reduce(alg: &LieAlgebra, r: &Tensor2) -> Result<Bivector, DoubleError> {
    let sym = r.symmetric_part();
    if sym.is_zero() {
        return Ok(r.antisymmetric_part());
    }
    let tensors = alg.invariant_symmetric_tensors()?;
    let columns: Vec<Vec<Rat>> = tensors
        .iter()
        .map(|t| {
            sym_upper(t)
                .iter()
                .map(|s| s.as_rational().expect("invariant tensor basis is rational"))
                .collect()
        })
        .collect();
    let target = sym_upper(&sym);
    if express_in_rational_span(&columns, &target).is_none() {
        let names = alg.names().to_vec();
        return Err(DoubleError::NotReducible(sym.display(&names)));
    }
    Ok(r.antisymmetric_part())
}

// ---------------------------------------------------------------------------
// Kinematical algebras.

/// (2+1)-dimensional Poincare algebra in the basis (J, K1, K2, P0, P1, P2).
pub fn poincare21() -> LieAlgebra {
    LieAlgebra::new(
        &["J", "K1", "K2", "P0", "P1", "P2"],
        &[
            (0, 1, 2, s(1)),
            (0, 2, 1, s(-1)),
            (1, 2, 0, s(-1)),
            (0, 4, 5, s(1)),
            (0, 5, 4, s(-1)),
            (1, 3, 4, s(1)),
            (1, 4, 3, s(1)),
            (2, 3, 5, s(1)),
            (2, 5, 3, s(1)),
        ],
    )
}

/// Centrally extended (1+1)-dimensional Poincare algebra in the basis
/// (K, P0, P1, F); F is central and [P1, P0] = F.
pub fn extended_poincare11() -> LieAlgebra {
    LieAlgebra::new(
        &["K", "P0", "P1", "F"],
        &[
            (0, 1, 2, s(1)),
            (0, 2, 1, s(1)),
            (1, 2, 3, s(-1)),
        ],
    )
}

/// (3+1)-dimensional Poincare algebra in the basis
/// (J1, J2, J3, K1, K2, K3, P0, P1, P2, P3). Carries no nondegenerate
/// invariant symmetric form, which is the obstruction recorded by the
/// ISO31 catalog entry.
pub fn poincare31() -> LieAlgebra {
    LieAlgebra::new(
        &[
            "J1", "J2", "J3", "K1", "K2", "K3", "P0", "P1", "P2", "P3",
        ],
        &[
            (0, 1, 2, s(1)),
            (1, 2, 0, s(1)),
            (0, 2, 1, s(-1)),
            (0, 4, 5, s(1)),
            (1, 5, 3, s(1)),
            (2, 3, 4, s(1)),
            (0, 5, 4, s(-1)),
            (1, 3, 5, s(-1)),
            (2, 4, 3, s(-1)),
            (3, 4, 2, s(-1)),
            (4, 5, 0, s(-1)),
            (3, 5, 1, s(1)),
            (0, 8, 9, s(1)),
            (0, 9, 8, s(-1)),
            (1, 9, 7, s(1)),
            (1, 7, 9, s(-1)),
            (2, 7, 8, s(1)),
            (2, 8, 7, s(-1)),
            (3, 6, 7, s(1)),
            (4, 6, 8, s(1)),
            (5, 6, 9, s(1)),
            (3, 7, 6, s(1)),
            (4, 8, 6, s(1)),
            (5, 9, 6, s(1)),
        ],
    )
}

// ---------------------------------------------------------------------------
// Catalog.

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub summary: &'static str,
    pub data: CaseData,
}

#[derive(Debug, Clone)]
pub enum CaseData {
    Double(DoubleCase),
    Limit(LimitCase),
    FormObstruction(ObstructionCase),
}

impl CatalogEntry {
    pub fn as_double(&self) -> Option<&DoubleCase> {
        match &self.data {
            CaseData::Double(c) => Some(c),
            _ => None,
        }
    }

    pub fn as_limit(&self) -> Option<&LimitCase> {
        match &self.data {
            CaseData::Limit(c) => Some(c),
            _ => None,
        }
    }
}

/// A double structure realized on a kinematical algebra.
#[derive(Debug, Clone)]
pub struct DoubleCase {
    /// The tabulated triple, parameters left symbolic.
    pub triple: ManinTriple,
    /// Basis transports onto the kinematical constants; more than one when
    /// parameter sign regions need different maps.
    pub realizations: Vec<Realization>,
    pub target: LieAlgebra,
    /// Indices of the isotropy (Lorentz) generators inside the target basis.
    pub lorentz: Vec<usize>,
    pub expected_pairing: SymmetricForm,
    /// The mixed canonical r-matrix as displayed, which may differ from the
    /// transported one by an invariant symmetric tensor.
    pub expected_r_mixed: Tensor2,
    pub expected_r_skew: Bivector,
    /// Cocommutator rows with a printed expectation, by target index.
    pub expected_delta: Vec<(usize, Bivector)>,
    /// Orbit label under the classification of skew solutions on the
    /// (2+1) algebra; None when the target has no such classification.
    pub expected_class: Option<&'static str>,
    pub expected_verdict: &'static str,
    pub parametric: Option<Parametric>,
    pub spacetime: Option<SpacetimeTable>,
}

impl DoubleCase {
    pub fn primary(&self) -> &Realization {
        &self.realizations[0]
    }
}

/// One concrete transport: parameter normalizations pinned by `fixings`,
/// then `map` sends the target basis into double coordinates.
#[derive(Debug, Clone)]
pub struct Realization {
    pub label: &'static str,
    pub triple: ManinTriple,
    pub map: LinearMap,
    pub constraints: Vec<Constraint>,
    pub bindings: Vec<(&'static str, f64)>,
}

/// Two-parameter family around the double point.
#[derive(Debug, Clone)]
pub struct Parametric {
    pub alpha: &'static str,
    pub beta: &'static str,
    pub r: Bivector,
    pub dd_point: (Scalar, Scalar),
}

impl Parametric {
    pub fn at(&self, alpha: &Scalar, beta: &Scalar) -> Bivector {
        let r = self
            .r
            .substitute_param(self.alpha, alpha)
            .expect("alpha substitution");
        r.substitute_param(self.beta, beta)
            .expect("beta substitution")
    }

    /// The member reproducing the double's own r-matrix.
    pub fn at_dd_point(&self) -> Bivector {
        self.at(&self.dd_point.0, &self.dd_point.1)
    }
}

/// Polynomial bracket table on homogeneous coordinates; `powers` aligns with
/// `coords`.
#[derive(Debug, Clone)]
pub struct SpacetimeTable {
    pub coords: Vec<&'static str>,
    pub brackets: Vec<(usize, usize, Vec<PolyTerm>)>,
}

#[derive(Debug, Clone)]
pub struct PolyTerm {
    pub coeff: Scalar,
    pub powers: Vec<u32>,
}

/// A curvature-family r-matrix with its rescaled flat limit.
#[derive(Debug, Clone)]
pub struct LimitCase {
    pub scale: ContractionScale,
    /// Sign of the curvature parameter on this branch.
    pub lambda_sign: f64,
    pub r: Bivector,
    pub constraints: Vec<Constraint>,
    pub bindings: Vec<(&'static str, f64)>,
    /// Smallest power of the scale making the limit finite.
    pub rescale: i64,
    pub expected_limit: Bivector,
    /// When the limit is a multiple of the twisted kappa form
    /// K2^P0 + J^P1 - K1^P2, the multiple.
    pub kappa_constant: Option<Scalar>,
}

/// An algebra recorded for its lack of a nondegenerate invariant form.
#[derive(Debug, Clone)]
pub struct ObstructionCase {
    pub algebra: LieAlgebra,
}

fn s(n: i64) -> Scalar {
    Scalar::from_int(n)
}

fn q(n: i64, d: i64) -> Scalar {
    Scalar::rational(n, d)
}

fn pm(name: &str) -> Scalar {
    Scalar::param(name)
}

/// 1/sqrt(2) as an exact scalar.
fn inv_sqrt2() -> Scalar {
    Scalar::sqrt_of(&q(1, 2)).expect("rational radicand")
}

fn biv(dim: usize, terms: &[(usize, usize, Scalar)]) -> Bivector {
    Bivector::from_terms(dim, terms)
}

/// Mixed tensor from wedge terms x_i ^ x_j and plain terms x_i (x) x_j.
fn mixed(
    dim: usize,
    wedges: &[(usize, usize, Scalar)],
    tensors: &[(usize, usize, Scalar)],
) -> Tensor2 {
    let mut t = Tensor2::zero(dim);
    for (i, j, c) in wedges {
        t.add_term(*i, *j, c.clone());
        t.add_term(*j, *i, -c);
    }
    for (i, j, c) in tensors {
        t.add_term(*i, *j, c.clone());
    }
    t
}

fn lmap(target_dim: usize, cols: &[&[Scalar]]) -> LinearMap {
    LinearMap::from_columns(target_dim, cols.iter().map(|c| c.to_vec()).collect())
}

/// Pairing <J,P0> = -1, <K1,P2> = 1, <K2,P1> = -1.
fn pairing_minus() -> SymmetricForm {
    SymmetricForm::from_pairs(6, &[(0, 3, s(-1)), (1, 5, s(1)), (2, 4, s(-1))])
}

/// Pairing <J,P0> = 1, <K1,P2> = -1, <K2,P1> = 1.
fn pairing_plus() -> SymmetricForm {
    SymmetricForm::from_pairs(6, &[(0, 3, s(1)), (1, 5, s(-1)), (2, 4, s(1))])
}

fn pairing_ext() -> SymmetricForm {
    SymmetricForm::from_pairs(4, &[(0, 3, s(1)), (1, 1, s(1)), (2, 2, s(-1))])
}

/// Realizations that mix a factor with its dual along the rotation rows leave
/// squares of size c on the Lorentz block; the mixed block is untouched.
fn with_lorentz_squares(mut p: SymmetricForm, c: &Scalar) -> SymmetricForm {
    p.set(0, 0, -c);
    p.set(1, 1, c.clone());
    p.set(2, 2, c.clone());
    p
}

fn p21_names() -> (Vec<&'static str>, Vec<&'static str>) {
    (vec!["Y0", "Y1", "Y2"], vec!["y0", "y1", "y2"])
}

fn triple3(
    c: &[(usize, usize, usize, Scalar)],
    f: &[(usize, usize, usize, Scalar)],
    constraints: &[Constraint],
) -> ManinTriple {
    let (p, d) = p21_names();
    ManinTriple::new(&p, &d, c, f, constraints).expect("catalog triple is compatible")
}

fn triple2(
    c: &[(usize, usize, usize, Scalar)],
    f: &[(usize, usize, usize, Scalar)],
) -> ManinTriple {
    ManinTriple::new(&["Y0", "Y1"], &["y0", "y1"], c, f, &[]).expect("catalog triple is compatible")
}

fn case0() -> CatalogEntry {
    let triple = triple3(
        &[(0, 1, 1, s(2)), (0, 2, 2, s(-2)), (1, 2, 0, s(1))],
        &[],
        &[],
    );
    let half = q(1, 2);
    let map = lmap(
        6,
        &[
            &[s(0), -&half, half.clone(), s(0), s(0), s(0)],
            &[s(0), half.clone(), half.clone(), s(0), s(0), s(0)],
            &[-&half, s(0), s(0), s(0), s(0), s(0)],
            &[s(0), s(0), s(0), s(0), s(1), s(-1)],
            &[s(0), s(0), s(0), s(2), s(0), s(0)],
            &[s(0), s(0), s(0), s(0), s(1), s(1)],
        ],
    );
    let r_skew = biv(6, &[(0, 3, q(1, 2)), (2, 4, q(1, 2)), (1, 5, q(-1, 2))]);
    let delta = vec![
        (0, Bivector::zero(6)),
        (1, Bivector::zero(6)),
        (2, Bivector::zero(6)),
        (3, biv(6, &[(4, 5, s(1))])),
        (4, biv(6, &[(3, 5, s(1))])),
        (5, biv(6, &[(3, 4, s(-1))])),
    ];
    let spacetime = SpacetimeTable {
        coords: vec!["x0", "x1", "x2"],
        brackets: vec![
            (0, 1, vec![term(s(-1), &[0, 0, 1])]),
            (0, 2, vec![term(s(1), &[0, 1, 0])]),
            (1, 2, vec![term(s(1), &[1, 0, 0])]),
        ],
    };
    CatalogEntry {
        id: "P21-Case0",
        summary: "sl(2,R) with abelian dual; the split double",
        data: CaseData::Double(DoubleCase {
            realizations: vec![Realization {
                label: "",
                triple: triple.clone(),
                map,
                constraints: vec![],
                bindings: vec![],
            }],
            triple,
            target: poincare21(),
            lorentz: vec![0, 1, 2],
            expected_pairing: pairing_minus(),
            expected_r_mixed: mixed(6, &[], &[(3, 0, s(-1)), (4, 2, s(-1)), (5, 1, s(1))]),
            expected_r_skew: r_skew,
            expected_delta: delta,
            expected_class: Some("IV"),
            expected_verdict: "poisson_subgroup",
            parametric: None,
            spacetime: Some(spacetime),
        }),
    }
}

fn term(coeff: Scalar, powers: &[u32]) -> PolyTerm {
    PolyTerm {
        coeff,
        powers: powers.to_vec(),
    }
}

fn case1() -> CatalogEntry {
    let triple = triple3(
        &[(0, 1, 1, s(1)), (0, 2, 2, s(1))],
        &[(0, 1, 0, s(1)), (0, 2, 1, s(1)), (1, 2, 2, s(1))],
        &[],
    );
    let map = lmap(
        6,
        &[
            &[s(0), s(0), s(0), s(1), s(1), s(1)],
            &[s(0), s(0), s(0), s(1), s(1), s(0)],
            &[s(0), s(0), s(0), s(0), s(-1), s(-1)],
            &[s(1), s(-1), s(1), s(1), s(1), s(0)],
            &[s(1), s(-1), s(0), s(1), s(1), s(0)],
            &[s(0), s(-1), s(1), s(1), s(0), s(0)],
        ],
    );
    // The mixed block carries 1/2 from the canonical split; the wedge block
    // does not.
    let r_skew = biv(
        6,
        &[
            (0, 1, s(-1)),
            (1, 2, s(1)),
            (0, 3, q(1, 2)),
            (2, 4, q(1, 2)),
            (1, 5, q(-1, 2)),
        ],
    );
    let delta = vec![
        (0, biv(6, &[(0, 2, s(-1))])),
        (1, biv(6, &[(0, 1, s(1)), (1, 2, s(-1))])),
        (2, biv(6, &[(0, 2, s(1))])),
        (
            3,
            biv(6, &[(0, 4, s(1)), (1, 5, s(-1)), (2, 4, s(1)), (4, 5, s(1))]),
        ),
        (
            4,
            biv(6, &[(0, 3, s(1)), (2, 3, s(1)), (1, 5, s(-1)), (3, 5, s(1))]),
        ),
        (
            5,
            biv(6, &[(1, 3, s(-1)), (1, 4, s(1)), (3, 4, s(-1))]),
        ),
    ];
    let a = pm("alpha1");
    let b = pm("beta1");
    let parametric = Parametric {
        alpha: "alpha1",
        beta: "beta1",
        r: biv(
            6,
            &[
                (0, 1, a.clone()),
                (1, 2, -&a),
                (0, 3, -&b),
                (2, 4, -&b),
                (1, 5, b.clone()),
            ],
        ),
        dd_point: (s(-1), q(-1, 2)),
    };
    let spacetime = SpacetimeTable {
        coords: vec!["x0", "x1", "x2"],
        brackets: vec![
            (
                0,
                1,
                vec![
                    term(-&pm("alpha1"), &[1, 0, 1]),
                    term(-&pm("alpha1"), &[0, 1, 1]),
                    term(pm("beta1").scale(&rat(2, 1)), &[0, 0, 1]),
                ],
            ),
            (
                0,
                2,
                vec![
                    term(pm("alpha1"), &[1, 1, 0]),
                    term(pm("alpha1"), &[0, 2, 0]),
                    term(pm("beta1").scale(&rat(-2, 1)), &[0, 1, 0]),
                ],
            ),
            (
                1,
                2,
                vec![
                    term(pm("alpha1"), &[2, 0, 0]),
                    term(pm("alpha1"), &[1, 1, 0]),
                    term(pm("beta1").scale(&rat(-2, 1)), &[1, 0, 0]),
                ],
            ),
        ],
    };
    CatalogEntry {
        id: "P21-Case1",
        summary: "book algebra with its full dual; quadratic spacetime",
        data: CaseData::Double(DoubleCase {
            realizations: vec![Realization {
                label: "",
                triple: triple.clone(),
                map,
                constraints: vec![],
                bindings: vec![],
            }],
            triple,
            target: poincare21(),
            lorentz: vec![0, 1, 2],
            expected_pairing: pairing_plus(),
            expected_r_mixed: mixed(
                6,
                &[(1, 0, s(1)), (1, 2, s(1))],
                &[(0, 3, s(1)), (2, 4, s(1)), (1, 5, s(-1))],
            ),
            expected_r_skew: r_skew,
            expected_delta: delta,
            expected_class: Some("I"),
            expected_verdict: "poisson_subgroup",
            parametric: Some(parametric),
            spacetime: Some(spacetime),
        }),
    }
}

fn case2() -> CatalogEntry {
    let triple = triple3(
        &[(0, 1, 1, s(1)), (0, 2, 2, s(1))],
        &[(0, 2, 1, s(1))],
        &[],
    );
    let map = lmap(
        6,
        &[
            &[s(1), s(1), s(0), s(0), s(0), s(1)],
            &[s(-1), s(0), s(0), s(0), s(0), s(-1)],
            &[s(1), s(1), s(0), s(0), s(0), s(0)],
            &[s(0), s(0), s(-1), s(1), s(-1), s(0)],
            &[s(0), s(0), s(1), s(-1), s(0), s(0)],
            &[s(0), s(0), s(0), s(-1), s(1), s(0)],
        ],
    );
    let r_skew = biv(
        6,
        &[
            (0, 5, s(-1)),
            (2, 3, s(1)),
            (2, 5, s(1)),
            (0, 3, q(-1, 2)),
            (2, 4, q(1, 2)),
            (1, 5, q(-1, 2)),
        ],
    );
    let a = pm("alpha2");
    let b = pm("beta2");
    let parametric = Parametric {
        alpha: "alpha2",
        beta: "beta2",
        r: biv(
            6,
            &[
                (2, 3, -&a),
                (2, 5, -&a),
                (0, 5, b.clone()),
                (0, 3, b.scale(&rat(1, 2))),
                (2, 4, b.scale(&rat(-1, 2))),
                (1, 5, b.scale(&rat(1, 2))),
            ],
        ),
        dd_point: (s(-1), s(-1)),
    };
    let spacetime = SpacetimeTable {
        coords: vec!["x0", "x1", "x2"],
        brackets: vec![
            (0, 1, vec![]),
            (
                0,
                2,
                vec![
                    term(-&pm("alpha2"), &[1, 0, 0]),
                    term(pm("alpha2"), &[0, 0, 1]),
                ],
            ),
            (
                1,
                2,
                vec![
                    term(-&pm("beta2"), &[1, 0, 0]),
                    term(pm("beta2"), &[0, 0, 1]),
                ],
            ),
        ],
    };
    CatalogEntry {
        id: "P21-Case2",
        summary: "book algebra with nilpotent dual; twisted kappa deformation",
        data: CaseData::Double(DoubleCase {
            realizations: vec![Realization {
                label: "",
                triple: triple.clone(),
                map,
                constraints: vec![],
                bindings: vec![],
            }],
            triple,
            target: poincare21(),
            lorentz: vec![0, 1, 2],
            expected_pairing: pairing_minus(),
            expected_r_mixed: mixed(
                6,
                &[(5, 0, s(1)), (2, 3, s(1)), (2, 5, s(1))],
                &[(5, 1, s(1)), (4, 2, s(-1)), (0, 3, s(-1))],
            ),
            expected_r_skew: r_skew,
            expected_delta: vec![],
            expected_class: Some("IIa"),
            expected_verdict: "coisotropic",
            parametric: Some(parametric),
            spacetime: Some(spacetime),
        }),
    }
}

fn case3() -> CatalogEntry {
    let lam = pm("lambda");
    let triple = triple3(
        &[(0, 1, 1, s(1)), (0, 2, 1, s(1)), (0, 2, 2, s(1))],
        &[(0, 1, 2, lam.clone())],
        &[Constraint::NonZero("lambda".into())],
    );
    let ilam = lam.inverse().expect("lambda is a parameter");
    let map = lmap(
        6,
        &[
            &[s(-1), s(0), s(1), ilam.clone(), ilam.clone(), s(0)],
            &[s(1), s(-1), s(0), s(0), -&ilam, s(0)],
            &[s(1), s(0), s(-1), s(0), s(0), -&ilam],
            &[s(0), lam.clone(), s(0), s(1), s(0), s(1)],
            &[s(0), lam.clone(), s(0), s(1), s(0), s(0)],
            &[s(0), s(0), s(0), s(-1), s(0), s(-1)],
        ],
    );
    let two_ilam = ilam.scale(&rat(2, 1));
    let r_skew = biv(
        6,
        &[
            (0, 5, s(1)),
            (2, 3, s(1)),
            (2, 5, s(1)),
            (0, 3, q(1, 2)),
            (2, 4, q(-1, 2)),
            (1, 5, q(1, 2)),
            (3, 4, ilam.clone()),
            (3, 5, two_ilam.clone()),
            (4, 5, -&two_ilam),
        ],
    );
    // Isotropy fails in the first row already.
    let delta_j = biv(
        6,
        &[
            (1, 3, s(-1)),
            (0, 4, s(-1)),
            (2, 4, s(-1)),
            (1, 5, s(-1)),
            (3, 5, ilam.clone()),
            (3, 4, -&two_ilam),
        ],
    );
    CatalogEntry {
        id: "P21-Case3",
        summary: "solvable dual with essential parameter; coisotropy fails",
        data: CaseData::Double(DoubleCase {
            realizations: vec![Realization {
                label: "",
                triple: triple.clone(),
                map,
                constraints: vec![Constraint::NonZero("lambda".into())],
                bindings: vec![("lambda", 1.0)],
            }],
            triple,
            target: poincare21(),
            lorentz: vec![0, 1, 2],
            expected_pairing: with_lorentz_squares(pairing_plus(), &two_ilam),
            expected_r_mixed: mixed(
                6,
                &[
                    (0, 5, s(1)),
                    (2, 3, s(1)),
                    (2, 5, s(1)),
                    (3, 4, ilam.clone()),
                    (3, 5, two_ilam.clone()),
                    (5, 4, two_ilam.clone()),
                ],
                &[
                    (5, 1, s(-1)),
                    (4, 2, s(1)),
                    (0, 3, s(1)),
                    (3, 3, ilam.clone()),
                    (4, 4, -&ilam),
                    (5, 5, -&ilam),
                ],
            ),
            expected_r_skew: r_skew,
            expected_delta: vec![(0, delta_j)],
            expected_class: Some("IIa"),
            expected_verdict: "neither",
            parametric: None,
            spacetime: None,
        }),
    }
}

fn case4() -> CatalogEntry {
    let lam = pm("lambda");
    // Exchanging the two factors transposes the canonical element; this
    // factor order fixes the sign of the skew part below.
    let triple = triple3(
        &[
            (0, 2, 0, s(-1)),
            (1, 2, 0, lam.clone()),
            (1, 2, 1, s(-1)),
        ],
        &[(0, 1, 2, s(-1)), (0, 2, 1, s(1))],
        &[Constraint::NonZero("lambda".into())],
    );
    let map = lmap(
        6,
        &[
            &[lam.clone(), s(0), s(0), s(-1), s(0), s(0)],
            &[lam.clone(), s(1), s(0), s(1), s(0), s(0)],
            &[s(0), s(0), s(1), s(0), s(0), lam.clone()],
            &[s(1), s(0), s(0), s(0), s(-1), s(0)],
            &[s(0), s(0), s(0), s(0), s(0), s(-1)],
            &[s(0), s(0), s(0), s(0), s(1), s(0)],
        ],
    );
    let r_skew = biv(
        6,
        &[
            (0, 5, s(-1)),
            (0, 3, q(-1, 2)),
            (2, 4, q(1, 2)),
            (1, 5, q(-1, 2)),
            (3, 5, lam.clone()),
        ],
    );
    CatalogEntry {
        id: "P21-Case4",
        summary: "euclidean-rotation dual pair; translation tail blocks coisotropy",
        data: CaseData::Double(DoubleCase {
            realizations: vec![Realization {
                label: "",
                triple: triple.clone(),
                map,
                constraints: vec![Constraint::NonZero("lambda".into())],
                bindings: vec![("lambda", 1.0)],
            }],
            triple,
            target: poincare21(),
            lorentz: vec![0, 1, 2],
            expected_pairing: with_lorentz_squares(pairing_minus(), &lam.scale(&rat(2, 1))),
            expected_r_mixed: mixed(
                6,
                &[(5, 0, s(1)), (3, 5, lam.clone())],
                &[
                    (0, 3, s(-1)),
                    (4, 2, s(-1)),
                    (5, 1, s(1)),
                    (3, 3, lam.clone()),
                    (4, 4, -&lam),
                    (5, 5, -&lam),
                ],
            ),
            expected_r_skew: r_skew,
            expected_delta: vec![],
            expected_class: Some("IIIb"),
            expected_verdict: "neither",
            parametric: None,
            spacetime: None,
        }),
    }
}

fn case5() -> CatalogEntry {
    let lam = pm("lambda");
    let om = pm("omega");
    let two_om = om.scale(&rat(2, 1));
    let c = [(0, 1, 1, s(1)), (0, 2, 1, s(1)), (0, 2, 2, s(1))];
    let triple = triple3(
        &c,
        &[(0, 1, 2, lam.clone()), (1, 2, 0, two_om)],
        &[
            Constraint::ProductPositive("omega".into(), "lambda".into()),
            Constraint::NonZero("lambda".into()),
        ],
    );
    // omega = 1/2, lambda > 0.
    let triple_pos = triple3(
        &c,
        &[(0, 1, 2, lam.clone()), (1, 2, 0, s(1))],
        &[Constraint::Positive("lambda".into())],
    );
    // omega = -1/2, lambda < 0.
    let triple_neg = triple3(
        &c,
        &[(0, 1, 2, lam.clone()), (1, 2, 0, s(-1))],
        &[Constraint::Negative("lambda".into())],
    );
    let ilam = lam.inverse().expect("lambda is a parameter");
    let rt = Scalar::sqrt_param("lambda", false);
    let irt = rt.inverse().expect("radical is a single term");
    let map_pos = lmap(
        6,
        &[
            &[s(0), irt.clone(), s(0), s(0), -&irt, s(0)],
            &[s(-1), s(0), s(0), -&ilam, s(0), s(0)],
            &[s(0), irt.clone(), -&irt, s(0), irt.clone(), s(0)],
            &[s(0), -&rt, s(0), s(0), s(0), -&rt],
            &[s(0), s(0), s(0), s(0), s(0), -&rt],
            &[s(0), s(0), s(0), s(1), s(0), s(0)],
        ],
    );
    let nrt = Scalar::sqrt_param("lambda", true);
    let inrt = nrt.inverse().expect("radical is a single term");
    let map_neg = lmap(
        6,
        &[
            &[s(0), -&inrt, s(0), s(0), -&inrt, s(0)],
            &[s(-1), s(0), s(0), -&ilam, s(0), s(0)],
            &[s(0), -&inrt, inrt.clone(), s(0), inrt.clone(), s(0)],
            &[s(0), -&nrt, s(0), s(0), s(0), nrt.clone()],
            &[s(0), s(0), s(0), s(0), s(0), nrt.clone()],
            &[s(0), s(0), s(0), s(1), s(0), s(0)],
        ],
    );
    let r_skew = biv(
        6,
        &[
            (0, 4, s(-1)),
            (0, 3, q(1, 2)),
            (2, 4, q(-1, 2)),
            (1, 5, q(1, 2)),
            (3, 4, -&ilam),
        ],
    );
    CatalogEntry {
        id: "P21-Case5",
        summary: "two sign regions sharing one r-matrix",
        data: CaseData::Double(DoubleCase {
            realizations: vec![
                Realization {
                    label: "omega=1/2, lambda>0",
                    triple: triple_pos,
                    map: map_pos,
                    constraints: vec![Constraint::Positive("lambda".into())],
                    bindings: vec![("lambda", 1.0)],
                },
                Realization {
                    label: "omega=-1/2, lambda<0",
                    triple: triple_neg,
                    map: map_neg,
                    constraints: vec![Constraint::Negative("lambda".into())],
                    bindings: vec![("lambda", -1.0)],
                },
            ],
            triple,
            target: poincare21(),
            lorentz: vec![0, 1, 2],
            expected_pairing: with_lorentz_squares(pairing_plus(), &ilam.scale(&rat(2, 1))),
            expected_r_mixed: mixed(
                6,
                &[(4, 0, s(1)), (4, 3, ilam.clone())],
                &[
                    (5, 1, s(-1)),
                    (4, 2, s(1)),
                    (0, 3, s(1)),
                    (3, 3, ilam.clone()),
                    (4, 4, -&ilam),
                    (5, 5, -&ilam),
                ],
            ),
            expected_r_skew: r_skew,
            expected_delta: vec![],
            expected_class: Some("IIIb"),
            expected_verdict: "neither",
            parametric: None,
            spacetime: None,
        }),
    }
}

fn case6() -> CatalogEntry {
    let om = pm("omega");
    let two_om = om.scale(&rat(2, 1));
    let c = [(0, 1, 1, s(1)), (0, 2, 2, s(1))];
    let triple = triple3(
        &c,
        &[(0, 2, 1, s(1)), (1, 2, 0, two_om)],
        &[Constraint::Positive("omega".into())],
    );
    // omega normalized to 1/2.
    let triple_fixed = triple3(&c, &[(0, 2, 1, s(1)), (1, 2, 0, s(1))], &[]);
    let map = lmap(
        6,
        &[
            &[s(0), s(1), s(0), s(0), s(0), s(1)],
            &[s(1), s(0), s(0), s(0), s(0), s(0)],
            &[s(0), s(0), s(0), s(0), s(0), s(1)],
            &[s(0), s(0), s(0), s(0), s(-1), s(0)],
            &[s(0), s(0), s(-1), s(0), s(1), s(0)],
            &[s(0), s(0), s(0), s(1), s(0), s(0)],
        ],
    );
    let r_skew = biv(
        6,
        &[
            (2, 3, s(-1)),
            (0, 3, q(1, 2)),
            (2, 4, q(-1, 2)),
            (1, 5, q(-1, 2)),
        ],
    );
    let spacetime = SpacetimeTable {
        coords: vec!["x0", "x1", "x2"],
        brackets: vec![
            (0, 1, vec![]),
            (0, 2, vec![term(s(-1), &[1, 0, 0]), term(s(1), &[0, 1, 0])]),
            (1, 2, vec![]),
        ],
    };
    CatalogEntry {
        id: "P21-Case6",
        summary: "mixed book/pseudo-orthogonal pair; linear spacetime",
        data: CaseData::Double(DoubleCase {
            realizations: vec![Realization {
                label: "omega=1/2",
                triple: triple_fixed,
                map,
                constraints: vec![],
                bindings: vec![],
            }],
            triple,
            target: poincare21(),
            lorentz: vec![0, 1, 2],
            expected_pairing: pairing_minus(),
            expected_r_mixed: mixed(
                6,
                &[(3, 2, s(1))],
                &[(5, 1, s(1)), (2, 4, s(-1)), (3, 0, s(-1))],
            ),
            expected_r_skew: r_skew,
            expected_delta: vec![],
            expected_class: Some("IIIb"),
            expected_verdict: "coisotropic",
            parametric: None,
            spacetime: Some(spacetime),
        }),
    }
}

fn case7() -> CatalogEntry {
    let triple = triple3(
        &[(0, 2, 0, s(-1)), (1, 2, 1, s(-1))],
        &[(0, 1, 2, s(-1)), (0, 2, 1, s(1))],
        &[],
    );
    // Composed with the rotation swap used later for classification; without
    // it the canonical element lands on the swapped image of the skew part.
    let map = lmap(
        6,
        &[
            &[s(0), s(0), s(0), s(1), s(0), s(0)],
            &[s(0), s(1), s(0), s(1), s(0), s(0)],
            &[s(0), s(0), s(-1), s(0), s(0), s(0)],
            &[s(1), s(0), s(0), s(0), s(-1), s(0)],
            &[s(0), s(0), s(0), s(0), s(0), s(-1)],
            &[s(0), s(0), s(0), s(0), s(-1), s(0)],
        ],
    );
    let r_skew = biv(
        6,
        &[
            (0, 5, s(-1)),
            (0, 3, q(1, 2)),
            (2, 4, q(-1, 2)),
            (1, 5, q(1, 2)),
        ],
    );
    let spacetime = SpacetimeTable {
        coords: vec!["x0", "x1", "x2"],
        brackets: vec![
            (0, 1, vec![]),
            (0, 2, vec![]),
            (1, 2, vec![term(s(-1), &[1, 0, 0]), term(s(-1), &[0, 0, 1])]),
        ],
    };
    CatalogEntry {
        id: "P21-Case7",
        summary: "euclidean-rotation pair without the translation tail",
        data: CaseData::Double(DoubleCase {
            realizations: vec![Realization {
                label: "",
                triple: triple.clone(),
                map,
                constraints: vec![],
                bindings: vec![],
            }],
            triple,
            target: poincare21(),
            lorentz: vec![0, 1, 2],
            expected_pairing: pairing_plus(),
            expected_r_mixed: mixed(
                6,
                &[(5, 0, s(1))],
                &[(1, 5, s(1)), (2, 4, s(-1)), (3, 0, s(-1))],
            ),
            expected_r_skew: r_skew,
            expected_delta: vec![],
            expected_class: Some("IIIb"),
            expected_verdict: "coisotropic",
            parametric: None,
            spacetime: Some(spacetime),
        }),
    }
}

fn ext_case0() -> CatalogEntry {
    let triple = triple2(&[], &[(0, 1, 1, s(1))]);
    let is2 = inv_sqrt2();
    let map = lmap(
        4,
        &[
            &[s(0), s(0), s(-1), s(0)],
            &[s(0), is2.clone(), s(0), is2.clone()],
            &[s(0), is2.clone(), s(0), -&is2],
            &[s(-1), s(0), s(0), s(0)],
        ],
    );
    let r_skew = biv(4, &[(0, 3, q(1, 2)), (1, 2, q(1, 2))]);
    let delta = vec![
        (0, Bivector::zero(4)),
        (3, Bivector::zero(4)),
        (1, biv(4, &[(1, 3, q(-1, 2)), (2, 3, q(-1, 2))])),
        (2, biv(4, &[(1, 3, q(-1, 2)), (2, 3, q(-1, 2))])),
    ];
    let a = pm("alpha0");
    let b = pm("beta0");
    let parametric = Parametric {
        alpha: "alpha0",
        beta: "beta0",
        r: biv(4, &[(0, 3, a.clone()), (1, 2, b.clone())]),
        dd_point: (q(1, 2), q(1, 2)),
    };
    let spacetime = SpacetimeTable {
        coords: vec!["x0", "x1", "phi"],
        brackets: vec![
            (0, 1, vec![]),
            (
                2,
                0,
                vec![term(pm("beta0"), &[1, 0, 0]), term(pm("alpha0"), &[0, 1, 0])],
            ),
            (
                2,
                1,
                vec![term(pm("alpha0"), &[1, 0, 0]), term(pm("beta0"), &[0, 1, 0])],
            ),
        ],
    };
    CatalogEntry {
        id: "EXT11-Case0",
        summary: "affine line with abelian dual on the extended algebra",
        data: CaseData::Double(DoubleCase {
            realizations: vec![Realization {
                label: "",
                triple: triple.clone(),
                map,
                constraints: vec![],
                bindings: vec![],
            }],
            triple,
            target: extended_poincare11(),
            lorentz: vec![0],
            expected_pairing: pairing_ext(),
            expected_r_mixed: mixed(
                4,
                &[(1, 2, q(1, 2))],
                &[(0, 3, s(1)), (1, 1, q(1, 2)), (2, 2, q(-1, 2))],
            ),
            expected_r_skew: r_skew,
            expected_delta: delta,
            expected_class: None,
            expected_verdict: "poisson_subgroup",
            parametric: Some(parametric),
            spacetime: Some(spacetime),
        }),
    }
}

fn ext_case1() -> CatalogEntry {
    let triple = triple2(&[(0, 1, 1, s(1))], &[(0, 1, 0, s(1))]);
    let is2 = inv_sqrt2();
    let map = lmap(
        4,
        &[
            &[s(-1), s(0), s(0), s(0)],
            &[is2.clone(), is2.clone(), s(0), is2.clone()],
            &[is2.clone(), -&is2, s(0), is2.clone()],
            &[s(0), s(1), s(-1), s(0)],
        ],
    );
    let r_skew = biv(
        4,
        &[
            (0, 3, q(-1, 2)),
            (1, 2, q(-1, 2)),
            (0, 2, -&is2),
            (0, 1, is2.clone()),
        ],
    );
    let delta = vec![
        (0, biv(4, &[(0, 1, -&is2), (0, 2, is2.clone())])),
        (3, Bivector::zero(4)),
        (
            1,
            biv(
                4,
                &[
                    (1, 2, is2.clone()),
                    (0, 3, is2.clone()),
                    (1, 3, q(1, 2)),
                    (2, 3, q(1, 2)),
                ],
            ),
        ),
        (
            2,
            biv(
                4,
                &[
                    (1, 2, is2.clone()),
                    (0, 3, is2.clone()),
                    (1, 3, q(1, 2)),
                    (2, 3, q(1, 2)),
                ],
            ),
        ),
    ];
    let a = pm("alpha1");
    let b = pm("beta1");
    let parametric = Parametric {
        alpha: "alpha1",
        beta: "beta1",
        r: biv(
            4,
            &[
                (0, 3, a.clone()),
                (1, 2, a.clone()),
                (0, 2, b.clone()),
                (0, 1, -&b),
            ],
        ),
        dd_point: (q(-1, 2), -&is2),
    };
    let half_b = pm("beta1").scale(&rat(1, 2));
    let spacetime = SpacetimeTable {
        coords: vec!["x0", "x1", "phi"],
        brackets: vec![
            (
                0,
                1,
                vec![term(-&pm("beta1"), &[1, 0, 0]), term(-&pm("beta1"), &[0, 1, 0])],
            ),
            (
                2,
                0,
                vec![
                    term(pm("alpha1"), &[1, 0, 0]),
                    term(pm("alpha1"), &[0, 1, 0]),
                    term(half_b.clone(), &[2, 0, 0]),
                    term(pm("beta1"), &[1, 1, 0]),
                    term(half_b.clone(), &[0, 2, 0]),
                ],
            ),
            (
                2,
                1,
                vec![
                    term(pm("alpha1"), &[1, 0, 0]),
                    term(pm("alpha1"), &[0, 1, 0]),
                    term(half_b.clone(), &[2, 0, 0]),
                    term(-&half_b, &[0, 2, 0]),
                ],
            ),
        ],
    };
    CatalogEntry {
        id: "EXT11-Case1",
        summary: "affine line doubled on itself; null-plane spacetime",
        data: CaseData::Double(DoubleCase {
            realizations: vec![Realization {
                label: "",
                triple: triple.clone(),
                map,
                constraints: vec![],
                bindings: vec![],
            }],
            triple,
            target: extended_poincare11(),
            lorentz: vec![0],
            expected_pairing: pairing_ext(),
            expected_r_mixed: mixed(
                4,
                &[(0, 1, is2.clone()), (2, 0, is2.clone()), (2, 1, q(1, 2))],
                &[(3, 0, s(1)), (1, 1, q(1, 2)), (2, 2, q(-1, 2))],
            ),
            expected_r_skew: r_skew,
            expected_delta: delta,
            expected_class: None,
            expected_verdict: "coisotropic",
            parametric: Some(parametric),
            spacetime: Some(spacetime),
        }),
    }
}

/// r'_0 in the kinematical basis: the common flat limit of the two constant
/// curvature families without translation-translation terms.
pub fn r0_skew() -> Bivector {
    biv(6, &[(0, 3, q(1, 2)), (2, 4, q(1, 2)), (1, 5, q(-1, 2))])
}

/// The twisted kappa form K2^P0 + J^P1 - K1^P2.
pub fn kappa_twisted() -> Bivector {
    biv(6, &[(2, 3, s(1)), (0, 4, s(1)), (1, 5, s(-1))])
}

fn limit_cases() -> Vec<CatalogEntry> {
    let ds = ContractionScale::new("Lambda", false);
    let ads = ContractionScale::new("Lambda", true);
    let eta_ds = ds.scalar();
    let eta_ads = ads.scalar();
    let ieta_ds = eta_ds.inverse().expect("radical is a single term");
    let ieta_ads = eta_ads.inverse().expect("radical is a single term");
    let half = q(1, 2);
    let mu = pm("mu");
    let imu = mu.inverse().expect("mu is a parameter");
    // (1 + mu^2)/(2 mu) and (mu^2 - 1)/(2 mu).
    let mu_plus = (&mu + &imu).scale(&rat(1, 2));
    let mu_minus = (&mu - &imu).scale(&rat(1, 2));
    let rho = pm("rho");
    let rho2 = &rho * &rho;
    let quarter = rat(1, 4);
    let rho_plus = (&s(1) + &rho2).scale(&quarter);
    let rho_minus = (&s(1) - &rho2).scale(&quarter);
    let half_rho = rho.scale(&rat(1, 2));
    let kappa_half = biv(6, &[(2, 3, -&half), (0, 4, -&half), (1, 5, half.clone())]);
    vec![
        CatalogEntry {
            id: "ADS-A",
            summary: "positive-curvature family collapsing onto the split double",
            data: CaseData::Limit(LimitCase {
                scale: ds.clone(),
                lambda_sign: 1.0,
                r: biv(
                    6,
                    &[
                        (1, 2, eta_ds.clone()),
                        (0, 3, half.clone()),
                        (2, 4, half.clone()),
                        (1, 5, -&half),
                    ],
                ),
                constraints: vec![],
                bindings: vec![],
                rescale: 0,
                expected_limit: r0_skew(),
                kappa_constant: None,
            }),
        },
        CatalogEntry {
            id: "ADS-B",
            summary: "positive-curvature family with a divergent translation term",
            data: CaseData::Limit(LimitCase {
                scale: ds.clone(),
                lambda_sign: 1.0,
                r: biv(
                    6,
                    &[
                        (4, 5, -&ieta_ds),
                        (0, 3, half.clone()),
                        (2, 4, -&half),
                        (1, 5, half.clone()),
                    ],
                ),
                constraints: vec![],
                bindings: vec![],
                rescale: 1,
                expected_limit: biv(6, &[(4, 5, s(-1))]),
                kappa_constant: None,
            }),
        },
        CatalogEntry {
            id: "ADS-C",
            summary: "curvature-free twisted kappa form, positive branch",
            data: CaseData::Limit(LimitCase {
                scale: ds.clone(),
                lambda_sign: 1.0,
                r: kappa_half.clone(),
                constraints: vec![],
                bindings: vec![],
                rescale: 0,
                expected_limit: kappa_half.clone(),
                kappa_constant: Some(q(-1, 2)),
            }),
        },
        CatalogEntry {
            id: "ADS-D",
            summary: "positive-curvature two-parameter family, divergent",
            data: CaseData::Limit(LimitCase {
                scale: ds.clone(),
                lambda_sign: 1.0,
                r: biv(
                    6,
                    &[
                        (0, 1, eta_ds.clone()),
                        (3, 5, -&ieta_ds),
                        (2, 4, -&mu_plus),
                        (0, 5, mu_minus.clone()),
                        (1, 3, -&mu_minus),
                    ],
                ),
                constraints: vec![Constraint::Positive("mu".into())],
                bindings: vec![("mu", 1.0)],
                rescale: 1,
                expected_limit: biv(6, &[(3, 5, s(-1))]),
                kappa_constant: None,
            }),
        },
        CatalogEntry {
            id: "ADS-E",
            summary: "negative-curvature family collapsing onto the split double",
            data: CaseData::Limit(LimitCase {
                scale: ads.clone(),
                lambda_sign: -1.0,
                r: biv(
                    6,
                    &[
                        (0, 1, eta_ads.clone()),
                        (0, 3, half.clone()),
                        (2, 4, half.clone()),
                        (1, 5, -&half),
                    ],
                ),
                constraints: vec![],
                bindings: vec![],
                rescale: 0,
                expected_limit: r0_skew(),
                kappa_constant: None,
            }),
        },
        CatalogEntry {
            id: "ADS-F",
            summary: "curvature-free twisted kappa form, negative branch",
            data: CaseData::Limit(LimitCase {
                scale: ads.clone(),
                lambda_sign: -1.0,
                r: kappa_half.clone(),
                constraints: vec![],
                bindings: vec![],
                rescale: 0,
                expected_limit: kappa_half,
                kappa_constant: Some(q(-1, 2)),
            }),
        },
        CatalogEntry {
            id: "ADS-G",
            summary: "negative-curvature one-parameter family, divergent",
            data: CaseData::Limit(LimitCase {
                scale: ads.clone(),
                lambda_sign: -1.0,
                r: biv(
                    6,
                    &[
                        (2, 3, -&rho_plus),
                        (0, 4, -&rho_plus),
                        (1, 5, half_rho.clone()),
                        (0, 2, &(&pm("Lambda") * &ieta_ads) * &rho_minus),
                        (3, 4, &rho_minus * &ieta_ads),
                    ],
                ),
                constraints: vec![Constraint::OpenInterval("rho".into(), -1.0, 1.0)],
                bindings: vec![("rho", 0.5)],
                rescale: 1,
                expected_limit: biv(6, &[(3, 4, rho_minus)]),
                kappa_constant: None,
            }),
        },
    ]
}

fn build_catalog() -> Vec<CatalogEntry> {
    let mut entries = vec![
        case0(),
        case1(),
        case2(),
        case3(),
        case4(),
        case5(),
        case6(),
        case7(),
        ext_case0(),
        ext_case1(),
    ];
    entries.extend(limit_cases());
    entries.push(CatalogEntry {
        id: "ISO31",
        summary: "no nondegenerate invariant form, hence no double",
        data: CaseData::FormObstruction(ObstructionCase {
            algebra: poincare31(),
        }),
    });
    entries
}

static CATALOG: OnceLock<Vec<CatalogEntry>> = OnceLock::new();

pub fn catalog_entries() -> &'static [CatalogEntry] {
    CATALOG.get_or_init(build_catalog)
}

pub fn catalog(id: &str) -> Result<&'static CatalogEntry, DoubleError> {
    catalog_entries()
        .iter()
        .find(|e| e.id == id)
        .ok_or_else(|| DoubleError::UnknownId(id.to_string()))
}

pub fn catalog_ids() -> Vec<&'static str> {
    catalog_entries().iter().map(|e| e.id).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bialg::coboundary_delta;

    fn case(id: &str) -> &'static DoubleCase {
        catalog(id).unwrap().as_double().unwrap()
    }

    #[test]
    fn mixed_brackets_follow_both_factors() {
        let dbl = assemble_double(&case("P21-Case1").triple).unwrap();
        let a = dbl.algebra();
        // [y0, Y0] = -Y1
        let mut want = vec![Scalar::zero(); 6];
        want[1] = s(-1);
        assert_eq!(a.bracket_basis(3, 0), want);
        // [y1, Y0] = Y0 + y1
        let mut want = vec![Scalar::zero(); 6];
        want[0] = s(1);
        want[4] = s(1);
        assert_eq!(a.bracket_basis(4, 0), want);
        // [y2, Y2] = Y1 - y0
        let mut want = vec![Scalar::zero(); 6];
        want[1] = s(1);
        want[3] = s(-1);
        assert_eq!(a.bracket_basis(5, 2), want);
    }

    #[test]
    fn abelian_triple_doubles_to_the_abelian_algebra() {
        let t = ManinTriple::new(&["a"], &["x"], &[], &[], &[]).unwrap();
        let dbl = assemble_double(&t).unwrap();
        assert!(dbl.algebra().bracket_basis(0, 1).iter().all(Scalar::is_zero));
        let (r, skew, omega) = canonical_r(&dbl);
        assert_eq!(r.get(1, 0), s(1));
        assert_eq!(skew.get(1, 0), q(1, 2));
        assert_eq!(omega.get(0, 1), q(1, 2));
        assert_eq!(omega.get(1, 0), q(1, 2));
    }

    #[test]
    fn jacobi_violation_in_a_factor_is_rejected() {
        let bad = [(0, 1, 1, s(1)), (1, 2, 0, s(1))];
        let err = ManinTriple::new(&["a", "b", "c"], &["x", "y", "z"], &bad, &[], &[]).unwrap_err();
        assert!(matches!(
            err,
            DoubleError::FactorJacobi { factor: "primal", .. }
        ));
        let err = ManinTriple::new(&["a", "b", "c"], &["x", "y", "z"], &[], &bad, &[]).unwrap_err();
        assert!(matches!(err, DoubleError::FactorJacobi { factor: "dual", .. }));
    }

    #[test]
    fn incompatible_dual_is_rejected() {
        let c = [(0, 1, 2, s(1)), (1, 2, 0, s(1)), (0, 2, 1, s(-1))];
        let f = [(0, 1, 0, s(1))];
        let err = ManinTriple::new(&["a", "b", "c"], &["x", "y", "z"], &c, &f, &[]).unwrap_err();
        assert!(matches!(err, DoubleError::IncompatibleTriple { .. }));
    }

    #[test]
    fn factor_swap_is_an_involution() {
        let t = &case("P21-Case2").triple;
        let dd = t.dual().dual();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    assert_eq!(
                        t.primal_algebra().structure_constant(i, j, k),
                        dd.primal_algebra().structure_constant(i, j, k)
                    );
                    assert_eq!(
                        t.dual_algebra().structure_constant(i, j, k),
                        dd.dual_algebra().structure_constant(i, j, k)
                    );
                }
            }
        }
    }

    #[test]
    fn every_catalog_double_transports_onto_its_target() {
        for entry in catalog_entries() {
            let Some(c) = entry.as_double() else { continue };
            for real in &c.realizations {
                let dbl = assemble_double(&real.triple)
                    .unwrap_or_else(|e| panic!("{} {}: {e}", entry.id, real.label));
                let tr = transport(&dbl, &real.map, &c.target, &real.constraints)
                    .unwrap_or_else(|e| panic!("{} {}: {e}", entry.id, real.label));
                assert_eq!(
                    tr.pairing.entries(),
                    c.expected_pairing.entries(),
                    "{} pairing",
                    entry.id
                );
                assert!(
                    tr.r_skew.sub(&c.expected_r_skew).is_zero(),
                    "{} {} skew part: got {}",
                    entry.id,
                    real.label,
                    tr.r_skew.display(c.target.names())
                );
            }
        }
    }

    #[test]
    fn printed_cocommutator_rows_match_the_coboundary() {
        for entry in catalog_entries() {
            let Some(c) = entry.as_double() else { continue };
            if c.expected_delta.is_empty() {
                continue;
            }
            let delta = coboundary_delta(&c.target, &c.expected_r_skew);
            for (i, want) in &c.expected_delta {
                assert!(
                    delta.row(*i).sub(want).is_zero(),
                    "{} row {}: got {}",
                    entry.id,
                    i,
                    delta.row(*i).display(c.target.names())
                );
            }
        }
    }

    #[test]
    fn printed_mixed_r_strips_to_the_printed_skew_part() {
        for entry in catalog_entries() {
            let Some(c) = entry.as_double() else { continue };
            let skew = skew_reduce(&c.target, &c.expected_r_mixed)
                .unwrap_or_else(|e| panic!("{}: {e}", entry.id));
            assert!(
                skew.sub(&c.expected_r_skew).is_zero(),
                "{}: got {}",
                entry.id,
                skew.display(c.target.names())
            );
        }
    }

    #[test]
    fn displayed_mixed_r_differs_from_canonical_by_invariant_symmetric_part() {
        for entry in catalog_entries() {
            let Some(c) = entry.as_double() else { continue };
            let real = c.primary();
            let dbl = assemble_double(&real.triple).unwrap();
            let tr = transport(&dbl, &real.map, &c.target, &real.constraints).unwrap();
            let diff = tr.r_mixed.sub(&c.expected_r_mixed);
            assert!(diff.antisymmetric_part().is_zero(), "{}", entry.id);
            let rest = skew_reduce(&c.target, &diff)
                .unwrap_or_else(|e| panic!("{}: {e}", entry.id));
            assert!(rest.is_zero(), "{}", entry.id);
        }
    }

    #[test]
    fn transported_mixed_r_strips_to_the_printed_skew_part() {
        let c = case("P21-Case3");
        let real = c.primary();
        let dbl = assemble_double(&real.triple).unwrap();
        let tr = transport(&dbl, &real.map, &c.target, &real.constraints).unwrap();
        let skew = skew_reduce(&c.target, &tr.r_mixed).unwrap();
        assert!(skew.sub(&c.expected_r_skew).is_zero());
    }

    #[test]
    fn non_invariant_symmetric_part_is_refused() {
        let alg = poincare21();
        let mut r = Tensor2::zero(6);
        r.add_term(0, 0, s(1));
        assert!(matches!(
            skew_reduce(&alg, &r),
            Err(DoubleError::NotReducible(_))
        ));
    }

    #[test]
    fn parametric_families_pass_through_the_double_point() {
        for id in ["P21-Case1", "P21-Case2", "EXT11-Case0", "EXT11-Case1"] {
            let c = case(id);
            let p = c.parametric.as_ref().unwrap();
            assert!(
                p.at_dd_point().sub(&c.expected_r_skew).is_zero(),
                "{id}: got {}",
                p.at_dd_point().display(c.target.names())
            );
        }
    }

    #[test]
    fn curvature_free_members_are_multiples_of_the_twisted_form() {
        for id in ["ADS-C", "ADS-F"] {
            let l = catalog(id).unwrap().as_limit().unwrap();
            let k = l.kappa_constant.clone().unwrap();
            assert!(l.r.sub(&kappa_twisted().scale(&k)).is_zero(), "{id}");
        }
    }

    #[test]
    fn catalog_lists_every_entry_once() {
        let ids = catalog_ids();
        assert_eq!(ids.len(), 18);
        let mut sorted: Vec<_> = ids.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), ids.len());
        assert!(catalog("P21-Case0").is_ok());
        assert!(matches!(catalog("nope"), Err(DoubleError::UnknownId(_))));
    }

    #[test]
    fn symbolic_triple_reports_its_parameters() {
        assert_eq!(case("P21-Case5").triple.free_params(), ["lambda", "omega"]);
        assert!(case("P21-Case0").triple.free_params().is_empty());
    }
}
