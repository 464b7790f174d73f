//! Orbit bookkeeping for skew r-matrices on the (2+1) kinematical algebra:
//! the block split along translations and rotations, the two invariants that
//! rule the orbit classes, canonical class forms, and stored automorphism
//! witnesses landing each catalog case on its class.

use std::sync::OnceLock;

use thiserror::Error;

use crate::bialg::{schouten, schouten_mixed};
use crate::coeff::{rat, Scalar};
use crate::doubles::{poincare21, CatalogEntry};
use crate::liealg::{is_isomorphism, LieAlgebra, LinearMap};
use crate::tensor::{Bivector, Trivector};

#[derive(Debug, Error)]
pub enum StachuraError {
    #[error("tensor is not proportional to the reference: residual {0}")]
    NotProportional(String),
    #[error("map is not an automorphism: {0}")]
    NotAutomorphism(String),
    #[error("witness for {id} misses the canonical form by {residual}")]
    WitnessFailed { id: String, residual: String },
    #[error("invariants disagree with the class of {id}: {detail}")]
    InvariantMismatch { id: String, detail: String },
    #[error("no class witness stored for {0}")]
    Unclassified(String),
}

/// Orbit classes of skew r-matrices on the (2+1) algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassId {
    I,
    IIa,
    IIb,
    IIc,
    IIIa,
    IIIb,
    IV,
    V,
}

pub const ALL_CLASSES: [ClassId; 8] = [
    ClassId::I,
    ClassId::IIa,
    ClassId::IIb,
    ClassId::IIc,
    ClassId::IIIa,
    ClassId::IIIb,
    ClassId::IV,
    ClassId::V,
];

impl ClassId {
    pub fn label(&self) -> &'static str {
        match self {
            ClassId::I => "I",
            ClassId::IIa => "IIa",
            ClassId::IIb => "IIb",
            ClassId::IIc => "IIc",
            ClassId::IIIa => "IIIa",
            ClassId::IIIb => "IIIb",
            ClassId::IV => "IV",
            ClassId::V => "V",
        }
    }

    pub fn from_label(s: &str) -> Option<ClassId> {
        ALL_CLASSES.iter().copied().find(|c| c.label() == s)
    }
}

impl std::fmt::Display for ClassId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// First translation index in the kinematical basis J, K1, K2, P0, P1, P2.
const T_START: usize = 3;

fn alg() -> &'static LieAlgebra {
    static ALG: OnceLock<LieAlgebra> = OnceLock::new();
    ALG.get_or_init(poincare21)
}

fn names() -> &'static [String] {
    alg().names()
}

/// Split of a kinematical bivector by index block: `a` on translations only,
/// `c` on rotations only, `b` mixed.
#[derive(Debug, Clone, PartialEq)]
pub struct RDecomposition {
    pub a: Bivector,
    pub b: Bivector,
    pub c: Bivector,
}

impl RDecomposition {
    pub fn reassemble(&self) -> Bivector {
        self.a.add(&self.b).add(&self.c)
    }
}

pub fn decompose(r: &Bivector) -> RDecomposition {
    assert_eq!(r.dim(), 6, "kinematical basis expected");
    let mut a = Bivector::zero(6);
    let mut b = Bivector::zero(6);
    let mut c = Bivector::zero(6);
    for (&(i, j), co) in r.terms() {
        let dst = match (i >= T_START, j >= T_START) {
            (true, true) => &mut a,
            (false, false) => &mut c,
            _ => &mut b,
        };
        dst.add_term(i, j, co.clone());
    }
    RDecomposition { a, b, c }
}

/// The translation volume element P0^P1^P2 normalizing the cubic invariant.
pub fn eta_ref() -> Trivector {
    let mut t = Trivector::zero(6);
    t.add_term(3, 4, 5, Scalar::one());
    t
}

/// Reference for the quadratic invariant, calibrated so the form of class IV
/// sits at mu = 2: half the squared mixed block of that form.
pub fn omega_ref() -> &'static Trivector {
    static OMEGA: OnceLock<Trivector> = OnceLock::new();
    OMEGA.get_or_init(|| {
        let b = canonical_form(ClassId::IV, &FormParams::default());
        schouten(alg(), &b).scale(&Scalar::rational(1, 2))
    })
}

/// Coefficient `k` with `t == k * reference`, exact.
fn proportion(t: &Trivector, reference: &Trivector) -> Result<Scalar, StachuraError> {
    let (&(i, j, k), lead) = reference
        .terms()
        .next()
        .expect("reference tensor is nonzero");
    let coeff = &t.get(i, j, k) * &lead.inverse().expect("reference lead invertible");
    let residual = t.sub(&reference.scale(&coeff));
    if residual.is_zero() {
        Ok(coeff)
    } else {
        Err(StachuraError::NotProportional(residual.display(names())))
    }
}

/// The two orbit invariants of a kinematical bivector: `mu` from
/// 2[[a,c]] + [[b,b]] against `omega_ref`, `p` from [[a,b]] against `eta_ref`.
pub fn invariants_mu_p(r: &Bivector) -> Result<(Scalar, Scalar), StachuraError> {
    let g = alg();
    let d = decompose(r);
    let cubic = schouten_mixed(g, &d.a, &d.b);
    let p = proportion(&cubic, &eta_ref())?;
    let quad = schouten_mixed(g, &d.a, &d.c)
        .scale(&Scalar::from_int(2))
        .add(&schouten(g, &d.b));
    let mu = proportion(&quad, omega_ref())?;
    Ok((mu, p))
}

/// Pushforward through a verified automorphism of the kinematical constants.
pub fn apply_automorphism(r: &Bivector, m: &LinearMap) -> Result<Bivector, StachuraError> {
    let g = alg();
    is_isomorphism(m, g, g, &[]).map_err(|e| StachuraError::NotAutomorphism(e.to_string()))?;
    Ok(r.pushforward(m))
}

/// Parameters of a canonical class form; unused slots stay zero.
#[derive(Debug, Clone, PartialEq)]
pub struct FormParams {
    pub alpha: Scalar,
    pub rho: Scalar,
    pub a01: Scalar,
    pub a02: Scalar,
    pub a12: Scalar,
}

impl Default for FormParams {
    fn default() -> Self {
        FormParams {
            alpha: Scalar::zero(),
            rho: Scalar::zero(),
            a01: Scalar::zero(),
            a02: Scalar::zero(),
            a12: Scalar::zero(),
        }
    }
}

impl FormParams {
    pub fn alpha(v: Scalar) -> Self {
        FormParams {
            alpha: v,
            ..Default::default()
        }
    }

    pub fn rho(v: Scalar) -> Self {
        FormParams {
            rho: v,
            ..Default::default()
        }
    }

    pub fn alpha_rho(a: Scalar, r: Scalar) -> Self {
        FormParams {
            alpha: a,
            rho: r,
            ..Default::default()
        }
    }
}

/// The canonical form of an orbit class at the given parameters. Classes I
/// and IV admit no free translation block; V is that block alone.
pub fn canonical_form(class: ClassId, p: &FormParams) -> Bivector {
    let mut r = Bivector::zero(6);
    let is2 = Scalar::sqrt_int(2).inverse().expect("sqrt(2) invertible");
    let al = &p.alpha;
    let rho = &p.rho;
    match class {
        ClassId::I => {
            r.add_term(0, 1, -&is2);
            r.add_term(1, 2, is2.clone());
            r.add_term(0, 3, al.clone());
            r.add_term(2, 4, al.clone());
            r.add_term(1, 5, -al);
        }
        ClassId::IIa => {
            r.add_term(1, 5, -rho);
            r.add_term(0, 4, al.clone());
            r.add_term(2, 3, al.clone());
        }
        ClassId::IIb => {
            r.add_term(0, 3, rho.clone());
            r.add_term(1, 4, al.clone());
            r.add_term(2, 5, al.clone());
        }
        ClassId::IIc => {
            let ais2 = al * &is2;
            r.add_term(0, 5, ais2.clone());
            r.add_term(2, 5, ais2.clone());
            r.add_term(1, 3, -&ais2);
            r.add_term(1, 4, ais2);
            r.add_term(0, 3, rho.clone());
            r.add_term(0, 4, -rho);
            r.add_term(2, 3, rho.clone());
            r.add_term(2, 4, -rho);
        }
        ClassId::IIIa => {
            r.add_term(1, 3, -&is2);
            r.add_term(1, 4, is2);
        }
        ClassId::IIIb => {
            r.add_term(0, 3, Scalar::one());
            r.add_term(0, 4, rho - &Scalar::one());
            r.add_term(2, 3, rho + &Scalar::one());
            r.add_term(2, 4, Scalar::from_int(-1));
            r.add_term(1, 5, -rho);
        }
        ClassId::IV => {
            r.add_term(0, 3, Scalar::one());
            r.add_term(2, 4, Scalar::one());
            r.add_term(1, 5, Scalar::from_int(-1));
        }
        ClassId::V => {}
    }
    if !matches!(class, ClassId::I | ClassId::IV) {
        r.add_term(3, 4, p.a01.clone());
        r.add_term(3, 5, p.a02.clone());
        r.add_term(4, 5, p.a12.clone());
    }
    r
}

/// `mu` of the canonical form at the given parameters. The mixed blocks of
/// IIa and IIb square to opposite multiples of the reference.
fn mu_of_class(class: ClassId, p: &FormParams) -> Scalar {
    let two = Scalar::from_int(2);
    match class {
        ClassId::I | ClassId::IIa => &(&p.alpha * &p.alpha) * &two,
        ClassId::IIb => &(&p.alpha * &p.alpha) * &Scalar::from_int(-2),
        ClassId::IIc | ClassId::IIIa | ClassId::V => Scalar::zero(),
        ClassId::IIIb => &(&p.rho * &p.rho) * &two,
        ClassId::IV => two,
    }
}

/// A stored route from a catalog r-matrix to its orbit class: an automorphism
/// of the kinematical constants carrying the case r-matrix onto
/// `constant * canonical_form(class, params)`.
#[derive(Debug, Clone)]
pub struct ClassWitness {
    pub class: ClassId,
    pub map: LinearMap,
    pub constant: Scalar,
    pub params: FormParams,
}

fn s(n: i64) -> Scalar {
    Scalar::from_int(n)
}

fn diagonal_map(signs: [i64; 6]) -> LinearMap {
    LinearMap::from_columns(
        6,
        (0..6)
            .map(|j| {
                (0..6)
                    .map(|i| if i == j { s(signs[j]) } else { s(0) })
                    .collect()
            })
            .collect(),
    )
}

/// Rescales the three translations, fixing the rotation block.
fn translation_dilation(factor: &Scalar) -> LinearMap {
    LinearMap::from_columns(
        6,
        (0..6)
            .map(|j| {
                (0..6)
                    .map(|i| {
                        if i != j {
                            s(0)
                        } else if j >= T_START {
                            factor.clone()
                        } else {
                            s(1)
                        }
                    })
                    .collect()
            })
            .collect(),
    )
}

/// Boost-rotation mixing map with translation companion; lands the second
/// case on the class IIa form.
fn case2_map() -> LinearMap {
    let s2 = Scalar::sqrt_int(2);
    let is2 = s2.inverse().expect("sqrt(2) invertible");
    let one_p = &s(1) + &is2;
    let one_m = &s(1) - &is2;
    let two_p = &s(2) + &s2;
    let two_m = &s(2) - &s2;
    LinearMap::from_columns(
        6,
        vec![
            vec![s(-2), s(-1), s2.clone(), s(0), s(0), s(0)],
            vec![one_p.clone(), s(1), -&one_p, s(0), s(0), s(0)],
            vec![-&one_m, s(-1), -&one_m, s(0), s(0), s(0)],
            vec![s(0), s(0), s(0), s(-4), -&(&s(2) * &s2), s(-2)],
            vec![s(0), s(0), s(0), two_m.clone(), -&two_m, s(2)],
            vec![s(0), s(0), s(0), two_p.clone(), two_p, s(2)],
        ],
    )
}

/// Parity flip J, K1, P1 used to reverse the sign of rho in class IIa.
fn rho_flip() -> LinearMap {
    diagonal_map([-1, -1, 1, 1, -1, 1])
}

/// Quarter-turn in the 1-2 plane of both rotations and translations.
fn quarter_turn() -> LinearMap {
    LinearMap::from_columns(
        6,
        vec![
            vec![s(1), s(0), s(0), s(0), s(0), s(0)],
            vec![s(0), s(0), s(-1), s(0), s(0), s(0)],
            vec![s(0), s(1), s(0), s(0), s(0), s(0)],
            vec![s(0), s(0), s(0), s(1), s(0), s(0)],
            vec![s(0), s(0), s(0), s(0), s(0), s(-1)],
            vec![s(0), s(0), s(0), s(0), s(1), s(0)],
        ],
    )
}

/// Complexified rotation exchanging the timelike and a lightlike direction;
/// entries carry the formal unit sqrt(-1), which only appears inside the
/// witness check.
fn case4_map() -> LinearMap {
    let i = Scalar::sqrt_int(-1);
    LinearMap::from_columns(
        6,
        vec![
            vec![s(0), s(0), i.clone(), s(0), s(0), s(0)],
            vec![i.clone(), s(0), s(0), s(0), s(0), s(0)],
            vec![s(0), s(-1), s(0), s(0), s(0), s(0)],
            vec![s(0), s(0), s(0), s(0), -&i, s(0)],
            vec![s(0), s(0), s(0), s(0), s(0), s(1)],
            vec![s(0), s(0), s(0), i, s(0), s(0)],
        ],
    )
}

/// The witness for a catalog case, when one is stored. All eight realized
/// double structures on the (2+1) algebra carry one.
pub fn witness(case_id: &str) -> Option<ClassWitness> {
    let lam = Scalar::param("lambda");
    let ilam = lam.inverse().expect("lambda invertible");
    let half = Scalar::rational(1, 2);
    Some(match case_id {
        "P21-Case0" => ClassWitness {
            class: ClassId::IV,
            map: LinearMap::identity(6),
            constant: half,
            params: FormParams::default(),
        },
        "P21-Case1" => ClassWitness {
            class: ClassId::I,
            map: translation_dilation(&(&s(2) * &Scalar::sqrt_int(2))),
            constant: Scalar::sqrt_int(2),
            params: FormParams::alpha(s(1)),
        },
        "P21-Case2" => ClassWitness {
            class: ClassId::IIa,
            map: case2_map(),
            constant: s(1),
            params: FormParams::alpha_rho(s(1), s(1)),
        },
        "P21-Case3" => ClassWitness {
            class: ClassId::IIa,
            map: case2_map().compose(&rho_flip()),
            constant: s(1),
            params: FormParams {
                a01: ilam.scale(&rat(-4, 1)),
                a02: &(&s(-4) - &(&s(2) * &Scalar::sqrt_int(2))) * &ilam,
                a12: &(&s(-4) - &(&s(2) * &Scalar::sqrt_int(2))) * &ilam,
                ..FormParams::alpha_rho(s(1), s(1))
            },
        },
        "P21-Case4" => ClassWitness {
            class: ClassId::IIIb,
            map: case4_map(),
            constant: half,
            params: FormParams {
                a01: lam.scale(&rat(-2, 1)),
                ..FormParams::rho(s(1))
            },
        },
        "P21-Case5" => ClassWitness {
            class: ClassId::IIIb,
            map: LinearMap::identity(6),
            constant: half,
            params: FormParams {
                a01: ilam.scale(&rat(-2, 1)),
                ..FormParams::rho(s(-1))
            },
        },
        "P21-Case6" => ClassWitness {
            class: ClassId::IIIb,
            map: diagonal_map([1, -1, -1, 1, -1, -1]),
            constant: half,
            params: FormParams::rho(s(1)),
        },
        "P21-Case7" => ClassWitness {
            class: ClassId::IIIb,
            map: quarter_turn(),
            constant: half,
            params: FormParams::rho(s(-1)),
        },
        _ => return None,
    })
}

/// Identifies the orbit class of a catalog entry through its stored witness:
/// the transported r-matrix must land exactly on the scaled canonical form,
/// and the invariants must agree with the class. The cubic invariant
/// vanishes exactly on every entry whose reduced space carries a bracket.
pub fn classify(entry: &CatalogEntry) -> Result<ClassId, StachuraError> {
    let case = entry
        .as_double()
        .ok_or_else(|| StachuraError::Unclassified(entry.id.to_string()))?;
    let w = witness(entry.id).ok_or_else(|| StachuraError::Unclassified(entry.id.to_string()))?;
    let transformed = apply_automorphism(&case.expected_r_skew, &w.map)?;
    let target = canonical_form(w.class, &w.params).scale(&w.constant);
    let residual = transformed.sub(&target);
    if !residual.is_zero() {
        return Err(StachuraError::WitnessFailed {
            id: entry.id.to_string(),
            residual: residual.display(names()),
        });
    }
    let (_, p) = invariants_mu_p(&case.expected_r_skew)?;
    let p_must_vanish = matches!(w.class, ClassId::I | ClassId::IV | ClassId::V)
        || matches!(case.expected_verdict, "poisson_subgroup" | "coisotropic");
    if p_must_vanish && !p.is_zero() {
        return Err(StachuraError::InvariantMismatch {
            id: entry.id.to_string(),
            detail: format!("cubic invariant {p} should vanish"),
        });
    }
    let (mu_t, _) = invariants_mu_p(&transformed)?;
    let expected_mu = &mu_of_class(w.class, &w.params) * &(&w.constant * &w.constant);
    if mu_t != expected_mu {
        return Err(StachuraError::InvariantMismatch {
            id: entry.id.to_string(),
            detail: format!("mu {mu_t} differs from the class value {expected_mu}"),
        });
    }
    Ok(w.class)
}
