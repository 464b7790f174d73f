//! Curvature family of the kinematical algebra, the frame maps used to carry
//! constant-curvature double r-matrices into it, and their rescaled flat
//! limits taken as Laurent leading terms in the curvature scale.

use thiserror::Error;

use crate::coeff::{CoeffError, ContractionScale, Scalar};
use crate::doubles::{catalog, LimitCase};
use crate::liealg::{LieAlgebra, LinearMap};
use crate::tensor::Bivector;

#[derive(Debug, Error)]
pub enum ContractionError {
    #[error("no curvature case named {0}")]
    UnknownId(String),
    #[error("limit diverges at coefficient {0}")]
    Divergent(String),
}

/// Catalog ids of the seven constant-curvature double r-matrices.
pub const ADS_IDS: [&str; 7] = [
    "ADS-A", "ADS-B", "ADS-C", "ADS-D", "ADS-E", "ADS-F", "ADS-G",
];

/// The kinematical constants with the curvature symbolic: the flat brackets
/// extended by [P0,P1] = -Lambda K1, [P0,P2] = -Lambda K2, [P1,P2] = Lambda J.
/// Negative curvature closes so(2,2), positive so(3,1), zero the flat algebra.
pub fn lambda_family() -> LieAlgebra {
    let one = Scalar::one();
    let lam = Scalar::param("Lambda");
    LieAlgebra::new(
        &["J", "K1", "K2", "P0", "P1", "P2"],
        &[
            (0, 1, 2, one.clone()),
            (0, 2, 1, -&one),
            (1, 2, 0, -&one),
            (0, 4, 5, one.clone()),
            (0, 5, 4, -&one),
            (1, 3, 4, one.clone()),
            (1, 4, 3, one.clone()),
            (2, 3, 5, one.clone()),
            (2, 5, 3, one),
            (3, 4, 1, -&lam),
            (3, 5, 2, -&lam),
            (4, 5, 0, lam),
        ],
    )
}

/// Member of the family at a fixed curvature value.
pub fn family_at(lambda: &Scalar) -> LieAlgebra {
    lambda_family()
        .substitute_param("Lambda", lambda)
        .expect("curvature substitution")
}

/// Frame map from the classification basis (J0, J1, J2, P0, P1, P2) of the
/// constant-curvature doubles into the kinematical basis. Five of the cases
/// share a pure rotation-frame exchange; the remaining two mix rotations
/// with translations through the curvature radical eta with eta^2 = Lambda.
pub fn basis_map(id: char) -> Result<LinearMap, ContractionError> {
    let z = Scalar::zero;
    let o = Scalar::one;
    match id {
        'A' | 'C' | 'E' | 'F' | 'G' => Ok(LinearMap::from_columns(
            6,
            vec![
                vec![o(), z(), z(), z(), z(), z()],
                vec![z(), z(), -&o(), z(), z(), z()],
                vec![z(), o(), z(), z(), z(), z()],
                vec![z(), z(), z(), o(), z(), z()],
                vec![z(), z(), z(), z(), o(), z()],
                vec![z(), z(), z(), z(), z(), o()],
            ],
        )),
        'B' | 'D' => {
            let eta = ContractionScale::new("Lambda", false).scalar();
            let ieta = eta.inverse().expect("radical is a single term");
            Ok(LinearMap::from_columns(
                6,
                vec![
                    vec![o(), z(), z(), z(), z(), z()],
                    vec![z(), z(), z(), z(), z(), ieta.clone()],
                    vec![z(), z(), z(), z(), -&ieta, z()],
                    vec![z(), z(), z(), -&o(), z(), z()],
                    vec![z(), eta.clone(), z(), z(), z(), z()],
                    vec![z(), z(), eta, z(), z(), z()],
                ],
            ))
        }
        other => Err(ContractionError::UnknownId(other.to_string())),
    }
}

/// The stored curvature r-matrix for a catalog id ("ADS-A" or just "A").
pub fn ads_rmatrix(id: &str) -> Result<&'static LimitCase, ContractionError> {
    let full = if id.len() == 1 {
        format!("ADS-{id}")
    } else {
        id.to_string()
    };
    catalog(&full)
        .ok()
        .and_then(|e| e.as_limit())
        .ok_or_else(|| ContractionError::UnknownId(id.to_string()))
}

/// Leading term of `scale^k * r` as the scale vanishes, coefficient by
/// coefficient. Any coefficient still carrying a negative scale power makes
/// the whole limit divergent.
pub fn contract(
    r: &Bivector,
    k: i64,
    scale: &ContractionScale,
) -> Result<Bivector, ContractionError> {
    let mut out = Bivector::zero(r.dim());
    for (&(i, j), c) in r.terms() {
        let lead = c.laurent_leading(k, scale).map_err(|e| match e {
            CoeffError::Divergent(t) => ContractionError::Divergent(t),
            other => ContractionError::Divergent(other.to_string()),
        })?;
        out.add_term(i, j, lead);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bialg::{mcybe_check, schouten, McybeVerdict};
    use crate::doubles::{kappa_twisted, poincare21, r0_skew};
    use crate::stachura::{canonical_form, decompose, invariants_mu_p, ClassId, FormParams};

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn flat_member_reproduces_the_kinematical_constants() {
        let flat = family_at(&s(0));
        let p21 = poincare21();
        for i in 0..6 {
            for j in 0..6 {
                for k in 0..6 {
                    assert_eq!(
                        flat.structure_constant(i, j, k),
                        p21.structure_constant(i, j, k)
                    );
                }
            }
        }
    }

    #[test]
    fn unit_curvature_closes_translations_onto_rotations() {
        let unit = family_at(&s(1));
        let mut j = vec![Scalar::zero(); 6];
        j[0] = s(1);
        assert_eq!(unit.bracket_basis(4, 5), j);
        let mut k1 = vec![Scalar::zero(); 6];
        k1[1] = s(-1);
        assert_eq!(unit.bracket_basis(3, 4), k1);
    }

    #[test]
    fn family_satisfies_jacobi_symbolically() {
        assert!(lambda_family().jacobi_check().is_empty());
    }

    #[test]
    fn rotation_frame_map_exchanges_the_boost_axes() {
        let m = basis_map('A').unwrap();
        let mut neg_k2 = vec![Scalar::zero(); 6];
        neg_k2[2] = s(-1);
        assert_eq!(m.column(1), &neg_k2[..]);
    }

    #[test]
    fn curvature_frame_map_sends_a_rotation_onto_a_translation() {
        let m = basis_map('B').unwrap();
        let eta = ContractionScale::new("Lambda", false).scalar();
        assert_eq!(m.column(1)[5], eta.inverse().unwrap());
        let round_trip = m.compose(&m.inverse().unwrap());
        assert_eq!(round_trip, LinearMap::identity(6));
    }

    #[test]
    fn unknown_frame_id_is_rejected() {
        assert!(matches!(
            basis_map('X'),
            Err(ContractionError::UnknownId(_))
        ));
        assert!(matches!(
            ads_rmatrix("ADS-X"),
            Err(ContractionError::UnknownId(_))
        ));
    }

    #[test]
    fn every_curvature_r_matrix_is_quasitriangular_on_the_family() {
        let fam = lambda_family();
        for id in ADS_IDS {
            let case = ads_rmatrix(id).unwrap();
            assert_eq!(
                mcybe_check(&fam, &case.r),
                McybeVerdict::Quasitriangular,
                "{id}"
            );
        }
    }

    #[test]
    fn unrescaled_limits_of_the_collapsing_pair_agree() {
        let a = ads_rmatrix("A").unwrap();
        let e = ads_rmatrix("E").unwrap();
        let lim_a = contract(&a.r, 0, &a.scale).unwrap();
        let lim_e = contract(&e.r, 0, &e.scale).unwrap();
        assert_eq!(lim_a, r0_skew());
        assert_eq!(lim_e, r0_skew());
    }

    #[test]
    fn divergent_cases_need_one_power_of_the_scale() {
        let b = ads_rmatrix("B").unwrap();
        match contract(&b.r, 0, &b.scale) {
            Err(ContractionError::Divergent(_)) => {}
            other => panic!("expected divergence, got {other:?}"),
        }
        let lim = contract(&b.r, 1, &b.scale).unwrap();
        assert_eq!(lim, Bivector::from_terms(6, &[(4, 5, s(-1))]));
    }

    #[test]
    fn one_parameter_family_keeps_its_parameter_in_the_limit() {
        let g = ads_rmatrix("G").unwrap();
        let lim = contract(&g.r, 1, &g.scale).unwrap();
        let rho = Scalar::param("rho");
        let expected = (&s(1) - &(&rho * &rho)).scale(&crate::coeff::rat(1, 4));
        assert_eq!(lim, Bivector::from_terms(6, &[(3, 4, expected)]));
    }

    #[test]
    fn stored_rescalings_reach_the_stored_limits() {
        for id in ADS_IDS {
            let case = ads_rmatrix(id).unwrap();
            let lim = contract(&case.r, case.rescale, &case.scale).unwrap();
            assert_eq!(lim, case.expected_limit, "{id}");
        }
    }

    #[test]
    fn rescaled_limits_are_translation_blocks_with_vanishing_invariants() {
        // The three divergent cases flatten onto pure translation bivectors.
        let p21 = poincare21();
        for id in ["B", "D", "G"] {
            let case = ads_rmatrix(id).unwrap();
            let lim = contract(&case.r, case.rescale, &case.scale).unwrap();
            let d = decompose(&lim);
            assert!(d.b.is_zero() && d.c.is_zero(), "{id}");
            assert!(schouten(&p21, &lim).is_zero(), "{id}");
            let (mu, p) = invariants_mu_p(&lim).unwrap();
            assert!(mu.is_zero() && p.is_zero(), "{id}");
        }
    }

    #[test]
    fn curvature_free_pair_is_a_multiple_of_the_twisted_class_form() {
        let half = Scalar::rational(-1, 2);
        let twisted = canonical_form(ClassId::IIa, &FormParams::alpha_rho(s(1), s(1)));
        assert_eq!(twisted, kappa_twisted());
        for id in ["C", "F"] {
            let case = ads_rmatrix(id).unwrap();
            let lim = contract(&case.r, 0, &case.scale).unwrap();
            assert_eq!(lim, twisted.scale(&half), "{id}");
            assert_eq!(case.kappa_constant.as_ref(), Some(&half), "{id}");
        }
    }
}
