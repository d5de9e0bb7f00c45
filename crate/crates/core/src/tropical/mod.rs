//! Asymptotic spectra of sub-generators whose rates are `m · e^{−V/ε}`.
//!
//! The forest expansion of the characteristic polynomial has no signs for a
//! sub-generator, so the leading order of each coefficient is the
//! minimum-weight forest, with the prefactors of all minimisers summed.
//! Evaluating the same forest sums over [`AsymptoticScalar`] yields those
//! orders directly; the Newton polygon of the orders gives the eigenvalue
//! exponents.

mod input;
mod scalar;
mod spectrum;
mod validate;

pub use input::{ExpRate, ExponentialMarkovInput, RealizedMatrix};
pub use scalar::AsymptoticScalar;
pub use spectrum::{
    asymptotic_spectrum, eigenvalue_asymptotics, extreme_forests, newton_polygon, tropical_char_poly,
    AsymptoticSpectrum, EigenvalueAsymptotic, ExtremeForests, HullSegment, NewtonPolygon,
};
pub use validate::{eigenvalues_at, validate_asymptotics, EigenvalueCheck, ValidationReport};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use num_rational::BigRational;
    use num_traits::{One, Zero};

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn rate(v: i64) -> ExpRate {
        ExpRate::new(q(v), q(1)).unwrap()
    }

    /// Three states, transition orders 1→2,1→3: 4; 2→1: 3; 2→3: 2;
    /// 3→2: 1; 3→1: 3; killing 5, 5, 4.
    fn three_state() -> ExponentialMarkovInput {
        let mut inp = ExponentialMarkovInput::new(3).unwrap();
        for (i, j, v) in [(0, 1, 4), (0, 2, 4), (1, 0, 3), (1, 2, 2), (2, 1, 1), (2, 0, 3)] {
            inp.set_rate(i, j, rate(v)).unwrap();
        }
        for (i, v) in [(0, 5), (1, 5), (2, 4)] {
            inp.set_killing(i, rate(v)).unwrap();
        }
        inp
    }

    fn orders(coeffs: &[AsymptoticScalar]) -> Vec<Option<BigRational>> {
        coeffs.iter().map(|c| c.order().cloned()).collect()
    }

    fn scalar(v: i64) -> AsymptoticScalar {
        AsymptoticScalar::new(q(v), q(1)).unwrap()
    }

    #[test]
    fn three_state_coefficient_orders() {
        let p = tropical_char_poly(&three_state());
        assert_eq!(orders(p.coeffs()), vec![Some(q(9)), Some(q(4)), Some(q(1)), Some(q(0))]);
        assert!(p.coeffs().iter().all(|c| *c.prefactor() == q(1)));
    }

    #[test]
    fn explicit_minimisers_agree() {
        let inp = three_state();
        let p = tropical_char_poly(&inp);
        let shown: Vec<Vec<String>> = (0..=3)
            .map(|k| {
                let ex = extreme_forests(&inp, k).unwrap();
                assert_eq!(ex.order.as_ref(), p.coeff(k).order());
                assert_eq!(&ex.prefactor, p.coeff(k).prefactor());
                ex.forests.iter().map(|f| f.display_with(Some(3))).collect()
            })
            .collect();
        assert_eq!(shown[0], vec!["{(1,†),(2,1),(3,2)}"]);
        assert_eq!(shown[1], vec!["{(2,1),(3,2)}"]);
        assert_eq!(shown[2], vec!["{(3,2)}"]);
        assert_eq!(shown[3], vec!["{}"]);
    }

    #[test]
    fn single_state() {
        let mut inp = ExponentialMarkovInput::new(1).unwrap();
        inp.set_killing(0, ExpRate::new(q(7), q(3)).unwrap()).unwrap();
        let p = tropical_char_poly(&inp);
        assert_eq!(orders(p.coeffs()), vec![Some(q(7)), Some(q(0))]);
        let s = asymptotic_spectrum(&inp).unwrap();
        assert_eq!(s.eigenvalues[0].exponent, q(7));
        assert_eq!(s.eigenvalues[0].lambda, q(-3));
    }

    #[test]
    fn polygon_examples() {
        let p = newton_polygon(&[scalar(9), scalar(4), scalar(1), scalar(0)]);
        assert!(p.convexity_ok);
        assert_eq!(p.unit_slopes(), vec![q(5), q(3), q(1)]);

        let p = newton_polygon(&[scalar(2), scalar(1), scalar(0)]);
        assert!(p.convexity_ok);
        assert_eq!(p.unit_slopes(), vec![q(1), q(1)]);
        assert_eq!(p.segments.len(), 1);

        let p = newton_polygon(&[scalar(1), scalar(5), scalar(0)]);
        assert!(!p.convexity_ok);
        assert_eq!(p.vertices.iter().map(|v| v.0).collect::<Vec<_>>(), vec![0, 2]);
    }

    #[test]
    fn three_state_eigenvalue_asymptotics() {
        let s = asymptotic_spectrum(&three_state()).unwrap();
        let got: Vec<(usize, BigRational, BigRational)> =
            s.eigenvalues.iter().map(|e| (e.k, e.exponent.clone(), e.lambda.clone())).collect();
        assert_eq!(got, vec![(1, q(5), q(-1)), (2, q(3), q(-1)), (3, q(1), q(-1))]);
    }

    #[test]
    fn prefactors_follow_the_minimising_arcs() {
        let mut inp = three_state();
        inp.set_killing(0, ExpRate::new(q(5), q(2)).unwrap()).unwrap();
        inp.set_rate(1, 0, ExpRate::new(q(3), q(3)).unwrap()).unwrap();
        inp.set_rate(2, 1, ExpRate::new(q(1), q(5)).unwrap()).unwrap();
        let s = asymptotic_spectrum(&inp).unwrap();
        let lambdas: Vec<BigRational> = s.eigenvalues.iter().map(|e| e.lambda.clone()).collect();
        assert_eq!(lambdas, vec![q(-2), q(-3), q(-5)]);
    }

    #[test]
    fn lower_triangular_chain_has_same_leading_spectrum() {
        let mut inp = ExponentialMarkovInput::new(3).unwrap();
        inp.set_killing(0, rate(5)).unwrap();
        inp.set_rate(1, 0, rate(3)).unwrap();
        inp.set_rate(2, 1, rate(1)).unwrap();
        let chain = asymptotic_spectrum(&inp).unwrap();
        let full = asymptotic_spectrum(&three_state()).unwrap();
        assert_eq!(chain.eigenvalues, full.eigenvalues);
    }

    #[test]
    fn degenerate_inputs() {
        // no killing anywhere: constant coefficient vanishes
        let mut inp = ExponentialMarkovInput::new(2).unwrap();
        inp.set_rate(0, 1, rate(1)).unwrap();
        inp.set_rate(1, 0, rate(1)).unwrap();
        let p = tropical_char_poly(&inp);
        assert!(p.coeff(0).is_zero());
        assert!(matches!(asymptotic_spectrum(&inp), Err(Error::DegenerateSlopes { .. })));

        let err = eigenvalue_asymptotics(&[scalar(2), scalar(1), scalar(0)]).unwrap_err();
        match err {
            Error::DegenerateSlopes { segments } => {
                assert_eq!(segments.len(), 1);
                assert_eq!(segments[0].multiplicity(), 2);
                assert_eq!(segments[0].slope, q(1));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn realised_matrix_row_sums_are_killing_rates() {
        let inp = three_state();
        let eps = 0.5;
        let r = inp.realize_at_epsilon(eps).unwrap();
        assert!(r.underflowed.is_empty());
        for (i, v) in [(0, 5.0), (1, 5.0), (2, 4.0)] {
            let sum: f64 = r.matrix.row(i).iter().sum();
            let want = -(-v / eps).exp();
            assert!((sum - want).abs() < 1e-12 * r.matrix.norm_inf(), "{sum} vs {want}");
        }
        assert!(inp.realize_at_epsilon(0.0).is_err());
        assert!(!inp.realize_at_epsilon(1e-3).unwrap().underflowed.is_empty());
    }

    #[test]
    fn large_epsilon_tends_to_prefactors() {
        let r = three_state().realize_at_epsilon(1e12).unwrap();
        assert!((r.matrix.get(0, 1) - 1.0).abs() < 1e-9);
        assert!((r.matrix.get(2, 1) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn asymptotic_augmented_digraph_uses_tropical_zero_for_absent_arcs() {
        let mut inp = ExponentialMarkovInput::new(2).unwrap();
        inp.set_rate(0, 1, rate(2)).unwrap();
        let h = inp.augmented();
        assert_eq!(h.graph().weight(0, 1), Some(&scalar(2)));
        assert_eq!(h.graph().weight(1, 0), None);
        assert!(h.boundary_weight(1).is_zero());
        assert_eq!(AsymptoticScalar::one(), scalar(0));
    }

    #[test]
    fn finite_epsilon_estimates_match_predictions() {
        let report = validate_asymptotics(&three_state(), &[0.1, 0.05]).unwrap();
        assert!(report.max_exponent_error() < 0.05, "{report:?}");
        assert!(report.max_lambda_error() < 0.10, "{report:?}");
    }

    #[test]
    fn finite_epsilon_single_state_is_exact() {
        let mut inp = ExponentialMarkovInput::new(1).unwrap();
        inp.set_killing(0, ExpRate::new(q(2), q(3)).unwrap()).unwrap();
        let report = validate_asymptotics(&inp, &[0.2, 0.1]).unwrap();
        assert!(report.max_exponent_error() < 1e-12);
        assert!(report.max_lambda_error() < 1e-12);
    }

    #[test]
    fn finite_epsilon_coefficients_approach_orders() {
        let inp = three_state();
        let want = [9.0, 4.0, 1.0];
        let at = |eps: f64| {
            let h = inp.realize_augmented(eps).unwrap();
            crate::calculus::char_poly_augmented(&h).unwrap().into_coeffs()
        };
        let (c1, c2) = (at(0.1), at(0.05));
        for k in 0..3 {
            let (y1, y2) = (-0.1 * c1[k].ln(), -0.05 * c2[k].ln());
            let extrapolated = y2 - (y1 - y2) / (0.1 - 0.05) * 0.05;
            assert!(((extrapolated - want[k]) / want[k]).abs() < 0.05, "k={k}: {extrapolated}");
        }
    }

    #[test]
    fn eigenvector_limits() {
        let inp = three_state();
        let eps = 0.05;
        let h = inp.realize_augmented(eps).unwrap();
        let lambdas = eigenvalues_at(&inp, eps).unwrap();
        let right = [[1.0, 1.0, 1.0], [0.0, 1.0, 1.0], [0.0, 0.0, 1.0]];
        let left = [[1.0, 0.0, 0.0], [-1.0, 1.0, 0.0], [0.0, -1.0, 1.0]];
        for (k, lambda) in lambdas.iter().enumerate() {
            assert!(lambda.im.abs() <= 1e-12 * lambda.norm());
            for (transpose, want) in [(false, right[k]), (true, left[k])] {
                let v = crate::calculus::eigenvector_components_augmented(&h, &lambda.re, k, transpose).unwrap();
                for (got, want) in v.components.iter().zip(want) {
                    assert!((got - want).abs() < 1e-3, "k={k} transpose={transpose}: {:?}", v.components);
                }
            }
        }
    }

    #[test]
    fn invalid_rates() {
        assert!(ExpRate::new(q(-1), q(1)).is_err());
        assert!(ExpRate::new(q(1), q(0)).is_err());
        let mut inp = ExponentialMarkovInput::new(2).unwrap();
        assert_eq!(inp.set_rate(0, 0, rate(1)), Err(Error::LoopArc(0)));
        assert!(inp.set_killing(2, rate(1)).is_err());
    }
}
