//! Property tests for the invariants the construction promises for
//! arbitrary admissible inputs.

use proptest::prelude::*;

use radau::quadcore::{self, PolynomialCoeffs};
use radau::radau::{build_radau, ChiPolynomial};
use radau::weights::{evaluate, l1_distance, l1_norm, WeightSpec};

fn arb_weight() -> impl Strategy<Value = WeightSpec> {
    prop_oneof![
        Just(WeightSpec::Constant),
        (0.2f64..3.0, -2.0f64..3.0).prop_map(|(rho, tau)| WeightSpec::Exp { rho, tau }),
        (-0.9f64..2.0, -0.9f64..2.0).prop_map(|(alpha, beta)| WeightSpec::Jacobi { alpha, beta }),
        (0.1f64..3.0, 0.1f64..3.0, 0.1f64..3.0).prop_map(|(a, b, c)| WeightSpec::Table {
            xs: vec![-1.0, 0.25, 1.0],
            vals: vec![a, b, c],
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn weights_are_positive_inside(spec in arb_weight(), x in -0.999f64..0.999) {
        prop_assert!(evaluate(&spec, x).unwrap() > 0.0);
    }

    #[test]
    fn l1_triangle_inequality(
        tau_a in -1.0f64..2.0,
        tau_b in -1.0f64..2.0,
        tau_c in -1.0f64..2.0,
    ) {
        let tol = 1e-10;
        let a = WeightSpec::Exp { rho: 1.0, tau: tau_a };
        let b = WeightSpec::Exp { rho: 1.0, tau: tau_b };
        let c = WeightSpec::Exp { rho: 1.0, tau: tau_c };
        let ab = l1_distance(&a, &b, tol).unwrap();
        let bc = l1_distance(&b, &c, tol).unwrap();
        let ac = l1_distance(&a, &c, tol).unwrap();
        prop_assert!(ac <= ab + bc + 3.0 * tol);
    }

    #[test]
    fn l1_norm_lipschitz_in_tau(tau in 0.0f64..2.0, delta in 0.0f64..0.5) {
        // |d/dtau int exp(-tau(x+1)) dx| <= int (x+1) exp(..) <= 2 * norm <= 4
        let tol = 1e-10;
        let n1 = l1_norm(&WeightSpec::Exp { rho: 1.0, tau }, tol).unwrap();
        let n2 = l1_norm(&WeightSpec::Exp { rho: 1.0, tau: tau + delta }, tol).unwrap();
        prop_assert!((n1 - n2).abs() <= 4.0 * delta + 2.0 * tol);
    }

    #[test]
    fn integrate_is_linear(
        c0 in -2.0f64..2.0,
        c1 in -2.0f64..2.0,
        c2 in -2.0f64..2.0,
        scale in -3.0f64..3.0,
        tau in -0.5f64..1.5,
    ) {
        let tol = 1e-11;
        let spec = WeightSpec::Exp { rho: 1.0, tau };
        let p = PolynomialCoeffs::monomial(vec![c0, c1, c2]);
        let r = PolynomialCoeffs::monomial(vec![c2, c0]);
        let ip = quadcore::integrate(|x| p.eval(x), &spec, tol).unwrap().value;
        let ir = quadcore::integrate(|x| r.eval(x), &spec, tol).unwrap().value;
        let combined = quadcore::integrate(
            |x| scale * p.eval(x) + r.eval(x),
            &spec,
            tol,
        )
        .unwrap()
        .value;
        prop_assert!((combined - (scale * ip + ir)).abs() <= 2.0 * tol * (1.0 + scale.abs()));
    }

    #[test]
    fn squares_integrate_nonnegative(c0 in -2.0f64..2.0, c1 in -2.0f64..2.0, spec in arb_weight()) {
        let f = move |x: f64| {
            let v = c0 + c1 * x;
            v * v
        };
        let value = quadcore::integrate(f, &spec, 1e-8).unwrap().value;
        prop_assert!(value >= -1e-8);
    }

    #[test]
    fn radau_rule_invariants_hold(tau in -1.0f64..3.0, q in 1usize..7) {
        let spec = WeightSpec::Exp { rho: 1.0, tau };
        let rule = build_radau(&spec, q, 1e-11).unwrap();
        prop_assert_eq!(*rule.nodes.last().unwrap(), 1.0);
        prop_assert!(rule.nodes[0] > -1.0);
        prop_assert!(rule.nodes.windows(2).all(|p| p[0] < p[1]));
        let mass = rule.mu0;
        prop_assert!(rule.weights.iter().all(|w| *w > 0.0 && *w <= mass * (1.0 + 1e-12)));
        let sum: f64 = rule.weights.iter().sum();
        prop_assert!(((sum - mass) / mass).abs() <= 1e-11);

        let chi = ChiPolynomial::from_rule(&rule);
        prop_assert!((chi.eval(-1.0) - 1.0).abs() <= 1e-10);
        for root in chi.roots() {
            prop_assert!(chi.eval(*root).abs() <= 1e-11);
        }
    }

    #[test]
    fn refinement_is_monotone(tau in 0.0f64..2.0) {
        // halving the tolerance never moves the value farther from a much
        // tighter reference run
        let spec = WeightSpec::Exp { rho: 1.0, tau };
        let f = |x: f64| (x * x + 0.5 * x).sin() + 1.5;
        let reference = quadcore::integrate(f, &spec, 1e-13).unwrap().value;
        let coarse = quadcore::integrate(f, &spec, 1e-6).unwrap().value;
        let fine = quadcore::integrate(f, &spec, 5e-7).unwrap().value;
        prop_assert!((fine - reference).abs() <= (coarse - reference).abs() + 1e-12);
    }
}
