use proptest::prelude::*;

use lfcheck::alpha_num::{alpha_add, alpha_mul, AlphaContext, AlphaReal};
use lfcheck::fracpoly::{lf_integral, AlphaSeries};
use lfcheck::harness::{parse_function_spec, FunctionSpec, SpecForm};
use lfcheck::ineq::Evaluator;

fn alpha() -> impl Strategy<Value = f64> {
    0.05f64..=1.0
}

fn terms() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((0.0f64..6.0, -5.0f64..5.0), 1..5)
}

fn spec_form() -> impl Strategy<Value = SpecForm> {
    prop_oneof![
        (0.0f64..10.0).prop_map(SpecForm::Mono),
        prop::collection::vec(-1e6f64..1e6, 1..6).prop_map(SpecForm::Poly),
        prop::collection::vec((0.0f64..10.0, -1e3f64..1e3), 1..4).prop_map(SpecForm::Series),
        (1usize..200).prop_map(SpecForm::MittagLeffler),
    ]
}

proptest! {
    #[test]
    fn alpha_sum_and_product_commute(a in -1e6f64..1e6, b in -1e6f64..1e6, al in alpha()) {
        let (x, y) = (AlphaReal::new(a).unwrap(), AlphaReal::new(b).unwrap());
        prop_assert_eq!(alpha_add(x, y).unwrap(), alpha_add(y, x).unwrap());
        prop_assert_eq!(alpha_mul(x, y).unwrap(), alpha_mul(y, x).unwrap());
        let ctx = AlphaContext::new(al).unwrap();
        prop_assert_eq!(x < y, x.value(&ctx) < y.value(&ctx));
    }

    #[test]
    fn derivative_is_linear(t1 in terms(), t2 in terms(), c in -3.0f64..3.0, al in 0.3f64..=1.0, x in 0.1f64..3.0) {
        let ctx = AlphaContext::new(al).unwrap();
        let f = AlphaSeries::from_terms(t1, ctx).unwrap();
        let g = AlphaSeries::from_terms(t2, ctx).unwrap();
        let combined = f.add(&g.scale(c)).unwrap().derivative().unwrap().eval(x).unwrap();
        let separate = f.derivative().unwrap().eval(x).unwrap() + c * g.derivative().unwrap().eval(x).unwrap();
        prop_assert!((combined - separate).abs() <= 1e-9 * (1.0 + separate.abs()));
    }

    #[test]
    fn integral_is_antisymmetric_and_additive(t in terms(), al in alpha(), a in 0.0f64..2.0, w1 in 0.01f64..2.0, w2 in 0.01f64..2.0) {
        let f = AlphaSeries::from_terms(t, AlphaContext::new(al).unwrap()).unwrap();
        let (b, c) = (a + w1, a + w1 + w2);
        prop_assert_eq!(lf_integral(&f, a, b).unwrap(), -lf_integral(&f, b, a).unwrap());
        let whole = lf_integral(&f, a, c).unwrap();
        let parts = lf_integral(&f, a, b).unwrap() + lf_integral(&f, b, c).unwrap();
        let scale: f64 = f.terms().iter().map(|(_, k)| k.abs()).sum::<f64>() * c.max(1.0).powf(6.0 * al + al);
        prop_assert!((whole - parts).abs() <= 1e-11 * scale.max(1.0));
    }

    #[test]
    fn function_spec_round_trips(form in spec_form()) {
        let spec = FunctionSpec::from_form(form);
        let again = parse_function_spec(&spec.to_string()).unwrap();
        prop_assert_eq!(&again, &spec);
        prop_assert_eq!(again.to_string(), spec.to_string());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Nonnegative combinations of x^k with integer k >= 1 are convex.
    #[test]
    fn hermite_hadamard_holds_for_convex_polynomials(
        cs in prop::collection::vec(0.0f64..3.0, 1..5),
        a in 0.0f64..2.0,
        w in 0.05f64..3.0,
    ) {
        let ctx = AlphaContext::new(1.0).unwrap();
        let terms = cs.iter().enumerate().map(|(j, &c)| ((j + 1) as f64, c)).collect();
        let f = AlphaSeries::from_terms(terms, ctx).unwrap();
        let ev = Evaluator::new(ctx).unwrap();
        let r = ev.eval_ghh(&f, a, a + w).unwrap();
        prop_assert!(r.holds, "{:?}", r);
    }
}
