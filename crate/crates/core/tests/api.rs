use proptest::prelude::*;
use thermecho_core::averages::{avg_linearized, avg_loschmidt, report};
use thermecho_core::echo::{bounds, echo_point, effective_dimension, ln_loschmidt, loschmidt};
use thermecho_core::model::mode_table;
use thermecho_core::stats::{classify_weights, weights, ClassifierConfig, Label};
use thermecho_core::{QuenchParams, Temperature};

fn params() -> impl Strategy<Value = QuenchParams> {
    (
        1usize..60,
        -2.0..2.0f64,
        -2.0..2.0f64,
        -1.5..1.5f64,
        -1.5..1.5f64,
        prop_oneof![(-2.0..2.0f64).prop_map(|lb| Temperature::Beta(10f64.powf(lb))), Just(Temperature::Zero)],
    )
        .prop_map(|(half, h0, h1, gamma0, gamma1, temperature)| QuenchParams {
            h0,
            h1,
            gamma0,
            gamma1,
            temperature,
            length: 2 * half,
        })
}

proptest! {
    #[test]
    fn echo_is_a_fidelity(p in params(), t in 0.0..200.0f64) {
        let table = mode_table(&p).unwrap();
        let le = loschmidt(&table, t);
        prop_assert!((0.0..=1.0).contains(&le));
        prop_assert_eq!(loschmidt(&table, 0.0), 1.0);
        prop_assert!((loschmidt(&table, -t) - le).abs() <= 1e-14);
        let z = ln_loschmidt(&table, t);
        prop_assert!(z <= 0.0);
        if le > 1e-300 {
            prop_assert!((z.exp() - le).abs() <= 1e-12 * le.max(1e-3));
        }
    }

    #[test]
    fn point_is_consistent(p in params(), t in 0.0..50.0f64) {
        let table = mode_table(&p).unwrap();
        let pt = echo_point(&table, t);
        let (lo, hi) = bounds(&table, t);
        prop_assert_eq!((pt.lower, pt.upper), (lo, hi));
        prop_assert!(pt.lower <= pt.le + 1e-12 && pt.le <= pt.upper + 1e-12);
        prop_assert!(pt.lef <= pt.le + 1e-12);
    }

    #[test]
    fn averages_are_ordered(p in params()) {
        let table = mode_table(&p).unwrap();
        let r = report(&table);
        let d = effective_dimension(&table).d_eff;
        prop_assert!(d >= 1.0);
        prop_assert!(r.mean_le <= 1.0 + 1e-12);
        prop_assert!(avg_linearized(&table) <= avg_loschmidt(&table) + 1e-12);
        prop_assert!((r.mean_lef * d) <= 1.0 + 1e-9);
        if let Some(v) = r.var_le {
            prop_assert!(v >= -1e-12);
        }
    }

    #[test]
    fn weights_are_non_negative_and_labelled(p in params()) {
        let table = mode_table(&p).unwrap();
        let w = weights(&table, false);
        prop_assert_eq!(w.modes.len(), p.length / 2);
        prop_assert!(w.a().all(|a| a >= 0.0));
        let c = classify_weights(&w, &ClassifierConfig::default());
        prop_assert_eq!(c.degenerate, c.label == Label::Indeterminate);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&c.dominance));
    }
}

#[test]
fn zero_temperature_matches_the_cold_limit() {
    let cold = QuenchParams::new(0.4, 1.3, 0.7, 0.2, 1e6, 40).unwrap();
    let zero = QuenchParams::zero_temperature(0.4, 1.3, 0.7, 0.2, 40).unwrap();
    let (a, b) = (mode_table(&cold).unwrap(), mode_table(&zero).unwrap());
    for t in [0.3, 1.7, 12.0] {
        assert!((loschmidt(&a, t) - loschmidt(&b, t)).abs() < 1e-12);
    }
}

#[test]
fn invalid_input_is_rejected() {
    assert!(QuenchParams::new(0.5, 0.5, 0.2, 0.2, 1.0, 3).is_err());
    assert!(QuenchParams::new(f64::NAN, 0.5, 0.2, 0.2, 1.0, 4).is_err());
    assert!(QuenchParams::new(0.5, 0.5, 0.2, 0.2, -1.0, 4).is_err());
    assert!(Temperature::from_temperature(-0.1).is_err());
}
