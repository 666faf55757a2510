use std::f64::consts::PI;

use proptest::prelude::*;
use qwsearch::{
    bivariate_gaussian_field, delta_oracle_field, linear_field, run, EvolutionConfig, GaussianParams, GridGeometry,
    OracleSpec, PotentialField, PotentialKind, Propagator, Vertex, WalkModel, WalkerState, Window,
};

fn series(model: WalkModel, field: PotentialField, steps: usize) -> Vec<f64> {
    let target = field.geometry().center();
    run(&EvolutionConfig::new(model, field, target).with_steps(steps)).unwrap().success_series
}

#[test]
fn narrow_gaussian_reproduces_oracle_search() {
    for side in [20, 50, 100] {
        let g = GridGeometry::new(side).unwrap();
        let gauss = bivariate_gaussian_field(g, &GaussianParams::centered(g, 0.01, PI).unwrap()).unwrap();
        let delta = delta_oracle_field(g, &OracleSpec::single(g.center())).unwrap();
        let a = series(WalkModel::model1(), gauss, 3 * side);
        let b = series(WalkModel::model1(), delta, 3 * side);
        let worst = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        assert!(worst < 1e-6, "L={side}: max deviation {worst}");
    }
}

#[test]
fn flat_field_keeps_uniform_state_for_model1() {
    let g = GridGeometry::new(12).unwrap();
    let field = PotentialField::constant(g, 0.7);
    let mut prop = Propagator::new(&WalkModel::model1(), &field);
    let mut state = WalkerState::uniform(g);
    for _ in 0..50 {
        prop.step(&mut state).unwrap();
    }
    let d = state.position_distribution(50);
    for &p in d.values() {
        assert!((p - 1.0 / 144.0).abs() < 1e-12);
    }
}

#[test]
fn benchmark_and_linear_fields_conserve_norm() {
    let g = GridGeometry::new(30).unwrap();
    let fields = [
        linear_field(g, PI / 8.0).unwrap(),
        qwsearch::ackley_field(g, PI).unwrap(),
        qwsearch::rastrigin_field(g, PI).unwrap(),
    ];
    for field in fields {
        for model in [WalkModel::model1(), WalkModel::model2()] {
            let mut prop = Propagator::new(&model, &field);
            let mut state = WalkerState::uniform(g);
            for _ in 0..1000 {
                prop.step(&mut state).unwrap();
            }
            assert!((state.norm() - 1.0).abs() < 1e-9, "{}: norm {}", field.kind(), state.norm());
            let total = state.position_distribution(1000).total();
            assert!((total - 1.0).abs() < 1e-9);
        }
    }
}

#[test]
fn window_extends_the_run() {
    let g = GridGeometry::new(10).unwrap();
    let cfg =
        EvolutionConfig::new(WalkModel::model1(), PotentialField::zero(g), g.center()).with_window(Window::new(5, 45));
    let rec = run(&cfg).unwrap();
    assert_eq!(rec.success_series.len(), 46);
    assert!(rec.peak.step >= 5);
}

fn random_field(side: usize, values: Vec<f64>) -> PotentialField {
    PotentialField::from_values(GridGeometry::new(side).unwrap(), PotentialKind::Custom, values).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn two_pi_shift_leaves_probabilities_unchanged(
        values in proptest::collection::vec(-5.0f64..5.0, 64),
        model2 in any::<bool>(),
        k in -3i32..=3,
    ) {
        let model = if model2 { WalkModel::model2() } else { WalkModel::model1() };
        let field = random_field(8, values.clone());
        let shifted = random_field(8, values.iter().map(|v| v + 2.0 * PI * k as f64).collect());
        let a = series(model.clone(), field, 40);
        let b = series(model, shifted, 40);
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn global_offset_is_a_global_phase(values in proptest::collection::vec(-5.0f64..5.0, 36), delta in -10.0f64..10.0) {
        let field = random_field(6, values);
        let moved = field.offset(delta).unwrap();
        let a = series(WalkModel::model2(), field, 30);
        let b = series(WalkModel::model2(), moved, 30);
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn evolution_is_unitary(
        values in proptest::collection::vec(-5.0f64..5.0, 25),
        model2 in any::<bool>(),
        x in 0usize..5, y in 0usize..5, c in 0usize..4,
    ) {
        let model = if model2 { WalkModel::model2() } else { WalkModel::model1() };
        let field = random_field(5, values);
        let g = field.geometry();
        let mut state = WalkerState::basis(g, qwsearch::CoinIndex::from_offset(c), Vertex::new(x, y)).unwrap();
        let mut prop = Propagator::new(&model, &field);
        for _ in 0..200 {
            prop.step(&mut state).unwrap();
        }
        prop_assert!((state.norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn steps_preserve_inner_products(
        values in proptest::collection::vec(-5.0f64..5.0, 16),
        a in (0usize..4, 0usize..4, 0usize..4),
        b in (0usize..4, 0usize..4, 0usize..4),
    ) {
        let field = random_field(4, values);
        let g = field.geometry();
        let mut s = WalkerState::basis(g, qwsearch::CoinIndex::from_offset(a.0), Vertex::new(a.1, a.2)).unwrap();
        let mut t = WalkerState::basis(g, qwsearch::CoinIndex::from_offset(b.0), Vertex::new(b.1, b.2)).unwrap();
        let before = s.inner_product(&t).unwrap();
        let mut prop = Propagator::new(&WalkModel::model2(), &field);
        for _ in 0..10 {
            prop.step(&mut s).unwrap();
            prop.step(&mut t).unwrap();
        }
        prop_assert!((s.inner_product(&t).unwrap() - before).norm() < 1e-12);
    }
}
