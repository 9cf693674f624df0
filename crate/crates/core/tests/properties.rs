use proptest::prelude::*;

use wb_core::grid::{BoundaryKind, BoundaryPolicy, CellField, Grid, Side};
use wb_core::harness::{builtin_case, run_case, InitialCondition, RunConfig};
use wb_core::models::{BalanceLaw, BurgersModel, DepthFunction, ShallowWaterModel, TransportModel};
use wb_core::numflux::{rusanov, ViscosityRule};
use wb_core::par::Exec;
use wb_core::reconstruction::{avg, minmod, FrozenWeights};
use wb_core::state::State;
use wb_core::steppers::{compute_dt, Scheme, SolverConfig, Stepper, StepperConfig};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn minmod_is_bounded_and_sign_consistent(a in -1e3f64..1e3, b in -1e3f64..1e3) {
        let m = minmod(a, b);
        prop_assert!(m.abs() <= a.abs().min(b.abs()));
        prop_assert!(m * a >= 0.0 && m * b >= 0.0);
        prop_assert_eq!(minmod(a, b), minmod(b, a));
    }

    #[test]
    fn avg_weights_partition_unity(a in -1e3f64..1e3, b in -1e3f64..1e3) {
        prop_assert_eq!(avg(a, b), avg(b, a));
        let (l, r) = FrozenWeights::Avg.weights(a, b);
        prop_assert!((l + r - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn rusanov_is_consistent(h in 0.05f64..5.0, q in -5.0f64..5.0, u in -5.0f64..5.0) {
        let s = ShallowWaterModel::new(9.81, 0.02, DepthFunction::cos_bump());
        let w = State([h, q]);
        let d = rusanov(&s, &w, &w, ViscosityRule::LocalMax).unwrap() - s.flux(&w).unwrap();
        prop_assert!(d.max_abs() <= 1e-12 * (1.0 + s.flux(&w).unwrap().max_abs()));
        let b = BurgersModel { alpha: 1.0 };
        let v = State([u]);
        prop_assert!((rusanov(&b, &v, &v, ViscosityRule::LocalMax).unwrap() - b.flux(&v).unwrap()).max_abs() <= 1e-14);
    }

    #[test]
    fn stationary_transport_is_preserved(base in 0.2f64..3.0, alpha in -1.5f64..1.5, n in 10usize..80) {
        let mut cfg = builtin_case("transport.test1").unwrap();
        cfg.set("alpha", &alpha.to_string()).unwrap();
        cfg.left = wb_core::harness::BoundarySpec::Dirichlet(vec![(0, base)]);
        cfg.initial = InitialCondition::Stationary { start: Side::Left, value: vec![base] };
        cfg.n_cells = n;
        cfg.t_end = 0.3;
        cfg.exec = Exec::Sequential;
        let r = run_case(&cfg).unwrap();
        prop_assert!(r.reference_error().unwrap()[0] <= 1e-12 * base.max(1.0) * 3f64.exp());
    }

    #[test]
    fn periodic_transport_conserves_mass(amp in 0.0f64..1.0, center in 0.2f64..1.8) {
        let model = TransportModel::new(1.0, 0.0).unwrap();
        let grid = Grid::new(0.0, 2.0, 50).unwrap();
        let policy = BoundaryPolicy::periodic();
        let cfg = StepperConfig { exec: Exec::Sequential, ..StepperConfig::new(Scheme::Iewbm2) };
        let stepper = Stepper::new(&model, &grid, &policy, &cfg).unwrap();
        let u = CellField::sample(&grid, |x| State([1.0 + amp * (-30.0 * (x - center).powi(2)).exp()])).0;
        let dt = compute_dt(2.0, &grid, &u, &model, f64::INFINITY).unwrap();
        let (next, _) = stepper.step(&u, dt).unwrap();
        let before = CellField(u).integral(&grid);
        let after = CellField(next).integral(&grid);
        prop_assert!((after - before).max_abs() <= 1e-13);
    }
}

#[test]
fn burgers_single_newton_iteration_keeps_stationary_state() {
    let model = BurgersModel { alpha: 1.0 };
    let grid = Grid::new(0.0, 2.0, 100).unwrap();
    let policy = BoundaryPolicy {
        left: BoundaryKind::Dirichlet(vec![(0, 1.0)]),
        right: BoundaryKind::Transmissive,
    };
    let cfg = StepperConfig {
        solver: SolverConfig {
            newton_iters: 1,
            ..SolverConfig::default()
        },
        exec: Exec::Sequential,
        ..StepperConfig::new(Scheme::Iewbm1)
    };
    let stepper = Stepper::new(&model, &grid, &policy, &cfg).unwrap();
    let mut u = CellField::sample(&grid, |x| State([x.exp()])).0;
    let exact = u.clone();
    for _ in 0..20 {
        let dt = compute_dt(2.0, &grid, &u, &model, f64::INFINITY).unwrap();
        u = stepper.step(&u, dt).unwrap().0;
    }
    let drift = u
        .iter()
        .zip(&exact)
        .map(|(a, b)| (*a - *b).max_abs())
        .fold(0.0, f64::max);
    assert!(drift <= 1e-12, "drift {drift:e}");
}

#[test]
fn reference_matches_initial_for_stationary_cases() {
    for name in ["transport.test1", "burgers.test1", "swe.test1", "swe.test5"] {
        let cfg = RunConfig {
            t_end: 0.0,
            ..builtin_case(name).unwrap()
        };
        let r = run_case(&cfg).unwrap();
        assert!(r.initial_reference_error().unwrap().iter().all(|&e| e <= 1e-14), "{name}");
    }
}
