//! Master-equation relaxation and driven strokes.

use qotto::fock::{
    analytic_steady_state, nonadiabatic_factor_analytic, nonadiabatic_factor_numeric, null_space_steady_state,
    solve_steady_state, unitary_transition_matrix_with, DrivingProtocol, InitialState, MasterEquation, PropagationOptions,
    SteadyStateOptions,
};
use qotto::ode::Control;
use qotto::reservoir::effective_reservoir;
use qotto::{CycleConfig, Error, FockCutoff, FockOperator};

fn hot_reservoir(discord: f64) -> qotto::EffectiveReservoir {
    let c = CycleConfig::reference().with_discord(discord).unwrap();
    effective_reservoir(&c.nonthermal_reservoir()).unwrap()
}

#[test]
fn every_step_stays_a_density_matrix() {
    let res = hot_reservoir(0.2);
    let dim = 48;
    let eq = MasterEquation::new(&res, 0.05, dim);
    // a coherent superposition exercises the off-diagonal blocks too
    let amps: Vec<_> = (0..dim)
        .map(|n| qotto::Complex::from_polar(0.8f64.powi(n as i32), 0.3 * n as f64))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    let amps: Vec<_> = amps.iter().map(|a| a / norm).collect();
    let initial = FockOperator::pure(&amps);
    let (mut worst_trace, mut worst_herm, mut worst_eig) = (0.0f64, 0.0f64, 0.0f64);
    let mut steps = 0;
    let out = eq.evolve(&initial, 200_000, |_, rho, residual| {
        steps += 1;
        worst_trace = worst_trace.max((rho.trace() - 1.0).abs());
        worst_herm = worst_herm.max(rho.hermiticity_error());
        if steps % 25 == 0 {
            worst_eig = worst_eig.min(rho.min_eigenvalue());
        }
        if residual < 1e-10 {
            Control::Stop
        } else {
            Control::Continue
        }
    });
    assert!(out.stopped_by_observer);
    assert!(worst_trace < 1e-9, "trace {worst_trace}");
    assert!(worst_herm < 1e-9, "hermiticity {worst_herm}");
    assert!(worst_eig > -1e-9, "eigenvalue {worst_eig}");
}

#[test]
fn ode_null_space_and_geometric_state_agree() {
    for q in [0.0, 0.3, 0.5] {
        let res = hot_reservoir(q);
        let dim = 64;
        let opts = SteadyStateOptions { dim, ..SteadyStateOptions::default() };
        let ode = solve_steady_state(&res, &opts).unwrap();
        let ns = null_space_steady_state(res.r1, res.r2, dim).unwrap();
        let exact = analytic_steady_state(res.beta_eff * res.omega, dim);
        assert!(ode.state.trace_distance(&exact) < 1e-6);
        assert!(ns.trace_distance(&exact) < 1e-12);
        assert!(ode.state.max_coherence() < 1e-9);
        let n_bose = res.bose_occupation();
        assert!((exact.mean_number() - n_bose).abs() < 1e-9);
    }
}

#[test]
fn steady_state_does_not_depend_on_gamma_tau() {
    let res = hot_reservoir(0.4);
    let solve = |gamma_tau: f64, initial| {
        let opts = SteadyStateOptions { dim: 40, gamma_tau, initial, ..SteadyStateOptions::default() };
        solve_steady_state(&res, &opts).unwrap().state
    };
    let a = solve(0.01, InitialState::MaximallyMixed);
    let b = solve(0.3, InitialState::Vacuum);
    let c = solve(0.05, InitialState::Thermal { beta_omega: 4.0 });
    assert!(a.trace_distance(&b) < 1e-8);
    assert!(a.trace_distance(&c) < 1e-8);
}

#[test]
fn undersized_cutoff_is_refused() {
    let res = hot_reservoir(0.5);
    let opts = SteadyStateOptions { dim: 10, ..SteadyStateOptions::default() };
    match solve_steady_state(&res, &opts) {
        Err(Error::CutoffTooSmall { dim, required, .. }) => {
            assert_eq!(dim, 10);
            assert!(required > 10);
            let ok = SteadyStateOptions { dim: required, ..opts };
            assert!(solve_steady_state(&res, &ok).is_ok());
        }
        other => panic!("expected CutoffTooSmall, got {other:?}"),
    }
}

#[test]
fn strokes_are_micro_reversible_and_parity_conserving() {
    // squeezing pushes the upper rows into the guard band; the low rows are
    // converged and free of truncation
    let rows = 12;
    let opts = PropagationOptions { checked_rows: Some(rows), ..PropagationOptions::new(FockCutoff::default()) };
    for &(wc, wh, tau) in &[(2.0f64, 6.0, 0.8), (2.0, 3.8, 1.6), (1.0, 2.5, 0.5)] {
        let comp = unitary_transition_matrix_with(&DrivingProtocol::compression(wc, wh, tau), &opts).unwrap();
        let exp = unitary_transition_matrix_with(&DrivingProtocol::expansion(wc, wh, tau), &opts).unwrap();
        for n in 0..rows {
            for m in 0..rows {
                assert!((comp.get(n, m) - exp.get(m, n)).abs() < 1e-12, "({n},{m})");
                if (n + m) % 2 == 1 {
                    assert!(comp.get(n, m).abs() < 1e-12);
                }
            }
        }
        assert!(comp.stochasticity_error(rows) < 1e-10);
    }
}

#[test]
fn nonadiabatic_factor_never_drops_below_one() {
    for &(wc, wh) in &[(2.0f64, 6.0), (2.0, 3.8)] {
        let mut prev_far = f64::INFINITY;
        for tau in qotto::scalar::logspace(0.05, 200.0, 400) {
            let phi = nonadiabatic_factor_analytic(tau, wc, wh).unwrap();
            assert!(phi >= 1.0 - 1e-14, "tau {tau}: {phi}");
            if tau > 20.0 {
                assert!(phi - 1.0 < 1e-2);
                prev_far = prev_far.min(phi);
            }
        }
        assert!(prev_far < 1.0 + 1e-4);
    }
}

#[test]
fn numeric_factor_tracks_the_closed_form() {
    for &(wc, wh, tau) in &[(2.0f64, 3.8, 0.8), (2.0, 6.0, 3.2), (1.0, 1.5, 2.0)] {
        let a = nonadiabatic_factor_analytic(tau, wc, wh).unwrap();
        let n = nonadiabatic_factor_numeric(tau, wc, wh, FockCutoff::default()).unwrap();
        assert!((a - n).abs() < 1e-8, "{wc} {wh} {tau}: {a} vs {n}");
    }
}
