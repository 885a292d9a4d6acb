use lembas::dynamics::{RunOptions, TimeGrid};
use lembas::lembas::effective_hamiltonian;
use lembas::scenarios::*;
use lembas::states::trace_distance;
use lembas::{CMatrix, Density};

fn tls(detuning: f64, g: f64, frame: Frame) -> DrivenTlsConfig {
    DrivenTlsConfig::detuned(1.0, g, detuning, 2.0, frame)
}

#[test]
fn free_tls_does_no_work() {
    let cfg = tls(0.0, 0.0, Frame::Rwa);
    let grid = TimeGrid::new(0.0, 10.0, 256).unwrap();
    let traj = run_driven_tls(&cfg, &grid, None, RunOptions::default()).unwrap();
    assert!(traj.records.iter().all(|r| r.w_cum == 0.0 && r.dw_dt == 0.0));
}

#[test]
fn resonant_rwa_work_rate_matches_closed_form() {
    let cfg = tls(0.0, 0.1, Frame::Rwa);
    let traj = run_driven_tls(&cfg, &cfg.default_grid().unwrap(), None, RunOptions::default()).unwrap();
    let peak = 0.5 * cfg.delta_e * cfg.g * (0.5 * cfg.beta * cfg.delta_e).tanh();
    for r in &traj.records {
        assert!((r.dw_dt - analytic_tls_work(&cfg, r.t)).abs() < 1e-6 * peak, "t={}", r.t);
        assert!(r.dq_dt.abs() < 1e-12);
    }
    assert!(traj.heat_total().abs() < 1e-12);
}

#[test]
fn detuned_rwa_work_tracks_both_definitions() {
    let cfg = tls(0.04, 0.1, Frame::Rwa);
    let traj = run_driven_tls(&cfg, &cfg.default_grid().unwrap(), None, RunOptions::default()).unwrap();
    let amp = cfg.delta_e * cfg.g * cfg.g / (2.0 * cfg.rabi_frequency());
    for r in &traj.records {
        assert!((r.dw_dt - analytic_tls_work(&cfg, r.t)).abs() < 1e-9 * amp);
        let (old_w, _) = r.old_rates.unwrap();
        assert!((old_w - analytic_tls_work_old(&cfg, r.t)).abs() < 1e-9 * amp);
    }
}

#[test]
fn lab_frame_peak_work_close_to_rwa() {
    let rwa = tls(0.0, 0.01, Frame::Rwa);
    let lab = tls(0.0, 0.01, Frame::Lab);
    let n = 65536;
    let grid = rwa.rabi_grid(0.5, n).unwrap();
    let peak = |cfg: &DrivenTlsConfig| {
        let traj = run_driven_tls(cfg, &grid, None, RunOptions::default()).unwrap();
        traj.records.iter().map(|r| r.w_cum).fold(f64::MIN, f64::max)
    };
    let (p_rwa, p_lab) = (peak(&rwa), peak(&lab));
    assert!(((p_lab - p_rwa) / p_rwa).abs() < 0.02, "rwa {p_rwa} lab {p_lab}");
}

#[test]
fn analytic_tls_examples() {
    let cfg = tls(0.0, 0.1, Frame::Rwa);
    assert_eq!(analytic_tls_work(&cfg, 0.0), 0.0);
    let quarter = std::f64::consts::FRAC_PI_2 / cfg.rabi_frequency();
    let amp = 0.5 * cfg.delta_e * cfg.g * (0.5 * cfg.beta * cfg.delta_e).tanh();
    assert!((analytic_tls_work(&cfg, quarter) - amp).abs() < 1e-15);
    assert_eq!(analytic_tls_work(&cfg, 1.7), analytic_tls_work_old(&cfg, 1.7));

    let amplitude = |d: f64| {
        let c = tls(d, 0.1, Frame::Rwa);
        analytic_tls_work(&c, std::f64::consts::FRAC_PI_2 / c.rabi_frequency())
    };
    let mut last = f64::INFINITY;
    for k in 0..20 {
        let a = amplitude(0.01 * k as f64);
        assert!(a < last);
        assert!((a - amplitude(-0.01 * k as f64)).abs() < 1e-15);
        last = a;
    }

    let dark = tls(-1.0, 0.1, Frame::Rwa);
    assert_eq!(analytic_tls_work_old(&dark, 3.0), 0.0);
}

#[test]
fn old_definition_peaks_off_resonance() {
    let g = 0.5;
    let integrated = |d: f64| {
        let c = tls(d, g, Frame::Rwa);
        analytic_tls_work_old_integral(&c, std::f64::consts::PI / c.rabi_frequency())
    };
    let grid: Vec<f64> = (0..=40).map(|k| -0.5 + 0.025 * k as f64).collect();
    let best = grid
        .iter()
        .copied()
        .max_by(|a, b| integrated(*a).total_cmp(&integrated(*b)))
        .unwrap();
    assert!(best.abs() > 0.025);
}

fn swap_default() -> SwapConfig {
    SwapConfig::default()
}

#[test]
fn swap_without_coupling_is_stationary() {
    let cfg = SwapConfig { g: 0.0, ..swap_default() };
    let grid = TimeGrid::new(0.0, 30.0, 64).unwrap();
    let traj = run_swap(&cfg, SwapView::A, &grid, None, RunOptions::default()).unwrap();
    let rho0 = traj.records[0].rho_a.clone();
    for r in &traj.records {
        assert!(trace_distance(&r.rho_a, &rho0).unwrap() < 1e-14);
        assert_eq!(r.dq_dt, 0.0);
    }
}

#[test]
fn swap_exchanges_populations_and_cools_a() {
    let cfg = swap_default();
    let grid = cfg.default_grid().unwrap();
    let sys = swap_system(&cfg).unwrap();
    let rho0 = cfg.initial_state().unwrap();
    let states = lembas::dynamics::evolve_full(&sys, &rho0, &grid).unwrap();
    let end = states.last().unwrap().matrix();
    let start = rho0.matrix();
    assert!((end[(1, 1)].re - start[(2, 2)].re).abs() < 1e-12);
    assert!((end[(2, 2)].re - start[(1, 1)].re).abs() < 1e-12);

    let rho_a = states.last().unwrap().reduce_to_a(2, 2).unwrap();
    let target = lembas::states::thermal_state(&cfg.h_a(), cfg.final_beta()).unwrap();
    assert!(trace_distance(&rho_a, &target).unwrap() < 1e-8);
    assert!(rho_a.matrix()[(0, 1)].norm() < 1e-12);
}

#[test]
fn analytic_swap_examples() {
    let sym = SwapConfig { delta_e_b: 1.0, ..swap_default() };
    for &t in &[0.3, 5.0, 17.0] {
        assert_eq!(analytic_swap_work(&sym, t), 0.0);
        assert_eq!(analytic_swap_heat_a(&sym, t), 0.0);
    }
    let cfg = swap_default();
    assert_eq!(analytic_swap_work(&cfg, 0.0), 0.0);
    assert_eq!(analytic_swap_heat_a(&cfg, 0.0), 0.0);
}

#[test]
fn swap_rates_at_quarter_period_match_closed_forms() {
    let cfg = swap_default();
    let t = std::f64::consts::FRAC_PI_2 / cfg.g;
    let grid = TimeGrid::new(0.0, t, 1024).unwrap();
    let ab = run_swap(&cfg, SwapView::Ab, &grid, None, RunOptions::default()).unwrap();
    let a = run_swap(&cfg, SwapView::A, &grid, None, RunOptions { verify_routes: true }).unwrap();
    assert!((ab.last().dw_dt - analytic_swap_work(&cfg, t)).abs() < 1e-6);
    assert!(ab.last().dq_dt.abs() < 1e-12);
    // the closed form counts heat that flows back into A
    assert!((-a.last().dq_dt - analytic_swap_heat_a(&cfg, t)).abs() < 1e-6);
    assert_eq!(a.last().dw_dt, 0.0);
}

#[test]
fn swap_effective_hamiltonian_matches_closed_form() {
    let cfg = swap_default();
    let coupling = swap_partner_coupling(&cfg);
    let grid = cfg.swap_grid(512).unwrap();
    let states = lembas::dynamics::evolve_full(&swap_system(&cfg).unwrap(), &cfg.initial_state().unwrap(), &grid).unwrap();
    for (k, rho) in states.iter().enumerate().step_by(64) {
        let t = grid.time(k);
        let rho_b = rho.reduce_to_b(2, 2).unwrap();
        let h = effective_hamiltonian(&coupling, &rho_b, 2, 2).unwrap();
        let closed = analytic_swap_heff_a(&cfg, t);
        assert!((&h - &closed).frobenius_norm() < 1e-8, "t={t}");
        let sz = CMatrix::sigma_z();
        assert!((closed.matmul(&sz) - sz.matmul(&closed)).frobenius_norm() == 0.0);
    }
    let period = std::f64::consts::TAU / cfg.g;
    let d = &analytic_swap_heff_a(&cfg, 0.3 * period) - &analytic_swap_heff_a(&cfg, 0.7 * period);
    assert!(d.frobenius_norm() < 1e-14);
}

#[test]
fn simulated_efficiency_matches_closed_form() {
    for &b in &[2.0, 1.5] {
        let cfg = SwapConfig { delta_e_b: b, ..swap_default() };
        let grid = cfg.default_grid().unwrap();
        let w_ab = run_swap(&cfg, SwapView::Ab, &grid, None, RunOptions::default()).unwrap().work_total();
        let q_a = restoring_heat(&run_swap(&cfg, SwapView::A, &grid, None, RunOptions::default()).unwrap());
        let half = std::f64::consts::PI / cfg.g;
        assert!((w_ab / analytic_swap_work_integral(&cfg, half) - 1.0).abs() < 1e-6);
        assert!((q_a / analytic_swap_heat_a_integral(&cfg, half) - 1.0).abs() < 1e-6);
        assert!((-q_a / w_ab - swap_efficiency(&cfg).unwrap()).abs() < 1e-6);
    }
}

#[test]
fn swap_lab_and_rotating_frames_agree() {
    let rot = swap_default();
    let lab = SwapConfig { frame: Frame::Lab, ..rot };
    let grid = rot.swap_grid(8192).unwrap();
    let a = run_swap(&rot, SwapView::A, &grid, None, RunOptions::default()).unwrap();
    let b = run_swap(&lab, SwapView::A, &grid, None, RunOptions::default()).unwrap();
    assert!((a.heat_total() - b.heat_total()).abs() < 1e-6, "{} {}", a.heat_total(), b.heat_total());
    assert!((a.last().u_a - b.last().u_a).abs() < 1e-6);
}

#[test]
fn driver_sigma_x_far_detuned_transfers_little() {
    let s = driver_coupling_demo(DriveCoupling::SigmaX, true).unwrap();
    assert!(s.max_abs_w_cum <= s.rabi_bound * (1.0 + 1e-6));
    assert!(s.max_abs_dq_dt < 1e-12);
    let resonant = driver_coupling_demo(DriveCoupling::SigmaX, false).unwrap();
    assert!(resonant.max_abs_w_cum > 10.0 * s.max_abs_w_cum);
}

#[test]
fn driver_sigma_z_is_pure_work() {
    let s = driver_coupling_demo(DriveCoupling::SigmaZ, false).unwrap();
    assert_eq!(s.max_abs_dq_dt, 0.0);
    assert!(s.max_abs_dw_dt > 1e-3);
    assert!((s.u_change - s.w_total).abs() < 1e-7);
}

#[test]
fn initial_states_are_thermal() {
    let cfg = swap_default();
    let rho: Density = cfg.initial_state().unwrap();
    let z = cfg.partition();
    let expected = [1.0 / z, (cfg.beta_i * cfg.delta_e_b).exp() / z, (cfg.beta_i * cfg.delta_e_a).exp() / z];
    for (k, p) in expected.iter().enumerate() {
        assert!((rho.matrix()[(k, k)].re - p).abs() < 1e-15);
    }
}
