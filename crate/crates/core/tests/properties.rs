use lembas::dynamics::{snapshot, RunOptions, System};
use lembas::lembas::{energy_flows, incoherent_generator_from_correlations, lembas_split, local_temperature, MeasurementBasis};
use lembas::linalg::{herm_eig, kron, partial_trace_b, propagator, von_neumann_entropy, ComplexMatrix};
use lembas::states::{correlation_operator, thermal_state, validate_density, BipartiteSystem, TimeOperator};
use lembas::{CMatrix, Density};
use num_complex::Complex;
use proptest::prelude::*;

fn matrix(n: usize) -> impl Strategy<Value = CMatrix> {
    prop::collection::vec(-1.0f64..1.0, 2 * n * n).prop_map(move |v| {
        CMatrix::from_vec(v.chunks(2).map(|p| Complex::new(p[0], p[1])).collect()).unwrap()
    })
}

fn hermitian(n: usize) -> impl Strategy<Value = CMatrix> {
    matrix(n).prop_map(|m| m.hermitian_part())
}

fn density(n: usize) -> impl Strategy<Value = Density> {
    matrix(n).prop_map(move |a| {
        let m = a.matmul(&a.dagger()) + CMatrix::identity(n).scale_real(1e-3);
        let tr = m.trace().re;
        validate_density(m.scale_real(1.0 / tr).hermitian_part()).unwrap()
    })
}

fn unitary(n: usize) -> impl Strategy<Value = CMatrix> {
    hermitian(n).prop_map(|h| propagator(&h, 1.0).unwrap())
}

fn close(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).frobenius_norm()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kron_is_associative((a, b, c) in (1usize..=3, 1usize..=3, 1usize..=2)
        .prop_flat_map(|(x, y, z)| (matrix(x), matrix(y), matrix(z)))) {
        let left = kron(&kron(&a, &b), &c);
        let right = kron(&a, &kron(&b, &c));
        prop_assert!(close(&left, &right) < 1e-13);
    }

    #[test]
    fn partial_trace_of_product((a, b) in (1usize..=4, 1usize..=4).prop_flat_map(|(x, y)| (matrix(x), matrix(y)))) {
        let reduced = partial_trace_b(&kron(&a, &b), a.dim(), b.dim()).unwrap();
        prop_assert!(close(&reduced, &(a.clone() * b.trace())) < 1e-12);
    }

    #[test]
    fn propagators_compose(h in (1usize..=6).prop_flat_map(hermitian), t1 in -2.0f64..2.0, t2 in -2.0f64..2.0) {
        let u = propagator(&h, t1).unwrap().matmul(&propagator(&h, t2).unwrap());
        prop_assert!(close(&u, &propagator(&h, t1 + t2).unwrap()) < 1e-11);
    }

    #[test]
    fn entropy_is_unitarily_invariant((rho, u) in (1usize..=5).prop_flat_map(|n| (density(n), unitary(n)))) {
        let rotated = validate_density(rho.matrix().conjugate_by(&u).hermitian_part()).unwrap();
        prop_assert!((von_neumann_entropy(&rho) - von_neumann_entropy(&rotated)).abs() < 1e-10);
    }

    #[test]
    fn eigendecomposition_reconstructs(h in (1usize..=16).prop_flat_map(hermitian)) {
        let eig = herm_eig(&h).unwrap();
        prop_assert!(close(&eig.reconstruct(), &h) < 1e-11 * h.frobenius_norm().max(1.0));
        prop_assert!(eig.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        let v = &eig.eigenvectors;
        prop_assert!(close(&v.dagger().matmul(v), &CMatrix::identity(h.dim())) < 1e-12);
    }

    #[test]
    fn split_is_complete_and_idempotent((h_a, h_eff) in (1usize..=5).prop_flat_map(|n| (hermitian(n), hermitian(n)))) {
        let basis = MeasurementBasis::energy(&h_a).unwrap();
        let s = lembas_split(&h_eff, &h_a, &basis).unwrap();
        prop_assert!(close(&(&s.h_eff1 + &s.h_eff2), &h_eff) < 1e-14);
        prop_assert!(close(&basis.project(&s.h_eff1), &s.h_eff1) < 1e-13);
        prop_assert!(basis.project(&s.h_eff2).frobenius_norm() < 1e-13);
        let comm = &s.h_eff1.matmul(&h_a) - &h_a.matmul(&s.h_eff1);
        prop_assert!(comm.frobenius_norm() < 1e-10);
    }

    #[test]
    fn first_law_and_routes_agree(
        (h_a, h_b, h_ab, rho) in (2usize..=3, 2usize..=3).prop_flat_map(|(da, db)| {
            (hermitian(da), hermitian(db), hermitian(da * db), density(da * db))
        })
    ) {
        let (da, db) = (h_a.dim(), h_b.dim());
        let basis = MeasurementBasis::energy(&h_a).unwrap();
        let system = System::Bipartite(BipartiteSystem::new(h_a, h_b, TimeOperator::constant(h_ab.clone())).unwrap());
        let snap = snapshot(&system, &rho, 0.0, &basis, RunOptions { verify_routes: true }).unwrap();
        let flows = energy_flows(&snap.split, &snap.dh_eff1_dt, &snap.l_inc, &snap.rho_a, &snap.drho_a).unwrap();
        let direct = snap.dh_eff1_dt.trace_product(snap.rho_a.matrix()).re
            + snap.split.h_prime.trace_product(&snap.drho_a).re;
        prop_assert!((flows.dw_dt + flows.dq_dt - direct).abs() < 1e-12);

        let corr = correlation_operator(&rho, da, db).unwrap();
        let l_corr = incoherent_generator_from_correlations(&h_ab, &corr, da, db).unwrap();
        prop_assert!(close(&l_corr, &snap.l_inc) < 1e-12);
        prop_assert!(snap.l_inc.trace().norm() < 1e-13);
    }

    #[test]
    fn canonical_states_report_their_temperature(
        (h, l) in (2usize..=4).prop_flat_map(|n| (hermitian(n), hermitian(n))),
        beta in 0.1f64..5.0,
    ) {
        let n = h.dim();
        let l = &l - &CMatrix::identity(n).scale_real(l.trace().re / n as f64);
        let rho = thermal_state(&h, beta).unwrap();
        prop_assume!(h.trace_product(&l).re.abs() > 1e-3);
        let t = local_temperature(&h, &l, &rho).unwrap().unwrap();
        prop_assert!((t * beta - 1.0).abs() < 1e-9);
    }

    #[test]
    fn thermal_states_are_valid(h in (1usize..=6).prop_flat_map(hermitian), beta in 0.0f64..20.0) {
        let rho = thermal_state(&h, beta).unwrap();
        prop_assert!((rho.matrix().trace().re - 1.0).abs() < 1e-13);
        prop_assert!(validate_density(rho.matrix().clone()).is_ok());
    }

    #[test]
    fn single_precision_tracks_double(h in (1usize..=4).prop_flat_map(hermitian), t in -1.0f64..1.0) {
        let u64 = propagator(&h, t).unwrap();
        let u32: ComplexMatrix<f32> = propagator(&h.cast::<f32>(), t as f32).unwrap();
        prop_assert!(close(&u32.cast::<f64>(), &u64) < 1e-4);
    }
}
