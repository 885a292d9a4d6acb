//! Time evolution of the full system and per-step local energy bookkeeping.
//!
//! States are propagated with midpoint-sampled piecewise-constant exponentials
//! `U_k = exp(−i H(t_{k−1} + dt/2) dt)`, which is second order in `dt` and
//! exactly unitary. Work and heat are accumulated with the trapezoidal rule.

use crate::error::{Error, Result};
use crate::lembas::{
    energy_flows, incoherent_generator_from_correlations, incoherent_generator_from_derivative,
    internal_energy, lembas_split, old_definition_split, partner_contraction, LembasSplit,
    MeasurementBasis,
};
use crate::linalg::{c, commutator, kron, partial_trace_a, partial_trace_b, propagator, von_neumann_entropy, ComplexMatrix};
use crate::scalar::Real;
use crate::states::{
    correlation_operator, BipartiteSystem, DensityOperator, FrameGenerator, SemiclassicalSystem,
    TimeOperator,
};

/// Uniform grid `t_k = t0 + k (t1 − t0)/n_steps`, `k = 0..=n_steps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid<T> {
    pub t0: T,
    pub t1: T,
    pub n_steps: usize,
}

impl<T: Real> TimeGrid<T> {
    pub fn new(t0: T, t1: T, n_steps: usize) -> Result<Self> {
        if !(t1 > t0) || !t0.is_finite() || !t1.is_finite() {
            return Err(Error::InvalidInput(format!("time grid needs t1 > t0, got [{t0}, {t1}]")));
        }
        if n_steps < 2 {
            return Err(Error::InvalidInput(format!("time grid needs n_steps >= 2, got {n_steps}")));
        }
        Ok(Self { t0, t1, n_steps })
    }

    pub fn dt(&self) -> T {
        (self.t1 - self.t0) / T::lit(self.n_steps as f64)
    }

    pub fn time(&self, k: usize) -> T {
        self.t0 + (self.t1 - self.t0) * T::lit(k as f64) / T::lit(self.n_steps as f64)
    }

    pub fn with_steps(&self, n_steps: usize) -> Result<Self> {
        Self::new(self.t0, self.t1, n_steps)
    }
}

/// Either a genuinely bipartite system or a subsystem driven by a classical field.
#[derive(Debug, Clone)]
pub enum System<T> {
    Bipartite(BipartiteSystem<T>),
    Semiclassical(SemiclassicalSystem<T>),
}

impl<T: Real> From<BipartiteSystem<T>> for System<T> {
    fn from(s: BipartiteSystem<T>) -> Self {
        System::Bipartite(s)
    }
}

impl<T: Real> From<SemiclassicalSystem<T>> for System<T> {
    fn from(s: SemiclassicalSystem<T>) -> Self {
        System::Semiclassical(s)
    }
}

impl<T: Real> System<T> {
    /// Dimension of the evolved state.
    pub fn state_dim(&self) -> usize {
        match self {
            System::Bipartite(s) => {
                let (da, db) = s.dims();
                da * db
            }
            System::Semiclassical(s) => s.dim(),
        }
    }

    pub fn local_dim(&self) -> usize {
        match self {
            System::Bipartite(s) => s.dims().0,
            System::Semiclassical(s) => s.dim(),
        }
    }

    pub fn h_a(&self) -> &ComplexMatrix<T> {
        match self {
            System::Bipartite(s) => s.h_a(),
            System::Semiclassical(s) => s.h_a(),
        }
    }

    pub fn generator(&self, t: T) -> ComplexMatrix<T> {
        match self {
            System::Bipartite(s) => s.generator(t),
            System::Semiclassical(s) => s.generator(t),
        }
    }

    pub fn is_time_independent(&self) -> bool {
        match self {
            System::Bipartite(s) => s.is_time_independent(),
            System::Semiclassical(s) => s.is_time_independent(),
        }
    }

    pub fn has_frame(&self) -> bool {
        match self {
            System::Bipartite(s) => s.frame().is_some(),
            System::Semiclassical(s) => s.frame().is_some(),
        }
    }

    fn frame_a(&self) -> ComplexMatrix<T> {
        match self {
            System::Bipartite(s) => s.frame_a(),
            System::Semiclassical(s) => s.frame_a(),
        }
    }

    /// Energy scale `max(1, ‖H(t)‖_F)` used to normalise tolerances.
    pub fn energy_scale(&self, t: T) -> T {
        let local = match self {
            System::Bipartite(s) => {
                let (da, db) = s.dims();
                kron(s.h_a(), &ComplexMatrix::identity(db)) + kron(&ComplexMatrix::identity(da), s.h_b())
                    + s.h_ab().at(t)
            }
            System::Semiclassical(s) => s.h_a() + &s.drive().at(t),
        };
        local.frobenius_norm().max(T::one())
    }
}

/// `e^{iKt} op(t) e^{−iKt}` without the `−K` shift.
fn conjugate_into_frame<T: Real>(op: &TimeOperator<T>, k: &FrameGenerator<T>) -> TimeOperator<T> {
    let (value, deriv) = (op.clone(), op.clone());
    let (k1, k2) = (k.clone(), k.clone());
    let kmat = k.matrix();
    TimeOperator::varying(op.dim(), move |t| value.at(t).conjugate_by(&k1.unitary(t))).with_derivative(
        move |t| {
            // d/dt (R H R†) = R Ḣ R† + i[K, R H R†]
            let rotated = deriv.at(t).conjugate_by(&k2.unitary(t));
            let comm = commutator(&kmat, &rotated).expect("frame and operator dimensions agree");
            deriv.derivative_at(t).conjugate_by(&k2.unitary(t)) + comm.scale(c(T::zero(), T::one()))
        },
    )
}

/// Transforms a lab-frame Hamiltonian into the frame rotating with `U(t) = e^{iKt}`:
/// `H_rot(t) = U H(t) U† + i U̇ U† = U H(t) U† − K`.
pub fn rotating_frame<T: Real>(h: &TimeOperator<T>, k: &FrameGenerator<T>) -> Result<TimeOperator<T>> {
    if h.dim() != k.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            actual: k.dim(),
        });
    }
    let rotated = conjugate_into_frame(h, k);
    let deriv = rotated.clone();
    let kmat = k.matrix();
    Ok(TimeOperator::varying(h.dim(), move |t| rotated.at(t) - &kmat)
        .with_derivative(move |t| deriv.derivative_at(t)))
}

/// Re-expresses a lab-frame driven subsystem in the frame generated by `k`.
pub fn semiclassical_in_rotating_frame<T: Real>(
    sys: &SemiclassicalSystem<T>,
    k: FrameGenerator<T>,
) -> Result<SemiclassicalSystem<T>> {
    if sys.frame().is_some() {
        return Err(Error::InvalidInput("system is already in a rotating frame".into()));
    }
    let drive = conjugate_into_frame(sys.drive(), &k);
    SemiclassicalSystem::new(sys.h_a().clone(), drive)?.with_frame(k)
}

/// Re-expresses a lab-frame bipartite system in the frame generated by `K_A ⊗ 1 + 1 ⊗ K_B`.
pub fn bipartite_in_rotating_frame<T: Real>(
    sys: &BipartiteSystem<T>,
    k_a: FrameGenerator<T>,
    k_b: FrameGenerator<T>,
) -> Result<BipartiteSystem<T>> {
    if sys.frame().is_some() {
        return Err(Error::InvalidInput("system is already in a rotating frame".into()));
    }
    let mut joint = Vec::with_capacity(k_a.dim() * k_b.dim());
    for &ka in &k_a.frequencies {
        for &kb in &k_b.frequencies {
            joint.push(ka + kb);
        }
    }
    let h_ab = conjugate_into_frame(sys.h_ab(), &FrameGenerator::new(joint));
    BipartiteSystem::new(sys.h_a().clone(), sys.h_b().clone(), h_ab)?.with_frame(k_a, k_b)
}

fn check_state<T: Real>(system: &System<T>, rho0: &DensityOperator<T>) -> Result<()> {
    rho0.matrix().ensure_dim(system.state_dim())
}

/// Propagates `rho0` across the grid; returns `n_steps + 1` states.
pub fn evolve<T: Real>(
    system: &System<T>,
    rho0: &DensityOperator<T>,
    grid: &TimeGrid<T>,
) -> Result<Vec<DensityOperator<T>>> {
    check_state(system, rho0)?;
    let dt = grid.dt();
    let half = T::lit(0.5);
    let cached = if system.is_time_independent() {
        Some(propagator(&system.generator(grid.t0), dt)?)
    } else {
        None
    };
    let drift_tol = T::lit(T::DRIFT_TOL);
    let mut states = Vec::with_capacity(grid.n_steps + 1);
    states.push(rho0.clone());
    let mut rho = rho0.matrix().clone();
    for k in 1..=grid.n_steps {
        let u = match &cached {
            Some(u) => u.clone(),
            None => {
                let t_mid = grid.time(k - 1) + half * dt;
                propagator(&system.generator(t_mid), dt)?
            }
        };
        let next = rho.conjugate_by(&u);
        let drift = (next.trace().re - T::one()).abs() + next.hermiticity_residual();
        if drift > drift_tol {
            return Err(Error::StepSize {
                t: grid.time(k).as_f64(),
                drift: drift.as_f64(),
            });
        }
        rho = next.hermitian_part();
        states.push(DensityOperator::assume_valid(rho.clone()));
    }
    Ok(states)
}

/// [`evolve`] specialised to a bipartite system.
pub fn evolve_full<T: Real>(
    system: &BipartiteSystem<T>,
    rho0: &DensityOperator<T>,
    grid: &TimeGrid<T>,
) -> Result<Vec<DensityOperator<T>>> {
    evolve(&System::Bipartite(system.clone()), rho0, grid)
}

/// Everything local to `A` at one instant.
#[derive(Debug, Clone)]
pub struct LocalSnapshot<T> {
    pub rho_a: DensityOperator<T>,
    pub drho_a: ComplexMatrix<T>,
    pub split: LembasSplit<T>,
    pub dh_eff1_dt: ComplexMatrix<T>,
    pub l_inc: ComplexMatrix<T>,
    /// Conventional `(tr(ρ Ḣ), tr(H ρ̇))` split, for driven subsystems only.
    pub old_definition: Option<(T, T)>,
}

/// Options for [`run_trajectory`].
#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    /// Also evaluate the incoherent generator through the correlation operator and
    /// fail if the two routes disagree beyond `1e-10`.
    pub verify_routes: bool,
}

fn local_snapshot<T: Real>(
    system: &System<T>,
    rho: &DensityOperator<T>,
    t: T,
    basis: &MeasurementBasis<T>,
    opts: RunOptions,
) -> Result<LocalSnapshot<T>> {
    let minus_i = c(T::zero(), -T::one());
    let k_a = system.frame_a();
    match system {
        System::Bipartite(sys) => {
            let (da, db) = sys.dims();
            let gen = sys.generator(t);
            let drho = commutator(&gen, rho.matrix())?.scale(minus_i);
            let rho_a = rho.reduce_to_a(da, db)?;
            let rho_b = rho.reduce_to_b(da, db)?;
            let drho_a = partial_trace_b(&drho, da, db)?;
            let drho_b = partial_trace_a(&drho, da, db)?;

            let h_ab = sys.h_ab().at(t);
            let h_eff = partner_contraction(&h_ab, rho_b.matrix(), da, db)?.hermitian_part();
            // product rule: tr_B(Ḣ_AB (1⊗ρ_B)) + tr_B(H_AB (1⊗ρ̇_B))
            let dh_eff = partner_contraction(&sys.h_ab().derivative_at(t), rho_b.matrix(), da, db)?
                + partner_contraction(&h_ab, &drho_b, da, db)?;
            let dh_eff = dh_eff.hermitian_part();

            let split = lembas_split(&h_eff, sys.h_a(), basis)?;
            let dh_eff1_dt = basis.project(&dh_eff);
            let coherent = &(sys.h_a() - &k_a) + &h_eff;
            let l_inc = incoherent_generator_from_derivative(&drho_a, &coherent, &rho_a)?;

            if opts.verify_routes {
                let corr = correlation_operator(rho, da, db)?;
                let l_corr = incoherent_generator_from_correlations(&h_ab, &corr, da, db)?;
                let diff = (&l_corr - &l_inc).frobenius_norm();
                if diff > T::lit(T::STRUCTURE_TOL) * l_inc.frobenius_norm().max(T::one()) {
                    return Err(Error::NumericalConsistency {
                        context: "incoherent generator routes",
                        residual: diff.as_f64(),
                    });
                }
            }
            Ok(LocalSnapshot {
                rho_a,
                drho_a,
                split,
                dh_eff1_dt,
                l_inc,
                old_definition: None,
            })
        }
        System::Semiclassical(sys) => {
            let gen = sys.generator(t);
            let drho_a = commutator(&gen, rho.matrix())?.scale(minus_i);
            let h_eff = sys.drive().at(t);
            let dh_eff = sys.drive().derivative_at(t);
            let split = lembas_split(&h_eff, sys.h_a(), basis)?;
            let dh_eff1_dt = basis.project(&dh_eff);
            let l_inc = incoherent_generator_from_derivative(&drho_a, &gen, rho)?;

            // Conventional split evaluated in lab coordinates:
            // Ḣ_lab ≅ ḣ − i[K, h], ρ̇_lab ≅ ρ̇ − i[K, ρ].
            let h_lab = sys.h_a() + &h_eff;
            let dh_lab = &dh_eff + &commutator(&k_a, &h_eff)?.scale(minus_i);
            let drho_lab = &drho_a + &commutator(&k_a, rho.matrix())?.scale(minus_i);
            let old = old_definition_split(&h_lab, &dh_lab, rho, &drho_lab)?;
            Ok(LocalSnapshot {
                rho_a: rho.clone(),
                drho_a,
                split,
                dh_eff1_dt,
                l_inc,
                old_definition: Some(old),
            })
        }
    }
}

/// `ḣ_eff1` at `(ρ, t)`: block-diagonal part of the effective Hamiltonian's derivative.
pub fn d_heff1_dt<T: Real>(
    system: &System<T>,
    rho: &DensityOperator<T>,
    t: T,
    basis: &MeasurementBasis<T>,
) -> Result<ComplexMatrix<T>> {
    check_state(system, rho)?;
    Ok(local_snapshot(system, rho, t, basis, RunOptions::default())?.dh_eff1_dt)
}

/// Local snapshot at `(ρ, t)`; exposed for diagnostics and verification.
pub fn snapshot<T: Real>(
    system: &System<T>,
    rho: &DensityOperator<T>,
    t: T,
    basis: &MeasurementBasis<T>,
    opts: RunOptions,
) -> Result<LocalSnapshot<T>> {
    check_state(system, rho)?;
    local_snapshot(system, rho, t, basis, opts)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord<T> {
    pub t: T,
    pub rho_a: DensityOperator<T>,
    pub u_a: T,
    pub du_dt: T,
    pub dw_dt: T,
    pub dq_dt: T,
    pub w_cum: T,
    pub q_cum: T,
    pub s_a: T,
    pub ds_dt: Option<T>,
    pub t_star: Option<T>,
    /// Conventional `(dW/dt, dQ/dt)` from `d tr(Hρ)`, driven subsystems only.
    pub old_rates: Option<(T, T)>,
    pub w_old_cum: Option<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryMetadata<T> {
    pub description: String,
    pub grid: TimeGrid<T>,
    pub frame: &'static str,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    pub records: Vec<TrajectoryRecord<T>>,
    pub metadata: TrajectoryMetadata<T>,
}

impl<T: Real> Trajectory<T> {
    pub fn last(&self) -> &TrajectoryRecord<T> {
        self.records.last().expect("trajectory has n_steps + 1 records")
    }

    pub fn work_total(&self) -> T {
        self.last().w_cum
    }

    pub fn heat_total(&self) -> T {
        self.last().q_cum
    }

    /// `max_t |U_A(t) − U_A(t0) − W(t) − Q(t)|`.
    pub fn first_law_residual(&self) -> T {
        let u0 = self.records[0].u_a;
        self.records
            .iter()
            .map(|r| (r.u_a - u0 - r.w_cum - r.q_cum).abs())
            .fold(T::zero(), T::max)
    }
}

/// Evolves the full system and decomposes the local energy change of `A` into
/// work and heat at every grid point.
pub fn run_trajectory<T: Real>(
    system: &System<T>,
    rho0: &DensityOperator<T>,
    grid: &TimeGrid<T>,
    basis: &MeasurementBasis<T>,
    opts: RunOptions,
    description: impl Into<String>,
) -> Result<Trajectory<T>> {
    if basis.dim() != system.local_dim() {
        return Err(Error::DimensionMismatch {
            expected: system.local_dim(),
            actual: basis.dim(),
        });
    }
    check_frame_basis(system, basis)?;
    let states = evolve(system, rho0, grid)?;
    let dt = grid.dt();
    let half_dt = dt * T::lit(0.5);
    let mut records: Vec<TrajectoryRecord<T>> = Vec::with_capacity(states.len());
    for (k, rho) in states.iter().enumerate() {
        let t = grid.time(k);
        let snap = local_snapshot(system, rho, t, basis, opts)?;
        let flows = energy_flows(&snap.split, &snap.dh_eff1_dt, &snap.l_inc, &snap.rho_a, &snap.drho_a)?;
        let u_a = internal_energy(&snap.split.h_prime, &snap.rho_a)?;
        let s_a = von_neumann_entropy(&snap.rho_a);
        let (w_cum, q_cum, w_old_cum) = match records.last() {
            None => (T::zero(), T::zero(), snap.old_definition.map(|_| T::zero())),
            Some(prev) => (
                prev.w_cum + half_dt * (prev.dw_dt + flows.dw_dt),
                prev.q_cum + half_dt * (prev.dq_dt + flows.dq_dt),
                match (prev.w_old_cum, prev.old_rates, snap.old_definition) {
                    (Some(acc), Some((a, _)), Some((b, _))) => Some(acc + half_dt * (a + b)),
                    _ => None,
                },
            ),
        };
        records.push(TrajectoryRecord {
            t,
            rho_a: snap.rho_a,
            u_a,
            du_dt: flows.du_dt,
            dw_dt: flows.dw_dt,
            dq_dt: flows.dq_dt,
            w_cum,
            q_cum,
            s_a,
            ds_dt: flows.ds_dt,
            t_star: flows.t_star,
            old_rates: snap.old_definition,
            w_old_cum,
        });
    }
    Ok(Trajectory {
        records,
        metadata: TrajectoryMetadata {
            description: description.into(),
            grid: *grid,
            frame: if system.has_frame() { "rotating" } else { "lab" },
        },
    })
}

/// The frame generator must act as a scalar on every measurement block, otherwise
/// `⟨H'⟩` is not frame invariant.
fn check_frame_basis<T: Real>(system: &System<T>, basis: &MeasurementBasis<T>) -> Result<()> {
    if !system.has_frame() {
        return Ok(());
    }
    let k = system.frame_a();
    let tol = T::lit(T::STRUCTURE_TOL) * k.frobenius_norm().max(T::one());
    for p in basis.projectors() {
        let kp = k.matmul(p);
        let rank = p.trace().re;
        let level = kp.trace().re / rank;
        if (&kp - &p.scale_real(level)).frobenius_norm() > tol {
            return Err(Error::InvalidInput(
                "rotating frame is not constant on a measurement block".into(),
            ));
        }
    }
    Ok(())
}
