//! Built-in scenarios with closed-form references: a resonantly driven
//! two-level system and SWAP cooling of one spin by a second one.
//!
//! Conventions: `ħ = 1`, `σ_z = diag(1, −1)` (index 0 is the upper level),
//! a spin with gap `ΔE` has `H = (ΔE/2) σ_z`, and the joint index of `A ⊗ B`
//! is `a·d_B + b`.

use num_complex::Complex;

use crate::dynamics::{run_trajectory, RunOptions, System, TimeGrid, Trajectory};
use crate::error::{Error, Result};
use crate::lembas::MeasurementBasis;
use crate::linalg::{kron, ComplexMatrix};
use crate::states::{thermal_state, BipartiteSystem, DensityOperator, FrameGenerator, SemiclassicalSystem, TimeOperator};

type M = ComplexMatrix<f64>;

/// Registered scenario names.
pub const SCENARIOS: &[&str] = &["driven_tls", "swap_cooling"];

/// Default resolution: grid points per Rabi period.
pub const STEPS_PER_RABI_PERIOD: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Frame {
    Lab,
    #[default]
    Rwa,
}

impl Frame {
    pub fn name(self) -> &'static str {
        match self {
            Frame::Lab => "lab",
            Frame::Rwa => "rwa",
        }
    }
}

/// `H(t) = (ΔE/2) σ_z + g sin(ωt) σ_x`, initially thermal at `β`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrivenTlsConfig {
    pub delta_e: f64,
    pub g: f64,
    pub omega: f64,
    pub beta: f64,
    pub frame: Frame,
}

impl DrivenTlsConfig {
    /// Drive detuned by `detuning = ω − ΔE`.
    pub fn detuned(delta_e: f64, g: f64, detuning: f64, beta: f64, frame: Frame) -> Self {
        Self {
            delta_e,
            g,
            omega: delta_e + detuning,
            beta,
            frame,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.delta_e > 0.0 && self.g >= 0.0 && self.beta >= 0.0 && self.omega.is_finite();
        if !ok || !self.g.is_finite() || !self.delta_e.is_finite() {
            return Err(Error::InvalidInput(format!(
                "driven_tls needs deltaE > 0, g >= 0, beta >= 0 (got deltaE={}, g={}, beta={})",
                self.delta_e, self.g, self.beta
            )));
        }
        Ok(())
    }

    pub fn detuning(&self) -> f64 {
        self.omega - self.delta_e
    }

    pub fn rabi_frequency(&self) -> f64 {
        self.g.hypot(self.detuning())
    }

    pub fn h_a(&self) -> M {
        M::sigma_z().scale_real(0.5 * self.delta_e)
    }

    pub fn initial_state(&self) -> Result<DensityOperator<f64>> {
        thermal_state(&self.h_a(), self.beta)
    }

    /// `[0, periods · 2π/Ω]` with `n_steps` points.
    pub fn rabi_grid(&self, periods: f64, n_steps: usize) -> Result<TimeGrid<f64>> {
        let omega = self.rabi_frequency();
        if omega <= 0.0 {
            return Err(Error::InvalidInput("Rabi frequency is zero; supply an explicit grid".into()));
        }
        TimeGrid::new(0.0, periods * std::f64::consts::TAU / omega, n_steps)
    }

    /// Half a Rabi period, over which the work done by the drive peaks.
    pub fn default_grid(&self) -> Result<TimeGrid<f64>> {
        self.rabi_grid(0.5, STEPS_PER_RABI_PERIOD / 2)
    }
}

/// The driven two-level system. In `Rwa` mode the drive is expressed in the frame
/// `K = (ω/2) σ_z` with counter-rotating terms dropped, giving the static
/// generator `−(δ/2) σ_z − (g/2) σ_y`.
pub fn driven_tls_system(cfg: &DrivenTlsConfig) -> Result<SemiclassicalSystem<f64>> {
    cfg.validate()?;
    let (g, w) = (cfg.g, cfg.omega);
    match cfg.frame {
        Frame::Lab => {
            let drive = TimeOperator::varying(2, move |t: f64| M::sigma_x().scale_real(g * (w * t).sin()))
                .with_derivative(move |t| M::sigma_x().scale_real(g * w * (w * t).cos()));
            SemiclassicalSystem::new(cfg.h_a(), drive)
        }
        Frame::Rwa => {
            let drive = TimeOperator::constant(M::sigma_y().scale_real(-0.5 * g));
            SemiclassicalSystem::new(cfg.h_a(), drive)?.with_frame(FrameGenerator::new(vec![0.5 * w, -0.5 * w]))
        }
    }
}

fn tls_amplitude(cfg: &DrivenTlsConfig, prefactor: f64) -> f64 {
    let omega = cfg.rabi_frequency();
    if omega == 0.0 {
        return 0.0;
    }
    prefactor * cfg.g * cfg.g / (2.0 * omega) * (0.5 * cfg.beta * cfg.delta_e).tanh()
}

/// `dW/dt = (ΔE g² / 2Ω) tanh(βΔE/2) sin Ωt`.
pub fn analytic_tls_work(cfg: &DrivenTlsConfig, t: f64) -> f64 {
    tls_amplitude(cfg, cfg.delta_e) * (cfg.rabi_frequency() * t).sin()
}

/// Conventional `tr(ρ Ḣ)` rate: `((ΔE + δ) g² / 2Ω) tanh(βΔE/2) sin Ωt`.
pub fn analytic_tls_work_old(cfg: &DrivenTlsConfig, t: f64) -> f64 {
    tls_amplitude(cfg, cfg.delta_e + cfg.detuning()) * (cfg.rabi_frequency() * t).sin()
}

/// `∫_0^t` of [`analytic_tls_work`].
pub fn analytic_tls_work_integral(cfg: &DrivenTlsConfig, t: f64) -> f64 {
    let omega = cfg.rabi_frequency();
    if omega == 0.0 {
        return 0.0;
    }
    tls_amplitude(cfg, cfg.delta_e) * (1.0 - (omega * t).cos()) / omega
}

/// `∫_0^t` of [`analytic_tls_work_old`].
pub fn analytic_tls_work_old_integral(cfg: &DrivenTlsConfig, t: f64) -> f64 {
    let omega = cfg.rabi_frequency();
    if omega == 0.0 {
        return 0.0;
    }
    tls_amplitude(cfg, cfg.delta_e + cfg.detuning()) * (1.0 - (omega * t).cos()) / omega
}

pub fn run_driven_tls(
    cfg: &DrivenTlsConfig,
    grid: &TimeGrid<f64>,
    basis: Option<&MeasurementBasis<f64>>,
    opts: RunOptions,
) -> Result<Trajectory<f64>> {
    let system = System::Semiclassical(driven_tls_system(cfg)?);
    let energy;
    let basis = match basis {
        Some(b) => b,
        None => {
            energy = MeasurementBasis::energy(&cfg.h_a())?;
            &energy
        }
    };
    let desc = format!(
        "driven_tls deltaE={} g={} omega={} beta={} frame={}",
        cfg.delta_e,
        cfg.g,
        cfg.omega,
        cfg.beta,
        cfg.frame.name()
    );
    run_trajectory(&system, &cfg.initial_state()?, grid, basis, opts, desc)
}

/// Two spins with gaps `ΔE_A < ΔE_B`, initially thermal at `β_i`, whose
/// `|01⟩ ↔ |10⟩` transition is driven resonantly with Rabi frequency `g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwapConfig {
    pub delta_e_a: f64,
    pub delta_e_b: f64,
    pub g: f64,
    pub beta_i: f64,
    pub frame: Frame,
}

impl Default for SwapConfig {
    fn default() -> Self {
        Self {
            delta_e_a: 1.0,
            delta_e_b: 2.0,
            g: 0.1,
            beta_i: 1.0,
            frame: Frame::Rwa,
        }
    }
}

/// Which part of the SWAP system is bookkept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SwapView {
    /// The cooled spin `A`, with `B` as partner.
    A,
    /// Both spins, driven by the classical field.
    #[default]
    Ab,
}

impl SwapConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.delta_e_a > 0.0
            && self.delta_e_a < self.delta_e_b
            && self.delta_e_b.is_finite()
            && self.beta_i > 0.0
            && self.beta_i.is_finite()
            && self.g >= 0.0
            && self.g.is_finite();
        if !ok {
            return Err(Error::InvalidInput(format!(
                "swap_cooling needs 0 < deltaE_A < deltaE_B, beta_i > 0, g >= 0 (got deltaE_A={}, deltaE_B={}, beta_i={}, g={})",
                self.delta_e_a, self.delta_e_b, self.beta_i, self.g
            )));
        }
        Ok(())
    }

    pub fn h_a(&self) -> M {
        M::sigma_z().scale_real(0.5 * self.delta_e_a)
    }

    pub fn h_b(&self) -> M {
        M::sigma_z().scale_real(0.5 * self.delta_e_b)
    }

    /// `H_A ⊗ 1 + 1 ⊗ H_B`, diagonal.
    pub fn h0(&self) -> M {
        kron(&self.h_a(), &M::identity(2)) + kron(&M::identity(2), &self.h_b())
    }

    /// `ν = E_{|10⟩} − E_{|01⟩} = ΔE_B − ΔE_A`.
    pub fn transition_frequency(&self) -> f64 {
        self.delta_e_b - self.delta_e_a
    }

    /// `Z = (1 + e^{β ΔE_A})(1 + e^{β ΔE_B})`, the partition function with
    /// energies measured from the top level.
    pub fn partition(&self) -> f64 {
        (1.0 + (self.beta_i * self.delta_e_a).exp()) * (1.0 + (self.beta_i * self.delta_e_b).exp())
    }

    pub fn final_beta(&self) -> f64 {
        self.delta_e_b / self.delta_e_a * self.beta_i
    }

    pub fn initial_state(&self) -> Result<DensityOperator<f64>> {
        thermal_state(&self.h0(), self.beta_i)
    }

    /// `[0, π/g]`: one complete population exchange.
    pub fn swap_grid(&self, n_steps: usize) -> Result<TimeGrid<f64>> {
        if self.g <= 0.0 {
            return Err(Error::InvalidInput("g = 0 never completes a swap; supply an explicit grid".into()));
        }
        TimeGrid::new(0.0, std::f64::consts::PI / self.g, n_steps)
    }

    pub fn default_grid(&self) -> Result<TimeGrid<f64>> {
        self.swap_grid(STEPS_PER_RABI_PERIOD / 2)
    }

    fn swap_pair(&self) -> M {
        M::transition(4, 1, 2) + M::transition(4, 2, 1)
    }

    fn frame_pair(&self) -> (FrameGenerator<f64>, FrameGenerator<f64>) {
        let a = 0.5 * self.delta_e_a;
        let b = 0.5 * self.delta_e_b;
        (FrameGenerator::new(vec![a, -a]), FrameGenerator::new(vec![b, -b]))
    }

    fn joint_frame(&self) -> FrameGenerator<f64> {
        FrameGenerator::new(self.h0().diagonal().iter().map(|z| z.re).collect())
    }

    /// Lab-frame interaction `(g/2)(e^{iνt} |01⟩⟨10| + h.c.)`.
    pub fn interaction_lab(&self) -> TimeOperator<f64> {
        let (g, nu) = (self.g, self.transition_frequency());
        let pair = |scale: f64, phase: Complex<f64>| {
            let up = M::transition(4, 1, 2) * phase;
            (&up + &up.dagger()).scale_real(scale)
        };
        TimeOperator::varying(4, move |t| pair(0.5 * g, Complex::from_polar(1.0, nu * t)))
            .with_derivative(move |t| pair(0.5 * g, Complex::from_polar(1.0, nu * t) * Complex::new(0.0, nu)))
    }

    /// Interaction in the frame rotating with `H_A ⊗ 1 + 1 ⊗ H_B`: `(g/2)(P_{01,10} + P_{10,01})`.
    pub fn interaction_rotating(&self) -> M {
        self.swap_pair().scale_real(0.5 * self.g)
    }
}

/// Spin `A` coupled to spin `B` through the SWAP drive.
pub fn swap_system(cfg: &SwapConfig) -> Result<BipartiteSystem<f64>> {
    cfg.validate()?;
    match cfg.frame {
        Frame::Lab => BipartiteSystem::new(cfg.h_a(), cfg.h_b(), cfg.interaction_lab()),
        Frame::Rwa => {
            let (ka, kb) = cfg.frame_pair();
            BipartiteSystem::new(cfg.h_a(), cfg.h_b(), TimeOperator::constant(cfg.interaction_rotating()))?
                .with_frame(ka, kb)
        }
    }
}

/// Both spins as one subsystem, driven semiclassically by the SWAP field.
pub fn swap_global_system(cfg: &SwapConfig) -> Result<SemiclassicalSystem<f64>> {
    cfg.validate()?;
    match cfg.frame {
        Frame::Lab => SemiclassicalSystem::new(cfg.h0(), cfg.interaction_lab()),
        Frame::Rwa => SemiclassicalSystem::new(cfg.h0(), TimeOperator::constant(cfg.interaction_rotating()))?
            .with_frame(cfg.joint_frame()),
    }
}

/// Coupling whose partner contraction is the closed-form effective Hamiltonian
/// of [`analytic_swap_heff_A`]: the partner's level term `1 ⊗ ΔE_B σ_z` plus the
/// rotating-frame interaction.
pub fn swap_partner_coupling(cfg: &SwapConfig) -> M {
    kron(&M::identity(2), &M::sigma_z().scale_real(cfg.delta_e_b)) + cfg.interaction_rotating()
}

fn swap_population_gap(cfg: &SwapConfig) -> f64 {
    ((cfg.beta_i * cfg.delta_e_a).exp() - (cfg.beta_i * cfg.delta_e_b).exp()) / cfg.partition()
}

/// `dW_AB/dt = (g/2) Z⁻¹ (e^{βΔE_A} − e^{βΔE_B})(ΔE_A − ΔE_B) sin gt`.
pub fn analytic_swap_work(cfg: &SwapConfig, t: f64) -> f64 {
    0.5 * cfg.g * swap_population_gap(cfg) * (cfg.delta_e_a - cfg.delta_e_b) * (cfg.g * t).sin()
}

/// `dQ_A/dt = −(g/2) Z⁻¹ (e^{βΔE_A} − e^{βΔE_B}) ΔE_A sin gt`: the rate at which
/// heat would have to flow back into `A` to restore its initial state.
pub fn analytic_swap_heat_a(cfg: &SwapConfig, t: f64) -> f64 {
    -0.5 * cfg.g * swap_population_gap(cfg) * cfg.delta_e_a * (cfg.g * t).sin()
}

/// `∫_0^t` of [`analytic_swap_work`].
pub fn analytic_swap_work_integral(cfg: &SwapConfig, t: f64) -> f64 {
    0.5 * swap_population_gap(cfg) * (cfg.delta_e_a - cfg.delta_e_b) * (1.0 - (cfg.g * t).cos())
}

/// `∫_0^t` of [`analytic_swap_heat_a`].
pub fn analytic_swap_heat_a_integral(cfg: &SwapConfig, t: f64) -> f64 {
    -0.5 * swap_population_gap(cfg) * cfg.delta_e_a * (1.0 - (cfg.g * t).cos())
}

/// Effective Hamiltonian of `A`:
/// `−σ_0 Z⁻¹ ΔE_B [(e^{β(ΔE_A+ΔE_B)} − 1) + (e^{βΔE_B} − e^{βΔE_A}) cos gt]`.
///
/// This is proportional to the identity; the bare `H_A` is not included.
pub fn analytic_swap_heff_a(cfg: &SwapConfig, t: f64) -> M {
    let b = cfg.beta_i;
    let (ea, eb) = (cfg.delta_e_a, cfg.delta_e_b);
    let coeff = -eb / cfg.partition()
        * (((b * (ea + eb)).exp() - 1.0) + ((b * eb).exp() - (b * ea).exp()) * (cfg.g * t).cos());
    M::identity(2).scale_real(coeff)
}

/// `η_A = ΔE_A / (ΔE_A − ΔE_B)`.
pub fn swap_efficiency(cfg: &SwapConfig) -> Result<f64> {
    let d = cfg.delta_e_a - cfg.delta_e_b;
    if d == 0.0 {
        return Err(Error::InvalidInput("efficiency undefined for equal gaps (no work)".into()));
    }
    Ok(cfg.delta_e_a / d)
}

pub fn run_swap(
    cfg: &SwapConfig,
    view: SwapView,
    grid: &TimeGrid<f64>,
    basis: Option<&MeasurementBasis<f64>>,
    opts: RunOptions,
) -> Result<Trajectory<f64>> {
    let (system, h_local): (System<f64>, M) = match view {
        SwapView::A => (swap_system(cfg)?.into(), cfg.h_a()),
        SwapView::Ab => (swap_global_system(cfg)?.into(), cfg.h0()),
    };
    let energy;
    let basis = match basis {
        Some(b) => b,
        None => {
            energy = MeasurementBasis::energy(&h_local)?;
            &energy
        }
    };
    let desc = format!(
        "swap_cooling deltaE_A={} deltaE_B={} g={} beta_i={} frame={} subsystem={}",
        cfg.delta_e_a,
        cfg.delta_e_b,
        cfg.g,
        cfg.beta_i,
        cfg.frame.name(),
        match view {
            SwapView::A => "A",
            SwapView::Ab => "AB",
        }
    );
    run_trajectory(&system, &cfg.initial_state()?, grid, basis, opts, desc)
}

/// Restoring heat of `A` from a trajectory of the `A` view.
pub fn restoring_heat(trajectory_a: &Trajectory<f64>) -> f64 {
    -trajectory_a.heat_total()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DriveCoupling {
    SigmaX,
    SigmaZ,
}

/// Outcome of driving a thermal two-level system through a given operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriverSummary {
    pub detuning: f64,
    pub u_change: f64,
    pub w_total: f64,
    pub max_abs_w_cum: f64,
    pub max_abs_dw_dt: f64,
    pub max_abs_dq_dt: f64,
    /// Time average of `dU/dt` over the run.
    pub mean_du_dt: f64,
    /// `ΔE (g/Ω)² tanh(βΔE/2)`: the largest energy a `σ_x` drive can deposit.
    pub rabi_bound: f64,
}

/// Work-reservoir comparison: a `σ_x` drive (resonant or detuned by `10 g`)
/// against a `σ_z` drive, which only shifts the levels.
pub fn driver_coupling_demo(coupling: DriveCoupling, offresonant: bool) -> Result<DriverSummary> {
    let (delta_e, g, beta) = (1.0, 0.1, 1.0);
    let detuning = if offresonant { 10.0 * g } else { 0.0 };
    let cfg = DrivenTlsConfig::detuned(delta_e, g, detuning, beta, Frame::Rwa);
    let (traj, bound) = match coupling {
        DriveCoupling::SigmaX => {
            let grid = cfg.rabi_grid(2.0, 2 * STEPS_PER_RABI_PERIOD)?;
            let omega = cfg.rabi_frequency();
            let bound = delta_e * (g / omega).powi(2) * (0.5 * beta * delta_e).tanh();
            (run_driven_tls(&cfg, &grid, None, RunOptions::default())?, bound)
        }
        DriveCoupling::SigmaZ => {
            let w = cfg.omega;
            let drive = TimeOperator::varying(2, move |t: f64| M::sigma_z().scale_real(g * (w * t).sin()))
                .with_derivative(move |t| M::sigma_z().scale_real(g * w * (w * t).cos()));
            let system = SemiclassicalSystem::new(cfg.h_a(), drive)?;
            let grid = TimeGrid::new(0.0, 2.0 * std::f64::consts::TAU / w, 2 * STEPS_PER_RABI_PERIOD)?;
            let basis = MeasurementBasis::energy(&cfg.h_a())?;
            let traj = run_trajectory(
                &system.into(),
                &cfg.initial_state()?,
                &grid,
                &basis,
                RunOptions::default(),
                "sigma_z drive",
            )?;
            (traj, 0.0)
        }
    };
    let first = &traj.records[0];
    let last = traj.last();
    let span = last.t - first.t;
    let max = |f: &dyn Fn(&crate::dynamics::TrajectoryRecord<f64>) -> f64| {
        traj.records.iter().map(|r| f(r).abs()).fold(0.0, f64::max)
    };
    Ok(DriverSummary {
        detuning,
        u_change: last.u_a - first.u_a,
        w_total: last.w_cum,
        max_abs_w_cum: max(&|r| r.w_cum),
        max_abs_dw_dt: max(&|r| r.dw_dt),
        max_abs_dq_dt: max(&|r| r.dq_dt),
        mean_du_dt: (last.u_a - first.u_a) / span,
        rabi_bound: bound,
    })
}
