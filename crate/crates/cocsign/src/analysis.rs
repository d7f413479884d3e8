//! Logical-operator extraction, gate scoring, sweeps, and the hop-window
//! feasibility arithmetic.
//!
//! The simulator projects each evolved state back onto the four logical
//! encodings; the resulting 4x4 operator is sub-unitary whenever amplitude
//! leaks into non-logical sector states, and the average-gate-fidelity
//! formula used here handles that without renormalizing.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::hilbert::{logical_input, SectorBasis, StateVector};
use crate::propagate::{evolve, Segment, Trajectory};
use crate::schedule::{
    apply_jitter, build_cocsign_schedule, GateTimings, JitterModel, JumpMode, ScheduleOptions,
};
use crate::Result;

/// Logical basis order used everywhere: `|00>, |01>, |10>, |11>`.
pub const LOGICAL_LABELS: [&str; 4] = ["00", "01", "10", "11"];

pub const LOGICAL_BITS: [(u8, u8); 4] = [(0, 0), (0, 1), (1, 0), (1, 1)];

/// Effective operator on the two-qubit logical subspace.
#[derive(Clone, Debug, PartialEq)]
pub struct LogicalOperator {
    entries: DMatrix<Complex64>,
}

impl LogicalOperator {
    pub fn from_entries(entries: DMatrix<Complex64>) -> Self {
        assert_eq!((entries.nrows(), entries.ncols()), (4, 4));
        Self { entries }
    }

    pub fn from_diagonal(diag: [Complex64; 4]) -> Self {
        let mut entries = DMatrix::zeros(4, 4);
        for (k, z) in diag.iter().enumerate() {
            entries[(k, k)] = *z;
        }
        Self { entries }
    }

    pub fn identity() -> Self {
        Self {
            entries: DMatrix::identity(4, 4),
        }
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn diagonal(&self) -> [Complex64; 4] {
        [
            self.entries[(0, 0)],
            self.entries[(1, 1)],
            self.entries[(2, 2)],
            self.entries[(3, 3)],
        ]
    }

    /// Largest off-diagonal magnitude.
    pub fn max_offdiagonal(&self) -> f64 {
        let mut max = 0.0f64;
        for r in 0..4 {
            for c in 0..4 {
                if r != c {
                    max = max.max(self.entries[(r, c)].norm());
                }
            }
        }
        max
    }

    pub fn max_abs_diff(&self, other: &LogicalOperator) -> f64 {
        (&self.entries - &other.entries)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            entries: &self.entries * factor,
        }
    }
}

impl std::ops::Mul<&LogicalOperator> for &LogicalOperator {
    type Output = LogicalOperator;
    fn mul(self, rhs: &LogicalOperator) -> LogicalOperator {
        LogicalOperator {
            entries: &self.entries * &rhs.entries,
        }
    }
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// The gate target: a sign flip on `|01>` alone, `diag(1, -1, 1, 1)`.
pub fn target_cocsign() -> LogicalOperator {
    LogicalOperator::from_diagonal([c(1.0), c(-1.0), c(1.0), c(1.0)])
}

/// The conventional controlled sign flip, `diag(1, 1, 1, -1)`.
pub fn target_csign() -> LogicalOperator {
    LogicalOperator::from_diagonal([c(1.0), c(1.0), c(1.0), c(-1.0)])
}

/// Bit flip on the first qubit, `sigma_x (x) I`; conjugating the gate target
/// by it yields the controlled sign flip.
pub fn sigma_x_on_first() -> LogicalOperator {
    let mut entries = DMatrix::zeros(4, 4);
    entries[(0, 2)] = c(1.0);
    entries[(1, 3)] = c(1.0);
    entries[(2, 0)] = c(1.0);
    entries[(3, 1)] = c(1.0);
    LogicalOperator::from_entries(entries)
}

/// Run each logical input through `run` and project the outputs back onto
/// the logical encodings: entry `(q', q) = <encode(q') | psi_out(q)>`.
pub fn extract_logical<F>(basis: &Arc<SectorBasis>, mut run: F) -> Result<LogicalOperator>
where
    F: FnMut(StateVector) -> Result<StateVector>,
{
    let mut entries = DMatrix::zeros(4, 4);
    for (col, &(qx, qy)) in LOGICAL_BITS.iter().enumerate() {
        let output = run(logical_input(basis, qx, qy)?)?;
        for (row, &(px, py)) in LOGICAL_BITS.iter().enumerate() {
            let probe = logical_input(basis, px, py)?;
            entries[(row, col)] = probe.overlap(&output)?;
        }
    }
    Ok(LogicalOperator::from_entries(entries))
}

/// Fidelity scorecard of an extracted logical operator against a target.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct FidelityReport {
    /// Average gate fidelity `(Tr(M+M) + |Tr(T+M)|^2) / (d (d+1))`, global
    /// phase invariant and valid for sub-unitary `M`.
    pub avg_gate_fidelity: f64,
    /// Population lost from the logical subspace, `1 - Tr(M+M)/4`.
    pub leakage: f64,
    /// Phases of the diagonal of `T+M`, snapped to multiples of `pi/2`
    /// when within 1e-6 so they line up with the integer bookkeeping.
    pub phase_profile: [f64; 4],
    /// `arg Tr(T+M)`.
    pub global_phase: f64,
}

/// Score `m` against the unitary target `t`.
pub fn gate_fidelity(m: &LogicalOperator, target: &LogicalOperator) -> FidelityReport {
    let d = 4.0;
    let t_dag_m = &target.entries().adjoint() * m.entries();
    let tr_mm: f64 = m.entries().iter().map(|z| z.norm_sqr()).sum();
    let tr_tm: Complex64 = (0..4).map(|k| t_dag_m[(k, k)]).sum();
    let avg_gate_fidelity = (tr_mm + tr_tm.norm_sqr()) / (d * (d + 1.0));
    let leakage = 1.0 - tr_mm / d;
    let mut phase_profile = [0.0; 4];
    for (k, phase) in phase_profile.iter_mut().enumerate() {
        *phase = snap_to_quarter(t_dag_m[(k, k)].arg());
    }
    FidelityReport {
        avg_gate_fidelity,
        leakage,
        phase_profile,
        global_phase: tr_tm.arg(),
    }
}

/// Round an angle to the nearest multiple of `pi/2` when within 1e-6 of it.
fn snap_to_quarter(phase: f64) -> f64 {
    let quarters = phase / FRAC_PI_2;
    let snapped = quarters.round();
    if (quarters - snapped).abs() * FRAC_PI_2 <= 1e-6 {
        let mut value = snapped * FRAC_PI_2;
        if value <= -PI {
            value += 2.0 * PI;
        } else if value > PI {
            value -= 2.0 * PI;
        }
        value
    } else {
        phase
    }
}

/// Everything that defines one gate simulation.
#[derive(Clone, Debug)]
pub struct GateRun {
    pub timings: GateTimings,
    pub n_max: u8,
    pub options: ScheduleOptions,
    pub jitter: Option<JitterModel>,
}

impl GateRun {
    pub fn ideal(timings: GateTimings) -> Self {
        Self {
            timings,
            n_max: 2,
            options: ScheduleOptions::ideal(),
            jitter: None,
        }
    }
}

/// Results of one gate simulation.
#[derive(Debug)]
pub struct GateOutcome {
    pub basis: Arc<SectorBasis>,
    pub schedule: Vec<Segment>,
    pub logical: LogicalOperator,
    pub report: FidelityReport,
    /// One trajectory per logical input, in `LOGICAL_BITS` order.
    pub trajectories: Vec<Trajectory>,
}

/// Simulate the gate on all four logical inputs and score it against the
/// sign-flip target.
pub fn simulate_cocsign(run: &GateRun) -> Result<GateOutcome> {
    let basis = SectorBasis::gate_sector(run.n_max);
    let mut schedule = build_cocsign_schedule(&basis, &run.timings, &run.options)?;
    if let Some(model) = &run.jitter {
        schedule = apply_jitter(&schedule, model, run.timings.tau1());
    }
    let mut trajectories = Vec::with_capacity(4);
    let logical = extract_logical(&basis, |input| {
        let (output, trajectory) = evolve(&input, &schedule)?;
        trajectories.push(trajectory);
        Ok(output)
    })?;
    let report = gate_fidelity(&logical, &target_cocsign());
    Ok(GateOutcome {
        basis,
        schedule,
        logical,
        report,
        trajectories,
    })
}

/// Axes of a parameter sweep; the grid is their Cartesian product, walked
/// timing-pairs-major. An explicitly empty axis yields an empty grid.
#[derive(Clone, Debug)]
pub struct SweepGrid {
    pub mode: JumpMode,
    pub timing_pairs: Vec<(u32, u32)>,
    pub nu_over_g: Vec<f64>,
    pub jitter_sigma: Vec<f64>,
    pub g_during_jump: Vec<bool>,
    pub base_seed: u64,
    pub n_max: u8,
}

impl Default for SweepGrid {
    fn default() -> Self {
        Self {
            mode: JumpMode::Ideal,
            timing_pairs: vec![(4, 6)],
            nu_over_g: vec![100.0],
            jitter_sigma: vec![0.0],
            g_during_jump: vec![true],
            base_seed: 1,
            n_max: 2,
        }
    }
}

/// One evaluated grid point.
#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub index: usize,
    pub n1: u32,
    pub n2: u32,
    pub nu_over_g: f64,
    pub jitter_sigma: f64,
    pub g_during_jump: bool,
    pub seed: u64,
    /// Commensuration residual in units of `tau1`.
    pub residual: f64,
    #[serde(flatten)]
    pub report: FidelityReport,
}

struct GridPoint {
    index: usize,
    pair: (u32, u32),
    nu_over_g: f64,
    sigma: f64,
    g_flag: bool,
}

fn sweep_points(grid: &SweepGrid) -> Vec<GridPoint> {
    let mut points = Vec::new();
    let mut index = 0;
    for &pair in &grid.timing_pairs {
        for &nu_over_g in &grid.nu_over_g {
            for &sigma in &grid.jitter_sigma {
                for &g_flag in &grid.g_during_jump {
                    points.push(GridPoint {
                        index,
                        pair,
                        nu_over_g,
                        sigma,
                        g_flag,
                    });
                    index += 1;
                }
            }
        }
    }
    points
}

fn evaluate_point(grid: &SweepGrid, point: &GridPoint) -> Result<SweepRow> {
    let (n1, n2) = point.pair;
    let timings = GateTimings::natural(n1, n2, point.nu_over_g)?;
    let seed = grid.base_seed.wrapping_add(point.index as u64);
    let jitter = if point.sigma > 0.0 {
        Some(JitterModel::new(point.sigma, seed)?)
    } else {
        None
    };
    let run = GateRun {
        timings,
        n_max: grid.n_max,
        options: ScheduleOptions {
            mode: grid.mode,
            g_during_jump: point.g_flag,
            compensate_wait: false,
            exact_long_wait: false,
        },
        jitter,
    };
    let outcome = simulate_cocsign(&run)?;
    Ok(SweepRow {
        index: point.index,
        n1,
        n2,
        nu_over_g: point.nu_over_g,
        jitter_sigma: point.sigma,
        g_during_jump: point.g_flag,
        seed,
        residual: timings.residual_in_tau1(),
        report: outcome.report,
    })
}

/// Evaluate the grid sequentially, one fidelity row per point.
pub fn sweep(grid: &SweepGrid) -> Result<Vec<SweepRow>> {
    sweep_points(grid)
        .iter()
        .map(|point| evaluate_point(grid, point))
        .collect()
}

/// Evaluate the grid on a thread pool; rows merge back in grid order, so
/// the result is identical to the sequential one. `workers = 0` uses the
/// default pool size.
pub fn sweep_parallel(grid: &SweepGrid, workers: usize) -> Result<Vec<SweepRow>> {
    let points = sweep_points(grid);
    let compute = || {
        points
            .par_iter()
            .map(|point| evaluate_point(grid, point))
            .collect::<Result<Vec<SweepRow>>>()
    };
    if workers == 0 {
        compute()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| crate::Error::Config(format!("thread pool: {e}")))?;
        pool.install(compute)
    }
}

/// Hop-window feasibility arithmetic.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct FeasibilityReport {
    /// Shortest admissible transfer window, `1 / delta_omega`, from the
    /// energy-time uncertainty relation.
    pub delta_tau_min: f64,
    /// Whether `delta_tau_min <= delta_tau <= tau1 / margin`.
    pub window_ok: bool,
    /// `delta_tau_min / tau1`: the timing-error floor of a single shot.
    pub single_shot_error_floor: f64,
    /// Rotating-wave check with the coupling implied by `tau1`.
    pub rwa_ok: bool,
}

/// Default "much shorter than a Rabi period" margin: `delta_tau <= tau1/100`.
pub const DEFAULT_WINDOW_MARGIN: f64 = 100.0;

/// Evaluate the transfer-window bounds for physical-unit inputs.
///
/// A photon squeezed through a window shorter than `1/delta_omega` picks up
/// an energy uncertainty large enough to detune it from the cavity, so the
/// window is bounded below; staying well under a Rabi period bounds it
/// above.
pub fn feasibility(omega: f64, delta_omega: f64, tau1: f64, delta_tau: f64) -> FeasibilityReport {
    feasibility_with_margin(omega, delta_omega, tau1, delta_tau, DEFAULT_WINDOW_MARGIN)
}

pub fn feasibility_with_margin(
    omega: f64,
    delta_omega: f64,
    tau1: f64,
    delta_tau: f64,
    margin: f64,
) -> FeasibilityReport {
    let delta_tau_min = 1.0 / delta_omega;
    let window_ok = delta_tau >= delta_tau_min && delta_tau <= tau1 / margin;
    let single_shot_error_floor = delta_tau_min / tau1;
    // tau1 = pi hbar / g  =>  g / (hbar omega) = pi / (tau1 omega)
    let rwa_ok = PI / (tau1 * omega) <= 1e-3;
    FeasibilityReport {
        delta_tau_min,
        window_ok,
        single_shot_error_floor,
        rwa_ok,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jch::build_jc_interaction;
    use crate::propagate::SegmentLabel;
    use proptest::prelude::*;

    #[test]
    fn targets() {
        let diag: Vec<Complex64> = target_cocsign().diagonal().to_vec();
        assert_eq!(diag, vec![c(1.0), c(-1.0), c(1.0), c(1.0)]);
        let diag: Vec<Complex64> = target_csign().diagonal().to_vec();
        assert_eq!(diag, vec![c(1.0), c(1.0), c(1.0), c(-1.0)]);
    }

    #[test]
    fn conjugation_by_sigma_x_turns_cocsign_into_csign() {
        let sx = sigma_x_on_first();
        let conjugated = &(&sx * &target_cocsign()) * &sx;
        assert_eq!(conjugated, target_csign());
    }

    #[test]
    fn fidelity_of_the_target_itself() {
        let report = gate_fidelity(&target_cocsign(), &target_cocsign());
        assert!((report.avg_gate_fidelity - 1.0).abs() < 1e-14);
        assert!(report.leakage.abs() < 1e-14);
        for phase in report.phase_profile {
            assert_eq!(phase, 0.0);
        }
    }

    #[test]
    fn fidelity_of_identity_against_the_sign_flip() {
        // Tr(M+M) = 4, |Tr(T+M)| = |1 - 1 + 1 + 1| = 2 => (4 + 4)/20
        let report = gate_fidelity(&LogicalOperator::identity(), &target_cocsign());
        assert!((report.avg_gate_fidelity - 0.4).abs() < 1e-14);
    }

    proptest! {
        #[test]
        fn fidelity_is_global_phase_invariant(phi in 0.0f64..(2.0 * PI)) {
            let rotated = target_cocsign().scale(Complex64::from_polar(1.0, phi));
            let report = gate_fidelity(&rotated, &target_cocsign());
            prop_assert!((report.avg_gate_fidelity - 1.0).abs() < 1e-12);
            prop_assert!(report.leakage.abs() < 1e-12);
        }
    }

    #[test]
    fn extraction_through_trivial_schedules() {
        let basis = SectorBasis::gate_sector(2);
        let h = build_jc_interaction(&basis, &[1.0, 1.0, 1.0]);
        // a full Rabi period multiplies each occupied cavity by -1: identity
        // on every logical input (two occupied cavities each)
        let full = vec![Segment::evolve(
            SegmentLabel::Wait,
            None,
            "jc",
            h.clone(),
            PI,
        )];
        let m = extract_logical(&basis, |input| Ok(evolve(&input, &full).unwrap().0)).unwrap();
        assert!(m.max_abs_diff(&LogicalOperator::identity()) < 1e-12);

        // half a period swaps photon and atom in both logical cavities:
        // |qx,qy> -> -|1-qx,1-qy>
        let half = vec![Segment::evolve(
            SegmentLabel::Wait,
            None,
            "jc",
            h.clone(),
            PI / 2.0,
        )];
        let m = extract_logical(&basis, |input| Ok(evolve(&input, &half).unwrap().0)).unwrap();
        let mut expected = DMatrix::zeros(4, 4);
        expected[(3, 0)] = c(-1.0);
        expected[(2, 1)] = c(-1.0);
        expected[(1, 2)] = c(-1.0);
        expected[(0, 3)] = c(-1.0);
        assert!(m.max_abs_diff(&LogicalOperator::from_entries(expected)) < 1e-12);
    }

    #[test]
    fn exact_timing_run_reproduces_the_sign_flip_exactly() {
        let timings = GateTimings::natural(4, 6, 100.0).unwrap();
        let run = GateRun {
            options: ScheduleOptions {
                exact_long_wait: true,
                ..ScheduleOptions::ideal()
            },
            ..GateRun::ideal(timings)
        };
        let outcome = simulate_cocsign(&run).unwrap();
        let expected = target_cocsign().scale(c(-1.0));
        assert!(outcome.logical.max_abs_diff(&expected) < 1e-12);
        assert!((outcome.report.avg_gate_fidelity - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ideal_run_with_4_6_is_diagonal_dominant() {
        let timings = GateTimings::natural(4, 6, 100.0).unwrap();
        let outcome = simulate_cocsign(&GateRun::ideal(timings)).unwrap();
        assert!(outcome.report.avg_gate_fidelity > 0.99);
        assert!(outcome.report.leakage <= 1e-2);
        assert!(outcome.logical.max_offdiagonal() <= timings.residual_in_tau1());
        // phases line up with the integer bookkeeping: all diagonals at pi
        for phase in outcome.report.phase_profile {
            assert!((phase.abs() - PI).abs() < 0.1);
        }
    }

    #[test]
    fn sweep_over_convergents_improves_monotonically() {
        let grid = SweepGrid {
            timing_pairs: vec![(4, 6), (45, 64)],
            ..SweepGrid::default()
        };
        let rows = sweep(&grid).unwrap();
        assert_eq!(rows.len(), 2);
        let infidelity: Vec<f64> = rows
            .iter()
            .map(|r| 1.0 - r.report.avg_gate_fidelity)
            .collect();
        assert!(infidelity[1] < infidelity[0]);
        assert!(rows[1].residual < rows[0].residual);
    }

    #[test]
    fn empty_axis_gives_empty_table() {
        let grid = SweepGrid {
            timing_pairs: vec![],
            ..SweepGrid::default()
        };
        assert!(sweep(&grid).unwrap().is_empty());
    }

    #[test]
    fn sweep_over_hop_strength_decays_toward_the_ideal_gate() {
        // at a positive-residual pair the finite-window error adds on top
        // of the timing error and dies off with nu/g
        let grid = SweepGrid {
            mode: JumpMode::Physical,
            timing_pairs: vec![(45, 64)],
            nu_over_g: vec![1e2, 1e3, 1e4],
            ..SweepGrid::default()
        };
        let rows = sweep(&grid).unwrap();
        let infidelity: Vec<f64> = rows
            .iter()
            .map(|r| 1.0 - r.report.avg_gate_fidelity)
            .collect();
        assert!(infidelity[0] >= infidelity[1] && infidelity[1] >= infidelity[2]);
    }

    #[test]
    fn parallel_sweep_matches_sequential() {
        let grid = SweepGrid {
            timing_pairs: vec![(4, 6), (17, 24)],
            jitter_sigma: vec![0.0, 0.005],
            ..SweepGrid::default()
        };
        let sequential = sweep(&grid).unwrap();
        let parallel = sweep_parallel(&grid, 2).unwrap();
        assert_eq!(sequential.len(), parallel.len());
        for (a, b) in sequential.iter().zip(&parallel) {
            assert_eq!(a.index, b.index);
            assert_eq!(a.seed, b.seed);
            assert_eq!(a.report.avg_gate_fidelity, b.report.avg_gate_fidelity);
        }
    }

    #[test]
    fn jitter_costs_fidelity_on_average() {
        let timings = GateTimings::natural(4, 6, 100.0).unwrap();
        let noiseless = simulate_cocsign(&GateRun::ideal(timings))
            .unwrap()
            .report
            .avg_gate_fidelity;
        let mut total = 0.0;
        let runs = 100;
        for seed in 0..runs {
            let run = GateRun {
                jitter: Some(JitterModel::new(0.01, seed).unwrap()),
                ..GateRun::ideal(timings)
            };
            total += simulate_cocsign(&run).unwrap().report.avg_gate_fidelity;
        }
        let mean = total / runs as f64;
        assert!(
            mean < noiseless,
            "mean jittered fidelity {mean} should fall below {noiseless}"
        );
    }

    #[test]
    fn feasibility_examples() {
        let report = feasibility(1e10, 1e9, 1e-6, 1e-9);
        assert!((report.delta_tau_min - 1e-9).abs() < 1e-24);
        assert!(report.window_ok);
        assert!((report.single_shot_error_floor - 1e-3).abs() < 1e-15);
        assert!(report.rwa_ok);

        let too_fast = feasibility(1e10, 1e9, 1e-6, 1e-10);
        assert!(!too_fast.window_ok);

        // infinitely sharp frequency: only the upper bound is active
        let sharp = feasibility(1e10, f64::INFINITY, 1e-6, 1e-9);
        assert_eq!(sharp.delta_tau_min, 0.0);
        assert!(sharp.window_ok);
        assert_eq!(sharp.single_shot_error_floor, 0.0);
    }

    #[test]
    fn snapping_phases() {
        assert_eq!(snap_to_quarter(FRAC_PI_2 + 1e-9), FRAC_PI_2);
        assert_eq!(snap_to_quarter(-PI - 1e-9), PI);
        let loose = 0.3;
        assert_eq!(snap_to_quarter(loose), loose);
    }
}
