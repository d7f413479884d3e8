//! Timing integers and compilation of the coCSign pulse sequence.
//!
//! The gate needs a long wait that acts as a half Rabi flop on every
//! single-excitation cavity while closing a whole number of double-excitation
//! Rabi periods. With `tau1 = pi/g` and `tau2 = tau1/sqrt(2)` that is the
//! commensuration condition `2 n2 tau2 ~ 2 n1 tau1 + tau1/2`, i.e.
//! `sqrt(2) n2 ~ 2 n1 + 1/2`, which has no exact integer solution and is
//! satisfied approximately by Diophantine candidates found here either by
//! exhaustive scan or through the continued-fraction expansion of sqrt(8)
//! (denominators whose numerator is congruent to 1 mod 4).
//!
//! The schedule itself is the fixed eight-part sequence
//! jump(aux,x) . wait tau1/2 . jump(aux,y) . wait 2 n2 tau2 .
//! jump(aux,x) . wait tau1/2 . jump(aux,y) . wait tau1/2,
//! with jumps realized either as instantaneous swaps or as hop windows of
//! length `delta_tau = pi/(2 nu)`.

use std::f64::consts::{PI, SQRT_2};
use std::sync::Arc;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::hilbert::{cavity_name, SectorBasis, CAVITY_AUX, CAVITY_X, CAVITY_Y};
use crate::jch::{build_hop, build_jc_interaction, OperatorMatrix};
use crate::propagate::{ideal_jump, Segment, SegmentBody, SegmentLabel};
use crate::{Error, Result};

/// Complete timing configuration of one gate instance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GateTimings {
    n1: u32,
    n2: u32,
    g: f64,
    nu: f64,
}

impl GateTimings {
    pub fn new(n1: u32, n2: u32, g: f64, nu: f64) -> Result<Self> {
        if n1 < 1 || n2 < 1 {
            return Err(Error::InvalidTimingIntegers { n1, n2 });
        }
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !positive(g) || !positive(nu) {
            return Err(Error::Config(format!(
                "couplings must be positive (g={g}, nu={nu})"
            )));
        }
        Ok(Self { n1, n2, g, nu })
    }

    /// Natural units `g = 1`, so `tau1 = pi`.
    pub fn natural(n1: u32, n2: u32, nu_over_g: f64) -> Result<Self> {
        Self::new(n1, n2, 1.0, nu_over_g)
    }

    pub fn n1(&self) -> u32 {
        self.n1
    }

    pub fn n2(&self) -> u32 {
        self.n2
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// Single-excitation Rabi period `pi hbar / g`.
    pub fn tau1(&self) -> f64 {
        PI / self.g
    }

    /// Double-excitation Rabi period `tau1 / sqrt(2)`.
    pub fn tau2(&self) -> f64 {
        PI / (self.g * SQRT_2)
    }

    /// Photon transfer window `pi hbar / (2 nu)`.
    pub fn delta_tau(&self) -> f64 {
        PI / (2.0 * self.nu)
    }

    /// Duration of the long wait, `2 n2 tau2`.
    pub fn long_wait(&self) -> f64 {
        2.0 * f64::from(self.n2) * self.tau2()
    }

    /// Commensuration mismatch `|2 n2 tau2 - 2 n1 tau1 - tau1/2|`.
    pub fn residual(&self) -> f64 {
        (self.long_wait() - 2.0 * f64::from(self.n1) * self.tau1() - self.tau1() / 2.0).abs()
    }

    /// The same mismatch in units of `tau1`: `|sqrt(2) n2 - 2 n1 - 1/2|`.
    pub fn residual_in_tau1(&self) -> f64 {
        (SQRT_2 * f64::from(self.n2) - 2.0 * f64::from(self.n1) - 0.5).abs()
    }

    /// Whether the transfer window is comfortably shorter than a Rabi period
    /// (`delta_tau <= tau1 / 10`); physical schedules refuse to build
    /// otherwise.
    pub fn jump_window_ok(&self) -> bool {
        self.delta_tau() <= self.tau1() / 10.0
    }
}

/// One candidate solution of the commensuration condition.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimingCandidate {
    pub n1: u32,
    pub n2: u32,
    /// `|sqrt(2) n2 - 2 n1 - 1/2|`, in units of `tau1`.
    pub residual: f64,
}

/// Exhaustive scan over `1 <= n1, n2 <= bound`, ranked by residual.
pub fn search_timings(bound: u32) -> Vec<TimingCandidate> {
    assert!(bound >= 1, "search bound must be at least 1");
    let mut found = Vec::with_capacity((bound * bound) as usize);
    for n1 in 1..=bound {
        for n2 in 1..=bound {
            let residual = (SQRT_2 * f64::from(n2) - 2.0 * f64::from(n1) - 0.5).abs();
            found.push(TimingCandidate { n1, n2, residual });
        }
    }
    found.sort_by(|a, b| {
        a.residual
            .total_cmp(&b.residual)
            .then(a.n2.cmp(&b.n2))
            .then(a.n1.cmp(&b.n1))
    });
    found
}

/// Continued-fraction route: convergents `p/q` of `sqrt(8)` with
/// `p = 4 n1 + 1` (so `p = 1 mod 4`) give the systematically best pairs
/// `(n1, n2) = ((p-1)/4, q)`. Returned in order of increasing `n2`, which is
/// also strictly decreasing residual; always a subset of the exhaustive scan
/// over the same range.
pub fn convergent_timings(bound: u32) -> Vec<TimingCandidate> {
    let mut found = Vec::new();
    for (p, q) in sqrt8_convergents(u64::from(bound)) {
        if p % 4 != 1 {
            continue;
        }
        let n1 = (p - 1) / 4;
        let n2 = q;
        if n1 < 1 || n1 > u64::from(bound) || n2 < 1 {
            continue;
        }
        let residual = (SQRT_2 * n2 as f64 - 2.0 * n1 as f64 - 0.5).abs();
        found.push(TimingCandidate {
            n1: n1 as u32,
            n2: n2 as u32,
            residual,
        });
    }
    found
}

/// Convergents `p/q` of the continued fraction of `sqrt(8) = [2; 1, 4, ...]`
/// with `q <= max_q`, computed with the standard integer recurrence for
/// quadratic surds.
fn sqrt8_convergents(max_q: u64) -> Vec<(u64, u64)> {
    const N: u64 = 8;
    let a0 = 2u64; // floor(sqrt(8))
    let (mut m, mut d, mut a) = (0u64, 1u64, a0);
    let (mut p_prev, mut q_prev) = (1u128, 0u128);
    let (mut p, mut q) = (u128::from(a0), 1u128);
    let mut out = Vec::new();
    while q <= u128::from(max_q) {
        out.push((p as u64, q as u64));
        m = d * a - m;
        d = (N - m * m) / d;
        a = (a0 + m) / d;
        let p_next = u128::from(a) * p + p_prev;
        let q_next = u128::from(a) * q + q_prev;
        p_prev = p;
        q_prev = q;
        p = p_next;
        q = q_next;
    }
    out
}

/// How photon transfers are realized.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum JumpMode {
    /// Zero-duration exact swaps.
    Ideal,
    /// Hop windows of length `delta_tau` evolved under the full Hamiltonian.
    Physical,
}

impl JumpMode {
    pub fn as_str(self) -> &'static str {
        match self {
            JumpMode::Ideal => "ideal",
            JumpMode::Physical => "physical",
        }
    }
}

/// Knobs of the schedule compiler.
#[derive(Clone, Copy, Debug)]
pub struct ScheduleOptions {
    pub mode: JumpMode,
    /// Keep the atom-field coupling on during physical jump windows.
    pub g_during_jump: bool,
    /// Subtract `delta_tau` from the wait following each physical jump so
    /// the total elapsed time matches the idealized schedule. The two
    /// conventions differ at second order in `delta_tau / tau1`; the flag
    /// makes that measurable. Ignored for ideal jumps.
    pub compensate_wait: bool,
    /// Diagnostic: replace the long wait by the exact per-excitation-block
    /// unitary it approximates (a half flop with phase `-pi/2` on every
    /// single-excitation cavity, identity elsewhere), removing the
    /// commensuration residual from the run.
    pub exact_long_wait: bool,
}

impl Default for ScheduleOptions {
    fn default() -> Self {
        Self {
            mode: JumpMode::Ideal,
            g_during_jump: true,
            compensate_wait: false,
            exact_long_wait: false,
        }
    }
}

impl ScheduleOptions {
    pub fn ideal() -> Self {
        Self::default()
    }

    pub fn physical(g_during_jump: bool) -> Self {
        Self {
            mode: JumpMode::Physical,
            g_during_jump,
            ..Self::default()
        }
    }
}

/// The exact long-wait unitary used by the diagnostic mode: every cavity
/// holding exactly one excitation has photon and atom swapped with a factor
/// `-i`, every other cavity is untouched. This is what the long wait would
/// do if `2 n2 tau2` equalled `2 n1 tau1 + tau1/2` exactly while still
/// closing whole double-excitation periods.
pub fn exact_long_wait_unitary(basis: &Arc<SectorBasis>) -> OperatorMatrix {
    let mut op = OperatorMatrix::zeros(basis);
    let quarter = Complex64::new(0.0, -1.0);
    for (col, state) in basis.states().iter().enumerate() {
        let mut image = state.clone();
        let mut flips = 0u32;
        for cavity in 0..basis.cavity_count() {
            if state.excitation(cavity) == 1 {
                // one excitation means photons and atom bit are 0/1 swapped
                image = image.with_cavity(cavity, state.atom(cavity), state.photons(cavity));
                flips += 1;
            }
        }
        let row = basis
            .index_of(&image)
            .expect("excitation-preserving flip stays in the sector");
        let mut amp = Complex64::new(1.0, 0.0);
        for _ in 0..flips {
            amp *= quarter;
        }
        op.entries_mut()[(row, col)] = amp;
    }
    op
}

/// Compile the coCSign sequence for the gate sector.
///
/// Emits, in order: jump(aux,x), wait tau1/2, jump(aux,y), wait 2 n2 tau2,
/// jump(aux,x), wait tau1/2, jump(aux,y), final wait tau1/2. Waits always
/// evolve under the exchange interaction alone; physical jump windows add
/// the hop term and (optionally) keep the exchange coupling on. Segment
/// count and ordering are identical across modes.
pub fn build_cocsign_schedule(
    basis: &Arc<SectorBasis>,
    timings: &GateTimings,
    options: &ScheduleOptions,
) -> Result<Vec<Segment>> {
    assert_eq!(
        basis.cavity_count(),
        crate::hilbert::GATE_CAVITIES,
        "the gate schedule runs on the (x, y, aux) register"
    );
    if options.mode == JumpMode::Physical && !timings.jump_window_ok() {
        return Err(Error::JumpWindowTooLong {
            delta_tau: timings.delta_tau(),
            limit: timings.tau1() / 10.0,
        });
    }

    let g = timings.g();
    let couplings = vec![g; basis.cavity_count()];
    let h_wait = build_jc_interaction(basis, &couplings);
    let wait_descriptor = format!("jc(g={g})");

    let compensation = match options.mode {
        JumpMode::Physical if options.compensate_wait => timings.delta_tau(),
        _ => 0.0,
    };

    let jump = |pair: (usize, usize)| -> Segment {
        let name = format!("{}-{}", cavity_name(pair.0), cavity_name(pair.1));
        match options.mode {
            JumpMode::Ideal => Segment::instant(
                SegmentLabel::Jump,
                Some(pair),
                format!("ideal-jump({name})"),
                ideal_jump(basis, pair),
                0.0,
            ),
            JumpMode::Physical => {
                let hop = build_hop(basis, pair, timings.nu());
                let (h, descriptor) = if options.g_during_jump {
                    (
                        &hop + &h_wait,
                        format!("hop(nu={})+jc(g={g})", timings.nu()),
                    )
                } else {
                    (hop, format!("hop(nu={})", timings.nu()))
                };
                Segment::evolve(
                    SegmentLabel::Jump,
                    Some(pair),
                    descriptor,
                    h,
                    timings.delta_tau(),
                )
            }
        }
    };

    let wait = |label: SegmentLabel, duration: f64| -> Segment {
        Segment::evolve(
            label,
            None,
            wait_descriptor.clone(),
            h_wait.clone(),
            (duration - compensation).max(0.0),
        )
    };

    let half = timings.tau1() / 2.0;
    let long = timings.long_wait();
    let long_segment = if options.exact_long_wait {
        Segment::instant(
            SegmentLabel::Wait,
            None,
            "exact-long-wait".to_string(),
            exact_long_wait_unitary(basis),
            long - compensation,
        )
    } else {
        wait(SegmentLabel::Wait, long)
    };

    Ok(vec![
        jump((CAVITY_AUX, CAVITY_X)),
        wait(SegmentLabel::Wait, half),
        jump((CAVITY_AUX, CAVITY_Y)),
        long_segment,
        jump((CAVITY_AUX, CAVITY_X)),
        wait(SegmentLabel::Wait, half),
        jump((CAVITY_AUX, CAVITY_Y)),
        wait(SegmentLabel::FinalWait, half),
    ])
}

/// Additive Gaussian timing noise.
///
/// By default only wait segments are perturbed: the dominant timing error
/// sits in the long intervals, while the transfer windows are driven by the
/// fast switch hardware. Runs are reproducible for a fixed seed.
#[derive(Clone, Copy, Debug)]
pub struct JitterModel {
    /// Standard deviation of the duration noise, in units of `tau1`.
    pub sigma: f64,
    pub seed: u64,
    /// Extend the noise to physical jump windows too.
    pub include_jumps: bool,
}

impl JitterModel {
    pub fn new(sigma: f64, seed: u64) -> Result<Self> {
        if !sigma.is_finite() || sigma < 0.0 {
            return Err(Error::Config(format!(
                "jitter sigma must be non-negative (got {sigma})"
            )));
        }
        Ok(Self {
            sigma,
            seed,
            include_jumps: false,
        })
    }

    pub fn with_jumps(mut self) -> Self {
        self.include_jumps = true;
        self
    }
}

/// Perturb segment durations with independent Gaussian noise, deterministic
/// per seed. Instantaneous segments are never touched; negative perturbed
/// durations clamp to zero.
pub fn apply_jitter(segments: &[Segment], model: &JitterModel, tau1: f64) -> Vec<Segment> {
    if model.sigma == 0.0 {
        return segments.to_vec();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(model.seed);
    let noise = Normal::new(0.0, model.sigma * tau1).expect("sigma validated non-negative");
    segments
        .iter()
        .map(|segment| {
            let eligible = match segment.label {
                SegmentLabel::Wait | SegmentLabel::FinalWait => true,
                SegmentLabel::Jump => model.include_jumps,
            };
            match (&segment.body, eligible) {
                (
                    SegmentBody::Evolve {
                        hamiltonian,
                        duration,
                    },
                    true,
                ) => {
                    let perturbed = (duration + noise.sample(&mut rng)).max(0.0);
                    Segment::evolve(
                        segment.label,
                        segment.pair,
                        segment.descriptor.clone(),
                        hamiltonian.clone(),
                        perturbed,
                    )
                }
                _ => segment.clone(),
            }
        })
        .collect()
}

/// Total wall-clock duration of a schedule.
pub fn total_duration(segments: &[Segment]) -> f64 {
    segments.iter().map(Segment::duration).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_times() {
        let t = GateTimings::natural(4, 6, 100.0).unwrap();
        assert!((t.tau1() - PI).abs() < 1e-15);
        assert!((t.tau2() / t.tau1() - 1.0 / SQRT_2).abs() < 1e-15);
        assert!((t.delta_tau() - PI / 200.0).abs() < 1e-15);
        assert!((t.residual_in_tau1() - (6.0 * SQRT_2 - 8.5).abs()).abs() < 1e-15);
        assert!((t.residual() - t.residual_in_tau1() * t.tau1()).abs() < 1e-12);
    }

    #[test]
    fn zero_timing_integers_are_rejected() {
        assert!(matches!(
            GateTimings::natural(0, 0, 100.0),
            Err(Error::InvalidTimingIntegers { .. })
        ));
        assert!(GateTimings::natural(1, 1, 100.0).is_ok());
    }

    #[test]
    fn search_small_bound_finds_4_6() {
        let ranked = search_timings(10);
        let best = ranked[0];
        assert_eq!((best.n1, best.n2), (4, 6));
        let expected = (6.0 * SQRT_2 - 8.5).abs();
        assert!((best.residual - expected).abs() < 1e-14);
    }

    #[test]
    fn search_bound_50_still_prefers_4_6() {
        let ranked = search_timings(50);
        assert_eq!((ranked[0].n1, ranked[0].n2), (4, 6));
    }

    #[test]
    fn search_bound_70_surfaces_45_64() {
        let ranked = search_timings(70);
        assert_eq!((ranked[0].n1, ranked[0].n2), (45, 64));
        assert!(ranked[0].residual < (6.0 * SQRT_2 - 8.5).abs());
        assert!((ranked[0].residual - 0.0097).abs() < 1e-4);
    }

    #[test]
    fn exhaustive_residuals_recompute() {
        for candidate in search_timings(12) {
            let direct =
                (SQRT_2 * f64::from(candidate.n2) - 2.0 * f64::from(candidate.n1) - 0.5).abs();
            assert_eq!(candidate.residual, direct);
        }
    }

    #[test]
    fn convergent_route_is_subset_of_exhaustive() {
        let bound = 250;
        let exhaustive = search_timings(bound);
        let convergents = convergent_timings(bound);
        assert!(!convergents.is_empty());
        assert_eq!((convergents[0].n1, convergents[0].n2), (4, 6));
        // the next mod-4 convergent
        assert!(convergents.iter().any(|c| (c.n1, c.n2) == (144, 204)));
        for c in &convergents {
            assert!(exhaustive
                .iter()
                .any(|e| e.n1 == c.n1 && e.n2 == c.n2 && (e.residual - c.residual).abs() < 1e-14));
        }
        // residuals strictly improve along the sequence
        for pair in convergents.windows(2) {
            assert!(pair[1].residual < pair[0].residual);
        }
    }

    #[test]
    fn sqrt8_continued_fraction_prefix() {
        let convergents = sqrt8_convergents(204);
        assert_eq!(
            convergents,
            vec![
                (2, 1),
                (3, 1),
                (14, 5),
                (17, 6),
                (82, 29),
                (99, 35),
                (478, 169),
                (577, 204)
            ]
        );
    }

    #[test]
    fn ideal_schedule_shape() {
        let basis = SectorBasis::gate_sector(2);
        let timings = GateTimings::natural(4, 6, 100.0).unwrap();
        let schedule = build_cocsign_schedule(&basis, &timings, &ScheduleOptions::ideal()).unwrap();
        assert_eq!(schedule.len(), 8);
        let labels: Vec<SegmentLabel> = schedule.iter().map(|s| s.label).collect();
        assert_eq!(
            labels,
            vec![
                SegmentLabel::Jump,
                SegmentLabel::Wait,
                SegmentLabel::Jump,
                SegmentLabel::Wait,
                SegmentLabel::Jump,
                SegmentLabel::Wait,
                SegmentLabel::Jump,
                SegmentLabel::FinalWait,
            ]
        );
        for segment in schedule.iter().filter(|s| s.label == SegmentLabel::Jump) {
            assert_eq!(segment.duration(), 0.0);
        }
        let expected_total = timings.long_wait() + 1.5 * timings.tau1();
        assert!((total_duration(&schedule) - expected_total).abs() < 1e-12);
        // jump pairs alternate aux-x, aux-y
        assert_eq!(schedule[0].pair, Some((CAVITY_AUX, CAVITY_X)));
        assert_eq!(schedule[2].pair, Some((CAVITY_AUX, CAVITY_Y)));
        assert_eq!(schedule[4].pair, Some((CAVITY_AUX, CAVITY_X)));
        assert_eq!(schedule[6].pair, Some((CAVITY_AUX, CAVITY_Y)));
    }

    #[test]
    fn physical_schedule_duration() {
        let basis = SectorBasis::gate_sector(2);
        let timings = GateTimings::natural(4, 6, 100.0).unwrap();
        let schedule =
            build_cocsign_schedule(&basis, &timings, &ScheduleOptions::physical(true)).unwrap();
        let expected = 4.0 * timings.delta_tau() + timings.long_wait() + 1.5 * timings.tau1();
        assert!((total_duration(&schedule) - expected).abs() < 1e-12);

        // segment count, labels and pairs are mode-independent
        let ideal = build_cocsign_schedule(&basis, &timings, &ScheduleOptions::ideal()).unwrap();
        assert_eq!(ideal.len(), schedule.len());
        for (a, b) in ideal.iter().zip(&schedule) {
            assert_eq!(a.label, b.label);
            assert_eq!(a.pair, b.pair);
        }

        // compensation restores the ideal total
        let options = ScheduleOptions {
            compensate_wait: true,
            ..ScheduleOptions::physical(true)
        };
        let compensated = build_cocsign_schedule(&basis, &timings, &options).unwrap();
        let ideal_total = timings.long_wait() + 1.5 * timings.tau1();
        assert!((total_duration(&compensated) - ideal_total).abs() < 1e-12);
    }

    #[test]
    fn slow_switch_is_rejected_in_physical_mode() {
        let basis = SectorBasis::gate_sector(2);
        // delta_tau = pi/8 > tau1/10
        let timings = GateTimings::natural(4, 6, 4.0).unwrap();
        assert!(matches!(
            build_cocsign_schedule(&basis, &timings, &ScheduleOptions::physical(true)),
            Err(Error::JumpWindowTooLong { .. })
        ));
        // ideal mode does not care about the window
        assert!(build_cocsign_schedule(&basis, &timings, &ScheduleOptions::ideal()).is_ok());
    }

    #[test]
    fn jitter_is_deterministic_and_waits_only() {
        let basis = SectorBasis::gate_sector(2);
        let timings = GateTimings::natural(4, 6, 100.0).unwrap();
        let schedule =
            build_cocsign_schedule(&basis, &timings, &ScheduleOptions::physical(true)).unwrap();

        let silent = JitterModel::new(0.0, 7).unwrap();
        let same = apply_jitter(&schedule, &silent, timings.tau1());
        for (a, b) in schedule.iter().zip(&same) {
            assert_eq!(a.duration(), b.duration());
        }

        let model = JitterModel::new(0.01, 7).unwrap();
        let once = apply_jitter(&schedule, &model, timings.tau1());
        let twice = apply_jitter(&schedule, &model, timings.tau1());
        for (a, b) in once.iter().zip(&twice) {
            assert_eq!(a.duration(), b.duration());
        }
        // jump windows untouched by default
        for (a, b) in schedule.iter().zip(&once) {
            if a.label == SegmentLabel::Jump {
                assert_eq!(a.duration(), b.duration());
            } else {
                assert_ne!(a.duration(), b.duration());
            }
        }

        let with_jumps = apply_jitter(&schedule, &model.with_jumps(), timings.tau1());
        assert!(schedule
            .iter()
            .zip(&with_jumps)
            .filter(|(a, _)| a.label == SegmentLabel::Jump)
            .any(|(a, b)| a.duration() != b.duration()));
    }

    #[test]
    fn exact_long_wait_flips_single_excitations() {
        let basis = SectorBasis::gate_sector(2);
        let u = exact_long_wait_unitary(&basis);
        assert!(u.unitarity_error() < 1e-15);
        // |00> encoding: both logical cavities flip atom -> photon, (-i)^2
        let psi = crate::hilbert::logical_input(&basis, 0, 0).unwrap();
        let out = u.apply(&psi).unwrap();
        let flipped = crate::hilbert::BasisState::new(vec![1, 1, 0], vec![0, 0, 0]);
        assert!((out.amplitude(&flipped).unwrap() - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
        // a double-excitation cavity is left alone
        let parked = crate::hilbert::BasisState::new(vec![0, 0, 1], vec![0, 0, 1]);
        let phi = crate::hilbert::StateVector::basis_state(&basis, &parked).unwrap();
        let kept = u.apply(&phi).unwrap();
        assert!((kept.amplitude(&parked).unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }
}
