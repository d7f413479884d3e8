//! Exact unitary evolution under piecewise-constant Hamiltonians.
//!
//! Sector dimensions stay around twenty, so propagators are computed
//! exactly from the Hermitian spectral decomposition instead of a
//! time-stepping integrator; the only approximation left in a gate run is
//! then the physics itself (the timing residual and finite hop windows).
//! Instantaneous photon swaps are zero-duration unitaries inserted between
//! timed segments, so idealized and physical schedules share one engine.

use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::hilbert::{SectorBasis, StateVector};
use crate::jch::{build_hop, OperatorMatrix};
use crate::{Error, Result};

/// Matrix exponential `exp(-i H t)` of a Hermitian matrix via
/// eigendecomposition. The caller guarantees Hermiticity.
pub fn hermitian_propagator_raw(h: &DMatrix<Complex64>, t: f64) -> DMatrix<Complex64> {
    let eig = SymmetricEigen::new(h.clone());
    let mut scaled = eig.eigenvectors.clone();
    for (j, energy) in eig.eigenvalues.iter().enumerate() {
        let phase = (-Complex64::i() * energy * t).exp();
        for z in scaled.column_mut(j).iter_mut() {
            *z *= phase;
        }
    }
    &scaled * eig.eigenvectors.adjoint()
}

/// Evolution operator `exp(-i H t)` (natural units `hbar = 1`).
///
/// Errors if `h` is not Hermitian within `1e-12` relative to its largest
/// entry; the result is unitary to `1e-12`.
pub fn propagator(h: &OperatorMatrix, t: f64) -> Result<OperatorMatrix> {
    let deviation = h.hermiticity_error();
    if deviation > 1e-12 * (1.0 + h.max_abs()) {
        return Err(Error::NotHermitian { deviation });
    }
    let entries = hermitian_propagator_raw(h.entries(), t);
    OperatorMatrix::from_entries(h.basis(), entries)
}

/// Instantaneous photon swap between two cavities: the hop propagator at a
/// quarter hop period, `exp(-i (pi/2) (a_i a_j+ + a_j a_i+))`. On a single
/// shared photon this moves the photon and multiplies the amplitude by `-i`;
/// on an empty pair it is the identity.
pub fn ideal_jump(basis: &Arc<SectorBasis>, pair: (usize, usize)) -> OperatorMatrix {
    let generator = build_hop(basis, pair, 1.0);
    propagator(&generator, FRAC_PI_2).expect("hop generator is Hermitian")
}

/// Descriptive tag for schedule segments.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SegmentLabel {
    Wait,
    Jump,
    FinalWait,
}

impl SegmentLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            SegmentLabel::Wait => "wait",
            SegmentLabel::Jump => "jump",
            SegmentLabel::FinalWait => "final-wait",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "wait" => Some(SegmentLabel::Wait),
            "jump" => Some(SegmentLabel::Jump),
            "final-wait" => Some(SegmentLabel::FinalWait),
            _ => None,
        }
    }
}

impl std::fmt::Display for SegmentLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How a segment acts on the state.
#[derive(Clone, Debug)]
pub enum SegmentBody {
    /// Evolve under a constant Hermitian generator for `duration`.
    Evolve {
        hamiltonian: OperatorMatrix,
        duration: f64,
    },
    /// Apply a fixed unitary. `elapsed` is the nominal wall-clock time the
    /// step stands for (zero for idealized jumps); it only feeds the
    /// trajectory time axis.
    Instant {
        unitary: OperatorMatrix,
        elapsed: f64,
    },
}

/// One piecewise-constant interval of the gate schedule.
#[derive(Clone, Debug)]
pub struct Segment {
    pub label: SegmentLabel,
    /// Cavities exchanging a photon, for jump segments.
    pub pair: Option<(usize, usize)>,
    /// Short description of the generator, for the timeline format.
    pub descriptor: String,
    pub body: SegmentBody,
}

impl Segment {
    pub fn evolve(
        label: SegmentLabel,
        pair: Option<(usize, usize)>,
        descriptor: impl Into<String>,
        hamiltonian: OperatorMatrix,
        duration: f64,
    ) -> Self {
        assert!(duration >= 0.0, "segment durations are non-negative");
        Self {
            label,
            pair,
            descriptor: descriptor.into(),
            body: SegmentBody::Evolve {
                hamiltonian,
                duration,
            },
        }
    }

    pub fn instant(
        label: SegmentLabel,
        pair: Option<(usize, usize)>,
        descriptor: impl Into<String>,
        unitary: OperatorMatrix,
        elapsed: f64,
    ) -> Self {
        Self {
            label,
            pair,
            descriptor: descriptor.into(),
            body: SegmentBody::Instant { unitary, elapsed },
        }
    }

    pub fn basis(&self) -> &Arc<SectorBasis> {
        match &self.body {
            SegmentBody::Evolve { hamiltonian, .. } => hamiltonian.basis(),
            SegmentBody::Instant { unitary, .. } => unitary.basis(),
        }
    }

    /// Wall-clock time the segment accounts for.
    pub fn duration(&self) -> f64 {
        match &self.body {
            SegmentBody::Evolve { duration, .. } => *duration,
            SegmentBody::Instant { elapsed, .. } => *elapsed,
        }
    }

    /// The unitary this segment applies.
    pub fn unitary(&self) -> Result<OperatorMatrix> {
        match &self.body {
            SegmentBody::Evolve {
                hamiltonian,
                duration,
            } => propagator(hamiltonian, *duration),
            SegmentBody::Instant { unitary, .. } => Ok(unitary.clone()),
        }
    }
}

/// States recorded after each segment of an evolution (plus the initial one).
#[derive(Clone, Debug)]
pub struct Trajectory {
    checkpoints: Vec<(f64, StateVector)>,
}

impl Trajectory {
    pub fn checkpoints(&self) -> &[(f64, StateVector)] {
        &self.checkpoints
    }

    pub fn final_state(&self) -> &StateVector {
        &self.checkpoints.last().expect("trajectory never empty").1
    }

    pub fn total_time(&self) -> f64 {
        self.checkpoints.last().expect("trajectory never empty").0
    }
}

/// Apply the segments in order, recording a checkpoint after each one.
///
/// Norm is preserved by the exact propagators; no renormalization happens
/// here, so drift would be visible to the conservation checks.
pub fn evolve(psi: &StateVector, segments: &[Segment]) -> Result<(StateVector, Trajectory)> {
    let mut state = psi.clone();
    let mut time = 0.0;
    let mut checkpoints = Vec::with_capacity(segments.len() + 1);
    checkpoints.push((time, state.clone()));
    for segment in segments {
        if !segment.basis().same_sector(psi.basis()) {
            return Err(Error::SectorMismatch {
                left: segment.basis().descriptor(),
                right: psi.basis().descriptor(),
            });
        }
        let u = segment.unitary()?;
        state = u.apply(&state)?;
        time += segment.duration();
        checkpoints.push((time, state.clone()));
    }
    Ok((state.clone(), Trajectory { checkpoints }))
}
