//! Simulation of the coCSign entangling gate on asynchronous atomic
//! excitations in coupled optical cavities.
//!
//! Two logical qubits are stored in two Jaynes-Cummings cavities, each
//! containing one excitation that is either atomic (`|0>`) or photonic
//! (`|1>`). An auxiliary cavity, photon hops between cavities on short
//! time windows, and the incommensurability of the single- and
//! double-excitation Rabi periods together realize a conditional sign flip
//! on `|01>` without beam splitters.
//!
//! The crate is organized around the pieces of that construction:
//!
//! - [`hilbert`]: truncated occupation-number bases restricted to a fixed
//!   total-excitation sector, and state vectors over them.
//! - [`jch`]: Jaynes-Cummings and photon-hopping Hamiltonians on a sector,
//!   plus the coupling-from-geometry formula.
//! - [`propagate`]: exact unitary evolution under piecewise-constant
//!   Hamiltonians via Hermitian spectral decomposition.
//! - [`schedule`]: the Diophantine search for the timing integers and the
//!   compilation of the gate's jump/wait sequence into segments.
//! - [`oracle`]: an exact integer phase-bookkeeping tracer that replays the
//!   gate symbolically, independent of the numerics.
//! - [`analysis`]: logical-operator extraction, average gate fidelity and
//!   leakage, parameter sweeps, and the hop-window feasibility arithmetic.
//! - [`config`], [`output`], [`cli`]: the batch front end behind the
//!   `cocsign` binary.
//!
//! Everything internal runs in natural units `hbar = 1`, and by default
//! `g = 1` so the single-excitation Rabi period is `tau1 = pi`.
//!
//! The `examples/` directory has one runnable demonstration per capability;
//! start with `cargo run --example gate_run`.

pub mod analysis;
pub mod cli;
pub mod config;
pub mod hilbert;
pub mod jch;
pub mod oracle;
pub mod output;
pub mod propagate;
pub mod schedule;

/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A basis state was used with a sector it does not belong to.
    #[error("state {state} is outside the sector {sector}")]
    StateOutsideSector { state: String, sector: String },
    /// Two objects built over different sector bases were combined.
    #[error("sector mismatch: {left} vs {right}")]
    SectorMismatch { left: String, right: String },
    /// A propagator was requested for a non-Hermitian generator.
    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },
    /// The symbolic tracer hit a configuration the gate schedule must never
    /// produce (e.g. two photons meeting at a jump).
    #[error("invalid trace: {0}")]
    InvalidTrace(String),
    /// Timing integers outside their domain.
    #[error("timing integers must be >= 1 (got n1={n1}, n2={n2})")]
    InvalidTimingIntegers { n1: u32, n2: u32 },
    /// Physical jump window too long compared to the Rabi period.
    #[error(
        "jump window {delta_tau:.3e} exceeds tau1/10 = {limit:.3e}; \
         increase the hop strength so photon transfers stay short"
    )]
    JumpWindowTooLong { delta_tau: f64, limit: f64 },
    /// Atom position outside the cavity mode.
    #[error("atom position {x} lies outside the cavity [0, {length}]")]
    PositionOutsideCavity { x: f64, length: f64 },
    /// Bad run configuration (schema violation, inconsistent fields, ...).
    #[error("configuration error: {0}")]
    Config(String),
    /// Malformed data in one of the documented file formats.
    #[error("malformed {format} data: {message}")]
    Parse {
        format: &'static str,
        message: String,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the batch front end: 2 for configuration and
    /// format errors, 1 for physics-level failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Parse { .. } => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
