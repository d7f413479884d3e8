//! Symbolic phase bookkeeping for the gate, independent of the numerics.
//!
//! Every relevant amplitude during the schedule is a power of `-i`: a half
//! Rabi flop contributes `-pi/2` per singly-excited cavity, a photon
//! transfer contributes `-pi/2`, and the long wait closes whole
//! double-excitation periods, contributing nothing on a doubly-excited
//! cavity. The tracer replays the schedule over per-cavity tags
//!
//! - `E`: empty cavity,
//! - `P`: one photon, atom in the ground state,
//! - `A`: excited atom, no photon,
//! - `D`: photon plus excited atom (double excitation),
//!
//! counting accumulated quarters of `-pi/2` as exact integers. Disagreement
//! between this tracer and the numerical simulator is therefore
//! attributable purely to the physical approximations (timing residual,
//! finite hop windows), never to arithmetic.
//!
//! Configurations the schedule must never produce (a half wait on a `D`
//! cavity, two photons meeting at a jump) are hard errors: the gate's
//! correctness argument asserts that at every transfer the participating
//! cavities hold at most one photon.

use num_complex::Complex64;

use crate::hilbert::{cavity_name, CAVITY_AUX, CAVITY_X, CAVITY_Y};
use crate::{Error, Result};

/// Symbolic per-cavity occupation.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CavityTag {
    Empty,
    Photon,
    Atom,
    Double,
}

impl CavityTag {
    pub fn excitation(self) -> u32 {
        match self {
            CavityTag::Empty => 0,
            CavityTag::Photon | CavityTag::Atom => 1,
            CavityTag::Double => 2,
        }
    }

    pub fn carries_photon(self) -> bool {
        matches!(self, CavityTag::Photon | CavityTag::Double)
    }

    pub fn symbol(self) -> char {
        match self {
            CavityTag::Empty => 'E',
            CavityTag::Photon => 'P',
            CavityTag::Atom => 'A',
            CavityTag::Double => 'D',
        }
    }
}

impl std::fmt::Display for CavityTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Tags of the (x, y, aux) register plus the accumulated phase, counted in
/// integer units of `-pi/2`. The phase only ever increments.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct TraceState {
    pub tags: [CavityTag; 3],
    pub phase_quarters: u32,
}

impl TraceState {
    pub fn total_excitation(&self) -> u32 {
        self.tags.iter().map(|t| t.excitation()).sum()
    }
}

/// A wait of half a single-excitation Rabi period: photon and atom swap
/// with one quarter of phase; an empty cavity idles. A doubly-excited
/// cavity must never see a half wait, so that input invalidates the trace.
pub fn rule_wait_half(tag: CavityTag) -> Result<(CavityTag, u32)> {
    match tag {
        CavityTag::Photon => Ok((CavityTag::Atom, 1)),
        CavityTag::Atom => Ok((CavityTag::Photon, 1)),
        CavityTag::Empty => Ok((CavityTag::Empty, 0)),
        CavityTag::Double => Err(Error::InvalidTrace(
            "half wait reached a doubly-excited cavity".to_string(),
        )),
    }
}

/// The long wait `2 n2 tau2`: on a single excitation it acts like an extra
/// half wait (that is the commensuration condition at work), while a double
/// excitation completes whole periods and returns unchanged with no phase.
pub fn rule_wait_long(tag: CavityTag) -> (CavityTag, u32) {
    match tag {
        CavityTag::Photon => (CavityTag::Atom, 1),
        CavityTag::Atom => (CavityTag::Photon, 1),
        CavityTag::Empty => (CavityTag::Empty, 0),
        CavityTag::Double => (CavityTag::Double, 0),
    }
}

/// A photon transfer between two cavities: the single photon present moves
/// across with one quarter of phase; with no photon nothing happens. Two
/// photons across the pair would not transfer cleanly and invalidate the
/// trace.
pub fn rule_jump(a: CavityTag, b: CavityTag) -> Result<(CavityTag, CavityTag, u32)> {
    match (a.carries_photon(), b.carries_photon()) {
        (false, false) => Ok((a, b, 0)),
        (true, true) => Err(Error::InvalidTrace(format!(
            "jump with a photon on both sides ({a}, {b})"
        ))),
        (true, false) => Ok((remove_photon(a), add_photon(b), 1)),
        (false, true) => Ok((add_photon(a), remove_photon(b), 1)),
    }
}

fn remove_photon(tag: CavityTag) -> CavityTag {
    match tag {
        CavityTag::Photon => CavityTag::Empty,
        CavityTag::Double => CavityTag::Atom,
        other => other,
    }
}

fn add_photon(tag: CavityTag) -> CavityTag {
    match tag {
        CavityTag::Empty => CavityTag::Photon,
        CavityTag::Atom => CavityTag::Double,
        other => unreachable!("adding a photon to a photon-bearing tag {other}"),
    }
}

/// One row of the per-part log.
#[derive(Clone, Debug)]
pub struct TraceStep {
    /// 1..=8; parts 1..7 are the jump/wait alternation, part 8 the final wait.
    pub part: usize,
    pub operation: String,
    pub pair: Option<(usize, usize)>,
    /// Register tags after the part.
    pub tags: [CavityTag; 3],
    pub delta_quarters: u32,
}

/// Outcome of tracing one logical input through the schedule.
#[derive(Clone, Debug)]
pub struct TraceResult {
    pub input: (u8, u8),
    pub output: (u8, u8),
    /// Accumulated quarters after part 7 (before the final wait).
    pub quarters_through_part7: u32,
    /// Accumulated quarters including the final wait.
    pub total_quarters: u32,
    pub steps: Vec<TraceStep>,
}

impl TraceResult {
    /// Total phase modulo `2 pi`, still in quarters of `-pi/2` (0..=3).
    pub fn phase_quarters_mod(&self) -> u32 {
        self.total_quarters % 4
    }

    /// The exact output amplitude, `(-i)^total_quarters`.
    pub fn amplitude(&self) -> Complex64 {
        quarters_to_amplitude(self.total_quarters)
    }

    /// Aligned text table of the trace, one row per part.
    pub fn table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "input |{}{}>  (x={} y={} aux=E)\n",
            self.input.0,
            self.input.1,
            if self.input.0 == 1 { 'P' } else { 'A' },
            if self.input.1 == 1 { 'P' } else { 'A' },
        ));
        out.push_str("part  operation        x  y  aux  phase\n");
        for step in &self.steps {
            let phase = match step.delta_quarters {
                0 => "0".to_string(),
                1 => "-pi/2".to_string(),
                q => format!("-{q}*pi/2"),
            };
            out.push_str(&format!(
                "{:<5} {:<16} {}  {}  {}    {}\n",
                step.part,
                step.operation,
                step.tags[CAVITY_X],
                step.tags[CAVITY_Y],
                step.tags[CAVITY_AUX],
                phase,
            ));
        }
        out.push_str(&format!(
            "output |{}{}>  amplitude (-i)^{} = {}\n",
            self.output.0,
            self.output.1,
            self.total_quarters,
            format_exact_amplitude(self.total_quarters),
        ));
        out
    }
}

/// Exact `(-i)^q` without floating-point rounding.
pub fn quarters_to_amplitude(quarters: u32) -> Complex64 {
    match quarters % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    }
}

fn format_exact_amplitude(quarters: u32) -> &'static str {
    match quarters % 4 {
        0 => "+1",
        1 => "-i",
        2 => "-1",
        _ => "+i",
    }
}

fn initial_tags(qx: u8, qy: u8) -> [CavityTag; 3] {
    let encode = |bit: u8| {
        if bit == 1 {
            CavityTag::Photon
        } else {
            CavityTag::Atom
        }
    };
    let mut tags = [CavityTag::Empty; 3];
    tags[CAVITY_X] = encode(qx);
    tags[CAVITY_Y] = encode(qy);
    tags[CAVITY_AUX] = CavityTag::Empty;
    tags
}

enum Part {
    Jump(usize, usize),
    WaitHalf,
    WaitLong,
    FinalWait,
}

/// Replay the full eight-part schedule (four jumps, three waits, one final
/// wait) for a logical input, returning the recovered logical state, the
/// exact phase, and the per-part log.
pub fn trace_cocsign(qx: u8, qy: u8) -> Result<TraceResult> {
    assert!(qx <= 1 && qy <= 1, "logical inputs are bits");
    let parts = [
        Part::Jump(CAVITY_AUX, CAVITY_X),
        Part::WaitHalf,
        Part::Jump(CAVITY_AUX, CAVITY_Y),
        Part::WaitLong,
        Part::Jump(CAVITY_AUX, CAVITY_X),
        Part::WaitHalf,
        Part::Jump(CAVITY_AUX, CAVITY_Y),
        Part::FinalWait,
    ];

    let mut state = TraceState {
        tags: initial_tags(qx, qy),
        phase_quarters: 0,
    };
    let mut steps = Vec::with_capacity(parts.len());
    let mut quarters_through_part7 = 0;

    for (k, part) in parts.iter().enumerate() {
        let before = state.total_excitation();
        let (operation, pair, delta) = match part {
            Part::Jump(i, j) => {
                let (a, b, delta) = rule_jump(state.tags[*i], state.tags[*j])?;
                state.tags[*i] = a;
                state.tags[*j] = b;
                (
                    format!("jump {}-{}", cavity_name(*i), cavity_name(*j)),
                    Some((*i, *j)),
                    delta,
                )
            }
            Part::WaitHalf | Part::FinalWait => {
                let mut delta = 0;
                for tag in state.tags.iter_mut() {
                    let (next, d) = rule_wait_half(*tag)?;
                    *tag = next;
                    delta += d;
                }
                let name = if matches!(part, Part::FinalWait) {
                    "final wait"
                } else {
                    "half wait"
                };
                (name.to_string(), None, delta)
            }
            Part::WaitLong => {
                let mut delta = 0;
                for tag in state.tags.iter_mut() {
                    let (next, d) = rule_wait_long(*tag);
                    *tag = next;
                    delta += d;
                }
                ("long wait".to_string(), None, delta)
            }
        };
        state.phase_quarters += delta;
        debug_assert_eq!(state.total_excitation(), before, "excitation conserved");
        if k + 1 == 7 {
            quarters_through_part7 = state.phase_quarters;
        }
        steps.push(TraceStep {
            part: k + 1,
            operation,
            pair,
            tags: state.tags,
            delta_quarters: delta,
        });
    }

    if state.tags[CAVITY_AUX] != CavityTag::Empty {
        return Err(Error::InvalidTrace(format!(
            "auxiliary cavity not empty after the schedule ({})",
            state.tags[CAVITY_AUX]
        )));
    }
    let decode = |tag: CavityTag| -> Result<u8> {
        match tag {
            CavityTag::Photon => Ok(1),
            CavityTag::Atom => Ok(0),
            other => Err(Error::InvalidTrace(format!(
                "logical cavity ended in a non-logical tag {other}"
            ))),
        }
    };
    let output = (decode(state.tags[CAVITY_X])?, decode(state.tags[CAVITY_Y])?);

    Ok(TraceResult {
        input: (qx, qy),
        output,
        quarters_through_part7,
        total_quarters: state.phase_quarters,
        steps,
    })
}

/// The 4x4 logical operator assembled from the four traces: entry
/// `(out, in) = (-i)^total_quarters` at the traced output position. Basis
/// order `|00>, |01>, |10>, |11>`.
pub fn logical_from_traces() -> Result<nalgebra::DMatrix<Complex64>> {
    let mut m = nalgebra::DMatrix::<Complex64>::zeros(4, 4);
    for (col, (qx, qy)) in [(0u8, 0u8), (0, 1), (1, 0), (1, 1)].iter().enumerate() {
        let trace = trace_cocsign(*qx, *qy)?;
        let row = usize::from(trace.output.0) * 2 + usize::from(trace.output.1);
        m[(row, col)] = trace.amplitude();
    }
    Ok(m)
}
