//! Writers and parsers for the documented result formats.
//!
//! Every format starts with a `# format_version=1` line. Numeric fields are
//! written with `{:.16e}`, which round-trips `f64` exactly, so identical
//! configs and seeds produce byte-identical tables.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::analysis::{LogicalOperator, SweepRow, LOGICAL_LABELS};
use crate::hilbert::{cavity_name, SectorBasis};
use crate::propagate::Segment;
use crate::propagate::{SegmentLabel, Trajectory};
use crate::{Error, Result};

pub const VERSION_LINE: &str = "# format_version=1";

fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn parse_f64(field: &str, format: &'static str) -> Result<f64> {
    field.trim().parse::<f64>().map_err(|e| Error::Parse {
        format,
        message: format!("bad number {field:?}: {e}"),
    })
}

fn check_header<'a>(
    lines: &mut impl Iterator<Item = &'a str>,
    expected_columns: &str,
    format: &'static str,
) -> Result<()> {
    match lines.next() {
        Some(line) if line.trim() == VERSION_LINE => {}
        other => {
            return Err(Error::Parse {
                format,
                message: format!("missing version line, found {other:?}"),
            })
        }
    }
    match lines.next() {
        Some(line) if line.trim() == expected_columns => Ok(()),
        other => Err(Error::Parse {
            format,
            message: format!("expected header {expected_columns:?}, found {other:?}"),
        }),
    }
}

// ---------------------------------------------------------------- logical

const LOGICAL_HEADER: &str = "out,in,re,im";

/// CSV of the 4x4 logical operator, row-major over (out, in) labels.
pub fn logical_operator_csv(m: &LogicalOperator) -> String {
    let mut out = format!("{VERSION_LINE}\n{LOGICAL_HEADER}\n");
    for (r, out_label) in LOGICAL_LABELS.iter().enumerate() {
        for (c, in_label) in LOGICAL_LABELS.iter().enumerate() {
            let z = m.entries()[(r, c)];
            let _ = writeln!(
                out,
                "{out_label},{in_label},{},{}",
                fmt_f64(z.re),
                fmt_f64(z.im)
            );
        }
    }
    out
}

pub fn parse_logical_operator(text: &str) -> Result<LogicalOperator> {
    const FORMAT: &str = "logical-operator";
    let mut lines = text.lines();
    check_header(&mut lines, LOGICAL_HEADER, FORMAT)?;
    let mut entries = DMatrix::<Complex64>::zeros(4, 4);
    let mut seen = 0;
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(Error::Parse {
                format: FORMAT,
                message: format!("expected 4 fields, got {line:?}"),
            });
        }
        let row = LOGICAL_LABELS
            .iter()
            .position(|l| *l == fields[0])
            .ok_or_else(|| Error::Parse {
                format: FORMAT,
                message: format!("unknown logical label {:?}", fields[0]),
            })?;
        let col = LOGICAL_LABELS
            .iter()
            .position(|l| *l == fields[1])
            .ok_or_else(|| Error::Parse {
                format: FORMAT,
                message: format!("unknown logical label {:?}", fields[1]),
            })?;
        entries[(row, col)] =
            Complex64::new(parse_f64(fields[2], FORMAT)?, parse_f64(fields[3], FORMAT)?);
        seen += 1;
    }
    if seen != 16 {
        return Err(Error::Parse {
            format: FORMAT,
            message: format!("expected 16 entries, got {seen}"),
        });
    }
    Ok(LogicalOperator::from_entries(entries))
}

// -------------------------------------------------------------- trajectory

const TRAJECTORY_HEADER: &str = "time\tstate\tre\tim";

/// Tab-separated trajectory: one row per (checkpoint, basis state).
pub fn trajectory_table(trajectory: &Trajectory) -> String {
    let mut out = format!("{VERSION_LINE}\n{TRAJECTORY_HEADER}\n");
    for (time, state) in trajectory.checkpoints() {
        let basis = state.basis();
        for (k, label) in basis.states().iter().enumerate() {
            let z = state.amplitudes()[k];
            let _ = writeln!(
                out,
                "{}\t{label}\t{}\t{}",
                fmt_f64(*time),
                fmt_f64(z.re),
                fmt_f64(z.im)
            );
        }
    }
    out
}

/// Parsed trajectory rows: `(time, state label, amplitude)`.
pub fn parse_trajectory(text: &str) -> Result<Vec<(f64, String, Complex64)>> {
    const FORMAT: &str = "trajectory";
    let mut lines = text.lines();
    check_header(&mut lines, TRAJECTORY_HEADER, FORMAT)?;
    let mut rows = Vec::new();
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 4 {
            return Err(Error::Parse {
                format: FORMAT,
                message: format!("expected 4 fields, got {line:?}"),
            });
        }
        rows.push((
            parse_f64(fields[0], FORMAT)?,
            fields[1].to_string(),
            Complex64::new(parse_f64(fields[2], FORMAT)?, parse_f64(fields[3], FORMAT)?),
        ));
    }
    Ok(rows)
}

// ---------------------------------------------------------------- timeline

const TIMELINE_HEADER: &str = "label,pair,duration,descriptor";

/// One parsed timeline row.
#[derive(Clone, Debug, PartialEq)]
pub struct TimelineRow {
    pub label: SegmentLabel,
    pub pair: Option<String>,
    pub duration: f64,
    pub descriptor: String,
}

/// Line-oriented schedule timeline: `label,pair-or-dash,duration,descriptor`.
pub fn timeline_text(segments: &[Segment]) -> String {
    let mut out = format!("{VERSION_LINE}\n{TIMELINE_HEADER}\n");
    for segment in segments {
        let pair = segment
            .pair
            .map(|(i, j)| format!("{}-{}", cavity_name(i), cavity_name(j)))
            .unwrap_or_else(|| "-".to_string());
        let _ = writeln!(
            out,
            "{},{pair},{},{}",
            segment.label,
            fmt_f64(segment.duration()),
            segment.descriptor
        );
    }
    out
}

pub fn parse_timeline(text: &str) -> Result<Vec<TimelineRow>> {
    const FORMAT: &str = "timeline";
    let mut lines = text.lines();
    check_header(&mut lines, TIMELINE_HEADER, FORMAT)?;
    let mut rows = Vec::new();
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.splitn(4, ',').collect();
        if fields.len() != 4 {
            return Err(Error::Parse {
                format: FORMAT,
                message: format!("expected 4 fields, got {line:?}"),
            });
        }
        let label = SegmentLabel::parse(fields[0]).ok_or_else(|| Error::Parse {
            format: FORMAT,
            message: format!("unknown segment label {:?}", fields[0]),
        })?;
        rows.push(TimelineRow {
            label,
            pair: (fields[1] != "-").then(|| fields[1].to_string()),
            duration: parse_f64(fields[2], FORMAT)?,
            descriptor: fields[3].to_string(),
        });
    }
    Ok(rows)
}

// ------------------------------------------------------------------- sweep

const SWEEP_HEADER: &str = "index,n1,n2,nu_over_g,jitter_sigma,g_during_jump,seed,\
residual_tau1,avg_gate_fidelity,leakage,phase_00,phase_01,phase_10,phase_11,global_phase";

/// CSV sweep table, one row per grid point.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = format!("{VERSION_LINE}\n{SWEEP_HEADER}\n");
    for row in rows {
        let p = row.report.phase_profile;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            row.index,
            row.n1,
            row.n2,
            fmt_f64(row.nu_over_g),
            fmt_f64(row.jitter_sigma),
            row.g_during_jump,
            row.seed,
            fmt_f64(row.residual),
            fmt_f64(row.report.avg_gate_fidelity),
            fmt_f64(row.report.leakage),
            fmt_f64(p[0]),
            fmt_f64(p[1]),
            fmt_f64(p[2]),
            fmt_f64(p[3]),
            fmt_f64(row.report.global_phase),
        );
    }
    out
}

/// Parsed sweep rows as `(index, named fields)` in column order.
pub fn parse_sweep(text: &str) -> Result<Vec<Vec<String>>> {
    const FORMAT: &str = "sweep";
    let mut lines = text.lines();
    check_header(&mut lines, SWEEP_HEADER, FORMAT)?;
    let columns = SWEEP_HEADER.split(',').count();
    let mut rows = Vec::new();
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<String> = line.split(',').map(str::to_string).collect();
        if fields.len() != columns {
            return Err(Error::Parse {
                format: FORMAT,
                message: format!("expected {columns} fields, got {line:?}"),
            });
        }
        // numeric columns must parse
        for k in [3usize, 4, 7, 8, 9, 10, 11, 12, 13, 14] {
            parse_f64(&fields[k], FORMAT)?;
        }
        rows.push(fields);
    }
    Ok(rows)
}

// ------------------------------------------------------------------- misc

/// Debug dump of a sector basis, one occupation tuple per line.
pub fn basis_dump(basis: &SectorBasis) -> String {
    format!(
        "{VERSION_LINE}\n# sector: {}\n{}",
        basis.descriptor(),
        basis.dump()
    )
}

pub fn write_text(path: &Path, content: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    fs::write(path, content)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{gate_fidelity, target_cocsign, FidelityReport};
    use crate::schedule::{build_cocsign_schedule, GateTimings, ScheduleOptions};

    #[test]
    fn logical_operator_round_trips() {
        let m = target_cocsign().scale(Complex64::new(0.3, -0.7));
        let text = logical_operator_csv(&m);
        let back = parse_logical_operator(&text).unwrap();
        assert_eq!(back.entries(), m.entries());
    }

    #[test]
    fn timeline_round_trips() {
        let basis = SectorBasis::gate_sector(2);
        let timings = GateTimings::natural(4, 6, 100.0).unwrap();
        let schedule =
            build_cocsign_schedule(&basis, &timings, &ScheduleOptions::physical(true)).unwrap();
        let text = timeline_text(&schedule);
        let rows = parse_timeline(&text).unwrap();
        assert_eq!(rows.len(), schedule.len());
        for (row, segment) in rows.iter().zip(&schedule) {
            assert_eq!(row.label, segment.label);
            assert_eq!(row.duration, segment.duration());
            assert_eq!(row.descriptor, segment.descriptor);
        }
        assert_eq!(rows[0].pair.as_deref(), Some("aux-x"));
    }

    #[test]
    fn trajectory_round_trips() {
        let basis = SectorBasis::gate_sector(2);
        let timings = GateTimings::natural(4, 6, 100.0).unwrap();
        let schedule = build_cocsign_schedule(&basis, &timings, &ScheduleOptions::ideal()).unwrap();
        let psi = crate::hilbert::logical_input(&basis, 1, 0).unwrap();
        let (_, trajectory) = crate::propagate::evolve(&psi, &schedule).unwrap();
        let text = trajectory_table(&trajectory);
        let rows = parse_trajectory(&text).unwrap();
        assert_eq!(rows.len(), trajectory.checkpoints().len() * basis.size());
        // exact float round-trip
        let (t, label, amp) = &rows[basis.size()];
        assert_eq!(*t, trajectory.checkpoints()[1].0);
        assert_eq!(label, &basis.state(0).to_string());
        assert_eq!(*amp, trajectory.checkpoints()[1].1.amplitudes()[0]);
    }

    #[test]
    fn sweep_round_trips() {
        let report: FidelityReport = gate_fidelity(&target_cocsign(), &target_cocsign());
        let rows = vec![SweepRow {
            index: 0,
            n1: 4,
            n2: 6,
            nu_over_g: 100.0,
            jitter_sigma: 0.0,
            g_during_jump: true,
            seed: 1,
            residual: 0.0147,
            report,
        }];
        let text = sweep_csv(&rows);
        let parsed = parse_sweep(&text).unwrap();
        assert_eq!(parsed.len(), 1);
        assert_eq!(parsed[0][1], "4");
        assert_eq!(parsed[0][8].parse::<f64>().unwrap(), 1.0);
    }

    #[test]
    fn malformed_inputs_are_rejected() {
        assert!(matches!(
            parse_logical_operator("garbage"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_timeline(&format!("{VERSION_LINE}\nwrong,header\n")),
            Err(Error::Parse { .. })
        ));
    }
}
