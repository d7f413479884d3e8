//! Batch front end: runs experiments from validated configs and writes the
//! documented result files. The `cocsign` binary is a thin wrapper over the
//! functions here.

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::analysis::{
    feasibility, simulate_cocsign, sweep_parallel, FeasibilityReport, GateRun, LOGICAL_LABELS,
};
use crate::config::{ResolvedRun, RunConfig, SweepConfig, FORMAT_VERSION};
use crate::oracle::trace_cocsign;
use crate::output::{
    basis_dump, logical_operator_csv, sweep_csv, timeline_text, trajectory_table, write_text,
};
use crate::schedule::{convergent_timings, search_timings, total_duration};
use crate::Result;

/// Machine-readable summary of a `simulate` run.
#[derive(Debug, Serialize)]
pub struct RunSummary {
    pub format_version: u32,
    pub mode: &'static str,
    pub n1: u32,
    pub n2: u32,
    pub g: f64,
    pub nu: f64,
    pub n_max: u8,
    pub jitter_sigma: f64,
    pub residual_tau1: f64,
    pub total_duration_tau1: f64,
    pub avg_gate_fidelity: f64,
    pub leakage: f64,
    pub phase_profile: [f64; 4],
    pub global_phase: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau1_seconds: Option<f64>,
}

impl RunSummary {
    /// The one-line form printed after a run.
    pub fn one_line(&self) -> String {
        format!(
            "fidelity={:.6} leakage={:.3e} residual={:.4e}*tau1 (n1={}, n2={}, mode={})",
            self.avg_gate_fidelity, self.leakage, self.residual_tau1, self.n1, self.n2, self.mode
        )
    }
}

/// Files written by a `simulate` run.
#[derive(Debug)]
pub struct SimulateOutput {
    pub summary: RunSummary,
    pub files: Vec<PathBuf>,
}

/// Run the gate from a validated config and write the result files:
/// `summary.json`, `logical_operator.csv`, `schedule.timeline`,
/// `basis.txt`, and one `trajectory_<q>.tsv` per logical input.
pub fn run_simulate(config: &RunConfig) -> Result<SimulateOutput> {
    let resolved: ResolvedRun = config.resolve()?;
    let run = GateRun {
        timings: resolved.timings,
        n_max: resolved.n_max,
        options: resolved.options,
        jitter: resolved.jitter,
    };
    let outcome = simulate_cocsign(&run)?;

    let tau1 = resolved.timings.tau1();
    let summary = RunSummary {
        format_version: FORMAT_VERSION,
        mode: resolved.options.mode.as_str(),
        n1: resolved.timings.n1(),
        n2: resolved.timings.n2(),
        g: resolved.timings.g(),
        nu: resolved.timings.nu(),
        n_max: resolved.n_max,
        jitter_sigma: resolved.jitter.map_or(0.0, |j| j.sigma),
        residual_tau1: resolved.timings.residual_in_tau1(),
        total_duration_tau1: total_duration(&outcome.schedule) / tau1,
        avg_gate_fidelity: outcome.report.avg_gate_fidelity,
        leakage: outcome.report.leakage,
        phase_profile: outcome.report.phase_profile,
        global_phase: outcome.report.global_phase,
        tau1_seconds: resolved.tau1_seconds,
    };

    let dir = &resolved.output_dir;
    let mut files = Vec::new();
    let emit = |name: &str, content: String| -> Result<PathBuf> {
        let path = dir.join(name);
        write_text(&path, &content)?;
        Ok(path)
    };

    files.push(emit("summary.json", to_json(&summary)?)?);
    files.push(emit(
        "logical_operator.csv",
        logical_operator_csv(&outcome.logical),
    )?);
    files.push(emit("schedule.timeline", timeline_text(&outcome.schedule))?);
    files.push(emit("basis.txt", basis_dump(&outcome.basis))?);
    for (label, trajectory) in LOGICAL_LABELS.iter().zip(&outcome.trajectories) {
        files.push(emit(
            &format!("trajectory_{label}.tsv"),
            trajectory_table(trajectory),
        )?);
    }

    Ok(SimulateOutput { summary, files })
}

/// The four symbolic traces as printable tables, ending with the summary of
/// recovered states and phases.
pub fn run_oracle() -> Result<String> {
    let mut out = String::new();
    let mut summaries = Vec::new();
    for (qx, qy) in [(0u8, 0u8), (0, 1), (1, 0), (1, 1)] {
        let trace = trace_cocsign(qx, qy)?;
        out.push_str(&trace.table());
        out.push('\n');
        summaries.push(trace);
    }
    out.push_str("summary (common phase addition pi, sign flip on |01>):\n");
    for trace in &summaries {
        let relative = if trace.total_quarters % 4 == 0 {
            "-pi"
        } else {
            "0"
        };
        out.push_str(&format!(
            "  |{}{}> -> |{}{}>  amplitude {}  relative phase {}\n",
            trace.input.0,
            trace.input.1,
            trace.output.0,
            trace.output.1,
            if trace.total_quarters % 4 == 2 {
                "-1"
            } else {
                "+1"
            },
            relative,
        ));
    }
    Ok(out)
}

/// Ranked timing table plus the continued-fraction candidates.
pub fn run_search(bound: u32, top: usize) -> Result<String> {
    if bound < 1 {
        return Err(crate::Error::Config(
            "search bound must be at least 1".to_string(),
        ));
    }
    let ranked = search_timings(bound);
    let mut out = format!("exhaustive scan, 1 <= n1, n2 <= {bound} (residuals in tau1 units):\n");
    out.push_str("rank  n1    n2    residual\n");
    for (k, candidate) in ranked.iter().take(top).enumerate() {
        out.push_str(&format!(
            "{:<5} {:<5} {:<5} {:.6e}\n",
            k + 1,
            candidate.n1,
            candidate.n2,
            candidate.residual
        ));
    }
    let convergents = convergent_timings(bound);
    out.push_str("\ncontinued-fraction route (sqrt(8) convergents with numerator = 1 mod 4):\n");
    if convergents.is_empty() {
        out.push_str("  none within the bound\n");
    }
    for candidate in &convergents {
        out.push_str(&format!(
            "  n1={:<5} n2={:<5} residual {:.6e}\n",
            candidate.n1, candidate.n2, candidate.residual
        ));
    }
    Ok(out)
}

/// Evaluate a sweep config and write `sweep.csv`; returns the path and the
/// number of rows.
pub fn run_sweep(config: &SweepConfig) -> Result<(PathBuf, usize)> {
    let grid = config.grid()?;
    let rows = sweep_parallel(&grid, config.workers)?;
    let path = config.output_dir.join("sweep.csv");
    write_text(&path, &sweep_csv(&rows))?;
    Ok((path, rows.len()))
}

/// Inputs of a `feasibility` evaluation, echoed into the report file.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct FeasibilityInputs {
    pub omega: f64,
    pub delta_omega: f64,
    pub tau1: f64,
    pub delta_tau: f64,
}

#[derive(Debug, Serialize)]
pub struct FeasibilityFile {
    pub format_version: u32,
    pub inputs: FeasibilityInputs,
    #[serde(flatten)]
    pub report: FeasibilityReport,
}

/// Evaluate the transfer-window arithmetic; optionally write it as JSON.
pub fn run_feasibility(
    inputs: FeasibilityInputs,
    output: Option<&Path>,
) -> Result<FeasibilityFile> {
    let report = feasibility(
        inputs.omega,
        inputs.delta_omega,
        inputs.tau1,
        inputs.delta_tau,
    );
    let file = FeasibilityFile {
        format_version: FORMAT_VERSION,
        inputs,
        report,
    };
    if let Some(path) = output {
        write_text(path, &to_json(&file)?)?;
    }
    Ok(file)
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| crate::Error::Config(format!("serialization: {e}")))
}
