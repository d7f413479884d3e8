//! A full gate run with idealized jumps and the smallest good timing pair
//! (n1, n2) = (4, 6): prints the extracted logical operator, its distance
//! to the sign-flip target, and the fidelity scorecard.

use cocsign::analysis::{simulate_cocsign, target_cocsign, GateRun, LOGICAL_LABELS};
use cocsign::schedule::GateTimings;
use num_complex::Complex64;

fn main() {
    let timings = GateTimings::natural(4, 6, 100.0).unwrap();
    let outcome = simulate_cocsign(&GateRun::ideal(timings)).unwrap();

    println!("timing residual: {:.6e} tau1", timings.residual_in_tau1());
    println!("logical operator (rows/cols 00, 01, 10, 11):");
    for r in 0..4 {
        let row: Vec<String> = (0..4)
            .map(|c| {
                let z = outcome.logical.entries()[(r, c)];
                format!("{:+.5}{:+.5}i", z.re, z.im)
            })
            .collect();
        println!("  [{}]", row.join(", "));
    }

    let target = target_cocsign().scale(Complex64::new(-1.0, 0.0));
    println!(
        "max |M - (-1) * diag(1,-1,1,1)| = {:.3e}",
        outcome.logical.max_abs_diff(&target)
    );
    println!(
        "avg gate fidelity = {:.12}",
        outcome.report.avg_gate_fidelity
    );
    println!("leakage           = {:.12e}", outcome.report.leakage);
    println!("global phase      = {:+.6}", outcome.report.global_phase);
    for (label, phase) in LOGICAL_LABELS.iter().zip(outcome.report.phase_profile) {
        println!("phase |{label}>        = {phase:+.6}");
    }
}
