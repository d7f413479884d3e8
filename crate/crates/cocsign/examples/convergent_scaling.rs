//! Gate infidelity against the commensuration residual across successive
//! timing candidates: halving the residual quarters the infidelity, i.e.
//! the log-log slope is 2.

use cocsign::analysis::{simulate_cocsign, GateRun};
use cocsign::schedule::GateTimings;

fn main() {
    let pairs = [(4u32, 6u32), (45, 64), (144, 204)];
    println!("n1    n2    residual/tau1   infidelity");
    let mut points = Vec::new();
    for (n1, n2) in pairs {
        let timings = GateTimings::natural(n1, n2, 100.0).unwrap();
        let outcome = simulate_cocsign(&GateRun::ideal(timings)).unwrap();
        let residual = timings.residual_in_tau1();
        let infidelity = 1.0 - outcome.report.avg_gate_fidelity;
        println!("{n1:<5} {n2:<5} {residual:.6e}    {infidelity:.6e}");
        points.push((residual.ln(), infidelity.ln()));
    }

    // least-squares slope of ln(1 - F) vs ln(residual)
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    println!("log-log slope = {slope:.4}");
}
