//! Finite transfer windows: when the atom-field coupling stays on during a
//! hop window of length pi/(2 nu), the gate degrades by O(g/nu). Driving
//! the hop harder recovers the idealized limit.

use cocsign::analysis::{simulate_cocsign, GateRun};
use cocsign::schedule::{GateTimings, ScheduleOptions};

fn main() {
    let ideal =
        simulate_cocsign(&GateRun::ideal(GateTimings::natural(4, 6, 100.0).unwrap())).unwrap();
    println!(
        "ideal jumps:            infidelity {:.6e}",
        1.0 - ideal.report.avg_gate_fidelity
    );

    // waits measured between jump windows (default): the extra exchange
    // evolution during the windows happens to cancel part of the negative
    // (4, 6) timing residual, so moderate nu/g can even beat the ideal run
    println!("waits exclusive of jump windows:");
    for nu_over_g in [1e2, 1e3, 1e4] {
        let timings = GateTimings::natural(4, 6, nu_over_g).unwrap();
        let run = GateRun {
            options: ScheduleOptions::physical(true),
            ..GateRun::ideal(timings)
        };
        let outcome = simulate_cocsign(&run).unwrap();
        println!(
            "  nu/g = {nu_over_g:>7.0}: infidelity {:.6e}  leakage {:.3e}",
            1.0 - outcome.report.avg_gate_fidelity,
            outcome.report.leakage
        );
    }

    // compensated waits pin the total elapsed time to the idealized
    // schedule, so the window error adds cleanly and dies off with nu/g
    println!("waits compensated by the window length:");
    for nu_over_g in [1e2, 1e3, 1e4] {
        let timings = GateTimings::natural(4, 6, nu_over_g).unwrap();
        let run = GateRun {
            options: ScheduleOptions {
                compensate_wait: true,
                ..ScheduleOptions::physical(true)
            },
            ..GateRun::ideal(timings)
        };
        let outcome = simulate_cocsign(&run).unwrap();
        println!(
            "  nu/g = {nu_over_g:>7.0}: infidelity {:.6e}  leakage {:.3e}",
            1.0 - outcome.report.avg_gate_fidelity,
            outcome.report.leakage
        );
    }

    // switching the coupling off during the window removes the extra error
    let timings = GateTimings::natural(4, 6, 100.0).unwrap();
    let run = GateRun {
        options: ScheduleOptions::physical(false),
        ..GateRun::ideal(timings)
    };
    let outcome = simulate_cocsign(&run).unwrap();
    println!(
        "physical, g off in jumps: infidelity {:.6e}",
        1.0 - outcome.report.avg_gate_fidelity
    );
}
