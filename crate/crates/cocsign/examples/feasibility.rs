//! Bounds on the photon-transfer window for physical numbers: the
//! energy-time uncertainty relation forbids windows shorter than
//! 1/delta_omega, and a clean transfer needs the window far below the Rabi
//! period, leaving 1e-9 s <= delta_tau << 1e-6 s for a microwave-domain
//! cavity and a single-shot timing error floor of 1e-3.

use cocsign::analysis::feasibility;

fn main() {
    let omega = 1e10; // 1/s
    let delta_omega = 1e9; // 1/s
    let tau1 = 1e-6; // s

    println!("omega = {omega:.1e}/s, delta_omega = {delta_omega:.1e}/s, tau1 = {tau1:.1e}s");
    println!("delta_tau     window_ok   error floor   rwa_ok");
    for delta_tau in [1e-10, 1e-9, 1e-8, 1e-7] {
        let report = feasibility(omega, delta_omega, tau1, delta_tau);
        println!(
            "{delta_tau:.1e}s      {:<11} {:.3e}     {}",
            report.window_ok, report.single_shot_error_floor, report.rwa_ok
        );
    }
}
