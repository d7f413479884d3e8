//! Gaussian timing noise on the wait intervals: mean fidelity over many
//! seeds versus the noiseless run. Runs are reproducible per seed.

use cocsign::analysis::{simulate_cocsign, GateRun};
use cocsign::schedule::{GateTimings, JitterModel};

fn main() {
    let timings = GateTimings::natural(4, 6, 100.0).unwrap();
    let noiseless = simulate_cocsign(&GateRun::ideal(timings))
        .unwrap()
        .report
        .avg_gate_fidelity;
    println!("sigma/tau1   mean fidelity over 100 seeds");
    println!("0            {noiseless:.9} (noiseless)");

    for sigma in [0.002, 0.005, 0.01, 0.02] {
        let mut total = 0.0;
        let seeds = 100u32;
        for seed in 0..seeds {
            let run = GateRun {
                jitter: Some(JitterModel::new(sigma, u64::from(seed)).unwrap()),
                ..GateRun::ideal(timings)
            };
            total += simulate_cocsign(&run).unwrap().report.avg_gate_fidelity;
        }
        println!("{sigma:<12} {:.9}", total / f64::from(seeds));
    }
}
