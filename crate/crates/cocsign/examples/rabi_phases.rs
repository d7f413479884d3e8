//! Phase identities of a single Jaynes-Cummings cavity: with one excitation
//! the propagator at half a Rabi period is -i sigma_x, at a full period -I,
//! at two periods +I; with two excitations the same pattern runs on the
//! shorter period tau2 = tau1/sqrt(2).

use std::f64::consts::PI;
use std::sync::Arc;

use cocsign::hilbert::SectorBasis;
use cocsign::jch::build_jc_interaction;
use cocsign::propagate::propagator;

fn main() {
    let tau1 = PI; // natural units, g = 1
    let tau2 = PI / 2f64.sqrt();

    let single = Arc::new(SectorBasis::enumerate(1, 2, 1));
    let h1 = build_jc_interaction(&single, &[1.0]);
    println!("single excitation, basis {{|0;1>, |1;0>}}:");
    for (name, t) in [
        ("tau1/2", tau1 / 2.0),
        ("tau1  ", tau1),
        ("2 tau1", 2.0 * tau1),
    ] {
        let u = propagator(&h1, t).unwrap();
        println!("U({name}) =\n{:.4}", u.entries());
    }

    let double = Arc::new(SectorBasis::enumerate(1, 2, 2));
    let h2 = build_jc_interaction(&double, &[1.0]);
    println!("double excitation, basis {{|1;1>, |2;0>}}:");
    for (name, t) in [("tau2  ", tau2), ("2 tau2", 2.0 * tau2)] {
        let u = propagator(&h2, t).unwrap();
        println!("U({name}) =\n{:.4}", u.entries());
    }
}
