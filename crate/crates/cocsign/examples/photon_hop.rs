//! Moving a photon between two cavities: a hop window of length
//! pi/(2 nu) transfers it with amplitude -i, exactly like half a Rabi
//! oscillation; the idealized zero-duration jump does the same.

use std::f64::consts::PI;
use std::sync::Arc;

use cocsign::hilbert::{BasisState, SectorBasis, StateVector};
use cocsign::jch::build_hop;
use cocsign::propagate::{evolve, ideal_jump, Segment, SegmentLabel};

fn main() {
    let basis = Arc::new(SectorBasis::enumerate(2, 2, 1));
    let here = BasisState::new(vec![1, 0], vec![0, 0]);
    let there = BasisState::new(vec![0, 1], vec![0, 0]);
    let psi = StateVector::basis_state(&basis, &here).unwrap();

    let nu = 50.0;
    let window = Segment::evolve(
        SegmentLabel::Jump,
        Some((0, 1)),
        format!("hop(nu={nu})"),
        build_hop(&basis, (0, 1), nu),
        PI / (2.0 * nu),
    );
    let (out, _) = evolve(&psi, &[window]).unwrap();
    println!(
        "hop window, nu = {nu}: amplitude on {there} = {:.6}",
        out.amplitude(&there).unwrap()
    );

    let jump = ideal_jump(&basis, (0, 1));
    let out = jump.apply(&psi).unwrap();
    println!(
        "ideal jump:           amplitude on {there} = {:.6}",
        out.amplitude(&there).unwrap()
    );

    let back = jump.apply(&out).unwrap();
    println!(
        "ideal jump twice:     amplitude on {here} = {:.6} (a full hop period is -1)",
        back.amplitude(&here).unwrap()
    );
}
