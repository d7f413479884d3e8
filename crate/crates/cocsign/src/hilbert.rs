//! Occupation-number bases for a register of optical cavities.
//!
//! Each cavity holds up to `n_max` photons and a single two-level atom.
//! Every Hamiltonian in this crate conserves the total excitation number
//! (photons plus excited atoms), so states are enumerated within one
//! fixed-excitation sector of the truncated product space and never leave
//! it. All types here are immutable values after construction.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use nalgebra::DVector;
use num_complex::Complex64;

use crate::{Error, Result};

/// Cavity holding the first logical qubit.
pub const CAVITY_X: usize = 0;
/// Cavity holding the second logical qubit.
pub const CAVITY_Y: usize = 1;
/// Auxiliary cavity (empty at the start of the gate; parks photons mid-way).
pub const CAVITY_AUX: usize = 2;
/// Register size used by the gate: the two logical cavities plus aux.
pub const GATE_CAVITIES: usize = 3;

/// Printable name of a cavity index, `x`/`y`/`aux` for the gate register.
pub fn cavity_name(i: usize) -> String {
    match i {
        CAVITY_X => "x".to_string(),
        CAVITY_Y => "y".to_string(),
        CAVITY_AUX => "aux".to_string(),
        other => other.to_string(),
    }
}

/// One occupation state of the register: per-cavity photon count plus the
/// atomic excitation bit, in the fixed cavity order (x, y, aux).
///
/// The derived `Ord` compares photon counts cavity-major and then atom bits,
/// which is the lexicographic order every [`SectorBasis`] is laid out in.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct BasisState {
    photons: Vec<u8>,
    atoms: Vec<u8>,
}

impl BasisState {
    pub fn new(photons: Vec<u8>, atoms: Vec<u8>) -> Self {
        assert_eq!(
            photons.len(),
            atoms.len(),
            "photon and atom occupations must cover the same cavities"
        );
        assert!(atoms.iter().all(|&m| m <= 1), "atomic occupation is a bit");
        Self { photons, atoms }
    }

    pub fn cavity_count(&self) -> usize {
        self.photons.len()
    }

    pub fn photons(&self, cavity: usize) -> u8 {
        self.photons[cavity]
    }

    pub fn atom(&self, cavity: usize) -> u8 {
        self.atoms[cavity]
    }

    /// Photons plus atomic excitation held in one cavity.
    pub fn excitation(&self, cavity: usize) -> u32 {
        u32::from(self.photons[cavity]) + u32::from(self.atoms[cavity])
    }

    pub fn total_excitation(&self) -> u32 {
        (0..self.cavity_count()).map(|i| self.excitation(i)).sum()
    }

    /// Copy with one cavity's occupation replaced.
    pub fn with_cavity(&self, cavity: usize, photons: u8, atom: u8) -> Self {
        assert!(atom <= 1);
        let mut next = self.clone();
        next.photons[cavity] = photons;
        next.atoms[cavity] = atom;
        next
    }
}

impl fmt::Display for BasisState {
    /// Compact label `|photons;atoms>`, cavity-major, e.g. `|100;010>`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|")?;
        for n in &self.photons {
            write!(f, "{n}")?;
        }
        write!(f, ";")?;
        for m in &self.atoms {
            write!(f, "{m}")?;
        }
        write!(f, ">")
    }
}

/// All occupation states with a given total excitation number, in a fixed
/// deterministic order, together with the inverse index map.
#[derive(Debug)]
pub struct SectorBasis {
    cavity_count: usize,
    n_max: u8,
    total_excitation: u32,
    states: Vec<BasisState>,
    index: HashMap<BasisState, usize>,
}

impl SectorBasis {
    /// Enumerate the sector with exactly `total_excitation` excitations.
    ///
    /// The empty sector is a valid result (e.g. an excitation count that the
    /// cutoff cannot accommodate).
    pub fn enumerate(cavity_count: usize, n_max: u8, total_excitation: u32) -> Self {
        assert!(cavity_count >= 1, "need at least one cavity");
        let mut states = Vec::new();
        let mut photons = vec![0u8; cavity_count];
        let mut atoms = vec![0u8; cavity_count];
        collect_states(
            0,
            total_excitation,
            n_max,
            &mut photons,
            &mut atoms,
            &mut states,
        );
        states.sort();
        let index = states
            .iter()
            .enumerate()
            .map(|(k, s)| (s.clone(), k))
            .collect();
        Self {
            cavity_count,
            n_max,
            total_excitation,
            states,
            index,
        }
    }

    /// The three-cavity, two-excitation sector the gate acts in.
    pub fn gate_sector(n_max: u8) -> Arc<Self> {
        Arc::new(Self::enumerate(GATE_CAVITIES, n_max, 2))
    }

    pub fn cavity_count(&self) -> usize {
        self.cavity_count
    }

    pub fn n_max(&self) -> u8 {
        self.n_max
    }

    pub fn total_excitation(&self) -> u32 {
        self.total_excitation
    }

    pub fn size(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[BasisState] {
        &self.states
    }

    pub fn state(&self, k: usize) -> &BasisState {
        &self.states[k]
    }

    pub fn index_of(&self, state: &BasisState) -> Option<usize> {
        self.index.get(state).copied()
    }

    /// Two bases describe the same sector iff all three defining numbers
    /// agree; the state lists are then identical by construction.
    pub fn same_sector(&self, other: &SectorBasis) -> bool {
        self.cavity_count == other.cavity_count
            && self.n_max == other.n_max
            && self.total_excitation == other.total_excitation
    }

    /// Short descriptor used in error messages and file headers.
    pub fn descriptor(&self) -> String {
        format!(
            "{} cavities, n_max={}, N={}",
            self.cavity_count, self.n_max, self.total_excitation
        )
    }

    /// Debug dump, one occupation tuple per line: `index<TAB>|photons;atoms>`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (k, s) in self.states.iter().enumerate() {
            out.push_str(&format!("{k}\t{s}\n"));
        }
        out
    }
}

fn collect_states(
    cavity: usize,
    remaining: u32,
    n_max: u8,
    photons: &mut Vec<u8>,
    atoms: &mut Vec<u8>,
    out: &mut Vec<BasisState>,
) {
    if cavity == photons.len() {
        if remaining == 0 {
            out.push(BasisState::new(photons.clone(), atoms.clone()));
        }
        return;
    }
    for n in 0..=n_max {
        for m in 0..=1u8 {
            let e = u32::from(n) + u32::from(m);
            if e <= remaining {
                photons[cavity] = n;
                atoms[cavity] = m;
                collect_states(cavity + 1, remaining - e, n_max, photons, atoms, out);
            }
        }
    }
    photons[cavity] = 0;
    atoms[cavity] = 0;
}

/// Occupation state encoding the logical input `|qx,qy>`.
///
/// Logical `|0>` stores its excitation in the atom (`photons=0, atom=1`),
/// logical `|1>` in the field (`photons=1, atom=0`); the auxiliary cavity
/// starts with no energy at all, so the total excitation is always 2.
pub fn encode_logical(qx: u8, qy: u8) -> BasisState {
    assert!(qx <= 1 && qy <= 1, "logical inputs are bits");
    BasisState::new(vec![qx, qy, 0], vec![1 - qx, 1 - qy, 0])
}

/// A normalized pure state over one sector basis.
#[derive(Clone, Debug)]
pub struct StateVector {
    basis: Arc<SectorBasis>,
    amplitudes: DVector<Complex64>,
}

impl StateVector {
    /// The delta vector sitting on a single basis state.
    pub fn basis_state(basis: &Arc<SectorBasis>, state: &BasisState) -> Result<Self> {
        let k = basis
            .index_of(state)
            .ok_or_else(|| Error::StateOutsideSector {
                state: state.to_string(),
                sector: basis.descriptor(),
            })?;
        let mut amplitudes = DVector::zeros(basis.size());
        amplitudes[k] = Complex64::new(1.0, 0.0);
        Ok(Self {
            basis: Arc::clone(basis),
            amplitudes,
        })
    }

    /// Build from raw amplitudes (length must match the sector size).
    pub fn from_amplitudes(
        basis: &Arc<SectorBasis>,
        amplitudes: DVector<Complex64>,
    ) -> Result<Self> {
        if amplitudes.len() != basis.size() {
            return Err(Error::SectorMismatch {
                left: format!("amplitude vector of length {}", amplitudes.len()),
                right: basis.descriptor(),
            });
        }
        Ok(Self {
            basis: Arc::clone(basis),
            amplitudes,
        })
    }

    pub fn basis(&self) -> &Arc<SectorBasis> {
        &self.basis
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    /// Amplitude carried by one basis state; errors if the state lies
    /// outside the vector's sector.
    pub fn amplitude(&self, state: &BasisState) -> Result<Complex64> {
        let k = self
            .basis
            .index_of(state)
            .ok_or_else(|| Error::StateOutsideSector {
                state: state.to_string(),
                sector: self.basis.descriptor(),
            })?;
        Ok(self.amplitudes[k])
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// `<self|other>`, errors on sector mismatch.
    pub fn overlap(&self, other: &StateVector) -> Result<Complex64> {
        if !self.basis.same_sector(&other.basis) {
            return Err(Error::SectorMismatch {
                left: self.basis.descriptor(),
                right: other.basis.descriptor(),
            });
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// Max-norm distance to another vector on the same sector.
    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        assert!(self.basis.same_sector(&other.basis));
        (&self.amplitudes - &other.amplitudes)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

/// The state vector for a logical two-qubit input on a gate sector.
pub fn logical_input(basis: &Arc<SectorBasis>, qx: u8, qy: u8) -> Result<StateVector> {
    StateVector::basis_state(basis, &encode_logical(qx, qy))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent sector count: walk every product state and filter.
    fn brute_force_states(cavity_count: usize, n_max: u8, total: u32) -> Vec<BasisState> {
        let per_cavity: Vec<(u8, u8)> = (0..=n_max)
            .flat_map(|n| (0..=1u8).map(move |m| (n, m)))
            .collect();
        let mut found = Vec::new();
        let mut stack = vec![(Vec::<(u8, u8)>::new(),)];
        while let Some((prefix,)) = stack.pop() {
            if prefix.len() == cavity_count {
                let sum: u32 = prefix
                    .iter()
                    .map(|&(n, m)| u32::from(n) + u32::from(m))
                    .sum();
                if sum == total {
                    found.push(BasisState::new(
                        prefix.iter().map(|&(n, _)| n).collect(),
                        prefix.iter().map(|&(_, m)| m).collect(),
                    ));
                }
                continue;
            }
            for &occ in &per_cavity {
                let mut next = prefix.clone();
                next.push(occ);
                stack.push((next,));
            }
        }
        found.sort();
        found
    }

    #[test]
    fn single_cavity_single_excitation() {
        let basis = SectorBasis::enumerate(1, 2, 1);
        assert_eq!(basis.size(), 2);
        // lexicographic: photon-less state first
        assert_eq!(basis.state(0), &BasisState::new(vec![0], vec![1]));
        assert_eq!(basis.state(1), &BasisState::new(vec![1], vec![0]));
    }

    #[test]
    fn single_cavity_vacuum() {
        let basis = SectorBasis::enumerate(1, 2, 0);
        assert_eq!(basis.size(), 1);
        assert_eq!(basis.state(0).total_excitation(), 0);
    }

    #[test]
    fn gate_sector_has_18_states() {
        let basis = SectorBasis::enumerate(3, 2, 2);
        assert_eq!(basis.size(), 18);
        assert_eq!(basis.states(), &brute_force_states(3, 2, 2)[..]);
    }

    #[test]
    fn sector_sizes_match_brute_force() {
        for cavities in 1..=3 {
            for n_max in 0..=2 {
                for total in 0..=3 {
                    let basis = SectorBasis::enumerate(cavities, n_max, total);
                    let brute = brute_force_states(cavities, n_max, total);
                    assert_eq!(
                        basis.size(),
                        brute.len(),
                        "sector ({cavities}, {n_max}, {total})"
                    );
                    assert_eq!(basis.states(), &brute[..]);
                }
            }
        }
    }

    #[test]
    fn index_is_a_bijection() {
        let basis = SectorBasis::enumerate(3, 2, 2);
        for (k, s) in basis.states().iter().enumerate() {
            assert_eq!(basis.index_of(s), Some(k));
        }
    }

    #[test]
    fn empty_sector_is_valid() {
        // one cavity cannot hold three excitations at n_max = 1
        let basis = SectorBasis::enumerate(1, 1, 3);
        assert!(basis.is_empty());
    }

    #[test]
    fn logical_encodings() {
        let s01 = encode_logical(0, 1);
        assert_eq!(s01, BasisState::new(vec![0, 1, 0], vec![1, 0, 0]));
        let s00 = encode_logical(0, 0);
        assert_eq!(s00, BasisState::new(vec![0, 0, 0], vec![1, 1, 0]));
        let s11 = encode_logical(1, 1);
        assert_eq!(s11, BasisState::new(vec![1, 1, 0], vec![0, 0, 0]));
    }

    #[test]
    fn logical_encodings_are_orthogonal_sector_states() {
        let basis = SectorBasis::gate_sector(2);
        let all: Vec<BasisState> = [(0, 0), (0, 1), (1, 0), (1, 1)]
            .iter()
            .map(|&(x, y)| encode_logical(x, y))
            .collect();
        for (a, sa) in all.iter().enumerate() {
            assert_eq!(sa.total_excitation(), 2);
            assert!(basis.index_of(sa).is_some());
            for (b, sb) in all.iter().enumerate() {
                assert_eq!(a == b, sa == sb);
            }
        }
    }

    #[test]
    fn amplitude_queries() {
        let basis = SectorBasis::gate_sector(2);
        let psi = logical_input(&basis, 0, 0).unwrap();
        assert_eq!(
            psi.amplitude(&encode_logical(0, 0)).unwrap(),
            Complex64::new(1.0, 0.0)
        );
        assert_eq!(
            psi.amplitude(&encode_logical(1, 1)).unwrap(),
            Complex64::new(0.0, 0.0)
        );
        // a state from a different sector is rejected
        let outside = BasisState::new(vec![0, 0, 0], vec![0, 0, 0]);
        assert!(matches!(
            psi.amplitude(&outside),
            Err(crate::Error::StateOutsideSector { .. })
        ));
    }

    #[test]
    fn equal_superposition_amplitude() {
        let basis = SectorBasis::gate_sector(2);
        let a = encode_logical(0, 0);
        let b = encode_logical(1, 1);
        let mut amplitudes = DVector::zeros(basis.size());
        let r = Complex64::new(1.0 / 2f64.sqrt(), 0.0);
        amplitudes[basis.index_of(&a).unwrap()] = r;
        amplitudes[basis.index_of(&b).unwrap()] = r;
        let psi = StateVector::from_amplitudes(&basis, amplitudes).unwrap();
        assert!((psi.amplitude(&a).unwrap() - r).norm() < 1e-15);
        assert!((psi.amplitude(&b).unwrap() - r).norm() < 1e-15);
        assert!((psi.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn display_labels() {
        let s = BasisState::new(vec![2, 0, 0], vec![0, 1, 0]);
        assert_eq!(s.to_string(), "|200;010>");
    }
}
