//! Hamiltonians of the Jaynes-Cummings-Hubbard model on a sector basis.
//!
//! Everything is built directly in the occupation basis from the ladder
//! matrix elements `<n+1|a+|n> = sqrt(n+1)`: the per-cavity exchange term
//! `g (a+ s + a s+)`, the photon hop `nu (a_i a_j+ + a_j a_i+)`, and the
//! free part `hbar w (a+a + s+s)`, which is proportional to the identity on
//! any fixed-excitation sector and therefore only contributes a global
//! phase. The builders conserve the total excitation number by
//! construction, so restricting them to a sector is exact.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::hilbert::{SectorBasis, StateVector};
use crate::{Error, Result};

/// Couplings and frequencies of the model.
///
/// The crate's internal convention is natural units `hbar = 1`, `g = 1`;
/// physical-unit inputs are converted once at the configuration boundary.
#[derive(Clone, Copy, Debug)]
pub struct PhysicalParams {
    /// Photon (and atom transition) angular frequency.
    pub omega: f64,
    /// Atom-field coupling strength (energy units).
    pub g: f64,
    /// Photon hop strength between coupled cavities (energy units).
    pub nu: f64,
    /// Reduced Planck constant; 1 in natural units.
    pub hbar: f64,
}

impl PhysicalParams {
    pub fn new(omega: f64, g: f64, nu: f64, hbar: f64) -> Result<Self> {
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !positive(g) || !positive(nu) || !positive(hbar) || !positive(omega) {
            return Err(Error::Config(format!(
                "physical parameters must be positive (omega={omega}, g={g}, nu={nu}, hbar={hbar})"
            )));
        }
        Ok(Self { omega, g, nu, hbar })
    }

    /// Natural-unit parameters: `hbar = 1` and a nominal `omega = 1`.
    pub fn natural(g: f64, nu: f64) -> Result<Self> {
        Self::new(1.0, g, nu, 1.0)
    }

    /// Rotating-wave approximation check for physical-unit inputs:
    /// the coupling must stay below `1e-3` of the photon energy.
    pub fn rwa_ok(&self) -> bool {
        self.g / (self.hbar * self.omega) <= 1e-3
    }
}

/// Geometry fixing the coupling through the mode function.
///
/// The cavity length is pinned to a whole number of half-waves,
/// `L = n * lambda / 2`, and the atom sits at `x` inside `[0, L]`.
#[derive(Clone, Copy, Debug)]
pub struct CavityGeometry {
    mode_volume: f64,
    dipole: f64,
    atom_position: f64,
    wavelength: f64,
    n_half_waves: u32,
}

impl CavityGeometry {
    pub fn new(
        mode_volume: f64,
        dipole: f64,
        atom_position: f64,
        wavelength: f64,
        n_half_waves: u32,
    ) -> Result<Self> {
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !positive(mode_volume) || !positive(wavelength) || n_half_waves == 0 {
            return Err(Error::Config(format!(
                "cavity geometry must have positive volume, wavelength and half-wave count \
                 (V={mode_volume}, lambda={wavelength}, n={n_half_waves})"
            )));
        }
        let length = f64::from(n_half_waves) * wavelength / 2.0;
        if !(0.0..=length).contains(&atom_position) {
            return Err(Error::PositionOutsideCavity {
                x: atom_position,
                length,
            });
        }
        Ok(Self {
            mode_volume,
            dipole,
            atom_position,
            wavelength,
            n_half_waves,
        })
    }

    pub fn length(&self) -> f64 {
        f64::from(self.n_half_waves) * self.wavelength / 2.0
    }

    pub fn mode_volume(&self) -> f64 {
        self.mode_volume
    }

    pub fn dipole(&self) -> f64 {
        self.dipole
    }

    pub fn atom_position(&self) -> f64 {
        self.atom_position
    }

    /// Standing-wave mode factor `sin(pi x / L)` at the atom's position.
    pub fn mode_factor(&self) -> f64 {
        (std::f64::consts::PI * self.atom_position / self.length()).sin()
    }
}

/// Atom-field coupling from geometry: `sqrt(hbar w / V) * d * sin(pi x / L)`.
pub fn coupling_from_geometry(params: &PhysicalParams, geom: &CavityGeometry) -> Result<f64> {
    let length = geom.length();
    if !(0.0..=length).contains(&geom.atom_position()) {
        return Err(Error::PositionOutsideCavity {
            x: geom.atom_position(),
            length,
        });
    }
    Ok((params.hbar * params.omega / geom.mode_volume()).sqrt()
        * geom.dipole()
        * geom.mode_factor())
}

/// A dense complex operator over one sector basis.
///
/// Hamiltonians built here are Hermitian to machine precision; propagators
/// derived from them are unitary to 1e-12.
#[derive(Clone, Debug)]
pub struct OperatorMatrix {
    basis: Arc<SectorBasis>,
    entries: DMatrix<Complex64>,
}

impl OperatorMatrix {
    pub fn zeros(basis: &Arc<SectorBasis>) -> Self {
        let n = basis.size();
        Self {
            basis: Arc::clone(basis),
            entries: DMatrix::zeros(n, n),
        }
    }

    pub fn identity(basis: &Arc<SectorBasis>) -> Self {
        let n = basis.size();
        Self {
            basis: Arc::clone(basis),
            entries: DMatrix::identity(n, n),
        }
    }

    pub fn from_entries(basis: &Arc<SectorBasis>, entries: DMatrix<Complex64>) -> Result<Self> {
        if entries.nrows() != basis.size() || entries.ncols() != basis.size() {
            return Err(Error::SectorMismatch {
                left: format!("{}x{} matrix", entries.nrows(), entries.ncols()),
                right: basis.descriptor(),
            });
        }
        Ok(Self {
            basis: Arc::clone(basis),
            entries,
        })
    }

    pub fn basis(&self) -> &Arc<SectorBasis> {
        &self.basis
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub(crate) fn entries_mut(&mut self) -> &mut DMatrix<Complex64> {
        &mut self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            basis: Arc::clone(&self.basis),
            entries: self.entries.adjoint(),
        }
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            basis: Arc::clone(&self.basis),
            entries: &self.entries * Complex64::new(factor, 0.0),
        }
    }

    /// Largest absolute entry of `H - H+`.
    pub fn hermiticity_error(&self) -> f64 {
        (&self.entries - self.entries.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Largest absolute entry of `U+ U - I`.
    pub fn unitarity_error(&self) -> f64 {
        let n = self.dim();
        (self.entries.adjoint() * &self.entries - DMatrix::<Complex64>::identity(n, n))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest absolute entry of the difference to another operator.
    pub fn max_abs_diff(&self, other: &OperatorMatrix) -> f64 {
        assert!(self.basis.same_sector(&other.basis));
        (&self.entries - &other.entries)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Apply to a state vector; errors on a sector mismatch.
    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        if !self.basis.same_sector(psi.basis()) {
            return Err(Error::SectorMismatch {
                left: self.basis.descriptor(),
                right: psi.basis().descriptor(),
            });
        }
        let amplitudes: DVector<Complex64> = &self.entries * psi.amplitudes();
        StateVector::from_amplitudes(psi.basis(), amplitudes)
    }

    /// `<psi| H |psi>`; real for Hermitian operators.
    pub fn expectation(&self, psi: &StateVector) -> Result<Complex64> {
        let h_psi = self.apply(psi)?;
        psi.overlap(&h_psi)
    }
}

impl std::ops::Add<&OperatorMatrix> for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn add(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        assert!(self.basis.same_sector(&rhs.basis), "sector mismatch in +");
        OperatorMatrix {
            basis: Arc::clone(&self.basis),
            entries: &self.entries + &rhs.entries,
        }
    }
}

impl std::ops::Sub<&OperatorMatrix> for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn sub(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        assert!(self.basis.same_sector(&rhs.basis), "sector mismatch in -");
        OperatorMatrix {
            basis: Arc::clone(&self.basis),
            entries: &self.entries - &rhs.entries,
        }
    }
}

impl std::ops::Mul<&OperatorMatrix> for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        assert!(self.basis.same_sector(&rhs.basis), "sector mismatch in *");
        OperatorMatrix {
            basis: Arc::clone(&self.basis),
            entries: &self.entries * &rhs.entries,
        }
    }
}

impl fmt::Display for OperatorMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.entries)
    }
}

/// Resonant exchange interaction summed over cavities,
/// `sum_i g_i (a_i+ s_i + a_i s_i+)`, restricted to the sector.
///
/// The element coupling `|n-1, e=1>` and `|n, e=0>` within one cavity is
/// `g sqrt(n)`; images pushed past the photon cutoff are dropped together
/// with their adjoints, so the result stays Hermitian.
pub fn build_jc_interaction(basis: &Arc<SectorBasis>, couplings: &[f64]) -> OperatorMatrix {
    assert_eq!(
        couplings.len(),
        basis.cavity_count(),
        "one coupling per cavity"
    );
    let mut op = OperatorMatrix::zeros(basis);
    let n_max = basis.n_max();
    for (col, state) in basis.states().iter().enumerate() {
        for (cavity, &g) in couplings.iter().enumerate() {
            if g == 0.0 {
                continue;
            }
            let n = state.photons(cavity);
            let m = state.atom(cavity);
            // a+ s : |n, 1> -> sqrt(n+1) |n+1, 0>
            if m == 1 && n < n_max {
                let image = state.with_cavity(cavity, n + 1, 0);
                if let Some(row) = basis.index_of(&image) {
                    op.entries[(row, col)] += Complex64::new(g * f64::from(n + 1).sqrt(), 0.0);
                }
            }
            // a s+ : |n, 0> -> sqrt(n) |n-1, 1>
            if m == 0 && n >= 1 {
                let image = state.with_cavity(cavity, n - 1, 1);
                if let Some(row) = basis.index_of(&image) {
                    op.entries[(row, col)] += Complex64::new(g * f64::from(n).sqrt(), 0.0);
                }
            }
        }
    }
    op
}

/// Photon hop between two cavities, `nu (a_i a_j+ + a_j a_i+)`.
///
/// Conserves the total photon number and leaves all atoms untouched.
pub fn build_hop(basis: &Arc<SectorBasis>, pair: (usize, usize), nu: f64) -> OperatorMatrix {
    let (i, j) = pair;
    assert!(i != j, "hop needs two distinct cavities");
    assert!(
        i < basis.cavity_count() && j < basis.cavity_count(),
        "hop pair out of range"
    );
    let mut op = OperatorMatrix::zeros(basis);
    if nu == 0.0 {
        return op;
    }
    let n_max = basis.n_max();
    for (col, state) in basis.states().iter().enumerate() {
        for (from, to) in [(i, j), (j, i)] {
            let n_from = state.photons(from);
            let n_to = state.photons(to);
            if n_from >= 1 && n_to < n_max {
                let image = state
                    .with_cavity(from, n_from - 1, state.atom(from))
                    .with_cavity(to, n_to + 1, state.atom(to));
                if let Some(row) = basis.index_of(&image) {
                    let amp = nu * f64::from(n_from).sqrt() * f64::from(n_to + 1).sqrt();
                    op.entries[(row, col)] += Complex64::new(amp, 0.0);
                }
            }
        }
    }
    op
}

/// Free Hamiltonian `hbar w (a+a + s+s)` summed over cavities. On a
/// fixed-excitation sector this is `hbar w N` times the identity, which is
/// why the rest of the crate drops it: it commutes with both the exchange
/// and hop terms and only adds a global phase. `omega` is the energy
/// quantum `hbar * w` in the caller's units.
pub fn build_h0(basis: &Arc<SectorBasis>, omega: f64) -> OperatorMatrix {
    let mut op = OperatorMatrix::zeros(basis);
    for (k, state) in basis.states().iter().enumerate() {
        op.entries[(k, k)] = Complex64::new(omega * f64::from(state.total_excitation()), 0.0);
    }
    op
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::BasisState;
    use proptest::prelude::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn single_cavity_single_excitation_block() {
        let basis = Arc::new(SectorBasis::enumerate(1, 2, 1));
        let h = build_jc_interaction(&basis, &[0.7]);
        // basis order: |0;1>, |1;0>
        assert_eq!(h.entries()[(0, 1)], c(0.7));
        assert_eq!(h.entries()[(1, 0)], c(0.7));
        assert_eq!(h.entries()[(0, 0)], c(0.0));
        assert_eq!(h.entries()[(1, 1)], c(0.0));
    }

    #[test]
    fn single_cavity_double_excitation_block() {
        let basis = Arc::new(SectorBasis::enumerate(1, 2, 2));
        let h = build_jc_interaction(&basis, &[1.0]);
        // basis order: |1;1>, |2;0>; element g*sqrt(2)
        assert_eq!(basis.size(), 2);
        assert!((h.entries()[(1, 0)] - c(2f64.sqrt())).norm() < 1e-15);
        assert!((h.entries()[(0, 1)] - c(2f64.sqrt())).norm() < 1e-15);
    }

    #[test]
    fn zero_couplings_give_zero_matrix() {
        let basis = SectorBasis::gate_sector(2);
        let h = build_jc_interaction(&basis, &[0.0, 0.0, 0.0]);
        assert_eq!(h.max_abs(), 0.0);
    }

    #[test]
    fn hop_on_single_shared_photon() {
        // two cavities, one photon, no atoms excited
        let basis = Arc::new(SectorBasis::enumerate(2, 2, 1));
        let h = build_hop(&basis, (0, 1), 0.3);
        let a = BasisState::new(vec![0, 1], vec![0, 0]);
        let b = BasisState::new(vec![1, 0], vec![0, 0]);
        let (ka, kb) = (basis.index_of(&a).unwrap(), basis.index_of(&b).unwrap());
        assert_eq!(h.entries()[(ka, kb)], c(0.3));
        assert_eq!(h.entries()[(kb, ka)], c(0.3));
        // atoms never move
        let atom = BasisState::new(vec![0, 0], vec![1, 0]);
        let katom = basis.index_of(&atom).unwrap();
        for k in 0..basis.size() {
            assert_eq!(h.entries()[(k, katom)], c(0.0));
        }
    }

    #[test]
    fn hop_two_photon_matrix_element() {
        // <0,2|H|1,1> = nu * sqrt(1) * sqrt(2)
        let basis = Arc::new(SectorBasis::enumerate(2, 2, 2));
        let h = build_hop(&basis, (0, 1), 1.0);
        let from = BasisState::new(vec![1, 1], vec![0, 0]);
        let to = BasisState::new(vec![0, 2], vec![0, 0]);
        let amp = h.entries()[(basis.index_of(&to).unwrap(), basis.index_of(&from).unwrap())];
        assert!((amp - c(2f64.sqrt())).norm() < 1e-15);
    }

    #[test]
    fn hop_zero_strength() {
        let basis = SectorBasis::gate_sector(2);
        assert_eq!(build_hop(&basis, (0, 2), 0.0).max_abs(), 0.0);
    }

    #[test]
    fn free_hamiltonian_is_sector_identity() {
        let basis = SectorBasis::gate_sector(2);
        let h0 = build_h0(&basis, 5.0);
        for k in 0..basis.size() {
            assert_eq!(h0.entries()[(k, k)], c(10.0));
        }
        let vacuum = Arc::new(SectorBasis::enumerate(3, 2, 0));
        assert_eq!(build_h0(&vacuum, 5.0).max_abs(), 0.0);
    }

    #[test]
    fn free_hamiltonian_commutes_with_interactions() {
        let basis = SectorBasis::gate_sector(2);
        let h0 = build_h0(&basis, 3.0);
        let hint = build_jc_interaction(&basis, &[1.0, 1.0, 1.0]);
        let hop = build_hop(&basis, (2, 0), 40.0);
        let h = &hint + &hop;
        let comm = &(&h0 * &h) - &(&h * &h0);
        assert!(comm.max_abs() <= 1e-13);
    }

    #[test]
    fn ladder_elements_match_sqrt_rule() {
        // <n+1, 0| H |n, 1> = g sqrt(n+1) for n = 0, 1
        for (total, n) in [(1u32, 0u8), (2, 1)] {
            let basis = Arc::new(SectorBasis::enumerate(1, 2, total));
            let h = build_jc_interaction(&basis, &[1.0]);
            let from = BasisState::new(vec![n], vec![1]);
            let to = BasisState::new(vec![n + 1], vec![0]);
            let amp = h.entries()[(basis.index_of(&to).unwrap(), basis.index_of(&from).unwrap())];
            assert!((amp - c(f64::from(n + 1).sqrt())).norm() < 1e-15);
        }
    }

    #[test]
    fn builders_preserve_total_excitation() {
        let basis = SectorBasis::gate_sector(2);
        let h = &build_jc_interaction(&basis, &[1.0, 0.5, 2.0]) + &build_hop(&basis, (0, 1), 3.0);
        for (col, s_in) in basis.states().iter().enumerate() {
            for (row, s_out) in basis.states().iter().enumerate() {
                if h.entries()[(row, col)].norm() > 0.0 {
                    assert_eq!(s_in.total_excitation(), s_out.total_excitation());
                }
            }
        }
    }

    #[test]
    fn coupling_from_geometry_examples() {
        let params = PhysicalParams::new(1e10, 1.0, 1.0, 1.0).unwrap();
        let lambda = 2.0; // length = 1
        let antinode = CavityGeometry::new(4.0, 0.5, 0.5, lambda, 1).unwrap();
        let expected = (1e10f64 / 4.0).sqrt() * 0.5;
        assert!((coupling_from_geometry(&params, &antinode).unwrap() - expected).abs() < 1e-9);

        let node = CavityGeometry::new(4.0, 0.5, 0.0, lambda, 1).unwrap();
        assert!(coupling_from_geometry(&params, &node).unwrap().abs() < 1e-12);

        let doubled = CavityGeometry::new(8.0, 0.5, 0.5, lambda, 1).unwrap();
        let ratio = coupling_from_geometry(&params, &doubled).unwrap()
            / coupling_from_geometry(&params, &antinode).unwrap();
        assert!((ratio - 1.0 / 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn atom_position_outside_cavity_is_rejected() {
        assert!(matches!(
            CavityGeometry::new(1.0, 1.0, 1.5, 2.0, 1),
            Err(Error::PositionOutsideCavity { .. })
        ));
    }

    #[test]
    fn rwa_flag() {
        assert!(PhysicalParams::new(1e10, 1e6, 1e8, 1.0).unwrap().rwa_ok());
        assert!(!PhysicalParams::new(1e10, 1e8, 1e9, 1.0).unwrap().rwa_ok());
    }

    proptest! {
        #[test]
        fn interaction_and_hop_are_hermitian(
            cavities in 1usize..=3,
            n_max in 0u8..=2,
            total in 0u32..=3,
            g in prop::collection::vec(0.0f64..3.0, 3),
            nu in 0.0f64..50.0,
        ) {
            let basis = Arc::new(SectorBasis::enumerate(cavities, n_max, total));
            if basis.is_empty() {
                return Ok(());
            }
            let h = build_jc_interaction(&basis, &g[..cavities]);
            prop_assert!(h.hermiticity_error() <= 1e-14);
            if cavities >= 2 {
                let hop = build_hop(&basis, (0, cavities - 1), nu);
                prop_assert!(hop.hermiticity_error() <= 1e-14);
            }
        }
    }
}
