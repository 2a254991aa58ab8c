//! Brute-force reference evolution on the truncated product space.
//!
//! Everything here works in the lab frame with no closed-form shortcuts:
//! the full Hamiltonian is assembled on
//! `atom A (x) atom B (x) cavity a (x) cavity b` with each cavity truncated
//! at `n_max` photons, eigendecomposed once, and applied exactly as
//! `psi(t) = V exp(-i E t) V^dagger psi(0)`. Total excitation number
//! commutes with the Hamiltonian, so every manifold handled analytically
//! elsewhere is closed under this evolution and the truncation is exact for
//! the states this crate models (`n_max = 2` suffices).
//!
//! Reduced two-qubit states are extracted by a partial trace that refuses to
//! treat a cavity as a qubit when it holds measurable population above one
//! photon.

use nalgebra::{DMatrix, DVector, Matrix4};
use num_complex::Complex64 as C64;

use crate::entanglement::{PairLabel, TwoQubitDensityMatrix};
use crate::error::{Error, Result};
use crate::linalg::hermitian_eigen;
use crate::model::{AmplitudeVector, Frame, ManifoldBasis, SystemParams};

/// Default cavity truncation; exact for every state with at most two total
/// excitations.
pub const DEFAULT_N_MAX: usize = 2;

/// A kept cavity may hold at most this much population above one photon
/// before the two-qubit reduction is refused.
pub const QUBIT_LIKE_TOL: f64 = 1e-10;

/// One of the four elementary subsystems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subsystem {
    AtomA,
    AtomB,
    CavA,
    CavB,
}

/// The two subsystems a pair label refers to, in row-major qubit order.
pub fn pair_subsystems(pair: PairLabel) -> (Subsystem, Subsystem) {
    match pair {
        PairLabel::AtomAtom => (Subsystem::AtomA, Subsystem::AtomB),
        PairLabel::CavCav => (Subsystem::CavA, Subsystem::CavB),
        PairLabel::AtomACavA => (Subsystem::AtomA, Subsystem::CavA),
        PairLabel::AtomBCavB => (Subsystem::AtomB, Subsystem::CavB),
        PairLabel::AtomACavB => (Subsystem::AtomA, Subsystem::CavB),
        PairLabel::CavAAtomB => (Subsystem::CavA, Subsystem::AtomB),
    }
}

/// Basis-state coordinates on the product space: atom indices use 0 for the
/// upper level, cavity indices count photons.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Ket {
    atom_a: usize,
    atom_b: usize,
    n_a: usize,
    n_b: usize,
}

impl Ket {
    fn excitation(&self) -> usize {
        (1 - self.atom_a) + (1 - self.atom_b) + self.n_a + self.n_b
    }
}

/// Product-basis coordinates of each manifold state, in the frozen label
/// order of the corresponding [`ManifoldBasis`].
fn manifold_kets(basis: ManifoldBasis) -> Vec<Ket> {
    let k = |atom_a, atom_b, n_a, n_b| Ket {
        atom_a,
        atom_b,
        n_a,
        n_b,
    };
    match basis {
        ManifoldBasis::SingleExcitation => {
            vec![k(0, 1, 0, 0), k(1, 0, 0, 0), k(1, 1, 1, 0), k(1, 1, 0, 1)]
        }
        ManifoldBasis::TwoExcitationCore => {
            vec![k(0, 0, 0, 0), k(0, 1, 0, 1), k(1, 0, 1, 0), k(1, 1, 1, 1)]
        }
        ManifoldBasis::TwoExcitationWithGround => vec![
            k(0, 0, 0, 0),
            k(0, 1, 0, 1),
            k(1, 0, 1, 0),
            k(1, 1, 1, 1),
            k(1, 1, 0, 0),
        ],
        ManifoldBasis::SingleSitePairA => vec![k(0, 1, 1, 0), k(1, 1, 2, 0)],
        ManifoldBasis::SingleSitePairB => vec![k(1, 0, 0, 1), k(1, 1, 0, 2)],
    }
}

/// Largest photon number any state of the manifold occupies.
fn max_occupation(basis: ManifoldBasis) -> usize {
    manifold_kets(basis)
        .iter()
        .map(|k| k.n_a.max(k.n_b))
        .max()
        .unwrap()
}

/// State vector on the truncated product space, lab frame.
#[derive(Debug, Clone, PartialEq)]
pub struct FullStateVector {
    n_max: usize,
    values: DVector<C64>,
}

fn space_dim(n_max: usize) -> usize {
    4 * (n_max + 1) * (n_max + 1)
}

impl FullStateVector {
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[C64] {
        self.values.as_slice()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(|c| c.norm_sqr()).sum()
    }

    fn index(n_max: usize, ket: Ket) -> usize {
        ((ket.atom_a * 2 + ket.atom_b) * (n_max + 1) + ket.n_a) * (n_max + 1) + ket.n_b
    }

    fn decompose(n_max: usize, idx: usize) -> Ket {
        let n_b = idx % (n_max + 1);
        let rest = idx / (n_max + 1);
        let n_a = rest % (n_max + 1);
        let atoms = rest / (n_max + 1);
        Ket {
            atom_a: atoms / 2,
            atom_b: atoms % 2,
            n_a,
            n_b,
        }
    }

    /// Embed manifold amplitudes into the product space.
    pub fn from_manifold(amp: &AmplitudeVector, n_max: usize) -> Result<Self> {
        let needed = max_occupation(amp.basis());
        if needed > n_max {
            return Err(Error::CutoffTooSmall { needed, n_max });
        }
        let mut values = DVector::zeros(space_dim(n_max));
        for (ket, value) in manifold_kets(amp.basis()).into_iter().zip(amp.values()) {
            values[Self::index(n_max, ket)] = *value;
        }
        Ok(Self { n_max, values })
    }

    /// Project back onto a manifold. Returns the lab-frame amplitudes and
    /// the squared norm left outside the manifold.
    pub fn to_manifold(&self, basis: ManifoldBasis) -> Result<(AmplitudeVector, f64)> {
        let needed = max_occupation(basis);
        if needed > self.n_max {
            return Err(Error::CutoffTooSmall {
                needed,
                n_max: self.n_max,
            });
        }
        let kets = manifold_kets(basis);
        let indices: Vec<usize> = kets.iter().map(|&k| Self::index(self.n_max, k)).collect();
        let amplitudes: Vec<C64> = indices.iter().map(|&i| self.values[i]).collect();
        let inside: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum();
        let residual = (self.norm_sqr() - inside).max(0.0);
        // strict constructor: any real leakage out of the manifold shows up
        // as a norm-gate failure rather than being silently renormalized away
        let amp = AmplitudeVector::new(basis, amplitudes, Frame::Lab)?;
        Ok((amp, residual))
    }

    /// Expectation value of the total excitation number.
    pub fn excitation_number(&self) -> f64 {
        self.values
            .iter()
            .enumerate()
            .map(|(i, c)| Self::decompose(self.n_max, i).excitation() as f64 * c.norm_sqr())
            .sum()
    }
}

/// The full Hamiltonian with its cached eigendecomposition.
pub struct Hamiltonian {
    params: SystemParams,
    n_max: usize,
    matrix: DMatrix<C64>,
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<C64>,
}

impl Hamiltonian {
    /// Assemble and eigendecompose; field zero-point energies are retained.
    pub fn new(params: &SystemParams, n_max: usize) -> Self {
        let dim = space_dim(n_max);
        let mut m = DMatrix::<C64>::zeros(dim, dim);
        let sz = |a: usize| if a == 0 { 0.5 } else { -0.5 };
        for i in 0..dim {
            let ket = FullStateVector::decompose(n_max, i);
            let diag = params.omega1() * (ket.n_a as f64 + 0.5)
                + params.omega2() * (ket.n_b as f64 + 0.5)
                + params.omega0() * (sz(ket.atom_a) + sz(ket.atom_b));
            m[(i, i)] = C64::new(diag, 0.0);
            // photon emission by atom A: up,n -> down,n+1 with sqrt(n+1)
            if ket.atom_a == 0 && ket.n_a < n_max {
                let j = FullStateVector::index(
                    n_max,
                    Ket {
                        atom_a: 1,
                        n_a: ket.n_a + 1,
                        ..ket
                    },
                );
                let el = C64::new(params.g1() * ((ket.n_a + 1) as f64).sqrt(), 0.0);
                m[(i, j)] = el;
                m[(j, i)] = el;
            }
            // photon emission by atom B
            if ket.atom_b == 0 && ket.n_b < n_max {
                let j = FullStateVector::index(
                    n_max,
                    Ket {
                        atom_b: 1,
                        n_b: ket.n_b + 1,
                        ..ket
                    },
                );
                let el = C64::new(params.g2() * ((ket.n_b + 1) as f64).sqrt(), 0.0);
                m[(i, j)] = el;
                m[(j, i)] = el;
            }
        }
        let (eigenvalues, eigenvectors) = hermitian_eigen(&m);
        Self {
            params: *params,
            n_max,
            matrix: m,
            eigenvalues,
            eigenvectors,
        }
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    /// Largest deviation from Hermitian symmetry (exactly zero by
    /// construction; exposed so tests can pin that down).
    pub fn hermiticity_deviation(&self) -> f64 {
        let n = self.matrix.nrows();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| (self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm())
            .fold(0.0, f64::max)
    }

    /// Largest element of the commutator with the excitation-number
    /// operator (zero: the interaction swaps an atomic excitation for a
    /// photon one-for-one).
    pub fn excitation_commutator_norm(&self) -> f64 {
        let n = self.matrix.nrows();
        let exc: Vec<f64> = (0..n)
            .map(|i| FullStateVector::decompose(self.n_max, i).excitation() as f64)
            .collect();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| (self.matrix[(i, j)] * (exc[j] - exc[i])).norm())
            .fold(0.0, f64::max)
    }

    /// Exact propagation by physical time `t` through the cached
    /// eigendecomposition.
    pub fn evolve(&self, psi0: &FullStateVector, t: f64) -> Result<FullStateVector> {
        self.evolve_series(psi0, &[t]).map(|mut v| v.pop().unwrap())
    }

    /// Propagate to each time in `times`, reusing the eigenbasis projection
    /// of the initial state.
    pub fn evolve_series(&self, psi0: &FullStateVector, times: &[f64]) -> Result<Vec<FullStateVector>> {
        if psi0.dim() != self.matrix.nrows() {
            return Err(Error::DimensionMismatch {
                expected: self.matrix.nrows(),
                found: psi0.dim(),
            });
        }
        let coeffs = self.eigenvectors.adjoint() * &psi0.values;
        let mut out = Vec::with_capacity(times.len());
        for &t in times {
            let rotated = DVector::from_fn(coeffs.len(), |k, _| {
                coeffs[k] * C64::from_polar(1.0, -self.eigenvalues[k] * t)
            });
            out.push(FullStateVector {
                n_max: self.n_max,
                values: &self.eigenvectors * rotated,
            });
        }
        Ok(out)
    }
}

/// Qubit level of a subsystem within a product ket: 0 is the excited level
/// (atom up / one photon). `None` when a cavity sits above one photon.
fn qubit_level(ket: Ket, s: Subsystem) -> Option<usize> {
    match s {
        Subsystem::AtomA => Some(ket.atom_a),
        Subsystem::AtomB => Some(ket.atom_b),
        Subsystem::CavA => (ket.n_a <= 1).then(|| 1 - ket.n_a),
        Subsystem::CavB => (ket.n_b <= 1).then(|| 1 - ket.n_b),
    }
}

/// Coordinates of the two subsystems NOT kept, used to match environment
/// components during the trace.
fn environment(ket: Ket, keep: (Subsystem, Subsystem)) -> (usize, usize, usize, usize) {
    let pick = |s: Subsystem| match s {
        Subsystem::AtomA => ket.atom_a,
        Subsystem::AtomB => ket.atom_b,
        Subsystem::CavA => ket.n_a,
        Subsystem::CavB => ket.n_b,
    };
    let mut env = [usize::MAX; 4];
    for (slot, s) in [
        Subsystem::AtomA,
        Subsystem::AtomB,
        Subsystem::CavA,
        Subsystem::CavB,
    ]
    .into_iter()
    .enumerate()
    {
        if s != keep.0 && s != keep.1 {
            env[slot] = pick(s);
        }
    }
    (env[0], env[1], env[2], env[3])
}

/// Reduce the full state to the two kept subsystems.
///
/// Fails with [`Error::CavityNotQubitLike`] when a kept cavity carries more
/// than [`QUBIT_LIKE_TOL`] population above one photon.
pub fn partial_trace(
    psi: &FullStateVector,
    keep: (Subsystem, Subsystem),
) -> Result<TwoQubitDensityMatrix> {
    assert_ne!(keep.0, keep.1, "kept subsystems must differ");
    let n_max = psi.n_max;
    let dim = psi.dim();
    let kets: Vec<Ket> = (0..dim).map(|i| FullStateVector::decompose(n_max, i)).collect();
    for s in [keep.0, keep.1] {
        let overflow: f64 = (0..dim)
            .filter(|&i| qubit_level(kets[i], s).is_none())
            .map(|i| psi.values[i].norm_sqr())
            .sum();
        if overflow > QUBIT_LIKE_TOL {
            return Err(Error::CavityNotQubitLike {
                population: overflow,
            });
        }
    }
    let mut rho = Matrix4::<C64>::zeros();
    for (i, &ket_i) in kets.iter().enumerate() {
        let (Some(qi0), Some(qi1)) = (qubit_level(ket_i, keep.0), qubit_level(ket_i, keep.1))
        else {
            continue;
        };
        let row = qi0 * 2 + qi1;
        let env_i = environment(ket_i, keep);
        for (j, &ket_j) in kets.iter().enumerate() {
            let (Some(qj0), Some(qj1)) =
                (qubit_level(ket_j, keep.0), qubit_level(ket_j, keep.1))
            else {
                continue;
            };
            if environment(ket_j, keep) != env_i {
                continue;
            }
            let col = qj0 * 2 + qj1;
            rho[(row, col)] += psi.values[i] * psi.values[j].conj();
        }
    }
    TwoQubitDensityMatrix::from_matrix(rho)
}

/// Partial trace for a named pair.
pub fn pair_density(psi: &FullStateVector, pair: PairLabel) -> Result<TwoQubitDensityMatrix> {
    partial_trace(psi, pair_subsystems(pair))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entanglement::wootters_concurrence;
    use crate::model::{build_initial_state, InitialStateSpec};
    use approx::assert_relative_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_PI_4;

    fn params() -> SystemParams {
        SystemParams::from_detunings(40.0, 0.35, -0.2, 1.3, 0.7).unwrap()
    }

    fn random_manifold_state(rng: &mut impl Rng, basis: ManifoldBasis) -> AmplitudeVector {
        let mut values: Vec<C64> = (0..basis.dim())
            .map(|_| C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        let norm = values.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        for v in &mut values {
            *v /= norm;
        }
        AmplitudeVector::new(basis, values, Frame::Lab).unwrap()
    }

    #[test]
    fn hamiltonian_is_hermitian_and_conserves_excitation() {
        let h = Hamiltonian::new(&params(), DEFAULT_N_MAX);
        assert_eq!(h.hermiticity_deviation(), 0.0);
        assert_eq!(h.excitation_commutator_norm(), 0.0);
    }

    #[test]
    fn evolution_is_unitary() {
        let h = Hamiltonian::new(&params(), DEFAULT_N_MAX);
        let spec = InitialStateSpec::bell_psi(0.7, 0.4);
        let amp = build_initial_state(&spec, ManifoldBasis::SingleExcitation).unwrap();
        let psi0 = FullStateVector::from_manifold(&amp, DEFAULT_N_MAX).unwrap();
        for &t in &[0.0, 0.37, 1.9, 8.4, 33.0] {
            let psi = h.evolve(&psi0, t).unwrap();
            assert!((psi.norm_sqr() - 1.0).abs() < 1e-12, "t={t}");
        }
    }

    #[test]
    fn resonant_vacuum_rabi_oscillation() {
        // excited atom A on resonance with its own cavity: populations swap
        // as cos^2/sin^2 of g1 t and site B never stirs
        let p = SystemParams::from_detunings(12.0, 0.0, 0.8, 1.0, 0.6).unwrap();
        let h = Hamiltonian::new(&p, DEFAULT_N_MAX);
        let amp = build_initial_state(
            &InitialStateSpec::bell_psi(0.0, 0.0),
            ManifoldBasis::SingleExcitation,
        )
        .unwrap();
        let psi0 = FullStateVector::from_manifold(&amp, DEFAULT_N_MAX).unwrap();
        for &t in &[0.3, 1.1, 2.7] {
            let psi = h.evolve(&psi0, t).unwrap();
            let (d, residual) = psi.to_manifold(ManifoldBasis::SingleExcitation).unwrap();
            assert!(residual < 1e-12);
            let m = d.moduli();
            assert_relative_eq!(m[0] * m[0], t.cos() * t.cos(), epsilon = 1e-12);
            assert_relative_eq!(m[2] * m[2], t.sin() * t.sin(), epsilon = 1e-12);
            assert!(m[1] < 1e-13 && m[3] < 1e-13);
        }
    }

    #[test]
    fn every_manifold_is_closed_under_evolution() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let h = Hamiltonian::new(&params(), DEFAULT_N_MAX);
        for basis in ManifoldBasis::ALL {
            let amp = random_manifold_state(&mut rng, basis);
            let psi0 = FullStateVector::from_manifold(&amp, DEFAULT_N_MAX).unwrap();
            let psi = h.evolve(&psi0, 5.3).unwrap();
            let (_, residual) = psi.to_manifold(basis).unwrap();
            assert!(residual < 1e-12, "{basis} leaked {residual:e}");
        }
    }

    #[test]
    fn excitation_number_expectations() {
        let single = build_initial_state(
            &InitialStateSpec::bell_psi(FRAC_PI_4, 0.0),
            ManifoldBasis::SingleExcitation,
        )
        .unwrap();
        let psi = FullStateVector::from_manifold(&single, DEFAULT_N_MAX).unwrap();
        assert_relative_eq!(psi.excitation_number(), 1.0, epsilon = 1e-14);

        let double = build_initial_state(
            &InitialStateSpec::bell_phi(FRAC_PI_4, 0.0),
            ManifoldBasis::TwoExcitationWithGround,
        )
        .unwrap();
        let psi = FullStateVector::from_manifold(&double, DEFAULT_N_MAX).unwrap();
        // two excitations with weight cos^2, zero with weight sin^2
        assert_relative_eq!(psi.excitation_number(), 1.0, epsilon = 1e-14);

        let h = Hamiltonian::new(&params(), DEFAULT_N_MAX);
        let evolved = h.evolve(&psi, 7.7).unwrap();
        assert_relative_eq!(evolved.excitation_number(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn cutoff_guard_rejects_deep_fock_states() {
        let amp = build_initial_state(
            &InitialStateSpec::custom(
                ManifoldBasis::SingleSitePairA,
                vec![C64::new(0.6, 0.0), C64::new(0.8, 0.0)],
            ),
            ManifoldBasis::SingleSitePairA,
        )
        .unwrap();
        match FullStateVector::from_manifold(&amp, 1) {
            Err(Error::CutoffTooSmall { needed, n_max }) => {
                assert_eq!((needed, n_max), (2, 1));
            }
            other => panic!("expected cutoff error, got {other:?}"),
        }
        assert!(FullStateVector::from_manifold(&amp, 2).is_ok());
    }

    #[test]
    fn partial_trace_of_shared_atomic_excitation() {
        let amp = build_initial_state(
            &InitialStateSpec::bell_psi(FRAC_PI_4, 0.0),
            ManifoldBasis::SingleExcitation,
        )
        .unwrap();
        let psi = FullStateVector::from_manifold(&amp, DEFAULT_N_MAX).unwrap();
        let rho = pair_density(&psi, PairLabel::AtomAtom).unwrap();
        let m = rho.matrix();
        assert_relative_eq!(m[(1, 1)].re, 0.5, epsilon = 1e-14);
        assert_relative_eq!(m[(2, 2)].re, 0.5, epsilon = 1e-14);
        assert_relative_eq!(m[(1, 2)].re, 0.5, epsilon = 1e-14);
        assert_relative_eq!(wootters_concurrence(&rho).unwrap(), 1.0, epsilon = 1e-12);

        // both cavities are empty: a pure product state with no entanglement
        let rho_cc = pair_density(&psi, PairLabel::CavCav).unwrap();
        assert_relative_eq!(rho_cc.matrix()[(3, 3)].re, 1.0, epsilon = 1e-14);
        assert!(wootters_concurrence(&rho_cc).unwrap() < 1e-12);
    }

    #[test]
    fn kept_cavity_above_one_photon_is_refused() {
        let amp = build_initial_state(
            &InitialStateSpec::custom(
                ManifoldBasis::SingleSitePairA,
                vec![C64::new(0.6, 0.0), C64::new(0.8, 0.0)],
            ),
            ManifoldBasis::SingleSitePairA,
        )
        .unwrap();
        let psi = FullStateVector::from_manifold(&amp, DEFAULT_N_MAX).unwrap();
        match partial_trace(&psi, (Subsystem::AtomA, Subsystem::CavA)) {
            Err(Error::CavityNotQubitLike { population }) => {
                assert_relative_eq!(population, 0.64, epsilon = 1e-12);
            }
            other => panic!("expected qubit-likeness error, got {other:?}"),
        }
        // tracing the deep cavity OUT is fine
        assert!(partial_trace(&psi, (Subsystem::AtomA, Subsystem::AtomB)).is_ok());
    }

    #[test]
    fn series_evolution_matches_single_shots() {
        let h = Hamiltonian::new(&params(), DEFAULT_N_MAX);
        let amp = build_initial_state(
            &InitialStateSpec::bell_phi(0.5, 0.2),
            ManifoldBasis::TwoExcitationWithGround,
        )
        .unwrap();
        let psi0 = FullStateVector::from_manifold(&amp, DEFAULT_N_MAX).unwrap();
        let times = [0.0, 0.9, 2.2];
        let series = h.evolve_series(&psi0, &times).unwrap();
        for (&t, from_series) in times.iter().zip(&series) {
            let single = h.evolve(&psi0, t).unwrap();
            let diff = single
                .values()
                .iter()
                .zip(from_series.values())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(diff == 0.0, "t={t} diff={diff:e}");
        }
    }
}
