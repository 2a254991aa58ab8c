//! Concurrence machinery for the six two-qubit subsystem pairs.
//!
//! With at most one excitation per subsystem, every reduced pair state lives
//! on a two-qubit space: atoms are qubits outright and cavities are confined
//! to Fock levels {0, 1}. Pairs are labeled the way the physics reads:
//! `AB` atoms, `ab` cavities, `Aa`/`Bb` an atom with its own cavity (local),
//! `Ab`/`aB` an atom with the remote cavity (nonlocal).
//!
//! Two independent pathways are provided and cross-checked in the test
//! suites: closed-form expressions straight from manifold amplitudes, and
//! the general Wootters construction on reduced density matrices.

use std::fmt;

use nalgebra::{DMatrix, Matrix4};
use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::hermitian_eigen;
use crate::model::{AmplitudeVector, ManifoldBasis};

fn to_dyn(m: &Matrix4<C64>) -> DMatrix<C64> {
    DMatrix::from_fn(4, 4, |i, j| m[(i, j)])
}

/// Largest tolerated excursion outside [0, 1] before clamping fails.
pub const CLAMP_SLACK: f64 = 1e-10;
/// Zero threshold for the X-state pattern check.
pub const X_PATTERN_TOL: f64 = 1e-12;
/// Hermiticity tolerance for density-matrix validation.
pub const HERMITICITY_TOL: f64 = 1e-13;
/// Unit-trace tolerance for density-matrix validation.
pub const TRACE_TOL: f64 = 1e-12;
/// Eigenvalues of a valid density matrix may dip this far below zero.
pub const PSD_TOL: f64 = 1e-12;

// ---------------------------------------------------------------------------
// pair labels and grouped values
// ---------------------------------------------------------------------------

/// One of the six subsystem pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PairLabel {
    /// Atoms A and B.
    AtomAtom,
    /// Cavity modes a and b.
    CavCav,
    /// Atom A with its own cavity a.
    AtomACavA,
    /// Atom B with its own cavity b.
    AtomBCavB,
    /// Atom A with the remote cavity b.
    AtomACavB,
    /// Cavity a with the remote atom B.
    CavAAtomB,
}

impl PairLabel {
    /// Storage and CSV column order.
    pub const ALL: [PairLabel; 6] = [
        PairLabel::AtomAtom,
        PairLabel::CavCav,
        PairLabel::AtomACavA,
        PairLabel::AtomBCavB,
        PairLabel::AtomACavB,
        PairLabel::CavAAtomB,
    ];

    /// The four pairs that straddle the two subsystems.
    pub const NONLOCAL: [PairLabel; 4] = [
        PairLabel::AtomAtom,
        PairLabel::CavCav,
        PairLabel::AtomACavB,
        PairLabel::CavAAtomB,
    ];

    /// Position in [`PairLabel::ALL`].
    pub fn index(&self) -> usize {
        match self {
            PairLabel::AtomAtom => 0,
            PairLabel::CavCav => 1,
            PairLabel::AtomACavA => 2,
            PairLabel::AtomBCavB => 3,
            PairLabel::AtomACavB => 4,
            PairLabel::CavAAtomB => 5,
        }
    }

    /// Two-letter tag: upper case for atoms, lower case for cavities.
    pub fn short(&self) -> &'static str {
        match self {
            PairLabel::AtomAtom => "AB",
            PairLabel::CavCav => "ab",
            PairLabel::AtomACavA => "Aa",
            PairLabel::AtomBCavB => "Bb",
            PairLabel::AtomACavB => "Ab",
            PairLabel::CavAAtomB => "aB",
        }
    }

    /// Inverse of [`PairLabel::short`] (case-sensitive).
    pub fn parse(s: &str) -> Option<PairLabel> {
        PairLabel::ALL.into_iter().find(|p| p.short() == s)
    }
}

impl fmt::Display for PairLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short())
    }
}

/// The six pairwise concurrences at one instant, indexed by
/// [`PairLabel::ALL`] order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairConcurrences {
    values: [f64; 6],
}

impl PairConcurrences {
    pub fn new(values: [f64; 6]) -> Self {
        Self { values }
    }

    pub fn get(&self, pair: PairLabel) -> f64 {
        self.values[pair.index()]
    }

    pub fn as_array(&self) -> &[f64; 6] {
        &self.values
    }

    /// Sum of squared concurrences over the four nonlocal pairs.
    pub fn sspc(&self) -> f64 {
        PairLabel::NONLOCAL
            .iter()
            .map(|p| {
                let c = self.get(*p);
                c * c
            })
            .sum()
    }

    /// `C_AB + C_ab`, the quantity entering the equal-coupling sum rule.
    pub fn sum_atoms_cavities(&self) -> f64 {
        self.get(PairLabel::AtomAtom) + self.get(PairLabel::CavCav)
    }
}

// ---------------------------------------------------------------------------
// density matrices
// ---------------------------------------------------------------------------

/// Validated two-qubit density matrix on the basis `ee, eg, ge, gg`,
/// where `e` is the excited level of each member (atom up / one photon).
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitDensityMatrix {
    m: Matrix4<C64>,
}

impl TwoQubitDensityMatrix {
    /// Validate Hermiticity, unit trace and positivity.
    pub fn from_matrix(m: Matrix4<C64>) -> Result<Self> {
        let herm = (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .map(|(i, j)| (m[(i, j)] - m[(j, i)].conj()).norm())
            .fold(0.0, f64::max);
        if herm > HERMITICITY_TOL {
            return Err(Error::NotADensityMatrix(format!(
                "Hermiticity deviation {herm:.3e}"
            )));
        }
        let trace_dev = (m.trace().re - 1.0).abs().max(m.trace().im.abs());
        if trace_dev > TRACE_TOL {
            return Err(Error::NotADensityMatrix(format!(
                "trace deviates from 1 by {trace_dev:.3e}"
            )));
        }
        let (eigenvalues, _) = hermitian_eigen(&to_dyn(&m));
        let min_eig = eigenvalues[0];
        if min_eig < -PSD_TOL {
            return Err(Error::NotADensityMatrix(format!(
                "negative eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(Self { m })
    }

    pub fn matrix(&self) -> &Matrix4<C64> {
        &self.m
    }

    /// True when only the diagonal and the anti-diagonal can be nonzero
    /// (to within [`X_PATTERN_TOL`]).
    pub fn is_x_form(&self) -> bool {
        (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .filter(|&(i, j)| i != j && i + j != 3)
            .all(|(i, j)| self.m[(i, j)].norm() <= X_PATTERN_TOL)
    }
}

// ---------------------------------------------------------------------------
// concurrence computations
// ---------------------------------------------------------------------------

/// Clamp numerical noise at the edges of [0, 1]; anything further out is a
/// genuine inconsistency.
pub(crate) fn clamp_concurrence(c: f64) -> Result<f64> {
    if !c.is_finite() {
        return Err(Error::InternalConsistency(format!(
            "non-finite concurrence {c}"
        )));
    }
    if c < 0.0 {
        if c >= -CLAMP_SLACK {
            return Ok(0.0);
        }
        return Err(Error::InternalConsistency(format!(
            "concurrence {c} below 0 beyond tolerance"
        )));
    }
    if c > 1.0 {
        if c <= 1.0 + CLAMP_SLACK {
            return Ok(1.0);
        }
        return Err(Error::InternalConsistency(format!(
            "concurrence {c} above 1 beyond tolerance"
        )));
    }
    Ok(c)
}

/// The spin-flip kernel `sigma_y (x) sigma_y`: the real anti-diagonal
/// `(-1, 1, 1, -1)`.
fn spin_flip_kernel() -> Matrix4<C64> {
    const SIGN: [f64; 4] = [-1.0, 1.0, 1.0, -1.0];
    Matrix4::from_fn(|i, j| {
        if i + j == 3 {
            C64::new(SIGN[i], 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// Hermitian square root through the eigendecomposition, clamping the tiny
/// negative eigenvalues a valid density matrix is allowed to carry.
fn hermitian_sqrt(m: &Matrix4<C64>) -> Matrix4<C64> {
    let (vals, vecs) = hermitian_eigen(&to_dyn(m));
    let mut d = DMatrix::<C64>::zeros(4, 4);
    for i in 0..4 {
        d[(i, i)] = C64::new(vals[i].max(0.0).sqrt(), 0.0);
    }
    let s = &vecs * d * vecs.adjoint();
    Matrix4::from_fn(|i, j| s[(i, j)])
}

/// Wootters' concurrence of an arbitrary two-qubit density matrix.
///
/// The four `sqrt(lambda_i)` entering the formula are computed as the
/// singular values of `K = sqrt(rho) Y conj(sqrt(rho))` with
/// `Y = sigma_y (x) sigma_y`, since `K K^dagger` equals the Hermitian
/// product `sqrt(rho) rho_tilde sqrt(rho)` that shares its spectrum with
/// `rho rho_tilde`. Singular values obtained from the Hermitian embedding
/// `[[0, K], [K^dagger, 0]]` carry absolute rounding error O(eps); taking
/// square roots of near-zero eigenvalues instead would lose half the
/// significant digits.
pub fn wootters_concurrence(rho: &TwoQubitDensityMatrix) -> Result<f64> {
    let s = hermitian_sqrt(&rho.m);
    let k = s * spin_flip_kernel() * s.conjugate();
    let mut h = DMatrix::<C64>::zeros(8, 8);
    for i in 0..4 {
        for j in 0..4 {
            h[(i, 4 + j)] = k[(i, j)];
            h[(4 + j, i)] = k[(i, j)].conj();
        }
    }
    // eigenvalues come back ascending as (-sigma, ..., +sigma, ...): the last
    // four are the singular values, largest last
    let (vals, _) = hermitian_eigen(&h);
    clamp_concurrence((vals[7] - vals[6] - vals[5] - vals[4]).max(0.0))
}

/// Fast path for X-patterned density matrices:
/// `C = 2 * max{0, |rho_03| - sqrt(rho_11 rho_22), |rho_12| - sqrt(rho_00 rho_33)}`.
pub fn x_state_concurrence(rho: &TwoQubitDensityMatrix) -> Result<f64> {
    if !rho.is_x_form() {
        return Err(Error::NotXForm);
    }
    let m = &rho.m;
    let diag = |i: usize| m[(i, i)].re.max(0.0);
    let outer = m[(0, 3)].norm() - (diag(1) * diag(2)).sqrt();
    let inner = m[(1, 2)].norm() - (diag(0) * diag(3)).sqrt();
    clamp_concurrence(2.0 * outer.max(inner).max(0.0))
}

/// Closed-form pairwise concurrences for a single-excitation state
/// `(d1, d2, d3, d4)` on `ud00, du00, dd10, dd01`: every pair reduces to an
/// X-patterned matrix whose only coherence is the product of the two
/// amplitudes that excite one member each.
pub fn pairwise_concurrences_single(d: &AmplitudeVector) -> Result<PairConcurrences> {
    d.expect_basis(ManifoldBasis::SingleExcitation)?;
    let m = d.moduli();
    let mut v = [0.0; 6];
    v[PairLabel::AtomAtom.index()] = clamp_concurrence(2.0 * m[0] * m[1])?;
    v[PairLabel::CavCav.index()] = clamp_concurrence(2.0 * m[2] * m[3])?;
    v[PairLabel::AtomACavA.index()] = clamp_concurrence(2.0 * m[0] * m[2])?;
    v[PairLabel::AtomBCavB.index()] = clamp_concurrence(2.0 * m[1] * m[3])?;
    v[PairLabel::AtomACavB.index()] = clamp_concurrence(2.0 * m[0] * m[3])?;
    v[PairLabel::CavAAtomB.index()] = clamp_concurrence(2.0 * m[1] * m[2])?;
    Ok(PairConcurrences::new(v))
}

/// Closed-form pairwise concurrences for a two-excitation state
/// `(d1, d2, d3, d4, d0)` on `uu00, ud01, du10, dd11, dd00`.
///
/// Nonlocal pairs reduce to X matrices whose coherence `|d_i||d0|` competes
/// with the geometric mean of the two unpaired populations; local pairs stay
/// pure enough that their corner is a coherent sum of two products (the
/// ground state contributes only through normalization).
pub fn pairwise_concurrences_double(d: &AmplitudeVector) -> Result<PairConcurrences> {
    d.expect_basis(ManifoldBasis::TwoExcitationWithGround)?;
    let vals = d.values();
    let m: Vec<f64> = vals.iter().map(|c| c.norm()).collect();
    let (m1, m2, m3, m4, m0) = (m[0], m[1], m[2], m[3], m[4]);
    let mut v = [0.0; 6];
    v[PairLabel::AtomAtom.index()] = clamp_concurrence((2.0 * (m1 * m0 - m2 * m3)).max(0.0))?;
    v[PairLabel::CavCav.index()] = clamp_concurrence((2.0 * (m4 * m0 - m2 * m3)).max(0.0))?;
    v[PairLabel::AtomACavB.index()] = clamp_concurrence((2.0 * (m2 * m0 - m1 * m4)).max(0.0))?;
    v[PairLabel::CavAAtomB.index()] = clamp_concurrence((2.0 * (m3 * m0 - m1 * m4)).max(0.0))?;
    v[PairLabel::AtomACavA.index()] =
        clamp_concurrence(2.0 * (vals[0] * vals[2].conj() + vals[1] * vals[3].conj()).norm())?;
    v[PairLabel::AtomBCavB.index()] =
        clamp_concurrence(2.0 * (vals[0] * vals[1].conj() + vals[2] * vals[3].conj()).norm())?;
    Ok(PairConcurrences::new(v))
}

// ---------------------------------------------------------------------------
// series and conservation rules
// ---------------------------------------------------------------------------

/// Pairwise concurrences sampled on a time grid (`t` is dimensionless
/// `gbar * t`), plus the derived conservation quantities.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcurrenceSeries {
    pub t: Vec<f64>,
    /// One series per pair, ordered as [`PairLabel::ALL`].
    pub pairs: [Vec<f64>; 6],
    /// Sum of squared nonlocal concurrences at each instant.
    pub sspc: Vec<f64>,
    /// `C_AB + C_ab` at each instant.
    pub sum_atoms_cavities: Vec<f64>,
}

impl ConcurrenceSeries {
    pub fn from_samples(t: Vec<f64>, samples: &[PairConcurrences]) -> Self {
        assert_eq!(t.len(), samples.len());
        let mut pairs: [Vec<f64>; 6] = Default::default();
        for arr in pairs.iter_mut() {
            arr.reserve(samples.len());
        }
        let mut sspc = Vec::with_capacity(samples.len());
        let mut sum = Vec::with_capacity(samples.len());
        for s in samples {
            for (k, arr) in pairs.iter_mut().enumerate() {
                arr.push(s.as_array()[k]);
            }
            sspc.push(s.sspc());
            sum.push(s.sum_atoms_cavities());
        }
        Self {
            t,
            pairs,
            sspc,
            sum_atoms_cavities: sum,
        }
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn pair(&self, p: PairLabel) -> &[f64] {
        &self.pairs[p.index()]
    }

    /// Grid step, assuming a uniform grid.
    pub fn step(&self) -> f64 {
        if self.t.len() < 2 {
            return 0.0;
        }
        (self.t[self.t.len() - 1] - self.t[0]) / (self.t.len() - 1) as f64
    }
}

/// What the producing pipeline knew about a series, enough to decide which
/// conservation rules apply.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesRegime {
    pub manifold_excitation: usize,
    /// Bipartite concurrence between the two atom-cavity subsystems at t=0.
    pub c12: f64,
    pub equal_couplings: bool,
    pub equal_detunings: bool,
    pub bell_psi: bool,
    /// Fastest dimensionless oscillation rate present in the dynamics.
    pub omega_max: f64,
}

/// Measured deviations from the conservation laws.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RuleReport {
    /// Single excitation: max over the grid of `|SSPC - C12^2|`.
    pub sspc_deviation: Option<f64>,
    /// Single excitation: max of `|C_AB + C_ab - C12|`.
    pub sum_rule_deviation: Option<f64>,
    /// The sum rule is a theorem only for equal couplings, equal detunings
    /// and a Bell-type shared atomic excitation.
    pub sum_rule_expected: bool,
    /// Two excitations: how far SSPC dipped below 0.
    pub inequality_low_violation: Option<f64>,
    /// Two excitations: how far SSPC exceeded `C12^2`.
    pub inequality_high_excess: Option<f64>,
}

/// Evaluate the conservation rules a series should (or should not) satisfy.
pub fn check_rules(series: &ConcurrenceSeries, regime: &SeriesRegime) -> RuleReport {
    let c12sq = regime.c12 * regime.c12;
    match regime.manifold_excitation {
        1 => {
            let sspc_dev = series
                .sspc
                .iter()
                .map(|s| (s - c12sq).abs())
                .fold(0.0, f64::max);
            let sum_dev = series
                .sum_atoms_cavities
                .iter()
                .map(|s| (s - regime.c12).abs())
                .fold(0.0, f64::max);
            RuleReport {
                sspc_deviation: Some(sspc_dev),
                sum_rule_deviation: Some(sum_dev),
                sum_rule_expected: regime.equal_couplings
                    && regime.equal_detunings
                    && regime.bell_psi,
                inequality_low_violation: None,
                inequality_high_excess: None,
            }
        }
        _ => {
            let low = series.sspc.iter().map(|s| (-s).max(0.0)).fold(0.0, f64::max);
            let high = series
                .sspc
                .iter()
                .map(|s| (s - c12sq).max(0.0))
                .fold(0.0, f64::max);
            RuleReport {
                sspc_deviation: None,
                sum_rule_deviation: None,
                sum_rule_expected: false,
                inequality_low_violation: Some(low),
                inequality_high_excess: Some(high),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Frame;
    use approx::assert_relative_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_state(rng: &mut impl Rng, n: usize) -> Vec<C64> {
        let mut v: Vec<C64> = (0..n)
            .map(|_| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        for x in &mut v {
            *x /= norm;
        }
        v
    }

    fn pure_density(psi: &[C64]) -> TwoQubitDensityMatrix {
        let m = Matrix4::from_fn(|i, j| psi[i] * psi[j].conj());
        TwoQubitDensityMatrix::from_matrix(m).unwrap()
    }

    #[test]
    fn bell_corner_x_state_is_maximally_entangled() {
        let mut m = Matrix4::zeros();
        m[(0, 0)] = c(0.5, 0.0);
        m[(3, 3)] = c(0.5, 0.0);
        m[(0, 3)] = c(0.5, 0.0);
        m[(3, 0)] = c(0.5, 0.0);
        let rho = TwoQubitDensityMatrix::from_matrix(m).unwrap();
        assert!(rho.is_x_form());
        assert_relative_eq!(x_state_concurrence(&rho).unwrap(), 1.0);
        assert_relative_eq!(wootters_concurrence(&rho).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn wootters_matches_pure_state_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let psi = random_state(&mut rng, 4);
            let rho = pure_density(&psi);
            let direct = 2.0 * (psi[0] * psi[3] - psi[1] * psi[2]).norm();
            let w = wootters_concurrence(&rho).unwrap();
            assert!((w - direct).abs() < 1e-13, "w={w} direct={direct}");
        }
    }

    #[test]
    fn x_fast_path_agrees_with_wootters() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..300 {
            // random PSD X matrix: diagonal probabilities plus corners bounded
            // by the geometric means
            let mut d: Vec<f64> = (0..4).map(|_| rng.gen::<f64>()).collect();
            let s: f64 = d.iter().sum();
            for x in &mut d {
                *x /= s;
            }
            let zmag = rng.gen::<f64>() * (d[0] * d[3]).sqrt();
            let wmag = rng.gen::<f64>() * (d[1] * d[2]).sqrt();
            let zph = rng.gen::<f64>() * std::f64::consts::TAU;
            let wph = rng.gen::<f64>() * std::f64::consts::TAU;
            let mut m = Matrix4::zeros();
            for i in 0..4 {
                m[(i, i)] = c(d[i], 0.0);
            }
            m[(0, 3)] = C64::from_polar(zmag, zph);
            m[(3, 0)] = m[(0, 3)].conj();
            m[(1, 2)] = C64::from_polar(wmag, wph);
            m[(2, 1)] = m[(1, 2)].conj();
            let rho = TwoQubitDensityMatrix::from_matrix(m).unwrap();
            let fast = x_state_concurrence(&rho).unwrap();
            let slow = wootters_concurrence(&rho).unwrap();
            assert!((fast - slow).abs() < 1e-10, "fast={fast} slow={slow}");
        }
    }

    #[test]
    fn non_x_matrix_is_rejected_by_fast_path() {
        let psi = [c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0)];
        let rho = pure_density(&psi);
        assert!(!rho.is_x_form());
        assert!(matches!(x_state_concurrence(&rho), Err(Error::NotXForm)));
        // Wootters still works: product state => zero concurrence.
        assert!(wootters_concurrence(&rho).unwrap() < 1e-12);
    }

    #[test]
    fn single_excitation_bell_values_at_t0() {
        let alpha = 0.6_f64;
        let spec = crate::model::InitialStateSpec::bell_psi(alpha, 0.3);
        let d =
            crate::model::build_initial_state(&spec, ManifoldBasis::SingleExcitation).unwrap();
        let pc = pairwise_concurrences_single(&d).unwrap();
        let c12 = 2.0 * alpha.sin() * alpha.cos();
        assert_relative_eq!(pc.get(PairLabel::AtomAtom), c12, epsilon = 1e-14);
        assert_eq!(pc.get(PairLabel::CavCav), 0.0);
        assert_eq!(pc.get(PairLabel::AtomACavA), 0.0);
        assert_relative_eq!(pc.sspc(), c12 * c12, epsilon = 1e-14);
    }

    #[test]
    fn double_excitation_bell_values_at_t0() {
        let alpha = std::f64::consts::FRAC_PI_6;
        let spec = crate::model::InitialStateSpec::bell_phi(alpha, 0.7);
        let d = crate::model::build_initial_state(&spec, ManifoldBasis::TwoExcitationWithGround)
            .unwrap();
        let pc = pairwise_concurrences_double(&d).unwrap();
        let c12 = 2.0 * alpha.sin() * alpha.cos();
        assert_relative_eq!(pc.get(PairLabel::AtomAtom), c12, epsilon = 1e-14);
        assert_relative_eq!(pc.get(PairLabel::CavCav), 0.0);
        assert_eq!(pc.get(PairLabel::AtomACavA), 0.0);
    }

    #[test]
    fn shallow_bell_phi_mixture_kills_all_nonlocal_pairs() {
        // d1..d4 = cos(a)/2 uniformly, d0 = sin(a): every nonlocal coherence
        // is beaten by its competing populations exactly when tan(a) < 1/2.
        let alpha = 0.4_f64.atan();
        let ca = alpha.cos();
        let vals = vec![
            c(0.5 * ca, 0.0),
            c(0.5 * ca, 0.0),
            c(0.5 * ca, 0.0),
            c(0.5 * ca, 0.0),
            c(alpha.sin(), 0.0),
        ];
        let d = AmplitudeVector::new(ManifoldBasis::TwoExcitationWithGround, vals, Frame::Rotating)
            .unwrap();
        let pc = pairwise_concurrences_double(&d).unwrap();
        for p in PairLabel::NONLOCAL {
            assert_eq!(pc.get(p), 0.0, "{p}");
        }
        // while the local pairs stay entangled
        assert_relative_eq!(pc.get(PairLabel::AtomACavA), ca * ca, epsilon = 1e-14);
        assert_relative_eq!(pc.get(PairLabel::AtomBCavB), ca * ca, epsilon = 1e-14);
    }

    #[test]
    fn clamp_policy() {
        assert_eq!(clamp_concurrence(-5e-11).unwrap(), 0.0);
        assert_eq!(clamp_concurrence(1.0 + 5e-11).unwrap(), 1.0);
        assert_eq!(clamp_concurrence(0.4).unwrap(), 0.4);
        assert!(clamp_concurrence(-1e-9).is_err());
        assert!(clamp_concurrence(1.0 + 1e-9).is_err());
    }

    #[test]
    fn rule_report_flags_single_excitation_conservation() {
        let spec = crate::model::InitialStateSpec::bell_psi(std::f64::consts::FRAC_PI_4, 0.0);
        let d =
            crate::model::build_initial_state(&spec, ManifoldBasis::SingleExcitation).unwrap();
        let pc = pairwise_concurrences_single(&d).unwrap();
        let series = ConcurrenceSeries::from_samples(vec![0.0], &[pc]);
        let regime = SeriesRegime {
            manifold_excitation: 1,
            c12: 1.0,
            equal_couplings: true,
            equal_detunings: true,
            bell_psi: true,
            omega_max: 1.0,
        };
        let report = check_rules(&series, &regime);
        assert!(report.sum_rule_expected);
        assert!(report.sspc_deviation.unwrap() < 1e-12);
        assert!(report.sum_rule_deviation.unwrap() < 1e-12);
        assert!(report.inequality_low_violation.is_none());
    }

    #[test]
    fn density_matrix_validation_rejects_garbage() {
        let mut m: Matrix4<C64> = Matrix4::zeros();
        m[(0, 0)] = c(1.0, 0.0);
        m[(0, 1)] = c(0.3, 0.0); // not Hermitian
        assert!(TwoQubitDensityMatrix::from_matrix(m).is_err());

        let mut m: Matrix4<C64> = Matrix4::zeros();
        m[(0, 0)] = c(0.7, 0.0);
        assert!(TwoQubitDensityMatrix::from_matrix(m).is_err()); // trace != 1

        let mut m: Matrix4<C64> = Matrix4::zeros();
        m[(0, 0)] = c(1.5, 0.0);
        m[(1, 1)] = c(-0.5, 0.0); // negative eigenvalue
        assert!(TwoQubitDensityMatrix::from_matrix(m).is_err());
    }
}
