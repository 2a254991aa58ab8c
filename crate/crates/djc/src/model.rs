//! System parameters, excitation manifolds and initial states.
//!
//! Two two-level atoms (A, B) sit in separate single-mode cavities (a, b).
//! Atom A exchanges excitation only with mode a (coupling `g1`), atom B only
//! with mode b (coupling `g2`); the two subsystems never interact. Under the
//! rotating-wave approximation the total excitation number is conserved, so
//! the dynamics splits into small invariant manifolds which this module
//! enumerates explicitly.
//!
//! Conventions, fixed once here and relied on everywhere else:
//! * detunings are defined by `2 * delta_j = omega0 - omega_j`;
//! * times at public interfaces are dimensionless, `tbar = gbar * t`, with
//!   `gbar = (g1 + g2) / 2`;
//! * basis label strings use `u`/`d` for atomic up/down and digits for Fock
//!   occupation, e.g. `ud01` = atom A up, atom B down, mode a empty, mode b
//!   with one photon.

use std::fmt;

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Tolerance on `|sum |d|^2 - 1|` accepted by [`AmplitudeVector::new`] before
/// exact renormalization is applied (custom input) or an error is raised.
pub const NORM_GATE: f64 = 1e-9;

// ---------------------------------------------------------------------------
// parameters
// ---------------------------------------------------------------------------

/// Frequencies and couplings of the two atom-cavity subsystems.
///
/// `omega0` is the common atomic transition frequency, `omega1`/`omega2` the
/// cavity mode frequencies and `g1`/`g2` the atom-mode couplings. Detunings
/// follow `2 * delta_j = omega0 - omega_j` and are stored at construction so
/// that parameter sets built from detunings report them exactly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SystemParams {
    omega0: f64,
    omega1: f64,
    omega2: f64,
    delta1: f64,
    delta2: f64,
    g1: f64,
    g2: f64,
}

fn check_finite(pairs: &[(&str, f64)]) -> Result<()> {
    for (name, v) in pairs {
        if !v.is_finite() {
            return Err(Error::NonFiniteInput(format!("{name} = {v}")));
        }
    }
    Ok(())
}

impl SystemParams {
    /// Build from explicit cavity frequencies; detunings are derived.
    pub fn new(omega0: f64, omega1: f64, omega2: f64, g1: f64, g2: f64) -> Result<Self> {
        check_finite(&[
            ("omega0", omega0),
            ("omega1", omega1),
            ("omega2", omega2),
            ("g1", g1),
            ("g2", g2),
        ])?;
        if g1 < 0.0 || g2 < 0.0 {
            return Err(Error::NegativeCoupling { g1, g2 });
        }
        if g1 == 0.0 && g2 == 0.0 {
            return Err(Error::ZeroCouplings);
        }
        Ok(Self {
            omega0,
            omega1,
            omega2,
            delta1: (omega0 - omega1) / 2.0,
            delta2: (omega0 - omega2) / 2.0,
            g1,
            g2,
        })
    }

    /// Build from detunings; cavity frequencies are back-computed as
    /// `omega_j = omega0 - 2 * delta_j`.
    pub fn from_detunings(omega0: f64, delta1: f64, delta2: f64, g1: f64, g2: f64) -> Result<Self> {
        check_finite(&[
            ("omega0", omega0),
            ("delta1", delta1),
            ("delta2", delta2),
            ("g1", g1),
            ("g2", g2),
        ])?;
        if g1 < 0.0 || g2 < 0.0 {
            return Err(Error::NegativeCoupling { g1, g2 });
        }
        if g1 == 0.0 && g2 == 0.0 {
            return Err(Error::ZeroCouplings);
        }
        Ok(Self {
            omega0,
            omega1: omega0 - 2.0 * delta1,
            omega2: omega0 - 2.0 * delta2,
            delta1,
            delta2,
            g1,
            g2,
        })
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }
    pub fn omega1(&self) -> f64 {
        self.omega1
    }
    pub fn omega2(&self) -> f64 {
        self.omega2
    }
    pub fn delta1(&self) -> f64 {
        self.delta1
    }
    pub fn delta2(&self) -> f64 {
        self.delta2
    }
    pub fn g1(&self) -> f64 {
        self.g1
    }
    pub fn g2(&self) -> f64 {
        self.g2
    }

    /// Mean coupling `(g1 + g2) / 2`; the unit of inverse time.
    pub fn gbar(&self) -> f64 {
        (self.g1 + self.g2) / 2.0
    }

    /// Coupling asymmetry `(g1 - g2) / 2`.
    pub fn u(&self) -> f64 {
        (self.g1 - self.g2) / 2.0
    }

    /// Exact resonance on both cavities.
    pub fn is_resonant(&self) -> bool {
        self.delta1 == 0.0 && self.delta2 == 0.0
    }

    /// Equal couplings.
    pub fn has_equal_couplings(&self) -> bool {
        self.g1 == self.g2
    }

    /// Equal detunings (not necessarily zero).
    pub fn has_equal_detunings(&self) -> bool {
        self.delta1 == self.delta2
    }
}

/// Frequencies derived from [`SystemParams`] that set every oscillation rate
/// in the closed-form propagators.
///
/// All `omega_*` fields are dimensionless (rates per unit `tbar = gbar * t`)
/// except `omega_detuned`, which is in the raw units of the couplings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedRabi {
    /// Mean coupling `(g1 + g2) / 2`.
    pub gbar: f64,
    /// Coupling asymmetry `(g1 - g2) / 2`.
    pub u: f64,
    /// `delta / gbar` when both detunings are equal, else `None`.
    pub delta_ratio: Option<f64>,
    /// `(1 + delta_ratio^2)^(1/2)`: single-excitation oscillation rate for
    /// equal detunings, in units of `gbar`.
    pub omega_single: Option<f64>,
    /// `2 * (1 + delta_ratio^2)^(1/2)`: two-excitation oscillation rate for
    /// equal couplings and detunings, in units of `gbar`.
    pub omega_double: Option<f64>,
    /// `g1 / gbar = 1 + u / gbar`.
    pub omega1_dimless: f64,
    /// `g2 / gbar = 1 - u / gbar`.
    pub omega2_dimless: f64,
    /// Detuned Rabi frequencies `(g_j^2 + delta_j^2)^(1/2)`, raw units.
    pub omega_detuned: [f64; 2],
}

impl DerivedRabi {
    pub fn from_params(p: &SystemParams) -> Self {
        let gbar = p.gbar();
        let u = p.u();
        let delta_ratio = if p.has_equal_detunings() {
            Some(p.delta1() / gbar)
        } else {
            None
        };
        let omega_single = delta_ratio.map(|d| (1.0 + d * d).sqrt());
        Self {
            gbar,
            u,
            delta_ratio,
            omega_single,
            omega_double: omega_single.map(|o| 2.0 * o),
            omega1_dimless: 1.0 + u / gbar,
            omega2_dimless: 1.0 - u / gbar,
            omega_detuned: [
                (p.g1() * p.g1() + p.delta1() * p.delta1()).sqrt(),
                (p.g2() * p.g2() + p.delta2() * p.delta2()).sqrt(),
            ],
        }
    }
}

// ---------------------------------------------------------------------------
// manifolds
// ---------------------------------------------------------------------------

/// The invariant manifolds on which closed-form evolution is available.
///
/// Label order is part of the public contract; amplitude vectors index into
/// these lists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ManifoldBasis {
    /// `ud00, du00, dd10, dd01` (one excitation total).
    SingleExcitation,
    /// `uu00, ud01, du10, dd11` (two excitations, one per subsystem).
    TwoExcitationCore,
    /// The core labels plus the decoupled ground `dd00`, ground last.
    TwoExcitationWithGround,
    /// `ud10, dd20`: both excitations inside subsystem 1.
    SingleSitePairA,
    /// `du01, dd02`: both excitations inside subsystem 2.
    SingleSitePairB,
}

impl ManifoldBasis {
    pub const ALL: [ManifoldBasis; 5] = [
        ManifoldBasis::SingleExcitation,
        ManifoldBasis::TwoExcitationCore,
        ManifoldBasis::TwoExcitationWithGround,
        ManifoldBasis::SingleSitePairA,
        ManifoldBasis::SingleSitePairB,
    ];

    pub fn dim(&self) -> usize {
        match self {
            ManifoldBasis::SingleExcitation | ManifoldBasis::TwoExcitationCore => 4,
            ManifoldBasis::TwoExcitationWithGround => 5,
            ManifoldBasis::SingleSitePairA | ManifoldBasis::SingleSitePairB => 2,
        }
    }

    /// Basis ket labels in storage order (`u`/`d` atoms, Fock digits).
    pub fn labels(&self) -> &'static [&'static str] {
        match self {
            ManifoldBasis::SingleExcitation => &["ud00", "du00", "dd10", "dd01"],
            ManifoldBasis::TwoExcitationCore => &["uu00", "ud01", "du10", "dd11"],
            ManifoldBasis::TwoExcitationWithGround => &["uu00", "ud01", "du10", "dd11", "dd00"],
            ManifoldBasis::SingleSitePairA => &["ud10", "dd20"],
            ManifoldBasis::SingleSitePairB => &["du01", "dd02"],
        }
    }

    /// Total excitation number shared by every ket of the manifold.
    pub fn excitation(&self) -> usize {
        match self {
            ManifoldBasis::SingleExcitation => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for ManifoldBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ManifoldBasis::SingleExcitation => "single-excitation",
            ManifoldBasis::TwoExcitationCore => "two-excitation-core",
            ManifoldBasis::TwoExcitationWithGround => "two-excitation-with-ground",
            ManifoldBasis::SingleSitePairA => "single-site-pair-a",
            ManifoldBasis::SingleSitePairB => "single-site-pair-b",
        };
        f.write_str(s)
    }
}

/// Whether fast optical phases have been factored out of an amplitude vector.
///
/// Moduli (and therefore all concurrences) are identical in both frames; the
/// frames differ by phase factors of the form `exp(-i (omega1 + omega2) t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Frame {
    Lab,
    Rotating,
}

/// Complex amplitudes on one of the invariant manifolds.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeVector {
    basis: ManifoldBasis,
    frame: Frame,
    values: Vec<C64>,
}

impl AmplitudeVector {
    /// Wrap amplitudes that are already normalized (to within [`NORM_GATE`]).
    /// The vector is stored as given; no renormalization is applied.
    pub fn new(basis: ManifoldBasis, values: Vec<C64>, frame: Frame) -> Result<Self> {
        if values.len() != basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                found: values.len(),
            });
        }
        for v in &values {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::NonFiniteInput(format!("amplitude {v}")));
            }
        }
        let dev = (values.iter().map(|c| c.norm_sqr()).sum::<f64>() - 1.0).abs();
        if dev > NORM_GATE {
            return Err(Error::UnnormalizedCustomInput { deviation: dev });
        }
        Ok(Self {
            basis,
            frame,
            values,
        })
    }

    /// Wrap amplitudes within [`NORM_GATE`] of unit norm, then renormalize
    /// them exactly. Used for user-supplied custom states.
    pub fn new_renormalized(basis: ManifoldBasis, values: Vec<C64>, frame: Frame) -> Result<Self> {
        let mut v = Self::new(basis, values, frame)?;
        let norm = v.norm_sqr().sqrt();
        for a in &mut v.values {
            *a /= norm;
        }
        Ok(v)
    }

    pub fn basis(&self) -> ManifoldBasis {
        self.basis
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    /// `sum |d_j|^2`.
    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `|d_j|` for each component, in basis order.
    pub fn moduli(&self) -> Vec<f64> {
        self.values.iter().map(|c| c.norm()).collect()
    }

    /// Lift a core two-excitation vector to the with-ground manifold by
    /// appending a zero ground amplitude; other bases pass through unchanged.
    pub fn with_ground(self) -> Result<Self> {
        match self.basis {
            ManifoldBasis::TwoExcitationCore => {
                let mut values = self.values;
                values.push(C64::new(0.0, 0.0));
                Ok(Self {
                    basis: ManifoldBasis::TwoExcitationWithGround,
                    frame: self.frame,
                    values,
                })
            }
            _ => Ok(self),
        }
    }

    /// Error unless the vector lives on `expected`.
    pub fn expect_basis(&self, expected: ManifoldBasis) -> Result<()> {
        if self.basis != expected {
            return Err(Error::WrongBasis {
                expected: expected.to_string(),
                found: self.basis.to_string(),
            });
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// initial states
// ---------------------------------------------------------------------------

/// Named families of initial states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Preset {
    /// `cos(a) ud00 + e^{ib} sin(a) du00`: one shared excitation between the
    /// atoms.
    BellPsi,
    /// `cos(a) uu00 + e^{it} sin(a) dd00`: doubly-excited plus ground.
    BellPhi,
    /// Single excitation spread evenly over all four modes,
    /// `(ud00 + du00 + e^{i theta} dd10 - e^{i phi} dd01) / 2`.
    DelocalizedPsi0,
    /// `((uu00 + dd11)/sqrt(2) + dd00)/sqrt(2)`.
    SymTwoPlusGround,
    /// `((uu00 - dd11)/sqrt(2) + dd00)/sqrt(2)`.
    AntisymTwoPlusGround,
    /// `(du10 + dd00)/sqrt(2)`: excited cavity a + excited atom B, no
    /// atom-atom entanglement at t = 0.
    Lambda,
    /// Bare doubly-excited product state `uu00`.
    BareUpUp,
    /// Explicit amplitude list on a caller-chosen basis.
    Custom,
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Preset::BellPsi => "bell-psi",
            Preset::BellPhi => "bell-phi",
            Preset::DelocalizedPsi0 => "delocalized-psi0",
            Preset::SymTwoPlusGround => "sym-two-plus-ground",
            Preset::AntisymTwoPlusGround => "antisym-two-plus-ground",
            Preset::Lambda => "lambda",
            Preset::BareUpUp => "bare-up-up",
            Preset::Custom => "custom",
        };
        f.write_str(s)
    }
}

/// A preset plus its angle parameters.
///
/// `alpha` controls the population split of the Bell-type presets, `beta` the
/// relative phase of `BellPsi`, `theta`/`phi` the phases of `BellPhi` and
/// `DelocalizedPsi0`. Angles are radians. `DelocalizedPsi0` defaults to
/// `phi = pi` (uniform signs), the member of its family whose entanglement is
/// frozen at resonance *and* pumped to a maximum by detunings
/// `delta_j = g_j`; all other presets default every phase to 0.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialStateSpec {
    pub preset: Preset,
    pub alpha: f64,
    pub beta: f64,
    pub theta: f64,
    pub phi: f64,
    pub custom: Option<CustomState>,
}

/// Amplitudes for [`Preset::Custom`].
#[derive(Debug, Clone, PartialEq)]
pub struct CustomState {
    pub basis: ManifoldBasis,
    pub values: Vec<C64>,
}

impl InitialStateSpec {
    fn base(preset: Preset) -> Self {
        Self {
            preset,
            alpha: std::f64::consts::FRAC_PI_4,
            beta: 0.0,
            theta: 0.0,
            phi: 0.0,
            custom: None,
        }
    }

    pub fn bell_psi(alpha: f64, beta: f64) -> Self {
        Self {
            alpha,
            beta,
            ..Self::base(Preset::BellPsi)
        }
    }

    pub fn bell_phi(alpha: f64, theta: f64) -> Self {
        Self {
            alpha,
            theta,
            ..Self::base(Preset::BellPhi)
        }
    }

    /// Default phases `(theta, phi) = (0, pi)`; see the type-level docs.
    pub fn delocalized_psi0() -> Self {
        Self::delocalized_psi0_with_phases(0.0, std::f64::consts::PI)
    }

    pub fn delocalized_psi0_with_phases(theta: f64, phi: f64) -> Self {
        Self {
            theta,
            phi,
            ..Self::base(Preset::DelocalizedPsi0)
        }
    }

    pub fn sym_two_plus_ground() -> Self {
        Self::base(Preset::SymTwoPlusGround)
    }

    pub fn antisym_two_plus_ground() -> Self {
        Self::base(Preset::AntisymTwoPlusGround)
    }

    pub fn lambda() -> Self {
        Self::base(Preset::Lambda)
    }

    pub fn bare_up_up() -> Self {
        Self::base(Preset::BareUpUp)
    }

    pub fn custom(basis: ManifoldBasis, values: Vec<C64>) -> Self {
        Self {
            custom: Some(CustomState { basis, values }),
            ..Self::base(Preset::Custom)
        }
    }

    /// The manifold a preset naturally lives on.
    pub fn default_basis(&self) -> ManifoldBasis {
        match self.preset {
            Preset::BellPsi | Preset::DelocalizedPsi0 => ManifoldBasis::SingleExcitation,
            Preset::BellPhi
            | Preset::SymTwoPlusGround
            | Preset::AntisymTwoPlusGround
            | Preset::Lambda
            | Preset::BareUpUp => ManifoldBasis::TwoExcitationWithGround,
            Preset::Custom => self
                .custom
                .as_ref()
                .map(|c| c.basis)
                .unwrap_or(ManifoldBasis::SingleExcitation),
        }
    }
}

/// Realize an initial-state spec as amplitudes on `basis`.
///
/// Presets are only defined on their home manifold
/// ([`Error::PresetBasisMismatch`] otherwise); custom amplitudes must match
/// the basis dimension and be normalized to within 1e-9 (exact
/// renormalization is then applied).
pub fn build_initial_state(spec: &InitialStateSpec, basis: ManifoldBasis) -> Result<AmplitudeVector> {
    check_finite(&[
        ("alpha", spec.alpha),
        ("beta", spec.beta),
        ("theta", spec.theta),
        ("phi", spec.phi),
    ])?;
    let mismatch = || Error::PresetBasisMismatch {
        preset: spec.preset.to_string(),
        basis: basis.to_string(),
    };
    let phase = |t: f64| C64::from_polar(1.0, t);
    let (ca, sa) = (spec.alpha.cos(), spec.alpha.sin());
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let values: Vec<C64> = match spec.preset {
        Preset::BellPsi => {
            if basis != ManifoldBasis::SingleExcitation {
                return Err(mismatch());
            }
            vec![one * ca, phase(spec.beta) * sa, zero, zero]
        }
        Preset::DelocalizedPsi0 => {
            if basis != ManifoldBasis::SingleExcitation {
                return Err(mismatch());
            }
            vec![
                C64::new(0.5, 0.0),
                C64::new(0.5, 0.0),
                phase(spec.theta) * 0.5,
                phase(spec.phi) * -0.5,
            ]
        }
        Preset::BellPhi => {
            if basis != ManifoldBasis::TwoExcitationWithGround {
                return Err(mismatch());
            }
            vec![one * ca, zero, zero, zero, phase(spec.theta) * sa]
        }
        Preset::SymTwoPlusGround | Preset::AntisymTwoPlusGround => {
            if basis != ManifoldBasis::TwoExcitationWithGround {
                return Err(mismatch());
            }
            let sign = if spec.preset == Preset::SymTwoPlusGround {
                0.5
            } else {
                -0.5
            };
            vec![
                C64::new(0.5, 0.0),
                zero,
                zero,
                C64::new(sign, 0.0),
                C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            ]
        }
        Preset::Lambda => {
            if basis != ManifoldBasis::TwoExcitationWithGround {
                return Err(mismatch());
            }
            let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            vec![zero, zero, h, zero, h]
        }
        Preset::BareUpUp => {
            if basis != ManifoldBasis::TwoExcitationWithGround {
                return Err(mismatch());
            }
            vec![one, zero, zero, zero, zero]
        }
        Preset::Custom => {
            let c = spec.custom.as_ref().ok_or_else(|| {
                Error::InvalidConfig("custom preset without amplitude list".into())
            })?;
            if c.basis != basis {
                return Err(mismatch());
            }
            return AmplitudeVector::new_renormalized(basis, c.values.clone(), Frame::Rotating);
        }
    };
    AmplitudeVector::new_renormalized(basis, values, Frame::Rotating)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn detunings_follow_frequency_convention() {
        let p = SystemParams::new(10.0, 9.0, 12.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(p.delta1(), 0.5);
        assert_relative_eq!(p.delta2(), -1.0);
        let q = SystemParams::from_detunings(10.0, 0.5, -1.0, 1.0, 1.0).unwrap();
        assert_eq!(q.omega1(), 9.0);
        assert_eq!(q.omega2(), 12.0);
        assert_eq!(q.delta1(), 0.5);
    }

    #[test]
    fn derived_rates_for_two_to_one_couplings() {
        let p = SystemParams::from_detunings(10.0, 0.0, 0.0, 2.0, 1.0).unwrap();
        let d = DerivedRabi::from_params(&p);
        assert_relative_eq!(d.gbar, 1.5);
        assert_relative_eq!(d.u, 0.5);
        assert_relative_eq!(d.omega1_dimless, 4.0 / 3.0, max_relative = 1e-15);
        assert_relative_eq!(d.omega2_dimless, 2.0 / 3.0, max_relative = 1e-15);
        assert_eq!(d.delta_ratio, Some(0.0));
        assert_eq!(d.omega_single, Some(1.0));
        assert_eq!(d.omega_double, Some(2.0));
        assert_relative_eq!(d.omega_detuned[0], 2.0);
    }

    #[test]
    fn dimensionless_rates_sum_to_two_exactly() {
        // (1 + x) + (1 - x) rounds to exactly 2.0 for |x| < 1: each addend
        // carries at most half an ulp of error and their sum stays within
        // half an ulp of 2.
        for (g1, g2) in [(2.0, 1.0), (3.7, 1.0), (1.0, 1.0), (0.3, 2.9), (5.0, 0.01)] {
            let p = SystemParams::from_detunings(10.0, 0.0, 0.0, g1, g2).unwrap();
            let d = DerivedRabi::from_params(&p);
            assert_eq!(d.omega1_dimless + d.omega2_dimless, 2.0);
        }
    }

    #[test]
    fn detuned_rabi_dominates_coupling_and_detuning() {
        let p = SystemParams::from_detunings(10.0, 0.7, -1.3, 0.9, 1.4).unwrap();
        let d = DerivedRabi::from_params(&p);
        assert!(d.omega_detuned[0] >= p.g1() && d.omega_detuned[0] >= p.delta1().abs());
        assert!(d.omega_detuned[1] >= p.g2() && d.omega_detuned[1] >= p.delta2().abs());
        assert!(d.delta_ratio.is_none());
    }

    #[test]
    fn rejects_bad_couplings() {
        assert!(matches!(
            SystemParams::new(1.0, 1.0, 1.0, -0.5, 1.0),
            Err(Error::NegativeCoupling { .. })
        ));
        assert!(matches!(
            SystemParams::new(1.0, 1.0, 1.0, 0.0, 0.0),
            Err(Error::ZeroCouplings)
        ));
        assert!(matches!(
            SystemParams::new(f64::NAN, 1.0, 1.0, 1.0, 1.0),
            Err(Error::NonFiniteInput(_))
        ));
    }

    #[test]
    fn manifold_labels_are_frozen() {
        assert_eq!(
            ManifoldBasis::SingleExcitation.labels(),
            ["ud00", "du00", "dd10", "dd01"]
        );
        assert_eq!(
            ManifoldBasis::TwoExcitationWithGround.labels(),
            ["uu00", "ud01", "du10", "dd11", "dd00"]
        );
        assert_eq!(ManifoldBasis::SingleSitePairA.labels(), ["ud10", "dd20"]);
        assert_eq!(ManifoldBasis::SingleSitePairB.labels(), ["du01", "dd02"]);
        for b in ManifoldBasis::ALL {
            assert_eq!(b.labels().len(), b.dim());
        }
    }

    #[test]
    fn presets_are_normalized() {
        let specs = [
            InitialStateSpec::bell_psi(0.3, 1.1),
            InitialStateSpec::bell_phi(1.2, -0.4),
            InitialStateSpec::delocalized_psi0(),
            InitialStateSpec::delocalized_psi0_with_phases(0.7, 2.2),
            InitialStateSpec::sym_two_plus_ground(),
            InitialStateSpec::antisym_two_plus_ground(),
            InitialStateSpec::lambda(),
            InitialStateSpec::bare_up_up(),
        ];
        for spec in specs {
            let v = build_initial_state(&spec, spec.default_basis()).unwrap();
            assert!((v.norm_sqr() - 1.0).abs() < 1e-12, "{:?}", spec.preset);
        }
    }

    #[test]
    fn bell_phi_splits_population_between_uu_and_ground() {
        let spec = InitialStateSpec::bell_phi(std::f64::consts::FRAC_PI_4, 0.0);
        let v = build_initial_state(&spec, ManifoldBasis::TwoExcitationWithGround).unwrap();
        assert_relative_eq!(v.values()[0].norm_sqr(), 0.5, max_relative = 1e-14);
        assert_relative_eq!(v.values()[4].norm_sqr(), 0.5, max_relative = 1e-14);
        assert_eq!(v.values()[1], C64::new(0.0, 0.0));
    }

    #[test]
    fn lambda_excites_cavity_a_and_atom_b() {
        let v = build_initial_state(
            &InitialStateSpec::lambda(),
            ManifoldBasis::TwoExcitationWithGround,
        )
        .unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_relative_eq!(v.values()[2].re, h);
        assert_relative_eq!(v.values()[4].re, h);
        assert_eq!(v.values()[0], C64::new(0.0, 0.0));
    }

    #[test]
    fn delocalized_default_has_uniform_amplitudes() {
        let v = build_initial_state(
            &InitialStateSpec::delocalized_psi0(),
            ManifoldBasis::SingleExcitation,
        )
        .unwrap();
        for a in v.values() {
            assert_relative_eq!(a.re, 0.5, epsilon = 1e-15);
            assert!(a.im.abs() < 1e-15);
        }
    }

    #[test]
    fn preset_basis_mismatch_is_rejected() {
        let spec = InitialStateSpec::bell_psi(0.5, 0.0);
        assert!(matches!(
            build_initial_state(&spec, ManifoldBasis::TwoExcitationWithGround),
            Err(Error::PresetBasisMismatch { .. })
        ));
    }

    #[test]
    fn custom_amplitudes_gate_then_renormalize() {
        let vals = vec![
            C64::new(0.6, 0.0),
            C64::new(0.0, 0.8),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
        ];
        let spec = InitialStateSpec::custom(ManifoldBasis::SingleExcitation, vals);
        let v = build_initial_state(&spec, ManifoldBasis::SingleExcitation).unwrap();
        assert_relative_eq!(v.norm_sqr(), 1.0, epsilon = 1e-15);

        let off = vec![
            C64::new(0.7, 0.0),
            C64::new(0.0, 0.8),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
        ];
        let spec = InitialStateSpec::custom(ManifoldBasis::SingleExcitation, off);
        assert!(matches!(
            build_initial_state(&spec, ManifoldBasis::SingleExcitation),
            Err(Error::UnnormalizedCustomInput { .. })
        ));
    }

    #[test]
    fn with_ground_lifts_core_states() {
        let vals = vec![
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
        ];
        let v = AmplitudeVector::new(ManifoldBasis::TwoExcitationCore, vals, Frame::Rotating)
            .unwrap()
            .with_ground()
            .unwrap();
        assert_eq!(v.basis(), ManifoldBasis::TwoExcitationWithGround);
        assert_eq!(v.values().len(), 5);
        assert_eq!(v.values()[4], C64::new(0.0, 0.0));
    }
}
