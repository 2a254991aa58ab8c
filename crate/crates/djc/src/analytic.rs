//! Closed-form propagators for the conserved-excitation manifolds.
//!
//! Each atom exchanges its excitation only with its own cavity, so the
//! dynamics splits into small invariant blocks that integrate in closed
//! form. All public functions take dimensionless time `tbar = gbar * t`
//! and amplitudes in the co-moving (rotating) picture; [`to_lab_frame`]
//! restores the global phases the picture removes.
//!
//! Regimes are policed, not extrapolated: a propagator valid only on
//! resonance or only for matched couplings refuses anything else.

use num_complex::Complex64 as C64;

use crate::entanglement::{clamp_concurrence, PairConcurrences, PairLabel};
use crate::error::{Error, Result};
use crate::model::{AmplitudeVector, Frame, ManifoldBasis, SystemParams};

const I: C64 = C64::new(0.0, 1.0);

/// `sin(omega t) / omega`, finite at `omega = 0`.
fn scaled_sin(omega: f64, t: f64) -> f64 {
    if omega == 0.0 {
        t
    } else {
        (omega * t).sin() / omega
    }
}

/// Propagate one atom-cavity amplitude pair `(atom, cavity)` by physical
/// time `t` under detuning `delta` and coupling `g`:
///
/// ```text
/// a(t) = e^{i delta t} { a cos(W t) - i [delta a + g b] sin(W t)/W }
/// b(t) = e^{i delta t} { b cos(W t) + i [delta b - g a] sin(W t)/W }
/// ```
///
/// with `W = sqrt(g^2 + delta^2)` the detuned vacuum Rabi frequency.
fn rotate_pair(delta: f64, g: f64, a: C64, b: C64, t: f64) -> (C64, C64) {
    let w = f64::hypot(g, delta);
    let phase = C64::from_polar(1.0, delta * t);
    let c = (w * t).cos();
    let s = scaled_sin(w, t);
    let a_t = phase * (a * c - I * (a.scale(delta) + b.scale(g)) * s);
    let b_t = phase * (b * c + I * (b.scale(delta) - a.scale(g)) * s);
    (a_t, b_t)
}

/// Exact single-excitation evolution for arbitrary couplings and
/// detunings: the `(d1, d3)` pair oscillates at site A's detuned Rabi
/// frequency, `(d2, d4)` at site B's, with no cross-talk.
pub fn evolve_single_excitation(
    params: &SystemParams,
    d: &AmplitudeVector,
    tbar: f64,
) -> Result<AmplitudeVector> {
    d.expect_basis(ManifoldBasis::SingleExcitation)?;
    let t = tbar / params.gbar();
    let v = d.values();
    let (d1, d3) = rotate_pair(params.delta1(), params.g1(), v[0], v[2], t);
    let (d2, d4) = rotate_pair(params.delta2(), params.g2(), v[1], v[3], t);
    AmplitudeVector::new(
        ManifoldBasis::SingleExcitation,
        vec![d1, d2, d3, d4],
        Frame::Rotating,
    )
}

/// All six pairwise concurrences for the maximally shared atomic
/// excitation (equal-weight Bell superposition) on resonance, any
/// couplings: products of `|cos g_j t|` and `|sin g_j t|` factors.
pub fn bell_psi_profiles_resonant(params: &SystemParams, tbar: f64) -> Result<PairConcurrences> {
    if !params.is_resonant() {
        return Err(Error::NotResonant {
            delta1: params.delta1(),
            delta2: params.delta2(),
        });
    }
    let x1 = params.g1() / params.gbar() * tbar;
    let x2 = params.g2() / params.gbar() * tbar;
    let (c1, s1) = (x1.cos().abs(), x1.sin().abs());
    let (c2, s2) = (x2.cos().abs(), x2.sin().abs());
    let mut v = [0.0; 6];
    v[PairLabel::AtomAtom.index()] = clamp_concurrence(c1 * c2)?;
    v[PairLabel::CavCav.index()] = clamp_concurrence(s1 * s2)?;
    v[PairLabel::AtomACavA.index()] = clamp_concurrence(c1 * s1)?;
    v[PairLabel::AtomBCavB.index()] = clamp_concurrence(s2 * c2)?;
    v[PairLabel::AtomACavB.index()] = clamp_concurrence(c1 * s2)?;
    v[PairLabel::CavAAtomB.index()] = clamp_concurrence(s1 * c2)?;
    Ok(PairConcurrences::new(v))
}

/// All six pairwise concurrences for the equal-weight shared atomic
/// excitation with matched couplings and a common detuning
/// `delta_ratio = Delta / g`:
///
/// ```text
/// C_AB = cos^2(W g t) + (delta_ratio / W)^2 sin^2(W g t)
/// C_ab = sin^2(W g t) / W^2
/// cross pairs = |sin(W g t)| sqrt(C_AB) / W
/// ```
///
/// with `W = sqrt(1 + delta_ratio^2)`. The detuning floor `(d/W)^2` keeps
/// the atoms entangled at all times once `delta_ratio > 0`.
pub fn bell_psi_profiles_matched(params: &SystemParams, tbar: f64) -> Result<PairConcurrences> {
    if params.g1() != params.g2() {
        return Err(Error::UnequalCouplings {
            g1: params.g1(),
            g2: params.g2(),
        });
    }
    if params.delta1() != params.delta2() {
        return Err(Error::RegimeMismatch(format!(
            "matched-detuning profiles need delta1 == delta2, got {} and {}",
            params.delta1(),
            params.delta2()
        )));
    }
    let dr = params.delta1() / params.gbar();
    let w = (1.0 + dr * dr).sqrt();
    let x = w * tbar;
    let (c2, s2) = (x.cos() * x.cos(), x.sin() * x.sin());
    let c_ab = c2 + (dr / w) * (dr / w) * s2;
    let cross = x.sin().abs() * c_ab.sqrt() / w;
    let mut v = [0.0; 6];
    v[PairLabel::AtomAtom.index()] = clamp_concurrence(c_ab)?;
    v[PairLabel::CavCav.index()] = clamp_concurrence(s2 / (w * w))?;
    v[PairLabel::AtomACavA.index()] = clamp_concurrence(cross)?;
    v[PairLabel::AtomBCavB.index()] = clamp_concurrence(cross)?;
    v[PairLabel::AtomACavB.index()] = clamp_concurrence(cross)?;
    v[PairLabel::CavAAtomB.index()] = clamp_concurrence(cross)?;
    Ok(PairConcurrences::new(v))
}

/// The two-excitation core in the symmetry-adapted combinations that
/// diagonalize the matched-parameter dynamics: sums and differences of the
/// outer (`uu00`, `dd11`) and inner (`ud01`, `du10`) amplitude pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComboAmplitudes {
    /// `d_uu00 + d_dd11`
    pub outer_sum: C64,
    /// `d_uu00 - d_dd11`
    pub outer_diff: C64,
    /// `d_ud01 + d_du10`
    pub inner_sum: C64,
    /// `d_ud01 - d_du10`
    pub inner_diff: C64,
}

impl ComboAmplitudes {
    pub fn from_core(d: &AmplitudeVector) -> Result<Self> {
        d.expect_basis(ManifoldBasis::TwoExcitationCore)?;
        Ok(Self::from_values(d.values()))
    }

    /// From the first four components of any core-ordered slice.
    fn from_values(v: &[C64]) -> Self {
        Self {
            outer_sum: v[0] + v[3],
            outer_diff: v[0] - v[3],
            inner_sum: v[1] + v[2],
            inner_diff: v[1] - v[2],
        }
    }

    fn to_values(self) -> [C64; 4] {
        [
            (self.outer_sum + self.outer_diff).scale(0.5),
            (self.inner_sum + self.inner_diff).scale(0.5),
            (self.inner_sum - self.inner_diff).scale(0.5),
            (self.outer_sum - self.outer_diff).scale(0.5),
        ]
    }

    pub fn to_core(self, frame: Frame) -> Result<AmplitudeVector> {
        AmplitudeVector::new(
            ManifoldBasis::TwoExcitationCore,
            self.to_values().to_vec(),
            frame,
        )
    }
}

/// Two-excitation evolution for matched couplings (`g1 = g2 = g`) and a
/// common detuning, including the decoupled ground amplitude. In combo
/// variables only three modes move; `inner_diff` and the ground amplitude
/// are frozen, and the detuning mixes a stationary component into the
/// oscillating ones at frequency `W g` with `W = 2 sqrt(1 + (Delta/g)^2)`.
pub fn evolve_two_excitation_matched(
    params: &SystemParams,
    d: &AmplitudeVector,
    tbar: f64,
) -> Result<AmplitudeVector> {
    d.expect_basis(ManifoldBasis::TwoExcitationWithGround)?;
    if params.g1() != params.g2() {
        return Err(Error::UnequalCouplings {
            g1: params.g1(),
            g2: params.g2(),
        });
    }
    if params.delta1() != params.delta2() {
        return Err(Error::RegimeMismatch(format!(
            "matched two-excitation propagator needs delta1 == delta2, got {} and {}",
            params.delta1(),
            params.delta2()
        )));
    }
    let v = d.values();
    let start = ComboAmplitudes::from_values(v);
    let dr = params.delta1() / params.gbar();
    let w = 2.0 * (1.0 + dr * dr).sqrt();
    let x = w * tbar;
    let (c, s) = (x.cos(), x.sin());
    let wi = 1.0 / w;
    let mixed = start.inner_sum + start.outer_diff.scale(dr);
    let outer_sum = start.outer_sum * c - I * mixed.scale(2.0 * wi * s);
    let outer_diff = (start.outer_diff - start.inner_sum.scale(dr)).scale(4.0 * wi * wi)
        + mixed.scale(4.0 * dr * wi * wi * c)
        - I * start.outer_sum.scale(2.0 * dr * wi * s);
    let inner_sum = (start.inner_sum.scale(dr) - start.outer_diff).scale(4.0 * dr * wi * wi)
        + mixed.scale(4.0 * wi * wi * c)
        - I * start.outer_sum.scale(2.0 * wi * s);
    let evolved = ComboAmplitudes {
        outer_sum,
        outer_diff,
        inner_sum,
        inner_diff: start.inner_diff,
    };
    let core = evolved.to_values();
    let mut out = core.to_vec();
    out.push(v[4]);
    AmplitudeVector::new(ManifoldBasis::TwoExcitationWithGround, out, Frame::Rotating)
}

/// Two-excitation evolution on resonance for arbitrary couplings: the
/// combo pairs `(outer_sum, inner_sum)` and `(outer_diff, inner_diff)`
/// rotate independently at `2 gbar` and `2 u` respectively, where
/// `u = (g1 - g2)/2` is the coupling asymmetry.
pub fn evolve_two_excitation_resonant(
    params: &SystemParams,
    d: &AmplitudeVector,
    tbar: f64,
) -> Result<AmplitudeVector> {
    d.expect_basis(ManifoldBasis::TwoExcitationWithGround)?;
    if !params.is_resonant() {
        return Err(Error::NotResonant {
            delta1: params.delta1(),
            delta2: params.delta2(),
        });
    }
    let v = d.values();
    let start = ComboAmplitudes::from_values(v);
    let x_sum = 2.0 * tbar;
    let x_diff = 2.0 * params.u() / params.gbar() * tbar;
    let (cs, ss) = (x_sum.cos(), x_sum.sin());
    let (cd, sd) = (x_diff.cos(), x_diff.sin());
    let evolved = ComboAmplitudes {
        outer_sum: start.outer_sum * cs - I * start.inner_sum * ss,
        inner_sum: start.inner_sum * cs - I * start.outer_sum * ss,
        outer_diff: start.outer_diff * cd + I * start.inner_diff * sd,
        inner_diff: start.inner_diff * cd + I * start.outer_diff * sd,
    };
    let core = evolved.to_values();
    let mut out = core.to_vec();
    out.push(v[4]);
    AmplitudeVector::new(ManifoldBasis::TwoExcitationWithGround, out, Frame::Rotating)
}

/// Which atom-cavity site a single-site pair lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Site {
    A,
    B,
}

impl Site {
    fn basis(self) -> ManifoldBasis {
        match self {
            Site::A => ManifoldBasis::SingleSitePairA,
            Site::B => ManifoldBasis::SingleSitePairB,
        }
    }
}

/// Evolution of one site holding an excited atom plus one photon: a
/// two-level problem between `(up, n)` and `(down, n+1)` with the
/// `sqrt(2)`-enhanced coupling of the second Fock rung,
///
/// ```text
/// kappa = sqrt(2) g,   W_p = sqrt(kappa^2 + Delta^2 / 4)
/// d5(t) = e^{i Delta t / 2} { d5 cos - i [(Delta/2) d5 + kappa d6] sin/W_p }
/// d6(t) = e^{i Delta t / 2} { d6 cos + i [(Delta/2) d6 - kappa d5] sin/W_p }
/// ```
pub fn evolve_single_site_pair(
    params: &SystemParams,
    site: Site,
    d: &AmplitudeVector,
    tbar: f64,
) -> Result<AmplitudeVector> {
    d.expect_basis(site.basis())?;
    let (g, delta) = match site {
        Site::A => (params.g1(), params.delta1()),
        Site::B => (params.g2(), params.delta2()),
    };
    let t = tbar / params.gbar();
    let kappa = std::f64::consts::SQRT_2 * g;
    let half_delta = 0.5 * delta;
    let wp = f64::hypot(kappa, half_delta);
    let phase = C64::from_polar(1.0, half_delta * t);
    let c = (wp * t).cos();
    let s = scaled_sin(wp, t);
    let v = d.values();
    let d5 = phase * (v[0] * c - I * (v[0].scale(half_delta) + v[1].scale(kappa)) * s);
    let d6 = phase * (v[1] * c + I * (v[1].scale(half_delta) - v[0].scale(kappa)) * s);
    AmplitudeVector::new(site.basis(), vec![d5, d6], Frame::Rotating)
}

/// Restore the global phases removed by the co-moving picture, producing
/// lab-frame amplitudes comparable component-by-component with the
/// brute-force reference evolution.
///
/// The single-excitation manifold rotates as a whole at the one-excitation
/// field energy; the two-excitation core at twice that; the ground
/// component keeps its own trivial phase. Single-site pair states are
/// refused: their co-moving picture is defined relative to a detuning
/// convention that has no clean lab counterpart off resonance.
pub fn to_lab_frame(params: &SystemParams, d: &AmplitudeVector, tbar: f64) -> Result<AmplitudeVector> {
    if d.frame() == Frame::Lab {
        return Err(Error::RegimeMismatch(
            "state is already in the lab frame".into(),
        ));
    }
    let t = tbar / params.gbar();
    let half_field = 0.5 * (params.omega1() + params.omega2());
    let values = d.values();
    let rotated: Vec<C64> = match d.basis() {
        ManifoldBasis::SingleExcitation => {
            let ph = C64::from_polar(1.0, -half_field * t);
            values.iter().map(|v| v * ph).collect()
        }
        ManifoldBasis::TwoExcitationCore => {
            let ph = C64::from_polar(1.0, -2.0 * half_field * t);
            values.iter().map(|v| v * ph).collect()
        }
        ManifoldBasis::TwoExcitationWithGround => {
            let core = C64::from_polar(1.0, -2.0 * half_field * t);
            let ground = C64::from_polar(1.0, -(half_field - params.omega0()) * t);
            values
                .iter()
                .enumerate()
                .map(|(i, v)| if i < 4 { v * core } else { v * ground })
                .collect()
        }
        other => {
            return Err(Error::RegimeMismatch(format!(
                "no lab-frame map for the {other} basis"
            )))
        }
    };
    AmplitudeVector::new(d.basis(), rotated, Frame::Lab)
}
