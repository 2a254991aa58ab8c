//! Named end-to-end consistency checks, runnable as one suite.
//!
//! Every check is deterministic (fixed seeds), self-contained, and returns
//! a one-line detail string. The suite cross-validates the closed forms
//! against the brute-force engine, exercises the conservation rules on
//! random states, and re-derives the headline detection results.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::{FRAC_PI_4, PI};

use crate::analysis::{certify_frozen, detect_esd, find_transfer_times};
use crate::analytic;
use crate::entanglement::{
    pairwise_concurrences_double, pairwise_concurrences_single, wootters_concurrence,
    x_state_concurrence, PairLabel,
};
use crate::model::{AmplitudeVector, Frame, InitialStateSpec, ManifoldBasis, SystemParams};
use crate::oracle::{pair_density, FullStateVector, Hamiltonian, DEFAULT_N_MAX};
use crate::series::{compute_series, Engine, SeriesSpec, TimeGrid};
use crate::C64;

type Check = fn() -> std::result::Result<String, String>;

/// Outcome of one named check.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Results of the whole suite, in declaration order.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub outcomes: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.outcomes.iter().filter(|o| !o.passed)
    }
}

const CHECKS: [(&str, Check); 14] = [
    ("oracle-structure", check_oracle_structure),
    ("single-route-agreement", check_single_route_agreement),
    ("double-route-agreement", check_double_route_agreement),
    ("site-pair-route", check_site_pair_route),
    ("squared-sum-conservation", check_squared_sum_conservation),
    ("sum-rule-regime", check_sum_rule_regime),
    ("double-inequality", check_double_inequality),
    ("core-nonlocal-zero", check_core_nonlocal_zero),
    ("concurrence-cross-check", check_concurrence_cross_check),
    ("frozen-state", check_frozen_state),
    ("transfer-parity", check_transfer_parity),
    ("death-window", check_death_window),
    ("death-reversal", check_death_reversal),
    ("x-form-structure", check_x_form_structure),
];

/// Run every named check (in parallel) and collect the outcomes.
pub fn run_all() -> VerifyReport {
    let outcomes = CHECKS
        .par_iter()
        .map(|(name, f)| match f() {
            Ok(detail) => CheckOutcome {
                name,
                passed: true,
                detail,
            },
            Err(detail) => CheckOutcome {
                name,
                passed: false,
                detail,
            },
        })
        .collect();
    VerifyReport { outcomes }
}

// ---------------------------------------------------------------------------
// shared helpers
// ---------------------------------------------------------------------------

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_params(rng: &mut impl Rng) -> SystemParams {
    let g1 = rng.gen_range(0.3..2.2);
    let g2 = rng.gen_range(0.3..2.2);
    let d1 = rng.gen_range(-1.5..1.5);
    let d2 = rng.gen_range(-1.5..1.5);
    SystemParams::from_detunings(20.0, d1, d2, g1, g2).expect("valid random parameters")
}

fn random_state(rng: &mut impl Rng, basis: ManifoldBasis) -> AmplitudeVector {
    let mut v: Vec<C64> = (0..basis.dim())
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    for c in &mut v {
        *c /= norm;
    }
    AmplitudeVector::new(basis, v, Frame::Rotating).expect("normalized state")
}

fn resonant(g1: f64, g2: f64) -> SystemParams {
    SystemParams::from_detunings(20.0, 0.0, 0.0, g1, g2).expect("valid parameters")
}

fn matched(g: f64, delta: f64) -> SystemParams {
    SystemParams::from_detunings(20.0, delta, delta, g, g).expect("valid parameters")
}

fn err<T: std::fmt::Display>(e: T) -> String {
    e.to_string()
}

// ---------------------------------------------------------------------------
// checks
// ---------------------------------------------------------------------------

/// Hermiticity, excitation conservation and unitarity of the brute-force
/// propagator on random parameters and manifold states.
fn check_oracle_structure() -> std::result::Result<String, String> {
    let mut r = rng(0xA1);
    let mut worst = 0.0_f64;
    for _ in 0..6 {
        let params = random_params(&mut r);
        let h = Hamiltonian::new(&params, DEFAULT_N_MAX);
        if h.hermiticity_deviation() != 0.0 {
            return Err("matrix not exactly hermitian".into());
        }
        if h.excitation_commutator_norm() != 0.0 {
            return Err("excitation operator does not commute exactly".into());
        }
        for basis in [
            ManifoldBasis::SingleExcitation,
            ManifoldBasis::TwoExcitationWithGround,
        ] {
            let amp = random_state(&mut r, basis);
            let psi0 = FullStateVector::from_manifold(&amp, DEFAULT_N_MAX).map_err(err)?;
            let n0 = psi0.excitation_number();
            for _ in 0..4 {
                let t = r.gen_range(0.0..15.0);
                let psi = h.evolve(&psi0, t).map_err(err)?;
                worst = worst
                    .max((psi.norm_sqr() - 1.0).abs())
                    .max((psi.excitation_number() - n0).abs());
            }
        }
    }
    if worst < 1e-12 {
        Ok(format!("max norm/excitation drift {worst:.1e}"))
    } else {
        Err(format!("norm or excitation drift {worst:.1e} >= 1e-12"))
    }
}

/// Closed-form single-excitation evolution against the brute-force engine,
/// compared amplitude by amplitude in the stationary frame.
fn check_single_route_agreement() -> std::result::Result<String, String> {
    let mut r = rng(0xB2);
    let mut worst = 0.0_f64;
    for _ in 0..8 {
        let params = random_params(&mut r);
        let d0 = random_state(&mut r, ManifoldBasis::SingleExcitation);
        let psi0 = FullStateVector::from_manifold(&d0, DEFAULT_N_MAX).map_err(err)?;
        let h = Hamiltonian::new(&params, DEFAULT_N_MAX);
        for _ in 0..4 {
            let tbar = r.gen_range(0.0..12.0);
            let rot = analytic::evolve_single_excitation(&params, &d0, tbar).map_err(err)?;
            let lab = analytic::to_lab_frame(&params, &rot, tbar).map_err(err)?;
            let psi = h.evolve(&psi0, tbar / params.gbar()).map_err(err)?;
            let (oracle, residual) = psi
                .to_manifold(ManifoldBasis::SingleExcitation)
                .map_err(err)?;
            worst = worst.max(residual);
            for (a, b) in lab.values().iter().zip(oracle.values()) {
                worst = worst.max((a - b).norm());
            }
        }
    }
    if worst < 1e-8 {
        Ok(format!("max amplitude gap {worst:.1e}"))
    } else {
        Err(format!("amplitude gap {worst:.1e} >= 1e-8"))
    }
}

/// Both two-excitation closed forms (resonant, matched-detuned) against the
/// brute-force engine.
fn check_double_route_agreement() -> std::result::Result<String, String> {
    let mut r = rng(0xC3);
    let mut worst = 0.0_f64;
    for k in 0..8 {
        let params = if k % 2 == 0 {
            resonant(r.gen_range(0.3..2.2), r.gen_range(0.3..2.2))
        } else {
            matched(r.gen_range(0.3..2.2), r.gen_range(-2.0..2.0))
        };
        let d0 = random_state(&mut r, ManifoldBasis::TwoExcitationWithGround);
        let psi0 = FullStateVector::from_manifold(&d0, DEFAULT_N_MAX).map_err(err)?;
        let h = Hamiltonian::new(&params, DEFAULT_N_MAX);
        for _ in 0..4 {
            let tbar = r.gen_range(0.0..12.0);
            let rot = if params.is_resonant() {
                analytic::evolve_two_excitation_resonant(&params, &d0, tbar).map_err(err)?
            } else {
                analytic::evolve_two_excitation_matched(&params, &d0, tbar).map_err(err)?
            };
            let lab = analytic::to_lab_frame(&params, &rot, tbar).map_err(err)?;
            let psi = h.evolve(&psi0, tbar / params.gbar()).map_err(err)?;
            let (oracle, residual) = psi
                .to_manifold(ManifoldBasis::TwoExcitationWithGround)
                .map_err(err)?;
            worst = worst.max(residual);
            for (a, b) in lab.values().iter().zip(oracle.values()) {
                worst = worst.max((a - b).norm());
            }
        }
    }
    if worst < 1e-8 {
        Ok(format!("max amplitude gap {worst:.1e}"))
    } else {
        Err(format!("amplitude gap {worst:.1e} >= 1e-8"))
    }
}

/// Two-level closed form for the one-site two-quantum pair against the
/// brute-force engine (moduli, since that manifold keeps no clean common
/// phase reference off the shared frame).
fn check_site_pair_route() -> std::result::Result<String, String> {
    let mut r = rng(0xD4);
    let mut worst = 0.0_f64;
    for _ in 0..6 {
        let params = resonant(r.gen_range(0.3..2.2), r.gen_range(0.3..2.2));
        for (site, basis) in [
            (analytic::Site::A, ManifoldBasis::SingleSitePairA),
            (analytic::Site::B, ManifoldBasis::SingleSitePairB),
        ] {
            let d0 = random_state(&mut r, basis);
            let psi0 = FullStateVector::from_manifold(&d0, DEFAULT_N_MAX).map_err(err)?;
            let h = Hamiltonian::new(&params, DEFAULT_N_MAX);
            for _ in 0..4 {
                let tbar = r.gen_range(0.0..10.0);
                let rot = analytic::evolve_single_site_pair(&params, site, &d0, tbar)
                    .map_err(err)?;
                let psi = h.evolve(&psi0, tbar / params.gbar()).map_err(err)?;
                let (oracle, residual) = psi.to_manifold(basis).map_err(err)?;
                worst = worst.max(residual);
                for (a, b) in rot.moduli().iter().zip(oracle.moduli()) {
                    worst = worst.max((a - b).abs());
                }
            }
        }
    }
    if worst < 1e-8 {
        Ok(format!("max modulus gap {worst:.1e}"))
    } else {
        Err(format!("modulus gap {worst:.1e} >= 1e-8"))
    }
}

/// The squared nonlocal concurrences sum to their initial value for every
/// single-excitation state and every parameter set.
fn check_squared_sum_conservation() -> std::result::Result<String, String> {
    let mut r = rng(0xE5);
    let mut worst = 0.0_f64;
    for _ in 0..40 {
        let params = random_params(&mut r);
        let d0 = random_state(&mut r, ManifoldBasis::SingleExcitation);
        let m = d0.moduli();
        let p1 = m[0] * m[0] + m[2] * m[2];
        let p2 = m[1] * m[1] + m[3] * m[3];
        let c12_sq = 4.0 * p1 * p2;
        for _ in 0..10 {
            let tbar = r.gen_range(0.0..4.0 * PI);
            let d = analytic::evolve_single_excitation(&params, &d0, tbar).map_err(err)?;
            let c = pairwise_concurrences_single(&d).map_err(err)?;
            worst = worst.max((c.sspc() - c12_sq).abs());
        }
    }
    if worst < 1e-10 {
        Ok(format!("max deviation {worst:.1e}"))
    } else {
        Err(format!("deviation {worst:.1e} >= 1e-10"))
    }
}

/// The plain concurrence sum C_AB + C_ab stays at its initial value exactly
/// in the equal-coupling equal-detuning shared-excitation regime, and
/// visibly breaks when the couplings differ.
fn check_sum_rule_regime() -> std::result::Result<String, String> {
    let grid = TimeGrid::new(4.0 * PI, 801).map_err(err)?;
    for delta in [0.0, 1.0, 2.0] {
        let mut spec = SeriesSpec::new(
            matched(1.0, delta),
            InitialStateSpec::bell_psi(FRAC_PI_4, 0.0),
        );
        spec.grid = grid;
        let out = compute_series(&spec).map_err(err)?;
        if !out.report.sum_rule_expected {
            return Err(format!("sum rule not recognized at delta={delta}"));
        }
        let dev = out.report.sum_rule_deviation.unwrap_or(f64::NAN);
        if dev.is_nan() || dev >= 1e-10 {
            return Err(format!("sum rule deviation {dev:.1e} at delta={delta}"));
        }
    }
    let mut spec = SeriesSpec::new(resonant(2.0, 1.0), InitialStateSpec::bell_psi(FRAC_PI_4, 0.0));
    spec.grid = grid;
    let out = compute_series(&spec).map_err(err)?;
    let dev = out.report.sum_rule_deviation.unwrap_or(0.0);
    if out.report.sum_rule_expected {
        return Err("sum rule wrongly expected for unequal couplings".into());
    }
    if dev <= 0.05 {
        return Err(format!("expected breakdown, deviation only {dev:.1e}"));
    }
    Ok(format!("holds < 1e-10 in regime; breaks by {dev:.2}"))
}

/// For two excitations the squared nonlocal sum is bounded by the initial
/// site-site entanglement squared (and by zero from below).
fn check_double_inequality() -> std::result::Result<String, String> {
    let mut r = rng(0x107);
    let grid = TimeGrid::new(2.0 * PI, 401).map_err(err)?;
    let mut worst = 0.0_f64;
    for k in 0..12 {
        let params = if k % 2 == 0 {
            resonant(r.gen_range(0.3..2.0), r.gen_range(0.3..2.0))
        } else {
            matched(r.gen_range(0.3..2.0), r.gen_range(-1.5..1.5))
        };
        let d0 = random_state(&mut r, ManifoldBasis::TwoExcitationWithGround);
        let mut spec = SeriesSpec::new(
            params,
            InitialStateSpec::custom(
                ManifoldBasis::TwoExcitationWithGround,
                d0.values().to_vec(),
            ),
        );
        spec.grid = grid;
        let out = compute_series(&spec).map_err(err)?;
        let low = out.report.inequality_low_violation.unwrap_or(f64::NAN);
        let high = out.report.inequality_high_excess.unwrap_or(f64::NAN);
        if !(low == 0.0) {
            return Err(format!("negative squared sum, violation {low:.1e}"));
        }
        worst = worst.max(high);
    }
    if worst < 1e-10 {
        Ok(format!("max excess over bound {worst:.1e}"))
    } else {
        Err(format!("excess over bound {worst:.1e} >= 1e-10"))
    }
}

/// With no doubly-ground component, every nonlocal pair is exactly
/// unentangled, at t = 0 and under evolution.
fn check_core_nonlocal_zero() -> std::result::Result<String, String> {
    let mut r = rng(0x118);
    for _ in 0..40 {
        let core = random_state(&mut r, ManifoldBasis::TwoExcitationCore);
        let d0 = core.with_ground().map_err(err)?;
        let params = resonant(r.gen_range(0.3..2.0), r.gen_range(0.3..2.0));
        for tbar in [0.0, r.gen_range(0.0..8.0)] {
            let d = analytic::evolve_two_excitation_resonant(&params, &d0, tbar).map_err(err)?;
            let c = pairwise_concurrences_double(&d).map_err(err)?;
            for pair in PairLabel::NONLOCAL {
                if c.get(pair) != 0.0 {
                    return Err(format!("nonzero {pair} = {:.1e}", c.get(pair)));
                }
            }
        }
    }
    Ok("all nonlocal pairs exactly zero on 40 states".into())
}

/// Closed-form pairwise concurrences against density-matrix concurrences of
/// the brute-force engine, for both manifolds and all six pairs.
fn check_concurrence_cross_check() -> std::result::Result<String, String> {
    let mut r = rng(0x129);
    let mut worst = 0.0_f64;
    for k in 0..6 {
        let (params, basis) = if k % 2 == 0 {
            (random_params(&mut r), ManifoldBasis::SingleExcitation)
        } else if k % 4 == 1 {
            (
                resonant(r.gen_range(0.3..2.0), r.gen_range(0.3..2.0)),
                ManifoldBasis::TwoExcitationWithGround,
            )
        } else {
            (
                matched(r.gen_range(0.3..2.0), r.gen_range(-1.5..1.5)),
                ManifoldBasis::TwoExcitationWithGround,
            )
        };
        let d0 = random_state(&mut r, basis);
        let psi0 = FullStateVector::from_manifold(&d0, DEFAULT_N_MAX).map_err(err)?;
        let h = Hamiltonian::new(&params, DEFAULT_N_MAX);
        for _ in 0..4 {
            let tbar = r.gen_range(0.0..10.0);
            let closed = if basis == ManifoldBasis::SingleExcitation {
                let d = analytic::evolve_single_excitation(&params, &d0, tbar).map_err(err)?;
                pairwise_concurrences_single(&d).map_err(err)?
            } else {
                let d = if params.is_resonant() {
                    analytic::evolve_two_excitation_resonant(&params, &d0, tbar).map_err(err)?
                } else {
                    analytic::evolve_two_excitation_matched(&params, &d0, tbar).map_err(err)?
                };
                pairwise_concurrences_double(&d).map_err(err)?
            };
            let psi = h.evolve(&psi0, tbar / params.gbar()).map_err(err)?;
            for pair in PairLabel::ALL {
                let rho = pair_density(&psi, pair).map_err(err)?;
                let c = wootters_concurrence(&rho).map_err(err)?;
                worst = worst.max((c - closed.get(pair)).abs());
            }
        }
    }
    if worst < 1e-10 {
        Ok(format!("max concurrence gap {worst:.1e}"))
    } else {
        Err(format!("concurrence gap {worst:.1e} >= 1e-10"))
    }
}

/// The phase-locked delocalized state keeps all six concurrences constant
/// at zero detuning regardless of the coupling ratio, and unfreezes with
/// detuning.
fn check_frozen_state() -> std::result::Result<String, String> {
    let mut worst = 0.0_f64;
    for ratio in [1.0, 2.0, 3.7] {
        let report = certify_frozen(
            &InitialStateSpec::delocalized_psi0(),
            &resonant(1.0, ratio),
            8.0 * PI,
            1e-10,
            Engine::Analytic,
        )
        .map_err(err)?;
        if !report.frozen {
            return Err(format!(
                "drift {:.1e} at coupling ratio {ratio}",
                report.max_drift
            ));
        }
        worst = worst.max(report.max_drift);
    }
    let detuned = SystemParams::from_detunings(20.0, 1.0, 1.0, 1.0, 1.0).map_err(err)?;
    let thawed = certify_frozen(
        &InitialStateSpec::delocalized_psi0(),
        &detuned,
        8.0 * PI,
        1e-10,
        Engine::Analytic,
    )
    .map_err(err)?;
    if thawed.frozen {
        return Err("state stayed frozen despite detuning".into());
    }
    Ok(format!("frozen drift {worst:.1e}; detuned unfreezes"))
}

/// Coupling-ratio parity steers which pair receives the full initial
/// entanglement: even ratio to an atom-field pair, odd ratio to the fields.
fn check_transfer_parity() -> std::result::Result<String, String> {
    let grid = TimeGrid::new(4.0 * PI, 9601).map_err(err)?;

    let mut spec = SeriesSpec::new(
        resonant(4.0 / 3.0, 2.0 / 3.0),
        InitialStateSpec::bell_psi(FRAC_PI_4, 0.0),
    );
    spec.grid = grid;
    let even = compute_series(&spec).map_err(err)?;
    let events =
        find_transfer_times(&even.series, &even.regime, PairLabel::AtomACavB, 1e-3).map_err(err)?;
    if !events.iter().any(|e| (e.value - 1.0).abs() < 1e-6) {
        return Err("even ratio: atom-field pair never reaches 1".into());
    }
    let cav_max = even
        .series
        .pair(PairLabel::CavCav)
        .iter()
        .fold(0.0_f64, |m, &v| m.max(v));
    if cav_max > 1.0 - 1e-3 {
        return Err(format!("even ratio: field-field pair reached {cav_max}"));
    }

    let mut spec = SeriesSpec::new(resonant(1.5, 0.5), InitialStateSpec::bell_psi(FRAC_PI_4, 0.0));
    spec.grid = grid;
    let odd = compute_series(&spec).map_err(err)?;
    let events =
        find_transfer_times(&odd.series, &odd.regime, PairLabel::CavCav, 1e-3).map_err(err)?;
    if !events.iter().any(|e| (e.value - 1.0).abs() < 1e-6) {
        return Err("odd ratio: field-field pair never reaches 1".into());
    }
    Ok("even ratio fills an atom-field pair, odd ratio the fields".into())
}

/// The shallow two-excitation superposition dies over the predicted window
/// at zero detuning, and detuning removes the death entirely.
fn check_death_window() -> std::result::Result<String, String> {
    let alpha = PI / 12.0;
    let grid = TimeGrid::new(4.0 * PI, 6401).map_err(err)?;

    let mut spec = SeriesSpec::new(resonant(1.0, 1.0), InitialStateSpec::bell_phi(alpha, 0.0));
    spec.grid = grid;
    let out = compute_series(&spec).map_err(err)?;
    let report = detect_esd(&out.series, &out.regime, PairLabel::AtomAtom, 1e-9).map_err(err)?;
    if report.intervals.len() != 4 {
        return Err(format!("expected 4 windows, found {}", report.intervals.len()));
    }
    let entry = alpha.tan().sqrt().asin();
    let h = report.grid_resolution;
    for (k, (a, b)) in report.intervals.iter().enumerate() {
        let k = k as f64;
        if (a - (entry + k * PI)).abs() > h + 1e-12 || (b - (PI - entry + k * PI)).abs() > h + 1e-12
        {
            return Err(format!("window {k} edges ({a:.4}, {b:.4}) off prediction"));
        }
    }

    let mut spec = SeriesSpec::new(matched(1.0, 2.0), InitialStateSpec::bell_phi(alpha, 0.0));
    spec.grid = grid;
    let out = compute_series(&spec).map_err(err)?;
    let detuned = detect_esd(&out.series, &out.regime, PairLabel::AtomAtom, 1e-9).map_err(err)?;
    if detuned.has_esd() {
        return Err("detuning failed to remove the death window".into());
    }
    Ok(format!(
        "4 windows matching asin(sqrt(tan a)) within {h:.1e}; removed at delta=2"
    ))
}

/// Detuning acts oppositely on the symmetric and antisymmetric
/// two-excitation superpositions: it removes the death of one and creates
/// a death for the other.
fn check_death_reversal() -> std::result::Result<String, String> {
    let grid = TimeGrid::new(4.0 * PI, 9601).map_err(err)?;
    let run = |initial: InitialStateSpec, delta: f64| -> std::result::Result<bool, String> {
        let mut spec = SeriesSpec::new(matched(1.0, delta), initial);
        spec.grid = grid;
        let out = compute_series(&spec).map_err(err)?;
        let report =
            detect_esd(&out.series, &out.regime, PairLabel::AtomAtom, 1e-9).map_err(err)?;
        Ok(report.has_esd())
    };
    if !run(InitialStateSpec::sym_two_plus_ground(), 0.0)? {
        return Err("symmetric state: no death at zero detuning".into());
    }
    if run(InitialStateSpec::sym_two_plus_ground(), 3.0)? {
        return Err("symmetric state: death survived large detuning".into());
    }
    if run(InitialStateSpec::antisym_two_plus_ground(), 0.0)? {
        return Err("antisymmetric state: death at zero detuning".into());
    }
    if !run(InitialStateSpec::antisym_two_plus_ground(), 1.0)? {
        return Err("antisymmetric state: no death at moderate detuning".into());
    }
    Ok("symmetric dies only at delta=0; antisymmetric only away from it".into())
}

/// Every reduced pair of a manifold state has the sparse two-corner
/// pattern, and the patterned shortcut agrees with the general formula.
fn check_x_form_structure() -> std::result::Result<String, String> {
    let mut r = rng(0x13A);
    let mut worst = 0.0_f64;
    for k in 0..6 {
        let params = random_params(&mut r);
        let basis = if k % 2 == 0 {
            ManifoldBasis::SingleExcitation
        } else {
            ManifoldBasis::TwoExcitationWithGround
        };
        let d0 = random_state(&mut r, basis);
        let psi0 = FullStateVector::from_manifold(&d0, DEFAULT_N_MAX).map_err(err)?;
        let h = Hamiltonian::new(&params, DEFAULT_N_MAX);
        let psi = h.evolve(&psi0, r.gen_range(0.0..10.0)).map_err(err)?;
        for pair in PairLabel::ALL {
            let rho = pair_density(&psi, pair).map_err(err)?;
            if !rho.is_x_form() {
                return Err(format!("pair {pair} lost the two-corner pattern"));
            }
            let full = wootters_concurrence(&rho).map_err(err)?;
            let shortcut = x_state_concurrence(&rho).map_err(err)?;
            worst = worst.max((full - shortcut).abs());
        }
    }
    if worst < 1e-12 {
        Ok(format!("pattern holds; route gap {worst:.1e}"))
    } else {
        Err(format!("route gap {worst:.1e} >= 1e-12"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn the_full_suite_passes() {
        let report = run_all();
        for outcome in &report.outcomes {
            assert!(
                outcome.passed,
                "{} failed: {}",
                outcome.name, outcome.detail
            );
        }
        assert!(report.all_passed());
        assert_eq!(report.outcomes.len(), 14);
    }

    #[test]
    fn reports_are_deterministic() {
        let a = run_all();
        let b = run_all();
        for (x, y) in a.outcomes.iter().zip(&b.outcomes) {
            assert_eq!(x.name, y.name);
            assert_eq!(x.passed, y.passed);
            assert_eq!(x.detail, y.detail);
        }
    }
}
