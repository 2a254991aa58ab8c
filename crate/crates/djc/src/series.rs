//! Time-series production: grids, engine selection, and regime routing.
//!
//! This is where a request — parameters, an initial state, a grid and an
//! engine — turns into sampled pairwise concurrences. The analytic engine
//! routes to whichever closed-form propagator covers the regime and refuses
//! regimes none covers; the brute-force engine has no such restriction; the
//! combined engine runs both, demands agreement, and emits the closed-form
//! values.

use serde::Serialize;

use crate::analytic;
use crate::entanglement::{
    check_rules, pairwise_concurrences_double, pairwise_concurrences_single, ConcurrenceSeries,
    PairConcurrences, PairLabel, RuleReport, SeriesRegime,
};
use crate::error::{Error, Result};
use crate::model::{
    build_initial_state, AmplitudeVector, DerivedRabi, InitialStateSpec, ManifoldBasis, Preset,
    SystemParams,
};
use crate::oracle::{pair_density, FullStateVector, Hamiltonian, DEFAULT_N_MAX};

/// Largest tolerated disagreement between the two engines before the
/// combined run is declared inconsistent.
pub const CROSS_CHECK_TOL: f64 = 1e-8;

/// Uniform time grid over dimensionless `gbar * t`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeGrid {
    t_max: f64,
    steps: usize,
}

impl TimeGrid {
    /// `steps` grid points from 0 to `t_max` inclusive (so `steps >= 2`).
    pub fn new(t_max: f64, steps: usize) -> Result<Self> {
        if !t_max.is_finite() || t_max <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "grid end must be positive and finite, got {t_max}"
            )));
        }
        if steps < 2 {
            return Err(Error::InvalidConfig(format!(
                "grid needs at least 2 points, got {steps}"
            )));
        }
        Ok(Self { t_max, steps })
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn step(&self) -> f64 {
        self.t_max / (self.steps - 1) as f64
    }

    pub fn points(&self) -> Vec<f64> {
        let h = self.step();
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.t_max
                } else {
                    i as f64 * h
                }
            })
            .collect()
    }
}

impl Default for TimeGrid {
    /// Two thousand points across two full resonant atom-cavity revivals.
    fn default() -> Self {
        Self {
            t_max: 4.0 * std::f64::consts::PI,
            steps: 2000,
        }
    }
}

/// Which pathway produces the numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Engine {
    /// Closed forms only; refuses uncovered regimes.
    Analytic,
    /// Brute-force eigendecomposition on the truncated product space.
    Oracle,
    /// Run both, require agreement to [`CROSS_CHECK_TOL`], emit closed forms.
    Both,
}

impl Engine {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "analytic" => Ok(Engine::Analytic),
            "oracle" => Ok(Engine::Oracle),
            "both" => Ok(Engine::Both),
            other => Err(Error::InvalidConfig(format!(
                "unknown engine '{other}' (expected analytic, oracle or both)"
            ))),
        }
    }
}

impl std::fmt::Display for Engine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Engine::Analytic => "analytic",
            Engine::Oracle => "oracle",
            Engine::Both => "both",
        })
    }
}

/// Everything needed to produce one concurrence series.
#[derive(Debug, Clone)]
pub struct SeriesSpec {
    pub params: SystemParams,
    pub initial: InitialStateSpec,
    pub grid: TimeGrid,
    pub engine: Engine,
    /// Cavity truncation for the brute-force engine.
    pub n_max: usize,
}

impl SeriesSpec {
    pub fn new(params: SystemParams, initial: InitialStateSpec) -> Self {
        Self {
            params,
            initial,
            grid: TimeGrid::default(),
            engine: Engine::Analytic,
            n_max: DEFAULT_N_MAX,
        }
    }
}

/// A produced series with its regime metadata and rule report.
#[derive(Debug, Clone)]
pub struct SeriesOutput {
    pub series: ConcurrenceSeries,
    pub regime: SeriesRegime,
    pub report: RuleReport,
    /// Largest engine disagreement, present only for [`Engine::Both`].
    pub cross_check: Option<f64>,
}

/// The closed form covering a two-excitation regime, if any.
enum DoubleRoute {
    Resonant,
    Matched,
}

fn double_route(params: &SystemParams) -> Result<DoubleRoute> {
    if params.is_resonant() {
        Ok(DoubleRoute::Resonant)
    } else if params.has_equal_couplings() && params.has_equal_detunings() {
        Ok(DoubleRoute::Matched)
    } else {
        Err(Error::RegimeMismatch(
            "no closed form covers two excitations with unequal couplings off resonance; \
             use the oracle engine"
                .into(),
        ))
    }
}

/// The working manifold for a series: single stays single, core states are
/// promoted so the decoupled ground amplitude is explicit, site pairs are
/// refused (their cavity climbs to two photons, so no pair of subsystems is
/// a qubit pair).
fn series_basis(initial: &InitialStateSpec) -> Result<ManifoldBasis> {
    match initial.default_basis() {
        ManifoldBasis::SingleExcitation => Ok(ManifoldBasis::SingleExcitation),
        ManifoldBasis::TwoExcitationCore | ManifoldBasis::TwoExcitationWithGround => {
            Ok(ManifoldBasis::TwoExcitationWithGround)
        }
        basis @ (ManifoldBasis::SingleSitePairA | ManifoldBasis::SingleSitePairB) => {
            Err(Error::RegimeMismatch(format!(
                "pairwise concurrences are not defined for the {basis} basis: \
                 its cavity is not qubit-like"
            )))
        }
    }
}

fn build_series_state(initial: &InitialStateSpec, basis: ManifoldBasis) -> Result<AmplitudeVector> {
    match initial.default_basis() {
        ManifoldBasis::TwoExcitationCore => {
            build_initial_state(initial, ManifoldBasis::TwoExcitationCore)?.with_ground()
        }
        _ => build_initial_state(initial, basis),
    }
}

/// Bipartite concurrence between the two atom-cavity subsystems at t = 0.
///
/// For a single excitation this is `2 sqrt(p1 p2)` with `p_j` the weight on
/// site j; for two excitations it is the pure-state I-concurrence
/// `sqrt(2 (1 - tr rho_1^2))` of the three-level site-1 reduction. Both
/// reduce to `2 sin(alpha) cos(alpha)` for the Bell-type presets.
fn initial_c12(state: &AmplitudeVector) -> f64 {
    let v = state.values();
    match state.basis() {
        ManifoldBasis::SingleExcitation => {
            let p1 = v[0].norm_sqr() + v[2].norm_sqr();
            let p2 = v[1].norm_sqr() + v[3].norm_sqr();
            2.0 * (p1 * p2).sqrt()
        }
        ManifoldBasis::TwoExcitationWithGround => {
            let a = v[0].norm_sqr() + v[1].norm_sqr();
            let b = v[2].norm_sqr() + v[3].norm_sqr();
            let cross = v[0] * v[2].conj() + v[1] * v[3].conj();
            let ground = v[4].norm_sqr();
            let purity = a * a + b * b + 2.0 * cross.norm_sqr() + ground * ground;
            (2.0 * (1.0 - purity)).max(0.0).sqrt()
        }
        _ => 0.0,
    }
}

fn regime_for(spec: &SeriesSpec, state: &AmplitudeVector) -> SeriesRegime {
    let rabi = DerivedRabi::from_params(&spec.params);
    let dimless_max = rabi.omega_detuned[0].max(rabi.omega_detuned[1]) / spec.params.gbar();
    SeriesRegime {
        manifold_excitation: state.basis().excitation(),
        c12: initial_c12(state),
        equal_couplings: spec.params.has_equal_couplings(),
        equal_detunings: spec.params.has_equal_detunings(),
        bell_psi: spec.initial.preset == Preset::BellPsi,
        omega_max: 2.0_f64.max(2.0 * dimless_max),
    }
}

fn analytic_samples(
    spec: &SeriesSpec,
    state: &AmplitudeVector,
    times: &[f64],
) -> Result<Vec<PairConcurrences>> {
    let single = state.basis() == ManifoldBasis::SingleExcitation;
    let route = if single {
        None
    } else {
        Some(double_route(&spec.params)?)
    };
    times
        .iter()
        .map(|&tbar| {
            let evolved = match &route {
                None => analytic::evolve_single_excitation(&spec.params, state, tbar)?,
                Some(DoubleRoute::Resonant) => {
                    analytic::evolve_two_excitation_resonant(&spec.params, state, tbar)?
                }
                Some(DoubleRoute::Matched) => {
                    analytic::evolve_two_excitation_matched(&spec.params, state, tbar)?
                }
            };
            if single {
                pairwise_concurrences_single(&evolved)
            } else {
                pairwise_concurrences_double(&evolved)
            }
        })
        .collect()
}

fn oracle_samples(
    spec: &SeriesSpec,
    state: &AmplitudeVector,
    times: &[f64],
) -> Result<Vec<PairConcurrences>> {
    let h = Hamiltonian::new(&spec.params, spec.n_max);
    let psi0 = FullStateVector::from_manifold(state, spec.n_max)?;
    let phys: Vec<f64> = times.iter().map(|t| t / spec.params.gbar()).collect();
    let states = h.evolve_series(&psi0, &phys)?;
    states
        .iter()
        .map(|psi| {
            let mut v = [0.0; 6];
            for pair in PairLabel::ALL {
                let rho = pair_density(psi, pair)?;
                v[pair.index()] = crate::entanglement::wootters_concurrence(&rho)?;
            }
            Ok(PairConcurrences::new(v))
        })
        .collect()
}

/// Produce a pairwise-concurrence series for the requested regime, initial
/// state, grid and engine.
pub fn compute_series(spec: &SeriesSpec) -> Result<SeriesOutput> {
    let basis = series_basis(&spec.initial)?;
    let state = build_series_state(&spec.initial, basis)?;
    let times = spec.grid.points();
    let (samples, cross_check) = match spec.engine {
        Engine::Analytic => (analytic_samples(spec, &state, &times)?, None),
        Engine::Oracle => (oracle_samples(spec, &state, &times)?, None),
        Engine::Both => {
            let analytic = analytic_samples(spec, &state, &times)?;
            let oracle = oracle_samples(spec, &state, &times)?;
            let mut worst = 0.0_f64;
            for (a, o) in analytic.iter().zip(&oracle) {
                for pair in PairLabel::ALL {
                    worst = worst.max((a.get(pair) - o.get(pair)).abs());
                }
            }
            if worst > CROSS_CHECK_TOL {
                return Err(Error::InternalConsistency(format!(
                    "engines disagree by {worst:.3e} (tolerance {CROSS_CHECK_TOL:.0e})"
                )));
            }
            (analytic, Some(worst))
        }
    };
    let series = ConcurrenceSeries::from_samples(times, &samples);
    let regime = regime_for(spec, &state);
    let report = check_rules(&series, &regime);
    Ok(SeriesOutput {
        series,
        regime,
        report,
        cross_check,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_4, PI};

    fn small_grid() -> TimeGrid {
        TimeGrid::new(2.0 * PI, 81).unwrap()
    }

    #[test]
    fn grid_is_inclusive_and_uniform() {
        let g = TimeGrid::new(1.0, 5).unwrap();
        let p = g.points();
        assert_eq!(p.len(), 5);
        assert_eq!(p[0], 0.0);
        assert_eq!(p[4], 1.0);
        assert_relative_eq!(p[2], 0.5, epsilon = 1e-15);
        assert!(TimeGrid::new(0.0, 5).is_err());
        assert!(TimeGrid::new(1.0, 1).is_err());
    }

    #[test]
    fn engine_parsing_round_trips() {
        for e in [Engine::Analytic, Engine::Oracle, Engine::Both] {
            assert_eq!(Engine::parse(&e.to_string()).unwrap(), e);
        }
        assert!(Engine::parse("magic").is_err());
    }

    #[test]
    fn both_engines_agree_for_a_shared_single_excitation() {
        let params = SystemParams::from_detunings(20.0, 0.4, -0.7, 1.2, 0.8).unwrap();
        let mut spec = SeriesSpec::new(params, InitialStateSpec::bell_psi(FRAC_PI_4, 0.0));
        spec.grid = small_grid();
        spec.engine = Engine::Both;
        let out = compute_series(&spec).unwrap();
        assert!(out.cross_check.unwrap() < 1e-9);
        assert_eq!(out.series.len(), 81);
        // conservation of the squared nonlocal sum at C12^2 = 1
        assert!(out.report.sspc_deviation.unwrap() < 1e-10);
    }

    #[test]
    fn both_engines_agree_for_matched_double_excitation() {
        let params = SystemParams::from_detunings(20.0, 0.6, 0.6, 1.0, 1.0).unwrap();
        let mut spec = SeriesSpec::new(
            params,
            InitialStateSpec::bell_phi(std::f64::consts::FRAC_PI_6, 0.0),
        );
        spec.grid = small_grid();
        spec.engine = Engine::Both;
        let out = compute_series(&spec).unwrap();
        assert!(out.cross_check.unwrap() < 1e-9);
        let c12 = 2.0 * std::f64::consts::FRAC_PI_6.sin() * std::f64::consts::FRAC_PI_6.cos();
        assert_relative_eq!(out.regime.c12, c12, epsilon = 1e-12);
        assert!(out.report.inequality_low_violation.unwrap() == 0.0);
        assert!(out.report.inequality_high_excess.unwrap() < 1e-10);
    }

    #[test]
    fn uncovered_regime_is_refused_by_the_analytic_engine() {
        let params = SystemParams::from_detunings(20.0, 0.5, 0.0, 1.3, 0.7).unwrap();
        let mut spec = SeriesSpec::new(params, InitialStateSpec::bell_phi(0.4, 0.0));
        spec.grid = small_grid();
        assert!(matches!(
            compute_series(&spec),
            Err(Error::RegimeMismatch(_))
        ));
        // the brute-force engine takes it
        spec.engine = Engine::Oracle;
        let out = compute_series(&spec).unwrap();
        assert_eq!(out.series.len(), 81);
    }

    #[test]
    fn sum_rule_recognized_only_in_its_regime() {
        let matched = SystemParams::from_detunings(20.0, 0.5, 0.5, 1.0, 1.0).unwrap();
        let mut spec = SeriesSpec::new(matched, InitialStateSpec::bell_psi(FRAC_PI_4, 0.0));
        spec.grid = small_grid();
        let out = compute_series(&spec).unwrap();
        assert!(out.report.sum_rule_expected);
        assert!(out.report.sum_rule_deviation.unwrap() < 1e-10);

        let lopsided = SystemParams::from_detunings(20.0, 0.0, 0.0, 2.0, 1.0).unwrap();
        let mut spec = SeriesSpec::new(lopsided, InitialStateSpec::bell_psi(FRAC_PI_4, 0.0));
        spec.grid = small_grid();
        let out = compute_series(&spec).unwrap();
        assert!(!out.report.sum_rule_expected);
        // and the rule indeed breaks: the deviation is macroscopic
        assert!(out.report.sum_rule_deviation.unwrap() > 0.1);
        // while the squared-sum conservation still holds exactly
        assert!(out.report.sspc_deviation.unwrap() < 1e-10);
    }

    #[test]
    fn site_pair_series_is_refused() {
        let params = SystemParams::from_detunings(20.0, 0.0, 0.0, 1.0, 1.0).unwrap();
        let spec = SeriesSpec::new(
            params,
            InitialStateSpec::custom(
                ManifoldBasis::SingleSitePairA,
                vec![crate::C64::new(1.0, 0.0), crate::C64::new(0.0, 0.0)],
            ),
        );
        assert!(matches!(
            compute_series(&spec),
            Err(Error::RegimeMismatch(_))
        ));
    }
}
