//! Subcommand implementations: each builds a request from the settings,
//! runs the library, and writes one CSV (or prints, for `verify`).

use std::path::Path;

use djc::analysis::{
    detect_esd, find_transfer_times, sweep, AxisKind, SweepAxis, SweepSpec, DEFAULT_EPSILON_ZERO,
    DEFAULT_TRANSFER_TOL,
};
use djc::analytic::{self, Site};
use djc::entanglement::PairLabel;
use djc::model::{AmplitudeVector, ManifoldBasis};
use djc::oracle::{FullStateVector, Hamiltonian, DEFAULT_N_MAX};
use djc::series::{compute_series, Engine, SeriesOutput, SeriesSpec};

use crate::config::{
    build_engine, build_grid, build_initial, build_params, output_path, Settings, PARAM_KEYS,
    RUN_KEYS, STATE_KEYS,
};
use crate::csvout::{num, row, write_csv};

/// How a command run failed, for exit-code mapping.
pub enum Failure {
    /// Bad input or a runtime error: exit 1.
    Message(String),
    /// The verification suite found violations: exit 2.
    Verification,
}

impl<T: std::fmt::Display> From<T> for Failure {
    fn from(e: T) -> Self {
        Failure::Message(e.to_string())
    }
}

type RunResult = Result<(), Failure>;

fn allowed(extra: &[&'static str]) -> Vec<&'static str> {
    let mut keys: Vec<&'static str> = Vec::new();
    keys.extend_from_slice(PARAM_KEYS);
    keys.extend_from_slice(STATE_KEYS);
    keys.extend_from_slice(RUN_KEYS);
    keys.extend_from_slice(extra);
    keys
}

fn build_series_spec(s: &Settings) -> Result<SeriesSpec, Failure> {
    let params = build_params(s).map_err(Failure::Message)?;
    let initial = build_initial(s).map_err(Failure::Message)?;
    let mut spec = SeriesSpec::new(params, initial);
    spec.grid = build_grid(s).map_err(Failure::Message)?;
    spec.engine = build_engine(s).map_err(Failure::Message)?;
    spec.n_max = s.count_or("n-max", DEFAULT_N_MAX).map_err(Failure::Message)?;
    Ok(spec)
}

fn params_comments(spec: &SeriesSpec) -> Vec<String> {
    let p = &spec.params;
    vec![
        format!(
            "params: omega0={} delta1={} delta2={} g1={} g2={}",
            p.omega0(),
            p.delta1(),
            p.delta2(),
            p.g1(),
            p.g2()
        ),
        format!(
            "state: preset={} alpha={} beta={} theta={} phi={}",
            spec.initial.preset,
            spec.initial.alpha,
            spec.initial.beta,
            spec.initial.theta,
            spec.initial.phi
        ),
        format!(
            "grid: t-max={} steps={} (dimensionless mean-coupling time); engine={}",
            spec.grid.t_max(),
            spec.grid.steps(),
            spec.engine
        ),
    ]
}

fn parse_pair(s: &Settings) -> Result<Vec<PairLabel>, Failure> {
    match s.raw("pair") {
        None => Ok(vec![PairLabel::AtomAtom]),
        Some("all") => Ok(PairLabel::ALL.to_vec()),
        Some(v) => {
            let pair = PairLabel::parse(v).ok_or_else(|| {
                Failure::Message(format!(
                    "unknown pair '{v}' (expected AB, ab, Aa, Bb, Ab, aB or all)"
                ))
            })?;
            Ok(vec![pair])
        }
    }
}

fn finish(path: &Path, rows: usize) {
    println!("wrote {} ({rows} data rows)", path.display());
}

// ---------------------------------------------------------------------------
// evolve
// ---------------------------------------------------------------------------

/// Amplitude-magnitude series for the working manifold.
struct AmplitudeSeries {
    basis: ManifoldBasis,
    times: Vec<f64>,
    /// One row of per-component magnitudes per time.
    moduli: Vec<Vec<f64>>,
    cross_check: Option<f64>,
}

fn analytic_moduli(
    spec: &SeriesSpec,
    state: &AmplitudeVector,
    times: &[f64],
) -> Result<Vec<Vec<f64>>, Failure> {
    let basis = state.basis();
    if basis == ManifoldBasis::TwoExcitationWithGround
        && !spec.params.is_resonant()
        && !(spec.params.has_equal_couplings() && spec.params.has_equal_detunings())
    {
        return Err(Failure::Message(
            "no closed form covers two excitations with unequal couplings off resonance; \
             use engine=oracle"
                .into(),
        ));
    }
    times
        .iter()
        .map(|&tbar| {
            let p = &spec.params;
            let evolved = match basis {
                ManifoldBasis::SingleExcitation => {
                    analytic::evolve_single_excitation(p, state, tbar)?
                }
                ManifoldBasis::SingleSitePairA => {
                    analytic::evolve_single_site_pair(p, Site::A, state, tbar)?
                }
                ManifoldBasis::SingleSitePairB => {
                    analytic::evolve_single_site_pair(p, Site::B, state, tbar)?
                }
                _ if p.is_resonant() => analytic::evolve_two_excitation_resonant(p, state, tbar)?,
                _ => analytic::evolve_two_excitation_matched(p, state, tbar)?,
            };
            Ok(evolved.moduli())
        })
        .collect()
}

fn oracle_moduli(
    spec: &SeriesSpec,
    state: &AmplitudeVector,
    times: &[f64],
) -> Result<Vec<Vec<f64>>, Failure> {
    let h = Hamiltonian::new(&spec.params, spec.n_max);
    let psi0 = FullStateVector::from_manifold(state, spec.n_max)?;
    let phys: Vec<f64> = times.iter().map(|t| t / spec.params.gbar()).collect();
    let states = h.evolve_series(&psi0, &phys)?;
    states
        .iter()
        .map(|psi| {
            let (amp, _residual) = psi.to_manifold(state.basis())?;
            Ok(amp.moduli())
        })
        .collect()
}

fn amplitude_series(spec: &SeriesSpec) -> Result<AmplitudeSeries, Failure> {
    let home = spec.initial.default_basis();
    let state = djc::model::build_initial_state(&spec.initial, home)?;
    let state = if home == ManifoldBasis::TwoExcitationCore {
        state.with_ground()?
    } else {
        state
    };
    let times = spec.grid.points();
    let (moduli, cross_check) = match spec.engine {
        Engine::Analytic => (analytic_moduli(spec, &state, &times)?, None),
        Engine::Oracle => (oracle_moduli(spec, &state, &times)?, None),
        Engine::Both => {
            let a = analytic_moduli(spec, &state, &times)?;
            let o = oracle_moduli(spec, &state, &times)?;
            let mut worst = 0.0_f64;
            for (ra, ro) in a.iter().zip(&o) {
                for (x, y) in ra.iter().zip(ro) {
                    worst = worst.max((x - y).abs());
                }
            }
            if worst > 1e-8 {
                return Err(Failure::Message(format!(
                    "engines disagree by {worst:.3e} (tolerance 1e-8)"
                )));
            }
            (a, Some(worst))
        }
    };
    Ok(AmplitudeSeries {
        basis: state.basis(),
        times,
        moduli,
        cross_check,
    })
}

pub fn evolve(s: &Settings) -> RunResult {
    s.ensure_known(&allowed(&[])).map_err(Failure::Message)?;
    let spec = build_series_spec(s)?;
    let series = amplitude_series(&spec)?;
    let path = output_path(s, "evolve.csv");
    let mut comments = params_comments(&spec);
    comments.push("columns: amplitude magnitudes per basis component".into());
    if let Some(gap) = series.cross_check {
        comments.push(format!("engine cross-check: max gap {gap:.3e}"));
    }
    let header = format!("t,{}", series.basis.labels().join(","));
    let rows: Vec<String> = series
        .times
        .iter()
        .zip(&series.moduli)
        .map(|(&t, m)| row(std::iter::once(num(t)).chain(m.iter().map(|&v| num(v)))))
        .collect();
    write_csv(&path, &comments, &header, &rows).map_err(Failure::Message)?;
    finish(&path, rows.len());
    Ok(())
}

// ---------------------------------------------------------------------------
// concurrence
// ---------------------------------------------------------------------------

fn concurrence_rows(out: &SeriesOutput) -> Vec<String> {
    (0..out.series.len())
        .map(|i| {
            let mut cells = vec![num(out.series.t[i])];
            for pair in PairLabel::ALL {
                cells.push(num(out.series.pair(pair)[i]));
            }
            cells.push(num(out.series.sspc[i]));
            cells.push(num(out.series.sum_atoms_cavities[i]));
            row(cells)
        })
        .collect()
}

const CONCURRENCE_HEADER: &str = "t,C_AB,C_ab,C_Aa,C_Bb,C_Ab,C_aB,sspc,sum_AB_ab";

pub fn concurrence(s: &Settings) -> RunResult {
    s.ensure_known(&allowed(&[])).map_err(Failure::Message)?;
    let spec = build_series_spec(s)?;
    let out = compute_series(&spec)?;
    let path = output_path(s, "concurrence.csv");
    let mut comments = params_comments(&spec);
    comments.push(format!(
        "initial site-site concurrence C12={}",
        num(out.regime.c12)
    ));
    if let Some(gap) = out.cross_check {
        comments.push(format!("engine cross-check: max gap {gap:.3e}"));
    }
    let rows = concurrence_rows(&out);
    write_csv(&path, &comments, CONCURRENCE_HEADER, &rows).map_err(Failure::Message)?;
    finish(&path, rows.len());
    Ok(())
}

// ---------------------------------------------------------------------------
// esd / transfer
// ---------------------------------------------------------------------------

pub fn esd(s: &Settings) -> RunResult {
    s.ensure_known(&allowed(&["pair", "epsilon"]))
        .map_err(Failure::Message)?;
    let spec = build_series_spec(s)?;
    let pairs = parse_pair(s)?;
    let epsilon = s
        .number_or("epsilon", DEFAULT_EPSILON_ZERO)
        .map_err(Failure::Message)?;
    let out = compute_series(&spec)?;
    let mut rows = Vec::new();
    let mut comments = params_comments(&spec);
    for &pair in &pairs {
        let report = detect_esd(&out.series, &out.regime, pair, epsilon)?;
        comments.push(format!(
            "pair {pair}: {} window(s), total duration {}",
            report.intervals.len(),
            num(report.total_duration())
        ));
        for &(start, end) in &report.intervals {
            rows.push(row([
                pair.short().to_string(),
                num(start),
                num(end),
                num(end - start),
            ]));
        }
    }
    let path = output_path(s, "esd.csv");
    write_csv(&path, &comments, "pair,start,end,duration", &rows).map_err(Failure::Message)?;
    finish(&path, rows.len());
    Ok(())
}

pub fn transfer(s: &Settings) -> RunResult {
    s.ensure_known(&allowed(&["pair", "tol"]))
        .map_err(Failure::Message)?;
    let spec = build_series_spec(s)?;
    let pairs = parse_pair(s)?;
    let tol = s
        .number_or("tol", DEFAULT_TRANSFER_TOL)
        .map_err(Failure::Message)?;
    let out = compute_series(&spec)?;
    let mut rows = Vec::new();
    let mut comments = params_comments(&spec);
    for &pair in &pairs {
        let events = find_transfer_times(&out.series, &out.regime, pair, tol)?;
        comments.push(format!("pair {pair}: {} full-transfer event(s)", events.len()));
        for ev in events {
            rows.push(row([pair.short().to_string(), num(ev.time), num(ev.value)]));
        }
    }
    let path = output_path(s, "transfer.csv");
    write_csv(&path, &comments, "pair,time,value", &rows).map_err(Failure::Message)?;
    finish(&path, rows.len());
    Ok(())
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

fn parse_axis(
    s: &Settings,
    axis_key: &str,
    from_key: &str,
    to_key: &str,
    points_key: &str,
) -> Result<Option<SweepAxis>, Failure> {
    let Some(kind) = s.raw(axis_key) else {
        return Ok(None);
    };
    let kind = AxisKind::parse(kind)?;
    let from = s
        .number(from_key)
        .map_err(Failure::Message)?
        .ok_or_else(|| Failure::Message(format!("{axis_key} needs {from_key}=")))?;
    let to = s
        .number(to_key)
        .map_err(Failure::Message)?
        .ok_or_else(|| Failure::Message(format!("{axis_key} needs {to_key}=")))?;
    let points = s
        .count(points_key)
        .map_err(Failure::Message)?
        .ok_or_else(|| Failure::Message(format!("{axis_key} needs {points_key}=")))?;
    Ok(Some(SweepAxis::linspace(kind, from, to, points)?))
}

pub fn sweep_cmd(s: &Settings) -> RunResult {
    s.ensure_known(&allowed(&[
        "axis", "from", "to", "points", "axis2", "from2", "to2", "points2",
    ]))
    .map_err(Failure::Message)?;
    let base = build_series_spec(s)?;
    let first = parse_axis(s, "axis", "from", "to", "points")?
        .ok_or_else(|| Failure::Message("sweep needs axis= (delta, delta1, delta2 or ratio)".into()))?;
    let mut axes = vec![first];
    if let Some(second) = parse_axis(s, "axis2", "from2", "to2", "points2")? {
        axes.push(second);
    }
    let mut comments = params_comments(&base);
    for axis in &axes {
        comments.push(format!(
            "axis {}: {} values in [{}, {}]",
            axis.kind.name(),
            axis.values.len(),
            axis.values.first().unwrap(),
            axis.values.last().unwrap()
        ));
    }
    let spec = SweepSpec::new(base, axes);
    let table = sweep(&spec)?;
    let axes = table.axes();
    let mut header = axes
        .iter()
        .map(|a| a.kind.name().to_string())
        .collect::<Vec<_>>()
        .join(",");
    header.push_str(",pair,min,max,esd_total");
    let (outer, inner) = table.shape();
    let mut rows = Vec::with_capacity(outer * inner * 6);
    for i in 0..outer {
        for j in 0..inner {
            let cell = table.cell(i, j);
            for pair in PairLabel::ALL {
                let mut cells = vec![num(axes[0].values[i])];
                if axes.len() > 1 {
                    cells.push(num(axes[1].values[j]));
                }
                cells.push(pair.short().to_string());
                let k = pair.index();
                cells.push(num(cell.min[k]));
                cells.push(num(cell.max[k]));
                cells.push(num(cell.esd_total[k]));
                rows.push(row(cells));
            }
        }
    }
    let path = output_path(s, "sweep.csv");
    write_csv(&path, &comments, &header, &rows).map_err(Failure::Message)?;
    finish(&path, rows.len());
    Ok(())
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

pub fn verify() -> RunResult {
    let report = djc::verify::run_all();
    for outcome in &report.outcomes {
        let status = if outcome.passed { "PASS" } else { "FAIL" };
        println!("{:26} {status}  {}", outcome.name, outcome.detail);
    }
    let failed = report.outcomes.iter().filter(|o| !o.passed).count();
    if failed == 0 {
        println!("all {} checks passed", report.outcomes.len());
        Ok(())
    } else {
        println!("{failed} of {} checks FAILED", report.outcomes.len());
        Err(Failure::Verification)
    }
}
