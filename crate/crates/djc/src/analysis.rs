//! Detection and survey layers on top of concurrence series: zero-persistence
//! (sudden-death) windows, full-transfer instants, constancy certification,
//! and parameter sweeps over detuning and coupling ratio.

use rayon::prelude::*;
use serde::Serialize;

use crate::entanglement::{ConcurrenceSeries, PairLabel, SeriesRegime};
use crate::error::{Error, Result};
use crate::model::{DerivedRabi, InitialStateSpec, SystemParams};
use crate::series::{compute_series, Engine, SeriesOutput, SeriesSpec, TimeGrid};

/// Concurrence at or below this level counts as zero for window detection.
pub const DEFAULT_EPSILON_ZERO: f64 = 1e-9;

/// A local maximum must exceed `1 - DEFAULT_TRANSFER_TOL` to count as a
/// full transfer.
pub const DEFAULT_TRANSFER_TOL: f64 = 1e-3;

/// Detection requires at least this many grid points per fastest half-cycle:
/// the step must satisfy `step <= pi / (GRID_RULE_DIVISOR * omega_max)`.
pub const GRID_RULE_DIVISOR: f64 = 200.0;

/// Upper bound on sweep size.
pub const DEFAULT_CELL_BUDGET: usize = 20_000;

/// Returns `(step, max_step)`: the series' actual step and the coarsest
/// admissible step for its fastest derived frequency.
fn require_fine_grid(series: &ConcurrenceSeries, regime: &SeriesRegime) -> Result<(f64, f64)> {
    let step = series.step();
    let max_step = std::f64::consts::PI / (GRID_RULE_DIVISOR * regime.omega_max);
    if step > max_step {
        return Err(Error::GridTooCoarse { step, max_step });
    }
    Ok((step, max_step))
}

// ---------------------------------------------------------------------------
// sudden-death windows
// ---------------------------------------------------------------------------

/// Zero-persistence windows of one pair's concurrence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EsdReport {
    pub pair: PairLabel,
    /// Disjoint, sorted `(t_start, t_end)` windows, each spanning at least
    /// two grid steps.
    pub intervals: Vec<(f64, f64)>,
    /// Threshold below which a sample counts as zero.
    pub epsilon_zero: f64,
    /// Grid step of the analyzed series.
    pub grid_resolution: f64,
}

impl EsdReport {
    pub fn has_esd(&self) -> bool {
        !self.intervals.is_empty()
    }

    /// Summed length of all windows.
    pub fn total_duration(&self) -> f64 {
        // folded from +0.0: an empty .sum::<f64>() is IEEE -0.0, which would
        // surface as "-0" in printed tables
        self.intervals.iter().fold(0.0, |acc, (a, b)| acc + (b - a))
    }
}

/// Find every window where the pair's concurrence stays at zero (below
/// `epsilon_zero`) persistently.
///
/// Brief subthreshold episodes are tangential touches of a continuous
/// profile, not entanglement death; a reported window must span at least
/// two steps of the coarsest admissible grid, a physical scale that does
/// not shrink as the grid is refined. The series must be sampled finely
/// against the fastest derived frequency (`GridTooCoarse` otherwise);
/// endpoints are reported at grid resolution, not root-found.
pub fn detect_esd(
    series: &ConcurrenceSeries,
    regime: &SeriesRegime,
    pair: PairLabel,
    epsilon_zero: f64,
) -> Result<EsdReport> {
    if !(epsilon_zero.is_finite() && epsilon_zero > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "zero threshold must be positive and finite, got {epsilon_zero}"
        )));
    }
    let (step, max_step) = require_fine_grid(series, regime)?;
    let min_span = 2.0 * max_step * (1.0 - 1e-12);
    let c = series.pair(pair);
    let t = &series.t;
    let mut intervals = Vec::new();
    let mut run_start: Option<usize> = None;
    for i in 0..=c.len() {
        let dead = i < c.len() && c[i] <= epsilon_zero;
        match (dead, run_start) {
            (true, None) => run_start = Some(i),
            (false, Some(s)) => {
                if t[i - 1] - t[s] >= min_span {
                    intervals.push((t[s], t[i - 1]));
                }
                run_start = None;
            }
            _ => {}
        }
    }
    Ok(EsdReport {
        pair,
        intervals,
        epsilon_zero,
        grid_resolution: step,
    })
}

// ---------------------------------------------------------------------------
// full-transfer instants
// ---------------------------------------------------------------------------

/// A local concurrence maximum close enough to 1 to count as complete
/// transfer of the initial entanglement into this pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransferEvent {
    pub pair: PairLabel,
    /// Dimensionless time of the refined peak.
    pub time: f64,
    /// Refined peak concurrence, in `[1 - tol, 1]`.
    pub value: f64,
}

/// Locate every interior local maximum exceeding `1 - tol`, refining both
/// the instant and the value with a parabola through the peak sample and
/// its neighbors. Grid requirements as in [`detect_esd`].
pub fn find_transfer_times(
    series: &ConcurrenceSeries,
    regime: &SeriesRegime,
    pair: PairLabel,
    tol: f64,
) -> Result<Vec<TransferEvent>> {
    if !(tol.is_finite() && tol > 0.0 && tol < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "transfer tolerance must lie in (0, 1), got {tol}"
        )));
    }
    let (step, _) = require_fine_grid(series, regime)?;
    let c = series.pair(pair);
    let t = &series.t;
    let mut events = Vec::new();
    for i in 1..c.len().saturating_sub(1) {
        // strict rise on the left so a flat two-sample crest reports once
        if !(c[i] > c[i - 1] && c[i] >= c[i + 1] && c[i] > 1.0 - tol) {
            continue;
        }
        let curv = c[i + 1] - 2.0 * c[i] + c[i - 1];
        let (time, value) = if curv < 0.0 {
            let dt = 0.5 * step * (c[i - 1] - c[i + 1]) / curv;
            let spread = c[i + 1] - c[i - 1];
            (t[i] + dt, (c[i] - spread * spread / (8.0 * curv)).min(1.0))
        } else {
            (t[i], c[i])
        };
        events.push(TransferEvent { pair, time, value });
    }
    Ok(events)
}

// ---------------------------------------------------------------------------
// constancy certification
// ---------------------------------------------------------------------------

/// Verdict on whether all six pairwise concurrences stay constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrozenReport {
    pub frozen: bool,
    /// Largest deviation from the initial value, over pairs and times.
    pub max_drift: f64,
}

/// Check whether every pairwise concurrence holds its initial value to
/// within `tol` across dimensionless times `[0, horizon]`. The sampling
/// density follows the same rule as the detectors.
pub fn certify_frozen(
    initial: &InitialStateSpec,
    params: &SystemParams,
    horizon: f64,
    tol: f64,
    engine: Engine,
) -> Result<FrozenReport> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "drift tolerance must be positive and finite, got {tol}"
        )));
    }
    let rabi = DerivedRabi::from_params(params);
    let dimless = rabi.omega_detuned[0].max(rabi.omega_detuned[1]) / params.gbar();
    let omega_max = 2.0_f64.max(2.0 * dimless);
    let max_step = std::f64::consts::PI / (GRID_RULE_DIVISOR * omega_max);
    let steps = (horizon / max_step).ceil() as usize + 1;
    if steps > 500_000 {
        return Err(Error::InvalidConfig(format!(
            "horizon {horizon} needs {steps} samples at this detuning; shorten it"
        )));
    }
    let mut spec = SeriesSpec::new(*params, initial.clone());
    spec.grid = TimeGrid::new(horizon, steps.max(2))?;
    spec.engine = engine;
    let out = compute_series(&spec)?;
    let mut max_drift = 0.0_f64;
    for pair in PairLabel::ALL {
        let c = out.series.pair(pair);
        for &v in &c[1..] {
            max_drift = max_drift.max((v - c[0]).abs());
        }
    }
    Ok(FrozenReport {
        frozen: max_drift < tol,
        max_drift,
    })
}

// ---------------------------------------------------------------------------
// parameter sweeps
// ---------------------------------------------------------------------------

/// What a sweep axis varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AxisKind {
    /// Both detunings together (values in the same units as the couplings).
    CommonDetuning,
    /// First site's detuning only.
    Detuning1,
    /// Second site's detuning only.
    Detuning2,
    /// `g2 / g1`, rescaled so the mean coupling of the base parameters is
    /// preserved.
    CouplingRatio,
}

impl AxisKind {
    pub fn name(self) -> &'static str {
        match self {
            AxisKind::CommonDetuning => "delta",
            AxisKind::Detuning1 => "delta1",
            AxisKind::Detuning2 => "delta2",
            AxisKind::CouplingRatio => "ratio",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "delta" => Ok(AxisKind::CommonDetuning),
            "delta1" => Ok(AxisKind::Detuning1),
            "delta2" => Ok(AxisKind::Detuning2),
            "ratio" => Ok(AxisKind::CouplingRatio),
            other => Err(Error::InvalidConfig(format!(
                "unknown sweep axis '{other}' (expected delta, delta1, delta2 or ratio)"
            ))),
        }
    }
}

/// One sweep dimension: a parameter and the values it takes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepAxis {
    pub kind: AxisKind,
    pub values: Vec<f64>,
}

impl SweepAxis {
    pub fn new(kind: AxisKind, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidConfig("sweep axis has no values".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidConfig(
                "sweep axis values must be finite".into(),
            ));
        }
        Ok(Self { kind, values })
    }

    /// `n` evenly spaced values from `lo` to `hi` inclusive.
    pub fn linspace(kind: AxisKind, lo: f64, hi: f64, n: usize) -> Result<Self> {
        if n < 2 || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "axis range needs two finite endpoints and n >= 2, got [{lo}, {hi}] with {n}"
            )));
        }
        let h = (hi - lo) / (n - 1) as f64;
        let values = (0..n)
            .map(|i| if i + 1 == n { hi } else { lo + i as f64 * h })
            .collect();
        Self::new(kind, values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn apply_axis(params: &SystemParams, kind: AxisKind, value: f64) -> Result<SystemParams> {
    match kind {
        AxisKind::CommonDetuning => SystemParams::from_detunings(
            params.omega0(),
            value,
            value,
            params.g1(),
            params.g2(),
        ),
        AxisKind::Detuning1 => SystemParams::from_detunings(
            params.omega0(),
            value,
            params.delta2(),
            params.g1(),
            params.g2(),
        ),
        AxisKind::Detuning2 => SystemParams::from_detunings(
            params.omega0(),
            params.delta1(),
            value,
            params.g1(),
            params.g2(),
        ),
        AxisKind::CouplingRatio => {
            if value < 0.0 {
                return Err(Error::InvalidConfig(format!(
                    "coupling ratio must be nonnegative, got {value}"
                )));
            }
            let g1 = 2.0 * params.gbar() / (1.0 + value);
            SystemParams::from_detunings(
                params.omega0(),
                params.delta1(),
                params.delta2(),
                g1,
                value * g1,
            )
        }
    }
}

/// Per-cell digest of one computed series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CellSummary {
    /// Minimum concurrence over the grid, per pair in storage order.
    pub min: [f64; 6],
    /// Maximum concurrence over the grid, per pair in storage order.
    pub max: [f64; 6],
    /// Total zero-persistence duration, per pair in storage order.
    pub esd_total: [f64; 6],
}

/// A sweep request: the cell template plus one or two axes.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    /// Parameters, initial state, grid and engine shared by every cell;
    /// the axes override parameters cell by cell.
    pub base: SeriesSpec,
    pub axes: Vec<SweepAxis>,
    pub budget: usize,
}

impl SweepSpec {
    pub fn new(base: SeriesSpec, axes: Vec<SweepAxis>) -> Self {
        Self {
            base,
            axes,
            budget: DEFAULT_CELL_BUDGET,
        }
    }
}

/// Sweep results: axes plus one summary per cell.
#[derive(Debug, Clone, Serialize)]
pub struct SweepTable {
    axes: Vec<SweepAxis>,
    /// Row-major: the first axis varies slowest.
    cells: Vec<CellSummary>,
}

impl SweepTable {
    pub fn axes(&self) -> &[SweepAxis] {
        &self.axes
    }

    pub fn cells(&self) -> &[CellSummary] {
        &self.cells
    }

    /// Axis lengths, inner length 1 for a one-axis sweep.
    pub fn shape(&self) -> (usize, usize) {
        let outer = self.axes[0].len();
        let inner = self.axes.get(1).map_or(1, SweepAxis::len);
        (outer, inner)
    }

    pub fn cell(&self, outer: usize, inner: usize) -> &CellSummary {
        &self.cells[outer * self.shape().1 + inner]
    }
}

fn summarize_cell(out: &SeriesOutput) -> Result<CellSummary> {
    let mut min = [f64::INFINITY; 6];
    let mut max = [f64::NEG_INFINITY; 6];
    let mut esd_total = [0.0; 6];
    for pair in PairLabel::ALL {
        let i = pair.index();
        for &v in out.series.pair(pair) {
            min[i] = min[i].min(v);
            max[i] = max[i].max(v);
        }
        let report = detect_esd(&out.series, &out.regime, pair, DEFAULT_EPSILON_ZERO)?;
        esd_total[i] = report.total_duration();
    }
    Ok(CellSummary {
        min,
        max,
        esd_total,
    })
}

/// Evaluate a full series in every cell of the axis grid and digest it.
/// Cells are independent and run in parallel; assembly order is fixed by
/// the axis order, so results are deterministic.
pub fn sweep(spec: &SweepSpec) -> Result<SweepTable> {
    if spec.axes.is_empty() || spec.axes.len() > 2 {
        return Err(Error::InvalidConfig(format!(
            "sweeps take one or two axes, got {}",
            spec.axes.len()
        )));
    }
    for axis in &spec.axes {
        if axis.is_empty() {
            return Err(Error::InvalidConfig("sweep axis has no values".into()));
        }
    }
    let outer = spec.axes[0].len();
    let inner = spec.axes.get(1).map_or(1, SweepAxis::len);
    let cells = outer * inner;
    if cells > spec.budget {
        return Err(Error::CellBudgetExceeded {
            cells,
            budget: spec.budget,
        });
    }
    let summaries: Vec<CellSummary> = (0..cells)
        .into_par_iter()
        .map(|idx| {
            let v0 = spec.axes[0].values[idx / inner];
            let mut params = apply_axis(&spec.base.params, spec.axes[0].kind, v0)?;
            if let Some(axis) = spec.axes.get(1) {
                params = apply_axis(&params, axis.kind, axis.values[idx % inner])?;
            }
            let mut cell = spec.base.clone();
            cell.params = params;
            summarize_cell(&compute_series(&cell)?)
        })
        .collect::<Result<_>>()?;
    Ok(SweepTable {
        axes: spec.axes.clone(),
        cells: summaries,
    })
}
