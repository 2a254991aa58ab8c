//! Baked parameter sets that regenerate the library's reference curves.
//!
//! Each target writes one CSV whose `#` comments record every parameter,
//! so a run is reproducible from its own output alone.

use std::f64::consts::PI;

use djc::analysis::{AxisKind, SweepAxis};
use djc::entanglement::PairLabel;
use djc::model::{InitialStateSpec, SystemParams};
use djc::series::{compute_series, SeriesOutput, SeriesSpec, TimeGrid};

use crate::config::{output_path, Settings};
use crate::csvout::{num, row, write_csv};
use crate::run::Failure;

/// Valid `reproduce` targets, in catalogue order.
pub const FIGURE_NAMES: [&str; 11] = [
    "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10", "fig11", "fig12", "fig13",
];

/// Atomic frequency shared by every reproduction (it cancels out of every
/// observable; only the detunings matter).
const OMEGA0: f64 = 20.0;

struct Figure {
    comments: Vec<String>,
    header: String,
    rows: Vec<String>,
}

pub fn reproduce(figure: &str, s: &Settings) -> Result<(), Failure> {
    s.ensure_known(&["output"]).map_err(Failure::Message)?;
    let fig = match figure {
        "fig3" => fig3()?,
        "fig4" => fig4()?,
        "fig5" => fig5()?,
        "fig6" => fig6()?,
        "fig7" => fig7()?,
        "fig8" => fig8()?,
        "fig9" => fig9()?,
        "fig10" => fig10()?,
        "fig11" => fig11()?,
        "fig12" => fig12()?,
        "fig13" => fig13()?,
        other => {
            return Err(Failure::Message(format!(
                "unknown target '{other}' (expected one of {})",
                FIGURE_NAMES.join(", ")
            )))
        }
    };
    let path = output_path(s, &format!("{figure}.csv"));
    let mut comments = vec![format!("reproduction target: {figure}")];
    comments.extend(fig.comments);
    comments.push("engine: analytic closed forms".into());
    write_csv(&path, &comments, &fig.header, &fig.rows).map_err(Failure::Message)?;
    println!("wrote {} ({} data rows)", path.display(), fig.rows.len());
    Ok(())
}

// ---------------------------------------------------------------------------
// shared plumbing
// ---------------------------------------------------------------------------

fn resonant(g1: f64, g2: f64) -> Result<SystemParams, Failure> {
    Ok(SystemParams::from_detunings(OMEGA0, 0.0, 0.0, g1, g2)?)
}

fn matched(g: f64, delta: f64) -> Result<SystemParams, Failure> {
    Ok(SystemParams::from_detunings(OMEGA0, delta, delta, g, g)?)
}

fn series(
    params: SystemParams,
    initial: InitialStateSpec,
    t_max: f64,
    steps: usize,
) -> Result<SeriesOutput, Failure> {
    let mut spec = SeriesSpec::new(params, initial);
    spec.grid = TimeGrid::new(t_max, steps)?;
    Ok(compute_series(&spec)?)
}

fn describe(params: &SystemParams, state: &str, t_max: f64, steps: usize) -> Vec<String> {
    vec![
        format!(
            "params: omega0={OMEGA0} delta1={} delta2={} g1={} g2={}",
            params.delta1(),
            params.delta2(),
            params.g1(),
            params.g2()
        ),
        format!("state: {state}"),
        format!("grid: t-max={t_max} steps={steps} (dimensionless mean-coupling time)"),
    ]
}

/// Append the chosen pairs' values at sample `i` to `cells`.
fn push_pairs(cells: &mut Vec<String>, out: &SeriesOutput, pairs: &[PairLabel], i: usize) {
    for &p in pairs {
        cells.push(num(out.series.pair(p)[i]));
    }
}

fn detuning_axis() -> Result<Vec<f64>, Failure> {
    Ok(SweepAxis::linspace(AxisKind::CommonDetuning, -3.0, 3.0, 61)?.values)
}

// ---------------------------------------------------------------------------
// one-excitation targets
// ---------------------------------------------------------------------------

/// Resonant equal couplings, maximally entangled atoms: periodic full
/// transfer into the cavities through the equal cross-pair channel.
fn fig3() -> Result<Figure, Failure> {
    let (t_max, steps) = (2.0 * PI, 2001);
    let out = series(
        resonant(1.0, 1.0)?,
        InitialStateSpec::bell_psi(PI / 4.0, 0.0),
        t_max,
        steps,
    )?;
    let mut comments = describe(
        &SystemParams::from_detunings(OMEGA0, 0.0, 0.0, 1.0, 1.0)?,
        "bell-psi alpha=pi/4 beta=0",
        t_max,
        steps,
    );
    comments.push(
        "note: the four atom-cavity cross pairs coincide here; C_cross is the Aa column".into(),
    );
    let rows = (0..out.series.len())
        .map(|i| {
            let mut cells = vec![num(out.series.t[i])];
            push_pairs(
                &mut cells,
                &out,
                &[
                    PairLabel::AtomAtom,
                    PairLabel::CavCav,
                    PairLabel::AtomACavA,
                ],
                i,
            );
            row(cells)
        })
        .collect();
    Ok(Figure {
        comments,
        header: "t,C_AB,C_ab,C_cross".into(),
        rows,
    })
}

/// Unequal couplings on resonance: transfer is incomplete and the
/// atoms-plus-cavities sum is no longer conserved.
fn fig4() -> Result<Figure, Failure> {
    let (t_max, steps) = (4.0 * PI, 2001);
    let params = resonant(4.0 / 3.0, 2.0 / 3.0)?;
    let out = series(
        params,
        InitialStateSpec::bell_psi(PI / 4.0, 0.0),
        t_max,
        steps,
    )?;
    let mut comments = describe(&params, "bell-psi alpha=pi/4 beta=0", t_max, steps);
    comments.push("note: sum_AB_ab = C_AB + C_ab, constant only for equal couplings".into());
    let rows = (0..out.series.len())
        .map(|i| {
            let mut cells = vec![num(out.series.t[i])];
            push_pairs(&mut cells, &out, &[PairLabel::AtomAtom, PairLabel::CavCav], i);
            cells.push(num(out.series.sum_atoms_cavities[i]));
            row(cells)
        })
        .collect();
    Ok(Figure {
        comments,
        header: "t,C_AB,C_ab,sum_AB_ab".into(),
        rows,
    })
}

/// Atom-atom concurrence over the common-detuning / time plane: detuning
/// raises the floor of the oscillation toward frozen entanglement.
fn fig5() -> Result<Figure, Failure> {
    let (t_max, steps) = (4.0 * PI, 801);
    let mut comments = vec![
        format!("params: omega0={OMEGA0} g1=1 g2=1, common detuning swept"),
        "state: bell-psi alpha=pi/4 beta=0".into(),
        format!("grid: t-max={t_max} steps={steps} (dimensionless mean-coupling time)"),
        "sweep: delta from -3 to 3 in 61 values; rows grouped by delta".into(),
    ];
    comments.push("note: long format, one row per (t, delta) sample".into());
    let mut rows = Vec::with_capacity(61 * steps);
    for &delta in &detuning_axis()? {
        let out = series(
            matched(1.0, delta)?,
            InitialStateSpec::bell_psi(PI / 4.0, 0.0),
            t_max,
            steps,
        )?;
        for i in 0..out.series.len() {
            rows.push(row([
                num(out.series.t[i]),
                num(delta),
                num(out.series.pair(PairLabel::AtomAtom)[i]),
            ]));
        }
    }
    Ok(Figure {
        comments,
        header: "t,delta,C_AB".into(),
        rows,
    })
}

fn transfer_parity_figure(g1: f64, g2: f64) -> Result<Figure, Failure> {
    let (t_max, steps) = (4.0 * PI, 2001);
    let params = resonant(g1, g2)?;
    let out = series(
        params,
        InitialStateSpec::bell_psi(PI / 4.0, 0.0),
        t_max,
        steps,
    )?;
    let mut comments = describe(&params, "bell-psi alpha=pi/4 beta=0", t_max, steps);
    comments.push(
        "note: whether full transfer revives in ab or in the crossed Ab pair \
         follows the parity of the coupling ratio"
            .into(),
    );
    let rows = (0..out.series.len())
        .map(|i| {
            let mut cells = vec![num(out.series.t[i])];
            push_pairs(
                &mut cells,
                &out,
                &[
                    PairLabel::AtomAtom,
                    PairLabel::CavCav,
                    PairLabel::AtomACavB,
                    PairLabel::CavAAtomB,
                ],
                i,
            );
            row(cells)
        })
        .collect();
    Ok(Figure {
        comments,
        header: "t,C_AB,C_ab,C_Ab,C_aB".into(),
        rows,
    })
}

/// Coupling ratio 2 (even): full transfer lands on the crossed Ab pair.
fn fig6() -> Result<Figure, Failure> {
    transfer_parity_figure(4.0 / 3.0, 2.0 / 3.0)
}

/// Coupling ratio 3 (odd): full transfer returns to the cavity-cavity pair.
fn fig7() -> Result<Figure, Failure> {
    transfer_parity_figure(1.5, 0.5)
}

// ---------------------------------------------------------------------------
// two-excitation targets
// ---------------------------------------------------------------------------

/// Both atoms excited, no initial entanglement: each atom entangles with its
/// own cavity, and detuning weakens that local oscillation.
fn fig8() -> Result<Figure, Failure> {
    let (t_max, steps) = (4.0 * PI, 2001);
    let on = series(matched(1.0, 0.0)?, InitialStateSpec::bare_up_up(), t_max, steps)?;
    let off = series(matched(1.0, 1.0)?, InitialStateSpec::bare_up_up(), t_max, steps)?;
    let mut comments = describe(&matched(1.0, 0.0)?, "bare-up-up", t_max, steps);
    comments[0] = format!("params: omega0={OMEGA0} g1=1 g2=1; columns at delta=0 and delta=1");
    comments.push("note: only the local Aa pair is shown; by symmetry Bb matches it".into());
    let rows = (0..on.series.len())
        .map(|i| {
            row([
                num(on.series.t[i]),
                num(on.series.pair(PairLabel::AtomACavA)[i]),
                num(off.series.pair(PairLabel::AtomACavA)[i]),
            ])
        })
        .collect();
    Ok(Figure {
        comments,
        header: "t,C_Aa_delta0,C_Aa_delta1".into(),
        rows,
    })
}

/// Partially entangled doubly excited atoms on resonance: the atom-atom
/// concurrence dies and revives while the cavity pair never reaches the
/// initial entanglement.
fn fig9() -> Result<Figure, Failure> {
    let (t_max, steps) = (2.0 * PI, 2001);
    let params = resonant(1.0, 1.0)?;
    let sixth = series(params, InitialStateSpec::bell_phi(PI / 6.0, 0.0), t_max, steps)?;
    let twelfth = series(params, InitialStateSpec::bell_phi(PI / 12.0, 0.0), t_max, steps)?;
    let mut comments = describe(&params, "bell-phi theta=0, alpha=pi/6 and alpha=pi/12", t_max, steps);
    comments.push(
        "note: sspc columns are the squared-concurrence sums over each atom's three partners"
            .into(),
    );
    let rows = (0..sixth.series.len())
        .map(|i| {
            row([
                num(sixth.series.t[i]),
                num(sixth.series.pair(PairLabel::AtomAtom)[i]),
                num(sixth.series.pair(PairLabel::CavCav)[i]),
                num(sixth.series.sspc[i]),
                num(twelfth.series.pair(PairLabel::AtomAtom)[i]),
                num(twelfth.series.pair(PairLabel::CavCav)[i]),
                num(twelfth.series.sspc[i]),
            ])
        })
        .collect();
    Ok(Figure {
        comments,
        header: "t,C_AB_pi6,C_ab_pi6,sspc_pi6,C_AB_pi12,C_ab_pi12,sspc_pi12".into(),
        rows,
    })
}

/// Detuning removes the sudden-death windows of the weakly entangled
/// doubly excited pair.
fn fig10() -> Result<Figure, Failure> {
    let (t_max, steps) = (2.0 * PI, 2001);
    let alpha = PI / 12.0;
    let on = series(matched(1.0, 0.0)?, InitialStateSpec::bell_phi(alpha, 0.0), t_max, steps)?;
    let off = series(matched(1.0, 2.0)?, InitialStateSpec::bell_phi(alpha, 0.0), t_max, steps)?;
    let mut comments = describe(&matched(1.0, 0.0)?, "bell-phi alpha=pi/12 theta=0", t_max, steps);
    comments[0] = format!("params: omega0={OMEGA0} g1=1 g2=1; columns at delta=0 and delta=2");
    comments.push("note: the delta=0 column shows sudden-death windows; delta=2 has none".into());
    let rows = (0..on.series.len())
        .map(|i| {
            row([
                num(on.series.t[i]),
                num(on.series.pair(PairLabel::AtomAtom)[i]),
                num(off.series.pair(PairLabel::AtomAtom)[i]),
            ])
        })
        .collect();
    Ok(Figure {
        comments,
        header: "t,C_AB_delta0,C_AB_delta2".into(),
        rows,
    })
}

/// Detuning acts oppositely on the two Bell-superposition signs: it removes
/// the symmetric state's death windows and creates windows for the
/// antisymmetric state.
fn fig11() -> Result<Figure, Failure> {
    let (t_max, steps) = (4.0 * PI, 801);
    let comments = vec![
        format!("params: omega0={OMEGA0} g1=1 g2=1, common detuning swept"),
        "state: sym-two-plus-ground and antisym-two-plus-ground".into(),
        format!("grid: t-max={t_max} steps={steps} (dimensionless mean-coupling time)"),
        "sweep: delta from -3 to 3 in 61 values; rows grouped by delta".into(),
        "note: long format, one row per (t, delta) sample".into(),
    ];
    let mut rows = Vec::with_capacity(61 * steps);
    for &delta in &detuning_axis()? {
        let sym = series(
            matched(1.0, delta)?,
            InitialStateSpec::sym_two_plus_ground(),
            t_max,
            steps,
        )?;
        let anti = series(
            matched(1.0, delta)?,
            InitialStateSpec::antisym_two_plus_ground(),
            t_max,
            steps,
        )?;
        for i in 0..sym.series.len() {
            rows.push(row([
                num(sym.series.t[i]),
                num(delta),
                num(sym.series.pair(PairLabel::AtomAtom)[i]),
                num(anti.series.pair(PairLabel::AtomAtom)[i]),
            ]));
        }
    }
    Ok(Figure {
        comments,
        header: "t,delta,C_AB_sym,C_AB_antisym".into(),
        rows,
    })
}

/// Doubly excited pair with unequal couplings on resonance: all six pairwise
/// concurrences, showing the slow beat set by the coupling difference.
fn fig12() -> Result<Figure, Failure> {
    let (t_max, steps) = (6.0 * PI, 3001);
    let params = resonant(2.0 / 3.0, 4.0 / 3.0)?;
    let out = series(params, InitialStateSpec::bell_phi(PI / 6.0, 0.0), t_max, steps)?;
    let comments = describe(&params, "bell-phi alpha=pi/6 theta=0", t_max, steps);
    let rows = (0..out.series.len())
        .map(|i| {
            let mut cells = vec![num(out.series.t[i])];
            push_pairs(&mut cells, &out, &PairLabel::ALL, i);
            row(cells)
        })
        .collect();
    Ok(Figure {
        comments,
        header: "t,C_AB,C_ab,C_Aa,C_Bb,C_Ab,C_aB".into(),
        rows,
    })
}

/// A single shared excitation plus the empty state: atoms that start
/// unentangled become maximally entangled, fastest at unequal couplings.
fn fig13() -> Result<Figure, Failure> {
    let (t_max, steps) = (4.0 * PI, 2001);
    let ratios: [(f64, (f64, f64)); 3] = [
        (1.0, (1.0, 1.0)),
        (2.0, (2.0 / 3.0, 4.0 / 3.0)),
        (0.5, (4.0 / 3.0, 2.0 / 3.0)),
    ];
    let mut outs = Vec::new();
    for &(_, (g1, g2)) in &ratios {
        outs.push(series(
            resonant(g1, g2)?,
            InitialStateSpec::lambda(),
            t_max,
            steps,
        )?);
    }
    let comments = vec![
        format!(
            "params: omega0={OMEGA0}, resonant, mean coupling 1; columns at \
             g2/g1 = 1, 2 and 0.5"
        ),
        "state: lambda (one shared excitation plus the empty component)".into(),
        format!("grid: t-max={t_max} steps={steps} (dimensionless mean-coupling time)"),
    ];
    let rows = (0..outs[0].series.len())
        .map(|i| {
            row([
                num(outs[0].series.t[i]),
                num(outs[0].series.pair(PairLabel::AtomAtom)[i]),
                num(outs[1].series.pair(PairLabel::AtomAtom)[i]),
                num(outs[2].series.pair(PairLabel::AtomAtom)[i]),
            ])
        })
        .collect();
    Ok(Figure {
        comments,
        header: "t,C_AB_r1,C_AB_r2,C_AB_r05".into(),
        rows,
    })
}
