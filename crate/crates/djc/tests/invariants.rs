//! Cross-module properties checked on seeded random inputs: frame
//! insensitivity, detection determinism, engine agreement, and the
//! structural guarantees of reports and sweep tables.

use std::f64::consts::{FRAC_PI_4, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use djc::analysis::{detect_esd, find_transfer_times, sweep, AxisKind, SweepAxis, SweepSpec};
use djc::analytic;
use djc::entanglement::{
    pairwise_concurrences_double, pairwise_concurrences_single, PairLabel,
};
use djc::model::{AmplitudeVector, Frame, InitialStateSpec, ManifoldBasis, SystemParams};
use djc::series::{compute_series, Engine, SeriesSpec, TimeGrid};
use djc::C64;

fn random_state(rng: &mut impl Rng, basis: ManifoldBasis) -> AmplitudeVector {
    let mut v: Vec<C64> = (0..basis.dim())
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    for c in &mut v {
        *c /= norm;
    }
    AmplitudeVector::new(basis, v, Frame::Rotating).unwrap()
}

#[test]
fn concurrences_do_not_depend_on_the_frame() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..20 {
        let params = SystemParams::from_detunings(
            20.0,
            rng.gen_range(-1.5..1.5),
            rng.gen_range(-1.5..1.5),
            rng.gen_range(0.3..2.0),
            rng.gen_range(0.3..2.0),
        )
        .unwrap();
        let tbar = rng.gen_range(0.0..10.0);

        let d0 = random_state(&mut rng, ManifoldBasis::SingleExcitation);
        let rot = analytic::evolve_single_excitation(&params, &d0, tbar).unwrap();
        let lab = analytic::to_lab_frame(&params, &rot, tbar).unwrap();
        let a = pairwise_concurrences_single(&rot).unwrap();
        let b = pairwise_concurrences_single(&lab).unwrap();
        for pair in PairLabel::ALL {
            assert!((a.get(pair) - b.get(pair)).abs() < 1e-14);
        }

        let resonant = SystemParams::from_detunings(
            20.0,
            0.0,
            0.0,
            rng.gen_range(0.3..2.0),
            rng.gen_range(0.3..2.0),
        )
        .unwrap();
        let d0 = random_state(&mut rng, ManifoldBasis::TwoExcitationWithGround);
        let rot = analytic::evolve_two_excitation_resonant(&resonant, &d0, tbar).unwrap();
        let lab = analytic::to_lab_frame(&resonant, &rot, tbar).unwrap();
        let a = pairwise_concurrences_double(&rot).unwrap();
        let b = pairwise_concurrences_double(&lab).unwrap();
        for pair in PairLabel::ALL {
            assert!((a.get(pair) - b.get(pair)).abs() < 1e-14);
        }
    }
}

#[test]
fn detection_is_bitwise_deterministic() {
    let params = SystemParams::from_detunings(20.0, 0.0, 0.0, 1.0, 1.0).unwrap();
    let build = || {
        let mut spec = SeriesSpec::new(params, InitialStateSpec::bell_phi(PI / 12.0, 0.0));
        spec.grid = TimeGrid::new(4.0 * PI, 3201).unwrap();
        compute_series(&spec).unwrap()
    };
    let a = build();
    let b = build();
    for pair in PairLabel::ALL {
        assert_eq!(a.series.pair(pair), b.series.pair(pair));
    }
    let ra = detect_esd(&a.series, &a.regime, PairLabel::AtomAtom, 1e-9).unwrap();
    let rb = detect_esd(&b.series, &b.regime, PairLabel::AtomAtom, 1e-9).unwrap();
    assert_eq!(ra, rb);
    let ta = find_transfer_times(&a.series, &a.regime, PairLabel::AtomACavA, 1e-3).unwrap();
    let tb = find_transfer_times(&b.series, &b.regime, PairLabel::AtomACavA, 1e-3).unwrap();
    assert_eq!(ta, tb);
}

#[test]
fn both_engines_agree_on_random_regimes() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for _ in 0..5 {
        let params = SystemParams::from_detunings(
            20.0,
            rng.gen_range(-1.2..1.2),
            rng.gen_range(-1.2..1.2),
            rng.gen_range(0.4..1.8),
            rng.gen_range(0.4..1.8),
        )
        .unwrap();
        let alpha = rng.gen_range(0.1..FRAC_PI_4);
        let mut spec = SeriesSpec::new(params, InitialStateSpec::bell_psi(alpha, 0.3));
        spec.grid = TimeGrid::new(2.0 * PI, 65).unwrap();
        spec.engine = Engine::Both;
        let out = compute_series(&spec).unwrap();
        assert!(out.cross_check.unwrap() < 1e-8);
    }
}

#[test]
fn sweeps_are_deterministic_with_complete_cell_grids() {
    let params = SystemParams::from_detunings(20.0, 0.0, 0.0, 1.0, 1.0).unwrap();
    let mut base = SeriesSpec::new(params, InitialStateSpec::bell_psi(FRAC_PI_4, 0.0));
    base.grid = TimeGrid::new(2.0 * PI, 4001).unwrap();
    let spec = SweepSpec::new(
        base,
        vec![
            SweepAxis::new(AxisKind::CommonDetuning, vec![0.0, 0.7, 1.4]).unwrap(),
            SweepAxis::new(AxisKind::CouplingRatio, vec![1.0, 2.0, 3.0]).unwrap(),
        ],
    );
    let a = sweep(&spec).unwrap();
    let b = sweep(&spec).unwrap();
    assert_eq!(a.cells().len(), 9);
    assert_eq!(a.shape(), (3, 3));
    for (ca, cb) in a.cells().iter().zip(b.cells()) {
        assert_eq!(ca, cb);
    }
}

#[test]
fn death_windows_are_sorted_disjoint_and_persistent() {
    let params = SystemParams::from_detunings(20.0, 0.0, 0.0, 1.0, 1.0).unwrap();
    for alpha in [PI / 16.0, PI / 12.0, PI / 10.0] {
        let mut spec = SeriesSpec::new(params, InitialStateSpec::bell_phi(alpha, 0.0));
        spec.grid = TimeGrid::new(4.0 * PI, 4801).unwrap();
        let out = compute_series(&spec).unwrap();
        let report = detect_esd(&out.series, &out.regime, PairLabel::AtomAtom, 1e-9).unwrap();
        assert!(report.has_esd(), "alpha={alpha} should show death windows");
        let mut prev_end = f64::NEG_INFINITY;
        for &(start, end) in &report.intervals {
            assert!(start > prev_end, "windows must be sorted and disjoint");
            assert!(end - start >= 2.0 * report.grid_resolution * (1.0 - 1e-12));
            assert!(start >= 0.0 && end <= 4.0 * PI);
            prev_end = end;
        }
        assert!((report.total_duration() - 4.0 * (PI - 2.0 * alpha.tan().sqrt().asin())).abs() < 0.01);
    }
}

#[test]
fn transfer_events_are_sorted_interior_and_near_one() {
    let cases = [
        (1.0, 1.0, PairLabel::CavCav),
        (4.0 / 3.0, 2.0 / 3.0, PairLabel::AtomACavB),
        (1.5, 0.5, PairLabel::CavCav),
    ];
    for (g1, g2, pair) in cases {
        let params = SystemParams::from_detunings(20.0, 0.0, 0.0, g1, g2).unwrap();
        let mut spec = SeriesSpec::new(params, InitialStateSpec::bell_psi(FRAC_PI_4, 0.0));
        spec.grid = TimeGrid::new(4.0 * PI, 9601).unwrap();
        let out = compute_series(&spec).unwrap();
        let events = find_transfer_times(&out.series, &out.regime, pair, 1e-3).unwrap();
        assert!(!events.is_empty());
        let mut prev = 0.0;
        for ev in &events {
            assert!(ev.value >= 1.0 - 1e-3 && ev.value <= 1.0);
            assert!(ev.time > prev && ev.time < 4.0 * PI);
            prev = ev.time;
        }
    }
}

#[test]
fn redundant_series_columns_match_the_pair_data() {
    let params = SystemParams::from_detunings(20.0, 0.4, 0.4, 1.0, 1.0).unwrap();
    let mut spec = SeriesSpec::new(params, InitialStateSpec::bell_psi(FRAC_PI_4, 0.0));
    spec.grid = TimeGrid::new(2.0 * PI, 301).unwrap();
    let out = compute_series(&spec).unwrap();
    for i in 0..out.series.len() {
        let sq: f64 = PairLabel::NONLOCAL
            .iter()
            .map(|&p| {
                let v = out.series.pair(p)[i];
                v * v
            })
            .sum();
        assert_eq!(out.series.sspc[i], sq);
        let sum = out.series.pair(PairLabel::AtomAtom)[i] + out.series.pair(PairLabel::CavCav)[i];
        assert_eq!(out.series.sum_atoms_cavities[i], sum);
    }
}
