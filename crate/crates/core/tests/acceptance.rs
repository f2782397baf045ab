//! Acceptance run: one line per criterion, nonzero exit on any failure.
//!
//! `cargo test --test acceptance` (add `--release` for a faster run).

mod common;

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};
use std::process::ExitCode;
use std::time::Instant;

use hybrid_ecp::analysis::{default_grid, sweep_yields, yield_bs, yield_qnd_rounds, yield_qnd_total, yield_single, yield_vbs};
use hybrid_ecp::measurement::{
    detect_photon, homodyne_phase_class, measure_photon_number, measure_polarization, photon_number_cutoff, MeasurementOutcome, PolarizationBasis,
};
use hybrid_ecp::protocols::BranchRecord;
use hybrid_ecp::state::coherent_overlap;
use hybrid_ecp::{run_monte_carlo, run_protocol, HybridState, ModeId, OverlapMode, ProtocolId, ProtocolParams, SimConfig, Verdict, C64};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

fn two_ab2(a: f64) -> f64 {
    2.0 * a * a * (1.0 - a * a)
}

fn ideal() -> SimConfig {
    SimConfig::ideal()
}

fn success_fidelities_are_one(id: ProtocolId, a: f64, branches: &[BranchRecord]) -> Result<usize, String> {
    let mut n = 0;
    for b in branches.iter().filter(|b| b.verdict == Verdict::Success) {
        let f = b.fidelity.ok_or("success branch without fidelity")?;
        ensure!((f - 1.0).abs() <= 1e-10, "{id} a={a}: fidelity {f} on {:?}", b.path);
        n += 1;
    }
    Ok(n)
}

fn ac1() -> Check {
    let beta = C64::new(1.3, 0.4);
    for a in [0.3, 0.5, FRAC_1_SQRT_2, 0.6, 0.9] {
        let r = run_protocol(ProtocolId::Bs, &ProtocolParams::new(a).with_beta(beta), ideal()).map_err(|e| e.to_string())?;
        let err = (r.success_probability - two_ab2(a)).abs();
        ensure!(err <= 1e-10, "a={a}: success {} vs {}", r.success_probability, two_ab2(a));
        success_fidelities_are_one(ProtocolId::Bs, a, &r.branches)?;
        for b in r.successes() {
            for ket in b.output.as_ref().unwrap().kets() {
                let d1 = ket.coherents.get(&ModeId::new("d1")).unwrap();
                let d2 = ket.coherents.get(&ModeId::new("d2")).unwrap();
                ensure!(d1.norm() <= 1e-12, "d1 amplitude {d1}");
                ensure!((d2.norm() - SQRT_2 * beta.norm()).abs() <= 1e-12, "d2 amplitude {d2}");
                ensure!((d2 - SQRT_2 * beta).norm() <= 1e-12 || (d2 + SQRT_2 * beta).norm() <= 1e-12, "d2 amplitude {d2} is not ±√2β");
            }
        }
    }
    let r = run_protocol(ProtocolId::Bs, &ProtocolParams::new(FRAC_1_SQRT_2), ideal()).map_err(|e| e.to_string())?;
    ensure!((r.success_probability - 0.5).abs() <= 1e-10, "balanced success {}", r.success_probability);
    Ok(format!("a=1/√2 success {:.12}; d2 amplitude ±√2β on all success branches", r.success_probability))
}

fn ac2() -> Check {
    let n_max = photon_number_cutoff(2.0);
    for a in [0.3, 0.5, FRAC_1_SQRT_2, 0.6, 0.9] {
        let p = ProtocolParams::new(a).with_beta(C64::new(2.0, 0.0));
        let r = run_protocol(ProtocolId::BsImproved, &p, ideal()).map_err(|e| e.to_string())?;
        ensure!((r.success_probability - two_ab2(a)).abs() <= 1e-10, "a={a}: success {}", r.success_probability);
        let n = success_fidelities_are_one(ProtocolId::BsImproved, a, &r.branches)?;
        let seen: Vec<usize> = r
            .branches
            .iter()
            .filter_map(|b| b.path.last().and_then(|s| s.outcome.strip_prefix("n=")).map(|x| x.parse().unwrap()))
            .collect();
        ensure!(seen.iter().max() == Some(&n_max), "photon numbers enumerated up to {:?}, cutoff {n_max}", seen.iter().max());
        ensure!(n > 2 * 20, "only {n} success branches");
        let odd_fixed = r.successes().any(|b| b.path.iter().any(|s| s.outcome == "+") && b.path.iter().any(|s| s.outcome == "n=1") && !b.corrections_applied.is_empty());
        ensure!(odd_fixed, "odd photon number after '+' was not corrected");
    }
    Ok(format!("fidelity 1 on all ± × n ≤ {n_max} success branches"))
}

fn ac3() -> Check {
    for n in 1..=3 {
        for m in 1..=3 {
            for a in [0.6, FRAC_1_SQRT_2, 0.35] {
                let p = ProtocolParams::new(a).with_parties(n, m);
                let r = run_protocol(ProtocolId::BsMulti, &p, ideal()).map_err(|e| e.to_string())?;
                ensure!((r.success_probability - two_ab2(a)).abs() <= 1e-10, "N={n} M={m} a={a}: {}", r.success_probability);
                let count = success_fidelities_are_one(ProtocolId::BsMulti, a, &r.branches)?;
                ensure!(count == 1 << n, "N={n}: {count} success branches");
            }
        }
    }
    let single = run_protocol(ProtocolId::Bs, &ProtocolParams::new(0.6), ideal()).map_err(|e| e.to_string())?;
    let multi = run_protocol(ProtocolId::BsMulti, &ProtocolParams::new(0.6), ideal()).map_err(|e| e.to_string())?;
    ensure!(single.branches == multi.branches, "N=M=1 tree differs from the two-pair tree");
    Ok("9 (N, M) pairs × 3 coefficients; 2^N parity branches at fidelity 1".into())
}

fn ac4() -> Check {
    let mut branches = 0;
    for id in [ProtocolId::SinglePhoton, ProtocolId::SinglePhotonMulti] {
        for a in [0.3, 0.6, FRAC_1_SQRT_2, 0.9] {
            let r = run_protocol(id, &ProtocolParams::new(a).with_parties(2, 2), ideal()).map_err(|e| e.to_string())?;
            ensure!((r.success_probability - two_ab2(a)).abs() <= 1e-10, "{id} a={a}: {}", r.success_probability);
            success_fidelities_are_one(id, a, &r.branches)?;
            for b in &r.branches {
                ensure!(!b.comm.is_empty(), "{id}: branch without communication record");
                for c in &b.comm {
                    ensure!(c.receiver != "Alice" && c.sender == "Alice", "{id}: message {c:?}");
                }
                branches += 1;
            }
        }
    }
    Ok(format!("no message to Alice on any of {branches} branches"))
}

fn ac5() -> Check {
    for a in [0.3, 0.6, FRAC_1_SQRT_2, 0.8f64.sqrt()] {
        let r = run_protocol(ProtocolId::Qnd, &ProtocolParams::new(a).with_rounds(2), ideal()).map_err(|e| e.to_string())?;
        let (a2, b2) = (a * a, 1.0 - a * a);
        ensure!((r.rounds[0] - 2.0 * a2 * b2).abs() <= 1e-10, "a={a}: round 1 {}", r.rounds[0]);
        let r2 = 2.0 * a2 * a2 * b2 * b2 / (a2 * a2 + b2 * b2);
        ensure!((r.rounds[1] - r2).abs() <= 1e-10, "a={a}: round 2 {} vs {r2}", r.rounds[1]);
    }
    let r = run_protocol(ProtocolId::Qnd, &ProtocolParams::new(FRAC_1_SQRT_2).with_rounds(10), ideal()).map_err(|e| e.to_string())?;
    let total: f64 = r.rounds.iter().sum();
    ensure!((total - 0.9990234375).abs() <= 1e-12, "K=10 cumulative {total}");
    ensure!((r.success_probability - total).abs() <= 1e-12, "rounds do not add up to the success probability");
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..5 {
        let a: f64 = rng.random_range(0.05..0.95);
        let r = run_protocol(ProtocolId::Qnd, &ProtocolParams::new(a).with_rounds(6), ideal()).map_err(|e| e.to_string())?;
        let expect = yield_qnd_rounds(a, 6).map_err(|e| e.to_string())?;
        for (k, (x, y)) in r.rounds.iter().zip(&expect).enumerate() {
            ensure!((x - y).abs() <= 1e-10, "a={a} round {}: {x} vs {y}", k + 1);
        }
        success_fidelities_are_one(ProtocolId::Qnd, a, &r.branches)?;
    }
    Ok(format!("K=10 cumulative {total:.12}"))
}

fn ac6() -> Check {
    for a in [0.3, 0.6, FRAC_1_SQRT_2, 0.8] {
        let r = run_protocol(ProtocolId::Vbs, &ProtocolParams::new(a), ideal()).map_err(|e| e.to_string())?;
        let expect = 2.0 * (a * a).min(1.0 - a * a);
        ensure!((r.success_probability - expect).abs() <= 1e-10, "a={a}: {} vs {expect}", r.success_probability);
        success_fidelities_are_one(ProtocolId::Vbs, a, &r.branches)?;
    }
    let low = run_protocol(ProtocolId::Vbs, &ProtocolParams::new(0.6), ideal()).map_err(|e| e.to_string())?;
    let high = run_protocol(ProtocolId::Vbs, &ProtocolParams::new(0.8).with_coefficients(0.8, 0.6), ideal()).map_err(|e| e.to_string())?;
    ensure!((low.success_probability - 0.72).abs() <= 1e-10, "a=0.6: {}", low.success_probability);
    ensure!((high.success_probability - low.success_probability).abs() <= 1e-12, "a↔b asymmetry");
    ensure!(high.metadata["pre_rotation"] == "true", "a > b did not take the rotation path");
    ensure!(high.successes().all(|b| b.corrections_applied == ["bit-flip a3"]), "rotation was not undone on success");
    Ok(format!("a=0.6 {:.12}, a=0.8 {:.12}", low.success_probability, high.success_probability))
}

fn ac7() -> Check {
    let curve = sweep_yields(&default_grid(), 10).map_err(|e| e.to_string())?;
    ensure!(curve.rows.len() == 99, "grid has {} points", curve.rows.len());
    let gap = curve.max_qnd_vbs_gap();
    ensure!(gap <= 1.1e-3, "max gap {gap}");
    let peak_qnd = yield_qnd_total(FRAC_1_SQRT_2, 10).unwrap();
    let peak_vbs = yield_vbs(FRAC_1_SQRT_2).unwrap();
    ensure!(peak_qnd >= 0.999 && peak_vbs >= 0.999, "peaks {peak_qnd} {peak_vbs}");
    for r in &curve.rows {
        ensure!(r.y_qnd_total < peak_qnd && r.y_vbs < peak_vbs, "grid point a={} exceeds the value at 1/√2", r.a);
    }
    ensure!((yield_bs(FRAC_1_SQRT_2).unwrap() - 0.25).abs() <= 1e-12, "Y1");
    ensure!((yield_single(FRAC_1_SQRT_2).unwrap() - 0.5).abs() <= 1e-12, "Y'1");
    Ok(format!("max |Y_qnd − Y_vbs| = {gap:.3e}; peak {peak_qnd:.10} / {peak_vbs}"))
}

fn ac8() -> Check {
    let mut compared = 0;
    for id in ProtocolId::ALL {
        let p = ProtocolParams::new(0.6).with_beta(C64::new(1.0, 0.0)).with_parties(2, 2).with_rounds(3);
        let i = run_protocol(id, &p, SimConfig::ideal()).map_err(|e| e.to_string())?;
        let e = run_protocol(id, &p, SimConfig::exact()).map_err(|e| e.to_string())?;
        ensure!(i.branches.len() == e.branches.len(), "{id}: {} vs {} branches", i.branches.len(), e.branches.len());
        for (x, y) in i.branches.iter().zip(&e.branches) {
            ensure!(x.path == y.path, "{id}: paths differ");
            ensure!((x.probability - y.probability).abs() <= 1e-12, "{id} {:?}: {} vs {}", x.path, x.probability, y.probability);
            compared += 1;
        }
    }
    Ok(format!("{compared} branch probabilities agree"))
}

fn ac9() -> Check {
    let trials = 100_000u64;
    let cfg = SimConfig::ideal().with_seed(7);
    let mut worst: f64 = 0.0;
    for id in ProtocolId::ALL {
        let p = ProtocolParams::new(0.6).with_parties(2, 2).with_rounds(3);
        let exact = run_protocol(id, &p, cfg).map_err(|e| e.to_string())?.success_probability;
        let first = run_monte_carlo(id, &p, cfg, trials).map_err(|e| e.to_string())?;
        let sigma = (exact * (1.0 - exact) / trials as f64).sqrt();
        let z = (first.success_frequency - exact).abs() / sigma;
        ensure!(z <= 3.0, "{id}: frequency {} vs {exact} ({z:.2}σ)", first.success_frequency);
        worst = worst.max(z);
        let again = run_monte_carlo(id, &p, cfg, trials).map_err(|e| e.to_string())?;
        ensure!(first == again, "{id}: repeated run differs");
    }
    Ok(format!("10^5 trials × 7 protocols, worst deviation {worst:.2}σ, repeat runs identical"))
}

fn outcome_sum(outcomes: &[MeasurementOutcome]) -> f64 {
    outcomes.iter().map(|o| o.probability).sum()
}

fn ac10() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut drift: f64 = 0.0;
    let mut per_element: BTreeMap<String, usize> = BTreeMap::new();
    for i in 0..10_000 {
        let mode = if i % 2 == 0 { OverlapMode::IdealOrthogonal } else { OverlapMode::ExactOverlap };
        let s = common::random_state(&mut rng, mode);
        let (name, out) = common::apply_random_element(&mut rng, &s).map_err(|e| e.to_string())?;
        drift = drift.max((out.norm_sqr() - 1.0).abs());
        ensure!(drift <= 1e-12, "{name}: norm drift {drift}");
        *per_element.entry(name).or_default() += 1;
    }

    let mut meas_err: f64 = 0.0;
    for i in 0..2_000 {
        let mode = if i % 2 == 0 { OverlapMode::IdealOrthogonal } else { OverlapMode::ExactOverlap };
        let s = common::random_state(&mut rng, mode);
        let sums = [
            outcome_sum(&detect_photon(&s, "x").map_err(|e| e.to_string())?),
            outcome_sum(&detect_photon(&s, "y").map_err(|e| e.to_string())?),
        ];
        for x in sums {
            meas_err = meas_err.max((x - 1.0).abs());
        }
        if s.kets().iter().all(|k| k.photons.count_in(&ModeId::new("x")) == 1) {
            for basis in [PolarizationBasis::HV, PolarizationBasis::PlusMinus] {
                let o = measure_polarization(&s, "x", basis).map_err(|e| e.to_string())?;
                meas_err = meas_err.max((outcome_sum(&o) - 1.0).abs());
            }
        }
        if mode == OverlapMode::ExactOverlap {
            let o = measure_photon_number(&s, "p").map_err(|e| e.to_string())?;
            meas_err = meas_err.max((outcome_sum(&o) - 1.0).abs());
        }
        let probe = HybridState::coherent("z", C64::new(3.0, 0.0), *s.config()).map_err(|e| e.to_string())?;
        let shifted = hybrid_ecp::optics::apply_cross_kerr(&s.tensor(&probe).map_err(|e| e.to_string())?, &hybrid_ecp::optics::KerrSetting::new("x", "z", 0.6, -0.6))
            .map_err(|e| e.to_string())?;
        let o = homodyne_phase_class(&shifted, "z", 0.3, C64::new(3.0, 0.0)).map_err(|e| e.to_string())?;
        meas_err = meas_err.max((outcome_sum(&o) - 1.0).abs());
        ensure!(meas_err <= 1e-9, "measurement probabilities off by {meas_err}");
    }

    let mut min_eig = f64::INFINITY;
    for _ in 0..500 {
        // small amplitudes give nearly parallel kets and a nearly singular matrix
        let n = rng.random_range(2..=10);
        let scale = if rng.random_bool(0.5) { 0.3 } else { 2.0 };
        let kets: Vec<Vec<C64>> = (0..n).map(|_| (0..3).map(|_| common::random_amplitude(&mut rng, true, scale)).collect()).collect();
        let gram = DMatrix::from_fn(n, n, |i, j| kets[i].iter().zip(&kets[j]).map(|(x, y)| coherent_overlap(*x, *y)).product::<C64>());
        let eig = gram.symmetric_eigenvalues();
        min_eig = min_eig.min(eig.iter().cloned().fold(f64::INFINITY, f64::min));
    }
    ensure!(min_eig >= -1e-10, "Gram eigenvalue {min_eig}");

    for i in 0..2_000 {
        let mode = if i % 2 == 0 { OverlapMode::IdealOrthogonal } else { OverlapMode::ExactOverlap };
        let s = common::random_state(&mut rng, mode);
        ensure!(s.canonicalize() == s, "canonicalize is not idempotent");
    }
    Ok(format!("norm drift {drift:.1e} over 10^4 states {per_element:?}; measurement error {meas_err:.1e}; min Gram eigenvalue {min_eig:.1e}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("AC1", "BS protocol success and output amplitude", ac1),
        ("AC2", "BS-improved protocol with joint correction", ac2),
        ("AC3", "multiparty BS protocol", ac3),
        ("AC4", "single-photon protocol, one-way communication", ac4),
        ("AC5", "QND rounds and cumulative success", ac5),
        ("AC6", "VBS protocol and a↔b symmetry", ac6),
        ("AC7", "yield sweep, K=10", ac7),
        ("AC8", "overlap-mode equivalence", ac8),
        ("AC9", "Monte Carlo consistency and reproducibility", ac9),
        ("AC10", "property suites", ac10),
    ];
    let mut failed = 0;
    for (tag, name, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] {tag} {name}: {detail} ({secs:.1}s)"),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {tag} {name}: {why} ({secs:.1}s)");
            }
        }
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
