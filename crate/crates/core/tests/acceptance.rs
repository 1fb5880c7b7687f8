//! Acceptance gate. Runs as a plain binary (no libtest harness) so that the
//! PASS/FAIL lines are always visible; exits non-zero if any criterion fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lsbec_core::bounds::{
    box_decomposition_bound, box_masses, hard_core_eigenstate_bound, scaling_diagnostics, smooth_step,
    trial_constants, trial_state_energy_from_lengths, Diagnostic, PowerLogLaw, ScalingSpec, Trend,
};
use lsbec_core::disorder::{sample_realization, EnsembleSeed};
use lsbec_core::lab::{estimate_saturation_density, run_ensemble, ExperimentConfig};
use lsbec_core::spectrum::{build_converged_spectrum, ground_mode};
use lsbec_core::thermo::CanonicalGas;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    lsbec_core::lab::quantile_sorted(&v, 0.5)
}

fn enumerate(energies: &[f64], beta: f64, n: u32) -> (f64, Vec<f64>) {
    fn rec(e: &[f64], beta: f64, left: u32, occ: &mut Vec<u32>, z: &mut f64, mean: &mut [f64]) {
        if occ.len() + 1 == e.len() {
            occ.push(left);
            let energy: f64 = occ.iter().zip(e).map(|(&k, &x)| k as f64 * x).sum();
            let w = (-beta * energy).exp();
            *z += w;
            for (m, &k) in mean.iter_mut().zip(occ.iter()) {
                *m += w * k as f64;
            }
            occ.pop();
            return;
        }
        for k in 0..=left {
            occ.push(k);
            rec(e, beta, left - k, occ, z, mean);
            occ.pop();
        }
    }
    let mut z = 0.0;
    let mut mean = vec![0.0; energies.len()];
    rec(energies, beta, n, &mut Vec::new(), &mut z, &mut mean);
    mean.iter_mut().for_each(|m| *m /= z);
    (z, mean)
}

fn canonical_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let levels = rng.random_range(1..=4);
        let energies: Vec<f64> = (0..levels).map(|_| rng.random_range(0.0..3.0)).collect();
        let beta = rng.random_range(0.1..=5.0);
        let n = rng.random_range(1..=6u32);
        let gas = match CanonicalGas::new(&energies, beta, n as u64) {
            Ok(g) => g,
            Err(e) => return outcome(false, format!("recursion failed: {e}")),
        };
        let (z, mean) = enumerate(&energies, beta, n);
        worst = worst.max((gas.absolute_log_partition(n as usize).exp() - z).abs());
        for (j, m) in mean.iter().enumerate() {
            worst = worst.max((gas.occupation(j) - m).abs());
        }
    }
    outcome(worst <= 1e-10, format!("max abs deviation {worst:.3e} (tol 1e-10)"))
}

fn conservation_at_scale() -> Outcome {
    let r = sample_realization(1.0, 1.0e4, EnsembleSeed::new(2, 0)).unwrap();
    let s = build_converged_spectrum(&r, 1.0).unwrap();
    let n = 1000u64;
    let gas = CanonicalGas::new(s.energies(), 1.0, n).unwrap();
    let total: f64 = gas.occupations().iter().sum();
    let err = (total - n as f64).abs();
    outcome(
        s.len() >= 10_000 && err <= 1e-8 * n as f64,
        format!("{} modes, |Σn_j − N| = {err:.3e} (tol {:.1e})", s.len(), 1e-8 * n as f64),
    )
}

fn longest_interval_sandwich() -> Outcome {
    let mut cfg = ExperimentConfig::default();
    cfg.set("checks", "longest_interval").unwrap();
    cfg.set("n_schedule", "1000,10000,100000").unwrap();
    cfg.set("realizations_per_n", "200").unwrap();
    cfg.set("epsilon", "0.5").unwrap();
    cfg.set("alpha", "5").unwrap();
    cfg.base_seed = 3;
    let report = run_ensemble(&cfg).unwrap();
    let f: Vec<f64> = cfg.n_schedule.iter().map(|&n| report.pass_fraction(n, "li_pass")).collect();
    let monotone = f.windows(2).all(|w| w[1] >= w[0]);
    outcome(monotone && f[2] >= 0.95, format!("pass fractions {f:?}"))
}

fn long_interval_count() -> Outcome {
    let mut cfg = ExperimentConfig::default();
    cfg.set("checks", "long_intervals").unwrap();
    cfg.set("n_schedule", "10000").unwrap();
    cfg.set("realizations_per_n", "200").unwrap();
    cfg.base_seed = 4;
    let report = run_ensemble(&cfg).unwrap();
    let all = report.pass_fraction(10_000, "long_pass");
    let per_n = report.column(10_000, "long_count_per_n");
    let mean = per_n.iter().sum::<f64>() / per_n.len() as f64;
    let target = (-3f64).exp();
    let rel = (mean - target).abs() / target;
    outcome(
        all == 1.0 && rel <= 0.1,
        format!("pass fraction {all}, mean count/N {mean:.5} vs e^-3 {target:.5} (rel {rel:.3})"),
    )
}

fn hard_core_decay() -> Outcome {
    let mut worst = 0.0f64;
    let mut at_top = 0.0;
    for n in [1e4f64, 1e8, 1e12] {
        let a = n.powf(-0.25);
        let got = hard_core_eigenstate_bound(5.0, 1.0, n, a).unwrap();
        let want = 25.0 * n.ln().powi(2) / n.sqrt();
        worst = worst.max((got - want).abs() / want);
        at_top = got;
    }
    let n = 1.0e5f64;
    let a = n.powf(-0.25);
    let eigenstate = hard_core_eigenstate_bound(5.0, 1.0, n, a).unwrap();
    let hits = (0..200u64)
        .filter(|&i| {
            let r = sample_realization(1.0, n, EnsembleSeed::new(5, i)).unwrap();
            let masses = box_masses(&ground_mode(&r), a).unwrap();
            box_decomposition_bound(&masses, n) <= eigenstate
        })
        .count();
    let frac = hits as f64 / 200.0;
    outcome(
        worst <= 1e-12 && frac >= 0.95,
        format!("formula rel err {worst:.2e}, value at 1e12 {at_top:.5}, sampled pass fraction {frac}"),
    )
}

fn scaling() -> Outcome {
    let grid = lsbec_core::bounds::decade_grid(2, 12);
    let trend = |spec: ScalingSpec, d: Diagnostic| scaling_diagnostics(&spec, &grid).unwrap().column(d).unwrap().tail_trend;
    let hc = |delta: f64| ScalingSpec {
        hard_core_radius: Some(PowerLogLaw::power(1.0, -delta)),
        ..Default::default()
    };
    let range = |alpha: f64| ScalingSpec {
        interaction_range: Some(PowerLogLaw::power(1.0, -alpha)),
        interaction_floor: Some(PowerLogLaw::constant(1.0)),
        ..Default::default()
    };
    let t = [
        trend(hc(0.25), Diagnostic::HardCore),
        trend(hc(0.6), Diagnostic::HardCore),
        trend(range(0.2), Diagnostic::FloorRange),
        trend(range(0.4), Diagnostic::FloorRange),
    ];
    let ok = t[0] == Trend::Decreasing
        && t[1] == Trend::Increasing
        && t[2] == Trend::Increasing
        && t[3] != Trend::Increasing;
    outcome(
        ok,
        format!(
            "δ=0.25 {}, δ=0.6 {}, α=0.2 {}, α=0.4 {}",
            t[0].as_str(),
            t[1].as_str(),
            t[2].as_str(),
            t[3].as_str()
        ),
    )
}

fn condensate_trend() -> Outcome {
    let rho_sat = estimate_saturation_density(1.0, 1.0, 1.0e4, 20, 7).unwrap();
    let mut cfg = ExperimentConfig {
        density: 2.0 * rho_sat,
        ..Default::default()
    };
    cfg.set("checks", "thermo").unwrap();
    cfg.set("n_schedule", "100,1000,10000").unwrap();
    cfg.set("realizations_per_n", "50").unwrap();
    cfg.base_seed = 7;
    let report = match run_ensemble(&cfg) {
        Ok(r) => r,
        Err(e) => return outcome(false, format!("ensemble failed: {e}")),
    };
    let m: Vec<f64> = cfg
        .n_schedule
        .iter()
        .map(|&n| median(report.column(n, "condensate_density")))
        .collect();
    outcome(
        m.iter().all(|&x| x > 0.0) && m[2] >= 0.5 * m[0],
        format!("ρ_sat {rho_sat:.5}, ρ {:.5}, median condensate density {m:.5?}", cfg.density),
    )
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut acc = f(a) + f(b);
    for i in 1..panels {
        acc += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

fn trial_energy() -> Outcome {
    let step = 1e-5;
    let fd = |t: f64| (smooth_step(t + step) - smooth_step(t - step)) / (2.0 * step);
    let oracle = 2.0 * simpson(|t| fd(t).powi(2), 0.0, 1.0, 200_000);
    let kappa = trial_constants().kinetic;
    let e = trial_state_energy_from_lengths([3.0, 3.0, 4.0], 10.0, 10, 1.0).unwrap();
    let diff = (kappa - oracle).abs();
    outcome(
        diff <= 1e-6 && e.interaction_per_particle == 5.0,
        format!(
            "κ {kappa:.12} vs oracle {oracle:.12} (diff {diff:.2e}), interaction {}",
            e.interaction_per_particle
        ),
    )
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("scan.conf");
    std::fs::write(
        &config,
        "intensity = 1\n\
         density = 0.5\n\
         beta = 1\n\
         n_schedule = 100, 1000\n\
         realizations_per_n = 8\n\
         base_seed = 11\n\
         hard_core_radius = 1, -0.25\n\
         interaction_range = 1, -0.2\n\
         interaction_floor = 1\n\
         checks = longest_interval, long_intervals, thermo, hard_core, scaling, trial_energy\n",
    )
    .unwrap();
    let run = |tag: &str| -> Option<(Vec<u8>, Vec<u8>)> {
        let out = dir.path().join(tag);
        let status = Command::new(env!("CARGO_BIN_EXE_lsbec"))
            .arg("scan")
            .arg("--config")
            .arg(&config)
            .arg("--output-dir")
            .arg(&out)
            .output()
            .ok()?;
        if !status.status.success() {
            return None;
        }
        Some((
            std::fs::read(out.join("summary.csv")).ok()?,
            std::fs::read(out.join("records.csv")).ok()?,
        ))
    };
    match (run("a"), run("b")) {
        (Some(a), Some(b)) => outcome(
            a == b,
            format!("summary {} bytes, records {} bytes", a.0.len(), a.1.len()),
        ),
        _ => outcome(false, "scan invocation failed"),
    }
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 canonical oracle equivalence", Duration::from_secs(5), canonical_oracle),
        ("2 conservation at scale", Duration::from_secs(30), conservation_at_scale),
        ("3 longest-interval sandwich", Duration::from_secs(120), longest_interval_sandwich),
        ("4 long-interval count", Duration::from_secs(60), long_interval_count),
        ("5 hard-core bound decay", Duration::from_secs(120), hard_core_decay),
        ("6 scaling diagnostics", Duration::from_secs(1), scaling),
        ("7 condensate trend", Duration::from_secs(600), condensate_trend),
        ("8 trial-state energy", Duration::from_secs(1), trial_energy),
        ("9 scan determinism", Duration::from_secs(600), determinism),
    ];
    let mut failures = 0;
    for (name, budget, run) in criteria {
        let start = Instant::now();
        let o = run();
        let elapsed = start.elapsed();
        let ok = o.passed && elapsed <= budget;
        if !ok {
            failures += 1;
        }
        println!(
            "[{}] criterion {name}: {} ({:.3}s, budget {}s)",
            if ok { "PASS" } else { "FAIL" },
            o.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
