//! Monte Carlo ensembles over disorder realizations and particle numbers.
//!
//! The thermodynamic limit `N → ∞` at fixed density `ρ` is realized as an
//! explicit schedule of particle numbers with box length `L_N = N / ρ`. For
//! every `(N, realization_index)` pair a realization is sampled, its spectrum
//! built when needed, and the requested checks run. Jobs run in parallel and
//! are merged in index order, so reports are a pure function of the config.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;

use crate::bounds::{
    check_hard_core, check_long_interval_count, check_longest_interval, check_subcritical, scaling_diagnostics,
    trial_state_energy, PowerLogLaw, ScalingSpec, ScalingTable,
};
use crate::disorder::{sample_realization, EnsembleSeed};
use crate::spectrum::build_converged_spectrum;
use crate::thermo::{condensate_profile, ensure_feasible, saturation_density};
use crate::{fmt_real, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Check {
    LongestInterval,
    LongIntervals,
    Thermo,
    HardCore,
    Scaling,
    TrialEnergy,
}

impl Check {
    pub const ALL: [Check; 6] = [
        Check::LongestInterval,
        Check::LongIntervals,
        Check::Thermo,
        Check::HardCore,
        Check::Scaling,
        Check::TrialEnergy,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Check::LongestInterval => "longest_interval",
            Check::LongIntervals => "long_intervals",
            Check::Thermo => "thermo",
            Check::HardCore => "hard_core",
            Check::Scaling => "scaling",
            Check::TrialEnergy => "trial_energy",
        }
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s.trim())
            .ok_or_else(|| {
                let known: Vec<_> = Check::ALL.iter().map(|c| c.name()).collect();
                Error::invalid(format!("unknown check `{s}` (known: {})", known.join(", ")))
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub intensity: f64,
    pub density: f64,
    pub beta: f64,
    pub n_schedule: Vec<u64>,
    pub realizations_per_n: u64,
    pub base_seed: u64,
    pub scaling: ScalingSpec,
    pub checks: BTreeSet<Check>,
    pub output_dir: PathBuf,
    pub top_k: usize,
    pub epsilon: f64,
    pub alpha: f64,
    pub interaction_l1_norm: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            intensity: 1.0,
            density: 1.0,
            beta: 1.0,
            n_schedule: vec![1000],
            realizations_per_n: 10,
            base_seed: 0,
            scaling: ScalingSpec::default(),
            checks: BTreeSet::new(),
            output_dir: PathBuf::from("lsbec-out"),
            top_k: 4,
            epsilon: 0.5,
            alpha: 5.0,
            interaction_l1_norm: 1.0,
        }
    }
}

fn parse_num<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::invalid(format!("`{key}`: cannot parse `{value}`")))
}

fn parse_law(key: &str, value: &str) -> Result<Option<PowerLogLaw>> {
    if value.trim().eq_ignore_ascii_case("none") || value.trim().is_empty() {
        return Ok(None);
    }
    let parts = value
        .split(',')
        .map(|p| parse_num::<f64>(key, p))
        .collect::<Result<Vec<_>>>()?;
    match parts.as_slice() {
        [c] => Ok(Some(PowerLogLaw::constant(*c))),
        [c, p] => Ok(Some(PowerLogLaw::power(*c, *p))),
        [c, p, q] => Ok(Some(PowerLogLaw::new(*c, *p, *q))),
        _ => Err(Error::invalid(format!(
            "`{key}` takes `coefficient[, exponent[, log_exponent]]`"
        ))),
    }
}

fn law_text(law: Option<PowerLogLaw>) -> String {
    match law {
        None => "none".into(),
        Some(l) => format!("{}, {}, {}", l.coefficient, l.exponent, l.log_exponent),
    }
}

impl ExperimentConfig {
    pub const KEYS: [&'static str; 16] = [
        "intensity",
        "density",
        "beta",
        "n_schedule",
        "realizations_per_n",
        "base_seed",
        "hard_core_radius",
        "interaction_range",
        "interaction_floor",
        "contact_width",
        "checks",
        "output_dir",
        "top_k",
        "epsilon",
        "alpha",
        "interaction_l1_norm",
    ];

    /// Sets one field from its text form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key.trim() {
            "intensity" => self.intensity = parse_num(key, value)?,
            "density" => self.density = parse_num(key, value)?,
            "beta" => self.beta = parse_num(key, value)?,
            "n_schedule" => {
                self.n_schedule = value
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| parse_num::<f64>(key, s).map(|x| x as u64))
                    .collect::<Result<_>>()?
            }
            "realizations_per_n" => self.realizations_per_n = parse_num(key, value)?,
            "base_seed" => self.base_seed = parse_num(key, value)?,
            "hard_core_radius" => self.scaling.hard_core_radius = parse_law(key, value)?,
            "interaction_range" => self.scaling.interaction_range = parse_law(key, value)?,
            "interaction_floor" => self.scaling.interaction_floor = parse_law(key, value)?,
            "contact_width" => self.scaling.contact_width = parse_law(key, value)?,
            "checks" => {
                self.checks = value
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(str::parse)
                    .collect::<Result<_>>()?
            }
            "output_dir" => self.output_dir = PathBuf::from(value.trim()),
            "top_k" => self.top_k = parse_num(key, value)?,
            "epsilon" => self.epsilon = parse_num(key, value)?,
            "alpha" => self.alpha = parse_num(key, value)?,
            "interaction_l1_norm" => self.interaction_l1_norm = parse_num(key, value)?,
            other => return Err(Error::invalid(format!("unknown config key `{other}`"))),
        }
        Ok(())
    }

    /// Applies a flat `key = value` file (`#` starts a comment) on top of the
    /// current values.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or(Error::Parse {
                line: n + 1,
                msg: "expected `key = value`".into(),
            })?;
            self.set(k, v).map_err(|e| Error::Parse {
                line: n + 1,
                msg: e.to_string(),
            })?;
        }
        Ok(())
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        cfg.apply_text(text)?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_text(&text)
    }

    pub fn to_text(&self) -> String {
        let schedule: Vec<String> = self.n_schedule.iter().map(u64::to_string).collect();
        let checks: Vec<&str> = self.checks.iter().map(Check::name).collect();
        let mut out = String::new();
        let _ = writeln!(out, "intensity = {}", self.intensity);
        let _ = writeln!(out, "density = {}", self.density);
        let _ = writeln!(out, "beta = {}", self.beta);
        let _ = writeln!(out, "n_schedule = {}", schedule.join(", "));
        let _ = writeln!(out, "realizations_per_n = {}", self.realizations_per_n);
        let _ = writeln!(out, "base_seed = {}", self.base_seed);
        let _ = writeln!(out, "hard_core_radius = {}", law_text(self.scaling.hard_core_radius));
        let _ = writeln!(out, "interaction_range = {}", law_text(self.scaling.interaction_range));
        let _ = writeln!(out, "interaction_floor = {}", law_text(self.scaling.interaction_floor));
        let _ = writeln!(out, "contact_width = {}", law_text(self.scaling.contact_width));
        let _ = writeln!(out, "checks = {}", checks.join(", "));
        let _ = writeln!(out, "output_dir = {}", self.output_dir.display());
        let _ = writeln!(out, "top_k = {}", self.top_k);
        let _ = writeln!(out, "epsilon = {}", self.epsilon);
        let _ = writeln!(out, "alpha = {}", self.alpha);
        let _ = writeln!(out, "interaction_l1_norm = {}", self.interaction_l1_norm);
        out
    }

    /// `L_N = N / ρ`.
    pub fn box_length(&self, n: u64) -> f64 {
        n as f64 / self.density
    }

    /// Largest hard-core radius over the schedule.
    pub fn radius_sup(&self) -> Option<f64> {
        let law = self.scaling.hard_core_radius?;
        self.n_schedule
            .iter()
            .map(|&n| law.eval(n as f64))
            .reduce(f64::max)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("intensity", self.intensity), ("density", self.density), ("beta", self.beta)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(format!("{name} must be positive, got {v}")));
            }
        }
        if self.checks.is_empty() {
            return Err(Error::invalid("no checks requested"));
        }
        if self.n_schedule.is_empty() || self.n_schedule[0] < 2 {
            return Err(Error::invalid("n_schedule must be nonempty with N >= 2"));
        }
        if !self.n_schedule.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::invalid("n_schedule must be strictly increasing"));
        }
        if self.realizations_per_n == 0 {
            return Err(Error::invalid("realizations_per_n must be positive"));
        }
        self.scaling.validate()?;
        if let Some(sup) = self.radius_sup() {
            check_subcritical(self.density, sup)?;
        }
        if self.checks.contains(&Check::HardCore) && self.scaling.hard_core_radius.is_none() {
            return Err(Error::invalid("hard_core check needs `hard_core_radius`"));
        }
        if self.checks.contains(&Check::Scaling) && self.scaling.is_empty() {
            return Err(Error::invalid("scaling check needs at least one scaling sequence"));
        }
        if self.checks.contains(&Check::Thermo) {
            ensure_feasible(*self.n_schedule.iter().max().expect("nonempty"))?;
        }
        if self.checks.contains(&Check::LongestInterval) && self.box_length(self.n_schedule[0]) <= std::f64::consts::E {
            return Err(Error::Domain("longest_interval check needs L_N > e for every N".into()));
        }
        Ok(())
    }
}

/// Outputs of every requested check for one `(N, realization)` pair, in a
/// fixed column order.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleRecord {
    pub particle_number: u64,
    pub seed: EnsembleSeed,
    pub box_length: f64,
    pub point_count: usize,
    pub values: Vec<(String, f64)>,
}

impl EnsembleRecord {
    pub fn get(&self, column: &str) -> Option<f64> {
        self.values.iter().find(|(k, _)| k == column).map(|(_, v)| *v)
    }
}

/// A metric reported by a check: flags aggregate to pass fractions, values
/// to mean and quantiles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Metric {
    Value(&'static str),
    Flag(&'static str),
}

fn metrics(check: Check) -> &'static [Metric] {
    use Metric::*;
    match check {
        Check::LongestInterval => &[Value("l_max"), Value("li_lower"), Value("li_upper"), Flag("li_pass")],
        Check::LongIntervals => &[
            Value("long_count"),
            Value("long_threshold"),
            Value("long_count_per_n"),
            Flag("long_pass"),
        ],
        Check::Thermo => &[
            Value("ln_z"),
            Value("ground_energy"),
            Value("condensate_density"),
            Value("condensate_fraction"),
            Value("mode_count"),
            Flag("converged"),
        ],
        Check::HardCore => &[
            Value("radius"),
            Value("box_bound"),
            Value("eigenstate_bound"),
            Value("box_count_criterion"),
            Flag("hc_pass"),
        ],
        Check::Scaling => &[],
        Check::TrialEnergy => &[Value("count_q"), Value("kinetic_pp"), Value("interaction_pp_upper")],
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleReport {
    pub config: ExperimentConfig,
    pub records: Vec<EnsembleRecord>,
    pub scaling: Option<ScalingTable>,
}

impl EnsembleReport {
    pub fn records_for(&self, n: u64) -> impl Iterator<Item = &EnsembleRecord> {
        self.records.iter().filter(move |r| r.particle_number == n)
    }

    pub fn column(&self, n: u64, column: &str) -> Vec<f64> {
        self.records_for(n).filter_map(|r| r.get(column)).collect()
    }

    pub fn pass_fraction(&self, n: u64, flag: &str) -> f64 {
        let v = self.column(n, flag);
        v.iter().filter(|&&x| x > 0.5).count() as f64 / v.len().max(1) as f64
    }
}

/// Summary statistics with quantiles by linear interpolation between order
/// statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aggregate {
    pub mean: f64,
    pub q05: f64,
    pub median: f64,
    pub q95: f64,
}

pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn aggregate(values: &[f64]) -> Aggregate {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    Aggregate {
        mean: values.iter().sum::<f64>() / values.len().max(1) as f64,
        q05: quantile_sorted(&sorted, 0.05),
        median: quantile_sorted(&sorted, 0.5),
        q95: quantile_sorted(&sorted, 0.95),
    }
}

fn flag(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

fn run_one(config: &ExperimentConfig, n: u64, index: u64) -> Result<EnsembleRecord> {
    let seed = EnsembleSeed::new(config.base_seed, index);
    let box_length = config.box_length(n);
    let realization = sample_realization(config.intensity, box_length, seed)?;
    let mut values: Vec<(String, f64)> = Vec::new();
    let mut push = |k: &str, v: f64| values.push((k.to_string(), v));

    for check in &config.checks {
        match check {
            Check::LongestInterval => {
                let c = check_longest_interval(&realization, config.epsilon, config.alpha)?;
                push("l_max", c.l_max);
                push("li_lower", c.lower_bound);
                push("li_upper", c.upper_bound);
                push("li_pass", flag(c.passed()));
            }
            Check::LongIntervals => {
                let c = check_long_interval_count(&realization, config.density)?;
                push("long_count", c.count as f64);
                push("long_threshold", c.threshold);
                push("long_count_per_n", c.count as f64 / n as f64);
                push("long_pass", flag(c.passed));
            }
            Check::Thermo => {
                let spectrum = build_converged_spectrum(&realization, config.beta)?;
                let top_k = config.top_k.min(spectrum.len());
                let sol = condensate_profile(&spectrum, config.beta, n, top_k)?;
                push("ln_z", sol.log_partition());
                push("ground_energy", sol.ground_energy);
                push("condensate_density", sol.condensate_density);
                push("condensate_fraction", sol.condensate_fraction);
                push("mode_count", spectrum.len() as f64);
                push("converged", flag(sol.converged));
                for k in 0..config.top_k {
                    let v = sol.occupations.get(k).copied().unwrap_or(0.0);
                    push(&format!("occupation_{k}"), v);
                }
            }
            Check::HardCore => {
                let law = config.scaling.hard_core_radius.expect("validated");
                let radius = law.eval(n as f64);
                let c = check_hard_core(&realization, config.density, radius, config.alpha)?;
                push("radius", radius);
                push("box_bound", c.box_bound);
                push("eigenstate_bound", c.eigenstate_bound);
                push("box_count_criterion", c.box_count_criterion);
                push("hc_pass", flag(c.passed()));
            }
            Check::Scaling => {}
            Check::TrialEnergy => match trial_state_energy(&realization, n, config.interaction_l1_norm) {
                Ok(t) => {
                    push("count_q", t.count_q as f64);
                    push("kinetic_pp", t.kinetic_per_particle);
                    push("interaction_pp_upper", t.interaction_per_particle);
                }
                Err(Error::VoidTrialState) => {
                    push("count_q", 0.0);
                    push("kinetic_pp", f64::NAN);
                    push("interaction_pp_upper", f64::INFINITY);
                }
                Err(e) => return Err(e),
            },
        }
    }
    Ok(EnsembleRecord {
        particle_number: n,
        seed,
        box_length,
        point_count: realization.points().len(),
        values,
    })
}

/// Runs every requested check on every `(N, realization_index)` pair.
pub fn run_ensemble(config: &ExperimentConfig) -> Result<EnsembleReport> {
    config.validate()?;
    let jobs: Vec<(u64, u64)> = config
        .n_schedule
        .iter()
        .flat_map(|&n| (0..config.realizations_per_n).map(move |i| (n, i)))
        .collect();
    let records = jobs
        .par_iter()
        .map(|&(n, i)| run_one(config, n, i))
        .collect::<Result<Vec<_>>>()?;
    let scaling = if config.checks.contains(&Check::Scaling) {
        Some(scaling_diagnostics(&config.scaling, &config.n_schedule)?)
    } else {
        None
    };
    Ok(EnsembleReport {
        config: config.clone(),
        records,
        scaling,
    })
}

/// Median over `realizations` boxes of length `box_length` of the
/// excited-mode saturation density at `beta`.
pub fn estimate_saturation_density(
    intensity: f64,
    beta: f64,
    box_length: f64,
    realizations: u64,
    base_seed: u64,
) -> Result<f64> {
    let mut values = (0..realizations)
        .into_par_iter()
        .map(|i| {
            let r = sample_realization(intensity, box_length, EnsembleSeed::new(base_seed, i))?;
            let s = build_converged_spectrum(&r, beta)?;
            Ok(saturation_density(&s, beta))
        })
        .collect::<Result<Vec<f64>>>()?;
    values.sort_by(f64::total_cmp);
    Ok(quantile_sorted(&values, 0.5))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    SummaryTable,
    FullRecords,
}

impl ReportFormat {
    pub fn file_name(&self) -> &'static str {
        match self {
            ReportFormat::SummaryTable => "summary.csv",
            ReportFormat::FullRecords => "records.csv",
        }
    }
}

/// Summary CSV: one row per N with aggregate columns for each check.
pub fn summary_csv(report: &EnsembleReport) -> String {
    let checks: Vec<Check> = report.config.checks.iter().copied().collect();
    let mut out = String::from("N,L,realizations");
    for check in &checks {
        for m in metrics(*check) {
            match m {
                Metric::Value(name) => {
                    for stat in ["mean", "q05", "median", "q95"] {
                        let _ = write!(out, ",{name}_{stat}");
                    }
                }
                Metric::Flag(name) => {
                    let _ = write!(out, ",{name}_fraction");
                }
            }
        }
        if *check == Check::Scaling {
            if let Some(table) = &report.scaling {
                for c in &table.columns {
                    let _ = write!(out, ",diag_{}", c.diagnostic.name());
                }
            }
        }
    }
    out.push('\n');
    for (row, &n) in report.config.n_schedule.iter().enumerate() {
        let count = report.records_for(n).count();
        let _ = write!(out, "{n},{},{count}", fmt_real(report.config.box_length(n)));
        for check in &checks {
            for m in metrics(*check) {
                match m {
                    Metric::Value(name) => {
                        let a = aggregate(&report.column(n, name));
                        for v in [a.mean, a.q05, a.median, a.q95] {
                            let _ = write!(out, ",{}", fmt_real(v));
                        }
                    }
                    Metric::Flag(name) => {
                        let _ = write!(out, ",{}", fmt_real(report.pass_fraction(n, name)));
                    }
                }
            }
            if *check == Check::Scaling {
                if let Some(table) = &report.scaling {
                    for c in &table.columns {
                        let _ = write!(out, ",{}", fmt_real(c.values[row]));
                    }
                }
            }
        }
        out.push('\n');
    }
    out
}

/// Full CSV: one row per `(N, realization)` with replay information.
pub fn records_csv(report: &EnsembleReport) -> String {
    let mut out = String::from("N,base_seed,realization_index,L,points");
    if let Some(first) = report.records.first() {
        for (k, _) in &first.values {
            let _ = write!(out, ",{k}");
        }
    }
    out.push('\n');
    for r in &report.records {
        let _ = write!(
            out,
            "{},{},{},{},{}",
            r.particle_number,
            r.seed.base_seed,
            r.seed.realization_index,
            fmt_real(r.box_length),
            r.point_count
        );
        for (_, v) in &r.values {
            let _ = write!(out, ",{}", fmt_real(*v));
        }
        out.push('\n');
    }
    out
}

/// Writes one report file into `dir` and returns its path.
pub fn emit_report(report: &EnsembleReport, format: ReportFormat, dir: &Path) -> Result<PathBuf> {
    if report.config.checks.is_empty() {
        return Err(Error::EmptyReport("no checks were requested".into()));
    }
    if report.records.is_empty() {
        return Err(Error::EmptyReport("no records".into()));
    }
    let body = match format {
        ReportFormat::SummaryTable => summary_csv(report),
        ReportFormat::FullRecords => records_csv(report),
    };
    let io_err = |path: &Path| {
        let path = path.to_path_buf();
        move |source| Error::Io { path, source }
    };
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let path = dir.join(format.file_name());
    fs::write(&path, body).map_err(io_err(&path))?;
    Ok(path)
}
