//! Inequalities and scaling conditions behind the absence of macroscopic
//! occupation in the interacting gas.
//!
//! Nothing here touches an interacting many-body state. Every function
//! evaluates one computable ingredient of the argument: the almost-sure
//! window for the longest interval, the box-decomposition bound on the
//! occupation density, its hard-core closed form, the counting of long
//! intervals, the trial-state energy pieces, and the asymptotic conditions on
//! the interaction sequences.

use std::fmt::Write as _;
use std::sync::OnceLock;

use crate::disorder::{count_intervals_at_least, longest_interval, DisorderRealization, EnsembleSeed};
use crate::quadrature::adaptive_simpson;
use crate::spectrum::{ground_mode, EigenMode};
use crate::{fmt_real, Error, Result};

/// Minimum interval length carrying a trial-state plateau.
pub const TRIAL_MIN_LENGTH: f64 = 3.0;

// ---------------------------------------------------------------------------
// longest interval window

/// `ν⁻¹[ln L − (1+ε) ln ln L]` and `α ν⁻¹ ln L`.
pub fn longest_interval_bracket(intensity: f64, box_length: f64, epsilon: f64, alpha: f64) -> Result<(f64, f64)> {
    if !(box_length > std::f64::consts::E) {
        return Err(Error::Domain(format!("ln ln L needs L > e, got L = {box_length}")));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::invalid(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    if !(alpha > 4.0) {
        return Err(Error::invalid(format!("alpha must exceed 4, got {alpha}")));
    }
    if !(intensity > 0.0) {
        return Err(Error::invalid("intensity must be positive"));
    }
    let ln_l = box_length.ln();
    let lower = (ln_l - (1.0 + epsilon) * ln_l.ln()) / intensity;
    let upper = alpha * ln_l / intensity;
    Ok((lower, upper))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LongestIntervalCheck {
    pub l_max: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub lower_ok: bool,
    pub upper_ok: bool,
}

impl LongestIntervalCheck {
    pub fn passed(&self) -> bool {
        self.lower_ok && self.upper_ok
    }
}

pub fn check_longest_interval(
    realization: &DisorderRealization,
    epsilon: f64,
    alpha: f64,
) -> Result<LongestIntervalCheck> {
    let (lower, upper) = longest_interval_bracket(realization.intensity(), realization.box_length(), epsilon, alpha)?;
    let (l_max, _) = longest_interval(realization);
    Ok(LongestIntervalCheck {
        l_max,
        lower_bound: lower,
        upper_bound: upper,
        lower_ok: l_max >= lower,
        upper_ok: l_max <= upper,
    })
}

// ---------------------------------------------------------------------------
// box decomposition

/// A normalized one-particle state that can report its mass on any interval.
pub trait BoxMassSource {
    /// Closed interval outside which the state vanishes.
    fn support(&self) -> (f64, f64);
    /// `∫_u^v |φ|²`.
    fn mass_between(&self, u: f64, v: f64) -> f64;
}

impl BoxMassSource for EigenMode {
    fn support(&self) -> (f64, f64) {
        (self.interval_left, self.interval_right())
    }

    fn mass_between(&self, u: f64, v: f64) -> f64 {
        EigenMode::mass_between(self, u, v)
    }
}

/// Constant density `1/(right − left)` on `[left, right]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformState {
    pub left: f64,
    pub right: f64,
}

impl BoxMassSource for UniformState {
    fn support(&self) -> (f64, f64) {
        (self.left, self.right)
    }

    fn mass_between(&self, u: f64, v: f64) -> f64 {
        let lo = u.max(self.left);
        let hi = v.min(self.right);
        ((hi - lo) / (self.right - self.left)).max(0.0)
    }
}

/// Masses of the state on the boxes `[a n, a (n+1))`, for every box meeting
/// the support in a set of positive length.
pub fn box_masses<S: BoxMassSource + ?Sized>(state: &S, box_length: f64) -> Result<Vec<(i64, f64)>> {
    if !(box_length.is_finite() && box_length > 0.0) {
        return Err(Error::invalid(format!("box length must be positive, got {box_length}")));
    }
    let (lo, hi) = state.support();
    let first = (lo / box_length).floor() as i64;
    let last = (hi / box_length).ceil() as i64;
    Ok((first..last)
        .filter_map(|n| {
            let u = n as f64 * box_length;
            let v = (n + 1) as f64 * box_length;
            (v.min(hi) > u.max(lo)).then(|| (n, state.mass_between(u, v)))
        })
        .collect())
}

/// `(1/L) (Σ_n √m_n)²`: upper bound on the occupation density of a state
/// with box masses `m_n` when every box holds at most one particle.
pub fn box_decomposition_bound(masses: &[(i64, f64)], box_length_total: f64) -> f64 {
    let root_sum: f64 = masses.iter().map(|(_, m)| m.max(0.0).sqrt()).sum();
    root_sum * root_sum / box_length_total
}

/// `α² ν⁻² ln²(L) / (a² L)`: the hard-core bound on the occupation density of
/// any eigenstate once the longest interval is below `α ν⁻¹ ln L`.
pub fn hard_core_eigenstate_bound(alpha: f64, intensity: f64, box_length: f64, radius: f64) -> Result<f64> {
    if !(alpha > 0.0 && intensity > 0.0 && radius > 0.0) {
        return Err(Error::invalid("alpha, intensity and radius must be positive"));
    }
    if !(box_length > 1.0) {
        return Err(Error::Domain(format!("box length must exceed 1, got {box_length}")));
    }
    let ln_l = box_length.ln();
    Ok(alpha * alpha * ln_l * ln_l / (intensity * intensity * radius * radius * box_length))
}

/// `1 / (2 sup a_N)`: hard rods of radius `a` cannot be packed any denser.
pub fn critical_density(radius_sup: f64) -> Result<f64> {
    if !(radius_sup.is_finite() && radius_sup > 0.0) {
        return Err(Error::invalid(format!("radius must be positive, got {radius_sup}")));
    }
    Ok(1.0 / (2.0 * radius_sup))
}

/// Rejects densities at or above the critical density.
pub fn check_subcritical(density: f64, radius_sup: f64) -> Result<()> {
    let critical = critical_density(radius_sup)?;
    if density < critical {
        Ok(())
    } else {
        Err(Error::AboveCriticalDensity {
            density,
            critical,
            radius: radius_sup,
        })
    }
}

/// `S² / N` for a state supported on `S` boxes.
pub fn box_count_criterion(support_box_count: u64, particle_number: u64) -> f64 {
    let s = support_box_count as f64;
    s * s / particle_number as f64
}

/// Whether every sample farther than `radius` from `center` obeys
/// `|φ(x)| ≤ C / |x − center|^{1+ε}`.
pub fn envelope_check(samples: &[(f64, f64)], center: f64, constant: f64, epsilon: f64, radius: f64) -> bool {
    samples.iter().all(|&(x, amplitude)| {
        let d = (x - center).abs();
        d <= radius || amplitude.abs() <= constant / d.powf(1.0 + epsilon)
    })
}

/// With `A_N = a N^{−α}` and support on at most `c N^γ` intervals, a state can
/// only stay macroscopically occupied if `γ ≥ 1/3 − α`.
pub fn localization_criterion(gamma: f64, alpha_exp: f64) -> Result<bool> {
    if !(0.0..1.0).contains(&gamma) {
        return Err(Error::invalid(format!("gamma must lie in [0, 1), got {gamma}")));
    }
    if !(alpha_exp > 0.0 && alpha_exp <= 1.0 / 3.0) {
        return Err(Error::invalid(format!("alpha must lie in (0, 1/3], got {alpha_exp}")));
    }
    Ok(gamma >= 1.0 / 3.0 - alpha_exp)
}

// ---------------------------------------------------------------------------
// trial state

/// Smooth switch from 0 at `t = 0` to 1 at `t = 1`:
/// `f(t) / (f(t) + f(1 − t))` with `f(t) = e^{−1/t}`.
pub fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    if t >= 1.0 {
        return 1.0;
    }
    let g = 1.0 / t - 1.0 / (1.0 - t);
    1.0 / (1.0 + g.exp())
}

pub fn smooth_step_derivative(t: f64) -> f64 {
    if t <= 0.0 || t >= 1.0 {
        return 0.0;
    }
    let g = 1.0 / t - 1.0 / (1.0 - t);
    let c = (0.5 * g).cosh();
    (1.0 / (t * t) + 1.0 / ((1.0 - t) * (1.0 - t))) / (4.0 * c * c)
}

/// Numerical constants of the trial profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialConstants {
    /// `∫|ξ'|²` over one interval: both unit-length transitions.
    pub kinetic: f64,
    /// `∫₀¹ ξ²` over one transition.
    pub transition_norm: f64,
}

pub fn trial_constants() -> TrialConstants {
    static CONSTANTS: OnceLock<TrialConstants> = OnceLock::new();
    *CONSTANTS.get_or_init(|| TrialConstants {
        kinetic: 2.0 * adaptive_simpson(|t| smooth_step_derivative(t).powi(2), 0.0, 1.0, 1e-13),
        transition_norm: adaptive_simpson(|t| smooth_step(t).powi(2), 0.0, 1.0, 1e-13),
    })
}

/// Energy pieces of the product trial state built from plateau functions on
/// every interval of length at least 3.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialStateEnergy {
    pub count_q: usize,
    /// `‖ψ‖²`, computed exactly; reported only.
    pub norm_squared: f64,
    /// Upper bound `κ q / q = κ`: `‖ψ‖²` is replaced by its lower bound `q`.
    pub kinetic_per_particle: f64,
    /// Upper bound `(N − 1)/2 · L ‖U‖₁ / q²`.
    pub interaction_per_particle: f64,
}

impl TrialStateEnergy {
    pub fn total_per_particle(&self) -> f64 {
        self.kinetic_per_particle + self.interaction_per_particle
    }
}

pub fn trial_state_energy_from_lengths(
    lengths: impl IntoIterator<Item = f64>,
    box_length: f64,
    particle_number: u64,
    interaction_l1_norm: f64,
) -> Result<TrialStateEnergy> {
    if !(interaction_l1_norm >= 0.0) {
        return Err(Error::invalid("interaction L1 norm must be nonnegative"));
    }
    let consts = trial_constants();
    let (count_q, norm_squared) = lengths
        .into_iter()
        .filter(|&l| l >= TRIAL_MIN_LENGTH)
        .fold((0usize, 0.0), |(q, norm), l| {
            (q + 1, norm + (l - 2.0) + 2.0 * consts.transition_norm)
        });
    if count_q == 0 {
        return Err(Error::VoidTrialState);
    }
    let q = count_q as f64;
    let n = particle_number as f64;
    Ok(TrialStateEnergy {
        count_q,
        norm_squared,
        kinetic_per_particle: consts.kinetic,
        interaction_per_particle: 0.5 * (n - 1.0).max(0.0) * box_length * interaction_l1_norm / (q * q),
    })
}

pub fn trial_state_energy(
    realization: &DisorderRealization,
    particle_number: u64,
    interaction_l1_norm: f64,
) -> Result<TrialStateEnergy> {
    trial_state_energy_from_lengths(
        realization.lengths(),
        realization.box_length(),
        particle_number,
        interaction_l1_norm,
    )
}

// ---------------------------------------------------------------------------
// long interval count

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LongIntervalCount {
    pub count: usize,
    pub threshold: f64,
    pub passed: bool,
}

/// `ν / (4 e^{3ν} ρ) · N` with `N = ρ L`.
pub fn long_interval_threshold(intensity: f64, density: f64, particle_number: f64) -> f64 {
    intensity / (4.0 * (3.0 * intensity).exp() * density) * particle_number
}

pub fn check_long_interval_count(realization: &DisorderRealization, density: f64) -> Result<LongIntervalCount> {
    if !(density > 0.0) {
        return Err(Error::invalid("density must be positive"));
    }
    let n = density * realization.box_length();
    let count = count_intervals_at_least(realization, TRIAL_MIN_LENGTH);
    let threshold = long_interval_threshold(realization.intensity(), density, n);
    Ok(LongIntervalCount {
        count,
        threshold,
        passed: count as f64 >= threshold,
    })
}

// ---------------------------------------------------------------------------
// scaling sequences

/// `coefficient · N^exponent · ln(N)^log_exponent`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLogLaw {
    pub coefficient: f64,
    pub exponent: f64,
    pub log_exponent: f64,
}

impl PowerLogLaw {
    pub fn new(coefficient: f64, exponent: f64, log_exponent: f64) -> Self {
        Self {
            coefficient,
            exponent,
            log_exponent,
        }
    }

    pub fn power(coefficient: f64, exponent: f64) -> Self {
        Self::new(coefficient, exponent, 0.0)
    }

    pub fn constant(value: f64) -> Self {
        Self::new(value, 0.0, 0.0)
    }

    pub fn eval(&self, n: f64) -> f64 {
        self.coefficient * n.powf(self.exponent) * n.ln().powf(self.log_exponent)
    }

    /// Bounded above as `N → ∞`.
    pub fn is_bounded(&self) -> bool {
        self.exponent < 0.0 || (self.exponent == 0.0 && self.log_exponent <= 0.0)
    }
}

/// Interaction sequences: hard-core radius `a_N`, interaction range `A_N`,
/// interaction floor `b_N` and contact width `ε_N`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ScalingSpec {
    pub hard_core_radius: Option<PowerLogLaw>,
    pub interaction_range: Option<PowerLogLaw>,
    pub interaction_floor: Option<PowerLogLaw>,
    pub contact_width: Option<PowerLogLaw>,
}

impl ScalingSpec {
    pub fn validate(&self) -> Result<()> {
        let laws = [
            ("hard-core radius", self.hard_core_radius),
            ("interaction range", self.interaction_range),
            ("interaction floor", self.interaction_floor),
            ("contact width", self.contact_width),
        ];
        for (name, law) in laws {
            if let Some(law) = law {
                if !(law.coefficient > 0.0) {
                    return Err(Error::invalid(format!("{name} coefficient must be positive")));
                }
            }
        }
        for (name, law) in [("hard-core radius", self.hard_core_radius), ("interaction range", self.interaction_range)] {
            if let Some(law) = law {
                if !law.is_bounded() {
                    return Err(Error::invalid(format!("{name} sequence must be bounded above")));
                }
            }
        }
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.hard_core_radius.is_none()
            && self.interaction_range.is_none()
            && self.interaction_floor.is_none()
            && self.contact_width.is_none()
    }
}

/// `ln²N / (a_N² N)`; must tend to 0.
pub fn hard_core_diagnostic(radius: f64, n: f64) -> f64 {
    let ln = n.ln();
    ln * ln / (radius * radius * n)
}

/// `A_N³ N / ln³N`; must diverge.
pub fn range_diagnostic(range: f64, n: f64) -> f64 {
    range.powi(3) * n / n.ln().powi(3)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trend {
    Increasing,
    Decreasing,
    NotMonotone,
}

impl Trend {
    pub fn of(values: &[f64]) -> Trend {
        if values.windows(2).all(|w| w[1] > w[0]) {
            Trend::Increasing
        } else if values.windows(2).all(|w| w[1] < w[0]) {
            Trend::Decreasing
        } else {
            Trend::NotMonotone
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Trend::Increasing => "increasing",
            Trend::Decreasing => "decreasing",
            Trend::NotMonotone => "not-monotone",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Diagnostic {
    /// `ln²N / (a_N² N)`
    HardCore,
    /// `A_N³ N / ln³N`
    Range,
    /// `b_N A_N³ N / ln³N`
    FloorRange,
    /// `ε_N³ N / ln³N`
    Contact,
}

impl Diagnostic {
    pub const ALL: [Diagnostic; 4] = [
        Diagnostic::HardCore,
        Diagnostic::Range,
        Diagnostic::FloorRange,
        Diagnostic::Contact,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Diagnostic::HardCore => "hard_core",
            Diagnostic::Range => "range",
            Diagnostic::FloorRange => "floor_range",
            Diagnostic::Contact => "contact",
        }
    }

    /// Trend the sequence must eventually have.
    pub fn required_trend(&self) -> Trend {
        match self {
            Diagnostic::HardCore => Trend::Decreasing,
            _ => Trend::Increasing,
        }
    }

    fn eval(&self, spec: &ScalingSpec, n: f64) -> Option<f64> {
        match self {
            Diagnostic::HardCore => spec.hard_core_radius.map(|a| hard_core_diagnostic(a.eval(n), n)),
            Diagnostic::Range => spec.interaction_range.map(|a| range_diagnostic(a.eval(n), n)),
            Diagnostic::FloorRange => match (spec.interaction_range, spec.interaction_floor) {
                (Some(a), Some(b)) => Some(b.eval(n) * range_diagnostic(a.eval(n), n)),
                _ => None,
            },
            Diagnostic::Contact => spec.contact_width.map(|e| range_diagnostic(e.eval(n), n)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticColumn {
    pub diagnostic: Diagnostic,
    pub values: Vec<f64>,
    /// Monotone trend over the last half of the grid.
    pub tail_trend: Trend,
}

impl DiagnosticColumn {
    pub fn satisfied(&self) -> bool {
        self.tail_trend == self.diagnostic.required_trend()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingTable {
    pub n_grid: Vec<u64>,
    pub columns: Vec<DiagnosticColumn>,
}

impl ScalingTable {
    pub fn column(&self, d: Diagnostic) -> Option<&DiagnosticColumn> {
        self.columns.iter().find(|c| c.diagnostic == d)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("N");
        for c in &self.columns {
            let _ = write!(out, ",{}", c.diagnostic.name());
        }
        out.push('\n');
        for (i, n) in self.n_grid.iter().enumerate() {
            let _ = write!(out, "{n}");
            for c in &self.columns {
                let _ = write!(out, ",{}", fmt_real(c.values[i]));
            }
            out.push('\n');
        }
        let _ = write!(out, "tail_trend");
        for c in &self.columns {
            let _ = write!(out, ",{}", c.tail_trend.as_str());
        }
        out.push('\n');
        out
    }
}

/// Evaluates every diagnostic whose sequences are set, on an increasing
/// grid of particle numbers `≥ 2`.
pub fn scaling_diagnostics(spec: &ScalingSpec, n_grid: &[u64]) -> Result<ScalingTable> {
    if n_grid.is_empty() || n_grid[0] < 2 {
        return Err(Error::invalid("N grid must be nonempty with entries >= 2"));
    }
    if !n_grid.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::invalid("N grid must be strictly increasing"));
    }
    let tail_start = n_grid.len() / 2;
    let columns = Diagnostic::ALL
        .iter()
        .filter_map(|d| {
            let values: Option<Vec<f64>> = n_grid.iter().map(|&n| d.eval(spec, n as f64)).collect();
            values.map(|values| DiagnosticColumn {
                diagnostic: *d,
                tail_trend: Trend::of(&values[tail_start.min(values.len().saturating_sub(2))..]),
                values,
            })
        })
        .collect();
    Ok(ScalingTable {
        n_grid: n_grid.to_vec(),
        columns,
    })
}

/// Decades `10^from ..= 10^to`.
pub fn decade_grid(from: u32, to: u32) -> Vec<u64> {
    (from..=to).map(|k| 10u64.pow(k)).collect()
}

// ---------------------------------------------------------------------------
// single-realization report

#[derive(Debug, Clone, PartialEq)]
pub struct BoundRecord {
    pub name: &'static str,
    pub seed: EnsembleSeed,
    pub particle_number: u64,
    pub quantities: Vec<(&'static str, f64)>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BoundReport {
    pub records: Vec<BoundRecord>,
}

impl BoundReport {
    pub fn record(&self, name: &str) -> Option<&BoundRecord> {
        self.records.iter().find(|r| r.name == name)
    }

    /// One block of `key=value` lines per record, blank-line separated.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let _ = writeln!(out, "check={}", r.name);
            let _ = writeln!(out, "base_seed={}", r.seed.base_seed);
            let _ = writeln!(out, "realization_index={}", r.seed.realization_index);
            let _ = writeln!(out, "particle_number={}", r.particle_number);
            for (k, v) in &r.quantities {
                let _ = writeln!(out, "{k}={}", fmt_real(*v));
            }
            let _ = writeln!(out, "passed={}", r.passed);
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundOptions {
    pub epsilon: f64,
    pub alpha: f64,
    pub hard_core_radius: Option<f64>,
    pub interaction_l1_norm: f64,
}

impl Default for BoundOptions {
    fn default() -> Self {
        Self {
            epsilon: 0.5,
            alpha: 5.0,
            hard_core_radius: None,
            interaction_l1_norm: 1.0,
        }
    }
}

/// Hard-core check for the ground mode: box-decomposition bound against the
/// closed-form eigenstate bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardCoreCheck {
    pub radius: f64,
    pub support_boxes: usize,
    pub box_bound: f64,
    pub count_bound: f64,
    pub eigenstate_bound: f64,
    pub box_count_criterion: f64,
}

impl HardCoreCheck {
    pub fn passed(&self) -> bool {
        self.box_bound <= self.eigenstate_bound
    }
}

pub fn check_hard_core(realization: &DisorderRealization, density: f64, radius: f64, alpha: f64) -> Result<HardCoreCheck> {
    check_subcritical(density, radius)?;
    let mode = ground_mode(realization);
    let masses = box_masses(&mode, radius)?;
    let l = realization.box_length();
    let s = (mode.interval_length / radius).ceil() + 1.0;
    Ok(HardCoreCheck {
        radius,
        support_boxes: masses.len(),
        box_bound: box_decomposition_bound(&masses, l),
        count_bound: s * s / l,
        eigenstate_bound: hard_core_eigenstate_bound(alpha, realization.intensity(), l, radius)?,
        box_count_criterion: box_count_criterion(masses.len() as u64, (density * l).round() as u64),
    })
}

/// Runs every single-realization check at particle density `density`.
pub fn evaluate_bounds(realization: &DisorderRealization, density: f64, options: &BoundOptions) -> Result<BoundReport> {
    let seed = realization.seed();
    let n = (density * realization.box_length()).round() as u64;
    let mut records = Vec::new();

    let lic = check_longest_interval(realization, options.epsilon, options.alpha)?;
    records.push(BoundRecord {
        name: "longest_interval",
        seed,
        particle_number: n,
        quantities: vec![
            ("l_max", lic.l_max),
            ("lower_bound", lic.lower_bound),
            ("upper_bound", lic.upper_bound),
            ("lower_ok", lic.lower_ok as u8 as f64),
            ("upper_ok", lic.upper_ok as u8 as f64),
        ],
        passed: lic.passed(),
    });

    let count = check_long_interval_count(realization, density)?;
    records.push(BoundRecord {
        name: "long_interval_count",
        seed,
        particle_number: n,
        quantities: vec![("count", count.count as f64), ("threshold", count.threshold)],
        passed: count.passed,
    });

    if let Some(radius) = options.hard_core_radius {
        let hc = check_hard_core(realization, density, radius, options.alpha)?;
        records.push(BoundRecord {
            name: "hard_core",
            seed,
            particle_number: n,
            quantities: vec![
                ("radius", hc.radius),
                ("critical_density", critical_density(radius)?),
                ("support_boxes", hc.support_boxes as f64),
                ("box_bound", hc.box_bound),
                ("count_bound", hc.count_bound),
                ("eigenstate_bound", hc.eigenstate_bound),
                ("box_count_criterion", hc.box_count_criterion),
            ],
            passed: hc.passed(),
        });
    }

    match trial_state_energy(realization, n, options.interaction_l1_norm) {
        Ok(t) => records.push(BoundRecord {
            name: "trial_energy",
            seed,
            particle_number: n,
            quantities: vec![
                ("count_q", t.count_q as f64),
                ("norm_squared", t.norm_squared),
                ("kinetic_per_particle", t.kinetic_per_particle),
                ("interaction_per_particle_upper", t.interaction_per_particle),
            ],
            passed: true,
        }),
        Err(Error::VoidTrialState) => records.push(BoundRecord {
            name: "trial_energy",
            seed,
            particle_number: n,
            quantities: vec![("count_q", 0.0)],
            passed: false,
        }),
        Err(e) => return Err(e),
    }

    let mode = ground_mode(realization);
    let samples = envelope_samples(&mode, 64);
    records.push(BoundRecord {
        name: "ground_envelope",
        seed,
        particle_number: n,
        quantities: vec![("center", mode.interval_left + 0.5 * mode.interval_length), ("radius", mode.interval_length)],
        passed: envelope_check(&samples, mode.interval_left + 0.5 * mode.interval_length, 1.0, 0.5, mode.interval_length),
    });

    Ok(BoundReport { records })
}

/// `(x, |φ(x)|)` on a grid covering the mode's interval and two interval
/// lengths on either side.
pub fn envelope_samples(mode: &EigenMode, per_length: usize) -> Vec<(f64, f64)> {
    let l = mode.interval_length;
    let start = mode.interval_left - 2.0 * l;
    let count = 5 * per_length;
    (0..=count)
        .map(|i| {
            let x = start + 5.0 * l * i as f64 / count as f64;
            (x, mode.value(x).abs())
        })
        .collect()
}
