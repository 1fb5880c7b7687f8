//! Exact spectrum of the one-particle Hamiltonian on a disorder realization.
//!
//! The Hamiltonian is the direct sum of Dirichlet Laplacians over the
//! intervals of the realization (box edges included as Dirichlet points), so
//! every eigenvalue is `π² n² / l²` for some interval length `l` and mode
//! number `n ≥ 1`, and every eigenfunction lives on a single interval.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::disorder::{longest_interval, DisorderRealization, EnsembleSeed};
use crate::{fmt_real, Error, Result};

/// Tail weight the default cutoff must reach before partition sums count as
/// converged.
pub const TAIL_TOLERANCE: f64 = 1e-12;

/// One Dirichlet mode on one interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenMode {
    pub interval_index: usize,
    pub mode_number: u32,
    pub energy: f64,
    pub interval_left: f64,
    pub interval_length: f64,
}

impl EigenMode {
    pub fn new(interval_index: usize, mode_number: u32, interval_left: f64, interval_length: f64) -> Self {
        Self {
            interval_index,
            mode_number,
            energy: dirichlet_energy(mode_number, interval_length),
            interval_left,
            interval_length,
        }
    }

    pub fn interval_right(&self) -> f64 {
        self.interval_left + self.interval_length
    }

    /// `sqrt(2/l) sin(nπ(x - left)/l)` inside the interval, zero outside.
    pub fn value(&self, x: f64) -> f64 {
        let s = x - self.interval_left;
        if s <= 0.0 || s >= self.interval_length {
            return 0.0;
        }
        let l = self.interval_length;
        (2.0 / l).sqrt() * (self.mode_number as f64 * PI * s / l).sin()
    }

    /// Probability mass `∫ |φ|²` over `[u, v]`, from the closed-form
    /// antiderivative of `sin²`.
    pub fn mass_between(&self, u: f64, v: f64) -> f64 {
        let lo = u.max(self.interval_left);
        let hi = v.min(self.interval_right());
        if hi <= lo {
            return 0.0;
        }
        let l = self.interval_length;
        let k = 2.0 * self.mode_number as f64 * PI / l;
        let primitive = |x: f64| {
            let s = x - self.interval_left;
            (s - (k * s).sin() / k) / l
        };
        primitive(hi) - primitive(lo)
    }

    /// Closed-form `L²` inner product of two modes.
    pub fn inner_product(&self, other: &EigenMode) -> f64 {
        if self.interval_index != other.interval_index {
            return 0.0;
        }
        let n = self.mode_number as f64;
        let m = other.mode_number as f64;
        // ∫₀^l (2/l) sin(nπs/l) sin(mπs/l) ds
        let term = |k: f64| {
            if k == 0.0 {
                1.0
            } else {
                (k * PI).sin() / (k * PI)
            }
        };
        term(n - m) - term(n + m)
    }
}

pub fn dirichlet_energy(mode_number: u32, length: f64) -> f64 {
    let n = mode_number as f64;
    PI * PI * n * n / (length * length)
}

/// Number of Dirichlet modes with energy `<= cutoff` on an interval.
pub fn modes_below(length: f64, cutoff: f64) -> u32 {
    if cutoff <= 0.0 {
        return 0;
    }
    let mut n = (length * cutoff.sqrt() / PI).floor() as u32;
    while dirichlet_energy(n + 1, length) <= cutoff {
        n += 1;
    }
    while n > 0 && dirichlet_energy(n, length) > cutoff {
        n -= 1;
    }
    n
}

/// All modes below an energy cutoff, sorted by energy.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    modes: Vec<EigenMode>,
    energies: Vec<f64>,
    energy_cutoff: f64,
    box_length: f64,
    source: EnsembleSeed,
    modes_below_four_cutoff: u64,
}

impl Spectrum {
    pub fn modes(&self) -> &[EigenMode] {
        &self.modes
    }

    /// Mode energies in ascending order.
    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn energy_cutoff(&self) -> f64 {
        self.energy_cutoff
    }

    pub fn box_length(&self) -> f64 {
        self.box_length
    }

    pub fn source(&self) -> EnsembleSeed {
        self.source
    }

    pub fn ground_energy(&self) -> f64 {
        self.energies[0]
    }

    /// Upper bound on the Boltzmann weight discarded by the cutoff at inverse
    /// temperature `beta`, relative to the ground state.
    pub fn tail_weight(&self, beta: f64) -> f64 {
        (-beta * (self.energy_cutoff - self.ground_energy())).exp() * self.modes_below_four_cutoff as f64
    }

    pub fn is_converged_for(&self, beta: f64) -> bool {
        self.tail_weight(beta) < TAIL_TOLERANCE
    }

    /// Comma-separated export `energy,interval_index,mode_number`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("energy,interval_index,mode_number\n");
        for m in &self.modes {
            let _ = writeln!(out, "{},{},{}", fmt_real(m.energy), m.interval_index, m.mode_number);
        }
        out
    }
}

fn count_modes(realization: &DisorderRealization, cutoff: f64) -> u64 {
    realization.lengths().map(|l| modes_below(l, cutoff) as u64).sum()
}

/// Builds every mode with energy `<= energy_cutoff`.
pub fn build_spectrum(realization: &DisorderRealization, energy_cutoff: f64) -> Result<Spectrum> {
    if !(energy_cutoff.is_finite() && energy_cutoff > 0.0) {
        return Err(Error::invalid(format!("energy cutoff must be positive, got {energy_cutoff}")));
    }
    let ground = ground_state_energy(realization);
    if energy_cutoff < ground {
        return Err(Error::EmptySpectrum {
            cutoff: energy_cutoff,
            ground,
        });
    }
    let mut modes = Vec::new();
    for (j, iv) in realization.intervals().iter().enumerate() {
        let n_max = modes_below(iv.length, energy_cutoff);
        modes.extend((1..=n_max).map(|n| EigenMode::new(j, n, iv.left, iv.length)));
    }
    modes.sort_by(|a, b| {
        a.energy
            .total_cmp(&b.energy)
            .then(a.interval_index.cmp(&b.interval_index))
            .then(a.mode_number.cmp(&b.mode_number))
    });
    let energies = modes.iter().map(|m| m.energy).collect();
    Ok(Spectrum {
        modes,
        energies,
        energy_cutoff,
        box_length: realization.box_length(),
        source: realization.seed(),
        modes_below_four_cutoff: count_modes(realization, 4.0 * energy_cutoff),
    })
}

/// Smallest cutoff of the form `ε⁰ + t/β` (integer `t ≥ 28`) whose discarded
/// tail satisfies `e^{-β(E - ε⁰)} · #{modes ≤ 4E} < 1e-12`.
pub fn default_cutoff(realization: &DisorderRealization, beta: f64) -> Result<f64> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::invalid(format!("beta must be positive, got {beta}")));
    }
    let ground = ground_state_energy(realization);
    let mut t = (1.0 / TAIL_TOLERANCE).ln().ceil();
    loop {
        let cutoff = ground + t / beta;
        let tail = (-t).exp() * count_modes(realization, 4.0 * cutoff) as f64;
        if tail < TAIL_TOLERANCE {
            return Ok(cutoff);
        }
        t += 1.0;
    }
}

/// Spectrum truncated at [`default_cutoff`] for the given `beta`.
pub fn build_converged_spectrum(realization: &DisorderRealization, beta: f64) -> Result<Spectrum> {
    build_spectrum(realization, default_cutoff(realization, beta)?)
}

/// `π² / l_max²`, the lowest eigenvalue, attained on the longest interval.
pub fn ground_state_energy(realization: &DisorderRealization) -> f64 {
    let (l_max, _) = longest_interval(realization);
    dirichlet_energy(1, l_max)
}

/// Lowest mode of the realization.
pub fn ground_mode(realization: &DisorderRealization) -> EigenMode {
    let (_, j) = longest_interval(realization);
    let iv = realization.intervals()[j];
    EigenMode::new(j, 1, iv.left, iv.length)
}

pub fn eigenfunction_value(mode: &EigenMode, x: f64) -> f64 {
    mode.value(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disorder::sample_realization;
    use crate::quadrature::adaptive_simpson;
    use proptest::prelude::*;

    fn from_lengths(lengths: &[f64]) -> DisorderRealization {
        let total: f64 = lengths.iter().sum();
        let mut x = -0.5 * total;
        let mut points = Vec::new();
        for l in &lengths[..lengths.len() - 1] {
            x += l;
            points.push(x);
        }
        DisorderRealization::from_points(1.0, total, points, EnsembleSeed::default()).unwrap()
    }

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol * b.abs().max(1.0), "{a} vs {b}");
    }

    #[test]
    fn single_interval_of_length_pi() {
        let s = build_spectrum(&from_lengths(&[PI]), 10.0).unwrap();
        let e = s.energies();
        assert_eq!(e.len(), 3);
        for (got, want) in e.iter().zip([1.0, 4.0, 9.0]) {
            assert_close(*got, want, 1e-14);
        }
    }

    #[test]
    fn two_intervals_with_degeneracy() {
        let p2 = PI * PI;
        // 9π²/4 ≈ 22.2 lies above a cutoff of 12
        let s = build_spectrum(&from_lengths(&[1.0, 2.0]), 12.0).unwrap();
        assert_eq!(s.len(), 3);
        assert_close(s.energies()[2], p2, 1e-14);
        let s = build_spectrum(&from_lengths(&[1.0, 2.0]), 2.3 * p2).unwrap();
        let want = [p2 / 4.0, p2, p2, 9.0 * p2 / 4.0];
        assert_eq!(s.len(), 4);
        for (got, want) in s.energies().iter().zip(want) {
            assert_close(*got, want, 1e-14);
        }
        // the π² pair: interval 0 (n=1) before interval 1 (n=2)
        assert_eq!((s.modes()[1].interval_index, s.modes()[1].mode_number), (0, 1));
        assert_eq!((s.modes()[2].interval_index, s.modes()[2].mode_number), (1, 2));
    }

    #[test]
    fn cutoff_below_ground_is_an_error() {
        let r = from_lengths(&[2.0, 1.0]);
        assert!(matches!(build_spectrum(&r, 1.0), Err(Error::EmptySpectrum { .. })));
    }

    #[test]
    fn ground_energy_examples() {
        assert_close(ground_state_energy(&from_lengths(&[PI, 1.0])), 1.0, 1e-15);
        assert_close(ground_state_energy(&from_lengths(&[3.0, 10.0])), PI * PI / 100.0, 1e-15);
        assert!((ground_state_energy(&from_lengths(&[10.0])) - 0.0987).abs() < 1e-4);
    }

    #[test]
    fn eigenfunction_examples() {
        let m = EigenMode::new(0, 1, 0.0, 1.0);
        assert_close(m.value(0.5), 2f64.sqrt(), 1e-15);
        for n in 1..6 {
            let m = EigenMode::new(3, n, -1.25, 2.5);
            assert_eq!(m.value(-1.25), 0.0);
            assert_eq!(m.value(1.25), 0.0);
            assert_eq!(m.value(7.0), 0.0);
        }
    }

    #[test]
    fn eigenfunction_norm_by_quadrature() {
        for (n, left, l) in [(1, 0.0, 1.0), (3, -2.0, 4.7), (7, 10.0, 0.3)] {
            let m = EigenMode::new(0, n, left, l);
            let norm = adaptive_simpson(|x| m.value(x).powi(2), left, left + l, 1e-13);
            assert!((norm - 1.0).abs() < 1e-10, "n={n}: {norm}");
            assert!((m.mass_between(left - 1.0, left + l + 1.0) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn orthonormality_closed_form() {
        for n in 1..12 {
            for k in 1..12 {
                let a = EigenMode::new(0, n, 0.0, 3.0);
                let b = EigenMode::new(0, k, 0.0, 3.0);
                let want = if n == k { 1.0 } else { 0.0 };
                assert!((a.inner_product(&b) - want).abs() < 1e-12);
            }
        }
        let a = EigenMode::new(0, 1, 0.0, 3.0);
        let b = EigenMode::new(1, 1, 3.0, 3.0);
        assert_eq!(a.inner_product(&b), 0.0);
    }

    #[test]
    fn weyl_count() {
        for (l, e) in [(1.0, 100.0), (7.3, 3.0), (50.0, 0.01), (PI, 9.0)] {
            let s = build_spectrum(&from_lengths(&[l]), e).unwrap();
            assert_eq!(s.len() as u32, (l * e.sqrt() / PI).floor() as u32);
        }
    }

    #[test]
    fn default_cutoff_converges() {
        let r = sample_realization(1.0, 1e3, EnsembleSeed::new(3, 0)).unwrap();
        for beta in [0.1, 1.0, 10.0] {
            let s = build_converged_spectrum(&r, beta).unwrap();
            assert!(s.is_converged_for(beta));
            assert!(s.ground_energy() == ground_state_energy(&r));
        }
        let s = build_spectrum(&r, 2.0 * ground_state_energy(&r)).unwrap();
        assert!(!s.is_converged_for(1.0));
    }

    #[test]
    fn csv_export_is_sorted() {
        let s = build_spectrum(&from_lengths(&[1.0, 2.0]), 30.0).unwrap();
        let csv = s.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("energy,interval_index,mode_number"));
        let e: Vec<f64> = lines.map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
        assert!(e.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(e, s.energies());
    }

    proptest! {
        #[test]
        fn spectrum_is_sorted_and_complete(
            seed in any::<u64>(),
            len in 5.0f64..300.0,
            factor in 1.0f64..40.0,
        ) {
            let r = sample_realization(1.0, len, EnsembleSeed::new(seed, 0)).unwrap();
            let cutoff = factor * ground_state_energy(&r);
            let s = build_spectrum(&r, cutoff).unwrap();
            prop_assert!(s.energies().windows(2).all(|w| w[0] <= w[1]));
            prop_assert!(s.energies().iter().all(|&e| e <= cutoff));
            prop_assert_eq!(s.energies()[0], ground_state_energy(&r));
            // completeness: the next mode on every interval is above the cutoff
            for iv in r.intervals() {
                let on_interval = s.modes().iter().filter(|m| m.interval_left == iv.left).count() as u32;
                prop_assert!(dirichlet_energy(on_interval + 1, iv.length) > cutoff);
            }
        }
    }
}
