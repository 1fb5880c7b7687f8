//! Exact canonical-ensemble statistics of the ideal Bose gas on a finite
//! spectrum.
//!
//! Everything is computed in the ground-shifted gauge `e_j = ε_j − ε₀`, so the
//! partition functions satisfy `Z_0 = 1 ≤ Z_1 ≤ … ≤ Z_N`. With
//! `S_k = Σ_j e^{−kβ e_j}` the partition functions follow from
//!
//! ```text
//! Z_n = (1/n) Σ_{k=1}^{n} S_k Z_{n−k}
//! ```
//!
//! evaluated with log-sum-exp, and the mean occupation of mode `j` is
//! `⟨n_j⟩ = Σ_{k=1}^{N} e^{−kβ e_j} Z_{N−k} / Z_N`. The recursion costs
//! `O(N²)` time and `O(N)` memory.
//!
//! For the non-interacting gas the occupation density `⟨n_j⟩ / L` of an
//! eigenstate is exactly the reduced-density-matrix expectation used to define
//! macroscopic occupation, so no kernels are ever built.

use std::fmt::Write as _;

use crate::spectrum::Spectrum;
use crate::{fmt_real, Error, Result};

/// Largest particle number the exact recursion is run for.
pub const MAX_PARTICLES: u64 = 20_000;

/// Rejects particle numbers above [`MAX_PARTICLES`].
pub fn ensure_feasible(particle_number: u64) -> Result<()> {
    if particle_number > MAX_PARTICLES {
        return Err(Error::InfeasibleThermo {
            n: particle_number,
            limit: MAX_PARTICLES,
        });
    }
    Ok(())
}

/// Terms of `S_k` below this absolute value are dropped (`S_k ≥ 1`).
const TERM_FLOOR: f64 = 1e-18;

fn check_inputs(energies: &[f64], beta: f64) -> Result<f64> {
    if energies.is_empty() {
        return Err(Error::invalid("spectrum is empty"));
    }
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::invalid(format!("beta must be positive, got {beta}")));
    }
    if energies.iter().any(|e| !e.is_finite()) {
        return Err(Error::invalid("energies must be finite"));
    }
    Ok(energies.iter().copied().fold(f64::INFINITY, f64::min))
}

/// Neumaier-compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
struct Compensated {
    sum: f64,
    carry: f64,
}

impl Compensated {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(self) -> f64 {
        self.sum + self.carry
    }
}

/// `S_k = Σ_j e^{−kβ(ε_j − ε₀)}` for `k = 1..=max_power`.
pub fn boltzmann_sums(energies: &[f64], beta: f64, max_power: usize) -> Result<Vec<f64>> {
    let ground = check_inputs(energies, beta)?;
    if max_power == 0 {
        return Err(Error::invalid("max_power must be at least 1"));
    }
    let mut acc = vec![Compensated::default(); max_power];
    for &e in energies {
        let w = (-beta * (e - ground)).exp();
        let mut p = 1.0;
        for slot in acc.iter_mut() {
            p *= w;
            if p < TERM_FLOOR {
                break;
            }
            slot.add(p);
        }
    }
    Ok(acc.into_iter().map(Compensated::value).collect())
}

fn log_sum_exp(terms: impl Iterator<Item = f64> + Clone) -> f64 {
    let max = terms.clone().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + terms.map(|t| (t - max).exp()).sum::<f64>().ln()
}

fn log_partitions_from_sums(sums: &[f64]) -> Vec<f64> {
    let log_s: Vec<f64> = sums.iter().map(|s| s.ln()).collect();
    let n_max = sums.len();
    let mut log_z = Vec::with_capacity(n_max + 1);
    log_z.push(0.0);
    for n in 1..=n_max {
        let terms = (1..=n).map(|k| log_s[k - 1] + log_z[n - k]);
        let value = log_sum_exp(terms) - (n as f64).ln();
        log_z.push(value);
    }
    log_z
}

/// Canonical ideal Bose gas of `N` particles on a fixed set of levels.
#[derive(Debug, Clone)]
pub struct CanonicalGas {
    shifted: Vec<f64>,
    ground: f64,
    beta: f64,
    log_z: Vec<f64>,
    // Z_{N−k}/Z_N for k = 1..=N
    ratios: Vec<f64>,
}

impl CanonicalGas {
    pub fn new(energies: &[f64], beta: f64, particle_number: u64) -> Result<Self> {
        let ground = check_inputs(energies, beta)?;
        if particle_number == 0 {
            return Err(Error::invalid("particle number must be at least 1"));
        }
        let n = particle_number as usize;
        let sums = boltzmann_sums(energies, beta, n)?;
        let log_z = log_partitions_from_sums(&sums);
        let top = log_z[n];
        let ratios = (1..=n).map(|k| (log_z[n - k] - top).exp()).collect();
        Ok(Self {
            shifted: energies.iter().map(|e| e - ground).collect(),
            ground,
            beta,
            log_z,
            ratios,
        })
    }

    pub fn particle_number(&self) -> u64 {
        (self.log_z.len() - 1) as u64
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn ground_energy(&self) -> f64 {
        self.ground
    }

    pub fn level_count(&self) -> usize {
        self.shifted.len()
    }

    /// `ln Z_0 … ln Z_N` in the ground-shifted gauge.
    pub fn log_partitions(&self) -> &[f64] {
        &self.log_z
    }

    /// `ln Z_n` for the unshifted energies: `ln Z_n(shifted) − β n ε₀`.
    pub fn absolute_log_partition(&self, n: usize) -> f64 {
        self.log_z[n] - self.beta * n as f64 * self.ground
    }

    /// Mean occupation of one level.
    pub fn occupation(&self, level: usize) -> f64 {
        let w = (-self.beta * self.shifted[level]).exp();
        let mut acc = 0.0;
        let mut p = 1.0;
        for &ratio in &self.ratios {
            p *= w;
            if p == 0.0 {
                break;
            }
            acc += p * ratio;
            // ratios are ≤ 1, so the geometric tail bounds what is left
            if w < 1.0 && p * w / (1.0 - w) < 1e-17 * acc {
                break;
            }
        }
        acc
    }

    pub fn occupations(&self) -> Vec<f64> {
        (0..self.shifted.len()).map(|j| self.occupation(j)).collect()
    }
}

/// `ln Z_0 … ln Z_N` (ground-shifted).
pub fn canonical_partition(energies: &[f64], beta: f64, particle_number: u64) -> Result<Vec<f64>> {
    Ok(CanonicalGas::new(energies, beta, particle_number)?.log_z)
}

pub fn canonical_occupation(energies: &[f64], beta: f64, particle_number: u64, level: usize) -> Result<f64> {
    if level >= energies.len() {
        return Err(Error::invalid(format!(
            "level {level} out of range for {} levels",
            energies.len()
        )));
    }
    Ok(CanonicalGas::new(energies, beta, particle_number)?.occupation(level))
}

/// Chemical potential `μ < ε₀` of the grand-canonical gas with mean particle
/// number `N`, found by bisection on `t = ε₀ − μ`.
pub fn grand_canonical_chemical_potential(energies: &[f64], beta: f64, particle_number: f64) -> Result<f64> {
    let ground = check_inputs(energies, beta)?;
    if !(particle_number.is_finite() && particle_number > 0.0) {
        return Err(Error::invalid("particle number must be positive"));
    }
    let excess = |t: f64| -> f64 {
        energies
            .iter()
            .map(|e| 1.0 / (beta * (e - ground + t)).exp_m1())
            .sum::<f64>()
            - particle_number
    };
    // the ground level alone holds N particles at t0, so excess(t0) ≥ 0
    let t0 = (1.0 / particle_number).ln_1p() / beta;
    let mut lo = t0;
    let mut hi = 2.0 * t0;
    while excess(hi) > 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if excess(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    Ok(ground - 0.5 * (lo + hi))
}

/// Canonical solution with the lowest `top_k` occupations listed and the rest
/// aggregated.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermoSolution {
    pub beta: f64,
    pub particle_number: u64,
    pub box_length: f64,
    pub ground_energy: f64,
    pub log_partitions: Vec<f64>,
    pub occupations: Vec<f64>,
    pub remainder_occupation: f64,
    pub total_occupation: f64,
    pub condensate_density: f64,
    pub condensate_fraction: f64,
    /// False when the spectrum cutoff is too low for `beta`.
    pub converged: bool,
}

impl ThermoSolution {
    pub fn log_partition(&self) -> f64 {
        *self.log_partitions.last().expect("N ≥ 1")
    }

    /// Flat `key=value` record.
    pub fn to_record(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "beta={}", fmt_real(self.beta));
        let _ = writeln!(out, "particle_number={}", self.particle_number);
        let _ = writeln!(out, "box_length={}", fmt_real(self.box_length));
        let _ = writeln!(out, "ground_energy={}", fmt_real(self.ground_energy));
        let _ = writeln!(out, "log_partition={}", fmt_real(self.log_partition()));
        let _ = writeln!(out, "condensate_density={}", fmt_real(self.condensate_density));
        let _ = writeln!(out, "condensate_fraction={}", fmt_real(self.condensate_fraction));
        let _ = writeln!(out, "total_occupation={}", fmt_real(self.total_occupation));
        let _ = writeln!(out, "remainder_occupation={}", fmt_real(self.remainder_occupation));
        let _ = writeln!(out, "converged={}", self.converged);
        for (j, n) in self.occupations.iter().enumerate() {
            let _ = writeln!(out, "occupation_{j}={}", fmt_real(*n));
        }
        out
    }
}

/// Canonical profile on raw levels inside a box of the given length.
pub fn condensate_profile_levels(
    energies: &[f64],
    box_length: f64,
    beta: f64,
    particle_number: u64,
    top_k: usize,
) -> Result<ThermoSolution> {
    if top_k > energies.len() {
        return Err(Error::invalid(format!(
            "top_k = {top_k} exceeds the {} available modes",
            energies.len()
        )));
    }
    if !(box_length.is_finite() && box_length > 0.0) {
        return Err(Error::invalid("box length must be positive"));
    }
    let mut order: Vec<usize> = (0..energies.len()).collect();
    order.sort_by(|&a, &b| energies[a].total_cmp(&energies[b]).then(a.cmp(&b)));
    let gas = CanonicalGas::new(energies, beta, particle_number)?;
    let all: Vec<f64> = order.iter().map(|&j| gas.occupation(j)).collect();
    let mut total = Compensated::default();
    all.iter().for_each(|&x| total.add(x));
    let mut remainder = Compensated::default();
    all[top_k..].iter().for_each(|&x| remainder.add(x));
    let n0 = all[0];
    Ok(ThermoSolution {
        beta,
        particle_number,
        box_length,
        ground_energy: gas.ground_energy(),
        log_partitions: gas.log_z.clone(),
        occupations: all[..top_k].to_vec(),
        remainder_occupation: remainder.value(),
        total_occupation: total.value(),
        condensate_density: n0 / box_length,
        condensate_fraction: n0 / particle_number as f64,
        converged: true,
    })
}

/// Canonical profile on a spectrum; `converged` reports whether the spectrum
/// cutoff is adequate for `beta`.
pub fn condensate_profile(
    spectrum: &Spectrum,
    beta: f64,
    particle_number: u64,
    top_k: usize,
) -> Result<ThermoSolution> {
    let mut sol = condensate_profile_levels(spectrum.energies(), spectrum.box_length(), beta, particle_number, top_k)?;
    sol.converged = spectrum.is_converged_for(beta);
    Ok(sol)
}

/// Thermal (excited-state) density of the grand-canonical gas at `μ = ε₀`,
/// `(1/L) Σ_{j≥1} 1/(e^{β(ε_j−ε₀)} − 1)`: the density the non-ground modes
/// can absorb before the ground mode must take the excess.
pub fn saturation_density(spectrum: &Spectrum, beta: f64) -> f64 {
    let e = spectrum.energies();
    let ground = e[0];
    e[1..]
        .iter()
        .map(|x| 1.0 / (beta * (x - ground)).exp_m1())
        .filter(|v| v.is_finite())
        .sum::<f64>()
        / spectrum.box_length()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disorder::{sample_realization, EnsembleSeed};
    use crate::spectrum::build_converged_spectrum;
    use proptest::prelude::*;

    /// Exhaustive enumeration over occupation vectors: `(Z_N, ⟨n_j⟩)` with
    /// unshifted energies.
    fn enumerate(energies: &[f64], beta: f64, n: u32) -> (f64, Vec<f64>) {
        fn rec(e: &[f64], beta: f64, left: u32, occ: &mut Vec<u32>, z: &mut f64, mean: &mut [f64]) {
            if occ.len() == e.len() - 1 {
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

    #[test]
    fn sums_two_levels() {
        let s = boltzmann_sums(&[0.0, 1.0], 1.0, 2).unwrap();
        assert!((s[0] - (1.0 + (-1f64).exp())).abs() < 1e-15);
        assert!((s[1] - (1.0 + (-2f64).exp())).abs() < 1e-15);
    }

    #[test]
    fn sums_low_temperature_count_ground_multiplicity() {
        let s = boltzmann_sums(&[0.3, 0.3, 0.9, 2.0], 1e4, 3).unwrap();
        assert!(s.iter().all(|&x| (x - 2.0).abs() < 1e-15));
    }

    #[test]
    fn sums_match_extended_precision_oracle() {
        let r = sample_realization(1.0, 8000.0, EnsembleSeed::new(8, 1)).unwrap();
        let spec = build_converged_spectrum(&r, 1.0).unwrap();
        assert!(spec.len() >= 10_000, "{}", spec.len());
        let e = spec.energies();
        let s1 = boltzmann_sums(e, 1.0, 1).unwrap()[0];
        // double-double accumulation of the same terms, ordered smallest first
        let mut terms: Vec<f64> = e.iter().map(|x| (-(x - e[0])).exp()).collect();
        terms.sort_by(f64::total_cmp);
        let (mut hi, mut lo) = (0.0f64, 0.0f64);
        for t in terms {
            let s = hi + t;
            let bp = s - hi;
            let err = (hi - (s - bp)) + (t - bp);
            hi = s;
            lo += err;
        }
        let oracle = hi + lo;
        assert!(((s1 - oracle) / oracle).abs() < 1e-12, "{s1} vs {oracle}");
    }

    #[test]
    fn single_level_partition_is_one() {
        let lz = canonical_partition(&[2.5], 0.7, 9).unwrap();
        assert!(lz.iter().all(|&v| v.abs() < 1e-14));
    }

    #[test]
    fn two_levels_two_particles() {
        let lz = canonical_partition(&[0.0, 1.0], 1.0, 2).unwrap();
        let (z, mean) = enumerate(&[0.0, 1.0], 1.0, 2);
        assert!((lz[2].exp() - z).abs() < 1e-14);
        assert!((z - 1.503214724).abs() < 1e-6);
        let n0 = canonical_occupation(&[0.0, 1.0], 1.0, 2, 0).unwrap();
        let e1 = (-1f64).exp();
        assert!((n0 - (2.0 + e1) / (1.0 + e1 + e1 * e1)).abs() < 1e-14);
        assert!((n0 - mean[0]).abs() < 1e-14);
        assert!((n0 - 1.57522).abs() < 1e-5);
    }

    #[test]
    fn high_temperature_counts_multisets() {
        // C(M+N−1, N) for M = 4, N = 6 is 84
        let lz = canonical_partition(&[0.0, 0.4, 1.1, 3.0], 1e-12, 6).unwrap();
        assert!((lz[6].exp() / 84.0 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn low_temperature_dominance() {
        let e = [0.0, 0.5, 0.9, 1.7];
        for n in [1u64, 5, 37, 100] {
            let n0 = canonical_occupation(&e, 50.0, n, 0).unwrap();
            assert!(n0 >= n as f64 - 1e-10, "N={n}: {n0}");
        }
        let (_, mean) = enumerate(&e, 50.0, 4);
        assert!((canonical_occupation(&e, 50.0, 4, 0).unwrap() - mean[0]).abs() < 1e-12);
    }

    #[test]
    fn chemical_potential_single_level() {
        for (beta, n) in [(1.0, 1.0), (0.3, 10.0), (4.0, 1e4)] {
            let mu = grand_canonical_chemical_potential(&[0.0], beta, n).unwrap();
            let want = -(1.0 + 1.0 / n).ln() / beta;
            assert!(((mu - want) / want).abs() < 1e-8, "{mu} vs {want}");
        }
    }

    #[test]
    fn chemical_potential_two_levels_closed_form() {
        // x = e^{−μ} solves e x² − 2(e+1) x + 3 = 0 on the branch x > 1
        let e = std::f64::consts::E;
        let x = ((e + 1.0) + ((e + 1.0).powi(2) - 3.0 * e).sqrt()) / e;
        let want = -x.ln();
        let mu = grand_canonical_chemical_potential(&[0.0, 1.0], 1.0, 1.0).unwrap();
        assert!((mu - want).abs() < 1e-12, "{mu} vs {want}");
    }

    #[test]
    fn chemical_potential_increases_with_n() {
        let e = [0.1, 0.2, 0.25, 1.0];
        let mut last = f64::NEG_INFINITY;
        for n in [0.5, 1.0, 3.0, 10.0, 100.0] {
            let mu = grand_canonical_chemical_potential(&e, 2.0, n).unwrap();
            assert!(mu > last && mu < 0.1);
            last = mu;
        }
    }

    #[test]
    fn one_particle_fraction_is_gibbs_weight() {
        let e = [0.3, 0.5, 0.5, 2.0];
        let sol = condensate_profile_levels(&e, 10.0, 1.3, 1, 2).unwrap();
        let z: f64 = e.iter().map(|x| (-1.3 * x).exp()).sum();
        let want = (-1.3 * 0.3f64).exp() / z;
        assert!((sol.condensate_fraction - want).abs() < 1e-14);
        assert!((sol.condensate_density - want / 10.0).abs() < 1e-14);
    }

    #[test]
    fn frozen_gas_condenses() {
        let sol = condensate_profile_levels(&[0.0, 0.2, 0.4], 1.0, 1e3, 50, 3).unwrap();
        assert!((sol.condensate_fraction - 1.0).abs() < 1e-12);
    }

    #[test]
    fn profile_rejects_large_top_k() {
        assert!(condensate_profile_levels(&[0.0, 1.0], 1.0, 1.0, 3, 3).is_err());
    }

    #[test]
    fn sampled_profile_is_consistent() {
        let r = sample_realization(1.0, 1000.0, EnsembleSeed::new(1, 0)).unwrap();
        let spec = build_converged_spectrum(&r, 1.0).unwrap();
        let sol = condensate_profile(&spec, 1.0, 1000, 10).unwrap();
        assert!(sol.converged);
        assert!(sol.condensate_density > 0.0);
        let n0 = canonical_occupation(spec.energies(), 1.0, 1000, 0).unwrap();
        assert!((sol.condensate_density - n0 / 1000.0).abs() < 1e-15);
        assert!((sol.total_occupation - 1000.0).abs() < 1e-8 * 1000.0);
        assert!(sol.occupations.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn record_lists_top_k() {
        let sol = condensate_profile_levels(&[0.0, 1.0, 2.0], 4.0, 1.0, 3, 2).unwrap();
        let rec = sol.to_record();
        assert!(rec.contains("occupation_1="));
        assert!(!rec.contains("occupation_2="));
        assert!(rec.lines().any(|l| l == "particle_number=3"));
    }

    proptest! {
        #[test]
        fn recursion_matches_enumeration(
            energies in proptest::collection::vec(0.0f64..3.0, 1..=4),
            beta in 0.1f64..5.0,
            n in 1u32..=6,
        ) {
            let gas = CanonicalGas::new(&energies, beta, n as u64).unwrap();
            let (z, mean) = enumerate(&energies, beta, n);
            prop_assert!((gas.absolute_log_partition(n as usize).exp() - z).abs() < 1e-10);
            for (j, m) in mean.iter().enumerate() {
                prop_assert!((gas.occupation(j) - m).abs() < 1e-10);
            }
        }

        #[test]
        fn gauge_invariance(
            energies in proptest::collection::vec(0.0f64..3.0, 1..=6),
            beta in 0.1f64..5.0,
            n in 1u64..40,
            shift in -5.0f64..5.0,
        ) {
            let a = CanonicalGas::new(&energies, beta, n).unwrap();
            let moved: Vec<f64> = energies.iter().map(|e| e + shift).collect();
            let b = CanonicalGas::new(&moved, beta, n).unwrap();
            for j in 0..energies.len() {
                prop_assert!((a.occupation(j) - b.occupation(j)).abs() < 1e-10);
            }
            let nn = n as usize;
            let expected = a.absolute_log_partition(nn) - beta * n as f64 * shift;
            prop_assert!((b.absolute_log_partition(nn) - expected).abs() < 1e-9 * expected.abs().max(1.0));
        }

        #[test]
        fn occupations_decrease_with_energy(
            mut energies in proptest::collection::vec(0.0f64..3.0, 2..=8),
            beta in 0.1f64..5.0,
            n in 1u64..60,
        ) {
            energies.sort_by(f64::total_cmp);
            energies.dedup_by(|a, b| (*a - *b).abs() < 1e-3);
            let gas = CanonicalGas::new(&energies, beta, n).unwrap();
            let occ = gas.occupations();
            prop_assert!(occ.windows(2).all(|w| w[0] > w[1]));
            let total: f64 = occ.iter().sum();
            prop_assert!((total - n as f64).abs() < 1e-8 * n as f64);
        }
    }
}
