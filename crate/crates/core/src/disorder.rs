//! Poisson point configurations on the box `(-L/2, L/2)` and the random
//! interval decomposition they induce.
//!
//! A realization is drawn from the exact law of a homogeneous Poisson process
//! restricted to the box: first the point count `M ~ Poisson(νL)`, then `M`
//! independent uniforms which are sorted. Every realization is a pure function
//! of `(intensity, box_length, seed)`.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use crate::{fmt_real, Error, Result};

/// Poisson means up to this value are drawn by sequential inversion.
const INVERSION_MAX_MEAN: f64 = 30.0;

/// Identifies one member of a reproducible ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct EnsembleSeed {
    pub base_seed: u64,
    pub realization_index: u64,
}

impl EnsembleSeed {
    pub fn new(base_seed: u64, realization_index: u64) -> Self {
        Self {
            base_seed,
            realization_index,
        }
    }

    /// 64-bit stream key derived from the base seed and the index through
    /// the splitmix64 finalizer.
    pub fn stream_key(&self) -> u64 {
        let idx = splitmix64(self.realization_index.wrapping_add(0x9E37_79B9_7F4A_7C15));
        splitmix64(self.base_seed ^ idx)
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let key = self.stream_key();
        let mut seed = [0u8; 32];
        let mut state = key;
        for chunk in seed.chunks_exact_mut(8) {
            state = splitmix64(state);
            chunk.copy_from_slice(&state.to_le_bytes());
        }
        ChaCha8Rng::from_seed(seed)
    }
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// One subinterval `(left, right)` of the box with positive length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub left: f64,
    pub right: f64,
    pub length: f64,
}

impl Interval {
    fn new(left: f64, right: f64) -> Self {
        Self {
            left,
            right,
            length: right - left,
        }
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.left + self.right)
    }
}

/// Sampled Poisson points inside the box together with the intervals they cut
/// the box into.
#[derive(Debug, Clone, PartialEq)]
pub struct DisorderRealization {
    intensity: f64,
    box_length: f64,
    points: Vec<f64>,
    intervals: Vec<Interval>,
    seed: EnsembleSeed,
}

impl DisorderRealization {
    /// Builds a realization from explicit points. Points are sorted, points on
    /// or outside the box edge are discarded and coincident points merged.
    pub fn from_points(
        intensity: f64,
        box_length: f64,
        mut points: Vec<f64>,
        seed: EnsembleSeed,
    ) -> Result<Self> {
        check_positive("intensity", intensity)?;
        check_positive("box_length", box_length)?;
        if points.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("points must be finite"));
        }
        let half = 0.5 * box_length;
        points.retain(|&x| x > -half && x < half);
        points.sort_by(f64::total_cmp);
        points.dedup();

        let mut intervals = Vec::with_capacity(points.len() + 1);
        let mut left = -half;
        for &x in points.iter().chain(std::iter::once(&half)) {
            if x > left {
                intervals.push(Interval::new(left, x));
            }
            left = x;
        }
        Ok(Self {
            intensity,
            box_length,
            points,
            intervals,
            seed,
        })
    }

    pub fn intensity(&self) -> f64 {
        self.intensity
    }

    pub fn box_length(&self) -> f64 {
        self.box_length
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn seed(&self) -> EnsembleSeed {
        self.seed
    }

    pub fn lengths(&self) -> impl Iterator<Item = f64> + '_ {
        self.intervals.iter().map(|iv| iv.length)
    }

    /// Gaps between consecutive points, i.e. the lengths of all intervals not
    /// clipped by the box edges.
    pub fn interior_gaps(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.windows(2).map(|w| w[1] - w[0])
    }

    /// Line-oriented text export: a `key=value` header followed by one point
    /// per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "intensity={}", fmt_real(self.intensity));
        let _ = writeln!(out, "box_length={}", fmt_real(self.box_length));
        let _ = writeln!(out, "base_seed={}", self.seed.base_seed);
        let _ = writeln!(out, "realization_index={}", self.seed.realization_index);
        let _ = writeln!(out, "points={}", self.points.len());
        for &x in &self.points {
            let _ = writeln!(out, "{}", fmt_real(x));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let mut header = |key: &str| -> Result<String> {
            let (n, line) = lines.next().ok_or(Error::Parse {
                line: 0,
                msg: format!("missing header field `{key}`"),
            })?;
            match line.split_once('=') {
                Some((k, v)) if k.trim() == key => Ok(v.trim().to_string()),
                _ => Err(Error::Parse {
                    line: n + 1,
                    msg: format!("expected `{key}=...`"),
                }),
            }
        };
        let parse_err = |line: usize, what: &str| Error::Parse {
            line,
            msg: format!("bad value for {what}"),
        };
        let intensity: f64 = header("intensity")?.parse().map_err(|_| parse_err(1, "intensity"))?;
        let box_length: f64 = header("box_length")?.parse().map_err(|_| parse_err(2, "box_length"))?;
        let base_seed: u64 = header("base_seed")?.parse().map_err(|_| parse_err(3, "base_seed"))?;
        let index: u64 = header("realization_index")?
            .parse()
            .map_err(|_| parse_err(4, "realization_index"))?;
        let count: usize = header("points")?.parse().map_err(|_| parse_err(5, "points"))?;
        let points = lines
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(n, l)| l.trim().parse::<f64>().map_err(|_| parse_err(n + 1, "point")))
            .collect::<Result<Vec<_>>>()?;
        if points.len() != count {
            return Err(Error::Parse {
                line: 5,
                msg: format!("header announces {count} points, found {}", points.len()),
            });
        }
        Self::from_points(intensity, box_length, points, EnsembleSeed::new(base_seed, index))
    }
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} must be positive and finite, got {x}")))
    }
}

fn sample_poisson_count<R: Rng>(mean: f64, rng: &mut R) -> Result<u64> {
    if mean <= INVERSION_MAX_MEAN {
        let u: f64 = rng.random();
        let mut p = (-mean).exp();
        let mut cdf = p;
        let mut k = 0u64;
        // the cdf saturates below 1 in floating point for the far tail
        while u > cdf && p > 0.0 {
            k += 1;
            p *= mean / k as f64;
            cdf += p;
        }
        Ok(k)
    } else {
        let dist = Poisson::new(mean).map_err(|e| Error::invalid(format!("poisson mean {mean}: {e}")))?;
        Ok(dist.sample(rng) as u64)
    }
}

/// Draws one realization of the Poisson process with the given intensity on
/// the box `(-L/2, L/2)`.
pub fn sample_realization(
    intensity: f64,
    box_length: f64,
    seed: EnsembleSeed,
) -> Result<DisorderRealization> {
    check_positive("intensity", intensity)?;
    check_positive("box_length", box_length)?;
    let mut rng = seed.rng();
    let count = sample_poisson_count(intensity * box_length, &mut rng)?;
    let half = 0.5 * box_length;
    let points = (0..count)
        .map(|_| {
            let u: f64 = rng.random();
            -half + box_length * u
        })
        .collect();
    DisorderRealization::from_points(intensity, box_length, points, seed)
}

/// Longest interval length and the lowest index attaining it.
pub fn longest_interval(realization: &DisorderRealization) -> (f64, usize) {
    realization
        .intervals
        .iter()
        .enumerate()
        .fold((0.0, 0), |(best, idx), (j, iv)| {
            if iv.length > best {
                (iv.length, j)
            } else {
                (best, idx)
            }
        })
}

pub fn count_intervals_at_least(realization: &DisorderRealization, threshold: f64) -> usize {
    realization
        .intervals
        .iter()
        .filter(|iv| iv.length >= threshold)
        .count()
}
