//! Torus samples built from the angle sequences, Weyl-sum tables and grid box
//! discrepancy.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytics::sieve::{is_prime_factors, ProgressionFactorizer};
use crate::analytics::{cache, check_cap, map_blocks, DEFAULT_CAP};
use crate::elliptic::{angle_points_from_factors, arg_pairs_from_factors};
use crate::error::{domain, Error, Result};
use crate::quadratic::QuadSplitTable;
use crate::quaternion::{h_points, log_ratios_from_factors, script_h_points};

/// Points of `[0, 1)²` with optional positive weights.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TorusSample {
    pub points: Vec<(f64, f64)>,
    pub weights: Option<Vec<f64>>,
}

fn wrap(t: f64) -> f64 {
    let r = t.rem_euclid(1.0);
    // rem_euclid can round up to exactly 1.0 for tiny negative inputs.
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

impl TorusSample {
    pub fn new(points: Vec<(f64, f64)>) -> Self {
        TorusSample { points: points.into_iter().map(|(a, b)| (wrap(a), wrap(b))).collect(), weights: None }
    }

    pub fn weighted(points: Vec<(f64, f64)>, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != points.len() {
            return domain(format!("{} weights for {} points", weights.len(), points.len()));
        }
        if weights.iter().any(|&w| !(w > 0.0)) {
            return domain("weights must be positive");
        }
        Ok(TorusSample { weights: Some(weights), ..TorusSample::new(points) })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn weight(&self, i: usize) -> f64 {
        self.weights.as_ref().map_or(1.0, |w| w[i])
    }

    fn total_weight(&self) -> f64 {
        self.weights.as_ref().map_or(self.points.len() as f64, |w| w.iter().sum())
    }

    /// The image under `(t1, t2) ↦ (t1 + t2, t1 − t2)`.
    pub fn sum_difference(&self) -> TorusSample {
        TorusSample {
            points: self.points.iter().map(|&(a, b)| (wrap(a + b), wrap(a - b))).collect(),
            weights: self.weights.clone(),
        }
    }
}

/// Normalized Weyl sums `|Σ w·e(m·x)| / Σ w` for `|m1|, |m2| ≤ max_freq`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeylTable {
    pub max_freq: i64,
    /// Row-major over `m1` then `m2`, both from `−max_freq` to `max_freq`.
    pub entries: Vec<f64>,
}

impl WeylTable {
    pub fn entry(&self, m1: i64, m2: i64) -> f64 {
        let w = 2 * self.max_freq + 1;
        self.entries[((m1 + self.max_freq) * w + m2 + self.max_freq) as usize]
    }

    /// Largest entry with `0 < max(|m1|, |m2|)`.
    pub fn max_nonzero(&self) -> f64 {
        let m = self.max_freq;
        (-m..=m)
            .flat_map(|a| (-m..=m).map(move |b| (a, b)))
            .filter(|&(a, b)| a != 0 || b != 0)
            .map(|(a, b)| self.entry(a, b))
            .fold(0.0, f64::max)
    }
}

const CHUNK: usize = 1 << 14;

pub fn weyl_table(sample: &TorusSample, max_freq: i64) -> Result<WeylTable> {
    if sample.is_empty() {
        return domain("Weyl sums of an empty sample");
    }
    if max_freq < 0 {
        return domain(format!("max frequency must be >= 0, got {max_freq}"));
    }
    let w = (2 * max_freq + 1) as usize;
    let m = max_freq as i32;
    // Fixed chunks summed in order keep the result independent of the pool size.
    let partial: Vec<Vec<Complex64>> = sample
        .points
        .par_chunks(CHUNK)
        .enumerate()
        .map(|(c, pts)| {
            let mut acc = vec![Complex64::new(0.0, 0.0); w * w];
            for (k, &(a, b)) in pts.iter().enumerate() {
                let wt = sample.weight(c * CHUNK + k);
                let (ea, eb) = (Complex64::from_polar(1.0, TAU * a), Complex64::from_polar(1.0, TAU * b));
                let pb: Vec<Complex64> = (-m..=m).map(|j| eb.powi(j)).collect();
                for (i, m1) in (-m..=m).enumerate() {
                    let base = ea.powi(m1) * wt;
                    for (j, e) in pb.iter().enumerate() {
                        acc[i * w + j] += base * e;
                    }
                }
            }
            acc
        })
        .collect();
    let mut total = vec![Complex64::new(0.0, 0.0); w * w];
    for p in partial {
        for (t, v) in total.iter_mut().zip(p) {
            *t += v;
        }
    }
    let tw = sample.total_weight();
    Ok(WeylTable { max_freq, entries: total.iter().map(|z| z.norm() / tw).collect() })
}

/// Cell masses on the `G × G` grid, normalized to total 1.
fn cell_masses(sample: &TorusSample, g: usize) -> Vec<f64> {
    let mut cells = vec![0.0; g * g];
    for (i, &(a, b)) in sample.points.iter().enumerate() {
        let ia = ((a * g as f64) as usize).min(g - 1);
        let ib = ((b * g as f64) as usize).min(g - 1);
        cells[ia * g + ib] += sample.weight(i);
    }
    let tw = sample.total_weight();
    cells.iter_mut().for_each(|c| *c /= tw);
    cells
}

/// Max over boxes `[i1/G, i2/G) × [j1/G, j2/G)` of `|empirical mass − area|`.
pub fn box_discrepancy(sample: &TorusSample, grid: usize) -> Result<f64> {
    if grid < 2 {
        return domain(format!("grid must be at least 2, got {grid}"));
    }
    if sample.is_empty() {
        return domain("discrepancy of an empty sample");
    }
    let g = grid;
    let cells = cell_masses(sample, g);
    let mut pre = vec![0.0; (g + 1) * (g + 1)];
    for i in 0..g {
        for j in 0..g {
            pre[(i + 1) * (g + 1) + j + 1] =
                cells[i * g + j] + pre[i * (g + 1) + j + 1] + pre[(i + 1) * (g + 1) + j] - pre[i * (g + 1) + j];
        }
    }
    let at = |i: usize, j: usize| pre[i * (g + 1) + j];
    let mut worst: f64 = 0.0;
    for i1 in 0..g {
        for i2 in i1 + 1..=g {
            for j1 in 0..g {
                for j2 in j1 + 1..=g {
                    let mass = at(i2, j2) - at(i1, j2) - at(i2, j1) + at(i1, j1);
                    let area = ((i2 - i1) * (j2 - j1)) as f64 / (g * g) as f64;
                    worst = worst.max((mass - area).abs());
                }
            }
        }
    }
    Ok(worst)
}

/// One-dimensional analogue over intervals `[i1/G, i2/G)`.
pub fn box_discrepancy_1d(values: &[f64], grid: usize) -> Result<f64> {
    if grid < 2 {
        return domain(format!("grid must be at least 2, got {grid}"));
    }
    if values.is_empty() {
        return domain("discrepancy of an empty sample");
    }
    let mut cells = vec![0.0; grid];
    for &t in values {
        cells[((wrap(t) * grid as f64) as usize).min(grid - 1)] += 1.0;
    }
    let n = values.len() as f64;
    let mut pre = vec![0.0; grid + 1];
    for i in 0..grid {
        pre[i + 1] = pre[i] + cells[i] / n;
    }
    let mut worst: f64 = 0.0;
    for i1 in 0..grid {
        for i2 in i1 + 1..=grid {
            worst = worst.max((pre[i2] - pre[i1] - (i2 - i1) as f64 / grid as f64).abs());
        }
    }
    Ok(worst)
}

/// The angle sequences a sample can be built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Case {
    /// `(θ1/π, θ2/π)` indexed by ν_H.
    E,
    /// The same points indexed by ν_H + 2.
    EShifted,
    /// `(log y1/log ε⁴, log y2/log ε⁴)` indexed by n.
    H,
    /// `(arg z1/π, arg z2/π)` indexed by ν_H.
    ScriptE,
    /// `(log|z1/σz1|/log ε⁴, log|z2/σz2|/log ε⁴)` indexed by n.
    ScriptH,
}

impl Case {
    pub const ALL: [Case; 5] = [Case::E, Case::EShifted, Case::H, Case::ScriptE, Case::ScriptH];

    pub fn name(self) -> &'static str {
        match self {
            Case::E => "E",
            Case::EShifted => "E_shifted",
            Case::H => "h",
            Case::ScriptE => "script_E",
            Case::ScriptH => "script_H",
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Case {
    type Err = Error;
    fn from_str(s: &str) -> Result<Case> {
        Case::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Domain(format!("unknown case {s:?}; expected one of E, E_shifted, h, script_E, script_H")))
    }
}

pub fn build_sample(case: Case, x: u64, primes_only: bool) -> Result<TorusSample> {
    build_sample_capped(case, x, primes_only, DEFAULT_CAP)
}

pub fn build_sample_capped(case: Case, x: u64, primes_only: bool, cap: u64) -> Result<TorusSample> {
    check_cap(x, cap)?;
    let points = match case {
        Case::E | Case::EShifted | Case::ScriptE => elliptic_points(case, x, primes_only)?,
        Case::H | Case::ScriptH => hyperbolic_points(case, x, primes_only),
    };
    Ok(TorusSample::new(points))
}

fn elliptic_points(case: Case, x: u64, primes_only: bool) -> Result<Vec<(f64, f64)>> {
    if x < 3 {
        return Ok(Vec::new());
    }
    let table = cache::gauss_split_from_env(x + 2)?;
    let fz = ProgressionFactorizer::new(1, 0, x + 2);
    let shift = if case == Case::EShifted { 2 } else { 0 };
    let blocks = map_blocks(1, x, |s, e| {
        let block = fz.block(s.saturating_sub(4), e + 2);
        let mut out = Vec::new();
        for size in s..e {
            if size < 3 + shift || (primes_only && !is_prime_factors(block.at(size))) {
                continue;
            }
            let n = size - shift;
            let (plus, minus) = (block.at(n + 2), block.at(n - 2));
            if case == Case::ScriptE {
                out.extend(
                    arg_pairs_from_factors(n, plus, minus, &table)
                        .into_iter()
                        .map(|(a1, a2)| (a1 / PI, a2 / PI)),
                );
            } else {
                angle_points_from_factors(n, plus, minus, &table, &mut out);
            }
        }
        out
    });
    Ok(blocks.concat())
}

fn hyperbolic_points(case: Case, x: u64, primes_only: bool) -> Vec<(f64, f64)> {
    let table = QuadSplitTable::new(5 * x + 1);
    let (fz5, fz1) = (ProgressionFactorizer::new(5, 1, x), ProgressionFactorizer::new(1, 0, x));
    let blocks = map_blocks(1, x, |s, e| {
        let (b5, b1) = (fz5.block(s, e), fz1.block(s, e));
        let mut out = Vec::new();
        for n in s..e {
            let f1 = b1.at(n);
            if primes_only && !is_prime_factors(f1) {
                continue;
            }
            let l1 = log_ratios_from_factors(b5.at(n), &table);
            if l1.is_empty() {
                continue;
            }
            let l2 = log_ratios_from_factors(f1, &table);
            if case == Case::H {
                h_points(&l1, &l2, &mut out);
            } else {
                script_h_points(&l1, &l2, &mut out);
            }
        }
        out
    });
    blocks.concat()
}
