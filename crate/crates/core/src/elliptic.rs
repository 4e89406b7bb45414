//! SL₂(ℤ) side: the size ν_H, Cartan angles, the matrix ↔ Gaussian-pair
//! dictionary, enumeration by ν_H and the angular sums S_e.

use std::f64::consts::{PI, TAU};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytics::euler::default_constants;
use crate::analytics::report::{Measure, Mode, Scale, StatReport};
use crate::analytics::sieve::{is_prime_factors, ProgressionFactorizer};
use crate::analytics::{check_cap, map_blocks, DEFAULT_CAP};
use crate::error::{domain, Error, Result};
use crate::gaussian::{
    self, primary_reps_with_norm, reps_from_factors, reps_with_norm, weyl_w, weyl_wp, weyl_wp_from_factors,
    GaussInt, GaussSplitTable,
};

/// `[[a, b], [c, d]]` with `ad − bc = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct UniModularMat {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl UniModularMat {
    pub const IDENTITY: UniModularMat = UniModularMat { a: 1, b: 0, c: 0, d: 1 };
    /// The generator of the stabilizer of `i`.
    pub const GAMMA_I: UniModularMat = UniModularMat { a: 0, b: 1, c: -1, d: 0 };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let det = a as i128 * d as i128 - b as i128 * c as i128;
        if det != 1 {
            return domain(format!("[[{a}, {b}], [{c}, {d}]] has determinant {det}"));
        }
        Ok(UniModularMat { a, b, c, d })
    }

    pub fn mul(&self, o: &UniModularMat) -> UniModularMat {
        UniModularMat {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn inverse(&self) -> UniModularMat {
        UniModularMat { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn pow(&self, e: u32) -> UniModularMat {
        (0..e).fold(UniModularMat::IDENTITY, |acc, _| acc.mul(self))
    }

    /// `a² + b² + c² + d²`.
    pub fn nu_h(&self) -> u64 {
        let s: i128 = [self.a, self.b, self.c, self.d].iter().map(|&v| v as i128 * v as i128).sum();
        u64::try_from(s).expect("ν_H exceeds 64 bits")
    }

    /// `z1 = (a+d) + i(b−c)`, `z2 = (a−d) − i(b+c)`.
    pub fn to_gauss_pair(&self) -> (GaussInt, GaussInt) {
        (
            GaussInt::new(self.a + self.d, self.b - self.c),
            GaussInt::new(self.a - self.d, -(self.b + self.c)),
        )
    }

    /// Image of `i` in the disc model, `z2 / conj(z1)`.
    pub fn disc_point(&self) -> Complex64 {
        let (z1, z2) = self.to_gauss_pair();
        z2.to_complex() / z1.conj().to_complex()
    }
}

impl fmt::Display for UniModularMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

pub fn nu_h(m: &UniModularMat) -> u64 {
    m.nu_h()
}

pub fn to_gauss_pair(m: &UniModularMat) -> (GaussInt, GaussInt) {
    m.to_gauss_pair()
}

/// Inverse of [`to_gauss_pair`].
pub fn from_gauss_pair(z1: GaussInt, z2: GaussInt) -> Result<UniModularMat> {
    let (x1, y1, x2, y2) = (z1.re, z1.im, z2.re, z2.im);
    if (x1 + x2) % 2 != 0 || (y1 + y2) % 2 != 0 {
        return domain(format!("({z1}, {z2}) violates the parity condition"));
    }
    UniModularMat::new((x1 + x2) / 2, (y1 - y2) / 2, (-y1 - y2) / 2, (x1 - x2) / 2)
}

/// Cartan data: θ1, θ2 in `[0, π)` and the hyperbolic distance `r`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CartanAngles {
    pub theta1: f64,
    pub theta2: f64,
    pub r: f64,
}

/// `2θ1 = arg z1 + arg z2` and `2θ2 = arg z1 − arg z2` (mod 2π), `r = arccosh(ν_H/2)`.
pub fn cartan_angles(m: &UniModularMat) -> Result<CartanAngles> {
    let nu = m.nu_h();
    if nu == 2 {
        return domain("angles undefined at origin: the matrix fixes i");
    }
    let (z1, z2) = m.to_gauss_pair();
    let (a1, a2) = (z1.arg(), z2.arg());
    Ok(CartanAngles {
        theta1: (a1 + a2).rem_euclid(TAU) / 2.0,
        theta2: (a1 - a2).rem_euclid(TAU) / 2.0,
        r: (nu as f64 / 2.0).acosh(),
    })
}

/// All γ ∈ SL₂(ℤ) with ν_H(γ) = n, sorted, built from Gaussian pairs.
pub fn enumerate_norm(n: u64) -> Result<Vec<UniModularMat>> {
    if n < 2 {
        return domain(format!("ν_H takes values >= 2, got {n}"));
    }
    let mut out = Vec::new();
    match n % 4 {
        2 => {
            let (r1, r2) = (reps_with_norm(n + 2), reps_with_norm(n - 2));
            for &z1 in &r1 {
                for &z2 in &r2 {
                    out.push(from_gauss_pair(z1, z2)?);
                }
            }
        }
        3 => {
            let (p1, p2) = (primary_reps_with_norm(n + 2)?, primary_reps_with_norm(n - 2)?);
            let left: Vec<UniModularMat> = (0..4).map(|j| UniModularMat::GAMMA_I.pow(j)).collect();
            let right: Vec<UniModularMat> = (0..2).map(|j| UniModularMat::GAMMA_I.pow(j)).collect();
            for &w1 in &p1 {
                for &w2 in &p2 {
                    let g = from_gauss_pair(w1, w2)?;
                    for l in &left {
                        for r in &right {
                            out.push(l.mul(&g).mul(r));
                        }
                    }
                }
            }
        }
        _ => {}
    }
    out.sort();
    Ok(out)
}

/// `w^e` with negative exponents meaning powers of the conjugate, in `i128`.
fn signed_pow(z: GaussInt, e: i64) -> Option<(i128, i128)> {
    let w = if e >= 0 { z } else { z.conj() };
    let (mut re, mut im) = (1i128, 0i128);
    for _ in 0..e.unsigned_abs() {
        let (a, b) = (w.re as i128, w.im as i128);
        (re, im) = (re.checked_mul(a)?.checked_sub(im.checked_mul(b)?)?, re.checked_mul(b)?.checked_add(im.checked_mul(a)?)?);
    }
    Some((re, im))
}

/// Σ u1^{e1} u2^{e2} over the pairs, with `u = z/|z|`. All pairs share norms,
/// so the numerators are summed exactly and divided once.
fn phase_sum(pairs: &[(GaussInt, GaussInt)], e1: i64, e2: i64) -> Complex64 {
    let Some(&(f1, f2)) = pairs.first() else {
        return Complex64::new(0.0, 0.0);
    };
    let exact = pairs.iter().try_fold((0i128, 0i128), |(sr, si), &(z1, z2)| {
        let (ar, ai) = signed_pow(z1, e1)?;
        let (br, bi) = signed_pow(z2, e2)?;
        let re = ar.checked_mul(br)?.checked_sub(ai.checked_mul(bi)?)?;
        let im = ar.checked_mul(bi)?.checked_add(ai.checked_mul(br)?)?;
        Some((sr.checked_add(re)?, si.checked_add(im)?))
    });
    match exact {
        Some((re, im)) => {
            if re == 0 && im == 0 {
                return Complex64::new(0.0, 0.0);
            }
            let denom = (f1.norm() as f64).sqrt().powi(e1.abs() as i32) * (f2.norm() as f64).sqrt().powi(e2.abs() as i32);
            Complex64::new(re as f64 / denom, im as f64 / denom)
        }
        None => pairs
            .iter()
            .map(|&(z1, z2)| Complex64::from_polar(1.0, e1 as f64 * z1.arg() + e2 as f64 * z2.arg()))
            .sum(),
    }
}

/// S_e by direct summation of `e^{i(2θ1 m1 + 2θ2 m2)}` over ν_H = n.
pub fn s_e_direct(m1: i64, m2: i64, n: u64) -> Result<Complex64> {
    if n < 3 {
        return domain(format!("S_e needs n >= 3 so that the angles are defined, got {n}"));
    }
    let pairs: Vec<(GaussInt, GaussInt)> = enumerate_norm(n)?.iter().map(|g| g.to_gauss_pair()).collect();
    Ok(phase_sum(&pairs, m1 + m2, m1 - m2))
}

/// S_e through the Weyl sums at `n ± 2`.
///
/// At `n = 2` the four stabilizer elements have no angles; they contribute 4
/// to the frequency-zero sum and nothing otherwise.
pub fn s_e_factored(m1: i64, m2: i64, n: u64) -> Complex64 {
    if m1 % 2 != 0 || m2 % 2 != 0 || n < 2 {
        return Complex64::new(0.0, 0.0);
    }
    if n == 2 {
        return Complex64::new(if m1 == 0 && m2 == 0 { 4.0 } else { 0.0 }, 0.0);
    }
    match n % 4 {
        2 => 16.0 * weyl_w(m1 + m2, n + 2) * weyl_w(m1 - m2, n - 2),
        3 => 8.0 * weyl_wp(m1 + m2, n + 2) * weyl_wp(m1 - m2, n - 2),
        _ => Complex64::new(0.0, 0.0),
    }
}

/// `|{γ : ν_H(γ) = n}|` from the factorizations of `n + 2` and `n − 2`.
pub fn count_from_factors(n: u64, plus: &[(u64, u32)], minus: &[(u64, u32)]) -> u64 {
    match (n, n % 4) {
        (2, _) => 4,
        (_, 2) => gaussian::r2_from_factors(plus) * gaussian::r2_from_factors(minus),
        (_, 3) => gaussian::r2_from_factors(plus) * gaussian::r2_from_factors(minus) / 2,
        _ => 0,
    }
}

/// [`s_e_factored`] with the factorizations of `n ± 2` supplied by the caller.
pub fn s_e_from_factors(
    m1: i64,
    m2: i64,
    n: u64,
    plus: &[(u64, u32)],
    minus: &[(u64, u32)],
    table: &GaussSplitTable,
) -> Complex64 {
    if m1 % 2 != 0 || m2 % 2 != 0 || n < 2 {
        return Complex64::new(0.0, 0.0);
    }
    if n == 2 {
        return s_e_factored(m1, m2, 2);
    }
    let wp = |m: i64, f: &[(u64, u32)]| weyl_wp_from_factors(m, f, |p| table.angle(p));
    match n % 4 {
        2 => {
            let (a, b) = (m1 + m2, m1 - m2);
            if a.rem_euclid(4) != 0 || b.rem_euclid(4) != 0 {
                Complex64::new(0.0, 0.0)
            } else {
                16.0 * wp(a, plus) * wp(b, minus)
            }
        }
        3 => 8.0 * wp(m1 + m2, plus) * wp(m1 - m2, minus),
        _ => Complex64::new(0.0, 0.0),
    }
}

/// N_E(x) = #{γ : ν_H(γ) ≤ x}, compared with 6x.
pub fn count_range(x: u64) -> Result<StatReport> {
    count_range_capped(x, DEFAULT_CAP)
}

pub fn count_range_capped(x: u64, cap: u64) -> Result<StatReport> {
    if x < 3 {
        return domain(format!("count_range needs x >= 3, got {x}"));
    }
    check_cap(x, cap)?;
    let fz = ProgressionFactorizer::new(1, 0, x + 2);
    let parts = map_blocks(1, x, |s, e| {
        let block = fz.block(s.saturating_sub(2), e + 2);
        let mut r = StatReport::new(Mode::Elliptic, s, e - 1, 6.0, Scale::Linear, Measure::Count);
        for n in s.max(2)..e {
            let c = count_from_factors(n, block.at(n + 2), block.at(n - 2));
            r.add(c, 0.0, Complex64::new(c as f64, 0.0));
        }
        r
    });
    merge_all(parts)
}

pub(crate) fn merge_all(parts: Vec<StatReport>) -> Result<StatReport> {
    let mut it = parts.into_iter();
    let mut acc = it.next().ok_or_else(|| Error::Invariant("empty range".into()))?;
    for p in it {
        acc = acc.merge(&p)?;
    }
    acc.finalize();
    Ok(acc)
}

/// Σ_{p ≤ x prime} S_e(m1, m2, p − shift). With `shift = 2` this is the π_{E′}
/// family compared with K·li(x); with `shift = 0` the π_E family, compared
/// with x / log x.
pub fn prime_weyl_a(m1: i64, m2: i64, shift: u64, x: u64) -> Result<StatReport> {
    prime_weyl_a_capped(m1, m2, shift, x, DEFAULT_CAP)
}

pub fn prime_weyl_a_capped(m1: i64, m2: i64, shift: u64, x: u64, cap: u64) -> Result<StatReport> {
    if shift != 0 && shift != 2 {
        return domain(format!("shift must be 0 or 2, got {shift}"));
    }
    if x < 3 {
        return domain(format!("prime_weyl_a needs x >= 3, got {x}"));
    }
    check_cap(x, cap)?;
    let table = crate::analytics::cache::gauss_split_from_env(x + 2)?;
    let (mode, constant, scale) = if shift == 2 {
        (Mode::EllipticShifted, default_constants().k_elliptic_shifted, Scale::Li)
    } else {
        (Mode::Elliptic, 1.0, Scale::XOverLogX)
    };
    let fz = ProgressionFactorizer::new(1, 0, x + 2);
    let parts = map_blocks(1, x, |s, e| {
        let block = fz.block(s.saturating_sub(shift + 2), e + 2);
        let mut r = StatReport::new(mode, s, e - 1, constant, scale, Measure::Count);
        for p in s..e {
            if p < shift + 2 || !is_prime_factors(block.at(p)) {
                continue;
            }
            let n = p - shift;
            let (plus, minus) = (block.at(n + 2), block.at(n - 2));
            let c = count_from_factors(n, plus, minus);
            r.add(c, 0.0, s_e_from_factors(m1, m2, n, plus, minus, &table));
        }
        r
    });
    Ok(merge_all(parts)?
        .with_meta("m1", m1)
        .with_meta("m2", m2)
        .with_meta("shift", shift))
}

/// Torus points `(θ1/π, θ2/π)` for every γ with ν_H = n (n ≥ 3), in the
/// order of the factorization-built Gaussian pairs.
pub fn angle_points_from_factors(
    n: u64,
    plus: &[(u64, u32)],
    minus: &[(u64, u32)],
    table: &GaussSplitTable,
    out: &mut Vec<(f64, f64)>,
) {
    for (a1, a2) in arg_pairs_from_factors(n, plus, minus, table) {
        out.push((((a1 + a2) / TAU).rem_euclid(1.0), ((a1 - a2) / TAU).rem_euclid(1.0)));
    }
}

/// `(arg z1, arg z2)` for every Gaussian pair attached to ν_H = n.
pub fn arg_pairs_from_factors(
    n: u64,
    plus: &[(u64, u32)],
    minus: &[(u64, u32)],
    table: &GaussSplitTable,
) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    if n < 3 {
        return out;
    }
    match n % 4 {
        2 => {
            let r1: Vec<f64> = reps_from_factors(plus, |p| table.pi(p)).iter().map(|z| z.arg()).collect();
            let r2: Vec<f64> = reps_from_factors(minus, |p| table.pi(p)).iter().map(|z| z.arg()).collect();
            for &a1 in &r1 {
                for &a2 in &r2 {
                    out.push((a1, a2));
                }
            }
        }
        3 => {
            let p1 = gaussian::primary_reps_from_factors(plus, |p| table.pi(p));
            let p2 = gaussian::primary_reps_from_factors(minus, |p| table.pi(p));
            for &w1 in &p1 {
                for &w2 in &p2 {
                    let (a1, a2) = (w1.arg(), w2.arg());
                    // The eight translates are (u·w1, ±u·w2) for the four units u.
                    for j in 0..4 {
                        let t = j as f64 * PI / 2.0;
                        out.push((a1 + t, a2 + t));
                        out.push((a1 + t, a2 + t + PI));
                    }
                }
            }
        }
        _ => {}
    }
    out
}
