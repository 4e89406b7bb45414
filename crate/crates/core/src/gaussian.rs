//! Arithmetic in the Gaussian integers.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{domain, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct GaussInt {
    pub re: i64,
    pub im: i64,
}

pub const UNITS: [GaussInt; 4] = [
    GaussInt::new(1, 0),
    GaussInt::new(0, 1),
    GaussInt::new(-1, 0),
    GaussInt::new(0, -1),
];

impl GaussInt {
    pub const ZERO: GaussInt = GaussInt::new(0, 0);
    pub const ONE: GaussInt = GaussInt::new(1, 0);
    pub const I: GaussInt = GaussInt::new(0, 1);
    pub const ONE_PLUS_I: GaussInt = GaussInt::new(1, 1);

    pub const fn new(re: i64, im: i64) -> Self {
        GaussInt { re, im }
    }

    pub fn conj(self) -> Self {
        GaussInt::new(self.re, -self.im)
    }

    pub fn norm(self) -> u128 {
        let (a, b) = (self.re as i128, self.im as i128);
        (a * a + b * b) as u128
    }

    pub fn is_zero(self) -> bool {
        self.re == 0 && self.im == 0
    }

    pub fn checked_mul(self, o: Self) -> Option<Self> {
        let (a, b, c, d) = (self.re as i128, self.im as i128, o.re as i128, o.im as i128);
        let re = i64::try_from(a * c - b * d).ok()?;
        let im = i64::try_from(a * d + b * c).ok()?;
        Some(GaussInt::new(re, im))
    }

    pub fn pow(self, mut e: u32) -> Self {
        let mut base = self;
        let mut acc = GaussInt::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            e >>= 1;
            if e > 0 {
                base = base * base;
            }
        }
        acc
    }

    /// `self / d` when the quotient lies in the Gaussian integers.
    pub fn div_exact(self, d: Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        let n = d.norm() as i128;
        let (a, b, c, e) = (self.re as i128, self.im as i128, d.re as i128, d.im as i128);
        // self * conj(d)
        let re = a * c + b * e;
        let im = b * c - a * e;
        if re % n != 0 || im % n != 0 {
            return None;
        }
        Some(GaussInt::new(
            i64::try_from(re / n).ok()?,
            i64::try_from(im / n).ok()?,
        ))
    }

    pub fn divides(self, z: Self) -> bool {
        z.div_exact(self).is_some()
    }

    pub fn arg(self) -> f64 {
        (self.im as f64).atan2(self.re as f64)
    }

    /// `z / |z|` as a complex double.
    pub fn unit_complex(self) -> Complex64 {
        let r = (self.re as f64).hypot(self.im as f64);
        Complex64::new(self.re as f64 / r, self.im as f64 / r)
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re as f64, self.im as f64)
    }

    /// True iff `self ≡ 1 mod (1+i)^3`.
    pub fn is_primary(self) -> bool {
        // (1+i)^3 = -2+2i generates the ideal of a+bi with b even and a+b ≡ 0 mod 4.
        self.im.rem_euclid(2) == 0 && (self.re - 1 + self.im).rem_euclid(4) == 0
    }
}

impl fmt::Display for GaussInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im < 0 {
            write!(f, "{}-{}i", self.re, -self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl Add for GaussInt {
    type Output = GaussInt;
    fn add(self, o: Self) -> Self {
        GaussInt::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for GaussInt {
    type Output = GaussInt;
    fn sub(self, o: Self) -> Self {
        GaussInt::new(self.re - o.re, self.im - o.im)
    }
}

impl Neg for GaussInt {
    type Output = GaussInt;
    fn neg(self) -> Self {
        GaussInt::new(-self.re, -self.im)
    }
}

impl Mul for GaussInt {
    type Output = GaussInt;
    fn mul(self, o: Self) -> Self {
        self.checked_mul(o).expect("Gaussian integer product overflows i64")
    }
}

/// The unique unit `u` with `u·z` primary, together with `u·z`.
pub fn primary_associate(z: GaussInt) -> Result<(GaussInt, GaussInt)> {
    if z.is_zero() || z.norm().is_multiple_of(2) {
        return domain(format!("{z} has even norm, so no associate is primary"));
    }
    for u in UNITS {
        let w = u * z;
        if w.is_primary() {
            return Ok((u, w));
        }
    }
    unreachable!("odd-norm element without primary associate")
}

/// All Gaussian integers of norm `n`, sorted.
pub fn reps_with_norm(n: u64) -> Vec<GaussInt> {
    if n == 0 {
        return vec![GaussInt::ZERO];
    }
    let mut out = Vec::new();
    let s = arith::isqrt(n);
    for a in 0..=s {
        if let Some(b) = arith::is_square(n - a * a) {
            let (a, b) = (a as i64, b as i64);
            for sa in [1, -1] {
                for sb in [1, -1] {
                    if (a == 0 && sa < 0) || (b == 0 && sb < 0) {
                        continue;
                    }
                    out.push(GaussInt::new(sa * a, sb * b));
                }
            }
        }
    }
    out.sort();
    out
}

/// Primary Gaussian integers of odd norm `n`, sorted.
pub fn primary_reps_with_norm(n: u64) -> Result<Vec<GaussInt>> {
    if n.is_multiple_of(2) {
        return domain(format!("primary representatives need odd norm, got {n}"));
    }
    Ok(reps_with_norm(n).into_iter().filter(|z| z.is_primary()).collect())
}

/// The primary irreducible of norm `p` (for `p ≡ 1 mod 4` prime) with positive
/// imaginary part, found by the Euclidean descent on a square root of −1.
pub fn split_prime(p: u64) -> Result<GaussInt> {
    if p % 4 != 1 || !arith::is_prime(p) {
        return domain(format!("{p} is not a prime congruent to 1 mod 4"));
    }
    let c = (2..p)
        .find(|&c| arith::powmod(c, (p - 1) / 2, p) == p - 1)
        .expect("a quadratic nonresidue exists below p");
    let root = arith::powmod(c, (p - 1) / 4, p);
    let (mut r0, mut r1) = (p, root);
    while (r1 as u128) * (r1 as u128) > p as u128 {
        (r0, r1) = (r1, r0 % r1);
    }
    let a = r1;
    let b = arith::is_square(p - a * a).expect("descent yields a sum of two squares");
    let z = GaussInt::new(a as i64, b as i64);
    let (_, w) = primary_associate(z)?;
    Ok(if w.im > 0 { w } else { w.conj() })
}

/// θ_p ∈ (0, π) for the primary irreducible π_p with positive angle.
pub fn prime_angle(p: u64) -> Result<f64> {
    Ok(split_prime(p)?.arg())
}

/// `unit · (1+i)^two_exponent · ∏ w^e` with every `w` primary irreducible.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaussFactorization {
    pub unit: GaussInt,
    pub two_exponent: u32,
    pub odd_part: Vec<(GaussInt, u32)>,
}

impl GaussFactorization {
    pub fn product(&self) -> GaussInt {
        let mut acc = self.unit * GaussInt::ONE_PLUS_I.pow(self.two_exponent);
        for &(w, e) in &self.odd_part {
            acc = acc * w.pow(e);
        }
        acc
    }
}

pub fn factor(z: GaussInt) -> Result<GaussFactorization> {
    if z.is_zero() {
        return domain("cannot factor zero");
    }
    let n = u64::try_from(z.norm())
        .or_else(|_| domain(format!("norm of {z} exceeds 64 bits")))?;
    let mut rest = z;
    let mut two_exponent = 0;
    let mut odd_part = Vec::new();
    for (p, e) in arith::factor(n) {
        if p == 2 {
            for _ in 0..e {
                rest = rest.div_exact(GaussInt::ONE_PLUS_I).expect("norm bookkeeping");
            }
            two_exponent = e;
        } else if p % 4 == 3 {
            let w = GaussInt::new(-(p as i64), 0);
            for _ in 0..e / 2 {
                rest = rest.div_exact(w).expect("norm bookkeeping");
            }
            odd_part.push((w, e / 2));
        } else {
            let pi = split_prime(p)?;
            for w in [pi, pi.conj()] {
                let mut k = 0;
                while let Some(q) = rest.div_exact(w) {
                    rest = q;
                    k += 1;
                }
                if k > 0 {
                    odd_part.push((w, k));
                }
            }
        }
    }
    debug_assert_eq!(rest.norm(), 1);
    Ok(GaussFactorization { unit: rest, two_exponent, odd_part })
}

/// r(n), the number of representations as an ordered sum of two squares,
/// from the rational factorization of `n ≥ 1`.
pub fn r2_from_factors(factors: &[(u64, u32)]) -> u64 {
    let mut r = 4;
    for &(p, e) in factors {
        match p % 4 {
            1 => r *= e as u64 + 1,
            3 if e % 2 == 1 => return 0,
            _ => {}
        }
    }
    r
}

pub fn r2(n: u64) -> u64 {
    if n == 0 {
        1
    } else {
        r2_from_factors(&arith::factor(n))
    }
}

/// e^{iπk/4}, exact for even k.
pub(crate) fn eighth_root(k: i64) -> Complex64 {
    match k.rem_euclid(8) {
        0 => Complex64::new(1.0, 0.0),
        2 => Complex64::new(0.0, 1.0),
        4 => Complex64::new(-1.0, 0.0),
        6 => Complex64::new(0.0, -1.0),
        k => Complex64::from_polar(1.0, PI * k as f64 / 4.0),
    }
}

/// W^P_m at `n` from its rational factorization; `angle(p)` supplies θ_p for
/// primes `p ≡ 1 mod 4`.
pub fn weyl_wp_from_factors(m: i64, factors: &[(u64, u32)], mut angle: impl FnMut(u64) -> f64) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    let mut real = 1.0;
    for &(p, l) in factors {
        if p == 2 {
            acc = eighth_root(l as i64 * m);
        } else if p % 4 == 3 {
            if l % 2 == 1 {
                return Complex64::new(0.0, 0.0);
            }
            if (m * (l as i64 / 2)).rem_euclid(2) == 1 {
                real = -real;
            }
        } else if m == 0 {
            real *= (l + 1) as f64;
        } else {
            let t = m as f64 * angle(p);
            let l = l as i64;
            let s: f64 = (0..=l).map(|j| ((2 * j - l) as f64 * t).cos()).sum();
            real *= s;
        }
    }
    acc * real
}

pub fn weyl_wp(m: i64, n: u64) -> Complex64 {
    assert!(n >= 1, "W^P is defined for positive n");
    weyl_wp_from_factors(m, &arith::factor(n), |p| prime_angle(p).expect("split prime"))
}

/// W_m(n): equal to W^P_m(n) when 4 | m, else zero.
pub fn weyl_w(m: i64, n: u64) -> Complex64 {
    if m.rem_euclid(4) == 0 {
        weyl_wp(m, n)
    } else {
        Complex64::new(0.0, 0.0)
    }
}

/// All primary elements of odd norm `n` built from its factorization.
pub fn primary_reps_from_factors(
    factors: &[(u64, u32)],
    mut split: impl FnMut(u64) -> GaussInt,
) -> Vec<GaussInt> {
    let mut out = vec![GaussInt::ONE];
    for &(p, e) in factors {
        assert!(p != 2, "primary representatives need odd norm");
        if p % 4 == 3 {
            if e % 2 == 1 {
                return Vec::new();
            }
            let w = GaussInt::new(-(p as i64), 0).pow(e / 2);
            out.iter_mut().for_each(|z| *z = *z * w);
        } else {
            let pi = split(p);
            let pc = pi.conj();
            let choices: Vec<GaussInt> = (0..=e).map(|j| pi.pow(j) * pc.pow(e - j)).collect();
            out = out
                .iter()
                .flat_map(|&z| choices.iter().map(move |&c| z * c))
                .collect();
        }
    }
    out
}

/// Every Gaussian integer whose norm has the given factorization.
pub fn reps_from_factors(factors: &[(u64, u32)], split: impl FnMut(u64) -> GaussInt) -> Vec<GaussInt> {
    let (two, odd) = match factors.first() {
        Some(&(2, k)) => (k, &factors[1..]),
        _ => (0, factors),
    };
    let base = GaussInt::ONE_PLUS_I.pow(two);
    let primary = primary_reps_from_factors(odd, split);
    let mut out: Vec<GaussInt> = primary
        .iter()
        .flat_map(|&w| UNITS.iter().map(move |&u| u * base * w))
        .collect();
    out.sort();
    out
}

/// Prime-splitting table for all `p ≡ 1 mod 4` up to a limit; built once, then
/// shared read-only.
#[derive(Clone, Debug, Default)]
pub struct GaussSplitTable {
    primes: Vec<u64>,
    pis: Vec<GaussInt>,
    angles: Vec<f64>,
}

impl GaussSplitTable {
    pub fn new(limit: u64) -> Self {
        let primes: Vec<u64> = crate::analytics::sieve::primes_up_to(limit)
            .into_iter()
            .filter(|p| p % 4 == 1)
            .collect();
        let pis: Vec<GaussInt> = primes.iter().map(|&p| split_prime(p).expect("p ≡ 1 mod 4")).collect();
        Self::from_parts(primes, pis)
    }

    pub fn from_parts(primes: Vec<u64>, pis: Vec<GaussInt>) -> Self {
        let angles = pis.iter().map(|z| z.arg()).collect();
        GaussSplitTable { primes, pis, angles }
    }

    pub fn limit(&self) -> u64 {
        self.primes.last().copied().unwrap_or(0)
    }

    pub fn entries(&self) -> impl Iterator<Item = (u64, GaussInt)> + '_ {
        self.primes.iter().copied().zip(self.pis.iter().copied())
    }

    fn index(&self, p: u64) -> Option<usize> {
        self.primes.binary_search(&p).ok()
    }

    /// Primary irreducible over `p`, falling back to a direct split for
    /// primes outside the table.
    pub fn pi(&self, p: u64) -> GaussInt {
        match self.index(p) {
            Some(i) => self.pis[i],
            None => split_prime(p).expect("p ≡ 1 mod 4 prime"),
        }
    }

    pub fn angle(&self, p: u64) -> f64 {
        match self.index(p) {
            Some(i) => self.angles[i],
            None => prime_angle(p).expect("p ≡ 1 mod 4 prime"),
        }
    }
}
