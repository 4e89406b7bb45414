//! Arithmetic in ℤ[√2]: norms, total positivity, classes modulo ε², ideal
//! counts and the angular character λ.

use std::f64::consts::{PI, SQRT_2, TAU};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{domain, Result};

/// `x + y√2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct QuadInt {
    pub x: i64,
    pub y: i64,
}

/// The fundamental unit 1+√2.
pub const EPS: QuadInt = QuadInt::new(1, 1);
/// ε² = 3+2√2.
pub const EPS2: QuadInt = QuadInt::new(3, 2);
/// ε⁻² = 3−2√2.
pub const EPS2_INV: QuadInt = QuadInt::new(3, -2);

pub fn log_eps() -> f64 {
    (1.0 + SQRT_2).ln()
}

impl QuadInt {
    pub const ZERO: QuadInt = QuadInt::new(0, 0);
    pub const ONE: QuadInt = QuadInt::new(1, 0);

    pub const fn new(x: i64, y: i64) -> Self {
        QuadInt { x, y }
    }

    pub fn sigma(self) -> Self {
        QuadInt::new(self.x, -self.y)
    }

    pub fn norm(self) -> i128 {
        let (x, y) = (self.x as i128, self.y as i128);
        x * x - 2 * y * y
    }

    pub fn is_zero(self) -> bool {
        self.x == 0 && self.y == 0
    }

    pub fn checked_mul(self, o: Self) -> Option<Self> {
        let (a, b, c, d) = (self.x as i128, self.y as i128, o.x as i128, o.y as i128);
        Some(QuadInt::new(
            i64::try_from(a * c + 2 * b * d).ok()?,
            i64::try_from(a * d + b * c).ok()?,
        ))
    }

    pub fn pow(self, mut e: u32) -> Self {
        let mut base = self;
        let mut acc = QuadInt::ONE;
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

    /// Multiplies by ε^{2k} for any integer `k`.
    pub fn mul_eps2_pow(self, k: i64) -> Self {
        let u = if k >= 0 { EPS2 } else { EPS2_INV };
        let mut z = self;
        for _ in 0..k.unsigned_abs() {
            z = z * u;
        }
        z
    }

    /// Both real embeddings strictly positive (exact).
    pub fn is_totally_positive(self) -> bool {
        // z + σz = 2x and z·σz = N(z).
        self.x > 0 && self.norm() > 0
    }

    /// The real embedding `x + y√2`, evaluated without cancellation.
    pub fn to_f64(self) -> f64 {
        embed(self.x, self.y, self.norm())
    }

    /// The conjugate embedding `x − y√2`, evaluated without cancellation.
    pub fn sigma_f64(self) -> f64 {
        embed(self.x, -self.y, self.norm())
    }

    /// `log|z/σz|`, accurate even when one embedding is tiny.
    pub fn log_ratio(self) -> Result<f64> {
        let n = self.norm();
        if n == 0 {
            return domain(format!("{self} has a zero embedding"));
        }
        let ln_n = (n.unsigned_abs() as f64).ln();
        Ok(if (self.x >= 0) == (self.y >= 0) || self.y == 0 || self.x == 0 {
            2.0 * self.to_f64().abs().ln() - ln_n
        } else {
            ln_n - 2.0 * self.sigma_f64().abs().ln()
        })
    }
}

fn embed(x: i64, y: i64, n: i128) -> f64 {
    if (x >= 0) == (y >= 0) || x == 0 || y == 0 {
        x as f64 + y as f64 * SQRT_2
    } else {
        // x + y√2 = N / (x − y√2) and the denominator has no cancellation.
        n as f64 / (x as f64 - y as f64 * SQRT_2)
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.y < 0 {
            write!(f, "{}-{}√2", self.x, -self.y)
        } else {
            write!(f, "{}+{}√2", self.x, self.y)
        }
    }
}

impl Add for QuadInt {
    type Output = QuadInt;
    fn add(self, o: Self) -> Self {
        QuadInt::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for QuadInt {
    type Output = QuadInt;
    fn sub(self, o: Self) -> Self {
        QuadInt::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for QuadInt {
    type Output = QuadInt;
    fn neg(self) -> Self {
        QuadInt::new(-self.x, -self.y)
    }
}

impl Mul for QuadInt {
    type Output = QuadInt;
    fn mul(self, o: Self) -> Self {
        self.checked_mul(o).expect("ℤ[√2] product overflows i64")
    }
}

/// Canonical representative of a class of totally positive elements modulo ε².
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ClassRep {
    pub rep: QuadInt,
    pub n: u64,
}

/// Window test `√n ≤ z < ε²√n`, i.e. `y ≥ 0` and `2x > 3y`.
fn in_window(z: QuadInt) -> bool {
    z.y >= 0 && 2 * z.x as i128 > 3 * z.y as i128
}

/// The unique `ε^{2m}`-multiple of `z` in the window `[√n, ε²√n)`.
pub fn reduce_class(z: QuadInt) -> Result<ClassRep> {
    if !z.is_totally_positive() {
        return domain(format!("{z} is not totally positive"));
    }
    let n = u64::try_from(z.norm()).or_else(|_| domain(format!("norm of {z} exceeds 64 bits")))?;
    let mut w = z;
    while w.y < 0 {
        w = w * EPS2;
    }
    while 2 * w.x as i128 <= 3 * w.y as i128 {
        w = w * EPS2_INV;
    }
    debug_assert!(in_window(w));
    Ok(ClassRep { rep: w, n })
}

/// All classes of totally positive elements of norm `n`, by scanning the window.
pub fn d_k(n: u64) -> Vec<ClassRep> {
    let mut out = Vec::new();
    let mut y: u64 = 0;
    // In the window 9y² < 4x² = 4(n + 2y²), so y² < 4n.
    while (y as u128) * (y as u128) < 4 * n as u128 {
        if let Some(x) = arith::is_square(n + 2 * y * y) {
            if 2 * x > 3 * y {
                out.push(ClassRep { rep: QuadInt::new(x as i64, y as i64), n });
            }
        }
        y += 1;
    }
    out
}

/// The primitive even character modulo 8.
pub fn chi8(n: i64) -> i8 {
    match n.rem_euclid(8) {
        1 | 7 => 1,
        3 | 5 => -1,
        _ => 0,
    }
}

/// Number of ideals of norm `n`, `Σ_{d|n} χ8(d)`, from the factorization of `n`.
pub fn n2_from_factors(factors: &[(u64, u32)]) -> u64 {
    let mut acc = 1;
    for &(p, e) in factors {
        match p % 8 {
            2 => {}
            1 | 7 => acc *= e as u64 + 1,
            _ if e % 2 == 1 => return 0,
            _ => {}
        }
    }
    acc
}

pub fn n2(n: u64) -> u64 {
    assert!(n >= 1, "ideal counts are defined for n >= 1");
    n2_from_factors(&arith::factor(n))
}

/// λ(z) = e^{i·angle} with angle `(π/(4 log ε))·log|z/σz|` reduced into `[0, 2π)`.
pub fn lambda_angle(z: QuadInt) -> Result<f64> {
    Ok(lambda_angle_unreduced(z)?.rem_euclid(TAU))
}

pub fn lambda_angle_unreduced(z: QuadInt) -> Result<f64> {
    Ok(PI / (4.0 * log_eps()) * z.log_ratio()?)
}

/// A totally positive generator, in canonical window form, of a prime ideal of
/// norm `p` for `p ≡ ±1 mod 8`, via a Euclidean gcd of `p` and `r − √2` where
/// `r² ≡ 2 mod p`.
pub fn split_prime(p: u64) -> Result<ClassRep> {
    if !matches!(p % 8, 1 | 7) || !arith::is_prime(p) {
        return domain(format!("{p} is not a prime congruent to ±1 mod 8"));
    }
    let r = arith::sqrt_mod_prime(2, p).expect("2 is a square mod p ≡ ±1 mod 8");
    let mut a = QuadInt::new(p as i64, 0);
    let mut b = QuadInt::new(r as i64, -1);
    while !b.is_zero() {
        let q = div_round(a, b);
        (a, b) = (b, a - q * b);
    }
    if a.norm() < 0 {
        a = a * EPS;
    }
    if a.x < 0 {
        a = -a;
    }
    debug_assert_eq!(a.norm(), p as i128);
    reduce_class(a)
}

/// Nearest-lattice-point quotient `a / b` in ℤ[√2].
fn div_round(a: QuadInt, b: QuadInt) -> QuadInt {
    let n = b.norm();
    let s = b.sigma();
    let (ax, ay, sx, sy) = (a.x as i128, a.y as i128, s.x as i128, s.y as i128);
    let nx = ax * sx + 2 * ay * sy;
    let ny = ax * sy + ay * sx;
    QuadInt::new(round_div(nx, n) as i64, round_div(ny, n) as i64)
}

fn round_div(num: i128, den: i128) -> i128 {
    let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
    (2 * num + den).div_euclid(2 * den)
}

/// Split-prime table for `p ≡ ±1 mod 8`; built once then shared read-only.
#[derive(Clone, Debug, Default)]
pub struct QuadSplitTable {
    primes: Vec<u64>,
    reps: Vec<QuadInt>,
    angles: Vec<f64>,
}

impl QuadSplitTable {
    pub fn new(limit: u64) -> Self {
        let primes: Vec<u64> = crate::analytics::sieve::primes_up_to(limit)
            .into_iter()
            .filter(|p| matches!(p % 8, 1 | 7))
            .collect();
        let reps: Vec<QuadInt> = primes.iter().map(|&p| split_prime(p).expect("split prime").rep).collect();
        let angles = reps.iter().map(|&z| lambda_angle_unreduced(z).expect("nonzero")).collect();
        QuadSplitTable { primes, reps, angles }
    }

    pub fn rep(&self, p: u64) -> QuadInt {
        match self.primes.binary_search(&p) {
            Ok(i) => self.reps[i],
            Err(_) => split_prime(p).expect("p ≡ ±1 mod 8 prime").rep,
        }
    }

    /// λ-angle of the table's generator over `p`.
    pub fn angle(&self, p: u64) -> f64 {
        match self.primes.binary_search(&p) {
            Ok(i) => self.angles[i],
            Err(_) => lambda_angle_unreduced(self.rep(p)).expect("nonzero"),
        }
    }
}

/// U_k from the factorization of `n`; `angle(p)` gives the λ-angle of a
/// generator over each split prime.
pub fn u_k_from_factors(k: i64, factors: &[(u64, u32)], mut angle: impl FnMut(u64) -> f64) -> Result<f64> {
    if k % 2 != 0 {
        return domain(format!("U_k needs even k, got {k}"));
    }
    let mut acc = 1.0;
    for &(p, a) in factors {
        match p % 8 {
            // The single class above 2 is 2+√2 = ε√2 with λ-angle π/2.
            2 => {
                if ((k / 2) * a as i64).rem_euclid(2) == 1 {
                    acc = -acc;
                }
            }
            1 | 7 => {
                if k == 0 {
                    acc *= (a + 1) as f64;
                } else {
                    let t = k as f64 * angle(p);
                    let a = a as i64;
                    acc *= (0..=a).map(|j| ((2 * j - a) as f64 * t).cos()).sum::<f64>();
                }
            }
            _ => {
                if a % 2 == 1 {
                    return Ok(0.0);
                }
            }
        }
    }
    Ok(acc)
}

/// `U_k(n) = Σ_{z ∈ D_K(n)} λ(z)^k` for even `k`; real by Galois symmetry.
pub fn u_k(k: i64, n: u64) -> Result<Complex64> {
    if n == 0 {
        return domain("U_k is defined for n >= 1");
    }
    let v = u_k_from_factors(k, &arith::factor(n), |p| {
        lambda_angle_unreduced(split_prime(p).expect("split prime").rep).expect("nonzero")
    })?;
    Ok(Complex64::new(v, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn direct_u(k: i64, n: u64) -> Complex64 {
        d_k(n)
            .into_iter()
            .map(|c| Complex64::from_polar(1.0, k as f64 * lambda_angle(c.rep).unwrap()))
            .sum()
    }

    #[test]
    fn norm_examples() {
        assert_eq!(EPS.norm(), -1);
        assert_eq!(QuadInt::new(3, 1).norm(), 7);
        assert_eq!(EPS2.norm(), 1);
        assert_eq!(EPS * EPS, EPS2);
        assert_eq!(EPS2 * EPS2_INV, QuadInt::ONE);
    }

    #[test]
    fn total_positivity() {
        assert!(EPS2.is_totally_positive());
        assert!(!EPS.is_totally_positive());
        assert!(!QuadInt::new(-1, 0).is_totally_positive());
        for x in -40i64..=40 {
            for y in -40i64..=40 {
                let z = QuadInt::new(x, y);
                let float = x as f64 + y as f64 * SQRT_2 > 0.0 && x as f64 - y as f64 * SQRT_2 > 0.0;
                assert_eq!(z.is_totally_positive(), float, "{z}");
            }
        }
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(reduce_class(EPS2).unwrap().rep, QuadInt::ONE);
        let z = QuadInt::new(3, 1);
        assert_eq!(reduce_class(z).unwrap(), ClassRep { rep: z, n: 7 });
        assert_eq!(reduce_class(EPS2 * EPS2 * z).unwrap().rep, z);
        assert_eq!(reduce_class(z.mul_eps2_pow(-5)).unwrap().rep, z);
        assert!(reduce_class(EPS).is_err());
        assert!(reduce_class(QuadInt::new(-3, 0)).is_err());
    }

    #[test]
    fn window_matches_float_interval() {
        for n in 1..300u64 {
            for c in d_k(n) {
                let v = c.rep.to_f64();
                let s = (n as f64).sqrt();
                assert!(v >= s * (1.0 - 1e-12) && v < EPS2.to_f64() * s * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn class_examples() {
        assert_eq!(d_k(1), vec![ClassRep { rep: QuadInt::ONE, n: 1 }]);
        let seven: Vec<QuadInt> = d_k(7).into_iter().map(|c| c.rep).collect();
        assert_eq!(seven.len(), 2);
        assert!(seven.contains(&QuadInt::new(3, 1)));
        assert!(seven.contains(&reduce_class(QuadInt::new(3, -1)).unwrap().rep));
        assert!(d_k(5).is_empty());
        assert_eq!(d_k(2), vec![ClassRep { rep: QuadInt::new(2, 1), n: 2 }]);
    }

    #[test]
    fn chi8_and_n2_examples() {
        assert_eq!((chi8(7), chi8(3), chi8(10), chi8(-1)), (1, -1, 0, 1));
        assert_eq!(n2(7), 2);
        assert_eq!(n2(2), 1);
        assert_eq!(n2(36), 1);
        assert_eq!(n2(11), 0);
    }

    #[test]
    fn class_count_equals_divisor_sum() {
        for n in 1..=10_000u64 {
            let divisor_sum: i64 = (1..=n).filter(|d| n % d == 0).map(|d| chi8(d as i64) as i64).sum();
            assert_eq!(d_k(n).len() as i64, divisor_sum, "n = {n}");
            assert_eq!(n2(n) as i64, divisor_sum);
        }
    }

    #[test]
    fn generators_exist() {
        for n in 1..=1000u64 {
            if n2(n) > 0 {
                assert!(!d_k(n).is_empty());
            }
        }
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(lambda_angle(QuadInt::ONE).unwrap(), 0.0);
        assert!((lambda_angle(EPS2).unwrap() - PI).abs() < 1e-12);
        let z = QuadInt::new(3, 1);
        let expected = PI / (4.0 * log_eps()) * ((3.0 + SQRT_2) / (3.0 - SQRT_2)).ln();
        assert!((lambda_angle(z).unwrap() - expected).abs() < 1e-12);
        assert!((lambda_angle(QuadInt::new(2, 1)).unwrap() - PI / 2.0).abs() < 1e-12);
        assert!(lambda_angle(QuadInt::ZERO).is_err());
    }

    #[test]
    fn split_primes() {
        for p in crate::analytics::sieve::primes_up_to(20_000) {
            if matches!(p % 8, 1 | 7) {
                let c = split_prime(p).unwrap();
                assert_eq!(c.rep.norm(), p as i128);
                assert!(c.rep.is_totally_positive() && in_window(c.rep));
            } else {
                assert!(split_prime(p).is_err());
            }
        }
    }

    #[test]
    fn u_k_examples() {
        for k in [-8i64, -4, 0, 4, 8] {
            assert!((u_k(k, 2).unwrap().re - 1.0).abs() < 1e-12);
        }
        for k in [-6i64, -2, 2, 6] {
            assert!((u_k(k, 2).unwrap().re + 1.0).abs() < 1e-12);
        }
        for k in (-8..=8).step_by(2) {
            assert_eq!(u_k(k, 3).unwrap().re, 0.0);
        }
        for n in 1..500u64 {
            assert_eq!(u_k(0, n).unwrap().re, n2(n) as f64);
        }
        assert!(u_k(1, 7).is_err());
    }

    #[test]
    fn u_k_matches_direct_sum() {
        for n in 1..=3000u64 {
            for k in (-8..=8).step_by(2) {
                let fast = u_k(k, n).unwrap();
                let direct = direct_u(k, n);
                assert!((fast - direct).norm() < 1e-9, "k={k} n={n}");
                assert!(direct.im.abs() < 1e-9);
            }
        }
    }

    proptest! {
        #[test]
        fn u_k_multiplicative(n1 in 1u64..10_000, n2_ in 1u64..10_000, h in -4i64..=4) {
            prop_assume!(arith::gcd(n1, n2_) == 1);
            let k = 2 * h;
            let lhs = u_k(k, n1 * n2_).unwrap().re;
            let rhs = u_k(k, n1).unwrap().re * u_k(k, n2_).unwrap().re;
            prop_assert!((lhs - rhs).abs() < 1e-9);
        }

        #[test]
        fn u_k_trivial_bound(n in 1u64..10_000, h in -4i64..=4) {
            prop_assert!(u_k(2 * h, n).unwrap().norm() <= n2(n) as f64 + 1e-9);
        }

        #[test]
        fn lambda_sign_flip(x in 1i64..100_000, y in -100_000i64..100_000, k in -3i64..=3) {
            let z = QuadInt::new(x, y);
            prop_assume!(z.is_totally_positive());
            let z = z.mul_eps2_pow(k);
            let a = lambda_angle(z).unwrap();
            let b = lambda_angle(z * EPS2).unwrap();
            let diff = (b - a).rem_euclid(TAU);
            prop_assert!((diff - PI).abs() < 1e-9);
        }

        #[test]
        fn sigma_involution(x in -1_000_000i64..1_000_000, y in -1_000_000i64..1_000_000) {
            let z = QuadInt::new(x, y);
            prop_assert_eq!(z.sigma().sigma(), z);
            prop_assert_eq!(z * z.sigma(), QuadInt::new(z.norm() as i64, 0));
        }
    }
}
