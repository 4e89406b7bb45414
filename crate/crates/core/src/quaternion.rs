//! The group Γ(2,5): elements, the hyperbolic decomposition, the double-coset
//! parametrization by pairs of ℤ[√2] classes and the sums S_h.

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytics::euler::default_constants;
use crate::analytics::report::{Measure, Mode, Scale, StatReport};
use crate::analytics::sieve::{is_prime_factors, von_mangoldt_from_factors, ProgressionFactorizer};
use crate::analytics::{check_cap, map_blocks, DEFAULT_CAP};
use crate::elliptic::merge_all;
use crate::error::{domain, Error, Result};
use crate::quadratic::{self, d_k, log_eps, n2_from_factors, u_k_from_factors, QuadInt, QuadSplitTable, EPS2};

pub type Mat2 = [[f64; 2]; 2];

/// `ω = [[0, −1], [1, 0]]`.
pub const OMEGA: Mat2 = [[0.0, -1.0], [1.0, 0.0]];

/// `[[z1, √5·z2], [√5·σz2, σz1]]` with `z1 = x0 + x1√2`, `z2 = x2 + x3√2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuatMat {
    pub x0: i64,
    pub x1: i64,
    pub x2: i64,
    pub x3: i64,
}

impl QuatMat {
    pub const IDENTITY: QuatMat = QuatMat { x0: 1, x1: 0, x2: 0, x3: 0 };
    /// `h0 = diag(ε², ε⁻²)`, generating the diagonal subgroup H.
    pub const H0: QuatMat = QuatMat { x0: 3, x1: 2, x2: 0, x3: 0 };

    pub fn new(x0: i64, x1: i64, x2: i64, x3: i64) -> Result<Self> {
        let q = QuatMat { x0, x1, x2, x3 };
        let det = q.z1().norm() - 5 * q.z2().norm();
        if det != 1 {
            return domain(format!("({x0}, {x1}, {x2}, {x3}) has determinant {det}"));
        }
        Ok(q)
    }

    pub fn from_pair(z1: QuadInt, z2: QuadInt) -> Result<Self> {
        QuatMat::new(z1.x, z1.y, z2.x, z2.y)
    }

    pub fn z1(&self) -> QuadInt {
        QuadInt::new(self.x0, self.x1)
    }

    pub fn z2(&self) -> QuadInt {
        QuadInt::new(self.x2, self.x3)
    }

    pub fn embed(&self) -> Mat2 {
        let s5 = 5f64.sqrt();
        let (z1, z2) = (self.z1(), self.z2());
        [[z1.to_f64(), s5 * z2.to_f64()], [s5 * z2.sigma_f64(), z1.sigma_f64()]]
    }

    /// Product in the group, `None` on overflow.
    pub fn checked_mul(&self, o: &QuatMat) -> Option<QuatMat> {
        let (z1, z2, w1, w2) = (self.z1(), self.z2(), o.z1(), o.z2());
        let five_z2_sw2 = z2.checked_mul(w2.sigma())?.checked_mul(QuadInt::new(5, 0))?;
        let a = z1.checked_mul(w1)?;
        let b = z1.checked_mul(w2)?;
        let c = z2.checked_mul(w1.sigma())?;
        Some(QuatMat {
            x0: a.x.checked_add(five_z2_sw2.x)?,
            x1: a.y.checked_add(five_z2_sw2.y)?,
            x2: b.x.checked_add(c.x)?,
            x3: b.y.checked_add(c.y)?,
        })
    }

    pub fn inverse(&self) -> QuatMat {
        let (s1, z2) = (self.z1().sigma(), self.z2());
        QuatMat { x0: s1.x, x1: s1.y, x2: -z2.x, x3: -z2.y }
    }

    pub fn neg(&self) -> QuatMat {
        QuatMat { x0: -self.x0, x1: -self.x1, x2: -self.x2, x3: -self.x3 }
    }

    /// `δ = 2|ad + bc| = 2|N(z1) + 5N(z2)|`, exact.
    pub fn delta(&self) -> u128 {
        2 * (self.z1().norm() + 5 * self.z2().norm()).unsigned_abs()
    }

    /// All four embedded entries strictly positive.
    pub fn is_positive(&self) -> bool {
        self.z1().is_totally_positive() && self.z2().is_totally_positive()
    }
}

impl fmt::Display for QuatMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.x0, self.x1, self.x2, self.x3)
    }
}

pub fn embed(q: &QuatMat) -> Mat2 {
    q.embed()
}

pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn diag(p: f64, q: f64) -> Mat2 {
    [[p, 0.0], [0.0, q]]
}

fn omega_pow(k: u8) -> Mat2 {
    if k.is_multiple_of(2) {
        [[1.0, 0.0], [0.0, 1.0]]
    } else {
        OMEGA
    }
}

fn omega_inv_pow(k: u8) -> Mat2 {
    if k.is_multiple_of(2) {
        [[1.0, 0.0], [0.0, 1.0]]
    } else {
        [[0.0, 1.0], [-1.0, 0.0]]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Class {
    /// `abcd = 0`.
    InS,
    /// `abcd ≠ 0` and `|ad| + |bc| = 1`.
    InSNotS,
    Generic,
}

/// Position of `g` relative to the sets where the decomposition degenerates.
pub fn classify(g: &Mat2) -> Class {
    let [[a, b], [c, d]] = *g;
    if a * b * c * d == 0.0 {
        return Class::InS;
    }
    let s = (a * d).abs() + (b * c).abs();
    if (s - 1.0).abs() <= 1e-12 * s.max(1.0) {
        Class::InSNotS
    } else {
        Class::Generic
    }
}

/// `g = sign · diag(√y1, 1/√y1) · ω^δ1 · [[cosh v, sinh v], [sinh v, cosh v]] · ω^δ2 · diag(√y2, 1/√y2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypDecomposition {
    pub y1: f64,
    pub y2: f64,
    pub v: f64,
    pub delta1: u8,
    pub delta2: u8,
    pub sign: i8,
}

pub fn hyperbolic_decompose(g: &Mat2) -> Result<HypDecomposition> {
    if classify(g) != Class::Generic {
        return domain("decomposition undefined: the matrix lies in S or s");
    }
    let [[a, b], [c, d]] = *g;
    let y1 = (a * b / (c * d)).abs().sqrt();
    let y2 = (a * c / (b * d)).abs().sqrt();
    let v = ((a * d).abs().sqrt() + (b * c).abs().sqrt()).ln();
    let core = mat_mul(&mat_mul(&diag(y1.sqrt().recip(), y1.sqrt()), g), &diag(y2.sqrt().recip(), y2.sqrt()));
    for delta1 in 0..2u8 {
        for delta2 in 0..2u8 {
            let m = mat_mul(&mat_mul(&omega_inv_pow(delta1), &core), &omega_inv_pow(delta2));
            let pos = m.iter().flatten().all(|&e| e > 0.0);
            let neg = m.iter().flatten().all(|&e| e < 0.0);
            if pos || neg {
                return Ok(HypDecomposition { y1, y2, v, delta1, delta2, sign: if pos { 1 } else { -1 } });
            }
        }
    }
    Err(Error::Invariant("no sign pattern matches the decomposition table".into()))
}

pub fn recompose(h: &HypDecomposition) -> Mat2 {
    let (ch, sh) = (h.v.cosh(), h.v.sinh());
    let core = [[ch, sh], [sh, ch]];
    let left = mat_mul(&diag(h.y1.sqrt(), h.y1.sqrt().recip()), &omega_pow(h.delta1));
    let right = mat_mul(&omega_pow(h.delta2), &diag(h.y2.sqrt(), h.y2.sqrt().recip()));
    let m = mat_mul(&mat_mul(&left, &core), &right);
    let s = h.sign as f64;
    [[s * m[0][0], s * m[0][1]], [s * m[1][0], s * m[1][1]]]
}

/// `δ(g) = 2|ad + bc|`.
pub fn delta_param(g: &Mat2) -> f64 {
    let [[a, b], [c, d]] = *g;
    2.0 * (a * d + b * c).abs()
}

/// The size `n = N(z2) = bc/5` of an element with all entries positive.
pub fn nu(q: &QuatMat) -> Result<u64> {
    if !q.is_positive() {
        return domain(format!("{q} does not have all entries positive"));
    }
    u64::try_from(q.z2().norm()).or_else(|_| domain(format!("size of {q} exceeds 64 bits")))
}

/// Double-coset representatives with `bc = 5n`: for each pair of classes
/// `(z1, z2)` of norms `5n + 1` and `n`, the elements from `(z1, z2)` and `(z1ε², z2)`.
pub fn enumerate_cosets(n: u64) -> Result<Vec<QuatMat>> {
    if n == 0 {
        return domain("enumerate_cosets needs n >= 1");
    }
    let (c1, c2) = (d_k(5 * n + 1), d_k(n));
    let mut out = Vec::with_capacity(2 * c1.len() * c2.len());
    for z1 in &c1 {
        for z2 in &c2 {
            out.push(QuatMat::from_pair(z1.rep, z2.rep)?);
            out.push(QuatMat::from_pair(z1.rep * EPS2, z2.rep)?);
        }
    }
    Ok(out)
}

/// `S_h(n1, n2, n) = 2·U_{n1+n2}(5n+1)·U_{n1−n2}(n)`, zero for mixed parity.
pub fn s_h(n1: i64, n2: i64, n: u64) -> Complex64 {
    if (n1 - n2) % 2 != 0 || n == 0 {
        return Complex64::new(0.0, 0.0);
    }
    let u1 = quadratic::u_k(n1 + n2, 5 * n + 1).expect("even index");
    let u2 = quadratic::u_k(n1 - n2, n).expect("even index");
    2.0 * u1 * u2
}

/// [`s_h`] from the factorizations of `5n + 1` and `n`.
pub fn s_h_from_factors(n1: i64, n2: i64, f5: &[(u64, u32)], f1: &[(u64, u32)], table: &QuadSplitTable) -> f64 {
    if (n1 - n2) % 2 != 0 {
        return 0.0;
    }
    let u1 = u_k_from_factors(n1 + n2, f5, |p| table.angle(p)).expect("even index");
    if u1 == 0.0 {
        return 0.0;
    }
    2.0 * u1 * u_k_from_factors(n1 - n2, f1, |p| table.angle(p)).expect("even index")
}

/// S_h as the sum of `e(n1·log y1/log ε⁴ + n2·log y2/log ε⁴)` over the coset list.
pub fn s_h_direct(n1: i64, n2: i64, n: u64) -> Result<Complex64> {
    let l4 = 4.0 * log_eps();
    let mut acc = Complex64::new(0.0, 0.0);
    for q in enumerate_cosets(n)? {
        let h = hyperbolic_decompose(&q.embed())?;
        let t = (n1 as f64 * h.y1.ln() + n2 as f64 * h.y2.ln()) / l4;
        acc += Complex64::from_polar(1.0, TAU * t);
    }
    Ok(acc)
}

/// `log|z/σz|` for every class of norm `n`, reduced into `[0, log ε⁴)`.
pub fn log_ratios_from_factors(factors: &[(u64, u32)], table: &QuadSplitTable) -> Vec<f64> {
    let l4 = 4.0 * log_eps();
    let mut acc = vec![0.0];
    for &(p, a) in factors {
        match p % 8 {
            2 => acc.iter_mut().for_each(|l| *l += 2.0 * log_eps() * a as f64),
            1 | 7 => {
                let lp = table.rep(p).log_ratio().expect("nonzero");
                let a = a as i64;
                acc = acc
                    .iter()
                    .flat_map(|&l| (0..=a).map(move |j| l + (2 * j - a) as f64 * lp))
                    .collect();
            }
            _ if a % 2 == 1 => return Vec::new(),
            _ => {}
        }
    }
    acc.iter().map(|l| l.rem_euclid(l4)).collect()
}

/// Points `(log y1/log ε⁴, log y2/log ε⁴)` mod 1 for the coset list of `n`,
/// given the log ratios of the classes of norms `5n + 1` and `n`.
pub fn h_points(l1: &[f64], l2: &[f64], out: &mut Vec<(f64, f64)>) {
    let l4 = 4.0 * log_eps();
    for &a in l1 {
        for &b in l2 {
            let (t1, t2) = ((a + b) / (2.0 * l4), (a - b) / (2.0 * l4));
            out.push((t1.rem_euclid(1.0), t2.rem_euclid(1.0)));
            out.push(((t1 + 0.5).rem_euclid(1.0), (t2 + 0.5).rem_euclid(1.0)));
        }
    }
}

/// Points `(L1/log ε⁴, L2/log ε⁴)` mod 1, one per class pair.
pub fn script_h_points(l1: &[f64], l2: &[f64], out: &mut Vec<(f64, f64)>) {
    let l4 = 4.0 * log_eps();
    for &a in l1 {
        for &b in l2 {
            out.push(((a / l4).rem_euclid(1.0), (b / l4).rem_euclid(1.0)));
        }
    }
}

fn factorizers(x: u64) -> (ProgressionFactorizer, ProgressionFactorizer) {
    (ProgressionFactorizer::new(5, 1, x), ProgressionFactorizer::new(1, 0, x))
}

/// Σ_{n ≤ X} S_h(0, 0, n), compared with `10 (log ε)²/π² · X`. The metadata
/// carries Σ N2(5n+1)·N2(n) against `5 (log ε)²/π² · X`.
pub fn count_range_h(x: u64) -> Result<StatReport> {
    count_range_h_capped(x, DEFAULT_CAP)
}

pub fn count_range_h_capped(x: u64, cap: u64) -> Result<StatReport> {
    if x == 0 {
        return domain("count_range_h needs X >= 1");
    }
    check_cap(x, cap)?;
    let slope = default_constants().hyperbolic_count;
    let (fz5, fz1) = factorizers(x);
    let parts = map_blocks(1, x, |s, e| {
        let (b5, b1) = (fz5.block(s, e), fz1.block(s, e));
        let mut r = StatReport::new(Mode::Hyperbolic, s, e - 1, slope, Scale::Linear, Measure::Count);
        for n in s..e {
            let c = 2 * n2_from_factors(b5.at(n)) * n2_from_factors(b1.at(n));
            r.add(c, 0.0, Complex64::new(c as f64, 0.0));
        }
        r
    });
    let r = merge_all(parts)?;
    let half = r.count / 2;
    let hejhal_main = slope / 2.0 * x as f64;
    Ok(r.with_meta("hejhal_sum", half)
        .with_meta("hejhal_main_term", hejhal_main)
        .with_meta("hejhal_ratio", half as f64 / hejhal_main))
}

/// ψ_h and π_h over `[1, x]` in one pass.
fn prime_sums_h(x: u64, cap: u64) -> Result<(StatReport, StatReport)> {
    if x < 2 {
        return domain(format!("prime sums need x >= 2, got {x}"));
    }
    check_cap(x, cap)?;
    let c = default_constants().c;
    let (fz5, fz1) = factorizers(x);
    let parts = map_blocks(1, x, |s, e| {
        let (b5, b1) = (fz5.block(s, e), fz1.block(s, e));
        let mut psi = StatReport::new(Mode::Hyperbolic, s, e - 1, c, Scale::Linear, Measure::WeightedSum);
        let mut pi = StatReport::new(Mode::Hyperbolic, s, e - 1, c, Scale::Li, Measure::Count);
        for n in s..e {
            let f1 = b1.at(n);
            let lam = von_mangoldt_from_factors(f1);
            if lam == 0.0 {
                continue;
            }
            let term = 2 * n2_from_factors(b5.at(n)) * n2_from_factors(f1);
            if is_prime_factors(f1) {
                pi.add(term, 0.0, Complex64::new(term as f64, 0.0));
                psi.add(term, term as f64 * lam, Complex64::new(0.0, 0.0));
            } else {
                psi.add(0, term as f64 * lam, Complex64::new(0.0, 0.0));
            }
        }
        (psi, pi)
    });
    let (psi, pi): (Vec<_>, Vec<_>) = parts.into_iter().unzip();
    let (psi, pi) = (merge_all(psi)?, merge_all(pi)?);
    let psi = psi.with_meta("pi_h", pi.count);
    Ok((psi, pi))
}

/// ψ_h(x) = Σ_{n ≤ x} S_h(0, 0, n)·Λ(n) against `C·x`; `count` is π_h(x).
pub fn psi_h(x: u64) -> Result<StatReport> {
    psi_h_capped(x, DEFAULT_CAP)
}

pub fn psi_h_capped(x: u64, cap: u64) -> Result<StatReport> {
    Ok(prime_sums_h(x, cap)?.0)
}

/// π_h(x) = Σ_{p ≤ x} S_h(0, 0, p) against `C·li(x)`.
pub fn pi_h(x: u64) -> Result<StatReport> {
    pi_h_capped(x, DEFAULT_CAP)
}

pub fn pi_h_capped(x: u64, cap: u64) -> Result<StatReport> {
    Ok(prime_sums_h(x, cap)?.1)
}

/// Σ_{n ≤ x, n ≡ a mod 8} N2(5n+1)·Λ(n) against `C′x/4`. Every `n` in range
/// is also checked for the forced zeros `N2(5n+1) = 0` when `n ≡ 1 mod 16`
/// or `n ≡ 15, 23 mod 32`.
pub fn titchmarsh_sum(x: u64, a: u64) -> Result<StatReport> {
    titchmarsh_sum_capped(x, a, DEFAULT_CAP)
}

pub fn titchmarsh_sum_capped(x: u64, a: u64, cap: u64) -> Result<StatReport> {
    if a != 1 && a != 7 {
        return domain(format!("residue must be 1 or 7 mod 8, got {a}"));
    }
    if x < 2 {
        return domain(format!("titchmarsh_sum needs x >= 2, got {x}"));
    }
    check_cap(x, cap)?;
    let constant = default_constants().c_prime / 4.0;
    let (fz5, fz1) = factorizers(x);
    let parts = map_blocks(1, x, |s, e| {
        let (b5, b1) = (fz5.block(s, e), fz1.block(s, e));
        let mut r = StatReport::new(Mode::Titchmarsh, s, e - 1, constant, Scale::Linear, Measure::WeightedSum);
        let (mut checked, mut violations) = (0u64, 0u64);
        for n in s..e {
            let n2 = n2_from_factors(b5.at(n));
            if n % 16 == 1 || n % 32 == 15 || n % 32 == 23 {
                checked += 1;
                violations += (n2 != 0) as u64;
            }
            if n % 8 != a {
                continue;
            }
            let lam = von_mangoldt_from_factors(b1.at(n));
            if lam != 0.0 {
                r.add(n2, n2 as f64 * lam, Complex64::new(0.0, 0.0));
            }
        }
        (r, checked, violations)
    });
    let checked: u64 = parts.iter().map(|p| p.1).sum();
    let violations: u64 = parts.iter().map(|p| p.2).sum();
    let r = merge_all(parts.into_iter().map(|p| p.0).collect())?;
    if violations != 0 {
        return Err(Error::Invariant(format!("{violations} forced-zero terms are nonzero")));
    }
    Ok(r.with_meta("residue", a)
        .with_meta("vanishing_checked", checked)
        .with_meta("vanishing_violations", violations))
}

/// Σ_{p ≤ x} S_h(n1, n2, p); `count` is π_h(x), so the normalized magnitude is
/// |sum| / π_h(x).
pub fn prime_weyl_b(n1: i64, n2: i64, x: u64) -> Result<StatReport> {
    prime_weyl_b_capped(n1, n2, x, DEFAULT_CAP)
}

pub fn prime_weyl_b_capped(n1: i64, n2: i64, x: u64, cap: u64) -> Result<StatReport> {
    if x < 2 {
        return domain(format!("prime_weyl_b needs x >= 2, got {x}"));
    }
    check_cap(x, cap)?;
    let table = QuadSplitTable::new(5 * x + 1);
    let c = default_constants().c;
    let (fz5, fz1) = factorizers(x);
    let parts = map_blocks(1, x, |s, e| {
        let (b5, b1) = (fz5.block(s, e), fz1.block(s, e));
        let mut r = StatReport::new(Mode::Hyperbolic, s, e - 1, c, Scale::Li, Measure::Count);
        for p in s..e {
            let f1 = b1.at(p);
            if !is_prime_factors(f1) {
                continue;
            }
            let f5 = b5.at(p);
            let count = 2 * n2_from_factors(f5) * n2_from_factors(f1);
            if count == 0 {
                continue;
            }
            let z = if n1 == 0 && n2 == 0 { count as f64 } else { s_h_from_factors(n1, n2, f5, f1, &table) };
            r.add(count, 0.0, Complex64::new(z, 0.0));
        }
        r
    });
    Ok(merge_all(parts)?.with_meta("n1", n1).with_meta("n2", n2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith;
    use crate::quadratic::{lambda_angle, reduce_class};
    use proptest::prelude::*;

    const GAMMA7: QuatMat = QuatMat { x0: 6, x1: 0, x2: 3, x3: 1 };

    fn rel_err(a: &Mat2, b: &Mat2) -> f64 {
        let scale = a.iter().flatten().fold(0f64, |m, v| m.max(v.abs()));
        a.iter().flatten().zip(b.iter().flatten()).fold(0f64, |m, (x, y)| m.max((x - y).abs())) / scale
    }

    #[test]
    fn construction_and_embedding() {
        assert!(QuatMat::new(1, 1, 0, 0).is_err());
        let h = QuatMat::H0.embed();
        assert!((h[0][0] - (3.0 + 2.0 * 2f64.sqrt())).abs() < 1e-14);
        assert!((h[1][1] - (3.0 - 2.0 * 2f64.sqrt())).abs() < 1e-15);
        assert_eq!((h[0][1], h[1][0]), (0.0, 0.0));
        assert_eq!(QuatMat::IDENTITY.embed(), [[1.0, 0.0], [0.0, 1.0]]);
        let g = QuatMat::new(6, 0, 3, 1).unwrap().embed();
        assert!((g[0][0] * g[1][1] - g[0][1] * g[1][0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn group_operations() {
        let g = GAMMA7;
        assert_eq!(g.checked_mul(&g.inverse()).unwrap(), QuatMat::IDENTITY);
        assert_eq!(g.inverse().checked_mul(&g).unwrap(), QuatMat::IDENTITY);
        let gh = g.checked_mul(&QuatMat::H0).unwrap();
        let direct = mat_mul(&g.embed(), &QuatMat::H0.embed());
        assert!(rel_err(&direct, &gh.embed()) < 1e-14);
        assert!(QuatMat::new(gh.x0, gh.x1, gh.x2, gh.x3).is_ok());
    }

    #[test]
    fn classification() {
        assert_eq!(classify(&QuatMat::H0.embed()), Class::InS);
        let t = 0.3f64;
        assert_eq!(classify(&[[t.cos(), -t.sin()], [t.sin(), t.cos()]]), Class::InSNotS);
        assert_eq!(classify(&GAMMA7.embed()), Class::Generic);
    }

    #[test]
    fn gamma7_decomposition() {
        let g = GAMMA7.embed();
        let h = hyperbolic_decompose(&g).unwrap();
        let r = 2f64.sqrt();
        assert!((h.v - (6.0 + 35f64.sqrt()).ln()).abs() < 1e-13);
        assert_eq!((h.delta1, h.delta2, h.sign), (0, 0, 1));
        assert!((h.y1 - ((3.0 + r) / (3.0 - r)).sqrt()).abs() < 1e-13);
        assert!((h.y2 - ((3.0 - r) / (3.0 + r)).sqrt()).abs() < 1e-13);
        assert_eq!(GAMMA7.delta(), 142);
        assert!((delta_param(&g) - 142.0).abs() < 1e-11);
        assert!((0.5 * 71f64.acosh() - h.v).abs() < 1e-13);
        assert!(rel_err(&g, &recompose(&h)) < 1e-14);
        assert!(hyperbolic_decompose(&QuatMat::H0.embed()).is_err());
        let id = recompose(&HypDecomposition { y1: 1.0, y2: 1.0, v: 0.0, delta1: 0, delta2: 0, sign: 1 });
        assert_eq!(id, [[1.0, 0.0], [0.0, 1.0]]);
    }

    #[test]
    fn nu_examples() {
        assert_eq!(nu(&GAMMA7).unwrap(), 7);
        assert!(nu(&QuatMat::H0).is_err());
        let g = GAMMA7.embed();
        assert!((g[0][1] * g[1][0] / 5.0 - 7.0).abs() < 1e-12);
        let h = hyperbolic_decompose(&g).unwrap();
        assert!(((2.0 * h.v).cosh() - 1.0 - 70.0).abs() < 1e-10);
    }

    #[test]
    fn coset_examples() {
        let seven = enumerate_cosets(7).unwrap();
        assert_eq!(seven.len(), 4);
        for q in &seven {
            assert_eq!(nu(q).unwrap(), 7);
            assert_eq!(q.z1().norm(), 36);
        }
        assert!(seven.contains(&GAMMA7));
        assert!(enumerate_cosets(1).unwrap().is_empty());
        assert!(enumerate_cosets(5).unwrap().is_empty());
        for n in 1..=2000u64 {
            let list = enumerate_cosets(n).unwrap();
            let want = 2 * quadratic::n2(5 * n + 1) * quadratic::n2(n);
            assert_eq!(list.len() as u64, want, "n = {n}");
            for q in &list {
                assert_eq!(q.z1().norm(), 5 * q.z2().norm() + 1);
                assert_eq!(nu(q).unwrap(), n);
            }
        }
    }

    /// The two matrices over one class pair: same classes of z1 and z2, but no
    /// h0-translation `(ε^{2(j+k)} z1, ε^{2(j−k)} z2)` carries one to the other.
    #[test]
    fn two_to_one_structure() {
        for n in 1..=500u64 {
            let list = enumerate_cosets(n).unwrap();
            for pair in list.chunks_exact(2) {
                let (g, h) = (pair[0], pair[1]);
                assert_eq!(reduce_class(g.z1()).unwrap(), reduce_class(h.z1()).unwrap());
                assert_eq!(g.z2(), h.z2());
                for j in -3i64..=3 {
                    for k in -3i64..=3 {
                        let t = QuatMat::H0;
                        let pw = |e: i64| {
                            let base = if e >= 0 { t } else { t.inverse() };
                            (0..e.abs()).fold(QuatMat::IDENTITY, |acc, _| acc.checked_mul(&base).unwrap())
                        };
                        let moved = pw(j).checked_mul(&g).unwrap().checked_mul(&pw(k)).unwrap();
                        assert!(moved != h && moved.neg() != h);
                    }
                }
            }
        }
    }

    #[test]
    fn s_h_examples() {
        assert_eq!(s_h(0, 0, 7), Complex64::new(4.0, 0.0));
        assert_eq!(s_h(0, 0, 1), Complex64::new(0.0, 0.0));
        assert_eq!(s_h(0, 0, 2), Complex64::new(0.0, 0.0));
        for n in 1..200 {
            assert_eq!(s_h(1, 0, n), Complex64::new(0.0, 0.0));
        }
        assert!((s_h_direct(0, 0, 7).unwrap() - 4.0).norm() < 1e-12);
        assert!(s_h_direct(0, 0, 1).unwrap().norm() == 0.0);
        let want = 2.0 * quadratic::u_k(2, 36).unwrap() * quadratic::u_k(2, 7).unwrap();
        assert!((s_h_direct(2, 0, 7).unwrap() - want).norm() < 1e-9);
    }

    #[test]
    fn s_h_direct_matches_factored() {
        for n in 1..=800u64 {
            for n1 in -4..=4 {
                for n2 in -4..=4 {
                    let d = s_h_direct(n1, n2, n).unwrap();
                    let f = s_h(n1, n2, n);
                    assert!((d - f).norm() < 1e-9, "({n1},{n2},{n}): {d} vs {f}");
                }
            }
        }
    }

    #[test]
    fn angle_identity_on_cosets() {
        let l4 = 4.0 * log_eps();
        for n in 1..=400u64 {
            for q in enumerate_cosets(n).unwrap() {
                let h = hyperbolic_decompose(&q.embed()).unwrap();
                let (la, lb) = (lambda_angle(q.z1()).unwrap(), lambda_angle(q.z2()).unwrap());
                let d1 = (h.y1.ln() / l4 - 0.5 * (la + lb) / std::f64::consts::PI).rem_euclid(1.0);
                let d2 = (h.y2.ln() / l4 - 0.5 * (la - lb) / std::f64::consts::PI).rem_euclid(1.0);
                assert!(d1.min(1.0 - d1) < 1e-9 && d2.min(1.0 - d2) < 1e-9);
            }
        }
    }

    #[test]
    fn h_points_match_decomposition() {
        let table = QuadSplitTable::new(5 * 400 + 1);
        let l4 = 4.0 * log_eps();
        let key = |p: &(f64, f64)| {
            let r = |t: f64| ((t * 1e8).round() as i64).rem_euclid(100_000_000);
            (r(p.0), r(p.1))
        };
        for n in 1..=400u64 {
            let l1 = log_ratios_from_factors(&arith::factor(5 * n + 1), &table);
            let l2 = log_ratios_from_factors(&arith::factor(n), &table);
            let mut pts = Vec::new();
            h_points(&l1, &l2, &mut pts);
            let mut got: Vec<_> = pts.iter().map(key).collect();
            let mut want: Vec<_> = enumerate_cosets(n)
                .unwrap()
                .iter()
                .map(|q| {
                    let h = hyperbolic_decompose(&q.embed()).unwrap();
                    key(&(h.y1.ln() / l4, h.y2.ln() / l4))
                })
                .collect();
            got.sort();
            want.sort();
            assert_eq!(got, want, "n = {n}");
        }
    }

    #[test]
    fn intersection_with_s_is_h() {
        let r = 30i64;
        for x0 in -r..=r {
            for x1 in -r..=r {
                for x2 in -r..=r {
                    for x3 in -r..=r {
                        let Ok(q) = QuatMat::new(x0, x1, x2, x3) else { continue };
                        let g = q.embed();
                        match classify(&g) {
                            Class::InS => {
                                // ±h0^k: z2 = 0 and z1 a totally positive or negative unit of norm 1.
                                assert_eq!(q.z2(), QuadInt::ZERO);
                                let z = if q.x0 > 0 { q.z1() } else { -q.z1() };
                                assert!(z.is_totally_positive());
                                let c = reduce_class(z).unwrap();
                                assert_eq!(c.rep, QuadInt::ONE);
                            }
                            Class::InSNotS => panic!("{q} lies in S but not in s"),
                            Class::Generic => {}
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn count_examples() {
        let direct: u64 = (1..=7u64).map(|n| 2 * quadratic::n2(5 * n + 1) * quadratic::n2(n)).sum();
        let r = count_range_h(7).unwrap();
        assert_eq!(r.count, direct);
        assert!(direct >= 4);
        assert_eq!(count_range_h(1).unwrap().count, 0);
        let big = count_range_h(3000).unwrap();
        let want: u64 = (1..=3000u64).map(|n| enumerate_cosets(n).unwrap().len() as u64).sum();
        assert_eq!(big.count, want);
        assert_eq!(big.metadata["hejhal_sum"], (want / 2).to_string());
    }

    #[test]
    fn prime_sum_examples() {
        let r = psi_h(2).unwrap();
        assert_eq!(r.weighted_sum, 0.0);
        let direct: f64 = (2..=7u64)
            .map(|n| {
                let f = arith::factor(n);
                s_h(0, 0, n).re * crate::analytics::sieve::von_mangoldt_from_factors(&f)
            })
            .sum();
        assert!((psi_h(7).unwrap().weighted_sum - direct).abs() < 1e-12);
        assert!((psi_h(7).unwrap().weighted_sum - 4.0 * 7f64.ln()).abs() < 1e-12);
        let pi = pi_h(1000).unwrap();
        let want: u64 = (2..=1000u64).filter(|&p| arith::is_prime(p)).map(|p| s_h(0, 0, p).re as u64).sum();
        assert_eq!(pi.count, want);
        assert!(psi_h(1).is_err());
    }

    #[test]
    fn titchmarsh_examples() {
        for a in [1u64, 7] {
            let r = titchmarsh_sum(50, a).unwrap();
            let direct: f64 = (1..=50u64)
                .filter(|n| n % 8 == a)
                .map(|n| quadratic::n2(5 * n + 1) as f64 * crate::analytics::sieve::von_mangoldt_from_factors(&arith::factor(n)))
                .sum();
            assert!((r.weighted_sum - direct).abs() < 1e-12);
            assert_eq!(r.metadata["vanishing_violations"], "0");
        }
        assert!(titchmarsh_sum(50, 3).is_err());
    }

    #[test]
    fn prime_weyl_b_examples() {
        assert_eq!(prime_weyl_b(1, 0, 5000).unwrap().complex(), Complex64::new(0.0, 0.0));
        assert_eq!(prime_weyl_b(0, 0, 5000).unwrap().count, pi_h(5000).unwrap().count);
        let r = prime_weyl_b(2, 2, 3000).unwrap();
        let direct: Complex64 = (2..=3000u64).filter(|&p| arith::is_prime(p)).map(|p| s_h(2, 2, p)).sum();
        assert!((r.complex() - direct).norm() < 1e-8);
    }

    fn generator_pool() -> Vec<QuatMat> {
        let mut pool = vec![QuatMat::H0, QuatMat::H0.inverse()];
        for n in 1..40u64 {
            for q in enumerate_cosets(n).unwrap() {
                pool.push(q);
                pool.push(q.inverse());
            }
        }
        pool
    }

    proptest! {
        #[test]
        fn random_elements_roundtrip(word in prop::collection::vec(any::<prop::sample::Index>(), 1..12)) {
            let pool = generator_pool();
            let mut g = QuatMat::IDENTITY;
            for ix in word {
                match g.checked_mul(ix.get(&pool)) {
                    Some(h) if [h.x0, h.x1, h.x2, h.x3].iter().all(|v| v.abs() <= 1_000_000) => g = h,
                    _ => break,
                }
            }
            prop_assert_eq!(g.z1().norm(), 5 * g.z2().norm() + 1);
            let m = g.embed();
            if classify(&m) == Class::Generic {
                let h = hyperbolic_decompose(&m).unwrap();
                prop_assert!(rel_err(&m, &recompose(&h)) < 1e-12);
                prop_assert!((h.v - 0.5 * (g.delta() as f64 / 2.0).acosh()).abs() < 1e-12 * h.v.max(1.0));
            }
        }
    }
}
