//! Truncated Euler products and the counting constants built from them.

use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::analytics::sieve::primes_up_to;
use crate::arith::chi4;
use crate::error::{domain, Result};
use crate::quadratic::{chi8, log_eps};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Character {
    Chi4,
    Chi8,
}

impl Character {
    pub fn eval(self, n: i64) -> i8 {
        match self {
            Character::Chi4 => chi4(n),
            Character::Chi8 => chi8(n),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EulerProduct {
    pub value: f64,
    /// Bound on `|log(full product / truncated product)|`.
    pub tail_bound: f64,
    pub cutoff: u64,
}

/// `∏_{p ≤ cutoff, p ≠ omit} (1 + χ(p)/(p(p−1)))`.
pub fn euler_product(character: Character, omit: Option<u64>, cutoff: u64) -> Result<EulerProduct> {
    if cutoff < 3 {
        return domain(format!("Euler product cutoff must be at least 3, got {cutoff}"));
    }
    let mut log_sum = 0.0;
    for p in primes_up_to(cutoff) {
        if Some(p) == omit {
            continue;
        }
        let c = character.eval(p as i64);
        if c != 0 {
            let pf = p as f64;
            log_sum += (c as f64 / (pf * (pf - 1.0))).ln_1p();
        }
    }
    // |log(1+t)| ≤ 1.2|t| for |t| ≤ 1/6, and summing 1/(n(n−1)) ≤ (1/(n−2) − 1/n)/2
    // over odd n > P telescopes to at most 1/(2(P−1)).
    Ok(EulerProduct { value: log_sum.exp(), tail_bound: 0.6 / (cutoff - 1) as f64, cutoff })
}

/// Every constant used as a main-term coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    pub cutoff: u64,
    pub log_eps: f64,
    /// L(1, χ8) = log ε / √2.
    pub l1_chi8: f64,
    pub chi4_product: f64,
    pub chi8_product_without_5: f64,
    pub tail_bound: f64,
    /// 8π ∏ (1 + χ4(p)/(p(p−1))), the shifted elliptic prime constant.
    pub k_elliptic_shifted: f64,
    /// (12/5)(log ε/√2) ∏_{p≠5} (1 + χ8(p)/(p(p−1))).
    pub c: f64,
    /// (6/5)(log ε/√2) ∏_{p≠5} (1 + χ8(p)/(p(p−1))).
    pub c_prime: f64,
    /// 10 (log ε)² / π², the hyperbolic double-coset count slope.
    pub hyperbolic_count: f64,
}

pub const DEFAULT_CUTOFF: u64 = 10_000_000;

pub fn constants(cutoff: u64) -> Result<Constants> {
    let p4 = euler_product(Character::Chi4, None, cutoff)?;
    let p8 = euler_product(Character::Chi8, Some(5), cutoff)?;
    let le = log_eps();
    let l1 = le / 2f64.sqrt();
    Ok(Constants {
        cutoff,
        log_eps: le,
        l1_chi8: l1,
        chi4_product: p4.value,
        chi8_product_without_5: p8.value,
        tail_bound: p4.tail_bound.max(p8.tail_bound),
        k_elliptic_shifted: 8.0 * PI * p4.value,
        c: 12.0 / 5.0 * l1 * p8.value,
        c_prime: 6.0 / 5.0 * l1 * p8.value,
        hyperbolic_count: 10.0 * le * le / (PI * PI),
    })
}

/// Constants at the default cutoff, computed once per process.
pub fn default_constants() -> &'static Constants {
    static CELL: OnceLock<Constants> = OnceLock::new();
    CELL.get_or_init(|| constants(DEFAULT_CUTOFF).expect("default cutoff is valid"))
}

pub fn constant_c() -> f64 {
    default_constants().c
}

pub fn constant_c_prime() -> f64 {
    default_constants().c_prime
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_factor_products() {
        let p = euler_product(Character::Chi4, None, 3).unwrap();
        assert!((p.value - 5.0 / 6.0).abs() < 1e-15);
        let p = euler_product(Character::Chi8, Some(5), 3).unwrap();
        assert!((p.value - 5.0 / 6.0).abs() < 1e-15);
        let p = euler_product(Character::Chi8, Some(5), 7).unwrap();
        assert!((p.value - 5.0 / 6.0 * (1.0 + 1.0 / 42.0)).abs() < 1e-15);
        assert!(euler_product(Character::Chi4, None, 2).is_err());
    }

    #[test]
    fn cauchy_behaviour() {
        let mut prev: Option<EulerProduct> = None;
        for cutoff in [1_000u64, 10_000, 100_000, 1_000_000, 10_000_000] {
            let p = euler_product(Character::Chi4, None, cutoff).unwrap();
            if let Some(q) = prev {
                assert!((p.value.ln() - q.value.ln()).abs() <= q.tail_bound);
            }
            prev = Some(p);
        }
        assert!(prev.unwrap().tail_bound < 1e-7);
    }

    #[test]
    fn constant_relations() {
        let k = constants(1_000_000).unwrap();
        assert_eq!(k.c, 2.0 * k.c_prime);
        assert!((k.log_eps - 0.881_373_587_019_543).abs() < 1e-15);
        // Independent oracle: trial-division primes up to 10⁵, tail below 1e-5.
        let prod: f64 = (3..100_000i64)
            .filter(|&p| p != 5 && crate::arith::is_prime(p as u64))
            .map(|p| 1.0 + chi8(p) as f64 / (p * (p - 1)) as f64)
            .product();
        let oracle = 12.0 / 5.0 * (1.0 + 2f64.sqrt()).ln() / 2f64.sqrt() * prod;
        assert!((k.c - oracle).abs() < 1e-5, "{} vs {oracle}", k.c);
        let prod4: f64 = (3..100_000i64)
            .filter(|&p| crate::arith::is_prime(p as u64))
            .map(|p| 1.0 + chi4(p) as f64 / (p * (p - 1)) as f64)
            .product();
        assert!((k.k_elliptic_shifted - 8.0 * PI * prod4).abs() < 1e-3, "{}", k.k_elliptic_shifted);
    }

    #[test]
    fn l_value_against_partial_sums() {
        // Partial sums of Σ χ8(n)/n converge to L(1, χ8) with error O(1/N).
        let n_max = 2_000_000i64;
        let direct: f64 = (1..=n_max).map(|n| chi8(n) as f64 / n as f64).sum();
        let k = constants(10_000).unwrap();
        assert!((direct - k.l1_chi8).abs() < 1e-4);
        let l5 = 6.0 / 5.0 * k.l1_chi8;
        assert!((l5 * k.chi8_product_without_5 - k.c_prime).abs() < 1e-15);
    }
}
