//! Prime tables: an Eratosthenes prime list, a smallest-prime-factor sieve with
//! von Mangoldt values, and a blockwise factorizer for arithmetic progressions.

use crate::arith::{self, Factorization};
use crate::error::{Error, Result};

/// All primes `≤ x` (odd-only Eratosthenes).
pub fn primes_up_to(x: u64) -> Vec<u64> {
    if x < 2 {
        return Vec::new();
    }
    let half = ((x - 1) / 2) as usize; // index i ↔ 2i+1, i ≥ 1
    let mut composite = vec![false; half + 1];
    let mut i = 1;
    while (2 * i + 1) * (2 * i + 1) <= x as usize {
        if !composite[i] {
            let p = 2 * i + 1;
            let mut j = (p * p - 1) / 2;
            while j <= half {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    let mut out = Vec::with_capacity((x as f64 / (x as f64).ln().max(1.0) * 1.2) as usize + 4);
    out.push(2);
    out.extend((1..=half).filter(|&i| !composite[i]).map(|i| 2 * i as u64 + 1));
    out
}

/// Smallest-prime-factor table for `n ≤ x`.
#[derive(Clone, Debug)]
pub struct SpfSieve {
    spf: Vec<u32>,
}

impl SpfSieve {
    /// Fails with [`Error::CapExceeded`] when `x` exceeds `cap`.
    pub fn new(x: u64, cap: u64) -> Result<Self> {
        if x > cap {
            return Err(Error::CapExceeded { requested: x, cap });
        }
        if x >= u32::MAX as u64 {
            return Err(Error::CapExceeded { requested: x, cap: u32::MAX as u64 - 1 });
        }
        let n = x as usize;
        let mut spf = vec![0u32; n + 1];
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                if i * i <= n {
                    let mut j = i * i;
                    while j <= n {
                        if spf[j] == 0 {
                            spf[j] = i as u32;
                        }
                        j += i;
                    }
                }
            }
        }
        Ok(SpfSieve { spf })
    }

    pub fn limit(&self) -> u64 {
        self.spf.len() as u64 - 1
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && self.spf[n as usize] as u64 == n
    }

    pub fn factor(&self, mut n: u64) -> Factorization {
        let mut out: Factorization = Vec::new();
        while n > 1 {
            let p = self.spf[n as usize] as u64;
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        out
    }

    pub fn von_mangoldt(&self, n: u64) -> f64 {
        von_mangoldt_from_factors(&self.factor(n))
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        (2..self.spf.len() as u64).filter(|&n| self.is_prime(n))
    }
}

pub fn von_mangoldt_from_factors(f: &[(u64, u32)]) -> f64 {
    match f {
        [(p, _)] => (*p as f64).ln(),
        _ => 0.0,
    }
}

/// True when the factor list describes a prime.
pub fn is_prime_factors(f: &[(u64, u32)]) -> bool {
    matches!(f, [(_, 1)])
}

/// Factorizes the values `a·k + b` for `k` in a window, using trial sieving by
/// the primes up to the square root of the largest value.
#[derive(Clone, Debug)]
pub struct ProgressionFactorizer {
    a: u64,
    b: u64,
    base: Vec<u64>,
    inv_a: Vec<u64>,
}

/// Factorizations of one contiguous window of a progression.
#[derive(Clone, Debug, Default)]
pub struct FactoredBlock {
    pub k_lo: u64,
    values: Vec<u64>,
    offsets: Vec<u32>,
    factors: Vec<(u64, u32)>,
}

impl FactoredBlock {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, i: usize) -> u64 {
        self.values[i]
    }

    /// Factors of the `i`-th value of the window (empty for 0 and 1).
    pub fn factors(&self, i: usize) -> &[(u64, u32)] {
        &self.factors[self.offsets[i] as usize..self.offsets[i + 1] as usize]
    }

    /// Factors of `a·k + b`; `k` must lie in the window.
    pub fn at(&self, k: u64) -> &[(u64, u32)] {
        self.factors((k - self.k_lo) as usize)
    }
}

impl ProgressionFactorizer {
    /// Prepares to factor `a·k + b` for all `k ≤ k_max`.
    pub fn new(a: u64, b: u64, k_max: u64) -> Self {
        assert!(a >= 1, "progression step must be positive");
        let top = a.checked_mul(k_max).and_then(|v| v.checked_add(b)).expect("progression overflows u64");
        let base = primes_up_to(arith::isqrt(top));
        let inv_a = base
            .iter()
            .map(|&p| if a.is_multiple_of(p) { 0 } else { arith::powmod(a % p, p - 2, p) })
            .collect();
        ProgressionFactorizer { a, b, base, inv_a }
    }

    pub fn block(&self, k_lo: u64, k_hi: u64) -> FactoredBlock {
        let len = (k_hi - k_lo) as usize;
        let values: Vec<u64> = (k_lo..k_hi).map(|k| self.a * k + self.b).collect();
        let mut rest = values.clone();
        let mut hits: Vec<(u32, u64, u32)> = Vec::with_capacity(len * 3);
        for (&p, &inv) in self.base.iter().zip(&self.inv_a) {
            // p | gcd(a, b) divides every value.
            let (start, step) = if self.a.is_multiple_of(p) {
                if !self.b.is_multiple_of(p) {
                    continue;
                }
                (0, 1)
            } else {
                let k0 = (p - self.b % p) % p * inv % p;
                (((k0 + p - k_lo % p) % p) as usize, p as usize)
            };
            let mut i = start;
            while i < len {
                let v = &mut rest[i];
                if *v != 0 {
                    let mut e = 0;
                    while (*v).is_multiple_of(p) {
                        *v /= p;
                        e += 1;
                    }
                    hits.push((i as u32, p, e));
                }
                i += step;
            }
        }
        for (i, &v) in rest.iter().enumerate() {
            if v > 1 {
                hits.push((i as u32, v, 1));
            }
        }
        // Stable counting sort by index keeps primes ascending within each value.
        let mut offsets = vec![0u32; len + 1];
        for &(i, _, _) in &hits {
            offsets[i as usize + 1] += 1;
        }
        for i in 0..len {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets.clone();
        let mut factors = vec![(0u64, 0u32); hits.len()];
        for (i, p, e) in hits {
            let c = &mut cursor[i as usize];
            factors[*c as usize] = (p, e);
            *c += 1;
        }
        FactoredBlock { k_lo, values, offsets, factors }
    }
}
