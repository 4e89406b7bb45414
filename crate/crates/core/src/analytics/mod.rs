//! Shared numerics: prime tables, the logarithmic integral, Euler-product
//! constants, equidistribution diagnostics and report assembly.

pub mod cache;
pub mod equidist;
pub mod euler;
pub mod li;
pub mod report;
pub mod sieve;

use rayon::prelude::*;

pub use euler::{constants, Character, Constants, EulerProduct};
pub use li::li;
pub use report::{Mode, Scale, StatReport};

/// Default hard cap on the range parameter of any range computation.
pub const DEFAULT_CAP: u64 = 100_000_000;

/// Width of the contiguous blocks range sweeps are cut into. Fixed so that the
/// reduction order, and hence every floating sum, is independent of the
/// number of worker threads.
pub const BLOCK: u64 = 1 << 16;

/// Splits `[lo, hi]` into fixed-width blocks, evaluates `f(block_lo, block_hi_exclusive)`
/// on the rayon pool and returns the results in block order.
pub fn map_blocks<R, F>(lo: u64, hi: u64, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(u64, u64) -> R + Sync,
{
    if hi < lo {
        return Vec::new();
    }
    let nblocks = (hi - lo) / BLOCK + 1;
    (0..nblocks)
        .into_par_iter()
        .map(|b| {
            let s = lo + b * BLOCK;
            let e = (s + BLOCK).min(hi + 1);
            f(s, e)
        })
        .collect()
}

pub(crate) fn check_cap(x: u64, cap: u64) -> crate::Result<()> {
    if x > cap {
        Err(crate::Error::CapExceeded { requested: x, cap })
    } else {
        Ok(())
    }
}
