//! On-disk caches for prime tables.
//!
//! File layout: magic `HPL1`, one version byte, one kind byte, the entry count
//! as a little-endian `u64`, then the entries as little-endian `u64` words.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::gaussian::{GaussInt, GaussSplitTable};

pub const MAGIC: &[u8; 4] = b"HPL1";
pub const VERSION: u8 = 1;
pub const ENV_VAR: &str = "HYPERLAB_CACHE_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u8)]
pub enum Kind {
    Primes = 1,
    GaussSplit = 2,
}

pub fn write_words(path: &Path, kind: Kind, words: &[u64]) -> Result<()> {
    let mut buf = Vec::with_capacity(14 + 8 * words.len());
    buf.extend_from_slice(MAGIC);
    buf.push(VERSION);
    buf.push(kind as u8);
    buf.extend_from_slice(&(words.len() as u64).to_le_bytes());
    for w in words {
        buf.extend_from_slice(&w.to_le_bytes());
    }
    // Write to a sibling then rename so readers never see a partial file.
    let tmp = path.with_extension("tmp");
    fs::File::create(&tmp)?.write_all(&buf)?;
    fs::rename(tmp, path)?;
    Ok(())
}

pub fn read_words(path: &Path, kind: Kind) -> Result<Vec<u64>> {
    let mut buf = Vec::new();
    fs::File::open(path)?.read_to_end(&mut buf)?;
    if buf.len() < 14 || &buf[..4] != MAGIC {
        return Err(Error::Cache(format!("{}: bad magic", path.display())));
    }
    if buf[4] != VERSION {
        return Err(Error::Cache(format!("{}: unsupported version {}", path.display(), buf[4])));
    }
    if buf[5] != kind as u8 {
        return Err(Error::Cache(format!("{}: wrong table kind {}", path.display(), buf[5])));
    }
    let n = u64::from_le_bytes(buf[6..14].try_into().expect("8 bytes")) as usize;
    let body = &buf[14..];
    if body.len() != 8 * n {
        return Err(Error::Cache(format!("{}: truncated ({} of {} words)", path.display(), body.len() / 8, n)));
    }
    Ok(body
        .chunks_exact(8)
        .map(|c| u64::from_le_bytes(c.try_into().expect("8 bytes")))
        .collect())
}

/// Cache directory from the environment, if configured.
pub fn cache_dir() -> Option<PathBuf> {
    std::env::var_os(ENV_VAR).filter(|v| !v.is_empty()).map(PathBuf::from)
}

fn cached<T>(
    dir: Option<&Path>,
    name: String,
    kind: Kind,
    build: impl FnOnce() -> T,
    encode: impl FnOnce(&T) -> Vec<u64>,
    decode: impl FnOnce(Vec<u64>) -> Option<T>,
) -> Result<T> {
    let Some(dir) = dir else {
        return Ok(build());
    };
    let path = dir.join(name);
    if path.exists() {
        if let Some(v) = decode(read_words(&path, kind)?) {
            return Ok(v);
        }
        return Err(Error::Cache(format!("{}: malformed contents", path.display())));
    }
    let v = build();
    fs::create_dir_all(dir)?;
    write_words(&path, kind, &encode(&v))?;
    Ok(v)
}

/// Primes up to `limit`, read from or written to `dir` when given.
pub fn primes(dir: Option<&Path>, limit: u64) -> Result<Vec<u64>> {
    cached(
        dir,
        format!("primes_{limit}.hpl"),
        Kind::Primes,
        || super::sieve::primes_up_to(limit),
        |v| v.clone(),
        Some,
    )
}

/// Gaussian splitting table for `p ≡ 1 mod 4` up to `limit`; entries are
/// stored as `(p, re, im)` word triples with two's-complement coordinates.
pub fn gauss_split(dir: Option<&Path>, limit: u64) -> Result<GaussSplitTable> {
    cached(
        dir,
        format!("gauss_split_{limit}.hpl"),
        Kind::GaussSplit,
        || GaussSplitTable::new(limit),
        |t| {
            t.entries()
                .flat_map(|(p, z)| [p, z.re as u64, z.im as u64])
                .collect()
        },
        |words| {
            if words.len() % 3 != 0 {
                return None;
            }
            let (primes, pis) = words
                .chunks_exact(3)
                .map(|c| (c[0], GaussInt::new(c[1] as i64, c[2] as i64)))
                .unzip();
            Some(GaussSplitTable::from_parts(primes, pis))
        },
    )
}

pub fn gauss_split_from_env(limit: u64) -> Result<GaussSplitTable> {
    gauss_split(cache_dir().as_deref(), limit)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_and_validation() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.hpl");
        write_words(&p, Kind::Primes, &[2, 3, 5, u64::MAX]).unwrap();
        assert_eq!(read_words(&p, Kind::Primes).unwrap(), vec![2, 3, 5, u64::MAX]);
        assert!(matches!(read_words(&p, Kind::GaussSplit), Err(Error::Cache(_))));
        let bytes = fs::read(&p).unwrap();
        assert_eq!(&bytes[..4], b"HPL1");
        assert_eq!(bytes[4], VERSION);
        fs::write(&p, &bytes[..bytes.len() - 3]).unwrap();
        assert!(matches!(read_words(&p, Kind::Primes), Err(Error::Cache(_))));
    }

    #[test]
    fn cached_tables_match_fresh_ones() {
        let dir = tempfile::tempdir().unwrap();
        let fresh = GaussSplitTable::new(5000);
        let first = gauss_split(Some(dir.path()), 5000).unwrap();
        let second = gauss_split(Some(dir.path()), 5000).unwrap();
        assert!(dir.path().join("gauss_split_5000.hpl").exists());
        for t in [&first, &second] {
            assert!(t.entries().eq(fresh.entries()));
        }
        assert_eq!(primes(Some(dir.path()), 1000).unwrap(), super::super::sieve::primes_up_to(1000));
        assert_eq!(primes(Some(dir.path()), 1000).unwrap().len(), 168);
    }
}
