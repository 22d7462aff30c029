//! Binary spectrum cache.
//!
//! Layout: one ASCII header line
//! `LSCAT-SPEC v1 N=<int> L=<int> U_over_J=<decimal> J=<decimal>\n`, then
//! little-endian IEEE-754 doubles: all `D` eigenvalues followed by the
//! `⟨e|n̂_j|g⟩` table, row-major with `e` outer and `j` inner. `D` is the
//! Fock dimension implied by `N` and `L`.

use std::io::{BufRead, Read, Write};

use super::basis::fock_dimension;
use super::cross_section::ExcitationData;
use super::spectrum::DensityTable;
use crate::error::{Error, Result};

pub const MAGIC: &str = "LSCAT-SPEC";
pub const VERSION: &str = "v1";
const MAX_HEADER: usize = 256;

/// Identifies one cached diagonalization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CacheKey {
    pub particles: usize,
    pub sites: usize,
    pub u_over_j: f64,
    pub tunneling: f64,
}

impl CacheKey {
    pub fn header(&self) -> String {
        // `{}` on f64 prints the shortest string that parses back to the same bits
        format!(
            "{MAGIC} {VERSION} N={} L={} U_over_J={} J={}",
            self.particles, self.sites, self.u_over_j, self.tunneling
        )
    }

    pub fn parse_header(line: &str) -> Result<Self> {
        let mut fields = line.split(' ');
        if fields.next() != Some(MAGIC) {
            return Err(Error::Cache(format!("bad magic in header {line:?}")));
        }
        match fields.next() {
            Some(VERSION) => {}
            other => return Err(Error::Cache(format!("unsupported version {other:?}"))),
        }
        let mut value = |name: &str| -> Result<&str> {
            let field = fields
                .next()
                .ok_or_else(|| Error::Cache(format!("header missing {name}")))?;
            field
                .strip_prefix(name)
                .and_then(|rest| rest.strip_prefix('='))
                .ok_or_else(|| Error::Cache(format!("expected {name}=..., found {field:?}")))
        };
        let bad = |name: &str, raw: &str| Error::Cache(format!("unparseable {name}={raw:?}"));
        let n = value("N")?;
        let particles = n.parse().map_err(|_| bad("N", n))?;
        let l = value("L")?;
        let sites = l.parse().map_err(|_| bad("L", l))?;
        let u = value("U_over_J")?;
        let u_over_j = u.parse().map_err(|_| bad("U_over_J", u))?;
        let j = value("J")?;
        let tunneling = j.parse().map_err(|_| bad("J", j))?;
        if fields.next().is_some() {
            return Err(Error::Cache("trailing fields in header".into()));
        }
        Ok(Self {
            particles,
            sites,
            u_over_j,
            tunneling,
        })
    }
}

pub fn write_spectrum<W: Write>(mut out: W, key: &CacheKey, data: &ExcitationData) -> Result<()> {
    if data.particles != key.particles || data.sites != key.sites {
        return Err(Error::Cache(format!(
            "key (N={}, L={}) does not describe data (N={}, L={})",
            key.particles, key.sites, data.particles, data.sites
        )));
    }
    writeln!(out, "{}", key.header())?;
    for v in data.eigenvalues.iter().chain(data.density.as_slice()) {
        out.write_all(&v.to_le_bytes())?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_spectrum<R: BufRead>(mut input: R) -> Result<(CacheKey, ExcitationData)> {
    let mut header = Vec::new();
    input
        .by_ref()
        .take(MAX_HEADER as u64)
        .read_until(b'\n', &mut header)?;
    if header.last() != Some(&b'\n') {
        return Err(Error::Cache("missing or oversized header line".into()));
    }
    header.pop();
    let header = std::str::from_utf8(&header).map_err(|_| Error::Cache("header is not UTF-8".into()))?;
    let key = CacheKey::parse_header(header)?;

    let dim = fock_dimension(key.particles, key.sites)
        .filter(|&d| d > 0 && d <= (usize::MAX / 16) as u128)
        .ok_or_else(|| Error::Cache(format!("implausible dimension for N={} L={}", key.particles, key.sites)))?
        as usize;

    let mut read_block = |count: usize| -> Result<Vec<f64>> {
        let mut bytes = vec![0u8; count * 8];
        input
            .read_exact(&mut bytes)
            .map_err(|e| Error::Cache(format!("truncated payload: {e}")))?;
        Ok(bytes
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
            .collect())
    };
    let eigenvalues = read_block(dim)?;
    let table = read_block(dim * key.sites)?;
    let mut rest = [0u8; 1];
    if input.read(&mut rest)? != 0 {
        return Err(Error::Cache("trailing bytes after payload".into()));
    }

    Ok((
        key,
        ExcitationData {
            particles: key.particles,
            sites: key.sites,
            eigenvalues,
            density: DensityTable::from_raw(dim, key.sites, table)?,
        },
    ))
}
