//! On-disk spectrum cache shared between runs.
//!
//! One file per `(N, L, U/J, J)`. Writers go through a temporary file in the
//! same directory followed by a rename, so a concurrent reader sees either
//! nothing or a complete file.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};

use lscat_core::fock::{read_spectrum, write_spectrum, CacheKey, ExcitationData};
use lscat_core::model::LatticeSpec;

use crate::CliError;

pub struct SpectrumStore {
    dir: Option<PathBuf>,
    cap: usize,
    hits: AtomicUsize,
    misses: AtomicUsize,
}

pub fn cache_key(lattice: &LatticeSpec) -> CacheKey {
    CacheKey {
        particles: lattice.particle_count(),
        sites: lattice.sites,
        u_over_j: lattice.interaction / lattice.tunneling,
        tunneling: lattice.tunneling,
    }
}

/// File name for a key; floats enter through their bit patterns so distinct
/// parameters never share a file.
pub fn file_name(key: &CacheKey) -> String {
    format!(
        "spectrum-N{}-L{}-u{:016x}-J{:016x}.bin",
        key.particles,
        key.sites,
        key.u_over_j.to_bits(),
        key.tunneling.to_bits()
    )
}

impl SpectrumStore {
    pub fn new(dir: Option<PathBuf>, cap: usize) -> Result<Self, CliError> {
        if let Some(d) = &dir {
            fs::create_dir_all(d)?;
        }
        Ok(Self {
            dir,
            cap,
            hits: AtomicUsize::new(0),
            misses: AtomicUsize::new(0),
        })
    }

    pub fn hits(&self) -> usize {
        self.hits.load(Ordering::Relaxed)
    }

    pub fn misses(&self) -> usize {
        self.misses.load(Ordering::Relaxed)
    }

    pub fn path_for(&self, lattice: &LatticeSpec) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(file_name(&cache_key(lattice))))
    }

    /// Cached spectrum for the lattice, diagonalizing on a miss. Unreadable
    /// or mismatched cache files are reported and recomputed.
    pub fn get(&self, lattice: &LatticeSpec) -> Result<ExcitationData, CliError> {
        let key = cache_key(lattice);
        let Some(path) = self.path_for(lattice) else {
            self.misses.fetch_add(1, Ordering::Relaxed);
            return Ok(ExcitationData::solve(lattice, self.cap)?);
        };
        if path.exists() {
            match load(&path) {
                Ok((stored, data)) if stored == key => {
                    self.hits.fetch_add(1, Ordering::Relaxed);
                    return Ok(data);
                }
                Ok(_) => eprintln!("warning: {} holds a different key, recomputing", path.display()),
                Err(e) => eprintln!("warning: {} is unusable ({e}), recomputing", path.display()),
            }
        }
        self.misses.fetch_add(1, Ordering::Relaxed);
        let data = ExcitationData::solve(lattice, self.cap)?;
        store(&path, &key, &data)?;
        Ok(data)
    }
}

fn load(path: &Path) -> Result<(CacheKey, ExcitationData), CliError> {
    Ok(read_spectrum(BufReader::new(File::open(path)?))?)
}

fn store(path: &Path, key: &CacheKey, data: &ExcitationData) -> Result<(), CliError> {
    let dir = path.parent().unwrap_or(Path::new("."));
    let tmp = tempfile::NamedTempFile::new_in(dir)?;
    write_spectrum(BufWriter::new(tmp.as_file()), key, data)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
    Ok(())
}
