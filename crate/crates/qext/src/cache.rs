//! On-disk cache of family L-polynomials, one JSON file per `(q, m)`.

use std::fs;
use std::path::{Path, PathBuf};

use qext_core::LPolynomial;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CachedLpoly {
    pub omega: String,
    pub q: u32,
    pub genus: i64,
    pub coeffs: Vec<i64>,
}

pub fn cache_path(dir: &Path, q: u32, m: u32) -> PathBuf {
    dir.join(format!("lpoly_q{q}_m{m}.json"))
}

/// The cached polynomials if the file exists and lists exactly `omegas`, in order.
/// A stale or unreadable file counts as a miss.
pub fn load(dir: &Path, q: u32, m: u32, omegas: &[String]) -> Option<Vec<LPolynomial>> {
    let text = fs::read_to_string(cache_path(dir, q, m)).ok()?;
    let entries: Vec<CachedLpoly> = serde_json::from_str(&text).ok()?;
    let matches = entries.len() == omegas.len() && entries.iter().zip(omegas).all(|(e, w)| &e.omega == w && e.q == q);
    matches.then(|| entries.into_iter().map(|e| LPolynomial::new(e.q, e.genus, e.coeffs)).collect())
}

pub fn store(dir: &Path, q: u32, m: u32, omegas: &[String], lpolys: &[LPolynomial]) -> CliResult<()> {
    let io = |source| CliError::Io { path: dir.to_path_buf(), source };
    fs::create_dir_all(dir).map_err(io)?;
    let entries: Vec<CachedLpoly> = omegas
        .iter()
        .zip(lpolys)
        .map(|(w, l)| CachedLpoly { omega: w.clone(), q: l.q(), genus: l.genus(), coeffs: l.coeffs().to_vec() })
        .collect();
    let path = cache_path(dir, q, m);
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, serde_json::to_vec(&entries)?).map_err(|source| CliError::Io { path: tmp.clone(), source })?;
    fs::rename(&tmp, &path).map_err(|source| CliError::Io { path, source })
}
