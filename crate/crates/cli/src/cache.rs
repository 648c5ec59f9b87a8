use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use isogeny_forge::elliptic::TwoTorsionCurve;
use isogeny_forge::exactnum::BigInt;
use isogeny_forge::reduction::{conductor, local_conductor_exponents};
use serde::{Deserialize, Serialize};

const FILE: &str = "conductors.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConductorEntry {
    pub a: String,
    pub b: String,
    pub conductor: String,
    pub exponents: Vec<(u64, u32)>,
}

/// Conductors of `E_{a,b}` memoized in `<dir>/conductors.json`, keyed by
/// the decimal pair `a,b`. Without a directory nothing is stored.
#[derive(Debug, Default)]
pub struct ConductorCache {
    path: Option<PathBuf>,
    entries: BTreeMap<String, ConductorEntry>,
    dirty: bool,
    hits: usize,
}

impl ConductorCache {
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// Opens the cache in `dir`, creating it if needed. An unreadable or
    /// malformed file is an I/O error.
    pub fn open(dir: &Path) -> io::Result<Self> {
        fs::create_dir_all(dir)?;
        let path = dir.join(FILE);
        let entries = match fs::read_to_string(&path) {
            Ok(text) => serde_json::from_str(&text)
                .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, format!("{}: {e}", path.display())))?,
            Err(e) if e.kind() == io::ErrorKind::NotFound => BTreeMap::new(),
            Err(e) => return Err(e),
        };
        Ok(ConductorCache { path: Some(path), entries, dirty: false, hits: 0 })
    }

    pub fn key(a: &BigInt, b: &BigInt) -> String {
        format!("{a},{b}")
    }

    pub fn hits(&self) -> usize {
        self.hits
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn conductor(&mut self, e: &TwoTorsionCurve) -> isogeny_forge::Result<ConductorEntry> {
        let key = Self::key(e.a(), e.b());
        if let Some(hit) = self.entries.get(&key) {
            self.hits += 1;
            return Ok(hit.clone());
        }
        let model = e.model();
        let entry = ConductorEntry {
            a: e.a().to_string(),
            b: e.b().to_string(),
            conductor: conductor(&model)?.to_string(),
            exponents: local_conductor_exponents(&model),
        };
        self.entries.insert(key, entry.clone());
        self.dirty = true;
        Ok(entry)
    }

    /// Writes new entries back, replacing the file atomically.
    pub fn flush(&mut self) -> io::Result<()> {
        let Some(path) = &self.path else { return Ok(()) };
        if !self.dirty {
            return Ok(());
        }
        let tmp = path.with_extension("json.tmp");
        let text = serde_json::to_string_pretty(&self.entries).map_err(io::Error::other)?;
        fs::write(&tmp, text)?;
        fs::rename(&tmp, path)?;
        self.dirty = false;
        Ok(())
    }
}
