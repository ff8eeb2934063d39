//! On-disk primality cache for the atlas. The directory comes from
//! `AMDFT_CACHE_DIR`, then `XDG_CACHE_HOME/amdft`, then `HOME/.cache/amdft`.

use std::collections::HashMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use amdft_core::ntheory::{is_prime_big, BIG_MR_ROUNDS};
use num_bigint::BigUint;

pub const CACHE_ENV: &str = "AMDFT_CACHE_DIR";

fn header() -> String {
    format!("# amdft primality v1 witnesses={BIG_MR_ROUNDS}")
}

pub fn default_cache_dir() -> Option<PathBuf> {
    if let Some(d) = std::env::var_os(CACHE_ENV) {
        return Some(PathBuf::from(d));
    }
    if let Some(d) = std::env::var_os("XDG_CACHE_HOME") {
        return Some(PathBuf::from(d).join("amdft"));
    }
    std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache").join("amdft"))
}

#[derive(Debug, Default)]
pub struct PrimalityCache {
    path: Option<PathBuf>,
    known: HashMap<BigUint, bool>,
    added: Vec<(BigUint, bool)>,
    pub hits: usize,
}

impl PrimalityCache {
    /// In-memory only.
    pub fn memory() -> Self {
        Self::default()
    }

    /// Load `dir/primality-v1.txt`; a file with another header is ignored.
    pub fn open(dir: &Path) -> io::Result<Self> {
        let path = dir.join("primality-v1.txt");
        let mut known = HashMap::new();
        match fs::read_to_string(&path) {
            Ok(text) => {
                let mut lines = text.lines();
                if lines.next() == Some(header().as_str()) {
                    for l in lines {
                        if let Some((v, p)) = l.split_once(' ') {
                            if let Ok(v) = v.parse::<BigUint>() {
                                known.insert(v, p == "1");
                            }
                        }
                    }
                }
            }
            Err(e) if e.kind() == io::ErrorKind::NotFound => {}
            Err(e) => return Err(e),
        }
        Ok(PrimalityCache { path: Some(path), known, ..Default::default() })
    }

    pub fn is_prime(&mut self, v: &BigUint) -> bool {
        if let Some(&p) = self.known.get(v) {
            self.hits += 1;
            return p;
        }
        let p = is_prime_big(v);
        self.known.insert(v.clone(), p);
        self.added.push((v.clone(), p));
        p
    }

    /// Append new results; rewrites the file when the header is missing.
    pub fn save(&mut self) -> io::Result<()> {
        let Some(path) = &self.path else { return Ok(()) };
        if self.added.is_empty() {
            return Ok(());
        }
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir)?;
        }
        let fresh = fs::read_to_string(path).map(|t| !t.starts_with(&header())).unwrap_or(true);
        if fresh {
            let mut f = io::BufWriter::new(fs::File::create(path)?);
            writeln!(f, "{}", header())?;
            for (v, p) in &self.known {
                writeln!(f, "{v} {}", u8::from(*p))?;
            }
            f.flush()?;
        } else {
            let mut f = io::BufWriter::new(fs::OpenOptions::new().append(true).open(path)?);
            for (v, p) in &self.added {
                writeln!(f, "{v} {}", u8::from(*p))?;
            }
            f.flush()?;
        }
        self.added.clear();
        Ok(())
    }
}
