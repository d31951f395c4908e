//! Append-only JSON-lines store of point counts.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

/// Version tag written into every record; counts from other versions are
/// never reused.
pub const TOOL_VERSION: &str = concat!("hurwitz-core ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountCacheRecord {
    pub curve: String,
    pub p: u64,
    pub s: u32,
    pub n: u64,
    /// Field modulus coefficients, constant term first, comma separated.
    pub modulus: String,
    pub version: String,
}

type Key = (String, u64, u32);

/// Records are read once at open; new ones are appended through a single
/// writer handle.
#[derive(Debug)]
pub struct CountCache {
    path: PathBuf,
    records: HashMap<Key, Vec<CountCacheRecord>>,
    writer: File,
    pub corrupt_lines: usize,
    pub hits: usize,
    pub misses: usize,
}

impl CountCache {
    pub fn open(path: impl AsRef<Path>) -> io::Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut records: HashMap<Key, Vec<CountCacheRecord>> = HashMap::new();
        let mut corrupt_lines = 0;
        if path.exists() {
            let reader = BufReader::new(File::open(&path)?);
            for (lineno, line) in reader.lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                match serde_json::from_str::<CountCacheRecord>(&line) {
                    Ok(rec) => records
                        .entry((rec.curve.clone(), rec.p, rec.s))
                        .or_default()
                        .push(rec),
                    Err(err) => {
                        corrupt_lines += 1;
                        log::warn!("{}:{}: skipping corrupt cache line: {err}", path.display(), lineno + 1);
                    }
                }
            }
        }
        let writer = OpenOptions::new().create(true).append(true).open(&path)?;
        Ok(CountCache {
            path,
            records,
            writer,
            corrupt_lines,
            hits: 0,
            misses: 0,
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// All records read or written so far, in no particular order.
    pub fn records(&self) -> impl Iterator<Item = &CountCacheRecord> {
        self.records.values().flatten()
    }

    /// A cached count whose modulus and version match.
    pub fn lookup(&mut self, curve: &str, p: u64, s: u32, modulus: &str) -> Option<u64> {
        let found = self
            .records
            .get(&(curve.to_string(), p, s))
            .and_then(|recs| {
                recs.iter()
                    .rev()
                    .find(|r| r.modulus == modulus && r.version == TOOL_VERSION)
            })
            .map(|r| r.n);
        if found.is_some() {
            self.hits += 1;
        } else {
            self.misses += 1;
        }
        found
    }

    pub fn append(&mut self, record: CountCacheRecord) -> io::Result<()> {
        let line = serde_json::to_string(&record).map_err(io::Error::other)?;
        writeln!(self.writer, "{line}")?;
        self.writer.flush()?;
        self.records
            .entry((record.curve.clone(), record.p, record.s))
            .or_default()
            .push(record);
        Ok(())
    }
}

pub fn modulus_string(modulus: &[u64]) -> String {
    modulus.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(s: u32, n: u64, modulus: &str) -> CountCacheRecord {
        CountCacheRecord {
            curve: "hurwitz:2:1".into(),
            p: 5,
            s,
            n,
            modulus: modulus.into(),
            version: TOOL_VERSION.into(),
        }
    }

    #[test]
    fn round_trip_and_mismatch() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("counts.jsonl");
        {
            let mut cache = CountCache::open(&path).unwrap();
            cache.append(record(1, 6, "0,1")).unwrap();
            cache.append(record(2, 36, "2,4,1")).unwrap();
        }
        let mut cache = CountCache::open(&path).unwrap();
        assert_eq!(cache.lookup("hurwitz:2:1", 5, 2, "2,4,1"), Some(36));
        assert_eq!(cache.lookup("hurwitz:2:1", 5, 2, "3,0,1"), None);
        assert_eq!((cache.hits, cache.misses), (1, 1));
        let mut all: Vec<_> = cache.records().cloned().collect();
        all.sort_by_key(|r| r.s);
        assert_eq!(all, vec![record(1, 6, "0,1"), record(2, 36, "2,4,1")]);
    }

    #[test]
    fn exact_keys_and_tolerant_reader() {
        let json = serde_json::to_value(record(1, 6, "0,1")).unwrap();
        let mut keys: Vec<_> = json.as_object().unwrap().keys().cloned().collect();
        keys.sort();
        assert_eq!(keys, ["curve", "modulus", "n", "p", "s", "version"]);

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("counts.jsonl");
        let good = serde_json::to_string(&record(1, 6, "0,1")).unwrap();
        let extra = good.replace("\"curve\"", "\"note\":\"x\",\"curve\"");
        std::fs::write(&path, format!("{extra}\nnot json\n{{\"curve\":1}}\n")).unwrap();
        let mut cache = CountCache::open(&path).unwrap();
        assert_eq!(cache.corrupt_lines, 2);
        assert_eq!(cache.lookup("hurwitz:2:1", 5, 1, "0,1"), Some(6));
    }
}
