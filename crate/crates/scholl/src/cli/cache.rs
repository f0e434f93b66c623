//! Append-only JSON-lines result cache keyed by a SHA-256 of the operation,
//! its canonical inputs and the crate version.

use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::json::canonical;

const FILE: &str = "scholl-cache.jsonl";
const LOCK: &str = "scholl-cache.lock";
/// The log is compacted (one line per key) once it grows past this.
const ROTATE_BYTES: u64 = 64 << 20;

pub fn key(op: &str, inputs: &Value) -> String {
    let doc = json!({"op": op, "inputs": inputs, "version": env!("CARGO_PKG_VERSION")});
    hex::encode(Sha256::digest(canonical(&doc).as_bytes()))
}

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    /// None (with a warning) when the directory cannot be created.
    pub fn open(dir: &Path, warn: &mut dyn Write) -> Option<Cache> {
        match fs::create_dir_all(dir) {
            Ok(()) => Some(Cache { dir: dir.to_path_buf() }),
            Err(e) => {
                let _ = writeln!(warn, "warning: cache directory {} unusable ({e}); running uncached", dir.display());
                None
            }
        }
    }

    fn lock(&self) -> std::io::Result<File> {
        let f = OpenOptions::new().create(true).truncate(false).write(true).open(self.dir.join(LOCK))?;
        f.lock()?;
        Ok(f)
    }

    /// Most recent value stored under `key`; corrupt lines are skipped.
    pub fn get(&self, key: &str, warn: &mut dyn Write) -> Option<Value> {
        let _guard = self.lock().ok()?;
        let file = File::open(self.dir.join(FILE)).ok()?;
        let mut found = None;
        for (lineno, line) in BufReader::new(file).lines().enumerate() {
            let Ok(line) = line else { break };
            match serde_json::from_str::<Value>(&line) {
                Ok(entry) if entry["key"].is_string() && entry.get("value").is_some() => {
                    if entry["key"] == key {
                        found = Some(entry["value"].clone());
                    }
                }
                _ => {
                    let _ = writeln!(warn, "warning: skipping corrupt cache line {}", lineno + 1);
                }
            }
        }
        found
    }

    pub fn put(&self, key: &str, value: &Value, warn: &mut dyn Write) {
        if let Err(e) = self.append(key, value) {
            let _ = writeln!(warn, "warning: cache write failed ({e}); result not cached");
        }
    }

    fn append(&self, key: &str, value: &Value) -> std::io::Result<()> {
        let _guard = self.lock()?;
        let created = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        let line = canonical(&json!({"key": key, "value": value, "created": created})) + "\n";
        let path = self.dir.join(FILE);
        let mut f = OpenOptions::new().create(true).append(true).open(&path)?;
        // One write call per entry keeps lines whole.
        f.write_all(line.as_bytes())?;
        f.sync_data()?;
        if f.metadata()?.len() > ROTATE_BYTES {
            self.compact(&path)?;
        }
        Ok(())
    }

    /// Rewrites the log with the last entry per key, then renames over it.
    fn compact(&self, path: &Path) -> std::io::Result<()> {
        let mut latest: Vec<(String, String)> = Vec::new();
        for line in BufReader::new(File::open(path)?).lines() {
            let line = line?;
            let Ok(entry) = serde_json::from_str::<Value>(&line) else { continue };
            let Some(k) = entry["key"].as_str() else { continue };
            latest.retain(|(key, _)| key != k);
            latest.push((k.to_string(), line));
        }
        let tmp = self.dir.join(format!("{FILE}.tmp"));
        let mut out = File::create(&tmp)?;
        for (_, line) in &latest {
            writeln!(out, "{line}")?;
        }
        out.sync_all()?;
        fs::rename(tmp, path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_corrupt_lines() {
        let dir = tempfile::tempdir().unwrap();
        let mut warn = Vec::new();
        let cache = Cache::open(dir.path(), &mut warn).unwrap();
        let k = key("trace", &json!({"n": 2}));
        assert_eq!(k.len(), 64);
        assert!(cache.get(&k, &mut warn).is_none());
        cache.put(&k, &json!({"v": 1}), &mut warn);
        fs::OpenOptions::new().append(true).open(dir.path().join(FILE)).unwrap().write_all(b"{not json\n").unwrap();
        assert_eq!(cache.get(&k, &mut warn), Some(json!({"v": 1})));
        assert!(String::from_utf8(warn).unwrap().contains("corrupt cache line 2"));
    }

    #[test]
    fn keys_depend_on_operation_and_inputs() {
        let a = key("trace", &json!({"n": 2, "p": 5}));
        assert_eq!(a, key("trace", &json!({"p": 5, "n": 2})));
        assert_ne!(a, key("twist", &json!({"n": 2, "p": 5})));
        assert_ne!(a, key("trace", &json!({"n": 2, "p": 7})));
    }

    #[test]
    fn compaction_keeps_latest() {
        let dir = tempfile::tempdir().unwrap();
        let mut warn = Vec::new();
        let cache = Cache::open(dir.path(), &mut warn).unwrap();
        for v in 0..3 {
            cache.put("a", &json!(v), &mut warn);
            cache.put("b", &json!(10 + v), &mut warn);
        }
        cache.compact(&dir.path().join(FILE)).unwrap();
        let text = fs::read_to_string(dir.path().join(FILE)).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert_eq!(cache.get("a", &mut warn), Some(json!(2)));
        assert_eq!(cache.get("b", &mut warn), Some(json!(12)));
    }
}
