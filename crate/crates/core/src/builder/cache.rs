use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::model::Seconds;

/// One observed travel time, as stored on disk:
/// `{"o":origin,"d":destination,"t":departure_epoch,"s":seconds}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub o: usize,
    pub d: usize,
    pub t: i64,
    pub s: Seconds,
}

pub(crate) fn read_entries(path: &Path) -> io::Result<Vec<CacheEntry>> {
    let reader = BufReader::new(File::open(path)?);
    let mut entries = Vec::new();
    for (line_no, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let entry = serde_json::from_str(&line).map_err(|e| {
            io::Error::new(
                io::ErrorKind::InvalidData,
                format!("{}:{}: {e}", path.display(), line_no + 1),
            )
        })?;
        entries.push(entry);
    }
    Ok(entries)
}

/// Append-only store of provider responses keyed by
/// `(origin, destination, departure_time)`.
///
/// All writes go through `&mut self`, so sharing one cache between workers
/// requires external locking.
#[derive(Debug, Default)]
pub struct FetchCache {
    entries: HashMap<(usize, usize, i64), Seconds>,
    sink: Option<BufWriter<File>>,
}

impl FetchCache {
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// Opens (creating if needed) a cache file and loads what it holds.
    pub fn open(path: &Path) -> io::Result<Self> {
        let mut entries = HashMap::new();
        if path.exists() {
            for e in read_entries(path)? {
                entries.insert((e.o, e.d, e.t), e.s);
            }
        }
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        Ok(Self {
            entries,
            sink: Some(BufWriter::new(file)),
        })
    }

    pub fn get(&self, origin: usize, destination: usize, departure_time: i64) -> Option<Seconds> {
        self.entries.get(&(origin, destination, departure_time)).copied()
    }

    pub fn contains(&self, origin: usize, destination: usize, departure_time: i64) -> bool {
        self.entries.contains_key(&(origin, destination, departure_time))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Records an observation. Keys already present are not rewritten.
    pub fn insert(&mut self, entry: CacheEntry) -> io::Result<()> {
        if self.entries.insert((entry.o, entry.d, entry.t), entry.s).is_some() {
            return Ok(());
        }
        if let Some(sink) = self.sink.as_mut() {
            serde_json::to_writer(&mut *sink, &entry)?;
            sink.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn flush(&mut self) -> io::Result<()> {
        match self.sink.as_mut() {
            Some(sink) => sink.flush(),
            None => Ok(()),
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = CacheEntry> + '_ {
        self.entries.iter().map(|(&(o, d, t), &s)| CacheEntry { o, d, t, s })
    }
}

impl Drop for FetchCache {
    fn drop(&mut self) {
        let _ = self.flush();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn persists_and_reloads() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.jsonl");
        {
            let mut c = FetchCache::open(&path).unwrap();
            c.insert(CacheEntry { o: 0, d: 1, t: 10, s: 600 }).unwrap();
            c.insert(CacheEntry { o: 1, d: 0, t: 10, s: 700 }).unwrap();
            c.insert(CacheEntry { o: 1, d: 0, t: 10, s: 700 }).unwrap();
        }
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert_eq!(text.lines().next().unwrap(), r#"{"o":0,"d":1,"t":10,"s":600}"#);
        let c = FetchCache::open(&path).unwrap();
        assert_eq!(c.get(1, 0, 10), Some(700));
        assert_eq!(c.get(1, 0, 11), None);
    }

    #[test]
    fn malformed_line_is_reported_with_position() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.jsonl");
        std::fs::write(&path, "{\"o\":0,\"d\":1,\"t\":1,\"s\":2}\nnot json\n").unwrap();
        let err = FetchCache::open(&path).unwrap_err();
        assert!(err.to_string().contains(":2:"));
    }
}
