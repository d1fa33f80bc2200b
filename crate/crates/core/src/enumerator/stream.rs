use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use super::{beta, BetaRecord, EnumError, Mode, ScanConfig};

/// A stream value together with the length of the run of equal values that
/// ends at it. The run length is an observation, not a convergence claim.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamItem {
    pub record: BetaRecord,
    pub stable_for: u64,
}

/// Append-only JSON-lines store of computed records. One file may hold
/// records for several `(n, mode)` keys.
#[derive(Debug)]
pub struct LimitCache {
    path: PathBuf,
    file: File,
}

/// Records for `(n, mode)` in `path`, which must be exactly `m = 0, 1, ...`
/// in order. A missing file is an empty cache.
pub fn read_cache(path: &Path, n: usize, mode: Mode) -> Result<Vec<u64>, EnumError> {
    let corrupt = |reason: String| EnumError::CorruptCache {
        path: path.display().to_string(),
        reason,
    };
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(e.into()),
    };
    let mut values = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: BetaRecord =
            serde_json::from_str(&line).map_err(|e| corrupt(format!("line {}: {e}", idx + 1)))?;
        if rec.n != n || rec.mode != mode {
            continue;
        }
        if rec.m != values.len() as u64 {
            return Err(corrupt(format!(
                "line {}: expected m={} for n={n} mode={mode}, found m={}",
                idx + 1,
                values.len(),
                rec.m
            )));
        }
        if rec.value > rec.m {
            return Err(corrupt(format!(
                "line {}: value {} exceeds m={}",
                idx + 1,
                rec.value,
                rec.m
            )));
        }
        values.push(rec.value);
    }
    Ok(values)
}

impl LimitCache {
    /// Opens `path` for `(n, mode)` and returns the cached values. With
    /// `restart`, records of this key and any unreadable lines are dropped
    /// first; otherwise a damaged cache is refused.
    pub fn open(
        path: &Path,
        n: usize,
        mode: Mode,
        restart: bool,
    ) -> Result<(Self, Vec<u64>), EnumError> {
        let values = if restart {
            rewrite_without(path, n, mode)?;
            Vec::new()
        } else {
            read_cache(path, n, mode)?
        };
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        Ok((
            LimitCache {
                path: path.to_path_buf(),
                file,
            },
            values,
        ))
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn append(&mut self, record: &BetaRecord) -> Result<(), EnumError> {
        let mut line = serde_json::to_string(record).expect("record serializes");
        line.push('\n');
        self.file.write_all(line.as_bytes())?;
        self.file.flush()?;
        Ok(())
    }
}

fn rewrite_without(path: &Path, n: usize, mode: Mode) -> Result<(), EnumError> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(()),
        Err(e) => return Err(e.into()),
    };
    let kept: String = text
        .lines()
        .filter(|line| {
            matches!(serde_json::from_str::<BetaRecord>(line), Ok(r) if r.n != n || r.mode != mode)
        })
        .map(|line| format!("{line}\n"))
        .collect();
    std::fs::write(path, kept)?;
    Ok(())
}

/// Yields `beta(n, m)` for `m = 0, 1, 2, ...` without end. Cached values are
/// replayed without recomputation; new values are appended to the cache
/// before they are yielded.
pub struct LimitStream {
    n: usize,
    mode: Mode,
    config: ScanConfig,
    cache: Option<LimitCache>,
    cached: Vec<u64>,
    next_m: u64,
    last: Option<u64>,
    run: u64,
    failed: bool,
}

pub fn f_stream(n: usize, mode: Mode, config: ScanConfig) -> Result<LimitStream, EnumError> {
    LimitStream::new(n, mode, config, None)
}

impl LimitStream {
    pub fn new(
        n: usize,
        mode: Mode,
        config: ScanConfig,
        cache: Option<(LimitCache, Vec<u64>)>,
    ) -> Result<Self, EnumError> {
        if n == 0 {
            return Err(EnumError::ZeroVariables);
        }
        let mode = mode.validate()?;
        let (cache, cached) = match cache {
            Some((c, v)) => (Some(c), v),
            None => (None, Vec::new()),
        };
        Ok(LimitStream {
            n,
            mode,
            config,
            cache,
            cached,
            next_m: 0,
            last: None,
            run: 0,
            failed: false,
        })
    }

    pub fn with_cache(
        n: usize,
        mode: Mode,
        config: ScanConfig,
        path: &Path,
        restart: bool,
    ) -> Result<Self, EnumError> {
        let opened = LimitCache::open(path, n, mode, restart)?;
        LimitStream::new(n, mode, config, Some(opened))
    }

    fn step(&mut self) -> Result<StreamItem, EnumError> {
        let m = self.next_m;
        let value = match self.cached.get(m as usize) {
            Some(&v) => v,
            None => {
                let v = beta(self.n, m, self.mode, &self.config)?;
                let rec = BetaRecord {
                    n: self.n,
                    mode: self.mode,
                    m,
                    value: v,
                };
                if let Some(cache) = self.cache.as_mut() {
                    cache.append(&rec)?;
                }
                v
            }
        };
        self.run = if self.last == Some(value) {
            self.run + 1
        } else {
            1
        };
        self.last = Some(value);
        self.next_m += 1;
        Ok(StreamItem {
            record: BetaRecord {
                n: self.n,
                mode: self.mode,
                m,
                value,
            },
            stable_for: self.run,
        })
    }
}

impl Iterator for LimitStream {
    type Item = Result<StreamItem, EnumError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        let item = self.step();
        self.failed = item.is_err();
        Some(item)
    }
}
