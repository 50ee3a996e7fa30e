//! Line-delimited JSON reading and writing.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Error, Result};

/// Streaming reader over a JSON-lines file.
///
/// Malformed lines are logged with their line number and skipped; the number
/// skipped is available from [`JsonLines::skipped`] once iteration is done.
/// Only I/O failures end the stream with an error.
pub struct JsonLines<R, T> {
    path: PathBuf,
    lines: std::io::Lines<R>,
    line_no: usize,
    skipped: usize,
    _marker: std::marker::PhantomData<T>,
}

impl<T: DeserializeOwned> JsonLines<BufReader<File>, T> {
    pub fn open(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::new(path, BufReader::new(file)))
    }
}

impl<R: BufRead, T: DeserializeOwned> JsonLines<R, T> {
    pub fn new(path: &Path, reader: R) -> Self {
        JsonLines {
            path: path.to_path_buf(),
            lines: reader.lines(),
            line_no: 0,
            skipped: 0,
            _marker: std::marker::PhantomData,
        }
    }

    pub fn skipped(&self) -> usize {
        self.skipped
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Counts a record rejected by a caller-side check as skipped.
    pub fn reject(&mut self, reason: &str) {
        log::warn!("{}:{}: skipping record: {}", self.path.display(), self.line_no, reason);
        self.skipped += 1;
    }

    pub fn line_no(&self) -> usize {
        self.line_no
    }
}

impl<R: BufRead, T: DeserializeOwned> Iterator for JsonLines<R, T> {
    type Item = Result<T>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let line = match self.lines.next()? {
                Ok(line) => line,
                Err(e) => return Some(Err(Error::io(&self.path, e))),
            };
            self.line_no += 1;
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str(&line) {
                Ok(record) => return Some(Ok(record)),
                Err(e) => {
                    log::warn!(
                        "{}:{}: skipping malformed line: {}",
                        self.path.display(),
                        self.line_no,
                        e
                    );
                    self.skipped += 1;
                }
            }
        }
    }
}

/// Reads a whole JSON-lines file. Malformed lines are fatal here, which is
/// what the later pipeline stages want for files the pipeline itself wrote.
pub fn read_all<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let record = serde_json::from_str(&line).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            message: e.to_string(),
        })?;
        out.push(record);
    }
    Ok(out)
}

pub fn write_all<'a, T, I>(path: &Path, records: I) -> Result<usize>
where
    T: Serialize + 'a,
    I: IntoIterator<Item = &'a T>,
{
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let mut n = 0;
    for record in records {
        serde_json::to_writer(&mut w, record)
            .map_err(|e| Error::io(path, std::io::Error::other(e)))?;
        w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
        n += 1;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(n)
}

/// Pretty JSON with a trailing newline, for reports and manifests.
pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| Error::io(path, std::io::Error::other(e)))?;
    s.push('\n');
    std::fs::write(path, s).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde::Deserialize;

    #[derive(Debug, Deserialize, PartialEq)]
    struct Rec {
        a: u32,
    }

    #[test]
    fn skips_malformed_and_blank_lines() {
        let data = "{\"a\":1}\n\nnot json\n{\"a\":2}\n";
        let mut it: JsonLines<_, Rec> = JsonLines::new(Path::new("mem"), data.as_bytes());
        let got: Vec<Rec> = it.by_ref().map(|r| r.unwrap()).collect();
        assert_eq!(got, vec![Rec { a: 1 }, Rec { a: 2 }]);
        assert_eq!(it.skipped(), 1);
    }
}
