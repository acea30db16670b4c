use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::BenchError;

/// On-disk stream encodings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StreamFormat {
    /// One decimal number per line; a single leading non-numeric line is
    /// treated as a header.
    #[default]
    Text,
    /// Raw little-endian IEEE-754 doubles, 8 bytes each.
    F64Le,
}

impl FromStr for StreamFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "text" => Ok(StreamFormat::Text),
            "f64le" => Ok(StreamFormat::F64Le),
            other => Err(format!("unknown stream format {other:?} (expected text or f64le)")),
        }
    }
}

impl fmt::Display for StreamFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StreamFormat::Text => "text",
            StreamFormat::F64Le => "f64le",
        })
    }
}

/// Single-pass cursor over a stream file.
pub struct StreamReader {
    path: PathBuf,
    format: StreamFormat,
    inner: BufReader<File>,
    line: u64,
    position: u64,
    buf: String,
    done: bool,
}

/// Opens `path` for one sequential pass.
pub fn load_stream(path: impl AsRef<Path>, format: StreamFormat) -> Result<StreamReader, BenchError> {
    let path = path.as_ref().to_path_buf();
    let file = File::open(&path).map_err(|e| BenchError::io(&path, e))?;
    Ok(StreamReader {
        path,
        format,
        inner: BufReader::with_capacity(1 << 16, file),
        line: 0,
        position: 0,
        buf: String::new(),
        done: false,
    })
}

impl StreamReader {
    fn next_text(&mut self) -> Option<Result<f64, BenchError>> {
        loop {
            self.buf.clear();
            match self.inner.read_line(&mut self.buf) {
                Ok(0) => return None,
                Ok(_) => {}
                Err(e) => return Some(Err(BenchError::io(&self.path, e))),
            }
            self.line += 1;
            let text = self.buf.trim();
            if text.is_empty() {
                continue;
            }
            match text.parse::<f64>() {
                Ok(v) => return Some(Ok(v)),
                Err(_) if self.line == 1 => continue,
                Err(_) => {
                    return Some(Err(BenchError::Parse {
                        line: self.line,
                        text: text.to_string(),
                    }))
                }
            }
        }
    }

    fn next_binary(&mut self) -> Option<Result<f64, BenchError>> {
        let mut word = [0u8; 8];
        let mut filled = 0;
        while filled < 8 {
            match self.inner.read(&mut word[filled..]) {
                Ok(0) => break,
                Ok(k) => filled += k,
                Err(e) if e.kind() == std::io::ErrorKind::Interrupted => {}
                Err(e) => return Some(Err(BenchError::io(&self.path, e))),
            }
        }
        match filled {
            0 => None,
            8 => Some(Ok(f64::from_le_bytes(word))),
            k => Some(Err(BenchError::Truncated {
                len: self.position * 8 + k as u64,
            })),
        }
    }
}

impl Iterator for StreamReader {
    type Item = Result<f64, BenchError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let item = match self.format {
            StreamFormat::Text => self.next_text(),
            StreamFormat::F64Le => self.next_binary(),
        };
        let item = item.map(|r| {
            r.and_then(|v| {
                self.position += 1;
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(BenchError::NonFinite {
                        position: self.position,
                        value: v,
                    })
                }
            })
        });
        if matches!(item, None | Some(Err(_))) {
            self.done = true;
        }
        item
    }
}

/// Writes `values` in `format`. Text output uses shortest round-trip decimals.
pub fn write_stream(
    path: impl AsRef<Path>,
    values: impl IntoIterator<Item = f64>,
    format: StreamFormat,
) -> Result<u64, BenchError> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| BenchError::io(path, e))?;
    let mut out = BufWriter::new(file);
    let mut count = 0u64;
    let result: std::io::Result<()> = (|| {
        for v in values {
            match format {
                StreamFormat::Text => writeln!(out, "{v:?}")?,
                StreamFormat::F64Le => out.write_all(&v.to_le_bytes())?,
            }
            count += 1;
        }
        out.flush()
    })();
    result.map_err(|e| BenchError::io(path, e))?;
    Ok(count)
}
