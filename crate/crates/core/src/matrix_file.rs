//! Matrix file format.
//!
//! ```text
//! lenctl-matrix v1 text          <- or `binary`
//! blank <eps>
//! vocab 4
//! I
//! am
//! a
//! <eps>
//! slots 2
//! <V space-separated log-probs>  <- one line per slot (text)
//! ```
//!
//! Values are written as `{:.16e}` (17 significant digits), which round-trips
//! every `f64`; `-inf` is spelled `-inf`. The binary twin shares the header
//! and follows the `slots` line with `S * V` little-endian `f64`s.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::tokens::{LogProbMatrix, Vocabulary};

pub const MAGIC: &str = "lenctl-matrix v1";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Encoding {
    #[default]
    Text,
    Binary,
}

/// A vocabulary and matrix as stored on disk.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixFile {
    pub vocab: Vocabulary,
    pub matrix: LogProbMatrix,
}

impl MatrixFile {
    pub fn new(vocab: Vocabulary, matrix: LogProbMatrix) -> Result<Self> {
        matrix.check_vocab(&vocab)?;
        Ok(MatrixFile { vocab, matrix })
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_bytes(&fs::read(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>, encoding: Encoding) -> Result<()> {
        let mut f = fs::File::create(path)?;
        f.write_all(&self.to_bytes(encoding))?;
        Ok(())
    }

    pub fn to_bytes(&self, encoding: Encoding) -> Vec<u8> {
        let mut out = String::new();
        let tag = match encoding {
            Encoding::Text => "text",
            Encoding::Binary => "binary",
        };
        out.push_str(&format!("{MAGIC} {tag}\n"));
        out.push_str(&format!("blank {}\n", self.vocab.token(self.vocab.blank_id())));
        out.push_str(&format!("vocab {}\n", self.vocab.len()));
        for t in self.vocab.tokens() {
            out.push_str(t);
            out.push('\n');
        }
        out.push_str(&format!("slots {}\n", self.matrix.slots()));
        let mut bytes = out.into_bytes();
        match encoding {
            Encoding::Text => {
                for s in 0..self.matrix.slots() {
                    let line = self
                        .matrix
                        .row(s)
                        .iter()
                        .map(|v| format_value(*v))
                        .collect::<Vec<_>>()
                        .join(" ");
                    bytes.extend_from_slice(line.as_bytes());
                    bytes.push(b'\n');
                }
            }
            Encoding::Binary => {
                for v in self.matrix.values() {
                    bytes.extend_from_slice(&v.to_le_bytes());
                }
            }
        }
        bytes
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut cursor = 0usize;
        let mut line_no = 0usize;
        let mut next_line = || -> Result<(usize, &str)> {
            let rest = &bytes[cursor..];
            let end = rest
                .iter()
                .position(|&b| b == b'\n')
                .ok_or_else(|| Error::parse(line_no + 1, "unexpected end of header"))?;
            let line =
                std::str::from_utf8(&rest[..end]).map_err(|_| Error::parse(line_no + 1, "header is not UTF-8"))?;
            cursor += end + 1;
            line_no += 1;
            Ok((line_no, line))
        };

        let (n, first) = next_line()?;
        let encoding = match first.strip_prefix(MAGIC).map(str::trim_start) {
            Some("text") => Encoding::Text,
            Some("binary") => Encoding::Binary,
            _ => return Err(Error::parse(n, format!("expected `{MAGIC} text|binary`"))),
        };
        let (n, line) = next_line()?;
        let blank = keyed(n, line, "blank")?.to_string();
        let (n, line) = next_line()?;
        let size: usize = parse_num(n, keyed(n, line, "vocab")?)?;
        let mut tokens = Vec::with_capacity(size);
        for _ in 0..size {
            let (_, t) = next_line()?;
            tokens.push(t.to_string());
        }
        let (n, line) = next_line()?;
        let slots: usize = parse_num(n, keyed(n, line, "slots")?)?;
        let body_start = cursor;
        let header_lines = line_no;

        let vocab = Vocabulary::with_blank_token(tokens, &blank).map_err(|e| Error::parse(n, e.to_string()))?;
        let expected = slots
            .checked_mul(size)
            .ok_or_else(|| Error::parse(n, "matrix too large"))?;
        let body = &bytes[body_start..];
        let values = match encoding {
            Encoding::Binary => {
                if body.len() != expected * 8 {
                    return Err(Error::parse(
                        header_lines + 1,
                        format!("binary body holds {} bytes, expected {}", body.len(), expected * 8),
                    ));
                }
                body.chunks_exact(8)
                    .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
                    .collect()
            }
            Encoding::Text => {
                let text =
                    std::str::from_utf8(body).map_err(|_| Error::parse(header_lines + 1, "body is not UTF-8"))?;
                let mut values = Vec::with_capacity(expected);
                let mut rows = 0;
                for (i, line) in text.lines().enumerate() {
                    let n = header_lines + 1 + i;
                    if line.trim().is_empty() {
                        continue;
                    }
                    let before = values.len();
                    for tok in line.split_whitespace() {
                        values.push(
                            tok.parse::<f64>()
                                .map_err(|_| Error::parse(n, format!("bad value `{tok}`")))?,
                        );
                    }
                    if values.len() - before != size {
                        return Err(Error::parse(
                            n,
                            format!("row has {} values, expected {size}", values.len() - before),
                        ));
                    }
                    rows += 1;
                }
                if rows != slots {
                    return Err(Error::parse(
                        header_lines + 1,
                        format!("found {rows} rows, expected {slots}"),
                    ));
                }
                values
            }
        };
        let matrix =
            LogProbMatrix::new(slots, size, values).map_err(|e| Error::parse(header_lines + 1, e.to_string()))?;
        Ok(MatrixFile { vocab, matrix })
    }
}

fn format_value(v: f64) -> String {
    if v == f64::NEG_INFINITY {
        "-inf".to_string()
    } else {
        format!("{v:.16e}")
    }
}

fn keyed<'a>(n: usize, line: &'a str, key: &str) -> Result<&'a str> {
    line.strip_prefix(key)
        .and_then(|r| r.strip_prefix(' '))
        .filter(|r| !r.is_empty())
        .ok_or_else(|| Error::parse(n, format!("expected `{key} <value>`")))
}

fn parse_num(n: usize, s: &str) -> Result<usize> {
    s.parse()
        .map_err(|_| Error::parse(n, format!("expected an integer, got `{s}`")))
}
