//! Array files: one decimal `i64` per line, or raw little-endian `i64`s.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::BenchError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Bin,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(Format::Text),
            "bin" => Ok(Format::Bin),
            _ => Err(format!("unknown format `{s}` (expected text or bin)")),
        }
    }
}

pub fn read_array(path: &Path, format: Format) -> Result<Vec<i64>, BenchError> {
    let io_err = |source| BenchError::Io {
        path: path.to_path_buf(),
        source,
    };
    match format {
        Format::Text => {
            let text = fs::read_to_string(path).map_err(io_err)?;
            text.lines()
                .enumerate()
                .filter(|(_, l)| !l.trim().is_empty())
                .map(|(i, l)| {
                    l.trim().parse().map_err(|e| BenchError::Parse {
                        path: path.to_path_buf(),
                        line: i + 1,
                        message: format!("{e}"),
                    })
                })
                .collect()
        }
        Format::Bin => {
            let bytes = fs::read(path).map_err(io_err)?;
            if bytes.len() % 8 != 0 {
                return Err(BenchError::Parse {
                    path: path.to_path_buf(),
                    line: 0,
                    message: format!("{} bytes is not a whole number of 64-bit values", bytes.len()),
                });
            }
            Ok(bytes
                .chunks_exact(8)
                .map(|c| i64::from_le_bytes(c.try_into().unwrap()))
                .collect())
        }
    }
}

pub fn write_array(path: &Path, v: &[i64], format: Format) -> Result<(), BenchError> {
    let bytes = match format {
        Format::Text => {
            let mut s = String::with_capacity(v.len() * 8);
            for x in v {
                s.push_str(&x.to_string());
                s.push('\n');
            }
            s.into_bytes()
        }
        Format::Bin => v.iter().flat_map(|x| x.to_le_bytes()).collect(),
    };
    fs::write(path, bytes).map_err(|source| BenchError::Io {
        path: path.to_path_buf(),
        source,
    })
}
