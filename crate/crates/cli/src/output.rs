//! Output plumbing: format selection, full-precision number formatting and
//! the data sink (stdout or `--out` path). Diagnostics go to stderr through
//! the logger; data streams never mix with them.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
    /// Aligned table; `table1` only.
    Text,
}

/// 17 significant digits: enough to round-trip any f64.
pub fn g17(x: f64) -> String {
    format!("{x:.16e}")
}

pub enum Sink {
    Stdout(io::Stdout),
    File(BufWriter<File>, PathBuf),
}

impl Sink {
    pub fn open(out: Option<&Path>) -> Result<Self, CliError> {
        match out {
            None => Ok(Sink::Stdout(io::stdout())),
            Some(path) => {
                let file = File::create(path).map_err(|e| {
                    CliError::config(format!("cannot create {}: {e}", path.display()))
                })?;
                Ok(Sink::File(BufWriter::new(file), path.to_path_buf()))
            }
        }
    }

    pub fn finish(self) -> Result<(), CliError> {
        if let Sink::File(mut writer, path) = self {
            writer
                .flush()
                .map_err(|e| CliError::io(format!("flush {}: {e}", path.display())))?;
        }
        Ok(())
    }
}

impl Write for Sink {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        match self {
            Sink::Stdout(s) => s.write(buf),
            Sink::File(f, _) => f.write(buf),
        }
    }

    fn flush(&mut self) -> io::Result<()> {
        match self {
            Sink::Stdout(s) => s.flush(),
            Sink::File(f, _) => f.flush(),
        }
    }
}

/// Serializes a JSON value followed by a newline.
pub fn write_json(sink: &mut dyn Write, value: &serde_json::Value) -> Result<(), CliError> {
    serde_json::to_writer(&mut *sink, value).map_err(|e| CliError::io(e.to_string()))?;
    writeln!(sink).map_err(|e| CliError::io(e.to_string()))
}
