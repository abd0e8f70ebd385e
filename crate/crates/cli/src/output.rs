use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use sidon_core::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_NEGATIVE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_LIMIT: u8 = 3;

/// A failed run: exit code and message.
#[derive(Debug)]
pub struct Fail {
    pub code: u8,
    pub msg: String,
}

impl Fail {
    pub fn usage(msg: impl Into<String>) -> Self {
        Fail { code: EXIT_USAGE, msg: msg.into() }
    }
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::TooLarge(_) => EXIT_LIMIT,
            Error::NotSidon => EXIT_NEGATIVE,
            _ => EXIT_USAGE,
        };
        Fail { code, msg: e.to_string() }
    }
}

impl From<io::Error> for Fail {
    fn from(e: io::Error) -> Self {
        Fail::usage(e.to_string())
    }
}

impl From<csv::Error> for Fail {
    fn from(e: csv::Error) -> Self {
        Fail::usage(e.to_string())
    }
}

impl From<serde_json::Error> for Fail {
    fn from(e: serde_json::Error) -> Self {
        Fail::usage(e.to_string())
    }
}

pub type CliResult<T> = Result<T, Fail>;

pub fn read_file(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| Fail::usage(format!("{}: {e}", path.display())))
}

/// Destination of the main output.
pub struct Sink {
    inner: Box<dyn Write>,
}

impl Sink {
    pub fn open(out: &Option<PathBuf>) -> CliResult<Self> {
        let inner: Box<dyn Write> = match out {
            Some(path) => Box::new(BufWriter::new(
                File::create(path).map_err(|e| Fail::usage(format!("{}: {e}", path.display())))?,
            )),
            None => Box::new(io::stdout().lock()),
        };
        Ok(Sink { inner })
    }

    pub fn writer(&mut self) -> &mut dyn Write {
        &mut self.inner
    }

    pub fn into_inner(self) -> Box<dyn Write> {
        self.inner
    }

    pub fn flush(&mut self) -> CliResult<()> {
        Ok(self.inner.flush()?)
    }
}

/// Writes `text` in one go, adding a final newline when missing.
pub fn emit(out: &Option<PathBuf>, text: &str) -> CliResult<()> {
    let mut sink = Sink::open(out)?;
    sink.writer().write_all(text.as_bytes())?;
    if !text.ends_with('\n') {
        sink.writer().write_all(b"\n")?;
    }
    sink.flush()
}

pub fn emit_json<T: Serialize>(out: &Option<PathBuf>, value: &T) -> CliResult<()> {
    emit(out, &serde_json::to_string_pretty(value)?)
}

/// Logs the resolved configuration to stderr and, with an output file, to
/// `<out>.config.json`.
pub fn log_config(out: &Option<PathBuf>, config: &serde_json::Value) -> CliResult<()> {
    eprintln!("config: {config}");
    if let Some(path) = out {
        let mut name = path.clone().into_os_string();
        name.push(".config.json");
        std::fs::write(PathBuf::from(name), serde_json::to_string_pretty(config)? + "\n")?;
    }
    Ok(())
}
