//! Signal files: one `re im` line per sample, decimal text that round-trips.

use std::io::{self, BufRead, Write};

use num_complex::Complex64;

#[derive(Debug, thiserror::Error)]
pub enum SignalError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Read samples; blank lines and `#` comments are skipped.
pub fn read_signal(r: impl BufRead) -> Result<Vec<Complex64>, SignalError> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let mut it = t.split_whitespace();
        let mut next = |what| -> Result<f64, SignalError> {
            let tok = it.next().ok_or_else(|| SignalError::Parse { line: i + 1, msg: format!("missing {what} part") })?;
            tok.parse().map_err(|_| SignalError::Parse { line: i + 1, msg: format!("bad number `{tok}`") })
        };
        let re = next("real")?;
        let im = next("imaginary")?;
        if it.next().is_some() {
            return Err(SignalError::Parse { line: i + 1, msg: "expected two numbers".into() });
        }
        out.push(Complex64::new(re, im));
    }
    Ok(out)
}

/// Shortest decimal that parses back to the same double.
pub fn write_signal<W: Write + ?Sized>(w: &mut W, x: &[Complex64]) -> io::Result<()> {
    for v in x {
        writeln!(w, "{} {}", v.re, v.im)?;
    }
    Ok(())
}
