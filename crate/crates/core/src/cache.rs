//! On-disk cache of the coefficients `a_n` of `log F`.
//!
//! ```text
//! Fcoeffs v1 trunc=N
//! 1 1
//! 2 -1
//! ...
//! ```
//!
//! Files are written to a temporary sibling and renamed into place, so a
//! reader never observes a partial file.

use std::io::Write;
use std::path::Path;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactnum::{format_rat, parse_rat, Rat};
use crate::taubes::FCoefficients;

const HEADER_PREFIX: &str = "Fcoeffs v1 trunc=";

pub fn render_f_cache(f: &FCoefficients) -> String {
    let mut out = format!("{HEADER_PREFIX}{}\n", f.trunc());
    for n in 1..=f.trunc() {
        let a = f.log_coeff(n).expect("n within trunc");
        out.push_str(&format!("{n} {}\n", format_rat(a)));
    }
    out
}

pub fn write_f_cache(f: &FCoefficients, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(render_f_cache(f).as_bytes())
        .map_err(io_err)?;
    tmp.as_file().sync_all().map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

pub fn parse_f_cache(text: &str, path: &Path) -> Result<FCoefficients> {
    let bad = |line: usize, message: String| Error::CacheFormat {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| bad(1, "empty file".into()))?;
    let trunc: u64 = header
        .strip_prefix(HEADER_PREFIX)
        .and_then(|n| n.trim().parse().ok())
        .ok_or_else(|| {
            bad(
                1,
                format!("expected header {HEADER_PREFIX:?}<N>, found {header:?}"),
            )
        })?;

    let mut log_f = vec![Rat::zero()];
    for (idx, line) in lines.enumerate() {
        let lineno = idx + 2;
        if line.trim().is_empty() {
            continue;
        }
        let (n, a) = line
            .split_once(' ')
            .ok_or_else(|| bad(lineno, format!("expected \"n a_n\", found {line:?}")))?;
        let n: u64 = n
            .parse()
            .map_err(|_| bad(lineno, format!("bad index {n:?}")))?;
        if n != log_f.len() as u64 {
            return Err(bad(
                lineno,
                format!("expected index {}, found {n}", log_f.len()),
            ));
        }
        let a = parse_rat(a).map_err(|e| bad(lineno, e.to_string()))?;
        log_f.push(a);
    }
    if log_f.len() as u64 != trunc + 1 {
        return Err(bad(
            text.lines().count(),
            format!(
                "header promises {trunc} coefficients, found {}",
                log_f.len() - 1
            ),
        ));
    }
    FCoefficients::from_log(log_f)
}

pub fn read_f_cache(path: impl AsRef<Path>) -> Result<FCoefficients> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_f_cache(&text, path)
}
