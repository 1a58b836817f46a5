pub mod heat;
pub mod solve;
pub mod sweep;

use std::io::Write;
use std::path::Path;

use locsolve::error::Result;

/// Write to the given path, or to stdout when absent.
pub fn write_output(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, content)?,
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(content.as_bytes())?;
        }
    }
    Ok(())
}

/// Write to the given path, or to stderr when absent.
pub fn write_diagnostic(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, content)?,
        None => eprint!("{content}"),
    }
    Ok(())
}

/// Deduplicate while keeping first-seen order.
pub fn dedup_preserving<T: PartialEq + Copy>(items: &[T]) -> Vec<T> {
    let mut out: Vec<T> = Vec::new();
    for &item in items {
        if !out.contains(&item) {
            out.push(item);
        }
    }
    out
}
