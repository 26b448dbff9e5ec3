use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use semigraph::engine::IterationStats;
use semigraph::pagecache::IoStats;

/// Buffered writer to `path`, or stdout when there is none.
pub fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn write_iterations(path: &Path, rows: &[IterationStats]) -> Result<()> {
    let mut out = sink(Some(path))?;
    writeln!(out, "{}", IterationStats::CSV_HEADER)?;
    for r in rows {
        writeln!(out, "{}", r.csv_row())?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_io(path: &Path, io: &IoStats) -> Result<()> {
    let mut out = sink(Some(path))?;
    writeln!(out, "{}", IoStats::CSV_HEADER)?;
    writeln!(out, "{}", io.csv_row())?;
    out.flush()?;
    Ok(())
}
