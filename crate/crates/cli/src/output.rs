use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::Context;
use serde::Serialize;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Opens `path`, or stdout when `None`.
pub fn sink(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

#[derive(Serialize)]
struct Envelope<'a, C: Serialize, R: Serialize> {
    tool: &'static str,
    version: &'static str,
    config: &'a C,
    result: &'a R,
}

pub fn write_json<C: Serialize, R: Serialize>(w: &mut dyn Write, config: &C, result: &R) -> anyhow::Result<()> {
    let env = Envelope {
        tool: "smp",
        version: VERSION,
        config,
        result,
    };
    serde_json::to_writer_pretty(&mut *w, &env)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// CSV with the run configuration in leading `#` comment lines.
pub fn write_csv<C: Serialize>(
    w: &mut dyn Write,
    config: &C,
    header: &str,
    rows: impl IntoIterator<Item = String>,
) -> anyhow::Result<()> {
    writeln!(w, "# tool: smp {VERSION}")?;
    writeln!(w, "# config: {}", serde_json::to_string(config)?)?;
    writeln!(w, "{header}")?;
    for row in rows {
        writeln!(w, "{row}")?;
    }
    w.flush()?;
    Ok(())
}
