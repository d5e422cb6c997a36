use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use walshlab::io::{write_grid, write_spectrum, Table};
use walshlab::{Grid, Spectrum};

use crate::error::CliResult;

/// Destination of the primary output: a file or stdout.
pub struct Sink<'a> {
    pub out: Option<&'a Path>,
    pub json: bool,
}

impl Sink<'_> {
    fn writer(&self) -> CliResult<Box<dyn Write>> {
        Ok(match self.out {
            Some(path) => Box::new(BufWriter::new(File::create(path)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }

    /// Whether stdout is free for summaries.
    pub fn stdout_free(&self) -> bool {
        self.out.is_some()
    }

    pub fn table(&self, table: &Table) -> CliResult<()> {
        let mut w = self.writer()?;
        if self.json {
            serde_json::to_writer_pretty(&mut w, table)?;
            writeln!(w)?;
        } else {
            w.write_all(table.to_csv().as_bytes())?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn grid(&self, f: &Grid, meta: &[(&str, String)]) -> CliResult<()> {
        if self.json {
            let mut t = Table::new(["cell", "value"]);
            for (x, v) in f.values().iter().enumerate() {
                t.push(vec![x.into(), (*v).into()]);
            }
            return self.table(&t);
        }
        let mut w = self.writer()?;
        write_grid(&mut w, f, meta)?;
        w.flush()?;
        Ok(())
    }

    pub fn spectrum(&self, s: &Spectrum) -> CliResult<()> {
        if self.json {
            let mut t = Table::new(["index", "coefficient"]);
            for (i, c) in s.coeffs().iter().enumerate() {
                t.push(vec![i.into(), (*c).into()]);
            }
            return self.table(&t);
        }
        let mut w = self.writer()?;
        write_spectrum(&mut w, s)?;
        w.flush()?;
        Ok(())
    }

    /// Secondary output: stdout when the primary went to a file, else stderr.
    pub fn summary(&self, text: &str) -> CliResult<()> {
        if self.stdout_free() {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        } else {
            io::stderr().write_all(text.as_bytes())?;
        }
        Ok(())
    }
}
