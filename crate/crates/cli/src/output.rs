use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{Command, Format};

/// A flat table for CSV output.
#[derive(Debug, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

/// What a subcommand produced: a JSON body, optionally a table view of it,
/// and whether every check it ran passed.
pub struct Outcome {
    pub ok: bool,
    pub body: Value,
    pub table: Option<Table>,
    pub default_format: Format,
}

impl Outcome {
    pub fn json(ok: bool, body: impl Serialize) -> Self {
        Outcome {
            ok,
            body: serde_json::to_value(body).expect("serialisable"),
            table: None,
            default_format: Format::Json,
        }
    }

    pub fn with_table(mut self, table: Table) -> Self {
        self.table = Some(table);
        self
    }

    pub fn csv_by_default(mut self) -> Self {
        self.default_format = Format::Csv;
        self
    }
}

pub fn num(x: f64) -> String {
    format!("{x:.15e}")
}

fn header(cmd: &Command) -> Value {
    json!({
        "tool": "susyxxz",
        "version": susyxxz::VERSION,
        "parallel": susyxxz::is_parallel(),
        "threads": crate::threads(),
        "config": cmd,
    })
}

pub fn emit(cmd: &Command, out: &Outcome, format: Option<Format>, path: Option<&Path>) -> io::Result<()> {
    let mut w: Box<dyn Write> = match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let format = format.unwrap_or(out.default_format);
    match (format, &out.table) {
        (Format::Csv, Some(table)) => {
            let head = header(cmd);
            writeln!(w, "# susyxxz {}", susyxxz::VERSION)?;
            writeln!(w, "# config: {}", head["config"])?;
            if let Some(meta) = out.body.get("metadata") {
                writeln!(w, "# metadata: {meta}")?;
            }
            let mut csv = csv::Writer::from_writer(&mut w);
            csv.write_record(&table.columns)?;
            for row in &table.rows {
                csv.write_record(row)?;
            }
            csv.flush()?;
        }
        (Format::Csv, None) => {
            return Err(io::Error::new(
                io::ErrorKind::InvalidInput,
                "this subcommand has no CSV form; use --format json",
            ))
        }
        (Format::Json, _) => {
            let doc = json!({ "header": header(cmd), "ok": out.ok, "result": out.body });
            serde_json::to_writer_pretty(&mut w, &doc)?;
            writeln!(w)?;
        }
    }
    w.flush()
}
