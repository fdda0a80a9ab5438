use std::fs::File;
use std::io::{self, Write};

use clap::ValueEnum;
use serde_json::Value;

use crate::OutputArgs;

pub const EXIT_PARSE: u8 = 1;
pub const EXIT_NO_SOLUTION: u8 = 2;
pub const EXIT_NO_CONVERGENCE: u8 = 3;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn parse(message: impl ToString) -> Self {
        Failure {
            code: EXIT_PARSE,
            message: message.to_string(),
        }
    }

    pub fn no_solution(message: impl ToString) -> Self {
        Failure {
            code: EXIT_NO_SOLUTION,
            message: message.to_string(),
        }
    }
}

/// Command result in both output shapes plus the exit code.
pub struct Report {
    pub json: Value,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub code: u8,
    /// Printed to stderr after the output.
    pub note: Option<String>,
}

impl Report {
    pub fn new(json: Value, header: Vec<&'static str>, rows: Vec<Vec<String>>) -> Self {
        Report {
            json,
            header,
            rows,
            code: 0,
            note: None,
        }
    }

    pub fn with_exit(mut self, code: u8, note: impl ToString) -> Self {
        self.code = code;
        self.note = Some(note.to_string());
        self
    }

    fn render(&self, format: Format) -> Result<Vec<u8>, Failure> {
        let io_err = |e: &dyn std::fmt::Display| Failure {
            code: EXIT_PARSE,
            message: format!("cannot write output: {e}"),
        };
        match format {
            Format::Json => {
                let mut s = serde_json::to_vec_pretty(&self.json).map_err(|e| io_err(&e))?;
                s.push(b'\n');
                Ok(s)
            }
            Format::Csv => {
                let mut w = csv::WriterBuilder::new()
                    .terminator(csv::Terminator::CRLF)
                    .from_writer(Vec::new());
                w.write_record(&self.header).map_err(|e| io_err(&e))?;
                for r in &self.rows {
                    w.write_record(r).map_err(|e| io_err(&e))?;
                }
                w.into_inner().map_err(|e| io_err(&e))
            }
        }
    }

    pub fn emit(self, out: &OutputArgs) -> Result<u8, Failure> {
        let bytes = self.render(out.format)?;
        let written = match &out.out {
            Some(path) => File::create(path).and_then(|mut f| f.write_all(&bytes)),
            None => io::stdout().lock().write_all(&bytes),
        };
        written.map_err(|e| Failure::parse(format!("cannot write output: {e}")))?;
        if let Some(note) = &self.note {
            eprintln!("{note}");
        }
        Ok(self.code)
    }
}
