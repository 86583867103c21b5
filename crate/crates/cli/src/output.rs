//! Output sinks. Every run starts with one header line naming the version,
//! group, seed and budgets; nothing time-dependent is printed.

use std::io::{self, Write};

use anyhow::Result;
use clap::ValueEnum;
use serde::Serialize;

use crate::Verdict;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// CSV tables after `#` comment lines
    Csv,
    /// One JSON object per line
    Json,
    /// Graphviz, for graph-producing commands
    Dot,
}

pub struct Out {
    format: Format,
    buf: String,
    wrote_body: bool,
}

impl Out {
    pub fn new(format: Format, group: &str, seed: u64, max_level: usize, budget: usize, bf_cap: usize) -> Self {
        let version = env!("CARGO_PKG_VERSION");
        let buf = match format {
            Format::Json => {
                let h = serde_json::json!({
                    "prgraph": version,
                    "group": group,
                    "seed": seed,
                    "max_level": max_level,
                    "budget": budget,
                    "brute_force_cap": bf_cap,
                });
                format!("{h}\n")
            }
            _ => {
                let lead = if format == Format::Dot { "//" } else { "#" };
                format!(
                    "{lead} prgraph {version} group={group} seed={seed} max_level={max_level} budget={budget} brute_force_cap={bf_cap}\n"
                )
            }
        };
        Out {
            format,
            buf,
            wrote_body: false,
        }
    }

    pub fn comment(&mut self, line: &str) {
        match self.format {
            Format::Csv => self.buf.push_str(&format!("# {line}\n")),
            Format::Dot => self.buf.push_str(&format!("// {line}\n")),
            Format::Json => self
                .buf
                .push_str(&format!("{}\n", serde_json::json!({ "comment": line }))),
        }
    }

    pub fn table(&mut self, header: &str, rows: &[String]) {
        if self.format == Format::Csv {
            self.buf.push_str(header);
            self.buf.push('\n');
            for r in rows {
                self.buf.push_str(r);
                self.buf.push('\n');
            }
            self.wrote_body = true;
        }
    }

    pub fn record<T: Serialize + ?Sized>(&mut self, value: &T) {
        if self.format == Format::Json {
            let line = serde_json::to_string(value).expect("records serialize");
            self.buf.push_str(&line);
            self.buf.push('\n');
            self.wrote_body = true;
        }
    }

    pub fn dot(&mut self, graph: &str) {
        if self.format == Format::Dot {
            self.buf.push_str(graph);
            if !graph.ends_with('\n') {
                self.buf.push('\n');
            }
            self.wrote_body = true;
        }
    }

    /// Free text emitted in every format (certificates, canonical files).
    pub fn text(&mut self, text: &str) {
        self.buf.push_str(text);
        if !text.ends_with('\n') {
            self.buf.push('\n');
        }
        self.wrote_body = true;
    }

    pub fn finish(self) -> Result<Verdict> {
        self.finish_with(true)
    }

    pub fn finish_with(self, valid: bool) -> Result<Verdict> {
        if !self.wrote_body && self.format == Format::Dot {
            anyhow::bail!("this command has no graph output; use --format csv or json");
        }
        let mut stdout = io::stdout().lock();
        stdout.write_all(self.buf.as_bytes())?;
        stdout.flush()?;
        Ok(if valid { Verdict::Ok } else { Verdict::Invalid })
    }
}
