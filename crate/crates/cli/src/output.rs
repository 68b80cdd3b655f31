//! CSV and JSON artifacts with run metadata.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde_json::{Map, Value};

/// Formats with 12 significant digits.
pub fn sig12(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    format!("{v:.11e}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub content: String,
}

pub struct Metadata {
    pub x_max: f64,
    pub n_points: usize,
    pub cutoff: usize,
    pub seed: u64,
    pub command: String,
}

impl Metadata {
    fn comment_lines(&self) -> String {
        format!(
            "# ongate {} command={}\n# grid=[-{},{}] n_points={} cutoff={} seed={}\n",
            env!("CARGO_PKG_VERSION"),
            self.command,
            self.x_max,
            self.x_max,
            self.n_points,
            self.cutoff,
            self.seed
        )
    }

    pub fn csv(&self, name: &str, header: &[&str], rows: &[Vec<String>]) -> Artifact {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header).expect("in-memory write");
        for r in rows {
            w.write_record(r).expect("in-memory write");
        }
        let body = String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 records");
        Artifact { name: format!("{name}.csv"), content: self.comment_lines() + &body }
    }

    pub fn json(&self, name: &str, mut fields: Map<String, Value>) -> Artifact {
        fields.insert("version".into(), env!("CARGO_PKG_VERSION").into());
        fields.insert("command".into(), self.command.clone().into());
        fields.insert("x_max".into(), self.x_max.into());
        fields.insert("n_points".into(), self.n_points.into());
        fields.insert("cutoff".into(), self.cutoff.into());
        fields.insert("seed".into(), self.seed.into());
        let text = serde_json::to_string_pretty(&Value::Object(fields)).expect("finite values");
        Artifact { name: format!("{name}.json"), content: text + "\n" }
    }
}

/// Writes every artifact into `dir`, or concatenates them on stdout.
pub fn emit(artifacts: &[Artifact], dir: Option<&Path>) -> io::Result<()> {
    match dir {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            for a in artifacts {
                fs::write(dir.join(&a.name), &a.content)?;
            }
            Ok(())
        }
        None => {
            let mut out = io::stdout().lock();
            for (i, a) in artifacts.iter().enumerate() {
                if i > 0 {
                    writeln!(out)?;
                }
                out.write_all(a.content.as_bytes())?;
            }
            out.flush()
        }
    }
}
