//! Report documents and their JSON, text and markdown renderings.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use cayley::cg::{CohomologyResult, E1Page};
use cayley::weights::{dim_u64, GradedRep};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    Json,
    #[default]
    Text,
    Markdown,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Section {
    Lines { title: String, lines: Vec<String> },
    Table { title: String, header: Vec<String>, rows: Vec<Vec<String>> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema: u32,
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub verdict: Option<String>,
    pub exit_code: i32,
    pub data: Value,
    pub sections: Vec<Section>,
}

impl ReportDocument {
    pub fn new(command: &str) -> Self {
        ReportDocument {
            schema: SCHEMA,
            command: command.to_string(),
            inputs: BTreeMap::new(),
            verdict: None,
            exit_code: crate::EXIT_OK,
            data: Value::Null,
            sections: Vec::new(),
        }
    }

    pub fn input(mut self, k: &str, v: impl ToString) -> Self {
        self.inputs.insert(k.to_string(), v.to_string());
        self
    }

    pub fn lines(&mut self, title: &str, lines: Vec<String>) {
        self.sections.push(Section::Lines { title: title.to_string(), lines });
    }

    pub fn table(&mut self, title: &str, header: &[&str], rows: Vec<Vec<String>>) {
        self.sections.push(Section::Table {
            title: title.to_string(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows,
        });
    }

    pub fn render(&self, f: Format) -> String {
        match f {
            Format::Json => serde_json::to_string_pretty(self).expect("serializable") + "\n",
            Format::Text => self.text(),
            Format::Markdown => self.markdown(),
        }
    }

    fn text(&self) -> String {
        let mut out = String::new();
        for s in &self.sections {
            match s {
                Section::Lines { title, lines } => {
                    if !title.is_empty() {
                        let _ = writeln!(out, "{title}:");
                    }
                    for l in lines {
                        let _ = writeln!(out, "  {l}");
                    }
                }
                Section::Table { title, header, rows } => {
                    let _ = writeln!(out, "{title}:");
                    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
                    for r in rows {
                        for (w, c) in widths.iter_mut().zip(r) {
                            *w = (*w).max(c.chars().count());
                        }
                    }
                    let line = |cells: &[String]| -> String {
                        let padded: Vec<String> =
                            cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}", w = *w)).collect();
                        format!("  {}", padded.join("  ").trim_end())
                    };
                    let _ = writeln!(out, "{}", line(header));
                    for r in rows {
                        let _ = writeln!(out, "{}", line(r));
                    }
                }
            }
        }
        if let Some(v) = &self.verdict {
            let _ = writeln!(out, "verdict: {v}");
        }
        out
    }

    fn markdown(&self) -> String {
        let mut out = format!("# {}\n\n", self.command);
        if !self.inputs.is_empty() {
            for (k, v) in &self.inputs {
                let _ = writeln!(out, "- {k}: `{v}`");
            }
            out.push('\n');
        }
        for s in &self.sections {
            match s {
                Section::Lines { title, lines } => {
                    if !title.is_empty() {
                        let _ = writeln!(out, "## {title}\n");
                    }
                    for l in lines {
                        let _ = writeln!(out, "    {l}");
                    }
                    out.push('\n');
                }
                Section::Table { title, header, rows } => {
                    let _ = writeln!(out, "## {title}\n");
                    let _ = writeln!(out, "| {} |", header.join(" | "));
                    let _ = writeln!(out, "|{}", "---|".repeat(header.len()));
                    for r in rows {
                        let _ = writeln!(out, "| {} |", r.join(" | "));
                    }
                    out.push('\n');
                }
            }
        }
        if let Some(v) = &self.verdict {
            let _ = writeln!(out, "**verdict:** {v}");
        }
        out
    }
}

/// Weights with multiplicities and dimensions, degree by degree.
pub fn graded_json(g: &GradedRep) -> Value {
    let mut out = Vec::new();
    for (d, ws) in g.degrees() {
        for (w, m) in ws {
            out.push(json!({
                "degree": d,
                "weight": w.entries(),
                "multiplicity": m,
                "dimension": dim_u64(&cayley::weights::dim(w)),
            }));
        }
    }
    Value::Array(out)
}

pub fn page_json(p: &E1Page) -> Value {
    let entries: Vec<Value> = p
        .entries
        .iter()
        .map(|((c, t), s)| {
            let ws: Vec<Value> = s.iter().map(|(w, m)| json!({"weight": w.entries(), "multiplicity": m})).collect();
            json!({"column": c, "row": t, "irreps": ws})
        })
        .collect();
    json!({"entries": entries, "linked": p.linked})
}

pub fn result_json(r: &CohomologyResult) -> Value {
    match r {
        CohomologyResult::Determined(g) => json!({"status": "determined", "groups": graded_json(g)}),
        CohomologyResult::Indeterminate(p) => json!({"status": "indeterminate", "page": page_json(p)}),
    }
}

/// Degree-by-degree dimensions, e.g. `H^0 = 7`.
pub fn dims_line(g: &GradedRep) -> String {
    if g.is_zero() {
        return "0".to_string();
    }
    g.dimensions().iter().map(|(d, n)| format!("H^{d}={n}")).collect::<Vec<_>>().join(", ")
}
