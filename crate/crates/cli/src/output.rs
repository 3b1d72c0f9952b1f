//! Tabular output in the three formats.

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

pub struct Table {
    headers: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table { headers: headers.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.headers.len());
        self.rows.push(cells);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text(),
            Format::Csv => self.csv(),
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| {
                        let m: Map<String, Value> =
                            self.headers.iter().cloned().zip(r.iter().map(|c| Value::from(c.as_str()))).collect();
                        Value::Object(m)
                    })
                    .collect();
                serde_json::to_string_pretty(&rows).expect("json")
            }
        }
    }

    fn text(&self) -> String {
        let widths: Vec<usize> = (0..self.headers.len())
            .map(|j| self.rows.iter().map(|r| r[j].len()).chain([self.headers[j].len()]).max().unwrap_or(0))
            .collect();
        let line = |cells: &[String]| {
            let last = cells.len() - 1;
            cells
                .iter()
                .enumerate()
                .map(|(j, c)| if j == last { c.clone() } else { format!("{c:<w$}", w = widths[j]) })
                .collect::<Vec<_>>()
                .join("  ")
        };
        let mut out = vec![line(&self.headers)];
        out.extend(self.rows.iter().map(|r| line(r)));
        out.join("\n")
    }

    fn csv(&self) -> String {
        let quote = |c: &String| {
            if c.contains([',', '"', '\n']) {
                format!("\"{}\"", c.replace('"', "\"\""))
            } else {
                c.clone()
            }
        };
        let mut out = vec![self.headers.iter().map(quote).collect::<Vec<_>>().join(",")];
        out.extend(self.rows.iter().map(|r| r.iter().map(quote).collect::<Vec<_>>().join(",")));
        out.join("\n")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats() {
        let mut t = Table::new(&["d", "tau"]);
        t.row(vec!["0".into(), "1".into()]);
        t.row(vec!["10".into(), "a,b".into()]);
        assert_eq!(t.render(Format::Text), "d   tau\n0   1\n10  a,b");
        assert_eq!(t.render(Format::Csv), "d,tau\n0,1\n10,\"a,b\"");
        assert!(t.render(Format::Json).contains("\"tau\": \"a,b\""));
    }
}
