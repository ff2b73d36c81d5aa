//! Reports rendered either for people or as `key=value` lines.

use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Human,
    Kv,
}

#[derive(Debug, Clone, PartialEq)]
enum Item {
    Heading(String),
    Fact { key: String, value: String },
    Check { name: String, passed: bool, detail: String },
    Note { key: String, text: String },
    Table { key: String, headers: Vec<String>, rows: Vec<Vec<String>> },
}

/// An ordered, deterministic report. Checks decide the exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    command: String,
    items: Vec<Item>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut r = Report { command: command.to_string(), items: Vec::new() };
        r.fact("tool", "rigidity");
        r.fact("version", env!("CARGO_PKG_VERSION"));
        r.fact("command", command);
        r
    }

    pub fn command(&self) -> &str {
        &self.command
    }

    pub fn heading(&mut self, title: impl Into<String>) {
        self.items.push(Item::Heading(title.into()));
    }

    pub fn fact(&mut self, key: impl Into<String>, value: impl ToString) {
        self.items.push(Item::Fact { key: key.into(), value: value.to_string() });
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.items.push(Item::Check { name: name.into(), passed, detail: detail.into() });
    }

    /// Informational text that never affects the exit status.
    pub fn note(&mut self, key: impl Into<String>, text: impl Into<String>) {
        self.items.push(Item::Note { key: key.into(), text: text.into() });
    }

    pub fn table(&mut self, key: impl Into<String>, headers: &[&str], rows: Vec<Vec<String>>) {
        self.items.push(Item::Table {
            key: key.into(),
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows,
        });
    }

    pub fn all_passed(&self) -> bool {
        self.items.iter().all(|i| !matches!(i, Item::Check { passed: false, .. }))
    }

    pub fn failures(&self) -> Vec<(&str, &str)> {
        self.items
            .iter()
            .filter_map(|i| match i {
                Item::Check { name, passed: false, detail } => Some((name.as_str(), detail.as_str())),
                _ => None,
            })
            .collect()
    }

    /// Value of the last fact with this key.
    pub fn get(&self, key: &str) -> Option<&str> {
        self.items.iter().rev().find_map(|i| match i {
            Item::Fact { key: k, value } if k == key => Some(value.as_str()),
            _ => None,
        })
    }

    pub fn render(&self, format: Format, color: bool) -> String {
        match format {
            Format::Human => self.render_human(color),
            Format::Kv => self.render_kv(),
        }
    }

    fn render_kv(&self) -> String {
        let mut out = String::new();
        for item in &self.items {
            match item {
                Item::Heading(_) => {}
                Item::Fact { key, value } => {
                    let _ = writeln!(out, "{key}={value}");
                }
                Item::Check { name, passed, detail } => {
                    let _ = writeln!(out, "check.{name}={}", if *passed { "pass" } else { "fail" });
                    if !detail.is_empty() {
                        let _ = writeln!(out, "check.{name}.detail={detail}");
                    }
                }
                Item::Note { key, text } => {
                    let _ = writeln!(out, "note.{key}={text}");
                }
                Item::Table { key, headers, rows } => {
                    for (r, row) in rows.iter().enumerate() {
                        let fields: Vec<String> = headers.iter().zip(row).map(|(h, v)| format!("{h}={v}")).collect();
                        let _ = writeln!(out, "{key}.{r} {}", fields.join(" "));
                    }
                }
            }
        }
        let _ = writeln!(out, "status={}", if self.all_passed() { "pass" } else { "fail" });
        out
    }

    fn render_human(&self, color: bool) -> String {
        let paint = |text: &str, code: &str| if color { format!("\x1b[{code}m{text}\x1b[0m") } else { text.to_string() };
        let mut out = String::new();
        for item in &self.items {
            match item {
                Item::Heading(t) => {
                    let _ = writeln!(out, "\n{}", paint(t, "1"));
                }
                Item::Fact { key, value } => {
                    let _ = writeln!(out, "  {key}: {value}");
                }
                Item::Check { name, passed, detail } => {
                    let tag = if *passed { paint("PASS", "32") } else { paint("FAIL", "31") };
                    if detail.is_empty() {
                        let _ = writeln!(out, "  [{tag}] {name}");
                    } else {
                        let _ = writeln!(out, "  [{tag}] {name}: {detail}");
                    }
                }
                Item::Note { key, text } => {
                    let _ = writeln!(out, "  note ({key}): {text}");
                }
                Item::Table { headers, rows, .. } => {
                    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
                    for row in rows {
                        for (w, v) in widths.iter_mut().zip(row) {
                            *w = (*w).max(v.chars().count());
                        }
                    }
                    let line = |cells: &[String]| {
                        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
                        format!("  {}", padded.join("  ").trim_end())
                    };
                    let _ = writeln!(out, "{}", line(headers));
                    for row in rows {
                        let _ = writeln!(out, "{}", line(row));
                    }
                }
            }
        }
        let status = if self.all_passed() { paint("all checks passed", "32") } else { paint("some checks FAILED", "31") };
        let _ = writeln!(out, "\n{status}");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kv_lines() {
        let mut r = Report::new("theta");
        r.fact("seed", 3);
        r.check("residue", true, "");
        r.table("row", &["n", "k"], vec![vec!["4".into(), "1".into()]]);
        let kv = r.render(Format::Kv, false);
        assert!(kv.contains("seed=3\n"));
        assert!(kv.contains("check.residue=pass\n"));
        assert!(kv.contains("row.0 n=4 k=1\n"));
        assert!(kv.ends_with("status=pass\n"));
        assert_eq!(r.get("seed"), Some("3"));
    }

    #[test]
    fn failure_status_and_no_color() {
        let mut r = Report::new("verify");
        r.check("x", false, "witness 1");
        assert!(!r.all_passed());
        let h = r.render(Format::Human, false);
        assert!(h.contains("[FAIL] x: witness 1"));
        assert!(!h.contains('\x1b'));
        assert!(r.render(Format::Human, true).contains('\x1b'));
    }
}
