//! Check reports: one line per check, deterministic order.

use std::fmt;

/// Witness tokens kept per check; the total count is always exact.
pub const MAX_WITNESSES: usize = 64;

/// Outcome of a single named check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub id: String,
    pub cases: usize,
    pub violations: usize,
    pub witnesses: Vec<Vec<String>>,
    pub note: Option<String>,
}

impl Check {
    pub fn new(id: impl Into<String>) -> Self {
        Check {
            id: id.into(),
            cases: 0,
            violations: 0,
            witnesses: Vec::new(),
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn case(&mut self) {
        self.cases += 1;
    }

    pub fn fail(&mut self, witness: Vec<String>) {
        self.violations += 1;
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(witness);
        }
    }

    /// Record one case; fail with the witness produced lazily when `ok` is false.
    pub fn expect(&mut self, ok: bool, witness: impl FnOnce() -> Vec<String>) {
        self.case();
        if !ok {
            self.fail(witness());
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    pub fn has_witness(&self, tokens: &[&str]) -> bool {
        self.witnesses
            .iter()
            .any(|w| tokens.iter().all(|t| w.iter().any(|x| x == t)))
    }

    fn verdict(&self) -> &'static str {
        if self.passed() {
            "PASS"
        } else {
            "FAIL"
        }
    }
}

/// Output format for reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Tsv,
}

/// An ordered collection of checks plus free-form info lines.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub info: Vec<String>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: Report) {
        self.info.extend(other.info);
        self.checks.extend(other.checks);
    }

    pub fn info(&mut self, line: impl Into<String>) {
        self.info.push(line.into());
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn get(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn failed_ids(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| !c.passed())
            .map(|c| c.id.as_str())
            .collect()
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        for line in &self.info {
            match format {
                Format::Text => out.push_str(line),
                Format::Tsv => out.push_str(&line.replace(" = ", "\t")),
            }
            out.push('\n');
        }
        for c in &self.checks {
            match format {
                Format::Text => {
                    out.push_str(&format!("CHECK {} {}", c.id, c.verdict()));
                    if let Some(w) = c.witnesses.first() {
                        out.push(' ');
                        out.push_str(&w.join(" "));
                        if c.violations > 1 {
                            out.push_str(&format!(" (+{} more)", c.violations - 1));
                        }
                    }
                    if let Some(n) = &c.note {
                        out.push_str(&format!(" [{n}]"));
                    }
                }
                Format::Tsv => {
                    out.push_str(&format!(
                        "CHECK\t{}\t{}\t{}\t{}\t{}",
                        c.id,
                        c.verdict(),
                        c.cases,
                        c.violations,
                        c.witnesses.first().map(|w| w.join(" ")).unwrap_or_default()
                    ));
                }
            }
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(Format::Text))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_line_shape() {
        let mut c = Check::new("P2");
        c.expect(true, Vec::new);
        c.expect(false, || vec!["F=(1)".into(), "C=(1,3,2)".into()]);
        c.expect(false, || vec!["F=()".into()]);
        let mut r = Report::new();
        r.push(c);
        assert_eq!(
            r.render(Format::Text),
            "CHECK P2 FAIL F=(1) C=(1,3,2) (+1 more)\n"
        );
        assert!(!r.passed());
        assert!(r.checks[0].has_witness(&["F=(1)"]));
    }
}
