use std::fmt::Write as _;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub check_name: String,
    pub anchor: Option<String>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl CheckResult {
    pub fn pass(name: impl Into<String>, anchor: Option<String>) -> Self {
        CheckResult {
            check_name: name.into(),
            anchor,
            status: Status::Pass,
            witness: None,
        }
    }

    pub fn fail(
        name: impl Into<String>,
        anchor: Option<String>,
        witness: impl Into<String>,
    ) -> Self {
        CheckResult {
            check_name: name.into(),
            anchor,
            status: Status::Fail,
            witness: Some(witness.into()),
        }
    }

    /// Pass when `witness` is `None`.
    pub fn from_witness(
        name: impl Into<String>,
        anchor: Option<String>,
        witness: Option<String>,
    ) -> Self {
        match witness {
            None => CheckResult::pass(name, anchor),
            Some(w) => CheckResult::fail(name, anchor, w),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub model: String,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Plain,
    Latex,
    Json,
}

impl Report {
    pub fn passed(&self) -> usize {
        self.checks
            .iter()
            .filter(|c| c.status == Status::Pass)
            .count()
    }

    pub fn failed(&self) -> usize {
        self.checks.len() - self.passed()
    }

    pub fn all_passed(&self) -> bool {
        self.failed() == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.check_name == name)
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Plain => self.plain(),
            ReportFormat::Latex => self.latex(),
            ReportFormat::Json => self.json(),
        }
    }

    fn plain(&self) -> String {
        let mut out = format!("model {} (seed {})\n", self.model, self.seed);
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
            };
            let _ = write!(out, "{tag}  {}", c.check_name);
            if let Some(a) = &c.anchor {
                let _ = write!(out, "  [{a}]");
            }
            out.push('\n');
            if let Some(w) = &c.witness {
                let _ = writeln!(out, "      witness: {w}");
            }
        }
        let _ = writeln!(out, "{} passed, {} failed", self.passed(), self.failed());
        out
    }

    fn latex(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "% model {} (seed {})", self.model, self.seed);
        out.push_str("\\begin{tabular}{lll}\n\\hline\ncheck & anchor & status \\\\\n\\hline\n");
        for c in &self.checks {
            let status = match c.status {
                Status::Pass => "pass".to_string(),
                Status::Fail => format!(
                    "\\textbf{{fail}}: \\texttt{{{}}}",
                    tex(c.witness.as_deref().unwrap_or(""))
                ),
            };
            let _ = writeln!(
                out,
                "{} & {} & {} \\\\",
                tex(&c.check_name),
                tex(c.anchor.as_deref().unwrap_or("")),
                status
            );
        }
        out.push_str("\\hline\n\\end{tabular}\n");
        let _ = writeln!(out, "% {} passed, {} failed", self.passed(), self.failed());
        out
    }

    fn json(&self) -> String {
        #[derive(Serialize)]
        struct Doc<'a> {
            model: &'a str,
            seed: u64,
            passed: usize,
            failed: usize,
            checks: &'a [CheckResult],
        }
        let doc = Doc {
            model: &self.model,
            seed: self.seed,
            passed: self.passed(),
            failed: self.failed(),
            checks: &self.checks,
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
        s.push('\n');
        s
    }
}

fn tex(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '\\' => out.push_str("\\textbackslash{}"),
            '&' | '%' | '$' | '#' | '_' | '{' | '}' => {
                out.push('\\');
                out.push(ch);
            }
            '^' => out.push_str("\\^{}"),
            '~' => out.push_str("\\~{}"),
            _ => out.push(ch),
        }
    }
    out
}
