use serde::Serialize;

pub const REPORT_SCHEMA: &str = "manin-report/v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skip => "skip",
        }
    }
}

/// One pipeline step. Wall-clock time stays out of the JSON form so that a
/// fixed seed yields byte-identical reports.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub expected: String,
    pub actual: String,
    #[serde(skip)]
    pub elapsed_ms: f64,
}

impl Check {
    pub fn outcome(name: impl Into<String>, ok: bool, expected: String, actual: String) -> Check {
        Check {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            expected,
            actual,
            elapsed_ms: 0.0,
        }
    }

    pub fn skip(name: impl Into<String>, note: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            status: Status::Skip,
            expected: "-".to_string(),
            actual: note.into(),
            elapsed_ms: 0.0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    pub subject: String,
    pub seed: u64,
    pub samples: usize,
    pub tol: f64,
    pub status: Status,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(command: &str, subject: &str, seed: u64, samples: usize, tol: f64) -> Report {
        Report {
            schema: REPORT_SCHEMA,
            command: command.to_string(),
            subject: subject.to_string(),
            seed,
            samples,
            tol,
            status: Status::Pass,
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        if check.status == Status::Fail {
            self.status = Status::Fail;
        }
        self.checks.push(check);
    }

    pub fn extend(&mut self, checks: Vec<Check>) {
        for c in checks {
            self.push(c);
        }
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }

    pub fn exit_code(&self) -> i32 {
        if self.failed() {
            1
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# manin {} {}\n\n", self.command, self.subject));
        out.push_str(&format!(
            "seed {}, samples {}, tol {:e}\n\n",
            self.seed, self.samples, self.tol
        ));
        out.push_str("| check | status | expected | actual | elapsed |\n");
        out.push_str("|---|---|---|---|---|\n");
        for c in &self.checks {
            out.push_str(&format!(
                "| {} | {} | {} | {} | {:.1}ms |\n",
                cell(&c.name),
                c.status.label(),
                cell(&c.expected),
                cell(&c.actual),
                c.elapsed_ms
            ));
        }
        out.push_str(&format!("\noverall: {}\n", self.status.label()));
        out
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            self.to_json()
        } else {
            self.to_markdown()
        }
    }
}

fn cell(s: &str) -> String {
    s.replace('|', "\\|").replace('\n', "; ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failing_check_flips_the_report_status() {
        let mut r = Report::new("verify", "X", 0, 100, 1e-9);
        r.push(Check::outcome("a", true, "1".into(), "1".into()));
        assert_eq!(r.exit_code(), 0);
        r.push(Check::outcome("b", false, "1".into(), "2".into()));
        assert_eq!(r.status, Status::Fail);
        assert_eq!(r.exit_code(), 1);
    }

    #[test]
    fn skips_do_not_fail_the_report() {
        let mut r = Report::new("verify", "X", 0, 100, 1e-9);
        r.push(Check::skip("s", "not applicable"));
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn json_form_carries_no_timing() {
        let mut r = Report::new("verify", "X", 1, 50, 1e-6);
        r.push(Check {
            name: "a".into(),
            status: Status::Pass,
            expected: "1".into(),
            actual: "1".into(),
            elapsed_ms: 42.0,
        });
        let js = r.to_json();
        assert!(!js.contains("elapsed"));
        assert!(!js.contains("42"));
        assert!(r.to_markdown().contains("42.0ms"));
    }

    #[test]
    fn markdown_escapes_table_breakers() {
        let mut r = Report::new("verify", "X", 0, 100, 1e-9);
        r.push(Check::outcome("a", true, "x | y".into(), "u\nv".into()));
        let md = r.to_markdown();
        assert!(md.contains("x \\| y"));
        assert!(md.contains("u; v"));
    }
}
