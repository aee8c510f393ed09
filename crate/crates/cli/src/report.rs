use std::fmt::Write;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass,
    Inconclusive,
    Refused,
    Fail,
}

impl Status {
    fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Inconclusive => "inconclusive",
            Status::Refused => "refused",
            Status::Fail => "fail",
        }
    }

    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub value: String,
    pub tolerance: String,
    pub anchor: &'static str,
}

impl Check {
    pub fn new(
        name: impl Into<String>,
        status: Status,
        value: impl Into<String>,
        anchor: &'static str,
    ) -> Self {
        Self {
            name: name.into(),
            status,
            value: value.into(),
            tolerance: "exact".into(),
            anchor,
        }
    }

    pub fn tol(mut self, tolerance: impl Into<String>) -> Self {
        self.tolerance = tolerance.into();
        self
    }

    pub fn refused(
        name: impl Into<String>,
        err: impl std::fmt::Display,
        anchor: &'static str,
    ) -> Self {
        Self::new(name, Status::Refused, err.to_string(), anchor).tol("-")
    }
}

/// One job's output: the echoed inputs and the checks in evaluation order.
#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub echo: String,
    pub settings: Vec<(String, String)>,
    pub checks: Vec<Check>,
    pub sections: Vec<Report>,
}

impl Report {
    pub fn new(command: &str, echo: String, settings: Vec<(String, String)>) -> Self {
        Self {
            command: command.into(),
            echo,
            settings,
            checks: Vec::new(),
            sections: Vec::new(),
        }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    fn all_checks(&self) -> Vec<&Check> {
        let mut out: Vec<&Check> = self.checks.iter().collect();
        for s in &self.sections {
            out.extend(s.all_checks());
        }
        out
    }

    /// 0 when every check passes, 1 on any failure or refusal, 2 when the worst is inconclusive.
    pub fn exit_code(&self) -> i32 {
        match self.all_checks().iter().map(|c| c.status).max() {
            None | Some(Status::Pass) => 0,
            Some(Status::Inconclusive) => 2,
            Some(_) => 1,
        }
    }

    fn render_into(&self, out: &mut String, depth: usize) {
        let pad = "  ".repeat(depth);
        let _ = writeln!(out, "{pad}== {} ==", self.command);
        for (k, v) in &self.settings {
            let _ = writeln!(out, "{pad}{k}: {v}");
        }
        if !self.echo.trim().is_empty() {
            let _ = writeln!(out, "{pad}input:");
            for line in self.echo.trim_end().lines() {
                let _ = writeln!(out, "{pad}  | {line}");
            }
        }
        if !self.checks.is_empty() {
            let _ = writeln!(out, "{pad}checks:");
        }
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{pad}  {:<12} {:<width$}  value: {}  tol: {}  ref: {}",
                c.status.label(),
                c.name,
                c.value,
                c.tolerance,
                c.anchor
            );
        }
        for s in &self.sections {
            s.render_into(out, depth + 1);
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out, 0);
        let all = self.all_checks();
        let count = |s: Status| all.iter().filter(|c| c.status == s).count();
        let _ = writeln!(
            out,
            "summary: {} pass, {} fail, {} refused, {} inconclusive",
            count(Status::Pass),
            count(Status::Fail),
            count(Status::Refused),
            count(Status::Inconclusive)
        );
        let _ = writeln!(out, "exit: {}", self.exit_code());
        out
    }
}

pub fn sci(x: f64) -> String {
    format!("{x:.3e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_the_worst_status() {
        let mut r = Report::new("x", String::new(), vec![]);
        assert_eq!(r.exit_code(), 0);
        r.push(Check::new("a", Status::Inconclusive, "", "t"));
        assert_eq!(r.exit_code(), 2);
        r.push(Check::refused("b", "no", "t"));
        assert_eq!(r.exit_code(), 1);
        assert!(r
            .render()
            .ends_with("summary: 0 pass, 0 fail, 1 refused, 1 inconclusive\nexit: 1\n"));
    }
}
