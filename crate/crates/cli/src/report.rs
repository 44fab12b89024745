//! REPORT v1: one block per stage, `key value` lines, no nesting.
//!
//! ```text
//! REPORT v1
//! subject codomain walking_arrow
//! stage wedgeq
//! status fail
//! error NoDiagonalLift
//! witness no cocartesian lift of the diagonal of 1 out of the fiber terminal
//! end
//! result fail
//! exit 1
//! ```

use std::fmt::{self, Write as _};
use std::time::Duration;

use eqfib_core::htpy::LawCheck;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    Validate,
    Analyze,
    Wedge,
    Wedgeq,
    Synthesize,
    Verify,
    Correspond,
}

impl Stage {
    pub const ALL: [Stage; 7] = [
        Stage::Validate,
        Stage::Analyze,
        Stage::Wedge,
        Stage::Wedgeq,
        Stage::Synthesize,
        Stage::Verify,
        Stage::Correspond,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Validate => "validate",
            Stage::Analyze => "analyze",
            Stage::Wedge => "wedge",
            Stage::Wedgeq => "wedgeq",
            Stage::Synthesize => "synthesize",
            Stage::Verify => "verify",
            Stage::Correspond => "correspond",
        }
    }

    pub fn from_name(s: &str) -> Option<Stage> {
        Stage::ALL.into_iter().find(|st| st.name() == s)
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// The stage does not apply to this kind of input.
    Skip,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skip => "skip",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub law: String,
    pub instances: u64,
    pub passed: bool,
    /// Reported but not part of the verdict.
    pub informational: bool,
    pub failure: Option<String>,
}

impl Check {
    pub fn law(c: &LawCheck) -> Self {
        Check {
            law: c.law.to_string(),
            instances: c.instances,
            passed: c.passed(),
            informational: false,
            failure: c.failure.clone(),
        }
    }
    pub fn new(law: impl Into<String>, instances: u64, failure: Option<String>) -> Self {
        Check {
            law: law.into(),
            instances,
            passed: failure.is_none(),
            informational: false,
            failure,
        }
    }
    pub fn info(mut self) -> Self {
        self.informational = true;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub stage: Stage,
    pub status: Status,
    pub checks: Vec<Check>,
    /// `key value` facts, in insertion order.
    pub facts: Vec<(String, String)>,
    /// Error kind of a failed stage.
    pub error: Option<String>,
    pub witness: Vec<String>,
    pub budget_exceeded: bool,
    pub time: Option<Duration>,
}

impl Verdict {
    pub fn new(stage: Stage) -> Self {
        Verdict {
            stage,
            status: Status::Pass,
            checks: vec![],
            facts: vec![],
            error: None,
            witness: vec![],
            budget_exceeded: false,
            time: None,
        }
    }

    pub fn skip(stage: Stage, why: &str) -> Self {
        let mut v = Verdict::new(stage);
        v.status = Status::Skip;
        v.fact("reason", why);
        v
    }

    pub fn fact(&mut self, key: &str, value: impl fmt::Display) {
        self.facts.push((key.to_string(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.facts
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    /// Record a check; a failing non-informational check fails the stage
    /// with its witness.
    pub fn check(&mut self, c: Check) {
        if !c.passed && !c.informational && self.status != Status::Fail {
            self.status = Status::Fail;
            self.error.get_or_insert_with(|| "LawFails".into());
            self.witness.push(format!(
                "{}: {}",
                c.law,
                c.failure.clone().unwrap_or_default()
            ));
        }
        self.checks.push(c);
    }

    pub fn fail(&mut self, kind: &str, witness: impl Into<String>) {
        self.status = Status::Fail;
        self.error = Some(kind.to_string());
        self.witness.push(witness.into());
    }

    pub fn budget(&mut self, witness: impl Into<String>) {
        self.fail("BudgetExceeded", witness);
        self.budget_exceeded = true;
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub subject: String,
    pub verdicts: Vec<Verdict>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(Verdict::passed)
    }

    pub fn verdict(&self, stage: Stage) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.stage == stage)
    }

    /// 0 pass, 1 verdict failure, 3 budget exceeded.
    pub fn exit_code(&self) -> i32 {
        if self.verdicts.iter().any(|v| v.budget_exceeded) {
            3
        } else if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn render(&self, timing: bool) -> String {
        let mut out = String::from("REPORT v1\n");
        let _ = writeln!(out, "subject {}", self.subject);
        for v in &self.verdicts {
            let _ = writeln!(out, "stage {}", v.stage);
            let _ = writeln!(out, "status {}", v.status.name());
            if let Some(e) = &v.error {
                let _ = writeln!(out, "error {e}");
            }
            for w in &v.witness {
                let _ = writeln!(out, "witness {}", one_line(w));
            }
            for c in &v.checks {
                let tag = match (c.passed, c.informational) {
                    (true, _) => "pass",
                    (false, true) => "note",
                    (false, false) => "fail",
                };
                let _ = writeln!(out, "check {tag} {} {}", c.instances, c.law);
                if let (false, Some(f)) = (c.passed, &c.failure) {
                    let _ = writeln!(out, "counterexample {}", one_line(f));
                }
            }
            for (k, val) in &v.facts {
                let _ = writeln!(out, "fact {k} {}", one_line(val));
            }
            if let (true, Some(t)) = (timing, v.time) {
                let _ = writeln!(out, "time_ms {}", t.as_millis());
            }
            out.push_str("end\n");
        }
        let _ = writeln!(
            out,
            "result {}",
            if self.passed() { "pass" } else { "fail" }
        );
        let _ = writeln!(out, "exit {}", self.exit_code());
        out
    }
}

fn one_line(s: &str) -> String {
    s.replace('\n', " ")
}
