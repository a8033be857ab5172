use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckEntry {
    pub id: String,
    pub status: Status,
    pub detail: String,
}

/// Outcome of a check suite: one entry per check, failures carry the offending data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub suite: String,
    pub entries: Vec<CheckEntry>,
}

impl Report {
    pub fn new(suite: impl Into<String>) -> Self {
        Report { suite: suite.into(), entries: Vec::new() }
    }

    pub fn pass(&mut self, id: impl Into<String>, detail: impl Into<String>) {
        self.entries.push(CheckEntry { id: id.into(), status: Status::Pass, detail: detail.into() });
    }

    pub fn fail(&mut self, id: impl Into<String>, detail: impl Into<String>) {
        self.entries.push(CheckEntry { id: id.into(), status: Status::Fail, detail: detail.into() });
    }

    /// Records a pass for `id` when no failure with that id was recorded since `mark`.
    pub fn pass_unless_failed(&mut self, mark: usize, id: &str, detail: impl Into<String>) {
        if !self.entries[mark..].iter().any(|e| e.status == Status::Fail && e.id == id) {
            self.pass(id, detail);
        }
    }

    pub fn check(&mut self, ok: bool, id: impl Into<String>, detail: impl Into<String>) {
        if ok {
            self.pass(id, detail)
        } else {
            self.fail(id, detail)
        }
    }

    /// Appends the entries of `other`, prefixing their ids.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for mut e in other.entries {
            e.id = format!("{prefix}.{}", e.id);
            self.entries.push(e);
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckEntry> {
        self.entries.iter().filter(|e| e.status == Status::Fail)
    }

    pub fn is_ok(&self) -> bool {
        self.failures().next().is_none()
    }

    pub fn failure_count(&self) -> usize {
        self.failures().count()
    }

    pub fn pass_count(&self) -> usize {
        self.entries.len() - self.failure_count()
    }

    pub fn mentions(&self, needle: &str) -> bool {
        self.failures().any(|e| e.id.contains(needle) || e.detail.contains(needle))
    }

    /// 0 when every check passed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.is_ok() {
            0
        } else {
            1
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite: {}", self.suite)?;
        for e in &self.entries {
            let tag = match e.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
            };
            if e.detail.is_empty() {
                writeln!(f, "{tag} {}", e.id)?;
            } else {
                writeln!(f, "{tag} {} {}", e.id, e.detail)?;
            }
        }
        write!(f, "summary: {} passed, {} failed", self.pass_count(), self.failure_count())
    }
}
