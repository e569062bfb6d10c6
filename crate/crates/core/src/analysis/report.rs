use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Measured for information; does not affect the verdict.
    Info,
    NotApplicable,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Info => "info",
            CheckStatus::NotApplicable => "n/a",
        })
    }
}

/// One line of a validation report.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckLine {
    pub name: String,
    pub status: CheckStatus,
    /// Point where the check came closest to failing.
    pub witness: Option<f64>,
    /// Distance from the failure threshold; negative when failed.
    pub margin: Option<f64>,
    pub detail: String,
}

impl CheckLine {
    pub fn new(name: impl Into<String>, passed: bool) -> Self {
        let status = if passed { CheckStatus::Pass } else { CheckStatus::Fail };
        Self { name: name.into(), status, witness: None, margin: None, detail: String::new() }
    }

    pub fn with_status(mut self, status: CheckStatus) -> Self {
        self.status = status;
        self
    }

    pub fn witness(mut self, w: f64) -> Self {
        self.witness = Some(w);
        self
    }

    pub fn margin(mut self, m: f64) -> Self {
        self.margin = Some(m);
        self
    }

    pub fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = d.into();
        self
    }

    pub fn failed(&self) -> bool {
        self.status == CheckStatus::Fail
    }
}

impl fmt::Display for CheckLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opt = |x: Option<f64>| x.map_or_else(|| "-".to_string(), |v| format!("{v:.6e}"));
        write!(
            f,
            "{:<28} {:<4} witness={} margin={}",
            self.name,
            self.status,
            opt(self.witness),
            opt(self.margin)
        )?;
        if !self.detail.is_empty() {
            write!(f, " {}", self.detail)?;
        }
        Ok(())
    }
}
