use serde::Serialize;
use serde_json::Value;
use std::collections::BTreeMap;
use std::time::{Duration, Instant};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// A measured value with no pass/fail meaning.
    Recorded,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Recorded => "recorded",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub description: String,
    /// Short label of the claim being checked.
    pub anchor: String,
    pub status: Status,
    pub values: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    /// Wall time; left out of serialised reports unless requested, so that
    /// reports are reproducible byte for byte.
    #[serde(skip)]
    pub runtime: Duration,
}

impl Check {
    pub fn new(name: impl Into<String>, anchor: &str, description: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            description: description.into(),
            anchor: anchor.to_string(),
            status: Status::Recorded,
            values: BTreeMap::new(),
            tolerance: None,
            runtime: Duration::ZERO,
        }
    }

    pub fn value(mut self, key: &str, v: impl Serialize) -> Self {
        self.values
            .insert(key.to_string(), serde_json::to_value(v).unwrap_or(Value::Null));
        self
    }

    pub fn tolerance(mut self, tol: f64) -> Self {
        self.tolerance = Some(tol);
        self
    }

    pub fn status(mut self, status: Status) -> Self {
        self.status = status;
        self
    }

    pub fn pass_if(self, ok: bool) -> Self {
        self.status(Status::from_bool(ok))
    }

    pub fn timed(mut self, since: Instant) -> Self {
        self.runtime = since.elapsed();
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>) -> Self {
        Self {
            suite: suite.into(),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    /// Orders checks by name.
    pub fn finish(mut self) -> Self {
        self.checks.sort_by(|a, b| a.name.cmp(&b.name));
        self
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn passed(&self) -> bool {
        self.failures().next().is_none()
    }

    /// 0 when nothing failed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn to_json(&self, timings: bool) -> String {
        let mut v = serde_json::to_value(self).expect("report serialises");
        if timings {
            if let Some(checks) = v.get_mut("checks").and_then(Value::as_array_mut) {
                for (c, check) in checks.iter_mut().zip(&self.checks) {
                    c["runtime_ms"] = Value::from(check.runtime.as_secs_f64() * 1e3);
                }
            }
        }
        serde_json::to_string_pretty(&v).expect("report serialises")
    }

    /// `suite,name,status,anchor,tolerance,values` with values as compact
    /// JSON.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("suite,name,status,anchor,tolerance,values\n");
        for c in &self.checks {
            let values = serde_json::to_string(&c.values).expect("values serialise");
            out.push_str(&format!(
                "{},{},{},{},{},\"{}\"\n",
                self.suite,
                c.name,
                c.status.as_str(),
                c.anchor,
                c.tolerance.map_or(String::new(), |t| t.to_string()),
                values.replace('"', "\"\"")
            ));
        }
        out
    }

    /// One line per check.
    pub fn summary_lines(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!("[{}] {}: {}\n", c.status.as_str(), c.name, c.description));
        }
        out.push_str(&format!(
            "{}: {} pass, {} fail, {} recorded\n",
            self.suite,
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Recorded)
        ));
        out
    }
}
