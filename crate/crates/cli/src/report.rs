use hodgelab::Backend;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Case {
    pub id: String,
    pub pass: bool,
    pub residual: f64,
    pub seed: Option<u64>,
    /// A computed dimension or count, for cases that report one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip)]
    pub ill_conditioned: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub max_residual: f64,
    pub all_pass: bool,
}

/// Deterministic in (campaign, dims, seeds, backend). Timing is kept out.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub campaign: String,
    pub backend: Backend,
    pub dims: Vec<usize>,
    pub cases: Vec<Case>,
    pub summary: Summary,
}

impl Report {
    pub fn new(campaign: &str, backend: Backend, dims: Vec<usize>, cases: Vec<Case>) -> Self {
        let passed = cases.iter().filter(|c| c.pass).count();
        let max_residual = cases.iter().map(|c| c.residual).fold(0.0, f64::max);
        let summary = Summary {
            total: cases.len(),
            passed,
            failed: cases.len() - passed,
            max_residual,
            all_pass: passed == cases.len(),
        };
        Report {
            campaign: campaign.to_string(),
            backend,
            dims,
            cases,
            summary,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.summary.all_pass
    }

    pub fn ill_conditioned(&self) -> bool {
        self.cases.iter().any(|c| c.ill_conditioned)
    }

    /// 0 when every case passes, 3 when a case hit an ill-conditioned
    /// spectrum, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            0
        } else if self.ill_conditioned() {
            3
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn case(&self, id: &str) -> Option<&Case> {
        self.cases.iter().find(|c| c.id == id)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn case(id: &str, pass: bool, residual: f64) -> Case {
        Case {
            id: id.into(),
            pass,
            residual,
            seed: Some(1),
            value: None,
            error: None,
            ill_conditioned: false,
        }
    }

    #[test]
    fn summary_counts() {
        let r = Report::new("x", Backend::Exact, vec![4], vec![case("a", true, 0.0), case("b", false, 2.5)]);
        assert_eq!((r.summary.passed, r.summary.failed), (1, 1));
        assert_eq!(r.summary.max_residual, 2.5);
        assert_eq!(r.exit_code(), 1);
    }

    #[test]
    fn json_schema_keys() {
        let r = Report::new("x", Backend::Float, vec![6], vec![case("a", true, 0.0)]);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        for key in ["campaign", "cases", "summary"] {
            assert!(v.get(key).is_some());
        }
        let c = &v["cases"][0];
        for key in ["id", "pass", "residual", "seed"] {
            assert!(c.get(key).is_some());
        }
        assert!(c.get("value").is_none());
        assert_eq!(v["backend"], "float");
    }
}
