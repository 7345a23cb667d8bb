use serde::Serialize;

/// Failures kept per report; later ones are counted but not stored.
const MAX_RECORDED: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub input: String,
    pub lhs: String,
    pub rhs: String,
}

/// Outcome of checking one law on a batch of samples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub axiom: String,
    pub samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub failures: Vec<Failure>,
    #[serde(skip)]
    pub failure_count: usize,
}

impl Report {
    pub fn new(axiom: impl Into<String>) -> Self {
        Report { axiom: axiom.into(), samples: 0, seed: None, failures: Vec::new(), failure_count: 0 }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }

    /// Records one sample; `lhs == rhs` is the law being checked.
    pub fn check<T: PartialEq + ToString>(&mut self, input: impl ToString, lhs: &T, rhs: &T) -> bool {
        self.samples += 1;
        if lhs == rhs {
            return true;
        }
        self.fail(input, lhs.to_string(), rhs.to_string());
        false
    }

    /// Records one sample that failed outright.
    pub fn fail(&mut self, input: impl ToString, lhs: String, rhs: String) {
        self.failure_count += 1;
        if self.failures.len() < MAX_RECORDED {
            self.failures.push(Failure { input: input.to_string(), lhs, rhs });
        }
    }

    /// Counts a sample without comparing anything (the check was a pass).
    pub fn pass(&mut self) {
        self.samples += 1;
    }

    pub fn first_failure(&self) -> Option<&Failure> {
        self.failures.first()
    }
}

pub fn all_passed(reports: &[Report]) -> bool {
    reports.iter().all(Report::passed)
}
