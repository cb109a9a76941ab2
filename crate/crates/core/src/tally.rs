use serde::Serialize;

/// Pass/fail counter for one named family of checks.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub name: String,
    pub checked: u64,
    pub passed: u64,
}

impl Tally {
    pub fn new(name: &str) -> Self {
        Tally {
            name: name.to_string(),
            ..Default::default()
        }
    }

    pub fn record(&mut self, ok: bool) {
        self.checked += 1;
        self.passed += ok as u64;
    }

    pub fn merge(&mut self, other: &Tally) {
        self.checked += other.checked;
        self.passed += other.passed;
    }

    pub fn pass(&self) -> bool {
        self.checked == self.passed
    }
}
