use serde::{Deserialize, Serialize};

/// One failed axiom with the basis elements that witness it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub axiom: String,
    pub witness: Vec<String>,
}

/// Outcome of an exhaustive axiom check. `passed` iff `violations` is empty.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraReport {
    pub passed: bool,
    pub violations: Vec<Violation>,
}

impl AlgebraReport {
    pub fn new() -> Self {
        AlgebraReport { passed: true, violations: Vec::new() }
    }

    /// Records the first witness of `axiom`; later witnesses of the same axiom are dropped.
    pub fn fail(&mut self, axiom: &str, witness: Vec<String>) {
        self.passed = false;
        if !self.violations.iter().any(|v| v.axiom == axiom) {
            self.violations.push(Violation { axiom: axiom.to_string(), witness });
        }
    }

    pub fn merge(&mut self, other: AlgebraReport) {
        for v in other.violations {
            self.fail(&v.axiom, v.witness);
        }
    }

    pub fn failed(&self, axiom: &str) -> bool {
        self.violations.iter().any(|v| v.axiom == axiom)
    }
}

impl std::fmt::Display for AlgebraReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.passed {
            return write!(f, "all axioms hold");
        }
        for v in &self.violations {
            writeln!(f, "{} fails at [{}]", v.axiom, v.witness.join(", "))?;
        }
        Ok(())
    }
}
