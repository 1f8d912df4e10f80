use std::fmt;

/// A failed check together with the witness that made it fail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub check: String,
    pub witness: String,
}

impl Diagnostic {
    pub fn new(check: impl Into<String>, witness: impl Into<String>) -> Self {
        Diagnostic {
            check: check.into(),
            witness: witness.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.check, self.witness)
    }
}
