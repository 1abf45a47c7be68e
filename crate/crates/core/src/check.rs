use std::fmt;

use crate::symkernel::Expr;

/// A named exact identity together with its residuals; passes when every
/// residual is zero.
#[derive(Clone, Debug)]
pub struct SymbolicCheck {
    pub name: String,
    pub residual: Vec<Expr>,
}

impl SymbolicCheck {
    pub fn new(name: impl Into<String>, residual: Vec<Expr>) -> Self {
        SymbolicCheck {
            name: name.into(),
            residual,
        }
    }

    pub fn passed(&self) -> bool {
        self.residual.iter().all(Expr::is_zero)
    }

    /// Nonzero residuals joined for display, `None` when the check passes.
    pub fn residual_summary(&self) -> Option<String> {
        let bad: Vec<String> = self
            .residual
            .iter()
            .filter(|r| !r.is_zero())
            .map(ToString::to_string)
            .collect();
        (!bad.is_empty()).then(|| bad.join("; "))
    }
}

impl fmt::Display for SymbolicCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{} {status}", self.name)?;
        if let Some(r) = self.residual_summary() {
            write!(f, " [{r}]")?;
        }
        Ok(())
    }
}
