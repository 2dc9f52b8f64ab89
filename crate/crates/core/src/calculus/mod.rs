//! Proof checking for the equational calculus of expressions and for the
//! Hilbert system of the linear-time mu-calculus, plus a generator of
//! complement derivations.
//!
//! Derivations are data: a list of steps, each naming a rule, the steps it
//! cites as premises, and for the duality rules a hypothetical block with
//! its own fresh variables. Checking is a single pass; a derivation is
//! accepted when every step is a correct instance of its rule.

mod boolean;
mod generate;
mod json;
mod multl;
mod rll;

use std::collections::BTreeMap;
use std::fmt;

use crate::syntax::{Alphabet, Expr, Formula};

pub use boolean::{bool_taut, lattice_taut, propositional_taut};
pub use generate::derive_complement;
pub use json::{check_proof_text, parse_derivation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rel {
    Eq,
    Leq,
}

/// `lhs = rhs` or `lhs <= rhs`, the latter standing for `lhs + rhs = rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Claim {
    pub rel: Rel,
    pub lhs: Expr,
    pub rhs: Expr,
}

impl Claim {
    pub fn eq(lhs: Expr, rhs: Expr) -> Claim {
        Claim { rel: Rel::Eq, lhs, rhs }
    }

    pub fn leq(lhs: Expr, rhs: Expr) -> Claim {
        Claim { rel: Rel::Leq, lhs, rhs }
    }

    /// The claim as an equation; `l <= r` becomes `l + r = r`.
    pub fn as_eq(&self) -> (Expr, Expr) {
        match self.rel {
            Rel::Eq => (self.lhs.clone(), self.rhs.clone()),
            Rel::Leq => (Expr::sum(self.lhs.clone(), self.rhs.clone()), self.rhs.clone()),
        }
    }

    /// The claim as an inequation, when it is one: `l <= r` itself, or an
    /// equation of the form `l + r = r`.
    pub fn as_leq(&self) -> Option<(Expr, Expr)> {
        match self.rel {
            Rel::Leq => Some((self.lhs.clone(), self.rhs.clone())),
            Rel::Eq => match &self.lhs {
                Expr::Sum(l, r) if r.alpha_eq(&self.rhs) => Some(((**l).clone(), self.rhs.clone())),
                _ => None,
            },
        }
    }

    pub fn alpha_eq(&self, other: &Claim) -> bool {
        self.rel == other.rel && self.lhs.alpha_eq(&other.lhs) && self.rhs.alpha_eq(&other.rhs)
    }

    pub fn is_closed(&self) -> bool {
        self.lhs.is_closed() && self.rhs.is_closed()
    }

    pub fn to_text(&self, alphabet: &Alphabet) -> String {
        let op = match self.rel {
            Rel::Eq => "=",
            Rel::Leq => "<=",
        };
        format!("{} {op} {}", self.lhs.display(alphabet), self.rhs.display(alphabet))
    }
}

/// What a step asserts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Statement {
    Rll(Claim),
    Multl(Formula),
}

impl Statement {
    pub fn alpha_eq(&self, other: &Statement) -> bool {
        match (self, other) {
            (Statement::Rll(a), Statement::Rll(b)) => a.alpha_eq(b),
            (Statement::Multl(a), Statement::Multl(b)) => a.alpha_eq(b),
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub id: String,
    pub claim: Statement,
    pub rule: String,
    /// Metavariable instantiation, as text in the expression grammar (or a
    /// letter name for letter metavariables).
    pub subst: BTreeMap<String, String>,
    pub premises: Vec<String>,
    pub hyp: Option<Hyp>,
}

impl Step {
    pub fn new(id: impl Into<String>, claim: Statement, rule: &str, premises: &[&str]) -> Step {
        Step {
            id: id.into(),
            claim,
            rule: rule.to_string(),
            subst: BTreeMap::new(),
            premises: premises.iter().map(|p| p.to_string()).collect(),
            hyp: None,
        }
    }
}

/// A hypothetical sub-derivation: its first step assumes something about
/// the fresh variables, its last step is what the enclosing rule uses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hyp {
    pub fresh: Vec<String>,
    pub steps: Vec<Step>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum System {
    Rll,
    Multl,
}

/// `Strict` admits only the rules of the calculus proper; `Extended` adds
/// the Boolean decision steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tier {
    Strict,
    Extended,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub system: System,
    pub tier: Tier,
    pub alphabet: Alphabet,
    /// When present, the last step must establish exactly this.
    pub goal: Option<Statement>,
    pub steps: Vec<Step>,
}

impl Derivation {
    pub fn check(&self) -> Verdict {
        match self.system {
            System::Rll => rll::check(self),
            System::Multl => multl::check(self),
        }
    }

    /// The statement of the last top-level step.
    pub fn conclusion(&self) -> Option<&Statement> {
        self.steps.last().map(|s| &s.claim)
    }

    pub fn to_json(&self) -> String {
        json::to_json(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// Every step checks. A nonempty list names the top-level assumptions
    /// the conclusion depends on.
    Accepted {
        assumptions: Vec<String>,
    },
    Rejected {
        step: String,
        reason: String,
    },
}

impl Verdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Verdict::Accepted { .. })
    }

    pub(crate) fn reject(step: &str, reason: impl Into<String>) -> Verdict {
        Verdict::Rejected { step: step.to_string(), reason: reason.into() }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Accepted { assumptions } if assumptions.is_empty() => f.write_str("accepted"),
            Verdict::Accepted { assumptions } => {
                write!(f, "accepted under assumptions: {}", assumptions.join(", "))
            }
            Verdict::Rejected { step, reason } => write!(f, "rejected at step {step}: {reason}"),
        }
    }
}
