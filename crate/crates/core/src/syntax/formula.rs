use std::collections::BTreeSet;
use std::fmt;

use super::binding::{self, Binding};

/// Linear-time mu-calculus formula in negation normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Bot,
    Top,
    Prop(String),
    NegProp(String),
    Var(String),
    Or(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    Mu(String, Box<Formula>),
    Nu(String, Box<Formula>),
}

impl Formula {
    pub fn prop(p: impl Into<String>) -> Formula {
        Formula::Prop(p.into())
    }

    pub fn neg_prop(p: impl Into<String>) -> Formula {
        Formula::NegProp(p.into())
    }

    pub fn var(x: impl Into<String>) -> Formula {
        Formula::Var(x.into())
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn next(f: Formula) -> Formula {
        Formula::Next(Box::new(f))
    }

    pub fn mu(x: impl Into<String>, body: Formula) -> Formula {
        Formula::Mu(x.into(), Box::new(body))
    }

    pub fn nu(x: impl Into<String>, body: Formula) -> Formula {
        Formula::Nu(x.into(), Box::new(body))
    }

    /// `l -> r`, i.e. `~l | r`.
    pub fn implies(l: &Formula, r: Formula) -> Formula {
        Formula::or(l.negate(), r)
    }

    /// `(l -> r) & (r -> l)`.
    pub fn iff(l: &Formula, r: &Formula) -> Formula {
        Formula::and(Formula::implies(l, r.clone()), Formula::implies(r, l.clone()))
    }

    /// Right-associated conjunction; `None` when empty.
    pub fn and_all(parts: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        let mut parts: Vec<Formula> = parts.into_iter().collect();
        let mut acc = parts.pop()?;
        while let Some(p) = parts.pop() {
            acc = Formula::and(p, acc);
        }
        Some(acc)
    }

    /// De Morgan dual. Variables are left untouched, so on closed formulas
    /// this is semantic negation.
    pub fn negate(&self) -> Formula {
        match self {
            Formula::Bot => Formula::Top,
            Formula::Top => Formula::Bot,
            Formula::Prop(p) => Formula::NegProp(p.clone()),
            Formula::NegProp(p) => Formula::Prop(p.clone()),
            Formula::Var(x) => Formula::Var(x.clone()),
            Formula::Or(l, r) => Formula::and(l.negate(), r.negate()),
            Formula::And(l, r) => Formula::or(l.negate(), r.negate()),
            Formula::Next(f) => Formula::next(f.negate()),
            Formula::Mu(x, b) => Formula::nu(x.clone(), b.negate()),
            Formula::Nu(x, b) => Formula::mu(x.clone(), b.negate()),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        binding::free_vars(self)
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn substitute(&self, var: &str, replacement: &Formula) -> Formula {
        binding::substitute(self, var, replacement)
    }

    pub fn canonical(&self) -> Formula {
        binding::canonical(self)
    }

    pub fn alpha_eq(&self, other: &Formula) -> bool {
        self == other || self.canonical() == other.canonical()
    }

    pub fn size(&self) -> usize {
        1 + Binding::children(self).into_iter().map(Formula::size).sum::<usize>()
    }

    /// Reads `self` as an implication `l -> r`, i.e. `~l | r`.
    pub fn as_implication(&self) -> Option<(Formula, &Formula)> {
        match self {
            Formula::Or(l, r) => Some((l.negate(), r)),
            _ => None,
        }
    }
}

impl Binding for Formula {
    fn mk_var(name: String) -> Self {
        Formula::Var(name)
    }

    fn as_var(&self) -> Option<&str> {
        match self {
            Formula::Var(x) => Some(x),
            _ => None,
        }
    }

    fn as_binder(&self) -> Option<(&str, &Self)> {
        match self {
            Formula::Mu(x, b) | Formula::Nu(x, b) => Some((x, b)),
            _ => None,
        }
    }

    fn rebind(&self, name: String, body: Self) -> Self {
        match self {
            Formula::Mu(..) => Formula::mu(name, body),
            Formula::Nu(..) => Formula::nu(name, body),
            _ => unreachable!("rebind on non-binder"),
        }
    }

    fn children(&self) -> Vec<&Self> {
        match self {
            Formula::Bot | Formula::Top | Formula::Prop(_) | Formula::NegProp(_) | Formula::Var(_) => {
                vec![]
            }
            Formula::Or(l, r) | Formula::And(l, r) => vec![l, r],
            Formula::Next(b) | Formula::Mu(_, b) | Formula::Nu(_, b) => vec![b],
        }
    }

    fn map_children(&self, f: &mut dyn FnMut(&Self) -> Self) -> Self {
        match self {
            Formula::Bot | Formula::Top | Formula::Prop(_) | Formula::NegProp(_) | Formula::Var(_) => self.clone(),
            Formula::Or(l, r) => Formula::or(f(l), f(r)),
            Formula::And(l, r) => Formula::and(f(l), f(r)),
            Formula::Next(b) => Formula::next(f(b)),
            Formula::Mu(x, b) => Formula::mu(x.clone(), f(b)),
            Formula::Nu(x, b) => Formula::nu(x.clone(), f(b)),
        }
    }
}

fn write_formula(f: &mut fmt::Formatter<'_>, phi: &Formula, prec: u8, rightmost: bool) -> fmt::Result {
    let binary = |f: &mut fmt::Formatter<'_>, l: &Formula, r: &Formula, op: &str, level: u8| {
        let paren = prec > level;
        if paren {
            f.write_str("(")?;
        }
        write_formula(f, l, level + 1, false)?;
        f.write_str(op)?;
        write_formula(f, r, level, paren || rightmost)?;
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    };
    match phi {
        Formula::Bot => f.write_str("ff"),
        Formula::Top => f.write_str("tt"),
        Formula::Prop(p) | Formula::Var(p) => f.write_str(p),
        Formula::NegProp(p) => write!(f, "~{p}"),
        Formula::Or(l, r) => binary(f, l, r, " | ", 1),
        Formula::And(l, r) => binary(f, l, r, " & ", 2),
        Formula::Next(b) => {
            f.write_str("O ")?;
            write_formula(f, b, 3, rightmost)
        }
        Formula::Mu(x, body) | Formula::Nu(x, body) => {
            if !rightmost {
                f.write_str("(")?;
                write_formula(f, phi, 0, true)?;
                return f.write_str(")");
            }
            let kw = if matches!(phi, Formula::Mu(..)) { "mu" } else { "nu" };
            write!(f, "{kw} {x}. ")?;
            if matches!(**body, Formula::Or(..) | Formula::And(..)) {
                f.write_str("(")?;
                write_formula(f, body, 0, true)?;
                f.write_str(")")
            } else {
                write_formula(f, body, 0, true)
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(f, self, 0, true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negation_examples() {
        assert_eq!(Formula::prop("P").negate(), Formula::neg_prop("P"));
        assert_eq!(Formula::next(Formula::prop("P")).negate(), Formula::next(Formula::neg_prop("P")));
        assert_eq!(Formula::mu("X", Formula::var("X")).negate(), Formula::nu("X", Formula::var("X")));
    }

    #[test]
    fn display_until() {
        let u = Formula::nu(
            "X",
            Formula::or(Formula::prop("Q"), Formula::and(Formula::prop("P"), Formula::next(Formula::var("X")))),
        );
        assert_eq!(u.to_string(), "nu X. (Q | P & O X)");
    }
}
