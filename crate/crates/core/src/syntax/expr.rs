use std::collections::BTreeSet;
use std::fmt;

use super::alphabet::{Alphabet, Letter};
use super::binding::{self, Binding};

/// Right-linear lattice expression.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Expr {
    Var(String),
    /// Letter action `a.e`.
    Act(Letter, Box<Expr>),
    Sum(Box<Expr>, Box<Expr>),
    Meet(Box<Expr>, Box<Expr>),
    Mu(String, Box<Expr>),
    Nu(String, Box<Expr>),
    Zero,
    Top,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Fixpoint {
    Least,
    Greatest,
}

impl Expr {
    pub fn var(name: impl Into<String>) -> Expr {
        Expr::Var(name.into())
    }

    pub fn act(letter: Letter, body: Expr) -> Expr {
        Expr::Act(letter, Box::new(body))
    }

    pub fn sum(l: Expr, r: Expr) -> Expr {
        Expr::Sum(Box::new(l), Box::new(r))
    }

    pub fn meet(l: Expr, r: Expr) -> Expr {
        Expr::Meet(Box::new(l), Box::new(r))
    }

    pub fn mu(x: impl Into<String>, body: Expr) -> Expr {
        Expr::Mu(x.into(), Box::new(body))
    }

    pub fn nu(x: impl Into<String>, body: Expr) -> Expr {
        Expr::Nu(x.into(), Box::new(body))
    }

    /// Right-associated sum of the given terms; `None` when empty.
    pub fn sum_all(terms: impl IntoIterator<Item = Expr>) -> Option<Expr> {
        let mut terms: Vec<Expr> = terms.into_iter().collect();
        let mut acc = terms.pop()?;
        while let Some(t) = terms.pop() {
            acc = Expr::sum(t, acc);
        }
        Some(acc)
    }

    pub fn as_fixpoint(&self) -> Option<(Fixpoint, &str, &Expr)> {
        match self {
            Expr::Mu(x, b) => Some((Fixpoint::Least, x, b)),
            Expr::Nu(x, b) => Some((Fixpoint::Greatest, x, b)),
            _ => None,
        }
    }

    pub fn is_mu(&self) -> bool {
        matches!(self, Expr::Mu(..))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        binding::free_vars(self)
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Capture-avoiding substitution of `replacement` for free `var`.
    pub fn substitute(&self, var: &str, replacement: &Expr) -> Expr {
        binding::substitute(self, var, replacement)
    }

    /// One-step unfolding `e(σX e)` of a fixpoint; `None` otherwise.
    pub fn unfold(&self) -> Option<Expr> {
        let (_, x, body) = self.as_fixpoint()?;
        Some(body.substitute(x, self))
    }

    pub fn canonical(&self) -> Expr {
        binding::canonical(self)
    }

    pub fn alpha_eq(&self, other: &Expr) -> bool {
        self == other || self.canonical() == other.canonical()
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Expr::size).sum::<usize>()
    }

    pub fn letters(&self) -> BTreeSet<Letter> {
        let mut out = BTreeSet::new();
        self.visit(&mut |e| {
            if let Expr::Act(a, _) = e {
                out.insert(*a);
            }
        });
        out
    }

    pub fn names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        binding::all_names(self, &mut out);
        out
    }

    pub fn children(&self) -> Vec<&Expr> {
        match self {
            Expr::Var(_) | Expr::Zero | Expr::Top => vec![],
            Expr::Act(_, b) | Expr::Mu(_, b) | Expr::Nu(_, b) => vec![b],
            Expr::Sum(l, r) | Expr::Meet(l, r) => vec![l, r],
        }
    }

    /// Pre-order traversal.
    pub fn visit(&self, f: &mut impl FnMut(&Expr)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }

    /// Renders the expression in the text grammar.
    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> ExprDisplay<'a> {
        ExprDisplay { expr: self, alphabet }
    }

    pub fn to_text(&self, alphabet: &Alphabet) -> String {
        self.display(alphabet).to_string()
    }
}

impl Binding for Expr {
    fn mk_var(name: String) -> Self {
        Expr::Var(name)
    }

    fn as_var(&self) -> Option<&str> {
        match self {
            Expr::Var(x) => Some(x),
            _ => None,
        }
    }

    fn as_binder(&self) -> Option<(&str, &Self)> {
        self.as_fixpoint().map(|(_, x, b)| (x, b))
    }

    fn rebind(&self, name: String, body: Self) -> Self {
        match self {
            Expr::Mu(..) => Expr::mu(name, body),
            Expr::Nu(..) => Expr::nu(name, body),
            _ => unreachable!("rebind on non-binder"),
        }
    }

    fn children(&self) -> Vec<&Self> {
        Expr::children(self)
    }

    fn map_children(&self, f: &mut dyn FnMut(&Self) -> Self) -> Self {
        match self {
            Expr::Var(_) | Expr::Zero | Expr::Top => self.clone(),
            Expr::Act(a, b) => Expr::act(*a, f(b)),
            Expr::Sum(l, r) => Expr::sum(f(l), f(r)),
            Expr::Meet(l, r) => Expr::meet(f(l), f(r)),
            Expr::Mu(x, b) => Expr::mu(x.clone(), f(b)),
            Expr::Nu(x, b) => Expr::nu(x.clone(), f(b)),
        }
    }
}

pub struct ExprDisplay<'a> {
    expr: &'a Expr,
    alphabet: &'a Alphabet,
}

// Precedence: binders 0, `+` 1, `&` 2, prefix/atoms 3. A binder extends as
// far right as possible, so it needs parentheses unless it ends its context.
impl ExprDisplay<'_> {
    fn write(&self, f: &mut fmt::Formatter<'_>, e: &Expr, prec: u8, rightmost: bool) -> fmt::Result {
        match e {
            Expr::Zero => f.write_str("0"),
            Expr::Top => f.write_str("top"),
            Expr::Var(x) => f.write_str(x),
            Expr::Act(a, body) => {
                write!(f, "{}.", self.alphabet.name(*a))?;
                self.write(f, body, 3, rightmost)
            }
            Expr::Sum(l, r) => self.binary(f, l, r, " + ", 1, prec, rightmost),
            Expr::Meet(l, r) => self.binary(f, l, r, " & ", 2, prec, rightmost),
            Expr::Mu(x, body) | Expr::Nu(x, body) => {
                if !rightmost {
                    f.write_str("(")?;
                    self.write(f, e, 0, true)?;
                    return f.write_str(")");
                }
                let kw = if e.is_mu() { "mu" } else { "nu" };
                write!(f, "{kw} {x}. ")?;
                if matches!(**body, Expr::Sum(..) | Expr::Meet(..)) {
                    f.write_str("(")?;
                    self.write(f, body, 0, true)?;
                    f.write_str(")")
                } else {
                    self.write(f, body, 0, true)
                }
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn binary(
        &self,
        f: &mut fmt::Formatter<'_>,
        l: &Expr,
        r: &Expr,
        op: &str,
        level: u8,
        prec: u8,
        rightmost: bool,
    ) -> fmt::Result {
        let paren = prec > level;
        let rightmost = paren || rightmost;
        if paren {
            f.write_str("(")?;
        }
        self.write(f, l, level + 1, false)?;
        f.write_str(op)?;
        self.write(f, r, level, rightmost)?;
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, self.expr, 0, true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    #[test]
    fn free_vars_examples() {
        let a = Letter(0);
        assert!(Expr::mu("X", Expr::act(a, Expr::var("X"))).free_vars().is_empty());
        let e = Expr::sum(Expr::var("X"), Expr::nu("Y", Expr::var("Y")));
        assert_eq!(e.free_vars(), BTreeSet::from(["X".to_string()]));
        let e = Expr::mu("X", Expr::sum(Expr::var("X"), Expr::var("Y")));
        assert_eq!(e.free_vars(), BTreeSet::from(["Y".to_string()]));
    }

    #[test]
    fn substitution_examples() {
        let a = Letter(0);
        let e = Expr::act(a, Expr::var("X"));
        assert_eq!(e.substitute("X", &Expr::Zero), Expr::act(a, Expr::Zero));

        let bound = Expr::mu("X", Expr::var("X"));
        assert_eq!(bound.substitute("X", &Expr::Top), bound);

        let e = Expr::sum(Expr::var("X"), Expr::var("Y"));
        let out = e.substitute("X", &Expr::mu("Y", Expr::var("Y")));
        assert!(out.alpha_eq(&Expr::sum(Expr::mu("Y'", Expr::var("Y'")), Expr::var("Y"))));
        assert_eq!(out.free_vars(), BTreeSet::from(["Y".to_string()]));
    }

    #[test]
    fn substitution_renames_to_avoid_capture() {
        // mu Y. (X + Y) with X := Y must not capture the free Y.
        let e = Expr::mu("Y", Expr::sum(Expr::var("X"), Expr::var("Y")));
        let out = e.substitute("X", &Expr::var("Y"));
        assert_eq!(out.free_vars(), BTreeSet::from(["Y".to_string()]));
        match &out {
            Expr::Mu(y, body) => {
                assert_ne!(y, "Y");
                assert_eq!(**body, Expr::sum(Expr::var("Y"), Expr::var(y.clone())));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn alpha_equivalence() {
        let l = Expr::nu("X", Expr::mu("Y", Expr::sum(Expr::var("X"), Expr::var("Y"))));
        let r = Expr::nu("A", Expr::mu("B", Expr::sum(Expr::var("A"), Expr::var("B"))));
        assert!(l.alpha_eq(&r));
        let swapped = Expr::nu("A", Expr::mu("B", Expr::sum(Expr::var("B"), Expr::var("A"))));
        assert!(!l.alpha_eq(&swapped));
    }

    #[test]
    fn printing_uses_minimal_parentheses() {
        let (a, b) = (Letter(0), Letter(1));
        let ia = Expr::nu("X", Expr::mu("Y", Expr::sum(Expr::act(a, Expr::var("X")), Expr::act(b, Expr::var("Y")))));
        assert_eq!(ia.to_text(&ab()), "nu X. mu Y. (a.X + b.Y)");
        let e = Expr::sum(Expr::mu("X", Expr::var("X")), Expr::Top);
        assert_eq!(e.to_text(&ab()), "(mu X. X) + top");
        let e = Expr::meet(Expr::sum(Expr::Zero, Expr::Top), Expr::var("Z"));
        assert_eq!(e.to_text(&ab()), "(0 + top) & Z");
        let e = Expr::act(a, Expr::sum(Expr::Zero, Expr::Top));
        assert_eq!(e.to_text(&ab()), "a.(0 + top)");
    }

    #[test]
    fn unfold_substitutes_the_fixpoint() {
        let a = Letter(0);
        let e = Expr::mu("X", Expr::act(a, Expr::var("X")));
        assert_eq!(e.unfold().unwrap(), Expr::act(a, e.clone()));
        assert_eq!(Expr::Zero.unfold(), None);
    }
}
