//! Decision procedures for Boolean steps: truth tables over the
//! two-element lattice.
//!
//! A quasi-identity valid in the two-element bounded distributive lattice
//! holds in every bounded distributive lattice, since each one embeds into
//! a power of it; likewise for Boolean algebras. Closed expressions form a
//! Boolean algebra under the calculus, with `t^c` the complement of `t`,
//! which is what lets `bool_taut` read `t^c` as a negation.

use crate::algebra::complement;
use crate::error::{Error, Result};
use crate::syntax::{Alphabet, Expr, Formula};

use super::{Claim, Rel};

const MAX_ATOMS: usize = 20;

#[derive(Debug, Clone)]
enum Term {
    Const(bool),
    Atom(usize, bool),
    And(Box<Term>, Box<Term>),
    Or(Box<Term>, Box<Term>),
}

impl Term {
    fn eval(&self, v: u32) -> bool {
        match self {
            Term::Const(b) => *b,
            Term::Atom(i, positive) => (v >> i & 1 == 1) == *positive,
            Term::And(l, r) => l.eval(v) && r.eval(v),
            Term::Or(l, r) => l.eval(v) || r.eval(v),
        }
    }
}

/// Atoms collected so far, by canonical form.
#[derive(Default)]
struct Atoms {
    keys: Vec<Expr>,
}

impl Atoms {
    fn index(&mut self, e: &Expr) -> Result<usize> {
        let key = e.canonical();
        if let Some(i) = self.keys.iter().position(|k| *k == key) {
            return Ok(i);
        }
        if self.keys.len() == MAX_ATOMS {
            return Err(Error::Boolean(format!("more than {MAX_ATOMS} atoms")));
        }
        self.keys.push(key);
        Ok(self.keys.len() - 1)
    }
}

fn holds(premises: &[(Term, Term, Rel)], claim: &(Term, Term, Rel), atoms: usize) -> bool {
    let sat = |(l, r, rel): &(Term, Term, Rel), v| {
        let (l, r) = (l.eval(v), r.eval(v));
        match rel {
            Rel::Eq => l == r,
            Rel::Leq => !l || r,
        }
    };
    (0..1u32 << atoms).all(|v| !premises.iter().all(|p| sat(p, v)) || sat(claim, v))
}

fn lattice_term(e: &Expr, atoms: &mut Atoms) -> Result<Term> {
    Ok(match e {
        Expr::Zero => Term::Const(false),
        Expr::Top => Term::Const(true),
        Expr::Sum(l, r) => Term::Or(Box::new(lattice_term(l, atoms)?), Box::new(lattice_term(r, atoms)?)),
        Expr::Meet(l, r) => Term::And(Box::new(lattice_term(l, atoms)?), Box::new(lattice_term(r, atoms)?)),
        _ => Term::Atom(atoms.index(e)?, true),
    })
}

/// Whether `premises` imply `claim` in every bounded distributive lattice,
/// treating maximal subterms other than `0`, `top`, `+`, `&` as atoms.
/// Atoms may be open.
pub fn lattice_taut(claim: &Claim, premises: &[Claim]) -> Result<bool> {
    let mut atoms = Atoms::default();
    let mut term = |c: &Claim| -> Result<(Term, Term, Rel)> {
        Ok((lattice_term(&c.lhs, &mut atoms)?, lattice_term(&c.rhs, &mut atoms)?, c.rel))
    };
    let ps = premises.iter().map(&mut term).collect::<Result<Vec<_>>>()?;
    let c = term(claim)?;
    Ok(holds(&ps, &c, atoms.keys.len()))
}

struct Declared {
    atoms: Vec<Expr>,
    complements: Vec<Expr>,
}

fn boolean_term(e: &Expr, d: &Declared, alphabet: &Alphabet) -> Result<Term> {
    if let Some(i) = d.atoms.iter().position(|a| a.alpha_eq(e)) {
        return Ok(Term::Atom(i, true));
    }
    if let Some(i) = d.complements.iter().position(|a| a.alpha_eq(e)) {
        return Ok(Term::Atom(i, false));
    }
    Ok(match e {
        Expr::Zero => Term::Const(false),
        Expr::Top => Term::Const(true),
        Expr::Sum(l, r) => Term::Or(Box::new(boolean_term(l, d, alphabet)?), Box::new(boolean_term(r, d, alphabet)?)),
        Expr::Meet(l, r) => Term::And(Box::new(boolean_term(l, d, alphabet)?), Box::new(boolean_term(r, d, alphabet)?)),
        _ => {
            return Err(Error::Boolean(format!(
                "subterm `{}` is neither a declared atom nor its complement",
                e.display(alphabet)
            )))
        }
    })
}

/// Whether `premises` imply `claim` in every Boolean algebra, reading each
/// declared atom `t` as a variable and `t^c` as its negation. Atoms must be
/// closed, and every maximal non-lattice subterm must be an atom or the
/// complement of one.
pub fn bool_taut(claim: &Claim, premises: &[Claim], atoms: &[Expr], alphabet: &Alphabet) -> Result<bool> {
    if atoms.len() > MAX_ATOMS {
        return Err(Error::Boolean(format!("more than {MAX_ATOMS} atoms")));
    }
    for a in atoms {
        if !a.is_closed() {
            return Err(Error::Boolean(format!("atom `{}` is not closed", a.display(alphabet))));
        }
    }
    let d = Declared { atoms: atoms.to_vec(), complements: atoms.iter().map(|a| complement(a, alphabet)).collect() };
    let term = |c: &Claim| -> Result<(Term, Term, Rel)> {
        Ok((boolean_term(&c.lhs, &d, alphabet)?, boolean_term(&c.rhs, &d, alphabet)?, c.rel))
    };
    let ps = premises.iter().map(term).collect::<Result<Vec<_>>>()?;
    let c = term(claim)?;
    Ok(holds(&ps, &c, atoms.len()))
}

fn formula_term(phi: &Formula, atoms: &mut Atoms) -> Result<Term> {
    Ok(match phi {
        Formula::Bot => Term::Const(false),
        Formula::Top => Term::Const(true),
        Formula::Or(l, r) => Term::Or(Box::new(formula_term(l, atoms)?), Box::new(formula_term(r, atoms)?)),
        Formula::And(l, r) => Term::And(Box::new(formula_term(l, atoms)?), Box::new(formula_term(r, atoms)?)),
        Formula::Prop(p) => Term::Atom(prop_atom(p, atoms)?, true),
        Formula::NegProp(p) => Term::Atom(prop_atom(p, atoms)?, false),
        _ => {
            // `t` and its dual are one atom, stored under the smaller of the
            // two canonical forms.
            let pos = phi.canonical();
            let neg = phi.negate().canonical();
            if !phi.is_closed() || pos <= neg {
                Term::Atom(atoms.index(&formula_key(pos))?, true)
            } else {
                Term::Atom(atoms.index(&formula_key(neg))?, false)
            }
        }
    })
}

// Atoms are keyed by expressions; formulas and propositions are kept apart
// by wrapping them in distinct shapes.
fn formula_key(f: Formula) -> Expr {
    Expr::var(format!("φ{f:?}"))
}

fn prop_atom(p: &str, atoms: &mut Atoms) -> Result<usize> {
    atoms.index(&Expr::var(format!("P{p}")))
}

/// Whether `phi` is a propositional tautology, with maximal subformulas
/// that are not propositional connectives or literals treated as atoms
/// (a closed atom and its negation being complementary).
pub fn propositional_taut(phi: &Formula) -> Result<bool> {
    let mut atoms = Atoms::default();
    let t = formula_term(phi, &mut atoms)?;
    Ok((0..1u32 << atoms.keys.len()).all(|v| t.eval(v)))
}
