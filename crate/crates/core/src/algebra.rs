//! Syntactic complement and the translations between expressions and
//! linear-time mu-calculus formulas.

use crate::error::{Error, Result};
use crate::syntax::{Alphabet, Expr, Formula, Letter};

/// `e^c`: dualizes `+`/`&`, `mu`/`nu` and `0`/`top`, leaves variables alone,
/// and sends `a.e` to `a.e^c` plus `b.top` for every other letter `b`.
pub fn complement(e: &Expr, alphabet: &Alphabet) -> Expr {
    match e {
        Expr::Var(_) => e.clone(),
        Expr::Zero => Expr::Top,
        Expr::Top => Expr::Zero,
        Expr::Act(a, f) => {
            let others = alphabet.letters().filter(|b| b != a).map(|b| Expr::act(b, Expr::Top));
            let terms = std::iter::once(Expr::act(*a, complement(f, alphabet))).chain(others);
            Expr::sum_all(terms).expect("nonempty")
        }
        Expr::Sum(l, r) => Expr::meet(complement(l, alphabet), complement(r, alphabet)),
        Expr::Meet(l, r) => Expr::sum(complement(l, alphabet), complement(r, alphabet)),
        Expr::Mu(x, f) => Expr::nu(x.clone(), complement(f, alphabet)),
        Expr::Nu(x, f) => Expr::mu(x.clone(), complement(f, alphabet)),
    }
}

/// The literal for proposition `j` as it appears in `letter`.
fn literal(alphabet: &Alphabet, props: &[String], letter: Letter, j: usize) -> Formula {
    if alphabet.holds(letter, j) {
        Formula::prop(&props[j])
    } else {
        Formula::neg_prop(&props[j])
    }
}

/// `e°`: letters become the conjunction of their positive and negative
/// literals followed by a next-step.
pub fn to_multl(e: &Expr, alphabet: &Alphabet) -> Result<Formula> {
    let props = alphabet.props().ok_or(Error::NotPowerset)?;
    Ok(to_multl_inner(e, alphabet, props))
}

fn to_multl_inner(e: &Expr, alphabet: &Alphabet, props: &[String]) -> Formula {
    let go = |f: &Expr| to_multl_inner(f, alphabet, props);
    match e {
        Expr::Var(x) => Formula::var(x.clone()),
        Expr::Zero => Formula::mu("X", Formula::var("X")),
        Expr::Top => Formula::nu("X", Formula::var("X")),
        Expr::Act(a, f) => {
            let positives = (0..props.len()).filter(|&j| alphabet.holds(*a, j));
            let negatives = (0..props.len()).filter(|&j| !alphabet.holds(*a, j));
            let literals = positives.chain(negatives).map(|j| literal(alphabet, props, *a, j));
            let step = Formula::next(go(f));
            if props.is_empty() {
                Formula::and(Formula::Top, step)
            } else {
                Formula::and_all(literals.chain(std::iter::once(step))).expect("nonempty")
            }
        }
        Expr::Sum(l, r) => Formula::or(go(l), go(r)),
        Expr::Meet(l, r) => Formula::and(go(l), go(r)),
        Expr::Mu(x, f) => Formula::mu(x.clone(), go(f)),
        Expr::Nu(x, f) => Formula::nu(x.clone(), go(f)),
    }
}

/// `phi•`: propositions become sums of the letters containing them, and a
/// next-step becomes a sum over all letters.
pub fn to_rll(phi: &Formula, alphabet: &Alphabet) -> Result<Expr> {
    if !alphabet.is_powerset() {
        return Err(Error::NotPowerset);
    }
    to_rll_inner(phi, alphabet)
}

fn to_rll_inner(phi: &Formula, alphabet: &Alphabet) -> Result<Expr> {
    let letters_where = |p: &str, positive: bool| -> Result<Expr> {
        let j = alphabet.prop_index(p).ok_or_else(|| Error::Alphabet(format!("undeclared proposition `{p}`")))?;
        let terms = alphabet.letters().filter(|&a| alphabet.holds(a, j) == positive).map(|a| Expr::act(a, Expr::Top));
        Ok(Expr::sum_all(terms).unwrap_or(Expr::Zero))
    };
    Ok(match phi {
        Formula::Bot => Expr::Zero,
        Formula::Top => Expr::Top,
        Formula::Prop(p) => letters_where(p, true)?,
        Formula::NegProp(p) => letters_where(p, false)?,
        Formula::Var(x) => Expr::var(x.clone()),
        Formula::Or(l, r) => Expr::sum(to_rll_inner(l, alphabet)?, to_rll_inner(r, alphabet)?),
        Formula::And(l, r) => Expr::meet(to_rll_inner(l, alphabet)?, to_rll_inner(r, alphabet)?),
        Formula::Next(f) => {
            let body = to_rll_inner(f, alphabet)?;
            Expr::sum_all(alphabet.letters().map(|a| Expr::act(a, body.clone()))).expect("nonempty alphabet")
        }
        Formula::Mu(x, f) => Expr::mu(x.clone(), to_rll_inner(f, alphabet)?),
        Formula::Nu(x, f) => Expr::nu(x.clone(), to_rll_inner(f, alphabet)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_expr, parse_formula};

    #[test]
    fn complement_examples() {
        let a = Alphabet::new(["a", "b"]).unwrap();
        let e = parse_expr("nu X. a.X", &a).unwrap();
        assert_eq!(complement(&e, &a), parse_expr("mu X. (a.X + b.top)", &a).unwrap());
        assert_eq!(complement(&Expr::var("X"), &a), Expr::var("X"));
        let s = parse_expr("X + a.0", &a).unwrap();
        assert_eq!(complement(&s, &a), parse_expr("X & (a.top + b.top)", &a).unwrap());
        let three = Alphabet::new(["a", "b", "c"]).unwrap();
        assert_eq!(
            complement(&parse_expr("b.top", &three).unwrap(), &three),
            parse_expr("b.0 + a.top + c.top", &three).unwrap()
        );
    }

    #[test]
    fn translation_examples() {
        let pq = Alphabet::powerset(["P", "Q"]).unwrap();
        let e = parse_expr("{P}.X", &pq).unwrap();
        assert_eq!(to_multl(&e, &pq).unwrap(), parse_formula("P & ~Q & O X", &pq).unwrap());
        let e = parse_expr("mu X. X", &pq).unwrap();
        assert_eq!(to_multl(&e, &pq).unwrap(), parse_formula("mu X. X", &pq).unwrap());
        let none = Alphabet::powerset(Vec::<String>::new()).unwrap();
        let e = parse_expr("{}.top", &none).unwrap();
        assert_eq!(to_multl(&e, &none).unwrap(), parse_formula("tt & O nu X. X", &none).unwrap());

        let p = Alphabet::powerset(["P"]).unwrap();
        assert_eq!(to_rll(&Formula::prop("P"), &p).unwrap(), parse_expr("{P}.top", &p).unwrap());
        assert_eq!(to_rll(&Formula::next(Formula::var("Y")), &p).unwrap(), parse_expr("{}.Y + {P}.Y", &p).unwrap());
        assert_eq!(to_rll(&Formula::Bot, &p).unwrap(), Expr::Zero);
        let ab = Alphabet::new(["a", "b"]).unwrap();
        assert_eq!(to_rll(&Formula::Bot, &ab).unwrap_err(), Error::NotPowerset);
    }
}
