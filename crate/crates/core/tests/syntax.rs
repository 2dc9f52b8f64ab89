use std::collections::BTreeSet;

use omega_rll::corpus::{letters, random_expr, random_formula, rng};
use omega_rll::syntax::{parse_closed_expr, parse_expr, parse_formula, Alphabet, Expr, Formula};
use proptest::prelude::*;

fn ab() -> Alphabet {
    letters(2)
}

/// Open expressions: a closed one with some binders dropped.
fn strip_binders(e: &Expr, keep: &mut impl FnMut() -> bool) -> Expr {
    match e {
        Expr::Mu(x, b) | Expr::Nu(x, b) if !keep() => {
            let _ = x;
            strip_binders(b, keep)
        }
        Expr::Mu(x, b) => Expr::mu(x.clone(), strip_binders(b, keep)),
        Expr::Nu(x, b) => Expr::nu(x.clone(), strip_binders(b, keep)),
        Expr::Act(a, b) => Expr::act(*a, strip_binders(b, keep)),
        Expr::Sum(l, r) => Expr::sum(strip_binders(l, keep), strip_binders(r, keep)),
        Expr::Meet(l, r) => Expr::meet(strip_binders(l, keep), strip_binders(r, keep)),
        _ => e.clone(),
    }
}

/// Free variables computed directly from the definition.
fn free(e: &Expr) -> BTreeSet<String> {
    match e {
        Expr::Var(x) => BTreeSet::from([x.clone()]),
        Expr::Zero | Expr::Top => BTreeSet::new(),
        Expr::Act(_, b) => free(b),
        Expr::Sum(l, r) | Expr::Meet(l, r) => free(l).union(&free(r)).cloned().collect(),
        Expr::Mu(x, b) | Expr::Nu(x, b) => {
            let mut s = free(b);
            s.remove(x);
            s
        }
    }
}

#[test]
fn spec_examples() {
    let a = ab();
    let x = || Expr::var("X");
    assert_eq!(
        Expr::act(omega_rll::Letter(0), x()).substitute("X", &Expr::Zero),
        Expr::act(omega_rll::Letter(0), Expr::Zero)
    );
    let mu_x = Expr::mu("X", x());
    assert_eq!(mu_x.substitute("X", &Expr::Top), mu_x);
    let s = Expr::sum(x(), Expr::var("Y")).substitute("X", &Expr::mu("Y", Expr::var("Y")));
    assert!(s.alpha_eq(&parse_expr("(mu Z. Z) + Y", &a).unwrap()));
    assert_eq!(s.free_vars(), BTreeSet::from(["Y".to_string()]));

    assert!(parse_expr("mu X. a.X", &a).unwrap().free_vars().is_empty());
    assert_eq!(parse_expr("X + nu Y. Y", &a).unwrap().free_vars(), BTreeSet::from(["X".to_string()]));
    assert_eq!(parse_expr("mu X. X + Y", &a).unwrap().free_vars(), BTreeSet::from(["Y".to_string()]));

    let pq = Alphabet::powerset(["P", "Q"]).unwrap();
    assert_eq!(
        parse_formula("nu X. (Q | (P & O X))", &pq).unwrap(),
        Formula::nu(
            "X",
            Formula::or(Formula::prop("Q"), Formula::and(Formula::prop("P"), Formula::next(Formula::var("X"))))
        )
    );
    assert_eq!(parse_formula("~P", &pq).unwrap(), Formula::neg_prop("P"));
    assert!(parse_formula("mu X. (P | X X)", &pq).is_err());
    assert_eq!(Formula::next(Formula::prop("P")).negate(), Formula::next(Formula::neg_prop("P")));
    assert_eq!(Formula::mu("X", Formula::var("X")).negate(), Formula::nu("X", Formula::var("X")));
}

#[test]
fn parse_errors_name_line_and_column() {
    let err = parse_closed_expr("a.X\n  + b.0", &ab()).unwrap_err().to_string();
    assert!(err.starts_with("1:3:"), "{err}");
    let err = parse_expr("mu X.\n  c.X", &ab()).unwrap_err().to_string();
    assert!(err.starts_with("2:3:"), "{err}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn print_parse_round_trip(seed: u64, k in 1usize..4, size in 1usize..16) {
        let a = letters(k);
        let e = random_expr(&mut rng(seed), &a, size);
        let text = e.to_text(&a);
        let back = parse_closed_expr(&text, &a).unwrap();
        prop_assert!(back.alpha_eq(&e), "{text}");
        prop_assert_eq!(back.to_text(&a), text);
    }

    #[test]
    fn formula_round_trip_and_involution(seed: u64, size in 1usize..14) {
        let pq = Alphabet::powerset(["P", "Q"]).unwrap();
        let f = random_formula(&mut rng(seed), pq.props().unwrap(), size);
        let back = parse_formula(&f.to_string(), &pq).unwrap();
        prop_assert!(back.alpha_eq(&f), "{f}");
        prop_assert_eq!(f.negate().negate(), f);
    }

    #[test]
    fn substitution_laws(seed: u64, size in 1usize..14, mask: u32) {
        let a = ab();
        let mut r = rng(seed);
        let mut bits = mask;
        let mut keep = || { bits = bits.rotate_right(1); bits & 1 == 1 };
        let e = strip_binders(&random_expr(&mut r, &a, size), &mut keep);
        let c = random_expr(&mut r, &a, 4);
        let c = if seed % 2 == 0 { Expr::sum(c, Expr::var("Y")) } else { c };
        prop_assert_eq!(e.free_vars(), free(&e));
        for x in ["X", "Y", "Z"] {
            prop_assert_eq!(&e.substitute(x, &Expr::var(x)), &e);
            let s = e.substitute(x, &c);
            let mut want = free(&e);
            let had = want.remove(x);
            if had {
                want.extend(free(&c));
            }
            prop_assert_eq!(s.free_vars(), want);
        }
    }
}
