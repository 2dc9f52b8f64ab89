use omega_rll::algebra::{complement, to_multl, to_rll};
use omega_rll::corpus::{self, letters, random_expr, random_lasso, rng};
use omega_rll::game::{build_arena, equiv_bounded, inclusion_bounded, Bounds, ParityGame, Player};
use omega_rll::semantics::{eval_multl, eval_rll, member_multl, member_oracle, Env, Lasso, PositionSet};
use omega_rll::syntax::{parse_closed_expr, parse_expr, parse_formula, Alphabet, Expr, Formula};
use proptest::prelude::*;

fn ab() -> Alphabet {
    letters(2)
}

fn w(text: &str, a: &Alphabet) -> Lasso {
    Lasso::parse(text, a).unwrap()
}

#[test]
fn lasso_normalization() {
    let a = ab();
    for (given, want) in [("aa(a)", "(a)"), ("ab(ab)", "(ab)"), ("(abab)", "(ab)"), ("b(ab)", "(ba)"), ("a(b)", "a(b)")]
    {
        let n = w(given, &a).normalize();
        assert_eq!(n.to_text(&a), want);
        assert_eq!(n.unroll(16), w(given, &a).unroll(16));
    }
    let pq = Alphabet::powerset(["P", "Q"]).unwrap();
    assert_eq!(w("{P}{P,Q}({})", &pq).to_text(&pq), "{P}{P,Q}({})");
}

#[test]
fn evaluation_examples() {
    let a = ab();
    let nu_ax = parse_closed_expr("nu X. a.X", &a).unwrap();
    assert_eq!(eval_rll(&nu_ax, &w("(a)", &a), &Env::new()).unwrap(), PositionSet::full(1));
    assert!(eval_rll(&nu_ax, &w("(ab)", &a), &Env::new()).unwrap().is_empty());
    assert!(eval_rll(&parse_expr("X", &a).unwrap(), &w("(a)", &a), &Env::new()).is_err());

    let p = Alphabet::powerset(["P"]).unwrap();
    let prop = parse_formula("P", &p).unwrap();
    assert_eq!(eval_multl(&prop, &w("({}{P})", &p), &p, &Env::new()).unwrap(), PositionSet::from_positions(2, [1]));
    assert!(member_multl(&parse_formula("nu X. P & O X", &p).unwrap(), &w("({P})", &p), &p).unwrap());
    let ev = parse_formula("mu X. P | O X", &p).unwrap();
    assert_eq!(eval_multl(&ev, &w("{}{}({P})", &p), &p, &Env::new()).unwrap(), PositionSet::full(3));
    assert!(eval_multl(&prop, &w("(a)", &a), &a, &Env::new()).is_err());
}

#[test]
fn algebra_examples() {
    let a = ab();
    let c = complement(&parse_closed_expr("nu X. a.X", &a).unwrap(), &a);
    assert_eq!(c, parse_closed_expr("mu X. a.X + b.top", &a).unwrap());
    assert_eq!(complement(&Expr::var("X"), &a), Expr::var("X"));
    let (e, f) = (parse_closed_expr("a.0", &a).unwrap(), parse_closed_expr("b.top", &a).unwrap());
    assert_eq!(complement(&Expr::sum(e.clone(), f.clone()), &a), Expr::meet(complement(&e, &a), complement(&f, &a)));

    let pq = Alphabet::powerset(["P", "Q"]).unwrap();
    let p_only = pq.letter("{P}").unwrap();
    let got = to_multl(&Expr::act(p_only, Expr::var("X")), &pq).unwrap();
    assert_eq!(got, parse_formula("P & ~Q & O X", &pq).unwrap());
    let mu = Expr::mu("X", Expr::var("X"));
    assert_eq!(to_multl(&mu, &pq).unwrap(), Formula::mu("X", Formula::var("X")));

    let p = Alphabet::powerset(["P"]).unwrap();
    assert_eq!(to_rll(&Formula::prop("P"), &p).unwrap(), parse_closed_expr("{P}.top", &p).unwrap());
    assert_eq!(
        to_rll(&Formula::next(Formula::prop("P")), &p).unwrap(),
        parse_closed_expr("{}.{P}.top + {P}.{P}.top", &p).unwrap()
    );
    assert_eq!(to_rll(&Formula::Bot, &p).unwrap(), Expr::Zero);
    assert!(to_multl(&mu, &a).is_err());

    let empty = Alphabet::powerset(Vec::<String>::new()).unwrap();
    let step = to_multl(&Expr::act(omega_rll::Letter(0), Expr::Top), &empty).unwrap();
    assert_eq!(step, Formula::and(Formula::Top, Formula::next(Formula::nu("X", Formula::var("X")))));
}

#[test]
fn search_examples() {
    let a = ab();
    let nu_ax = parse_closed_expr("nu X. a.X", &a).unwrap();
    let ia = parse_closed_expr(corpus::INFINITELY_MANY_A, &a).unwrap();
    let b = |p, q| Bounds { max_prefix: p, max_period: q };
    assert_eq!(inclusion_bounded(&nu_ax, &ia, &a, b(2, 2)).unwrap(), None);
    let found = inclusion_bounded(&Expr::Top, &nu_ax, &a, b(1, 1)).unwrap();
    assert_eq!(found.map(|l| l.to_text(&a)).as_deref(), Some("(b)"));
    assert_eq!(inclusion_bounded(&Expr::Zero, &ia, &a, b(2, 2)).unwrap(), None);
    assert_eq!(equiv_bounded(&ia, &ia, &a, b(2, 2)).unwrap(), None);
}

fn play_respects(g: &ParityGame, winner: Player, strategy: &[Option<usize>], start: usize) -> bool {
    // Against every opponent choice, the positions visited under the
    // winner's strategy form a closed region; check it has no deadlock of
    // the winner and that every cycle's minimal priority is the winner's.
    let mut region = vec![false; g.len()];
    let mut todo = vec![start];
    region[start] = true;
    while let Some(v) = todo.pop() {
        let next: Vec<usize> = if g.owner[v] == winner {
            match strategy[v] {
                Some(u) => vec![u],
                None => return false,
            }
        } else {
            g.successors[v].clone()
        };
        for u in next {
            if !region[u] {
                region[u] = true;
                todo.push(u);
            }
        }
    }
    // A cycle whose minimum has the wrong parity passes through some position
    // p of that priority using only positions of priority >= p.
    (0..g.len()).filter(|&p| region[p] && Player::of_priority(g.priority[p]) != winner).all(|p| {
        let floor = g.priority[p];
        let mut seen = vec![false; g.len()];
        let mut todo = vec![p];
        while let Some(v) = todo.pop() {
            let next: Vec<usize> =
                if g.owner[v] == winner { strategy[v].into_iter().collect() } else { g.successors[v].clone() };
            for u in next {
                if u == p {
                    return false;
                }
                if g.priority[u] >= floor && !seen[u] {
                    seen[u] = true;
                    todo.push(u);
                }
            }
        }
        true
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn evaluation_laws(seed: u64) {
        let a = ab();
        let mut r = rng(seed);
        let (e, f) = (random_expr(&mut r, &a, 8), random_expr(&mut r, &a, 8));
        let l = random_lasso(&mut r, &a, 3, 4);
        let ev = |x: &Expr| eval_rll(x, &l, &Env::new()).unwrap();
        prop_assert_eq!(ev(&Expr::sum(e.clone(), f.clone())), ev(&e).union(&ev(&f)));
        prop_assert_eq!(ev(&Expr::meet(e.clone(), f.clone())), ev(&e).intersection(&ev(&f)));
        prop_assert!(ev(&Expr::mu("X", Expr::var("X"))).is_empty());
        prop_assert_eq!(ev(&Expr::nu("X", Expr::var("X"))), PositionSet::full(l.len()));
        prop_assert_eq!(member_oracle(&e, &l).unwrap(), member_oracle(&e, &l.normalize()).unwrap());
        // Double complement is the identity on languages.
        let cc = complement(&complement(&e, &a), &a);
        prop_assert_eq!(equiv_bounded(&e, &cc, &a, Bounds { max_prefix: 1, max_period: 2 }).unwrap(), None);
    }

    #[test]
    fn evaluation_is_monotone_in_the_environment(seed: u64, m1: u64, m2: u64) {
        let a = ab();
        let mut r = rng(seed);
        let body = random_expr(&mut r, &a, 8);
        // An expression with the free variable `V`.
        let e = Expr::sum(Expr::act(omega_rll::Letter(0), Expr::var("V")), body);
        let e = Expr::meet(e, Expr::sum(Expr::var("V"), Expr::act(omega_rll::Letter(1), Expr::var("V"))));
        let l = random_lasso(&mut r, &a, 3, 4);
        let n = l.len();
        let small = PositionSet::from_mask(n, m1 & m2 & ((1 << n) - 1));
        let big = PositionSet::from_mask(n, m1 & ((1 << n) - 1));
        let at = |s: &PositionSet| eval_rll(&e, &l, &Env::from([("V".to_string(), s.clone())])).unwrap();
        prop_assert!(at(&small).is_subset(&at(&big)));
    }

    #[test]
    fn games_are_determined_with_winning_strategies(seed: u64) {
        let a = ab();
        let mut r = rng(seed);
        let e = random_expr(&mut r, &a, 10);
        let l = random_lasso(&mut r, &a, 2, 3);
        let arena = build_arena(&e, &l).unwrap();
        let g = &arena.game;
        let s = g.solve();
        prop_assert_eq!(s.winner.len(), g.len());
        for v in 0..g.len() {
            let winner = s.winner[v];
            prop_assert!(play_respects(g, winner, s.strategy(winner), v));
        }
        let mut shifted = g.clone();
        for p in &mut shifted.priority {
            *p += 2;
        }
        prop_assert_eq!(shifted.solve().winner, s.winner);
    }

    #[test]
    fn translations(seed: u64, k in 0usize..3) {
        let props: Vec<String> = ["P", "Q"][..k].iter().map(|s| s.to_string()).collect();
        let a = Alphabet::powerset(props).unwrap();
        let mut r = rng(seed);
        let e = random_expr(&mut r, &a, 10);
        let phi = to_multl(&e, &a).unwrap();
        let back = to_rll(&phi, &a).unwrap();
        for _ in 0..4 {
            let l = random_lasso(&mut r, &a, 3, 4);
            let m = member_oracle(&e, &l).unwrap();
            if m {
                prop_assert!(member_multl(&phi, &l, &a).unwrap());
            }
            prop_assert_eq!(member_oracle(&back, &l).unwrap(), m);
        }
    }

    #[test]
    fn maps_are_homomorphic(seed: u64) {
        let a = Alphabet::powerset(["P"]).unwrap();
        let mut r = rng(seed);
        let (e, f) = (random_expr(&mut r, &a, 6), random_expr(&mut r, &a, 6));
        let m = |x: &Expr| to_multl(x, &a).unwrap();
        let c = |x: &Expr| complement(x, &a);
        prop_assert_eq!(m(&Expr::sum(e.clone(), f.clone())), Formula::or(m(&e), m(&f)));
        prop_assert_eq!(m(&Expr::meet(e.clone(), f.clone())), Formula::and(m(&e), m(&f)));
        prop_assert_eq!(c(&Expr::meet(e.clone(), f.clone())), Expr::sum(c(&e), c(&f)));
        prop_assert_eq!(c(&Expr::mu("X", e.clone())), Expr::nu("X", c(&e)));
        prop_assert_eq!(m(&Expr::nu("X", e.clone())), Formula::nu("X", m(&e)));
    }
}
