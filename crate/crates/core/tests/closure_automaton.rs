use std::collections::HashSet;

use omega_rll::automaton::{apa_of, build_apa, Owner};
use omega_rll::closure::fl_closure;
use omega_rll::corpus::{self, letters, random_expr, rng};
use omega_rll::syntax::{parse_closed_expr, Expr};
use proptest::prelude::*;

/// One FL step, straight from the definition.
fn steps(e: &Expr) -> Vec<Expr> {
    match e {
        Expr::Act(_, f) => vec![(**f).clone()],
        Expr::Sum(l, r) | Expr::Meet(l, r) => vec![(**l).clone(), (**r).clone()],
        Expr::Mu(x, b) | Expr::Nu(x, b) => vec![b.substitute(x, e)],
        _ => vec![],
    }
}

fn closure_set(e: &Expr) -> HashSet<Expr> {
    let mut seen = HashSet::from([e.canonical()]);
    let mut todo = vec![e.clone()];
    while let Some(f) = todo.pop() {
        for g in steps(&f) {
            if seen.insert(g.canonical()) {
                todo.push(g);
            }
        }
    }
    seen
}

fn closed_subterms(e: &Expr, out: &mut HashSet<Expr>) {
    if e.is_closed() {
        out.insert(e.canonical());
    }
    for c in e.children() {
        closed_subterms(c, out);
    }
}

#[test]
fn closure_examples() {
    let a = letters(2);
    let c = fl_closure(&parse_closed_expr("mu X. a.X", &a).unwrap()).unwrap();
    assert_eq!(c.len(), 2);
    assert_eq!(c.priorities(), &[1, 2]);
    let c = fl_closure(&Expr::Zero).unwrap();
    assert_eq!((c.len(), c.edges().len(), c.priority(0)), (1, 0, 0));
    let ia = parse_closed_expr(corpus::INFINITELY_MANY_A, &a).unwrap();
    let c = fl_closure(&ia).unwrap();
    assert_eq!(c.len(), 5);
    let g = parse_closed_expr("mu Y. a.(nu X. mu Y. a.X + b.Y) + b.Y", &a).unwrap();
    assert_eq!(c.priority(0), 0);
    assert_eq!(c.priority(c.index_of(&g).unwrap()), 5);
    assert!(fl_closure(&Expr::var("X")).is_err());
}

#[test]
fn automaton_examples() {
    let a = letters(2);
    let apa = apa_of(&parse_closed_expr("mu X. a.X", &a).unwrap(), &a).unwrap();
    assert_eq!((apa.num_states(), apa.letter_transitions.len(), apa.epsilon_transitions.len()), (2, 1, 1));
    let dot = apa.to_dot();
    assert_eq!(dot.matches("[label=\"a\"]").count(), 1);
    assert_eq!(dot.matches("->").count(), 2);

    let zero = apa_of(&Expr::Zero, &a).unwrap();
    assert_eq!(zero.owner, vec![Owner::Existential]);
    assert_eq!(
        zero.to_dot(),
        "digraph apa {\n  rankdir=LR;\n  s0 [shape=diamond, label=\"0 [p=0]\", peripheries=2];\n}\n"
    );

    let both = parse_closed_expr(corpus::BOTH, &a).unwrap();
    let apa = apa_of(&both, &a).unwrap();
    assert_eq!(apa.owner[apa.initial], Owner::Universal);
    let root_eps: Vec<_> = apa.epsilon_transitions.iter().filter(|(p, _)| *p == apa.initial).collect();
    assert_eq!(root_eps.len(), 2);
    // The root, five states for the first component and seven for the second.
    assert_eq!(apa.num_states(), 1 + 5 + 7);
    assert_eq!(apa.to_dot(), apa_of(&both, &a).unwrap().to_dot());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn closure_invariants(seed: u64, k in 1usize..4) {
        let a = letters(k);
        let e = random_expr(&mut rng(seed), &a, 15);
        let c = fl_closure(&e).unwrap();
        let members: HashSet<Expr> = c.members().iter().map(Expr::canonical).collect();
        prop_assert_eq!(members.len(), c.len());
        prop_assert_eq!(&members, &closure_set(&e));
        prop_assert!(c.len() <= e.size() + 1);
        for (i, m) in c.members().iter().enumerate() {
            let want: Vec<Expr> = steps(m).iter().map(Expr::canonical).collect();
            let got: Vec<Expr> = c.successors(i).map(|edge| c.member(edge.target).canonical()).collect();
            prop_assert_eq!(got, want);
            match m {
                Expr::Mu(..) => prop_assert!(c.priority(i) % 2 == 1),
                _ => prop_assert!(c.priority(i) % 2 == 0),
            }
            let mut subs = HashSet::new();
            closed_subterms(m, &mut subs);
            for (j, f) in c.members().iter().enumerate() {
                let below = subs.contains(&f.canonical());
                prop_assert_eq!(c.is_subformula(j, i), below);
                if below && i != j {
                    prop_assert!(c.priority(j) < c.priority(i));
                }
            }
        }
        // Minimality: every member is reachable from the root.
        let mut reach = vec![false; c.len()];
        let mut todo = vec![0];
        reach[0] = true;
        while let Some(i) = todo.pop() {
            for edge in c.successors(i) {
                if !reach[edge.target] {
                    reach[edge.target] = true;
                    todo.push(edge.target);
                }
            }
        }
        prop_assert!(reach.iter().all(|&r| r));
    }

    #[test]
    fn automaton_shape(seed: u64, k in 1usize..4) {
        let a = letters(k);
        let e = random_expr(&mut rng(seed), &a, 15);
        let c = fl_closure(&e).unwrap();
        let apa = build_apa(&c, &a);
        for (i, m) in c.members().iter().enumerate() {
            let letters_out = apa.letter_transitions.iter().filter(|t| t.0 == i).count();
            let eps_out = apa.epsilon_transitions.iter().filter(|t| t.0 == i).count();
            let want = match m {
                Expr::Act(..) => (1, 0),
                Expr::Sum(..) | Expr::Meet(..) => (0, 2),
                Expr::Mu(..) | Expr::Nu(..) => (0, 1),
                _ => (0, 0),
            };
            prop_assert_eq!((letters_out, eps_out), want);
            let owner = match m {
                Expr::Top | Expr::Meet(..) => Owner::Universal,
                _ => Owner::Existential,
            };
            prop_assert_eq!(apa.owner[i], owner);
        }
    }
}
