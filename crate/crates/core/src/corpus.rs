//! Seeded random expressions, formulas and lassos for self-tests.
//!
//! Expressions are built top-down from a node budget: a budget of one gives
//! a leaf (`0`, `top`, or a variable bound by an enclosing binder), larger
//! budgets pick a letter prefix, a binder, or a binary node whose budget is
//! split uniformly. Binder names come from `X`, `Y`, `Z`, so shadowing
//! happens.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::semantics::Lasso;
use crate::syntax::{Alphabet, Expr, Formula, Letter};

pub const DEFAULT_SEED: u64 = 0x5eed_2024;

/// Words over `{a, b}` with infinitely many `a`.
pub const INFINITELY_MANY_A: &str = "nu X. mu Y. (a.X + b.Y)";
/// Words over `{a, b}` with finitely many `b`.
pub const FINITELY_MANY_B: &str = "mu X. (a.X + b.X + nu Y. a.Y)";
/// Intersection of the two.
pub const BOTH: &str = "(nu X. mu Y. (a.X + b.Y)) & mu X. (a.X + b.X + nu Y. a.Y)";

const BINDERS: [&str; 3] = ["X", "Y", "Z"];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A closed expression with exactly `size` nodes.
pub fn random_expr_of_size<R: Rng>(rng: &mut R, alphabet: &Alphabet, size: usize) -> Expr {
    fn go<R: Rng>(rng: &mut R, a: &Alphabet, size: usize, scope: &mut Vec<&'static str>) -> Expr {
        if size <= 1 {
            let choices = if scope.is_empty() { 2 } else { 4 };
            return match rng.gen_range(0..choices) {
                0 => Expr::Zero,
                1 => Expr::Top,
                _ => Expr::var(*scope.choose(rng).expect("nonempty scope")),
            };
        }
        let kinds = if size >= 3 { 4 } else { 2 };
        match rng.gen_range(0..kinds) {
            0 => Expr::act(Letter(rng.gen_range(0..a.len())), go(rng, a, size - 1, scope)),
            1 => {
                let x = *BINDERS.choose(rng).expect("binders");
                scope.push(x);
                let body = go(rng, a, size - 1, scope);
                scope.pop();
                if rng.gen_bool(0.5) {
                    Expr::mu(x, body)
                } else {
                    Expr::nu(x, body)
                }
            }
            k => {
                let left = rng.gen_range(1..size - 1);
                let l = go(rng, a, left, scope);
                let r = go(rng, a, size - 1 - left, scope);
                if k == 2 {
                    Expr::sum(l, r)
                } else {
                    Expr::meet(l, r)
                }
            }
        }
    }
    go(rng, alphabet, size.max(1), &mut Vec::new())
}

/// A closed expression with between 1 and `max_size` nodes.
pub fn random_expr<R: Rng>(rng: &mut R, alphabet: &Alphabet, max_size: usize) -> Expr {
    let size = rng.gen_range(1..=max_size.max(1));
    random_expr_of_size(rng, alphabet, size)
}

/// A closed formula with between 1 and `max_size` nodes (powerset alphabet).
pub fn random_formula<R: Rng>(rng: &mut R, props: &[String], max_size: usize) -> Formula {
    fn go<R: Rng>(rng: &mut R, props: &[String], size: usize, scope: &mut Vec<&'static str>) -> Formula {
        if size <= 1 {
            let choices = 2 + if props.is_empty() { 0 } else { 2 } + if scope.is_empty() { 0 } else { 1 };
            let k = rng.gen_range(0..choices);
            return match k {
                0 => Formula::Bot,
                1 => Formula::Top,
                2 | 3 if !props.is_empty() => {
                    let p = props.choose(rng).expect("props").clone();
                    if k == 2 {
                        Formula::Prop(p)
                    } else {
                        Formula::NegProp(p)
                    }
                }
                _ => Formula::var(*scope.choose(rng).expect("nonempty scope")),
            };
        }
        let kinds = if size >= 3 { 4 } else { 2 };
        match rng.gen_range(0..kinds) {
            0 => Formula::next(go(rng, props, size - 1, scope)),
            1 => {
                let x = *BINDERS.choose(rng).expect("binders");
                scope.push(x);
                let body = go(rng, props, size - 1, scope);
                scope.pop();
                if rng.gen_bool(0.5) {
                    Formula::mu(x, body)
                } else {
                    Formula::nu(x, body)
                }
            }
            k => {
                let left = rng.gen_range(1..size - 1);
                let l = go(rng, props, left, scope);
                let r = go(rng, props, size - 1 - left, scope);
                if k == 2 {
                    Formula::or(l, r)
                } else {
                    Formula::and(l, r)
                }
            }
        }
    }
    let size = rng.gen_range(1..=max_size.max(1));
    go(rng, props, size, &mut Vec::new())
}

/// A normalized lasso with `|u| <= max_prefix` and `1 <= |v| <= max_period`
/// (before normalization).
pub fn random_lasso<R: Rng>(rng: &mut R, alphabet: &Alphabet, max_prefix: usize, max_period: usize) -> Lasso {
    let p = rng.gen_range(0..=max_prefix);
    let q = rng.gen_range(1..=max_period.max(1));
    let mut word = |len: usize| (0..len).map(|_| Letter(rng.gen_range(0..alphabet.len()))).collect::<Vec<_>>();
    let prefix = word(p);
    let period = word(q);
    Lasso::new(prefix, period).expect("nonempty period").normalize()
}

/// Plain alphabet `a`, `b`, `c`, ... with `k` letters.
pub fn letters(k: usize) -> Alphabet {
    let names: Vec<String> = (0..k).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    Alphabet::new(names).expect("valid names")
}
