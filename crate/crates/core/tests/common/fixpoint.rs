use omega_rll::corpus::rng;
use omega_rll::semantics::{eval_rll, Env, Lasso, PositionSet};
use omega_rll::syntax::Expr;
use rand::Rng;

/// `mu` is the least prefixed point and `nu` the greatest postfixed point,
/// checked against every subset of positions.
pub fn extremal(e: &Expr, w: &Lasso) -> bool {
    let (x, body, least) = match e {
        Expr::Mu(x, b) => (x, b, true),
        Expr::Nu(x, b) => (x, b, false),
        _ => unreachable!(),
    };
    let n = w.len();
    let f = |s: &PositionSet| eval_rll(body, w, &Env::from([(x.clone(), s.clone())])).unwrap();
    let candidates: Vec<PositionSet> = (0..1u64 << n)
        .map(|m| PositionSet::from_mask(n, m))
        .filter(|s| if least { f(s).is_subset(s) } else { s.is_subset(&f(s)) })
        .collect();
    let got = eval_rll(e, w, &Env::new()).unwrap();
    candidates.contains(&got) && candidates.iter().all(|s| if least { got.is_subset(s) } else { s.is_subset(&got) })
}

/// One binder on top of a binder-free body over `X`.
pub fn one_binder(seed: u64, alphabet: &omega_rll::Alphabet) -> Expr {
    let mut r = rng(seed);
    fn body<R: Rng>(r: &mut R, a: &omega_rll::Alphabet, size: usize) -> Expr {
        if size <= 1 {
            return [Expr::Zero, Expr::Top, Expr::var("X")][r.gen_range(0..3)].clone();
        }
        let kinds = if size >= 3 { 3 } else { 1 };
        match r.gen_range(0..kinds) {
            0 => Expr::act(omega_rll::Letter(r.gen_range(0..a.len())), body(r, a, size - 1)),
            k => {
                let left = r.gen_range(1..size - 1);
                let (l, rr) = (body(r, a, left), body(r, a, size - 1 - left));
                if k == 1 {
                    Expr::sum(l, rr)
                } else {
                    Expr::meet(l, rr)
                }
            }
        }
    }
    let size = r.gen_range(1..8);
    let b = body(&mut r, alphabet, size);
    if r.gen_bool(0.5) {
        Expr::mu("X", b)
    } else {
        Expr::nu("X", b)
    }
}
