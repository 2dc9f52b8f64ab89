use omega_rll::calculus::{Claim, Derivation, Rel, Statement, Step};
use omega_rll::syntax::{Expr, Formula};

/// Paths to every step, hypothetical blocks included.
fn step_paths(steps: &[Step], prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    for (i, s) in steps.iter().enumerate() {
        prefix.push(i);
        out.push(prefix.clone());
        if let Some(h) = &s.hyp {
            step_paths(&h.steps, prefix, out);
        }
        prefix.pop();
    }
}

fn step_at<'a>(steps: &'a mut [Step], path: &[usize]) -> &'a mut Step {
    let s = &mut steps[path[0]];
    if path.len() == 1 {
        s
    } else {
        step_at(&mut s.hyp.as_mut().unwrap().steps, &path[1..])
    }
}

/// Renames the `n`-th variable occurrence; `n` counts down.
fn rename_expr(e: &Expr, n: &mut usize) -> Expr {
    match e {
        Expr::Var(_) => {
            let hit = *n == 0;
            *n = n.wrapping_sub(1);
            if hit {
                Expr::var("Mutant")
            } else {
                e.clone()
            }
        }
        Expr::Act(a, b) => Expr::act(*a, rename_expr(b, n)),
        Expr::Sum(l, r) => {
            let l = rename_expr(l, n);
            Expr::sum(l, rename_expr(r, n))
        }
        Expr::Meet(l, r) => {
            let l = rename_expr(l, n);
            Expr::meet(l, rename_expr(r, n))
        }
        Expr::Mu(x, b) => Expr::mu(x.clone(), rename_expr(b, n)),
        Expr::Nu(x, b) => Expr::nu(x.clone(), rename_expr(b, n)),
        _ => e.clone(),
    }
}

fn rename_formula(f: &Formula, n: &mut usize) -> Formula {
    match f {
        Formula::Var(_) => {
            let hit = *n == 0;
            *n = n.wrapping_sub(1);
            if hit {
                Formula::var("Mutant")
            } else {
                f.clone()
            }
        }
        Formula::Or(l, r) => {
            let l = rename_formula(l, n);
            Formula::or(l, rename_formula(r, n))
        }
        Formula::And(l, r) => {
            let l = rename_formula(l, n);
            Formula::and(l, rename_formula(r, n))
        }
        Formula::Next(b) => Formula::next(rename_formula(b, n)),
        Formula::Mu(x, b) => Formula::mu(x.clone(), rename_formula(b, n)),
        Formula::Nu(x, b) => Formula::nu(x.clone(), rename_formula(b, n)),
        _ => f.clone(),
    }
}

/// All single-step mutants of one claim: sides swapped (for inequations
/// and implications with distinct sides) and each variable occurrence
/// renamed.
fn mutants(s: &Statement) -> Vec<Statement> {
    let mut out = Vec::new();
    match s {
        Statement::Rll(c) => {
            if c.rel == Rel::Leq && !c.lhs.alpha_eq(&c.rhs) {
                out.push(Statement::Rll(Claim { rel: c.rel, lhs: c.rhs.clone(), rhs: c.lhs.clone() }));
            }
            let mut count = usize::MAX;
            rename_expr(&Expr::sum(c.lhs.clone(), c.rhs.clone()), &mut count);
            for k in 0..usize::MAX - count {
                let mut n = k;
                let lhs = rename_expr(&c.lhs, &mut n);
                let rhs = rename_expr(&c.rhs, &mut n);
                out.push(Statement::Rll(Claim { rel: c.rel, lhs, rhs }));
            }
        }
        Statement::Multl(f) => {
            if let Some((a, b)) = f.as_implication() {
                if !a.alpha_eq(b) {
                    out.push(Statement::Multl(Formula::implies(b, a)));
                }
            }
            let mut count = usize::MAX;
            rename_formula(f, &mut count);
            for k in 0..usize::MAX - count {
                let mut n = k;
                out.push(Statement::Multl(rename_formula(f, &mut n)));
            }
        }
    }
    out
}

pub fn all_mutants(d: &Derivation) -> Vec<(String, Derivation)> {
    let mut paths = Vec::new();
    step_paths(&d.steps, &mut Vec::new(), &mut paths);
    let mut out = Vec::new();
    for path in paths {
        let mut probe = d.clone();
        let step = step_at(&mut probe.steps, &path);
        for m in mutants(&step.claim) {
            let mut mutant = d.clone();
            let target = step_at(&mut mutant.steps, &path);
            target.claim = m;
            out.push((target.id.clone(), mutant));
        }
    }
    out
}
