//! Variable handling shared by expressions and formulas: free variables,
//! capture-avoiding substitution and alpha-canonical forms.

use std::collections::BTreeSet;

pub(crate) trait Binding: Clone + Sized {
    fn mk_var(name: String) -> Self;
    fn as_var(&self) -> Option<&str>;
    /// Binder name and body, if this node is a fixpoint.
    fn as_binder(&self) -> Option<(&str, &Self)>;
    /// Same binder kind as `self`, with a new name and body.
    fn rebind(&self, name: String, body: Self) -> Self;
    fn children(&self) -> Vec<&Self>;
    /// Rebuilds a non-binder, non-variable node from mapped children.
    fn map_children(&self, f: &mut dyn FnMut(&Self) -> Self) -> Self;
}

pub(crate) fn free_vars<T: Binding>(t: &T) -> BTreeSet<String> {
    fn go<T: Binding>(t: &T, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        if let Some(v) = t.as_var() {
            if !bound.iter().any(|b| b == v) {
                out.insert(v.to_string());
            }
        } else if let Some((x, body)) = t.as_binder() {
            bound.push(x.to_string());
            go(body, bound, out);
            bound.pop();
        } else {
            for c in t.children() {
                go(c, bound, out);
            }
        }
    }
    let mut out = BTreeSet::new();
    go(t, &mut Vec::new(), &mut out);
    out
}

pub(crate) fn occurs_free<T: Binding>(t: &T, x: &str) -> bool {
    if let Some(v) = t.as_var() {
        v == x
    } else if let Some((y, body)) = t.as_binder() {
        y != x && occurs_free(body, x)
    } else {
        t.children().into_iter().any(|c| occurs_free(c, x))
    }
}

pub(crate) fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    let mut name = format!("{base}'");
    while avoid.contains(&name) {
        name.push('\'');
    }
    name
}

pub(crate) fn substitute<T: Binding>(t: &T, x: &str, replacement: &T) -> T {
    let repl_fv = free_vars(replacement);
    subst_inner(t, x, replacement, &repl_fv)
}

fn subst_inner<T: Binding>(t: &T, x: &str, r: &T, r_fv: &BTreeSet<String>) -> T {
    if let Some(v) = t.as_var() {
        return if v == x { r.clone() } else { t.clone() };
    }
    if let Some((y, body)) = t.as_binder() {
        if y == x || !occurs_free(body, x) {
            return t.clone();
        }
        if r_fv.contains(y) {
            let mut avoid = free_vars(body);
            avoid.extend(r_fv.iter().cloned());
            avoid.insert(x.to_string());
            let y2 = fresh_name(y, &avoid);
            let renamed = subst_inner(body, y, &T::mk_var(y2.clone()), &BTreeSet::from([y2.clone()]));
            return t.rebind(y2, subst_inner(&renamed, x, r, r_fv));
        }
        return t.rebind(y.to_string(), subst_inner(body, x, r, r_fv));
    }
    t.map_children(&mut |c| subst_inner(c, x, r, r_fv))
}

/// Renames every bound variable to `%<depth>`, so alpha-equivalent terms
/// become structurally equal. Free variables are left alone.
pub(crate) fn canonical<T: Binding>(t: &T) -> T {
    fn go<T: Binding>(t: &T, env: &mut Vec<(String, String)>) -> T {
        if let Some(v) = t.as_var() {
            return match env.iter().rev().find(|(from, _)| from == v) {
                Some((_, to)) => T::mk_var(to.clone()),
                None => t.clone(),
            };
        }
        if let Some((y, body)) = t.as_binder() {
            let name = format!("%{}", env.len());
            env.push((y.to_string(), name.clone()));
            let body = go(body, env);
            env.pop();
            return t.rebind(name, body);
        }
        t.map_children(&mut |c| go(c, env))
    }
    go(t, &mut Vec::new())
}

/// All names appearing in the term, bound or free.
pub(crate) fn all_names<T: Binding>(t: &T, out: &mut BTreeSet<String>) {
    if let Some(v) = t.as_var() {
        out.insert(v.to_string());
    } else if let Some((y, body)) = t.as_binder() {
        out.insert(y.to_string());
        all_names(body, out);
    } else {
        for c in t.children() {
            all_names(c, out);
        }
    }
}
