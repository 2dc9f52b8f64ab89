//! Lasso words and the fixpoint-iteration semantics of expressions and
//! formulas on them.
//!
//! A lasso `u(v)` has `|u| + |v|` positions; position `i` stands for the
//! suffix starting there. Every expression denotes a monotone operator on
//! sets of positions, so least and greatest fixpoints are reached by Kleene
//! iteration from the empty and the full set.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::syntax::{Alphabet, Expr, Formula, Letter};

/// The ultimately periodic word `prefix . period^omega`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lasso {
    prefix: Vec<Letter>,
    period: Vec<Letter>,
}

impl Lasso {
    pub fn new(prefix: Vec<Letter>, period: Vec<Letter>) -> Result<Lasso> {
        if period.is_empty() {
            return Err(Error::Lasso("the period must be nonempty".into()));
        }
        Ok(Lasso { prefix, period })
    }

    /// Parses `u(v)`. Plain letters are matched longest-first and may be
    /// separated by spaces; powerset letters are written `{P,Q}`.
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Lasso> {
        let text = text.trim();
        let open = text.find('(').ok_or_else(|| Error::Lasso(format!("`{text}`: expected `u(v)`")))?;
        if !text.ends_with(')') || text[open + 1..text.len() - 1].contains(['(', ')']) {
            return Err(Error::Lasso(format!("`{text}`: expected `u(v)`")));
        }
        let prefix = parse_letters(&text[..open], alphabet)?;
        let period = parse_letters(&text[open + 1..text.len() - 1], alphabet)?;
        Lasso::new(prefix, period)
    }

    pub fn prefix(&self) -> &[Letter] {
        &self.prefix
    }

    pub fn period(&self) -> &[Letter] {
        &self.period
    }

    /// Number of positions, `|u| + |v|`.
    pub fn len(&self) -> usize {
        self.prefix.len() + self.period.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn letter_at(&self, i: usize) -> Letter {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.period[i - self.prefix.len()]
        }
    }

    pub fn succ(&self, i: usize) -> usize {
        if i + 1 < self.len() {
            i + 1
        } else {
            self.prefix.len()
        }
    }

    /// The first `k` letters of the infinite word.
    pub fn unroll(&self, k: usize) -> Vec<Letter> {
        let mut out = Vec::with_capacity(k);
        let mut i = 0;
        for _ in 0..k {
            out.push(self.letter_at(i));
            i = self.succ(i);
        }
        out
    }

    /// Canonical representative: the prefix is shortened as long as its
    /// last letter can be absorbed into the period, and the period is
    /// reduced to its primitive root.
    pub fn normalize(&self) -> Lasso {
        let mut prefix = self.prefix.clone();
        let mut period = self.period.clone();
        while let (Some(&u), Some(&v)) = (prefix.last(), period.last()) {
            if u != v {
                break;
            }
            prefix.pop();
            period.rotate_right(1);
        }
        let n = period.len();
        let root = (1..=n).find(|&d| n.is_multiple_of(d) && (d..n).all(|i| period[i] == period[i - d])).unwrap_or(n);
        period.truncate(root);
        Lasso { prefix, period }
    }

    pub fn is_normalized(&self) -> bool {
        *self == self.normalize()
    }

    pub fn to_text(&self, alphabet: &Alphabet) -> String {
        let sep =
            if alphabet.names().iter().all(|n| n.chars().count() == 1) || alphabet.is_powerset() { "" } else { " " };
        let word = |w: &[Letter]| w.iter().map(|&l| alphabet.name(l)).collect::<Vec<_>>().join(sep);
        format!("{}({})", word(&self.prefix), word(&self.period))
    }

    /// All normalized lassos with `|u| <= max_prefix` and
    /// `1 <= |v| <= max_period`, ordered by total length, then prefix
    /// length, then prefix and period lexicographically.
    pub fn enumerate(alphabet: &Alphabet, max_prefix: usize, max_period: usize) -> impl Iterator<Item = Lasso> {
        let k = alphabet.len();
        (1..=max_prefix + max_period).flat_map(move |total| {
            let lo = total.saturating_sub(max_period);
            let hi = max_prefix.min(total - 1);
            (lo..=hi).flat_map(move |p| {
                let q = total - p;
                words(k, p).flat_map(move |u| {
                    words(k, q).filter_map(move |v| {
                        let l = Lasso { prefix: u.clone(), period: v };
                        l.is_normalized().then_some(l)
                    })
                })
            })
        })
    }
}

fn words(k: usize, len: usize) -> impl Iterator<Item = Vec<Letter>> {
    let count = k.checked_pow(len as u32).expect("word count overflow");
    (0..count).map(move |mut c| {
        let mut w = vec![Letter(0); len];
        for slot in w.iter_mut().rev() {
            *slot = Letter(c % k);
            c /= k;
        }
        w
    })
}

fn parse_letters(text: &str, alphabet: &Alphabet) -> Result<Vec<Letter>> {
    let mut out = Vec::new();
    let mut rest = text.trim_start();
    while !rest.is_empty() {
        if alphabet.is_powerset() {
            let close = rest
                .strip_prefix('{')
                .and_then(|r| r.find('}'))
                .ok_or_else(|| Error::Lasso(format!("expected `{{...}}` at `{rest}`")))?;
            let inner = &rest[1..close + 1];
            let props = inner.split(',').map(str::trim).filter(|p| !p.is_empty());
            out.push(alphabet.letter_of_props(props)?);
            rest = &rest[close + 2..];
        } else {
            let best = alphabet
                .letters()
                .filter(|&l| rest.starts_with(alphabet.name(l)))
                .max_by_key(|&l| alphabet.name(l).len())
                .ok_or_else(|| Error::Lasso(format!("no letter matches `{rest}`")))?;
            out.push(best);
            rest = &rest[alphabet.name(best).len()..];
        }
        rest = rest.trim_start();
    }
    Ok(out)
}

/// A set of lasso positions `{0, .., n-1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PositionSet {
    n: usize,
    bits: Vec<u64>,
}

impl PositionSet {
    pub fn empty(n: usize) -> PositionSet {
        PositionSet { n, bits: vec![0; n.div_ceil(64)] }
    }

    pub fn full(n: usize) -> PositionSet {
        let mut s = PositionSet::empty(n);
        for i in 0..n {
            s.insert(i);
        }
        s
    }

    pub fn from_positions(n: usize, positions: impl IntoIterator<Item = usize>) -> PositionSet {
        let mut s = PositionSet::empty(n);
        for i in positions {
            s.insert(i);
        }
        s
    }

    /// The set whose members are the set bits of `mask`.
    pub fn from_mask(n: usize, mask: u64) -> PositionSet {
        PositionSet::from_positions(n, (0..n.min(64)).filter(|i| mask >> i & 1 == 1))
    }

    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.n && self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.n, "position {i} out of range");
        self.bits[i / 64] |= 1 << (i % 64);
    }

    pub fn union(&self, other: &PositionSet) -> PositionSet {
        self.zip(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &PositionSet) -> PositionSet {
        self.zip(other, |a, b| a & b)
    }

    pub fn complement(&self) -> PositionSet {
        let full = PositionSet::full(self.n);
        full.zip(self, |a, b| a & !b)
    }

    pub fn is_subset(&self, other: &PositionSet) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(|&i| self.contains(i))
    }

    fn zip(&self, other: &PositionSet, f: impl Fn(u64, u64) -> u64) -> PositionSet {
        assert_eq!(self.n, other.n, "position sets over different lassos");
        PositionSet { n: self.n, bits: self.bits.iter().zip(&other.bits).map(|(&a, &b)| f(a, b)).collect() }
    }
}

impl fmt::Debug for PositionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Values of free variables.
pub type Env = BTreeMap<String, PositionSet>;

/// Positions `i` whose letter is `a` and whose successor lies in `s`.
fn pre_image(w: &Lasso, s: &PositionSet, letter: impl Fn(Letter) -> bool) -> PositionSet {
    PositionSet::from_positions(w.len(), (0..w.len()).filter(|&i| letter(w.letter_at(i)) && s.contains(w.succ(i))))
}

fn iterate(n: usize, least: bool, mut step: impl FnMut(&PositionSet) -> Result<PositionSet>) -> Result<PositionSet> {
    let mut s = if least { PositionSet::empty(n) } else { PositionSet::full(n) };
    loop {
        let next = step(&s)?;
        if next == s {
            return Ok(s);
        }
        s = next;
    }
}

struct Scope<'a> {
    outer: &'a Env,
    inner: Vec<(String, PositionSet)>,
}

impl Scope<'_> {
    fn lookup(&self, x: &str) -> Result<&PositionSet> {
        self.inner
            .iter()
            .rev()
            .find(|(y, _)| y == x)
            .map(|(_, s)| s)
            .or_else(|| self.outer.get(x))
            .ok_or_else(|| Error::UnboundVariable(x.to_string()))
    }
}

/// The set of positions whose suffix belongs to the language of `e`.
pub fn eval_rll(e: &Expr, w: &Lasso, env: &Env) -> Result<PositionSet> {
    let mut scope = Scope { outer: env, inner: Vec::new() };
    eval_expr(e, w, &mut scope)
}

fn eval_expr(e: &Expr, w: &Lasso, scope: &mut Scope<'_>) -> Result<PositionSet> {
    let n = w.len();
    Ok(match e {
        Expr::Var(x) => scope.lookup(x)?.clone(),
        Expr::Zero => PositionSet::empty(n),
        Expr::Top => PositionSet::full(n),
        Expr::Act(a, f) => pre_image(w, &eval_expr(f, w, scope)?, |b| b == *a),
        Expr::Sum(l, r) => eval_expr(l, w, scope)?.union(&eval_expr(r, w, scope)?),
        Expr::Meet(l, r) => eval_expr(l, w, scope)?.intersection(&eval_expr(r, w, scope)?),
        Expr::Mu(x, body) | Expr::Nu(x, body) => iterate(n, e.is_mu(), |s| {
            scope.inner.push((x.clone(), s.clone()));
            let r = eval_expr(body, w, scope);
            scope.inner.pop();
            r
        })?,
    })
}

/// Whether `w` belongs to the language of the closed expression `e`.
pub fn member_oracle(e: &Expr, w: &Lasso) -> Result<bool> {
    let free = e.free_vars();
    if !free.is_empty() {
        return Err(Error::OpenExpression(free.into_iter().collect()));
    }
    Ok(eval_rll(e, w, &Env::new())?.contains(0))
}

/// The set of positions satisfying `phi` (powerset alphabets only).
pub fn eval_multl(phi: &Formula, w: &Lasso, alphabet: &Alphabet, env: &Env) -> Result<PositionSet> {
    if !alphabet.is_powerset() {
        return Err(Error::NotPowerset);
    }
    let mut scope = Scope { outer: env, inner: Vec::new() };
    eval_formula(phi, w, alphabet, &mut scope)
}

fn eval_formula(phi: &Formula, w: &Lasso, a: &Alphabet, scope: &mut Scope<'_>) -> Result<PositionSet> {
    let n = w.len();
    let prop = |p: &str| a.prop_index(p).ok_or_else(|| Error::Alphabet(format!("undeclared proposition `{p}`")));
    Ok(match phi {
        Formula::Bot => PositionSet::empty(n),
        Formula::Top => PositionSet::full(n),
        Formula::Prop(p) => {
            let j = prop(p)?;
            PositionSet::from_positions(n, (0..n).filter(|&i| a.holds(w.letter_at(i), j)))
        }
        Formula::NegProp(p) => {
            let j = prop(p)?;
            PositionSet::from_positions(n, (0..n).filter(|&i| !a.holds(w.letter_at(i), j)))
        }
        Formula::Var(x) => scope.lookup(x)?.clone(),
        Formula::Or(l, r) => eval_formula(l, w, a, scope)?.union(&eval_formula(r, w, a, scope)?),
        Formula::And(l, r) => eval_formula(l, w, a, scope)?.intersection(&eval_formula(r, w, a, scope)?),
        Formula::Next(f) => pre_image(w, &eval_formula(f, w, a, scope)?, |_| true),
        Formula::Mu(x, body) | Formula::Nu(x, body) => iterate(n, matches!(phi, Formula::Mu(..)), |s| {
            scope.inner.push((x.clone(), s.clone()));
            let r = eval_formula(body, w, a, scope);
            scope.inner.pop();
            r
        })?,
    })
}

/// Whether the closed formula `phi` holds at the start of `w`.
pub fn member_multl(phi: &Formula, w: &Lasso, alphabet: &Alphabet) -> Result<bool> {
    let free = phi.free_vars();
    if !free.is_empty() {
        return Err(Error::OpenExpression(free.into_iter().collect()));
    }
    Ok(eval_multl(phi, w, alphabet, &Env::new())?.contains(0))
}
