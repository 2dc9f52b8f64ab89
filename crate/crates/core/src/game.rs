//! The evaluation game of an expression on a lasso, solved as a min-parity
//! game with Zielonka's recursive algorithm.

use std::collections::HashMap;

use crate::algebra::complement;
use crate::closure::{fl_closure, FlClosure};
use crate::error::Result;
use crate::semantics::Lasso;
use crate::syntax::{Alphabet, Expr};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Player {
    Eloise,
    Abelard,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Eloise => Player::Abelard,
            Player::Abelard => Player::Eloise,
        }
    }

    /// The player favoured by a priority under the min-parity convention.
    pub fn of_priority(p: usize) -> Player {
        if p.is_multiple_of(2) {
            Player::Eloise
        } else {
            Player::Abelard
        }
    }
}

/// A finite game graph. A player who must move from a position without
/// successors loses.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParityGame {
    pub owner: Vec<Player>,
    pub priority: Vec<usize>,
    pub successors: Vec<Vec<usize>>,
    pub initial: usize,
}

impl ParityGame {
    pub fn add_position(&mut self, owner: Player, priority: usize) -> usize {
        self.owner.push(owner);
        self.priority.push(priority);
        self.successors.push(Vec::new());
        self.owner.len() - 1
    }

    pub fn add_edge(&mut self, from: usize, to: usize) {
        self.successors[from].push(to);
    }

    pub fn len(&self) -> usize {
        self.owner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.owner.is_empty()
    }

    pub fn solve(&self) -> Solution {
        solve_parity(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub winner: Vec<Player>,
    /// Chosen successor for each Eloise position she wins (when she has a move).
    pub strategy_eloise: Vec<Option<usize>>,
    pub strategy_abelard: Vec<Option<usize>>,
}

impl Solution {
    pub fn strategy(&self, player: Player) -> &[Option<usize>] {
        match player {
            Player::Eloise => &self.strategy_eloise,
            Player::Abelard => &self.strategy_abelard,
        }
    }
}

struct Solver<'g> {
    game: &'g ParityGame,
    predecessors: Vec<Vec<usize>>,
}

/// Winning regions of one subgame, with a move for every winner-owned
/// position that has one.
struct Regions {
    winner: Vec<Option<Player>>,
    strategy: Vec<Option<usize>>,
}

impl Solver<'_> {
    /// Positions of `region` from which `player` can force a visit to
    /// `target`. Moves of `player` used to get there go into `strategy`.
    fn attractor(&self, region: &[bool], target: &[bool], player: Player, strategy: &mut [Option<usize>]) -> Vec<bool> {
        let g = self.game;
        let mut attr = target.to_vec();
        let mut count: Vec<usize> = (0..g.len())
            .map(|v| if region[v] { g.successors[v].iter().filter(|&&w| region[w]).count() } else { 0 })
            .collect();
        let mut queue: Vec<usize> = (0..g.len()).filter(|&v| attr[v]).collect();
        while let Some(w) = queue.pop() {
            for &u in &self.predecessors[w] {
                if !region[u] || attr[u] {
                    continue;
                }
                if g.owner[u] == player {
                    attr[u] = true;
                    strategy[u] = Some(w);
                    queue.push(u);
                } else {
                    count[u] -= 1;
                    if count[u] == 0 {
                        attr[u] = true;
                        queue.push(u);
                    }
                }
            }
        }
        attr
    }

    fn solve(&self, region: &[bool]) -> Regions {
        let g = self.game;
        let n = g.len();
        let mut out = Regions { winner: vec![None; n], strategy: vec![None; n] };
        if !region.iter().any(|&b| b) {
            return out;
        }

        // A player stuck at one of their own positions loses there, and so
        // does everything the opponent can force towards it.
        for stuck in [Player::Eloise, Player::Abelard] {
            let dead: Vec<bool> = (0..n)
                .map(|v| region[v] && g.owner[v] == stuck && !g.successors[v].iter().any(|&w| region[w]))
                .collect();
            if !dead.iter().any(|&b| b) {
                continue;
            }
            let winner = stuck.opponent();
            let attr = self.attractor(region, &dead, winner, &mut out.strategy);
            let rest: Vec<bool> = (0..n).map(|v| region[v] && !attr[v]).collect();
            let sub = self.solve(&rest);
            for v in 0..n {
                if attr[v] {
                    out.winner[v] = Some(winner);
                } else if rest[v] {
                    out.winner[v] = sub.winner[v];
                    out.strategy[v] = sub.strategy[v];
                }
            }
            return out;
        }

        let p = (0..n).filter(|&v| region[v]).map(|v| g.priority[v]).min().expect("nonempty");
        let player = Player::of_priority(p);
        let top: Vec<bool> = (0..n).map(|v| region[v] && g.priority[v] == p).collect();
        let mut strategy = vec![None; n];
        for v in (0..n).filter(|&v| top[v] && g.owner[v] == player) {
            strategy[v] = g.successors[v].iter().copied().find(|&w| region[w]);
        }
        let attr = self.attractor(region, &top, player, &mut strategy);
        let rest: Vec<bool> = (0..n).map(|v| region[v] && !attr[v]).collect();
        let sub = self.solve(&rest);
        let opponent = player.opponent();
        if !(0..n).any(|v| sub.winner[v] == Some(opponent)) {
            for v in (0..n).filter(|&v| region[v]) {
                out.winner[v] = Some(player);
                out.strategy[v] = if rest[v] { sub.strategy[v] } else { strategy[v] };
            }
            return out;
        }

        let lost: Vec<bool> = (0..n).map(|v| sub.winner[v] == Some(opponent)).collect();
        let mut escape = vec![None; n];
        for v in (0..n).filter(|&v| lost[v]) {
            escape[v] = sub.strategy[v];
        }
        let attr = self.attractor(region, &lost, opponent, &mut escape);
        let rest: Vec<bool> = (0..n).map(|v| region[v] && !attr[v]).collect();
        let sub = self.solve(&rest);
        for v in (0..n).filter(|&v| region[v]) {
            if attr[v] {
                out.winner[v] = Some(opponent);
                out.strategy[v] = escape[v];
            } else {
                out.winner[v] = sub.winner[v];
                out.strategy[v] = sub.strategy[v];
            }
        }
        out
    }
}

/// Solves `game` completely: every position gets a winner, and each winner
/// gets a positional strategy on the positions they own and win.
pub fn solve_parity(game: &ParityGame) -> Solution {
    let n = game.len();
    let mut predecessors = vec![Vec::new(); n];
    for (v, succ) in game.successors.iter().enumerate() {
        for &w in succ {
            predecessors[w].push(v);
        }
    }
    let solver = Solver { game, predecessors };
    let regions = solver.solve(&vec![true; n]);
    let winner: Vec<Player> = regions.winner.iter().map(|w| w.expect("every position is decided")).collect();
    let pick = |player: Player| -> Vec<Option<usize>> {
        (0..n)
            .map(|v| if winner[v] == player && game.owner[v] == player { regions.strategy[v] } else { None })
            .collect()
    };
    Solution { strategy_eloise: pick(Player::Eloise), strategy_abelard: pick(Player::Abelard), winner }
}

/// The evaluation game of an expression on a lasso, restricted to the
/// positions reachable from `(0, e)`.
#[derive(Debug, Clone)]
pub struct Arena {
    pub game: ParityGame,
    /// `(lasso position, closure member)` of each game position.
    pub positions: Vec<(usize, usize)>,
}

pub fn build_arena(e: &Expr, w: &Lasso) -> Result<Arena> {
    Ok(arena_of(&fl_closure(e)?, w))
}

pub fn arena_of(closure: &FlClosure, w: &Lasso) -> Arena {
    let mut game = ParityGame::default();
    let mut positions = Vec::new();
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut intern = |game: &mut ParityGame, positions: &mut Vec<(usize, usize)>, key: (usize, usize)| {
        if let Some(&v) = index.get(&key) {
            return (v, false);
        }
        let owner = match closure.member(key.1) {
            Expr::Top | Expr::Meet(..) => Player::Abelard,
            _ => Player::Eloise,
        };
        let v = game.add_position(owner, closure.priority(key.1));
        positions.push(key);
        index.insert(key, v);
        (v, true)
    };
    let (root, _) = intern(&mut game, &mut positions, (0, 0));
    game.initial = root;
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        let (i, m) = positions[v];
        for edge in closure.successors(m) {
            let next = match edge.kind {
                crate::closure::EdgeKind::Act(a) if w.letter_at(i) == a => (w.succ(i), edge.target),
                crate::closure::EdgeKind::Act(_) => continue,
                _ => (i, edge.target),
            };
            let (u, fresh) = intern(&mut game, &mut positions, next);
            game.add_edge(v, u);
            if fresh {
                stack.push(u);
            }
        }
    }
    Arena { game, positions }
}

/// Membership by the evaluation game: Eloise wins from `(0, e)`.
pub fn member_game(e: &Expr, w: &Lasso) -> Result<bool> {
    Ok(GameEvaluator::new(e)?.member(w))
}

/// Keeps the closure of one expression for repeated membership queries.
#[derive(Debug, Clone)]
pub struct GameEvaluator {
    closure: FlClosure,
}

impl GameEvaluator {
    pub fn new(e: &Expr) -> Result<GameEvaluator> {
        Ok(GameEvaluator { closure: fl_closure(e)? })
    }

    pub fn closure(&self) -> &FlClosure {
        &self.closure
    }

    pub fn member(&self, w: &Lasso) -> bool {
        let arena = arena_of(&self.closure, w);
        let solution = arena.game.solve();
        solution.winner[arena.game.initial] == Player::Eloise
    }
}

/// Bounds for the lasso search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    pub max_prefix: usize,
    pub max_period: usize,
}

/// The first lasso within `bounds` (in enumeration order) on which `e` and
/// `f` disagree. `None` only means no difference was found up to the bounds.
pub fn equiv_bounded(e: &Expr, f: &Expr, alphabet: &Alphabet, bounds: Bounds) -> Result<Option<Lasso>> {
    let ge = GameEvaluator::new(e)?;
    let gf = GameEvaluator::new(f)?;
    Ok(Lasso::enumerate(alphabet, bounds.max_prefix, bounds.max_period).find(|w| ge.member(w) != gf.member(w)))
}

/// The first lasso within `bounds` in the language of `e` but not of `f`,
/// found as a member of `e & f^c`.
pub fn inclusion_bounded(e: &Expr, f: &Expr, alphabet: &Alphabet, bounds: Bounds) -> Result<Option<Lasso>> {
    let diff = GameEvaluator::new(&Expr::meet(e.clone(), complement(f, alphabet)))?;
    Ok(Lasso::enumerate(alphabet, bounds.max_prefix, bounds.max_period).find(|w| diff.member(w)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_expr;

    fn single(owner: Player, priority: usize, self_loop: bool) -> ParityGame {
        let mut g = ParityGame::default();
        g.add_position(owner, priority);
        if self_loop {
            g.add_edge(0, 0);
        }
        g
    }

    #[test]
    fn one_position_games() {
        assert_eq!(single(Player::Abelard, 0, true).solve().winner, [Player::Eloise]);
        assert_eq!(single(Player::Eloise, 1, true).solve().winner, [Player::Abelard]);
        assert_eq!(single(Player::Eloise, 0, false).solve().winner, [Player::Abelard]);
        assert_eq!(single(Player::Abelard, 1, false).solve().winner, [Player::Eloise]);
        let s = single(Player::Eloise, 2, true).solve();
        assert_eq!(s.strategy_eloise, [Some(0)]);
    }

    #[test]
    fn escaping_to_a_good_cycle() {
        // 0 (Eloise, 1) -> {0, 1}; 1 (Abelard, 2) -> {1}
        let mut g = ParityGame::default();
        g.add_position(Player::Eloise, 1);
        g.add_position(Player::Abelard, 2);
        g.add_edge(0, 0);
        g.add_edge(0, 1);
        g.add_edge(1, 1);
        let s = g.solve();
        assert_eq!(s.winner, [Player::Eloise, Player::Eloise]);
        assert_eq!(s.strategy_eloise[0], Some(1));
    }

    #[test]
    fn arenas() {
        let a = Alphabet::new(["a", "b"]).unwrap();
        let arena = build_arena(&Expr::Zero, &Lasso::parse("(a)", &a).unwrap()).unwrap();
        assert_eq!(arena.game.len(), 1);
        assert_eq!(arena.game.owner, [Player::Eloise]);
        assert!(arena.game.successors[0].is_empty());

        let mu_ax = parse_expr("mu X. a.X", &a).unwrap();
        let arena = build_arena(&mu_ax, &Lasso::parse("(b)", &a).unwrap()).unwrap();
        assert_eq!(arena.positions, [(0, 0), (0, 1)]);
        assert!(arena.game.successors[1].is_empty());

        let ia = parse_expr("nu X. mu Y. (a.X + b.Y)", &a).unwrap();
        let arena = build_arena(&ia, &Lasso::parse("(ab)", &a).unwrap()).unwrap();
        let sums = arena.positions.iter().filter(|&&(_, m)| m == 2).count();
        assert_eq!(sums, 2);
        assert!(arena.positions.len() <= 10);
    }

    #[test]
    fn membership_examples() {
        let a = Alphabet::new(["a", "b"]).unwrap();
        let ia = parse_expr("nu X. mu Y. (a.X + b.Y)", &a).unwrap();
        let fb = parse_expr("mu X. (a.X + b.X + nu Y. a.Y)", &a).unwrap();
        let w = |s: &str| Lasso::parse(s, &a).unwrap();
        assert!(member_game(&ia, &w("(ab)")).unwrap());
        assert!(member_game(&Expr::meet(ia.clone(), fb.clone()), &w("bb(a)")).unwrap());
        assert!(!member_game(&parse_expr("nu X. a.X", &a).unwrap(), &w("(ab)")).unwrap());
    }

    #[test]
    fn bounded_searches() {
        let a = Alphabet::new(["a", "b"]).unwrap();
        let nu_ax = parse_expr("nu X. a.X", &a).unwrap();
        let ia = parse_expr("nu X. mu Y. (a.X + b.Y)", &a).unwrap();
        let b = |p, q| Bounds { max_prefix: p, max_period: q };
        let cex = equiv_bounded(&nu_ax, &Expr::Top, &a, b(1, 2)).unwrap().unwrap();
        assert_eq!(cex.to_text(&a), "(b)");
        assert_eq!(equiv_bounded(&ia, &ia, &a, b(2, 2)).unwrap(), None);
        assert_eq!(inclusion_bounded(&nu_ax, &ia, &a, b(2, 2)).unwrap(), None);
        let cex = inclusion_bounded(&Expr::Top, &nu_ax, &a, b(1, 1)).unwrap().unwrap();
        assert_eq!(cex.to_text(&a), "(b)");
        assert_eq!(inclusion_bounded(&Expr::Zero, &nu_ax, &a, b(2, 2)).unwrap(), None);
    }
}
