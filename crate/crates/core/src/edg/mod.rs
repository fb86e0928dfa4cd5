//! Extended dependency graphs and the encoding of ATL model checking into them.
//!
//! A configuration `⟨q, φ⟩` asks whether `q ⊨ φ`; triples `⟨q, V, φ⟩` arise from despite-until
//! and ask whether some completion of the partial move `V` keeps `φ` alive. Hyper-edges are
//! conjunctions over their targets, a configuration is the disjunction of its hyper-edges, and
//! negation edges read the complement of an already settled configuration.

mod graph;

pub use graph::{build_graph, Component, Edg};

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use dashmap::DashMap;

use crate::atl::{FormulaArena, FormulaId, Node, PlayerSet};
use crate::error::ModelError;
use crate::game::{GameStructure, Interner, MoveVectors};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConfigId(pub u32);

impl ConfigId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A partial move: per player either a fixed move or `None` for all of that player's moves.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialMove(pub Box<[Option<u16>]>);

impl PartialMove {
    /// The move vectors in `V`, in lexicographic order.
    pub fn vectors(&self, counts: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
        let free: Vec<usize> = counts
            .iter()
            .zip(self.0.iter())
            .map(|(&d, m)| if m.is_some() { 1 } else { d })
            .collect();
        MoveVectors::new(&free).map(move |v| {
            v.into_iter()
                .zip(self.0.iter())
                .map(|(j, m)| m.map_or(j, |fixed| fixed as usize))
                .collect()
        })
    }

    /// Moves chosen by the fixed players, as `(player, move)`.
    pub fn fixed(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter_map(|(a, m)| m.map(|j| (a, j as usize)))
    }
}

/// `pmoves(q, A)`: one partial move per choice of moves for the players in `A`.
pub fn pmoves(counts: &[usize], coalition: PlayerSet) -> Vec<PartialMove> {
    let radix: Vec<usize> = counts
        .iter()
        .enumerate()
        .map(|(a, &d)| if coalition.contains(a) { d } else { 1 })
        .collect();
    MoveVectors::new(&radix)
        .map(|v| {
            PartialMove(
                v.into_iter()
                    .enumerate()
                    .map(|(a, j)| coalition.contains(a).then_some(j as u16))
                    .collect(),
            )
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Configuration {
    Pair(StateId, FormulaId),
    Triple(StateId, PartialMove, FormulaId),
}

impl Configuration {
    pub fn state(&self) -> StateId {
        match self {
            Configuration::Pair(q, _) | Configuration::Triple(q, _, _) => *q,
        }
    }

    pub fn formula(&self) -> FormulaId {
        match self {
            Configuration::Pair(_, f) | Configuration::Triple(_, _, f) => *f,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Edge {
    /// `pmove` is the partial move an enforce edge commits to, if any.
    Hyper {
        source: ConfigId,
        targets: Vec<ConfigId>,
        pmove: Option<PartialMove>,
    },
    Negation { source: ConfigId, target: ConfigId },
}

impl Edge {
    pub fn source(&self) -> ConfigId {
        match self {
            Edge::Hyper { source, .. } | Edge::Negation { source, .. } => *source,
        }
    }

    pub fn targets(&self) -> &[ConfigId] {
        match self {
            Edge::Hyper { targets, .. } => targets,
            Edge::Negation { target, .. } => std::slice::from_ref(target),
        }
    }
}

#[derive(Debug)]
struct StateTable {
    counts: Vec<usize>,
    next: Vec<StateId>,
}

/// Generates the graph for a game and a formula arena on demand. Safe to share across threads.
pub struct Encoder<'a> {
    pub game: &'a dyn GameStructure,
    pub arena: &'a FormulaArena,
    states: Interner<Arc<[i64]>>,
    configs: Interner<Configuration>,
    tables: DashMap<StateId, Arc<StateTable>>,
}

impl<'a> Encoder<'a> {
    pub fn new(game: &'a dyn GameStructure, arena: &'a FormulaArena) -> Self {
        Encoder {
            game,
            arena,
            states: Interner::new(),
            configs: Interner::new(),
            tables: DashMap::new(),
        }
    }

    pub fn state_id(&self, q: &[i64]) -> StateId {
        StateId(self.states.intern(&Arc::from(q)).0)
    }

    pub fn state(&self, id: StateId) -> Arc<[i64]> {
        self.states.get(id.0)
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn intern(&self, c: &Configuration) -> ConfigId {
        ConfigId(self.configs.intern(c).0)
    }

    /// Interns `c`, reporting whether it is new.
    pub fn intern_fresh(&self, c: &Configuration) -> (ConfigId, bool) {
        let (id, fresh) = self.configs.intern(c);
        (ConfigId(id), fresh)
    }

    pub fn configuration(&self, id: ConfigId) -> Configuration {
        self.configs.get(id.0)
    }

    pub fn config_count(&self) -> usize {
        self.configs.len()
    }

    pub fn pair(&self, q: StateId, phi: FormulaId) -> ConfigId {
        self.intern(&Configuration::Pair(q, phi))
    }

    /// `⟨q0, φ⟩` for the initial state.
    pub fn root(&self, phi: FormulaId) -> ConfigId {
        let q0 = self.state_id(&self.game.initial_state());
        self.pair(q0, phi)
    }

    /// `dist` of a configuration: the negation depth of its formula.
    pub fn dist(&self, c: ConfigId) -> u32 {
        self.arena.depth(self.configs.with(c.0, Configuration::formula))
    }

    fn table(&self, q: StateId) -> Result<Arc<StateTable>, ModelError> {
        if let Some(t) = self.tables.get(&q) {
            return Ok(t.clone());
        }
        let table = self.game.successor_table(&self.state(q))?;
        let next = table.next.iter().map(|s| self.state_id(s)).collect();
        let table = Arc::new(StateTable {
            counts: table.counts,
            next,
        });
        self.tables.insert(q, table.clone());
        Ok(table)
    }

    /// `d_a(q)` for every player.
    pub fn move_counts(&self, q: StateId) -> Result<Vec<usize>, ModelError> {
        Ok(self.table(q)?.counts.clone())
    }

    pub fn successor(&self, q: StateId, moves: &[usize]) -> Result<StateId, ModelError> {
        let t = self.table(q)?;
        let rank = moves.iter().zip(&t.counts).fold(0, |acc, (&m, &d)| acc * d + m);
        Ok(t.next[rank])
    }

    /// `Δ(q, V)` in canonical order.
    pub fn partial_transition(&self, q: StateId, v: &PartialMove) -> Result<Vec<StateId>, ModelError> {
        let t = self.table(q)?;
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for moves in v.vectors(&t.counts) {
            let rank = moves.iter().zip(&t.counts).fold(0, |acc, (&m, &d)| acc * d + m);
            if seen.insert(t.next[rank]) {
                out.push(t.next[rank]);
            }
        }
        out.sort_by(|a, b| self.state_order(*a, *b));
        Ok(out)
    }

    fn state_order(&self, a: StateId, b: StateId) -> Ordering {
        if a == b {
            Ordering::Equal
        } else {
            self.state(a).cmp(&self.state(b))
        }
    }

    /// Canonical order on configurations: state contents, then pairs before triples, then
    /// partial move, then formula. Independent of the order in which ids were allocated.
    pub fn config_order(&self, a: ConfigId, b: ConfigId) -> Ordering {
        if a == b {
            return Ordering::Equal;
        }
        let (ca, cb) = (self.configuration(a), self.configuration(b));
        self.state_order(ca.state(), cb.state()).then_with(|| match (&ca, &cb) {
            (Configuration::Pair(_, f), Configuration::Pair(_, g)) => f.cmp(g),
            (Configuration::Pair(..), Configuration::Triple(..)) => Ordering::Less,
            (Configuration::Triple(..), Configuration::Pair(..)) => Ordering::Greater,
            (Configuration::Triple(_, v, f), Configuration::Triple(_, w, g)) => {
                v.cmp(w).then(f.cmp(g))
            }
        })
    }

    fn canonical(&self, mut targets: Vec<ConfigId>) -> Vec<ConfigId> {
        targets.sort_by(|a, b| self.config_order(*a, *b));
        targets.dedup();
        targets
    }

    /// Outgoing edges of `c`.
    pub fn successors(&self, c: ConfigId) -> Result<Vec<Edge>, ModelError> {
        let config = self.configuration(c);
        let mut edges = Vec::new();
        let mut seen: HashSet<Vec<ConfigId>> = HashSet::new();
        let mut hyper = |targets: Vec<ConfigId>, pmove: Option<PartialMove>| {
            let targets = self.canonical(targets);
            if seen.insert(targets.clone()) {
                edges.push(Edge::Hyper {
                    source: c,
                    targets,
                    pmove,
                });
            }
        };

        match config {
            Configuration::Triple(q, v, phi) => {
                for s in self.partial_transition(q, &v)? {
                    hyper(vec![self.pair(s, phi)], None);
                }
            }
            Configuration::Pair(q, phi) => match self.arena.node(phi) {
                Node::True => hyper(vec![], None),
                Node::Prop(p) => {
                    if self.game.holds(&self.state(q), p)? {
                        hyper(vec![], None);
                    }
                }
                Node::Not(inner) => {
                    edges.push(Edge::Negation {
                        source: c,
                        target: self.pair(q, inner),
                    });
                }
                Node::Or(a, b) => {
                    hyper(vec![self.pair(q, a)], None);
                    hyper(vec![self.pair(q, b)], None);
                }
                Node::EnforceNext(coalition, inner) => {
                    for v in pmoves(&self.move_counts(q)?, coalition) {
                        let targets = self
                            .partial_transition(q, &v)?
                            .into_iter()
                            .map(|s| self.pair(s, inner))
                            .collect();
                        hyper(targets, Some(v));
                    }
                }
                Node::EnforceUntil(coalition, a, b) => {
                    hyper(vec![self.pair(q, b)], None);
                    let hold = self.pair(q, a);
                    for v in pmoves(&self.move_counts(q)?, coalition) {
                        let mut targets = vec![hold];
                        for s in self.partial_transition(q, &v)? {
                            targets.push(self.pair(s, phi));
                        }
                        hyper(targets, Some(v));
                    }
                }
                Node::DespiteUntil(coalition, a, b) => {
                    hyper(vec![self.pair(q, b)], None);
                    let mut targets = vec![self.pair(q, a)];
                    for v in pmoves(&self.move_counts(q)?, coalition) {
                        targets.push(self.intern(&Configuration::Triple(q, v, phi)));
                    }
                    hyper(targets, None);
                }
            },
        }
        Ok(edges)
    }

    pub fn describe(&self, c: ConfigId) -> String {
        let state = |q: StateId| {
            let values: Vec<String> = self.state(q).iter().map(i64::to_string).collect();
            format!("({})", values.join(","))
        };
        match self.configuration(c) {
            Configuration::Pair(q, f) => {
                format!("⟨{}, {}⟩", state(q), self.arena.render(f, self.game))
            }
            Configuration::Triple(q, v, f) => {
                let moves: Vec<String> = v
                    .0
                    .iter()
                    .map(|m| m.map_or("*".to_string(), |j| j.to_string()))
                    .collect();
                format!(
                    "⟨{}, [{}], {}⟩",
                    state(q),
                    moves.join(","),
                    self.arena.render(f, self.game)
                )
            }
        }
    }
}

impl fmt::Debug for Encoder<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Encoder")
            .field("states", &self.states.len())
            .field("configs", &self.configs.len())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atl::Phi;
    use crate::game::ExplicitGame;

    /// Two players with two moves each at state 0; move vector rank r leads to state r.
    fn square() -> ExplicitGame {
        let mut moves = vec![vec![2, 2]];
        let mut delta = vec![vec![1, 2, 3, 4]];
        let mut labels = vec![vec![false]];
        for q in 1..5 {
            moves.push(vec![1, 1]);
            delta.push(vec![q]);
            labels.push(vec![q % 2 == 1]);
        }
        ExplicitGame::new(
            vec!["a".into(), "b".into()],
            vec!["p".into()],
            moves,
            delta,
            labels,
            0,
        )
    }

    fn pm(v: &[Option<u16>]) -> PartialMove {
        PartialMove(v.into())
    }

    #[test]
    fn pmoves_fix_the_coalition() {
        assert_eq!(
            pmoves(&[2, 2], PlayerSet::from_players([0])),
            vec![pm(&[Some(0), None]), pm(&[Some(1), None])]
        );
        assert_eq!(pmoves(&[2, 3], PlayerSet::empty()), vec![pm(&[None, None])]);
        assert_eq!(pmoves(&[2, 3], PlayerSet::all(2)).len(), 6);
        assert_eq!(pmoves(&[3, 1, 2], PlayerSet::from_players([0, 2])).len(), 6);
    }

    #[test]
    fn partial_moves_enumerate_completions() {
        let v = pm(&[Some(1), None]);
        assert_eq!(
            v.vectors(&[2, 3]).collect::<Vec<_>>(),
            vec![vec![1, 0], vec![1, 1], vec![1, 2]]
        );
    }

    #[test]
    fn partial_transition_collapses_duplicates() {
        let g = ExplicitGame::new(
            vec!["a".into(), "b".into()],
            vec![],
            vec![vec![1, 2], vec![1, 1]],
            vec![vec![1, 1], vec![1]],
            vec![vec![], vec![]],
            0,
        );
        let arena = FormulaArena::new();
        let enc = Encoder::new(&g, &arena);
        let q = enc.state_id(&[0]);
        let succ = enc.partial_transition(q, &pm(&[Some(0), None])).unwrap();
        assert_eq!(succ, vec![enc.state_id(&[1])]);
    }

    #[test]
    fn true_and_false_propositions() {
        let g = square();
        let mut arena = FormulaArena::new();
        let t = arena.add(&Phi::True);
        let p = arena.add(&Phi::Prop(0));
        let enc = Encoder::new(&g, &arena);
        let edges = enc.successors(enc.root(t)).unwrap();
        assert!(matches!(&edges[..], [Edge::Hyper { targets, .. }] if targets.is_empty()));
        // p is false at state 0
        assert!(enc.successors(enc.root(p)).unwrap().is_empty());
        let q1 = enc.state_id(&[1]);
        assert_eq!(enc.successors(enc.pair(q1, p)).unwrap().len(), 1);
    }

    #[test]
    fn negation_and_disjunction() {
        let g = square();
        let mut arena = FormulaArena::new();
        let np = arena.add(&Phi::not(Phi::Prop(0)));
        let or = arena.add(&Phi::or(Phi::Prop(0), Phi::not(Phi::Prop(0))));
        let enc = Encoder::new(&g, &arena);
        let root = enc.root(np);
        let edges = enc.successors(root).unwrap();
        assert!(matches!(edges[..], [Edge::Negation { source, .. }] if source == root));
        let edges = enc.successors(enc.root(or)).unwrap();
        assert_eq!(edges.len(), 2);
        assert!(edges.iter().all(|e| e.targets().len() == 1));
    }

    #[test]
    fn enforce_next_has_one_edge_per_partial_move() {
        let g = square();
        let mut arena = FormulaArena::new();
        let a = PlayerSet::from_players([0]);
        let phi = arena.add(&Phi::EnforceNext(a, Box::new(Phi::Prop(0))));
        let p = arena.add(&Phi::Prop(0));
        let enc = Encoder::new(&g, &arena);
        let edges = enc.successors(enc.root(phi)).unwrap();
        assert_eq!(edges.len(), 2);
        let expect = |states: &[i64]| -> Vec<ConfigId> {
            states.iter().map(|&s| enc.pair(enc.state_id(&[s]), p)).collect()
        };
        assert_eq!(edges[0].targets(), &expect(&[1, 2])[..]);
        assert_eq!(edges[1].targets(), &expect(&[3, 4])[..]);
    }

    #[test]
    fn until_fan_out() {
        let g = square();
        let mut arena = FormulaArena::new();
        let a = PlayerSet::from_players([1]);
        let p = Box::new(Phi::Prop(0));
        let enforce = arena.add(&Phi::EnforceUntil(a, Box::new(Phi::True), p.clone()));
        let despite = arena.add(&Phi::DespiteUntil(a, Box::new(Phi::True), p));
        let enc = Encoder::new(&g, &arena);
        assert_eq!(enc.successors(enc.root(enforce)).unwrap().len(), 3);
        let edges = enc.successors(enc.root(despite)).unwrap();
        assert_eq!(edges.len(), 2);
        // ⟨q, true⟩ plus one triple per partial move of player b.
        assert_eq!(edges[1].targets().len(), 3);
        let triple = edges[1].targets()[1];
        let despite = enc.successors(triple).unwrap();
        assert_eq!(despite.len(), 2);
        assert!(despite.iter().all(|e| e.targets().len() == 1));
    }

    #[test]
    fn configurations_are_interned() {
        let g = square();
        let mut arena = FormulaArena::new();
        let p = arena.add(&Phi::Prop(0));
        let enc = Encoder::new(&g, &arena);
        assert_eq!(enc.root(p), enc.root(p));
        assert_eq!(enc.config_count(), 1);
    }
}
