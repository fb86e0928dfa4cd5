use std::collections::VecDeque;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use super::{ConfigId, Edge, Encoder};
use crate::error::ModelError;

/// A fully explored graph.
#[derive(Debug, Clone)]
pub struct Edg {
    pub root: ConfigId,
    /// Reachable configurations in discovery order.
    pub configs: Vec<ConfigId>,
    pub edges: Vec<Edge>,
    /// Outgoing edge indices, indexed by configuration id.
    pub out: Vec<Vec<usize>>,
    /// `dist` per configuration id, computed on the graph itself.
    pub dist: Vec<u32>,
}

/// `K_i`: configurations with `dist ≤ i` and the edges leaving them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub level: u32,
    pub configs: Vec<ConfigId>,
    pub hyper: Vec<usize>,
    pub negation: Vec<usize>,
}

/// Explore everything reachable from `root`, failing once more than `limit`
/// configurations have been discovered.
pub fn build_graph(enc: &Encoder<'_>, root: ConfigId, limit: usize) -> Result<Edg, ModelError> {
    let mut configs = vec![root];
    let mut seen = vec![false; enc.config_count().max(root.index() + 1)];
    seen[root.index()] = true;
    let mut queue = VecDeque::from([root]);
    let mut edges = Vec::new();
    let mut out: Vec<Vec<usize>> = Vec::new();

    while let Some(c) = queue.pop_front() {
        for e in enc.successors(c)? {
            for &t in e.targets() {
                if t.index() >= seen.len() {
                    seen.resize(t.index() + 1, false);
                }
                if !seen[t.index()] {
                    seen[t.index()] = true;
                    configs.push(t);
                    if configs.len() > limit {
                        return Err(ModelError::TooLarge { limit });
                    }
                    queue.push_back(t);
                }
            }
            if out.len() <= c.index() {
                out.resize(c.index() + 1, Vec::new());
            }
            out[c.index()].push(edges.len());
            edges.push(e);
        }
    }
    out.resize(seen.len(), Vec::new());

    let mut graph = Edg {
        root,
        configs,
        edges,
        out,
        dist: Vec::new(),
    };
    graph.dist = graph.compute_dist();
    Ok(graph)
}

impl Edg {
    /// `dist(c)`: the largest number of negation edges on any path from `c`.
    ///
    /// Panics if a negation edge lies on a cycle.
    pub fn compute_dist(&self) -> Vec<u32> {
        let n = self.out.len();
        let mut g: DiGraph<(), bool> = DiGraph::with_capacity(n, self.edges.len());
        for _ in 0..n {
            g.add_node(());
        }
        for e in &self.edges {
            let negation = matches!(e, Edge::Negation { .. });
            for t in e.targets() {
                g.add_edge(
                    NodeIndex::new(e.source().index()),
                    NodeIndex::new(t.index()),
                    negation,
                );
            }
        }

        let mut dist = vec![0u32; n];
        let mut scc_of = vec![usize::MAX; n];
        // Tarjan yields components with successors first.
        for (i, scc) in tarjan_scc(&g).into_iter().enumerate() {
            for v in &scc {
                scc_of[v.index()] = i;
            }
            let mut d = 0;
            for v in &scc {
                for e in g.edges(*v) {
                    use petgraph::visit::EdgeRef;
                    let t = e.target().index();
                    if *e.weight() {
                        assert_ne!(scc_of[t], i, "negation edge on a cycle");
                        d = d.max(dist[t] + 1);
                    } else if scc_of[t] != i {
                        d = d.max(dist[t]);
                    }
                }
            }
            for v in &scc {
                dist[v.index()] = d;
            }
        }
        dist
    }

    pub fn max_dist(&self) -> u32 {
        self.configs.iter().map(|c| self.dist[c.index()]).max().unwrap_or(0)
    }

    pub fn components(&self) -> Vec<Component> {
        (0..=self.max_dist())
            .map(|level| {
                let inside = |c: ConfigId| self.dist[c.index()] <= level;
                let configs: Vec<ConfigId> = self.configs.iter().copied().filter(|&c| inside(c)).collect();
                let (mut hyper, mut negation) = (Vec::new(), Vec::new());
                for (i, e) in self.edges.iter().enumerate() {
                    if inside(e.source()) {
                        match e {
                            Edge::Hyper { .. } => hyper.push(i),
                            Edge::Negation { .. } => negation.push(i),
                        }
                    }
                }
                Component {
                    level,
                    configs,
                    hyper,
                    negation,
                }
            })
            .collect()
    }

    pub fn hyper_count(&self) -> usize {
        self.edges
            .iter()
            .filter(|e| matches!(e, Edge::Hyper { .. }))
            .count()
    }

    pub fn negation_count(&self) -> usize {
        self.edges.len() - self.hyper_count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atl::{FormulaArena, Phi, PlayerSet};
    use crate::game::ExplicitGame;

    fn loop_game(p: bool) -> ExplicitGame {
        ExplicitGame::new(
            vec!["a".into()],
            vec!["p".into()],
            vec![vec![1]],
            vec![vec![0]],
            vec![vec![p]],
            0,
        )
    }

    #[test]
    fn true_is_one_configuration() {
        let g = loop_game(false);
        let mut arena = FormulaArena::new();
        let t = arena.add(&Phi::True);
        let enc = Encoder::new(&g, &arena);
        let edg = build_graph(&enc, enc.root(t), 100).unwrap();
        assert_eq!((edg.configs.len(), edg.edges.len()), (1, 1));
        assert_eq!(edg.components().len(), 1);
    }

    #[test]
    fn excluded_middle_shares_the_proposition() {
        let g = loop_game(false);
        let mut arena = FormulaArena::new();
        let phi = arena.add(&Phi::or(Phi::Prop(0), Phi::not(Phi::Prop(0))));
        let enc = Encoder::new(&g, &arena);
        let edg = build_graph(&enc, enc.root(phi), 100).unwrap();
        assert_eq!(edg.configs.len(), 3);
    }

    #[test]
    fn negation_increments_dist() {
        let g = loop_game(false);
        let mut arena = FormulaArena::new();
        let phi = arena.add(&Phi::not(Phi::Prop(0)));
        let enc = Encoder::new(&g, &arena);
        let root = enc.root(phi);
        let edg = build_graph(&enc, root, 100).unwrap();
        assert_eq!(edg.dist[root.index()], 1);
        let comps = edg.components();
        assert_eq!(comps.len(), 2);
        assert!(comps[0].negation.is_empty());
        assert_eq!(comps[0].configs.len(), 1);
        assert_eq!(comps[1].configs.len(), 2);
    }

    #[test]
    fn invariant_has_dist_two() {
        let g = loop_game(true);
        let mut arena = FormulaArena::new();
        let phi = arena.add(&Phi::EnforceInvariant(
            PlayerSet::from_players([0]),
            Box::new(Phi::Prop(0)),
        ));
        let enc = Encoder::new(&g, &arena);
        let root = enc.root(phi);
        let edg = build_graph(&enc, root, 100).unwrap();
        assert_eq!(edg.dist[root.index()], 2);
        let comps = edg.components();
        assert_eq!(comps.len(), 3);
        for w in comps.windows(2) {
            assert!(w[0].configs.iter().all(|c| w[1].configs.contains(c)));
        }
    }

    #[test]
    fn limit_is_enforced() {
        let g = loop_game(true);
        let mut arena = FormulaArena::new();
        let phi = arena.add(&Phi::or(Phi::Prop(0), Phi::not(Phi::Prop(0))));
        let enc = Encoder::new(&g, &arena);
        assert_eq!(
            build_graph(&enc, enc.root(phi), 1).unwrap_err(),
            ModelError::TooLarge { limit: 1 }
        );
    }
}
