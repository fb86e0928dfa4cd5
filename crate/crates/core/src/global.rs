//! The global algorithm: build the whole graph, then compute the minimum fixed point one
//! component at a time, from `K_0` upwards.

use crate::atl::{FormulaArena, Phi};
use crate::edg::{build_graph, ConfigId, Edg, Edge, Encoder};
use crate::error::ModelError;
use crate::game::GameStructure;

pub const DEFAULT_LIMIT: usize = 20_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GlobalOutcome {
    pub verdict: bool,
    pub configurations: usize,
    pub hyper_edges: usize,
    pub negation_edges: usize,
}

pub fn check_global(game: &dyn GameStructure, phi: &Phi) -> Result<GlobalOutcome, ModelError> {
    check_global_with_limit(game, phi, DEFAULT_LIMIT)
}

pub fn check_global_with_limit(
    game: &dyn GameStructure,
    phi: &Phi,
    limit: usize,
) -> Result<GlobalOutcome, ModelError> {
    let mut arena = FormulaArena::new();
    let f = arena.add(phi);
    let enc = Encoder::new(game, &arena);
    let root = enc.root(f);
    let edg = build_graph(&enc, root, limit)?;
    let alpha = solve_components(&edg);
    Ok(GlobalOutcome {
        verdict: alpha[root.index()],
        configurations: edg.configs.len(),
        hyper_edges: edg.hyper_count(),
        negation_edges: edg.negation_count(),
    })
}

/// `α_min`, indexed by configuration id.
///
/// Each level starts from all-zero and is closed under its hyper-edges with a counter
/// worklist; negation edges read the already final lower levels.
pub fn solve_components(edg: &Edg) -> Vec<bool> {
    let n = edg.out.len();
    let mut alpha = vec![false; n];
    let mut by_level: Vec<Vec<ConfigId>> = vec![Vec::new(); edg.max_dist() as usize + 1];
    for &c in &edg.configs {
        by_level[edg.dist[c.index()] as usize].push(c);
    }

    let mut missing = vec![0usize; edg.edges.len()];
    let mut dependents: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut stack = Vec::new();

    for (level, configs) in by_level.iter().enumerate() {
        let level = level as u32;
        for &c in configs {
            for &ei in &edg.out[c.index()] {
                match &edg.edges[ei] {
                    Edge::Hyper { targets, .. } => {
                        // a false target below this level is final
                        if targets
                            .iter()
                            .any(|t| !alpha[t.index()] && edg.dist[t.index()] < level)
                        {
                            continue;
                        }
                        for t in targets {
                            if !alpha[t.index()] {
                                missing[ei] += 1;
                                dependents[t.index()].push(ei);
                            }
                        }
                        if missing[ei] == 0 && !alpha[c.index()] {
                            alpha[c.index()] = true;
                            stack.push(c);
                        }
                    }
                    Edge::Negation { target, .. } => {
                        debug_assert!(edg.dist[target.index()] < level);
                        if !alpha[target.index()] && !alpha[c.index()] {
                            alpha[c.index()] = true;
                            stack.push(c);
                        }
                    }
                }
            }
        }
        while let Some(t) = stack.pop() {
            for &ei in &dependents[t.index()] {
                missing[ei] -= 1;
                let s = edg.edges[ei].source();
                if missing[ei] == 0 && !alpha[s.index()] {
                    alpha[s.index()] = true;
                    stack.push(s);
                }
            }
        }
    }
    alpha
}

/// One application of `F_i`: the current values of the lower levels are taken as final.
pub fn apply_f(edg: &Edg, level: u32, alpha: &[bool]) -> Vec<bool> {
    let mut next = alpha.to_vec();
    for &c in &edg.configs {
        if edg.dist[c.index()] != level || alpha[c.index()] {
            continue;
        }
        next[c.index()] = edg.out[c.index()].iter().any(|&ei| match &edg.edges[ei] {
            Edge::Hyper { targets, .. } => targets.iter().all(|t| alpha[t.index()]),
            Edge::Negation { target, .. } => !alpha[target.index()],
        });
    }
    next
}

/// `α_min` by plain iteration of `F_i`, also returning the number of rounds per level
/// (the final, unchanged round excluded).
pub fn solve_naive(edg: &Edg) -> (Vec<bool>, Vec<usize>) {
    let mut alpha = vec![false; edg.out.len()];
    let mut rounds = Vec::new();
    for level in 0..=edg.max_dist() {
        let mut count = 0;
        loop {
            let next = apply_f(edg, level, &alpha);
            if next == alpha {
                break;
            }
            alpha = next;
            count += 1;
        }
        rounds.push(count);
    }
    (alpha, rounds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atl::PlayerSet;
    use crate::game::ExplicitGame;

    fn single(p: bool) -> ExplicitGame {
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
    fn true_holds() {
        assert!(check_global(&single(false), &Phi::True).unwrap().verdict);
    }

    #[test]
    fn proposition_without_edges_is_zero() {
        assert!(!check_global(&single(false), &Phi::Prop(0)).unwrap().verdict);
    }

    #[test]
    fn negated_false_proposition_is_one() {
        let out = check_global(&single(false), &Phi::not(Phi::Prop(0))).unwrap();
        assert!(out.verdict);
        assert_eq!(out.negation_edges, 1);
    }

    #[test]
    fn eventually_with_goal_at_start() {
        let phi = Phi::EnforceEventually(PlayerSet::empty(), Box::new(Phi::Prop(0)));
        assert!(check_global(&single(true), &phi).unwrap().verdict);
        assert!(!check_global(&single(false), &phi).unwrap().verdict);
    }

    #[test]
    fn self_loop_until_is_least_fixed_point() {
        // ⟨q, ⟪∅⟫(true U p)⟩ depends on itself; without p it must stay 0.
        let phi = Phi::EnforceUntil(PlayerSet::empty(), Box::new(Phi::True), Box::new(Phi::Prop(0)));
        let g = single(false);
        let mut arena = FormulaArena::new();
        let f = arena.add(&phi);
        let enc = Encoder::new(&g, &arena);
        let edg = build_graph(&enc, enc.root(f), 100).unwrap();
        let (naive, rounds) = solve_naive(&edg);
        assert_eq!(naive, solve_components(&edg));
        assert!(!naive[enc.root(f).index()]);
        for (comp, r) in edg.components().iter().zip(rounds) {
            assert!(r <= comp.configs.len());
        }
    }
}
