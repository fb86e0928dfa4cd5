use std::collections::HashMap;

use super::{GameStructure, MoveVectors, State, SuccessorTable};
use crate::error::ModelError;
use crate::expr::{BinaryOp, Expr};

/// A game given by explicit tables. Its states are the one-slot vectors `[i]`.
#[derive(Debug, Clone)]
pub struct ExplicitGame {
    players: Vec<String>,
    propositions: Vec<String>,
    /// `moves[q][a]` is `d_a(q)`.
    moves: Vec<Vec<usize>>,
    /// `delta[q]` lists successors by rank of the move vector.
    delta: Vec<Vec<usize>>,
    /// `labels[q][p]`.
    labels: Vec<Vec<bool>>,
    initial: usize,
    label_exprs: Vec<Expr>,
    player_index: HashMap<String, usize>,
    prop_index: HashMap<String, usize>,
}

impl ExplicitGame {
    /// Builds a game; `delta[q]` must list `Π_a moves[q][a]` successors in lexicographic order
    /// of move vectors.
    pub fn new(
        players: Vec<String>,
        propositions: Vec<String>,
        moves: Vec<Vec<usize>>,
        delta: Vec<Vec<usize>>,
        labels: Vec<Vec<bool>>,
        initial: usize,
    ) -> Self {
        let n = moves.len();
        assert!(n > 0 && initial < n);
        assert_eq!(delta.len(), n);
        assert_eq!(labels.len(), n);
        for q in 0..n {
            assert_eq!(moves[q].len(), players.len());
            assert!(moves[q].iter().all(|&d| d >= 1));
            assert_eq!(delta[q].len(), moves[q].iter().product::<usize>());
            assert!(delta[q].iter().all(|&s| s < n));
            assert_eq!(labels[q].len(), propositions.len());
        }
        let label_exprs = (0..propositions.len())
            .map(|p| {
                (0..n)
                    .filter(|&q| labels[q][p])
                    .map(|q| Expr::binary(BinaryOp::Eq, Expr::Var(0), Expr::Const(q as i64)))
                    .reduce(|a, b| Expr::binary(BinaryOp::Or, a, b))
                    .unwrap_or(Expr::Const(0))
            })
            .collect();
        let player_index = players.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let prop_index = propositions
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        ExplicitGame {
            players,
            propositions,
            moves,
            delta,
            labels,
            initial,
            label_exprs,
            player_index,
            prop_index,
        }
    }

    pub fn state_count(&self) -> usize {
        self.moves.len()
    }

    pub fn with_initial(&self, initial: usize) -> Self {
        assert!(initial < self.state_count());
        ExplicitGame {
            initial,
            ..self.clone()
        }
    }

    fn index(q: &[i64]) -> usize {
        q[0] as usize
    }
}

impl GameStructure for ExplicitGame {
    fn player_count(&self) -> usize {
        self.players.len()
    }

    fn player_name(&self, player: usize) -> &str {
        &self.players[player]
    }

    fn player_index(&self, name: &str) -> Option<usize> {
        self.player_index.get(name).copied()
    }

    fn proposition_count(&self) -> usize {
        self.propositions.len()
    }

    fn proposition_name(&self, prop: usize) -> &str {
        &self.propositions[prop]
    }

    fn proposition_index(&self, name: &str) -> Option<usize> {
        self.prop_index.get(name).copied()
    }

    fn proposition_expr(&self, prop: usize) -> Option<&Expr> {
        Some(&self.label_exprs[prop])
    }

    fn variable_names(&self) -> Vec<String> {
        vec!["state".to_string()]
    }

    fn variable_bounds(&self) -> Vec<(i64, i64)> {
        vec![(0, self.state_count() as i64 - 1)]
    }

    fn initial_state(&self) -> State {
        vec![self.initial as i64]
    }

    fn move_count(&self, q: &[i64], player: usize) -> Result<usize, ModelError> {
        Ok(self.moves[Self::index(q)][player])
    }

    fn move_name(&self, _q: &[i64], _player: usize, j: usize) -> String {
        format!("m{j}")
    }

    fn transition(&self, q: &[i64], moves: &[usize]) -> Result<State, ModelError> {
        let q = Self::index(q);
        let rank = moves
            .iter()
            .zip(&self.moves[q])
            .fold(0, |acc, (&m, &d)| acc * d + m);
        Ok(vec![self.delta[q][rank] as i64])
    }

    fn holds(&self, q: &[i64], prop: usize) -> Result<bool, ModelError> {
        Ok(self.labels[Self::index(q)][prop])
    }

    fn successor_table(&self, q: &[i64]) -> Result<SuccessorTable, ModelError> {
        let i = Self::index(q);
        let counts = self.moves[i].clone();
        debug_assert_eq!(MoveVectors::new(&counts).count(), self.delta[i].len());
        Ok(SuccessorTable {
            counts,
            next: self.delta[i].iter().map(|&s| vec![s as i64]).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_state() -> ExplicitGame {
        ExplicitGame::new(
            vec!["a".into(), "b".into()],
            vec!["p".into()],
            vec![vec![2, 2], vec![1, 1]],
            vec![vec![0, 1, 1, 0], vec![1]],
            vec![vec![false], vec![true]],
            0,
        )
    }

    #[test]
    fn transitions_follow_the_table() {
        let g = two_state();
        assert_eq!(g.transition(&[0], &[0, 1]).unwrap(), vec![1]);
        assert_eq!(g.transition(&[0], &[1, 1]).unwrap(), vec![0]);
        assert_eq!(g.successor_table(&[0]).unwrap().successor(&[1, 0]), &vec![1]);
    }

    #[test]
    fn label_expressions_agree_with_labels() {
        let g = two_state();
        for q in 0..2i64 {
            let by_expr = g.eval(&[q], g.proposition_expr(0).unwrap()).unwrap() != 0;
            assert_eq!(by_expr, g.holds(&[q], 0).unwrap());
        }
    }
}
