//! Concurrent game structures.
//!
//! A game has `k` players, states that are integer vectors, propositions, a number of moves
//! per player and state, and a deterministic transition function over move vectors. Moves of
//! a player are numbered `0..d` here; they are printed by name.

mod explicit;
mod interner;

pub use explicit::ExplicitGame;
pub use interner::Interner;

use crate::error::ModelError;
use crate::expr::{EvalContext, Expr};

pub type State = Vec<i64>;

pub trait GameStructure: Send + Sync {
    fn player_count(&self) -> usize;
    fn player_name(&self, player: usize) -> &str;
    fn player_index(&self, name: &str) -> Option<usize>;

    fn proposition_count(&self) -> usize;
    fn proposition_name(&self, prop: usize) -> &str;
    fn proposition_index(&self, name: &str) -> Option<usize>;
    /// The state expression defining a proposition, when there is one.
    fn proposition_expr(&self, _prop: usize) -> Option<&Expr> {
        None
    }

    fn variable_names(&self) -> Vec<String>;
    fn variable_bounds(&self) -> Vec<(i64, i64)>;

    fn initial_state(&self) -> State;
    fn move_count(&self, q: &[i64], player: usize) -> Result<usize, ModelError>;
    fn move_name(&self, q: &[i64], player: usize, j: usize) -> String;
    fn transition(&self, q: &[i64], moves: &[usize]) -> Result<State, ModelError>;
    fn holds(&self, q: &[i64], prop: usize) -> Result<bool, ModelError>;

    fn move_counts(&self, q: &[i64]) -> Result<Vec<usize>, ModelError> {
        (0..self.player_count())
            .map(|a| self.move_count(q, a))
            .collect()
    }

    /// The propositions true in `q`.
    fn labels(&self, q: &[i64]) -> Result<Vec<usize>, ModelError> {
        let mut props = Vec::new();
        for p in 0..self.proposition_count() {
            if self.holds(q, p)? {
                props.push(p);
            }
        }
        Ok(props)
    }

    fn eval(&self, q: &[i64], e: &Expr) -> Result<i64, ModelError> {
        e.eval(&EvalContext::state(q))
    }

    /// Every move vector at `q` with its successor, in lexicographic order.
    fn successor_table(&self, q: &[i64]) -> Result<SuccessorTable, ModelError> {
        let counts = self.move_counts(q)?;
        let mut next = Vec::with_capacity(counts.iter().product());
        for v in MoveVectors::new(&counts) {
            next.push(self.transition(q, &v)?);
        }
        Ok(SuccessorTable { counts, next })
    }
}

/// `δ(q, ·)` tabulated over `D(q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuccessorTable {
    pub counts: Vec<usize>,
    /// Successors indexed by the mixed-radix rank of the move vector.
    pub next: Vec<State>,
}

impl SuccessorTable {
    pub fn rank(&self, moves: &[usize]) -> usize {
        moves
            .iter()
            .zip(&self.counts)
            .fold(0, |acc, (&m, &d)| acc * d + m)
    }

    pub fn successor(&self, moves: &[usize]) -> &State {
        &self.next[self.rank(moves)]
    }
}

/// Lexicographic enumeration of `{0..d_1} × … × {0..d_k}`.
#[derive(Debug, Clone)]
pub struct MoveVectors {
    counts: Vec<usize>,
    current: Option<Vec<usize>>,
}

impl MoveVectors {
    pub fn new(counts: &[usize]) -> Self {
        let current = (!counts.contains(&0)).then(|| vec![0; counts.len()]);
        MoveVectors {
            counts: counts.to_vec(),
            current,
        }
    }
}

impl Iterator for MoveVectors {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let cur = self.current.as_mut().unwrap();
        let mut i = cur.len();
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < self.counts[i] {
                break;
            }
            cur[i] = 0;
        }
        Some(out)
    }
}

/// All states reachable from the initial state, in breadth-first order.
pub fn reachable_states(
    game: &dyn GameStructure,
    limit: usize,
) -> Result<Vec<(State, SuccessorTable)>, ModelError> {
    let init = game.initial_state();
    let mut index = std::collections::HashMap::new();
    index.insert(init.clone(), 0usize);
    let mut order = vec![init];
    let mut tables = Vec::new();
    while tables.len() < order.len() {
        let q = order[tables.len()].clone();
        let table = game.successor_table(&q)?;
        for s in &table.next {
            if !index.contains_key(s) {
                if order.len() >= limit {
                    return Err(ModelError::TooLarge { limit });
                }
                index.insert(s.clone(), order.len());
                order.push(s.clone());
            }
        }
        tables.push(table);
    }
    Ok(order.into_iter().zip(tables).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn move_vectors_are_lexicographic() {
        let all: Vec<_> = MoveVectors::new(&[2, 2]).collect();
        assert_eq!(all, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(MoveVectors::new(&[1]).collect::<Vec<_>>(), vec![vec![0]]);
        assert_eq!(MoveVectors::new(&[3, 3, 3]).count(), 27);
    }

    #[test]
    fn no_players_means_one_empty_vector() {
        assert_eq!(MoveVectors::new(&[]).collect::<Vec<_>>(), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn rank_matches_enumeration() {
        let table = SuccessorTable {
            counts: vec![2, 3],
            next: vec![],
        };
        for (i, v) in MoveVectors::new(&[2, 3]).enumerate() {
            assert_eq!(table.rank(&v), i);
        }
    }
}
