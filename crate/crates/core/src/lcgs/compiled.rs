use std::collections::HashMap;

use crate::error::ModelError;
use crate::expr::{EvalContext, Expr};
use crate::game::{GameStructure, MoveVectors, State, SuccessorTable};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Action {
    pub name: String,
    pub available: Expr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Player {
    pub name: String,
    pub actions: Vec<Action>,
}

/// A state variable. Its slot in the state vector is its index in [`CompiledGame::variables`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    /// Qualified name, `player.var`.
    pub name: String,
    pub player: usize,
    pub lo: i64,
    pub hi: i64,
    pub init: i64,
    pub update: Expr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Label {
    /// Qualified name, `player.label`.
    pub name: String,
    pub player: usize,
    pub condition: Expr,
}

/// An LCGS program after instantiation: a game whose states are computed on demand.
#[derive(Debug, Clone)]
pub struct CompiledGame {
    pub players: Vec<Player>,
    pub variables: Vec<Variable>,
    pub labels: Vec<Label>,
    player_index: HashMap<String, usize>,
    label_index: HashMap<String, usize>,
}

impl CompiledGame {
    pub fn new(players: Vec<Player>, variables: Vec<Variable>, labels: Vec<Label>) -> Self {
        let player_index = players
            .iter()
            .enumerate()
            .map(|(i, p)| (p.name.clone(), i))
            .collect();
        let label_index = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.name.clone(), i))
            .collect();
        CompiledGame {
            players,
            variables,
            labels,
            player_index,
            label_index,
        }
    }

    /// Indices of the actions available to `player` in `q`, in declaration order.
    pub fn available_actions(&self, q: &[i64], player: usize) -> Result<Vec<usize>, ModelError> {
        let ctx = EvalContext::state(q);
        let mut available = Vec::new();
        for (i, a) in self.players[player].actions.iter().enumerate() {
            if a.available.holds(&ctx)? {
                available.push(i);
            }
        }
        if available.is_empty() {
            return Err(ModelError::NoMoves {
                player: self.players[player].name.clone(),
                state: q.to_vec(),
            });
        }
        Ok(available)
    }

    /// Successor when every player takes the given declared action.
    pub fn apply_actions(&self, q: &[i64], actions: &[usize]) -> Result<State, ModelError> {
        let ctx = EvalContext::transition(q, actions);
        let mut next = Vec::with_capacity(self.variables.len());
        for v in &self.variables {
            let value = v.update.eval(&ctx)?;
            if value < v.lo || value > v.hi {
                return Err(ModelError::OutOfRange {
                    variable: v.name.clone(),
                    value,
                    lo: v.lo,
                    hi: v.hi,
                    state: q.to_vec(),
                });
            }
            next.push(value);
        }
        Ok(next)
    }
}

impl GameStructure for CompiledGame {
    fn player_count(&self) -> usize {
        self.players.len()
    }

    fn player_name(&self, player: usize) -> &str {
        &self.players[player].name
    }

    fn player_index(&self, name: &str) -> Option<usize> {
        self.player_index.get(name).copied()
    }

    fn proposition_count(&self) -> usize {
        self.labels.len()
    }

    fn proposition_name(&self, prop: usize) -> &str {
        &self.labels[prop].name
    }

    fn proposition_index(&self, name: &str) -> Option<usize> {
        self.label_index.get(name).copied()
    }

    fn proposition_expr(&self, prop: usize) -> Option<&Expr> {
        Some(&self.labels[prop].condition)
    }

    fn variable_names(&self) -> Vec<String> {
        self.variables.iter().map(|v| v.name.clone()).collect()
    }

    fn variable_bounds(&self) -> Vec<(i64, i64)> {
        self.variables.iter().map(|v| (v.lo, v.hi)).collect()
    }

    fn initial_state(&self) -> State {
        self.variables.iter().map(|v| v.init).collect()
    }

    fn move_count(&self, q: &[i64], player: usize) -> Result<usize, ModelError> {
        Ok(self.available_actions(q, player)?.len())
    }

    fn move_name(&self, q: &[i64], player: usize, j: usize) -> String {
        match self.available_actions(q, player) {
            Ok(available) if j < available.len() => {
                self.players[player].actions[available[j]].name.clone()
            }
            _ => format!("#{j}"),
        }
    }

    fn transition(&self, q: &[i64], moves: &[usize]) -> Result<State, ModelError> {
        let mut actions = Vec::with_capacity(moves.len());
        for (player, &j) in moves.iter().enumerate() {
            actions.push(self.available_actions(q, player)?[j]);
        }
        self.apply_actions(q, &actions)
    }

    fn holds(&self, q: &[i64], prop: usize) -> Result<bool, ModelError> {
        self.labels[prop].condition.holds(&EvalContext::state(q))
    }

    fn successor_table(&self, q: &[i64]) -> Result<SuccessorTable, ModelError> {
        let available = (0..self.players.len())
            .map(|a| self.available_actions(q, a))
            .collect::<Result<Vec<_>, _>>()?;
        let counts: Vec<usize> = available.iter().map(Vec::len).collect();
        let mut next = Vec::with_capacity(counts.iter().product());
        let mut actions = vec![0; counts.len()];
        for v in MoveVectors::new(&counts) {
            for (a, &j) in v.iter().enumerate() {
                actions[a] = available[a][j];
            }
            next.push(self.apply_actions(q, &actions)?);
        }
        Ok(SuccessorTable { counts, next })
    }
}
