use std::collections::HashSet;

use super::worker::Report;
use crate::atl::{FormulaArena, FormulaId, Node, PlayerSet};
use crate::edg::{Configuration, Encoder};
use crate::game::{GameStructure, State};

/// Positional moves for the coalition of a satisfied enforce formula, one entry per state in
/// which the coalition has to commit to something.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub coalition: PlayerSet,
    /// Sorted by state; moves are `(player, move)` in player order.
    pub moves: Vec<(State, Vec<(usize, usize)>)>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WitnessError {
    #[error("the formula does not hold, so there is no witness")]
    Unsatisfied,
    #[error("witnesses are only available for <<A>> X, <<A>> F and <<A>> U formulas")]
    Unsupported,
}

impl Witness {
    /// `state(var=val, ...) : player=action, ...` per entry.
    pub fn lines(&self, game: &dyn GameStructure) -> Vec<String> {
        let vars = game.variable_names();
        self.moves
            .iter()
            .map(|(q, moves)| {
                let state: Vec<String> = vars.iter().zip(q).map(|(v, x)| format!("{v}={x}")).collect();
                let moves: Vec<String> = moves
                    .iter()
                    .map(|&(a, j)| format!("{}={}", game.player_name(a), game.move_name(q, a, j)))
                    .collect();
                format!("state({}) : {}", state.join(", "), moves.join(", "))
            })
            .collect()
    }

    #[cfg(any(test, feature = "oracle"))]
    pub fn to_profile(&self) -> crate::oracle::StrategyProfile {
        crate::oracle::StrategyProfile {
            coalition: self.coalition,
            choice: self
                .moves
                .iter()
                .map(|(q, m)| (q.clone(), m.iter().map(|&(_, j)| j).collect()))
                .collect(),
        }
    }
}

pub(crate) fn extract(
    enc: &Encoder<'_>,
    arena: &FormulaArena,
    f: FormulaId,
    verdict: bool,
    reports: &[Report],
) -> Result<Witness, WitnessError> {
    if !verdict {
        return Err(WitnessError::Unsatisfied);
    }
    let (coalition, only_root) = match arena.node(f) {
        Node::EnforceNext(a, _) => (a, true),
        Node::EnforceUntil(a, _, _) => (a, false),
        _ => return Err(WitnessError::Unsupported),
    };
    let root_state = enc.configuration(enc.root(f)).state();
    let mut seen = HashSet::new();
    let mut moves = Vec::new();
    for (c, pmove) in reports.iter().flat_map(|r| &r.certified) {
        let (Configuration::Pair(q, g), Some(v)) = (enc.configuration(*c), pmove) else {
            continue;
        };
        if g != f || (only_root && q != root_state) || !seen.insert(q) {
            continue;
        }
        let fixed: Vec<(usize, usize)> = v.fixed().collect();
        if !fixed.is_empty() {
            moves.push((enc.state(q).to_vec(), fixed));
        }
    }
    moves.sort();
    Ok(Witness { coalition, moves })
}
