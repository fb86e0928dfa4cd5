//! Reference semantics for tests, computed directly on the explored state space.
//!
//! Nothing here touches dependency graphs. [`sat_set`] evaluates every operator, derived ones
//! included, with controllable-predecessor fixed points; [`brute_force_check`] enumerates
//! positional strategy profiles and inspects their outcomes.

use std::collections::{HashMap, HashSet};

use rand::Rng;

use crate::atl::{Phi, PlayerSet};
use crate::error::ModelError;
use crate::game::{reachable_states, ExplicitGame, GameStructure, MoveVectors, State};

pub const STATE_LIMIT: usize = 10_000;
pub const PROFILE_LIMIT: usize = 1 << 20;

/// The reachable states of a game with their successor tables. State 0 is the initial state.
#[derive(Debug, Clone)]
pub struct StateSpace {
    pub states: Vec<State>,
    pub index: HashMap<State, usize>,
    pub counts: Vec<Vec<usize>>,
    /// `succ[q]` lists successor indices by rank of move vector.
    pub succ: Vec<Vec<usize>>,
}

impl StateSpace {
    pub fn explore(game: &dyn GameStructure) -> Result<Self, ModelError> {
        let explored = reachable_states(game, STATE_LIMIT)?;
        let index: HashMap<State, usize> = explored
            .iter()
            .enumerate()
            .map(|(i, (s, _))| (s.clone(), i))
            .collect();
        let mut states = Vec::new();
        let mut counts = Vec::new();
        let mut succ = Vec::new();
        for (s, table) in explored {
            states.push(s);
            succ.push(table.next.iter().map(|n| index[n]).collect());
            counts.push(table.counts);
        }
        Ok(StateSpace {
            states,
            index,
            counts,
            succ,
        })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Successors of `q` grouped by the coalition's choice, keyed by that choice.
    fn by_choice(&self, q: usize, coalition: PlayerSet) -> HashMap<Vec<usize>, Vec<usize>> {
        let mut groups: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
        for (rank, v) in MoveVectors::new(&self.counts[q]).enumerate() {
            let choice: Vec<usize> = v
                .iter()
                .enumerate()
                .filter(|(a, _)| coalition.contains(*a))
                .map(|(_, &j)| j)
                .collect();
            groups.entry(choice).or_default().push(self.succ[q][rank]);
        }
        groups
    }

    /// `{q | some choice of A forces the next state into z}`.
    fn pre_enforce(&self, coalition: PlayerSet, z: &[bool]) -> Vec<bool> {
        (0..self.len())
            .map(|q| {
                self.by_choice(q, coalition)
                    .values()
                    .any(|succ| succ.iter().all(|&s| z[s]))
            })
            .collect()
    }

    /// `{q | whatever A chooses, some completion reaches z}`.
    fn pre_despite(&self, coalition: PlayerSet, z: &[bool]) -> Vec<bool> {
        (0..self.len())
            .map(|q| {
                self.by_choice(q, coalition)
                    .values()
                    .all(|succ| succ.iter().any(|&s| z[s]))
            })
            .collect()
    }
}

fn lfp(space: &StateSpace, step: impl Fn(&[bool]) -> Vec<bool>) -> (Vec<bool>, usize) {
    let mut z = vec![false; space.len()];
    let mut rounds = 0;
    loop {
        let next = step(&z);
        if next == z {
            return (z, rounds);
        }
        z = next;
        rounds += 1;
    }
}

fn gfp(space: &StateSpace, step: impl Fn(&[bool]) -> Vec<bool>) -> Vec<bool> {
    let mut z = vec![true; space.len()];
    loop {
        let next = step(&z);
        if next == z {
            return z;
        }
        z = next;
    }
}

fn until(space: &StateSpace, s1: &[bool], s2: &[bool], pre: impl Fn(&[bool]) -> Vec<bool>) -> Vec<bool> {
    let (z, rounds) = lfp(space, |z| {
        let p = pre(z);
        (0..space.len()).map(|q| s2[q] || (s1[q] && p[q])).collect()
    });
    debug_assert!(rounds <= space.len());
    z
}

/// Truth of `phi` in every reachable state, indexed as in `space`.
pub fn sat_in(game: &dyn GameStructure, space: &StateSpace, phi: &Phi) -> Result<Vec<bool>, ModelError> {
    let all = vec![true; space.len()];
    let sat = |f: &Phi| sat_in(game, space, f);
    Ok(match phi {
        Phi::True => all,
        Phi::False => vec![false; space.len()],
        Phi::Prop(p) => space
            .states
            .iter()
            .map(|q| game.holds(q, *p))
            .collect::<Result<_, _>>()?,
        Phi::Not(a) => sat(a)?.into_iter().map(|b| !b).collect(),
        Phi::Or(a, b) => sat(a)?.into_iter().zip(sat(b)?).map(|(x, y)| x || y).collect(),
        Phi::And(a, b) => sat(a)?.into_iter().zip(sat(b)?).map(|(x, y)| x && y).collect(),
        Phi::EnforceNext(c, a) => space.pre_enforce(*c, &sat(a)?),
        Phi::DespiteNext(c, a) => space.pre_despite(*c, &sat(a)?),
        Phi::EnforceUntil(c, a, b) => until(space, &sat(a)?, &sat(b)?, |z| space.pre_enforce(*c, z)),
        Phi::DespiteUntil(c, a, b) => until(space, &sat(a)?, &sat(b)?, |z| space.pre_despite(*c, z)),
        Phi::EnforceEventually(c, a) => until(space, &all, &sat(a)?, |z| space.pre_enforce(*c, z)),
        Phi::DespiteEventually(c, a) => until(space, &all, &sat(a)?, |z| space.pre_despite(*c, z)),
        Phi::EnforceInvariant(c, a) => {
            let s = sat(a)?;
            gfp(space, |z| {
                let p = space.pre_enforce(*c, z);
                (0..space.len()).map(|q| s[q] && p[q]).collect()
            })
        }
        Phi::DespiteInvariant(c, a) => {
            let s = sat(a)?;
            gfp(space, |z| {
                let p = space.pre_despite(*c, z);
                (0..space.len()).map(|q| s[q] && p[q]).collect()
            })
        }
    })
}

/// Truth of `phi` in every reachable state. Index 0 is the initial state.
pub fn sat_set(game: &dyn GameStructure, phi: &Phi) -> Result<Vec<bool>, ModelError> {
    let space = StateSpace::explore(game)?;
    sat_in(game, &space, phi)
}

pub fn holds_initially(game: &dyn GameStructure, phi: &Phi) -> Result<bool, ModelError> {
    Ok(sat_set(game, phi)?[0])
}

/// Positional choices of a coalition. States without an entry leave the coalition free.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StrategyProfile {
    pub coalition: PlayerSet,
    /// Moves of the coalition members, in player order.
    pub choice: HashMap<State, Vec<usize>>,
}

impl StrategyProfile {
    fn allows(&self, q: &State, v: &[usize]) -> bool {
        match self.choice.get(q) {
            None => true,
            Some(moves) => self
                .coalition
                .iter()
                .zip(moves)
                .all(|(a, &j)| v[a] == j),
        }
    }
}

fn profile_successors(space: &StateSpace, profile: &StrategyProfile, q: usize) -> Vec<usize> {
    let mut out: Vec<usize> = MoveVectors::new(&space.counts[q])
        .enumerate()
        .filter(|(_, v)| profile.allows(&space.states[q], v))
        .map(|(rank, _)| space.succ[q][rank])
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Distinct state sequences of `depth` transitions from `q` under `profile`.
pub fn outcomes(
    game: &dyn GameStructure,
    q: &State,
    profile: &StrategyProfile,
    depth: usize,
) -> Result<Vec<Vec<State>>, ModelError> {
    let mut out = HashSet::new();
    let mut stack = vec![vec![q.clone()]];
    while let Some(prefix) = stack.pop() {
        if prefix.len() == depth + 1 {
            out.insert(prefix);
            continue;
        }
        let last = prefix.last().unwrap();
        let counts = game.move_counts(last)?;
        for v in MoveVectors::new(&counts) {
            if profile.allows(last, &v) {
                let mut next = prefix.clone();
                next.push(game.transition(last, &v)?);
                stack.push(next);
            }
        }
    }
    let mut out: Vec<_> = out.into_iter().collect();
    out.sort();
    Ok(out)
}

/// Number of move-vector sequences of `depth` steps from `q` under `profile`.
pub fn outcome_count(
    game: &dyn GameStructure,
    q: &State,
    profile: &StrategyProfile,
    depth: usize,
) -> Result<usize, ModelError> {
    if depth == 0 {
        return Ok(1);
    }
    let mut total = 0;
    for v in MoveVectors::new(&game.move_counts(q)?) {
        if profile.allows(q, &v) {
            total += outcome_count(game, &game.transition(q, &v)?, profile, depth - 1)?;
        }
    }
    Ok(total)
}

/// Whether every outcome of `profile` from the initial state satisfies the path formula of
/// `phi`, an enforce next, until or eventually formula. Outcomes are inspected up to
/// `|Q| + 1` steps.
pub fn replay_satisfies(
    game: &dyn GameStructure,
    profile: &StrategyProfile,
    phi: &Phi,
) -> Result<bool, ModelError> {
    let space = StateSpace::explore(game)?;
    let horizon = space.len() + 1;
    match phi {
        Phi::EnforceNext(_, a) => {
            let s = sat_in(game, &space, a)?;
            Ok(profile_successors(&space, profile, 0).iter().all(|&n| s[n]))
        }
        Phi::EnforceUntil(_, a, b) => {
            let (s1, s2) = (sat_in(game, &space, a)?, sat_in(game, &space, b)?);
            Ok(all_until(&space, profile, &s1, &s2, 0, horizon, &mut HashMap::new()))
        }
        Phi::EnforceEventually(_, b) => {
            let s2 = sat_in(game, &space, b)?;
            let s1 = vec![true; space.len()];
            Ok(all_until(&space, profile, &s1, &s2, 0, horizon, &mut HashMap::new()))
        }
        _ => Ok(false),
    }
}

fn all_until(
    space: &StateSpace,
    profile: &StrategyProfile,
    s1: &[bool],
    s2: &[bool],
    q: usize,
    depth: usize,
    memo: &mut HashMap<(usize, usize), bool>,
) -> bool {
    if s2[q] {
        return true;
    }
    if !s1[q] || depth == 0 {
        return false;
    }
    if let Some(&v) = memo.get(&(q, depth)) {
        return v;
    }
    let v = profile_successors(space, profile, q)
        .into_iter()
        .all(|n| all_until(space, profile, s1, s2, n, depth - 1, memo));
    memo.insert((q, depth), v);
    v
}

struct Brute<'a> {
    game: &'a dyn GameStructure,
    space: &'a StateSpace,
    cache: HashMap<(*const Phi, usize), bool>,
}

impl Brute<'_> {
    fn holds(&mut self, phi: &Phi, q: usize) -> Result<bool, ModelError> {
        let key = (phi as *const Phi, q);
        if let Some(&v) = self.cache.get(&key) {
            return Ok(v);
        }
        let v = match phi {
            Phi::True => true,
            Phi::False => false,
            Phi::Prop(p) => self.game.holds(&self.space.states[q], *p)?,
            Phi::Not(a) => !self.holds(a, q)?,
            Phi::Or(a, b) => self.holds(a, q)? || self.holds(b, q)?,
            Phi::And(a, b) => self.holds(a, q)? && self.holds(b, q)?,
            Phi::EnforceNext(c, _)
            | Phi::EnforceUntil(c, _, _)
            | Phi::EnforceEventually(c, _)
            | Phi::EnforceInvariant(c, _) => self.strategic(phi, *c, q, true)?,
            Phi::DespiteNext(c, _)
            | Phi::DespiteUntil(c, _, _)
            | Phi::DespiteEventually(c, _)
            | Phi::DespiteInvariant(c, _) => self.strategic(phi, *c, q, false)?,
        };
        self.cache.insert(key, v);
        Ok(v)
    }

    /// Enforce: some profile makes every outcome satisfy the path formula.
    /// Despite: every profile leaves some outcome satisfying it.
    fn strategic(&mut self, phi: &Phi, coalition: PlayerSet, q: usize, enforce: bool) -> Result<bool, ModelError> {
        let states = self.reach(q);
        let players: Vec<usize> = coalition.iter().collect();
        let radix: Vec<usize> = states
            .iter()
            .flat_map(|&s| players.iter().map(move |&a| (s, a)))
            .map(|(s, a)| self.space.counts[s][a])
            .collect();
        let total = radix.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d));
        if total.is_none_or(|t| t > PROFILE_LIMIT) {
            return Err(ModelError::TooLarge {
                limit: PROFILE_LIMIT,
            });
        }

        // Truth of the state subformulas, so that the profile loop only does path checks.
        let (s1, s2): (Vec<bool>, Vec<bool>) = {
            let (a, b) = match phi {
                Phi::EnforceNext(_, b) | Phi::DespiteNext(_, b) => (None, b.as_ref()),
                Phi::EnforceUntil(_, a, b) | Phi::DespiteUntil(_, a, b) => (Some(a.as_ref()), b.as_ref()),
                Phi::EnforceEventually(_, b)
                | Phi::DespiteEventually(_, b)
                | Phi::EnforceInvariant(_, b)
                | Phi::DespiteInvariant(_, b) => (None, b.as_ref()),
                _ => unreachable!(),
            };
            let mut s1 = vec![true; self.space.len()];
            let mut s2 = vec![false; self.space.len()];
            for &s in &states {
                if let Some(a) = a {
                    s1[s] = self.holds(a, s)?;
                }
                s2[s] = self.holds(b, s)?;
            }
            (s1, s2)
        };

        for assignment in MoveVectors::new(&radix) {
            let mut profile = StrategyProfile {
                coalition,
                choice: HashMap::new(),
            };
            for (i, &s) in states.iter().enumerate() {
                let moves = assignment[i * players.len()..(i + 1) * players.len()].to_vec();
                profile.choice.insert(self.space.states[s].clone(), moves);
            }
            let ok = self.path_holds(phi, &profile, q, &s1, &s2, !enforce);
            if enforce && ok {
                return Ok(true);
            }
            if !enforce && !ok {
                return Ok(false);
            }
        }
        Ok(!enforce)
    }

    /// With `exists`, some outcome satisfies the path formula; otherwise all do.
    fn path_holds(
        &self,
        phi: &Phi,
        profile: &StrategyProfile,
        q: usize,
        s1: &[bool],
        s2: &[bool],
        exists: bool,
    ) -> bool {
        let horizon = self.space.len() + 1;
        let mut memo = HashMap::new();
        match phi {
            Phi::EnforceNext(..) | Phi::DespiteNext(..) => {
                let succ = profile_successors(self.space, profile, q);
                if exists {
                    succ.iter().any(|&n| s2[n])
                } else {
                    succ.iter().all(|&n| s2[n])
                }
            }
            Phi::EnforceInvariant(..) | Phi::DespiteInvariant(..) => {
                self.invariant(profile, s2, q, horizon, exists, &mut memo)
            }
            _ => self.until(profile, s1, s2, q, horizon, exists, &mut memo),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn until(
        &self,
        profile: &StrategyProfile,
        s1: &[bool],
        s2: &[bool],
        q: usize,
        depth: usize,
        exists: bool,
        memo: &mut HashMap<(usize, usize), bool>,
    ) -> bool {
        if s2[q] {
            return true;
        }
        if !s1[q] || depth == 0 {
            return false;
        }
        if let Some(&v) = memo.get(&(q, depth)) {
            return v;
        }
        let succ = profile_successors(self.space, profile, q);
        let v = if exists {
            succ.into_iter()
                .any(|n| self.until(profile, s1, s2, n, depth - 1, exists, memo))
        } else {
            succ.into_iter()
                .all(|n| self.until(profile, s1, s2, n, depth - 1, exists, memo))
        };
        memo.insert((q, depth), v);
        v
    }

    fn invariant(
        &self,
        profile: &StrategyProfile,
        s: &[bool],
        q: usize,
        depth: usize,
        exists: bool,
        memo: &mut HashMap<(usize, usize), bool>,
    ) -> bool {
        if !s[q] {
            return false;
        }
        if depth == 0 {
            return true;
        }
        if let Some(&v) = memo.get(&(q, depth)) {
            return v;
        }
        let succ = profile_successors(self.space, profile, q);
        let v = if exists {
            succ.into_iter()
                .any(|n| self.invariant(profile, s, n, depth - 1, exists, memo))
        } else {
            succ.into_iter()
                .all(|n| self.invariant(profile, s, n, depth - 1, exists, memo))
        };
        memo.insert((q, depth), v);
        v
    }

    fn reach(&self, q: usize) -> Vec<usize> {
        let mut seen = vec![false; self.space.len()];
        let mut stack = vec![q];
        seen[q] = true;
        while let Some(s) = stack.pop() {
            for &n in &self.space.succ[s] {
                if !seen[n] {
                    seen[n] = true;
                    stack.push(n);
                }
            }
        }
        (0..self.space.len()).filter(|&s| seen[s]).collect()
    }
}

/// Truth of `phi` at the initial state by enumerating positional strategy profiles.
pub fn brute_force_check(game: &dyn GameStructure, phi: &Phi) -> Result<bool, ModelError> {
    let space = StateSpace::explore(game)?;
    let mut brute = Brute {
        game,
        space: &space,
        cache: HashMap::new(),
    };
    brute.holds(phi, 0)
}

/// A random game with `states` states, the given number of players and at most `max_moves`
/// moves per player and state, and `props` propositions `p0`, `p1`, … owned by player `a`.
pub fn random_game(rng: &mut impl Rng, states: usize, players: usize, max_moves: usize, props: usize) -> ExplicitGame {
    let names = (0..players).map(|a| format!("a{a}")).collect();
    let propositions = (0..props).map(|p| format!("s.p{p}")).collect();
    let mut moves = Vec::new();
    let mut delta = Vec::new();
    let mut labels = Vec::new();
    for _ in 0..states {
        let d: Vec<usize> = (0..players).map(|_| rng.gen_range(1..=max_moves)).collect();
        let n: usize = d.iter().product();
        delta.push((0..n).map(|_| rng.gen_range(0..states)).collect());
        moves.push(d);
        labels.push((0..props).map(|_| rng.gen_bool(0.5)).collect());
    }
    ExplicitGame::new(names, propositions, moves, delta, labels, 0)
}

fn random_coalition(rng: &mut impl Rng, players: usize) -> PlayerSet {
    PlayerSet::from_players((0..players).filter(|_| rng.gen_bool(0.5)))
}

/// The ten operator shapes a random formula can have at its root.
pub const SHAPES: [&str; 14] = [
    "prop", "true", "not", "or", "and", "enforce-next", "enforce-until", "despite-until",
    "enforce-eventually", "enforce-invariant", "despite-next", "despite-eventually",
    "despite-invariant", "false",
];

/// A random formula of at most `depth` nested operators whose root has the given shape.
pub fn random_formula_with_root(rng: &mut impl Rng, shape: &str, depth: usize, players: usize, props: usize) -> Phi {
    let sub = |rng: &mut _| Box::new(random_formula(rng, depth.saturating_sub(1), players, props));
    let c = random_coalition(rng, players);
    match shape {
        "prop" => Phi::Prop(rng.gen_range(0..props)),
        "true" => Phi::True,
        "false" => Phi::False,
        "not" => Phi::Not(sub(rng)),
        "or" => Phi::Or(sub(rng), sub(rng)),
        "and" => Phi::And(sub(rng), sub(rng)),
        "enforce-next" => Phi::EnforceNext(c, sub(rng)),
        "despite-next" => Phi::DespiteNext(c, sub(rng)),
        "enforce-until" => Phi::EnforceUntil(c, sub(rng), sub(rng)),
        "despite-until" => Phi::DespiteUntil(c, sub(rng), sub(rng)),
        "enforce-eventually" => Phi::EnforceEventually(c, sub(rng)),
        "despite-eventually" => Phi::DespiteEventually(c, sub(rng)),
        "enforce-invariant" => Phi::EnforceInvariant(c, sub(rng)),
        "despite-invariant" => Phi::DespiteInvariant(c, sub(rng)),
        other => panic!("unknown shape {other}"),
    }
}

/// A random formula with at most `depth` nested operators.
pub fn random_formula(rng: &mut impl Rng, depth: usize, players: usize, props: usize) -> Phi {
    if depth == 0 || rng.gen_bool(0.25) {
        return if rng.gen_bool(0.9) {
            Phi::Prop(rng.gen_range(0..props))
        } else {
            Phi::True
        };
    }
    let shape = SHAPES[rng.gen_range(2..SHAPES.len() - 1)];
    random_formula_with_root(rng, shape, depth, players, props)
}
