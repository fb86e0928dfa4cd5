//! Search strategies: the order in which the local solver processes edges.
//!
//! Every worker owns its own [`SearchQueue`], built from a [`StrategyContext`] shared by all
//! workers of one run. The context holds the caches (BiDist and LP distances per state and
//! formula, `𝓛_φ` per formula) and, for LRS, the state closest to the root's goal region.

mod basic;
mod dhs;
mod ihs;
mod lp;
mod lps;

pub use basic::{BfsQueue, DfsQueue};
pub use dhs::DhsQueue;
pub use ihs::{bidist, bidist_expr, ihs_dist, BiDist};
pub use lp::{lp_solve, LinearConstraints, LpSolution};
pub use lps::{extract_constraints, lps_dist, MAX_PAIRS};

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use dashmap::DashMap;

use crate::atl::FormulaId;
use crate::edg::{ConfigId, Edge, Encoder, StateId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum Strategy {
    #[default]
    Bfs,
    Dfs,
    Dhs,
    Ihs,
    Lps,
    Lrs,
}

impl Strategy {
    pub const ALL: [Strategy; 6] = [
        Strategy::Bfs,
        Strategy::Dfs,
        Strategy::Dhs,
        Strategy::Ihs,
        Strategy::Lps,
        Strategy::Lrs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Bfs => "bfs",
            Strategy::Dfs => "dfs",
            Strategy::Dhs => "dhs",
            Strategy::Ihs => "ihs",
            Strategy::Lps => "lps",
            Strategy::Lrs => "lrs",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown search strategy `{0}` (expected bfs, dfs, dhs, ihs, lps or lrs)")]
pub struct UnknownStrategy(pub String);

impl FromStr for Strategy {
    type Err = UnknownStrategy;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownStrategy(s.to_string()))
    }
}

/// A worker's queue of edge indices.
pub trait SearchQueue: Send {
    fn push(&mut self, edge: usize, e: &Edge);
    fn pop(&mut self) -> Option<usize>;
    /// An edge into `c` was discovered.
    fn notify_new_in_edge(&mut self, _c: ConfigId) {}
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// State shared by all queues of one run.
pub struct StrategyContext<'a> {
    pub strategy: Strategy,
    enc: &'a Encoder<'a>,
    bounds: Vec<(f64, f64)>,
    bidists: DashMap<(StateId, FormulaId), BiDist>,
    distances: DashMap<(StateId, FormulaId), f64>,
    constraints: DashMap<FormulaId, Arc<Vec<LinearConstraints>>>,
    target: Option<Vec<f64>>,
}

impl<'a> StrategyContext<'a> {
    pub fn new(enc: &'a Encoder<'a>, strategy: Strategy, root: ConfigId) -> Self {
        let bounds = enc
            .game
            .variable_bounds()
            .into_iter()
            .map(|(lo, hi)| (lo as f64, hi as f64))
            .collect();
        let mut ctx = StrategyContext {
            strategy,
            enc,
            bounds,
            bidists: DashMap::new(),
            distances: DashMap::new(),
            constraints: DashMap::new(),
            target: None,
        };
        if strategy == Strategy::Lrs {
            ctx.target = ctx.closest_satisfying(root);
        }
        ctx
    }

    /// LRS's `s*`: the optimizer of the root's LP, if it has one.
    pub fn lrs_target(&self) -> Option<&[f64]> {
        self.target.as_deref()
    }

    fn closest_satisfying(&self, root: ConfigId) -> Option<Vec<f64>> {
        let c = self.enc.configuration(root);
        let q: Vec<f64> = self.enc.state(c.state()).iter().map(|&x| x as f64).collect();
        self.constraints_of(c.formula())
            .iter()
            .filter_map(|lc| lp_solve(lc, &q, &self.bounds))
            .min_by(|a, b| a.value.total_cmp(&b.value))
            .map(|s| s.point)
    }

    pub fn constraints_of(&self, phi: FormulaId) -> Arc<Vec<LinearConstraints>> {
        if let Some(l) = self.constraints.get(&phi) {
            return l.clone();
        }
        let l = Arc::new(extract_constraints(self.enc.game, self.enc.arena, phi));
        self.constraints.entry(phi).or_insert(l).clone()
    }

    pub fn bidist_of(&self, c: ConfigId) -> BiDist {
        let conf = self.enc.configuration(c);
        let key = (conf.state(), conf.formula());
        if let Some(d) = self.bidists.get(&key) {
            return *d;
        }
        let d = bidist(self.enc.game, self.enc.arena, &self.enc.state(key.0), key.1);
        self.bidists.insert(key, d);
        d
    }

    /// `dist_LPS` of a configuration, memoized per state and formula.
    pub fn lps_dist_of(&self, c: ConfigId) -> f64 {
        let conf = self.enc.configuration(c);
        let key = (conf.state(), conf.formula());
        if let Some(d) = self.distances.get(&key) {
            return *d;
        }
        let d = lps_dist(&self.enc.state(key.0), &self.constraints_of(key.1), &self.bounds);
        self.distances.insert(key, d);
        d
    }

    /// `||s* − q||₁` for the state of `c`.
    pub fn lrs_dist_of(&self, c: ConfigId) -> f64 {
        let target = self.target.as_ref().expect("LRS without a target");
        let q = self.enc.state(self.enc.configuration(c).state());
        target.iter().zip(q.iter()).map(|(s, &x)| (s - x as f64).abs()).sum()
    }

    pub fn priority(&self, e: &Edge) -> f64 {
        match self.strategy {
            Strategy::Ihs => ihs_dist(e, |c| self.bidist_of(c)).unsigned_abs() as f64,
            Strategy::Lps => self.lps_dist_of(e.source()),
            Strategy::Lrs => self.lrs_dist_of(e.source()),
            Strategy::Bfs | Strategy::Dfs | Strategy::Dhs => 0.0,
        }
    }

    /// A fresh queue for one worker.
    pub fn queue(&self) -> Box<dyn SearchQueue + '_> {
        match self.strategy {
            Strategy::Bfs => Box::new(BfsQueue::default()),
            Strategy::Dfs => Box::new(DfsQueue::default()),
            Strategy::Dhs => Box::new(DhsQueue::new()),
            Strategy::Lrs if self.target.is_none() => Box::new(BfsQueue::default()),
            Strategy::Ihs | Strategy::Lps | Strategy::Lrs => Box::new(ScoredQueue::new(self)),
        }
    }
}

impl fmt::Debug for StrategyContext<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StrategyContext")
            .field("strategy", &self.strategy)
            .field("target", &self.target)
            .finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Score(f64);

impl Eq for Score {}

impl PartialOrd for Score {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Score {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Min-heap on a priority computed once at push time, FIFO among equals.
pub struct ScoredQueue<'c> {
    ctx: &'c StrategyContext<'c>,
    heap: BinaryHeap<Reverse<(Score, u64, usize)>>,
    seq: u64,
}

impl<'c> ScoredQueue<'c> {
    pub fn new(ctx: &'c StrategyContext<'c>) -> Self {
        ScoredQueue {
            ctx,
            heap: BinaryHeap::new(),
            seq: 0,
        }
    }
}

impl SearchQueue for ScoredQueue<'_> {
    fn push(&mut self, edge: usize, e: &Edge) {
        self.seq += 1;
        self.heap
            .push(Reverse((Score(self.ctx.priority(e)), self.seq, edge)));
    }

    fn pop(&mut self) -> Option<usize> {
        self.heap.pop().map(|Reverse((_, _, edge))| edge)
    }

    fn len(&self) -> usize {
        self.heap.len()
    }
}
