//! The local Certain-Zero algorithm.
//!
//! Configurations are partitioned over `W` workers by a content hash. A worker explores the
//! configurations it owns, evaluates their edges in the order its search queue dictates, and
//! asks the owners of edge targets to report once their values are certain. Values only climb
//! the lattice `⊥ ⊑ ? ⊑ {0, 1}`; the run stops as soon as the root is 0 or 1.
//!
//! When no work is left anywhere, the undetermined configurations of the lowest negation
//! depth `m` cannot be raised any further, so they are released to 0 in one round. Their
//! negation edges now read a final value and work resumes. Each release strictly raises `m`,
//! and a release at the root's own depth settles the root.

mod witness;
mod worker;

pub use witness::{Witness, WitnessError};

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::mpsc::{channel, Sender};
use std::sync::Mutex;
use std::thread::{self, Thread};
use std::time::Duration;

use crate::atl::{FormulaArena, Phi};
use crate::edg::{ConfigId, Encoder};
use crate::error::ModelError;
use crate::game::GameStructure;
use crate::strategy::{Strategy, StrategyContext};

use worker::{owner_of, Report, Worker};

/// A point of the assignment lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Value {
    #[default]
    Bottom,
    Unknown,
    Zero,
    One,
}

impl Value {
    pub fn is_certain(self) -> bool {
        matches!(self, Value::Zero | Value::One)
    }

    /// Whether `self ⊑ other`.
    pub fn below(self, other: Value) -> bool {
        match (self, other) {
            (a, b) if a == b => true,
            (Value::Bottom, _) => true,
            (Value::Unknown, Value::Zero | Value::One) => true,
            _ => false,
        }
    }

    pub fn certain(b: bool) -> Value {
        if b {
            Value::One
        } else {
            Value::Zero
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalOptions {
    pub strategy: Strategy,
    pub workers: usize,
    pub witness: bool,
}

impl Default for LocalOptions {
    fn default() -> Self {
        LocalOptions {
            strategy: Strategy::Bfs,
            workers: 1,
            witness: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LocalStats {
    /// Configurations whose edges were generated.
    pub explored: usize,
    /// Configurations interned, explored or not.
    pub configurations: usize,
    pub edges: usize,
    pub messages: usize,
    pub release_rounds: usize,
    /// Writes that would have moved a value down the lattice; always 0.
    pub downward_transitions: usize,
}

impl LocalStats {
    fn add(&mut self, other: &LocalStats) {
        self.explored += other.explored;
        self.edges += other.edges;
        self.messages += other.messages;
        self.downward_transitions += other.downward_transitions;
    }

    /// `key=value` lines.
    pub fn lines(&self) -> Vec<String> {
        vec![
            format!("explored={}", self.explored),
            format!("configurations={}", self.configurations),
            format!("edges={}", self.edges),
            format!("messages={}", self.messages),
            format!("release_rounds={}", self.release_rounds),
            format!("downward_transitions={}", self.downward_transitions),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalOutcome {
    pub verdict: bool,
    pub stats: LocalStats,
    /// Present when requested.
    pub witness: Option<Result<Witness, WitnessError>>,
}

pub fn check_local(
    game: &dyn GameStructure,
    phi: &Phi,
    strategy: Strategy,
    workers: usize,
) -> Result<LocalOutcome, ModelError> {
    check_local_with(
        game,
        phi,
        &LocalOptions {
            strategy,
            workers,
            witness: false,
        },
    )
}

pub(crate) enum Message {
    /// `from` has an edge waiting on `target`; `None` for the initial request.
    Request { target: ConfigId, from: Option<usize> },
    Notify { config: ConfigId, value: bool },
    Release(u32),
    Terminate,
}

pub(crate) struct Shared<'a> {
    pub enc: &'a Encoder<'a>,
    pub ctx: StrategyContext<'a>,
    pub root: ConfigId,
    pub workers: usize,
    pub senders: Vec<Sender<Message>>,
    /// Messages in flight plus queued edges, over all workers.
    pub outstanding: AtomicUsize,
    /// Configurations at value `?`, per negation depth.
    pub unknown: Vec<AtomicUsize>,
    pub done: AtomicBool,
    pub root_value: Mutex<Option<bool>>,
    pub error: Mutex<Option<ModelError>>,
    pub coordinator: Thread,
}

impl Shared<'_> {
    pub fn wake(&self) {
        self.coordinator.unpark();
    }

    pub fn fail(&self, e: ModelError) {
        self.error.lock().unwrap().get_or_insert(e);
        self.done.store(true, Ordering::SeqCst);
        self.wake();
    }

    /// The lowest depth holding a `?` configuration.
    pub fn lowest_unknown(&self) -> Option<u32> {
        self.unknown
            .iter()
            .position(|n| n.load(Ordering::SeqCst) > 0)
            .map(|m| m as u32)
    }
}

pub fn check_local_with(
    game: &dyn GameStructure,
    phi: &Phi,
    options: &LocalOptions,
) -> Result<LocalOutcome, ModelError> {
    assert!(options.workers >= 1, "at least one worker is needed");
    let mut arena = FormulaArena::new();
    let f = arena.add(phi);
    let enc = Encoder::new(game, &arena);
    let root = enc.root(f);
    let depth = arena.depth(f);

    let w = options.workers;
    let (senders, receivers): (Vec<_>, Vec<_>) = (0..w).map(|_| channel()).unzip();
    let shared = Shared {
        enc: &enc,
        ctx: StrategyContext::new(&enc, options.strategy, root),
        root,
        workers: w,
        senders,
        outstanding: AtomicUsize::new(0),
        unknown: (0..=depth).map(|_| AtomicUsize::new(0)).collect(),
        done: AtomicBool::new(false),
        root_value: Mutex::new(None),
        error: Mutex::new(None),
        coordinator: thread::current(),
    };

    // The initial request is in flight before any worker or the coordinator looks around.
    shared.outstanding.store(1, Ordering::SeqCst);
    let first = Message::Request { target: root, from: None };
    shared.senders[if w == 1 { 0 } else { owner_of(&enc, root, w) }]
        .send(first)
        .expect("receivers are alive");

    let mut stats = LocalStats::default();
    let reports: Vec<Report> = if w == 1 {
        let rx = receivers.into_iter().next().unwrap();
        let worker = Worker::new(0, &shared, rx, options.witness);
        vec![worker.run_alone(depth, &mut stats.release_rounds)]
    } else {
        thread::scope(|scope| {
            let handles: Vec<_> = receivers
                .into_iter()
                .enumerate()
                .map(|(id, rx)| {
                    let shared = &shared;
                    scope.spawn(move || {
                        Worker::new(id, shared, rx, options.witness).run()
                    })
                })
                .collect();
            coordinate(&shared, depth, &mut stats.release_rounds);
            for tx in &shared.senders {
                let _ = tx.send(Message::Terminate);
            }
            handles
                .into_iter()
                .map(|h| h.join().expect("worker panicked"))
                .collect()
        })
    };

    if let Some(e) = shared.error.lock().unwrap().take() {
        return Err(e);
    }
    let verdict = shared
        .root_value
        .lock()
        .unwrap()
        .expect("the root is settled on termination");
    for r in &reports {
        stats.add(&r.stats);
    }
    stats.configurations = enc.config_count();
    let witness = options
        .witness
        .then(|| witness::extract(&enc, &arena, f, verdict, &reports));
    Ok(LocalOutcome {
        verdict,
        stats,
        witness,
    })
}

/// Watches for quiescence and issues releases until the root is settled.
fn coordinate(shared: &Shared<'_>, depth: u32, rounds: &mut usize) {
    while !shared.done.load(Ordering::SeqCst) {
        thread::park_timeout(Duration::from_millis(5));
        if shared.done.load(Ordering::SeqCst) || shared.outstanding.load(Ordering::SeqCst) != 0 {
            continue;
        }
        let Some(m) = shared.lowest_unknown() else {
            continue;
        };
        if m < depth {
            *rounds += 1;
        }
        shared
            .outstanding
            .fetch_add(shared.workers, Ordering::SeqCst);
        for tx in &shared.senders {
            let _ = tx.send(Message::Release(m));
        }
    }
}
