use std::collections::hash_map::DefaultHasher;
use std::collections::{HashMap, VecDeque};
use std::hash::{Hash, Hasher};
use std::sync::atomic::Ordering;
use std::sync::mpsc::{Receiver, TryRecvError};

use super::{LocalStats, Message, Shared, Value};
use crate::edg::{ConfigId, Configuration, Edge, Encoder, PartialMove};
use crate::strategy::SearchQueue;

#[derive(Debug, Default)]
struct Entry {
    value: Value,
    level: u32,
    /// Edges not yet known to fail.
    live: usize,
    /// Workers to notify once the value is certain.
    interested: Vec<usize>,
    certified_by: Option<usize>,
}

struct EdgeState {
    edge: Edge,
    /// Targets not yet known to be 1.
    missing: usize,
    dead: bool,
}

/// What a worker hands back when it stops.
#[derive(Debug, Default)]
pub(crate) struct Report {
    pub stats: LocalStats,
    /// Configurations settled to 1, with the partial move of the certifying edge.
    pub certified: Vec<(ConfigId, Option<PartialMove>)>,
}

/// The worker owning `c`. Stable across runs: it hashes state contents, not interned ids.
pub(crate) fn owner_of(enc: &Encoder<'_>, c: ConfigId, workers: usize) -> usize {
    let mut h = DefaultHasher::new();
    match enc.configuration(c) {
        Configuration::Pair(q, f) => {
            enc.state(q).hash(&mut h);
            f.hash(&mut h);
        }
        Configuration::Triple(q, v, f) => {
            enc.state(q).hash(&mut h);
            v.hash(&mut h);
            f.hash(&mut h);
        }
    }
    (h.finish() % workers as u64) as usize
}

pub(crate) struct Worker<'s, 'a> {
    id: usize,
    shared: &'s Shared<'a>,
    rx: Receiver<Message>,
    inbox: VecDeque<Message>,
    queue: Box<dyn SearchQueue + 's>,
    table: HashMap<ConfigId, Entry>,
    edges: Vec<EdgeState>,
    waiting: HashMap<ConfigId, Vec<usize>>,
    /// Certain values of configurations owned elsewhere.
    known: HashMap<ConfigId, bool>,
    owners: HashMap<ConfigId, usize>,
    stats: LocalStats,
    keep_certificates: bool,
}

impl<'s, 'a> Worker<'s, 'a> {
    pub fn new(id: usize, shared: &'s Shared<'a>, rx: Receiver<Message>, keep_certificates: bool) -> Self {
        Worker {
            id,
            shared,
            rx,
            inbox: VecDeque::new(),
            queue: shared.ctx.queue(),
            table: HashMap::new(),
            edges: Vec::new(),
            waiting: HashMap::new(),
            known: HashMap::new(),
            owners: HashMap::new(),
            stats: LocalStats::default(),
            keep_certificates,
        }
    }

    /// Multi-worker loop; returns on `Terminate` or once the run is over.
    pub fn run(mut self) -> Report {
        while !self.shared.done.load(Ordering::SeqCst) {
            if let Some(msg) = self.inbox.pop_front() {
                if !self.handle(msg) {
                    break;
                }
                continue;
            }
            match self.rx.try_recv() {
                Ok(msg) => {
                    if !self.handle(msg) {
                        break;
                    }
                    continue;
                }
                Err(TryRecvError::Disconnected) => break,
                Err(TryRecvError::Empty) => {}
            }
            if let Some(e) = self.queue.pop() {
                self.process(e);
                self.finish_unit();
                continue;
            }
            match self.rx.recv() {
                Ok(msg) => {
                    if !self.handle(msg) {
                        break;
                    }
                }
                Err(_) => break,
            }
        }
        self.report()
    }

    /// Single-worker loop: quiescence is simply an empty inbox and queue.
    pub fn run_alone(mut self, depth: u32, rounds: &mut usize) -> Report {
        while !self.shared.done.load(Ordering::SeqCst) {
            if let Some(msg) = self.inbox.pop_front().or_else(|| self.rx.try_recv().ok()) {
                self.handle(msg);
            } else if let Some(e) = self.queue.pop() {
                self.process(e);
                self.finish_unit();
            } else {
                debug_assert_eq!(self.shared.outstanding.load(Ordering::SeqCst), 0);
                let Some(m) = self.shared.lowest_unknown() else {
                    break;
                };
                if m < depth {
                    *rounds += 1;
                }
                self.release(m);
            }
        }
        self.report()
    }

    fn report(self) -> Report {
        let certified = if self.keep_certificates {
            self.table
                .iter()
                .filter(|(_, e)| e.value == Value::One)
                .map(|(&c, e)| {
                    let pmove = e.certified_by.and_then(|i| match &self.edges[i].edge {
                        Edge::Hyper { pmove, .. } => pmove.clone(),
                        Edge::Negation { .. } => None,
                    });
                    (c, pmove)
                })
                .collect()
        } else {
            Vec::new()
        };
        Report {
            stats: self.stats,
            certified,
        }
    }

    /// `false` on `Terminate`.
    fn handle(&mut self, msg: Message) -> bool {
        match msg {
            Message::Request { target, from } => self.on_request(target, from),
            Message::Notify { config, value } => self.on_notify(config, value),
            Message::Release(m) => self.release(m),
            Message::Terminate => return false,
        }
        self.finish_unit();
        true
    }

    fn finish_unit(&self) {
        if self.shared.outstanding.fetch_sub(1, Ordering::SeqCst) == 1 && self.shared.workers > 1 {
            self.shared.wake();
        }
    }

    fn send(&mut self, to: usize, msg: Message) {
        self.stats.messages += 1;
        self.shared.outstanding.fetch_add(1, Ordering::SeqCst);
        if to == self.id {
            self.inbox.push_back(msg);
        } else {
            let _ = self.shared.senders[to].send(msg);
        }
    }

    fn owner(&mut self, c: ConfigId) -> usize {
        if self.shared.workers == 1 {
            return 0;
        }
        if let Some(&o) = self.owners.get(&c) {
            return o;
        }
        let o = owner_of(self.shared.enc, c, self.shared.workers);
        self.owners.insert(c, o);
        o
    }

    fn value_of(&mut self, c: ConfigId) -> Option<bool> {
        if self.owner(c) == self.id {
            match self.table.get(&c).map(|e| e.value) {
                Some(Value::One) => Some(true),
                Some(Value::Zero) => Some(false),
                _ => None,
            }
        } else {
            self.known.get(&c).copied()
        }
    }

    fn is_settled(&self, c: ConfigId) -> bool {
        self.table.get(&c).is_some_and(|e| e.value.is_certain())
    }

    fn on_request(&mut self, target: ConfigId, from: Option<usize>) {
        debug_assert_eq!(self.owner(target), self.id);
        if from.is_some() {
            self.queue.notify_new_in_edge(target);
        }
        let entry = self.table.entry(target).or_default();
        match entry.value {
            Value::Zero | Value::One => {
                let value = entry.value == Value::One;
                if let Some(w) = from {
                    self.send(w, Message::Notify { config: target, value });
                }
            }
            Value::Unknown => {
                if let Some(w) = from {
                    if !entry.interested.contains(&w) {
                        entry.interested.push(w);
                    }
                }
            }
            Value::Bottom => {
                if let Some(w) = from {
                    entry.interested.push(w);
                }
                self.explore(target);
            }
        }
    }

    fn explore(&mut self, c: ConfigId) {
        let level = self.shared.enc.dist(c);
        let edges = match self.shared.enc.successors(c) {
            Ok(edges) => edges,
            Err(e) => {
                self.shared.fail(e);
                return;
            }
        };
        self.stats.explored += 1;
        self.write(c, Value::Unknown, None);
        let entry = self.table.get_mut(&c).unwrap();
        entry.level = level;
        entry.live = edges.len();
        self.shared.unknown[level as usize].fetch_add(1, Ordering::SeqCst);
        if edges.is_empty() {
            self.settle(c, false, None);
            return;
        }
        for edge in edges {
            let i = self.edges.len();
            let missing = edge.targets().len();
            self.shared.outstanding.fetch_add(1, Ordering::SeqCst);
            self.queue.push(i, &edge);
            self.edges.push(EdgeState {
                edge,
                missing,
                dead: false,
            });
        }
    }

    fn process(&mut self, i: usize) {
        self.stats.edges += 1;
        let source = self.edges[i].edge.source();
        if self.is_settled(source) || self.edges[i].dead {
            return;
        }
        let targets: Vec<ConfigId> = self.edges[i].edge.targets().to_vec();
        match self.edges[i].edge {
            Edge::Hyper { .. } => {
                let mut open = Vec::new();
                for t in targets {
                    match self.value_of(t) {
                        Some(true) => {}
                        Some(false) => {
                            self.kill(i);
                            return;
                        }
                        None => open.push(t),
                    }
                }
                self.edges[i].missing = open.len();
                if open.is_empty() {
                    self.settle(source, true, Some(i));
                    return;
                }
                for t in open {
                    self.wait_on(t, i);
                }
            }
            Edge::Negation { target, .. } => match self.value_of(target) {
                Some(false) => self.settle(source, true, Some(i)),
                Some(true) => self.kill(i),
                None => self.wait_on(target, i),
            },
        }
    }

    fn wait_on(&mut self, t: ConfigId, edge: usize) {
        self.waiting.entry(t).or_default().push(edge);
        let to = self.owner(t);
        self.send(to, Message::Request { target: t, from: Some(self.id) });
    }

    fn on_notify(&mut self, c: ConfigId, value: bool) {
        if self.owner(c) != self.id {
            self.known.insert(c, value);
        }
        for i in self.waiting.remove(&c).unwrap_or_default() {
            let source = self.edges[i].edge.source();
            if self.edges[i].dead || self.is_settled(source) {
                continue;
            }
            match (&self.edges[i].edge, value) {
                (Edge::Hyper { .. }, true) => {
                    self.edges[i].missing -= 1;
                    if self.edges[i].missing == 0 {
                        self.settle(source, true, Some(i));
                    }
                }
                (Edge::Negation { .. }, false) => self.settle(source, true, Some(i)),
                (Edge::Hyper { .. }, false) | (Edge::Negation { .. }, true) => self.kill(i),
            }
        }
    }

    /// The edge can no longer make its source 1.
    fn kill(&mut self, i: usize) {
        self.edges[i].dead = true;
        let source = self.edges[i].edge.source();
        let entry = self.table.get_mut(&source).expect("edges belong to explored sources");
        entry.live -= 1;
        if entry.live == 0 {
            self.settle(source, false, None);
        }
    }

    fn release(&mut self, m: u32) {
        let settle: Vec<ConfigId> = self
            .table
            .iter()
            .filter(|(_, e)| e.value == Value::Unknown && e.level <= m)
            .map(|(&c, _)| c)
            .collect();
        for c in settle {
            self.settle(c, false, None);
        }
    }

    /// Records a value, counting any write that is not a step up the lattice.
    fn write(&mut self, c: ConfigId, v: Value, certified_by: Option<usize>) -> Option<Value> {
        debug_assert_eq!(self.owner(c), self.id, "write outside the owner");
        let entry = self.table.entry(c).or_default();
        let old = entry.value;
        if !old.below(v) || (old.is_certain() && old == v) {
            if old != v {
                self.stats.downward_transitions += 1;
            }
            return None;
        }
        entry.value = v;
        entry.certified_by = certified_by;
        Some(old)
    }

    fn settle(&mut self, c: ConfigId, value: bool, certified_by: Option<usize>) {
        let Some(old) = self.write(c, Value::certain(value), certified_by) else {
            return;
        };
        let entry = self.table.get_mut(&c).unwrap();
        if old == Value::Unknown {
            self.shared.unknown[entry.level as usize].fetch_sub(1, Ordering::SeqCst);
        }
        let interested = std::mem::take(&mut entry.interested);
        if c == self.shared.root {
            *self.shared.root_value.lock().unwrap() = Some(value);
            self.shared.done.store(true, Ordering::SeqCst);
            self.shared.wake();
        }
        for w in interested {
            self.send(w, Message::Notify { config: c, value });
        }
    }
}
