//! Dependency heuristic: edges out of configurations with many in-edges go first.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet, VecDeque};

use super::SearchQueue;
use crate::edg::{ConfigId, Edge};

/// Max-heap on the in-degree of the edge's source, FIFO among equals.
///
/// The heap holds sources keyed by in-degree and the sequence number of their oldest queued
/// edge. When a source gains an in-edge or hands out an edge it is pushed again and its
/// older heap entries are skipped when popped.
#[derive(Debug, Default)]
pub struct DhsQueue {
    heap: BinaryHeap<(u32, Reverse<u64>, ConfigId)>,
    seq: u64,
    indegree: HashMap<ConfigId, u32>,
    queued: HashMap<ConfigId, VecDeque<(u64, usize)>>,
    live: HashSet<usize>,
}

impl DhsQueue {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn indegree(&self, c: ConfigId) -> u32 {
        self.indegree.get(&c).copied().unwrap_or(0)
    }

    fn enter(&mut self, source: ConfigId) {
        if let Some(&(front, _)) = self.queued.get(&source).and_then(|q| q.front()) {
            self.heap.push((self.indegree(source), Reverse(front), source));
        }
    }
}

impl SearchQueue for DhsQueue {
    fn push(&mut self, edge: usize, e: &Edge) {
        if !self.live.insert(edge) {
            return;
        }
        let source = e.source();
        self.seq += 1;
        let list = self.queued.entry(source).or_default();
        list.push_back((self.seq, edge));
        if list.len() == 1 {
            self.enter(source);
        }
    }

    fn pop(&mut self) -> Option<usize> {
        while let Some((degree, Reverse(front), source)) = self.heap.pop() {
            if degree != self.indegree(source) {
                continue;
            }
            let Some(list) = self.queued.get_mut(&source) else {
                continue;
            };
            if list.front().map(|&(s, _)| s) != Some(front) {
                continue;
            }
            let (_, edge) = list.pop_front().unwrap();
            if list.is_empty() {
                self.queued.remove(&source);
            } else {
                self.enter(source);
            }
            self.live.remove(&edge);
            return Some(edge);
        }
        None
    }

    fn notify_new_in_edge(&mut self, c: ConfigId) {
        *self.indegree.entry(c).or_insert(0) += 1;
        self.enter(c);
    }

    fn len(&self) -> usize {
        self.live.len()
    }
}
