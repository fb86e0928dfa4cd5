use std::collections::VecDeque;

use super::SearchQueue;
use crate::edg::Edge;

#[derive(Debug, Default)]
pub struct BfsQueue(VecDeque<usize>);

impl SearchQueue for BfsQueue {
    fn push(&mut self, edge: usize, _: &Edge) {
        self.0.push_back(edge);
    }

    fn pop(&mut self) -> Option<usize> {
        self.0.pop_front()
    }

    fn len(&self) -> usize {
        self.0.len()
    }
}

#[derive(Debug, Default)]
pub struct DfsQueue(Vec<usize>);

impl SearchQueue for DfsQueue {
    fn push(&mut self, edge: usize, _: &Edge) {
        self.0.push(edge);
    }

    fn pop(&mut self) -> Option<usize> {
        self.0.pop()
    }

    fn len(&self) -> usize {
        self.0.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::edg::ConfigId;

    fn e() -> Edge {
        Edge::Negation {
            source: ConfigId(0),
            target: ConfigId(1),
        }
    }

    #[test]
    fn bfs_is_fifo() {
        let mut q = BfsQueue::default();
        q.push(1, &e());
        q.push(2, &e());
        assert_eq!((q.pop(), q.pop(), q.pop()), (Some(1), Some(2), None));
    }

    #[test]
    fn dfs_is_lifo() {
        let mut q = DfsQueue::default();
        q.push(1, &e());
        q.push(2, &e());
        assert_eq!((q.pop(), q.pop(), q.pop()), (Some(2), Some(1), None));
    }
}
