use std::collections::HashMap;

use super::{desugar, Phi, PlayerSet};
use crate::game::GameStructure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormulaId(pub u32);

/// A core-form formula whose children are arena ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Node {
    True,
    Prop(usize),
    Not(FormulaId),
    Or(FormulaId, FormulaId),
    EnforceNext(PlayerSet, FormulaId),
    EnforceUntil(PlayerSet, FormulaId, FormulaId),
    DespiteUntil(PlayerSet, FormulaId, FormulaId),
}

/// Hash-consed core formulas. Children always have smaller ids than their parents.
#[derive(Debug, Clone, Default)]
pub struct FormulaArena {
    nodes: Vec<Node>,
    depth: Vec<u32>,
    index: HashMap<Node, FormulaId>,
}

impl FormulaArena {
    pub fn new() -> Self {
        Self::default()
    }

    /// Desugar `phi` and intern every subformula.
    pub fn add(&mut self, phi: &Phi) -> FormulaId {
        self.add_core(&desugar(phi))
    }

    fn add_core(&mut self, phi: &Phi) -> FormulaId {
        let node = match phi {
            Phi::True => Node::True,
            Phi::Prop(p) => Node::Prop(*p),
            Phi::Not(a) => Node::Not(self.add_core(a)),
            Phi::Or(a, b) => Node::Or(self.add_core(a), self.add_core(b)),
            Phi::EnforceNext(c, a) => Node::EnforceNext(*c, self.add_core(a)),
            Phi::EnforceUntil(c, a, b) => Node::EnforceUntil(*c, self.add_core(a), self.add_core(b)),
            Phi::DespiteUntil(c, a, b) => Node::DespiteUntil(*c, self.add_core(a), self.add_core(b)),
            other => unreachable!("not in core form: {other:?}"),
        };
        self.intern(node)
    }

    pub fn intern(&mut self, node: Node) -> FormulaId {
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let depth = match node {
            Node::True | Node::Prop(_) => 0,
            Node::Not(a) => self.depth(a) + 1,
            Node::EnforceNext(_, a) => self.depth(a),
            Node::Or(a, b) | Node::EnforceUntil(_, a, b) | Node::DespiteUntil(_, a, b) => {
                self.depth(a).max(self.depth(b))
            }
        };
        let id = FormulaId(self.nodes.len() as u32);
        self.nodes.push(node);
        self.depth.push(depth);
        self.index.insert(node, id);
        id
    }

    pub fn node(&self, id: FormulaId) -> Node {
        self.nodes[id.0 as usize]
    }

    /// Maximum number of negations on a path from the root of `id` to a leaf.
    pub fn depth(&self, id: FormulaId) -> u32 {
        self.depth[id.0 as usize]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn to_phi(&self, id: FormulaId) -> Phi {
        let b = |x| Box::new(self.to_phi(x));
        match self.node(id) {
            Node::True => Phi::True,
            Node::Prop(p) => Phi::Prop(p),
            Node::Not(a) => Phi::Not(b(a)),
            Node::Or(x, y) => Phi::Or(b(x), b(y)),
            Node::EnforceNext(c, a) => Phi::EnforceNext(c, b(a)),
            Node::EnforceUntil(c, x, y) => Phi::EnforceUntil(c, b(x), b(y)),
            Node::DespiteUntil(c, x, y) => Phi::DespiteUntil(c, b(x), b(y)),
        }
    }

    pub fn render(&self, id: FormulaId, game: &dyn GameStructure) -> String {
        self.to_phi(id).display(game).to_string()
    }
}
