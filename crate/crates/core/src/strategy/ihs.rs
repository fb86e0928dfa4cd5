//! Instability heuristic: estimated distances to truth and to falsity.

use std::ops::Not;

use crate::atl::{FormulaArena, FormulaId, Node};
use crate::edg::{ConfigId, Edge};
use crate::expr::{BinaryOp, EvalContext, Expr, UnaryOp};
use crate::game::GameStructure;

/// `⟨t̂, f̂⟩`: how far a formula is from being true and from being false.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct BiDist {
    pub t: i64,
    pub f: i64,
}

impl BiDist {
    pub const NEUTRAL: BiDist = BiDist { t: 0, f: 0 };

    pub fn new(t: i64, f: i64) -> Self {
        BiDist { t, f }
    }

    /// `⊓`
    pub fn meet(self, other: BiDist) -> BiDist {
        BiDist::new(self.t.saturating_add(other.t), self.f.min(other.f))
    }

    /// `⊔`
    pub fn join(self, other: BiDist) -> BiDist {
        BiDist::new(self.t.min(other.t), self.f.saturating_add(other.f))
    }

    fn from_difference(v: i64) -> BiDist {
        if v > 0 {
            BiDist::new(v, 0)
        } else {
            BiDist::new(0, v)
        }
    }
}

impl Not for BiDist {
    type Output = BiDist;

    fn not(self) -> BiDist {
        BiDist::new(self.f, self.t)
    }
}

/// BiDist of a formula at a state.
pub fn bidist(game: &dyn GameStructure, arena: &FormulaArena, q: &[i64], phi: FormulaId) -> BiDist {
    match arena.node(phi) {
        Node::True => BiDist::NEUTRAL,
        Node::Prop(p) => game
            .proposition_expr(p)
            .map_or(BiDist::NEUTRAL, |e| bidist_expr(e, q)),
        Node::Not(a) => !bidist(game, arena, q, a),
        Node::Or(a, b) => bidist(game, arena, q, a).join(bidist(game, arena, q, b)),
        Node::EnforceNext(_, a) => bidist(game, arena, q, a),
        Node::EnforceUntil(_, a, b) | Node::DespiteUntil(_, a, b) => {
            bidist(game, arena, q, a).join(bidist(game, arena, q, b))
        }
    }
}

/// BiDist of a state condition. Comparisons measure the gap between their sides; `!`, `&&`
/// and `||` combine like their formula counterparts; anything else is neutral.
pub fn bidist_expr(e: &Expr, q: &[i64]) -> BiDist {
    let ctx = EvalContext::state(q);
    let diff = |l: &Expr, r: &Expr| -> Option<i64> { l.eval(&ctx).ok()?.checked_sub(r.eval(&ctx).ok()?) };
    match e {
        Expr::Unary(UnaryOp::Not, a) => !bidist_expr(a, q),
        Expr::Binary(BinaryOp::And, l, r) => bidist_expr(l, q).meet(bidist_expr(r, q)),
        Expr::Binary(BinaryOp::Or, l, r) => bidist_expr(l, q).join(bidist_expr(r, q)),
        Expr::Binary(op @ (BinaryOp::Lt | BinaryOp::Le), l, r) => match diff(l, r) {
            Some(0) if *op == BinaryOp::Lt => BiDist::new(1, 0),
            Some(v) => BiDist::from_difference(v),
            None => BiDist::NEUTRAL,
        },
        Expr::Binary(op @ (BinaryOp::Gt | BinaryOp::Ge), l, r) => match diff(r, l) {
            Some(0) if *op == BinaryOp::Gt => BiDist::new(1, 0),
            Some(v) => BiDist::from_difference(v),
            None => BiDist::NEUTRAL,
        },
        Expr::Binary(BinaryOp::Eq, l, r) => {
            let le = Expr::binary(BinaryOp::Le, (**l).clone(), (**r).clone());
            let ge = Expr::binary(BinaryOp::Ge, (**l).clone(), (**r).clone());
            bidist_expr(&le, q).meet(bidist_expr(&ge, q))
        }
        Expr::Binary(BinaryOp::Ne, l, r) => {
            let lt = Expr::binary(BinaryOp::Lt, (**l).clone(), (**r).clone());
            let gt = Expr::binary(BinaryOp::Gt, (**l).clone(), (**r).clone());
            bidist_expr(&lt, q).join(bidist_expr(&gt, q))
        }
        _ => BiDist::NEUTRAL,
    }
}

/// `dist_IHS(e)`, given the BiDist of each configuration.
pub fn ihs_dist(e: &Edge, bidist_of: impl Fn(ConfigId) -> BiDist) -> i64 {
    match e {
        Edge::Hyper { targets, .. } => {
            let d = targets
                .iter()
                .fold(BiDist::NEUTRAL, |acc, &t| acc.meet(bidist_of(t)));
            if d.t > 0 {
                d.t
            } else {
                d.f
            }
        }
        Edge::Negation { target, .. } => {
            let d = bidist_of(*target);
            if d.f < 0 {
                d.f
            } else {
                d.t
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x_lt(k: i64) -> Expr {
        Expr::binary(BinaryOp::Lt, Expr::Var(0), Expr::Const(k))
    }

    fn x_gt(k: i64) -> Expr {
        Expr::binary(BinaryOp::Gt, Expr::Var(0), Expr::Const(k))
    }

    #[test]
    fn less_than_far_from_true() {
        assert_eq!(bidist_expr(&x_lt(5), &[9]), BiDist::new(4, 0));
    }

    #[test]
    fn greater_than_already_true() {
        assert_eq!(bidist_expr(&x_gt(0), &[2]), BiDist::new(0, -2));
    }

    #[test]
    fn negation_swaps() {
        assert_eq!(bidist_expr(&Expr::not(x_lt(5)), &[9]), BiDist::new(0, 4));
    }

    #[test]
    fn strict_boundary_is_one_step_from_true() {
        assert_eq!(bidist_expr(&x_lt(5), &[5]), BiDist::new(1, 0));
        assert_eq!(bidist_expr(&x_gt(5), &[5]), BiDist::new(1, 0));
        let le = Expr::binary(BinaryOp::Le, Expr::Var(0), Expr::Const(5));
        assert_eq!(bidist_expr(&le, &[5]), BiDist::NEUTRAL);
    }

    #[test]
    fn equality_and_disequality() {
        let eq = Expr::binary(BinaryOp::Eq, Expr::Var(0), Expr::Const(5));
        assert_eq!(bidist_expr(&eq, &[5]).t, 0);
        assert_eq!(bidist_expr(&eq, &[9]).t, 4);
        assert_eq!(bidist_expr(&eq, &[1]).t, 4);
        let ne = Expr::binary(BinaryOp::Ne, Expr::Var(0), Expr::Const(5));
        assert_eq!(bidist_expr(&ne, &[5]).t, 1);
        assert_eq!(bidist_expr(&ne, &[9]).t, 0);
    }

    #[test]
    fn non_comparisons_are_neutral() {
        assert_eq!(bidist_expr(&Expr::Var(0), &[3]), BiDist::NEUTRAL);
        let div = Expr::binary(BinaryOp::Lt, Expr::binary(BinaryOp::Div, Expr::Const(1), Expr::Var(0)), Expr::Const(1));
        assert_eq!(bidist_expr(&div, &[0]), BiDist::NEUTRAL);
    }

    #[test]
    fn edge_distances() {
        let (a, b) = (ConfigId(1), ConfigId(2));
        let hyper = |t: Vec<ConfigId>| Edge::Hyper {
            source: ConfigId(0),
            targets: t,
            pmove: None,
        };
        let far = |c: ConfigId| if c == a { BiDist::new(4, 0) } else { BiDist::new(0, -2) };
        assert_eq!(ihs_dist(&hyper(vec![a]), far), 4);
        assert_eq!(ihs_dist(&hyper(vec![b]), far), -2);
        assert_eq!(ihs_dist(&hyper(vec![a, b]), far), 4);
        assert_eq!(ihs_dist(&hyper(vec![]), far), 0);
        let neg = Edge::Negation {
            source: ConfigId(0),
            target: b,
        };
        assert_eq!(ihs_dist(&neg, far), -2);
    }
}
