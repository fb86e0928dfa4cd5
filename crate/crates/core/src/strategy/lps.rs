//! Linear constraints extracted from formulas, and the LP distance of a state to them.

use crate::atl::{FormulaArena, FormulaId, Node};
use crate::expr::{BinaryOp, Expr, UnaryOp};
use crate::game::GameStructure;

use super::lp::{lp_solve, LinearConstraints};

/// Extraction stops growing the set beyond this many pairs.
pub const MAX_PAIRS: usize = 64;

/// `None` means nothing is known about the region; `Some(vec![])` means it is empty.
type Region = Option<Vec<LinearConstraints>>;

/// `𝓛_φ`: one pair `⟨C, b⟩` per disjunct of the linear part of `φ`.
///
/// Temporal operators are looked through to the condition they aim for (the operand of
/// `◯`, the goal of an until). Atoms that are not linear comparisons are dropped.
pub fn extract_constraints(
    game: &dyn GameStructure,
    arena: &FormulaArena,
    phi: FormulaId,
) -> Vec<LinearConstraints> {
    let n = game.variable_names().len();
    formula(game, arena, phi, true, n).unwrap_or_default()
}

fn formula(game: &dyn GameStructure, arena: &FormulaArena, phi: FormulaId, positive: bool, n: usize) -> Region {
    match arena.node(phi) {
        Node::True => Some(if positive { vec![LinearConstraints::default()] } else { vec![] }),
        Node::Prop(p) => game.proposition_expr(p).and_then(|e| condition(e, positive, n)),
        Node::Not(a) => formula(game, arena, a, !positive, n),
        Node::Or(a, b) => {
            let (a, b) = (formula(game, arena, a, positive, n), formula(game, arena, b, positive, n));
            if positive {
                or(a, b)
            } else {
                and(a, b)
            }
        }
        Node::EnforceNext(_, a) => formula(game, arena, a, positive, n),
        Node::EnforceUntil(_, _, b) | Node::DespiteUntil(_, _, b) => formula(game, arena, b, positive, n),
    }
}

fn or(a: Region, b: Region) -> Region {
    match (a, b) {
        (None, r) | (r, None) => r,
        (Some(mut a), Some(b)) => {
            a.extend(b);
            a.truncate(MAX_PAIRS);
            Some(a)
        }
    }
}

fn and(a: Region, b: Region) -> Region {
    match (a, b) {
        (None, r) | (r, None) => r,
        (Some(a), Some(b)) => {
            let mut out = Vec::new();
            'outer: for x in &a {
                for y in &b {
                    if out.len() == MAX_PAIRS {
                        break 'outer;
                    }
                    let mut z = x.clone();
                    z.c.extend(y.c.iter().cloned());
                    z.b.extend(y.b.iter().copied());
                    out.push(z);
                }
            }
            Some(out)
        }
    }
}

fn condition(e: &Expr, positive: bool, n: usize) -> Region {
    match e {
        Expr::Const(c) => Some(if (*c != 0) == positive { vec![LinearConstraints::default()] } else { vec![] }),
        Expr::Unary(UnaryOp::Not, a) => condition(a, !positive, n),
        Expr::Binary(op @ (BinaryOp::And | BinaryOp::Or), l, r) => {
            let (l, r) = (condition(l, positive, n), condition(r, positive, n));
            if (*op == BinaryOp::And) == positive {
                and(l, r)
            } else {
                or(l, r)
            }
        }
        Expr::Binary(op, l, r) if op.is_comparison() => {
            let (mut coef, k) = linear(l, n)?;
            let (rc, rk) = linear(r, n)?;
            coef.iter_mut().zip(&rc).for_each(|(a, b)| *a -= b);
            let k = k - rk;
            let op = if positive { *op } else { negate(*op) };
            // coef·s + k compared with 0
            let ge = |offset: f64| {
                LinearConstraints::new(vec![coef.clone()], vec![offset - k])
            };
            let le = |offset: f64| {
                LinearConstraints::new(vec![coef.iter().map(|a| -a).collect()], vec![offset + k])
            };
            Some(match op {
                BinaryOp::Ge => vec![ge(0.0)],
                BinaryOp::Gt => vec![ge(1.0)],
                BinaryOp::Le => vec![le(0.0)],
                BinaryOp::Lt => vec![le(1.0)],
                BinaryOp::Eq => and(Some(vec![ge(0.0)]), Some(vec![le(0.0)]))?,
                BinaryOp::Ne => vec![ge(1.0), le(1.0)],
                _ => unreachable!(),
            })
        }
        _ => None,
    }
}

fn negate(op: BinaryOp) -> BinaryOp {
    match op {
        BinaryOp::Lt => BinaryOp::Ge,
        BinaryOp::Ge => BinaryOp::Lt,
        BinaryOp::Le => BinaryOp::Gt,
        BinaryOp::Gt => BinaryOp::Le,
        BinaryOp::Eq => BinaryOp::Ne,
        BinaryOp::Ne => BinaryOp::Eq,
        other => other,
    }
}

/// `coef·s + k` when `e` is affine in the state (division by a constant counts as scaling).
fn linear(e: &Expr, n: usize) -> Option<(Vec<f64>, f64)> {
    match e {
        Expr::Const(c) => Some((vec![0.0; n], *c as f64)),
        Expr::Var(i) => {
            let mut coef = vec![0.0; n];
            coef[*i] = 1.0;
            Some((coef, 0.0))
        }
        Expr::Unary(UnaryOp::Neg, a) => {
            let (c, k) = linear(a, n)?;
            Some((c.into_iter().map(|x| -x).collect(), -k))
        }
        Expr::Binary(op @ (BinaryOp::Add | BinaryOp::Sub), l, r) => {
            let (mut c, k) = linear(l, n)?;
            let (rc, rk) = linear(r, n)?;
            let sign = if *op == BinaryOp::Add { 1.0 } else { -1.0 };
            c.iter_mut().zip(rc).for_each(|(a, b)| *a += sign * b);
            Some((c, k + sign * rk))
        }
        Expr::Binary(BinaryOp::Mul, l, r) => {
            let (lc, lk) = linear(l, n)?;
            let (rc, rk) = linear(r, n)?;
            let constant = |c: &[f64]| c.iter().all(|&x| x == 0.0);
            if constant(&lc) {
                Some((rc.into_iter().map(|x| x * lk).collect(), rk * lk))
            } else if constant(&rc) {
                Some((lc.into_iter().map(|x| x * rk).collect(), lk * rk))
            } else {
                None
            }
        }
        Expr::Binary(BinaryOp::Div, l, r) => {
            let (lc, lk) = linear(l, n)?;
            let (rc, rk) = linear(r, n)?;
            if rc.iter().any(|&x| x != 0.0) || rk == 0.0 {
                return None;
            }
            Some((lc.into_iter().map(|x| x / rk).collect(), lk / rk))
        }
        _ => None,
    }
}

/// `dist_LPS`: the smallest 1-norm distance from `q` to a state satisfying one of the pairs;
/// `+∞` when there are none or all are infeasible.
pub fn lps_dist(q: &[i64], constraints: &[LinearConstraints], bounds: &[(f64, f64)]) -> f64 {
    let q: Vec<f64> = q.iter().map(|&x| x as f64).collect();
    constraints
        .iter()
        .filter_map(|lc| lp_solve(lc, &q, bounds))
        .map(|s| s.value)
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atl::Phi;
    use crate::game::ExplicitGame;
    use crate::game::GameStructure;
    use crate::lcgs::compile;

    fn grid() -> crate::CompiledGame {
        compile(
            "template t\n\
               x : [0..20] init 7; x' = x;\n\
               y : [0..20] init 1; y' = y;\n\
               label wedge = -x + y >= 1 && x/2 + y >= 7;\n\
               label a = x * y > 3;\n\
               label b = min(x, y) > 1;\n\
               label xy = x >= 1 || y >= 2;\n\
               label eq = x == 3;\n\
               label ne = x != 3;\n\
               [wait] 1;\n\
             endtemplate\n\
             player p = t;\n",
        )
        .unwrap()
    }

    fn extract(g: &crate::CompiledGame, phi: &Phi) -> Vec<LinearConstraints> {
        let mut arena = FormulaArena::new();
        let f = arena.add(phi);
        extract_constraints(g, &arena, f)
    }

    fn prop(g: &crate::CompiledGame, name: &str) -> Phi {
        Phi::Prop(g.proposition_index(name).unwrap())
    }

    #[test]
    fn wedge_constraints() {
        let g = grid();
        let l = extract(&g, &prop(&g, "p.wedge"));
        assert_eq!(
            l,
            vec![LinearConstraints::new(vec![vec![-1.0, 1.0], vec![0.5, 1.0]], vec![1.0, 7.0])]
        );
        assert_eq!(lps_dist(&[7, 1], &l, &[]), 7.0);
    }

    #[test]
    fn non_linear_atoms_give_nothing() {
        let g = grid();
        assert!(extract(&g, &Phi::or(prop(&g, "p.a"), prop(&g, "p.b"))).is_empty());
        assert_eq!(lps_dist(&[1, 1], &[], &[]), f64::INFINITY);
    }

    #[test]
    fn disjunction_splits() {
        let g = grid();
        assert_eq!(extract(&g, &prop(&g, "p.xy")).len(), 2);
        // the negation is a conjunction: x ≤ 0 ∧ y ≤ 1
        let neg = extract(&g, &Phi::not(prop(&g, "p.xy")));
        assert_eq!(neg.len(), 1);
        assert_eq!(neg[0].rows(), 2);
    }

    #[test]
    fn equality_is_two_rows_and_disequality_two_pairs() {
        let g = grid();
        let eq = extract(&g, &prop(&g, "p.eq"));
        assert_eq!((eq.len(), eq[0].rows()), (1, 2));
        assert_eq!(extract(&g, &prop(&g, "p.ne")).len(), 2);
        assert_eq!(extract(&g, &Phi::not(prop(&g, "p.ne"))), eq);
    }

    #[test]
    fn temporal_operators_expose_their_goal() {
        let g = grid();
        let goal = extract(&g, &prop(&g, "p.wedge"));
        let a = crate::atl::PlayerSet::all(1);
        let f = Phi::EnforceEventually(a, Box::new(prop(&g, "p.wedge")));
        assert_eq!(extract(&g, &f), goal);
        let x = Phi::EnforceNext(a, Box::new(prop(&g, "p.wedge")));
        assert_eq!(extract(&g, &x), goal);
    }

    #[test]
    fn feasible_state_is_at_distance_zero() {
        let g = grid();
        let l = extract(&g, &prop(&g, "p.wedge"));
        assert_eq!(lps_dist(&[4, 9], &l, &[]), 0.0);
    }

    #[test]
    fn true_and_false() {
        let g = ExplicitGame::new(vec!["a".into()], vec![], vec![vec![1]], vec![vec![0]], vec![vec![]], 0);
        let mut arena = FormulaArena::new();
        let t = arena.add(&Phi::True);
        let f = arena.add(&Phi::False);
        assert_eq!(extract_constraints(&g, &arena, t), vec![LinearConstraints::default()]);
        assert!(extract_constraints(&g, &arena, f).is_empty());
    }
}
