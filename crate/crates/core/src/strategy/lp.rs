//! Linear constraints over state vectors and the 1-norm distance to their feasible region.

use std::panic::{catch_unwind, AssertUnwindSafe};

use minilp::{ComparisonOp, OptimizationDirection, Problem};

/// A pair `⟨C, b⟩` standing for `C s ≥ b`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LinearConstraints {
    pub c: Vec<Vec<f64>>,
    pub b: Vec<f64>,
}

impl LinearConstraints {
    pub fn new(c: Vec<Vec<f64>>, b: Vec<f64>) -> Self {
        assert_eq!(c.len(), b.len());
        LinearConstraints { c, b }
    }

    pub fn rows(&self) -> usize {
        self.b.len()
    }

    pub fn push(&mut self, row: Vec<f64>, rhs: f64) {
        self.c.push(row);
        self.b.push(rhs);
    }

    /// Whether `s` satisfies every row, up to `eps`.
    pub fn satisfied_by(&self, s: &[f64], eps: f64) -> bool {
        self.c.iter().zip(&self.b).all(|(row, &b)| {
            row.iter().zip(s).map(|(a, x)| a * x).sum::<f64>() >= b - eps
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub value: f64,
    pub point: Vec<f64>,
}

const EPS: f64 = 1e-9;

/// `min ||s − q||₁` subject to `C s ≥ b` and `lo_i ≤ s_i ≤ hi_i`.
///
/// `bounds` may be empty for an unbounded `s`. Among the 1-norm optima the point closest to
/// `q` in the ∞-norm is returned. `None` when infeasible or when the solver fails.
pub fn lp_solve(lc: &LinearConstraints, q: &[f64], bounds: &[(f64, f64)]) -> Option<LpSolution> {
    let n = q.len();
    debug_assert!(lc.c.iter().all(|row| row.len() == n));
    debug_assert!(bounds.is_empty() || bounds.len() == n);
    if lc.rows() == 0 && bounds.iter().zip(q).all(|(&(lo, hi), &x)| lo <= x && x <= hi) {
        return Some(LpSolution {
            value: 0.0,
            point: q.to_vec(),
        });
    }
    let inside = |i: usize| bounds.get(i).is_none_or(|&(lo, hi)| lo <= q[i] && q[i] <= hi);
    if (0..n).all(inside) && lc.satisfied_by(q, 0.0) {
        return Some(LpSolution {
            value: 0.0,
            point: q.to_vec(),
        });
    }
    // variables without coefficients stay at q, or at the nearest bound
    let active: Vec<usize> = (0..n).filter(|&i| !inside(i) || lc.c.iter().any(|row| row[i] != 0.0)).collect();
    let reduced = LinearConstraints {
        c: lc.c.iter().map(|row| active.iter().map(|&i| row[i]).collect()).collect(),
        b: lc.b.clone(),
    };
    let rq: Vec<f64> = active.iter().map(|&i| q[i]).collect();
    let rb: Vec<(f64, f64)> = if bounds.is_empty() {
        Vec::new()
    } else {
        active.iter().map(|&i| bounds[i]).collect()
    };
    let solved = catch_unwind(AssertUnwindSafe(|| two_stage(&reduced, &rq, &rb)));
    let sol = match solved {
        Ok(result) => result?,
        Err(_) => {
            log::warn!("linear program solver failed; treating the distance as infinite");
            return None;
        }
    };
    let mut point = q.to_vec();
    for (k, &i) in active.iter().enumerate() {
        point[i] = sol.point[k];
    }
    Some(LpSolution {
        value: sol.value,
        point,
    })
}

fn two_stage(lc: &LinearConstraints, q: &[f64], bounds: &[(f64, f64)]) -> Option<LpSolution> {
    let n = q.len();
    let bound = |i: usize| bounds.get(i).copied().unwrap_or((f64::NEG_INFINITY, f64::INFINITY));

    let build = |l1_cap: Option<f64>| {
        let mut p = Problem::new(OptimizationDirection::Minimize);
        let s: Vec<_> = (0..n).map(|i| p.add_var(0.0, bound(i))).collect();
        let x: Vec<_> = (0..n)
            .map(|_| p.add_var(if l1_cap.is_none() { 1.0 } else { 0.0 }, (0.0, f64::INFINITY)))
            .collect();
        for (row, &b) in lc.c.iter().zip(&lc.b) {
            let terms: Vec<_> = s.iter().zip(row).filter(|(_, a)| **a != 0.0).map(|(&v, &a)| (v, a)).collect();
            p.add_constraint(terms, ComparisonOp::Ge, b);
        }
        for i in 0..n {
            p.add_constraint([(s[i], 1.0), (x[i], -1.0)], ComparisonOp::Le, q[i]);
            p.add_constraint([(s[i], 1.0), (x[i], 1.0)], ComparisonOp::Ge, q[i]);
        }
        if let Some(cap) = l1_cap {
            let t = p.add_var(1.0, (0.0, f64::INFINITY));
            p.add_constraint(x.iter().map(|&v| (v, 1.0)), ComparisonOp::Le, cap);
            for &xi in &x {
                p.add_constraint([(xi, 1.0), (t, -1.0)], ComparisonOp::Le, 0.0);
            }
        }
        (p, s, x)
    };

    let (first, _, x) = build(None);
    let sol = first.solve().ok()?;
    let value: f64 = x.iter().map(|&v| sol[v]).sum();
    let (second, s, _) = build(Some(value + 1e-7 * (1.0 + value)));
    let point: Vec<f64> = match second.solve() {
        Ok(tie) => s.iter().map(|&v| tie[v]).collect(),
        Err(_) => {
            let (first, s, _) = build(None);
            let sol = first.solve().ok()?;
            s.iter().map(|&v| sol[v]).collect()
        }
    };
    let point: Vec<f64> = point.into_iter().map(clean).collect();
    if !lc.satisfied_by(&point, 1e-6) {
        return None;
    }
    Some(LpSolution {
        value: clean(value),
        point,
    })
}

fn clean(v: f64) -> f64 {
    let r = v.round();
    if (v - r).abs() < EPS {
        r
    } else {
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wedge() -> LinearConstraints {
        LinearConstraints::new(vec![vec![-1.0, 1.0], vec![0.5, 1.0]], vec![1.0, 7.0])
    }

    #[test]
    fn wedge_distance_and_point() {
        let sol = lp_solve(&wedge(), &[7.0, 1.0], &[]).unwrap();
        assert!((sol.value - 7.0).abs() < 1e-6);
        assert!((sol.point[0] - 4.0).abs() < 1e-6);
        assert!((sol.point[1] - 5.0).abs() < 1e-6);
    }

    #[test]
    fn feasible_point_has_distance_zero() {
        let sol = lp_solve(&wedge(), &[4.0, 9.0], &[]).unwrap();
        assert!(sol.value.abs() < 1e-9);
        assert_eq!(sol.point, vec![4.0, 9.0]);
    }

    #[test]
    fn no_rows_is_free() {
        let sol = lp_solve(&LinearConstraints::default(), &[3.0, -2.0], &[]).unwrap();
        assert_eq!(sol.value, 0.0);
        assert_eq!(sol.point, vec![3.0, -2.0]);
    }

    #[test]
    fn contradictory_rows_are_infeasible() {
        let lc = LinearConstraints::new(vec![vec![1.0], vec![-1.0]], vec![1.0, 0.0]);
        assert_eq!(lp_solve(&lc, &[0.0], &[(0.0, 10.0)]), None);
    }

    #[test]
    fn bounds_restrict_the_region() {
        // x ≥ 5 but x ∈ [0, 3]
        let lc = LinearConstraints::new(vec![vec![1.0]], vec![5.0]);
        assert_eq!(lp_solve(&lc, &[0.0], &[(0.0, 3.0)]), None);
        let sol = lp_solve(&lc, &[0.0], &[(0.0, 9.0)]).unwrap();
        assert!((sol.value - 5.0).abs() < 1e-9);
    }

    #[test]
    fn out_of_bounds_start_is_pulled_in() {
        let sol = lp_solve(&LinearConstraints::default(), &[12.0], &[(0.0, 10.0)]).unwrap();
        assert!((sol.value - 2.0).abs() < 1e-9);
    }

    #[test]
    fn unconstrained_coordinates_stay_put() {
        let lc = LinearConstraints::new(vec![vec![0.0, 1.0, 0.0]], vec![4.0]);
        let sol = lp_solve(&lc, &[7.0, 1.0, 12.0], &[(0.0, 20.0), (0.0, 20.0), (0.0, 10.0)]).unwrap();
        assert!((sol.value - 5.0).abs() < 1e-9);
        assert_eq!(sol.point, vec![7.0, 4.0, 10.0]);
    }
}
