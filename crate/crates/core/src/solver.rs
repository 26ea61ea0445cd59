//! Deciding whether a constrained interleaving with small residual shift
//! exists, and computing residual and plain interleaving distances.
//!
//! # Reduction to a finite search
//!
//! Fix a constraint interleaving `P` and a bound `δ`. If some complete
//! interleaving `(α, β)` extends `P` with `P`-residual shift at most `δ`, so
//! does its lift `(α↑[δ], β↑[δ])`: lifting only raises targets, and an arrow
//! whose shift exceeds `δ` must lie in a fan of `P`, where the lift leaves it
//! alone. After lifting, each arrow `(x, y)` either has shift exactly `δ` or
//! targets a `P`-target `y` whose `P`-source lies below `x` with
//! `f(x) ≤ f(y)`. Both kinds of targets form a finite set per source.
//!
//! From the lifted maps, keep only their values on
//! `X = C1 ∪ β(C2)` and `Y = C2 ∪ α(C1)`, where `C1`, `C2` are the critical
//! points. Evaluating everything else through the highest anchor below
//! yields again a complete interleaving that extends `P` with residual shift
//! at most `δ`. So it is enough to search anchor assignments on `X` and `Y`
//! with targets from the finite candidate sets:
//!
//! 1. `α` on `C1`, bottom-up;
//! 2. `β` on `Y`, which is known once step 1 is done;
//! 3. `α` on `β(C2) ∖ C1`.
//!
//! Each step prunes with conditions every complete interleaving satisfies
//! (ancestor preservation, extension of `P`, the cross-condition), and every
//! full assignment is re-checked with [`AnchoredInterleaving::verify_complete`]
//! before it is returned. Candidates are tried in a fixed order (points at
//! height `f(x) + δ` in DFS order, then fan targets in constraint order), so
//! the first witness found is deterministic.

use std::cmp::Ordering;

use crate::critical::{critical_points, residual_critical_values};
use crate::error::{Error, Result};
use crate::height::Height;
use crate::interleaving::{check_delta, AnchoredInterleaving, Arrow, Direction, PartialInterleaving, TreePair};
use crate::tree::{MergeTree, Point};

/// A witness with residual shift at most `delta`, or `None` if there is none.
pub fn decide(pair: &TreePair, constraints: &PartialInterleaving, delta: &Height) -> Result<Option<AnchoredInterleaving>> {
    check_delta(delta)?;
    constraints.validate(pair)?;
    Ok(Search::new(pair, constraints, delta).run())
}

/// The least `δ` in `Δ[P]` for which [`decide`] succeeds, with its witness.
pub fn residual_distance(pair: &TreePair, constraints: &PartialInterleaving) -> Result<(Height, AnchoredInterleaving)> {
    constraints.validate(pair)?;
    let values = residual_critical_values(pair, constraints);
    let top = values.len() - 1;
    let mut witness = decide(pair, constraints, &values[top])?.ok_or_else(|| {
        Error::Internal(format!("no extension at the largest critical value {}", values[top]))
    })?;
    let (mut lo, mut hi) = (0, top);
    while lo < hi {
        let mid = (lo + hi) / 2;
        match decide(pair, constraints, &values[mid])? {
            Some(w) => {
                hi = mid;
                witness = w;
            }
            None => lo = mid + 1,
        }
    }
    Ok((values[hi].clone(), witness))
}

pub fn interleaving_distance(pair: &TreePair) -> Result<(Height, AnchoredInterleaving)> {
    residual_distance(pair, &PartialInterleaving::empty())
}

/// The extension of `constraints` that sends every critical point to the root.
pub fn root_extension(pair: &TreePair, constraints: &PartialInterleaving) -> Result<AnchoredInterleaving> {
    constraints.validate(pair)?;
    let (c1, c2) = critical_points(pair, constraints);
    let to_root = |points: Vec<Point>, target: &MergeTree| -> Vec<Arrow> {
        points.into_iter().map(|p| Arrow::new(p, target.root_point())).collect()
    };
    let anchors =
        PartialInterleaving::from_arrows(pair, to_root(c1, &pair.second), to_root(c2, &pair.first));
    AnchoredInterleaving::new(pair, anchors)
}

/// Candidate targets of `src` under a lifted extension of `constraints`:
/// points at height `f(src) + δ`, then fan targets, all at or above the
/// constrained target of `src` if there is one.
pub(crate) fn candidates(
    pair: &TreePair,
    constraints: &PartialInterleaving,
    delta: &Height,
    direction: Direction,
    src: &Point,
) -> Vec<Point> {
    let source = pair.source(direction);
    let target = pair.target(direction);
    let map = constraints.map(direction);
    let mut out = target.points_at_height(&(src.height() + delta));
    for a in map.arrows() {
        if src.height() <= a.tgt.height() && source.is_descendant(&a.src, src) && !out.contains(&a.tgt) {
            out.push(a.tgt.clone());
        }
    }
    if let Some(required) = map.get(src) {
        out.retain(|c| target.is_descendant(required, c));
    }
    out
}

struct Search<'a> {
    pair: &'a TreePair,
    constraints: &'a PartialInterleaving,
    delta: &'a Height,
    first: Vec<Point>,
    second: Vec<Point>,
}

fn sorted_bottom_up(tree: &MergeTree, mut points: Vec<Point>) -> Vec<Point> {
    points.sort_by(|a, b| tree.bottom_up_cmp(a, b));
    points.dedup();
    points
}

/// Whether `(src, tgt)` can join `assigned` without breaking ancestor
/// preservation.
fn preserves_ancestors(source: &MergeTree, target: &MergeTree, assigned: &[Arrow], src: &Point, tgt: &Point) -> bool {
    assigned.iter().all(|a| {
        (!source.is_descendant(&a.src, src) || target.is_descendant(&a.tgt, tgt))
            && (!source.is_descendant(src, &a.src) || target.is_descendant(tgt, &a.tgt))
    })
}

impl<'a> Search<'a> {
    fn new(pair: &'a TreePair, constraints: &'a PartialInterleaving, delta: &'a Height) -> Self {
        let (c1, c2) = critical_points(pair, constraints);
        Search {
            pair,
            constraints,
            delta,
            first: sorted_bottom_up(&pair.first, c1),
            second: sorted_bottom_up(&pair.second, c2),
        }
    }

    fn candidates(&self, direction: Direction, src: &Point) -> Vec<Point> {
        candidates(self.pair, self.constraints, self.delta, direction, src)
    }

    fn run(&self) -> Option<AnchoredInterleaving> {
        let mut alpha = Vec::with_capacity(self.first.len());
        self.assign_first(&mut alpha)
    }

    /// Step 1: `α` on the critical points of the first tree.
    fn assign_first(&self, alpha: &mut Vec<Arrow>) -> Option<AnchoredInterleaving> {
        let Some(src) = self.first.get(alpha.len()) else {
            let mut ys = self.second.clone();
            ys.extend(alpha.iter().map(|a| a.tgt.clone()).filter(|y| !y.is_root()));
            let ys = sorted_bottom_up(&self.pair.second, ys);
            return self.assign_second(alpha, &ys, &mut Vec::with_capacity(ys.len()));
        };
        for cand in self.candidates(Direction::Forward, src) {
            if preserves_ancestors(&self.pair.first, &self.pair.second, alpha, src, &cand) {
                alpha.push(Arrow::new(src.clone(), cand));
                if let Some(found) = self.assign_first(alpha) {
                    return Some(found);
                }
                alpha.pop();
            }
        }
        None
    }

    /// Step 2: `β` on `Y = C2 ∪ α(C1)`.
    fn assign_second(&self, alpha: &mut Vec<Arrow>, ys: &[Point], beta: &mut Vec<Arrow>) -> Option<AnchoredInterleaving> {
        let (t1, t2) = (&self.pair.first, &self.pair.second);
        let Some(y) = ys.get(beta.len()) else {
            let mut xs: Vec<Point> = beta
                .iter()
                .filter(|b| self.second.contains(&b.src))
                .map(|b| b.tgt.clone())
                .filter(|x| !x.is_root() && !self.first.contains(x))
                .collect();
            xs = sorted_bottom_up(t1, xs);
            return self.assign_extra(alpha, &xs, 0, beta);
        };
        for cand in self.candidates(Direction::Backward, y) {
            if !preserves_ancestors(t2, t1, beta, y, &cand) {
                continue;
            }
            let crosses = alpha.iter().all(|a| {
                (!t2.is_descendant(&a.tgt, y) || t1.is_descendant(&a.src, &cand))
                    && (!t1.is_descendant(&cand, &a.src) || t2.is_descendant(y, &a.tgt))
            });
            if crosses {
                beta.push(Arrow::new(y.clone(), cand));
                if let Some(found) = self.assign_second(alpha, ys, beta) {
                    return Some(found);
                }
                beta.pop();
            }
        }
        None
    }

    /// Step 3: `α` on `β(C2) ∖ C1`.
    fn assign_extra(&self, alpha: &mut Vec<Arrow>, xs: &[Point], done: usize, beta: &[Arrow]) -> Option<AnchoredInterleaving> {
        let (t1, t2) = (&self.pair.first, &self.pair.second);
        let Some(x) = xs.get(done) else {
            return self.finish(alpha, beta);
        };
        for cand in self.candidates(Direction::Forward, x) {
            if !preserves_ancestors(t1, t2, alpha, x, &cand) {
                continue;
            }
            let crosses = beta.iter().all(|b| {
                (!t1.is_descendant(&b.tgt, x) || t2.is_descendant(&b.src, &cand))
                    && (!t2.is_descendant(&cand, &b.src) || t1.is_descendant(x, &b.tgt))
            });
            if crosses {
                alpha.push(Arrow::new(x.clone(), cand));
                if let Some(found) = self.assign_extra(alpha, xs, done + 1, beta) {
                    return Some(found);
                }
                alpha.pop();
            }
        }
        None
    }

    fn finish(&self, alpha: &[Arrow], beta: &[Arrow]) -> Option<AnchoredInterleaving> {
        let anchors = PartialInterleaving::from_arrows(self.pair, alpha.to_vec(), beta.to_vec());
        let witness = AnchoredInterleaving::new(self.pair, anchors).ok()?;
        let accepted = witness.verify_complete(self.pair).is_ok()
            && witness.extends(self.pair, self.constraints)
            && witness.residual_shift(self.pair, self.constraints).cmp(self.delta) != Ordering::Greater;
        accepted.then_some(witness)
    }
}
