//! Brute-force reference for [`crate::solver::decide`].
//!
//! Enumerates anchor assignments variable by variable, with variables taken
//! in node-id order and a pairwise check against every earlier variable, and
//! accepts the first assignment whose round trips succeed at every vertex.
//! It shares no search code with the solver; only the definition of the
//! candidate sets is the same.

use crate::critical::critical_points;
use crate::error::{Error, Result};
use crate::height::Height;
use crate::interleaving::{check_delta, Direction, PartialInterleaving, TreePair};
use crate::tree::{MergeTree, Point};

pub const MAX_LEAVES: usize = 6;
pub const MAX_CONSTRAINT_ARROWS: usize = 4;

/// Feasibility of a complete extension of `constraints` with residual shift
/// at most `delta`, by exhaustive search.
pub fn oracle_decide(pair: &TreePair, constraints: &PartialInterleaving, delta: &Height) -> Result<bool> {
    check_delta(delta)?;
    constraints.validate(pair)?;
    if pair.first.leaf_count() > MAX_LEAVES || pair.second.leaf_count() > MAX_LEAVES {
        return Err(Error::InstanceTooLarge(format!("the oracle accepts at most {MAX_LEAVES} leaves per tree")));
    }
    if constraints.len() > MAX_CONSTRAINT_ARROWS {
        return Err(Error::InstanceTooLarge(format!(
            "the oracle accepts at most {MAX_CONSTRAINT_ARROWS} constraint arrows"
        )));
    }
    let (c1, c2) = critical_points(pair, constraints);
    let by_id = |mut v: Vec<Point>| {
        v.sort();
        v
    };
    let mut vars: Vec<(Direction, Point)> = by_id(c1).into_iter().map(|p| (Direction::Forward, p)).collect();
    let base_first = vars.len();
    vars.extend(by_id(c2).into_iter().map(|p| (Direction::Backward, p)));
    let oracle = Oracle { pair, constraints, delta, base: vars.len(), base_first };
    Ok(oracle.search(&mut vars, &mut Vec::new()))
}

struct Oracle<'a> {
    pair: &'a TreePair,
    constraints: &'a PartialInterleaving,
    delta: &'a Height,
    base: usize,
    base_first: usize,
}

impl Oracle<'_> {
    fn trees(&self, direction: Direction) -> (&MergeTree, &MergeTree) {
        match direction {
            Direction::Forward => (&self.pair.first, &self.pair.second),
            Direction::Backward => (&self.pair.second, &self.pair.first),
        }
    }

    fn candidates(&self, direction: Direction, src: &Point) -> Vec<Point> {
        let (source, target) = self.trees(direction);
        let level = src.height() + self.delta;
        let mut out: Vec<Point> = Vec::new();
        for v in target.finite_vertices() {
            if let Ok(p) = target.point(v, level.clone()) {
                out.push(p);
            }
        }
        for a in self.constraints.map(direction).arrows() {
            let in_fan = source.is_descendant(&a.src, src) && src.height() <= a.tgt.height();
            if in_fan && !out.contains(&a.tgt) {
                out.push(a.tgt.clone());
            }
        }
        match self.constraints.map(direction).get(src) {
            Some(required) => out.into_iter().filter(|c| target.is_descendant(required, c)).collect(),
            None => out,
        }
    }

    /// Conditions between two assigned variables that every complete
    /// interleaving satisfies.
    fn compatible(&self, a: &(Direction, Point), ta: &Point, b: &(Direction, Point), tb: &Point) -> bool {
        if a.0 == b.0 {
            let (source, target) = self.trees(a.0);
            let up = !source.is_descendant(&a.1, &b.1) || target.is_descendant(ta, tb);
            let down = !source.is_descendant(&b.1, &a.1) || target.is_descendant(tb, ta);
            return up && down;
        }
        let ((x, fx), (y, gy)) = if a.0 == Direction::Forward { ((&a.1, ta), (&b.1, tb)) } else { ((&b.1, tb), (&a.1, ta)) };
        let (t1, t2) = (&self.pair.first, &self.pair.second);
        (!t2.is_descendant(fx, y) || t1.is_descendant(x, gy)) && (!t1.is_descendant(gy, x) || t2.is_descendant(y, fx))
    }

    fn search(&self, vars: &mut Vec<(Direction, Point)>, values: &mut Vec<Point>) -> bool {
        if values.len() == vars.len() {
            let extra = self.extra_anchors(vars, values);
            if extra.is_empty() {
                return self.accept(vars, values);
            }
            let before = vars.len();
            vars.extend(extra);
            let found = self.search(vars, values);
            vars.truncate(before);
            return found;
        }
        let i = values.len();
        let var = vars[i].clone();
        for cand in self.candidates(var.0, &var.1) {
            if (0..i).all(|j| self.compatible(&var, &cand, &vars[j], &values[j])) {
                values.push(cand);
                if self.search(vars, values) {
                    return true;
                }
                values.pop();
            }
        }
        false
    }

    /// Images of critical points that are not yet anchored in the reverse
    /// direction.
    fn extra_anchors(&self, vars: &[(Direction, Point)], values: &[Point]) -> Vec<(Direction, Point)> {
        let mut extra: Vec<(Direction, Point)> = Vec::new();
        for (i, value) in values.iter().enumerate().take(self.base) {
            let direction = if i < self.base_first { Direction::Backward } else { Direction::Forward };
            let wanted = (direction, value.clone());
            if !value.is_root() && !vars.contains(&wanted) && !extra.contains(&wanted) {
                extra.push(wanted);
            }
        }
        extra.sort();
        extra
    }

    fn eval(&self, vars: &[(Direction, Point)], values: &[Point], direction: Direction, x: &Point) -> Point {
        let (_, target) = self.trees(direction);
        if x.is_root() {
            return target.root_point();
        }
        let mut best: Option<(&Point, &Point)> = None;
        for (var, value) in vars.iter().zip(values) {
            if var.0 == direction
                && var.1.carrier() == x.carrier()
                && var.1.height() <= x.height()
                && best.is_none_or(|(src, _)| src.height() < var.1.height())
            {
                best = Some((&var.1, value));
            }
        }
        let (_, tgt) = best.expect("every vertex is anchored");
        let level = if x.height() > tgt.height() { x.height().clone() } else { tgt.height().clone() };
        target.ancestor_at(tgt, &level).expect("level is above the anchor target")
    }

    fn accept(&self, vars: &[(Direction, Point)], values: &[Point]) -> bool {
        for direction in Direction::BOTH {
            let (source, _) = self.trees(direction);
            for v in source.finite_vertices() {
                let x = source.vertex_point(v);
                let there = self.eval(vars, values, direction, &x);
                let back = self.eval(vars, values, direction.reverse(), &there);
                if !source.is_descendant(&x, &back) {
                    return false;
                }
            }
        }
        vars.iter().zip(values).all(|((direction, src), tgt)| {
            let (source, _) = self.trees(*direction);
            let in_fan = self
                .constraints
                .map(*direction)
                .arrows()
                .iter()
                .any(|a| a.tgt == *tgt && src.height() <= a.tgt.height() && source.is_descendant(&a.src, src));
            in_fan || tgt.height().checked_sub(src.height()).is_ok_and(|s| s <= *self.delta)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn oracle_on_fixtures() {
        let empty = PartialInterleaving::empty();
        let h = Height::from_int;
        assert!(oracle_decide(&fixtures::fix_a(), &empty, &h(4)).unwrap());
        assert!(!oracle_decide(&fixtures::fix_a(), &empty, &h(3)).unwrap());
        assert!(oracle_decide(&fixtures::fix_b_vs_a(), &empty, &h(3)).unwrap());
        assert!(!oracle_decide(&fixtures::fix_b_vs_a(), &empty, &h(0)).unwrap());
        assert!(oracle_decide(&fixtures::fix_c(), &empty, &h(2)).unwrap());
        assert!(!oracle_decide(&fixtures::fix_c(), &empty, &h(1)).unwrap());
        let t = fixtures::fix_c().first;
        assert!(oracle_decide(&TreePair::new(t.clone(), t), &empty, &h(0)).unwrap());
    }
}
