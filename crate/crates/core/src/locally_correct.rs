//! Augmentations and the construction of locally correct interleavings.
//!
//! An interleaving `I` is locally correct when, for every restriction `R` of
//! `I`, no `R`-extension does better than `I` itself:
//! `resdist_R = shift_R(I)`. Starting from the empty constraint, the pipeline
//! repeatedly adds a minimal set of bottleneck arrows (a minimal
//! augmentation) to the constraint until the residual distance reaches zero;
//! any zero-residual extension of the final constraint is locally correct.

use rand::seq::index;
use serde::{Deserialize, Serialize};

use crate::critical::{critical_points, realizing_pairs, residual_critical_values, PairKind};
use crate::error::{Error, Result};
use crate::height::Height;
use crate::interleaving::{AnchoredInterleaving, Arrow, Direction, PartialInterleaving, TreePair};
use crate::random;
use crate::solver::{decide, residual_distance};
use crate::tree::Point;

/// Whether `resdist_Q < bound`, using a single decision at the largest
/// `Q`-critical value below `bound`.
fn distance_below(pair: &TreePair, q: &PartialInterleaving, bound: &Height) -> Result<bool> {
    let values = residual_critical_values(pair, q);
    match values.iter().rev().find(|v| *v < bound) {
        Some(v) => Ok(decide(pair, q, v)?.is_some()),
        None => Ok(false),
    }
}

/// `Q` is a `P`-augmentation: its `P`-residual shift is at most `resdist_P`
/// and `resdist_Q < resdist_P`.
pub fn is_augmentation(pair: &TreePair, p: &PartialInterleaving, q: &PartialInterleaving) -> Result<bool> {
    let (distance, _) = residual_distance(pair, p)?;
    augments(pair, p, q, &distance)
}

fn augments(pair: &TreePair, p: &PartialInterleaving, q: &PartialInterleaving, distance: &Height) -> Result<bool> {
    if !q.extends(p, pair) {
        return Err(Error::Precondition("the candidate augmentation does not extend the constraints".into()));
    }
    q.validate(pair)?;
    if q.residual_shift(p, pair) > *distance {
        return Ok(false);
    }
    distance_below(pair, q, distance)
}

/// The constraint arrows together with the witness arrows whose residual
/// shift is exactly `delta_star`; on a shared source the higher target wins.
///
/// If that combination is not a valid partial interleaving, the witness's own
/// arrows are used at the constrained sources instead, which keeps the result
/// a restriction of the witness.
pub fn find_augmentation(
    pair: &TreePair,
    p: &PartialInterleaving,
    delta_star: &Height,
    witness: &AnchoredInterleaving,
) -> Result<PartialInterleaving> {
    if *delta_star == Height::zero() {
        return Err(Error::Precondition("augmentations need a positive residual distance".into()));
    }
    let bottleneck: Vec<(Direction, Arrow)> = witness
        .arrows()
        .filter(|(direction, a)| p.map(*direction).residual_shift_of(a, pair) == *delta_star)
        .map(|(direction, a)| (direction, a.clone()))
        .collect();
    let mut q = p.clone();
    for (direction, arrow) in &bottleneck {
        q.insert_keep_higher(pair, *direction, arrow.clone());
    }
    if q.validate(pair).is_ok() {
        return Ok(q);
    }
    let mut q = PartialInterleaving::empty();
    for (direction, a) in witness.arrows() {
        if p.map(direction).get(&a.src).is_some() {
            q.insert_keep_higher(pair, direction, a.clone());
        }
    }
    for (direction, arrow) in bottleneck {
        q.insert_keep_higher(pair, direction, arrow);
    }
    q.validate(pair)?;
    Ok(q)
}

/// `Q` without the arrow at `src`, falling back to the constraint arrow there.
fn without(pair: &TreePair, p: &PartialInterleaving, q: &PartialInterleaving, direction: Direction, src: &Point) -> PartialInterleaving {
    let mut next = q.clone();
    next.map_mut(direction).remove(src);
    if let Some(tgt) = p.map(direction).get(src) {
        next.insert_keep_higher(pair, direction, Arrow::new(src.clone(), tgt.clone()));
    }
    next
}

/// Drops arrows of `Q ∖ P` one at a time, in canonical order, while the rest
/// is still an augmentation, until a whole pass removes nothing.
///
/// When `P` is dominant the result is checked against the structure every
/// minimal augmentation has: it uses `P`, and every arrow of `Q ∖ P` has
/// shift exactly `resdist_P` and belongs to a realizing critical pair that
/// `Q ∖ P` uses. A failed check is reported as an internal error.
pub fn minimize_augmentation(pair: &TreePair, p: &PartialInterleaving, q: &PartialInterleaving) -> Result<PartialInterleaving> {
    let (distance, _) = residual_distance(pair, p)?;
    minimize_with_distance(pair, p, q, &distance)
}

fn minimize_with_distance(
    pair: &TreePair,
    p: &PartialInterleaving,
    q: &PartialInterleaving,
    distance: &Height,
) -> Result<PartialInterleaving> {
    if !augments(pair, p, q, distance)? {
        return Err(Error::Precondition("the input is not an augmentation".into()));
    }
    let mut q = q.clone();
    loop {
        let mut removed = false;
        let extra: Vec<(Direction, Arrow)> =
            q.relative_difference(p).arrows().map(|(d, a)| (d, a.clone())).collect();
        for (direction, arrow) in extra {
            let candidate = without(pair, p, &q, direction, &arrow.src);
            if candidate.validate(pair).is_ok() && augments(pair, p, &candidate, distance)? {
                q = candidate;
                removed = true;
            }
        }
        if !removed {
            break;
        }
    }
    if dominant_at(p, distance) {
        check_minimal_structure(pair, p, &q, distance)?;
    }
    Ok(q)
}

fn check_minimal_structure(pair: &TreePair, p: &PartialInterleaving, q: &PartialInterleaving, distance: &Height) -> Result<()> {
    if !q.uses(p) {
        return Err(Error::Internal("a minimal augmentation of a dominant constraint must use it".into()));
    }
    let bottleneck = q.relative_difference(p);
    if let Some((_, a)) = bottleneck.arrows().find(|(_, a)| a.shift() != *distance) {
        return Err(Error::Internal(format!("bottleneck arrow {a} does not have shift {distance}")));
    }
    let used = used_pair_arrows(pair, p, &bottleneck, distance)?;
    if let Some((_, a)) = bottleneck.arrows().find(|(d, a)| !used.iter().any(|(ud, ua)| ud == d && ua == *a)) {
        return Err(Error::Internal(format!("bottleneck arrow {a} belongs to no realizing critical pair")));
    }
    Ok(())
}

/// Arrows of `maps` that make up the realizing critical pairs it uses.
pub fn used_pair_arrows(
    pair: &TreePair,
    p: &PartialInterleaving,
    maps: &PartialInterleaving,
    delta: &Height,
) -> Result<Vec<(Direction, Arrow)>> {
    let mut used = Vec::new();
    for critical in realizing_pairs(pair, p, delta)? {
        match critical.kind {
            PairKind::Arrow { direction, src, tgt } => {
                if maps.map(direction).get(&src) == Some(&tgt) {
                    used.push((direction, Arrow::new(src, tgt)));
                }
            }
            PairKind::Zigzag { direction, lower, upper } => {
                let tree = pair.source(direction);
                let (low, high) = (tree.vertex_point(lower), tree.vertex_point(upper));
                let Some(y) = maps.map(direction).get(&low) else { continue };
                if *y.height() == tree.height(lower) + &critical.value
                    && maps.map(direction.reverse()).get(y) == Some(&high)
                {
                    used.push((direction, Arrow::new(low, y.clone())));
                    used.push((direction.reverse(), Arrow::new(y.clone(), high)));
                }
            }
        }
    }
    Ok(used)
}

fn dominant_at(p: &PartialInterleaving, distance: &Height) -> bool {
    p.arrows().all(|(_, a)| a.shift() > *distance)
}

/// Every constraint arrow has shift strictly greater than `resdist_P`.
pub fn is_dominant(pair: &TreePair, p: &PartialInterleaving) -> Result<bool> {
    let (distance, _) = residual_distance(pair, p)?;
    Ok(dominant_at(p, &distance))
}

/// The domains of the two constraint maps.
pub fn specified_points(p: &PartialInterleaving) -> (Vec<Point>, Vec<Point>) {
    (p.forward.domain().cloned().collect(), p.backward.domain().cloned().collect())
}

/// Whether every critical point of `p` that is not a vertex is specified.
fn specifies_nonvertex_critical(pair: &TreePair, p: &PartialInterleaving) -> bool {
    let (c1, c2) = critical_points(pair, p);
    [(Direction::Forward, c1), (Direction::Backward, c2)].into_iter().all(|(direction, points)| {
        let tree = pair.source(direction);
        points.iter().filter(|x| !tree.is_vertex(x)).all(|x| p.map(direction).get(x).is_some())
    })
}

fn specified_vertex_count(pair: &TreePair, p: &PartialInterleaving) -> usize {
    p.arrows().filter(|(direction, a)| pair.source(*direction).is_vertex(&a.src)).count()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub iteration: usize,
    /// Residual distance before this step.
    pub delta_star: String,
    /// Residual distance after adding the bottleneck.
    pub next_delta: String,
    pub added: Vec<String>,
    pub dominant: bool,
    pub specifies_critical_points: bool,
    pub new_vertex_specified: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub steps: Vec<TraceStep>,
}

/// Builds a locally correct interleaving by repeated minimal augmentation
/// from the empty constraint. Returns the final zero-residual witness and a
/// record of every step.
pub fn build_locally_correct(pair: &TreePair) -> Result<(AnchoredInterleaving, Trace)> {
    let bound = pair.first.finite_vertices().count() + pair.second.finite_vertices().count();
    let mut p = PartialInterleaving::empty();
    let (mut distance, mut witness) = residual_distance(pair, &p)?;
    let mut trace = Trace::default();
    while distance != Height::zero() {
        if trace.steps.len() == bound {
            return Err(Error::Internal(format!("no convergence within {bound} augmentations")));
        }
        let q = find_augmentation(pair, &p, &distance, &witness)?;
        let q = minimize_with_distance(pair, &p, &q, &distance)?;
        let (next, next_witness) = residual_distance(pair, &q)?;
        let step = TraceStep {
            iteration: trace.steps.len() + 1,
            delta_star: distance.to_string(),
            next_delta: next.to_string(),
            added: q.relative_difference(&p).arrows().map(|(d, a)| format!("{d} {a}")).collect(),
            dominant: dominant_at(&q, &next),
            specifies_critical_points: specifies_nonvertex_critical(pair, &q),
            new_vertex_specified: specified_vertex_count(pair, &q) > specified_vertex_count(pair, &p),
        };
        if next >= distance {
            return Err(Error::Internal(format!("residual distance did not drop below {distance}")));
        }
        if !(step.dominant && step.specifies_critical_points && step.new_vertex_specified) {
            return Err(Error::Internal(format!("augmentation step {} broke the pipeline invariants", step.iteration)));
        }
        trace.steps.push(step);
        p = q;
        distance = next;
        witness = next_witness;
    }
    Ok((witness, trace))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckMode {
    /// All subsets, regardless of their number.
    Exhaustive,
    /// All subsets when there are at most `2^10`, otherwise `samples` random
    /// subsets drawn with `seed`.
    Auto { samples: usize, seed: u64 },
}

/// A restriction `R` of the checked interleaving with `resdist_R < shift_R(I)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub restriction: PartialInterleaving,
    pub residual_distance: Height,
    pub residual_shift: Height,
}

pub const EXHAUSTIVE_LIMIT: usize = 10;

/// Searches restrictions of `interleaving` to subsets of its anchor arrows
/// for one on which a different extension does strictly better. Subsets are
/// tried with the fewest removed arrows first.
///
/// A reported counterexample is a genuine violation; finding none is only
/// evidence, since restrictions to other point sets are not examined.
pub fn check_locally_correct(
    pair: &TreePair,
    interleaving: &AnchoredInterleaving,
    mode: &CheckMode,
) -> Result<Option<Counterexample>> {
    if let Err(violation) = interleaving.verify_complete(pair) {
        return Err(Error::Precondition(format!("not a complete interleaving: {violation}")));
    }
    let arrows: Vec<(Direction, Arrow)> = interleaving.arrows().map(|(d, a)| (d, a.clone())).collect();
    let n = arrows.len();
    let exhaustive = matches!(mode, CheckMode::Exhaustive) || n <= EXHAUSTIVE_LIMIT;
    let restriction_of = |removed: &[usize]| {
        let mut r = PartialInterleaving::empty();
        for (i, (direction, arrow)) in arrows.iter().enumerate() {
            if !removed.contains(&i) {
                r.insert_keep_higher(pair, *direction, arrow.clone());
            }
        }
        r
    };
    if exhaustive {
        if n >= usize::BITS as usize - 1 {
            return Err(Error::InstanceTooLarge(format!("{n} anchor arrows are too many for exhaustive checking")));
        }
        for size in 0..=n {
            let mut removed: Vec<usize> = (0..size).collect();
            loop {
                if let Some(found) = refute(pair, interleaving, restriction_of(&removed))? {
                    return Ok(Some(found));
                }
                if !next_combination(&mut removed, n) {
                    break;
                }
            }
        }
    } else if let CheckMode::Auto { samples, seed } = mode {
        let mut rng = random::rng(*seed);
        for _ in 0..*samples {
            let size = rand::Rng::gen_range(&mut rng, 0..=n);
            let mut removed = index::sample(&mut rng, n, size).into_vec();
            removed.sort_unstable();
            if let Some(found) = refute(pair, interleaving, restriction_of(&removed))? {
                return Ok(Some(found));
            }
        }
    }
    Ok(None)
}

/// Advances `combo` (strictly increasing indices below `n`) to the next
/// combination of the same size in lexicographic order.
fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    for i in (0..k).rev() {
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn refute(pair: &TreePair, interleaving: &AnchoredInterleaving, r: PartialInterleaving) -> Result<Option<Counterexample>> {
    let shift = interleaving.residual_shift(pair, &r);
    if shift == Height::zero() || !distance_below(pair, &r, &shift)? {
        return Ok(None);
    }
    let (distance, _) = residual_distance(pair, &r)?;
    Ok(Some(Counterexample { restriction: r, residual_distance: distance, residual_shift: shift }))
}
