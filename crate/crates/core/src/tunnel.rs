//! Tunnel filling: decide whether a standard or extended standard complex is
//! the mod `UV` reduction of a chain complex over `R_2` with the same basis.
//!
//! Over `R_2` the only visible `d^2` terms are those with a unit exponent.
//! Each such term has exactly one contributing two-arrow path, one arrow of
//! which is horizontal (for `U^a V`) or vertical (for `U V^b`). The term can
//! only be cancelled by a single diagonal arrow composed with the horizontal
//! (resp. vertical) arrow at the far end of the path; that arrow is forced.
//! Forced arrows are added in waves until `d^2 = 0` or some term cannot be
//! cancelled.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::algebra::{Arrow, ArrowTag, BasedComplex, GenId, Monomial, RingLevel};
use crate::error::{Error, Result};

/// A visible `d^2` term: `<d^2 source, monomial target> = 1` with a unit exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cause {
    pub source: GenId,
    pub monomial: Monomial,
    pub target: GenId,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseTag {
    HorizontalFirst,
    HorizontalSecond,
    VerticalFirst,
    VerticalSecond,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseTag::HorizontalFirst => "horizontal-first",
            CaseTag::HorizontalSecond => "horizontal-second",
            CaseTag::VerticalFirst => "vertical-first",
            CaseTag::VerticalSecond => "vertical-second",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObstructionReason {
    NoAdjacentArrow,
    WrongDirection,
    InsufficientLength,
}

impl fmt::Display for ObstructionReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ObstructionReason::NoAdjacentArrow => "no-adjacent-arrow",
            ObstructionReason::WrongDirection => "wrong-direction",
            ObstructionReason::InsufficientLength => "insufficient-length",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ForcedArrowEvent {
    pub cause: Cause,
    pub case: CaseTag,
    pub added: Arrow,
    /// Wave in which the arrow was added, starting at 1.
    pub stage: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Obstruction {
    pub cause: Cause,
    pub reason: ObstructionReason,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Response {
    Forced(ForcedArrowEvent),
    Blocked(Obstruction),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecisionOutcome {
    PartialRealization {
        complex: BasedComplex,
        added: Vec<ForcedArrowEvent>,
    },
    NotRealizable {
        obstructions: Vec<Obstruction>,
        partial_progress: BasedComplex,
        added: Vec<ForcedArrowEvent>,
    },
}

impl DecisionOutcome {
    pub fn is_realizable(&self) -> bool {
        matches!(self, DecisionOutcome::PartialRealization { .. })
    }

    pub fn added(&self) -> &[ForcedArrowEvent] {
        match self {
            DecisionOutcome::PartialRealization { added, .. } => added,
            DecisionOutcome::NotRealizable { added, .. } => added,
        }
    }

    pub fn added_arrows(&self) -> BTreeSet<Arrow> {
        self.added().iter().map(|e| e.added).collect()
    }

    /// The realization on success, the last consistent augmentation otherwise.
    pub fn complex(&self) -> &BasedComplex {
        match self {
            DecisionOutcome::PartialRealization { complex, .. } => complex,
            DecisionOutcome::NotRealizable { partial_progress, .. } => partial_progress,
        }
    }

    pub fn obstructions(&self) -> &[Obstruction] {
        match self {
            DecisionOutcome::PartialRealization { .. } => &[],
            DecisionOutcome::NotRealizable { obstructions, .. } => obstructions,
        }
    }
}

/// A cause together with the two-arrow paths that produce it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PendingCause {
    pub cause: Cause,
    pub paths: Vec<(Arrow, Arrow)>,
}

/// Order in which the causes of one wave are processed.
pub enum Schedule<'a> {
    /// Every visible cause of a wave at once, then recompute `d^2`.
    Staged,
    /// One cause at a time; the callback picks an index into the pending list.
    OneAtATime(&'a mut dyn FnMut(usize) -> usize),
}

/// Upper bound `n^2 + n` on forced arrows for a chain on `2n + 1` generators.
pub fn arrow_budget(generator_count: usize) -> usize {
    let n = generator_count.saturating_sub(1) / 2;
    n * n + n
}

/// Canonical processing order: causes sorted by `(source, target, monomial)`.
pub fn canonicalize_schedule(pending: &[Cause]) -> Vec<Cause> {
    let mut order = pending.to_vec();
    order.sort_by_key(|c| (c.source, c.target, c.monomial));
    order.dedup();
    order
}

/// Every visible `d^2` term over `R_2` with odd path count.
pub fn pending_causes(complex: &BasedComplex) -> Result<Vec<PendingCause>> {
    if complex.ring() != RingLevel::R2 {
        return Err(Error::InvalidInput(format!("tunnel filling works over R2, got {}", complex.ring())));
    }
    let out = complex.out_lists();
    let mut pending = Vec::new();
    for x in complex.ids() {
        let mut terms: BTreeMap<(GenId, Monomial), Vec<(Arrow, Arrow)>> = BTreeMap::new();
        for &(m1, z) in &out[x.0] {
            for &(m2, y) in &out[z.0] {
                let m = m1 * m2;
                terms.entry((y, m)).or_default().push((Arrow::new(x, m1, z), Arrow::new(z, m2, y)));
            }
        }
        for ((y, m), paths) in terms {
            if paths.len() % 2 == 0 || complex.ring().kills(m) {
                continue;
            }
            if m.min_exp() == 0 {
                return Err(Error::Internal {
                    stage: "tunnel",
                    message: format!("d^2 {} has a term {} {} without a diagonal part", complex.name(x), m, complex.name(y)),
                });
            }
            pending.push(PendingCause { cause: Cause { source: x, monomial: m, target: y }, paths });
        }
    }
    Ok(pending)
}

fn horizontal_at(complex: &BasedComplex, g: GenId) -> Option<Arrow> {
    complex
        .arrows()
        .find(|a| (a.source == g || a.target == g) && a.monomial.is_horizontal())
        .copied()
}

fn vertical_at(complex: &BasedComplex, g: GenId) -> Option<Arrow> {
    complex
        .arrows()
        .find(|a| (a.source == g || a.target == g) && a.monomial.is_vertical())
        .copied()
}

/// The arrow forced by `cause` arising from `path`, or why none can be added.
pub fn forced_response(complex: &BasedComplex, cause: Cause, path: (Arrow, Arrow)) -> Result<Response> {
    let (first, second) = path;
    let Monomial { u: a, v: b } = cause.monomial;
    if cause.monomial.min_exp() != 1 {
        return Err(Error::InvalidInput(format!("cause {} has no unit exponent", cause.monomial)));
    }
    if first.source != cause.source
        || second.target != cause.target
        || first.target != second.source
        || first.monomial * second.monomial != cause.monomial
    {
        return Err(Error::InvalidInput("path does not produce the cause".into()));
    }

    let blocked = |reason| Ok(Response::Blocked(Obstruction { cause, reason }));
    let forced = |case, added| Ok(Response::Forced(ForcedArrowEvent { cause, case, added, stage: 0 }));

    if b == 1 && (first.monomial.is_horizontal() || second.monomial.is_horizontal()) {
        if first.monomial.is_horizontal() {
            // Needs a horizontal arrow x_j' -> U^l x_j with l < a.
            let Some(h) = horizontal_at(complex, cause.target) else {
                return blocked(ObstructionReason::NoAdjacentArrow);
            };
            if h.target != cause.target {
                return blocked(ObstructionReason::WrongDirection);
            }
            if h.monomial.u >= a {
                return blocked(ObstructionReason::InsufficientLength);
            }
            let m = Monomial::new(a - h.monomial.u, 1);
            forced(CaseTag::HorizontalFirst, Arrow::new(cause.source, m, h.source))
        } else {
            // Needs a horizontal arrow x_i -> U^l x_i' with l < a.
            let Some(h) = horizontal_at(complex, cause.source) else {
                return blocked(ObstructionReason::NoAdjacentArrow);
            };
            if h.source != cause.source {
                return blocked(ObstructionReason::WrongDirection);
            }
            if h.monomial.u >= a {
                return blocked(ObstructionReason::InsufficientLength);
            }
            let m = Monomial::new(a - h.monomial.u, 1);
            forced(CaseTag::HorizontalSecond, Arrow::new(h.target, m, cause.target))
        }
    } else if a == 1 && (first.monomial.is_vertical() || second.monomial.is_vertical()) {
        if first.monomial.is_vertical() {
            let Some(h) = vertical_at(complex, cause.target) else {
                return blocked(ObstructionReason::NoAdjacentArrow);
            };
            if h.target != cause.target {
                return blocked(ObstructionReason::WrongDirection);
            }
            if h.monomial.v >= b {
                return blocked(ObstructionReason::InsufficientLength);
            }
            let m = Monomial::new(1, b - h.monomial.v);
            forced(CaseTag::VerticalFirst, Arrow::new(cause.source, m, h.source))
        } else {
            let Some(h) = vertical_at(complex, cause.source) else {
                return blocked(ObstructionReason::NoAdjacentArrow);
            };
            if h.source != cause.source {
                return blocked(ObstructionReason::WrongDirection);
            }
            if h.monomial.v >= b {
                return blocked(ObstructionReason::InsufficientLength);
            }
            let m = Monomial::new(1, b - h.monomial.v);
            forced(CaseTag::VerticalSecond, Arrow::new(h.target, m, cause.target))
        }
    } else {
        Err(Error::InvalidInput("path has no non-diagonal arrow of the required kind".into()))
    }
}

/// Inputs must look like (extended) standard complexes: no diagonal arrows,
/// at most one horizontal and one vertical arrow at every generator.
fn validate_input(complex: &BasedComplex) -> Result<()> {
    if complex.ring() != RingLevel::R1 {
        return Err(Error::InvalidInput(format!("expected a complex over R1, got {}", complex.ring())));
    }
    let mut horizontal = vec![0usize; complex.generator_count()];
    let mut vertical = vec![0usize; complex.generator_count()];
    for a in complex.arrows() {
        let counter = if a.monomial.is_horizontal() {
            &mut horizontal
        } else if a.monomial.is_vertical() {
            &mut vertical
        } else {
            return Err(Error::InvalidInput(format!("arrow {} is not horizontal or vertical", complex.describe(a))));
        };
        counter[a.source.0] += 1;
        counter[a.target.0] += 1;
    }
    if horizontal.iter().chain(&vertical).any(|&k| k > 1) {
        return Err(Error::InvalidInput("a generator carries two arrows of the same direction".into()));
    }
    if !complex.check_degree().passed() {
        return Err(Error::InvalidInput("input violates the degree equation".into()));
    }
    Ok(())
}

/// Decide partial realizability with the default wave schedule.
pub fn partial_realize(complex: &BasedComplex) -> Result<DecisionOutcome> {
    partial_realize_with(complex, Schedule::Staged)
}

pub fn partial_realize_with(complex: &BasedComplex, mut schedule: Schedule<'_>) -> Result<DecisionOutcome> {
    validate_input(complex)?;
    let budget = arrow_budget(complex.generator_count());
    let mut current = complex.lift(RingLevel::R2)?;
    let mut added: Vec<ForcedArrowEvent> = Vec::new();
    let mut stage = 0;

    loop {
        let pending = pending_causes(&current)?;
        if pending.is_empty() {
            return Ok(DecisionOutcome::PartialRealization { complex: current, added });
        }
        stage += 1;

        let chosen: Vec<&PendingCause> = match &mut schedule {
            Schedule::Staged => {
                let order = canonicalize_schedule(&pending.iter().map(|p| p.cause).collect::<Vec<_>>());
                order
                    .iter()
                    .map(|c| pending.iter().find(|p| p.cause == *c).expect("cause came from pending"))
                    .collect()
            }
            Schedule::OneAtATime(pick) => vec![&pending[pick(pending.len()) % pending.len()]],
        };

        let mut wave: BTreeMap<Arrow, ForcedArrowEvent> = BTreeMap::new();
        let mut obstructions = Vec::new();
        for p in chosen {
            for &path in &p.paths {
                if path.0.monomial.is_diagonal() && path.1.monomial.is_diagonal() {
                    continue;
                }
                match forced_response(&current, p.cause, path)? {
                    Response::Forced(mut event) => {
                        event.stage = stage;
                        wave.entry(event.added).or_insert(event);
                    }
                    Response::Blocked(o) => obstructions.push(o),
                }
            }
        }
        if !obstructions.is_empty() {
            obstructions.sort();
            obstructions.dedup();
            return Ok(DecisionOutcome::NotRealizable { obstructions, partial_progress: current, added });
        }

        for (arrow, event) in wave {
            if arrow.monomial.min_exp() != 1 {
                return Err(Error::Internal { stage: "tunnel", message: format!("forced arrow {} is not unit-diagonal", current.describe(&arrow)) });
            }
            if !current.toggle_arrow(arrow, Some(ArrowTag::Added)) {
                return Err(Error::Internal { stage: "tunnel", message: format!("forced arrow {} was already present", current.describe(&arrow)) });
            }
            added.push(event);
        }
        if added.len() > budget {
            return Err(Error::ArrowBudgetExceeded { added: added.len(), bound: budget });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::standard::{build_extended, build_standard, generator_name, ExtendedSignSequence, SignSequence};

    fn seq(v: &[i64]) -> SignSequence {
        SignSequence::new(v.to_vec()).unwrap()
    }

    fn x(c: &BasedComplex, i: i64) -> GenId {
        c.lookup(&generator_name(i)).unwrap()
    }

    #[test]
    fn worked_example_obstructed() {
        let c = build_standard(&seq(&[-1, 1, 2, -1, 1, 2]));
        let out = partial_realize(&c).unwrap();
        assert!(!out.is_realizable());
        let expected: BTreeSet<Arrow> = [
            Arrow::new(x(&c, 3), Monomial::UV, x(&c, 0)),
            Arrow::new(x(&c, 6), Monomial::UV, x(&c, 3)),
        ]
        .into_iter()
        .collect();
        assert_eq!(out.added_arrows(), expected);
        assert_eq!(
            out.obstructions(),
            &[Obstruction {
                cause: Cause { source: x(&c, 6), monomial: Monomial::new(3, 1), target: x(&c, 2) },
                reason: ObstructionReason::NoAdjacentArrow,
            }]
        );
    }

    #[test]
    fn worked_example_realizable() {
        let c = build_standard(&seq(&[-1, 1, 2, -1, 1, 3]));
        let out = partial_realize(&c).unwrap();
        assert!(out.is_realizable());
        let expected: BTreeSet<Arrow> = [
            Arrow::new(x(&c, 3), Monomial::UV, x(&c, 0)),
            Arrow::new(x(&c, 6), Monomial::new(1, 2), x(&c, 3)),
        ]
        .into_iter()
        .collect();
        assert_eq!(out.added_arrows(), expected);
        assert!(out.complex().is_chain_complex());
        assert_eq!(out.complex().reduce(RingLevel::R1).unwrap().untagged(), c);
    }

    #[test]
    fn c11_is_blocked_at_uv() {
        let c = build_standard(&seq(&[1, 1]));
        let out = partial_realize(&c).unwrap();
        assert_eq!(out.added().len(), 0);
        assert_eq!(
            out.obstructions(),
            &[Obstruction {
                cause: Cause { source: x(&c, 2), monomial: Monomial::UV, target: x(&c, 0) },
                reason: ObstructionReason::NoAdjacentArrow,
            }]
        );
    }

    #[test]
    fn forced_response_cases() {
        let c = build_standard(&seq(&[-1, 1, 2, -1, 1, 2])).lift(RingLevel::R2).unwrap();
        let cause = Cause { source: x(&c, 3), monomial: Monomial::new(2, 1), target: x(&c, 1) };
        let path = (
            Arrow::new(x(&c, 3), Monomial::new(2, 0), x(&c, 2)),
            Arrow::new(x(&c, 2), Monomial::new(0, 1), x(&c, 1)),
        );
        match forced_response(&c, cause, path).unwrap() {
            Response::Forced(e) => {
                assert_eq!(e.case, CaseTag::HorizontalFirst);
                assert_eq!(e.added, Arrow::new(x(&c, 3), Monomial::UV, x(&c, 0)));
            }
            other => panic!("unexpected {other:?}"),
        }

        let c = build_standard(&seq(&[-1, 1, 2, -1, 1, 3])).lift(RingLevel::R2).unwrap();
        let cause = Cause { source: x(&c, 6), monomial: Monomial::new(1, 3), target: x(&c, 4) };
        let path = (
            Arrow::new(x(&c, 6), Monomial::new(0, 3), x(&c, 5)),
            Arrow::new(x(&c, 5), Monomial::new(1, 0), x(&c, 4)),
        );
        match forced_response(&c, cause, path).unwrap() {
            Response::Forced(e) => {
                assert_eq!(e.case, CaseTag::VerticalFirst);
                assert_eq!(e.added, Arrow::new(x(&c, 6), Monomial::new(1, 2), x(&c, 3)));
            }
            other => panic!("unexpected {other:?}"),
        }

        let c = build_standard(&seq(&[1, 1])).lift(RingLevel::R2).unwrap();
        let cause = Cause { source: x(&c, 2), monomial: Monomial::UV, target: x(&c, 0) };
        let path = (
            Arrow::new(x(&c, 2), Monomial::new(0, 1), x(&c, 1)),
            Arrow::new(x(&c, 1), Monomial::new(1, 0), x(&c, 0)),
        );
        assert!(matches!(
            forced_response(&c, cause, path).unwrap(),
            Response::Blocked(Obstruction { reason: ObstructionReason::NoAdjacentArrow, .. })
        ));
    }

    #[test]
    fn no_adjacent_arrow_at_the_end() {
        // d x2 = V x1, d x1 = U^2 x0; x2 carries no horizontal arrow.
        let out = partial_realize(&build_standard(&seq(&[2, 1]))).unwrap();
        assert_eq!(out.obstructions()[0].reason, ObstructionReason::NoAdjacentArrow);
    }

    #[test]
    fn malformed_cause_is_rejected() {
        let c = build_standard(&seq(&[1, 1])).lift(RingLevel::R2).unwrap();
        let cause = Cause { source: x(&c, 2), monomial: Monomial::new(2, 2), target: x(&c, 0) };
        let path = (
            Arrow::new(x(&c, 2), Monomial::new(0, 1), x(&c, 1)),
            Arrow::new(x(&c, 1), Monomial::new(1, 0), x(&c, 0)),
        );
        assert!(forced_response(&c, cause, path).is_err());
    }

    #[test]
    fn rejects_non_standard_input() {
        let mut c = build_standard(&seq(&[2, 2])).lift(RingLevel::R2).unwrap();
        assert!(partial_realize(&c).is_err());
        c = c.reduce(RingLevel::R1).unwrap();
        let (x0, x2) = (x(&c, 0), x(&c, 2));
        c.add_arrow(x2, Monomial::new(3, 0), x0);
        assert!(partial_realize(&c).is_err());
    }

    #[test]
    fn extended_complex_is_accepted() {
        let e = build_extended(&ExtendedSignSequence::new(3, seq(&[2, 2]), -3).unwrap());
        let out = partial_realize(&e).unwrap();
        assert!(out.is_realizable());
    }

    #[test]
    fn canonical_schedule() {
        assert!(canonicalize_schedule(&[]).is_empty());
        let a = Cause { source: GenId(2), monomial: Monomial::UV, target: GenId(0) };
        let b = Cause { source: GenId(1), monomial: Monomial::UV, target: GenId(3) };
        assert_eq!(canonicalize_schedule(&[a, b, a]), vec![b, a]);
    }

    #[test]
    fn budget_formula() {
        assert_eq!(arrow_budget(3), 2);
        assert_eq!(arrow_budget(7), 12);
        assert_eq!(arrow_budget(9), 20);
    }
}
