//! Exhaustive search over diagonal augmentations, independent of the
//! tunnel-filling argument.
//!
//! Over `R_2` only arrows with a unit exponent matter, and the monomial of
//! any arrow or `d^2` term between two generators is fixed by their
//! gradings. So a complex is a 0/1 adjacency matrix `A`, and `d^2 = 0`
//! iff `A^2` vanishes on the pairs whose composite monomial survives.
//! Subsets of candidates are walked in Gray-code order, updating `A^2`
//! incrementally.

use std::collections::BTreeSet;

use crate::algebra::{Arrow, BasedComplex, RingLevel};
use crate::error::{Error, Result};
use crate::standard::candidate_monomial;

pub const DEFAULT_CAP: usize = 20;

/// Diagonal arrows with a unit exponent that the degree equation allows
/// and that are not already present.
pub fn candidate_arrows(complex: &BasedComplex) -> Vec<Arrow> {
    let mut out = Vec::new();
    for x in complex.ids() {
        for y in complex.ids() {
            if x == y {
                continue;
            }
            if let Ok(Some(m)) = candidate_monomial(complex, x, y) {
                let arrow = Arrow::new(x, m, y);
                if m.min_exp() == 1 && !complex.contains(&arrow) {
                    out.push(arrow);
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleOutcome {
    pub candidates: Vec<Arrow>,
    /// Each witness is a bitmask over `candidates`.
    pub witnesses: Vec<u64>,
}

impl OracleOutcome {
    pub fn realizable(&self) -> bool {
        !self.witnesses.is_empty()
    }

    pub fn witness_arrows(&self, mask: u64) -> BTreeSet<Arrow> {
        self.candidates
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, a)| *a)
            .collect()
    }

    /// Bitmask of `arrows` over the candidates, or `None` if one is not a candidate.
    pub fn mask_of(&self, arrows: &BTreeSet<Arrow>) -> Option<u64> {
        arrows.iter().try_fold(0u64, |acc, a| {
            self.candidates.iter().position(|c| c == a).map(|i| acc | 1 << i)
        })
    }

    /// Witnesses that do not contain every arrow of `arrows`.
    pub fn witnesses_missing(&self, arrows: &BTreeSet<Arrow>) -> Vec<u64> {
        match self.mask_of(arrows) {
            Some(m) => self.witnesses.iter().copied().filter(|w| w & m != m).collect(),
            None => self.witnesses.clone(),
        }
    }
}

/// All subsets of [`candidate_arrows`] making `d^2 = 0` over `R_2`.
pub fn oracle_decide(complex: &BasedComplex, cap: usize) -> Result<OracleOutcome> {
    let complex = complex.lift(RingLevel::R2)?;
    let n = complex.generator_count();
    if n > 64 {
        return Err(Error::InvalidInput("oracle supports at most 64 generators".into()));
    }
    let candidates = candidate_arrows(&complex);
    let k = candidates.len();
    if k > cap.min(63) {
        return Err(Error::OracleTooLarge { candidates: k, cap });
    }

    // visible[i] has bit j when a d^2 term from i to j would survive in R2.
    let mut visible = vec![0u64; n];
    for i in complex.ids() {
        for j in complex.ids() {
            let (gi, gj) = (complex.grading(i), complex.grading(j));
            let (du, dv) = (gj.gr_u - gi.gr_u + 2, gj.gr_v - gi.gr_v + 2);
            if du >= 0 && dv >= 0 && du % 2 == 0 && dv % 2 == 0 && (du / 2).min(dv / 2) < 2 {
                visible[i.0] |= 1 << j.0;
            }
        }
    }

    let mut adj = vec![0u64; n];
    for a in complex.arrows() {
        adj[a.source.0] |= 1 << a.target.0;
    }
    let mut sq = vec![0u64; n];
    for i in 0..n {
        let mut row = 0;
        for z in 0..n {
            if adj[i] >> z & 1 == 1 {
                row ^= adj[z];
            }
        }
        sq[i] = row & visible[i];
    }

    let edges: Vec<(usize, usize)> = candidates.iter().map(|a| (a.source.0, a.target.0)).collect();
    let mut witnesses = Vec::new();
    let mut mask = 0u64;
    if sq.iter().all(|&r| r == 0) {
        witnesses.push(0);
    }
    for step in 1u64..(1u64 << k) {
        let bit = step.trailing_zeros() as usize;
        let (s, t) = edges[bit];
        // (A + E_st)^2 = A^2 + A E_st + E_st A, since E_st^2 = 0 for s != t.
        for i in 0..n {
            if adj[i] >> s & 1 == 1 {
                sq[i] ^= (1 << t) & visible[i];
            }
        }
        sq[s] ^= adj[t] & visible[s];
        adj[s] ^= 1 << t;
        mask ^= 1 << bit;
        if sq.iter().all(|&r| r == 0) {
            witnesses.push(mask);
        }
    }
    witnesses.sort_unstable();
    Ok(OracleOutcome { candidates, witnesses })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::standard::{build_standard, generator_name, SignSequence};
    use crate::{Monomial, tunnel::partial_realize};

    fn std(v: &[i64]) -> BasedComplex {
        build_standard(&SignSequence::new(v.to_vec()).unwrap())
    }

    #[test]
    fn c11_has_no_candidates() {
        let c = std(&[1, 1]);
        assert!(candidate_arrows(&c).is_empty());
        assert!(!oracle_decide(&c, DEFAULT_CAP).unwrap().realizable());
    }

    #[test]
    fn worked_example_candidates() {
        let c = std(&[-1, 1, 2, -1, 1, 2]);
        let x = |i| c.lookup(&generator_name(i)).unwrap();
        let cands = candidate_arrows(&c);
        assert!(cands.contains(&Arrow::new(x(3), Monomial::UV, x(0))));
        assert!(cands.contains(&Arrow::new(x(6), Monomial::UV, x(3))));
        assert!(!oracle_decide(&c, DEFAULT_CAP).unwrap().realizable());
    }

    #[test]
    fn every_witness_contains_the_forced_arrows() {
        let c = std(&[-1, 1, 2, -1, 1, 3]);
        let out = oracle_decide(&c, DEFAULT_CAP).unwrap();
        assert!(out.realizable());
        let forced = partial_realize(&c).unwrap().added_arrows();
        assert_eq!(forced.len(), 2);
        assert!(out.witnesses_missing(&forced).is_empty());
        for &w in &out.witnesses {
            let mut aug = c.lift(RingLevel::R2).unwrap();
            for a in out.witness_arrows(w) {
                aug.toggle_arrow(a, None);
            }
            assert!(aug.is_chain_complex());
        }
    }

    #[test]
    fn alternating_has_empty_witness() {
        let out = oracle_decide(&std(&[2, -2]), DEFAULT_CAP).unwrap();
        assert_eq!(out.witnesses.first(), Some(&0));
    }

    #[test]
    fn cap_is_enforced() {
        let c = std(&[-1, 1, 2, -1, 1, 3]);
        assert!(matches!(oracle_decide(&c, 0), Err(Error::OracleTooLarge { .. })));
    }
}
