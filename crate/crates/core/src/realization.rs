//! From a partially realizable sequence to a chain complex over `F2[U,V]`
//! with the correct homology: extend the zig-zag at both ends, double the
//! extended partial realization, then glue the two free ends into one
//! generator `z`.

use std::collections::BTreeMap;

use crate::algebra::{Arrow, ArrowTag, BasedComplex, Bigrading, GenId, Monomial, RingLevel};
use crate::error::{Error, Result};
use crate::homology::check_correct_homology;
use crate::standard::{build_extended, build_standard, ExtendedSignSequence, SignSequence};
use crate::tunnel::{partial_realize, DecisionOutcome};

const MAX_RETRIES: usize = 8;

/// Lengths `N1`, `N2` of the two extension arrows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExtensionParams {
    pub n1: u32,
    pub n2: u32,
}

impl ExtensionParams {
    pub fn minimum(seq: &SignSequence) -> u32 {
        seq.max_abs() as u32 + 1
    }

    pub fn defaults(seq: &SignSequence) -> Self {
        let n = Self::minimum(seq);
        ExtensionParams { n1: n, n2: n }
    }

    pub fn validate(&self, seq: &SignSequence) -> Result<()> {
        let min = Self::minimum(seq);
        if self.n1 < min || self.n2 < min {
            return Err(Error::InvalidInput(format!(
                "extension lengths ({}, {}) must be at least {min}",
                self.n1, self.n2
            )));
        }
        Ok(())
    }
}

/// `s = (sum of signs) / 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GlueOffset(pub i64);

impl GlueOffset {
    pub fn of(seq: &SignSequence) -> Self {
        GlueOffset(seq.sign_sum() / 2)
    }
}

/// Two tagged copies of an extended partial realization over `F2[U,V]`.
#[derive(Clone, Debug)]
pub struct DoubledComplex {
    pub complex: BasedComplex,
    /// `x[k]` is `x_{k-1}`.
    pub x: Vec<GenId>,
    /// `y[k]` is `y_{k-1}`.
    pub y: Vec<GenId>,
}

/// Partial realization of `C(N1 | seq | -N2)` over `R_2`.
pub fn extend_and_realize(seq: &SignSequence, params: ExtensionParams) -> Result<BasedComplex> {
    params.validate(seq)?;
    if !partial_realize(&build_standard(seq))?.is_realizable() {
        return Err(Error::NotRealizable);
    }
    let ext = ExtendedSignSequence::new(params.n1 as i64, seq.clone(), -(params.n2 as i64))?;
    match partial_realize(&build_extended(&ext))? {
        DecisionOutcome::PartialRealization { complex, .. } => Ok(complex),
        DecisionOutcome::NotRealizable { .. } => Err(Error::ExtensionTooShort { n1: params.n1, n2: params.n2 }),
    }
}

fn y_name(x: &str) -> String {
    match x.strip_prefix('x') {
        Some(rest) => format!("y{rest}"),
        None => format!("{x}'"),
    }
}

/// Black and red copies of `f2`, blue arrows `y_i -> UV x_i`, and green
/// arrows `x_i -> U^{a-1} V^{b-1} y_j` for every term `U^a V^b x_j` of
/// `d^2 x_i` computed over `F2[U,V]`.
pub fn double(f2: &BasedComplex) -> Result<DoubledComplex> {
    if f2.ring() != RingLevel::R2 || !f2.is_chain_complex() {
        return Err(Error::InvalidInput("doubling needs a chain complex over R2".into()));
    }
    let lifted = f2.lift(RingLevel::Infinity)?;
    let mut out = BasedComplex::new(RingLevel::Infinity);
    let x: Vec<GenId> = f2
        .generators()
        .iter()
        .map(|g| out.add_generator(g.name.clone(), g.gr))
        .collect::<Result<_>>()?;
    let y: Vec<GenId> = f2
        .generators()
        .iter()
        .map(|g| out.add_generator(y_name(&g.name), g.gr - Bigrading::new(1, 1)))
        .collect::<Result<_>>()?;

    for (a, tag) in f2.tagged_arrows() {
        let black = if tag == Some(ArrowTag::Added) { ArrowTag::Added } else { ArrowTag::Black };
        out.toggle_arrow(Arrow::new(x[a.source.0], a.monomial, x[a.target.0]), Some(black));
        out.toggle_arrow(Arrow::new(y[a.source.0], a.monomial, y[a.target.0]), Some(ArrowTag::Red));
    }
    for i in 0..x.len() {
        out.toggle_arrow(Arrow::new(y[i], Monomial::UV, x[i]), Some(ArrowTag::Blue));
    }
    for (src, terms) in lifted.differential_square() {
        for (dst, m) in terms.iter() {
            if m.min_exp() < 2 {
                return Err(Error::InvalidInput(format!(
                    "d^2 {} has the term {} {} over R2",
                    f2.name(src),
                    m,
                    f2.name(dst)
                )));
            }
            let g = Monomial::new(m.u - 1, m.v - 1);
            out.toggle_arrow(Arrow::new(x[src.0], g, y[dst.0]), Some(ArrowTag::Green));
        }
    }
    if !out.is_chain_complex() || !out.check_degree().passed() {
        return Err(Error::Internal { stage: "double", message: "doubled complex is not a graded chain complex".into() });
    }
    Ok(DoubledComplex { complex: out, x, y })
}

/// Smallest value `>= lower` congruent to `parity` mod 2.
fn round_up(lower: i64, parity: i64) -> i64 {
    if (lower - parity).rem_euclid(2) == 0 {
        lower
    } else {
        lower + 1
    }
}

/// Identify `x_{-1}` and `x_{2n+1}` in a single generator `z`.
///
/// `y_{-1}` keeps its `gr_U` and moves into the row of `z`; `y_{2n+1}` keeps
/// its `gr_V` and moves into the column of `z`. Every other arrow into `z`
/// must be diagonal. `gr(z)` is the smallest grading meeting all these
/// requirements, and every monomial is recomputed from the new gradings.
/// The caller checks the homology of the result.
pub fn glue(doubled: &DoubledComplex, seq: &SignSequence) -> Result<BasedComplex> {
    let src = &doubled.complex;
    let len = seq.entries().len();
    if doubled.x.len() != len + 3 {
        return Err(Error::InvalidInput("doubled complex does not match the sequence".into()));
    }
    let (x_lo, x_hi) = (doubled.x[0], doubled.x[len + 2]);
    let (y_lo, y_hi) = (doubled.y[0], doubled.y[len + 2]);
    let (y_0, y_top) = (doubled.y[1], doubled.y[len + 1]);
    let into_z = |g: GenId| g == x_lo || g == x_hi;
    for a in src.arrows() {
        if into_z(a.source) {
            return Err(Error::Placement(format!("{} has outgoing arrows", src.name(a.source))));
        }
    }

    let mut zu = src.grading(y_lo).gr_u + 1;
    let mut zv = src.grading(y_hi).gr_v + 1;
    for a in src.arrows() {
        let g = src.grading(a.source);
        if into_z(a.target) && a.source != y_lo && a.source != y_hi {
            zu = zu.max(g.gr_u + 1);
            zv = zv.max(g.gr_v + 1);
        } else if a.target == y_lo {
            zv = zv.max(g.gr_v);
        } else if a.target == y_hi {
            zu = zu.max(g.gr_u);
        }
    }
    let z_gr = Bigrading::new(
        round_up(zu, src.grading(x_lo).gr_u.rem_euclid(2)),
        round_up(zv, src.grading(x_lo).gr_v.rem_euclid(2)),
    );

    let mut new_gr: BTreeMap<GenId, Bigrading> = src.ids().map(|g| (g, src.grading(g))).collect();
    new_gr.insert(y_lo, Bigrading::new(src.grading(y_0).gr_u - 1, z_gr.gr_v + 1));
    new_gr.insert(y_hi, Bigrading::new(z_gr.gr_u + 1, src.grading(y_top).gr_v - 1));

    let mut out = BasedComplex::new(RingLevel::Infinity);
    let mut id_map: BTreeMap<GenId, GenId> = BTreeMap::new();
    for &g in doubled.x[1..=len + 1].iter().chain(&doubled.y) {
        id_map.insert(g, out.add_generator(src.name(g), new_gr[&g])?);
    }
    let z = out.add_generator("z", z_gr)?;
    id_map.insert(x_lo, z);
    id_map.insert(x_hi, z);

    for (a, tag) in src.tagged_arrows() {
        let (s, t) = (id_map[&a.source], id_map[&a.target]);
        let m = out.grading(s).monomial_to(out.grading(t)).ok_or_else(|| {
            Error::Placement(format!("no legal monomial for {} after moving z", src.describe(a)))
        })?;
        let shape = |m: Monomial| (m.is_horizontal(), m.is_vertical(), m.is_diagonal());
        let legal = if t != z {
            shape(m) == shape(a.monomial)
        } else if a.source == y_lo {
            m.is_horizontal()
        } else if a.source == y_hi {
            m.is_vertical()
        } else {
            m.is_diagonal()
        };
        if !legal {
            return Err(Error::Placement(format!("{} would become {}", src.describe(a), m)));
        }
        // A generator with arrows to both ends gets two equal arrows to z,
        // which cancel; path counts change in pairs, so d^2 stays zero.
        out.toggle_arrow(Arrow::new(s, m, t), tag);
    }
    if !out.check_degree().passed() || !out.is_chain_complex() {
        return Err(Error::Internal { stage: "glue", message: "glued complex is not a graded chain complex".into() });
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct Realization {
    pub complex: BasedComplex,
    pub params: ExtensionParams,
    pub offset: GlueOffset,
    pub partial: BasedComplex,
    pub doubled: DoubledComplex,
}

#[derive(Clone, Debug)]
pub enum RealizeOutcome {
    Realized(Box<Realization>),
    NotRealizable(DecisionOutcome),
}

impl RealizeOutcome {
    pub fn realization(&self) -> Option<&Realization> {
        match self {
            RealizeOutcome::Realized(r) => Some(r),
            RealizeOutcome::NotRealizable(_) => None,
        }
    }
}

pub fn realize(seq: &SignSequence) -> Result<RealizeOutcome> {
    realize_with(seq, ExtensionParams::defaults(seq))
}

/// Full pipeline. Extensions that are too short to be partially realizable,
/// placement failures and glued complexes without the correct homology are
/// retried with both extensions lengthened by `|s| + 1`.
pub fn realize_with(seq: &SignSequence, params: ExtensionParams) -> Result<RealizeOutcome> {
    params.validate(seq)?;
    let decision = partial_realize(&build_standard(seq))?;
    if !decision.is_realizable() {
        return Ok(RealizeOutcome::NotRealizable(decision));
    }
    let offset = GlueOffset::of(seq);
    let step = offset.0.unsigned_abs() as u32 + 1;
    let mut params = params;
    let mut last = String::new();
    for _ in 0..MAX_RETRIES {
        let partial = match extend_and_realize(seq, params) {
            Ok(p) => p,
            Err(e @ Error::ExtensionTooShort { .. }) => {
                last = e.to_string();
                params = ExtensionParams { n1: params.n1 + step, n2: params.n2 + step };
                continue;
            }
            Err(e) => return Err(e),
        };
        let doubled = double(&partial)?;
        match glue(&doubled, seq) {
            Ok(complex) => {
                let (u, v) = check_correct_homology(&complex);
                if u.verdict && v.verdict {
                    return Ok(RealizeOutcome::Realized(Box::new(Realization { complex, params, offset, partial, doubled })));
                }
                last = format!("glued complex has homology {u:?} / {v:?}");
            }
            Err(Error::Placement(msg)) => last = msg,
            Err(e) => return Err(e),
        }
        params = ExtensionParams { n1: params.n1 + step, n2: params.n2 + step };
    }
    Err(Error::Internal { stage: "glue", message: format!("no valid placement after {MAX_RETRIES} attempts: {last}") })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::{check_symmetry, represents_free_class, Kill};

    fn seq(v: &[i64]) -> SignSequence {
        SignSequence::new(v.to_vec()).unwrap()
    }

    fn realized(v: &[i64]) -> Realization {
        match realize(&seq(v)).unwrap() {
            RealizeOutcome::Realized(r) => *r,
            RealizeOutcome::NotRealizable(_) => panic!("{v:?} should be realizable"),
        }
    }

    #[test]
    fn params_and_offset() {
        let s = seq(&[-1, 1, 2, -1, 1, 3]);
        assert_eq!(ExtensionParams::defaults(&s), ExtensionParams { n1: 4, n2: 4 });
        assert!(ExtensionParams { n1: 1, n2: 4 }.validate(&s).is_err());
        assert_eq!(GlueOffset::of(&s), GlueOffset(1));
        assert_eq!(GlueOffset::of(&seq(&[1, -2, 3, -1])), GlueOffset(0));
    }

    #[test]
    fn extension_of_worked_example() {
        let s = seq(&[-1, 1, 2, -1, 1, 3]);
        let f2 = extend_and_realize(&s, ExtensionParams::defaults(&s)).unwrap();
        assert_eq!(f2.generator_count(), 9);
        assert!(f2.is_chain_complex());
        assert!(matches!(
            extend_and_realize(&seq(&[1, 1]), ExtensionParams { n1: 2, n2: 2 }),
            Err(Error::NotRealizable)
        ));
    }

    #[test]
    fn alternating_doubling_has_no_green() {
        let s = seq(&[-2, 1, -3, 2]);
        let d = double(&extend_and_realize(&s, ExtensionParams::defaults(&s)).unwrap()).unwrap();
        assert!(d.complex.tagged_arrows().all(|(_, t)| t != Some(ArrowTag::Green)));
    }

    #[test]
    fn minimal_extension_can_be_too_short() {
        let s = seq(&[1, -1, 1, -1]);
        assert!(matches!(
            extend_and_realize(&s, ExtensionParams::defaults(&s)),
            Err(Error::ExtensionTooShort { n1: 2, n2: 2 })
        ));
        assert!(extend_and_realize(&s, ExtensionParams { n1: 3, n2: 3 }).is_ok());
    }

    #[test]
    fn doubling_reduces_to_two_copies() {
        let s = seq(&[-1, 1, 2, -1, 1, 3]);
        let d = double(&extend_and_realize(&s, ExtensionParams::defaults(&s)).unwrap()).unwrap();
        let reduced = d.complex.reduce(RingLevel::R1).unwrap();
        assert_eq!(reduced.components().len(), 2);
    }

    #[test]
    fn known_realizations() {
        for v in [&[1, -1, 3, -2][..], &[2, 2], &[-1, 1, 2, -1, 1, 3], &[-1, 1]] {
            let r = realized(v);
            let c = &r.complex;
            assert_eq!(c.generator_count(), (v.len() + 1) + (v.len() + 3) + 1);
            assert!(c.is_chain_complex());
            assert!(c.check_degree().passed());
            let (u, w) = check_correct_homology(c);
            assert!(u.verdict && w.verdict);
            assert!(represents_free_class(c, Kill::U, c.lookup("x0").unwrap()));
            let top = format!("x{}", v.len());
            assert!(represents_free_class(c, Kill::V, c.lookup(&top).unwrap()));
        }
    }

    #[test]
    fn symmetric_input_gives_symmetric_output() {
        for v in [&[-1, 1][..], &[2, -1, 1, -2], &[1, -1, 1, -1]] {
            assert!(check_symmetry(&realized(v).complex).passed(), "{v:?}");
        }
    }

    #[test]
    fn non_realizable_is_forwarded() {
        assert!(matches!(realize(&seq(&[2, 1, -3, 1])).unwrap(), RealizeOutcome::NotRealizable(_)));
    }
}
