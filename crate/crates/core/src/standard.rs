//! Standard complexes `C(a_1, ..., a_2n)` and extended standard complexes
//! `C(a_0 | a_1, ..., a_2n | a_2n+1)` over `R_1`.

use std::fmt;

use crate::algebra::{Arrow, BasedComplex, Bigrading, GenId, Monomial, RingLevel};
use crate::error::{Error, Result};

/// Nonzero integers `a_1, ..., a_2n`, `n >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignSequence(Vec<i64>);

impl SignSequence {
    pub fn new(entries: Vec<i64>) -> Result<Self> {
        if entries.is_empty() || entries.len() % 2 != 0 {
            return Err(Error::InvalidSequence(format!(
                "length must be even and positive, got {}",
                entries.len()
            )));
        }
        if let Some(pos) = entries.iter().position(|&a| a == 0) {
            return Err(Error::InvalidSequence(format!("entry {} is zero", pos + 1)));
        }
        Ok(SignSequence(entries))
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    /// Half the length.
    pub fn n(&self) -> usize {
        self.0.len() / 2
    }

    pub fn max_abs(&self) -> i64 {
        self.0.iter().map(|a| a.abs()).max().unwrap_or(0)
    }

    pub fn is_alternating(&self) -> bool {
        self.0.windows(2).all(|w| w[0].signum() != w[1].signum())
    }

    pub fn all_abs_at_least(&self, k: i64) -> bool {
        self.0.iter().all(|a| a.abs() >= k)
    }

    pub fn sign_sum(&self) -> i64 {
        self.0.iter().map(|a| a.signum()).sum()
    }

    /// The sequence `-a_2n, ..., -a_1`, whose standard complex is the conjugate.
    pub fn mirrored(&self) -> SignSequence {
        SignSequence(self.0.iter().rev().map(|a| -a).collect())
    }
}

impl fmt::Display for SignSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtendedSignSequence {
    pub head: i64,
    pub body: SignSequence,
    pub tail: i64,
}

impl ExtendedSignSequence {
    pub fn new(head: i64, body: SignSequence, tail: i64) -> Result<Self> {
        if head == 0 || tail == 0 {
            return Err(Error::InvalidSequence("extension entries must be nonzero".into()));
        }
        Ok(ExtendedSignSequence { head, body, tail })
    }
}

impl fmt::Display for ExtendedSignSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} | {} | {}", self.head, self.body, self.tail)
    }
}

/// Display name of the basis element `x_i`.
pub fn generator_name(i: i64) -> String {
    format!("x{i}")
}

/// The arrow encoded by `a_i`: a `U`-arrow for odd `i`, a `V`-arrow for even
/// `i`, pointing from `x_i` to `x_{i-1}` when `a_i > 0`.
fn entry_arrow(i: i64, a: i64) -> (Monomial, bool) {
    let len = a.unsigned_abs() as u32;
    let m = if i.rem_euclid(2) == 1 { Monomial::new(len, 0) } else { Monomial::new(0, len) };
    (m, a > 0)
}

/// Build the zig-zag `x_lo, ..., x_hi` where `links[k]` joins `x_{lo+k+1}`
/// and `x_{lo+k}`. Gradings are normalized by `gr_U(x_0) = 0` and
/// `gr_V(x_2n) = 0`, where `x_2n` is `top`.
fn build_chain(lo: i64, links: &[i64], top: i64) -> BasedComplex {
    let count = links.len() + 1;
    let mut rel = vec![Bigrading::default(); count];
    let mut arrows = Vec::with_capacity(links.len());
    for (k, &a) in links.iter().enumerate() {
        let i = lo + k as i64 + 1;
        let (m, downward) = entry_arrow(i, a);
        let step = Bigrading::new(2 * m.u as i64 - 1, 2 * m.v as i64 - 1);
        rel[k + 1] = if downward { rel[k] - step } else { rel[k] + step };
        let (hi_id, lo_id) = (GenId(k + 1), GenId(k));
        arrows.push(if downward { Arrow::new(hi_id, m, lo_id) } else { Arrow::new(lo_id, m, hi_id) });
    }

    let x0 = (0 - lo) as usize;
    let xtop = (top - lo) as usize;
    let shift = Bigrading::new(-rel[x0].gr_u, -rel[xtop].gr_v);

    let mut c = BasedComplex::new(RingLevel::R1);
    for (k, r) in rel.iter().enumerate() {
        c.add_generator(generator_name(lo + k as i64), *r + shift)
            .expect("generator names are distinct");
    }
    for a in arrows {
        c.toggle_arrow(a, None);
    }
    c
}

/// `C(a_1, ..., a_2n)` over `R_1` with basis `x_0, ..., x_2n`.
pub fn build_standard(seq: &SignSequence) -> BasedComplex {
    build_chain(0, seq.entries(), seq.entries().len() as i64)
}

/// `C(a_0 | a_1, ..., a_2n | a_2n+1)` over `R_1` with basis `x_-1, ..., x_2n+1`.
pub fn build_extended(ext: &ExtendedSignSequence) -> BasedComplex {
    let mut links = Vec::with_capacity(ext.body.entries().len() + 2);
    links.push(ext.head);
    links.extend_from_slice(ext.body.entries());
    links.push(ext.tail);
    build_chain(-1, &links, ext.body.entries().len() as i64)
}

/// The unique diagonal monomial `U^a V^b` (`a, b >= 1`) that an arrow
/// `x -> y` must carry to have degree `(-1, -1)`, if there is one.
pub fn candidate_monomial(complex: &BasedComplex, x: GenId, y: GenId) -> Result<Option<Monomial>> {
    if x == y {
        return Err(Error::InvalidInput("candidate arrow endpoints must differ".into()));
    }
    if x.0 >= complex.generator_count() || y.0 >= complex.generator_count() {
        return Err(Error::UnknownGenerator(format!("#{}", x.0.max(y.0))));
    }
    Ok(complex
        .grading(x)
        .monomial_to(complex.grading(y))
        .filter(|m| m.is_diagonal()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(v: &[i64]) -> SignSequence {
        SignSequence::new(v.to_vec()).unwrap()
    }

    fn gr(c: &BasedComplex, name: &str) -> Bigrading {
        c.grading(c.lookup(name).unwrap())
    }

    fn has(c: &BasedComplex, from: &str, m: Monomial, to: &str) -> bool {
        c.contains(&Arrow::new(c.lookup(from).unwrap(), m, c.lookup(to).unwrap()))
    }

    #[test]
    fn validation() {
        assert!(SignSequence::new(vec![]).is_err());
        assert!(SignSequence::new(vec![1, 2, 3]).is_err());
        assert!(SignSequence::new(vec![1, 0]).is_err());
        assert!(ExtendedSignSequence::new(0, seq(&[1, -1]), 2).is_err());
    }

    #[test]
    fn c22_gradings() {
        let c = build_standard(&seq(&[2, 2]));
        assert_eq!(gr(&c, "x0"), Bigrading::new(0, 2));
        assert_eq!(gr(&c, "x1"), Bigrading::new(-3, 3));
        assert_eq!(gr(&c, "x2"), Bigrading::new(-2, 0));
        assert!(has(&c, "x1", Monomial::new(2, 0), "x0"));
        assert!(has(&c, "x2", Monomial::new(0, 2), "x1"));
    }

    #[test]
    fn c1m1_gradings_and_arrows() {
        let c = build_standard(&seq(&[1, -1]));
        assert_eq!(gr(&c, "x0"), Bigrading::new(0, -2));
        assert_eq!(gr(&c, "x1"), Bigrading::new(-1, -1));
        assert_eq!(gr(&c, "x2"), Bigrading::new(-2, 0));
        assert!(has(&c, "x1", Monomial::new(1, 0), "x0"));
        assert!(has(&c, "x1", Monomial::new(0, 1), "x2"));
    }

    #[test]
    fn fig4_shapes() {
        let c = build_standard(&seq(&[2, -2, -1, 1, 3, -1]));
        assert_eq!(c.generator_count(), 7);
        assert!(has(&c, "x1", Monomial::new(2, 0), "x0"));
        assert!(has(&c, "x1", Monomial::new(0, 2), "x2"));
        assert!(has(&c, "x2", Monomial::new(1, 0), "x3"));
        assert!(has(&c, "x4", Monomial::new(0, 1), "x3"));
        assert!(has(&c, "x5", Monomial::new(3, 0), "x4"));
        assert!(has(&c, "x5", Monomial::new(0, 1), "x6"));
        assert!(c.check_degree().passed());

        let e = build_extended(&ExtendedSignSequence::new(2, seq(&[2, -2, -1, 1, 3, -1]), -1).unwrap());
        assert_eq!(e.generator_count(), 9);
        assert!(has(&e, "x0", Monomial::new(0, 2), "x-1"));
        assert!(has(&e, "x6", Monomial::new(1, 0), "x7"));
        for i in 0..=6 {
            assert_eq!(gr(&e, &generator_name(i)), gr(&c, &generator_name(i)));
        }
        assert!(e.check_degree().passed());
    }

    #[test]
    fn extension_arrow_direction() {
        let e = build_extended(&ExtendedSignSequence::new(4, seq(&[2, 2]), -4).unwrap());
        assert!(has(&e, "x0", Monomial::new(0, 4), "x-1"));
        assert!(has(&e, "x2", Monomial::new(4, 0), "x3"));
    }

    #[test]
    fn candidates() {
        let c = build_standard(&seq(&[1, 1]));
        assert_eq!(gr(&c, "x0"), Bigrading::new(0, 0));
        assert_eq!(gr(&c, "x2"), Bigrading::new(0, 0));
        let (x0, x2) = (c.lookup("x0").unwrap(), c.lookup("x2").unwrap());
        assert_eq!(candidate_monomial(&c, x2, x0).unwrap(), None);
        assert!(candidate_monomial(&c, x0, x0).is_err());

        let c = build_standard(&seq(&[-1, 1, 2, -1, 1, 2]));
        let (x0, x3) = (c.lookup("x0").unwrap(), c.lookup("x3").unwrap());
        assert_eq!(candidate_monomial(&c, x3, x0).unwrap(), Some(Monomial::UV));
    }

    #[test]
    fn standard_differential_examples() {
        let c = build_standard(&seq(&[-1, 1, 2, -1, 1, 2]));
        let x = |i: i64| c.lookup(&generator_name(i)).unwrap();
        assert!(c.coefficient(x(3), Monomial::new(2, 0), x(2)).unwrap());
        assert!(!c.coefficient(x(0), Monomial::new(0, 1), x(1)).unwrap());

        let sq = c.lift(RingLevel::R2).unwrap().differential_square();
        assert!(sq[&x(3)].contains(x(1), Monomial::new(2, 1)));
        // The a_5, a_6 corner contributes as well; the worked trace meets it second.
        assert!(sq[&x(6)].contains(x(4), Monomial::new(1, 2)));
        let total: usize = sq.values().map(|t| t.len()).sum();
        assert_eq!(total, 2);

        let alt = build_standard(&seq(&[2, -2])).lift(RingLevel::Infinity).unwrap();
        assert!(alt.is_chain_complex());
    }
}
