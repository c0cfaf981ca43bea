//! Free bigraded based modules over `R_i = F2[U,V]/(U^i V^i)`.
//!
//! A [`BasedComplex`] is a free module with a distinguished basis and an
//! endomorphism written as a set of coefficient-one arrows
//! `source -> U^a V^b target`. Coefficients live in F2, so inserting an arrow
//! that is already present removes it.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The level `i` of the quotient ring `R_i`; `Infinity` is `F2[U,V]` itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RingLevel {
    Finite(u32),
    Infinity,
}

impl RingLevel {
    pub const R1: RingLevel = RingLevel::Finite(1);
    pub const R2: RingLevel = RingLevel::Finite(2);

    pub fn finite(level: u32) -> Result<Self> {
        if level == 0 {
            return Err(Error::InvalidInput("ring level must be at least 1".into()));
        }
        Ok(RingLevel::Finite(level))
    }

    /// Whether `m` is zero in this ring: `U^a V^b = 0` in `R_i` iff `min(a, b) >= i`.
    pub fn kills(self, m: Monomial) -> bool {
        match self {
            RingLevel::Finite(i) => m.min_exp() >= i,
            RingLevel::Infinity => false,
        }
    }
}

impl Ord for RingLevel {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (RingLevel::Finite(a), RingLevel::Finite(b)) => a.cmp(b),
            (RingLevel::Finite(_), RingLevel::Infinity) => Ordering::Less,
            (RingLevel::Infinity, RingLevel::Finite(_)) => Ordering::Greater,
            (RingLevel::Infinity, RingLevel::Infinity) => Ordering::Equal,
        }
    }
}

impl PartialOrd for RingLevel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for RingLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingLevel::Finite(i) => write!(f, "R{i}"),
            RingLevel::Infinity => write!(f, "Rinf"),
        }
    }
}

impl FromStr for RingLevel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "Rinf" {
            return Ok(RingLevel::Infinity);
        }
        s.strip_prefix('R')
            .and_then(|rest| rest.parse::<u32>().ok())
            .ok_or_else(|| Error::InvalidInput(format!("unknown ring `{s}`")))
            .and_then(RingLevel::finite)
    }
}

/// The ring element `U^u V^v`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub u: u32,
    pub v: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { u: 0, v: 0 };
    pub const UV: Monomial = Monomial { u: 1, v: 1 };

    pub const fn new(u: u32, v: u32) -> Self {
        Monomial { u, v }
    }

    pub fn min_exp(self) -> u32 {
        self.u.min(self.v)
    }

    /// A pure power of `U`.
    pub fn is_horizontal(self) -> bool {
        self.u > 0 && self.v == 0
    }

    /// A pure power of `V`.
    pub fn is_vertical(self) -> bool {
        self.v > 0 && self.u == 0
    }

    pub fn is_diagonal(self) -> bool {
        self.u > 0 && self.v > 0
    }

    /// The U/V-swapped monomial.
    pub fn swapped(self) -> Self {
        Monomial { u: self.v, v: self.u }
    }
}

impl Mul for Monomial {
    type Output = Monomial;

    fn mul(self, rhs: Monomial) -> Monomial {
        Monomial { u: self.u + rhs.u, v: self.v + rhs.v }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.u == 0 && self.v == 0 {
            return write!(f, "1");
        }
        if self.u > 0 {
            write!(f, "U^{}", self.u)?;
        }
        if self.v > 0 {
            write!(f, "V^{}", self.v)?;
        }
        Ok(())
    }
}

/// Absolute `(gr_U, gr_V)` bigrading. `U` has degree `(-2, 0)`, `V` has
/// degree `(0, -2)` and every differential has degree `(-1, -1)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bigrading {
    pub gr_u: i64,
    pub gr_v: i64,
}

impl Bigrading {
    pub const fn new(gr_u: i64, gr_v: i64) -> Self {
        Bigrading { gr_u, gr_v }
    }

    /// Alexander grading `(gr_U - gr_V) / 2`.
    pub fn alexander(self) -> f64 {
        (self.gr_u - self.gr_v) as f64 / 2.0
    }

    pub fn swapped(self) -> Self {
        Bigrading { gr_u: self.gr_v, gr_v: self.gr_u }
    }

    /// Grading a target must carry so that `source -> m target` has degree `(-1, -1)`.
    pub fn arrow_target(self, m: Monomial) -> Bigrading {
        Bigrading {
            gr_u: self.gr_u + 2 * m.u as i64 - 1,
            gr_v: self.gr_v + 2 * m.v as i64 - 1,
        }
    }

    /// Inverse of [`Bigrading::arrow_target`]: the monomial an arrow from
    /// `self` to `target` must carry, if the degree equation has a solution
    /// with nonnegative exponents.
    pub fn monomial_to(self, target: Bigrading) -> Option<Monomial> {
        let du = target.gr_u - self.gr_u + 1;
        let dv = target.gr_v - self.gr_v + 1;
        if du < 0 || dv < 0 || du % 2 != 0 || dv % 2 != 0 {
            return None;
        }
        Some(Monomial::new((du / 2) as u32, (dv / 2) as u32))
    }
}

impl Add for Bigrading {
    type Output = Bigrading;

    fn add(self, rhs: Bigrading) -> Bigrading {
        Bigrading::new(self.gr_u + rhs.gr_u, self.gr_v + rhs.gr_v)
    }
}

impl Sub for Bigrading {
    type Output = Bigrading;

    fn sub(self, rhs: Bigrading) -> Bigrading {
        Bigrading::new(self.gr_u - rhs.gr_u, self.gr_v - rhs.gr_v)
    }
}

impl fmt::Display for Bigrading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.gr_u, self.gr_v)
    }
}

/// Stable index of a generator within its complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GenId(pub usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub gr: Bigrading,
}

/// One term `source -> U^a V^b target` of the differential, with coefficient 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arrow {
    pub source: GenId,
    pub monomial: Monomial,
    pub target: GenId,
}

impl Arrow {
    pub fn new(source: GenId, monomial: Monomial, target: GenId) -> Self {
        Arrow { source, monomial, target }
    }
}

/// Provenance of an arrow, kept for tests and drawing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArrowTag {
    /// Diagonal arrow inserted by the tunnel filler.
    Added,
    Black,
    Red,
    Blue,
    Green,
}

impl ArrowTag {
    pub fn as_str(self) -> &'static str {
        match self {
            ArrowTag::Added => "added",
            ArrowTag::Black => "black",
            ArrowTag::Red => "red",
            ArrowTag::Blue => "blue",
            ArrowTag::Green => "green",
        }
    }
}

impl FromStr for ArrowTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "added" => ArrowTag::Added,
            "black" => ArrowTag::Black,
            "red" => ArrowTag::Red,
            "blue" => ArrowTag::Blue,
            "green" => ArrowTag::Green,
            other => return Err(Error::InvalidInput(format!("unknown arrow color `{other}`"))),
        })
    }
}

/// Nonzero F2 terms `(generator, monomial)` of an element.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TermList(BTreeSet<(GenId, Monomial)>);

impl TermList {
    pub fn new() -> Self {
        TermList(BTreeSet::new())
    }

    /// Add one copy of `m * g`; two copies cancel.
    pub fn toggle(&mut self, g: GenId, m: Monomial) {
        if !self.0.remove(&(g, m)) {
            self.0.insert((g, m));
        }
    }

    pub fn contains(&self, g: GenId, m: Monomial) -> bool {
        self.0.contains(&(g, m))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (GenId, Monomial)> + '_ {
        self.0.iter().copied()
    }
}

/// Arrows whose endpoints violate the `(-1, -1)` degree equation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DegreeReport {
    pub violations: Vec<Arrow>,
}

impl DegreeReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A free `R_i`-module with a distinguished basis and an endomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasedComplex {
    ring: RingLevel,
    generators: Vec<Generator>,
    arrows: BTreeMap<Arrow, Option<ArrowTag>>,
}

impl BasedComplex {
    pub fn new(ring: RingLevel) -> Self {
        BasedComplex { ring, generators: Vec::new(), arrows: BTreeMap::new() }
    }

    pub fn ring(&self) -> RingLevel {
        self.ring
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator(&self, id: GenId) -> &Generator {
        &self.generators[id.0]
    }

    pub fn name(&self, id: GenId) -> &str {
        &self.generators[id.0].name
    }

    pub fn grading(&self, id: GenId) -> Bigrading {
        self.generators[id.0].gr
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn ids(&self) -> impl Iterator<Item = GenId> {
        (0..self.generators.len()).map(GenId)
    }

    pub fn add_generator(&mut self, name: impl Into<String>, gr: Bigrading) -> Result<GenId> {
        let name = name.into();
        if self.find(&name).is_some() {
            return Err(Error::DuplicateGenerator(name));
        }
        self.generators.push(Generator { name, gr });
        Ok(GenId(self.generators.len() - 1))
    }

    pub fn find(&self, name: &str) -> Option<GenId> {
        self.generators.iter().position(|g| g.name == name).map(GenId)
    }

    pub fn lookup(&self, name: &str) -> Result<GenId> {
        self.find(name).ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn set_grading(&mut self, id: GenId, gr: Bigrading) {
        self.generators[id.0].gr = gr;
    }

    fn check_id(&self, id: GenId) -> Result<()> {
        if id.0 < self.generators.len() {
            Ok(())
        } else {
            Err(Error::UnknownGenerator(format!("#{}", id.0)))
        }
    }

    /// Add `arrow` with F2 semantics: if it is already present it is removed.
    /// Arrows whose monomial vanishes in the ring are never stored.
    /// Returns whether the arrow is present afterwards.
    pub fn toggle_arrow(&mut self, arrow: Arrow, tag: Option<ArrowTag>) -> bool {
        assert!(
            arrow.source.0 < self.generators.len() && arrow.target.0 < self.generators.len(),
            "arrow endpoint out of range"
        );
        if self.ring.kills(arrow.monomial) {
            return false;
        }
        if self.arrows.remove(&arrow).is_some() {
            false
        } else {
            self.arrows.insert(arrow, tag);
            true
        }
    }

    pub fn add_arrow(&mut self, source: GenId, monomial: Monomial, target: GenId) -> bool {
        self.toggle_arrow(Arrow::new(source, monomial, target), None)
    }

    pub fn contains(&self, arrow: &Arrow) -> bool {
        self.arrows.contains_key(arrow)
    }

    pub fn tag(&self, arrow: &Arrow) -> Option<ArrowTag> {
        self.arrows.get(arrow).copied().flatten()
    }

    pub fn arrows(&self) -> impl Iterator<Item = &Arrow> {
        self.arrows.keys()
    }

    pub fn tagged_arrows(&self) -> impl Iterator<Item = (&Arrow, Option<ArrowTag>)> {
        self.arrows.iter().map(|(a, t)| (a, *t))
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn arrows_from(&self, id: GenId) -> impl Iterator<Item = &Arrow> {
        let lo = Arrow::new(id, Monomial::ONE, GenId(0));
        self.arrows.range(lo..).map(|(a, _)| a).take_while(move |a| a.source == id)
    }

    pub fn arrows_into(&self, id: GenId) -> impl Iterator<Item = &Arrow> {
        self.arrows.keys().filter(move |a| a.target == id)
    }

    /// Drop all provenance tags.
    pub fn untagged(&self) -> Self {
        let mut out = self.clone();
        for tag in out.arrows.values_mut() {
            *tag = None;
        }
        out
    }

    /// `<d x, m y>`.
    pub fn coefficient(&self, x: GenId, m: Monomial, y: GenId) -> Result<bool> {
        self.check_id(x)?;
        self.check_id(y)?;
        Ok(!self.ring.kills(m) && self.contains(&Arrow::new(x, m, y)))
    }

    /// Outgoing adjacency lists, indexed by generator.
    pub(crate) fn out_lists(&self) -> Vec<Vec<(Monomial, GenId)>> {
        let mut out = vec![Vec::new(); self.generators.len()];
        for a in self.arrows.keys() {
            out[a.source.0].push((a.monomial, a.target));
        }
        out
    }

    /// `d^2 x` for every generator `x`, reduced in the ring.
    pub fn differential_square(&self) -> BTreeMap<GenId, TermList> {
        let out = self.out_lists();
        let mut result = BTreeMap::new();
        for x in self.ids() {
            let mut terms = TermList::new();
            for &(m1, z) in &out[x.0] {
                for &(m2, y) in &out[z.0] {
                    let m = m1 * m2;
                    if !self.ring.kills(m) {
                        terms.toggle(y, m);
                    }
                }
            }
            result.insert(x, terms);
        }
        result
    }

    pub fn is_chain_complex(&self) -> bool {
        self.differential_square().values().all(TermList::is_empty)
    }

    pub fn check_degree(&self) -> DegreeReport {
        let violations = self
            .arrows
            .keys()
            .filter(|a| self.grading(a.source).arrow_target(a.monomial) != self.grading(a.target))
            .copied()
            .collect();
        DegreeReport { violations }
    }

    /// Reduction to a smaller ring level; arrows that vanish there are deleted.
    pub fn reduce(&self, target: RingLevel) -> Result<Self> {
        if target > self.ring {
            return Err(Error::InvalidReduction { from: self.ring, to: target });
        }
        let mut out = self.clone();
        out.ring = target;
        out.arrows.retain(|a, _| !target.kills(a.monomial));
        Ok(out)
    }

    /// The same basis and arrows regarded over a larger ring level.
    pub fn lift(&self, target: RingLevel) -> Result<Self> {
        if target < self.ring {
            return Err(Error::InvalidLift { from: self.ring, to: target });
        }
        let mut out = self.clone();
        out.ring = target;
        Ok(out)
    }

    /// The complex with the roles of `U` and `V` (and of `gr_U`, `gr_V`) exchanged.
    pub fn conjugate(&self) -> Self {
        let mut out = BasedComplex::new(self.ring);
        out.generators = self
            .generators
            .iter()
            .map(|g| Generator { name: g.name.clone(), gr: g.gr.swapped() })
            .collect();
        out.arrows = self
            .arrows
            .iter()
            .map(|(a, t)| (Arrow::new(a.source, a.monomial.swapped(), a.target), *t))
            .collect();
        out
    }

    /// Direct sum; generators of `other` are renamed with `suffix` appended.
    pub fn direct_sum(&self, other: &BasedComplex, suffix: &str) -> Result<Self> {
        let ring = self.ring.max(other.ring);
        let mut out = self.lift(ring)?;
        let offset = out.generators.len();
        for g in &other.generators {
            out.add_generator(format!("{}{}", g.name, suffix), g.gr)?;
        }
        for (a, t) in &other.arrows {
            let shifted = Arrow::new(GenId(a.source.0 + offset), a.monomial, GenId(a.target.0 + offset));
            out.toggle_arrow(shifted, *t);
        }
        Ok(out)
    }

    /// Connected components of the underlying undirected arrow graph.
    pub fn components(&self) -> Vec<Vec<GenId>> {
        let n = self.generators.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn root(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        for a in self.arrows.keys() {
            let (r1, r2) = (root(&mut parent, a.source.0), root(&mut parent, a.target.0));
            if r1 != r2 {
                parent[r1.max(r2)] = r1.min(r2);
            }
        }
        let mut groups: BTreeMap<usize, Vec<GenId>> = BTreeMap::new();
        for i in 0..n {
            let r = root(&mut parent, i);
            groups.entry(r).or_default().push(GenId(i));
        }
        groups.into_values().collect()
    }

    /// The based subcomplex spanned by `ids` (arrows with both ends inside).
    pub fn restrict(&self, ids: &[GenId]) -> Self {
        let mut out = BasedComplex::new(self.ring);
        let mut map = BTreeMap::new();
        for &id in ids {
            let g = self.generator(id);
            map.insert(id, GenId(out.generators.len()));
            out.generators.push(g.clone());
        }
        for (a, t) in &self.arrows {
            if let (Some(&s), Some(&d)) = (map.get(&a.source), map.get(&a.target)) {
                out.arrows.insert(Arrow::new(s, a.monomial, d), *t);
            }
        }
        out
    }

    /// Human-readable `x -> U^aV^b y` form of an arrow.
    pub fn describe(&self, a: &Arrow) -> String {
        format!("{} -> {} {}", self.name(a.source), a.monomial, self.name(a.target))
    }
}
