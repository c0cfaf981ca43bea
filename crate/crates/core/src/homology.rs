//! Homology checks for knot-like complexes and symmetry via based isomorphism.
//!
//! Setting `U = 0` leaves a complex over `F2[V]`. Multiplication by `V`
//! preserves `gr_U` and the differential lowers it by one, so the quotient
//! is a chain complex of free `F2[t]`-modules indexed by `gr_U`, and its
//! homology is read off from Smith normal forms of the boundary blocks.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::algebra::{Arrow, BasedComplex, Bigrading, GenId, Monomial};
use crate::poly::{smith_normal_form, Poly2, PolyMatrix};

/// Which variable is set to zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Kill {
    U,
    V,
}

impl Kill {
    /// The grading preserved by the surviving variable.
    fn level(self, gr: Bigrading) -> i64 {
        match self {
            Kill::U => gr.gr_u,
            Kill::V => gr.gr_v,
        }
    }

    /// Exponent of the surviving variable, if the monomial survives.
    fn survivor(self, m: Monomial) -> Option<u32> {
        match self {
            Kill::U if m.u == 0 => Some(m.v),
            Kill::V if m.v == 0 => Some(m.u),
            _ => None,
        }
    }
}

impl fmt::Display for Kill {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kill::U => "C/U",
            Kill::V => "C/V",
        })
    }
}

/// The quotient `C/U` (or `C/V`) split by the preserved grading.
#[derive(Clone, Debug)]
pub struct QuotientChain {
    pub kill: Kill,
    /// Basis of each chain group.
    pub levels: BTreeMap<i64, Vec<GenId>>,
    /// `boundaries[k]` maps level `k` to level `k - 1`; rows index level `k - 1`.
    pub boundaries: BTreeMap<i64, PolyMatrix>,
}

impl QuotientChain {
    fn position(&self, level: i64, g: GenId) -> Option<usize> {
        self.levels.get(&level)?.iter().position(|&h| h == g)
    }

    /// Boundary out of `level`, empty if either side has no generators.
    pub fn boundary(&self, level: i64) -> PolyMatrix {
        self.boundaries.get(&level).cloned().unwrap_or_else(|| {
            let rows = self.levels.get(&(level - 1)).map_or(0, Vec::len);
            let cols = self.levels.get(&level).map_or(0, Vec::len);
            PolyMatrix::zeros(rows, cols)
        })
    }
}

pub fn quotient_complex(complex: &BasedComplex, kill: Kill) -> QuotientChain {
    let mut levels: BTreeMap<i64, Vec<GenId>> = BTreeMap::new();
    for id in complex.ids() {
        levels.entry(kill.level(complex.grading(id))).or_default().push(id);
    }
    let mut chain = QuotientChain { kill, levels, boundaries: BTreeMap::new() };
    for &k in chain.levels.keys() {
        let rows = chain.levels.get(&(k - 1)).map_or(0, Vec::len);
        chain.boundaries.insert(k, PolyMatrix::zeros(rows, chain.levels[&k].len()));
    }
    for a in complex.arrows() {
        let Some(e) = kill.survivor(a.monomial) else { continue };
        let k = kill.level(complex.grading(a.source));
        let (Some(col), Some(row)) = (chain.position(k, a.source), chain.position(k - 1, a.target)) else {
            // Degree-violating arrow; the degree check reports it.
            continue;
        };
        let m = chain.boundaries.get_mut(&k).expect("level registered");
        let entry = m.get(row, col) + &Poly2::t_pow(e as usize);
        m.set(row, col, entry);
    }
    chain
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyReport {
    pub kill: Kill,
    pub free_rank_total: usize,
    /// Level of the free summand when there is exactly one.
    pub free_generator_grading: Option<i64>,
    pub free_ranks: BTreeMap<i64, usize>,
    /// Degrees of the non-unit invariant factors, per level.
    pub torsion_orders: BTreeMap<i64, Vec<usize>>,
    pub verdict: bool,
}

pub fn homology_report(complex: &BasedComplex, kill: Kill) -> HomologyReport {
    let chain = quotient_complex(complex, kill);
    let mut free_ranks = BTreeMap::new();
    let mut torsion_orders = BTreeMap::new();
    for (&k, gens) in &chain.levels {
        let out_rank = chain.boundary(k).rank();
        let incoming = chain.boundary(k + 1);
        let snf = smith_normal_form(&incoming);
        let factors = snf.invariant_factors();
        let free = gens.len() - out_rank - factors.len();
        if free > 0 {
            free_ranks.insert(k, free);
        }
        let torsion: Vec<usize> = factors.iter().filter(|p| !p.is_one()).filter_map(Poly2::degree).collect();
        if !torsion.is_empty() {
            torsion_orders.insert(k, torsion);
        }
    }
    let free_rank_total = free_ranks.values().sum();
    let free_generator_grading = if free_rank_total == 1 { free_ranks.keys().next().copied() } else { None };
    HomologyReport {
        kill,
        free_rank_total,
        free_generator_grading,
        free_ranks,
        torsion_orders,
        verdict: free_rank_total == 1 && free_generator_grading == Some(0),
    }
}

/// Reports for `C/U` and `C/V`; the complex is knot-like when both pass.
pub fn check_correct_homology(complex: &BasedComplex) -> (HomologyReport, HomologyReport) {
    (homology_report(complex, Kill::U), homology_report(complex, Kill::V))
}

/// Whether `g` is a cycle of the quotient whose class is not torsion.
pub fn represents_free_class(complex: &BasedComplex, kill: Kill, g: GenId) -> bool {
    let chain = quotient_complex(complex, kill);
    let k = kill.level(complex.grading(g));
    let col = chain.position(k, g).expect("generator sits at its own level");
    let out = chain.boundary(k);
    if (0..out.rows()).any(|r| !out.get(r, col).is_zero()) {
        return false;
    }
    let incoming = chain.boundary(k + 1);
    let unit = PolyMatrix::from_fn(incoming.rows(), 1, |r, _| if r == col { Poly2::one() } else { Poly2::zero() });
    incoming.hconcat(&unit).rank() > incoming.rank()
}

/// A bijection `phi` on generator indices with `gr_b(phi(g)) = gr_a(g) + shift`
/// carrying the arrows of `a` exactly onto those of `b`.
pub fn find_isomorphism(a: &BasedComplex, b: &BasedComplex, shift: Bigrading) -> Option<Vec<GenId>> {
    let n = a.generator_count();
    if n != b.generator_count() || a.arrow_count() != b.arrow_count() {
        return None;
    }
    let signature = |c: &BasedComplex, g: GenId| {
        let mut out: Vec<Monomial> = c.arrows_from(g).map(|x| x.monomial).collect();
        let mut inc: Vec<Monomial> = c.arrows_into(g).map(|x| x.monomial).collect();
        out.sort();
        inc.sort();
        (out, inc)
    };
    let sig_a: Vec<_> = a.ids().map(|g| signature(a, g)).collect();
    let sig_b: Vec<_> = b.ids().map(|g| signature(b, g)).collect();

    let mut candidates: Vec<Vec<GenId>> = Vec::with_capacity(n);
    for g in a.ids() {
        let want = a.grading(g) + shift;
        let c: Vec<GenId> = b.ids().filter(|&h| b.grading(h) == want && sig_b[h.0] == sig_a[g.0]).collect();
        if c.is_empty() {
            return None;
        }
        candidates.push(c);
    }

    // Visit generators in breadth-first order so each new one touches assigned ones.
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    let mut neighbours = vec![BTreeSet::new(); n];
    for x in a.arrows() {
        neighbours[x.source.0].insert(x.target.0);
        neighbours[x.target.0].insert(x.source.0);
    }
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            order.push(i);
            for &j in &neighbours[i] {
                if !seen[j] {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
    }

    let mut phi: Vec<Option<GenId>> = vec![None; n];
    let mut used = vec![false; n];
    fn consistent(a: &BasedComplex, b: &BasedComplex, phi: &[Option<GenId>], g: GenId) -> bool {
        a.arrows_from(g).chain(a.arrows_into(g)).all(|x| match (phi[x.source.0], phi[x.target.0]) {
            (Some(s), Some(t)) => b.contains(&Arrow::new(s, x.monomial, t)),
            _ => true,
        })
    }
    fn search(
        depth: usize,
        order: &[usize],
        candidates: &[Vec<GenId>],
        a: &BasedComplex,
        b: &BasedComplex,
        phi: &mut Vec<Option<GenId>>,
        used: &mut Vec<bool>,
    ) -> bool {
        let Some(&g) = order.get(depth) else { return true };
        for &h in &candidates[g] {
            if used[h.0] {
                continue;
            }
            phi[g] = Some(h);
            used[h.0] = true;
            if consistent(a, b, phi, GenId(g)) && search(depth + 1, order, candidates, a, b, phi, used) {
                return true;
            }
            phi[g] = None;
            used[h.0] = false;
        }
        false
    }
    if search(0, &order, &candidates, a, b, &mut phi, &mut used) {
        Some(phi.into_iter().map(|p| p.expect("complete assignment")).collect())
    } else {
        None
    }
}

/// Like [`find_isomorphism`], allowing any overall grading shift.
pub fn find_isomorphism_up_to_shift(a: &BasedComplex, b: &BasedComplex) -> Option<Vec<GenId>> {
    let first = a.ids().next()?;
    let shifts: BTreeSet<Bigrading> = b.ids().map(|h| b.grading(h) - a.grading(first)).collect();
    shifts.into_iter().find_map(|s| find_isomorphism(a, b, s))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SymmetryResult {
    /// `witness[g]` is the image of `g`; arrows `g -> m h` go to `phi(g) -> swap(m) phi(h)`.
    Pass { witness: Vec<GenId> },
    Fail,
}

impl SymmetryResult {
    pub fn passed(&self) -> bool {
        matches!(self, SymmetryResult::Pass { .. })
    }
}

/// Based isomorphism between the complex and its `U <-> V` conjugate.
pub fn check_symmetry(complex: &BasedComplex) -> SymmetryResult {
    match find_isomorphism(complex, &complex.conjugate(), Bigrading::default()) {
        Some(witness) => SymmetryResult::Pass { witness },
        None => SymmetryResult::Fail,
    }
}
