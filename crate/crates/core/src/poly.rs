//! Polynomials over F2 and matrices over `F2[t]`, with Smith normal form.

use std::fmt;
use std::ops::{Add, Mul};

/// A polynomial over F2, coefficients packed little-endian into `u64` limbs.
/// Trailing zero limbs are never stored, so equality is structural.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Poly2 {
    limbs: Vec<u64>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2 { limbs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly2::t_pow(0)
    }

    pub fn t_pow(k: usize) -> Self {
        let mut limbs = vec![0u64; k / 64 + 1];
        limbs[k / 64] = 1 << (k % 64);
        Poly2 { limbs }
    }

    /// Build from coefficient bits, lowest degree first.
    pub fn from_bits(bits: &[bool]) -> Self {
        let mut p = Poly2 { limbs: vec![0; bits.len().div_ceil(64)] };
        for (i, &b) in bits.iter().enumerate() {
            if b {
                p.limbs[i / 64] |= 1 << (i % 64);
            }
        }
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.limbs.last() == Some(&0) {
            self.limbs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.limbs.len() == 1 && self.limbs[0] == 1
    }

    pub fn degree(&self) -> Option<usize> {
        let top = *self.limbs.last()?;
        Some((self.limbs.len() - 1) * 64 + 63 - top.leading_zeros() as usize)
    }

    pub fn coeff(&self, k: usize) -> bool {
        self.limbs.get(k / 64).is_some_and(|l| l >> (k % 64) & 1 == 1)
    }

    fn shifted(&self, k: usize) -> Poly2 {
        if self.is_zero() {
            return Poly2::zero();
        }
        let (whole, bits) = (k / 64, k % 64);
        let mut limbs = vec![0u64; self.limbs.len() + whole + 1];
        for (i, &l) in self.limbs.iter().enumerate() {
            limbs[i + whole] |= l << bits;
            if bits > 0 {
                limbs[i + whole + 1] |= l >> (64 - bits);
            }
        }
        let mut p = Poly2 { limbs };
        p.trim();
        p
    }

    fn xor_assign(&mut self, other: &Poly2) {
        if self.limbs.len() < other.limbs.len() {
            self.limbs.resize(other.limbs.len(), 0);
        }
        for (a, b) in self.limbs.iter_mut().zip(&other.limbs) {
            *a ^= b;
        }
        self.trim();
    }

    /// Euclidean division. Panics on division by zero.
    pub fn div_rem(&self, divisor: &Poly2) -> (Poly2, Poly2) {
        let db = divisor.degree().expect("division by the zero polynomial");
        let mut q = Poly2::zero();
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let shift = dr - db;
            r.xor_assign(&divisor.shifted(shift));
            q.xor_assign(&Poly2::t_pow(shift));
        }
        (q, r)
    }

    pub fn divides(&self, other: &Poly2) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.div_rem(self).1.is_zero()
    }

    pub fn gcd(&self, other: &Poly2) -> Poly2 {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a
    }
}

impl Add for &Poly2 {
    type Output = Poly2;

    fn add(self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        out.xor_assign(rhs);
        out
    }
}

impl Mul for &Poly2 {
    type Output = Poly2;

    fn mul(self, rhs: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        let Some(d) = self.degree() else { return out };
        for k in 0..=d {
            if self.coeff(k) {
                out.xor_assign(&rhs.shifted(k));
            }
        }
        out
    }
}

impl fmt::Debug for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(d) = self.degree() else { return f.write_str("0") };
        let terms: Vec<String> = (0..=d)
            .rev()
            .filter(|&k| self.coeff(k))
            .map(|k| match k {
                0 => "1".to_string(),
                1 => "t".to_string(),
                _ => format!("t^{k}"),
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

/// Dense `rows x cols` matrix over `F2[t]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Poly2>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        PolyMatrix { rows, cols, data: vec![Poly2::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = PolyMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Poly2::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Poly2) -> Self {
        let mut m = PolyMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly2 {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly2) {
        self.data[i * self.cols + j] = p;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Poly2::is_zero)
    }

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        PolyMatrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = Poly2::zero();
            for k in 0..self.cols {
                acc.xor_assign(&(self.get(i, k) * other.get(k, j)));
            }
            acc
        })
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    /// Diagonal entries `d_1, d_2, ...` up to `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<Poly2> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).collect()
    }

    /// Append the columns of `other`.
    pub fn hconcat(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.rows, other.rows, "dimension mismatch");
        PolyMatrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// `row[dst] += q * row[src]`
    fn add_row(&mut self, dst: usize, src: usize, q: &Poly2) {
        for j in 0..self.cols {
            let delta = q * self.get(src, j);
            self.data[dst * self.cols + j].xor_assign(&delta);
        }
    }

    /// `col[dst] += q * col[src]`
    fn add_col(&mut self, dst: usize, src: usize, q: &Poly2) {
        for i in 0..self.rows {
            let delta = q * self.get(i, src);
            self.data[i * self.cols + dst].xor_assign(&delta);
        }
    }

    /// Rank over the fraction field `F2(t)`, by fraction-free elimination
    /// with gcd cancellation on each updated row.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for c in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(p) = (rank..m.rows).find(|&r| !m.get(r, c).is_zero()) else { continue };
            m.swap_rows(rank, p);
            let pivot = m.get(rank, c).clone();
            for r in rank + 1..m.rows {
                let e = m.get(r, c).clone();
                if e.is_zero() {
                    continue;
                }
                let g = pivot.gcd(&e);
                let (a, b) = (pivot.div_rem(&g).0, e.div_rem(&g).0);
                let mut content = Poly2::zero();
                for j in 0..m.cols {
                    let v = &(&a * m.get(r, j)) + &(&b * m.get(rank, j));
                    content = content.gcd(&v);
                    m.set(r, j, v);
                }
                if !content.is_zero() && !content.is_one() {
                    for j in 0..m.cols {
                        let v = m.get(r, j).div_rem(&content).0;
                        m.set(r, j, v);
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// Determinant of a square matrix by Bareiss elimination (every division exact).
    pub fn determinant(&self) -> Poly2 {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Poly2::one();
        }
        let mut m = self.clone();
        let mut prev = Poly2::one();
        for k in 0..n - 1 {
            let Some(p) = (k..n).find(|&r| !m.get(r, k).is_zero()) else { return Poly2::zero() };
            m.swap_rows(k, p);
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(m.get(i, j) * m.get(k, k)) + &(m.get(i, k) * m.get(k, j));
                    let (q, r) = num.div_rem(&prev);
                    debug_assert!(r.is_zero(), "Bareiss division must be exact");
                    m.set(i, j, q);
                }
                m.set(i, k, Poly2::zero());
            }
            prev = m.get(k, k).clone();
        }
        m.get(n - 1, n - 1).clone()
    }
}

/// `m = left * diag * right` with `left`, `right` invertible and the
/// diagonal of `diag` a divisibility chain `d_1 | d_2 | ...` (zeros last).
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub left: PolyMatrix,
    pub diag: PolyMatrix,
    pub right: PolyMatrix,
}

impl SmithForm {
    /// Nonzero invariant factors in order.
    pub fn invariant_factors(&self) -> Vec<Poly2> {
        self.diag.diagonal().into_iter().filter(|p| !p.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

pub fn smith_normal_form(m: &PolyMatrix) -> SmithForm {
    let (rows, cols) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut left = PolyMatrix::identity(rows);
    let mut right = PolyMatrix::identity(cols);

    for k in 0..rows.min(cols) {
        loop {
            // Smallest-degree nonzero entry of the trailing block becomes the pivot.
            let mut best: Option<(usize, usize, usize)> = None;
            for i in k..rows {
                for j in k..cols {
                    if let Some(deg) = d.get(i, j).degree() {
                        if best.is_none_or(|(_, _, b)| deg < b) {
                            best = Some((i, j, deg));
                        }
                    }
                }
            }
            let Some((pi, pj, _)) = best else {
                return SmithForm { left, diag: d, right };
            };
            d.swap_rows(k, pi);
            left.swap_cols(k, pi);
            d.swap_cols(k, pj);
            right.swap_rows(k, pj);

            let pivot = d.get(k, k).clone();
            let mut clean = true;
            for i in k + 1..rows {
                if d.get(i, k).is_zero() {
                    continue;
                }
                let (q, r) = d.get(i, k).div_rem(&pivot);
                d.add_row(i, k, &q);
                left.add_col(k, i, &q);
                clean &= r.is_zero();
            }
            for j in k + 1..cols {
                if d.get(k, j).is_zero() {
                    continue;
                }
                let (q, r) = d.get(k, j).div_rem(&pivot);
                d.add_col(j, k, &q);
                right.add_row(k, j, &q);
                clean &= r.is_zero();
            }
            if !clean {
                continue;
            }
            // Pull in any entry the pivot fails to divide, then retry.
            let offender = (k + 1..rows).find(|&i| (k + 1..cols).any(|j| !pivot.divides(d.get(i, j))));
            match offender {
                Some(i) => {
                    let one = Poly2::one();
                    d.add_row(k, i, &one);
                    left.add_col(i, k, &one);
                }
                None => break,
            }
        }
    }
    SmithForm { left, diag: d, right }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(bits: &[u8]) -> Poly2 {
        Poly2::from_bits(&bits.iter().map(|&b| b == 1).collect::<Vec<_>>())
    }

    #[test]
    fn arithmetic() {
        let t = Poly2::t_pow(1);
        let one = Poly2::one();
        let t_plus_1 = &t + &one;
        assert_eq!(&t_plus_1 * &t_plus_1, &Poly2::t_pow(2) + &one);
        assert_eq!(Poly2::t_pow(70).degree(), Some(70));
        assert_eq!((&Poly2::t_pow(130) * &Poly2::t_pow(5)).degree(), Some(135));
        let (q, r) = p(&[1, 0, 1, 1]).div_rem(&p(&[1, 1]));
        assert_eq!(&(&q * &p(&[1, 1])) + &r, p(&[1, 0, 1, 1]));
        assert_eq!(Poly2::t_pow(3).gcd(&Poly2::t_pow(5)), Poly2::t_pow(3));
        assert_eq!(p(&[1, 1, 0, 1]).to_string(), "t^3 + t + 1");
        assert_eq!(Poly2::zero().to_string(), "0");
    }

    #[test]
    fn snf_small_examples() {
        let t = |k| Poly2::t_pow(k);
        let m = PolyMatrix::from_fn(1, 1, |_, _| t(1));
        assert_eq!(smith_normal_form(&m).diag.diagonal(), vec![t(1)]);

        let mut m = PolyMatrix::zeros(2, 2);
        m.set(0, 0, t(1));
        m.set(0, 1, t(2));
        m.set(1, 1, t(3));
        let s = smith_normal_form(&m);
        assert_eq!(s.diag.diagonal(), vec![t(1), t(3)]);
        assert_eq!(s.left.mul(&s.diag).mul(&s.right), m);

        let z = PolyMatrix::zeros(3, 2);
        let s = smith_normal_form(&z);
        assert!(s.diag.is_zero());
        assert_eq!(s.rank(), 0);
    }

    #[test]
    fn divisibility_is_enforced() {
        // diag(t, t+1) has SNF diag(1, t^2+t)
        let mut m = PolyMatrix::zeros(2, 2);
        m.set(0, 0, Poly2::t_pow(1));
        m.set(1, 1, p(&[1, 1]));
        let s = smith_normal_form(&m);
        assert_eq!(s.diag.diagonal(), vec![Poly2::one(), p(&[0, 1, 1])]);
        assert!(s.left.determinant().is_one());
        assert!(s.right.determinant().is_one());
        assert_eq!(s.left.mul(&s.diag).mul(&s.right), m);
    }

    #[test]
    fn rank_and_determinant() {
        let t = |k| Poly2::t_pow(k);
        let m = PolyMatrix::from_fn(2, 2, |i, j| t(i + j));
        assert_eq!(m.rank(), 1);
        assert!(m.determinant().is_zero());
        let id = PolyMatrix::identity(4);
        assert_eq!(id.rank(), 4);
        assert!(id.determinant().is_one());
        assert_eq!(PolyMatrix::zeros(0, 3).rank(), 0);
    }
}
