//! Integer matrices and sublattices of `Z^n`.
//!
//! Lattices are always stored by their row Hermite normal form: pivots
//! positive, entries above a pivot reduced into `[0, pivot)`, no zero rows.
//! Two lattices are equal iff their bases are equal entry by entry.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{check_dim, Result};

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows. Every row must have length `cols`.
    pub fn from_rows(cols: usize, rows: &[Vec<BigInt>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            check_dim(cols, r.len())?;
            data.extend(r.iter().cloned());
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Convenience constructor for small literal matrices.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        Self::from_rows(cols, &rows).expect("ragged literal matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        check_dim(self.cols, other.rows)?;
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn left_mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        check_dim(self.rows, v.len())?;
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o += a * self.get(i, j);
            }
        }
        Ok(out)
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        check_dim(self.cols, v.len())?;
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(BigInt::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    pub fn is_zero_row(&self, r: usize) -> bool {
        self.row(r).iter().all(Zero::is_zero)
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &IntMatrix) -> Result<IntMatrix> {
        check_dim(self.cols, other.cols)?;
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(IntMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Keeps the given rows, in order.
    pub fn select_rows(&self, rows: &[usize]) -> IntMatrix {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            data.extend(self.row(r).iter().cloned());
        }
        IntMatrix {
            rows: rows.len(),
            cols: self.cols,
            data,
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<BigInt> {
        check_dim(self.rows, self.cols)?;
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&r| !a.get(r, k).is_zero()) {
                    Some(r) => {
                        a.swap_rows(k, r);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        Ok(sign * a.get(n - 1, n - 1))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let v = self.get(src, c) * k;
            self.data[dst * self.cols + c] += v;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let v = self.get(r, src) * k;
            self.data[r * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -self.get(r, c);
            self.set(r, c, v);
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (i, x) in self.row(r).iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Row Hermite normal form. Returns `(H, U)` with `H = U * M`, `U`
/// unimodular; zero rows of `H` are at the bottom.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut p = 0;
    for col in 0..m.cols {
        if p == h.rows {
            break;
        }
        loop {
            let best = (p..h.rows)
                .filter(|&r| !h.get(r, col).is_zero())
                .min_by(|&a, &b| h.get(a, col).abs().cmp(&h.get(b, col).abs()));
            let Some(best) = best else { break };
            h.swap_rows(p, best);
            u.swap_rows(p, best);
            let mut done = true;
            for r in p + 1..h.rows {
                if h.get(r, col).is_zero() {
                    continue;
                }
                let q = -h.get(r, col).div_floor(h.get(p, col));
                h.add_row_multiple(r, p, &q);
                u.add_row_multiple(r, p, &q);
                if !h.get(r, col).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h.get(p, col).is_zero() {
            continue;
        }
        if h.get(p, col).is_negative() {
            h.negate_row(p);
            u.negate_row(p);
        }
        for r in 0..p {
            let q = -h.get(r, col).div_floor(h.get(p, col));
            h.add_row_multiple(r, p, &q);
            u.add_row_multiple(r, p, &q);
        }
        p += 1;
    }
    (h, u)
}

/// Smith normal form. Returns `(D, U, V)` with `D = U * M * V` diagonal,
/// non-negative, and `d_1 | d_2 | ...`.
pub fn snf(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let mut d = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut v = IntMatrix::identity(m.cols);
    let k = m.rows.min(m.cols);
    for t in 0..k {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for r in t..d.rows {
                for c in t..d.cols {
                    let x = d.get(r, c);
                    if x.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(br, bc)| x.abs() < d.get(br, bc).abs()) {
                        best = Some((r, c));
                    }
                }
            }
            let Some((r, c)) = best else {
                return (d, u, v);
            };
            d.swap_rows(t, r);
            u.swap_rows(t, r);
            d.swap_cols(t, c);
            v.swap_cols(t, c);

            let mut clean = true;
            for r in t + 1..d.rows {
                if d.get(r, t).is_zero() {
                    continue;
                }
                let q = -d.get(r, t).div_floor(d.get(t, t));
                d.add_row_multiple(r, t, &q);
                u.add_row_multiple(r, t, &q);
                clean &= d.get(r, t).is_zero();
            }
            for c in t + 1..d.cols {
                if d.get(t, c).is_zero() {
                    continue;
                }
                let q = -d.get(t, c).div_floor(d.get(t, t));
                d.add_col_multiple(c, t, &q);
                v.add_col_multiple(c, t, &q);
                clean &= d.get(t, c).is_zero();
            }
            if !clean {
                continue;
            }
            let pivot = d.get(t, t).clone();
            let offender = (t + 1..d.rows)
                .find(|&r| (t + 1..d.cols).any(|c| !d.get(r, c).is_multiple_of(&pivot)));
            match offender {
                Some(r) => {
                    d.add_row_multiple(t, r, &BigInt::one());
                    u.add_row_multiple(t, r, &BigInt::one());
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    (d, u, v)
}

/// The diagonal of a Smith normal form, truncated at the first zero.
pub fn invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    let (d, _, _) = snf(m);
    (0..d.rows.min(d.cols))
        .map(|i| d.get(i, i).clone())
        .take_while(|x| !x.is_zero())
        .collect()
}

/// `{a in Z^cols : M a^T = 0}`. Kernels of integer maps are saturated.
pub fn kernel(m: &IntMatrix) -> IntLattice {
    let (h, u) = hnf(&m.transpose());
    let gens: Vec<Vec<BigInt>> = (0..h.rows)
        .filter(|&r| h.is_zero_row(r))
        .map(|r| u.row(r).to_vec())
        .collect();
    IntLattice::from_generators(m.cols, &gens).expect("kernel rows have ambient length")
}

/// `(L tensor Q) cap Z^n` together with the index `[L_sat : L]`.
pub fn saturate(l: &IntLattice) -> (IntLattice, BigInt) {
    if l.rank() == 0 {
        return (l.clone(), BigInt::one());
    }
    let perp = kernel(&l.basis);
    let sat = kernel(&perp.basis);
    let index = invariant_factors(&l.basis)
        .into_iter()
        .fold(BigInt::one(), |acc, d| acc * d);
    (sat, index)
}

pub fn lattice_sum(a: &IntLattice, b: &IntLattice) -> Result<IntLattice> {
    check_dim(a.ambient_dim, b.ambient_dim)?;
    let stacked = a.basis.vstack(&b.basis)?;
    Ok(IntLattice::from_matrix(&stacked))
}

pub fn lattice_intersect(a: &IntLattice, b: &IntLattice) -> Result<IntLattice> {
    check_dim(a.ambient_dim, b.ambient_dim)?;
    let n = a.ambient_dim;
    if a.rank() == 0 || b.rank() == 0 {
        return Ok(IntLattice::trivial(n));
    }
    // (x, y) with x B_a + y B_b = 0 gives x B_a in both lattices
    let stacked = a.basis.vstack(&b.basis)?;
    let rel = kernel(&stacked.transpose());
    let ra = a.rank();
    let gens: Vec<Vec<BigInt>> = rel
        .basis_rows()
        .map(|c| a.basis.left_mul_vec(&c[..ra]).expect("rank matches"))
        .collect();
    IntLattice::from_generators(n, &gens)
}

/// A sublattice of `Z^n`, stored by its canonical row HNF basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntLattice {
    ambient_dim: usize,
    basis: IntMatrix,
}

impl IntLattice {
    pub fn trivial(n: usize) -> Self {
        IntLattice {
            ambient_dim: n,
            basis: IntMatrix::zero(0, n),
        }
    }

    pub fn full(n: usize) -> Self {
        IntLattice {
            ambient_dim: n,
            basis: IntMatrix::identity(n),
        }
    }

    pub fn from_generators(n: usize, gens: &[Vec<BigInt>]) -> Result<Self> {
        let m = IntMatrix::from_rows(n, gens)?;
        Ok(Self::from_matrix(&m))
    }

    pub fn from_i64(n: usize, gens: &[&[i64]]) -> Result<Self> {
        let gens: Vec<Vec<BigInt>> = gens
            .iter()
            .map(|g| g.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        Self::from_generators(n, &gens)
    }

    /// Lattice spanned by the rows of `m`.
    pub fn from_matrix(m: &IntMatrix) -> Self {
        let (h, _) = hnf(m);
        let keep: Vec<usize> = (0..h.rows).filter(|&r| !h.is_zero_row(r)).collect();
        IntLattice {
            ambient_dim: m.cols,
            basis: h.select_rows(&keep),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.basis.rows
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn basis_rows(&self) -> impl Iterator<Item = &[BigInt]> + '_ {
        (0..self.basis.rows).map(move |r| self.basis.row(r))
    }

    /// Always true: the constructors only produce HNF bases.
    pub fn is_canonical(&self) -> bool {
        true
    }

    fn pivot_col(&self, r: usize) -> usize {
        self.basis
            .row(r)
            .iter()
            .position(|x| !x.is_zero())
            .expect("basis rows are nonzero")
    }

    /// Coordinates of `v` in the HNF basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        if v.len() != self.ambient_dim {
            return None;
        }
        let mut residual = v.to_vec();
        let mut coords = Vec::with_capacity(self.rank());
        for r in 0..self.rank() {
            let pc = self.pivot_col(r);
            let (q, rem) = residual[pc].div_rem(self.basis.get(r, pc));
            if !rem.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for (c, x) in residual.iter_mut().enumerate() {
                    *x -= &q * self.basis.get(r, c);
                }
            }
            coords.push(q);
        }
        residual.iter().all(Zero::is_zero).then_some(coords)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_lattice(&self, other: &IntLattice) -> bool {
        other.ambient_dim == self.ambient_dim && other.basis_rows().all(|r| self.contains(r))
    }

    pub fn is_saturated(&self) -> bool {
        saturate(self).1.is_one()
    }

    /// Coordinates of every basis row of `self` in the basis of `outer`.
    pub fn coordinates_in(&self, outer: &IntLattice) -> Option<IntMatrix> {
        let rows: Option<Vec<Vec<BigInt>>> =
            self.basis_rows().map(|r| outer.coordinates(r)).collect();
        IntMatrix::from_rows(outer.rank(), &rows?).ok()
    }
}

impl fmt::Display for IntLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.basis)
    }
}

/// True iff the entries have gcd 1.
pub fn is_primitive(v: &[BigInt]) -> bool {
    content(v).is_one()
}

pub fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

pub fn to_big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}
