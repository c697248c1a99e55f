//! Dense univariate polynomials and rational functions over `Q`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::modp;

/// Polynomial in one variable with rational coefficients, lowest degree
/// first, no trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// Integer coefficients, lowest degree first.
    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// The variable `t`.
    pub fn var() -> Self {
        Self::from_i64(&[0, 1])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial has none.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree, with 0 for the zero polynomial.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading_coeff(&self) -> BigRational {
        self.coeffs
            .last()
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Monic associate; zero stays zero.
    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(&self.leading_coeff().recip())
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff().is_one()
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Euclidean division. Panics on division by zero.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.deg();
        if self.coeffs.len() < d.coeffs.len() {
            return (Poly::zero(), self.clone());
        }
        let inv_lc = d.leading_coeff().recip();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigRational::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = &r[i + dd] * &inv_lc;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                if !dc.is_zero() {
                    r[i + j] -= &c * dc;
                }
            }
            q[i] = c;
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.div_rem(d).1
    }

    /// Quotient of an exact division; `None` if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor (zero iff both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return if self.is_zero() {
                other.monic()
            } else {
                self.monic()
            };
        }
        if self.deg().min(other.deg()) > 2 {
            if let Some(g) = self.modular_gcd(other) {
                return g;
            }
        }
        let mut a = self.monic();
        let mut b = other.monic();
        while !b.is_zero() {
            let r = a.rem(&b).monic();
            a = b;
            b = r;
        }
        a
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(i.into()))
                .collect(),
        )
    }

    /// Monic product of the distinct irreducible factors.
    pub fn squarefree_part(&self) -> Poly {
        if self.is_constant() {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.exact_div(&g).expect("gcd divides").monic()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// Composition `self(inner)`.
    pub fn compose(&self, inner: &Poly) -> Poly {
        self.coeffs.iter().rev().fold(Poly::zero(), |acc, c| {
            &(&acc * inner) + &Poly::constant(c.clone())
        })
    }

    /// Primitive integer associate with positive leading coefficient.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return vec![];
        }
        let den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        let mut g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if ints.last().expect("nonzero").is_negative() {
            g = -g;
        }
        ints.into_iter().map(|c| c / &g).collect()
    }

    /// Whether `d` divides `self` in `Q[t]`. Runs over the integers: a
    /// primitive divisor of an integer polynomial leaves an integer quotient.
    pub fn divisible_by(&self, d: &Poly) -> bool {
        assert!(!d.is_zero(), "polynomial division by zero");
        if self.is_zero() {
            return true;
        }
        if self.deg() < d.deg() {
            return false;
        }
        let mut r = self.primitive_integer();
        let b = d.primitive_integer();
        let db = b.len() - 1;
        let lc = &b[db];
        while r.len() > db {
            let top = r.len() - 1;
            let (q, rem) = r[top].div_rem(lc);
            if !rem.is_zero() {
                return false;
            }
            if !q.is_zero() {
                let shift = top - db;
                for (rv, bv) in r[shift..].iter_mut().zip(&b) {
                    *rv -= &q * bv;
                }
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        r.is_empty()
    }

    /// Reduction modulo 2^61 - 1; `None` if a denominator vanishes there.
    pub fn reduce_mod(&self) -> Option<Vec<u64>> {
        let pb = BigInt::from(modp::P);
        self.coeffs
            .iter()
            .map(|c| {
                let n = c.numer().mod_floor(&pb).to_u64().expect("below p");
                let d = c.denom().mod_floor(&pb).to_u64().expect("below p");
                modp::div(n, d)
            })
            .collect()
    }

    /// Monic polynomial with the given residues as coefficients, if every
    /// one of them lifts to a small fraction.
    fn lift_monic(res: &[u64]) -> Option<Poly> {
        let coeffs = res
            .iter()
            .map(|&r| {
                modp::rational_reconstruct(r).map(|(n, d)| BigRational::new(n.into(), d.into()))
            })
            .collect::<Option<Vec<_>>>()?;
        Some(Poly::new(coeffs))
    }

    /// Gcd through one prime: exact when the reductions keep their degrees,
    /// certified by trial division of the lifted candidate.
    fn modular_gcd(&self, other: &Poly) -> Option<Poly> {
        let a = self.reduce_mod()?;
        let b = other.reduce_mod()?;
        if a.len() != self.coeffs.len() || b.len() != other.coeffs.len() {
            return None;
        }
        let g = modp::poly_gcd(&a, &b);
        if g.len() == 1 {
            return Some(Poly::one());
        }
        let cand = Self::lift_monic(&g)?;
        (self.divisible_by(&cand) && other.divisible_by(&cand)).then_some(cand)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new(
            (0..n)
                .map(|i| match (self.coeffs.get(i), o.coeffs.get(i)) {
                    (Some(a), Some(b)) => a + b,
                    (Some(a), None) => a.clone(),
                    (None, Some(b)) => b.clone(),
                    (None, None) => unreachable!(),
                })
                .collect(),
        )
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        self + &(-o)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Poly::new(out)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let coeff = if a.is_one() && i > 0 {
                String::new()
            } else if i > 0 {
                format!("{a}*")
            } else {
                a.to_string()
            };
            match i {
                0 => write!(f, "{coeff}")?,
                1 => write!(f, "{coeff}t")?,
                _ => write!(f, "{coeff}t^{i}")?,
            }
        }
        Ok(())
    }
}

/// `num / den` with `den` monic and coprime to `num`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if num.is_zero() {
            return Ok(RatFunc {
                num,
                den: Poly::one(),
            });
        }
        let g = num.gcd(&den);
        let num = num.exact_div(&g).expect("gcd divides");
        let den = den.exact_div(&g).expect("gcd divides");
        let lc = den.leading_coeff();
        Ok(RatFunc {
            num: num.scale(&lc.recip()),
            den: den.monic(),
        })
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        let num = &(&self.num * &o.den) + &(&o.num * &self.den);
        RatFunc::new(num, &self.den * &o.den).expect("nonzero denominator")
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(&self.num * &o.num, &self.den * &o.den).expect("nonzero denominator")
    }

    pub fn inv(&self) -> Result<RatFunc> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &RatFunc) -> Result<RatFunc> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, k: i64) -> Result<RatFunc> {
        let e = u32::try_from(k.unsigned_abs())
            .map_err(|_| Error::InvalidArgument(format!("exponent {k} too large")))?;
        let p = RatFunc {
            num: self.num.pow(e),
            den: self.den.pow(e),
        };
        if k < 0 {
            p.inv()
        } else {
            Ok(p)
        }
    }

    /// Value at `x`, or `None` at a pole.
    pub fn eval(&self, x: &BigRational) -> Option<BigRational> {
        let d = self.den.eval(x);
        (!d.is_zero()).then(|| self.num.eval(x) / d)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one_poly() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl Poly {
    fn is_one_poly(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }
}

/// `(basis, exponents, units)` as returned by [`coprime_basis`].
pub type CoprimeBasis = (Vec<Poly>, Vec<Vec<u32>>, Vec<BigRational>);

/// Gcd-free basis of a list of nonzero polynomials: pairwise coprime monic
/// nonconstant `basis`, an exponent matrix with `inputs[i] = units[i] *
/// prod_j basis[j]^exponents[i][j]`, and the `units` (leading coefficients).
pub fn coprime_basis(polys: &[Poly]) -> Result<CoprimeBasis> {
    if polys.iter().any(Poly::is_zero) {
        return Err(Error::ZeroPolynomial);
    }
    let units: Vec<BigRational> = polys.iter().map(Poly::leading_coeff).collect();
    let mut set: Vec<Poly> = Vec::new();
    for p in polys {
        let m = p.monic();
        if !m.is_constant() && !set.contains(&m) {
            set.push(m);
        }
    }
    // refine until pairwise coprime: replace x, y by g, x/g, y/g
    'outer: loop {
        for i in 0..set.len() {
            for j in i + 1..set.len() {
                let g = set[i].gcd(&set[j]);
                if g.is_constant() {
                    continue;
                }
                let x = set[i].exact_div(&g).expect("gcd divides");
                let y = set[j].exact_div(&g).expect("gcd divides");
                set.remove(j);
                set.remove(i);
                for q in [g, x, y] {
                    let q = q.monic();
                    if !q.is_constant() && !set.contains(&q) {
                        set.push(q);
                    }
                }
                continue 'outer;
            }
        }
        break;
    }
    set.sort_by(|a, b| a.deg().cmp(&b.deg()).then_with(|| a.cmp(b)));
    let mut exponents = Vec::with_capacity(polys.len());
    for p in polys {
        let mut rest = p.monic();
        let mut row = Vec::with_capacity(set.len());
        for b in &set {
            let mut e = 0u32;
            while let Some(q) = rest.exact_div(b) {
                rest = q;
                e += 1;
            }
            row.push(e);
        }
        debug_assert!(rest.is_constant(), "basis generates every input");
        exponents.push(row);
    }
    Ok((set, exponents, units))
}

pub fn euler_phi(mut d: u64) -> u64 {
    let mut result = d;
    let mut p = 2;
    while p * p <= d {
        if d.is_multiple_of(p) {
            while d.is_multiple_of(p) {
                d /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if d > 1 {
        result -= result / d;
    }
    result
}

/// Cyclotomic polynomials `Phi_1, ..., Phi_n` (index 0 unused).
pub fn cyclotomic_table(n: u64) -> Vec<Poly> {
    let mut table = vec![Poly::zero()];
    for d in 1..=n {
        let mut p = &Poly::var().pow(d as u32) - &Poly::one();
        for e in 1..d {
            if d % e == 0 {
                p = p.exact_div(&table[e as usize]).expect("cyclotomic factor");
            }
        }
        table.push(p);
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn arithmetic() {
        let a = Poly::from_i64(&[-1, 0, 1]);
        let b = Poly::from_i64(&[-1, 1]);
        let (quo, r) = a.div_rem(&b);
        assert_eq!(quo, Poly::from_i64(&[1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&b), b);
        assert_eq!(
            Poly::from_i64(&[1, 1]).pow(3),
            Poly::from_i64(&[1, 3, 3, 1])
        );
        assert_eq!(a.eval(&q(3, 1)), q(8, 1));
        assert_eq!((&a - &a), Poly::zero());
        assert_eq!(a.to_string(), "t^2 - 1");
        assert_eq!(Poly::new(vec![q(1, 2), q(-3, 1)]).to_string(), "-3*t + 1/2");
    }

    #[test]
    fn cyclotomic_polynomials() {
        let t = cyclotomic_table(12);
        assert_eq!(t[1], Poly::from_i64(&[-1, 1]));
        assert_eq!(t[6], Poly::from_i64(&[1, -1, 1]));
        assert_eq!(t[12], Poly::from_i64(&[1, 0, -1, 0, 1]));
        for d in 1..=12u64 {
            assert_eq!(t[d as usize].deg() as u64, euler_phi(d));
        }
    }

    #[test]
    fn modular_and_euclidean_gcd_agree() {
        let a = &Poly::from_i64(&[3, -1, 7, 2]) * &Poly::from_i64(&[1, 0, 0, 5, 1]);
        let b = &Poly::from_i64(&[3, -1, 7, 2]) * &Poly::from_i64(&[-4, 1, 1, 1]);
        let g = a.gcd(&b);
        assert_eq!(g, Poly::from_i64(&[3, -1, 7, 2]).monic());
        assert!(Poly::from_i64(&[1, 0, 0, 1])
            .gcd(&Poly::from_i64(&[2, 0, 0, 0, 1]))
            .is_one_poly());
    }

    #[test]
    fn integer_divisibility() {
        let a = &Poly::new(vec![BigRational::new(1.into(), 3.into()), q(2, 1)])
            * &Poly::from_i64(&[5, 0, 7]);
        assert!(a.divisible_by(&Poly::from_i64(&[5, 0, 7])));
        assert!(a.divisible_by(&Poly::from_i64(&[1, 6])));
        assert!(!a.divisible_by(&Poly::from_i64(&[1, 7])));
        assert!(!Poly::from_i64(&[1, 1]).divisible_by(&Poly::from_i64(&[1, 0, 1])));
    }

    #[test]
    fn squarefree() {
        // (t-1)^2 (t+2)
        let p = &Poly::from_i64(&[-1, 1]).pow(2) * &Poly::from_i64(&[2, 1]);
        assert_eq!(p.squarefree_part(), Poly::from_i64(&[-2, 1, 1]));
    }

    #[test]
    fn gcd_of_cyclotomic_shapes() {
        let t6 = &Poly::var().pow(6) - &Poly::one();
        let u = Poly::from_i64(&[1, -1]).pow(6);
        let g = t6.gcd(&(&u - &Poly::one()));
        assert_eq!(g, Poly::from_i64(&[1, -1, 1]));
    }

    #[test]
    fn ratfunc_normalizes() {
        let f = RatFunc::new(Poly::from_i64(&[-1, 0, 1]), Poly::from_i64(&[-2, 2])).unwrap();
        assert_eq!(f.num(), &Poly::new(vec![q(1, 2), q(1, 2)]));
        assert_eq!(f.den(), &Poly::one());
        assert!(RatFunc::new(Poly::one(), Poly::zero()).is_err());
        let g = f.pow(-2).unwrap();
        assert_eq!(g.eval(&q(1, 1)), Some(q(1, 1)));
        assert_eq!(g.eval(&q(-1, 1)), None);
    }

    fn exponent_of(basis: &[Poly], rows: &[Vec<u32>], input: usize, b: &Poly) -> u32 {
        let j = basis.iter().position(|x| x == b).expect("basis element");
        rows[input][j]
    }

    #[test]
    fn coprime_basis_examples() {
        let t = Poly::var();
        let tm1 = Poly::from_i64(&[-1, 1]);
        let tp1 = Poly::from_i64(&[1, 1]);

        let (basis, rows, units) =
            coprime_basis(&[Poly::from_i64(&[-1, 0, 1]), tm1.clone()]).unwrap();
        assert_eq!(basis.len(), 2);
        assert_eq!(exponent_of(&basis, &rows, 0, &tm1), 1);
        assert_eq!(exponent_of(&basis, &rows, 0, &tp1), 1);
        assert_eq!(exponent_of(&basis, &rows, 1, &tm1), 1);
        assert_eq!(exponent_of(&basis, &rows, 1, &tp1), 0);
        assert_eq!(units, vec![q(1, 1), q(1, 1)]);

        let (basis, rows, _) = coprime_basis(&[t.clone(), t.clone()]).unwrap();
        assert_eq!(basis, vec![t.clone()]);
        assert_eq!(rows, vec![vec![1], vec![1]]);

        let (basis, rows, _) = coprime_basis(&[Poly::from_i64(&[0, -1, 1]), t.clone()]).unwrap();
        assert_eq!(basis.len(), 2);
        assert_eq!(exponent_of(&basis, &rows, 0, &t), 1);
        assert_eq!(exponent_of(&basis, &rows, 0, &tm1), 1);
        assert_eq!(exponent_of(&basis, &rows, 1, &t), 1);
        assert_eq!(exponent_of(&basis, &rows, 1, &tm1), 0);

        assert_eq!(coprime_basis(&[Poly::zero()]), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn coprime_basis_handles_powers() {
        // t^2 and t (t+1): the refinement must not produce t twice
        let (basis, rows, _) =
            coprime_basis(&[Poly::var().pow(2), Poly::from_i64(&[0, 1, 1])]).unwrap();
        assert_eq!(basis, vec![Poly::var(), Poly::from_i64(&[1, 1])]);
        assert_eq!(rows, vec![vec![2, 0], vec![1, 1]]);
    }
}
