//! The group of cyclo-rationals `q * e^{2 pi i theta}` with `q` a positive
//! rational (kept factored) and `theta` in `Q/Z`.
//!
//! Multiplicative relations among such scalars are decidable: the magnitude
//! part is a free abelian group on the primes, the angle part is `Q/Z`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{check_dim, Error, Result};
use crate::lattice::{kernel, IntLattice, IntMatrix};

/// Default trial-division bound used by [`factor_rational`].
pub const DEFAULT_FACTOR_BOUND: u64 = 1_000_000;

/// A positive rational as a finite map prime -> nonzero exponent.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FactoredRational {
    exponents: BTreeMap<BigInt, BigInt>,
}

impl FactoredRational {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn is_one(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn exponents(&self) -> &BTreeMap<BigInt, BigInt> {
        &self.exponents
    }

    pub fn exponent(&self, p: &BigInt) -> BigInt {
        self.exponents.get(p).cloned().unwrap_or_default()
    }

    fn add_exponent(&mut self, p: &BigInt, e: &BigInt) {
        if e.is_zero() {
            return;
        }
        let v = self.exponent(p) + e;
        if v.is_zero() {
            self.exponents.remove(p);
        } else {
            self.exponents.insert(p.clone(), v);
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (p, e) in &other.exponents {
            out.add_exponent(p, e);
        }
        out
    }

    pub fn pow(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::one();
        }
        FactoredRational {
            exponents: self
                .exponents
                .iter()
                .map(|(p, e)| (p.clone(), e * k))
                .collect(),
        }
    }

    pub fn inv(&self) -> Self {
        self.pow(&-BigInt::one())
    }

    /// The unique `d`-th root, if every exponent is divisible by `d`.
    pub fn root(&self, d: &BigInt) -> Option<Self> {
        let mut exponents = BTreeMap::new();
        for (p, e) in &self.exponents {
            let (q, r) = e.div_rem(d);
            if !r.is_zero() {
                return None;
            }
            exponents.insert(p.clone(), q);
        }
        Some(FactoredRational { exponents })
    }

    pub fn to_rational(&self) -> BigRational {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for (p, e) in &self.exponents {
            let k = e.abs().to_u32().expect("exponent too large to expand");
            if e.is_positive() {
                num *= num_traits::pow(p.clone(), k as usize);
            } else {
                den *= num_traits::pow(p.clone(), k as usize);
            }
        }
        BigRational::new(num, den)
    }
}

impl fmt::Display for FactoredRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_rational())
    }
}

fn factor_positive(n: &BigInt, bound: u64, out: &mut FactoredRational, sign: i64) -> Result<()> {
    let original = n.clone();
    let mut n = n.clone();
    let mut d = BigInt::from(2u32);
    let bound_big = BigInt::from(bound);
    while &d * &d <= n && d <= bound_big {
        let mut e = 0i64;
        while n.is_multiple_of(&d) {
            n /= &d;
            e += 1;
        }
        if e > 0 {
            out.add_exponent(&d, &BigInt::from(e * sign));
        }
        d += if d == BigInt::from(2u32) { 1u32 } else { 2u32 };
    }
    if n > BigInt::one() {
        // every prime below d is gone; n is prime when d^2 > n
        if &d * &d <= n {
            return Err(Error::FactorBound {
                value: original.to_string(),
                cofactor: n.to_string(),
                bound,
            });
        }
        out.add_exponent(&n, &BigInt::from(sign));
    }
    Ok(())
}

/// Factors `num/den` into a sign and a prime-exponent map by trial division.
pub fn factor_rational(num: &BigInt, den: &BigInt) -> Result<(i8, FactoredRational)> {
    factor_rational_with_bound(num, den, DEFAULT_FACTOR_BOUND)
}

pub fn factor_rational_with_bound(
    num: &BigInt,
    den: &BigInt,
    bound: u64,
) -> Result<(i8, FactoredRational)> {
    if num.is_zero() || den.is_zero() {
        return Err(Error::Zero);
    }
    let sign = if num.is_negative() == den.is_negative() {
        1
    } else {
        -1
    };
    let mut mag = FactoredRational::one();
    factor_positive(&num.abs(), bound, &mut mag, 1)?;
    factor_positive(&den.abs(), bound, &mut mag, -1)?;
    Ok((sign, mag))
}

/// An element of `Q/Z`, stored as a reduced rational in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Angle(BigRational);

impl Default for Angle {
    fn default() -> Self {
        Angle::zero()
    }
}

impl Angle {
    pub fn new(r: BigRational) -> Self {
        let f = r.floor();
        Angle(r - f)
    }

    pub fn from_frac(a: i64, b: i64) -> Self {
        Angle::new(BigRational::new(a.into(), b.into()))
    }

    pub fn zero() -> Self {
        Angle(BigRational::zero())
    }

    pub fn half() -> Self {
        Angle::from_frac(1, 2)
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Order of `e^{2 pi i theta}` as a root of unity.
    pub fn order(&self) -> BigInt {
        self.0.denom().clone()
    }

    pub fn add(&self, other: &Angle) -> Angle {
        Angle::new(&self.0 + &other.0)
    }

    pub fn neg(&self) -> Angle {
        Angle::new(-&self.0)
    }

    pub fn scale(&self, k: &BigInt) -> Angle {
        Angle::new(&self.0 * BigRational::from_integer(k.clone()))
    }

    /// `(theta + k) / d`: one of the `d` solutions of `d x = theta`.
    pub fn divide(&self, d: &BigInt, k: &BigInt) -> Angle {
        Angle::new(
            (&self.0 + BigRational::from_integer(k.clone())) / BigRational::from_integer(d.clone()),
        )
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `q * e^{2 pi i theta}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycloRat {
    pub magnitude: FactoredRational,
    pub angle: Angle,
}

impl CycloRat {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn new(magnitude: FactoredRational, angle: Angle) -> Self {
        CycloRat { magnitude, angle }
    }

    pub fn root_of_unity(angle: Angle) -> Self {
        CycloRat {
            magnitude: FactoredRational::one(),
            angle,
        }
    }

    /// Nonzero rational, sign folded into angle 1/2.
    pub fn from_rational(r: &BigRational) -> Result<Self> {
        let (sign, magnitude) = factor_rational(r.numer(), r.denom())?;
        let angle = if sign < 0 {
            Angle::half()
        } else {
            Angle::zero()
        };
        Ok(CycloRat { magnitude, angle })
    }

    pub fn from_int(n: i64) -> Result<Self> {
        Self::from_rational(&BigRational::from_integer(n.into()))
    }

    pub fn from_frac(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Zero);
        }
        Self::from_rational(&BigRational::new(num.into(), den.into()))
    }

    pub fn is_torsion(&self) -> bool {
        self.magnitude.is_one()
    }

    pub fn is_one(&self) -> bool {
        self.magnitude.is_one() && self.angle.is_zero()
    }

    pub fn mul(&self, other: &Self) -> Self {
        CycloRat {
            magnitude: self.magnitude.mul(&other.magnitude),
            angle: self.angle.add(&other.angle),
        }
    }

    pub fn inv(&self) -> Self {
        CycloRat {
            magnitude: self.magnitude.inv(),
            angle: self.angle.neg(),
        }
    }

    pub fn pow(&self, k: &BigInt) -> Self {
        CycloRat {
            magnitude: self.magnitude.pow(k),
            angle: self.angle.scale(k),
        }
    }

    /// The `k`-th of the `d` solutions of `x^d = self`, when the magnitude
    /// has a rational `d`-th root.
    pub fn root(&self, d: &BigInt, k: &BigInt) -> Option<Self> {
        Some(CycloRat {
            magnitude: self.magnitude.root(d)?,
            angle: self.angle.divide(d, k),
        })
    }

    /// The rational value, when the angle is 0 or 1/2.
    pub fn to_rational(&self) -> Option<BigRational> {
        let q = self.magnitude.to_rational();
        if self.angle.is_zero() {
            Some(q)
        } else if self.angle == Angle::half() {
            Some(-q)
        } else {
            None
        }
    }
}

impl fmt::Display for CycloRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.magnitude)?;
        if !self.angle.is_zero() {
            write!(f, "@{}", self.angle)?;
        }
        Ok(())
    }
}

pub(crate) fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(
            BigInt::from_str(s).map_err(|_| bad())?,
        )),
    }
}

impl FromStr for CycloRat {
    type Err = Error;

    /// `"num/den@a/b"`; the angle part is optional and the magnitude may
    /// carry a sign.
    fn from_str(s: &str) -> Result<Self> {
        let (mag, ang) = match s.split_once('@') {
            Some((m, a)) => (m, Some(a)),
            None => (s, None),
        };
        let q = parse_rational(mag)?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero scalar {s:?}")));
        }
        let base = CycloRat::from_rational(&q)?;
        let angle = match ang {
            Some(a) => Angle::new(parse_rational(a)?),
            None => Angle::zero(),
        };
        Ok(base.mul(&CycloRat::root_of_unity(angle)))
    }
}

/// `prod scalars_i ^ a_i`.
pub fn monomial_eval(scalars: &[CycloRat], a: &[BigInt]) -> Result<CycloRat> {
    check_dim(scalars.len(), a.len())?;
    Ok(scalars
        .iter()
        .zip(a)
        .filter(|(_, e)| !e.is_zero())
        .fold(CycloRat::one(), |acc, (s, e)| acc.mul(&s.pow(e))))
}

/// Sub-lattice of `l` on which the angle character vanishes. `angles[j]` is
/// the angle of basis row `j`.
pub(crate) fn angle_kernel(l: &IntLattice, angles: &[Angle]) -> IntLattice {
    let n = l.ambient_dim();
    let r = l.rank();
    if r == 0 {
        return l.clone();
    }
    let common = angles
        .iter()
        .fold(BigInt::one(), |acc, a| acc.lcm(a.value().denom()));
    // x with sum x_j c_j + y * common = 0
    let mut row: Vec<BigInt> = angles
        .iter()
        .map(|a| a.value().numer() * (&common / a.value().denom()))
        .collect();
    row.push(common);
    let rel = kernel(&IntMatrix::from_rows(r + 1, &[row]).expect("row length"));
    let coords: Vec<Vec<BigInt>> = rel.basis_rows().map(|v| v[..r].to_vec()).collect();
    let gens: Vec<Vec<BigInt>> = coords
        .iter()
        .map(|x| l.basis().left_mul_vec(x).expect("rank matches"))
        .collect();
    IntLattice::from_generators(n, &gens).expect("ambient length")
}

/// Magnitude exponent matrix: one row per prime, one column per scalar.
pub(crate) fn magnitude_matrix(scalars: &[CycloRat]) -> IntMatrix {
    let primes: std::collections::BTreeSet<&BigInt> = scalars
        .iter()
        .flat_map(|s| s.magnitude.exponents().keys())
        .collect();
    let rows: Vec<Vec<BigInt>> = primes
        .iter()
        .map(|p| scalars.iter().map(|s| s.magnitude.exponent(p)).collect())
        .collect();
    IntMatrix::from_rows(scalars.len(), &rows).expect("row length")
}

/// `(exact, torsion)`: vectors `a` with `prod s_i^{a_i}` equal to 1,
/// respectively a root of unity.
pub fn relation_lattices(scalars: &[CycloRat]) -> (IntLattice, IntLattice) {
    let torsion = kernel(&magnitude_matrix(scalars));
    let angles: Vec<Angle> = torsion
        .basis_rows()
        .map(|b| monomial_eval(scalars, b).expect("length").angle)
        .collect();
    let exact = angle_kernel(&torsion, &angles);
    (exact, torsion)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::to_big;

    fn fr(pairs: &[(i64, i64)]) -> FactoredRational {
        let mut f = FactoredRational::one();
        for &(p, e) in pairs {
            f.add_exponent(&p.into(), &e.into());
        }
        f
    }

    #[test]
    fn factor_examples() {
        let (s, m) = factor_rational(&12.into(), &5.into()).unwrap();
        assert_eq!(s, 1);
        assert_eq!(m, fr(&[(2, 2), (3, 1), (5, -1)]));
        let (s, m) = factor_rational(&1.into(), &1.into()).unwrap();
        assert_eq!((s, m.is_one()), (1, true));
        let (s, m) = factor_rational(&(-8).into(), &27.into()).unwrap();
        assert_eq!(s, -1);
        assert_eq!(m, fr(&[(2, 3), (3, -3)]));
    }

    #[test]
    fn factor_rejects_zero() {
        assert_eq!(factor_rational(&0.into(), &1.into()), Err(Error::Zero));
        assert_eq!(factor_rational(&1.into(), &0.into()), Err(Error::Zero));
    }

    #[test]
    fn factor_bound_is_enforced() {
        // 1000003 * 1000033, both prime, above a bound of 1000
        let n = BigInt::from(1_000_003u64 * 1_000_033u64);
        assert!(matches!(
            factor_rational_with_bound(&n, &1.into(), 1000),
            Err(Error::FactorBound { .. })
        ));
        // a single large prime cofactor below bound^2 is accepted
        let (_, m) =
            factor_rational_with_bound(&BigInt::from(2 * 1_000_003u64), &1.into(), 1009).unwrap();
        assert_eq!(m, fr(&[(2, 1), (1_000_003, 1)]));
    }

    #[test]
    fn monomial_eval_examples() {
        let s = [
            CycloRat::from_int(2).unwrap(),
            CycloRat::from_int(3).unwrap(),
        ];
        assert_eq!(
            monomial_eval(&s, &to_big(&[1, -1])).unwrap(),
            CycloRat::from_frac(2, 3).unwrap()
        );
        let i = CycloRat::root_of_unity(Angle::from_frac(1, 4));
        assert_eq!(
            monomial_eval(&[i], &to_big(&[2])).unwrap(),
            CycloRat::from_int(-1).unwrap()
        );
        let s = [
            CycloRat::from_int(4).unwrap(),
            CycloRat::from_int(2).unwrap(),
        ];
        assert!(monomial_eval(&s, &to_big(&[1, -2])).unwrap().is_one());
        assert!(monomial_eval(&s, &to_big(&[1])).is_err());
    }

    #[test]
    fn relation_lattice_examples() {
        let s: Vec<CycloRat> = [2, 4, 8]
            .iter()
            .map(|&x| CycloRat::from_int(x).unwrap())
            .collect();
        let (exact, tors) = relation_lattices(&s);
        assert_eq!(tors, kernel(&IntMatrix::from_i64(&[&[1, 2, 3]])));
        assert_eq!(exact, tors);
        assert_eq!(tors.rank(), 2);

        let s = [
            CycloRat::from_int(2).unwrap(),
            CycloRat::from_int(3).unwrap(),
        ];
        let (exact, tors) = relation_lattices(&s);
        assert_eq!((exact.rank(), tors.rank()), (0, 0));

        let s = [
            CycloRat::from_int(-1).unwrap(),
            CycloRat::from_int(2).unwrap(),
        ];
        let (exact, tors) = relation_lattices(&s);
        assert_eq!(tors, IntLattice::from_i64(2, &[&[1, 0]]).unwrap());
        assert_eq!(exact, IntLattice::from_i64(2, &[&[2, 0]]).unwrap());
    }

    #[test]
    fn text_form_round_trips() {
        let c: CycloRat = "-3/4".parse().unwrap();
        assert_eq!(c.angle, Angle::half());
        assert_eq!(c.to_string(), "3/4@1/2");
        let c: CycloRat = "2@1/3".parse().unwrap();
        assert_eq!(c.to_string().parse::<CycloRat>().unwrap(), c);
        let c: CycloRat = "-1@1/2".parse().unwrap();
        assert!(c.is_one());
        assert!("0".parse::<CycloRat>().is_err());
        assert!("1/0".parse::<CycloRat>().is_err());
        assert!("x".parse::<CycloRat>().is_err());
    }
}
