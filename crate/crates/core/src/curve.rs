//! Rational curves `t -> (f_1(t), ..., f_n(t))` in `G_m^n`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lattice::{kernel, IntLattice, IntMatrix};
use crate::poly::{coprime_basis, Poly, RatFunc};
use crate::scalar::{monomial_eval, CycloRat};
use crate::torus::{special_closure_of_coset, GeneralCoset, TorsionCoset, TorusPoint};

/// Largest exponent accepted by the expression parser.
pub const MAX_EXPONENT: i64 = 1000;

/// Parses an expression in `t` built from integers, `+ - * / ^` and
/// parentheses. Exponents are (possibly negative) integer literals.
pub fn parse_ratfunc(src: &str) -> Result<RatFunc> {
    let tokens = tokenize(src)?;
    let mut p = Parser { tokens, pos: 0 };
    let r = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(Error::Parse(format!(
            "unexpected {} in {src:?}",
            p.tokens[p.pos]
        )));
    }
    Ok(r)
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Var,
    Op(char),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "'{n}'"),
            Tok::Var => write!(f, "'t'"),
            Tok::Op(c) => write!(f, "'{c}'"),
        }
    }
}

fn tokenize(src: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push(Tok::Int(s.parse().expect("digits")));
            }
            't' => {
                out.push(Tok::Var);
                i += 1;
            }
            '+' | '-' | '*' | '/' | '^' | '(' | ')' => {
                out.push(Tok::Op(c));
                i += 1;
            }
            // unicode minus
            '\u{2212}' => {
                out.push(Tok::Op('-'));
                i += 1;
            }
            _ => {
                return Err(Error::Parse(format!(
                    "unexpected character {c:?} in {src:?}"
                )))
            }
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RatFunc> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RatFunc> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat('/') {
                acc = acc.div(&self.unary()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RatFunc> {
        if self.eat('-') {
            Ok(self.unary()?.neg())
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<RatFunc> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let parens = self.eat('(');
        let neg = self.eat('-');
        let k = match self.tokens.get(self.pos).cloned() {
            Some(Tok::Int(k)) => {
                self.pos += 1;
                k
            }
            other => {
                return Err(Error::Parse(format!(
                    "expected integer exponent, found {}",
                    other.map_or("end of input".to_string(), |t| t.to_string())
                )))
            }
        };
        if parens && !self.eat(')') {
            return Err(Error::Parse("unbalanced parentheses in exponent".into()));
        }
        let k: i64 = i64::try_from(k)
            .ok()
            .filter(|k| *k <= MAX_EXPONENT)
            .ok_or_else(|| Error::InvalidArgument(format!("exponent exceeds {MAX_EXPONENT}")))?;
        base.pow(if neg { -k } else { k })
    }

    fn atom(&mut self) -> Result<RatFunc> {
        match self.tokens.get(self.pos).cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(RatFunc::from_poly(Poly::constant(
                    BigRational::from_integer(n),
                )))
            }
            Some(Tok::Var) => {
                self.pos += 1;
                Ok(RatFunc::from_poly(Poly::var()))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                Ok(e)
            }
            Some(t) => Err(Error::Parse(format!("unexpected {t}"))),
            None => Err(Error::Parse("unexpected end of input".into())),
        }
    }
}

/// A nonconstant rational curve in `G_m^n` with its factorization data
/// computed once at construction.
#[derive(Clone, Debug)]
pub struct ParamCurve {
    coords: Vec<RatFunc>,
    basis: Vec<Poly>,
    // n x k, f_i = u_i * prod_j basis_j^{E_ij}
    exponents: IntMatrix,
    units: Vec<CycloRat>,
}

impl ParamCurve {
    pub fn new(coords: Vec<RatFunc>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidArgument(
                "curve needs at least one coordinate".into(),
            ));
        }
        if coords.iter().any(RatFunc::is_zero) {
            return Err(Error::Zero);
        }
        let n = coords.len();
        let mut polys: Vec<Poly> = coords.iter().map(|f| f.num().clone()).collect();
        polys.extend(coords.iter().map(|f| f.den().clone()));
        let (basis, rows, lcs) = coprime_basis(&polys)?;
        let k = basis.len();
        let mut exponents = IntMatrix::zero(n, k);
        for i in 0..n {
            for (j, (a, b)) in rows[i].iter().zip(&rows[n + i]).enumerate() {
                exponents.set(i, j, BigInt::from(i64::from(*a) - i64::from(*b)));
            }
        }
        if (0..n).all(|i| exponents.is_zero_row(i)) {
            return Err(Error::ConstantCurve);
        }
        let units = lcs[..n]
            .iter()
            .map(CycloRat::from_rational)
            .collect::<Result<Vec<_>>>()?;
        Ok(ParamCurve {
            coords,
            basis,
            exponents,
            units,
        })
    }

    /// Builds a curve from coordinate expressions.
    pub fn parse<S: AsRef<str>>(coords: &[S]) -> Result<Self> {
        let fs = coords
            .iter()
            .map(|s| parse_ratfunc(s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(fs)
    }

    pub fn ambient_dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[RatFunc] {
        &self.coords
    }

    /// Pairwise coprime monic polynomials generating every numerator and
    /// denominator.
    pub fn basis(&self) -> &[Poly] {
        &self.basis
    }

    pub fn exponents(&self) -> &IntMatrix {
        &self.exponents
    }

    pub fn units(&self) -> &[CycloRat] {
        &self.units
    }

    /// Leading coefficient of the numerator of `f_i`.
    pub fn unit_rational(&self, i: usize) -> BigRational {
        self.coords[i].num().leading_coeff()
    }

    /// Exponent vector `a * E` of `f^a` on the basis.
    pub fn basis_exponents(&self, a: &[BigInt]) -> Result<Vec<BigInt>> {
        self.exponents.left_mul_vec(a)
    }

    /// Lattice of `a` with `f^a` constant.
    pub fn ws_lattice(&self) -> IntLattice {
        kernel(&self.exponents.transpose())
    }

    pub fn closures(&self) -> Result<ClosureReport> {
        let lattice = self.ws_lattice();
        let values = lattice
            .basis_rows()
            .map(|b| monomial_eval(&self.units, b))
            .collect::<Result<Vec<_>>>()?;
        let ws = GeneralCoset::new(lattice, values)?;
        let sp = special_closure_of_coset(&ws);
        let defect = sp.dim() as i64 - 1;
        let weak_defect = ws.dim() as i64 - 1;
        Ok(ClosureReport {
            ws_closure: ws,
            sp_closure: sp,
            defect,
            weak_defect,
        })
    }

    pub fn evaluate_point(&self, t0: &BigRational) -> Result<TorusPoint> {
        let mut coords = Vec::with_capacity(self.coords.len());
        for (i, f) in self.coords.iter().enumerate() {
            let v = f
                .eval(t0)
                .filter(|v| !v.is_zero())
                .ok_or_else(|| Error::OffTorus {
                    param: t0.to_string(),
                    coord: i,
                })?;
            coords.push(CycloRat::from_rational(&v)?);
        }
        Ok(TorusPoint::new(coords))
    }

    /// Image under `x -> x^A` (row `i` of `A` gives the exponents of the
    /// `i`-th new coordinate).
    pub fn monomial_transform(&self, a: &IntMatrix) -> Result<ParamCurve> {
        crate::error::check_dim(self.ambient_dim(), a.cols())?;
        let mut coords = Vec::with_capacity(a.rows());
        for i in 0..a.rows() {
            let mut g = RatFunc::from_poly(Poly::one());
            for (j, f) in self.coords.iter().enumerate() {
                let e = i64::try_from(a.get(i, j))
                    .map_err(|_| Error::InvalidArgument("exponent too large".into()))?;
                if e != 0 {
                    g = g.mul(&f.pow(e)?);
                }
            }
            coords.push(g);
        }
        ParamCurve::new(coords)
    }
}

impl fmt::Display for ParamCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t -> (")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureReport {
    pub ws_closure: GeneralCoset,
    pub sp_closure: TorsionCoset,
    pub defect: i64,
    pub weak_defect: i64,
}

impl ClosureReport {
    /// Whether the curve is itself a torsion coset.
    pub fn is_special(&self) -> bool {
        self.defect == 0
    }

    pub fn is_weakly_special(&self) -> bool {
        self.weak_defect == 0
    }
}
