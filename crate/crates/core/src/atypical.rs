//! Bounded search for points of a curve lying on torsion cosets of
//! codimension at least 2, and ZP evidence reports built from it.
//!
//! A parameter value `t0` is found when two independent characters `a`, `b`
//! with `|a|_inf, |b|_inf <= B` take values at `t0` that are roots of unity
//! of order at most `N`. Writing `f^a = p_a / q_a`, the values of `t` where
//! `f^a(t)` is a primitive `d`-th root of unity are the roots of the
//! homogenized cyclotomic polynomial `S_{a,d} = q_a^phi(d) Phi_d(p_a / q_a)`,
//! so it suffices to intersect these for `d <= N`. Pairs are screened with
//! one gcd modulo a large prime before any exact gcd is taken.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::curve::{ClosureReport, ParamCurve};
use crate::error::{check_dim, Error, Result};
use crate::lattice::{is_primitive, saturate, IntLattice};
use crate::modp;
use crate::poly::{cyclotomic_table, Poly};

/// `p^m - q^m` where `f^a = p / q` in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationPoly {
    pub witness: Vec<BigInt>,
    pub order: u64,
    pub poly: Poly,
}

/// Numerator and denominator of `f^a`, with the constant split so that
/// positive exponents go to `p` and negative ones to `q`.
fn split_monomial(c: &ParamCurve, a: &[BigInt]) -> Result<(Poly, Poly)> {
    check_dim(c.ambient_dim(), a.len())?;
    let e = c.basis_exponents(a)?;
    if e.iter().all(Zero::is_zero) {
        return Err(Error::RelationInClosure(fmt_vec(a)));
    }
    let mut cp = BigRational::one();
    let mut cq = BigRational::one();
    for (i, ai) in a.iter().enumerate() {
        let k = exponent_i32(ai)?;
        let u = c.unit_rational(i);
        if k > 0 {
            cp *= u.pow(k);
        } else if k < 0 {
            cq *= u.pow(-k);
        }
    }
    let mut p = Poly::constant(cp);
    let mut q = Poly::constant(cq);
    for (b, ej) in c.basis().iter().zip(&e) {
        let k = exponent_i32(ej)?;
        if k > 0 {
            p = &p * &b.pow(k as u32);
        } else if k < 0 {
            q = &q * &b.pow((-k) as u32);
        }
    }
    Ok((p, q))
}

fn exponent_i32(x: &BigInt) -> Result<i32> {
    i32::try_from(x)
        .ok()
        .filter(|k| k.unsigned_abs() <= 100_000)
        .ok_or_else(|| Error::InvalidArgument(format!("exponent {x} too large")))
}

pub(crate) fn fmt_vec(a: &[BigInt]) -> String {
    let parts: Vec<String> = a.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

pub fn relation_poly(c: &ParamCurve, a: &[BigInt], m: i64) -> Result<RelationPoly> {
    if m <= 0 {
        return Err(Error::NonPositiveOrder);
    }
    if !is_primitive(a) {
        return Err(Error::NotPrimitive(fmt_vec(a)));
    }
    let (p, q) = split_monomial(c, a)?;
    let k = u32::try_from(m).map_err(|_| Error::InvalidArgument("order too large".into()))?;
    let poly = &p.pow(k) - &q.pow(k);
    if poly.is_zero() {
        // only reachable when f^a is a nonzero constant, excluded above
        return Err(Error::RelationInClosure(fmt_vec(a)));
    }
    Ok(RelationPoly {
        witness: a.to_vec(),
        order: m as u64,
        poly,
    })
}

/// One witness of a record: a character and the exact order of its value
/// at every root of the defining polynomial.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Witness {
    pub vector: Vec<BigInt>,
    pub order: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtypicalRecord {
    /// Squarefree, monic, coprime to every numerator and denominator.
    pub defining_poly: Poly,
    pub witnessed_lattice: IntLattice,
    /// `n - rank(witnessed_lattice)`, an upper bound for the defect of
    /// each root.
    pub defect_upper_bound: i64,
    pub witnesses: Vec<Witness>,
}

/// `Phi_d(p, q)` homogenized to degree `phi(d) * max(deg p, deg q)`.
fn homogenized(phi: &Poly, p: &Poly, q: &Poly) -> Poly {
    let deg = phi.deg();
    let mut qpow = vec![Poly::one()];
    for k in 1..=deg {
        qpow.push(&qpow[k - 1] * q);
    }
    let mut out = Poly::zero();
    let mut ppow = Poly::one();
    for (k, c) in phi.coeffs().iter().enumerate() {
        if !c.is_zero() {
            out = &out + &(&ppow * &qpow[deg - k]).scale(c);
        }
        ppow = &ppow * p;
    }
    out
}

fn homogenized_mod(phi: &[u64], p: &[u64], q: &[u64]) -> Vec<u64> {
    let deg = phi.len() - 1;
    let mut qpow = vec![vec![1u64]];
    for k in 1..=deg {
        qpow.push(modp::poly_mul(&qpow[k - 1], q));
    }
    let mut out = Vec::new();
    let mut ppow = vec![1u64];
    for (k, &c) in phi.iter().enumerate() {
        if c != 0 {
            out = modp::poly_add(
                &out,
                &modp::poly_scale(&modp::poly_mul(&ppow, &qpow[deg - k]), c),
            );
        }
        ppow = modp::poly_mul(&ppow, p);
    }
    out
}

struct Character {
    vector: Vec<BigInt>,
    p: Poly,
    q: Poly,
    // S_{a,d} mod P for d = 1..=N (index d - 1); None when the reduction
    // loses degree, in which case the filter is not trusted
    s_mod: Vec<Option<Vec<u64>>>,
    t_mod: Option<Vec<u64>>,
    exact: Vec<OnceLock<Poly>>,
}

impl Character {
    fn build(
        vector: Vec<BigInt>,
        p: Poly,
        q: Poly,
        cyclo: &[Poly],
        cyclo_mod: &[Vec<u64>],
    ) -> Self {
        let n = cyclo.len() - 1;
        let exact: Vec<OnceLock<Poly>> = (0..n).map(|_| OnceLock::new()).collect();
        let pm = p.reduce_mod();
        let qm = q.reduce_mod();
        let top = p.deg().max(q.deg());
        let mut s_mod = Vec::with_capacity(n);
        for d in 1..=n {
            let expected = match d {
                1 | 2 => {
                    let s = homogenized(&cyclo[d], &p, &q);
                    let deg = s.deg();
                    let _ = exact[d - 1].set(s);
                    deg
                }
                _ => top * cyclo[d].deg(),
            };
            let s = match (&pm, &qm) {
                (Some(pm), Some(qm))
                    if pm.len() == p.coeffs().len() && qm.len() == q.coeffs().len() =>
                {
                    Some(homogenized_mod(&cyclo_mod[d], pm, qm))
                }
                _ => None,
            };
            s_mod.push(s.filter(|s| s.len() == expected + 1));
        }
        let t_mod = s_mod.iter().try_fold(vec![1u64], |acc, s| {
            s.as_ref().map(|s| modp::poly_mul(&acc, s))
        });
        Character {
            vector,
            p,
            q,
            s_mod,
            t_mod,
            exact,
        }
    }

    fn exact(&self, d: usize, cyclo: &[Poly]) -> &Poly {
        self.exact[d - 1].get_or_init(|| homogenized(&cyclo[d], &self.p, &self.q))
    }

    /// Orders whose polynomial may share a root with `g` (mod P).
    fn candidate_orders(&self, g: Option<&Vec<u64>>) -> Vec<usize> {
        (1..=self.s_mod.len())
            .filter(|&d| match (g, &self.s_mod[d - 1]) {
                (Some(g), Some(s)) => modp::gcd_degree(s, g) > 0,
                _ => true,
            })
            .collect()
    }
}

/// Primitive vectors with first nonzero entry positive and entries in
/// `[-b, b]`, in lexicographic order.
pub fn box_vectors(n: usize, b: u32) -> Vec<Vec<BigInt>> {
    let b = i64::from(b);
    let mut out = Vec::new();
    let mut cur = vec![-b; n];
    loop {
        if let Some(first) = cur.iter().find(|&&x| x != 0) {
            if *first > 0 {
                let g = cur.iter().fold(0i64, |acc, &x| acc.gcd(&x));
                if g == 1 {
                    out.push(cur.iter().map(|&x| BigInt::from(x)).collect());
                }
            }
        }
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < b {
                cur[i] += 1;
                break;
            }
            cur[i] = -b;
        }
    }
}

/// Polynomial of points found by one pair, tagged with its witnesses.
type Hit = (Poly, [(usize, usize); 2]);

fn strip_domain(g: &Poly, basis: &[Poly]) -> Poly {
    let mut g = g.squarefree_part();
    for b in basis {
        let c = g.gcd(b);
        if !c.is_constant() {
            g = g.exact_div(&c).expect("gcd divides");
        }
    }
    g.monic()
}

fn pair_hits(chars: &[Character], i: usize, j: usize, cyclo: &[Poly], basis: &[Poly]) -> Vec<Hit> {
    let (a, b) = (&chars[i], &chars[j]);
    let g = match (&a.t_mod, &b.t_mod) {
        (Some(ta), Some(tb)) => {
            let g = modp::poly_gcd(ta, tb);
            if g.len() <= 1 {
                return vec![];
            }
            Some(g)
        }
        _ => None,
    };
    let mut hits = Vec::new();
    for d1 in a.candidate_orders(g.as_ref()) {
        // the part of S_{a,d1} that can still meet b, mod P
        let g1 = match (&g, &a.s_mod[d1 - 1]) {
            (Some(g), Some(s1)) => Some(modp::poly_gcd(s1, g)),
            _ => a.s_mod[d1 - 1].clone(),
        };
        for d2 in b.candidate_orders(g1.as_ref()) {
            let h = a.exact(d1, cyclo).gcd(b.exact(d2, cyclo));
            if h.is_constant() {
                continue;
            }
            let h = strip_domain(&h, basis);
            if !h.is_constant() {
                hits.push((h, [(i, d1), (j, d2)]));
            }
        }
    }
    hits
}

struct Member {
    poly: Poly,
    // reduction mod P, kept only when it has full degree
    residue: Option<Vec<u64>>,
    witnesses: Vec<(usize, usize)>,
}

impl Member {
    fn new(poly: Poly, witnesses: Vec<(usize, usize)>) -> Self {
        let residue = poly.reduce_mod().filter(|r| r.len() == poly.coeffs().len());
        Member {
            poly,
            residue,
            witnesses,
        }
    }

    fn surely_coprime(&self, other: &Member) -> bool {
        match (&self.residue, &other.residue) {
            (Some(x), Some(y)) => modp::gcd_degree(x, y) == 0,
            _ => false,
        }
    }
}

fn merged(x: &[(usize, usize)], y: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut w = x.to_vec();
    w.extend_from_slice(y);
    w.sort_unstable();
    w.dedup();
    w
}

/// Splits the accumulated pairwise coprime family so that `g` becomes a
/// union of its members, merging witness sets on the overlaps.
fn refine(family: &mut Vec<Member>, g: Poly, w: &[(usize, usize)]) {
    let mut rest = Member::new(g, w.to_vec());
    let mut k = 0;
    while k < family.len() && !rest.poly.is_constant() {
        if rest.surely_coprime(&family[k]) {
            k += 1;
            continue;
        }
        let c = rest.poly.gcd(&family[k].poly);
        if c.is_constant() {
            k += 1;
            continue;
        }
        let both = merged(&family[k].witnesses, w);
        let old = family[k].poly.exact_div(&c).expect("gcd divides");
        if old.is_constant() {
            family[k].witnesses = both;
            k += 1;
        } else {
            let keep = std::mem::take(&mut family[k].witnesses);
            family[k] = Member::new(old, keep);
            family.insert(k + 1, Member::new(c.clone(), both));
            k += 2;
        }
        let r = rest.poly.exact_div(&c).expect("gcd divides");
        rest = Member::new(r, w.to_vec());
    }
    if !rest.poly.is_constant() {
        family.push(rest);
    }
}

/// Bounded scan with the calling thread only.
pub fn scan(c: &ParamCurve, b: u32, n: u32) -> Result<Vec<AtypicalRecord>> {
    scan_with_workers(c, b, n, 1)
}

/// Bounded scan on a pool of `workers` threads. The result does not depend
/// on the number of workers.
pub fn scan_with_workers(
    c: &ParamCurve,
    b: u32,
    n: u32,
    workers: usize,
) -> Result<Vec<AtypicalRecord>> {
    if b == 0 || n == 0 {
        return Err(Error::InvalidArgument(
            "bounds B and N must be at least 1".into(),
        ));
    }
    if workers == 0 {
        return Err(Error::InvalidArgument(
            "worker count must be at least 1".into(),
        ));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    pool.install(|| scan_inner(c, b, n))
}

fn scan_inner(c: &ParamCurve, b: u32, n: u32) -> Result<Vec<AtypicalRecord>> {
    let dim = c.ambient_dim();
    let ws = c.ws_lattice();
    let cyclo = cyclotomic_table(u64::from(n));
    let cyclo_mod: Vec<Vec<u64>> = cyclo
        .iter()
        .map(|p| p.reduce_mod().expect("integer coefficients"))
        .collect();
    let vectors: Vec<Vec<BigInt>> = box_vectors(dim, b)
        .into_iter()
        .filter(|a| !ws.contains(a))
        .collect();
    let chars = vectors
        .into_par_iter()
        .map(|a| {
            let (p, q) = split_monomial(c, &a)?;
            Ok(Character::build(a, p, q, &cyclo, &cyclo_mod))
        })
        .collect::<Result<Vec<_>>>()?;

    let pairs: Vec<(usize, usize)> = (0..chars.len())
        .flat_map(|i| (i + 1..chars.len()).map(move |j| (i, j)))
        .collect();
    let hits: Vec<Vec<Hit>> = pairs
        .par_iter()
        .map(|&(i, j)| pair_hits(&chars, i, j, &cyclo, c.basis()))
        .collect();

    // identical polynomials first share their witnesses
    let mut grouped: BTreeMap<Poly, Vec<(usize, usize)>> = BTreeMap::new();
    for (h, w) in hits.into_iter().flatten() {
        let e = grouped.entry(h).or_default();
        e.extend_from_slice(&w);
    }
    let mut family: Vec<Member> = Vec::new();
    for (h, w) in grouped {
        let w = merged(&w, &[]);
        refine(&mut family, h, &w);
    }
    let mut records = family
        .into_iter()
        .map(|m| make_record(&chars, m.poly, &m.witnesses, dim))
        .collect::<Result<Vec<_>>>()?;
    records.sort_by(|x, y| {
        let (px, py) = (&x.defining_poly, &y.defining_poly);
        px.deg()
            .cmp(&py.deg())
            .then_with(|| px.coeffs().cmp(py.coeffs()))
    });
    Ok(records)
}

fn make_record(
    chars: &[Character],
    h: Poly,
    w: &[(usize, usize)],
    dim: usize,
) -> Result<AtypicalRecord> {
    let mut witnesses: Vec<Witness> = w
        .iter()
        .map(|&(i, d)| Witness {
            vector: chars[i].vector.clone(),
            order: d as u64,
        })
        .collect();
    witnesses.sort();
    witnesses.dedup();
    let gens: Vec<Vec<BigInt>> = witnesses.iter().map(|x| x.vector.clone()).collect();
    let (lattice, _) = saturate(&IntLattice::from_generators(dim, &gens)?);
    let defect_upper_bound = dim as i64 - lattice.rank() as i64;
    Ok(AtypicalRecord {
        defining_poly: h,
        witnessed_lattice: lattice,
        defect_upper_bound,
        witnesses,
    })
}

/// Record counts at `(B, N)`, `(B, 2N)` and `(B + 1, N)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stability {
    pub counts: Vec<(u32, u32, usize)>,
    /// Whether the points found at `(B, N)` are among those found at both
    /// larger bounds.
    pub monotone: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZPReport {
    pub closures: ClosureReport,
    pub b: u32,
    pub n: u32,
    pub d: i64,
    pub records: Vec<AtypicalRecord>,
    pub optimal_records: Vec<AtypicalRecord>,
    pub stability: Stability,
}

impl ZPReport {
    /// `min(d, defect(C) - 1)`: records at or below it are optimal.
    pub fn threshold(&self) -> i64 {
        self.d.min(self.closures.defect - 1)
    }
}

/// Whether every root of every record in `smaller` is a root of some
/// record in `larger`. Defining polynomials within one list are squarefree
/// and pairwise coprime, so it suffices to compare degrees of gcds.
pub fn covers(larger: &[AtypicalRecord], smaller: &[AtypicalRecord]) -> bool {
    smaller.iter().all(|s| {
        let h = &s.defining_poly;
        let found: usize = larger.iter().map(|l| h.gcd(&l.defining_poly).deg()).sum();
        found == h.deg()
    })
}

pub fn zp_report(c: &ParamCurve, d: i64, b: u32, n: u32, workers: usize) -> Result<ZPReport> {
    let closures = c.closures()?;
    let records = scan_with_workers(c, b, n, workers)?;
    let threshold = d.min(closures.defect - 1);
    let optimal_records: Vec<AtypicalRecord> = records
        .iter()
        .filter(|r| r.defect_upper_bound <= threshold)
        .cloned()
        .collect();
    let wider_n = scan_with_workers(c, b, n * 2, workers)?;
    let wider_b = scan_with_workers(c, b + 1, n, workers)?;
    let monotone = covers(&wider_n, &records) && covers(&wider_b, &records);
    let stability = Stability {
        counts: vec![
            (b, n, records.len()),
            (b, n * 2, wider_n.len()),
            (b + 1, n, wider_b.len()),
        ],
        monotone,
    };
    Ok(ZPReport {
        closures,
        b,
        n,
        d,
        records,
        optimal_records,
        stability,
    })
}

/// Whether `f^a` takes a root-of-unity value of order dividing `m` at every
/// root of `h`, decided by exact division.
pub fn vanishes_on(c: &ParamCurve, h: &Poly, a: &[BigInt], m: u64) -> Result<bool> {
    let a = if a
        .iter()
        .find(|x| !x.is_zero())
        .is_some_and(|x| x.is_negative())
    {
        a.iter().map(|x| -x).collect()
    } else {
        a.to_vec()
    };
    let r = relation_poly(c, &a, m as i64)?;
    Ok(r.poly.rem(h).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::to_big;

    fn curve(cs: &[&str]) -> ParamCurve {
        ParamCurve::parse(cs).unwrap()
    }

    #[test]
    fn relation_poly_examples() {
        let c = curve(&["t", "1-t"]);
        let r = relation_poly(&c, &to_big(&[1, 0]), 6).unwrap();
        assert_eq!(r.poly, Poly::from_i64(&[-1, 0, 0, 0, 0, 0, 1]));
        let r = relation_poly(&c, &to_big(&[0, 1]), 6).unwrap();
        assert_eq!(r.poly, &Poly::from_i64(&[1, -1]).pow(6) - &Poly::one());
        let r = relation_poly(&c, &to_big(&[1, -1]), 1).unwrap();
        assert_eq!(r.poly, Poly::from_i64(&[-1, 2]));
    }

    #[test]
    fn relation_poly_errors() {
        let c = curve(&["t", "1-t"]);
        assert_eq!(
            relation_poly(&c, &to_big(&[1, 0]), 0),
            Err(Error::NonPositiveOrder)
        );
        assert!(matches!(
            relation_poly(&c, &to_big(&[2, 0]), 1),
            Err(Error::NotPrimitive(_))
        ));
        let c = curve(&["t", "2*t"]);
        assert!(matches!(
            relation_poly(&c, &to_big(&[1, -1]), 3),
            Err(Error::RelationInClosure(_))
        ));
    }

    #[test]
    fn box_vectors_are_normalized() {
        let v = box_vectors(2, 1);
        assert_eq!(
            v,
            vec![
                to_big(&[0, 1]),
                to_big(&[1, -1]),
                to_big(&[1, 0]),
                to_big(&[1, 1])
            ]
        );
        // primitive vectors of the box come in +- pairs
        let mut primitive = 0;
        for x in -2i64..=2 {
            for y in -2i64..=2 {
                for z in -2i64..=2 {
                    if x.gcd(&y).gcd(&z) == 1 {
                        primitive += 1;
                    }
                }
            }
        }
        assert_eq!(box_vectors(3, 2).len() * 2, primitive);
    }

    #[test]
    fn scan_bmz_curve() {
        let c = curve(&["t", "1-t"]);
        let recs = scan(&c, 1, 6).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].defining_poly, Poly::from_i64(&[1, -1, 1]));
        assert_eq!(recs[0].witnessed_lattice.rank(), 2);
        assert_eq!(recs[0].defect_upper_bound, 0);
    }

    #[test]
    fn scan_without_torsion_relations() {
        assert!(scan(&curve(&["t", "2*t"]), 2, 6).unwrap().is_empty());
    }

    #[test]
    fn scan_special_curve() {
        let recs = scan(&curve(&["t", "-t"]), 2, 2).unwrap();
        let polys: Vec<Poly> = recs.iter().map(|r| r.defining_poly.clone()).collect();
        assert!(polys.contains(&Poly::from_i64(&[-1, 1])));
        assert!(polys.contains(&Poly::from_i64(&[1, 1])));
        // every root is a root of unity: each defining polynomial divides t^k - 1
        let t12 = &Poly::var().pow(12) - &Poly::one();
        for p in &polys {
            assert!(t12.rem(p).is_zero(), "{p}");
        }
    }

    #[test]
    fn zp_examples() {
        let r = zp_report(&curve(&["t", "1-t"]), 0, 2, 12, 1).unwrap();
        assert_eq!(r.optimal_records.len(), 1);
        assert_eq!(
            r.optimal_records[0].defining_poly,
            Poly::from_i64(&[1, -1, 1])
        );
        assert!(r.stability.monotone);

        let r = zp_report(&curve(&["t", "t^2", "4*t^3"]), 1, 2, 12, 1).unwrap();
        assert!(r.optimal_records.is_empty());

        let r = zp_report(&curve(&["t", "-t"]), 3, 2, 4, 1).unwrap();
        assert!(!r.records.is_empty());
        assert!(r.optimal_records.is_empty());
    }
}
