//! Seeded generators for the property suites and the `defect-fuzz` driver.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::axiom_lab::{Flat, FlatModel};
use crate::curve::ParamCurve;
use crate::error::{Error, Result};
use crate::lattice::{saturate, IntLattice};
use crate::poly::{Poly, RatFunc};
use crate::scalar::{Angle, CycloRat};
use crate::torus::{
    intersect_cosets, point_closures, special_closure_of_coset, GeneralCoset, TorsionCoset,
};

pub const DEFAULT_SEED: u64 = 20_240_501;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn base_polys() -> Vec<Poly> {
    vec![
        Poly::from_i64(&[0, 1]),
        Poly::from_i64(&[-1, 1]),
        Poly::from_i64(&[1, 1]),
        Poly::from_i64(&[2, 1]),
        Poly::from_i64(&[1, 0, 1]),
    ]
}

/// A nonconstant curve in `G_m^n` whose coordinates are signed small
/// rational multiples of products of `t, t - 1, t + 1, t + 2, t^2 + 1`
/// with exponents in `-2..=2`.
pub fn random_curve<R: Rng>(rng: &mut R, n: usize) -> ParamCurve {
    let bases = base_polys();
    let consts = [(1, 1), (-1, 1), (2, 1), (-2, 1), (3, 1), (1, 2), (-1, 3)];
    loop {
        let coords: Vec<RatFunc> = (0..n)
            .map(|_| {
                let (a, b) = *consts.choose(rng).expect("nonempty");
                let mut f =
                    RatFunc::from_poly(Poly::constant(BigRational::new(a.into(), b.into())));
                for p in &bases {
                    let e: i64 = if rng.gen_bool(0.4) {
                        rng.gen_range(-2..=2)
                    } else {
                        0
                    };
                    f = f.mul(&RatFunc::from_poly(p.clone()).pow(e).expect("nonzero base"));
                }
                f
            })
            .collect();
        if let Ok(c) = ParamCurve::new(coords) {
            return c;
        }
    }
}

/// A small nonzero rational `p / q`.
pub fn random_param<R: Rng>(rng: &mut R) -> BigRational {
    let p: i64 = rng.gen_range(-9..=9);
    let q: i64 = rng.gen_range(1..=5);
    BigRational::new(p.into(), q.into())
}

fn random_vector<R: Rng>(rng: &mut R, n: usize, bound: i64) -> Vec<BigInt> {
    (0..n)
        .map(|_| BigInt::from(rng.gen_range(-bound..=bound)))
        .collect()
}

/// A saturated lattice of rank at most `n` spanned by small vectors.
pub fn random_saturated<R: Rng>(rng: &mut R, n: usize, bound: i64) -> IntLattice {
    let r = rng.gen_range(0..=n);
    let gens: Vec<Vec<BigInt>> = (0..r).map(|_| random_vector(rng, n, bound)).collect();
    let l = IntLattice::from_generators(n, &gens).expect("ambient length");
    saturate(&l).0
}

fn random_angle<R: Rng>(rng: &mut R, max_den: i64) -> Angle {
    let b = rng.gen_range(1..=max_den);
    Angle::from_frac(rng.gen_range(0..b), b)
}

/// A torsion coset with angle denominators at most `max_den`.
pub fn random_torsion_coset<R: Rng>(rng: &mut R, n: usize, max_den: i64) -> TorsionCoset {
    let lattice = random_saturated(rng, n, 2);
    let angles = (0..lattice.rank())
        .map(|_| random_angle(rng, max_den))
        .collect();
    TorsionCoset::new(lattice, angles).expect("saturated lattice")
}

/// A coset whose values may have non-torsion magnitudes built from 2, 3
/// and 5.
pub fn random_coset<R: Rng>(rng: &mut R, n: usize) -> GeneralCoset {
    let lattice = random_saturated(rng, n, 2);
    let mags = [(1, 1), (2, 1), (1, 3), (5, 1), (6, 5)];
    let values = (0..lattice.rank())
        .map(|_| {
            let (a, b) = if rng.gen_bool(0.5) {
                (1, 1)
            } else {
                *mags.choose(rng).expect("nonempty")
            };
            CycloRat::from_frac(a, b)
                .expect("nonzero")
                .mul(&CycloRat::root_of_unity(random_angle(rng, 6)))
        })
        .collect();
    GeneralCoset::new(lattice, values).expect("saturated lattice")
}

/// A pair `sub ⊆ sup`: `sub` is a component of `sup` cut by another
/// random coset. Pairs whose intersection needs roots outside the
/// cyclo-rationals are skipped.
pub fn random_coset_chain<R: Rng>(rng: &mut R, n: usize) -> Result<(GeneralCoset, GeneralCoset)> {
    loop {
        let sup = random_coset(rng, n);
        let cut = random_coset(rng, n);
        let comps = match intersect_cosets(&sup, &cut) {
            Ok(c) => c,
            Err(Error::NotRepresentable(_)) => continue,
            Err(e) => return Err(e),
        };
        if let Some(sub) = comps.choose(rng) {
            return Ok((sub.clone(), sup));
        }
    }
}

/// A validated random model with at most `max_flats` flats in which every
/// flat has well-defined closures.
pub fn random_flat_model<R: Rng>(rng: &mut R, max_flats: usize) -> FlatModel {
    loop {
        let n = rng.gen_range(1..=3);
        let k = rng.gen_range(1..=max_flats.max(1));
        let mut flats = vec![Flat::new("A", n, true, true)];
        for i in 1..k {
            let special = rng.gen_bool(0.3);
            let ws = special || rng.gen_bool(0.4);
            flats.push(Flat::new(format!("F{i}"), rng.gen_range(0..n), special, ws));
        }
        let mut cont = Vec::new();
        for i in 1..k {
            cont.push((i, 0));
            for j in 1..k {
                if flats[i].dim < flats[j].dim && rng.gen_bool(0.35) {
                    cont.push((i, j));
                }
            }
        }
        if let Ok(m) = FlatModel::new(n, flats, &cont, &[]) {
            if m.closures().is_ok() {
                return m;
            }
        }
    }
}

/// One chain `V' ⊂ V` of the defect suite with both gaps
/// `defect - weak_defect`.
#[derive(Clone, Debug)]
pub struct Chain {
    pub kind: &'static str,
    pub description: String,
    pub gap_sup: i64,
    pub gap_sub: i64,
}

impl Chain {
    pub fn holds(&self) -> bool {
        self.gap_sup <= self.gap_sub
    }
}

fn coset_defect(c: &GeneralCoset) -> i64 {
    special_closure_of_coset(c).dim() as i64 - c.dim() as i64
}

/// A point of a random curve in `G_m^n`.
pub fn point_in_curve<R: Rng>(rng: &mut R, n: usize) -> Result<Chain> {
    let c = random_curve(rng, n);
    let cl = c.closures()?;
    loop {
        let t = random_param(rng);
        let Ok(p) = c.evaluate_point(&t) else {
            continue;
        };
        let (_, dp) = point_closures(&p);
        return Ok(Chain {
            kind: "point-in-curve",
            description: format!("t = {t} on {c}"),
            gap_sup: cl.defect - cl.weak_defect,
            gap_sub: dp as i64,
        });
    }
}

/// A coset inside another in `G_m^n`; cosets have weak defect 0.
pub fn coset_in_coset<R: Rng>(rng: &mut R, n: usize) -> Result<Chain> {
    let (sub, sup) = random_coset_chain(rng, n)?;
    Ok(Chain {
        kind: "coset-in-coset",
        description: format!("{} in {}", sub.lattice(), sup.lattice()),
        gap_sup: coset_defect(&sup),
        gap_sub: coset_defect(&sub),
    })
}

/// `count` chains alternating between the two kinds, with `n` cycling
/// through `1..=4`.
pub fn defect_chains(seed: u64, count: usize) -> Result<Vec<Chain>> {
    let mut r = rng(seed);
    (0..count)
        .map(|i| {
            let n = 1 + (i / 2) % 4;
            if i % 2 == 0 {
                point_in_curve(&mut r, n)
            } else {
                coset_in_coset(&mut r, n)
            }
        })
        .collect()
}
