//! Points, cosets and torsion cosets of `G_m^n`, and the monomial maps
//! between tori.
//!
//! An irreducible coset is described by a saturated character lattice `L`
//! together with the value `x^b` takes on the coset for every basis row `b`
//! of `L`. A coset is a torsion coset (special) exactly when all those
//! values are roots of unity; every coset is weakly special.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{check_dim, Error, Result};
use crate::lattice::{hnf, kernel, saturate, snf, IntLattice, IntMatrix};
use crate::scalar::{magnitude_matrix, monomial_eval, relation_lattices, Angle, CycloRat};

/// Refuse to enumerate more components than this.
pub const MAX_COMPONENTS: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusPoint {
    coords: Vec<CycloRat>,
}

impl TorusPoint {
    pub fn new(coords: Vec<CycloRat>) -> Self {
        TorusPoint { coords }
    }

    pub fn identity(n: usize) -> Self {
        TorusPoint {
            coords: vec![CycloRat::one(); n],
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[CycloRat] {
        &self.coords
    }

    pub fn is_torsion(&self) -> bool {
        self.coords.iter().all(CycloRat::is_torsion)
    }

    /// `x^a`.
    pub fn character(&self, a: &[BigInt]) -> Result<CycloRat> {
        monomial_eval(&self.coords, a)
    }

    pub fn mul(&self, other: &TorusPoint) -> Result<TorusPoint> {
        check_dim(self.ambient_dim(), other.ambient_dim())?;
        Ok(TorusPoint {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a.mul(b))
                .collect(),
        })
    }
}

impl fmt::Display for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// An irreducible coset `x T` of a subtorus `T`: all points with
/// `y^b = values[j]` for the `j`-th basis row `b` of `lattice`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneralCoset {
    lattice: IntLattice,
    values: Vec<CycloRat>,
}

impl GeneralCoset {
    pub fn new(lattice: IntLattice, values: Vec<CycloRat>) -> Result<Self> {
        check_dim(lattice.rank(), values.len())?;
        let (_, index) = saturate(&lattice);
        if !index.is_one() {
            return Err(Error::NotSaturated(index.to_string()));
        }
        Ok(GeneralCoset { lattice, values })
    }

    /// The whole torus.
    pub fn ambient(n: usize) -> Self {
        GeneralCoset {
            lattice: IntLattice::trivial(n),
            values: vec![],
        }
    }

    pub fn point(p: &TorusPoint) -> Self {
        GeneralCoset {
            lattice: IntLattice::full(p.ambient_dim()),
            values: p.coords.clone(),
        }
    }

    /// The coset of `ker(lattice)` through `p`.
    pub fn through_point(lattice: IntLattice, p: &TorusPoint) -> Result<Self> {
        check_dim(lattice.ambient_dim(), p.ambient_dim())?;
        let values = lattice
            .basis_rows()
            .map(|b| p.character(b))
            .collect::<Result<Vec<_>>>()?;
        Self::new(lattice, values)
    }

    /// Irreducible components of `{x : x^{g_j} = c_j for all j}`, sorted.
    pub fn solve(n: usize, gens: &[Vec<BigInt>], values: &[CycloRat]) -> Result<Vec<Self>> {
        solve_character_system(n, gens, values)
    }

    pub fn ambient_dim(&self) -> usize {
        self.lattice.ambient_dim()
    }

    pub fn dim(&self) -> usize {
        self.ambient_dim() - self.lattice.rank()
    }

    pub fn lattice(&self) -> &IntLattice {
        &self.lattice
    }

    pub fn values(&self) -> &[CycloRat] {
        &self.values
    }

    /// `x^a` on the coset, for `a` in the character lattice.
    pub fn value_at(&self, a: &[BigInt]) -> Option<CycloRat> {
        let coords = self.lattice.coordinates(a)?;
        Some(
            self.values
                .iter()
                .zip(&coords)
                .filter(|(_, c)| !c.is_zero())
                .fold(CycloRat::one(), |acc, (v, c)| acc.mul(&v.pow(c))),
        )
    }

    pub fn is_torsion(&self) -> bool {
        self.values.iter().all(CycloRat::is_torsion)
    }

    pub fn to_torsion(&self) -> Option<TorsionCoset> {
        self.is_torsion().then(|| TorsionCoset(self.clone()))
    }

    /// Returns the single point when the coset has dimension 0.
    pub fn as_point(&self) -> Option<TorusPoint> {
        if self.dim() != 0 {
            return None;
        }
        let n = self.ambient_dim();
        let coords = (0..n)
            .map(|i| {
                let mut e = vec![BigInt::zero(); n];
                e[i] = BigInt::one();
                self.value_at(&e).expect("full lattice")
            })
            .collect();
        Some(TorusPoint::new(coords))
    }

    pub fn contains_point(&self, p: &TorusPoint) -> Result<bool> {
        check_dim(self.ambient_dim(), p.ambient_dim())?;
        for (b, v) in self.lattice.basis_rows().zip(&self.values) {
            if &p.character(b)? != v {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `other` is a subset of `self`.
    pub fn contains_coset(&self, other: &GeneralCoset) -> Result<bool> {
        check_dim(self.ambient_dim(), other.ambient_dim())?;
        if !other.lattice.contains_lattice(&self.lattice) {
            return Ok(false);
        }
        Ok(self
            .lattice
            .basis_rows()
            .zip(&self.values)
            .all(|(b, v)| other.value_at(b).as_ref() == Some(v)))
    }

    /// The translate `p * C`.
    pub fn translate(&self, p: &TorusPoint) -> Result<GeneralCoset> {
        check_dim(self.ambient_dim(), p.ambient_dim())?;
        let values = self
            .lattice
            .basis_rows()
            .zip(&self.values)
            .map(|(b, v)| Ok(v.mul(&p.character(b)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(GeneralCoset {
            lattice: self.lattice.clone(),
            values,
        })
    }
}

impl fmt::Display for GeneralCoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (b, v)) in self.lattice.basis_rows().zip(&self.values).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "x^(")?;
            for (j, e) in b.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{e}")?;
            }
            write!(f, ") = {v}")?;
        }
        if self.lattice.rank() == 0 {
            write!(f, "G_m^{}", self.ambient_dim())?;
        }
        write!(f, "}}")
    }
}

/// A coset all of whose values are roots of unity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorsionCoset(GeneralCoset);

impl TorsionCoset {
    pub fn new(lattice: IntLattice, angles: Vec<Angle>) -> Result<Self> {
        let values = angles.into_iter().map(CycloRat::root_of_unity).collect();
        Ok(TorsionCoset(GeneralCoset::new(lattice, values)?))
    }

    pub fn from_i64(n: usize, rows: &[&[i64]], angles: &[(i64, i64)]) -> Result<Self> {
        let lattice = IntLattice::from_i64(n, rows)?;
        if lattice.rank() != rows.len() {
            return Err(Error::InvalidArgument("dependent lattice rows".into()));
        }
        let gens: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let values: Vec<CycloRat> = angles
            .iter()
            .map(|&(a, b)| CycloRat::root_of_unity(Angle::from_frac(a, b)))
            .collect();
        let mut comps = solve_character_system(n, &gens, &values)?;
        if comps.len() != 1 {
            return Err(Error::InvalidArgument(format!(
                "relations define {} components",
                comps.len()
            )));
        }
        Ok(TorsionCoset(comps.remove(0)))
    }

    pub fn ambient(n: usize) -> Self {
        TorsionCoset(GeneralCoset::ambient(n))
    }

    pub fn as_coset(&self) -> &GeneralCoset {
        &self.0
    }

    pub fn into_coset(self) -> GeneralCoset {
        self.0
    }

    pub fn lattice(&self) -> &IntLattice {
        self.0.lattice()
    }

    pub fn angles(&self) -> Vec<Angle> {
        self.0.values().iter().map(|v| v.angle.clone()).collect()
    }

    pub fn ambient_dim(&self) -> usize {
        self.0.ambient_dim()
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn contains_point(&self, p: &TorusPoint) -> Result<bool> {
        self.0.contains_point(p)
    }
}

impl TryFrom<GeneralCoset> for TorsionCoset {
    type Error = Error;

    fn try_from(c: GeneralCoset) -> Result<Self> {
        if c.is_torsion() {
            Ok(TorsionCoset(c))
        } else {
            Err(Error::NotTorsion(c.to_string()))
        }
    }
}

impl From<TorsionCoset> for GeneralCoset {
    fn from(c: TorsionCoset) -> Self {
        c.0
    }
}

impl fmt::Display for TorsionCoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn product_of_powers(values: &[CycloRat], exps: &[BigInt]) -> CycloRat {
    values
        .iter()
        .zip(exps)
        .filter(|(_, e)| !e.is_zero())
        .fold(CycloRat::one(), |acc, (v, e)| acc.mul(&v.pow(e)))
}

/// Solves `x^{g_j} = c_j`. The generators span a lattice `L` carrying the
/// induced character (empty result if the character is not well defined on
/// relations among the generators); the components correspond to the
/// extensions of that character to the saturation of `L`, enumerated
/// through the Smith form of `L` inside its saturation.
fn solve_character_system(
    n: usize,
    gens: &[Vec<BigInt>],
    values: &[CycloRat],
) -> Result<Vec<GeneralCoset>> {
    check_dim(gens.len(), values.len())?;
    let g = IntMatrix::from_rows(n, gens)?;
    let (h, u) = hnf(&g);
    let mut rows = Vec::new();
    let mut chi = Vec::new();
    for i in 0..h.rows() {
        let v = product_of_powers(values, u.row(i));
        if h.is_zero_row(i) {
            if !v.is_one() {
                return Ok(vec![]);
            }
        } else {
            rows.push(h.row(i).to_vec());
            chi.push(v);
        }
    }
    let l = IntLattice::from_generators(n, &rows)?;
    debug_assert_eq!(l.basis().to_rows(), rows);
    let (sat, index) = saturate(&l);
    if index.to_u64().is_none_or(|i| i > MAX_COMPONENTS) {
        return Err(Error::InvalidArgument(format!(
            "{index} components exceed the enumeration limit"
        )));
    }
    let r = l.rank();
    let c = l
        .coordinates_in(&sat)
        .expect("lattice lies in its saturation");
    let (d, su, sv) = snf(&c);

    let mut choices: Vec<Vec<CycloRat>> = Vec::with_capacity(r);
    for i in 0..r {
        let target = product_of_powers(&chi, su.row(i));
        let di = d.get(i, i).clone();
        let k_max = di.to_u64().expect("bounded by index");
        let roots = (0..k_max)
            .map(|k| target.root(&di, &BigInt::from(k)))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| {
                Error::NotRepresentable(format!("{target} has no rational {di}-th root"))
            })?;
        choices.push(roots);
    }

    let mut out = Vec::new();
    let mut idx = vec![0usize; r];
    loop {
        let y: Vec<CycloRat> = idx
            .iter()
            .enumerate()
            .map(|(i, &k)| choices[i][k].clone())
            .collect();
        let psi: Vec<CycloRat> = (0..r).map(|l| product_of_powers(&y, sv.row(l))).collect();
        out.push(GeneralCoset {
            lattice: sat.clone(),
            values: psi,
        });
        // odometer
        let mut pos = 0;
        loop {
            if pos == r {
                out.sort();
                out.dedup();
                return Ok(out);
            }
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Irreducible components of the intersection of two cosets. Fails with
/// [`Error::NotRepresentable`] when the components have no cyclo-rational
/// points (a magnitude would need an irrational root).
pub fn intersect_cosets(a: &GeneralCoset, b: &GeneralCoset) -> Result<Vec<GeneralCoset>> {
    check_dim(a.ambient_dim(), b.ambient_dim())?;
    let mut gens: Vec<Vec<BigInt>> = a.lattice.basis().to_rows();
    gens.extend(b.lattice.basis().to_rows());
    let mut values = a.values.clone();
    values.extend(b.values.iter().cloned());
    solve_character_system(a.ambient_dim(), &gens, &values)
}

/// Irreducible components of `C1 cap C2`, in canonical order.
pub fn intersect_torsion_cosets(a: &TorsionCoset, b: &TorsionCoset) -> Result<Vec<TorsionCoset>> {
    Ok(intersect_cosets(&a.0, &b.0)?
        .into_iter()
        .map(TorsionCoset)
        .collect())
}

pub fn contains_point(c: &GeneralCoset, p: &TorusPoint) -> Result<bool> {
    c.contains_point(p)
}

/// Smallest torsion coset containing `c`: the characters of `c` whose value
/// is a root of unity.
pub fn special_closure_of_coset(c: &GeneralCoset) -> TorsionCoset {
    let n = c.ambient_dim();
    if c.lattice.rank() == 0 {
        return TorsionCoset::ambient(n);
    }
    let mags = magnitude_matrix(&c.values);
    let ker = kernel(&mags);
    let gens: Vec<Vec<BigInt>> = ker
        .basis_rows()
        .map(|x| c.lattice.basis().left_mul_vec(x).expect("rank matches"))
        .collect();
    let lattice = IntLattice::from_generators(n, &gens).expect("ambient length");
    let values: Vec<CycloRat> = lattice
        .basis_rows()
        .map(|b| c.value_at(b).expect("sublattice"))
        .collect();
    debug_assert!(values.iter().all(CycloRat::is_torsion));
    TorsionCoset(GeneralCoset { lattice, values })
}

/// `<{p}>` and `dim <{p}>` (the defect of the singleton).
pub fn point_closures(p: &TorusPoint) -> (TorsionCoset, usize) {
    let (_, torsion) = relation_lattices(p.coords());
    let values: Vec<CycloRat> = torsion
        .basis_rows()
        .map(|b| CycloRat::root_of_unity(p.character(b).expect("length").angle))
        .collect();
    let coset = GeneralCoset {
        lattice: torsion,
        values,
    };
    let defect = coset.dim();
    (TorsionCoset(coset), defect)
}

/// `x -> tau * x^A`, with `A` an `m x n` character matrix (row `j` is the
/// exponent vector of the `j`-th output coordinate) and `tau` torsion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialMap {
    matrix: IntMatrix,
    translation: TorusPoint,
}

impl MonomialMap {
    pub fn new(matrix: IntMatrix, translation: TorusPoint) -> Result<Self> {
        check_dim(matrix.rows(), translation.ambient_dim())?;
        if !translation.is_torsion() {
            return Err(Error::NotTorsion(translation.to_string()));
        }
        Ok(MonomialMap {
            matrix,
            translation,
        })
    }

    pub fn homomorphism(matrix: IntMatrix) -> Self {
        let m = matrix.rows();
        MonomialMap {
            matrix,
            translation: TorusPoint::identity(m),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::homomorphism(IntMatrix::identity(n))
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn translation(&self) -> &TorusPoint {
        &self.translation
    }

    pub fn source_dim(&self) -> usize {
        self.matrix.cols()
    }

    pub fn target_dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn apply(&self, p: &TorusPoint) -> Result<TorusPoint> {
        check_dim(self.source_dim(), p.ambient_dim())?;
        let coords = (0..self.target_dim())
            .map(|j| Ok(self.translation.coords[j].mul(&p.character(self.matrix.row(j))?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(TorusPoint::new(coords))
    }
}

/// Closure of `phi(C)`: characters `b` of the target with `b A` in the
/// character lattice of `C`.
pub fn monomial_image(phi: &MonomialMap, c: &GeneralCoset) -> Result<GeneralCoset> {
    check_dim(phi.source_dim(), c.ambient_dim())?;
    let perp = kernel(c.lattice.basis());
    let m = perp.basis().mul(&phi.matrix.transpose())?;
    let lattice = kernel(&m);
    let values = lattice
        .basis_rows()
        .map(|b| {
            let pulled = phi.matrix.left_mul_vec(b)?;
            let v = c
                .value_at(&pulled)
                .expect("b A lies in the character lattice");
            Ok(v.mul(&phi.translation.character(b)?))
        })
        .collect::<Result<Vec<_>>>()?;
    GeneralCoset::new(lattice, values)
}

/// Irreducible components of `phi^{-1}(C)`, in canonical order.
pub fn monomial_preimage(phi: &MonomialMap, c: &TorsionCoset) -> Result<Vec<TorsionCoset>> {
    check_dim(phi.target_dim(), c.ambient_dim())?;
    let mut gens = Vec::new();
    let mut values = Vec::new();
    for (b, v) in c.lattice().basis_rows().zip(c.0.values()) {
        gens.push(phi.matrix.left_mul_vec(b)?);
        values.push(v.mul(&phi.translation.character(b)?.inv()));
    }
    Ok(solve_character_system(phi.source_dim(), &gens, &values)?
        .into_iter()
        .map(TorsionCoset)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::to_big;

    fn pt(coords: &[&str]) -> TorusPoint {
        TorusPoint::new(coords.iter().map(|s| s.parse().unwrap()).collect())
    }

    fn tc(n: usize, rows: &[&[i64]], angles: &[(i64, i64)]) -> TorsionCoset {
        TorsionCoset::from_i64(n, rows, angles).unwrap()
    }

    #[test]
    fn contains_point_examples() {
        let x_is_1: GeneralCoset = tc(2, &[&[1, 0]], &[(0, 1)]).into();
        assert!(x_is_1.contains_point(&pt(&["1", "5"])).unwrap());
        assert!(!x_is_1.contains_point(&pt(&["2", "1"])).unwrap());
        let c: GeneralCoset = tc(2, &[&[1, -1]], &[(1, 2)]).into();
        assert!(c.contains_point(&pt(&["-1", "1"])).unwrap());
        assert!(c.contains_point(&pt(&["1"])).is_err());
    }

    #[test]
    fn intersect_examples() {
        let a = tc(2, &[&[1, 0]], &[(0, 1)]);
        let b = tc(2, &[&[0, 1]], &[(1, 2)]);
        let comps = intersect_torsion_cosets(&a, &b).unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].as_coset().as_point().unwrap(), pt(&["1", "-1"]));

        let a = tc(2, &[&[1, 1]], &[(0, 1)]);
        let b = tc(2, &[&[1, -1]], &[(0, 1)]);
        let comps = intersect_torsion_cosets(&a, &b).unwrap();
        let points: Vec<TorusPoint> = comps
            .iter()
            .map(|c| c.as_coset().as_point().unwrap())
            .collect();
        assert_eq!(points.len(), 2);
        assert!(points.contains(&pt(&["1", "1"])));
        assert!(points.contains(&pt(&["-1", "-1"])));

        let a = tc(2, &[&[1, 0]], &[(0, 1)]);
        let b = tc(2, &[&[1, 0]], &[(1, 2)]);
        assert!(intersect_torsion_cosets(&a, &b).unwrap().is_empty());
    }

    #[test]
    fn intersect_brute_force_small() {
        // every point with coordinate orders dividing 2 or 4
        let a = tc(2, &[&[1, 1]], &[(0, 1)]);
        let b = tc(2, &[&[1, -1]], &[(1, 2)]);
        let comps = intersect_torsion_cosets(&a, &b).unwrap();
        assert_eq!(comps.len(), 2);
        for i in 0..4 {
            for j in 0..4 {
                let p = TorusPoint::new(vec![
                    CycloRat::root_of_unity(Angle::from_frac(i, 4)),
                    CycloRat::root_of_unity(Angle::from_frac(j, 4)),
                ]);
                let in_both = a.contains_point(&p).unwrap() && b.contains_point(&p).unwrap();
                let hits = comps
                    .iter()
                    .filter(|c| c.contains_point(&p).unwrap())
                    .count();
                assert_eq!(hits, usize::from(in_both));
            }
        }
    }

    #[test]
    fn special_closure_examples() {
        let c = GeneralCoset::new(
            IntLattice::from_i64(2, &[&[1, -1]]).unwrap(),
            vec![CycloRat::from_int(2).unwrap()],
        )
        .unwrap();
        assert_eq!(special_closure_of_coset(&c), TorsionCoset::ambient(2));

        let c = GeneralCoset::new(
            IntLattice::from_i64(2, &[&[1, -1]]).unwrap(),
            vec![CycloRat::from_int(-1).unwrap()],
        )
        .unwrap();
        assert_eq!(special_closure_of_coset(&c).as_coset(), &c);

        let t = tc(3, &[&[1, 2, 0], &[0, 0, 1]], &[(1, 3), (1, 2)]);
        assert_eq!(special_closure_of_coset(t.as_coset()), t);
    }

    #[test]
    fn point_closure_examples() {
        let (s, d) = point_closures(&pt(&["1", "-1"]));
        assert_eq!(d, 0);
        assert_eq!(s.as_coset().as_point().unwrap(), pt(&["1", "-1"]));

        let (s, d) = point_closures(&pt(&["2", "3"]));
        assert_eq!(d, 2);
        assert_eq!(s, TorsionCoset::ambient(2));

        let (s, d) = point_closures(&pt(&["4", "2"]));
        assert_eq!(d, 1);
        assert_eq!(s, tc(2, &[&[1, -2]], &[(0, 1)]));
    }

    #[test]
    fn image_examples() {
        let sum = MonomialMap::homomorphism(IntMatrix::from_i64(&[&[1, 1]]));
        let diag = GeneralCoset::new(
            IntLattice::from_i64(2, &[&[1, -1]]).unwrap(),
            vec![CycloRat::one()],
        )
        .unwrap();
        assert_eq!(
            monomial_image(&sum, &diag).unwrap(),
            GeneralCoset::ambient(1)
        );

        let c: GeneralCoset = tc(3, &[&[1, 1, 0]], &[(1, 3)]).into();
        assert_eq!(monomial_image(&MonomialMap::identity(3), &c).unwrap(), c);

        let proj = MonomialMap::homomorphism(IntMatrix::from_i64(&[&[1, 0]]));
        let x_is_1: GeneralCoset = tc(2, &[&[1, 0]], &[(0, 1)]).into();
        let img = monomial_image(&proj, &x_is_1).unwrap();
        assert_eq!(img.as_point().unwrap(), pt(&["1"]));
    }

    #[test]
    fn image_with_translation() {
        let phi = MonomialMap::new(IntMatrix::from_i64(&[&[1, 0]]), pt(&["-1"])).unwrap();
        let x_is_1: GeneralCoset = tc(2, &[&[1, 0]], &[(0, 1)]).into();
        let img = monomial_image(&phi, &x_is_1).unwrap();
        assert_eq!(img.as_point().unwrap(), pt(&["-1"]));
        assert!(MonomialMap::new(IntMatrix::from_i64(&[&[1]]), pt(&["2"])).is_err());
    }

    #[test]
    fn preimage_examples() {
        let sum = MonomialMap::homomorphism(IntMatrix::from_i64(&[&[1, 1]]));
        let one = tc(1, &[&[1]], &[(0, 1)]);
        assert_eq!(
            monomial_preimage(&sum, &one).unwrap(),
            vec![tc(2, &[&[1, 1]], &[(0, 1)])]
        );

        let square = MonomialMap::homomorphism(IntMatrix::from_i64(&[&[2]]));
        let pre = monomial_preimage(&square, &one).unwrap();
        assert_eq!(
            pre,
            vec![tc(1, &[&[1]], &[(0, 1)]), tc(1, &[&[1]], &[(1, 2)])]
        );

        let proj = MonomialMap::homomorphism(IntMatrix::from_i64(&[&[1, 0]]));
        let minus_one = tc(1, &[&[1]], &[(1, 2)]);
        assert_eq!(
            monomial_preimage(&proj, &minus_one).unwrap(),
            vec![tc(2, &[&[1, 0]], &[(1, 2)])]
        );
    }

    #[test]
    fn unsaturated_lattice_is_rejected() {
        let l = IntLattice::from_i64(2, &[&[2, 0]]).unwrap();
        assert!(matches!(
            GeneralCoset::new(l, vec![CycloRat::one()]),
            Err(Error::NotSaturated(_))
        ));
    }

    #[test]
    fn general_intersection_needs_rational_roots() {
        // x y = 2 and x / y = 1 forces x^2 = 2
        let a = GeneralCoset::new(
            IntLattice::from_i64(2, &[&[1, 1]]).unwrap(),
            vec![CycloRat::from_int(2).unwrap()],
        )
        .unwrap();
        let b = GeneralCoset::new(
            IntLattice::from_i64(2, &[&[1, -1]]).unwrap(),
            vec![CycloRat::one()],
        )
        .unwrap();
        assert!(matches!(
            intersect_cosets(&a, &b),
            Err(Error::NotRepresentable(_))
        ));

        // x y = 4 and x / y = 1: (2, 2) and (-2, -2)
        let a = GeneralCoset::new(
            IntLattice::from_i64(2, &[&[1, 1]]).unwrap(),
            vec![CycloRat::from_int(4).unwrap()],
        )
        .unwrap();
        let comps = intersect_cosets(&a, &b).unwrap();
        let pts: Vec<TorusPoint> = comps.iter().map(|c| c.as_point().unwrap()).collect();
        assert_eq!(pts.len(), 2);
        assert!(pts.contains(&pt(&["2", "2"])));
        assert!(pts.contains(&pt(&["-2", "-2"])));
    }

    #[test]
    fn value_at_and_containment() {
        let big: GeneralCoset = tc(3, &[&[1, 0, 0]], &[(1, 2)]).into();
        let small: GeneralCoset = tc(3, &[&[1, 0, 0], &[0, 1, 0]], &[(1, 2), (1, 3)]).into();
        assert!(big.contains_coset(&small).unwrap());
        assert!(!small.contains_coset(&big).unwrap());
        assert_eq!(
            small.value_at(&to_big(&[2, 1, 0])).unwrap(),
            CycloRat::root_of_unity(Angle::from_frac(1, 3))
        );
    }
}
