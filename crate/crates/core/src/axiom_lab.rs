//! Finite models of special structures: a finite set of flats with
//! dimensions, special / weakly special flags, containments and meets.
//! The checks here say whether a statement holds on a given model; they do
//! not prove anything about the infinite structures the models come from.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;

use num_rational::BigRational;

use crate::atypical::AtypicalRecord;
use crate::curve::ParamCurve;
use crate::error::{Error, Result};
use crate::torus::{intersect_cosets, point_closures, special_closure_of_coset, GeneralCoset};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flat {
    pub label: String,
    pub dim: usize,
    pub special: bool,
    pub weakly_special: bool,
}

impl Flat {
    pub fn new(label: impl Into<String>, dim: usize, special: bool, weakly_special: bool) -> Self {
        Flat {
            label: label.into(),
            dim,
            special,
            weakly_special,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatModel {
    ambient_dim: usize,
    flats: Vec<Flat>,
    // le[i][j]: flat i is contained in flat j (reflexive, transitive)
    le: Vec<Vec<bool>>,
    meets: BTreeMap<(usize, usize), Vec<usize>>,
}

/// A meet table entry: an unordered pair of flats and the components of
/// their intersection.
pub type Meet = ((usize, usize), Vec<usize>);

/// Closures of one flat inside a model.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModelClosure {
    pub special: usize,
    pub weakly_special: usize,
    pub defect: i64,
    pub weak_defect: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DefectVerdict {
    Holds,
    /// `sub` is strictly contained in `sup` and
    /// `defect(sup) - weak_defect(sup) > defect(sub) - weak_defect(sub)`.
    Violation {
        sub: usize,
        sup: usize,
    },
}

impl DefectVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, DefectVerdict::Holds)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PinkVerdict {
    Holds,
    /// `atypical` lies in `V` and in the special flat `special` of small
    /// dimension, but under no proper optimal flat of defect at most `d`.
    Violation {
        atypical: usize,
        special: usize,
    },
}

impl PinkVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, PinkVerdict::Holds)
    }
}

fn key(i: usize, j: usize) -> (usize, usize) {
    (i.min(j), i.max(j))
}

impl FlatModel {
    /// Builds and validates a model. Containments are closed under
    /// reflexivity and transitivity; meets are keyed by unordered pairs.
    pub fn new(
        ambient_dim: usize,
        flats: Vec<Flat>,
        containments: &[(usize, usize)],
        meets: &[Meet],
    ) -> Result<Self> {
        let m = Self::unchecked(ambient_dim, flats, containments, meets)?;
        m.validate()?;
        Ok(m)
    }

    /// Builds a model without checking its invariants. Only index ranges
    /// are checked. Used for negative controls.
    pub fn unchecked(
        ambient_dim: usize,
        flats: Vec<Flat>,
        containments: &[(usize, usize)],
        meets: &[Meet],
    ) -> Result<Self> {
        let n = flats.len();
        let bad = |i: usize| Error::InvalidModel(format!("flat index {i} out of range"));
        let mut le = vec![vec![false; n]; n];
        for (i, row) in le.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(i, j) in containments {
            if i >= n {
                return Err(bad(i));
            }
            if j >= n {
                return Err(bad(j));
            }
            le[i][j] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if le[i][k] {
                    let row = le[k].clone();
                    for (x, &y) in le[i].iter_mut().zip(&row) {
                        *x |= y;
                    }
                }
            }
        }
        let mut table = BTreeMap::new();
        for ((i, j), comps) in meets {
            for &x in [i, j].into_iter().chain(comps) {
                if x >= n {
                    return Err(bad(x));
                }
            }
            let mut comps = comps.clone();
            comps.sort_unstable();
            comps.dedup();
            table.insert(key(*i, *j), comps);
        }
        Ok(FlatModel {
            ambient_dim,
            flats,
            le,
            meets: table,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn flats(&self) -> &[Flat] {
        &self.flats
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    /// Whether flat `i` is contained in flat `j`.
    pub fn contained(&self, i: usize, j: usize) -> bool {
        self.le[i][j]
    }

    pub fn strictly_contained(&self, i: usize, j: usize) -> bool {
        i != j && self.le[i][j]
    }

    /// All strict containments `(sub, sup)` in lexicographic order.
    pub fn containments(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.strictly_contained(i, j))
            .collect()
    }

    pub fn meets(&self) -> &BTreeMap<(usize, usize), Vec<usize>> {
        &self.meets
    }

    pub fn meet(&self, i: usize, j: usize) -> Option<&[usize]> {
        self.meets.get(&key(i, j)).map(Vec::as_slice)
    }

    /// The flat containing every flat, if any.
    pub fn ambient(&self) -> Option<usize> {
        (0..self.len()).find(|&a| (0..self.len()).all(|i| self.le[i][a]))
    }

    pub fn validate(&self) -> Result<()> {
        let err = |s: String| Err(Error::InvalidModel(s));
        let Some(top) = self.ambient() else {
            return err("no flat contains all others".into());
        };
        let t = &self.flats[top];
        if t.dim != self.ambient_dim || !t.special {
            return err(format!(
                "ambient flat {} must be special of dimension {}",
                t.label, self.ambient_dim
            ));
        }
        for f in &self.flats {
            if f.dim > self.ambient_dim {
                return err(format!("flat {} exceeds the ambient dimension", f.label));
            }
            if f.special && !f.weakly_special {
                return err(format!(
                    "flat {} is special but not weakly special",
                    f.label
                ));
            }
        }
        for (i, j) in self.containments() {
            if self.le[j][i] {
                return err(format!(
                    "flats {} and {} contain each other",
                    self.flats[i].label, self.flats[j].label
                ));
            }
            if self.flats[i].dim >= self.flats[j].dim {
                return err(format!(
                    "{} is strictly inside {} without smaller dimension",
                    self.flats[i].label, self.flats[j].label
                ));
            }
        }
        for (&(i, j), comps) in &self.meets {
            let (a, b) = (&self.flats[i], &self.flats[j]);
            if !a.weakly_special || !b.weakly_special {
                return err(format!(
                    "meet of {} and {} listed for a non weakly special flat",
                    a.label, b.label
                ));
            }
            for &c in comps {
                let f = &self.flats[c];
                if !self.le[c][i] || !self.le[c][j] {
                    return err(format!(
                        "meet component {} not inside {} and {}",
                        f.label, a.label, b.label
                    ));
                }
                if !f.weakly_special || (a.special && b.special && !f.special) {
                    return err(format!(
                        "meet component {} of {} and {} lacks the flags of its parents",
                        f.label, a.label, b.label
                    ));
                }
            }
        }
        Ok(())
    }

    /// The unique smallest flat above `f` among those accepted by `pick`.
    fn smallest_above(&self, f: usize, pick: impl Fn(&Flat) -> bool, what: &str) -> Result<usize> {
        let cands: Vec<usize> = (0..self.len())
            .filter(|&s| pick(&self.flats[s]) && self.le[f][s])
            .collect();
        let least: Vec<usize> = cands
            .iter()
            .copied()
            .filter(|&s| cands.iter().all(|&o| self.le[s][o]))
            .collect();
        match least.as_slice() {
            [s] => Ok(*s),
            _ => Err(Error::InvalidModel(format!(
                "flat {} has no smallest {what} flat above it",
                self.flats[f].label
            ))),
        }
    }

    pub fn closure_and_defect(&self, f: usize) -> Result<ModelClosure> {
        if f >= self.len() {
            return Err(Error::InvalidModel(format!("flat index {f} out of range")));
        }
        let special = self.smallest_above(f, |x| x.special, "special")?;
        let weakly_special = self.smallest_above(f, |x| x.weakly_special, "weakly special")?;
        let dim = self.flats[f].dim as i64;
        Ok(ModelClosure {
            special,
            weakly_special,
            defect: self.flats[special].dim as i64 - dim,
            weak_defect: self.flats[weakly_special].dim as i64 - dim,
        })
    }

    pub fn closures(&self) -> Result<Vec<ModelClosure>> {
        (0..self.len())
            .map(|f| self.closure_and_defect(f))
            .collect()
    }

    pub fn check_defect_condition(&self) -> Result<DefectVerdict> {
        let cl = self.closures()?;
        let gap = |i: usize| cl[i].defect - cl[i].weak_defect;
        for (sub, sup) in self.containments() {
            if gap(sup) > gap(sub) {
                return Ok(DefectVerdict::Violation { sub, sup });
            }
        }
        Ok(DefectVerdict::Holds)
    }

    fn optimal_with(
        &self,
        v: usize,
        cl: &[ModelClosure],
        defect: impl Fn(&ModelClosure) -> i64,
    ) -> Vec<usize> {
        (0..self.len())
            .filter(|&w| self.le[w][v])
            .filter(|&w| {
                (0..self.len()).all(|u| {
                    !(self.strictly_contained(w, u) && self.le[u][v])
                        || defect(&cl[u]) > defect(&cl[w])
                })
            })
            .collect()
    }

    /// Flats `W` inside `v` such that every flat strictly between `W` and
    /// `v` (inclusive) has larger defect.
    pub fn optimal_flats(&self, v: usize) -> Result<Vec<usize>> {
        let cl = self.closures()?;
        Ok(self.optimal_with(v, &cl, |c| c.defect))
    }

    pub fn weakly_optimal_flats(&self, v: usize) -> Result<Vec<usize>> {
        let cl = self.closures()?;
        Ok(self.optimal_with(v, &cl, |c| c.weak_defect))
    }

    /// First `(v, w)` with `w` optimal but not weakly optimal for `v`.
    pub fn check_optimal_implies_weakly_optimal(&self) -> Result<Option<(usize, usize)>> {
        let cl = self.closures()?;
        for v in 0..self.len() {
            let opt = self.optimal_with(v, &cl, |c| c.defect);
            let wopt: BTreeSet<usize> = self
                .optimal_with(v, &cl, |c| c.weak_defect)
                .into_iter()
                .collect();
            if let Some(&w) = opt.iter().find(|w| !wopt.contains(w)) {
                return Ok(Some((v, w)));
            }
        }
        Ok(None)
    }

    fn pink_threshold(&self, v: usize, d: i64, cl: &[ModelClosure]) -> i64 {
        (cl[v].defect - 1).min(d)
    }

    /// Special flats of codimension at least `ambient_dim - t`.
    fn small_specials(&self, t: i64) -> Vec<usize> {
        (0..self.len())
            .filter(|&s| self.flats[s].special && self.flats[s].dim as i64 <= t)
            .collect()
    }

    /// Checks on the model that each maximal flat of `v` inside a special
    /// flat of dimension at most `min(defect(v) - 1, d)` lies under a proper
    /// optimal flat of `v` of defect at most `d`, following the usual proof:
    /// take the largest `U` between `W` and `v` with `defect(U) <= defect(W)`.
    pub fn check_pink_form(&self, v: usize, d: i64) -> Result<PinkVerdict> {
        let cl = self.closures()?;
        let t = self.pink_threshold(v, d, &cl);
        if t < 0 {
            return Ok(PinkVerdict::Holds);
        }
        let optimal: BTreeSet<usize> = self
            .optimal_with(v, &cl, |c| c.defect)
            .into_iter()
            .collect();
        for s in self.small_specials(t) {
            let common: Vec<usize> = (0..self.len())
                .filter(|&w| self.le[w][v] && self.le[w][s])
                .collect();
            let components = common
                .iter()
                .copied()
                .filter(|&w| !common.iter().any(|&o| self.strictly_contained(w, o)));
            for w in components {
                let u = (0..self.len())
                    .filter(|&u| self.le[w][u] && self.le[u][v] && cl[u].defect <= cl[w].defect)
                    .max_by_key(|&u| (self.flats[u].dim, std::cmp::Reverse(u)))
                    .expect("w itself qualifies");
                if !(optimal.contains(&u) && u != v && cl[u].defect <= d) {
                    return Ok(PinkVerdict::Violation {
                        atypical: w,
                        special: s,
                    });
                }
            }
        }
        Ok(PinkVerdict::Holds)
    }

    /// Direct restatement: every flat of `v` inside a special flat of
    /// dimension at most `min(defect(v) - 1, d)` lies under some proper
    /// optimal flat of `v` of defect at most `d`.
    pub fn pink_oracle(&self, v: usize, d: i64) -> Result<PinkVerdict> {
        let cl = self.closures()?;
        let t = self.pink_threshold(v, d, &cl);
        if t < 0 {
            return Ok(PinkVerdict::Holds);
        }
        let optimal = self.optimal_with(v, &cl, |c| c.defect);
        let specials = self.small_specials(t);
        for w in (0..self.len()).filter(|&w| self.le[w][v]) {
            let Some(&s) = specials.iter().find(|&&s| self.le[w][s]) else {
                continue;
            };
            let covered = optimal
                .iter()
                .any(|&u| u != v && self.le[w][u] && cl[u].defect <= d);
            if !covered {
                return Ok(PinkVerdict::Violation {
                    atypical: w,
                    special: s,
                });
            }
        }
        Ok(PinkVerdict::Holds)
    }
}

/// Four flats `A ⊃ W ⊃ V ⊃ V'` with `W` weakly special but not special and
/// `V'` a special point: every invariant holds, yet the gap between defect
/// and weak defect grows from `V'` to `V`.
pub fn defect_negative_control() -> FlatModel {
    let flats = vec![
        Flat::new("A", 3, true, true),
        Flat::new("W", 2, false, true),
        Flat::new("V", 1, false, false),
        Flat::new("V'", 0, true, true),
    ];
    FlatModel::new(3, flats, &[(1, 0), (2, 1), (3, 2)], &[((1, 3), vec![3])])
        .expect("the control satisfies every model invariant")
}

/// A model in which an atypical point of the curve-like flat `V` (index 1)
/// sits under no proper optimal flat. It needs a special flat `S'` strictly
/// inside the special point `S` with larger dimension, so it is built
/// without validation.
pub fn pink_negative_control() -> FlatModel {
    let flats = vec![
        Flat::new("A", 2, true, true),
        Flat::new("V", 1, false, false),
        Flat::new("S", 0, true, true),
        Flat::new("S'", 1, true, true),
        Flat::new("W", 0, false, false),
    ];
    FlatModel::unchecked(
        2,
        flats,
        &[(1, 0), (2, 0), (3, 2), (4, 3), (4, 1)],
        &[((2, 3), vec![3])],
    )
    .expect("indices in range")
}

/// A primitive Pythagorean triple `a^2 + b^2 = c^2` with `a < b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PythLine {
    pub a: u64,
    pub b: u64,
    pub c: u64,
}

/// The first `k` primitive triples ordered by `c`, then `a`, from
/// `(m^2 - n^2, 2mn, m^2 + n^2)` over coprime `m > n` of opposite parity.
pub fn pythagorean_lines(k: usize) -> Vec<PythLine> {
    if k == 0 {
        return vec![];
    }
    let mut found: Vec<PythLine> = Vec::new();
    let mut m: u64 = 2;
    loop {
        // every later m gives c >= m^2 + 1
        if found.len() >= k {
            found.sort_by_key(|l| (l.c, l.a));
            if found[k - 1].c < m * m + 1 {
                found.truncate(k);
                return found;
            }
        }
        for n in 1..m {
            if (m + n) % 2 == 1 && m.gcd(&n) == 1 {
                let (x, y) = (m * m - n * n, 2 * m * n);
                found.push(PythLine {
                    a: x.min(y),
                    b: x.max(y),
                    c: m * m + n * n,
                });
            }
        }
        m += 1;
    }
}

/// Default bound on the number of flats an exporter may produce.
pub const MAX_EXPORT_FLATS: usize = 64;

/// Closes `seeds` (plus the ambient torus) under special closures and
/// components of pairwise intersections.
fn close_cosets(n: usize, seeds: Vec<GeneralCoset>, max_flats: usize) -> Result<Vec<GeneralCoset>> {
    let mut out: Vec<GeneralCoset> = vec![GeneralCoset::ambient(n)];
    let push = |out: &mut Vec<GeneralCoset>, c: GeneralCoset| -> Result<bool> {
        if c.ambient_dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: c.ambient_dim(),
            });
        }
        if out.contains(&c) {
            return Ok(false);
        }
        if out.len() >= max_flats {
            return Err(Error::InvalidArgument(format!(
                "model exceeds {max_flats} flats"
            )));
        }
        out.push(c);
        Ok(true)
    };
    for c in seeds {
        push(&mut out, c)?;
    }
    let mut done = 0;
    while done < out.len() {
        let c = out[done].clone();
        push(&mut out, special_closure_of_coset(&c).into_coset())?;
        for j in 0..=done {
            let other = out[j].clone();
            for comp in intersect_cosets(&c, &other)? {
                push(&mut out, comp)?;
            }
        }
        done += 1;
    }
    Ok(out)
}

fn coset_flat(label: String, c: &GeneralCoset) -> Flat {
    Flat::new(label, c.dim(), c.is_torsion(), true)
}

type Relations = (Vec<(usize, usize)>, Vec<Meet>);

/// Containments and meet tables of a closed coset family.
fn coset_relations(cosets: &[GeneralCoset]) -> Result<Relations> {
    let mut cont = Vec::new();
    let mut meets = Vec::new();
    for (i, a) in cosets.iter().enumerate() {
        for (j, b) in cosets.iter().enumerate() {
            if i != j && b.contains_coset(a)? {
                cont.push((i, j));
            }
        }
        for (j, b) in cosets.iter().enumerate().skip(i + 1) {
            let comps = intersect_cosets(a, b)?
                .iter()
                .map(|c| cosets.iter().position(|x| x == c).expect("closed family"))
                .collect();
            meets.push(((i, j), comps));
        }
    }
    Ok((cont, meets))
}

/// Model of the cosets generated by `seeds`: the ambient torus, the seeds,
/// their special closures and all intersection components. Flat `0` is
/// the ambient torus; seeds keep their relative order after it.
pub fn coset_model(
    n: usize,
    seeds: &[GeneralCoset],
    max_flats: usize,
) -> Result<(FlatModel, Vec<GeneralCoset>)> {
    let cosets = close_cosets(n, seeds.to_vec(), max_flats)?;
    let flats = cosets
        .iter()
        .enumerate()
        .map(|(i, c)| coset_flat(format!("K{i}"), c))
        .collect();
    let (cont, meets) = coset_relations(&cosets)?;
    Ok((FlatModel::new(n, flats, &cont, &meets)?, cosets))
}

/// Model of a curve, its closures and the given sample points with their
/// closures. Returns the model and the index of the curve flat. Points
/// other than the samples are not recorded as lying on the curve, so the
/// model is a sub-model of the true containment order.
pub fn curve_model(
    c: &ParamCurve,
    params: &[BigRational],
    max_flats: usize,
) -> Result<(FlatModel, usize)> {
    let n = c.ambient_dim();
    let cl = c.closures()?;
    let mut seeds = vec![cl.ws_closure.clone(), cl.sp_closure.as_coset().clone()];
    let mut samples = Vec::new();
    for t in params {
        let p = GeneralCoset::point(&c.evaluate_point(t)?);
        seeds.push(
            point_closures(&p.as_point().expect("a point"))
                .0
                .into_coset(),
        );
        seeds.push(p.clone());
        samples.push(p);
    }
    let cosets = close_cosets(n, seeds, max_flats)?;
    let mut flats: Vec<Flat> = cosets
        .iter()
        .enumerate()
        .map(|(i, k)| coset_flat(format!("K{i}"), k))
        .collect();
    let (mut cont, meets) = coset_relations(&cosets)?;
    let index = |k: &GeneralCoset| cosets.iter().position(|x| x == k).expect("closed family");
    let curve = if cl.is_weakly_special() {
        let i = index(&cl.ws_closure);
        flats[i].label = "C".into();
        i
    } else {
        if flats.len() >= max_flats {
            return Err(Error::InvalidArgument(format!(
                "model exceeds {max_flats} flats"
            )));
        }
        flats.push(Flat::new("C", 1, false, false));
        let ci = flats.len() - 1;
        for (i, k) in cosets.iter().enumerate() {
            if k.contains_coset(&cl.ws_closure)? {
                cont.push((ci, i));
            }
        }
        for p in &samples {
            cont.push((index(p), ci));
        }
        ci
    };
    Ok((FlatModel::new(n, flats, &cont, &meets)?, curve))
}

/// Model of a curve with the torsion points found by a scan: one flat per
/// root of each record whose witnessed lattice has full rank (so each root
/// is a torsion point). Other records are left out. Returns the model and
/// the index of the curve flat.
pub fn scan_model(
    c: &ParamCurve,
    records: &[AtypicalRecord],
    max_flats: usize,
) -> Result<(FlatModel, usize)> {
    let n = c.ambient_dim();
    let (base, ci) = curve_model(c, &[], max_flats)?;
    let mut flats = base.flats.clone();
    let mut cont = base.containments();
    let mut meets: Vec<Meet> = base.meets.iter().map(|(k, v)| (*k, v.clone())).collect();
    let first = flats.len();
    for r in records.iter().filter(|r| r.witnessed_lattice.rank() == n) {
        for k in 0..r.defining_poly.deg() {
            if flats.len() >= max_flats {
                return Err(Error::InvalidArgument(format!(
                    "model exceeds {max_flats} flats"
                )));
            }
            flats.push(Flat::new(format!("{}#{k}", r.defining_poly), 0, true, true));
        }
    }
    for p in first..flats.len() {
        // every flat of the base model other than its points contains C
        for f in 0..first {
            if base.contained(ci, f) {
                cont.push((p, f));
                if base.flats[f].weakly_special {
                    meets.push(((p, f), vec![p]));
                }
            }
        }
        for q in first..p {
            meets.push(((q, p), vec![]));
        }
    }
    FlatModel::new(n, flats, &cont, &meets).map(|m| (m, ci))
}
