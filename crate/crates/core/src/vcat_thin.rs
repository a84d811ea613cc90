//! Categories enriched in a finite lattice, and the sufficient conditions for
//! a functor between them to be effective for descent.
//!
//! The base is cartesian, so the monoidal unit is `top` and products of
//! hom-objects are meets. A functor is reported effective for descent when
//! either the three hom-family conditions hold, or the base is Heyting and the
//! functor is a *-quotient. Neither route is necessary, so a failing check
//! yields [`Verdict::Inconclusive`], never a negative verdict.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fam_thin::{classify, is_effective_descent, Classification, DescentWitness, FamError, ThinFamily};
use crate::lattice::{detect_heyting, Elem, FiniteLattice, LatticeError};
use crate::report::Verdict;

/// First violation found by [`validate_category`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CategoryViolation {
    NotSquare { row: usize, len: usize, expected: usize },
    ElementOutOfRange { x: usize, y: usize, elem: Elem },
    UnitNotTop { x: usize, hom: Elem },
    /// `H[y][z] ∧ H[x][y] <= H[x][z]` fails.
    Composition { x: usize, y: usize, z: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctorViolation {
    DifferentLattices,
    MapLength { len: usize, expected: usize },
    ObjectOutOfRange { x: usize, image: usize },
    /// `H_C[x][y] <= H_D[Fx][Fy]` fails.
    HomNotPreserved { x: usize, y: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VcatError {
    #[error("invalid enriched category: {0:?}")]
    InvalidCategory(CategoryViolation),
    #[error("invalid enriched functor: {0:?}")]
    InvalidFunctor(FunctorViolation),
    #[error(transparent)]
    Fam(#[from] FamError),
}

impl From<LatticeError> for VcatError {
    fn from(e: LatticeError) -> Self {
        VcatError::Fam(FamError::Lattice(e))
    }
}

/// Checks the unit and composition laws of a lattice-valued hom matrix.
pub fn validate_category(lat: &FiniteLattice, hom: &[Vec<Elem>]) -> Result<(), CategoryViolation> {
    let n = hom.len();
    for (x, row) in hom.iter().enumerate() {
        if row.len() != n {
            return Err(CategoryViolation::NotSquare { row: x, len: row.len(), expected: n });
        }
        if let Some((y, &elem)) = row.iter().enumerate().find(|(_, &e)| e >= lat.size()) {
            return Err(CategoryViolation::ElementOutOfRange { x, y, elem });
        }
    }
    for x in 0..n {
        if hom[x][x] != lat.top() {
            return Err(CategoryViolation::UnitNotTop { x, hom: hom[x][x] });
        }
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if !lat.leq(lat.meet(hom[y][z], hom[x][y]), hom[x][z]) {
                    return Err(CategoryViolation::Composition { x, y, z });
                }
            }
        }
    }
    Ok(())
}

/// A category enriched in a finite lattice: a square matrix of hom-objects.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThinVCategory<'a> {
    lat: &'a FiniteLattice,
    hom: Vec<Vec<Elem>>,
}

impl<'a> ThinVCategory<'a> {
    pub fn new(lat: &'a FiniteLattice, hom: Vec<Vec<Elem>>) -> Result<Self, VcatError> {
        validate_category(lat, &hom).map_err(VcatError::InvalidCategory)?;
        Ok(Self { lat, hom })
    }

    /// The lattice as a category enriched over itself, `H[x][y] = x → y`.
    /// Only exists for Heyting lattices.
    pub fn self_enriched(lat: &'a FiniteLattice) -> Option<Self> {
        let h = detect_heyting(lat)?;
        let hom = lat.elements().map(|x| lat.elements().map(|y| h.imp(x, y)).collect()).collect();
        Some(Self { lat, hom })
    }

    /// The order of the lattice with two-valued homs: `top` when `x <= y`,
    /// `bottom` otherwise.
    pub fn order_enriched(lat: &'a FiniteLattice) -> Self {
        let hom = lat
            .elements()
            .map(|x| lat.elements().map(|y| if lat.leq(x, y) { lat.top() } else { lat.bottom() }).collect())
            .collect();
        Self { lat, hom }
    }

    pub fn lattice(&self) -> &'a FiniteLattice {
        self.lat
    }

    pub fn object_count(&self) -> usize {
        self.hom.len()
    }

    #[inline]
    pub fn hom(&self, x: usize, y: usize) -> Elem {
        self.hom[x][y]
    }

    pub fn hom_matrix(&self) -> &[Vec<Elem>] {
        &self.hom
    }
}

/// A functor between lattice-enriched categories over the same lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThinVFunctor<'a> {
    source: ThinVCategory<'a>,
    target: ThinVCategory<'a>,
    map: Vec<usize>,
    /// `fibers[y]` lists the objects mapped to `y`, ascending.
    fibers: Vec<Vec<usize>>,
}

impl<'a> ThinVFunctor<'a> {
    pub fn new(source: ThinVCategory<'a>, target: ThinVCategory<'a>, map: Vec<usize>) -> Result<Self, VcatError> {
        let err = |v| Err(VcatError::InvalidFunctor(v));
        if !std::ptr::eq(source.lat, target.lat) && source.lat != target.lat {
            return err(FunctorViolation::DifferentLattices);
        }
        if map.len() != source.object_count() {
            return err(FunctorViolation::MapLength { len: map.len(), expected: source.object_count() });
        }
        if let Some((x, &image)) = map.iter().enumerate().find(|(_, &y)| y >= target.object_count()) {
            return err(FunctorViolation::ObjectOutOfRange { x, image });
        }
        let lat = source.lat;
        for x in 0..map.len() {
            for y in 0..map.len() {
                if !lat.leq(source.hom(x, y), target.hom(map[x], map[y])) {
                    return err(FunctorViolation::HomNotPreserved { x, y });
                }
            }
        }
        let mut fibers = vec![Vec::new(); target.object_count()];
        for (x, &y) in map.iter().enumerate() {
            fibers[y].push(x);
        }
        Ok(Self { source, target, map, fibers })
    }

    pub fn identity(cat: ThinVCategory<'a>) -> Self {
        let n = cat.object_count();
        Self::new(cat.clone(), cat, (0..n).collect()).expect("identity functors are valid")
    }

    pub fn source(&self) -> &ThinVCategory<'a> {
        &self.source
    }

    pub fn target(&self) -> &ThinVCategory<'a> {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn fiber(&self, y: usize) -> &[usize] {
        &self.fibers[y]
    }

    pub fn lattice(&self) -> &'a FiniteLattice {
        self.source.lat
    }

    pub fn is_surjective_on_objects(&self) -> bool {
        self.fibers.iter().all(|f| !f.is_empty())
    }

    fn unsurjective_object(&self) -> Option<usize> {
        self.fibers.iter().position(|f| f.is_empty())
    }
}

/// Lexicographic enumeration of `fiber(ys[0]) × ... × fiber(ys[k-1])`.
fn fiber_tuples(f: &ThinVFunctor<'_>, ys: &[usize]) -> Vec<Vec<usize>> {
    ys.iter().fold(vec![Vec::new()], |acc, &y| {
        acc.into_iter()
            .flat_map(|prefix| {
                f.fiber(y).iter().map(move |&x| {
                    let mut t = prefix.clone();
                    t.push(x);
                    t
                })
            })
            .collect()
    })
}

/// Meet of the consecutive homs `H[p0][p1] ∧ H[p1][p2] ∧ ...` along a path.
fn path_meet(cat: &ThinVCategory<'_>, path: &[usize]) -> Elem {
    path.windows(2).fold(cat.lat.top(), |acc, w| cat.lat.meet(acc, cat.hom(w[0], w[1])))
}

/// The family `(H_C[x_0][x_1] ∧ ... ∧ H_C[x_{k-1}][x_k])` over all paths in
/// the fibers of `ys`, into the corresponding meet of target homs.
fn path_family<'a>(f: &ThinVFunctor<'a>, ys: &[usize]) -> ThinFamily<'a> {
    let codomain = path_meet(&f.target, ys);
    let members = fiber_tuples(f, ys).iter().map(|xs| path_meet(&f.source, xs)).collect();
    ThinFamily::new(f.lattice(), codomain, members).expect("functors preserve homs, so members lie below the codomain")
}

/// `(C(x0,x1))_{x_i ∈ F*y_i} → D(y0,y1)`.
pub fn hom_family<'a>(f: &ThinVFunctor<'a>, y0: usize, y1: usize) -> ThinFamily<'a> {
    path_family(f, &[y0, y1])
}

/// `(C(x1,x2) ∧ C(x0,x1))_{x_i ∈ F*y_i} → D(y1,y2) ∧ D(y0,y1)`.
pub fn pair_family<'a>(f: &ThinVFunctor<'a>, y0: usize, y1: usize, y2: usize) -> ThinFamily<'a> {
    path_family(f, &[y0, y1, y2])
}

/// The composable-triple family over `(y0, y1, y2, y3)`.
pub fn triple_family<'a>(f: &ThinVFunctor<'a>, y0: usize, y1: usize, y2: usize, y3: usize) -> ThinFamily<'a> {
    path_family(f, &[y0, y1, y2, y3])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StarQuotientWitness {
    NotSurjective { object: usize },
    /// The join over fibers differs from `D(y1,y2) ∧ D(y0,y1)`.
    JoinMismatch { y0: usize, y1: usize, y2: usize, join: Elem, expected: Elem },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarQuotientCheck {
    pub holds: bool,
    pub witness: Option<StarQuotientWitness>,
}

/// Surjectivity on objects plus
/// `⋁_{x_i ∈ F*y_i} C(x1,x2) ∧ C(x0,x1) = D(y1,y2) ∧ D(y0,y1)` for every triple.
pub fn check_star_quotient(f: &ThinVFunctor<'_>) -> StarQuotientCheck {
    if let Some(object) = f.unsurjective_object() {
        return StarQuotientCheck { holds: false, witness: Some(StarQuotientWitness::NotSurjective { object }) };
    }
    let n = f.target.object_count();
    let lat = f.lattice();
    for y0 in 0..n {
        for y1 in 0..n {
            for y2 in 0..n {
                let fam = pair_family(f, y0, y1, y2);
                let join = lat.join_family(fam.members());
                if join != fam.codomain() {
                    let witness = StarQuotientWitness::JoinMismatch { y0, y1, y2, join, expected: fam.codomain() };
                    return StarQuotientCheck { holds: false, witness: Some(witness) };
                }
            }
        }
    }
    StarQuotientCheck { holds: true, witness: None }
}

/// Counterexample to one of the hom-family conditions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum ConditionWitness {
    /// Hom family over `(y0, y1)` is not effective for descent.
    HomObjects { objects: [usize; 2], members: Vec<Elem>, codomain: Elem, reason: DescentWitness },
    /// Composable-pair family over `(y0, y1, y2)` is not a stable regular epimorphism.
    ComposablePairs { objects: [usize; 3], members: Vec<Elem>, codomain: Elem, classification: Classification },
    /// Composable-triple family over `(y0, y1, y2, y3)` is not a stable epimorphism.
    ComposableTriples { objects: [usize; 4], codomain: Elem },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctorReport {
    pub surjective_on_objects: bool,
    pub heyting: bool,
    pub star_quotient: bool,
    pub cond_i: bool,
    pub cond_ii: bool,
    pub cond_iii: bool,
    pub verdict: Verdict,
    pub star_quotient_witness: Option<StarQuotientWitness>,
    /// First counterexample found for each failing condition, in condition order.
    pub witnesses: Vec<ConditionWitness>,
}

/// Condition (I): every hom family is effective for descent.
pub fn check_condition_hom_objects(f: &ThinVFunctor<'_>, budget: u64) -> Result<Option<ConditionWitness>, FamError> {
    let n = f.target.object_count();
    for y0 in 0..n {
        for y1 in 0..n {
            let fam = hom_family(f, y0, y1);
            let verdict = is_effective_descent(&fam, budget)?;
            if let Some(reason) = verdict.witness {
                return Ok(Some(ConditionWitness::HomObjects {
                    objects: [y0, y1],
                    members: fam.members().to_vec(),
                    codomain: fam.codomain(),
                    reason,
                }));
            }
        }
    }
    Ok(None)
}

/// Condition (II): every composable-pair family is a stable regular epimorphism.
pub fn check_condition_pairs(f: &ThinVFunctor<'_>) -> Option<ConditionWitness> {
    let n = f.target.object_count();
    for y0 in 0..n {
        for y1 in 0..n {
            for y2 in 0..n {
                let fam = pair_family(f, y0, y1, y2);
                let classification = classify(&fam);
                if !classification.is_stable_regular_epi {
                    return Some(ConditionWitness::ComposablePairs {
                        objects: [y0, y1, y2],
                        members: fam.members().to_vec(),
                        codomain: fam.codomain(),
                        classification,
                    });
                }
            }
        }
    }
    None
}

/// Condition (III): every composable-triple family is a stable epimorphism.
pub fn check_condition_triples(f: &ThinVFunctor<'_>) -> Option<ConditionWitness> {
    let n = f.target.object_count();
    for y0 in 0..n {
        for y1 in 0..n {
            for y2 in 0..n {
                for y3 in 0..n {
                    let fam = triple_family(f, y0, y1, y2, y3);
                    if !classify(&fam).is_stable_epi {
                        return Some(ConditionWitness::ComposableTriples {
                            objects: [y0, y1, y2, y3],
                            codomain: fam.codomain(),
                        });
                    }
                }
            }
        }
    }
    None
}

pub fn check_conditions(f: &ThinVFunctor<'_>, budget: u64) -> Result<FunctorReport, FamError> {
    let heyting = f.lattice().is_heyting();
    let star = check_star_quotient(f);
    let hom_objects = check_condition_hom_objects(f, budget)?;
    let pairs = check_condition_pairs(f);
    let triples = check_condition_triples(f);

    let (cond_i, cond_ii, cond_iii) = (hom_objects.is_none(), pairs.is_none(), triples.is_none());
    let surjective_on_objects = f.is_surjective_on_objects();
    let effective = (cond_i && cond_ii && cond_iii) || (heyting && surjective_on_objects && star.holds);
    Ok(FunctorReport {
        surjective_on_objects,
        heyting,
        star_quotient: star.holds,
        cond_i,
        cond_ii,
        cond_iii,
        verdict: if effective { Verdict::EffectiveDescent } else { Verdict::Inconclusive },
        star_quotient_witness: star.witness,
        witnesses: [hom_objects, pairs, triples].into_iter().flatten().collect(),
    })
}
