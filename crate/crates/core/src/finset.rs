//! Effective descent for ordinary categories, i.e. categories enriched in
//! finite sets.
//!
//! Each hom-function factors as a surjection onto its image followed by an
//! inclusion. The conditions on a functor become statements about families of
//! subsets ("mono covers") of hom-sets and of products of hom-sets:
//!
//! * (i) the image surjections are effective for descent, which always holds
//!   for finite sets;
//! * (ii) the images of the hom-functions over the fibers jointly cover each
//!   target hom-set;
//! * (iii) the images over composable pairs jointly cover each product
//!   `D(y1,y2) × D(y0,y1)`;
//! * (iv) the images over composable triples jointly cover each triple product.
//!
//! The criterion used for (ii) is checked against [`oracle_condition_ii`],
//! which glues every bounded descent datum over a cover and compares the
//! result with the slice over the codomain.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fincat::FiniteCategory;
use crate::report::Verdict;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FinsetError {
    #[error("function value {value} at {at} is outside a codomain of size {codomain}")]
    ValueOutOfRange { at: usize, value: usize, codomain: usize },
    #[error("invalid category: {0}")]
    InvalidCategory(String),
    #[error("invalid functor: {0}")]
    InvalidFunctor(String),
    #[error("invalid gluing datum: {0}")]
    InvalidDatum(String),
    #[error("invalid cover: {0}")]
    InvalidCover(String),
    #[error("oracle bound exceeded: {what} is {actual}, bound {bound}")]
    BudgetExceeded { what: &'static str, actual: usize, bound: usize },
}

/// A function `{0..domain} → {0..codomain}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinSetMor {
    codomain_size: usize,
    table: Vec<usize>,
}

impl FinSetMor {
    pub fn new(codomain_size: usize, table: Vec<usize>) -> Result<Self, FinsetError> {
        if let Some((at, &value)) = table.iter().enumerate().find(|(_, &v)| v >= codomain_size) {
            return Err(FinsetError::ValueOutOfRange { at, value, codomain: codomain_size });
        }
        Ok(Self { codomain_size, table })
    }

    pub fn identity(n: usize) -> Self {
        Self { codomain_size: n, table: (0..n).collect() }
    }

    pub fn domain_size(&self) -> usize {
        self.table.len()
    }

    pub fn codomain_size(&self) -> usize {
        self.codomain_size
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &FinSetMor) -> FinSetMor {
        FinSetMor { codomain_size: self.codomain_size, table: first.table.iter().map(|&x| self.table[x]).collect() }
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.codomain_size];
        self.table.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.codomain_size];
        self.table.iter().for_each(|&v| seen[v] = true);
        seen.into_iter().all(|s| s)
    }
}

/// `f = inclusion ∘ surjection`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageFactorization {
    pub surjection: FinSetMor,
    pub inclusion: FinSetMor,
}

/// Factors through the image, listing image points in order of first preimage.
pub fn image_factorization(f: &FinSetMor) -> ImageFactorization {
    let mut slot: Vec<Option<usize>> = vec![None; f.codomain_size];
    let mut image = Vec::new();
    let surjection = f
        .table
        .iter()
        .map(|&v| {
            *slot[v].get_or_insert_with(|| {
                image.push(v);
                image.len() - 1
            })
        })
        .collect();
    ImageFactorization {
        surjection: FinSetMor { codomain_size: image.len(), table: surjection },
        inclusion: FinSetMor { codomain_size: f.codomain_size, table: image },
    }
}

/// Mixed-radix indexing of a product of finite sets.
fn encode(factors: &[usize], coords: &[usize]) -> usize {
    factors.iter().zip(coords).fold(0, |acc, (&n, &c)| acc * n + c)
}

fn decode(factors: &[usize], mut index: usize) -> Vec<usize> {
    let mut coords = vec![0; factors.len()];
    for (c, &n) in coords.iter_mut().zip(factors).rev() {
        *c = index % n;
        index /= n;
    }
    coords
}

/// A category with finite hom-sets; elements of `C(x,y)` are `0..hom_size(x,y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrdinaryCategory {
    hom_sizes: Vec<Vec<usize>>,
    /// `compose[x][y][z][g][f] = g∘f` for `f ∈ C(x,y)`, `g ∈ C(y,z)`.
    compose: Vec<Vec<Vec<Vec<Vec<usize>>>>>,
    ids: Vec<usize>,
}

impl OrdinaryCategory {
    pub fn new(
        hom_sizes: Vec<Vec<usize>>,
        compose: Vec<Vec<Vec<Vec<Vec<usize>>>>>,
        ids: Vec<usize>,
    ) -> Result<Self, FinsetError> {
        let bad = |msg: String| Err(FinsetError::InvalidCategory(msg));
        let n = hom_sizes.len();
        if hom_sizes.iter().any(|r| r.len() != n) {
            return bad("hom size matrix is not square".into());
        }
        if ids.len() != n {
            return bad(format!("{} identities for {n} objects", ids.len()));
        }
        for (x, &id) in ids.iter().enumerate() {
            if id >= hom_sizes[x][x] {
                return bad(format!("identity {id} of object {x} is not in C({x},{x})"));
            }
        }
        if compose.len() != n || compose.iter().any(|a| a.len() != n || a.iter().any(|b| b.len() != n)) {
            return bad("composition tables must be indexed by object triples".into());
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let table = &compose[x][y][z];
                    let (nf, ng, nh) = (hom_sizes[x][y], hom_sizes[y][z], hom_sizes[x][z]);
                    if table.len() != ng || table.iter().any(|row| row.len() != nf || row.iter().any(|&h| h >= nh)) {
                        return bad(format!("composition table ({x},{y},{z}) has the wrong shape or range"));
                    }
                }
            }
        }
        let cat = Self { hom_sizes, compose, ids };
        for x in 0..n {
            for y in 0..n {
                for f in 0..cat.hom_size(x, y) {
                    if cat.compose(x, y, y, cat.ids[y], f) != f || cat.compose(x, x, y, f, cat.ids[x]) != f {
                        return bad(format!("identity law fails at {f} ∈ C({x},{y})"));
                    }
                }
            }
        }
        for (w, x, y, z) in quadruples(n) {
            for f in 0..cat.hom_size(w, x) {
                for g in 0..cat.hom_size(x, y) {
                    let gf = cat.compose(w, x, y, g, f);
                    for h in 0..cat.hom_size(y, z) {
                        if cat.compose(w, y, z, h, gf) != cat.compose(w, x, z, cat.compose(x, y, z, h, g), f) {
                            return bad(format!("associativity fails at objects ({w},{x},{y},{z})"));
                        }
                    }
                }
            }
        }
        Ok(cat)
    }

    /// Hom-sets of a [`FiniteCategory`], each numbered in morphism order.
    pub fn from_finite_category(cat: &FiniteCategory) -> Self {
        let n = cat.object_count();
        let position = |x, y, m| cat.hom(x, y).iter().position(|&k| k == m).expect("hom membership");
        let hom_sizes = (0..n).map(|x| (0..n).map(|y| cat.hom(x, y).len()).collect()).collect();
        let compose = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| {
                        (0..n)
                            .map(|z| {
                                cat.hom(y, z)
                                    .iter()
                                    .map(|&g| cat.hom(x, y).iter().map(|&f| position(x, z, cat.compose(g, f))).collect())
                                    .collect()
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let ids = (0..n).map(|x| position(x, x, cat.identity(x))).collect();
        Self { hom_sizes, compose, ids }
    }

    pub fn object_count(&self) -> usize {
        self.hom_sizes.len()
    }

    pub fn hom_size(&self, x: usize, y: usize) -> usize {
        self.hom_sizes[x][y]
    }

    pub fn hom_sizes(&self) -> &[Vec<usize>] {
        &self.hom_sizes
    }

    pub fn compose_tables(&self) -> &[Vec<Vec<Vec<Vec<usize>>>>] {
        &self.compose
    }

    pub fn ids(&self) -> &[usize] {
        &self.ids
    }

    /// `g∘f` for `f ∈ C(x,y)`, `g ∈ C(y,z)`.
    #[inline]
    pub fn compose(&self, x: usize, y: usize, z: usize, g: usize, f: usize) -> usize {
        self.compose[x][y][z][g][f]
    }
}

fn quadruples(n: usize) -> impl Iterator<Item = (usize, usize, usize, usize)> {
    (0..n).flat_map(move |a| (0..n).flat_map(move |b| (0..n).flat_map(move |c| (0..n).map(move |d| (a, b, c, d)))))
}

/// A functor between ordinary categories: an object map plus one function per
/// hom-set, `hom_maps[x0][x1]: C(x0,x1) → D(Fx0,Fx1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrdinaryFunctor {
    source: OrdinaryCategory,
    target: OrdinaryCategory,
    object_map: Vec<usize>,
    hom_maps: Vec<Vec<FinSetMor>>,
    fibers: Vec<Vec<usize>>,
}

impl OrdinaryFunctor {
    pub fn new(
        source: OrdinaryCategory,
        target: OrdinaryCategory,
        object_map: Vec<usize>,
        hom_maps: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self, FinsetError> {
        let bad = |msg: String| Err(FinsetError::InvalidFunctor(msg));
        let (n, m) = (source.object_count(), target.object_count());
        if object_map.len() != n || object_map.iter().any(|&y| y >= m) {
            return bad("object map has the wrong length or range".into());
        }
        if hom_maps.len() != n || hom_maps.iter().any(|r| r.len() != n) {
            return bad("hom maps must be indexed by pairs of source objects".into());
        }
        let mut maps = Vec::with_capacity(n);
        for (x0, row) in hom_maps.into_iter().enumerate() {
            let mut out = Vec::with_capacity(n);
            for (x1, table) in row.into_iter().enumerate() {
                if table.len() != source.hom_size(x0, x1) {
                    return bad(format!("hom map ({x0},{x1}) has {} entries, expected {}", table.len(), source.hom_size(x0, x1)));
                }
                let codomain = target.hom_size(object_map[x0], object_map[x1]);
                out.push(FinSetMor::new(codomain, table).map_err(|e| FinsetError::InvalidFunctor(format!("hom map ({x0},{x1}): {e}")))?);
            }
            maps.push(out);
        }
        for x in 0..n {
            if maps[x][x].apply(source.ids()[x]) != target.ids()[object_map[x]] {
                return bad(format!("identity of object {x} is not preserved"));
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let (fx, fy, fz) = (object_map[x], object_map[y], object_map[z]);
                    for f in 0..source.hom_size(x, y) {
                        for g in 0..source.hom_size(y, z) {
                            let lhs = maps[x][z].apply(source.compose(x, y, z, g, f));
                            let rhs = target.compose(fx, fy, fz, maps[y][z].apply(g), maps[x][y].apply(f));
                            if lhs != rhs {
                                return bad(format!("composition not preserved at objects ({x},{y},{z})"));
                            }
                        }
                    }
                }
            }
        }
        let mut fibers = vec![Vec::new(); m];
        for (x, &y) in object_map.iter().enumerate() {
            fibers[y].push(x);
        }
        Ok(Self { source, target, object_map, hom_maps: maps, fibers })
    }

    pub fn identity(cat: OrdinaryCategory) -> Self {
        let n = cat.object_count();
        let hom_maps = (0..n).map(|x| (0..n).map(|y| (0..cat.hom_size(x, y)).collect()).collect()).collect();
        Self::new(cat.clone(), cat, (0..n).collect(), hom_maps).expect("identity functors are valid")
    }

    pub fn source(&self) -> &OrdinaryCategory {
        &self.source
    }

    pub fn target(&self) -> &OrdinaryCategory {
        &self.target
    }

    pub fn object_map(&self) -> &[usize] {
        &self.object_map
    }

    pub fn hom_map(&self, x0: usize, x1: usize) -> &FinSetMor {
        &self.hom_maps[x0][x1]
    }

    pub fn fiber(&self, y: usize) -> &[usize] {
        &self.fibers[y]
    }

    pub fn is_surjective_on_objects(&self) -> bool {
        self.fibers.iter().all(|f| !f.is_empty())
    }
}

/// A family of subsets `M_i ⊆ Y = {0..codomain_size}`, each listed ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonoCover {
    pub codomain_size: usize,
    pub members: Vec<Vec<usize>>,
}

impl MonoCover {
    pub fn new(codomain_size: usize, members: Vec<Vec<usize>>) -> Result<Self, FinsetError> {
        for (i, m) in members.iter().enumerate() {
            if m.iter().any(|&y| y >= codomain_size) || m.windows(2).any(|w| w[0] >= w[1]) {
                return Err(FinsetError::InvalidCover(format!("member {i} is not an ascending subset of {codomain_size}")));
            }
        }
        Ok(Self { codomain_size, members })
    }

    pub fn index_count(&self) -> usize {
        self.members.len()
    }

    /// Smallest point of `Y` outside every member.
    pub fn first_uncovered(&self) -> Option<usize> {
        let mut covered = vec![false; self.codomain_size];
        for &y in self.members.iter().flatten() {
            covered[y] = true;
        }
        covered.iter().position(|&c| !c)
    }

    /// Non-empty index set and every point of `Y` in some member.
    pub fn is_jointly_surjective(&self) -> bool {
        !self.members.is_empty() && self.first_uncovered().is_none()
    }

    fn contains(&self, i: usize, y: usize) -> bool {
        self.members[i].binary_search(&y).is_ok()
    }
}

/// The cover of `D(y_{k-1},y_k) × ... × D(y0,y1)` by the images of the
/// composable `k`-tuples of source homs over the fibers of `ys`.
/// Index order is lexicographic in `(x0, ..., xk)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathCover {
    pub objects: Vec<usize>,
    /// Sizes of the product factors, outermost (last hom) first.
    pub factors: Vec<usize>,
    pub fibers: Vec<Vec<usize>>,
    pub cover: MonoCover,
}

impl PathCover {
    pub fn decode(&self, y: usize) -> Vec<usize> {
        decode(&self.factors, y)
    }
}

fn fiber_paths(f: &OrdinaryFunctor, ys: &[usize]) -> Vec<Vec<usize>> {
    ys.iter().fold(vec![Vec::new()], |acc, &y| {
        acc.into_iter()
            .flat_map(|p| {
                f.fiber(y).iter().map(move |&x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect()
    })
}

/// Image of `F × ... × F` on `C(x_{k-1},x_k) × ... × C(x0,x1)`, computed by
/// factoring the product map.
fn product_image(f: &OrdinaryFunctor, xs: &[usize], target_factors: &[usize]) -> Vec<usize> {
    let homs: Vec<(usize, usize)> = xs.windows(2).rev().map(|w| (w[0], w[1])).collect();
    let source_factors: Vec<usize> = homs.iter().map(|&(a, b)| f.source.hom_size(a, b)).collect();
    let size: usize = source_factors.iter().product();
    let table = (0..size)
        .map(|s| {
            let coords = decode(&source_factors, s);
            let images: Vec<usize> = homs.iter().zip(&coords).map(|(&(a, b), &c)| f.hom_map(a, b).apply(c)).collect();
            encode(target_factors, &images)
        })
        .collect();
    let product = FinSetMor { codomain_size: target_factors.iter().product(), table };
    let mut image = image_factorization(&product).inclusion.table;
    image.sort_unstable();
    image
}

/// The mono cover over the object path `ys` (two objects: hom-sets; three:
/// composable pairs; four: composable triples).
pub fn path_cover(f: &OrdinaryFunctor, ys: &[usize]) -> PathCover {
    let factors: Vec<usize> = ys.windows(2).rev().map(|w| f.target.hom_size(w[0], w[1])).collect();
    let fibers = fiber_paths(f, ys);
    let members = fibers.iter().map(|xs| product_image(f, xs, &factors)).collect();
    let cover = MonoCover { codomain_size: factors.iter().product(), members };
    PathCover { objects: ys.to_vec(), factors, fibers, cover }
}

/// All mono covers of a functor, keyed by object tuples in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonoCovers {
    pub homs: Vec<PathCover>,
    pub pairs: Vec<PathCover>,
    pub triples: Vec<PathCover>,
}

pub fn build_mono_covers(f: &OrdinaryFunctor) -> MonoCovers {
    let m = f.target.object_count();
    let tuples = |k: usize| -> Vec<Vec<usize>> {
        (0..k).fold(vec![Vec::new()], |acc, _| {
            acc.into_iter()
                .flat_map(|p| {
                    (0..m).map(move |y| {
                        let mut q = p.clone();
                        q.push(y);
                        q
                    })
                })
                .collect()
        })
    };
    MonoCovers {
        homs: tuples(2).iter().map(|ys| path_cover(f, ys)).collect(),
        pairs: tuples(3).iter().map(|ys| path_cover(f, ys)).collect(),
        triples: tuples(4).iter().map(|ys| path_cover(f, ys)).collect(),
    }
}

pub const CONDITION_I_NOTE: &str =
    "condition (i) holds: surjections of finite sets are regular epimorphisms, which are effective for descent in finite sets";
pub const CONDITION_III_NOTE: &str =
    "condition (iii) stability is automatic: finite sets have stable unions of subobjects";

/// Condition (i). Always true for finite sets; see [`CONDITION_I_NOTE`].
pub fn check_condition_i(_f: &OrdinaryFunctor) -> bool {
    true
}

pub fn check_condition_ii(f: &OrdinaryFunctor, y0: usize, y1: usize) -> bool {
    path_cover(f, &[y0, y1]).cover.is_jointly_surjective()
}

pub fn check_condition_iii(f: &OrdinaryFunctor, y0: usize, y1: usize, y2: usize) -> bool {
    path_cover(f, &[y0, y1, y2]).cover.is_jointly_surjective()
}

pub fn check_condition_iv(f: &OrdinaryFunctor, y0: usize, y1: usize, y2: usize, y3: usize) -> bool {
    path_cover(f, &[y0, y1, y2, y3]).cover.is_jointly_surjective()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FinsetWitness {
    /// Some object along the path has an empty fiber.
    EmptyIndex { condition: String, objects: Vec<usize> },
    /// A hom-element (or tuple of hom-elements, last hom first) outside every image.
    Uncovered { condition: String, objects: Vec<usize>, element: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinsetReport {
    pub surjective_on_objects: bool,
    pub condition_i: bool,
    pub condition_ii: bool,
    pub condition_iii: bool,
    pub condition_iv: bool,
    pub verdict: Verdict,
    /// First counterexample for each failing condition.
    pub witnesses: Vec<FinsetWitness>,
    pub notes: Vec<String>,
}

fn first_failure(covers: &[PathCover], condition: &str) -> Option<FinsetWitness> {
    covers.iter().find(|c| !c.cover.is_jointly_surjective()).map(|c| match c.cover.first_uncovered() {
        Some(y) if !c.cover.members.is_empty() => FinsetWitness::Uncovered {
            condition: condition.to_string(),
            objects: c.objects.clone(),
            element: c.decode(y),
        },
        _ => FinsetWitness::EmptyIndex { condition: condition.to_string(), objects: c.objects.clone() },
    })
}

pub fn check_effective_descent_finset(f: &OrdinaryFunctor) -> FinsetReport {
    let covers = build_mono_covers(f);
    let ii = first_failure(&covers.homs, "ii");
    let iii = first_failure(&covers.pairs, "iii");
    let iv = first_failure(&covers.triples, "iv");
    let (condition_ii, condition_iii, condition_iv) = (ii.is_none(), iii.is_none(), iv.is_none());
    let condition_i = check_condition_i(f);
    let effective = condition_i && condition_ii && condition_iii && condition_iv;
    FinsetReport {
        surjective_on_objects: f.is_surjective_on_objects(),
        condition_i,
        condition_ii,
        condition_iii,
        condition_iv,
        verdict: if effective { Verdict::EffectiveDescent } else { Verdict::Inconclusive },
        witnesses: [ii, iii, iv].into_iter().flatten().collect(),
        notes: vec![CONDITION_I_NOTE.to_string(), CONDITION_III_NOTE.to_string()],
    }
}

/// Descent data over a mono cover: sets `W_i` with maps `γ_i: W_i → M_i`
/// and transition bijections `θ_ij` between the parts of `W_i` and `W_j` lying
/// over `M_i ∩ M_j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GluingDatum {
    /// `gamma[i][w]` is the point of `Y` below `w ∈ W_i`.
    pub gamma: Vec<Vec<usize>>,
    /// `theta[i][j][w]` is `θ_ij(w)`, defined exactly when `γ_i(w) ∈ M_j`.
    pub theta: Vec<Vec<Vec<Option<usize>>>>,
}

impl GluingDatum {
    /// Checks: `γ_i` lands in `M_i`; `θ_ij` is a bijection between the parts
    /// over `M_i ∩ M_j` commuting with the `γ`s; `θ_ii = id`; and the cocycle
    /// `θ_jk ∘ θ_ij = θ_ik` over triple overlaps.
    pub fn validate(&self, cover: &MonoCover) -> Result<(), FinsetError> {
        let bad = |msg: String| Err(FinsetError::InvalidDatum(msg));
        let k = cover.index_count();
        if self.gamma.len() != k || self.theta.len() != k || self.theta.iter().any(|r| r.len() != k) {
            return bad(format!("datum must be indexed by the {k} cover members"));
        }
        for (i, g) in self.gamma.iter().enumerate() {
            if let Some(w) = g.iter().position(|&y| !cover.contains(i, y)) {
                return bad(format!("γ_{i}({w}) is not in M_{i}"));
            }
        }
        for i in 0..k {
            for j in 0..k {
                let t = &self.theta[i][j];
                if t.len() != self.gamma[i].len() {
                    return bad(format!("θ_{i}{j} has the wrong length"));
                }
                let mut hit = vec![false; self.gamma[j].len()];
                for (w, &img) in t.iter().enumerate() {
                    let y = self.gamma[i][w];
                    match (cover.contains(j, y), img) {
                        (false, None) => {}
                        (true, Some(v)) if v < hit.len() && self.gamma[j][v] == y => {
                            if std::mem::replace(&mut hit[v], true) {
                                return bad(format!("θ_{i}{j} is not injective"));
                            }
                        }
                        _ => return bad(format!("θ_{i}{j} is not a map over Y between the overlap parts at {w}")),
                    }
                }
                let expected = self.gamma[j].iter().filter(|&&y| cover.contains(i, y)).count();
                if hit.iter().filter(|&&h| h).count() != expected {
                    return bad(format!("θ_{i}{j} is not surjective onto the overlap part"));
                }
            }
            if self.theta[i][i].iter().enumerate().any(|(w, &v)| v != Some(w)) {
                return bad(format!("θ_{i}{i} is not the identity"));
            }
        }
        for i in 0..k {
            for j in 0..k {
                for l in 0..k {
                    for w in 0..self.gamma[i].len() {
                        let y = self.gamma[i][w];
                        if !(cover.contains(j, y) && cover.contains(l, y)) {
                            continue;
                        }
                        let via = self.theta[i][j][w].and_then(|v| self.theta[j][l][v]);
                        if via != self.theta[i][l][w] {
                            return bad(format!("cocycle θ_{j}{l}∘θ_{i}{j} = θ_{i}{l} fails at {w}"));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// The result of gluing: a set `Z` over `Y` with the maps `W_i → Z`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluedObject {
    /// `over[z]` is the image of `z` in `Y`.
    pub over: Vec<usize>,
    pub inclusions: Vec<Vec<usize>>,
}

fn find(parent: &mut [usize], mut a: usize) -> usize {
    while parent[a] != a {
        parent[a] = parent[parent[a]];
        a = parent[a];
    }
    a
}

/// `Z = (⊔ W_i) / (w ~ θ_ij(w))`, with elements of `Z` ordered by their
/// first representative in `⊔ W_i`.
pub fn glue(cover: &MonoCover, datum: &GluingDatum) -> Result<GluedObject, FinsetError> {
    datum.validate(cover)?;
    let offsets: Vec<usize> = datum
        .gamma
        .iter()
        .scan(0, |acc, g| {
            let start = *acc;
            *acc += g.len();
            Some(start)
        })
        .collect();
    let total: usize = datum.gamma.iter().map(Vec::len).sum();
    let mut parent: Vec<usize> = (0..total).collect();
    for (i, row) in datum.theta.iter().enumerate() {
        for (j, t) in row.iter().enumerate() {
            for (w, v) in t.iter().enumerate() {
                if let Some(v) = *v {
                    let (a, b) = (find(&mut parent, offsets[i] + w), find(&mut parent, offsets[j] + v));
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut class_of = vec![usize::MAX; total];
    let mut over = Vec::new();
    for (i, g) in datum.gamma.iter().enumerate() {
        for (w, &y) in g.iter().enumerate() {
            let root = find(&mut parent, offsets[i] + w);
            if class_of[root] == usize::MAX {
                class_of[root] = over.len();
                over.push(y);
            }
        }
    }
    let inclusions = datum
        .gamma
        .iter()
        .enumerate()
        .map(|(i, g)| (0..g.len()).map(|w| class_of[find(&mut parent, offsets[i] + w)]).collect())
        .collect();
    Ok(GluedObject { over, inclusions })
}

/// Pullback of `Z → Y` along each member: `W_i = {z : over(z) ∈ M_i}` in
/// `Z` order, with `θ` the identity on shared points of `Z`.
pub fn restrict(cover: &MonoCover, over: &[usize]) -> GluingDatum {
    let parts: Vec<Vec<usize>> = (0..cover.index_count())
        .map(|i| (0..over.len()).filter(|&z| cover.contains(i, over[z])).collect())
        .collect();
    let gamma = parts.iter().map(|p| p.iter().map(|&z| over[z]).collect()).collect();
    let theta = parts
        .iter()
        .map(|pi| parts.iter().map(|pj| pi.iter().map(|z| pj.iter().position(|x| x == z)).collect()).collect())
        .collect();
    GluingDatum { gamma, theta }
}

/// Do the inclusions `W_i → Z` identify each `W_i` with the part of `Z` over
/// `M_i`, compatibly with `γ` and `θ`?
pub fn realizes(cover: &MonoCover, datum: &GluingDatum, glued: &GluedObject) -> bool {
    (0..cover.index_count()).all(|i| {
        let inc = &glued.inclusions[i];
        let mut image: Vec<usize> = inc.clone();
        image.sort_unstable();
        let over_mi: Vec<usize> = (0..glued.over.len()).filter(|&z| cover.contains(i, glued.over[z])).collect();
        image.windows(2).all(|w| w[0] != w[1])
            && image == over_mi
            && inc.iter().zip(&datum.gamma[i]).all(|(&z, &y)| glued.over[z] == y)
            && (0..cover.index_count()).all(|j| {
                datum.theta[i][j]
                    .iter()
                    .enumerate()
                    .all(|(w, v)| v.is_none_or(|v| glued.inclusions[j][v] == inc[w]))
            })
    })
}

/// Is there a family of bijections `W_i → W'_i` over `Y` intertwining the
/// transitions? Brute force over fiberwise permutations.
pub fn data_isomorphic(cover: &MonoCover, a: &GluingDatum, b: &GluingDatum) -> bool {
    let k = cover.index_count();
    let mut fibers_a = Vec::new();
    let mut fibers_b = Vec::new();
    for i in 0..k {
        if a.gamma[i].len() != b.gamma[i].len() {
            return false;
        }
        for y in 0..cover.codomain_size {
            let fa: Vec<usize> = (0..a.gamma[i].len()).filter(|&w| a.gamma[i][w] == y).collect();
            let fb: Vec<usize> = (0..b.gamma[i].len()).filter(|&w| b.gamma[i][w] == y).collect();
            if fa.len() != fb.len() {
                return false;
            }
            if !fa.is_empty() {
                fibers_a.push((i, fa));
                fibers_b.push(fb);
            }
        }
    }
    let mut sigma: Vec<Vec<Option<usize>>> = a.gamma.iter().map(|g| vec![None; g.len()]).collect();
    search_iso(a, b, &fibers_a, &fibers_b, 0, &mut sigma)
}

fn consistent(a: &GluingDatum, b: &GluingDatum, sigma: &[Vec<Option<usize>>]) -> bool {
    (0..sigma.len()).all(|i| {
        (0..sigma.len()).all(|j| {
            a.theta[i][j].iter().enumerate().all(|(w, t)| match (sigma[i][w], t) {
                (Some(sw), Some(v)) => match sigma[j][*v] {
                    Some(sv) => b.theta[i][j][sw] == Some(sv),
                    None => true,
                },
                _ => true,
            })
        })
    })
}

fn search_iso(
    a: &GluingDatum,
    b: &GluingDatum,
    fibers_a: &[(usize, Vec<usize>)],
    fibers_b: &[Vec<usize>],
    depth: usize,
    sigma: &mut Vec<Vec<Option<usize>>>,
) -> bool {
    if depth == fibers_a.len() {
        return true;
    }
    let (i, fa) = &fibers_a[depth];
    let fb = &fibers_b[depth];
    for perm in permutations(fa.len()) {
        for (pos, &w) in fa.iter().enumerate() {
            sigma[*i][w] = Some(fb[perm[pos]]);
        }
        if consistent(a, b, sigma) && search_iso(a, b, fibers_a, fibers_b, depth + 1, sigma) {
            return true;
        }
    }
    for &w in fa {
        sigma[*i][w] = None;
    }
    false
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// Size limits for [`oracle_condition_ii`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleBounds {
    pub max_codomain: usize,
    pub max_index: usize,
    /// Largest fiber of any `W_i` (and of any `Z`) over a point of `Y`.
    pub max_fiber: usize,
}

impl Default for OracleBounds {
    fn default() -> Self {
        Self { max_codomain: 3, max_index: 3, max_fiber: 2 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OracleWitness {
    EmptyCover,
    /// Gluing this datum does not give back the datum.
    NotRealized { datum: GluingDatum },
    /// Two non-isomorphic sets over `Y`, given by fiber sizes, restrict to
    /// isomorphic data.
    Collision { fibers_a: Vec<usize>, fibers_b: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleVerdict {
    pub holds: bool,
    pub witness: Option<OracleWitness>,
    pub data_count: usize,
}

/// All functions `0..len → 0..=max`, lexicographic.
fn bounded_tuples(len: usize, max: usize) -> Vec<Vec<usize>> {
    (0..len).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter()
            .flat_map(|p| {
                (0..=max).map(move |v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect()
    })
}

/// Every valid gluing datum whose fibers have at most `max_fiber` points, one
/// per choice of fiber sizes and transition permutations. Each `W_i` lists
/// its points fiber by fiber in ascending order of `Y`.
pub fn enumerate_gluing_data(cover: &MonoCover, max_fiber: usize) -> Vec<GluingDatum> {
    let k = cover.index_count();
    let n = cover.codomain_size;
    // Fiber sizes must agree on overlaps, so a size per point of Y suffices
    // wherever the point is covered.
    let covered: Vec<usize> = (0..n).filter(|&y| (0..k).any(|i| cover.contains(i, y))).collect();
    let mut out = Vec::new();
    for sizes in bounded_tuples(covered.len(), max_fiber) {
        let mut size_at = vec![0; n];
        for (&y, &s) in covered.iter().zip(&sizes) {
            size_at[y] = s;
        }
        // W_i lists (y, copy) pairs; `start[i][y]` is where y's fiber begins.
        let mut gamma = vec![Vec::new(); k];
        let mut start = vec![vec![0; n]; k];
        for i in 0..k {
            for &y in &cover.members[i] {
                start[i][y] = gamma[i].len();
                gamma[i].extend(std::iter::repeat_n(y, size_at[y]));
            }
        }
        // Free choices: a permutation of each fiber for θ_ij, i < j.
        let slots: Vec<(usize, usize, usize)> = (0..k)
            .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
            .flat_map(|(i, j)| {
                cover.members[i].iter().filter(|&&y| cover.contains(j, y)).map(move |&y| (i, j, y)).collect::<Vec<_>>()
            })
            .filter(|&(_, _, y)| size_at[y] > 0)
            .collect();
        let choices: Vec<Vec<Vec<usize>>> = slots.iter().map(|&(_, _, y)| permutations(size_at[y])).collect();
        let mut odometer = vec![0usize; slots.len()];
        loop {
            let mut theta: Vec<Vec<Vec<Option<usize>>>> =
                (0..k).map(|i| (0..k).map(|_| vec![None; gamma[i].len()]).collect()).collect();
            for i in 0..k {
                for w in 0..gamma[i].len() {
                    theta[i][i][w] = Some(w);
                }
            }
            for (s, &(i, j, y)) in slots.iter().enumerate() {
                let perm = &choices[s][odometer[s]];
                for (c, &p) in perm.iter().enumerate() {
                    let (wi, wj) = (start[i][y] + c, start[j][y] + p);
                    theta[i][j][wi] = Some(wj);
                    theta[j][i][wj] = Some(wi);
                }
            }
            let datum = GluingDatum { gamma: gamma.clone(), theta };
            if datum.validate(cover).is_ok() {
                out.push(datum);
            }
            let mut pos = slots.len();
            let done = loop {
                if pos == 0 {
                    break true;
                }
                pos -= 1;
                odometer[pos] += 1;
                if odometer[pos] < choices[pos].len() {
                    break false;
                }
                odometer[pos] = 0;
            };
            if done {
                break;
            }
        }
    }
    out
}

/// Sets over `Y` with fiber sizes `fibers`, points listed fiber by fiber.
fn set_over(fibers: &[usize]) -> Vec<usize> {
    fibers.iter().enumerate().flat_map(|(y, &s)| std::iter::repeat_n(y, s)).collect()
}

/// Brute-force test that the comparison from sets over `Y` to gluing data
/// over `cover` is an equivalence, within `bounds`.
pub fn oracle_condition_ii(cover: &MonoCover, bounds: OracleBounds) -> Result<OracleVerdict, FinsetError> {
    let check = |what, actual, bound| {
        if actual > bound {
            Err(FinsetError::BudgetExceeded { what, actual, bound })
        } else {
            Ok(())
        }
    };
    check("codomain size", cover.codomain_size, bounds.max_codomain)?;
    check("index count", cover.index_count(), bounds.max_index)?;
    if cover.members.is_empty() {
        return Ok(OracleVerdict { holds: false, witness: Some(OracleWitness::EmptyCover), data_count: 0 });
    }
    let data = enumerate_gluing_data(cover, bounds.max_fiber);
    let data_count = data.len();
    for datum in &data {
        let glued = glue(cover, datum)?;
        if !realizes(cover, datum, &glued) || !data_isomorphic(cover, datum, &restrict(cover, &glued.over)) {
            return Ok(OracleVerdict {
                holds: false,
                witness: Some(OracleWitness::NotRealized { datum: datum.clone() }),
                data_count,
            });
        }
    }
    let objects = bounded_tuples(cover.codomain_size, bounds.max_fiber);
    let images: Vec<GluingDatum> = objects.iter().map(|f| restrict(cover, &set_over(f))).collect();
    for a in 0..objects.len() {
        for b in a + 1..objects.len() {
            if data_isomorphic(cover, &images[a], &images[b]) {
                let witness = OracleWitness::Collision { fibers_a: objects[a].clone(), fibers_b: objects[b].clone() };
                return Ok(OracleVerdict { holds: false, witness: Some(witness), data_count });
            }
        }
    }
    Ok(OracleVerdict { holds: true, witness: None, data_count })
}

/// The full subcategory of finite sets on `{0}, {0,1}, ..., {0..max}`: object
/// `s` is the set of size `s`. Returns the category and, per morphism, its
/// function table.
pub fn truncated_finset_category(max: usize) -> (FiniteCategory, Vec<FinSetMor>) {
    let mut functions = Vec::new();
    let mut ends = Vec::new();
    for a in 0..=max {
        for b in 0..=max {
            for table in bounded_tuples(a, b.saturating_sub(1)) {
                if b == 0 && a > 0 {
                    continue;
                }
                functions.push(FinSetMor { codomain_size: b, table });
                ends.push((a, b));
            }
        }
    }
    let lookup: HashMap<(usize, &FinSetMor), usize> =
        functions.iter().enumerate().map(|(k, f)| ((ends[k].0, f), k)).collect();
    let compose = (0..functions.len())
        .map(|g| {
            (0..functions.len())
                .map(|f| {
                    (ends[f].1 == ends[g].0).then(|| lookup[&(ends[f].0, &functions[g].after(&functions[f]))])
                })
                .collect()
        })
        .collect();
    let identity = (0..=max).map(|s| lookup[&(s, &FinSetMor::identity(s))]).collect();
    let cat = FiniteCategory::new(max + 1, &ends, identity, compose).expect("finite sets form a category");
    (cat, functions)
}
