//! Morphisms `(X_i)_{i∈I} <= Y` of families over a thin base.
//!
//! [`classify`] decides the epimorphism classes directly from the lattice
//! tables. [`is_effective_descent`] is the brute-force route: it enumerates
//! every connected descent datum and tests whether the comparison
//! `z ↦ (z ∧ X_i)_i` is an order isomorphism from `↓Y` onto them.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{meet_distributes_over_family, Elem, FiniteLattice, LatticeError};

/// Default cap on the number of candidate tuples an enumeration may visit.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("member {index} ({member}) is not below the codomain {codomain}")]
    MemberNotBelowCodomain { index: usize, member: Elem, codomain: Elem },
    #[error("element {z} is not below the codomain {codomain}")]
    NotBelowCodomain { z: Elem, codomain: Elem },
    #[error("descent data are only enumerated for non-empty families")]
    EmptyFamily,
    #[error("enumeration budget exceeded: more than {budget} candidates tested")]
    BudgetExceeded { candidates: u128, budget: u64 },
}

/// A morphism `(X_i)_{i∈I} <= Y` in the family completion of a lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThinFamily<'a> {
    lat: &'a FiniteLattice,
    codomain: Elem,
    members: Vec<Elem>,
}

impl<'a> ThinFamily<'a> {
    pub fn new(lat: &'a FiniteLattice, codomain: Elem, members: Vec<Elem>) -> Result<Self, FamError> {
        lat.check_elem(codomain)?;
        for (index, &member) in members.iter().enumerate() {
            lat.check_elem(member)?;
            if !lat.leq(member, codomain) {
                return Err(FamError::MemberNotBelowCodomain { index, member, codomain });
            }
        }
        Ok(Self { lat, codomain, members })
    }

    pub fn lattice(&self) -> &'a FiniteLattice {
        self.lat
    }

    pub fn codomain(&self) -> Elem {
        self.codomain
    }

    pub fn members(&self) -> &[Elem] {
        &self.members
    }

    pub fn index_count(&self) -> usize {
        self.members.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub is_epi: bool,
    pub is_stable_epi: bool,
    pub is_regular_epi: bool,
    pub is_stable_regular_epi: bool,
    /// Smallest `Z <= Y` at which the join fails to distribute, when the
    /// family is a regular epimorphism that is not stable.
    pub stability_counterexample: Option<Elem>,
}

pub fn classify(fam: &ThinFamily<'_>) -> Classification {
    let lat = fam.lat;
    let is_epi = !fam.members.is_empty();
    let is_regular_epi = is_epi && lat.join_family(&fam.members) == fam.codomain;
    let stability_counterexample = if is_regular_epi {
        lat.downset(fam.codomain)
            .into_iter()
            .find(|&z| !meet_distributes_over_family(lat, z, &fam.members))
    } else {
        None
    };
    Classification {
        is_epi,
        is_stable_epi: is_epi,
        is_regular_epi,
        is_stable_regular_epi: is_regular_epi && stability_counterexample.is_none(),
        stability_counterexample,
    }
}

/// Kernel pair of the family: entry `(i, j)` is `X_i ∧ X_j`, the pullback of
/// `X_i <= Y >= X_j`.
pub fn kernel_matrix(fam: &ThinFamily<'_>) -> Vec<Vec<Elem>> {
    fam.members
        .iter()
        .map(|&a| fam.members.iter().map(|&b| fam.lat.meet(a, b)).collect())
        .collect()
}

/// A connected descent datum `(W_i)_i` with `W_i <= X_i` and
/// `W_i ∧ X_j <= W_j` for all `i, j`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DescentDatumThin(pub Vec<Elem>);

impl DescentDatumThin {
    pub fn parts(&self) -> &[Elem] {
        &self.0
    }

    pub fn is_valid_for(&self, fam: &ThinFamily<'_>) -> bool {
        let lat = fam.lat;
        self.0.len() == fam.members.len()
            && self.0.iter().zip(&fam.members).all(|(&w, &x)| lat.leq(w, x))
            && self.0.iter().all(|&wi| {
                fam.members
                    .iter()
                    .zip(&self.0)
                    .all(|(&xj, &wj)| lat.leq(lat.meet(wi, xj), wj))
            })
    }

    /// Componentwise order.
    pub fn leq(&self, other: &Self, lat: &FiniteLattice) -> bool {
        self.0.iter().zip(&other.0).all(|(&a, &b)| lat.leq(a, b))
    }
}

/// Every connected descent datum of `fam`, in lexicographic order.
///
/// Depth-first over `↓X_0 × ↓X_1 × ...`, pruning a partial tuple as soon as
/// two of its parts violate the datum condition. `budget` caps the number of
/// candidate parts tested.
pub fn enumerate_descent_data(fam: &ThinFamily<'_>, budget: u64) -> Result<Vec<DescentDatumThin>, FamError> {
    if fam.members.is_empty() {
        return Err(FamError::EmptyFamily);
    }
    let choices: Vec<Vec<Elem>> = fam.members.iter().map(|&x| fam.lat.downset(x)).collect();
    let mut search = Search { fam, choices: &choices, budget, tested: 0, partial: Vec::new(), out: Vec::new() };
    search.extend()?;
    Ok(search.out)
}

struct Search<'s, 'a> {
    fam: &'s ThinFamily<'a>,
    choices: &'s [Vec<Elem>],
    budget: u64,
    tested: u64,
    partial: Vec<Elem>,
    out: Vec<DescentDatumThin>,
}

impl Search<'_, '_> {
    fn extend(&mut self) -> Result<(), FamError> {
        let k = self.partial.len();
        if k == self.choices.len() {
            self.out.push(DescentDatumThin(self.partial.clone()));
            return Ok(());
        }
        let (lat, xs) = (self.fam.lat, &self.fam.members);
        for &w in &self.choices[k] {
            self.tested += 1;
            if self.tested > self.budget {
                return Err(FamError::BudgetExceeded { candidates: u128::from(self.tested), budget: self.budget });
            }
            let fits = self.partial.iter().enumerate().all(|(j, &wj)| {
                lat.leq(lat.meet(wj, xs[k]), w) && lat.leq(lat.meet(w, xs[j]), wj)
            });
            if fits {
                self.partial.push(w);
                self.extend()?;
                self.partial.pop();
            }
        }
        Ok(())
    }
}

/// The comparison functor on objects: `z ↦ (z ∧ X_i)_i`.
pub fn comparison_image(fam: &ThinFamily<'_>, z: Elem) -> Result<DescentDatumThin, FamError> {
    fam.lat.check_elem(z)?;
    if !fam.lat.leq(z, fam.codomain) {
        return Err(FamError::NotBelowCodomain { z, codomain: fam.codomain });
    }
    Ok(DescentDatumThin(fam.members.iter().map(|&x| fam.lat.meet(z, x)).collect()))
}

/// Why the comparison fails to be an order isomorphism.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DescentWitness {
    /// The empty family is not even an epimorphism.
    EmptyFamily,
    /// Two distinct elements below `Y` with the same descent datum.
    Collision { z0: Elem, z1: Elem, image: DescentDatumThin },
    /// A descent datum outside the image of the comparison.
    NotInImage { datum: DescentDatumThin },
    /// `image(z0) <= image(z1)` although `z0 <= z1` fails.
    OrderNotReflected { z0: Elem, z1: Elem },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescentVerdict {
    pub effective: bool,
    pub witness: Option<DescentWitness>,
    /// Number of connected descent data enumerated.
    pub data_count: usize,
}

/// Decides effective descent by comparing `↓Y` with the enumerated connected
/// descent data.
pub fn is_effective_descent(fam: &ThinFamily<'_>, budget: u64) -> Result<DescentVerdict, FamError> {
    if fam.members.is_empty() {
        return Ok(DescentVerdict { effective: false, witness: Some(DescentWitness::EmptyFamily), data_count: 0 });
    }
    let data = enumerate_descent_data(fam, budget)?;
    let data_count = data.len();
    let fail = |witness| Ok(DescentVerdict { effective: false, witness: Some(witness), data_count });

    let below = fam.lat.downset(fam.codomain);
    let images: Vec<DescentDatumThin> = below
        .iter()
        .map(|&z| comparison_image(fam, z))
        .collect::<Result<_, _>>()?;

    for (a, img_a) in images.iter().enumerate() {
        if let Some(b) = (a + 1..images.len()).find(|&b| images[b] == *img_a) {
            return fail(DescentWitness::Collision { z0: below[a], z1: below[b], image: img_a.clone() });
        }
    }
    // Injective, so the image is the whole enumeration exactly when the counts match.
    if let Some(datum) = data.iter().find(|d| !images.contains(d)) {
        return fail(DescentWitness::NotInImage { datum: datum.clone() });
    }
    for (a, img_a) in images.iter().enumerate() {
        for (b, img_b) in images.iter().enumerate() {
            if img_a.leq(img_b, fam.lat) && !fam.lat.leq(below[a], below[b]) {
                return fail(DescentWitness::OrderNotReflected { z0: below[a], z1: below[b] });
            }
        }
    }
    Ok(DescentVerdict { effective: true, witness: None, data_count })
}
