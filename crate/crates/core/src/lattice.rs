//! Finite posets and bounded lattices.
//!
//! Elements are the indices `0..size`. Lattices are skeletal, so two elements
//! are isomorphic exactly when their indices are equal, and every table is
//! fully determined by the order matrix.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// An element of a finite poset, identified by its index.
pub type Elem = usize;

/// Which partial-order axiom an order matrix violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderAxiom {
    Reflexivity,
    Antisymmetry,
    Transitivity,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("order matrix must be non-empty and square (row {row} has {len} entries, expected {size})")]
    Shape { size: usize, row: usize, len: usize },
    #[error("not a partial order: {axiom:?} fails at ({a}, {b})")]
    NotAPartialOrder { axiom: OrderAxiom, a: Elem, b: Elem },
    #[error("not a lattice: ({a}, {b}) has no {}", if *.missing_meet { "greatest lower bound" } else { "least upper bound" })]
    NotALattice { a: Elem, b: Elem, missing_meet: bool },
    #[error("element {elem} out of range for a lattice of size {size}")]
    ElementOutOfRange { elem: Elem, size: usize },
    #[error("unknown builtin lattice `{0}`")]
    UnknownLattice(String),
}

/// A finite partially ordered set given by its order matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePoset {
    leq: Vec<Vec<bool>>,
}

impl FinitePoset {
    /// Checks the three order axioms and returns the first violation found.
    /// For transitivity the witness pair is `(a, c)`, the missing relation.
    pub fn new(leq: Vec<Vec<bool>>) -> Result<Self, LatticeError> {
        let size = leq.len();
        if size == 0 {
            return Err(LatticeError::Shape { size: 0, row: 0, len: 0 });
        }
        if let Some((row, r)) = leq.iter().enumerate().find(|(_, r)| r.len() != size) {
            return Err(LatticeError::Shape { size, row, len: r.len() });
        }
        for a in 0..size {
            if !leq[a][a] {
                return Err(LatticeError::NotAPartialOrder { axiom: OrderAxiom::Reflexivity, a, b: a });
            }
        }
        for a in 0..size {
            for b in (a + 1)..size {
                if leq[a][b] && leq[b][a] {
                    return Err(LatticeError::NotAPartialOrder { axiom: OrderAxiom::Antisymmetry, a, b });
                }
            }
        }
        for a in 0..size {
            for b in 0..size {
                if !leq[a][b] {
                    continue;
                }
                for c in 0..size {
                    if leq[b][c] && !leq[a][c] {
                        return Err(LatticeError::NotAPartialOrder { axiom: OrderAxiom::Transitivity, a, b: c });
                    }
                }
            }
        }
        Ok(Self { leq })
    }

    pub fn size(&self) -> usize {
        self.leq.len()
    }

    #[inline]
    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.leq[a][b]
    }

    pub fn matrix(&self) -> &[Vec<bool>] {
        &self.leq
    }

    /// Greatest element of `{c : pred(c)}`, if that set has a maximum.
    fn maximum_where(&self, pred: impl Fn(Elem) -> bool) -> Option<Elem> {
        let candidates: Vec<Elem> = (0..self.size()).filter(|&c| pred(c)).collect();
        candidates
            .iter()
            .copied()
            .find(|&m| candidates.iter().all(|&c| self.leq(c, m)))
    }

    fn minimum_where(&self, pred: impl Fn(Elem) -> bool) -> Option<Elem> {
        let candidates: Vec<Elem> = (0..self.size()).filter(|&c| pred(c)).collect();
        candidates
            .iter()
            .copied()
            .find(|&m| candidates.iter().all(|&c| self.leq(m, c)))
    }
}

/// A finite bounded lattice with precomputed meet and join tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteLattice {
    poset: FinitePoset,
    meet: Vec<Vec<Elem>>,
    join: Vec<Vec<Elem>>,
    bottom: Elem,
    top: Elem,
}

/// Validates `leq` as a partial order and computes meets and joins.
pub fn build_lattice(leq: Vec<Vec<bool>>) -> Result<FiniteLattice, LatticeError> {
    FiniteLattice::from_poset(FinitePoset::new(leq)?)
}

impl FiniteLattice {
    pub fn from_poset(poset: FinitePoset) -> Result<Self, LatticeError> {
        let n = poset.size();
        let mut meet = vec![vec![0; n]; n];
        let mut join = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                meet[a][b] = poset
                    .maximum_where(|c| poset.leq(c, a) && poset.leq(c, b))
                    .ok_or(LatticeError::NotALattice { a, b, missing_meet: true })?;
                join[a][b] = poset
                    .minimum_where(|c| poset.leq(a, c) && poset.leq(b, c))
                    .ok_or(LatticeError::NotALattice { a, b, missing_meet: false })?;
            }
        }
        // Pairwise meets and joins in a finite non-empty poset give the bounds.
        let bottom = (1..n).fold(0, |acc, x| meet[acc][x]);
        let top = (1..n).fold(0, |acc, x| join[acc][x]);
        Ok(Self { poset, meet, join, bottom, top })
    }

    pub fn size(&self) -> usize {
        self.poset.size()
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.size()
    }

    #[inline]
    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.poset.leq(a, b)
    }

    #[inline]
    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        self.meet[a][b]
    }

    #[inline]
    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        self.join[a][b]
    }

    pub fn bottom(&self) -> Elem {
        self.bottom
    }

    pub fn top(&self) -> Elem {
        self.top
    }

    pub fn meet_table(&self) -> &[Vec<Elem>] {
        &self.meet
    }

    pub fn join_table(&self) -> &[Vec<Elem>] {
        &self.join
    }

    pub fn check_elem(&self, elem: Elem) -> Result<Elem, LatticeError> {
        if elem < self.size() {
            Ok(elem)
        } else {
            Err(LatticeError::ElementOutOfRange { elem, size: self.size() })
        }
    }

    /// Join of a list of elements; the empty join is `bottom`.
    pub fn join_family(&self, elems: &[Elem]) -> Elem {
        elems.iter().fold(self.bottom, |acc, &x| self.join(acc, x))
    }

    /// Meet of a list of elements; the empty meet is `top`.
    pub fn meet_family(&self, elems: &[Elem]) -> Elem {
        elems.iter().fold(self.top, |acc, &x| self.meet(acc, x))
    }

    /// All `x <= y`, ascending.
    pub fn downset(&self, y: Elem) -> Vec<Elem> {
        self.elements().filter(|&x| self.leq(x, y)).collect()
    }

    pub fn upset(&self, y: Elem) -> Vec<Elem> {
        self.elements().filter(|&x| self.leq(y, x)).collect()
    }

    pub fn is_heyting(&self) -> bool {
        detect_heyting(self).is_some()
    }

    /// True when meets distribute over all binary joins.
    pub fn is_distributive(&self) -> bool {
        self.elements().all(|a| {
            self.elements().all(|b| {
                self.elements()
                    .all(|c| self.meet(a, self.join(b, c)) == self.join(self.meet(a, b), self.meet(a, c)))
            })
        })
    }

    /// The `k`-element chain `0 < 1 < ... < k-1`.
    pub fn chain(k: usize) -> Result<Self, LatticeError> {
        build_lattice((0..k).map(|a| (0..k).map(|b| a <= b).collect()).collect())
    }

    /// The boolean algebra of subsets of a `k`-element set; element `s` is the
    /// subset with bitmask `s`.
    pub fn boolean(k: u32) -> Result<Self, LatticeError> {
        let n = 1usize << k;
        build_lattice((0..n).map(|a| (0..n).map(|b| a & b == a).collect()).collect())
    }

    /// The diamond: bottom 0, atoms 1, 2, 3, top 4.
    pub fn m3() -> Self {
        let n = 5;
        let leq = (0..n)
            .map(|a| (0..n).map(|b| a == b || a == 0 || b == 4).collect())
            .collect();
        build_lattice(leq).expect("M3 is a lattice")
    }

    /// The pentagon: bottom 0, the chain 1 < 2, the side element 3, top 4.
    pub fn n5() -> Self {
        let n = 5;
        let leq = (0..n)
            .map(|a| (0..n).map(|b| a == b || a == 0 || b == 4 || (a == 1 && b == 2)).collect())
            .collect();
        build_lattice(leq).expect("N5 is a lattice")
    }

    /// Componentwise product; the pair `(a, b)` has index `a * rhs.size() + b`.
    pub fn product(lhs: &Self, rhs: &Self) -> Self {
        let m = rhs.size();
        let n = lhs.size() * m;
        let leq = (0..n)
            .map(|x| (0..n).map(|y| lhs.leq(x / m, y / m) && rhs.leq(x % m, y % m)).collect())
            .collect();
        build_lattice(leq).expect("products of lattices are lattices")
    }
}

/// The implication table of a Heyting lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeytingStructure {
    imp: Vec<Vec<Elem>>,
}

impl HeytingStructure {
    /// `a -> b`.
    #[inline]
    pub fn imp(&self, a: Elem, b: Elem) -> Elem {
        self.imp[a][b]
    }

    pub fn table(&self) -> &[Vec<Elem>] {
        &self.imp
    }
}

/// Returns the implication table iff every `{c : c ∧ a <= b}` has a maximum.
pub fn detect_heyting(lat: &FiniteLattice) -> Option<HeytingStructure> {
    let n = lat.size();
    let mut imp = vec![vec![0; n]; n];
    for a in 0..n {
        for b in 0..n {
            imp[a][b] = lat.poset().maximum_where(|c| lat.leq(lat.meet(c, a), b))?;
        }
    }
    Some(HeytingStructure { imp })
}

/// Does `z ∧ (⋁ family) = ⋁ (z ∧ x)` hold?
pub fn meet_distributes_over_family(lat: &FiniteLattice, z: Elem, family: &[Elem]) -> bool {
    let lhs = lat.meet(z, lat.join_family(family));
    let rhs = family.iter().fold(lat.bottom(), |acc, &x| lat.join(acc, lat.meet(z, x)));
    lhs == rhs
}

/// A builtin lattice together with its corpus name.
#[derive(Debug, Clone)]
pub struct NamedLattice {
    pub name: &'static str,
    pub lattice: FiniteLattice,
}

/// Names of the builtin corpus, in corpus order.
pub const CORPUS_NAMES: [&str; 9] = ["C2", "C3", "C4", "C5", "B2", "B3", "M3", "N5", "C3xC2"];

/// The builtin corpus: chains C2 through C5, boolean algebras B2 and B3, the
/// diamond M3, the pentagon N5 and the product C3×C2.
pub fn corpus() -> Vec<NamedLattice> {
    CORPUS_NAMES
        .iter()
        .map(|&name| NamedLattice { name, lattice: corpus_lattice(name).expect("corpus names resolve") })
        .collect()
}

/// Looks up a corpus lattice by name.
pub fn corpus_lattice(name: &str) -> Result<FiniteLattice, LatticeError> {
    let lat = match name {
        "C2" => FiniteLattice::chain(2)?,
        "C3" => FiniteLattice::chain(3)?,
        "C4" => FiniteLattice::chain(4)?,
        "C5" => FiniteLattice::chain(5)?,
        "B2" => FiniteLattice::boolean(2)?,
        "B3" => FiniteLattice::boolean(3)?,
        "M3" => FiniteLattice::m3(),
        "N5" => FiniteLattice::n5(),
        "C3xC2" => FiniteLattice::product(&FiniteLattice::chain(3)?, &FiniteLattice::chain(2)?),
        other => return Err(LatticeError::UnknownLattice(other.to_string())),
    };
    Ok(lat)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Greatest lower bound by scanning all elements, independent of the tables.
    fn glb_by_scan(lat: &FiniteLattice, a: Elem, b: Elem) -> Option<Elem> {
        let lower: Vec<_> = lat.elements().filter(|&c| lat.leq(c, a) && lat.leq(c, b)).collect();
        lower.iter().copied().find(|&m| lower.iter().all(|&c| lat.leq(c, m)))
    }

    fn lub_by_scan(lat: &FiniteLattice, a: Elem, b: Elem) -> Option<Elem> {
        let upper: Vec<_> = lat.elements().filter(|&c| lat.leq(a, c) && lat.leq(b, c)).collect();
        upper.iter().copied().find(|&m| upper.iter().all(|&c| lat.leq(m, c)))
    }

    #[test]
    fn chain_is_min_max() {
        let c3 = FiniteLattice::chain(3).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(c3.meet(a, b), a.min(b));
                assert_eq!(c3.join(a, b), a.max(b));
            }
        }
        assert_eq!((c3.bottom(), c3.top()), (0, 2));
    }

    #[test]
    fn m3_tables_match_scan() {
        let m3 = FiniteLattice::m3();
        for a in m3.elements() {
            for b in m3.elements() {
                assert_eq!(Some(m3.meet(a, b)), glb_by_scan(&m3, a, b));
                assert_eq!(Some(m3.join(a, b)), lub_by_scan(&m3, a, b));
            }
        }
        assert_eq!(m3.join(1, 2), 4);
        assert_eq!(m3.meet(1, 2), 0);
    }

    #[test]
    fn antichain_is_not_a_lattice() {
        let err = build_lattice(vec![vec![true, false], vec![false, true]]).unwrap_err();
        assert!(matches!(err, LatticeError::NotALattice { a: 0, b: 1, .. }), "{err:?}");
    }

    #[test]
    fn partial_order_violations() {
        let err = build_lattice(vec![vec![false]]).unwrap_err();
        assert!(matches!(err, LatticeError::NotAPartialOrder { axiom: OrderAxiom::Reflexivity, .. }));
        let err = build_lattice(vec![vec![true, true], vec![true, true]]).unwrap_err();
        assert!(matches!(err, LatticeError::NotAPartialOrder { axiom: OrderAxiom::Antisymmetry, a: 0, b: 1 }));
        let leq = vec![
            vec![true, true, false],
            vec![false, true, true],
            vec![false, false, true],
        ];
        let err = build_lattice(leq).unwrap_err();
        assert!(matches!(err, LatticeError::NotAPartialOrder { axiom: OrderAxiom::Transitivity, a: 0, b: 2 }));
        assert!(matches!(build_lattice(vec![]), Err(LatticeError::Shape { .. })));
        assert!(matches!(build_lattice(vec![vec![true], vec![true]]), Err(LatticeError::Shape { .. })));
    }

    #[test]
    fn heyting_on_chain() {
        let c3 = FiniteLattice::chain(3).unwrap();
        let h = detect_heyting(&c3).unwrap();
        assert_eq!(h.imp(2, 1), 1);
        assert_eq!(h.imp(1, 0), 0);
        for x in 0..3 {
            assert_eq!(h.imp(0, x), 2);
        }
    }

    #[test]
    fn m3_and_n5_are_not_heyting() {
        let m3 = FiniteLattice::m3();
        // {c : c ∧ a <= b} for atoms a=1, b=2 is {bottom, b, c}: no maximum.
        let set: Vec<_> = m3.elements().filter(|&c| m3.leq(m3.meet(c, 1), 2)).collect();
        assert_eq!(set, vec![0, 2, 3]);
        assert!(detect_heyting(&m3).is_none());
        assert!(detect_heyting(&FiniteLattice::n5()).is_none());
    }

    #[test]
    fn boolean_square_implication_is_complement_join() {
        let b2 = FiniteLattice::boolean(2).unwrap();
        let h = detect_heyting(&b2).unwrap();
        for a in 0..4usize {
            for b in 0..4usize {
                assert_eq!(h.imp(a, b), (!a & 3) | b);
            }
        }
    }

    #[test]
    fn distributivity_examples() {
        let m3 = FiniteLattice::m3();
        assert!(!meet_distributes_over_family(&m3, 3, &[1, 2]));
        for z in m3.elements() {
            for y in m3.elements() {
                assert!(meet_distributes_over_family(&m3, z, &[y]));
            }
        }
        let c3 = FiniteLattice::chain(3).unwrap();
        for z in 0..3 {
            for a in 0..3 {
                for b in 0..3 {
                    assert!(meet_distributes_over_family(&c3, z, &[a, b]));
                    for c in 0..3 {
                        assert!(meet_distributes_over_family(&c3, z, &[a, b, c]));
                    }
                }
            }
        }
    }

    #[test]
    fn family_folds_and_downsets() {
        let m3 = FiniteLattice::m3();
        assert_eq!(m3.join_family(&[]), m3.bottom());
        assert_eq!(m3.meet_family(&[]), m3.top());
        assert_eq!(m3.join_family(&[1, 2]), 4);
        for x in m3.elements() {
            assert_eq!(m3.meet_family(&[m3.top(), x]), x);
        }
        assert_eq!(m3.downset(m3.bottom()), vec![0]);
        assert_eq!(m3.downset(m3.top()), vec![0, 1, 2, 3, 4]);
        assert_eq!(FiniteLattice::chain(3).unwrap().downset(1), vec![0, 1]);
    }

    #[test]
    fn corpus_shape() {
        let sizes: Vec<_> = corpus().iter().map(|l| (l.name, l.lattice.size())).collect();
        assert_eq!(
            sizes,
            vec![("C2", 2), ("C3", 3), ("C4", 4), ("C5", 5), ("B2", 4), ("B3", 8), ("M3", 5), ("N5", 5), ("C3xC2", 6)]
        );
        for named in corpus() {
            let heyting = named.lattice.is_heyting();
            assert_eq!(heyting, !matches!(named.name, "M3" | "N5"), "{}", named.name);
            assert_eq!(heyting, named.lattice.is_distributive(), "{}", named.name);
        }
        assert!(matches!(corpus_lattice("Z9"), Err(LatticeError::UnknownLattice(_))));
    }

    #[test]
    fn lattice_laws_hold_on_corpus() {
        for NamedLattice { name, lattice: l } in corpus() {
            for a in l.elements() {
                assert!(l.leq(l.bottom(), a) && l.leq(a, l.top()), "{name}");
                assert_eq!(l.meet(a, a), a);
                assert_eq!(l.join(a, a), a);
                for b in l.elements() {
                    assert_eq!(l.meet(a, b), l.meet(b, a));
                    assert_eq!(l.join(a, b), l.join(b, a));
                    assert_eq!(l.meet(a, l.join(a, b)), a);
                    assert_eq!(l.join(a, l.meet(a, b)), a);
                    for c in l.elements() {
                        assert_eq!(l.meet(a, l.meet(b, c)), l.meet(l.meet(a, b), c));
                        assert_eq!(l.join(a, l.join(b, c)), l.join(l.join(a, b), c));
                    }
                }
            }
        }
    }

    #[test]
    fn heyting_adjunction_and_distributivity_on_corpus() {
        for NamedLattice { name, lattice: l } in corpus() {
            let Some(h) = detect_heyting(&l) else { continue };
            for a in l.elements() {
                for b in l.elements() {
                    for c in l.elements() {
                        assert_eq!(l.leq(c, h.imp(a, b)), l.leq(l.meet(c, a), b), "{name}");
                    }
                }
            }
            let n = l.size();
            for z in l.elements() {
                for a in 0..n {
                    for b in 0..n {
                        assert!(meet_distributes_over_family(&l, z, &[a, b]), "{name}");
                        for c in 0..n {
                            assert!(meet_distributes_over_family(&l, z, &[a, b, c]), "{name}");
                        }
                    }
                }
            }
        }
    }
}
