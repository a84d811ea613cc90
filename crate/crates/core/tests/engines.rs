use descent_kit::fam_thin::{classify, comparison_image, enumerate_descent_data, DescentDatumThin, ThinFamily};
use descent_kit::fincat::pullback;
use descent_kit::finset::{image_factorization, truncated_finset_category, FinSetMor};
use descent_kit::lattice::{corpus, corpus_lattice, CORPUS_NAMES};
use descent_kit::DEFAULT_BUDGET;
use proptest::prelude::*;

#[test]
fn truncated_finset_pullbacks_match_sets() {
    let (cat, tables) = truncated_finset_category(2);
    for f in 0..cat.morphism_count() {
        for g in 0..cat.morphism_count() {
            if cat.target(f) != cat.target(g) {
                continue;
            }
            let (tf, tg) = (&tables[f], &tables[g]);
            let expected = (0..tf.domain_size())
                .flat_map(|a| (0..tg.domain_size()).map(move |b| (a, b)))
                .filter(|&(a, b)| tf.apply(a) == tg.apply(b))
                .count();
            match pullback(&cat, f, g) {
                Ok(pb) => {
                    // Object s of the truncation is the set with s points.
                    assert_eq!(pb.apex, expected, "f={f} g={g}");
                    assert_eq!(cat.compose(f, pb.left), cat.compose(g, pb.right));
                }
                // Only missing when the set-level pullback is too big for the truncation.
                Err(_) => assert!(expected > 2, "f={f} g={g}"),
            }
        }
    }
}

#[test]
fn truncated_finset_tables_compose() {
    let (cat, tables) = truncated_finset_category(2);
    assert_eq!(cat.object_count(), 3);
    for f in 0..cat.morphism_count() {
        for g in 0..cat.morphism_count() {
            if cat.source(g) == cat.target(f) {
                assert_eq!(tables[cat.compose(g, f)], tables[g].after(&tables[f]));
            }
        }
    }
}

#[test]
fn corpus_names_resolve() {
    for (name, named) in CORPUS_NAMES.iter().zip(corpus()) {
        assert_eq!(&named.name, name);
        assert_eq!(corpus_lattice(name).unwrap(), named.lattice);
    }
}

fn any_function() -> impl Strategy<Value = FinSetMor> {
    (1usize..6, 0usize..7).prop_flat_map(|(cod, dom)| {
        prop::collection::vec(0..cod, dom).prop_map(move |t| FinSetMor::new(cod, t).unwrap())
    })
}

fn any_family() -> impl Strategy<Value = (usize, usize, Vec<usize>)> {
    (0..CORPUS_NAMES.len()).prop_flat_map(|l| {
        let n = corpus_lattice(CORPUS_NAMES[l]).unwrap().size();
        (Just(l), 0..n, prop::collection::vec(0..n, 0..4))
    })
}

proptest! {
    #[test]
    fn image_factorization_splits(f in any_function()) {
        let fac = image_factorization(&f);
        prop_assert!(fac.surjection.is_surjective());
        prop_assert!(fac.inclusion.is_injective());
        prop_assert_eq!(fac.inclusion.after(&fac.surjection), f);
    }

    #[test]
    fn descent_data_are_closed_under_meets((l, y, raw) in any_family()) {
        let lat = corpus_lattice(CORPUS_NAMES[l]).unwrap();
        let members: Vec<usize> = raw.iter().map(|&x| lat.meet(x, y)).collect();
        let fam = ThinFamily::new(&lat, y, members.clone()).unwrap();
        let c = classify(&fam);
        prop_assert_eq!(c.is_regular_epi, !members.is_empty() && lat.join_family(&members) == y);
        prop_assert!(!c.is_stable_regular_epi || c.is_regular_epi);
        if members.is_empty() {
            return Ok(());
        }
        let data = enumerate_descent_data(&fam, DEFAULT_BUDGET).unwrap();
        for z in lat.downset(y) {
            let image = comparison_image(&fam, z).unwrap();
            prop_assert!(data.contains(&image));
        }
        for a in &data {
            for b in &data {
                let meet = DescentDatumThin(a.0.iter().zip(&b.0).map(|(&p, &q)| lat.meet(p, q)).collect());
                prop_assert!(meet.is_valid_for(&fam));
            }
        }
    }
}
