//! Property tests for the census layer: canonical types are relabeling
//! fixpoints, realize/census round-trips, reindexing laws, and the
//! census-equality/conjugacy equivalence at small grounds.

use proptest::prelude::*;

use symq_core::census::{
    census, census_reindex, canonical_type, realize, tuples_conjugate, Census, OrbitType,
    ReindexEntry, TrivialConvention,
};
use symq_core::perm::{all_permutations, PermTuple, Permutation, Point};

fn arb_perm(ground: usize) -> impl Strategy<Value = Permutation> {
    Just(()).prop_perturb(move |_, mut rng| {
        let mut images: Vec<Point> = (0..ground as Point).collect();
        for i in (1..ground).rev() {
            let j = (rng.next_u32() as usize) % (i + 1);
            images.swap(i, j);
        }
        Permutation::from_images(images).expect("shuffle is a bijection")
    })
}

fn arb_tuple(ground: usize, arity: usize) -> impl Strategy<Value = PermTuple> {
    proptest::collection::vec(arb_perm(ground), arity)
        .prop_map(|entries| PermTuple::new(entries).expect("same ground"))
}

proptest! {
    #[test]
    fn canonical_type_is_a_relabeling_fixpoint(
        t in arb_tuple(6, 2),
        h in arb_perm(6),
    ) {
        // conjugating and carrying the orbits along leaves every type alone
        let conj = t.conjugate(&h).unwrap();
        let mut types: Vec<OrbitType> = t
            .orbits()
            .iter()
            .map(|o| canonical_type(&t, o).unwrap())
            .collect();
        let mut conj_types: Vec<OrbitType> = conj
            .orbits()
            .iter()
            .map(|o| canonical_type(&conj, o).unwrap())
            .collect();
        types.sort();
        conj_types.sort();
        prop_assert_eq!(types, conj_types);
    }

    #[test]
    fn census_weight_is_the_ground_size(t in arb_tuple(7, 3)) {
        let c = census(&t, TrivialConvention::IncludeTrivial);
        prop_assert_eq!(c.weight(), 7);
    }

    #[test]
    fn realize_census_round_trip(t in arb_tuple(8, 2)) {
        for conv in [TrivialConvention::IncludeTrivial, TrivialConvention::ExcludeTrivial] {
            let c = census(&t, conv);
            let r = realize(&c, 8).unwrap();
            prop_assert_eq!(census(&r, conv), c);
        }
    }

    #[test]
    fn census_realize_round_trip_on_random_censuses(
        t in arb_tuple(8, 2),
    ) {
        // censuses of weight <= 8 arise from tuples on 8 points; realizing
        // and re-counting is the identity on them
        let c = census(&t, TrivialConvention::ExcludeTrivial);
        prop_assert!(c.weight() <= 8);
        let r = realize(&c, 8).unwrap();
        let c2 = census(&r, TrivialConvention::ExcludeTrivial);
        prop_assert_eq!(&c2, &c);
    }

    #[test]
    fn coordinate_permutation_preserves_weight_and_bijects(
        t in arb_tuple(6, 3),
    ) {
        let c = census(&t, TrivialConvention::IncludeTrivial);
        let swapped = census_reindex(
            &c,
            &[ReindexEntry::Coord(2), ReindexEntry::Coord(0), ReindexEntry::Coord(1)],
        )
        .unwrap();
        prop_assert_eq!(swapped.weight(), c.weight());
        let back = census_reindex(
            &swapped,
            &[ReindexEntry::Coord(1), ReindexEntry::Coord(2), ReindexEntry::Coord(0)],
        )
        .unwrap();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn projection_commutes_with_census(t in arb_tuple(6, 3)) {
        let c = census(&t, TrivialConvention::IncludeTrivial);
        let dropped = census_reindex(&c, &[ReindexEntry::Coord(0), ReindexEntry::Coord(1)]).unwrap();
        let direct = census(
            &PermTuple::new(t.entries()[..2].to_vec()).unwrap(),
            TrivialConvention::IncludeTrivial,
        );
        prop_assert_eq!(dropped, direct);
    }
}

#[test]
fn thousand_random_relabelings_leave_the_type_alone() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    let base = PermTuple::parse("(0 1 2 3 4), (0 1)(3 4)", 5).unwrap();
    let ty = canonical_type(&base, &[0, 1, 2, 3, 4]).unwrap();
    let perms = all_permutations(5);
    for _ in 0..1000 {
        let h = &perms[rng.gen_range(0..perms.len())];
        let conj = base.conjugate(h).unwrap();
        let ty2 = canonical_type(&conj, &[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(ty, ty2);
    }
}

#[test]
fn census_equality_iff_conjugate_ground_5_arity_1() {
    // exhaustive at arity 1 on five points
    let perms = all_permutations(5);
    let tuples: Vec<PermTuple> = perms
        .iter()
        .map(|g| PermTuple::new(vec![g.clone()]).unwrap())
        .collect();
    let censuses: Vec<Census> = tuples
        .iter()
        .map(|t| census(t, TrivialConvention::IncludeTrivial))
        .collect();
    for (i, t1) in tuples.iter().enumerate() {
        for (j, t2) in tuples.iter().enumerate() {
            let witness = tuples_conjugate(t1, t2).unwrap();
            assert_eq!(witness.is_some(), censuses[i] == censuses[j]);
            if let Some(h) = witness {
                assert_eq!(t1.conjugate(&h).unwrap(), *t2);
            }
        }
    }
}
