//! The acceptance suite: one test per criterion, each printing a single
//! PASS line with its runtime (visible under --nocapture). Every tolerance
//! and bound is pinned here; a failure in any criterion fails the suite.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use symq_core::alt5::{
    lemmas::{DiagonalAvoidance, IntersectionBound, JointOrbitLength, LemmaCheck},
    A5Context,
};
use symq_core::census::{census, realize, tuples_conjugate, Census, TrivialConvention};
use symq_core::classifier::{
    alpha, equivalent, invariants, CardinalExpr, ContinuumSpec, QuotientSpec, Verdict,
};
use symq_core::logic::{
    check_translation_in, parse_group_formula, regression_pool, required_sort_arity, stats,
    MEvaluator, MFinModel, ModelBounds,
};
use symq_core::ordinal::{
    build_segment_preserving_map, random_ordinal, sum_congruence_report, verify_segment_map,
    OrdOmega, OrdSmall, RandomOrdinalConfig,
};
use symq_core::perm::{all_permutations, PermTuple};

fn report(criterion: u32, name: &str, elapsed: Duration, budget: Duration) {
    println!(
        "[acceptance] criterion {criterion} ({name}): PASS in {elapsed:.2?} (budget {budget:?})"
    );
    assert!(
        elapsed < budget,
        "criterion {criterion} exceeded its runtime budget: {elapsed:?} >= {budget:?}"
    );
}

fn record<'a>(records: &'a [(String, String)], key: &str) -> &'a str {
    records
        .iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| v.as_str())
        .unwrap_or_else(|| panic!("missing record {key}"))
}

#[test]
fn criterion_1_intersection_bound_exhaustive() {
    let started = Instant::now();
    let ctx = A5Context::new();
    let r = IntersectionBound.run(&ctx);
    assert!(r.pass, "{:?}", r.records);
    assert_eq!(record(&r.records, "violations"), "0");
    assert_eq!(record(&r.records, "subgroups_total"), "59");
    assert_eq!(record(&r.records, "orders"), "1,2,3,4,5,6,10,12,60");
    assert_eq!(record(&r.records, "pairs_checked"), "3364");
    // a forced minimum of 3 occurs only between the five order-12 copies
    assert_eq!(record(&r.records, "min3_pairs"), "25");
    report(
        1,
        "conjugate intersection bound",
        started.elapsed(),
        Duration::from_secs(10),
    );
}

#[test]
fn criterion_2_diagonal_avoidance_exhaustive() {
    let started = Instant::now();
    let ctx = A5Context::new();
    let r = DiagonalAvoidance.run(&ctx);
    assert!(r.pass, "{:?}", r.records);
    assert_eq!(record(&r.records, "violations"), "0");
    assert_eq!(record(&r.records, "subgroups_order_12"), "1510");
    assert_eq!(record(&r.records, "subgroups_order_36"), "200");
    report(
        2,
        "diagonal avoidance in the square",
        started.elapsed(),
        Duration::from_secs(600),
    );
}

#[test]
fn criterion_3_joint_orbit_lengths() {
    let started = Instant::now();
    let ctx = A5Context::new();
    let r = JointOrbitLength.run(&ctx);
    assert!(r.pass, "{:?}", r.records);
    assert_eq!(record(&r.records, "twists_checked"), "120");
    assert_eq!(record(&r.records, "twist_violations"), "0");
    assert_eq!(record(&r.records, "product_violations"), "0");
    assert_eq!(record(&r.records, "twist_even_orbit_lengths"), "1:1,12:2,15:1,20:1");
    assert_eq!(record(&r.records, "twist_odd_orbit_lengths"), "10:1,20:1,30:1");
    assert_eq!(record(&r.records, "centralizer_of_(0 1 2 3)"), "2");
    assert_eq!(record(&r.records, "product_pairs_checked"), "3364");
    assert_eq!(record(&r.records, "grid_12_10_degree"), "30");
    assert_eq!(record(&r.records, "grid_12_10_intersection"), "2");
    assert_eq!(record(&r.records, "grid_12_5_degree"), "60");
    report(
        3,
        "joint orbit lengths for the constructive families",
        started.elapsed(),
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_4_translation_oracle() {
    let started = Instant::now();
    let pool = regression_pool();
    assert!(pool.len() >= 40, "pool has {} formulas", pool.len());
    // coverage: all basic atom shapes, connectives, both quantifier depths
    let shape_count = pool
        .iter()
        .filter(|(t, _)| !t.contains('E') && !t.contains('A') && !t.contains('&'))
        .count();
    assert!(shape_count >= 10);
    assert!(pool.iter().any(|(t, _)| t.matches("E x").count() >= 2));
    let bounds = ModelBounds::default();
    for ground in [3usize, 4] {
        let mut max_needed = 0;
        let mut parsed = Vec::new();
        for (text, arity) in &pool {
            let phi = parse_group_formula(text).unwrap();
            max_needed = max_needed.max(required_sort_arity(&phi, *arity).unwrap());
            parsed.push((text, *arity, phi));
        }
        let model = MFinModel::build(
            ground,
            max_needed,
            TrivialConvention::IncludeTrivial,
            &bounds,
        )
        .unwrap();
        let mut eval = MEvaluator::new(&model);
        for (text, arity, phi) in &parsed {
            let r = check_translation_in(phi, *arity, &model, &mut eval).unwrap();
            assert!(
                r.pass(),
                "ground {ground}, formula {text}: {:?}",
                r.disagreements
            );
            let expected = (fact(ground) as u64).pow(*arity as u32);
            assert_eq!(r.assignments, expected);
            // homomorphism sanity on the compiled side
            let s = stats(phi);
            assert!(s.atoms > 0);
        }
    }
    report(
        4,
        "translation truth oracle over the regression pool",
        started.elapsed(),
        Duration::from_secs(900),
    );
}

fn fact(n: usize) -> usize {
    (2..=n).product::<usize>().max(1)
}

#[test]
fn criterion_5_census_conjugacy_exhaustive() {
    let started = Instant::now();
    let perms = all_permutations(4);

    // arity 1: census count equals the partitions of four
    let singles: Vec<PermTuple> = perms
        .iter()
        .map(|g| PermTuple::new(vec![g.clone()]).unwrap())
        .collect();
    let distinct: BTreeSet<Census> = singles
        .iter()
        .map(|t| census(t, TrivialConvention::IncludeTrivial))
        .collect();
    assert_eq!(distinct.len(), 5);

    // arities one and two: census equality iff some of the 24 candidate
    // conjugators works, witnessed by direct application
    for arity in 1..=2usize {
        let tuples: Vec<PermTuple> = if arity == 1 {
            singles.clone()
        } else {
            perms
                .iter()
                .flat_map(|g1| {
                    perms
                        .iter()
                        .map(move |g2| PermTuple::new(vec![g1.clone(), g2.clone()]).unwrap())
                })
                .collect()
        };
        let censuses: Vec<Census> = tuples
            .iter()
            .map(|t| census(t, TrivialConvention::IncludeTrivial))
            .collect();
        for (i, t1) in tuples.iter().enumerate() {
            for (j, t2) in tuples.iter().enumerate() {
                let brute = perms.iter().any(|h| &t1.conjugate(h).unwrap() == t2);
                assert_eq!(
                    brute,
                    censuses[i] == censuses[j],
                    "census/conjugacy mismatch at arity {arity}"
                );
                if brute {
                    let witness = tuples_conjugate(t1, t2).unwrap().expect("witness exists");
                    assert_eq!(&t1.conjugate(&witness).unwrap(), t2);
                }
            }
        }
        // realize/census round-trips over every census that occurred
        for c in censuses.iter().collect::<BTreeSet<_>>() {
            let r = realize(c, 4).unwrap();
            assert_eq!(&census(&r, TrivialConvention::IncludeTrivial), c);
        }
    }
    report(
        5,
        "census equality matches conjugacy at ground four",
        started.elapsed(),
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_6_ordinal_laws_randomized() {
    let started = Instant::now();
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
    let config = RandomOrdinalConfig::default();
    let trials = 10_000u32;

    // canonical representatives: bound, similarity, idempotence, identity
    for _ in 0..trials {
        let a = random_ordinal(&mut rng, &config);
        let k = rng.gen_range(0..=3u32);
        let c = a.canonical_k(k);
        assert!(c < OrdOmega::at_level(k + 2, OrdSmall::from_nat(1)));
        assert!(a.sim_k(&c, k), "{a} !~_{k} {c}");
        assert_eq!(c.canonical_k(k), c);
        if a < OrdOmega::at_level(k + 1, OrdSmall::from_nat(1)) {
            assert_eq!(c, a);
        }
    }

    // absorption: a left summand disappears against W^(k+1)
    for _ in 0..trials {
        let k = rng.gen_range(0..=3u32);
        let alpha = OrdOmega::at_level(k + 1, OrdSmall::from_nat(rng.gen_range(1..4)))
            .add(&random_ordinal(&mut rng, &config).low_part(k));
        let prefix = random_ordinal(&mut rng, &config);
        assert!(alpha.sim_k(&prefix.add(&alpha), k));
    }

    // finite-sum congruence
    let sums = sum_congruence_report(0x5eed, trials as u64, 3);
    assert!(sums.passed(), "{:?}", sums.violation);
    assert_eq!(sums.trials, trials as u64);

    // segment-preserving maps with up to twenty constraint points
    let mut built = 0u32;
    while built < trials {
        let alpha = random_ordinal(&mut rng, &config);
        if alpha.is_zero() {
            continue;
        }
        let k = rng.gen_range(0..=3u32);
        let beta = match rng.gen_range(0..3) {
            0 => alpha.clone(),
            1 => alpha.canonical_k(k + 1),
            _ => {
                let canon = alpha.canonical_k(k + 1);
                if canon.coeff(k + 2).is_zero() {
                    canon
                } else {
                    OrdOmega::at_level(k + 3, OrdSmall::from_nat(rng.gen_range(1..3))).add(&canon)
                }
            }
        };
        if !alpha.sim_k(&beta, k + 1) {
            continue;
        }
        let set: Vec<OrdOmega> = (0..rng.gen_range(0..=20))
            .map(|_| random_ordinal(&mut rng, &config))
            .filter(|x| x < &alpha)
            .collect();
        let map = build_segment_preserving_map(&alpha, &beta, &set, k).unwrap();
        verify_segment_map(&alpha, &beta, &map, k).unwrap();
        // the map must cover exactly the constraint set
        let mut wanted = set;
        wanted.sort();
        wanted.dedup();
        assert_eq!(map.len(), wanted.len());
        built += 1;
    }
    report(
        6,
        "ordinal calculus randomized laws",
        started.elapsed(),
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_7_classifier_regressions() {
    let started = Instant::now();
    let spec = |kappa: &str, lambda: &str, mu: &str, theta: u64| {
        QuotientSpec::new(
            CardinalExpr::parse(kappa).unwrap(),
            CardinalExpr::parse(lambda).unwrap(),
            CardinalExpr::parse(mu).unwrap(),
            ContinuumSpec::new(OrdOmega::from_nat(theta)).unwrap(),
        )
        .unwrap()
    };

    // worked examples under theta = 1
    let a = spec("aleph(2)", "aleph(5)", "aleph(9)", 1);
    assert_eq!(format!("{}", invariants(&a, 1).kappa_case), "A:cf(kappa)>continuum");
    assert_eq!(alpha(&a), OrdOmega::from_nat(3));
    let b = spec("aleph(w)", "aleph(w+1)", "aleph(w+9)", 1);
    assert_eq!(format!("{}", invariants(&b, 1).kappa_case), "B:cf(kappa)<=continuum<kappa");
    let d = spec("aleph(0)", "aleph(5)", "aleph(9)", 7);
    assert_eq!(format!("{}", invariants(&d, 1).kappa_case), "D:kappa=aleph0");
    assert!(invariants(&d, 1).fin_flag && invariants(&d, 1).kap_flag);

    assert!(matches!(
        equivalent(
            &spec("aleph(2)", "aleph(5)", "aleph(9)", 1),
            &spec("aleph(2)", "aleph(6)", "aleph(9)", 1),
            3,
        )
        .unwrap(),
        Verdict::Distinguished(ref r) if r.contains("alpha coefficient at level 0")
    ));
    assert!(matches!(
        equivalent(
            &spec("aleph(w)", "aleph(w+1)", "aleph(w+9)", 1),
            &spec("aleph(w+1)", "aleph(w+2)", "aleph(w+9)", 1),
            3,
        )
        .unwrap(),
        Verdict::Distinguished(ref r) if r.contains("kappa case")
    ));

    // the successor-gap family: regular kappa above the continuum with
    // lambda its successor agrees at every level
    let family = [
        spec("aleph(5)", "aleph(6)", "aleph(9)", 1),
        spec("aleph(7)", "aleph(8)", "aleph(12)", 1),
        spec("aleph(2)", "aleph(3)", "aleph(3)", 1),
        spec("aleph(w+1)", "aleph(w+2)", "aleph(w*2)", 1),
    ];
    for s1 in &family {
        for s2 in &family {
            for k in 0..=6 {
                assert_eq!(
                    equivalent(s1, s2, k).unwrap(),
                    Verdict::InvariantsAgree,
                    "successor-gap family must agree at k={k}"
                );
            }
            assert!(alpha(s1).sim_all(&alpha(s2)));
        }
    }

    // perturbing mu below the support bound never changes the report
    for (lhs, rhs) in [
        (
            spec("aleph(2)", "aleph(5)", "aleph(9)", 1),
            spec("aleph(2)", "aleph(5)", "aleph(77)", 1),
        ),
        (
            spec("aleph(w)", "aleph(w+3)", "aleph(w+3)", 1),
            spec("aleph(w)", "aleph(w+3)", "aleph(w^2)", 1),
        ),
    ] {
        for k in 0..=4 {
            assert_eq!(invariants(&lhs, k), invariants(&rhs, k));
        }
    }
    report(
        7,
        "classifier worked examples",
        started.elapsed(),
        Duration::from_secs(1),
    );
}

#[test]
fn acceptance_census_model_agrees_with_partitions() {
    // shared sanity anchor for criteria 4 and 5: the unary census sort at
    // ground four has exactly five elements
    let model = MFinModel::build(
        4,
        1,
        TrivialConvention::IncludeTrivial,
        &ModelBounds::default(),
    )
    .unwrap();
    assert_eq!(model.censuses(1).len(), 5);
}
