//! Cross-module links: the group-diagram formula holds on every coset
//! action, the evaluable detector sentences behave over small symmetric
//! groups, and the grid-product relation validates the constructions from
//! the permutation side.

use std::collections::BTreeMap;
use std::sync::Arc;

use symq_core::alt5::{coset_action, A5Context};
use symq_core::census::{canonical_type, TrivialConvention};
use symq_core::logic::{
    eval_group, eval_group_tuple, m_formula_library, parse_group_formula, sort_check,
    FormulaLibrary, MEvaluator, MFinModel, ModelBounds,
};
use symq_core::perm::{all_permutations, PermTuple};

#[test]
fn diagram_formula_holds_on_every_coset_action() {
    let ctx = A5Context::new();
    let lib = FormulaLibrary::new(Arc::new(symq_core::alt5::a5_table()));
    let diag = lib.alt5(0);
    for h in &ctx.subgroups {
        let action = coset_action(&ctx.a5, h);
        assert!(
            eval_group_tuple(&diag, &action.tuple).unwrap(),
            "coset action of a subgroup of order {} violates the diagram",
            h.order()
        );
    }
}

#[test]
fn diagram_formula_fails_off_diagram() {
    let lib = FormulaLibrary::new(Arc::new(symq_core::alt5::a5_table()));
    let diag = lib.alt5(0);
    // the regular action with two entries swapped is no longer a diagram
    let ctx = A5Context::new();
    let trivial = symq_core::alt5::Subgroup::new(vec![0]);
    let action = coset_action(&ctx.a5, &trivial);
    let mut entries = action.tuple.entries().to_vec();
    entries.swap(1, 2);
    let broken = PermTuple::new(entries).unwrap();
    assert!(!eval_group_tuple(&diag, &broken).unwrap());
}

#[test]
fn transposition_sentence_holds_over_small_symmetric_groups() {
    let lib = FormulaLibrary::new(Arc::new(symq_core::alt5::a5_table()));
    let sentence = lib.transposition_sentence();
    for ground in [3usize, 4] {
        assert!(eval_group(&sentence, ground, &[]).unwrap());
    }
}

#[test]
fn library_formulas_parse_back_where_small() {
    let lib = FormulaLibrary::new(Arc::new(symq_core::alt5::a5_table()));
    for f in [lib.set(0), lib.eq(0, 1), lib.prod(0, 1, 2)] {
        let round = parse_group_formula(&f.to_string()).unwrap();
        assert_eq!(round, f);
    }
}

#[test]
fn grid_product_library_formula_validates_constructions() {
    // a census-language check of the product-type relation against tuples
    // built by hand on four points
    let model = MFinModel::build(
        4,
        2,
        TrivialConvention::IncludeTrivial,
        &ModelBounds::default(),
    )
    .unwrap();
    let mut eval = MEvaluator::new(&model);
    let entry = m_formula_library("is_product_type", &[1, 1]).unwrap();
    sort_check(&entry.formula, &entry.free).unwrap();

    let a = symq_core::perm::Permutation::parse("(0 1)(2 3)", 4).unwrap();
    let b = symq_core::perm::Permutation::parse("(0 2)(1 3)", 4).unwrap();
    let grid = PermTuple::new(vec![a.clone(), b]).unwrap();
    let whole = canonical_type(&grid, &[0, 1, 2, 3]).unwrap();
    let part = canonical_type(
        &PermTuple::new(vec![symq_core::perm::Permutation::parse("(0 1)", 2).unwrap()]).unwrap(),
        &[0, 1],
    )
    .unwrap();
    let mut env = BTreeMap::new();
    env.insert(0, model.type_value(&whole).unwrap());
    env.insert(1, model.type_value(&part).unwrap());
    env.insert(2, model.type_value(&part).unwrap());
    assert!(eval.eval(&entry.formula, &env).unwrap());

    // a non-product: a pair acting identically on one 2-point orbit has the
    // wrong degree for a grid of two 2-point factors
    let degenerate = PermTuple::new(vec![a.clone(), a]).unwrap();
    let not_grid = canonical_type(&degenerate, &[0, 1]).unwrap();
    env.insert(0, model.type_value(&not_grid).unwrap());
    assert!(!eval.eval(&entry.formula, &env).unwrap());
}

#[test]
fn quantified_library_entries_evaluate_in_tiny_models() {
    let model = MFinModel::build(
        3,
        2,
        TrivialConvention::IncludeTrivial,
        &ModelBounds::default(),
    )
    .unwrap();
    let mut eval = MEvaluator::new(&model);
    // the application-collision detector fails in the exact model: equal
    // application behaviour forces equal censuses here
    let detector = m_formula_library("cf_le_continuum", &[]).unwrap();
    assert!(!eval.eval(&detector.formula, &BTreeMap::new()).unwrap());
    // ground-filling censuses always count something, so almost_zero never
    // holds in the include-trivial model
    let zero_entry = m_formula_library("almost_zero", &[]).unwrap();
    let mut any_true = false;
    let mut any_false = false;
    for i in 0..model.censuses(2).len() as u32 {
        let mut env = BTreeMap::new();
        env.insert(0, symq_core::logic::MValue::Census(2, i));
        if eval.eval(&zero_entry.formula, &env).unwrap() {
            any_true = true;
        } else {
            any_false = true;
        }
    }
    assert!(!any_true, "weight-3 censuses always count something");
    assert!(any_false);
}

#[test]
fn type_projection_relation_matches_coordinate_dropping() {
    use symq_core::logic::mformula::{matom, MAtom, TypeTerm};
    let model = MFinModel::build(
        5,
        2,
        TrivialConvention::IncludeTrivial,
        &ModelBounds::default(),
    )
    .unwrap();
    let mut eval = MEvaluator::new(&model);
    let joint = PermTuple::parse("(0 1 2 3 4), (0 1)(3 4)", 5).unwrap();
    let pair_type = canonical_type(&joint, &[0, 1, 2, 3, 4]).unwrap();
    let single = |text: &str, pts: &[u16]| {
        canonical_type(
            &PermTuple::parse(text, pts.len()).unwrap(),
            &(0..pts.len() as u16).collect::<Vec<_>>(),
        )
        .unwrap()
    };
    let five_cycle = single("(0 1 2 3 4)", &[0, 1, 2, 3, 4]);
    let three_cycle = single("(0 1 2)", &[0, 1, 2]);
    let atom = matom(MAtom::TypeProjectsTo(TypeTerm::Var(0), TypeTerm::Var(1)));
    let mut env = BTreeMap::new();
    env.insert(0, model.type_value(&pair_type).unwrap());
    env.insert(1, model.type_value(&five_cycle).unwrap());
    assert!(eval.eval(&atom, &env).unwrap());
    env.insert(1, model.type_value(&three_cycle).unwrap());
    assert!(!eval.eval(&atom, &env).unwrap());
}

#[test]
fn function_encodings_hold_of_grid_indicator_censuses() {
    use symq_core::census::census;
    let model = MFinModel::build(
        4,
        2,
        TrivialConvention::IncludeTrivial,
        &ModelBounds::default(),
    )
    .unwrap();
    let mut eval = MEvaluator::new(&model);
    // the indicator census of one grid type encodes the single-pair
    // function {2-cycle -> 2-cycle}
    let a = symq_core::perm::Permutation::parse("(0 1)(2 3)", 4).unwrap();
    let b = symq_core::perm::Permutation::parse("(0 2)(1 3)", 4).unwrap();
    let grid = PermTuple::new(vec![a, b]).unwrap();
    let k = census(&grid, TrivialConvention::IncludeTrivial);
    let k_value = model.census_value(&k).unwrap();
    let part = canonical_type(
        &PermTuple::parse("(0 1)", 2).unwrap(),
        &[0, 1],
    )
    .unwrap();
    let part_value = model.type_value(&part).unwrap();

    let mem_pair = m_formula_library("mem_pair", &[1, 1]).unwrap();
    sort_check(&mem_pair.formula, &mem_pair.free).unwrap();
    let mut env = BTreeMap::new();
    env.insert(0, part_value);
    env.insert(1, part_value);
    env.insert(2, k_value);
    assert!(eval.eval(&mem_pair.formula, &env).unwrap());

    for name in ["fun", "one_one_fun", "encodes_pair_subset"] {
        let entry = m_formula_library(name, &[1, 1]).unwrap();
        let mut env = BTreeMap::new();
        env.insert(0, k_value);
        assert!(eval.eval(&entry.formula, &env).unwrap(), "{name}");
    }
}

#[test]
fn group_side_detectors_are_sentences() {
    let lib = FormulaLibrary::new(Arc::new(symq_core::alt5::a5_table()));
    for f in [
        lib.max_sentence(),
        lib.kappa_aleph0_detector(),
        lib.transposition_sentence(),
    ] {
        assert!(symq_core::logic::free_vars(&f).is_empty());
    }
    let _ = all_permutations(3);
}
