//! Decomposition round-trips for tuples acting with uniform grid degrees:
//! single and multiple orbits, both grid shapes, and the link between the
//! factors and the diagram formula.

use std::sync::Arc;

use symq_core::alt5::{
    decompose_product_shape, orbit_length_multiset, product_action, satisfies_diag_exactly,
    A5Context,
};
use symq_core::logic::{eval_group_tuple, FormulaLibrary};
use symq_core::perm::{PermTuple, Permutation, Point};

fn diagonal_of_grid(ctx: &A5Context, k_gens: &[&str]) -> PermTuple {
    let a4 = ctx.standard_a4().unwrap().clone();
    let k = ctx.subgroup_from_cycles(k_gens).unwrap();
    let (g, h) = product_action(&ctx.a5, &a4, &k);
    g.pointwise_product(&h).unwrap()
}

/// Two disjoint relabeled copies of the same tuple on twice the ground.
fn doubled(t: &PermTuple) -> PermTuple {
    let n = t.ground_size();
    let entries = t
        .entries()
        .iter()
        .map(|e| {
            let mut images: Vec<Point> = Vec::with_capacity(2 * n);
            images.extend(e.images().iter().copied());
            images.extend(e.images().iter().map(|&p| p + n as Point));
            Permutation::from_images(images).unwrap()
        })
        .collect();
    PermTuple::new(entries).unwrap()
}

#[test]
fn degree_60_split_has_factor_orbits_5_and_12() {
    let ctx = A5Context::new();
    let diag = diagonal_of_grid(&ctx, &["(0 1 2 3 4)"]);
    assert_eq!(orbit_length_multiset(&diag), vec![(60, 1)]);
    let (g, h) = decompose_product_shape(&ctx, &diag, 60).unwrap();
    assert_eq!(g.pointwise_product(&h).unwrap(), diag);
    assert!(g.commutes_with(&h).unwrap());
    assert_eq!(orbit_length_multiset(&g), vec![(5, 12)]);
    assert_eq!(orbit_length_multiset(&h), vec![(12, 5)]);
    assert!(satisfies_diag_exactly(&ctx.a5, &g));
    assert!(satisfies_diag_exactly(&ctx.a5, &h));
}

#[test]
fn two_degree_30_orbits_decompose_per_orbit() {
    let ctx = A5Context::new();
    let single = diagonal_of_grid(&ctx, &["(0 1 2 3 4)", "(1 4)(2 3)"]);
    let double = doubled(&single);
    assert_eq!(orbit_length_multiset(&double), vec![(30, 2)]);
    let (g, h) = decompose_product_shape(&ctx, &double, 30).unwrap();
    assert_eq!(g.pointwise_product(&h).unwrap(), double);
    assert!(g.commutes_with(&h).unwrap());
    assert_eq!(orbit_length_multiset(&g), vec![(5, 12)]);
    assert_eq!(orbit_length_multiset(&h), vec![(6, 10)]);
}

#[test]
fn fixed_points_pass_through_untouched() {
    let ctx = A5Context::new();
    let single = diagonal_of_grid(&ctx, &["(0 1 2 3 4)", "(1 4)(2 3)"]);
    // pad with five fixed points
    let n = single.ground_size();
    let entries = single
        .entries()
        .iter()
        .map(|e| {
            let mut images: Vec<Point> = e.images().to_vec();
            images.extend(n as Point..(n + 5) as Point);
            Permutation::from_images(images).unwrap()
        })
        .collect();
    let padded = PermTuple::new(entries).unwrap();
    let (g, h) = decompose_product_shape(&ctx, &padded, 30).unwrap();
    assert_eq!(g.pointwise_product(&h).unwrap(), padded);
    for p in n..(n + 5) {
        for i in 0..60 {
            assert_eq!(g.entry(i).apply(p as Point), p as Point);
            assert_eq!(h.entry(i).apply(p as Point), p as Point);
        }
    }
}

#[test]
fn factors_satisfy_the_diagram_formula() {
    let ctx = A5Context::new();
    let diag = diagonal_of_grid(&ctx, &["(0 1 2 3 4)", "(1 4)(2 3)"]);
    let (g, h) = decompose_product_shape(&ctx, &diag, 30).unwrap();
    let lib = FormulaLibrary::new(Arc::new(symq_core::alt5::a5_table()));
    let alt5 = lib.alt5(0);
    assert!(eval_group_tuple(&alt5, &g).unwrap());
    assert!(eval_group_tuple(&alt5, &h).unwrap());
}
