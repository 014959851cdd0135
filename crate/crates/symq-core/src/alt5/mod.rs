//! The alternating group A(5) in a fixed enumeration, its subgroup lattice,
//! coset and product actions, and the decompositions used by the
//! disjointness formulas. All hard claims about these objects are checked
//! exhaustively by the verifiers in [`lemmas`].

pub mod lemmas;

use std::collections::BTreeSet;

use rayon::prelude::*;
use thiserror::Error;

use crate::perm::{all_permutations, PermTuple, Permutation, Point};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Alt5Error {
    #[error("element is not in the group")]
    NotAnElement,
    #[error("subgroup is not contained in the expected parent")]
    NotASubgroup,
    #[error("orbit of size {0} does not act as A(5) with degree {1}")]
    BadOrbitShape(usize, usize),
    #[error("no standard subgroup of order {0} found")]
    MissingStandardSubgroup(usize),
    #[error(transparent)]
    Perm(#[from] crate::perm::PermError),
}

/// A finite group as a multiplication table over a fixed, deterministic
/// enumeration of its elements; element 0 is the identity.
#[derive(Clone)]
pub struct GroupTable {
    perms: Vec<Permutation>,
    product: Vec<u16>,
    inverse: Vec<u16>,
}

impl GroupTable {
    fn from_perms(perms: Vec<Permutation>) -> Self {
        let order = perms.len();
        debug_assert!(perms[0].is_identity());
        let mut index = std::collections::HashMap::with_capacity(order);
        for (i, p) in perms.iter().enumerate() {
            index.insert(p.clone(), i as u16);
        }
        let mut product = vec![0u16; order * order];
        for i in 0..order {
            for j in 0..order {
                let q = perms[i].compose(&perms[j]).expect("same ground");
                product[i * order + j] = index[&q];
            }
        }
        let mut inverse = vec![0u16; order];
        for i in 0..order {
            inverse[i] = index[&perms[i].inverse()];
        }
        GroupTable {
            perms,
            product,
            inverse,
        }
    }

    pub fn order(&self) -> usize {
        self.perms.len()
    }

    #[inline]
    pub fn product(&self, i: u16, j: u16) -> u16 {
        self.product[i as usize * self.perms.len() + j as usize]
    }

    #[inline]
    pub fn inverse(&self, i: u16) -> u16 {
        self.inverse[i as usize]
    }

    /// `a^-1 x a`.
    #[inline]
    pub fn conjugate(&self, x: u16, a: u16) -> u16 {
        self.product(self.inverse(a), self.product(x, a))
    }

    pub fn element(&self, i: u16) -> &Permutation {
        &self.perms[i as usize]
    }

    pub fn index_of(&self, p: &Permutation) -> Option<u16> {
        self.perms
            .iter()
            .position(|q| q == p)
            .map(|i| i as u16)
    }

    pub fn element_order(&self, i: u16) -> u64 {
        let mut cur = i;
        let mut n = 1;
        while cur != 0 {
            cur = self.product(cur, i);
            n += 1;
        }
        n
    }

    /// The direct square, enumerated as pairs `(i, j) -> i*order + j`, each
    /// element realized as a permutation of the disjoint union of two copies
    /// of the ground set. The identity again sits at index 0.
    pub fn direct_square(&self) -> GroupTable {
        let order = self.order();
        let ground = self.perms[0].ground_size();
        let mut perms = Vec::with_capacity(order * order);
        for i in 0..order {
            for j in 0..order {
                let mut images = Vec::with_capacity(2 * ground);
                images.extend(self.perms[i].images().iter().copied());
                images.extend(
                    self.perms[j]
                        .images()
                        .iter()
                        .map(|&p| p + ground as Point),
                );
                perms.push(Permutation::from_images(images).expect("blockwise bijection"));
            }
        }
        let n = order * order;
        let mut product = vec![0u16; n * n];
        for x in 0..n {
            let (xi, xj) = (x / order, x % order);
            for y in 0..n {
                let (yi, yj) = (y / order, y % order);
                let pi = self.product(xi as u16, yi as u16) as usize;
                let pj = self.product(xj as u16, yj as u16) as usize;
                product[x * n + y] = (pi * order + pj) as u16;
            }
        }
        let mut inverse = vec![0u16; n];
        for x in 0..n {
            let (xi, xj) = (x / order, x % order);
            inverse[x] =
                (self.inverse(xi as u16) as usize * order + self.inverse(xj as u16) as usize) as u16;
        }
        GroupTable {
            perms,
            product,
            inverse,
        }
    }
}

/// The fixed enumeration of A(5): even permutations of `{0,..,4}` in
/// lexicographic one-line order, so the identity is element 0.
pub fn a5_table() -> GroupTable {
    let perms: Vec<Permutation> = all_permutations(5)
        .into_iter()
        .filter(Permutation::parity_is_even)
        .collect();
    debug_assert_eq!(perms.len(), 60);
    GroupTable::from_perms(perms)
}

/// S(5) in lexicographic one-line order.
pub fn s5_table() -> GroupTable {
    GroupTable::from_perms(all_permutations(5))
}

/// A subgroup given by its sorted member indices in the parent table.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Subgroup {
    members: Vec<u16>,
}

impl Subgroup {
    pub fn new(mut members: Vec<u16>) -> Self {
        members.sort_unstable();
        members.dedup();
        Subgroup { members }
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[u16] {
        &self.members
    }

    pub fn contains(&self, e: u16) -> bool {
        self.members.binary_search(&e).is_ok()
    }

    pub fn is_closed(&self, table: &GroupTable) -> bool {
        self.contains(0)
            && self.members.iter().all(|&a| {
                self.contains(table.inverse(a))
                    && self.members.iter().all(|&b| self.contains(table.product(a, b)))
            })
    }

    pub fn conjugated(&self, table: &GroupTable, a: u16) -> Subgroup {
        Subgroup::new(
            self.members
                .iter()
                .map(|&x| table.conjugate(x, a))
                .collect(),
        )
    }
}

/// Closure of a generating set, aborting early once the subgroup would
/// exceed `limit` elements.
pub fn closure(table: &GroupTable, generators: &[u16], limit: usize) -> Option<Vec<u16>> {
    let mut member = vec![false; table.order()];
    let mut list = vec![0u16];
    member[0] = true;
    for &g in generators {
        if !member[g as usize] {
            member[g as usize] = true;
            list.push(g);
        }
    }
    let mut head = 0;
    while head < list.len() {
        let x = list[head];
        head += 1;
        for &g in generators {
            let y = table.product(x, g);
            if !member[y as usize] {
                if list.len() >= limit {
                    return None;
                }
                member[y as usize] = true;
                list.push(y);
            }
        }
    }
    list.sort_unstable();
    Some(list)
}

/// The complete subgroup list of a small group, by iterated single-generator
/// extension to a fixpoint. Every subgroup is reached because a generating
/// chain adds one generator at a time.
pub fn all_subgroups(table: &GroupTable) -> Vec<Subgroup> {
    subgroups_with_orders(table, &(1..=table.order()).collect::<Vec<_>>())
}

/// All subgroups whose order lies in `targets`, by generator-chain closure
/// restricted to element/subgroup orders dividing a target. Complete for the
/// targeted orders: every intermediate subgroup of a chain inside a target
/// subgroup has order dividing the target and so survives the filter.
pub fn subgroups_with_orders(table: &GroupTable, targets: &[usize]) -> Vec<Subgroup> {
    let max_target = targets.iter().copied().max().unwrap_or(0);
    let divides_target = |n: usize| targets.iter().any(|&t| t % n == 0);
    let eligible: Vec<u16> = (0..table.order() as u16)
        .filter(|&e| divides_target(table.element_order(e) as usize))
        .collect();

    let mut all: BTreeSet<Vec<u16>> = BTreeSet::new();
    all.insert(vec![0]);
    let mut frontier: Vec<Vec<u16>> = vec![vec![0]];
    while !frontier.is_empty() {
        let fresh: BTreeSet<Vec<u16>> = frontier
            .par_iter()
            .flat_map_iter(|p| {
                let mut local = Vec::new();
                // extend only groups that can still grow inside a target
                if targets.iter().any(|&t| t % p.len() == 0 && p.len() < t) {
                    for &c in &eligible {
                        if p.binary_search(&c).is_ok() {
                            continue;
                        }
                        let mut gens = p.clone();
                        gens.push(c);
                        if let Some(h) = closure(table, &gens, max_target) {
                            if divides_target(h.len()) {
                                local.push(h);
                            }
                        }
                    }
                }
                local
            })
            .collect();
        frontier = fresh.into_iter().filter(|h| !all.contains(h)).collect();
        all.extend(frontier.iter().cloned());
    }
    all.into_iter()
        .filter(|h| targets.contains(&h.len()))
        .map(Subgroup::new)
        .collect()
}

/// Representatives of conjugacy classes of `subgroups` under the given table
/// (each class keyed by its least member set).
pub fn conjugacy_class_reps(table: &GroupTable, subgroups: &[Subgroup]) -> Vec<Subgroup> {
    let set: BTreeSet<&Subgroup> = subgroups.iter().collect();
    let mut seen: BTreeSet<Subgroup> = BTreeSet::new();
    let mut reps = Vec::new();
    for h in subgroups {
        if seen.contains(h) {
            continue;
        }
        let mut class = BTreeSet::new();
        for a in 0..table.order() as u16 {
            let hc = h.conjugated(table, a);
            debug_assert!(set.contains(&hc), "subgroup list closed under conjugation");
            class.insert(hc);
        }
        seen.extend(class.into_iter());
        reps.push(h.clone());
    }
    reps
}

/// Right cosets of a subgroup, in order of least representative.
pub struct CosetSpace {
    pub degree: usize,
    /// coset index of every group element
    pub coset_of: Vec<u16>,
    /// least representative of each coset
    pub reps: Vec<u16>,
}

pub fn coset_space(table: &GroupTable, subgroup: &Subgroup) -> CosetSpace {
    let order = table.order();
    let mut coset_of = vec![u16::MAX; order];
    let mut reps = Vec::new();
    for e in 0..order as u16 {
        if coset_of[e as usize] != u16::MAX {
            continue;
        }
        let c = reps.len() as u16;
        reps.push(e);
        for &h in subgroup.members() {
            coset_of[table.product(h, e) as usize] = c;
        }
    }
    CosetSpace {
        degree: reps.len(),
        coset_of,
        reps,
    }
}

/// The transitive action of the group on the right cosets of `subgroup` by
/// right multiplication, as a tuple indexed by the fixed enumeration.
pub struct CosetAction {
    pub subgroup: Subgroup,
    pub degree: usize,
    pub tuple: PermTuple,
}

pub fn coset_action(table: &GroupTable, subgroup: &Subgroup) -> CosetAction {
    let space = coset_space(table, subgroup);
    let entries = (0..table.order() as u16)
        .map(|k| {
            let images = (0..space.degree)
                .map(|c| space.coset_of[table.product(space.reps[c], k) as usize])
                .collect();
            Permutation::from_images(images).expect("cosets permute")
        })
        .collect();
    CosetAction {
        subgroup: subgroup.clone(),
        degree: space.degree,
        tuple: PermTuple::new(entries).expect("group order is positive"),
    }
}

/// Does the tuple satisfy the full multiplication diagram of the table, with
/// zero exceptional points?
pub fn satisfies_diag_exactly(table: &GroupTable, tuple: &PermTuple) -> bool {
    let order = table.order();
    if tuple.arity() != order {
        return false;
    }
    for i in 0..order as u16 {
        for j in 0..order as u16 {
            let k = table.product(i, j);
            let lhs = tuple
                .entry(i as usize)
                .compose(tuple.entry(j as usize))
                .expect("same ground");
            if &lhs != tuple.entry(k as usize) {
                return false;
            }
        }
    }
    true
}

/// The commuting pair of grid actions on `[G:H] x [G:K]`: the first factor
/// moves the H-coset by right multiplication, the second the K-coset. Their
/// pointwise product is the diagonal right-multiplication action.
pub fn product_action(
    table: &GroupTable,
    h: &Subgroup,
    k: &Subgroup,
) -> (PermTuple, PermTuple) {
    let hs = coset_space(table, h);
    let ks = coset_space(table, k);
    let (dh, dk) = (hs.degree, ks.degree);
    let mut g_entries = Vec::with_capacity(table.order());
    let mut h_entries = Vec::with_capacity(table.order());
    for a in 0..table.order() as u16 {
        let mut g_images = vec![0 as Point; dh * dk];
        let mut h_images = vec![0 as Point; dh * dk];
        for u in 0..dh {
            let ua = hs.coset_of[table.product(hs.reps[u], a) as usize] as usize;
            for v in 0..dk {
                let va = ks.coset_of[table.product(ks.reps[v], a) as usize] as usize;
                g_images[u * dk + v] = (ua * dk + v) as Point;
                h_images[u * dk + v] = (u * dk + va) as Point;
            }
        }
        g_entries.push(Permutation::from_images(g_images).expect("grid rows permute"));
        h_entries.push(Permutation::from_images(h_images).expect("grid columns permute"));
    }
    (
        PermTuple::new(g_entries).expect("nonempty"),
        PermTuple::new(h_entries).expect("nonempty"),
    )
}

/// The right-regular tuple together with the `s`-twisted left-regular tuple
/// on the 60 element indices: entry j of the twist maps x to
/// `(s^-1 a_j^-1 s) x`. The two tuples centralize each other.
pub struct TwistedRegularPair {
    pub right_regular: PermTuple,
    pub twisted_left: PermTuple,
}

pub fn twisted_regular_pair(
    a5: &GroupTable,
    s5: &GroupTable,
    a5_in_s5: &[u16],
    s: u16,
) -> TwistedRegularPair {
    let order = a5.order();
    let s5_to_a5 = invert_embedding(s5.order(), a5_in_s5);
    let mut right = Vec::with_capacity(order);
    let mut left = Vec::with_capacity(order);
    for j in 0..order as u16 {
        let right_images = (0..order as u16).map(|x| a5.product(x, j)).collect();
        right.push(Permutation::from_images(right_images).expect("regular"));
        // w = s^-1 a_j^-1 s, computed inside S(5) and mapped back
        let w_s5 = s5.product(
            s5.product(s5.inverse(s), s5.inverse(a5_in_s5[j as usize])),
            s,
        );
        let w = s5_to_a5[w_s5 as usize].expect("conjugate of an even element is even");
        let left_images = (0..order as u16).map(|x| a5.product(w, x)).collect();
        left.push(Permutation::from_images(left_images).expect("regular"));
    }
    TwistedRegularPair {
        right_regular: PermTuple::new(right).expect("nonempty"),
        twisted_left: PermTuple::new(left).expect("nonempty"),
    }
}

fn invert_embedding(big_order: usize, embedding: &[u16]) -> Vec<Option<u16>> {
    let mut out = vec![None; big_order];
    for (small, &big) in embedding.iter().enumerate() {
        out[big as usize] = Some(small as u16);
    }
    out
}

/// Shared tables and the full subgroup list of A(5).
pub struct A5Context {
    pub a5: GroupTable,
    pub s5: GroupTable,
    /// S(5) index of every A(5) element.
    pub a5_in_s5: Vec<u16>,
    pub subgroups: Vec<Subgroup>,
}

impl A5Context {
    pub fn new() -> Self {
        let a5 = a5_table();
        let s5 = s5_table();
        let a5_in_s5 = (0..a5.order() as u16)
            .map(|i| s5.index_of(a5.element(i)).expect("A(5) embeds in S(5)"))
            .collect();
        let subgroups = all_subgroups(&a5);
        A5Context {
            a5,
            s5,
            a5_in_s5,
            subgroups,
        }
    }

    pub fn proper_subgroups(&self) -> Vec<&Subgroup> {
        self.subgroups
            .iter()
            .filter(|h| h.order() < self.a5.order())
            .collect()
    }

    /// The point stabilizer of 4: the standard copy of A(4).
    pub fn standard_a4(&self) -> Result<&Subgroup, Alt5Error> {
        self.subgroups
            .iter()
            .find(|h| {
                h.order() == 12
                    && h.members()
                        .iter()
                        .all(|&m| self.a5.element(m).apply(4) == 4)
            })
            .ok_or(Alt5Error::MissingStandardSubgroup(12))
    }

    pub fn subgroup_from_cycles(&self, gens: &[&str]) -> Result<Subgroup, Alt5Error> {
        let idx = gens
            .iter()
            .map(|g| {
                let p = Permutation::parse(g, 5)?;
                self.a5.index_of(&p).ok_or(Alt5Error::NotAnElement)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let members = closure(&self.a5, &idx, self.a5.order()).expect("within A(5)");
        Ok(Subgroup::new(members))
    }

    /// |C_A(5)(y)| for an S(5) element y.
    pub fn centralizer_order_in_a5(&self, y_s5: u16) -> usize {
        (0..self.a5.order())
            .filter(|&c| {
                let c5 = self.a5_in_s5[c];
                self.s5.product(c5, y_s5) == self.s5.product(y_s5, c5)
            })
            .count()
    }
}

impl Default for A5Context {
    fn default() -> Self {
        Self::new()
    }
}

/// Splits a tuple acting as A(5) with uniform degree 30 (resp. 60) on its
/// nontrivial orbits into commuting factors with orbit sizes 5 and 6
/// (resp. 5 and 12), recombining to the input.
pub fn decompose_product_shape(
    ctx: &A5Context,
    t: &PermTuple,
    degree: usize,
) -> Result<(PermTuple, PermTuple), Alt5Error> {
    let (h, k) = match degree {
        30 => (
            ctx.standard_a4()?.clone(),
            ctx.subgroup_from_cycles(&["(0 1 2 3 4)", "(1 4)(2 3)"])?,
        ),
        60 => (
            ctx.standard_a4()?.clone(),
            ctx.subgroup_from_cycles(&["(0 1 2 3 4)"])?,
        ),
        other => return Err(Alt5Error::BadOrbitShape(0, other)),
    };
    let (model_g, model_h) = product_action(&ctx.a5, &h, &k);
    let model_diag = model_g
        .pointwise_product(&model_h)
        .expect("same grid ground");

    let ground = t.ground_size();
    let mut g_images: Vec<Vec<Point>> = (0..t.arity())
        .map(|_| (0..ground as Point).collect())
        .collect();
    let mut h_images = g_images.clone();
    for orbit in t.orbits() {
        if orbit.len() == 1 {
            continue;
        }
        if orbit.len() != degree {
            return Err(Alt5Error::BadOrbitShape(orbit.len(), degree));
        }
        // relabel the orbit to local indices and transport the model factors
        let local_entries = t
            .entries()
            .iter()
            .map(|e| {
                let images = orbit
                    .iter()
                    .map(|&p| {
                        orbit
                            .binary_search(&e.apply(p))
                            .expect("orbit closed under the action") as Point
                    })
                    .collect();
                Permutation::from_images(images).expect("restricted bijection")
            })
            .collect::<Vec<_>>();
        let local = PermTuple::new(local_entries).expect("nonempty");
        let witness = crate::census::tuples_conjugate(&model_diag, &local)
            .map_err(|_| Alt5Error::BadOrbitShape(orbit.len(), degree))?
            .ok_or(Alt5Error::BadOrbitShape(orbit.len(), degree))?;
        let local_g = model_g.conjugate(&witness)?;
        let local_h = model_h.conjugate(&witness)?;
        for i in 0..t.arity() {
            for (li, &p) in orbit.iter().enumerate() {
                g_images[i][p as usize] = orbit[local_g.entry(i).apply(li as Point) as usize];
                h_images[i][p as usize] = orbit[local_h.entry(i).apply(li as Point) as usize];
            }
        }
    }
    let g = PermTuple::new(
        g_images
            .into_iter()
            .map(Permutation::from_images)
            .collect::<Result<_, _>>()?,
    )?;
    let hh = PermTuple::new(
        h_images
            .into_iter()
            .map(Permutation::from_images)
            .collect::<Result<_, _>>()?,
    )?;
    debug_assert_eq!(g.pointwise_product(&hh).expect("same ground"), *t);
    Ok((g, hh))
}

/// Orbit-length multiset of a tuple, ignoring fixed points,
/// as sorted (length, count) pairs.
pub fn orbit_length_multiset(t: &PermTuple) -> Vec<(usize, usize)> {
    let mut counts = std::collections::BTreeMap::new();
    for orbit in t.orbits() {
        *counts.entry(orbit.len()).or_insert(0) += 1;
    }
    counts.into_iter().collect()
}
