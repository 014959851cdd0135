//! Canonical orbit types and censuses: the desk-scale carriers of the sorts
//! `IS_n` (isomorphism types of transitive n-generated actions) and `F_n`
//! (orbit-count functions), together with the coordinate operations the
//! finite model interprets.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::perm::{PermError, PermTuple, Permutation, Point};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CensusError {
    #[error("input set is not a single orbit of the tuple")]
    NotAnOrbit,
    #[error("census weight {weight} exceeds ground size {ground}")]
    WeightOverflow { weight: u64, ground: usize },
    #[error("include_trivial census of weight {weight} cannot fill ground size {ground}")]
    WeightMismatch { weight: u64, ground: usize },
    #[error("reindex entry {0} out of range for arity {1}")]
    IndexOutOfRange(usize, usize),
    #[error("censuses have different arities: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// Convention mirroring whether the degree-1 all-identity action counts as an
/// isomorphism type. `IncludeTrivial` is the analogue of the top quotient
/// (every point lies in a counted orbit); `ExcludeTrivial` drops fixed points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TrivialConvention {
    IncludeTrivial,
    ExcludeTrivial,
}

/// Canonical isomorphism class of a transitive n-generated action.
///
/// The certificate is the relabeled image table of the action: `arity`
/// blocks of `degree` points, relabeled in breadth-first discovery order and
/// minimized lexicographically over all base points. Two transitive actions
/// are isomorphic exactly when their certificates coincide.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrbitType {
    arity: u16,
    degree: u16,
    cert: Vec<Point>,
}

impl OrbitType {
    pub fn arity(&self) -> usize {
        self.arity as usize
    }

    pub fn degree(&self) -> usize {
        self.degree as usize
    }

    pub fn certificate(&self) -> &[Point] {
        &self.cert
    }

    /// Image of local point `p` under generator `i`, read off the certificate.
    #[inline]
    pub fn image(&self, i: usize, p: Point) -> Point {
        self.cert[i * self.degree as usize + p as usize]
    }

    /// The canonical action as a tuple on `{0, .., degree-1}`.
    pub fn as_tuple(&self) -> PermTuple {
        let d = self.degree as usize;
        let entries = (0..self.arity as usize)
            .map(|i| {
                Permutation::from_images(self.cert[i * d..(i + 1) * d].to_vec())
                    .expect("certificate rows are permutations")
            })
            .collect();
        PermTuple::new(entries).expect("certificate has positive arity")
    }

    /// True when every generator acts as the identity (possible only at
    /// degree 1, by transitivity).
    pub fn is_trivial(&self) -> bool {
        self.degree == 1
    }

    /// FNV-1a hash of the certificate; stable across runs and platforms.
    pub fn fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf29ce484222325;
        let mut eat = |v: u16| {
            for b in v.to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x100000001b3);
            }
        };
        eat(self.arity);
        eat(self.degree);
        for &p in &self.cert {
            eat(p);
        }
        h
    }
}

impl fmt::Debug for OrbitType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "OrbitType(n={}, deg={}, {:016x})",
            self.arity,
            self.degree,
            self.fingerprint()
        )
    }
}

/// Breadth-first relabeling of `tuple` restricted to `orbit`, starting from
/// `base`; returns (certificate, local label of each orbit point).
fn bfs_relabel(tuple: &PermTuple, orbit: &[Point], base: Point) -> (Vec<Point>, Vec<Point>) {
    let n = tuple.arity();
    let d = orbit.len();
    let ground = tuple.ground_size();
    let mut label = vec![Point::MAX; ground];
    let mut order = Vec::with_capacity(d);
    label[base as usize] = 0;
    order.push(base);
    let mut head = 0;
    while head < order.len() {
        let p = order[head];
        head += 1;
        for e in tuple.entries() {
            let q = e.apply(p);
            if label[q as usize] == Point::MAX {
                label[q as usize] = order.len() as Point;
                order.push(q);
            }
        }
    }
    debug_assert_eq!(order.len(), d);
    let mut cert = Vec::with_capacity(n * d);
    for e in tuple.entries() {
        for &p in &order {
            cert.push(label[e.apply(p) as usize]);
        }
    }
    let local: Vec<Point> = orbit.iter().map(|&p| label[p as usize]).collect();
    (cert, local)
}

/// Canonical type of the action of `tuple` on one of its orbits.
///
/// The output is relabeling-invariant: conjugating the tuple and carrying the
/// orbit along gives the identical certificate.
pub fn canonical_type(tuple: &PermTuple, orbit: &[Point]) -> Result<OrbitType, CensusError> {
    canonical_type_with_labeling(tuple, orbit).map(|(t, _)| t)
}

/// As `canonical_type`, also returning the local label of each orbit point
/// under the minimizing relabeling (used to transport isomorphisms).
pub fn canonical_type_with_labeling(
    tuple: &PermTuple,
    orbit: &[Point],
) -> Result<(OrbitType, Vec<Point>), CensusError> {
    if orbit.is_empty() {
        return Err(CensusError::NotAnOrbit);
    }
    // verify the set is one orbit: closed, and reachable from its least point
    let reached = {
        let mut member = vec![false; tuple.ground_size()];
        for &p in orbit {
            member[p as usize] = true;
        }
        let mut stack = vec![orbit[0]];
        let mut seen = vec![false; tuple.ground_size()];
        seen[orbit[0] as usize] = true;
        let mut count = 1;
        while let Some(p) = stack.pop() {
            for e in tuple.entries() {
                let q = e.apply(p);
                if !member[q as usize] {
                    return Err(CensusError::NotAnOrbit);
                }
                if !seen[q as usize] {
                    seen[q as usize] = true;
                    count += 1;
                    stack.push(q);
                }
            }
        }
        count
    };
    if reached != orbit.len() {
        return Err(CensusError::NotAnOrbit);
    }

    let mut best: Option<(Vec<Point>, Vec<Point>)> = None;
    for &base in orbit {
        let cand = bfs_relabel(tuple, orbit, base);
        match &best {
            Some((cert, _)) if *cert <= cand.0 => {}
            _ => best = Some(cand),
        }
    }
    let (cert, local) = best.expect("orbit is nonempty");
    Ok((
        OrbitType {
            arity: tuple.arity() as u16,
            degree: orbit.len() as u16,
            cert,
        },
        local,
    ))
}

/// A finite multiset of orbit types: the function counting, per isomorphism
/// type, the orbits of that type.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Census {
    arity: u16,
    convention: TrivialConvention,
    counts: BTreeMap<OrbitType, u64>,
}

impl Census {
    pub fn empty(arity: usize, convention: TrivialConvention) -> Self {
        Census {
            arity: arity as u16,
            convention,
            counts: BTreeMap::new(),
        }
    }

    pub fn from_counts(
        arity: usize,
        convention: TrivialConvention,
        counts: BTreeMap<OrbitType, u64>,
    ) -> Self {
        let mut counts = counts;
        counts.retain(|t, &mut c| {
            c > 0 && !(convention == TrivialConvention::ExcludeTrivial && t.is_trivial())
        });
        debug_assert!(counts.keys().all(|t| t.arity() == arity));
        Census {
            arity: arity as u16,
            convention,
            counts,
        }
    }

    pub fn arity(&self) -> usize {
        self.arity as usize
    }

    pub fn convention(&self) -> TrivialConvention {
        self.convention
    }

    pub fn counts(&self) -> &BTreeMap<OrbitType, u64> {
        &self.counts
    }

    pub fn count(&self, t: &OrbitType) -> u64 {
        self.counts.get(t).copied().unwrap_or(0)
    }

    /// Total number of points covered: sum of degree times count.
    pub fn weight(&self) -> u64 {
        self.counts
            .iter()
            .map(|(t, &c)| t.degree() as u64 * c)
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}

impl fmt::Debug for Census {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Census(n={}, [", self.arity)?;
        for (i, (t, c)) in self.counts.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "deg{}x{}", t.degree(), c)?;
        }
        write!(f, "])")
    }
}

impl fmt::Display for Census {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (t, c) in &self.counts {
            writeln!(f, "{:016x}: {}", t.fingerprint(), c)?;
        }
        if self.arity == 1 {
            let mut parts = Vec::new();
            for (t, c) in &self.counts {
                if t.degree() == 1 {
                    parts.push(format!("fixed:{c}"));
                } else {
                    parts.push(format!("{}-cycle:{c}", t.degree()));
                }
            }
            writeln!(f, "cycles: {}", parts.join(" "))?;
        }
        Ok(())
    }
}

/// The census of a tuple: how many orbits it has of each isomorphism type.
pub fn census(tuple: &PermTuple, convention: TrivialConvention) -> Census {
    let mut counts: BTreeMap<OrbitType, u64> = BTreeMap::new();
    for orbit in tuple.orbits() {
        if convention == TrivialConvention::ExcludeTrivial && orbit.len() == 1 {
            continue;
        }
        let t = canonical_type(tuple, &orbit).expect("orbits() returns orbits");
        *counts.entry(t).or_insert(0) += 1;
    }
    Census {
        arity: tuple.arity() as u16,
        convention,
        counts,
    }
}

/// One coordinate of a census reindexing: either a source coordinate of the
/// original tuple, or a fresh identity coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ReindexEntry {
    Coord(usize),
    Identity,
}

/// Applies a coordinate selection/duplication/permutation to a single type,
/// returning the types of the sub-orbits of the reindexed action with their
/// multiplicities.
pub fn reindex_type(
    t: &OrbitType,
    map: &[ReindexEntry],
) -> Result<Vec<(OrbitType, u64)>, CensusError> {
    let d = t.degree();
    let entries: Vec<Permutation> = map
        .iter()
        .map(|entry| match entry {
            ReindexEntry::Coord(i) => {
                if *i >= t.arity() {
                    Err(CensusError::IndexOutOfRange(*i, t.arity()))
                } else {
                    Ok(Permutation::from_images(
                        t.certificate()[i * d..(i + 1) * d].to_vec(),
                    )
                    .expect("certificate rows are permutations"))
                }
            }
            ReindexEntry::Identity => Ok(Permutation::identity(d)),
        })
        .collect::<Result<_, _>>()?;
    let sub = PermTuple::new(entries)?;
    let mut out: BTreeMap<OrbitType, u64> = BTreeMap::new();
    for orbit in sub.orbits() {
        let ty = canonical_type(&sub, &orbit).expect("orbits() returns orbits");
        *out.entry(ty).or_insert(0) += 1;
    }
    Ok(out.into_iter().collect())
}

/// Reindexes every type of a census; projections to a proper coordinate
/// subset split each count by the sub-orbit multiplicities of the type.
pub fn census_reindex(c: &Census, map: &[ReindexEntry]) -> Result<Census, CensusError> {
    let mut counts: BTreeMap<OrbitType, u64> = BTreeMap::new();
    for (t, &n) in c.counts() {
        for (sub, mult) in reindex_type(t, map)? {
            if c.convention() == TrivialConvention::ExcludeTrivial && sub.is_trivial() {
                continue;
            }
            *counts.entry(sub).or_insert(0) += mult * n;
        }
    }
    Ok(Census {
        arity: map.len() as u16,
        convention: c.convention(),
        counts,
    })
}

/// Searches for a conjugating witness `h` with `t1^h = t2`. A witness exists
/// exactly when the include-trivial censuses agree; the returned permutation
/// is verified by direct application before being handed back.
pub fn tuples_conjugate(
    t1: &PermTuple,
    t2: &PermTuple,
) -> Result<Option<Permutation>, CensusError> {
    if t1.ground_size() != t2.ground_size() {
        return Err(PermError::GroundMismatch(t1.ground_size(), t2.ground_size()).into());
    }
    if t1.arity() != t2.arity() {
        return Err(PermError::ArityMismatch(t1.arity(), t2.arity()).into());
    }
    let mut by_type_1: BTreeMap<OrbitType, Vec<(Vec<Point>, Vec<Point>)>> = BTreeMap::new();
    for orbit in t1.orbits() {
        let (ty, local) = canonical_type_with_labeling(t1, &orbit)?;
        by_type_1.entry(ty).or_default().push((orbit, local));
    }
    let mut by_type_2: BTreeMap<OrbitType, Vec<(Vec<Point>, Vec<Point>)>> = BTreeMap::new();
    for orbit in t2.orbits() {
        let (ty, local) = canonical_type_with_labeling(t2, &orbit)?;
        by_type_2.entry(ty).or_default().push((orbit, local));
    }
    if by_type_1.len() != by_type_2.len() {
        return Ok(None);
    }
    let mut images = vec![0 as Point; t1.ground_size()];
    for (ty, orbits1) in &by_type_1 {
        let Some(orbits2) = by_type_2.get(ty) else {
            return Ok(None);
        };
        if orbits1.len() != orbits2.len() {
            return Ok(None);
        }
        for ((o1, l1), (o2, l2)) in orbits1.iter().zip(orbits2) {
            // both orbits carry the same canonical labeling; compose them
            let mut from_label = vec![0 as Point; o2.len()];
            for (&p2, &lab) in o2.iter().zip(l2) {
                from_label[lab as usize] = p2;
            }
            for (&p1, &lab) in o1.iter().zip(l1) {
                images[p1 as usize] = from_label[lab as usize];
            }
        }
    }
    let h = Permutation::from_images(images)?;
    debug_assert_eq!(&t1.conjugate(&h)?, t2);
    if t1.conjugate(&h)? == *t2 {
        Ok(Some(h))
    } else {
        Ok(None)
    }
}

/// Builds a tuple with the given census, padding with fixed points under the
/// exclude-trivial convention.
pub fn realize(c: &Census, ground: usize) -> Result<PermTuple, CensusError> {
    let weight = c.weight();
    match c.convention() {
        TrivialConvention::IncludeTrivial => {
            if weight != ground as u64 {
                return Err(CensusError::WeightMismatch { weight, ground });
            }
        }
        TrivialConvention::ExcludeTrivial => {
            if weight > ground as u64 {
                return Err(CensusError::WeightOverflow { weight, ground });
            }
        }
    }
    let arity = c.arity();
    let mut images: Vec<Vec<Point>> = (0..arity)
        .map(|_| (0..ground as Point).collect())
        .collect();
    let mut cursor: usize = 0;
    for (t, &n) in c.counts() {
        let d = t.degree();
        for _ in 0..n {
            for (i, row) in images.iter_mut().enumerate() {
                for p in 0..d {
                    row[cursor + p] = cursor as Point + t.image(i, p as Point);
                }
            }
            cursor += d;
        }
    }
    let entries = images
        .into_iter()
        .map(Permutation::from_images)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PermTuple::new(entries)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::all_permutations;
    use std::collections::BTreeSet;

    fn t(text: &str, ground: usize) -> PermTuple {
        PermTuple::parse(text, ground).unwrap()
    }

    #[test]
    fn single_generator_types_by_degree() {
        // one transitive cyclic action per degree for a single generator
        let a = t("(0 1 2)", 5);
        let b = t("(5 7 6)", 8);
        let ta = canonical_type(&a, &[0, 1, 2]).unwrap();
        let tb = canonical_type(&b, &[5, 6, 7]).unwrap();
        assert_eq!(ta, tb);
        assert_eq!(ta.degree(), 3);
    }

    #[test]
    fn non_orbit_rejected() {
        let a = t("(0 1 2)", 5);
        assert_eq!(
            canonical_type(&a, &[0, 1]).unwrap_err(),
            CensusError::NotAnOrbit
        );
        // union of two orbits is closed but not a single orbit
        let b = t("(0 1)(2 3)", 5);
        assert_eq!(
            canonical_type(&b, &[0, 1, 2, 3]).unwrap_err(),
            CensusError::NotAnOrbit
        );
    }

    #[test]
    fn order_of_generators_matters() {
        // (A,(g1,g2)) vs (A,(g2,g1)) with g1, g2 of different orders
        let g1 = Permutation::parse("(0 1 2)", 3).unwrap();
        let g2 = Permutation::parse("(0 1)", 3).unwrap();
        let t12 = PermTuple::new(vec![g1.clone(), g2.clone()]).unwrap();
        let t21 = PermTuple::new(vec![g2, g1]).unwrap();
        let ty12 = canonical_type(&t12, &[0, 1, 2]).unwrap();
        let ty21 = canonical_type(&t21, &[0, 1, 2]).unwrap();
        assert_ne!(ty12, ty21);
    }

    #[test]
    fn census_of_cycle_pair() {
        let f = t("(0 1)(2 3)", 5);
        let inc = census(&f, TrivialConvention::IncludeTrivial);
        assert_eq!(inc.weight(), 5);
        let degs: Vec<(usize, u64)> = inc
            .counts()
            .iter()
            .map(|(t, &c)| (t.degree(), c))
            .collect();
        assert_eq!(degs, vec![(1, 1), (2, 2)]);
        let exc = census(&f, TrivialConvention::ExcludeTrivial);
        let degs: Vec<(usize, u64)> = exc
            .counts()
            .iter()
            .map(|(t, &c)| (t.degree(), c))
            .collect();
        assert_eq!(degs, vec![(2, 2)]);
    }

    #[test]
    fn arity_one_censuses_match_partitions_of_four() {
        // 5 distinct include-trivial censuses on ground 4 = partitions of 4
        let mut seen = BTreeSet::new();
        for g in all_permutations(4) {
            let tup = PermTuple::new(vec![g]).unwrap();
            seen.insert(census(&tup, TrivialConvention::IncludeTrivial));
        }
        assert_eq!(seen.len(), 5);
    }

    #[test]
    fn conjugate_same_cycle_type() {
        let a = t("(0 1 2)", 5);
        let b = t("(2 3 4)", 5);
        let h = tuples_conjugate(&a, &b).unwrap().expect("witness");
        assert_eq!(a.conjugate(&h).unwrap(), b);
        let idw = tuples_conjugate(&a, &a).unwrap().expect("self witness");
        assert_eq!(a.conjugate(&idw).unwrap(), a);
    }

    #[test]
    fn conjugate_exhaustive_ground_4_matches_brute_force() {
        // census equality iff a conjugator exists, witnessed both ways
        let perms = all_permutations(4);
        let tuples: Vec<PermTuple> = perms
            .iter()
            .map(|g| PermTuple::new(vec![g.clone()]).unwrap())
            .collect();
        for t1 in &tuples {
            for t2 in &tuples {
                let found = tuples_conjugate(t1, t2).unwrap();
                let brute = perms
                    .iter()
                    .any(|h| t1.conjugate(h).unwrap() == *t2);
                assert_eq!(found.is_some(), brute);
                let c1 = census(t1, TrivialConvention::IncludeTrivial);
                let c2 = census(t2, TrivialConvention::IncludeTrivial);
                assert_eq!(found.is_some(), c1 == c2);
            }
        }
    }

    #[test]
    fn realize_round_trip() {
        let f = t("(0 1)(2 3)", 5);
        for conv in [
            TrivialConvention::IncludeTrivial,
            TrivialConvention::ExcludeTrivial,
        ] {
            let c = census(&f, conv);
            let g = realize(&c, 5).unwrap();
            assert_eq!(census(&g, conv), c);
        }
        let five = t("(0 1 2 3 4)", 5);
        let c = census(&five, TrivialConvention::IncludeTrivial);
        let r = realize(&c, 5).unwrap();
        assert_eq!(r.entry(0).to_string(), "(0 1 2 3 4)");
    }

    #[test]
    fn realize_weight_errors() {
        let f = t("(0 1 2 3 4)", 5);
        let c = census(&f, TrivialConvention::ExcludeTrivial);
        assert!(matches!(
            realize(&c, 4),
            Err(CensusError::WeightOverflow { .. })
        ));
        let c = census(&f, TrivialConvention::IncludeTrivial);
        assert!(matches!(
            realize(&c, 6),
            Err(CensusError::WeightMismatch { .. })
        ));
    }

    #[test]
    fn reindex_identity_map_and_inert_coordinate() {
        let f = Permutation::parse("(0 1)(2 3)", 5).unwrap();
        let pair = PermTuple::new(vec![f.clone(), Permutation::identity(5)]).unwrap();
        let c = census(&pair, TrivialConvention::IncludeTrivial);
        let same =
            census_reindex(&c, &[ReindexEntry::Coord(0), ReindexEntry::Coord(1)]).unwrap();
        assert_eq!(same, c);
        // dropping the inert identity coordinate gives the census of (f)
        let dropped = census_reindex(&c, &[ReindexEntry::Coord(0)]).unwrap();
        let single = census(
            &PermTuple::new(vec![f]).unwrap(),
            TrivialConvention::IncludeTrivial,
        );
        assert_eq!(dropped, single);
    }

    #[test]
    fn reindex_out_of_range() {
        let f = t("(0 1)", 3);
        let c = census(&f, TrivialConvention::IncludeTrivial);
        assert!(matches!(
            census_reindex(&c, &[ReindexEntry::Coord(1)]),
            Err(CensusError::IndexOutOfRange(1, 1))
        ));
    }

    #[test]
    fn projection_agrees_with_direct_census_exhaustively() {
        // arity 2 -> 1 projections on ground <= 4 agree with the census of
        // the sub-tuple, for every pair
        for ground in 2..=4usize {
            let perms = all_permutations(ground);
            for g1 in &perms {
                for g2 in &perms {
                    let pair = PermTuple::new(vec![g1.clone(), g2.clone()]).unwrap();
                    for conv in [
                        TrivialConvention::IncludeTrivial,
                        TrivialConvention::ExcludeTrivial,
                    ] {
                        let c = census(&pair, conv);
                        let proj = census_reindex(&c, &[ReindexEntry::Coord(0)]).unwrap();
                        let direct =
                            census(&PermTuple::new(vec![g1.clone()]).unwrap(), conv);
                        assert_eq!(proj, direct);
                    }
                }
            }
        }
    }

    #[test]
    fn disjoint_support_product_census_adds() {
        let t1 = t("(0 1 2)", 8);
        let t2 = t("(5 6)", 8);
        let prod = t1.pointwise_product(&t2).unwrap();
        let c1 = census(&t1, TrivialConvention::ExcludeTrivial);
        let c2 = census(&t2, TrivialConvention::ExcludeTrivial);
        let cp = census(&prod, TrivialConvention::ExcludeTrivial);
        let mut sum = c1.counts().clone();
        for (ty, c) in c2.counts() {
            *sum.entry(ty.clone()).or_insert(0) += c;
        }
        assert_eq!(cp.counts(), &sum);
    }

    #[test]
    fn census_display_mentions_cycles() {
        let f = t("(0 1)(2 3)", 5);
        let c = census(&f, TrivialConvention::IncludeTrivial);
        let text = c.to_string();
        assert!(text.contains("cycles: fixed:1 2-cycle:2"));
    }
}
