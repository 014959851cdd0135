//! The exhaustively enumerated finite census model: for a fixed ground size,
//! all orbit types and all admissible censuses per arity, with the signature
//! relations interpreted by direct computation. Quantifiers range over the
//! enumerated sorts, so evaluation is a decision procedure.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use rayon::prelude::*;

use super::group_formula::LogicError;
use super::mformula::{CardTerm, CmpOp, FTerm, MAtom, MFormula, MSort, MVarId, TypeTerm, MF};
use crate::census::{
    census, census_reindex, reindex_type, Census, OrbitType, ReindexEntry, TrivialConvention,
};
use crate::perm::{all_permutations, PermTuple};

#[derive(Debug, Clone, Copy)]
pub struct ModelBounds {
    pub max_ground: usize,
    pub max_sort_arity: usize,
    /// Ceiling on the total number of tuples enumerated per sort.
    pub max_tuple_enumeration: u64,
}

impl Default for ModelBounds {
    fn default() -> Self {
        ModelBounds {
            max_ground: 5,
            max_sort_arity: 4,
            max_tuple_enumeration: 3_000_000,
        }
    }
}

/// An element of the model: an orbit type, a counting value, or a census,
/// the latter two referenced by index into the sort enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MValue {
    Type(u8, u32),
    Card(u64),
    Census(u8, u32),
}

impl MValue {
    fn key(&self) -> (u8, u8, u64) {
        match self {
            MValue::Type(n, i) => (0, *n, *i as u64),
            MValue::Card(v) => (1, 0, *v),
            MValue::Census(n, i) => (2, *n, *i as u64),
        }
    }
}

pub struct MFinModel {
    ground: usize,
    convention: TrivialConvention,
    max_arity: usize,
    types: Vec<Vec<OrbitType>>,
    type_index: Vec<HashMap<OrbitType, u32>>,
    censuses: Vec<Vec<Census>>,
    census_index: Vec<HashMap<Census, u32>>,
    type_is_equality: Vec<bool>,
    type_is_product: Vec<bool>,
    census_is_equality: Vec<bool>,
    census_is_product: Vec<bool>,
}

impl MFinModel {
    pub fn build(
        ground: usize,
        max_arity: usize,
        convention: TrivialConvention,
        bounds: &ModelBounds,
    ) -> Result<Self, LogicError> {
        if ground == 0 || ground > bounds.max_ground {
            return Err(LogicError::ModelBound(format!(
                "ground size {ground} outside 1..={}",
                bounds.max_ground
            )));
        }
        if max_arity == 0 || max_arity > bounds.max_sort_arity {
            return Err(LogicError::ModelBound(format!(
                "arity {max_arity} outside 1..={}",
                bounds.max_sort_arity
            )));
        }
        let mut types = Vec::with_capacity(max_arity);
        for n in 1..=max_arity {
            let budget: u64 = (1..=ground)
                .map(|d| (factorial(d) as u64).pow(n as u32))
                .sum();
            if budget > bounds.max_tuple_enumeration {
                return Err(LogicError::ModelBound(format!(
                    "enumerating IS{n} over ground {ground} needs {budget} tuples"
                )));
            }
            types.push(enumerate_types(ground, n, convention));
        }
        let type_index: Vec<HashMap<OrbitType, u32>> = types
            .iter()
            .map(|ts| {
                ts.iter()
                    .enumerate()
                    .map(|(i, t)| (t.clone(), i as u32))
                    .collect()
            })
            .collect();
        let censuses: Vec<Vec<Census>> = types
            .iter()
            .enumerate()
            .map(|(i, ts)| enumerate_censuses(ground, i + 1, ts, convention))
            .collect();
        let census_index: Vec<HashMap<Census, u32>> = censuses
            .iter()
            .map(|cs| {
                cs.iter()
                    .enumerate()
                    .map(|(i, c)| (c.clone(), i as u32))
                    .collect()
            })
            .collect();

        let type_is_equality = if max_arity >= 2 {
            types[1].iter().map(type_coords_equal).collect()
        } else {
            Vec::new()
        };
        let type_is_product = if max_arity >= 3 {
            types[2].iter().map(type_third_is_product).collect()
        } else {
            Vec::new()
        };
        let census_is_equality = if max_arity >= 2 {
            censuses[1]
                .iter()
                .map(|c| {
                    c.counts()
                        .keys()
                        .all(|t| type_is_equality[type_index[1][t] as usize])
                })
                .collect()
        } else {
            Vec::new()
        };
        let census_is_product = if max_arity >= 3 {
            censuses[2]
                .iter()
                .map(|c| {
                    c.counts()
                        .keys()
                        .all(|t| type_is_product[type_index[2][t] as usize])
                })
                .collect()
        } else {
            Vec::new()
        };
        Ok(MFinModel {
            ground,
            convention,
            max_arity,
            types,
            type_index,
            censuses,
            census_index,
            type_is_equality,
            type_is_product,
            census_is_equality,
            census_is_product,
        })
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn convention(&self) -> TrivialConvention {
        self.convention
    }

    pub fn max_arity(&self) -> usize {
        self.max_arity
    }

    pub fn types(&self, arity: usize) -> &[OrbitType] {
        &self.types[arity - 1]
    }

    pub fn censuses(&self, arity: usize) -> &[Census] {
        &self.censuses[arity - 1]
    }

    pub fn type_value(&self, t: &OrbitType) -> Option<MValue> {
        let arity = t.arity();
        if arity == 0 || arity > self.max_arity {
            return None;
        }
        self.type_index[arity - 1]
            .get(t)
            .map(|&i| MValue::Type(arity as u8, i))
    }

    /// The model element standing for a census (its index in the sort).
    pub fn census_value(&self, c: &Census) -> Result<MValue, LogicError> {
        let arity = c.arity();
        if arity == 0 || arity > self.max_arity {
            return Err(LogicError::ModelBound(format!(
                "census arity {arity} not enumerated"
            )));
        }
        self.census_index[arity - 1]
            .get(c)
            .map(|&i| MValue::Census(arity as u8, i))
            .ok_or_else(|| {
                LogicError::ModelBound(format!(
                    "census of weight {} is not admissible at ground {}",
                    c.weight(),
                    self.ground
                ))
            })
    }

    /// The census of a tuple as a model element.
    pub fn tuple_value(&self, t: &PermTuple) -> Result<MValue, LogicError> {
        self.census_value(&census(t, self.convention))
    }
}

fn factorial(n: usize) -> usize {
    (2..=n).product::<usize>().max(1)
}

fn enumerate_types(ground: usize, arity: usize, convention: TrivialConvention) -> Vec<OrbitType> {
    let mut out: BTreeSet<OrbitType> = BTreeSet::new();
    for degree in 1..=ground {
        if degree == 1 {
            if convention == TrivialConvention::IncludeTrivial {
                let t = PermTuple::identity(arity, 1);
                out.insert(
                    crate::census::canonical_type(&t, &[0]).expect("single point"),
                );
            }
            continue;
        }
        let perms = all_permutations(degree);
        let total = (perms.len() as u64).pow(arity as u32) as usize;
        let chunk = (total / (rayon::current_num_threads() * 4).max(1)).max(1);
        let found: BTreeSet<OrbitType> = (0..total)
            .into_par_iter()
            .with_min_len(chunk)
            .fold(BTreeSet::new, |mut acc: BTreeSet<OrbitType>, mut code| {
                let mut entries = Vec::with_capacity(arity);
                for _ in 0..arity {
                    entries.push(perms[code % perms.len()].clone());
                    code /= perms.len();
                }
                let tuple = PermTuple::new(entries).expect("positive arity");
                let orbits = tuple.orbits();
                if orbits.len() == 1 {
                    acc.insert(
                        crate::census::canonical_type(&tuple, &orbits[0])
                            .expect("single orbit"),
                    );
                }
                acc
            })
            .reduce(BTreeSet::new, |mut a, b| {
                a.extend(b);
                a
            });
        out.extend(found);
    }
    out.into_iter().collect()
}

fn enumerate_censuses(
    ground: usize,
    arity: usize,
    types: &[OrbitType],
    convention: TrivialConvention,
) -> Vec<Census> {
    // group the types by degree, then split the weight across degrees and
    // pick a multiset of types per degree
    let mut by_degree: BTreeMap<usize, Vec<&OrbitType>> = BTreeMap::new();
    for t in types {
        by_degree.entry(t.degree()).or_default().push(t);
    }
    let degrees: Vec<usize> = by_degree.keys().copied().collect();
    let exact = convention == TrivialConvention::IncludeTrivial;

    fn multisets<'a>(
        pool: &[&'a OrbitType],
        count: usize,
        start: usize,
        current: &mut Vec<&'a OrbitType>,
        out: &mut Vec<Vec<&'a OrbitType>>,
    ) {
        if count == 0 {
            out.push(current.clone());
            return;
        }
        for i in start..pool.len() {
            current.push(pool[i]);
            multisets(pool, count - 1, i, current, out);
            current.pop();
        }
    }

    fn rec(
        degrees: &[usize],
        by_degree: &BTreeMap<usize, Vec<&OrbitType>>,
        di: usize,
        remaining: u64,
        exact: bool,
        counts: &mut BTreeMap<OrbitType, u64>,
        arity: usize,
        convention: TrivialConvention,
        out: &mut Vec<Census>,
    ) {
        if di == degrees.len() {
            if !exact || remaining == 0 {
                out.push(Census::from_counts(arity, convention, counts.clone()));
            }
            return;
        }
        let d = degrees[di] as u64;
        let pool = &by_degree[&degrees[di]];
        let max_count = (remaining / d) as usize;
        for c in 0..=max_count {
            let mut picks = Vec::new();
            multisets(pool, c, 0, &mut Vec::new(), &mut picks);
            for pick in picks {
                for t in &pick {
                    *counts.entry((*t).clone()).or_insert(0) += 1;
                }
                rec(
                    degrees,
                    by_degree,
                    di + 1,
                    remaining - c as u64 * d,
                    exact,
                    counts,
                    arity,
                    convention,
                    out,
                );
                for t in &pick {
                    match counts.get_mut(*t) {
                        Some(n) if *n > 1 => *n -= 1,
                        _ => {
                            counts.remove(*t);
                        }
                    }
                }
            }
        }
    }

    let mut out = Vec::new();
    rec(
        &degrees,
        &by_degree,
        0,
        ground as u64,
        exact,
        &mut BTreeMap::new(),
        arity,
        convention,
        &mut out,
    );
    out.sort();
    out.dedup();
    out
}

fn type_coords_equal(t: &OrbitType) -> bool {
    let d = t.degree();
    (0..d as u16).all(|p| t.image(0, p) == t.image(1, p))
}

fn type_third_is_product(t: &OrbitType) -> bool {
    let d = t.degree();
    (0..d as u16).all(|p| t.image(1, t.image(0, p)) == t.image(2, p))
}

/// Evaluator with per-quantifier memoization; reusable across formulas over
/// the same model.
pub struct MEvaluator<'m> {
    model: &'m MFinModel,
    reindex_cache: HashMap<(u8, u32, Vec<ReindexEntry>), (u8, u32)>,
    split_cache: HashMap<(u8, u32), Vec<(u8, u32)>>,
    grid_cache: HashMap<(u32, u8, u8), Option<(u32, u32)>>,
    commute_cache: HashMap<(u8, u32, u8), bool>,
    quantifier_memo: HashMap<(usize, Vec<(MVarId, (u8, u8, u64))>), bool>,
    free_vars: HashMap<usize, Vec<MVarId>>,
    // memo keys are node addresses, so every evaluated root is kept alive
    // for the evaluator's lifetime
    roots: Vec<MF>,
}

impl<'m> MEvaluator<'m> {
    pub fn new(model: &'m MFinModel) -> Self {
        MEvaluator {
            model,
            reindex_cache: HashMap::new(),
            split_cache: HashMap::new(),
            grid_cache: HashMap::new(),
            commute_cache: HashMap::new(),
            quantifier_memo: HashMap::new(),
            free_vars: HashMap::new(),
            roots: Vec::new(),
        }
    }

    pub fn eval(&mut self, f: &MF, env: &BTreeMap<MVarId, MValue>) -> Result<bool, LogicError> {
        self.roots.push(f.clone());
        let mut env = env.clone();
        self.eval_inner(f, &mut env)
    }

    fn eval_inner(
        &mut self,
        f: &MF,
        env: &mut BTreeMap<MVarId, MValue>,
    ) -> Result<bool, LogicError> {
        match f.as_ref() {
            MFormula::Atom(a) => self.atom(a, env),
            MFormula::Not(x) => Ok(!self.eval_inner(x, env)?),
            MFormula::And(x, y) => Ok(self.eval_inner(x, env)? && self.eval_inner(y, env)?),
            MFormula::Or(x, y) => Ok(self.eval_inner(x, env)? || self.eval_inner(y, env)?),
            MFormula::Implies(x, y) => {
                Ok(!self.eval_inner(x, env)? || self.eval_inner(y, env)?)
            }
            MFormula::Exists(v, sort, body) => self.quantify(f, *v, *sort, body, env, false),
            MFormula::Forall(v, sort, body) => self.quantify(f, *v, *sort, body, env, true),
        }
    }

    fn domain(&self, sort: MSort) -> Result<Vec<MValue>, LogicError> {
        match sort {
            MSort::Is(n) => {
                let n = n as usize;
                if n == 0 || n > self.model.max_arity {
                    return Err(LogicError::ModelBound(format!(
                        "sort IS{n} not enumerated (max arity {})",
                        self.model.max_arity
                    )));
                }
                Ok((0..self.model.types[n - 1].len() as u32)
                    .map(|i| MValue::Type(n as u8, i))
                    .collect())
            }
            MSort::Card => Ok((0..=self.model.ground as u64).map(MValue::Card).collect()),
            MSort::F(n) => {
                let n = n as usize;
                if n == 0 || n > self.model.max_arity {
                    return Err(LogicError::ModelBound(format!(
                        "sort F{n} not enumerated (max arity {})",
                        self.model.max_arity
                    )));
                }
                Ok((0..self.model.censuses[n - 1].len() as u32)
                    .map(|i| MValue::Census(n as u8, i))
                    .collect())
            }
        }
    }

    fn quantify(
        &mut self,
        node: &MF,
        v: MVarId,
        sort: MSort,
        body: &MF,
        env: &mut BTreeMap<MVarId, MValue>,
        universal: bool,
    ) -> Result<bool, LogicError> {
        let key_ptr = Arc::as_ptr(node) as usize;
        let frees = self.node_free_vars(node);
        let key_env: Vec<(MVarId, (u8, u8, u64))> = frees
            .iter()
            .filter_map(|fv| env.get(fv).map(|val| (*fv, val.key())))
            .collect();
        if let Some(&cached) = self.quantifier_memo.get(&(key_ptr, key_env.clone())) {
            return Ok(cached);
        }
        let saved = env.get(&v).copied();
        let mut result = universal;
        for value in self.domain(sort)? {
            env.insert(v, value);
            let truth = self.eval_inner(body, env)?;
            if universal && !truth {
                result = false;
                break;
            }
            if !universal && truth {
                result = true;
                break;
            }
        }
        match saved {
            Some(p) => {
                env.insert(v, p);
            }
            None => {
                env.remove(&v);
            }
        }
        self.quantifier_memo.insert((key_ptr, key_env), result);
        Ok(result)
    }

    fn node_free_vars(&mut self, f: &MF) -> Vec<MVarId> {
        let key = Arc::as_ptr(f) as usize;
        if let Some(v) = self.free_vars.get(&key) {
            return v.clone();
        }
        let mut out: BTreeSet<MVarId> = BTreeSet::new();
        match f.as_ref() {
            MFormula::Atom(a) => atom_vars(a, &mut out),
            MFormula::Not(x) => out.extend(self.node_free_vars(x)),
            MFormula::And(x, y) | MFormula::Or(x, y) | MFormula::Implies(x, y) => {
                out.extend(self.node_free_vars(x));
                out.extend(self.node_free_vars(y));
            }
            MFormula::Exists(v, _, x) | MFormula::Forall(v, _, x) => {
                out.extend(self.node_free_vars(x));
                out.remove(v);
            }
        }
        let v: Vec<MVarId> = out.into_iter().collect();
        self.free_vars.insert(key, v.clone());
        v
    }

    fn type_value(
        &self,
        t: &TypeTerm,
        env: &BTreeMap<MVarId, MValue>,
    ) -> Result<(u8, u32), LogicError> {
        match t {
            TypeTerm::Var(v) => match env.get(v) {
                Some(MValue::Type(n, i)) => Ok((*n, *i)),
                Some(_) => Err(LogicError::Sort(format!("variable {v} is not a type"))),
                None => Err(LogicError::UnboundVariable(*v)),
            },
        }
    }

    fn f_value(
        &mut self,
        t: &FTerm,
        env: &BTreeMap<MVarId, MValue>,
    ) -> Result<(u8, u32), LogicError> {
        match t {
            FTerm::Var(v) => match env.get(v) {
                Some(MValue::Census(n, i)) => Ok((*n, *i)),
                Some(_) => Err(LogicError::Sort(format!("variable {v} is not a census"))),
                None => Err(LogicError::UnboundVariable(*v)),
            },
            FTerm::Reindex(map, inner) => {
                let (n, i) = self.f_value(inner, env)?;
                let key = (n, i, map.clone());
                if let Some(&hit) = self.reindex_cache.get(&key) {
                    return Ok(hit);
                }
                let c = &self.model.censuses[n as usize - 1][i as usize];
                let reindexed = census_reindex(c, map)?;
                let MValue::Census(rn, ri) = self.model.census_value(&reindexed)? else {
                    unreachable!("census_value returns a census")
                };
                self.reindex_cache.insert(key, (rn, ri));
                Ok((rn, ri))
            }
        }
    }

    fn card_value(
        &mut self,
        t: &CardTerm,
        env: &BTreeMap<MVarId, MValue>,
    ) -> Result<u64, LogicError> {
        match t {
            CardTerm::Var(v) => match env.get(v) {
                Some(MValue::Card(c)) => Ok(*c),
                Some(_) => Err(LogicError::Sort(format!(
                    "variable {v} is not a counting value"
                ))),
                None => Err(LogicError::UnboundVariable(*v)),
            },
            CardTerm::Zero => Ok(0),
            CardTerm::Kappa => Ok(1),
            CardTerm::App(h, t) => {
                let (hn, hi) = self.f_value(h, env)?;
                let (tn, ti) = self.type_value(t, env)?;
                if hn != tn {
                    return Err(LogicError::Sort(format!(
                        "application of F{hn} to IS{tn}"
                    )));
                }
                let c = &self.model.censuses[hn as usize - 1][hi as usize];
                let ty = &self.model.types[tn as usize - 1][ti as usize];
                Ok(c.count(ty))
            }
        }
    }

    fn atom(
        &mut self,
        a: &MAtom,
        env: &BTreeMap<MVarId, MValue>,
    ) -> Result<bool, LogicError> {
        match a {
            MAtom::TypeIsEquality(t) => {
                let (n, i) = self.type_value(t, env)?;
                expect_sort(n, 2, "the equality-type relation")?;
                Ok(self.model.type_is_equality[i as usize])
            }
            MAtom::TypeIsProduct(t) => {
                let (n, i) = self.type_value(t, env)?;
                expect_sort(n, 3, "the product-type relation")?;
                Ok(self.model.type_is_product[i as usize])
            }
            MAtom::TypeProjectsTo(t1, t2) => {
                let (n1, i1) = self.type_value(t1, env)?;
                let (n2, i2) = self.type_value(t2, env)?;
                if n1 != n2 + 1 {
                    return Err(LogicError::Sort("projection arity mismatch".into()));
                }
                let splits = self.splits_of(n1, i1)?;
                Ok(splits.contains(&(n2, i2)))
            }
            MAtom::TypeEq(t1, t2) => Ok(self.type_value(t1, env)? == self.type_value(t2, env)?),
            MAtom::TypeIsGridProduct {
                whole,
                left,
                right,
                split: (m, n),
            } => {
                let (wn, wi) = self.type_value(whole, env)?;
                expect_sort(wn, m + n, "the grid-product whole")?;
                let lv = self.type_value(left, env)?;
                let rv = self.type_value(right, env)?;
                let split = self.grid_split(wi, *m, *n)?;
                Ok(split == Some((lv.1, rv.1)) && lv.0 == *m && rv.0 == *n)
            }
            MAtom::TypeCoordsCommute(t, (m, n)) => {
                let (tn, ti) = self.type_value(t, env)?;
                expect_sort(tn, m + n, "the commuting-split relation")?;
                if let Some(&hit) = self.commute_cache.get(&(tn, ti, *m)) {
                    return Ok(hit);
                }
                let ty = &self.model.types[tn as usize - 1][ti as usize];
                let out = split_commutes(ty, *m as usize);
                self.commute_cache.insert((tn, ti, *m), out);
                Ok(out)
            }
            MAtom::CardCmp(op, a, b) => {
                let x = self.card_value(a, env)?;
                let y = self.card_value(b, env)?;
                Ok(match op {
                    CmpOp::Lt => x < y,
                    CmpOp::Le => x <= y,
                    CmpOp::Eq => x == y,
                })
            }
            MAtom::CensusIsEquality(h, _) => {
                let (n, i) = self.f_value(h, env)?;
                expect_sort(n, 2, "the census equality relation")?;
                Ok(self.model.census_is_equality[i as usize])
            }
            MAtom::CensusIsProduct(h, _) => {
                let (n, i) = self.f_value(h, env)?;
                expect_sort(n, 3, "the census product relation")?;
                Ok(self.model.census_is_product[i as usize])
            }
            MAtom::FEq(h1, h2) => Ok(self.f_value(h1, env)? == self.f_value(h2, env)?),
            MAtom::CensusRestricts(h1, h2) => {
                let (n1, i1) = self.f_value(h1, env)?;
                let (n2, i2) = self.f_value(h2, env)?;
                if n1 != n2 {
                    return Err(LogicError::Sort("restriction across sorts".into()));
                }
                let c1 = &self.model.censuses[n1 as usize - 1][i1 as usize];
                let c2 = &self.model.censuses[n2 as usize - 1][i2 as usize];
                Ok(c1
                    .counts()
                    .iter()
                    .all(|(t, &count)| count <= c2.count(t)))
            }
        }
    }

    fn splits_of(&mut self, arity: u8, idx: u32) -> Result<Vec<(u8, u32)>, LogicError> {
        if let Some(hit) = self.split_cache.get(&(arity, idx)) {
            return Ok(hit.clone());
        }
        let ty = &self.model.types[arity as usize - 1][idx as usize];
        let map: Vec<ReindexEntry> = (0..arity as usize - 1).map(ReindexEntry::Coord).collect();
        let mut out = Vec::new();
        for (sub, _) in reindex_type(ty, &map)? {
            if self.model.convention == TrivialConvention::ExcludeTrivial && sub.is_trivial() {
                continue;
            }
            if let Some(MValue::Type(n, i)) = self.model.type_value(&sub) {
                out.push((n, i));
            }
        }
        out.sort_unstable();
        out.dedup();
        self.split_cache.insert((arity, idx), out.clone());
        Ok(out)
    }

    fn grid_split(
        &mut self,
        idx: u32,
        m: u8,
        n: u8,
    ) -> Result<Option<(u32, u32)>, LogicError> {
        if let Some(hit) = self.grid_cache.get(&(idx, m, n)) {
            return Ok(*hit);
        }
        let ty = &self.model.types[(m + n) as usize - 1][idx as usize];
        let split = grid_product_parts(ty, m as usize).and_then(|(l, r)| {
            match (self.model.type_value(&l), self.model.type_value(&r)) {
                (Some(MValue::Type(_, li)), Some(MValue::Type(_, ri))) => Some((li, ri)),
                _ => None,
            }
        });
        self.grid_cache.insert((idx, m, n), split);
        Ok(split)
    }
}

fn expect_sort(got: u8, want: u8, what: &str) -> Result<(), LogicError> {
    if got != want {
        return Err(LogicError::Sort(format!(
            "{what} expects arity {want}, got {got}"
        )));
    }
    Ok(())
}

fn atom_vars(a: &MAtom, out: &mut BTreeSet<MVarId>) {
    fn tvars(t: &TypeTerm, out: &mut BTreeSet<MVarId>) {
        let TypeTerm::Var(v) = t;
        out.insert(*v);
    }
    fn fvars(t: &FTerm, out: &mut BTreeSet<MVarId>) {
        match t {
            FTerm::Var(v) => {
                out.insert(*v);
            }
            FTerm::Reindex(_, inner) => fvars(inner, out),
        }
    }
    fn cvars(t: &CardTerm, out: &mut BTreeSet<MVarId>) {
        match t {
            CardTerm::Var(v) => {
                out.insert(*v);
            }
            CardTerm::Zero | CardTerm::Kappa => {}
            CardTerm::App(h, t) => {
                fvars(h, out);
                tvars(t, out);
            }
        }
    }
    match a {
        MAtom::TypeIsEquality(t) | MAtom::TypeIsProduct(t) => tvars(t, out),
        MAtom::TypeProjectsTo(a, b) | MAtom::TypeEq(a, b) => {
            tvars(a, out);
            tvars(b, out);
        }
        MAtom::TypeIsGridProduct {
            whole,
            left,
            right,
            ..
        } => {
            tvars(whole, out);
            tvars(left, out);
            tvars(right, out);
        }
        MAtom::TypeCoordsCommute(t, _) => tvars(t, out),
        MAtom::CardCmp(_, a, b) => {
            cvars(a, out);
            cvars(b, out);
        }
        MAtom::CensusIsEquality(h, _) | MAtom::CensusIsProduct(h, _) => fvars(h, out),
        MAtom::FEq(a, b) | MAtom::CensusRestricts(a, b) => {
            fvars(a, out);
            fvars(b, out);
        }
    }
}

fn split_commutes(t: &OrbitType, m: usize) -> bool {
    let tup = t.as_tuple();
    let first: Vec<_> = tup.entries()[..m].to_vec();
    let second: Vec<_> = tup.entries()[m..].to_vec();
    for a in &first {
        for b in &second {
            if a.compose(b).expect("same ground") != b.compose(a).expect("same ground") {
                return false;
            }
        }
    }
    true
}

/// When the type splits on its first m coordinates as a commuting grid,
/// returns the (row, column) orbit types; the projections are unique.
fn grid_product_parts(t: &OrbitType, m: usize) -> Option<(OrbitType, OrbitType)> {
    if m == 0 || m >= t.arity() {
        return None;
    }
    if !split_commutes(t, m) {
        return None;
    }
    let tup = t.as_tuple();
    let first = PermTuple::new(tup.entries()[..m].to_vec()).expect("nonempty");
    let second = PermTuple::new(tup.entries()[m..].to_vec()).expect("nonempty");
    let rows = first.orbits();
    let cols = second.orbits();
    if rows.len() * cols.len() != t.degree() {
        return None;
    }
    // every row meets every column exactly once
    let mut col_of = vec![0usize; t.degree()];
    for (ci, col) in cols.iter().enumerate() {
        for &p in col {
            col_of[p as usize] = ci;
        }
    }
    for row in &rows {
        let mut seen = vec![false; cols.len()];
        for &p in row {
            if seen[col_of[p as usize]] {
                return None;
            }
            seen[col_of[p as usize]] = true;
        }
        if !seen.iter().all(|&s| s) {
            return None;
        }
    }
    let row_types: BTreeSet<OrbitType> = rows
        .iter()
        .map(|o| crate::census::canonical_type(&first, o).expect("orbit"))
        .collect();
    let col_types: BTreeSet<OrbitType> = cols
        .iter()
        .map(|o| crate::census::canonical_type(&second, o).expect("orbit"))
        .collect();
    if row_types.len() != 1 || col_types.len() != 1 {
        return None;
    }
    Some((
        row_types.into_iter().next().expect("one row type"),
        col_types.into_iter().next().expect("one column type"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::mformula::*;

    fn model(ground: usize, arity: usize) -> MFinModel {
        MFinModel::build(
            ground,
            arity,
            TrivialConvention::IncludeTrivial,
            &ModelBounds::default(),
        )
        .unwrap()
    }

    #[test]
    fn f1_at_ground_4_has_five_censuses() {
        let m = model(4, 1);
        assert_eq!(m.censuses(1).len(), 5);
        // one single-generator type per degree
        assert_eq!(m.types(1).len(), 4);
    }

    #[test]
    fn equality_census_of_diagonal_tuples() {
        let m = model(3, 2);
        let mut eval = MEvaluator::new(&m);
        for g in all_permutations(3) {
            let pair = PermTuple::new(vec![g.clone(), g.clone()]).unwrap();
            let value = m.tuple_value(&pair).unwrap();
            let mut env = BTreeMap::new();
            env.insert(0, value);
            let f = matom(MAtom::CensusIsEquality(FTerm::Var(0), Weighting::ByOrbits));
            assert!(eval.eval(&f, &env).unwrap());
            let fw = matom(MAtom::CensusIsEquality(FTerm::Var(0), Weighting::ByPoints));
            assert!(eval.eval(&fw, &env).unwrap());
        }
    }

    #[test]
    fn projection_agrees_with_census_of_subtuple() {
        let m = model(4, 2);
        let mut eval = MEvaluator::new(&m);
        let perms = all_permutations(4);
        for g1 in &perms {
            for g2 in &perms {
                let pair = PermTuple::new(vec![g1.clone(), g2.clone()]).unwrap();
                let single = PermTuple::new(vec![g1.clone()]).unwrap();
                let mut env = BTreeMap::new();
                env.insert(0, m.tuple_value(&pair).unwrap());
                env.insert(1, m.tuple_value(&single).unwrap());
                let f = matom(MAtom::FEq(FTerm::Var(0).project(1), FTerm::Var(1)));
                assert!(eval.eval(&f, &env).unwrap());
            }
        }
    }

    #[test]
    fn grid_product_of_two_transpositions() {
        // the product of two degree-2 arity-1 types is a degree-4 arity-2
        // grid type with commuting coordinates
        let m = model(4, 2);
        let mut eval = MEvaluator::new(&m);
        let a = crate::perm::Permutation::parse("(0 1)(2 3)", 4).unwrap();
        let b = crate::perm::Permutation::parse("(0 2)(1 3)", 4).unwrap();
        let pair = PermTuple::new(vec![a, b]).unwrap();
        let whole = crate::census::canonical_type(&pair, &[0, 1, 2, 3]).unwrap();
        let single = crate::perm::Permutation::parse("(0 1)", 2).unwrap();
        let part = crate::census::canonical_type(
            &PermTuple::new(vec![single]).unwrap(),
            &[0, 1],
        )
        .unwrap();
        let mut env = BTreeMap::new();
        env.insert(0, m.type_value(&whole).unwrap());
        env.insert(1, m.type_value(&part).unwrap());
        env.insert(2, m.type_value(&part).unwrap());
        let f = matom(MAtom::TypeIsGridProduct {
            whole: TypeTerm::Var(0),
            left: TypeTerm::Var(1),
            right: TypeTerm::Var(2),
            split: (1, 1),
        });
        assert!(eval.eval(&f, &env).unwrap());
        let c = matom(MAtom::TypeCoordsCommute(TypeTerm::Var(0), (1, 1)));
        assert!(eval.eval(&c, &env).unwrap());
    }

    #[test]
    fn quantified_projection_sentence() {
        // every binary census is the projection of some ternary census
        let m = model(3, 3);
        let mut eval = MEvaluator::new(&m);
        let f = mforall(
            0,
            MSort::F(2),
            mexists(
                1,
                MSort::F(3),
                matom(MAtom::FEq(FTerm::Var(1).project(2), FTerm::Var(0))),
            ),
        );
        sort_check(&f, &BTreeMap::new()).unwrap();
        assert!(eval.eval(&f, &BTreeMap::new()).unwrap());
    }

    #[test]
    fn model_bounds_are_enforced() {
        assert!(MFinModel::build(
            9,
            1,
            TrivialConvention::IncludeTrivial,
            &ModelBounds::default()
        )
        .is_err());
        assert!(MFinModel::build(
            5,
            4,
            TrivialConvention::IncludeTrivial,
            &ModelBounds::default()
        )
        .is_err());
    }
}
