//! Compilation of group-language formulas into the census language, by
//! induction on the formula: atoms become census-level equality/product
//! tests after coordinate reindexing, connectives pass through, and an
//! existential quantifier becomes an existential census quantifier tied down
//! by projection. `check_translation` is the finite truth oracle validating
//! the compiled form against direct group-side evaluation on every
//! assignment.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::group_formula::{
    eval_group, free_vars, Formula, GroupFormula, GroupTerm, LogicError, VarId,
};
use super::mformula::{
    mand, matom, mexists, mnot, CardTerm, FTerm, MAtom, MFormula, MSort, MVarId, Weighting, MF,
};
use super::model::{MEvaluator, MFinModel, ModelBounds, MValue};
use crate::census::{ReindexEntry, TrivialConvention};
use crate::perm::{all_permutations, PermTuple};

/// A compiled formula: one free census variable (id 0) of sort `F(arity)`.
#[derive(Debug, Clone)]
pub struct CompiledFormula {
    pub arity: usize,
    pub free_var: MVarId,
    pub formula: MF,
}

impl CompiledFormula {
    pub fn free_sort(&self) -> MSort {
        MSort::F(self.arity as u8)
    }
}

pub fn translate(phi: &Formula, arity: usize) -> Result<CompiledFormula, LogicError> {
    translate_weighted(phi, arity, Weighting::ByOrbits)
}

/// As `translate`, with the point-weighted census zero tests in the atoms.
pub fn translate_weighted(
    phi: &Formula,
    arity: usize,
    weighting: Weighting,
) -> Result<CompiledFormula, LogicError> {
    if arity == 0 {
        return Err(LogicError::Sort(
            "translation needs at least one coordinate".into(),
        ));
    }
    for v in free_vars(phi) {
        if v as usize >= arity {
            return Err(LogicError::ArityExceeded(v, arity));
        }
    }
    let mut fresh_group: VarId = 1 << 20;
    let flat = flatten_double_products(phi, &mut fresh_group);
    let normalized = coordinate_normalize(&flat, arity)?;
    let mut next_mvar: MVarId = 1;
    let formula = core(&normalized, arity, 0, &mut next_mvar, weighting)?;
    Ok(CompiledFormula {
        arity,
        free_var: 0,
        formula,
    })
}

/// Replaces `s*t = u*v` atoms by an existential equation against a fresh
/// variable, so only the basic atom shapes remain.
fn flatten_double_products(f: &Formula, fresh: &mut VarId) -> Formula {
    use GroupFormula::*;
    match f.as_ref() {
        Equals(GroupTerm::Mul(a, b), GroupTerm::Mul(c, d)) => {
            let w = *fresh;
            *fresh += 1;
            Arc::new(Exists(
                w,
                Arc::new(And(
                    Arc::new(Equals(GroupTerm::Mul(*a, *b), GroupTerm::Var(w))),
                    Arc::new(Equals(GroupTerm::Mul(*c, *d), GroupTerm::Var(w))),
                )),
            ))
        }
        Equals(..) => f.clone(),
        Not(x) => Arc::new(Not(flatten_double_products(x, fresh))),
        And(x, y) => Arc::new(And(
            flatten_double_products(x, fresh),
            flatten_double_products(y, fresh),
        )),
        Or(x, y) => Arc::new(Or(
            flatten_double_products(x, fresh),
            flatten_double_products(y, fresh),
        )),
        Implies(x, y) => Arc::new(Implies(
            flatten_double_products(x, fresh),
            flatten_double_products(y, fresh),
        )),
        Exists(v, x) => Arc::new(Exists(*v, flatten_double_products(x, fresh))),
        Forall(v, x) => Arc::new(Forall(*v, flatten_double_products(x, fresh))),
    }
}

/// Renames every bound variable to the coordinate it occupies: a quantifier
/// under `m` enclosing coordinates binds coordinate `m`.
fn coordinate_normalize(f: &Formula, arity: usize) -> Result<Formula, LogicError> {
    fn go(
        f: &Formula,
        m: usize,
        map: &mut HashMap<VarId, VarId>,
    ) -> Result<Formula, LogicError> {
        use GroupFormula::*;
        let rename = |t: &GroupTerm, map: &HashMap<VarId, VarId>| -> Result<GroupTerm, LogicError> {
            let var = |v: &VarId| -> Result<VarId, LogicError> {
                map.get(v).copied().ok_or(LogicError::UnboundVariable(*v))
            };
            Ok(match t {
                GroupTerm::One => GroupTerm::One,
                GroupTerm::Var(v) => GroupTerm::Var(var(v)?),
                GroupTerm::Mul(a, b) => GroupTerm::Mul(var(a)?, var(b)?),
            })
        };
        Ok(match f.as_ref() {
            Equals(a, b) => Arc::new(Equals(rename(a, map)?, rename(b, map)?)),
            Not(x) => Arc::new(Not(go(x, m, map)?)),
            And(x, y) => Arc::new(And(go(x, m, map)?, go(y, m, map)?)),
            Or(x, y) => Arc::new(Or(go(x, m, map)?, go(y, m, map)?)),
            Implies(x, y) => Arc::new(Implies(go(x, m, map)?, go(y, m, map)?)),
            Exists(v, x) | Forall(v, x) => {
                let coordinate = m as VarId;
                let shadowed = map.insert(*v, coordinate);
                let body = go(x, m + 1, map)?;
                match shadowed {
                    Some(old) => {
                        map.insert(*v, old);
                    }
                    None => {
                        map.remove(v);
                    }
                }
                if matches!(f.as_ref(), Exists(..)) {
                    Arc::new(Exists(coordinate, body))
                } else {
                    Arc::new(Forall(coordinate, body))
                }
            }
        })
    }
    let mut map: HashMap<VarId, VarId> = (0..arity as VarId).map(|v| (v, v)).collect();
    go(f, arity, &mut map)
}

fn core(
    f: &Formula,
    m: usize,
    y: MVarId,
    next: &mut MVarId,
    weighting: Weighting,
) -> Result<MF, LogicError> {
    use GroupFormula::*;
    Ok(match f.as_ref() {
        Equals(a, b) => basic_atom(a, b, m, y, weighting)?,
        Not(x) => mnot(core(x, m, y, next, weighting)?),
        And(x, z) => mand(
            core(x, m, y, next, weighting)?,
            core(z, m, y, next, weighting)?,
        ),
        Or(x, z) => Arc::new(MFormula::Or(
            core(x, m, y, next, weighting)?,
            core(z, m, y, next, weighting)?,
        )),
        Implies(x, z) => Arc::new(MFormula::Implies(
            core(x, m, y, next, weighting)?,
            core(z, m, y, next, weighting)?,
        )),
        Exists(v, body) => {
            debug_assert_eq!(*v as usize, m, "coordinate-normalized input");
            let inner_var = *next;
            *next += 1;
            let inner = core(body, m + 1, inner_var, next, weighting)?;
            mexists(
                inner_var,
                MSort::F(m as u8 + 1),
                mand(inner, projection_equation(inner_var, y, m)),
            )
        }
        Forall(v, body) => {
            debug_assert_eq!(*v as usize, m, "coordinate-normalized input");
            let inner_var = *next;
            *next += 1;
            let inner = core(body, m + 1, inner_var, next, weighting)?;
            mnot(mexists(
                inner_var,
                MSort::F(m as u8 + 1),
                mand(mnot(inner), projection_equation(inner_var, y, m)),
            ))
        }
    })
}

fn projection_equation(extended: MVarId, base: MVarId, m: usize) -> MF {
    matom(MAtom::FEq(
        FTerm::Var(extended).project(m),
        FTerm::Var(base),
    ))
}

fn basic_atom(
    a: &GroupTerm,
    b: &GroupTerm,
    m: usize,
    y: MVarId,
    weighting: Weighting,
) -> Result<MF, LogicError> {
    use GroupTerm::*;
    let coord = |i: &VarId| -> Result<ReindexEntry, LogicError> {
        if (*i as usize) < m {
            Ok(ReindexEntry::Coord(*i as usize))
        } else {
            Err(LogicError::UnboundVariable(*i))
        }
    };
    let eq = |entries: Vec<ReindexEntry>| {
        matom(MAtom::CensusIsEquality(
            FTerm::Reindex(entries, Box::new(FTerm::Var(y))),
            weighting,
        ))
    };
    let prod = |entries: Vec<ReindexEntry>| {
        matom(MAtom::CensusIsProduct(
            FTerm::Reindex(entries, Box::new(FTerm::Var(y))),
            weighting,
        ))
    };
    Ok(match (a, b) {
        (Var(i), Var(j)) => eq(vec![coord(i)?, coord(j)?]),
        (One, One) => eq(vec![ReindexEntry::Identity, ReindexEntry::Identity]),
        (Var(i), One) | (One, Var(i)) => eq(vec![coord(i)?, ReindexEntry::Identity]),
        (Mul(i, j), Var(k)) | (Var(k), Mul(i, j)) => {
            prod(vec![coord(i)?, coord(j)?, coord(k)?])
        }
        (Mul(i, j), One) | (One, Mul(i, j)) => {
            prod(vec![coord(i)?, coord(j)?, ReindexEntry::Identity])
        }
        (Mul(..), Mul(..)) => unreachable!("double products are flattened before compilation"),
    })
}

/// Outcome of the exhaustive truth-transfer check for one formula.
#[derive(Debug, Clone)]
pub struct TranslationCheck {
    pub formula: String,
    pub arity: usize,
    pub ground: usize,
    pub assignments: u64,
    pub distinct_censuses: usize,
    pub disagreement_count: u64,
    /// The first few disagreeing assignments, as replayable witness lines.
    pub disagreements: Vec<String>,
}

impl TranslationCheck {
    pub fn pass(&self) -> bool {
        self.disagreement_count == 0
    }
}

/// The largest sort arity the compiled form of `phi` touches: quantified
/// census sorts plus reindex targets (product atoms reach arity 3).
pub fn required_sort_arity(phi: &Formula, arity: usize) -> Result<usize, LogicError> {
    let compiled = translate(phi, arity)?;
    fn f_term(t: &FTerm, acc: &mut usize) {
        if let FTerm::Reindex(map, inner) = t {
            *acc = (*acc).max(map.len());
            f_term(inner, acc);
        }
    }
    fn card_term(t: &CardTerm, acc: &mut usize) {
        if let CardTerm::App(h, _) = t {
            f_term(h, acc);
        }
    }
    fn go(f: &MF, acc: &mut usize) {
        match f.as_ref() {
            MFormula::Atom(a) => match a {
                MAtom::CensusIsEquality(h, _) | MAtom::CensusIsProduct(h, _) => f_term(h, acc),
                MAtom::FEq(a, b) | MAtom::CensusRestricts(a, b) => {
                    f_term(a, acc);
                    f_term(b, acc);
                }
                MAtom::CardCmp(_, a, b) => {
                    card_term(a, acc);
                    card_term(b, acc);
                }
                _ => {}
            },
            MFormula::Not(x) => go(x, acc),
            MFormula::And(x, y) | MFormula::Or(x, y) | MFormula::Implies(x, y) => {
                go(x, acc);
                go(y, acc);
            }
            MFormula::Exists(_, sort, x) | MFormula::Forall(_, sort, x) => {
                if let MSort::Is(n) | MSort::F(n) = sort {
                    *acc = (*acc).max(*n as usize);
                }
                go(x, acc);
            }
        }
    }
    let mut acc = arity;
    go(&compiled.formula, &mut acc);
    Ok(acc)
}

/// Evaluates `phi` on every assignment over Sym(ground) and compares with
/// the compiled formula evaluated at the assignment's census.
pub fn check_translation(
    phi: &Formula,
    arity: usize,
    ground: usize,
    bounds: &ModelBounds,
) -> Result<TranslationCheck, LogicError> {
    let model = MFinModel::build(
        ground,
        required_sort_arity(phi, arity)?,
        TrivialConvention::IncludeTrivial,
        bounds,
    )?;
    let mut eval = MEvaluator::new(&model);
    check_translation_in(phi, arity, &model, &mut eval)
}

/// As `check_translation`, reusing a prebuilt model and evaluator.
pub fn check_translation_in(
    phi: &Formula,
    arity: usize,
    model: &MFinModel,
    eval: &mut MEvaluator<'_>,
) -> Result<TranslationCheck, LogicError> {
    let ground = model.ground();
    let compiled = translate(phi, arity)?;
    let perms = all_permutations(ground);
    let total = (perms.len() as u64).pow(arity as u32);
    let mut by_census: HashMap<(u8, u32), bool> = HashMap::new();
    let mut disagreement_count = 0u64;
    let mut disagreements = Vec::new();
    let mut distinct = 0usize;
    for code in 0..total {
        let mut c = code;
        let mut entries = Vec::with_capacity(arity);
        for _ in 0..arity {
            entries.push(perms[(c % perms.len() as u64) as usize].clone());
            c /= perms.len() as u64;
        }
        let group_truth = eval_group(phi, ground, &entries)?;
        let tuple = PermTuple::new(entries.clone())?;
        let value = model.tuple_value(&tuple)?;
        let MValue::Census(cn, ci) = value else {
            unreachable!("tuple_value returns a census")
        };
        let m_truth = match by_census.get(&(cn, ci)) {
            Some(&t) => t,
            None => {
                distinct += 1;
                let mut env = BTreeMap::new();
                env.insert(compiled.free_var, value);
                let t = eval.eval(&compiled.formula, &env)?;
                by_census.insert((cn, ci), t);
                t
            }
        };
        if group_truth != m_truth {
            disagreement_count += 1;
            if disagreements.len() < 8 {
                let assignment = entries
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(", ");
                disagreements.push(format!(
                    "assignment [{assignment}] group={group_truth} census={m_truth}"
                ));
            }
        }
    }
    Ok(TranslationCheck {
        formula: phi.to_string(),
        arity,
        ground,
        assignments: total,
        distinct_censuses: distinct,
        disagreement_count,
        disagreements,
    })
}

/// The regression pool: every basic atom shape, connective combinations to
/// depth two, and quantified formulas to existential depth two, all with at
/// most two coordinates.
pub fn regression_pool() -> Vec<(&'static str, usize)> {
    vec![
        // atoms
        ("x0 = x0", 1),
        ("x0 = x1", 2),
        ("x0 = 1", 1),
        ("x1 = 1", 2),
        ("1 = x0", 1),
        ("x0*x0 = x0", 1),
        ("x0*x0 = x1", 2),
        ("x0*x1 = x0", 2),
        ("x0*x1 = x1", 2),
        ("x1*x0 = x0", 2),
        ("x0*x0 = 1", 1),
        ("x0*x1 = 1", 2),
        ("x0*x1 = x1*x0", 2),
        ("x0*x0 = x1*x1", 2),
        // connectives to depth two
        ("!x0 = x1", 2),
        ("!x0 = 1", 1),
        ("x0 = x1 & x0 = 1", 2),
        ("x0 = x1 | x0*x1 = 1", 2),
        ("x0 = x1 -> x1 = x0", 2),
        ("x0 = 1 -> x0*x0 = 1", 1),
        ("!(x0 = x1 & x0*x1 = 1)", 2),
        ("!x0 = 1 & !x1 = 1", 2),
        ("(x0 = 1 | x1 = 1) & x0*x1 = x1", 2),
        ("x0 = x1 -> (x0 = 1 -> x1 = 1)", 2),
        ("!(!x0 = 1 | !x1 = 1)", 2),
        ("x0*x1 = 1 & x1*x0 = 1", 2),
        // one quantifier
        ("E x1 (x0*x1 = 1)", 1),
        ("E x2 (x0*x2 = x1)", 2),
        ("E x1 (x1*x1 = x0)", 1),
        ("E x1 (x1*x1 = x0 & !x1 = 1)", 1),
        ("E x1 (x0*x1 = x0*x0)", 1),
        ("E x2 (x0*x2 = x2*x1)", 2),
        ("E x2 (x2*x2 = x0*x1)", 2),
        ("!E x1 (x1*x1 = x0 & !x1 = x0)", 1),
        ("E x1 (x0 = x1)", 1),
        ("E x2 (x0*x2 = x1 & x2 = 1)", 2),
        ("A x1 (x0*x1 = x1*x0)", 1),
        ("A x2 (x2*x0 = x0*x2 -> x2*x1 = x1*x2)", 2),
        ("A x1 (x1 = x1)", 1),
        ("!(x0 = 1) & E x1 (x1*x1 = x0)", 1),
        // quantifier depth two
        ("E x1 (E x2 (x1*x2 = x0))", 1),
        ("E x1 (E x2 (x1*x2 = x0 & x1*x1 = 1 & x2*x2 = 1))", 1),
        ("E x2 (E x3 (x2*x3 = x0 & x3*x2 = x1))", 2),
        ("E x2 (x0*x2 = x2*x1 & E x3 (x3*x3 = x2))", 2),
        ("A x1 (E x2 (x1*x2 = x0))", 1),
        ("E x1 (A x2 (x1*x2 = x2*x1))", 1),
        ("A x1 (A x2 (x1*x2 = x2*x1))", 1),
        ("E x1 (x1*x1 = x0 & A x2 (x2*x2 = x0 -> x2 = x1))", 1),
    ]
}
