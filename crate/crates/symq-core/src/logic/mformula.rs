//! The many-sorted census language: sorts `IS_n` (orbit types), `Card`
//! (counting values), and `F_n` (censuses); atoms for the type-level and
//! census-level equality/product/projection relations, counting-value
//! comparisons, and application. Census terms may be reindexed, which is how
//! compiled formulas address coordinates.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::group_formula::LogicError;
use crate::census::ReindexEntry;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MSort {
    /// Orbit isomorphism types of a given arity.
    Is(u8),
    /// Counting values.
    Card,
    /// Censuses of a given arity.
    F(u8),
}

impl fmt::Display for MSort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MSort::Is(n) => write!(f, "IS{n}"),
            MSort::Card => write!(f, "Card"),
            MSort::F(n) => write!(f, "F{n}"),
        }
    }
}

pub type MVarId = u32;

/// A term of some `IS_n` sort.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TypeTerm {
    Var(MVarId),
}

/// A term of `Card` sort.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CardTerm {
    Var(MVarId),
    Zero,
    /// The least nonzero counting value (the small-set threshold).
    Kappa,
    /// Application of a census to a type of the same arity.
    App(FTerm, TypeTerm),
}

/// A term of some `F_n` sort.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FTerm {
    Var(MVarId),
    /// Coordinate selection/duplication/identity-extension of a census;
    /// dropping trailing coordinates is the projection of the signature.
    Reindex(Vec<ReindexEntry>, Box<FTerm>),
}

impl FTerm {
    /// Projection to the first `n` of `n+1` coordinates.
    pub fn project(self, n: usize) -> FTerm {
        FTerm::Reindex((0..n).map(ReindexEntry::Coord).collect(), Box::new(self))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Lt,
    Le,
    Eq,
}

/// The census-level zero tests come in the plain orbit-counting form and the
/// point-weighted form; the two coincide over the exact finite model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Weighting {
    ByOrbits,
    ByPoints,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MAtom {
    /// The two coordinates of a binary type act identically.
    TypeIsEquality(TypeTerm),
    /// The third coordinate of a ternary type is the product of the first two.
    TypeIsProduct(TypeTerm),
    /// The second type arises from the first by dropping the last coordinate
    /// and passing to one of its orbits.
    TypeProjectsTo(TypeTerm, TypeTerm),
    TypeEq(TypeTerm, TypeTerm),
    /// The type splits as a commuting grid of the two given types on its
    /// first m and last n coordinates.
    TypeIsGridProduct {
        whole: TypeTerm,
        left: TypeTerm,
        right: TypeTerm,
        split: (u8, u8),
    },
    /// The first m coordinates commute with the last n.
    TypeCoordsCommute(TypeTerm, (u8, u8)),
    CardCmp(CmpOp, CardTerm, CardTerm),
    /// Every orbit counted by the binary census is an equality type.
    CensusIsEquality(FTerm, Weighting),
    /// Every orbit counted by the ternary census is a product type.
    CensusIsProduct(FTerm, Weighting),
    FEq(FTerm, FTerm),
    /// Pointwise domination up to the small threshold.
    CensusRestricts(FTerm, FTerm),
}

pub type MF = Arc<MFormula>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MFormula {
    Atom(MAtom),
    Not(MF),
    And(MF, MF),
    Or(MF, MF),
    Implies(MF, MF),
    Exists(MVarId, MSort, MF),
    Forall(MVarId, MSort, MF),
}

pub fn matom(a: MAtom) -> MF {
    Arc::new(MFormula::Atom(a))
}

pub fn mnot(f: MF) -> MF {
    Arc::new(MFormula::Not(f))
}

pub fn mand(a: MF, b: MF) -> MF {
    Arc::new(MFormula::And(a, b))
}

pub fn mor(a: MF, b: MF) -> MF {
    Arc::new(MFormula::Or(a, b))
}

pub fn mimplies(a: MF, b: MF) -> MF {
    Arc::new(MFormula::Implies(a, b))
}

pub fn miff(a: MF, b: MF) -> MF {
    mand(mimplies(a.clone(), b.clone()), mimplies(b, a))
}

pub fn mexists(v: MVarId, sort: MSort, f: MF) -> MF {
    Arc::new(MFormula::Exists(v, sort, f))
}

pub fn mforall(v: MVarId, sort: MSort, f: MF) -> MF {
    Arc::new(MFormula::Forall(v, sort, f))
}

pub fn mand_all(mut parts: Vec<MF>) -> MF {
    match parts.len() {
        0 => {
            let zero = CardTerm::Zero;
            matom(MAtom::CardCmp(CmpOp::Eq, zero.clone(), zero))
        }
        1 => parts.pop().expect("one element"),
        n => {
            let rest = parts.split_off(n / 2);
            mand(mand_all(parts), mand_all(rest))
        }
    }
}

/// Checks well-sortedness given the sorts of the free variables; returns the
/// sort context including quantified variables on success.
pub fn sort_check(
    f: &MF,
    free: &BTreeMap<MVarId, MSort>,
) -> Result<(), LogicError> {
    let mut ctx = free.clone();
    check_formula(f, &mut ctx)
}

fn check_formula(f: &MF, ctx: &mut BTreeMap<MVarId, MSort>) -> Result<(), LogicError> {
    match f.as_ref() {
        MFormula::Atom(a) => check_atom(a, ctx),
        MFormula::Not(x) => check_formula(x, ctx),
        MFormula::And(x, y) | MFormula::Or(x, y) | MFormula::Implies(x, y) => {
            check_formula(x, ctx)?;
            check_formula(y, ctx)
        }
        MFormula::Exists(v, sort, body) | MFormula::Forall(v, sort, body) => {
            if let MSort::Is(0) | MSort::F(0) = sort {
                return Err(LogicError::Sort("sorts have positive arity".into()));
            }
            let shadowed = ctx.insert(*v, *sort);
            let out = check_formula(body, ctx);
            match shadowed {
                Some(s) => {
                    ctx.insert(*v, s);
                }
                None => {
                    ctx.remove(v);
                }
            }
            out
        }
    }
}

fn type_sort(t: &TypeTerm, ctx: &BTreeMap<MVarId, MSort>) -> Result<u8, LogicError> {
    match t {
        TypeTerm::Var(v) => match ctx.get(v) {
            Some(MSort::Is(n)) => Ok(*n),
            Some(other) => Err(LogicError::Sort(format!(
                "variable {v} has sort {other}, expected a type sort"
            ))),
            None => Err(LogicError::Sort(format!("undeclared variable {v}"))),
        },
    }
}

fn f_sort(t: &FTerm, ctx: &BTreeMap<MVarId, MSort>) -> Result<u8, LogicError> {
    match t {
        FTerm::Var(v) => match ctx.get(v) {
            Some(MSort::F(n)) => Ok(*n),
            Some(other) => Err(LogicError::Sort(format!(
                "variable {v} has sort {other}, expected a census sort"
            ))),
            None => Err(LogicError::Sort(format!("undeclared variable {v}"))),
        },
        FTerm::Reindex(map, inner) => {
            let n = f_sort(inner, ctx)?;
            if map.is_empty() {
                return Err(LogicError::Sort("empty reindex map".into()));
            }
            for entry in map {
                if let ReindexEntry::Coord(i) = entry {
                    if *i >= n as usize {
                        return Err(LogicError::Sort(format!(
                            "reindex coordinate {i} out of range for arity {n}"
                        )));
                    }
                }
            }
            u8::try_from(map.len())
                .map_err(|_| LogicError::Sort("reindex arity too large".into()))
        }
    }
}

fn card_sort(t: &CardTerm, ctx: &BTreeMap<MVarId, MSort>) -> Result<(), LogicError> {
    match t {
        CardTerm::Var(v) => match ctx.get(v) {
            Some(MSort::Card) => Ok(()),
            Some(other) => Err(LogicError::Sort(format!(
                "variable {v} has sort {other}, expected Card"
            ))),
            None => Err(LogicError::Sort(format!("undeclared variable {v}"))),
        },
        CardTerm::Zero | CardTerm::Kappa => Ok(()),
        CardTerm::App(h, t) => {
            let hn = f_sort(h, ctx)?;
            let tn = type_sort(t, ctx)?;
            if hn != tn {
                return Err(LogicError::Sort(format!(
                    "application of an F{hn} census to an IS{tn} type"
                )));
            }
            Ok(())
        }
    }
}

fn check_atom(a: &MAtom, ctx: &BTreeMap<MVarId, MSort>) -> Result<(), LogicError> {
    let expect_type = |t: &TypeTerm, n: u8, what: &str| -> Result<(), LogicError> {
        let got = type_sort(t, ctx)?;
        if got != n {
            return Err(LogicError::Sort(format!(
                "{what} expects IS{n}, got IS{got}"
            )));
        }
        Ok(())
    };
    match a {
        MAtom::TypeIsEquality(t) => expect_type(t, 2, "the equality-type relation"),
        MAtom::TypeIsProduct(t) => expect_type(t, 3, "the product-type relation"),
        MAtom::TypeProjectsTo(t1, t2) => {
            let n1 = type_sort(t1, ctx)?;
            let n2 = type_sort(t2, ctx)?;
            if n1 != n2 + 1 {
                return Err(LogicError::Sort(format!(
                    "type projection relates IS{} to IS{}, got IS{n1} and IS{n2}",
                    n2 + 1,
                    n2
                )));
            }
            Ok(())
        }
        MAtom::TypeEq(t1, t2) => {
            if type_sort(t1, ctx)? != type_sort(t2, ctx)? {
                return Err(LogicError::Sort("type equality across sorts".into()));
            }
            Ok(())
        }
        MAtom::TypeIsGridProduct {
            whole,
            left,
            right,
            split: (m, n),
        } => {
            expect_type(whole, m + n, "the grid-product whole")?;
            expect_type(left, *m, "the grid-product left part")?;
            expect_type(right, *n, "the grid-product right part")
        }
        MAtom::TypeCoordsCommute(t, (m, n)) => {
            expect_type(t, m + n, "the commuting-split relation")
        }
        MAtom::CardCmp(_, a, b) => {
            card_sort(a, ctx)?;
            card_sort(b, ctx)
        }
        MAtom::CensusIsEquality(h, _) => {
            let n = f_sort(h, ctx)?;
            if n != 2 {
                return Err(LogicError::Sort(format!(
                    "the census equality relation expects F2, got F{n}"
                )));
            }
            Ok(())
        }
        MAtom::CensusIsProduct(h, _) => {
            let n = f_sort(h, ctx)?;
            if n != 3 {
                return Err(LogicError::Sort(format!(
                    "the census product relation expects F3, got F{n}"
                )));
            }
            Ok(())
        }
        MAtom::FEq(h1, h2) | MAtom::CensusRestricts(h1, h2) => {
            if f_sort(h1, ctx)? != f_sort(h2, ctx)? {
                return Err(LogicError::Sort("census relation across sorts".into()));
            }
            Ok(())
        }
    }
}

// s-expression rendering, deterministic and machine-stable

impl fmt::Display for TypeTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeTerm::Var(v) => write!(f, "t{v}"),
        }
    }
}

impl fmt::Display for FTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FTerm::Var(v) => write!(f, "h{v}"),
            FTerm::Reindex(map, inner) => {
                write!(f, "(reindex (")?;
                for (i, e) in map.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    match e {
                        ReindexEntry::Coord(c) => write!(f, "{c}")?,
                        ReindexEntry::Identity => write!(f, "id")?,
                    }
                }
                write!(f, ") {inner})")
            }
        }
    }
}

impl fmt::Display for CardTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CardTerm::Var(v) => write!(f, "c{v}"),
            CardTerm::Zero => write!(f, "zero"),
            CardTerm::Kappa => write!(f, "kappa"),
            CardTerm::App(h, t) => write!(f, "(app {h} {t})"),
        }
    }
}

impl fmt::Display for MAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MAtom::TypeIsEquality(t) => write!(f, "(eq-type {t})"),
            MAtom::TypeIsProduct(t) => write!(f, "(prod-type {t})"),
            MAtom::TypeProjectsTo(a, b) => write!(f, "(proj-type {a} {b})"),
            MAtom::TypeEq(a, b) => write!(f, "(= {a} {b})"),
            MAtom::TypeIsGridProduct {
                whole,
                left,
                right,
                split,
            } => write!(
                f,
                "(grid-product {} {} {} {} {})",
                whole, left, right, split.0, split.1
            ),
            MAtom::TypeCoordsCommute(t, split) => {
                write!(f, "(commuting-split {t} {} {})", split.0, split.1)
            }
            MAtom::CardCmp(op, a, b) => {
                let sym = match op {
                    CmpOp::Lt => "<",
                    CmpOp::Le => "<=",
                    CmpOp::Eq => "=",
                };
                write!(f, "({sym} {a} {b})")
            }
            MAtom::CensusIsEquality(h, w) => match w {
                Weighting::ByOrbits => write!(f, "(eq-census {h})"),
                Weighting::ByPoints => write!(f, "(eq-census-weighted {h})"),
            },
            MAtom::CensusIsProduct(h, w) => match w {
                Weighting::ByOrbits => write!(f, "(prod-census {h})"),
                Weighting::ByPoints => write!(f, "(prod-census-weighted {h})"),
            },
            MAtom::FEq(a, b) => write!(f, "(= {a} {b})"),
            MAtom::CensusRestricts(a, b) => write!(f, "(restricts {a} {b})"),
        }
    }
}

impl fmt::Display for MFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MFormula::Atom(a) => write!(f, "{a}"),
            MFormula::Not(x) => write!(f, "(not {x})"),
            MFormula::And(x, y) => write!(f, "(and {x} {y})"),
            MFormula::Or(x, y) => write!(f, "(or {x} {y})"),
            MFormula::Implies(x, y) => write!(f, "(implies {x} {y})"),
            MFormula::Exists(v, s, x) => {
                let prefix = match s {
                    MSort::Is(_) => "t",
                    MSort::Card => "c",
                    MSort::F(_) => "h",
                };
                write!(f, "(exists ({prefix}{v} {s}) {x})")
            }
            MFormula::Forall(v, s, x) => {
                let prefix = match s {
                    MSort::Is(_) => "t",
                    MSort::Card => "c",
                    MSort::F(_) => "h",
                };
                write!(f, "(forall ({prefix}{v} {s}) {x})")
            }
        }
    }
}
