//! Census-language formula constructors: subset/function encodings through
//! indicator censuses and grid-product types, the almost-zero/one-one
//! calculus over the small-cardinal tail, divisibility towers, and the
//! case-detector sentences. Registered by name with declared free sorts.

use std::collections::BTreeMap;

use super::group_formula::LogicError;
use super::mformula::*;

/// A library formula together with the sorts of its free variables
/// (numbered from 0 in the argument order of the constructor).
#[derive(Debug, Clone)]
pub struct MLibraryEntry {
    pub formula: MF,
    pub free: BTreeMap<MVarId, MSort>,
}

impl MLibraryEntry {
    pub fn is_sentence(&self) -> bool {
        self.free.is_empty()
    }
}

fn app(h: MVarId, t: MVarId) -> CardTerm {
    CardTerm::App(FTerm::Var(h), TypeTerm::Var(t))
}

fn app_eq(h: MVarId, t: MVarId, value: CardTerm) -> MF {
    matom(MAtom::CardCmp(CmpOp::Eq, app(h, t), value))
}

fn app_zero(h: MVarId, t: MVarId) -> MF {
    app_eq(h, t, CardTerm::Zero)
}

fn app_kappa(h: MVarId, t: MVarId) -> MF {
    app_eq(h, t, CardTerm::Kappa)
}

/// `App_n(h, t) <= kappa` for every type: h encodes a subset of IS_n.
pub fn encodes_subset(h: MVarId, n: u8, fresh: &mut MVarId) -> MF {
    let t = bump(fresh);
    mforall(
        t,
        MSort::Is(n),
        matom(MAtom::CardCmp(CmpOp::Le, app(h, t), CardTerm::Kappa)),
    )
}

/// Membership in the subset encoded by h.
pub fn mem(t: MVarId, h: MVarId) -> MF {
    app_kappa(h, t)
}

/// h and h' encode the same subset of IS_n.
pub fn equal_subsets(h1: MVarId, h2: MVarId, n: u8, fresh: &mut MVarId) -> MF {
    let t = bump(fresh);
    mforall(t, MSort::Is(n), miff(mem(t, h1), mem(t, h2)))
}

/// Every counted type of k splits into commuting halves: k is a product.
pub fn product_census(k: MVarId, m: u8, n: u8, fresh: &mut MVarId) -> MF {
    let t = bump(fresh);
    mforall(
        t,
        MSort::Is(m + n),
        mimplies(
            mnot(app_zero(k, t)),
            matom(MAtom::TypeCoordsCommute(TypeTerm::Var(t), (m, n))),
        ),
    )
}

/// The pair (t1, t2) lies in the relation encoded by k: some counted type of
/// k is their grid product.
pub fn mem_pair(t1: MVarId, t2: MVarId, k: MVarId, m: u8, n: u8, fresh: &mut MVarId) -> MF {
    let t = bump(fresh);
    mexists(
        t,
        MSort::Is(m + n),
        mand(
            app_kappa(k, t),
            matom(MAtom::TypeIsGridProduct {
                whole: TypeTerm::Var(t),
                left: TypeTerm::Var(t1),
                right: TypeTerm::Var(t2),
                split: (m, n),
            }),
        ),
    )
}

/// k encodes a subset of IS_m x IS_n.
pub fn encodes_pair_subset(k: MVarId, m: u8, n: u8, fresh: &mut MVarId) -> MF {
    mand(
        encodes_subset(k, m + n, fresh),
        product_census(k, m, n, fresh),
    )
}

/// k encodes a (partial) function from IS_m to IS_n.
pub fn encodes_function(k: MVarId, m: u8, n: u8, fresh: &mut MVarId) -> MF {
    let t1 = bump(fresh);
    let t2 = bump(fresh);
    let t2b = bump(fresh);
    let functional = mforall(
        t1,
        MSort::Is(m),
        mforall(
            t2,
            MSort::Is(n),
            mforall(
                t2b,
                MSort::Is(n),
                mimplies(
                    mand(
                        mem_pair(t1, t2, k, m, n, fresh),
                        mem_pair(t1, t2b, k, m, n, fresh),
                    ),
                    matom(MAtom::TypeEq(TypeTerm::Var(t2), TypeTerm::Var(t2b))),
                ),
            ),
        ),
    );
    mand(encodes_pair_subset(k, m, n, fresh), functional)
}

/// k encodes a 1-1 function from a subset of IS_m into IS_n.
pub fn encodes_one_one_function(k: MVarId, m: u8, n: u8, fresh: &mut MVarId) -> MF {
    let t1 = bump(fresh);
    let t1b = bump(fresh);
    let t2 = bump(fresh);
    let injective = mforall(
        t1,
        MSort::Is(m),
        mforall(
            t1b,
            MSort::Is(m),
            mforall(
                t2,
                MSort::Is(n),
                mimplies(
                    mand(
                        mem_pair(t1, t2, k, m, n, fresh),
                        mem_pair(t1b, t2, k, m, n, fresh),
                    ),
                    matom(MAtom::TypeEq(TypeTerm::Var(t1), TypeTerm::Var(t1b))),
                ),
            ),
        ),
    );
    mand(encodes_function(k, m, n, fresh), injective)
}

/// Every application value of k is below the small threshold.
pub fn almost_zero(k: MVarId, fresh: &mut MVarId) -> MF {
    let t = bump(fresh);
    mforall(t, MSort::Is(2), app_zero(k, t))
}

/// k is not almost zero.
fn nonzero(k: MVarId, fresh: &mut MVarId) -> MF {
    let t = bump(fresh);
    mexists(t, MSort::Is(2), mnot(app_zero(k, t)))
}

/// The detector sentence for censuses that agree under application without
/// being equal.
pub fn application_collision_sentence(fresh: &mut MVarId) -> MF {
    let h1 = bump(fresh);
    let h2 = bump(fresh);
    let t = bump(fresh);
    mexists(
        h1,
        MSort::F(2),
        mexists(
            h2,
            MSort::F(2),
            mand(
                mnot(matom(MAtom::FEq(FTerm::Var(h1), FTerm::Var(h2)))),
                mforall(
                    t,
                    MSort::Is(2),
                    matom(MAtom::CardCmp(CmpOp::Eq, app(h1, t), app(h2, t))),
                ),
            ),
        ),
    )
}

/// h minimally encodes its set: any census carving out the same members
/// dominates it.
pub fn min_encodes(h: MVarId, n: u8, fresh: &mut MVarId) -> MF {
    let h2 = bump(fresh);
    let t = bump(fresh);
    mforall(
        h2,
        MSort::F(n),
        mimplies(
            mforall(t, MSort::Is(n), miff(mem(t, h), mem(t, h2))),
            matom(MAtom::CensusRestricts(FTerm::Var(h), FTerm::Var(h2))),
        ),
    )
}

/// The function coded by f carries k1 to k2: values transport along the
/// pairs and the domain of k1 is covered.
pub fn carries(f: MVarId, k1: MVarId, k2: MVarId, fresh: &mut MVarId) -> MF {
    let t1 = bump(fresh);
    let t2 = bump(fresh);
    let transport = mforall(
        t1,
        MSort::Is(2),
        mforall(
            t2,
            MSort::Is(2),
            mimplies(
                mem_pair(t1, t2, f, 2, 2, fresh),
                matom(MAtom::CardCmp(CmpOp::Eq, app(k2, t2), app(k1, t1))),
            ),
        ),
    );
    let t1c = bump(fresh);
    let t2c = bump(fresh);
    let cover = mforall(
        t1c,
        MSort::Is(2),
        mimplies(
            mnot(app_zero(k1, t1c)),
            mexists(
                t2c,
                MSort::Is(2),
                mand(
                    mem_pair(t1c, t2c, f, 2, 2, fresh),
                    mnot(app_zero(k2, t2c)),
                ),
            ),
        ),
    );
    mand(transport, cover)
}

/// k1 is the restriction of k2 to the set encoded by h: the largest common
/// restriction below both.
pub fn restriction_to(k1: MVarId, k2: MVarId, h: MVarId, fresh: &mut MVarId) -> MF {
    let kp = bump(fresh);
    mand_all(vec![
        matom(MAtom::CensusRestricts(FTerm::Var(k1), FTerm::Var(k2))),
        matom(MAtom::CensusRestricts(FTerm::Var(k1), FTerm::Var(h))),
        mforall(
            kp,
            MSort::F(2),
            mimplies(
                mand(
                    matom(MAtom::CensusRestricts(FTerm::Var(kp), FTerm::Var(k2))),
                    matom(MAtom::CensusRestricts(FTerm::Var(kp), FTerm::Var(h))),
                ),
                matom(MAtom::CensusRestricts(FTerm::Var(kp), FTerm::Var(k1))),
            ),
        ),
    ])
}

/// k is almost 1-1: no 1-1 function carries one of two disjoint nonzero
/// restrictions of k to the other.
pub fn almost_one_one(k: MVarId, fresh: &mut MVarId) -> MF {
    let k1 = bump(fresh);
    let k2 = bump(fresh);
    let f = bump(fresh);
    let h1 = bump(fresh);
    let h2 = bump(fresh);
    let t = bump(fresh);
    let disjoint_sets = mforall(
        t,
        MSort::Is(2),
        mnot(mand(mem(t, h1), mem(t, h2))),
    );
    let split = mexists(
        h1,
        MSort::F(2),
        mexists(
            h2,
            MSort::F(2),
            mand_all(vec![
                encodes_subset(h1, 2, fresh),
                encodes_subset(h2, 2, fresh),
                disjoint_sets,
                restriction_to(k1, k, h1, fresh),
                restriction_to(k2, k, h2, fresh),
            ]),
        ),
    );
    let bad = mand_all(vec![
        nonzero(k1, fresh),
        nonzero(k2, fresh),
        split,
        encodes_one_one_function(f, 2, 2, fresh),
        carries(f, k1, k2, fresh),
    ]);
    mand(
        almost_zero(k, fresh),
        mforall(
            k1,
            MSort::F(2),
            mforall(
                k2,
                MSort::F(2),
                mforall(f, MSort::F(4), mnot(bad)),
            ),
        ),
    )
}

/// The set coded by k1 embeds into the set coded by k2, values preserved.
pub fn subset_star(k1: MVarId, k2: MVarId, fresh: &mut MVarId) -> MF {
    let f = bump(fresh);
    mexists(
        f,
        MSort::F(4),
        mand(
            encodes_one_one_function(f, 2, 2, fresh),
            carries(f, k1, k2, fresh),
        ),
    )
}

/// The divisibility tower: every coded value of h is divisible by the n-th
/// power of the base. Level zero is the almost-zero predicate; each step
/// asserts interpolation below h for pair-coded minorants.
pub fn divisible_tower(h: MVarId, n: u8, fresh: &mut MVarId) -> MF {
    if n == 0 {
        return almost_zero(h, fresh);
    }
    let prev = divisible_tower(h, n - 1, fresh);
    let hp = bump(fresh);
    let hpp = bump(fresh);
    let below = |upper: MVarId, fresh: &mut MVarId| -> MF {
        let t = bump(fresh);
        let tp = bump(fresh);
        let s = bump(fresh);
        mforall(
            t,
            MSort::Is(2),
            mforall(
                tp,
                MSort::Is(2),
                mforall(
                    s,
                    MSort::Is(4),
                    mimplies(
                        matom(MAtom::TypeIsGridProduct {
                            whole: TypeTerm::Var(s),
                            left: TypeTerm::Var(t),
                            right: TypeTerm::Var(tp),
                            split: (2, 2),
                        }),
                        matom(MAtom::CardCmp(CmpOp::Lt, app(hp, s), app(upper, t))),
                    ),
                ),
            ),
        )
    };
    let interpolates = {
        let t = bump(fresh);
        let tp = bump(fresh);
        let s = bump(fresh);
        mforall(
            t,
            MSort::Is(2),
            mforall(
                tp,
                MSort::Is(2),
                mforall(
                    s,
                    MSort::Is(4),
                    mimplies(
                        matom(MAtom::TypeIsGridProduct {
                            whole: TypeTerm::Var(s),
                            left: TypeTerm::Var(t),
                            right: TypeTerm::Var(tp),
                            split: (2, 2),
                        }),
                        mand(
                            matom(MAtom::CardCmp(CmpOp::Lt, app(hp, s), app(hpp, t))),
                            matom(MAtom::CardCmp(CmpOp::Lt, app(hpp, t), app(h, t))),
                        ),
                    ),
                ),
            ),
        )
    };
    mand(
        prev,
        mforall(
            hp,
            MSort::F(4),
            mimplies(
                mand(product_census(hp, 2, 2, fresh), below(h, fresh)),
                mexists(hpp, MSort::F(2), interpolates),
            ),
        ),
    )
}

/// h takes at most two values: inside every coded subset some sub-subset
/// exists whose setwise stabilizer (among coded permutations) fixes h.
pub fn takes_at_most_two_values(h: MVarId, fresh: &mut MVarId) -> MF {
    let hx = bump(fresh);
    let hy = bump(fresh);
    let f = bump(fresh);
    let subset_of = |a: MVarId, b: MVarId, fresh: &mut MVarId| -> MF {
        let t = bump(fresh);
        mforall(t, MSort::Is(2), mimplies(mem(t, a), mem(t, b)))
    };
    let permutes = |f: MVarId, set: MVarId, fresh: &mut MVarId| -> MF {
        let t1 = bump(fresh);
        let t2 = bump(fresh);
        let within = mforall(
            t1,
            MSort::Is(2),
            mforall(
                t2,
                MSort::Is(2),
                mimplies(
                    mem_pair(t1, t2, f, 2, 2, fresh),
                    mand(mem(t1, set), mem(t2, set)),
                ),
            ),
        );
        let t3 = bump(fresh);
        let t4 = bump(fresh);
        let total = mforall(
            t3,
            MSort::Is(2),
            mimplies(
                mem(t3, set),
                mexists(t4, MSort::Is(2), mem_pair(t3, t4, f, 2, 2, fresh)),
            ),
        );
        let t5 = bump(fresh);
        let t6 = bump(fresh);
        let onto = mforall(
            t5,
            MSort::Is(2),
            mimplies(
                mem(t5, set),
                mexists(t6, MSort::Is(2), mem_pair(t6, t5, f, 2, 2, fresh)),
            ),
        );
        mand_all(vec![within, total, onto])
    };
    let fixes_setwise = |f: MVarId, set: MVarId, fresh: &mut MVarId| -> MF {
        let t1 = bump(fresh);
        let t2 = bump(fresh);
        mforall(
            t1,
            MSort::Is(2),
            mforall(
                t2,
                MSort::Is(2),
                mimplies(
                    mem_pair(t1, t2, f, 2, 2, fresh),
                    miff(mem(t1, set), mem(t2, set)),
                ),
            ),
        )
    };
    let preserves = |f: MVarId, h: MVarId, fresh: &mut MVarId| -> MF {
        let t1 = bump(fresh);
        let t2 = bump(fresh);
        mforall(
            t1,
            MSort::Is(2),
            mforall(
                t2,
                MSort::Is(2),
                mimplies(
                    mem_pair(t1, t2, f, 2, 2, fresh),
                    matom(MAtom::CardCmp(CmpOp::Eq, app(h, t1), app(h, t2))),
                ),
            ),
        )
    };
    let body = mexists(
        hy,
        MSort::F(2),
        mand_all(vec![
            encodes_subset(hy, 2, fresh),
            subset_of(hy, hx, fresh),
            mforall(
                f,
                MSort::F(4),
                mimplies(
                    mand_all(vec![
                        encodes_one_one_function(f, 2, 2, fresh),
                        permutes(f, hx, fresh),
                        fixes_setwise(f, hy, fresh),
                    ]),
                    preserves(f, h, fresh),
                ),
            ),
        ]),
    );
    mforall(
        hx,
        MSort::F(2),
        mimplies(encodes_subset(hx, 2, fresh), body),
    )
}

/// Detector for small thresholds: a nonzero almost-zero census taking at
/// most two values.
pub fn small_threshold_sentence(fresh: &mut MVarId) -> MF {
    let h = bump(fresh);
    mexists(
        h,
        MSort::F(2),
        mand_all(vec![
            nonzero(h, fresh),
            almost_zero(h, fresh),
            takes_at_most_two_values(h, fresh),
        ]),
    )
}

fn bump(fresh: &mut MVarId) -> MVarId {
    let v = *fresh;
    *fresh += 1;
    v
}

/// Builds a library formula by name. Free variables are numbered from zero
/// in the constructor's argument order; arity parameters follow the name.
pub fn m_formula_library(name: &str, params: &[u8]) -> Result<MLibraryEntry, LogicError> {
    let mut fresh: MVarId = 100;
    let need = |count: usize| -> Result<(), LogicError> {
        if params.len() == count {
            Ok(())
        } else {
            Err(LogicError::BadParams {
                name: name.to_string(),
                message: format!("expected {count} arity parameters"),
            })
        }
    };
    let entry = |formula: MF, free: Vec<(MVarId, MSort)>| MLibraryEntry {
        formula,
        free: free.into_iter().collect(),
    };
    Ok(match name {
        "encodes_subset" => {
            need(1)?;
            let n = params[0];
            entry(
                encodes_subset(0, n, &mut fresh),
                vec![(0, MSort::F(n))],
            )
        }
        "mem" => {
            need(1)?;
            let n = params[0];
            entry(mem(0, 1), vec![(0, MSort::Is(n)), (1, MSort::F(n))])
        }
        "equal" => {
            need(1)?;
            let n = params[0];
            entry(
                equal_subsets(0, 1, n, &mut fresh),
                vec![(0, MSort::F(n)), (1, MSort::F(n))],
            )
        }
        "mem_pair" => {
            need(2)?;
            let (m, n) = (params[0], params[1]);
            entry(
                mem_pair(0, 1, 2, m, n, &mut fresh),
                vec![(0, MSort::Is(m)), (1, MSort::Is(n)), (2, MSort::F(m + n))],
            )
        }
        "encodes_pair_subset" => {
            need(2)?;
            let (m, n) = (params[0], params[1]);
            entry(
                encodes_pair_subset(0, m, n, &mut fresh),
                vec![(0, MSort::F(m + n))],
            )
        }
        "fun" => {
            need(2)?;
            let (m, n) = (params[0], params[1]);
            entry(
                encodes_function(0, m, n, &mut fresh),
                vec![(0, MSort::F(m + n))],
            )
        }
        "one_one_fun" => {
            need(2)?;
            let (m, n) = (params[0], params[1]);
            entry(
                encodes_one_one_function(0, m, n, &mut fresh),
                vec![(0, MSort::F(m + n))],
            )
        }
        "almost_zero" => {
            need(0)?;
            entry(almost_zero(0, &mut fresh), vec![(0, MSort::F(2))])
        }
        "cf_le_continuum" => {
            need(0)?;
            entry(application_collision_sentence(&mut fresh), vec![])
        }
        "restr" => {
            need(1)?;
            let n = params[0];
            entry(
                matom(MAtom::CensusRestricts(FTerm::Var(0), FTerm::Var(1))),
                vec![(0, MSort::F(n)), (1, MSort::F(n))],
            )
        }
        "min" => {
            need(1)?;
            let n = params[0];
            entry(min_encodes(0, n, &mut fresh), vec![(0, MSort::F(n))])
        }
        "one_one" => {
            need(0)?;
            entry(almost_one_one(0, &mut fresh), vec![(0, MSort::F(2))])
        }
        "subset_star" => {
            need(0)?;
            entry(
                subset_star(0, 1, &mut fresh),
                vec![(0, MSort::F(2)), (1, MSort::F(2))],
            )
        }
        "div_star" => {
            need(1)?;
            entry(
                divisible_tower(0, params[0], &mut fresh),
                vec![(0, MSort::F(2))],
            )
        }
        "two_values" => {
            need(0)?;
            entry(
                takes_at_most_two_values(0, &mut fresh),
                vec![(0, MSort::F(2))],
            )
        }
        "kappa_le_continuum" => {
            need(0)?;
            entry(small_threshold_sentence(&mut fresh), vec![])
        }
        "is_product_type" => {
            need(2)?;
            let (m, n) = (params[0], params[1]);
            entry(
                matom(MAtom::TypeIsGridProduct {
                    whole: TypeTerm::Var(0),
                    left: TypeTerm::Var(1),
                    right: TypeTerm::Var(2),
                    split: (m, n),
                }),
                vec![
                    (0, MSort::Is(m + n)),
                    (1, MSort::Is(m)),
                    (2, MSort::Is(n)),
                ],
            )
        }
        _ => return Err(LogicError::UnknownName(name.to_string())),
    })
}

pub fn m_library_names() -> &'static [(&'static str, &'static [u8])] {
    &[
        ("almost_zero", &[]),
        ("cf_le_continuum", &[]),
        ("div_star", &[2]),
        ("encodes_pair_subset", &[2, 2]),
        ("encodes_subset", &[2]),
        ("equal", &[2]),
        ("fun", &[2, 2]),
        ("is_product_type", &[1, 1]),
        ("kappa_le_continuum", &[]),
        ("mem", &[2]),
        ("mem_pair", &[2, 2]),
        ("min", &[2]),
        ("one_one", &[]),
        ("one_one_fun", &[2, 2]),
        ("restr", &[2]),
        ("subset_star", &[]),
        ("two_values", &[]),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_library_entry_is_well_sorted() {
        for (name, params) in m_library_names() {
            let e = m_formula_library(name, params).unwrap();
            sort_check(&e.formula, &e.free).unwrap_or_else(|err| {
                panic!("{name}: {err}");
            });
        }
    }

    #[test]
    fn almost_zero_has_one_universal_type_quantifier() {
        let e = m_formula_library("almost_zero", &[]).unwrap();
        match e.formula.as_ref() {
            MFormula::Forall(_, MSort::Is(2), body) => {
                assert!(matches!(body.as_ref(), MFormula::Atom(_)));
            }
            other => panic!("unexpected shape: {other:?}"),
        }
    }

    #[test]
    fn detector_is_a_sentence() {
        let e = m_formula_library("cf_le_continuum", &[]).unwrap();
        assert!(e.is_sentence());
        let k = m_formula_library("kappa_le_continuum", &[]).unwrap();
        assert!(k.is_sentence());
    }

    #[test]
    fn unknown_name_rejected() {
        assert!(matches!(
            m_formula_library("no_such", &[]),
            Err(LogicError::UnknownName(_))
        ));
    }
}
