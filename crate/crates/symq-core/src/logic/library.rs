//! The layered formula constructors over the language of groups: the group
//! diagram, indecomposability, support disjointness, the induced set
//! calculus, purity/isomorphism/application formulas, and the special-case
//! detector sentences. Constructors are registered by name.
//!
//! Bound variables are drawn from a dedicated block per definition, so a
//! definition instantiated twice with the same arguments is the same shared
//! tree; this keeps the deeply layered formulas (which reuse the
//! disjointness core dozens of times) at a manageable size.

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

use super::group_formula::*;
use crate::alt5::GroupTable;

/// User-supplied variables must stay below this; each definition's bound
/// variables live in their own disjoint block above it.
pub const USER_VAR_LIMIT: VarId = 1_000;

const BLOCK: VarId = 1_000;

fn block(n: VarId) -> VarId {
    n * BLOCK
}

fn range(base: VarId, len: usize) -> Vec<VarId> {
    (0..len as VarId).map(|i| base + i).collect()
}

pub struct FormulaLibrary {
    table: Arc<GroupTable>,
    involution: u16,
    cache: RefCell<HashMap<(&'static str, Vec<VarId>), Formula>>,
}

impl FormulaLibrary {
    pub fn new(table: Arc<GroupTable>) -> Self {
        let involution = (0..table.order() as u16)
            .find(|&e| table.element_order(e) == 2)
            .expect("the group has an involution");
        FormulaLibrary {
            table,
            involution,
            cache: RefCell::new(HashMap::new()),
        }
    }

    pub fn group_order(&self) -> usize {
        self.table.order()
    }

    fn cached(
        &self,
        name: &'static str,
        args: Vec<VarId>,
        build: impl FnOnce(&Self) -> Formula,
    ) -> Formula {
        if let Some(f) = self.cache.borrow().get(&(name, args.clone())) {
            return f.clone();
        }
        let f = build(self);
        self.cache
            .borrow_mut()
            .insert((name, args), f.clone());
        f
    }

    /// The multiplication diagram: one conjunct `xi*xj = xk` per pair (i,j).
    pub fn diag(&self, vars: &[VarId]) -> Formula {
        assert_eq!(vars.len(), self.table.order());
        let mut parts = Vec::with_capacity(vars.len() * vars.len());
        for i in 0..vars.len() {
            for j in 0..vars.len() {
                let k = self.table.product(i as u16, j as u16) as usize;
                parts.push(atom(mul(vars[i], vars[j]), var(vars[k])));
            }
        }
        and_all(parts)
    }

    /// `diag` over the block starting at `offset`.
    pub fn alt5(&self, offset: VarId) -> Formula {
        self.cached("alt5", vec![offset], |lib| {
            lib.diag(&range(offset, lib.table.order()))
        })
    }

    /// Every entry of the first block commutes with every entry of the second.
    pub fn comm(&self, xs: &[VarId], ys: &[VarId]) -> Formula {
        let mut parts = Vec::with_capacity(xs.len() * ys.len());
        for &x in xs {
            for &y in ys {
                parts.push(atom(mul(x, y), mul(y, x)));
            }
        }
        and_all(parts)
    }

    /// Entrywise conjugacy: some `z` with `xi*z = z*yi` for all i.
    pub fn conj(&self, xs: &[VarId], ys: &[VarId]) -> Formula {
        assert_eq!(xs.len(), ys.len());
        let z = block(1);
        let parts = xs
            .iter()
            .zip(ys)
            .map(|(&x, &y)| atom(mul(x, z), mul(z, y)))
            .collect();
        exists(z, and_all(parts))
    }

    /// `xs = ys * zs` entrywise.
    fn tuple_product_eq(&self, xs: &[VarId], ys: &[VarId], zs: &[VarId]) -> Formula {
        let parts = xs
            .iter()
            .zip(ys.iter().zip(zs))
            .map(|(&x, (&y, &z))| atom(mul(y, z), var(x)))
            .collect();
        and_all(parts)
    }

    fn tuple_is_one(&self, xs: &[VarId]) -> Formula {
        and_all(xs.iter().map(|&x| atom(var(x), one())).collect())
    }

    /// A diagram tuple that splits as a commuting product of diagram tuples
    /// only when one factor is conjugate to the whole.
    pub fn indec(&self, offset: VarId) -> Formula {
        self.cached("indec", vec![offset], |lib| {
            let n = lib.table.order();
            let xs = range(offset, n);
            let ys = range(block(2), n);
            let zs = range(block(2) + n as VarId, n);
            let hyp = and_all(vec![
                lib.comm(&ys, &zs),
                lib.alt5(block(2)),
                lib.alt5(block(2) + n as VarId),
                lib.tuple_product_eq(&xs, &ys, &zs),
            ]);
            let concl = or(lib.conj(&xs, &ys), lib.conj(&xs, &zs));
            let mut all_bound = ys.clone();
            all_bound.extend(&zs);
            and(
                lib.alt5(offset),
                forall_all(&all_bound, implies(hyp, concl)),
            )
        })
    }

    /// Disjointness at the level of diagram tuples.
    pub fn disj_1(&self, x_off: VarId, y_off: VarId) -> Formula {
        self.cached("disj_1", vec![x_off, y_off], |lib| {
            let n = lib.table.order();
            let xs = range(x_off, n);
            let ys = range(y_off, n);
            let ws = range(block(3), n);
            let product_indec = exists_all(
                &ws,
                and(lib.tuple_product_eq(&ws, &xs, &ys), lib.indec(block(3))),
            );
            and_all(vec![
                lib.indec(x_off),
                lib.indec(y_off),
                lib.comm(&xs, &ys),
                product_indec,
            ])
        })
    }

    /// `x` squares to the identity.
    pub fn set(&self, x: VarId) -> Formula {
        atom(mul(x, x), one())
    }

    /// Disjointness of the sets encoded by two involutions, via diagram
    /// tuples holding them at a fixed involution coordinate.
    pub fn disj_prime(&self, x: VarId, y: VarId) -> Formula {
        self.cached("disj_prime", vec![x, y], |lib| {
            let n = lib.table.order();
            let zs = range(block(4), n);
            let ts = range(block(4) + n as VarId, n);
            let i = lib.involution as usize;
            let mut bound = zs.clone();
            bound.extend(&ts);
            let body = and_all(vec![
                atom(var(zs[i]), var(x)),
                atom(var(ts[i]), var(y)),
                lib.disj_1(block(4), block(4) + n as VarId),
            ]);
            and_all(vec![
                lib.set(x),
                lib.set(y),
                exists_all(&bound, body),
            ])
        })
    }

    fn four_product_eq(&self, target: VarId, parts: &[VarId; 4], aux: VarId) -> Formula {
        let (u1, u2) = (aux, aux + 1);
        exists(
            u1,
            exists(
                u2,
                and_all(vec![
                    atom(mul(parts[0], parts[1]), var(u1)),
                    atom(mul(u1, parts[2]), var(u2)),
                    atom(mul(u2, parts[3]), var(target)),
                ]),
            ),
        )
    }

    /// Almost-disjoint supports for arbitrary elements, through products of
    /// four involutions. The head introduces exactly the eight existential
    /// variables of the definition.
    pub fn disj(&self, x: VarId, y: VarId) -> Formula {
        self.cached("disj", vec![x, y], |lib| {
            let xs: [VarId; 4] = [block(5), block(5) + 1, block(5) + 2, block(5) + 3];
            let ys: [VarId; 4] = [block(5) + 4, block(5) + 5, block(5) + 6, block(5) + 7];
            let mut parts = vec![
                lib.four_product_eq(x, &xs, block(5) + 8),
                lib.four_product_eq(y, &ys, block(5) + 10),
            ];
            for &xi in &xs {
                for &yj in &ys {
                    parts.push(lib.disj_prime(xi, yj));
                }
            }
            let mut head: Vec<VarId> = xs.to_vec();
            head.extend(ys);
            exists_all(&head, and_all(parts))
        })
    }

    pub fn subset(&self, x: VarId, y: VarId) -> Formula {
        self.cached("subset", vec![x, y], |lib| {
            let z = block(6);
            and_all(vec![
                lib.set(x),
                lib.set(y),
                forall(z, implies(lib.disj(y, z), lib.disj(x, z))),
            ])
        })
    }

    pub fn sameset(&self, x: VarId, y: VarId) -> Formula {
        self.cached("sameset", vec![x, y], |lib| {
            let z = block(7);
            and_all(vec![
                lib.set(x),
                lib.set(y),
                forall(z, iff(lib.disj(y, z), lib.disj(x, z))),
            ])
        })
    }

    pub fn union(&self, x: VarId, y: VarId, z: VarId) -> Formula {
        self.cached("union", vec![x, y, z], |lib| {
            let t = block(8);
            and_all(vec![
                lib.set(x),
                lib.set(y),
                lib.set(z),
                forall(
                    t,
                    iff(
                        and(lib.subset(x, t), lib.subset(y, t)),
                        lib.subset(z, t),
                    ),
                ),
            ])
        })
    }

    pub fn intersect(&self, x: VarId, y: VarId, z: VarId) -> Formula {
        self.cached("intersect", vec![x, y, z], |lib| {
            let t = block(9);
            and_all(vec![
                lib.set(x),
                lib.set(y),
                lib.set(z),
                forall(
                    t,
                    iff(
                        and(lib.subset(t, x), lib.subset(t, y)),
                        lib.subset(t, z),
                    ),
                ),
            ])
        })
    }

    /// `y` encodes the union of the supports of the block `xs`.
    pub fn union_n(&self, xs: &[VarId], y: VarId) -> Formula {
        let z = block(10);
        let rhs = and_all(xs.iter().map(|&xi| self.disj(z, xi)).collect());
        forall(z, iff(self.disj(z, y), rhs))
    }

    /// The action of `z` carries the set of `x` to the set of `y`.
    pub fn map(&self, x: VarId, y: VarId, z: VarId) -> Formula {
        self.cached("map", vec![x, y, z], |lib| {
            let w = block(11);
            and_all(vec![
                lib.set(x),
                lib.set(y),
                exists(
                    w,
                    and(atom(mul(z, w), mul(x, z)), lib.sameset(w, y)),
                ),
            ])
        })
    }

    /// Some element is disjoint only from the identity: the top-quotient
    /// detector sentence.
    pub fn max_sentence(&self) -> Formula {
        self.cached("max", vec![], |lib| {
            let (x, y) = (block(12), block(12) + 1);
            exists(
                x,
                forall(y, implies(lib.disj(x, y), atom(var(y), one()))),
            )
        })
    }

    pub fn disj_n(&self, xs: &[VarId], ys: &[VarId]) -> Formula {
        let mut parts = Vec::with_capacity(xs.len() * ys.len());
        for &x in xs {
            for &y in ys {
                parts.push(self.disj(x, y));
            }
        }
        and_all(parts)
    }

    /// `xs` is a restriction of `ys`: some disjoint block multiplies it out.
    pub fn restr_n(&self, xs: &[VarId], ys: &[VarId]) -> Formula {
        assert_eq!(xs.len(), ys.len());
        let zs = range(block(13), xs.len());
        let eqs = xs
            .iter()
            .zip(ys)
            .zip(&zs)
            .map(|((&x, &y), &z)| atom(mul(x, z), var(y)))
            .collect();
        exists_all(
            &zs,
            and(self.disj_n(xs, &zs), and_all(eqs)),
        )
    }

    /// The blocks share a nontrivial restriction up to conjugacy.
    pub fn compat_n(&self, xs: &[VarId], ys: &[VarId]) -> Formula {
        assert_eq!(xs.len(), ys.len());
        let n = xs.len();
        let zs = range(block(14), n);
        let t = block(14) + n as VarId;
        let ws = range(block(14) + n as VarId + 1, n);
        let twisted = zs
            .iter()
            .zip(&ws)
            .map(|(&z, &w)| atom(mul(z, t), mul(t, w)))
            .collect();
        let mut bound = zs.clone();
        bound.push(t);
        bound.extend(&ws);
        exists_all(
            &bound,
            and_all(vec![
                not(self.tuple_is_one(&zs)),
                self.restr_n(&zs, xs),
                and_all(twisted),
                self.restr_n(&ws, ys),
            ]),
        )
    }

    /// All nontrivial restrictions of the block are compatible: the block
    /// acts one way on almost all of its orbits.
    pub fn pure_n(&self, xs: &[VarId]) -> Formula {
        let n = xs.len();
        let ys = range(block(15), n);
        let zs = range(block(15) + n as VarId, n);
        let hyp = and_all(vec![
            not(self.tuple_is_one(&ys)),
            not(self.tuple_is_one(&zs)),
            self.restr_n(&ys, xs),
            self.restr_n(&zs, xs),
        ]);
        let mut bound = ys.clone();
        bound.extend(&zs);
        and(
            forall_all(&bound, implies(hyp, self.compat_n(&ys, &zs))),
            implies(not(self.max_sentence()), not(self.tuple_is_one(xs))),
        )
    }

    pub fn iso_n(&self, xs: &[VarId], ys: &[VarId]) -> Formula {
        and_all(vec![
            self.pure_n(xs),
            self.pure_n(ys),
            or(
                self.compat_n(xs, ys),
                and(self.tuple_is_one(xs), self.tuple_is_one(ys)),
            ),
        ])
    }

    /// The supports of two involutions have the same cardinality.
    pub fn samecard(&self, x: VarId, y: VarId) -> Formula {
        self.cached("samecard", vec![x, y], |lib| {
            let b = block(16);
            let (x1, x2, y1, y2) = (b, b + 1, b + 2, b + 3);
            exists_all(
                &[x1, x2, y1, y2],
                and_all(vec![
                    lib.set(x),
                    lib.set(y),
                    lib.disj(x1, x2),
                    lib.disj(y1, y2),
                    atom(mul(x1, x2), var(x)),
                    atom(mul(y1, y2), var(y)),
                    lib.conj(&[x1], &[y1]),
                    lib.conj(&[x2], &[y2]),
                ]),
            )
        })
    }

    pub fn lesseq(&self, x: VarId, y: VarId) -> Formula {
        self.cached("lesseq", vec![x, y], |lib| {
            let z = block(17);
            and_all(vec![
                lib.set(x),
                lib.set(y),
                exists(z, and(lib.subset(z, y), lib.samecard(x, z))),
            ])
        })
    }

    pub fn eq1(&self, x1: VarId, x2: VarId) -> Formula {
        and(self.pure_n(&[x1, x2]), atom(var(x1), var(x2)))
    }

    pub fn eq(&self, x1: VarId, x2: VarId) -> Formula {
        atom(var(x1), var(x2))
    }

    pub fn prod1(&self, x1: VarId, x2: VarId, x3: VarId) -> Formula {
        and(self.pure_n(&[x1, x2, x3]), atom(mul(x1, x2), var(x3)))
    }

    pub fn prod(&self, x1: VarId, x2: VarId, x3: VarId) -> Formula {
        atom(mul(x1, x2), var(x3))
    }

    /// Projection at the level of pure blocks: dropping the last coordinate
    /// lands in the isomorphism class of the target block.
    pub fn proj1(&self, xs: &[VarId], ys: &[VarId]) -> Formula {
        assert_eq!(xs.len(), ys.len() + 1);
        and_all(vec![
            self.pure_n(xs),
            self.pure_n(ys),
            self.iso_n(&xs[..ys.len()], ys),
        ])
    }

    /// Projection at the level of census blocks: plain conjugacy of the
    /// leading coordinates.
    pub fn proj(&self, xs: &[VarId], ys: &[VarId]) -> Formula {
        assert_eq!(xs.len(), ys.len() + 1);
        self.conj(&xs[..ys.len()], ys)
    }

    /// Application: either a maximal pure restriction of `xs` compatible
    /// with `ys` has support cardinality coded by `z`, or no restriction is
    /// compatible and `z` codes zero.
    pub fn app_n(&self, xs: &[VarId], ys: &[VarId], z: VarId) -> Formula {
        assert_eq!(xs.len(), ys.len());
        let n = xs.len();
        let ts = range(block(18), n);
        let us = range(block(18) + n as VarId, n);
        let v = block(18) + 2 * n as VarId;
        let maximal = forall_all(
            &us,
            implies(
                and_all(vec![
                    self.restr_n(&ts, &us),
                    self.restr_n(&us, xs),
                    self.pure_n(&us),
                ]),
                and_all(
                    us.iter()
                        .zip(&ts)
                        .map(|(&u, &t)| atom(var(u), var(t)))
                        .collect(),
                ),
            ),
        );
        let positive = exists_all(
            &ts,
            and_all(vec![
                self.pure_n(&ts),
                self.compat_n(ys, &ts),
                self.restr_n(&ts, xs),
                maximal,
                exists(v, and(self.union_n(&ts, v), self.samecard(v, z))),
            ]),
        );
        let negative = and(
            forall_all(
                &ts,
                implies(self.compat_n(ys, &ts), not(self.restr_n(&ts, xs))),
            ),
            atom(var(z), one()),
        );
        and(self.pure_n(ys), or(positive, negative))
    }

    /// Detector for the bottom case: some element whose only restrictions
    /// are trivial or everything.
    pub fn kappa_aleph0_detector(&self) -> Formula {
        self.cached("kappa_aleph0", vec![], |lib| {
            let (x, y) = (block(19), block(19) + 1);
            exists(
                x,
                forall(
                    y,
                    implies(
                        lib.restr_n(&[y], &[x]),
                        or(atom(var(y), one()), atom(var(y), var(x))),
                    ),
                ),
            )
        })
    }

    /// No splitting as a disjoint product with both factors nontrivial.
    pub fn irreducible_n(&self, xs: &[VarId]) -> Formula {
        let n = xs.len();
        let ys = range(block(20), n);
        let zs = range(block(20) + n as VarId, n);
        let mut bound = ys.clone();
        bound.extend(&zs);
        and(
            not(self.tuple_is_one(xs)),
            forall_all(
                &bound,
                implies(
                    and(self.disj_n(&ys, &zs), self.tuple_product_eq(xs, &ys, &zs)),
                    or(self.tuple_is_one(&ys), self.tuple_is_one(&zs)),
                ),
            ),
        )
    }

    /// There is a transposition: an involution whose products with its
    /// conjugates all have order dividing 2 or 3.
    pub fn transposition_sentence(&self) -> Formula {
        self.cached("transposition", vec![], |_lib| {
            let b = block(21);
            let (x, y, c, u, v) = (b, b + 1, b + 2, b + 3, b + 4);
            exists(
                x,
                and_all(vec![
                    not(atom(var(x), one())),
                    atom(mul(x, x), one()),
                    forall(
                        y,
                        exists_all(
                            &[c, u, v],
                            and_all(vec![
                                atom(mul(y, c), mul(x, y)),
                                atom(mul(x, c), var(u)),
                                atom(mul(u, u), var(v)),
                                or(atom(var(v), one()), atom(mul(v, u), one())),
                            ]),
                        ),
                    ),
                ]),
            )
        })
    }

    /// Builds a library formula by name. Parameters are variable ids (all
    /// below [`USER_VAR_LIMIT`]) with a leading block length `n` where the
    /// name is arity-parametric; blocks are consecutive ids from an offset.
    pub fn build(&self, name: &str, params: &[u32]) -> Result<Formula, LogicError> {
        let bad = |message: &str| LogicError::BadParams {
            name: name.to_string(),
            message: message.to_string(),
        };
        if params.iter().any(|&p| p >= USER_VAR_LIMIT) {
            return Err(bad("variable parameters must lie below the user limit"));
        }
        let order = self.table.order();
        let args = |count: usize| -> Result<&[u32], LogicError> {
            if params.len() == count {
                Ok(params)
            } else {
                Err(bad(&format!("expected {count} parameters")))
            }
        };
        let block_pair = |params: &[u32]| -> Result<(usize, Vec<VarId>, Vec<VarId>), LogicError> {
            if params.len() != 3 {
                return Err(bad("expected n, x_offset, y_offset"));
            }
            let n = params[0] as usize;
            Ok((n, range(params[1], n), range(params[2], n)))
        };
        Ok(match name {
            "diag" | "alt5" => self.alt5(args(1)?[0]),
            "comm" => {
                let (_, xs, ys) = block_pair(params)?;
                self.comm(&xs, &ys)
            }
            "conj" => {
                let (_, xs, ys) = block_pair(params)?;
                self.conj(&xs, &ys)
            }
            "indec" => self.indec(args(1)?[0]),
            "set" => self.set(args(1)?[0]),
            "disj1" => {
                let p = args(2)?;
                self.disj_1(p[0], p[1])
            }
            "disj_prime" => {
                let p = args(2)?;
                self.disj_prime(p[0], p[1])
            }
            "disj" => {
                let p = args(2)?;
                self.disj(p[0], p[1])
            }
            "subset" => {
                let p = args(2)?;
                self.subset(p[0], p[1])
            }
            "sameset" => {
                let p = args(2)?;
                self.sameset(p[0], p[1])
            }
            "union" => {
                let p = args(3)?;
                self.union(p[0], p[1], p[2])
            }
            "intersect" => {
                let p = args(3)?;
                self.intersect(p[0], p[1], p[2])
            }
            "union_n" => {
                if params.len() < 2 {
                    return Err(bad("expected n, x_offset, y"));
                }
                let n = params[0] as usize;
                self.union_n(&range(params[1], n), params[2])
            }
            "map" => {
                let p = args(3)?;
                self.map(p[0], p[1], p[2])
            }
            "max" => {
                args(0)?;
                self.max_sentence()
            }
            "disj_n" => {
                let (_, xs, ys) = block_pair(params)?;
                self.disj_n(&xs, &ys)
            }
            "restr_n" => {
                let (_, xs, ys) = block_pair(params)?;
                self.restr_n(&xs, &ys)
            }
            "compat_n" => {
                let (_, xs, ys) = block_pair(params)?;
                self.compat_n(&xs, &ys)
            }
            "pure_n" => {
                if params.len() != 2 {
                    return Err(bad("expected n, x_offset"));
                }
                self.pure_n(&range(params[1], params[0] as usize))
            }
            "iso_n" => {
                let (_, xs, ys) = block_pair(params)?;
                self.iso_n(&xs, &ys)
            }
            "samecard" => {
                let p = args(2)?;
                self.samecard(p[0], p[1])
            }
            "lesseq" => {
                let p = args(2)?;
                self.lesseq(p[0], p[1])
            }
            "eq1" => {
                let p = args(2)?;
                self.eq1(p[0], p[1])
            }
            "eq" => {
                let p = args(2)?;
                self.eq(p[0], p[1])
            }
            "prod1" => {
                let p = args(3)?;
                self.prod1(p[0], p[1], p[2])
            }
            "prod" => {
                let p = args(3)?;
                self.prod(p[0], p[1], p[2])
            }
            "proj1" => {
                let (n, xs, _) = block_pair(params)?;
                let _ = n;
                let ys = range(params[2], n.saturating_sub(1));
                self.proj1(&xs, &ys)
            }
            "proj" => {
                let (n, xs, _) = block_pair(params)?;
                let ys = range(params[2], n.saturating_sub(1));
                self.proj(&xs, &ys)
            }
            "app" => {
                if params.len() != 4 {
                    return Err(bad("expected n, x_offset, y_offset, z"));
                }
                let n = params[0] as usize;
                self.app_n(&range(params[1], n), &range(params[2], n), params[3])
            }
            "kappa_aleph0" => {
                args(0)?;
                self.kappa_aleph0_detector()
            }
            "irreducible" => {
                if params.len() != 2 {
                    return Err(bad("expected n, x_offset"));
                }
                self.irreducible_n(&range(params[1], params[0] as usize))
            }
            "transposition" => {
                args(0)?;
                self.transposition_sentence()
            }
            _ => {
                let _ = order;
                return Err(LogicError::UnknownName(name.to_string()));
            }
        })
    }

    pub fn names() -> &'static [&'static str] {
        &[
            "alt5",
            "app",
            "comm",
            "compat_n",
            "conj",
            "diag",
            "disj",
            "disj1",
            "disj_n",
            "disj_prime",
            "eq",
            "eq1",
            "indec",
            "intersect",
            "irreducible",
            "iso_n",
            "kappa_aleph0",
            "lesseq",
            "map",
            "max",
            "prod",
            "prod1",
            "proj",
            "proj1",
            "pure_n",
            "restr_n",
            "samecard",
            "sameset",
            "set",
            "subset",
            "transposition",
            "union",
            "union_n",
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alt5::a5_table;
    use crate::logic::group_formula::{existential_prefix_len, free_vars, stats};

    fn lib() -> FormulaLibrary {
        FormulaLibrary::new(Arc::new(a5_table()))
    }

    #[test]
    fn diag_has_3600_conjuncts() {
        let l = lib();
        let f = l.alt5(0);
        assert_eq!(stats(&f).atoms, 3600);
        assert_eq!(free_vars(&f).len(), 60);
    }

    #[test]
    fn set_is_a_single_square_atom() {
        let l = lib();
        let f = l.set(7);
        assert_eq!(f.to_string(), "x7*x7 = 1");
        assert_eq!(free_vars(&f).into_iter().collect::<Vec<_>>(), vec![7]);
    }

    #[test]
    fn disj_introduces_eight_head_existentials() {
        let l = lib();
        let f = l.disj(0, 1);
        assert_eq!(existential_prefix_len(&f), 8);
        assert_eq!(
            free_vars(&f).into_iter().collect::<Vec<_>>(),
            vec![0, 1]
        );
    }

    #[test]
    fn layered_formulas_have_expected_free_vars() {
        let l = lib();
        for (f, expect) in [
            (l.subset(0, 1), vec![0, 1]),
            (l.sameset(2, 3), vec![2, 3]),
            (l.union(0, 1, 2), vec![0, 1, 2]),
            (l.intersect(0, 1, 2), vec![0, 1, 2]),
            (l.map(0, 1, 2), vec![0, 1, 2]),
            (l.samecard(4, 5), vec![4, 5]),
            (l.lesseq(0, 1), vec![0, 1]),
            (l.max_sentence(), vec![]),
            (l.kappa_aleph0_detector(), vec![]),
            (l.transposition_sentence(), vec![]),
        ] {
            assert_eq!(
                free_vars(&f).into_iter().collect::<Vec<_>>(),
                expect
            );
        }
    }

    #[test]
    fn indec_is_shared_across_instances() {
        let l = lib();
        let a = l.disj(0, 1);
        let b = l.disj(0, 1);
        assert!(Arc::ptr_eq(&a, &b));
    }

    #[test]
    fn every_registry_name_constructs() {
        let l = lib();
        let params: &[(&str, &[u32])] = &[
            ("alt5", &[0]),
            ("app", &[2, 0, 2, 4]),
            ("comm", &[2, 0, 2]),
            ("compat_n", &[2, 0, 2]),
            ("conj", &[2, 0, 2]),
            ("diag", &[0]),
            ("disj", &[0, 1]),
            ("disj1", &[0, 60]),
            ("disj_n", &[2, 0, 2]),
            ("disj_prime", &[0, 1]),
            ("eq", &[0, 1]),
            ("eq1", &[0, 1]),
            ("indec", &[0]),
            ("intersect", &[0, 1, 2]),
            ("irreducible", &[2, 0]),
            ("iso_n", &[2, 0, 2]),
            ("kappa_aleph0", &[]),
            ("lesseq", &[0, 1]),
            ("map", &[0, 1, 2]),
            ("max", &[]),
            ("prod", &[0, 1, 2]),
            ("prod1", &[0, 1, 2]),
            ("proj", &[3, 0, 10]),
            ("proj1", &[3, 0, 10]),
            ("pure_n", &[2, 0]),
            ("restr_n", &[2, 0, 2]),
            ("samecard", &[0, 1]),
            ("sameset", &[0, 1]),
            ("set", &[0]),
            ("subset", &[0, 1]),
            ("transposition", &[]),
            ("union", &[0, 1, 2]),
            ("union_n", &[2, 0, 2]),
        ];
        assert_eq!(params.len(), FormulaLibrary::names().len());
        for (name, p) in params {
            let f = l.build(name, p).unwrap_or_else(|e| panic!("{name}: {e}"));
            // free variables stay within the user parameter range
            for v in free_vars(&f) {
                assert!(v < USER_VAR_LIMIT, "{name} leaks bound variable {v}");
            }
        }
    }

    #[test]
    fn application_formula_free_vars() {
        let l = lib();
        let f = l.app_n(&[0, 1], &[2, 3], 4);
        assert_eq!(
            free_vars(&f).into_iter().collect::<Vec<_>>(),
            vec![0, 1, 2, 3, 4]
        );
        let g = l.iso_n(&[0, 1], &[2, 3]);
        assert_eq!(
            free_vars(&g).into_iter().collect::<Vec<_>>(),
            vec![0, 1, 2, 3]
        );
    }

    #[test]
    fn registry_dispatch() {
        let l = lib();
        assert!(l.build("set", &[0]).is_ok());
        assert!(l.build("disj", &[0, 1]).is_ok());
        assert!(l.build("restr_n", &[2, 0, 2]).is_ok());
        assert!(matches!(
            l.build("nonsense", &[]),
            Err(LogicError::UnknownName(_))
        ));
        assert!(matches!(
            l.build("set", &[]),
            Err(LogicError::BadParams { .. })
        ));
    }
}
