//! First-order formulas over the language of groups: atoms `t = t'` with
//! terms `1`, `xi`, `xi*xj`, the usual connectives, and quantifiers ranging
//! over a finite symmetric group. Subformulas are reference-counted so the
//! layered formula constructors can share large components.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::perm::{all_permutations, PermTuple, Permutation};

pub type VarId = u32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LogicError {
    #[error("syntax error at byte {0}: {1}")]
    Parse(usize, String),
    #[error("unbound variable x{0}")]
    UnboundVariable(VarId),
    #[error("free variable x{0} exceeds the declared arity {1}")]
    ArityExceeded(VarId, usize),
    #[error("quantifier over Sym({0}) exceeds the evaluation bound Sym({1})")]
    QuantifierSpace(usize, usize),
    #[error("assignment entry {0} has ground size {1}, expected {2}")]
    GroundMismatch(usize, usize, usize),
    #[error("sort error: {0}")]
    Sort(String),
    #[error("model bound exceeded: {0}")]
    ModelBound(String),
    #[error("unknown formula name '{0}'")]
    UnknownName(String),
    #[error("bad parameters for '{name}': {message}")]
    BadParams { name: String, message: String },
    #[error(transparent)]
    Census(#[from] crate::census::CensusError),
    #[error(transparent)]
    Perm(#[from] crate::perm::PermError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupTerm {
    One,
    Var(VarId),
    Mul(VarId, VarId),
}

impl GroupTerm {
    fn vars(&self) -> Vec<VarId> {
        match self {
            GroupTerm::One => vec![],
            GroupTerm::Var(v) => vec![*v],
            GroupTerm::Mul(a, b) => vec![*a, *b],
        }
    }
}

pub type Formula = Arc<GroupFormula>;

#[derive(Debug, PartialEq, Eq, Hash)]
pub enum GroupFormula {
    Equals(GroupTerm, GroupTerm),
    Not(Formula),
    And(Formula, Formula),
    Or(Formula, Formula),
    Implies(Formula, Formula),
    Exists(VarId, Formula),
    Forall(VarId, Formula),
}

pub fn atom(lhs: GroupTerm, rhs: GroupTerm) -> Formula {
    Arc::new(GroupFormula::Equals(lhs, rhs))
}

pub fn var(v: VarId) -> GroupTerm {
    GroupTerm::Var(v)
}

pub fn one() -> GroupTerm {
    GroupTerm::One
}

pub fn mul(a: VarId, b: VarId) -> GroupTerm {
    GroupTerm::Mul(a, b)
}

pub fn not(f: Formula) -> Formula {
    Arc::new(GroupFormula::Not(f))
}

pub fn and(a: Formula, b: Formula) -> Formula {
    Arc::new(GroupFormula::And(a, b))
}

pub fn or(a: Formula, b: Formula) -> Formula {
    Arc::new(GroupFormula::Or(a, b))
}

pub fn implies(a: Formula, b: Formula) -> Formula {
    Arc::new(GroupFormula::Implies(a, b))
}

pub fn iff(a: Formula, b: Formula) -> Formula {
    and(implies(a.clone(), b.clone()), implies(b, a))
}

pub fn exists(v: VarId, f: Formula) -> Formula {
    Arc::new(GroupFormula::Exists(v, f))
}

pub fn forall(v: VarId, f: Formula) -> Formula {
    Arc::new(GroupFormula::Forall(v, f))
}

pub fn exists_all(vars: &[VarId], f: Formula) -> Formula {
    vars.iter().rev().fold(f, |acc, &v| exists(v, acc))
}

pub fn forall_all(vars: &[VarId], f: Formula) -> Formula {
    vars.iter().rev().fold(f, |acc, &v| forall(v, acc))
}

/// Balanced conjunction; empty input yields the tautology `1 = 1`.
pub fn and_all(mut parts: Vec<Formula>) -> Formula {
    match parts.len() {
        0 => atom(GroupTerm::One, GroupTerm::One),
        1 => parts.pop().expect("one element"),
        n => {
            let rest = parts.split_off(n / 2);
            and(and_all(parts), and_all(rest))
        }
    }
}

pub fn or_all(mut parts: Vec<Formula>) -> Formula {
    match parts.len() {
        0 => not(atom(GroupTerm::One, GroupTerm::One)),
        1 => parts.pop().expect("one element"),
        n => {
            let rest = parts.split_off(n / 2);
            or(or_all(parts), or_all(rest))
        }
    }
}

/// Size and shape statistics, computed once per shared subtree but reported
/// as if the sharing were fully expanded.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FormulaStats {
    pub atoms: u64,
    pub existentials: u64,
    pub universals: u64,
}

pub fn stats(f: &Formula) -> FormulaStats {
    fn go(f: &Formula, memo: &mut HashMap<usize, FormulaStats>) -> FormulaStats {
        let key = Arc::as_ptr(f) as usize;
        if let Some(s) = memo.get(&key) {
            return *s;
        }
        let s = match f.as_ref() {
            GroupFormula::Equals(..) => FormulaStats {
                atoms: 1,
                ..Default::default()
            },
            GroupFormula::Not(a) => go(a, memo),
            GroupFormula::And(a, b)
            | GroupFormula::Or(a, b)
            | GroupFormula::Implies(a, b) => {
                let (x, y) = (go(a, memo), go(b, memo));
                FormulaStats {
                    atoms: x.atoms + y.atoms,
                    existentials: x.existentials + y.existentials,
                    universals: x.universals + y.universals,
                }
            }
            GroupFormula::Exists(_, a) => {
                let x = go(a, memo);
                FormulaStats {
                    existentials: x.existentials + 1,
                    ..x
                }
            }
            GroupFormula::Forall(_, a) => {
                let x = go(a, memo);
                FormulaStats {
                    universals: x.universals + 1,
                    ..x
                }
            }
        };
        memo.insert(key, s);
        s
    }
    go(f, &mut HashMap::new())
}

pub fn free_vars(f: &Formula) -> BTreeSet<VarId> {
    fn go(f: &Formula, memo: &mut HashMap<usize, BTreeSet<VarId>>) -> BTreeSet<VarId> {
        let key = Arc::as_ptr(f) as usize;
        if let Some(s) = memo.get(&key) {
            return s.clone();
        }
        let s = match f.as_ref() {
            GroupFormula::Equals(a, b) => {
                a.vars().into_iter().chain(b.vars()).collect()
            }
            GroupFormula::Not(a) => go(a, memo),
            GroupFormula::And(a, b)
            | GroupFormula::Or(a, b)
            | GroupFormula::Implies(a, b) => {
                let mut s = go(a, memo);
                s.extend(go(b, memo));
                s
            }
            GroupFormula::Exists(v, a) | GroupFormula::Forall(v, a) => {
                let mut s = go(a, memo);
                s.remove(v);
                s
            }
        };
        memo.insert(key, s.clone());
        s
    }
    go(f, &mut HashMap::new())
}

/// The length of the outermost existential prefix.
pub fn existential_prefix_len(f: &Formula) -> usize {
    let mut n = 0;
    let mut cur = f;
    while let GroupFormula::Exists(_, body) = cur.as_ref() {
        n += 1;
        cur = body;
    }
    n
}

/// Maximum nesting depth of quantifiers.
pub fn quantifier_depth(f: &Formula) -> usize {
    fn go(f: &Formula, memo: &mut HashMap<usize, usize>) -> usize {
        let key = Arc::as_ptr(f) as usize;
        if let Some(&d) = memo.get(&key) {
            return d;
        }
        let d = match f.as_ref() {
            GroupFormula::Equals(..) => 0,
            GroupFormula::Not(a) => go(a, memo),
            GroupFormula::And(a, b)
            | GroupFormula::Or(a, b)
            | GroupFormula::Implies(a, b) => go(a, memo).max(go(b, memo)),
            GroupFormula::Exists(_, a) | GroupFormula::Forall(_, a) => go(a, memo) + 1,
        };
        memo.insert(key, d);
        d
    }
    go(f, &mut HashMap::new())
}

// ---------------------------------------------------------------------------
// evaluation over Sym(ground)

/// Hard ceiling for quantifier ranges; 7! = 5040 candidates per quantifier.
pub const MAX_QUANTIFIER_GROUND: usize = 7;

struct GroupEval<'a> {
    ground: usize,
    pool: Option<Vec<Permutation>>,
    env: HashMap<VarId, Permutation>,
    phantom: std::marker::PhantomData<&'a ()>,
}

impl GroupEval<'_> {
    fn term(&self, t: &GroupTerm) -> Result<Permutation, LogicError> {
        match t {
            GroupTerm::One => Ok(Permutation::identity(self.ground)),
            GroupTerm::Var(v) => self
                .env
                .get(v)
                .cloned()
                .ok_or(LogicError::UnboundVariable(*v)),
            GroupTerm::Mul(a, b) => {
                let pa = self.env.get(a).ok_or(LogicError::UnboundVariable(*a))?;
                let pb = self.env.get(b).ok_or(LogicError::UnboundVariable(*b))?;
                Ok(pa.compose(pb)?)
            }
        }
    }

    fn eval(&mut self, f: &Formula) -> Result<bool, LogicError> {
        match f.as_ref() {
            GroupFormula::Equals(a, b) => Ok(self.term(a)? == self.term(b)?),
            GroupFormula::Not(a) => Ok(!self.eval(a)?),
            GroupFormula::And(a, b) => Ok(self.eval(a)? && self.eval(b)?),
            GroupFormula::Or(a, b) => Ok(self.eval(a)? || self.eval(b)?),
            GroupFormula::Implies(a, b) => Ok(!self.eval(a)? || self.eval(b)?),
            GroupFormula::Exists(v, body) => self.quantify(*v, body, false),
            GroupFormula::Forall(v, body) => self.quantify(*v, body, true),
        }
    }

    fn quantify(&mut self, v: VarId, body: &Formula, universal: bool) -> Result<bool, LogicError> {
        if self.ground > MAX_QUANTIFIER_GROUND {
            return Err(LogicError::QuantifierSpace(
                self.ground,
                MAX_QUANTIFIER_GROUND,
            ));
        }
        if self.pool.is_none() {
            self.pool = Some(all_permutations(self.ground));
        }
        let pool = self.pool.clone().expect("just filled");
        let saved = self.env.get(&v).cloned();
        let mut result = universal;
        for g in pool {
            self.env.insert(v, g);
            let truth = self.eval(body)?;
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
                self.env.insert(v, p);
            }
            None => {
                self.env.remove(&v);
            }
        }
        Ok(result)
    }
}

/// Evaluates a formula over Sym(ground): `assignment[i]` interprets `xi`,
/// and quantifiers range over all `ground!` permutations.
pub fn eval_group(
    f: &Formula,
    ground: usize,
    assignment: &[Permutation],
) -> Result<bool, LogicError> {
    for (i, p) in assignment.iter().enumerate() {
        if p.ground_size() != ground {
            return Err(LogicError::GroundMismatch(i, p.ground_size(), ground));
        }
    }
    for v in free_vars(f) {
        if v as usize >= assignment.len() {
            return Err(LogicError::UnboundVariable(v));
        }
    }
    let mut eval = GroupEval {
        ground,
        pool: None,
        env: assignment
            .iter()
            .enumerate()
            .map(|(i, p)| (i as VarId, p.clone()))
            .collect(),
        phantom: std::marker::PhantomData,
    };
    eval.eval(f)
}

/// Evaluates with an assignment coming from a tuple (entry i interprets xi).
pub fn eval_group_tuple(f: &Formula, t: &PermTuple) -> Result<bool, LogicError> {
    eval_group(f, t.ground_size(), t.entries())
}

// ---------------------------------------------------------------------------
// grammar: infix `*`, `=`, `1`; connectives `&`, `|`, `!`, `->`;
// quantifiers `E xi`, `A xi` with mandatory parentheses around bodies

pub fn parse_group_formula(text: &str) -> Result<Formula, LogicError> {
    let mut p = FormulaParser {
        text,
        bytes: text.as_bytes(),
        pos: 0,
    };
    let f = p.implication()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(LogicError::Parse(p.pos, "trailing input".into()));
    }
    Ok(f)
}

struct FormulaParser<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl FormulaParser<'_> {
    fn skip_ws(&mut self) {
        while self.bytes.get(self.pos) == Some(&b' ') {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn starts_with(&mut self, s: &str) -> bool {
        self.skip_ws();
        self.text[self.pos..].starts_with(s)
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), LogicError> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(LogicError::Parse(self.pos, format!("expected '{s}'")))
        }
    }

    fn implication(&mut self) -> Result<Formula, LogicError> {
        let lhs = self.disjunction()?;
        if self.eat("->") {
            let rhs = self.implication()?;
            Ok(implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn disjunction(&mut self) -> Result<Formula, LogicError> {
        let mut acc = self.conjunction()?;
        while self.peek() == Some(b'|') {
            self.pos += 1;
            acc = or(acc, self.conjunction()?);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Formula, LogicError> {
        let mut acc = self.unary()?;
        while self.peek() == Some(b'&') {
            self.pos += 1;
            acc = and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, LogicError> {
        match self.peek() {
            Some(b'!') => {
                self.pos += 1;
                Ok(not(self.unary()?))
            }
            Some(b'E') | Some(b'A') => self.quantifier(),
            Some(b'(') => {
                self.pos += 1;
                let f = self.implication()?;
                self.expect(")")?;
                Ok(f)
            }
            _ => self.atom(),
        }
    }

    fn quantifier(&mut self) -> Result<Formula, LogicError> {
        let universal = match self.peek() {
            Some(b'E') => false,
            Some(b'A') => true,
            _ => return Err(LogicError::Parse(self.pos, "expected quantifier".into())),
        };
        self.pos += 1;
        let v = self.variable()?;
        self.expect("(")?;
        let body = self.implication()?;
        self.expect(")")?;
        Ok(if universal {
            forall(v, body)
        } else {
            exists(v, body)
        })
    }

    fn variable(&mut self) -> Result<VarId, LogicError> {
        self.skip_ws();
        if self.bytes.get(self.pos) != Some(&b'x') {
            return Err(LogicError::Parse(self.pos, "expected a variable 'xN'".into()));
        }
        self.pos += 1;
        let start = self.pos;
        while self
            .bytes
            .get(self.pos)
            .is_some_and(u8::is_ascii_digit)
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(LogicError::Parse(self.pos, "expected a variable index".into()));
        }
        self.text[start..self.pos]
            .parse()
            .map_err(|_| LogicError::Parse(start, "variable index out of range".into()))
    }

    fn term(&mut self) -> Result<GroupTerm, LogicError> {
        match self.peek() {
            Some(b'1') => {
                self.pos += 1;
                Ok(GroupTerm::One)
            }
            Some(b'x') => {
                let a = self.variable()?;
                if self.peek() == Some(b'*') {
                    self.pos += 1;
                    let b = self.variable()?;
                    Ok(GroupTerm::Mul(a, b))
                } else {
                    Ok(GroupTerm::Var(a))
                }
            }
            _ => Err(LogicError::Parse(self.pos, "expected a term".into())),
        }
    }

    fn atom(&mut self) -> Result<Formula, LogicError> {
        let lhs = self.term()?;
        self.expect("=")?;
        let rhs = self.term()?;
        Ok(atom(lhs, rhs))
    }
}

// rendering, inverse to the parser up to whitespace

impl fmt::Display for GroupTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupTerm::One => write!(f, "1"),
            GroupTerm::Var(v) => write!(f, "x{v}"),
            GroupTerm::Mul(a, b) => write!(f, "x{a}*x{b}"),
        }
    }
}

impl fmt::Display for GroupFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupFormula::Equals(a, b) => write!(f, "{a} = {b}"),
            GroupFormula::Not(a) => write!(f, "!{}", paren(a)),
            GroupFormula::And(a, b) => write!(f, "{} & {}", paren(a), paren(b)),
            GroupFormula::Or(a, b) => write!(f, "{} | {}", paren(a), paren(b)),
            GroupFormula::Implies(a, b) => write!(f, "{} -> {}", paren(a), paren(b)),
            GroupFormula::Exists(v, a) => write!(f, "E x{v} ({a})"),
            GroupFormula::Forall(v, a) => write!(f, "A x{v} ({a})"),
        }
    }
}

fn paren(f: &Formula) -> String {
    match f.as_ref() {
        GroupFormula::Equals(..) | GroupFormula::Not(_) => f.to_string(),
        _ => format!("({f})"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        parse_group_formula(s).unwrap()
    }

    #[test]
    fn parse_atoms() {
        assert_eq!(p("x0 = x1").as_ref(), &GroupFormula::Equals(var(0), var(1)));
        assert_eq!(
            p("x0*x1 = x2").as_ref(),
            &GroupFormula::Equals(mul(0, 1), var(2))
        );
        assert_eq!(p("x3 = 1").as_ref(), &GroupFormula::Equals(var(3), one()));
    }

    #[test]
    fn parse_quantifier_needs_parens() {
        assert!(parse_group_formula("E x1 (x0*x1 = x2)").is_ok());
        assert!(parse_group_formula("E x1 x0 = x1").is_err());
    }

    #[test]
    fn parse_errors_carry_position() {
        match parse_group_formula("x0 = ") {
            Err(LogicError::Parse(pos, _)) => assert_eq!(pos, 5),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn precedence_and_round_trip() {
        let f = p("x0 = x1 & x1 = x2 -> x0 = x2 | !x0 = 1");
        let again = p(&f.to_string());
        assert_eq!(f, again);
    }

    #[test]
    fn render_parse_round_trip_corpus() {
        // a deterministic corpus of two hundred formulas built from seeds
        let atoms = ["x0 = x1", "x0*x1 = x2", "x1 = 1", "x2*x2 = x0"];
        let mut corpus: Vec<Formula> = atoms.iter().map(|a| p(a)).collect();
        let mut i = 0;
        while corpus.len() < 200 {
            let a = corpus[i % corpus.len()].clone();
            let b = corpus[(i * 7 + 3) % corpus.len()].clone();
            let f = match i % 5 {
                0 => and(a, b),
                1 => or(a, b),
                2 => implies(a, b),
                3 => not(a),
                _ => exists((i % 4) as VarId, a),
            };
            corpus.push(f);
            i += 1;
        }
        for f in &corpus {
            assert_eq!(&p(&f.to_string()), f, "round trip of {f}");
        }
    }

    #[test]
    fn eval_inverses_exist() {
        let f = p("E x1 (x0*x1 = 1)");
        for g in all_permutations(4) {
            assert!(eval_group(&f, 4, &[g]).unwrap());
        }
    }

    #[test]
    fn eval_identity_atom() {
        let f = p("x0 = 1");
        let t = Permutation::parse("(0 1)", 4).unwrap();
        assert!(!eval_group(&f, 4, &[t]).unwrap());
        assert!(eval_group(&f, 4, &[Permutation::identity(4)]).unwrap());
    }

    #[test]
    fn center_is_trivial_for_three_points() {
        // A x1 (x0*x1 = x1*x0) holds iff x0 = 1 once the ground has 3 points
        let f = p("A x1 (x0*x1 = x1*x0)");
        for ground in [3usize, 4] {
            for g in all_permutations(ground) {
                let expected = g.is_identity();
                assert_eq!(eval_group(&f, ground, &[g]).unwrap(), expected);
            }
        }
    }

    #[test]
    fn eval_unbound_and_mismatch_errors() {
        let f = p("x0 = x2");
        assert_eq!(
            eval_group(&f, 3, &[Permutation::identity(3)]),
            Err(LogicError::UnboundVariable(2))
        );
        let g = p("A x1 (x0 = x1)");
        assert!(matches!(
            eval_group(&g, 8, &[Permutation::identity(8)]),
            Err(LogicError::QuantifierSpace(8, _))
        ));
    }

    #[test]
    fn stats_and_free_vars() {
        let f = p("E x2 (x0*x2 = x1 & !x2 = 1)");
        let s = stats(&f);
        assert_eq!(s.atoms, 2);
        assert_eq!(s.existentials, 1);
        assert_eq!(
            free_vars(&f).into_iter().collect::<Vec<_>>(),
            vec![0, 1]
        );
        assert_eq!(quantifier_depth(&f), 1);
    }
}
