//! The invariant classifier: from a symbolic triple of cardinal parameters
//! and a continuum assumption, compute the case tag and the ordinal
//! invariants (Cantor coefficients and cofinality codes of the index
//! difference and of the terminal summand of the small index), and decide
//! the invariant-agreement sufficient condition for elementary equivalence.

use std::fmt;

use thiserror::Error;

use crate::ordinal::{parse_ordinal, Cofinality, OrdOmega, OrdSmall, OrdinalError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClassifierError {
    #[error("parameters must satisfy aleph0 <= kappa < lambda <= mu+: {0}")]
    IllOrdered(String),
    #[error("the successor-of-mu form is legal only for lambda")]
    SuccessorOutsideLambda,
    #[error("continuum exponent must be at least 1")]
    ContinuumTooSmall,
    #[error("cardinal index uses the uncountable base; indices are written with w only")]
    UncountableIndex,
    #[error("specs carry different continuum assumptions: {0} vs {1}")]
    ContinuumMismatch(String, String),
    #[error("cardinal syntax error: expected aleph(<index>) or mu+")]
    Syntax,
    #[error(transparent)]
    Ordinal(#[from] OrdinalError),
}

/// A symbolic infinite cardinal: an aleph with an ordinal index, or the
/// successor of the third parameter (legal only in the middle position).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CardinalExpr {
    Aleph(OrdOmega),
    SuccessorOfMu,
}

impl CardinalExpr {
    /// Parses `aleph(<ordinal with w only>)` or `mu+`.
    pub fn parse(text: &str) -> Result<Self, ClassifierError> {
        let text = text.trim();
        if text == "mu+" {
            return Ok(CardinalExpr::SuccessorOfMu);
        }
        let inner = text
            .strip_prefix("aleph(")
            .and_then(|rest| rest.strip_suffix(')'))
            .ok_or(ClassifierError::Syntax)?;
        let index = parse_ordinal(inner)?;
        if !index.omega_coefficient().is_zero() || index.tail(0) != OrdOmega::zero() {
            return Err(ClassifierError::UncountableIndex);
        }
        Ok(CardinalExpr::Aleph(index))
    }
}

impl fmt::Display for CardinalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CardinalExpr::Aleph(ix) => write!(f, "aleph({})", ix.coeff(0)),
            CardinalExpr::SuccessorOfMu => write!(f, "mu+"),
        }
    }
}

/// The assumption `2^aleph0 = aleph_theta`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ContinuumSpec {
    theta: OrdOmega,
}

impl ContinuumSpec {
    pub fn new(theta: OrdOmega) -> Result<Self, ClassifierError> {
        if theta < OrdOmega::from_nat(1) {
            return Err(ClassifierError::ContinuumTooSmall);
        }
        Ok(ContinuumSpec { theta })
    }

    pub fn theta(&self) -> &OrdOmega {
        &self.theta
    }
}

/// The parameters of one quotient: the small threshold, the support bound,
/// and the ground cardinal, plus the continuum assumption all comparisons
/// resolve against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientSpec {
    kappa: CardinalExpr,
    lambda: CardinalExpr,
    mu: CardinalExpr,
    continuum: ContinuumSpec,
}

/// Which side of the support-bound dichotomy the spec falls on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MaxCase {
    /// lambda <= mu
    Below,
    /// lambda = mu+
    Successor,
}

impl fmt::Display for MaxCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MaxCase::Below => write!(f, "lambda<=mu"),
            MaxCase::Successor => write!(f, "lambda=mu+"),
        }
    }
}

/// The four-way split on the small threshold against the continuum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KappaCase {
    /// cf(kappa) > 2^aleph0
    A,
    /// cf(kappa) <= 2^aleph0 < kappa
    B,
    /// aleph0 < kappa <= 2^aleph0
    C,
    /// kappa = aleph0
    D,
}

impl fmt::Display for KappaCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KappaCase::A => write!(f, "A:cf(kappa)>continuum"),
            KappaCase::B => write!(f, "B:cf(kappa)<=continuum<kappa"),
            KappaCase::C => write!(f, "C:aleph0<kappa<=continuum"),
            KappaCase::D => write!(f, "D:kappa=aleph0"),
        }
    }
}

impl QuotientSpec {
    pub fn new(
        kappa: CardinalExpr,
        lambda: CardinalExpr,
        mu: CardinalExpr,
        continuum: ContinuumSpec,
    ) -> Result<Self, ClassifierError> {
        if matches!(kappa, CardinalExpr::SuccessorOfMu)
            || matches!(mu, CardinalExpr::SuccessorOfMu)
        {
            return Err(ClassifierError::SuccessorOutsideLambda);
        }
        let spec = QuotientSpec {
            kappa,
            lambda,
            mu,
            continuum,
        };
        let beta = spec.kappa_index();
        let gamma = spec.lambda_index();
        let mu_ix = spec.mu_index();
        if beta >= gamma {
            return Err(ClassifierError::IllOrdered(format!(
                "kappa index {beta} not below lambda index {gamma}"
            )));
        }
        if gamma > mu_ix.succ() {
            return Err(ClassifierError::IllOrdered(format!(
                "lambda index {gamma} above mu index {mu_ix} + 1"
            )));
        }
        Ok(spec)
    }

    fn index_of(c: &CardinalExpr) -> OrdOmega {
        match c {
            CardinalExpr::Aleph(ix) => ix.clone(),
            CardinalExpr::SuccessorOfMu => unreachable!("resolved before use"),
        }
    }

    pub fn kappa_index(&self) -> OrdOmega {
        Self::index_of(&self.kappa)
    }

    pub fn mu_index(&self) -> OrdOmega {
        Self::index_of(&self.mu)
    }

    pub fn kappa(&self) -> &CardinalExpr {
        &self.kappa
    }

    pub fn lambda(&self) -> &CardinalExpr {
        &self.lambda
    }

    pub fn mu(&self) -> &CardinalExpr {
        &self.mu
    }

    pub fn continuum(&self) -> &ContinuumSpec {
        &self.continuum
    }

    /// The index of lambda, with the successor form resolved against mu.
    pub fn lambda_index(&self) -> OrdOmega {
        match &self.lambda {
            CardinalExpr::Aleph(ix) => ix.clone(),
            CardinalExpr::SuccessorOfMu => self.mu_index().succ(),
        }
    }

    pub fn max_case(&self) -> MaxCase {
        if self.lambda_index() == self.mu_index().succ() {
            MaxCase::Successor
        } else {
            MaxCase::Below
        }
    }

    pub fn kappa_case(&self) -> KappaCase {
        let beta = self.kappa_index();
        if beta.is_zero() {
            return KappaCase::D;
        }
        if beta <= self.continuum.theta {
            return KappaCase::C;
        }
        match cf_index(&beta) {
            CfIndex::SelfRegular => KappaCase::A,
            CfIndex::Omega => KappaCase::B,
        }
    }
}

enum CfIndex {
    /// successor index: the aleph is regular
    SelfRegular,
    /// zero or limit index: countable cofinality for countable indices
    Omega,
}

fn cf_index(ix: &OrdOmega) -> CfIndex {
    match ix.cf() {
        Cofinality::One => CfIndex::SelfRegular,
        _ => CfIndex::Omega,
    }
}

/// cf of a symbolic aleph: `aleph(0)` stands for omega.
pub fn cf_cardinal(c: &CardinalExpr) -> Result<CardinalExpr, ClassifierError> {
    let CardinalExpr::Aleph(ix) = c else {
        return Err(ClassifierError::SuccessorOutsideLambda);
    };
    Ok(match cf_index(ix) {
        CfIndex::SelfRegular => c.clone(),
        CfIndex::Omega => CardinalExpr::Aleph(OrdOmega::zero()),
    })
}

/// The ordinal distance from kappa to lambda: the unique alpha with
/// `beta + alpha = gamma` on the indices.
pub fn alpha(spec: &QuotientSpec) -> OrdOmega {
    spec.kappa_index()
        .subtract_left(&spec.lambda_index())
        .expect("validated kappa < lambda")
}

/// The terminal additively indecomposable summand of the kappa index; absent
/// exactly when kappa is the least infinite cardinal.
pub fn alpha_star(spec: &QuotientSpec) -> Option<OrdOmega> {
    let beta = spec.kappa_index().coeff(0);
    let (exp, _) = beta.terms().last()?;
    Some(OrdOmega::from_small(OrdSmall::omega_pow(exp.clone(), 1)))
}

/// The computed invariants of one spec: the case tags, the coefficient and
/// cofinality-code rows of alpha (and alpha-star where the case carries it),
/// and the flags determined by the case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantReport {
    pub max_case: MaxCase,
    pub kappa_case: KappaCase,
    pub level_bound: u32,
    pub alpha: OrdOmega,
    pub alpha_coeffs: Vec<OrdSmall>,
    pub alpha_uppers: Vec<OrdSmall>,
    /// Present in cases B, C, D.
    pub alpha_star: Option<OrdOmega>,
    pub alpha_star_coeffs: Vec<OrdSmall>,
    pub alpha_star_uppers: Vec<OrdSmall>,
    /// Present in cases B, C, D.
    pub cf_kappa: Option<CardinalExpr>,
    /// kappa at or below the continuum (cases C, D).
    pub kap_flag: bool,
    /// kappa is the least infinite cardinal (case D).
    pub fin_flag: bool,
}

pub fn invariants(spec: &QuotientSpec, k: u32) -> InvariantReport {
    let a = alpha(spec);
    let kappa_case = spec.kappa_case();
    let with_star = !matches!(kappa_case, KappaCase::A);
    let star = if with_star { alpha_star(spec) } else { None };
    let rows = |x: &OrdOmega| -> (Vec<OrdSmall>, Vec<OrdSmall>) {
        (
            (0..=k).map(|l| x.coeff(l)).collect(),
            (0..=k).map(|l| x.upper(l)).collect(),
        )
    };
    let (alpha_coeffs, alpha_uppers) = rows(&a);
    let (alpha_star_coeffs, alpha_star_uppers) = match &star {
        Some(s) => rows(s),
        None => (Vec::new(), Vec::new()),
    };
    InvariantReport {
        max_case: spec.max_case(),
        kappa_case,
        level_bound: k,
        alpha: a,
        alpha_coeffs,
        alpha_uppers,
        alpha_star: star,
        alpha_star_coeffs,
        alpha_star_uppers,
        cf_kappa: if with_star {
            Some(cf_cardinal(&spec.kappa).expect("kappa is an aleph"))
        } else {
            None
        },
        kap_flag: matches!(kappa_case, KappaCase::C | KappaCase::D),
        fin_flag: matches!(kappa_case, KappaCase::D),
    }
}

/// The verdict of the invariant comparison. Agreement of every computed
/// invariant is the implemented sufficient condition for elementary
/// equivalence of the corresponding quotients; it is deliberately not named
/// equivalence itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    InvariantsAgree,
    Distinguished(String),
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::InvariantsAgree => write!(f, "invariants-agree"),
            Verdict::Distinguished(reason) => write!(f, "distinguished: {reason}"),
        }
    }
}

pub fn equivalent(
    s1: &QuotientSpec,
    s2: &QuotientSpec,
    k: u32,
) -> Result<Verdict, ClassifierError> {
    if s1.continuum != s2.continuum {
        return Err(ClassifierError::ContinuumMismatch(
            s1.continuum.theta.to_string(),
            s2.continuum.theta.to_string(),
        ));
    }
    let r1 = invariants(s1, k);
    let r2 = invariants(s2, k);
    if r1.max_case != r2.max_case {
        return Ok(Verdict::Distinguished(format!(
            "max case {} vs {}",
            r1.max_case, r2.max_case
        )));
    }
    if r1.kappa_case != r2.kappa_case {
        return Ok(Verdict::Distinguished(format!(
            "kappa case {} vs {}",
            r1.kappa_case, r2.kappa_case
        )));
    }
    for l in 0..=k {
        if r1.alpha_coeffs[l as usize] != r2.alpha_coeffs[l as usize] {
            return Ok(Verdict::Distinguished(format!(
                "alpha coefficient at level {l}: {} vs {}",
                r1.alpha_coeffs[l as usize], r2.alpha_coeffs[l as usize]
            )));
        }
        if r1.alpha_uppers[l as usize] != r2.alpha_uppers[l as usize] {
            return Ok(Verdict::Distinguished(format!(
                "alpha cofinality code at level {l}: {} vs {}",
                r1.alpha_uppers[l as usize], r2.alpha_uppers[l as usize]
            )));
        }
    }
    match (&r1.alpha_star, &r2.alpha_star) {
        (None, None) => {}
        (Some(a), Some(b)) => {
            if !a.sim_k(b, k) {
                return Ok(Verdict::Distinguished(format!(
                    "alpha-star {a} vs {b} differ below level {k}"
                )));
            }
        }
        _ => {
            return Ok(Verdict::Distinguished(
                "alpha-star present on one side only".into(),
            ))
        }
    }
    if r1.cf_kappa != r2.cf_kappa {
        return Ok(Verdict::Distinguished(format!(
            "cf(kappa) {:?} vs {:?}",
            r1.cf_kappa, r2.cf_kappa
        )));
    }
    if r1.kap_flag != r2.kap_flag || r1.fin_flag != r2.fin_flag {
        return Ok(Verdict::Distinguished("case flags differ".into()));
    }
    Ok(Verdict::InvariantsAgree)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(kappa: &str, lambda: &str, mu: &str, theta: u64) -> QuotientSpec {
        QuotientSpec::new(
            CardinalExpr::parse(kappa).unwrap(),
            CardinalExpr::parse(lambda).unwrap(),
            CardinalExpr::parse(mu).unwrap(),
            ContinuumSpec::new(OrdOmega::from_nat(theta)).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn parse_cardinal_forms() {
        assert_eq!(
            CardinalExpr::parse("aleph(0)").unwrap(),
            CardinalExpr::Aleph(OrdOmega::zero())
        );
        assert!(CardinalExpr::parse("aleph(w^2+w)").is_ok());
        assert_eq!(
            CardinalExpr::parse("mu+").unwrap(),
            CardinalExpr::SuccessorOfMu
        );
        assert!(matches!(
            CardinalExpr::parse("aleph(W)"),
            Err(ClassifierError::UncountableIndex)
        ));
        assert!(CardinalExpr::parse("beth(1)").is_err());
    }

    #[test]
    fn ordering_validated() {
        assert!(QuotientSpec::new(
            CardinalExpr::parse("aleph(3)").unwrap(),
            CardinalExpr::parse("aleph(2)").unwrap(),
            CardinalExpr::parse("aleph(9)").unwrap(),
            ContinuumSpec::new(OrdOmega::from_nat(1)).unwrap(),
        )
        .is_err());
        // lambda above mu+ rejected
        assert!(QuotientSpec::new(
            CardinalExpr::parse("aleph(1)").unwrap(),
            CardinalExpr::parse("aleph(5)").unwrap(),
            CardinalExpr::parse("aleph(3)").unwrap(),
            ContinuumSpec::new(OrdOmega::from_nat(1)).unwrap(),
        )
        .is_err());
    }

    #[test]
    fn cf_of_alephs() {
        let cf = |s: &str| cf_cardinal(&CardinalExpr::parse(s).unwrap()).unwrap();
        assert_eq!(cf("aleph(0)"), CardinalExpr::parse("aleph(0)").unwrap());
        assert_eq!(cf("aleph(5)"), CardinalExpr::parse("aleph(5)").unwrap());
        assert_eq!(cf("aleph(w)"), CardinalExpr::parse("aleph(0)").unwrap());
        assert_eq!(cf("aleph(w*2)"), CardinalExpr::parse("aleph(0)").unwrap());
        assert_eq!(cf("aleph(w+3)"), CardinalExpr::parse("aleph(w+3)").unwrap());
    }

    #[test]
    fn case_tags() {
        let s = spec("aleph(2)", "aleph(5)", "aleph(9)", 1);
        assert_eq!(s.max_case(), MaxCase::Below);
        assert_eq!(s.kappa_case(), KappaCase::A);
        assert_eq!(spec("aleph(w)", "aleph(w+1)", "aleph(w+5)", 1).kappa_case(), KappaCase::B);
        assert_eq!(spec("aleph(1)", "aleph(5)", "aleph(9)", 1).kappa_case(), KappaCase::C);
        assert_eq!(spec("aleph(0)", "aleph(5)", "aleph(9)", 4).kappa_case(), KappaCase::D);
        assert_eq!(
            spec("aleph(1)", "mu+", "aleph(9)", 1).max_case(),
            MaxCase::Successor
        );
        assert_eq!(
            spec("aleph(1)", "aleph(10)", "aleph(9)", 1).max_case(),
            MaxCase::Successor
        );
    }

    #[test]
    fn alpha_vectors() {
        assert_eq!(
            alpha(&spec("aleph(1)", "aleph(2)", "aleph(9)", 1)),
            OrdOmega::from_nat(1)
        );
        assert_eq!(
            alpha(&spec("aleph(w)", "aleph(w*2)", "aleph(w*2)", 1)),
            parse_ordinal("w").unwrap()
        );
        assert_eq!(
            alpha(&spec("aleph(2)", "aleph(w)", "aleph(w)", 1)),
            parse_ordinal("w").unwrap()
        );
    }

    #[test]
    fn alpha_star_is_last_indecomposable_summand() {
        let star = |k: &str| alpha_star(&spec(k, "aleph(w^3)", "aleph(w^3)", 1)).unwrap();
        assert_eq!(star("aleph(w^2+w)"), parse_ordinal("w").unwrap());
        assert_eq!(star("aleph(5)"), OrdOmega::from_nat(1));
        assert_eq!(star("aleph(w^2*3)"), parse_ordinal("w^2").unwrap());
        assert!(alpha_star(&spec("aleph(0)", "aleph(1)", "aleph(9)", 1)).is_none());
    }

    #[test]
    fn report_flags_by_case() {
        let r = invariants(&spec("aleph(1)", "aleph(2)", "aleph(9)", 1), 2);
        assert_eq!(r.kappa_case, KappaCase::C);
        assert!(r.kap_flag && !r.fin_flag);
        assert!(r.alpha_star.is_some() && r.cf_kappa.is_some());
        let r = invariants(&spec("aleph(0)", "aleph(2)", "aleph(9)", 1), 2);
        assert!(r.kap_flag && r.fin_flag);
        assert!(r.alpha_star.is_none());
        let r = invariants(&spec("aleph(3)", "aleph(4)", "aleph(9)", 1), 2);
        assert_eq!(r.kappa_case, KappaCase::A);
        assert!(!r.kap_flag && !r.fin_flag && r.alpha_star.is_none());
    }

    #[test]
    fn worked_equivalences() {
        let k = 3;
        // successor-gap family: both case A with alpha = 1
        let v = equivalent(
            &spec("aleph(5)", "aleph(6)", "aleph(9)", 1),
            &spec("aleph(7)", "aleph(8)", "aleph(12)", 1),
            k,
        )
        .unwrap();
        assert_eq!(v, Verdict::InvariantsAgree);
        // alpha 3 vs 4
        let v = equivalent(
            &spec("aleph(2)", "aleph(5)", "aleph(9)", 1),
            &spec("aleph(2)", "aleph(6)", "aleph(9)", 1),
            k,
        )
        .unwrap();
        assert!(matches!(v, Verdict::Distinguished(ref r) if r.contains("level 0")));
        // case B vs case A
        let v = equivalent(
            &spec("aleph(w)", "aleph(w+1)", "aleph(w+7)", 1),
            &spec("aleph(w+1)", "aleph(w+2)", "aleph(w+7)", 1),
            k,
        )
        .unwrap();
        assert!(matches!(v, Verdict::Distinguished(ref r) if r.contains("kappa case")));
    }

    #[test]
    fn mu_independence_below_the_top() {
        let r1 = invariants(&spec("aleph(2)", "aleph(5)", "aleph(9)", 1), 3);
        let r2 = invariants(&spec("aleph(2)", "aleph(5)", "aleph(40)", 1), 3);
        assert_eq!(r1, r2);
    }

    #[test]
    fn equivalence_is_transitive_on_a_sample() {
        let specs = [
            spec("aleph(5)", "aleph(6)", "aleph(9)", 1),
            spec("aleph(7)", "aleph(8)", "aleph(12)", 1),
            spec("aleph(9)", "aleph(10)", "aleph(15)", 1),
        ];
        for a in &specs {
            assert_eq!(equivalent(a, a, 2).unwrap(), Verdict::InvariantsAgree);
            for b in &specs {
                let ab = equivalent(a, b, 2).unwrap();
                let ba = equivalent(b, a, 2).unwrap();
                assert_eq!(
                    ab == Verdict::InvariantsAgree,
                    ba == Verdict::InvariantsAgree
                );
                for c in &specs {
                    let bc = equivalent(b, c, 2).unwrap();
                    let ac = equivalent(a, c, 2).unwrap();
                    if ab == Verdict::InvariantsAgree && bc == Verdict::InvariantsAgree {
                        assert_eq!(ac, Verdict::InvariantsAgree);
                    }
                }
            }
        }
    }

    #[test]
    fn monotone_refinement() {
        let a = spec("aleph(w)", "aleph(w+3)", "aleph(w*2)", 1);
        let b = spec("aleph(w*2)", "aleph(w*2+3)", "aleph(w*3)", 1);
        for k in 0..4u32 {
            if equivalent(&a, &b, k + 1).unwrap() == Verdict::InvariantsAgree {
                assert_eq!(equivalent(&a, &b, k).unwrap(), Verdict::InvariantsAgree);
            }
        }
    }

    #[test]
    fn mismatched_continuum_rejected() {
        let a = spec("aleph(2)", "aleph(3)", "aleph(9)", 1);
        let b = spec("aleph(2)", "aleph(3)", "aleph(9)", 2);
        assert!(matches!(
            equivalent(&a, &b, 1),
            Err(ClassifierError::ContinuumMismatch(..))
        ));
    }
}
