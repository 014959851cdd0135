//! Base-Omega Cantor normal form arithmetic.
//!
//! `W` denotes the formal base Omega (a symbolic uncountable regular
//! cardinal) and `w` denotes omega. An [`OrdOmega`] is
//! `W^w*a_w + W^n*a_n + .. + W*a_1 + a_0` with countable coefficients
//! ([`OrdSmall`], Cantor normal form base omega) and finitely many nonzero
//! levels. The calculus implemented here is the coefficient/cofinality
//! invariant machinery: `coeff`, `tail`, `cf`, `upper`, the `sim_k`
//! identification, its canonical representatives below `W^(k+2)`, order
//! types of upper segments, and the segment-respecting order embeddings.

use std::fmt;

use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OrdinalError {
    #[error("left subtraction requires {0} <= {1}")]
    SubtractUnderflow(String, String),
    #[error("ordinal syntax error at byte {0}: {1}")]
    Syntax(usize, String),
    #[error("predecessor of a non-successor ordinal")]
    NotASuccessor,
    #[error("set element {0} is not below {1}")]
    NotBelow(String, String),
    #[error("map construction requires sim_(k+1) inputs: {0} !~ {1}")]
    NotSimilar(String, String),
}

/// Cofinality classes representable with countable coefficients: zero,
/// successor, countable limit, and the symbolic base itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cofinality {
    Zero,
    One,
    OmegaSmall,
    BigOmega,
}

impl fmt::Display for Cofinality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cofinality::Zero => write!(f, "0"),
            Cofinality::One => write!(f, "1"),
            Cofinality::OmegaSmall => write!(f, "w"),
            Cofinality::BigOmega => write!(f, "W"),
        }
    }
}

/// A countable ordinal below epsilon_0 in Cantor normal form base omega:
/// terms `(exponent, coefficient)` with strictly decreasing exponents.
///
/// The derived ordering is the ordinal order: term lists sorted by
/// decreasing exponent compare lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct OrdSmall {
    terms: Vec<(OrdSmall, u64)>,
}

impl OrdSmall {
    pub fn zero() -> Self {
        OrdSmall::default()
    }

    pub fn from_nat(n: u64) -> Self {
        if n == 0 {
            Self::zero()
        } else {
            OrdSmall {
                terms: vec![(OrdSmall::zero(), n)],
            }
        }
    }

    pub fn omega() -> Self {
        Self::omega_pow(OrdSmall::from_nat(1), 1)
    }

    pub fn omega_pow(exponent: OrdSmall, coefficient: u64) -> Self {
        if coefficient == 0 {
            return Self::zero();
        }
        OrdSmall {
            terms: vec![(exponent, coefficient)],
        }
    }

    pub fn from_terms(mut terms: Vec<(OrdSmall, u64)>) -> Self {
        terms.retain(|(_, c)| *c > 0);
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        let mut merged: Vec<(OrdSmall, u64)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match merged.last_mut() {
                Some((le, lc)) if *le == e => *lc += c,
                _ => merged.push((e, c)),
            }
        }
        OrdSmall { terms: merged }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(OrdSmall, u64)] {
        &self.terms
    }

    pub fn as_nat(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(e, c)] if e.is_zero() => Some(*c),
            _ => None,
        }
    }

    /// Zero when empty, a successor when the last term is finite, a
    /// (countable) limit otherwise.
    pub fn cofinality(&self) -> Cofinality {
        match self.terms.last() {
            None => Cofinality::Zero,
            Some((e, _)) if e.is_zero() => Cofinality::One,
            Some(_) => Cofinality::OmegaSmall,
        }
    }

    pub fn is_successor(&self) -> bool {
        self.cofinality() == Cofinality::One
    }

    pub fn add(&self, other: &OrdSmall) -> OrdSmall {
        let Some((lead, _)) = other.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<(OrdSmall, u64)> = self
            .terms
            .iter()
            .filter(|(e, _)| e > lead)
            .cloned()
            .collect();
        let absorbed: u64 = self
            .terms
            .iter()
            .filter(|(e, _)| e == lead)
            .map(|(_, c)| *c)
            .sum();
        let mut rest = other.terms.clone();
        rest[0].1 += absorbed;
        terms.extend(rest);
        OrdSmall { terms }
    }

    pub fn succ(&self) -> OrdSmall {
        self.add(&OrdSmall::from_nat(1))
    }

    pub fn pred(&self) -> Result<OrdSmall, OrdinalError> {
        if !self.is_successor() {
            return Err(OrdinalError::NotASuccessor);
        }
        let mut terms = self.terms.clone();
        let last = terms.last_mut().expect("successor is nonzero");
        last.1 -= 1;
        if last.1 == 0 {
            terms.pop();
        }
        Ok(OrdSmall { terms })
    }

    /// The unique `x` with `self + x = target`; errors when `self > target`.
    pub fn subtract_left(&self, target: &OrdSmall) -> Result<OrdSmall, OrdinalError> {
        if self > target {
            return Err(OrdinalError::SubtractUnderflow(
                self.to_string(),
                target.to_string(),
            ));
        }
        // walk the aligned terms from the top until they differ
        let mut i = 0;
        loop {
            match (self.terms.get(i), target.terms.get(i)) {
                (Some(a), Some(b)) if a == b => i += 1,
                (None, None) => return Ok(OrdSmall::zero()),
                (a, b) => {
                    let (be, bc) = b.expect("self <= target").clone();
                    let ac = match a {
                        Some((ae, ac)) if *ae == be => *ac,
                        _ => 0,
                    };
                    let mut terms = vec![(be, bc - ac)];
                    terms.extend(target.terms[i + 1..].iter().cloned());
                    return Ok(OrdSmall::from_terms(terms));
                }
            }
        }
    }
}

impl fmt::Display for OrdSmall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            if e.is_zero() {
                write!(f, "{c}")?;
                continue;
            }
            write!(f, "w")?;
            if let Some(n) = e.as_nat() {
                if n != 1 {
                    write!(f, "^{n}")?;
                }
            } else {
                write!(f, "^({e})")?;
            }
            if *c != 1 {
                write!(f, "*{c}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for OrdSmall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// An ordinal in base-Omega Cantor normal form: an optional `W^w`
/// coefficient plus finitely many `W^level` terms with countable
/// coefficients, levels strictly decreasing.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct OrdOmega {
    omega_part: Option<Box<OrdOmega>>,
    finite: Vec<(u32, OrdSmall)>,
}

impl OrdOmega {
    pub fn zero() -> Self {
        OrdOmega::default()
    }

    pub fn from_small(c: OrdSmall) -> Self {
        Self::at_level(0, c)
    }

    pub fn from_nat(n: u64) -> Self {
        Self::from_small(OrdSmall::from_nat(n))
    }

    /// `W^level * coefficient`.
    pub fn at_level(level: u32, coefficient: OrdSmall) -> Self {
        if coefficient.is_zero() {
            return Self::zero();
        }
        OrdOmega {
            omega_part: None,
            finite: vec![(level, coefficient)],
        }
    }

    /// `W^w * coefficient`.
    pub fn omega_level(coefficient: OrdOmega) -> Self {
        if coefficient.is_zero() {
            return Self::zero();
        }
        OrdOmega {
            omega_part: Some(Box::new(coefficient)),
            finite: Vec::new(),
        }
    }

    pub fn from_parts(omega_part: Option<OrdOmega>, terms: Vec<(u32, OrdSmall)>) -> Self {
        let base = match omega_part {
            Some(w) if !w.is_zero() => Self::omega_level(w),
            _ => Self::zero(),
        };
        let mut terms = terms;
        terms.retain(|(_, c)| !c.is_zero());
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        terms
            .into_iter()
            .fold(base, |acc, (l, c)| acc.add(&Self::at_level(l, c)))
    }

    pub fn is_zero(&self) -> bool {
        self.omega_part.is_none() && self.finite.is_empty()
    }

    /// The coefficient of `W^w`, zero when absent.
    pub fn omega_coefficient(&self) -> OrdOmega {
        self.omega_part
            .as_deref()
            .cloned()
            .unwrap_or_else(OrdOmega::zero)
    }

    pub fn finite_terms(&self) -> &[(u32, OrdSmall)] {
        &self.finite
    }

    /// The level-n Cantor coefficient.
    pub fn coeff(&self, n: u32) -> OrdSmall {
        self.finite
            .iter()
            .find(|(l, _)| *l == n)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(OrdSmall::zero)
    }

    /// The part of the expansion strictly above level n (levels >= n+1 plus
    /// the `W^w` term): `self = tail(n) + sum_{l<=n} W^l*coeff(l)`.
    pub fn tail(&self, n: u32) -> OrdOmega {
        OrdOmega {
            omega_part: self.omega_part.clone(),
            finite: self
                .finite
                .iter()
                .filter(|(l, _)| *l > n)
                .cloned()
                .collect(),
        }
    }

    /// The part of the expansion at levels <= n.
    pub fn low_part(&self, n: u32) -> OrdOmega {
        OrdOmega {
            omega_part: None,
            finite: self
                .finite
                .iter()
                .filter(|(l, _)| *l <= n)
                .cloned()
                .collect(),
        }
    }

    pub fn add(&self, other: &OrdOmega) -> OrdOmega {
        if let Some(ow) = &other.omega_part {
            let merged = match &self.omega_part {
                Some(sw) => sw.add(ow),
                None => (**ow).clone(),
            };
            return OrdOmega {
                omega_part: Some(Box::new(merged)),
                finite: other.finite.clone(),
            };
        }
        let Some((lead, _)) = other.finite.first() else {
            return self.clone();
        };
        let mut finite: Vec<(u32, OrdSmall)> = self
            .finite
            .iter()
            .filter(|(l, _)| l > lead)
            .cloned()
            .collect();
        let mut rest = other.finite.clone();
        if let Some((_, c)) = self.finite.iter().find(|(l, _)| l == lead) {
            rest[0].1 = c.add(&rest[0].1);
        }
        finite.extend(rest);
        OrdOmega {
            omega_part: self.omega_part.clone(),
            finite,
        }
    }

    pub fn succ(&self) -> OrdOmega {
        self.add(&OrdOmega::from_nat(1))
    }

    pub fn is_successor(&self) -> bool {
        matches!(self.finite.last(), Some((0, c)) if c.is_successor())
    }

    pub fn pred(&self) -> Result<OrdOmega, OrdinalError> {
        if !self.is_successor() {
            return Err(OrdinalError::NotASuccessor);
        }
        let mut finite = self.finite.clone();
        let (_, c) = finite.last_mut().expect("successor has a level-0 term");
        *c = c.pred()?;
        if c.is_zero() {
            finite.pop();
        }
        Ok(OrdOmega {
            omega_part: self.omega_part.clone(),
            finite,
        })
    }

    /// The unique `x` with `self + x = target`; errors when `self > target`.
    pub fn subtract_left(&self, target: &OrdOmega) -> Result<OrdOmega, OrdinalError> {
        if self > target {
            return Err(OrdinalError::SubtractUnderflow(
                self.to_string(),
                target.to_string(),
            ));
        }
        match (&self.omega_part, &target.omega_part) {
            (a, b) if a == b => {}
            (None, None) => unreachable!("covered by the equality arm"),
            (None, Some(bw)) => {
                return Ok(OrdOmega {
                    omega_part: Some(bw.clone()),
                    finite: target.finite.clone(),
                })
            }
            (Some(aw), Some(bw)) => {
                let delta = aw.subtract_left(bw)?;
                debug_assert!(!delta.is_zero());
                return Ok(OrdOmega {
                    omega_part: Some(Box::new(delta)),
                    finite: target.finite.clone(),
                });
            }
            (Some(_), None) => unreachable!("self <= target"),
        }
        // equal omega parts: walk the finite terms from the top
        let mut i = 0;
        loop {
            match (self.finite.get(i), target.finite.get(i)) {
                (Some(a), Some(b)) if a == b => i += 1,
                (None, None) => return Ok(OrdOmega::zero()),
                (a, b) => {
                    let (bl, bc) = b.expect("self <= target").clone();
                    let ac = match a {
                        Some((al, ac)) if *al == bl => ac.clone(),
                        _ => OrdSmall::zero(),
                    };
                    let mut finite = vec![(bl, ac.subtract_left(&bc)?)];
                    finite.extend(target.finite[i + 1..].iter().cloned());
                    return Ok(OrdOmega {
                        omega_part: None,
                        finite,
                    }
                    .normalized());
                }
            }
        }
    }

    fn normalized(mut self) -> Self {
        self.finite.retain(|(_, c)| !c.is_zero());
        self
    }

    /// Extended cofinality: `cf(0) = 0`, `cf(a+1) = 1`, and for limits the
    /// cofinality of the last Cantor term.
    pub fn cf(&self) -> Cofinality {
        if let Some((level, c)) = self.finite.last() {
            return if *level == 0 {
                c.cofinality()
            } else if c.is_successor() {
                Cofinality::BigOmega
            } else {
                // limit coefficient; its cofinality is countable
                Cofinality::OmegaSmall
            };
        }
        match &self.omega_part {
            None => Cofinality::Zero,
            Some(w) => {
                if w.is_successor() {
                    Cofinality::OmegaSmall
                } else {
                    match w.cf() {
                        Cofinality::BigOmega => Cofinality::BigOmega,
                        _ => Cofinality::OmegaSmall,
                    }
                }
            }
        }
    }

    /// The encoded cofinality invariant of `tail(n)`: `1 + cf(tail)` when
    /// that cofinality is countable, `0` when it is the full base.
    pub fn upper(&self, n: u32) -> OrdSmall {
        match self.tail(n).cf() {
            Cofinality::Zero => OrdSmall::from_nat(1),
            Cofinality::One => OrdSmall::from_nat(2),
            Cofinality::OmegaSmall => OrdSmall::omega(),
            Cofinality::BigOmega => OrdSmall::zero(),
        }
    }

    /// Agreement of coefficients and cofinality invariants at all levels <= k.
    pub fn sim_k(&self, other: &OrdOmega, k: u32) -> bool {
        (0..=k).all(|l| self.coeff(l) == other.coeff(l) && self.upper(l) == other.upper(l))
    }

    /// Full agreement: `sim_k` for every k. Everything above the largest
    /// occupied finite level is constant, so one extra level decides it.
    pub fn sim_all(&self, other: &OrdOmega) -> bool {
        let top = self
            .finite
            .first()
            .into_iter()
            .chain(other.finite.first())
            .map(|(l, _)| *l)
            .max()
            .unwrap_or(0);
        self.sim_k(other, top + 1)
    }

    /// The canonical representative below `W^(k+2)` of the `sim_k` class:
    /// coefficients up to level k are kept, and the level-(k+1) coefficient
    /// summarizes everything above.
    pub fn canonical_k(&self, k: u32) -> OrdOmega {
        let mut finite: Vec<(u32, OrdSmall)> =
            self.finite.iter().filter(|(l, _)| *l <= k).cloned().collect();
        let summary = if let Some((_, c)) = self.finite.iter().filter(|(l, _)| *l > k).last() {
            // least finite level above k
            c.clone()
        } else {
            match &self.omega_part {
                None => OrdSmall::zero(),
                // a successor coefficient keeps the summarized tail
                // W-cofinal, matching the W-cofinal omega part
                Some(w) if w.cf() == Cofinality::BigOmega => OrdSmall::from_nat(1),
                Some(_) => OrdSmall::omega(),
            }
        };
        if !summary.is_zero() {
            finite.insert(0, (k + 1, summary));
        }
        OrdOmega {
            omega_part: None,
            finite,
        }
    }
}

impl fmt::Display for OrdOmega {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        let mut sep = |f: &mut fmt::Formatter<'_>| -> fmt::Result {
            if first {
                first = false;
                Ok(())
            } else {
                write!(f, " + ")
            }
        };
        if let Some(w) = &self.omega_part {
            sep(f)?;
            write!(f, "W^w")?;
            if **w != OrdOmega::from_nat(1) {
                write!(f, "*({w})")?;
            }
        }
        for (level, c) in &self.finite {
            sep(f)?;
            match level {
                0 => write!(f, "{c}")?,
                 _ => {
                    if *level == 1 {
                        write!(f, "W")?;
                    } else {
                        write!(f, "W^{level}")?;
                    }
                    if let Some(n) = c.as_nat() {
                        if n != 1 {
                            write!(f, "*{n}")?;
                        }
                    } else {
                        write!(f, "*({c})")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for OrdOmega {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Order type of `{b <= a : every element of A below a is below b}` — the
/// final segment of `a+1` above `A`'s members below `a`.
pub fn upper_segment_type(a: &OrdOmega, set: &[OrdOmega]) -> OrdOmega {
    let below = set.iter().filter(|g| *g < a).max();
    match below {
        None => a.succ(),
        Some(m) => m
            .succ()
            .subtract_left(&a.succ())
            .expect("m < a implies m+1 <= a+1"),
    }
}

/// An order-preserving map from `A` (a finite subset of `alpha`) into `beta`
/// whose upper-segment types match those over `alpha` up to `sim_k`;
/// requires `alpha sim_(k+1) beta`. The implicit image of `alpha` itself is
/// `beta`.
pub fn build_segment_preserving_map(
    alpha: &OrdOmega,
    beta: &OrdOmega,
    set: &[OrdOmega],
    k: u32,
) -> Result<Vec<(OrdOmega, OrdOmega)>, OrdinalError> {
    if !alpha.sim_k(beta, k + 1) {
        return Err(OrdinalError::NotSimilar(
            alpha.to_string(),
            beta.to_string(),
        ));
    }
    let mut points: Vec<OrdOmega> = set.to_vec();
    points.sort();
    points.dedup();
    for a in &points {
        if a >= alpha {
            return Err(OrdinalError::NotBelow(a.to_string(), alpha.to_string()));
        }
    }
    // split both sides at the W^(k+2)-divisible part; the low parts agree
    let alpha_high = alpha.tail(k + 1);
    let beta_high = beta.tail(k + 1);
    debug_assert_eq!(alpha.low_part(k + 1), beta.low_part(k + 1));

    let mut map = Vec::with_capacity(points.len());
    let mut chain_sum = OrdOmega::zero();
    let mut prev_below: Option<OrdOmega> = None;
    for a in &points {
        if !alpha_high.is_zero() && *a >= alpha_high {
            // common low region: translate across the divisible parts
            let offset = alpha_high.subtract_left(a).expect("a >= high part");
            map.push((a.clone(), beta_high.add(&offset)));
        } else {
            // below the divisible part: chain canonical interval types
            let interval = match &prev_below {
                None => a.succ(),
                Some(p) => p.succ().subtract_left(&a.succ())?,
            };
            chain_sum = chain_sum.add(&interval.canonical_k(k));
            prev_below = Some(a.clone());
            map.push((a.clone(), chain_sum.pred()?));
        }
    }
    Ok(map)
}

/// Post-hoc check of a segment-preserving map: order preservation, images
/// below `beta`, and `sim_k` agreement of every upper-segment type (with the
/// implicit top pair `alpha -> beta`). Returns the first violation.
pub fn verify_segment_map(
    alpha: &OrdOmega,
    beta: &OrdOmega,
    map: &[(OrdOmega, OrdOmega)],
    k: u32,
) -> Result<(), String> {
    let domain: Vec<OrdOmega> = map.iter().map(|(a, _)| a.clone()).collect();
    let image: Vec<OrdOmega> = map.iter().map(|(_, b)| b.clone()).collect();
    for w in map.windows(2) {
        if w[0].0 >= w[1].0 || w[0].1 >= w[1].1 {
            return Err(format!(
                "not order preserving at ({}, {}) vs ({}, {})",
                w[0].0, w[0].1, w[1].0, w[1].1
            ));
        }
    }
    for (a, b) in map {
        if b >= beta {
            return Err(format!("image of {a} is {b}, not below {beta}"));
        }
    }
    for (a, b) in map.iter().chain(std::iter::once(&(alpha.clone(), beta.clone()))) {
        let g1 = upper_segment_type(a, &domain);
        let g2 = upper_segment_type(b, &image);
        if !g1.sim_k(&g2, k) {
            return Err(format!(
                "segment type of {a} is {g1}, of {b} is {g2}; not sim_{k}"
            ));
        }
    }
    Ok(())
}

/// Statistics from a randomized run of the finite-sum congruence law
/// (`a_i sim_k b_i` for all i implies the sums are `sim_k`), including the
/// two-term absorption law as a dedicated family.
#[derive(Debug, Clone)]
pub struct SumCongruenceReport {
    pub trials: u64,
    pub absorption_trials: u64,
    pub max_k: u32,
    pub violation: Option<String>,
}

impl SumCongruenceReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Bounds for random ordinal generation.
#[derive(Debug, Clone, Copy)]
pub struct RandomOrdinalConfig {
    pub max_level: u32,
    pub allow_omega_part: bool,
}

impl Default for RandomOrdinalConfig {
    fn default() -> Self {
        RandomOrdinalConfig {
            max_level: 6,
            allow_omega_part: true,
        }
    }
}

pub fn random_small(rng: &mut impl Rng, max_exp: u64) -> OrdSmall {
    let n_terms = rng.gen_range(0..=3);
    let mut terms = Vec::new();
    for _ in 0..n_terms {
        let exp = if max_exp > 0 && rng.gen_bool(0.3) {
            OrdSmall::omega_pow(OrdSmall::from_nat(rng.gen_range(1..=max_exp.min(2))), 1)
        } else {
            OrdSmall::from_nat(rng.gen_range(0..=max_exp))
        };
        terms.push((exp, rng.gen_range(1..=5)));
    }
    OrdSmall::from_terms(terms)
}

pub fn random_ordinal(rng: &mut impl Rng, config: &RandomOrdinalConfig) -> OrdOmega {
    let omega_part = if config.allow_omega_part && rng.gen_bool(0.3) {
        let inner = OrdOmega::from_parts(
            None,
            vec![
                (rng.gen_range(0..=2), random_small(rng, 2)),
                (0, OrdSmall::from_nat(rng.gen_range(0..=3))),
            ],
        );
        if inner.is_zero() {
            Some(OrdOmega::from_nat(1))
        } else {
            Some(inner)
        }
    } else {
        None
    };
    let n_terms = rng.gen_range(0..=3);
    let mut terms = Vec::new();
    for _ in 0..n_terms {
        terms.push((rng.gen_range(0..=config.max_level), random_small(rng, 3)));
    }
    OrdOmega::from_parts(omega_part, terms)
}

/// Draws a `sim_k`-equivalent partner for `a`: itself, its canonical
/// representative, or the canonical representative with extra high terms
/// (only valid once the class reaches `W^(k+1)`).
fn random_sim_partner(rng: &mut impl Rng, a: &OrdOmega, k: u32) -> OrdOmega {
    let canon = a.canonical_k(k);
    let reaches = !canon.coeff(k + 1).is_zero();
    match rng.gen_range(0..3) {
        0 => a.clone(),
        1 => canon,
        _ if reaches => {
            let bump = OrdOmega::at_level(k + 2 + rng.gen_range(0..2), random_small(rng, 2).succ());
            bump.add(&canon)
        }
        _ => canon,
    }
}

pub fn sum_congruence_report(seed: u64, trials: u64, max_k: u32) -> SumCongruenceReport {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let config = RandomOrdinalConfig::default();
    let mut absorption_trials = 0;
    for trial in 0..trials {
        let k = rng.gen_range(0..=max_k);
        let len = rng.gen_range(0..=4);
        let pairs: Vec<(OrdOmega, OrdOmega)> = (0..len)
            .map(|_| {
                let a = random_ordinal(&mut rng, &config);
                let b = random_sim_partner(&mut rng, &a, k);
                (a, b)
            })
            .collect();
        let sum_a = pairs
            .iter()
            .fold(OrdOmega::zero(), |acc, (a, _)| acc.add(a));
        let sum_b = pairs
            .iter()
            .fold(OrdOmega::zero(), |acc, (_, b)| acc.add(b));
        if !sum_a.sim_k(&sum_b, k) {
            return SumCongruenceReport {
                trials: trial + 1,
                absorption_trials,
                max_k,
                violation: Some(format!(
                    "k={k} pairs={pairs:?} sum_a={sum_a} sum_b={sum_b}"
                )),
            };
        }
        // absorption: alpha >= W^(k+1) makes any left summand invisible
        let alpha = OrdOmega::at_level(k + 1, random_small(&mut rng, 2).succ())
            .add(&random_ordinal(&mut rng, &config).low_part(k));
        let prefix = random_ordinal(&mut rng, &config);
        absorption_trials += 1;
        if !alpha.sim_k(&prefix.add(&alpha), k) {
            return SumCongruenceReport {
                trials: trial + 1,
                absorption_trials,
                max_k,
                violation: Some(format!("absorption k={k} alpha={alpha} prefix={prefix}")),
            };
        }
    }
    SumCongruenceReport {
        trials,
        absorption_trials,
        max_k,
        violation: None,
    }
}

// ---------------------------------------------------------------------------
// text form

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser { text, pos: 0 }
    }

    fn err(&self, msg: impl Into<String>) -> OrdinalError {
        OrdinalError::Syntax(self.pos, msg.into())
    }

    fn skip_ws(&mut self) {
        while self.text[self.pos..].starts_with(' ') {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), OrdinalError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{c}'")))
        }
    }

    fn nat(&mut self) -> Result<u64, OrdinalError> {
        self.skip_ws();
        let start = self.pos;
        while self
            .text
            .as_bytes()
            .get(self.pos)
            .is_some_and(u8::is_ascii_digit)
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        self.text[start..self.pos]
            .parse()
            .map_err(|_| self.err("number out of range"))
    }

    fn small(&mut self) -> Result<OrdSmall, OrdinalError> {
        let mut acc = self.small_term()?;
        while self.eat('+') {
            acc = acc.add(&self.small_term()?);
        }
        Ok(acc)
    }

    fn small_term(&mut self) -> Result<OrdSmall, OrdinalError> {
        match self.peek() {
            Some('w') => {
                self.pos += 1;
                let exp = if self.eat('^') {
                    self.small_factor()?
                } else {
                    OrdSmall::from_nat(1)
                };
                let coeff = if self.eat('*') { self.nat()? } else { 1 };
                Ok(OrdSmall::omega_pow(exp, coeff))
            }
            Some(c) if c.is_ascii_digit() => Ok(OrdSmall::from_nat(self.nat()?)),
            _ => Err(self.err("expected 'w' or a number")),
        }
    }

    fn small_factor(&mut self) -> Result<OrdSmall, OrdinalError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.small()?;
                self.expect(')')?;
                Ok(inner)
            }
            Some('w') => {
                self.pos += 1;
                Ok(OrdSmall::omega())
            }
            Some(c) if c.is_ascii_digit() => Ok(OrdSmall::from_nat(self.nat()?)),
            _ => Err(self.err("expected '(', 'w', or a number")),
        }
    }

    fn ordinal(&mut self) -> Result<OrdOmega, OrdinalError> {
        let mut acc = self.ordinal_term()?;
        while self.eat('+') {
            acc = acc.add(&self.ordinal_term()?);
        }
        Ok(acc)
    }

    fn ordinal_term(&mut self) -> Result<OrdOmega, OrdinalError> {
        match self.peek() {
            Some('W') => {
                self.pos += 1;
                if self.eat('^') {
                    if self.eat('w') {
                        // W^w with an OrdOmega coefficient
                        let coeff = if self.eat('*') {
                            self.ordinal_coefficient()?
                        } else {
                            OrdOmega::from_nat(1)
                        };
                        Ok(OrdOmega::omega_level(coeff))
                    } else {
                        let level = self.nat()?;
                        let level: u32 = level
                            .try_into()
                            .map_err(|_| self.err("level out of range"))?;
                        let coeff = if self.eat('*') {
                            self.small_coefficient()?
                        } else {
                            OrdSmall::from_nat(1)
                        };
                        Ok(OrdOmega::at_level(level, coeff))
                    }
                } else {
                    let coeff = if self.eat('*') {
                        self.small_coefficient()?
                    } else {
                        OrdSmall::from_nat(1)
                    };
                    Ok(OrdOmega::at_level(1, coeff))
                }
            }
            // a single small term; the ordinal-level loop owns the '+'
            _ => Ok(OrdOmega::from_small(self.small_term()?)),
        }
    }

    fn small_coefficient(&mut self) -> Result<OrdSmall, OrdinalError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.small()?;
                self.expect(')')?;
                Ok(inner)
            }
            Some('w') => {
                self.pos += 1;
                Ok(OrdSmall::omega())
            }
            Some(c) if c.is_ascii_digit() => Ok(OrdSmall::from_nat(self.nat()?)),
            _ => Err(self.err("expected a coefficient")),
        }
    }

    fn ordinal_coefficient(&mut self) -> Result<OrdOmega, OrdinalError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.ordinal()?;
                self.expect(')')?;
                Ok(inner)
            }
            Some('w') => {
                self.pos += 1;
                Ok(OrdOmega::from_small(OrdSmall::omega()))
            }
            Some(c) if c.is_ascii_digit() => Ok(OrdOmega::from_nat(self.nat()?)),
            _ => Err(self.err("expected a coefficient")),
        }
    }

    fn finish(&mut self) -> Result<(), OrdinalError> {
        self.skip_ws();
        if self.pos != self.text.len() {
            Err(self.err("trailing input"))
        } else {
            Ok(())
        }
    }
}

pub fn parse_ordinal(text: &str) -> Result<OrdOmega, OrdinalError> {
    let mut p = Parser::new(text);
    let out = p.ordinal()?;
    p.finish()?;
    Ok(out)
}

pub fn parse_small(text: &str) -> Result<OrdSmall, OrdinalError> {
    let mut p = Parser::new(text);
    let out = p.small()?;
    p.finish()?;
    Ok(out)
}
