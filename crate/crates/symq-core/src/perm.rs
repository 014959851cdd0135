//! Finite permutations and tuples of permutations over a dense ground set
//! `{0, .., n-1}`, acting on the right: `(x)(fg) = ((x)f)g`.

use std::fmt;

use thiserror::Error;

/// Points are dense indices into the ground set.
pub type Point = u16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PermError {
    #[error("images of length {0} do not form a bijection")]
    NotABijection(usize),
    #[error("point {point} out of range for ground size {ground}")]
    PointOutOfRange { point: usize, ground: usize },
    #[error("ground sizes differ: {0} vs {1}")]
    GroundMismatch(usize, usize),
    #[error("arities differ: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("point {0} repeated within a cycle expression")]
    RepeatedPoint(usize),
    #[error("cycle syntax error at byte {0}: {1}")]
    CycleSyntax(usize, String),
    #[error("set is not a union of orbits (point {0} escapes)")]
    NotOrbitClosed(usize),
    #[error("tuple must have at least one entry")]
    EmptyTuple,
}

/// A permutation of `{0, .., ground_size()-1}`, stored in one-line notation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<Point>,
}

impl Permutation {
    pub fn identity(ground: usize) -> Self {
        Permutation {
            images: (0..ground as Point).collect(),
        }
    }

    pub fn from_images(images: Vec<Point>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &im in &images {
            if (im as usize) >= n {
                return Err(PermError::PointOutOfRange {
                    point: im as usize,
                    ground: n,
                });
            }
            if seen[im as usize] {
                return Err(PermError::NotABijection(n));
            }
            seen[im as usize] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation from disjoint cycles; points absent from every
    /// cycle are fixed.
    pub fn from_cycles(ground: usize, cycles: &[Vec<Point>]) -> Result<Self, PermError> {
        let mut images: Vec<Point> = (0..ground as Point).collect();
        let mut moved = vec![false; ground];
        for cycle in cycles {
            for (i, &p) in cycle.iter().enumerate() {
                if (p as usize) >= ground {
                    return Err(PermError::PointOutOfRange {
                        point: p as usize,
                        ground,
                    });
                }
                if moved[p as usize] {
                    return Err(PermError::RepeatedPoint(p as usize));
                }
                moved[p as usize] = true;
                images[p as usize] = cycle[(i + 1) % cycle.len()];
            }
        }
        // a cycle that repeats a point elsewhere still breaks bijectivity
        Self::from_images(images)
    }

    pub fn ground_size(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, p: Point) -> Point {
        self.images[p as usize]
    }

    pub fn images(&self) -> &[Point] {
        &self.images
    }

    /// `self` followed by `other`.
    pub fn compose(&self, other: &Permutation) -> Result<Self, PermError> {
        if self.ground_size() != other.ground_size() {
            return Err(PermError::GroundMismatch(
                self.ground_size(),
                other.ground_size(),
            ));
        }
        Ok(Permutation {
            images: self.images.iter().map(|&p| other.apply(p)).collect(),
        })
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.images.len()];
        for (p, &im) in self.images.iter().enumerate() {
            images[im as usize] = p as Point;
        }
        Permutation { images }
    }

    /// Conjugate `h^-1 self h`, so that `supp(self^h) = supp(self)·h`.
    pub fn conjugate(&self, h: &Permutation) -> Result<Self, PermError> {
        h.inverse().compose(self)?.compose(h)
    }

    pub fn support(&self) -> Vec<Point> {
        self.images
            .iter()
            .enumerate()
            .filter(|&(p, &im)| p as Point != im)
            .map(|(p, _)| p as Point)
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(p, &im)| p as Point == im)
    }

    pub fn order(&self) -> u64 {
        let mut ord: u64 = 1;
        let mut seen = vec![false; self.images.len()];
        for start in 0..self.images.len() {
            if seen[start] {
                continue;
            }
            let mut len: u64 = 0;
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                p = self.images[p] as usize;
                len += 1;
            }
            ord = lcm(ord, len);
        }
        ord
    }

    pub fn parity_is_even(&self) -> bool {
        let mut seen = vec![false; self.images.len()];
        let mut transpositions = 0usize;
        for start in 0..self.images.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0usize;
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                p = self.images[p] as usize;
                len += 1;
            }
            transpositions += len - 1;
        }
        transpositions % 2 == 0
    }

    /// Disjoint cycles, sorted by least element, fixed points omitted.
    pub fn cycles(&self) -> Vec<Vec<Point>> {
        let mut seen = vec![false; self.images.len()];
        let mut out = Vec::new();
        for start in 0..self.images.len() {
            if seen[start] || self.images[start] as usize == start {
                seen[start] = true;
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(p as Point);
                p = self.images[p] as usize;
            }
            out.push(cycle);
        }
        out
    }

    /// Parses disjoint-cycle notation, e.g. `(0 1)(2 3)`; `()` is the identity.
    pub fn parse(text: &str, ground: usize) -> Result<Self, PermError> {
        let bytes = text.as_bytes();
        let mut cycles: Vec<Vec<Point>> = Vec::new();
        let mut i = 0;
        let mut saw_any = false;
        while i < bytes.len() {
            match bytes[i] {
                b' ' | b'\t' => i += 1,
                b'(' => {
                    saw_any = true;
                    let close = text[i..]
                        .find(')')
                        .map(|off| i + off)
                        .ok_or_else(|| PermError::CycleSyntax(i, "unclosed '('".into()))?;
                    let body = &text[i + 1..close];
                    let mut cycle = Vec::new();
                    for tok in body.split_whitespace() {
                        let p: usize = tok.parse().map_err(|_| {
                            PermError::CycleSyntax(i, format!("bad point '{tok}'"))
                        })?;
                        cycle.push(p as Point);
                    }
                    if !cycle.is_empty() {
                        cycles.push(cycle);
                    }
                    i = close + 1;
                }
                c => {
                    return Err(PermError::CycleSyntax(
                        i,
                        format!("unexpected character '{}'", c as char),
                    ))
                }
            }
        }
        if !saw_any {
            return Err(PermError::CycleSyntax(0, "expected '('".into()));
        }
        Self::from_cycles(ground, &cycles)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cycle in cycles {
            write!(f, "(")?;
            for (i, p) in cycle.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{p}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{self}]")
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// An n-tuple of permutations over one ground set; the support of the tuple
/// is the union of the entry supports.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PermTuple {
    entries: Vec<Permutation>,
}

impl PermTuple {
    pub fn new(entries: Vec<Permutation>) -> Result<Self, PermError> {
        let first = entries.first().ok_or(PermError::EmptyTuple)?;
        let ground = first.ground_size();
        for e in &entries {
            if e.ground_size() != ground {
                return Err(PermError::GroundMismatch(ground, e.ground_size()));
            }
        }
        Ok(PermTuple { entries })
    }

    pub fn identity(arity: usize, ground: usize) -> Self {
        PermTuple {
            entries: vec![Permutation::identity(ground); arity],
        }
    }

    pub fn arity(&self) -> usize {
        self.entries.len()
    }

    pub fn ground_size(&self) -> usize {
        self.entries[0].ground_size()
    }

    pub fn entries(&self) -> &[Permutation] {
        &self.entries
    }

    pub fn entry(&self, i: usize) -> &Permutation {
        &self.entries[i]
    }

    pub fn support(&self) -> Vec<Point> {
        let mut in_supp = vec![false; self.ground_size()];
        for e in &self.entries {
            for p in e.support() {
                in_supp[p as usize] = true;
            }
        }
        (0..self.ground_size() as Point)
            .filter(|&p| in_supp[p as usize])
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.entries.iter().all(Permutation::is_identity)
    }

    /// Orbits of the generated group, as blocks sorted by least element.
    pub fn orbits(&self) -> Vec<Vec<Point>> {
        let n = self.ground_size();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut block = vec![start as Point];
            seen[start] = true;
            let mut head = 0;
            while head < block.len() {
                let p = block[head];
                head += 1;
                for e in &self.entries {
                    let q = e.apply(p);
                    if !seen[q as usize] {
                        seen[q as usize] = true;
                        block.push(q);
                    }
                }
            }
            block.sort_unstable();
            out.push(block);
        }
        out
    }

    /// Restriction to a union of orbits: agrees with `self` on the set and
    /// fixes its complement.
    pub fn restrict(&self, set: &[Point]) -> Result<Self, PermError> {
        let n = self.ground_size();
        let mut member = vec![false; n];
        for &p in set {
            if (p as usize) >= n {
                return Err(PermError::PointOutOfRange {
                    point: p as usize,
                    ground: n,
                });
            }
            member[p as usize] = true;
        }
        for &p in set {
            for e in &self.entries {
                if !member[e.apply(p) as usize] {
                    return Err(PermError::NotOrbitClosed(p as usize));
                }
            }
        }
        let entries = self
            .entries
            .iter()
            .map(|e| {
                let images = (0..n as Point)
                    .map(|p| if member[p as usize] { e.apply(p) } else { p })
                    .collect();
                Permutation { images }
            })
            .collect();
        Ok(PermTuple { entries })
    }

    /// Entrywise product `self * other`.
    pub fn pointwise_product(&self, other: &PermTuple) -> Result<Self, PermError> {
        if self.arity() != other.arity() {
            return Err(PermError::ArityMismatch(self.arity(), other.arity()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.compose(b))
            .collect::<Result<_, _>>()?;
        Ok(PermTuple { entries })
    }

    pub fn inverse(&self) -> Self {
        PermTuple {
            entries: self.entries.iter().map(Permutation::inverse).collect(),
        }
    }

    /// Entrywise conjugate `self^h`.
    pub fn conjugate(&self, h: &Permutation) -> Result<Self, PermError> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.conjugate(h))
            .collect::<Result<_, _>>()?;
        Ok(PermTuple { entries })
    }

    /// Do the entries of `self` and `other` commute pairwise?
    pub fn commutes_with(&self, other: &PermTuple) -> Result<bool, PermError> {
        for a in &self.entries {
            for b in &other.entries {
                if a.compose(b)? != b.compose(a)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Parses a comma-separated list of cycle notations.
    pub fn parse(text: &str, ground: usize) -> Result<Self, PermError> {
        let entries = text
            .split(',')
            .map(|part| Permutation::parse(part.trim(), ground))
            .collect::<Result<Vec<_>, _>>()?;
        PermTuple::new(entries)
    }
}

impl fmt::Display for PermTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PermTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PermTuple[{self}]")
    }
}

/// All permutations of `{0, .., ground-1}` in lexicographic one-line order.
/// The identity comes first.
pub fn all_permutations(ground: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut images: Vec<Point> = (0..ground as Point).collect();
    loop {
        out.push(Permutation {
            images: images.clone(),
        });
        if !next_lex(&mut images) {
            break;
        }
    }
    out
}

fn next_lex(a: &mut [Point]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_round_trip() {
        let g = Permutation::parse("(0 1)(2 3)", 5).unwrap();
        assert_eq!(g.to_string(), "(0 1)(2 3)");
        assert_eq!(g.support(), vec![0, 1, 2, 3]);
        let id = Permutation::parse("()", 4).unwrap();
        assert!(id.is_identity());
        assert_eq!(id.to_string(), "()");
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(Permutation::parse("(0 1", 3).is_err());
        assert!(Permutation::parse("(0 0)", 3).is_err());
        assert!(Permutation::parse("(0 7)", 3).is_err());
        assert!(Permutation::parse("", 3).is_err());
    }

    #[test]
    fn compose_is_right_action() {
        let f = Permutation::parse("(0 1 2)", 3).unwrap();
        let g = Permutation::parse("(0 1)", 3).unwrap();
        // (x)(fg) = ((x)f)g
        let fg = f.compose(&g).unwrap();
        assert_eq!(fg.apply(0), g.apply(f.apply(0)));
        assert_eq!(f.compose(&f.inverse()).unwrap(), Permutation::identity(3));
    }

    #[test]
    fn identity_tuple_orbits_are_singletons() {
        let t = PermTuple::identity(2, 4);
        assert_eq!(t.orbits(), vec![vec![0], vec![1], vec![2], vec![3]]);
    }

    #[test]
    fn orbits_follow_cycle_structure() {
        let t = PermTuple::parse("(0 1)(2 3)", 5).unwrap();
        assert_eq!(t.orbits(), vec![vec![0, 1], vec![2, 3], vec![4]]);
    }

    #[test]
    fn joint_orbit_closure() {
        let t = PermTuple::parse("(0 1 2 3 4), (0 1)(3 4)", 5).unwrap();
        assert_eq!(t.orbits(), vec![vec![0, 1, 2, 3, 4]]);
    }

    #[test]
    fn restrict_and_product() {
        let t = PermTuple::parse("(0 1)(2 3)", 5).unwrap();
        let r = t.restrict(&[]).unwrap();
        assert!(r.is_identity());
        assert!(t.restrict(&[0]).is_err());
        let prod = t.pointwise_product(&t.inverse()).unwrap();
        assert!(prod.is_identity());
    }

    #[test]
    fn order_and_parity() {
        let g = Permutation::parse("(0 1 2 3 4)", 5).unwrap();
        assert_eq!(g.order(), 5);
        assert!(g.parity_is_even());
        assert!(!Permutation::parse("(0 1)", 5).unwrap().parity_is_even());
    }

    #[test]
    fn all_permutations_lex() {
        let perms = all_permutations(4);
        assert_eq!(perms.len(), 24);
        assert!(perms[0].is_identity());
        for w in perms.windows(2) {
            assert!(w[0].images() < w[1].images());
        }
    }
}
