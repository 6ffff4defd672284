//! Sparse formal chains and cochains over exact coefficients.
//!
//! The boundary uses the sign convention
//! `∂_n(x₁,…,x_n) = Σ_{i=1}^n (−1)^{n−i} { (x₁◁x_i,…,x_{i−1}◁x_i, x_{i+1},…,x_n)
//! − (x₁,…,x̂_i,…,x_n) }` for `n ≥ 2`, and `∂₁(x) = 1` with the degree-0
//! module of rank one (basis: the empty tuple).

use crate::quandle::Quandle;
use crate::El;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ChainError {
    #[error("operation undefined in degree zero")]
    DegreeZero,
    #[error("element {0} out of range for quandle of size {1}")]
    ElementOutOfRange(El, usize),
    #[error("coefficient rings differ: {0} vs {1}")]
    RingMismatch(Ring, Ring),
    #[error("degrees differ: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("operation requires a quandle (axiom Q)")]
    NotAQuandle,
    #[error("parse error: {0}")]
    Parse(String),
}

/// Exact coefficient ring: the integers or the integers mod m (m ≥ 2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Ring {
    Int,
    Mod(u64),
}

impl Ring {
    /// Canonical representative: unchanged over Z, reduced into `0..m` mod m.
    pub fn normalize(self, x: BigInt) -> BigInt {
        match self {
            Ring::Int => x,
            Ring::Mod(m) => {
                let m = BigInt::from(m);
                let r = x % &m;
                if r.is_negative() {
                    r + m
                } else {
                    r
                }
            }
        }
    }

    pub fn parse(s: &str) -> Result<Self, ChainError> {
        if s == "z" || s == "Z" {
            return Ok(Ring::Int);
        }
        if let Some(m) = s.strip_prefix('z').or_else(|| s.strip_prefix('Z')) {
            let m: u64 = m
                .parse()
                .map_err(|_| ChainError::Parse(format!("bad ring {s:?}")))?;
            if m < 2 {
                return Err(ChainError::Parse("modulus must be >= 2".into()));
            }
            return Ok(Ring::Mod(m));
        }
        Err(ChainError::Parse(format!("bad ring {s:?}")))
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Int => write!(f, "z"),
            Ring::Mod(m) => write!(f, "z{m}"),
        }
    }
}

/// Rack theory keeps all tuples; quandle theory kills degenerate ones
/// (some adjacent pair of equal entries).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theory {
    Rack,
    Quandle,
}

impl Theory {
    pub fn parse(s: &str) -> Result<Self, ChainError> {
        match s {
            "rack" => Ok(Theory::Rack),
            "quandle" => Ok(Theory::Quandle),
            _ => Err(ChainError::Parse(format!("bad theory {s:?}"))),
        }
    }
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Theory::Rack => write!(f, "rack"),
            Theory::Quandle => write!(f, "quandle"),
        }
    }
}

pub fn is_degenerate<E: PartialEq>(tuple: &[E]) -> bool {
    tuple.windows(2).any(|w| w[0] == w[1])
}

/// A formal linear combination of `degree`-tuples with nonzero coefficients,
/// canonically ordered. Generic over the entry alphabet so that symbolic
/// (arc-word) chains share the arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain<E: Ord + Clone = El> {
    degree: usize,
    theory: Theory,
    ring: Ring,
    terms: BTreeMap<Vec<E>, BigInt>,
}

impl<E: Ord + Clone> Chain<E> {
    pub fn zero(degree: usize, theory: Theory, ring: Ring) -> Self {
        Chain { degree, theory, ring, terms: BTreeMap::new() }
    }

    pub fn generator(tuple: Vec<E>, theory: Theory, ring: Ring) -> Self {
        let mut c = Chain::zero(tuple.len(), theory, ring);
        c.add_term(tuple, BigInt::one());
        c
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn theory(&self) -> Theory {
        self.theory
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[E], &BigInt)> {
        self.terms.iter().map(|(t, c)| (t.as_slice(), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, tuple: &[E]) -> BigInt {
        self.terms.get(tuple).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Add `coeff · tuple`, reducing degenerates (quandle theory) and
    /// dropping zero results.
    pub fn add_term(&mut self, tuple: Vec<E>, coeff: BigInt) {
        assert_eq!(tuple.len(), self.degree, "tuple length must match degree");
        if self.theory == Theory::Quandle && is_degenerate(&tuple) {
            return;
        }
        let c = self.ring.normalize(self.terms.remove(&tuple).unwrap_or_else(BigInt::zero) + coeff);
        if !c.is_zero() {
            self.terms.insert(tuple, c);
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, ChainError> {
        if self.ring != other.ring {
            return Err(ChainError::RingMismatch(self.ring, other.ring));
        }
        if self.degree != other.degree {
            return Err(ChainError::DegreeMismatch(self.degree, other.degree));
        }
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(t.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ChainError> {
        self.add(&other.scale(&BigInt::from(-1)))
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let mut out = Chain::zero(self.degree, self.theory, self.ring);
        for (t, c) in &self.terms {
            out.add_term(t.clone(), c * k);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&BigInt::from(-1))
    }

    /// Project to quandle theory: drop degenerate tuples.
    pub fn project_quandle(&self) -> Self {
        let mut out = Chain::zero(self.degree, Theory::Quandle, self.ring);
        for (t, c) in &self.terms {
            out.add_term(t.clone(), c.clone());
        }
        out
    }

    /// The shifting map σ: drop the first coordinate of every tuple.
    pub fn shift(&self) -> Result<Self, ChainError> {
        if self.degree == 0 {
            return Err(ChainError::DegreeZero);
        }
        let mut out = Chain::zero(self.degree - 1, self.theory, self.ring);
        for (t, c) in &self.terms {
            out.add_term(t[1..].to_vec(), c.clone());
        }
        Ok(out)
    }

    /// Bilinear concatenation product.
    pub fn bullet(&self, other: &Self) -> Result<Self, ChainError> {
        if self.ring != other.ring {
            return Err(ChainError::RingMismatch(self.ring, other.ring));
        }
        let mut out = Chain::zero(self.degree + other.degree, self.theory, self.ring);
        for (t1, c1) in &self.terms {
            for (t2, c2) in &other.terms {
                let mut t = t1.clone();
                t.extend_from_slice(t2);
                out.add_term(t, c1 * c2);
            }
        }
        Ok(out)
    }

    /// Apply an entry substitution, re-normalizing (used for evaluation of
    /// symbolic chains and pushforwards).
    pub fn map_entries<F, E2>(&self, theory: Theory, mut f: F) -> Chain<E2>
    where
        E2: Ord + Clone,
        F: FnMut(&E) -> E2,
    {
        let mut out = Chain::zero(self.degree, theory, self.ring);
        for (t, c) in &self.terms {
            out.add_term(t.iter().map(&mut f).collect(), c.clone());
        }
        out
    }

    /// Convert theory/ring wholesale (used when reducing mod m).
    pub fn convert(&self, theory: Theory, ring: Ring) -> Chain<E> {
        let mut out = Chain::zero(self.degree, theory, ring);
        for (t, c) in &self.terms {
            out.add_term(t.clone(), c.clone());
        }
        out
    }
}

impl Chain<El> {
    /// The boundary ∂_n with the paper's `(−1)^{n−i}` signs; `∂₁(x) = 1`
    /// lands in the rank-one degree-0 module (basis: empty tuple).
    pub fn boundary(&self, q: &Quandle) -> Result<Self, ChainError> {
        let n = self.degree;
        if n == 0 {
            return Err(ChainError::DegreeZero);
        }
        for (t, _) in self.terms() {
            if let Some(&x) = t.iter().find(|&&x| x >= q.size()) {
                return Err(ChainError::ElementOutOfRange(x, q.size()));
            }
        }
        let mut out = Chain::zero(n - 1, self.theory, self.ring);
        for (t, c) in &self.terms {
            if n == 1 {
                out.add_term(vec![], c.clone());
                continue;
            }
            for i in 0..n {
                let sign = if (n - 1 - i) % 2 == 0 { BigInt::one() } else { BigInt::from(-1) };
                let mut acted = Vec::with_capacity(n - 1);
                for (j, &x) in t.iter().enumerate() {
                    if j < i {
                        acted.push(q.tri(x, t[i]));
                    } else if j > i {
                        acted.push(x);
                    }
                }
                let mut dropped = Vec::with_capacity(n - 1);
                for (j, &x) in t.iter().enumerate() {
                    if j != i {
                        dropped.push(x);
                    }
                }
                out.add_term(acted, c * &sign);
                out.add_term(dropped, c * &sign * BigInt::from(-1));
            }
        }
        Ok(out)
    }

    /// The Litherland–Nelson splitting map
    /// `α_n(x₁,…,x_n) = x₁ • (x₂ − x₁) • ⋯ • (x_n − x_{n−1})`.
    pub fn split(&self, q: &Quandle) -> Result<Self, ChainError> {
        if !q.is_quandle() {
            return Err(ChainError::NotAQuandle);
        }
        let mut out = Chain::zero(self.degree, self.theory, self.ring);
        for (t, c) in &self.terms {
            let mut acc = Chain::zero(0, self.theory, self.ring);
            acc.add_term(vec![], c.clone());
            for (i, &x) in t.iter().enumerate() {
                let mut factor = Chain::zero(1, self.theory, self.ring);
                factor.add_term(vec![x], BigInt::one());
                if i > 0 {
                    factor.add_term(vec![t[i - 1]], BigInt::from(-1));
                }
                acc = acc.bullet(&factor)?;
            }
            out = out.add(&acc)?;
        }
        Ok(out)
    }

    /// Parse the chain file format: header `chain <theory> <degree> <ring>`,
    /// then `<coeff> (<x1>,...,<xn>)` lines.
    pub fn parse(text: &str) -> Result<Self, ChainError> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| ChainError::Parse("empty file".into()))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 4 || parts[0] != "chain" {
            return Err(ChainError::Parse(format!("bad header {header:?}")));
        }
        let theory = Theory::parse(parts[1])?;
        let degree: usize = parts[2]
            .parse()
            .map_err(|_| ChainError::Parse(format!("bad degree {:?}", parts[2])))?;
        let ring = Ring::parse(parts[3])?;
        let mut chain = Chain::zero(degree, theory, ring);
        for line in lines {
            let (coeff, tuple) = parse_term(line, degree)?;
            chain.add_term(tuple, coeff);
        }
        Ok(chain)
    }

    pub fn dump(&self) -> String {
        let mut out = format!("chain {} {} {}\n", self.theory, self.degree, self.ring);
        for (t, c) in &self.terms {
            out.push_str(&format!("{c} {}\n", fmt_tuple(t)));
        }
        out
    }
}

pub fn fmt_tuple(t: &[El]) -> String {
    let cells: Vec<String> = t.iter().map(|x| x.to_string()).collect();
    format!("({})", cells.join(","))
}

fn parse_term(line: &str, degree: usize) -> Result<(BigInt, Vec<El>), ChainError> {
    let (coeff, rest) = line
        .split_once(' ')
        .ok_or_else(|| ChainError::Parse(format!("bad term {line:?}")))?;
    let coeff: BigInt = coeff
        .parse()
        .map_err(|_| ChainError::Parse(format!("bad coefficient {coeff:?}")))?;
    let inner = rest
        .trim()
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| ChainError::Parse(format!("bad tuple {rest:?}")))?;
    let tuple: Vec<El> = if inner.trim().is_empty() {
        vec![]
    } else {
        inner
            .split(',')
            .map(|s| s.trim().parse())
            .collect::<Result<_, _>>()
            .map_err(|e| ChainError::Parse(format!("bad tuple {rest:?}: {e}")))?
    };
    if tuple.len() != degree {
        return Err(ChainError::Parse(format!(
            "tuple {rest:?} has arity {}, expected {degree}",
            tuple.len()
        )));
    }
    Ok((coeff, tuple))
}

/// A cochain: a finitely-supported value table on `degree`-tuples (unlisted
/// tuples take value 0). Quandle-theory cochains vanish on degenerates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cochain {
    degree: usize,
    theory: Theory,
    ring: Ring,
    values: BTreeMap<Vec<El>, BigInt>,
}

impl Cochain {
    pub fn zero(degree: usize, theory: Theory, ring: Ring) -> Self {
        Cochain { degree, theory, ring, values: BTreeMap::new() }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn theory(&self) -> Theory {
        self.theory
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn set(&mut self, tuple: Vec<El>, value: BigInt) {
        assert_eq!(tuple.len(), self.degree);
        if self.theory == Theory::Quandle && is_degenerate(&tuple) {
            return;
        }
        let v = self.ring.normalize(value);
        if v.is_zero() {
            self.values.remove(&tuple);
        } else {
            self.values.insert(tuple, v);
        }
    }

    pub fn value(&self, tuple: &[El]) -> BigInt {
        self.values.get(tuple).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = (&[El], &BigInt)> {
        self.values.iter().map(|(t, c)| (t.as_slice(), c))
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain, ChainError> {
        if self.ring != other.ring {
            return Err(ChainError::RingMismatch(self.ring, other.ring));
        }
        if self.degree != other.degree {
            return Err(ChainError::DegreeMismatch(self.degree, other.degree));
        }
        let mut out = self.clone();
        for (t, v) in &other.values {
            out.set(t.clone(), out.value(t) + v);
        }
        Ok(out)
    }

    pub fn scale(&self, k: &BigInt) -> Cochain {
        let mut out = Cochain::zero(self.degree, self.theory, self.ring);
        for (t, v) in &self.values {
            out.set(t.clone(), v * k);
        }
        out
    }

    /// Pairing `⟨c, f⟩ = Σ coeff(t)·f(t)` in the coefficient ring.
    pub fn eval(&self, c: &Chain<El>) -> Result<BigInt, ChainError> {
        if self.degree != c.degree() {
            return Err(ChainError::DegreeMismatch(self.degree, c.degree()));
        }
        if self.ring != c.ring() {
            return Err(ChainError::RingMismatch(self.ring, c.ring()));
        }
        let mut acc = BigInt::zero();
        for (t, coeff) in c.terms() {
            acc += coeff * self.value(t);
        }
        Ok(self.ring.normalize(acc))
    }

    /// The coboundary `(δf)(t) = f(∂ t)` on every (degree+1)-tuple.
    pub fn coboundary(&self, q: &Quandle) -> Result<Cochain, ChainError> {
        let n = self.degree + 1;
        let mut out = Cochain::zero(n, self.theory, self.ring);
        for t in Tuples::new(q.size(), n) {
            if self.theory == Theory::Quandle && is_degenerate(&t) {
                continue;
            }
            let gen = Chain::generator(t.clone(), self.theory, self.ring);
            let v = self.eval(&gen.boundary(q)?)?;
            out.set(t, v);
        }
        Ok(out)
    }

    /// Parse the cocycle file format: header `cocycle <n> mod <m> over
    /// <quandle-file>`, then `(<x1>,...,<xn>) = <v>` lines.
    pub fn parse(text: &str, theory: Theory) -> Result<(Cochain, String), ChainError> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| ChainError::Parse("empty file".into()))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 6 || parts[0] != "cocycle" || parts[2] != "mod" || parts[4] != "over" {
            return Err(ChainError::Parse(format!("bad header {header:?}")));
        }
        let degree: usize = parts[1]
            .parse()
            .map_err(|_| ChainError::Parse(format!("bad degree {:?}", parts[1])))?;
        let m: u64 = parts[3]
            .parse()
            .map_err(|_| ChainError::Parse(format!("bad modulus {:?}", parts[3])))?;
        if m < 2 {
            return Err(ChainError::Parse("modulus must be >= 2".into()));
        }
        let quandle_ref = parts[5].to_string();
        let mut f = Cochain::zero(degree, theory, Ring::Mod(m));
        for line in lines {
            let (lhs, rhs) = line
                .split_once('=')
                .ok_or_else(|| ChainError::Parse(format!("bad line {line:?}")))?;
            let inner = lhs
                .trim()
                .strip_prefix('(')
                .and_then(|s| s.strip_suffix(')'))
                .ok_or_else(|| ChainError::Parse(format!("bad tuple {lhs:?}")))?;
            let tuple: Vec<El> = if inner.trim().is_empty() {
                vec![]
            } else {
                inner
                    .split(',')
                    .map(|s| s.trim().parse())
                    .collect::<Result<_, _>>()
                    .map_err(|e| ChainError::Parse(format!("bad tuple {lhs:?}: {e}")))?
            };
            if tuple.len() != degree {
                return Err(ChainError::Parse(format!("tuple arity != {degree} in {line:?}")));
            }
            if theory == Theory::Quandle && is_degenerate(&tuple) {
                let v: BigInt = rhs
                    .trim()
                    .parse()
                    .map_err(|_| ChainError::Parse(format!("bad value {rhs:?}")))?;
                if !Ring::Mod(m).normalize(v).is_zero() {
                    return Err(ChainError::Parse(format!(
                        "degenerate tuple {lhs:?} must be 0 for a quandle cocycle"
                    )));
                }
                continue;
            }
            let v: BigInt = rhs
                .trim()
                .parse()
                .map_err(|_| ChainError::Parse(format!("bad value {rhs:?}")))?;
            f.set(tuple, v);
        }
        Ok((f, quandle_ref))
    }

    pub fn dump(&self, quandle_ref: &str) -> String {
        let m = match self.ring {
            Ring::Mod(m) => m,
            Ring::Int => panic!("cocycle files are modular"),
        };
        let mut out = format!("cocycle {} mod {} over {}\n", self.degree, m, quandle_ref);
        for (t, v) in &self.values {
            out.push_str(&format!("{} = {v}\n", fmt_tuple(t)));
        }
        out
    }
}

/// Iterator over all `n`-tuples with entries in `0..size`, lexicographic.
pub struct Tuples {
    size: usize,
    next: Option<Vec<El>>,
}

impl Tuples {
    pub fn new(size: usize, n: usize) -> Self {
        let next = if size == 0 && n > 0 { None } else { Some(vec![0; n]) };
        Tuples { size, next }
    }
}

impl Iterator for Tuples {
    type Item = Vec<El>;

    fn next(&mut self) -> Option<Vec<El>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut i = succ.len();
        loop {
            if i == 0 {
                self.next = None;
                break;
            }
            i -= 1;
            succ[i] += 1;
            if succ[i] < self.size {
                self.next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(current)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z3() -> Quandle {
        Quandle::dihedral(3).unwrap()
    }

    fn gen(t: &[El]) -> Chain<El> {
        Chain::generator(t.to_vec(), Theory::Rack, Ring::Int)
    }

    #[test]
    fn boundary_degree_2() {
        // ∂₂(x,y) = (x◁y) − (x)
        let q = z3();
        let d = gen(&[0, 1]).boundary(&q).unwrap();
        let mut expect = Chain::zero(1, Theory::Rack, Ring::Int);
        expect.add_term(vec![2], BigInt::one());
        expect.add_term(vec![0], BigInt::from(-1));
        assert_eq!(d, expect);
    }

    #[test]
    fn boundary_degree_3_matches_displayed_expansion() {
        // ∂₃(x,y,z) = −(x◁y,z) + (x,z) + (x◁z,y◁z) − (x,y)
        let q = z3();
        for t in Tuples::new(3, 3) {
            let (x, y, z) = (t[0], t[1], t[2]);
            let d = gen(&t).boundary(&q).unwrap();
            let mut expect = Chain::zero(2, Theory::Rack, Ring::Int);
            expect.add_term(vec![q.tri(x, y), z], BigInt::from(-1));
            expect.add_term(vec![x, z], BigInt::one());
            expect.add_term(vec![q.tri(x, z), q.tri(y, z)], BigInt::one());
            expect.add_term(vec![x, y], BigInt::from(-1));
            assert_eq!(d, expect, "tuple {t:?}");
        }
    }

    #[test]
    fn boundary_degree_1_is_augmentation() {
        let q = z3();
        let c = gen(&[0]).add(&gen(&[2]).scale(&BigInt::from(3))).unwrap();
        let d = c.boundary(&q).unwrap();
        assert_eq!(d.coeff(&[]), BigInt::from(4));
    }

    #[test]
    fn boundary_squared_zero_small() {
        let q = z3();
        for n in 2..=4 {
            for t in Tuples::new(3, n) {
                let dd = gen(&t).boundary(&q).unwrap().boundary(&q).unwrap();
                assert!(dd.is_zero(), "∂∂ ≠ 0 at {t:?}");
            }
        }
    }

    #[test]
    fn shadow_boundary_identity() {
        // ∂(α,x,y,z) = (α◁x,y,z) − (α,y,z) − (α◁y,x◁y,z) + (α,x,z)
        //              + (α◁z,x◁z,y◁z) − (α,x,y)
        let q = z3();
        for t in Tuples::new(3, 4) {
            let (a, x, y, z) = (t[0], t[1], t[2], t[3]);
            let d = gen(&t).boundary(&q).unwrap();
            let mut e = Chain::zero(3, Theory::Rack, Ring::Int);
            e.add_term(vec![q.tri(a, x), y, z], BigInt::one());
            e.add_term(vec![a, y, z], BigInt::from(-1));
            e.add_term(vec![q.tri(a, y), q.tri(x, y), z], BigInt::from(-1));
            e.add_term(vec![a, x, z], BigInt::one());
            e.add_term(vec![q.tri(a, z), q.tri(x, z), q.tri(y, z)], BigInt::one());
            e.add_term(vec![a, x, y], BigInt::from(-1));
            assert_eq!(d, e, "tuple {t:?}");
        }
    }

    #[test]
    fn project_quandle_examples() {
        let c = Chain::generator(vec![1, 1, 3], Theory::Rack, Ring::Int);
        assert!(c.project_quandle().is_zero());
        let c = Chain::generator(vec![4, 1, 4], Theory::Rack, Ring::Int);
        assert_eq!(c.project_quandle().num_terms(), 1);
    }

    #[test]
    fn shift_examples() {
        let q = z3();
        let mut c = Chain::zero(3, Theory::Rack, Ring::Int);
        c.add_term(vec![0, 1, 2], BigInt::one());
        c.add_term(vec![1, 1, 2], BigInt::one());
        let s = c.shift().unwrap();
        assert_eq!(s.coeff(&[1, 2]), BigInt::from(2));
        assert!(Chain::<El>::zero(2, Theory::Rack, Ring::Int).shift().unwrap().is_zero());
        // chain map ∂σ = σ∂ above the augmentation degree
        for n in 3..=4 {
            for t in Tuples::new(3, n) {
                let c = gen(&t);
                let lhs = c.shift().unwrap().boundary(&q).unwrap();
                let rhs = c.boundary(&q).unwrap().shift().unwrap();
                assert_eq!(lhs, rhs, "σ not a chain map at {t:?}");
            }
        }
    }

    #[test]
    fn bullet_examples() {
        let a = gen(&[0]);
        let b = gen(&[1]);
        assert_eq!(a.bullet(&b).unwrap(), gen(&[0, 1]));
        let z = Chain::zero(1, Theory::Rack, Ring::Int);
        assert!(a.bullet(&z).unwrap().is_zero());
        let d = a.sub(&b).unwrap().bullet(&gen(&[2])).unwrap();
        assert_eq!(d.coeff(&[0, 2]), BigInt::one());
        assert_eq!(d.coeff(&[1, 2]), BigInt::from(-1));
    }

    #[test]
    fn split_low_degree_forms() {
        let q = z3();
        // α₂(x,y) = (x,y) − (x,x)
        for t in Tuples::new(3, 2) {
            let s = gen(&t).split(&q).unwrap();
            let mut e = Chain::zero(2, Theory::Rack, Ring::Int);
            e.add_term(vec![t[0], t[1]], BigInt::one());
            e.add_term(vec![t[0], t[0]], BigInt::from(-1));
            assert_eq!(s, e);
        }
        // α₃(x,y,z) = (x,y,z) − (x,y,y) + (x,x,y) − (x,x,z)
        for t in Tuples::new(3, 3) {
            let s = gen(&t).split(&q).unwrap();
            let (x, y, z) = (t[0], t[1], t[2]);
            let mut e = Chain::zero(3, Theory::Rack, Ring::Int);
            e.add_term(vec![x, y, z], BigInt::one());
            e.add_term(vec![x, y, y], BigInt::from(-1));
            e.add_term(vec![x, x, y], BigInt::one());
            e.add_term(vec![x, x, z], BigInt::from(-1));
            assert_eq!(s, e);
        }
        // α₁(x) = (x)
        assert_eq!(gen(&[2]).split(&q).unwrap(), gen(&[2]));
    }

    #[test]
    fn split_is_chain_map_and_complements_degenerates() {
        let q = z3();
        for n in 2..=4 {
            for t in Tuples::new(3, n) {
                let c = gen(&t);
                let lhs = c.split(&q).unwrap().boundary(&q).unwrap();
                let rhs = c.boundary(&q).unwrap().split(&q).unwrap();
                assert_eq!(lhs, rhs, "α not a chain map at {t:?}");
                let diff = c.sub(&c.split(&q).unwrap()).unwrap();
                assert!(diff.project_quandle().is_zero(), "t − α(t) not degenerate at {t:?}");
            }
        }
    }

    #[test]
    fn coboundary_and_eval() {
        let q = z3();
        // degree-0 constant k: (δk)(x) = k
        let mut k = Cochain::zero(0, Theory::Rack, Ring::Mod(5));
        k.set(vec![], BigInt::from(3));
        let dk = k.coboundary(&q).unwrap();
        for x in 0..3 {
            assert_eq!(dk.value(&[x]), BigInt::from(3));
        }
        // indicator of (0,1): (δf)(0,1,2) = −f(2,2)+f(0,2)+f(1,0)−f(0,1) = −1
        let mut f = Cochain::zero(2, Theory::Rack, Ring::Mod(5));
        f.set(vec![0, 1], BigInt::one());
        let df = f.coboundary(&q).unwrap();
        assert_eq!(df.value(&[0, 1, 2]), Ring::Mod(5).normalize(BigInt::from(-1)));
        // pairing against ∂₃(0,1,2)
        let d = Chain::generator(vec![0, 1, 2], Theory::Rack, Ring::Mod(5))
            .boundary(&q)
            .unwrap();
        assert_eq!(f.eval(&d).unwrap(), Ring::Mod(5).normalize(BigInt::from(-1)));
        // δδ = 0
        assert!(df.coboundary(&q).unwrap().is_zero());
    }

    #[test]
    fn chain_file_round_trip() {
        let mut c = Chain::zero(3, Theory::Quandle, Ring::Int);
        c.add_term(vec![0, 1, 0], BigInt::from(2));
        c.add_term(vec![1, 0, 2], BigInt::from(-1));
        let c2 = Chain::parse(&c.dump()).unwrap();
        assert_eq!(c, c2);
    }

    #[test]
    fn cocycle_file_round_trip() {
        let mut f = Cochain::zero(2, Theory::Quandle, Ring::Mod(3));
        f.set(vec![0, 1], BigInt::from(2));
        f.set(vec![2, 0], BigInt::one());
        let text = f.dump("z3.qnd");
        let (f2, qref) = Cochain::parse(&text, Theory::Quandle).unwrap();
        assert_eq!(f, f2);
        assert_eq!(qref, "z3.qnd");
    }
}
