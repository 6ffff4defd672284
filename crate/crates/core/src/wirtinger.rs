//! Formal knot-quandle elements as arc-words, arc-to-word homomorphism data,
//! symbolic shadow chains, and pushforwards.
//!
//! Words are normalized by cancelling inverse pairs only; deciding semantic
//! equality is delegated to evaluation over families of finite quandles.
//! Region words additionally get reduced by the diagram's own Wirtinger
//! relations (one-step generator rewrites), which is how the published
//! figures label regions.

use crate::chain::{Chain, Ring, Theory};
use crate::diagram::{Conventions, Edge, NormalSide, OrientedDiagram, RegionMap};
use crate::quandle::Quandle;
use crate::El;
use num_bigint::BigInt;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WirtingerError {
    #[error("unknown arc {0}")]
    UnknownArc(usize),
    #[error("word parse error: {0}")]
    Parse(String),
    #[error("assignment is missing arc class {0}")]
    MissingArc(usize),
}

/// A formal quandle word: a generator with a left-to-right sequence of
/// `◁^{±1}` applications. Kept in normalized form (no adjacent inverse pair
/// with syntactically equal operand).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArcWord {
    base: usize,
    ops: Vec<(ArcWord, i8)>,
}

impl ArcWord {
    pub fn generator(arc: usize) -> Self {
        ArcWord { base: arc, ops: vec![] }
    }

    pub fn as_generator(&self) -> Option<usize> {
        if self.ops.is_empty() {
            Some(self.base)
        } else {
            None
        }
    }

    pub fn base(&self) -> usize {
        self.base
    }

    /// Apply `◁` (exp = 1) or `◀` (exp = −1), normalizing.
    pub fn apply(&self, v: &ArcWord, exp: i8) -> Self {
        assert!(exp == 1 || exp == -1);
        let mut out = self.clone();
        if let Some((last_w, last_e)) = out.ops.last() {
            if last_w == v && *last_e == -exp {
                out.ops.pop();
                return out;
            }
        }
        out.ops.push((v.clone(), exp));
        out
    }

    /// Re-normalize bottom-up (used after substitutions).
    pub fn normalize(&self) -> Self {
        let mut out = ArcWord { base: self.base, ops: vec![] };
        for (v, e) in &self.ops {
            out = out.apply(&v.normalize(), *e);
        }
        out
    }

    /// Number of generator occurrences.
    pub fn size(&self) -> usize {
        1 + self.ops.iter().map(|(v, _)| v.size()).sum::<usize>()
    }

    pub fn generators(&self) -> Vec<usize> {
        let mut out = vec![self.base];
        for (v, _) in &self.ops {
            out.extend(v.generators());
        }
        out
    }

    /// Evaluate under a colouring, i.e. extend the generator assignment to a
    /// quandle homomorphism.
    pub fn evaluate(&self, c: &crate::diagram::Colouring) -> Result<El, WirtingerError> {
        let mut acc = *c
            .edge_colours
            .get(&self.base)
            .ok_or(WirtingerError::UnknownArc(self.base))?;
        for (v, e) in &self.ops {
            let w = v.evaluate(c)?;
            acc = if *e == 1 { c.quandle.tri(acc, w) } else { c.quandle.tri_inv(acc, w) };
        }
        Ok(acc)
    }

    /// Replace every generator by its image word, normalizing.
    pub fn substitute(&self, map: &BTreeMap<usize, ArcWord>) -> Result<ArcWord, WirtingerError> {
        let mut out = map
            .get(&self.base)
            .ok_or(WirtingerError::UnknownArc(self.base))?
            .clone();
        for (v, e) in &self.ops {
            out = out.apply(&v.substitute(map)?, *e);
        }
        Ok(out)
    }

    /// Grammar: `word := NUM | '(' word '<' word ')' | '(' word '>' word ')'`.
    pub fn parse(text: &str) -> Result<Self, WirtingerError> {
        let tokens = tokenize(text)?;
        let (w, rest) = parse_word(&tokens)?;
        if !rest.is_empty() {
            return Err(WirtingerError::Parse(format!("trailing input in {text:?}")));
        }
        Ok(w.normalize())
    }
}

impl fmt::Display for ArcWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Left-associated rendering: ((b op v1) op v2) ...
        for _ in &self.ops {
            write!(f, "(")?;
        }
        write!(f, "{}", self.base)?;
        for (v, e) in &self.ops {
            let op = if *e == 1 { '<' } else { '>' };
            write!(f, " {op} {v})")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Num(usize),
    Open,
    Close,
    Lt,
    Gt,
}

fn tokenize(text: &str) -> Result<Vec<Token>, WirtingerError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&ch) = chars.peek() {
        match ch {
            ' ' | '\t' => {
                chars.next();
            }
            '(' => {
                chars.next();
                out.push(Token::Open);
            }
            ')' => {
                chars.next();
                out.push(Token::Close);
            }
            '<' => {
                chars.next();
                out.push(Token::Lt);
            }
            '>' => {
                chars.next();
                out.push(Token::Gt);
            }
            c if c.is_ascii_digit() => {
                let mut n = 0usize;
                while let Some(&d) = chars.peek() {
                    if let Some(v) = d.to_digit(10) {
                        n = n * 10 + v as usize;
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Token::Num(n));
            }
            c => return Err(WirtingerError::Parse(format!("unexpected character {c:?}"))),
        }
    }
    Ok(out)
}

fn parse_word(tokens: &[Token]) -> Result<(ArcWord, &[Token]), WirtingerError> {
    match tokens.first() {
        Some(Token::Num(n)) => Ok((ArcWord::generator(*n), &tokens[1..])),
        Some(Token::Open) => {
            let (lhs, rest) = parse_word(&tokens[1..])?;
            let exp = match rest.first() {
                Some(Token::Lt) => 1,
                Some(Token::Gt) => -1,
                _ => return Err(WirtingerError::Parse("expected < or >".into())),
            };
            let (rhs, rest) = parse_word(&rest[1..])?;
            match rest.first() {
                Some(Token::Close) => Ok((lhs.apply(&rhs, exp), &rest[1..])),
                _ => Err(WirtingerError::Parse("expected )".into())),
            }
        }
        _ => Err(WirtingerError::Parse("expected a word".into())),
    }
}

/// One-step generator rewrites harvested from a diagram's crossings:
/// `a ◁ b = c` yields `(a < b) → c` and `(c > b) → a`.
#[derive(Debug, Clone, Default)]
pub struct RelationTable {
    fwd: BTreeMap<(usize, usize), usize>,
    bwd: BTreeMap<(usize, usize), usize>,
}

impl RelationTable {
    pub fn from_diagram(d: &OrientedDiagram, conv: Conventions) -> Self {
        let classes = d.arc_classes();
        let class_of = d.class_index(&classes);
        let label = |e: Edge| classes[class_of[&e]][0];
        let mut t = RelationTable::default();
        for cr in d.crossings() {
            let a = label(cr.under_initial(conv));
            let b = label(cr.over_edge());
            let c = label(cr.under_terminal(conv));
            t.fwd.insert((a, b), c);
            t.bwd.insert((c, b), a);
        }
        t
    }

    /// Fold the word left-to-right, collapsing generator-on-generator steps
    /// that match a relation, plus the idempotency rewrite `w ◁^{±1} w = w`
    /// valid in every quandle.
    pub fn reduce(&self, w: &ArcWord) -> ArcWord {
        let mut out = ArcWord::generator(w.base);
        for (v, e) in &w.ops {
            let v = self.reduce(v);
            if out == v {
                continue;
            }
            if let (Some(g), Some(h)) = (out.as_generator(), v.as_generator()) {
                let hit = if *e == 1 { self.fwd.get(&(g, h)) } else { self.bwd.get(&(g, h)) };
                if let Some(&c) = hit {
                    out = ArcWord::generator(c);
                    continue;
                }
            }
            out = out.apply(&v, *e);
        }
        out
    }
}

/// Arc-to-word data for a map between two diagrams' knot quandles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordAssignment {
    pub source_ref: String,
    pub target_ref: String,
    /// Keyed by the least-edge label of the source Wirtinger class.
    pub map: BTreeMap<usize, ArcWord>,
}

impl WordAssignment {
    pub fn parse(text: &str) -> Result<Self, WirtingerError> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| WirtingerError::Parse("empty assignment".into()))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 3 || parts[0] != "assignment" {
            return Err(WirtingerError::Parse(format!("bad header {header:?}")));
        }
        let mut map = BTreeMap::new();
        for line in lines {
            let rest = line
                .strip_prefix("arc ")
                .ok_or_else(|| WirtingerError::Parse(format!("bad line {line:?}")))?;
            let (arc, word) = rest
                .split_once("->")
                .ok_or_else(|| WirtingerError::Parse(format!("bad line {line:?}")))?;
            let arc: usize = arc
                .trim()
                .parse()
                .map_err(|_| WirtingerError::Parse(format!("bad arc id in {line:?}")))?;
            map.insert(arc, ArcWord::parse(word.trim())?);
        }
        Ok(WordAssignment {
            source_ref: parts[1].to_string(),
            target_ref: parts[2].to_string(),
            map,
        })
    }

    pub fn dump(&self) -> String {
        let mut out = format!("assignment {} {}\n", self.source_ref, self.target_ref);
        for (arc, w) in &self.map {
            out.push_str(&format!("arc {arc} -> {w}\n"));
        }
        out
    }

    pub fn identity(d: &OrientedDiagram) -> Self {
        let map = d
            .arc_classes()
            .iter()
            .map(|class| (class[0], ArcWord::generator(class[0])))
            .collect();
        WordAssignment { source_ref: "self".into(), target_ref: "self".into(), map }
    }
}

/// One failed relation check: which crossing, under which target colouring.
#[derive(Debug, Clone)]
pub struct AssignmentWitness {
    pub quandle: String,
    pub crossing: usize,
    pub colouring: BTreeMap<Edge, El>,
    pub lhs: El,
    pub rhs: El,
}

#[derive(Debug, Clone)]
pub struct AssignmentReport {
    pub relations_checked: usize,
    pub colourings_checked: usize,
    pub witnesses: Vec<AssignmentWitness>,
}

impl AssignmentReport {
    pub fn passed(&self) -> bool {
        self.witnesses.is_empty()
    }
}

/// Verify, over each test quandle, that every crossing relation of the
/// source diagram maps to an identity that holds under every colouring of
/// the target. A sound necessary condition for a homomorphism of knot
/// quandles; not claimed complete.
pub fn check_assignment(
    a: &WordAssignment,
    source: &OrientedDiagram,
    target: &OrientedDiagram,
    tests: &[(String, Quandle)],
    conv: Conventions,
) -> Result<AssignmentReport, WirtingerError> {
    let classes = source.arc_classes();
    let class_of = source.class_index(&classes);
    let label = |e: Edge| classes[class_of[&e]][0];
    for class in &classes {
        if !a.map.contains_key(&class[0]) {
            return Err(WirtingerError::MissingArc(class[0]));
        }
    }
    let relations: Vec<(ArcWord, ArcWord)> = source
        .crossings()
        .iter()
        .map(|cr| {
            let ini = &a.map[&label(cr.under_initial(conv))];
            let over = &a.map[&label(cr.over_edge())];
            let ter = &a.map[&label(cr.under_terminal(conv))];
            (ini.apply(over, 1), ter.clone())
        })
        .collect();
    let mut report = AssignmentReport {
        relations_checked: relations.len(),
        colourings_checked: 0,
        witnesses: vec![],
    };
    for (name, x) in tests {
        for c in target.enumerate_colourings(x, conv) {
            report.colourings_checked += 1;
            for (i, (lhs, rhs)) in relations.iter().enumerate() {
                let l = lhs.evaluate(&c)?;
                let r = rhs.evaluate(&c)?;
                if l != r {
                    report.witnesses.push(AssignmentWitness {
                        quandle: name.clone(),
                        crossing: i,
                        colouring: c.edge_colours.clone(),
                        lhs: l,
                        rhs: r,
                    });
                }
            }
        }
    }
    Ok(report)
}

/// Region words for the canonical symbolic shadow colouring: start from the
/// base region and relax across edges until every region carries its minimal
/// word (by size, then lexicographically), reducing with the diagram's own
/// relations at each step.
pub fn symbolic_region_words(
    d: &OrientedDiagram,
    regions: &RegionMap,
    base_word: &ArcWord,
    conv: Conventions,
) -> Vec<ArcWord> {
    let classes = d.arc_classes();
    let class_of = d.class_index(&classes);
    let label = |e: Edge| classes[class_of[&e]][0];
    let rels = RelationTable::from_diagram(d, conv);
    let mut best: Vec<Option<ArcWord>> = vec![None; regions.num_regions];
    best[regions.base_region] = Some(rels.reduce(&base_word.normalize()));
    let key = |w: &ArcWord| (w.size(), w.clone());
    let mut changed = true;
    while changed {
        changed = false;
        for e in d.edges() {
            let x = ArcWord::generator(label(e));
            let (src, dst) = match conv.normal {
                NormalSide::Left => (regions.right_of[&e], regions.left_of[&e]),
                NormalSide::Right => (regions.left_of[&e], regions.right_of[&e]),
            };
            for (from, to, exp) in [(src, dst, 1i8), (dst, src, -1i8)] {
                let Some(w) = best[from].clone() else { continue };
                let cand = rels.reduce(&w.apply(&x, exp));
                let better = match &best[to] {
                    None => true,
                    Some(cur) => key(&cand) < key(cur),
                };
                if better {
                    best[to] = Some(cand);
                    changed = true;
                }
            }
        }
    }
    best.into_iter()
        .map(|w| w.expect("sphere regions are all reachable"))
        .collect()
}

/// The degree-2 chain of the canonical symbolic colouring.
pub fn symbolic_diagram_chain(d: &OrientedDiagram, conv: Conventions) -> Chain<ArcWord> {
    let classes = d.arc_classes();
    let class_of = d.class_index(&classes);
    let label = |e: Edge| classes[class_of[&e]][0];
    let mut chain = Chain::zero(2, Theory::Rack, Ring::Int);
    for cr in d.crossings() {
        chain.add_term(
            vec![
                ArcWord::generator(label(cr.under_initial(conv))),
                ArcWord::generator(label(cr.over_edge())),
            ],
            BigInt::from(cr.sign(conv)),
        );
    }
    chain
}

/// The degree-3 symbolic shadow chain: per crossing,
/// `ε · (region word of r^ini, arc generator of u^ini, arc generator of o)`.
pub fn symbolic_shadow_chain(
    d: &OrientedDiagram,
    regions: &RegionMap,
    base_word: &ArcWord,
    conv: Conventions,
) -> Chain<ArcWord> {
    let classes = d.arc_classes();
    let class_of = d.class_index(&classes);
    let label = |e: Edge| classes[class_of[&e]][0];
    let words = symbolic_region_words(d, regions, base_word, conv);
    let mut chain = Chain::zero(3, Theory::Rack, Ring::Int);
    for rec in d.crossing_records(regions, conv) {
        chain.add_term(
            vec![
                words[rec.source_region].clone(),
                ArcWord::generator(label(rec.under_initial)),
                ArcWord::generator(label(rec.over)),
            ],
            BigInt::from(rec.sign),
        );
    }
    chain
}

/// Evaluate a symbolic chain under a colouring of the target diagram.
pub fn evaluate_chain(
    c: &Chain<ArcWord>,
    colouring: &crate::diagram::Colouring,
) -> Result<Chain<El>, WirtingerError> {
    let mut out = Chain::zero(c.degree(), c.theory(), c.ring());
    for (t, coeff) in c.terms() {
        let tuple: Vec<El> = t
            .iter()
            .map(|w| w.evaluate(colouring))
            .collect::<Result<_, _>>()?;
        out.add_term(tuple, coeff.clone());
    }
    Ok(out)
}

/// Substitute an assignment into every entry of a symbolic chain.
pub fn pushforward(
    c: &Chain<ArcWord>,
    a: &WordAssignment,
) -> Result<Chain<ArcWord>, WirtingerError> {
    let mut out = Chain::zero(c.degree(), c.theory(), c.ring());
    for (t, coeff) in c.terms() {
        let tuple: Vec<ArcWord> = t
            .iter()
            .map(|w| w.substitute(&a.map))
            .collect::<Result<_, _>>()?;
        out.add_term(tuple, coeff.clone());
    }
    Ok(out)
}
