//! Oriented PD-coded link diagrams on the sphere: parsing and validation,
//! region enumeration, crossing signs, colouring enumeration, shadow-colour
//! propagation, and chain extraction.
//!
//! Conventions are explicit and toggleable (see [`Conventions`]); the
//! defaults are the calibrated pair that reproduces the worked figure-eight
//! computation, and the calibration is pinned by tests.

use crate::chain::{Chain, Ring, Theory};
use crate::quandle::Quandle;
use crate::El;
use num_bigint::BigInt;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

pub type Edge = usize;
pub type RegionId = usize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DiagramError {
    #[error("malformed diagram: {0}")]
    Malformed(String),
    #[error("edge usage mismatch: {0}")]
    EdgeCountMismatch(String),
    #[error("diagram is not planar: V={0} E={1} F={2}")]
    NotPlanar(usize, usize, usize),
    #[error("under-strand broken at crossing {0}: {1} does not precede {2}")]
    UnderStrandBroken(usize, Edge, Edge),
    #[error("over-strand directions cannot be matched to the component cycles")]
    OverStrandUnresolved,
    #[error("shadow propagation inconsistent across edge {0}")]
    InconsistentShadow(Edge),
    #[error("colouring does not satisfy the crossing conditions")]
    InvalidColouring,
    #[error("no such region {0}")]
    NoSuchRegion(RegionId),
    #[error("no such edge {0}")]
    NoSuchEdge(Edge),
}

/// Which side of an oriented strand the normal points to. The terminal
/// region of an edge lies on the normal side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormalSide {
    Left,
    Right,
}

/// The two residual global conventions the source text fixes only through
/// pictures: the normal side and the sign frame. The defaults are the unique
/// pair that reproduces the published figure-eight chain; flipping either is
/// available for diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Conventions {
    pub normal: NormalSide,
    pub positive_frame: bool,
}

impl Default for Conventions {
    fn default() -> Self {
        Conventions { normal: NormalSide::Left, positive_frame: true }
    }
}

impl Conventions {
    pub fn all() -> [Conventions; 4] {
        [
            Conventions { normal: NormalSide::Left, positive_frame: true },
            Conventions { normal: NormalSide::Left, positive_frame: false },
            Conventions { normal: NormalSide::Right, positive_frame: true },
            Conventions { normal: NormalSide::Right, positive_frame: false },
        ]
    }
}

/// One crossing: edge labels counterclockwise starting at the incoming
/// under-edge, with the over-strand direction resolved against the component
/// cycles (`over_db`: the over-strand runs from position 3 to position 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Crossing {
    pub quad: [Edge; 4],
    pub over_db: bool,
}

impl Crossing {
    /// ε under the chosen sign frame: in the standard frame the crossing is
    /// positive exactly when the over-strand runs d→b (positively oriented
    /// (over, under) frame in the counterclockwise layout).
    pub fn sign(&self, conv: Conventions) -> i8 {
        let s = if self.over_db { 1 } else { -1 };
        if conv.positive_frame {
            s
        } else {
            -s
        }
    }

    pub fn over_edge(&self) -> Edge {
        self.quad[1]
    }

    /// The initial under-edge: the under part on the non-normal side of the
    /// over-strand.
    pub fn under_initial(&self, conv: Conventions) -> Edge {
        let head_first = match conv.normal {
            NormalSide::Left => self.over_db,
            NormalSide::Right => !self.over_db,
        };
        if head_first {
            self.quad[0]
        } else {
            self.quad[2]
        }
    }

    pub fn under_terminal(&self, conv: Conventions) -> Edge {
        if self.under_initial(conv) == self.quad[0] {
            self.quad[2]
        } else {
            self.quad[0]
        }
    }

    /// Corner index (between positions k and k+1) of the source region: the
    /// unique corner whose two bounding strand-germs both have normals
    /// pointing away.
    pub fn source_corner(&self, conv: Conventions) -> usize {
        match (conv.normal, self.over_db) {
            (NormalSide::Left, true) => 0,
            (NormalSide::Left, false) => 1,
            (NormalSide::Right, true) => 2,
            (NormalSide::Right, false) => 3,
        }
    }
}

/// A validated oriented link diagram on the sphere.
#[derive(Debug, Clone)]
pub struct OrientedDiagram {
    num_edges: usize,
    components: Vec<Vec<Edge>>,
    crossings: Vec<Crossing>,
    /// Successor edge along the link orientation.
    succ: BTreeMap<Edge, Edge>,
}

/// Where an edge end attaches: (crossing index, position 0..4).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct EdgeEnd {
    crossing: usize,
    pos: usize,
}

impl OrientedDiagram {
    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    pub fn components(&self) -> &[Vec<Edge>] {
        &self.components
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn is_unknot_form(&self) -> bool {
        self.crossings.is_empty()
    }

    /// The edge following `e` along its component.
    pub fn next_edge(&self, e: Edge) -> Edge {
        self.succ[&e]
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.components.iter().flatten().copied()
    }

    pub fn writhe(&self, conv: Conventions) -> i64 {
        self.crossings.iter().map(|c| c.sign(conv) as i64).sum()
    }

    pub fn parse_pd(text: &str) -> Result<Self, DiagramError> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| DiagramError::Malformed("empty file".into()))?;
        let num_edges: usize = header
            .strip_prefix("pd ")
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| DiagramError::Malformed(format!("bad header {header:?}")))?;
        let body: Vec<&str> = lines.collect();
        if body.iter().all(|l| *l == "unknot") && !body.is_empty() {
            // 0-crossing components; one closed arc each, drawn disjointly.
            if body.len() != num_edges {
                return Err(DiagramError::EdgeCountMismatch(format!(
                    "{} unknot components but {num_edges} edges declared",
                    body.len()
                )));
            }
            let components: Vec<Vec<Edge>> = (1..=num_edges).map(|e| vec![e]).collect();
            let succ = (1..=num_edges).map(|e| (e, e)).collect();
            return Ok(OrientedDiagram { num_edges, components, crossings: vec![], succ });
        }
        let comp_line = body
            .first()
            .ok_or_else(|| DiagramError::Malformed("missing components line".into()))?;
        let comp_body = comp_line
            .strip_prefix("components:")
            .ok_or_else(|| DiagramError::Malformed(format!("bad components line {comp_line:?}")))?;
        let mut components = Vec::new();
        for cycle in comp_body.split(';') {
            let cycle = cycle.trim();
            let inner = cycle
                .strip_prefix('[')
                .and_then(|s| s.strip_suffix(']'))
                .ok_or_else(|| DiagramError::Malformed(format!("bad component {cycle:?}")))?;
            let edges: Vec<Edge> = inner
                .split(',')
                .map(|s| s.trim().parse())
                .collect::<Result<_, _>>()
                .map_err(|_| DiagramError::Malformed(format!("bad component {cycle:?}")))?;
            if edges.is_empty() {
                return Err(DiagramError::Malformed("empty component".into()));
            }
            components.push(edges);
        }
        let mut quads = Vec::new();
        for line in &body[1..] {
            let rest = line
                .strip_prefix('X')
                .ok_or_else(|| DiagramError::Malformed(format!("bad crossing line {line:?}")))?;
            let nums: Vec<Edge> = rest
                .split_whitespace()
                .map(|s| s.parse())
                .collect::<Result<_, _>>()
                .map_err(|_| DiagramError::Malformed(format!("bad crossing line {line:?}")))?;
            let quad: [Edge; 4] = nums
                .try_into()
                .map_err(|_| DiagramError::Malformed(format!("crossing needs 4 edges: {line:?}")))?;
            quads.push(quad);
        }
        Self::build(num_edges, components, quads)
    }

    /// The PD file format back out; `parse_pd ∘ dump_pd` is the identity.
    pub fn dump_pd(&self) -> String {
        let mut out = format!("pd {}\n", self.num_edges);
        if self.crossings.is_empty() {
            for _ in &self.components {
                out.push_str("unknot\n");
            }
            return out;
        }
        let cycles: Vec<String> = self
            .components
            .iter()
            .map(|c| {
                let edges: Vec<String> = c.iter().map(Edge::to_string).collect();
                format!("[{}]", edges.join(","))
            })
            .collect();
        out.push_str(&format!("components: {}\n", cycles.join(";")));
        for c in &self.crossings {
            let [a, b, cc, d] = c.quad;
            out.push_str(&format!("X {a} {b} {cc} {d}\n"));
        }
        out
    }

    fn build(
        num_edges: usize,
        components: Vec<Vec<Edge>>,
        quads: Vec<[Edge; 4]>,
    ) -> Result<Self, DiagramError> {
        // Edge labels 1..=num_edges, once each in the cycles, twice in quads.
        let mut seen = BTreeSet::new();
        for &e in components.iter().flatten() {
            if e == 0 || e > num_edges {
                return Err(DiagramError::Malformed(format!("edge label {e} out of range")));
            }
            if !seen.insert(e) {
                return Err(DiagramError::EdgeCountMismatch(format!(
                    "edge {e} repeated in component cycles"
                )));
            }
        }
        if seen.len() != num_edges {
            return Err(DiagramError::EdgeCountMismatch(format!(
                "{} edges in components, {num_edges} declared",
                seen.len()
            )));
        }
        if quads.len() * 2 != num_edges {
            return Err(DiagramError::EdgeCountMismatch(format!(
                "{} crossings need {} edges, {num_edges} declared",
                quads.len(),
                quads.len() * 2
            )));
        }
        let mut usage: BTreeMap<Edge, usize> = BTreeMap::new();
        for quad in &quads {
            for &e in quad {
                *usage.entry(e).or_insert(0) += 1;
            }
        }
        for (&e, &n) in &usage {
            if n != 2 || !seen.contains(&e) {
                return Err(DiagramError::EdgeCountMismatch(format!(
                    "edge {e} used {n} times in crossings"
                )));
            }
        }
        if usage.len() != num_edges {
            return Err(DiagramError::EdgeCountMismatch(format!(
                "{} distinct edges in crossings, {num_edges} declared",
                usage.len()
            )));
        }
        let mut succ = BTreeMap::new();
        for cycle in &components {
            for (i, &e) in cycle.iter().enumerate() {
                succ.insert(e, cycle[(i + 1) % cycle.len()]);
            }
        }
        for (i, quad) in quads.iter().enumerate() {
            if succ[&quad[0]] != quad[2] {
                return Err(DiagramError::UnderStrandBroken(i, quad[0], quad[2]));
            }
        }
        let over = resolve_over_directions(&quads, &succ)?;
        let crossings = quads
            .into_iter()
            .zip(over)
            .map(|(quad, over_db)| Crossing { quad, over_db })
            .collect();
        let d = OrientedDiagram { num_edges, components, crossings, succ };
        d.regions()?; // planarity certificate
        Ok(d)
    }

    /// Each edge's two attachment ends (head: arrives at the crossing;
    /// tail: departs from it).
    fn edge_ends(&self) -> (BTreeMap<Edge, EdgeEnd>, BTreeMap<Edge, EdgeEnd>) {
        let mut head = BTreeMap::new();
        let mut tail = BTreeMap::new();
        for (ci, c) in self.crossings.iter().enumerate() {
            // Under-strand: a arrives, c departs.
            head.insert(c.quad[0], EdgeEnd { crossing: ci, pos: 0 });
            tail.insert(c.quad[2], EdgeEnd { crossing: ci, pos: 2 });
            // Over-strand per resolved direction.
            let (h, t) = if c.over_db { (3, 1) } else { (1, 3) };
            head.insert(c.quad[h], EdgeEnd { crossing: ci, pos: h });
            tail.insert(c.quad[t], EdgeEnd { crossing: ci, pos: t });
        }
        (head, tail)
    }

    /// Enumerate the complementary regions by corner rotation, returning the
    /// deterministic region map. Also serves as the planarity certificate.
    pub fn regions(&self) -> Result<RegionMap, DiagramError> {
        if self.is_unknot_form() {
            // Disjoint circles, drawn side by side: each circle's left side
            // bounds its own inner region, all right sides share the outer.
            let k = self.components.len();
            let mut left_of = BTreeMap::new();
            let mut right_of = BTreeMap::new();
            // Numbering by least (edge, side) with Left < Right: the inner
            // region of circle 1 first, then the shared outer, then the rest.
            left_of.insert(1, 0);
            right_of.insert(1, 1);
            for e in 2..=k {
                left_of.insert(e, e); // inner region of circle e
                right_of.insert(e, 1);
            }
            let num_regions = k + 1;
            return Ok(RegionMap {
                num_regions,
                left_of,
                right_of,
                corner_region: BTreeMap::new(),
                base_region: 1,
            });
        }
        let (head, tail) = self.edge_ends();
        // Corners are (crossing, k) between positions k and k+1; union by
        // the two corners flanking each side of each edge.
        let n_corners = self.crossings.len() * 4;
        let corner_id = |end: EdgeEnd, k: usize| end.crossing * 4 + k;
        let mut uf = UnionFind::new(n_corners);
        let mut side_corner: BTreeMap<(Edge, Side), usize> = BTreeMap::new();
        for e in self.edges() {
            let h = head[&e];
            let t = tail[&e];
            // Left of the oriented edge: the tail's counterclockwise-next
            // corner and the head's counterclockwise-previous corner.
            let l1 = corner_id(t, t.pos);
            let l2 = corner_id(h, (h.pos + 3) % 4);
            uf.union(l1, l2);
            side_corner.insert((e, Side::Left), l1);
            let r1 = corner_id(t, (t.pos + 3) % 4);
            let r2 = corner_id(h, h.pos);
            uf.union(r1, r2);
            side_corner.insert((e, Side::Right), r1);
        }
        // Deterministic numbering by least (edge, side), Left < Right.
        let mut root_to_region: BTreeMap<usize, RegionId> = BTreeMap::new();
        for (&(_, _), &corner) in &side_corner {
            let root = uf.find(corner);
            let next = root_to_region.len();
            root_to_region.entry(root).or_insert(next);
        }
        let num_regions = root_to_region.len();
        let v = self.crossings.len();
        let e = self.num_edges;
        if v + num_regions != e + 2 {
            return Err(DiagramError::NotPlanar(v, e, num_regions));
        }
        let mut left_of = BTreeMap::new();
        let mut right_of = BTreeMap::new();
        for (&(edge, side), &corner) in &side_corner {
            let r = root_to_region[&uf.find(corner)];
            match side {
                Side::Left => left_of.insert(edge, r),
                Side::Right => right_of.insert(edge, r),
            };
        }
        let mut corner_region = BTreeMap::new();
        for ci in 0..self.crossings.len() {
            for k in 0..4 {
                corner_region.insert((ci, k), root_to_region[&uf.find(ci * 4 + k)]);
            }
        }
        let base_region = right_of[&1];
        Ok(RegionMap { num_regions, left_of, right_of, corner_region, base_region })
    }

    /// All X-colourings, sorted lexicographically by edge-colour vector.
    pub fn enumerate_colourings(&self, x: &Quandle, conv: Conventions) -> Vec<Colouring> {
        let classes = self.arc_classes();
        let class_of = self.class_index(&classes);
        // Constraints (C): class(u_ter) = class(u_ini) ◁ class(over).
        let constraints: Vec<(usize, usize, usize)> = self
            .crossings
            .iter()
            .map(|c| {
                (
                    class_of[&c.under_initial(conv)],
                    class_of[&c.over_edge()],
                    class_of[&c.under_terminal(conv)],
                )
            })
            .collect();
        let mut out = Vec::new();
        let mut assign = vec![usize::MAX; classes.len()];
        backtrack(x, &constraints, &mut assign, 0, &mut |assign| {
            let mut edge_colours = BTreeMap::new();
            for e in self.edges() {
                edge_colours.insert(e, assign[class_of[&e]]);
            }
            out.push(Colouring { quandle: x.clone(), edge_colours });
        });
        out.sort_by(|a, b| {
            let va: Vec<El> = a.edge_colours.values().copied().collect();
            let vb: Vec<El> = b.edge_colours.values().copied().collect();
            va.cmp(&vb)
        });
        out
    }

    /// Wirtinger arcs: over-constancy classes of edges, sorted by least edge.
    pub fn arc_classes(&self) -> Vec<Vec<Edge>> {
        let edges: Vec<Edge> = self.edges().collect();
        let pos: BTreeMap<Edge, usize> = edges.iter().copied().zip(0..).collect();
        let mut uf = UnionFind::new(edges.len());
        for c in &self.crossings {
            uf.union(pos[&c.quad[1]], pos[&c.quad[3]]);
        }
        let mut by_root: BTreeMap<usize, Vec<Edge>> = BTreeMap::new();
        for &e in &edges {
            by_root.entry(uf.find(pos[&e])).or_default().push(e);
        }
        let mut classes: Vec<Vec<Edge>> = by_root
            .into_values()
            .map(|mut v| {
                v.sort_unstable();
                v
            })
            .collect();
        classes.sort_by_key(|c| c[0]);
        classes
    }

    pub fn class_index(&self, classes: &[Vec<Edge>]) -> BTreeMap<Edge, usize> {
        let mut m = BTreeMap::new();
        for (i, class) in classes.iter().enumerate() {
            for &e in class {
                m.insert(e, i);
            }
        }
        m
    }

    /// Check (C) and over-constancy for an externally supplied colouring.
    pub fn check_colouring(&self, c: &Colouring, conv: Conventions) -> Result<(), DiagramError> {
        for e in self.edges() {
            if !c.edge_colours.contains_key(&e) {
                return Err(DiagramError::NoSuchEdge(e));
            }
        }
        for cr in &self.crossings {
            if c.colour(cr.quad[1]) != c.colour(cr.quad[3]) {
                return Err(DiagramError::InvalidColouring);
            }
            let expect = c
                .quandle
                .tri(c.colour(cr.under_initial(conv)), c.colour(cr.over_edge()));
            if c.colour(cr.under_terminal(conv)) != expect {
                return Err(DiagramError::InvalidColouring);
            }
        }
        Ok(())
    }

    /// Propagate a base-region colour to a full shadow colouring via (SC),
    /// verifying consistency on every edge.
    pub fn shadow_extend(
        &self,
        regions: &RegionMap,
        c: &Colouring,
        base_colour: El,
        conv: Conventions,
    ) -> Result<ShadowColouring, DiagramError> {
        self.check_colouring(c, conv)?;
        let q = &c.quandle;
        let mut colour: Vec<Option<El>> = vec![None; regions.num_regions];
        colour[regions.base_region] = Some(base_colour);
        let mut queue = vec![regions.base_region];
        while let Some(r) = queue.pop() {
            let v = colour[r].unwrap();
            for e in self.edges() {
                let (l, rgt) = (regions.left_of[&e], regions.right_of[&e]);
                let x = c.colour(e);
                // (SC): the colour on the normal side is the other side ◁ x.
                let (src, dst) = match conv.normal {
                    NormalSide::Left => (rgt, l),
                    NormalSide::Right => (l, rgt),
                };
                for (from, to, forward) in [(src, dst, true), (dst, src, false)] {
                    if from != r {
                        continue;
                    }
                    let w = if forward { q.tri(v, x) } else { q.tri_inv(v, x) };
                    match colour[to] {
                        None => {
                            colour[to] = Some(w);
                            queue.push(to);
                        }
                        Some(existing) if existing != w => {
                            return Err(DiagramError::InconsistentShadow(e));
                        }
                        Some(_) => {}
                    }
                }
            }
        }
        let region_colours: Vec<El> = colour
            .into_iter()
            .collect::<Option<Vec<El>>>()
            .ok_or(DiagramError::InconsistentShadow(0))?;
        // Full re-verification of (SC).
        for e in self.edges() {
            let (l, rgt) = (regions.left_of[&e], regions.right_of[&e]);
            let (ini, ter) = match conv.normal {
                NormalSide::Left => (rgt, l),
                NormalSide::Right => (l, rgt),
            };
            if region_colours[ter] != q.tri(region_colours[ini], c.colour(e)) {
                return Err(DiagramError::InconsistentShadow(e));
            }
        }
        Ok(ShadowColouring { colouring: c.clone(), region_colours })
    }

    /// The degree-2 rack chain `Σ_p ε_p · (colour(u^ini), colour(over))`;
    /// always a rack cycle (asserted).
    pub fn diagram_chain(&self, c: &Colouring, conv: Conventions) -> Chain<El> {
        let mut chain = Chain::zero(2, Theory::Rack, Ring::Int);
        for cr in &self.crossings {
            chain.add_term(
                vec![c.colour(cr.under_initial(conv)), c.colour(cr.over_edge())],
                BigInt::from(cr.sign(conv)),
            );
        }
        if self.check_colouring(c, conv).is_ok() {
            let d = chain.boundary(&c.quandle).expect("degree 2");
            assert!(d.is_zero(), "diagram chain is not a cycle");
        }
        chain
    }

    /// The degree-3 rack chain
    /// `Σ_p ε_p · (shadow(r^ini), colour(u^ini), colour(over))`.
    pub fn shadow_chain(
        &self,
        regions: &RegionMap,
        sc: &ShadowColouring,
        conv: Conventions,
    ) -> Chain<El> {
        let c = &sc.colouring;
        let mut chain = Chain::zero(3, Theory::Rack, Ring::Int);
        for (ci, cr) in self.crossings.iter().enumerate() {
            let corner = cr.source_corner(conv);
            let r = regions.corner_region[&(ci, corner)];
            chain.add_term(
                vec![
                    sc.region_colours[r],
                    c.colour(cr.under_initial(conv)),
                    c.colour(cr.over_edge()),
                ],
                BigInt::from(cr.sign(conv)),
            );
        }
        let d = chain.boundary(&c.quandle).expect("degree 3");
        assert!(d.is_zero(), "shadow chain is not a cycle");
        chain
    }

    /// Per-crossing records for state sums and symbolic extraction.
    pub fn crossing_records(
        &self,
        regions: &RegionMap,
        conv: Conventions,
    ) -> Vec<CrossingRecord> {
        self.crossings
            .iter()
            .enumerate()
            .map(|(ci, cr)| CrossingRecord {
                sign: cr.sign(conv),
                source_region: regions.corner_region[&(ci, cr.source_corner(conv))],
                under_initial: cr.under_initial(conv),
                over: cr.over_edge(),
            })
            .collect()
    }
}

/// What a crossing contributes to weights and chains.
#[derive(Debug, Clone, Copy)]
pub struct CrossingRecord {
    pub sign: i8,
    pub source_region: RegionId,
    pub under_initial: Edge,
    pub over: Edge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Side {
    Left,
    Right,
}

/// The complementary regions of a diagram, with deterministic ids.
#[derive(Debug, Clone)]
pub struct RegionMap {
    pub num_regions: usize,
    pub left_of: BTreeMap<Edge, RegionId>,
    pub right_of: BTreeMap<Edge, RegionId>,
    /// Region at corner (crossing, k) between quad positions k and k+1.
    pub corner_region: BTreeMap<(usize, usize), RegionId>,
    pub base_region: RegionId,
}

impl RegionMap {
    pub fn with_base(mut self, base: RegionId) -> Result<Self, DiagramError> {
        if base >= self.num_regions {
            return Err(DiagramError::NoSuchRegion(base));
        }
        self.base_region = base;
        Ok(self)
    }

    /// The source region of an edge: the one on its non-normal side.
    pub fn edge_source_region(&self, e: Edge, conv: Conventions) -> Option<RegionId> {
        match conv.normal {
            NormalSide::Left => self.right_of.get(&e).copied(),
            NormalSide::Right => self.left_of.get(&e).copied(),
        }
    }
}

/// An X-colouring of the edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Colouring {
    pub quandle: Quandle,
    pub edge_colours: BTreeMap<Edge, El>,
}

impl Colouring {
    pub fn colour(&self, e: Edge) -> El {
        self.edge_colours[&e]
    }

    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (e, x) in &self.edge_colours {
            out.push_str(&format!("edge {e} -> {x}\n"));
        }
        out
    }
}

/// A colouring together with compatible region colours.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShadowColouring {
    pub colouring: Colouring,
    pub region_colours: Vec<El>,
}

impl ShadowColouring {
    pub fn dump(&self) -> String {
        let mut out = self.colouring.dump();
        for (r, x) in self.region_colours.iter().enumerate() {
            out.push_str(&format!("region {r} -> {x}\n"));
        }
        out
    }
}

fn backtrack(
    x: &Quandle,
    constraints: &[(usize, usize, usize)],
    assign: &mut Vec<usize>,
    next: usize,
    emit: &mut impl FnMut(&[usize]),
) {
    if next == assign.len() {
        emit(assign);
        return;
    }
    'colour: for v in 0..x.size() {
        assign[next] = v;
        for &(ini, over, ter) in constraints {
            if ini <= next && over <= next && ter <= next {
                if x.tri(assign[ini], assign[over]) != assign[ter] {
                    assign[next] = usize::MAX;
                    continue 'colour;
                }
            }
        }
        backtrack(x, constraints, assign, next + 1, emit);
        assign[next] = usize::MAX;
    }
}

/// Resolve per-crossing over-strand directions so that the crossing visits
/// exactly cover the consecutive-edge pairs of the component cycles.
fn resolve_over_directions(
    quads: &[[Edge; 4]],
    succ: &BTreeMap<Edge, Edge>,
) -> Result<Vec<bool>, DiagramError> {
    let mut need: BTreeMap<(Edge, Edge), i64> = BTreeMap::new();
    for (&e, &f) in succ {
        *need.entry((e, f)).or_insert(0) += 1;
    }
    // Under visits are forced.
    for quad in quads {
        let pair = (quad[0], quad[2]);
        let slot = need.get_mut(&pair).ok_or(DiagramError::OverStrandUnresolved)?;
        *slot -= 1;
        if *slot < 0 {
            return Err(DiagramError::OverStrandUnresolved);
        }
    }
    fn rec(
        quads: &[[Edge; 4]],
        i: usize,
        need: &mut BTreeMap<(Edge, Edge), i64>,
        choice: &mut Vec<bool>,
    ) -> bool {
        let Some(quad) = quads.get(i) else {
            return need.values().all(|&v| v == 0);
        };
        // over_db: d→b; otherwise b→d.
        for (pair, over_db) in [((quad[3], quad[1]), true), ((quad[1], quad[3]), false)] {
            if let Some(slot) = need.get_mut(&pair) {
                if *slot > 0 {
                    *slot -= 1;
                    choice.push(over_db);
                    if rec(quads, i + 1, need, choice) {
                        return true;
                    }
                    choice.pop();
                    *need.get_mut(&pair).unwrap() += 1;
                }
            }
        }
        false
    }
    let mut choice = Vec::with_capacity(quads.len());
    if rec(quads, 0, &mut need, &mut choice) {
        Ok(choice)
    } else {
        Err(DiagramError::OverStrandUnresolved)
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub const TREFOIL: &str = "pd 6\ncomponents: [1,2,3,4,5,6]\nX 1 5 2 4\nX 3 1 4 6\nX 5 3 6 2\n";
    pub const FIG8: &str =
        "pd 8\ncomponents: [1,2,3,4,5,6,7,8]\nX 4 2 5 1\nX 8 6 1 5\nX 6 3 7 4\nX 2 7 3 8\n";
    pub const HOPF: &str = "pd 4\ncomponents: [1,2];[3,4]\nX 1 4 2 3\nX 3 2 4 1\n";
    pub const UNKNOT: &str = "pd 1\nunknot\n";

    fn conv() -> Conventions {
        Conventions::default()
    }

    fn z3() -> Quandle {
        Quandle::dihedral(3).unwrap()
    }

    #[test]
    fn parse_and_regions() {
        let d = OrientedDiagram::parse_pd(TREFOIL).unwrap();
        assert_eq!(d.crossings().len(), 3);
        assert_eq!(d.regions().unwrap().num_regions, 5);
        let d = OrientedDiagram::parse_pd(FIG8).unwrap();
        assert_eq!(d.regions().unwrap().num_regions, 6);
        let d = OrientedDiagram::parse_pd(UNKNOT).unwrap();
        assert!(d.is_unknot_form());
        assert_eq!(d.regions().unwrap().num_regions, 2);
    }

    #[test]
    fn bad_edge_usage_rejected() {
        let bad = "pd 6\ncomponents: [1,2,3,4,5,6]\nX 1 5 2 5\nX 3 1 4 6\nX 5 3 6 2\n";
        assert!(matches!(
            OrientedDiagram::parse_pd(bad),
            Err(DiagramError::EdgeCountMismatch(_))
        ));
    }

    #[test]
    fn crossing_signs() {
        let d = OrientedDiagram::parse_pd(TREFOIL).unwrap();
        for c in d.crossings() {
            assert_eq!(c.sign(conv()), 1);
        }
        assert_eq!(d.writhe(conv()), 3);
        let d = OrientedDiagram::parse_pd(FIG8).unwrap();
        let signs: Vec<i8> = d.crossings().iter().map(|c| c.sign(conv())).collect();
        assert_eq!(signs.iter().filter(|&&s| s == 1).count(), 2);
        assert_eq!(d.writhe(conv()), 0);
        let d = OrientedDiagram::parse_pd(HOPF).unwrap();
        assert_eq!(d.writhe(conv()), -2);
    }

    #[test]
    fn colouring_counts() {
        let d = OrientedDiagram::parse_pd(TREFOIL).unwrap();
        assert_eq!(d.enumerate_colourings(&z3(), conv()).len(), 9);
        let t2 = Quandle::trivial(2).unwrap();
        assert_eq!(d.enumerate_colourings(&t2, conv()).len(), 2);
        let d = OrientedDiagram::parse_pd(FIG8).unwrap();
        assert_eq!(d.enumerate_colourings(&z3(), conv()).len(), 3);
        let z5 = Quandle::dihedral(5).unwrap();
        assert_eq!(d.enumerate_colourings(&z5, conv()).len(), 25);
    }

    #[test]
    fn colourings_satisfy_conditions_and_brute_force_agrees() {
        let q = z3();
        for text in [TREFOIL, FIG8, HOPF] {
            let d = OrientedDiagram::parse_pd(text).unwrap();
            let fast = d.enumerate_colourings(&q, conv());
            for c in &fast {
                d.check_colouring(c, conv()).unwrap();
            }
            // Brute force over all edge assignments.
            let edges: Vec<Edge> = d.edges().collect();
            let mut brute = 0;
            let total = q.size().pow(edges.len() as u32);
            for mut code in 0..total {
                let mut ec = BTreeMap::new();
                for &e in &edges {
                    ec.insert(e, code % q.size());
                    code /= q.size();
                }
                let c = Colouring { quandle: q.clone(), edge_colours: ec };
                if d.check_colouring(&c, conv()).is_ok() {
                    brute += 1;
                }
            }
            assert_eq!(fast.len(), brute, "{text}");
        }
    }

    #[test]
    fn shadow_extension_counts() {
        let q = z3();
        let d = OrientedDiagram::parse_pd(TREFOIL).unwrap();
        let regions = d.regions().unwrap();
        let mut count = 0;
        for c in d.enumerate_colourings(&q, conv()) {
            for a in 0..q.size() {
                let sc = d.shadow_extend(&regions, &c, a, conv()).unwrap();
                assert_eq!(sc.region_colours[regions.base_region], a);
                count += 1;
            }
        }
        assert_eq!(count, 27);
    }

    #[test]
    fn unknot_shadow() {
        let q = z3();
        let d = OrientedDiagram::parse_pd(UNKNOT).unwrap();
        let regions = d.regions().unwrap();
        let c = Colouring { quandle: q.clone(), edge_colours: [(1, 1)].into() };
        let sc = d.shadow_extend(&regions, &c, 0, conv()).unwrap();
        // Base is the right side; the left side is α ◁ x = 0 ◁ 1 = 2.
        assert_eq!(sc.region_colours[regions.base_region], 0);
        assert_eq!(sc.region_colours[regions.left_of[&1]], q.tri(0, 1));
        assert!(d.diagram_chain(&c, conv()).is_zero());
        assert!(d.shadow_chain(&regions, &sc, conv()).is_zero());
    }

    #[test]
    fn chains_are_cycles() {
        let q = z3();
        for text in [TREFOIL, FIG8, HOPF] {
            let d = OrientedDiagram::parse_pd(text).unwrap();
            let regions = d.regions().unwrap();
            for c in d.enumerate_colourings(&q, conv()) {
                let ch2 = d.diagram_chain(&c, conv());
                assert!(ch2.boundary(&q).unwrap().is_zero());
                for a in 0..q.size() {
                    let sc = d.shadow_extend(&regions, &c, a, conv()).unwrap();
                    let ch3 = d.shadow_chain(&regions, &sc, conv());
                    assert!(ch3.boundary(&q).unwrap().is_zero());
                    // σ compatibility: dropping the shadow recovers the
                    // diagram chain.
                    assert_eq!(ch3.shift().unwrap(), ch2);
                }
            }
        }
    }

    #[test]
    fn trefoil_constant_colouring_chain() {
        let q = z3();
        let d = OrientedDiagram::parse_pd(TREFOIL).unwrap();
        let ec: BTreeMap<Edge, El> = d.edges().map(|e| (e, 1)).collect();
        let c = Colouring { quandle: q.clone(), edge_colours: ec };
        let ch = d.diagram_chain(&c, conv());
        assert_eq!(ch.coeff(&[1, 1]), BigInt::from(3));
        assert_eq!(ch.num_terms(), 1);
    }

    #[test]
    fn convention_toggles_change_signs() {
        let d = OrientedDiagram::parse_pd(TREFOIL).unwrap();
        let flipped = Conventions { normal: NormalSide::Left, positive_frame: false };
        assert_eq!(d.writhe(flipped), -3);
    }
}
