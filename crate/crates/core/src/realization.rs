//! Realize a rack 3-cycle as a shadow-coloured diagram on a closed oriented
//! surface by gluing unit squares along faces with opposite chains.
//!
//! Each signed square carries the face-chain table forced by the requirement
//! that the outward boundary sum of a square's faces equals ε·∂₃ of its
//! tuple; that identity is asserted per square, so the residual sign freedom
//! in the pictorial source is pinned here.

use crate::chain::{Chain, ChainError, Ring, Theory};
use crate::quandle::Quandle;
use crate::El;
use num_bigint::BigInt;
use num_traits::Signed;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RealizationError {
    #[error("chain is not a cycle; ∂c has {0} terms")]
    NotACycle(usize),
    #[error("realization needs integer coefficients")]
    NonIntegerCoefficients,
    #[error("face multiset does not cancel (internal invariant)")]
    UnmatchedFace,
    #[error(transparent)]
    Chain(#[from] ChainError),
}

/// The four faces of a unit square, in counterclockwise boundary order
/// front, right, back, left.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Face {
    Front,
    Right,
    Back,
    Left,
}

impl Face {
    pub const ALL: [Face; 4] = [Face::Front, Face::Right, Face::Back, Face::Left];

    /// Corner pair (start, end) along the counterclockwise boundary, with
    /// corners numbered 0..4 counterclockwise from the origin.
    fn corners(self) -> (usize, usize) {
        match self {
            Face::Front => (0, 1),
            Face::Right => (1, 2),
            Face::Back => (2, 3),
            Face::Left => (3, 0),
        }
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Face::Front => "front",
            Face::Right => "right",
            Face::Back => "back",
            Face::Left => "left",
        };
        write!(f, "{s}")
    }
}

/// A shadow-coloured signed unit square realizing one chain generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnitSquare {
    pub id: usize,
    pub sign: i8,
    /// (α, x, y): source-region shadow, lower-line colour, higher-line colour.
    pub tuple: [El; 3],
}

impl UnitSquare {
    /// The 1-diagram chain carried by one face.
    pub fn face_chain(&self, q: &Quandle, face: Face) -> (i8, [El; 2]) {
        let [a, x, y] = self.tuple;
        match face {
            Face::Left => (self.sign, [q.tri(a, x), y]),
            Face::Right => (-self.sign, [a, y]),
            Face::Front => (self.sign, [a, x]),
            Face::Back => (-self.sign, [q.tri(a, y), q.tri(x, y)]),
        }
    }

    /// Outward boundary sum of the face chains; equals ε·∂₃(tuple).
    pub fn boundary_chain(&self, q: &Quandle) -> Chain<El> {
        let mut c = Chain::zero(2, Theory::Rack, Ring::Int);
        for face in Face::ALL {
            let (s, pair) = self.face_chain(q, face);
            c.add_term(pair.to_vec(), BigInt::from(-s));
        }
        c
    }
}

/// A closed surface built from matched unit squares.
#[derive(Debug, Clone)]
pub struct SurfaceDiagram {
    pub squares: Vec<UnitSquare>,
    /// Perfect matching: each face appears exactly once.
    pub gluings: Vec<((usize, Face), (usize, Face))>,
}

/// Per-component topology report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceStats {
    pub components: usize,
    /// (squares, χ, genus) per component, ordered by least square id.
    pub per_component: Vec<(usize, i64, i64)>,
}

impl SurfaceDiagram {
    /// Glue a multiset of squares by matching faces with opposite chains,
    /// deterministically (sorted by chain key, then square/face).
    pub fn from_squares(q: &Quandle, squares: Vec<UnitSquare>) -> Result<Self, RealizationError> {
        for sq in &squares {
            // Pin the face-chain signs against the boundary identity.
            let expect = Chain::generator(sq.tuple.to_vec(), Theory::Rack, Ring::Int)
                .scale(&BigInt::from(sq.sign))
                .boundary(q)?;
            assert_eq!(sq.boundary_chain(q), expect, "face-chain table broken");
        }
        let mut by_pair: BTreeMap<[El; 2], (Vec<(usize, Face)>, Vec<(usize, Face)>)> =
            BTreeMap::new();
        for sq in &squares {
            for face in Face::ALL {
                let (s, pair) = sq.face_chain(q, face);
                let slot = by_pair.entry(pair).or_default();
                if s > 0 {
                    slot.0.push((sq.id, face));
                } else {
                    slot.1.push((sq.id, face));
                }
            }
        }
        let mut gluings = Vec::new();
        for (_, (pos, neg)) in by_pair {
            if pos.len() != neg.len() {
                return Err(RealizationError::UnmatchedFace);
            }
            gluings.extend(pos.into_iter().zip(neg));
        }
        Ok(SurfaceDiagram { squares, gluings })
    }

    /// The represented chain: signed sum of square tuples.
    pub fn chain_of(&self) -> Chain<El> {
        let mut c = Chain::zero(3, Theory::Rack, Ring::Int);
        for sq in &self.squares {
            c.add_term(sq.tuple.to_vec(), BigInt::from(sq.sign));
        }
        c
    }

    /// V − E + F per connected component, with genus; orientation-reversing
    /// attachments make every component a closed oriented surface, so χ is
    /// asserted even.
    pub fn surface_stats(&self) -> SurfaceStats {
        let n = self.squares.len();
        let index: BTreeMap<usize, usize> = self.squares.iter().map(|s| s.id).zip(0..).collect();
        let mut corner_uf = Uf::new(4 * n);
        let mut square_uf = Uf::new(n);
        for &((s1, f1), (s2, f2)) in &self.gluings {
            let (i1, i2) = (index[&s1], index[&s2]);
            square_uf.union(i1, i2);
            // Attachments reverse the surface-induced boundary orientations.
            // A negative square's chart runs against the surface orientation,
            // so in chart corners that means: same-sign pair glues start↔end,
            // opposite-sign pair glues start↔start.
            let (u1, v1) = f1.corners();
            let (u2, v2) = f2.corners();
            if self.squares[i1].sign == self.squares[i2].sign {
                corner_uf.union(4 * i1 + u1, 4 * i2 + v2);
                corner_uf.union(4 * i1 + v1, 4 * i2 + u2);
            } else {
                corner_uf.union(4 * i1 + u1, 4 * i2 + u2);
                corner_uf.union(4 * i1 + v1, 4 * i2 + v2);
            }
        }
        let mut comp_squares: BTreeMap<usize, usize> = BTreeMap::new();
        for i in 0..n {
            *comp_squares.entry(square_uf.find(i)).or_insert(0) += 1;
        }
        let mut comp_vertices: BTreeMap<usize, std::collections::BTreeSet<usize>> =
            BTreeMap::new();
        for i in 0..n {
            let comp = square_uf.find(i);
            let set = comp_vertices.entry(comp).or_default();
            for k in 0..4 {
                set.insert(corner_uf.find(4 * i + k));
            }
        }
        let mut per_component = Vec::new();
        for (comp, &f) in &comp_squares {
            let v = comp_vertices[comp].len() as i64;
            let e = 2 * f as i64;
            let chi = v - e + f as i64;
            assert!(chi % 2 == 0, "odd Euler characteristic: gluing bug");
            assert!(chi <= 2);
            per_component.push((f, chi, (2 - chi) / 2));
        }
        SurfaceStats { components: comp_squares.len(), per_component }
    }

    pub fn dump(&self) -> String {
        let mut out = String::new();
        for sq in &self.squares {
            let [a, x, y] = sq.tuple;
            let sign = if sq.sign > 0 { '+' } else { '-' };
            out.push_str(&format!("square {} {sign} ({a},{x},{y})\n", sq.id));
        }
        for ((s1, f1), (s2, f2)) in &self.gluings {
            out.push_str(&format!("face {s1}.{f1} ~ {s2}.{f2}\n"));
        }
        let stats = self.surface_stats();
        out.push_str(&format!("components: {}\n", stats.components));
        for (i, (f, chi, g)) in stats.per_component.iter().enumerate() {
            out.push_str(&format!("component {i}: squares {f}, chi {chi}, genus {g}\n"));
        }
        out
    }
}

/// Expand a rack 3-cycle into |coeff|-many signed squares and glue them into
/// a closed surface; the extracted chain equals the input (asserted).
pub fn realize(q: &Quandle, c: &Chain<El>) -> Result<SurfaceDiagram, RealizationError> {
    if c.ring() != Ring::Int {
        return Err(RealizationError::NonIntegerCoefficients);
    }
    let rack = c.convert(Theory::Rack, Ring::Int);
    let d = rack.boundary(q)?;
    if !d.is_zero() {
        return Err(RealizationError::NotACycle(d.num_terms()));
    }
    let mut squares = Vec::new();
    for (t, coeff) in rack.terms() {
        let sign = if coeff.is_positive() { 1 } else { -1 };
        let count = coeff.abs();
        let mut i = BigInt::from(0);
        while i < count {
            squares.push(UnitSquare {
                id: squares.len(),
                sign,
                tuple: [t[0], t[1], t[2]],
            });
            i += 1;
        }
    }
    let surface = SurfaceDiagram::from_squares(q, squares)?;
    assert_eq!(surface.chain_of(), rack, "realization round trip failed");
    Ok(surface)
}

struct Uf {
    parent: Vec<usize>,
}

impl Uf {
    fn new(n: usize) -> Self {
        Uf { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let r = self.find(self.parent[x]);
            self.parent[x] = r;
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
    use crate::chain::Tuples;

    fn z3() -> Quandle {
        Quandle::dihedral(3).unwrap()
    }

    #[test]
    fn face_chains_satisfy_boundary_identity() {
        let q = z3();
        for t in Tuples::new(3, 3) {
            for sign in [1i8, -1] {
                let sq = UnitSquare { id: 0, sign, tuple: [t[0], t[1], t[2]] };
                let expect = Chain::generator(t.clone(), Theory::Rack, Ring::Int)
                    .scale(&BigInt::from(sign))
                    .boundary(&q)
                    .unwrap();
                assert_eq!(sq.boundary_chain(&q), expect);
            }
        }
    }

    #[test]
    fn empty_chain_realizes_to_empty_surface() {
        let q = z3();
        let s = realize(&q, &Chain::zero(3, Theory::Rack, Ring::Int)).unwrap();
        assert!(s.squares.is_empty());
        assert_eq!(s.surface_stats().components, 0);
    }

    #[test]
    fn non_cycle_rejected() {
        let q = z3();
        let c = Chain::generator(vec![0, 1, 2], Theory::Rack, Ring::Int);
        assert!(matches!(realize(&q, &c), Err(RealizationError::NotACycle(_))));
    }

    #[test]
    fn plus_minus_pair_is_a_sphere() {
        let q = z3();
        let squares = vec![
            UnitSquare { id: 0, sign: 1, tuple: [0, 1, 2] },
            UnitSquare { id: 1, sign: -1, tuple: [0, 1, 2] },
        ];
        let s = SurfaceDiagram::from_squares(&q, squares).unwrap();
        assert!(s.chain_of().is_zero());
        let stats = s.surface_stats();
        assert_eq!(stats.components, 1);
        assert_eq!(stats.per_component, vec![(2, 2, 0)]);
    }

    #[test]
    fn boundaries_of_four_chains_round_trip() {
        let q = z3();
        for t in Tuples::new(3, 4).step_by(7) {
            let c = Chain::generator(t.clone(), Theory::Rack, Ring::Int)
                .boundary(&q)
                .unwrap();
            let s = realize(&q, &c).unwrap();
            assert_eq!(s.chain_of(), c, "tuple {t:?}");
            for (_, chi, genus) in s.surface_stats().per_component {
                assert!(chi % 2 == 0 && genus >= 0);
            }
        }
    }

    #[test]
    fn trefoil_shadow_chain_realizes() {
        use crate::diagram::{Conventions, OrientedDiagram};
        let q = z3();
        let d = OrientedDiagram::parse_pd(
            "pd 6\ncomponents: [1,2,3,4,5,6]\nX 1 5 2 4\nX 3 1 4 6\nX 5 3 6 2\n",
        )
        .unwrap();
        let regions = d.regions().unwrap();
        let conv = Conventions::default();
        for c in d.enumerate_colourings(&q, conv) {
            let sc = d.shadow_extend(&regions, &c, 0, conv).unwrap();
            let ch = d.shadow_chain(&regions, &sc, conv);
            let s = realize(&q, &ch).unwrap();
            assert_eq!(s.chain_of(), ch);
        }
    }
}
