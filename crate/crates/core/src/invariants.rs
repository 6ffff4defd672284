//! Boltzmann weights and the unbased/based shadow cocycle state-sum
//! invariants, plus the orbit-gated 2→3 cocycle lift.

use crate::chain::{ChainError, Cochain, Ring, Theory, Tuples};
use crate::diagram::{Conventions, DiagramError, Edge, OrientedDiagram, RegionMap, ShadowColouring};
use crate::quandle::Quandle;
use crate::El;
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InvariantError {
    #[error("cochain is not defined mod m")]
    NotModular,
    #[error("input is not a cocycle (δ ≠ 0)")]
    NotACocycle,
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// Group-ring element: residue mod m → multiplicity. Total multiplicity is
/// the number of admissible states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSum {
    pub modulus: u64,
    pub counts: BTreeMap<u64, usize>,
}

impl StateSum {
    pub fn new(modulus: u64) -> Self {
        StateSum { modulus, counts: BTreeMap::new() }
    }

    pub fn record(&mut self, residue: u64) {
        *self.counts.entry(residue % self.modulus).or_insert(0) += 1;
    }

    pub fn total_states(&self) -> usize {
        self.counts.values().sum()
    }

    /// Does `self = k · other` hold residue-by-residue?
    pub fn is_multiple_of(&self, other: &StateSum, k: usize) -> bool {
        if self.modulus != other.modulus {
            return false;
        }
        let all: std::collections::BTreeSet<u64> =
            self.counts.keys().chain(other.counts.keys()).copied().collect();
        all.iter().all(|r| {
            self.counts.get(r).copied().unwrap_or(0)
                == k * other.counts.get(r).copied().unwrap_or(0)
        })
    }

    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (r, n) in &self.counts {
            out.push_str(&format!("value {r}: {n}\n"));
        }
        out.push_str(&format!("states: {}\n", self.total_states()));
        out
    }
}

fn modulus_of(phi: &Cochain) -> Result<u64, InvariantError> {
    match phi.ring() {
        Ring::Mod(m) => Ok(m),
        Ring::Int => Err(InvariantError::NotModular),
    }
}

fn residue(v: BigInt, m: u64) -> u64 {
    u64::try_from(Ring::Mod(m).normalize(v)).unwrap()
}

/// Signed cocycle value `ε_p · φ(shadow(r^ini), colour(u^ini), colour(over))`
/// at one crossing, additively in Z/m.
pub fn boltzmann_weight(
    d: &OrientedDiagram,
    regions: &RegionMap,
    sc: &ShadowColouring,
    crossing: usize,
    phi: &Cochain,
    conv: Conventions,
) -> Result<u64, InvariantError> {
    let m = modulus_of(phi)?;
    let rec = &d.crossing_records(regions, conv)[crossing];
    let c = &sc.colouring;
    let tuple = [
        sc.region_colours[rec.source_region],
        c.colour(rec.under_initial),
        c.colour(rec.over),
    ];
    let v = phi.value(&tuple) * BigInt::from(rec.sign);
    Ok(residue(v, m))
}

fn total_weight(
    records: &[crate::diagram::CrossingRecord],
    sc: &ShadowColouring,
    phi: &Cochain,
    m: u64,
) -> u64 {
    let c = &sc.colouring;
    let mut acc = BigInt::zero();
    for rec in records {
        let tuple = [
            sc.region_colours[rec.source_region],
            c.colour(rec.under_initial),
            c.colour(rec.over),
        ];
        acc += phi.value(&tuple) * BigInt::from(rec.sign);
    }
    residue(acc, m)
}

/// The unbased invariant Φ: one state per (colouring, shadow extension).
pub fn phi(
    d: &OrientedDiagram,
    x: &Quandle,
    phi3: &Cochain,
    conv: Conventions,
) -> Result<StateSum, InvariantError> {
    let m = modulus_of(phi3)?;
    let regions = d.regions()?;
    let records = d.crossing_records(&regions, conv);
    let mut sum = StateSum::new(m);
    for c in d.enumerate_colourings(x, conv) {
        for a in 0..x.size() {
            let sc = d.shadow_extend(&regions, &c, a, conv)?;
            sum.record(total_weight(&records, &sc, phi3, m));
        }
    }
    Ok(sum)
}

/// The based invariant Φ*: per colouring, only the shadow extension whose
/// source-region colour at the chosen edge equals that edge's colour.
pub fn phi_based(
    d: &OrientedDiagram,
    x: &Quandle,
    phi3: &Cochain,
    chosen_edge: Edge,
    conv: Conventions,
) -> Result<StateSum, InvariantError> {
    let m = modulus_of(phi3)?;
    let regions = d.regions()?;
    let records = d.crossing_records(&regions, conv);
    let source = regions
        .edge_source_region(chosen_edge, conv)
        .ok_or(DiagramError::NoSuchEdge(chosen_edge))?;
    let mut sum = StateSum::new(m);
    for c in d.enumerate_colourings(x, conv) {
        let mut admissible = 0;
        for a in 0..x.size() {
            let sc = d.shadow_extend(&regions, &c, a, conv)?;
            if sc.region_colours[source] != c.colour(chosen_edge) {
                continue;
            }
            // The terminal-side condition follows from idempotency; assert it.
            let ter = match conv.normal {
                crate::diagram::NormalSide::Left => regions.left_of[&chosen_edge],
                crate::diagram::NormalSide::Right => regions.right_of[&chosen_edge],
            };
            assert_eq!(
                sc.region_colours[ter],
                x.tri(c.colour(chosen_edge), c.colour(chosen_edge)),
                "terminal admissibility must follow from the Q axiom"
            );
            admissible += 1;
            sum.record(total_weight(&records, &sc, phi3, m));
        }
        assert_eq!(admissible, 1, "exactly one admissible shadow per colouring");
    }
    Ok(sum)
}

/// Lift a rack 2-cocycle to degree 3, gated on the orbit of `beta`:
/// `φ̃(α,a,b) = φ2(a,b)` when α and β share an orbit, else 0.
pub fn orbit_lift_cocycle(
    x: &Quandle,
    phi2: &Cochain,
    beta: El,
) -> Result<Cochain, InvariantError> {
    let m = modulus_of(phi2)?;
    if !phi2.coboundary(x)?.is_zero() {
        return Err(InvariantError::NotACocycle);
    }
    let orbit = x.orbit_of(beta);
    let mut lifted = Cochain::zero(3, Theory::Rack, Ring::Mod(m));
    for t in Tuples::new(x.size(), 3) {
        if x.orbit_of(t[0]) != orbit {
            continue;
        }
        lifted.set(t.clone(), phi2.value(&t[1..]));
    }
    assert!(lifted.coboundary(x)?.is_zero(), "orbit lift must stay closed");
    Ok(lifted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::Theory;

    const TREFOIL: &str = "pd 6\ncomponents: [1,2,3,4,5,6]\nX 1 5 2 4\nX 3 1 4 6\nX 5 3 6 2\n";
    const UNKNOT: &str = "pd 1\nunknot\n";

    fn z3() -> Quandle {
        Quandle::dihedral(3).unwrap()
    }

    fn conv() -> Conventions {
        Conventions::default()
    }

    #[test]
    fn zero_cocycle_state_sums() {
        let q = z3();
        let zero = Cochain::zero(3, Theory::Quandle, Ring::Mod(3));
        let d = OrientedDiagram::parse_pd(TREFOIL).unwrap();
        let s = phi(&d, &q, &zero, conv()).unwrap();
        assert_eq!(s.counts, [(0, 27)].into());
        let sb = phi_based(&d, &q, &zero, 1, conv()).unwrap();
        assert_eq!(sb.counts, [(0, 9)].into());
        let u = OrientedDiagram::parse_pd(UNKNOT).unwrap();
        let s = phi(&u, &q, &zero, conv()).unwrap();
        assert_eq!(s.counts, [(0, 9)].into());
        let sb = phi_based(&u, &q, &zero, 1, conv()).unwrap();
        assert_eq!(sb.counts, [(0, 3)].into());
    }

    #[test]
    fn indicator_boltzmann_weight() {
        let q = z3();
        let d = OrientedDiagram::parse_pd(TREFOIL).unwrap();
        let regions = d.regions().unwrap();
        let c = d.enumerate_colourings(&q, conv()).remove(0);
        let sc = d.shadow_extend(&regions, &c, 0, conv()).unwrap();
        let rec = d.crossing_records(&regions, conv())[0];
        let tuple = vec![
            sc.region_colours[rec.source_region],
            c.colour(rec.under_initial),
            c.colour(rec.over),
        ];
        let mut f = Cochain::zero(3, Theory::Rack, Ring::Mod(5));
        f.set(tuple, BigInt::from(1));
        let w = boltzmann_weight(&d, &regions, &sc, 0, &f, conv()).unwrap();
        assert_eq!(w, if rec.sign == 1 { 1 } else { 4 });
        let zero = Cochain::zero(3, Theory::Rack, Ring::Mod(5));
        assert_eq!(boltzmann_weight(&d, &regions, &sc, 0, &zero, conv()).unwrap(), 0);
    }

    #[test]
    fn unbased_is_size_times_based() {
        let q = z3();
        let d = OrientedDiagram::parse_pd(TREFOIL).unwrap();
        let (cocycles, _) =
            crate::homology::cocycle_space(&q, 3, Theory::Quandle, 3, 10_000).unwrap();
        assert!(!cocycles.is_empty());
        for f in &cocycles {
            let unbased = phi(&d, &q, f, conv()).unwrap();
            for e in d.edges() {
                let based = phi_based(&d, &q, f, e, conv()).unwrap();
                assert!(unbased.is_multiple_of(&based, 3), "edge {e}");
            }
        }
    }

    #[test]
    fn pairing_consistency() {
        let q = z3();
        let d = OrientedDiagram::parse_pd(TREFOIL).unwrap();
        let regions = d.regions().unwrap();
        let (cocycles, _) =
            crate::homology::cocycle_space(&q, 3, Theory::Quandle, 3, 10_000).unwrap();
        let f = &cocycles[0];
        let direct = phi(&d, &q, f, conv()).unwrap();
        let mut via_chain = StateSum::new(3);
        for c in d.enumerate_colourings(&q, conv()) {
            for a in 0..q.size() {
                let sc = d.shadow_extend(&regions, &c, a, conv()).unwrap();
                let ch = d
                    .shadow_chain(&regions, &sc, conv())
                    .convert(Theory::Rack, Ring::Mod(3));
                via_chain.record(u64::try_from(f.eval(&ch).unwrap()).unwrap());
            }
        }
        assert_eq!(direct, via_chain);
    }

    #[test]
    fn orbit_lift_examples() {
        let q = z3();
        let zero2 = Cochain::zero(2, Theory::Rack, Ring::Mod(3));
        assert!(orbit_lift_cocycle(&q, &zero2, 0).unwrap().is_zero());
        // Connected quandle: lift independent of the base point.
        let (cocycles, _) =
            crate::homology::cocycle_space(&q, 2, Theory::Rack, 3, 10_000).unwrap();
        if let Some(f2) = cocycles.first() {
            let l0 = orbit_lift_cocycle(&q, f2, 0).unwrap();
            let l1 = orbit_lift_cocycle(&q, f2, 1).unwrap();
            assert_eq!(l0, l1);
        }
        // T₂: the lift is gated on the first coordinate's orbit.
        let t2 = Quandle::trivial(2).unwrap();
        let mut ind = Cochain::zero(2, Theory::Rack, Ring::Mod(3));
        ind.set(vec![0, 1], BigInt::from(1));
        assert!(ind.coboundary(&t2).unwrap().is_zero());
        let lifted = orbit_lift_cocycle(&t2, &ind, 0).unwrap();
        for (t, _) in lifted.support() {
            assert_eq!(t[0], 0);
        }
        assert_eq!(lifted.value(&[0, 0, 1]), BigInt::from(1));
        assert_eq!(lifted.value(&[1, 0, 1]), BigInt::from(0));
    }

    #[test]
    fn not_a_cocycle_rejected() {
        let q = z3();
        let mut f = Cochain::zero(2, Theory::Rack, Ring::Mod(3));
        f.set(vec![0, 1], BigInt::from(1));
        // Indicator of (0,1) is not closed over Z₃.
        assert!(!f.coboundary(&q).unwrap().is_zero());
        assert!(matches!(
            orbit_lift_cocycle(&q, &f, 0),
            Err(InvariantError::NotACocycle)
        ));
    }
}
