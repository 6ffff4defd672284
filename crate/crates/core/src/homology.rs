//! Homology groups, boundary-membership certificates, and cocycle-space
//! bases, all over exact arithmetic.

use crate::chain::{is_degenerate, Chain, Cochain, Ring, Theory, Tuples};
use crate::matrix::{
    is_prime, smith_normal_form, solve_integer, solve_obstruction, FpMatrix, Matrix,
    SolveObstruction,
};
use crate::quandle::Quandle;
use crate::El;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

pub const DEFAULT_SIZE_CAP: usize = 200_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HomologyError {
    #[error("operation requires a quandle (axiom Q)")]
    NotAQuandle,
    #[error("basis too large: {0} tuples exceeds cap {1}")]
    TooLarge(usize, usize),
    #[error("modulus {0} is not prime")]
    NonPrimeModulus(u64),
    #[error("degree must be at least 1")]
    DegreeZero,
    #[error("chain is not supported on the chosen theory's basis")]
    UnsupportedChain,
    #[error(transparent)]
    Chain(#[from] crate::chain::ChainError),
}

/// The three chain complexes of a quandle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HomTheory {
    Rack,
    Degenerate,
    Quandle,
}

impl HomTheory {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "rack" => Some(HomTheory::Rack),
            "degenerate" => Some(HomTheory::Degenerate),
            "quandle" => Some(HomTheory::Quandle),
            _ => None,
        }
    }

    fn admits(self, tuple: &[El]) -> bool {
        match self {
            HomTheory::Rack => true,
            HomTheory::Degenerate => is_degenerate(tuple),
            HomTheory::Quandle => !is_degenerate(tuple),
        }
    }

    /// Chain-level theory used when expanding boundaries for the matrix.
    fn chain_theory(self) -> Theory {
        match self {
            HomTheory::Quandle => Theory::Quandle,
            _ => Theory::Rack,
        }
    }
}

impl fmt::Display for HomTheory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomTheory::Rack => write!(f, "R"),
            HomTheory::Degenerate => write!(f, "D"),
            HomTheory::Quandle => write!(f, "Q"),
        }
    }
}

/// Finitely generated abelian group: free rank plus invariant factors
/// `d₁ | d₂ | …` (each ≥ 2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Ordered tuple basis of the chosen theory in one degree.
pub struct Basis {
    pub tuples: Vec<Vec<El>>,
    index: BTreeMap<Vec<El>, usize>,
}

impl Basis {
    pub fn new(q: &Quandle, n: usize, theory: HomTheory) -> Self {
        let tuples: Vec<Vec<El>> = Tuples::new(q.size(), n)
            .filter(|t| theory.admits(t))
            .collect();
        let index = tuples.iter().cloned().zip(0..).collect();
        Basis { tuples, index }
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn position(&self, tuple: &[El]) -> Option<usize> {
        self.index.get(tuple).copied()
    }

    /// Coordinate vector of a chain; `None` if supported off-basis.
    pub fn coords(&self, c: &Chain<El>) -> Option<Vec<BigInt>> {
        let mut v = vec![BigInt::zero(); self.len()];
        for (t, coeff) in c.terms() {
            v[self.position(t)?] = coeff.clone();
        }
        Some(v)
    }
}

fn check_theory(q: &Quandle, theory: HomTheory) -> Result<(), HomologyError> {
    if theory != HomTheory::Rack && !q.is_quandle() {
        return Err(HomologyError::NotAQuandle);
    }
    Ok(())
}

fn check_cap(sizes: &[usize], cap: usize) -> Result<(), HomologyError> {
    for &s in sizes {
        if s > cap {
            return Err(HomologyError::TooLarge(s, cap));
        }
    }
    Ok(())
}

fn basis_size(q: &Quandle, n: usize, theory: HomTheory) -> usize {
    let total = q.size().checked_pow(n as u32).unwrap_or(usize::MAX);
    match theory {
        HomTheory::Rack => total,
        _ => {
            // Non-degenerate n-tuples: s·(s−1)^(n−1) for n ≥ 1, 1 for n = 0.
            let nondeg = if n == 0 {
                1
            } else {
                q.size() * (q.size().saturating_sub(1)).pow(n as u32 - 1)
            };
            match theory {
                HomTheory::Quandle => nondeg,
                HomTheory::Degenerate => total - nondeg,
                HomTheory::Rack => unreachable!(),
            }
        }
    }
}

/// Matrix of `∂_n` from the degree-`n` basis (columns) to the degree-`n−1`
/// basis (rows) of the chosen theory.
pub fn boundary_matrix(q: &Quandle, n: usize, theory: HomTheory) -> Result<Matrix, HomologyError> {
    check_theory(q, theory)?;
    if n == 0 {
        return Err(HomologyError::DegreeZero);
    }
    let dom = Basis::new(q, n, theory);
    let cod = Basis::new(q, n - 1, theory);
    let mut m = Matrix::zero(cod.len(), dom.len());
    for (j, t) in dom.tuples.iter().enumerate() {
        let d = Chain::generator(t.clone(), theory.chain_theory(), Ring::Int).boundary(q)?;
        for (s, coeff) in d.terms() {
            let Some(i) = cod.position(s) else {
                // The degenerate subcomplex must be closed under ∂; anything
                // else is a sign-convention bug, not a data error.
                panic!("boundary of basis tuple {t:?} leaves the {theory} complex at {s:?}");
            };
            m.set(i, j, coeff.clone());
        }
    }
    Ok(m)
}

/// ker ∂_n / im ∂_{n+1} for the chosen theory, over Z (SNF) or a prime field
/// (dimension, reported as free rank).
pub fn homology_group(
    q: &Quandle,
    n: usize,
    theory: HomTheory,
    ring: Ring,
    cap: usize,
) -> Result<AbelianGroup, HomologyError> {
    check_theory(q, theory)?;
    check_cap(
        &[
            basis_size(q, n, theory),
            basis_size(q, n + 1, theory),
        ],
        cap,
    )?;
    let dim_n = Basis::new(q, n, theory).len();
    let d_n = if n == 0 { Matrix::zero(0, dim_n) } else { boundary_matrix(q, n, theory)? };
    let d_next = boundary_matrix(q, n + 1, theory)?;
    match ring {
        Ring::Int => {
            let rank_n = smith_normal_form(&d_n).rank;
            let snf_next = smith_normal_form(&d_next);
            let free_rank = dim_n - rank_n - snf_next.rank;
            Ok(AbelianGroup { free_rank, torsion: snf_next.invariant_factors() })
        }
        Ring::Mod(p) => {
            if !is_prime(p) {
                return Err(HomologyError::NonPrimeModulus(p));
            }
            let rank_n = FpMatrix::from_integer(&d_n, p).rank();
            let rank_next = FpMatrix::from_integer(&d_next, p).rank();
            Ok(AbelianGroup { free_rank: dim_n - rank_n - rank_next, torsion: vec![] })
        }
    }
}

/// Why a chain fails to be a boundary.
#[derive(Debug, Clone)]
pub enum Obstruction {
    /// A δ-closed cochain pairing nonzero with the chain.
    Cocycle { f: Cochain, pairing: BigInt },
    /// A functional whose pairing with the chain misses the required
    /// divisibility: `⟨c,f⟩ = residue ≠ 0 (mod modulus)`.
    Torsion { f: Cochain, modulus: BigInt, residue: BigInt },
}

#[derive(Debug, Clone)]
pub enum BoundaryCertificate {
    IsBoundary { witness: Chain<El> },
    NotBoundary { obstruction: Obstruction },
}

fn cochain_from_row(
    basis: &Basis,
    row: &[BigInt],
    theory: Theory,
    ring: Ring,
) -> Cochain {
    let degree = basis.tuples.first().map_or(0, Vec::len);
    let mut f = Cochain::zero(degree, theory, ring);
    for (t, v) in basis.tuples.iter().zip(row) {
        f.set(t.clone(), v.clone());
    }
    f
}

/// Decide whether `c = ∂_{n+1} w` is solvable in the chosen theory over the
/// chain's ring, returning a re-checked witness or obstruction.
pub fn in_boundary_image(
    q: &Quandle,
    c: &Chain<El>,
    theory: HomTheory,
    cap: usize,
) -> Result<BoundaryCertificate, HomologyError> {
    check_theory(q, theory)?;
    let n = c.degree();
    if n == 0 {
        return Err(HomologyError::DegreeZero);
    }
    check_cap(
        &[basis_size(q, n, theory), basis_size(q, n + 1, theory)],
        cap,
    )?;
    let dom = Basis::new(q, n + 1, theory);
    let cod = Basis::new(q, n, theory);
    let m = boundary_matrix(q, n + 1, theory)?;
    let target = match theory {
        HomTheory::Quandle => c.project_quandle(),
        _ => c.clone(),
    };
    let b = cod.coords(&target).ok_or(HomologyError::UnsupportedChain)?;

    // For Z/m coefficients, solve the integer system [∂ | m·I] x = b so that
    // the witness is exact in the quotient ring.
    let sys = match c.ring() {
        Ring::Int => m.clone(),
        Ring::Mod(mm) => {
            let mut aug = Matrix::zero(m.rows(), m.cols() + m.rows());
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    aug.set(i, j, m.get(i, j).clone());
                }
                aug.set(i, m.cols() + i, BigInt::from(mm));
            }
            aug
        }
    };
    let snf = smith_normal_form(&sys);
    if let Some(x) = solve_integer(&sys, &snf, &b) {
        let mut witness = Chain::zero(n + 1, theory.chain_theory(), c.ring());
        for (t, coeff) in dom.tuples.iter().zip(&x) {
            witness.add_term(t.clone(), coeff.clone());
        }
        let check = match theory {
            HomTheory::Quandle => witness.boundary(q)?.project_quandle(),
            _ => witness.boundary(q)?,
        };
        assert!(check.sub(&target.convert(theory.chain_theory(), c.ring()))?.is_zero(),
            "witness failed re-check");
        return Ok(BoundaryCertificate::IsBoundary { witness });
    }
    let obstruction = solve_obstruction(&sys, &snf, &b)
        .expect("no solution yet no obstruction");
    let cochain_theory = match theory {
        HomTheory::Quandle => Theory::Quandle,
        _ => Theory::Rack,
    };
    let obstruction = match obstruction {
        SolveObstruction::FreeRow { row, pairing } => {
            // The row annihilates every boundary column, so the cochain is
            // δ-closed within the theory; re-check both facts.
            for j in 0..m.cols() {
                let dot: BigInt = (0..m.rows()).map(|i| &row[i] * m.get(i, j)).sum();
                assert!(dot.is_zero(), "obstruction row is not closed");
            }
            let f = cochain_from_row(&cod, &row, cochain_theory, Ring::Int);
            let check = f.eval(&target)?;
            assert_eq!(check, pairing);
            assert!(!pairing.is_zero());
            Obstruction::Cocycle { f, pairing }
        }
        SolveObstruction::TorsionRow { row, modulus: d, residue } => {
            for j in 0..m.cols() {
                let dot: BigInt = (0..m.rows()).map(|i| &row[i] * m.get(i, j)).sum();
                assert!(dot.mod_floor(&d).is_zero(), "obstruction row not closed mod {d}");
            }
            let du = u64::try_from(d.clone()).expect("invariant factor fits u64");
            let f = cochain_from_row(&cod, &row, cochain_theory, Ring::Mod(du));
            let check = f.eval(&target.convert(target.theory(), Ring::Mod(du)))?;
            assert_eq!(check, residue.mod_floor(&d));
            assert!(!residue.mod_floor(&d).is_zero());
            Obstruction::Torsion { f, modulus: d, residue }
        }
    };
    Ok(BoundaryCertificate::NotBoundary { obstruction })
}

/// Bases of ker δ^{n+1} and im δⁿ in the theory's degree-`n` cochain space
/// over F_m (m prime). δ is the transpose of ∂, so the cocycles form the
/// nullspace of `∂_{n+1}ᵀ` and the coboundaries the row space of `∂_n`.
pub fn cocycle_space(
    q: &Quandle,
    n: usize,
    theory: Theory,
    m: u64,
    cap: usize,
) -> Result<(Vec<Cochain>, Vec<Cochain>), HomologyError> {
    if !is_prime(m) {
        return Err(HomologyError::NonPrimeModulus(m));
    }
    let hom_theory = match theory {
        Theory::Rack => HomTheory::Rack,
        Theory::Quandle => HomTheory::Quandle,
    };
    check_theory(q, hom_theory)?;
    check_cap(
        &[basis_size(q, n, hom_theory), basis_size(q, n + 1, hom_theory)],
        cap,
    )?;
    let basis = Basis::new(q, n, hom_theory);
    let d_next = boundary_matrix(q, n + 1, hom_theory)?;
    let mut delta = FpMatrix::zero(d_next.cols(), d_next.rows(), m);
    let bp = BigInt::from(m);
    for i in 0..d_next.rows() {
        for j in 0..d_next.cols() {
            delta.set(j, i, u64::try_from(d_next.get(i, j).mod_floor(&bp)).unwrap());
        }
    }
    let vec_to_cochain = |v: &[u64]| {
        let mut f = Cochain::zero(n, theory, Ring::Mod(m));
        for (t, &x) in basis.tuples.iter().zip(v) {
            f.set(t.clone(), BigInt::from(x));
        }
        f
    };
    let cocycles: Vec<Cochain> = delta.nullspace().iter().map(|v| vec_to_cochain(v)).collect();
    for f in &cocycles {
        assert!(f.coboundary(q)?.is_zero(), "returned cocycle is not closed");
    }
    let coboundaries = if n == 0 {
        Vec::new()
    } else {
        let d_n = boundary_matrix(q, n, hom_theory)?;
        let mut rows = FpMatrix::from_integer(&d_n, m);
        rows.rref();
        (0..rows.rows())
            .map(|i| (0..rows.cols()).map(|j| rows.get(i, j)).collect::<Vec<u64>>())
            .filter(|r| r.iter().any(|&x| x != 0))
            .map(|r| vec_to_cochain(&r))
            .collect()
    };
    Ok((cocycles, coboundaries))
}
