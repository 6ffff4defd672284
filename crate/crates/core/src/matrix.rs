//! Arbitrary-precision integer matrices, Smith normal form, and prime-field
//! elimination.
//!
//! The SNF routine selects pivots of minimal absolute value to limit entry
//! growth and asserts `U·M·V = D` by re-multiplication on every call.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense row-major matrix over the integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Matrix::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &x) in row.iter().enumerate() {
                m.set(i, j, BigInt::from(x));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Matrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let cur = out.get(i, j) + a * b;
                        out.set(i, j, cur);
                    }
                }
            }
        }
        out
    }

    /// Matrix–vector product.
    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k · row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.get(dst, j) + k * self.get(src, j);
            self.set(dst, j, v);
        }
    }

    /// col[dst] += k · col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.get(i, dst) + k * self.get(i, src);
            self.set(i, dst, v);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }
}

/// `u · m · v = d`, with `d` diagonal under a divisibility chain and `u`, `v`
/// unimodular. `rank` counts the nonzero diagonal entries.
#[derive(Debug, Clone)]
pub struct Snf {
    pub d: Matrix,
    pub u: Matrix,
    pub v: Matrix,
    pub rank: usize,
}

impl Snf {
    /// The invariant factors > 1 (torsion of the cokernel restricted to the
    /// pivot block).
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank)
            .map(|i| self.d.get(i, i).clone())
            .filter(|d| *d > BigInt::one())
            .collect()
    }
}

pub fn smith_normal_form(m: &Matrix) -> Snf {
    let mut d = m.clone();
    let mut u = Matrix::identity(m.rows());
    let mut v = Matrix::identity(m.cols());
    let n = m.rows().min(m.cols());
    let mut t = 0;
    while t < n {
        // Minimal-absolute-value nonzero pivot in the trailing submatrix.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..d.rows() {
            for j in t..d.cols() {
                let x = d.get(i, j);
                if x.is_zero() {
                    continue;
                }
                match pivot {
                    Some((pi, pj)) if d.get(pi, pj).abs() <= x.abs() => {}
                    _ => pivot = Some((i, j)),
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        // Clear row and column t; re-pivot when a reduction leaves a smaller
        // nonzero remainder.
        loop {
            let mut dirty = false;
            for i in (t + 1)..d.rows() {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = -(d.get(i, t).div_floor(d.get(t, t)));
                d.add_row(i, t, &q);
                u.add_row(i, t, &q);
                if !d.get(i, t).is_zero() {
                    d.swap_rows(t, i);
                    u.swap_rows(t, i);
                    dirty = true;
                }
            }
            for j in (t + 1)..d.cols() {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = -(d.get(t, j).div_floor(d.get(t, t)));
                d.add_col(j, t, &q);
                v.add_col(j, t, &q);
                if !d.get(t, j).is_zero() {
                    d.swap_cols(t, j);
                    v.swap_cols(t, j);
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
        }

        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }

        // Pivot must divide the trailing submatrix; fold an offending row in
        // and redo this step.
        let mut offender = None;
        'scan: for i in (t + 1)..d.rows() {
            for j in (t + 1)..d.cols() {
                if !d.get(i, j).mod_floor(d.get(t, t)).is_zero() {
                    offender = Some(i);
                    break 'scan;
                }
            }
        }
        if let Some(i) = offender {
            d.add_row(t, i, &BigInt::one());
            u.add_row(t, i, &BigInt::one());
            continue;
        }
        t += 1;
    }
    let rank = t;
    let snf = Snf { d, u, v, rank };
    assert_eq!(snf.u.mul(m).mul(&snf.v), snf.d, "SNF re-multiplication failed");
    for i in 1..rank {
        assert!(
            snf.d.get(i, i).mod_floor(snf.d.get(i - 1, i - 1)).is_zero(),
            "divisibility chain broken"
        );
    }
    snf
}

/// Integer solution of `M x = b` via a precomputed SNF, if one exists.
pub fn solve_integer(m: &Matrix, snf: &Snf, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(b.len(), m.rows());
    let ub = snf.u.apply(b);
    let mut z = vec![BigInt::zero(); m.cols()];
    for (i, ubi) in ub.iter().enumerate() {
        if i < snf.rank {
            let di = snf.d.get(i, i);
            let (q, r) = ubi.div_rem(di);
            if !r.is_zero() {
                return None;
            }
            z[i] = q;
        } else if !ubi.is_zero() {
            return None;
        }
    }
    Some(snf.v.apply(&z))
}

/// Why `M x = b` has no integer solution, in terms of the SNF row space.
pub enum SolveObstruction {
    /// `row` of `U` pairs nonzero with `b` but annihilates the column space
    /// (a free obstruction functional).
    FreeRow { row: Vec<BigInt>, pairing: BigInt },
    /// `row_i(U)·b` is not divisible by the invariant factor `d`.
    TorsionRow { row: Vec<BigInt>, modulus: BigInt, residue: BigInt },
}

pub fn solve_obstruction(m: &Matrix, snf: &Snf, b: &[BigInt]) -> Option<SolveObstruction> {
    assert_eq!(b.len(), m.rows());
    let ub = snf.u.apply(b);
    for (i, ubi) in ub.iter().enumerate() {
        let row = (0..m.rows()).map(|j| snf.u.get(i, j).clone()).collect();
        if i < snf.rank {
            let di = snf.d.get(i, i);
            let r = ubi.mod_floor(di);
            if !r.is_zero() {
                return Some(SolveObstruction::TorsionRow {
                    row,
                    modulus: di.clone(),
                    residue: r,
                });
            }
        } else if !ubi.is_zero() {
            return Some(SolveObstruction::FreeRow { row, pairing: ubi.clone() });
        }
    }
    None
}

/// Dense matrix over the prime field F_p, entries in `0..p`.
#[derive(Debug, Clone)]
pub struct FpMatrix {
    rows: usize,
    cols: usize,
    p: u64,
    data: Vec<u64>,
}

pub fn is_prime(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // Fermat: p is prime and a ≠ 0 mod p.
    let mut result: u128 = 1;
    let mut base = a as u128 % p as u128;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u128;
        }
        base = base * base % p as u128;
        e >>= 1;
    }
    result as u64
}

impl FpMatrix {
    pub fn zero(rows: usize, cols: usize, p: u64) -> Self {
        assert!(is_prime(p), "modulus must be prime");
        FpMatrix { rows, cols, p, data: vec![0; rows * cols] }
    }

    pub fn from_integer(m: &Matrix, p: u64) -> Self {
        let mut out = FpMatrix::zero(m.rows(), m.cols(), p);
        let bp = BigInt::from(p);
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let r = m.get(i, j).mod_floor(&bp);
                out.set(i, j, u64::try_from(r).unwrap());
            }
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.p;
    }

    fn mul_mod(&self, a: u64, b: u64) -> u64 {
        (a as u128 * b as u128 % self.p as u128) as u64
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            for j in 0..self.cols {
                self.data.swap(r * self.cols + j, pr * self.cols + j);
            }
            let inv = mod_inv(self.get(r, c), self.p);
            for j in 0..self.cols {
                let v = self.mul_mod(self.get(r, j), inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r || self.get(i, c) == 0 {
                    continue;
                }
                let f = self.get(i, c);
                for j in 0..self.cols {
                    let v =
                        (self.get(i, j) + self.p - self.mul_mod(f, self.get(r, j))) % self.p;
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the right nullspace.
    pub fn nullspace(&self) -> Vec<Vec<u64>> {
        let mut e = self.clone();
        let pivots = e.rref();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![0u64; self.cols];
            v[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                let coeff = e.get(r, free);
                if coeff != 0 {
                    v[pc] = self.p - coeff;
                }
            }
            basis.push(v);
        }
        basis
    }

    /// One solution of `M x = b`, if any.
    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = FpMatrix::zero(self.rows, self.cols + 1, self.p);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, b[i]);
        }
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![0u64; self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get(r, self.cols);
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag_of(d: &Matrix) -> Vec<i64> {
        (0..d.rows().min(d.cols()))
            .map(|i| i64::try_from(d.get(i, i).clone()).unwrap())
            .collect()
    }

    #[test]
    fn snf_gcd_reduction() {
        let m = Matrix::from_rows(vec![vec![2, 0], vec![0, 3]]);
        let snf = smith_normal_form(&m);
        assert_eq!(diag_of(&snf.d), vec![1, 6]);
        assert_eq!(snf.rank, 2);
    }

    #[test]
    fn snf_trivial_cases() {
        let z = Matrix::zero(3, 2);
        let snf = smith_normal_form(&z);
        assert!(snf.d.is_zero());
        assert_eq!(snf.rank, 0);
        let one = Matrix::from_rows(vec![vec![1]]);
        assert_eq!(diag_of(&smith_normal_form(&one).d), vec![1]);
    }

    #[test]
    fn snf_random_matrices_re_multiply() {
        // Deterministic pseudo-random fill; the SNF routine asserts U·M·V = D
        // internally, so this exercises many shapes.
        let mut seed: u64 = 0x9e3779b97f4a7c15;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed % 21) as i64 - 10
        };
        for (r, c) in [(1, 1), (2, 3), (3, 2), (4, 4), (5, 3), (6, 6)] {
            let rows: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| next()).collect()).collect();
            let m = Matrix::from_rows(rows);
            let snf = smith_normal_form(&m);
            for i in 1..snf.rank {
                let (a, b) = (snf.d.get(i - 1, i - 1), snf.d.get(i, i));
                assert!(b.mod_floor(a).is_zero());
            }
        }
    }

    #[test]
    fn integer_solve_and_obstruction() {
        let m = Matrix::from_rows(vec![vec![2, 0], vec![0, 2]]);
        let snf = smith_normal_form(&m);
        let b = vec![BigInt::from(4), BigInt::from(-6)];
        let x = solve_integer(&m, &snf, &b).unwrap();
        assert_eq!(m.apply(&x), b);
        let odd = vec![BigInt::from(1), BigInt::from(0)];
        assert!(solve_integer(&m, &snf, &odd).is_none());
        assert!(solve_obstruction(&m, &snf, &odd).is_some());
        // Unsolvable for free reasons: target outside the column space.
        let m = Matrix::from_rows(vec![vec![1], vec![1]]);
        let snf = smith_normal_form(&m);
        let b = vec![BigInt::from(1), BigInt::from(0)];
        match solve_obstruction(&m, &snf, &b) {
            Some(SolveObstruction::FreeRow { row, pairing }) => {
                let dot: BigInt = row.iter().zip(&b).map(|(r, x)| r * x).sum();
                assert_eq!(dot, pairing);
                assert!(!pairing.is_zero());
                // The row annihilates the column space.
                let col: BigInt = row.iter().map(|r| r * BigInt::one()).sum();
                assert!(col.is_zero());
            }
            _ => panic!("expected a free obstruction"),
        }
    }

    #[test]
    fn fp_rank_nullspace_solve() {
        let m = Matrix::from_rows(vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]);
        let f = FpMatrix::from_integer(&m, 5);
        assert_eq!(f.rank(), 2);
        let ns = f.nullspace();
        assert_eq!(ns.len(), 1);
        for v in &ns {
            for i in 0..3 {
                let s: u64 = (0..3).map(|j| f.get(i, j) * v[j] % 5).sum::<u64>() % 5;
                assert_eq!(s, 0);
            }
        }
        let b = vec![1, 2, 1];
        let x = f.solve(&b).unwrap();
        for i in 0..3 {
            let s: u64 = (0..3).map(|j| f.get(i, j) * x[j] % 5).sum::<u64>() % 5;
            assert_eq!(s, b[i]);
        }
        assert!(f.solve(&[1, 1, 0]).is_none());
    }

    #[test]
    fn primality() {
        assert!(is_prime(2));
        assert!(is_prime(3));
        assert!(is_prime(23));
        assert!(!is_prime(1));
        assert!(!is_prime(9));
        assert!(!is_prime(91));
    }
}
