//! Finite racks and quandles given by operation tables.

use crate::El;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QuandleError {
    #[error("malformed table: {0}")]
    MalformedTable(String),
    #[error("axiom {axiom} violated at ({a}, {b}, {c})")]
    AxiomViolation { axiom: &'static str, a: El, b: El, c: El },
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("element {0} out of range (size {1})")]
    IndexOutOfRange(El, usize),
    #[error("parse error: {0}")]
    Parse(String),
}

/// A finite rack: `op[a][b] = a ◁ b`, with each column a permutation (R1)
/// and right self-distributivity (R2). `is_quandle` records axiom Q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quandle {
    size: usize,
    op: Vec<Vec<El>>,
    inv_op: Vec<Vec<El>>,
    is_quandle: bool,
}

/// Orbit decomposition under `a ↦ a ◁^{±1} b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitPartition {
    pub classes: Vec<Vec<El>>,
}

impl Quandle {
    /// Validate a raw table as a rack (quandle if axiom Q also holds).
    pub fn from_table(op: Vec<Vec<El>>) -> Result<Self, QuandleError> {
        let n = op.len();
        if n == 0 {
            return Err(QuandleError::MalformedTable("empty table".into()));
        }
        for (a, row) in op.iter().enumerate() {
            if row.len() != n {
                return Err(QuandleError::MalformedTable(format!(
                    "row {a} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if let Some(&x) = row.iter().find(|&&x| x >= n) {
                return Err(QuandleError::MalformedTable(format!(
                    "entry {x} out of range in row {a}"
                )));
            }
        }
        // R1: each column b is a permutation of 0..n; build the inverse table.
        let mut inv_op = vec![vec![0; n]; n];
        for b in 0..n {
            let mut seen = vec![false; n];
            for a in 0..n {
                let r = op[a][b];
                if seen[r] {
                    return Err(QuandleError::AxiomViolation { axiom: "R1", a, b, c: r });
                }
                seen[r] = true;
                inv_op[r][b] = a;
            }
        }
        // R2: (a ◁ b) ◁ c = (a ◁ c) ◁ (b ◁ c).
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if op[op[a][b]][c] != op[op[a][c]][op[b][c]] {
                        return Err(QuandleError::AxiomViolation { axiom: "R2", a, b, c });
                    }
                }
            }
        }
        let is_quandle = (0..n).all(|a| op[a][a] == a);
        Ok(Quandle { size: n, op, inv_op, is_quandle })
    }

    /// Dihedral quandle on Z_p: `a ◁ b = 2b − a (mod p)`.
    pub fn dihedral(p: usize) -> Result<Self, QuandleError> {
        if p == 0 {
            return Err(QuandleError::MalformedTable("modulus must be >= 1".into()));
        }
        let op = (0..p)
            .map(|a| (0..p).map(|b| (2 * b + p - a % p) % p).collect())
            .collect();
        Self::from_table(op)
    }

    /// Trivial quandle: `a ◁ b = a`.
    pub fn trivial(n: usize) -> Result<Self, QuandleError> {
        if n == 0 {
            return Err(QuandleError::MalformedTable("size must be >= 1".into()));
        }
        Self::from_table((0..n).map(|a| vec![a; n]).collect())
    }

    /// Conjugation quandle `g ◁ h = h⁻¹ g h` of a group given by its
    /// multiplication table `mul[g][h] = g·h`.
    pub fn conjugation(mul: &[Vec<El>]) -> Result<Self, QuandleError> {
        let n = mul.len();
        if n == 0 || mul.iter().any(|r| r.len() != n) {
            return Err(QuandleError::NotAGroup("table not square".into()));
        }
        if mul.iter().flatten().any(|&x| x >= n) {
            return Err(QuandleError::NotAGroup("entry out of range".into()));
        }
        // identity
        let e = (0..n)
            .find(|&e| (0..n).all(|g| mul[e][g] == g && mul[g][e] == g))
            .ok_or_else(|| QuandleError::NotAGroup("no identity".into()))?;
        // inverses
        let mut inv = vec![None; n];
        for g in 0..n {
            inv[g] = (0..n).find(|&h| mul[g][h] == e && mul[h][g] == e);
            if inv[g].is_none() {
                return Err(QuandleError::NotAGroup(format!("element {g} has no inverse")));
            }
        }
        // associativity
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return Err(QuandleError::NotAGroup(format!(
                            "associativity fails at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        let op = (0..n)
            .map(|g| {
                (0..n)
                    .map(|h| mul[mul[inv[h].unwrap()][g]][h])
                    .collect()
            })
            .collect();
        Self::from_table(op)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_quandle(&self) -> bool {
        self.is_quandle
    }

    pub fn table(&self) -> &[Vec<El>] {
        &self.op
    }

    /// `a ◁^e b` for `e = ±1`.
    pub fn apply(&self, a: El, b: El, e: i8) -> Result<El, QuandleError> {
        if a >= self.size {
            return Err(QuandleError::IndexOutOfRange(a, self.size));
        }
        if b >= self.size {
            return Err(QuandleError::IndexOutOfRange(b, self.size));
        }
        Ok(if e >= 0 { self.op[a][b] } else { self.inv_op[a][b] })
    }

    /// `a ◁ b`, panicking on out-of-range input (internal hot path).
    #[inline]
    pub fn tri(&self, a: El, b: El) -> El {
        self.op[a][b]
    }

    /// `a ◀ b`.
    #[inline]
    pub fn tri_inv(&self, a: El, b: El) -> El {
        self.inv_op[a][b]
    }

    /// Connected components of the action graph `a — a ◁^{±1} b`.
    pub fn orbits(&self) -> OrbitPartition {
        let mut parent: Vec<usize> = (0..self.size).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let r = find(parent, parent[x]);
                parent[x] = r;
            }
            parent[x]
        }
        for a in 0..self.size {
            for b in 0..self.size {
                let (x, y) = (find(&mut parent, a), find(&mut parent, self.op[a][b]));
                if x != y {
                    parent[x.max(y)] = x.min(y);
                }
            }
        }
        let mut classes: Vec<Vec<El>> = Vec::new();
        let mut index: Vec<Option<usize>> = vec![None; self.size];
        for a in 0..self.size {
            let r = find(&mut parent, a);
            match index[r] {
                Some(i) => classes[i].push(a),
                None => {
                    index[r] = Some(classes.len());
                    classes.push(vec![a]);
                }
            }
        }
        OrbitPartition { classes }
    }

    pub fn is_connected(&self) -> bool {
        self.orbits().classes.len() == 1
    }

    /// Index of the orbit containing `a`.
    pub fn orbit_of(&self, a: El) -> usize {
        let orbits = self.orbits();
        orbits
            .classes
            .iter()
            .position(|c| c.contains(&a))
            .expect("element in some orbit")
    }

    /// Check condition (RH): `f(a ◁ b) = f(a) ◁ f(b)`; returns the first
    /// violating pair if any.
    pub fn check_hom(&self, dst: &Quandle, f: &[El]) -> Result<(), (El, El)> {
        assert_eq!(f.len(), self.size, "map must be total on the source");
        for a in 0..self.size {
            for b in 0..self.size {
                if dst.op[f[a]][f[b]] != f[self.op[a][b]] {
                    return Err((a, b));
                }
            }
        }
        Ok(())
    }

    /// Parse the quandle file format: `quandle <n>` then n rows of n entries.
    pub fn parse(text: &str) -> Result<Self, QuandleError> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| QuandleError::Parse("empty file".into()))?;
        let n: usize = header
            .strip_prefix("quandle")
            .map(str::trim)
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| QuandleError::Parse(format!("bad header {header:?}")))?;
        let mut op = Vec::with_capacity(n);
        for _ in 0..n {
            let line = lines
                .next()
                .ok_or_else(|| QuandleError::Parse("missing table row".into()))?;
            let row: Result<Vec<El>, _> = line.split_whitespace().map(str::parse).collect();
            op.push(row.map_err(|e| QuandleError::Parse(format!("bad row {line:?}: {e}")))?);
        }
        Self::from_table(op)
    }

    /// Serialize in the quandle file format.
    pub fn dump(&self) -> String {
        let mut out = format!("quandle {}\n", self.size);
        for row in &self.op {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Multiplication table of the symmetric group S₃ (elements: e, (12), (13),
/// (23), (123), (132) in that order).
pub fn s3_multiplication_table() -> Vec<Vec<El>> {
    // permutations of {0,1,2} as images
    let perms: [[usize; 3]; 6] = [
        [0, 1, 2], // e
        [1, 0, 2], // (01)
        [2, 1, 0], // (02)
        [0, 2, 1], // (12)
        [1, 2, 0], // (012)
        [2, 0, 1], // (021)
    ];
    let compose = |p: &[usize; 3], q: &[usize; 3]| -> [usize; 3] {
        // (p·q)(x) = p(q(x))
        [p[q[0]], p[q[1]], p[q[2]]]
    };
    (0..6)
        .map(|g| {
            (0..6)
                .map(|h| {
                    let r = compose(&perms[g], &perms[h]);
                    perms.iter().position(|p| *p == r).unwrap()
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dihedral_z3_table() {
        let q = Quandle::dihedral(3).unwrap();
        assert_eq!(q.table(), &[vec![0, 2, 1], vec![2, 1, 0], vec![1, 0, 2]]);
        assert!(q.is_quandle());
    }

    #[test]
    fn trivial_table() {
        let q = Quandle::trivial(2).unwrap();
        assert_eq!(q.table(), &[vec![0, 0], vec![1, 1]]);
    }

    #[test]
    fn bad_table_r1() {
        let err = Quandle::from_table(vec![vec![0, 0], vec![0, 1]]).unwrap_err();
        assert!(matches!(err, QuandleError::AxiomViolation { axiom: "R1", .. }));
    }

    #[test]
    fn apply_and_inverse() {
        let q = Quandle::dihedral(3).unwrap();
        assert_eq!(q.apply(0, 1, 1).unwrap(), 2);
        assert_eq!(q.apply(2, 1, -1).unwrap(), 0);
        let t = Quandle::trivial(2).unwrap();
        assert_eq!(t.apply(1, 0, 1).unwrap(), 1);
    }

    #[test]
    fn r1_round_trip_everywhere() {
        for q in [
            Quandle::dihedral(6).unwrap(),
            Quandle::trivial(3).unwrap(),
            Quandle::conjugation(&s3_multiplication_table()).unwrap(),
        ] {
            for a in 0..q.size() {
                for b in 0..q.size() {
                    assert_eq!(q.tri_inv(q.tri(a, b), b), a);
                    assert_eq!(q.tri(q.tri_inv(a, b), b), a);
                }
            }
        }
    }

    #[test]
    fn orbit_examples() {
        assert_eq!(
            Quandle::trivial(3).unwrap().orbits().classes,
            vec![vec![0], vec![1], vec![2]]
        );
        assert_eq!(Quandle::dihedral(3).unwrap().orbits().classes, vec![vec![0, 1, 2]]);
        assert_eq!(
            Quandle::dihedral(4).unwrap().orbits().classes,
            vec![vec![0, 2], vec![1, 3]]
        );
        assert!(Quandle::dihedral(5).unwrap().is_connected());
        assert!(Quandle::trivial(1).unwrap().is_connected());
        assert!(!Quandle::trivial(2).unwrap().is_connected());
    }

    #[test]
    fn conjugation_s3_is_rack_not_connected() {
        let q = Quandle::conjugation(&s3_multiplication_table()).unwrap();
        assert!(q.is_quandle());
        // conjugacy classes of S3: {e}, three transpositions, two 3-cycles
        assert_eq!(q.orbits().classes.len(), 3);
    }

    #[test]
    fn hom_checks() {
        let z3 = Quandle::dihedral(3).unwrap();
        assert!(z3.check_hom(&z3, &[0, 1, 2]).is_ok());
        let t3 = Quandle::trivial(3).unwrap();
        let t1 = Quandle::trivial(1).unwrap();
        assert!(t3.check_hom(&t1, &[0, 0, 0]).is_ok());
        // the inner automorphism ◁0 of Z3
        assert!(z3.check_hom(&z3, &[0, 2, 1]).is_ok());
        // and a non-homomorphism
        assert!(z3.check_hom(&z3, &[0, 0, 1]).is_err());
    }

    #[test]
    fn dihedral_small_all_valid() {
        for p in 1..=23 {
            Quandle::dihedral(p).unwrap();
        }
    }

    #[test]
    fn z3_single_entry_mutations_rejected() {
        let good = Quandle::dihedral(3).unwrap().table().to_vec();
        for i in 0..3 {
            for j in 0..3 {
                for v in 0..3 {
                    if v == good[i][j] {
                        continue;
                    }
                    let mut t = good.clone();
                    t[i][j] = v;
                    assert!(
                        Quandle::from_table(t).is_err(),
                        "mutation ({i},{j})->{v} should break an axiom"
                    );
                }
            }
        }
    }

    #[test]
    fn parse_round_trip() {
        let q = Quandle::dihedral(5).unwrap();
        let q2 = Quandle::parse(&q.dump()).unwrap();
        assert_eq!(q, q2);
    }
}
