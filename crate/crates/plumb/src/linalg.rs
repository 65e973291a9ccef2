//! Exact rational matrices and vectors.
//!
//! Everything here is tolerance-free: determinants via rational Gaussian
//! elimination, negative definiteness via Sylvester's criterion with the
//! leading principal minors kept as an auditable certificate, and the
//! weight-vector solve -Q z = a_hat with positivity asserted.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::PlumbingGraph;
use crate::rat::Rat;
use crate::rng::SplitMix64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalMatrix {
    rows: Vec<Vec<Rat>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalVector(pub Vec<Rat>);

impl RationalVector {
    pub fn from_i64(entries: &[i64]) -> RationalVector {
        RationalVector(entries.iter().map(|&x| Rat::int(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl RationalMatrix {
    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<RationalMatrix> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("matrix must be square".into()));
        }
        Ok(RationalMatrix { rows })
    }

    pub fn from_i64(rows: &[&[i64]]) -> RationalMatrix {
        RationalMatrix {
            rows: rows
                .iter()
                .map(|r| r.iter().map(|&x| Rat::int(x)).collect())
                .collect(),
        }
    }

    pub fn from_graph(g: &PlumbingGraph) -> RationalMatrix {
        RationalMatrix {
            rows: g
                .intersection_matrix()
                .into_iter()
                .map(|r| r.into_iter().map(Rat::int).collect())
                .collect(),
        }
    }

    pub fn identity(n: usize) -> RationalMatrix {
        RationalMatrix {
            rows: (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                        .collect()
                })
                .collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rat {
        &self.rows[i][j]
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.n();
        (0..n).all(|i| (0..i).all(|j| self.rows[i][j] == self.rows[j][i]))
    }

    pub fn neg(&self) -> RationalMatrix {
        RationalMatrix {
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|x| -x).collect())
                .collect(),
        }
    }

    pub fn mul_vec(&self, v: &RationalVector) -> Result<RationalVector> {
        if v.len() != self.n() {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {0}x{0} but vector has length {1}",
                self.n(),
                v.len()
            )));
        }
        Ok(RationalVector(
            self.rows
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(&v.0)
                        .fold(Rat::zero(), |acc, (a, b)| acc + a * b)
                })
                .collect(),
        ))
    }

    fn leading_block(&self, k: usize) -> Vec<Vec<Rat>> {
        (0..k).map(|i| self.rows[i][..k].to_vec()).collect()
    }
}

/// Determinant by rational Gaussian elimination with partial pivoting.
/// Pivot choice only limits intermediate size; the result is exact.
fn det(mut m: Vec<Vec<Rat>>) -> Rat {
    let n = m.len();
    let mut sign = 1i64;
    let mut result = Rat::one();
    for col in 0..n {
        let pivot_row = (col..n).max_by_key(|&r| m[r][col].abs());
        let pivot_row = match pivot_row {
            Some(r) if !m[r][col].is_zero() => r,
            _ => return Rat::zero(),
        };
        if pivot_row != col {
            m.swap(pivot_row, col);
            sign = -sign;
        }
        let pivot = m[col][col].clone();
        result = result * &pivot;
        for r in col + 1..n {
            let factor = &m[r][col] / &pivot;
            if factor.is_zero() {
                continue;
            }
            for c in col..n {
                m[r][c] = &m[r][c] - &(&factor * &m[col][c]);
            }
        }
    }
    result * Rat::int(sign)
}

/// Exact determinants of the top-left k x k blocks, k = 1..n.
pub fn leading_principal_minors(m: &RationalMatrix) -> Vec<Rat> {
    (1..=m.n()).map(|k| det(m.leading_block(k))).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefinitenessCertificate {
    pub minors: Vec<Rat>,
    pub verdict: bool,
}

/// Sylvester's criterion for negative definiteness: (-1)^k * minor_k > 0
/// for every k. Exact, and the minors are returned for audit.
pub fn is_negative_definite(m: &RationalMatrix) -> Result<DefinitenessCertificate> {
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let minors = leading_principal_minors(m);
    let verdict = minors.iter().enumerate().all(|(k0, minor)| {
        let signed = if k0 % 2 == 0 { -minor } else { minor.clone() };
        signed.is_positive()
    });
    Ok(DefinitenessCertificate { minors, verdict })
}

/// Exact solve of M x = b by Gaussian elimination with largest-pivot
/// selection; the solution is verified by substitution before returning.
pub fn solve(m: &RationalMatrix, b: &RationalVector) -> Result<RationalVector> {
    let n = m.n();
    if b.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "matrix is {n}x{n} but right-hand side has length {}",
            b.len()
        )));
    }
    let mut a: Vec<Vec<Rat>> = m.rows.clone();
    let mut rhs = b.0.clone();

    for col in 0..n {
        let pivot_row = (col..n)
            .max_by_key(|&r| a[r][col].abs())
            .filter(|&r| !a[r][col].is_zero())
            .ok_or(Error::Singular { stage: col })?;
        if pivot_row != col {
            a.swap(pivot_row, col);
            rhs.swap(pivot_row, col);
        }
        let pivot = a[col][col].clone();
        for r in col + 1..n {
            let factor = &a[r][col] / &pivot;
            if factor.is_zero() {
                continue;
            }
            for c in col..n {
                a[r][c] = &a[r][c] - &(&factor * &a[col][c]);
            }
            rhs[r] = &rhs[r] - &(&factor * &rhs[col]);
        }
    }

    let mut x = vec![Rat::zero(); n];
    for row in (0..n).rev() {
        let mut acc = rhs[row].clone();
        for c in row + 1..n {
            acc = acc - &a[row][c] * &x[c];
        }
        x[row] = acc / &a[row][row];
    }
    let x = RationalVector(x);

    // substitution check; a failure here is a solver bug, not a user error
    let check = m.mul_vec(&x)?;
    if check != *b {
        return Err(Error::Internal("solve verification failed".into()));
    }
    Ok(x)
}

/// The positive solution z of -Q z = a_hat for a negative definite graph.
/// Positivity of every entry is guaranteed under the preconditions, so a
/// nonpositive entry is an internal invariant failure.
pub fn weight_vector(g: &PlumbingGraph) -> Result<RationalVector> {
    let q = RationalMatrix::from_graph(g);
    let cert = is_negative_definite(&q)?;
    if !cert.verdict {
        return Err(Error::NotNegativeDefinite);
    }
    let a_hat = RationalVector(g.vertices().iter().map(|v| v.area_hat.clone()).collect());
    let z = solve(&q.neg(), &a_hat)?;
    if let Some(i) = z.0.iter().position(|zi| !zi.is_positive()) {
        return Err(Error::Internal(format!(
            "weight vector entry {i} is not positive: z_{i} = {}",
            z.0[i]
        )));
    }
    Ok(z)
}

/// Cone-membership hypothesis test: returns true iff every entry of Q x
/// is <= 0. Under the preconditions on Q (symmetric, negative definite,
/// nonnegative off-diagonals) a true return lets the caller conclude
/// that every entry of x is >= 0.
pub fn lemma_cone_check(q: &RationalMatrix, x: &RationalVector) -> Result<bool> {
    if !q.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let n = q.n();
    for i in 0..n {
        for j in 0..n {
            if i != j && q.entry(i, j).is_negative() {
                return Err(Error::Precondition(format!(
                    "off-diagonal entry ({i},{j}) is negative"
                )));
            }
        }
    }
    if !is_negative_definite(q)?.verdict {
        return Err(Error::NotNegativeDefinite);
    }
    let qx = q.mul_vec(x)?;
    Ok(qx.0.iter().all(|e| !e.is_positive()))
}

/// Seed-deterministic negative definite integer matrix with nonnegative
/// off-diagonals: Q_ij = Q_ji in [0, max_mult] and Q_ii = -(sum of row
/// off-diagonals + t_i) with t_i in 1..=4. Strict diagonal dominance with
/// negative diagonal makes Q negative definite.
pub fn random_negdef_graph_matrix(n: usize, max_mult: u64, seed: u64) -> RationalMatrix {
    assert!(n >= 1);
    let (off, diag) = random_negdef_raw(n, max_mult, seed);
    let mut rows = vec![vec![Rat::zero(); n]; n];
    for i in 0..n {
        rows[i][i] = Rat::int(diag[i]);
        for j in 0..n {
            if i != j {
                rows[i][j] = Rat::int(off[i][j]);
            }
        }
    }
    RationalMatrix { rows }
}

/// The integer data behind `random_negdef_graph_matrix`: off-diagonal
/// multiplicities (upper triangle drawn row-major) and the diagonal.
/// Exposed so the corpus generator can realize the same recipe as a graph.
pub fn random_negdef_raw(n: usize, max_mult: u64, seed: u64) -> (Vec<Vec<i64>>, Vec<i64>) {
    let mut rng = SplitMix64::new(seed);
    let mut off = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let m = rng.below(max_mult + 1) as i64;
            off[i][j] = m;
            off[j][i] = m;
        }
    }
    let diag: Vec<i64> = (0..n)
        .map(|i| {
            let t = rng.range_i64(1, 4);
            -(off[i].iter().sum::<i64>() + t)
        })
        .collect();
    (off, diag)
}
