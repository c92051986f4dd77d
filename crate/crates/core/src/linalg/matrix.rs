//! Skew-symmetric matrices over GF(p) and exact elimination.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::PrimeField;
use crate::graph::Graph;
use crate::{Error, Result};

/// Reduces the `rows x cols` row-major block in place to reduced row echelon
/// form and returns the pivot column of each nonzero row. The pivot is the
/// first nonzero entry found scanning each column top-down.
pub(crate) fn rref(a: &mut [u32], rows: usize, cols: usize, f: PrimeField) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| a[i * cols + c] != 0) else { continue };
        if pr != r {
            for j in 0..cols {
                a.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(a[r * cols + c]);
        for j in c..cols {
            a[r * cols + j] = f.mul(a[r * cols + j], inv);
        }
        for i in 0..rows {
            let factor = a[i * cols + c];
            if i != r && factor != 0 {
                for j in c..cols {
                    let t = f.mul(factor, a[r * cols + j]);
                    a[i * cols + j] = f.sub(a[i * cols + j], t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank of a `rows x cols` row-major block; the block is consumed.
pub(crate) fn rank_in_place(a: &mut [u32], rows: usize, cols: usize, f: PrimeField) -> usize {
    // Forward elimination only; no need for the reduced form here.
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| a[i * cols + c] != 0) else { continue };
        if pr != r {
            for j in c..cols {
                a.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(a[r * cols + c]);
        for i in r + 1..rows {
            let factor = f.mul(a[i * cols + c], inv);
            if factor != 0 {
                for j in c..cols {
                    let t = f.mul(factor, a[r * cols + j]);
                    a[i * cols + j] = f.sub(a[i * cols + j], t);
                }
            }
        }
        r += 1;
    }
    r
}

/// Basis of `{x : A x = 0}` for a square `k x k` block, plus the rank.
pub(crate) fn null_space(a: &mut [u32], k: usize, f: PrimeField) -> (usize, Vec<Vec<u32>>) {
    let pivots = rref(a, k, k, f);
    let mut is_pivot = vec![false; k];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let basis = (0..k)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut x = vec![0u32; k];
            x[free] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                x[pc] = f.neg(a[row * k + free]);
            }
            x
        })
        .collect();
    (pivots.len(), basis)
}

/// A skew-symmetric matrix over GF(p) together with its support graph: the
/// `(i, j)` entry with `i != j` is nonzero exactly when `{i, j}` is an edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct SkewMatrix {
    field: PrimeField,
    n: usize,
    entries: Vec<u32>,
    support: Graph,
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    p: u32,
    n: usize,
    entries: Vec<Vec<u32>>,
}

impl TryFrom<MatrixRepr> for SkewMatrix {
    type Error = Error;

    fn try_from(r: MatrixRepr) -> Result<Self> {
        let field = PrimeField::new(r.p)?;
        if r.entries.len() != r.n || r.entries.iter().any(|row| row.len() != r.n) {
            return Err(Error::Validation(format!("entries must be {0} x {0}", r.n)));
        }
        SkewMatrix::from_entries(field, r.n, r.entries.concat())
    }
}

impl From<SkewMatrix> for MatrixRepr {
    fn from(m: SkewMatrix) -> Self {
        MatrixRepr { p: m.field.p(), n: m.n, entries: m.rows() }
    }
}

impl SkewMatrix {
    /// Validates a row-major `n x n` array and derives its support.
    pub fn from_entries(field: PrimeField, n: usize, entries: Vec<u32>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::Validation(format!("expected {} entries, got {}", n * n, entries.len())));
        }
        if entries.iter().any(|&x| x >= field.p()) {
            return Err(Error::Validation(format!("entries must lie in [0, {})", field.p())));
        }
        let mut support = Graph::try_empty(n)?;
        for i in 0..n {
            for j in i..n {
                if entries[i * n + j] != field.neg(entries[j * n + i]) {
                    return Err(Error::NotSkew(field.p()));
                }
                if i != j && entries[i * n + j] != 0 {
                    support.add_edge(i, j)?;
                }
            }
        }
        Ok(SkewMatrix { field, n, entries, support })
    }

    /// Matrix with `A[u][v] = value`, `A[v][u] = -value` for `u < v`, where
    /// values are given in [`Graph::edges`] order and must be nonzero.
    pub fn from_edge_values(g: &Graph, field: PrimeField, values: &[u32]) -> Result<Self> {
        let n = g.n();
        if values.len() != g.edge_count() {
            return Err(Error::Validation(format!("{} values for {} edges", values.len(), g.edge_count())));
        }
        let mut entries = vec![0u32; n * n];
        for ((u, v), &x) in g.edges().zip(values) {
            let x = x % field.p();
            if x == 0 {
                return Err(Error::ZeroValue(u, v));
            }
            entries[u * n + v] = x;
            entries[v * n + u] = field.neg(x);
        }
        Ok(SkewMatrix { field, n, entries, support: g.clone() })
    }

    pub(crate) fn from_parts_unchecked(field: PrimeField, support: Graph, entries: Vec<u32>) -> Self {
        let n = support.n();
        debug_assert_eq!(entries.len(), n * n);
        SkewMatrix { field, n, entries, support }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn support(&self) -> &Graph {
        &self.support
    }

    pub fn entry(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.entries.chunks(self.n.max(1)).take(self.n).map(<[u32]>::to_vec).collect()
    }

    /// Exact rank over GF(p). Always even.
    pub fn rank(&self) -> usize {
        rank_skew(self)
    }

    /// Checks skew-symmetry and that the nonzero pattern is exactly the
    /// support.
    pub fn check(&self) -> Result<()> {
        let rebuilt = SkewMatrix::from_entries(self.field, self.n, self.entries.clone())?;
        if rebuilt.support != self.support {
            return Err(Error::Validation("nonzero pattern differs from the support graph".into()));
        }
        Ok(())
    }

    /// Simultaneous row and column relabelling, `i -> perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> SkewMatrix {
        let n = self.n;
        let mut entries = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[perm[i] * n + perm[j]] = self.entries[i * n + j];
            }
        }
        SkewMatrix { field: self.field, n, entries, support: self.support.permute(perm) }
    }
}

pub fn rank_skew(a: &SkewMatrix) -> usize {
    let mut buf = a.entries.clone();
    rank_in_place(&mut buf, a.n, a.n, a.field)
}

/// Builds the matrix of `g` from an edge-to-value map. Keys may be given in
/// either orientation; values are reduced mod p.
pub fn matrix_from_assignment(
    g: &Graph,
    field: PrimeField,
    values: &BTreeMap<(usize, usize), u32>,
) -> Result<SkewMatrix> {
    let mut normalized = BTreeMap::new();
    for (&(u, v), &x) in values {
        let key = (u.min(v), u.max(v));
        if !g.has_edge(key.0, key.1) {
            return Err(Error::ExtraValue(key.0, key.1));
        }
        if x % field.p() == 0 {
            return Err(Error::ZeroValue(key.0, key.1));
        }
        normalized.insert(key, x);
    }
    let ordered = g
        .edges()
        .map(|e| normalized.get(&e).copied().ok_or(Error::MissingEdgeValue(e.0, e.1)))
        .collect::<Result<Vec<_>>>()?;
    SkewMatrix::from_edge_values(g, field, &ordered)
}

/// Uniformly random member of `S^-(GF(p), g)`.
pub fn random_skew_matrix<R: Rng + ?Sized>(g: &Graph, field: PrimeField, rng: &mut R) -> SkewMatrix {
    let values: Vec<u32> = (0..g.edge_count()).map(|_| rng.gen_range(1..field.p())).collect();
    SkewMatrix::from_edge_values(g, field, &values).expect("values are nonzero")
}

/// A matrix in `S^-(GF(p), G)` together with its rank.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankWitness {
    pub rank: usize,
    #[serde(flatten)]
    pub matrix: SkewMatrix,
}

impl RankWitness {
    /// Re-derives the rank and support; the witness certifies itself.
    pub fn verify(&self, g: &Graph) -> Result<()> {
        self.matrix.check()?;
        if self.matrix.support() != g {
            return Err(Error::Validation("witness support differs from the graph".into()));
        }
        if rank_skew(&self.matrix) != self.rank {
            return Err(Error::Validation("reported rank differs from the witness rank".into()));
        }
        Ok(())
    }
}
