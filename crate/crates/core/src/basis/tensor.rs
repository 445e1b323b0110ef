use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Symmetry {
    /// Totally antisymmetric, like `f_abc`.
    Antisymmetric,
    /// Totally symmetric, like `d_abc`.
    Symmetric,
}

/// Sparse rank-3 tensor over adjoint indices with a total (anti)symmetry.
///
/// Only canonically ordered triples are stored: `a < b < c` for the
/// antisymmetric flavor, `a <= b <= c` for the symmetric one. Indices are
/// 0-based.
#[derive(Debug, Clone, PartialEq)]
pub struct Rank3Tensor {
    n: usize,
    symmetry: Symmetry,
    entries: BTreeMap<(usize, usize, usize), f64>,
}

/// Sorts a triple and returns the sign of the sorting permutation.
pub(crate) fn sort3(mut idx: [usize; 3]) -> ([usize; 3], f64) {
    let mut sign = 1.0;
    if idx[0] > idx[1] {
        idx.swap(0, 1);
        sign = -sign;
    }
    if idx[1] > idx[2] {
        idx.swap(1, 2);
        sign = -sign;
    }
    if idx[0] > idx[1] {
        idx.swap(0, 1);
        sign = -sign;
    }
    (idx, sign)
}

impl Rank3Tensor {
    pub fn new(n: usize, symmetry: Symmetry) -> Self {
        Self {
            n,
            symmetry,
            entries: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Range of each index, `N^2 - 1`.
    pub fn dim(&self) -> usize {
        self.n * self.n - 1
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Stores `value` at `(a, b, c)` in any order. Returns `false` (and
    /// stores nothing) for repeated indices of an antisymmetric tensor or
    /// out-of-range indices.
    pub fn insert(&mut self, a: usize, b: usize, c: usize, value: f64) -> bool {
        let dim = self.dim();
        if a >= dim || b >= dim || c >= dim {
            return false;
        }
        let (idx, sign) = sort3([a, b, c]);
        let value = match self.symmetry {
            Symmetry::Antisymmetric => {
                if idx[0] == idx[1] || idx[1] == idx[2] {
                    return false;
                }
                sign * value
            }
            Symmetry::Symmetric => value,
        };
        self.insert_canonical(idx, value);
        true
    }

    pub(crate) fn insert_canonical(&mut self, idx: [usize; 3], value: f64) {
        if value == 0.0 {
            self.entries.remove(&(idx[0], idx[1], idx[2]));
        } else {
            self.entries.insert((idx[0], idx[1], idx[2]), value);
        }
    }

    /// Value at `(a, b, c)` for any index order.
    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        let (idx, sign) = sort3([a, b, c]);
        let stored = self.entries.get(&(idx[0], idx[1], idx[2])).copied().unwrap_or(0.0);
        match self.symmetry {
            Symmetry::Antisymmetric => sign * stored,
            Symmetry::Symmetric => stored,
        }
    }

    /// Canonically ordered nonzero entries.
    pub fn entries(&self) -> impl Iterator<Item = ([usize; 3], f64)> + '_ {
        self.entries.iter().map(|(&(a, b, c), &v)| ([a, b, c], v))
    }

    /// Expands into a dense `dim^3` array with every permutation filled in.
    pub fn to_dense(&self) -> DenseTensor {
        let mut dense = DenseTensor::zeros(self.dim());
        for ([a, b, c], v) in self.entries() {
            let perms = [
                ([a, b, c], 1.0),
                ([b, c, a], 1.0),
                ([c, a, b], 1.0),
                ([b, a, c], -1.0),
                ([a, c, b], -1.0),
                ([c, b, a], -1.0),
            ];
            for ([x, y, z], parity) in perms {
                let s = match self.symmetry {
                    Symmetry::Antisymmetric => parity,
                    Symmetry::Symmetric => 1.0,
                };
                dense.set(x, y, z, s * v);
            }
        }
        dense
    }
}

/// Dense `dim × dim × dim` real array, used in hot loops.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseTensor {
    dim: usize,
    data: Vec<f64>,
}

impl DenseTensor {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim * dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        self.data[(a * self.dim + b) * self.dim + c]
    }

    #[inline]
    pub fn set(&mut self, a: usize, b: usize, c: usize, v: f64) {
        self.data[(a * self.dim + b) * self.dim + c] = v;
    }

    /// The slice `t[a][b][..]`.
    #[inline]
    pub fn fiber(&self, a: usize, b: usize) -> &[f64] {
        let start = (a * self.dim + b) * self.dim;
        &self.data[start..start + self.dim]
    }
}
