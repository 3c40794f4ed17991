use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use super::sparse::{columns_to_rows, solve_columns, Echelon, SparseVec};
use super::{Field, LinalgError};

/// A finite graded vector space with a labelled basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedSpace {
    pub field: Field,
    pub basis: Vec<(String, i64)>,
}

impl GradedSpace {
    pub fn new(field: Field, basis: Vec<(String, i64)>) -> Result<Self, LinalgError> {
        let mut seen = HashSet::new();
        for (l, _) in &basis {
            if !seen.insert(l.as_str()) {
                return Err(LinalgError::Parse(format!("duplicate label {l}")));
            }
        }
        Ok(GradedSpace { field, basis })
    }

    /// Basis labelled `prefix0, prefix1, ...`.
    pub fn anonymous(field: Field, prefix: &str, degrees: &[i64]) -> Self {
        GradedSpace {
            field,
            basis: degrees.iter().enumerate().map(|(i, &d)| (format!("{prefix}{i}"), d)).collect(),
        }
    }

    pub fn zero(field: Field) -> Self {
        GradedSpace { field, basis: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.basis[i].1
    }

    pub fn label(&self, i: usize) -> &str {
        &self.basis[i].0
    }

    pub fn degrees(&self) -> BTreeSet<i64> {
        self.basis.iter().map(|b| b.1).collect()
    }

    pub fn in_degree(&self, n: i64) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.basis[i].1 == n).collect()
    }

    pub fn dim_in_degree(&self, n: i64) -> usize {
        self.basis.iter().filter(|b| b.1 == n).count()
    }

    /// `V<k>`: the element of degree `d` sits in degree `d - k`.
    pub fn shifted(&self, k: i64) -> GradedSpace {
        GradedSpace {
            field: self.field,
            basis: self.basis.iter().map(|(l, d)| (l.clone(), d - k)).collect(),
        }
    }
}

/// A graded space with a degree +1 differential, stored column by column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    pub space: GradedSpace,
    /// `diff[j]` is the image of basis vector `j`.
    pub diff: Vec<SparseVec>,
}

impl Complex {
    pub fn new(space: GradedSpace, diff: Vec<SparseVec>) -> Result<Self, LinalgError> {
        if diff.len() != space.dim() {
            return Err(LinalgError::Dimension { expected: space.dim(), found: diff.len() });
        }
        for (j, col) in diff.iter().enumerate() {
            for (i, _) in col {
                if *i >= space.dim() || space.degree(*i) != space.degree(j) + 1 {
                    return Err(LinalgError::Dimension { expected: j, found: *i });
                }
            }
        }
        let c = Complex { space, diff };
        if !c.squares_to_zero() {
            return Err(LinalgError::NotAComplex);
        }
        Ok(c)
    }

    pub fn field(&self) -> Field {
        self.space.field
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut terms = Vec::new();
        for (j, c) in v {
            for (i, d) in &self.diff[*j] {
                terms.push((*i, c * d));
            }
        }
        super::sparse::collect_terms(terms)
    }

    pub fn squares_to_zero(&self) -> bool {
        self.diff.iter().all(|c| self.apply(c).is_empty())
    }

    /// The differential from degree `n` to `n + 1` in local coordinates.
    fn local_columns(&self, n: i64) -> (Vec<usize>, Vec<usize>, Vec<SparseVec>) {
        let src = self.space.in_degree(n);
        let tgt = self.space.in_degree(n + 1);
        let pos: std::collections::HashMap<usize, usize> =
            tgt.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let cols = src
            .iter()
            .map(|&j| self.diff[j].iter().map(|(i, v)| (pos[i], v.clone())).collect())
            .collect();
        (src, tgt, cols)
    }

    /// Dimension of `H^n` and representatives of a basis (as global vectors).
    pub fn cohomology(&self, n: i64) -> (usize, Vec<SparseVec>) {
        let field = self.field();
        let (src, tgt, cols) = self.local_columns(n);
        let ker = Echelon::from_rows(src.len(), field, columns_to_rows(&cols, tgt.len())).kernel();
        let (_, _, below) = self.local_columns(n - 1);
        let mut e = Echelon::new(src.len(), field);
        for b in below {
            e.insert(b);
        }
        let mut reps = Vec::new();
        for k in ker {
            if e.insert(k.clone()) {
                reps.push(k.into_iter().map(|(i, v)| (src[i], v)).collect());
            }
        }
        (reps.len(), reps)
    }

    /// Degrees where the space is nonzero.
    pub fn support(&self) -> BTreeSet<i64> {
        self.space.degrees()
    }

    pub fn is_acyclic(&self) -> bool {
        self.support().into_iter().all(|n| self.cohomology(n).0 == 0)
    }

    /// Some `h` with `d h = v`, for `v` homogeneous of degree `n`.
    pub fn preimage(&self, v: &SparseVec, n: i64) -> Option<SparseVec> {
        if v.is_empty() {
            return Some(Vec::new());
        }
        let (src, tgt, cols) = self.local_columns(n - 1);
        let pos: std::collections::HashMap<usize, usize> =
            tgt.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let mut b = Vec::new();
        for (i, c) in v {
            b.push((*pos.get(i)?, c.clone()));
        }
        b.sort_by_key(|t| t.0);
        let x = solve_columns(&cols, tgt.len(), &b, self.field())?;
        Some(x.into_iter().map(|(i, c)| (src[i], c)).collect())
    }
}
