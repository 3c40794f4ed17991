use std::collections::HashMap;
use std::sync::Arc;

use super::bimodule::{same_algebra, DgBimodule};
use crate::error::{mismatch, structural, Result};
use crate::linalg::sparse::{collect_terms, Echelon};
use crate::linalg::{GradedSpace, Scalar, SparseMatrix, SparseVec};

/// `M_1 ⊗_{B_1} M_2 ⊗ ... ⊗_{B_{k-1}} M_k` as the quotient of the tuples of
/// idempotent-compatible basis elements by the balancing relations
/// `(xγ) ⊗ y - x ⊗ (γy)` for the generators `γ` of each middle algebra.
///
/// The basis of the result is the set of tuples that are not pivots of the
/// reduced relation matrix, so it depends only on the list of factors.
#[derive(Clone, Debug)]
pub struct Realized {
    pub module: Arc<DgBimodule>,
    pub factors: Vec<Arc<DgBimodule>>,
    tuples: Vec<Vec<usize>>,
    tuple_index: HashMap<Vec<usize>, usize>,
    relations: Echelon,
    /// Tuple index of each basis element of `module`.
    quotient: Vec<usize>,
    qpos: HashMap<usize, usize>,
}

impl Realized {
    /// Basis element `q` as a tuple of factor basis indices.
    pub fn tuple(&self, q: usize) -> &[usize] {
        &self.tuples[self.quotient[q]]
    }

    pub fn tuple_count(&self) -> usize {
        self.tuples.len()
    }

    /// Image in the quotient of a combination of tuples.
    pub fn project(&self, terms: Vec<(Vec<usize>, Scalar)>) -> SparseVec {
        let mut w = Vec::with_capacity(terms.len());
        for (t, c) in terms {
            if let Some(&i) = self.tuple_index.get(&t) {
                w.push((i, c));
            }
        }
        self.project_w(collect_terms(w))
    }

    fn project_w(&self, w: SparseVec) -> SparseVec {
        let r = self.relations.reduce(&w);
        let mut out: SparseVec = r.into_iter().map(|(i, c)| (self.qpos[&i], c)).collect();
        out.sort_by_key(|t| t.0);
        out
    }
}

fn idempotent_blocks(m: &DgBimodule) -> (HashMap<usize, Vec<usize>>, HashMap<usize, Vec<usize>>) {
    let mut by_left: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut by_right: HashMap<usize, Vec<usize>> = HashMap::new();
    for i in 0..m.dim() {
        let (u, v) = m.block(i);
        by_left.entry(u).or_default().push(i);
        by_right.entry(v).or_default().push(i);
    }
    (by_left, by_right)
}

/// Tuples `(x_a, ..., x_b)` of factors `a..=b` with matching junction blocks,
/// grouped by (left block of `x_a`, right block of `x_b`).
fn chains(factors: &[Arc<DgBimodule>], a: usize, b: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0..factors[a].dim()).map(|i| vec![i]).collect();
    for t in a + 1..=b {
        let (by_left, _) = idempotent_blocks(&factors[t]);
        let mut next = Vec::new();
        for p in &out {
            let v = factors[t - 1].block(*p.last().unwrap()).1;
            if let Some(xs) = by_left.get(&v) {
                for &x in xs {
                    let mut q = p.clone();
                    q.push(x);
                    next.push(q);
                }
            }
        }
        out = next;
    }
    out
}

/// Realizes the tensor product of a nonempty list of composable bimodules.
pub fn multi_tensor(factors: &[Arc<DgBimodule>]) -> Result<Realized> {
    let k = factors.len();
    if k == 0 {
        return Err(structural("empty tensor product"));
    }
    for w in factors.windows(2) {
        if !same_algebra(&w[0].right, &w[1].left) {
            return Err(mismatch("tensor factors are not composable"));
        }
    }
    let field = factors[0].field();
    let tuples = chains(factors, 0, k - 1);
    let tuple_index: HashMap<Vec<usize>, usize> = tuples.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
    let idx = |t: &Vec<usize>| tuple_index.get(t).copied();

    let mut relations = Echelon::new(tuples.len(), field);
    for t in 0..k - 1 {
        let (x, y) = (&factors[t], &factors[t + 1]);
        let mid = &x.right;
        let prefixes = chains(factors, 0, t);
        let suffixes = if t + 1 < k { chains(factors, t + 1, k - 1) } else { vec![vec![]] };
        let mut pre_by_block: HashMap<usize, Vec<&Vec<usize>>> = HashMap::new();
        for p in &prefixes {
            pre_by_block.entry(x.block(*p.last().unwrap()).1).or_default().push(p);
        }
        let mut suf_by_block: HashMap<usize, Vec<&Vec<usize>>> = HashMap::new();
        for s in &suffixes {
            suf_by_block.entry(y.block(s[0]).0).or_default().push(s);
        }
        for &g in mid.generators() {
            let (s_blk, u_blk) = mid.block(g);
            let (Some(ps), Some(ss)) = (pre_by_block.get(&s_blk), suf_by_block.get(&u_blk)) else {
                continue;
            };
            for p in ps {
                let xg = x.right_action(g).col(*p.last().unwrap());
                for s in ss {
                    let gy = y.left_action(g).col(s[0]);
                    let mut terms = Vec::new();
                    for (c, v) in xg {
                        let mut tup = p[..p.len() - 1].to_vec();
                        tup.push(*c);
                        tup.extend_from_slice(s);
                        if let Some(i) = idx(&tup) {
                            terms.push((i, v.clone()));
                        }
                    }
                    for (d, v) in gy {
                        let mut tup = p.to_vec();
                        tup.push(*d);
                        tup.extend_from_slice(&s[1..]);
                        if let Some(i) = idx(&tup) {
                            terms.push((i, -v));
                        }
                    }
                    let row = collect_terms(terms);
                    if !row.is_empty() {
                        relations.insert(row);
                    }
                }
            }
        }
    }
    relations.finish();
    let quotient = relations.free_columns();
    let qpos: HashMap<usize, usize> = quotient.iter().enumerate().map(|(q, &i)| (i, q)).collect();

    let degree = |tup: &[usize]| tup.iter().enumerate().map(|(t, &x)| factors[t].degree(x)).sum::<i64>();
    let basis = quotient
        .iter()
        .map(|&i| {
            let tup = &tuples[i];
            let label = tup.iter().enumerate().map(|(t, &x)| factors[t].label(x)).collect::<Vec<_>>().join("⊗");
            (label, degree(tup))
        })
        .collect();
    let space = GradedSpace::new(field, basis)?;

    let mut r = Realized {
        module: Arc::new(DgBimodule::zero(factors[0].left.clone(), factors[k - 1].right.clone())),
        factors: factors.to_vec(),
        tuples,
        tuple_index,
        relations,
        quotient,
        qpos,
    };
    let n = r.quotient.len();
    let (first, last) = (&factors[0], &factors[k - 1]);
    let lact = (0..first.left.dim())
        .map(|a| {
            let cols = (0..n)
                .map(|q| {
                    let tup = r.tuple(q).to_vec();
                    let terms = first
                        .left_action(a)
                        .col(tup[0])
                        .iter()
                        .map(|(c, v)| {
                            let mut t = tup.clone();
                            t[0] = *c;
                            (t, v.clone())
                        })
                        .collect();
                    r.project(terms)
                })
                .collect();
            SparseMatrix::from_columns(n, field, cols)
        })
        .collect();
    let ract = (0..last.right.dim())
        .map(|b| {
            let cols = (0..n)
                .map(|q| {
                    let tup = r.tuple(q).to_vec();
                    let terms = last
                        .right_action(b)
                        .col(tup[k - 1])
                        .iter()
                        .map(|(c, v)| {
                            let mut t = tup.clone();
                            t[k - 1] = *c;
                            (t, v.clone())
                        })
                        .collect();
                    r.project(terms)
                })
                .collect();
            SparseMatrix::from_columns(n, field, cols)
        })
        .collect();
    let diff_cols = (0..n)
        .map(|q| {
            let tup = r.tuple(q).to_vec();
            let mut terms = Vec::new();
            let mut deg = 0;
            for t in 0..k {
                let s = field.sign(deg);
                for (c, v) in factors[t].diff().col(tup[t]) {
                    let mut u = tup.clone();
                    u[t] = *c;
                    terms.push((u, &s * v));
                }
                deg += factors[t].degree(tup[t]);
            }
            r.project(terms)
        })
        .collect();
    let diff = SparseMatrix::from_columns(n, field, diff_cols);
    let block = (0..n)
        .map(|q| {
            let tup = r.tuple(q);
            (first.block(tup[0]).0, last.block(tup[k - 1]).1)
        })
        .collect();
    r.module = Arc::new(DgBimodule {
        left: first.left.clone(),
        right: last.right.clone(),
        space,
        lact,
        ract,
        diff,
        block,
    });
    Ok(r)
}

/// `M ∘_B N`: the cokernel of `ρ_M ⊗ id - id ⊗ λ_N` on `M ⊗ B ⊗ N → M ⊗ N`.
pub fn tensor_over_algebra(m: &Arc<DgBimodule>, n: &Arc<DgBimodule>) -> Result<DgBimodule> {
    Ok((*multi_tensor(&[m.clone(), n.clone()])?.module).clone())
}
