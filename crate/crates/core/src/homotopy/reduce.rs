use std::collections::BTreeMap;
use std::sync::Arc;

use super::cert::Certificate;
use super::closed_maps;
use crate::dgbimod::{hom_differential, split_idempotent, BimoduleMap, DgBimodule};
use crate::error::Result;
use crate::linalg::sparse::solve_columns;
use crate::linalg::{Field, SparseMatrix};
use crate::twisted::{Ambient, Summand, Tot, TwistedComplex};

const MAX_STEPS: usize = 10_000;

/// Simplifies a twisted complex by Gaussian elimination.
///
/// Repeatedly cancels a pair of summands joined by an invertible closed
/// degree-0 component. A component that is only split surjective (or split
/// injective) is first turned into an isomorphism onto a copy of the smaller
/// summand by splitting off the complementary idempotent, which is registered
/// as a new generator of the ambient. Returns the reduced complex and a
/// certificate for the homotopy equivalence of totals.
pub fn gaussian_reduce(amb: &Ambient, x: &TwistedComplex) -> Result<(TwistedComplex, Certificate)> {
    let mut cur = x.clone();
    let mut cert = Certificate::identity(cur.tot(amb)?.module);
    for _ in 0..MAX_STEPS {
        let tot = cur.tot(amb)?;
        let step = match cancel_any(amb, &cur, &tot)? {
            Some(s) => Some(s),
            None => split_any(amb, &cur, &tot)?,
        };
        match step {
            Some((next, c)) => {
                cert = cert.then(&c)?;
                cur = next;
            }
            None => break,
        }
    }
    Ok((cur, cert))
}

fn cancel_any(amb: &Ambient, x: &TwistedComplex, tot: &Tot) -> Result<Option<(TwistedComplex, Certificate)>> {
    let keys: Vec<(usize, usize)> = x.alpha.keys().copied().collect();
    for (k, l) in keys {
        if let Some(r) = cancel(amb, x, tot, k, l)? {
            return Ok(Some(r));
        }
    }
    Ok(None)
}

fn selector(n: usize, idx: &[usize], field: Field) -> SparseMatrix {
    // n x idx.len(), column j is the basis vector idx[j]
    SparseMatrix::from_triples(n, idx.len(), field, idx.iter().enumerate().map(|(j, &i)| (i, j, field.one())).collect())
}

/// Cancels `F_l → F_k` when `α_{k,l}` is invertible of degree 0.
fn cancel(amb: &Ambient, x: &TwistedComplex, tot: &Tot, k: usize, l: usize) -> Result<Option<(TwistedComplex, Certificate)>> {
    let Some(a) = x.alpha.get(&(k, l)) else { return Ok(None) };
    if x.alpha_degree(k, l) != 0 || a.nrows() != a.ncols() {
        return Ok(None);
    }
    let Some(phi_inv) = a.inverse() else { return Ok(None) };
    let field = amb.field();
    let n = tot.dim();
    let d = tot.module.diff();
    let rest: Vec<usize> = (0..x.len()).filter(|&m| m != k && m != l).collect();
    let r_idx: Vec<usize> = rest.iter().flat_map(|&m| tot.range(m)).collect();
    let b: Vec<usize> = tot.range(l).collect();
    let bp: Vec<usize> = tot.range(k).collect();

    let d_rb = d.select(&r_idx, &b);
    let d_bpr = d.select(&bp, &r_idx);
    let d_rr = d.select(&r_idx, &r_idx);
    let iota_r = selector(n, &r_idx, field);
    let iota_1 = selector(n, &b, field);
    let pi_r = iota_r.transpose();
    let pi_2 = selector(n, &bp, field).transpose();

    let corr = &d_rb * &phi_inv;
    let dprime = &d_rr - &(&corr * &d_bpr);
    let p = &pi_r - &(&corr * &pi_2);
    let lift = &iota_1 * &phi_inv;
    let i = &iota_r - &(&lift * &d_bpr);
    let h = &lift * &pi_2;

    // Summand layout of the remaining part, in positions of `rest`.
    let dims: Vec<usize> = rest.iter().map(|&m| tot.dims[m]).collect();
    let Some(order) = block_order(&dprime, &dims) else { return Ok(None) };
    let mut offs = Vec::with_capacity(dims.len());
    let mut acc = 0;
    for &dm in &dims {
        offs.push(acc);
        acc += dm;
    }
    let perm: Vec<usize> = order.iter().flat_map(|&q| offs[q]..offs[q] + dims[q]).collect();
    let pm = selector(r_idx.len(), &perm, field).transpose();
    let dnew = &(&pm * &dprime) * &pm.transpose();
    let summands: Vec<Summand> = order.iter().map(|&q| x.summands[rest[q]].clone()).collect();
    let Some(next) = complex_from_total(amb, x, summands, &dnew)? else { return Ok(None) };
    let ntot = next.tot(amb)?;

    let f = &pm * &p;
    let g = &i * &pm.transpose();
    let zero = SparseMatrix::zero(ntot.dim(), ntot.dim(), field);
    for hs in [-&h, h.clone()] {
        let c = Certificate {
            source: tot.module.clone(),
            target: ntot.module.clone(),
            f: f.clone(),
            g: g.clone(),
            h_src: hs,
            h_tgt: zero.clone(),
        };
        if c.verify().passed {
            return Ok(Some((next, c)));
        }
    }
    Ok(None)
}

/// An order of the blocks of `d` in which every nonzero off-diagonal block
/// lies above the diagonal, smallest index first; `None` on a cycle.
fn block_order(d: &SparseMatrix, dims: &[usize]) -> Option<Vec<usize>> {
    let n = dims.len();
    let mut owner = Vec::new();
    for (q, &dm) in dims.iter().enumerate() {
        owner.extend(std::iter::repeat(q).take(dm));
    }
    // edge a -> b when block (a, b) is nonzero: a must precede b
    let mut succ = vec![std::collections::BTreeSet::new(); n];
    for (i, j, _) in d.entries() {
        let (a, b) = (owner[i], owner[j]);
        if a != b {
            succ[a].insert(b);
        }
    }
    let mut indeg = vec![0usize; n];
    for s in &succ {
        for &b in s {
            indeg[b] += 1;
        }
    }
    let mut ready: std::collections::BTreeSet<usize> = (0..n).filter(|&q| indeg[q] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(&q) = ready.iter().next() {
        ready.remove(&q);
        order.push(q);
        for &b in &succ[q] {
            indeg[b] -= 1;
            if indeg[b] == 0 {
                ready.insert(b);
            }
        }
    }
    (order.len() == n).then_some(order)
}

/// Reads a twisted complex with the given summands off a total differential;
/// `None` if the diagonal or lower blocks disagree.
fn complex_from_total(
    amb: &Ambient,
    like: &TwistedComplex,
    summands: Vec<Summand>,
    d: &SparseMatrix,
) -> Result<Option<TwistedComplex>> {
    let mut out = TwistedComplex { source: like.source, target: like.target, summands, alpha: BTreeMap::new() };
    let dims = (0..out.len()).map(|m| Ok(out.summand_module(amb, m)?.dim())).collect::<Result<Vec<_>>>()?;
    let mut offs = Vec::with_capacity(dims.len());
    let mut acc = 0;
    for &dm in &dims {
        offs.push(acc);
        acc += dm;
    }
    if acc != d.nrows() {
        return Ok(None);
    }
    for kk in 0..dims.len() {
        for ll in kk + 1..dims.len() {
            let blk = d.block(offs[kk]..offs[kk] + dims[kk], offs[ll]..offs[ll] + dims[ll]);
            if !blk.is_zero() {
                out.alpha.insert((kk, ll), blk);
            }
        }
    }
    if out.tot(amb)?.module.diff() != d {
        return Ok(None);
    }
    Ok(Some(out))
}

fn split_any(amb: &Ambient, x: &TwistedComplex, tot: &Tot) -> Result<Option<(TwistedComplex, Certificate)>> {
    let keys: Vec<(usize, usize)> = x.alpha.keys().copied().collect();
    for (k, l) in keys {
        let a = &x.alpha[&(k, l)];
        if x.alpha_degree(k, l) != 0 || a.nrows() == a.ncols() {
            continue;
        }
        let fk = x.summand_module(amb, k)?;
        let fl = x.summand_module(amb, l)?;
        if !hom_differential(&fl, &fk, 0, a).is_zero() {
            continue;
        }
        let r = if a.ncols() > a.nrows() {
            split_epi(amb, x, tot, k, l, &fk, &fl)?
        } else {
            split_mono(amb, x, tot, k, l, &fk, &fl)?
        };
        if r.is_some() {
            return Ok(r);
        }
    }
    Ok(None)
}

/// A closed degree-0 `s: from → to` (from the basis `maps`) with `lhs(s) = id`.
fn solve_identity(maps: &[SparseMatrix], lhs: impl Fn(&SparseMatrix) -> SparseMatrix, n: usize, field: Field) -> Option<SparseMatrix> {
    let cols: Vec<_> = maps.iter().map(|s| lhs(s).flatten()).collect();
    let target = SparseMatrix::identity(n, field).flatten();
    let c = solve_columns(&cols, n * n, &target, field)?;
    let mut out: Option<SparseMatrix> = None;
    for (j, v) in c {
        let t = maps[j].scaled(&v);
        out = Some(match out {
            Some(o) => &o + &t,
            None => t,
        });
    }
    out
}

/// Complement of an idempotent `e` on `m`, registered as a generator.
fn complement(amb: &Ambient, x: &TwistedComplex, m: &Arc<DgBimodule>, e: &SparseMatrix) -> Result<(usize, SparseMatrix, SparseMatrix)> {
    let one_minus = &SparseMatrix::identity(m.dim(), m.field()) - e;
    let (kmod, incl, proj) = split_idempotent(&BimoduleMap::new(m.clone(), m.clone(), 0, one_minus))?;
    let g = amb.intern_generator("K", kmod, x.target, x.source)?;
    Ok((g, incl.matrix, proj.matrix))
}

#[allow(clippy::too_many_arguments)]
fn split_epi(
    amb: &Ambient,
    x: &TwistedComplex,
    tot: &Tot,
    k: usize,
    l: usize,
    fk: &Arc<DgBimodule>,
    fl: &Arc<DgBimodule>,
) -> Result<Option<(TwistedComplex, Certificate)>> {
    let a = &x.alpha[&(k, l)];
    let field = amb.field();
    let maps = closed_maps(fk, fl, 0)?;
    let Some(sigma) = solve_identity(&maps, |s| a * s, fk.dim(), field) else { return Ok(None) };
    let (g, incl, proj) = complement(amb, x, fl, &(&sigma * a))?;
    let s_l = x.summands[l].shift;
    let copy = Summand { word: x.summands[k].word.clone(), shift: s_l };
    let kk = Summand { word: vec![g], shift: s_l };
    let psi = a.vstack(&proj);
    let psi_inv = sigma.hstack(&incl);
    let Some((y, c)) = replace_summand(amb, x, tot, l, vec![copy, kk], &psi, &psi_inv)? else { return Ok(None) };
    let ytot = y.tot(amb)?;
    match cancel(amb, &y, &ytot, k, l)? {
        Some((z, c2)) => Ok(Some((z, c.then(&c2)?))),
        None => Ok(None),
    }
}

#[allow(clippy::too_many_arguments)]
fn split_mono(
    amb: &Ambient,
    x: &TwistedComplex,
    tot: &Tot,
    k: usize,
    l: usize,
    fk: &Arc<DgBimodule>,
    fl: &Arc<DgBimodule>,
) -> Result<Option<(TwistedComplex, Certificate)>> {
    let a = &x.alpha[&(k, l)];
    let field = amb.field();
    let maps = closed_maps(fk, fl, 0)?;
    let Some(rho) = solve_identity(&maps, |r| r * a, fl.dim(), field) else { return Ok(None) };
    let (g, incl, proj) = complement(amb, x, fk, &(a * &rho))?;
    let s_k = x.summands[k].shift;
    let copy = Summand { word: x.summands[l].word.clone(), shift: s_k };
    let kk = Summand { word: vec![g], shift: s_k };
    let psi = rho.vstack(&proj);
    let psi_inv = a.hstack(&incl);
    let Some((y, c)) = replace_summand(amb, x, tot, k, vec![copy, kk], &psi, &psi_inv)? else { return Ok(None) };
    let ytot = y.tot(amb)?;
    match cancel(amb, &y, &ytot, k, l + 1)? {
        Some((z, c2)) => Ok(Some((z, c.then(&c2)?))),
        None => Ok(None),
    }
}

/// Replaces summand `m` by `parts` through an isomorphism `psi` of that block.
fn replace_summand(
    amb: &Ambient,
    x: &TwistedComplex,
    tot: &Tot,
    m: usize,
    parts: Vec<Summand>,
    psi: &SparseMatrix,
    psi_inv: &SparseMatrix,
) -> Result<Option<(TwistedComplex, Certificate)>> {
    let field = amb.field();
    let mut blocks: Vec<SparseMatrix> = Vec::new();
    let mut inv_blocks: Vec<SparseMatrix> = Vec::new();
    for q in 0..x.len() {
        if q == m {
            blocks.push(psi.clone());
            inv_blocks.push(psi_inv.clone());
        } else {
            blocks.push(SparseMatrix::identity(tot.dims[q], field));
            inv_blocks.push(SparseMatrix::identity(tot.dims[q], field));
        }
    }
    let big = SparseMatrix::block_diag(&blocks.iter().collect::<Vec<_>>(), field);
    let big_inv = SparseMatrix::block_diag(&inv_blocks.iter().collect::<Vec<_>>(), field);
    let d = &(&big * tot.module.diff()) * &big_inv;
    let mut summands = x.summands.clone();
    summands.splice(m..m + 1, parts);
    let Some(y) = complex_from_total(amb, x, summands, &d)? else { return Ok(None) };
    let ytot = y.tot(amb)?;
    let (n, nn) = (tot.dim(), ytot.dim());
    let c = Certificate {
        source: tot.module.clone(),
        target: ytot.module.clone(),
        f: big,
        g: big_inv,
        h_src: SparseMatrix::zero(n, n, field),
        h_tgt: SparseMatrix::zero(nn, nn, field),
    };
    Ok(c.verify().passed.then_some((y, c)))
}
