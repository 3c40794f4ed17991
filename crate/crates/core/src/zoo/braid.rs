use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{projective_pair, zigzag, zigzag_loop};
use crate::dgalg::DgAlgebra;
use crate::error::{precondition, structural, Result};
use crate::linalg::sparse::{collect_terms, solve_columns};
use crate::linalg::{Field, Scalar, SparseMatrix, SparseVec};
use crate::twisted::{compose, cone, Ambient, TwistedComplex, TwistedMorphism};

/// A braid word: letters `±i` with `1 ≤ i ≤ n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BraidWord {
    pub n: usize,
    pub letters: Vec<i64>,
}

impl BraidWord {
    pub fn new(n: usize, letters: Vec<i64>) -> Result<Self> {
        for &l in &letters {
            if l == 0 || l.unsigned_abs() as usize > n {
                return Err(precondition(format!("letter {l} out of range for {n} generators")));
            }
        }
        Ok(BraidWord { n, letters })
    }

    /// Parses whitespace- or comma-separated signed integers.
    pub fn parse(n: usize, s: &str) -> Result<Self> {
        let letters = s
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<i64>().map_err(|_| structural(format!("bad braid letter {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, letters)
    }
}

/// The 2-category generated by the zigzag algebra `Z`: objects `Z` and the
/// point, generators `Ze_i` and `e_iZ`, so that `P_i = Ze_i ⊗ e_iZ` is the
/// word `[Ze_i, e_iZ]`.
#[derive(Debug)]
pub struct ZigzagAmbient {
    pub ambient: Ambient,
    pub algebra: Arc<DgAlgebra>,
    pub z: usize,
    pub point: usize,
    /// `p[i]` is the word of `P_{i+1}`.
    pub p: Vec<Vec<usize>>,
    /// Multiplication `P_i → Z`.
    pub mult: Vec<SparseMatrix>,
    /// Coevaluation `Z → P_i` of the trace-form duality.
    pub coev: Vec<SparseMatrix>,
}

pub fn zigzag_ambient(n: usize, field: Field) -> Result<ZigzagAmbient> {
    let z = Arc::new(zigzag(n, field)?);
    let mut amb = Ambient::new(field);
    let zo = amb.add_object("Z", z.clone());
    let pt = amb.add_object("k", Arc::new(DgAlgebra::ground_field(field)));
    let mut p = Vec::new();
    let mut mult = Vec::new();
    let mut coev = Vec::new();
    for i in 0..n {
        let (ae, ea) = projective_pair(&z, i)?;
        let g1 = amb.add_generator(format!("Ze{}", i + 1), ae.clone(), zo, pt)?;
        let g2 = amb.add_generator(format!("e{}Z", i + 1), ea.clone(), pt, zo)?;
        let word = vec![g1, g2];
        let r = amb.realize(zo, &word)?;
        let pi = &r.module;
        let xs: Vec<usize> = (0..ae.dim()).map(|a| z.index_of(ae.label(a)).unwrap()).collect();
        let ys: Vec<usize> = (0..ea.dim()).map(|b| z.index_of(ea.label(b)).unwrap()).collect();
        let cols = (0..pi.dim())
            .map(|q| {
                let t = r.tuple(q);
                z.mul_basis(xs[t[0]], ys[t[1]]).clone()
            })
            .collect();
        mult.push(SparseMatrix::from_columns(z.dim(), field, cols));

        // dual basis of e_iZ against Ze_i under tr(y x) = coefficient of the loop X_i
        let loop_i = zigzag_loop(&z, i);
        let tr = |y: usize, x: usize| -> Scalar {
            z.mul_basis(ys[y], xs[x]).iter().find(|t| t.0 == loop_i).map_or(field.zero(), |t| t.1.clone())
        };
        let gram: Vec<SparseVec> =
            (0..ea.dim()).map(|y| collect_terms((0..ae.dim()).map(|x| (x, tr(y, x))).collect())).collect();
        // solve for the coefficients c[a][y] with Σ_y c[a][y] tr(y, x_b) = δ_ab
        let mut c = Vec::new();
        for a in 0..ae.dim() {
            let b = vec![(a, field.one())];
            let sol = solve_columns(&gram, ae.dim(), &b, field)
                .ok_or_else(|| structural("trace form is degenerate"))?;
            c.push(sol);
        }
        let mut terms = Vec::new();
        for (a, sol) in c.iter().enumerate() {
            for (y, v) in sol {
                terms.push((vec![a, *y], v.clone()));
            }
        }
        let unit_image = r.project(terms);
        let cols: Vec<SparseVec> = (0..z.dim()).map(|j| pi.act_left(&z.basis_vec(j), &unit_image)).collect();
        for j in 0..z.dim() {
            if pi.act_right(&unit_image, &z.basis_vec(j)) != cols[j] {
                return Err(structural("coevaluation element is not central"));
            }
        }
        coev.push(SparseMatrix::from_columns(pi.dim(), field, cols));
        p.push(word);
    }
    Ok(ZigzagAmbient { ambient: amb, algebra: z, z: zo, point: pt, p, mult, coev })
}

impl ZigzagAmbient {
    pub fn n(&self) -> usize {
        self.p.len()
    }

    /// `P_i` as a one-term complex (1-based `i`).
    pub fn projective(&self, i: usize) -> Result<TwistedComplex> {
        TwistedComplex::one_term(&self.ambient, self.z, self.p[i - 1].clone(), 0)
    }

    /// `T_i = cone(P_i → Z)`.
    pub fn t(&self, i: usize) -> Result<TwistedComplex> {
        let f = TwistedMorphism {
            source: self.projective(i)?,
            target: TwistedComplex::identity(self.z),
            degree: 0,
            matrix: self.mult[i - 1].clone(),
        };
        Ok(cone(&self.ambient, &f)?.cone)
    }

    /// `T_i' = cone(Z → P_i)⟨-1⟩`, placing `Z` in position 0.
    pub fn t_inv(&self, i: usize) -> Result<TwistedComplex> {
        let f = TwistedMorphism {
            source: TwistedComplex::identity(self.z),
            target: self.projective(i)?,
            degree: 0,
            matrix: self.coev[i - 1].clone(),
        };
        Ok(cone(&self.ambient, &f)?.cone.shift(-1))
    }
}

/// The Khovanov–Seidel complex of a braid word: letters composed left to right.
pub fn ks_complex(za: &ZigzagAmbient, w: &BraidWord) -> Result<TwistedComplex> {
    if w.n != za.n() {
        return Err(precondition(format!("braid word on {} generators over Z_{}", w.n, za.n())));
    }
    let mut out = TwistedComplex::identity(za.z);
    for (k, &l) in w.letters.iter().enumerate() {
        let i = l.unsigned_abs() as usize;
        let t = if l > 0 { za.t(i)? } else { za.t_inv(i)? };
        out = if k == 0 { t } else { compose(&za.ambient, &out, &t)? };
    }
    Ok(out)
}

/// The coevaluation `Z → P_i` (1-based `i`), exposed for inspection.
pub fn coevaluation(za: &ZigzagAmbient, i: usize) -> &SparseMatrix {
    &za.coev[i - 1]
}
