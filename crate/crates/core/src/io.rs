//! JSON workspaces: named algebras, bimodules, twisted complexes over an
//! ambient and homotopy-equivalence certificates.
//!
//! Coefficients are strings (`"3"`, `"-1/2"`, or residues over `F_p`). Sparse
//! tables are arrays of tuples: `mult: [[i, j, k, c]]` means `b_i b_j`
//! contains `c b_k`, `diff: [[i, j, c]]` means `∂ b_i` contains `c b_j`. A
//! file holding a single algebra (with `basis` at the top level) is accepted
//! too; it is read as the algebra `"A"`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dgalg::DgAlgebra;
use crate::dgbimod::DgBimodule;
use crate::error::DgError;
use crate::homotopy::Certificate;
use crate::linalg::{Field, GradedSpace, Scalar, SparseMatrix, SparseVec};
use crate::report::AlgebraReport;
use crate::twisted::{Ambient, Summand, TwistedComplex};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("invalid JSON")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Dg(#[from] DgError),
}

fn invalid(msg: impl Into<String>) -> ParseError {
    ParseError::Invalid(msg.into())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldSpec {
    Named(String),
    Prime {
        #[serde(rename = "Fp")]
        p: u64,
    },
}

impl FieldSpec {
    pub fn to_field(&self) -> Result<Field, ParseError> {
        match self {
            FieldSpec::Named(s) if s == "Q" => Ok(Field::Rationals),
            FieldSpec::Named(s) => Err(invalid(format!("unknown field {s:?}; use \"Q\" or {{\"Fp\": p}}"))),
            FieldSpec::Prime { p } => Ok(Field::prime(*p).map_err(DgError::from)?),
        }
    }

    pub fn from_field(f: Field) -> Self {
        match f {
            Field::Rationals => FieldSpec::Named("Q".into()),
            Field::PrimeField(p) => FieldSpec::Prime { p },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisEntry {
    pub name: String,
    pub degree: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraSpec {
    pub basis: Vec<BasisEntry>,
    pub unit: Vec<(usize, String)>,
    #[serde(default)]
    pub mult: Vec<(usize, usize, usize, String)>,
    #[serde(default)]
    pub diff: Vec<(usize, usize, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub idempotents: Option<Vec<Vec<(usize, String)>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BimoduleSpec {
    pub left: String,
    pub right: String,
    pub basis: Vec<BasisEntry>,
    #[serde(default)]
    pub left_action: Vec<(usize, usize, usize, String)>,
    #[serde(default)]
    pub right_action: Vec<(usize, usize, usize, String)>,
    #[serde(default)]
    pub diff: Vec<(usize, usize, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixSpec {
    pub rows: usize,
    pub cols: usize,
    /// `[row, col, c]`.
    pub entries: Vec<(usize, usize, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub name: String,
    pub bimodule: String,
    pub target: usize,
    pub source: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaSpec {
    pub k: usize,
    pub l: usize,
    pub matrix: MatrixSpec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexSpec {
    pub source: usize,
    pub target: usize,
    pub summands: Vec<Summand>,
    #[serde(default)]
    pub alpha: Vec<AlphaSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateSpec {
    pub source: String,
    pub target: String,
    pub f: MatrixSpec,
    pub g: MatrixSpec,
    pub h_src: MatrixSpec,
    pub h_tgt: MatrixSpec,
}

/// The on-disk form of a workspace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub field: FieldSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub algebras: BTreeMap<String, AlgebraSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub bimodules: BTreeMap<String, BimoduleSpec>,
    /// Algebra names, one per object of the ambient 2-category.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub objects: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub generators: Vec<GeneratorSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub complexes: BTreeMap<String, ComplexSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub certificates: BTreeMap<String, CertificateSpec>,
}

#[derive(Deserialize)]
struct SingleAlgebra {
    field: FieldSpec,
    #[serde(default)]
    name: Option<String>,
    #[serde(flatten)]
    algebra: AlgebraSpec,
}

/// Parsed, validated objects. Axioms are not checked here; see [`Workspace::check`].
#[derive(Clone, Debug, Default)]
pub struct Workspace {
    pub field: Field,
    pub seed: Option<u64>,
    pub algebras: BTreeMap<String, Arc<DgAlgebra>>,
    pub bimodules: BTreeMap<String, Arc<DgBimodule>>,
    pub objects: Vec<String>,
    pub generators: Vec<GeneratorSpec>,
    pub complexes: BTreeMap<String, TwistedComplex>,
    pub certificates: BTreeMap<String, Certificate>,
}

fn scalar(field: Field, s: &str) -> Result<Scalar, ParseError> {
    field.parse(s).map_err(|e| invalid(format!("bad coefficient {s:?}: {e}")))
}

fn space(field: Field, basis: &[BasisEntry]) -> Result<GradedSpace, ParseError> {
    Ok(GradedSpace::new(field, basis.iter().map(|b| (b.name.clone(), b.degree)).collect()).map_err(DgError::from)?)
}

fn vector(field: Field, v: &[(usize, String)]) -> Result<SparseVec, ParseError> {
    v.iter().map(|(i, c)| Ok((*i, scalar(field, c)?))).collect()
}

fn table4(field: Field, t: &[(usize, usize, usize, String)]) -> Result<Vec<(usize, usize, usize, Scalar)>, ParseError> {
    t.iter().map(|(a, b, c, s)| Ok((*a, *b, *c, scalar(field, s)?))).collect()
}

fn table3(field: Field, t: &[(usize, usize, String)]) -> Result<Vec<(usize, usize, Scalar)>, ParseError> {
    t.iter().map(|(a, b, s)| Ok((*a, *b, scalar(field, s)?))).collect()
}

fn matrix(field: Field, m: &MatrixSpec) -> Result<SparseMatrix, ParseError> {
    if m.entries.iter().any(|(r, c, _)| *r >= m.rows || *c >= m.cols) {
        return Err(invalid(format!("matrix entry out of range for {}×{}", m.rows, m.cols)));
    }
    let t = m.entries.iter().map(|(r, c, s)| Ok((*r, *c, scalar(field, s)?))).collect::<Result<Vec<_>, ParseError>>()?;
    Ok(SparseMatrix::from_triples(m.rows, m.cols, field, t))
}

fn entry_string(c: &Scalar) -> String {
    c.to_string()
}

fn matrix_spec(m: &SparseMatrix) -> MatrixSpec {
    let mut entries = Vec::new();
    for j in 0..m.ncols() {
        for (i, c) in m.col(j) {
            entries.push((*i, j, entry_string(c)));
        }
    }
    entries.sort_by_key(|e| (e.0, e.1));
    MatrixSpec { rows: m.nrows(), cols: m.ncols(), entries }
}

fn vector_spec(v: &SparseVec) -> Vec<(usize, String)> {
    v.iter().map(|(i, c)| (*i, entry_string(c))).collect()
}

fn basis_spec(s: &GradedSpace) -> Vec<BasisEntry> {
    (0..s.dim()).map(|i| BasisEntry { name: s.label(i).to_string(), degree: s.degree(i) }).collect()
}

pub fn algebra_from_spec(name: &str, field: Field, spec: &AlgebraSpec) -> Result<DgAlgebra, ParseError> {
    let mut a = DgAlgebra::new(
        name,
        space(field, &spec.basis)?,
        vector(field, &spec.unit)?,
        table4(field, &spec.mult)?,
        table3(field, &spec.diff)?,
    )?;
    if let Some(es) = &spec.idempotents {
        let es = es.iter().map(|e| vector(field, e)).collect::<Result<Vec<_>, _>>()?;
        a = a.with_idempotents(es)?;
    }
    if let Some(g) = &spec.generators {
        if g.iter().any(|&i| i >= a.dim()) {
            return Err(invalid(format!("generator index out of range in {name}")));
        }
        a = a.with_generators(g.clone());
    }
    Ok(a)
}

pub fn algebra_spec(a: &DgAlgebra) -> AlgebraSpec {
    let n = a.dim();
    let mut mult = Vec::new();
    let mut diff = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for (k, c) in a.mul_basis(i, j) {
                mult.push((i, j, *k, entry_string(c)));
            }
        }
        for (j, c) in a.diff_basis(i) {
            diff.push((i, *j, entry_string(c)));
        }
    }
    let trivial_idem = a.idempotents().len() == 1 && a.idempotents()[0] == *a.unit();
    let all_gens = a.generators().iter().copied().eq(0..n);
    AlgebraSpec {
        basis: basis_spec(a.space()),
        unit: vector_spec(a.unit()),
        mult,
        diff,
        idempotents: (!trivial_idem).then(|| a.idempotents().iter().map(vector_spec).collect()),
        generators: (!all_gens).then(|| a.generators().to_vec()),
    }
}

fn bimodule_spec(m: &DgBimodule, left: String, right: String) -> BimoduleSpec {
    let (mut l, mut r, mut d) = m.tables();
    l.sort_by_key(|e| (e.0, e.1, e.2));
    r.sort_by_key(|e| (e.0, e.1, e.2));
    d.sort_by_key(|e| (e.0, e.1));
    BimoduleSpec {
        left,
        right,
        basis: basis_spec(m.space()),
        left_action: l.into_iter().map(|(a, b, c, s)| (a, b, c, entry_string(&s))).collect(),
        right_action: r.into_iter().map(|(a, b, c, s)| (a, b, c, entry_string(&s))).collect(),
        diff: d.into_iter().map(|(a, b, s)| (a, b, entry_string(&s))).collect(),
    }
}

impl Workspace {
    pub fn new(field: Field) -> Self {
        Workspace { field, ..Default::default() }
    }

    /// Parses a workspace document or a single-algebra document.
    pub fn from_json(text: &str) -> Result<Self, ParseError> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let doc = if value.get("basis").is_some() {
            let single: SingleAlgebra = serde_json::from_value(value)?;
            let name = single.name.unwrap_or_else(|| "A".into());
            Document {
                field: single.field,
                seed: None,
                algebras: BTreeMap::from([(name, single.algebra)]),
                bimodules: BTreeMap::new(),
                objects: Vec::new(),
                generators: Vec::new(),
                complexes: BTreeMap::new(),
                certificates: BTreeMap::new(),
            }
        } else {
            serde_json::from_value(value)?
        };
        Self::from_document(&doc)
    }

    pub fn from_document(doc: &Document) -> Result<Self, ParseError> {
        let field = doc.field.to_field()?;
        let mut ws = Workspace::new(field);
        ws.seed = doc.seed;
        for (name, spec) in &doc.algebras {
            let a = algebra_from_spec(name, field, spec).map_err(|e| invalid(format!("algebra {name}: {e}")))?;
            ws.algebras.insert(name.clone(), Arc::new(a));
        }
        for (name, spec) in &doc.bimodules {
            let alg = |n: &str| {
                ws.algebras.get(n).cloned().ok_or_else(|| invalid(format!("bimodule {name}: unknown algebra {n:?}")))
            };
            let m = DgBimodule::new(
                alg(&spec.left)?,
                alg(&spec.right)?,
                space(field, &spec.basis)?,
                table4(field, &spec.left_action)?,
                table4(field, &spec.right_action)?,
                table3(field, &spec.diff)?,
            )
            .map_err(|e| invalid(format!("bimodule {name}: {e}")))?;
            ws.bimodules.insert(name.clone(), Arc::new(m));
        }
        for o in &doc.objects {
            if !ws.algebras.contains_key(o) {
                return Err(invalid(format!("object refers to unknown algebra {o:?}")));
            }
        }
        ws.objects = doc.objects.clone();
        ws.generators = doc.generators.clone();
        let amb = ws.ambient()?;
        for (name, spec) in &doc.complexes {
            let x = complex_from_spec(&amb, field, spec).map_err(|e| invalid(format!("complex {name}: {e}")))?;
            ws.complexes.insert(name.clone(), x);
        }
        for (name, spec) in &doc.certificates {
            let module = |n: &str| {
                ws.bimodules.get(n).cloned().ok_or_else(|| invalid(format!("certificate {name}: unknown bimodule {n:?}")))
            };
            let c = Certificate {
                source: module(&spec.source)?,
                target: module(&spec.target)?,
                f: matrix(field, &spec.f)?,
                g: matrix(field, &spec.g)?,
                h_src: matrix(field, &spec.h_src)?,
                h_tgt: matrix(field, &spec.h_tgt)?,
            };
            ws.certificates.insert(name.clone(), c);
        }
        Ok(ws)
    }

    /// The ambient 2-category described by `objects` and `generators`.
    pub fn ambient(&self) -> Result<Ambient, ParseError> {
        let mut amb = Ambient::new(self.field);
        for o in &self.objects {
            amb.add_object(o.clone(), self.algebras[o].clone());
        }
        for g in &self.generators {
            let m = self
                .bimodules
                .get(&g.bimodule)
                .ok_or_else(|| invalid(format!("generator {}: unknown bimodule {:?}", g.name, g.bimodule)))?;
            amb.add_generator(g.name.clone(), m.clone(), g.target, g.source)
                .map_err(|e| invalid(format!("generator {}: {e}", g.name)))?;
        }
        Ok(amb)
    }

    /// Name under which `a` is stored, registering it if new.
    pub fn add_algebra(&mut self, a: &Arc<DgAlgebra>) -> String {
        if let Some((n, _)) = self.algebras.iter().find(|(_, b)| ***b == **a) {
            return n.clone();
        }
        let name = self.fresh(&self.algebras, a.name());
        self.algebras.insert(name.clone(), a.clone());
        name
    }

    pub fn add_bimodule(&mut self, name: &str, m: &Arc<DgBimodule>) -> String {
        if let Some((n, _)) = self.bimodules.iter().find(|(_, b)| ***b == **m) {
            return n.clone();
        }
        self.add_algebra(m.left_algebra());
        self.add_algebra(m.right_algebra());
        let name = self.fresh(&self.bimodules, name);
        self.bimodules.insert(name.clone(), m.clone());
        name
    }

    /// Records the objects and generators of `amb`; must precede complexes.
    pub fn set_ambient(&mut self, amb: &Ambient) {
        self.objects = amb.objects().iter().map(|o| self.add_algebra(&o.algebra)).collect();
        self.generators = (0..amb.generator_count())
            .map(|g| {
                let gen = amb.generator(g);
                let b = self.add_bimodule(&gen.name, &gen.module);
                GeneratorSpec { name: gen.name, bimodule: b, target: gen.target, source: gen.source }
            })
            .collect();
    }

    pub fn add_certificate(&mut self, name: &str, c: &Certificate) {
        self.add_bimodule(&format!("{name}.source"), &c.source);
        self.add_bimodule(&format!("{name}.target"), &c.target);
        self.certificates.insert(name.to_string(), c.clone());
    }

    fn fresh<T>(&self, map: &BTreeMap<String, T>, base: &str) -> String {
        let base = if base.is_empty() { "x" } else { base };
        if !map.contains_key(base) {
            return base.to_string();
        }
        (2..).map(|i| format!("{base}#{i}")).find(|n| !map.contains_key(n)).unwrap()
    }

    fn algebra_name(&self, a: &Arc<DgAlgebra>) -> String {
        self.algebras.iter().find(|(_, b)| Arc::ptr_eq(b, a) || ***b == **a).map(|(n, _)| n.clone()).expect("registered algebra")
    }

    fn bimodule_name(&self, m: &Arc<DgBimodule>) -> String {
        self.bimodules.iter().find(|(_, b)| Arc::ptr_eq(b, m) || ***b == **m).map(|(n, _)| n.clone()).expect("registered bimodule")
    }

    pub fn to_document(&self) -> Document {
        Document {
            field: FieldSpec::from_field(self.field),
            seed: self.seed,
            algebras: self.algebras.iter().map(|(n, a)| (n.clone(), algebra_spec(a))).collect(),
            bimodules: self
                .bimodules
                .iter()
                .map(|(n, m)| (n.clone(), bimodule_spec(m, self.algebra_name(m.left_algebra()), self.algebra_name(m.right_algebra()))))
                .collect(),
            objects: self.objects.clone(),
            generators: self.generators.clone(),
            complexes: self.complexes.iter().map(|(n, x)| (n.clone(), complex_spec(x))).collect(),
            certificates: self
                .certificates
                .iter()
                .map(|(n, c)| {
                    (
                        n.clone(),
                        CertificateSpec {
                            source: self.bimodule_name(&c.source),
                            target: self.bimodule_name(&c.target),
                            f: matrix_spec(&c.f),
                            g: matrix_spec(&c.g),
                            h_src: matrix_spec(&c.h_src),
                            h_tgt: matrix_spec(&c.h_tgt),
                        },
                    )
                })
                .collect(),
        }
    }

    /// Canonical pretty-printed JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("serializable document")
    }

    /// Runs the axiom checker of every stored object: `(kind, name, report)`.
    pub fn check(&self) -> Result<Vec<(&'static str, String, AlgebraReport)>, ParseError> {
        let mut out = Vec::new();
        for (n, a) in &self.algebras {
            out.push(("algebra", n.clone(), a.check()));
        }
        for (n, m) in &self.bimodules {
            out.push(("bimodule", n.clone(), m.check()));
        }
        if !self.complexes.is_empty() {
            let amb = self.ambient()?;
            for (n, x) in &self.complexes {
                out.push(("complex", n.clone(), x.mc_check(&amb)?));
            }
        }
        for (n, c) in &self.certificates {
            out.push(("certificate", n.clone(), c.verify()));
        }
        Ok(out)
    }
}

fn complex_from_spec(amb: &Ambient, field: Field, spec: &ComplexSpec) -> Result<TwistedComplex, ParseError> {
    let n = amb.objects().len();
    if spec.source >= n || spec.target >= n {
        return Err(invalid("complex endpoints are not objects"));
    }
    let mut x = TwistedComplex::zero(spec.source, spec.target);
    for s in &spec.summands {
        if s.word.iter().any(|&g| g >= amb.generator_count()) {
            return Err(invalid("summand word uses an unknown generator"));
        }
        let (src, tgt) = amb.endpoints(spec.source, &s.word)?;
        if (src, tgt) != (spec.source, spec.target) {
            return Err(invalid(format!("summand {} has the wrong endpoints", amb.word_name(&s.word))));
        }
        x.summands.push(s.clone());
    }
    for a in &spec.alpha {
        if a.k >= a.l {
            return Err(invalid(format!("alpha component ({}, {}) violates k < l", a.k, a.l)));
        }
        if a.l >= x.summands.len() {
            return Err(invalid(format!("alpha component ({}, {}) out of range", a.k, a.l)));
        }
        let rows = x.summand_module(amb, a.k)?.dim();
        let cols = x.summand_module(amb, a.l)?.dim();
        if (a.matrix.rows, a.matrix.cols) != (rows, cols) {
            return Err(invalid(format!("alpha component ({}, {}) should be {rows}×{cols}", a.k, a.l)));
        }
        if x.alpha.insert((a.k, a.l), matrix(field, &a.matrix)?).is_some() {
            return Err(invalid(format!("alpha component ({}, {}) given twice", a.k, a.l)));
        }
    }
    Ok(x)
}

fn complex_spec(x: &TwistedComplex) -> ComplexSpec {
    ComplexSpec {
        source: x.source,
        target: x.target,
        summands: x.summands.clone(),
        alpha: x
            .alpha
            .iter()
            .filter(|(_, m)| !m.is_zero())
            .map(|((k, l), m)| AlphaSpec { k: *k, l: *l, matrix: matrix_spec(m) })
            .collect(),
    }
}

/// Adds an ambient and a complex over it.
pub fn workspace_with_complex(amb: &Ambient, name: &str, x: &TwistedComplex) -> Workspace {
    let mut ws = Workspace::new(amb.field());
    ws.set_ambient(amb);
    ws.complexes.insert(name.to_string(), x.clone());
    ws
}
