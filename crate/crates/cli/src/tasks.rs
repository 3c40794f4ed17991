use std::collections::BTreeMap;
use std::sync::Arc;

use anyhow::{anyhow, Result};
use clap::Subcommand;
use dgcat::dgbimod::{degree_range, tensor_over_algebra, tensor_over_k, DgBimodule};
use dgcat::homotopy::{
    gaussian_reduce, hom_cohomology_dim, homotopy_equivalent, is_acyclic_bimodule, Certificate, EquivOptions, Verdict,
};
use dgcat::io::{workspace_with_complex, Workspace};
use dgcat::linalg::{Complex, Field, SparseMatrix};
use dgcat::twisted::{Ambient, TwistedComplex};
use dgcat::twocat::{
    morita_verify, quotient_simple_probe, IdealBudget, ProbeOutcome, Representation, TwoCategoryCA,
};
use dgcat::zoo::{self, BraidWord};
use serde_json::{json, Value};

use crate::names;

pub const TASKS: &[(&str, &str)] = &[
    ("cohomology", "cohomology of an algebra or bimodule and of its endomorphisms"),
    ("reduce", "gaussian reduction of a braid complex"),
    ("braid-equiv", "homotopy equivalence of two braid complexes"),
    ("internal-hom", "[x, y] for modules x, y, with representability verified"),
    ("internal-end", "the algebra 1-morphism [x, x]"),
    ("morita", "Morita check with explicit isomorphisms"),
    ("ideal-probe", "search for a proper dg ideal in a 2-representation"),
    ("tensor", "tensor product of two bimodules"),
];

/// An input problem (unknown name, malformed word); exits with code 2.
#[derive(Debug)]
pub struct BadInput(pub String);

impl std::fmt::Display for BadInput {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for BadInput {}

fn bad(e: impl std::fmt::Display) -> anyhow::Error {
    BadInput(e.to_string()).into()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Success,
    Failure,
    Unknown,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Success => 0,
            Status::Failure => 1,
            Status::Unknown => 3,
        }
    }
}

pub struct Outcome {
    pub status: Status,
    pub text: String,
    pub json: Value,
    /// Written to `--certificate-out` when given.
    pub artifact: Option<Workspace>,
}

pub struct Context<'a> {
    pub ws: Option<&'a Workspace>,
    pub field: Field,
    pub seed: u64,
    pub budget: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Task {
    /// Cohomology of an algebra or bimodule, and of its endomorphism complex.
    Cohomology {
        #[arg(long)]
        algebra: Option<String>,
        #[arg(long)]
        bimodule: Option<String>,
    },
    /// Gaussian reduction of the braid complex of a word over the zigzag algebra.
    Reduce {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    /// Decide whether two braid words give homotopy equivalent complexes.
    BraidEquiv {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        lhs: String,
        #[arg(long, allow_hyphen_values = true)]
        rhs: String,
    },
    /// The internal hom [x, y].
    InternalHom {
        #[arg(long)]
        algebra: String,
        #[arg(long, default_value = "regular")]
        source: String,
        /// Algebra of the target module (defaults to --algebra).
        #[arg(long)]
        target_algebra: Option<String>,
        #[arg(long, default_value = "regular")]
        target: String,
    },
    /// The algebra 1-morphism [x, x].
    InternalEnd {
        #[arg(long)]
        algebra: String,
        #[arg(long, default_value = "regular")]
        module: String,
    },
    /// Morita check: either End(V) against k via (V, V*), or named algebras and bimodules.
    Morita {
        #[arg(long)]
        space: Option<String>,
        #[arg(long)]
        a: Option<String>,
        #[arg(long)]
        b: Option<String>,
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        y: Option<String>,
    },
    /// Probe the natural 2-representation of an algebra for a proper dg ideal.
    IdealProbe {
        #[arg(long)]
        algebra: String,
        /// How often generators are applied to the probes.
        #[arg(long, default_value_t = 2)]
        depth: usize,
        /// Probe the algebra alone, without generating 1-morphisms.
        #[arg(long)]
        no_generators: bool,
    },
    /// Tensor product of two bimodules from the input file.
    Tensor {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        /// Tensor over the ground field instead of the middle algebra.
        #[arg(long)]
        over_k: bool,
    },
}

fn dims(m: &DgBimodule) -> BTreeMap<i64, usize> {
    m.space().degrees().into_iter().map(|d| (d, m.space().dim_in_degree(d))).collect()
}

fn show(d: &BTreeMap<i64, usize>) -> String {
    if d.is_empty() {
        return "0".into();
    }
    d.iter().map(|(k, n)| format!("{n}@{k}")).collect::<Vec<_>>().join(" ")
}

fn dims_json(d: &BTreeMap<i64, usize>) -> Value {
    json!(d.iter().map(|(k, n)| (k.to_string(), *n)).collect::<BTreeMap<_, _>>())
}

fn end_cohomology(m: &DgBimodule) -> Result<BTreeMap<i64, usize>> {
    let (lo, hi) = degree_range(m, m);
    let mut out = BTreeMap::new();
    for d in lo..=hi {
        let n = hom_cohomology_dim(m, m, d)?;
        if n > 0 {
            out.insert(d, n);
        }
    }
    Ok(out)
}

fn complex_of(m: &DgBimodule) -> Result<Complex> {
    let diff = (0..m.dim()).map(|j| m.diff().col(j).clone()).collect();
    Ok(Complex::new(m.space().clone(), diff)?)
}

fn word(n: usize, s: &str) -> Result<BraidWord> {
    BraidWord::parse(n, s).map_err(bad)
}

fn describe(amb: &Ambient, x: &TwistedComplex) -> String {
    if x.is_empty() {
        return "0".into();
    }
    x.summands.iter().map(|s| format!("{}⟨{}⟩", amb.word_name(&s.word), s.shift)).collect::<Vec<_>>().join(" ⊕ ")
}

impl Task {
    pub fn run(&self, ctx: &Context) -> Result<Outcome> {
        match self {
            Task::Cohomology { algebra, bimodule } => cohomology(ctx, algebra.as_deref(), bimodule.as_deref()),
            Task::Reduce { n, word: w } => reduce(ctx, *n, w),
            Task::BraidEquiv { n, lhs, rhs } => braid_equiv(ctx, *n, lhs, rhs),
            Task::InternalHom { algebra, source, target_algebra, target } => {
                internal_hom(ctx, algebra, source, target_algebra.as_deref().unwrap_or(algebra), target)
            }
            Task::InternalEnd { algebra, module } => internal_end(ctx, algebra, module),
            Task::Morita { space, a, b, x, y } => morita(ctx, space.as_deref(), [a, b, x, y]),
            Task::IdealProbe { algebra, depth, no_generators } => ideal_probe(ctx, algebra, *depth, *no_generators),
            Task::Tensor { left, right, over_k } => tensor(ctx, left, right, *over_k),
        }
    }
}

fn cohomology(ctx: &Context, algebra: Option<&str>, bimodule: Option<&str>) -> Result<Outcome> {
    let m = match (algebra, bimodule) {
        (_, Some(b)) => names::bimodule(ctx.ws, b).map_err(bad)?,
        (Some(a), None) => Arc::new(DgBimodule::regular(names::algebra(ctx.ws, a, ctx.field).map_err(bad)?)),
        (None, None) => return Err(bad("cohomology needs --algebra or --bimodule")),
    };
    let c = complex_of(&m)?;
    let mut h = BTreeMap::new();
    for d in m.space().degrees() {
        let n = dgcat::homotopy::cohomology(&c, d)?.0;
        if n > 0 {
            h.insert(d, n);
        }
    }
    let e = end_cohomology(&m)?;
    Ok(Outcome {
        status: Status::Success,
        text: format!("H(M): {}\nH(End M): {}\n", show(&h), show(&e)),
        json: json!({"task": "cohomology", "seed": ctx.seed, "cohomology": dims_json(&h), "end_cohomology": dims_json(&e)}),
        artifact: None,
    })
}

fn reduce(ctx: &Context, n: usize, w: &str) -> Result<Outcome> {
    let w = word(n, w)?;
    let za = zoo::zigzag_ambient(n, ctx.field)?;
    let x = zoo::ks_complex(&za, &w)?;
    let (r, cert) = gaussian_reduce(&za.ambient, &x)?;
    let report = cert.verify();
    let mut ws = workspace_with_complex(&za.ambient, "input", &x);
    ws.complexes.insert("reduced".into(), r.clone());
    ws.add_certificate("reduction", &cert);
    ws.seed = Some(ctx.seed);
    Ok(Outcome {
        status: if report.passed { Status::Success } else { Status::Failure },
        text: format!(
            "input:   {} (dimension {})\nreduced: {} (dimension {})\ncertificate: {}\n",
            describe(&za.ambient, &x),
            cert.source.dim(),
            describe(&za.ambient, &r),
            cert.target.dim(),
            if report.passed { "verified" } else { "FAILED" }
        ),
        json: json!({
            "task": "reduce", "seed": ctx.seed,
            "input": {"summands": x.len(), "dimension": cert.source.dim()},
            "reduced": {"summands": r.len(), "dimension": cert.target.dim(), "description": describe(&za.ambient, &r)},
            "certificate_verified": report.passed,
        }),
        artifact: Some(ws),
    })
}

fn braid_equiv(ctx: &Context, n: usize, lhs: &str, rhs: &str) -> Result<Outcome> {
    let (wl, wr) = (word(n, lhs)?, word(n, rhs)?);
    let za = zoo::zigzag_ambient(n, ctx.field)?;
    let x = zoo::ks_complex(&za, &wl)?;
    let y = zoo::ks_complex(&za, &wr)?;
    let mut opts = EquivOptions { seed: ctx.seed, ..Default::default() };
    if let Some(b) = ctx.budget {
        opts.random_candidates = b;
    }
    let verdict = homotopy_equivalent(&za.ambient, &x, &y, &opts)?;
    let mut ws = workspace_with_complex(&za.ambient, "lhs", &x);
    ws.complexes.insert("rhs".into(), y);
    ws.seed = Some(ctx.seed);
    let (status, label, detail, artifact) = match &verdict {
        Verdict::Equivalent(c) => {
            let ok = c.verify().passed;
            ws.add_certificate("equivalence", c);
            (if ok { Status::Success } else { Status::Failure }, "Equivalent", if ok { "certificate verified" } else { "certificate FAILED" }.to_string(), Some(ws))
        }
        Verdict::NotEquivalent(why) => (Status::Success, "NotEquivalent", why.clone(), None),
        Verdict::Unknown => (Status::Unknown, "Unknown", "no invariant separates them and no equivalence was found".into(), None),
    };
    Ok(Outcome {
        status,
        text: format!("{label}: {detail}\n"),
        json: json!({"task": "braid-equiv", "seed": ctx.seed, "n": n, "lhs": wl.letters, "rhs": wr.letters, "verdict": label, "detail": detail}),
        artifact,
    })
}

fn category(ctx: &Context, names_: &[&str]) -> Result<(TwoCategoryCA, Vec<usize>)> {
    let mut factors: Vec<Arc<dgcat::dgalg::DgAlgebra>> = Vec::new();
    let mut idx = Vec::new();
    for n in names_ {
        let a = names::algebra(ctx.ws, n, ctx.field).map_err(bad)?;
        match factors.iter().position(|f| **f == *a) {
            Some(i) => idx.push(i),
            None => {
                factors.push(a);
                idx.push(factors.len() - 1);
            }
        }
    }
    Ok((TwoCategoryCA::new(factors)?, idx))
}

fn internal_hom(ctx: &Context, alg: &str, source: &str, target_alg: &str, target: &str) -> Result<Outcome> {
    let (cat, idx) = category(ctx, &[alg, target_alg])?;
    let x = names::module(ctx.ws, cat.factor(idx[0]), source).map_err(bad)?;
    let y = names::module(ctx.ws, cat.factor(idx[1]), target).map_err(bad)?;
    let ih = cat.internal_hom(&x, &y)?;
    let d = dims(&ih.hom);
    let mut ws = Workspace::new(ctx.field);
    ws.add_bimodule("hom", &ih.hom);
    Ok(Outcome {
        status: Status::Success,
        text: format!(
            "[x, y]: dimension {} ({})\nrepresentability verified on {} hom spaces\n",
            ih.hom.dim(),
            show(&d),
            ih.verified.len()
        ),
        json: json!({
            "task": "internal-hom", "seed": ctx.seed, "dimension": ih.hom.dim(), "graded_dimension": dims_json(&d),
            "verified": ih.verified.iter().map(|(g, d, n)| json!({"generator": g, "degree": d, "dimension": n})).collect::<Vec<_>>(),
        }),
        artifact: Some(ws),
    })
}

fn internal_end(ctx: &Context, alg: &str, module: &str) -> Result<Outcome> {
    let (cat, idx) = category(ctx, &[alg])?;
    let a = cat.factor(idx[0]).clone();
    let x = names::module(ctx.ws, &a, module).map_err(bad)?;
    let ih = cat.internal_hom(&x, &x)?;
    let end = ih.end_algebra()?;
    let report = end.check();
    let mut expected = BTreeMap::new();
    for i in 0..x.dim() {
        for j in 0..x.dim() {
            *expected.entry(x.degree(i) - x.degree(j)).or_insert(0) += 1;
        }
    }
    let got = dims(&end.carrier);
    let n = end.carrier.dim();
    let mut composition = true;
    'outer: for p in 0..n {
        for q in 0..n {
            let (u, v) = (vec![(p, ctx.field.one())], vec![(q, ctx.field.one())]);
            if ih.action_matrix(&end.mul(&u, &v)) != &ih.action_matrix(&u) * &ih.action_matrix(&v) {
                composition = false;
                break 'outer;
            }
        }
    }
    let unit_ok = ih.action_matrix(&end.unit_element()) == SparseMatrix::identity(x.dim(), ctx.field);
    let ok = report.passed && composition && unit_ok && got == expected;
    let mut ws = Workspace::new(ctx.field);
    ws.add_bimodule("A_X", &end.carrier);
    if end.base_algebra().is_ground_field() {
        ws.add_algebra(&Arc::new(end.to_dg_algebra("A_X")?));
    }
    Ok(Outcome {
        status: if ok { Status::Success } else { Status::Failure },
        text: format!(
            "A_X: dimension {n} ({})\nx ⊗ x* dimensions: {}\nalgebra axioms: {}\nmultiplication is composition: {}\nunit is the identity: {}\n",
            show(&got),
            show(&expected),
            if report.passed { "pass".to_string() } else { report.to_string() },
            composition,
            unit_ok,
        ),
        json: json!({
            "task": "internal-end", "seed": ctx.seed, "dimension": n, "graded_dimension": dims_json(&got),
            "expected_graded_dimension": dims_json(&expected), "axioms_passed": report.passed,
            "violations": report.violations, "multiplication_is_composition": composition, "unit_is_identity": unit_ok,
        }),
        artifact: Some(ws),
    })
}

fn iso_certificate(m: &dgcat::dgbimod::BimoduleMap) -> Result<Certificate> {
    let inv = m.matrix.inverse().ok_or_else(|| anyhow!("witness is not invertible"))?;
    let (s, t) = (m.source.dim(), m.target.dim());
    Ok(Certificate {
        source: m.source.clone(),
        target: m.target.clone(),
        f: m.matrix.clone(),
        g: inv,
        h_src: SparseMatrix::zero(s, s, m.matrix.field()),
        h_tgt: SparseMatrix::zero(t, t, m.matrix.field()),
    })
}

fn morita(ctx: &Context, space: Option<&str>, named: [&Option<String>; 4]) -> Result<Outcome> {
    let (a, b, x, y) = match (space, named) {
        (Some(v), _) => {
            let v = names::space(v, ctx.field).map_err(bad)?;
            let a = Arc::new(zoo::matrix_dg_algebra(&v)?);
            let x = Arc::new(zoo::matrix_module(a.clone(), &v)?);
            let y = Arc::new(x.dual());
            (a, Arc::new(dgcat::dgalg::DgAlgebra::ground_field(ctx.field)), x, y)
        }
        (None, [Some(a), Some(b), Some(x), Some(y)]) => (
            names::algebra(ctx.ws, a, ctx.field).map_err(bad)?,
            names::algebra(ctx.ws, b, ctx.field).map_err(bad)?,
            names::bimodule(ctx.ws, x).map_err(bad)?,
            names::bimodule(ctx.ws, y).map_err(bad)?,
        ),
        _ => return Err(bad("morita needs --space, or all of --a --b --x --y")),
    };
    let out = morita_verify(&a, &b, &x, &y, ctx.seed)?;
    let acyclic = is_acyclic_bimodule(&Arc::new(DgBimodule::left_regular(a.clone())))?.is_some();
    let mut ws = Workspace::new(ctx.field);
    ws.seed = Some(ctx.seed);
    ws.add_bimodule("X", &x);
    ws.add_bimodule("Y", &y);
    let mut verified = true;
    if let (Some(f), Some(g)) = (&out.xy, &out.yx) {
        for (name, m) in [("X∘Y≅A", f), ("Y∘X≅B", g)] {
            let c = iso_certificate(m)?;
            verified &= c.verify().passed;
            ws.add_certificate(name, &c);
        }
    }
    let status = match (out.equivalent, &out.reason) {
        (true, _) if verified => Status::Success,
        (true, _) => Status::Failure,
        (false, Some(r)) if r.contains("graded dimension") => Status::Success,
        (false, _) => Status::Unknown,
    };
    let verdict = if out.equivalent { "equivalent" } else if status == Status::Success { "not equivalent" } else { "unknown" };
    Ok(Outcome {
        status,
        text: format!(
            "{verdict}{}\nA acyclic: {acyclic}\n",
            out.reason.as_ref().map(|r| format!(" ({r})")).unwrap_or_default()
        ),
        json: json!({
            "task": "morita", "seed": ctx.seed, "verdict": verdict, "reason": out.reason,
            "witnesses_verified": out.equivalent && verified, "a_acyclic": acyclic,
        }),
        artifact: out.equivalent.then_some(ws),
    })
}

fn ideal_probe(ctx: &Context, alg: &str, depth: usize, no_generators: bool) -> Result<Outcome> {
    let rep = if alg == "R'" || alg == "tian" {
        let (r, m) = zoo::tian_quotient(ctx.field)?;
        let probes = vec![zoo::projective_pair(&r, 0)?.0, zoo::projective_pair(&r, 1)?.0];
        Representation { algebra: r, generators: if no_generators { vec![] } else { vec![m] }, probes }
    } else {
        let (cat, _) = category(ctx, &[alg])?;
        Representation {
            algebra: cat.factor(0).clone(),
            generators: if no_generators { vec![] } else { cat.probe_generators(0, 0)? },
            probes: vec![cat.natural_object(0)],
        }
    };
    let mut budget = IdealBudget { depth, ..Default::default() };
    if let Some(b) = ctx.budget {
        budget.max_steps = b;
    }
    let out = quotient_simple_probe(&rep, &budget)?;
    let (status, text, data) = match &out {
        ProbeOutcome::ProperIdeal { seed, ideal } => (
            Status::Success,
            format!(
                "ProperIdeal: generated by a degree-{} morphism from probe {} to probe {}\n",
                seed.degree, seed.source, seed.target
            ),
            json!({
                "verdict": "ProperIdeal",
                "seed": {"source": seed.source, "target": seed.target, "degree": seed.degree},
                "ideal_dimensions": ideal.dims.iter().map(|((p, q, d), n)| json!([p, q, d, n])).collect::<Vec<_>>(),
                "complete": ideal.complete,
            }),
        ),
        ProbeOutcome::NoProperIdealFound { seeds_tried, complete } => (
            if *complete { Status::Success } else { Status::Unknown },
            format!(
                "NoProperIdealFound after {seeds_tried} seeds{} (not a proof of quotient-simplicity)\n",
                if *complete { "" } else { ", budget exhausted" }
            ),
            json!({"verdict": "NoProperIdealFound", "seeds_tried": seeds_tried, "complete": complete}),
        ),
    };
    let mut data = data;
    data["task"] = json!("ideal-probe");
    data["rng_seed"] = json!(ctx.seed);
    Ok(Outcome { status, text, json: data, artifact: None })
}

fn tensor(ctx: &Context, left: &str, right: &str, over_k: bool) -> Result<Outcome> {
    let m = names::bimodule(ctx.ws, left).map_err(bad)?;
    let n = names::bimodule(ctx.ws, right).map_err(bad)?;
    let t = Arc::new(if over_k { tensor_over_k(&m, &n)? } else { tensor_over_algebra(&m, &n)? });
    let report = t.check();
    let d = dims(&t);
    let mut ws = Workspace::new(ctx.field);
    let name = ws.add_bimodule(&format!("{left}∘{right}"), &t);
    Ok(Outcome {
        status: if report.passed { Status::Success } else { Status::Failure },
        text: format!("{name}: dimension {} ({})\n", t.dim(), show(&d)),
        json: json!({"task": "tensor", "seed": ctx.seed, "name": name, "dimension": t.dim(), "graded_dimension": dims_json(&d), "axioms_passed": report.passed}),
        artifact: Some(ws),
    })
}
