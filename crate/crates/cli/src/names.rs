//! Resolution of object names: workspace entries first, then zoo constructors.

use std::sync::Arc;

use anyhow::{anyhow, bail, Result};
use dgcat::dgalg::DgAlgebra;
use dgcat::dgbimod::DgBimodule;
use dgcat::io::Workspace;
use dgcat::linalg::{Complex, Field};
use dgcat::zoo;

pub const ALGEBRAS: &[(&str, &str)] = &[
    ("k", "the ground field"),
    ("dual[:d]", "k[x]/(x²) with |x| = d (default 0), zero differential"),
    ("D", "k[x]/(x²) with |x| = -1 and ∂x = 1"),
    ("zigzag:n", "the zigzag algebra on n ≥ 2 vertices"),
    ("R'", "k e_x × k e_y with the bimodule M'"),
    ("end:V", "End(V) for a space V"),
];

pub const SPACES: &[(&str, &str)] = &[
    ("k<n>", "k^n in degree 0"),
    ("two-term", "k ⊕ k⟨1⟩ with zero differential"),
    ("two-term-iso", "k ⊕ k⟨1⟩ with the identity as differential"),
];

pub const MODULES: &[(&str, &str)] = &[
    ("regular", "the algebra as a left module over itself"),
    ("projective:i", "A e_i for the i-th idempotent"),
    ("<name>", "an A–k bimodule from the input file"),
];

pub fn parse_field(s: &str) -> Result<Field> {
    let s = s.trim();
    if s == "Q" {
        return Ok(Field::Rationals);
    }
    let p = s.strip_prefix("Fp:").or_else(|| s.strip_prefix('F')).unwrap_or(s);
    let p: u64 = p.parse().map_err(|_| anyhow!("unknown field {s:?}; use Q or F<p>"))?;
    Ok(Field::prime(p)?)
}

pub fn space(name: &str, field: Field) -> Result<Complex> {
    match name {
        "two-term" => Ok(zoo::two_term_space(field, false)),
        "two-term-iso" => Ok(zoo::two_term_space(field, true)),
        _ => {
            let n = name.strip_prefix('k').and_then(|n| n.parse::<usize>().ok());
            match n {
                Some(n) if n > 0 => Ok(zoo::trivial_space(field, n)),
                _ => bail!("unknown space {name:?}"),
            }
        }
    }
}

pub fn zoo_algebra(name: &str, field: Field) -> Result<Arc<DgAlgebra>> {
    let (head, arg) = match name.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (name, None),
    };
    let int = |a: Option<&str>, default: Option<i64>| -> Result<i64> {
        match (a, default) {
            (Some(a), _) => a.parse().map_err(|_| anyhow!("bad parameter in {name:?}")),
            (None, Some(d)) => Ok(d),
            (None, None) => bail!("{name:?} needs a parameter"),
        }
    };
    let a = match head {
        "k" => DgAlgebra::ground_field(field),
        "dual" => zoo::dual_numbers(field, int(arg, Some(0))?),
        "D" => zoo::acyclic_dual_numbers(field),
        "zigzag" => {
            let n = int(arg, None)?;
            zoo::zigzag(usize::try_from(n).map_err(|_| anyhow!("negative vertex count"))?, field)?
        }
        "R'" | "tian" => return Ok(zoo::tian_quotient(field)?.0),
        "end" => zoo::matrix_dg_algebra(&space(arg.ok_or_else(|| anyhow!("end:V needs a space"))?, field)?)?,
        _ => bail!("unknown algebra {name:?}"),
    };
    Ok(Arc::new(a))
}

pub fn algebra(ws: Option<&Workspace>, name: &str, field: Field) -> Result<Arc<DgAlgebra>> {
    if let Some(a) = ws.and_then(|w| w.algebras.get(name)) {
        return Ok(a.clone());
    }
    zoo_algebra(name, field)
}

pub fn bimodule(ws: Option<&Workspace>, name: &str) -> Result<Arc<DgBimodule>> {
    ws.and_then(|w| w.bimodules.get(name)).cloned().ok_or_else(|| anyhow!("unknown bimodule {name:?}"))
}

/// A left module over `a`, stored as an `a`–`k`-bimodule.
pub fn module(ws: Option<&Workspace>, a: &Arc<DgAlgebra>, name: &str) -> Result<Arc<DgBimodule>> {
    if name == "regular" {
        return Ok(Arc::new(DgBimodule::left_regular(a.clone())));
    }
    if let Some(i) = name.strip_prefix("projective:") {
        let i: usize = i.parse().map_err(|_| anyhow!("bad projective index {i:?}"))?;
        if i >= a.idempotents().len() {
            bail!("{} has {} idempotents", a.name(), a.idempotents().len());
        }
        return Ok(zoo::projective_pair(a, i)?.0);
    }
    bimodule(ws, name)
}
