use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::DgAlgebra;
use crate::error::{structural, DgError, Result};
use crate::linalg::{Field, GradedSpace, Scalar, SparseVec};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
    pub degree: i64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quiver {
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
}

/// A path in a quiver, read left to right: `start` then the arrows in order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Path {
    pub start: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn vertex(v: usize) -> Path {
        Path { start: v, arrows: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }
}

// Deglex: shorter paths are smaller; equal lengths compare arrow sequences, then start vertex.
impl Ord for Path {
    fn cmp(&self, o: &Self) -> Ordering {
        self.arrows
            .len()
            .cmp(&o.arrows.len())
            .then_with(|| self.arrows.cmp(&o.arrows))
            .then_with(|| self.start.cmp(&o.start))
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

pub type PathCombination = Vec<(Path, Scalar)>;

#[derive(Clone, Debug)]
pub struct PathAlgebraOptions {
    pub max_length: usize,
    /// `∂` of individual arrows; extended to paths by the Leibniz rule.
    pub arrow_differential: Vec<(usize, PathCombination)>,
    pub name: String,
}

impl Default for PathAlgebraOptions {
    fn default() -> Self {
        PathAlgebraOptions { max_length: 16, arrow_differential: Vec::new(), name: "path".into() }
    }
}

struct Rewriter<'q> {
    quiver: &'q Quiver,
    rules: Vec<(Vec<usize>, usize, PathCombination)>,
}

impl Rewriter<'_> {
    fn end(&self, p: &Path) -> usize {
        p.arrows.last().map_or(p.start, |&a| self.quiver.arrows[a].target)
    }

    fn concat(&self, p: &Path, q: &Path) -> Option<Path> {
        if self.end(p) != q.start {
            return None;
        }
        let mut arrows = p.arrows.clone();
        arrows.extend_from_slice(&q.arrows);
        Some(Path { start: p.start, arrows })
    }

    /// First rule whose leading path occurs in `p`, with its position.
    fn find(&self, p: &Path) -> Option<(usize, usize)> {
        for (r, (lead, start, _)) in self.rules.iter().enumerate() {
            if lead.is_empty() {
                if p.arrows.is_empty() && p.start == *start {
                    return Some((r, 0));
                }
                continue;
            }
            if lead.len() > p.arrows.len() {
                continue;
            }
            for pos in 0..=p.arrows.len() - lead.len() {
                if p.arrows[pos..pos + lead.len()] == lead[..] {
                    return Some((r, pos));
                }
            }
        }
        None
    }

    fn is_normal(&self, p: &Path) -> bool {
        self.find(p).is_none()
    }

    fn normalize(&self, combo: PathCombination) -> Result<BTreeMap<Path, Scalar>> {
        let mut acc: BTreeMap<Path, Scalar> = BTreeMap::new();
        for (p, c) in combo {
            add_term(&mut acc, p, c);
        }
        let mut steps = 0usize;
        loop {
            let hit = acc.iter().rev().find_map(|(p, _)| self.find(p).map(|h| (p.clone(), h)));
            let Some((p, (r, pos))) = hit else {
                return Ok(acc);
            };
            steps += 1;
            if steps > 1_000_000 {
                return Err(structural("rewriting does not terminate"));
            }
            let c = acc.remove(&p).unwrap();
            let (lead, _, tail) = &self.rules[r];
            let prefix = Path { start: p.start, arrows: p.arrows[..pos].to_vec() };
            let suffix_start = if pos + lead.len() < p.arrows.len() {
                self.quiver.arrows[p.arrows[pos + lead.len()]].source
            } else {
                self.end(&p)
            };
            let suffix = Path { start: suffix_start, arrows: p.arrows[pos + lead.len()..].to_vec() };
            for (q, d) in tail {
                let Some(pq) = self.concat(&prefix, q) else { continue };
                let Some(pqs) = self.concat(&pq, &suffix) else { continue };
                add_term(&mut acc, pqs, &c * d);
            }
        }
    }
}

fn add_term(acc: &mut BTreeMap<Path, Scalar>, p: Path, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match acc.get_mut(&p) {
        Some(v) => {
            *v += &c;
            if v.is_zero() {
                acc.remove(&p);
            }
        }
        None => {
            acc.insert(p, c);
        }
    }
}

/// Label of a path: `e<v>` for vertices, `(v0|v1|...)` otherwise. Quivers
/// with parallel arrows use arrow names instead, as `(a·b·c)`.
pub fn path_label(quiver: &Quiver, p: &Path) -> String {
    if p.arrows.is_empty() {
        return format!("e{}", quiver.vertices[p.start]);
    }
    let parallel = quiver.arrows.iter().enumerate().any(|(i, a)| {
        quiver.arrows[..i].iter().any(|b| b.source == a.source && b.target == a.target)
    });
    if parallel {
        let names: Vec<&str> = p.arrows.iter().map(|&a| quiver.arrows[a].name.as_str()).collect();
        return format!("({})", names.join("·"));
    }
    let mut names = vec![quiver.vertices[p.start].clone()];
    for &a in &p.arrows {
        names.push(quiver.vertices[quiver.arrows[a].target].clone());
    }
    format!("({})", names.join("|"))
}

/// The quotient of the path algebra by the two-sided ideal of `relations`.
///
/// Each relation is oriented by its deglex-largest path and used as a rewriting
/// rule; the basis consists of paths containing no leading path. Completeness
/// of the rule set is the caller's business; `check` exposes failures.
pub fn path_algebra(
    quiver: &Quiver,
    relations: &[PathCombination],
    field: Field,
    opts: &PathAlgebraOptions,
) -> Result<DgAlgebra> {
    for a in &quiver.arrows {
        if a.source >= quiver.vertices.len() || a.target >= quiver.vertices.len() {
            return Err(structural(format!("arrow {} has an unknown endpoint", a.name)));
        }
    }
    let mut rw = Rewriter { quiver, rules: Vec::new() };
    for rel in relations {
        let mut acc = BTreeMap::new();
        for (p, c) in rel {
            add_term(&mut acc, p.clone(), c.clone());
        }
        let Some((lead, c)) = acc.iter().next_back().map(|(p, c)| (p.clone(), c.clone())) else {
            continue;
        };
        let minus_inv = -c.inv();
        let tail = acc
            .into_iter()
            .filter(|(p, _)| *p != lead)
            .map(|(p, d)| (p, &d * &minus_inv))
            .collect();
        rw.rules.push((lead.arrows.clone(), lead.start, tail));
    }

    // Enumerate normal paths by length.
    let mut basis: Vec<Path> = Vec::new();
    let mut frontier: Vec<Path> = (0..quiver.vertices.len()).map(Path::vertex).filter(|p| rw.is_normal(p)).collect();
    let mut length = 0;
    while !frontier.is_empty() {
        if length >= opts.max_length {
            return Err(DgError::Precondition(format!(
                "quotient has nonzero paths of length {length}; not finite-dimensional within the cap"
            )));
        }
        frontier.sort();
        basis.extend(frontier.iter().cloned());
        let mut next = Vec::new();
        for p in &frontier {
            let end = rw.end(p);
            for (a, arrow) in quiver.arrows.iter().enumerate() {
                if arrow.source != end {
                    continue;
                }
                let mut q = p.clone();
                q.arrows.push(a);
                if rw.is_normal(&q) {
                    next.push(q);
                }
            }
        }
        frontier = next;
        length += 1;
    }

    if (0..quiver.vertices.len()).any(|v| !rw.is_normal(&Path::vertex(v))) {
        return Err(structural("a relation rewrites a vertex idempotent"));
    }
    let index: HashMap<Path, usize> = basis.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let degree = |p: &Path| p.arrows.iter().map(|&a| quiver.arrows[a].degree).sum::<i64>();
    let space = GradedSpace::new(field, basis.iter().map(|p| (path_label(quiver, p), degree(p))).collect())?;
    let to_vec = |m: BTreeMap<Path, Scalar>| -> Result<SparseVec> {
        let mut v = Vec::new();
        for (p, c) in m {
            let i = *index.get(&p).ok_or_else(|| structural("normal form outside the basis"))?;
            v.push((i, c));
        }
        Ok(crate::linalg::sparse::collect_terms(v))
    };

    let mut mult = Vec::new();
    for (i, p) in basis.iter().enumerate() {
        for (j, q) in basis.iter().enumerate() {
            if let Some(pq) = rw.concat(p, q) {
                for (k, c) in to_vec(rw.normalize(vec![(pq, field.one())])?)? {
                    mult.push((i, j, k, c));
                }
            }
        }
    }
    let unit: SparseVec = (0..quiver.vertices.len())
        .filter_map(|v| index.get(&Path::vertex(v)).map(|&i| (i, field.one())))
        .collect();

    // Leibniz extension of the arrow differential.
    let mut arrow_d: HashMap<usize, PathCombination> = HashMap::new();
    for (a, combo) in &opts.arrow_differential {
        arrow_d.insert(*a, combo.clone());
    }
    let mut diff = Vec::new();
    for (i, p) in basis.iter().enumerate() {
        let mut terms: PathCombination = Vec::new();
        let mut sign_deg = 0i64;
        for (pos, &a) in p.arrows.iter().enumerate() {
            if let Some(da) = arrow_d.get(&a) {
                let prefix = Path { start: p.start, arrows: p.arrows[..pos].to_vec() };
                let suffix = Path {
                    start: quiver.arrows[a].target,
                    arrows: p.arrows[pos + 1..].to_vec(),
                };
                let s = field.sign(sign_deg);
                for (q, c) in da {
                    if let Some(x) = rw.concat(&prefix, q).and_then(|x| rw.concat(&x, &suffix)) {
                        terms.push((x, &s * c));
                    }
                }
            }
            sign_deg += quiver.arrows[a].degree;
        }
        for (k, c) in to_vec(rw.normalize(terms)?)? {
            diff.push((i, k, c));
        }
    }

    let idempotents: Vec<SparseVec> = (0..quiver.vertices.len())
        .filter_map(|v| index.get(&Path::vertex(v)).map(|&i| vec![(i, field.one())]))
        .collect();
    let generators = basis.iter().enumerate().filter(|(_, p)| p.len() == 1).map(|(i, _)| i).collect();
    let alg = DgAlgebra::new(opts.name.clone(), space, unit, mult, diff)?;
    // Path bases are adapted to the vertex idempotents by construction.
    let block = basis.iter().map(|p| (p.start, rw.end(p))).collect();
    let alg = DgAlgebra { idempotents, block, ..alg }.with_generators(generators);
    Ok(alg)
}

/// Helper for writing relations: the path through the listed vertices, using
/// the first arrow between consecutive vertices.
pub fn path_through(quiver: &Quiver, vertices: &[usize]) -> Option<Path> {
    let mut arrows = Vec::new();
    for w in vertices.windows(2) {
        let a = quiver.arrows.iter().position(|a| a.source == w[0] && a.target == w[1])?;
        arrows.push(a);
    }
    Some(Path { start: vertices[0], arrows })
}
