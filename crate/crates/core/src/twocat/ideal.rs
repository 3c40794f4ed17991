use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::Arc;

use super::{find_isomorphism, hcomp, same};
use crate::dgalg::DgAlgebra;
use crate::dgbimod::{degree_range, hom_differential, multi_tensor, DgBimodule, HomSpace, Realized};
use crate::error::{mismatch, Result};
use crate::linalg::sparse::Echelon;
use crate::linalg::SparseMatrix;

/// The data of a 2-representation on left modules over `algebra`: the
/// generating 1-morphisms act by `G ⊗_R -`, and `probes` are the objects on
/// which ideals are tested.
#[derive(Clone, Debug)]
pub struct Representation {
    pub algebra: Arc<DgAlgebra>,
    pub generators: Vec<Arc<DgBimodule>>,
    pub probes: Vec<Arc<DgBimodule>>,
}

#[derive(Clone, Copy, Debug)]
pub struct IdealBudget {
    /// How many times the generators are applied to the probes.
    pub depth: usize,
    /// Maximal number of ideal elements processed.
    pub max_steps: usize,
}

impl Default for IdealBudget {
    fn default() -> Self {
        IdealBudget { depth: 2, max_steps: 200_000 }
    }
}

/// A homogeneous morphism between two objects of the probe closure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub source: usize,
    pub target: usize,
    pub degree: i64,
    pub matrix: SparseMatrix,
}

/// The least dg ideal containing some seeds, on the closure of the probes
/// under the generators. Objects are kept up to closed isomorphism.
#[derive(Clone, Debug)]
pub struct Ideal {
    pub objects: Vec<Arc<DgBimodule>>,
    pub probe_count: usize,
    /// Dimension of the ideal in `Hom^d(objects[p], objects[q])`, keyed `(p, q, d)`.
    pub dims: BTreeMap<(usize, usize, i64), usize>,
    pub hom_dims: BTreeMap<(usize, usize, i64), usize>,
    /// A basis of the ideal, degree by degree.
    pub elements: Vec<Morphism>,
    /// False if the budget ran out or an element reached the depth limit.
    pub complete: bool,
}

impl Ideal {
    pub fn dim(&self, p: usize, q: usize, d: i64) -> usize {
        self.dims.get(&(p, q, d)).copied().unwrap_or(0)
    }

    fn on_probes(&self) -> impl Iterator<Item = (&(usize, usize, i64), &usize)> {
        self.hom_dims.iter().filter(move |((p, q, _), _)| *p < self.probe_count && *q < self.probe_count)
    }

    pub fn is_zero_on_probes(&self) -> bool {
        self.on_probes().all(|(k, _)| self.dims.get(k).copied().unwrap_or(0) == 0)
    }

    pub fn is_everything_on_probes(&self) -> bool {
        self.on_probes().all(|(k, n)| self.dims.get(k).copied().unwrap_or(0) == *n)
    }

    pub fn is_proper(&self) -> bool {
        !self.is_zero_on_probes() && !self.is_everything_on_probes()
    }
}

#[derive(Clone, Debug)]
pub enum ProbeOutcome {
    /// Every closure from a basis morphism was zero or everything on the
    /// probes. This is not a proof of quotient-simplicity.
    NoProperIdealFound { seeds_tried: usize, complete: bool },
    ProperIdeal { seed: Morphism, ideal: Box<Ideal> },
}

/// `G ∘ objects[p]` as realized, identified with `objects[target]` through a
/// closed isomorphism.
#[derive(Clone, Debug)]
struct Action {
    target: usize,
    realized: Realized,
    iso: SparseMatrix,
    inverse: SparseMatrix,
}

/// Objects reachable from the probes, the generator action on them and bases
/// of all their hom spaces.
struct ProbeSpace {
    objects: Vec<Arc<DgBimodule>>,
    probe_count: usize,
    act: Vec<Vec<Option<Action>>>,
    homs: HashMap<(usize, usize, i64), Vec<SparseMatrix>>,
}

impl ProbeSpace {
    fn new(rep: &Representation, depth: usize) -> Result<Self> {
        for m in rep.probes.iter() {
            if !same(m.left_algebra(), &rep.algebra) || !m.right_algebra().is_ground_field() {
                return Err(mismatch("probes must be left modules over the representation algebra"));
            }
        }
        for g in rep.generators.iter() {
            if !same(g.left_algebra(), &rep.algebra) || !same(g.right_algebra(), &rep.algebra) {
                return Err(mismatch("generators must be bimodules over the representation algebra"));
            }
        }
        let mut objects: Vec<Arc<DgBimodule>> = rep.probes.clone();
        let mut act: Vec<Vec<Option<Action>>> = vec![Vec::new(); rep.generators.len()];
        let mut frontier: Vec<usize> = (0..objects.len()).collect();
        for _ in 0..depth {
            let mut next = Vec::new();
            for &p in &frontier {
                for (g, gen) in rep.generators.iter().enumerate() {
                    let realized = multi_tensor(&[gen.clone(), objects[p].clone()])?;
                    let mut found = None;
                    for (i, o) in objects.iter().enumerate() {
                        if let Some(f) = find_isomorphism(&realized.module, o, 0, 4)? {
                            found = Some((i, f.matrix));
                            break;
                        }
                    }
                    let (target, iso) = match found {
                        Some(x) => x,
                        None => {
                            objects.push(realized.module.clone());
                            next.push(objects.len() - 1);
                            (objects.len() - 1, SparseMatrix::identity(realized.module.dim(), realized.module.field()))
                        }
                    };
                    let inverse = iso.inverse().expect("isomorphism");
                    if act[g].len() <= p {
                        act[g].resize(p + 1, None);
                    }
                    act[g][p] = Some(Action { target, realized, iso, inverse });
                }
            }
            frontier = next;
        }
        for a in act.iter_mut() {
            a.resize(objects.len(), None);
        }
        let mut homs = HashMap::new();
        for p in 0..objects.len() {
            for q in 0..objects.len() {
                let (lo, hi) = degree_range(&objects[p], &objects[q]);
                for d in lo..=hi {
                    let hs = HomSpace::new(&objects[p], &objects[q], d)?;
                    if hs.dim() > 0 {
                        homs.insert((p, q, d), hs.elements());
                    }
                }
            }
        }
        Ok(ProbeSpace { objects, probe_count: rep.probes.len(), act, homs })
    }

    fn closure(&self, seeds: &[Morphism], budget: &IdealBudget) -> Ideal {
        let mut spaces: HashMap<(usize, usize, i64), Echelon> = HashMap::new();
        let mut elements = Vec::new();
        let mut queue = VecDeque::new();
        let mut complete = true;
        let add = |m: Morphism, spaces: &mut HashMap<(usize, usize, i64), Echelon>, queue: &mut VecDeque<Morphism>| {
            if m.matrix.is_zero() {
                return;
            }
            let key = (m.source, m.target, m.degree);
            let n = m.matrix.nrows() * m.matrix.ncols();
            let e = spaces.entry(key).or_insert_with(|| Echelon::new(n, m.matrix.field()));
            if e.insert(m.matrix.flatten()) {
                queue.push_back(m);
            }
        };
        for s in seeds {
            add(s.clone(), &mut spaces, &mut queue);
        }
        let n = self.objects.len();
        let mut steps = 0;
        while let Some(m) = queue.pop_front() {
            steps += 1;
            if steps > budget.max_steps {
                complete = false;
                break;
            }
            let (p, q, d) = (m.source, m.target, m.degree);
            let dm = hom_differential(&self.objects[p], &self.objects[q], d, &m.matrix);
            add(Morphism { source: p, target: q, degree: d + 1, matrix: dm }, &mut spaces, &mut queue);
            for ((s, t, e), hs) in &self.homs {
                if *s == q {
                    for h in hs {
                        add(Morphism { source: p, target: *t, degree: d + e, matrix: h * &m.matrix }, &mut spaces, &mut queue);
                    }
                }
                if *t == p {
                    for h in hs {
                        add(Morphism { source: *s, target: q, degree: d + e, matrix: &m.matrix * h }, &mut spaces, &mut queue);
                    }
                }
            }
            for a in &self.act {
                match (&a[p], &a[q]) {
                    (Some(ap), Some(aq)) => {
                        let g = &ap.realized.factors[0];
                        let id = SparseMatrix::identity(g.dim(), g.field());
                        let gm = &(&aq.iso * &hcomp(&ap.realized, &aq.realized, &id, &m.matrix, d)) * &ap.inverse;
                        add(Morphism { source: ap.target, target: aq.target, degree: d, matrix: gm }, &mut spaces, &mut queue);
                    }
                    _ => complete = false,
                }
            }
            elements.push(m);
        }
        elements.extend(queue);
        let dims = spaces.iter().map(|(k, e)| (*k, e.rank())).filter(|(_, r)| *r > 0).collect();
        let mut hom_dims = BTreeMap::new();
        for p in 0..n {
            for q in 0..n {
                for ((s, t, d), hs) in &self.homs {
                    if (*s, *t) == (p, q) {
                        hom_dims.insert((p, q, *d), hs.len());
                    }
                }
            }
        }
        Ideal { objects: self.objects.clone(), probe_count: self.probe_count, dims, hom_dims, elements, complete }
    }
}

/// The least fixed point of linear span, `∂`, composition with all morphisms
/// between objects of the probe closure, and the generator action.
pub fn ideal_closure(rep: &Representation, seeds: &[Morphism], budget: &IdealBudget) -> Result<Ideal> {
    let space = ProbeSpace::new(rep, budget.depth)?;
    for s in seeds {
        if s.source >= space.objects.len() || s.target >= space.objects.len() {
            return Err(mismatch("seed between objects outside the probe closure"));
        }
    }
    Ok(space.closure(seeds, budget))
}

/// Runs the closure from every basis morphism between probes and reports the
/// first closure that is neither zero nor everything on the probes.
pub fn quotient_simple_probe(rep: &Representation, budget: &IdealBudget) -> Result<ProbeOutcome> {
    let space = ProbeSpace::new(rep, budget.depth)?;
    let mut keys: Vec<_> = space.homs.keys().filter(|(p, q, _)| *p < space.probe_count && *q < space.probe_count).copied().collect();
    keys.sort();
    let mut tried = 0;
    let mut complete = true;
    for (p, q, d) in keys {
        for h in &space.homs[&(p, q, d)] {
            tried += 1;
            let seed = Morphism { source: p, target: q, degree: d, matrix: h.clone() };
            let ideal = space.closure(std::slice::from_ref(&seed), budget);
            complete &= ideal.complete;
            if ideal.is_proper() {
                return Ok(ProbeOutcome::ProperIdeal { seed, ideal: Box::new(ideal) });
            }
        }
    }
    Ok(ProbeOutcome::NoProperIdealFound { seeds_tried: tried, complete })
}
