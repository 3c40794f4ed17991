use std::collections::HashMap;
use std::sync::{Arc, Mutex, RwLock};

use crate::dgalg::DgAlgebra;
use crate::dgbimod::{multi_tensor, same_algebra, DgBimodule, Realized};
use crate::error::{mismatch, structural, Result};
use crate::linalg::{Field, SparseMatrix};

/// A generating 1-morphism: an `A_target`–`A_source`-bimodule.
#[derive(Clone, Debug)]
pub struct Generator {
    pub name: String,
    pub module: Arc<DgBimodule>,
    pub target: usize,
    pub source: usize,
}

#[derive(Clone, Debug)]
pub struct Object {
    pub name: String,
    pub algebra: Arc<DgAlgebra>,
}

/// The concrete dg 2-category that twisted complexes live over.
///
/// Objects are dg algebras; a 1-morphism `i → j` is a word of generators
/// (leftmost generator has target `j`), realized as the tensor product of
/// their bimodules over the intermediate algebras. The empty word at `i` is
/// the regular bimodule of `A_i`. Words compose by concatenation, so
/// composition of 1-morphisms is strictly associative.
///
/// Generators are append-only; new ones appear when reduction splits a
/// summand. Realized words are cached.
#[derive(Debug)]
pub struct Ambient {
    field: Field,
    objects: Vec<Object>,
    generators: RwLock<Vec<Generator>>,
    cache: Mutex<HashMap<(usize, Vec<usize>), Arc<Realized>>>,
}

impl Ambient {
    pub fn new(field: Field) -> Self {
        Ambient { field, objects: Vec::new(), generators: RwLock::new(Vec::new()), cache: Mutex::new(HashMap::new()) }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn add_object(&mut self, name: impl Into<String>, algebra: Arc<DgAlgebra>) -> usize {
        self.objects.push(Object { name: name.into(), algebra });
        self.objects.len() - 1
    }

    pub fn objects(&self) -> &[Object] {
        &self.objects
    }

    pub fn algebra(&self, obj: usize) -> &Arc<DgAlgebra> {
        &self.objects[obj].algebra
    }

    /// Registers `module` as a generator `source → target`.
    pub fn add_generator(&self, name: impl Into<String>, module: Arc<DgBimodule>, target: usize, source: usize) -> Result<usize> {
        if target >= self.objects.len() || source >= self.objects.len() {
            return Err(structural("generator endpoints are not objects"));
        }
        if !same_algebra(module.left_algebra(), self.algebra(target)) || !same_algebra(module.right_algebra(), self.algebra(source)) {
            return Err(mismatch("generator bimodule is over the wrong algebras"));
        }
        let mut g = self.generators.write().unwrap();
        g.push(Generator { name: name.into(), module, target, source });
        Ok(g.len() - 1)
    }

    /// Reuses a generator with the same endpoints and bimodule, else registers one.
    pub fn intern_generator(&self, prefix: &str, module: Arc<DgBimodule>, target: usize, source: usize) -> Result<usize> {
        {
            let gens = self.generators.read().unwrap();
            if let Some(g) = gens.iter().position(|g| g.target == target && g.source == source && *g.module == *module) {
                return Ok(g);
            }
        }
        let name = format!("{prefix}{}", self.generator_count());
        self.add_generator(name, module, target, source)
    }

    pub fn generator(&self, g: usize) -> Generator {
        self.generators.read().unwrap()[g].clone()
    }

    pub fn generator_count(&self) -> usize {
        self.generators.read().unwrap().len()
    }

    pub fn find_generator(&self, name: &str) -> Option<usize> {
        self.generators.read().unwrap().iter().position(|g| g.name == name)
    }

    /// `(source, target)` of a word; `obj` is used for the empty word.
    pub fn endpoints(&self, obj: usize, word: &[usize]) -> Result<(usize, usize)> {
        if word.is_empty() {
            return Ok((obj, obj));
        }
        let gens = self.generators.read().unwrap();
        for w in word.windows(2) {
            if gens[w[0]].source != gens[w[1]].target {
                return Err(mismatch(format!("{} and {} are not composable", gens[w[0]].name, gens[w[1]].name)));
            }
        }
        Ok((gens[*word.last().unwrap()].source, gens[word[0]].target))
    }

    pub fn word_name(&self, word: &[usize]) -> String {
        if word.is_empty() {
            return "1".into();
        }
        let gens = self.generators.read().unwrap();
        word.iter().map(|&g| gens[g].name.as_str()).collect::<Vec<_>>().join("·")
    }

    /// The realized bimodule of a word; `obj` is the object of the empty word.
    pub fn realize(&self, obj: usize, word: &[usize]) -> Result<Arc<Realized>> {
        let key = (if word.is_empty() { obj } else { 0 }, word.to_vec());
        if let Some(r) = self.cache.lock().unwrap().get(&key) {
            return Ok(r.clone());
        }
        self.endpoints(obj, word)?;
        let factors: Vec<Arc<DgBimodule>> = if word.is_empty() {
            vec![Arc::new(DgBimodule::regular(self.algebra(obj).clone()))]
        } else {
            let gens = self.generators.read().unwrap();
            word.iter().map(|&g| gens[g].module.clone()).collect()
        };
        let r = Arc::new(multi_tensor(&factors)?);
        self.cache.lock().unwrap().insert(key, r.clone());
        Ok(r)
    }

    /// Horizontal composite `α ∘₀ β`: for `α: W1 → W1'` of degree `|α|` and
    /// `β: W2 → W2'` of degree `|β|`, the map `W1W2 → W1'W2'` given by
    /// `x ⊗ y ↦ (-1)^{|β||x|} α(x) ⊗ β(y)`. `mid` is the object between the
    /// two halves and `src` the source of `W2`.
    #[allow(clippy::too_many_arguments)]
    pub fn hcomp(
        &self,
        src: usize,
        mid: usize,
        w1: (&[usize], &[usize]),
        alpha: &SparseMatrix,
        w2: (&[usize], &[usize]),
        beta: &SparseMatrix,
        beta_degree: i64,
    ) -> Result<SparseMatrix> {
        let field = self.field;
        let cat = |a: &[usize], b: &[usize]| [a, b].concat();
        let r1 = self.realize(mid, w1.0)?;
        let r2 = self.realize(src, w2.0)?;
        let r1t = self.realize(mid, w1.1)?;
        let r2t = self.realize(src, w2.1)?;
        let rs = self.realize(src, &cat(w1.0, w2.0))?;
        let rt = self.realize(src, &cat(w1.1, w2.1))?;
        let unit = self.algebra(mid).unit().clone();
        let mut cols = Vec::with_capacity(rs.module.dim());
        for q in 0..rs.module.dim() {
            let (x1, x2) = if w1.0.is_empty() {
                (unit.clone(), rs.module.basis_vec(q))
            } else if w2.0.is_empty() {
                (rs.module.basis_vec(q), unit.clone())
            } else {
                let t = rs.tuple(q);
                let (a, b) = t.split_at(w1.0.len());
                (r1.project(vec![(a.to_vec(), field.one())]), r2.project(vec![(b.to_vec(), field.one())]))
            };
            let deg = x1.first().map_or(0, |(i, _)| r1.module.degree(*i));
            let y1 = alpha.apply(&x1);
            let y2 = beta.apply(&x2);
            if y1.is_empty() || y2.is_empty() {
                cols.push(Vec::new());
                continue;
            }
            let mut v = if w1.1.is_empty() {
                rt.module.act_left(&y1, &y2)
            } else if w2.1.is_empty() {
                rt.module.act_right(&y1, &y2)
            } else {
                let mut terms = Vec::new();
                for (u, c) in &y1 {
                    for (w, d) in &y2 {
                        terms.push((cat(r1t.tuple(*u), r2t.tuple(*w)), c * d));
                    }
                }
                rt.project(terms)
            };
            if (beta_degree * deg) % 2 != 0 {
                v = v.into_iter().map(|(i, c)| (i, -c)).collect();
            }
            cols.push(v);
        }
        Ok(SparseMatrix::from_columns(rt.module.dim(), field, cols))
    }

    /// The identity of a realized word.
    pub fn identity(&self, obj: usize, word: &[usize]) -> Result<SparseMatrix> {
        Ok(SparseMatrix::identity(self.realize(obj, word)?.module.dim(), self.field))
    }
}
