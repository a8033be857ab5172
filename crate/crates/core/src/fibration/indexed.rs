use rustc_hash::FxHashMap as HashMap;
use std::sync::Arc;

use super::Fibration;
use crate::error::{Error, Result};
use crate::fincat::{FinCategory, FinFunctor, Mor, Obj};
use crate::report::Report;

/// A strict contravariant functor from a finite base into finite categories.
#[derive(Debug, Clone)]
pub struct IndexedCategory {
    base: Arc<FinCategory>,
    fibers: Vec<Arc<FinCategory>>,
    reindex: Vec<FinFunctor>,
}

impl IndexedCategory {
    /// `reindex[σ]` must go from the fiber over `cod σ` to the fiber over `dom σ`.
    pub fn new(base: Arc<FinCategory>, fibers: Vec<Arc<FinCategory>>, reindex: Vec<FinFunctor>) -> Result<Self> {
        if fibers.len() != base.object_count() || reindex.len() != base.morphism_count() {
            return Err(Error::MalformedEntity("indexed category does not cover its base".into()));
        }
        for s in base.morphisms() {
            let f = &reindex[s.index()];
            if **f.source() != *fibers[base.cod(s).index()] || **f.target() != *fibers[base.dom(s).index()] {
                return Err(Error::MalformedEntity(format!(
                    "reindexing along `{}` does not run between the right fibers",
                    base.name(s)
                )));
            }
        }
        Ok(IndexedCategory { base, fibers, reindex })
    }

    pub fn base(&self) -> &Arc<FinCategory> {
        &self.base
    }

    pub fn fiber(&self, gamma: Obj) -> &Arc<FinCategory> {
        &self.fibers[gamma.index()]
    }

    pub fn fibers(&self) -> &[Arc<FinCategory>] {
        &self.fibers
    }

    pub fn reindex(&self, sigma: Mor) -> &FinFunctor {
        &self.reindex[sigma.index()]
    }

    /// Functoriality of each reindexing and the strict identity/composition laws.
    pub fn validate(&self) -> Report {
        let b = &self.base;
        let mut r = Report::new("indexed-category");
        let mark = r.entries.len();
        for s in b.morphisms() {
            let v = self.reindex(s).validate();
            if !v.is_ok() {
                r.fail("reindex-functor", format!("{}: {}", b.name(s), v.failures().next().map(|e| e.id.as_str()).unwrap_or("")));
            }
        }
        r.pass_unless_failed(mark, "reindex-functor", "");
        if !r.is_ok() {
            return r;
        }
        let mark = r.entries.len();
        for g in b.objects() {
            if *self.reindex(b.id(g)) != FinFunctor::identity(self.fiber(g).clone()) {
                r.fail("reindex-identity", b.object_name(g).to_string());
            }
        }
        r.pass_unless_failed(mark, "reindex-identity", "");
        let mark = r.entries.len();
        for (s, t, st) in b.composition_triples() {
            // (s . t)* = t* . s*
            let lhs = self.reindex(st);
            let rhs = self.reindex(s).then(self.reindex(t)).expect("fibers match");
            if lhs.object_map() != rhs.object_map() || lhs.morphism_map() != rhs.morphism_map() {
                r.fail("reindex-composition", format!("({}, {})", b.name(s), b.name(t)));
            }
        }
        r.pass_unless_failed(mark, "reindex-composition", "");
        r
    }

    /// Fiberwise opposite, with the same reindexing maps.
    pub fn opposite(&self) -> IndexedCategory {
        let fibers: Vec<Arc<FinCategory>> = self.fibers.iter().map(|f| Arc::new(f.opposite())).collect();
        let reindex = self
            .base
            .morphisms()
            .map(|s| {
                let f = self.reindex(s);
                FinFunctor::new(
                    fibers[self.base.cod(s).index()].clone(),
                    fibers[self.base.dom(s).index()].clone(),
                    f.object_map().to_vec(),
                    f.morphism_map().to_vec(),
                )
                .expect("opposite keeps identifiers")
            })
            .collect();
        IndexedCategory { base: self.base.clone(), fibers, reindex }
    }
}

/// A morphism of the Grothendieck construction: `(σ, v)` into `(cod σ, target)` with
/// `v: A' -> σ*(target)` in the fiber over `dom σ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GrothendieckMor {
    pub sigma: Mor,
    pub target: Obj,
    pub vertical: Mor,
}

/// Total category of an indexed category, with the canonical split cleavage.
#[derive(Debug, Clone)]
pub struct Grothendieck {
    pub fibration: Fibration,
    pub indexed: IndexedCategory,
    /// `(Γ, A)` for each total object.
    pub objects: Vec<(Obj, Obj)>,
    pub morphisms: Vec<GrothendieckMor>,
    object_of: HashMap<(Obj, Obj), Obj>,
    morphism_of: HashMap<GrothendieckMor, Mor>,
}

impl Grothendieck {
    pub fn object(&self, gamma: Obj, a: Obj) -> Obj {
        self.object_of[&(gamma, a)]
    }

    pub fn morphism(&self, sigma: Mor, target: Obj, vertical: Mor) -> Option<Mor> {
        self.morphism_of.get(&GrothendieckMor { sigma, target, vertical }).copied()
    }

    pub fn total(&self) -> &Arc<FinCategory> {
        self.fibration.total()
    }
}

pub fn grothendieck(ic: &IndexedCategory) -> Result<Grothendieck> {
    let v = ic.validate();
    if let Some(e) = v.failures().next() {
        return Err(Error::NonStrict(format!("{} {}", e.id, e.detail)));
    }
    let b = ic.base();
    let mut objects = Vec::new();
    let mut object_of = HashMap::default();
    let mut object_names = Vec::new();
    for g in b.objects() {
        let fib = ic.fiber(g);
        for a in fib.objects() {
            object_of.insert((g, a), Obj(objects.len() as u32));
            objects.push((g, a));
            object_names.push(format!("{}|{}", b.object_name(g), fib.object_name(a)));
        }
    }
    // Ordered by σ, then v, so the fiber over Γ lists its morphisms in the original order.
    let mut morphisms = Vec::new();
    let mut morphism_of = HashMap::default();
    let mut decls = Vec::new();
    for s in b.morphisms() {
        let (theta, gamma) = (b.dom(s), b.cod(s));
        let (lower, upper) = (ic.fiber(theta), ic.fiber(gamma));
        let f = ic.reindex(s);
        for v in lower.morphisms() {
            for a in upper.objects() {
                if f.obj(a) != lower.cod(v) {
                    continue;
                }
                let m = GrothendieckMor { sigma: s, target: a, vertical: v };
                morphism_of.insert(m, Mor(morphisms.len() as u32));
                morphisms.push(m);
                decls.push((
                    format!("<{}|{}|{}>", b.name(s), lower.name(v), upper.object_name(a)),
                    object_of[&(theta, lower.dom(v))],
                    object_of[&(gamma, a)],
                ));
            }
        }
    }
    let total = FinCategory::generate(
        object_names,
        decls,
        |o| {
            let (g, a) = objects[o.index()];
            morphism_of[&GrothendieckMor { sigma: b.id(g), target: a, vertical: ic.fiber(g).id(a) }]
        },
        |g2, f1| {
            let m1 = morphisms[f1.index()];
            let m2 = morphisms[g2.index()];
            let lower = ic.fiber(b.dom(m1.sigma));
            let pulled = ic.reindex(m1.sigma).mor(m2.vertical);
            let v = lower.compose(pulled, m1.vertical)?;
            let s = b.compose(m2.sigma, m1.sigma)?;
            morphism_of.get(&GrothendieckMor { sigma: s, target: m2.target, vertical: v }).copied()
        },
    )?;
    let total = Arc::new(total);
    let p = FinFunctor::new(
        total.clone(),
        b.clone(),
        objects.iter().map(|&(g, _)| g).collect(),
        morphisms.iter().map(|m| m.sigma).collect(),
    )?;
    let mut lifts = Vec::new();
    for (i, &(g, a)) in objects.iter().enumerate() {
        for &s in b.incoming(g) {
            let theta = b.dom(s);
            let pa = ic.reindex(s).obj(a);
            let l = morphism_of[&GrothendieckMor { sigma: s, target: a, vertical: ic.fiber(theta).id(pa) }];
            lifts.push((Obj(i as u32), s, l));
        }
    }
    let fibration = Fibration::with_cleavage(p, lifts, true)?;
    Ok(Grothendieck { fibration, indexed: ic.clone(), objects, morphisms, object_of, morphism_of })
}

/// Fibers and cleavage-induced reindexing of a split fibration.
pub fn indexed_of(f: &Fibration) -> Result<IndexedCategory> {
    let violations = f.split_violations()?;
    if let Some(v) = violations.into_iter().next() {
        return Err(Error::NonSplitCleavage(v));
    }
    let b = f.base();
    let fibers: Vec<_> = b.objects().map(|g| f.fiber(g)).collect::<Result<_>>()?;
    let mut reindex = Vec::with_capacity(b.morphism_count());
    for s in b.morphisms() {
        let upper = &fibers[b.cod(s).index()];
        let lower = &fibers[b.dom(s).index()];
        let mut objs = Vec::with_capacity(upper.objects.len());
        for &a in &upper.objects {
            let pa = f.reindex_object(a, s)?;
            objs.push(lower.object_position(pa).expect("reindexed object lies in the fiber"));
        }
        let mut mors = Vec::with_capacity(upper.morphisms.len());
        for &m in &upper.morphisms {
            let pm = f.reindex_vertical(m, s)?;
            mors.push(lower.morphism_position(pm).expect("reindexed arrow is vertical"));
        }
        reindex.push(FinFunctor::new(upper.category.clone(), lower.category.clone(), objs, mors)?);
    }
    IndexedCategory::new(b.clone(), fibers.into_iter().map(|x| x.category).collect(), reindex)
}

/// `grothendieck(indexed_of(f))` together with the comparison functor into `f`'s total
/// category, `(Γ, A) ↦ A` and `(σ, v) ↦ lift(A, σ) . v`.
pub fn grothendieck_comparison(f: &Fibration) -> Result<(Grothendieck, FinFunctor)> {
    let ic = indexed_of(f)?;
    let g = grothendieck(&ic)?;
    let b = f.base();
    let fibers: Vec<_> = b.objects().map(|x| f.fiber(x)).collect::<Result<_>>()?;
    let objs = g.objects.iter().map(|&(gm, a)| fibers[gm.index()].objects[a.index()]).collect();
    let mut mors = Vec::with_capacity(g.morphisms.len());
    for m in &g.morphisms {
        let a = fibers[b.cod(m.sigma).index()].objects[m.target.index()];
        let v = fibers[b.dom(m.sigma).index()].morphisms[m.vertical.index()];
        mors.push(f.total().comp(f.cartesian_lift(a, m.sigma)?, v));
    }
    let h = FinFunctor::new(g.total().clone(), f.total().clone(), objs, mors)?;
    Ok((g, h))
}

/// Fiberwise opposite of a split fibration.
pub fn vertical_opposite(f: &Fibration) -> Result<Grothendieck> {
    grothendieck(&indexed_of(f)?.opposite())
}
