use rustc_hash::FxHashMap as HashMap;
use std::sync::Arc;

use super::category::{FinCategory, Mor, Obj};
use super::functor::FinFunctor;
use crate::error::{Error, Result};

/// A pullback square together with the mediator of every commuting cone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PullbackResult {
    pub apex: Obj,
    /// Projection onto `dom f`.
    pub left: Mor,
    /// Projection onto `dom g`.
    pub right: Mor,
    pub mediators: HashMap<(Mor, Mor), Mor>,
}

impl PullbackResult {
    /// The unique arrow into the apex induced by the cone `(x, y)`.
    pub fn mediator(&self, x: Mor, y: Mor) -> Option<Mor> {
        self.mediators.get(&(x, y)).copied()
    }
}

fn cones_from(c: &FinCategory, x: Obj, f: Mor, g: Mor) -> usize {
    let mut n = 0;
    for &a in c.hom(x, c.dom(f)) {
        let fa = c.comp(f, a);
        for &b in c.hom(x, c.dom(g)) {
            if c.comp(g, b) == fa {
                n += 1;
            }
        }
    }
    n
}

/// Pullback of the cospan `f: A -> C <- B: g` by exhaustive search over apexes and
/// projection pairs. Ties are broken by smallest apex, then smallest `(left, right)`.
pub fn pullback(c: &FinCategory, f: Mor, g: Mor) -> Result<PullbackResult> {
    if c.cod(f) != c.cod(g) {
        return Err(Error::MalformedEntity(format!(
            "pullback of non-cospan ({}, {})",
            c.name(f),
            c.name(g)
        )));
    }
    let cone_counts: Vec<usize> = c.objects().map(|x| cones_from(c, x, f, g)).collect();
    for p in c.objects() {
        for &l in c.hom(p, c.dom(f)) {
            let fl = c.comp(f, l);
            for &r in c.hom(p, c.dom(g)) {
                if c.comp(g, r) != fl {
                    continue;
                }
                if let Some(mediators) = universal(c, p, l, r, &cone_counts) {
                    return Ok(PullbackResult { apex: p, left: l, right: r, mediators });
                }
            }
        }
    }
    Err(Error::NoPullback { f: c.name(f).to_string(), g: c.name(g).to_string() })
}

fn universal(
    c: &FinCategory,
    p: Obj,
    l: Mor,
    r: Mor,
    cone_counts: &[usize],
) -> Option<HashMap<(Mor, Mor), Mor>> {
    let mut mediators = HashMap::default();
    for x in c.objects() {
        let hs = c.hom(x, p);
        if hs.len() != cone_counts[x.index()] {
            return None;
        }
        for &m in hs {
            if mediators.insert((c.comp(l, m), c.comp(r, m)), m).is_some() {
                return None;
            }
        }
    }
    Some(mediators)
}

/// Smallest object receiving exactly one arrow from every object.
pub fn terminal_object(c: &FinCategory) -> Result<Obj> {
    c.objects()
        .find(|&t| c.objects().all(|x| c.hom(x, t).len() == 1))
        .ok_or(Error::NoTerminal)
}

/// Checks that every cospan has a pullback; reports the first that does not.
pub fn has_all_pullbacks(c: &FinCategory) -> Result<()> {
    for f in c.morphisms() {
        for &g in c.incoming(c.cod(f)) {
            pullback(c, f, g)?;
        }
    }
    Ok(())
}

/// Strict pullback of two functors with a common target: pairs agreeing in the target.
#[derive(Debug, Clone)]
pub struct FunctorPullback {
    pub category: Arc<FinCategory>,
    pub left: FinFunctor,
    pub right: FinFunctor,
    pub objects: Vec<(Obj, Obj)>,
    pub morphisms: Vec<(Mor, Mor)>,
    object_of: HashMap<(Obj, Obj), Obj>,
    morphism_of: HashMap<(Mor, Mor), Mor>,
}

impl FunctorPullback {
    pub fn object(&self, x: Obj, y: Obj) -> Option<Obj> {
        self.object_of.get(&(x, y)).copied()
    }

    pub fn morphism(&self, a: Mor, b: Mor) -> Option<Mor> {
        self.morphism_of.get(&(a, b)).copied()
    }
}

pub fn pullback_of_functors(f: &FinFunctor, g: &FinFunctor) -> Result<FunctorPullback> {
    if **f.target() != **g.target() {
        return Err(Error::MismatchedBase("functors do not share a target".into()));
    }
    let (e1, e2) = (f.source().clone(), g.source().clone());
    let mut objects = Vec::new();
    let mut object_of = HashMap::default();
    for x in e1.objects() {
        for y in e2.objects() {
            if f.obj(x) == g.obj(y) {
                object_of.insert((x, y), Obj(objects.len() as u32));
                objects.push((x, y));
            }
        }
    }
    let mut morphisms = Vec::new();
    let mut morphism_of = HashMap::default();
    for a in e1.morphisms() {
        for b in e2.morphisms() {
            if f.mor(a) == g.mor(b) {
                morphism_of.insert((a, b), Mor(morphisms.len() as u32));
                morphisms.push((a, b));
            }
        }
    }
    let category = FinCategory::generate(
        objects.iter().map(|&(x, y)| format!("({},{})", e1.object_name(x), e2.object_name(y))).collect(),
        morphisms
            .iter()
            .map(|&(a, b)| {
                (
                    format!("({},{})", e1.name(a), e2.name(b)),
                    object_of[&(e1.dom(a), e2.dom(b))],
                    object_of[&(e1.cod(a), e2.cod(b))],
                )
            })
            .collect(),
        |o| {
            let (x, y) = objects[o.index()];
            morphism_of[&(e1.id(x), e2.id(y))]
        },
        |q, p| {
            let (a2, b2) = morphisms[q.index()];
            let (a1, b1) = morphisms[p.index()];
            morphism_of.get(&(e1.compose(a2, a1)?, e2.compose(b2, b1)?)).copied()
        },
    )?;
    let category = Arc::new(category);
    let left = FinFunctor::new(
        category.clone(),
        e1,
        objects.iter().map(|p| p.0).collect(),
        morphisms.iter().map(|p| p.0).collect(),
    )?;
    let right = FinFunctor::new(
        category.clone(),
        e2,
        objects.iter().map(|p| p.1).collect(),
        morphisms.iter().map(|p| p.1).collect(),
    )?;
    Ok(FunctorPullback { category, left, right, objects, morphisms, object_of, morphism_of })
}
