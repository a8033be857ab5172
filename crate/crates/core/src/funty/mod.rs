//! Function types with subtyping over a gcwf.
//!
//! `Fun` is defined on the corner `u^vop ×_B u` of pairs of types in a common context,
//! contravariant on vertical arrows of the first component only. `λ` is defined on pairs
//! `((A, B), b)` with `b` a term of the weakened `B` over `Γ.A`.

mod instances;

#[cfg(test)]
mod tests;

pub use instances::{covariant_meet_structure, heyting_fun_structure, subobject_fun_structure};

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::fibration::{fibred_product, vertical_opposite, Along, Fiber, FibredProduct, Grothendieck};
use crate::fincat::{pullback_of_functors, FinCategory, FinFunctor, FunctorPullback, Mor, Obj};
use crate::gcwf::{Gcwf, Judgement};
use crate::report::Report;

/// Pairs of types in a common context, with vertical arrows of the first reversed.
#[derive(Debug, Clone)]
pub struct Corner {
    pub vop: Grothendieck,
    pub pairs: FibredProduct,
    fibers: Vec<Fiber>,
    vop_of: Vec<Obj>,
    type_of: Vec<Obj>,
}

impl Corner {
    pub fn new(g: &Gcwf) -> Result<Self> {
        let u = &g.u;
        let vop = vertical_opposite(u)?;
        let fibers: Vec<Fiber> = g.base().objects().map(|x| u.fiber(x)).collect::<Result<_>>()?;
        let mut vop_of = vec![Obj(0); g.types().object_count()];
        let mut type_of = vec![Obj(0); vop.objects.len()];
        for (i, &(gamma, pos)) in vop.objects.iter().enumerate() {
            let a = fibers[gamma.index()].objects[pos.index()];
            vop_of[a.index()] = Obj(i as u32);
            type_of[i] = a;
        }
        let pairs = fibred_product(&vop.fibration, u, Along::Base)?;
        Ok(Corner { vop, pairs, fibers, vop_of, type_of })
    }

    pub fn total(&self) -> &Arc<FinCategory> {
        self.pairs.total()
    }

    /// The corner object of two types in the same context.
    pub fn pair(&self, a: Obj, b: Obj) -> Option<Obj> {
        self.pairs.object(self.vop_of[a.index()], b)
    }

    /// The two types of a corner object.
    pub fn components(&self, o: Obj) -> (Obj, Obj) {
        let (x, b) = self.pairs.objects()[o.index()];
        (self.type_of[x.index()], b)
    }

    /// A vertical `f: A' -> A`, seen as a `u^vop` arrow `A -> A'`.
    pub fn reversed(&self, u: &crate::fibration::Fibration, f: Mor) -> Option<Mor> {
        let e = u.total();
        let gamma = u.over(e.dom(f));
        let fiber = &self.fibers[gamma.index()];
        let v = fiber.morphism_position(f)?;
        let target = fiber.object_position(e.dom(f))?;
        self.vop.morphism(u.base().id(gamma), target, v)
    }

    /// The arrow `A1 -> A2` of `E` behind a `u^vop` arrow whose vertical part is invertible.
    pub fn forward(&self, u: &crate::fibration::Fibration, alpha: Mor) -> Option<Mor> {
        let m = self.vop.morphisms[alpha.index()];
        let b = u.base();
        let e = u.total();
        let lower = &self.fibers[b.dom(m.sigma).index()];
        let upper = &self.fibers[b.cod(m.sigma).index()];
        let v = lower.morphisms[m.vertical.index()];
        let inv = e.inverse(v)?;
        let lift = u.cartesian_lift(upper.objects[m.target.index()], m.sigma).ok()?;
        e.compose(lift, inv)
    }
}

/// Weakening on the corner, restricted to arrows whose reversed vertical part is invertible:
/// `(A, B) ↦ (A, (uε_A)* B)`.
#[derive(Debug, Clone)]
pub struct Weakening {
    pub corner: Corner,
    /// The restricted corner.
    pub domain: Arc<FinCategory>,
    /// Corner morphism of each morphism of `domain`.
    pub inclusion: Vec<Mor>,
    pub first: FinFunctor,
    pub second: FinFunctor,
}

pub fn weakening_functor(g: &Gcwf) -> Result<Weakening> {
    weakening_on(g, Corner::new(g)?)
}

fn weakening_on(g: &Gcwf, corner: Corner) -> Result<Weakening> {
    let u = &g.u;
    let e = g.types();
    let p = corner.total().clone();
    let forward: Vec<Option<Mor>> =
        corner.pairs.morphisms().iter().map(|&(alpha, _)| corner.forward(u, alpha)).collect();
    let objs: Vec<Obj> = p.objects().collect();
    let (domain, _, inclusion) = p.subcategory(&objs, |m| forward[m.index()].is_some());
    let domain = Arc::new(domain);
    let first = FinFunctor::new(
        domain.clone(),
        corner.vop.total().clone(),
        objs.iter().map(|&o| corner.pairs.objects()[o.index()].0).collect(),
        inclusion.iter().map(|&m| corner.pairs.morphisms()[m.index()].0).collect(),
    )?;
    let mut second_obj = Vec::with_capacity(objs.len());
    let mut lifts = Vec::with_capacity(objs.len());
    for &o in &objs {
        let (a, b) = corner.components(o);
        let (_, proj) = g.context_extension(a)?;
        let l = u.cartesian_lift(b, proj)?;
        second_obj.push(e.dom(l));
        lifts.push(l);
    }
    let mut second_mor = Vec::with_capacity(inclusion.len());
    for (i, &m) in inclusion.iter().enumerate() {
        let (src, tgt) = (domain.dom(Mor(i as u32)), domain.cod(Mor(i as u32)));
        let alpha_e = forward[m.index()].expect("restricted to invertible vertical parts");
        let (_, beta) = corner.pairs.morphisms()[m.index()];
        let tau = g.udot.over_mor(g.delta.mor(alpha_e));
        let r = e.comp(beta, lifts[src.index()]);
        let t = u.fill(lifts[tgt.index()], r, tau).ok_or_else(|| {
            Error::MalformedEntity(format!("no weakening of corner arrow `{}`", p.name(m)))
        })?;
        second_mor.push(t);
    }
    let second = FinFunctor::new(domain.clone(), e.clone(), second_obj, second_mor)?;
    Ok(Weakening { corner, domain, inclusion, first, second })
}

/// The data of stage two: `λ` on `W*(corner ×_u Ė)` and the comparison into the pullback.
#[derive(Debug, Clone)]
pub struct StageTwo {
    pub weakening: Weakening,
    pub domain: FunctorPullback,
    pub lam: FinFunctor,
}

/// `Fun` and `λ` over a gcwf, given by their object tables; arrows are found as the unique
/// arrows over the right base arrow.
#[derive(Debug, Clone)]
pub struct FunStructure {
    pub owner: Gcwf,
    pub corner: Corner,
    /// `(A, B) ↦ Fun(A, B)`.
    pub fun_table: BTreeMap<(Obj, Obj), Obj>,
    /// `(A, B, b) ↦ λ(A, b)` for `b` a term of the weakened `B`.
    pub lam_table: BTreeMap<(Obj, Obj, Obj), Obj>,
    fun_objects: Vec<Option<Obj>>,
    fun_candidates: Vec<Vec<Mor>>,
    stage_two: OnceLock<(Report, Option<StageTwo>)>,
}

impl FunStructure {
    pub fn new(
        g: &Gcwf,
        fun_table: BTreeMap<(Obj, Obj), Obj>,
        lam_table: BTreeMap<(Obj, Obj, Obj), Obj>,
    ) -> Result<Self> {
        let corner = Corner::new(g)?;
        let e = g.types();
        let p = corner.total().clone();
        let fun_objects: Vec<Option<Obj>> = p
            .objects()
            .map(|o| {
                let (a, b) = corner.components(o);
                fun_table.get(&(a, b)).copied().filter(|x| x.index() < e.object_count())
            })
            .collect();
        let fun_candidates = p
            .morphisms()
            .map(|m| {
                let (Some(x), Some(y)) = (fun_objects[p.dom(m).index()], fun_objects[p.cod(m).index()]) else {
                    return Vec::new();
                };
                let sigma = corner.pairs.fibration.over_mor(m);
                e.hom(x, y).iter().copied().filter(|&t| g.u.over_mor(t) == sigma).collect()
            })
            .collect();
        Ok(FunStructure {
            owner: g.clone(),
            corner,
            fun_table,
            lam_table,
            fun_objects,
            fun_candidates,
            stage_two: OnceLock::new(),
        })
    }

    /// Tables evaluated from rules; `lam` is consulted on every object of the `λ` domain.
    pub fn from_rules(
        g: &Gcwf,
        fun: impl Fn(Obj, Obj) -> Option<Obj>,
        lam: impl Fn(Obj, Obj, Obj) -> Option<Obj>,
    ) -> Result<Self> {
        let corner = Corner::new(g)?;
        let mut fun_table = BTreeMap::new();
        for o in corner.total().objects() {
            let (a, b) = corner.components(o);
            if let Some(x) = fun(a, b) {
                fun_table.insert((a, b), x);
            }
        }
        let mut lam_table = BTreeMap::new();
        if let Ok(w) = weakening_on(g, corner) {
            if let Ok(d) = pullback_of_functors(&w.second, &g.sigma) {
                for &(o, b) in &d.objects {
                    let (a, bt) = w.corner.components(o);
                    if let Some(t) = lam(a, bt, b) {
                        lam_table.insert((a, bt, b), t);
                    }
                }
            }
        }
        FunStructure::new(g, fun_table, lam_table)
    }

    pub fn fun(&self, a: Obj, b: Obj) -> Option<Obj> {
        self.fun_table.get(&(a, b)).copied()
    }

    /// `Fun` on a corner arrow, when it has exactly one image.
    pub fn fun_arrow(&self, m: Mor) -> Option<Mor> {
        let c = &self.fun_candidates[m.index()];
        (c.len() == 1).then(|| c[0])
    }

    /// `Fun` as a functor on the whole corner, if stage one holds.
    pub fn fun_functor(&self) -> Result<FinFunctor> {
        let p = self.corner.total();
        let objs = self
            .fun_objects
            .iter()
            .map(|o| o.ok_or_else(|| Error::MalformedEntity("Fun is not total on objects".into())))
            .collect::<Result<_>>()?;
        let mors = p
            .morphisms()
            .map(|m| self.fun_arrow(m).ok_or_else(|| Error::MalformedEntity(format!("Fun has no unique image of `{}`", p.name(m)))))
            .collect::<Result<_>>()?;
        FinFunctor::new(p.clone(), self.owner.types().clone(), objs, mors)
    }

    /// Fun on objects and arrows of the corner, and that the result is a functor.
    pub fn stage_one(&self) -> Report {
        let g = &self.owner;
        let p = self.corner.total();
        let mut r = Report::new("stage1");
        let mark = r.entries.len();
        for o in p.objects() {
            let (a, b) = self.corner.components(o);
            match self.fun_objects[o.index()] {
                None => r.fail("fun-objects", format!("Fun({}, {}) is undefined", g.type_name(a), g.type_name(b))),
                Some(x) if g.u.over(x) != g.u.over(a) => r.fail(
                    "fun-objects",
                    format!("Fun({}, {}) leaves the context", g.type_name(a), g.type_name(b)),
                ),
                Some(_) => {}
            }
        }
        r.pass_unless_failed(mark, "fun-objects", "");
        if !r.is_ok() {
            return r;
        }
        let mark = r.entries.len();
        let vop = self.corner.vop.total();
        for m in p.morphisms() {
            let n = self.fun_candidates[m.index()].len();
            if n != 1 {
                let (alpha, beta) = self.corner.pairs.morphisms()[m.index()];
                r.fail(
                    "fun-morphisms",
                    format!("({}, {}) has {} images", vop.name(alpha), g.types().name(beta), n),
                );
            }
        }
        r.pass_unless_failed(mark, "fun-morphisms", "");
        if !r.is_ok() {
            return r;
        }
        match self.fun_functor() {
            Ok(f) => {
                let v = f.validate();
                if v.is_ok() {
                    r.pass("fun-functor", "");
                } else {
                    r.absorb("fun-functor", v);
                }
            }
            Err(e) => r.fail("fun-functor", e.to_string()),
        }
        r
    }

    fn compute_stage_two(&self) -> (Report, Option<StageTwo>) {
        let g = &self.owner;
        let mut r = Report::new("stage2");
        let fun = match self.fun_functor() {
            Ok(f) if f.is_valid() => f,
            _ => {
                r.fail("fun", "stage one does not hold");
                return (r, None);
            }
        };
        let w = match weakening_on(g, self.corner.clone()) {
            Ok(w) => w,
            Err(e) => {
                r.fail("weakening", e.to_string());
                return (r, None);
            }
        };
        r.check(w.second.is_valid(), "weakening", "");
        let d = match pullback_of_functors(&w.second, &g.sigma) {
            Ok(d) => d,
            Err(e) => {
                r.fail("lam-domain", e.to_string());
                return (r, None);
            }
        };
        let (e, ed) = (g.types(), g.terms());
        let mark = r.entries.len();
        let mut lam_obj = Vec::with_capacity(d.objects.len());
        for &(o, b) in &d.objects {
            let (a, bt) = w.corner.components(o);
            match self.lam_table.get(&(a, bt, b)) {
                Some(&t) if t.index() < ed.object_count() => {
                    if g.udot.over(t) != g.u.over(a) || Some(g.sigma.obj(t)) != self.fun(a, bt) {
                        r.fail(
                            "lam-objects",
                            format!("λ({}, {}) is not a term of Fun({}, {})", g.type_name(a), ed.object_name(b), g.type_name(a), g.type_name(bt)),
                        );
                    }
                    lam_obj.push(t);
                }
                _ => {
                    r.fail("lam-objects", format!("λ({}, {}) is undefined", g.type_name(a), ed.object_name(b)));
                    lam_obj.push(Obj(0));
                }
            }
        }
        r.pass_unless_failed(mark, "lam-objects", "");
        if !r.is_ok() {
            return (r, None);
        }
        let mark = r.entries.len();
        let dc = &d.category;
        let mut lam_mor = Vec::with_capacity(d.morphisms.len());
        for (i, &(m, _)) in d.morphisms.iter().enumerate() {
            let i = Mor(i as u32);
            let pm = w.inclusion[m.index()];
            let sigma = self.corner.pairs.fibration.over_mor(pm);
            let image = fun.mor(pm);
            let (x, y) = (lam_obj[dc.dom(i).index()], lam_obj[dc.cod(i).index()]);
            let cands: Vec<Mor> = ed
                .hom(x, y)
                .iter()
                .copied()
                .filter(|&t| g.udot.over_mor(t) == sigma && g.sigma.mor(t) == image)
                .collect();
            if cands.len() != 1 {
                r.fail("lam-morphisms", format!("`{}` has {} images", dc.name(i), cands.len()));
                lam_mor.push(Mor(0));
            } else {
                lam_mor.push(cands[0]);
            }
        }
        r.pass_unless_failed(mark, "lam-morphisms", "");
        if !r.is_ok() {
            return (r, None);
        }
        let lam = match FinFunctor::new(dc.clone(), ed.clone(), lam_obj, lam_mor) {
            Ok(l) => l,
            Err(err) => {
                r.fail("lam-functor", err.to_string());
                return (r, None);
            }
        };
        let v = lam.validate();
        if v.is_ok() {
            r.pass("lam-functor", "");
        } else {
            r.absorb("lam-functor", v);
            return (r, None);
        }
        // comparison W*(corner ×_u Ė) -> corner ×_E Ė, (x, b) ↦ (x, λ(x, b))
        let fun_iso = FinFunctor::new(
            w.domain.clone(),
            e.clone(),
            w.domain.objects().map(|o| fun.obj(o)).collect(),
            w.inclusion.iter().map(|&m| fun.mor(m)).collect(),
        );
        let target = fun_iso.and_then(|f| pullback_of_functors(&f, &g.sigma));
        match target {
            Ok(t) => {
                let objs: Option<Vec<Obj>> = d
                    .objects
                    .iter()
                    .enumerate()
                    .map(|(i, &(o, _))| t.object(o, lam.obj(Obj(i as u32))))
                    .collect();
                let mors: Option<Vec<Mor>> = d
                    .morphisms
                    .iter()
                    .enumerate()
                    .map(|(i, &(m, _))| t.morphism(m, lam.mor(Mor(i as u32))))
                    .collect();
                let iso = match (objs, mors) {
                    (Some(o), Some(m)) => FinFunctor::new(dc.clone(), t.category.clone(), o, m)
                        .map(|c| c.is_valid() && c.is_isomorphism())
                        .unwrap_or(false),
                    _ => false,
                };
                r.check(
                    iso,
                    "pullback",
                    format!("{} pairs with a term of the weakened type, {} terms of Fun", d.objects.len(), t.objects.len()),
                );
            }
            Err(err) => r.fail("pullback", err.to_string()),
        }
        let ok = r.is_ok();
        (r, ok.then_some(StageTwo { weakening: w, domain: d, lam }))
    }

    pub fn stage_two(&self) -> &(Report, Option<StageTwo>) {
        self.stage_two.get_or_init(|| self.compute_stage_two())
    }
}

/// Stage one (Fun is a functor on the mixed-variance corner) and stage two (the λ square
/// is a pullback). Entry ids are prefixed `stage1.` and `stage2.`.
pub fn check_fun_structure(fs: &FunStructure) -> Report {
    let mut r = Report::new("fun-structure");
    r.absorb("stage1", fs.stage_one());
    r.absorb("stage2", fs.stage_two().0.clone());
    r
}

/// From `Γ ⊢ A' ≤_f A` and `Γ ⊢ B ≤_g B'` derive `Γ ⊢ Fun(A, B) ≤ Fun(A', B')`.
pub fn derive_fun_subtyping(fs: &FunStructure, st1: &Judgement, st2: &Judgement) -> Result<Judgement> {
    let g = &fs.owner;
    g.check_judgement(st1)?;
    g.check_judgement(st2)?;
    let (
        &Judgement::Subtype { ctx, witness: f, sub: a1, sup: a },
        &Judgement::Subtype { ctx: c2, witness: h, sub: b, sup: b1 },
    ) = (st1, st2)
    else {
        return Err(Error::MismatchedJudgements("fun-sub expects two subtypings".into()));
    };
    if ctx != c2 {
        return Err(Error::MismatchedJudgements("premises live in different contexts".into()));
    }
    let alpha = fs
        .corner
        .reversed(&g.u, f)
        .ok_or_else(|| Error::MismatchedJudgements("first witness is not vertical".into()))?;
    let m = fs
        .corner
        .pairs
        .morphism(alpha, h)
        .ok_or_else(|| Error::MismatchedJudgements("premises do not form a corner arrow".into()))?;
    let w = fs.fun_arrow(m).ok_or_else(|| {
        Error::MismatchedJudgements(format!("Fun has no unique action on ({}, {})", g.types().name(f), g.types().name(h)))
    })?;
    let (sub, sup) = (
        fs.fun(a, b).ok_or_else(|| Error::MismatchedJudgements("Fun(A, B) undefined".into()))?,
        fs.fun(a1, b1).ok_or_else(|| Error::MismatchedJudgements("Fun(A', B') undefined".into()))?,
    );
    let out = Judgement::Subtype { ctx, witness: w, sub, sup };
    g.check_judgement(&out)?;
    Ok(out)
}

/// From `Γ.A ⊢ b :_f (uε_A)* B` derive `Γ ⊢ λ(A, b) :_{Fun(id_A, g)} Fun(A, B)`, where the
/// type of `b` is the weakening of some `B0` and `f` the weakening of `g: B0 -> B`.
pub fn derive_lam_typing(fs: &FunStructure, a: Obj, b: Obj, bt: &Judgement) -> Result<Judgement> {
    let g = &fs.owner;
    let (report, stage) = fs.stage_two();
    let Some(stage) = stage else {
        let why = report.failures().next().map(|e| format!("{} {}", e.id, e.detail)).unwrap_or_default();
        return Err(Error::StageTwoUnavailable(why));
    };
    g.check_judgement(bt)?;
    let &Judgement::CoercedTerm { ctx: ext, term, witness: f, ty } = bt else {
        return Err(Error::MismatchedJudgements("lam expects a coerced term".into()));
    };
    let gamma = g.u.over(a);
    if g.u.over(b) != gamma {
        return Err(Error::MismatchedJudgements("A and B live in different contexts".into()));
    }
    let (expected, proj) = g.context_extension(a)?;
    if ext != expected {
        return Err(Error::MismatchedJudgements("term does not live over the extension by A".into()));
    }
    let e = g.types();
    if g.u.reindex_object(b, proj)? != ty {
        return Err(Error::MismatchedJudgements("coerced type is not the weakening of B".into()));
    }
    let w = &stage.weakening;
    let sb = g.sigma.obj(term);
    // B0 with weakening Σb, and g: B0 -> B weakening to f
    let mut found = None;
    for b0 in g.u.objects_over(gamma) {
        let Some(o) = w.corner.pair(a, b0) else { continue };
        if w.second.obj(o) != sb {
            continue;
        }
        for v in g.u.vertical_hom(b0, b) {
            if g.u.reindex_vertical(v, proj)? == f {
                found = Some((o, b0, v));
                break;
            }
        }
        if found.is_some() {
            break;
        }
    }
    let (o, b0, v) = found.ok_or_else(|| {
        Error::MismatchedJudgements("the coercion is not the weakening of a subtyping in the base context".into())
    })?;
    let x = stage
        .domain
        .object(o, term)
        .ok_or_else(|| Error::MismatchedJudgements("term is outside the λ domain".into()))?;
    let lam = stage.lam.obj(x);
    let st = Judgement::Subtype { ctx: gamma, witness: e.id(a), sub: a, sup: a };
    let st2 = Judgement::Subtype { ctx: gamma, witness: v, sub: b0, sup: b };
    let Judgement::Subtype { witness, sup, .. } = derive_fun_subtyping(fs, &st, &st2)? else {
        unreachable!("fun-sub returns a subtyping")
    };
    let out = Judgement::CoercedTerm { ctx: gamma, term: lam, witness, ty: sup };
    g.check_judgement(&out)?;
    Ok(out)
}
