use std::sync::Arc;

use super::comma::{check_equal, mult, t_fib, t_fib_morphism, unit, CommaFibration};
use crate::error::{Error, Result};
use crate::fibration::Fibration;
use crate::fincat::{pullback_of_functors, FinCategory, FinFunctor, FunctorPullback, Mor, Obj};
use crate::gcwf::{check_gcwf, check_gcwf_morphism, enumerate_judgements, Filter, Gcwf, GcwfMorphism, Judgement, JudgementForm};
use crate::report::Report;

/// Default bound on the objects of an iterated construction.
pub const DEFAULT_MAX_OBJECTS: usize = 512;

/// `T G` together with the data it was assembled from.
#[derive(Debug, Clone)]
pub struct GcwfMonadData {
    pub source: Gcwf,
    /// `(u/u)`: subtypings `f: A' -> A`.
    pub types: CommaFibration,
    /// `(Σ/u)`: pairs `(a, g)` of a term and a vertical `g: Σa -> A`.
    pub terms: FunctorPullback,
    pub t_object: Gcwf,
    pub sigma_bar: FinFunctor,
    pub delta_bar: FinFunctor,
    /// `G -> T G`.
    pub unit: GcwfMorphism,
}

impl GcwfMonadData {
    /// The term object `(a, g)`.
    pub fn term(&self, a: Obj, g: Mor) -> Option<Obj> {
        self.terms.object(a, self.types.object(g)?)
    }

    /// `(a, g)` for a term object.
    pub fn term_parts(&self, x: Obj) -> (Obj, Mor) {
        let (a, o) = self.terms.objects[x.index()];
        (a, self.types.arrow(o))
    }

    /// `μ: T T G -> T G`; `tt` must be `t_gcwf` of this `T G`.
    pub fn mult(&self, tt: &GcwfMonadData) -> Result<GcwfMorphism> {
        if **tt.source.types() != **self.t_object.types() || **tt.source.terms() != **self.t_object.terms() {
            return Err(Error::MismatchedBase("second lift is not taken over the first".into()));
        }
        let h = mult(&self.types, &tt.types)?;
        let e = self.source.types();
        let ttd = &tt.terms.category;
        let objs: Vec<Obj> = tt
            .terms
            .objects
            .iter()
            .map(|&(x, s)| {
                let (a, g) = self.term_parts(x);
                let (_, bottom) = self.types.square(tt.types.arrow(s));
                self.term(a, e.comp(bottom, g)).expect("composite of vertical arrows is vertical")
            })
            .collect();
        let mors: Vec<Mor> = tt
            .terms
            .morphisms
            .iter()
            .enumerate()
            .map(|(i, &(tm, q))| {
                let i = Mor(i as u32);
                let (t, _) = self.terms.morphisms[tm.index()];
                let (_, qb) = tt.types.square(q);
                let (_, bottom) = self.types.square(qb);
                let (src, tgt) = (objs[ttd.dom(i).index()], objs[ttd.cod(i).index()]);
                let sq = self.types.square_between(
                    self.terms.objects[src.index()].1,
                    self.terms.objects[tgt.index()].1,
                    self.source.sigma.mor(t),
                    bottom,
                );
                sq.and_then(|sq| self.terms.morphism(t, sq))
                    .ok_or_else(|| Error::MalformedEntity("composite of a term cube does not commute".into()))
            })
            .collect::<Result<_>>()?;
        let hdot = FinFunctor::new(ttd.clone(), self.terms.category.clone(), objs, mors)?;
        Ok(GcwfMorphism { h, hdot })
    }
}

/// Lift of a gcwf along the comma construction: `Σ̄(a, g) = g`, `Δ̄` through the
/// vertical/cartesian factorization of `Δf`.
pub fn t_gcwf(g: &Gcwf) -> Result<GcwfMonadData> {
    let types = t_fib(&g.u)?;
    let (e, ed) = (g.types(), g.terms());
    let terms = pullback_of_functors(&g.sigma, &types.dom_projection())?;
    let tc = terms.category.clone();
    let over = terms.left.then(g.udot.functor())?;

    // chosen lifts: (lift a, square(Σ lift a, lift B)) at (a, g: Σa -> B)
    let unseeded = Fibration::new(over.clone());
    let mut lifts = Vec::new();
    for (i, &(a, o)) in terms.objects.iter().enumerate() {
        let gv = types.arrow(o);
        for &s in g.base().incoming(g.udot.over(a)) {
            let la = g.udot.cartesian_lift(a, s)?;
            let lb = g.u.cartesian_lift(e.cod(gv), s)?;
            let sla = g.sigma.mor(la);
            let Some(g2) = g.u.fill(lb, e.comp(gv, sla), s) else { continue };
            let (Some(src), Some(tgt)) = (types.object(g2), Some(o)) else { continue };
            let Some(sq) = types.square_between(src, tgt, sla, lb) else { continue };
            if let Some(m) = terms.morphism(la, sq) {
                if unseeded.is_cartesian(m) {
                    lifts.push((Obj(i as u32), s, m));
                }
            }
        }
    }
    let split = g.u.is_marked_split() && g.udot.is_marked_split();
    let term_fib = Fibration::with_cleavage(over, lifts, split)?;
    let sigma_bar = terms.right.clone();

    // Δ̄(f) = (ΔA', Σv) where Δf = c . v with v vertical and c cartesian
    let t = types.total().clone();
    let mut factors = Vec::with_capacity(t.object_count());
    let mut delta_obj = Vec::with_capacity(t.object_count());
    for o in t.objects() {
        let f = types.arrow(o);
        let (v, c) = g.udot.factorize(g.delta.mor(f))?;
        let x = terms
            .object(g.delta.obj(e.dom(f)), types.object(g.sigma.mor(v)).expect("Σ preserves vertical arrows"))
            .expect("Δ̄ lands in the term comma");
        factors.push((v, c));
        delta_obj.push(x);
    }
    let mut delta_mor = Vec::with_capacity(t.morphism_count());
    for m in t.morphisms() {
        let (x, y) = types.square(m);
        let (src, tgt) = (t.dom(m), t.cod(m));
        let (c1, c2) = (factors[src.index()].1, factors[tgt.index()].1);
        let dx = g.delta.mor(x);
        let w = g
            .udot
            .fill(c2, ed.comp(g.delta.mor(y), c1), g.udot.over_mor(dx))
            .ok_or_else(|| Error::MalformedEntity(format!("no Δ̄ of `{}`", t.name(m))))?;
        let (ds, dt) = (delta_obj[src.index()], delta_obj[tgt.index()]);
        let sq = types
            .square_between(terms.objects[ds.index()].1, terms.objects[dt.index()].1, g.sigma.mor(dx), g.sigma.mor(w))
            .ok_or_else(|| Error::MalformedEntity(format!("Δ̄ of `{}` does not commute", t.name(m))))?;
        delta_mor.push(terms.morphism(dx, sq).expect("components agree under Σ"));
    }
    let delta_bar = FinFunctor::new(t.clone(), tc.clone(), delta_obj.clone(), delta_mor)?;

    // ε̄_f = (ε_{A'}, ε_A . Σc)
    let eps: Vec<Mor> = t
        .objects()
        .map(|o| {
            let f = types.arrow(o);
            let c = factors[o.index()].1;
            let top = g.eps.at(e.dom(f));
            let bottom = e.comp(g.eps.at(e.cod(f)), g.sigma.mor(c));
            types
                .square_between(terms.objects[delta_obj[o.index()].index()].1, o, top, bottom)
                .ok_or_else(|| Error::MalformedEntity(format!("counit at `{}` does not commute", t.object_name(o))))
        })
        .collect::<Result<_>>()?;

    // η̄_x: the unique x -> Δ̄Σ̄x whose image under ε̄ . Σ̄ is the identity
    let eta: Vec<Mor> = tc
        .objects()
        .map(|x| {
            let o = sigma_bar.obj(x);
            let cands: Vec<Mor> = tc
                .hom(x, delta_obj[o.index()])
                .iter()
                .copied()
                .filter(|&m| t.compose(eps[o.index()], sigma_bar.mor(m)) == Some(t.id(o)))
                .collect();
            match cands[..] {
                [m] => Ok(m),
                _ => Err(Error::MalformedEntity(format!(
                    "{} unit candidates at `{}`",
                    cands.len(),
                    tc.object_name(x)
                ))),
            }
        })
        .collect::<Result<_>>()?;

    let t_object = Gcwf::new(types.fibration.clone(), term_fib, sigma_bar.clone(), delta_bar.clone(), eta, eps)?;

    let h = unit(&types);
    let objs: Vec<Obj> = ed
        .objects()
        .map(|a| terms.object(a, types.object(e.id(g.sigma.obj(a))).expect("identity")).expect("identity pair"))
        .collect();
    let mors: Vec<Mor> = ed
        .morphisms()
        .map(|m| {
            let (sa, sb) = (objs[ed.dom(m).index()], objs[ed.cod(m).index()]);
            let s = g.sigma.mor(m);
            let sq = types
                .square_between(terms.objects[sa.index()].1, terms.objects[sb.index()].1, s, s)
                .expect("identity squares commute");
            terms.morphism(m, sq).expect("identity pair")
        })
        .collect();
    let hdot = FinFunctor::new(ed.clone(), tc, objs, mors)?;
    Ok(GcwfMonadData { source: g.clone(), types, terms, t_object, sigma_bar, delta_bar, unit: GcwfMorphism { h, hdot } })
}

/// `T` on a gcwf morphism `m: G -> G'`, given `T G` and `T G'`.
pub fn t_gcwf_morphism(m: &GcwfMorphism, from: &GcwfMonadData, to: &GcwfMonadData) -> Result<GcwfMorphism> {
    let h = t_fib_morphism(&m.h, &from.types, &to.types)?;
    let fc = &from.terms.category;
    let objs: Vec<Obj> = from
        .terms
        .objects
        .iter()
        .map(|&(a, o)| {
            to.terms
                .object(m.hdot.obj(a), h.obj(o))
                .ok_or_else(|| Error::MalformedEntity("image of a term pair is not a term pair".into()))
        })
        .collect::<Result<_>>()?;
    let mors: Vec<Mor> = from
        .terms
        .morphisms
        .iter()
        .map(|&(t, sq)| {
            to.terms
                .morphism(m.hdot.mor(t), h.mor(sq))
                .ok_or_else(|| Error::MalformedEntity("image of a term square is not a term square".into()))
        })
        .collect::<Result<_>>()?;
    let hdot = FinFunctor::new(fc.clone(), to.terms.category.clone(), objs, mors)?;
    Ok(GcwfMorphism { h, hdot })
}

/// `check_gcwf` on `T G`, plus the universal property of `ε̄` by enumeration: every
/// `h: Σ̄x -> f` factors as `ε̄_f . Σ̄m` for exactly one `m: x -> Δ̄f`.
pub fn check_t_gcwf(d: &GcwfMonadData) -> Report {
    let mut r = Report::new("t-gcwf");
    r.absorb("gcwf", check_gcwf(&d.t_object));
    let (t, tc) = (d.t_object.types(), d.t_object.terms());
    let mark = r.entries.len();
    for x in tc.objects() {
        let sx = d.sigma_bar.obj(x);
        for f in t.objects() {
            let dbf = d.delta_bar.obj(f);
            let eps = d.t_object.eps.at(f);
            for &h in t.hom(sx, f) {
                let n = tc.hom(x, dbf).iter().filter(|&&m| t.compose(eps, d.sigma_bar.mor(m)) == Some(h)).count();
                if n != 1 {
                    r.fail("counit-universal", format!("`{}` has {n} mediators", t.name(h)));
                }
            }
        }
    }
    r.pass_unless_failed(mark, "counit-universal", "");
    r
}

/// Unit and multiplication are gcwf morphisms, and the unit and associativity laws hold
/// on both components.
pub fn check_monad_laws_gcwf(g: &Gcwf) -> Report {
    let mut r = Report::new("monad-laws-gcwf");
    let d1 = match t_gcwf(g) {
        Ok(d) => d,
        Err(e) => {
            r.fail("lift", e.to_string());
            return r;
        }
    };
    let lifted = t_gcwf(&d1.t_object).and_then(|d2| t_gcwf(&d2.t_object).map(|d3| (d2, d3)));
    let (d2, d3) = match lifted {
        Ok(x) => x,
        Err(e) => {
            r.fail("lift", e.to_string());
            return r;
        }
    };
    r.absorb("unit", check_gcwf_morphism(g, &d1.t_object, &d1.unit));
    let mu = match d1.mult(&d2) {
        Ok(m) => m,
        Err(e) => {
            r.fail("mult", e.to_string());
            return r;
        }
    };
    r.absorb("mult", check_gcwf_morphism(&d2.t_object, &d1.t_object, &mu));
    let compose = |a: Result<GcwfMorphism>, b: &GcwfMorphism| -> (Result<FinFunctor>, Result<FinFunctor>) {
        match a {
            Ok(a) => (a.h.then(&b.h), a.hdot.then(&b.hdot)),
            Err(e) => (Err(e.clone()), Err(e)),
        }
    };
    let id = GcwfMorphism::identity(&d1.t_object);
    let (lh, ld) = compose(t_gcwf_morphism(&d1.unit, &d1, &d2), &mu);
    check_equal(&mut r, "left-unit.h", lh, Ok(id.h.clone()));
    check_equal(&mut r, "left-unit.hdot", ld, Ok(id.hdot.clone()));
    let (rh, rd) = compose(Ok(d2.unit.clone()), &mu);
    check_equal(&mut r, "right-unit.h", rh, Ok(id.h));
    check_equal(&mut r, "right-unit.hdot", rd, Ok(id.hdot));
    let (ah, ad) = compose(t_gcwf_morphism(&mu, &d3, &d2), &mu);
    let (bh, bd) = compose(d2.mult(&d3), &mu);
    check_equal(&mut r, "associativity.h", ah, bh);
    check_equal(&mut r, "associativity.hdot", ad, bd);
    r
}

/// The object bound for `iterate`, from `SUBFIB_MAX_OBJECTS` when set.
pub fn max_objects() -> usize {
    std::env::var("SUBFIB_MAX_OBJECTS").ok().and_then(|v| v.parse().ok()).unwrap_or(DEFAULT_MAX_OBJECTS)
}

/// Objects of `T G` on types and terms, counted without building it.
pub fn lifted_size(g: &Gcwf) -> (usize, usize) {
    let e = g.types();
    let out = |a: Obj| e.outgoing(a).iter().filter(|&&m| g.u.is_vertical(m)).count();
    let types = e.objects().map(out).sum();
    let terms = g.terms().objects().map(|a| out(g.sigma.obj(a))).sum();
    (types, terms)
}

/// `n`-fold `T` with `n <= 2`, bounded by `max_objects()`.
pub fn iterate(g: &Gcwf, n: usize) -> Result<Gcwf> {
    iterate_bounded(g, n, max_objects())
}

pub fn iterate_bounded(g: &Gcwf, n: usize, bound: usize) -> Result<Gcwf> {
    if n > 2 {
        return Err(Error::TooLarge { what: "iteration depth".into(), size: n, limit: 2 });
    }
    let mut cur = g.clone();
    for _ in 0..n {
        let (types, terms) = lifted_size(&cur);
        let size = types.max(terms);
        if size > bound {
            return Err(Error::TooLarge { what: "iterated gcwf".into(), size, limit: bound });
        }
        cur = t_gcwf(&cur)?.t_object;
    }
    Ok(cur)
}

/// `Γ ⊢ A' <=_f A` read as the type `Γ ⊢ f type` of `T G`.
pub fn subtyping_as_type(d: &GcwfMonadData, j: &Judgement) -> Result<Judgement> {
    d.source.check_judgement(j)?;
    let &Judgement::Subtype { ctx, witness, .. } = j else {
        return Err(Error::MismatchedJudgements("expected a subtyping".into()));
    };
    let ty = d.types.object(witness).expect("witnesses are vertical");
    Ok(Judgement::Type { ctx, ty })
}

/// `Γ ⊢ a :<_g A` read as the term `Γ ⊢ (a, g) : g` of `T G`.
pub fn coercion_as_term(d: &GcwfMonadData, j: &Judgement) -> Result<Judgement> {
    d.source.check_judgement(j)?;
    let &Judgement::CoercedTerm { ctx, term, witness, .. } = j else {
        return Err(Error::MismatchedJudgements("expected a coerced term".into()));
    };
    let x = d.term(term, witness).expect("coercions are term pairs");
    Ok(Judgement::Term { ctx, term: x, ty: d.sigma_bar.obj(x) })
}

/// The two readings are bijections in every context.
pub fn check_judgement_correspondence(d: &GcwfMonadData) -> Report {
    let mut r = Report::new("judgements");
    let (g, tg) = (&d.source, &d.t_object);
    for (id, from, to, read) in [
        ("subtype-type", JudgementForm::Subtype, JudgementForm::Type, subtyping_as_type as fn(&GcwfMonadData, &Judgement) -> Result<Judgement>),
        ("coerced-term", JudgementForm::CoercedTerm, JudgementForm::Term, coercion_as_term),
    ] {
        let mark = r.entries.len();
        for ctx in g.base().objects() {
            let src = enumerate_judgements(g, from, ctx, Filter::default());
            let mut image: Vec<Judgement> = Vec::with_capacity(src.len());
            for j in &src {
                match read(d, j) {
                    Ok(k) if tg.check_judgement(&k).is_ok() => image.push(k),
                    _ => r.fail(id, format!("`{}` has no valid reading", g.render(j))),
                }
            }
            let mut target = enumerate_judgements(tg, to, ctx, Filter::default());
            let key = |j: &Judgement| format!("{j:?}");
            image.sort_by_key(key);
            target.sort_by_key(key);
            if image.len() != src.len() || image != target {
                r.fail(
                    id,
                    format!("context `{}`: {} judgements read onto {} of {}", g.context_name(ctx), src.len(), image.len(), target.len()),
                );
            }
        }
        r.pass_unless_failed(mark, id, "");
    }
    r
}

/// Total category sizes of the types and terms of a gcwf.
pub fn sizes(g: &Gcwf) -> [(usize, usize); 2] {
    let f = |c: &Arc<FinCategory>| (c.object_count(), c.morphism_count());
    [f(g.types()), f(g.terms())]
}
