use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fibration::{check_fibration_morphism, Fibration};
use crate::fincat::{ArrowCategory, FinCategory, FinFunctor, Mor, Obj};
use crate::report::Report;

/// `(p/p)`: vertical arrows of `p` and commuting squares between them, fibred by the
/// codomain.
#[derive(Debug, Clone)]
pub struct CommaFibration {
    pub fibration: Fibration,
    pub arrows: ArrowCategory,
    pub source: Fibration,
}

impl CommaFibration {
    pub fn total(&self) -> &Arc<FinCategory> {
        self.fibration.total()
    }

    /// The object for a vertical arrow of the source.
    pub fn object(&self, f: Mor) -> Option<Obj> {
        self.arrows.object(f)
    }

    pub fn arrow(&self, o: Obj) -> Mor {
        self.arrows.arrow[o.index()]
    }

    /// `(top, bottom)` of a morphism.
    pub fn square(&self, m: Mor) -> (Mor, Mor) {
        self.arrows.square[m.index()]
    }

    pub fn square_between(&self, src: Obj, tgt: Obj, top: Mor, bottom: Mor) -> Option<Mor> {
        self.arrows.square_between(src, tgt, top, bottom)
    }

    pub fn dom_projection(&self) -> FinFunctor {
        self.arrows.dom_functor()
    }

    pub fn cod_projection(&self) -> FinFunctor {
        self.arrows.cod_functor()
    }

    /// Both projections are fibration morphisms into the source.
    pub fn check_projections(&self) -> Report {
        let mut r = Report::new("comma-projections");
        r.absorb("dom", check_fibration_morphism(&self.dom_projection(), &self.fibration, &self.source));
        r.absorb("cod", check_fibration_morphism(&self.cod_projection(), &self.fibration, &self.source));
        r
    }
}

/// The comma fibration of `p`; chosen lifts are squares of chosen lifts of `p`.
pub fn t_fib(p: &Fibration) -> Result<CommaFibration> {
    if let Err(e) = p.complete_cleavage() {
        return Err(Error::NotAFibration(e.to_string()));
    }
    let e = p.total().clone();
    let arrows = ArrowCategory::new(e.clone(), |m| p.is_vertical(m));
    let over = arrows.cod_functor().then(p.functor())?;
    let mut lifts = Vec::new();
    for a in arrows.category.objects() {
        let f = arrows.arrow[a.index()];
        for &s in p.base().incoming(p.over(e.cod(f))) {
            let top = p.cartesian_lift(e.dom(f), s)?;
            let bottom = p.cartesian_lift(e.cod(f), s)?;
            let pulled = p.reindex_vertical(f, s)?;
            let src = arrows.object(pulled).expect("reindexed arrow is vertical");
            if let Some(sq) = arrows.square_between(src, a, top, bottom) {
                lifts.push((a, s, sq));
            }
        }
    }
    let fibration = Fibration::with_cleavage(over, lifts, p.is_marked_split())?;
    Ok(CommaFibration { fibration, arrows, source: p.clone() })
}

/// `T` on a fibration morphism `h`: apply `h` to both legs of every square.
pub fn t_fib_morphism(h: &FinFunctor, from: &CommaFibration, to: &CommaFibration) -> Result<FinFunctor> {
    if **h.source() != **from.source.total() || **h.target() != **to.source.total() {
        return Err(Error::MismatchedBase("morphism does not run between the two sources".into()));
    }
    let objs: Vec<Obj> = from
        .total()
        .objects()
        .map(|o| {
            to.object(h.mor(from.arrow(o)))
                .ok_or_else(|| Error::MalformedEntity("morphism does not preserve vertical arrows".into()))
        })
        .collect::<Result<_>>()?;
    let c = from.total();
    let mors: Vec<Mor> = c
        .morphisms()
        .map(|m| {
            let (x, y) = from.square(m);
            to.square_between(objs[c.dom(m).index()], objs[c.cod(m).index()], h.mor(x), h.mor(y))
                .ok_or_else(|| Error::MalformedEntity("image of a square does not commute".into()))
        })
        .collect::<Result<_>>()?;
    FinFunctor::new(from.total().clone(), to.total().clone(), objs, mors)
}

/// `η_p: A ↦ id_A`.
pub fn unit(tp: &CommaFibration) -> FinFunctor {
    let e = tp.source.total();
    let objs: Vec<Obj> = e.objects().map(|a| tp.object(e.id(a)).expect("identities are vertical")).collect();
    let mors = e
        .morphisms()
        .map(|m| {
            tp.square_between(objs[e.dom(m).index()], objs[e.cod(m).index()], m, m)
                .expect("identity squares commute")
        })
        .collect();
    FinFunctor::new(e.clone(), tp.total().clone(), objs, mors).expect("unit is well typed")
}

/// `μ_p: T T p -> T p`, composing a vertical square into its diagonal.
pub fn mult(tp: &CommaFibration, ttp: &CommaFibration) -> Result<FinFunctor> {
    if **ttp.source.total() != **tp.total() {
        return Err(Error::MismatchedBase("second comma is not taken over the first".into()));
    }
    let (e, t) = (tp.source.total(), tp.total());
    let objs: Vec<Obj> = ttp
        .total()
        .objects()
        .map(|s| {
            let sq = ttp.arrow(s);
            let f = tp.arrow(t.dom(sq));
            let (_, y) = tp.square(sq);
            tp.object(e.comp(y, f)).expect("composite of vertical arrows is vertical")
        })
        .collect();
    let tt = ttp.total();
    let mors = tt
        .morphisms()
        .map(|m| {
            let (p, q) = ttp.square(m);
            let (top, _) = tp.square(p);
            let (_, bottom) = tp.square(q);
            tp.square_between(objs[tt.dom(m).index()], objs[tt.cod(m).index()], top, bottom)
                .ok_or_else(|| Error::MalformedEntity("diagonal of a cube does not commute".into()))
        })
        .collect::<Result<_>>()?;
    FinFunctor::new(tt.clone(), t.clone(), objs, mors)
}

/// Where two functors with the same source and target differ, if anywhere.
pub(crate) fn difference(f: &FinFunctor, g: &FinFunctor) -> Option<String> {
    let c = f.source();
    if let Some(o) = c.objects().find(|&o| f.obj(o) != g.obj(o)) {
        return Some(format!("object `{}`", c.object_name(o)));
    }
    c.morphisms().find(|&m| f.mor(m) != g.mor(m)).map(|m| format!("morphism `{}`", c.name(m)))
}

pub(crate) fn check_equal(r: &mut Report, id: &str, lhs: Result<FinFunctor>, rhs: Result<FinFunctor>) {
    match (lhs, rhs) {
        (Ok(a), Ok(b)) => match difference(&a, &b) {
            None => r.pass(id, ""),
            Some(d) => r.fail(id, format!("sides differ at {d}")),
        },
        (Err(e), _) | (_, Err(e)) => r.fail(id, e.to_string()),
    }
}

/// Unit, multiplication, unit laws, and associativity of `T` at `p`, by evaluation.
pub fn check_monad_laws_fib(p: &Fibration) -> Report {
    let mut r = Report::new("monad-laws-fib");
    let t1 = match t_fib(p) {
        Ok(t) => t,
        Err(e) => {
            r.fail("comma", e.to_string());
            return r;
        }
    };
    let (t2, t3) = match t_fib(&t1.fibration).and_then(|t2| t_fib(&t2.fibration).map(|t3| (t2, t3))) {
        Ok(x) => x,
        Err(e) => {
            r.fail("comma", e.to_string());
            return r;
        }
    };
    r.absorb("projections", t1.check_projections());
    let eta = unit(&t1);
    r.absorb("unit", check_fibration_morphism(&eta, p, &t1.fibration));
    let mu = match mult(&t1, &t2) {
        Ok(m) => m,
        Err(e) => {
            r.fail("mult", e.to_string());
            return r;
        }
    };
    r.absorb("mult", check_fibration_morphism(&mu, &t2.fibration, &t1.fibration));
    let id = Ok(FinFunctor::identity(t1.total().clone()));
    check_equal(&mut r, "left-unit", t_fib_morphism(&eta, &t1, &t2).and_then(|te| te.then(&mu)), id.clone());
    check_equal(&mut r, "right-unit", unit(&t2).then(&mu), id);
    let lhs = t_fib_morphism(&mu, &t3, &t2).and_then(|tm| tm.then(&mu));
    let rhs = mult(&t2, &t3).and_then(|mt| mt.then(&mu));
    check_equal(&mut r, "associativity", lhs, rhs);
    r
}
