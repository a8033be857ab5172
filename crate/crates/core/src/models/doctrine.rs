use crate::error::{Error, Result};
use crate::fibration::Fibration;
use crate::monad::t_fib;
use crate::fincat::{ArrowCategory, FinFunctor, Mor, Obj};
use crate::gcwf::Gcwf;

/// The gcwf `(p, e, Cod ⊣ Diag)` whose terms are vertical arrows of a faithful fibration.
#[derive(Debug, Clone)]
pub struct Doctrine {
    pub gcwf: Gcwf,
    /// Vertical arrows of `p` and all commuting squares between them.
    pub entailments: ArrowCategory,
}

impl Doctrine {
    /// The term witnessing `ψ ≤ φ`, if the entailment holds.
    pub fn entailment(&self, psi: Obj, phi: Obj) -> Option<Obj> {
        let e = self.gcwf.types();
        e.hom(psi, phi).iter().find_map(|&m| self.entailments.object(m))
    }
}

pub fn doctrine_gcwf(p: &Fibration) -> Result<Doctrine> {
    let k = p.classify();
    if !k.faithful {
        return Err(Error::NotFaithful("a fiber has parallel vertical arrows".into()));
    }
    if !k.is_fibration {
        return Err(Error::NotAFibration("the type functor has a missing lift".into()));
    }
    let e = p.total().clone();
    let comma = t_fib(p)?;
    let arr = comma.arrows.clone();
    let ed = arr.category.clone();
    let cod = arr.cod_functor();
    let udot = comma.fibration;
    let u = p.clone();

    let delta_obj: Vec<Obj> = e.objects().map(|a| arr.object(e.id(a)).expect("identities are vertical")).collect();
    let delta_mor: Vec<Mor> = e
        .morphisms()
        .map(|h| {
            arr.square_between(delta_obj[e.dom(h).index()], delta_obj[e.cod(h).index()], h, h)
                .expect("identity squares commute")
        })
        .collect();
    let delta = FinFunctor::new(e.clone(), ed.clone(), delta_obj.clone(), delta_mor)?;
    // η_f = (f, id): f => id_{cod f};  ε = identity
    let eta: Vec<Mor> = ed
        .objects()
        .map(|a| {
            let f = arr.arrow[a.index()];
            let b = e.cod(f);
            arr.square_between(a, delta_obj[b.index()], f, e.id(b)).expect("unit square commutes")
        })
        .collect();
    let eps: Vec<Mor> = e.objects().map(|a| e.id(a)).collect();
    let gcwf = Gcwf::new(u, udot, cod, delta, eta, eps)?;
    Ok(Doctrine { gcwf, entailments: arr })
}
