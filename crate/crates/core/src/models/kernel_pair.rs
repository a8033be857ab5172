use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fibration::Fibration;
use crate::fincat::{pullback, ArrowCategory, FinCategory, FinFunctor, Mor, Obj, PullbackResult, SectionsCategory};
use crate::gcwf::Gcwf;

/// Which arrows of `C` are admitted as types. The class must be closed under pullback.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArrowClass {
    All,
    Monos,
}

/// The gcwf `(cod, cod . U, U ⊣ K)` together with the data it was assembled from.
#[derive(Debug, Clone)]
pub struct KernelPair {
    pub gcwf: Gcwf,
    pub arrows: ArrowCategory,
    pub sections: SectionsCategory,
    /// `pullback(f, f)` for the arrow of each type.
    pub kernels: Vec<PullbackResult>,
}

impl KernelPair {
    /// The diagonal `d(f): dom f -> K_f`.
    pub fn diagonal(&self, ty: Obj) -> Mor {
        let c = &self.arrows.base;
        let f = self.arrows.arrow[ty.index()];
        let b = c.id(c.dom(f));
        self.kernels[ty.index()].mediator(b, b).expect("diagonal cone")
    }
}

/// Kernel-pair gcwf over all arrows of `c`. Every cospan must have a pullback.
pub fn kernel_pair_gcwf(c: Arc<FinCategory>) -> Result<KernelPair> {
    kernel_pair_gcwf_in(c, ArrowClass::All)
}

/// Kernel-pair gcwf over a pullback-closed class of arrows.
pub fn kernel_pair_gcwf_in(c: Arc<FinCategory>, class: ArrowClass) -> Result<KernelPair> {
    let admitted: Vec<bool> = c
        .morphisms()
        .map(|m| match class {
            ArrowClass::All => true,
            ArrowClass::Monos => c.is_monic(m),
        })
        .collect();
    // u must be a fibration: admitted arrows pull back along everything.
    for f in c.morphisms().filter(|m| admitted[m.index()]) {
        for &s in c.incoming(c.cod(f)) {
            let pb = pullback(&c, f, s)?;
            if !admitted[pb.right.index()] {
                return Err(Error::MalformedEntity(format!(
                    "pullback of `{}` along `{}` leaves the arrow class",
                    c.name(f),
                    c.name(s)
                )));
            }
        }
    }
    let arrows = ArrowCategory::new(c.clone(), |m| admitted[m.index()]);
    let sections = SectionsCategory::new(c.clone(), |m| admitted[m.index()]);
    let u = Fibration::new(arrows.cod_functor());
    let udot = Fibration::new(sections.cod_functor());
    let sigma = sections.forget_section(&arrows)?;

    let kernels: Vec<PullbackResult> =
        arrows.arrow.iter().map(|&f| pullback(&c, f, f)).collect::<Result<_>>()?;
    let mut delta_obj = Vec::with_capacity(kernels.len());
    for (i, pb) in kernels.iter().enumerate() {
        let f = arrows.arrow[i];
        let b = c.id(c.dom(f));
        let d = pb.mediator(b, b).expect("diagonal cone");
        delta_obj.push(sections.object(d, pb.left).ok_or_else(|| {
            Error::MalformedEntity(format!("kernel projection of `{}` is outside the arrow class", c.name(f)))
        })?);
    }
    let e = &arrows.category;
    let mut delta_mor = Vec::with_capacity(e.morphism_count());
    for m in e.morphisms() {
        let (src, tgt) = (e.dom(m), e.cod(m));
        let (x, _) = arrows.square[m.index()];
        let (lo, hi) = (&kernels[src.index()], &kernels[tgt.index()]);
        let k = hi
            .mediator(c.comp(x, lo.left), c.comp(x, lo.right))
            .expect("kernel pairs are functorial");
        delta_mor.push(
            sections
                .square_between(delta_obj[src.index()], delta_obj[tgt.index()], k, x)
                .ok_or_else(|| Error::MalformedEntity("K does not send a square to a section square".into()))?,
        );
    }
    let delta = FinFunctor::new(e.clone(), sections.category.clone(), delta_obj.clone(), delta_mor)?;

    // ε_f = (p2, f): p1 => f
    let mut eps = Vec::with_capacity(e.object_count());
    for (i, pb) in kernels.iter().enumerate() {
        let f = arrows.arrow[i];
        let p1 = arrows.object(pb.left).expect("p1 admitted");
        eps.push(arrows.square_between(p1, Obj(i as u32), pb.right, f).expect("kernel square commutes"));
    }
    // η_(s,f) = (<s.f, id>, s): (s; f) => (d(f); p1)
    let mut eta = Vec::with_capacity(sections.pair.len());
    for (i, &(s, f)) in sections.pair.iter().enumerate() {
        let ty = arrows.object(f).expect("section arrow admitted");
        let pb = &kernels[ty.index()];
        let x = pb.mediator(c.comp(s, f), c.id(c.dom(f))).expect("unit cone");
        eta.push(
            sections
                .square_between(Obj(i as u32), delta_obj[ty.index()], x, s)
                .ok_or_else(|| Error::MalformedEntity("unit square is not a section square".into()))?,
        );
    }
    let gcwf = Gcwf::new(u, udot, sigma, delta, eta, eps)?;
    Ok(KernelPair { gcwf, arrows, sections, kernels })
}
