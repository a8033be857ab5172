use std::sync::Arc;

use super::finset::{finset_skeleton, MAX_FINSET};
use crate::error::{Error, Result};
use crate::fibration::Fibration;
use crate::fincat::{pullback, FinFunctor, Mor, Obj, PullbackResult, SliceCategory};
use crate::gcwf::Gcwf;

/// Predicates `φ: A -> Ω` over finite sets, with comprehension by pullback along `⊤`.
#[derive(Debug, Clone)]
pub struct Subobject {
    pub gcwf: Gcwf,
    pub slice: SliceCategory,
    /// The two-element object.
    pub omega: Obj,
    /// `⊤: 1 -> Ω`.
    pub top: Mor,
    /// `pullback(φ, ⊤)` for each predicate; its left leg is the inclusion `i_φ`.
    pub comprehensions: Vec<PullbackResult>,
}

/// Subobject gcwf over the finite sets up to `max(n, 2)` elements.
pub fn subobject_gcwf(n: usize) -> Result<Subobject> {
    if n > MAX_FINSET {
        return Err(Error::TooLarge { what: "subobject model".into(), size: n, limit: MAX_FINSET });
    }
    let c = Arc::new(finset_skeleton(n.max(2))?);
    let one = c.object("1")?;
    let omega = c.object("2")?;
    let top = c.morphism("1>2:1")?;
    let bang = |x: Obj| c.hom(x, one)[0];
    let slice = SliceCategory::new(c.clone(), omega);
    let u = Fibration::new(slice.dom_functor());
    let udot = Fibration::new(FinFunctor::identity(c.clone()));

    // Σ_⊤ X = ⊤ . !_X
    let sigma_obj: Vec<Obj> = c.objects().map(|x| slice.object(c.comp(top, bang(x))).expect("predicate")).collect();
    let sigma_mor: Vec<Mor> = c
        .morphisms()
        .map(|h| {
            slice
                .triangle_between(sigma_obj[c.dom(h).index()], sigma_obj[c.cod(h).index()], h)
                .expect("constant predicates are preserved")
        })
        .collect();
    let sigma = FinFunctor::new(c.clone(), slice.category.clone(), sigma_obj.clone(), sigma_mor)?;

    // Δ_⊤ φ = dom of the pullback of ⊤ along φ
    let comprehensions: Vec<PullbackResult> =
        slice.arrow.iter().map(|&phi| pullback(&c, phi, top)).collect::<Result<_>>()?;
    let e = &slice.category;
    let delta_obj: Vec<Obj> = comprehensions.iter().map(|pb| pb.apex).collect();
    let mut delta_mor = Vec::with_capacity(e.morphism_count());
    for m in e.morphisms() {
        let (src, tgt) = (e.dom(m), e.cod(m));
        let x = slice.triangle[m.index()];
        let (lo, hi) = (&comprehensions[src.index()], &comprehensions[tgt.index()]);
        delta_mor.push(hi.mediator(c.comp(x, lo.left), lo.right).expect("comprehension is functorial"));
    }
    let delta = FinFunctor::new(e.clone(), c.clone(), delta_obj, delta_mor)?;

    // ε_φ = i_φ as a triangle ⊤! => φ
    let eps: Vec<Mor> = comprehensions
        .iter()
        .enumerate()
        .map(|(i, pb)| {
            slice
                .triangle_between(sigma_obj[pb.apex.index()], Obj(i as u32), pb.left)
                .expect("inclusion triangle commutes")
        })
        .collect();
    // η_X = <id, !>: X -> Δ_⊤ Σ_⊤ X
    let eta: Vec<Mor> = c
        .objects()
        .map(|x| {
            let pb = &comprehensions[sigma_obj[x.index()].index()];
            pb.mediator(c.id(x), bang(x)).expect("unit cone")
        })
        .collect();
    let gcwf = Gcwf::new(u, udot, sigma, delta, eta, eps)?;
    Ok(Subobject { gcwf, slice, omega, top, comprehensions })
}
