use std::sync::Arc;

use super::{check_fibration_morphism, Fibration};
use crate::error::{Error, Result};
use crate::fincat::{pullback_of_functors, FinCategory, FinFunctor, FunctorPullback, Mor, Obj};
use crate::report::Report;

/// The cospan along which a fibred product is taken.
pub enum Along<'a> {
    /// The two projections to the shared base.
    Base,
    /// Two fibration morphisms into a common fibration over the same base.
    Functors { left: &'a FinFunctor, right: &'a FinFunctor, common: &'a Fibration },
}

/// Pullback of two total categories, fibred over the common base.
#[derive(Debug, Clone)]
pub struct FibredProduct {
    pub fibration: Fibration,
    pub pullback: FunctorPullback,
}

impl FibredProduct {
    pub fn total(&self) -> &Arc<FinCategory> {
        self.fibration.total()
    }

    pub fn left(&self) -> &FinFunctor {
        &self.pullback.left
    }

    pub fn right(&self) -> &FinFunctor {
        &self.pullback.right
    }

    pub fn objects(&self) -> &[(Obj, Obj)] {
        &self.pullback.objects
    }

    pub fn morphisms(&self) -> &[(Mor, Mor)] {
        &self.pullback.morphisms
    }

    pub fn object(&self, x: Obj, y: Obj) -> Option<Obj> {
        self.pullback.object(x, y)
    }

    pub fn morphism(&self, a: Mor, b: Mor) -> Option<Mor> {
        self.pullback.morphism(a, b)
    }

    /// Both projections are fibration morphisms.
    pub fn check_projections(&self, f: &Fibration, g: &Fibration) -> Report {
        let mut r = Report::new("fibred-product");
        r.absorb("left", check_fibration_morphism(self.left(), &self.fibration, f));
        r.absorb("right", check_fibration_morphism(self.right(), &self.fibration, g));
        r
    }
}

pub fn fibred_product(f: &Fibration, g: &Fibration, along: Along<'_>) -> Result<FibredProduct> {
    if **f.base() != **g.base() {
        return Err(Error::MismatchedBase("fibred product of fibrations over different bases".into()));
    }
    let pb = match along {
        Along::Base => pullback_of_functors(f.functor(), g.functor())?,
        Along::Functors { left, right, common } => {
            if **left.source() != **f.total() || **right.source() != **g.total() {
                return Err(Error::MismatchedBase("cospan does not start at the two total categories".into()));
            }
            if **left.target() != **common.total() || **right.target() != **common.total() {
                return Err(Error::MismatchedBase("cospan legs do not share a target".into()));
            }
            if **common.base() != **f.base() {
                return Err(Error::MismatchedBase("common fibration lives over another base".into()));
            }
            let lp = left.then(common.functor())?;
            let rp = right.then(common.functor())?;
            if lp.morphism_map() != f.functor().morphism_map() || rp.morphism_map() != g.functor().morphism_map() {
                return Err(Error::MismatchedBase("cospan does not commute with the projections to the base".into()));
            }
            pullback_of_functors(left, right)?
        }
    };
    let p = pb.left.then(f.functor())?;
    let unseeded = Fibration::new(p.clone());
    // Pairs of chosen lifts are used as the cleavage wherever they land in the product.
    let mut seeds = Vec::new();
    for (i, &(x, y)) in pb.objects.iter().enumerate() {
        for &s in f.base().incoming(f.over(x)) {
            let (Ok(lx), Ok(ly)) = (f.cartesian_lift(x, s), g.cartesian_lift(y, s)) else { continue };
            if let Some(m) = pb.morphism(lx, ly) {
                if unseeded.is_cartesian(m) {
                    seeds.push((Obj(i as u32), s, m));
                }
            }
        }
    }
    let fibration = Fibration::with_cleavage(p, seeds, false)?;
    Ok(FibredProduct { fibration, pullback: pb })
}
