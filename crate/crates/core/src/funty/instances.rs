use super::FunStructure;
use crate::error::{Error, Result};
use crate::fibration::Fiber;
use crate::fincat::Obj;
use crate::models::{function_values, Doctrine, HeytingFiberSpec, Subobject};

/// Pointwise implication of predicates; `λ` sends a term of the weakened `ψ` to the context.
pub fn subobject_fun_structure(s: &Subobject) -> Result<FunStructure> {
    let g = &s.gcwf;
    let c = g.base();
    let truth = |phi: Obj| -> Vec<bool> {
        function_values(c, s.slice.arrow[phi.index()]).into_iter().map(|v| v == 1).collect()
    };
    let fun = |phi: Obj, psi: Obj| {
        let want: Vec<bool> = truth(phi).into_iter().zip(truth(psi)).map(|(p, q)| !p || q).collect();
        let a = g.u.over(phi);
        g.u.objects_over(a).into_iter().find(|&x| truth(x) == want)
    };
    FunStructure::from_rules(g, fun, |phi, _, _| Some(g.u.over(phi)))
}

/// Fiberwise Heyting implication on the types of a doctrine; `λ` weakens an entailment
/// `ψ ≤ B` to `ψ ≤ A ⇒ B`.
pub fn heyting_fun_structure(d: &Doctrine, spec: &HeytingFiberSpec) -> Result<FunStructure> {
    let g = &d.gcwf;
    let fibers = fibers_of(d, spec)?;
    let fun = |a: Obj, b: Obj| {
        let (gamma, i, j) = positions(&fibers, g.u.over(a), a, b)?;
        Some(fibers[gamma].objects[spec.fibers[gamma].imp[i][j]])
    };
    let lam = |a: Obj, b: Obj, t: Obj| {
        let arrow = d.entailments.arrow[t.index()];
        d.entailment(g.types().dom(arrow), fun(a, b)?)
    };
    FunStructure::from_rules(g, fun, lam)
}

/// `(A, B) ↦ A ∧ B`, covariant in `A`; it cannot act on the reversed arrows of the corner.
pub fn covariant_meet_structure(d: &Doctrine, spec: &HeytingFiberSpec) -> Result<FunStructure> {
    let g = &d.gcwf;
    let fibers = fibers_of(d, spec)?;
    let fun = |a: Obj, b: Obj| {
        let (gamma, i, j) = positions(&fibers, g.u.over(a), a, b)?;
        Some(fibers[gamma].objects[spec.fibers[gamma].meet[i][j]])
    };
    FunStructure::from_rules(g, fun, |_, _, _| None)
}

fn fibers_of(d: &Doctrine, spec: &HeytingFiberSpec) -> Result<Vec<Fiber>> {
    let u = &d.gcwf.u;
    if **u.base() != *spec.base {
        return Err(Error::MismatchedBase("Heyting tables live over another base".into()));
    }
    let fibers: Vec<Fiber> = u.base().objects().map(|x| u.fiber(x)).collect::<Result<_>>()?;
    for (f, h) in fibers.iter().zip(&spec.fibers) {
        if f.objects.len() != h.len() {
            return Err(Error::MismatchedBase("fiber sizes differ from the Heyting tables".into()));
        }
    }
    Ok(fibers)
}

fn positions(fibers: &[Fiber], gamma: Obj, a: Obj, b: Obj) -> Option<(usize, usize, usize)> {
    let f = &fibers[gamma.index()];
    Some((gamma.index(), f.object_position(a)?.index(), f.object_position(b)?.index()))
}
