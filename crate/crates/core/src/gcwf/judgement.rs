use super::Gcwf;
use crate::error::{Error, Result};
use crate::fincat::{Mor, Obj};

/// The four judgement forms of a gcwf.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Judgement {
    /// `Γ ⊢ A type`
    Type { ctx: Obj, ty: Obj },
    /// `Γ ⊢ a : A`
    Term { ctx: Obj, term: Obj, ty: Obj },
    /// `Γ ⊢ A' ≤_f A`
    Subtype { ctx: Obj, witness: Mor, sub: Obj, sup: Obj },
    /// `Γ ⊢ a :_g A`
    CoercedTerm { ctx: Obj, term: Obj, witness: Mor, ty: Obj },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JudgementForm {
    Type,
    Term,
    Subtype,
    CoercedTerm,
}

/// Optional constraints for [`enumerate_judgements`]. `ty` fixes the type (the supertype
/// for subtyping), `sub` the subtype, `term` the term.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Filter {
    pub ty: Option<Obj>,
    pub sub: Option<Obj>,
    pub term: Option<Obj>,
}

impl Judgement {
    pub fn ctx(&self) -> Obj {
        match *self {
            Judgement::Type { ctx, .. }
            | Judgement::Term { ctx, .. }
            | Judgement::Subtype { ctx, .. }
            | Judgement::CoercedTerm { ctx, .. } => ctx,
        }
    }

    pub fn form(&self) -> JudgementForm {
        match self {
            Judgement::Type { .. } => JudgementForm::Type,
            Judgement::Term { .. } => JudgementForm::Term,
            Judgement::Subtype { .. } => JudgementForm::Subtype,
            Judgement::CoercedTerm { .. } => JudgementForm::CoercedTerm,
        }
    }

    pub fn witness(&self) -> Option<Mor> {
        match *self {
            Judgement::Subtype { witness, .. } | Judgement::CoercedTerm { witness, .. } => Some(witness),
            _ => None,
        }
    }
}

impl Gcwf {
    /// Checks the defining conditions of a judgement.
    pub fn check_judgement(&self, j: &Judgement) -> Result<()> {
        let (e, ed, b) = (self.types(), self.terms(), self.base());
        let bad = |why: &str| Err(Error::MismatchedJudgements(why.to_string()));
        if j.ctx().index() >= b.object_count() {
            return bad("context is not a base object");
        }
        match *j {
            Judgement::Type { ctx, ty } => {
                if ty.index() >= e.object_count() || self.u.over(ty) != ctx {
                    return bad("type does not live over its context");
                }
            }
            Judgement::Term { ctx, term, ty } => {
                if term.index() >= ed.object_count() || self.udot.over(term) != ctx {
                    return bad("term does not live over its context");
                }
                if self.sigma.obj(term) != ty {
                    return bad("term does not have the stated type");
                }
            }
            Judgement::Subtype { ctx, witness, sub, sup } => {
                if witness.index() >= e.morphism_count() {
                    return bad("witness is not a type morphism");
                }
                if e.dom(witness) != sub || e.cod(witness) != sup {
                    return bad("witness does not run between the stated types");
                }
                if self.u.over_mor(witness) != b.id(ctx) {
                    return bad("witness is not vertical over the context");
                }
            }
            Judgement::CoercedTerm { ctx, term, witness, ty } => {
                if term.index() >= ed.object_count() || self.udot.over(term) != ctx {
                    return bad("term does not live over its context");
                }
                if witness.index() >= e.morphism_count() {
                    return bad("witness is not a type morphism");
                }
                if e.dom(witness) != self.sigma.obj(term) || e.cod(witness) != ty {
                    return bad("witness does not run from the term's type");
                }
                if self.u.over_mor(witness) != b.id(ctx) {
                    return bad("witness is not vertical over the context");
                }
            }
        }
        Ok(())
    }

    /// One-line transcript form: `CTX |- ... [witness=...]`.
    pub fn render(&self, j: &Judgement) -> String {
        let (e, ed, b) = (self.types(), self.terms(), self.base());
        match *j {
            Judgement::Type { ctx, ty } => format!("{} |- {} type", b.object_name(ctx), e.object_name(ty)),
            Judgement::Term { ctx, term, ty } => {
                format!("{} |- {} : {}", b.object_name(ctx), ed.object_name(term), e.object_name(ty))
            }
            Judgement::Subtype { ctx, witness, sub, sup } => format!(
                "{} |- {} <= {} [witness={}]",
                b.object_name(ctx),
                e.object_name(sub),
                e.object_name(sup),
                e.name(witness)
            ),
            Judgement::CoercedTerm { ctx, term, witness, ty } => format!(
                "{} |- {} :< {} [witness={}]",
                b.object_name(ctx),
                ed.object_name(term),
                e.object_name(ty),
                e.name(witness)
            ),
        }
    }
}

/// Every judgement of `form` in context `ctx` matching `filter`, in identifier order.
pub fn enumerate_judgements(g: &Gcwf, form: JudgementForm, ctx: Obj, filter: Filter) -> Vec<Judgement> {
    let keep = |want: Option<Obj>, x: Obj| want.is_none_or(|w| w == x);
    let types = g.u.objects_over(ctx);
    let terms = g.udot.objects_over(ctx);
    let mut out = Vec::new();
    match form {
        JudgementForm::Type => {
            for ty in types.into_iter().filter(|&t| keep(filter.ty, t)) {
                out.push(Judgement::Type { ctx, ty });
            }
        }
        JudgementForm::Term => {
            for term in terms.into_iter().filter(|&a| keep(filter.term, a)) {
                let ty = g.sigma.obj(term);
                if keep(filter.ty, ty) {
                    out.push(Judgement::Term { ctx, term, ty });
                }
            }
        }
        JudgementForm::Subtype => {
            for &sub in types.iter().filter(|&&t| keep(filter.sub, t)) {
                for &sup in types.iter().filter(|&&t| keep(filter.ty, t)) {
                    for witness in g.u.vertical_hom(sub, sup) {
                        out.push(Judgement::Subtype { ctx, witness, sub, sup });
                    }
                }
            }
        }
        JudgementForm::CoercedTerm => {
            for term in terms.into_iter().filter(|&a| keep(filter.term, a)) {
                let sa = g.sigma.obj(term);
                for &ty in types.iter().filter(|&&t| keep(filter.ty, t)) {
                    for witness in g.u.vertical_hom(sa, ty) {
                        out.push(Judgement::CoercedTerm { ctx, term, witness, ty });
                    }
                }
            }
        }
    }
    out
}
