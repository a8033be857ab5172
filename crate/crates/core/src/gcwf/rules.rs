use super::{Gcwf, Judgement};
use crate::error::{Error, Result};

fn mismatch(why: impl Into<String>) -> Error {
    Error::MismatchedJudgements(why.into())
}

/// Subsumption: from `Γ ⊢ a :_g A'` and `Γ ⊢ A' ≤_f A` derive `Γ ⊢ a :_{f.g} A`.
pub fn rule_sbsm(g: &Gcwf, ct: &Judgement, st: &Judgement) -> Result<Judgement> {
    g.check_judgement(ct)?;
    g.check_judgement(st)?;
    let (&Judgement::CoercedTerm { ctx, term, witness: gw, ty }, &Judgement::Subtype { ctx: c2, witness: f, sub, sup }) =
        (ct, st)
    else {
        return Err(mismatch("sbsm expects a coerced term and a subtyping"));
    };
    if ctx != c2 || ty != sub {
        return Err(mismatch("the coerced type is not the subtype"));
    }
    let out = Judgement::CoercedTerm { ctx, term, witness: g.types().comp(f, gw), ty: sup };
    g.check_judgement(&out)?;
    Ok(out)
}

/// Transitivity: from `Γ ⊢ A' ≤_f A` and `Γ ⊢ A'' ≤_g A'` derive `Γ ⊢ A'' ≤_{f.g} A`.
pub fn rule_trans(g: &Gcwf, st1: &Judgement, st2: &Judgement) -> Result<Judgement> {
    g.check_judgement(st1)?;
    g.check_judgement(st2)?;
    let (
        &Judgement::Subtype { ctx, witness: f, sub: mid, sup },
        &Judgement::Subtype { ctx: c2, witness: h, sub, sup: mid2 },
    ) = (st1, st2)
    else {
        return Err(mismatch("trans expects two subtypings"));
    };
    if ctx != c2 || mid != mid2 {
        return Err(mismatch("middle types do not agree"));
    }
    let out = Judgement::Subtype { ctx, witness: g.types().comp(f, h), sub, sup };
    g.check_judgement(&out)?;
    Ok(out)
}

/// Weakening: reindex `Γ ⊢ A' ≤_f A` along the projection `Γ.B -> Γ`.
pub fn rule_wkn(g: &Gcwf, st: &Judgement, b: crate::fincat::Obj) -> Result<Judgement> {
    g.check_judgement(st)?;
    let &Judgement::Subtype { ctx, witness, .. } = st else {
        return Err(mismatch("wkn expects a subtyping"));
    };
    if g.u.over(b) != ctx {
        return Err(mismatch("weakening type lives in another context"));
    }
    let (ext, proj) = g.context_extension(b)?;
    let w = g.u.reindex_vertical(witness, proj)?;
    let e = g.types();
    let out = Judgement::Subtype { ctx: ext, witness: w, sub: e.dom(w), sup: e.cod(w) };
    g.check_judgement(&out)?;
    Ok(out)
}

/// Substitution: from `Γ.A ⊢ B' ≤_f B` and `Γ ⊢ a :_g A` derive
/// `Γ ⊢ B'[a] ≤ B[a]`, reindexing along `σ = u̇(Δg . η_a)`.
pub fn rule_sbst(g: &Gcwf, st: &Judgement, tm: &Judgement) -> Result<Judgement> {
    g.check_judgement(st)?;
    g.check_judgement(tm)?;
    let (&Judgement::Subtype { ctx: ext, witness: f, .. }, &Judgement::CoercedTerm { ctx, term, witness: gw, ty }) =
        (st, tm)
    else {
        return Err(mismatch("sbst expects a subtyping and a coerced term"));
    };
    let (expected, _) = g.context_extension(ty)?;
    if ext != expected {
        return Err(mismatch("subtyping does not live over the extension by the term's type"));
    }
    let (e, ed) = (g.types(), g.terms());
    let lifted = ed.comp(g.delta.mor(gw), g.eta.at(term));
    let sigma = g.udot.over_mor(lifted);
    // The filler through the cartesian counit ε_A over σ must be Σ(Δg . η_a).
    let filler = g
        .u
        .fill(g.eps.at(ty), gw, sigma)
        .ok_or_else(|| mismatch("no unique filler through the counit"))?;
    if filler != g.sigma.mor(lifted) || e.cod(filler) != g.sigma.obj(g.delta.obj(ty)) {
        return Err(mismatch("filler through the counit disagrees with Σ(Δg . η_a)"));
    }
    debug_assert_eq!(g.base().dom(sigma), ctx);
    let w = g.u.reindex_vertical(f, sigma)?;
    let out = Judgement::Subtype { ctx, witness: w, sub: e.dom(w), sup: e.cod(w) };
    g.check_judgement(&out)?;
    Ok(out)
}
