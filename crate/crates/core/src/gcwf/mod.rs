//! Generalized categories with families: two fibrations over a common base joined by an
//! adjunction `Σ ⊣ Δ` whose unit and counit have cartesian components.

mod faithful;
mod judgement;
mod rules;


pub use faithful::{check_gcwf_morphism, check_sigma_faithful, GcwfMorphism};
pub use judgement::{enumerate_judgements, Filter, Judgement, JudgementForm};
pub use rules::{rule_sbsm, rule_sbst, rule_trans, rule_wkn};

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fibration::{check_fibration_morphism, Fibration};
use crate::fincat::{terminal_object, FinCategory, FinFunctor, Mor, NatTransformation, Obj};
use crate::report::Report;

/// `u: E -> B` (types), `udot: Ė -> B` (terms), `Σ: Ė -> E`, `Δ: E -> Ė`,
/// `η: id -> ΔΣ`, `ε: ΣΔ -> id`.
#[derive(Debug, Clone)]
pub struct Gcwf {
    pub u: Fibration,
    pub udot: Fibration,
    pub sigma: FinFunctor,
    pub delta: FinFunctor,
    pub eta: NatTransformation,
    pub eps: NatTransformation,
}

impl Gcwf {
    /// Assembles the record; `eta` and `eps` are given componentwise.
    pub fn new(
        u: Fibration,
        udot: Fibration,
        sigma: FinFunctor,
        delta: FinFunctor,
        eta: Vec<Mor>,
        eps: Vec<Mor>,
    ) -> Result<Self> {
        if **u.base() != **udot.base() {
            return Err(Error::MismatchedBase("type and term fibrations live over different bases".into()));
        }
        if **sigma.source() != **udot.total() || **sigma.target() != **u.total() {
            return Err(Error::MalformedEntity("Σ must run from terms to types".into()));
        }
        if **delta.source() != **u.total() || **delta.target() != **udot.total() {
            return Err(Error::MalformedEntity("Δ must run from types to terms".into()));
        }
        let ds = sigma.then(&delta)?;
        let sd = delta.then(&sigma)?;
        let eta = NatTransformation::new(FinFunctor::identity(udot.total().clone()), ds, eta)?;
        let eps = NatTransformation::new(sd, FinFunctor::identity(u.total().clone()), eps)?;
        Ok(Gcwf { u, udot, sigma, delta, eta, eps })
    }

    pub fn base(&self) -> &Arc<FinCategory> {
        self.u.base()
    }

    pub fn types(&self) -> &Arc<FinCategory> {
        self.u.total()
    }

    pub fn terms(&self) -> &Arc<FinCategory> {
        self.udot.total()
    }

    /// The context extension `Γ.A = dom u(ε_A)` and its projection `u(ε_A)`.
    pub fn context_extension(&self, a: Obj) -> Result<(Obj, Mor)> {
        if a.index() >= self.types().object_count() {
            return Err(Error::UnknownType(format!("#{}", a.0)));
        }
        let p = self.u.over_mor(self.eps.at(a));
        Ok((self.base().dom(p), p))
    }

    pub fn type_name(&self, a: Obj) -> &str {
        self.types().object_name(a)
    }

    pub fn term_name(&self, a: Obj) -> &str {
        self.terms().object_name(a)
    }

    pub fn context_name(&self, g: Obj) -> &str {
        self.base().object_name(g)
    }

    /// Resolves a type by name.
    pub fn type_named(&self, name: &str) -> Result<Obj> {
        self.types().object_id(name).ok_or_else(|| Error::UnknownType(name.to_string()))
    }
}

fn check_cartesian_components(r: &mut Report, id: &str, fib: &Fibration, t: &NatTransformation, names: &FinCategory) {
    let mark = r.entries.len();
    for o in names.objects() {
        if !fib.is_cartesian(t.at(o)) {
            r.fail(id, format!("component at `{}` is not cartesian", names.object_name(o)));
        }
    }
    r.pass_unless_failed(mark, id, "");
}

/// Every gcwf axiom, checked exhaustively. Failures name the offending component.
pub fn check_gcwf(g: &Gcwf) -> Report {
    let mut r = Report::new("gcwf");
    r.check(
        terminal_object(g.base()).is_ok(),
        "terminal",
        "base has a terminal object",
    );
    for (id, fib) in [("u-fibration", &g.u), ("udot-fibration", &g.udot)] {
        let v = fib.validate();
        if !v.is_ok() {
            r.absorb(id, v);
            continue;
        }
        match fib.complete_cleavage() {
            Ok(()) => r.pass(id, ""),
            Err(e) => r.fail(id, e.to_string()),
        }
    }
    for (id, f) in [("sigma-functor", &g.sigma), ("delta-functor", &g.delta)] {
        let v = f.validate();
        if v.is_ok() {
            r.pass(id, "");
        } else {
            r.absorb(id, v);
        }
    }
    if !r.is_ok() {
        return r;
    }
    r.absorb("sigma", check_fibration_morphism(&g.sigma, &g.udot, &g.u));
    for (id, t) in [("eta-natural", &g.eta), ("eps-natural", &g.eps)] {
        let v = t.validate();
        if v.is_ok() {
            r.pass(id, "");
        } else {
            r.absorb(id, v);
        }
    }
    let (e, ed) = (g.types(), g.terms());
    // ε_Σa . Ση_a = id_Σa
    let mark = r.entries.len();
    for a in ed.objects() {
        let sa = g.sigma.obj(a);
        if e.compose(g.eps.at(sa), g.sigma.mor(g.eta.at(a))) != Some(e.id(sa)) {
            r.fail("triangle-sigma", format!("at term `{}`", ed.object_name(a)));
        }
    }
    r.pass_unless_failed(mark, "triangle-sigma", "");
    // Δε_A . η_ΔA = id_ΔA
    let mark = r.entries.len();
    for a in e.objects() {
        let da = g.delta.obj(a);
        if ed.compose(g.delta.mor(g.eps.at(a)), g.eta.at(da)) != Some(ed.id(da)) {
            r.fail("triangle-delta", format!("at type `{}`", e.object_name(a)));
        }
    }
    r.pass_unless_failed(mark, "triangle-delta", "");
    check_cartesian_components(&mut r, "eta-cartesian", &g.udot, &g.eta, ed);
    check_cartesian_components(&mut r, "eps-cartesian", &g.u, &g.eps, e);
    r
}
