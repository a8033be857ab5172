//! Premise syntax for `derive`:
//!
//! * `A' <= A` or `A' <= A @ w` is a subtyping with witness `w`,
//! * `a :< A` or `a :< A @ w` is a coerced term,
//! * a bare name is a type.
//!
//! The witness may be left out when exactly one vertical arrow fits.

use anyhow::{anyhow, bail, Result};
use subfib::fincat::{Mor, Obj};
use subfib::gcwf::{Gcwf, Judgement};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Premise {
    Subtype { sub: String, sup: String, witness: Option<String> },
    Coerced { term: String, ty: String, witness: Option<String> },
    Type(String),
}

fn split_witness(s: &str) -> (&str, Option<String>) {
    match s.rsplit_once('@') {
        Some((x, w)) => (x.trim(), Some(w.trim().to_string())),
        None => (s.trim(), None),
    }
}

/// Splits at ` sep ` when present, else at the first bare `sep`; names such as
/// `<x0>x0[]|m<=1|1>` may contain the bare separator.
fn split<'a>(s: &'a str, sep: &str) -> Option<(&'a str, &'a str)> {
    s.split_once(&format!(" {sep} ")).or_else(|| s.split_once(sep))
}

pub fn parse(s: &str) -> Result<Premise> {
    let s = s.trim();
    if let Some((a, b)) = split(s, ":<") {
        let (b, witness) = split_witness(b);
        return Ok(Premise::Coerced { term: a.trim().into(), ty: b.into(), witness });
    }
    if let Some((a, b)) = split(s, "<=") {
        let (b, witness) = split_witness(b);
        return Ok(Premise::Subtype { sub: a.trim().into(), sup: b.into(), witness });
    }
    if s.is_empty() {
        bail!("empty premise");
    }
    Ok(Premise::Type(s.into()))
}

fn witness(g: &Gcwf, from: Obj, to: Obj, named: &Option<String>) -> Result<Mor> {
    let e = g.types();
    if let Some(w) = named {
        return e.morphism(w).map_err(|err| anyhow!("{err}"));
    }
    match g.u.vertical_hom(from, to).as_slice() {
        [w] => Ok(*w),
        [] => bail!("no vertical arrow `{}` -> `{}`", e.object_name(from), e.object_name(to)),
        ws => bail!(
            "{} vertical arrows `{}` -> `{}`; name one with `@`",
            ws.len(),
            e.object_name(from),
            e.object_name(to)
        ),
    }
}

impl Premise {
    pub fn judgement(&self, g: &Gcwf) -> Result<Judgement> {
        let ty = |n: &str| g.type_named(n).map_err(|e| anyhow!("{e}"));
        match self {
            Premise::Subtype { sub, sup, witness: w } => {
                let (sub, sup) = (ty(sub)?, ty(sup)?);
                let witness = witness(g, sub, sup, w)?;
                Ok(Judgement::Subtype { ctx: g.u.over(sub), witness, sub, sup })
            }
            Premise::Coerced { term, ty: t, witness: w } => {
                let term = g.terms().object(term).map_err(|e| anyhow!("{e}"))?;
                let t = ty(t)?;
                let witness = witness(g, g.sigma.obj(term), t, w)?;
                Ok(Judgement::CoercedTerm { ctx: g.udot.over(term), term, witness, ty: t })
            }
            Premise::Type(n) => {
                let t = ty(n)?;
                Ok(Judgement::Type { ctx: g.u.over(t), ty: t })
            }
        }
    }

    pub fn ty(&self, g: &Gcwf) -> Result<Obj> {
        match self {
            Premise::Type(n) => g.type_named(n).map_err(|e| anyhow!("{e}")),
            other => bail!("expected a type, found {other:?}"),
        }
    }
}
