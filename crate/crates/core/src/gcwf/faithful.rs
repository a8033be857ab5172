use std::collections::HashSet;

use super::Gcwf;
use crate::fibration::check_fibration_morphism;
use crate::fincat::{FinFunctor, Mor};
use crate::report::Report;

/// A morphism of gcwfs over a common base: `H` on types and `Ḣ` on terms.
#[derive(Debug, Clone)]
pub struct GcwfMorphism {
    pub h: FinFunctor,
    pub hdot: FinFunctor,
}

impl GcwfMorphism {
    pub fn identity(g: &Gcwf) -> Self {
        GcwfMorphism { h: FinFunctor::identity(g.types().clone()), hdot: FinFunctor::identity(g.terms().clone()) }
    }
}

/// Unit components are monic, Σ is injective on hom-sets, and Σ maps `Ė(a, b)` bijectively
/// onto `{f : (Ση_b) f = (ΣΔf)(Ση_a)}` with inverse obtained through the cartesian `η_b`.
pub fn check_sigma_faithful(g: &Gcwf) -> Report {
    let mut r = Report::new("sigma-faithful");
    let (e, ed) = (g.types(), g.terms());
    let mark = r.entries.len();
    for b in ed.objects() {
        if !ed.is_monic(g.eta.at(b)) {
            r.fail("eta-monic", format!("η at `{}`", ed.object_name(b)));
        }
    }
    r.pass_unless_failed(mark, "eta-monic", "");
    let mark_inj = r.entries.len();
    let mut bijection_failures = Vec::new();
    for a in ed.objects() {
        for b in ed.objects() {
            let hom = ed.hom(a, b);
            let image: HashSet<Mor> = hom.iter().map(|&m| g.sigma.mor(m)).collect();
            if image.len() != hom.len() {
                r.fail("sigma-injective", format!("hom({}, {})", ed.object_name(a), ed.object_name(b)));
            }
            let (sa, sb) = (g.sigma.obj(a), g.sigma.obj(b));
            let se_a = g.sigma.mor(g.eta.at(a));
            let se_b = g.sigma.mor(g.eta.at(b));
            let compatible: HashSet<Mor> = e
                .hom(sa, sb)
                .iter()
                .copied()
                .filter(|&f| e.comp(se_b, f) == e.comp(g.sigma.mor(g.delta.mor(f)), se_a))
                .collect();
            if compatible != image {
                bijection_failures.push(format!(
                    "hom({}, {}): {} arrows in the image, {} compatible",
                    ed.object_name(a),
                    ed.object_name(b),
                    image.len(),
                    compatible.len()
                ));
                continue;
            }
            // the inverse: the unique g over u(f) with η_b . g = Δf . η_a
            for &f in &compatible {
                let target = ed.comp(g.delta.mor(f), g.eta.at(a));
                match g.udot.fill(g.eta.at(b), target, g.u.over_mor(f)) {
                    Some(m) if g.sigma.mor(m) == f => {}
                    _ => bijection_failures.push(format!("no inverse image of `{}` through η", e.name(f))),
                }
            }
        }
    }
    r.pass_unless_failed(mark_inj, "sigma-injective", "");
    if bijection_failures.is_empty() {
        r.pass("sigma-bijection", "");
    } else {
        for d in bijection_failures {
            r.fail("sigma-bijection", d);
        }
    }
    r
}

/// Both components are fibration morphisms and `H . Σ = Σ' . Ḣ`.
pub fn check_gcwf_morphism(g: &Gcwf, g2: &Gcwf, m: &GcwfMorphism) -> Report {
    let mut r = Report::new("gcwf-morphism");
    if **g.base() != **g2.base() {
        r.fail("base", "gcwfs live over different bases");
        return r;
    }
    if **m.h.source() != **g.types() || **m.h.target() != **g2.types() {
        r.fail("h", "H does not run between the type categories");
    }
    if **m.hdot.source() != **g.terms() || **m.hdot.target() != **g2.terms() {
        r.fail("hdot", "Ḣ does not run between the term categories");
    }
    if !r.is_ok() {
        return r;
    }
    r.absorb("h", check_fibration_morphism(&m.h, &g.u, &g2.u));
    r.absorb("hdot", check_fibration_morphism(&m.hdot, &g.udot, &g2.udot));
    let ed = g.terms();
    let mark = r.entries.len();
    for a in ed.objects() {
        if m.h.obj(g.sigma.obj(a)) != g2.sigma.obj(m.hdot.obj(a)) {
            r.fail("sigma-square", format!("term `{}`", ed.object_name(a)));
        }
    }
    for f in ed.morphisms() {
        if m.h.mor(g.sigma.mor(f)) != g2.sigma.mor(m.hdot.mor(f)) {
            r.fail("sigma-square", format!("term morphism `{}`", ed.name(f)));
        }
    }
    r.pass_unless_failed(mark, "sigma-square", "");
    r
}
