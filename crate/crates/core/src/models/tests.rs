use std::sync::Arc;

use super::*;
use crate::error::Error;
use crate::fibration::Fibration;
use crate::fincat::{FinCategory, FinFunctor, Mor, Obj};
use crate::gcwf::{check_gcwf, check_sigma_faithful};

fn skeleton(n: usize) -> Arc<FinCategory> {
    Arc::new(finset_skeleton(n).unwrap())
}

#[test]
fn kernel_pairs_need_pullbacks_inside_the_skeleton() {
    // 2 x_1 2 has four elements
    assert!(matches!(kernel_pair_gcwf(skeleton(2)), Err(Error::NoPullback { .. })));
    assert!(kernel_pair_gcwf(skeleton(1)).is_ok());
}

#[test]
fn kernel_pair_sizes() {
    let c = skeleton(1);
    let kp = kernel_pair_gcwf(c.clone()).unwrap();
    // types are all arrows, terms are arrows with a chosen section
    assert_eq!(kp.gcwf.types().object_count(), c.morphism_count());
    let sections = c
        .morphisms()
        .map(|f| c.hom(c.cod(f), c.dom(f)).iter().filter(|&&s| c.is_identity(c.comp(f, s))).count())
        .sum::<usize>();
    assert_eq!(kp.gcwf.terms().object_count(), sections);
    // the kernel of f has |{(x, y) : f x = f y}| elements
    for ty in kp.gcwf.types().objects() {
        let f = kp.arrows.arrow[ty.index()];
        let vals = function_values(&c, f);
        let pairs = vals.iter().flat_map(|a| vals.iter().map(move |b| a == b)).filter(|&e| e).count();
        assert_eq!(c.object_name(kp.kernels[ty.index()].apex), pairs.to_string());
        assert_eq!(c.dom(kp.diagonal(ty)), c.dom(f));
    }
}

#[test]
fn monos_in_larger_skeletons() {
    for n in 2..=3 {
        let kp = kernel_pair_gcwf_in(skeleton(n), ArrowClass::Monos).unwrap();
        let g = &kp.gcwf;
        assert!(check_gcwf(g).is_ok(), "{n}: {}", check_gcwf(g));
        assert!(check_sigma_faithful(g).is_ok());
        // an injection k -> m: m! / (m-k)! of them
        let c = g.base();
        let injections: usize = c
            .objects()
            .flat_map(|a| c.objects().map(move |b| (a.index(), b.index())))
            .map(|(k, m)| if k <= m { (m - k + 1..=m).product::<usize>() } else { 0 })
            .sum();
        assert_eq!(g.types().object_count(), injections);
    }
}

#[test]
fn subobject_sizes_and_comprehension() {
    assert!(matches!(subobject_gcwf(5), Err(Error::TooLarge { .. })));
    for n in 0..=3 {
        let s = subobject_gcwf(n).unwrap();
        let c = s.gcwf.base();
        assert_eq!(c.object_count(), n.max(2) + 1);
        let preds: usize = c.objects().map(|x| 1usize << x.index()).sum();
        assert_eq!(s.gcwf.types().object_count(), preds);
        for phi in s.gcwf.types().objects() {
            let trues = function_values(c, s.slice.arrow[phi.index()]).iter().filter(|&&v| v == 1).count();
            let (ext, proj) = s.gcwf.context_extension(phi).unwrap();
            assert_eq!(c.object_name(ext), trues.to_string());
            assert!(c.is_monic(proj));
        }
        assert!(check_gcwf(&s.gcwf).is_ok());
    }
}

#[test]
fn heyting_tables_are_valid() {
    for h in [HeytingAlgebra::three_chain(), HeytingAlgebra::diamond()] {
        assert!(h.validate().is_ok());
        for a in 0..h.len() {
            for b in 0..h.len() {
                // a => b is the largest c with c ∧ a <= b
                let cands: Vec<usize> = (0..h.len()).filter(|&c| h.leq[h.meet[c][a]][b]).collect();
                let i = h.imp[a][b];
                assert!(cands.contains(&i) && cands.iter().all(|&c| h.leq[c][i]));
            }
        }
    }
    let mut bad = HeytingAlgebra::three_chain();
    bad.imp[1][0] = 1;
    assert!(!bad.validate().is_ok());
    assert!(heyting_spec().validate().is_ok());
}

#[test]
fn heyting_sample_shape() {
    let (p, spec) = heyting_sample();
    let k = p.classify();
    assert!(k.is_fibration && k.split && k.faithful && !k.discrete);
    let sizes: usize = spec.fibers.iter().map(|h| h.len()).sum();
    assert_eq!(p.total().object_count(), sizes);
    let base = context_category();
    assert_eq!(base.object_names(), ["x0", "x1", "x2"]);
    assert_eq!(p.base().morphism_count(), base.morphism_count());
}

#[test]
fn chains_are_split_and_faithful() {
    assert!(chain_fibration(0).is_err());
    let p = chain_fibration(4).unwrap();
    let k = p.classify();
    assert!(k.is_fibration && k.split && k.faithful);
    assert_eq!(p.total().morphism_count(), 10);
}

#[test]
fn doctrine_terms_are_entailments() {
    let (p, spec) = heyting_sample();
    let d = doctrine_gcwf(&p).unwrap();
    let g = &d.gcwf;
    // one term per pair a <= b in a fiber
    let pairs: usize = spec.fibers.iter().map(|h| h.leq.iter().flatten().filter(|&&x| x).count()).sum();
    assert_eq!(g.terms().object_count(), pairs);
    let x0 = g.base().object("x0").unwrap();
    let top = g.type_named("x0|1").unwrap();
    let over_top = g.udot.objects_over(x0).into_iter().filter(|&t| g.sigma.obj(t) == top).count();
    assert_eq!(over_top, 3);
    for t in g.terms().objects() {
        let f = d.entailments.arrow[t.index()];
        assert_eq!(d.entailment(g.types().dom(f), g.types().cod(f)), Some(t));
    }
}

#[test]
fn doctrine_unit_is_not_cartesian() {
    let (p, _) = heyting_sample();
    let d = doctrine_gcwf(&p).unwrap();
    let r = check_gcwf(&d.gcwf);
    assert!(r.mentions("eta-cartesian"), "{r}");
    assert!(!check_sigma_faithful(&d.gcwf).is_ok());
}

#[test]
fn doctrine_rejects_bad_fibrations() {
    let c = skeleton(2);
    let t = Arc::new(FinCategory::terminal());
    let bang = FinFunctor::new(c.clone(), t, vec![Obj(0); c.object_count()], vec![Mor(0); c.morphism_count()]).unwrap();
    assert!(matches!(doctrine_gcwf(&Fibration::new(bang)), Err(Error::NotFaithful(_))));
    let arrow = Arc::new(FinCategory::walking_arrow());
    let one = arrow.object("1").unwrap();
    let point = FinFunctor::new(Arc::new(FinCategory::terminal()), arrow.clone(), vec![one], vec![arrow.id(one)]).unwrap();
    assert!(matches!(doctrine_gcwf(&Fibration::new(point)), Err(Error::NotAFibration(_))));
}
