use std::sync::Arc;

use super::*;
use crate::error::Error;
use crate::fibration::Fibration;
use crate::fincat::{ArrowCategory, FinCategory, FinFunctor};
use crate::gcwf::{enumerate_judgements, rule_sbsm, rule_trans, Filter, Gcwf, Judgement, JudgementForm};
use crate::models::{chain_fibration, doctrine_gcwf, finset_skeleton, kernel_pair_gcwf, subobject_gcwf};

fn cod(n: usize) -> Fibration {
    let c = Arc::new(finset_skeleton(n).unwrap());
    Fibration::new(ArrowCategory::new(c, |_| true).cod_functor())
}

fn discrete() -> Fibration {
    let c = Arc::new(FinCategory::discrete(&["a", "b", "c"]));
    let t = Arc::new(FinCategory::terminal());
    Fibration::new(FinFunctor::new(c, t, vec![crate::fincat::Obj(0); 3], vec![crate::fincat::Mor(0); 3]).unwrap())
}

fn kp1() -> Gcwf {
    kernel_pair_gcwf(Arc::new(finset_skeleton(1).unwrap())).unwrap().gcwf
}

fn chain_doctrine(k: usize) -> Gcwf {
    doctrine_gcwf(&chain_fibration(k).unwrap()).unwrap().gcwf
}

/// `T` of a finite poset: pairs `x <= y`, ordered componentwise. Returns the elements and
/// the order relation.
fn comma_poset(elems: &[usize], leq: &dyn Fn(usize, usize) -> bool) -> (Vec<(usize, usize)>, Vec<Vec<bool>>) {
    let pairs: Vec<(usize, usize)> =
        elems.iter().flat_map(|&x| elems.iter().map(move |&y| (x, y))).filter(|&(x, y)| leq(x, y)).collect();
    let rel = pairs
        .iter()
        .map(|&(a, b)| pairs.iter().map(|&(c, d)| leq(a, c) && leq(b, d)).collect())
        .collect();
    (pairs, rel)
}

#[test]
fn comma_of_cod_counts_triangles() {
    let p = cod(1);
    let t = t_fib(&p).unwrap();
    // a vertical arrow of cod is a triangle x with b . x = a over a common codomain
    let c = finset_skeleton(1).unwrap();
    let triangles: usize = c
        .objects()
        .map(|z| {
            let into = c.incoming(z);
            into.iter()
                .flat_map(|&a| into.iter().map(move |&b| (a, b)))
                .map(|(a, b)| c.hom(c.dom(a), c.dom(b)).iter().filter(|&&x| c.comp(b, x) == a).count())
                .sum::<usize>()
        })
        .sum();
    assert_eq!(triangles, 4);
    assert_eq!(t.total().object_count(), triangles);
    assert!(t.check_projections().is_ok());
}

#[test]
fn comma_requires_a_fibration() {
    assert!(matches!(t_fib(&cod(2)), Err(Error::NotAFibration(_))));
    assert!(!check_monad_laws_fib(&cod(2)).is_ok());
}

#[test]
fn comma_of_discrete_collapses() {
    let p = discrete();
    let t = t_fib(&p).unwrap();
    assert!(unit(&t).is_isomorphism());
    assert!(check_monad_laws_fib(&p).is_ok());
}

#[test]
fn comma_of_identity_morphism_is_identity() {
    let p = chain_fibration(3).unwrap();
    let t = t_fib(&p).unwrap();
    let id = FinFunctor::identity(p.total().clone());
    let tid = t_fib_morphism(&id, &t, &t).unwrap();
    assert_eq!(tid.morphism_map(), FinFunctor::identity(t.total().clone()).morphism_map());
}

#[test]
fn comma_cartesian_arrows_are_pairwise_cartesian() {
    for p in [cod(1), chain_fibration(3).unwrap()] {
        let t = t_fib(&p).unwrap();
        for m in t.total().morphisms() {
            let (x, y) = t.square(m);
            assert_eq!(t.fibration.is_cartesian(m), p.is_cartesian(x) && p.is_cartesian(y));
        }
        assert!(t.fibration.classify().is_fibration);
        assert_eq!(t.fibration.classify().faithful, p.classify().faithful);
    }
}

#[test]
fn comma_of_chain_matches_poset_oracle() {
    for k in 1..=3 {
        let p = chain_fibration(k).unwrap();
        let t1 = t_fib(&p).unwrap();
        let t2 = t_fib(&t1.fibration).unwrap();
        let elems: Vec<usize> = (0..k).collect();
        let (pairs, rel) = comma_poset(&elems, &|a, b| a <= b);
        let idx: Vec<usize> = (0..pairs.len()).collect();
        let (squares, rel2) = comma_poset(&idx, &|a, b| rel[a][b]);
        let count = |r: &Vec<Vec<bool>>| r.iter().flatten().filter(|&&x| x).count();
        assert_eq!(t1.total().object_count(), pairs.len());
        assert_eq!(t1.total().morphism_count(), count(&rel));
        assert_eq!(t2.total().object_count(), squares.len());
        assert_eq!(t2.total().morphism_count(), count(&rel2));
    }
}

#[test]
fn fibration_monad_laws_on_small_samples() {
    for p in [cod(1), chain_fibration(2).unwrap(), chain_fibration(3).unwrap()] {
        let r = check_monad_laws_fib(&p);
        assert!(r.is_ok(), "{r}");
    }
}

#[test]
fn lifted_samples_are_gcwfs() {
    for g in [kp1(), subobject_gcwf(2).unwrap().gcwf] {
        let d = t_gcwf(&g).unwrap();
        let r = check_t_gcwf(&d);
        assert!(r.is_ok(), "{r}");
        let r = check_judgement_correspondence(&d);
        assert!(r.is_ok(), "{r}");
    }
}

#[test]
fn discrete_gcwf_is_fixed() {
    // subobject gcwfs have discrete type fibers
    let g = subobject_gcwf(2).unwrap().gcwf;
    let d = t_gcwf(&g).unwrap();
    assert!(d.unit.h.is_isomorphism() && d.unit.hdot.is_isomorphism());
    assert_eq!(sizes(&g), sizes(&d.t_object));
}

#[test]
fn delta_bar_of_identity() {
    let g = kp1();
    let d = t_gcwf(&g).unwrap();
    let e = g.types();
    for a in e.objects() {
        let da = g.delta.obj(a);
        let want = d.term(da, e.id(g.sigma.obj(da))).unwrap();
        assert_eq!(d.delta_bar.obj(d.types.object(e.id(a)).unwrap()), want);
    }
}

#[test]
fn gcwf_monad_laws_on_small_samples() {
    for g in [kp1(), subobject_gcwf(2).unwrap().gcwf, chain_doctrine(2)] {
        let r = check_monad_laws_gcwf(&g);
        assert!(r.is_ok(), "{r}");
    }
}

#[test]
fn iteration() {
    let g = chain_doctrine(2);
    assert_eq!(sizes(&iterate_bounded(&g, 0, 10).unwrap()), sizes(&g));
    assert!(matches!(iterate_bounded(&g, 3, 10_000), Err(Error::TooLarge { .. })));
    assert!(matches!(iterate_bounded(&g, 2, 3), Err(Error::TooLarge { .. })));
    let tt = iterate_bounded(&g, 2, 10_000).unwrap();
    // squares of vertical arrows in the chain 0 < 1, and cubes between them
    let (pairs, rel) = comma_poset(&[0, 1], &|a, b| a <= b);
    let idx: Vec<usize> = (0..pairs.len()).collect();
    let (squares, cubes) = comma_poset(&idx, &|a, b| rel[a][b]);
    assert_eq!(tt.types().object_count(), squares.len());
    assert_eq!(tt.types().morphism_count(), cubes.iter().flatten().filter(|&&x| x).count());
    let s = subobject_gcwf(1).unwrap().gcwf;
    assert_eq!(sizes(&iterate_bounded(&s, 1, 100).unwrap()), sizes(&s));
}

#[test]
fn lifted_size_predicts_the_lift() {
    for g in [kp1(), chain_doctrine(3)] {
        let d = t_gcwf(&g).unwrap();
        let (types, terms) = lifted_size(&g);
        assert_eq!(d.t_object.types().object_count(), types);
        assert_eq!(d.t_object.terms().object_count(), terms);
    }
}

#[test]
fn rules_in_the_lift_are_squares_of_rules() {
    let g = chain_doctrine(3);
    let d = t_gcwf(&g).unwrap();
    let tg = &d.t_object;
    let ctx = g.base().objects().next().unwrap();
    let sts = enumerate_judgements(tg, JudgementForm::Subtype, ctx, Filter::default());
    let mut n = 0;
    for a in &sts {
        for b in &sts {
            let Ok(out) = rule_trans(tg, a, b) else { continue };
            let (wa, wb, wo) = (a.witness().unwrap(), b.witness().unwrap(), out.witness().unwrap());
            let ((ta, ba), (tb, bb), (to, bo)) = (d.types.square(wa), d.types.square(wb), d.types.square(wo));
            let e = g.types();
            let leg = |f, h| {
                let st1 = Judgement::Subtype { ctx, witness: f, sub: e.dom(f), sup: e.cod(f) };
                let st2 = Judgement::Subtype { ctx, witness: h, sub: e.dom(h), sup: e.cod(h) };
                rule_trans(&g, &st1, &st2).unwrap().witness().unwrap()
            };
            assert_eq!((to, bo), (leg(ta, tb), leg(ba, bb)));
            n += 1;
        }
    }
    assert!(n > 0);
    let cts = enumerate_judgements(tg, JudgementForm::CoercedTerm, ctx, Filter::default());
    for ct in &cts {
        for st in &sts {
            if let Ok(out) = rule_sbsm(tg, ct, st) {
                let (_, bottom) = d.types.square(out.witness().unwrap());
                let (_, b1) = d.types.square(ct.witness().unwrap());
                let (_, b2) = d.types.square(st.witness().unwrap());
                assert_eq!(bottom, g.types().comp(b2, b1));
            }
        }
    }
}

#[test]
fn max_objects_reads_the_environment() {
    // the variable is not set in the test environment unless a user sets it
    if std::env::var("SUBFIB_MAX_OBJECTS").is_err() {
        assert_eq!(max_objects(), DEFAULT_MAX_OBJECTS);
    }
}
