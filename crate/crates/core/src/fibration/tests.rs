use std::collections::HashSet;
use std::sync::Arc;

use super::*;
use crate::fincat::{ArrowCategory, CategoryBuilder};
use crate::models::{finset_skeleton, function_values};

fn cod_fibration(n: usize) -> (ArrowCategory, Fibration) {
    let c = Arc::new(finset_skeleton(n).unwrap());
    let arr = ArrowCategory::new(c, |_| true);
    let f = Fibration::new(arr.cod_functor());
    (arr, f)
}

fn chain(names: &[&str]) -> Arc<FinCategory> {
    Arc::new(FinCategory::poset(names, |i, j| i <= j).unwrap())
}

/// Base `0 -> 1`; fiber over 1 is `a<b`, over 0 is `x<y<z`, reindexing sends a to x and b to z.
fn poset_indexed() -> IndexedCategory {
    let base = Arc::new(FinCategory::walking_arrow());
    let over0 = chain(&["x", "y", "z"]);
    let over1 = chain(&["a", "b"]);
    let fibers = vec![over0.clone(), over1.clone()];
    let reindex = base
        .morphisms()
        .map(|s| {
            let (d, c) = (base.dom(s), base.cod(s));
            if d != c {
                FinFunctor::into_thin(over1.clone(), over0.clone(), vec![Obj(0), Obj(2)]).unwrap()
            } else {
                FinFunctor::identity(fibers[d.index()].clone())
            }
        })
        .collect();
    IndexedCategory::new(base, fibers, reindex).unwrap()
}

fn discrete_indexed() -> IndexedCategory {
    let base = Arc::new(FinCategory::walking_arrow());
    let over0 = Arc::new(FinCategory::discrete(&["p", "q", "r"]));
    let over1 = Arc::new(FinCategory::discrete(&["s", "t"]));
    let fibers = vec![over0.clone(), over1.clone()];
    let reindex = base
        .morphisms()
        .map(|s| {
            let (d, c) = (base.dom(s), base.cod(s));
            if d != c {
                FinFunctor::from_morphisms(over1.clone(), over0.clone(), vec![over0.id(Obj(2)), over0.id(Obj(2))]).unwrap()
            } else {
                FinFunctor::identity(fibers[d.index()].clone())
            }
        })
        .collect();
    IndexedCategory::new(base, fibers, reindex).unwrap()
}

/// Set-level pullback test: the square is a pullback iff `d ↦ (x(d), f'(d))` is a bijection
/// onto `{(a, b) : f(a) = σ(b)}`.
fn is_set_pullback(c: &FinCategory, arr: &ArrowCategory, square: Mor) -> bool {
    let (x, sigma) = arr.square[square.index()];
    let fp = arr.arrow[arr.category.dom(square).index()];
    let f = arr.arrow[arr.category.cod(square).index()];
    let (xv, sv, fv, fpv) = (
        function_values(c, x),
        function_values(c, sigma),
        function_values(c, f),
        function_values(c, fp),
    );
    let mut expected = HashSet::new();
    for (a, &fa) in fv.iter().enumerate() {
        for (b, &sb) in sv.iter().enumerate() {
            if fa == sb {
                expected.insert((a, b));
            }
        }
    }
    let got: HashSet<_> = (0..xv.len()).map(|d| (xv[d], fpv[d])).collect();
    got.len() == xv.len() && got == expected
}

#[test]
fn identities_are_cartesian() {
    let (arr, f) = cod_fibration(2);
    for o in arr.category.objects() {
        assert!(f.is_cartesian(arr.category.id(o)));
    }
}

#[test]
fn cartesian_squares_are_exactly_set_pullbacks() {
    let (arr, f) = cod_fibration(2);
    let c = arr.base.clone();
    let mut seen = (0, 0);
    for m in arr.category.morphisms() {
        let oracle = is_set_pullback(&c, &arr, m);
        assert_eq!(f.is_cartesian(m), oracle, "{}", arr.category.name(m));
        if oracle {
            seen.0 += 1
        } else {
            seen.1 += 1
        }
    }
    assert!(seen.0 > 0 && seen.1 > 0);
}

#[test]
fn unknown_morphism_is_rejected() {
    let (_, f) = cod_fibration(1);
    assert!(matches!(f.try_is_cartesian(Mor(10_000)), Err(crate::Error::UnknownMorphism(_))));
}

#[test]
fn cod_lift_is_a_pullback_square() {
    let (arr, f) = cod_fibration(1);
    let c = arr.base.clone();
    for a in arr.category.objects() {
        for &sigma in c.incoming(c.cod(arr.arrow[a.index()])) {
            let s = f.cartesian_lift(a, sigma).unwrap();
            assert!(is_set_pullback(&c, &arr, s));
            assert_eq!(f.over_mor(s), sigma);
        }
    }
}

#[test]
fn cod_on_two_lacks_a_lift() {
    // 2 x_1 2 has four elements and does not exist among {0, 1, 2}
    let (arr, f) = cod_fibration(2);
    let c = arr.base.clone();
    let bang = c.morphism("2>1:00").unwrap();
    let a = arr.object(bang).unwrap();
    assert!(matches!(f.cartesian_lift(a, bang), Err(crate::Error::NoLift { .. })));
    assert!(!f.classify().is_fibration);
}

#[test]
fn cod_fiber_over_two_has_seven_objects() {
    let (arr, f) = cod_fibration(2);
    let two = arr.base.object("2").unwrap();
    // oracle: functions from m into 2 for m = 0, 1, 2
    let expected: usize = (0..=2u32).map(|m| 2usize.pow(m)).sum();
    assert_eq!(f.fiber(two).unwrap().category.object_count(), expected);
    assert!(matches!(f.fiber(Obj(99)), Err(crate::Error::UnknownObject(_))));
}

#[test]
fn cod_classification() {
    let (_, f) = cod_fibration(1);
    let k = f.classify();
    assert!(k.is_fibration);
    assert!(!k.discrete);
    let (_, big) = cod_fibration(2);
    assert!(!big.classify().faithful);
}

#[test]
fn factorization_of_vertical_and_cartesian_arrows() {
    let (arr, f) = cod_fibration(1);
    let e = &arr.category;
    for r in e.morphisms() {
        let (v, c) = f.factorize(r).unwrap();
        assert_eq!(e.comp(c, v), r);
        assert!(f.is_vertical(v));
        assert!(f.is_cartesian(c));
        if f.is_vertical(r) {
            assert_eq!(v, r);
        }
    }
}

#[test]
fn grothendieck_of_constant_terminal_is_the_base() {
    let base = Arc::new(FinCategory::walking_arrow());
    let t = Arc::new(FinCategory::terminal());
    let ic = IndexedCategory::new(
        base.clone(),
        vec![t.clone(), t.clone()],
        base.morphisms().map(|_| FinFunctor::identity(t.clone())).collect(),
    )
    .unwrap();
    let g = grothendieck(&ic).unwrap();
    assert!(g.total().same_shape(&base));
    assert!(g.fibration.functor().is_isomorphism());
}

#[test]
fn poset_grothendieck_is_faithful_and_split() {
    let g = grothendieck(&poset_indexed()).unwrap();
    assert!(g.fibration.validate().is_ok(), "{}", g.fibration.validate());
    let k = g.fibration.classify();
    assert_eq!(k, Classification { is_fibration: true, split: true, faithful: true, discrete: false });
}

#[test]
fn discrete_grothendieck_classification() {
    let g = grothendieck(&discrete_indexed()).unwrap();
    let k = g.fibration.classify();
    assert_eq!(k, Classification { is_fibration: true, split: true, faithful: true, discrete: true });
    // lifts are unique: exactly one arrow over each σ into each object
    let e = g.total();
    for a in e.objects() {
        for &s in g.fibration.base().incoming(g.fibration.over(a)) {
            let over: Vec<_> = e.incoming(a).iter().filter(|&&m| g.fibration.over_mor(m) == s).collect();
            assert_eq!(over.len(), 1);
        }
    }
}

#[test]
fn non_strict_data_is_rejected() {
    let ic = poset_indexed();
    let base = ic.base().clone();
    let bad: Vec<FinFunctor> = base
        .morphisms()
        .map(|s| {
            let src = ic.fiber(base.cod(s)).clone();
            let tgt = ic.fiber(base.dom(s)).clone();
            // constant at the bottom element, including on identities
            FinFunctor::into_thin(src.clone(), tgt, vec![Obj(0); src.object_count()]).unwrap()
        })
        .collect();
    let ic = IndexedCategory::new(base, ic.fibers().to_vec(), bad).unwrap();
    assert!(matches!(grothendieck(&ic), Err(crate::Error::NonStrict(_))));
}

#[test]
fn round_trip_through_indexed_categories() {
    for ic in [poset_indexed(), discrete_indexed()] {
        let g = grothendieck(&ic).unwrap();
        let back = indexed_of(&g.fibration).unwrap();
        for o in ic.base().objects() {
            assert!(back.fiber(o).same_shape(ic.fiber(o)));
        }
        for s in ic.base().morphisms() {
            assert_eq!(back.reindex(s).object_map(), ic.reindex(s).object_map());
            assert_eq!(back.reindex(s).morphism_map(), ic.reindex(s).morphism_map());
        }
        let (_, h) = grothendieck_comparison(&g.fibration).unwrap();
        assert!(h.is_valid() && h.is_isomorphism());
    }
}

#[test]
fn searched_cod_cleavage_round_trips() {
    let (_, f) = cod_fibration(1);
    let (_, h) = grothendieck_comparison(&f).unwrap();
    assert!(h.is_valid() && h.is_isomorphism());
}

#[test]
fn non_split_cleavage_is_detected() {
    // a single object with an involution, over the terminal category
    let mut b = CategoryBuilder::new();
    let x = b.object("x");
    let id = b.identity(x, "id");
    let sw = b.morphism("swap", x, x);
    b.compose(id, id, id);
    b.compose(id, sw, sw);
    b.compose(sw, id, sw);
    b.compose(sw, sw, id);
    let e = Arc::new(b.build().unwrap());
    let t = Arc::new(FinCategory::terminal());
    let p = FinFunctor::new(e, t.clone(), vec![Obj(0)], vec![Mor(0), Mor(0)]).unwrap();
    let f = Fibration::with_cleavage(p, [(x, t.id(Obj(0)), sw)], true).unwrap();
    assert!(f.is_cartesian(sw));
    assert!(!f.validate().is_ok());
    assert!(matches!(indexed_of(&f), Err(crate::Error::NonSplitCleavage(_))));
    assert!(!f.classify().split);
}

#[test]
fn reindexing_composes_for_split_cleavages() {
    let g = grothendieck(&poset_indexed()).unwrap();
    let f = &g.fibration;
    let (e, b) = (f.total(), f.base());
    for m in e.morphisms().filter(|&m| f.is_vertical(m)) {
        for &s in b.incoming(f.over(e.dom(m))) {
            for &t in b.incoming(b.dom(s)) {
                let once = f.reindex_vertical(m, b.comp(s, t)).unwrap();
                let twice = f.reindex_vertical(f.reindex_vertical(m, s).unwrap(), t).unwrap();
                assert_eq!(once, twice);
            }
        }
        let gm = f.over(e.dom(m));
        assert_eq!(f.reindex_vertical(m, b.id(gm)).unwrap(), m);
    }
}

#[test]
fn vertical_opposite_reverses_fibers() {
    let g = grothendieck(&poset_indexed()).unwrap();
    let op = vertical_opposite(&g.fibration).unwrap();
    let over0 = op.fibration.fiber(Obj(0)).unwrap().category;
    let expected = chain(&["x", "y", "z"]).opposite();
    assert!(over0.same_shape(&expected));
    assert_eq!(op.fibration.classify(), g.fibration.classify());
    let twice = vertical_opposite(&op.fibration).unwrap();
    assert!(twice.total().same_shape(g.total()));
    // cartesian arrows correspond: same count
    let count = |f: &Fibration| f.total().morphisms().filter(|&m| f.is_cartesian(m)).count();
    assert_eq!(count(&op.fibration), count(&g.fibration));
}

#[test]
fn discrete_vertical_opposite_is_isomorphic() {
    let g = grothendieck(&discrete_indexed()).unwrap();
    let op = vertical_opposite(&g.fibration).unwrap();
    assert!(op.total().same_shape(g.total()));
}

#[test]
fn fibred_product_with_identity_cospan() {
    let g = grothendieck(&poset_indexed()).unwrap();
    let u = &g.fibration;
    let id = FinFunctor::identity(u.total().clone());
    let p = fibred_product(u, u, Along::Functors { left: &id, right: &id, common: u }).unwrap();
    assert!(p.total().same_shape(u.total()));
    assert!(p.check_projections(u, u).is_ok());
}

#[test]
fn discrete_self_product_is_diagonal() {
    let g = grothendieck(&discrete_indexed()).unwrap();
    let u = &g.fibration;
    let id = FinFunctor::identity(u.total().clone());
    let p = fibred_product(u, u, Along::Functors { left: &id, right: &id, common: u }).unwrap();
    assert!(p.objects().iter().all(|&(x, y)| x == y));
    assert_eq!(p.objects().len(), u.total().object_count());
}

#[test]
fn product_over_base_pairs_same_context_elements() {
    let g = grothendieck(&poset_indexed()).unwrap();
    let u = &g.fibration;
    let p = fibred_product(u, u, Along::Base).unwrap();
    // oracle: sum over base objects of |fiber|^2
    let expected: usize = u.base().objects().map(|o| u.objects_over(o).len().pow(2)).sum();
    assert_eq!(p.objects().len(), expected);
    assert!(p.check_projections(u, u).is_ok());
    assert!(p.fibration.classify().is_fibration);
}

#[test]
fn mismatched_bases_are_rejected() {
    let g = grothendieck(&poset_indexed()).unwrap();
    let (_, c) = cod_fibration(1);
    assert!(matches!(fibred_product(&g.fibration, &c, Along::Base), Err(crate::Error::MismatchedBase(_))));
}

mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn factorization_is_unique(i in 0usize..200) {
            let (arr, f) = cod_fibration(1);
            let e = &arr.category;
            let r = Mor((i % e.morphism_count()) as u32);
            let (v, c) = f.factorize(r).unwrap();
            // every vertical/chosen-cartesian split of r is this one
            for &v2 in e.outgoing(e.dom(r)) {
                if !f.is_vertical(v2) { continue; }
                if e.compose(c, v2) == Some(r) {
                    prop_assert_eq!(v2, v);
                }
            }
        }

        #[test]
        fn cartesian_fillers_are_unique(i in 0usize..400) {
            let (arr, f) = cod_fibration(1);
            let e = &arr.category;
            let b = f.base();
            let s = Mor((i % e.morphism_count()) as u32);
            prop_assume!(f.is_cartesian(s));
            for c in e.objects() {
                for &r in e.hom(c, e.cod(s)) {
                    for &tau in b.hom(f.over(c), b.dom(f.over_mor(s))) {
                        if b.comp(f.over_mor(s), tau) == f.over_mor(r) {
                            prop_assert_eq!(f.fillers(s, r, tau).len(), 1);
                        }
                    }
                }
            }
        }

        #[test]
        fn cartesian_cache_is_stable(i in 0usize..100) {
            let (arr, f) = cod_fibration(2);
            let m = Mor((i % arr.category.morphism_count()) as u32);
            let first = f.is_cartesian(m);
            let copy = f.clone();
            prop_assert_eq!(copy.is_cartesian(m), first);
            prop_assert_eq!(f.is_cartesian(m), first);
        }
    }
}

#[test]
fn concurrent_lift_requests_agree() {
    let (arr, f) = cod_fibration(1);
    let f = Arc::new(f);
    let c = arr.base.clone();
    let a = Obj(0);
    let sigma = c.incoming(c.cod(arr.arrow[0]))[0];
    let handles: Vec<_> = (0..8)
        .map(|_| {
            let f = f.clone();
            std::thread::spawn(move || f.cartesian_lift(a, sigma).unwrap())
        })
        .collect();
    let got: HashSet<Mor> = handles.into_iter().map(|h| h.join().unwrap()).collect();
    assert_eq!(got.len(), 1);
}
