use super::*;
use crate::error::Error;
use crate::gcwf::{enumerate_judgements, Filter, JudgementForm};
use crate::models::{doctrine_gcwf, function_values, heyting_sample, subobject_gcwf, Doctrine, HeytingFiberSpec, Subobject};

fn subobject() -> (Subobject, FunStructure) {
    let s = subobject_gcwf(2).unwrap();
    let fs = subobject_fun_structure(&s).unwrap();
    (s, fs)
}

fn heyting() -> (Doctrine, HeytingFiberSpec) {
    let (p, spec) = heyting_sample();
    (doctrine_gcwf(&p).unwrap(), spec)
}

fn truth(s: &Subobject, phi: Obj) -> Vec<usize> {
    function_values(s.gcwf.base(), s.slice.arrow[phi.index()])
}

fn subtypings(g: &Gcwf, ctx: Obj) -> Vec<Judgement> {
    enumerate_judgements(g, JudgementForm::Subtype, ctx, Filter::default())
}

#[test]
fn subobject_passes_both_stages() {
    let (_, fs) = subobject();
    let r = check_fun_structure(&fs);
    assert!(r.is_ok(), "{r}");
    assert!(r.entries.iter().any(|e| e.id == "stage2.pullback"));
}

#[test]
fn subobject_corner_and_lambda_domain_sizes() {
    let (s, fs) = subobject();
    let c = s.gcwf.base();
    // a set with k elements carries 2^k predicates; λ is defined on the 3^k pairs φ ≤ ψ
    let sizes: Vec<u32> = c.objects().map(|x| c.hom(x, s.omega).len().trailing_zeros()).collect();
    let pairs: usize = sizes.iter().map(|&k| 4usize.pow(k)).sum();
    let below: usize = sizes.iter().map(|&k| 3usize.pow(k)).sum();
    assert_eq!(fs.corner.total().object_count(), pairs);
    let (_, stage) = fs.stage_two();
    assert_eq!(stage.as_ref().unwrap().domain.objects.len(), below);
}

#[test]
fn subobject_fun_is_pointwise_implication() {
    let (s, fs) = subobject();
    for (&(phi, psi), &x) in &fs.fun_table {
        let want: Vec<usize> =
            truth(&s, phi).iter().zip(truth(&s, psi)).map(|(&p, q)| usize::from(p == 0 || q == 1)).collect();
        assert_eq!(truth(&s, x), want);
    }
}

#[test]
fn fun_subtyping_is_contravariant_then_covariant() {
    let (s, fs) = subobject();
    let g = &s.gcwf;
    let mut derived = 0;
    for ctx in g.base().objects() {
        let sts = subtypings(g, ctx);
        for st1 in &sts {
            for st2 in &sts {
                let out = derive_fun_subtyping(&fs, st1, st2).unwrap();
                let (
                    Judgement::Subtype { sub: a1, sup: a, .. },
                    Judgement::Subtype { sub: b, sup: b1, .. },
                    Judgement::Subtype { sub, sup, .. },
                ) = (*st1, *st2, out)
                else {
                    unreachable!()
                };
                assert_eq!(sub, fs.fun(a, b).unwrap());
                assert_eq!(sup, fs.fun(a1, b1).unwrap());
                derived += 1;
            }
        }
    }
    assert!(derived > 0);
}

#[test]
fn fun_subtyping_rejects_mixed_contexts() {
    let (s, fs) = subobject();
    let g = &s.gcwf;
    let a = subtypings(g, g.base().object("1").unwrap());
    let b = subtypings(g, g.base().object("2").unwrap());
    assert!(matches!(derive_fun_subtyping(&fs, &a[0], &b[0]), Err(Error::MismatchedJudgements(_))));
}

#[test]
fn lambda_typing_on_subobjects() {
    let (s, fs) = subobject();
    let g = &s.gcwf;
    let mut ok = 0;
    for phi in g.types().objects() {
        let (ext, proj) = g.context_extension(phi).unwrap();
        for psi in g.u.objects_over(g.u.over(phi)) {
            let weak = g.u.reindex_object(psi, proj).unwrap();
            let filter = Filter { ty: Some(weak), ..Filter::default() };
            for j in enumerate_judgements(g, JudgementForm::CoercedTerm, ext, filter) {
                let Ok(out) = derive_lam_typing(&fs, phi, psi, &j) else { continue };
                let Judgement::CoercedTerm { ctx, term, ty, .. } = out else { unreachable!() };
                assert_eq!(ctx, g.u.over(phi));
                assert_eq!(term, g.u.over(phi));
                assert_eq!(Some(ty), fs.fun(phi, psi));
                ok += 1;
            }
            // φ ≤ ψ pointwise gives a term of the weakened ψ coerced by the identity
            let below = truth(&s, phi).iter().zip(truth(&s, psi)).all(|(&p, q)| p == 0 || q == 1);
            let j = Judgement::CoercedTerm { ctx: ext, term: ext, witness: g.types().id(weak), ty: weak };
            assert_eq!(below, g.check_judgement(&j).is_ok());
            if below {
                assert!(derive_lam_typing(&fs, phi, psi, &j).is_ok());
            }
        }
    }
    assert!(ok > 0);
}

#[test]
fn heyting_fun_is_the_implication_table() {
    let (d, spec) = heyting();
    let fs = heyting_fun_structure(&d, &spec).unwrap();
    let u = &d.gcwf.u;
    for gamma in u.base().objects() {
        let fiber = u.fiber(gamma).unwrap();
        let h = &spec.fibers[gamma.index()];
        for i in 0..h.len() {
            for j in 0..h.len() {
                // the largest c with c ∧ a ≤ b
                let best = (0..h.len()).filter(|&c| h.leq[h.meet[c][i]][j]).fold(None, |acc: Option<usize>, c| match acc {
                    Some(m) if h.leq[c][m] => Some(m),
                    _ => Some(c),
                });
                let got = fs.fun(fiber.objects[i], fiber.objects[j]).unwrap();
                assert_eq!(Some(fiber.object_position(got).unwrap().index()), best);
            }
        }
    }
}

#[test]
fn heyting_doctrine_fails_only_the_pullback() {
    let (d, spec) = heyting();
    let fs = heyting_fun_structure(&d, &spec).unwrap();
    let r = check_fun_structure(&fs);
    let failed: Vec<&str> = r.failures().map(|e| e.id.as_str()).collect();
    assert_eq!(failed, ["stage2.pullback"], "{r}");
    let g = &d.gcwf;
    let a = g.types().objects().next().unwrap();
    let (ext, _) = g.context_extension(a).unwrap();
    let j = enumerate_judgements(g, JudgementForm::CoercedTerm, ext, Filter::default()).remove(0);
    assert!(matches!(derive_lam_typing(&fs, a, a, &j), Err(Error::StageTwoUnavailable(_))));
}

#[test]
fn covariant_meet_fails_stage_one() {
    let (d, spec) = heyting();
    let fs = covariant_meet_structure(&d, &spec).unwrap();
    let r = check_fun_structure(&fs);
    assert!(r.mentions("stage1.fun-morphisms"), "{r}");
    assert!(r.mentions("stage2.fun"));
}

#[test]
fn weakening_is_a_functor() {
    let s = subobject_gcwf(1).unwrap();
    let w = weakening_functor(&s.gcwf).unwrap();
    assert!(w.first.is_valid() && w.second.is_valid());
    assert_eq!(w.domain.object_count(), w.corner.total().object_count());
    // weakening a predicate along its own comprehension makes the pair true
    for o in w.domain.objects() {
        let (a, b) = w.corner.components(o);
        if a == b {
            let x = w.second.obj(o);
            assert!(function_values(s.gcwf.base(), s.slice.arrow[x.index()]).iter().all(|&v| v == 1));
        }
    }
}
