use std::sync::Arc;

use super::finset::finset_skeleton;
use crate::error::{Error, Result};
use crate::fibration::{grothendieck, Fibration, IndexedCategory};
use crate::fincat::{FinCategory, FinFunctor, Obj};
use crate::report::Report;

/// A finite Heyting algebra given by its order, meet, and implication tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeytingAlgebra {
    pub names: Vec<String>,
    pub leq: Vec<Vec<bool>>,
    pub meet: Vec<Vec<usize>>,
    pub imp: Vec<Vec<usize>>,
    pub top: usize,
}

impl HeytingAlgebra {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// The chain `0 < m < 1`.
    pub fn three_chain() -> Self {
        HeytingAlgebra {
            names: vec!["0".into(), "m".into(), "1".into()],
            leq: (0..3).map(|i| (0..3).map(|j| i <= j).collect()).collect(),
            meet: (0..3).map(|i| (0..3).map(|j| usize::min(i, j)).collect()).collect(),
            // a => b is 1 when a <= b, otherwise b
            imp: vec![vec![2, 2, 2], vec![0, 2, 2], vec![0, 1, 2]],
            top: 2,
        }
    }

    /// The four-element Boolean algebra `bot < a, b < top`.
    pub fn diamond() -> Self {
        // elements as bit sets: bot = 00, a = 01, b = 10, top = 11
        HeytingAlgebra {
            names: vec!["bot".into(), "a".into(), "b".into(), "top".into()],
            leq: (0..4).map(|i| (0..4).map(|j| i & j == i).collect()).collect(),
            meet: (0..4).map(|i| (0..4).map(|j| i & j).collect()).collect(),
            imp: (0..4).map(|i| (0..4).map(|j| (!i & 3) | j).collect()).collect(),
            top: 3,
        }
    }

    pub fn category(&self) -> Result<FinCategory> {
        FinCategory::poset(&self.names, |i, j| self.leq[i][j])
    }

    /// Meets are greatest lower bounds, `top` is greatest, and `c <= (a => b)` iff `c ∧ a <= b`.
    pub fn validate(&self) -> Report {
        let n = self.len();
        let mut r = Report::new("heyting");
        let mark = r.entries.len();
        for a in 0..n {
            if !self.leq[a][self.top] {
                r.fail("top", self.names[a].clone());
            }
            for b in 0..n {
                let m = self.meet[a][b];
                let glb = self.leq[m][a]
                    && self.leq[m][b]
                    && (0..n).all(|c| !(self.leq[c][a] && self.leq[c][b]) || self.leq[c][m]);
                if !glb {
                    r.fail("meet", format!("{} ∧ {}", self.names[a], self.names[b]));
                }
                for c in 0..n {
                    if self.leq[c][self.imp[a][b]] != self.leq[self.meet[c][a]][b] {
                        r.fail(
                            "implication",
                            format!("{} ≤ ({} ⇒ {})", self.names[c], self.names[a], self.names[b]),
                        );
                    }
                }
            }
        }
        r.pass_unless_failed(mark, "top", "");
        r.pass_unless_failed(mark, "meet", "");
        r.pass_unless_failed(mark, "implication", "");
        r
    }
}

/// Finite Heyting fibers over a base with structure-preserving reindexing maps.
#[derive(Debug, Clone)]
pub struct HeytingFiberSpec {
    pub base: Arc<FinCategory>,
    pub fibers: Vec<HeytingAlgebra>,
    /// Object map of the reindexing along each base arrow, from the fiber over its
    /// codomain to the fiber over its domain.
    pub reindex: Vec<Vec<usize>>,
}

impl HeytingFiberSpec {
    pub fn validate(&self) -> Report {
        let mut r = Report::new("heyting-fibers");
        for (i, h) in self.fibers.iter().enumerate() {
            r.absorb(self.base.object_name(Obj(i as u32)), h.validate());
        }
        let mark = r.entries.len();
        for s in self.base.morphisms() {
            let (src, tgt) = (&self.fibers[self.base.cod(s).index()], &self.fibers[self.base.dom(s).index()]);
            let f = &self.reindex[s.index()];
            let name = self.base.name(s);
            if f[src.top] != tgt.top {
                r.fail("reindex", format!("{name} moves top"));
            }
            for a in 0..src.len() {
                for b in 0..src.len() {
                    if src.leq[a][b] && !tgt.leq[f[a]][f[b]] {
                        r.fail("reindex", format!("{name} is not monotone"));
                    }
                    if f[src.meet[a][b]] != tgt.meet[f[a]][f[b]] {
                        r.fail("reindex", format!("{name} does not preserve ∧"));
                    }
                    if f[src.imp[a][b]] != tgt.imp[f[a]][f[b]] {
                        r.fail("reindex", format!("{name} does not preserve ⇒"));
                    }
                }
            }
        }
        r.pass_unless_failed(mark, "reindex", "");
        r
    }

    pub fn indexed(&self) -> Result<IndexedCategory> {
        let cats: Vec<Arc<FinCategory>> =
            self.fibers.iter().map(|h| h.category().map(Arc::new)).collect::<Result<_>>()?;
        let b = &self.base;
        let reindex = b
            .morphisms()
            .map(|s| {
                let map = self.reindex[s.index()].iter().map(|&i| Obj(i as u32)).collect();
                FinFunctor::into_thin(cats[b.cod(s).index()].clone(), cats[b.dom(s).index()].clone(), map)
            })
            .collect::<Result<_>>()?;
        IndexedCategory::new(b.clone(), cats, reindex)
    }
}

/// Contexts `x0, x1, x2` (variable lists of length 0, 1, 2): the opposite of the finite sets
/// `{0, 1, 2}`, so an arrow `x_n -> x_m` substitutes variables of `x_n` for those of `x_m`.
pub fn context_category() -> FinCategory {
    let op = finset_skeleton(2).expect("small skeleton").opposite();
    let morphisms = op
        .morphisms()
        .map(|m| {
            // the finite-set function `m>n:vals` becomes the substitution `x_n -> x_m`
            let name = op.name(m);
            let vals = name.split(':').nth(1).unwrap_or("");
            let subst: Vec<String> = vals.chars().map(|v| format!("v{v}")).collect();
            (
                format!("x{}>x{}[{}]", op.object_name(op.dom(m)), op.object_name(op.cod(m)), subst.join(",")),
                op.dom(m),
                op.cod(m),
            )
        })
        .collect();
    FinCategory::generate(
        op.objects().map(|o| format!("x{}", op.object_name(o))).collect(),
        morphisms,
        |o| op.id(o),
        |g, f| op.compose(g, f),
    )
    .expect("renamed copy of a valid category")
}

/// The finite Lindenbaum–Tarski stand-in: a 3-chain over the empty context and a diamond
/// over the others; substitution out of the empty context sends `m` to `top`.
pub fn heyting_spec() -> HeytingFiberSpec {
    let base = Arc::new(context_category());
    let fibers: Vec<HeytingAlgebra> = base
        .objects()
        .map(|o| if o.index() == 0 { HeytingAlgebra::three_chain() } else { HeytingAlgebra::diamond() })
        .collect();
    let reindex = base
        .morphisms()
        .map(|s| {
            let (d, c) = (base.dom(s).index(), base.cod(s).index());
            if c == 0 && d != 0 {
                vec![0, 3, 3]
            } else {
                (0..fibers[c].len()).collect()
            }
        })
        .collect();
    HeytingFiberSpec { base, fibers, reindex }
}

/// The sample faithful split fibration with its fiber tables.
pub fn heyting_sample() -> (Fibration, HeytingFiberSpec) {
    let spec = heyting_spec();
    let g = grothendieck(&spec.indexed().expect("sample tables are consistent")).expect("sample is strict");
    (g.fibration, spec)
}

/// A single `k`-element chain over the terminal context.
pub fn chain_fibration(k: usize) -> Result<Fibration> {
    if k == 0 {
        return Err(Error::MalformedEntity("empty chain".into()));
    }
    let names: Vec<String> = (0..k).map(|i| format!("c{i}")).collect();
    let fiber = Arc::new(FinCategory::poset(&names, |i, j| i <= j)?);
    let base = Arc::new(FinCategory::terminal());
    let ic = IndexedCategory::new(base, vec![fiber.clone()], vec![FinFunctor::identity(fiber)])?;
    Ok(grothendieck(&ic)?.fibration)
}
