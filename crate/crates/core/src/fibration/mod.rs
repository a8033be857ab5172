//! Cartesian structure on functors between finite categories.
//!
//! A [`Fibration`] wraps a functor `p: E -> B`. Cartesianness of a morphism is decided by
//! enumerating every factorization problem of the defining diagram, and chosen lifts are
//! memoized into a cleavage. Both caches are write-once: the first value computed for a
//! key is the value every reader observes.

mod indexed;
mod product;

#[cfg(test)]
mod tests;

pub use indexed::{
    grothendieck, grothendieck_comparison, indexed_of, vertical_opposite, Grothendieck, GrothendieckMor, IndexedCategory,
};
pub use product::{fibred_product, Along, FibredProduct};

use rustc_hash::FxHashMap as HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{Error, Result};
use crate::fincat::{FinCategory, FinFunctor, Mor, Obj};
use crate::report::Report;

pub struct Fibration {
    functor: FinFunctor,
    cartesian: Vec<OnceLock<bool>>,
    cleavage: RwLock<HashMap<(Obj, Mor), Mor>>,
    split: bool,
}

impl fmt::Debug for Fibration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Fibration")
            .field("total", self.total())
            .field("base", self.base())
            .field("split", &self.split)
            .finish()
    }
}

impl Clone for Fibration {
    fn clone(&self) -> Self {
        let cartesian = self
            .cartesian
            .iter()
            .map(|c| {
                let n = OnceLock::new();
                if let Some(&v) = c.get() {
                    let _ = n.set(v);
                }
                n
            })
            .collect();
        Fibration {
            functor: self.functor.clone(),
            cartesian,
            cleavage: RwLock::new(self.cleavage.read().expect("cleavage lock").clone()),
            split: self.split,
        }
    }
}

/// Structural flags of a fibration, each decided by exhaustive search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub is_fibration: bool,
    pub split: bool,
    pub faithful: bool,
    pub discrete: bool,
}

/// The fiber over a base object: objects over it and vertical morphisms over its identity.
#[derive(Debug, Clone)]
pub struct Fiber {
    pub category: Arc<FinCategory>,
    /// Total-category object of each fiber object.
    pub objects: Vec<Obj>,
    /// Total-category morphism of each fiber morphism.
    pub morphisms: Vec<Mor>,
}

impl Fiber {
    pub fn object_position(&self, o: Obj) -> Option<Obj> {
        self.objects.iter().position(|&x| x == o).map(|i| Obj(i as u32))
    }

    pub fn morphism_position(&self, m: Mor) -> Option<Mor> {
        self.morphisms.iter().position(|&x| x == m).map(|i| Mor(i as u32))
    }
}

impl Fibration {
    /// A functor with no chosen lifts yet; lifts are searched on demand.
    pub fn new(functor: FinFunctor) -> Self {
        let n = functor.source().morphism_count();
        Fibration {
            functor,
            cartesian: (0..n).map(|_| OnceLock::new()).collect(),
            cleavage: RwLock::new(HashMap::default()),
            split: false,
        }
    }

    /// A functor with chosen lifts `(object, base arrow, lift)`. When `split` is set the
    /// cleavage is declared split; [`Fibration::validate`] verifies the claim.
    pub fn with_cleavage(
        functor: FinFunctor,
        lifts: impl IntoIterator<Item = (Obj, Mor, Mor)>,
        split: bool,
    ) -> Result<Self> {
        let mut fib = Fibration::new(functor);
        fib.split = split;
        {
            let mut table = fib.cleavage.write().expect("cleavage lock");
            for (a, sigma, s) in lifts {
                let e = fib.total();
                let b = fib.base();
                if s.index() >= e.morphism_count() || sigma.index() >= b.morphism_count() {
                    return Err(Error::MalformedEntity("cleavage entry references a missing morphism".into()));
                }
                if e.cod(s) != a || fib.functor.mor(s) != sigma || b.cod(sigma) != fib.functor.obj(a) {
                    return Err(Error::MalformedEntity(format!(
                        "cleavage entry `{}` does not lie over `{}` into `{}`",
                        e.name(s),
                        b.name(sigma),
                        e.object_name(a)
                    )));
                }
                table.insert((a, sigma), s);
            }
        }
        Ok(fib)
    }

    pub fn functor(&self) -> &FinFunctor {
        &self.functor
    }

    pub fn total(&self) -> &Arc<FinCategory> {
        self.functor.source()
    }

    pub fn base(&self) -> &Arc<FinCategory> {
        self.functor.target()
    }

    pub fn is_marked_split(&self) -> bool {
        self.split
    }

    pub fn over(&self, o: Obj) -> Obj {
        self.functor.obj(o)
    }

    pub fn over_mor(&self, m: Mor) -> Mor {
        self.functor.mor(m)
    }

    pub fn is_vertical(&self, m: Mor) -> bool {
        self.base().is_identity(self.functor.mor(m))
    }

    /// Objects of the total category lying over `gamma`.
    pub fn objects_over(&self, gamma: Obj) -> Vec<Obj> {
        self.total().objects().filter(|&o| self.over(o) == gamma).collect()
    }

    /// Vertical morphisms `a -> b`.
    pub fn vertical_hom(&self, a: Obj, b: Obj) -> Vec<Mor> {
        self.total().hom(a, b).iter().copied().filter(|&m| self.is_vertical(m)).collect()
    }

    /// Snapshot of the chosen lifts computed or supplied so far.
    pub fn cleavage_entries(&self) -> Vec<(Obj, Mor, Mor)> {
        let mut v: Vec<_> = self
            .cleavage
            .read()
            .expect("cleavage lock")
            .iter()
            .map(|(&(a, s), &l)| (a, s, l))
            .collect();
        v.sort();
        v
    }

    pub fn try_is_cartesian(&self, s: Mor) -> Result<bool> {
        if s.index() >= self.total().morphism_count() {
            return Err(Error::UnknownMorphism(format!("#{}", s.0)));
        }
        Ok(self.is_cartesian(s))
    }

    /// `s` is cartesian iff every `r` into `cod s` over `p(s) . tau` factors as `s . t`
    /// for exactly one `t` over `tau`.
    pub fn is_cartesian(&self, s: Mor) -> bool {
        *self.cartesian[s.index()].get_or_init(|| self.decide_cartesian(s))
    }

    fn decide_cartesian(&self, s: Mor) -> bool {
        let e = self.total();
        let b = self.base();
        let (src, tgt) = (e.dom(s), e.cod(s));
        let sigma = self.functor.mor(s);
        let theta = b.dom(sigma);
        let mut counts: HashMap<(Mor, Mor), u32> = HashMap::default();
        for c in e.objects() {
            counts.clear();
            for &t in e.hom(c, src) {
                *counts.entry((e.comp(s, t), self.functor.mor(t))).or_default() += 1;
            }
            let pc = self.over(c);
            for &r in e.hom(c, tgt) {
                let pr = self.functor.mor(r);
                for &tau in b.hom(pc, theta) {
                    if b.comp(sigma, tau) == pr && counts.get(&(r, tau)).copied().unwrap_or(0) != 1 {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Every `t` with `cart . t = r` and `p(t) = over`.
    pub fn fillers(&self, cart: Mor, r: Mor, over: Mor) -> Vec<Mor> {
        let e = self.total();
        e.hom(e.dom(r), e.dom(cart))
            .iter()
            .copied()
            .filter(|&t| self.functor.mor(t) == over && e.compose(cart, t) == Some(r))
            .collect()
    }

    /// The unique filler through a cartesian arrow, if it exists.
    pub fn fill(&self, cart: Mor, r: Mor, over: Mor) -> Option<Mor> {
        let f = self.fillers(cart, r, over);
        (f.len() == 1).then(|| f[0])
    }

    /// Chosen cartesian lift of `sigma` at `a`; searched (smallest id) and memoized if absent.
    pub fn cartesian_lift(&self, a: Obj, sigma: Mor) -> Result<Mor> {
        let b = self.base();
        if b.cod(sigma) != self.over(a) {
            return Err(Error::MalformedEntity(format!(
                "`{}` does not end at the base of `{}`",
                b.name(sigma),
                self.total().object_name(a)
            )));
        }
        if let Some(&s) = self.cleavage.read().expect("cleavage lock").get(&(a, sigma)) {
            return Ok(s);
        }
        let e = self.total();
        let found = e
            .incoming(a)
            .iter()
            .copied()
            .find(|&s| self.functor.mor(s) == sigma && self.is_cartesian(s))
            .ok_or_else(|| Error::NoLift { object: e.object_name(a).to_string(), base_morphism: b.name(sigma).to_string() })?;
        let mut table = self.cleavage.write().expect("cleavage lock");
        Ok(*table.entry((a, sigma)).or_insert(found))
    }

    /// Domain of the chosen lift: the reindexed object `sigma* a`.
    pub fn reindex_object(&self, a: Obj, sigma: Mor) -> Result<Obj> {
        Ok(self.total().dom(self.cartesian_lift(a, sigma)?))
    }

    /// Vertical/cartesian factorization `r = cartesian . vertical`, with the cartesian part
    /// the chosen lift of `p(r)`.
    pub fn factorize(&self, r: Mor) -> Result<(Mor, Mor)> {
        let e = self.total();
        let sigma = self.functor.mor(r);
        let c = self.cartesian_lift(e.cod(r), sigma)?;
        let id = self.base().id(self.over(e.dom(r)));
        let v = self.fill(c, r, id).ok_or_else(|| {
            Error::MalformedEntity(format!("no unique vertical filler for `{}`", e.name(r)))
        })?;
        Ok((v, c))
    }

    /// `sigma* f` for a vertical `f`: the unique vertical arrow between the reindexed
    /// endpoints commuting with the chosen lifts.
    pub fn reindex_vertical(&self, f: Mor, sigma: Mor) -> Result<Mor> {
        let e = self.total();
        if !self.is_vertical(f) {
            return Err(Error::MalformedEntity(format!("`{}` is not vertical", e.name(f))));
        }
        let top = self.cartesian_lift(e.cod(f), sigma)?;
        let bottom = self.cartesian_lift(e.dom(f), sigma)?;
        let r = e.comp(f, bottom);
        let id = self.base().id(self.base().dom(sigma));
        self.fill(top, r, id)
            .ok_or_else(|| Error::MalformedEntity(format!("no unique reindexing of `{}`", e.name(f))))
    }

    pub fn fiber(&self, gamma: Obj) -> Result<Fiber> {
        if gamma.index() >= self.base().object_count() {
            return Err(Error::UnknownObject(format!("#{}", gamma.0)));
        }
        let objs = self.objects_over(gamma);
        let id = self.base().id(gamma);
        let (category, objects, morphisms) = self.total().subcategory(&objs, |m| self.functor.mor(m) == id);
        Ok(Fiber { category: Arc::new(category), objects, morphisms })
    }

    /// Computes a chosen lift for every `(object, base arrow into its base)`.
    pub fn complete_cleavage(&self) -> Result<()> {
        let e = self.total();
        let b = self.base();
        for a in e.objects() {
            for &sigma in b.incoming(self.over(a)) {
                self.cartesian_lift(a, sigma)?;
            }
        }
        Ok(())
    }

    /// Violations of the split laws by the (completed) cleavage.
    pub fn split_violations(&self) -> Result<Vec<String>> {
        self.complete_cleavage()?;
        let e = self.total();
        let b = self.base();
        let mut out = Vec::new();
        for a in e.objects() {
            let ga = self.over(a);
            if self.cartesian_lift(a, b.id(ga))? != e.id(a) {
                out.push(format!("lift of identity at `{}` is not an identity", e.object_name(a)));
            }
            for &sigma in b.incoming(ga) {
                let upper = self.cartesian_lift(a, sigma)?;
                let mid = e.dom(upper);
                for &tau in b.incoming(b.dom(sigma)) {
                    let lower = self.cartesian_lift(mid, tau)?;
                    let whole = self.cartesian_lift(a, b.comp(sigma, tau))?;
                    if e.comp(upper, lower) != whole {
                        out.push(format!(
                            "lifts at `{}` of `{}` and `{}` do not compose to the chosen lift",
                            e.object_name(a),
                            b.name(sigma),
                            b.name(tau)
                        ));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn classify(&self) -> Classification {
        let is_fibration = self.complete_cleavage().is_ok();
        let split = is_fibration && self.split_violations().map(|v| v.is_empty()).unwrap_or(false);
        let e = self.total();
        let mut faithful = true;
        let mut discrete = true;
        for a in e.objects() {
            for b in e.objects() {
                if self.over(a) != self.over(b) {
                    continue;
                }
                let n = self.vertical_hom(a, b).len();
                if n > 1 {
                    faithful = false;
                }
                if n > 0 && a != b || n > 1 {
                    discrete = false;
                }
            }
        }
        Classification { is_fibration, split, faithful, discrete }
    }

    /// Functoriality of `p`, cartesianness of the supplied cleavage, and split laws when
    /// the cleavage is declared split.
    pub fn validate(&self) -> Report {
        let mut r = Report::new("fibration");
        r.absorb("functor", self.functor.validate());
        if !r.is_ok() {
            return r;
        }
        let mark = r.entries.len();
        for (a, sigma, s) in self.cleavage_entries() {
            if !self.is_cartesian(s) {
                r.fail(
                    "cleavage",
                    format!(
                        "lift `{}` of `{}` at `{}` is not cartesian",
                        self.total().name(s),
                        self.base().name(sigma),
                        self.total().object_name(a)
                    ),
                );
            }
        }
        r.pass_unless_failed(mark, "cleavage", "");
        if self.split {
            match self.split_violations() {
                Ok(v) if v.is_empty() => r.pass("split", ""),
                Ok(v) => v.into_iter().for_each(|d| r.fail("split", d)),
                Err(e) => r.fail("split", e.to_string()),
            }
        }
        r
    }
}

/// Checks that `h` is a morphism of fibrations: `q . h = p` and cartesian arrows are preserved.
pub fn check_fibration_morphism(h: &FinFunctor, from: &Fibration, to: &Fibration) -> Report {
    let mut r = Report::new("fibration-morphism");
    r.absorb("functor", h.validate());
    if !r.is_ok() {
        return r;
    }
    let e = from.total();
    let mark = r.entries.len();
    for o in e.objects() {
        if to.over(h.obj(o)) != from.over(o) {
            r.fail("over-base", e.object_name(o).to_string());
        }
    }
    for m in e.morphisms() {
        if to.over_mor(h.mor(m)) != from.over_mor(m) {
            r.fail("over-base", e.name(m).to_string());
        }
    }
    r.pass_unless_failed(mark, "over-base", "");
    let mark = r.entries.len();
    for m in e.morphisms() {
        if from.is_cartesian(m) && !to.is_cartesian(h.mor(m)) {
            r.fail("preserves-cartesian", e.name(m).to_string());
        }
    }
    r.pass_unless_failed(mark, "preserves-cartesian", "");
    r
}
