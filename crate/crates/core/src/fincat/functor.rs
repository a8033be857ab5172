use std::sync::Arc;

use super::category::{FinCategory, Mor, Obj};
use crate::error::{Error, Result};
use crate::report::Report;

/// A functor between finite categories, given by its object and morphism maps.
#[derive(Debug, Clone)]
pub struct FinFunctor {
    source: Arc<FinCategory>,
    target: Arc<FinCategory>,
    object_map: Vec<Obj>,
    morphism_map: Vec<Mor>,
}

fn same_category(a: &Arc<FinCategory>, b: &Arc<FinCategory>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl PartialEq for FinFunctor {
    fn eq(&self, other: &Self) -> bool {
        self.object_map == other.object_map
            && self.morphism_map == other.morphism_map
            && same_category(&self.source, &other.source)
            && same_category(&self.target, &other.target)
    }
}

impl FinFunctor {
    pub fn new(
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        object_map: Vec<Obj>,
        morphism_map: Vec<Mor>,
    ) -> Result<Self> {
        if object_map.len() != source.object_count() || morphism_map.len() != source.morphism_count() {
            return Err(Error::MalformedEntity("functor maps do not cover the source".into()));
        }
        if object_map.iter().any(|o| o.index() >= target.object_count())
            || morphism_map.iter().any(|m| m.index() >= target.morphism_count())
        {
            return Err(Error::MalformedEntity("functor maps into missing target entities".into()));
        }
        Ok(FinFunctor { source, target, object_map, morphism_map })
    }

    /// Builds a functor from a morphism map alone; objects follow identities.
    pub fn from_morphisms(
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        morphism_map: Vec<Mor>,
    ) -> Result<Self> {
        if morphism_map.len() != source.morphism_count() {
            return Err(Error::MalformedEntity("functor maps do not cover the source".into()));
        }
        let object_map = source
            .objects()
            .map(|o| target.dom(morphism_map[source.id(o).index()]))
            .collect();
        FinFunctor::new(source, target, object_map, morphism_map)
    }

    /// Builds a functor into a thin category from its object map alone.
    pub fn into_thin(source: Arc<FinCategory>, target: Arc<FinCategory>, object_map: Vec<Obj>) -> Result<Self> {
        if object_map.len() != source.object_count() || object_map.iter().any(|o| o.index() >= target.object_count()) {
            return Err(Error::MalformedEntity("functor maps do not cover the source".into()));
        }
        let mut morphism_map = Vec::with_capacity(source.morphism_count());
        for m in source.morphisms() {
            let (a, b) = (object_map[source.dom(m).index()], object_map[source.cod(m).index()]);
            let h = target.hom(a, b);
            if h.len() != 1 {
                return Err(Error::MalformedEntity(format!(
                    "`{}` has no unique image between `{}` and `{}`",
                    source.name(m),
                    target.object_name(a),
                    target.object_name(b)
                )));
            }
            morphism_map.push(h[0]);
        }
        FinFunctor::new(source, target, object_map, morphism_map)
    }

    pub fn identity(c: Arc<FinCategory>) -> Self {
        let object_map = c.objects().collect();
        let morphism_map = c.morphisms().collect();
        FinFunctor { source: c.clone(), target: c, object_map, morphism_map }
    }

    pub fn source(&self) -> &Arc<FinCategory> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinCategory> {
        &self.target
    }

    pub fn obj(&self, o: Obj) -> Obj {
        self.object_map[o.index()]
    }

    pub fn mor(&self, m: Mor) -> Mor {
        self.morphism_map[m.index()]
    }

    pub fn object_map(&self) -> &[Obj] {
        &self.object_map
    }

    pub fn morphism_map(&self) -> &[Mor] {
        &self.morphism_map
    }

    /// `other . self`.
    pub fn then(&self, other: &FinFunctor) -> Result<FinFunctor> {
        if !same_category(&self.target, &other.source) {
            return Err(Error::MismatchedBase("functors are not composable".into()));
        }
        Ok(FinFunctor {
            source: self.source.clone(),
            target: other.target.clone(),
            object_map: self.object_map.iter().map(|&o| other.obj(o)).collect(),
            morphism_map: self.morphism_map.iter().map(|&m| other.mor(m)).collect(),
        })
    }

    /// Same maps over a different (equal) target; used after a category is rebuilt.
    pub fn retarget(&self, target: Arc<FinCategory>) -> FinFunctor {
        FinFunctor { target, ..self.clone() }
    }

    pub fn validate(&self) -> Report {
        let s = &self.source;
        let t = &self.target;
        let mut r = Report::new("functor");
        let mark = r.entries.len();
        for m in s.morphisms() {
            let fm = self.mor(m);
            if t.dom(fm) != self.obj(s.dom(m)) || t.cod(fm) != self.obj(s.cod(m)) {
                r.fail("boundary", s.name(m).to_string());
            }
        }
        r.pass_unless_failed(mark, "boundary", "");
        if !r.is_ok() {
            return r;
        }
        let mark = r.entries.len();
        for o in s.objects() {
            if self.mor(s.id(o)) != t.id(self.obj(o)) {
                r.fail("identity", s.object_name(o).to_string());
            }
        }
        r.pass_unless_failed(mark, "identity", "");
        let mark = r.entries.len();
        for (g, f, gf) in s.composition_triples() {
            if t.compose(self.mor(g), self.mor(f)) != Some(self.mor(gf)) {
                r.fail("composition", format!("({}, {})", s.name(g), s.name(f)));
            }
        }
        r.pass_unless_failed(mark, "composition", "");
        r
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// Bijective on objects and on morphisms.
    pub fn is_isomorphism(&self) -> bool {
        fn bijective(map: &[usize], n: usize) -> bool {
            if map.len() != n {
                return false;
            }
            let mut seen = vec![false; n];
            for &i in map {
                if seen[i] {
                    return false;
                }
                seen[i] = true;
            }
            true
        }
        let objs: Vec<usize> = self.object_map.iter().map(|o| o.index()).collect();
        let mors: Vec<usize> = self.morphism_map.iter().map(|m| m.index()).collect();
        bijective(&objs, self.target.object_count()) && bijective(&mors, self.target.morphism_count())
    }

    /// Faithful: injective on every hom-set.
    pub fn is_faithful(&self) -> bool {
        let s = &self.source;
        for a in s.objects() {
            for b in s.objects() {
                let mut images: Vec<Mor> = s.hom(a, b).iter().map(|&m| self.mor(m)).collect();
                images.sort();
                if images.windows(2).any(|w| w[0] == w[1]) {
                    return false;
                }
            }
        }
        true
    }
}

/// A natural transformation between two parallel functors.
#[derive(Debug, Clone)]
pub struct NatTransformation {
    source: FinFunctor,
    target: FinFunctor,
    components: Vec<Mor>,
}

impl NatTransformation {
    pub fn new(source: FinFunctor, target: FinFunctor, components: Vec<Mor>) -> Result<Self> {
        if !same_category(source.source(), target.source()) || !same_category(source.target(), target.target()) {
            return Err(Error::MalformedEntity("transformation between non-parallel functors".into()));
        }
        if components.len() != source.source().object_count()
            || components.iter().any(|m| m.index() >= source.target().morphism_count())
        {
            return Err(Error::MalformedEntity("transformation components do not cover the source".into()));
        }
        Ok(NatTransformation { source, target, components })
    }

    pub fn source(&self) -> &FinFunctor {
        &self.source
    }

    pub fn target(&self) -> &FinFunctor {
        &self.target
    }

    pub fn at(&self, o: Obj) -> Mor {
        self.components[o.index()]
    }

    pub fn components(&self) -> &[Mor] {
        &self.components
    }

    pub fn validate(&self) -> Report {
        let c = self.source.source();
        let d = self.source.target();
        let mut r = Report::new("transformation");
        let mark = r.entries.len();
        for o in c.objects() {
            let a = self.at(o);
            if d.dom(a) != self.source.obj(o) || d.cod(a) != self.target.obj(o) {
                r.fail("component", c.object_name(o).to_string());
            }
        }
        r.pass_unless_failed(mark, "component", "");
        if !r.is_ok() {
            return r;
        }
        let mark = r.entries.len();
        for m in c.morphisms() {
            let lhs = d.compose(self.target.mor(m), self.at(c.dom(m)));
            let rhs = d.compose(self.at(c.cod(m)), self.source.mor(m));
            if lhs.is_none() || lhs != rhs {
                r.fail("naturality", c.name(m).to_string());
            }
        }
        r.pass_unless_failed(mark, "naturality", "");
        r
    }
}
