use rustc_hash::FxHashMap as HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::report::Report;

/// Index of an object inside its [`FinCategory`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Obj(pub u32);

/// Index of a morphism inside its [`FinCategory`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mor(pub u32);

impl Obj {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl Mor {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismData {
    pub name: String,
    pub dom: Obj,
    pub cod: Obj,
}

/// A finite category with a fully materialized composition table.
///
/// Identifiers are strings; their declaration order is the order used for every
/// deterministic tie-break (smallest id first).
#[derive(Clone)]
pub struct FinCategory {
    objects: Vec<String>,
    morphisms: Vec<MorphismData>,
    identities: Vec<Mor>,
    outgoing: Vec<Vec<Mor>>,
    incoming: Vec<Vec<Mor>>,
    out_pos: Vec<u32>,
    // composites[f][out_pos[g]] = g . f
    composites: Vec<Vec<u32>>,
    homs: HashMap<(Obj, Obj), Vec<Mor>>,
    object_index: HashMap<String, Obj>,
    morphism_index: HashMap<String, Mor>,
}

impl fmt::Debug for FinCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinCategory")
            .field("objects", &self.objects.len())
            .field("morphisms", &self.morphisms.len())
            .finish()
    }
}

impl PartialEq for FinCategory {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects
            && self.morphisms == other.morphisms
            && self.identities == other.identities
            && self.composites == other.composites
    }
}

impl Eq for FinCategory {}

/// Incremental construction of a [`FinCategory`] from identifiers.
#[derive(Debug, Default, Clone)]
pub struct CategoryBuilder {
    objects: Vec<String>,
    morphisms: Vec<MorphismData>,
    identities: Vec<Option<Mor>>,
    composites: Vec<(Mor, Mor, Mor)>,
    object_index: HashMap<String, Obj>,
    morphism_index: HashMap<String, Mor>,
    duplicate: Option<String>,
}

impl CategoryBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn object(&mut self, name: impl Into<String>) -> Obj {
        let name = name.into();
        let id = Obj(self.objects.len() as u32);
        if self.object_index.insert(name.clone(), id).is_some() {
            self.duplicate.get_or_insert(format!("duplicate object `{name}`"));
        }
        self.objects.push(name);
        self.identities.push(None);
        id
    }

    pub fn morphism(&mut self, name: impl Into<String>, dom: Obj, cod: Obj) -> Mor {
        let name = name.into();
        let id = Mor(self.morphisms.len() as u32);
        if self.morphism_index.insert(name.clone(), id).is_some() {
            self.duplicate.get_or_insert(format!("duplicate morphism `{name}`"));
        }
        self.morphisms.push(MorphismData { name, dom, cod });
        id
    }

    /// Declares an identity morphism named `name` on `obj`.
    pub fn identity(&mut self, obj: Obj, name: impl Into<String>) -> Mor {
        let m = self.morphism(name, obj, obj);
        self.identities[obj.index()] = Some(m);
        m
    }

    pub fn set_identity(&mut self, obj: Obj, m: Mor) {
        self.identities[obj.index()] = Some(m);
    }

    /// Records `g . f = gf`.
    pub fn compose(&mut self, g: Mor, f: Mor, gf: Mor) {
        self.composites.push((g, f, gf));
    }

    pub fn object_id(&self, name: &str) -> Option<Obj> {
        self.object_index.get(name).copied()
    }

    pub fn morphism_id(&self, name: &str) -> Option<Mor> {
        self.morphism_index.get(name).copied()
    }

    pub fn build(self) -> Result<FinCategory> {
        if let Some(d) = self.duplicate {
            return Err(Error::MalformedEntity(d));
        }
        let n_obj = self.objects.len();
        for m in &self.morphisms {
            if m.dom.index() >= n_obj || m.cod.index() >= n_obj {
                return Err(Error::MalformedEntity(format!(
                    "morphism `{}` references a missing object",
                    m.name
                )));
            }
        }
        let mut identities = Vec::with_capacity(n_obj);
        for (i, id) in self.identities.iter().enumerate() {
            match id {
                Some(m) if self.morphisms.get(m.index()).is_some_and(|d| {
                    d.dom.index() == i && d.cod.index() == i
                }) =>
                {
                    identities.push(*m)
                }
                Some(m) => {
                    return Err(Error::MalformedEntity(format!(
                        "identity of `{}` is not an endomorphism of it (morphism #{})",
                        self.objects[i], m.0
                    )))
                }
                None => {
                    return Err(Error::MalformedEntity(format!(
                        "object `{}` has no identity",
                        self.objects[i]
                    )))
                }
            }
        }
        let mut cat = FinCategory::skeleton(self.objects, self.morphisms, identities);
        for (g, f, gf) in self.composites {
            cat.insert_composite(g, f, gf)?;
        }
        Ok(cat)
    }
}

impl FinCategory {
    fn skeleton(objects: Vec<String>, morphisms: Vec<MorphismData>, identities: Vec<Mor>) -> Self {
        let n_obj = objects.len();
        let mut outgoing = vec![Vec::new(); n_obj];
        let mut incoming = vec![Vec::new(); n_obj];
        let mut out_pos = vec![0u32; morphisms.len()];
        let mut homs: HashMap<(Obj, Obj), Vec<Mor>> = HashMap::default();
        for (i, m) in morphisms.iter().enumerate() {
            let id = Mor(i as u32);
            out_pos[i] = outgoing[m.dom.index()].len() as u32;
            outgoing[m.dom.index()].push(id);
            incoming[m.cod.index()].push(id);
            homs.entry((m.dom, m.cod)).or_default().push(id);
        }
        let composites = morphisms
            .iter()
            .map(|m| vec![NONE; outgoing[m.cod.index()].len()])
            .collect();
        let object_index = objects
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), Obj(i as u32)))
            .collect();
        let morphism_index = morphisms
            .iter()
            .enumerate()
            .map(|(i, m)| (m.name.clone(), Mor(i as u32)))
            .collect();
        FinCategory {
            objects,
            morphisms,
            identities,
            outgoing,
            incoming,
            out_pos,
            composites,
            homs,
            object_index,
            morphism_index,
        }
    }

    fn insert_composite(&mut self, g: Mor, f: Mor, gf: Mor) -> Result<()> {
        let n = self.morphisms.len();
        if g.index() >= n || f.index() >= n || gf.index() >= n {
            return Err(Error::MalformedEntity("composition triple references a missing morphism".into()));
        }
        if self.cod(f) != self.dom(g) {
            return Err(Error::MalformedEntity(format!(
                "composition of non-composable pair ({}, {})",
                self.name(g),
                self.name(f)
            )));
        }
        let slot = &mut self.composites[f.index()][self.out_pos[g.index()] as usize];
        if *slot != NONE && *slot != gf.0 {
            return Err(Error::MalformedEntity(format!(
                "conflicting composites for ({}, {})",
                self.morphisms[g.index()].name,
                self.morphisms[f.index()].name
            )));
        }
        *slot = gf.0;
        Ok(())
    }

    /// Builds a category from indexed data, filling the composition table by calling
    /// `compose(g, f)` on every composable pair. `compose` returning `None` is an error.
    pub fn generate(
        objects: Vec<String>,
        morphisms: Vec<(String, Obj, Obj)>,
        identity: impl Fn(Obj) -> Mor,
        mut compose: impl FnMut(Mor, Mor) -> Option<Mor>,
    ) -> Result<Self> {
        let mut b = CategoryBuilder::new();
        for o in objects {
            b.object(o);
        }
        for (name, d, c) in morphisms {
            b.morphism(name, d, c);
        }
        for i in 0..b.objects.len() {
            let o = Obj(i as u32);
            b.set_identity(o, identity(o));
        }
        let mut cat = b.build()?;
        for f in 0..cat.morphisms.len() {
            let f = Mor(f as u32);
            let cod = cat.cod(f);
            for k in 0..cat.outgoing[cod.index()].len() {
                let g = cat.outgoing[cod.index()][k];
                let gf = compose(g, f).ok_or_else(|| {
                    Error::MalformedEntity(format!(
                        "composite of ({}, {}) is not a declared morphism",
                        cat.name(g),
                        cat.name(f)
                    ))
                })?;
                if cat.dom(gf) != cat.dom(f) || cat.cod(gf) != cat.cod(g) {
                    return Err(Error::MalformedEntity(format!(
                        "composite of ({}, {}) has the wrong boundary",
                        cat.name(g),
                        cat.name(f)
                    )));
                }
                cat.composites[f.index()][k] = gf.0;
            }
        }
        Ok(cat)
    }

    /// The category with one object `*` and its identity.
    pub fn terminal() -> Self {
        let mut b = CategoryBuilder::new();
        let o = b.object("*");
        let i = b.identity(o, "id_*");
        b.compose(i, i, i);
        b.build().expect("terminal category is well formed")
    }

    /// The category `0 -> 1` with a single non-identity arrow `a`.
    pub fn walking_arrow() -> Self {
        let mut b = CategoryBuilder::new();
        let s = b.object("0");
        let t = b.object("1");
        let i0 = b.identity(s, "id_0");
        let i1 = b.identity(t, "id_1");
        let a = b.morphism("a", s, t);
        b.compose(i0, i0, i0);
        b.compose(i1, i1, i1);
        b.compose(a, i0, a);
        b.compose(i1, a, a);
        b.build().expect("walking arrow is well formed")
    }

    /// The discrete category on the given object names.
    pub fn discrete<S: AsRef<str>>(names: &[S]) -> Self {
        let mut b = CategoryBuilder::new();
        for n in names {
            let o = b.object(n.as_ref());
            let i = b.identity(o, format!("id_{}", n.as_ref()));
            b.compose(i, i, i);
        }
        b.build().expect("discrete category is well formed")
    }

    /// The preorder category on `names` with an arrow `a<=b` whenever `leq(a, b)`.
    /// Fails unless `leq` is reflexive and transitive.
    pub fn poset<S: AsRef<str>>(names: &[S], leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let n = names.len();
        let mut morphisms = Vec::new();
        let mut index = HashMap::default();
        for i in 0..n {
            for j in 0..n {
                if leq(i, j) {
                    index.insert((i, j), Mor(morphisms.len() as u32));
                    morphisms.push((
                        format!("{}<={}", names[i].as_ref(), names[j].as_ref()),
                        Obj(i as u32),
                        Obj(j as u32),
                    ));
                }
            }
        }
        if (0..n).any(|i| !index.contains_key(&(i, i))) {
            return Err(Error::MalformedEntity("order relation is not reflexive".into()));
        }
        let ends: Vec<(usize, usize)> = morphisms.iter().map(|m| (m.1.index(), m.2.index())).collect();
        FinCategory::generate(
            names.iter().map(|s| s.as_ref().to_string()).collect(),
            morphisms,
            |o| index[&(o.index(), o.index())],
            |g, f| index.get(&(ends[f.index()].0, ends[g.index()].1)).copied(),
        )
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> impl Iterator<Item = Obj> + '_ {
        (0..self.objects.len() as u32).map(Obj)
    }

    pub fn morphisms(&self) -> impl Iterator<Item = Mor> + '_ {
        (0..self.morphisms.len() as u32).map(Mor)
    }

    pub fn object_name(&self, o: Obj) -> &str {
        &self.objects[o.index()]
    }

    pub fn name(&self, m: Mor) -> &str {
        &self.morphisms[m.index()].name
    }

    pub fn object_names(&self) -> &[String] {
        &self.objects
    }

    pub fn object_id(&self, name: &str) -> Option<Obj> {
        self.object_index.get(name).copied()
    }

    pub fn morphism_id(&self, name: &str) -> Option<Mor> {
        self.morphism_index.get(name).copied()
    }

    pub fn object(&self, name: &str) -> Result<Obj> {
        self.object_id(name).ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    pub fn morphism(&self, name: &str) -> Result<Mor> {
        self.morphism_id(name).ok_or_else(|| Error::UnknownMorphism(name.to_string()))
    }

    pub fn dom(&self, m: Mor) -> Obj {
        self.morphisms[m.index()].dom
    }

    pub fn cod(&self, m: Mor) -> Obj {
        self.morphisms[m.index()].cod
    }

    pub fn id(&self, o: Obj) -> Mor {
        self.identities[o.index()]
    }

    pub fn is_identity(&self, m: Mor) -> bool {
        self.id(self.dom(m)) == m
    }

    /// `g . f`, when the pair is composable and the table has an entry.
    pub fn compose(&self, g: Mor, f: Mor) -> Option<Mor> {
        if self.cod(f) != self.dom(g) {
            return None;
        }
        let r = self.composites[f.index()][self.out_pos[g.index()] as usize];
        (r != NONE).then_some(Mor(r))
    }

    /// `g . f`; panics on a non-composable pair. For internal use on validated categories.
    pub fn comp(&self, g: Mor, f: Mor) -> Mor {
        self.compose(g, f).unwrap_or_else(|| {
            panic!("({}, {}) is not composable", self.name(g), self.name(f))
        })
    }

    /// Composes a path given in application order: `path(&[h, g, f]) = h . g . f`.
    pub fn path(&self, ms: &[Mor]) -> Mor {
        let mut it = ms.iter().rev();
        let first = *it.next().expect("non-empty path");
        it.fold(first, |acc, &m| self.comp(m, acc))
    }

    pub fn hom(&self, a: Obj, b: Obj) -> &[Mor] {
        self.homs.get(&(a, b)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn outgoing(&self, a: Obj) -> &[Mor] {
        &self.outgoing[a.index()]
    }

    pub fn incoming(&self, a: Obj) -> &[Mor] {
        &self.incoming[a.index()]
    }

    /// Composition table as `(g, f, g.f)` triples in a fixed order.
    pub fn composition_triples(&self) -> Vec<(Mor, Mor, Mor)> {
        let mut out = Vec::new();
        for f in self.morphisms() {
            for (k, &g) in self.outgoing[self.cod(f).index()].iter().enumerate() {
                let r = self.composites[f.index()][k];
                if r != NONE {
                    out.push((g, f, Mor(r)));
                }
            }
        }
        out
    }

    /// Identity on positions: equal shape up to renaming of identifiers.
    pub fn same_shape(&self, other: &FinCategory) -> bool {
        self.objects.len() == other.objects.len()
            && self.morphisms.len() == other.morphisms.len()
            && self.identities == other.identities
            && self
                .morphisms
                .iter()
                .zip(&other.morphisms)
                .all(|(a, b)| a.dom == b.dom && a.cod == b.cod)
            && self.composites == other.composites
    }

    pub fn is_iso(&self, m: Mor) -> bool {
        self.inverse(m).is_some()
    }

    pub fn inverse(&self, m: Mor) -> Option<Mor> {
        self.hom(self.cod(m), self.dom(m)).iter().copied().find(|&n| {
            self.compose(n, m) == Some(self.id(self.dom(m)))
                && self.compose(m, n) == Some(self.id(self.cod(m)))
        })
    }

    pub fn is_monic(&self, m: Mor) -> bool {
        let a = self.dom(m);
        for x in self.objects() {
            let hs = self.hom(x, a);
            for (i, &f) in hs.iter().enumerate() {
                for &g in &hs[i + 1..] {
                    if self.compose(m, f) == self.compose(m, g) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Checks totality of the composition table, the identity laws, and associativity
    /// by exhaustive quantification. Failing entries name the offending tuples.
    pub fn validate(&self) -> Report {
        let mut r = Report::new("category");
        let mark = r.entries.len();
        for f in self.morphisms() {
            for &g in self.outgoing(self.cod(f)) {
                if self.compose(g, f).is_none() {
                    r.fail("totality", format!("({}, {}) has no composite", self.name(g), self.name(f)));
                }
            }
        }
        r.pass_unless_failed(mark, "totality", "");
        if !r.is_ok() {
            return r;
        }
        let mark = r.entries.len();
        for f in self.morphisms() {
            let left = self.id(self.cod(f));
            let right = self.id(self.dom(f));
            if self.compose(left, f) != Some(f) {
                r.fail("identity", format!("({}, {})", self.name(left), self.name(f)));
            }
            if self.compose(f, right) != Some(f) {
                r.fail("identity", format!("({}, {})", self.name(f), self.name(right)));
            }
        }
        r.pass_unless_failed(mark, "identity", "");
        let mark = r.entries.len();
        for f in self.morphisms() {
            for &g in self.outgoing(self.cod(f)) {
                let gf = self.comp(g, f);
                for &h in self.outgoing(self.cod(g)) {
                    if self.comp(h, gf) != self.comp(self.comp(h, g), f) {
                        r.fail(
                            "associativity",
                            format!("({}, {}, {})", self.name(h), self.name(g), self.name(f)),
                        );
                    }
                }
            }
        }
        r.pass_unless_failed(mark, "associativity", "");
        r
    }

    /// The opposite category; identifiers are kept, composition is reversed.
    pub fn opposite(&self) -> FinCategory {
        let morphisms = self
            .morphisms
            .iter()
            .map(|m| (m.name.clone(), m.cod, m.dom))
            .collect();
        FinCategory::generate(self.objects.clone(), morphisms, |o| self.id(o), |g, f| self.compose(f, g))
            .expect("opposite of a total category is total")
    }

    /// Full subcategory on the objects satisfying `keep`, with identifiers preserved.
    /// Returns the subcategory and the inclusion on morphisms.
    pub fn full_subcategory(&self, keep: impl Fn(Obj) -> bool) -> (FinCategory, Vec<Obj>, Vec<Mor>) {
        let objs: Vec<Obj> = self.objects().filter(|&o| keep(o)).collect();
        self.subcategory(&objs, |m| keep(self.dom(m)) && keep(self.cod(m)))
    }

    /// Subcategory on `objs` and the morphisms between them accepted by `keep_mor`.
    /// The caller guarantees closure under identities and composition.
    pub fn subcategory(
        &self,
        objs: &[Obj],
        keep_mor: impl Fn(Mor) -> bool,
    ) -> (FinCategory, Vec<Obj>, Vec<Mor>) {
        let mut obj_pos = vec![NONE; self.objects.len()];
        for (i, o) in objs.iter().enumerate() {
            obj_pos[o.index()] = i as u32;
        }
        let mors: Vec<Mor> = self
            .morphisms()
            .filter(|&m| {
                obj_pos[self.dom(m).index()] != NONE && obj_pos[self.cod(m).index()] != NONE && keep_mor(m)
            })
            .collect();
        let mut mor_pos = vec![NONE; self.morphisms.len()];
        for (i, m) in mors.iter().enumerate() {
            mor_pos[m.index()] = i as u32;
        }
        let sub = FinCategory::generate(
            objs.iter().map(|&o| self.object_name(o).to_string()).collect(),
            mors.iter()
                .map(|&m| {
                    (
                        self.name(m).to_string(),
                        Obj(obj_pos[self.dom(m).index()]),
                        Obj(obj_pos[self.cod(m).index()]),
                    )
                })
                .collect(),
            |o| Mor(mor_pos[self.id(objs[o.index()]).index()]),
            |g, f| {
                let r = self.compose(mors[g.index()], mors[f.index()])?;
                let p = mor_pos[r.index()];
                (p != NONE).then_some(Mor(p))
            },
        )
        .expect("subcategory closed under composition");
        (sub, objs.to_vec(), mors)
    }
}
