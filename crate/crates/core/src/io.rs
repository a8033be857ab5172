//! JSON model files: named categories, functors, transformations, fibrations, gcwfs and
//! function-type structures, cross-referenced by name.
//!
//! Maps are written in key order and lists in declaration order, so a file written by
//! [`Model::to_json`] reads back and writes out to the same bytes.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::Error;
use crate::fibration::Fibration;
use crate::fincat::{CategoryBuilder, FinCategory, FinFunctor, Mor, NatTransformation, Obj};
use crate::funty::FunStructure;
use crate::gcwf::Gcwf;
use crate::report::Report;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("cannot read `{path}`: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{entity} fails validation")]
    Invalid { entity: String, report: Report },
}

impl From<serde_json::Error> for ModelError {
    fn from(e: serde_json::Error) -> Self {
        ModelError::Parse(e.to_string())
    }
}

fn parse(what: impl Into<String>) -> ModelError {
    ModelError::Parse(what.into())
}

fn entity(name: &str) -> impl Fn(Error) -> ModelError + '_ {
    move |e| parse(format!("{name}: {e}"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub version: u32,
    #[serde(default)]
    pub categories: BTreeMap<String, CategoryFile>,
    #[serde(default)]
    pub functors: BTreeMap<String, FunctorFile>,
    #[serde(default)]
    pub transformations: BTreeMap<String, TransformationFile>,
    #[serde(default)]
    pub fibrations: BTreeMap<String, FibrationFile>,
    #[serde(default)]
    pub gcwfs: BTreeMap<String, GcwfFile>,
    #[serde(default)]
    pub fun_structures: BTreeMap<String, FunStructureFile>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismFile {
    pub name: String,
    pub dom: String,
    pub cod: String,
}

/// Composition triples `[g, f, g.f]`; composites with an identity are implied.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryFile {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismFile>,
    pub identities: BTreeMap<String, String>,
    pub composition: Vec<[String; 3]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorFile {
    pub source: String,
    pub target: String,
    pub objects: BTreeMap<String, String>,
    pub morphisms: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformationFile {
    pub source: String,
    pub target: String,
    pub components: BTreeMap<String, String>,
}

/// Cleavage entries are `[object, base morphism, lift]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FibrationFile {
    pub functor: String,
    pub split: bool,
    pub cleavage: Vec<[String; 3]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GcwfFile {
    pub types: String,
    pub terms: String,
    pub sigma: String,
    pub delta: String,
    pub eta: String,
    pub eps: String,
}

/// `fun` rows are `[A, B, Fun(A, B)]`, `lam` rows `[A, B, b, λ]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunStructureFile {
    pub gcwf: String,
    pub fun: Vec<[String; 3]>,
    pub lam: Vec<[String; 4]>,
}

#[derive(Debug, Clone)]
pub struct FunctorEntry {
    pub source: String,
    pub target: String,
    pub functor: FinFunctor,
}

#[derive(Debug, Clone)]
pub struct TransformationEntry {
    pub source: String,
    pub target: String,
    pub transformation: NatTransformation,
}

#[derive(Debug, Clone)]
pub struct FibrationEntry {
    pub functor: String,
    pub fibration: Fibration,
}

#[derive(Debug, Clone)]
pub struct GcwfEntry {
    pub file: GcwfFile,
    pub gcwf: Gcwf,
}

#[derive(Debug, Clone)]
pub struct FunStructureEntry {
    pub gcwf: String,
    pub structure: FunStructure,
}

/// A model file with every reference resolved and every entity validated.
#[derive(Debug, Clone, Default)]
pub struct Model {
    pub categories: BTreeMap<String, Arc<FinCategory>>,
    pub functors: BTreeMap<String, FunctorEntry>,
    pub transformations: BTreeMap<String, TransformationEntry>,
    pub fibrations: BTreeMap<String, FibrationEntry>,
    pub gcwfs: BTreeMap<String, GcwfEntry>,
    pub fun_structures: BTreeMap<String, FunStructureEntry>,
}

pub fn load_model(path: impl AsRef<Path>) -> Result<Model, ModelError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|source| ModelError::Io { path: path.display().to_string(), source })?;
    Model::from_json(&text)
}

pub fn save_model(model: &Model, path: impl AsRef<Path>) -> Result<(), ModelError> {
    let path = path.as_ref();
    std::fs::write(path, model.to_json())
        .map_err(|source| ModelError::Io { path: path.display().to_string(), source })
}

fn lookup<'a, T>(map: &'a BTreeMap<String, T>, kind: &str, name: &str) -> Result<&'a T, ModelError> {
    map.get(name).ok_or_else(|| parse(format!("unknown {kind} `{name}`")))
}

fn obj(c: &FinCategory, owner: &str, name: &str) -> Result<Obj, ModelError> {
    c.object_id(name).ok_or_else(|| parse(format!("{owner}: unknown object `{name}`")))
}

fn mor(c: &FinCategory, owner: &str, name: &str) -> Result<Mor, ModelError> {
    c.morphism_id(name).ok_or_else(|| parse(format!("{owner}: unknown morphism `{name}`")))
}

fn require(entity: &str, report: Report) -> Result<(), ModelError> {
    if report.is_ok() {
        Ok(())
    } else {
        Err(ModelError::Invalid { entity: entity.to_string(), report })
    }
}

fn full_map<T: Copy>(
    owner: &str,
    what: &str,
    count: usize,
    names: impl Fn(usize) -> String,
    entries: impl Iterator<Item = Result<(usize, T), ModelError>>,
) -> Result<Vec<T>, ModelError> {
    let mut out: Vec<Option<T>> = vec![None; count];
    for e in entries {
        let (i, v) = e?;
        out[i] = Some(v);
    }
    out.into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| parse(format!("{owner}: no image of {what} `{}`", names(i)))))
        .collect()
}

fn read_category(name: &str, f: &CategoryFile) -> Result<FinCategory, ModelError> {
    let mut b = CategoryBuilder::new();
    for o in &f.objects {
        b.object(o.clone());
    }
    for m in &f.morphisms {
        let d = b.object_id(&m.dom).ok_or_else(|| parse(format!("{name}: unknown object `{}`", m.dom)))?;
        let c = b.object_id(&m.cod).ok_or_else(|| parse(format!("{name}: unknown object `{}`", m.cod)))?;
        b.morphism(m.name.clone(), d, c);
    }
    let find = |b: &CategoryBuilder, m: &str| {
        b.morphism_id(m).ok_or_else(|| parse(format!("{name}: unknown morphism `{m}`")))
    };
    let mut ids = BTreeMap::new();
    for (o, m) in &f.identities {
        let oid = b.object_id(o).ok_or_else(|| parse(format!("{name}: unknown object `{o}`")))?;
        let mid = find(&b, m)?;
        b.set_identity(oid, mid);
        ids.insert(oid, mid);
    }
    for [g, f2, gf] in &f.composition {
        let (g, f2, gf) = (find(&b, g)?, find(&b, f2)?, find(&b, gf)?);
        b.compose(g, f2, gf);
    }
    // identity laws are implied
    for (i, m) in f.morphisms.iter().enumerate() {
        let (d, c) = (b.object_id(&m.dom).expect("checked"), b.object_id(&m.cod).expect("checked"));
        let me = Mor(i as u32);
        if let (Some(&idd), Some(&idc)) = (ids.get(&d), ids.get(&c)) {
            b.compose(me, idd, me);
            b.compose(idc, me, me);
        }
    }
    let c = b.build().map_err(entity(name))?;
    require(name, c.validate())?;
    Ok(c)
}

fn read_functor(name: &str, f: &FunctorFile, cats: &BTreeMap<String, Arc<FinCategory>>) -> Result<FinFunctor, ModelError> {
    let s = lookup(cats, "category", &f.source)?.clone();
    let t = lookup(cats, "category", &f.target)?.clone();
    let objs = full_map(
        name,
        "object",
        s.object_count(),
        |i| s.object_name(Obj(i as u32)).to_string(),
        f.objects.iter().map(|(a, b)| Ok((obj(&s, name, a)?.index(), obj(&t, name, b)?))),
    )?;
    let mors = full_map(
        name,
        "morphism",
        s.morphism_count(),
        |i| s.name(Mor(i as u32)).to_string(),
        f.morphisms.iter().map(|(a, b)| Ok((mor(&s, name, a)?.index(), mor(&t, name, b)?))),
    )?;
    let func = FinFunctor::new(s, t, objs, mors).map_err(entity(name))?;
    require(name, func.validate())?;
    Ok(func)
}

impl Model {
    pub fn from_json(text: &str) -> Result<Model, ModelError> {
        let file: ModelFile = serde_json::from_str(text)?;
        Model::from_file(&file)
    }

    pub fn from_file(file: &ModelFile) -> Result<Model, ModelError> {
        if file.version != FORMAT_VERSION {
            return Err(parse(format!("unsupported format version {}", file.version)));
        }
        let mut m = Model::default();
        for (name, c) in &file.categories {
            m.categories.insert(name.clone(), Arc::new(read_category(name, c)?));
        }
        for (name, f) in &file.functors {
            let functor = read_functor(name, f, &m.categories)?;
            m.functors.insert(name.clone(), FunctorEntry { source: f.source.clone(), target: f.target.clone(), functor });
        }
        for (name, t) in &file.transformations {
            let s = lookup(&m.functors, "functor", &t.source)?.functor.clone();
            let g = lookup(&m.functors, "functor", &t.target)?.functor.clone();
            let (c, d) = (s.source().clone(), s.target().clone());
            let comps = full_map(
                name,
                "object",
                c.object_count(),
                |i| c.object_name(Obj(i as u32)).to_string(),
                t.components.iter().map(|(a, b)| Ok((obj(&c, name, a)?.index(), mor(&d, name, b)?))),
            )?;
            let nt = NatTransformation::new(s, g, comps).map_err(entity(name))?;
            require(name, nt.validate())?;
            m.transformations.insert(
                name.clone(),
                TransformationEntry { source: t.source.clone(), target: t.target.clone(), transformation: nt },
            );
        }
        for (name, f) in &file.fibrations {
            let functor = lookup(&m.functors, "functor", &f.functor)?.functor.clone();
            let (e, b) = (functor.source().clone(), functor.target().clone());
            let lifts = f
                .cleavage
                .iter()
                .map(|[a, s, l]| Ok((obj(&e, name, a)?, mor(&b, name, s)?, mor(&e, name, l)?)))
                .collect::<Result<Vec<_>, ModelError>>()?;
            let fib = Fibration::with_cleavage(functor, lifts, f.split).map_err(entity(name))?;
            require(name, fib.validate())?;
            m.fibrations.insert(name.clone(), FibrationEntry { functor: f.functor.clone(), fibration: fib });
        }
        for (name, g) in &file.gcwfs {
            let u = lookup(&m.fibrations, "fibration", &g.types)?.fibration.clone();
            let udot = lookup(&m.fibrations, "fibration", &g.terms)?.fibration.clone();
            let sigma = lookup(&m.functors, "functor", &g.sigma)?.functor.clone();
            let delta = lookup(&m.functors, "functor", &g.delta)?.functor.clone();
            let eta = lookup(&m.transformations, "transformation", &g.eta)?.transformation.clone();
            let eps = lookup(&m.transformations, "transformation", &g.eps)?.transformation.clone();
            let ds = sigma.then(&delta).map_err(entity(name))?;
            let sd = delta.then(&sigma).map_err(entity(name))?;
            let same = |a: &FinFunctor, b: &FinFunctor| a.object_map() == b.object_map() && a.morphism_map() == b.morphism_map();
            if !same(eta.source(), &FinFunctor::identity(udot.total().clone())) || !same(eta.target(), &ds) {
                return Err(parse(format!("{name}: `{}` is not a transformation id -> ΔΣ", g.eta)));
            }
            if !same(eps.source(), &sd) || !same(eps.target(), &FinFunctor::identity(u.total().clone())) {
                return Err(parse(format!("{name}: `{}` is not a transformation ΣΔ -> id", g.eps)));
            }
            let gcwf = Gcwf::new(u, udot, sigma, delta, eta.components().to_vec(), eps.components().to_vec())
                .map_err(entity(name))?;
            m.gcwfs.insert(name.clone(), GcwfEntry { file: g.clone(), gcwf });
        }
        for (name, s) in &file.fun_structures {
            let g = &lookup(&m.gcwfs, "gcwf", &s.gcwf)?.gcwf;
            let (e, ed) = (g.types(), g.terms());
            let mut fun = BTreeMap::new();
            for [a, b, f] in &s.fun {
                fun.insert((obj(e, name, a)?, obj(e, name, b)?), obj(e, name, f)?);
            }
            let mut lam = BTreeMap::new();
            for [a, b, t, l] in &s.lam {
                lam.insert((obj(e, name, a)?, obj(e, name, b)?, obj(ed, name, t)?), obj(ed, name, l)?);
            }
            let structure = FunStructure::new(g, fun, lam).map_err(entity(name))?;
            m.fun_structures.insert(name.clone(), FunStructureEntry { gcwf: s.gcwf.clone(), structure });
        }
        Ok(m)
    }

    pub fn add_category(&mut self, name: &str, c: Arc<FinCategory>) {
        self.categories.insert(name.to_string(), c);
    }

    pub fn add_functor(&mut self, name: &str, source: &str, target: &str, f: FinFunctor) {
        self.functors.insert(
            name.to_string(),
            FunctorEntry { source: source.to_string(), target: target.to_string(), functor: f },
        );
    }

    /// Adds `p` as `name` with categories `name.total` and `base`.
    pub fn add_fibration(&mut self, name: &str, base: &str, p: &Fibration) {
        let total = format!("{name}.total");
        self.add_category(&total, p.total().clone());
        self.add_category(base, p.base().clone());
        self.add_functor(name, &total, base, p.functor().clone());
        self.fibrations.insert(name.to_string(), FibrationEntry { functor: name.to_string(), fibration: p.clone() });
    }

    /// Adds `g` as `name` together with its base, fibrations, functors and transformations.
    pub fn add_gcwf(&mut self, name: &str, g: &Gcwf) {
        let base = format!("{name}.base");
        let (types, terms) = (format!("{name}.types"), format!("{name}.terms"));
        self.add_fibration(&types, &base, &g.u);
        self.add_fibration(&terms, &base, &g.udot);
        let (tt, dt) = (format!("{types}.total"), format!("{terms}.total"));
        let f = |s: &str| format!("{name}.{s}");
        self.add_functor(&f("sigma"), &dt, &tt, g.sigma.clone());
        self.add_functor(&f("delta"), &tt, &dt, g.delta.clone());
        self.add_functor(&f("id-terms"), &dt, &dt, g.eta.source().clone());
        self.add_functor(&f("delta-sigma"), &dt, &dt, g.eta.target().clone());
        self.add_functor(&f("sigma-delta"), &tt, &tt, g.eps.source().clone());
        self.add_functor(&f("id-types"), &tt, &tt, g.eps.target().clone());
        let mut nt = |n: &str, s: &str, t: &str, x: &NatTransformation| {
            self.transformations.insert(
                f(n),
                TransformationEntry { source: f(s), target: f(t), transformation: x.clone() },
            );
        };
        nt("eta", "id-terms", "delta-sigma", &g.eta);
        nt("eps", "sigma-delta", "id-types", &g.eps);
        let file = GcwfFile { types, terms, sigma: f("sigma"), delta: f("delta"), eta: f("eta"), eps: f("eps") };
        self.gcwfs.insert(name.to_string(), GcwfEntry { file, gcwf: g.clone() });
    }

    /// Adds a function-type structure over a gcwf already in the model.
    pub fn add_fun_structure(&mut self, name: &str, gcwf: &str, s: &FunStructure) {
        self.fun_structures
            .insert(name.to_string(), FunStructureEntry { gcwf: gcwf.to_string(), structure: s.clone() });
    }

    pub fn gcwf(&self, name: Option<&str>) -> Result<&Gcwf, ModelError> {
        pick(&self.gcwfs, "gcwf", name).map(|e| &e.gcwf)
    }

    pub fn fibration(&self, name: Option<&str>) -> Result<&Fibration, ModelError> {
        pick(&self.fibrations, "fibration", name).map(|e| &e.fibration)
    }

    pub fn fun_structure(&self, name: Option<&str>) -> Result<&FunStructure, ModelError> {
        pick(&self.fun_structures, "function-type structure", name).map(|e| &e.structure)
    }

    pub fn to_file(&self) -> ModelFile {
        let categories = self.categories.iter().map(|(n, c)| (n.clone(), write_category(c))).collect();
        let functors = self
            .functors
            .iter()
            .map(|(n, e)| {
                let (s, t) = (e.functor.source(), e.functor.target());
                let f = FunctorFile {
                    source: e.source.clone(),
                    target: e.target.clone(),
                    objects: s.objects().map(|o| (s.object_name(o).into(), t.object_name(e.functor.obj(o)).into())).collect(),
                    morphisms: s.morphisms().map(|m| (s.name(m).into(), t.name(e.functor.mor(m)).into())).collect(),
                };
                (n.clone(), f)
            })
            .collect();
        let transformations = self
            .transformations
            .iter()
            .map(|(n, e)| {
                let x = &e.transformation;
                let (c, d) = (x.source().source(), x.source().target());
                let t = TransformationFile {
                    source: e.source.clone(),
                    target: e.target.clone(),
                    components: c.objects().map(|o| (c.object_name(o).into(), d.name(x.at(o)).into())).collect(),
                };
                (n.clone(), t)
            })
            .collect();
        let fibrations = self
            .fibrations
            .iter()
            .map(|(n, e)| {
                let p = &e.fibration;
                // a missing lift stops completion at the same place on every run
                let _ = p.complete_cleavage();
                let (t, b) = (p.total(), p.base());
                let cleavage = p
                    .cleavage_entries()
                    .into_iter()
                    .map(|(a, s, l)| [t.object_name(a).into(), b.name(s).into(), t.name(l).into()])
                    .collect();
                (n.clone(), FibrationFile { functor: e.functor.clone(), split: p.is_marked_split(), cleavage })
            })
            .collect();
        let gcwfs = self.gcwfs.iter().map(|(n, e)| (n.clone(), e.file.clone())).collect();
        let fun_structures = self
            .fun_structures
            .iter()
            .map(|(n, e)| {
                let s = &e.structure;
                let g = &s.owner;
                let (t, d) = (g.types(), g.terms());
                let fun = s
                    .fun_table
                    .iter()
                    .map(|(&(a, b), &f)| [t.object_name(a).into(), t.object_name(b).into(), t.object_name(f).into()])
                    .collect();
                let lam = s
                    .lam_table
                    .iter()
                    .map(|(&(a, b, x), &l)| {
                        [t.object_name(a).into(), t.object_name(b).into(), d.object_name(x).into(), d.object_name(l).into()]
                    })
                    .collect();
                (n.clone(), FunStructureFile { gcwf: e.gcwf.clone(), fun, lam })
            })
            .collect();
        ModelFile { version: FORMAT_VERSION, categories, functors, transformations, fibrations, gcwfs, fun_structures }
    }

    /// Canonical text: pretty-printed with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_file()).expect("model files serialize");
        s.push('\n');
        s
    }
}

fn pick<'a, T>(map: &'a BTreeMap<String, T>, kind: &str, name: Option<&str>) -> Result<&'a T, ModelError> {
    match name {
        Some(n) => lookup(map, kind, n),
        None => {
            let mut it = map.values();
            match (it.next(), it.next()) {
                (Some(v), None) => Ok(v),
                (None, _) => Err(parse(format!("model has no {kind}"))),
                _ => Err(parse(format!("model has several entries of kind {kind}; name one"))),
            }
        }
    }
}

fn write_category(c: &FinCategory) -> CategoryFile {
    let composition = c
        .morphisms()
        .filter(|&f| !c.is_identity(f))
        .flat_map(|f| {
            c.outgoing(c.cod(f))
                .iter()
                .filter(|&&g| !c.is_identity(g))
                .map(move |&g| [c.name(g).into(), c.name(f).into(), c.name(c.comp(g, f)).into()])
                .collect::<Vec<_>>()
        })
        .collect();
    CategoryFile {
        objects: c.object_names().to_vec(),
        morphisms: c
            .morphisms()
            .map(|m| MorphismFile {
                name: c.name(m).into(),
                dom: c.object_name(c.dom(m)).into(),
                cod: c.object_name(c.cod(m)).into(),
            })
            .collect(),
        identities: c.objects().map(|o| (c.object_name(o).into(), c.name(c.id(o)).into())).collect(),
        composition,
    }
}
