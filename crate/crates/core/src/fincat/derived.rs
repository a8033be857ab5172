//! Categories built out of a finite category: arrows, sections of arrows, and slices.

use rustc_hash::FxHashMap as HashMap;
use std::sync::Arc;

use super::category::{FinCategory, Mor, Obj};
use super::functor::FinFunctor;
use crate::error::{Error, Result};

/// Longest readable square name; longer ones become `sq<index>`.
pub const MAX_SQUARE_NAME: usize = 96;

/// Arrow category: objects are arrows of `C`, morphisms are commuting squares `(top, bottom)`.
#[derive(Debug, Clone)]
pub struct ArrowCategory {
    pub base: Arc<FinCategory>,
    pub category: Arc<FinCategory>,
    /// The arrow of `C` underlying each object.
    pub arrow: Vec<Mor>,
    /// `(top, bottom)` components of each square.
    pub square: Vec<(Mor, Mor)>,
    pub object_of: HashMap<Mor, Obj>,
    pub square_of: HashMap<(Obj, Obj, Mor, Mor), Mor>,
}

impl ArrowCategory {
    /// Arrow category of `c`, restricted to the arrows accepted by `keep`.
    pub fn new(c: Arc<FinCategory>, keep: impl Fn(Mor) -> bool) -> Self {
        let arrows: Vec<Mor> = c.morphisms().filter(|&m| keep(m)).collect();
        let object_of: HashMap<Mor, Obj> =
            arrows.iter().enumerate().map(|(i, &m)| (m, Obj(i as u32))).collect();
        let mut square = Vec::new();
        let mut ends = Vec::new();
        let mut square_of = HashMap::default();
        for (i, &f) in arrows.iter().enumerate() {
            for (j, &g) in arrows.iter().enumerate() {
                for &x in c.hom(c.dom(f), c.dom(g)) {
                    let gx = c.comp(g, x);
                    for &y in c.hom(c.cod(f), c.cod(g)) {
                        if c.comp(y, f) == gx {
                            let id = Mor(square.len() as u32);
                            square_of.insert((Obj(i as u32), Obj(j as u32), x, y), id);
                            square.push((x, y));
                            ends.push((Obj(i as u32), Obj(j as u32)));
                        }
                    }
                }
            }
        }
        let names: Vec<(String, Obj, Obj)> = square
            .iter()
            .zip(&ends)
            .enumerate()
            .map(|(i, (&(x, y), &(s, t)))| {
                let name =
                    format!("[{},{}]:{}=>{}", c.name(x), c.name(y), c.name(arrows[s.index()]), c.name(arrows[t.index()]));
                // iterated squares nest four names per level; past the cap fall back to the index
                let name = if name.len() <= MAX_SQUARE_NAME { name } else { format!("sq{i}") };
                (name, s, t)
            })
            .collect();
        let category = FinCategory::generate(
            arrows.iter().map(|&m| c.name(m).to_string()).collect(),
            names,
            |o| {
                let f = arrows[o.index()];
                square_of[&(o, o, c.id(c.dom(f)), c.id(c.cod(f)))]
            },
            |g, f| {
                let (s, _) = ends[f.index()];
                let (_, t) = ends[g.index()];
                let (x1, y1) = square[f.index()];
                let (x2, y2) = square[g.index()];
                square_of.get(&(s, t, c.comp(x2, x1), c.comp(y2, y1))).copied()
            },
        )
        .expect("arrow category is closed under composition");
        ArrowCategory { base: c, category: Arc::new(category), arrow: arrows, square, object_of, square_of }
    }

    pub fn object(&self, f: Mor) -> Option<Obj> {
        self.object_of.get(&f).copied()
    }

    /// The square `(top, bottom)` from `src` to `tgt`, if it commutes.
    pub fn square_between(&self, src: Obj, tgt: Obj, top: Mor, bottom: Mor) -> Option<Mor> {
        self.square_of.get(&(src, tgt, top, bottom)).copied()
    }

    pub fn cod_functor(&self) -> FinFunctor {
        let c = &self.base;
        let obj = self.arrow.iter().map(|&f| c.cod(f)).collect();
        let mor = self.square.iter().map(|&(_, y)| y).collect();
        FinFunctor::new(self.category.clone(), self.base.clone(), obj, mor).expect("cod functor")
    }

    pub fn dom_functor(&self) -> FinFunctor {
        let c = &self.base;
        let obj = self.arrow.iter().map(|&f| c.dom(f)).collect();
        let mor = self.square.iter().map(|&(x, _)| x).collect();
        FinFunctor::new(self.category.clone(), self.base.clone(), obj, mor).expect("dom functor")
    }
}

/// Category of sections `(s, f)` with `f . s = id`, with squares compatible with both maps.
#[derive(Debug, Clone)]
pub struct SectionsCategory {
    pub base: Arc<FinCategory>,
    pub category: Arc<FinCategory>,
    /// `(section, arrow)` of each object.
    pub pair: Vec<(Mor, Mor)>,
    pub square: Vec<(Mor, Mor)>,
    pub object_of: HashMap<(Mor, Mor), Obj>,
    pub square_of: HashMap<(Obj, Obj, Mor, Mor), Mor>,
}

impl SectionsCategory {
    pub fn new(c: Arc<FinCategory>, keep: impl Fn(Mor) -> bool) -> Self {
        let mut pair = Vec::new();
        for f in c.morphisms().filter(|&m| keep(m)) {
            for &s in c.hom(c.cod(f), c.dom(f)) {
                if c.comp(f, s) == c.id(c.cod(f)) {
                    pair.push((s, f));
                }
            }
        }
        let object_of: HashMap<(Mor, Mor), Obj> =
            pair.iter().enumerate().map(|(i, &p)| (p, Obj(i as u32))).collect();
        let mut square = Vec::new();
        let mut ends = Vec::new();
        let mut square_of = HashMap::default();
        for (i, &(s, f)) in pair.iter().enumerate() {
            for (j, &(t, g)) in pair.iter().enumerate() {
                for &x in c.hom(c.dom(f), c.dom(g)) {
                    let gx = c.comp(g, x);
                    for &y in c.hom(c.cod(f), c.cod(g)) {
                        if c.comp(y, f) == gx && c.comp(x, s) == c.comp(t, y) {
                            let id = Mor(square.len() as u32);
                            square_of.insert((Obj(i as u32), Obj(j as u32), x, y), id);
                            square.push((x, y));
                            ends.push((Obj(i as u32), Obj(j as u32)));
                        }
                    }
                }
            }
        }
        let pname = |(s, f): (Mor, Mor)| format!("({};{})", c.name(s), c.name(f));
        let names: Vec<(String, Obj, Obj)> = square
            .iter()
            .zip(&ends)
            .map(|(&(x, y), &(a, b))| {
                (
                    format!("[{},{}]:{}=>{}", c.name(x), c.name(y), pname(pair[a.index()]), pname(pair[b.index()])),
                    a,
                    b,
                )
            })
            .collect();
        let category = FinCategory::generate(
            pair.iter().map(|&p| pname(p)).collect(),
            names,
            |o| {
                let (_, f) = pair[o.index()];
                square_of[&(o, o, c.id(c.dom(f)), c.id(c.cod(f)))]
            },
            |g, f| {
                let (s, _) = ends[f.index()];
                let (_, t) = ends[g.index()];
                let (x1, y1) = square[f.index()];
                let (x2, y2) = square[g.index()];
                square_of.get(&(s, t, c.comp(x2, x1), c.comp(y2, y1))).copied()
            },
        )
        .expect("sections category is closed under composition");
        SectionsCategory { base: c, category: Arc::new(category), pair, square, object_of, square_of }
    }

    pub fn object(&self, section: Mor, arrow: Mor) -> Option<Obj> {
        self.object_of.get(&(section, arrow)).copied()
    }

    pub fn square_between(&self, src: Obj, tgt: Obj, top: Mor, bottom: Mor) -> Option<Mor> {
        self.square_of.get(&(src, tgt, top, bottom)).copied()
    }

    pub fn cod_functor(&self) -> FinFunctor {
        let c = &self.base;
        let obj = self.pair.iter().map(|&(_, f)| c.cod(f)).collect();
        let mor = self.square.iter().map(|&(_, y)| y).collect();
        FinFunctor::new(self.category.clone(), self.base.clone(), obj, mor).expect("cod functor")
    }

    /// The functor forgetting the section, into an arrow category over the same base.
    pub fn forget_section(&self, arrows: &ArrowCategory) -> Result<FinFunctor> {
        let mut obj = Vec::with_capacity(self.pair.len());
        for &(_, f) in &self.pair {
            obj.push(arrows.object(f).ok_or_else(|| {
                Error::MalformedEntity(format!("arrow `{}` missing from arrow category", self.base.name(f)))
            })?);
        }
        let mut mor = Vec::with_capacity(self.square.len());
        for (i, &(x, y)) in self.square.iter().enumerate() {
            let m = Mor(i as u32);
            let (a, b) = (self.category.dom(m), self.category.cod(m));
            mor.push(
                arrows
                    .square_between(obj[a.index()], obj[b.index()], x, y)
                    .ok_or_else(|| Error::MalformedEntity("square missing from arrow category".into()))?,
            );
        }
        FinFunctor::new(self.category.clone(), arrows.category.clone(), obj, mor)
    }
}

/// Slice category over `base`: arrows into it and commuting triangles.
#[derive(Debug, Clone)]
pub struct SliceCategory {
    pub ambient: Arc<FinCategory>,
    pub over: Obj,
    pub category: Arc<FinCategory>,
    pub arrow: Vec<Mor>,
    pub triangle: Vec<Mor>,
    pub object_of: HashMap<Mor, Obj>,
    pub triangle_of: HashMap<(Obj, Obj, Mor), Mor>,
}

impl SliceCategory {
    pub fn new(c: Arc<FinCategory>, over: Obj) -> Self {
        let arrows: Vec<Mor> = c.incoming(over).to_vec();
        let object_of: HashMap<Mor, Obj> =
            arrows.iter().enumerate().map(|(i, &m)| (m, Obj(i as u32))).collect();
        let mut triangle = Vec::new();
        let mut ends = Vec::new();
        let mut triangle_of = HashMap::default();
        for (i, &h) in arrows.iter().enumerate() {
            for (j, &k) in arrows.iter().enumerate() {
                for &x in c.hom(c.dom(h), c.dom(k)) {
                    if c.comp(k, x) == h {
                        let id = Mor(triangle.len() as u32);
                        triangle_of.insert((Obj(i as u32), Obj(j as u32), x), id);
                        triangle.push(x);
                        ends.push((Obj(i as u32), Obj(j as u32)));
                    }
                }
            }
        }
        let names = triangle
            .iter()
            .zip(&ends)
            .map(|(&x, &(a, b))| {
                (format!("{}:{}=>{}", c.name(x), c.name(arrows[a.index()]), c.name(arrows[b.index()])), a, b)
            })
            .collect();
        let category = FinCategory::generate(
            arrows.iter().map(|&m| c.name(m).to_string()).collect(),
            names,
            |o| triangle_of[&(o, o, c.id(c.dom(arrows[o.index()])))],
            |g, f| {
                let (s, _) = ends[f.index()];
                let (_, t) = ends[g.index()];
                triangle_of.get(&(s, t, c.comp(triangle[g.index()], triangle[f.index()]))).copied()
            },
        )
        .expect("slice category is closed under composition");
        SliceCategory { ambient: c, over, category: Arc::new(category), arrow: arrows, triangle, object_of, triangle_of }
    }

    pub fn object(&self, h: Mor) -> Option<Obj> {
        self.object_of.get(&h).copied()
    }

    pub fn triangle_between(&self, src: Obj, tgt: Obj, x: Mor) -> Option<Mor> {
        self.triangle_of.get(&(src, tgt, x)).copied()
    }

    pub fn dom_functor(&self) -> FinFunctor {
        let c = &self.ambient;
        let obj = self.arrow.iter().map(|&h| c.dom(h)).collect();
        FinFunctor::new(self.category.clone(), self.ambient.clone(), obj, self.triangle.clone()).expect("dom functor")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivedKind {
    Arrow,
    Sections,
    Slice,
}

/// Arrow, sections, or slice category of `c` with its forgetful functor back to `c`
/// (`cod` for arrows and sections, `dom` for slices).
pub fn derived_category(
    kind: DerivedKind,
    c: &Arc<FinCategory>,
    base: Option<Obj>,
) -> Result<(Arc<FinCategory>, FinFunctor)> {
    match kind {
        DerivedKind::Arrow => {
            let a = ArrowCategory::new(c.clone(), |_| true);
            Ok((a.category.clone(), a.cod_functor()))
        }
        DerivedKind::Sections => {
            let s = SectionsCategory::new(c.clone(), |_| true);
            Ok((s.category.clone(), s.cod_functor()))
        }
        DerivedKind::Slice => {
            let over = base.ok_or(Error::MissingBase)?;
            let s = SliceCategory::new(c.clone(), over);
            Ok((s.category.clone(), s.dom_functor()))
        }
    }
}
