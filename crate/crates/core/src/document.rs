//! JSON files: structure files (named objects and morphisms with tagged
//! sections), finite categories and split prestacks.
//!
//! Scalars are exact literals written as strings (`"3"`, `"-1/2"`); JSON
//! numbers are rejected in matrices so that nothing passes through a float.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::coalgebra::{check_comonoid, Comonoid};
use crate::error::{Error, Result};
use crate::examples::algebra::{check_bimonoid, check_module_algebra, module_algebra_prestack, Bimonoid};
use crate::examples::sets::{set_prestack, Arrow, FiniteCategory, Functor, SplitPrestack};
use crate::exact::{Field, Matrix};
use crate::internal::{check_comonoidal, check_internal_category, check_monoid, promote_comonoidal, InternalCategory, Monoid};
use crate::monoidal::{Backend, Mor, Obj, Payload};
use crate::prestack::{
    action_domains, check_comodule_category, check_prestack, lemma_bd_comod_suite, lemma_maps_over_p_suite,
    ComoduleCategory, Prestack,
};
use crate::report::Report;

/// A parsed file.
#[derive(Clone, Debug, PartialEq)]
pub enum Document {
    Structure(Structure),
    Category { category: FiniteCategory, expect_failures: Vec<String> },
    Split { prestack: SplitPrestack, expect_failures: Vec<String> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct NamedMor {
    pub dom: Vec<String>,
    pub cod: Vec<String>,
    pub mor: Mor,
}

/// Named objects and morphisms of one backend, and sections assembling them.
#[derive(Clone, Debug, PartialEq)]
pub struct Structure {
    pub backend: Backend,
    pub objects: BTreeMap<String, Obj>,
    pub morphisms: BTreeMap<String, NamedMor>,
    pub sections: Vec<Section>,
    /// For negative examples: exactly the diagrams expected to fail.
    pub expect_failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Section {
    Comonoid { name: String, carrier: String, delta: String, epsilon: String },
    Monoid { name: String, carrier: String, mult: String, unit: String },
    Bimonoid { name: String, carrier: String, mult: String, unit: String, delta: String, epsilon: String },
    /// `composition` is given on all of `A ⊗ A`; only `A □_C A` matters.
    InternalCategory {
        name: String,
        objects: String,
        arrows: String,
        sigma: String,
        tau: String,
        unit: String,
        composition: String,
    },
    Comonoidal { name: String, category: String, delta: String, epsilon: String },
    /// `f` and `phi` are given on `B ⊗ C` and `B ⊗ A`.
    Prestack { name: String, category: String, base: String, p: String, pi: String, f: String, phi: String },
    /// The prestack of an `H`-module algebra.
    ModuleAlgebra { name: String, bimonoid: String, algebra: String, action: String },
    ComoduleCategory { name: String, category: String, base: String, p: String, pi: String },
}

impl Section {
    pub fn name(&self) -> &str {
        match self {
            Section::Comonoid { name, .. }
            | Section::Monoid { name, .. }
            | Section::Bimonoid { name, .. }
            | Section::InternalCategory { name, .. }
            | Section::Comonoidal { name, .. }
            | Section::Prestack { name, .. }
            | Section::ModuleAlgebra { name, .. }
            | Section::ComoduleCategory { name, .. } => name,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Section::Comonoid { .. } => "comonoid",
            Section::Monoid { .. } => "monoid",
            Section::Bimonoid { .. } => "bimonoid",
            Section::InternalCategory { .. } => "internal-category",
            Section::Comonoidal { .. } => "comonoidal",
            Section::Prestack { .. } | Section::ModuleAlgebra { .. } => "prestack",
            Section::ComoduleCategory { .. } => "comodule-category",
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
enum RawDoc {
    Structure(RawStructure),
    FiniteCategory(RawCategory),
    SplitPrestack(RawSplit),
}

#[derive(Serialize, Deserialize)]
struct RawStructure {
    backend: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    field: Option<String>,
    objects: BTreeMap<String, Vec<String>>,
    morphisms: BTreeMap<String, RawMor>,
    sections: Vec<Section>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    expect_failures: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct RawMor {
    dom: Vec<String>,
    cod: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrix: Option<Vec<Vec<Value>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    table: Option<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct RawArrow {
    name: String,
    source: String,
    target: String,
}

#[derive(Serialize, Deserialize)]
struct RawCategory {
    objects: Vec<String>,
    arrows: Vec<RawArrow>,
    identities: BTreeMap<String, String>,
    /// Triples `[f, g, f;g]`, first `f` then `g`.
    composition: Vec<[String; 3]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    expect_failures: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct RawFunctor {
    objects: BTreeMap<String, String>,
    arrows: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
struct RawSplit {
    base: RawCategory,
    /// One fiber per base object.
    fibers: BTreeMap<String, RawCategory>,
    /// `F(β): F(target β) → F(source β)` per base arrow; identity arrows may be omitted.
    transitions: BTreeMap<String, RawFunctor>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    expect_failures: Vec<String>,
}

fn input(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}

fn parse_error(e: serde_json::Error) -> Error {
    let msg = e.to_string();
    let suffix = format!(" at line {} column {}", e.line(), e.column());
    let msg = msg.strip_suffix(&suffix).unwrap_or(&msg).to_string();
    Error::Parse { line: e.line(), column: e.column(), msg }
}

pub fn parse(text: &str) -> Result<Document> {
    // The kind is read first so that the typed pass below keeps positions.
    #[derive(Deserialize)]
    struct Kind {
        kind: String,
    }
    let Kind { kind } = serde_json::from_str(text).map_err(parse_error)?;
    match kind.as_str() {
        "structure" => Ok(Document::Structure(resolve_structure(serde_json::from_str(text).map_err(parse_error)?)?)),
        "finite-category" => {
            let c: RawCategory = serde_json::from_str(text).map_err(parse_error)?;
            let expect_failures = c.expect_failures.clone();
            Ok(Document::Category { category: resolve_category(&c, "category")?, expect_failures })
        }
        "split-prestack" => {
            let s: RawSplit = serde_json::from_str(text).map_err(parse_error)?;
            let expect_failures = s.expect_failures.clone();
            Ok(Document::Split { prestack: resolve_split(s)?, expect_failures })
        }
        other => Err(input(format!("unknown kind '{other}' (expected structure, finite-category or split-prestack)"))),
    }
}

pub fn load(path: &Path) -> Result<Document> {
    parse(&std::fs::read_to_string(path)?)
}

fn parse_backend(backend: &str, field: Option<&str>) -> Result<Backend> {
    match (backend, field) {
        ("set", None) => Ok(Backend::Set),
        ("set", Some(_)) => Err(input("a FinSet structure takes no field")),
        ("vect", Some(f)) => Ok(Backend::Vect(f.parse::<Field>()?)),
        ("vect", None) => Err(input("a FinVect structure needs a field")),
        (other, _) => Err(input(format!("unknown backend '{other}' (expected 'vect' or 'set')"))),
    }
}

fn tensor_of(objects: &BTreeMap<String, Obj>, names: &[String], backend: Backend, ctx: &str) -> Result<Obj> {
    let objs = names
        .iter()
        .map(|n| objects.get(n).ok_or_else(|| input(format!("{ctx}: unknown object '{n}'"))))
        .collect::<Result<Vec<_>>>()?;
    Obj::tensor_all(&objs, backend)
}

fn parse_matrix(rows: &[Vec<Value>], field: Field, dom: usize, cod: usize, ctx: &str) -> Result<Matrix> {
    if rows.len() != cod {
        return Err(input(format!("{ctx}: {} rows for a codomain of dimension {cod}", rows.len())));
    }
    let mut entries = Vec::with_capacity(dom * cod);
    for (r, row) in rows.iter().enumerate() {
        if row.len() != dom {
            return Err(input(format!("{ctx}: row {r} has {} entries for a domain of dimension {dom}", row.len())));
        }
        for (c, v) in row.iter().enumerate() {
            let Value::String(s) = v else {
                return Err(input(format!("{ctx}: entry ({r}, {c}) is {v}; scalars must be exact string literals")));
            };
            entries.push(field.parse(s).map_err(|e| input(format!("{ctx}: entry ({r}, {c}): {e}")))?);
        }
    }
    Matrix::new(cod, dom, field, entries)
}

fn resolve_structure(raw: RawStructure) -> Result<Structure> {
    let backend = parse_backend(&raw.backend, raw.field.as_deref())?;
    let mut objects = BTreeMap::new();
    for (name, labels) in &raw.objects {
        let obj = Obj::atom(backend, labels.iter().cloned()).map_err(|e| input(format!("object '{name}': {e}")))?;
        objects.insert(name.clone(), obj);
    }
    let mut morphisms = BTreeMap::new();
    for (name, m) in &raw.morphisms {
        let ctx = format!("morphism '{name}'");
        let dom = tensor_of(&objects, &m.dom, backend, &ctx)?;
        let cod = tensor_of(&objects, &m.cod, backend, &ctx)?;
        let mor = match (backend, &m.matrix, &m.table) {
            (Backend::Vect(field), Some(rows), None) => {
                Mor::linear(&dom, &cod, parse_matrix(rows, field, dom.dim(), cod.dim(), &ctx)?)?
            }
            (Backend::Set, None, Some(t)) => Mor::function(&dom, &cod, t.clone()).map_err(|e| input(format!("{ctx}: {e}")))?,
            (Backend::Vect(_), ..) => return Err(input(format!("{ctx}: FinVect morphisms need exactly a 'matrix'"))),
            (Backend::Set, ..) => return Err(input(format!("{ctx}: FinSet morphisms need exactly a 'table'"))),
        };
        morphisms.insert(name.clone(), NamedMor { dom: m.dom.clone(), cod: m.cod.clone(), mor });
    }
    let s = Structure { backend, objects, morphisms, sections: raw.sections, expect_failures: raw.expect_failures };
    s.validate_references()?;
    Ok(s)
}

impl Structure {
    pub fn new(backend: Backend) -> Structure {
        Structure {
            backend,
            objects: BTreeMap::new(),
            morphisms: BTreeMap::new(),
            sections: Vec::new(),
            expect_failures: Vec::new(),
        }
    }

    pub fn section(&self, name: &str) -> Result<&Section> {
        self.sections.iter().find(|s| s.name() == name).ok_or_else(|| input(format!("unknown section '{name}'")))
    }

    fn object(&self, name: &str) -> Result<&Obj> {
        self.objects.get(name).ok_or_else(|| input(format!("unknown object '{name}'")))
    }

    fn mor(&self, name: &str) -> Result<&Mor> {
        self.morphisms.get(name).map(|m| &m.mor).ok_or_else(|| input(format!("unknown morphism '{name}'")))
    }

    /// Checks that every reference resolves to the right kind of thing and
    /// that every morphism has the dimensions its role requires.
    fn validate_references(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for s in &self.sections {
            if !seen.insert(s.name()) {
                return Err(input(format!("duplicate section '{}'", s.name())));
            }
        }
        let dim = |name: &str| self.object(name).map(Obj::dim);
        let kind_of = |name: &str, kind: &str, ctx: &str| -> Result<&Section> {
            let s = self.section(name).map_err(|e| input(format!("{ctx}: {e}")))?;
            if s.kind() != kind {
                return Err(input(format!("{ctx}: section '{name}' is a {}, not a {kind}", s.kind())));
            }
            Ok(s)
        };
        let shape = |m: &str, dom: usize, cod: usize, ctx: &str| -> Result<()> {
            let mor = self.mor(m).map_err(|e| input(format!("{ctx}: {e}")))?;
            if mor.dom().dim() != dom || mor.cod().dim() != cod {
                return Err(input(format!(
                    "{ctx}: '{m}' is {} -> {}, expected {dom} -> {cod}",
                    mor.dom().dim(),
                    mor.cod().dim()
                )));
            }
            Ok(())
        };
        // (objects, arrows) dimensions of an internal-category section.
        let cat_dims = |name: &str, ctx: &str| -> Result<(usize, usize)> {
            match kind_of(name, "internal-category", ctx)? {
                Section::InternalCategory { objects, arrows, .. } => match kind_of(objects, "comonoid", ctx)? {
                    Section::Comonoid { carrier, .. } => Ok((dim(carrier)?, dim(arrows)?)),
                    _ => unreachable!(),
                },
                _ => unreachable!(),
            }
        };
        let base_dims = |name: &str, ctx: &str| -> Result<(usize, usize)> {
            match kind_of(name, "comonoidal", ctx)? {
                Section::Comonoidal { category, .. } => cat_dims(category, ctx),
                _ => unreachable!(),
            }
        };
        for s in &self.sections {
            let ctx = format!("section '{}'", s.name());
            let ctx = ctx.as_str();
            match s {
                Section::Comonoid { carrier, delta, epsilon, .. } => {
                    let n = dim(carrier)?;
                    shape(delta, n, n * n, ctx)?;
                    shape(epsilon, n, 1, ctx)?;
                }
                Section::Monoid { carrier, mult, unit, .. } => {
                    let n = dim(carrier)?;
                    shape(mult, n * n, n, ctx)?;
                    shape(unit, 1, n, ctx)?;
                }
                Section::Bimonoid { carrier, mult, unit, delta, epsilon, .. } => {
                    let n = dim(carrier)?;
                    shape(mult, n * n, n, ctx)?;
                    shape(unit, 1, n, ctx)?;
                    shape(delta, n, n * n, ctx)?;
                    shape(epsilon, n, 1, ctx)?;
                }
                Section::InternalCategory { objects, arrows, sigma, tau, unit, composition, .. } => {
                    let c = match kind_of(objects, "comonoid", ctx)? {
                        Section::Comonoid { carrier, .. } => dim(carrier)?,
                        _ => unreachable!(),
                    };
                    let a = dim(arrows)?;
                    shape(sigma, a, c * a, ctx)?;
                    shape(tau, a, a * c, ctx)?;
                    shape(unit, c, a, ctx)?;
                    shape(composition, a * a, a, ctx)?;
                }
                Section::Comonoidal { category, delta, epsilon, .. } => {
                    let (_, b) = cat_dims(category, ctx)?;
                    shape(delta, b, b * b, ctx)?;
                    shape(epsilon, b, 1, ctx)?;
                }
                Section::Prestack { category, base, p, pi, f, phi, .. } => {
                    let (c, a) = cat_dims(category, ctx)?;
                    let (d, b) = base_dims(base, ctx)?;
                    shape(p, c, c * d, ctx)?;
                    shape(pi, a, a * d, ctx)?;
                    shape(f, b * c, c, ctx)?;
                    shape(phi, b * a, a, ctx)?;
                }
                Section::ModuleAlgebra { bimonoid, algebra, action, .. } => {
                    let h = match kind_of(bimonoid, "bimonoid", ctx)? {
                        Section::Bimonoid { carrier, .. } => dim(carrier)?,
                        _ => unreachable!(),
                    };
                    let a = match kind_of(algebra, "monoid", ctx)? {
                        Section::Monoid { carrier, .. } => dim(carrier)?,
                        _ => unreachable!(),
                    };
                    shape(action, h * a, a, ctx)?;
                }
                Section::ComoduleCategory { category, base, p, pi, .. } => {
                    let (c, a) = cat_dims(category, ctx)?;
                    let (d, b) = base_dims(base, ctx)?;
                    shape(p, c, c * d, ctx)?;
                    shape(pi, a, a * b, ctx)?;
                }
            }
        }
        Ok(())
    }

    pub fn comonoid(&self, name: &str) -> Result<Comonoid> {
        match self.section(name)? {
            Section::Comonoid { carrier, delta, epsilon, .. } => {
                Comonoid::new(self.object(carrier)?, self.mor(delta)?.clone(), self.mor(epsilon)?.clone())
            }
            s => Err(input(format!("section '{name}' is a {}", s.kind()))),
        }
    }

    pub fn monoid(&self, name: &str) -> Result<Monoid> {
        match self.section(name)? {
            Section::Monoid { carrier, mult, unit, .. } => {
                Ok(Monoid { carrier: self.object(carrier)?.clone(), mult: self.mor(mult)?.clone(), unit: self.mor(unit)?.clone() })
            }
            s => Err(input(format!("section '{name}' is a {}", s.kind()))),
        }
    }

    pub fn bimonoid(&self, name: &str) -> Result<Bimonoid> {
        match self.section(name)? {
            Section::Bimonoid { carrier, mult, unit, delta, epsilon, .. } => {
                let x = self.object(carrier)?;
                let monoid = Monoid { carrier: x.clone(), mult: self.mor(mult)?.clone(), unit: self.mor(unit)?.clone() };
                let comonoid = Comonoid::new(x, self.mor(delta)?.clone(), self.mor(epsilon)?.clone())?;
                Ok(Bimonoid { monoid, comonoid })
            }
            s => Err(input(format!("section '{name}' is a {}", s.kind()))),
        }
    }

    pub fn internal_category(&self, name: &str) -> Result<InternalCategory> {
        match self.section(name)? {
            Section::InternalCategory { objects, arrows, sigma, tau, unit, composition, .. } => {
                let c = self.comonoid(objects)?;
                let a = self.object(arrows)?.clone();
                let (sigma, tau, u) = (self.mor(sigma)?.clone(), self.mor(tau)?.clone(), self.mor(unit)?.clone());
                InternalCategory::from_ambient(c, a, sigma, tau, u, self.mor(composition)?)
            }
            s => Err(input(format!("section '{name}' is a {}", s.kind()))),
        }
    }

    /// The comonoidal section's category with `δ_B` and `ε_B`, unchecked.
    pub fn comonoidal_parts(&self, name: &str) -> Result<(InternalCategory, Mor, Mor)> {
        match self.section(name)? {
            Section::Comonoidal { category, delta, epsilon, .. } => {
                Ok((self.internal_category(category)?, self.mor(delta)?.clone(), self.mor(epsilon)?.clone()))
            }
            s => Err(input(format!("section '{name}' is a {}", s.kind()))),
        }
    }

    pub fn prestack(&self, name: &str) -> Result<Prestack> {
        match self.section(name)? {
            Section::Prestack { category, base, p, pi, f, phi, .. } => {
                let cat = self.internal_category(category)?;
                let (b, db, eb) = self.comonoidal_parts(base)?;
                let base = promote_comonoidal(&b, &db, &eb)?;
                let (p, pi) = (self.mor(p)?.clone(), self.mor(pi)?.clone());
                let (bc, ba) = action_domains(&cat, &base, &p, &pi)?;
                let f = self.mor(f)?.after(&bc.mono)?;
                let phi = self.mor(phi)?.after(&ba.mono)?;
                Ok(Prestack { cat, base, p, pi, f, phi })
            }
            Section::ModuleAlgebra { bimonoid, algebra, action, .. } => {
                module_algebra_prestack(&self.bimonoid(bimonoid)?, &self.monoid(algebra)?, self.mor(action)?)
            }
            s => Err(input(format!("section '{name}' is a {}", s.kind()))),
        }
    }

    /// The parts of a module-algebra section.
    pub fn module_algebra(&self, name: &str) -> Result<(Bimonoid, Monoid, Mor)> {
        match self.section(name)? {
            Section::ModuleAlgebra { bimonoid, algebra, action, .. } => {
                Ok((self.bimonoid(bimonoid)?, self.monoid(algebra)?, self.mor(action)?.clone()))
            }
            s => Err(input(format!("section '{name}' is a {}", s.kind()))),
        }
    }

    pub fn comodule_category(&self, name: &str) -> Result<ComoduleCategory> {
        match self.section(name)? {
            Section::ComoduleCategory { category, base, p, pi, .. } => {
                let cat = self.internal_category(category)?;
                let (b, db, eb) = self.comonoidal_parts(base)?;
                let base = promote_comonoidal(&b, &db, &eb)?;
                Ok(ComoduleCategory { cat, base, p: self.mor(p)?.clone(), pi: self.mor(pi)?.clone() })
            }
            s => Err(input(format!("section '{name}' is a {}", s.kind()))),
        }
    }

    /// The names of sections of the given kind, in file order.
    pub fn sections_of(&self, kind: &str) -> Vec<&str> {
        self.sections.iter().filter(|s| s.kind() == kind).map(Section::name).collect()
    }

    /// Adds an atom object; its labels are taken from `obj`.
    pub fn add_object(&mut self, name: &str, obj: &Obj) -> Result<Obj> {
        let atom = Obj::atom(self.backend, obj.labels())?;
        self.objects.insert(name.to_string(), atom.clone());
        Ok(atom)
    }

    /// Adds a morphism between tensors of named objects, retyped onto them.
    pub fn add_mor(&mut self, name: &str, dom: &[&str], cod: &[&str], mor: &Mor) -> Result<()> {
        let names = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        let (dom, cod) = (names(dom), names(cod));
        let d = tensor_of(&self.objects, &dom, self.backend, name)?;
        let c = tensor_of(&self.objects, &cod, self.backend, name)?;
        let mor = mor.retyped(&d, &c)?;
        self.morphisms.insert(name.to_string(), NamedMor { dom, cod, mor });
        Ok(())
    }

    /// Writes an internal category under `prefix`: objects `{prefix}.C`, `{prefix}.A`.
    fn add_internal(&mut self, prefix: &str, x: &InternalCategory) -> Result<()> {
        let (c, a) = (format!("{prefix}.C"), format!("{prefix}.A"));
        self.add_object(&c, &x.c.carrier)?;
        self.add_object(&a, &x.a)?;
        let n = |s: &str| format!("{prefix}.{s}");
        self.add_comonoid(&n("objects"), &c, &x.c)?;
        self.add_mor(&n("sigma"), &[&a], &[&c, &a], &x.sigma)?;
        self.add_mor(&n("tau"), &[&a], &[&a, &c], &x.tau)?;
        self.add_mor(&n("unit"), &[&c], &[&a], &x.u)?;
        let m = x.m.after(&x.aa.mono.left_inverse()?)?;
        self.add_mor(&n("composition"), &[&a, &a], &[&a], &m)?;
        self.sections.push(Section::InternalCategory {
            name: prefix.to_string(),
            objects: n("objects"),
            arrows: a,
            sigma: n("sigma"),
            tau: n("tau"),
            unit: n("unit"),
            composition: n("composition"),
        });
        Ok(())
    }

    fn add_comonoidal(&mut self, prefix: &str, base: &crate::internal::ComonoidalCategory) -> Result<()> {
        self.add_internal(prefix, &base.base)?;
        let b = format!("{prefix}.A");
        let n = |s: &str| format!("{prefix}.{s}");
        self.add_mor(&n("maps-delta"), &[&b], &[&b, &b], &base.maps.delta)?;
        self.add_mor(&n("maps-epsilon"), &[&b], &[], &base.maps.epsilon)?;
        self.sections.push(Section::Comonoidal {
            name: n("comonoidal"),
            category: prefix.to_string(),
            delta: n("maps-delta"),
            epsilon: n("maps-epsilon"),
        });
        Ok(())
    }

    /// Writes a monoid on the object `carrier`, which must already be present.
    pub fn add_monoid(&mut self, name: &str, carrier: &str, a: &Monoid) -> Result<()> {
        let n = |s: &str| format!("{name}.{s}");
        self.add_mor(&n("mult"), &[carrier, carrier], &[carrier], &a.mult)?;
        self.add_mor(&n("unit"), &[], &[carrier], &a.unit)?;
        self.sections.push(Section::Monoid { name: name.into(), carrier: carrier.into(), mult: n("mult"), unit: n("unit") });
        Ok(())
    }

    pub fn add_comonoid(&mut self, name: &str, carrier: &str, c: &Comonoid) -> Result<()> {
        let n = |s: &str| format!("{name}.{s}");
        self.add_mor(&n("delta"), &[carrier], &[carrier, carrier], &c.delta)?;
        self.add_mor(&n("epsilon"), &[carrier], &[], &c.epsilon)?;
        self.sections.push(Section::Comonoid {
            name: name.into(),
            carrier: carrier.into(),
            delta: n("delta"),
            epsilon: n("epsilon"),
        });
        Ok(())
    }

    pub fn add_bimonoid(&mut self, name: &str, carrier: &str, h: &Bimonoid) -> Result<()> {
        let n = |s: &str| format!("{name}.{s}");
        self.add_mor(&n("mult"), &[carrier, carrier], &[carrier], &h.monoid.mult)?;
        self.add_mor(&n("unit"), &[], &[carrier], &h.monoid.unit)?;
        self.add_mor(&n("delta"), &[carrier], &[carrier, carrier], &h.comonoid.delta)?;
        self.add_mor(&n("epsilon"), &[carrier], &[], &h.comonoid.epsilon)?;
        self.sections.push(Section::Bimonoid {
            name: name.into(),
            carrier: carrier.into(),
            mult: n("mult"),
            unit: n("unit"),
            delta: n("delta"),
            epsilon: n("epsilon"),
        });
        Ok(())
    }

    /// An `H`-module algebra `A`, with objects `H` and `A`.
    pub fn from_module_algebra(name: &str, h: &Bimonoid, a: &Monoid, action: &Mor) -> Result<Structure> {
        let mut s = Structure::new(h.carrier().backend());
        s.add_object("H", h.carrier())?;
        s.add_object("A", &a.carrier)?;
        s.add_bimonoid("H", "H", h)?;
        s.add_monoid("A", "A", a)?;
        s.add_mor("action", &["H", "A"], &["A"], action)?;
        s.sections.push(Section::ModuleAlgebra {
            name: name.into(),
            bimonoid: "H".into(),
            algebra: "A".into(),
            action: "action".into(),
        });
        Ok(s)
    }

    /// A structure file holding an internal category alone.
    pub fn from_internal(name: &str, x: &InternalCategory) -> Result<Structure> {
        let mut s = Structure::new(x.backend());
        s.add_internal(name, x)?;
        Ok(s)
    }

    /// A structure file holding a comodule category and everything it uses.
    pub fn from_comodule_category(name: &str, x: &ComoduleCategory) -> Result<Structure> {
        let mut s = Structure::new(x.cat.backend());
        s.add_internal(name, &x.cat)?;
        s.add_comonoidal("base", &x.base)?;
        let (c, a) = (format!("{name}.C"), format!("{name}.A"));
        s.add_mor(&format!("{name}.p"), &[&c], &[&c, "base.C"], &x.p)?;
        s.add_mor(&format!("{name}.pi"), &[&a], &[&a, "base.A"], &x.pi)?;
        s.sections.push(Section::ComoduleCategory {
            name: format!("{name}-comodule"),
            category: name.to_string(),
            base: "base.comonoidal".into(),
            p: format!("{name}.p"),
            pi: format!("{name}.pi"),
        });
        Ok(s)
    }

    /// A structure file holding a prestack in general form.
    pub fn from_prestack(name: &str, ps: &Prestack) -> Result<Structure> {
        let mut s = Structure::new(ps.cat.backend());
        s.add_internal(name, &ps.cat)?;
        s.add_comonoidal("base", &ps.base)?;
        let (c, a) = (format!("{name}.C"), format!("{name}.A"));
        let (bc, ba) = action_domains(&ps.cat, &ps.base, &ps.p, &ps.pi)?;
        let f = ps.f.after(&bc.mono.left_inverse()?)?;
        let phi = ps.phi.after(&ba.mono.left_inverse()?)?;
        let n = |x: &str| format!("{name}.{x}");
        s.add_mor(&n("p"), &[&c], &[&c, "base.C"], &ps.p)?;
        s.add_mor(&n("pi"), &[&a], &[&a, "base.C"], &ps.pi)?;
        s.add_mor(&n("f"), &["base.A", &c], &[&c], &f)?;
        s.add_mor(&n("phi"), &["base.A", &a], &[&a], &phi)?;
        s.sections.push(Section::Prestack {
            name: format!("{name}-prestack"),
            category: name.to_string(),
            base: "base.comonoidal".into(),
            p: n("p"),
            pi: n("pi"),
            f: n("f"),
            phi: n("phi"),
        });
        Ok(s)
    }

    fn to_raw(&self) -> RawStructure {
        let (backend, field) = match self.backend {
            Backend::Set => ("set".to_string(), None),
            Backend::Vect(f) => ("vect".to_string(), Some(f.to_string())),
        };
        let objects = self.objects.iter().map(|(k, v)| (k.clone(), v.labels())).collect();
        let morphisms = self
            .morphisms
            .iter()
            .map(|(k, m)| {
                let (matrix, table) = match m.mor.payload() {
                    Payload::Linear(x) => {
                        let rows = (0..x.rows())
                            .map(|r| (0..x.cols()).map(|c| Value::String(x.get(r, c).to_string())).collect())
                            .collect();
                        (Some(rows), None)
                    }
                    Payload::Function(t) => (None, Some(t.clone())),
                };
                (k.clone(), RawMor { dom: m.dom.clone(), cod: m.cod.clone(), matrix, table })
            })
            .collect();
        RawStructure {
            backend,
            field,
            objects,
            morphisms,
            sections: self.sections.clone(),
            expect_failures: self.expect_failures.clone(),
        }
    }
}

fn resolve_category(raw: &RawCategory, ctx: &str) -> Result<FiniteCategory> {
    let obj_index = |name: &str| {
        raw.objects.iter().position(|o| o == name).ok_or_else(|| input(format!("{ctx}: unknown object '{name}'")))
    };
    let arrow_index = |name: &str| {
        raw.arrows.iter().position(|a| a.name == name).ok_or_else(|| input(format!("{ctx}: unknown arrow '{name}'")))
    };
    let mut names = BTreeSet::new();
    if let Some(dup) = raw.objects.iter().find(|o| !names.insert(o.as_str())) {
        return Err(input(format!("{ctx}: duplicate object '{dup}'")));
    }
    let mut names = BTreeSet::new();
    if let Some(dup) = raw.arrows.iter().find(|a| !names.insert(a.name.as_str())) {
        return Err(input(format!("{ctx}: duplicate arrow '{}'", dup.name)));
    }
    let arrows = raw
        .arrows
        .iter()
        .map(|a| Ok(Arrow { name: a.name.clone(), source: obj_index(&a.source)?, target: obj_index(&a.target)? }))
        .collect::<Result<Vec<_>>>()?;
    let identities = raw
        .objects
        .iter()
        .map(|o| {
            let id = raw.identities.get(o).ok_or_else(|| input(format!("{ctx}: no identity for '{o}'")))?;
            arrow_index(id)
        })
        .collect::<Result<Vec<_>>>()?;
    if let Some(extra) = raw.identities.keys().find(|k| !raw.objects.contains(k)) {
        return Err(input(format!("{ctx}: identity given for unknown object '{extra}'")));
    }
    let n = arrows.len();
    let mut compose = vec![vec![None; n]; n];
    for [f, g, h] in &raw.composition {
        let (f, g, h) = (arrow_index(f)?, arrow_index(g)?, arrow_index(h)?);
        if compose[f][g].replace(h).is_some() {
            return Err(input(format!("{ctx}: composite of '{}' and '{}' given twice", arrows[f].name, arrows[g].name)));
        }
    }
    Ok(FiniteCategory { objects: raw.objects.clone(), arrows, identities, compose })
}

fn resolve_split(raw: RawSplit) -> Result<SplitPrestack> {
    let base = resolve_category(&raw.base, "base")?;
    let mut fibers = Vec::with_capacity(base.objects.len());
    for b in &base.objects {
        let fib = raw.fibers.get(b).ok_or_else(|| input(format!("no fiber over '{b}'")))?;
        fibers.push(resolve_category(fib, &format!("fiber over '{b}'"))?);
    }
    if let Some(extra) = raw.fibers.keys().find(|k| !base.objects.contains(k)) {
        return Err(input(format!("fiber given over unknown object '{extra}'")));
    }
    if let Some(extra) = raw.transitions.keys().find(|k| !base.arrows.iter().any(|a| &a.name == *k)) {
        return Err(input(format!("transition given for unknown arrow '{extra}'")));
    }
    let mut transitions = Vec::with_capacity(base.arrows.len());
    for (i, a) in base.arrows.iter().enumerate() {
        let (from, to) = (&fibers[a.target], &fibers[a.source]);
        let Some(t) = raw.transitions.get(&a.name) else {
            if base.identities.contains(&i) {
                transitions.push(Functor::identity(from));
                continue;
            }
            return Err(input(format!("no transition for '{}'", a.name)));
        };
        let ctx = format!("transition '{}'", a.name);
        let objects = from
            .objects
            .iter()
            .map(|o| {
                let image = t.objects.get(o).ok_or_else(|| input(format!("{ctx}: object '{o}' has no image")))?;
                to.objects.iter().position(|x| x == image).ok_or_else(|| input(format!("{ctx}: unknown object '{image}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        let arrows = from
            .arrows
            .iter()
            .map(|f| {
                let image = t.arrows.get(&f.name).ok_or_else(|| input(format!("{ctx}: arrow '{}' has no image", f.name)))?;
                to.arrows.iter().position(|x| &x.name == image).ok_or_else(|| input(format!("{ctx}: unknown arrow '{image}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        transitions.push(Functor { objects, arrows });
    }
    Ok(SplitPrestack { base, fibers, transitions })
}

fn category_to_raw(c: &FiniteCategory, expect_failures: &[String]) -> RawCategory {
    let arrows = c
        .arrows
        .iter()
        .map(|a| RawArrow { name: a.name.clone(), source: c.objects[a.source].clone(), target: c.objects[a.target].clone() })
        .collect();
    let identities = c.objects.iter().zip(&c.identities).map(|(o, &i)| (o.clone(), c.arrows[i].name.clone())).collect();
    let mut composition = Vec::new();
    for (f, row) in c.compose.iter().enumerate() {
        for (g, h) in row.iter().enumerate() {
            if let Some(h) = h {
                composition.push([c.arrows[f].name.clone(), c.arrows[g].name.clone(), c.arrows[*h].name.clone()]);
            }
        }
    }
    RawCategory { objects: c.objects.clone(), arrows, identities, composition, expect_failures: expect_failures.to_vec() }
}

fn split_to_raw(sp: &SplitPrestack, expect_failures: &[String]) -> RawSplit {
    let fibers = sp.base.objects.iter().zip(&sp.fibers).map(|(b, f)| (b.clone(), category_to_raw(f, &[]))).collect();
    let transitions = sp
        .base
        .arrows
        .iter()
        .zip(&sp.transitions)
        .map(|(a, t)| {
            let (from, to) = (&sp.fibers[a.target], &sp.fibers[a.source]);
            let objects = from.objects.iter().zip(&t.objects).map(|(o, &i)| (o.clone(), to.objects[i].clone())).collect();
            let arrows =
                from.arrows.iter().zip(&t.arrows).map(|(f, &i)| (f.name.clone(), to.arrows[i].name.clone())).collect();
            (a.name.clone(), RawFunctor { objects, arrows })
        })
        .collect();
    RawSplit { base: category_to_raw(&sp.base, &[]), fibers, transitions, expect_failures: expect_failures.to_vec() }
}

impl Document {
    pub fn to_json(&self) -> Value {
        let raw = match self {
            Document::Structure(s) => RawDoc::Structure(s.to_raw()),
            Document::Category { category, expect_failures } => RawDoc::FiniteCategory(category_to_raw(category, expect_failures)),
            Document::Split { prestack, expect_failures } => RawDoc::SplitPrestack(split_to_raw(prestack, expect_failures)),
        };
        serde_json::to_value(raw).expect("serializable")
    }

    pub fn to_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("serializable") + "\n"
    }

    pub fn expect_failures(&self) -> &[String] {
        match self {
            Document::Structure(s) => &s.expect_failures,
            Document::Category { expect_failures, .. } | Document::Split { expect_failures, .. } => expect_failures,
        }
    }

    /// The primary prestack of the file, if it has one.
    pub fn prestack(&self) -> Result<Prestack> {
        match self {
            Document::Split { prestack, .. } => set_prestack(prestack),
            Document::Structure(s) => {
                let name = s.sections_of("prestack").first().copied().ok_or_else(|| input("file has no prestack section"))?;
                s.prestack(name)
            }
            Document::Category { .. } => Err(input("a finite category is not a prestack")),
        }
    }
}

fn prestack_suite(r: &mut Report, name: &str, ps: Result<Prestack>) {
    if let Some(ps) = r.attempt(&format!("{name}/build"), ps) {
        r.absorb(name, check_prestack(&ps));
        if r.pass() {
            r.absorb(name, lemma_bd_comod_suite(&ps));
            r.absorb(name, lemma_maps_over_p_suite(&ps));
        }
    }
}

/// One report per section (or for the whole file), in file order.
pub fn check_reports(doc: &Document) -> Vec<(String, Report)> {
    match doc {
        Document::Category { category, .. } => vec![("category".into(), category.validate())],
        Document::Split { prestack, .. } => {
            let mut r = prestack.validate();
            if r.pass() {
                prestack_suite(&mut r, "prestack", set_prestack(prestack));
            }
            vec![("split-prestack".into(), r)]
        }
        Document::Structure(s) => s.sections.iter().map(|sec| (sec.name().to_string(), check_section(s, sec))).collect(),
    }
}

pub fn check_section(s: &Structure, sec: &Section) -> Report {
    let mut r = Report::new();
    let name = sec.name();
    match sec {
        Section::Comonoid { .. } => {
            if let Some(c) = r.attempt(name, s.comonoid(name)) {
                r.absorb(name, check_comonoid(&c));
            }
        }
        Section::Monoid { .. } => {
            if let Some(m) = r.attempt(name, s.monoid(name)) {
                r.absorb(name, check_monoid(&m));
            }
        }
        Section::Bimonoid { .. } => {
            if let Some(h) = r.attempt(name, s.bimonoid(name)) {
                r.absorb(name, check_bimonoid(&h));
            }
        }
        Section::InternalCategory { .. } => {
            if let Some(x) = r.attempt(name, s.internal_category(name)) {
                r.absorb(name, check_internal_category(&x));
            }
        }
        Section::Comonoidal { .. } => {
            if let Some((b, d, e)) = r.attempt(name, s.comonoidal_parts(name)) {
                r.absorb(name, check_comonoidal(&b, &d, &e));
            }
        }
        Section::ModuleAlgebra { .. } => {
            if let Some((h, a, act)) = r.attempt(name, s.module_algebra(name)) {
                r.absorb(name, check_module_algebra(&h, &a, &act));
                if r.pass() {
                    prestack_suite(&mut r, name, s.prestack(name));
                }
            }
        }
        Section::Prestack { .. } => prestack_suite(&mut r, name, s.prestack(name)),
        Section::ComoduleCategory { .. } => {
            if let Some(x) = r.attempt(name, s.comodule_category(name)) {
                r.absorb(name, check_comodule_category(&x));
            }
        }
    }
    r
}

/// All reports merged, section name first.
pub fn check_document(doc: &Document) -> Report {
    let mut all = Report::new();
    for (_, r) in check_reports(doc) {
        all.absorb("", r);
    }
    all
}

/// True when a file's failures are exactly the documented ones.
pub fn meets_expectation(doc: &Document, report: &Report) -> bool {
    let expected: BTreeSet<&str> = doc.expect_failures().iter().map(String::as_str).collect();
    let actual: BTreeSet<String> = report.failure_names().into_iter().collect();
    let actual: BTreeSet<&str> = actual.iter().map(String::as_str).collect();
    expected == actual
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::algebra::{cyclic_group_algebra, dual_numbers, sign_action};
    use crate::examples::sets::collapsing_arrow;

    fn kz2_sign() -> Structure {
        let h = cyclic_group_algebra(2, Field::Rational).unwrap();
        let a = dual_numbers(Field::Rational);
        Structure::from_module_algebra("kz2-sign", &h, &a, &sign_action(&h, &a)).unwrap()
    }

    fn edit(s: &Structure, f: impl FnOnce(&mut Value)) -> Result<Document> {
        let mut v = Document::Structure(s.clone()).to_json();
        f(&mut v);
        parse(&v.to_string())
    }

    #[test]
    fn structure_round_trips_and_checks() {
        let doc = Document::Structure(kz2_sign());
        let again = parse(&doc.to_pretty()).unwrap();
        assert_eq!(doc, again);
        assert!(check_document(&again).pass());
        assert_eq!(again.prestack().unwrap().cat.a.dim(), 2);
    }

    #[test]
    fn scalars_must_be_exact_strings() {
        let s = kz2_sign();
        let number = edit(&s, |v| v["morphisms"]["action"]["matrix"][0][0] = Value::from(1));
        assert!(matches!(number, Err(Error::Input(m)) if m.contains("exact string")));
        let float = edit(&s, |v| v["morphisms"]["action"]["matrix"][0][0] = Value::from("0.5"));
        assert!(matches!(float, Err(Error::Input(_))));
        let fraction = edit(&s, |v| v["morphisms"]["action"]["matrix"][1][1] = Value::from("-3/6"));
        let Ok(Document::Structure(t)) = fraction else { panic!() };
        assert_eq!(t.morphisms["action"].mor.matrix().unwrap().get(1, 1).to_string(), "-1/2");
    }

    #[test]
    fn references_and_dimensions_are_validated() {
        let s = kz2_sign();
        let missing = edit(&s, |v| v["sections"][2]["action"] = Value::from("nothing"));
        assert!(matches!(missing, Err(Error::Input(m)) if m.contains("unknown morphism 'nothing'")));
        let wrong_kind = edit(&s, |v| v["sections"][2]["algebra"] = Value::from("H"));
        assert!(matches!(wrong_kind, Err(Error::Input(m)) if m.contains("is a bimonoid, not a monoid")));
        let wrong_dim = edit(&s, |v| v["sections"][2]["action"] = Value::from("H.delta"));
        assert!(matches!(wrong_dim, Err(Error::Input(m)) if m.contains("expected 4 -> 2")));
        let ragged = edit(&s, |v| {
            v["morphisms"]["action"]["matrix"][0].as_array_mut().unwrap().pop();
        });
        assert!(matches!(ragged, Err(Error::Input(m)) if m.contains("row 0 has 3 entries")));
    }

    #[test]
    fn parse_errors_carry_positions() {
        let err = parse("{\n  \"kind\": \"structure\",\n  \"backend\": 3\n}").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        assert!(err.is_input());
        assert!(matches!(parse("{\"kind\": \"poem\"}"), Err(Error::Input(_))));
    }

    #[test]
    fn general_set_prestack_survives_export() {
        let ps = set_prestack(&collapsing_arrow()).unwrap();
        let doc = Document::Structure(Structure::from_prestack("collapse", &ps).unwrap());
        let back = parse(&doc.to_pretty()).unwrap().prestack().unwrap();
        assert_eq!(back.f, ps.f);
        assert_eq!(back.phi, ps.phi);
        assert_eq!(back.cat.m, ps.cat.m);
    }

    #[test]
    fn split_transitions_of_identities_may_be_omitted() {
        let doc = Document::Split { prestack: collapsing_arrow(), expect_failures: vec![] };
        let mut v = doc.to_json();
        v["transitions"].as_object_mut().unwrap().retain(|k, _| k == "f");
        assert_eq!(parse(&v.to_string()).unwrap(), doc);
        v["transitions"].as_object_mut().unwrap().clear();
        assert!(matches!(parse(&v.to_string()), Err(Error::Input(m)) if m.contains("no transition for 'f'")));
    }
}
