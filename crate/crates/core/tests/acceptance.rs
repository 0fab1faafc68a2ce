//! The acceptance suite: one PASS/FAIL line per criterion, all at exact
//! equality, with the wall-clock time against each budget.

mod common;

use std::path::Path;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use smash_core::coalgebra::{check_comonoid, Comonoid};
use smash_core::cotensor::{cotensor, interchange_iso};
use smash_core::document::{check_document, load, meets_expectation};
use smash_core::examples::algebra::{
    check_bimonoid, check_module_algebra, compare_with_classical, cyclic_group_algebra, dual_numbers, group_algebra,
    module_algebra_prestack, sign_action, sweedler, sweedler_action, trivial_action,
};
use smash_core::examples::sets::{compare_with_grothendieck, generate, set_prestack, FiniteCategory, SplitPrestack};
use smash_core::exact::Field;
use smash_core::internal::{check_internal_category, check_monoid, discrete, one_object, unit_category};
use smash_core::monoidal::{permute, regularity_witness, Backend, Mor};
use smash_core::prestack::{coinvariants, lemma_bd_comod_suite, lemma_maps_over_p_suite, recovery_iso, smash, Prestack};
use smash_core::report::Report;

const Q: Field = Field::Rational;

struct Outcome {
    failures: Vec<String>,
    detail: String,
}

impl Outcome {
    fn new() -> Outcome {
        Outcome { failures: Vec::new(), detail: String::new() }
    }

    fn report(&mut self, what: &str, r: &Report) {
        self.failures.extend(r.failure_names().into_iter().map(|n| format!("{what}: {n}")));
    }

    fn require(&mut self, what: &str, ok: bool) {
        if !ok {
            self.failures.push(what.to_string());
        }
    }

    fn step<T>(&mut self, what: &str, r: smash_core::error::Result<T>) -> Option<T> {
        r.map_err(|e| self.failures.push(format!("{what}: {e}"))).ok()
    }
}

/// The module-algebra and split prestacks the later criteria share.
fn one_object_instances() -> Vec<(String, Prestack)> {
    let kz2 = cyclic_group_algebra(2, Q).unwrap();
    let a = dual_numbers(Q);
    vec![
        ("kZ2 sign".into(), module_algebra_prestack(&kz2, &a, &sign_action(&kz2, &a)).unwrap()),
        ("kZ2 trivial".into(), module_algebra_prestack(&kz2, &a, &trivial_action(&kz2, &a).unwrap()).unwrap()),
    ]
}

fn split_instances() -> Vec<SplitPrestack> {
    generate(0, 60)
}

fn axiom_suite() -> Outcome {
    let mut o = Outcome::new();
    let f5 = Field::prime(5).unwrap();
    let mut count = 0;
    let z3 = [vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]];
    let bimonoids = vec![
        ("trivial group", group_algebra(&["e"], &[vec![0]], Q).unwrap()),
        ("Z2 over Q", cyclic_group_algebra(2, Q).unwrap()),
        ("Z2 over F5", cyclic_group_algebra(2, f5).unwrap()),
        ("Z3 over Q", cyclic_group_algebra(3, Q).unwrap()),
        ("Z3 over F5", group_algebra(&["e", "r", "r2"], &z3, f5).unwrap()),
        ("Sweedler over Q", sweedler(Q)),
        ("Sweedler over F5", sweedler(f5)),
    ];
    for (name, h) in &bimonoids {
        o.report(name, &check_bimonoid(h));
        o.report(name, &check_internal_category(&one_object(&h.monoid).unwrap()));
        o.report(name, &check_internal_category(&discrete(&h.comonoid).unwrap()));
        count += 3;
    }
    for field in [Q, f5] {
        let a = dual_numbers(field);
        o.report("Q[x]/(x^2)", &check_monoid(&a));
        o.report("Q[x]/(x^2) one-object", &check_internal_category(&one_object(&a).unwrap()));
        o.report("unit category", &check_internal_category(&unit_category(Backend::Vect(field))));
        let matrix = Comonoid::matrix(2, field);
        o.report("matrix coalgebra", &check_comonoid(&matrix));
        o.report("matrix coalgebra discrete", &check_internal_category(&discrete(&matrix).unwrap()));
        count += 5;
    }
    let h4 = sweedler(Q);
    let a = dual_numbers(Q);
    o.report("Sweedler action", &check_module_algebra(&h4, &a, &sweedler_action(&h4, &a)));
    count += 1;
    let mut cats = vec![
        FiniteCategory::terminal(),
        FiniteCategory::walking_arrow(),
        FiniteCategory::z2(),
        FiniteCategory::group(&["e", "r", "r2"], &z3),
        FiniteCategory::discrete(&["p", "q", "r"]),
        FiniteCategory::poset(&["a", "b", "c"], |x, y| x <= y),
        FiniteCategory::poset(&["a", "b", "c"], |x, y| x == y || (x == 0 && y > 0)),
    ];
    cats.extend(split_instances().iter().flat_map(|sp| sp.fibers.clone()));
    for c in &cats {
        o.report("finite category", &c.validate());
        o.report("finite category internal", &check_internal_category(&c.to_internal().unwrap()));
        count += 2;
    }
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "json") {
            let doc = load(&path).unwrap();
            o.report(&path.file_name().unwrap().to_string_lossy(), &check_document(&doc));
            count += 1;
        }
    }
    o.detail = format!("{count} structures and files");
    o
}

fn classical_oracle() -> Outcome {
    let mut o = Outcome::new();
    let kz2 = cyclic_group_algebra(2, Q).unwrap();
    let a = dual_numbers(Q);
    let actions = [("kZ2 sign", sign_action(&kz2, &a)), ("kZ2 trivial", trivial_action(&kz2, &a).unwrap())];
    let mut pairs = 0;
    for (name, act) in &actions {
        let ps = module_algebra_prestack(&kz2, &a, act).unwrap();
        let Some(sm) = o.step(name, smash(&ps)) else { continue };
        o.require(&format!("{name}: morphism object has dimension 4"), sm.comodcat.cat.a.dim() == 4);
        if let Some(r) = o.step(name, compare_with_classical(&kz2, &a, act, &sm)) {
            o.require(&format!("{name}: 16 basis pairs"), r.checked.len() == 16);
            pairs += r.checked.len();
            o.report(name, &r);
        }
    }
    o.detail = format!("{pairs} basis pairs");
    o
}

fn grothendieck_oracle() -> Outcome {
    let mut o = Outcome::new();
    let instances = split_instances();
    let mut per_base = [0; 3];
    for (i, sp) in instances.iter().enumerate() {
        per_base[i % 3] += 1;
        o.report(&format!("instance {i}"), &sp.validate());
        let Some(ps) = o.step(&format!("instance {i}"), set_prestack(sp)) else { continue };
        let Some(sm) = o.step(&format!("instance {i} smash"), smash(&ps)) else { continue };
        if let Some(c) = o.step(&format!("instance {i}"), compare_with_grothendieck(sp, &sm)) {
            o.report(&format!("instance {i}"), &c.report);
        }
    }
    o.require("at least 50 instances", instances.len() >= 50);
    o.require("every bundled base used", per_base.iter().all(|&n| n > 0));
    o.detail = format!("{} instances (terminal {}, walking arrow {}, Z2 {})", instances.len(), per_base[0], per_base[1], per_base[2]);
    o
}

fn recovery_of(o: &mut Outcome, name: &str, ps: &Prestack) -> Option<(usize, usize)> {
    let sm = o.step(&format!("{name} smash"), smash(ps))?;
    let co = o.step(&format!("{name} coinvariants"), coinvariants(&sm.comodcat))?;
    let rec = o.step(&format!("{name} recovery"), recovery_iso(ps, &sm, &co))?;
    o.report(name, &rec.report);
    let (there, back) = (&rec.functor.phi, &rec.inverse.phi);
    let both = [
        (there.after(back), Mor::identity(back.dom())),
        (back.after(there), Mor::identity(there.dom())),
    ];
    for (composite, id) in both {
        o.require(&format!("{name}: two-sided inverse"), composite.ok() == Some(id));
    }
    o.require(&format!("{name}: carrier of the coinvariants"), co.comodcat.cat.a.dim() == ps.cat.a.dim());
    o.require(&format!("{name}: objects of the coinvariants"), co.comodcat.cat.c.carrier.dim() == ps.cat.c.carrier.dim());
    Some((sm.comodcat.cat.a.dim(), co.comodcat.cat.a.dim()))
}

fn recovery() -> Outcome {
    let mut o = Outcome::new();
    let mut kz2 = None;
    let one_object = one_object_instances();
    for (name, ps) in &one_object {
        let dims = recovery_of(&mut o, name, ps);
        if name == "kZ2 sign" {
            kz2 = dims;
        }
    }
    let instances = split_instances();
    for (i, sp) in instances.iter().enumerate() {
        if let Some(ps) = o.step("split", set_prestack(sp)) {
            recovery_of(&mut o, &format!("instance {i}"), &ps);
        }
    }
    o.require("kZ2 sign: 4 -> 2", kz2 == Some((4, 2)));
    let (s, c) = kz2.unwrap_or_default();
    o.detail = format!("{} instances, kZ2 sign {s} -> {c}", one_object.len() + instances.len());
    o
}

fn lemma_suites() -> Outcome {
    let mut o = Outcome::new();
    let h4 = sweedler(Q);
    let a = dual_numbers(Q);
    let mut all = one_object_instances();
    all.push(("Sweedler".into(), module_algebra_prestack(&h4, &a, &sweedler_action(&h4, &a)).unwrap()));
    for (i, sp) in split_instances().iter().enumerate() {
        all.push((format!("instance {i}"), set_prestack(sp).unwrap()));
    }
    let mut diagrams = 0;
    for (name, ps) in &all {
        let (bd, over) = (lemma_bd_comod_suite(ps), lemma_maps_over_p_suite(ps));
        diagrams += bd.checked.len() + over.checked.len();
        o.report(name, &bd);
        o.report(name, &over);
        // The two squares left to "similar arguments" are among those checked.
        for square in ["maps-over-p.qdelta-target", "maps-over-p.fdelta"] {
            let present = bd.checked.iter().chain(&over.checked).any(|d| d.starts_with(square));
            o.require(&format!("{name}: {square} evaluated"), present);
        }
    }
    o.detail = format!("{} prestacks, {diagrams} diagrams", all.len());
    o
}

fn regularity_and_interchange() -> Outcome {
    let mut o = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for i in 0..100 {
        let field = fields()[i % 2];
        let (_, m, n) = graded_pair(&mut rng, field, "");
        let Some(ct) = o.step("cotensor", cotensor(&m, &n)) else { continue };
        let (da, db) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let r = regularity_witness(&ct.eq, &vect(field, "a", da), &vect(field, "b", db));
        o.report(&format!("regularity {i}"), &r);
    }
    for i in 0..100 {
        let field = fields()[i % 2];
        let (_, m, n) = graded_pair(&mut rng, field, "l");
        let (_, m2, n2) = graded_pair(&mut rng, field, "r");
        let (Some(a), Some(b)) = (o.step("cotensor", cotensor(&m, &n)), o.step("cotensor", cotensor(&m2, &n2))) else {
            continue;
        };
        let Some(inter) = o.step(&format!("interchange {i}"), interchange_iso(&a, &b)) else { continue };
        let (f, g) = (&inter.iso.forward, &inter.iso.inverse);
        o.require(&format!("interchange {i}: g f = 1"), g.after(f).ok() == Some(Mor::identity(f.dom())));
        o.require(&format!("interchange {i}: f g = 1"), f.after(g).ok() == Some(Mor::identity(g.dom())));
        let shuffle = permute(&[&m.carrier, &n.carrier, &m2.carrier, &n2.carrier], &[0, 2, 1, 3]).unwrap();
        let lhs = inter.target.mono.after(f).unwrap();
        let rhs = shuffle.after(&a.mono.tensor(&b.mono).unwrap()).unwrap();
        o.require(&format!("interchange {i}: restricts the shuffle"), lhs == rhs);
    }
    o.detail = "100 regularity + 100 interchange instances over Q and F5".into();
    o
}

fn negative_controls() -> Outcome {
    let mut o = Outcome::new();
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/negative");
    let mut files: Vec<_> = std::fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    let mut named = Vec::new();
    for path in &files {
        let name = path.file_name().unwrap().to_string_lossy().to_string();
        let Some(doc) = o.step(&name, load(path)) else { continue };
        let report = check_document(&doc);
        o.require(&format!("{name}: documents its failures"), !doc.expect_failures().is_empty());
        if !meets_expectation(&doc, &report) {
            o.failures.push(format!("{name}: expected {:?}, got {:?}", doc.expect_failures(), report.failure_names()));
        }
        named.extend(doc.expect_failures().to_vec());
    }
    o.require("at least 5 negative fixtures", files.len() >= 5);
    for needle in ["comonoid.coassociativity", "prestack.phi.", "module-algebra.measuring"] {
        o.require(&format!("a fixture fails {needle}"), named.iter().any(|n| n.contains(needle)));
    }
    o.detail = format!("{} fixtures", files.len());
    o
}

fn main() {
    let criteria: [(&str, &str, Duration, fn() -> Outcome); 7] = [
        ("1", "axiom suite", Duration::from_secs(10), axiom_suite),
        ("2", "classical smash oracle", Duration::from_secs(1), classical_oracle),
        ("3", "Grothendieck oracle", Duration::from_secs(30), grothendieck_oracle),
        ("4", "recovery", Duration::from_secs(10), recovery),
        ("5", "lemma suites", Duration::MAX, lemma_suites),
        ("6", "regularity and interchange", Duration::from_secs(30), regularity_and_interchange),
        ("7", "negative controls", Duration::MAX, negative_controls),
    ];
    let mut failed = 0;
    for (id, name, budget, run) in criteria {
        let start = Instant::now();
        let mut out = run();
        let took = start.elapsed();
        if took > budget {
            out.failures.push(format!("took {took:.2?}, budget {budget:.0?}"));
        }
        let verdict = if out.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("criterion {id} {verdict}: {name} ({}; {took:.2?})", out.detail);
        for f in out.failures.iter().take(10) {
            println!("    {f}");
        }
        failed += usize::from(!out.failures.is_empty());
    }
    if failed > 0 {
        println!("{failed} of 7 criteria failed");
        std::process::exit(1);
    }
}
