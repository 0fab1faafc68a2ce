//! Finite categories, split prestacks `F: B^op → Cat` in FinSet, and the
//! classical Grothendieck construction.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::coalgebra::Comonoid;
use crate::error::{Error, Result};
use crate::internal::{promote_comonoidal, InternalCategory};
use crate::monoidal::{Backend, Mor, Obj};
use crate::prestack::{action_domains, Prestack};
use crate::report::Report;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

/// A finite category with composition in diagrammatic order:
/// `compose[f][g] = f ; g` (first `f`, then `g`) when `target f = source g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteCategory {
    pub objects: Vec<String>,
    pub arrows: Vec<Arrow>,
    pub identities: Vec<usize>,
    pub compose: Vec<Vec<Option<usize>>>,
}

impl FiniteCategory {
    /// Builds the category from arrows and identities, filling composites with `comp`.
    pub fn build(
        objects: Vec<String>,
        arrows: Vec<Arrow>,
        identities: Vec<usize>,
        comp: impl Fn(usize, usize) -> Option<usize>,
    ) -> FiniteCategory {
        let n = arrows.len();
        let compose = (0..n)
            .map(|f| (0..n).map(|g| if arrows[f].target == arrows[g].source { comp(f, g) } else { None }).collect())
            .collect();
        FiniteCategory { objects, arrows, identities, compose }
    }

    pub fn terminal() -> FiniteCategory {
        let arrows = vec![Arrow { name: "id".into(), source: 0, target: 0 }];
        FiniteCategory::build(vec!["*".into()], arrows, vec![0], |_, _| Some(0))
    }

    /// `0 → 1`.
    pub fn walking_arrow() -> FiniteCategory {
        let arrows = vec![
            Arrow { name: "id0".into(), source: 0, target: 0 },
            Arrow { name: "f".into(), source: 0, target: 1 },
            Arrow { name: "id1".into(), source: 1, target: 1 },
        ];
        FiniteCategory::build(vec!["0".into(), "1".into()], arrows, vec![0, 2], |f, g| match (f, g) {
            (0, x) | (x, 2) => Some(x),
            _ => None,
        })
    }

    /// A group as a one-object groupoid.
    pub fn group(labels: &[&str], table: &[Vec<usize>]) -> FiniteCategory {
        let arrows = labels.iter().map(|l| Arrow { name: l.to_string(), source: 0, target: 0 }).collect();
        let e = (0..table.len()).find(|&e| (0..table.len()).all(|a| table[e][a] == a)).unwrap_or(0);
        // Diagrammatic: f ; g is the group product g·f.
        FiniteCategory::build(vec!["*".into()], arrows, vec![e], |f, g| Some(table[g][f]))
    }

    pub fn z2() -> FiniteCategory {
        FiniteCategory::group(&["e", "g"], &[vec![0, 1], vec![1, 0]])
    }

    pub fn discrete(labels: &[&str]) -> FiniteCategory {
        FiniteCategory::poset(labels, |x, y| x == y)
    }

    /// The thin category of a partial order given by `leq`.
    pub fn poset(labels: &[&str], leq: impl Fn(usize, usize) -> bool) -> FiniteCategory {
        let n = labels.len();
        let mut arrows = Vec::new();
        let mut index = vec![vec![None; n]; n];
        for x in 0..n {
            for y in 0..n {
                if leq(x, y) {
                    let name = if x == y { format!("id_{}", labels[x]) } else { format!("{}<{}", labels[x], labels[y]) };
                    index[x][y] = Some(arrows.len());
                    arrows.push(Arrow { name, source: x, target: y });
                }
            }
        }
        let identities = (0..n).map(|x| index[x][x].expect("reflexive")).collect();
        let ends: Vec<(usize, usize)> = arrows.iter().map(|a| (a.source, a.target)).collect();
        let objects = labels.iter().map(|l| l.to_string()).collect();
        FiniteCategory::build(objects, arrows, identities, |f, g| index[ends[f].0][ends[g].1])
    }

    pub fn hom(&self, x: usize, y: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrows.len()).filter(move |&f| self.arrows[f].source == x && self.arrows[f].target == y)
    }

    pub fn validate(&self) -> Report {
        let mut r = Report::new();
        let (n, no) = (self.arrows.len(), self.objects.len());
        let typed = self.arrows.iter().all(|a| a.source < no && a.target < no)
            && self.identities.len() == no
            && self.identities.iter().enumerate().all(|(x, &i)| i < n && self.arrows[i].source == x && self.arrows[i].target == x)
            && self.compose.len() == n
            && self.compose.iter().all(|row| row.len() == n);
        if !r.check("fincat.shape", typed, || "arrows, identities or table out of range".into()) {
            return r;
        }
        let composable = |f: usize, g: usize| self.arrows[f].target == self.arrows[g].source;
        let total = (0..n).all(|f| (0..n).all(|g| composable(f, g) == self.compose[f][g].is_some()));
        r.check("fincat.composition-total", total, || "composite missing or given for a non-composable pair".into());
        let typed = (0..n).all(|f| {
            (0..n).all(|g| {
                self.compose[f][g].is_none_or(|h| {
                    h < n && self.arrows[h].source == self.arrows[f].source && self.arrows[h].target == self.arrows[g].target
                })
            })
        });
        if !r.check("fincat.composition-typed", typed, || "composite has the wrong ends".into()) {
            return r;
        }
        let unital = (0..n).all(|f| {
            let a = &self.arrows[f];
            self.compose[self.identities[a.source]][f] == Some(f) && self.compose[f][self.identities[a.target]] == Some(f)
        });
        r.check("fincat.unit", unital, || "identities are not units".into());
        let assoc = (0..n).all(|f| {
            (0..n).all(|g| {
                (0..n).all(|h| match (self.compose[f][g], self.compose[g][h]) {
                    (Some(fg), Some(gh)) => self.compose[fg][h] == self.compose[f][gh],
                    _ => true,
                })
            })
        });
        r.check("fincat.associativity", assoc, || "composition is not associative".into());
        r
    }

    pub fn object_obj(&self) -> Result<Obj> {
        Obj::atom(Backend::Set, self.objects.iter().cloned())
    }

    pub fn arrow_obj(&self) -> Result<Obj> {
        Obj::atom(Backend::Set, self.arrows.iter().map(|a| a.name.clone()))
    }

    /// The internal category in FinSet with the diagonal comonoid of objects.
    pub fn to_internal(&self) -> Result<InternalCategory> {
        self.validate().into_result()?;
        let c = Comonoid::group_like(&self.object_obj()?);
        let a = self.arrow_obj()?;
        let (n, no) = (a.dim(), c.carrier.dim());
        let sigma = Mor::from_index_map(&a, &c.carrier.tensor(&a)?, |i| self.arrows[i].source * n + i)?;
        let tau = Mor::from_index_map(&a, &a.tensor(&c.carrier)?, |i| i * no + self.arrows[i].target)?;
        let u = Mor::function(&c.carrier, &a, self.identities.clone())?;
        let m = Mor::from_index_map(&a.tensor(&a)?, &a, |k| self.compose[k / n][k % n].unwrap_or(0))?;
        InternalCategory::from_ambient(c, a, sigma, tau, u, &m)
    }

    /// Reads a FinSet internal category back as a finite category.
    pub fn from_internal(x: &InternalCategory) -> Result<FiniteCategory> {
        let (sigma, tau, u, m) = match (x.sigma.table(), x.tau.table(), x.u.table(), x.m.table()) {
            (Some(s), Some(t), Some(u), Some(m)) => (s, t, u, m),
            _ => return Err(Error::BackendMismatch("not a FinSet internal category".into())),
        };
        let (n, no) = (x.a.dim(), x.c.carrier.dim());
        let arrows = (0..n).map(|i| Arrow { name: x.a.label(i), source: sigma[i] / n, target: tau[i] % no }).collect();
        let mut compose = vec![vec![None; n]; n];
        let mono = x.aa.mono.table().expect("FinSet");
        for (k, &pair) in mono.iter().enumerate() {
            compose[pair / n][pair % n] = Some(m[k]);
        }
        Ok(FiniteCategory { objects: x.c.carrier.labels(), arrows, identities: u.to_vec(), compose })
    }
}

/// A functor given on objects and arrows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Functor {
    pub objects: Vec<usize>,
    pub arrows: Vec<usize>,
}

impl Functor {
    pub fn identity(c: &FiniteCategory) -> Functor {
        Functor { objects: (0..c.objects.len()).collect(), arrows: (0..c.arrows.len()).collect() }
    }

    /// `self ∘ g`.
    pub fn after(&self, g: &Functor) -> Functor {
        Functor {
            objects: g.objects.iter().map(|&x| self.objects[x]).collect(),
            arrows: g.arrows.iter().map(|&f| self.arrows[f]).collect(),
        }
    }
}

pub fn check_functor(r: &mut Report, name: &str, func: &Functor, from: &FiniteCategory, to: &FiniteCategory) -> bool {
    let shaped = func.objects.len() == from.objects.len()
        && func.arrows.len() == from.arrows.len()
        && func.objects.iter().all(|&x| x < to.objects.len())
        && func.arrows.iter().all(|&f| f < to.arrows.len());
    if !r.check(&format!("{name}.shape"), shaped, || "functor tables have the wrong size".into()) {
        return false;
    }
    let ends = from.arrows.iter().zip(&func.arrows).all(|(a, &fa)| {
        to.arrows[fa].source == func.objects[a.source] && to.arrows[fa].target == func.objects[a.target]
    });
    let ids = (0..from.objects.len()).all(|x| func.arrows[from.identities[x]] == to.identities[func.objects[x]]);
    let n = from.arrows.len();
    let comp = (0..n).all(|f| {
        (0..n).all(|g| {
            from.compose[f][g].is_none_or(|h| to.compose[func.arrows[f]][func.arrows[g]] == Some(func.arrows[h]))
        })
    });
    let a = r.check(&format!("{name}.ends"), ends, || "arrows sent to arrows with the wrong ends".into());
    let b = r.check(&format!("{name}.identities"), ids, || "identities not preserved".into());
    let c = r.check(&format!("{name}.composition"), comp, || "composition not preserved".into());
    a && b && c
}

/// A strict functor `F: B^op → Cat` on a finite base: a fiber per object and,
/// for each `β: b → b'`, a transition functor `F(β): F(b') → F(b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitPrestack {
    pub base: FiniteCategory,
    pub fibers: Vec<FiniteCategory>,
    pub transitions: Vec<Functor>,
}

impl SplitPrestack {
    pub fn validate(&self) -> Report {
        let mut r = Report::new();
        r.absorb("split.base", self.base.validate());
        let shaped = self.fibers.len() == self.base.objects.len() && self.transitions.len() == self.base.arrows.len();
        if !r.check("split.shape", shaped, || "need one fiber per object and one transition per arrow".into()) || !r.pass() {
            return r;
        }
        for (b, fib) in self.fibers.iter().enumerate() {
            r.absorb(&format!("split.fiber.{}", self.base.objects[b]), fib.validate());
        }
        if !r.pass() {
            return r;
        }
        let mut functors = true;
        for (i, (a, t)) in self.base.arrows.iter().zip(&self.transitions).enumerate() {
            let name = format!("split.transition.{}", self.base.arrows[i].name);
            functors &= check_functor(&mut r, &name, t, &self.fibers[a.target], &self.fibers[a.source]);
        }
        if !functors {
            return r;
        }
        let ids = self.base.identities.iter().enumerate().all(|(b, &i)| self.transitions[i] == Functor::identity(&self.fibers[b]));
        r.check("split.strict-identity", ids, || "F(id) is not the identity".into());
        let n = self.base.arrows.len();
        let comp = (0..n).all(|f| {
            (0..n).all(|g| {
                self.base.compose[f][g].is_none_or(|h| self.transitions[h] == self.transitions[f].after(&self.transitions[g]))
            })
        });
        r.check("split.strict-composition", comp, || "F(f ; g) differs from F(f) ∘ F(g)".into());
        r
    }

    /// Objects of the total space: `(b, x)` for `x ∈ F(b)`, base-major.
    pub fn total_objects(&self) -> Vec<(usize, usize)> {
        self.fibers.iter().enumerate().flat_map(|(b, f)| (0..f.objects.len()).map(move |x| (b, x))).collect()
    }

    fn total_arrows(&self) -> Vec<(usize, usize)> {
        self.fibers.iter().enumerate().flat_map(|(b, f)| (0..f.arrows.len()).map(move |x| (b, x))).collect()
    }

    /// The disjoint union of the fibers, labelled `b::x`.
    pub fn fiberwise(&self) -> FiniteCategory {
        let objs = self.total_objects();
        let arrs = self.total_arrows();
        let obj_at = |b: usize, x: usize| objs.iter().position(|&o| o == (b, x)).expect("object");
        let arr_at = |b: usize, f: usize| arrs.iter().position(|&o| o == (b, f)).expect("arrow");
        let objects = objs.iter().map(|&(b, x)| format!("{}::{}", self.base.objects[b], self.fibers[b].objects[x])).collect();
        let arrows = arrs
            .iter()
            .map(|&(b, f)| {
                let a = &self.fibers[b].arrows[f];
                Arrow {
                    name: format!("{}::{}", self.base.objects[b], a.name),
                    source: obj_at(b, a.source),
                    target: obj_at(b, a.target),
                }
            })
            .collect();
        let identities = objs.iter().map(|&(b, x)| arr_at(b, self.fibers[b].identities[x])).collect();
        FiniteCategory::build(objects, arrows, identities, |f, g| {
            let ((b, f), (_, g)) = (arrs[f], arrs[g]);
            self.fibers[b].compose[f][g].map(|h| arr_at(b, h))
        })
    }
}

/// The prestack of `F`: `C` and `A` are the disjoint unions of the fiber
/// objects and arrows, `D` and `B` the base objects and arrows, and `f`, `φ`
/// apply the transition functors.
pub fn set_prestack(sp: &SplitPrestack) -> Result<Prestack> {
    sp.validate().into_result()?;
    let total = sp.fiberwise();
    let cat = total.to_internal()?;
    let b = sp.base.to_internal()?;
    let bb = Comonoid::group_like(&b.a);
    let base = promote_comonoidal(&b, &bb.delta, &bb.epsilon)?;
    let objs = sp.total_objects();
    let arrs = sp.total_arrows();
    let nd = sp.base.objects.len();
    let (c, a) = (&cat.c.carrier, &cat.a);
    let p = Mor::from_index_map(c, &c.tensor(&base.d().carrier)?, |i| i * nd + objs[i].0)?;
    let pi = Mor::from_index_map(a, &a.tensor(&base.d().carrier)?, |i| i * nd + arrs[i].0)?;
    let (bc, ba) = action_domains(&cat, &base, &p, &pi)?;
    let (nc, na) = (c.dim(), a.dim());
    // Only pairs with target β = base of x survive the restriction.
    let f_amb = Mor::from_index_map(&b.a.tensor(c)?, c, |k| {
        let (beta, (b1, x)) = (k / nc, objs[k % nc]);
        let arrow = &sp.base.arrows[beta];
        if arrow.target != b1 {
            return 0;
        }
        let y = sp.transitions[beta].objects[x];
        objs.iter().position(|&o| o == (arrow.source, y)).expect("object")
    })?;
    let phi_amb = Mor::from_index_map(&b.a.tensor(a)?, a, |k| {
        let (beta, (b1, xi)) = (k / na, arrs[k % na]);
        let arrow = &sp.base.arrows[beta];
        if arrow.target != b1 {
            return 0;
        }
        let y = sp.transitions[beta].arrows[xi];
        arrs.iter().position(|&o| o == (arrow.source, y)).expect("arrow")
    })?;
    let f = f_amb.after(&bc.mono)?;
    let phi = phi_amb.after(&ba.mono)?;
    Ok(Prestack { cat, base, p, pi, f, phi })
}

/// Objects `(b, x)`; arrows `(β, ξ): (b, x) → (b', x')` with `β: b → b'` and
/// `ξ: x → F(β) x'` in `F(b)`; `(β, ξ) ; (β', ξ') = (β ; β', ξ ; F(β) ξ')`.
pub fn direct_grothendieck(sp: &SplitPrestack) -> Result<FiniteCategory> {
    Ok(grothendieck_keyed(sp)?.0)
}

/// The Grothendieck construction with each arrow's key `(β, ξ, x')`.
fn grothendieck_keyed(sp: &SplitPrestack) -> Result<(FiniteCategory, Vec<(usize, usize, usize)>)> {
    sp.validate().into_result()?;
    let objs = sp.total_objects();
    let obj_at = |b: usize, x: usize| objs.iter().position(|&o| o == (b, x)).expect("object");
    let mut arrows = Vec::new();
    let mut keys = Vec::new();
    for (beta, arrow) in sp.base.arrows.iter().enumerate() {
        let (b, b1) = (arrow.source, arrow.target);
        let fib = &sp.fibers[b];
        for x1 in 0..sp.fibers[b1].objects.len() {
            let image = sp.transitions[beta].objects[x1];
            for x in 0..fib.objects.len() {
                for xi in fib.hom(x, image) {
                    keys.push((beta, xi, x1));
                    arrows.push(Arrow {
                        name: format!("({}, {})", arrow.name, fib.arrows[xi].name),
                        source: obj_at(b, x),
                        target: obj_at(b1, x1),
                    });
                }
            }
        }
    }
    let objects = objs.iter().map(|&(b, x)| format!("{}::{}", sp.base.objects[b], sp.fibers[b].objects[x])).collect();
    let find = |key: (usize, usize, usize)| keys.iter().position(|&k| k == key);
    let identities = objs
        .iter()
        .map(|&(b, x)| find((sp.base.identities[b], sp.fibers[b].identities[x], x)).expect("identity"))
        .collect();
    let grothendieck = FiniteCategory::build(objects, arrows, identities, |f, g| {
        let ((beta, xi, _), (beta1, xi1, x2)) = (keys[f], keys[g]);
        let b = sp.base.arrows[beta].source;
        let composite = sp.base.compose[beta][beta1]?;
        let moved = sp.transitions[beta].arrows[xi1];
        let xi2 = sp.fibers[b].compose[xi][moved]?;
        find((composite, xi2, x2))
    });
    Ok((grothendieck, keys))
}

/// An isomorphism of finite categories given by bijections on objects and arrows.
pub fn check_isomorphism(r: &mut Report, name: &str, objects: &[usize], arrows: &[usize], from: &FiniteCategory, to: &FiniteCategory) {
    let bijective = |v: &[usize], n: usize| {
        let mut seen = vec![false; n];
        v.len() == n && v.iter().all(|&i| i < n && !std::mem::replace(&mut seen[i], true))
    };
    let ok = r.check(&format!("{name}.objects-bijective"), bijective(objects, to.objects.len()), || {
        format!("{} objects onto {}", from.objects.len(), to.objects.len())
    });
    let ok = r.check(&format!("{name}.arrows-bijective"), bijective(arrows, to.arrows.len()), || {
        format!("{} arrows onto {}", from.arrows.len(), to.arrows.len())
    }) && ok;
    if ok {
        let func = Functor { objects: objects.to_vec(), arrows: arrows.to_vec() };
        check_functor(r, &format!("{name}.functor"), &func, from, to);
    }
}

/// The outcome of an oracle comparison; the maps pair labels of the smash
/// product with labels of the Grothendieck construction.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub report: Report,
    pub objects: Vec<(String, String)>,
    pub arrows: Vec<(String, String)>,
}

/// Compares a FinSet smash product with the Grothendieck construction: a
/// smash arrow `(ξ, β, x')` of `A □_C (B □_D C)` corresponds to `(β, ξ)`
/// with target `x'`, and objects correspond by position.
pub fn compare_with_grothendieck(sp: &SplitPrestack, smash: &crate::prestack::Smash) -> Result<Certificate> {
    let ours = FiniteCategory::from_internal(&smash.comodcat.cat)?;
    let (groth, keys) = grothendieck_keyed(sp)?;
    let emb = smash.embedding.table().ok_or_else(|| Error::BackendMismatch("FinSet smash expected".into()))?;
    let objs = sp.total_objects();
    let arrs = sp.total_arrows();
    let (nb, nc) = (sp.base.arrows.len(), objs.len());
    let arrows: Vec<usize> = emb
        .iter()
        .map(|&k| {
            let (xi, beta, x1) = (k / (nb * nc), (k / nc) % nb, k % nc);
            keys.iter().position(|&key| key == (beta, arrs[xi].1, objs[x1].1)).unwrap_or(usize::MAX)
        })
        .collect();
    let mut r = Report::new();
    let same_objects = smash.comodcat.cat.c.carrier.labels() == groth.objects;
    r.check("grothendieck.object-labels", same_objects, || "object labels differ".into());
    let objects: Vec<usize> = (0..nc).collect();
    check_isomorphism(&mut r, "grothendieck", &objects, &arrows, &ours, &groth);
    let name = |v: &[Arrow], i: usize| v.get(i).map_or("?".to_string(), |a| a.name.clone());
    Ok(Certificate {
        report: r,
        objects: ours.objects.iter().cloned().zip(groth.objects.iter().cloned()).collect(),
        arrows: arrows.iter().enumerate().map(|(i, &j)| (name(&ours.arrows, i), name(&groth.arrows, j))).collect(),
    })
}

/// A random partial order on `n ≤ 3` points as a thin category.
fn random_poset(rng: &mut impl Rng, n: usize) -> FiniteCategory {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut leq = vec![vec![false; n]; n];
    for i in 0..n {
        leq[i][i] = true;
        for j in i + 1..n {
            if rng.gen_bool(0.5) {
                leq[order[i]][order[j]] = true;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if leq[i][k] && leq[k][j] {
                    leq[i][j] = true;
                }
            }
        }
    }
    let labels: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    FiniteCategory::poset(&refs, |x, y| leq[x][y])
}

/// The functor between thin categories induced by an object map, if monotone.
fn thin_functor(from: &FiniteCategory, to: &FiniteCategory, objects: &[usize]) -> Option<Functor> {
    let arrows = from
        .arrows
        .iter()
        .map(|a| to.hom(objects[a.source], objects[a.target]).next())
        .collect::<Option<Vec<usize>>>()?;
    Some(Functor { objects: objects.to_vec(), arrows })
}

/// The three bundled bases.
pub fn bundled_bases() -> [FiniteCategory; 3] {
    [FiniteCategory::terminal(), FiniteCategory::walking_arrow(), FiniteCategory::z2()]
}

/// A random split prestack over `base` (one of the bundled bases) with thin
/// fibers of at most three objects and random strict transitions.
pub fn random_split_prestack(rng: &mut impl Rng, base: &FiniteCategory) -> SplitPrestack {
    loop {
        let fibers: Vec<FiniteCategory> = (0..base.objects.len()).map(|_| {
            let n = rng.gen_range(1..=3);
            random_poset(rng, n)
        }).collect();
        let mut transitions = Vec::with_capacity(base.arrows.len());
        let mut chosen = vec![None; base.arrows.len()];
        for (i, &id) in base.identities.iter().enumerate() {
            chosen[id] = Some(Functor::identity(&fibers[i]));
        }
        // Any remaining arrow gets a random monotone map; for a group base it
        // must also be an involution so that F(g ; g) = id.
        let mut ok = true;
        for (i, a) in base.arrows.iter().enumerate() {
            if chosen[i].is_some() {
                continue;
            }
            let (from, to) = (&fibers[a.target], &fibers[a.source]);
            let found = (0..32).find_map(|_| {
                let objects: Vec<usize> = (0..from.objects.len()).map(|_| rng.gen_range(0..to.objects.len())).collect();
                thin_functor(from, to, &objects)
            });
            match found {
                Some(func) => chosen[i] = Some(func),
                None => ok = false,
            }
        }
        if !ok {
            continue;
        }
        transitions.extend(chosen.into_iter().map(|f| f.expect("assigned")));
        let sp = SplitPrestack { base: base.clone(), fibers, transitions };
        if sp.validate().pass() {
            return sp;
        }
    }
}

/// `count` instances cycling through the bundled bases.
pub fn generate(seed: u64, count: usize) -> Vec<SplitPrestack> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let bases = bundled_bases();
    (0..count).map(|i| random_split_prestack(&mut rng, &bases[i % 3])).collect()
}

/// `F(1) = {a, b}` and `F(0) = {*}` discrete over `0 → 1`, with the
/// transition collapsing both objects.
pub fn collapsing_arrow() -> SplitPrestack {
    let base = FiniteCategory::walking_arrow();
    let f0 = FiniteCategory::discrete(&["*"]);
    let f1 = FiniteCategory::discrete(&["a", "b"]);
    let collapse = Functor { objects: vec![0, 0], arrows: vec![0, 0] };
    let transitions = vec![Functor::identity(&f0), collapse, Functor::identity(&f1)];
    SplitPrestack { base, fibers: vec![f0, f1], transitions }
}

/// A two-point discrete fiber over the one-object `ℤ/2`, swapped by `g`.
pub fn swapped_pair() -> SplitPrestack {
    let fib = FiniteCategory::discrete(&["a", "b"]);
    let swap = Functor { objects: vec![1, 0], arrows: vec![1, 0] };
    SplitPrestack { base: FiniteCategory::z2(), fibers: vec![fib.clone()], transitions: vec![Functor::identity(&fib), swap] }
}

/// The single fiber `a < b` over the terminal category.
pub fn terminal_chain() -> SplitPrestack {
    let fib = FiniteCategory::poset(&["a", "b"], |x, y| x <= y);
    SplitPrestack { base: FiniteCategory::terminal(), fibers: vec![fib.clone()], transitions: vec![Functor::identity(&fib)] }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::internal::check_internal_category;
    use crate::prestack::{check_prestack, coinvariants, lemma_bd_comod_suite, lemma_maps_over_p_suite, recovery_iso, smash};

    #[test]
    fn bundled_categories_validate() {
        for c in bundled_bases() {
            assert!(c.validate().pass());
            let x = c.to_internal().unwrap();
            assert!(check_internal_category(&x).pass());
            assert_eq!(FiniteCategory::from_internal(&x).unwrap(), c);
        }
        let mut bad = FiniteCategory::walking_arrow();
        bad.compose[0][1] = Some(0);
        assert_eq!(bad.validate().failure_names(), ["fincat.composition-typed"]);
    }

    #[test]
    fn grothendieck_counts() {
        let g = direct_grothendieck(&collapsing_arrow()).unwrap();
        assert_eq!((g.objects.len(), g.arrows.len()), (3, 5));
        assert!(g.validate().pass());
        let g = direct_grothendieck(&swapped_pair()).unwrap();
        assert_eq!((g.objects.len(), g.arrows.len()), (2, 4));
        // Connected groupoid: exactly one arrow between any two objects.
        assert!((0..2).all(|x| (0..2).all(|y| g.hom(x, y).count() == 1)));
        let t = terminal_chain();
        assert_eq!(direct_grothendieck(&t).unwrap().arrows.len(), t.fibers[0].arrows.len());
    }

    #[test]
    fn set_prestacks_and_smash() {
        for sp in [collapsing_arrow(), swapped_pair(), terminal_chain()] {
            let ps = set_prestack(&sp).unwrap();
            assert_eq!(ps.cat.c.carrier.dim(), sp.total_objects().len());
            let r = check_prestack(&ps);
            assert!(r.pass(), "{r}");
            assert!(lemma_bd_comod_suite(&ps).pass());
            assert!(lemma_maps_over_p_suite(&ps).pass());
            let sm = smash(&ps).unwrap();
            let r = compare_with_grothendieck(&sp, &sm).unwrap().report;
            assert!(r.pass(), "{r}");
            let coinv = coinvariants(&sm.comodcat).unwrap();
            recovery_iso(&ps, &sm, &coinv).unwrap();
        }
    }

    #[test]
    fn broken_transition_rejected() {
        let mut sp = swapped_pair();
        sp.transitions[1] = Functor { objects: vec![0, 0], arrows: vec![0, 0] };
        let names = sp.validate().failure_names();
        assert_eq!(names, ["split.strict-composition"]);
    }

    #[test]
    fn generator_is_deterministic() {
        let a = generate(0, 6);
        assert_eq!(a, generate(0, 6));
        for sp in &a {
            assert!(sp.fibers.iter().all(|f| f.objects.len() <= 3));
        }
    }
}
