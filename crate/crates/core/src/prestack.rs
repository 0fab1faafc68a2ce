//! Comodule categories over a comonoidal internal category `(D, B)`,
//! prestacks, smash products `A ⋊ B`, coinvariants and the recovery of a
//! prestack from the coinvariants of its smash product.

use crate::coalgebra::{
    check_comodule, check_comonoid, check_comonoid_map, comonoid_map_from_coaction, record_map_over, Comodule, Comonoid,
    Side,
};
use crate::cotensor::{
    associate, cotensor, cotensor_comonoid, cotensor_of_maps, interchange_iso, left_unitor, right_unitor, Cotensor,
    Over,
};
use crate::error::{Error, Result};
use crate::internal::{
    check_internal_category, check_internal_functor, discrete, promote_comonoidal, tensor_internal, unit_category,
    ComonoidalCategory, InternalCategory, InternalFunctor,
};
use crate::monoidal::{braiding, equalizer_of, permute, Mor, Obj};
use crate::report::Report;

/// A right `B`-comodule category: `(p, π): A → A ⊗ B`.
#[derive(Clone, Debug)]
pub struct ComoduleCategory {
    pub cat: InternalCategory,
    pub base: ComonoidalCategory,
    /// `C → C ⊗ D`.
    pub p: Mor,
    /// `A → A ⊗ B`.
    pub pi: Mor,
}

pub fn check_comodule_category(x: &ComoduleCategory) -> Report {
    let mut r = Report::new();
    let c = &x.cat.c;
    let d = x.base.d();
    r.absorb("comodcat.p-coaction", check_comodule(&Comodule::right(&c.carrier, d, x.p.clone())));
    match c.tensor(d) {
        Ok(cd) => r.absorb("comodcat.p-comonoid-map", check_comonoid_map(&x.p, c, &cd)),
        Err(e) => {
            r.check("comodcat.p-comonoid-map", false, || e.to_string());
        }
    }
    r.attempt("comodcat.q-induces-p", comonoid_map_from_coaction(&x.p, c, d));
    r.absorb("comodcat.pi-coaction", check_comodule(&Comodule::right(&x.cat.a, &x.base.maps, x.pi.clone())));
    if let Some(target) = r.attempt("comodcat.target", tensor_internal(&x.cat, &x.base.base)) {
        let func = InternalFunctor { f: x.p.clone(), phi: x.pi.clone() };
        r.absorb("comodcat.functor", check_internal_functor(&func, &x.cat, &target));
    }
    r
}

/// A prestack over `(D, B)`: a coaction `(p, π)` of the discrete `(D, D)` on
/// `(C, A)` together with the actions `f: B □_D C → C` and `φ: B □_D A → A`.
#[derive(Clone, Debug)]
pub struct Prestack {
    pub cat: InternalCategory,
    pub base: ComonoidalCategory,
    /// `C → C ⊗ D`.
    pub p: Mor,
    /// `A → A ⊗ D`.
    pub pi: Mor,
    pub f: Mor,
    pub phi: Mor,
}

/// Everything built from a prestack's data before any axiom is checked.
#[derive(Clone, Debug)]
pub struct Derived {
    pub q: Mor,
    /// `B` as a `(D, D)`-bicomodule.
    pub b: Comodule,
    /// `C` with the left coaction `β p`.
    pub c_left: Comodule,
    /// `A` with the left coaction `β π`.
    pub a_left: Comodule,
    /// `B □_D C` with its induced left `D`-coaction.
    pub bc: Cotensor,
    pub ba: Cotensor,
    /// `B □_D C` as a comonoid with `Δ = δ □_d d`.
    pub delta: Comonoid,
    /// `δ □_d σ: B □_D A → (B □_D C) ⊗ (B □_D A)`.
    pub sigma_ba: Mor,
    /// `δ □_d τ: B □_D A → (B □_D A) ⊗ (B □_D C)`.
    pub tau_ba: Mor,
    pub dc: Cotensor,
    pub da: Cotensor,
    pub bd: Cotensor,
    /// `f_*Δ: B □_D C → C ⊗ (B □_D C)`.
    pub f_delta: Mor,
    /// `t_*Δ: B □_D C → (B □_D C) ⊗ C`.
    pub t_delta: Mor,
    /// `q_*Δ: B □_D C → (B □_D C) ⊗ B`.
    pub q_delta: Mor,
}

impl Prestack {
    /// The trivial prestack over the unit `𝕀`: `f` and `φ` are the unitors.
    pub fn over_unit(cat: &InternalCategory) -> Result<Prestack> {
        let backend = cat.backend();
        let unit = unit_category(backend);
        let one = Mor::identity(&Obj::unit(backend));
        let base = promote_comonoidal(&unit, &one, &one)?;
        let p = cat.c.id();
        let pi = cat.id();
        let b = base.base.bicomodule();
        let bc = cotensor(&b, &Comodule::left(&cat.c.carrier, &base.base.c, p.clone()))?;
        let ba = cotensor(&b, &Comodule::left(&cat.a, &base.base.c, pi.clone()))?;
        let f = bc.mono.retyped(&bc.obj, &cat.c.carrier)?;
        let phi = ba.mono.retyped(&ba.obj, &cat.a)?;
        Ok(Prestack { cat: cat.clone(), base, p, pi, f, phi })
    }

    pub fn d(&self) -> &Comonoid {
        self.base.d()
    }

    /// `β ∘ p: C → D ⊗ C`.
    pub fn beta_p(&self) -> Result<Mor> {
        braiding(&self.cat.c.carrier, &self.d().carrier)?.after(&self.p)
    }

    pub fn beta_pi(&self) -> Result<Mor> {
        braiding(&self.cat.a, &self.d().carrier)?.after(&self.pi)
    }

    pub fn derive(&self) -> Result<Derived> {
        let d = self.d();
        let cc = &self.cat.c;
        let q = comonoid_map_from_coaction(&self.p, cc, d)?;
        let b = self.base.base.bicomodule();
        let (bc, ba) = action_domains(&self.cat, &self.base, &self.p, &self.pi)?;
        let c_left = bc.n.clone();
        let a_left = ba.n.clone();
        let delta = cotensor_comonoid(&bc, &self.base.maps, cc)?;
        let delta = Comonoid { carrier: bc.obj.clone(), ..delta };
        let over_d = Over::middle(&d.delta);
        let inter = interchange_iso(&bc, &ba)?;
        let sigma_ba = cotensor_of_maps(&ba, &inter.target, &self.base.maps.delta, &self.cat.sigma, over_d)?;
        let sigma_ba = inter.iso.inverse.after(&sigma_ba)?;
        let inter = interchange_iso(&ba, &bc)?;
        let tau_ba = cotensor_of_maps(&ba, &inter.target, &self.base.maps.delta, &self.cat.tau, over_d)?;
        let tau_ba = inter.iso.inverse.after(&tau_ba)?;
        let dreg = d.regular_bi();
        let dc = cotensor(&dreg, &c_left)?;
        let da = cotensor(&dreg, &a_left)?;
        let bd = cotensor(&b, &dreg)?;
        let idd = d.id();
        let id_bc = Mor::identity(&bc.obj);
        let f_delta = self.f.tensor(&id_bc)?.after(&delta.delta)?;
        let t_c = cotensor_of_maps(&bc, &dc, &self.base.t, &cc.id(), Over::middle(&idd))?;
        let t_c = left_unitor(&dc)?.forward.after(&t_c)?;
        let t_delta = id_bc.tensor(&t_c)?.after(&delta.delta)?;
        let b_q = cotensor_of_maps(&bc, &bd, &b.carrier_id(), &q, Over::middle(&idd))?;
        let b_q = right_unitor(&bd)?.forward.after(&b_q)?;
        let q_delta = id_bc.tensor(&b_q)?.after(&delta.delta)?;
        Ok(Derived { q, b, c_left, a_left, bc, ba, delta, sigma_ba, tau_ba, dc, da, bd, f_delta, t_delta, q_delta })
    }
}

/// `B □_D C` and `B □_D A`, the domains of `f` and `φ`, for the given coaction.
pub fn action_domains(cat: &InternalCategory, base: &ComonoidalCategory, p: &Mor, pi: &Mor) -> Result<(Cotensor, Cotensor)> {
    let d = base.d();
    let b = base.base.bicomodule();
    let beta_p = braiding(&cat.c.carrier, &d.carrier)?.after(p)?;
    let beta_pi = braiding(&cat.a, &d.carrier)?.after(pi)?;
    let bc = cotensor(&b, &Comodule::left(&cat.c.carrier, d, beta_p))?;
    let ba = cotensor(&b, &Comodule::left(&cat.a, d, beta_pi))?;
    Ok((bc, ba))
}

trait CarrierId {
    fn carrier_id(&self) -> Mor;
}

impl CarrierId for Comodule {
    fn carrier_id(&self) -> Mor {
        Mor::identity(&self.carrier)
    }
}

/// The consequences of items 0 and 1 of a prestack: the comonoid `B □_D C`,
/// the coincidences `q_*σ = βπ` and `q_*τ = π`, `σ` and `τ` as maps over `d`,
/// and the two induced coactions on `B □_D A`.
pub fn lemma_bd_comod_suite(ps: &Prestack) -> Report {
    let mut r = Report::new();
    let d = ps.d();
    let dd = &d.carrier;
    let (a, c) = (&ps.cat.a, &ps.cat.c.carrier);
    let Some(q) = r.attempt("bd.q", comonoid_map_from_coaction(&ps.p, &ps.cat.c, d)) else {
        return r;
    };
    let ida = ps.cat.id();
    r.check_eq("bd.q-sigma-is-beta-pi", q.tensor(&ida).and_then(|x| x.after(&ps.cat.sigma)), ps.beta_pi());
    r.check_eq("bd.q-tau-is-pi", ida.tensor(&q).and_then(|x| x.after(&ps.cat.tau)), Ok(ps.pi.clone()));
    let sigma_target = permute(&[c, dd, a, dd], &[0, 2, 1, 3]).and_then(|s| s.after(&ps.p.tensor(&ps.pi)?));
    match sigma_target {
        Ok(t) => record_map_over(&mut r, "bd.sigma-over-d", Side::Right, &ps.cat.sigma, &d.delta, &ps.pi, &t),
        Err(e) => r.check("bd.sigma-over-d", false, || e.to_string()),
    };
    let tau_target = permute(&[a, dd, c, dd], &[0, 2, 1, 3]).and_then(|s| s.after(&ps.pi.tensor(&ps.p)?));
    match tau_target {
        Ok(t) => record_map_over(&mut r, "bd.tau-over-d", Side::Right, &ps.cat.tau, &d.delta, &ps.pi, &t),
        Err(e) => r.check("bd.tau-over-d", false, || e.to_string()),
    };
    let Some(x) = r.attempt("bd.derived", ps.derive()) else {
        return r;
    };
    r.absorb("bd.delta-comonoid", check_comonoid(&x.delta));
    let ba = Comodule::bi(&x.ba.obj, &x.delta, x.sigma_ba.clone(), &x.delta, x.tau_ba.clone());
    r.absorb("bd.coactions", check_comodule(&ba));
    r
}

/// Shared data for checking the action diagrams.
struct Actions<'a> {
    ps: &'a Prestack,
    x: &'a Derived,
}

impl Actions<'_> {
    /// `g ∘ (B □ h)` against `g ∘ (m □ N)` through the associator on `B □ B □ N`.
    fn associativity(&self, r: &mut Report, name: &str, n: &Comodule, bn: &Cotensor, g: &Mor) {
        let b = &self.x.b;
        let idd = self.ps.d().id();
        let over = Over::middle(&idd);
        let Some(t) = r.attempt(&format!("{name}.cotensors"), associate(b, b, n)) else {
            return;
        };
        let lhs = cotensor_of_maps(&t.m_np, bn, &b.carrier_id(), g, over)
            .and_then(|k| g.after(&k))
            .and_then(|k| k.after(&t.iso.forward));
        let rhs = cotensor_of_maps(&t.mn_p, bn, &self.ps.base.base.m, &n.carrier_id(), over).and_then(|k| g.after(&k));
        r.check_eq(name, lhs, rhs);
    }
}

/// `φ₂: B □_D (A □_C A) → A □_C A`, with the cotensor it is defined on.
pub struct Phi2 {
    pub b_aa: Cotensor,
    pub map: Mor,
}

/// The left `D`-coaction `q_*σ` on `A □_C A` used to form `B □_D (A □_C A)`.
fn aa_left_d(ps: &Prestack, q: &Mor) -> Result<Comodule> {
    let aa = &ps.cat.aa;
    let sigma = aa.induced_left_coaction()?;
    let lambda = q.tensor(&Mor::identity(&aa.obj))?.after(sigma)?;
    Ok(Comodule::left(&aa.obj, ps.d(), lambda))
}

/// Builds `φ₂` from `δ □_d ι`, the interchange, and `φ ⊗ φ`, verifying
/// that the result factors through `A □_C A`.
pub fn build_phi2(ps: &Prestack, x: &Derived) -> Result<Phi2> {
    let d = ps.d();
    let aa = &ps.cat.aa;
    let aa_left = aa_left_d(ps, &x.q)?;
    let b_aa = cotensor(&x.b, &aa_left)?;
    let iota = aa.mono.clone();
    let mut pre = Report::new();
    let a = &ps.cat.a;
    let target =
        permute(&[&d.carrier, a, &d.carrier, a], &[0, 2, 1, 3]).and_then(|s| s.after(&ps.beta_pi()?.tensor(&ps.beta_pi()?)?))?;
    record_map_over(&mut pre, "phi2.iota-over-d", Side::Left, &iota, &d.delta, aa_left.lambda()?, &target);
    pre.into_result()?;
    let inter = interchange_iso(&x.ba, &x.ba)?;
    let k = cotensor_of_maps(&b_aa, &inter.target, &ps.base.maps.delta, &iota, Over::middle(&d.delta))?;
    let h = ps.phi.tensor(&ps.phi)?.after(&inter.iso.inverse.after(&k)?)?;
    let map = aa.factor(&h)?;
    Ok(Phi2 { b_aa, map })
}

/// Every diagram of the definition of a prestack.
pub fn check_prestack(ps: &Prestack) -> Report {
    let mut r = Report::new();
    let cc = &ps.cat.c;
    let d = ps.d();
    r.check("prestack.objects-cocommutative", crate::coalgebra::is_cocommutative(cc), || {
        "comonoid of objects is not cocommutative".into()
    });
    r.absorb("prestack.category", check_internal_category(&ps.cat));
    // Item 1: (p, π) is a coaction of the discrete category on A.
    r.absorb("prestack.p-coaction", check_comodule(&Comodule::right(&cc.carrier, d, ps.p.clone())));
    r.absorb("prestack.pi-coaction", check_comodule(&Comodule::right(&ps.cat.a, d, ps.pi.clone())));
    if let Ok(cd) = cc.tensor(d) {
        r.absorb("prestack.p-comonoid-map", check_comonoid_map(&ps.p, cc, &cd));
    }
    let target = discrete(d).and_then(|dd| tensor_internal(&ps.cat, &dd));
    if let Some(target) = r.attempt("prestack.coaction-target", target) {
        let func = InternalFunctor { f: ps.p.clone(), phi: ps.pi.clone() };
        r.absorb("prestack.coaction-functor", check_internal_functor(&func, &ps.cat, &target));
    }
    if !r.pass() {
        return r;
    }
    let Some(x) = r.attempt("prestack.derived", ps.derive()) else {
        return r;
    };
    let acts = Actions { ps, x: &x };
    let idd = d.id();
    let over_id = Over::middle(&idd);
    let base = &ps.base.base;
    // Item 2: f.
    r.absorb("prestack.f.comonoid-map", check_comonoid_map(&ps.f, &x.delta, cc));
    let sigma_bc = x.bc.induced_left_coaction().cloned();
    r.check_eq(
        "prestack.f.source",
        ps.beta_p().and_then(|bp| bp.after(&ps.f)),
        sigma_bc.and_then(|s| idd.tensor(&ps.f)?.after(&s)),
    );
    let lhs = cotensor_of_maps(&x.dc, &x.bc, &base.u, &cc.id(), over_id).and_then(|k| ps.f.after(&k));
    r.check_eq("prestack.f.unit", lhs, left_unitor(&x.dc).map(|iso| iso.forward));
    acts.associativity(&mut r, "prestack.f.associativity", &x.c_left, &x.bc, &ps.f);
    // Item 3: φ.
    let ida = ps.cat.id();
    r.check_eq(
        "prestack.phi.source",
        ps.cat.sigma.after(&ps.phi),
        ps.f.tensor(&ps.phi).and_then(|k| k.after(&x.sigma_ba)),
    );
    r.check_eq(
        "prestack.phi.target",
        ps.cat.tau.after(&ps.phi),
        ps.phi.tensor(&ps.f).and_then(|k| k.after(&x.tau_ba)),
    );
    let lhs = cotensor_of_maps(&x.da, &x.ba, &base.u, &ida, over_id).and_then(|k| ps.phi.after(&k));
    r.check_eq("prestack.phi.unit", lhs, left_unitor(&x.da).map(|iso| iso.forward));
    acts.associativity(&mut r, "prestack.phi.associativity", &x.a_left, &x.ba, &ps.phi);
    // Item 4: compatibility with the identities and composition of A.
    let lhs = cotensor_of_maps(&x.bc, &x.ba, &x.b.carrier_id(), &ps.cat.u, over_id).and_then(|k| ps.phi.after(&k));
    r.check_eq("prestack.compat.unit", lhs, ps.cat.u.after(&ps.f));
    if let Some(phi2) = r.attempt("prestack.phi2", build_phi2(ps, &x)) {
        let lhs = cotensor_of_maps(&phi2.b_aa, &x.ba, &x.b.carrier_id(), &ps.cat.m, over_id).and_then(|k| ps.phi.after(&k));
        r.check_eq("prestack.compat.composition", lhs, ps.cat.m.after(&phi2.map));
    }
    r
}

/// The five squares saying `π`, `q_*Δ` and `f_*Δ` are maps over `p`.
pub fn lemma_maps_over_p_suite(ps: &Prestack) -> Report {
    let mut r = Report::new();
    let Some(x) = r.attempt("maps-over-p.derived", ps.derive()) else {
        return r;
    };
    let d = ps.d();
    let (a, c, dd, bb, bc) = (&ps.cat.a, &ps.cat.c.carrier, &d.carrier, &ps.base.base.a, &x.bc.obj);
    let cc = &ps.cat.c;
    let shuffle = |objs: [&Obj; 4], g: &Mor, h: &Mor| permute(&objs, &[0, 2, 1, 3]).and_then(|s| s.after(&g.tensor(h)?));
    let mut square = |name: &str, side: Side, phi: &Mor, src: &Mor, tgt: Result<Mor>| match tgt {
        Ok(t) => {
            record_map_over(&mut r, name, side, phi, &ps.p, src, &t);
        }
        Err(e) => {
            r.check(name, false, || e.to_string());
        }
    };
    square("maps-over-p.pi-source", Side::Left, &ps.pi, &ps.cat.sigma, shuffle([c, a, dd, dd], &ps.cat.sigma, &d.delta));
    square("maps-over-p.pi-target", Side::Right, &ps.pi, &ps.cat.tau, shuffle([a, c, dd, dd], &ps.cat.tau, &d.delta));
    let sigma_b = &ps.base.base.sigma;
    let tau_b = &ps.base.base.tau;
    square("maps-over-p.qdelta-source", Side::Left, &x.q_delta, &x.f_delta, shuffle([c, bc, dd, bb], &x.f_delta, sigma_b));
    square("maps-over-p.qdelta-target", Side::Right, &x.q_delta, &x.t_delta, shuffle([bc, c, bb, dd], &x.t_delta, tau_b));
    let sigma_bc = x.bc.induced_left_coaction().cloned();
    let tgt = sigma_bc.and_then(|s| shuffle([c, c, dd, bc], &cc.delta, &s));
    square("maps-over-p.fdelta", Side::Left, &x.f_delta, &x.f_delta, tgt);
    r
}

/// Left `C`-, right `C`- and right `B`-coactions on `B □_D C`, each with its comodule laws.
pub fn bdc_coactions(ps: &Prestack) -> Result<(Mor, Mor, Mor)> {
    let x = ps.derive()?;
    let mut r = Report::new();
    let cc = &ps.cat.c;
    r.absorb("f-delta", check_comodule(&Comodule::left(&x.bc.obj, cc, x.f_delta.clone())));
    r.absorb("t-delta", check_comodule(&Comodule::right(&x.bc.obj, cc, x.t_delta.clone())));
    r.absorb("q-delta", check_comodule(&Comodule::right(&x.bc.obj, &ps.base.maps, x.q_delta.clone())));
    r.into_result()?;
    Ok((x.f_delta, x.t_delta, x.q_delta))
}

/// `A ⋊ B` as a `B`-comodule category, together with the data it was built from.
#[derive(Clone, Debug)]
pub struct Smash {
    pub comodcat: ComoduleCategory,
    pub derived: Derived,
    /// `A ⋊ B`'s object of maps `A □_C (B □_D C)`.
    pub morphisms: Cotensor,
    /// `A □_C (B □_D C) ↣ A ⊗ B ⊗ C`.
    pub embedding: Mor,
    pub report: Report,
}

/// Builds the smash product; every step that the construction only asserts
/// (the factorizations of the composition and coaction) is checked here.
pub fn smash(ps: &Prestack) -> Result<Smash> {
    let pre = check_prestack(ps);
    if !pre.pass() {
        return Err(Error::Check(Box::new(pre)));
    }
    let x = ps.derive()?;
    let cc = &ps.cat.c;
    let d = ps.d();
    let base = &ps.base.base;
    let a = &ps.cat.a;
    let bobj = &base.a;
    let (bc, aa) = (&x.bc, &ps.cat.aa);
    let mut r = Report::new();
    let a_bi = Comodule::bi(a, cc, ps.cat.sigma.clone(), cc, ps.cat.tau.clone());
    let bc_bi = Comodule::bi(&bc.obj, cc, x.f_delta.clone(), cc, x.t_delta.clone());
    let m = cotensor(&a_bi, &bc_bi)?;
    let mobj = &m.obj;
    let sigma_m = m.induced_left_coaction()?.clone();
    let tau_m = m.induced_right_coaction()?.clone();
    let mm = cotensor(&m.comodule(), &m.comodule())?;
    let ida = ps.cat.id();

    // Composition: evaluate on ambients, collapse, act, compose, factor.
    let emb = m.mono.tensor(&m.mono)?.after(&mm.mono)?;
    let h = Mor::tensor_after(&[&ps.pi, &x.q_delta, &ps.pi, &x.f_delta], &emb)?;
    let dd = &d.carrier;
    let c = &cc.carrier;
    let shuffle = permute(&[a, dd, &bc.obj, bobj, a, dd, c, &bc.obj], &[0, 2, 4, 6, 1, 3, 5, 7])?;
    let h = Mor::tensor_after(&[&shuffle], &h)?;
    let bc_to_b = Mor::identity(bobj).tensor(&cc.epsilon)?.after(&bc.mono)?;
    let left = Mor::tensor_all(&[&ida, &bc_to_b, &ida, &cc.epsilon])?;
    let right = Mor::tensor_all(&[&d.epsilon, &Mor::identity(bobj), &d.epsilon, &bc.mono])?;
    let h = Mor::tensor_after(&[&left, &right], &h)?;
    let f_sigma = ps.f.tensor(&Mor::identity(&x.ba.obj))?.after(&x.sigma_ba)?;
    let xx = cotensor(&a_bi.only(Side::Right), &Comodule::left(&x.ba.obj, cc, f_sigma))?;
    let emb_x = ida.tensor(&x.ba.mono)?.after(&xx.mono)?;
    let yy = cotensor(&base.aa.comodule().only(Side::Right), &x.c_left)?;
    let emb_y = base.aa.mono.tensor(&Mor::identity(c))?.after(&yy.mono)?;
    let k = r.attempt("smash.reshuffle-factors", emb_x.tensor(&emb_y).and_then(|e| Mor::factor_mono(&e, &h)));
    let Some(k) = k else {
        return Err(Error::Check(Box::new(r)));
    };
    let idc = cc.id();
    let ic = Over::middle(&idc);
    let idd = d.id();
    let a_phi = cotensor_of_maps(&xx, aa, &ida, &ps.phi, ic)?;
    let m_c = cotensor_of_maps(&yy, bc, &base.m, &cc.id(), Over::middle(&idd))?;
    let h = ps.cat.m.tensor(&Mor::identity(&bc.obj))?.after(&a_phi.tensor(&m_c)?.after(&k)?)?;
    let comp = r.attempt("smash.composition-factors", Mor::factor_mono(&m.mono, &h));

    // Unit: C ≅ C □_C (D □_D C) → A □_C (B □_D C).
    let embedding = ida.tensor(&bc.mono)?.after(&m.mono)?;
    let unit = Mor::chain(&[&cc.delta, &cc.id().tensor(&ps.beta_p()?)?, &Mor::tensor_all(&[&ps.cat.u, &base.u, &cc.id()])?])?;
    let unit = r.attempt("smash.unit-factors", Mor::factor_mono(&embedding, &unit));

    // B-coaction.
    let h = Mor::tensor_after(&[&ps.pi, &x.q_delta], &m.mono)?;
    let h = permute(&[a, dd, &bc.obj, bobj], &[0, 2, 1, 3])?.after(&h)?;
    let collapse = Mor::tensor_all(&[&ida, &Mor::identity(&bc.obj), &d.epsilon, &Mor::identity(bobj)])?;
    let h = collapse.after(&h)?;
    let pi_m = r.attempt(
        "smash.coaction-factors",
        m.mono.tensor(&Mor::identity(bobj)).and_then(|e| Mor::factor_mono(&e, &h)),
    );
    let (Some(comp), Some(unit), Some(pi_m)) = (comp, unit, pi_m) else {
        return Err(Error::Check(Box::new(r)));
    };
    let pi_m = pi_m.retyped(mobj, &mobj.tensor(bobj)?)?;
    let cat = InternalCategory {
        c: cc.clone(),
        a: mobj.clone(),
        sigma: sigma_m,
        tau: tau_m,
        u: unit.retyped(c, mobj)?,
        m: comp.retyped(&mm.obj, mobj)?,
        aa: mm,
    };
    r.absorb("smash.category", check_internal_category(&cat));
    let comodcat = ComoduleCategory { cat, base: ps.base.clone(), p: ps.p.clone(), pi: pi_m };
    r.absorb("smash.comodule-category", check_comodule_category(&comodcat));
    if !r.pass() {
        return Err(Error::Check(Box::new(r)));
    }
    Ok(Smash { comodcat, derived: x, morphisms: m, embedding, report: r })
}

/// The coinvariant category of a comodule category, as a comodule category
/// over the discrete `(D, D)`.
#[derive(Clone, Debug)]
pub struct Coinvariants {
    pub comodcat: ComoduleCategory,
    /// `A □_B D ↣ A ⊗ D`.
    pub mono: Mor,
    pub report: Report,
}

pub fn coinvariants(x: &ComoduleCategory) -> Result<Coinvariants> {
    let base = &x.base.base;
    let d = x.base.d();
    let cc = &x.cat.c;
    let a = &x.cat.a;
    let (dd, c) = (&d.carrier, &cc.carrier);
    let ida = x.cat.id();
    let idd = d.id();
    let pair = (x.pi.tensor(&idd)?, ida.tensor(&base.u.tensor(&idd)?.after(&d.delta)?)?);
    let eq = equalizer_of(&[pair], "K")?;
    let k = &eq.obj;
    let unit = Obj::unit(a.backend());
    let sigma_amb = x.cat.sigma.tensor(&idd)?.after(&eq.mono)?;
    let sigma = crate::cotensor::factor_whiskered(&eq.mono, c, &unit, &sigma_amb)?;
    let tau_amb = ida.tensor(&braiding(c, dd)?)?.after(&x.cat.tau.tensor(&idd)?)?.after(&eq.mono)?;
    let tau = crate::cotensor::factor_whiskered(&eq.mono, &unit, c, &tau_amb)?;
    let u = eq.factor_through(&x.cat.u.tensor(&idd)?.after(&x.p)?)?;
    let kbi = Comodule::bi(k, cc, sigma.clone(), cc, tau.clone());
    let kk = cotensor(&kbi, &kbi)?;
    let h = eq.mono.tensor(&eq.mono)?.after(&kk.mono)?;
    let h = permute(&[a, dd, a, dd], &[0, 2, 1, 3])?.after(&h)?;
    let dreg = d.regular_bi();
    let ddc = cotensor(&dreg, &dreg)?;
    let split = x.cat.aa.mono.tensor(&ddc.mono)?;
    let h = Mor::factor_mono(&split, &h)?;
    let h = x.cat.m.tensor(&left_unitor(&ddc)?.forward)?.after(&h)?;
    let m = eq.factor_through(&h)?;
    let pi_amb = ida.tensor(&d.delta)?.after(&eq.mono)?;
    let pi = crate::cotensor::factor_whiskered(&eq.mono, &unit, dd, &pi_amb)?;
    let cat = InternalCategory { c: cc.clone(), a: k.clone(), sigma, tau, u, m: m.retyped(&kk.obj, k)?, aa: kk };
    let dcat = discrete(d)?;
    let dbase = promote_comonoidal(&dcat, &d.delta, &d.epsilon)?;
    let comodcat = ComoduleCategory { cat, base: dbase, p: x.p.clone(), pi: pi.retyped(k, &k.tensor(dd)?)? };
    let mut report = Report::new();
    report.absorb("coinvariants.category", check_internal_category(&comodcat.cat));
    report.absorb("coinvariants.comodule-category", check_comodule_category(&comodcat));
    if !report.pass() {
        return Err(Error::Check(Box::new(report)));
    }
    Ok(Coinvariants { comodcat, mono: eq.mono.clone(), report })
}

/// The isomorphism `(A ⋊ B) □_B 𝔻 → A` and its inverse.
#[derive(Clone, Debug)]
pub struct Recovery {
    pub functor: InternalFunctor,
    pub inverse: InternalFunctor,
    /// The three steps `K → A □_C (D □_D C) → A □_C C → A`.
    pub steps: [Mor; 3],
    pub report: Report,
}

pub fn recovery_iso(ps: &Prestack, sm: &Smash, coinv: &Coinvariants) -> Result<Recovery> {
    let cc = &ps.cat.c;
    let d = ps.d();
    let a = &ps.cat.a;
    let c = &cc.carrier;
    let dd = &d.carrier;
    let mut r = Report::new();
    let ida = ps.cat.id();
    // K ↣ M ⊗ D ↣ A ⊗ B ⊗ C ⊗ D.
    let k_amb = sm.embedding.tensor(&d.id())?.after(&coinv.mono)?;
    let a_right = Comodule::right(a, cc, ps.cat.tau.clone());
    // D □_D C ≅ C carries the left C-coaction transported from δ.
    let lam = left_unitor(&sm.derived.dc)?;
    let dc_sigma = cc.id().tensor(&lam.inverse)?.after(&cc.delta)?.after(&lam.forward)?;
    let w1 = cotensor(&a_right, &Comodule::left(&sm.derived.dc.obj, cc, dc_sigma))?;
    let w1_emb = ida.tensor(&sm.derived.dc.mono)?.after(&w1.mono)?;
    let collapse = Mor::tensor_all(&[&ida, &ps.base.maps.epsilon, &braiding(c, dd)?])?;
    let s1 = r.attempt("recovery.step1", Mor::factor_mono(&w1_emb, &collapse.after(&k_amb)?).and_then(certified));
    let w2 = cotensor(&a_right, &cc.regular_left())?;
    let drop_d = Mor::tensor_all(&[&ida, &d.epsilon, &cc.id()])?;
    let s2 = r.attempt("recovery.step2", Mor::factor_mono(&w2.mono, &drop_d.after(&w1_emb)?).and_then(certified));
    let s3 = r.attempt("recovery.step3", right_unitor(&w2).map(|iso| iso.forward));
    let (Some(s1), Some(s2), Some(s3)) = (s1, s2, s3) else {
        return Err(Error::Check(Box::new(r)));
    };
    let total = Mor::chain(&[&s1, &s2, &s3])?.retyped(&coinv.comodcat.cat.a, a)?;
    let inverse = total.inverse()?;
    let functor = InternalFunctor { f: cc.id(), phi: total };
    let inverse = InternalFunctor { f: cc.id(), phi: inverse };
    r.absorb("recovery.functor", check_internal_functor(&functor, &coinv.comodcat.cat, &ps.cat));
    r.absorb("recovery.inverse", check_internal_functor(&inverse, &ps.cat, &coinv.comodcat.cat));
    if !r.pass() {
        return Err(Error::Check(Box::new(r)));
    }
    Ok(Recovery { functor, inverse, steps: [s1, s2, s3], report: r })
}

fn certified(m: Mor) -> Result<Mor> {
    m.inverse()?;
    Ok(m)
}
