//! Internal categories `(C, A, σ, τ, u, m)`, internal functors, the
//! monoidal product on internal categories, and comonoidal internal
//! categories.

use crate::coalgebra::{
    check_comodule, check_comonoid, check_comonoid_map, comonoid_map_from_coaction, comonoid_map_from_left_coaction,
    is_cocommutative, record_map_over, Comodule, Comonoid, Side,
};
use crate::cotensor::{associate, cotensor, cotensor_of_maps, interchange_iso, left_unitor, right_unitor, Cotensor, Over};
use crate::error::{Error, Result};
use crate::monoidal::{braiding, permute, Backend, Mor, Obj};
use crate::report::Report;

/// A monoid `(A, μ: A ⊗ A → A, η: 1 → A)` in the ambient category.
#[derive(Clone, Debug)]
pub struct Monoid {
    pub carrier: Obj,
    pub mult: Mor,
    pub unit: Mor,
}

pub fn check_monoid(a: &Monoid) -> Report {
    let mut r = Report::new();
    let id = Mor::identity(&a.carrier);
    r.check_eq(
        "monoid.associativity",
        a.mult.tensor(&id).and_then(|x| a.mult.after(&x)),
        id.tensor(&a.mult).and_then(|x| a.mult.after(&x)),
    );
    r.check_eq("monoid.unit-left", a.unit.tensor(&id).and_then(|x| a.mult.after(&x)), Ok(id.clone()));
    r.check_eq("monoid.unit-right", id.tensor(&a.unit).and_then(|x| a.mult.after(&x)), Ok(id.clone()));
    r
}

#[derive(Clone, Debug)]
pub struct InternalCategory {
    /// Comonoid of objects.
    pub c: Comonoid,
    /// Object of maps.
    pub a: Obj,
    /// Source, a left coaction `A → C ⊗ A`.
    pub sigma: Mor,
    /// Target, a right coaction `A → A ⊗ C`.
    pub tau: Mor,
    pub u: Mor,
    /// Composition `A □_C A → A`.
    pub m: Mor,
    pub aa: Cotensor,
}

impl InternalCategory {
    /// `m` must be defined on the computed `A □_C A`.
    pub fn new(c: Comonoid, a: Obj, sigma: Mor, tau: Mor, u: Mor, m: Mor) -> Result<InternalCategory> {
        let bi = Comodule::bi(&a, &c, sigma.clone(), &c, tau.clone());
        let aa = cotensor(&bi, &bi)?;
        if m.dom().dim() != aa.obj.dim() || m.cod().dim() != a.dim() {
            return Err(Error::DimensionMismatch(format!(
                "composition must be A□A ({}) -> A ({})",
                aa.obj.dim(),
                a.dim()
            )));
        }
        let m = m.retyped(&aa.obj, &a)?;
        Ok(InternalCategory { c, a, sigma, tau, u, m, aa })
    }

    /// Composition given on all of `A ⊗ A`; only its restriction matters.
    pub fn from_ambient(c: Comonoid, a: Obj, sigma: Mor, tau: Mor, u: Mor, m_ambient: &Mor) -> Result<InternalCategory> {
        let bi = Comodule::bi(&a, &c, sigma.clone(), &c, tau.clone());
        let aa = cotensor(&bi, &bi)?;
        let m = m_ambient.after(&aa.mono)?.retyped(&aa.obj, &a)?;
        Ok(InternalCategory { c, a, sigma, tau, u, m, aa })
    }

    pub fn backend(&self) -> Backend {
        self.a.backend()
    }

    /// `A` as a `(C, C)`-bicomodule.
    pub fn bicomodule(&self) -> Comodule {
        self.aa.m.clone()
    }

    pub fn id(&self) -> Mor {
        Mor::identity(&self.a)
    }
}

/// The bicomodule laws, that `u` and `m` are bicomodule maps, unitality and
/// associativity.
pub fn check_internal_category(x: &InternalCategory) -> Report {
    let mut r = Report::new();
    r.absorb("internal.objects", check_comonoid(&x.c));
    r.absorb("internal.maps", check_comodule(&x.bicomodule()));
    let c = &x.c;
    record_map_over(&mut r, "internal.unit.source", Side::Left, &x.u, &c.id(), &c.delta, &x.sigma);
    record_map_over(&mut r, "internal.unit.target", Side::Right, &x.u, &c.id(), &c.delta, &x.tau);
    if let (Ok(sigma_aa), Ok(tau_aa)) = (x.aa.induced_left_coaction(), x.aa.induced_right_coaction()) {
        record_map_over(&mut r, "internal.composition.source", Side::Left, &x.m, &c.id(), sigma_aa, &x.sigma);
        record_map_over(&mut r, "internal.composition.target", Side::Right, &x.m, &c.id(), tau_aa, &x.tau);
    }
    let a = x.bicomodule();
    let reg = c.regular_bi();
    let idc = c.id();
    let id_over = Over::middle(&idc);
    // m ∘ (u □ A) against the left unitor, and symmetrically.
    if let Some(ca) = r.attempt("internal.unitality.left.cotensor", cotensor(&reg, &a)) {
        let lhs = cotensor_of_maps(&ca, &x.aa, &x.u, &x.id(), id_over).and_then(|k| x.m.after(&k));
        let rhs = left_unitor(&ca).map(|iso| iso.forward);
        r.check_eq("internal.unitality.left", lhs, rhs);
    }
    if let Some(ac) = r.attempt("internal.unitality.right.cotensor", cotensor(&a, &reg)) {
        let lhs = cotensor_of_maps(&ac, &x.aa, &x.id(), &x.u, id_over).and_then(|k| x.m.after(&k));
        let rhs = right_unitor(&ac).map(|iso| iso.forward);
        r.check_eq("internal.unitality.right", lhs, rhs);
    }
    if let Some(t) = r.attempt("internal.associativity.cotensors", associate(&a, &a, &a)) {
        let lhs = cotensor_of_maps(&t.mn_p, &x.aa, &x.m, &x.id(), id_over).and_then(|k| x.m.after(&k));
        let rhs = cotensor_of_maps(&t.m_np, &x.aa, &x.id(), &x.m, id_over)
            .and_then(|k| x.m.after(&k))
            .and_then(|k| k.after(&t.iso.forward));
        r.check_eq("internal.associativity", lhs, rhs);
    }
    r
}

/// `(f, φ)`: a comonoid map on objects and a map on morphisms.
#[derive(Clone, Debug)]
pub struct InternalFunctor {
    pub f: Mor,
    pub phi: Mor,
}

pub fn check_internal_functor(func: &InternalFunctor, from: &InternalCategory, to: &InternalCategory) -> Report {
    let mut r = Report::new();
    let (f, phi) = (&func.f, &func.phi);
    r.absorb("functor.objects", check_comonoid_map(f, &from.c, &to.c));
    record_map_over(&mut r, "functor.source", Side::Left, phi, f, &from.sigma, &to.sigma);
    record_map_over(&mut r, "functor.target", Side::Right, phi, f, &from.tau, &to.tau);
    r.check_eq("functor.unit", phi.after(&from.u), to.u.after(f));
    let lhs = cotensor_of_maps(&from.aa, &to.aa, phi, phi, Over::middle(f)).and_then(|k| to.m.after(&k));
    r.check_eq("functor.composition", lhs, phi.after(&from.m));
    r
}

fn verified(x: InternalCategory) -> Result<InternalCategory> {
    check_internal_category(&x).into_result()?;
    Ok(x)
}

/// `(1, A)` for a monoid `A`.
pub fn one_object(monoid: &Monoid) -> Result<InternalCategory> {
    check_monoid(monoid).into_result()?;
    let one = Comonoid::unit(monoid.carrier.backend());
    let a = &monoid.carrier;
    let id = Mor::identity(a);
    verified(InternalCategory::from_ambient(one, a.clone(), id.clone(), id, monoid.unit.clone(), &monoid.mult)?)
}

/// `(C, C)` with `σ = τ = δ`, identities `id` and composition the unitor.
pub fn discrete(c: &Comonoid) -> Result<InternalCategory> {
    let reg = c.regular_bi();
    let cc = cotensor(&reg, &reg)?;
    let m = left_unitor(&cc)?.forward;
    verified(InternalCategory::new(c.clone(), c.carrier.clone(), c.delta.clone(), c.delta.clone(), c.id(), m)?)
}

/// The unit `𝕀 = (1, 1)`.
pub fn unit_category(backend: Backend) -> InternalCategory {
    discrete(&Comonoid::unit(backend)).expect("the unit category is valid")
}

/// `(C ⊗ D, A ⊗ B)`; composition goes through the interchange isomorphism.
/// The axioms hold by construction and are not rechecked here, since the
/// triple cotensor of a tensor product is large.
pub fn tensor_internal(x: &InternalCategory, y: &InternalCategory) -> Result<InternalCategory> {
    let c = x.c.tensor(&y.c)?;
    let bi = x.bicomodule().tensor(&y.bicomodule())?;
    let ab = bi.carrier.clone();
    let sigma = bi.lambda()?.clone();
    let tau = bi.rho()?.clone();
    let u = x.u.tensor(&y.u)?;
    let inter = interchange_iso(&x.aa, &y.aa)?;
    let m = x.m.tensor(&y.m)?.after(&inter.iso.inverse)?;
    InternalCategory::new(c, ab, sigma, tau, u, m)
}

/// A comonoid in internal categories, with the derived comonoid maps `s` and
/// `t` inducing the source and target.
#[derive(Clone, Debug)]
pub struct ComonoidalCategory {
    pub base: InternalCategory,
    /// `B` with `δ_B`, `ε_B`.
    pub maps: Comonoid,
    pub s: Mor,
    pub t: Mor,
}

impl ComonoidalCategory {
    pub fn d(&self) -> &Comonoid {
        &self.base.c
    }

    /// The discrete subcategory of objects `(D, D)`.
    pub fn objects(&self) -> Result<InternalCategory> {
        discrete(&self.base.c)
    }
}

/// Everything required of `(d, δ_B)`, `(e, ε_B)` for `b` to be comonoidal,
/// together with its listed consequences.
pub fn check_comonoidal(b: &InternalCategory, delta_b: &Mor, eps_b: &Mor) -> Report {
    let mut r = Report::new();
    let d = &b.c;
    let bb = &b.a;
    let dd = &d.carrier;
    let ok = r.check("comonoidal.objects-cocommutative", is_cocommutative(d), || {
        "comonoid of objects is not cocommutative".into()
    });
    let maps = Comonoid { carrier: bb.clone(), delta: delta_b.clone(), epsilon: eps_b.clone() };
    r.absorb("comonoidal.maps-comonoid", check_comonoid(&maps));
    if !ok {
        // Nothing below can hold without cocommutativity.
        return r;
    }
    if let Some(b2) = r.attempt("comonoidal.square", tensor_internal(b, b)) {
        let func = InternalFunctor { f: d.delta.clone(), phi: delta_b.clone() };
        r.absorb("comonoidal.delta-functor", check_internal_functor(&func, b, &b2));
    }
    let unit = unit_category(b.backend());
    let func = InternalFunctor { f: d.epsilon.clone(), phi: eps_b.clone() };
    r.absorb("comonoidal.epsilon-functor", check_internal_functor(&func, b, &unit));
    if let Ok(db) = d.tensor(&maps) {
        r.absorb("comonoidal.sigma-comonoid-map", check_comonoid_map(&b.sigma, &maps, &db));
    }
    if let Ok(bd) = maps.tensor(d) {
        r.absorb("comonoidal.tau-comonoid-map", check_comonoid_map(&b.tau, &maps, &bd));
    }
    let sigma_target = permute(&[dd, dd, dd, bb], &[0, 2, 1, 3]).and_then(|p| p.after(&d.delta.tensor(&b.sigma)?));
    let tau_target = permute(&[bb, dd, dd, dd], &[0, 2, 1, 3]).and_then(|p| p.after(&b.tau.tensor(&d.delta)?));
    match sigma_target {
        Ok(t) => record_map_over(&mut r, "comonoidal.sigma-over-d", Side::Left, &b.sigma, &d.delta, &b.sigma, &t),
        Err(e) => r.check("comonoidal.sigma-over-d", false, || e.to_string()),
    };
    match tau_target {
        Ok(t) => record_map_over(&mut r, "comonoidal.tau-over-d", Side::Right, &b.tau, &d.delta, &b.tau, &t),
        Err(e) => r.check("comonoidal.tau-over-d", false, || e.to_string()),
    };
    let id = b.id();
    let lhs = b.sigma.tensor(&id).and_then(|x| x.after(delta_b));
    let rhs = braiding(bb, dd)
        .and_then(|br| br.tensor(&id))
        .and_then(|br| Mor::chain(&[delta_b, &id.tensor(&b.sigma)?, &br]));
    r.check_eq("comonoidal.shared-source", lhs, rhs);
    let lhs = id.tensor(&b.tau).and_then(|x| x.after(delta_b));
    let rhs = braiding(dd, bb)
        .and_then(|br| id.tensor(&br))
        .and_then(|br| Mor::chain(&[delta_b, &b.tau.tensor(&id)?, &br]));
    r.check_eq("comonoidal.shared-target", lhs, rhs);
    r
}

/// Verifies `b` is comonoidal under `δ_B`, `ε_B` and derives `s`, `t`.
pub fn promote_comonoidal(b: &InternalCategory, delta_b: &Mor, eps_b: &Mor) -> Result<ComonoidalCategory> {
    let mut r = check_comonoidal(b, delta_b, eps_b);
    if !r.pass() {
        return Err(Error::Check(Box::new(r)));
    }
    let maps = Comonoid { carrier: b.a.clone(), delta: delta_b.clone(), epsilon: eps_b.clone() };
    let s = r.attempt("comonoidal.s-induces-sigma", comonoid_map_from_left_coaction(&b.sigma, &maps, &b.c));
    let t = r.attempt("comonoidal.t-induces-tau", comonoid_map_from_coaction(&b.tau, &maps, &b.c));
    match (s, t) {
        (Some(s), Some(t)) => Ok(ComonoidalCategory { base: b.clone(), maps, s, t }),
        _ => Err(Error::Check(Box::new(r))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{Matrix, Field};

    const Q: Field = Field::Rational;

    fn vect(labels: &[&str]) -> Obj {
        Obj::atom(Backend::Vect(Q), labels.iter().copied()).unwrap()
    }

    fn group_algebra_z2() -> Monoid {
        let a = vect(&["1", "g"]);
        let aa = a.tensor(&a).unwrap();
        let mult = Mor::from_index_map(&aa, &a, |k| (k / 2) ^ (k % 2)).unwrap();
        let unit = Mor::from_index_map(&Obj::unit(a.backend()), &a, |_| 0).unwrap();
        Monoid { carrier: a, mult, unit }
    }

    /// ℚ[x]/(x²).
    fn dual_numbers() -> Monoid {
        let a = vect(&["1", "x"]);
        let aa = a.tensor(&a).unwrap();
        let mult = Mor::linear(&aa, &a, Matrix::from_int_rows(Q, &[&[1, 0, 0, 0], &[0, 1, 1, 0]])).unwrap();
        let unit = Mor::linear(&Obj::unit(a.backend()), &a, Matrix::from_int_rows(Q, &[&[1], &[0]])).unwrap();
        Monoid { carrier: a, mult, unit }
    }

    /// The walking arrow `0 → 1` as a FinSet internal category.
    fn walking_arrow() -> InternalCategory {
        let c = Comonoid::group_like(&Obj::atom(Backend::Set, ["0", "1"]).unwrap());
        let a = Obj::atom(Backend::Set, ["id0", "f", "id1"]).unwrap();
        let src = [0, 0, 1];
        let tgt = [0, 1, 1];
        let sigma = Mor::from_index_map(&a, &c.carrier.tensor(&a).unwrap(), |i| src[i] * 3 + i).unwrap();
        let tau = Mor::from_index_map(&a, &a.tensor(&c.carrier).unwrap(), |i| i * 2 + tgt[i]).unwrap();
        let u = Mor::function(&c.carrier, &a, vec![0, 2]).unwrap();
        let aa = a.tensor(&a).unwrap();
        // Diagrammatic order; non-composable pairs are sent anywhere.
        let comp = |k: usize| match (k / 3, k % 3) {
            (0, x) | (x, 2) => x,
            (1, _) => 1,
            (_, _) => 0,
        };
        let m = Mor::from_index_map(&aa, &a, comp).unwrap();
        InternalCategory::from_ambient(c, a, sigma, tau, u, &m).unwrap()
    }

    #[test]
    fn constructors_pass() {
        assert!(check_monoid(&dual_numbers()).pass());
        for x in [
            one_object(&group_algebra_z2()).unwrap(),
            one_object(&dual_numbers()).unwrap(),
            discrete(&Comonoid::group_like(&vect(&["1", "g"]))).unwrap(),
            discrete(&Comonoid::group_like(&Obj::atom(Backend::Set, ["a", "b", "c"]).unwrap())).unwrap(),
            unit_category(Backend::Set),
        ] {
            let r = check_internal_category(&x);
            assert!(r.pass(), "{r}");
        }
        assert_eq!(one_object(&group_algebra_z2()).unwrap().a.dim(), 2);
    }

    #[test]
    fn walking_arrow_is_a_category() {
        let x = walking_arrow();
        assert_eq!(x.aa.obj.dim(), 4);
        let r = check_internal_category(&x);
        assert!(r.pass(), "{r}");
    }

    #[test]
    fn broken_composition_is_caught() {
        let mut x = walking_arrow();
        // Send id0;f to id0 instead of f.
        let t: Vec<usize> = x.m.table().unwrap().to_vec();
        let pos = (0..x.aa.obj.dim()).find(|&i| x.aa.obj.label(i) == "id0⊗f").unwrap();
        let mut t2 = t.clone();
        t2[pos] = 0;
        x.m = Mor::function(&x.aa.obj, &x.a, t2).unwrap();
        let names = check_internal_category(&x).failure_names();
        assert!(names.contains(&"internal.unitality.left".to_string()), "{names:?}");
    }

    #[test]
    fn functors() {
        let a = one_object(&group_algebra_z2()).unwrap();
        let r = check_internal_functor(&InternalFunctor { f: a.c.id(), phi: a.id() }, &a, &a);
        assert!(r.pass(), "{r}");
        let unit = unit_category(a.backend());
        let eps = Mor::linear(&a.a, &unit.a, Matrix::from_int_rows(Q, &[&[1, 1]])).unwrap();
        let r = check_internal_functor(&InternalFunctor { f: a.c.id(), phi: eps }, &a, &unit);
        assert!(r.pass(), "{r}");
        let bad = Mor::linear(&a.a, &unit.a, Matrix::from_int_rows(Q, &[&[1, 2]])).unwrap();
        let r = check_internal_functor(&InternalFunctor { f: a.c.id(), phi: bad }, &a, &unit);
        assert_eq!(r.failure_names(), ["functor.composition"]);
    }

    #[test]
    fn tensor_with_unit_and_one_objects() {
        let a = one_object(&dual_numbers()).unwrap();
        let unit = unit_category(a.backend());
        let au = tensor_internal(&a, &unit).unwrap();
        assert_eq!(au.a, a.a);
        assert_eq!(au.m.matrix(), a.m.matrix());
        let b = one_object(&group_algebra_z2()).unwrap();
        let ab = tensor_internal(&a, &b).unwrap();
        assert!(check_internal_category(&ab).pass());
        let prod = Monoid {
            carrier: a.a.tensor(&b.a).unwrap(),
            mult: permute(&[&a.a, &b.a, &a.a, &b.a], &[0, 2, 1, 3])
                .and_then(|p| dual_numbers().mult.tensor(&group_algebra_z2().mult)?.after(&p))
                .unwrap(),
            unit: dual_numbers().unit.tensor(&group_algebra_z2().unit).unwrap(),
        };
        let direct = one_object(&prod).unwrap();
        assert_eq!(ab.m, direct.m);
        assert_eq!(ab.u, direct.u);
    }

    #[test]
    fn promotion() {
        let d = Comonoid::group_like(&vect(&["1", "g"]));
        let x = discrete(&d).unwrap();
        let p = promote_comonoidal(&x, &d.delta, &d.epsilon).unwrap();
        assert_eq!(p.s, d.id());
        let b = one_object(&group_algebra_z2()).unwrap();
        let g = Comonoid::group_like(&b.a);
        let p = promote_comonoidal(&b, &g.delta, &g.epsilon).unwrap();
        assert_eq!(p.t.cod().dim(), 1);
        // The group-like counit is not multiplicative on x² = 0.
        let a = one_object(&dual_numbers()).unwrap();
        let gl = Comonoid::group_like(&a.a);
        let err = promote_comonoidal(&a, &gl.delta, &gl.epsilon).unwrap_err();
        assert!(matches!(err, Error::Check(r) if r.failure_names().iter().any(|n| n.starts_with("comonoidal.epsilon-functor"))));
    }

    #[test]
    fn non_cocommutative_objects_rejected() {
        let c = Comonoid::matrix(2, Q);
        let x = discrete(&c).unwrap();
        let err = promote_comonoidal(&x, &c.delta, &c.epsilon).unwrap_err();
        assert!(matches!(err, Error::Check(r) if r.failure_names().contains(&"comonoidal.objects-cocommutative".to_string())));
    }
}
