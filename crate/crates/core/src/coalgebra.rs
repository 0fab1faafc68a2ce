//! Comonoids, comodules and maps over comonoid maps.
//!
//! Every check returns a [`Report`] naming each evaluated diagram; failing
//! diagrams carry both evaluated paths.

use crate::error::{Error, Result};
use crate::exact::{Matrix, Field};
use crate::monoidal::{braiding, permute, Backend, Mor, Obj};
use crate::report::Report;

/// A counital coassociative comonoid `(C, δ, ε)`.
#[derive(Clone, Debug)]
pub struct Comonoid {
    pub carrier: Obj,
    pub delta: Mor,
    pub epsilon: Mor,
}

impl PartialEq for Comonoid {
    /// Structural: same carrier and identical structure maps.
    fn eq(&self, other: &Comonoid) -> bool {
        self.carrier == other.carrier && self.delta == other.delta && self.epsilon == other.epsilon
    }
}

impl Comonoid {
    pub fn new(carrier: &Obj, delta: Mor, epsilon: Mor) -> Result<Comonoid> {
        let cc = carrier.tensor(carrier)?;
        if delta.dom().dim() != carrier.dim() || delta.cod().dim() != cc.dim() {
            return Err(Error::DimensionMismatch("comultiplication must be C -> C⊗C".into()));
        }
        if epsilon.dom().dim() != carrier.dim() || epsilon.cod().dim() != 1 {
            return Err(Error::DimensionMismatch("counit must be C -> 1".into()));
        }
        Ok(Comonoid { carrier: carrier.clone(), delta: delta.retyped(carrier, &cc)?, epsilon })
    }

    /// The unit comonoid `1`.
    pub fn unit(backend: Backend) -> Comonoid {
        let one = Obj::unit(backend);
        Comonoid { carrier: one.clone(), delta: Mor::identity(&one), epsilon: Mor::identity(&one) }
    }

    /// `x ↦ x ⊗ x`, `x ↦ 1` on every basis element: the group-like comonoid in
    /// FinVect, the diagonal (cartesian) comonoid in FinSet.
    pub fn group_like(carrier: &Obj) -> Comonoid {
        let n = carrier.dim();
        let cc = carrier.tensor(carrier).expect("same backend");
        let one = Obj::unit(carrier.backend());
        let delta = Mor::from_index_map(carrier, &cc, |i| i * n + i).expect("diagonal");
        let epsilon = Mor::from_index_map(carrier, &one, |_| 0).expect("collapse");
        Comonoid { carrier: carrier.clone(), delta, epsilon }
    }

    /// The dual of `n × n` matrices: `δ(e_ij) = Σ_k e_ik ⊗ e_kj`,
    /// `ε(e_ij) = δ_ij`. Not cocommutative for `n > 1`.
    pub fn matrix(n: usize, field: Field) -> Comonoid {
        let labels = (0..n * n).map(|k| format!("e{}{}", k / n + 1, k % n + 1));
        let c = Obj::atom(Backend::Vect(field), labels).expect("distinct labels");
        let cc = c.tensor(&c).expect("same backend");
        let mut delta = Matrix::zeros(n.pow(4), n * n, field);
        let mut eps = Matrix::zeros(1, n * n, field);
        for i in 0..n {
            eps.set(0, i * n + i, field.one());
            for j in 0..n {
                for k in 0..n {
                    delta.set((i * n + k) * n * n + k * n + j, i * n + j, field.one());
                }
            }
        }
        let delta = Mor::linear(&c, &cc, delta).expect("shape");
        let epsilon = Mor::linear(&c, &Obj::unit(c.backend()), eps).expect("shape");
        Comonoid { carrier: c, delta, epsilon }
    }

    pub fn backend(&self) -> Backend {
        self.carrier.backend()
    }

    pub fn id(&self) -> Mor {
        Mor::identity(&self.carrier)
    }

    /// The tensor comonoid: `δ = (C ⊗ β ⊗ C')(δ ⊗ δ')`, `ε = ε ⊗ ε'`.
    pub fn tensor(&self, other: &Comonoid) -> Result<Comonoid> {
        let (c, d) = (&self.carrier, &other.carrier);
        let shuffle = permute(&[c, c, d, d], &[0, 2, 1, 3])?;
        let delta = shuffle.after(&self.delta.tensor(&other.delta)?)?;
        let epsilon = self.epsilon.tensor(&other.epsilon)?;
        Comonoid::new(&c.tensor(d)?, delta, epsilon)
    }

    /// `C` as a right comodule over itself.
    pub fn regular_right(&self) -> Comodule {
        Comodule::right(&self.carrier, self, self.delta.clone())
    }

    pub fn regular_left(&self) -> Comodule {
        Comodule::left(&self.carrier, self, self.delta.clone())
    }

    /// `C` as a `(C, C)`-bicomodule via `δ` on both sides.
    pub fn regular_bi(&self) -> Comodule {
        Comodule::bi(&self.carrier, self, self.delta.clone(), self, self.delta.clone())
    }
}

/// A coaction of a comonoid on some carrier: `M → C ⊗ M` (left) or
/// `M → M ⊗ C` (right).
#[derive(Clone, Debug)]
pub struct Coaction {
    pub over: Comonoid,
    pub map: Mor,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A comodule with an optional left and an optional right coaction. With
/// both present it is a bicomodule; the compatibility law is checked by
/// [`check_comodule`].
#[derive(Clone, Debug)]
pub struct Comodule {
    pub carrier: Obj,
    pub left: Option<Coaction>,
    pub right: Option<Coaction>,
}

impl Comodule {
    pub fn right(carrier: &Obj, over: &Comonoid, rho: Mor) -> Comodule {
        Comodule { carrier: carrier.clone(), left: None, right: Some(Coaction { over: over.clone(), map: rho }) }
    }

    pub fn left(carrier: &Obj, over: &Comonoid, lambda: Mor) -> Comodule {
        Comodule { carrier: carrier.clone(), left: Some(Coaction { over: over.clone(), map: lambda }), right: None }
    }

    pub fn bi(carrier: &Obj, left_over: &Comonoid, lambda: Mor, right_over: &Comonoid, rho: Mor) -> Comodule {
        Comodule {
            carrier: carrier.clone(),
            left: Some(Coaction { over: left_over.clone(), map: lambda }),
            right: Some(Coaction { over: right_over.clone(), map: rho }),
        }
    }

    pub fn coaction(&self, side: Side) -> Result<&Coaction> {
        match side {
            Side::Left => self.left.as_ref(),
            Side::Right => self.right.as_ref(),
        }
        .ok_or_else(|| Error::Missing(format!("{side:?} coaction on {}", self.carrier)))
    }

    pub fn rho(&self) -> Result<&Mor> {
        Ok(&self.coaction(Side::Right)?.map)
    }

    pub fn lambda(&self) -> Result<&Mor> {
        Ok(&self.coaction(Side::Left)?.map)
    }

    pub fn with_left(mut self, over: &Comonoid, lambda: Mor) -> Comodule {
        self.left = Some(Coaction { over: over.clone(), map: lambda });
        self
    }

    pub fn with_right(mut self, over: &Comonoid, rho: Mor) -> Comodule {
        self.right = Some(Coaction { over: over.clone(), map: rho });
        self
    }

    pub fn only(&self, side: Side) -> Comodule {
        match side {
            Side::Left => Comodule { carrier: self.carrier.clone(), left: self.left.clone(), right: None },
            Side::Right => Comodule { carrier: self.carrier.clone(), left: None, right: self.right.clone() },
        }
    }

    /// `M ⊗ N` with coactions of the tensor comonoids on whichever sides
    /// both factors carry one.
    pub fn tensor(&self, other: &Comodule) -> Result<Comodule> {
        let (m, n) = (&self.carrier, &other.carrier);
        let mut out = Comodule { carrier: m.tensor(n)?, left: None, right: None };
        if let (Some(a), Some(b)) = (&self.right, &other.right) {
            let (c, c2) = (&a.over.carrier, &b.over.carrier);
            let shuffle = permute(&[m, c, n, c2], &[0, 2, 1, 3])?;
            out.right = Some(Coaction { over: a.over.tensor(&b.over)?, map: shuffle.after(&a.map.tensor(&b.map)?)? });
        }
        if let (Some(a), Some(b)) = (&self.left, &other.left) {
            let (c, c2) = (&a.over.carrier, &b.over.carrier);
            let shuffle = permute(&[c, m, c2, n], &[0, 2, 1, 3])?;
            out.left = Some(Coaction { over: a.over.tensor(&b.over)?, map: shuffle.after(&a.map.tensor(&b.map)?)? });
        }
        Ok(out)
    }
}

pub fn check_comonoid(c: &Comonoid) -> Report {
    let mut r = Report::new();
    let id = c.id();
    r.check_eq(
        "comonoid.coassociativity",
        c.delta.tensor(&id).and_then(|x| x.after(&c.delta)),
        id.tensor(&c.delta).and_then(|x| x.after(&c.delta)),
    );
    r.check_eq("comonoid.counit-left", c.epsilon.tensor(&id).and_then(|x| x.after(&c.delta)), Ok(id.clone()));
    r.check_eq("comonoid.counit-right", id.tensor(&c.epsilon).and_then(|x| x.after(&c.delta)), Ok(id.clone()));
    r
}

pub fn is_cocommutative(c: &Comonoid) -> bool {
    braiding(&c.carrier, &c.carrier).and_then(|b| b.after(&c.delta)).is_ok_and(|x| x == c.delta)
}

/// `δ_D ∘ q = (q ⊗ q) ∘ δ_C` and `ε_D ∘ q = ε_C`.
pub fn check_comonoid_map(q: &Mor, from: &Comonoid, to: &Comonoid) -> Report {
    let mut r = Report::new();
    r.check_eq("comonoid-map.delta", to.delta.after(q), q.tensor(q).and_then(|x| x.after(&from.delta)));
    r.check_eq("comonoid-map.epsilon", to.epsilon.after(q), Ok(from.epsilon.clone()));
    r
}

/// Comodule laws on each present side, plus compatibility for bicomodules.
pub fn check_comodule(m: &Comodule) -> Report {
    let mut r = Report::new();
    let id = Mor::identity(&m.carrier);
    if let Some(Coaction { over, map: rho }) = &m.right {
        let idc = over.id();
        r.check_eq(
            "comodule.right.coassociativity",
            rho.tensor(&idc).and_then(|x| x.after(rho)),
            id.tensor(&over.delta).and_then(|x| x.after(rho)),
        );
        r.check_eq("comodule.right.counit", id.tensor(&over.epsilon).and_then(|x| x.after(rho)), Ok(id.clone()));
    }
    if let Some(Coaction { over, map: lambda }) = &m.left {
        let idc = over.id();
        r.check_eq(
            "comodule.left.coassociativity",
            idc.tensor(lambda).and_then(|x| x.after(lambda)),
            over.delta.tensor(&id).and_then(|x| x.after(lambda)),
        );
        r.check_eq("comodule.left.counit", over.epsilon.tensor(&id).and_then(|x| x.after(lambda)), Ok(id.clone()));
    }
    if let (Some(l), Some(rt)) = (&m.left, &m.right) {
        r.check_eq(
            "bicomodule.compatibility",
            l.map.tensor(&rt.over.id()).and_then(|x| x.after(&rt.map)),
            l.over.id().tensor(&rt.map).and_then(|x| x.after(&l.map)),
        );
    }
    r
}

/// The two paths of the map-over square on one side:
/// right: `(ρ_N ∘ φ, (φ ⊗ f) ∘ ρ_M)`; left: `(λ_N ∘ φ, (f ⊗ φ) ∘ λ_M)`.
pub fn map_over_paths(side: Side, phi: &Mor, f: &Mor, source: &Mor, target: &Mor) -> (Result<Mor>, Result<Mor>) {
    let lhs = target.after(phi);
    let rhs = match side {
        Side::Right => phi.tensor(f).and_then(|x| x.after(source)),
        Side::Left => f.tensor(phi).and_then(|x| x.after(source)),
    };
    (lhs, rhs)
}

/// Records the map-over square for `phi` on `side` under `name`.
pub fn record_map_over(r: &mut Report, name: &str, side: Side, phi: &Mor, f: &Mor, source: &Mor, target: &Mor) -> bool {
    let (l, rt) = map_over_paths(side, phi, f, source, target);
    r.check_eq(name, l, rt)
}

/// `φ: M → N` is a map over `f` on the right: `ρ_N φ = (φ ⊗ f) ρ_M`.
pub fn check_map_over(phi: &Mor, f: &Mor, m: &Comodule, n: &Comodule) -> Report {
    let mut r = Report::new();
    match (m.rho(), n.rho()) {
        (Ok(src), Ok(tgt)) => {
            record_map_over(&mut r, "map-over.right", Side::Right, phi, f, src, tgt);
        }
        _ => {
            r.check("map-over.right", false, || "both comodules need right coactions".into());
        }
    }
    r
}

/// Mirror of [`check_map_over`] for left coactions: `λ_N φ = (f ⊗ φ) λ_M`.
pub fn check_map_over_left(phi: &Mor, f: &Mor, m: &Comodule, n: &Comodule) -> Report {
    let mut r = Report::new();
    match (m.lambda(), n.lambda()) {
        (Ok(src), Ok(tgt)) => {
            record_map_over(&mut r, "map-over.left", Side::Left, phi, f, src, tgt);
        }
        _ => {
            r.check("map-over.left", false, || "both comodules need left coactions".into());
        }
    }
    r
}

/// Corestriction of the right coaction along a comonoid map `f: C → D`.
pub fn corestrict(f: &Mor, m: &Comodule, to: &Comonoid) -> Result<Comodule> {
    let coaction = m.coaction(Side::Right)?;
    check_comonoid_map(f, &coaction.over, to).into_result()?;
    let rho = Mor::identity(&m.carrier).tensor(f)?.after(&coaction.map)?;
    Ok(Comodule { carrier: m.carrier.clone(), left: m.left.clone(), right: Some(Coaction { over: to.clone(), map: rho }) })
}

/// Corestriction of the left coaction along `f`.
pub fn corestrict_left(f: &Mor, m: &Comodule, to: &Comonoid) -> Result<Comodule> {
    let coaction = m.coaction(Side::Left)?;
    check_comonoid_map(f, &coaction.over, to).into_result()?;
    let lambda = f.tensor(&Mor::identity(&m.carrier))?.after(&coaction.map)?;
    Ok(Comodule { carrier: m.carrier.clone(), left: Some(Coaction { over: to.clone(), map: lambda }), right: m.right.clone() })
}

/// The right `D`-coaction `p = (C ⊗ q) ∘ δ` induced by a comonoid map `q`.
pub fn coaction_from_comonoid_map(q: &Mor, c: &Comonoid, d: &Comonoid) -> Result<Comodule> {
    check_comonoid_map(q, c, d).into_result()?;
    let p = c.id().tensor(q)?.after(&c.delta)?;
    Ok(Comodule::right(&c.carrier, d, p))
}

/// Recovers `q = (ε ⊗ D) ∘ p` and verifies that it induces `p`.
pub fn comonoid_map_from_coaction(p: &Mor, c: &Comonoid, d: &Comonoid) -> Result<Mor> {
    let q = c.epsilon.tensor(&d.id())?.after(p)?.retyped(&c.carrier, &d.carrier)?;
    let induced = c.id().tensor(&q)?.after(&c.delta)?;
    if &induced != p {
        return Err(Error::InducedMapMismatch(format!("(C⊗q)δ = {induced} but p = {p}")));
    }
    Ok(q)
}

/// The left analogue: `s = (D ⊗ ε) ∘ σ`, verified against `σ = (s ⊗ C) ∘ δ`.
pub fn comonoid_map_from_left_coaction(sigma: &Mor, c: &Comonoid, d: &Comonoid) -> Result<Mor> {
    let s = d.id().tensor(&c.epsilon)?.after(sigma)?.retyped(&c.carrier, &d.carrier)?;
    let induced = s.tensor(&c.id())?.after(&c.delta)?;
    if &induced != sigma {
        return Err(Error::InducedMapMismatch(format!("(s⊗C)δ = {induced} but σ = {sigma}")));
    }
    Ok(s)
}

/// Both conditions of the equivalence "`p` is a comonoid map iff `δ_C` is a map
/// over `d`", evaluated independently; disagreement is itself a failure.
pub fn check_coaction_is_comonoid_map(p: &Mor, c: &Comonoid, d: &Comonoid) -> Report {
    let mut r = Report::new();
    let as_map = match c.tensor(d) {
        Ok(cd) => check_comonoid_map(p, c, &cd),
        Err(e) => {
            let mut bad = Report::new();
            bad.check("comonoid-map.delta", false, || e.to_string());
            bad
        }
    };
    let first = as_map.pass();
    r.absorb("coaction-comonoid.p-comonoid-map", as_map);
    let (cc, dd) = (&c.carrier, &d.carrier);
    let target = permute(&[cc, dd, cc, dd], &[0, 2, 1, 3]).and_then(|s| s.after(&p.tensor(p)?));
    let second = match target {
        Ok(t) => record_map_over(&mut r, "coaction-comonoid.delta-over-d", Side::Right, &c.delta, &d.delta, p, &t),
        Err(e) => r.check("coaction-comonoid.delta-over-d", false, || e.to_string()),
    };
    r.check("coaction-comonoid.lemma-agreement", first == second, || {
        format!("p comonoid map: {first}, δ over d: {second}")
    });
    r
}

/// For `C` cocommutative, the coaction `ρ` is a map over `δ`.
pub fn check_coaction_over_cocomm(m: &Comodule) -> Report {
    let mut r = Report::new();
    let Ok(coaction) = m.coaction(Side::Right) else {
        r.check("coaction-over-cocomm.right-coaction", false, || "no right coaction".into());
        return r;
    };
    let c = &coaction.over;
    let rho = &coaction.map;
    r.check("coaction-over-cocomm.precondition", is_cocommutative(c), || "comonoid is not cocommutative".into());
    let mc = &m.carrier;
    let cc = &c.carrier;
    let target = permute(&[mc, cc, cc, cc], &[0, 2, 1, 3]).and_then(|s| s.after(&rho.tensor(&c.delta)?));
    match target {
        Ok(t) => record_map_over(&mut r, "coaction-over-cocomm.square", Side::Right, rho, &c.delta, rho, &t),
        Err(e) => r.check("coaction-over-cocomm.square", false, || e.to_string()),
    };
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Matrix;

    const Q: Field = Field::Rational;

    fn vect(labels: &[&str]) -> Obj {
        Obj::atom(Backend::Vect(Q), labels.iter().copied()).unwrap()
    }

    fn kz2() -> Comonoid {
        Comonoid::group_like(&vect(&["1", "g"]))
    }

    /// The sign-graded kℤ2-comodule: `1 ↦ 1 ⊗ 1`, `x ↦ x ⊗ g`.
    fn graded() -> Comodule {
        let c = kz2();
        let m = vect(&["1", "x"]);
        let mc = m.tensor(&c.carrier).unwrap();
        let rho = Mor::from_index_map(&m, &mc, |i| i * 2 + i).unwrap();
        Comodule::right(&m, &c, rho)
    }

    #[test]
    fn group_like_and_diagonal_comonoids_pass() {
        assert!(check_comonoid(&kz2()).pass());
        assert!(is_cocommutative(&kz2()));
        let s = Comonoid::group_like(&Obj::atom(Backend::Set, ["a", "b", "c"]).unwrap());
        assert!(check_comonoid(&s).pass());
        assert!(is_cocommutative(&s));
    }

    #[test]
    fn zero_comultiplication_fails_counit() {
        let c = kz2();
        let bad = Comonoid { delta: Mor::zero(&c.carrier, c.delta.cod()).unwrap(), ..c };
        let names = check_comonoid(&bad).failure_names();
        assert!(names.contains(&"comonoid.counit-left".to_string()));
    }

    #[test]
    fn comonoid_maps() {
        let c = kz2();
        assert!(check_comonoid_map(&c.id(), &c, &c).pass());
        let unit = Comonoid::unit(c.backend());
        assert!(check_comonoid_map(&c.epsilon, &c, &unit).pass());
    }

    #[test]
    fn map_over_and_corestriction() {
        let m = graded();
        let c = kz2();
        assert!(check_map_over(&Mor::identity(&m.carrier), &c.id(), &m, &m).pass());
        let unit = Comonoid::unit(c.backend());
        let trivial = corestrict(&c.epsilon, &m, &unit).unwrap();
        assert_eq!(trivial.rho().unwrap(), &Mor::identity(&m.carrier));
        assert!(check_map_over(&Mor::identity(&m.carrier), &c.epsilon, &m, &trivial).pass());
        assert!(check_comodule(&trivial).pass());
        assert_eq!(corestrict(&c.id(), &m, &c).unwrap().rho().unwrap(), m.rho().unwrap());
        // Swapping the graded pieces is not equivariant.
        let swap = Mor::linear(&m.carrier, &m.carrier, Matrix::from_int_rows(Q, &[&[0, 1], &[1, 0]])).unwrap();
        let r = check_map_over(&swap, &c.id(), &m, &m);
        assert_eq!(r.failure_names(), ["map-over.right"]);
        assert!(r.failures[0].left.is_some() && r.failures[0].right.is_some());
    }

    #[test]
    fn induced_coactions_round_trip() {
        let c = kz2();
        let p = coaction_from_comonoid_map(&c.id(), &c, &c).unwrap();
        assert_eq!(p.rho().unwrap(), &c.delta);
        assert_eq!(comonoid_map_from_coaction(&c.delta, &c, &c).unwrap(), c.id());
        let unit = Comonoid::unit(c.backend());
        let p = coaction_from_comonoid_map(&c.epsilon, &c, &unit).unwrap();
        assert_eq!(p.rho().unwrap(), &c.id());
        assert!(check_coaction_is_comonoid_map(&c.delta, &c, &c).pass());
    }

    fn matrix_coalgebra() -> Comonoid {
        Comonoid::matrix(2, Q)
    }

    #[test]
    fn coaction_over_cocommutative() {
        assert!(check_coaction_over_cocomm(&graded()).pass());
        let m = matrix_coalgebra();
        assert!(check_comonoid(&m).pass());
        assert!(!is_cocommutative(&m));
        let names = check_coaction_over_cocomm(&m.regular_right()).failure_names();
        assert_eq!(names, ["coaction-over-cocomm.precondition", "coaction-over-cocomm.square"]);
    }

    #[test]
    fn lemma_agreement_on_non_cocommutative() {
        let m = matrix_coalgebra();
        let r = check_coaction_is_comonoid_map(&m.delta, &m, &m);
        assert!(!r.failure_names().contains(&"coaction-comonoid.lemma-agreement".to_string()));
        assert!(!r.pass());
    }
}
