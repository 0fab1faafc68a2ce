//! Cotensor products `M □_C N`, their induced coactions, cotensors of maps,
//! the interchange isomorphism, cotensor comonoids, unitors and associators.

use crate::coalgebra::{check_comodule, check_comonoid, record_map_over, Coaction, Comodule, Comonoid, Side};
use crate::error::{Error, Result};
use crate::monoidal::{equalizer_of, permute, Equalizer, Mor, Obj};
use crate::report::Report;

/// An isomorphism together with its certified two-sided inverse.
#[derive(Clone, Debug)]
pub struct Iso {
    pub forward: Mor,
    pub inverse: Mor,
}

impl Iso {
    pub fn certify(forward: Mor) -> Result<Iso> {
        let inverse = forward.inverse()?;
        Ok(Iso { forward, inverse })
    }
}

/// `E = M □_C N ↣ M ⊗ N` with whichever outer coactions the factors induce.
#[derive(Clone, Debug)]
pub struct Cotensor {
    pub obj: Obj,
    pub mono: Mor,
    pub eq: Equalizer,
    pub over: Comonoid,
    pub m: Comodule,
    pub n: Comodule,
    /// Induced from the left coaction of `m`.
    pub left: Option<Coaction>,
    /// Induced from the right coaction of `n`.
    pub right: Option<Coaction>,
}

/// Factors `h: X → a ⊗ T ⊗ b` through `a ⊗ mono ⊗ b`. By regularity the
/// whiskered mono is the equalizer of the whiskered pair, so landing in its
/// image is the whole condition.
pub fn factor_whiskered(mono: &Mor, a: &Obj, b: &Obj, h: &Mor) -> Result<Mor> {
    let whisk = Mor::tensor_all(&[&Mor::identity(a), mono, &Mor::identity(b)])?;
    Mor::factor_mono(&whisk, h)
}

/// `M □_C N` for `m` carrying a right and `n` a left coaction of the same comonoid.
pub fn cotensor(m: &Comodule, n: &Comodule) -> Result<Cotensor> {
    let rho = m.coaction(Side::Right)?;
    let lambda = n.coaction(Side::Left)?;
    if rho.over != lambda.over {
        return Err(Error::ComonoidMismatch(format!(
            "right coaction over {} but left coaction over {}",
            rho.over.carrier, lambda.over.carrier
        )));
    }
    let (mc, nc) = (&m.carrier, &n.carrier);
    let (idm, idn) = (Mor::identity(mc), Mor::identity(nc));
    let pair = (rho.map.tensor(&idn)?, idm.tensor(&lambda.map)?);
    let eq = equalizer_of(&[pair], "□")?;
    let obj = eq.obj.clone();
    let mono = eq.mono.clone();
    let mut ct = Cotensor { obj, mono, eq, over: rho.over.clone(), m: m.clone(), n: n.clone(), left: None, right: None };
    if let Some(outer) = &n.right {
        let h = idm.tensor(&outer.map)?.after(&ct.mono)?;
        let unit = Obj::unit(mc.backend());
        let coaction = factor_whiskered(&ct.mono, &unit, &outer.over.carrier, &h)?;
        ct.right = Some(Coaction { over: outer.over.clone(), map: coaction });
    }
    if let Some(outer) = &m.left {
        let h = outer.map.tensor(&idn)?.after(&ct.mono)?;
        let unit = Obj::unit(mc.backend());
        let coaction = factor_whiskered(&ct.mono, &outer.over.carrier, &unit, &h)?;
        ct.left = Some(Coaction { over: outer.over.clone(), map: coaction });
    }
    Ok(ct)
}

impl Cotensor {
    /// The cotensor as a comodule with its induced coactions.
    pub fn comodule(&self) -> Comodule {
        Comodule { carrier: self.obj.clone(), left: self.left.clone(), right: self.right.clone() }
    }

    /// The unique map into `E` whose composite with the mono is `h`.
    pub fn factor(&self, h: &Mor) -> Result<Mor> {
        self.eq.factor_through(h)
    }

    pub fn induced_right_coaction(&self) -> Result<&Mor> {
        self.right.as_ref().map(|c| &c.map).ok_or_else(|| Error::Missing("right factor has no right coaction".into()))
    }

    pub fn induced_left_coaction(&self) -> Result<&Mor> {
        self.left.as_ref().map(|c| &c.map).ok_or_else(|| Error::Missing("left factor has no left coaction".into()))
    }
}

/// Equalizing, the induced comodule laws, and the squares relating the mono
/// to the induced coactions.
pub fn check_cotensor(ct: &Cotensor) -> Report {
    let mut r = Report::new();
    for (i, (f, g)) in ct.eq.pairs.iter().enumerate() {
        r.check_eq(&format!("cotensor.equalizes.{i}"), f.after(&ct.mono), g.after(&ct.mono));
    }
    r.absorb("cotensor.induced", check_comodule(&ct.comodule()));
    let idm = Mor::identity(&ct.m.carrier);
    let idn = Mor::identity(&ct.n.carrier);
    if let (Some(c), Some(outer)) = (&ct.right, &ct.n.right) {
        r.check_eq(
            "cotensor.right-square",
            ct.mono.tensor(&outer.over.id()).and_then(|x| x.after(&c.map)),
            idm.tensor(&outer.map).and_then(|x| x.after(&ct.mono)),
        );
    }
    if let (Some(c), Some(outer)) = (&ct.left, &ct.m.left) {
        r.check_eq(
            "cotensor.left-square",
            outer.over.id().tensor(&ct.mono).and_then(|x| x.after(&c.map)),
            outer.map.tensor(&idn).and_then(|x| x.after(&ct.mono)),
        );
    }
    r
}

/// Comonoid maps `f`, `g`, `h` for the outer left, middle and outer right
/// coactions; `f` and `h` are only checked when given.
#[derive(Clone, Copy, Debug)]
pub struct Over<'a> {
    pub f: Option<&'a Mor>,
    pub g: &'a Mor,
    pub h: Option<&'a Mor>,
}

impl<'a> Over<'a> {
    pub fn middle(g: &'a Mor) -> Over<'a> {
        Over { f: None, g, h: None }
    }
}

/// `φ □_g ψ`: the factorization of `(φ ⊗ ψ) ∘ mono` through the target mono,
/// after checking that `φ` and `ψ` are maps over `g` on the cotensored sides.
/// With `f` or `h` given, the result is verified to be a map over them.
pub fn cotensor_of_maps(src: &Cotensor, dst: &Cotensor, phi: &Mor, psi: &Mor, over: Over<'_>) -> Result<Mor> {
    let mut pre = Report::new();
    record_map_over(&mut pre, "cotensor-of-maps.phi-over-g", Side::Right, phi, over.g, src.m.rho()?, dst.m.rho()?);
    record_map_over(&mut pre, "cotensor-of-maps.psi-over-g", Side::Left, psi, over.g, src.n.lambda()?, dst.n.lambda()?);
    pre.into_result()?;
    let map = dst.factor(&phi.tensor(psi)?.after(&src.mono)?)?;
    let mut post = Report::new();
    if let Some(f) = over.f {
        record_map_over(&mut post, "cotensor-of-maps.over-f", Side::Left, &map, f, src.induced_left_coaction()?, dst.induced_left_coaction()?);
    }
    if let Some(h) = over.h {
        record_map_over(&mut post, "cotensor-of-maps.over-h", Side::Right, &map, h, src.induced_right_coaction()?, dst.induced_right_coaction()?);
    }
    post.into_result()?;
    Ok(map)
}

/// `(M □_C N) ⊗ (M' □_C' N') ≅ (M ⊗ M') □_{C⊗C'} (N ⊗ N')`.
#[derive(Clone, Debug)]
pub struct Interchange {
    pub target: Cotensor,
    pub iso: Iso,
}

/// The middle-four interchange `M ⊗ N ⊗ M' ⊗ N' → M ⊗ M' ⊗ N ⊗ N'` restricted
/// to the cotensors, with its certified inverse.
pub fn interchange_iso(a: &Cotensor, b: &Cotensor) -> Result<Interchange> {
    let target = cotensor(&a.m.tensor(&b.m)?, &a.n.tensor(&b.n)?)?;
    let shuffle = permute(&[&a.m.carrier, &a.n.carrier, &b.m.carrier, &b.n.carrier], &[0, 2, 1, 3])?;
    let ambient = Mor::tensor_after(&[&shuffle], &a.mono.tensor(&b.mono)?)?;
    let forward = target.factor(&ambient)?.retyped(&a.obj.tensor(&b.obj)?, &target.obj)?;
    let iso = Iso::certify(forward)?;
    Ok(Interchange { target, iso })
}

/// `M₁ □_D M₂` as a comonoid: comultiplication `iso⁻¹ ∘ (δ₁ □_d δ₂)` and
/// counit `(ε₁ ⊗ ε₂) ∘ mono`.
///
/// `ct.m` must be carried by `c1` with its right coaction over `D`, and
/// `ct.n` by `c2` with its left one.
pub fn cotensor_comonoid(ct: &Cotensor, c1: &Comonoid, c2: &Comonoid) -> Result<Comonoid> {
    let d = &ct.over;
    let mut pre = Report::new();
    pre.absorb("first", check_comonoid(c1));
    pre.absorb("second", check_comonoid(c2));
    let bare = cotensor(&ct.m.only(Side::Right), &ct.n.only(Side::Left))?;
    let rho = bare.m.rho()?;
    let lambda = bare.n.lambda()?;
    let one = Comonoid::unit(d.backend());
    let rho_sq = bare.m.tensor(&bare.m)?;
    let lambda_sq = bare.n.tensor(&bare.n)?;
    record_map_over(&mut pre, "delta1-over-d", Side::Right, &c1.delta, &d.delta, rho, rho_sq.rho()?);
    record_map_over(&mut pre, "delta2-over-d", Side::Left, &c2.delta, &d.delta, lambda, lambda_sq.lambda()?);
    record_map_over(&mut pre, "eps1-over-e", Side::Right, &c1.epsilon, &d.epsilon, rho, &one.id());
    record_map_over(&mut pre, "eps2-over-e", Side::Left, &c2.epsilon, &d.epsilon, lambda, &one.id());
    pre.into_result()?;
    let inter = interchange_iso(&bare, &bare)?;
    let dd = cotensor_of_maps(&bare, &inter.target, &c1.delta, &c2.delta, Over::middle(&d.delta))?;
    let delta = inter.iso.inverse.after(&dd)?;
    let epsilon = c1.epsilon.tensor(&c2.epsilon)?.after(&bare.mono)?;
    let c = Comonoid::new(&bare.obj, delta, epsilon)?;
    Ok(c)
}

/// `C □_C N → N`, `(ε ⊗ N) ∘ mono`, inverted by factoring `λ_N`.
pub fn left_unitor(ct: &Cotensor) -> Result<Iso> {
    let c = &ct.over;
    if ct.m.carrier != c.carrier {
        return Err(Error::ComonoidMismatch("left factor is not the comonoid itself".into()));
    }
    let forward = c.epsilon.tensor(&Mor::identity(&ct.n.carrier))?.after(&ct.mono)?;
    let inverse = ct.factor(ct.n.lambda()?)?;
    certify_pair(forward, inverse)
}

/// `M □_C C → M`, `(M ⊗ ε) ∘ mono`, inverted by factoring `ρ_M`.
pub fn right_unitor(ct: &Cotensor) -> Result<Iso> {
    let c = &ct.over;
    if ct.n.carrier != c.carrier {
        return Err(Error::ComonoidMismatch("right factor is not the comonoid itself".into()));
    }
    let forward = Mor::identity(&ct.m.carrier).tensor(&c.epsilon)?.after(&ct.mono)?;
    let inverse = ct.factor(ct.m.rho()?)?;
    certify_pair(forward, inverse)
}

fn certify_pair(forward: Mor, inverse: Mor) -> Result<Iso> {
    let there = inverse.after(&forward)?;
    let back = forward.after(&inverse)?;
    if there != Mor::identity(forward.dom()) || back != Mor::identity(forward.cod()) {
        return Err(Error::NotInvertible(format!("{} -> {}", forward.dom(), forward.cod())));
    }
    Ok(Iso { forward, inverse })
}

/// `C □_C N` built from the regular bicomodule, with its left unitor.
pub fn unitor_left(c: &Comonoid, n: &Comodule) -> Result<(Cotensor, Iso)> {
    let ct = cotensor(&c.regular_bi(), n)?;
    let iso = left_unitor(&ct)?;
    Ok((ct, iso))
}

pub fn unitor_right(m: &Comodule, c: &Comonoid) -> Result<(Cotensor, Iso)> {
    let ct = cotensor(m, &c.regular_bi())?;
    let iso = right_unitor(&ct)?;
    Ok((ct, iso))
}

/// Both bracketings of a triple cotensor and the comparison between them.
#[derive(Clone, Debug)]
pub struct Associated {
    pub mn: Cotensor,
    pub mn_p: Cotensor,
    pub np: Cotensor,
    pub m_np: Cotensor,
    /// `(M □ N) □ P → M □ (N □ P)`.
    pub iso: Iso,
}

impl Associated {
    /// `(M □ N) □ P ↣ M ⊗ N ⊗ P`.
    pub fn left_embedding(&self) -> Result<Mor> {
        self.mn.mono.tensor(&Mor::identity(&self.np.n.carrier))?.after(&self.mn_p.mono)
    }

    pub fn right_embedding(&self) -> Result<Mor> {
        Mor::identity(&self.mn.m.carrier).tensor(&self.np.mono)?.after(&self.m_np.mono)
    }
}

/// Builds both bracketings; the associator factors one embedding into
/// `M ⊗ N ⊗ P` through the other.
pub fn associate(m: &Comodule, n: &Comodule, p: &Comodule) -> Result<Associated> {
    let mn = cotensor(m, n)?;
    let mn_p = cotensor(&mn.comodule(), p)?;
    let np = cotensor(n, p)?;
    let m_np = cotensor(m, &np.comodule())?;
    let mut out = Associated {
        iso: Iso { forward: Mor::identity(&mn.obj), inverse: Mor::identity(&mn.obj) },
        mn,
        mn_p,
        np,
        m_np,
    };
    let (l, r) = (out.left_embedding()?, out.right_embedding()?);
    let forward = Mor::factor_mono(&r, &l)?;
    let inverse = Mor::factor_mono(&l, &r)?;
    out.iso = certify_pair(forward, inverse)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalgebra::check_map_over;
    use crate::exact::{Matrix, Field};
    use crate::monoidal::Backend;

    const Q: Field = Field::Rational;

    fn vect(labels: &[String]) -> Obj {
        Obj::atom(Backend::Vect(Q), labels.iter().cloned()).unwrap()
    }

    fn kz2() -> Comonoid {
        Comonoid::group_like(&vect(&["1".into(), "g".into()]))
    }

    /// A kℤ2-graded space with `a` even and `b` odd basis vectors, as a
    /// bicomodule with the same grading on both sides.
    fn graded(name: &str, a: usize, b: usize) -> Comodule {
        let c = kz2();
        let labels: Vec<String> = (0..a + b).map(|i| format!("{name}{i}")).collect();
        let m = vect(&labels);
        let deg = |i: usize| usize::from(i >= a);
        let rho = Mor::from_index_map(&m, &m.tensor(&c.carrier).unwrap(), |i| i * 2 + deg(i)).unwrap();
        let lambda = Mor::from_index_map(&m, &c.carrier.tensor(&m).unwrap(), |i| deg(i) * (a + b) + i).unwrap();
        Comodule::bi(&m, &c, lambda, &c, rho)
    }

    #[test]
    fn graded_cotensor_dimension_counts_matched_pieces() {
        for (a, b, c, d) in [(1, 1, 1, 1), (2, 1, 1, 2), (0, 2, 3, 1), (2, 0, 0, 2)] {
            let ct = cotensor(&graded("m", a, b), &graded("n", c, d)).unwrap();
            assert_eq!(ct.obj.dim(), a * c + b * d);
            assert!(check_cotensor(&ct).pass());
        }
    }

    #[test]
    fn finset_cotensor_is_pullback() {
        let c = Comonoid::group_like(&Obj::atom(Backend::Set, ["0", "1"]).unwrap());
        let x = Obj::atom(Backend::Set, ["a", "b", "c"]).unwrap();
        let y = Obj::atom(Backend::Set, ["p", "q"]).unwrap();
        let degx = [0, 1, 1];
        let degy = [1, 0];
        let rho = Mor::from_index_map(&x, &x.tensor(&c.carrier).unwrap(), |i| i * 2 + degx[i]).unwrap();
        let lambda = Mor::from_index_map(&y, &c.carrier.tensor(&y).unwrap(), |i| degy[i] * 2 + i).unwrap();
        let ct = cotensor(&Comodule::right(&x, &c, rho), &Comodule::left(&y, &c, lambda)).unwrap();
        assert_eq!(ct.obj.labels(), ["a⊗q", "b⊗p", "c⊗p"]);
    }

    #[test]
    fn regular_left_factor_gives_unitor() {
        let n = graded("n", 2, 1);
        let (ct, iso) = unitor_left(&kz2(), &n).unwrap();
        assert_eq!(ct.obj.dim(), 3);
        assert_eq!(ct.mono.after(&iso.inverse).unwrap(), *n.lambda().unwrap());
        // The unitor is a map of right comodules.
        let ok = check_map_over(&iso.forward, &kz2().id(), &ct.comodule(), &n);
        assert!(ok.pass());
        let (_, iso) = unitor_right(&n, &kz2()).unwrap();
        assert_eq!(iso.forward.after(&iso.inverse).unwrap(), Mor::identity(&n.carrier));
    }

    #[test]
    fn mismatched_comonoids_rejected() {
        let other = Comonoid::group_like(&vect(&["1".into(), "h".into()]));
        let m = graded("m", 1, 1);
        let n = Comodule::left(&m.carrier, &other, Mor::identity(&m.carrier));
        assert!(matches!(cotensor(&m, &n), Err(Error::ComonoidMismatch(_))));
    }

    #[test]
    fn interchange_round_trips() {
        let a = cotensor(&graded("m", 1, 1), &graded("n", 2, 1)).unwrap();
        let b = cotensor(&graded("p", 0, 1), &graded("q", 1, 1)).unwrap();
        let inter = interchange_iso(&a, &b).unwrap();
        assert_eq!(inter.target.obj.dim(), a.obj.dim() * b.obj.dim());
        let one = Mor::identity(inter.iso.forward.dom());
        assert_eq!(inter.iso.inverse.after(&inter.iso.forward).unwrap(), one);
    }

    #[test]
    fn interchange_with_units_is_identity() {
        let unit = Comonoid::unit(Backend::Vect(Q));
        let u = unit.regular_bi();
        let ct = cotensor(&u, &u).unwrap();
        let inter = interchange_iso(&ct, &ct).unwrap();
        assert_eq!(inter.iso.forward, Mor::identity(&Obj::unit(Backend::Vect(Q))));
        let a = cotensor(&graded("m", 1, 1), &graded("n", 1, 2)).unwrap();
        let inter = interchange_iso(&a, &ct).unwrap();
        assert_eq!(inter.iso.forward.matrix(), Mor::identity(&a.obj).matrix());
    }

    #[test]
    fn maps_of_cotensors_act_blockwise() {
        let (m, n) = (graded("m", 2, 1), graded("n", 1, 1));
        let ct = cotensor(&m, &n).unwrap();
        let id = cotensor_of_maps(&ct, &ct, &Mor::identity(&m.carrier), &Mor::identity(&n.carrier), Over::middle(&kz2().id())).unwrap();
        assert_eq!(id, Mor::identity(&ct.obj));
        // Mixing the two even vectors of m is degree preserving.
        let mix = Matrix::from_int_rows(Q, &[&[1, 1, 0], &[0, 1, 0], &[0, 0, 3]]);
        let phi = Mor::linear(&m.carrier, &m.carrier, mix).unwrap();
        let c = kz2().id();
        let map = cotensor_of_maps(&ct, &ct, &phi, &Mor::identity(&n.carrier), Over { f: Some(&c), g: &c, h: Some(&c) }).unwrap();
        // Basis of E: m0⊗n0, m1⊗n0, m2⊗n1.
        let expected = Matrix::from_int_rows(Q, &[&[1, 1, 0], &[0, 1, 0], &[0, 0, 3]]);
        assert_eq!(ct.mono.after(&map).unwrap(), ct.mono.after(&Mor::linear(&ct.obj, &ct.obj, expected).unwrap()).unwrap());
        let swap = Matrix::from_int_rows(Q, &[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]]);
        let bad = Mor::linear(&m.carrier, &m.carrier, swap).unwrap();
        let err = cotensor_of_maps(&ct, &ct, &bad, &Mor::identity(&n.carrier), Over::middle(&c)).unwrap_err();
        assert!(matches!(err, Error::Check(r) if r.failure_names() == ["cotensor-of-maps.phi-over-g"]));
    }

    #[test]
    fn cotensor_comonoid_of_regular_is_base() {
        let c = kz2();
        let ct = cotensor(&c.regular_bi(), &c.regular_bi()).unwrap();
        let cc = cotensor_comonoid(&ct, &c, &c).unwrap();
        assert!(check_comonoid(&cc).pass());
        let (_, iso) = unitor_left(&c, &c.regular_bi()).unwrap();
        let delta_via = iso.forward.tensor(&iso.forward).unwrap().after(&cc.delta).unwrap();
        assert_eq!(delta_via, c.delta.after(&iso.forward).unwrap());
    }

    #[test]
    fn associator_on_graded_triples() {
        let (m, n, p) = (graded("m", 1, 2), graded("n", 2, 1), graded("p", 1, 1));
        let a = associate(&m, &n, &p).unwrap();
        assert_eq!(a.mn_p.obj.dim(), a.m_np.obj.dim());
        assert_eq!(a.mn_p.obj.dim(), 1 * 2 * 1 + 2 * 1 * 1);
        assert_eq!(a.right_embedding().unwrap().after(&a.iso.forward).unwrap(), a.left_embedding().unwrap());
    }
}
