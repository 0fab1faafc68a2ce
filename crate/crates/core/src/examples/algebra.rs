//! Bimonoids, module algebras and the Hopf-algebraic smash product.

use crate::coalgebra::{check_comonoid, Comonoid};
use crate::error::{Error, Result};
use crate::exact::{Field, Matrix, Scalar};
use crate::internal::{check_monoid, one_object, promote_comonoidal, Monoid};
use crate::monoidal::{permute, Backend, Mor, Obj};
use crate::prestack::{action_domains, Prestack, Smash};
use crate::report::Report;

#[derive(Clone, Debug)]
pub struct Bimonoid {
    pub monoid: Monoid,
    pub comonoid: Comonoid,
}

impl Bimonoid {
    pub fn carrier(&self) -> &Obj {
        &self.monoid.carrier
    }
}

pub fn check_bimonoid(h: &Bimonoid) -> Report {
    let mut r = Report::new();
    r.absorb("bimonoid.monoid", check_monoid(&h.monoid));
    r.absorb("bimonoid.comonoid", check_comonoid(&h.comonoid));
    let x = h.carrier();
    let (mu, eta) = (&h.monoid.mult, &h.monoid.unit);
    let (delta, eps) = (&h.comonoid.delta, &h.comonoid.epsilon);
    let rhs = permute(&[x, x, x, x], &[0, 2, 1, 3])
        .and_then(|s| s.after(&delta.tensor(delta)?))
        .and_then(|k| mu.tensor(mu)?.after(&k));
    r.check_eq("bimonoid.delta-multiplicative", delta.after(mu), rhs);
    r.check_eq("bimonoid.epsilon-multiplicative", eps.after(mu), eps.tensor(eps));
    r.check_eq("bimonoid.delta-unit", delta.after(eta), eta.tensor(eta));
    r.check_eq("bimonoid.epsilon-unit", eps.after(eta), Ok(Mor::identity(eta.dom())));
    r
}

fn vect(field: Field, labels: &[&str]) -> Obj {
    Obj::atom(Backend::Vect(field), labels.iter().copied()).expect("distinct labels")
}

fn unit_vector(obj: &Obj, i: usize) -> Mor {
    Mor::from_index_map(&Obj::unit(obj.backend()), obj, |_| i).expect("basis vector")
}

/// Checks the group axioms on a multiplication table, returning the identity.
fn check_group(table: &[Vec<usize>]) -> Result<usize> {
    let n = table.len();
    let mut r = Report::new();
    let shaped = table.iter().all(|row| row.len() == n && row.iter().all(|&x| x < n));
    if !r.check("group.table", shaped && n > 0, || format!("not a {n}x{n} table with entries below {n}")) {
        return Err(Error::Check(Box::new(r)));
    }
    let assoc = (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| table[table[a][b]][c] == table[a][table[b][c]])));
    r.check("group.associativity", assoc, || "table is not associative".into());
    let e = (0..n).find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a));
    r.check("group.identity", e.is_some(), || "no two-sided identity".into());
    if let Some(e) = e {
        let inv = (0..n).all(|a| (0..n).any(|b| table[a][b] == e && table[b][a] == e));
        r.check("group.inverses", inv, || "some element has no inverse".into());
    }
    r.into_result()?;
    Ok(e.unwrap())
}

/// The group bimonoid `kG`: group elements are group-like and `ε ≡ 1`.
pub fn group_algebra(labels: &[&str], table: &[Vec<usize>], field: Field) -> Result<Bimonoid> {
    if labels.len() != table.len() {
        return Err(Error::Input(format!("{} labels for a group of order {}", labels.len(), table.len())));
    }
    let e = check_group(table)?;
    let n = table.len();
    let x = vect(field, labels);
    let mult = Mor::from_index_map(&x.tensor(&x)?, &x, |k| table[k / n][k % n])?;
    let monoid = Monoid { carrier: x.clone(), mult, unit: unit_vector(&x, e) };
    Ok(Bimonoid { monoid, comonoid: Comonoid::group_like(&x) })
}

/// `ℤ/n` with elements `1, g, …, g^{n-1}`.
pub fn cyclic_group_algebra(n: usize, field: Field) -> Result<Bimonoid> {
    let labels: Vec<String> = (0..n)
        .map(|i| match i {
            0 => "1".to_string(),
            1 => "g".to_string(),
            _ => format!("g{i}"),
        })
        .collect();
    let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    let table: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
    group_algebra(&refs, &table, field)
}

/// `k[x]/(x²)` on the basis `1, x`.
pub fn dual_numbers(field: Field) -> Monoid {
    let a = vect(field, &["1", "x"]);
    let aa = a.tensor(&a).expect("same backend");
    let mult = Mor::linear(&aa, &a, Matrix::from_int_rows(field, &[&[1, 0, 0, 0], &[0, 1, 1, 0]])).expect("shape");
    Monoid { carrier: a.clone(), mult, unit: unit_vector(&a, 0) }
}

/// Sweedler's four-dimensional Hopf algebra on the basis `1, g, x, gx` with
/// `g² = 1`, `x² = 0`, `xg = -gx`, `δx = x ⊗ 1 + g ⊗ x`. Needs characteristic ≠ 2.
pub fn sweedler(field: Field) -> Bimonoid {
    let h = vect(field, &["1", "g", "x", "gx"]);
    let hh = h.tensor(&h).expect("same backend");
    // g^a x^b has index a + 2b.
    let mut mult = Matrix::zeros(4, 16, field);
    for i in 0..4 {
        for j in 0..4 {
            let (a, b, c, d) = (i % 2, i / 2, j % 2, j / 2);
            if b + d < 2 {
                let sign = if b * c == 1 { field.from_i64(-1) } else { field.one() };
                mult.set((a + c) % 2 + 2 * (b + d), i * 4 + j, sign);
            }
        }
    }
    let mut delta = Matrix::zeros(16, 4, field);
    let mut put = |col: usize, l: usize, r: usize| delta.set(l * 4 + r, col, field.one());
    put(0, 0, 0);
    put(1, 1, 1);
    put(2, 2, 0);
    put(2, 1, 2);
    put(3, 3, 1);
    put(3, 0, 3);
    let one = Obj::unit(h.backend());
    let eps = Matrix::from_int_rows(field, &[&[1, 1, 0, 0]]);
    let monoid = Monoid {
        carrier: h.clone(),
        mult: Mor::linear(&hh, &h, mult).expect("shape"),
        unit: unit_vector(&h, 0),
    };
    let comonoid = Comonoid {
        carrier: h.clone(),
        delta: Mor::linear(&h, &hh, delta).expect("shape"),
        epsilon: Mor::linear(&h, &one, eps).expect("shape"),
    };
    Bimonoid { monoid, comonoid }
}

fn action_from_rows(h: &Bimonoid, a: &Monoid, rows: &[&[i64]]) -> Mor {
    let field = h.carrier().backend().field().expect("FinVect");
    let dom = h.carrier().tensor(&a.carrier).expect("same backend");
    Mor::linear(&dom, &a.carrier, Matrix::from_int_rows(field, rows)).expect("shape")
}

/// `h · a = ε(h) a`.
pub fn trivial_action(h: &Bimonoid, a: &Monoid) -> Result<Mor> {
    h.comonoid.epsilon.tensor(&Mor::identity(&a.carrier))
}

/// `g · 1 = 1`, `g · x = -x` on `k[x]/(x²)`, for `h = kℤ2`.
pub fn sign_action(h: &Bimonoid, a: &Monoid) -> Mor {
    action_from_rows(h, a, &[&[1, 0, 1, 0], &[0, 1, 0, -1]])
}

/// Sweedler's algebra on `k[y]/(y²)`: `g` acts by the sign and `x` by the
/// skew derivation `x · 1 = 0`, `x · y = 1`.
pub fn sweedler_action(h: &Bimonoid, a: &Monoid) -> Mor {
    action_from_rows(h, a, &[&[1, 0, 1, 0, 0, 1, 0, 1], &[0, 1, 0, -1, 0, 0, 0, 0]])
}

/// The axioms making `action` an `H`-module algebra structure on `A`.
pub fn check_module_algebra(h: &Bimonoid, a: &Monoid, action: &Mor) -> Report {
    let mut r = Report::new();
    let (hx, ax) = (h.carrier(), &a.carrier);
    let (ida, idh) = (Mor::identity(ax), Mor::identity(hx));
    let lhs = h.monoid.mult.tensor(&ida).and_then(|k| action.after(&k));
    let rhs = idh.tensor(action).and_then(|k| action.after(&k));
    r.check_eq("module-algebra.action-associativity", lhs, rhs);
    let lhs = h.monoid.unit.tensor(&ida).and_then(|k| action.after(&k));
    r.check_eq("module-algebra.action-unit", lhs, Ok(ida.clone()));
    // h · (ab) = (h₁ · a)(h₂ · b).
    let lhs = idh.tensor(&a.mult).and_then(|k| action.after(&k));
    let rhs = permute(&[hx, hx, ax, ax], &[0, 2, 1, 3])
        .and_then(|s| s.after(&h.comonoid.delta.tensor(&Mor::identity(&ax.tensor(ax)?))?))
        .and_then(|k| action.tensor(action)?.after(&k))
        .and_then(|k| a.mult.after(&k));
    r.check_eq("module-algebra.measuring", lhs, rhs);
    let lhs = idh.tensor(&a.unit).and_then(|k| action.after(&k));
    r.check_eq("module-algebra.unit-measuring", lhs, a.unit.after(&h.comonoid.epsilon));
    r
}

/// An `H`-module algebra as a prestack over the one-object category of `H`
/// with trivial objects: `f = ε` and `φ` the action.
pub fn module_algebra_prestack(h: &Bimonoid, a: &Monoid, action: &Mor) -> Result<Prestack> {
    let mut r = Report::new();
    r.absorb("", check_bimonoid(h));
    r.absorb("", check_module_algebra(h, a, action));
    r.into_result()?;
    let b = one_object(&h.monoid)?;
    let base = promote_comonoidal(&b, &h.comonoid.delta, &h.comonoid.epsilon)?;
    let cat = one_object(a)?;
    let p = cat.c.id();
    let pi = cat.id();
    let (bc, ba) = action_domains(&cat, &base, &p, &pi)?;
    let f = h.comonoid.epsilon.after(&bc.mono)?.retyped(&bc.obj, &cat.c.carrier)?;
    let phi = action.after(&ba.mono)?;
    Ok(Prestack { cat, base, p, pi, f, phi })
}

/// `(a ⊗ h)(a' ⊗ h') = a (h₁ · a') ⊗ h₂ h'` on the basis of `A ⊗ H`, as a
/// matrix from `(A ⊗ H) ⊗ (A ⊗ H)` to `A ⊗ H`, computed entry by entry.
pub fn classical_smash_oracle(h: &Bimonoid, a: &Monoid, action: &Mor) -> Matrix {
    let field = h.carrier().backend().field().expect("FinVect");
    let (na, nh) = (a.carrier.dim(), h.carrier().dim());
    let n = na * nh;
    let mu_a = a.mult.matrix().expect("linear");
    let mu_h = h.monoid.mult.matrix().expect("linear");
    let delta = h.comonoid.delta.matrix().expect("linear");
    let act = action.matrix().expect("linear");
    let mut out = Matrix::zeros(n, n * n, field);
    for (x, hx) in (0..na).flat_map(|x| (0..nh).map(move |y| (x, y))) {
        for (x2, hy) in (0..na).flat_map(|x| (0..nh).map(move |y| (x, y))) {
            let col = (x * nh + hx) * n + x2 * nh + hy;
            for h1 in 0..nh {
                for h2 in 0..nh {
                    let c = delta.get(h1 * nh + h2, hx);
                    if c.is_zero() {
                        continue;
                    }
                    for s in 0..na {
                        let acted = act.get(s, h1 * na + x2);
                        if acted.is_zero() {
                            continue;
                        }
                        for t in 0..na {
                            let pa = mu_a.get(t, x * na + s);
                            for u in 0..nh {
                                let ph = mu_h.get(u, h2 * nh + hy);
                                let term = c.mul(acted).mul(pa).mul(ph);
                                if !term.is_zero() {
                                    let row = t * nh + u;
                                    let v = out.get(row, col).add(&term);
                                    out.set(row, col, v);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// Compares the smash product's composition with the classical oracle, one
/// diagram per composable pair of basis morphisms, inside `A ⊗ H`.
pub fn compare_with_classical(h: &Bimonoid, a: &Monoid, action: &Mor, sm: &Smash) -> Result<Report> {
    let emb = &sm.embedding;
    let amb = emb.cod().clone();
    let oracle = Mor::linear(&amb.tensor(&amb)?, &amb, classical_smash_oracle(h, a, action))?;
    let lhs = emb.after(&sm.comodcat.cat.m)?;
    let rhs = oracle.after(&emb.tensor(emb)?.after(&sm.comodcat.cat.aa.mono)?)?;
    let linear = |m: &Mor| m.matrix().cloned().ok_or_else(|| Error::BackendMismatch("the classical oracle is linear".into()));
    let (lhs, rhs) = (linear(&lhs)?, linear(&rhs)?);
    let pairs = sm.comodcat.cat.aa.mono.dom();
    let mut r = Report::new();
    for k in 0..pairs.dim() {
        let (l, o) = (lhs.column(k), rhs.column(k));
        r.check(&format!("classical-oracle.{}", pairs.label(k)), l == o, || {
            let show = |v: &[Scalar]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
            format!("smash [{}] vs oracle [{}]", show(&l), show(&o))
        });
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prestack::{check_prestack, coinvariants, lemma_bd_comod_suite, lemma_maps_over_p_suite, recovery_iso, smash};

    const Q: Field = Field::Rational;

    #[test]
    fn group_algebras_are_bimonoids() {
        for h in [cyclic_group_algebra(1, Q).unwrap(), cyclic_group_algebra(2, Q).unwrap()] {
            assert!(check_bimonoid(&h).pass());
        }
        let f5 = Field::prime(5).unwrap();
        let z3 = cyclic_group_algebra(3, f5).unwrap();
        assert_eq!(z3.carrier().dim(), 3);
        assert!(check_bimonoid(&z3).pass());
        let bad = vec![vec![0, 1], vec![1, 1]];
        let err = group_algebra(&["1", "g"], &bad, Q).unwrap_err();
        assert!(matches!(err, Error::Check(r) if r.failure_names() == ["group.inverses"]));
    }

    #[test]
    fn sweedler_is_a_bimonoid() {
        let r = check_bimonoid(&sweedler(Q));
        assert!(r.pass(), "{r}");
    }

    #[test]
    fn actions_are_module_algebras() {
        let z2 = cyclic_group_algebra(2, Q).unwrap();
        let a = dual_numbers(Q);
        assert!(check_module_algebra(&z2, &a, &sign_action(&z2, &a)).pass());
        assert!(check_module_algebra(&z2, &a, &trivial_action(&z2, &a).unwrap()).pass());
        let h4 = sweedler(Q);
        let r = check_module_algebra(&h4, &a, &sweedler_action(&h4, &a));
        assert!(r.pass(), "{r}");
        // g · x = x + 1 breaks the unit-preserving measuring law.
        let bad = action_from_rows(&z2, &a, &[&[1, 0, 1, 1], &[0, 1, 0, 1]]);
        let names = check_module_algebra(&z2, &a, &bad).failure_names();
        assert!(names.contains(&"module-algebra.measuring".to_string()), "{names:?}");
    }

    #[test]
    fn oracle_values() {
        let z2 = cyclic_group_algebra(2, Q).unwrap();
        let a = dual_numbers(Q);
        let t = classical_smash_oracle(&z2, &a, &sign_action(&z2, &a));
        // index of a ⊗ h is 2a + h; (x⊗g)(x⊗1) and (1⊗g)(x⊗1).
        let col = |l: usize, r: usize| l * 4 + r;
        assert!((0..4).all(|row| t.get(row, col(3, 2)).is_zero()));
        assert_eq!(t.get(3, col(1, 2)), &Q.from_i64(-1));
        assert!((0..3).all(|row| t.get(row, col(1, 2)).is_zero()));
    }

    fn full_run(ps: &Prestack) {
        let r = check_prestack(ps);
        assert!(r.pass(), "{r}");
        let r = lemma_bd_comod_suite(ps);
        assert!(r.pass(), "{r}");
        let r = lemma_maps_over_p_suite(ps);
        assert!(r.pass(), "{r}");
        let sm = smash(ps).unwrap();
        let coinv = coinvariants(&sm.comodcat).unwrap();
        assert_eq!(coinv.comodcat.cat.a.dim(), ps.cat.a.dim());
        recovery_iso(ps, &sm, &coinv).unwrap();
    }

    #[test]
    fn sign_action_prestack() {
        let z2 = cyclic_group_algebra(2, Q).unwrap();
        let a = dual_numbers(Q);
        let act = sign_action(&z2, &a);
        let ps = module_algebra_prestack(&z2, &a, &act).unwrap();
        full_run(&ps);
        let sm = smash(&ps).unwrap();
        assert_eq!(sm.comodcat.cat.a.dim(), 4);
        let r = compare_with_classical(&z2, &a, &act, &sm).unwrap();
        assert!(r.pass(), "{:?}", r.failure_names());
        assert_eq!(r.checked.len(), 16);
    }

    #[test]
    fn sweedler_prestack() {
        let h4 = sweedler(Q);
        let a = dual_numbers(Q);
        let ps = module_algebra_prestack(&h4, &a, &sweedler_action(&h4, &a)).unwrap();
        full_run(&ps);
    }
}
