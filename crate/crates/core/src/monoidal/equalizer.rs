use crate::error::{Error, Result};
use crate::exact::Matrix;
use crate::monoidal::mor::{Mor, Payload};
use crate::monoidal::obj::Obj;
use crate::report::Report;

/// An equalizer `E ↣ X` of one or more parallel pairs out of `X`.
///
/// The mono is canonical: in FinVect its columns are the reduced column
/// echelon basis of the subspace, in FinSet it is the inclusion of the
/// subset in ambient order. Equal subobjects therefore have equal monos.
#[derive(Clone, Debug)]
pub struct Equalizer {
    pub obj: Obj,
    pub mono: Mor,
    pub pairs: Vec<(Mor, Mor)>,
}

fn check_parallel(f: &Mor, g: &Mor) -> Result<()> {
    if f.backend() != g.backend() {
        return Err(Error::BackendMismatch("equalizing maps from different backends".into()));
    }
    if f.dom().dim() != g.dom().dim() || f.cod().dim() != g.cod().dim() {
        return Err(Error::DimensionMismatch(format!(
            "maps are not parallel: {} -> {} vs {} -> {}",
            f.dom().dim(),
            f.cod().dim(),
            g.dom().dim(),
            g.cod().dim()
        )));
    }
    Ok(())
}

/// Builds the canonical subobject of `ambient` whose mono has the image of `image`.
fn canonical_sub(ambient: &Obj, image: &Mor, name: &str) -> Result<(Obj, Mor)> {
    match image.payload() {
        Payload::Linear(m) => {
            let basis = if m.cols() == 0 {
                Matrix::zeros(m.rows(), 0, m.field())
            } else {
                m.column_echelon()
            };
            let obj = Obj::subspace(ambient.backend(), name, basis.cols());
            let mono = Mor::linear(&obj, ambient, basis)?;
            Ok((obj, mono))
        }
        Payload::Function(t) => {
            let mut picks = t.clone();
            picks.sort_unstable();
            picks.dedup();
            let obj = Obj::subset(ambient, picks.clone());
            let mono = Mor::function(&obj, ambient, picks)?;
            Ok((obj, mono))
        }
    }
}

fn pair_kernel(f: &Mor, g: &Mor) -> Result<Mor> {
    // The inclusion of {x : f x = g x}, uncanonicalised.
    match (f.payload(), g.payload()) {
        (Payload::Linear(_), Payload::Linear(_)) => {
            let k = f.minus(g)?.matrix().unwrap().kernel_basis();
            let obj = Obj::subspace(f.dom().backend(), "ker", k.cols());
            Mor::linear(&obj, f.dom(), k)
        }
        (Payload::Function(a), Payload::Function(b)) => {
            let picks: Vec<usize> = (0..a.len()).filter(|&i| a[i] == b[i]).collect();
            let obj = Obj::subset(f.dom(), picks.clone());
            Mor::function(&obj, f.dom(), picks)
        }
        _ => Err(Error::BackendMismatch("equalizer across backends".into())),
    }
}

/// The equalizer of a parallel pair.
pub fn equalizer(f: &Mor, g: &Mor) -> Result<Equalizer> {
    equalizer_of(&[(f.clone(), g.clone())], "E")
}

/// The joint equalizer of several pairs with a common domain, named `name`.
pub fn equalizer_of(pairs: &[(Mor, Mor)], name: &str) -> Result<Equalizer> {
    let (first, _) = pairs.first().ok_or_else(|| Error::Input("no maps to equalize".into()))?;
    let ambient = first.dom().clone();
    let mut incl = Mor::identity(&ambient);
    for (f, g) in pairs {
        check_parallel(f, g)?;
        if f.dom().dim() != ambient.dim() {
            return Err(Error::DimensionMismatch("equalized pairs have different domains".into()));
        }
        if f == g {
            continue;
        }
        let inner = pair_kernel(&f.after(&incl)?, &g.after(&incl)?)?;
        incl = incl.after(&inner)?;
    }
    let (obj, mono) = canonical_sub(&ambient, &incl, name)?;
    Ok(Equalizer { obj, mono, pairs: pairs.to_vec() })
}

impl Equalizer {
    pub fn ambient(&self) -> &Obj {
        self.mono.cod()
    }

    pub fn equalizes(&self, h: &Mor) -> Result<bool> {
        for (f, g) in &self.pairs {
            if f.after(h)? != g.after(h)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The unique `k` with `mono ∘ k = h`, given that `h` equalizes.
    pub fn factor_through(&self, h: &Mor) -> Result<Mor> {
        if !self.equalizes(h)? {
            return Err(Error::EqualizingConditionFails(format!(
                "map into {} does not equalize the pair",
                self.ambient()
            )));
        }
        Mor::factor_mono(&self.mono, h)
    }

    /// `a ⊗ E ↣ a ⊗ X ⊗ b` as the equalizer of the tensored pairs. No
    /// recomputation is needed since ⊗ preserves equalizers.
    pub fn whiskered(&self, a: &Obj, b: &Obj) -> Result<Equalizer> {
        let (ia, ib) = (Mor::identity(a), Mor::identity(b));
        let mono = Mor::tensor_all(&[&ia, &self.mono, &ib])?;
        let obj = mono.dom().clone();
        let pairs = self
            .pairs
            .iter()
            .map(|(f, g)| Ok((Mor::tensor_all(&[&ia, f, &ib])?, Mor::tensor_all(&[&ia, g, &ib])?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Equalizer { obj, mono, pairs })
    }
}

/// Recomputes the equalizer of `a ⊗ f ⊗ b` and `a ⊗ g ⊗ b` from scratch and
/// compares it, as a subobject, with `a ⊗ mono ⊗ b`.
pub fn regularity_witness(eq: &Equalizer, a: &Obj, b: &Obj) -> Report {
    let mut report = Report::new();
    let Some(whisk) = report.attempt("regularity.whisker", eq.whiskered(a, b)) else {
        return report;
    };
    let Some(fresh) = report.attempt("regularity.recompute", equalizer_of(&whisk.pairs, "E'")) else {
        return report;
    };
    let canonical = canonical_sub(whisk.ambient(), &whisk.mono, "E⊗").map(|(_, m)| m);
    report.check_eq("regularity.same-subobject", canonical, Ok(fresh.mono.clone()));
    report.check("regularity.mono-monic", whisk.mono.is_monic(), || "tensored mono is not monic".into());
    report
}
