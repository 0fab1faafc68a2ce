use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::Matrix;
use crate::monoidal::obj::{tensor_obj, Backend, Obj};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Payload {
    Linear(Matrix),
    /// `table[i]` is the image of the i-th domain element.
    Function(Vec<usize>),
}

/// A morphism of FinVect or FinSet.
#[derive(Clone, Debug)]
pub struct Mor {
    dom: Obj,
    cod: Obj,
    payload: Payload,
}

impl PartialEq for Mor {
    /// Morphisms compare by shape and payload; labels are descriptive only.
    fn eq(&self, other: &Mor) -> bool {
        self.dom.backend() == other.dom.backend()
            && self.dom.dim() == other.dom.dim()
            && self.cod.dim() == other.cod.dim()
            && self.payload == other.payload
    }
}

impl Eq for Mor {}

impl Mor {
    pub fn linear(dom: &Obj, cod: &Obj, map: Matrix) -> Result<Mor> {
        let Backend::Vect(field) = dom.backend() else {
            return Err(Error::BackendMismatch("linear payload on a FinSet object".into()));
        };
        if cod.backend() != dom.backend() {
            return Err(Error::BackendMismatch(format!("{} -> {}", dom.backend(), cod.backend())));
        }
        if map.field() != field {
            return Err(Error::FieldMismatch(field.to_string(), map.field().to_string()));
        }
        if map.rows() != cod.dim() || map.cols() != dom.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for a map {} -> {}",
                map.rows(),
                map.cols(),
                dom.dim(),
                cod.dim()
            )));
        }
        Ok(Mor { dom: dom.clone(), cod: cod.clone(), payload: Payload::Linear(map) })
    }

    pub fn function(dom: &Obj, cod: &Obj, table: Vec<usize>) -> Result<Mor> {
        if dom.backend() != Backend::Set || cod.backend() != Backend::Set {
            return Err(Error::BackendMismatch("function table outside FinSet".into()));
        }
        if table.len() != dom.dim() {
            return Err(Error::Input(format!(
                "function table has {} entries for a domain of {} elements",
                table.len(),
                dom.dim()
            )));
        }
        if let Some(&bad) = table.iter().find(|&&v| v >= cod.dim()) {
            return Err(Error::Input(format!("function value {bad} outside codomain of {}", cod.dim())));
        }
        Ok(Mor { dom: dom.clone(), cod: cod.clone(), payload: Payload::Function(table) })
    }

    /// The morphism sending basis element / element `i` to `index(i)`:
    /// a function in FinSet, a 0/1 matrix in FinVect.
    pub fn from_index_map(dom: &Obj, cod: &Obj, index: impl Fn(usize) -> usize) -> Result<Mor> {
        let table: Vec<usize> = (0..dom.dim()).map(index).collect();
        match dom.backend() {
            Backend::Set => Mor::function(dom, cod, table),
            Backend::Vect(field) => {
                if let Some(&bad) = table.iter().find(|&&v| v >= cod.dim()) {
                    return Err(Error::DimensionMismatch(format!("index {bad} out of range")));
                }
                Mor::linear(dom, cod, Matrix::from_function(cod.dim(), &table, field))
            }
        }
    }

    pub fn identity(obj: &Obj) -> Mor {
        Mor::from_index_map(obj, obj, |i| i).expect("identity is well formed")
    }

    /// The zero map (FinVect only).
    pub fn zero(dom: &Obj, cod: &Obj) -> Result<Mor> {
        let field = dom
            .backend()
            .field()
            .ok_or_else(|| Error::BackendMismatch("zero map in FinSet".into()))?;
        Mor::linear(dom, cod, Matrix::zeros(cod.dim(), dom.dim(), field))
    }

    pub fn dom(&self) -> &Obj {
        &self.dom
    }

    pub fn cod(&self) -> &Obj {
        &self.cod
    }

    pub fn backend(&self) -> Backend {
        self.dom.backend()
    }

    pub fn payload(&self) -> &Payload {
        &self.payload
    }

    pub fn matrix(&self) -> Option<&Matrix> {
        match &self.payload {
            Payload::Linear(m) => Some(m),
            Payload::Function(_) => None,
        }
    }

    pub fn table(&self) -> Option<&[usize]> {
        match &self.payload {
            Payload::Function(t) => Some(t),
            Payload::Linear(_) => None,
        }
    }

    /// Same payload, relabelled domain and codomain of equal dimensions.
    pub fn retyped(&self, dom: &Obj, cod: &Obj) -> Result<Mor> {
        if dom.dim() != self.dom.dim() || cod.dim() != self.cod.dim() {
            return Err(Error::DimensionMismatch("retyping to different dimensions".into()));
        }
        Ok(Mor { dom: dom.clone(), cod: cod.clone(), payload: self.payload.clone() })
    }

    /// `self ∘ f`: apply `f`, then `self`.
    pub fn after(&self, f: &Mor) -> Result<Mor> {
        if self.backend() != f.backend() {
            return Err(Error::BackendMismatch(format!("{} after {}", self.backend(), f.backend())));
        }
        if f.cod.dim() != self.dom.dim() {
            return Err(Error::DimensionMismatch(format!(
                "composing ({} -> {}) after ({} -> {})",
                self.dom, self.cod, f.dom, f.cod
            )));
        }
        let payload = match (&self.payload, &f.payload) {
            (Payload::Linear(g), Payload::Linear(h)) => Payload::Linear(g.compose(h)?),
            (Payload::Function(g), Payload::Function(h)) => {
                Payload::Function(h.iter().map(|&x| g[x]).collect())
            }
            _ => unreachable!("payload follows backend"),
        };
        Ok(Mor { dom: f.dom.clone(), cod: self.cod.clone(), payload })
    }

    /// Composes a chain listed in application order: `chain[0]` first.
    pub fn chain(maps: &[&Mor]) -> Result<Mor> {
        let (first, rest) = maps.split_first().ok_or_else(|| Error::Input("empty chain".into()))?;
        rest.iter().try_fold((*first).clone(), |acc, g| g.after(&acc))
    }

    pub fn tensor(&self, g: &Mor) -> Result<Mor> {
        tensor_mor(self, g)
    }

    pub fn tensor_all(maps: &[&Mor]) -> Result<Mor> {
        let (first, rest) = maps.split_first().ok_or_else(|| Error::Input("empty tensor".into()))?;
        rest.iter().try_fold((*first).clone(), |acc, g| tensor_mor(&acc, g))
    }

    /// `(f_1 ⊗ … ⊗ f_n) ∘ h` without materialising the tensor when the
    /// backend allows it.
    pub fn tensor_after(factors: &[&Mor], h: &Mor) -> Result<Mor> {
        let dom_dims: Vec<usize> = factors.iter().map(|f| f.dom.dim()).collect();
        let total: usize = dom_dims.iter().product();
        if total != h.cod.dim() {
            return Err(Error::DimensionMismatch(format!(
                "tensor of maps on {total} after map into {}",
                h.cod.dim()
            )));
        }
        match (&h.payload, factors.iter().all(|f| f.table().is_some())) {
            (Payload::Function(ht), true) => {
                let cod = Obj::tensor_all(&factors.iter().map(|f| &f.cod).collect::<Vec<_>>(), h.backend())?;
                let cod_dims: Vec<usize> = factors.iter().map(|f| f.cod.dim()).collect();
                let tables: Vec<&[usize]> = factors.iter().map(|f| f.table().unwrap()).collect();
                let mut out = Vec::with_capacity(ht.len());
                let mut digits = vec![0usize; factors.len()];
                for &y in ht {
                    let mut rest = y;
                    for k in (0..factors.len()).rev() {
                        digits[k] = rest % dom_dims[k];
                        rest /= dom_dims[k];
                    }
                    let mut idx = 0;
                    for k in 0..factors.len() {
                        idx = idx * cod_dims[k] + tables[k][digits[k]];
                    }
                    out.push(idx);
                }
                Mor::function(&h.dom, &cod, out)
            }
            _ => Mor::tensor_all(factors)?.after(h),
        }
    }

    pub fn is_monic(&self) -> bool {
        match &self.payload {
            Payload::Linear(m) => m.rank() == m.cols(),
            Payload::Function(t) => {
                let mut seen = vec![false; self.cod.dim()];
                t.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
            }
        }
    }

    pub fn inverse(&self) -> Result<Mor> {
        let payload = match &self.payload {
            Payload::Linear(m) => Payload::Linear(m.two_sided_inverse()?),
            Payload::Function(t) => {
                if t.len() != self.cod.dim() {
                    return Err(Error::NotInvertible("sets of different size".into()));
                }
                let mut inv = vec![usize::MAX; t.len()];
                for (i, &v) in t.iter().enumerate() {
                    if inv[v] != usize::MAX {
                        return Err(Error::NotInvertible("function is not injective".into()));
                    }
                    inv[v] = i;
                }
                Payload::Function(inv)
            }
        };
        Ok(Mor { dom: self.cod.clone(), cod: self.dom.clone(), payload })
    }

    /// Some `r` with `r ∘ self = id`; used to extend maps off a subobject.
    pub fn left_inverse(&self) -> Result<Mor> {
        let payload = match &self.payload {
            Payload::Linear(m) => Payload::Linear(m.left_inverse()?),
            Payload::Function(t) => {
                if t.is_empty() && self.cod.dim() > 0 {
                    return Err(Error::NotInvertible("no map out of a nonempty set into the empty set".into()));
                }
                let mut back = vec![0; self.cod.dim()];
                let mut seen = vec![false; self.cod.dim()];
                for (i, &v) in t.iter().enumerate() {
                    if std::mem::replace(&mut seen[v], true) {
                        return Err(Error::NotMonic("function is not injective".into()));
                    }
                    back[v] = i;
                }
                Payload::Function(back)
            }
        };
        Ok(Mor { dom: self.cod.clone(), cod: self.dom.clone(), payload })
    }

    /// The unique `k` with `mono ∘ k = h`.
    pub fn factor_mono(mono: &Mor, h: &Mor) -> Result<Mor> {
        if mono.cod.dim() != h.cod.dim() {
            return Err(Error::DimensionMismatch(format!(
                "factoring a map into {} through a mono into {}",
                h.cod.dim(),
                mono.cod.dim()
            )));
        }
        let payload = match (&mono.payload, &h.payload) {
            (Payload::Linear(m), Payload::Linear(g)) => Payload::Linear(Matrix::solve_factor(m, g)?),
            (Payload::Function(m), Payload::Function(g)) => {
                let mut pre = vec![usize::MAX; mono.cod.dim()];
                for (i, &v) in m.iter().enumerate() {
                    if pre[v] != usize::MAX {
                        return Err(Error::NotMonic("function is not injective".into()));
                    }
                    pre[v] = i;
                }
                let mut out = Vec::with_capacity(g.len());
                for (i, &v) in g.iter().enumerate() {
                    if pre[v] == usize::MAX {
                        return Err(Error::NoFactorization(format!(
                            "element '{}' maps to '{}' outside the image",
                            h.dom.label(i),
                            h.cod.label(v)
                        )));
                    }
                    out.push(pre[v]);
                }
                Payload::Function(out)
            }
            _ => return Err(Error::BackendMismatch("factoring across backends".into())),
        };
        Ok(Mor { dom: h.dom.clone(), cod: mono.dom.clone(), payload })
    }

    /// `self - other` (FinVect only).
    pub fn minus(&self, other: &Mor) -> Result<Mor> {
        match (&self.payload, &other.payload) {
            (Payload::Linear(a), Payload::Linear(b)) => Mor::linear(&self.dom, &self.cod, a.sub(b)?),
            _ => Err(Error::BackendMismatch("subtraction needs FinVect".into())),
        }
    }

    pub fn to_json(&self) -> Value {
        match &self.payload {
            Payload::Linear(m) => {
                let rows: Vec<Vec<String>> = (0..m.rows())
                    .map(|r| (0..m.cols()).map(|c| m.get(r, c).to_string()).collect())
                    .collect();
                json!({ "dom": self.dom.dim(), "cod": self.cod.dim(), "matrix": rows })
            }
            Payload::Function(t) => json!({ "dom": self.dom.dim(), "cod": self.cod.dim(), "table": t }),
        }
    }
}

impl fmt::Display for Mor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.payload {
            Payload::Linear(m) => write!(f, "{m}"),
            Payload::Function(t) => write!(f, "{t:?}"),
        }
    }
}

pub fn tensor_mor(f: &Mor, g: &Mor) -> Result<Mor> {
    let dom = tensor_obj(&f.dom, &g.dom)?;
    let cod = tensor_obj(&f.cod, &g.cod)?;
    let payload = match (&f.payload, &g.payload) {
        (Payload::Linear(a), Payload::Linear(b)) => Payload::Linear(a.kronecker(b)?),
        (Payload::Function(a), Payload::Function(b)) => {
            let n = g.cod.dim();
            Payload::Function(a.iter().flat_map(|&x| b.iter().map(move |&y| x * n + y)).collect())
        }
        _ => return Err(Error::BackendMismatch("tensoring across backends".into())),
    };
    Ok(Mor { dom, cod, payload })
}

/// The symmetry `x ⊗ y → y ⊗ x`.
pub fn braiding(x: &Obj, y: &Obj) -> Result<Mor> {
    let dom = tensor_obj(x, y)?;
    let cod = tensor_obj(y, x)?;
    let (n, m) = (x.dim(), y.dim());
    Mor::from_index_map(&dom, &cod, |k| (k % m) * n + k / m)
}

/// Reorders tensor factors: the result maps `f_0 ⊗ … ⊗ f_{n-1}` to
/// `f_{order[0]} ⊗ … ⊗ f_{order[n-1]}`.
pub fn permute(factors: &[&Obj], order: &[usize]) -> Result<Mor> {
    let n = factors.len();
    let mut check = order.to_vec();
    check.sort_unstable();
    if check != (0..n).collect::<Vec<_>>() {
        return Err(Error::Input(format!("{order:?} is not a permutation of {n} factors")));
    }
    let backend = factors.first().map_or(Backend::Set, |o| o.backend());
    let dom = Obj::tensor_all(factors, backend)?;
    let cod = Obj::tensor_all(&order.iter().map(|&k| factors[k]).collect::<Vec<_>>(), backend)?;
    let dims: Vec<usize> = factors.iter().map(|o| o.dim()).collect();
    Mor::from_index_map(&dom, &cod, |mut idx| {
        let mut digits = vec![0; n];
        for k in (0..n).rev() {
            digits[k] = idx % dims[k];
            idx /= dims[k];
        }
        order.iter().fold(0, |acc, &k| acc * dims[k] + digits[k])
    })
}
