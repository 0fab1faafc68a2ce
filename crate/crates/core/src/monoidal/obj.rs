use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exact::Field;

pub const UNIT_LABEL: &str = "•";

/// Which regular symmetric monoidal category a computation lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Backend {
    /// Finite-dimensional vector spaces over an exact field, ⊗ = Kronecker.
    Vect(Field),
    /// Finite sets, ⊗ = cartesian product.
    Set,
}

impl Backend {
    pub fn field(self) -> Option<Field> {
        match self {
            Backend::Vect(f) => Some(f),
            Backend::Set => None,
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::Vect(k) => write!(f, "FinVect({k})"),
            Backend::Set => write!(f, "FinSet"),
        }
    }
}

#[derive(Debug)]
enum Node {
    Unit,
    Atom(Vec<String>),
    /// Flattened, unit-free, at least two factors.
    Tensor(Vec<Obj>),
    /// A subset of an ambient finite set, in ambient order.
    Subset { ambient: Obj, picks: Vec<usize> },
    /// A subspace presented by a basis; labels are `name#i`.
    Subspace { name: String, dim: usize },
}

/// An object: a based space or a finite set. Tensor objects are flattened
/// and the unit is dropped, so ⊗ is strictly associative and unital.
/// Labels are produced lazily because tensor powers get large.
#[derive(Clone, Debug)]
pub struct Obj {
    backend: Backend,
    dim: usize,
    node: Arc<Node>,
}

impl Obj {
    pub fn unit(backend: Backend) -> Obj {
        Obj { backend, dim: 1, node: Arc::new(Node::Unit) }
    }

    pub fn atom<S: Into<String>>(backend: Backend, labels: impl IntoIterator<Item = S>) -> Result<Obj> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::Input(format!("duplicate label '{l}'")));
            }
        }
        if labels.len() == 1 && labels[0] == UNIT_LABEL {
            return Ok(Obj::unit(backend));
        }
        Ok(Obj { backend, dim: labels.len(), node: Arc::new(Node::Atom(labels)) })
    }

    /// An object of dimension `dim` with labels `name#0, name#1, ...`.
    pub fn subspace(backend: Backend, name: impl Into<String>, dim: usize) -> Obj {
        Obj { backend, dim, node: Arc::new(Node::Subspace { name: name.into(), dim }) }
    }

    pub fn subset(ambient: &Obj, picks: Vec<usize>) -> Obj {
        debug_assert!(picks.windows(2).all(|w| w[0] < w[1]));
        Obj {
            backend: ambient.backend,
            dim: picks.len(),
            node: Arc::new(Node::Subset { ambient: ambient.clone(), picks }),
        }
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_unit(&self) -> bool {
        matches!(*self.node, Node::Unit)
    }

    /// The tensor factors (a non-tensor object is its own single factor; the
    /// unit has none).
    pub fn factors(&self) -> Vec<Obj> {
        match &*self.node {
            Node::Unit => Vec::new(),
            Node::Tensor(fs) => fs.clone(),
            _ => vec![self.clone()],
        }
    }

    pub fn label(&self, i: usize) -> String {
        assert!(i < self.dim, "label index {i} out of range {}", self.dim);
        match &*self.node {
            Node::Unit => UNIT_LABEL.to_string(),
            Node::Atom(ls) => ls[i].clone(),
            Node::Subspace { name, .. } => format!("{name}#{i}"),
            Node::Subset { ambient, picks } => ambient.label(picks[i]),
            Node::Tensor(fs) => {
                let mut rest = i;
                let mut parts = vec![String::new(); fs.len()];
                for (k, f) in fs.iter().enumerate().rev() {
                    parts[k] = f.label(rest % f.dim);
                    rest /= f.dim;
                }
                parts.join("⊗")
            }
        }
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.dim).map(|i| self.label(i)).collect()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        (0..self.dim).find(|&i| self.label(i) == label)
    }

    /// For subsets: the ambient object and the chosen indices.
    pub fn subset_parts(&self) -> Option<(&Obj, &[usize])> {
        match &*self.node {
            Node::Subset { ambient, picks } => Some((ambient, picks)),
            _ => None,
        }
    }

    pub fn tensor(&self, other: &Obj) -> Result<Obj> {
        tensor_obj(self, other)
    }

    pub fn tensor_all(objs: &[&Obj], backend: Backend) -> Result<Obj> {
        let mut acc = Obj::unit(backend);
        for o in objs {
            acc = tensor_obj(&acc, o)?;
        }
        Ok(acc)
    }
}

impl PartialEq for Obj {
    fn eq(&self, other: &Obj) -> bool {
        if Arc::ptr_eq(&self.node, &other.node) {
            return self.backend == other.backend;
        }
        self.backend == other.backend
            && self.dim == other.dim
            && (0..self.dim).all(|i| self.label(i) == other.label(i))
    }
}

impl Eq for Obj {}

impl fmt::Display for Obj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.node {
            Node::Unit => write!(f, "1"),
            Node::Atom(ls) if ls.len() <= 6 => write!(f, "{{{}}}", ls.join(",")),
            Node::Tensor(fs) => {
                let parts: Vec<String> = fs.iter().map(|x| x.to_string()).collect();
                write!(f, "{}", parts.join("⊗"))
            }
            Node::Subspace { name, dim } => write!(f, "{name}[{dim}]"),
            _ => write!(f, "<{} elements>", self.dim),
        }
    }
}

/// `x ⊗ y`, flattened in left-factor-major order.
pub fn tensor_obj(x: &Obj, y: &Obj) -> Result<Obj> {
    if x.backend != y.backend {
        return Err(Error::BackendMismatch(format!("{} ⊗ {}", x.backend, y.backend)));
    }
    if x.is_unit() {
        return Ok(y.clone());
    }
    if y.is_unit() {
        return Ok(x.clone());
    }
    let mut factors = x.factors();
    factors.extend(y.factors());
    Ok(Obj { backend: x.backend, dim: x.dim * y.dim, node: Arc::new(Node::Tensor(factors)) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(labels: &[&str]) -> Obj {
        Obj::atom(Backend::Set, labels.iter().copied()).unwrap()
    }

    #[test]
    fn tensor_labels_follow_left_major_order() {
        let ab = set(&["a", "b"]);
        assert_eq!(tensor_obj(&ab, &set(&["c"])).unwrap().labels(), ["a⊗c", "b⊗c"]);
        assert_eq!(
            tensor_obj(&ab, &set(&["c", "d"])).unwrap().labels(),
            ["a⊗c", "a⊗d", "b⊗c", "b⊗d"]
        );
    }

    #[test]
    fn unit_is_strict() {
        let y = set(&["p", "q", "r"]);
        let u = Obj::unit(Backend::Set);
        assert_eq!(tensor_obj(&u, &y).unwrap(), y);
        assert_eq!(tensor_obj(&y, &u).unwrap(), y);
        assert_eq!(u.labels(), [UNIT_LABEL]);
    }

    #[test]
    fn tensor_is_associative_on_labels() {
        let (a, b, c) = (set(&["a", "b"]), set(&["c"]), set(&["d", "e"]));
        let left = tensor_obj(&tensor_obj(&a, &b).unwrap(), &c).unwrap();
        let right = tensor_obj(&a, &tensor_obj(&b, &c).unwrap()).unwrap();
        assert_eq!(left, right);
        assert_eq!(left.factors().len(), 3);
    }

    #[test]
    fn duplicate_labels_and_mixed_backends_rejected() {
        assert!(Obj::atom(Backend::Set, ["a", "a"]).is_err());
        let v = Obj::atom(Backend::Vect(Field::Rational), ["x"]).unwrap();
        assert!(tensor_obj(&v, &set(&["a"])).is_err());
    }
}
