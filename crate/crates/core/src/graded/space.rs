use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Shared handle to a graded space. Maps and tensors refer to their factor
/// spaces through this handle, so cloning a map never copies a basis.
pub type Space = Arc<GradedSpace>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasisElement {
    pub symbol: String,
    pub degree: i64,
}

impl BasisElement {
    pub fn new(symbol: impl Into<String>, degree: i64) -> Self {
        Self {
            symbol: symbol.into(),
            degree,
        }
    }
}

/// A finite-dimensional graded vector space with an ordered, named basis.
///
/// The basis order is authoritative: every map and tensor addresses basis
/// vectors by their position.
#[derive(Clone, Debug)]
pub struct GradedSpace {
    basis: Vec<BasisElement>,
    lookup: HashMap<String, usize>,
}

impl PartialEq for GradedSpace {
    fn eq(&self, other: &Self) -> bool {
        self.basis == other.basis
    }
}

impl Eq for GradedSpace {}

impl GradedSpace {
    pub fn new(basis: Vec<BasisElement>) -> Result<Self> {
        let mut lookup = HashMap::with_capacity(basis.len());
        for (i, b) in basis.iter().enumerate() {
            if lookup.insert(b.symbol.clone(), i).is_some() {
                return Err(Error::DuplicateSymbol(b.symbol.clone()));
            }
        }
        Ok(Self { basis, lookup })
    }

    /// Convenience constructor from `(symbol, degree)` pairs.
    pub fn from_pairs<S: AsRef<str>>(pairs: &[(S, i64)]) -> Result<Self> {
        Self::new(
            pairs
                .iter()
                .map(|(s, d)| BasisElement::new(s.as_ref(), *d))
                .collect(),
        )
    }

    pub fn zero() -> Self {
        Self {
            basis: Vec::new(),
            lookup: HashMap::new(),
        }
    }

    pub fn into_shared(self) -> Space {
        Arc::new(self)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    #[inline]
    pub fn degree(&self, i: usize) -> i64 {
        self.basis[i].degree
    }

    pub fn symbol(&self, i: usize) -> &str {
        &self.basis[i].symbol
    }

    pub fn index_of(&self, symbol: &str) -> Option<usize> {
        self.lookup.get(symbol).copied()
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.basis.iter().map(|b| b.degree).collect()
    }

    /// Indices of basis vectors of the given degree, in basis order.
    pub fn indices_of_degree(&self, degree: i64) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| self.basis[i].degree == degree)
            .collect()
    }

    /// Distinct degrees present, ascending.
    pub fn degree_set(&self) -> Vec<i64> {
        let mut ds = self.degrees();
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    /// The shift `V[m]`: an element of degree `n` in `V` has degree `n - m`.
    pub fn shift(&self, m: i64) -> GradedSpace {
        let basis = self
            .basis
            .iter()
            .map(|b| BasisElement::new(format!("{}[{}]", b.symbol, m), b.degree - m))
            .collect();
        GradedSpace::new(basis).expect("shifted symbols stay distinct")
    }

    /// The graded dual `V#` with the dual basis `e_i*` of degree `-|e_i|`.
    pub fn dual(&self) -> GradedSpace {
        let basis = self
            .basis
            .iter()
            .map(|b| BasisElement::new(format!("{}*", b.symbol), -b.degree))
            .collect();
        GradedSpace::new(basis).expect("dual symbols stay distinct")
    }

    /// Direct sum: `self` basis first, then `other`.
    pub fn direct_sum(&self, other: &GradedSpace) -> Result<GradedSpace> {
        let mut basis = self.basis.clone();
        basis.extend(other.basis.iter().cloned());
        GradedSpace::new(basis)
    }

    /// `V ⊗ W` with basis `e_i ⊗ f_j` in lexicographic order (index
    /// `i * dim W + j`).
    pub fn tensor(&self, other: &GradedSpace) -> GradedSpace {
        let mut basis = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.basis {
            for b in &other.basis {
                basis.push(BasisElement::new(
                    format!("{}⊗{}", a.symbol, b.symbol),
                    a.degree + b.degree,
                ));
            }
        }
        GradedSpace::new(basis).expect("tensor symbols stay distinct")
    }
}

/// `V#[m]`, the space whose basis is `t e_i*` with `|t e_i*| = -|e_i| - m`,
/// listed in the same order as the basis of `V`.
pub fn dual_shift_space(space: &GradedSpace, m: i64) -> GradedSpace {
    let basis = space
        .basis
        .iter()
        .map(|b| BasisElement::new(format!("t{}*", b.symbol), -b.degree - m))
        .collect();
    GradedSpace::new(basis).expect("dual symbols stay distinct")
}

impl fmt::Display for GradedSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, b) in self.basis.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}:{}", b.symbol, b.degree)?;
        }
        write!(f, ">")
    }
}
