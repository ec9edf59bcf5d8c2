use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graded::perm::{koszul_exponent_unchecked, sign_of, Permutation};
use crate::graded::{Space, Word, Q};

/// A sparse element of `V_1 ⊗ … ⊗ V_k` written in the product basis.
///
/// With a single factor this is an ordinary vector; with no factors it is a
/// scalar stored under the empty word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor {
    factors: Vec<Space>,
    terms: BTreeMap<Word, Q>,
}

/// A vector of a single space.
pub type Vector = Tensor;

impl Tensor {
    pub fn zero(factors: Vec<Space>) -> Self {
        Self {
            factors,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(factors: Vec<Space>, word: &[usize]) -> Self {
        let mut t = Self::zero(factors);
        t.add_term(word.into(), Q::one());
        t
    }

    pub fn scalar(value: Q) -> Self {
        let mut t = Self::zero(Vec::new());
        t.add_term(Word::new(), value);
        t
    }

    /// Single-space vector from `(index, coefficient)` pairs.
    pub fn from_coords(space: Space, coords: impl IntoIterator<Item = (usize, Q)>) -> Self {
        let mut t = Self::zero(vec![space]);
        for (i, c) in coords {
            t.add_term(Word::from_slice(&[i]), c);
        }
        t
    }

    pub fn from_terms(factors: Vec<Space>, terms: impl IntoIterator<Item = (Word, Q)>) -> Self {
        let mut t = Self::zero(factors);
        for (w, c) in terms {
            t.add_term(w, c);
        }
        t
    }

    pub fn factors(&self) -> &[Space] {
        &self.factors
    }

    pub fn arity(&self) -> usize {
        self.factors.len()
    }

    pub fn terms(&self) -> &BTreeMap<Word, Q> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Word, Q> {
        self.terms
    }

    pub fn coeff(&self, word: &[usize]) -> Q {
        self.terms.get(word).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.terms.len()
    }

    /// Adds `c · word`, dropping the term if it cancels.
    pub fn add_term(&mut self, word: Word, c: Q) {
        debug_assert_eq!(word.len(), self.factors.len());
        add_into(&mut self.terms, word, c);
    }

    pub fn add_assign(&mut self, other: &Tensor) {
        for (w, c) in &other.terms {
            add_into(&mut self.terms, w.clone(), c.clone());
        }
    }

    pub fn add(&self, other: &Tensor) -> Result<Tensor> {
        if self.factors != other.factors {
            return Err(Error::SpaceMismatch("adding tensors over different spaces".into()));
        }
        let mut out = self.clone();
        out.add_assign(other);
        Ok(out)
    }

    pub fn sub(&self, other: &Tensor) -> Result<Tensor> {
        self.add(&other.scaled(&-Q::one()))
    }

    pub fn scaled(&self, c: &Q) -> Tensor {
        if c.is_zero() {
            return Tensor::zero(self.factors.clone());
        }
        Tensor {
            factors: self.factors.clone(),
            terms: self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect(),
        }
    }

    pub fn negated(&self) -> Tensor {
        self.scaled(&-Q::one())
    }

    pub fn word_degree(&self, word: &[usize]) -> i64 {
        word_degree(&self.factors, word)
    }

    /// The common degree of all terms; `None` for the zero tensor.
    pub fn homogeneous_degree(&self) -> Result<Option<i64>> {
        let mut deg = None;
        for w in self.terms.keys() {
            let d = self.word_degree(w);
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => {
                    return Err(Error::Homogeneity(format!(
                        "terms of degrees {e} and {d} in one tensor"
                    )))
                }
                _ => {}
            }
        }
        Ok(deg)
    }

    /// Concatenation `self ⊗ other` in the product basis, with no sign.
    pub fn tensor(&self, other: &Tensor) -> Tensor {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        let mut out = Tensor::zero(factors);
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                let mut w = u.clone();
                w.extend_from_slice(v);
                out.add_term(w, a * b);
            }
        }
        out
    }

    /// `τ(σ)` applied to this tensor, with the Koszul sign on each term.
    pub fn permuted(&self, perm: &Permutation) -> Result<Tensor> {
        if perm.len() != self.arity() {
            return Err(Error::Dimension(format!(
                "permutation of {} elements on a tensor of {} factors",
                perm.len(),
                self.arity()
            )));
        }
        let factors = perm.permute_slice(&self.factors);
        let mut out = Tensor::zero(factors);
        for (w, c) in &self.terms {
            let (v, s) = permute_basis_word(perm, &self.factors, w);
            out.add_term(v, if s < 0 { -c } else { c.clone() });
        }
        Ok(out)
    }

    /// Human-readable rendering such as `2 x⊗y - 1/2 y⊗x`.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (w, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                s.push_str(" + ");
            }
            s.push_str(&c.to_string());
            if !w.is_empty() {
                s.push(' ');
                s.push_str(&render_word(&self.factors, w));
            }
        }
        s
    }
}

impl fmt::Display for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

pub(crate) fn add_into(map: &mut BTreeMap<Word, Q>, word: Word, c: Q) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match map.entry(word) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

pub fn word_degree(factors: &[Space], word: &[usize]) -> i64 {
    factors
        .iter()
        .zip(word)
        .map(|(f, &i)| f.degree(i))
        .sum()
}

pub fn word_degrees(factors: &[Space], word: &[usize]) -> Vec<i64> {
    factors.iter().zip(word).map(|(f, &i)| f.degree(i)).collect()
}

pub fn render_word(factors: &[Space], word: &[usize]) -> String {
    factors
        .iter()
        .zip(word)
        .map(|(f, &i)| f.symbol(i))
        .collect::<Vec<_>>()
        .join("⊗")
}

/// Image of a basis word under `τ(σ)`: the reordered word and its sign.
pub fn permute_basis_word(perm: &Permutation, factors: &[Space], word: &[usize]) -> (Word, i32) {
    let degrees = word_degrees(factors, word);
    let e = koszul_exponent_unchecked(perm, &degrees);
    (perm.permute_word(word), sign_of(e))
}

/// `τ(σ)(v_1 ⊗ … ⊗ v_n)` for homogeneous vectors `v_i`, expanded in the
/// product basis.
pub fn permute_tensor(perm: &Permutation, factors: &[Vector]) -> Result<Tensor> {
    if perm.len() != factors.len() {
        return Err(Error::Dimension(format!(
            "permutation of {} elements on {} factors",
            perm.len(),
            factors.len()
        )));
    }
    for (i, v) in factors.iter().enumerate() {
        if v.arity() != 1 {
            return Err(Error::Dimension(format!("factor {i} is not a vector")));
        }
        v.homogeneous_degree()
            .map_err(|e| Error::Homogeneity(format!("factor {i}: {e}")))?;
    }
    let mut t = Tensor::scalar(Q::one());
    for v in factors {
        t = t.tensor(v);
    }
    t.permuted(perm)
}

impl Permutation {
    /// Moves the items of a slice the same way [`Permutation::permute_word`]
    /// moves letters.
    pub fn permute_slice<T: Clone>(&self, items: &[T]) -> Vec<T> {
        let mut out: Vec<T> = items.to_vec();
        for (i, x) in items.iter().enumerate() {
            out[self.apply(i)] = x.clone();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::{q, GradedSpace};

    fn space() -> Space {
        GradedSpace::from_pairs(&[("x", 0), ("y", 1)]).unwrap().into_shared()
    }

    #[test]
    fn even_swap_has_no_sign() {
        let v = space();
        let a = Tensor::basis(vec![v.clone()], &[0]);
        let b = Tensor::basis(vec![v.clone()], &[0]);
        let t = permute_tensor(&Permutation::transposition(2, 0, 1), &[a, b]).unwrap();
        assert_eq!(t.coeff(&[0, 0]), q(1));
    }

    #[test]
    fn odd_swap_negates() {
        let v = space();
        let a = Tensor::basis(vec![v.clone()], &[1]);
        let t = permute_tensor(&Permutation::transposition(2, 0, 1), &[a.clone(), a]).unwrap();
        assert_eq!(t.coeff(&[1, 1]), q(-1));
    }

    #[test]
    fn mixed_degree_factor_is_rejected() {
        let v = space();
        let mixed = Tensor::from_coords(v.clone(), [(0, q(1)), (1, q(1))]);
        let a = Tensor::basis(vec![v], &[0]);
        let err = permute_tensor(&Permutation::identity(2), &[mixed, a]).unwrap_err();
        assert!(matches!(err, Error::Homogeneity(_)));
    }

    #[test]
    fn identity_leaves_tensor_unchanged() {
        let v = space();
        let a = Tensor::from_coords(v.clone(), [(0, q(2))]);
        let b = Tensor::from_coords(v.clone(), [(1, q(3))]);
        let t = permute_tensor(&Permutation::identity(2), &[a.clone(), b.clone()]).unwrap();
        assert_eq!(t, a.tensor(&b));
    }

    #[test]
    fn cancellation_drops_terms() {
        let v = space();
        let mut a = Tensor::basis(vec![v], &[0]);
        a.add_term(Word::from_slice(&[0]), q(-1));
        assert!(a.is_zero());
    }
}
