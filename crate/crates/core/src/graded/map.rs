use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graded::perm::{koszul_exponent_unchecked, sign_of, Permutation};
use crate::graded::tensor::{add_into, permute_basis_word, render_word, word_degree, word_degrees};
use crate::graded::{Space, Tensor, Word, Q};

/// A sparse homogeneous multilinear map `V_1 ⊗ … ⊗ V_k → W_1 ⊗ … ⊗ W_l`.
///
/// Each stored entry sends a basis word of the domain to a nonzero tensor of
/// the codomain. An empty codomain means the map is scalar valued.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiMap {
    domain: Vec<Space>,
    codomain: Vec<Space>,
    degree: i64,
    entries: BTreeMap<Word, BTreeMap<Word, Q>>,
}

impl MultiMap {
    pub fn zero(domain: Vec<Space>, codomain: Vec<Space>, degree: i64) -> Self {
        Self {
            domain,
            codomain,
            degree,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(space: Space) -> Self {
        let mut m = Self::zero(vec![space.clone()], vec![space.clone()], 0);
        for i in 0..space.dim() {
            m.push(Word::from_slice(&[i]), Word::from_slice(&[i]), Q::one());
        }
        m
    }

    /// Identity on `V_1 ⊗ … ⊗ V_k`.
    pub fn identity_on(spaces: Vec<Space>) -> Self {
        let mut m = Self::zero(spaces.clone(), spaces.clone(), 0);
        for w in all_words(&spaces) {
            m.push(w.clone(), w, Q::one());
        }
        m
    }

    pub fn domain(&self) -> &[Space] {
        &self.domain
    }

    pub fn codomain(&self) -> &[Space] {
        &self.codomain
    }

    pub fn arity(&self) -> usize {
        self.domain.len()
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn entries(&self) -> &BTreeMap<Word, BTreeMap<Word, Q>> {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of nonzero coefficients stored.
    pub fn nnz(&self) -> usize {
        self.entries.values().map(|o| o.len()).sum()
    }

    pub fn input_degree(&self, word: &[usize]) -> i64 {
        word_degree(&self.domain, word)
    }

    pub fn output_degree(&self, word: &[usize]) -> i64 {
        word_degree(&self.codomain, word)
    }

    /// Adds `c · output` to the image of the basis word `input`, checking
    /// indices and the degree of the term.
    pub fn add_entry(&mut self, input: &[usize], output: &[usize], c: Q) -> Result<()> {
        check_word(&self.domain, input, "input")?;
        check_word(&self.codomain, output, "output")?;
        let expected = self.input_degree(input) + self.degree;
        let got = self.output_degree(output);
        if expected != got {
            return Err(Error::Degree(format!(
                "entry {} ↦ {} has output degree {got}, expected {expected}",
                render_word(&self.domain, input),
                render_word(&self.codomain, output),
            )));
        }
        self.push(input.into(), output.into(), c);
        Ok(())
    }

    /// Unchecked accumulation used by internal constructions whose degrees
    /// are correct by design. Debug builds still assert the degree.
    pub(crate) fn push(&mut self, input: Word, output: Word, c: Q) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(
            self.input_degree(&input) + self.degree,
            self.output_degree(&output),
            "inhomogeneous entry"
        );
        let slot = self.entries.entry(input.clone()).or_default();
        add_into(slot, output, c);
        if slot.is_empty() {
            self.entries.remove(&input);
        }
    }

    /// Adds every term of `value` to the image of `input`.
    pub(crate) fn push_tensor(&mut self, input: Word, value: &BTreeMap<Word, Q>) {
        for (o, c) in value {
            self.push(input.clone(), o.clone(), c.clone());
        }
    }

    /// Image of one basis word.
    pub fn image(&self, input: &[usize]) -> Tensor {
        let terms = self.entries.get(input).cloned().unwrap_or_default();
        Tensor::from_terms(self.codomain.clone(), terms)
    }

    /// Coefficient of `output` in the image of `input`.
    pub fn coeff(&self, input: &[usize], output: &[usize]) -> Q {
        self.entries
            .get(input)
            .and_then(|o| o.get(output))
            .cloned()
            .unwrap_or_else(Q::zero)
    }

    /// Scalar value of a scalar-valued map on a basis word.
    pub fn value(&self, input: &[usize]) -> Q {
        self.coeff(input, &[])
    }

    pub fn apply(&self, t: &Tensor) -> Result<Tensor> {
        if t.factors() != self.domain.as_slice() {
            return Err(Error::SpaceMismatch("tensor does not live in the domain".into()));
        }
        let mut out = BTreeMap::new();
        for (w, c) in t.terms() {
            if let Some(o) = self.entries.get(w) {
                for (v, x) in o {
                    add_into(&mut out, v.clone(), c * x);
                }
            }
        }
        Ok(Tensor::from_terms(self.codomain.clone(), out))
    }

    fn same_shape(&self, other: &MultiMap) -> Result<()> {
        if self.domain != other.domain || self.codomain != other.codomain {
            return Err(Error::SpaceMismatch("maps between different spaces".into()));
        }
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::Degree(format!(
                "adding maps of degrees {} and {}",
                self.degree, other.degree
            )));
        }
        Ok(())
    }

    pub fn add_assign(&mut self, other: &MultiMap) -> Result<()> {
        self.same_shape(other)?;
        if self.is_zero() {
            self.degree = other.degree;
        }
        for (w, o) in &other.entries {
            self.push_tensor(w.clone(), o);
        }
        Ok(())
    }

    pub fn add_scaled(&mut self, other: &MultiMap, c: &Q) -> Result<()> {
        self.same_shape(other)?;
        if self.is_zero() {
            self.degree = other.degree;
        }
        for (w, o) in &other.entries {
            for (v, x) in o {
                self.push(w.clone(), v.clone(), x * c);
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiMap) -> Result<MultiMap> {
        let mut out = self.clone();
        out.add_assign(other)?;
        Ok(out)
    }

    pub fn sub(&self, other: &MultiMap) -> Result<MultiMap> {
        let mut out = self.clone();
        out.add_scaled(other, &-Q::one())?;
        Ok(out)
    }

    pub fn scaled(&self, c: &Q) -> MultiMap {
        let mut out = MultiMap::zero(self.domain.clone(), self.codomain.clone(), self.degree);
        if c.is_zero() {
            return out;
        }
        for (w, o) in &self.entries {
            for (v, x) in o {
                out.push(w.clone(), v.clone(), x * c);
            }
        }
        out
    }

    pub fn negated(&self) -> MultiMap {
        self.scaled(&-Q::one())
    }

    /// Keeps only the entries whose input word satisfies `keep`.
    pub fn restricted(&self, mut keep: impl FnMut(&[usize]) -> bool) -> MultiMap {
        let mut out = MultiMap::zero(self.domain.clone(), self.codomain.clone(), self.degree);
        out.entries = self
            .entries
            .iter()
            .filter(|(w, _)| keep(w))
            .map(|(w, o)| (w.clone(), o.clone()))
            .collect();
        out
    }

    /// `self ∘ inner`, where the codomain of `inner` is the domain of `self`.
    pub fn compose(&self, inner: &MultiMap) -> Result<MultiMap> {
        if inner.codomain != self.domain {
            return Err(Error::SpaceMismatch(
                "composition: inner codomain differs from outer domain".into(),
            ));
        }
        let mut out = MultiMap::zero(
            inner.domain.clone(),
            self.codomain.clone(),
            self.degree + inner.degree,
        );
        for (w, mid) in &inner.entries {
            for (v, a) in mid {
                if let Some(o) = self.entries.get(v) {
                    for (u, b) in o {
                        out.push(w.clone(), u.clone(), a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `self ∘ (id^{⊗r} ⊗ inner ⊗ id^{⊗t})`, with the Koszul sign
    /// `(-1)^{|inner|(|x_1| + … + |x_r|)}` from moving `inner` past the first
    /// `r` inputs.
    ///
    /// The slots `r..r + l` of the domain of `self` must be the codomain of
    /// `inner` (of length `l`); the result has `inner`'s domain spliced in.
    pub fn compose_at(&self, r: usize, inner: &MultiMap) -> Result<MultiMap> {
        let l = inner.codomain.len();
        if r + l > self.domain.len() || self.domain[r..r + l] != inner.codomain[..] {
            return Err(Error::SpaceMismatch(format!(
                "compose_at slot {r}: inner codomain does not match outer domain"
            )));
        }
        let mut domain: Vec<Space> = self.domain[..r].to_vec();
        domain.extend(inner.domain.iter().cloned());
        domain.extend(self.domain[r + l..].iter().cloned());
        let mut out = MultiMap::zero(domain, self.codomain.clone(), self.degree + inner.degree);
        if self.is_zero() || inner.is_zero() {
            return Ok(out);
        }
        let preimages = inner.preimage_index();
        let inner_odd = inner.degree & 1 != 0;
        for (w, o) in &self.entries {
            let Some(pre) = preimages.get(&w[r..r + l]) else {
                continue;
            };
            let prefix_deg = word_degree(&self.domain[..r], &w[..r]);
            let flip = inner_odd && prefix_deg & 1 != 0;
            for (u, a) in pre {
                let mut input: Word = Word::from_slice(&w[..r]);
                input.extend_from_slice(u);
                input.extend_from_slice(&w[r + l..]);
                for (v, b) in o {
                    let c = a * b;
                    out.push(input.clone(), v.clone(), if flip { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// Output word ↦ list of (input word, coefficient).
    fn preimage_index(&self) -> HashMap<Word, Vec<(Word, Q)>> {
        let mut idx: HashMap<Word, Vec<(Word, Q)>> = HashMap::new();
        for (w, o) in &self.entries {
            for (v, c) in o {
                idx.entry(v.clone()).or_default().push((w.clone(), c.clone()));
            }
        }
        idx
    }

    /// `id^{⊗r} ⊗ self ⊗ id^{⊗t}` as an explicit map, where `left` and
    /// `right` list the identity factors.
    pub fn extended(&self, left: &[Space], right: &[Space]) -> MultiMap {
        let mut domain = left.to_vec();
        domain.extend(self.domain.iter().cloned());
        domain.extend(right.iter().cloned());
        let mut codomain = left.to_vec();
        codomain.extend(self.codomain.iter().cloned());
        codomain.extend(right.iter().cloned());
        let mut out = MultiMap::zero(domain, codomain, self.degree);
        let lefts = all_words(left);
        let rights = all_words(right);
        let odd = self.degree & 1 != 0;
        for p in &lefts {
            let flip = odd && word_degree(left, p) & 1 != 0;
            for (w, o) in &self.entries {
                for s in &rights {
                    let mut input = p.clone();
                    input.extend_from_slice(w);
                    input.extend_from_slice(s);
                    for (v, c) in o {
                        let mut output = p.clone();
                        output.extend_from_slice(v);
                        output.extend_from_slice(s);
                        out.push(input.clone(), output, if flip { -c } else { c.clone() });
                    }
                }
            }
        }
        out
    }

    /// `τ(σ) ∘ self ∘ τ(σ)^{-1}` for a map `V^{⊗n} → V^{⊗n}`-shaped map whose
    /// domain and codomain both have `n` factors.
    pub fn conjugated(&self, perm: &Permutation) -> Result<MultiMap> {
        if perm.len() != self.domain.len() || perm.len() != self.codomain.len() {
            return Err(Error::Dimension("conjugating by a permutation of the wrong size".into()));
        }
        let domain = perm.permute_slice(&self.domain);
        let codomain = perm.permute_slice(&self.codomain);
        let mut out = MultiMap::zero(domain, codomain, self.degree);
        for (w, o) in &self.entries {
            // τ(σ) w = s · x, hence τ(σ)^{-1} x = s · w
            let (x, s) = permute_basis_word(perm, &self.domain, w);
            for (v, c) in o {
                let (y, t) = permute_basis_word(perm, &self.codomain, v);
                let c = if s * t < 0 { -c } else { c.clone() };
                out.push(x.clone(), y, c);
            }
        }
        Ok(out)
    }

    /// `τ(σ) ∘ self`, permuting the output factors.
    pub fn permute_outputs(&self, perm: &Permutation) -> Result<MultiMap> {
        if perm.len() != self.codomain.len() {
            return Err(Error::Dimension("permutation size differs from codomain arity".into()));
        }
        let codomain = perm.permute_slice(&self.codomain);
        let mut out = MultiMap::zero(self.domain.clone(), codomain, self.degree);
        for (w, o) in &self.entries {
            for (v, c) in o {
                let (y, t) = permute_basis_word(perm, &self.codomain, v);
                out.push(w.clone(), y, if t < 0 { -c } else { c.clone() });
            }
        }
        Ok(out)
    }

    /// `self ∘ τ(σ)`, precomposing with a permutation of the inputs. The new
    /// domain is the one `τ(σ)` maps onto the old domain.
    pub fn permute_inputs(&self, perm: &Permutation) -> Result<MultiMap> {
        if perm.len() != self.domain.len() {
            return Err(Error::Dimension("permutation size differs from domain arity".into()));
        }
        let inv = perm.inverse();
        let domain = inv.permute_slice(&self.domain);
        let mut out = MultiMap::zero(domain.clone(), self.codomain.clone(), self.degree);
        for (w, o) in &self.entries {
            // x with τ(σ) x = s · w, i.e. x = σ^{-1}-rearrangement of w
            let x = inv.permute_word(w);
            let e = koszul_exponent_unchecked(perm, &word_degrees(&domain, &x));
            let s = sign_of(e);
            for (v, c) in o {
                out.push(x.clone(), v.clone(), if s < 0 { -c } else { c.clone() });
            }
        }
        Ok(out)
    }

    /// Verifies that every stored entry has output degree equal to input
    /// degree plus the map degree.
    pub fn check_homogeneity(&self) -> Result<()> {
        for (w, o) in &self.entries {
            for v in o.keys() {
                if self.input_degree(w) + self.degree != self.output_degree(v) {
                    return Err(Error::Degree(format!(
                        "entry {} ↦ {} breaks homogeneity",
                        render_word(&self.domain, w),
                        render_word(&self.codomain, v)
                    )));
                }
            }
        }
        Ok(())
    }

    /// The map with the same entries viewed between other spaces of equal
    /// dimensions; only the degree bookkeeping changes.
    pub fn reinterpret(&self, domain: Vec<Space>, codomain: Vec<Space>, degree: i64) -> Result<MultiMap> {
        let dims = |v: &[Space]| v.iter().map(|s| s.dim()).collect::<Vec<_>>();
        if dims(&domain) != dims(&self.domain) || dims(&codomain) != dims(&self.codomain) {
            return Err(Error::Dimension("reinterpreting between spaces of other dimensions".into()));
        }
        let out = MultiMap {
            domain,
            codomain,
            degree,
            entries: self.entries.clone(),
        };
        out.check_homogeneity()?;
        Ok(out)
    }
}

fn check_word(spaces: &[Space], word: &[usize], what: &str) -> Result<()> {
    if spaces.len() != word.len() {
        return Err(Error::Dimension(format!(
            "{what} word of length {} for {} factors",
            word.len(),
            spaces.len()
        )));
    }
    for (s, &i) in spaces.iter().zip(word) {
        if i >= s.dim() {
            return Err(Error::Dimension(format!(
                "{what} index {i} out of range for a space of dimension {}",
                s.dim()
            )));
        }
    }
    Ok(())
}

/// Every basis word of `V_1 ⊗ … ⊗ V_k` in lexicographic order.
pub fn all_words(spaces: &[Space]) -> Vec<Word> {
    let mut out = vec![Word::new()];
    for s in spaces {
        let mut next = Vec::with_capacity(out.len() * s.dim());
        for w in &out {
            for i in 0..s.dim() {
                let mut v = w.clone();
                v.push(i);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::{q, GradedSpace};

    fn v() -> Space {
        GradedSpace::from_pairs(&[("x", 0), ("y", 1)]).unwrap().into_shared()
    }

    #[test]
    fn degree_is_enforced() {
        let v = v();
        let mut m = MultiMap::zero(vec![v.clone()], vec![v.clone()], 1);
        assert!(m.add_entry(&[0], &[1], q(1)).is_ok());
        assert!(matches!(m.add_entry(&[1], &[1], q(1)), Err(Error::Degree(_))));
        assert!(m.add_entry(&[2], &[1], q(1)).is_err());
    }

    #[test]
    fn zero_entries_are_not_stored() {
        let v = v();
        let mut m = MultiMap::zero(vec![v.clone()], vec![v.clone()], 1);
        m.add_entry(&[0], &[1], q(2)).unwrap();
        m.add_entry(&[0], &[1], q(-2)).unwrap();
        assert!(m.is_zero());
    }

    #[test]
    fn compose_at_matches_explicit_extension() {
        let v = v();
        // odd map x ↦ y
        let mut d = MultiMap::zero(vec![v.clone()], vec![v.clone()], 1);
        d.add_entry(&[0], &[1], q(1)).unwrap();
        // a bilinear map with a few entries
        let mut m = MultiMap::zero(vec![v.clone(), v.clone()], vec![v.clone()], 0);
        m.add_entry(&[0, 1], &[1], q(3)).unwrap();
        m.add_entry(&[1, 0], &[1], q(-1)).unwrap();
        m.add_entry(&[0, 0], &[0], q(5)).unwrap();
        for r in 0..2 {
            let fast = m.compose_at(r, &d).unwrap();
            let left = vec![v.clone(); r];
            let right = vec![v.clone(); 1 - r];
            let slow = m.compose(&d.extended(&left, &right)).unwrap();
            assert_eq!(fast, slow, "slot {r}");
        }
    }

    #[test]
    fn extension_sign_on_odd_prefix() {
        let v = v();
        let mut d = MultiMap::zero(vec![v.clone()], vec![v.clone()], 1);
        d.add_entry(&[0], &[1], q(1)).unwrap();
        let e = d.extended(&[v.clone()], &[]);
        assert_eq!(e.coeff(&[1, 0], &[1, 1]), q(-1));
        assert_eq!(e.coeff(&[0, 0], &[0, 1]), q(1));
    }

    #[test]
    fn permute_inputs_is_precomposition() {
        let v = v();
        let swap = Permutation::transposition(2, 0, 1);
        let mut m = MultiMap::zero(vec![v.clone(), v.clone()], vec![v.clone()], -1);
        m.add_entry(&[1, 1], &[1], q(1)).unwrap();
        m.add_entry(&[0, 1], &[0], q(2)).unwrap();
        let tau = crate::graded::tau(&swap, &[v.clone(), v.clone()]).unwrap();
        assert_eq!(m.permute_inputs(&swap).unwrap(), m.compose(&tau).unwrap());
    }
}
