use std::fmt;

use crate::error::{Error, Result};
use crate::graded::Word;

/// A permutation of `{0, …, n-1}` stored in one-line form: `images[i] = σ(i)`.
///
/// Acting on tensors, σ sends the factor in position `i` to position `σ(i)`,
/// so `τ(σ)(v_1 ⊗ … ⊗ v_n) = ± v_{σ⁻¹(1)} ⊗ … ⊗ v_{σ⁻¹(n)}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::Precondition(format!(
                    "{images:?} is not a permutation of 0..{n}"
                )));
            }
            seen[i] = true;
        }
        Ok(Self { images })
    }

    /// Builds a permutation from 1-based one-line notation.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::Precondition("1-based images must be positive".into()));
        }
        Self::new(images.iter().map(|&i| i - 1).collect())
    }

    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n).collect(),
        }
    }

    /// The transposition exchanging positions `i` and `j` (0-based).
    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(i, j);
        Self { images }
    }

    /// The cyclic shift `i ↦ i + k mod n`.
    pub fn rotation(n: usize, k: usize) -> Self {
        Self {
            images: (0..n).map(|i| (i + k) % n.max(1)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self ∘ other`, i.e. `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len(), "composing permutations of different sizes");
        Permutation {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Permutation { images }
    }

    /// Ordinary sign of the permutation.
    pub fn sgn(&self) -> i32 {
        let n = self.len();
        let mut inversions = 0usize;
        for a in 0..n {
            for b in a + 1..n {
                if self.images[a] > self.images[b] {
                    inversions += 1;
                }
            }
        }
        if inversions.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// All permutations of `n` elements in lexicographic order of one-line form.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..n).collect();
        loop {
            out.push(Permutation {
                images: cur.clone(),
            });
            // next lexicographic permutation
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
            cur.swap(i, j);
            cur[i + 1..].reverse();
        }
        out
    }

    /// The adjacent transpositions `(i i+1)`, which generate the group.
    pub fn adjacent_generators(n: usize) -> Vec<Permutation> {
        (0..n.saturating_sub(1))
            .map(|i| Self::transposition(n, i, i + 1))
            .collect()
    }

    /// The cyclic subgroup generated by `i ↦ i + 1 mod n`.
    pub fn cyclic_group(n: usize) -> Vec<Permutation> {
        (0..n.max(1)).map(|k| Self::rotation(n, k)).collect()
    }

    /// The interleaving embedding `S_n → S_{2n}` that moves the pair of
    /// slots `(2i, 2i+1)` to `(2σ(i), 2σ(i)+1)`.
    pub fn interleave(&self) -> Permutation {
        let mut images = Vec::with_capacity(2 * self.len());
        for &j in &self.images {
            images.push(2 * j);
            images.push(2 * j + 1);
        }
        Permutation { images }
    }

    /// Moves the entries of `word` according to the permutation: the letter in
    /// position `i` ends up in position `σ(i)`.
    pub fn permute_word(&self, word: &[usize]) -> Word {
        let mut out: Word = word.into();
        for (i, &w) in word.iter().enumerate() {
            out[self.images[i]] = w;
        }
        out
    }
}

/// Exponent ε(σ, v̄) of the Koszul sign: the sum of `|v_a||v_b|` over the
/// pairs of inputs `a < b` whose order σ reverses.
pub fn koszul_exponent(perm: &Permutation, degrees: &[i64]) -> Result<i64> {
    if perm.len() != degrees.len() {
        return Err(Error::Dimension(format!(
            "permutation of {} elements against {} degrees",
            perm.len(),
            degrees.len()
        )));
    }
    Ok(koszul_exponent_unchecked(perm, degrees))
}

pub(crate) fn koszul_exponent_unchecked(perm: &Permutation, degrees: &[i64]) -> i64 {
    let n = degrees.len();
    let mut e = 0i64;
    for a in 0..n {
        if degrees[a] & 1 == 0 {
            continue;
        }
        for b in a + 1..n {
            if degrees[b] & 1 != 0 && perm.images[a] > perm.images[b] {
                e += 1;
            }
        }
    }
    e
}

pub fn koszul_sign(perm: &Permutation, degrees: &[i64]) -> Result<i32> {
    Ok(sign_of(koszul_exponent(perm, degrees)?))
}

/// `(-1)^e`.
#[inline]
pub fn sign_of(e: i64) -> i32 {
    if e & 1 == 0 {
        1
    } else {
        -1
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, j) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", j + 1)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Sign obtained by sorting with adjacent swaps, each swap of neighbours
    /// `u, v` costing `(-1)^{|u||v|}`.
    fn adjacent_fold_sign(perm: &Permutation, degrees: &[i64]) -> i32 {
        // target position of each current slot
        let mut targets: Vec<usize> = perm.images().to_vec();
        let mut degs = degrees.to_vec();
        let mut sign = 1;
        let n = targets.len();
        for _ in 0..n {
            for i in 0..n.saturating_sub(1) {
                if targets[i] > targets[i + 1] {
                    targets.swap(i, i + 1);
                    degs.swap(i, i + 1);
                    sign *= sign_of(degs[i] * degs[i + 1]);
                }
            }
        }
        sign
    }

    #[test]
    fn identity_sign_is_one() {
        assert_eq!(koszul_sign(&Permutation::identity(3), &[1, 1, 1]).unwrap(), 1);
    }

    #[test]
    fn odd_swap_is_negative() {
        let s = Permutation::transposition(2, 0, 1);
        assert_eq!(koszul_sign(&s, &[1, 1]).unwrap(), -1);
    }

    #[test]
    fn length_mismatch_is_an_error() {
        let s = Permutation::identity(2);
        assert!(matches!(koszul_sign(&s, &[1]), Err(Error::Dimension(_))));
    }

    #[test]
    fn closed_formula_matches_adjacent_fold() {
        for n in 0..=4 {
            for perm in Permutation::all(n) {
                for code in 0..3usize.pow(n as u32) {
                    let degrees: Vec<i64> = (0..n).map(|i| ((code / 3usize.pow(i as u32)) % 3) as i64).collect();
                    assert_eq!(
                        koszul_sign(&perm, &degrees).unwrap(),
                        adjacent_fold_sign(&perm, &degrees),
                        "{perm} on {degrees:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn three_cycle_against_transpositions() {
        // 1→2→3→1 is (1 2)∘(2 3), the right factor applied first
        let c = Permutation::from_one_based(&[2, 3, 1]).unwrap();
        let t12 = Permutation::transposition(3, 0, 1);
        let t23 = Permutation::transposition(3, 1, 2);
        assert_eq!(t12.compose(&t23), c);
        assert_eq!(t23.compose(&t12), Permutation::from_one_based(&[3, 1, 2]).unwrap());
        assert_eq!(koszul_sign(&c, &[1, 1, 0]).unwrap(), adjacent_fold_sign(&c, &[1, 1, 0]));
    }

    #[test]
    fn enumeration_is_complete() {
        assert_eq!(Permutation::all(0).len(), 1);
        assert_eq!(Permutation::all(4).len(), 24);
        let all = Permutation::all(4);
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted, all);
    }

    #[test]
    fn interleave_is_a_homomorphism() {
        for a in Permutation::all(3) {
            for b in Permutation::all(3) {
                assert_eq!(a.compose(&b).interleave(), a.interleave().compose(&b.interleave()));
            }
        }
    }

    #[test]
    fn permute_word_moves_letters_forward() {
        let c = Permutation::from_one_based(&[2, 3, 1]).unwrap();
        assert_eq!(c.permute_word(&[7, 8, 9]).as_slice(), &[9, 7, 8]);
    }

    #[test]
    fn invalid_images_are_rejected() {
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::new(vec![2, 0]).is_err());
    }
}
