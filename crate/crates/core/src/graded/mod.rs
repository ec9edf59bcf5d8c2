//! Exact graded linear algebra: spaces with ordered bases, sparse tensors and
//! multilinear maps, and the Koszul signs of permutations.

mod hom;
mod map;
mod perm;
mod space;
mod tensor;

use num_bigint::BigInt;
use num_rational::BigRational;
use smallvec::SmallVec;

pub use hom::{
    apply_functionals, basis_vector, degree_of, dual_map, dual_pairing_sign, power, shift_map,
    tau, tensor_of_maps,
};
pub use map::{all_words, MultiMap};
pub use perm::{koszul_exponent, koszul_sign, sign_of, Permutation};
pub use space::{dual_shift_space, BasisElement, GradedSpace, Space};
pub use tensor::{
    permute_basis_word, permute_tensor, render_word, word_degree, word_degrees, Tensor, Vector,
};

/// The ground field.
pub type Q = BigRational;

/// A tuple of basis indices, one per tensor factor.
pub type Word = SmallVec<[usize; 8]>;

/// Integer as a rational.
pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// `n / d` as a rational.
pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// `(-1)^e` as a rational.
pub fn qsign(e: i64) -> Q {
    q(sign_of(e) as i64)
}
