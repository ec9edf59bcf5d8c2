//! Koszul signs of permutations acting on tensors of graded vectors.

use precy::graded::{koszul_sign, q, tensor_of_maps, GradedSpace, MultiMap, Permutation, Tensor, Word};

fn main() -> precy::Result<()> {
    // x even, y and z odd
    let v = GradedSpace::from_pairs(&[("x", 0), ("y", 1), ("z", 1)])?.into_shared();
    let t = Tensor::basis(vec![v.clone(); 3], &[1, 2, 0]); // y ⊗ z ⊗ x
    println!("t = {t}");

    for s in Permutation::all(3) {
        let st = t.permuted(&s)?;
        let sign = koszul_sign(&s, &[1, 1, 0])?;
        println!("σ = {s}: σ·t = {st}   (sign {sign:+})");
    }

    // the action is a group action: (σρ)·t = σ·(ρ·t)
    let (s, r) = (Permutation::rotation(3, 1), Permutation::transposition(3, 0, 1));
    assert_eq!(t.permuted(&s.compose(&r))?, t.permuted(&r)?.permuted(&s)?);
    println!("(σρ)·t = σ·(ρ·t) for σ = {s}, ρ = {r}");

    // (f ⊗ g)(a ⊗ b) = (−1)^{|g||a|} f(a) ⊗ g(b)
    let mut f = MultiMap::zero(vec![v.clone()], vec![v.clone()], 1);
    f.add_entry(&[0], &[1], q(1))?; // x ↦ y
    let mut g = MultiMap::zero(vec![v.clone()], vec![v.clone()], -1);
    g.add_entry(&[2], &[0], q(1))?; // z ↦ x
    let fg = tensor_of_maps(&f, &g)?;
    let input = Tensor::basis(vec![v.clone(); 2], &[0, 2]);
    println!("(f ⊗ g)(x ⊗ z) = {}", fg.apply(&input)?);
    let input = Tensor::from_terms(vec![v.clone(); 2], [(Word::from_slice(&[0, 2]), q(1))]);
    assert_eq!(fg.apply(&input)?.coeff(&[1, 0]), q(1));
    Ok(())
}
