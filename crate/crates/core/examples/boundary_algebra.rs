//! The square-zero extension A ⊕ A#[d−1] as a cyclic A∞-algebra.

use precy::ainfty::{check_cyclic, check_stasheff};
use precy::correspondence::boundary_algebra;
use precy::corpus;

fn main() -> precy::Result<()> {
    for (name, alg) in [
        ("upper triangular 2×2 matrices", corpus::upper_triangular(1)),
        ("acyclic dual numbers with unit", corpus::acyclic_with_unit()),
    ] {
        for d in [0, 1] {
            let ba = boundary_algebra(&alg, d)?;
            println!("{name}, d = {d}: total space {}", ba.space());
            print!("{}", check_stasheff(ba.structure(), Some(5)));
            print!("{}", check_cyclic(ba.structure())?);
            println!("predicates: {}\n", ba.classify()?.names().join(", "));
        }
    }
    Ok(())
}
