//! Checking the double Poisson axioms, and watching a single broken axiom.

use precy::corpus;
use precy::dpa::{check_double_poisson, DgAlgebra, DoubleBracket};
use precy::graded::q;

fn main() -> precy::Result<()> {
    // A = ⟨x, y⟩ with |x| = 0, |y| = −1 and zero product
    let (alg, br) = corpus::nilpotent_example();
    println!("⟨x, x⟩ = y ⊗ y of degree −{}:\n{}", br.d(), check_double_poisson(&alg, &br)?);

    // the dual numbers k[ε]/ε² with |ε| = 1 and a degree −2 bracket
    let alg = DgAlgebra::builder(&[("1", 0), ("e", 1)])?
        .mul("1", "1", &[(q(1), "1")])?
        .mul("1", "e", &[(q(1), "e")])?
        .mul("e", "1", &[(q(1), "e")])?
        .build()?;
    let br = DoubleBracket::zero(alg.space().clone(), 2).with("e", "e", &[(q(1), "1", "1")])?;
    let r = check_double_poisson(&alg, &br)?;
    // ⟨ε, ε·ε⟩ = 0 but the Leibniz expansion gives ε⊗1 − 1⊗ε
    println!("⟨ε, ε⟩ = 1 ⊗ 1 on the dual numbers is not a derivation:\n{r}");

    // break one axiom at a time in passing corpus brackets
    for axiom in corpus::Axiom::ALL {
        let found = corpus::bracket_corpus().into_iter().find_map(|n| {
            let (alg, br) = n.value;
            let m = corpus::single_axiom_mutations(&alg, &br, 1).into_iter().find(|m| m.violated == axiom)?;
            Some((n.name, alg, m.bracket))
        });
        if let Some((name, alg, br)) = found {
            let r = check_double_poisson(&alg, &br)?;
            println!("{:>13} broken in {name}: fails {:?}", axiom.check_name(), r.failed_names());
        }
    }
    Ok(())
}
