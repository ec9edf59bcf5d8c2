//! Morphisms of double Poisson algebras give mixed boundary algebras whose
//! legs compose.

use precy::corpus;
use precy::functoriality::{
    boundary_morphism, check_dpa_morphism, check_dpa_quasi_iso, check_quasi_iso, compose_boundary,
    verify_composition, verify_mixed_boundary,
};

fn main() -> precy::Result<()> {
    let pairs = corpus::composable_pairs();
    println!("{} composable pairs in the corpus", pairs.len());
    for named in pairs.iter().take(4) {
        let (phi, psi) = &named.value;
        println!("\n== {}", named.name);
        print!("{}", check_dpa_morphism(phi)?);
        let mb = boundary_morphism(phi)?;
        println!("mixed boundary on {} basis vectors", mb.space().dim());
        print!("{}", verify_mixed_boundary(&mb)?);
        if check_dpa_quasi_iso(phi)? {
            println!(
                "φ is a quasi-isomorphism; legs: {} / {}",
                check_quasi_iso(&mb.leg_source)?,
                check_quasi_iso(&mb.leg_target)?
            );
        }
        let w = compose_boundary(phi, psi)?;
        print!("{}", verify_composition(&w)?);
    }
    Ok(())
}
