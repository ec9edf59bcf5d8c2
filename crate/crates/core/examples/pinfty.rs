//! Double P∞-algebras and their pre-Calabi-Yau structures.

use precy::ainfty::PermutationMode;
use precy::corpus;
use precy::pinfty::{check_p_infinity, pinfty_from_precy, pinfty_sign, precy_from_pinfty, verify_pinf_precy};

fn main() -> precy::Result<()> {
    let families = corpus::nilpotent_pinfty_families(0, &[0, 0, -1], &[1, 2, 3], true);
    let fam = families
        .iter()
        .find(|f| f.bracket(3).is_some())
        .expect("a family with a ternary bracket");
    println!("carrier {} with brackets of arities {:?}", fam.space(), fam.brackets().keys().collect::<Vec<_>>());
    print!("{}", check_p_infinity(fam, PermutationMode::Full)?);

    let ba = precy_from_pinfty(fam, false)?;
    println!("\nboundary structure has operations of arities {:?}", ba.structure().ops().keys().collect::<Vec<_>>());
    print!("{}", verify_pinf_precy(&ba, fam.p_max(), PermutationMode::Full)?);
    let back = pinfty_from_precy(&ba)?;
    println!("round trip exact: {}", &back == fam);

    println!("\nsign at p = 2 for |a|, |b| ∈ {{0, 1}}, |f|, |g| on shell:");
    for (a, b) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        for f in -2..=0 {
            let g = -(a + b + f);
            println!("  |a|={a} |b|={b} |f|={f} |g|={g}: {}", pinfty_sign(&[a, b], &[f, g]));
        }
    }
    Ok(())
}
