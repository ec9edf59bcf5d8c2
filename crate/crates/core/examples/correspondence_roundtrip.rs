//! Double Poisson bracket → pre-Calabi-Yau structure → double Poisson bracket.

use precy::correspondence::{bracket_from_precy, precy_from_bracket, verify_precy};
use precy::corpus;

fn main() -> precy::Result<()> {
    let corpus = corpus::bracket_corpus();
    let nonzero: Vec<_> = corpus.iter().filter(|n| !n.value.1.is_zero()).collect();
    for named in nonzero.iter().step_by(nonzero.len() / 5) {
        let (alg, br) = &named.value;
        let ba = precy_from_bracket(alg, br, false)?;
        let report = verify_precy(&ba, 7)?;
        let back = bracket_from_precy(&ba)?;
        println!(
            "{}: m3 has {} entries, verdict {}, round trip {}",
            named.name,
            ba.m3().nnz(),
            if report.passed() { "pass" } else { "FAIL" },
            if &back == br { "exact" } else { "DIFFERS" },
        );
    }
    let (alg, br) = corpus::nilpotent_example();
    let ba = precy_from_bracket(&alg, &br, false)?;
    println!("\nnilpotent example, full report:\n{}", verify_precy(&ba, 7)?);
    Ok(())
}
