//! Which A∞ identity fails first when one double Poisson axiom is broken.

use std::collections::BTreeMap;

use precy::correspondence::{dictionary_report, precy_from_bracket};
use precy::corpus;

fn main() -> precy::Result<()> {
    let mut table: BTreeMap<(&str, String), usize> = BTreeMap::new();
    for named in corpus::bracket_corpus().into_iter().step_by(4) {
        let (alg, br) = named.value;
        for m in corpus::single_axiom_mutations(&alg, &br, 1) {
            let ba = precy_from_bracket(&alg, &m.bracket, true)?;
            let r = dictionary_report(&ba)?;
            let first = r.first_failure().map(|c| c.name.clone()).unwrap_or_else(|| "none".into());
            *table.entry((m.violated.check_name(), first)).or_default() += 1;
        }
    }
    println!("{:>14}  {:<20} cases", "broken axiom", "first failure");
    for ((axiom, first), n) in table {
        println!("{axiom:>14}  {first:<20} {n}");
    }
    Ok(())
}
