//! The dg Lie algebra induced on (A/[A,A])[d].

use precy::corpus;
use precy::dpa::induced_quotient_lie;

fn main() -> precy::Result<()> {
    let mut shown = 0;
    for named in corpus::bracket_corpus() {
        let (alg, br) = &named.value;
        let lie = induced_quotient_lie(alg, br)?;
        if lie.differential.is_zero() || br.is_zero() {
            continue;
        }
        println!("{}: quotient {} (representatives {:?})", named.name, lie.space, lie.representatives);
        print!("{}", lie.report);
        println!("bracket entries {}, differential entries {}\n", lie.bracket.nnz(), lie.differential.nnz());
        shown += 1;
        if shown == 3 {
            break;
        }
    }
    Ok(())
}
