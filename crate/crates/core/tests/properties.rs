//! Randomized invariants over generated tensors, maps, rationals and files.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use precy::correspondence::{bracket_from_precy, precy_from_bracket};
use precy::corpus;
use precy::graded::{qr, GradedSpace, MultiMap, Permutation, Space, Tensor, Word};
use precy::io;

fn space(degrees: &[i64]) -> Space {
    let pairs: Vec<(String, i64)> = degrees.iter().enumerate().map(|(i, &g)| (format!("e{i}"), g)).collect();
    GradedSpace::from_pairs(&pairs).unwrap().into_shared()
}

fn perm(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle().prop_map(|v| Permutation::new(v).unwrap())
}

/// A tensor in `V^{⊗n}` with `V` spanned by `degrees`.
fn tensor_in(sp: Space, n: usize) -> impl Strategy<Value = Tensor> {
    let dim = sp.dim();
    prop::collection::vec((prop::collection::vec(0..dim, n), -3i64..=3), 0..6).prop_map(move |terms| {
        Tensor::from_terms(
            vec![sp.clone(); n],
            terms.into_iter().map(|(w, c)| (Word::from_vec(w), qr(c, 1))),
        )
    })
}

/// A random degree-`deg` endomorphism of `sp`.
fn endo(sp: &Space, deg: i64, coeffs: &[i64]) -> MultiMap {
    let mut m = MultiMap::zero(vec![sp.clone()], vec![sp.clone()], deg);
    let mut c = coeffs.iter().cycle();
    for i in 0..sp.dim() {
        for j in 0..sp.dim() {
            if sp.degree(j) - sp.degree(i) == deg {
                m.add_entry(&[i], &[j], qr(*c.next().unwrap(), 1)).unwrap();
            }
        }
    }
    m
}

fn action_case() -> impl Strategy<Value = (Tensor, Permutation, Permutation)> {
    (1usize..=5, prop::collection::vec(-2i64..=2, 1..=3)).prop_flat_map(|(n, degs)| {
        let sp = space(&degs);
        (tensor_in(sp, n), perm(n), perm(n))
    })
}

proptest! {
    #[test]
    fn permutation_action_is_a_group_action((t, s, r) in action_case()) {
        let lhs = t.permuted(&s.compose(&r)).unwrap();
        let rhs = t.permuted(&r).unwrap().permuted(&s).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(t.permuted(&s).unwrap().permuted(&s.inverse()).unwrap(), t);
    }

    #[test]
    fn composition_is_associative(
        degs in prop::collection::vec(-2i64..=2, 1..=4),
        d1 in -1i64..=1, d2 in -1i64..=1, d3 in -1i64..=1,
        coeffs in prop::collection::vec(-2i64..=2, 2..8),
    ) {
        let sp = space(&degs);
        let (f, g, h) = (endo(&sp, d1, &coeffs), endo(&sp, d2, &coeffs[1..]), endo(&sp, d3, &coeffs));
        let lhs = f.compose(&g).unwrap().compose(&h).unwrap();
        let rhs = f.compose(&g.compose(&h).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn rationals_round_trip(n in -10_000i64..10_000, d in 1i64..500) {
        let x = qr(n, d);
        let s = io::format_rational(&x);
        prop_assert!(io::is_canonical_rational(&s));
        prop_assert_eq!(io::parse_rational(&s).unwrap(), x.clone());
        prop_assert_eq!(io::parse_rational(&format!("{}/{}", 3 * n, 3 * d)).unwrap(), x);
    }

    #[test]
    fn generated_files_are_canonical(seed in any::<u64>(), degs in prop::collection::vec(-1i64..=1, 2..=3), d in 0i64..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alg = corpus::random_algebra(&degs, 0.5, 20, &mut rng);
        let text = io::serialize_algebra(&alg, Some(d));
        prop_assert_eq!(io::serialize(&io::parse(&text).unwrap()), text);
        for br in corpus::poisson_brackets(&alg, d, &[-1, 0, 1], 8, seed) {
            let text = io::serialize_bracket(&alg, &br);
            prop_assert_eq!(io::serialize(&io::parse(&text).unwrap()), text.clone());
            let ba = precy_from_bracket(&alg, &br, false).unwrap();
            let btext = io::serialize_boundary(&ba);
            prop_assert_eq!(io::serialize(&io::parse(&btext).unwrap()), btext);
            prop_assert_eq!(bracket_from_precy(&ba).unwrap(), br);
        }
    }
}
