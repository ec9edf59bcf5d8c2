//! Deterministic families of small test objects: dg algebras found by
//! exhaustive search or built as monomial algebras, and double Poisson
//! brackets parametrized by the kernel of the linear axioms.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ainfty::PermutationMode;
use crate::dpa::{
    antisymmetry_defect, closed_defect, is_double_poisson, leibniz_defect, DgAlgebra, DoubleBracket,
};
use crate::error::Result;
use crate::functoriality::{check_dpa_morphism, DpaMorphism};
use crate::graded::{all_words, q, GradedSpace, MultiMap, Permutation, Space, Word, Q};
use crate::linalg;
use crate::pinfty::{self, PInfinityFamily};

/// A corpus entry with a human-readable label.
#[derive(Clone, Debug)]
pub struct Named<T> {
    pub name: String,
    pub value: T,
}

impl<T> Named<T> {
    pub fn new(name: impl Into<String>, value: T) -> Self {
        Self {
            name: name.into(),
            value,
        }
    }
}

fn space_with(degrees: &[i64]) -> Space {
    let names: Vec<(String, i64)> = degrees
        .iter()
        .enumerate()
        .map(|(i, &g)| (format!("e{i}"), g))
        .collect();
    GradedSpace::from_pairs(&names).expect("distinct names").into_shared()
}

/// Every dg algebra on the basis with the given degrees whose structure
/// constants lie in `coeffs`, in a fixed enumeration order.
pub fn exhaustive_algebras(degrees: &[i64], coeffs: &[i64], differential: bool) -> Vec<DgAlgebra> {
    let sp = space_with(degrees);
    let n = degrees.len();
    let mut slots: Vec<(bool, Word, usize)> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if degrees[i] + degrees[j] == degrees[k] {
                    slots.push((true, Word::from_slice(&[i, j]), k));
                }
            }
        }
    }
    if differential {
        for i in 0..n {
            for k in 0..n {
                if degrees[i] + 1 == degrees[k] {
                    slots.push((false, Word::from_slice(&[i]), k));
                }
            }
        }
    }
    let mut out = Vec::new();
    let total = coeffs.len().pow(slots.len() as u32);
    for code in 0..total {
        let mut product = MultiMap::zero(vec![sp.clone(); 2], vec![sp.clone()], 0);
        let mut diff = MultiMap::zero(vec![sp.clone()], vec![sp.clone()], 1);
        let mut c = code;
        for (is_mul, w, k) in &slots {
            let x = coeffs[c % coeffs.len()];
            c /= coeffs.len();
            if x != 0 {
                let target = if *is_mul { &mut product } else { &mut diff };
                target.push(w.clone(), Word::from_slice(&[*k]), q(x));
            }
        }
        let alg = DgAlgebra::new(sp.clone(), product, diff).expect("shapes fixed");
        if alg.is_valid() {
            out.push(alg);
        }
    }
    out
}

/// The monomial algebra spanned by `words` over single-letter generators with
/// the given degrees. `words` must be closed under taking subwords; the
/// product concatenates and is zero when the result is not listed. A
/// listed empty word `""` acts as the unit.
pub fn monomial_algebra(gens: &[(char, i64)], words: &[&str]) -> Result<DgAlgebra> {
    let deg_of = |w: &str| -> i64 {
        w.chars()
            .map(|c| gens.iter().find(|g| g.0 == c).map(|g| g.1).unwrap_or(0))
            .sum()
    };
    let names: Vec<(String, i64)> = words
        .iter()
        .map(|w| {
            let name = if w.is_empty() { "1".to_string() } else { w.to_string() };
            (name, deg_of(w))
        })
        .collect();
    let sp = GradedSpace::from_pairs(&names)?.into_shared();
    let index: BTreeMap<&str, usize> = words.iter().enumerate().map(|(i, w)| (*w, i)).collect();
    let mut product = MultiMap::zero(vec![sp.clone(); 2], vec![sp.clone()], 0);
    for (i, u) in words.iter().enumerate() {
        for (j, v) in words.iter().enumerate() {
            let uv = format!("{u}{v}");
            if let Some(&k) = index.get(uv.as_str()) {
                product.add_entry(&[i, j], &[k], q(1))?;
            }
        }
    }
    let diff = MultiMap::zero(vec![sp.clone()], vec![sp.clone()], 1);
    DgAlgebra::new(sp, product, diff)
}

/// Every differential with coefficients in `coeffs` that makes `alg` a dg
/// algebra (the given one included when it is valid).
pub fn differentials(alg: &DgAlgebra, coeffs: &[i64]) -> Vec<DgAlgebra> {
    let sp = alg.space().clone();
    let n = sp.dim();
    let slots: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |k| (i, k)))
        .filter(|&(i, k)| sp.degree(i) + 1 == sp.degree(k))
        .collect();
    let mut out = Vec::new();
    for code in 0..coeffs.len().pow(slots.len() as u32) {
        let mut diff = MultiMap::zero(vec![sp.clone()], vec![sp.clone()], 1);
        let mut c = code;
        for &(i, k) in &slots {
            let x = coeffs[c % coeffs.len()];
            c /= coeffs.len();
            if x != 0 {
                diff.push(Word::from_slice(&[i]), Word::from_slice(&[k]), q(x));
            }
        }
        let cand = DgAlgebra::new(sp.clone(), alg.product().clone(), diff).expect("shapes fixed");
        if cand.is_valid() {
            out.push(cand);
        }
    }
    out
}

/// The curated corpus of dg algebras: dimension at most 4, degrees in
/// `−2..=2`, with and without differentials.
pub fn algebra_corpus() -> Vec<Named<DgAlgebra>> {
    let mut out = Vec::new();
    for g in -2..=2 {
        for alg in exhaustive_algebras(&[g], &[0, 1], false) {
            out.push(Named::new(format!("dim1[{g}]"), alg));
        }
    }
    for degs in [[0, 0], [0, 1], [-1, 0], [0, -1], [1, 2], [-2, -1], [1, 1], [0, 2]] {
        for (i, alg) in exhaustive_algebras(&degs, &[0, 1], true).into_iter().enumerate() {
            out.push(Named::new(format!("dim2{degs:?}#{i}"), alg));
        }
    }
    let monomials: &[(&str, &[(char, i64)], &[&str])] = &[
        ("truncated x^3", &[('x', 0)], &["x", "xx", "xxx"]),
        ("unital x^2", &[('x', 1)], &["", "x"]),
        ("unital x^3 in degree -1", &[('x', -1)], &["", "x", "xx"]),
        ("xy", &[('x', 0), ('y', -1)], &["x", "y", "xy"]),
        ("xy yx", &[('x', 1), ('y', -1)], &["x", "y", "xy", "yx"]),
        ("unital xy", &[('x', 0), ('y', 1)], &["", "x", "y", "xy"]),
        ("x y xy", &[('x', -1), ('y', 1)], &["x", "y", "xy"]),
        ("x xx y", &[('x', 1), ('y', 2)], &["x", "xx", "y"]),
    ];
    for (name, gens, words) in monomials {
        let base = monomial_algebra(gens, words).expect("well-formed monomial data");
        for (i, alg) in differentials(&base, &[0, 1]).into_iter().enumerate() {
            out.push(Named::new(format!("monomial {name}#{i}"), alg));
        }
    }
    out.push(Named::new("upper triangular, e12 in degree 1", upper_triangular(1)));
    out.push(Named::new("upper triangular, e12 in degree 0", upper_triangular(0)));
    out.push(Named::new("acyclic pair with unit", acyclic_with_unit()));
    out
}

/// 2×2 upper triangular matrices with `e12` placed in degree `g`.
pub fn upper_triangular(g: i64) -> DgAlgebra {
    DgAlgebra::builder(&[("e11", 0), ("e12", g), ("e22", 0)])
        .and_then(|b| b.mul("e11", "e11", &[(q(1), "e11")]))
        .and_then(|b| b.mul("e22", "e22", &[(q(1), "e22")]))
        .and_then(|b| b.mul("e11", "e12", &[(q(1), "e12")]))
        .and_then(|b| b.mul("e12", "e22", &[(q(1), "e12")]))
        .and_then(|b| b.build())
        .expect("upper triangular matrices form an algebra")
}

/// `k[ε]/(ε²)` with `|ε| = −1` and `∂ε = 1`, an acyclic unital dg algebra.
pub fn acyclic_with_unit() -> DgAlgebra {
    DgAlgebra::builder(&[("1", 0), ("eps", -1)])
        .and_then(|b| b.mul("1", "1", &[(q(1), "1")]))
        .and_then(|b| b.mul("1", "eps", &[(q(1), "eps")]))
        .and_then(|b| b.mul("eps", "1", &[(q(1), "eps")]))
        .and_then(|b| b.diff("eps", &[(q(1), "1")]))
        .and_then(|b| b.build())
        .expect("dual numbers with unit differential")
}

/// Slots `(a, b; k, l)` of a bracket of degree `−d`: `|k| + |l| = |a| + |b| − d`.
pub fn bracket_slots(space: &Space, d: i64) -> Vec<(usize, usize, usize, usize)> {
    let n = space.dim();
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for k in 0..n {
                for l in 0..n {
                    if space.degree(k) + space.degree(l) == space.degree(a) + space.degree(b) - d {
                        out.push((a, b, k, l));
                    }
                }
            }
        }
    }
    out
}

pub fn bracket_from_coords(space: &Space, d: i64, slots: &[(usize, usize, usize, usize)], x: &[Q]) -> DoubleBracket {
    let mut table = MultiMap::zero(vec![space.clone(); 2], vec![space.clone(); 2], -d);
    for (&(a, b, k, l), c) in slots.iter().zip(x) {
        if !c.is_zero() {
            table.push(Word::from_slice(&[a, b]), Word::from_slice(&[k, l]), c.clone());
        }
    }
    DoubleBracket::new(d, table).expect("shape fixed")
}

fn defect_coords(defects: &[MultiMap], index: &mut BTreeMap<(usize, Word, Word), usize>) -> Vec<(usize, Q)> {
    let mut out = Vec::new();
    for (t, m) in defects.iter().enumerate() {
        for (w, o) in m.entries() {
            for (v, c) in o {
                let next = index.len();
                let row = *index.entry((t, w.clone(), v.clone())).or_insert(next);
                out.push((row, c.clone()));
            }
        }
    }
    out
}

/// The axioms of a double Poisson bracket.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    Antisymmetry,
    Leibniz,
    Closed,
    DoubleJacobi,
}

impl Axiom {
    pub const ALL: [Axiom; 4] = [Axiom::Antisymmetry, Axiom::Leibniz, Axiom::Closed, Axiom::DoubleJacobi];
    pub const LINEAR: [Axiom; 3] = [Axiom::Antisymmetry, Axiom::Leibniz, Axiom::Closed];

    /// The check name used in reports.
    pub fn check_name(self) -> &'static str {
        match self {
            Axiom::Antisymmetry => "antisymmetry",
            Axiom::Leibniz => "leibniz",
            Axiom::Closed => "closed",
            Axiom::DoubleJacobi => "double_jacobi",
        }
    }
}

/// A basis of the brackets of degree `−d` satisfying the chosen linear
/// axioms (double Jacobi is quadratic and ignored here).
pub fn linear_kernel(alg: &DgAlgebra, d: i64, axioms: &[Axiom]) -> Vec<DoubleBracket> {
    let sp = alg.space().clone();
    let slots = bracket_slots(&sp, d);
    let mut index = BTreeMap::new();
    let mut columns = Vec::new();
    for s in 0..slots.len() {
        let mut x = vec![Q::zero(); slots.len()];
        x[s] = q(1);
        let br = bracket_from_coords(&sp, d, &slots, &x);
        let defects: Vec<MultiMap> = axioms
            .iter()
            .filter_map(|a| match a {
                Axiom::Antisymmetry => Some(antisymmetry_defect(alg, &br)),
                Axiom::Leibniz => Some(leibniz_defect(alg, &br)),
                Axiom::Closed => Some(closed_defect(alg, &br)),
                Axiom::DoubleJacobi => None,
            })
            .map(|m| m.expect("same space"))
            .collect();
        columns.push(defect_coords(&defects, &mut index));
    }
    let mut m = linalg::zeros(index.len(), slots.len());
    for (col, entries) in columns.iter().enumerate() {
        for (row, c) in entries {
            m[*row][col] += c;
        }
    }
    linalg::kernel(&m, slots.len())
        .into_iter()
        .map(|v| bracket_from_coords(&sp, d, &slots, &v))
        .collect()
}

/// A basis of the brackets of degree `−d` satisfying the linear axioms
/// (antisymmetry, Leibniz, closedness), one per free slot.
pub fn linear_bracket_basis(alg: &DgAlgebra, d: i64) -> Vec<DoubleBracket> {
    linear_kernel(alg, d, &Axiom::LINEAR)
}

/// A bracket obtained from a double Poisson bracket by a perturbation that
/// breaks exactly one axiom.
#[derive(Clone, Debug)]
pub struct Mutation {
    pub violated: Axiom,
    pub bracket: DoubleBracket,
}

/// Perturbations `br ± δ` violating exactly one axiom, at most `per_axiom`
/// of each kind. For a linear axiom, `δ` runs over a kernel basis of the
/// other two linear axioms; for double Jacobi, over the kernel of all three.
pub fn single_axiom_mutations(alg: &DgAlgebra, br: &DoubleBracket, per_axiom: usize) -> Vec<Mutation> {
    let mut out = Vec::new();
    for violated in Axiom::ALL {
        let keep: Vec<Axiom> = Axiom::LINEAR.into_iter().filter(|&a| a != violated).collect();
        let mut found = 0;
        'deltas: for delta in linear_kernel(alg, br.d(), &keep) {
            for sign in [1, -1] {
                let cand = br.add(&delta.scaled(&q(sign))).expect("same space and degree");
                let Ok(r) = crate::dpa::check_double_poisson(alg, &cand) else {
                    continue;
                };
                if r.failed_names() == [violated.check_name()] {
                    out.push(Mutation {
                        violated,
                        bracket: cand,
                    });
                    found += 1;
                    if found == per_axiom {
                        break 'deltas;
                    }
                    break;
                }
            }
        }
    }
    out
}

/// Double Poisson brackets `Σ c_i β_i` over the linear basis `β_i` with
/// `c_i ∈ grid`, filtered by the double Jacobi identity and with duplicates
/// removed. When the grid has more than `limit` points, `limit` points are
/// sampled with the given seed instead.
pub fn poisson_brackets(alg: &DgAlgebra, d: i64, grid: &[i64], limit: usize, seed: u64) -> Vec<DoubleBracket> {
    let basis = linear_bracket_basis(alg, d);
    let k = basis.len();
    let total = (grid.len() as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    let mut codes: Vec<Vec<i64>> = Vec::new();
    if total <= limit as u128 {
        for code in 0..total as usize {
            let mut c = code;
            codes.push(
                (0..k)
                    .map(|_| {
                        let x = grid[c % grid.len()];
                        c /= grid.len();
                        x
                    })
                    .collect(),
            );
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        codes.push(vec![0; k]);
        for _ in 1..limit {
            codes.push((0..k).map(|_| *grid.choose(&mut rng).expect("nonempty grid")).collect());
        }
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for code in codes {
        let mut br = DoubleBracket::zero(alg.space().clone(), d);
        for (c, b) in code.iter().zip(&basis) {
            if *c != 0 {
                br = br.add(&b.scaled(&q(*c))).expect("same degree");
            }
        }
        let key = format!("{:?}", br.table().entries());
        if seen.contains(&key) {
            continue;
        }
        if is_double_poisson(alg, &br) {
            seen.insert(key);
            out.push(br);
        }
    }
    out
}

/// Every double Poisson bracket on the corpus algebras of dimension at most 2
/// with coefficients `{−1, 0, 1}` on the kernel coordinates, for bracket
/// degrees `−d`, `d ∈ {−1, 0, 1, 2}`. Zero brackets are included.
pub fn bracket_corpus() -> Vec<Named<(DgAlgebra, DoubleBracket)>> {
    let mut out = Vec::new();
    for named in algebra_corpus().into_iter().filter(|n| n.value.dim() <= 2) {
        for d in -1..=2 {
            for (i, br) in poisson_brackets(&named.value, d, &[-1, 0, 1], 729, 7).into_iter().enumerate() {
                out.push(Named::new(format!("{}, d={d}, bracket {i}", named.name), (named.value.clone(), br)));
            }
        }
    }
    out
}

/// A random dg algebra of the given degrees found by rejection sampling over
/// sparse structure constants in `{−1, 0, 1}`; falls back to the trivial
/// algebra after `tries` attempts.
pub fn random_algebra(degrees: &[i64], density: f64, tries: usize, rng: &mut impl Rng) -> DgAlgebra {
    let sp = space_with(degrees);
    let n = degrees.len();
    for _ in 0..tries {
        let mut product = MultiMap::zero(vec![sp.clone(); 2], vec![sp.clone()], 0);
        let mut diff = MultiMap::zero(vec![sp.clone()], vec![sp.clone()], 1);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if degrees[i] + degrees[j] == degrees[k] && rng.gen_bool(density) {
                        let c = if rng.gen_bool(0.5) { 1 } else { -1 };
                        product.push(Word::from_slice(&[i, j]), Word::from_slice(&[k]), q(c));
                    }
                }
            }
            for k in 0..n {
                if degrees[i] + 1 == degrees[k] && rng.gen_bool(density) {
                    diff.push(Word::from_slice(&[i]), Word::from_slice(&[k]), q(1));
                }
            }
        }
        let alg = DgAlgebra::new(sp.clone(), product, diff).expect("shapes fixed");
        if alg.is_valid() {
            return alg;
        }
    }
    DgAlgebra::trivial(sp)
}

/// The nilpotent example `A = ⟨x, y⟩`, `|x| = 0`, `|y| = −1`, zero product,
/// with `⟨x, x⟩ = y ⊗ y` of degree `−2`.
pub fn nilpotent_example() -> (DgAlgebra, DoubleBracket) {
    let alg = DgAlgebra::builder(&[("x", 0), ("y", -1)])
        .and_then(|b| b.build())
        .expect("trivial algebra");
    let br = DoubleBracket::zero(alg.space().clone(), 2)
        .with("x", "x", &[(q(1), "y", "y")])
        .expect("symbols exist");
    (alg, br)
}

/// `(input word, output word)` pairs of `A^{⊗p} → A^{⊗p}` of degree `2 − p`.
pub fn pinfty_slots(space: &Space, p: usize) -> Vec<(Word, Word)> {
    let words = all_words(&vec![space.clone(); p]);
    let deg = |w: &Word| w.iter().map(|&i| space.degree(i)).sum::<i64>();
    let mut out = Vec::new();
    for w in &words {
        for v in &words {
            if deg(v) == deg(w) + 2 - p as i64 {
                out.push((w.clone(), v.clone()));
            }
        }
    }
    out
}

fn pinfty_bracket_from_coords(space: &Space, p: usize, slots: &[(Word, Word)], x: &[Q]) -> MultiMap {
    let mut m = MultiMap::zero(vec![space.clone(); p], vec![space.clone(); p], 2 - p as i64);
    for ((w, v), c) in slots.iter().zip(x) {
        if !c.is_zero() {
            m.push(w.clone(), v.clone(), c.clone());
        }
    }
    m
}

/// A basis of the maps `⟨…⟩_p` satisfying the linear axioms of a double
/// P∞-algebra on its own: full antisymmetry and the Leibniz rule.
pub fn linear_pinfty_basis(alg: &DgAlgebra, p: usize) -> Vec<MultiMap> {
    let sp = alg.space().clone();
    let graded = PInfinityFamily::zero(
        DgAlgebra::new(sp.clone(), alg.product().clone(), MultiMap::zero(vec![sp.clone()], vec![sp.clone()], 1))
            .expect("same data"),
    );
    let slots = pinfty_slots(&sp, p);
    let mut index = BTreeMap::new();
    let mut columns = Vec::new();
    for s in 0..slots.len() {
        let mut x = vec![Q::zero(); slots.len()];
        x[s] = q(1);
        let fam = graded
            .clone()
            .with_bracket(p, pinfty_bracket_from_coords(&sp, p, &slots, &x))
            .expect("shape fixed");
        let mut defects = vec![pinfty::leibniz_defect(&fam, p)];
        for sigma in Permutation::adjacent_generators(p) {
            defects.push(pinfty::antisymmetry_defect(&fam, p, &sigma).expect("shape fixed"));
        }
        columns.push(defect_coords(&defects, &mut index));
    }
    let mut m = linalg::zeros(index.len(), slots.len());
    for (col, entries) in columns.iter().enumerate() {
        for (row, c) in entries {
            m[*row][col] += c;
        }
    }
    linalg::kernel(&m, slots.len())
        .into_iter()
        .map(|v| pinfty_bracket_from_coords(&sp, p, &slots, &v))
        .collect()
}

/// Double P∞-algebras on the graded algebra underlying `alg`, with brackets
/// in the given arities built as grid combinations of the linear bases and
/// filtered by every axiom. Duplicates are removed; above `limit` grid points
/// the combinations are sampled with `seed`.
pub fn pinfty_families(
    alg: &DgAlgebra,
    arities: &[usize],
    grid: &[i64],
    limit: usize,
    seed: u64,
) -> Vec<PInfinityFamily> {
    let sp = alg.space().clone();
    let graded =
        DgAlgebra::new(sp.clone(), alg.product().clone(), MultiMap::zero(vec![sp.clone()], vec![sp], 1))
            .expect("same data");
    let basis: Vec<(usize, MultiMap)> = arities
        .iter()
        .flat_map(|&p| linear_pinfty_basis(alg, p).into_iter().map(move |b| (p, b)))
        .collect();
    let k = basis.len();
    let total = (grid.len() as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    let codes: Vec<Vec<i64>> = if total <= limit as u128 {
        (0..total as usize)
            .map(|code| {
                let mut c = code;
                (0..k)
                    .map(|_| {
                        let x = grid[c % grid.len()];
                        c /= grid.len();
                        x
                    })
                    .collect()
            })
            .collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        std::iter::once(vec![0; k])
            .chain((1..limit).map(|_| (0..k).map(|_| *grid.choose(&mut rng).expect("nonempty grid")).collect()))
            .collect()
    };
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for code in codes {
        let mut fam = PInfinityFamily::zero(graded.clone());
        for (c, (p, b)) in code.iter().zip(&basis) {
            if *c != 0 {
                let sum = fam.bracket_or_zero(*p).add(&b.scaled(&q(*c))).expect("same shape");
                fam.set_bracket(*p, sum).expect("same shape");
            }
        }
        let key = format!("{:?}", fam.brackets());
        if seen.contains(&key) {
            continue;
        }
        let ok = pinfty::check_p_infinity(&fam, PermutationMode::Generators).map(|r| r.passed()).unwrap_or(false);
        if ok {
            seen.insert(key);
            out.push(fam);
        }
    }
    out
}

/// Double P∞-algebras on `k z ⊕ U` whose brackets are supported on powers
/// of `z` and take values in tensors of `U`, so that every nested bracket
/// vanishes. With `square` and `|u_0| = 2|z|`, the product is `z·z = u_0`;
/// otherwise it is zero. Each family uses at most one antisymmetrized word per
/// arity in `arities`.
pub fn nilpotent_pinfty_families(z: i64, u: &[i64], arities: &[usize], square: bool) -> Vec<PInfinityFamily> {
    let mut basis: Vec<(String, i64)> = vec![("z".into(), z)];
    basis.extend(u.iter().enumerate().map(|(i, &g)| (format!("u{i}"), g)));
    let sp = GradedSpace::from_pairs(&basis).expect("distinct symbols").into_shared();
    let mut product = MultiMap::zero(vec![sp.clone(); 2], vec![sp.clone()], 0);
    if square && !u.is_empty() && u[0] == 2 * z {
        product.push(Word::from_slice(&[0, 0]), Word::from_slice(&[1]), q(1));
    }
    let alg = DgAlgebra::new(sp.clone(), product, MultiMap::zero(vec![sp.clone()], vec![sp.clone()], 1))
        .expect("shapes fixed");
    let uspace: Vec<usize> = (1..sp.dim()).collect();
    let mut per_arity: Vec<Vec<(usize, MultiMap)>> = Vec::new();
    for &p in arities {
        let target = p as i64 * z + 2 - p as i64;
        let mut options = vec![];
        let mut seen = BTreeSet::new();
        for w in all_words(&vec![sp.clone(); p]) {
            if w.iter().any(|i| !uspace.contains(i)) || w.iter().map(|&i| sp.degree(i)).sum::<i64>() != target {
                continue;
            }
            let mut m = MultiMap::zero(vec![sp.clone(); p], vec![sp.clone(); p], 2 - p as i64);
            m.push(Word::from_elem(0, p), w, q(1));
            let a = pinfty::antisymmetrize(&m).expect("square map");
            let key = format!("{:?}", a.entries());
            if !a.is_zero() && seen.insert(key) {
                options.push((p, a));
            }
        }
        per_arity.push(options);
    }
    let mut out = Vec::new();
    let mut choice = vec![0usize; per_arity.len()];
    // every combination of one option (or none) per arity
    loop {
        let mut fam = PInfinityFamily::zero(alg.clone());
        for (k, &c) in choice.iter().enumerate() {
            if c > 0 {
                let (p, m) = &per_arity[k][c - 1];
                fam.set_bracket(*p, m.clone()).expect("shape fixed");
            }
        }
        if !fam.is_zero() {
            out.push(fam);
        }
        let mut k = 0;
        loop {
            if k == choice.len() {
                return out;
            }
            choice[k] += 1;
            if choice[k] <= per_arity[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// The direct product `A × C` with the bracket `⟨,⟩_A ⊕ ⟨,⟩_C`, together
/// with the inclusions and projections of the factors.
pub struct Product {
    pub algebra: DgAlgebra,
    pub bracket: DoubleBracket,
    pub include_left: MultiMap,
    pub include_right: MultiMap,
    pub project_left: MultiMap,
    pub project_right: MultiMap,
}

pub fn direct_product(a: &DgAlgebra, bra: &DoubleBracket, c: &DgAlgebra, brc: &DoubleBracket) -> Result<Product> {
    let sa = a.space();
    let sc = c.space();
    let na = sa.dim();
    let renamed: Vec<(String, i64)> = sa
        .basis()
        .iter()
        .map(|b| (format!("{}.1", b.symbol), b.degree))
        .chain(sc.basis().iter().map(|b| (format!("{}.2", b.symbol), b.degree)))
        .collect();
    let sp = GradedSpace::from_pairs(&renamed)?.into_shared();
    let shift = |w: &Word, k: usize| -> Word { w.iter().map(|&i| i + k).collect() };
    let mut product = MultiMap::zero(vec![sp.clone(); 2], vec![sp.clone()], 0);
    let mut diff = MultiMap::zero(vec![sp.clone()], vec![sp.clone()], 1);
    let d = bra.d();
    let mut br = MultiMap::zero(vec![sp.clone(); 2], vec![sp.clone(); 2], -d);
    for (alg, bt, k) in [(a, bra, 0), (c, brc, na)] {
        for (w, o) in alg.product().entries() {
            for (v, x) in o {
                product.push(shift(w, k), shift(v, k), x.clone());
            }
        }
        for (w, o) in alg.differential().entries() {
            for (v, x) in o {
                diff.push(shift(w, k), shift(v, k), x.clone());
            }
        }
        for (w, o) in bt.table().entries() {
            for (v, x) in o {
                br.push(shift(w, k), shift(v, k), x.clone());
            }
        }
    }
    let algebra = DgAlgebra::new(sp.clone(), product, diff)?;
    let bracket = DoubleBracket::new(d, br)?;
    let mut include_left = MultiMap::zero(vec![sa.clone()], vec![sp.clone()], 0);
    let mut project_left = MultiMap::zero(vec![sp.clone()], vec![sa.clone()], 0);
    for i in 0..na {
        include_left.push(Word::from_slice(&[i]), Word::from_slice(&[i]), q(1));
        project_left.push(Word::from_slice(&[i]), Word::from_slice(&[i]), q(1));
    }
    let mut include_right = MultiMap::zero(vec![sc.clone()], vec![sp.clone()], 0);
    let mut project_right = MultiMap::zero(vec![sp.clone()], vec![sc.clone()], 0);
    for i in 0..sc.dim() {
        include_right.push(Word::from_slice(&[i]), Word::from_slice(&[na + i]), q(1));
        project_right.push(Word::from_slice(&[na + i]), Word::from_slice(&[i]), q(1));
    }
    Ok(Product {
        algebra,
        bracket,
        include_left,
        include_right,
        project_left,
        project_right,
    })
}

/// Every degree-0 map `A → B` with entries in `coeffs` that is a morphism
/// of double Poisson dg algebras.
pub fn enumerate_morphisms(
    a: &DgAlgebra,
    bra: &DoubleBracket,
    b: &DgAlgebra,
    brb: &DoubleBracket,
    coeffs: &[i64],
) -> Vec<DpaMorphism> {
    let (sa, sb) = (a.space().clone(), b.space().clone());
    let slots: Vec<(usize, usize)> = (0..sa.dim())
        .flat_map(|i| (0..sb.dim()).map(move |j| (i, j)))
        .filter(|&(i, j)| sa.degree(i) == sb.degree(j))
        .collect();
    let mut out = Vec::new();
    for code in 0..coeffs.len().pow(slots.len() as u32) {
        let mut f = MultiMap::zero(vec![sa.clone()], vec![sb.clone()], 0);
        let mut c = code;
        for &(i, j) in &slots {
            let x = coeffs[c % coeffs.len()];
            c /= coeffs.len();
            if x != 0 {
                f.push(Word::from_slice(&[i]), Word::from_slice(&[j]), q(x));
            }
        }
        let phi = DpaMorphism::new(a.clone(), bra.clone(), b.clone(), brb.clone(), f).expect("shapes fixed");
        if check_dpa_morphism(&phi).map(|r| r.passed()).unwrap_or(false) {
            out.push(phi);
        }
    }
    out
}

/// `x ↦ y` with `|x| = g`, `∂x = y`, zero product: an acyclic algebra.
pub fn acyclic_pair(g: i64) -> DgAlgebra {
    DgAlgebra::builder(&[("p", g), ("q", g + 1)])
        .and_then(|b| b.diff("p", &[(q(1), "q")]))
        .and_then(|b| b.build())
        .expect("acyclic pair")
}

/// Composable pairs `(φ, ψ)` of morphisms of double Poisson dg algebras:
/// identities, inclusions and projections of products with acyclic
/// factors, and enumerated maps between small algebras.
pub fn composable_pairs() -> Vec<Named<(DpaMorphism, DpaMorphism)>> {
    let mut out = Vec::new();
    let (nil, nil_br) = nilpotent_example();
    let mut seeds: Vec<(String, DgAlgebra, DoubleBracket)> = vec![("nilpotent".into(), nil.clone(), nil_br.clone())];
    for (name, alg, d) in [
        ("upper triangular", upper_triangular(1), 0),
        ("acyclic with unit", acyclic_with_unit(), 1),
        ("acyclic pair", acyclic_pair(0), 1),
    ] {
        if let Some(br) = poisson_brackets(&alg, d, &[-1, 0, 1], 200, 7).into_iter().find(|b| !b.is_zero()) {
            seeds.push((format!("{name} d={d}"), alg, br));
        } else {
            seeds.push((format!("{name} d={d}"), alg.clone(), DoubleBracket::zero(alg.space().clone(), d)));
        }
    }
    for (name, alg, br) in &seeds {
        let id = DpaMorphism::identity(alg.clone(), br.clone()).expect("identity");
        out.push(Named::new(format!("id∘id on {name}"), (id.clone(), id)));
    }
    // product with an acyclic factor: inclusion then projection, and back
    let d = nil_br.d();
    for g in [-1, 0] {
        let c = acyclic_pair(g);
        let zc = DoubleBracket::zero(c.space().clone(), d);
        let p = direct_product(&nil, &nil_br, &c, &zc).expect("product");
        let inc = DpaMorphism::new(nil.clone(), nil_br.clone(), p.algebra.clone(), p.bracket.clone(), p.include_left.clone())
            .expect("inclusion");
        let proj = DpaMorphism::new(p.algebra.clone(), p.bracket.clone(), nil.clone(), nil_br.clone(), p.project_left.clone())
            .expect("projection");
        out.push(Named::new(format!("include then project, acyclic in {g}"), (inc.clone(), proj.clone())));
        out.push(Named::new(format!("project then include, acyclic in {g}"), (proj, inc)));
    }
    // enumerated maps between dim ≤ 2 algebras with brackets
    let small: Vec<(DgAlgebra, DoubleBracket)> = {
        let mut v = Vec::new();
        for degs in [[0, 0], [0, -1]] {
            for alg in exhaustive_algebras(&degs, &[0, 1], true).into_iter().take(6) {
                for d in [0, 2] {
                    for br in poisson_brackets(&alg, d, &[-1, 0, 1], 40, 3).into_iter().take(3) {
                        v.push((alg.clone(), br));
                    }
                }
            }
        }
        v
    };
    let mut maps: Vec<DpaMorphism> = Vec::new();
    for (a, bra) in &small {
        for (b, brb) in &small {
            if bra.d() != brb.d() || a.space() != b.space() {
                continue;
            }
            for phi in enumerate_morphisms(a, bra, b, brb, &[-1, 0, 1]) {
                if !phi.map().is_zero() {
                    maps.push(phi);
                }
            }
        }
    }
    let mut count = 0;
    'outer: for phi in &maps {
        for psi in &maps {
            if psi.source == phi.target && psi.source_bracket == phi.target_bracket && !phi.source_bracket.is_zero() {
                out.push(Named::new(format!("enumerated pair {count}"), (phi.clone(), psi.clone())));
                count += 1;
                if count >= 24 {
                    break 'outer;
                }
            }
        }
    }
    out
}
