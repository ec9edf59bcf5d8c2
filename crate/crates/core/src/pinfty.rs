//! Double P∞-algebras: families of brackets `⟨…⟩_p : A^{⊗p} → A^{⊗p}` of
//! degree `2 − p`, and their bijection with good manageable special
//! pre-Calabi-Yau structures on `A ⊕ A#[−1]`.

use std::collections::BTreeMap;

use crate::ainfty::{
    check_cyclic, check_stasheff, check_ultracyclic, is_alternating, AInfinity, Part, PermutationMode,
};
use crate::correspondence::{boundary_algebra, complete_by_rotation, BoundaryAlgebra};
use crate::dpa::{DgAlgebra, DoubleBracket};
use crate::error::{Error, Result};
use crate::graded::{dual_pairing_sign, qsign, MultiMap, Permutation, Space, Word, Q};
use crate::report::{AxiomReport, CheckOutcome};

/// A graded algebra (zero differential) with brackets `⟨…⟩_p` keyed by `p`.
/// `⟨…⟩_1` plays the role of the differential.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PInfinityFamily {
    algebra: DgAlgebra,
    brackets: BTreeMap<usize, MultiMap>,
}

impl PInfinityFamily {
    pub fn new(algebra: DgAlgebra, brackets: BTreeMap<usize, MultiMap>) -> Result<Self> {
        if !algebra.differential().is_zero() {
            return Err(Error::Precondition(
                "a P∞ family sits on a graded algebra; the differential belongs in ⟨…⟩_1".into(),
            ));
        }
        let mut out = Self::zero(algebra);
        for (p, b) in brackets {
            out.set_bracket(p, b)?;
        }
        Ok(out)
    }

    pub fn zero(algebra: DgAlgebra) -> Self {
        Self {
            algebra,
            brackets: BTreeMap::new(),
        }
    }

    /// `⟨…⟩_1 = ∂`, `⟨…⟩_2 = ⟨,⟩` for a bracket of degree 0.
    pub fn from_dpa(alg: &DgAlgebra, br: &DoubleBracket) -> Result<Self> {
        if br.d() != 0 {
            return Err(Error::Precondition(format!(
                "P∞ families have d = 0, the bracket has d = {}",
                br.d()
            )));
        }
        let graded = DgAlgebra::new(
            alg.space().clone(),
            alg.product().clone(),
            MultiMap::zero(vec![alg.space().clone()], vec![alg.space().clone()], 1),
        )?;
        let mut out = Self::zero(graded);
        out.set_bracket(1, alg.differential().clone())?;
        out.set_bracket(2, br.table().clone())?;
        Ok(out)
    }

    pub fn algebra(&self) -> &DgAlgebra {
        &self.algebra
    }

    pub fn space(&self) -> &Space {
        self.algebra.space()
    }

    pub fn brackets(&self) -> &BTreeMap<usize, MultiMap> {
        &self.brackets
    }

    pub fn bracket(&self, p: usize) -> Option<&MultiMap> {
        self.brackets.get(&p)
    }

    pub fn bracket_or_zero(&self, p: usize) -> MultiMap {
        self.brackets.get(&p).cloned().unwrap_or_else(|| self.zero_bracket(p))
    }

    pub fn zero_bracket(&self, p: usize) -> MultiMap {
        let a = self.space().clone();
        MultiMap::zero(vec![a.clone(); p], vec![a; p], 2 - p as i64)
    }

    /// Largest `p` with `⟨…⟩_p ≠ 0`, or 0.
    pub fn p_max(&self) -> usize {
        self.brackets.keys().max().copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.brackets.is_empty()
    }

    /// Replaces `⟨…⟩_p`; a zero map removes it.
    pub fn set_bracket(&mut self, p: usize, b: MultiMap) -> Result<()> {
        if p == 0 {
            return Err(Error::Dimension("brackets start at p = 1".into()));
        }
        let a = self.space().clone();
        if b.domain() != vec![a.clone(); p] || b.codomain() != vec![a; p] {
            return Err(Error::SpaceMismatch(format!("⟨…⟩_{p} must map A^⊗{p} to A^⊗{p}")));
        }
        if b.degree() != 2 - p as i64 {
            return Err(Error::Degree(format!(
                "⟨…⟩_{p} has degree {}, expected {}",
                b.degree(),
                2 - p as i64
            )));
        }
        b.check_homogeneity()?;
        if b.is_zero() {
            self.brackets.remove(&p);
        } else {
            self.brackets.insert(p, b);
        }
        Ok(())
    }

    pub fn with_bracket(mut self, p: usize, b: MultiMap) -> Result<Self> {
        self.set_bracket(p, b)?;
        Ok(self)
    }

    /// The carrier with `⟨…⟩_1` as its differential.
    pub fn dg_algebra(&self) -> Result<DgAlgebra> {
        let a = self.space().clone();
        let diff = self
            .bracket(1)
            .cloned()
            .unwrap_or_else(|| MultiMap::zero(vec![a.clone()], vec![a.clone()], 1));
        DgAlgebra::new(a, self.algebra.product().clone(), diff)
    }

    /// The dg algebra and degree-0 bracket of a family with `p_max ≤ 2`.
    pub fn to_dpa(&self) -> Result<(DgAlgebra, DoubleBracket)> {
        if self.p_max() > 2 {
            return Err(Error::Precondition(format!(
                "⟨…⟩_{} ≠ 0, not a double Poisson dg algebra",
                self.p_max()
            )));
        }
        Ok((self.dg_algebra()?, DoubleBracket::new(0, self.bracket_or_zero(2))?))
    }
}

/// `(1/|G|) Σ_{σ ∈ G} sgn(σ) τ(σ) ∘ m ∘ τ(σ^{-1})`: the projection onto maps
/// antisymmetric under the group `G`, given as a list of its elements.
pub fn antisymmetrize_over(m: &MultiMap, group: &[Permutation]) -> Result<MultiMap> {
    let mut out = MultiMap::zero(m.domain().to_vec(), m.codomain().to_vec(), m.degree());
    let weight = Q::new(1.into(), (group.len() as i64).into());
    for sigma in group {
        out.add_scaled(&m.conjugated(sigma)?, &(&weight * Q::from_integer(sigma.sgn().into())))?;
    }
    Ok(out)
}

/// The projection onto maps satisfying the antisymmetry axiom.
pub fn antisymmetrize(m: &MultiMap) -> Result<MultiMap> {
    antisymmetrize_over(m, &Permutation::all(m.arity()))
}

/// `τ(σ) ∘ ⟨…⟩_p ∘ τ(σ^{-1}) − sgn(σ) ⟨…⟩_p`.
pub fn antisymmetry_defect(fam: &PInfinityFamily, p: usize, sigma: &Permutation) -> Result<MultiMap> {
    let b = fam.bracket_or_zero(p);
    let c = b.conjugated(sigma)?;
    c.sub(&b.scaled(&Q::from_integer(sigma.sgn().into())))
}

/// Defect of `⟨a_1,…,a_{p−1},ab⟩ − ⟨…,a⟩b − (−1)^{|a|(p + Σ|a_j|)} a⟨…,b⟩` on
/// basis tuples `(a_1, …, a_{p−1}, a, b)`.
pub fn leibniz_defect(fam: &PInfinityFamily, p: usize) -> MultiMap {
    let alg = &fam.algebra;
    let sp = fam.space().clone();
    let mut out = MultiMap::zero(vec![sp.clone(); p + 1], vec![sp.clone(); p], 2 - p as i64);
    let Some(b) = fam.bracket(p) else {
        return out;
    };
    let value = |w: &[usize]| -> BTreeMap<Word, Q> { b.image(w).into_terms() };
    for prefix in crate::graded::all_words(&vec![sp.clone(); p - 1]) {
        let pre_deg: i64 = prefix.iter().map(|&i| sp.degree(i)).sum();
        for x in 0..sp.dim() {
            let mut wx = prefix.clone();
            wx.push(x);
            let vx = value(&wx);
            for y in 0..sp.dim() {
                let mut w = wx.clone();
                w.push(y);
                for (k, c) in alg.mul_basis(x, y) {
                    let mut wk = prefix.clone();
                    wk.push(k);
                    for (v, e) in value(&wk) {
                        out.push(w.clone(), v, &c * e);
                    }
                }
                for (v, e) in alg.right_mul(&vx, y) {
                    out.push(w.clone(), v, -e);
                }
                let mut wy = prefix.clone();
                wy.push(y);
                let s = -qsign(sp.degree(x) * (p as i64 + pre_deg));
                for (v, e) in alg.left_mul(x, &value(&wy)) {
                    out.push(w.clone(), v, &s * e);
                }
            }
        }
    }
    out
}

/// `(⟨…⟩_i ⊗ id^{⊗(p−i)}) ∘ (id^{⊗(i−1)} ⊗ ⟨…⟩_{p−i+1})`.
pub fn nested_bracket(fam: &PInfinityFamily, i: usize, p: usize) -> Result<MultiMap> {
    let sp = fam.space().clone();
    let outer = fam.bracket_or_zero(i).extended(&[], &vec![sp; p - i]);
    outer.compose_at(i - 1, &fam.bracket_or_zero(p - i + 1))
}

/// `Σ_i (−1)^{i(p+1)} Σ_{σ ∈ C_p} sgn(σ) τ(σ) ∘ ⟨…⟩_{i,p−i+1} ∘ τ(σ^{-1})`.
pub fn jacobi_defect(fam: &PInfinityFamily, p: usize) -> Result<MultiMap> {
    let sp = fam.space().clone();
    let mut out = MultiMap::zero(vec![sp.clone(); p], vec![sp; p], 3 - p as i64);
    for i in 1..=p {
        let nested = nested_bracket(fam, i, p)?;
        if nested.is_zero() {
            continue;
        }
        let s = qsign((i * (p + 1)) as i64);
        for sigma in Permutation::cyclic_group(p) {
            let c = Q::from_integer(sigma.sgn().into()) * &s;
            out.add_scaled(&nested.conjugated(&sigma)?, &c)?;
        }
    }
    Ok(out)
}

/// Every axiom of a double P∞-algebra: antisymmetry and Leibniz for
/// `p ≤ p_max`, the Jacobi identities for `p ≤ 2 p_max − 1`.
pub fn check_p_infinity(fam: &PInfinityFamily, mode: PermutationMode) -> Result<AxiomReport> {
    let p_max = fam.p_max();
    let mut r = AxiomReport::new();
    for p in 2..=p_max {
        for sigma in crate::ainfty::permutations(p, mode) {
            r.push_defect(format!("antisymmetry({p}, {sigma})"), &antisymmetry_defect(fam, p, &sigma)?);
        }
    }
    for p in 1..=p_max {
        r.push_defect(format!("DLeib({p})"), &leibniz_defect(fam, p));
    }
    for p in 1..=(2 * p_max).saturating_sub(1) {
        r.push_defect(format!("DJac({p})"), &jacobi_defect(fam, p)?);
    }
    r.note(format!("antisymmetry checked in {mode} mode"));
    Ok(r)
}

/// The sign relating `(f_1 ⊗ … ⊗ f_p)(⟨a_1, …, a_p⟩_p)` to
/// `γ(m_{2p−1}(a_p, tf_p, …, a_2, tf_2, a_1), tf_1)`, from the degrees of the
/// `a_j` and of the `f_j ∈ A#`.
pub fn pinfty_sign(a: &[i64], f: &[i64]) -> Q {
    assert_eq!(a.len(), f.len());
    let p = a.len();
    assert!(p >= 1);
    // 1-based accessors
    let a_ = |j: usize| a[j - 1];
    let f_ = |j: usize| f[j - 1];
    let pp = p as i64;
    let mut e = a_(p) * f_(1) + (pp + 1) * (a_(p) + f_(1));
    for j in 1..=p {
        e += (pp - j as i64) * a_(j) + (j as i64 - 1) * f_(j);
    }
    for i in 1..p {
        for j in i + 1..p {
            e += a_(i) * a_(j);
        }
    }
    for i in 2..=p {
        for j in i + 1..=p {
            e += f_(i) * f_(j);
        }
    }
    for i in 2..p {
        for j in i..p {
            e += f_(i) * a_(j);
        }
    }
    qsign(e)
}

/// Position of the input word `(a_p, tf_p, …, tf_2, a_1)` for `a = (i_1, …,
/// i_p)` and `f_j = e_{l_j}*`, `j ≥ 2`.
fn leading_word(inputs: &[usize], duals: &[usize], na: usize) -> Word {
    let p = inputs.len();
    let mut w = Word::new();
    for k in 0..p {
        w.push(inputs[p - 1 - k]);
        if k + 1 < p {
            w.push(na + duals[p - 2 - k]);
        }
    }
    w
}

/// The factor `c ↦ μ` between the coefficient `c` of `e_L` in
/// `⟨e_{i_1}, …, e_{i_p}⟩_p` and the coefficient `μ` of `e_{l_1}` in
/// `m_{2p−1}(e_{i_p}, t e_{l_p}*, …, e_{i_1})`. It is a sign, hence its own
/// inverse.
fn coefficient_sign(a: &Space, inputs: &[usize], out: &[usize], gamma: &Q) -> Q {
    let ad: Vec<i64> = inputs.iter().map(|&i| a.degree(i)).collect();
    let fd: Vec<i64> = out.iter().map(|&l| -a.degree(l)).collect();
    let pairing = Q::from_integer(dual_pairing_sign(&vec![a.clone(); out.len()], out).into());
    pairing * pinfty_sign(&ad, &fd) * gamma
}

/// `m_{2p−1}` on the `A`-leading alternating sector, read off `⟨…⟩_p`.
fn leading_op(fam: &PInfinityFamily, ba: &BoundaryAlgebra, p: usize) -> Result<MultiMap> {
    let a = fam.space();
    let na = a.dim();
    let total = ba.space().clone();
    let form = ba.structure().form().expect("boundary algebras carry the natural form");
    let n = 2 * p - 1;
    let mut op = MultiMap::zero(vec![total.clone(); n], vec![total], 2 - n as i64);
    if let Some(b) = fam.bracket(p) {
        for (w, o) in b.entries() {
            for (l, c) in o {
                let gamma = form.value(l[0], na + l[0]);
                let mu = c * coefficient_sign(a, w, l, &gamma);
                op.add_entry(&leading_word(w, &l[1..], na), &[l[0]], mu)?;
            }
        }
    }
    Ok(op)
}

/// The good manageable special pre-CY structure on `A ⊕ A#[−1]` attached to
/// the family. With `force`, families failing the axioms are accepted.
pub fn precy_from_pinfty(fam: &PInfinityFamily, force: bool) -> Result<BoundaryAlgebra> {
    let report = check_p_infinity(fam, PermutationMode::Generators)?;
    if !report.passed() && !force {
        return Err(Error::Precondition(format!(
            "family is not a double P∞-algebra: {}",
            report.failed_names().join(", ")
        )));
    }
    let square_zero = boundary_algebra(fam.algebra(), 0)?;
    let na = fam.space().dim();
    let mut structure = square_zero.structure().clone();
    for &p in fam.brackets.keys() {
        let leading = leading_op(fam, &square_zero, p)?;
        structure.set_op(2 * p - 1, complete_by_rotation(&leading, na))?;
    }
    Ok(BoundaryAlgebra::from_parts(fam.dg_algebra()?, 0, structure))
}

fn require_pinfty_shape(s: &AInfinity, reference: &AInfinity) -> Result<()> {
    let p = crate::ainfty::classify(s, Some(reference))?;
    p.require(&["good", "manageable", "essentially_odd"])?;
    let ultra = check_ultracyclic(s, PermutationMode::Generators)?;
    if let Some(f) = ultra.first_failure() {
        return Err(Error::Precondition(format!("structure is not ultracyclic: {} fails", f.name)));
    }
    let cyc = check_cyclic(s)?;
    if let Some(f) = cyc.first_failure() {
        return Err(Error::Precondition(format!("structure is not cyclic: {} fails", f.name)));
    }
    Ok(())
}

/// Reads the brackets off `m_{2p−1}(a_p, tf_p, …, a_1)`.
pub fn pinfty_from_precy(ba: &BoundaryAlgebra) -> Result<PInfinityFamily> {
    if ba.d() != 0 {
        return Err(Error::Precondition(format!(
            "P∞ families correspond to d = 0, got d = {}",
            ba.d()
        )));
    }
    let graded = DgAlgebra::new(
        ba.base().space().clone(),
        ba.base().product().clone(),
        MultiMap::zero(vec![ba.base().space().clone()], vec![ba.base().space().clone()], 1),
    )?;
    let reference = crate::ainfty::dg_part(boundary_algebra(&graded, 0)?.structure());
    require_pinfty_shape(ba.structure(), &reference)?;
    Ok(brackets_from_ops(ba.structure(), graded))
}

fn brackets_from_ops(s: &AInfinity, graded: DgAlgebra) -> PInfinityFamily {
    let a = graded.space().clone();
    let na = a.dim();
    let form = s.form().expect("boundary algebras carry the natural form");
    let mut fam = PInfinityFamily::zero(graded);
    for (&n, op) in s.ops() {
        if n % 2 == 0 {
            continue;
        }
        let p = n.div_ceil(2);
        let mut b = fam.zero_bracket(p);
        for (w, o) in op.entries() {
            let parts: Vec<Part> = w.iter().map(|&i| s.part(i)).collect();
            if parts[0] != Part::A || !is_alternating(&parts) {
                continue;
            }
            // w = (i_p, t l_p, …, t l_2, i_1)
            let inputs: Vec<usize> = w.iter().step_by(2).rev().copied().collect();
            let duals = w.iter().skip(1).step_by(2).rev().map(|&i| i - na);
            for (v, mu) in o {
                if v[0] >= na {
                    continue;
                }
                let out: Vec<usize> = std::iter::once(v[0]).chain(duals.clone()).collect();
                let gamma = form.value(v[0], na + v[0]);
                let c = mu * coefficient_sign(&a, &inputs, &out, &gamma);
                b.push(Word::from_slice(&inputs), Word::from_slice(&out), c);
            }
        }
        fam.set_bracket(p, b).expect("degrees follow from m_n");
    }
    fam
}

/// Stasheff up to `4 p_max − 1`, cyclicity, ultracyclicity and the
/// predicates good, manageable and special.
pub fn verify_pinf_precy(ba: &BoundaryAlgebra, p_max: usize, mode: PermutationMode) -> Result<AxiomReport> {
    let s = ba.structure();
    let mut r = check_stasheff(s, Some((4 * p_max).saturating_sub(1).max(1)));
    r.merge(check_cyclic(s)?);
    r.merge(check_ultracyclic(s, mode)?);
    let graded = DgAlgebra::new(
        ba.base().space().clone(),
        ba.base().product().clone(),
        MultiMap::zero(vec![ba.base().space().clone()], vec![ba.base().space().clone()], 1),
    )?;
    let reference = crate::ainfty::dg_part(boundary_algebra(&graded, 0)?.structure());
    let p = crate::ainfty::classify(s, Some(&reference))?;
    for (name, ok) in [
        ("good", p.good),
        ("manageable", p.manageable == Some(true)),
        ("special", p.special),
    ] {
        r.push(CheckOutcome {
            name: format!("predicate {name}"),
            passed: ok,
            witness: None,
            failing_tuples: 0,
        });
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::nilpotent_example;
    use crate::correspondence::precy_from_bracket;
    use crate::graded::q;

    fn bracketed_d0() -> (DgAlgebra, DoubleBracket) {
        let alg = crate::corpus::algebra_corpus()
            .into_iter()
            .find(|n| n.name == "monomial truncated x^3#0")
            .unwrap()
            .value;
        let br = crate::corpus::poisson_brackets(&alg, 0, &[-1, 0, 1], 200, 7)
            .into_iter()
            .find(|b| !b.is_zero())
            .unwrap();
        (alg, br)
    }

    #[test]
    fn sign_at_p_two_is_the_degree_zero_correspondence_sign() {
        for a in -2..=2 {
            for b in -2..=2 {
                for f in -2..=2 {
                    for g in -2..=2 {
                        if (a + b + f + g) % 2 != 0 {
                            continue;
                        }
                        assert_eq!(pinfty_sign(&[a, b], &[f, g]), qsign(b * f), "{a} {b} {f} {g}");
                    }
                }
            }
        }
    }

    #[test]
    fn zero_family_gives_the_square_zero_extension() {
        let (alg, _) = nilpotent_example();
        let graded = alg.clone();
        let fam = PInfinityFamily::zero(graded);
        let ba = precy_from_pinfty(&fam, false).unwrap();
        assert_eq!(ba.structure(), boundary_algebra(&alg, 0).unwrap().structure());
        assert!(pinfty_from_precy(&ba).unwrap().is_zero());
    }

    #[test]
    fn arity_two_family_matches_the_correspondence() {
        let (alg, br) = bracketed_d0();
        let fam = PInfinityFamily::from_dpa(&alg, &br).unwrap();
        assert!(check_p_infinity(&fam, PermutationMode::Full).unwrap().passed());
        let a = precy_from_pinfty(&fam, false).unwrap();
        let b = precy_from_bracket(&alg, &br, false).unwrap();
        assert_eq!(a, b);
        assert_eq!(pinfty_from_precy(&a).unwrap(), fam);
    }

    #[test]
    fn jacobi_in_arity_one_is_d_squared() {
        let alg = DgAlgebra::builder(&[("x", 0), ("y", 1)]).unwrap().build().unwrap();
        let sp = alg.space().clone();
        let mut d = MultiMap::zero(vec![sp.clone()], vec![sp.clone()], 1);
        d.add_entry(&[0], &[1], q(1)).unwrap();
        let fam = PInfinityFamily::zero(alg).with_bracket(1, d.clone()).unwrap();
        let jac = jacobi_defect(&fam, 1).unwrap();
        assert_eq!(jac, d.compose(&d).unwrap());
    }

    #[test]
    fn nilpotent_families_round_trip() {
        for fam in crate::corpus::nilpotent_pinfty_families(0, &[0, 0, -1], &[1, 2, 3], true) {
            assert!(check_p_infinity(&fam, PermutationMode::Full).unwrap().passed());
            let ba = precy_from_pinfty(&fam, false).unwrap();
            let r = verify_pinf_precy(&ba, fam.p_max(), PermutationMode::Full).unwrap();
            assert!(r.passed(), "{r}");
            assert_eq!(pinfty_from_precy(&ba).unwrap(), fam);
        }
    }

    #[test]
    fn reduced_stasheff_matches_full_on_forced_structures() {
        let base = crate::corpus::nilpotent_pinfty_families(0, &[0, 0, -1], &[1, 2, 3], true)
            .pop()
            .unwrap();
        let sp = base.space().clone();
        for (p, w, v) in [(3usize, [0usize, 0, 1].as_slice(), [1usize, 2, 3].as_slice()), (2, &[0, 1], &[0, 1])] {
            let mut m = MultiMap::zero(vec![sp.clone(); p], vec![sp.clone(); p], 2 - p as i64);
            m.add_entry(w, v, q(1)).unwrap();
            let mut fam = base.clone();
            fam.set_bracket(p, fam.bracket_or_zero(p).add(&antisymmetrize(&m).unwrap()).unwrap())
                .unwrap();
            let ba = precy_from_pinfty(&fam, true).unwrap();
            let s = ba.structure();
            let mut nonzero = 0;
            for n in 1..=11 {
                let full = crate::ainfty::stasheff_defect(s, n);
                let reduced = if n % 2 == 0 {
                    crate::ainfty::reduced_even_defect(s, n / 2)
                } else {
                    crate::ainfty::reduced_odd_defect(s, n.div_ceil(2))
                };
                assert_eq!(full, reduced, "SI({n})");
                nonzero += usize::from(!full.is_zero());
            }
            assert!(nonzero >= 2);
        }
    }

    #[test]
    fn antisymmetrize_is_a_projection() {
        let fam = crate::corpus::nilpotent_pinfty_families(1, &[2, 0, 1], &[3], true).pop().unwrap();
        let b = fam.bracket(3).unwrap();
        assert_eq!(&antisymmetrize(b).unwrap(), b);
        for sigma in Permutation::all(3) {
            assert!(antisymmetry_defect(&fam, 3, &sigma).unwrap().is_zero());
        }
    }
}
