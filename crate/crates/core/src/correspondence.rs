//! The square-zero extension `A ⊕ A#[d−1]` and the bijection between double
//! Poisson brackets of degree `−d` and nice fully manageable `d`-pre-Calabi-Yau
//! structures on it.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::ainfty::{
    self, check_cyclic, check_stasheff, classify, gamma_sectors, natural_form, AInfinity, Part,
    Predicates,
};
use crate::dpa::{check_double_poisson, DgAlgebra, DoubleBracket};
use crate::error::{Error, Result};
use crate::graded::{qsign, GradedSpace, MultiMap, Space, Word, Q};
use crate::report::{AxiomReport, CheckOutcome};

/// `A ⊕ A#[d−1]` with its dg algebra operations, the natural form of degree
/// `d − 1`, and possibly higher operations. Index `i < dim A` is `e_i`;
/// index `dim A + i` is `t e_i*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryAlgebra {
    base: DgAlgebra,
    d: i64,
    structure: AInfinity,
}

impl BoundaryAlgebra {
    pub(crate) fn from_parts(base: DgAlgebra, d: i64, structure: AInfinity) -> Self {
        Self { base, d, structure }
    }

    pub fn base(&self) -> &DgAlgebra {
        &self.base
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn structure(&self) -> &AInfinity {
        &self.structure
    }

    pub fn into_structure(self) -> AInfinity {
        self.structure
    }

    pub fn space(&self) -> &Space {
        self.structure.space()
    }

    /// Index of `t e_i*` in the total space.
    pub fn dual_index(&self, i: usize) -> usize {
        self.base.dim() + i
    }

    pub fn m3(&self) -> MultiMap {
        self.structure.op_or_zero(3)
    }

    /// The plain square-zero extension on the same data, against which
    /// manageability is measured.
    pub fn reference(&self) -> AInfinity {
        ainfty::dg_part(boundary_algebra(&self.base, self.d).expect("base validated").structure())
    }

    pub fn classify(&self) -> Result<Predicates> {
        classify(&self.structure, Some(&self.reference()))
    }

    /// Replaces `m_n`; used to inject operations or mutations.
    pub fn with_op(mut self, n: usize, op: MultiMap) -> Result<Self> {
        self.structure.set_op(n, op)?;
        Ok(self)
    }

    /// Reads a structure on `A ⊕ A#[d−1]` back as a boundary algebra: the
    /// base is the restriction of `m_1` and `m_2` to the leading part, and
    /// `d` is one more than the degree of the form.
    pub fn from_structure(structure: AInfinity) -> Result<Self> {
        let form = structure
            .form()
            .ok_or_else(|| Error::Missing("a boundary algebra carries the natural form".into()))?;
        let d = form.degree() + 1;
        let total = structure.space().clone();
        let n = structure.parts().iter().filter(|&&p| p == Part::A).count();
        if total.dim() != 2 * n || structure.parts()[..n].iter().any(|&p| p != Part::A) {
            return Err(Error::Schema(
                "expected the leading part first, then an equally long dual part".into(),
            ));
        }
        let a = GradedSpace::new(total.basis()[..n].to_vec())?.into_shared();
        let (expected, parts, nat) = natural_form(&a, d - 1);
        if expected.basis() != total.basis() || parts != structure.parts() || form != &nat {
            return Err(Error::Schema(
                "space and form do not match A ⊕ A#[d−1] with its natural form".into(),
            ));
        }
        let restrict = |m: &MultiMap, arity: usize, degree: i64| -> MultiMap {
            let mut out = MultiMap::zero(vec![a.clone(); arity], vec![a.clone()], degree);
            for (w, o) in m.entries() {
                if w.iter().all(|&i| i < n) {
                    for (v, c) in o {
                        if v[0] < n {
                            out.push(w.clone(), v.clone(), c.clone());
                        }
                    }
                }
            }
            out
        };
        let product = restrict(&structure.op_or_zero(2), 2, 0);
        let differential = restrict(&structure.op_or_zero(1), 1, 1);
        let base = DgAlgebra::new(a, product, differential)?;
        let report = base.validate();
        if !report.passed() {
            return Err(Error::Precondition(format!(
                "leading part is not a dg algebra: {}",
                report.failed_names().join(", ")
            )));
        }
        Ok(Self { base, d, structure })
    }
}

struct Tables {
    /// `mul[(x, y)] = Σ_z c_z e_z`
    mul: BTreeMap<(usize, usize), BTreeMap<usize, Q>>,
}

impl Tables {
    fn new(alg: &DgAlgebra) -> Self {
        let mut mul = BTreeMap::new();
        for (w, o) in alg.product().entries() {
            mul.insert((w[0], w[1]), o.iter().map(|(v, c)| (v[0], c.clone())).collect());
        }
        Self { mul }
    }

    fn coeff(&self, x: usize, y: usize, z: usize) -> Q {
        self.mul
            .get(&(x, y))
            .and_then(|m| m.get(&z))
            .cloned()
            .unwrap_or_else(Q::zero)
    }
}

fn linear_images(f: &MultiMap) -> Vec<BTreeMap<usize, Q>> {
    let mut out = vec![BTreeMap::new(); f.domain()[0].dim()];
    for (w, o) in f.entries() {
        out[w[0]] = o.iter().map(|(v, c)| (v[0], c.clone())).collect();
    }
    out
}

/// `m_1` and `m_2` of the square-zero extension `A ⊕ B#[d−1]`, where `B#` is
/// an `A`-bimodule through the dg morphism `φ: A → B`. The total space is
/// `total`, with `A` first and `t e_i*` at `dim A + i`.
pub(crate) fn dual_extension(
    a: &DgAlgebra,
    b: &DgAlgebra,
    phi: &MultiMap,
    d: i64,
    total: &Space,
) -> (MultiMap, MultiMap) {
    let na = a.dim();
    let nb = b.dim();
    let bt = Tables::new(b);
    let phi_img = linear_images(phi);
    let shift = d - 1;
    let mut m2 = MultiMap::zero(vec![total.clone(); 2], vec![total.clone()], 0);
    for (w, o) in a.product().entries() {
        m2.push_tensor(w.clone(), o);
    }
    for x in 0..na {
        let ax = a.degree(x);
        for i in 0..nb {
            // x · t e_i* = (−1)^{(d−1)|x|} t(φ(x) · e_i*),
            // (φ(x) · e_i*)(c) = (−1)^{|x|} e_i*(c φ(x))
            let left = qsign(shift * ax + ax);
            for c in 0..nb {
                let mut acc = Q::zero();
                for (k, p) in &phi_img[x] {
                    acc += p * bt.coeff(c, *k, i);
                }
                if !acc.is_zero() {
                    m2.push(
                        Word::from_slice(&[x, na + i]),
                        Word::from_slice(&[na + c]),
                        &acc * &left,
                    );
                }
            }
            // t e_i* · x = t(e_i* · φ(x)), (e_i* · φ(x))(c) = e_i*(φ(x) c)
            for c in 0..nb {
                let mut acc = Q::zero();
                for (k, p) in &phi_img[x] {
                    acc += p * bt.coeff(*k, c, i);
                }
                if !acc.is_zero() {
                    m2.push(Word::from_slice(&[na + i, x]), Word::from_slice(&[na + c]), acc);
                }
            }
        }
    }
    let mut m1 = MultiMap::zero(vec![total.clone()], vec![total.clone()], 1);
    for (w, o) in a.differential().entries() {
        m1.push_tensor(w.clone(), o);
    }
    // m_1(t h) = (−1)^{|h|+d} t(h ∘ ∂), with (e_i* ∘ ∂)(e_j) = [e_i in ∂ e_j]
    for (w, o) in b.differential().entries() {
        let j = w[0];
        for (v, c) in o {
            let i = v[0];
            let h = -b.degree(i);
            m1.push(
                Word::from_slice(&[na + i]),
                Word::from_slice(&[na + j]),
                c * qsign(h + d),
            );
        }
    }
    (m1, m2)
}

/// The square-zero extension `A ⊕ A#[d−1]` with the natural form of degree
/// `d − 1` and no higher operations.
pub fn boundary_algebra(alg: &DgAlgebra, d: i64) -> Result<BoundaryAlgebra> {
    let report = alg.validate();
    if !report.passed() {
        return Err(Error::Precondition(format!(
            "not a dg algebra: {}",
            report.failed_names().join(", ")
        )));
    }
    let (total, parts, form) = natural_form(alg.space(), d - 1);
    let id = MultiMap::identity(alg.space().clone());
    let (m1, m2) = dual_extension(alg, alg, &id, d, &total);
    let mut s = AInfinity::new(total, parts, Some(form))?;
    s.set_op(1, m1)?;
    s.set_op(2, m2)?;
    Ok(BoundaryAlgebra {
        base: alg.clone(),
        d,
        structure: s,
    })
}

/// `s_{f,g}^{a,b} = (−1)^{|b|(|a|+|g|+1)}`, with `|f|, |g|` degrees in `A#`.
pub fn correspondence_sign(a: i64, b: i64, g: i64) -> Q {
    qsign(b * (a + g + 1))
}

/// Completes an operation given on the alternating `A`-leading sector
/// `(A, D, …, A)` to the `D`-leading sector `(D, A, …, D)` by the cyclic
/// relation against the natural form.
pub(crate) fn complete_by_rotation(leading: &MultiMap, na: usize) -> MultiMap {
    let total = leading.domain()[0].clone();
    let n = leading.arity();
    let deg = |i: usize| total.degree(i);
    let mut out = leading.clone();
    for (w, o) in leading.entries() {
        // w = (a_0, …, a_{n−1}) ↦ Σ μ_k e_k, paired with a_n = t e_k*
        let a0 = w[0];
        for (v, mu) in o {
            let k = v[0];
            debug_assert!(a0 < na && k < na);
            let tk = na + k;
            let gamma_k = qsign(deg(k) * deg(tk));
            let rest: i64 = w[1..].iter().map(|&i| deg(i)).sum::<i64>() + deg(tk);
            let sign = qsign(n as i64 + deg(a0) * rest);
            let mut u = Word::from_slice(&w[1..]);
            u.push(tk);
            out.push(u, Word::from_slice(&[na + a0]), mu * gamma_k * sign);
        }
    }
    out
}

/// `m_3` on `A ⊗ A#[d−1] ⊗ A` read off from the bracket, completed to
/// `A#[d−1] ⊗ A ⊗ A#[d−1]` by cyclicity.
pub fn m3_from_bracket(ba: &BoundaryAlgebra, br: &DoubleBracket) -> MultiMap {
    let na = ba.base.dim();
    let d = ba.d;
    let total = ba.space().clone();
    let a = ba.base.space();
    let mut ada = MultiMap::zero(vec![total.clone(); 3], vec![total.clone()], -1);
    for (w, o) in br.table().entries() {
        let (ia, ib) = (w[0], w[1]);
        for (v, c) in o {
            let (k, l) = (v[0], v[1]);
            let (ek, el) = (a.degree(k), a.degree(l));
            // (e_k* ⊗ e_l*)(⟨a,b⟩) = (−1)^{|e_l||e_k|} c and
            // γ(m_3(b, t e_l*, a), t e_k*) = (−1)^{|e_k| d} μ_k
            let s = correspondence_sign(a.degree(ia), a.degree(ib), -el);
            let mu = c * qsign(ek * el + ek * d) * s;
            ada.push(
                Word::from_slice(&[ib, na + l, ia]),
                Word::from_slice(&[k]),
                mu,
            );
        }
    }
    complete_by_rotation(&ada, na)
}

/// The nice fully manageable pre-CY structure attached to `br`. With
/// `force`, brackets failing the double Poisson axioms are accepted and the
/// output is expected to fail some Stasheff or cyclic identity.
pub fn precy_from_bracket(alg: &DgAlgebra, br: &DoubleBracket, force: bool) -> Result<BoundaryAlgebra> {
    if br.space() != alg.space() {
        return Err(Error::SpaceMismatch("bracket and algebra live on different spaces".into()));
    }
    let report = check_double_poisson(alg, br)?;
    if !report.passed() && !force {
        return Err(Error::Precondition(format!(
            "bracket is not double Poisson: {}",
            report.failed_names().join(", ")
        )));
    }
    let ba = boundary_algebra(alg, br.d())?;
    let m3 = m3_from_bracket(&ba, br);
    ba.with_op(3, m3)
}

/// Checks the predicates required for extraction.
pub fn require_extractable(ba: &BoundaryAlgebra) -> Result<()> {
    let p = ba.classify()?;
    p.require(&["nice", "fully_manageable", "good", "leading_subalgebra"])?;
    let cyc = check_cyclic(ba.structure())?;
    if let Some(f) = cyc.first_failure() {
        return Err(Error::Precondition(format!("structure is not cyclic: {} fails", f.name)));
    }
    Ok(())
}

/// Reads the double bracket off `m_3(b, t g, a)`.
pub fn bracket_from_precy(ba: &BoundaryAlgebra) -> Result<DoubleBracket> {
    require_extractable(ba)?;
    Ok(bracket_from_m3(ba))
}

pub(crate) fn bracket_from_m3(ba: &BoundaryAlgebra) -> DoubleBracket {
    let na = ba.base.dim();
    let d = ba.d;
    let a = ba.base.space().clone();
    let mut table = MultiMap::zero(vec![a.clone(), a.clone()], vec![a.clone(), a.clone()], -d);
    if let Some(m3) = ba.structure.op(3) {
        for (w, o) in m3.entries() {
            let (ib, tl, ia) = (w[0], w[1], w[2]);
            if ib >= na || tl < na || ia >= na {
                continue;
            }
            let l = tl - na;
            for (v, mu) in o {
                let k = v[0];
                let (ek, el) = (a.degree(k), a.degree(l));
                let s = correspondence_sign(a.degree(ia), a.degree(ib), -el);
                table.push(
                    Word::from_slice(&[ia, ib]),
                    Word::from_slice(&[k, l]),
                    mu * qsign(ek * el + ek * d) * s,
                );
            }
        }
    }
    DoubleBracket::new(d, table).expect("shape is fixed")
}

pub const SI4_SECTOR: &str = "AADAD";
pub const SI5_SECTOR: &str = "ADADAD";

/// Compares vanishing of SI(n)_γ on its distinguished sector with vanishing
/// on every sector, for `n ∈ {4, 5}`.
pub fn sector_reduction_check(ba: &BoundaryAlgebra, n: usize) -> Result<AxiomReport> {
    let sector = match n {
        4 => SI4_SECTOR,
        5 => SI5_SECTOR,
        _ => return Err(Error::Precondition(format!("sector reduction is stated for n = 4, 5, not {n}"))),
    };
    ba.classify()?.require(&["good", "small", "manageable"])?;
    let sectors = gamma_sectors(ba.structure(), n)?;
    let mut r = AxiomReport::new();
    let dist = sectors.get(sector);
    match dist {
        Some(m) => r.push_defect(format!("SI({n})_γ[{sector}]"), m),
        None => r.push(CheckOutcome::pass(format!("SI({n})_γ[{sector}]"))),
    }
    let mut others = AxiomReport::new();
    for (name, m) in &sectors {
        others.push_defect(format!("SI({n})_γ[{name}]"), m);
    }
    let all_zero = sectors.is_empty();
    let dist_zero = dist.is_none();
    if all_zero {
        r.push(CheckOutcome::pass(format!("SI({n})_γ[all]")));
    } else {
        let first = others.first_failure().expect("some sector is nonzero").clone();
        r.push(CheckOutcome {
            name: format!("SI({n})_γ[all]"),
            ..first
        });
    }
    let agree = CheckOutcome {
        name: format!("SI({n})_γ sector reduction"),
        passed: all_zero == dist_zero,
        witness: None,
        failing_tuples: 0,
    };
    r.push(agree);
    let names: Vec<&str> = sectors.keys().map(String::as_str).collect();
    if !names.is_empty() {
        r.note(format!("nonzero sectors of SI({n})_γ: {}", names.join(", ")));
    }
    Ok(r)
}

/// The checks used by the axiom dictionary, in the order in which a first
/// failure is reported: SI(1)–SI(3), cyclicity at n = 3, then the
/// distinguished sectors of SI(4)_γ and SI(5)_γ.
pub fn dictionary_report(ba: &BoundaryAlgebra) -> Result<AxiomReport> {
    let s = ba.structure();
    let mut r = check_stasheff(s, Some(3));
    r.push_defect("cyclic(3)", &ainfty::cyclic_defect(s, 3)?);
    r.push_defect(
        format!("SI(4)_γ[{SI4_SECTOR}]"),
        &ainfty::stasheff_gamma_defect(s, 4, SI4_SECTOR)?,
    );
    r.push_defect(
        format!("SI(5)_γ[{SI5_SECTOR}]"),
        &ainfty::stasheff_gamma_defect(s, 5, SI5_SECTOR)?,
    );
    Ok(r)
}

/// Full verification of a constructed structure: Stasheff up to `n_max`,
/// cyclicity, and the predicates.
pub fn verify_precy(ba: &BoundaryAlgebra, n_max: usize) -> Result<AxiomReport> {
    let mut r = check_stasheff(ba.structure(), Some(n_max));
    r.merge(check_cyclic(ba.structure())?);
    let p = ba.classify()?;
    for (name, ok) in [
        ("nice", p.nice),
        ("good", p.good),
        ("fully_manageable", p.fully_manageable == Some(true)),
        ("leading_subalgebra", p.leading_subalgebra),
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
    use crate::graded::q;

    fn nilpotent_pair() -> (DgAlgebra, DoubleBracket) {
        let alg = DgAlgebra::builder(&[("x", 0), ("y", -1)]).unwrap().build().unwrap();
        let br = DoubleBracket::zero(alg.space().clone(), 2)
            .with("x", "x", &[(q(1), "y", "y")])
            .unwrap();
        (alg, br)
    }

    #[test]
    fn square_zero_extension_is_precy() {
        let alg = DgAlgebra::builder(&[("e", 0), ("u", 1)])
            .unwrap()
            .mul("e", "e", &[(q(1), "e")])
            .unwrap()
            .mul("e", "u", &[(q(1), "u")])
            .unwrap()
            .mul("u", "e", &[(q(1), "u")])
            .unwrap()
            .build()
            .unwrap();
        for d in -1..=2 {
            let ba = boundary_algebra(&alg, d).unwrap();
            let r = check_stasheff(ba.structure(), Some(5));
            assert!(r.passed(), "d = {d}\n{r}");
            let c = check_cyclic(ba.structure()).unwrap();
            assert!(c.passed(), "d = {d}\n{c}");
        }
    }

    #[test]
    fn nontrivial_bracket_round_trips() {
        let (alg, br) = nilpotent_pair();
        assert!(check_double_poisson(&alg, &br).unwrap().passed());
        let ba = precy_from_bracket(&alg, &br, false).unwrap();
        let r = verify_precy(&ba, 7).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(bracket_from_precy(&ba).unwrap(), br);
    }

    #[test]
    fn zero_bracket_gives_plain_extension() {
        let (alg, _) = nilpotent_pair();
        let ba = precy_from_bracket(&alg, &DoubleBracket::zero(alg.space().clone(), 0), false).unwrap();
        assert!(ba.m3().is_zero());
        assert_eq!(ba.structure(), &boundary_algebra(&alg, 0).unwrap().into_structure());
    }

    #[test]
    fn sign_on_shell() {
        // |f| + |g| = |a| + |b| + d
        for a in -2..=2 {
            for b in -2..=2 {
                for f in -2..=2 {
                    for d in -1..=2 {
                        let g = a + b + d - f;
                        assert_eq!(correspondence_sign(a, b, g), qsign(b * (f + d)));
                    }
                }
            }
        }
    }

    #[test]
    fn structure_reads_back() {
        let (alg, br) = nilpotent_pair();
        let ba = precy_from_bracket(&alg, &br, false).unwrap();
        let again = BoundaryAlgebra::from_structure(ba.structure().clone()).unwrap();
        assert_eq!(again, ba);
    }
}
