//! Finite A∞-structures on a space split as `B = B₀ ⊕ B₁`: Stasheff
//! identities, cyclic and ultracyclic invariance for a bilinear form,
//! morphism identities and the structural predicates.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graded::{
    all_words, dual_shift_space, permute_basis_word, qsign, word_degree, GradedSpace,
    MultiMap, Permutation, Space, Word, Q,
};
use crate::linalg;
use crate::report::{AxiomReport, Witness};

/// Which summand of the splitting a basis vector belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Part {
    /// The leading summand `B₀` (the algebra `A`).
    A,
    /// The second summand `B₁` (the dual part `A#[d−1]`).
    D,
}

impl Part {
    pub fn letter(self) -> char {
        match self {
            Part::A => 'A',
            Part::D => 'D',
        }
    }

    pub fn from_letter(c: char) -> Result<Part> {
        match c {
            'A' | 'a' => Ok(Part::A),
            'D' | 'd' => Ok(Part::D),
            _ => Err(Error::Schema(format!("unknown part letter `{c}`"))),
        }
    }
}

/// A bilinear form `γ: B ⊗ B → k` of a fixed degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearForm {
    table: MultiMap,
}

impl BilinearForm {
    pub fn new(table: MultiMap) -> Result<Self> {
        let dom = table.domain();
        if dom.len() != 2 || dom[0] != dom[1] || !table.codomain().is_empty() {
            return Err(Error::SpaceMismatch("a bilinear form maps B⊗B to k".into()));
        }
        Ok(Self { table })
    }

    pub fn zero(space: Space, degree: i64) -> Self {
        Self {
            table: MultiMap::zero(vec![space.clone(), space], Vec::new(), degree),
        }
    }

    pub fn degree(&self) -> i64 {
        self.table.degree()
    }

    pub fn table(&self) -> &MultiMap {
        &self.table
    }

    pub fn space(&self) -> &Space {
        &self.table.domain()[0]
    }

    pub fn value(&self, i: usize, j: usize) -> Q {
        self.table.value(&[i, j])
    }

    /// Defect of `γ ∘ τ = γ`.
    pub fn supersymmetry_defect(&self) -> MultiMap {
        let swap = Permutation::transposition(2, 0, 1);
        let t = self.table.permute_inputs(&swap).expect("arity 2");
        t.sub(&self.table).expect("same shape")
    }

    /// Whether the pairing matrix is invertible in each degree.
    pub fn is_nondegenerate(&self) -> bool {
        let sp = self.space();
        for deg in sp.degree_set() {
            let rows = sp.indices_of_degree(deg);
            let cols = sp.indices_of_degree(-deg - self.degree());
            if rows.len() != cols.len() {
                return false;
            }
            let m: linalg::Matrix = rows
                .iter()
                .map(|&i| cols.iter().map(|&j| self.value(i, j)).collect())
                .collect();
            if linalg::rank(&m, cols.len()) != rows.len() {
                return false;
            }
        }
        true
    }

    /// For each `i`, the list of `(j, γ(e_i, e_j))` with nonzero value.
    pub(crate) fn right_partners(&self) -> Vec<Vec<(usize, Q)>> {
        let mut out = vec![Vec::new(); self.space().dim()];
        for (w, o) in self.table.entries() {
            if let Some(c) = o.get(&Word::new()) {
                out[w[0]].push((w[1], c.clone()));
            }
        }
        out
    }
}

/// The space `A ⊕ A#[shift]` with its splitting and the natural form
/// `γ(tf, a) = f(a)`, `γ(a, tf) = (−1)^{|a||tf|} f(a)`, zero on `A⊗A` and
/// on `A#⊗A#`. The dual basis `t e_i*` follows the basis of `A`.
pub fn natural_form(a: &GradedSpace, shift: i64) -> (Space, Vec<Part>, BilinearForm) {
    let dual = dual_shift_space(a, shift);
    let total = a
        .direct_sum(&dual)
        .expect("dual symbols are decorated and cannot clash")
        .into_shared();
    let n = a.dim();
    let mut parts = vec![Part::A; n];
    parts.extend(std::iter::repeat_n(Part::D, n));
    let mut form = MultiMap::zero(vec![total.clone(), total.clone()], Vec::new(), shift);
    for i in 0..n {
        let tf = total.degree(n + i);
        let ai = total.degree(i);
        form.push(Word::from_slice(&[n + i, i]), Word::new(), Q::one());
        form.push(Word::from_slice(&[i, n + i]), Word::new(), qsign(ai * tf));
    }
    (total, parts, BilinearForm { table: form })
}

/// A finite family `{m_n}` on a split space, with an optional form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AInfinity {
    space: Space,
    parts: Vec<Part>,
    ops: BTreeMap<usize, MultiMap>,
    form: Option<BilinearForm>,
}

impl AInfinity {
    pub fn new(space: Space, parts: Vec<Part>, form: Option<BilinearForm>) -> Result<Self> {
        if parts.len() != space.dim() {
            return Err(Error::Dimension(format!(
                "{} part tags for a space of dimension {}",
                parts.len(),
                space.dim()
            )));
        }
        if let Some(f) = &form {
            if f.space() != &space {
                return Err(Error::SpaceMismatch("form lives on another space".into()));
            }
        }
        Ok(Self {
            space,
            parts,
            ops: BTreeMap::new(),
            form,
        })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn parts(&self) -> &[Part] {
        &self.parts
    }

    pub fn part(&self, i: usize) -> Part {
        self.parts[i]
    }

    pub fn form(&self) -> Option<&BilinearForm> {
        self.form.as_ref()
    }

    pub fn set_form(&mut self, form: Option<BilinearForm>) -> Result<()> {
        if let Some(f) = &form {
            if f.space() != &self.space {
                return Err(Error::SpaceMismatch("form lives on another space".into()));
            }
        }
        self.form = form;
        Ok(())
    }

    pub fn ops(&self) -> &BTreeMap<usize, MultiMap> {
        &self.ops
    }

    /// Installs `m_n`; zero maps are removed so that absent means zero.
    pub fn set_op(&mut self, n: usize, op: MultiMap) -> Result<()> {
        if n == 0 {
            return Err(Error::Dimension("operations have arity at least 1".into()));
        }
        if op.domain().len() != n
            || op.domain().iter().any(|s| s != &self.space)
            || op.codomain() != [self.space.clone()]
        {
            return Err(Error::SpaceMismatch(format!("m_{n} must map B^⊗{n} to B")));
        }
        if op.is_zero() {
            self.ops.remove(&n);
            return Ok(());
        }
        let expected = 2 - n as i64;
        if op.degree() != expected {
            return Err(Error::Degree(format!(
                "m_{n} has degree {}, expected {expected}",
                op.degree()
            )));
        }
        op.check_homogeneity()?;
        self.ops.insert(n, op);
        Ok(())
    }

    pub fn with_op(mut self, n: usize, op: MultiMap) -> Result<Self> {
        self.set_op(n, op)?;
        Ok(self)
    }

    pub fn op(&self, n: usize) -> Option<&MultiMap> {
        self.ops.get(&n)
    }

    /// `m_n`, or the zero map of the right shape.
    pub fn op_or_zero(&self, n: usize) -> MultiMap {
        self.ops
            .get(&n)
            .cloned()
            .unwrap_or_else(|| self.zero_op(n))
    }

    pub fn zero_op(&self, n: usize) -> MultiMap {
        MultiMap::zero(vec![self.space.clone(); n], vec![self.space.clone()], 2 - n as i64)
    }

    pub fn max_arity(&self) -> usize {
        self.ops.keys().next_back().copied().unwrap_or(0)
    }

    pub fn sector_of(&self, word: &[usize]) -> String {
        word.iter().map(|&i| self.parts[i].letter()).collect()
    }
}

/// Left side of SI(n): `Σ (−1)^{r+st} m_{r+1+t} ∘ (id^r ⊗ m_s ⊗ id^t)`.
pub fn stasheff_defect(s: &AInfinity, n: usize) -> MultiMap {
    let mut out = MultiMap::zero(vec![s.space.clone(); n], vec![s.space.clone()], 3 - n as i64);
    for (&k, outer) in &s.ops {
        if k > n {
            continue;
        }
        let sarity = n + 1 - k;
        let Some(inner) = s.ops.get(&sarity) else {
            continue;
        };
        for r in 0..k {
            let t = k - 1 - r;
            let term = outer.compose_at(r, inner).expect("shapes agree");
            let sign = qsign((r + sarity * t) as i64);
            out.add_scaled(&term, &sign).expect("shapes agree");
        }
    }
    out
}

/// Default bound for Stasheff checks: `2·max_arity − 1`, beyond which every
/// term of SI(n) involves a vanishing operation.
pub fn default_n_max(s: &AInfinity) -> usize {
    (2 * s.max_arity()).saturating_sub(1).max(1)
}

pub fn check_stasheff(s: &AInfinity, n_max: Option<usize>) -> AxiomReport {
    let n_max = n_max.unwrap_or_else(|| default_n_max(s));
    let mut r = AxiomReport::new();
    for n in 1..=n_max {
        r.push_defect(format!("SI({n})"), &stasheff_defect(s, n));
    }
    r
}

/// SI(2p) for an essentially odd structure:
/// `Σ_{r=0}^{2p−2} (−1)^r m_{2p−1}(id^r ⊗ m_2 ⊗ id^{2p−2−r}) − m_2(m_{2p−1} ⊗ id + id ⊗ m_{2p−1})`.
pub fn reduced_even_defect(s: &AInfinity, p: usize) -> MultiMap {
    assert!(p >= 1);
    let n = 2 * p;
    let mut out = MultiMap::zero(vec![s.space.clone(); n], vec![s.space.clone()], 3 - n as i64);
    let (Some(m2), Some(mo)) = (s.op(2), s.op(2 * p - 1)) else {
        return out;
    };
    for r in 0..=2 * (p - 1) {
        let term = mo.compose_at(r, m2).expect("shapes agree");
        out.add_scaled(&term, &qsign(r as i64)).expect("shapes agree");
    }
    for r in 0..2 {
        let term = m2.compose_at(r, mo).expect("shapes agree");
        out.add_scaled(&term, &-Q::one()).expect("shapes agree");
    }
    out
}

/// SI(2p − 1) for an essentially odd structure:
/// `δ_{p,2} m_2(m_2 ⊗ id − id ⊗ m_2) + Σ_{i=1}^{p} Σ_{r=0}^{2(i−1)} m_{2i−1}(id^r ⊗ m_{2(p−i)+1} ⊗ id^{2(i−1)−r})`.
pub fn reduced_odd_defect(s: &AInfinity, p: usize) -> MultiMap {
    assert!(p >= 1);
    let n = 2 * p - 1;
    let mut out = MultiMap::zero(vec![s.space.clone(); n], vec![s.space.clone()], 3 - n as i64);
    if p == 2 {
        if let Some(m2) = s.op(2) {
            out.add_assign(&m2.compose_at(0, m2).expect("shapes agree")).expect("shape");
            out.add_scaled(&m2.compose_at(1, m2).expect("shapes agree"), &-Q::one())
                .expect("shape");
        }
    }
    for i in 1..=p {
        let (Some(outer), Some(inner)) = (s.op(2 * i - 1), s.op(2 * (p - i) + 1)) else {
            continue;
        };
        for r in 0..=2 * (i - 1) {
            out.add_assign(&outer.compose_at(r, inner).expect("shapes agree"))
                .expect("shape");
        }
    }
    out
}

fn need_form(s: &AInfinity) -> Result<&BilinearForm> {
    s.form
        .as_ref()
        .ok_or_else(|| Error::Missing("the structure carries no bilinear form".into()))
}

/// `G(y_1, …, y_{n+1}) = γ(m(y_1, …, y_n), y_{n+1})` as a scalar map.
fn pair_with_form(m: &MultiMap, form: &BilinearForm) -> MultiMap {
    let n = m.arity();
    let space = form.space().clone();
    let partners = form.right_partners();
    let mut out = MultiMap::zero(vec![space.clone(); n + 1], Vec::new(), m.degree() + form.degree());
    for (w, o) in m.entries() {
        for (v, c) in o {
            for (j, g) in &partners[v[0]] {
                let mut u = w.clone();
                u.push(*j);
                out.push(u, Word::new(), c * g);
            }
        }
    }
    out
}

/// All sector strings of the given length, lexicographic.
pub fn all_sectors(len: usize) -> Vec<String> {
    (0..1usize << len)
        .map(|code| {
            (0..len)
                .map(|i| if code >> (len - 1 - i) & 1 == 0 { 'A' } else { 'D' })
                .collect()
        })
        .collect()
}

/// SI(n)_γ restricted to the basis tuples whose parts spell `sector`
/// (length n + 1). An empty sector string means no restriction.
pub fn stasheff_gamma_defect(s: &AInfinity, n: usize, sector: &str) -> Result<MultiMap> {
    let form = need_form(s)?;
    let pattern: Vec<Part> = sector.chars().map(Part::from_letter).collect::<Result<_>>()?;
    if !pattern.is_empty() && pattern.len() != n + 1 {
        return Err(Error::Dimension(format!(
            "sector `{sector}` has length {}, SI({n})_γ takes {} arguments",
            pattern.len(),
            n + 1
        )));
    }
    let g = pair_with_form(&stasheff_defect(s, n), form);
    if pattern.is_empty() {
        return Ok(g);
    }
    Ok(g.restricted(|w| w.iter().zip(&pattern).all(|(&i, p)| s.parts[i] == *p)))
}

/// Nonzero sectors of SI(n)_γ, each with its restricted defect.
pub fn gamma_sectors(s: &AInfinity, n: usize) -> Result<BTreeMap<String, MultiMap>> {
    let form = need_form(s)?;
    let g = pair_with_form(&stasheff_defect(s, n), form);
    let mut out: BTreeMap<String, MultiMap> = BTreeMap::new();
    for (w, o) in g.entries() {
        let key = s.sector_of(w);
        let slot = out
            .entry(key)
            .or_insert_with(|| MultiMap::zero(g.domain().to_vec(), Vec::new(), g.degree()));
        slot.push_tensor(w.clone(), o);
    }
    Ok(out)
}

/// Cyclic invariance: for each stored `m_n`, the defect of
/// `γ(m_n(a_1..a_n), a_0) − (−1)^{n + |a_0| Σ|a_i|} γ(m_n(a_0..a_{n−1}), a_n)`
/// indexed by `(a_0, …, a_n)`.
pub fn cyclic_defect(s: &AInfinity, n: usize) -> Result<MultiMap> {
    let form = need_form(s)?;
    let space = s.space.clone();
    let m = s.op_or_zero(n);
    let g = pair_with_form(&m, form);
    let mut candidates: BTreeSet<Word> = BTreeSet::new();
    for u in g.entries().keys() {
        candidates.insert(u.clone());
        let mut t = Word::from_slice(&[u[n]]);
        t.extend_from_slice(&u[..n]);
        candidates.insert(t);
    }
    let mut out = MultiMap::zero(vec![space.clone(); n + 1], Vec::new(), g.degree());
    for t in candidates {
        // t = (a_0, …, a_n)
        let mut lhs_word = Word::from_slice(&t[1..]);
        lhs_word.push(t[0]);
        let a0 = space.degree(t[0]);
        let rest: i64 = t[1..].iter().map(|&i| space.degree(i)).sum();
        let sign = qsign(n as i64 + a0 * rest);
        let v = g.value(&lhs_word) - sign * g.value(&t);
        out.push(t, Word::new(), v);
    }
    Ok(out)
}

/// Super-symmetry of the form plus cyclic invariance of every stored
/// operation. Nondegeneracy is reported as a note.
pub fn check_cyclic(s: &AInfinity) -> Result<AxiomReport> {
    let form = need_form(s)?;
    let mut r = AxiomReport::new();
    r.push_defect("form_supersymmetric", &form.supersymmetry_defect());
    for &n in s.ops.keys() {
        r.push_defect(format!("cyclic({n})"), &cyclic_defect(s, n)?);
    }
    r.note(format!(
        "form of degree {} is {}",
        form.degree(),
        if form.is_nondegenerate() { "nondegenerate" } else { "degenerate" }
    ));
    Ok(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PermutationMode {
    /// Adjacent transpositions only.
    Generators,
    /// Every permutation.
    Full,
}

impl fmt::Display for PermutationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PermutationMode::Generators => "generators",
            PermutationMode::Full => "full",
        })
    }
}

impl std::str::FromStr for PermutationMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "generators" => Ok(PermutationMode::Generators),
            "full" => Ok(PermutationMode::Full),
            _ => Err(Error::Schema(format!("unknown permutation mode `{s}`"))),
        }
    }
}

pub fn permutations(n: usize, mode: PermutationMode) -> Vec<Permutation> {
    match mode {
        PermutationMode::Generators => Permutation::adjacent_generators(n),
        PermutationMode::Full => Permutation::all(n)
            .into_iter()
            .filter(|p| !p.is_identity())
            .collect(),
    }
}

/// Defect of the ultracyclic identity for `m_{2n−1}` and a fixed ς ∈ S_n,
/// indexed by `(a_1, b_1, …, a_n, b_n)`.
pub fn ultracyclic_defect(s: &AInfinity, n: usize, varsigma: &Permutation) -> Result<MultiMap> {
    let form = need_form(s)?;
    let space = s.space.clone();
    let g = pair_with_form(&s.op_or_zero(2 * n - 1), form);
    let nat = varsigma.inverse().interleave();
    let factors = vec![space.clone(); 2 * n];
    let mut candidates: BTreeSet<Word> = BTreeSet::new();
    let back = nat.inverse();
    for u in g.entries().keys() {
        candidates.insert(u.clone());
        candidates.insert(back.permute_word(u));
    }
    let mut out = MultiMap::zero(factors.clone(), Vec::new(), g.degree());
    for u in candidates {
        let (v, sg) = permute_basis_word(&nat, &factors, &u);
        let val = g.value(&v) - Q::from_integer(sg.into()) * g.value(&u);
        out.push(u, Word::new(), val);
    }
    Ok(out)
}

pub fn check_ultracyclic(s: &AInfinity, mode: PermutationMode) -> Result<AxiomReport> {
    need_form(s)?;
    if let Some(k) = even_arity_above_two(s) {
        return Err(Error::Precondition(format!(
            "ultracyclicity needs an essentially odd structure, m_{k} ≠ 0"
        )));
    }
    let mut r = AxiomReport::new();
    let top = s.ops.keys().filter(|&&k| k % 2 == 1).max().copied().unwrap_or(1);
    for n in 2..=top.div_ceil(2) {
        for sigma in permutations(n, mode) {
            r.push_defect(
                format!("ultracyclic({n}, {sigma})"),
                &ultracyclic_defect(s, n, &sigma)?,
            );
        }
    }
    r.note(format!("ultracyclicity checked in {mode} mode"));
    Ok(r)
}

fn even_arity_above_two(s: &AInfinity) -> Option<usize> {
    s.ops.keys().copied().find(|&k| k % 2 == 0 && k > 2)
}

/// Whether a part pattern alternates.
pub fn is_alternating(parts: &[Part]) -> bool {
    parts.windows(2).all(|w| w[0] != w[1])
}

/// First entry of `m_n` violating goodness: a nonzero value on `T_{n,b}` or
/// an output leaving `B_{i_1}` on an alternating sector.
pub fn goodness_violation(s: &AInfinity, n: usize) -> Option<Witness> {
    let m = s.op(n)?;
    for (w, o) in m.entries() {
        let parts: Vec<Part> = w.iter().map(|&i| s.parts[i]).collect();
        let bad = if !is_alternating(&parts) {
            true
        } else {
            o.keys().any(|v| s.parts[v[0]] != parts[0])
        };
        if bad {
            return Some(Witness::at(m.domain(), m.codomain(), w, o.iter()));
        }
    }
    None
}

/// The predicates of a split A∞-structure. `manageable` and
/// `fully_manageable` are known only when a reference dg algebra structure
/// on the total space was supplied.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Predicates {
    /// `(B, m_2, m_1)` is a dg algebra.
    pub dg_algebra: bool,
    pub small: bool,
    pub essentially_odd: bool,
    pub good: bool,
    pub special: bool,
    pub nice: bool,
    /// `m_n(A^{⊗n}) ⊆ A` for every n.
    pub leading_subalgebra: bool,
    pub cyclic: bool,
    pub nondegenerate: bool,
    pub manageable: Option<bool>,
    pub fully_manageable: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub goodness_witness: Option<Witness>,
}

impl Predicates {
    pub fn names(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        let flags = [
            ("dg_algebra", self.dg_algebra),
            ("small", self.small),
            ("essentially_odd", self.essentially_odd),
            ("good", self.good),
            ("special", self.special),
            ("nice", self.nice),
            ("leading_subalgebra", self.leading_subalgebra),
            ("cyclic", self.cyclic),
            ("nondegenerate", self.nondegenerate),
            ("manageable", self.manageable == Some(true)),
            ("fully_manageable", self.fully_manageable == Some(true)),
        ];
        for (n, f) in flags {
            if f {
                out.push(n);
            }
        }
        out
    }

    /// Errors unless every named predicate holds.
    pub fn require(&self, names: &[&str]) -> Result<()> {
        for &n in names {
            let v = match n {
                "dg_algebra" => Some(self.dg_algebra),
                "small" => Some(self.small),
                "essentially_odd" => Some(self.essentially_odd),
                "good" => Some(self.good),
                "special" => Some(self.special),
                "nice" => Some(self.nice),
                "leading_subalgebra" => Some(self.leading_subalgebra),
                "cyclic" => Some(self.cyclic),
                "nondegenerate" => Some(self.nondegenerate),
                "manageable" => self.manageable,
                "fully_manageable" => self.fully_manageable,
                _ => return Err(Error::Precondition(format!("unknown predicate `{n}`"))),
            };
            match v {
                None => {
                    return Err(Error::Missing(format!(
                        "predicate `{n}` needs a reference square-zero structure"
                    )))
                }
                Some(false) => {
                    let extra = if n == "good" {
                        self.goodness_witness
                            .as_ref()
                            .map(|w| format!(" at {}", w.render()))
                            .unwrap_or_default()
                    } else {
                        String::new()
                    };
                    return Err(Error::Precondition(format!("structure is not {n}{extra}")));
                }
                Some(true) => {}
            }
        }
        Ok(())
    }
}

/// Evaluates the predicates. `reference` supplies the square-zero extension
/// whose `m_2` and `m_1` define manageability.
pub fn classify(s: &AInfinity, reference: Option<&AInfinity>) -> Result<Predicates> {
    let small = s.ops.keys().all(|&k| k < 4);
    let essentially_odd = even_arity_above_two(s).is_none();
    let mut goodness_witness = None;
    if essentially_odd {
        for &k in s.ops.keys().filter(|&&k| k % 2 == 1) {
            if let Some(w) = goodness_violation(s, k) {
                goodness_witness = Some(w);
                break;
            }
        }
    }
    let good = essentially_odd && goodness_witness.is_none();
    let (cyclic, nondegenerate, special) = match &s.form {
        None => (false, false, false),
        Some(f) => {
            let cyc = check_cyclic(s)?.passed();
            let ultra = essentially_odd && check_ultracyclic(s, PermutationMode::Full)?.passed();
            (cyc, f.is_nondegenerate(), ultra && cyc)
        }
    };
    let mut dg = AInfinity::new(s.space.clone(), s.parts.clone(), None)?;
    for k in [1, 2] {
        if let Some(m) = s.op(k) {
            dg.set_op(k, m.clone())?;
        }
    }
    let dg_algebra = check_stasheff(&dg, Some(3)).passed();
    let a_idx: BTreeSet<usize> = (0..s.space.dim()).filter(|&i| s.parts[i] == Part::A).collect();
    let leading_subalgebra = s.ops.values().all(|m| {
        m.entries().iter().all(|(w, o)| {
            !w.iter().all(|i| a_idx.contains(i)) || o.keys().all(|v| a_idx.contains(&v[0]))
        })
    });
    let (manageable, fully_manageable) = match reference {
        None => (None, None),
        Some(r) => {
            if r.space != s.space {
                return Err(Error::SpaceMismatch("reference lives on another space".into()));
            }
            let m2 = s.op_or_zero(2) == r.op_or_zero(2);
            let m1 = s.op_or_zero(1) == r.op_or_zero(1);
            (Some(m2), Some(m2 && m1))
        }
    };
    Ok(Predicates {
        dg_algebra,
        small,
        essentially_odd,
        good,
        special,
        nice: good && small,
        leading_subalgebra,
        cyclic,
        nondegenerate,
        manageable,
        fully_manageable,
        goodness_witness,
    })
}

/// A morphism `{f_n}` of A∞-structures, `f_n` of degree `1 − n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AInfinityMorphism {
    pub source: AInfinity,
    pub target: AInfinity,
    components: BTreeMap<usize, MultiMap>,
}

impl AInfinityMorphism {
    pub fn new(source: AInfinity, target: AInfinity) -> Self {
        Self {
            source,
            target,
            components: BTreeMap::new(),
        }
    }

    /// A strict morphism with linear part `f1`.
    pub fn strict(source: AInfinity, target: AInfinity, f1: MultiMap) -> Result<Self> {
        let mut m = Self::new(source, target);
        m.set_component(1, f1)?;
        Ok(m)
    }

    pub fn set_component(&mut self, n: usize, f: MultiMap) -> Result<()> {
        if f.domain().len() != n
            || f.domain().iter().any(|s| s != self.source.space())
            || f.codomain() != [self.target.space().clone()]
        {
            return Err(Error::SpaceMismatch(format!("f_{n} must map B^⊗{n} to B'")));
        }
        if f.is_zero() {
            self.components.remove(&n);
            return Ok(());
        }
        if f.degree() != 1 - n as i64 {
            return Err(Error::Degree(format!(
                "f_{n} has degree {}, expected {}",
                f.degree(),
                1 - n as i64
            )));
        }
        self.components.insert(n, f);
        Ok(())
    }

    pub fn component(&self, n: usize) -> Option<&MultiMap> {
        self.components.get(&n)
    }

    pub fn components(&self) -> &BTreeMap<usize, MultiMap> {
        &self.components
    }

    pub fn is_strict(&self) -> bool {
        self.components.keys().all(|&k| k == 1)
    }

    /// Largest arity of a nonzero component.
    pub fn max_arity(&self) -> usize {
        self.components.keys().next_back().copied().unwrap_or(0)
    }
}

/// `f_{i_1} ⊗ … ⊗ f_{i_q}` with the Koszul signs of moving each map past the
/// inputs of the earlier blocks.
fn tensor_of_blocks(blocks: &[&MultiMap]) -> MultiMap {
    let mut domain = Vec::new();
    let mut codomain = Vec::new();
    let mut degree = 0;
    for b in blocks {
        domain.extend(b.domain().iter().cloned());
        codomain.extend(b.codomain().iter().cloned());
        degree += b.degree();
    }
    let mut out = MultiMap::zero(domain, codomain, degree);
    // (input word, output word, coefficient, input degree so far)
    let mut partial: Vec<(Word, Word, Q, i64)> = vec![(Word::new(), Word::new(), Q::one(), 0)];
    for b in blocks {
        let mut next = Vec::new();
        for (iw, ow, c, deg) in &partial {
            for (w, o) in b.entries() {
                let s = qsign(b.degree() * deg);
                let wdeg = b.input_degree(w);
                for (v, x) in o {
                    let mut iw2 = iw.clone();
                    iw2.extend_from_slice(w);
                    let mut ow2 = ow.clone();
                    ow2.extend_from_slice(v);
                    next.push((iw2, ow2, c * x * &s, deg + wdeg));
                }
            }
        }
        partial = next;
    }
    for (iw, ow, c, _) in partial {
        out.push(iw, ow, c);
    }
    out
}

/// Compositions of `n` into `q` positive parts drawn from `allowed`.
fn compositions(n: usize, allowed: &[usize]) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for &a in allowed {
        if a <= n {
            for mut rest in compositions(n - a, allowed) {
                rest.insert(0, a);
                out.push(rest);
            }
        }
    }
    out
}

/// Left side minus right side of MI(n).
pub fn morphism_defect(f: &AInfinityMorphism, n: usize) -> Result<MultiMap> {
    let src = &f.source;
    let tgt = &f.target;
    let mut out = MultiMap::zero(vec![src.space().clone(); n], vec![tgt.space().clone()], 2 - n as i64);
    for (&k, fk) in &f.components {
        if k > n {
            continue;
        }
        let s = n + 1 - k;
        let Some(ms) = src.op(s) else { continue };
        for r in 0..k {
            let t = k - 1 - r;
            out.add_scaled(&fk.compose_at(r, ms)?, &qsign((r + s * t) as i64))?;
        }
    }
    let allowed: Vec<usize> = f.components.keys().copied().collect();
    for parts in compositions(n, &allowed) {
        let q = parts.len();
        let Some(mq) = tgt.op(q) else { continue };
        let blocks: Vec<&MultiMap> = parts.iter().map(|i| &f.components[i]).collect();
        let w: usize = parts.iter().enumerate().map(|(j, &i)| j * (i + 1)).sum();
        let term = mq.compose(&tensor_of_blocks(&blocks))?;
        out.add_scaled(&term, &-qsign(w as i64))?;
    }
    Ok(out)
}

pub fn default_morphism_n_max(f: &AInfinityMorphism) -> usize {
    let a = f.source.max_arity().max(f.target.max_arity()).max(1);
    let k = f.max_arity().max(1);
    // the longest composites: f_k after m_a, or m_a after a tensor of f_k's
    (k + a - 1).max(a * k).max(1)
}

pub fn check_morphism(f: &AInfinityMorphism, n_max: Option<usize>) -> Result<AxiomReport> {
    let n_max = n_max.unwrap_or_else(|| default_morphism_n_max(f));
    let mut r = AxiomReport::new();
    for n in 1..=n_max {
        r.push_defect(format!("MI({n})"), &morphism_defect(f, n)?);
    }
    Ok(r)
}

/// Defect of `γ'(f_1 x, f_1 y) = γ(x, y)` for the linear part.
pub fn form_preservation_defect(f: &AInfinityMorphism) -> Result<MultiMap> {
    let (Some(g), Some(h)) = (f.source.form(), f.target.form()) else {
        return Err(Error::Missing("both ends need a bilinear form".into()));
    };
    let f1 = f
        .component(1)
        .cloned()
        .unwrap_or_else(|| MultiMap::zero(vec![f.source.space().clone()], vec![f.target.space().clone()], 0));
    let pulled = h
        .table()
        .compose_at(0, &f1)?
        .compose_at(1, &f1)?;
    pulled.sub(g.table())
}

/// Checks MI(n) and, when both ends carry forms, form preservation.
pub fn check_strict_morphism(f: &AInfinityMorphism, n_max: Option<usize>) -> Result<AxiomReport> {
    let mut r = check_morphism(f, n_max)?;
    if f.source.form().is_some() && f.target.form().is_some() {
        r.push_defect("form_preserved", &form_preservation_defect(f)?);
    }
    Ok(r)
}

/// Total degree of a basis word of `B^{⊗n}`.
pub fn degree_of_word(s: &AInfinity, w: &[usize]) -> i64 {
    word_degree(&vec![s.space.clone(); w.len()], w)
}

/// Convenience: the structure with only `m_1` and `m_2` taken from `s`.
pub fn dg_part(s: &AInfinity) -> AInfinity {
    let mut out = AInfinity::new(s.space.clone(), s.parts.clone(), s.form.clone()).expect("same data");
    for k in [1, 2] {
        if let Some(m) = s.op(k) {
            out.set_op(k, m.clone()).expect("valid op");
        }
    }
    out
}

/// Every input word of `B^{⊗n}` whose parts spell `sector`.
pub fn sector_words(s: &AInfinity, sector: &[Part]) -> Vec<Word> {
    let spaces: Vec<Space> = vec![s.space.clone(); sector.len()];
    all_words(&spaces)
        .into_iter()
        .filter(|w| w.iter().zip(sector).all(|(&i, p)| s.parts[i] == *p))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::q;

    fn space() -> Space {
        GradedSpace::from_pairs(&[("x", 0), ("y", 1)]).unwrap().into_shared()
    }

    #[test]
    fn natural_form_values() {
        let a = GradedSpace::from_pairs(&[("x", 0), ("y", -1)]).unwrap();
        for shift in -2..=2 {
            let (total, parts, form) = natural_form(&a, shift);
            assert_eq!(parts, vec![Part::A, Part::A, Part::D, Part::D]);
            assert_eq!(form.degree(), shift);
            for i in 0..2 {
                for j in 0..2 {
                    let delta = if i == j { q(1) } else { q(0) };
                    assert_eq!(form.value(2 + i, j), delta);
                    assert_eq!(form.value(i, j), q(0));
                    assert_eq!(form.value(2 + i, 2 + j), q(0));
                }
            }
            assert!(form.supersymmetry_defect().is_zero());
            assert!(form.is_nondegenerate());
            assert_eq!(total.symbol(2), "tx*");
        }
    }

    #[test]
    fn zero_ops_pass_everything() {
        let a = GradedSpace::from_pairs(&[("x", 0)]).unwrap();
        let (total, parts, form) = natural_form(&a, 0);
        let s = AInfinity::new(total, parts, Some(form)).unwrap();
        assert!(check_stasheff(&s, Some(5)).passed());
        assert!(check_cyclic(&s).unwrap().passed());
        assert!(check_ultracyclic(&s, PermutationMode::Full).unwrap().passed());
    }

    #[test]
    fn si1_is_m1_squared() {
        let v = space();
        let mut m1 = MultiMap::zero(vec![v.clone()], vec![v.clone()], 1);
        m1.add_entry(&[0], &[1], q(1)).unwrap();
        let s = AInfinity::new(v.clone(), vec![Part::A, Part::A], None)
            .unwrap()
            .with_op(1, m1.clone())
            .unwrap();
        assert_eq!(stasheff_defect(&s, 1), m1.compose(&m1).unwrap());
    }

    #[test]
    fn wrong_degree_is_rejected() {
        let v = space();
        let mut m = MultiMap::zero(vec![v.clone(); 2], vec![v.clone()], 1);
        m.add_entry(&[0, 0], &[1], q(1)).unwrap();
        let s = AInfinity::new(v, vec![Part::A, Part::A], None).unwrap();
        assert!(matches!(s.with_op(2, m), Err(Error::Degree(_))));
    }

    #[test]
    fn sectors_enumerate_in_order() {
        assert_eq!(all_sectors(2), vec!["AA", "AD", "DA", "DD"]);
    }

    #[test]
    fn compositions_of_four() {
        assert_eq!(compositions(4, &[1, 2]).len(), 5);
    }
}
