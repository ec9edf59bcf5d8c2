//! Double Poisson dg algebras: dg algebra data, double brackets stored in
//! the unshifted form, axiom checks, and the induced dg Lie algebra on the
//! commutator quotient.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graded::{
    qsign, sign_of, BasisElement, GradedSpace, MultiMap, Permutation, Space, Word, Q,
};
use crate::linalg;
use crate::report::{AxiomReport, CheckOutcome};

/// A finite-dimensional dg algebra: product of degree 0 and differential of
/// degree 1 on an ordered basis. The algebra need not be unital.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgAlgebra {
    space: Space,
    product: MultiMap,
    differential: MultiMap,
}

impl DgAlgebra {
    /// Wraps the tables after checking their shapes and degrees. The algebra
    /// axioms are checked separately by [`DgAlgebra::validate`].
    pub fn new(space: Space, product: MultiMap, differential: MultiMap) -> Result<Self> {
        let a = space.clone();
        if product.domain() != [a.clone(), a.clone()] || product.codomain() != [a.clone()] {
            return Err(Error::SpaceMismatch("product must map A⊗A to A".into()));
        }
        if differential.domain() != [a.clone()] || differential.codomain() != [a] {
            return Err(Error::SpaceMismatch("differential must map A to A".into()));
        }
        if !product.is_zero() && product.degree() != 0 {
            return Err(Error::Degree("product must have degree 0".into()));
        }
        if !differential.is_zero() && differential.degree() != 1 {
            return Err(Error::Degree("differential must have degree 1".into()));
        }
        let product = product.reinterpret(product.domain().to_vec(), product.codomain().to_vec(), 0)?;
        let differential =
            differential.reinterpret(differential.domain().to_vec(), differential.codomain().to_vec(), 1)?;
        Ok(Self {
            space,
            product,
            differential,
        })
    }

    /// The algebra with zero product and zero differential.
    pub fn trivial(space: Space) -> Self {
        let product = MultiMap::zero(vec![space.clone(), space.clone()], vec![space.clone()], 0);
        let differential = MultiMap::zero(vec![space.clone()], vec![space.clone()], 1);
        Self {
            space,
            product,
            differential,
        }
    }

    pub fn builder(basis: &[(&str, i64)]) -> Result<DgAlgebraBuilder> {
        let space = GradedSpace::from_pairs(basis)?.into_shared();
        Ok(DgAlgebraBuilder {
            alg: Self::trivial(space),
        })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.space.degree(i)
    }

    pub fn product(&self) -> &MultiMap {
        &self.product
    }

    pub fn differential(&self) -> &MultiMap {
        &self.differential
    }

    /// `e_i e_j` as a sparse coordinate map.
    pub fn mul_basis(&self, i: usize, j: usize) -> BTreeMap<usize, Q> {
        unary_terms(self.product.entries().get(&Word::from_slice(&[i, j])))
    }

    /// `∂ e_i` as a sparse coordinate map.
    pub fn diff_basis(&self, i: usize) -> BTreeMap<usize, Q> {
        unary_terms(self.differential.entries().get(&Word::from_slice(&[i])))
    }

    /// Checks associativity, `∂² = 0` and the Leibniz rule on basis tuples.
    pub fn validate(&self) -> AxiomReport {
        let mut report = AxiomReport::new();
        let assoc = self
            .product
            .compose_at(0, &self.product)
            .and_then(|l| l.sub(&self.product.compose_at(1, &self.product)?))
            .expect("shapes agree");
        report.push_defect("associativity", &assoc);
        let dd = self.differential.compose(&self.differential).expect("shapes agree");
        report.push_defect("differential_squares_to_zero", &dd);
        // ∂∘μ − μ∘(∂⊗id) − μ∘(id⊗∂), the last with its Koszul sign
        let mut leib = self.differential.compose(&self.product).expect("shapes agree");
        leib.add_scaled(&self.product.compose_at(0, &self.differential).expect("shapes agree"), &-Q::one())
            .expect("shapes agree");
        leib.add_scaled(&self.product.compose_at(1, &self.differential).expect("shapes agree"), &-Q::one())
            .expect("shapes agree");
        report.push_defect("graded_leibniz", &leib);
        report
    }

    pub fn is_valid(&self) -> bool {
        self.validate().passed()
    }

    /// `a · (u ⊗ v) = (a u) ⊗ v` for a basis element `a`.
    pub(crate) fn left_mul(&self, a: usize, t: &BTreeMap<Word, Q>) -> BTreeMap<Word, Q> {
        let mut out = BTreeMap::new();
        for (w, c) in t {
            for (k, x) in self.mul_basis(a, w[0]) {
                let mut v = w.clone();
                v[0] = k;
                add(&mut out, v, c * x);
            }
        }
        out
    }

    /// `(u ⊗ v) · b = u ⊗ (v b)` for a basis element `b`.
    pub(crate) fn right_mul(&self, t: &BTreeMap<Word, Q>, b: usize) -> BTreeMap<Word, Q> {
        let mut out = BTreeMap::new();
        for (w, c) in t {
            let last = w.len() - 1;
            for (k, x) in self.mul_basis(w[last], b) {
                let mut v = w.clone();
                v[last] = k;
                add(&mut out, v, c * x);
            }
        }
        out
    }

    /// `(∂ ⊗ id + id ⊗ ∂)` on a tensor of `A ⊗ A`.
    pub(crate) fn diff_tensor(&self, t: &BTreeMap<Word, Q>) -> BTreeMap<Word, Q> {
        let mut out = BTreeMap::new();
        for (w, c) in t {
            let mut prefix = 0;
            for slot in 0..w.len() {
                for (k, x) in self.diff_basis(w[slot]) {
                    let mut v = w.clone();
                    v[slot] = k;
                    let s = c * x;
                    add(&mut out, v, if prefix & 1 != 0 { -s } else { s });
                }
                prefix += self.degree(w[slot]);
            }
        }
        out
    }
}

/// Incremental construction of small algebras by symbol.
pub struct DgAlgebraBuilder {
    alg: DgAlgebra,
}

impl DgAlgebraBuilder {
    /// Adds `Σ c · out` to the product `a b`.
    pub fn mul(mut self, a: &str, b: &str, terms: &[(Q, &str)]) -> Result<Self> {
        let s = self.alg.space.clone();
        let (i, j) = (lookup(&s, a)?, lookup(&s, b)?);
        for (c, o) in terms {
            let k = lookup(&s, o)?;
            self.alg.product.add_entry(&[i, j], &[k], c.clone())?;
        }
        Ok(self)
    }

    /// Adds `Σ c · out` to `∂ a`.
    pub fn diff(mut self, a: &str, terms: &[(Q, &str)]) -> Result<Self> {
        let s = self.alg.space.clone();
        let i = lookup(&s, a)?;
        for (c, o) in terms {
            let k = lookup(&s, o)?;
            self.alg.differential.add_entry(&[i], &[k], c.clone())?;
        }
        Ok(self)
    }

    /// Finishes without validating the algebra axioms.
    pub fn build_unchecked(self) -> DgAlgebra {
        self.alg
    }

    /// Finishes, rejecting data that is not a dg algebra.
    pub fn build(self) -> Result<DgAlgebra> {
        let report = self.alg.validate();
        if let Some(f) = report.first_failure() {
            return Err(Error::Precondition(format!(
                "not a dg algebra: {} fails at {}",
                f.name,
                f.witness.as_ref().map(|w| w.render()).unwrap_or_default()
            )));
        }
        Ok(self.alg)
    }
}

pub(crate) fn lookup(space: &GradedSpace, symbol: &str) -> Result<usize> {
    space
        .index_of(symbol)
        .ok_or_else(|| Error::UnknownSymbol(symbol.to_string()))
}

fn unary_terms(img: Option<&BTreeMap<Word, Q>>) -> BTreeMap<usize, Q> {
    img.map(|o| o.iter().map(|(w, c)| (w[0], c.clone())).collect())
        .unwrap_or_default()
}

fn add(map: &mut BTreeMap<Word, Q>, w: Word, c: Q) {
    if c.is_zero() {
        return;
    }
    let e = map.entry(w.clone()).or_insert_with(Q::zero);
    *e += c;
    if e.is_zero() {
        map.remove(&w);
    }
}

/// A double bracket of degree `-d`, stored as the unshifted map
/// `⟨a, b⟩ ∈ A ⊗ A` on basis pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleBracket {
    d: i64,
    table: MultiMap,
}

impl DoubleBracket {
    pub fn new(d: i64, table: MultiMap) -> Result<Self> {
        let dom = table.domain();
        if dom.len() != 2 || table.codomain().len() != 2 || dom[0] != dom[1] || table.codomain() != dom {
            return Err(Error::SpaceMismatch("a double bracket maps A⊗A to A⊗A".into()));
        }
        let table = table.reinterpret(dom.to_vec(), dom.to_vec(), -d)?;
        Ok(Self { d, table })
    }

    pub fn zero(space: Space, d: i64) -> Self {
        Self {
            d,
            table: MultiMap::zero(vec![space.clone(), space.clone()], vec![space.clone(), space], -d),
        }
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn table(&self) -> &MultiMap {
        &self.table
    }

    pub fn space(&self) -> &Space {
        &self.table.domain()[0]
    }

    pub fn is_zero(&self) -> bool {
        self.table.is_zero()
    }

    /// `⟨e_a, e_b⟩` as sparse terms of `A ⊗ A`.
    pub fn value(&self, a: usize, b: usize) -> BTreeMap<Word, Q> {
        self.table
            .entries()
            .get(&Word::from_slice(&[a, b]))
            .cloned()
            .unwrap_or_default()
    }

    /// Adds `c · (u ⊗ v)` to `⟨a, b⟩` by symbol.
    pub fn set(&mut self, a: &str, b: &str, terms: &[(Q, &str, &str)]) -> Result<()> {
        let s = self.space().clone();
        let (i, j) = (lookup(&s, a)?, lookup(&s, b)?);
        for (c, u, v) in terms {
            let (k, l) = (lookup(&s, u)?, lookup(&s, v)?);
            self.table.add_entry(&[i, j], &[k, l], c.clone())?;
        }
        Ok(())
    }

    pub fn with(mut self, a: &str, b: &str, terms: &[(Q, &str, &str)]) -> Result<Self> {
        self.set(a, b, terms)?;
        Ok(self)
    }

    pub fn add(&self, other: &DoubleBracket) -> Result<DoubleBracket> {
        if self.d != other.d {
            return Err(Error::Degree("adding brackets of different degrees".into()));
        }
        Ok(Self {
            d: self.d,
            table: self.table.add(&other.table)?,
        })
    }

    pub fn scaled(&self, c: &Q) -> DoubleBracket {
        Self {
            d: self.d,
            table: self.table.scaled(c),
        }
    }

    /// `½(⟨a,b⟩ − (−1)^{(|a|−d)(|b|−d)} τ⟨b,a⟩)`, the projection onto brackets
    /// satisfying antisymmetry.
    pub fn antisymmetrized(&self) -> DoubleBracket {
        let a = self.space().clone();
        let half = Q::new(1.into(), 2.into());
        let mut out = MultiMap::zero(self.table.domain().to_vec(), self.table.codomain().to_vec(), -self.d);
        let swap = Permutation::transposition(2, 0, 1);
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                let w = Word::from_slice(&[i, j]);
                for (v, c) in self.value(i, j) {
                    out.push(w.clone(), v, &half * c);
                }
                let e = (a.degree(i) - self.d) * (a.degree(j) - self.d);
                for (v, c) in self.value(j, i) {
                    let (sv, s) = crate::graded::permute_basis_word(&swap, self.table.codomain(), &v);
                    let s = -(s as i64) * sign_of(e) as i64;
                    out.push(w.clone(), sv, &half * c * Q::from_integer(s.into()));
                }
            }
        }
        DoubleBracket { d: self.d, table: out }
    }
}

fn check_space(alg: &DgAlgebra, br: &DoubleBracket) -> Result<()> {
    if br.space() != alg.space() {
        return Err(Error::SpaceMismatch("bracket and algebra live on different spaces".into()));
    }
    Ok(())
}

fn pair_map(a: &Space, degree: i64) -> MultiMap {
    MultiMap::zero(vec![a.clone(), a.clone()], vec![a.clone(), a.clone()], degree)
}

/// Defect of `τ⟨b,a⟩ + (−1)^{(|a|−d)(|b|−d)}⟨a,b⟩` on every basis pair `(a, b)`.
pub fn antisymmetry_defect(alg: &DgAlgebra, br: &DoubleBracket) -> Result<MultiMap> {
    check_space(alg, br)?;
    let a = alg.space();
    let d = br.d;
    let swap = Permutation::transposition(2, 0, 1);
    let mut out = pair_map(a, -d);
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            let w = Word::from_slice(&[i, j]);
            for (v, c) in br.value(j, i) {
                let (sv, s) = crate::graded::permute_basis_word(&swap, br.table.codomain(), &v);
                out.push(w.clone(), sv, if s < 0 { -c } else { c });
            }
            let s = qsign((a.degree(i) - d) * (a.degree(j) - d));
            for (v, c) in br.value(i, j) {
                out.push(w.clone(), v, &s * c);
            }
        }
    }
    Ok(out)
}

/// Defect of `⟨c,ab⟩ − ⟨c,a⟩b − (−1)^{(|c|−d)|a|} a⟨c,b⟩` on basis triples
/// `(c, a, b)`. The outer multiplications act on the last and first tensor
/// factor respectively.
pub fn leibniz_defect(alg: &DgAlgebra, br: &DoubleBracket) -> Result<MultiMap> {
    check_space(alg, br)?;
    let sp = alg.space();
    let d = br.d;
    let mut out = MultiMap::zero(vec![sp.clone(); 3], vec![sp.clone(); 2], -d);
    let n = sp.dim();
    for c in 0..n {
        for a in 0..n {
            let ca = br.value(c, a);
            for b in 0..n {
                let w = Word::from_slice(&[c, a, b]);
                for (k, x) in alg.mul_basis(a, b) {
                    for (v, y) in br.value(c, k) {
                        out.push(w.clone(), v, &x * y);
                    }
                }
                for (v, y) in alg.right_mul(&ca, b) {
                    out.push(w.clone(), v, -y);
                }
                let s = -qsign((sp.degree(c) - d) * sp.degree(a));
                for (v, y) in alg.left_mul(a, &br.value(c, b)) {
                    out.push(w.clone(), v, &s * y);
                }
            }
        }
    }
    Ok(out)
}

/// Defect of the Leibniz rule written for `⟨,⟩^u = ⟨,⟩ ∘ (s^d ⊗ s^d)`:
/// `⟨,⟩^u(id⊗μ) − (id⊗μ)(⟨,⟩^u⊗id) − (μ⊗id)(id⊗⟨,⟩^u)(τ⊗id)`, where
/// `⟨,⟩^u(a ⊗ b) = (−1)^{d|a|}⟨a,b⟩`.
pub fn leibniz_u_defect(alg: &DgAlgebra, br: &DoubleBracket) -> Result<MultiMap> {
    check_space(alg, br)?;
    let sp = alg.space();
    let d = br.d;
    let u = |x: usize, y: usize| -> BTreeMap<Word, Q> {
        let s = qsign(d * sp.degree(x));
        br.value(x, y).into_iter().map(|(w, c)| (w, &s * c)).collect()
    };
    let n = sp.dim();
    let mut out = MultiMap::zero(vec![sp.clone(); 3], vec![sp.clone(); 2], -d);
    for c in 0..n {
        for a in 0..n {
            for b in 0..n {
                let w = Word::from_slice(&[c, a, b]);
                for (k, x) in alg.mul_basis(a, b) {
                    for (v, y) in u(c, k) {
                        out.push(w.clone(), v, &x * y);
                    }
                }
                for (v, y) in alg.right_mul(&u(c, a), b) {
                    out.push(w.clone(), v, -y);
                }
                // (τ⊗id)(c⊗a⊗b) = (−1)^{|c||a|} a⊗c⊗b, then id⊗⟨,⟩^u of degree −d
                // passes a: (−1)^{d|a|}
                let s = -qsign(sp.degree(c) * sp.degree(a) + d * sp.degree(a));
                for (v, y) in alg.left_mul(a, &u(c, b)) {
                    out.push(w.clone(), v, &s * y);
                }
            }
        }
    }
    Ok(out)
}

/// Defect of `(∂⊗1 + 1⊗∂)⟨a,b⟩ − ⟨∂a,b⟩ − (−1)^{|a|+d}⟨a,∂b⟩`.
pub fn closed_defect(alg: &DgAlgebra, br: &DoubleBracket) -> Result<MultiMap> {
    check_space(alg, br)?;
    let sp = alg.space();
    let d = br.d;
    let mut out = pair_map(sp, 1 - d);
    for a in 0..sp.dim() {
        for b in 0..sp.dim() {
            let w = Word::from_slice(&[a, b]);
            for (v, c) in alg.diff_tensor(&br.value(a, b)) {
                out.push(w.clone(), v, c);
            }
            for (k, x) in alg.diff_basis(a) {
                for (v, c) in br.value(k, b) {
                    out.push(w.clone(), v, -(&x * c));
                }
            }
            let s = -qsign(sp.degree(a) + d);
            for (k, x) in alg.diff_basis(b) {
                for (v, c) in br.value(a, k) {
                    out.push(w.clone(), v, &s * &x * c);
                }
            }
        }
    }
    Ok(out)
}

/// `⟨x, ⟨y, z⟩⟩_L`: the bracket of `x` with the first factor of `⟨y, z⟩`,
/// the second factor riding along on the right.
fn bracket_left(br: &DoubleBracket, x: usize, y: usize, z: usize) -> BTreeMap<Word, Q> {
    let mut out = BTreeMap::new();
    for (uv, c) in br.value(y, z) {
        for (pq, e) in br.value(x, uv[0]) {
            add(&mut out, Word::from_slice(&[pq[0], pq[1], uv[1]]), &c * e);
        }
    }
    out
}

/// Defect of the cyclic sum
/// `⟨c,⟨b,a⟩⟩_L + (−1)^{(|c|+d)(|a|+|b|)} σ⟨b,⟨a,c⟩⟩_L + (−1)^{(|a|+d)(|b|+|c|)} σ²⟨a,⟨c,b⟩⟩_L`
/// on basis triples `(a, b, c)`, σ the cyclic permutation `1 ↦ 2`.
pub fn jacobi_defect(alg: &DgAlgebra, br: &DoubleBracket) -> Result<MultiMap> {
    check_space(alg, br)?;
    let sp = alg.space();
    let d = br.d;
    let triple = vec![sp.clone(); 3];
    let sigma = Permutation::rotation(3, 1);
    let sigma2 = Permutation::rotation(3, 2);
    let mut out = MultiMap::zero(triple.clone(), triple.clone(), -2 * d);
    let n = sp.dim();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let w = Word::from_slice(&[a, b, c]);
                let (da, db, dc) = (sp.degree(a), sp.degree(b), sp.degree(c));
                for (v, x) in bracket_left(br, c, b, a) {
                    out.push(w.clone(), v, x);
                }
                let s1 = sign_of((dc + d) * (da + db));
                for (v, x) in bracket_left(br, b, a, c) {
                    let (pv, s) = crate::graded::permute_basis_word(&sigma, &triple, &v);
                    out.push(w.clone(), pv, if s * s1 < 0 { -x } else { x });
                }
                let s2 = sign_of((da + d) * (db + dc));
                for (v, x) in bracket_left(br, a, c, b) {
                    let (pv, s) = crate::graded::permute_basis_word(&sigma2, &triple, &v);
                    out.push(w.clone(), pv, if s * s2 < 0 { -x } else { x });
                }
            }
        }
    }
    Ok(out)
}

pub fn check_antisymmetry(alg: &DgAlgebra, br: &DoubleBracket) -> Result<AxiomReport> {
    Ok(AxiomReport::single(CheckOutcome::from_defect("antisymmetry", &antisymmetry_defect(alg, br)?)))
}

pub fn check_leibniz(alg: &DgAlgebra, br: &DoubleBracket) -> Result<AxiomReport> {
    Ok(AxiomReport::single(CheckOutcome::from_defect("leibniz", &leibniz_defect(alg, br)?)))
}

pub fn check_closed(alg: &DgAlgebra, br: &DoubleBracket) -> Result<AxiomReport> {
    Ok(AxiomReport::single(CheckOutcome::from_defect("closed", &closed_defect(alg, br)?)))
}

pub fn check_double_jacobi(alg: &DgAlgebra, br: &DoubleBracket) -> Result<AxiomReport> {
    Ok(AxiomReport::single(CheckOutcome::from_defect("double_jacobi", &jacobi_defect(alg, br)?)))
}

/// All four axioms, in the order antisymmetry, Leibniz, double Jacobi,
/// closedness. The algebra itself must be a dg algebra.
pub fn check_double_poisson(alg: &DgAlgebra, br: &DoubleBracket) -> Result<AxiomReport> {
    check_space(alg, br)?;
    let v = alg.validate();
    if let Some(f) = v.first_failure() {
        return Err(Error::Precondition(format!("the algebra fails {}", f.name)));
    }
    let mut r = check_antisymmetry(alg, br)?;
    r.merge(check_leibniz(alg, br)?);
    r.merge(check_double_jacobi(alg, br)?);
    r.merge(check_closed(alg, br)?);
    Ok(r)
}

pub fn is_double_poisson(alg: &DgAlgebra, br: &DoubleBracket) -> bool {
    check_double_poisson(alg, br).map(|r| r.passed()).unwrap_or(false)
}

/// The dg Lie algebra `(A/[A,A])[d]` induced by a double Poisson bracket.
#[derive(Clone, Debug)]
pub struct QuotientLie {
    /// Basis of `[A,A]` in coordinates of `A`, row reduced.
    pub commutators: Vec<Vec<Q>>,
    /// Basis indices of `A` whose classes form the basis of the quotient.
    pub representatives: Vec<usize>,
    /// The quotient shifted by `d`: symbol `[x]` has degree `|x| − d`.
    pub space: Space,
    /// `{,}` on the quotient, degree 0.
    pub bracket: MultiMap,
    /// Induced differential, degree 1.
    pub differential: MultiMap,
    /// Sign relating the differential to `[x] ↦ [∂x]`.
    pub differential_sign: i32,
    pub report: AxiomReport,
}

impl QuotientLie {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }
}

/// Projection of `A` onto the quotient by `[A,A]`, in the basis of chosen
/// representatives. Solved degree by degree.
struct Projector {
    coords: Vec<BTreeMap<usize, Q>>,
}

impl Projector {
    fn new(space: &GradedSpace, commutators: &[Vec<Q>], reps: &[usize]) -> Projector {
        let n = space.dim();
        // columns: commutator basis vectors, then representative unit vectors
        let mut cols: Vec<Vec<Q>> = commutators.to_vec();
        for &r in reps {
            let mut v = vec![Q::zero(); n];
            v[r] = Q::one();
            cols.push(v);
        }
        let m: linalg::Matrix = (0..n)
            .map(|row| cols.iter().map(|c| c[row].clone()).collect())
            .collect();
        let mut coords = Vec::with_capacity(n);
        for i in 0..n {
            let mut b = vec![Q::zero(); n];
            b[i] = Q::one();
            let x = linalg::solve(&m, cols.len(), &b).expect("commutators and representatives span A");
            let mut c = BTreeMap::new();
            for (k, _) in reps.iter().enumerate() {
                let v = &x[commutators.len() + k];
                if !v.is_zero() {
                    c.insert(k, v.clone());
                }
            }
            coords.push(c);
        }
        Projector { coords }
    }

    fn project(&self, v: &BTreeMap<usize, Q>) -> BTreeMap<usize, Q> {
        let mut out: BTreeMap<usize, Q> = BTreeMap::new();
        for (i, c) in v {
            for (k, x) in &self.coords[*i] {
                *out.entry(*k).or_insert_with(Q::zero) += c * x;
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }
}

/// Basis of `[A,A]`: the span of `e_i e_j − (−1)^{|e_i||e_j|} e_j e_i`, row
/// reduced degree by degree.
pub fn commutator_basis(alg: &DgAlgebra) -> Vec<Vec<Q>> {
    let sp = alg.space();
    let n = sp.dim();
    let mut out = Vec::new();
    for deg in sp.degree_set() {
        let mut rows: linalg::Matrix = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if sp.degree(i) + sp.degree(j) != deg {
                    continue;
                }
                let mut v = vec![Q::zero(); n];
                for (k, c) in alg.mul_basis(i, j) {
                    v[k] += c;
                }
                let s = qsign(sp.degree(i) * sp.degree(j));
                for (k, c) in alg.mul_basis(j, i) {
                    v[k] -= &s * c;
                }
                if v.iter().any(|x| !x.is_zero()) {
                    rows.push(v);
                }
            }
        }
        let (r, _) = linalg::rref(rows, n);
        out.extend(r);
    }
    out
}

/// Builds `(A/[A,A])[d]` with its bracket `{[a],[b]} = π μ ⟨a,b⟩` and
/// differential `(−1)^d [∂a]`, and verifies the dg Lie axioms.
pub fn induced_quotient_lie(alg: &DgAlgebra, br: &DoubleBracket) -> Result<QuotientLie> {
    let pre = check_double_poisson(alg, br)?;
    if let Some(f) = pre.first_failure() {
        return Err(Error::Precondition(format!(
            "the bracket is not double Poisson: {} fails",
            f.name
        )));
    }
    let sp = alg.space();
    let n = sp.dim();
    let d = br.d;
    let commutators = commutator_basis(alg);
    // greedy complement in input order
    let mut reps = Vec::new();
    let mut acc = commutators.clone();
    for i in 0..n {
        let mut v = vec![Q::zero(); n];
        v[i] = Q::one();
        acc.push(v);
        if linalg::rank(&acc, n) == commutators.len() + reps.len() + 1 {
            reps.push(i);
        } else {
            acc.pop();
        }
    }
    let proj = Projector::new(sp, &commutators, &reps);
    let lspace = GradedSpace::new(
        reps.iter()
            .map(|&i| BasisElement::new(format!("[{}]", sp.symbol(i)), sp.degree(i) - d))
            .collect(),
    )?
    .into_shared();
    let m = reps.len();

    // {,} on arbitrary elements of A, valued in the quotient
    let curly = |a: &BTreeMap<usize, Q>, b: &BTreeMap<usize, Q>| -> BTreeMap<usize, Q> {
        let mut prod: BTreeMap<usize, Q> = BTreeMap::new();
        for (i, x) in a {
            for (j, y) in b {
                for (uv, c) in br.value(*i, *j) {
                    for (k, z) in alg.mul_basis(uv[0], uv[1]) {
                        *prod.entry(k).or_insert_with(Q::zero) += x * y * &c * z;
                    }
                }
            }
        }
        proj.project(&prod)
    };
    let unit = |i: usize| BTreeMap::from([(i, Q::one())]);
    let dsign = sign_of(d);

    let mut bracket = MultiMap::zero(vec![lspace.clone(), lspace.clone()], vec![lspace.clone()], 0);
    for (x, &i) in reps.iter().enumerate() {
        for (y, &j) in reps.iter().enumerate() {
            for (k, c) in curly(&unit(i), &unit(j)) {
                bracket.add_entry(&[x, y], &[k], c)?;
            }
        }
    }
    let mut differential = MultiMap::zero(vec![lspace.clone()], vec![lspace.clone()], 1);
    for (x, &i) in reps.iter().enumerate() {
        for (k, c) in proj.project(&alg.diff_basis(i)) {
            differential.add_entry(&[x], &[k], if dsign < 0 { -c } else { c })?;
        }
    }

    let mut report = AxiomReport::new();
    report.note(format!(
        "induced differential is (-1)^d [∂x] with d = {d}, sign {dsign:+}"
    ));

    // well-definedness: commutators bracket to zero on either side, and ∂
    // preserves [A,A]
    let mut wd_fail = None;
    for (r, cvec) in commutators.iter().enumerate() {
        let cm: BTreeMap<usize, Q> = cvec
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| (i, x.clone()))
            .collect();
        let mut bad = !proj.project(&{
            let mut dv: BTreeMap<usize, Q> = BTreeMap::new();
            for (i, x) in &cm {
                for (k, c) in alg.diff_basis(*i) {
                    *dv.entry(k).or_insert_with(Q::zero) += x * c;
                }
            }
            dv
        })
        .is_empty();
        for j in 0..n {
            bad |= !curly(&cm, &unit(j)).is_empty() || !curly(&unit(j), &cm).is_empty();
        }
        if bad && wd_fail.is_none() {
            wd_fail = Some(r);
        }
    }
    match wd_fail {
        None => report.push(CheckOutcome::pass("quotient_well_defined")),
        Some(r) => {
            report.push(CheckOutcome::fail(
                "quotient_well_defined",
                crate::report::Witness {
                    indices: vec![r],
                    symbols: vec![format!("commutator #{r}")],
                    defect: Vec::new(),
                },
                1,
            ))
        }
    }

    let ld = |x: usize| lspace.degree(x);
    let pair = vec![lspace.clone(), lspace.clone()];
    let triple = vec![lspace.clone(); 3];
    let get = |x: usize, y: usize| -> BTreeMap<usize, Q> {
        bracket
            .entries()
            .get(&Word::from_slice(&[x, y]))
            .map(|o| o.iter().map(|(w, c)| (w[0], c.clone())).collect())
            .unwrap_or_default()
    };
    let bracket_vec = |v: &BTreeMap<usize, Q>, y: usize, left: bool| -> BTreeMap<usize, Q> {
        let mut out: BTreeMap<usize, Q> = BTreeMap::new();
        for (k, c) in v {
            let img = if left { get(*k, y) } else { get(y, *k) };
            for (t, e) in img {
                *out.entry(t).or_insert_with(Q::zero) += c * e;
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    };

    let mut anti = MultiMap::zero(pair.clone(), vec![lspace.clone()], 0);
    for x in 0..m {
        for y in 0..m {
            let w = Word::from_slice(&[x, y]);
            for (k, c) in get(x, y) {
                anti.push(w.clone(), Word::from_slice(&[k]), c);
            }
            let s = qsign(ld(x) * ld(y));
            for (k, c) in get(y, x) {
                anti.push(w.clone(), Word::from_slice(&[k]), &s * c);
            }
        }
    }
    report.push_defect("quotient_antisymmetry", &anti);

    // {x,{y,z}} − {{x,y},z} − (−1)^{|x||y|}{y,{x,z}}
    let mut jac = MultiMap::zero(triple.clone(), vec![lspace.clone()], 0);
    for x in 0..m {
        for y in 0..m {
            for z in 0..m {
                let w = Word::from_slice(&[x, y, z]);
                for (k, c) in bracket_vec(&get(y, z), x, false) {
                    jac.push(w.clone(), Word::from_slice(&[k]), c);
                }
                for (k, c) in bracket_vec(&get(x, y), z, true) {
                    jac.push(w.clone(), Word::from_slice(&[k]), -c);
                }
                let s = -qsign(ld(x) * ld(y));
                for (k, c) in bracket_vec(&get(x, z), y, false) {
                    jac.push(w.clone(), Word::from_slice(&[k]), &s * c);
                }
            }
        }
    }
    report.push_defect("quotient_jacobi", &jac);

    // δ{x,y} − {δx,y} − (−1)^{|x|}{x,δy}
    let delta = |x: usize| -> BTreeMap<usize, Q> {
        differential
            .entries()
            .get(&Word::from_slice(&[x]))
            .map(|o| o.iter().map(|(w, c)| (w[0], c.clone())).collect())
            .unwrap_or_default()
    };
    let mut der = MultiMap::zero(pair.clone(), vec![lspace.clone()], 1);
    for x in 0..m {
        for y in 0..m {
            let w = Word::from_slice(&[x, y]);
            for (k, c) in get(x, y) {
                for (t, e) in delta(k) {
                    der.push(w.clone(), Word::from_slice(&[t]), &c * e);
                }
            }
            for (k, c) in bracket_vec(&delta(x), y, true) {
                der.push(w.clone(), Word::from_slice(&[k]), -c);
            }
            let s = -qsign(ld(x));
            for (k, c) in bracket_vec(&delta(y), x, false) {
                der.push(w.clone(), Word::from_slice(&[k]), &s * c);
            }
        }
    }
    report.push_defect("quotient_derivation", &der);
    report.push_defect(
        "quotient_differential_squares_to_zero",
        &differential.compose(&differential)?,
    );

    Ok(QuotientLie {
        commutators,
        representatives: reps,
        space: lspace,
        bracket,
        differential,
        differential_sign: dsign,
        report,
    })
}
