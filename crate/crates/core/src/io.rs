//! Deterministic text serialization.
//!
//! Every object is one JSON document with a `schema_version` and a `kind`.
//! Coefficients are strings `p/q` in lowest terms with `q > 0`; basis order
//! in a file is authoritative and becomes the index order of the object.
//! Serialization is canonical: entries are emitted in index order, zero
//! coefficients are dropped and the layout is fixed, so equal objects give
//! identical bytes.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::ainfty::{AInfinity, BilinearForm, Part};
use crate::correspondence::BoundaryAlgebra;
use crate::dpa::{DgAlgebra, DoubleBracket};
use crate::error::{Error, Result};
use crate::functoriality::DpaMorphism;
use crate::graded::{BasisElement, GradedSpace, MultiMap, Space, Word, Q};
use crate::pinfty::PInfinityFamily;

pub const SCHEMA_VERSION: u32 = 1;

/// `p/q` in lowest terms with `q > 0`; integers keep the `/1`.
pub fn format_rational(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Reads `p/q` or a bare integer `p`. Non-reduced fractions are accepted and
/// normalized.
pub fn parse_rational(s: &str) -> Result<Q> {
    let bad = || Error::Schema(format!("`{s}` is not a rational coefficient p/q"));
    let int = |t: &str| -> Result<BigInt> {
        let t = t.trim();
        let digits = t.strip_prefix('-').unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        t.parse::<BigInt>().map_err(|_| bad())
    };
    match s.split_once('/') {
        None => Ok(Q::from_integer(int(s)?)),
        Some((p, q)) => {
            let q = int(q)?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(int(p)?, q))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FileKind {
    Algebra,
    Bracket,
    Pinfty,
    Ainfty,
    Morphism,
}

impl fmt::Display for FileKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FileKind::Algebra => "algebra",
            FileKind::Bracket => "bracket",
            FileKind::Pinfty => "pinfty",
            FileKind::Ainfty => "ainfty",
            FileKind::Morphism => "morphism",
        })
    }
}

/// A referenced file: path relative to the referring file, and the SHA-256
/// of its bytes in lowercase hex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileRef {
    pub path: String,
    pub sha256: String,
}

impl FileRef {
    /// References `target` from a file living in `base_dir`.
    pub fn to_file(target: &Path, base_dir: &Path) -> Result<FileRef> {
        let bytes = std::fs::read(target).map_err(|e| Error::Io(format!("{}: {e}", target.display())))?;
        let path = relative_path(target, base_dir);
        Ok(FileRef {
            path,
            sha256: sha256_hex(&bytes),
        })
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn relative_path(target: &Path, base: &Path) -> String {
    let abs = |p: &Path| std::fs::canonicalize(p).unwrap_or_else(|_| p.to_path_buf());
    let (t, b) = (abs(target), abs(base));
    let tc: Vec<_> = t.components().collect();
    let bc: Vec<_> = b.components().collect();
    let common = tc.iter().zip(&bc).take_while(|(x, y)| x == y).count();
    let mut out = PathBuf::new();
    for _ in common..bc.len() {
        out.push("..");
    }
    for c in &tc[common..] {
        out.push(c);
    }
    out.to_string_lossy().replace('\\', "/")
}

/// A morphism file before its references are loaded: the map is kept by
/// symbol, as `(input symbol, output symbol, coefficient)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismFile {
    pub source: FileRef,
    pub target: FileRef,
    pub map: Vec<(String, String, Q)>,
}

impl MorphismFile {
    /// Describes `phi` with the given references.
    pub fn from_morphism(phi: &DpaMorphism, source: FileRef, target: FileRef) -> Self {
        let a = phi.source.space().clone();
        let b = phi.target.space().clone();
        let map = phi
            .map()
            .entries()
            .iter()
            .flat_map(|(w, o)| {
                let (a, b) = (a.clone(), b.clone());
                o.iter()
                    .map(move |(v, c)| (a.symbol(w[0]).to_string(), b.symbol(v[0]).to_string(), c.clone()))
            })
            .collect();
        Self { source, target, map }
    }

    /// Loads both references relative to `base_dir`, checks their hashes,
    /// and builds the morphism between the two brackets.
    pub fn resolve(&self, base_dir: &Path) -> Result<DpaMorphism> {
        let load_side = |r: &FileRef, side: &str| -> Result<(DgAlgebra, DoubleBracket)> {
            let path = base_dir.join(&r.path);
            let bytes = std::fs::read(&path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            let got = sha256_hex(&bytes);
            if got != r.sha256 {
                return Err(Error::Schema(format!(
                    "{side} file {} has sha256 {got}, the morphism records {}",
                    r.path, r.sha256
                )));
            }
            match parse_bytes(&bytes)? {
                WorkbenchFile::Bracket { algebra, bracket } => Ok((algebra, bracket)),
                WorkbenchFile::Algebra { algebra, d } => {
                    let b = DoubleBracket::zero(algebra.space().clone(), d.unwrap_or(0));
                    Ok((algebra, b))
                }
                other => Err(Error::Schema(format!(
                    "{side} file {} has kind {}, expected bracket or algebra",
                    r.path,
                    other.kind()
                ))),
            }
        };
        let (a, bra) = load_side(&self.source, "source")?;
        let (b, brb) = load_side(&self.target, "target")?;
        let mut map = MultiMap::zero(vec![a.space().clone()], vec![b.space().clone()], 0);
        for (idx, (x, y, c)) in self.map.iter().enumerate() {
            let i = symbol_at(a.space(), x, "map", idx)?;
            let j = symbol_at(b.space(), y, "map", idx)?;
            map.add_entry(&[i], &[j], c.clone()).map_err(|e| at_entry(e, "map", idx))?;
        }
        DpaMorphism::new(a, bra, b, brb, map)
    }
}

/// A parsed file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WorkbenchFile {
    /// A dg algebra, optionally with a default bracket degree `d` used when
    /// the algebra is read as carrying the zero bracket.
    Algebra { algebra: DgAlgebra, d: Option<i64> },
    Bracket { algebra: DgAlgebra, bracket: DoubleBracket },
    Pinfty(PInfinityFamily),
    Ainfty(AInfinity),
    Morphism(MorphismFile),
}

impl WorkbenchFile {
    pub fn kind(&self) -> FileKind {
        match self {
            WorkbenchFile::Algebra { .. } => FileKind::Algebra,
            WorkbenchFile::Bracket { .. } => FileKind::Bracket,
            WorkbenchFile::Pinfty(_) => FileKind::Pinfty,
            WorkbenchFile::Ainfty(_) => FileKind::Ainfty,
            WorkbenchFile::Morphism(_) => FileKind::Morphism,
        }
    }
}

// ---- on-disk layout ----

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BasisDoc {
    name: String,
    degree: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    part: Option<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryDoc {
    #[serde(rename = "in")]
    input: Vec<String>,
    out: Vec<String>,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArityDoc {
    arity: usize,
    entries: Vec<EntryDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FormDoc {
    degree: i64,
    entries: Vec<EntryDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraDoc {
    basis: Vec<BasisDoc>,
    product: Vec<EntryDoc>,
    differential: Vec<EntryDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraFileDoc {
    schema_version: u32,
    kind: FileKind,
    basis: Vec<BasisDoc>,
    product: Vec<EntryDoc>,
    differential: Vec<EntryDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    d: Option<i64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BracketFileDoc {
    schema_version: u32,
    kind: FileKind,
    d: i64,
    algebra: AlgebraDoc,
    bracket: Vec<EntryDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PinftyFileDoc {
    schema_version: u32,
    kind: FileKind,
    algebra: AlgebraDoc,
    brackets: Vec<ArityDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AinftyFileDoc {
    schema_version: u32,
    kind: FileKind,
    basis: Vec<BasisDoc>,
    ops: Vec<ArityDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    form: Option<FormDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MorphismFileDoc {
    schema_version: u32,
    kind: FileKind,
    source: FileRef,
    target: FileRef,
    map: Vec<EntryDoc>,
}

#[derive(Deserialize)]
struct Header {
    schema_version: Option<u32>,
    kind: Option<String>,
}

// ---- parsing ----

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

fn at_entry(e: Error, field: &str, index: usize) -> Error {
    match e {
        Error::Degree(m) => Error::Degree(format!("{field} entry {index}: {m}")),
        Error::Schema(m) => Error::Schema(format!("{field} entry {index}: {m}")),
        other => other,
    }
}

fn symbol_at(space: &GradedSpace, symbol: &str, field: &str, index: usize) -> Result<usize> {
    space.index_of(symbol).ok_or_else(|| Error::UnknownSymbolAt {
        symbol: symbol.to_string(),
        field: field.to_string(),
        index,
    })
}

pub fn parse_bytes(bytes: &[u8]) -> Result<WorkbenchFile> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::Parse {
        line: 1 + bytes[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count(),
        column: 1 + bytes[..e.valid_up_to()].iter().rev().take_while(|&&b| b != b'\n').count(),
        message: "input is not UTF-8".into(),
    })?;
    parse(text)
}

/// Parses and validates one file. Syntax and layout errors carry the line
/// and column; table errors name the field and entry index.
pub fn parse(text: &str) -> Result<WorkbenchFile> {
    let header: Header = serde_json::from_str(text).map_err(json_error)?;
    match header.schema_version {
        Some(SCHEMA_VERSION) => {}
        Some(v) => return Err(Error::Schema(format!("unsupported schema_version {v}"))),
        None => return Err(Error::Schema("missing schema_version".into())),
    }
    let kind = header.kind.ok_or_else(|| Error::Schema("missing kind".into()))?;
    match kind.as_str() {
        "algebra" => {
            let doc: AlgebraFileDoc = serde_json::from_str(text).map_err(json_error)?;
            let algebra = algebra_from_parts(&doc.basis, &doc.product, &doc.differential)?;
            Ok(WorkbenchFile::Algebra { algebra, d: doc.d })
        }
        "bracket" => {
            let doc: BracketFileDoc = serde_json::from_str(text).map_err(json_error)?;
            let algebra = algebra_from_doc(&doc.algebra)?;
            let s = algebra.space().clone();
            let table = map_from_entries(&[s.clone(), s.clone()], &[s.clone(), s.clone()], -doc.d, &doc.bracket, "bracket")?;
            let bracket = DoubleBracket::new(doc.d, table)?;
            Ok(WorkbenchFile::Bracket { algebra, bracket })
        }
        "pinfty" => {
            let doc: PinftyFileDoc = serde_json::from_str(text).map_err(json_error)?;
            let algebra = algebra_from_doc(&doc.algebra)?;
            let s = algebra.space().clone();
            let mut brackets = BTreeMap::new();
            for a in &doc.brackets {
                if a.arity == 0 || brackets.contains_key(&a.arity) {
                    return Err(Error::Schema(format!("bracket arity {} is zero or repeated", a.arity)));
                }
                let field = format!("brackets[{}]", a.arity);
                let dom = vec![s.clone(); a.arity];
                let m = map_from_entries(&dom, &dom, 2 - a.arity as i64, &a.entries, &field)?;
                brackets.insert(a.arity, m);
            }
            Ok(WorkbenchFile::Pinfty(PInfinityFamily::new(algebra, brackets)?))
        }
        "ainfty" => {
            let doc: AinftyFileDoc = serde_json::from_str(text).map_err(json_error)?;
            let space = space_from_basis(&doc.basis)?;
            let parts = doc
                .basis
                .iter()
                .map(|b| match b.part.as_deref() {
                    None => Ok(Part::A),
                    Some(p) if p.chars().count() == 1 => Part::from_letter(p.chars().next().unwrap()),
                    Some(p) => Err(Error::Schema(format!("unknown part `{p}` for basis symbol `{}`", b.name))),
                })
                .collect::<Result<Vec<_>>>()?;
            let form = match &doc.form {
                None => None,
                Some(f) => {
                    let two = [space.clone(), space.clone()];
                    Some(BilinearForm::new(map_from_entries(&two, &[], f.degree, &f.entries, "form")?)?)
                }
            };
            let mut s = AInfinity::new(space.clone(), parts, form)?;
            for a in &doc.ops {
                if a.arity == 0 || s.op(a.arity).is_some() {
                    return Err(Error::Schema(format!("operation arity {} is zero or repeated", a.arity)));
                }
                let field = format!("ops[{}]", a.arity);
                let m = map_from_entries(&vec![space.clone(); a.arity], std::slice::from_ref(&space), 2 - a.arity as i64, &a.entries, &field)?;
                s.set_op(a.arity, m)?;
            }
            Ok(WorkbenchFile::Ainfty(s))
        }
        "morphism" => {
            let doc: MorphismFileDoc = serde_json::from_str(text).map_err(json_error)?;
            let mut map = Vec::with_capacity(doc.map.len());
            for (idx, e) in doc.map.iter().enumerate() {
                if e.input.len() != 1 || e.out.len() != 1 {
                    return Err(Error::Schema(format!("map entry {idx}: expected one input and one output symbol")));
                }
                let c = parse_rational(&e.coeff).map_err(|er| at_entry(er, "map", idx))?;
                map.push((e.input[0].clone(), e.out[0].clone(), c));
            }
            let mut seen = std::collections::BTreeSet::new();
            for (idx, (x, y, _)) in map.iter().enumerate() {
                if !seen.insert((x.clone(), y.clone())) {
                    return Err(Error::Schema(format!("map entry {idx}: repeats ({x}, {y})")));
                }
            }
            map.retain(|(_, _, c)| !c.is_zero());
            map.sort_by(|x, y| (&x.0, &x.1).cmp(&(&y.0, &y.1)));
            Ok(WorkbenchFile::Morphism(MorphismFile {
                source: doc.source,
                target: doc.target,
                map,
            }))
        }
        other => Err(Error::Schema(format!("unknown kind `{other}`"))),
    }
}

/// Reads a file from disk.
pub fn load(path: &Path) -> Result<WorkbenchFile> {
    let bytes = std::fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_bytes(&bytes)
}

fn space_from_basis(basis: &[BasisDoc]) -> Result<Space> {
    let elems = basis.iter().map(|b| BasisElement::new(b.name.clone(), b.degree)).collect();
    Ok(GradedSpace::new(elems)?.into_shared())
}

fn algebra_from_doc(doc: &AlgebraDoc) -> Result<DgAlgebra> {
    algebra_from_parts(&doc.basis, &doc.product, &doc.differential)
}

fn algebra_from_parts(basis: &[BasisDoc], product: &[EntryDoc], differential: &[EntryDoc]) -> Result<DgAlgebra> {
    if let Some(b) = basis.iter().find(|b| b.part.is_some()) {
        return Err(Error::Schema(format!("algebra basis symbol `{}` carries a part tag", b.name)));
    }
    let s = space_from_basis(basis)?;
    let one = [s.clone()];
    let prod = map_from_entries(&[s.clone(), s.clone()], &one, 0, product, "product")?;
    let diff = map_from_entries(&one, &one, 1, differential, "differential")?;
    DgAlgebra::new(s, prod, diff)
}

fn map_from_entries(domain: &[Space], codomain: &[Space], degree: i64, entries: &[EntryDoc], field: &str) -> Result<MultiMap> {
    let mut m = MultiMap::zero(domain.to_vec(), codomain.to_vec(), degree);
    let mut seen = std::collections::BTreeSet::new();
    for (idx, e) in entries.iter().enumerate() {
        if e.input.len() != domain.len() || e.out.len() != codomain.len() {
            return Err(Error::Schema(format!(
                "{field} entry {idx}: expected {} input and {} output symbols, found {} and {}",
                domain.len(),
                codomain.len(),
                e.input.len(),
                e.out.len()
            )));
        }
        let w: Word = e
            .input
            .iter()
            .zip(domain)
            .map(|(x, s)| symbol_at(s, x, field, idx))
            .collect::<Result<_>>()?;
        let v: Word = e
            .out
            .iter()
            .zip(codomain)
            .map(|(x, s)| symbol_at(s, x, field, idx))
            .collect::<Result<_>>()?;
        if !seen.insert((w.clone(), v.clone())) {
            return Err(Error::Schema(format!("{field} entry {idx}: repeats an earlier entry")));
        }
        let c = parse_rational(&e.coeff).map_err(|er| at_entry(er, field, idx))?;
        m.add_entry(&w, &v, c).map_err(|er| at_entry(er, field, idx))?;
    }
    Ok(m)
}

// ---- serialization ----

fn basis_doc(space: &GradedSpace, parts: Option<&[Part]>) -> Vec<BasisDoc> {
    space
        .basis()
        .iter()
        .enumerate()
        .map(|(i, b)| BasisDoc {
            name: b.symbol.clone(),
            degree: b.degree,
            part: parts.map(|p| p[i].letter().to_string()),
        })
        .collect()
}

fn entries_doc(m: &MultiMap) -> Vec<EntryDoc> {
    let names = |spaces: &[Space], w: &[usize]| -> Vec<String> {
        spaces.iter().zip(w).map(|(s, &i)| s.symbol(i).to_string()).collect()
    };
    m.entries()
        .iter()
        .flat_map(|(w, o)| {
            o.iter().map(move |(v, c)| EntryDoc {
                input: names(m.domain(), w),
                out: names(m.codomain(), v),
                coeff: format_rational(c),
            })
        })
        .collect()
}

fn algebra_doc(alg: &DgAlgebra) -> AlgebraDoc {
    AlgebraDoc {
        basis: basis_doc(alg.space(), None),
        product: entries_doc(alg.product()),
        differential: entries_doc(alg.differential()),
    }
}

fn render<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

/// The canonical text of a parsed file.
pub fn serialize(file: &WorkbenchFile) -> String {
    match file {
        WorkbenchFile::Algebra { algebra, d } => serialize_algebra(algebra, *d),
        WorkbenchFile::Bracket { algebra, bracket } => serialize_bracket(algebra, bracket),
        WorkbenchFile::Pinfty(f) => serialize_pinfty(f),
        WorkbenchFile::Ainfty(s) => serialize_ainfty(s),
        WorkbenchFile::Morphism(m) => serialize_morphism(m),
    }
}

pub fn serialize_algebra(alg: &DgAlgebra, d: Option<i64>) -> String {
    let AlgebraDoc {
        basis,
        product,
        differential,
    } = algebra_doc(alg);
    render(&AlgebraFileDoc {
        schema_version: SCHEMA_VERSION,
        kind: FileKind::Algebra,
        basis,
        product,
        differential,
        d,
    })
}

pub fn serialize_bracket(alg: &DgAlgebra, br: &DoubleBracket) -> String {
    render(&BracketFileDoc {
        schema_version: SCHEMA_VERSION,
        kind: FileKind::Bracket,
        d: br.d(),
        algebra: algebra_doc(alg),
        bracket: entries_doc(br.table()),
    })
}

pub fn serialize_pinfty(fam: &PInfinityFamily) -> String {
    render(&PinftyFileDoc {
        schema_version: SCHEMA_VERSION,
        kind: FileKind::Pinfty,
        algebra: algebra_doc(fam.algebra()),
        brackets: fam
            .brackets()
            .iter()
            .filter(|(_, m)| !m.is_zero())
            .map(|(&arity, m)| ArityDoc {
                arity,
                entries: entries_doc(m),
            })
            .collect(),
    })
}

/// Operations that vanish are omitted.
pub fn serialize_ainfty(s: &AInfinity) -> String {
    let tagged = s.parts().iter().any(|&p| p != Part::A);
    render(&AinftyFileDoc {
        schema_version: SCHEMA_VERSION,
        kind: FileKind::Ainfty,
        basis: basis_doc(s.space(), tagged.then_some(s.parts())),
        ops: s
            .ops()
            .iter()
            .filter(|(_, m)| !m.is_zero())
            .map(|(&arity, m)| ArityDoc {
                arity,
                entries: entries_doc(m),
            })
            .collect(),
        form: s.form().map(|f| FormDoc {
            degree: f.degree(),
            entries: entries_doc(f.table()),
        }),
    })
}

/// The structure on `A ⊕ A#[d−1]`, with the dual part after `A`.
pub fn serialize_boundary(ba: &BoundaryAlgebra) -> String {
    serialize_ainfty(ba.structure())
}

pub fn serialize_morphism(m: &MorphismFile) -> String {
    let mut map: Vec<_> = m.map.iter().filter(|(_, _, c)| !c.is_zero()).collect();
    map.sort_by(|x, y| (&x.0, &x.1).cmp(&(&y.0, &y.1)));
    render(&MorphismFileDoc {
        schema_version: SCHEMA_VERSION,
        kind: FileKind::Morphism,
        source: m.source.clone(),
        target: m.target.clone(),
        map: map
            .into_iter()
            .map(|(x, y, c)| EntryDoc {
                input: vec![x.clone()],
                out: vec![y.clone()],
                coeff: format_rational(c),
            })
            .collect(),
    })
}

/// Is `s` in the canonical `p/q` form (lowest terms, `q > 0`)?
pub fn is_canonical_rational(s: &str) -> bool {
    match parse_rational(s) {
        Ok(x) => s.contains('/') && format_rational(&x) == s,
        Err(_) => false,
    }
}
