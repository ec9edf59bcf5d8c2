//! Shared fixtures: corpus files on disk and scripted runs of the binary.

#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

use precy::correspondence::{boundary_algebra, precy_from_bracket};
use precy::corpus;
use precy::dpa::DoubleBracket;
use precy::functoriality::DpaMorphism;
use precy::io::{self, FileRef, MorphismFile};
use precy::pinfty::{precy_from_pinfty, PInfinityFamily};

/// Canonical text of every corpus object, built from scratch.
pub fn corpus_texts() -> Vec<String> {
    let mut out = Vec::new();
    for named in corpus::algebra_corpus() {
        out.push(io::serialize_algebra(&named.value, Some(1)));
        out.push(io::serialize_boundary(&boundary_algebra(&named.value, 1).unwrap()));
    }
    for named in corpus::bracket_corpus() {
        let (alg, br) = &named.value;
        out.push(io::serialize_bracket(alg, br));
        out.push(io::serialize_boundary(&precy_from_bracket(alg, br, false).unwrap()));
    }
    for fam in corpus::nilpotent_pinfty_families(0, &[0, 0, -1], &[1, 2, 3], true).into_iter().take(6) {
        out.push(io::serialize_pinfty(&fam));
        out.push(io::serialize_boundary(&precy_from_pinfty(&fam, false).unwrap()));
    }
    out
}

pub fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

/// Writes a morphism together with its source and target bracket files.
pub fn write_morphism(dir: &Path, stem: &str, phi: &DpaMorphism) -> PathBuf {
    let src = write(dir, &format!("{stem}-source.json"), &io::serialize_bracket(&phi.source, &phi.source_bracket));
    let tgt = write(dir, &format!("{stem}-target.json"), &io::serialize_bracket(&phi.target, &phi.target_bracket));
    let m = MorphismFile::from_morphism(
        phi,
        FileRef::to_file(&src, dir).unwrap(),
        FileRef::to_file(&tgt, dir).unwrap(),
    );
    write(dir, &format!("{stem}.json"), &io::serialize_morphism(&m))
}

#[derive(Debug)]
pub struct Scenario {
    pub name: &'static str,
    pub args: Vec<String>,
    pub expected: i32,
    pub got: i32,
    /// stdout of two independent runs agreed byte for byte
    pub repeatable: bool,
    /// extra condition of the scenario
    pub extra: bool,
    pub stdout: String,
}

impl Scenario {
    pub fn ok(&self) -> bool {
        self.expected == self.got && self.repeatable && self.extra
    }
}

pub fn binary() -> &'static str {
    env!("CARGO_BIN_EXE_precy")
}

fn run_once(args: &[String]) -> (i32, String, String) {
    let out = Command::new(binary())
        .args(args)
        .env_remove(precy::cli::REPORT_ENV)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn scenario(name: &'static str, args: &[&str], expected: i32, extra: impl Fn(&str) -> bool) -> Scenario {
    let args: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    let (got, a, _) = run_once(&args);
    let (_, b, _) = run_once(&args);
    // a repeated construction with --out writes the same file again, so
    // stdout comparison covers the report
    Scenario {
        name,
        extra: extra(&a),
        args,
        expected,
        got,
        repeatable: a == b,
        stdout: a,
    }
}

/// The scripted scenarios; files live in a fresh temporary directory.
pub fn run_scenarios() -> Vec<Scenario> {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let s = |p: &Path| p.to_str().unwrap().to_string();

    let (nil, nil_br) = corpus::nilpotent_example();
    let zero = write(dir, "zero-bracket.json", &io::serialize_bracket(&nil, &DoubleBracket::zero(nil.space().clone(), 1)));
    let alg = write(dir, "algebra.json", &io::serialize_algebra(&nil, Some(2)));
    let poisson = write(dir, "poisson.json", &io::serialize_bracket(&nil, &nil_br));
    let poisson_text = std::fs::read_to_string(&poisson).unwrap();
    let mutated = corpus::bracket_corpus()
        .into_iter()
        .find_map(|n| {
            let (a, b) = n.value;
            corpus::single_axiom_mutations(&a, &b, 1)
                .into_iter()
                .find(|m| m.violated == corpus::Axiom::Antisymmetry)
                .map(|m| (a, m.bracket))
        })
        .unwrap();
    let mutation = write(dir, "mutation.json", &io::serialize_bracket(&mutated.0, &mutated.1));
    let unknown = write(
        dir,
        "unknown.json",
        r#"{"schema_version":1,"kind":"bracket","d":0,"algebra":{"basis":[{"name":"x","degree":0}],"product":[],"differential":[]},"bracket":[{"in":["x","z"],"out":["x","x"],"coeff":"1/1"}]}"#,
    );
    let malformed = write(dir, "malformed.json", "{\"schema_version\": 1,\n \"kind\": \"algebra\",\n \"basis\": [");
    let m1sq = write(
        dir,
        "m1sq.json",
        r#"{"schema_version":1,"kind":"ainfty","basis":[{"name":"x","degree":0},{"name":"y","degree":1},{"name":"z","degree":2}],
           "ops":[{"arity":1,"entries":[{"in":["x"],"out":["y"],"coeff":"1/1"},{"in":["y"],"out":["z"],"coeff":"1/1"}]}]}"#,
    );
    let fam: PInfinityFamily = corpus::nilpotent_pinfty_families(0, &[0, 0, -1], &[1, 2, 3], true)
        .into_iter()
        .find(|f| f.bracket(3).is_some())
        .unwrap();
    let family = write(dir, "family.json", &io::serialize_pinfty(&fam));
    let family_text = std::fs::read_to_string(&family).unwrap();

    let pairs = corpus::composable_pairs();
    let qiso_pair = pairs.iter().find(|n| n.name.contains("id")).unwrap_or(&pairs[0]);
    let (phi, psi) = &qiso_pair.value;
    let phi_path = write_morphism(dir, "phi", phi);
    let psi_path = write_morphism(dir, "psi", psi);
    let non_qiso = pairs
        .iter()
        .map(|n| &n.value.0)
        .find(|m| !precy::functoriality::check_dpa_quasi_iso(m).unwrap())
        .expect("some corpus morphism is not a quasi-isomorphism");
    let nq_path = write_morphism(dir, "nq", non_qiso);
    let tampered = write(
        dir,
        "tampered.json",
        &std::fs::read_to_string(&phi_path).unwrap().replacen("\"sha256\": \"", "\"sha256\": \"0", 1),
    );

    let ba = dir.join("ba.json");
    let pba = dir.join("pba.json");
    let forced = dir.join("forced.json");
    let mut out = vec![
        scenario("check zero bracket", &["check", "dpa", &s(&zero)], 0, |_| true),
        scenario("check algebra as zero bracket", &["check", "dpa", &s(&alg)], 0, |_| true),
        scenario("check poisson bracket", &["check", "dpa", &s(&poisson), "--report", "json"], 0, |o| {
            serde_json::from_str::<serde_json::Value>(o).is_ok()
        }),
        scenario("check mutated bracket", &["check", "dpa", &s(&mutation)], 1, |o| o.contains("FAIL  antisymmetry")),
        scenario("unknown symbol", &["check", "dpa", &s(&unknown)], 2, |o| o.contains("`z`") && o.contains("entry 0")),
        scenario("malformed file", &["check", "dpa", &s(&malformed), "--report", "json"], 2, |o| o.contains("line 3")),
        scenario("roundtrip bracket", &["roundtrip", &s(&poisson)], 0, |o| o == poisson_text),
        scenario("build boundary algebra", &["build", "precy", &s(&poisson), "--out", &s(&ba)], 0, |_| true),
        scenario("check boundary algebra", &["check", "ainfty", &s(&ba), "--ultra", "full"], 0, |o| o.contains("verdict: pass")),
        scenario("extract bracket", &["extract", "bracket", &s(&ba)], 0, |o| o == poisson_text),
        scenario("m1 squared", &["check", "ainfty", &s(&m1sq), "--max-n", "1", "--report", "json"], 1, |o| {
            let v: serde_json::Value = serde_json::from_str(o).unwrap();
            v["checks"][0]["name"] == "SI(1)" && v["checks"][0]["witness"]["symbols"][0] == "x"
        }),
        scenario("build from failing bracket", &["build", "precy", &s(&mutation)], 1, |o| o.contains("FAIL")),
        scenario("forced build", &["build", "precy", &s(&mutation), "--force", "--out", &s(&forced)], 1, |_| true),
        scenario("check family", &["check", "pinf", &s(&family), "--ultra", "full"], 0, |_| true),
        scenario("build from family", &["build", "pinf-precy", &s(&family), "--out", &s(&pba)], 0, |o| o.contains("predicates:") && o.contains("good")),
        scenario("extract family", &["extract", "pinf", &s(&pba)], 0, |o| o == family_text),
        scenario("roundtrip family", &["roundtrip", &s(&family)], 0, |o| o == family_text),
        scenario("build mixed boundary", &["build", "morphism", &s(&phi_path), "--out", &s(&dir.join("mb.json"))], 0, |_| true),
        scenario("compose", &["compose", &s(&phi_path), &s(&psi_path), "--out", &s(&dir.join("c.json"))], 0, |_| true),
        scenario("cohomology", &["cohomology", &s(&alg), "--report", "json"], 0, |o| {
            let v: serde_json::Value = serde_json::from_str(o).unwrap();
            v["data"]["cohomology"] == serde_json::json!({"-1": 1, "0": 1})
        }),
        scenario("quasi-iso", &["quasiiso", &s(&phi_path)], 0, |_| true),
        scenario("not a quasi-iso", &["quasiiso", &s(&nq_path)], 1, |_| true),
        scenario("tampered reference", &["build", "morphism", &s(&tampered)], 2, |o| o.contains("sha256")),
        scenario("bad permutation mode", &["check", "ainfty", &s(&ba), "--ultra", "some"], 2, |_| true),
    ];
    // the forced build still wrote its object
    if let Some(sc) = out.iter_mut().find(|sc| sc.name == "forced build") {
        sc.extra = forced.exists();
    }
    // the mixed boundary written by --out parses
    if let Some(sc) = out.iter_mut().find(|sc| sc.name == "build mixed boundary") {
        sc.extra = io::load(&dir.join("mb.json")).is_ok();
    }
    out
}
