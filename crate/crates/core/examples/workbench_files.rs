//! Canonical JSON files and the command-line workbench, run in process.

use precy::corpus;
use precy::io;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join(format!("precy-workbench-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;

    let (alg, br) = corpus::nilpotent_example();
    let bracket = dir.join("bracket.json");
    std::fs::write(&bracket, io::serialize_bracket(&alg, &br))?;
    println!("{}", std::fs::read_to_string(&bracket)?);

    let ba = dir.join("boundary.json");
    let run = |args: &[&str]| {
        let mut argv = vec!["precy".to_string()];
        argv.extend(args.iter().map(|s| s.to_string()));
        let out = precy::cli::run(&argv);
        println!("$ precy {}  -> exit {}", args.join(" "), out.exit_code);
        print!("{}", out.report.to_text());
        out
    };
    let path = |p: &std::path::Path| p.to_str().expect("utf-8 path").to_string();
    run(&["check", "dpa", &path(&bracket)]);
    let built = run(&["build", "precy", &path(&bracket)]);
    std::fs::write(&ba, built.object.expect("build emits a file"))?;
    run(&["check", "ainfty", &path(&ba), "--ultra", "full"]);
    let extracted = run(&["extract", "bracket", &path(&ba)]);
    println!("extracted file equals the input: {}", extracted.object.as_deref() == Some(&*std::fs::read_to_string(&bracket)?));

    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
