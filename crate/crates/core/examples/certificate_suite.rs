// Runs the full certificate suite on a configuration file (the shipped demo by
// default) and prints a one-line verdict per certificate.
//
//     cargo run --release --example certificate_suite -- [config.json]

use std::path::Path;

use frechet_holo::prelude::*;
use frechet_holo::scalar::format_rational;
use frechet_holo::suite::run_suite_with;

pub fn run(path: &Path) -> Result<CertificateReport> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let cfg = RunConfig::from_json(&text)?;
    let report = run_suite_with(&cfg, true)?;

    let verdict = |ok: bool| if ok { "pass" } else { "FAIL" };
    println!("{}", report.lemma.summary());
    println!(
        "continuous norm        {}",
        verdict(report.continuous_norm.has_continuous_norm)
    );
    println!(
        "norm from functionals  {}",
        verdict(report.norm_from_functionals)
    );
    for c in &report.theorem.continuity {
        println!(
            "continuity k = {:<6}  {}  (max ratio {}, C_k = {})",
            format_rational(&c.k),
            verdict(c.holds),
            c.max_ratio_decimal,
            format_rational(&c.c_k)
        );
    }
    let t = &report.theorem;
    println!("injectivity            {}", verdict(t.injectivity));
    println!("monomial round trip    {}", verdict(t.monomial_roundtrip));
    println!("polynomial round trip  {}", verdict(t.polynomial_roundtrip));
    println!(
        "density reconstruction {}",
        verdict(t.density_reconstruction)
    );
    if let Some(ms) = &report.environment.timings_ms {
        println!(
            "timings: construction {} ms, lemma {} ms, theorem {} ms",
            ms.construction, ms.lemma, ms.theorem
        );
    }
    println!("overall: {}", verdict(report.passed));
    Ok(report)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let default = concat!(env!("CARGO_MANIFEST_DIR"), "/configs/demo.json");
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| default.to_string());
    let report = run(Path::new(&path))?;
    if !report.passed {
        std::process::exit(1);
    }
    Ok(())
}
