//! Scratch driver: compare old emitted certificate and a fresh solve against
//! golden R1/R2 for carlitz-1.

use telsum::bizeil;
use telsum::corpus::example;
use telsum::parse::parse_ratfun;
use telsum::{CertificateDoc, SolveOptions};

fn main() {
    let ex = example("carlitz-1").unwrap();
    let roles = ex.roles().unwrap();
    let vars = roles.vars();
    let f = ex.hyperterm().unwrap();

    let want = |s: (&str, &str)| {
        parse_ratfun(s.0, &vars)
            .unwrap()
            .div(&parse_ratfun(s.1, &vars).unwrap())
            .unwrap()
    };
    let w1 = want(ex.golden_r1.unwrap());
    let w2 = want(ex.golden_r2.unwrap());

    let text = std::fs::read_to_string("/tmp/c1cert.json").unwrap();
    let doc: CertificateDoc = serde_json::from_str(&text).unwrap();
    let old = doc.to_certificate(&roles).unwrap();
    println!("old cert: g1={} g2={}", old.g1, old.g2);
    println!("old R1 == golden: {}", old.r1 == w1);
    println!("old R2 == golden: {}", old.r2 == w2);

    let cert = bizeil(&f, &SolveOptions::default()).unwrap();
    println!("new cert: g1={} g2={}", cert.g1, cert.g2);
    println!("new R1 == golden: {}", cert.r1 == w1);
    println!("new R2 == golden: {}", cert.r2 == w2);
    println!("new == old: r1 {} r2 {}", cert.r1 == old.r1, cert.r2 == old.r2);
}
