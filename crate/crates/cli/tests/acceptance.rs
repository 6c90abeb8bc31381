//! Acceptance criteria, one line each. Runs without the libtest harness so the
//! lines come out in order and unbuffered.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use bicx::verify::{self, Check};
use bicx::RingSpec;

const SEED: u64 = 42;
const ALL_RINGS: [RingSpec; 4] = [
    RingSpec::Rationals,
    RingSpec::PrimeField(2),
    RingSpec::PrimeField(3),
    RingSpec::Integers,
];
const FIELDS: [RingSpec; 2] = [RingSpec::PrimeField(2), RingSpec::PrimeField(3)];

struct Outcome {
    passed: bool,
    details: Vec<String>,
}

impl From<Check> for Outcome {
    fn from(c: Check) -> Self {
        Outcome {
            passed: c.passed,
            details: c.details,
        }
    }
}

fn verify_paper() -> Outcome {
    let out = Command::new(env!("CARGO_BIN_EXE_bicx"))
        .args(["verify-paper", "--max-p", "5", "--seed", "42"])
        .output()
        .expect("spawn bicx");
    let stdout = String::from_utf8_lossy(&out.stdout);
    let names = [
        verify::rank_tables(0).name,
        verify::acyclicity(0, &[RingSpec::Rationals]).name,
        verify::simplicial_identification(0).name,
        verify::tensor_identities(RingSpec::Integers, 0).name,
        verify::rlp_agreement(SEED, 0, &FIELDS).name,
        verify::spectral_consistency(SEED, 0, RingSpec::Rationals).name,
        verify::ce_resolutions(SEED, 0).name,
        verify::adjunction_sanity(SEED).name,
        verify::torsion(SEED, 0).name,
    ];
    let missing: Vec<&String> = names
        .iter()
        .filter(|n| !stdout.contains(&format!("[PASS] {n}")))
        .collect();
    let mut details = vec![format!("exit status {}", out.status)];
    details.extend(missing.iter().map(|n| format!("not reported as passing: {n}")));
    Outcome {
        passed: out.status.success() && missing.is_empty(),
        details,
    }
}

fn main() -> ExitCode {
    type Criterion = (&'static str, u64, Box<dyn Fn() -> Outcome>);
    let criteria: Vec<Criterion> = vec![
        (
            "rank tables, p <= 6",
            1,
            Box::new(|| verify::rank_tables(6).into()),
        ),
        (
            "acyclicity over Q, F_2, F_3, Z, p <= 6",
            5,
            Box::new(|| verify::acyclicity(6, &ALL_RINGS).into()),
        ),
        (
            "simplicial identification, p <= 6",
            5,
            Box::new(|| verify::simplicial_identification(6).into()),
        ),
        (
            "tensor identity suite, p, s <= 3",
            10,
            Box::new(|| verify::tensor_identities(RingSpec::Integers, 3).into()),
        ),
        (
            "RLP agreement, 200 maps per structure and ring",
            120,
            Box::new(|| verify::rlp_agreement(SEED, 200, &FIELDS).into()),
        ),
        (
            "spectral consistency, 100 objects over Q",
            60,
            Box::new(|| verify::spectral_consistency(SEED, 100, RingSpec::Rationals).into()),
        ),
        (
            "CE resolutions, 50 complexes over Z",
            60,
            Box::new(|| verify::ce_resolutions(SEED, 50).into()),
        ),
        (
            "column-0 adjunction sanity",
            10,
            Box::new(|| verify::adjunction_sanity(SEED).into()),
        ),
        (
            "torsion and 1000 SNF certificates",
            30,
            Box::new(|| verify::torsion(SEED, 1000).into()),
        ),
        ("verify-paper --max-p 5 --seed 42", 300, Box::new(verify_paper)),
    ];
    let mut failures = 0;
    for (i, (name, bound, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = f();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(*bound);
        let ok = o.passed && in_time;
        if !ok {
            failures += 1;
        }
        println!(
            "[{}] {:>2}. {name} ({:.2} s, bound {bound} s)",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            elapsed.as_secs_f64()
        );
        if !ok {
            for d in &o.details {
                println!("        {d}");
            }
            if !in_time {
                println!("        over time");
            }
        }
    }
    println!("{}/{} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
