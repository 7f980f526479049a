use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use cospans::selftest::{CheckOutcome, SelftestConfig, CHECKS, DEFAULT_SEED};

const LABELS: [&str; 11] = [
    "left adjoints are exactly the cospans with invertible wrong-way leg (all cospans, sizes <= 3, apex bound 6)",
    "canonical algebras are rigid (|A| <= 4)",
    "canonical algebras satisfy both counitality laws (|A| <= 4)",
    "transpose is 2-isomorphic to the mirror (exhaustive <= 3, 200 random <= 5)",
    "right adjoint of a right-way map is its transpose (all f, sizes <= 3)",
    "unital multiplications with right-way unit are the fold (|A| <= 2, apex bound 3)",
    "leg-commuting cells between right-way cospans are invertible (sizes <= 3)",
    "envelope hom-sets match brute force and are generated (total size <= 3)",
    "Beck-Chevalley cells invert exactly on pushout squares (100 squares, sizes <= 4)",
    "bar complex simplicial identities, rigid pushout, cocone (level 3, sizes <= 2)",
    "JSON round trips, repeatable reports, CLI selftest within 15 minutes",
];

const LIMITS: [Duration; 11] = [
    Duration::from_secs(300),
    Duration::from_secs(60),
    Duration::from_secs(300),
    Duration::from_secs(300),
    Duration::from_secs(300),
    Duration::from_secs(300),
    Duration::from_secs(300),
    Duration::from_secs(300),
    Duration::from_secs(300),
    Duration::from_secs(300),
    Duration::from_secs(900),
];

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cospans"))
}

fn workspace_file() -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("examples/data/workspace.json")
        .display()
        .to_string()
}

/// Runs the binary twice on the same input and compares stdout bytes.
fn repeatable(args: &[&str]) -> Result<(), String> {
    let once = || -> Result<Vec<u8>, String> {
        let out = bin().args(args).output().map_err(|e| e.to_string())?;
        if !out.status.success() {
            return Err(format!("{args:?} exited with {}", out.status));
        }
        Ok(out.stdout)
    };
    if once()? == once()? {
        Ok(())
    } else {
        Err(format!("{args:?} produced different bytes on a second run"))
    }
}

fn cli_checks() -> Result<(), String> {
    let ws = workspace_file();
    for args in [
        vec!["-i", &ws, "compose", "--left", "ww", "--right", "rw"],
        vec!["-i", &ws, "check-rigid", "--algebra", "fold"],
        vec!["-i", &ws, "transpose", "--cospan", "rw"],
        vec!["-i", &ws, "envbm-hom", "--dom", "X", "--cod", "Y"],
    ] {
        repeatable(&args)?;
    }
    let start = Instant::now();
    let out = bin()
        .args(["selftest", "--max-size", "3"])
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    if !out.status.success() {
        return Err(format!(
            "selftest exited with {}: {}",
            out.status,
            String::from_utf8_lossy(&out.stdout)
        ));
    }
    if elapsed > Duration::from_secs(900) {
        return Err(format!("selftest took {elapsed:?}"));
    }
    Ok(())
}

fn main() {
    let cfg = SelftestConfig::default();
    assert_eq!(cfg.seed, DEFAULT_SEED);
    assert_eq!((cfg.adjoint_size, cfg.adjoint_apex_bound), (3, 6));
    assert_eq!(cfg.algebra_size, 4);
    assert_eq!(
        (cfg.exhaustive_size, cfg.random_transposes, cfg.random_size),
        (3, 200, 5)
    );
    assert_eq!((cfg.classify_size, cfg.classify_apex_bound), (2, 3));
    assert_eq!(cfg.envbm_size, 3);
    assert_eq!((cfg.squares, cfg.square_size), (100, 4));
    assert_eq!((cfg.bar_level, cfg.bar_size), (3, 2));

    let mut failed = Vec::new();
    for (i, check) in CHECKS.iter().enumerate() {
        let CheckOutcome {
            name,
            mut passed,
            instances,
            mut detail,
            seconds,
        } = check(&cfg);
        if seconds > LIMITS[i].as_secs_f64() {
            passed = false;
            detail = format!("took {seconds:.1}s, limit {:?}; {detail}", LIMITS[i]);
        }
        if i == 10 && passed {
            if let Err(e) = cli_checks() {
                passed = false;
                detail = e;
            }
        }
        let verdict = if passed { "PASS" } else { "FAIL" };
        println!(
            "{verdict} criterion {:>2}: {} [{name}; {instances} instances; {seconds:.2}s]{}",
            i + 1,
            LABELS[i],
            if passed {
                String::new()
            } else {
                format!(": {detail}")
            }
        );
        if !passed {
            failed.push(i + 1);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
    println!("all {} criteria passed", CHECKS.len());
}
