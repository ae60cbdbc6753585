//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::path::PathBuf;
use std::process::{Command, ExitCode};

use itertools::Itertools;
use jointpir::codes::{
    build_expanded_2n2, build_expanded_parity, build_joint_2n2, build_joint_parity, circulant_pair_row,
    min_field_2n2, pair_checks, CoeffSet, JointCode,
};
use jointpir::gf::{circulant_from_row, prime_power_parts, rank, Elem, Field};
use jointpir::harness::files::{CodeFile, ReportFile, ReportKind};
use jointpir::harness::tables::{compare_golden, paper_tables, render_document};
use jointpir::pir::Scheme;
use jointpir::rational::Rational;
use jointpir::verification::{
    barrier_report, barrier_sweep, capacity_separate, check_correctness, check_privacy, oracle_mds_injectivity,
    seeded_rng, SweepConfig,
};

type Outcome = Result<Vec<String>, String>;

const TRIALS: usize = 50;
const SEED: u64 = 2024;

/// Pinned expanded-2n2 searches: `(N0, m, seed)`.
const EXPANDED_2N2: [(usize, usize, u64); 2] = [(3, 2, 1), (4, 2, 1)];
const EXPANDED_2N2_ATTEMPTS: u64 = 1000;

fn r(n: i128, d: i128) -> Rational {
    Rational::new(n, d).unwrap()
}

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn e2s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// MDS, privacy, exhaustive correctness and the barrier, all required.
fn full_checks(name: &str, scheme: &Scheme) -> Result<(), String> {
    let mds = scheme.code().verify_mds();
    ensure(mds.ok, || format!("{name}: failing subsets {:?}", mds.failing_subsets))?;
    let privacy = check_privacy(scheme);
    ensure(privacy.ok, || format!("{name}: privacy violation {:?}", privacy.first_violation))?;
    let corr = check_correctness(scheme, TRIALS, &mut seeded_rng(SEED)).map_err(e2s)?;
    ensure(corr.ok, || format!("{name}: correctness failures {:?}", corr.failures))?;
    let b = barrier_report(scheme).map_err(e2s)?;
    ensure(b.broken, || format!("{name}: rate {} does not exceed {}", b.rate, b.c_perp))
}

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

fn criterion_1() -> Outcome {
    let tables = paper_tables().map_err(e2s)?;
    let results = compare_golden(&tables, &golden_dir());
    let labelled: Vec<_> = results.iter().filter(|g| !g.structural).collect();
    ensure(labelled.len() == 11, || format!("expected 11 label tables, found {}", labelled.len()))?;
    let bad: Vec<_> = labelled.iter().filter(|g| !g.passed()).map(|g| (g.id, g.status)).collect();
    ensure(bad.is_empty(), || format!("golden mismatches: {bad:?}"))?;
    let structural = results.iter().filter(|g| g.structural && g.passed()).count();
    Ok(vec![format!(
        "tables I-IX byte-identical ({} files); structural X-XIV matched: {structural}",
        labelled.len()
    )])
}

fn det3(field: &Field, m: &jointpir::gf::Mat) -> Elem {
    let e = |r: usize, c: usize| m[(r, c)];
    let mul3 = |a: Elem, b: Elem, c: Elem| field.mul(field.mul(a, b), c);
    let plus = field.sum([
        mul3(e(0, 0), e(1, 1), e(2, 2)),
        mul3(e(0, 1), e(1, 2), e(2, 0)),
        mul3(e(0, 2), e(1, 0), e(2, 1)),
    ]);
    let minus = field.sum([
        mul3(e(0, 2), e(1, 1), e(2, 0)),
        mul3(e(0, 0), e(1, 2), e(2, 1)),
        mul3(e(0, 1), e(1, 0), e(2, 2)),
    ]);
    field.sub(plus, minus)
}

fn criterion_2() -> Outcome {
    let field = Field::new(3, 1).map_err(e2s)?;
    let code = build_joint_2n2(4, Some(field.clone()), 1).map_err(e2s)?;
    let mds = code.verify_mds();
    ensure(mds.checked == 6, || format!("checked {} pairs", mds.checked))?;
    // Databases 3 and 4 (0-based 2 and 3): the circulant is a cyclic row
    // permutation of the worked 3x3 example, so the determinant is 2.
    let circ = circulant_from_row(&circulant_pair_row(&field, 4, 2, 3, 1));
    let det = det3(&field, &circ);
    ensure(det == field.from_int(2), || format!("pair (3,4) determinant {det}"))?;
    ensure(rank(&field, &code.stacked(&[2, 3])) == 6, || "pair (3,4) stacked rank".into())?;
    let scheme = Scheme::new(code).map_err(e2s)?;
    full_checks("(2,4,2)", &scheme)?;
    let b = barrier_report(&scheme).map_err(e2s)?;
    ensure(b.rate == r(3, 4) && b.c_perp == r(2, 3), || format!("rate {} c_perp {}", b.rate, b.c_perp))?;
    let corr = check_correctness(&scheme, TRIALS, &mut seeded_rng(SEED)).map_err(e2s)?;
    ensure(corr.pairs == 6 && corr.trials == TRIALS, || "correctness coverage".into())?;
    Ok(vec![format!("rate {} > C_perp {}, det(3,4) = {det}, 6/6 pairs, 6 (k*,f) x {TRIALS} trials", b.rate, b.c_perp)])
}

fn criterion_3() -> Outcome {
    let mut notes = Vec::new();
    for n in 3..=10usize {
        let bounds = min_field_2n2(n).map_err(e2s)?;
        let code = build_joint_2n2(n, None, 0).map_err(e2s)?;
        let q = code.field().order() as u64;
        let candidates = bounds.candidate_orders();
        ensure(candidates.contains(&q), || format!("N={n}: GF({q}) is not a bound candidate"))?;
        for &smaller in candidates.iter().filter(|&&c| c < q) {
            let (p, m) = prime_power_parts(smaller).unwrap();
            let f = Field::new(p, m).map_err(e2s)?;
            ensure(build_joint_2n2(n, Some(f), 0).is_err(), || {
                format!("N={n}: smaller candidate GF({smaller}) also works")
            })?;
        }
        // Pair criterion vs direct rank; exact since N-1 = r p^l with r | q-1.
        let (p, _) = prime_power_parts(q).unwrap();
        let mut r_part = (n - 1) as u64;
        while r_part % p as u64 == 0 {
            r_part /= p as u64;
        }
        ensure((q - 1) % r_part == 0, || format!("N={n}: r={r_part} does not divide q-1={}", q - 1))?;
        let checks = pair_checks(code.field(), n, 0);
        ensure(checks.iter().all(|c| c.common_root != c.full_rank), || {
            format!("N={n}: criterion disagrees with rank on {checks:?}")
        })?;
        // Over smaller fields only "common root implies singular" is guaranteed.
        for small in 2..q {
            if let Some((p, m)) = prime_power_parts(small) {
                let f = Field::new(p, m).map_err(e2s)?;
                for c in pair_checks(&f, n, 0) {
                    ensure(!c.common_root || !c.full_rank, || {
                        format!("N={n} GF({small}): common root but full rank at ({}, {})", c.i, c.j)
                    })?;
                }
            }
        }
        let scheme = Scheme::new(code).map_err(e2s)?;
        full_checks(&format!("N={n}"), &scheme)?;
        let b = barrier_report(&scheme).map_err(e2s)?;
        let (ni, n2) = (n as i128, n as i128 + 2);
        ensure(b.rate == r(ni - 1, ni) && b.c_perp == r(ni, n2), || format!("N={n}: {b:?}"))?;
        ensure(b.margin.is_positive(), || format!("N={n}: margin {}", b.margin))?;
        notes.push(format!("N={n}:GF({q}) margin {}", b.margin));
    }
    Ok(vec![notes.join(", ")])
}

fn criterion_4() -> Outcome {
    let mut notes = Vec::new();
    for k in 2..=8usize {
        let scheme = Scheme::new(build_joint_parity(k).map_err(e2s)?).map_err(e2s)?;
        full_checks(&format!("K={k}"), &scheme)?;
        let cap = capacity_separate(k, k + 1, k).map_err(e2s)?;
        // Independent evaluation of the K-term sum.
        let ratio = r(k as i128, k as i128 + 1);
        let sum = (0..k as u32).fold(Rational::zero(), |acc, e| acc + ratio.pow(e));
        ensure(cap == sum.recip().unwrap(), || format!("K={k}: capacity {cap}"))?;
        let rate = scheme.retrieval_rate();
        ensure(rate == r(2, k as i128 + 1) && rate > cap, || format!("K={k}: rate {rate} vs {cap}"))?;
        notes.push(format!("K={k}: {rate} > {cap}"));
    }
    Ok(vec![notes.join(", ")])
}

fn criterion_5() -> Outcome {
    let mut notes = Vec::new();
    for (k, m) in [(2, 2), (2, 3), (3, 2)] {
        let code = build_expanded_parity(k, m, None).map_err(e2s)?;
        let q = code.field().order();
        let mds = code.verify_mds();
        let expected = binom(m * (k + 1), m * k);
        ensure(mds.ok && mds.checked == expected, || {
            format!("(K,m)=({k},{m}): {}/{expected} subsets, failing {:?}", mds.checked, mds.failing_subsets)
        })?;
        let scheme = Scheme::new(code).map_err(e2s)?;
        full_checks(&format!("(K,m)=({k},{m})"), &scheme)?;
        let base = Scheme::new(build_joint_parity(k).map_err(e2s)?).map_err(e2s)?;
        let b = barrier_report(&scheme).map_err(e2s)?;
        ensure(b.rate == base.retrieval_rate(), || format!("(K,m)=({k},{m}): rate {}", b.rate))?;
        let base_cap = capacity_separate(k, k + 1, k).map_err(e2s)?;
        ensure(b.c_perp == base_cap, || format!("(K,m)=({k},{m}): C_perp {} != base {base_cap}", b.c_perp))?;
        if (k, m) == (2, 2) {
            ensure(b.c_perp == r(3, 5) && b.margin == r(1, 15), || format!("(2,2): {b:?}"))?;
        }
        notes.push(format!("(K,m)=({k},{m}) GF({q}) {expected} subsets, margin {}", b.margin));
    }
    Ok(vec![notes.join(", ")])
}

fn expanded_2n2_codes() -> Result<Vec<(usize, usize, u64, JointCode, CoeffSet, u64)>, String> {
    EXPANDED_2N2
        .iter()
        .map(|&(n0, m, seed)| {
            let (code, coeffs, stats) = build_expanded_2n2(n0, m, seed, EXPANDED_2N2_ATTEMPTS).map_err(e2s)?;
            Ok((n0, m, seed, code, coeffs, stats.attempts))
        })
        .collect()
}

fn criterion_6() -> Outcome {
    let mut notes = Vec::new();
    for (n0, m, seed, code, coeffs, attempts) in expanded_2n2_codes()? {
        let q = code.field().order();
        ensure(q <= 1 << 10, || format!("(N0,m)=({n0},{m}): field {q} exceeds 2^10"))?;
        ensure(attempts <= EXPANDED_2N2_ATTEMPTS, || format!("{attempts} attempts"))?;
        let expected = binom(m * n0, 2 * m);
        let mds = code.verify_mds();
        ensure(mds.ok && mds.checked == expected, || format!("(N0,m)=({n0},{m}): {mds:?}"))?;
        ensure(coeffs.singular_blocks(code.field()) == 0, || "singular H/G block".into())?;
        ensure(coeffs.blocks().len() == (n0 - 2) * (n0 - 1), || "block count".into())?;
        // Re-verify from the serialized form.
        let reloaded = CodeFile::from_json(&CodeFile::from_code(&code).to_json())
            .and_then(|f| f.to_code())
            .map_err(e2s)?;
        ensure(reloaded.verify_mds() == mds, || "re-verification from CodeFile differs".into())?;
        let scheme = Scheme::new(code).map_err(e2s)?;
        full_checks(&format!("(N0,m)=({n0},{m})"), &scheme)?;
        let b = barrier_report(&scheme).map_err(e2s)?;
        let n = n0 as i128;
        ensure(b.rate == r(n - 1, n), || format!("rate {}", b.rate))?;
        let cap = capacity_separate(2, m * n0, 2 * m).map_err(e2s)?;
        ensure(b.c_perp == cap && b.margin.is_positive(), || format!("{b:?}"))?;
        notes.push(format!(
            "(N0,m)=({n0},{m}) seed {seed}: GF({q}) after {attempts} attempts, {expected} subsets, margin {}",
            b.margin
        ));
    }
    Ok(notes)
}

fn criterion_7() -> Outcome {
    let small = build_joint_2n2(3, Some(Field::new(2, 1).map_err(e2s)?), 0).map_err(e2s)?;
    let parity = build_joint_parity(2).map_err(e2s)?;
    let dup = parity.generator(0).clone();
    let broken = parity.clone().with_generator(1, dup).map_err(e2s)?;
    let mut notes = Vec::new();
    for (name, code, want) in [("joint-2n2 N=3 GF(2)", small, true), ("joint-parity K=2", parity, true), ("duplicate db", broken, false)] {
        let oracle = oracle_mds_injectivity(&code).ok_or_else(|| format!("{name}: oracle skipped"))?;
        let fast = code.verify_mds().ok;
        ensure(oracle == fast && fast == want, || format!("{name}: oracle {oracle}, verify_mds {fast}"))?;
        notes.push(format!("{name}: {fast}"));
    }
    Ok(vec![notes.join(", ")])
}

fn criterion_8() -> Outcome {
    let mut schemes: Vec<(String, Scheme)> = Vec::new();
    let gf3 = Field::new(3, 1).map_err(e2s)?;
    schemes.push(("(2,4,2)".into(), Scheme::new(build_joint_2n2(4, Some(gf3), 1).map_err(e2s)?).map_err(e2s)?));
    for n in 3..=10 {
        schemes.push((format!("joint-2n2 N={n}"), Scheme::new(build_joint_2n2(n, None, 0).map_err(e2s)?).map_err(e2s)?));
    }
    for k in 2..=8 {
        schemes.push((format!("joint-parity K={k}"), Scheme::new(build_joint_parity(k).map_err(e2s)?).map_err(e2s)?));
    }
    for (k, m) in [(2, 2), (2, 3), (3, 2)] {
        let code = build_expanded_parity(k, m, None).map_err(e2s)?;
        schemes.push((format!("expanded-parity ({k},{m})"), Scheme::new(code).map_err(e2s)?));
    }
    for (n0, m, _, code, _, _) in expanded_2n2_codes()? {
        schemes.push((format!("expanded-2n2 ({n0},{m})"), Scheme::new(code).map_err(e2s)?));
    }
    for (name, s) in &schemes {
        let rep = check_privacy(s);
        let identical = rep
            .per_db_distributions
            .iter()
            .all(|per_k| per_k.iter().all_equal());
        ensure(rep.ok && identical, || format!("{name}: {:?}", rep.first_violation))?;
    }
    // Database 1 always asks for index k*-1: the index reveals k*.
    let code = build_joint_parity(3).map_err(e2s)?;
    let table = (1..=3)
        .map(|k| (1..=2).map(|f| (0..4).map(|db| if db == 1 { (k - 1) % 2 } else { f - 1 }).collect()).collect())
        .collect();
    let leaky = Scheme::from_table(code, vec![1, 2], table).map_err(e2s)?;
    let rep = check_privacy(&leaky);
    ensure(!rep.ok && rep.first_violation.map(|v| v.db) == Some(1), || "leaky table accepted".into())?;
    Ok(vec![format!("{} shipped schemes private; leaky table rejected at db 1", schemes.len())])
}

/// Every artifact the suite produces, serialized.
fn artifacts() -> Result<Vec<String>, String> {
    let mut out = Vec::new();
    let gf3 = Field::new(3, 1).map_err(e2s)?;
    let mut codes = vec![build_joint_2n2(4, Some(gf3), 1).map_err(e2s)?, build_joint_parity(3).map_err(e2s)?];
    codes.push(build_expanded_parity(2, 2, None).map_err(e2s)?);
    codes.extend(expanded_2n2_codes()?.into_iter().map(|t| t.3));
    for code in codes {
        out.push(CodeFile::from_code(&code).to_json());
        let scheme = Scheme::new(code).map_err(e2s)?;
        let corr = check_correctness(&scheme, 5, &mut seeded_rng(SEED)).map_err(e2s)?;
        out.push(serde_json::to_string(&ReportFile::new(ReportKind::Correctness, &corr)).map_err(e2s)?);
        let t = scheme
            .simulate_retrieval(&jointpir::verification::random_messages(scheme.code(), &mut seeded_rng(SEED)), 1, &mut seeded_rng(SEED))
            .map_err(e2s)?;
        out.push(serde_json::to_string(&ReportFile::new(ReportKind::Transcript, &t)).map_err(e2s)?);
    }
    let rows = barrier_sweep(jointpir::codes::Family::Joint2n2, 3..=6, &SweepConfig::default()).map_err(e2s)?;
    out.push(serde_json::to_string(&ReportFile::new(ReportKind::Sweep, &rows)).map_err(e2s)?);
    out.push(render_document(&paper_tables().map_err(e2s)?));
    Ok(out)
}

fn cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_jointpir"))
        .args(args)
        .env_remove("JOINTPIR_SEED")
        .output()
        .map_err(e2s)?;
    ensure(out.status.success(), || format!("{args:?} exited {:?}", out.status.code()))?;
    Ok(out.stdout)
}

fn criterion_9() -> Outcome {
    let first = artifacts()?;
    let second = artifacts()?;
    ensure(first == second, || "in-process artifacts differ between runs".into())?;
    let dir = tempfile::tempdir().map_err(e2s)?;
    let code_path = dir.path().join("code.json");
    let code_arg = code_path.to_str().unwrap();
    let build = ["build", "--family", "expanded-2n2", "--n", "3", "--m-factor", "2", "--seed", "1"];
    let a = cli(&build)?;
    let b = cli(&build)?;
    ensure(a == b, || "CLI CodeFiles differ".into())?;
    std::fs::write(&code_path, &a).map_err(e2s)?;
    let verify = ["verify", "--code", code_arg, "--seed", "9"];
    ensure(cli(&verify)? == cli(&verify)?, || "CLI verify reports differ".into())?;
    let retrieve = ["retrieve", "--code", code_arg, "--k-star", "2", "--seed", "9"];
    ensure(cli(&retrieve)? == cli(&retrieve)?, || "CLI transcripts differ".into())?;
    let sweep = ["sweep", "--family", "joint-parity", "--range", "2..5", "--format", "json"];
    ensure(cli(&sweep)? == cli(&sweep)?, || "CLI sweeps differ".into())?;
    Ok(vec![format!("{} in-process artifacts and 4 CLI outputs byte-identical across runs", first.len())])
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("paper-table fidelity", criterion_1),
        ("(2,4,2) rate, barrier, MDS, privacy, correctness", criterion_2),
        ("(2,N,2) sweep N=3..10", criterion_3),
        ("(K,K+1,K) sweep K=2..8", criterion_4),
        ("expanded parity", criterion_5),
        ("expanded (2,mN,2m) search", criterion_6),
        ("oracle equivalence", criterion_7),
        ("privacy exactness", criterion_8),
        ("determinism", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(notes) => {
                println!("criterion {}: PASS  {name}", i + 1);
                for n in notes {
                    println!("    {n}");
                }
            }
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}", i + 1);
                println!("    {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
