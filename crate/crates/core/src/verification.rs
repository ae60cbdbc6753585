//! Exact checks for MDS recoverability, retrieval correctness and privacy,
//! the separate-coding capacity comparison, and brute-force oracles.

use std::collections::{HashMap, HashSet};

use itertools::Itertools;
use rand::Rng;
use serde::Serialize;

use crate::codes::{BuildSpec, Family, JointCode, MdsReport, SearchConfig};
use crate::error::{param, Error, Result};
use crate::gf::{Elem, Field, FIELD_BUDGET};
use crate::pir::{answer, Scheme};
use crate::rational::Rational;

/// A pair of desired messages whose query distributions differ at `db`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PrivacyViolation {
    pub db: usize,
    pub k: usize,
    pub k_prime: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrivacyReport {
    pub ok: bool,
    /// `[db][k - 1]`: sorted query indices over all keys.
    pub per_db_distributions: Vec<Vec<Vec<usize>>>,
    pub first_violation: Option<PrivacyViolation>,
}

/// Exhaustive over the key space: the multiset of indices a database sees
/// must not depend on the desired message.
pub fn check_privacy(scheme: &Scheme) -> PrivacyReport {
    let p = scheme.code().params();
    let mut per_db_distributions = Vec::with_capacity(p.databases);
    let mut first_violation = None;
    for db in 0..p.databases {
        let per_k: Vec<Vec<usize>> = (1..=p.messages)
            .map(|k| {
                let mut seen: Vec<usize> = scheme
                    .f_values()
                    .iter()
                    .map(|&f| scheme.gen_queries(k, f).expect("k and f in range")[db])
                    .collect();
                seen.sort_unstable();
                seen
            })
            .collect();
        if first_violation.is_none() {
            if let Some(k) = (1..p.messages).find(|&k| per_k[k] != per_k[0]) {
                first_violation = Some(PrivacyViolation {
                    db,
                    k: 1,
                    k_prime: k + 1,
                });
            }
        }
        per_db_distributions.push(per_k);
    }
    PrivacyReport {
        ok: first_violation.is_none(),
        per_db_distributions,
        first_violation,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorrectnessFailure {
    pub k_star: usize,
    pub f: u32,
    /// `"structural"` or `"value"`.
    pub kind: &'static str,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorrectnessReport {
    pub ok: bool,
    pub structural_ok: bool,
    pub value_ok: bool,
    /// `(k*, f)` pairs examined.
    pub pairs: usize,
    pub trials: usize,
    pub failures: Vec<CorrectnessFailure>,
}

pub fn random_messages<R: Rng + ?Sized>(code: &JointCode, rng: &mut R) -> Vec<Vec<Elem>> {
    let p = code.params();
    (0..p.messages)
        .map(|_| (0..p.message_len).map(|_| random_elem(code.field(), rng)).collect())
        .collect()
}

/// Runs every `(k*, f)` pair on `trials` random message tuples, after a
/// value-independent check that each desired symbol lies in the span of the
/// downloaded forms.
pub fn check_correctness<R: Rng + ?Sized>(scheme: &Scheme, trials: usize, rng: &mut R) -> Result<CorrectnessReport> {
    if trials == 0 {
        return Err(param("correctness needs at least one trial"));
    }
    let code = scheme.code();
    let k = code.params().messages;
    let instances: Vec<_> = (0..trials).map(|_| random_messages(code, rng)).collect();
    let mut failures = Vec::new();
    let mut pairs = 0;
    for k_star in 1..=k {
        for &f in scheme.f_values() {
            pairs += 1;
            if let Err(e) = scheme.reconstruction_plan(k_star, f) {
                failures.push(CorrectnessFailure {
                    k_star,
                    f,
                    kind: "structural",
                    detail: e.to_string(),
                });
                continue;
            }
            for (t, w) in instances.iter().enumerate() {
                let detail = match scheme.run(w, k_star, f) {
                    Ok(tr) if tr.reconstructed == w[k_star - 1] => continue,
                    Ok(_) => format!("trial {t}: reconstruction differs from the message"),
                    Err(e) => format!("trial {t}: {e}"),
                };
                failures.push(CorrectnessFailure {
                    k_star,
                    f,
                    kind: "value",
                    detail,
                });
                break;
            }
        }
    }
    let structural_ok = failures.iter().all(|f| f.kind != "structural");
    let value_ok = failures.iter().all(|f| f.kind != "value");
    Ok(CorrectnessReport {
        ok: failures.is_empty(),
        structural_ok,
        value_ok,
        pairs,
        trials,
        failures,
    })
}

/// `(1 + T/N + ... + (T/N)^(K-1))^-1`, with exactly `K` terms.
pub fn capacity_separate(k: usize, n: usize, t: usize) -> Result<Rational> {
    if k < 1 || t < 1 || t > n {
        return Err(param(format!("capacity needs K >= 1 and 1 <= T <= N, got ({k},{n},{t})")));
    }
    let fits = u32::try_from(k)
        .ok()
        .and_then(|e| (n as i128).checked_pow(e))
        .and_then(|v| v.checked_mul(k as i128))
        .is_some();
    if !fits {
        return Err(param(format!("capacity for ({k},{n},{t}) overflows exact arithmetic")));
    }
    let ratio = Rational::new(t as i128, n as i128)?;
    let mut sum = Rational::zero();
    let mut term = Rational::one();
    for _ in 0..k {
        sum = sum + term;
        term = term * ratio;
    }
    sum.recip()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BarrierReport {
    pub rate: Rational,
    pub c_perp: Rational,
    pub margin: Rational,
    pub broken: bool,
}

pub fn barrier_report(scheme: &Scheme) -> Result<BarrierReport> {
    let p = scheme.code().params();
    let rate = scheme.retrieval_rate();
    let c_perp = capacity_separate(p.messages, p.databases, p.threshold)?;
    let margin = rate - c_perp;
    Ok(BarrierReport {
        rate,
        c_perp,
        margin,
        broken: margin.is_positive(),
    })
}

/// Brute-force MDS check: every `T`-subset must map distinct message tuples
/// to distinct stored contents. `None` when `q^(KL)` exceeds the budget.
pub fn oracle_mds_injectivity(code: &JointCode) -> Option<bool> {
    let p = code.params();
    let q = code.field().order() as u64;
    let len = p.total_symbols();
    let tuples = (0..len).try_fold(1u64, |acc, _| acc.checked_mul(q).filter(|&v| v <= FIELD_BUDGET))?;
    let field = code.field();
    let subsets: Vec<Vec<usize>> = (0..p.databases).combinations(p.threshold).collect();
    let mut seen: Vec<HashSet<Vec<Elem>>> = vec![HashSet::with_capacity(tuples as usize); subsets.len()];
    let mut injective = vec![true; subsets.len()];
    let mut w = vec![Elem::ZERO; len];
    for index in 0..tuples {
        let mut rest = index;
        for slot in w.iter_mut() {
            *slot = field.elem(rest % q).expect("digit below q");
            rest /= q;
        }
        for (s, subset) in subsets.iter().enumerate() {
            if !injective[s] {
                continue;
            }
            let image: Vec<Elem> = subset
                .iter()
                .flat_map(|&db| code.generator(db).mul_vec(field, &w))
                .collect();
            if !seen[s].insert(image) {
                injective[s] = false;
            }
        }
    }
    Some(injective.iter().all(|&ok| ok))
}

/// Replays every `(k*, f)` against one fixed storage and compares, per
/// database, the multiset of `(query, answer)` pairs across desired messages.
pub fn oracle_privacy_transcript<R: Rng + ?Sized>(scheme: &Scheme, rng: &mut R) -> Result<bool> {
    let code = scheme.code();
    let p = code.params();
    let storage = code.encode(&random_messages(code, rng))?;
    let mut views: Vec<Vec<HashMap<(usize, Elem), usize>>> = vec![vec![HashMap::new(); p.messages]; p.databases];
    for k in 1..=p.messages {
        for &f in scheme.f_values() {
            let queries = scheme.gen_queries(k, f)?;
            for (db, &qi) in queries.iter().enumerate() {
                let a = answer(&storage[db], qi)?;
                *views[db][k - 1].entry((qi, a)).or_default() += 1;
            }
        }
    }
    Ok(views.iter().all(|per_k| per_k.iter().all(|v| *v == per_k[0])))
}

/// Parameters shared by every point of a sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepConfig {
    pub m_factor: usize,
    pub trials: usize,
    pub seed: u64,
    pub max_attempts: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            m_factor: 1,
            trials: 50,
            seed: 0,
            max_attempts: 1000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub family: Family,
    /// `N`, `K` or `N0` depending on the family.
    pub size: usize,
    pub m_factor: usize,
    #[serde(rename = "K")]
    pub messages: usize,
    #[serde(rename = "N")]
    pub databases: usize,
    #[serde(rename = "T")]
    pub threshold: usize,
    pub field_order: Option<u32>,
    pub attempts: Option<u64>,
    pub barrier: Option<BarrierReport>,
    pub mds_ok: bool,
    pub privacy_ok: bool,
    pub correctness_ok: bool,
    pub error: Option<String>,
    /// Every check passed and the barrier is broken.
    pub ok: bool,
}

/// Everything a single built scheme is held to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FullReport {
    pub mds: MdsReport,
    pub privacy: PrivacyReport,
    pub correctness: CorrectnessReport,
    pub barrier: BarrierReport,
}

impl FullReport {
    pub fn ok(&self) -> bool {
        self.mds.ok && self.privacy.ok && self.correctness.ok && self.barrier.broken
    }
}

pub fn full_report<R: Rng + ?Sized>(scheme: &Scheme, trials: usize, rng: &mut R) -> Result<FullReport> {
    Ok(FullReport {
        mds: scheme.code().verify_mds(),
        privacy: check_privacy(scheme),
        correctness: check_correctness(scheme, trials, rng)?,
        barrier: barrier_report(scheme)?,
    })
}

fn sweep_point(family: Family, size: usize, cfg: &SweepConfig) -> SweepRow {
    let mut row = SweepRow {
        family,
        size,
        m_factor: cfg.m_factor,
        messages: 0,
        databases: 0,
        threshold: 0,
        field_order: None,
        attempts: None,
        barrier: None,
        mds_ok: false,
        privacy_ok: false,
        correctness_ok: false,
        error: None,
        ok: false,
    };
    let spec = BuildSpec {
        m_factor: cfg.m_factor,
        search: SearchConfig::new(cfg.seed, cfg.max_attempts),
        ..BuildSpec::new(family, size)
    };
    let run = |row: &mut SweepRow| -> Result<()> {
        let (code, stats) = spec.build()?;
        let p = *code.params();
        (row.messages, row.databases, row.threshold) = (p.messages, p.databases, p.threshold);
        row.field_order = Some(code.field().order());
        row.attempts = stats.map(|s| s.attempts);
        let scheme = Scheme::new(code)?;
        let mut rng = seeded_rng(cfg.seed);
        let report = full_report(&scheme, cfg.trials, &mut rng)?;
        row.mds_ok = report.mds.ok;
        row.privacy_ok = report.privacy.ok;
        row.correctness_ok = report.correctness.ok;
        row.barrier = Some(report.barrier);
        row.ok = report.ok();
        Ok(())
    };
    if let Err(e) = run(&mut row) {
        row.error = Some(e.to_string());
        row.ok = false;
    }
    row
}

/// Builds, verifies and compares against the separate-coding capacity at
/// every size in `sizes`. Failures are recorded per row.
pub fn barrier_sweep<I>(family: Family, sizes: I, cfg: &SweepConfig) -> Result<Vec<SweepRow>>
where
    I: IntoIterator<Item = usize>,
{
    if family == Family::Custom {
        return Err(Error::UnsupportedFamily(family.to_string()));
    }
    Ok(sizes.into_iter().map(|size| sweep_point(family, size, cfg)).collect())
}

/// The RNG used for message sampling throughout the verifiers.
pub fn seeded_rng(seed: u64) -> rand_chacha::ChaCha20Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha20Rng::seed_from_u64(seed)
}

pub fn random_elem<R: Rng + ?Sized>(field: &Field, rng: &mut R) -> Elem {
    field.elem(rng.gen_range(0..field.order()) as u64).expect("in range")
}
