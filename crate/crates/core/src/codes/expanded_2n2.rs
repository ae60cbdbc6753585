//! Randomised expansion of the `(2, N0, 2)` code to `(2, m*N0, 2m)`.
//!
//! Each base database `n` splits into `m` databases `(n, j)`, stored at index
//! `n*m + j`. Message symbols are grouped into blocks `a_i = (a_{i,0..m})`,
//! with `a_{i,j}` at position `i*m + j`. For `n >= 2`, row `i` of database
//! `(n, j)` is `h_{n,j,i} . a_{(i+n-1) mod (N0-1)} + g_{n,j,i} . b_i` with
//! coefficient vectors drawn uniformly at random. A sample is kept only when
//! the code is MDS and every block `H_{n,i} = [h_{n,j,i}]_j` and
//! `G_{n,i} = [g_{n,j,i}]_j` is invertible, which is what retrieval needs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::gf::{rank, smallest_prime_power_at_least, Elem, Field, Mat, FIELD_BUDGET};

use super::{Family, JointCode, Provenance, SystemParams};

/// Coefficient vectors `h_{n,j,i}` and `g_{n,j,i}` for coded groups
/// `n in 2..N0`, members `j in 0..m` and rows `i in 0..N0-1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffSet {
    n0: usize,
    m: usize,
    h: Vec<Vec<Elem>>,
    g: Vec<Vec<Elem>>,
    pub seed: Option<u64>,
}

impl CoeffSet {
    fn slot(&self, n: usize, j: usize, i: usize) -> usize {
        assert!((2..self.n0).contains(&n) && j < self.m && i < self.n0 - 1);
        ((n - 2) * self.m + j) * (self.n0 - 1) + i
    }

    pub fn n0(&self) -> usize {
        self.n0
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn h(&self, n: usize, j: usize, i: usize) -> &[Elem] {
        &self.h[self.slot(n, j, i)]
    }

    pub fn g(&self, n: usize, j: usize, i: usize) -> &[Elem] {
        &self.g[self.slot(n, j, i)]
    }

    fn sample<R: Rng>(n0: usize, m: usize, q: u32, rng: &mut R) -> CoeffSet {
        let count = (n0 - 2) * m * (n0 - 1);
        let mut h = Vec::with_capacity(count);
        let mut g = Vec::with_capacity(count);
        let draw = |rng: &mut R| -> Vec<Elem> {
            (0..m)
                .map(|_| Elem::from_raw(rng.gen_range(0..q)))
                .collect()
        };
        for _ in 0..count {
            h.push(draw(rng));
            g.push(draw(rng));
        }
        CoeffSet {
            n0,
            m,
            h,
            g,
            seed: None,
        }
    }

    /// Reads the coefficients back out of an expanded `(2, m*N0, 2m)` code.
    pub fn from_code(code: &JointCode) -> Result<CoeffSet> {
        let p = code.params();
        if p.family != Family::Expanded2n2 {
            return Err(param(format!("{} code carries no coefficient set", p.family)));
        }
        let m = p.m_factor;
        let n0 = p.databases / m;
        let l = p.message_len;
        let mut set = CoeffSet {
            n0,
            m,
            h: vec![Vec::new(); (n0 - 2) * m * (n0 - 1)],
            g: vec![Vec::new(); (n0 - 2) * m * (n0 - 1)],
            seed: code.provenance().seed,
        };
        for n in 2..n0 {
            for j in 0..m {
                let gen = code.generator(n * m + j);
                for i in 0..n0 - 1 {
                    let a_block = (i + n - 1) % (n0 - 1);
                    let slot = set.slot(n, j, i);
                    set.h[slot] = (0..m).map(|t| gen[(i, a_block * m + t)]).collect();
                    set.g[slot] = (0..m).map(|t| gen[(i, l + i * m + t)]).collect();
                }
            }
        }
        Ok(set)
    }

    /// `(H_{n,i}, G_{n,i})` for every coded group `n` and row `i`.
    pub fn blocks(&self) -> Vec<(Mat, Mat)> {
        let mut out = Vec::new();
        for n in 2..self.n0 {
            for i in 0..self.n0 - 1 {
                let h = Mat::from_rows((0..self.m).map(|j| self.h(n, j, i).to_vec()).collect());
                let g = Mat::from_rows((0..self.m).map(|j| self.g(n, j, i).to_vec()).collect());
                out.push((h, g));
            }
        }
        out
    }

    /// Number of singular `m x m` blocks among the `2 (N0-2)(N0-1)`.
    pub fn singular_blocks(&self, field: &Field) -> usize {
        self.blocks()
            .iter()
            .flat_map(|(h, g)| [h, g])
            .filter(|b| rank(field, b) < self.m)
            .count()
    }

    fn generators(&self) -> Vec<Mat> {
        let (n0, m) = (self.n0, self.m);
        let l = m * (n0 - 1);
        let mut gens = Vec::with_capacity(n0 * m);
        for n in 0..n0 {
            for j in 0..m {
                let mut gen = Mat::zeros(n0 - 1, 2 * l);
                for i in 0..n0 - 1 {
                    match n {
                        0 => gen[(i, i * m + j)] = Elem::ONE,
                        1 => gen[(i, l + i * m + j)] = Elem::ONE,
                        _ => {
                            let a_block = (i + n - 1) % (n0 - 1);
                            for t in 0..m {
                                gen[(i, a_block * m + t)] = self.h(n, j, i)[t];
                                gen[(i, l + i * m + t)] = self.g(n, j, i)[t];
                            }
                        }
                    }
                }
                gens.push(gen);
            }
        }
        gens
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub seed: u64,
    /// Samples tried per field size before moving to a larger field.
    pub max_attempts: u64,
    /// Largest field order the search may escalate to.
    pub max_field: u64,
}

impl SearchConfig {
    pub const DEFAULT_MAX_FIELD: u64 = 1 << 16;

    pub fn new(seed: u64, max_attempts: u64) -> Self {
        SearchConfig {
            seed,
            max_attempts,
            max_field: Self::DEFAULT_MAX_FIELD,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub field_order: u32,
    /// Total samples drawn, across all field sizes.
    pub attempts: u64,
    /// `(field order, samples drawn at that order)` in search order.
    pub per_field: Vec<(u32, u64)>,
}

/// Field order where the search starts: the smallest prime power at least
/// `2m(N0-2)(N0-1) + 2`.
pub fn expanded_2n2_start_field(n0: usize, m: usize) -> u64 {
    smallest_prime_power_at_least((2 * m * (n0 - 2) * (n0 - 1) + 2) as u64)
}

fn rng_for(seed: u64, attempt: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(attempt);
    rng
}

pub fn build_expanded_2n2(
    n0: usize,
    m: usize,
    seed: u64,
    max_attempts: u64,
) -> Result<(JointCode, CoeffSet, SearchStats)> {
    build_expanded_2n2_with(n0, m, &SearchConfig::new(seed, max_attempts))
}

/// Rejection-samples coefficients, doubling the field size (rounded up to a
/// prime power) after `max_attempts` failures at one size. The sample for
/// global attempt `a` comes from ChaCha20 seeded with `seed`, stream `a`.
pub fn build_expanded_2n2_with(
    n0: usize,
    m: usize,
    cfg: &SearchConfig,
) -> Result<(JointCode, CoeffSet, SearchStats)> {
    if n0 < 3 {
        return Err(param(format!("expansion needs N0 >= 3, got {n0}")));
    }
    if m < 1 {
        return Err(param("expansion factor must be at least 1"));
    }
    if cfg.max_attempts == 0 {
        return Err(param("max_attempts must be positive"));
    }
    let max_field = cfg.max_field.min(FIELD_BUDGET);
    let params = SystemParams {
        messages: 2,
        databases: m * n0,
        threshold: 2 * m,
        message_len: m * (n0 - 1),
        per_db: n0 - 1,
        family: Family::Expanded2n2,
        m_factor: m,
    };
    let mut order = expanded_2n2_start_field(n0, m);
    let mut attempt = 0u64;
    let mut per_field = Vec::new();
    let (mut last_failing, mut last_singular) = (0usize, 0usize);
    let mut largest = 0u32;
    while order <= max_field {
        let field = Field::of_order(order)?;
        largest = field.order();
        let mut here = 0u64;
        while here < cfg.max_attempts {
            let mut rng = rng_for(cfg.seed, attempt);
            attempt += 1;
            here += 1;
            let mut coeffs = CoeffSet::sample(n0, m, field.order(), &mut rng);
            let singular = coeffs.singular_blocks(&field);
            let provenance = Provenance {
                seed: Some(cfg.seed),
                attempts: Some(attempt),
            };
            let code = JointCode::new(params, field.clone(), coeffs.generators(), None, provenance);
            let code = match code {
                Ok(c) => c,
                // A zero coefficient row can drop a generator's rank.
                Err(Error::Parameter(_)) => {
                    (last_failing, last_singular) = (0, singular);
                    continue;
                }
                Err(e) => return Err(e),
            };
            if singular > 0 {
                (last_failing, last_singular) = (0, singular);
                continue;
            }
            let report = code.verify_mds();
            if report.ok {
                per_field.push((field.order(), here));
                coeffs.seed = Some(cfg.seed);
                let stats = SearchStats {
                    field_order: field.order(),
                    attempts: attempt,
                    per_field,
                };
                return Ok((code, coeffs, stats));
            }
            (last_failing, last_singular) = (report.failing_subsets.len(), 0);
        }
        per_field.push((field.order(), here));
        order = smallest_prime_power_at_least(order * 2);
    }
    Err(Error::SearchFailure {
        attempts: attempt,
        largest_field: largest,
        failing_subsets: last_failing,
        singular_blocks: last_singular,
    })
}
