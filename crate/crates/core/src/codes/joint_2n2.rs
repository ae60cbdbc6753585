//! The `(2, N, 2)` joint code: databases 0 and 1 hold the two messages raw,
//! database `n >= 2` holds `alpha^(n-1) * shift(W1, n-1) + W2`, where the
//! shift rotates message 1 cyclically by `n-1` positions.

use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::gf::{
    circulant_from_row, circulant_polynomial, common_root_exists, is_prime, prime_power_parts,
    rank, smallest_prime_power_at_least, Elem, Field, Mat, Poly,
};

use super::labels::{code_labels, LabelStyle};
use super::{Family, JointCode, Provenance, SystemParams};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GuanBound {
    pub p: u32,
    /// Part of `N - 1` coprime to `p`.
    pub r: u64,
    /// `(N - 3) r + 2`
    pub bound: u64,
    /// Smallest power of `p` meeting the bound.
    pub field_order: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldBounds2n2 {
    /// `(N - 3)(N - 1) + 2`
    pub paper_bound: u64,
    /// One entry per prime not exceeding the general bound.
    pub guan_bounds: Vec<GuanBound>,
}

impl FieldBounds2n2 {
    /// Candidate field orders, ascending and deduplicated; the last candidate
    /// always satisfies the general bound.
    pub fn candidate_orders(&self) -> Vec<u64> {
        let mut orders: Vec<u64> = self.guan_bounds.iter().map(|g| g.field_order).collect();
        orders.push(smallest_prime_power_at_least(self.paper_bound));
        orders.sort_unstable();
        orders.dedup();
        orders
    }
}

pub fn min_field_2n2(n: usize) -> Result<FieldBounds2n2> {
    if n < 3 {
        return Err(param(format!("(2,N,2) codes need N >= 3, got {n}")));
    }
    let n = n as u64;
    let paper_bound = (n - 3) * (n - 1) + 2;
    let guan_bounds = (2..=paper_bound.max(2))
        .filter(|&p| is_prime(p))
        .map(|p| {
            let mut r = n - 1;
            while r % p == 0 {
                r /= p;
            }
            let bound = (n - 3) * r + 2;
            let mut field_order = p;
            while field_order < bound {
                field_order *= p;
            }
            GuanBound {
                p: p as u32,
                r,
                bound,
                field_order,
            }
        })
        .collect();
    Ok(FieldBounds2n2 {
        paper_bound,
        guan_bounds,
    })
}

fn coefficient_exponent(db: usize, offset: i64) -> i64 {
    db as i64 - 1 - offset
}

/// First row of the circulant `C_{i,j}` relating databases `i < j` (both
/// `>= 2`): `S_i - S_j` is a row permutation of `circulant(c) * W1`.
pub fn circulant_pair_row(field: &Field, n: usize, i: usize, j: usize, offset: i64) -> Vec<Elem> {
    assert!(2 <= i && i < j && j < n, "pair must satisfy 2 <= i < j < N");
    let l = n - 1;
    let mut c = vec![Elem::ZERO; l];
    c[0] = field.alpha_pow(coefficient_exponent(i, offset));
    c[j - i] = field.neg(field.alpha_pow(coefficient_exponent(j, offset)));
    c
}

/// Both verdicts for one coded database pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCheck {
    pub i: usize,
    pub j: usize,
    /// Row polynomial shares a root with `x^(N-1) - 1` in the field.
    pub common_root: bool,
    /// Direct rank computation of the circulant.
    pub full_rank: bool,
}

/// Criterion and rank verdicts for every coded pair `2 <= i < j < N`.
pub fn pair_checks(field: &Field, n: usize, offset: i64) -> Vec<PairCheck> {
    let l = n - 1;
    let g = Poly::x_pow_minus_one(field, l);
    let mut out = Vec::new();
    for i in 2..n {
        for j in i + 1..n {
            let c = circulant_pair_row(field, n, i, j, offset);
            out.push(PairCheck {
                i,
                j,
                common_root: common_root_exists(field, &circulant_polynomial(&c), &g),
                full_rank: rank(field, &circulant_from_row(&c)) == l,
            });
        }
    }
    out
}

fn generators(field: &Field, n: usize, offset: i64) -> Vec<Mat> {
    let l = n - 1;
    (0..n)
        .map(|db| {
            let mut g = Mat::zeros(l, 2 * l);
            for r in 0..l {
                match db {
                    0 => g[(r, r)] = Elem::ONE,
                    1 => g[(r, l + r)] = Elem::ONE,
                    _ => {
                        g[(r, (r + db - 1) % l)] = field.alpha_pow(coefficient_exponent(db, offset));
                        g[(r, l + r)] = Elem::ONE;
                    }
                }
            }
            g
        })
        .collect()
}

fn build_over(n: usize, field: Field, offset: i64) -> Result<JointCode> {
    if let Some(bad) = pair_checks(&field, n, offset)
        .into_iter()
        .find(|c| c.common_root || !c.full_rank)
    {
        let why = if bad.common_root {
            "row polynomial shares a root with x^(N-1) - 1"
        } else {
            "circulant is singular"
        };
        return Err(Error::Construction(format!(
            "{field} too small for N={n}: database pair ({}, {}) is not recoverable ({why})",
            bad.i, bad.j
        )));
    }
    let params = SystemParams {
        messages: 2,
        databases: n,
        threshold: 2,
        message_len: n - 1,
        per_db: n - 1,
        family: Family::Joint2n2,
        m_factor: 1,
    };
    let gens = generators(&field, n, offset);
    let labels = code_labels(&field, &params, &gens, LabelStyle::Letters { base: 0 });
    JointCode::new(params, field, gens, Some(labels), Provenance::default())
}

/// Builds the `(2, N, 2)` code. Without an explicit field the smallest
/// candidate from [`min_field_2n2`] that passes validation is used.
/// `offset` lowers every coefficient exponent uniformly (1 gives the
/// coefficients `1, alpha, ...`).
pub fn build_joint_2n2(n: usize, field: Option<Field>, offset: i64) -> Result<JointCode> {
    if n < 3 {
        return Err(param(format!("(2,N,2) codes need N >= 3, got {n}")));
    }
    if let Some(field) = field {
        return build_over(n, field, offset);
    }
    let mut last_err = None;
    for q in min_field_2n2(n)?.candidate_orders() {
        let (p, m) = prime_power_parts(q).expect("candidates are prime powers");
        match build_over(n, Field::new(p, m)?, offset) {
            Ok(code) => return Ok(code),
            Err(e @ Error::Construction(_)) => last_err = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last_err.expect("at least one candidate field"))
}
