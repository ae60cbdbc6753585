//! Parity-style codes: the `(K, K+1, K)` single-parity code, its Cauchy
//! expansion to `(K, m(K+1), mK)`, and a separately coded baseline.

use crate::error::{param, Result};
use crate::gf::{cauchy_matrix, smallest_prime_power_at_least, Elem, Field, Mat};

use super::labels::{code_labels, LabelStyle};
use super::{Family, JointCode, Provenance, SystemParams};

/// Databases `0..K` store both symbols of their own message; database `K`
/// stores the two symbol-wise sums. Always over GF(2).
pub fn build_joint_parity(k: usize) -> Result<JointCode> {
    if k < 2 {
        return Err(param(format!("(K,K+1,K) codes need K >= 2, got {k}")));
    }
    let field = Field::new(2, 1)?;
    let params = SystemParams {
        messages: k,
        databases: k + 1,
        threshold: k,
        message_len: 2,
        per_db: 2,
        family: Family::JointParity,
        m_factor: 1,
    };
    let cols = 2 * k;
    let mut gens = Vec::with_capacity(k + 1);
    for msg in 0..k {
        let mut g = Mat::zeros(2, cols);
        g[(0, 2 * msg)] = Elem::ONE;
        g[(1, 2 * msg + 1)] = Elem::ONE;
        gens.push(g);
    }
    let mut parity = Mat::zeros(2, cols);
    for msg in 0..k {
        parity[(0, 2 * msg)] = Elem::ONE;
        parity[(1, 2 * msg + 1)] = Elem::ONE;
    }
    gens.push(parity);
    let labels = code_labels(&field, &params, &gens, LabelStyle::for_family(&params));
    JointCode::new(params, field, gens, Some(labels), Provenance::default())
}

/// Smallest field order accepted by [`build_expanded_parity`]: at least
/// `(m+1)K`, and at least `m(K+1)` so the Cauchy parameters can be distinct.
pub fn expanded_parity_min_order(k: usize, m: usize) -> u64 {
    ((m + 1) * k).max(m * (k + 1)) as u64
}

/// Expands the parity code by `m`: `K` groups of `m` databases hold raw
/// segment symbols, and the last group stores Cauchy combinations of each
/// segment across all messages.
///
/// Message `k` is `(W^k_1; W^k_2)`, two segments of `m` symbols; symbol
/// `s*m + j` is position `j` of segment `s`. Database `g*m + j` is member `j`
/// of group `g`.
pub fn build_expanded_parity(k: usize, m: usize, field: Option<Field>) -> Result<JointCode> {
    if k < 2 {
        return Err(param(format!("expanded parity codes need K >= 2, got {k}")));
    }
    if m < 1 {
        return Err(param("expansion factor must be at least 1"));
    }
    let min_order = expanded_parity_min_order(k, m);
    let field = match field {
        Some(f) => f,
        None => Field::of_order(smallest_prime_power_at_least(min_order))?,
    };
    let q = field.order() as u64;
    if q < ((m + 1) * k) as u64 {
        return Err(param(format!(
            "{field} is smaller than (m+1)K = {}",
            (m + 1) * k
        )));
    }
    if q < min_order {
        return Err(param(format!(
            "{field} has fewer than m(K+1) = {} elements for distinct Cauchy parameters",
            m * (k + 1)
        )));
    }
    let alphas: Vec<Elem> = (0..m as u64).map(|v| field.elem(v)).collect::<Result<_>>()?;
    let betas: Vec<Elem> = (m as u64..(m + m * k) as u64)
        .map(|v| field.elem(v))
        .collect::<Result<_>>()?;
    let cauchy = cauchy_matrix(&field, &alphas, &betas)?;

    let l = 2 * m;
    let cols = k * l;
    let mut gens = Vec::with_capacity(m * (k + 1));
    for group in 0..k {
        for j in 0..m {
            let mut g = Mat::zeros(2, cols);
            for seg in 0..2 {
                g[(seg, group * l + seg * m + j)] = Elem::ONE;
            }
            gens.push(g);
        }
    }
    for i in 0..m {
        let mut g = Mat::zeros(2, cols);
        for seg in 0..2 {
            for msg in 0..k {
                for j in 0..m {
                    g[(seg, msg * l + seg * m + j)] = cauchy[(i, msg * m + j)];
                }
            }
        }
        gens.push(g);
    }
    let params = SystemParams {
        messages: k,
        databases: m * (k + 1),
        threshold: m * k,
        message_len: l,
        per_db: 2,
        family: Family::ExpandedParity,
        m_factor: m,
    };
    JointCode::new(params, field, gens, None, Provenance::default())
}

/// Each message coded on its own by an `N x T` Cauchy generator: message `k`
/// has `T` symbols and database `n` stores one coded symbol of each message.
pub fn build_separate_baseline(k: usize, n: usize, t: usize, field: Field) -> Result<JointCode> {
    if k < 1 || t < 1 || t >= n {
        return Err(param(format!("invalid separate code parameters ({k},{n},{t})")));
    }
    if (field.order() as usize) < n + t {
        return Err(param(format!(
            "{field} has fewer than N+T = {} elements",
            n + t
        )));
    }
    let alphas: Vec<Elem> = (0..n as u64).map(|v| field.elem(v)).collect::<Result<_>>()?;
    let betas: Vec<Elem> = (n as u64..(n + t) as u64)
        .map(|v| field.elem(v))
        .collect::<Result<_>>()?;
    let per_message = cauchy_matrix(&field, &alphas, &betas)?;
    let gens = (0..n)
        .map(|db| {
            let mut g = Mat::zeros(k, k * t);
            for msg in 0..k {
                for s in 0..t {
                    g[(msg, msg * t + s)] = per_message[(db, s)];
                }
            }
            g
        })
        .collect();
    let params = SystemParams {
        messages: k,
        databases: n,
        threshold: t,
        message_len: t,
        per_db: k,
        family: Family::Custom,
        m_factor: 1,
    };
    JointCode::new(params, field, gens, None, Provenance::default())
}
