//! Retrieval protocols over joint codes.
//!
//! Every built-in scheme downloads exactly one stored symbol per database, so
//! a query is just an index into that database's storage. The random key `F`
//! is uniform over the scheme's `f_values`.

use rand::Rng;
use serde::Serialize;

use crate::codes::{Family, JointCode};
use crate::error::{param, Error, Result};
use crate::gf::{solve, Elem, Mat, Solution};
use crate::rational::Rational;

/// A query table over a code: `queries[k][f][db]` is the storage index
/// database `db` is asked for when message `k + 1` is wanted under key
/// `f_values[f]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scheme {
    code: JointCode,
    f_values: Vec<u32>,
    queries: Vec<Vec<Vec<usize>>>,
}

/// Linear combinations of the answers yielding each desired symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReconstructionPlan {
    /// One row per desired symbol, one coefficient per database answer.
    pub combinations: Vec<Vec<Elem>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Transcript {
    pub k_star: usize,
    pub f: u32,
    pub queries: Vec<usize>,
    pub answers: Vec<Elem>,
    pub reconstructed: Vec<Elem>,
    pub download_count: usize,
}

/// The stored symbol at `query`.
pub fn answer(storage: &[Elem], query: usize) -> Result<Elem> {
    storage.get(query).copied().ok_or_else(|| {
        param(format!(
            "query index {query} outside storage of {} symbols",
            storage.len()
        ))
    })
}

fn builtin_index(code: &JointCode, k: usize, f: u32, db: usize) -> usize {
    let p = code.params();
    let f = f as usize;
    match p.family {
        Family::Joint2n2 | Family::Expanded2n2 => {
            let l0 = p.per_db;
            let group = db / p.m_factor;
            if k == 1 || group < 2 {
                f
            } else {
                (f + l0 * group - (group - 1)) % l0
            }
        }
        Family::JointParity | Family::ExpandedParity => {
            let group = db / p.m_factor;
            if group == k - 1 {
                2 - f
            } else {
                f - 1
            }
        }
        Family::Custom => unreachable!("custom codes have no built-in table"),
    }
}

impl Scheme {
    /// The built-in protocol for the code's family.
    pub fn new(code: JointCode) -> Result<Scheme> {
        let p = *code.params();
        let f_values: Vec<u32> = match p.family {
            Family::Joint2n2 | Family::Expanded2n2 => (0..p.per_db as u32).collect(),
            Family::JointParity | Family::ExpandedParity => vec![1, 2],
            Family::Custom => return Err(Error::UnsupportedFamily(p.family.to_string())),
        };
        let queries = (1..=p.messages)
            .map(|k| {
                f_values
                    .iter()
                    .map(|&f| {
                        (0..p.databases)
                            .map(|db| builtin_index(&code, k, f, db))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Ok(Scheme {
            code,
            f_values,
            queries,
        })
    }

    /// A scheme with an explicit query table, indexed `[k - 1][f][db]`.
    pub fn from_table(code: JointCode, f_values: Vec<u32>, queries: Vec<Vec<Vec<usize>>>) -> Result<Scheme> {
        let p = code.params();
        if f_values.is_empty() {
            return Err(param("the key space is empty"));
        }
        let shape_ok = queries.len() == p.messages
            && queries.iter().all(|per_f| {
                per_f.len() == f_values.len()
                    && per_f
                        .iter()
                        .all(|per_db| per_db.len() == p.databases && per_db.iter().all(|&i| i < p.per_db))
            });
        if !shape_ok {
            return Err(param("query table does not match the code"));
        }
        Ok(Scheme {
            code,
            f_values,
            queries,
        })
    }

    pub fn code(&self) -> &JointCode {
        &self.code
    }

    pub fn f_values(&self) -> &[u32] {
        &self.f_values
    }

    pub fn f_size(&self) -> usize {
        self.f_values.len()
    }

    /// Symbols returned per database per query.
    pub fn answer_length(&self) -> usize {
        1
    }

    fn f_position(&self, f: u32) -> Result<usize> {
        self.f_values
            .iter()
            .position(|&v| v == f)
            .ok_or_else(|| param(format!("key {f} is not in {:?}", self.f_values)))
    }

    fn check_k(&self, k_star: usize) -> Result<()> {
        let k = self.code.params().messages;
        if (1..=k).contains(&k_star) {
            Ok(())
        } else {
            Err(param(format!("desired message {k_star} outside 1..={k}")))
        }
    }

    /// Per-database storage indices for `(k_star, f)`.
    pub fn gen_queries(&self, k_star: usize, f: u32) -> Result<Vec<usize>> {
        self.check_k(k_star)?;
        let fi = self.f_position(f)?;
        Ok(self.queries[k_star - 1][fi].clone())
    }

    /// Rows of the generators selected by the queries: answer `n` equals
    /// `forms[n] . w`.
    fn answer_forms(&self, queries: &[usize]) -> Mat {
        Mat::from_rows(
            queries
                .iter()
                .enumerate()
                .map(|(db, &i)| self.code.generator(db).row(i).to_vec())
                .collect(),
        )
    }

    /// Expresses every symbol of message `k_star` as a combination of the
    /// answers, or reports the first symbol outside their span.
    pub fn reconstruction_plan(&self, k_star: usize, f: u32) -> Result<ReconstructionPlan> {
        let queries = self.gen_queries(k_star, f)?;
        let field = self.code.field();
        let p = self.code.params();
        let forms_t = self.answer_forms(&queries).transpose();
        let mut combinations = Vec::with_capacity(p.message_len);
        for s in 0..p.message_len {
            let mut target = vec![Elem::ZERO; p.total_symbols()];
            target[(k_star - 1) * p.message_len + s] = Elem::ONE;
            match solve(field, &forms_t, &target)? {
                Solution::Consistent { x, .. } => combinations.push(x),
                Solution::Inconsistent => {
                    return Err(Error::Reconstruction { k_star, f, symbol: s });
                }
            }
        }
        Ok(ReconstructionPlan { combinations })
    }

    pub fn reconstruct(&self, k_star: usize, f: u32, answers: &[Elem]) -> Result<Vec<Elem>> {
        if answers.len() != self.code.params().databases {
            return Err(param(format!(
                "expected {} answers, got {}",
                self.code.params().databases,
                answers.len()
            )));
        }
        let plan = self.reconstruction_plan(k_star, f)?;
        let field = self.code.field();
        Ok(plan
            .combinations
            .iter()
            .map(|c| field.dot(c, answers))
            .collect())
    }

    /// `L / sum of answer lengths`.
    pub fn retrieval_rate(&self) -> Rational {
        let p = self.code.params();
        let downloaded = (p.databases * self.answer_length()) as i128;
        Rational::new(p.message_len as i128, downloaded).expect("at least one database")
    }

    /// Runs one retrieval with a key drawn uniformly by `rng`.
    pub fn simulate_retrieval<R: Rng + ?Sized>(
        &self,
        messages: &[Vec<Elem>],
        k_star: usize,
        rng: &mut R,
    ) -> Result<Transcript> {
        self.check_k(k_star)?;
        let f = self.f_values[rng.gen_range(0..self.f_values.len())];
        self.run(messages, k_star, f)
    }

    /// Runs one retrieval with a fixed key.
    pub fn run(&self, messages: &[Vec<Elem>], k_star: usize, f: u32) -> Result<Transcript> {
        let storage = self.code.encode(messages)?;
        let queries = self.gen_queries(k_star, f)?;
        let answers = storage
            .iter()
            .zip(&queries)
            .map(|(s, &q)| answer(s, q))
            .collect::<Result<Vec<_>>>()?;
        let reconstructed = self.reconstruct(k_star, f, &answers)?;
        Ok(Transcript {
            k_star,
            f,
            download_count: answers.len() * self.answer_length(),
            queries,
            answers,
            reconstructed,
        })
    }
}
