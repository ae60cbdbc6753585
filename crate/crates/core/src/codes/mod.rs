//! Joint MDS storage codes.
//!
//! Every code here is linear: database `n` stores `G_n * w`, where `w` is the
//! concatenation of all `K` messages (message `k` occupies columns
//! `k*L .. (k+1)*L`). Database indices are 0-based throughout the API.

mod expanded_2n2;
mod joint_2n2;
pub mod labels;
mod parity;

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::gf::{rank, solve, Elem, Field, Mat, Solution};

pub use expanded_2n2::{
    build_expanded_2n2, build_expanded_2n2_with, expanded_2n2_start_field, CoeffSet, SearchConfig,
    SearchStats,
};
pub use joint_2n2::{
    build_joint_2n2, circulant_pair_row, min_field_2n2, pair_checks, FieldBounds2n2, GuanBound, PairCheck,
};
pub use parity::{build_expanded_parity, build_joint_parity, build_separate_baseline, expanded_parity_min_order};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "joint-2n2")]
    Joint2n2,
    #[serde(rename = "joint-parity")]
    JointParity,
    #[serde(rename = "expanded-parity")]
    ExpandedParity,
    #[serde(rename = "expanded-2n2")]
    Expanded2n2,
    #[serde(rename = "custom")]
    Custom,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Joint2n2 => "joint-2n2",
            Family::JointParity => "joint-parity",
            Family::ExpandedParity => "expanded-parity",
            Family::Expanded2n2 => "expanded-2n2",
            Family::Custom => "custom",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        [
            Family::Joint2n2,
            Family::JointParity,
            Family::ExpandedParity,
            Family::Expanded2n2,
            Family::Custom,
        ]
        .into_iter()
        .find(|f| f.as_str() == s)
        .ok_or_else(|| param(format!("unknown family `{s}`")))
    }
}

/// Shape of a `(K, N, T)` system with `L` symbols per message and `M`
/// symbols stored per database.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemParams {
    #[serde(rename = "K")]
    pub messages: usize,
    #[serde(rename = "N")]
    pub databases: usize,
    #[serde(rename = "T")]
    pub threshold: usize,
    #[serde(rename = "L")]
    pub message_len: usize,
    #[serde(rename = "M")]
    pub per_db: usize,
    pub family: Family,
    pub m_factor: usize,
}

impl SystemParams {
    pub fn validate(&self) -> Result<()> {
        let &SystemParams {
            messages: k,
            databases: n,
            threshold: t,
            message_len: l,
            per_db: m,
            family,
            m_factor: mf,
        } = self;
        let bad = |what: &str| Err(param(format!("{family} parameters violate {what}: {self:?}")));
        if k == 0 || t == 0 || l == 0 || m == 0 || mf == 0 {
            return bad("positivity");
        }
        if t >= n {
            return bad("T < N");
        }
        if l * k != m * t {
            return bad("L*K = M*T");
        }
        let ok = match family {
            Family::Joint2n2 => k == 2 && t == 2 && n >= 3 && l == n - 1 && m == n - 1 && mf == 1,
            Family::JointParity => k >= 2 && n == k + 1 && t == k && l == 2 && m == 2 && mf == 1,
            Family::ExpandedParity => {
                k >= 2 && n == mf * (k + 1) && t == mf * k && l == 2 * mf && m == 2
            }
            Family::Expanded2n2 => {
                let n0 = n / mf;
                k == 2 && n % mf == 0 && n0 >= 3 && t == 2 * mf && l == mf * (n0 - 1) && m == n0 - 1
            }
            Family::Custom => true,
        };
        if ok {
            Ok(())
        } else {
            bad("the family shape")
        }
    }

    /// Length of the stacked message vector, `K * L`.
    pub fn total_symbols(&self) -> usize {
        self.messages * self.message_len
    }
}

/// Family-level build request. `size` is `N` for joint-2n2, `K` for the
/// parity families and `N0` for expanded-2n2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuildSpec {
    pub family: Family,
    pub size: usize,
    pub m_factor: usize,
    pub field: Option<Field>,
    /// Exponent shift for joint-2n2 coefficients.
    pub offset: i64,
    pub search: SearchConfig,
}

impl BuildSpec {
    pub fn new(family: Family, size: usize) -> Self {
        BuildSpec {
            family,
            size,
            m_factor: 1,
            field: None,
            offset: 0,
            search: SearchConfig::new(0, 1000),
        }
    }

    /// Builds the code; search statistics are returned for expanded-2n2.
    pub fn build(&self) -> Result<(JointCode, Option<SearchStats>)> {
        let field = self.field.clone();
        let single = |what: &str| -> Result<()> {
            if self.m_factor != 1 {
                return Err(param(format!("{what} takes no expansion factor")));
            }
            Ok(())
        };
        let code = match self.family {
            Family::Joint2n2 => {
                single("joint-2n2")?;
                build_joint_2n2(self.size, field, self.offset)?
            }
            Family::JointParity => {
                single("joint-parity")?;
                if field.as_ref().is_some_and(|f| f.order() != 2) {
                    return Err(param("joint-parity codes live over GF(2)"));
                }
                build_joint_parity(self.size)?
            }
            Family::ExpandedParity => build_expanded_parity(self.size, self.m_factor, field)?,
            Family::Expanded2n2 => {
                if field.is_some() {
                    return Err(param("expanded-2n2 chooses its own field"));
                }
                let (code, _, stats) = build_expanded_2n2_with(self.size, self.m_factor, &self.search)?;
                return Ok((code, Some(stats)));
            }
            Family::Custom => return Err(Error::UnsupportedFamily(self.family.to_string())),
        };
        Ok((code, None))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub seed: Option<u64>,
    pub attempts: Option<u64>,
}

/// A linear joint storage code together with its field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointCode {
    params: SystemParams,
    field: Field,
    generators: Vec<Mat>,
    labels: Option<Vec<Vec<String>>>,
    provenance: Provenance,
}

impl JointCode {
    pub fn new(
        params: SystemParams,
        field: Field,
        generators: Vec<Mat>,
        labels: Option<Vec<Vec<String>>>,
        provenance: Provenance,
    ) -> Result<Self> {
        params.validate()?;
        if generators.len() != params.databases {
            return Err(param(format!(
                "{} generator matrices for {} databases",
                generators.len(),
                params.databases
            )));
        }
        let cols = params.total_symbols();
        for (n, g) in generators.iter().enumerate() {
            if g.rows() != params.per_db || g.cols() != cols {
                return Err(param(format!(
                    "generator {n} is {}x{}, expected {}x{cols}",
                    g.rows(),
                    g.cols(),
                    params.per_db
                )));
            }
            if rank(&field, g) != params.per_db {
                return Err(param(format!("generator {n} does not have full row rank")));
            }
        }
        if let Some(labels) = &labels {
            if labels.len() != params.databases || labels.iter().any(|l| l.len() != params.per_db) {
                return Err(param("label grid does not match the storage shape"));
            }
        }
        Ok(JointCode {
            params,
            field,
            generators,
            labels,
            provenance,
        })
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn generators(&self) -> &[Mat] {
        &self.generators
    }

    pub fn generator(&self, db: usize) -> &Mat {
        &self.generators[db]
    }

    pub fn labels(&self) -> Option<&[Vec<String>]> {
        self.labels.as_deref()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Replaces one database's generator without re-validating the MDS
    /// property. Used to build counterexamples.
    pub fn with_generator(mut self, db: usize, g: Mat) -> Result<Self> {
        if db >= self.params.databases {
            return Err(param(format!("no database {db}")));
        }
        self.generators[db] = g;
        if let Some(labels) = self.labels.as_mut() {
            labels[db] = labels::row_labels(&self.field, &self.params, &self.generators[db], labels::LabelStyle::for_family(&self.params));
        }
        self.params.family = Family::Custom;
        JointCode::new(self.params, self.field, self.generators, self.labels, self.provenance)
    }

    /// Rows of all listed databases stacked in order.
    pub fn stacked(&self, subset: &[usize]) -> Mat {
        Mat::vstack(subset.iter().map(|&n| &self.generators[n]))
    }

    fn flatten_messages(&self, messages: &[Vec<Elem>]) -> Result<Vec<Elem>> {
        let p = &self.params;
        if messages.len() != p.messages || messages.iter().any(|w| w.len() != p.message_len) {
            return Err(param(format!(
                "expected {} messages of {} symbols",
                p.messages, p.message_len
            )));
        }
        let q = self.field.order();
        if messages.iter().flatten().any(|s| s.value() >= q) {
            return Err(param(format!("message symbol outside {}", self.field)));
        }
        Ok(messages.iter().flatten().copied().collect())
    }

    /// Storage contents of every database.
    pub fn encode(&self, messages: &[Vec<Elem>]) -> Result<Vec<Vec<Elem>>> {
        let w = self.flatten_messages(messages)?;
        Ok(self
            .generators
            .iter()
            .map(|g| g.mul_vec(&self.field, &w))
            .collect())
    }

    /// Recovers all messages from the contents of `subset` (exactly `T`
    /// databases) by solving the stacked linear system.
    pub fn mds_decode(&self, subset: &[usize], stored: &[Vec<Elem>]) -> Result<Vec<Vec<Elem>>> {
        let p = &self.params;
        if subset.len() != p.threshold || stored.len() != subset.len() {
            return Err(param(format!(
                "decoding needs exactly {} databases and their contents",
                p.threshold
            )));
        }
        if subset.iter().any(|&n| n >= p.databases) || !subset.iter().all_unique() {
            return Err(param(format!("invalid database subset {subset:?}")));
        }
        if stored.iter().any(|s| s.len() != p.per_db) {
            return Err(param(format!("each database holds {} symbols", p.per_db)));
        }
        let a = self.stacked(subset);
        let b: Vec<Elem> = stored.iter().flatten().copied().collect();
        let needed = p.total_symbols();
        let decode_err = |rank| Error::Decode {
            subset: subset.to_vec(),
            rank,
            needed,
        };
        match solve(&self.field, &a, &b)? {
            Solution::Consistent { x, unique: true } => {
                Ok(x.chunks(p.message_len).map(<[Elem]>::to_vec).collect())
            }
            _ => Err(decode_err(rank(&self.field, &a))),
        }
    }

    /// Exhaustive MDS check over all `C(N, T)` database subsets.
    pub fn verify_mds(&self) -> MdsReport {
        let p = &self.params;
        let needed = p.total_symbols();
        let mut checked = 0;
        let mut failing_subsets = Vec::new();
        for subset in (0..p.databases).combinations(p.threshold) {
            checked += 1;
            if rank(&self.field, &self.stacked(&subset)) != needed {
                failing_subsets.push(subset);
            }
        }
        MdsReport {
            ok: failing_subsets.is_empty(),
            checked,
            failing_subsets,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MdsReport {
    pub ok: bool,
    /// Number of subsets examined.
    pub checked: usize,
    /// 0-based database indices of every rank-deficient subset.
    pub failing_subsets: Vec<Vec<usize>>,
}
