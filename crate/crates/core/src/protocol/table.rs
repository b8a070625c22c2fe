use serde::{Deserialize, Serialize};

use super::{check_dim, CorrectionRule, OutcomeTuple, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrectionEntry {
    pub outcome: OutcomeTuple,
    pub rule: CorrectionRule,
}

/// Feed-forward table over all `n^4` outcomes, `l` slowest and `k` fastest.
pub fn build_correction_table(n: usize) -> Result<Vec<CorrectionEntry>> {
    check_dim(n)?;
    Ok(OutcomeTuple::all(n).map(|outcome| CorrectionEntry { outcome, rule: CorrectionRule::for_outcome(&outcome, n) }).collect())
}
