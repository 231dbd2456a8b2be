//! Validation and evolution statistics: Spearman rank correlation,
//! z-normalization, system design instability between iterations, and the
//! cohesion measures of use-case analysis models.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::model::ClassModel;
use crate::mood;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StatsError {
    #[error("need at least {needed} observations, got {got}")]
    TooFew { needed: usize, got: usize },
    #[error("rankings have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("zero variance")]
    ZeroVariance,
    #[error("non-finite value in series")]
    NonFinite,
    #[error("invalid rename map: {0}")]
    InvalidRename(String),
    #[error("similar pair references unknown scenario `{0}`")]
    UnknownScenario(String),
    #[error("similar pair ({0}, {0}) is not a pair of distinct scenarios")]
    SelfPair(String),
    #[error("unknown use case `{0}`")]
    UnknownUseCase(String),
}

/// 1-based ranks with ties given the mean of the positions they span.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap_or(Ordering::Equal));
    let mut ranks = alloc::vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = avg;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman's `r_s = 1 − 6Σd² / (n(n² − 1))` over two paired series; each
/// side is converted to average ranks first.
pub fn spearman(a: &[f64], b: &[f64]) -> Result<f64, StatsError> {
    if a.len() != b.len() {
        return Err(StatsError::LengthMismatch(a.len(), b.len()));
    }
    let n = a.len();
    if n < 2 {
        return Err(StatsError::TooFew { needed: 2, got: n });
    }
    if a.iter().chain(b).any(|v| !v.is_finite()) {
        return Err(StatsError::NonFinite);
    }
    let (ra, rb) = (average_ranks(a), average_ranks(b));
    let d2: f64 = ra.iter().zip(&rb).map(|(x, y)| (x - y) * (x - y)).sum();
    let n = n as f64;
    Ok(1.0 - 6.0 * d2 / (n * (n * n - 1.0)))
}

/// Subtracts the mean and divides by the population standard deviation.
pub fn z_normalize(values: &[f64]) -> Result<Vec<f64>, StatsError> {
    if values.len() < 2 {
        return Err(StatsError::TooFew {
            needed: 2,
            got: values.len(),
        });
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(StatsError::NonFinite);
    }
    if values.iter().all(|v| *v == values[0]) {
        return Err(StatsError::ZeroVariance);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    let sd = libm::sqrt(var);
    Ok(values.iter().map(|v| (v - mean) / sd).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IterationSnapshot {
    pub iteration: String,
    pub classes: BTreeSet<String>,
    /// Renames from the previous iteration's names to this one's.
    pub renames: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Instability {
    pub added: u64,
    pub deleted: u64,
    pub changed: u64,
    pub sdi: u64,
}

/// Classes added, deleted and renamed between two iterations. The rename
/// map is taken from `next`.
pub fn sdi(prev: &IterationSnapshot, next: &IterationSnapshot) -> Result<Instability, StatsError> {
    let mut targets = BTreeSet::new();
    for (old, new) in &next.renames {
        if !prev.classes.contains(old) {
            return Err(StatsError::InvalidRename(alloc::format!("`{old}` not in previous iteration")));
        }
        if !next.classes.contains(new) {
            return Err(StatsError::InvalidRename(alloc::format!("`{new}` not in next iteration")));
        }
        if !targets.insert(new) {
            return Err(StatsError::InvalidRename(alloc::format!("`{new}` is the target of two renames")));
        }
    }
    let renamed_prev: BTreeSet<&String> = prev
        .classes
        .iter()
        .map(|c| next.renames.get(c).unwrap_or(c))
        .collect();
    let added = next.classes.iter().filter(|c| !renamed_prev.contains(c)).count() as u64;
    let deleted = prev
        .classes
        .iter()
        .filter(|c| !next.renames.contains_key(*c) && !next.classes.contains(*c))
        .count() as u64;
    let changed = next.renames.len() as u64;
    Ok(Instability {
        added,
        deleted,
        changed,
        sdi: added + deleted + changed,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UseCase {
    pub name: String,
    pub scenarios: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UseCaseModel {
    pub use_cases: Vec<UseCase>,
    pub similar_pairs: Vec<(String, String)>,
}

impl UseCaseModel {
    /// Unordered, deduplicated similar pairs; rejects unknown scenarios
    /// and self-pairs.
    pub fn normalized_pairs(&self) -> Result<BTreeSet<(&str, &str)>, StatsError> {
        let known: BTreeSet<&str> = self
            .use_cases
            .iter()
            .flat_map(|u| u.scenarios.iter().map(String::as_str))
            .collect();
        let mut out = BTreeSet::new();
        for (a, b) in &self.similar_pairs {
            for s in [a, b] {
                if !known.contains(s.as_str()) {
                    return Err(StatsError::UnknownScenario(s.clone()));
                }
            }
            if a == b {
                return Err(StatsError::SelfPair(a.clone()));
            }
            let (x, y) = if a < b { (a, b) } else { (b, a) };
            out.insert((x.as_str(), y.as_str()));
        }
        Ok(out)
    }

    fn scenario_count(&self) -> usize {
        self.use_cases
            .iter()
            .flat_map(|u| &u.scenarios)
            .collect::<BTreeSet<_>>()
            .len()
    }
}

fn pairs_of(n: usize) -> u64 {
    (n as u64) * (n as u64).saturating_sub(1) / 2
}

/// `|Q| / |P|` within one use case: similar scenario pairs over all pairs.
/// `None` with fewer than two scenarios.
pub fn use_case_cohesion_local(model: &UseCaseModel, use_case: &str) -> Result<Option<f64>, StatsError> {
    let pairs = model.normalized_pairs()?;
    let Some(uc) = model.use_cases.iter().find(|u| u.name == use_case) else {
        return Err(StatsError::UnknownUseCase(use_case.into()));
    };
    let own: BTreeSet<&str> = uc.scenarios.iter().map(String::as_str).collect();
    let total = pairs_of(own.len());
    if total == 0 {
        return Ok(None);
    }
    let similar = pairs
        .iter()
        .filter(|(a, b)| own.contains(a) && own.contains(b))
        .count() as u64;
    Ok(Some(similar as f64 / total as f64))
}

/// `1 − |QM| / |PM|` over the whole model. `None` with fewer than two
/// scenarios in total.
pub fn use_case_cohesion_global(model: &UseCaseModel) -> Result<Option<f64>, StatsError> {
    let pairs = model.normalized_pairs()?;
    let total = pairs_of(model.scenario_count());
    if total == 0 {
        return Ok(None);
    }
    Ok(Some(1.0 - pairs.len() as f64 / total as f64))
}

/// Coupling Factor of a domain model given as a class model.
pub fn domain_coupling_cf(model: &ClassModel) -> Option<f64> {
    mood::cf(model)
}
