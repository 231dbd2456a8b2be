//! Logiscope-style class metrics, Kiviat threshold statuses, the ISO 9126
//! maintainability criteria and quality-level distributions.
//!
//! Criteria are sums of class metrics:
//!
//! ```text
//! ANALYZABILITY   = cl_wmc + cl_comf + in_bases + cu_cdused
//! CHANGEABILITY   = cl_stat + cl_func + cl_data
//! STABILITY       = cl_data_publ + cu_cdusers + in_noc + cl_func_publ
//! TESTABILITY     = cl_wmc + cl_func + cu_cdused
//! MAINTAINABILITY = ANALYZABILITY + CHANGEABILITY + STABILITY + TESTABILITY
//! ```
//!
//! In [`CriteriaMode::Raw`] the metric values are summed as-is. In
//! [`CriteriaMode::Banded`] every metric is first mapped to a band score
//! from 0 (inside its Kiviat range) to 3 (far outside it), and the sums are
//! classified into [`QualityLevel`]s.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::ck::{counted_methods, incoming_references, outgoing_references, wmc, CkOptions};
use crate::model::{ClassModel, ModelError, TypeDecl, Visibility};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LogiscopeMetric {
    ClComf,
    ClComm,
    ClData,
    ClDataPubl,
    ClFunc,
    ClFuncPubl,
    ClLine,
    ClStat,
    ClWmc,
    CuCdused,
    CuCdusers,
    InBases,
    InNoc,
}

impl LogiscopeMetric {
    /// Kiviat row order.
    pub const ALL: [LogiscopeMetric; 13] = [
        LogiscopeMetric::ClComf,
        LogiscopeMetric::ClComm,
        LogiscopeMetric::ClData,
        LogiscopeMetric::ClDataPubl,
        LogiscopeMetric::ClFunc,
        LogiscopeMetric::ClFuncPubl,
        LogiscopeMetric::ClLine,
        LogiscopeMetric::ClStat,
        LogiscopeMetric::ClWmc,
        LogiscopeMetric::CuCdused,
        LogiscopeMetric::CuCdusers,
        LogiscopeMetric::InBases,
        LogiscopeMetric::InNoc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LogiscopeMetric::ClComf => "cl_comf",
            LogiscopeMetric::ClComm => "cl_comm",
            LogiscopeMetric::ClData => "cl_data",
            LogiscopeMetric::ClDataPubl => "cl_data_publ",
            LogiscopeMetric::ClFunc => "cl_func",
            LogiscopeMetric::ClFuncPubl => "cl_func_publ",
            LogiscopeMetric::ClLine => "cl_line",
            LogiscopeMetric::ClStat => "cl_stat",
            LogiscopeMetric::ClWmc => "cl_wmc",
            LogiscopeMetric::CuCdused => "cu_cdused",
            LogiscopeMetric::CuCdusers => "cu_cdusers",
            LogiscopeMetric::InBases => "in_bases",
            LogiscopeMetric::InNoc => "in_noc",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            LogiscopeMetric::ClComf => "Class comment rate",
            LogiscopeMetric::ClComm => "Number of lines of comment",
            LogiscopeMetric::ClData => "Total number of attributes",
            LogiscopeMetric::ClDataPubl => "Number of public attributes",
            LogiscopeMetric::ClFunc => "Total number of methods",
            LogiscopeMetric::ClFuncPubl => "Number of public methods",
            LogiscopeMetric::ClLine => "Number of lines",
            LogiscopeMetric::ClStat => "Number of statements",
            LogiscopeMetric::ClWmc => "Weighted Methods per Class",
            LogiscopeMetric::CuCdused => "Number of direct used classes",
            LogiscopeMetric::CuCdusers => "Number of direct users classes",
            LogiscopeMetric::InBases => "Number of base classes",
            LogiscopeMetric::InNoc => "Number of children",
        }
    }

    /// Accepts `cl_conf` as an alias of `cl_comf`.
    pub fn parse(s: &str) -> Option<Self> {
        if s == "cl_conf" {
            return Some(LogiscopeMetric::ClComf);
        }
        Self::ALL.into_iter().find(|m| m.name() == s)
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

/// The 13-metric vector in [`LogiscopeMetric::ALL`] order.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LogiscopeMetrics(pub [f64; 13]);

impl LogiscopeMetrics {
    pub fn get(&self, m: LogiscopeMetric) -> f64 {
        self.0[m.index()]
    }

    pub fn set(&mut self, m: LogiscopeMetric, v: f64) {
        self.0[m.index()] = v;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LogiscopeOptions {
    pub ck: CkOptions,
    /// in_bases also counts directly implemented interfaces.
    pub bases_include_interfaces: bool,
}

pub fn logiscope_metrics(
    model: &ClassModel,
    class: &str,
    opts: &LogiscopeOptions,
) -> Result<LogiscopeMetrics, ModelError> {
    let ty = model.require(class)?;
    Ok(metrics_for(model, ty, opts))
}

fn metrics_for(model: &ClassModel, ty: &TypeDecl, opts: &LogiscopeOptions) -> LogiscopeMetrics {
    use LogiscopeMetric::*;
    let mut v = LogiscopeMetrics::default();
    let methods: Vec<_> = counted_methods(ty, &opts.ck).collect();
    let line = ty.total_lines as f64;
    let comm = ty.comment_lines as f64;
    v.set(ClComf, if line > 0.0 { comm / line } else { 0.0 });
    v.set(ClComm, comm);
    v.set(ClLine, line);
    v.set(ClData, ty.fields.len() as f64);
    v.set(
        ClDataPubl,
        ty.fields.iter().filter(|f| f.visibility == Visibility::Public).count() as f64,
    );
    v.set(ClFunc, methods.len() as f64);
    v.set(
        ClFuncPubl,
        methods.iter().filter(|m| m.visibility == Visibility::Public).count() as f64,
    );
    v.set(ClStat, ty.methods.iter().map(|m| m.statements).sum::<u64>() as f64);
    v.set(ClWmc, wmc(ty, &opts.ck) as f64);
    v.set(CuCdused, outgoing_references(model, ty, &opts.ck).len() as f64);
    v.set(
        CuCdusers,
        incoming_references(model, &ty.qualified_name, &opts.ck).len() as f64,
    );
    let mut bases = model.ancestors(&ty.qualified_name).len();
    if opts.bases_include_interfaces {
        bases += ty.interfaces.iter().filter(|i| model.is_declared(i)).count();
    }
    v.set(InBases, bases as f64);
    v.set(InNoc, model.direct_subclasses(&ty.qualified_name).count() as f64);
    v
}

/// Acceptable `[min, max]` band of one metric; infinite ends are allowed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bound {
    pub min: f64,
    pub max: f64,
}

impl Bound {
    pub const fn new(min: f64, max: f64) -> Self {
        Bound { min, max }
    }

    pub fn contains(&self, value: f64) -> bool {
        value >= self.min && value <= self.max
    }

    /// Distance outside the band relative to its width (or to the finite
    /// bound's magnitude when the band is open or zero-width).
    pub fn excess_ratio(&self, value: f64) -> f64 {
        if self.contains(value) {
            return 0.0;
        }
        let distance = if value < self.min { self.min - value } else { value - self.max };
        let width = self.max - self.min;
        let scale = if width.is_finite() && width > 0.0 {
            width
        } else {
            let bound = if value < self.min { self.min } else { self.max };
            libm::fabs(bound).max(1.0)
        };
        distance / scale
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum QualityLevel {
    Excellent,
    Good,
    Fair,
    Poor,
}

impl QualityLevel {
    pub const ALL: [QualityLevel; 4] = [
        QualityLevel::Excellent,
        QualityLevel::Good,
        QualityLevel::Fair,
        QualityLevel::Poor,
    ];

    pub fn name(self) -> &'static str {
        match self {
            QualityLevel::Excellent => "excellent",
            QualityLevel::Good => "good",
            QualityLevel::Fair => "fair",
            QualityLevel::Poor => "poor",
        }
    }

    pub fn is_bad(self) -> bool {
        matches!(self, QualityLevel::Fair | QualityLevel::Poor)
    }
}

/// Upper-inclusive cut-offs for excellent, good and fair; anything above
/// the last is poor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelCutoffs(pub [f64; 3]);

impl LevelCutoffs {
    pub fn classify(&self, score: f64) -> QualityLevel {
        let [e, g, f] = self.0;
        if score <= e {
            QualityLevel::Excellent
        } else if score <= g {
            QualityLevel::Good
        } else if score <= f {
            QualityLevel::Fair
        } else {
            QualityLevel::Poor
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdProfile {
    pub bounds: BTreeMap<LogiscopeMetric, Bound>,
    /// Excess ratios at or below which a metric scores band 1, then band 2;
    /// beyond the second it scores 3.
    pub band_ratios: [f64; 2],
    pub criterion_levels: LevelCutoffs,
    pub factor_levels: LevelCutoffs,
}

impl Default for ThresholdProfile {
    /// Default min/max bands shown on Kiviat diagrams.
    fn default() -> Self {
        use LogiscopeMetric::*;
        let inf = f64::INFINITY;
        let bounds = [
            (ClComf, Bound::new(0.20, inf)),
            (ClComm, Bound::new(-inf, inf)),
            (ClData, Bound::new(0.0, 7.0)),
            (ClDataPubl, Bound::new(0.0, 0.0)),
            (ClFunc, Bound::new(0.0, 25.0)),
            (ClFuncPubl, Bound::new(0.0, 15.0)),
            (ClLine, Bound::new(-inf, inf)),
            (ClStat, Bound::new(0.0, 100.0)),
            (ClWmc, Bound::new(0.0, 60.0)),
            (CuCdused, Bound::new(0.0, 10.0)),
            (CuCdusers, Bound::new(0.0, 5.0)),
            (InBases, Bound::new(0.0, 3.0)),
            (InNoc, Bound::new(0.0, 3.0)),
        ];
        ThresholdProfile {
            bounds: bounds.into_iter().collect(),
            band_ratios: [0.5, 1.0],
            criterion_levels: LevelCutoffs([1.0, 3.0, 6.0]),
            factor_levels: LevelCutoffs([1.0, 3.0, 6.0]),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProfileError {
    #[error("threshold profile has no bounds for `{0}`")]
    MissingMetric(&'static str),
    #[error("threshold for `{0}` has min > max")]
    InvertedBound(&'static str),
}

impl ThresholdProfile {
    pub fn bound(&self, m: LogiscopeMetric) -> Result<Bound, ProfileError> {
        self.bounds
            .get(&m)
            .copied()
            .ok_or(ProfileError::MissingMetric(m.name()))
    }

    pub fn check(&self) -> Result<(), ProfileError> {
        for m in LogiscopeMetric::ALL {
            let b = self.bound(m)?;
            if b.min > b.max {
                return Err(ProfileError::InvertedBound(m.name()));
            }
        }
        Ok(())
    }

    /// Band score 0 (inside the range) … 3 (far outside).
    pub fn band_score(&self, m: LogiscopeMetric, value: f64) -> Result<u8, ProfileError> {
        let r = self.bound(m)?.excess_ratio(value);
        Ok(if r == 0.0 {
            0
        } else if r <= self.band_ratios[0] {
            1
        } else if r <= self.band_ratios[1] {
            2
        } else {
            3
        })
    }
}

/// Kiviat status: 0 inside `[min, max]` (inclusive), −1 outside.
pub fn kiviat_status(metrics: &LogiscopeMetrics, profile: &ThresholdProfile) -> Result<[i8; 13], ProfileError> {
    let mut out = [0i8; 13];
    for m in LogiscopeMetric::ALL {
        if !profile.bound(m)?.contains(metrics.get(m)) {
            out[m.index()] = -1;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Criterion {
    Maintainability,
    Analyzability,
    Changeability,
    Stability,
    Testability,
}

impl Criterion {
    /// Factor first, then the four criteria.
    pub const ALL: [Criterion; 5] = [
        Criterion::Maintainability,
        Criterion::Analyzability,
        Criterion::Changeability,
        Criterion::Stability,
        Criterion::Testability,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Criterion::Maintainability => "maintainability",
            Criterion::Analyzability => "analyzability",
            Criterion::Changeability => "changeability",
            Criterion::Stability => "stability",
            Criterion::Testability => "testability",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name().eq_ignore_ascii_case(s))
    }

    /// Constituent metrics; empty for the maintainability factor.
    pub fn metrics(self) -> &'static [LogiscopeMetric] {
        use LogiscopeMetric::*;
        match self {
            Criterion::Maintainability => &[],
            Criterion::Analyzability => &[ClWmc, ClComf, InBases, CuCdused],
            Criterion::Changeability => &[ClStat, ClFunc, ClData],
            Criterion::Stability => &[ClDataPubl, CuCdusers, InNoc, ClFuncPubl],
            Criterion::Testability => &[ClWmc, ClFunc, CuCdused],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CriteriaMode {
    Raw,
    #[default]
    Banded,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriterionScores {
    /// Indexed by [`Criterion`] discriminant.
    pub scores: [f64; 5],
    /// Present in banded mode.
    pub levels: Option<[QualityLevel; 5]>,
}

impl CriterionScores {
    pub fn score(&self, c: Criterion) -> f64 {
        self.scores[c as usize]
    }

    pub fn level(&self, c: Criterion) -> Option<QualityLevel> {
        self.levels.map(|l| l[c as usize])
    }
}

pub fn criteria(
    metrics: &LogiscopeMetrics,
    profile: &ThresholdProfile,
    mode: CriteriaMode,
) -> Result<CriterionScores, ProfileError> {
    let mut scores = [0.0; 5];
    for c in &Criterion::ALL[1..] {
        let mut sum = 0.0;
        for &m in c.metrics() {
            sum += match mode {
                CriteriaMode::Raw => metrics.get(m),
                CriteriaMode::Banded => profile.band_score(m, metrics.get(m))? as f64,
            };
        }
        scores[*c as usize] = sum;
    }
    scores[0] = scores[1..].iter().sum();
    let levels = match mode {
        CriteriaMode::Raw => None,
        CriteriaMode::Banded => {
            let mut l = [QualityLevel::Excellent; 5];
            l[0] = profile.factor_levels.classify(scores[0]);
            for i in 1..5 {
                l[i] = profile.criterion_levels.classify(scores[i]);
            }
            Some(l)
        }
    };
    Ok(CriterionScores { scores, levels })
}

/// Per-criterion share of classes at each quality level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelDistribution {
    /// `[criterion][level]` class counts.
    pub counts: [[u64; 4]; 5],
    /// `[criterion][level]` percentages rounded half-up.
    pub percent: [[u64; 4]; 5],
}

impl LevelDistribution {
    pub fn from_counts(counts: [[u64; 4]; 5]) -> Self {
        let mut percent = [[0u64; 4]; 5];
        for (row, out) in counts.iter().zip(percent.iter_mut()) {
            let total: u64 = row.iter().sum();
            if total == 0 {
                continue;
            }
            for (c, p) in row.iter().zip(out.iter_mut()) {
                // half-up: floor((200·c + total) / (2·total))
                *p = (200 * c + total) / (2 * total);
            }
        }
        LevelDistribution { counts, percent }
    }

    /// From already-rounded percentages (e.g. a reported summary).
    pub fn from_percentages(percent: [[u64; 4]; 5]) -> Self {
        LevelDistribution { counts: percent, percent }
    }

    pub fn percent(&self, c: Criterion, l: QualityLevel) -> u64 {
        self.percent[c as usize][l as usize]
    }

    /// Fair plus poor percentage.
    pub fn bad_percent(&self, c: Criterion) -> u64 {
        self.percent(c, QualityLevel::Fair) + self.percent(c, QualityLevel::Poor)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DistributionError {
    #[error("model has no classes")]
    EmptyModel,
    #[error(transparent)]
    Profile(#[from] ProfileError),
}

/// Banded classification of every declared type.
pub fn classify_all(
    model: &ClassModel,
    profile: &ThresholdProfile,
    opts: &LogiscopeOptions,
) -> Result<Vec<(String, LogiscopeMetrics, CriterionScores)>, ProfileError> {
    model
        .types()
        .iter()
        .map(|t| {
            let m = metrics_for(model, t, opts);
            let c = criteria(&m, profile, CriteriaMode::Banded)?;
            Ok((t.qualified_name.clone(), m, c))
        })
        .collect()
}

pub fn level_distribution(
    model: &ClassModel,
    profile: &ThresholdProfile,
    opts: &LogiscopeOptions,
) -> Result<LevelDistribution, DistributionError> {
    if model.is_empty() {
        return Err(DistributionError::EmptyModel);
    }
    let classified = classify_all(model, profile, opts)?;
    Ok(distribution_of(classified.iter().map(|(_, _, c)| c)))
}

pub fn distribution_of<'a>(scores: impl IntoIterator<Item = &'a CriterionScores>) -> LevelDistribution {
    let mut counts = [[0u64; 4]; 5];
    for s in scores {
        if let Some(levels) = s.levels {
            for (row, level) in counts.iter_mut().zip(levels) {
                row[level as usize] += 1;
            }
        }
    }
    LevelDistribution::from_counts(counts)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Winner {
    First,
    Second,
    Both,
}

impl Winner {
    pub fn marks(self) -> (bool, bool) {
        match self {
            Winner::First => (true, false),
            Winner::Second => (false, true),
            Winner::Both => (true, true),
        }
    }
}

/// The report with the smaller fair+poor share ranks higher; ties mark both.
pub fn ranking_matrix(a: &LevelDistribution, b: &LevelDistribution) -> [(Criterion, Winner); 5] {
    Criterion::ALL.map(|c| {
        let (x, y) = (a.bad_percent(c), b.bad_percent(c));
        let w = match x.cmp(&y) {
            core::cmp::Ordering::Less => Winner::First,
            core::cmp::Ordering::Greater => Winner::Second,
            core::cmp::Ordering::Equal => Winner::Both,
        };
        (c, w)
    })
}

/// Names of classes at fair or poor maintainability.
pub fn worst_classes(classified: &[(String, LogiscopeMetrics, CriterionScores)]) -> BTreeSet<String> {
    classified
        .iter()
        .filter(|(_, _, c)| c.level(Criterion::Maintainability).is_some_and(QualityLevel::is_bad))
        .map(|(n, _, _)| n.to_string())
        .collect()
}
