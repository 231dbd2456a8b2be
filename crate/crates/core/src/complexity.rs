//! Method and system complexity: cyclomatic number, Halstead volume and
//! the Maintainability Index.

use crate::model::{ClassModel, HalsteadCounts, MethodDecl};

/// Cyclomatic number v(G) = decision points + 1.
pub fn cyclomatic(method: &MethodDecl) -> u64 {
    method.decision_count + 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum ComplexityError {
    #[error("halstead counts have occurrences but an empty vocabulary")]
    EmptyVocabulary,
    #[error("maintainability index input `{0}` out of range")]
    MiInput(&'static str),
}

/// Halstead volume `(N1 + N2) * log2(n1 + n2)`.
pub fn halstead_volume(h: &HalsteadCounts) -> Result<f64, ComplexityError> {
    let length = h.total_operators + h.total_operands;
    let vocabulary = h.distinct_operators + h.distinct_operands;
    if length == 0 {
        return Ok(0.0);
    }
    if vocabulary == 0 {
        return Err(ComplexityError::EmptyVocabulary);
    }
    Ok(length as f64 * libm::log2(vocabulary as f64))
}

/// How the comment-lines-per-module input is expressed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ClpmScale {
    #[default]
    Fraction,
    Percent,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MiInputs {
    pub halstead_volume: f64,
    pub mean_cyclomatic: f64,
    pub mean_loc: f64,
    /// Comment-line fraction in `[0, 1]`.
    pub comment_fraction: f64,
}

impl MiInputs {
    /// Builds inputs, rescaling `clpm` from percent when asked, and checks
    /// HV > 0, CC >= 1, LOCPM > 0 and 0 <= CLPM <= 1.
    pub fn new(hv: f64, cc: f64, locpm: f64, clpm: f64, scale: ClpmScale) -> Result<Self, ComplexityError> {
        let clpm = match scale {
            ClpmScale::Fraction => clpm,
            ClpmScale::Percent => clpm / 100.0,
        };
        if !(hv > 0.0 && hv.is_finite()) {
            return Err(ComplexityError::MiInput("HV"));
        }
        if !(cc >= 1.0 && cc.is_finite()) {
            return Err(ComplexityError::MiInput("CC"));
        }
        if !(locpm > 0.0 && locpm.is_finite()) {
            return Err(ComplexityError::MiInput("LOCPM"));
        }
        if !(0.0..=1.0).contains(&clpm) {
            return Err(ComplexityError::MiInput("CLPM"));
        }
        Ok(MiInputs {
            halstead_volume: hv,
            mean_cyclomatic: cc,
            mean_loc: locpm,
            comment_fraction: clpm,
        })
    }
}

/// `171 − 5.2·ln(HV) − 0.23·CC − 16.2·ln(LOCPM) + 50·sin(√(2.46·CLPM))`.
/// Higher is easier to maintain.
pub fn maintainability_index(inputs: &MiInputs) -> f64 {
    171.0 - 5.2 * libm::log(inputs.halstead_volume)
        - 0.23 * inputs.mean_cyclomatic
        - 16.2 * libm::log(inputs.mean_loc)
        + 50.0 * libm::sin(libm::sqrt(2.46 * inputs.comment_fraction))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexitySummary {
    pub sum_vg: u64,
    /// `None` when the model has no methods.
    pub avg_vg: Option<f64>,
    pub function_count: u64,
}

pub fn system_complexity_summary(model: &ClassModel) -> ComplexitySummary {
    let (sum_vg, function_count) = model
        .types()
        .iter()
        .flat_map(|t| &t.methods)
        .fold((0u64, 0u64), |(s, n), m| (s + cyclomatic(m), n + 1));
    ComplexitySummary {
        sum_vg,
        avg_vg: (function_count > 0).then(|| sum_vg as f64 / function_count as f64),
        function_count,
    }
}

/// Method-level averages feeding the Maintainability Index, treating each
/// method as a module. `None` when there are no methods or the averages
/// violate the index's input ranges (e.g. every method is empty).
pub fn system_mi_inputs<'a>(methods: impl IntoIterator<Item = &'a MethodDecl>) -> Option<MiInputs> {
    let mut n = 0u64;
    let (mut hv, mut cc, mut loc, mut clpm) = (0.0, 0.0, 0.0, 0.0);
    for m in methods {
        n += 1;
        hv += halstead_volume(&m.halstead).unwrap_or(0.0);
        cc += cyclomatic(m) as f64;
        loc += m.lines.code as f64;
        let total = m.lines.total();
        if total > 0 {
            clpm += m.lines.comment as f64 / total as f64;
        }
    }
    if n == 0 {
        return None;
    }
    let n = n as f64;
    MiInputs::new(hv / n, cc / n, loc / n, clpm / n, ClpmScale::Fraction).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{TypeDecl, Visibility};
    use alloc::vec;

    fn method_with(decisions: u64) -> MethodDecl {
        let mut m = MethodDecl::new("m", Visibility::Public);
        m.decision_count = decisions;
        m
    }

    #[test]
    fn cyclomatic_is_decisions_plus_one() {
        assert_eq!(cyclomatic(&method_with(0)), 1);
        // 2 if + 1 while + 1 && : graph with 4 binary branch nodes.
        assert_eq!(cyclomatic(&method_with(4)), 5);
    }

    #[test]
    fn halstead_examples() {
        assert_eq!(halstead_volume(&HalsteadCounts::new(1, 1, 1, 1)).unwrap(), 2.0);
        assert_eq!(halstead_volume(&HalsteadCounts::new(4, 4, 10, 6)).unwrap(), 48.0);
        assert_eq!(halstead_volume(&HalsteadCounts::default()).unwrap(), 0.0);
        assert_eq!(
            halstead_volume(&HalsteadCounts::new(0, 0, 3, 0)),
            Err(ComplexityError::EmptyVocabulary)
        );
    }

    #[test]
    fn mi_at_e() {
        let e = core::f64::consts::E;
        let mi = maintainability_index(&MiInputs::new(e, 1.0, e, 0.0, ClpmScale::Fraction).unwrap());
        assert!((mi - 149.37).abs() < 1e-9, "{mi}");
    }

    #[test]
    fn mi_percent_scale_matches_fraction() {
        let a = MiInputs::new(1000.0, 10.0, 100.0, 0.1, ClpmScale::Fraction).unwrap();
        let b = MiInputs::new(1000.0, 10.0, 100.0, 10.0, ClpmScale::Percent).unwrap();
        assert_eq!(maintainability_index(&a), maintainability_index(&b));
    }

    #[test]
    fn mi_rejects_out_of_range() {
        assert!(MiInputs::new(0.0, 1.0, 1.0, 0.0, ClpmScale::Fraction).is_err());
        assert!(MiInputs::new(1.0, 0.5, 1.0, 0.0, ClpmScale::Fraction).is_err());
        assert!(MiInputs::new(1.0, 1.0, 0.0, 0.0, ClpmScale::Fraction).is_err());
        assert!(MiInputs::new(1.0, 1.0, 1.0, 1.5, ClpmScale::Fraction).is_err());
    }

    #[test]
    fn mi_increases_with_comments_below_quarter_wave() {
        let at = |c| maintainability_index(&MiInputs::new(100.0, 2.0, 20.0, c, ClpmScale::Fraction).unwrap());
        assert!(at(0.2) > at(0.1));
        assert!(at(0.1) > at(0.0));
    }

    #[test]
    fn summary() {
        let m = ClassModel::from_types(vec![
            TypeDecl::class("A")
                .with_method(method_with(0))
                .with_method({
                    let mut x = method_with(2);
                    x.name = "n".into();
                    x
                }),
            TypeDecl::class("B").with_method(method_with(1)),
        ]);
        let s = system_complexity_summary(&m);
        assert_eq!(s.sum_vg, 6);
        assert_eq!(s.avg_vg, Some(2.0));
        assert_eq!(s.function_count, 3);

        let empty = system_complexity_summary(&ClassModel::default());
        assert_eq!((empty.sum_vg, empty.avg_vg, empty.function_count), (0, None, 0));
    }
}
