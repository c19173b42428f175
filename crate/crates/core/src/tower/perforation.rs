//! Positivity certification for the product of projection fractions.
//!
//! The tower carries one projection fraction f_i = d_i / p_i per stage, and
//! the quantity of interest is the infinite product of the f_i: the
//! criterion holds when the product stays positive. Writing x_i = 1 - f_i,
//! the product over any tail is at least 1 - sum of the tail deficits, so a
//! geometric bound on the deficits certifies positivity with an exact
//! rational lower bound.
//!
//! The certificate implemented here is deliberately modest: it checks that
//! every *computed* consecutive deficit ratio x_{i+1}/x_i stays within a
//! fixed threshold rho in (0, 1), and under the hypothesis that later ratios
//! keep doing so it bounds the uncomputed tail by the geometric series
//! x_N * rho / (1 - rho). The hypothesis is stated in the report notes; the
//! arithmetic on the computed stages is exact and the bound is an exact
//! rational, never a float.
//!
//! Reports also carry the index-offset product of d_{i+1} / p_i as plain
//! data. Whether that offset product is the better invariant for comparison
//! purposes is left open; the certificate only concerns the same-index
//! product.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{build, Schedule, Stage, StageParams, TowerError};
use crate::arith::{ExactInt, ExactRational};

/// Tuning knobs for [`perforation_report`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportOptions {
    /// Threshold the consecutive deficit ratios must stay within, strictly
    /// between 0 and 1.
    pub rho: ExactRational,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            rho: ExactRational::new(ExactInt::one(), ExactInt::from(2)),
        }
    }
}

/// Outcome of evaluating the product criterion on a finite tower segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PerforationVerdict {
    /// Every check passed; the report carries an exact positive lower bound.
    CertifiedPositive,
    /// No certificate at the given threshold; the notes say why.
    Inconclusive,
    /// Some stage has p <= 1, so the product criterion does not apply.
    CertifiedNotApplicable,
}

impl std::fmt::Display for PerforationVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let text = match self {
            PerforationVerdict::CertifiedPositive => "certified positive",
            PerforationVerdict::Inconclusive => "inconclusive",
            PerforationVerdict::CertifiedNotApplicable => "not applicable",
        };
        f.write_str(text)
    }
}

/// Exact evaluation of the product criterion over the computed stages.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerforationReport {
    /// Number of stages inspected.
    pub stages: usize,
    pub verdict: PerforationVerdict,
    /// Product of the computed projection fractions d_i / p_i.
    #[serde(with = "crate::serde_big::rational_string_serde")]
    pub partial_product: ExactRational,
    /// Product of d_{i+1} / p_i over the computed stages, reported as data;
    /// present once there are at least two stages.
    #[serde(with = "crate::serde_big::rational_string_opt")]
    pub offset_partial_product: Option<ExactRational>,
    /// Sum of the computed deficits 1 - f_i.
    #[serde(with = "crate::serde_big::rational_string_serde")]
    pub deficit_sum: ExactRational,
    /// The deficits themselves, in stage order.
    #[serde(with = "crate::serde_big::rational_string_vec")]
    pub deficits: Vec<ExactRational>,
    /// Largest consecutive deficit ratio, when every ratio is defined.
    #[serde(with = "crate::serde_big::rational_string_opt")]
    pub max_ratio: Option<ExactRational>,
    /// The threshold the ratios were held to.
    #[serde(with = "crate::serde_big::rational_string_serde")]
    pub ratio_bound: ExactRational,
    /// Geometric bound on the uncomputed tail deficits, when certified.
    #[serde(with = "crate::serde_big::rational_string_opt")]
    pub tail_bound: Option<ExactRational>,
    /// Exact positive lower bound for the full product, when certified.
    #[serde(with = "crate::serde_big::rational_string_opt")]
    pub certified_lower_bound: Option<ExactRational>,
    pub notes: Vec<String>,
}

/// Evaluates the product criterion on `stages` at the threshold in
/// `options`.
pub fn perforation_report(
    stages: &[Stage],
    options: &ReportOptions,
) -> Result<PerforationReport, TowerError> {
    let rho = &options.rho;
    if *rho <= ExactRational::zero() || *rho >= ExactRational::one() {
        return Err(TowerError::InvalidThreshold(format!(
            "need 0 < rho < 1, got {rho}"
        )));
    }
    if stages.is_empty() {
        return Err(TowerError::InvalidParameter(
            "a report needs at least one stage".into(),
        ));
    }

    let mut notes = Vec::new();
    let deficits: Vec<ExactRational> = stages.iter().map(Stage::deficit).collect();
    let mut partial_product = ExactRational::one();
    for stage in stages {
        partial_product *= &stage.f;
    }
    let mut deficit_sum = ExactRational::zero();
    for x in &deficits {
        deficit_sum += x;
    }
    let offset_partial_product = if stages.len() >= 2 {
        let mut product = ExactRational::one();
        for pair in stages.windows(2) {
            product *= ExactRational::new(pair[1].d.clone(), pair[0].map.p.clone());
        }
        Some(product)
    } else {
        None
    };

    let mut not_applicable = false;
    for stage in stages {
        if stage.map.p <= ExactInt::one() {
            notes.push(format!(
                "stage {} has p = {} <= 1; the product criterion does not apply",
                stage.index, stage.map.p
            ));
            not_applicable = true;
        }
    }

    let mut zero_deficit = None;
    for (stage, x) in stages.iter().zip(&deficits) {
        if x.is_zero() && zero_deficit.is_none() {
            zero_deficit = Some(stage.index);
        }
    }
    let max_ratio = if zero_deficit.is_none() {
        let mut max: Option<ExactRational> = None;
        for pair in deficits.windows(2) {
            let ratio = &pair[1] / &pair[0];
            if max.as_ref().map_or(true, |m| ratio > *m) {
                max = Some(ratio);
            }
        }
        max
    } else {
        None
    };

    if not_applicable {
        return Ok(PerforationReport {
            stages: stages.len(),
            verdict: PerforationVerdict::CertifiedNotApplicable,
            partial_product,
            offset_partial_product,
            deficit_sum,
            deficits,
            max_ratio,
            ratio_bound: rho.clone(),
            tail_bound: None,
            certified_lower_bound: None,
            notes,
        });
    }

    let mut certified = true;
    if stages.len() < 3 {
        notes.push(format!(
            "only {} stages computed; at least 3 are needed to certify",
            stages.len()
        ));
        certified = false;
    }
    if let Some(index) = zero_deficit {
        notes.push(format!(
            "deficit vanishes at stage {index}; ratio certification undefined"
        ));
        certified = false;
    }
    if let Some(max) = &max_ratio {
        if *max > *rho {
            notes.push(format!(
                "max consecutive deficit ratio {max} exceeds the threshold {rho}"
            ));
            certified = false;
        }
    }
    if partial_product.is_zero() {
        notes.push("a stage admits no projections; the partial product vanishes".into());
        certified = false;
    }

    let mut tail_bound = None;
    let mut certified_lower_bound = None;
    if certified {
        let last = deficits.last().expect("nonempty");
        let tail = last * rho / (ExactRational::one() - rho);
        if tail >= ExactRational::one() {
            notes.push(format!("tail bound {tail} is not below 1"));
            certified = false;
        } else {
            let bound = &partial_product * (ExactRational::one() - &tail);
            notes.push(
                "bound assumes every later deficit ratio stays within the threshold, \
                 as the computed ones do"
                    .into(),
            );
            tail_bound = Some(tail);
            certified_lower_bound = Some(bound);
        }
    }

    Ok(PerforationReport {
        stages: stages.len(),
        verdict: if certified {
            PerforationVerdict::CertifiedPositive
        } else {
            PerforationVerdict::Inconclusive
        },
        partial_product,
        offset_partial_product,
        deficit_sum,
        deficits,
        max_ratio,
        ratio_bound: rho.clone(),
        tail_bound,
        certified_lower_bound,
        notes,
    })
}

/// One evaluated schedule candidate from [`search_schedule`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicyEvaluation {
    pub label: String,
    pub schedule: Schedule,
    pub report: PerforationReport,
}

/// Result of comparing several schedule candidates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub evaluated: Vec<PolicyEvaluation>,
    /// Index into `evaluated` of the certified candidate with the largest
    /// lower bound; `None` when no candidate certifies. Ties keep the
    /// earliest candidate.
    pub best: Option<usize>,
}

/// Builds and evaluates each candidate parameter rule over `stages` stages
/// and picks the certified candidate with the best lower bound.
pub fn search_schedule(
    k1: u64,
    stages: usize,
    candidates: &[StageParams],
    d_policy: super::DPolicy,
    options: &ReportOptions,
) -> Result<SearchOutcome, TowerError> {
    if candidates.is_empty() {
        return Err(TowerError::InvalidParameter(
            "schedule search needs at least one candidate".into(),
        ));
    }
    let mut evaluated = Vec::with_capacity(candidates.len());
    let mut best: Option<usize> = None;
    for (index, params) in candidates.iter().enumerate() {
        let schedule = Schedule {
            k1,
            params: params.clone(),
            d_policy,
        };
        let tower = build(&schedule, stages)?;
        let report = perforation_report(&tower, options)?;
        if let Some(bound) = &report.certified_lower_bound {
            let beats = match best {
                None => true,
                Some(b) => {
                    let current: &PolicyEvaluation = &evaluated[b];
                    current
                        .report
                        .certified_lower_bound
                        .as_ref()
                        .map_or(true, |cur| bound > cur)
                }
            };
            if beats {
                best = Some(index);
            }
        }
        evaluated.push(PolicyEvaluation {
            label: schedule.label(),
            schedule,
            report,
        });
    }
    Ok(SearchOutcome { evaluated, best })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::MapCounts;
    use crate::solve::CorrectedInstance;
    use crate::tower::{DPolicy, UPolicy};

    fn policy_schedule(k1: u64, u: UPolicy, s: u64) -> Schedule {
        Schedule {
            k1,
            params: StageParams::Policy { u, s },
            d_policy: DPolicy::IncludeFlipped,
        }
    }

    fn ratio(num: i64, den: i64) -> ExactRational {
        ExactRational::new(ExactInt::from(num), ExactInt::from(den))
    }

    #[test]
    fn growing_u_certifies_at_one_half() {
        let schedule = policy_schedule(2, UPolicy::TimesK(1), 1);
        let tower = build(&schedule, 25).unwrap();
        let report = perforation_report(&tower, &ReportOptions::default()).unwrap();
        assert_eq!(report.verdict, PerforationVerdict::CertifiedPositive);
        assert_eq!(report.max_ratio, Some(ratio(78, 191)));
        let bound = report.certified_lower_bound.unwrap();
        assert!(bound > ExactRational::zero());
        assert!(bound < report.partial_product);
        assert_eq!(report.deficits[0], ratio(5, 13));
        assert_eq!(report.deficits[1], ratio(30, 191));
        assert_eq!(report.deficits[2], ratio(90, 1586));
    }

    #[test]
    fn constant_u_fails_the_one_half_threshold() {
        let schedule = policy_schedule(2, UPolicy::Const(1), 1);
        let tower = build(&schedule, 3).unwrap();
        let report = perforation_report(&tower, &ReportOptions::default()).unwrap();
        assert_eq!(report.verdict, PerforationVerdict::Inconclusive);
        assert_eq!(report.max_ratio, Some(ratio(143, 218)));
        assert!(report
            .notes
            .iter()
            .any(|n| n.contains("exceeds the threshold")));
        assert!(report.certified_lower_bound.is_none());
    }

    #[test]
    fn a_looser_threshold_can_certify_the_constant_rule() {
        let schedule = policy_schedule(2, UPolicy::Const(1), 1);
        let tower = build(&schedule, 3).unwrap();
        let options = ReportOptions {
            rho: ratio(2, 3),
        };
        let report = perforation_report(&tower, &options).unwrap();
        assert_eq!(report.verdict, PerforationVerdict::CertifiedPositive);
        // Tail bound doubles the last deficit: rho / (1 - rho) = 2.
        assert_eq!(
            report.tail_bound.unwrap(),
            &ratio(13, 109) * ratio(2, 1)
        );
    }

    #[test]
    fn two_stages_are_not_enough() {
        let schedule = policy_schedule(2, UPolicy::TimesK(1), 1);
        let tower = build(&schedule, 2).unwrap();
        let report = perforation_report(&tower, &ReportOptions::default()).unwrap();
        assert_eq!(report.verdict, PerforationVerdict::Inconclusive);
        assert!(report.notes.iter().any(|n| n.contains("at least 3")));
        assert!(report.offset_partial_product.is_some());
    }

    #[test]
    fn thresholds_outside_the_open_interval_are_rejected() {
        let schedule = policy_schedule(2, UPolicy::TimesK(1), 1);
        let tower = build(&schedule, 3).unwrap();
        for bad in [ratio(0, 1), ratio(1, 1), ratio(3, 2), ratio(-1, 2)] {
            let result = perforation_report(&tower, &ReportOptions { rho: bad });
            assert!(matches!(result, Err(TowerError::InvalidThreshold(_))));
        }
    }

    fn handmade_stage(index: usize, instance: CorrectedInstance) -> Stage {
        let map = MapCounts::from_instance(&instance).unwrap();
        let d = &map.coord_unflipped + &map.coord_flipped;
        let f = ExactRational::new(d.clone(), map.p.clone());
        Stage {
            index,
            s: None,
            u: None,
            map,
            m_cum: ExactInt::one(),
            cube_dim: ExactInt::one(),
            d,
            f,
            d_policy: DPolicy::IncludeFlipped,
        }
    }

    #[test]
    fn single_point_stages_void_the_criterion() {
        let trivial = CorrectedInstance::new(1, 1, 1, 1, 0, 0, 0, 1, 0, 0, 1).unwrap();
        let stages: Vec<Stage> = (1..=3).map(|i| handmade_stage(i, trivial)).collect();
        let report = perforation_report(&stages, &ReportOptions::default()).unwrap();
        assert_eq!(report.verdict, PerforationVerdict::CertifiedNotApplicable);
        assert!(report.notes.iter().any(|n| n.contains("does not apply")));
    }

    #[test]
    fn a_vanishing_deficit_blocks_ratio_certification() {
        // p = 3 with every eigenmap a coordinate map: f = 1, deficit 0.
        let full = CorrectedInstance::new(1, 1, 3, 3, 0, 0, 0, 3, 0, 0, 3).unwrap();
        let schedule = policy_schedule(1, UPolicy::TimesK(1), 1);
        let mut stages = vec![handmade_stage(1, full)];
        for stage in build(&schedule, 2).unwrap() {
            stages.push(Stage {
                index: stage.index + 1,
                ..stage
            });
        }
        let report = perforation_report(&stages, &ReportOptions::default()).unwrap();
        assert_eq!(report.verdict, PerforationVerdict::Inconclusive);
        assert!(report
            .notes
            .iter()
            .any(|n| n.contains("deficit vanishes at stage 1")));
        assert!(report.max_ratio.is_none());
    }

    #[test]
    fn offset_product_matches_the_shifted_quotients() {
        let schedule = policy_schedule(2, UPolicy::TimesK(1), 1);
        let tower = build(&schedule, 3).unwrap();
        let report = perforation_report(&tower, &ReportOptions::default()).unwrap();
        let expected = ratio(161, 26) * ratio(1496, 191);
        assert_eq!(report.offset_partial_product, Some(expected));
    }

    #[test]
    fn search_prefers_the_certified_candidate() {
        let candidates = vec![
            StageParams::Policy {
                u: UPolicy::TimesK(1),
                s: 1,
            },
            StageParams::Policy {
                u: UPolicy::Const(1),
                s: 1,
            },
        ];
        let outcome = search_schedule(
            2,
            6,
            &candidates,
            DPolicy::IncludeFlipped,
            &ReportOptions::default(),
        )
        .unwrap();
        assert_eq!(outcome.best, Some(0));
        assert_eq!(outcome.evaluated.len(), 2);
        assert_eq!(outcome.evaluated[0].label, "u=k,s=1");
        assert_eq!(
            outcome.evaluated[1].report.verdict,
            PerforationVerdict::Inconclusive
        );
    }

    #[test]
    fn report_serializes_rationals_as_exact_strings() {
        let schedule = policy_schedule(2, UPolicy::TimesK(1), 1);
        let tower = build(&schedule, 3).unwrap();
        let report = perforation_report(&tower, &ReportOptions::default()).unwrap();
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["deficits"][0], "5/13");
        assert_eq!(json["ratio_bound"], "1/2");
        assert_eq!(json["verdict"], "certified_positive");
    }
}
