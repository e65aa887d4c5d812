//! Deciding whether two measure algebras carry isometric `L_log` spaces.
//!
//! Two algebras are isometric exactly when a measure-preserving isomorphism
//! exists between them. For the finitely-presented algebras of this crate
//! that reduces to two canonical forms: the sorted multiset of atom weights
//! and the passport rows of the non-atomic part. A positive answer comes with
//! an explicit isomorphism; a negative one with the most informative
//! certificate available, a numeric norm separation whenever the total
//! measures differ.

use std::sync::Arc;

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::function::{same_space, LogFunction};
use crate::isometry::{lay_out_segments, BandMatch, LinearMapTable, LogIsometry, MeasurePreservingIso};
use crate::measure_algebra::{MeasureAlgebra, PassportRow};
use crate::{rel_eq, REL_TOL};

/// Largest atom count accepted by [`brute_force_decide`].
pub const BRUTE_FORCE_LIMIT: usize = 8;

/// Threshold beyond which every constant `λ·1` separates the two norms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeparationThreshold {
    /// `ν(1)/μ(1)` as given.
    pub t: f64,
    /// `max(t, 1/t)`.
    pub effective_t: f64,
    /// Total of the lighter space.
    pub reference_total: f64,
    /// True when `t < 1` and the roles of the spaces were exchanged.
    pub swapped: bool,
    pub lambda_star: f64,
    /// `ln(1 + lambda_star)`, finite even when `lambda_star` overflows.
    pub ln1p_lambda_star: f64,
}

/// `λ*` such that every `λ > λ*` gives `(t' - 1)·m·ln(1 + λ) > ‖U(1)‖`,
/// where `t' = max(t, 1/t)` and `m` is the smaller total.
pub fn separating_lambda(mu_total: f64, nu_total: f64, norm_u1: f64) -> Result<SeparationThreshold> {
    for v in [mu_total, nu_total] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::InvalidMeasure { value: v });
        }
    }
    if !(norm_u1.is_finite() && norm_u1 >= 0.0) {
        return Err(Error::Parse(format!("norm of U(1) must be finite and non-negative, got {norm_u1}")));
    }
    if rel_eq(mu_total, nu_total, REL_TOL) {
        return Err(Error::EqualTotals);
    }
    let t = nu_total / mu_total;
    let (effective_t, reference_total, swapped) = if t > 1.0 {
        (t, mu_total, false)
    } else {
        (1.0 / t, nu_total, true)
    };
    let ln1p_lambda_star = norm_u1 / ((effective_t - 1.0) * reference_total);
    Ok(SeparationThreshold {
        t,
        effective_t,
        reference_total,
        swapped,
        lambda_star: ln1p_lambda_star.exp_m1(),
        ln1p_lambda_star,
    })
}

/// A candidate map `L_log(ν) → L_log(μ)` to be refuted.
#[derive(Debug, Clone, Copy)]
pub enum Candidate<'a> {
    Isometry(&'a LogIsometry),
    Matrix(&'a LinearMapTable),
    /// `f ↦ f` between two algebras of the same shape.
    Identity,
    /// `λ·1 ↦ c·λ·1`, evaluated on the whole unit of both algebras.
    Scaling(f64),
}

/// Norms of `λ·1` under `ν` and of its image under `μ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeparationCertificate {
    pub t: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_star: Option<f64>,
    pub lambda: f64,
    pub lhs: f64,
    pub rhs: f64,
}

impl SeparationCertificate {
    pub fn gap(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }

    pub fn separates(&self) -> bool {
        self.gap() > REL_TOL
    }
}

/// `ln(1 + c·(e^L - 1))`, stable for large `L`.
fn ln1p_scaled(ln1p_lambda: f64, c: f64) -> f64 {
    let lambda = ln1p_lambda.exp_m1();
    if lambda.is_finite() && (c * lambda).is_finite() {
        return (c * lambda).ln_1p();
    }
    let ln_lambda = ln1p_lambda + (-(-ln1p_lambda).exp()).ln_1p();
    c.ln() + ln_lambda
}

pub fn verify_separation(
    s_mu: &Arc<MeasureAlgebra>,
    s_nu: &Arc<MeasureAlgebra>,
    candidate: Candidate<'_>,
    lambda: f64,
) -> Result<SeparationCertificate> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::Parse(format!("lambda must be positive and finite, got {lambda}")));
    }
    let mu_total = s_mu.total_measure()?;
    let nu_total = s_nu.total_measure()?;
    let constant = LogFunction::constant(s_nu.clone(), lambda);
    let (lhs, rhs) = match candidate {
        Candidate::Scaling(c) => (
            nu_total * lambda.ln_1p(),
            mu_total * ln1p_scaled(lambda.ln_1p(), c.abs()),
        ),
        Candidate::Isometry(u) => {
            if !same_space(u.source(), s_nu) || !same_space(u.target(), s_mu) {
                return Err(Error::SpaceMismatch);
            }
            (constant.fnorm().value(), u.apply(&constant)?.fnorm().value())
        }
        Candidate::Identity => {
            let image = constant.rebase(s_mu.clone())?;
            (constant.fnorm().value(), image.fnorm().value())
        }
        Candidate::Matrix(m) => {
            if !same_space(m.source(), s_nu) || !same_space(m.target(), s_mu) {
                return Err(Error::SpaceMismatch);
            }
            (constant.fnorm().value(), m.apply(&constant)?.fnorm().value())
        }
    };
    Ok(SeparationCertificate {
        t: nu_total / mu_total,
        lambda_star: None,
        lambda,
        lhs,
        rhs,
    })
}

/// Why two algebras are not isometric.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum Refutation {
    /// Totals differ. `lhs` is the norm of `λ·1` in the heavier space and
    /// `rhs` the norm of its image under the norm-matched scaling candidate
    /// `λ·1 ↦ c·λ·1` with `c = 2^{t'} - 1`, which already preserves the norm
    /// of `1`.
    TotalMeasureMismatch {
        mu_total: f64,
        nu_total: f64,
        t: f64,
        swapped: bool,
        lambda_star: f64,
        lambda: f64,
        ln1p_lambda: f64,
        candidate_scale: f64,
        lhs: f64,
        rhs: f64,
    },
    AtomMultisetMismatch {
        left: Vec<f64>,
        right: Vec<f64>,
        first_difference: usize,
    },
    PassportMismatch {
        left: Vec<PassportRow>,
        right: Vec<PassportRow>,
        first_difference: usize,
    },
}

impl Refutation {
    pub fn kind(&self) -> &'static str {
        match self {
            Refutation::TotalMeasureMismatch { .. } => "TotalMeasureMismatch",
            Refutation::AtomMultisetMismatch { .. } => "AtomMultisetMismatch",
            Refutation::PassportMismatch { .. } => "PassportMismatch",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Decision {
    pub isometric: bool,
    pub witness: Option<MeasurePreservingIso>,
    pub refutation: Option<Refutation>,
    pub extensions_used: Vec<String>,
}

fn first_weight_difference(a: &[f64], b: &[f64]) -> Option<usize> {
    (0..a.len().max(b.len())).find(|&i| match (a.get(i), b.get(i)) {
        (Some(x), Some(y)) => !rel_eq(*x, *y, REL_TOL),
        _ => true,
    })
}

fn first_row_difference(a: &[PassportRow], b: &[PassportRow]) -> Option<usize> {
    (0..a.len().max(b.len())).find(|&i| match (a.get(i), b.get(i)) {
        (Some(x), Some(y)) => x.label != y.label || !rel_eq(x.alpha, y.alpha, REL_TOL),
        _ => true,
    })
}

fn total_measure_refutation(mu_total: f64, nu_total: f64) -> Result<Refutation> {
    let (big, small) = if nu_total > mu_total {
        (nu_total, mu_total)
    } else {
        (mu_total, nu_total)
    };
    let effective_t = big / small;
    // The scaling candidate maps the unit of the heavier space to c times
    // the unit of the lighter one, with c chosen so that the norm of 1 is
    // preserved: small·ln(1 + c) = big·ln 2.
    let candidate_scale = (effective_t * std::f64::consts::LN_2).exp_m1();
    let norm_u1 = big * std::f64::consts::LN_2;
    let threshold = separating_lambda(mu_total, nu_total, norm_u1)?;
    // λ = 2λ* + 1, kept in log form: ln(1 + λ) = ln 2 + ln(1 + λ*).
    let ln1p_lambda = std::f64::consts::LN_2 + threshold.ln1p_lambda_star;
    let lhs = big * ln1p_lambda;
    let rhs = small * ln1p_scaled(ln1p_lambda, candidate_scale);
    Ok(Refutation::TotalMeasureMismatch {
        mu_total,
        nu_total,
        t: threshold.t,
        swapped: threshold.swapped,
        lambda_star: threshold.lambda_star,
        lambda: 2.0 * threshold.lambda_star + 1.0,
        ln1p_lambda,
        candidate_scale,
        lhs,
        rhs,
    })
}

/// Constructs the canonical measure-preserving isomorphism between two
/// algebras with equal atom multisets and passports.
fn build_witness(s1: &Arc<MeasureAlgebra>, s2: &Arc<MeasureAlgebra>) -> Result<MeasurePreservingIso> {
    let o1 = s1.canonical_atom_order();
    let o2 = s2.canonical_atom_order();
    let mut atom_map = vec![0; s1.atom_count()];
    for (&i, &j) in o1.iter().zip(&o2) {
        atom_map[i] = j;
    }

    let labels = s1
        .components()
        .iter()
        .map(|c| c.label())
        .sorted()
        .dedup()
        .collect_vec();
    let mut segments = Vec::new();
    let mut bands = Vec::new();
    for label in labels {
        let group = |s: &MeasureAlgebra| {
            (0..s.component_count())
                .filter(|&k| s.components()[k].label() == label)
                .collect_vec()
        };
        let (g1, g2) = (group(s1), group(s2));
        let all_realized = g1.iter().all(|&k| s1.is_realized(k)) && g2.iter().all(|&k| s2.is_realized(k));
        if all_realized {
            let pieces = |g: &[usize]| g.iter().map(|&k| (k, 0.0, 1.0)).collect_vec();
            segments.extend(lay_out_segments(s1, &pieces(&g1), s2, &pieces(&g2)));
        } else {
            bands.push(BandMatch {
                label,
                source: g1,
                target: g2,
            });
        }
    }
    MeasurePreservingIso::from_parts(s1.clone(), s2.clone(), &atom_map, segments, bands)
}

/// Decides whether `L_log(S1)` and `L_log(S2)` are isometric.
///
/// Atoms are matched against atoms by sorted weight and the non-atomic parts
/// by passport; both matches are required. When the answer is negative the
/// refutation prefers a total-measure separation, then an atom multiset
/// difference, then a passport row difference.
pub fn decide_isometric(s1: &Arc<MeasureAlgebra>, s2: &Arc<MeasureAlgebra>) -> Result<Decision> {
    let p1 = s1.passport()?;
    let p2 = s2.passport()?;
    let mut extensions_used = Vec::new();
    if s1.atom_count() + s2.atom_count() > 0 {
        extensions_used.push("atomic-matching".to_string());
    }
    let mixed = |s: &MeasureAlgebra| s.atom_count() > 0 && s.component_count() > 0;
    if mixed(s1) || mixed(s2) {
        extensions_used.push("mixed-decomposition".to_string());
    }

    let atom_diff = first_weight_difference(&p1.atom_weights, &p2.atom_weights);
    let row_diff = first_row_difference(&p1.rows, &p2.rows);
    if atom_diff.is_none() && row_diff.is_none() {
        return Ok(Decision {
            isometric: true,
            witness: Some(build_witness(s1, s2)?),
            refutation: None,
            extensions_used,
        });
    }

    let (t1, t2) = (s1.total_measure()?, s2.total_measure()?);
    let refutation = if !rel_eq(t1, t2, REL_TOL) {
        total_measure_refutation(t1, t2)?
    } else if let Some(first_difference) = atom_diff {
        Refutation::AtomMultisetMismatch {
            left: p1.atom_weights,
            right: p2.atom_weights,
            first_difference,
        }
    } else {
        Refutation::PassportMismatch {
            left: p1.rows,
            right: p2.rows,
            first_difference: row_diff.unwrap_or(0),
        }
    };
    Ok(Decision {
        isometric: false,
        witness: None,
        refutation: Some(refutation),
        extensions_used,
    })
}

/// Exhaustive check for a weight-preserving atom bijection between two
/// purely atomic algebras.
pub fn brute_force_decide(s1: &MeasureAlgebra, s2: &MeasureAlgebra) -> Result<bool> {
    if s1.is_empty() || s2.is_empty() {
        return Err(Error::EmptyAlgebra);
    }
    if !s1.is_atomic() || !s2.is_atomic() {
        return Err(Error::StructureMismatch("brute force needs purely atomic spaces".into()));
    }
    let n = s1.atom_count().max(s2.atom_count());
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            atoms: n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    if s1.atom_count() != s2.atom_count() {
        return Ok(false);
    }
    Ok((0..n).permutations(n).any(|perm| {
        perm.iter()
            .enumerate()
            .all(|(i, &j)| rel_eq(s1.atom_weight(i), s2.atom_weight(j), REL_TOL))
    }))
}
