//! Fixed-seed invariant suites over every module.
//!
//! Each suite draws its own random cases from a seed derived from the run
//! seed, so suites are independent of each other and a report is fully
//! determined by the seed.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::classify::{brute_force_decide, decide_isometric, separating_lambda, verify_separation, Candidate};
use crate::error::Error;
use crate::function::LogFunction;
use crate::isometry::{decompose, LinearMapTable, LogIsometry};
use crate::measure_algebra::{radon_nikodym, Atom, HomogeneousComponent, MeasureAlgebra, WeightLabel};
use crate::{rel_eq, sample, REL_TOL};

pub const DEFAULT_SEED: u64 = 20_240_601;

pub const SUITES: [&str; 9] = [
    "fnorm-axioms",
    "indicator-norm",
    "radon-nikodym",
    "measure-preserving-isometry",
    "decomposition-round-trip",
    "disjointness-control",
    "separation-certificate",
    "classification-oracle",
    "passport-criterion",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub pass: bool,
    pub cases: usize,
    pub failures: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub pass: bool,
    pub suites: Vec<SuiteReport>,
}

/// Running tally for one suite.
struct Tally {
    name: &'static str,
    tolerance: f64,
    cases: usize,
    failures: usize,
    max_deviation: f64,
}

impl Tally {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Tally {
            name,
            tolerance,
            cases: 0,
            failures: 0,
            max_deviation: 0.0,
        }
    }

    /// Records a case whose deviation must stay within the tolerance.
    fn deviation(&mut self, d: f64) {
        self.cases += 1;
        if !(d <= self.tolerance) {
            self.failures += 1;
        }
        if d.is_nan() {
            self.max_deviation = f64::INFINITY;
        } else {
            self.max_deviation = self.max_deviation.max(d);
        }
    }

    fn check(&mut self, ok: bool) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
        }
    }

    fn finish(self) -> SuiteReport {
        SuiteReport {
            name: self.name.to_string(),
            pass: self.failures == 0,
            cases: self.cases,
            failures: self.failures,
            max_deviation: self.max_deviation,
            tolerance: self.tolerance,
        }
    }
}

fn suite_rng(seed: u64, index: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(index as u64))
}

pub fn run(seed: u64) -> SelftestReport {
    run_with_fault(seed, None)
}

/// Like [`run`], but deliberately perturbs the named suite so that it must
/// fail. Used to check that the suites can detect errors at all.
#[doc(hidden)]
pub fn run_with_fault(seed: u64, faulty: Option<&str>) -> SelftestReport {
    let suites: Vec<SuiteReport> = SUITES
        .iter()
        .enumerate()
        .map(|(i, &name)| run_suite(name, seed, i, faulty == Some(name)))
        .collect();
    SelftestReport {
        seed,
        pass: suites.iter().all(|s| s.pass),
        suites,
    }
}

fn run_suite(name: &'static str, seed: u64, index: usize, fault: bool) -> SuiteReport {
    let mut rng = suite_rng(seed, index);
    let rng = &mut rng;
    match name {
        "fnorm-axioms" => fnorm_axioms(rng, fault, 1000),
        "indicator-norm" => indicator_norm(rng, fault, 100),
        "radon-nikodym" => radon_nikodym_identity(rng, fault, 100),
        "measure-preserving-isometry" => measure_preserving(rng, fault, 200, 50),
        "decomposition-round-trip" => round_trip(rng, fault, 200),
        "disjointness-control" => disjointness_control(rng, fault, 500),
        "separation-certificate" => separation(rng, fault, 100),
        "classification-oracle" => classification_oracle(rng, fault, 500),
        "passport-criterion" => passport_criterion(rng, fault, 100),
        _ => unreachable!("unknown suite {name}"),
    }
}

fn nudge(fault: bool) -> f64 {
    if fault {
        1e-6
    } else {
        0.0
    }
}

fn fnorm_axioms(rng: &mut ChaCha8Rng, fault: bool, cases: usize) -> SuiteReport {
    let mut t = Tally::new("fnorm-axioms", 1e-12);
    for _ in 0..cases {
        let space = Arc::new(sample::random_space(rng, 6, 2));
        let f = sample::random_function(&space, rng);
        let g = sample::random_function(&space, rng);
        let alpha = rng.gen_range(-1.0..=1.0);
        let nf = f.fnorm().value() + nudge(fault);
        let ng = g.fnorm().value();
        let zero = LogFunction::zero(space.clone()).fnorm().value();
        let positive = f.max_abs() == 0.0 || nf > 0.0;
        let sum = f.add(&g).expect("same space").fnorm().value();
        let scaled = f.scale(alpha).fnorm().value();
        let symmetric = (f.scale(-1.0).fnorm().value() - nf).abs();
        let worst = [
            zero.abs(),
            if positive { 0.0 } else { f64::INFINITY },
            (sum - nf - ng).max(0.0),
            (scaled - nf).max(0.0),
            symmetric,
        ]
        .into_iter()
        .fold(0.0, f64::max);
        t.deviation(worst);
    }
    t.finish()
}

fn indicator_norm(rng: &mut ChaCha8Rng, fault: bool, cases: usize) -> SuiteReport {
    let mut t = Tally::new("indicator-norm", 1e-12);
    for _ in 0..cases {
        let space = Arc::new(sample::random_space(rng, 6, 2));
        let e = sample::random_event(&space, rng);
        let measure = space.measure(&e).expect("event of this space");
        let norm = LogFunction::indicator(space.clone(), &e)
            .expect("event of this space")
            .fnorm()
            .value()
            * (1.0 + nudge(fault));
        let expected = measure * std::f64::consts::LN_2;
        let err = if expected == 0.0 {
            norm.abs()
        } else {
            (norm - expected).abs() / expected
        };
        t.deviation(err);
    }
    t.finish()
}

/// `ν` with the shape of `space` and independently drawn weights.
fn reweighted(space: &MeasureAlgebra, rng: &mut ChaCha8Rng) -> MeasureAlgebra {
    let atoms = (0..space.atom_count())
        .map(|_| Atom::new(sample::random_weight(rng)).expect("positive weight"))
        .collect();
    let components = space
        .components()
        .iter()
        .map(|c| HomogeneousComponent::new(c.label(), sample::random_weight(rng), c.is_realized()).expect("valid"))
        .collect();
    MeasureAlgebra::new(atoms, components)
}

fn radon_nikodym_identity(rng: &mut ChaCha8Rng, fault: bool, cases: usize) -> SuiteReport {
    let mut t = Tally::new("radon-nikodym", 1e-9);
    for _ in 0..cases {
        let mu = Arc::new(sample::random_space(rng, 6, 2));
        let nu = Arc::new(reweighted(&mu, rng));
        let density = radon_nikodym(&nu, &mu).expect("same shape, positive weights");
        let f = sample::random_function(&mu, rng);
        let direct = f.rebase(nu.clone()).expect("same shape").integral();
        let via = f.integral_against(&density).expect("same shape") * (1.0 + nudge(fault)) + nudge(fault);
        t.deviation((direct - via).abs() / direct.abs().max(1.0));
    }
    t.finish()
}

fn measure_preserving(rng: &mut ChaCha8Rng, fault: bool, isos: usize, functions: usize) -> SuiteReport {
    let mut t = Tally::new("measure-preserving-isometry", REL_TOL);
    for _ in 0..isos {
        let space = Arc::new(sample::random_space(rng, 6, 2));
        let iso = sample::random_measure_preserving(&space, rng);
        let u = LogIsometry::from_measure_preserving(&iso);
        let mut worst: f64 = 0.0;
        for _ in 0..functions {
            let f = sample::random_function(&space, rng);
            let image = u.apply(&f).expect("all components are realized");
            worst = worst.max((image.fnorm().value() - f.fnorm().value()).abs());
        }
        t.deviation(worst + nudge(fault));
    }
    t.finish()
}

fn round_trip(rng: &mut ChaCha8Rng, fault: bool, cases: usize) -> SuiteReport {
    let mut t = Tally::new("decomposition-round-trip", REL_TOL);
    for _ in 0..cases {
        let space = Arc::new(sample::random_space(rng, 6, 0));
        let iso = sample::random_measure_preserving(&space, rng);
        let signs = sample::random_signs(space.atom_count(), rng);
        let u = LogIsometry::with_signs(&iso, &signs).expect("one sign per atom");
        let mut matrix = u.matrix().expect("atomic spaces");
        if fault {
            let m = matrix.matrix().to_vec();
            let m = m.into_iter().map(|row| row.into_iter().map(|v| v * 1.5).collect()).collect();
            matrix = LinearMapTable::new(matrix.source().clone(), matrix.target().clone(), m).expect("same shape");
        }
        match decompose(&matrix) {
            Ok(back) => {
                let exact = back.homomorphism().atom_images() == u.homomorphism().atom_images()
                    && back.multiplier().atom_values() == u.multiplier().atom_values()
                    && back.lambda_density() == u.lambda_density();
                let residual = back.formula_residual();
                t.deviation(if exact { residual } else { f64::INFINITY });
            }
            Err(_) => t.deviation(f64::INFINITY),
        }
    }
    t.finish()
}

/// A convex combination of 2 or 3 distinct permutation matrices.
pub fn random_mixing_matrix<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Vec<f64>> {
    let count = rng.gen_range(2..=3usize.min(if n == 2 { 2 } else { 3 }));
    let mut perms: Vec<Vec<usize>> = Vec::new();
    while perms.len() < count {
        let mut p: Vec<usize> = (0..n).collect();
        p.shuffle(rng);
        if !perms.contains(&p) {
            perms.push(p);
        }
    }
    let raw: Vec<f64> = (0..count).map(|_| rng.gen_range(0.1..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let mut matrix = vec![vec![0.0; n]; n];
    for (p, w) in perms.iter().zip(&raw) {
        for (i, &j) in p.iter().enumerate() {
            matrix[j][i] += w / total;
        }
    }
    matrix
}

fn disjointness_control(rng: &mut ChaCha8Rng, fault: bool, cases: usize) -> SuiteReport {
    let mut t = Tally::new("disjointness-control", 0.0);
    for case in 0..cases {
        let n = rng.gen_range(2..=6);
        let w = sample::random_weight(rng);
        let space = Arc::new(MeasureAlgebra::atomic(&vec![w; n]).expect("positive weights"));
        let matrix = if fault && case == 0 {
            let mut id = vec![vec![0.0; n]; n];
            for (i, row) in id.iter_mut().enumerate() {
                row[i] = 1.0;
            }
            id
        } else {
            random_mixing_matrix(n, rng)
        };
        let table = LinearMapTable::new(space.clone(), space, matrix).expect("square");
        t.check(matches!(decompose(&table), Err(Error::DisjointnessViolation { .. })));
    }
    t.finish()
}

fn separation(rng: &mut ChaCha8Rng, fault: bool, cases: usize) -> SuiteReport {
    let mut t = Tally::new("separation-certificate", 1e-10);
    for _ in 0..cases {
        let mu = Arc::new(sample::random_space(rng, 6, 2));
        let factor = rng.gen_range(1.1..=10.0);
        let nu = Arc::new(mu.scaled(factor).expect("positive factor"));
        let (m, n) = (mu.total_measure().unwrap(), nu.total_measure().unwrap());
        let norm_u1 = LogFunction::constant(mu.clone(), 1.0).fnorm().value();

        let th = separating_lambda(m, n, norm_u1).expect("distinct totals");
        let lambda = 2.0 * th.lambda_star + 1.0;
        let cert = verify_separation(&mu, &nu, Candidate::Identity, lambda).expect("same shape");
        let closed = (th.t - 1.0) * m * lambda.ln_1p();
        let mut worst = (cert.gap() - closed).abs() + nudge(fault);

        // Swapped roles: the lighter space as ν.
        let th2 = separating_lambda(n, m, norm_u1).expect("distinct totals");
        let cert2 = verify_separation(&nu, &mu, Candidate::Identity, lambda).expect("same shape");
        worst = worst.max((th2.lambda_star - th.lambda_star).abs() / th.lambda_star.max(1.0));
        worst = worst.max((cert2.gap() - closed).abs());
        if !th2.swapped || th.swapped {
            worst = f64::INFINITY;
        }
        t.deviation(worst);
    }
    t.finish()
}

/// Atom weights close to `base`, some within the tolerance and some just
/// outside it.
fn near_tie<R: Rng + ?Sized>(base: &[f64], rng: &mut R) -> Vec<f64> {
    let mut w: Vec<f64> = base
        .iter()
        .map(|&x| {
            let eps = match rng.gen_range(0..4) {
                0 => 0.0,
                1 => 0.4e-9,
                2 => 0.99e-9,
                _ => 1.6e-9,
            };
            let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            x * (1.0 + sign * eps)
        })
        .collect();
    w.shuffle(rng);
    w
}

pub fn random_atomic_pair<R: Rng + ?Sized>(rng: &mut R, max_atoms: usize) -> (Vec<f64>, Vec<f64>) {
    let n = rng.gen_range(1..=max_atoms);
    let mut base: Vec<f64> = (0..n).map(|_| sample::random_weight(rng)).collect();
    if rng.gen_bool(0.3) {
        // Repeated weights make the matching non-unique.
        let v = base[0];
        for w in base.iter_mut().skip(1) {
            if rng.gen_bool(0.5) {
                *w = v;
            }
        }
    }
    let other = match rng.gen_range(0..4) {
        0 => {
            let mut w = base.clone();
            w.shuffle(rng);
            w
        }
        1 | 2 => near_tie(&base, rng),
        _ => (0..rng.gen_range(1..=max_atoms)).map(|_| sample::random_weight(rng)).collect(),
    };
    (base, other)
}

fn classification_oracle(rng: &mut ChaCha8Rng, fault: bool, cases: usize) -> SuiteReport {
    let mut t = Tally::new("classification-oracle", 0.0);
    for case in 0..cases {
        let (a, b) = random_atomic_pair(rng, 7);
        let s1 = Arc::new(MeasureAlgebra::atomic(&a).expect("positive weights"));
        let s2 = Arc::new(MeasureAlgebra::atomic(&b).expect("positive weights"));
        let fast = decide_isometric(&s1, &s2).expect("non-empty").isometric;
        let slow = brute_force_decide(&s1, &s2).expect("at most 7 atoms");
        t.check((fast == slow) != (fault && case == 0));
    }
    t.finish()
}

fn passport_criterion(rng: &mut ChaCha8Rng, fault: bool, cases: usize) -> SuiteReport {
    let mut t = Tally::new("passport-criterion", 0.0);
    let fixed1 = Arc::new(MeasureAlgebra::new(
        vec![],
        vec![
            HomogeneousComponent::lebesgue(1.0).unwrap(),
            HomogeneousComponent::new(WeightLabel(1), 1.0, false).unwrap(),
        ],
    ));
    let fixed2 = Arc::new(MeasureAlgebra::new(vec![], vec![HomogeneousComponent::lebesgue(2.0).unwrap()]));
    let d = decide_isometric(&fixed1, &fixed2).expect("non-empty");
    t.check(!d.isometric && d.refutation.map(|r| r.kind()) == Some("PassportMismatch"));

    for case in 0..cases {
        let label = WeightLabel(rng.gen_range(0..3));
        let realized = label == WeightLabel::ALEPH_0;
        let total = sample::random_weight(rng);
        let split = |rng: &mut ChaCha8Rng, total: f64| -> Vec<HomogeneousComponent> {
            let k = rng.gen_range(1..=3);
            let raw: Vec<f64> = (0..k).map(|_| rng.gen_range(0.2..1.0)).collect();
            let sum: f64 = raw.iter().sum();
            raw.iter()
                .map(|r| HomogeneousComponent::new(label, total * r / sum, realized).unwrap())
                .collect()
        };
        let other_total = if rng.gen_bool(0.5) {
            total
        } else {
            total * rng.gen_range(1.01..3.0)
        };
        let s1 = Arc::new(MeasureAlgebra::new(vec![], split(rng, total)));
        let s2 = Arc::new(MeasureAlgebra::new(vec![], split(rng, other_total)));
        let expected = rel_eq(s1.total_measure().unwrap(), s2.total_measure().unwrap(), REL_TOL);
        let d = decide_isometric(&s1, &s2).expect("non-empty");
        let sound = match &d.witness {
            Some(w) => LogIsometry::from_measure_preserving(w).verify(20, case as u64).pass,
            None => !d.isometric,
        };
        t.check((d.isometric == expected && sound) != (fault && case == 0));
    }
    t.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fault_hook_breaks_only_the_named_suite() {
        for name in SUITES {
            let report = run_with_fault(7, Some(name));
            assert!(!report.pass);
            for suite in &report.suites {
                assert_eq!(suite.pass, suite.name != name, "{}", suite.name);
            }
        }
    }

    #[test]
    fn mixing_matrix_is_doubly_stochastic() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 2..6 {
            let m = random_mixing_matrix(n, &mut rng);
            for i in 0..n {
                let row: f64 = m[i].iter().sum();
                let col: f64 = m.iter().map(|r| r[i]).sum();
                assert!((row - 1.0).abs() < 1e-12 && (col - 1.0).abs() < 1e-12);
            }
        }
    }
}
