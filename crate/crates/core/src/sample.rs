//! Random spaces, functions, events and isomorphisms for property checks.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::interval::{IntervalSet, StepFunction};
use crate::isometry::{lay_out_segments, BandMatch, MeasurePreservingIso};
use crate::measure_algebra::{Atom, Event, HomogeneousComponent, MeasureAlgebra, WeightLabel};
use crate::LogFunction;

pub const MAX_PIECES: usize = 5;

pub fn random_weight<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.gen_range(0.05..2.0)
}

/// Random algebra with up to `max_atoms` atoms and up to `max_components`
/// realized Lebesgue components; never empty.
pub fn random_space<R: Rng + ?Sized>(rng: &mut R, max_atoms: usize, max_components: usize) -> MeasureAlgebra {
    loop {
        let n = rng.gen_range(0..=max_atoms);
        let m = rng.gen_range(0..=max_components);
        if n + m == 0 {
            continue;
        }
        let atoms = (0..n).map(|_| Atom::new(random_weight(rng)).unwrap()).collect();
        let components = (0..m)
            .map(|_| HomogeneousComponent::lebesgue(random_weight(rng)).unwrap())
            .collect();
        return MeasureAlgebra::new(atoms, components);
    }
}

fn random_value<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    match rng.gen_range(0..10) {
        0 | 1 => 0.0,
        2 => rng.gen_range(-1e3..1e3),
        3 => rng.gen_range(-1e-3..1e-3),
        _ => rng.gen_range(-10.0..10.0),
    }
}

/// Sorted cut points in `(0, 1)`.
fn random_cuts<R: Rng + ?Sized>(rng: &mut R, count: usize) -> Vec<f64> {
    let mut cuts: Vec<f64> = (0..count).map(|_| rng.gen_range(0.01..0.99)).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-6);
    cuts
}

pub fn random_step<R: Rng + ?Sized>(rng: &mut R, max_pieces: usize) -> StepFunction {
    let pieces = rng.gen_range(1..=max_pieces);
    let mut breaks = vec![0.0];
    breaks.extend(random_cuts(rng, pieces - 1));
    breaks.push(1.0);
    let values = (0..breaks.len() - 1).map(|_| random_value(rng)).collect();
    StepFunction::from_breaks(breaks, values).unwrap()
}

pub fn random_function<R: Rng + ?Sized>(space: &Arc<MeasureAlgebra>, rng: &mut R) -> LogFunction {
    let atoms = (0..space.atom_count()).map(|_| random_value(rng)).collect();
    let parts = (0..space.component_count())
        .filter(|&k| space.is_realized(k))
        .map(|_| random_step(rng, MAX_PIECES))
        .collect();
    LogFunction::new(space.clone(), atoms, parts).unwrap()
}

pub fn random_interval_set<R: Rng + ?Sized>(rng: &mut R) -> IntervalSet {
    let mut edges = vec![0.0];
    let count = rng.gen_range(0..6);
    edges.extend(random_cuts(rng, count));
    edges.push(1.0);
    let parts = edges
        .windows(2)
        .filter(|_| rng.gen_bool(0.5))
        .map(|w| (w[0], w[1]))
        .collect();
    IntervalSet::normalized(parts)
}

pub fn random_event<R: Rng + ?Sized>(space: &MeasureAlgebra, rng: &mut R) -> Event {
    let atoms: Vec<usize> = (0..space.atom_count()).filter(|_| rng.gen_bool(0.5)).collect();
    let intervals = (0..space.component_count())
        .map(|k| {
            if space.is_realized(k) {
                random_interval_set(rng)
            } else {
                IntervalSet::empty()
            }
        })
        .collect();
    Event::new(space, &atoms, intervals).unwrap()
}

/// Cuts each realized component into random pieces `(component, start,
/// length)`.
fn random_pieces<R: Rng + ?Sized>(space: &MeasureAlgebra, rng: &mut R) -> Vec<(usize, f64, f64)> {
    let mut pieces = Vec::new();
    for k in (0..space.component_count()).filter(|&k| space.is_realized(k)) {
        let mut edges = vec![0.0];
        let count = rng.gen_range(0..4);
        edges.extend(random_cuts(rng, count));
        edges.push(1.0);
        pieces.extend(edges.windows(2).map(|w| (k, w[0], w[1] - w[0])));
    }
    pieces
}

/// A random measure-preserving isomorphism out of `space`.
///
/// The target permutes the atoms, and its realized part carries the same
/// total measure split into a random number of components; the interval
/// pieces are shuffled before being laid onto the target, giving a random
/// interval exchange. Non-realized components are copied and matched
/// symbolically.
pub fn random_measure_preserving<R: Rng + ?Sized>(
    space: &Arc<MeasureAlgebra>,
    rng: &mut R,
) -> MeasurePreservingIso {
    let mut perm: Vec<usize> = (0..space.atom_count()).collect();
    perm.shuffle(rng);
    // Target atom perm[i] carries source atom i.
    let mut slots = vec![None; space.atom_count()];
    for (i, &j) in perm.iter().enumerate() {
        slots[j] = Some(space.atoms()[i]);
    }
    let target_atoms = slots.into_iter().flatten().collect();

    let realized_total: f64 = space
        .components()
        .iter()
        .filter(|c| c.is_realized())
        .map(|c| c.measure())
        .sum();
    let mut target_components = Vec::new();
    if realized_total > 0.0 {
        let count = rng.gen_range(1..=3);
        let fractions: Vec<f64> = (0..count).map(|_| rng.gen_range(0.2..1.0)).collect();
        let sum: f64 = fractions.iter().sum();
        for f in fractions {
            target_components.push(HomogeneousComponent::lebesgue(realized_total * f / sum).unwrap());
        }
    }
    let realized_count = target_components.len();
    let mut bands = Vec::new();
    for (k, c) in space.components().iter().enumerate() {
        if !c.is_realized() {
            bands.push(BandMatch {
                label: c.label(),
                source: vec![k],
                target: vec![target_components.len()],
            });
            target_components.push(*c);
        }
    }
    let target = Arc::new(MeasureAlgebra::new(target_atoms, target_components));

    let mut source_pieces = random_pieces(space, rng);
    source_pieces.shuffle(rng);
    let target_pieces: Vec<(usize, f64, f64)> = (0..realized_count).map(|k| (k, 0.0, 1.0)).collect();
    let segments = lay_out_segments(space, &source_pieces, &target, &target_pieces);

    MeasurePreservingIso::from_parts(space.clone(), target, &perm, segments, bands)
        .expect("random rearrangement is a measure-preserving bijection")
}

pub fn random_signs<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    (0..n).map(|_| if rng.gen_bool(0.5) { 1.0 } else { -1.0 }).collect()
}

/// Non-realized label for symbolic components in generated spaces.
pub fn random_label<R: Rng + ?Sized>(rng: &mut R, max: u32) -> WeightLabel {
    WeightLabel(rng.gen_range(0..=max))
}
