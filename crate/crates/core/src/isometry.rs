//! Linear isometries of `L_log` in multiplier-times-homomorphism form.
//!
//! Every linear isometry `U` factors as `U(f) = U(1)·Φ(f)` where `Φ` is an
//! injective homomorphism induced by a Boolean homomorphism of the measure
//! algebras, and the modulus of the multiplier is tied to the transported
//! measure `λ(Φ(e)) = μ₁(e)` by `|U(1)| = -1 + 2·dλ/dμ₂` on the range.
//!
//! Homomorphisms are presented concretely:
//!
//! * each source atom maps onto a non-empty set of target atoms, and the
//!   images of distinct atoms are disjoint;
//! * realized components are carried by finitely many affine interval
//!   segments (a piecewise-affine rearrangement of the unit intervals);
//! * non-realized components are matched symbolically in [`BandMatch`]
//!   groups; functions vanish there, so only the measures are checked.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::{same_space, LogFunction};
use crate::interval::{IntervalSet, StepFunction};
use crate::measure_algebra::{Density, Event, MeasureAlgebra, WeightLabel};
use crate::{rel_eq, sample, POINT_TOL, REL_TOL};

/// Endpoint slack when checking that segments tile an interval.
const TILE_TOL: f64 = 1e-12;

/// `[source_start, source_start + source_length)` of a source component is
/// mapped affinely onto `[target_start, target_start + target_length)` of a
/// target component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalSegment {
    pub source: usize,
    pub source_start: f64,
    pub source_length: f64,
    pub target: usize,
    pub target_start: f64,
    pub target_length: f64,
}

impl IntervalSegment {
    fn source_end(&self) -> f64 {
        self.source_start + self.source_length
    }

    fn target_end(&self) -> f64 {
        self.target_start + self.target_length
    }

    fn scale(&self) -> f64 {
        self.target_length / self.source_length
    }
}

/// A group of non-realized (or not concretely matched) components on each
/// side that are identified as a whole.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandMatch {
    pub label: WeightLabel,
    pub source: Vec<usize>,
    pub target: Vec<usize>,
}

fn check_tiling(mut parts: Vec<(f64, f64)>, what: &str) -> Result<()> {
    parts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut cursor = 0.0;
    for (a, b) in parts {
        if (a - cursor).abs() > TILE_TOL {
            return Err(Error::StructureMismatch(format!(
                "{what}: segments leave a gap or overlap at {cursor}"
            )));
        }
        cursor = b;
    }
    if (cursor - 1.0).abs() > TILE_TOL {
        return Err(Error::StructureMismatch(format!(
            "{what}: segments end at {cursor}, not 1"
        )));
    }
    Ok(())
}

fn check_disjoint(mut parts: Vec<(f64, f64)>, what: &str) -> Result<()> {
    parts.sort_by(|a, b| a.0.total_cmp(&b.0));
    for w in parts.windows(2) {
        if w[1].0 < w[0].1 - TILE_TOL {
            return Err(Error::StructureMismatch(format!(
                "{what}: target segments overlap near {}",
                w[1].0
            )));
        }
    }
    Ok(())
}

/// An injective homomorphism `Φ` between the function algebras of two
/// measure algebras, induced by a Boolean homomorphism `φ`.
#[derive(Debug, Clone)]
pub struct InducedHomomorphism {
    source: Arc<MeasureAlgebra>,
    target: Arc<MeasureAlgebra>,
    atom_images: Vec<Vec<usize>>,
    segments: Vec<IntervalSegment>,
    bands: Vec<BandMatch>,
    range: Event,
}

impl InducedHomomorphism {
    pub fn new(
        source: Arc<MeasureAlgebra>,
        target: Arc<MeasureAlgebra>,
        mut atom_images: Vec<Vec<usize>>,
        segments: Vec<IntervalSegment>,
        bands: Vec<BandMatch>,
    ) -> Result<Self> {
        if atom_images.len() != source.atom_count() {
            return Err(Error::StructureMismatch(format!(
                "{} atom images for {} source atoms",
                atom_images.len(),
                source.atom_count()
            )));
        }
        let mut owner: Vec<Option<usize>> = vec![None; target.atom_count()];
        for (i, image) in atom_images.iter_mut().enumerate() {
            image.sort_unstable();
            image.dedup();
            if image.is_empty() {
                return Err(Error::StructureMismatch(format!("atom {i} has an empty image")));
            }
            for &j in image.iter() {
                if j >= owner.len() {
                    return Err(Error::StructureMismatch(format!(
                        "target atom {j} out of range"
                    )));
                }
                if let Some(p) = owner[j] {
                    return Err(Error::StructureMismatch(format!(
                        "source atoms {p} and {i} share target atom {j}"
                    )));
                }
                owner[j] = Some(i);
            }
        }

        let mut source_band = vec![false; source.component_count()];
        let mut target_band = vec![false; target.component_count()];
        for band in &bands {
            if band.source.is_empty() || band.target.is_empty() {
                return Err(Error::StructureMismatch("empty band".into()));
            }
            for (side, space, used) in [
                (&band.source, &source, &mut source_band),
                (&band.target, &target, &mut target_band),
            ] {
                for &k in side {
                    if k >= space.component_count() {
                        return Err(Error::StructureMismatch(format!(
                            "band component {k} out of range"
                        )));
                    }
                    if space.components()[k].label() != band.label {
                        return Err(Error::StructureMismatch(format!(
                            "component {k} does not carry label {}",
                            band.label
                        )));
                    }
                    if used[k] {
                        return Err(Error::StructureMismatch(format!(
                            "component {k} appears in two bands"
                        )));
                    }
                    used[k] = true;
                }
            }
        }

        let mut by_source = vec![Vec::new(); source.component_count()];
        let mut by_target = vec![Vec::new(); target.component_count()];
        for seg in &segments {
            let valid = seg.source < source.component_count()
                && seg.target < target.component_count()
                && [seg.source_start, seg.source_length, seg.target_start, seg.target_length]
                    .iter()
                    .all(|v| v.is_finite())
                && seg.source_length > 0.0
                && seg.target_length > 0.0
                && seg.source_start >= -TILE_TOL
                && seg.target_start >= -TILE_TOL
                && seg.source_end() <= 1.0 + TILE_TOL
                && seg.target_end() <= 1.0 + TILE_TOL;
            if !valid {
                return Err(Error::StructureMismatch(format!("invalid segment {seg:?}")));
            }
            if !source.is_realized(seg.source) || !target.is_realized(seg.target) {
                return Err(Error::StructureMismatch(format!(
                    "segment {seg:?} touches a non-realized component"
                )));
            }
            if source_band[seg.source] || target_band[seg.target] {
                return Err(Error::StructureMismatch(format!(
                    "segment {seg:?} touches a band component"
                )));
            }
            by_source[seg.source].push((seg.source_start, seg.source_end()));
            by_target[seg.target].push((seg.target_start, seg.target_end()));
        }
        for (k, parts) in by_source.into_iter().enumerate() {
            if source_band[k] {
                continue;
            }
            if !source.is_realized(k) {
                return Err(Error::StructureMismatch(format!(
                    "non-realized source component {k} must be matched in a band"
                )));
            }
            check_tiling(parts, &format!("source component {k}"))?;
        }
        for (k, parts) in by_target.iter().enumerate() {
            check_disjoint(parts.clone(), &format!("target component {k}"))?;
        }

        let range_atoms = owner.iter().map(Option::is_some).collect();
        let range_intervals = (0..target.component_count())
            .map(|k| {
                if target_band[k] {
                    if target.is_realized(k) {
                        IntervalSet::full()
                    } else {
                        IntervalSet::empty()
                    }
                } else {
                    IntervalSet::normalized(by_target[k].clone())
                }
            })
            .collect();
        let range = Event::from_parts(range_atoms, range_intervals);

        Ok(InducedHomomorphism {
            source,
            target,
            atom_images,
            segments,
            bands,
            range,
        })
    }

    /// Identity map of a space onto itself.
    pub fn identity(space: Arc<MeasureAlgebra>) -> Self {
        Self::identity_between(space.clone(), space).expect("a space shares its own structure")
    }

    /// The structural identity between two spaces of the same shape (the
    /// measures may differ).
    pub fn identity_between(source: Arc<MeasureAlgebra>, target: Arc<MeasureAlgebra>) -> Result<Self> {
        if !source.same_structure(&target) {
            return Err(Error::StructureMismatch(
                "identity needs spaces of the same shape".into(),
            ));
        }
        let atom_images = (0..source.atom_count()).map(|i| vec![i]).collect();
        let mut segments = Vec::new();
        let mut bands = Vec::new();
        for (k, c) in source.components().iter().enumerate() {
            if c.is_realized() {
                segments.push(IntervalSegment {
                    source: k,
                    source_start: 0.0,
                    source_length: 1.0,
                    target: k,
                    target_start: 0.0,
                    target_length: 1.0,
                });
            } else {
                bands.push(BandMatch {
                    label: c.label(),
                    source: vec![k],
                    target: vec![k],
                });
            }
        }
        Self::new(source, target, atom_images, segments, bands)
    }

    pub fn source(&self) -> &Arc<MeasureAlgebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<MeasureAlgebra> {
        &self.target
    }

    pub fn atom_images(&self) -> &[Vec<usize>] {
        &self.atom_images
    }

    pub fn segments(&self) -> &[IntervalSegment] {
        &self.segments
    }

    pub fn bands(&self) -> &[BandMatch] {
        &self.bands
    }

    /// `Φ(1)`, the range band in the target.
    pub fn range(&self) -> &Event {
        &self.range
    }

    /// Source components whose functions are carried concretely.
    pub fn transportable_mask(&self) -> Vec<bool> {
        let mut mask: Vec<bool> = (0..self.source.component_count())
            .map(|k| self.source.is_realized(k))
            .collect();
        for band in &self.bands {
            for &k in &band.source {
                mask[k] = false;
            }
        }
        mask
    }

    fn target_band_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.target.component_count()];
        for band in &self.bands {
            for &k in &band.target {
                mask[k] = true;
            }
        }
        mask
    }

    /// Transports a function along `Φ`.
    pub fn transport(&self, f: &LogFunction) -> Result<LogFunction> {
        if !same_space(f.space(), &self.source) {
            return Err(Error::SpaceMismatch);
        }
        for band in &self.bands {
            for &k in &band.source {
                if f.part(k).max_abs() > POINT_TOL {
                    return Err(Error::Unrepresentable(format!(
                        "component {k} is matched symbolically; functions must vanish on it"
                    )));
                }
            }
        }
        let mut atom_values = vec![0.0; self.target.atom_count()];
        for (i, image) in self.atom_images.iter().enumerate() {
            for &j in image {
                atom_values[j] = f.atom_values()[i];
            }
        }
        let mut placed = vec![Vec::new(); self.target.component_count()];
        for seg in &self.segments {
            placed[seg.target].extend(f.part(seg.source).transport_window(
                seg.source_start,
                seg.source_length,
                seg.target_start,
                seg.target_length,
            ));
        }
        let parts = placed
            .into_iter()
            .map(StepFunction::from_placed_pieces)
            .collect();
        Ok(LogFunction::from_components(
            self.target.clone(),
            atom_values,
            parts,
        ))
    }

    /// The Boolean homomorphism `φ(e)`.
    pub fn map_event(&self, e: &Event) -> Result<Event> {
        let indicator = LogFunction::indicator(self.source.clone(), e)?;
        Ok(self.transport(&indicator)?.support())
    }

    /// `dλ/dμ₂` where `λ(Φ(e)) = μ₁(e)`; positive on the range and zero off
    /// it. On band components the density is the constant ratio of band
    /// totals.
    pub fn lambda_density(&self) -> Density {
        let mut atom_ratios = vec![0.0; self.target.atom_count()];
        for (i, image) in self.atom_images.iter().enumerate() {
            let image_measure: f64 = image.iter().map(|&j| self.target.atom_weight(j)).sum();
            let ratio = self.source.atom_weight(i) / image_measure;
            for &j in image {
                atom_ratios[j] = ratio;
            }
        }
        let mut placed = vec![Vec::new(); self.target.component_count()];
        for seg in &self.segments {
            let src = self.source.components()[seg.source].measure() * seg.source_length;
            let dst = self.target.components()[seg.target].measure() * seg.target_length;
            placed[seg.target].push((seg.target_start, seg.target_end(), src / dst));
        }
        let mut component_ratios: Vec<StepFunction> = placed
            .into_iter()
            .map(StepFunction::from_placed_pieces)
            .collect();
        for band in &self.bands {
            let ratio = self.band_measures(band);
            for &k in &band.target {
                component_ratios[k] = StepFunction::constant(ratio.0 / ratio.1);
            }
        }
        Density::new(atom_ratios, component_ratios)
    }

    fn band_measures(&self, band: &BandMatch) -> (f64, f64) {
        let total = |space: &MeasureAlgebra, ks: &[usize]| {
            ks.iter().map(|&k| space.components()[k].measure()).sum::<f64>()
        };
        (
            total(&self.source, &band.source),
            total(&self.target, &band.target),
        )
    }

    /// First violation of `μ₂(φ(e)) = μ₁(e)` on the generators, if any.
    pub fn measure_defect(&self) -> Option<Error> {
        for (i, image) in self.atom_images.iter().enumerate() {
            let image_measure: f64 = image.iter().map(|&j| self.target.atom_weight(j)).sum();
            let source_measure = self.source.atom_weight(i);
            if !rel_eq(source_measure, image_measure, REL_TOL) {
                return Some(Error::MeasureMismatch {
                    atom: i,
                    source_measure,
                    image_measure,
                });
            }
        }
        for seg in &self.segments {
            let src = self.source.components()[seg.source].measure() * seg.source_length;
            let dst = self.target.components()[seg.target].measure() * seg.target_length;
            if !rel_eq(src, dst, REL_TOL) {
                return Some(Error::NotMeasurePreserving(format!(
                    "segment of component {} has measure {src}, its image {dst}",
                    seg.source
                )));
            }
        }
        for band in &self.bands {
            let (src, dst) = self.band_measures(band);
            if !rel_eq(src, dst, REL_TOL) {
                return Some(Error::NotMeasurePreserving(format!(
                    "band {} has measure {src}, its image {dst}",
                    band.label
                )));
            }
        }
        None
    }

    /// Checks that `Φ` maps onto the whole target: every target atom is the
    /// image of exactly one source atom, realized components are tiled by
    /// segments, and every other component sits in a band.
    pub fn check_surjective(&self) -> Result<()> {
        let mut hit = vec![false; self.target.atom_count()];
        for (i, image) in self.atom_images.iter().enumerate() {
            if image.len() != 1 {
                return Err(Error::NotSurjective(format!(
                    "atom {i} is split over {} target atoms",
                    image.len()
                )));
            }
            hit[image[0]] = true;
        }
        if let Some(j) = hit.iter().position(|h| !h) {
            return Err(Error::NotSurjective(format!("target atom {j} is not reached")));
        }
        let band = self.target_band_mask();
        for k in 0..self.target.component_count() {
            if band[k] {
                continue;
            }
            if !self.target.is_realized(k) {
                return Err(Error::NotSurjective(format!(
                    "target component {k} is not reached"
                )));
            }
            let parts = self
                .segments
                .iter()
                .filter(|s| s.target == k)
                .map(|s| (s.target_start, s.target_end()))
                .collect();
            check_tiling(parts, &format!("target component {k}"))
                .map_err(|e| Error::NotSurjective(e.to_string()))?;
        }
        Ok(())
    }

    /// `Φ⁻¹` for a surjective `Φ`.
    pub fn inverse(&self) -> Result<Self> {
        self.check_surjective()?;
        let mut atom_images = vec![Vec::new(); self.target.atom_count()];
        for (i, image) in self.atom_images.iter().enumerate() {
            atom_images[image[0]].push(i);
        }
        let segments = self
            .segments
            .iter()
            .map(|s| IntervalSegment {
                source: s.target,
                source_start: s.target_start,
                source_length: s.target_length,
                target: s.source,
                target_start: s.source_start,
                target_length: s.source_length,
            })
            .collect();
        let bands = self
            .bands
            .iter()
            .map(|b| BandMatch {
                label: b.label,
                source: b.target.clone(),
                target: b.source.clone(),
            })
            .collect();
        Self::new(
            self.target.clone(),
            self.source.clone(),
            atom_images,
            segments,
            bands,
        )
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &InducedHomomorphism) -> Result<Self> {
        if !same_space(&self.target, &next.source) {
            return Err(Error::SpaceMismatch);
        }
        if !self.bands.is_empty() || !next.bands.is_empty() {
            return Err(Error::Unrepresentable(
                "composition of symbolic band matches".into(),
            ));
        }
        let atom_images = self
            .atom_images
            .iter()
            .map(|image| {
                image
                    .iter()
                    .flat_map(|&j| next.atom_images[j].iter().copied())
                    .collect()
            })
            .collect();
        let mut segments = Vec::new();
        for first in &self.segments {
            for second in next.segments.iter().filter(|s| s.source == first.target) {
                let lo = first.target_start.max(second.source_start);
                let hi = first.target_end().min(second.source_end());
                if hi - lo <= TILE_TOL {
                    continue;
                }
                let back = 1.0 / first.scale();
                segments.push(IntervalSegment {
                    source: first.source,
                    source_start: first.source_start + (lo - first.target_start) * back,
                    source_length: (hi - lo) * back,
                    target: second.target,
                    target_start: second.target_start + (lo - second.source_start) * second.scale(),
                    target_length: (hi - lo) * second.scale(),
                });
            }
        }
        Self::new(
            self.source.clone(),
            next.target.clone(),
            atom_images,
            segments,
            Vec::new(),
        )
    }

    /// The same map between spaces of identical shape but other measures.
    pub fn with_spaces(&self, source: Arc<MeasureAlgebra>, target: Arc<MeasureAlgebra>) -> Result<Self> {
        if !source.same_structure(&self.source) || !target.same_structure(&self.target) {
            return Err(Error::StructureMismatch(
                "replacement spaces must have the same shape".into(),
            ));
        }
        Self::new(
            source,
            target,
            self.atom_images.clone(),
            self.segments.clone(),
            self.bands.clone(),
        )
    }

    /// Realized target components that sit in a band, as an event.
    fn band_event(&self) -> Event {
        let band = self.target_band_mask();
        Event::from_parts(
            vec![false; self.target.atom_count()],
            (0..self.target.component_count())
                .map(|k| {
                    if band[k] && self.target.is_realized(k) {
                        IntervalSet::full()
                    } else {
                        IntervalSet::empty()
                    }
                })
                .collect(),
        )
    }
}

/// Lays two sequences of pieces `(component, start, length)` end to end on a
/// common measure line and cuts them into matching segments.
///
/// The target line is rescaled to the source total, so the resulting map is
/// measure preserving exactly when both totals agree.
pub fn lay_out_segments(
    source: &MeasureAlgebra,
    source_pieces: &[(usize, f64, f64)],
    target: &MeasureAlgebra,
    target_pieces: &[(usize, f64, f64)],
) -> Vec<IntervalSegment> {
    let line = |space: &MeasureAlgebra, pieces: &[(usize, f64, f64)]| {
        let mut cuts = vec![0.0];
        for &(k, _, len) in pieces {
            let next = cuts.last().unwrap() + space.components()[k].measure() * len;
            cuts.push(next);
        }
        cuts
    };
    let s_cuts = line(source, source_pieces);
    let t_cuts = line(target, target_pieces);
    let s_total = *s_cuts.last().unwrap();
    let t_total = *t_cuts.last().unwrap();
    if s_total <= 0.0 || t_total <= 0.0 {
        return Vec::new();
    }
    let scale = t_total / s_total;
    let eps = 1e-12 * s_total;

    let mut cuts: Vec<f64> = s_cuts
        .iter()
        .copied()
        .chain(t_cuts.iter().map(|t| t / scale))
        .collect();
    cuts.sort_by(f64::total_cmp);
    let mut merged: Vec<f64> = Vec::with_capacity(cuts.len());
    for c in cuts {
        match merged.last() {
            Some(&last) if c - last <= eps => {}
            _ => merged.push(c),
        }
    }
    *merged.last_mut().unwrap() = s_total;

    let mut segments = Vec::new();
    let (mut p, mut q) = (0usize, 0usize);
    for w in merged.windows(2) {
        let (x, y) = (w[0], w[1]);
        while p + 1 < source_pieces.len() && s_cuts[p + 1] <= x + eps {
            p += 1;
        }
        while q + 1 < target_pieces.len() && t_cuts[q + 1] / scale <= x + eps {
            q += 1;
        }
        let (sk, s0, slen) = source_pieces[p];
        let (tk, t0, tlen) = target_pieces[q];
        let alpha = source.components()[sk].measure();
        let beta = target.components()[tk].measure();
        let s_pos = |z: f64, cut_end: f64| {
            if (z - cut_end).abs() <= eps {
                s0 + slen
            } else {
                s0 + (z - s_cuts[p]) / alpha
            }
        };
        let t_pos = |z: f64, cut_end: f64| {
            if (z - cut_end).abs() <= eps {
                t0 + tlen
            } else {
                t0 + (z * scale - t_cuts[q]) / beta
            }
        };
        let (sa, sb) = (
            if (x - s_cuts[p]).abs() <= eps { s0 } else { s_pos(x, s_cuts[p + 1]) },
            s_pos(y, s_cuts[p + 1]),
        );
        let (ta, tb) = (
            if (x - t_cuts[q] / scale).abs() <= eps { t0 } else { t_pos(x, t_cuts[q + 1] / scale) },
            t_pos(y, t_cuts[q + 1] / scale),
        );
        if sb - sa <= 0.0 || tb - ta <= 0.0 {
            continue;
        }
        segments.push(IntervalSegment {
            source: sk,
            source_start: sa,
            source_length: sb - sa,
            target: tk,
            target_start: ta,
            target_length: tb - ta,
        });
    }
    segments
}

/// A piece of an interval rearrangement: `[from, from + length)` is
/// translated to `[to, to + length)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Translation {
    pub from: f64,
    pub to: f64,
    pub length: f64,
}

/// A measure-preserving Boolean isomorphism between two algebras.
#[derive(Debug, Clone)]
pub struct MeasurePreservingIso {
    hom: InducedHomomorphism,
}

impl MeasurePreservingIso {
    /// Validates bijectivity and measure preservation of a homomorphism.
    pub fn new(hom: InducedHomomorphism) -> Result<Self> {
        hom.check_surjective()
            .map_err(|e| Error::StructureMismatch(format!("not a bijection: {e}")))?;
        if let Some(defect) = hom.measure_defect() {
            return Err(Error::NotMeasurePreserving(defect.to_string()));
        }
        Ok(MeasurePreservingIso { hom })
    }

    pub fn from_parts(
        source: Arc<MeasureAlgebra>,
        target: Arc<MeasureAlgebra>,
        atom_map: &[usize],
        segments: Vec<IntervalSegment>,
        bands: Vec<BandMatch>,
    ) -> Result<Self> {
        let images = atom_map.iter().map(|&j| vec![j]).collect();
        Self::new(InducedHomomorphism::new(source, target, images, segments, bands)?)
    }

    /// Builds an isomorphism from a component bijection plus per-component
    /// interval translations. An empty translation list means the identity
    /// rearrangement; components that are not both realized are matched
    /// symbolically.
    pub fn from_translations(
        source: Arc<MeasureAlgebra>,
        target: Arc<MeasureAlgebra>,
        atom_map: &[usize],
        component_map: &[usize],
        rearrangements: &[Vec<Translation>],
    ) -> Result<Self> {
        if component_map.len() != source.component_count() {
            return Err(Error::StructureMismatch(format!(
                "{} component images for {} source components",
                component_map.len(),
                source.component_count()
            )));
        }
        if rearrangements.len() > component_map.len() {
            return Err(Error::StructureMismatch("more rearrangements than components".into()));
        }
        let mut segments = Vec::new();
        let mut bands = Vec::new();
        for (k, &t) in component_map.iter().enumerate() {
            if t >= target.component_count() {
                return Err(Error::StructureMismatch(format!(
                    "target component {t} out of range"
                )));
            }
            let (sc, tc) = (source.components()[k], target.components()[t]);
            if sc.label() != tc.label() {
                return Err(Error::NotMeasurePreserving(format!(
                    "component {k} has label {} but its image has {}",
                    sc.label(),
                    tc.label()
                )));
            }
            if sc.is_realized() && tc.is_realized() {
                let moves = rearrangements.get(k).map(Vec::as_slice).unwrap_or(&[]);
                if moves.is_empty() {
                    segments.push(IntervalSegment {
                        source: k,
                        source_start: 0.0,
                        source_length: 1.0,
                        target: t,
                        target_start: 0.0,
                        target_length: 1.0,
                    });
                }
                for m in moves {
                    segments.push(IntervalSegment {
                        source: k,
                        source_start: m.from,
                        source_length: m.length,
                        target: t,
                        target_start: m.to,
                        target_length: m.length,
                    });
                }
            } else {
                bands.push(BandMatch {
                    label: sc.label(),
                    source: vec![k],
                    target: vec![t],
                });
            }
        }
        Self::from_parts(source, target, atom_map, segments, bands)
    }

    pub fn identity(space: Arc<MeasureAlgebra>) -> Self {
        MeasurePreservingIso {
            hom: InducedHomomorphism::identity(space),
        }
    }

    pub fn homomorphism(&self) -> &InducedHomomorphism {
        &self.hom
    }

    pub fn source(&self) -> &Arc<MeasureAlgebra> {
        &self.hom.source
    }

    pub fn target(&self) -> &Arc<MeasureAlgebra> {
        &self.hom.target
    }

    /// Target atom of each source atom.
    pub fn atom_map(&self) -> Vec<usize> {
        self.hom.atom_images.iter().map(|img| img[0]).collect()
    }

    pub fn segments(&self) -> &[IntervalSegment] {
        &self.hom.segments
    }

    pub fn bands(&self) -> &[BandMatch] {
        &self.hom.bands
    }

    pub fn inverse(&self) -> Self {
        MeasurePreservingIso {
            hom: self.hom.inverse().expect("isomorphisms are surjective"),
        }
    }
}

/// Outcome of sampling norm preservation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub pass: bool,
    pub max_deviation: f64,
    pub trials: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violated_theorem: Option<String>,
}

/// A linear map `U(f) = u·Φ(f)` between `L_log` spaces.
#[derive(Debug, Clone)]
pub struct LogIsometry {
    phi: InducedHomomorphism,
    multiplier: LogFunction,
    lambda_density: Density,
}

impl LogIsometry {
    /// Assembles `U = u·Φ`. The multiplier must live on the target and
    /// vanish off the range of `Φ`; no isometry property is checked here.
    pub fn new(phi: InducedHomomorphism, multiplier: LogFunction) -> Result<Self> {
        if !same_space(multiplier.space(), &phi.target) {
            return Err(Error::SpaceMismatch);
        }
        let outside = phi.target.complement(&phi.range)?;
        let off = multiplier.mul(&LogFunction::indicator(phi.target.clone(), &outside)?)?;
        if off.max_abs() > POINT_TOL {
            return Err(Error::MalformedFunction(
                "the multiplier must vanish off the range".into(),
            ));
        }
        let lambda_density = phi.lambda_density();
        Ok(LogIsometry {
            phi,
            multiplier,
            lambda_density,
        })
    }

    /// The positive isometry induced by a measure-preserving isomorphism.
    pub fn from_measure_preserving(iso: &MeasurePreservingIso) -> Self {
        let phi = iso.hom.clone();
        let multiplier = LogFunction::indicator(phi.target.clone(), &phi.range)
            .expect("the range is an event of the target");
        Self::new(phi, multiplier).expect("the unit multiplier vanishes off the range")
    }

    /// Like [`Self::from_measure_preserving`] but with a sign `±1` attached
    /// to each source atom.
    pub fn with_signs(iso: &MeasurePreservingIso, signs: &[f64]) -> Result<Self> {
        if signs.len() != iso.source().atom_count() {
            return Err(Error::StructureMismatch(format!(
                "{} signs for {} atoms",
                signs.len(),
                iso.source().atom_count()
            )));
        }
        if let Some(s) = signs.iter().find(|s| s.abs() != 1.0) {
            return Err(Error::MalformedFunction(format!("sign {s} is not ±1")));
        }
        let base = Self::from_measure_preserving(iso);
        let mut atoms = base.multiplier.atom_values().to_vec();
        for (i, image) in iso.hom.atom_images.iter().enumerate() {
            for &j in image {
                atoms[j] = signs[i];
            }
        }
        let multiplier = LogFunction::from_components(
            iso.target().clone(),
            atoms,
            base.multiplier.parts().to_vec(),
        );
        Self::new(iso.hom.clone(), multiplier)
    }

    pub fn homomorphism(&self) -> &InducedHomomorphism {
        &self.phi
    }

    pub fn multiplier(&self) -> &LogFunction {
        &self.multiplier
    }

    pub fn lambda_density(&self) -> &Density {
        &self.lambda_density
    }

    pub fn source(&self) -> &Arc<MeasureAlgebra> {
        &self.phi.source
    }

    pub fn target(&self) -> &Arc<MeasureAlgebra> {
        &self.phi.target
    }

    pub fn range(&self) -> &Event {
        &self.phi.range
    }

    /// `U(f) = u·Φ(f)`.
    pub fn apply(&self, f: &LogFunction) -> Result<LogFunction> {
        self.phi.transport(f)?.mul(&self.multiplier)
    }

    /// Largest `| |u| + 1 - 2·dλ/dμ₂ |` over the concretely represented range.
    pub fn formula_residual(&self) -> f64 {
        self.formula_worst().map_or(0.0, |w| w.0)
    }

    /// Worst residual with its location, modulus and expected modulus.
    fn formula_worst(&self) -> Option<(f64, String, f64, f64)> {
        let mut worst: Option<(f64, String, f64, f64)> = None;
        let mut consider = |residual: f64, location: String, modulus: f64, expected: f64| {
            if worst.as_ref().map_or(true, |w| residual > w.0) {
                worst = Some((residual, location, modulus, expected));
            }
        };
        let range = &self.phi.range;
        for j in 0..self.phi.target.atom_count() {
            if range.contains_atom(j) {
                let u = self.multiplier.atom_values()[j].abs();
                let expected = -1.0 + 2.0 * self.lambda_density.atom_ratios()[j];
                consider((u - expected).abs(), format!("target atom {j}"), u, expected);
            }
        }
        for (k, set) in range.intervals().iter().enumerate() {
            if set.is_empty() {
                continue;
            }
            let u = self.multiplier.part(k);
            let rho = &self.lambda_density.component_ratios()[k];
            let both = u.zip_with(rho, |a, b| a.abs() - (-1.0 + 2.0 * b));
            let masked = both.zip_with(&StepFunction::indicator(set), |r, m| {
                if m != 0.0 {
                    r
                } else {
                    f64::NAN
                }
            });
            for (a, b, r) in masked.pieces().filter(|p| !p.2.is_nan()) {
                let x = 0.5 * (a + b);
                let modulus = u.value_at(x).abs();
                consider(r.abs(), format!("target component {k} near {x}"), modulus, modulus - r);
            }
        }
        worst
    }

    /// Validates `|U(1)| = -1 + 2·dλ/dμ₂` on the range.
    pub fn check_formula(&self) -> Result<()> {
        match self.formula_worst() {
            Some((residual, location, modulus, expected))
                if residual > REL_TOL * expected.abs().max(1.0) =>
            {
                Err(Error::FormulaViolation {
                    location,
                    modulus,
                    expected,
                })
            }
            _ => Ok(()),
        }
    }

    /// Validates `μ₂(Φ(e)) = μ₁(e)`.
    pub fn check_measure_preservation(&self) -> Result<()> {
        match self.phi.measure_defect() {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }

    /// Samples random functions on the source and compares norms before and
    /// after applying `U`. Passes iff the largest deviation is below
    /// `tolerance`.
    pub fn verify_with_tolerance(&self, trials: usize, seed: u64, tolerance: f64) -> VerificationReport {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mask = self.phi.transportable_mask();
        let mut max_deviation: f64 = 0.0;
        for _ in 0..trials {
            let f = sample::random_function(&self.phi.source, &mut rng).restrict_components(&mask);
            let deviation = match self.apply(&f) {
                Ok(g) => (g.fnorm().value() - f.fnorm().value()).abs(),
                Err(_) => f64::INFINITY,
            };
            max_deviation = max_deviation.max(deviation);
        }
        let pass = max_deviation < tolerance;
        let violated_theorem = (!pass).then(|| {
            let specific = self
                .check_measure_preservation()
                .and_then(|_| self.check_formula())
                .err()
                .and_then(|e| e.violated_property());
            specific.unwrap_or("norm-preservation").to_string()
        });
        VerificationReport {
            pass,
            max_deviation,
            trials,
            violated_theorem,
        }
    }

    pub fn verify(&self, trials: usize, seed: u64) -> VerificationReport {
        self.verify_with_tolerance(trials, seed, REL_TOL)
    }

    /// `U_e`: the restriction of `U` to functions supported in `e`, acting on
    /// the relativized algebra `e·∇₁` with values in the target, supported
    /// in `Φ(e)`.
    pub fn restrict(&self, e: &Event) -> Result<LogIsometry> {
        let rel = self.phi.source.relativize(e)?;
        let mask = self.phi.transportable_mask();
        if let Some(&(k, _, _)) = rel.pieces.iter().find(|p| !mask[p.0]) {
            return Err(Error::Unrepresentable(format!(
                "component {k} is matched symbolically"
            )));
        }
        let atom_images = rel
            .atom_indices
            .iter()
            .map(|&i| self.phi.atom_images[i].clone())
            .collect();
        let mut segments = Vec::new();
        for (new_k, &(k, a, len)) in rel.pieces.iter().enumerate() {
            for seg in self.phi.segments.iter().filter(|s| s.source == k) {
                let lo = a.max(seg.source_start);
                let hi = (a + len).min(seg.source_end());
                if hi - lo <= 0.0 {
                    continue;
                }
                let scale = seg.scale();
                segments.push(IntervalSegment {
                    source: new_k,
                    source_start: (lo - a) / len,
                    source_length: (hi - lo) / len,
                    target: seg.target,
                    target_start: seg.target_start + (lo - seg.source_start) * scale,
                    target_length: (hi - lo) * scale,
                });
            }
        }
        let phi = InducedHomomorphism::new(
            rel.space.clone(),
            self.phi.target.clone(),
            atom_images,
            segments,
            Vec::new(),
        )?;
        let range = LogFunction::indicator(self.phi.target.clone(), &phi.range)?;
        let multiplier = self.multiplier.mul(&range)?;
        LogIsometry::new(phi, multiplier)
    }

    /// `U⁻¹` for a surjective `U`.
    pub fn inverse(&self) -> Result<LogIsometry> {
        let psi = self.phi.inverse()?;
        let band_mask = self.phi.target_band_mask();
        let concrete: Vec<bool> = (0..band_mask.len())
            .map(|k| !band_mask[k] && self.phi.target.is_realized(k))
            .collect();
        let u = self.multiplier.restrict_components(&concrete);
        let full = LogFunction::indicator(
            self.phi.target.clone(),
            &self.phi.target.full_event(),
        )?
        .restrict_components(&concrete);
        // Φ(u') = 1/u on the range; the range is everything concrete here.
        let degenerate = full.sub(&u.map(f64::abs).map(|v| if v > POINT_TOL { 1.0 } else { 0.0 }))?;
        if degenerate.max_abs() > 0.0 {
            return Err(Error::NotSurjective("the multiplier vanishes on the range".into()));
        }
        let reciprocal = u.map(|v| if v == 0.0 { 0.0 } else { 1.0 / v });
        let multiplier = psi
            .transport(&reciprocal)?
            .add(&LogFunction::indicator(psi.target.clone(), &psi.band_event())?)?;
        LogIsometry::new(psi, multiplier)
    }

    /// `next ∘ self`: `f ↦ next(self(f))`.
    pub fn then(&self, next: &LogIsometry) -> Result<LogIsometry> {
        let phi = self.phi.then(&next.phi)?;
        let multiplier = next.multiplier.mul(&next.phi.transport(&self.multiplier)?)?;
        LogIsometry::new(phi, multiplier)
    }

    /// Matrix of `U` on atom-value vectors, for purely atomic spaces.
    pub fn matrix(&self) -> Result<LinearMapTable> {
        if !self.phi.source.is_atomic() || !self.phi.target.is_atomic() {
            return Err(Error::Unrepresentable(
                "only maps between purely atomic spaces have a finite matrix".into(),
            ));
        }
        let mut matrix = vec![vec![0.0; self.phi.source.atom_count()]; self.phi.target.atom_count()];
        for (i, image) in self.phi.atom_images.iter().enumerate() {
            for &j in image {
                matrix[j][i] = self.multiplier.atom_values()[j];
            }
        }
        LinearMapTable::new(self.phi.source.clone(), self.phi.target.clone(), matrix)
    }
}

/// An arbitrary linear map between purely atomic spaces, as a
/// target-atom × source-atom matrix.
#[derive(Debug, Clone)]
pub struct LinearMapTable {
    source: Arc<MeasureAlgebra>,
    target: Arc<MeasureAlgebra>,
    matrix: Vec<Vec<f64>>,
}

impl LinearMapTable {
    pub fn new(
        source: Arc<MeasureAlgebra>,
        target: Arc<MeasureAlgebra>,
        matrix: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if !source.is_atomic() || !target.is_atomic() {
            return Err(Error::StructureMismatch(
                "linear map tables need purely atomic spaces".into(),
            ));
        }
        if matrix.len() != target.atom_count()
            || matrix.iter().any(|row| row.len() != source.atom_count())
        {
            return Err(Error::StructureMismatch(format!(
                "matrix must be {} × {}",
                target.atom_count(),
                source.atom_count()
            )));
        }
        if matrix.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Parse("matrix entries must be finite".into()));
        }
        Ok(LinearMapTable {
            source,
            target,
            matrix,
        })
    }

    pub fn source(&self) -> &Arc<MeasureAlgebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<MeasureAlgebra> {
        &self.target
    }

    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.matrix
    }

    pub fn apply(&self, f: &LogFunction) -> Result<LogFunction> {
        if !same_space(f.space(), &self.source) {
            return Err(Error::SpaceMismatch);
        }
        let values = self
            .matrix
            .iter()
            .map(|row| row.iter().zip(f.atom_values()).map(|(a, v)| a * v).sum())
            .collect();
        LogFunction::on_atoms(self.target.clone(), values)
    }
}

/// Recovers `U = u·Φ` from the matrix of a linear map between atomic spaces,
/// validating every structural constraint an isometry must satisfy.
///
/// Checks run in order: every column is nonzero and the column supports are
/// pairwise disjoint; `Φ` preserves measure; the multiplier modulus obeys
/// `|u| = -1 + 2·dλ/dμ₂`.
pub fn decompose(table: &LinearMapTable) -> Result<LogIsometry> {
    let n_src = table.source.atom_count();
    let n_tgt = table.target.atom_count();
    let mut owner: Vec<Option<usize>> = vec![None; n_tgt];
    let mut images = Vec::with_capacity(n_src);
    for i in 0..n_src {
        let support: Vec<usize> = (0..n_tgt)
            .filter(|&j| table.matrix[j][i].abs() > POINT_TOL)
            .collect();
        if support.is_empty() {
            return Err(Error::DegenerateColumn { column: i });
        }
        for &j in &support {
            if let Some(first) = owner[j] {
                return Err(Error::DisjointnessViolation {
                    first,
                    second: i,
                    shared: j,
                });
            }
            owner[j] = Some(i);
        }
        images.push(support);
    }
    let mut multiplier = vec![0.0; n_tgt];
    for (i, image) in images.iter().enumerate() {
        for &j in image {
            multiplier[j] = table.matrix[j][i];
        }
    }
    let phi = InducedHomomorphism::new(
        table.source.clone(),
        table.target.clone(),
        images,
        Vec::new(),
        Vec::new(),
    )?;
    if let Some(defect) = phi.measure_defect() {
        return Err(defect);
    }
    let multiplier = LogFunction::on_atoms(table.target.clone(), multiplier)?;
    let iso = LogIsometry::new(phi, multiplier)?;
    iso.check_formula()?;
    Ok(iso)
}

/// Whether `Φ` maps `L_log(μ₁)` onto `L_log(μ₂)`: the map must be
/// surjective and both `dλ/dμ₂` and its reciprocal bounded on the range.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OntoCertificate {
    pub onto: bool,
    pub surjective: bool,
    pub sup: f64,
    pub inf: f64,
}

pub fn onto_range_check(
    phi: &InducedHomomorphism,
    mu1: &Arc<MeasureAlgebra>,
    mu2: &Arc<MeasureAlgebra>,
) -> Result<OntoCertificate> {
    let phi = phi.with_spaces(mu1.clone(), mu2.clone())?;
    let density = phi.lambda_density();
    let (mut inf, mut sup) = density
        .range_over(phi.range.atom_mask(), phi.range.intervals())
        .unwrap_or((f64::INFINITY, f64::NEG_INFINITY));
    for band in &phi.bands {
        let (src, dst) = phi.band_measures(band);
        inf = inf.min(src / dst);
        sup = sup.max(src / dst);
    }
    let surjective = phi.check_surjective().is_ok();
    let bounded = sup.is_finite() && inf > 0.0 && inf <= sup;
    Ok(OntoCertificate {
        onto: surjective && bounded,
        surjective,
        sup,
        inf,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atomic(weights: &[f64]) -> Arc<MeasureAlgebra> {
        Arc::new(MeasureAlgebra::atomic(weights).unwrap())
    }

    fn swap_iso(space: &Arc<MeasureAlgebra>) -> MeasurePreservingIso {
        MeasurePreservingIso::from_parts(space.clone(), space.clone(), &[1, 0], vec![], vec![])
            .unwrap()
    }

    #[test]
    fn identity_isometry() {
        let s = Arc::new(MeasureAlgebra::with_lebesgue(&[0.3, 0.7], &[1.5]).unwrap());
        let u = LogIsometry::from_measure_preserving(&MeasurePreservingIso::identity(s.clone()));
        assert!(u.multiplier().max_abs_diff(&LogFunction::constant(s.clone(), 1.0)).unwrap() == 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = sample::random_function(&s, &mut rng);
        assert!(u.apply(&f).unwrap().max_abs_diff(&f).unwrap() < 1e-15);
        assert!(u.verify(50, 3).max_deviation < 1e-12);
    }

    #[test]
    fn weight_mismatch_is_rejected() {
        let a = atomic(&[0.3, 0.7]);
        let b = atomic(&[0.7, 0.3]);
        assert!(matches!(
            MeasurePreservingIso::from_parts(a.clone(), b.clone(), &[0, 1], vec![], vec![]),
            Err(Error::NotMeasurePreserving(_))
        ));
        let iso = MeasurePreservingIso::from_parts(a, b, &[1, 0], vec![], vec![]).unwrap();
        assert!(LogIsometry::from_measure_preserving(&iso).verify(100, 9).pass);
    }

    #[test]
    fn signed_swap_apply_and_inverse() {
        let s = atomic(&[0.5, 0.5]);
        let iso = swap_iso(&s);
        // Signs are attached per source atom; source atom 1 lands on target
        // atom 0, so the target multiplier reads (-1, 1).
        let u = LogIsometry::with_signs(&iso, &[1.0, -1.0]).unwrap();
        assert_eq!(u.multiplier().atom_values(), &[-1.0, 1.0]);
        let f = LogFunction::on_atoms(s.clone(), vec![2.0, 5.0]).unwrap();
        assert_eq!(u.apply(&f).unwrap().atom_values(), &[-5.0, 2.0]);

        let inv = u.inverse().unwrap();
        assert_eq!(inv.multiplier().atom_values(), &[1.0, -1.0]);
        let back = inv.apply(&u.apply(&f).unwrap()).unwrap();
        assert_eq!(back.atom_values(), f.atom_values());
    }

    #[test]
    fn tampered_multiplier_fails_verification() {
        let s = atomic(&[0.5, 0.5]);
        let u = LogIsometry::from_measure_preserving(&swap_iso(&s));
        let tampered = LogFunction::on_atoms(s.clone(), vec![2.0, 1.0]).unwrap();
        let bad = LogIsometry::new(u.homomorphism().clone(), tampered).unwrap();
        let report = bad.verify(50, 1);
        assert!(!report.pass);
        assert!(report.max_deviation > 0.0);
        assert_eq!(report.violated_theorem.as_deref(), Some("modulus-formula"));
    }

    #[test]
    fn rescaled_source_fails_verification() {
        let s = Arc::new(MeasureAlgebra::with_lebesgue(&[0.4], &[0.6]).unwrap());
        let doubled = Arc::new(s.scaled(2.0).unwrap());
        let phi = InducedHomomorphism::identity_between(doubled, s.clone()).unwrap();
        let u = LogIsometry::new(phi, LogFunction::constant(s, 1.0)).unwrap();
        let report = u.verify(50, 2);
        assert!(!report.pass);
        assert_eq!(report.violated_theorem.as_deref(), Some("measure-preservation"));
    }

    #[test]
    fn decompose_examples() {
        let s = atomic(&[0.5, 0.5]);
        let rot = LinearMapTable::new(s.clone(), s.clone(), vec![vec![0.0, -1.0], vec![1.0, 0.0]])
            .unwrap();
        let u = decompose(&rot).unwrap();
        assert_eq!(u.homomorphism().atom_images(), &[vec![1], vec![0]]);
        assert_eq!(u.multiplier().atom_values(), &[-1.0, 1.0]);
        assert!(u.verify(100, 4).pass);

        let avg = LinearMapTable::new(s.clone(), s.clone(), vec![vec![0.5, 0.5], vec![0.5, 0.5]])
            .unwrap();
        assert!(matches!(decompose(&avg), Err(Error::DisjointnessViolation { .. })));

        let t = atomic(&[0.25, 0.75]);
        let id = LinearMapTable::new(s.clone(), t, vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        match decompose(&id) {
            Err(Error::MeasureMismatch { atom, source_measure, image_measure }) => {
                assert_eq!(atom, 0);
                assert_eq!(source_measure, 0.5);
                assert_eq!(image_measure, 0.25);
            }
            other => panic!("expected MeasureMismatch, got {other:?}"),
        }

        let zero = LinearMapTable::new(s.clone(), s.clone(), vec![vec![1.0, 0.0], vec![0.0, 0.0]])
            .unwrap();
        assert_eq!(decompose(&zero).unwrap_err(), Error::DegenerateColumn { column: 1 });

        let stretch = LinearMapTable::new(s.clone(), s.clone(), vec![vec![2.0, 0.0], vec![0.0, 1.0]])
            .unwrap();
        assert!(matches!(decompose(&stretch), Err(Error::FormulaViolation { .. })));
    }

    #[test]
    fn decompose_accepts_split_atoms() {
        // f ↦ (f, f) from one atom of mass 1 onto two atoms of mass 1/2.
        let src = atomic(&[1.0]);
        let dst = atomic(&[0.5, 0.5]);
        let table = LinearMapTable::new(src, dst, vec![vec![1.0], vec![-1.0]]).unwrap();
        let u = decompose(&table).unwrap();
        assert_eq!(u.homomorphism().atom_images(), &[vec![0, 1]]);
        assert!(u.verify(100, 5).pass);
        assert!(u.inverse().is_err());
    }

    #[test]
    fn restrict_examples() {
        let s = atomic(&[0.5, 0.5]);
        let u = LogIsometry::with_signs(&swap_iso(&s), &[-1.0, 1.0]).unwrap();
        let full = u.restrict(&s.full_event()).unwrap();
        assert_eq!(**full.source(), *s);
        assert_eq!(full.homomorphism().atom_images(), u.homomorphism().atom_images());
        assert_eq!(full.multiplier().atom_values(), u.multiplier().atom_values());

        let one = u.restrict(&s.atom_event(&[0]).unwrap()).unwrap();
        assert_eq!(one.source().atom_count(), 1);
        assert_eq!(one.source().atom_weight(0), 0.5);
        assert_eq!(one.homomorphism().atom_images(), &[vec![1]]);
        assert_eq!(one.multiplier().atom_values(), &[0.0, -1.0]);
        assert!(one.verify(50, 6).pass);
    }

    #[test]
    fn restrict_on_intervals() {
        let s = Arc::new(MeasureAlgebra::with_lebesgue(&[1.0], &[2.0]).unwrap());
        let moves = vec![
            Translation { from: 0.0, to: 0.7, length: 0.3 },
            Translation { from: 0.3, to: 0.0, length: 0.7 },
        ];
        let iso =
            MeasurePreservingIso::from_translations(s.clone(), s.clone(), &[0], &[0], &[moves])
                .unwrap();
        let u = LogIsometry::from_measure_preserving(&iso);
        let e = Event::from_raw(&s, &[], vec![vec![(0.1, 0.5)]]).unwrap();
        let ue = u.restrict(&e).unwrap();
        assert!(ue.verify(100, 7).pass);
        assert!(ue.range().approx_eq(&u.homomorphism().map_event(&e).unwrap(), 1e-12));

        let rel = s.relativize(&e).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let f = sample::random_function(&rel.space, &mut rng);
        let direct = u.apply(&rel.embed(&f, s.clone()).unwrap()).unwrap();
        assert!(ue.apply(&f).unwrap().max_abs_diff(&direct).unwrap() < 1e-12);
    }

    #[test]
    fn onto_range_examples() {
        let s = atomic(&[0.5, 0.5]);
        let iso = swap_iso(&s);
        let cert = onto_range_check(iso.homomorphism(), &s, &s).unwrap();
        assert_eq!(cert, OntoCertificate { onto: true, surjective: true, sup: 1.0, inf: 1.0 });

        let doubled = Arc::new(s.scaled(2.0).unwrap());
        let cert = onto_range_check(iso.homomorphism(), &doubled, &s).unwrap();
        assert!(cert.onto);
        assert_eq!((cert.sup, cert.inf), (2.0, 2.0));

        let small = atomic(&[0.5]);
        let phi = InducedHomomorphism::new(small.clone(), s.clone(), vec![vec![1]], vec![], vec![])
            .unwrap();
        let cert = onto_range_check(&phi, &small, &s).unwrap();
        assert!(!cert.onto);
        assert!(!cert.surjective);
    }

    #[test]
    fn lay_out_splits_components() {
        let src = Arc::new(MeasureAlgebra::with_lebesgue(&[], &[1.0]).unwrap());
        let dst = Arc::new(MeasureAlgebra::with_lebesgue(&[], &[0.4, 0.6]).unwrap());
        let segs = lay_out_segments(&src, &[(0, 0.0, 1.0)], &dst, &[(0, 0.0, 1.0), (1, 0.0, 1.0)]);
        assert_eq!(segs.len(), 2);
        let iso = MeasurePreservingIso::from_parts(src, dst, &[], segs, vec![]).unwrap();
        let u = LogIsometry::from_measure_preserving(&iso);
        assert!(u.verify(100, 10).pass);
        assert!(u.formula_residual() < 1e-12);
        assert!(u.inverse().unwrap().verify(100, 11).pass);
    }

    #[test]
    fn composition_preserves_norms() {
        let s = atomic(&[0.5, 0.5]);
        let u = LogIsometry::with_signs(&swap_iso(&s), &[-1.0, 1.0]).unwrap();
        let uu = u.then(&u).unwrap();
        assert_eq!(uu.homomorphism().atom_images(), &[vec![0], vec![1]]);
        assert_eq!(uu.multiplier().atom_values(), &[-1.0, -1.0]);
        assert!(uu.verify(50, 12).pass);
    }
}
