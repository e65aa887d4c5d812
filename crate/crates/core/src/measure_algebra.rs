//! Finitely-presented Boolean measure algebras.
//!
//! A [`MeasureAlgebra`] is a direct product of weighted atoms and homogeneous
//! non-atomic components. Only components of weight `aleph_0` can be
//! realized; a realized component is the unit interval `[0, 1)` carrying the
//! constant density equal to its total measure. Events and functions live on
//! atoms and realized components only, so the representable part of the
//! algebra is the product of the atoms with the realized intervals.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{IntervalSet, StepFunction};

/// A cardinal label `aleph_k` for the weight of a homogeneous component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeightLabel(pub u32);

impl WeightLabel {
    pub const ALEPH_0: WeightLabel = WeightLabel(0);

    pub fn index(self) -> u32 {
        self.0
    }
}

impl fmt::Display for WeightLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "aleph_{}", self.0)
    }
}

impl FromStr for WeightLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.strip_prefix("aleph_")
            .and_then(|k| k.parse::<u32>().ok())
            .map(WeightLabel)
            .ok_or_else(|| Error::InvalidLabel(s.to_string()))
    }
}

impl Serialize for WeightLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for WeightLabel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn check_measure(value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidMeasure { value })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    weight: f64,
}

impl Atom {
    pub fn new(weight: f64) -> Result<Self> {
        Ok(Atom {
            weight: check_measure(weight)?,
        })
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomogeneousComponent {
    label: WeightLabel,
    measure: f64,
    realized: bool,
}

impl HomogeneousComponent {
    pub fn new(label: WeightLabel, measure: f64, realized: bool) -> Result<Self> {
        if realized && label != WeightLabel::ALEPH_0 {
            return Err(Error::RealizedHigherWeight(label.to_string()));
        }
        Ok(HomogeneousComponent {
            label,
            measure: check_measure(measure)?,
            realized,
        })
    }

    /// A realized Lebesgue component of the given total measure.
    pub fn lebesgue(measure: f64) -> Result<Self> {
        Self::new(WeightLabel::ALEPH_0, measure, true)
    }

    pub fn label(&self) -> WeightLabel {
        self.label
    }

    pub fn measure(&self) -> f64 {
        self.measure
    }

    pub fn is_realized(&self) -> bool {
        self.realized
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MeasureAlgebra {
    atoms: Vec<Atom>,
    components: Vec<HomogeneousComponent>,
}

impl MeasureAlgebra {
    pub fn new(atoms: Vec<Atom>, components: Vec<HomogeneousComponent>) -> Self {
        MeasureAlgebra { atoms, components }
    }

    /// Purely atomic algebra with the given weights.
    pub fn atomic(weights: &[f64]) -> Result<Self> {
        let atoms = weights.iter().map(|&w| Atom::new(w)).collect::<Result<_>>()?;
        Ok(MeasureAlgebra::new(atoms, Vec::new()))
    }

    /// Atoms plus realized Lebesgue components.
    pub fn with_lebesgue(weights: &[f64], measures: &[f64]) -> Result<Self> {
        let atoms = weights.iter().map(|&w| Atom::new(w)).collect::<Result<_>>()?;
        let components = measures
            .iter()
            .map(|&m| HomogeneousComponent::lebesgue(m))
            .collect::<Result<_>>()?;
        Ok(MeasureAlgebra::new(atoms, components))
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn components(&self) -> &[HomogeneousComponent] {
        &self.components
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn atom_weight(&self, i: usize) -> f64 {
        self.atoms[i].weight
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty() && self.components.is_empty()
    }

    pub fn is_atomic(&self) -> bool {
        self.components.is_empty()
    }

    pub fn is_realized(&self, component: usize) -> bool {
        self.components[component].realized
    }

    pub fn total_measure(&self) -> Result<f64> {
        if self.is_empty() {
            return Err(Error::EmptyAlgebra);
        }
        Ok(self.atoms.iter().map(|a| a.weight).sum::<f64>()
            + self.components.iter().map(|c| c.measure).sum::<f64>())
    }

    /// Same atom count and the same component labels and realization flags;
    /// measures may differ.
    pub fn same_structure(&self, other: &MeasureAlgebra) -> bool {
        self.atoms.len() == other.atoms.len()
            && self.components.len() == other.components.len()
            && self
                .components
                .iter()
                .zip(&other.components)
                .all(|(a, b)| a.label == b.label && a.realized == b.realized)
    }

    /// Copy of the algebra with every measure multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let atoms = self
            .atoms
            .iter()
            .map(|a| Atom::new(a.weight * factor))
            .collect::<Result<_>>()?;
        let components = self
            .components
            .iter()
            .map(|c| HomogeneousComponent::new(c.label, c.measure * factor, c.realized))
            .collect::<Result<_>>()?;
        Ok(MeasureAlgebra::new(atoms, components))
    }

    /// Atom indices sorted by descending weight, ties broken by index.
    pub fn canonical_atom_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.atoms.len()).collect();
        order.sort_by(|&i, &j| self.atoms[j].weight.total_cmp(&self.atoms[i].weight));
        order
    }

    pub fn empty_event(&self) -> Event {
        Event {
            atoms: vec![false; self.atoms.len()],
            intervals: vec![IntervalSet::empty(); self.components.len()],
        }
    }

    /// The unit of the representable part: every atom and every realized
    /// interval.
    pub fn full_event(&self) -> Event {
        Event {
            atoms: vec![true; self.atoms.len()],
            intervals: self
                .components
                .iter()
                .map(|c| {
                    if c.realized {
                        IntervalSet::full()
                    } else {
                        IntervalSet::empty()
                    }
                })
                .collect(),
        }
    }

    /// Event holding the listed atoms and nothing on the components.
    pub fn atom_event(&self, atoms: &[usize]) -> Result<Event> {
        Event::new(self, atoms, Vec::new())
    }

    pub fn check_event(&self, e: &Event) -> Result<()> {
        if e.atoms.len() != self.atoms.len() || e.intervals.len() != self.components.len() {
            return Err(Error::MalformedEvent(format!(
                "event shape ({} atoms, {} components) does not match space ({}, {})",
                e.atoms.len(),
                e.intervals.len(),
                self.atoms.len(),
                self.components.len()
            )));
        }
        for (k, set) in e.intervals.iter().enumerate() {
            if !self.components[k].realized && !set.is_empty() {
                return Err(Error::MalformedEvent(format!(
                    "component {k} is not realized and carries no concrete events"
                )));
            }
        }
        Ok(())
    }

    pub fn measure(&self, e: &Event) -> Result<f64> {
        self.check_event(e)?;
        let atoms: f64 = e
            .atoms
            .iter()
            .zip(&self.atoms)
            .filter(|(inside, _)| **inside)
            .map(|(_, a)| a.weight)
            .sum();
        let parts: f64 = e
            .intervals
            .iter()
            .zip(&self.components)
            .map(|(set, c)| c.measure * set.length())
            .sum();
        Ok(atoms + parts)
    }

    pub fn meet(&self, e: &Event, q: &Event) -> Result<Event> {
        self.check_event(e)?;
        self.check_event(q)?;
        Ok(Event {
            atoms: e.atoms.iter().zip(&q.atoms).map(|(a, b)| *a && *b).collect(),
            intervals: e
                .intervals
                .iter()
                .zip(&q.intervals)
                .map(|(a, b)| a.intersection(b))
                .collect(),
        })
    }

    pub fn join(&self, e: &Event, q: &Event) -> Result<Event> {
        self.check_event(e)?;
        self.check_event(q)?;
        Ok(Event {
            atoms: e.atoms.iter().zip(&q.atoms).map(|(a, b)| *a || *b).collect(),
            intervals: e
                .intervals
                .iter()
                .zip(&q.intervals)
                .map(|(a, b)| a.union(b))
                .collect(),
        })
    }

    /// Complement relative to [`MeasureAlgebra::full_event`].
    pub fn complement(&self, e: &Event) -> Result<Event> {
        self.check_event(e)?;
        Ok(Event {
            atoms: e.atoms.iter().map(|a| !a).collect(),
            intervals: e
                .intervals
                .iter()
                .zip(&self.components)
                .map(|(set, c)| {
                    if c.realized {
                        set.complement()
                    } else {
                        IntervalSet::empty()
                    }
                })
                .collect(),
        })
    }

    pub fn passport(&self) -> Result<Passport> {
        if self.is_empty() {
            return Err(Error::EmptyAlgebra);
        }
        let mut rows: Vec<PassportRow> = Vec::new();
        let mut comps: Vec<&HomogeneousComponent> = self.components.iter().collect();
        comps.sort_by_key(|c| c.label);
        for c in comps {
            match rows.last_mut() {
                Some(row) if row.label == c.label => row.alpha += c.measure,
                _ => rows.push(PassportRow {
                    label: c.label,
                    alpha: c.measure,
                }),
            }
        }
        let atom_weights = self
            .canonical_atom_order()
            .into_iter()
            .map(|i| self.atoms[i].weight)
            .collect();
        Ok(Passport { rows, atom_weights })
    }

    /// The relativized algebra `e·∇`: the atoms of `e` plus one realized
    /// component per interval part of `e`, rescaled to the unit interval.
    pub fn relativize(&self, e: &Event) -> Result<Relativized> {
        self.check_event(e)?;
        let atom_indices: Vec<usize> = (0..self.atoms.len()).filter(|&i| e.atoms[i]).collect();
        let mut pieces = Vec::new();
        for (k, set) in e.intervals.iter().enumerate() {
            for &(a, b) in set.parts() {
                pieces.push((k, a, b - a));
            }
        }
        let atoms = atom_indices.iter().map(|&i| self.atoms[i]).collect();
        let components = pieces
            .iter()
            .map(|&(k, _, len)| HomogeneousComponent::lebesgue(self.components[k].measure * len))
            .collect::<Result<_>>()?;
        Ok(Relativized {
            space: Arc::new(MeasureAlgebra::new(atoms, components)),
            atom_indices,
            pieces,
        })
    }
}

/// An element of the representable part of a measure algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct Event {
    atoms: Vec<bool>,
    intervals: Vec<IntervalSet>,
}

impl Event {
    /// Builds an event from atom indices and per-component interval sets.
    ///
    /// `intervals` may be shorter than the component list; missing entries
    /// are empty.
    pub fn new(space: &MeasureAlgebra, atoms: &[usize], intervals: Vec<IntervalSet>) -> Result<Self> {
        let mut mask = vec![false; space.atom_count()];
        for &i in atoms {
            if i >= mask.len() {
                return Err(Error::MalformedEvent(format!("atom index {i} out of range")));
            }
            mask[i] = true;
        }
        if intervals.len() > space.component_count() {
            return Err(Error::MalformedEvent(format!(
                "{} interval parts for {} components",
                intervals.len(),
                space.component_count()
            )));
        }
        let mut intervals = intervals;
        intervals.resize(space.component_count(), IntervalSet::empty());
        let e = Event {
            atoms: mask,
            intervals,
        };
        space.check_event(&e)?;
        Ok(e)
    }

    /// Builds an event from raw interval endpoints, rejecting overlaps.
    pub fn from_raw(
        space: &MeasureAlgebra,
        atoms: &[usize],
        intervals: Vec<Vec<(f64, f64)>>,
    ) -> Result<Self> {
        let sets = intervals
            .into_iter()
            .map(|parts| IntervalSet::new(parts).map_err(Error::MalformedEvent))
            .collect::<Result<_>>()?;
        Event::new(space, atoms, sets)
    }

    pub(crate) fn from_parts(atoms: Vec<bool>, intervals: Vec<IntervalSet>) -> Self {
        Event { atoms, intervals }
    }

    pub fn atom_mask(&self) -> &[bool] {
        &self.atoms
    }

    pub fn atom_indices(&self) -> Vec<usize> {
        (0..self.atoms.len()).filter(|&i| self.atoms[i]).collect()
    }

    pub fn contains_atom(&self, i: usize) -> bool {
        self.atoms[i]
    }

    pub fn intervals(&self) -> &[IntervalSet] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        !self.atoms.iter().any(|&a| a) && self.intervals.iter().all(|s| s.is_empty())
    }

    /// Equality with interval endpoints compared up to `tol` in symmetric
    /// difference length.
    pub fn approx_eq(&self, other: &Event, tol: f64) -> bool {
        self.atoms == other.atoms
            && self.intervals.len() == other.intervals.len()
            && self
                .intervals
                .iter()
                .zip(&other.intervals)
                .all(|(a, b)| a.approx_eq(b, tol))
    }
}

/// A density against a reference measure on the same structure.
///
/// Values are per atom and, per component, a step function on the unit
/// interval (constant on non-realized components).
#[derive(Debug, Clone, PartialEq)]
pub struct Density {
    atom_ratios: Vec<f64>,
    component_ratios: Vec<StepFunction>,
}

impl Density {
    pub(crate) fn new(atom_ratios: Vec<f64>, component_ratios: Vec<StepFunction>) -> Self {
        Density {
            atom_ratios,
            component_ratios,
        }
    }

    pub fn atom_ratios(&self) -> &[f64] {
        &self.atom_ratios
    }

    pub fn component_ratios(&self) -> &[StepFunction] {
        &self.component_ratios
    }

    /// Extreme values over the atoms and components whose masks are set.
    pub(crate) fn range_over(&self, atoms: &[bool], comps: &[IntervalSet]) -> Option<(f64, f64)> {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (v, &inside) in self.atom_ratios.iter().zip(atoms) {
            if inside {
                lo = lo.min(*v);
                hi = hi.max(*v);
            }
        }
        for (f, set) in self.component_ratios.iter().zip(comps) {
            for (a, b, v) in f.pieces() {
                let piece = IntervalSet::normalized(vec![(a, b)]);
                if !piece.intersection(set).is_empty() {
                    lo = lo.min(v);
                    hi = hi.max(v);
                }
            }
        }
        (lo <= hi).then_some((lo, hi))
    }
}

/// `dν/dμ` for two measures on the same structure.
pub fn radon_nikodym(nu: &MeasureAlgebra, mu: &MeasureAlgebra) -> Result<Density> {
    if !nu.same_structure(mu) {
        return Err(Error::StructureMismatch(
            "densities need the same atoms and components".into(),
        ));
    }
    if mu.is_empty() {
        return Err(Error::EmptyAlgebra);
    }
    let ratio = |n: f64, m: f64, what: String| {
        if n <= 0.0 || m <= 0.0 {
            Err(Error::ZeroMeasure(what))
        } else {
            Ok(n / m)
        }
    };
    let atom_ratios = nu
        .atoms
        .iter()
        .zip(&mu.atoms)
        .enumerate()
        .map(|(i, (n, m))| ratio(n.weight, m.weight, format!("atom {i}")))
        .collect::<Result<_>>()?;
    let component_ratios = nu
        .components
        .iter()
        .zip(&mu.components)
        .enumerate()
        .map(|(k, (n, m))| {
            ratio(n.measure, m.measure, format!("component {k}")).map(StepFunction::constant)
        })
        .collect::<Result<_>>()?;
    Ok(Density {
        atom_ratios,
        component_ratios,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PassportRow {
    #[serde(rename = "weight_label")]
    pub label: WeightLabel,
    pub alpha: f64,
}

/// Isomorphism invariant: `(τ_n, α_n)` rows of the non-atomic part with
/// strictly increasing labels, plus the atom weights sorted descending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Passport {
    pub rows: Vec<PassportRow>,
    pub atom_weights: Vec<f64>,
}

/// The algebra `e·∇` with the bookkeeping needed to move functions back into
/// the parent algebra.
#[derive(Debug, Clone)]
pub struct Relativized {
    pub space: Arc<MeasureAlgebra>,
    /// Parent index of each atom of `space`.
    pub atom_indices: Vec<usize>,
    /// Parent `(component, start, length)` of each component of `space`.
    pub pieces: Vec<(usize, f64, f64)>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lebesgue_label(k: u32, m: f64) -> HomogeneousComponent {
        HomogeneousComponent::new(WeightLabel(k), m, k == 0).unwrap()
    }

    #[test]
    fn total_measure_examples() {
        assert_eq!(MeasureAlgebra::atomic(&[1.0]).unwrap().total_measure().unwrap(), 1.0);
        let s = MeasureAlgebra::with_lebesgue(&[0.5, 0.5], &[1.0]).unwrap();
        assert_eq!(s.total_measure().unwrap(), 2.0);
        let s = MeasureAlgebra::with_lebesgue(&[], &[1.0]).unwrap();
        assert_eq!(s.total_measure().unwrap(), 1.0);
        assert_eq!(MeasureAlgebra::default().total_measure(), Err(Error::EmptyAlgebra));
    }

    #[test]
    fn strict_positivity() {
        assert!(Atom::new(0.0).is_err());
        assert!(Atom::new(-1.0).is_err());
        assert!(Atom::new(f64::NAN).is_err());
        assert!(Atom::new(f64::INFINITY).is_err());
        assert!(HomogeneousComponent::lebesgue(0.0).is_err());
        assert!(matches!(
            HomogeneousComponent::new(WeightLabel(1), 1.0, true),
            Err(Error::RealizedHigherWeight(_))
        ));
    }

    #[test]
    fn label_parsing() {
        assert_eq!("aleph_3".parse::<WeightLabel>().unwrap(), WeightLabel(3));
        assert!("aleph".parse::<WeightLabel>().is_err());
        assert!("beth_1".parse::<WeightLabel>().is_err());
        assert!(WeightLabel(0) < WeightLabel(2));
        assert_eq!(WeightLabel(2).to_string(), "aleph_2");
    }

    #[test]
    fn measure_examples() {
        let s = MeasureAlgebra::atomic(&[0.3, 0.7]).unwrap();
        assert!((s.measure(&s.full_event()).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(s.measure(&s.atom_event(&[1]).unwrap()).unwrap(), 0.7);

        let s = MeasureAlgebra::with_lebesgue(&[], &[2.0]).unwrap();
        let e = Event::from_raw(&s, &[], vec![vec![(0.0, 0.25)]]).unwrap();
        let m = s.measure(&e).unwrap();
        assert!((m - 0.5).abs() < 1e-15);
        // Refinement cross-check: four disjoint pieces of [0, 0.25).
        let refined: f64 = (0..4)
            .map(|i| {
                let a = i as f64 / 16.0;
                let piece = Event::from_raw(&s, &[], vec![vec![(a, a + 1.0 / 16.0)]]).unwrap();
                s.measure(&piece).unwrap()
            })
            .sum();
        assert!((refined - m).abs() < 1e-15);
    }

    #[test]
    fn malformed_events() {
        let s = MeasureAlgebra::with_lebesgue(&[0.5], &[1.0]).unwrap();
        assert!(matches!(s.atom_event(&[3]), Err(Error::MalformedEvent(_))));
        assert!(matches!(
            Event::from_raw(&s, &[], vec![vec![(0.0, 0.5), (0.25, 0.75)]]),
            Err(Error::MalformedEvent(_))
        ));
        let symbolic = MeasureAlgebra::new(vec![], vec![lebesgue_label(1, 1.0)]);
        assert!(matches!(
            Event::from_raw(&symbolic, &[], vec![vec![(0.0, 0.5)]]),
            Err(Error::MalformedEvent(_))
        ));
        let other = MeasureAlgebra::atomic(&[1.0, 1.0]).unwrap();
        assert!(s.measure(&other.full_event()).is_err());
    }

    #[test]
    fn boolean_laws() {
        let s = MeasureAlgebra::with_lebesgue(&[0.3, 0.7], &[1.0]).unwrap();
        let full = s.full_event();
        assert!(s.complement(&full).unwrap().is_empty());
        let e = Event::from_raw(&s, &[0], vec![vec![(0.2, 0.6)]]).unwrap();
        let ce = s.complement(&e).unwrap();
        assert!(s.meet(&e, &ce).unwrap().is_empty());
        assert!(s.join(&e, &ce).unwrap().approx_eq(&full, 1e-12));
    }

    #[test]
    fn additivity_over_all_disjoint_atom_pairs() {
        // Enumerate every ordered pair of disjoint subsets of three atoms.
        let s = MeasureAlgebra::atomic(&[0.3, 0.7, 1.1]).unwrap();
        for a in 0u32..8 {
            for b in 0u32..8 {
                if a & b != 0 {
                    continue;
                }
                let idx = |m: u32| (0..3).filter(|i| m >> i & 1 == 1).collect::<Vec<usize>>();
                let e = s.atom_event(&idx(a)).unwrap();
                let q = s.atom_event(&idx(b)).unwrap();
                let j = s.join(&e, &q).unwrap();
                let lhs = s.measure(&j).unwrap();
                let rhs = s.measure(&e).unwrap() + s.measure(&q).unwrap();
                assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1.0));
            }
        }
    }

    #[test]
    fn radon_nikodym_examples() {
        let mu = MeasureAlgebra::atomic(&[0.5, 0.5]).unwrap();
        let nu = MeasureAlgebra::atomic(&[0.25, 0.75]).unwrap();
        let d = radon_nikodym(&nu, &mu).unwrap();
        assert_eq!(d.atom_ratios(), &[0.5, 1.5]);
        for i in 0..2 {
            assert!((nu.atom_weight(i) - d.atom_ratios()[i] * mu.atom_weight(i)).abs() < 1e-15);
        }

        let mu = MeasureAlgebra::with_lebesgue(&[0.2, 0.3], &[1.5]).unwrap();
        let nu = mu.scaled(2.0).unwrap();
        let d = radon_nikodym(&nu, &mu).unwrap();
        assert!(d.atom_ratios().iter().all(|&r| r == 2.0));
        assert!(d.component_ratios().iter().all(|f| f.values() == [2.0]));

        let d = radon_nikodym(&mu, &mu).unwrap();
        assert!(d.atom_ratios().iter().all(|&r| r == 1.0));

        let bad = MeasureAlgebra::atomic(&[1.0]).unwrap();
        assert!(matches!(radon_nikodym(&bad, &mu), Err(Error::StructureMismatch(_))));
    }

    #[test]
    fn passport_examples() {
        let s = MeasureAlgebra::with_lebesgue(&[], &[1.0]).unwrap();
        let p = s.passport().unwrap();
        assert_eq!(p.rows, vec![PassportRow { label: WeightLabel(0), alpha: 1.0 }]);
        assert!(p.atom_weights.is_empty());

        let s = MeasureAlgebra::new(
            vec![],
            vec![lebesgue_label(0, 0.4), lebesgue_label(0, 0.6), lebesgue_label(1, 1.0)],
        );
        let p = s.passport().unwrap();
        assert_eq!(p.rows.len(), 2);
        assert_eq!(p.rows[0].label, WeightLabel(0));
        assert!((p.rows[0].alpha - 1.0).abs() < 1e-15);
        assert_eq!(p.rows[1], PassportRow { label: WeightLabel(1), alpha: 1.0 });

        let s = MeasureAlgebra::atomic(&[0.2, 0.8]).unwrap();
        let p = s.passport().unwrap();
        assert!(p.rows.is_empty());
        assert_eq!(p.atom_weights, vec![0.8, 0.2]);
    }

    #[test]
    fn relativize_rescales_pieces() {
        let s = MeasureAlgebra::with_lebesgue(&[0.3, 0.7], &[2.0]).unwrap();
        let e = Event::from_raw(&s, &[1], vec![vec![(0.0, 0.25), (0.5, 1.0)]]).unwrap();
        let r = s.relativize(&e).unwrap();
        assert_eq!(r.atom_indices, vec![1]);
        assert_eq!(r.space.component_count(), 2);
        assert!((r.space.total_measure().unwrap() - s.measure(&e).unwrap()).abs() < 1e-15);
    }
}
