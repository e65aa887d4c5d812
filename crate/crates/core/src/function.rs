//! Step functions in `L_log` and the F-norm `‖f‖ = ∫ ln(1 + |f|) dμ`.
//!
//! Every norm, distance and integral is evaluated in closed form as a finite
//! sum over atoms and interval pieces. Logarithms are natural, so norms are
//! reported in nats.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::StepFunction;
use crate::measure_algebra::{Density, Event, MeasureAlgebra, Relativized};
use crate::SUPPORT_TOL;

/// Value of the F-norm, in nats.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct FNormValue(f64);

impl FNormValue {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<FNormValue> for f64 {
    fn from(v: FNormValue) -> f64 {
        v.0
    }
}

impl fmt::Display for FNormValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A simple function on a measure algebra: one value per atom and a step
/// function per component. Non-realized components always carry zero.
#[derive(Debug, Clone)]
pub struct LogFunction {
    space: Arc<MeasureAlgebra>,
    atom_values: Vec<f64>,
    parts: Vec<StepFunction>,
}

pub(crate) fn same_space(a: &Arc<MeasureAlgebra>, b: &Arc<MeasureAlgebra>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl LogFunction {
    /// Builds a function from atom values and one step function per
    /// *realized* component, in component order.
    pub fn new(
        space: Arc<MeasureAlgebra>,
        atom_values: Vec<f64>,
        realized_parts: Vec<StepFunction>,
    ) -> Result<Self> {
        if atom_values.len() != space.atom_count() {
            return Err(Error::MalformedFunction(format!(
                "{} atom values for {} atoms",
                atom_values.len(),
                space.atom_count()
            )));
        }
        if let Some(v) = atom_values.iter().find(|v| !v.is_finite()) {
            return Err(Error::MalformedFunction(format!("non-finite atom value {v}")));
        }
        let realized = (0..space.component_count())
            .filter(|&k| space.is_realized(k))
            .count();
        if realized_parts.len() != realized {
            return Err(Error::MalformedFunction(format!(
                "{} step parts for {} realized components",
                realized_parts.len(),
                realized
            )));
        }
        let mut given = realized_parts.into_iter();
        let parts = (0..space.component_count())
            .map(|k| {
                if space.is_realized(k) {
                    given.next().unwrap()
                } else {
                    StepFunction::zero()
                }
            })
            .collect();
        Ok(LogFunction {
            space,
            atom_values,
            parts,
        })
    }

    /// Internal constructor with one part per component (realized or not).
    pub(crate) fn from_components(
        space: Arc<MeasureAlgebra>,
        atom_values: Vec<f64>,
        parts: Vec<StepFunction>,
    ) -> Self {
        debug_assert_eq!(atom_values.len(), space.atom_count());
        debug_assert_eq!(parts.len(), space.component_count());
        LogFunction {
            space,
            atom_values,
            parts,
        }
    }

    pub fn zero(space: Arc<MeasureAlgebra>) -> Self {
        Self::constant(space, 0.0)
    }

    /// The constant `c` on the representable part of the space.
    pub fn constant(space: Arc<MeasureAlgebra>, c: f64) -> Self {
        let atom_values = vec![c; space.atom_count()];
        let parts = (0..space.component_count())
            .map(|k| StepFunction::constant(if space.is_realized(k) { c } else { 0.0 }))
            .collect();
        Self::from_components(space, atom_values, parts)
    }

    pub fn indicator(space: Arc<MeasureAlgebra>, e: &Event) -> Result<Self> {
        space.check_event(e)?;
        let atom_values = e
            .atom_mask()
            .iter()
            .map(|&a| if a { 1.0 } else { 0.0 })
            .collect();
        let parts = e.intervals().iter().map(StepFunction::indicator).collect();
        Ok(Self::from_components(space, atom_values, parts))
    }

    /// Function on a purely atomic space.
    pub fn on_atoms(space: Arc<MeasureAlgebra>, values: Vec<f64>) -> Result<Self> {
        let realized = (0..space.component_count())
            .filter(|&k| space.is_realized(k))
            .count();
        Self::new(space, values, vec![StepFunction::zero(); realized])
    }

    pub fn space(&self) -> &Arc<MeasureAlgebra> {
        &self.space
    }

    pub fn atom_values(&self) -> &[f64] {
        &self.atom_values
    }

    /// Step function on component `k` (zero for non-realized components).
    pub fn part(&self, k: usize) -> &StepFunction {
        &self.parts[k]
    }

    pub fn parts(&self) -> &[StepFunction] {
        &self.parts
    }

    /// Step functions of the realized components only, in order.
    pub fn realized_parts(&self) -> Vec<&StepFunction> {
        (0..self.parts.len())
            .filter(|&k| self.space.is_realized(k))
            .map(|k| &self.parts[k])
            .collect()
    }

    /// `∫ g(f) dμ` for a pointwise transform `g` with `g(0) = 0`.
    fn integrate_transformed(&self, g: impl Fn(f64) -> f64 + Copy) -> f64 {
        let atoms: f64 = self
            .atom_values
            .iter()
            .zip(self.space.atoms())
            .map(|(&v, a)| a.weight() * g(v))
            .sum();
        let parts: f64 = self
            .parts
            .iter()
            .zip(self.space.components())
            .map(|(f, c)| c.measure() * f.integrate(g))
            .sum();
        atoms + parts
    }

    pub fn fnorm(&self) -> FNormValue {
        FNormValue(self.integrate_transformed(|v| v.abs().ln_1p()))
    }

    /// `∫ f dμ`.
    pub fn integral(&self) -> f64 {
        self.integrate_transformed(|v| v)
    }

    /// `∫ f · h dμ` for a density `h` on the same structure.
    pub fn integral_against(&self, density: &Density) -> Result<f64> {
        if density.atom_ratios().len() != self.atom_values.len()
            || density.component_ratios().len() != self.parts.len()
        {
            return Err(Error::StructureMismatch("density shape".into()));
        }
        let weighted = LogFunction::from_components(
            self.space.clone(),
            self.atom_values
                .iter()
                .zip(density.atom_ratios())
                .map(|(v, h)| v * h)
                .collect(),
            self.parts
                .iter()
                .zip(density.component_ratios())
                .map(|(f, h)| f.zip_with(h, |a, b| a * b))
                .collect(),
        );
        Ok(weighted.integral())
    }

    pub fn distance(&self, other: &LogFunction) -> Result<f64> {
        Ok(self.sub(other)?.fnorm().value())
    }

    fn zip(&self, other: &LogFunction, op: impl Fn(f64, f64) -> f64 + Copy) -> Result<Self> {
        if !same_space(&self.space, &other.space) {
            return Err(Error::SpaceMismatch);
        }
        let atom_values = self
            .atom_values
            .iter()
            .zip(&other.atom_values)
            .map(|(&a, &b)| op(a, b))
            .collect();
        let parts = self
            .parts
            .iter()
            .zip(&other.parts)
            .map(|(f, g)| f.zip_with(g, op))
            .collect();
        Ok(Self::from_components(self.space.clone(), atom_values, parts))
    }

    pub fn add(&self, other: &LogFunction) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &LogFunction) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    /// Pointwise product.
    pub fn mul(&self, other: &LogFunction) -> Result<Self> {
        self.zip(other, |a, b| a * b)
    }

    pub fn scale(&self, alpha: f64) -> Self {
        self.map(|v| alpha * v)
    }

    /// Pointwise map on the representable part. `g` should send 0 to 0 if the
    /// result is to vanish where `self` does.
    pub fn map(&self, g: impl Fn(f64) -> f64 + Copy) -> Self {
        let atom_values = self.atom_values.iter().map(|&v| g(v)).collect();
        let parts = self
            .parts
            .iter()
            .enumerate()
            .map(|(k, f)| {
                if self.space.is_realized(k) {
                    f.map(g)
                } else {
                    f.clone()
                }
            })
            .collect();
        Self::from_components(self.space.clone(), atom_values, parts)
    }

    /// Event where `|f| > SUPPORT_TOL`.
    pub fn support(&self) -> Event {
        Event::from_parts(
            self.atom_values.iter().map(|v| v.abs() > SUPPORT_TOL).collect(),
            self.parts.iter().map(|f| f.support(SUPPORT_TOL)).collect(),
        )
    }

    /// Largest pointwise difference; both functions must share the space.
    pub fn max_abs_diff(&self, other: &LogFunction) -> Result<f64> {
        Ok(self.zip(other, |a, b| a - b)?.max_abs())
    }

    pub fn max_abs(&self) -> f64 {
        let atoms = self.atom_values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        self.parts.iter().fold(atoms, |m, f| m.max(f.max_abs()))
    }

    /// The same values viewed on another space with identical structure.
    pub fn rebase(&self, space: Arc<MeasureAlgebra>) -> Result<Self> {
        if !space.same_structure(&self.space) {
            return Err(Error::StructureMismatch(
                "cannot move a function to a differently shaped space".into(),
            ));
        }
        Ok(Self::from_components(
            space,
            self.atom_values.clone(),
            self.parts.clone(),
        ))
    }

    /// Zeroes the function on every component whose mask entry is false.
    pub fn restrict_components(&self, keep: &[bool]) -> Self {
        let parts = self
            .parts
            .iter()
            .zip(keep)
            .map(|(f, &k)| if k { f.clone() } else { StepFunction::zero() })
            .collect();
        Self::from_components(self.space.clone(), self.atom_values.clone(), parts)
    }
}

impl Relativized {
    /// Moves a function on `e·∇` into the parent algebra, zero off `e`.
    pub fn embed(&self, f: &LogFunction, parent: Arc<MeasureAlgebra>) -> Result<LogFunction> {
        if !same_space(f.space(), &self.space) {
            return Err(Error::SpaceMismatch);
        }
        let mut atom_values = vec![0.0; parent.atom_count()];
        for (k, &i) in self.atom_indices.iter().enumerate() {
            atom_values[i] = f.atom_values()[k];
        }
        let mut placed = vec![Vec::new(); parent.component_count()];
        for (k, &(comp, start, len)) in self.pieces.iter().enumerate() {
            placed[comp].extend(f.part(k).transport_window(0.0, 1.0, start, len));
        }
        let parts = placed.into_iter().map(StepFunction::from_placed_pieces).collect();
        Ok(LogFunction::from_components(parent, atom_values, parts))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure_algebra::Event;

    const LN2: f64 = std::f64::consts::LN_2;

    fn space(weights: &[f64], measures: &[f64]) -> Arc<MeasureAlgebra> {
        Arc::new(MeasureAlgebra::with_lebesgue(weights, measures).unwrap())
    }

    #[test]
    fn indicator_norm_is_measure_times_ln2() {
        let s = space(&[], &[1.0]);
        let e = Event::from_raw(&s, &[], vec![vec![(0.1, 0.5)]]).unwrap();
        let f = LogFunction::indicator(s.clone(), &e).unwrap();
        assert!((f.fnorm().value() - 0.4 * LN2).abs() < 1e-15);
        assert!((f.fnorm().value() - 0.27726).abs() < 1e-5);
    }

    #[test]
    fn norm_examples() {
        let s = space(&[0.5, 0.5], &[]);
        assert_eq!(LogFunction::zero(s.clone()).fnorm().value(), 0.0);
        let f = LogFunction::on_atoms(s.clone(), vec![1.0, 3.0]).unwrap();
        // Term-by-term oracle.
        let oracle = 0.5 * 2f64.ln() + 0.5 * 4f64.ln();
        assert!((f.fnorm().value() - oracle).abs() < 1e-15);
        assert!((f.fnorm().value() - 1.5 * LN2).abs() < 1e-15);

        let t = 2.5;
        let lambda = 7.0;
        let s = space(&[], &[t]);
        let c = LogFunction::constant(s, lambda);
        assert!((c.fnorm().value() - t * (1.0 + lambda).ln()).abs() < 1e-14);
    }

    #[test]
    fn distance_examples() {
        let s = space(&[1.0], &[]);
        let f = LogFunction::on_atoms(s.clone(), vec![3.0]).unwrap();
        let g = LogFunction::on_atoms(s.clone(), vec![1.0]).unwrap();
        assert_eq!(f.distance(&f).unwrap(), 0.0);
        assert_eq!(f.distance(&LogFunction::zero(s.clone())).unwrap(), f.fnorm().value());
        assert!((f.distance(&g).unwrap() - 3f64.ln()).abs() < 1e-15);

        let other = space(&[2.0], &[]);
        let h = LogFunction::on_atoms(other, vec![1.0]).unwrap();
        assert_eq!(f.distance(&h), Err(Error::SpaceMismatch));
    }

    #[test]
    fn algebra_examples() {
        let s = space(&[0.5, 0.5], &[]);
        let f = LogFunction::on_atoms(s.clone(), vec![1.0, 3.0]).unwrap();
        let g = LogFunction::on_atoms(s.clone(), vec![2.0, 0.0]).unwrap();
        assert_eq!(f.mul(&g).unwrap().atom_values(), &[2.0, 0.0]);
        assert_eq!(f.add(&LogFunction::zero(s.clone())).unwrap().atom_values(), f.atom_values());
        assert_eq!(f.scale(1.0).atom_values(), f.atom_values());
    }

    #[test]
    fn step_parts_refine() {
        let s = space(&[], &[2.0]);
        let f = LogFunction::new(
            s.clone(),
            vec![],
            vec![StepFunction::from_lengths(&[(0.3, 1.0), (0.7, -1.0)]).unwrap()],
        )
        .unwrap();
        let g = LogFunction::new(
            s.clone(),
            vec![],
            vec![StepFunction::from_lengths(&[(0.5, 2.0), (0.5, 0.0)]).unwrap()],
        )
        .unwrap();
        let h = f.add(&g).unwrap();
        assert_eq!(h.part(0).values(), &[3.0, 1.0, -1.0]);
        let expected = 2.0 * (0.3 * 4f64.ln() + 0.2 * 2f64.ln() + 0.5 * 2f64.ln());
        assert!((h.fnorm().value() - expected).abs() < 1e-14);
    }

    #[test]
    fn support_examples() {
        let s = space(&[0.5, 0.5], &[]);
        assert!(LogFunction::zero(s.clone()).support().is_empty());
        let f = LogFunction::on_atoms(s.clone(), vec![0.0, 3.0]).unwrap();
        assert_eq!(f.support().atom_indices(), vec![1]);

        let s = space(&[0.5], &[1.0]);
        let e = Event::from_raw(&s, &[0], vec![vec![(0.25, 0.5), (0.75, 1.0)]]).unwrap();
        let f = LogFunction::indicator(s.clone(), &e).unwrap();
        assert!(f.support().approx_eq(&e, 1e-12));
        let tiny = LogFunction::on_atoms(space(&[1.0], &[]), vec![1e-13]).unwrap();
        assert!(tiny.support().is_empty());
    }

    #[test]
    fn malformed_functions() {
        let s = space(&[0.5], &[1.0]);
        assert!(LogFunction::new(s.clone(), vec![], vec![StepFunction::zero()]).is_err());
        assert!(LogFunction::new(s.clone(), vec![1.0], vec![]).is_err());
        assert!(LogFunction::new(s, vec![f64::NAN], vec![StepFunction::zero()]).is_err());
    }
}
