use std::fmt;
use std::sync::Arc;

use super::{
    dephasing_cat, dephasing_coherent, long_time_a0, long_time_cat_modulus, DephasingValue,
    LongTimeLimit, QubitSpec,
};
use crate::bath::{CatProfile, CouplingSpectrum, Profile};
use crate::error::Result;
use crate::quadrature::QuadratureTolerance;

/// Initial bath state, as seen by the qubit through `A(t)`.
pub trait BathState: Send + Sync + fmt::Debug {
    fn name(&self) -> &'static str;

    fn dephasing(
        &self,
        spectrum: &CouplingSpectrum,
        qubit: &QubitSpec,
        t: f64,
        tol: &QuadratureTolerance,
    ) -> Result<DephasingValue>;

    /// `lim_{t→∞} |A(t)|`.
    fn long_time_coherence(
        &self,
        spectrum: &CouplingSpectrum,
        tol: &QuadratureTolerance,
    ) -> Result<LongTimeLimit>;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct VacuumState;

impl BathState for VacuumState {
    fn name(&self) -> &'static str {
        "vacuum"
    }

    fn dephasing(
        &self,
        spectrum: &CouplingSpectrum,
        qubit: &QubitSpec,
        t: f64,
        tol: &QuadratureTolerance,
    ) -> Result<DephasingValue> {
        dephasing_cat(&CatProfile::vacuum(), spectrum, qubit, t, tol)
    }

    fn long_time_coherence(
        &self,
        spectrum: &CouplingSpectrum,
        _tol: &QuadratureTolerance,
    ) -> Result<LongTimeLimit> {
        long_time_a0(spectrum)
    }
}

#[derive(Clone, Debug)]
pub struct CoherentState {
    pub alpha: Arc<dyn Profile>,
}

impl BathState for CoherentState {
    fn name(&self) -> &'static str {
        "coherent"
    }

    fn dephasing(
        &self,
        spectrum: &CouplingSpectrum,
        qubit: &QubitSpec,
        t: f64,
        tol: &QuadratureTolerance,
    ) -> Result<DephasingValue> {
        dephasing_coherent(self.alpha.as_ref(), spectrum, qubit, t, tol)
    }

    fn long_time_coherence(
        &self,
        spectrum: &CouplingSpectrum,
        _tol: &QuadratureTolerance,
    ) -> Result<LongTimeLimit> {
        long_time_a0(spectrum)
    }
}

#[derive(Clone, Debug)]
pub struct CatState {
    pub cat: CatProfile,
}

impl BathState for CatState {
    fn name(&self) -> &'static str {
        "cat"
    }

    fn dephasing(
        &self,
        spectrum: &CouplingSpectrum,
        qubit: &QubitSpec,
        t: f64,
        tol: &QuadratureTolerance,
    ) -> Result<DephasingValue> {
        dephasing_cat(&self.cat, spectrum, qubit, t, tol)
    }

    fn long_time_coherence(
        &self,
        spectrum: &CouplingSpectrum,
        tol: &QuadratureTolerance,
    ) -> Result<LongTimeLimit> {
        long_time_cat_modulus(&self.cat, spectrum, tol)
    }
}
