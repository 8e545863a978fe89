use qubit_dephasing::bath::{ohmicity_class, OhmicityClass};
use qubit_dephasing::dephasing::{long_time_a0, LongTimeLimit};
use qubit_dephasing::entanglement::negativity_closed;
use qubit_dephasing::qubit::{coherence, purity};
use qubit_dephasing::Error;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::{Quantity, RawConfig, ScenarioConfig};

#[derive(Debug, Error)]
pub enum RunError {
    #[error("at t = {t}: {source}")]
    At { t: f64, source: Error },

    #[error("long-time limit: {0}")]
    Limit(Error),
}

impl RunError {
    pub fn source_error(&self) -> &Error {
        match self {
            RunError::At { source, .. } => source,
            RunError::Limit(e) => e,
        }
    }

    pub fn is_numerical(&self) -> bool {
        self.source_error().is_numerical()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub t: f64,
    pub re_a: f64,
    pub im_a: f64,
    pub abs_a: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub purity: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coherence: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub negativity: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub config: RawConfig,
    /// Absent for tabulated spectra without a declared class.
    pub ohmicity: Option<OhmicityClass>,
    /// `lim A₀(t)`; absent when the spectrum has no analytic form.
    pub long_time_a0: Option<LongTimeLimit>,
    /// `lim |A(t)|` for the configured bath state.
    pub long_time_coherence: Option<LongTimeLimit>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultTable {
    pub metadata: Metadata,
    pub rows: Vec<Row>,
}

impl ResultTable {
    /// CSV columns, in order.
    pub fn columns(&self) -> Vec<&'static str> {
        let mut cols = vec!["t", "re_a", "im_a", "abs_a"];
        let q = &self.metadata.config.quantities;
        for (quantity, name) in [
            (Quantity::Purity, "purity"),
            (Quantity::Coherence, "coherence"),
            (Quantity::Negativity, "negativity"),
        ] {
            if q.contains(&quantity) {
                cols.push(name);
            }
        }
        cols
    }
}

fn unsupported_as_none<T>(r: Result<T, Error>) -> Result<Option<T>, Error> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::UnsupportedSpectrum(_) | Error::Classification(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Long-time summary of a scenario; `None` where the spectrum has no analytic form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Limits {
    pub ohmicity: Option<OhmicityClass>,
    pub long_time_a0: Option<LongTimeLimit>,
    pub long_time_coherence: Option<LongTimeLimit>,
}

pub fn long_time_metadata(config: &ScenarioConfig) -> Result<Limits, RunError> {
    let class = unsupported_as_none(ohmicity_class(&config.spectrum)).map_err(RunError::Limit)?;
    let a0 = unsupported_as_none(long_time_a0(&config.spectrum)).map_err(RunError::Limit)?;
    let coherence = unsupported_as_none(
        config
            .bath_state
            .long_time_coherence(&config.spectrum, &config.tolerance),
    )
    .map_err(RunError::Limit)?;
    Ok(Limits {
        ohmicity: class,
        long_time_a0: a0,
        long_time_coherence: coherence,
    })
}

fn row(config: &ScenarioConfig, t: f64) -> Result<Row, Error> {
    let a = config
        .bath_state
        .dephasing(&config.spectrum, &config.qubit, t, &config.tolerance)?;
    let purity = if config.wants(Quantity::Purity) {
        Some(purity(&config.bloch, &a)?)
    } else {
        None
    };
    let coherence = config.wants(Quantity::Coherence).then(|| coherence(&a));
    let negativity = match (config.wants(Quantity::Negativity), &config.two_qubit) {
        (true, Some(s)) => Some(negativity_closed(s.p, &a)?),
        _ => None,
    };
    Ok(Row {
        t,
        re_a: a.a.re,
        im_a: a.a.im,
        abs_a: a.modulus(),
        purity,
        coherence,
        negativity,
    })
}

/// Evaluates every grid point; rows come back in grid order.
pub fn run_scenario(config: &ScenarioConfig) -> Result<ResultTable, RunError> {
    let results: Vec<Result<Row, RunError>> = config
        .grid
        .times()
        .into_par_iter()
        .map(|t| row(config, t).map_err(|source| RunError::At { t, source }))
        .collect();
    let rows = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let limits = long_time_metadata(config)?;
    Ok(ResultTable {
        metadata: Metadata {
            config: config.raw.clone(),
            ohmicity: limits.ohmicity,
            long_time_a0: limits.long_time_a0,
            long_time_coherence: limits.long_time_coherence,
        },
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    #[test]
    fn ohmic_two_point_grid() {
        let c = parse_config(
            r#"{"spectrum":{"form":"drude","lambda":0.1,"mu":0,"omega_c":1},"grid":{"t_max":1,"steps":2}}"#,
        )
        .unwrap();
        let table = run_scenario(&c).unwrap();
        assert_eq!(table.rows.len(), 2);
        assert_eq!(table.rows[0].t, 0.0);
        assert!((table.rows[0].abs_a - 1.0).abs() < 1e-10);
        assert!((table.rows[1].abs_a - 2f64.powf(-0.2)).abs() < 1e-9);
        assert_eq!(table.metadata.ohmicity, Some(OhmicityClass::Ohmic));
        assert_eq!(table.metadata.long_time_a0, Some(LongTimeLimit::Vanishes));
    }

    #[test]
    fn single_step_is_the_origin() {
        let c = parse_config(
            r#"{"spectrum":{"form":"drude","lambda":0.3,"mu":1,"omega_c":1},"grid":{"t_max":5,"steps":1},
                "qubit":{"epsilon":2}}"#,
        )
        .unwrap();
        let table = run_scenario(&c).unwrap();
        assert_eq!(table.rows.len(), 1);
        assert_eq!(table.rows[0].t, 0.0);
        assert!((table.rows[0].re_a - 1.0).abs() < 1e-10 && table.rows[0].im_a.abs() < 1e-10);
    }

    #[test]
    fn cat_phase_comparison() {
        let text = |phi: f64| {
            format!(
                r#"{{"spectrum":{{"form":"drude","lambda":0.25,"mu":1,"omega_c":1}},
                    "bath_state":{{"kind":"cat","phi":{phi},"profile":{{"kind":"exponential","amplitude":0.5,"width":1}}}},
                    "grid":{{"t_max":1,"steps":2}}}}"#
            )
        };
        let even = run_scenario(&parse_config(&text(0.0)).unwrap()).unwrap();
        let odd = run_scenario(&parse_config(&text(std::f64::consts::PI)).unwrap()).unwrap();
        assert!((even.rows[1].abs_a - 0.589542).abs() < 1e-5);
        assert!((odd.rows[1].abs_a - 0.298499).abs() < 1e-5);
    }

    #[test]
    fn optional_columns() {
        let c = parse_config(
            r#"{"spectrum":{"form":"drude","lambda":0.1,"mu":1,"omega_c":1},"grid":{"t_max":1,"steps":3},
                "two_qubit":{"bell_index":2,"p":0.2},
                "quantities":["negativity","purity","A","coherence","purity"]}"#,
        )
        .unwrap();
        let table = run_scenario(&c).unwrap();
        assert_eq!(
            table.columns(),
            vec!["t", "re_a", "im_a", "abs_a", "purity", "coherence", "negativity"]
        );
        let r = &table.rows[2];
        assert!(r.purity.is_some() && r.coherence.is_some() && r.negativity.is_some());
    }
}
