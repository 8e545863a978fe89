//! Name-keyed factories for spectral forms, profiles and bath states.
//!
//! Each strategy is described by a JSON object whose selector field (`form`
//! for spectra, `kind` for profiles and bath states) picks the factory; the
//! remaining fields are the factory's parameters.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{Map, Value};

use crate::bath::{
    CatProfile, CouplingSpectrum, Dispersion, Drude, Exponential, GaussianBump, OhmicityClass,
    PowerExponential, Profile, SpectralForm, Table, TabulatedProfile, TabulatedSpectrum,
};
use crate::dephasing::{BathState, CatState, CoherentState, VacuumState};
use crate::error::{Error, Result};

pub type Factory<T> = Box<dyn Fn(&Value, &BuildContext) -> Result<T> + Send + Sync>;

pub struct Registry<T> {
    kind: &'static str,
    factories: BTreeMap<String, Factory<T>>,
}

impl<T> fmt::Debug for Registry<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Registry")
            .field("kind", &self.kind)
            .field("names", &self.names().collect::<Vec<_>>())
            .finish()
    }
}

impl<T> Registry<T> {
    pub fn new(kind: &'static str) -> Self {
        Registry {
            kind,
            factories: BTreeMap::new(),
        }
    }

    /// Registers `factory` under `name`, replacing any earlier entry.
    pub fn register<F>(&mut self, name: impl Into<String>, factory: F) -> &mut Self
    where
        F: Fn(&Value, &BuildContext) -> Result<T> + Send + Sync + 'static,
    {
        self.factories.insert(name.into(), Box::new(factory));
        self
    }

    pub fn contains(&self, name: &str) -> bool {
        self.factories.contains_key(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.factories.keys().map(String::as_str)
    }

    pub fn build(&self, name: &str, params: &Value, ctx: &BuildContext) -> Result<T> {
        match self.factories.get(name) {
            Some(factory) => factory(params, ctx),
            None => Err(Error::UnknownStrategy {
                kind: self.kind,
                name: name.to_owned(),
                known: self.names().collect::<Vec<_>>().join(", "),
            }),
        }
    }

    /// Splits the selector off `spec` and builds the named strategy from the rest.
    ///
    /// `field` is the location of `spec` in the enclosing document and prefixes
    /// error messages.
    pub fn build_tagged(
        &self,
        spec: &Value,
        selector: &str,
        field: &str,
        ctx: &BuildContext,
    ) -> Result<T> {
        let (name, params) = split_selector(spec, selector, field)?;
        self.build(&name, &Value::Object(params), &ctx.nested(field))
    }
}

fn split_selector(spec: &Value, selector: &str, field: &str) -> Result<(String, Map<String, Value>)> {
    let Value::Object(map) = spec else {
        return Err(Error::Field {
            field: field.to_owned(),
            message: "expected an object".into(),
        });
    };
    let mut params = map.clone();
    match params.remove(selector) {
        Some(Value::String(name)) => Ok((name, params)),
        Some(_) => Err(Error::Field {
            field: format!("{field}.{selector}"),
            message: "expected a string".into(),
        }),
        None => Err(Error::Field {
            field: format!("{field}.{selector}"),
            message: "missing field".into(),
        }),
    }
}

/// Environment shared by factories.
#[derive(Clone, Debug)]
pub struct BuildContext {
    /// Relative table paths are resolved against this directory.
    pub base_dir: PathBuf,
    /// Location of the parameters being built, for diagnostics.
    pub field: String,
    pub profiles: Arc<Registry<Arc<dyn Profile>>>,
}

impl BuildContext {
    pub fn new(base_dir: impl Into<PathBuf>) -> Self {
        BuildContext {
            base_dir: base_dir.into(),
            field: String::new(),
            profiles: Arc::new(default_profiles()),
        }
    }

    pub fn with_profiles(mut self, profiles: Registry<Arc<dyn Profile>>) -> Self {
        self.profiles = Arc::new(profiles);
        self
    }

    fn nested(&self, field: &str) -> Self {
        BuildContext {
            field: field.to_owned(),
            ..self.clone()
        }
    }

    pub fn resolve(&self, path: &Path) -> PathBuf {
        if path.is_absolute() {
            path.to_owned()
        } else {
            self.base_dir.join(path)
        }
    }

    /// Deserializes factory parameters, reporting the failing field by path.
    pub fn params<P: DeserializeOwned>(&self, value: &Value) -> Result<P> {
        serde_path_to_error::deserialize(value).map_err(|e| {
            let inner = e.path().to_string();
            let field = match (self.field.is_empty(), inner.as_str()) {
                (true, _) => inner.clone(),
                (false, ".") => self.field.clone(),
                (false, _) => format!("{}.{}", self.field, inner),
            };
            Error::Field {
                field,
                message: e.into_inner().to_string(),
            }
        })
    }

    fn table(&self, path: &Path) -> Result<Table> {
        Table::from_csv_path(self.resolve(path))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DrudeParams {
    lambda: f64,
    mu: f64,
    omega_c: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TabulatedSpectrumParams {
    path: PathBuf,
    low_exponent: f64,
    tail_rate: f64,
    #[serde(default)]
    class: Option<OhmicityClass>,
}

pub fn default_spectral_forms() -> Registry<Arc<dyn SpectralForm>> {
    let mut r: Registry<Arc<dyn SpectralForm>> = Registry::new("spectral form");
    r.register("drude", |v, ctx| {
        let p: DrudeParams = ctx.params(v)?;
        Ok(Arc::new(Drude::new(p.lambda, p.mu, p.omega_c)?) as Arc<dyn SpectralForm>)
    });
    r.register("tabulated", |v, ctx| {
        let p: TabulatedSpectrumParams = ctx.params(v)?;
        let table = ctx.table(&p.path)?;
        Ok(Arc::new(TabulatedSpectrum::new(table, p.low_exponent, p.tail_rate, p.class)?)
            as Arc<dyn SpectralForm>)
    });
    r
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExponentialParams {
    amplitude: f64,
    width: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PowerExponentialParams {
    amplitude: f64,
    power: f64,
    width: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GaussianParams {
    amplitude: f64,
    center: f64,
    width: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TabulatedProfileParams {
    path: PathBuf,
    #[serde(default)]
    low_exponent: f64,
    tail_rate: f64,
}

pub fn default_profiles() -> Registry<Arc<dyn Profile>> {
    let mut r: Registry<Arc<dyn Profile>> = Registry::new("profile");
    r.register("exponential", |v, ctx| {
        let p: ExponentialParams = ctx.params(v)?;
        Ok(Arc::new(Exponential::new(p.amplitude, p.width)?) as Arc<dyn Profile>)
    });
    r.register("power_exponential", |v, ctx| {
        let p: PowerExponentialParams = ctx.params(v)?;
        Ok(Arc::new(PowerExponential::new(p.amplitude, p.power, p.width)?) as Arc<dyn Profile>)
    });
    r.register("gaussian", |v, ctx| {
        let p: GaussianParams = ctx.params(v)?;
        Ok(Arc::new(GaussianBump::new(p.amplitude, p.center, p.width)?) as Arc<dyn Profile>)
    });
    r.register("tabulated", |v, ctx| {
        let p: TabulatedProfileParams = ctx.params(v)?;
        let table = ctx.table(&p.path)?;
        Ok(Arc::new(TabulatedProfile::new(table, p.low_exponent, p.tail_rate)?) as Arc<dyn Profile>)
    });
    r
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NoParams {}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CoherentParams {
    profile: Value,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CatParams {
    #[serde(default)]
    phi: f64,
    profile: Value,
}

fn build_profile(spec: &Value, ctx: &BuildContext) -> Result<Arc<dyn Profile>> {
    let field = if ctx.field.is_empty() {
        "profile".to_owned()
    } else {
        format!("{}.profile", ctx.field)
    };
    ctx.profiles.build_tagged(spec, "kind", &field, ctx)
}

pub fn default_bath_states() -> Registry<Arc<dyn BathState>> {
    let mut r: Registry<Arc<dyn BathState>> = Registry::new("bath state");
    r.register("vacuum", |v, ctx| {
        let _: NoParams = ctx.params(v)?;
        Ok(Arc::new(VacuumState) as Arc<dyn BathState>)
    });
    r.register("coherent", |v, ctx| {
        let p: CoherentParams = ctx.params(v)?;
        let alpha = build_profile(&p.profile, ctx)?;
        Ok(Arc::new(CoherentState { alpha }) as Arc<dyn BathState>)
    });
    r.register("cat", |v, ctx| {
        let p: CatParams = ctx.params(v)?;
        let alpha = build_profile(&p.profile, ctx)?;
        Ok(Arc::new(CatState {
            cat: CatProfile::new(alpha, p.phi)?,
        }) as Arc<dyn BathState>)
    });
    r
}

/// Builds a spectrum from `{"form": ..., "velocity": ..., <form parameters>}`.
///
/// `velocity` sets the linear dispersion and defaults to 1.
pub fn build_spectrum(
    forms: &Registry<Arc<dyn SpectralForm>>,
    spec: &Value,
    field: &str,
    ctx: &BuildContext,
) -> Result<CouplingSpectrum> {
    let (name, mut params) = split_selector(spec, "form", field)?;
    let velocity = match params.remove("velocity") {
        None => 1.0,
        Some(v) => v.as_f64().ok_or_else(|| Error::Field {
            field: format!("{field}.velocity"),
            message: "expected a number".into(),
        })?,
    };
    let form = forms.build(&name, &Value::Object(params), &ctx.nested(field))?;
    Ok(CouplingSpectrum::new(form).with_dispersion(Dispersion::linear(velocity)?))
}
