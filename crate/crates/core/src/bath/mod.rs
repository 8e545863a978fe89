//! Bath description: coupling spectra, cat-state profiles, tabulated input.

mod profile;
mod spectrum;
mod table;

pub use profile::{
    alpha_norm_sq, alpha_norm_sq_quadrature, CatProfile, Exponential, GaussianBump, PowerExponential,
    Profile, TabulatedProfile,
};
pub use spectrum::{
    coupling_g, make_drude_spectrum, ohmicity_class, CouplingSpectrum, Dispersion, Drude,
    OhmicityClass, SpectralForm, TabulatedSpectrum,
};
pub use table::Table;
