//! Decoherence of two indistinguishable fermions with four single-particle
//! levels: exact dephasing dynamics under an ohmic bosonic bath, an amplitude
//! damping channel, fermionic concurrence and Slater-basis coherence, and the
//! long-time persistence of entanglement.
//!
//! All numerics are generic over [`Real`]; the `f64` aliases below are what
//! most callers want.

pub mod adc;
pub mod bath;
pub mod dephasing;
pub mod error;
pub mod io;
pub mod linalg;
pub mod measures;
pub mod quadrature;
pub mod sampling;
pub mod scalar;
pub mod state;

pub use adc::{adc_asymptotic, adc_evolve, adc_evolve_pure, p_of_t, ADCParams, KrausPair};
pub use bath::{delta_of_t, gamma_of_t, theta_of_t, BathCache, BathFunctions, Beta};
pub use dephasing::{
    asymptotic_coherence, asymptotic_concurrence, asymptotic_state, dephasing_factor, evolve, persistence,
    LSpectrum, Spacing, TimeGrid,
};
pub use error::{Error, Result};
pub use measures::{
    coherence, concurrence, concurrence_pure, purity, von_neumann_entropy, ConcurrenceBreakdown, Observables,
};
pub use sampling::{
    asymptotic_concurrence_xyz, random_real_state, run_atlas, xyz_map, AtlasSummary, PersistenceRecord,
    SamplerConfig,
};
pub use scalar::Real;
pub use state::{
    change_basis, classify_subspace, density_from_pure, from_slater, make_real_state,
    make_slater_state, make_state, to_slater, BasisTag, SubspaceLabel,
};

pub type AngMomState = state::AngMomState<f64>;
pub type SlaterState = state::SlaterState<f64>;
pub type DensityMatrix6 = state::DensityMatrix6<f64>;
pub type BathParams = bath::BathParams<f64>;
