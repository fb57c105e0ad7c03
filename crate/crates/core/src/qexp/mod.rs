//! Fourier expansions: degree-2 Siegel Eisenstein series, their
//! Fourier-Jacobi coefficients, and the index-raising operators on them.

pub mod hecke;
pub mod jacobi;
pub mod siegel;

pub use hecke::{
    apply_v, apply_v_generic, apply_v_to, coset_reps, elliptic_eisenstein, hecke_t_elliptic, hecke_t_elliptic_generic,
    CosetRep,
};
pub use jacobi::{apply_u, fourier_jacobi, fourier_jacobi_from, jacobi_eisenstein, specialize_z0, JacobiExpansion, QSeries};
pub use siegel::{is_psd, r_bound, siegel2_coeff, siegel2_expand, HalfIntegral, SiegelExpansion2};
