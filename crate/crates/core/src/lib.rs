//! Quasi-minimal rotational surfaces in the neutral space of signature (2, 2).

pub mod cli;
pub mod generator;
pub mod io;
pub mod neutral;
pub mod plot;
pub mod profile;
pub mod quadrature;
pub mod surface;
pub mod verifier;

pub use generator::{
    generate_curve, generate_with_law, phi_integrand, phi_of_u, special_class_curve, AngleLaw, Constants, CurveJet,
    CurveState, GenerateError, GeneratingCurve, Sign, SpecialClass,
};
pub use neutral::{causal_character, inner, Causal, MVec4};
pub use profile::{regime_classify, validity_check, Profile, ProfileJet, ProfileKind, ProfileSpec, RotationType};
