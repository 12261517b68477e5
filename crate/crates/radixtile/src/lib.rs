//! Matrix-radix number systems in `Z^d`: digit expansions, cycle codecs,
//! self-affine attractors, spectral tiling lattices and solenoid dynamics.

pub mod attractor;
pub mod cycle_codec;
pub mod exact_linalg;
pub mod radix_system;
pub mod solenoid;
pub mod spectrum;
pub mod wavelet_group;
