//! Windowed Fourier transform, filter-bank summation inversion and
//! empirical convergence diagnostics on uniform grids.

pub mod audio;
pub mod cli;
pub mod config;
pub mod diag;
pub mod error;
pub mod fixtures;
pub mod fourier;
pub mod grid;
pub mod inversion;
pub mod io;
pub mod lab;
pub mod quad;
pub mod special;
pub mod stft;
pub mod window;

pub use diag::{Annotated, Diagnostics};
pub use error::{Error, Result};
pub use grid::{lp_norm, quadrature, relative_l2, resample_to, Interpolation, LpExponent, SampledSignal, UniformGrid};
pub use inversion::{
    filter_bank_reconstruct, invert, invert_double_integral, invert_kernel, invert_modulation, invert_multiplier,
    kernel_eval, multiplier_eval, MultiplierProfile, Pathway, Reconstruction, TruncationPair,
};
pub use num_complex::Complex64;
pub use stft::{forward_stft, StftMatrix};
pub use window::{make_window, Window, WindowKind, WindowSpec};
