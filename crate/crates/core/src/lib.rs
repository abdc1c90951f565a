//! Numerical laboratory for random unilateral weighted shifts.
//!
//! The operator under study is `T e_n = X_n e_{n+1}` on an orthonormal basis,
//! where the weights `X_n` are i.i.d. nonnegative bounded random variables.
//! Everything observable about `T` at desk scale is driven by a handful of
//! closed-form statistics of the weight law (the essential range `[r, R]`,
//! the geometric mean `r0 = exp(E ln X)`, the moment norms `‖X‖_p`) together
//! with log-space scans of sampled weight sequences.
//!
//! Module map:
//!
//! * [`law`] — supported weight distributions and their exact statistics.
//! * [`sample`] — reproducible i.i.d. sampling on splittable streams.
//! * [`shift`] — finite truncations, window products, free polynomials.
//! * [`norm`] — operator norms (power iteration, dense and matrix-free).
//! * [`tridiag`] — symmetric tridiagonal eigenvalue bisection (Sturm counts).
//! * [`spectral`] — spectral-picture prediction and pseudospectrum probes.
//! * [`hardy`] — random Hardy space membership and Monte Carlo norms.
//! * [`vonneumann`] — n-spectra and shift/normal domination verdicts.
//! * [`dynamics`] — linear dynamics of the backward shift.
//! * [`aluthge`] — Aluthge transform iteration and its closed form.
//! * [`classify`] — recurrence, similarity walks, moment diagnostics.

pub mod aluthge;
pub mod classify;
pub mod dynamics;
pub mod freepoly;
pub mod hardy;
pub mod law;
pub mod logspace;
pub mod norm;
pub mod sample;
pub mod shift;
pub mod spectral;
pub mod tridiag;
pub mod vonneumann;

mod error;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

pub use law::{EssentialRange, LawStats, WeightLaw};
pub use sample::WeightSample;
pub use shift::{FreePolynomial, TruncatedShift, WindowStats};
