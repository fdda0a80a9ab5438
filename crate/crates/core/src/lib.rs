//! Exact and arbitrary-precision spectra of the one-dimensional Schrödinger
//! equation with decatic potentials `V(x) = a x¹⁰ + b x⁸ + c x⁶ + d x⁴ + e x²`.
//!
//! * [`numerics`]: rationals, Q(√a), big decimals, polynomials, root isolation.
//! * [`asymptotics`]: the decaying factor `e^{-φ}` and the reduced χ equation.
//! * [`polyode`]: polynomial solutions of ODEs with polynomial coefficients.
//! * [`decatic`]: quasi-exactly solvable states in closed form.
//! * [`aim`]: the asymptotic iteration method for arbitrary parameters.

pub mod numerics;
pub mod asymptotics;
pub mod polyode;
pub mod decatic;
pub mod aim;
