//! Polynomial approximation pipeline for the evolution polynomials.

pub mod bessel;
pub mod chebyshev;
pub mod composite;
pub mod fourier;
pub mod jacobi_anger;
pub mod lp;
pub mod rectangle;
pub mod taylor;
pub mod trig_probe;

pub use chebyshev::{Certificate, ChebPoly, Parity};
pub use composite::{low_energy_evolution_polys, EvolutionPoly, EvolutionPolys, Route};
pub use fourier::{fourier_from_taylor, TrigPoly};
pub use jacobi_anger::{jacobi_anger, jacobi_anger_normalized, TrigKind};
pub use rectangle::rectangle_poly;
pub use taylor::{taylor_trig_square, truncate_taylor, TaylorSeries};
pub use trig_probe::{min_trig_degree_probe, ProbeResult};
