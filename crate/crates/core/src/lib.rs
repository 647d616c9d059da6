//! Lower bounds on the number of positive real solutions of vertically
//! parametrized polynomial systems `C diag(t^h) x^A = 0` for small `t > 0`.
//!
//! The bound is the number of points in `(Trop⁺(ker C) − h) ∩ rowspan(A)`,
//! computed exactly from the oriented matroid of `ker C`. A second bound
//! counts positively decorated simplices of the regular subdivision of the
//! columns of `A` lifted by `h`.

pub mod arith;
pub mod error;
pub mod fan;
pub mod intersect;
pub mod io;
pub mod matroid;
pub mod numeric;
pub mod subdivision;
pub mod system;

pub use arith::{IntMatrix, Rational, RationalMatrix, RationalVector};
pub use error::{Error, Result};
pub use fan::{fine_fan, is_member, is_positive_member, positive_fan, FlagCone, PositiveFan};
pub use intersect::{intersect_via_fan, intersect_via_vertices, lower_bound, IntersectionPoint, IntersectionReport};
pub use matroid::{ElementSet, FlagOfFlats, Flat, OrientedMatroid, SignedCircuit};
pub use numeric::{count_roots, CountOptions, NewtonOptions, RootWitness};
pub use subdivision::{decorated_count, full_cells, Cell, DecoratedSimplex};
pub use system::{assemble_crn, bound, BoundReport, CrnModel, VerticalSystem};
