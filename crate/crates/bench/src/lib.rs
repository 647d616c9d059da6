//! Fixtures shared by the benchmarks.

use tropibound::arith::rat_vec;
use tropibound::system::hybrid_histidine_kinase;
use tropibound::{assemble_crn, IntMatrix, RationalMatrix, VerticalSystem};

/// Two equations in two unknowns with five monomials.
pub fn running_system() -> VerticalSystem {
    let c = RationalMatrix::from_i64(&[&[-3, 1, -1, -2, 2], &[-1, 1, -1, -1, 1]]);
    let a = IntMatrix::from_slices(&[&[0, 2, 0, 2, 1], &[0, 0, 2, 2, 1]]);
    VerticalSystem::new(c, a, rat_vec(&[0, 0, 0, 0, -1])).expect("valid system")
}

/// Steady states of the hybrid histidine kinase network.
pub fn kinase_system() -> VerticalSystem {
    assemble_crn(&hybrid_histidine_kinase([10, 20], [7, -6, -2, -3, -3, 3])).expect("valid network")
}
