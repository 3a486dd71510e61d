//! Classical reference KS-DFT solver: matrix-free Hamiltonian application,
//! block-iterative diagonalization with dense fallback, the SCF loop, and
//! exact small-scale propagators used as test oracles.

mod dense;
mod eigen;
mod hamiltonian;
mod scf;

pub use dense::{dense_hamiltonian, exact_propagator, PropagatorTime, DENSE_DIM_LIMIT};
pub use eigen::{dense_lowest, lowest_eigenpairs, EigenSolution};
pub use hamiltonian::KsHamiltonian;
pub use scf::{scf_loop, Occupation, OracleResult, ScfConfig};
