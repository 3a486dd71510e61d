//! The qubit-efficient state engine: statevectors over band ⊗ grid
//! registers, density matrices over the same register, initial-state
//! constructors, and overlap/fidelity/purity metrics.

mod io;
mod mixed;
mod orbital;
mod state;

pub use io::{load_state, save_state};
pub use mixed::MixedState;
pub use orbital::{planewave_k_list, planewave_orbitals, slater_orbital, OrbitalSet};
pub use state::{overlap_matrix, subspace_fidelity, QeState};
