//! Built-in local spaces and the discrete/induced constructions.

mod branched;
mod coset;
mod discrete;
mod discrete_local;
mod induced;
mod lattice;
mod mutated;
mod open_subset;

pub use branched::{branched_double_cover, BranchedCover};
pub use coset::{coset_space, CosetSpace};
pub use discrete::{normalize_discrete, DiscreteSoficMap, Normalized};
pub use discrete_local::{discrete_to_local, local_to_discrete, DiscreteLocalSpace};
pub use induced::{induce_from_lattice, InducedSpace};
pub use lattice::{default_f_radius, make_cocycle, Cocycle, FundamentalDomain};
pub use mutated::{mutated_circle, MutatedCircle, Mutation};
pub use open_subset::{folner_box_space, open_subset_space, OpenSubsetSpace};
