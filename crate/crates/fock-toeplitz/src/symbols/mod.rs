//! Symbols as finite sums of weighted disc indicators, their supports, and the
//! potential-theoretic quantities attached to them.

mod capacity;
mod geometry;
mod motion;
mod potential;
mod region;
mod symbol;

pub use capacity::{capacity, CapacityBracket, CapacityMethod};
pub use geometry::{parse_decimal, Disc, DiscRelation, Point};
pub use motion::{detect_swap_symmetry, Motion};
pub use potential::{green_disc_complement, potential_constants, PotentialData, DEFAULT_MARGIN};
pub use region::{hulls_disjoint, Arrangement, HullSeparation, RegionSet, HULL_DIRECTIONS};
pub use symbol::{rational_to_decimal, Cell, CellForest, Decomposition, Symbol, SymbolBounds, Term};
