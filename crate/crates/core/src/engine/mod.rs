mod aw;
mod chain;
mod lattice;
mod limit;
mod pair;
pub mod sums;
mod weak;

pub use aw::{aw_lemma_eval, AwLemma};
pub use chain::{
    chain_step, chained_lhs, general_chain_step, multisum_lhs, multisum_lhs_for, multisum_pair_rhs, MultisumKind,
};
pub use lattice::{
    iterated_lattice_eval, iterated_lattice_pair, lattice_djk, lattice_jouhet, lattice_step, LatticeKind,
};
pub use limit::LimitParam;
pub use pair::{
    key_pair, key_pair_with_base, verify_pair_definition, BilateralPair, BoundFn, DefinitionCheck, SeriesFn,
};
pub use weak::{bms_general_eval, weak_lemma_eval, WeakVariant};
