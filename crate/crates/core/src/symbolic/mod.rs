//! Word combinatorics: substitutions, circle-map codings, Sturmian blocks,
//! factor statistics, repetitions and partitions.

pub mod contfrac;
pub mod factors;
pub mod partition;
pub mod repetition;
pub mod sturmian;
pub mod substitution;
pub mod word;

pub use contfrac::{continued_fraction, AlphaSpec, ContinuedFraction};
pub use factors::{complexity, count_occurrences, factor_set, frequency, occurrences, SuffixAutomaton};
pub use partition::{n_partition, BlockKind, BlockRun, PartitionView};
pub use repetition::{find_palindromes, find_powers, first_power};
pub use sturmian::{
    characteristic_prefix, check_block_identities, check_block_identity, circle_map_symbol, circle_map_word, sturmian_block, sturmian_blocks,
};
pub use substitution::SubstitutionRule;
pub use word::{Alphabet, Word};
