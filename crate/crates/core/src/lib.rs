//! Online maximal and distinct palindromes in a rooted, edge-labeled trie
//! that grows and shrinks one leaf at a time.
//!
//! The [`trie`] module holds the dynamic trie itself. [`palgroups`] keeps,
//! for every node, the maximal palindromes ending there as arithmetic
//! progressions of lengths. Distinct palindromes are tracked by one of
//! several interchangeable engines: the palindromic tree ([`eertree`]) with
//! three lookup strategies and two direct-link backends, or the suffix tree
//! of the backward trie ([`suffix_tree`]). [`engine`] wraps all of them
//! behind one session type that emits identical event streams, and
//! [`oracles`] contains the brute-force references used to check them.

pub mod check;
pub mod colored_ancestor;
pub mod eertree;
pub mod engine;
mod error;
mod label;
pub mod oracles;
pub mod order_list;
pub mod palgroups;
pub mod persistent_map;
pub mod script;
pub mod suffix_tree;
pub mod trie;

pub use engine::{EngineKind, Event, Session};
pub use error::{Error, Result};
pub use label::Label;
pub use trie::{NodeId, Trie};
