//! Partitions of the non-negative integers into `t + 1` sets, indexed by
//! rank, whose rank-`n` elements sum to a fixed schedule `S(n)`.
//!
//! The m-standard partition places each integer by its residue mod
//! `m = 2t + 1`. Other partitions arise from a short head extended greedily.
//! [`enumeration`] lists every head and [`equivalence`] groups the resulting
//! partitions by eventual agreement.

pub mod cli;
pub mod enumeration;
pub mod equivalence;
pub mod error;
pub mod greedy;
pub mod head;
pub mod io;
pub mod partition;
pub mod reshuffle;
pub mod schedule;

pub use error::{Error, Result};
pub use greedy::{complete_head, greedy_extend, Builder};
pub use head::{Head, PartialHead};
pub use partition::{standard_partition, Partition, Slot};
pub use schedule::{standard_column, sum_schedule, Column, ModulusConfig, SumSchedule};
