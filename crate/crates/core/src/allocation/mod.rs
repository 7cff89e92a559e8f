//! Online basestation allocation with waterfilling log utility.

mod greedy;
mod matrix;
mod offline;
mod ratio;

pub use greedy::{max_weight, online_greedy, GreedyMode, OnlineGreedy};
pub use matrix::{Allocation, WeightMatrix};
pub use offline::{
    check_brute_force_size, offline_bruteforce, offline_upper_bound, system_utility,
    BRUTE_FORCE_LIMIT,
};
pub use ratio::{competitive_ratio, ratio_against, ratio_of, RatioReport, ReferenceKind, Strategy};
