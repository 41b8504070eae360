//! Shared inputs for the criterion benches.

use porttour_core::{gen_random_connected, gen_random_two_connected, Graph};

pub const SIZES: [usize; 3] = [100, 1_000, 10_000];

/// Random connected graph with average degree 4.
pub fn sparse(n: usize) -> Graph {
    gen_random_connected(n, 2 * n, 0xbe7c_u64 ^ n as u64).expect("valid size")
}

/// Random 2-connected graph with average degree 4.
pub fn sparse_two_connected(n: usize) -> Graph {
    gen_random_two_connected(n, 2 * n, 0xbe7c_u64 ^ n as u64).expect("valid size")
}
