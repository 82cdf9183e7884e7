//! Benchmarks for the vbm pipeline stages; see `benches/`.

use vbm::synth::LatticeTree;
use vbm::BinaryMask;

/// A canvas-filling vessel tree on a `side`×`side` canvas, `side` a
/// multiple of 16.
pub fn tree_mask(side: usize, seed: u64) -> BinaryMask {
    let lattice = side / 16 - 1;
    LatticeTree::random(seed, lattice, 16, lattice * lattice).mask(4.0, 1.0)
}
