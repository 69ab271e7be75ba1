//! Concrete matroid families: graphic matroids and wheels, uniform and
//! partition matroids, elementary split matroids and their direct sums,
//! and spikes.

mod graph;
mod spike;
mod split;

pub use graph::{k4_graph, wheel, GraphInstance, WheelInstance};
pub use spike::{binary_spike, binary_spike_pairs, free_spike, C3Spec, SpikeInstance};
pub use split::{
    k4_as_split, random_elementary_split, random_partition, ElementarySplitInstance,
    PartitionInstance, SplitDirectSum, TightSets, UniformComponent, UniformInstance,
};
