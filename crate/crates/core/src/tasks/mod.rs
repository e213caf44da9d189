//! Experiment drivers: synthetic graphs and point clouds, noise, graph
//! alignment, graph partition against super nodes, and scoring.

mod generate;
mod metrics;
mod pipeline;
mod shapes;

pub use generate::{
    add_noise, gen_barabasi_albert, gen_gaussian_partition, permute_graph, AlignmentInstance,
    PartitionInstance,
};
pub use metrics::{alignment_accuracy, ami_score, hard_assignment, partition_assign};
pub use pipeline::{
    adjacency_distance, partition_target, run_alignment, run_match2d, run_partition,
    AlignmentOutcome, MatchOutcome, PartitionOutcome, PARTITION_INIT_JITTER,
};
pub use shapes::{euclidean_distance_matrix, rotate_2d, sample_2d_shape, PointCloud2D, Shape};
