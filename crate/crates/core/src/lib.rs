//! Mesh deformation by compactly supported radial basis functions.
//!
//! Boundary displacements are interpolated with Wendland C² kernels centred on
//! a reduced set of support nodes, then evaluated at every volume node. The
//! support set is grown greedily, either scanning every boundary node per
//! iteration or, with grouping-circular selection, one of `m` random balanced
//! groups per iteration.
//!
//! ```
//! use rbfmorph::prelude::*;
//!
//! let mesh = swept_wing(&WingSpec::small()).unwrap();
//! let deformer = Deformer::BendTwist(BendTwistParams::new(0.805, 30.0, 0.2, 0.0).unwrap());
//! let wall = mesh.boundary_points();
//! let disp = prescribe(mesh.boundary(), &wall, &DisplacementSource::Analytic(deformer)).unwrap();
//! let boundary = BoundarySet::new(mesh.boundary().to_vec(), wall, disp).unwrap();
//!
//! let kernel = KernelConfig::new(7.0 * 0.805).unwrap();
//! let cfg = SelectionConfig::new(1e-4, boundary.len(), 4, 42);
//! let result = gcb_select(&boundary, &cfg, &kernel).unwrap();
//! assert!(result.converged);
//!
//! let moved = deform_points(mesh.nodes(), &result.support, &kernel).unwrap();
//! assert_eq!(moved.len(), mesh.nodes().len());
//! ```

pub mod cholesky;
pub mod cli;
pub mod deformers;
pub mod error;
pub mod exec;
pub mod geometry;
pub mod kernel;
pub mod mesh_io;
pub mod metrics;
pub mod rbf;
pub mod selection;
pub mod synth;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::cholesky::{solve_weights, CholeskyState};
    pub use crate::deformers::{
        bend_twist, prescribe, span_sine, BendTwistParams, Deformer, DisplacementSource,
        SpanSineParams,
    };
    pub use crate::error::{Error, Result};
    pub use crate::exec::Executor;
    pub use crate::geometry::{DisplacementField, Point3, Vec3Displacement};
    pub use crate::kernel::{normalized_distance, wendland_c2, KernelConfig};
    pub use crate::mesh_io::{
        read_displacements, read_history_csv, read_mesh, write_displacements, write_history_csv,
        write_mesh, Mesh,
    };
    pub use crate::metrics::{
        cell_quality, error_summary, kl_divergence, nearest_support_distance, quality_report,
        ErrorSummary, QualityReport,
    };
    pub use crate::rbf::{
        assemble_phi, deform_points, deform_points_with, evaluate_displacement, SupportBuilder,
        SupportSet,
    };
    pub use crate::selection::{
        error_stage_cost, gcb_select, greedy_select, group_arg_max_error, interpolation_error,
        normalized_cost_ratio, partition_boundary, random_select, seed_supports, BoundarySet,
        GroupPartition, SelectionConfig, SelectionHistory, SelectionResult,
    };
    pub use crate::synth::{swept_wing, WingSpec};
}
