//! Two-player counter reachability games under integer, VASS and
//! non-blocking VASS semantics.
//!
//! - [`game`]: counter systems, instances and successor semantics
//! - [`oracle`]: bounded three-valued attractor solver, strategies, simulation
//! - [`reductions`]: winner-preserving transformations between problem classes
//! - [`fixpoint`]: threshold fixpoint for zero-reachability on non-blocking VASS
//! - [`io`]: the `crg-v1` text format and the seeded instance generator
//! - [`harness`]: oracle-vs-oracle verification of reductions

pub mod error;
pub mod fixpoint;
pub mod game;
pub mod harness;
pub mod io;
pub mod oracle;
pub mod reductions;

pub use error::{GameError, ParseError, Result};
pub use fixpoint::{
    build_qz_vass, compute_qz, decide_nbvass_zero, nb_fixpoint, transfer, Decision, FixpointParams,
    FixpointResult, FixpointStatus, QzResult, Value, ValueTable,
};
pub use game::{
    apply_edge, enabled_edges, validate, validate_instance, Configuration, CounterSystem,
    Diagnostic, DiagnosticCode, Edge, GameInstance, Location, Objective, Player, Semantics,
};
pub use harness::{
    verify_instance, verify_reduction, TrialOutcome, TrialRecord, VerificationReport,
};
pub use io::{generate, parse, serialize, serialize_with_notes, GenParams, ObjectiveKind};
pub use oracle::{
    certain_region, check_downward_closure, extract_strategy, simulate, solve_bounded,
    BoundaryPolicy, Mover, Play, PlayStatus, PositionalStrategy, RegionResult, Verdict, Window,
};
pub use reductions::{map_config, ConfigMap, GadgetVariant, Reduction, ReductionOutput};
