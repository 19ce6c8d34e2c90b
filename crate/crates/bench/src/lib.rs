//! Fixed instances shared by the benchmarks.

use crg_core::io::{generate, GenParams, ObjectiveKind};
use crg_core::{Configuration, CounterSystem, GameInstance, Objective, Player, Semantics};

/// `q0 --(2^n)--> qf` with a decrementing self-loop on `qf`.
pub fn exponential(n: u32) -> GameInstance {
    let mut s = CounterSystem::new(1);
    let q0 = s.add_location("q0", Player::Reacher);
    let qf = s.add_location("qf", Player::Reacher);
    s.add_edge(q0, vec![1 << n], qf);
    s.add_edge(qf, vec![-1], qf);
    GameInstance::new(
        s,
        Semantics::NonBlockingVass,
        Objective::SingleConfig(Configuration::new(qf, vec![0])),
        Configuration::new(q0, vec![0]),
    )
    .expect("valid instance")
}

pub fn random(dimension: usize, semantics: Semantics, locations: usize, seed: u64) -> GameInstance {
    let mut p = GenParams::new(dimension, semantics);
    p.num_locations = locations..=locations;
    p.edges_per_location = 1..=3;
    p.objective_kind = ObjectiveKind::SingleReacher;
    generate(&p, seed).expect("valid parameters")
}
