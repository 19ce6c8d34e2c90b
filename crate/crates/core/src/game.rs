//! Counter systems, game instances and the three successor semantics.
//!
//! A counter system is a finite graph whose edges carry integer vectors. A play
//! moves a token along edges and adds each label to the current counter vector.
//! What happens when a counter would become negative depends on the
//! [`Semantics`]: integers allow it, VASS disables the edge, and non-blocking
//! VASS clamps the result to zero.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{GameError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    Reacher,
    Opponent,
}

impl Player {
    pub fn adversary(self) -> Player {
        match self {
            Player::Reacher => Player::Opponent,
            Player::Opponent => Player::Reacher,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Reacher => "reacher",
            Player::Opponent => "opponent",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Semantics {
    /// Counters range over all integers.
    Z,
    /// An edge is disabled when it would make a counter negative.
    Vass,
    /// Negative results are replaced by zero; no edge is ever disabled.
    NonBlockingVass,
}

impl Semantics {
    /// Whether counters are confined to nonnegative values.
    pub fn is_nonnegative(self) -> bool {
        !matches!(self, Semantics::Z)
    }

    pub fn keyword(self) -> &'static str {
        match self {
            Semantics::Z => "z",
            Semantics::Vass => "vass",
            Semantics::NonBlockingVass => "nbvass",
        }
    }
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

impl FromStr for Semantics {
    type Err = GameError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "z" => Ok(Semantics::Z),
            "vass" => Ok(Semantics::Vass),
            "nbvass" => Ok(Semantics::NonBlockingVass),
            other => Err(GameError::Usage(format!("unknown semantics `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Location {
    pub name: String,
    pub owner: Player,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub src: usize,
    pub label: Vec<i64>,
    pub dst: usize,
}

/// The arena: locations with owners and labelled edges, in declaration order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CounterSystem {
    pub dimension: usize,
    pub locations: Vec<Location>,
    pub edges: Vec<Edge>,
}

impl CounterSystem {
    pub fn new(dimension: usize) -> Self {
        CounterSystem {
            dimension,
            locations: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub fn add_location(&mut self, name: impl Into<String>, owner: Player) -> usize {
        self.locations.push(Location {
            name: name.into(),
            owner,
        });
        self.locations.len() - 1
    }

    pub fn add_edge(&mut self, src: usize, label: Vec<i64>, dst: usize) -> usize {
        self.edges.push(Edge { src, label, dst });
        self.edges.len() - 1
    }

    pub fn num_locations(&self) -> usize {
        self.locations.len()
    }

    pub fn owner(&self, location: usize) -> Player {
        self.locations[location].owner
    }

    pub fn name(&self, location: usize) -> &str {
        &self.locations[location].name
    }

    pub fn location_index(&self, name: &str) -> Option<usize> {
        self.locations.iter().position(|l| l.name == name)
    }

    /// Outgoing edges of `location` as `(edge index, edge)`, in declaration order.
    pub fn outgoing(&self, location: usize) -> impl Iterator<Item = (usize, &Edge)> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter(move |(_, e)| e.src == location)
    }

    /// Per-location lists of outgoing edge indices.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.locations.len()];
        for (i, e) in self.edges.iter().enumerate() {
            if e.src < adj.len() {
                adj[e.src].push(i);
            }
        }
        adj
    }

    pub fn is_short_range(&self) -> bool {
        self.edges
            .iter()
            .all(|e| e.label.iter().all(|&c| (-1..=1).contains(&c)))
    }

    pub fn max_abs_label(&self) -> i64 {
        self.edges
            .iter()
            .flat_map(|e| e.label.iter())
            .map(|c| c.abs())
            .max()
            .unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    pub location: usize,
    pub counters: Vec<i64>,
}

impl Configuration {
    pub fn new(location: usize, counters: Vec<i64>) -> Self {
        Configuration { location, counters }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Objective {
    SingleConfig(Configuration),
    /// `S × {0^d}`.
    LocationsAtZero(BTreeSet<usize>),
    /// Two-dimensional only: `S × (({0} × ℕ) ∪ (ℕ × {0}))`.
    AxisZero(BTreeSet<usize>),
}

impl Objective {
    pub fn contains(&self, config: &Configuration) -> bool {
        match self {
            Objective::SingleConfig(target) => target == config,
            Objective::LocationsAtZero(set) => {
                set.contains(&config.location) && config.counters.iter().all(|&c| c == 0)
            }
            Objective::AxisZero(set) => {
                if !set.contains(&config.location) || config.counters.len() != 2 {
                    return false;
                }
                let (a, b) = (config.counters[0], config.counters[1]);
                (a == 0 && b >= 0) || (b == 0 && a >= 0)
            }
        }
    }

    /// Locations mentioned by the objective.
    pub fn locations(&self) -> BTreeSet<usize> {
        match self {
            Objective::SingleConfig(c) => BTreeSet::from([c.location]),
            Objective::LocationsAtZero(s) | Objective::AxisZero(s) => s.clone(),
        }
    }
}

/// One decision-problem instance.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GameInstance {
    pub system: CounterSystem,
    pub semantics: Semantics,
    pub objective: Objective,
    pub initial: Configuration,
}

impl GameInstance {
    /// Builds an instance, rejecting it if any invariant is violated.
    pub fn new(
        system: CounterSystem,
        semantics: Semantics,
        objective: Objective,
        initial: Configuration,
    ) -> Result<Self> {
        let game = GameInstance {
            system,
            semantics,
            objective,
            initial,
        };
        let diagnostics = validate_instance(&game);
        if diagnostics.is_empty() {
            Ok(game)
        } else {
            Err(GameError::Invalid(diagnostics))
        }
    }

    pub fn dimension(&self) -> usize {
        self.system.dimension
    }

    pub fn owner(&self, location: usize) -> Player {
        self.system.owner(location)
    }

    pub fn enabled_edges(&self, config: &Configuration) -> Vec<usize> {
        enabled_edges(&self.system, self.semantics, config)
    }

    /// Applies edge `edge` of the system to `config`.
    pub fn step(&self, config: &Configuration, edge: usize) -> Result<Configuration> {
        apply_edge(self.semantics, config, &self.system.edges[edge])
    }

    pub fn is_objective(&self, config: &Configuration) -> bool {
        self.objective.contains(config)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DiagnosticCode {
    ZeroDimension,
    BadIdentifier,
    DuplicateLocation,
    BadEdgeEndpoint,
    BadLabelArity,
    BadConfigLocation,
    BadConfigArity,
    NegativeCounter,
    BadObjectiveLocation,
    EmptyLocationSet,
    AxisZeroDimension,
}

impl DiagnosticCode {
    pub fn as_str(self) -> &'static str {
        match self {
            DiagnosticCode::ZeroDimension => "zero-dimension",
            DiagnosticCode::BadIdentifier => "bad-identifier",
            DiagnosticCode::DuplicateLocation => "duplicate-location",
            DiagnosticCode::BadEdgeEndpoint => "bad-edge-endpoint",
            DiagnosticCode::BadLabelArity => "bad-label-arity",
            DiagnosticCode::BadConfigLocation => "bad-config-location",
            DiagnosticCode::BadConfigArity => "bad-config-arity",
            DiagnosticCode::NegativeCounter => "negative-counter",
            DiagnosticCode::BadObjectiveLocation => "bad-objective-location",
            DiagnosticCode::EmptyLocationSet => "empty-location-set",
            DiagnosticCode::AxisZeroDimension => "axis-zero-dimension",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Diagnostic {
    pub code: DiagnosticCode,
    /// The offending element, e.g. `edge 3` or `location foo`.
    pub element: String,
    pub message: String,
}

impl Diagnostic {
    fn new(code: DiagnosticCode, element: impl Into<String>, message: impl Into<String>) -> Self {
        Diagnostic {
            code,
            element: element.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ({}): {}",
            self.code.as_str(),
            self.element,
            self.message
        )
    }
}

pub fn is_identifier(name: &str) -> bool {
    !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '+' | '-'))
}

/// Checks the structural invariants of a counter system.
pub fn validate(system: &CounterSystem) -> Vec<Diagnostic> {
    use DiagnosticCode::*;
    let mut out = Vec::new();
    if system.dimension == 0 {
        out.push(Diagnostic::new(
            ZeroDimension,
            "dim",
            "dimension must be positive",
        ));
    }
    let mut seen = HashSet::new();
    for loc in &system.locations {
        if !is_identifier(&loc.name) {
            out.push(Diagnostic::new(
                BadIdentifier,
                format!("location {}", loc.name),
                "names must match [A-Za-z0-9_.+-]+",
            ));
        }
        if !seen.insert(loc.name.as_str()) {
            out.push(Diagnostic::new(
                DuplicateLocation,
                format!("location {}", loc.name),
                "location name declared twice",
            ));
        }
    }
    let n = system.locations.len();
    for (i, e) in system.edges.iter().enumerate() {
        if e.src >= n || e.dst >= n {
            out.push(Diagnostic::new(
                BadEdgeEndpoint,
                format!("edge {i}"),
                format!("endpoints ({}, {}) but only {n} locations", e.src, e.dst),
            ));
        }
        if e.label.len() != system.dimension {
            out.push(Diagnostic::new(
                BadLabelArity,
                format!("edge {i}"),
                format!(
                    "label has {} components, dimension is {}",
                    e.label.len(),
                    system.dimension
                ),
            ));
        }
    }
    out
}

fn check_config(
    out: &mut Vec<Diagnostic>,
    what: &str,
    config: &Configuration,
    system: &CounterSystem,
    semantics: Semantics,
) {
    use DiagnosticCode::*;
    if config.location >= system.num_locations() {
        out.push(Diagnostic::new(
            BadConfigLocation,
            what,
            "location does not exist",
        ));
    }
    if config.counters.len() != system.dimension {
        out.push(Diagnostic::new(
            BadConfigArity,
            what,
            format!(
                "{} counters, dimension is {}",
                config.counters.len(),
                system.dimension
            ),
        ));
    }
    if semantics.is_nonnegative() && config.counters.iter().any(|&c| c < 0) {
        out.push(Diagnostic::new(
            NegativeCounter,
            what,
            format!("negative counter under {semantics} semantics"),
        ));
    }
}

/// Checks the system plus the instance-level invariants.
pub fn validate_instance(game: &GameInstance) -> Vec<Diagnostic> {
    use DiagnosticCode::*;
    let mut out = validate(&game.system);
    let sys = &game.system;
    check_config(&mut out, "init", &game.initial, sys, game.semantics);
    match &game.objective {
        Objective::SingleConfig(c) => check_config(&mut out, "objective", c, sys, game.semantics),
        Objective::LocationsAtZero(set) | Objective::AxisZero(set) => {
            if set.is_empty() {
                out.push(Diagnostic::new(
                    EmptyLocationSet,
                    "objective",
                    "location set is empty",
                ));
            }
            if set.iter().any(|&q| q >= sys.num_locations()) {
                out.push(Diagnostic::new(
                    BadObjectiveLocation,
                    "objective",
                    "objective refers to a missing location",
                ));
            }
            if matches!(game.objective, Objective::AxisZero(_)) && sys.dimension != 2 {
                out.push(Diagnostic::new(
                    AxisZeroDimension,
                    "objective",
                    "axiszero objectives need dimension 2",
                ));
            }
        }
    }
    out
}

/// Edges the owner of `config.location` may take, in declaration order.
pub fn enabled_edges(
    system: &CounterSystem,
    semantics: Semantics,
    config: &Configuration,
) -> Vec<usize> {
    system
        .outgoing(config.location)
        .filter(|(_, e)| is_enabled(semantics, config, e))
        .map(|(i, _)| i)
        .collect()
}

pub(crate) fn is_enabled(semantics: Semantics, config: &Configuration, edge: &Edge) -> bool {
    match semantics {
        Semantics::Z | Semantics::NonBlockingVass => true,
        Semantics::Vass => config
            .counters
            .iter()
            .zip(&edge.label)
            .all(|(x, v)| x + v >= 0),
    }
}

/// Moves along `edge` from `config`.
pub fn apply_edge(
    semantics: Semantics,
    config: &Configuration,
    edge: &Edge,
) -> Result<Configuration> {
    if edge.src != config.location {
        return Err(GameError::Contract(format!(
            "edge leaves location {} but configuration is at {}",
            edge.src, config.location
        )));
    }
    if edge.label.len() != config.counters.len() {
        return Err(GameError::Contract(
            "label arity differs from counter arity".into(),
        ));
    }
    if !is_enabled(semantics, config, edge) {
        return Err(GameError::Contract(format!(
            "edge to {} with label {:?} is disabled at counters {:?}",
            edge.dst, edge.label, config.counters
        )));
    }
    Ok(Configuration {
        location: edge.dst,
        counters: step_counters(semantics, &config.counters, &edge.label),
    })
}

pub(crate) fn step_counters(semantics: Semantics, counters: &[i64], label: &[i64]) -> Vec<i64> {
    counters
        .iter()
        .zip(label)
        .map(|(x, v)| match semantics {
            Semantics::NonBlockingVass => (x + v).max(0),
            Semantics::Z | Semantics::Vass => x + v,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn two_loc(dim: usize, labels: &[Vec<i64>]) -> CounterSystem {
        let mut s = CounterSystem::new(dim);
        let q = s.add_location("q", Player::Reacher);
        let r = s.add_location("r", Player::Opponent);
        for l in labels {
            s.add_edge(q, l.clone(), r);
        }
        s
    }

    #[test]
    fn validate_reports_bad_endpoint() {
        let mut s = two_loc(1, &[]);
        s.add_edge(0, vec![0], 7);
        let d = validate(&s);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].code, DiagnosticCode::BadEdgeEndpoint);
        assert_eq!(d[0].code.as_str(), "bad-edge-endpoint");
    }

    #[test]
    fn validate_reports_label_arity() {
        let s = two_loc(2, &[vec![1]]);
        let d = validate(&s);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].code.as_str(), "bad-label-arity");
    }

    #[test]
    fn validate_accepts_well_formed() {
        assert!(validate(&two_loc(1, &[vec![1], vec![-1]])).is_empty());
    }

    #[test]
    fn validate_rejects_duplicates_and_bad_names() {
        let mut s = CounterSystem::new(1);
        s.add_location("a", Player::Reacher);
        s.add_location("a", Player::Reacher);
        s.add_location("b c", Player::Reacher);
        let codes: Vec<_> = validate(&s).into_iter().map(|d| d.code).collect();
        assert_eq!(
            codes,
            vec![
                DiagnosticCode::DuplicateLocation,
                DiagnosticCode::BadIdentifier
            ]
        );
    }

    #[test]
    fn short_range() {
        assert!(two_loc(2, &[vec![-1, 0], vec![1, 1]]).is_short_range());
        assert!(!two_loc(1, &[vec![2]]).is_short_range());
        assert!(two_loc(1, &[]).is_short_range());
    }

    #[test]
    fn enabled_edges_per_semantics() {
        let s = two_loc(2, &[vec![-1, 0], vec![0, -1]]);
        let c = Configuration::new(0, vec![0, 2]);
        assert_eq!(enabled_edges(&s, Semantics::Vass, &c), vec![1]);
        assert_eq!(enabled_edges(&s, Semantics::Z, &c), vec![0, 1]);
        let s1 = two_loc(1, &[vec![-1]]);
        let c1 = Configuration::new(0, vec![0]);
        assert_eq!(enabled_edges(&s1, Semantics::NonBlockingVass, &c1), vec![0]);
    }

    #[test]
    fn apply_edge_examples() {
        let e = Edge {
            src: 0,
            label: vec![-3],
            dst: 1,
        };
        let c = Configuration::new(0, vec![2]);
        assert_eq!(
            apply_edge(Semantics::NonBlockingVass, &c, &e).unwrap(),
            Configuration::new(1, vec![0])
        );
        let e = Edge {
            src: 0,
            label: vec![-1],
            dst: 1,
        };
        let c = Configuration::new(0, vec![-2]);
        assert_eq!(
            apply_edge(Semantics::Z, &c, &e).unwrap(),
            Configuration::new(1, vec![-3])
        );
        let e = Edge {
            src: 0,
            label: vec![0, -1],
            dst: 1,
        };
        let c = Configuration::new(0, vec![1, 1]);
        assert_eq!(
            apply_edge(Semantics::Vass, &c, &e).unwrap(),
            Configuration::new(1, vec![1, 0])
        );
    }

    #[test]
    fn apply_disabled_vass_edge_is_contract_error() {
        let e = Edge {
            src: 0,
            label: vec![-1],
            dst: 1,
        };
        let c = Configuration::new(0, vec![0]);
        assert!(matches!(
            apply_edge(Semantics::Vass, &c, &e),
            Err(GameError::Contract(_))
        ));
    }

    #[test]
    fn objective_membership() {
        let single = Objective::SingleConfig(Configuration::new(1, vec![2]));
        assert!(single.contains(&Configuration::new(1, vec![2])));
        assert!(!single.contains(&Configuration::new(1, vec![3])));
        let zero = Objective::LocationsAtZero(BTreeSet::from([0]));
        assert!(zero.contains(&Configuration::new(0, vec![0, 0])));
        assert!(!zero.contains(&Configuration::new(0, vec![0, 1])));
        assert!(!zero.contains(&Configuration::new(1, vec![0, 0])));
        let axis = Objective::AxisZero(BTreeSet::from([0]));
        assert!(axis.contains(&Configuration::new(0, vec![0, 5])));
        assert!(axis.contains(&Configuration::new(0, vec![4, 0])));
        assert!(!axis.contains(&Configuration::new(0, vec![1, 1])));
        assert!(!axis.contains(&Configuration::new(0, vec![0, -1])));
        assert!(!axis.contains(&Configuration::new(1, vec![0, 0])));
    }

    #[test]
    fn instance_validation_rejects_negative_vass_init() {
        let s = two_loc(1, &[vec![0]]);
        let r = GameInstance::new(
            s,
            Semantics::Vass,
            Objective::SingleConfig(Configuration::new(1, vec![0])),
            Configuration::new(0, vec![-1]),
        );
        match r {
            Err(GameError::Invalid(d)) => assert_eq!(d[0].code, DiagnosticCode::NegativeCounter),
            other => panic!("unexpected {other:?}"),
        }
        let s = two_loc(1, &[vec![0]]);
        let r = GameInstance::new(
            s,
            Semantics::Vass,
            Objective::AxisZero(BTreeSet::from([0])),
            Configuration::new(0, vec![0]),
        );
        assert!(r.is_err());
    }

    fn semantics_strategy() -> impl Strategy<Value = Semantics> {
        prop_oneof![
            Just(Semantics::Z),
            Just(Semantics::Vass),
            Just(Semantics::NonBlockingVass)
        ]
    }

    proptest! {
        #[test]
        fn apply_edge_laws(
            sem in semantics_strategy(),
            counters in proptest::collection::vec(0i64..6, 2),
            label in proptest::collection::vec(-4i64..4, 2),
        ) {
            let e = Edge { src: 0, label: label.clone(), dst: 0 };
            let c = Configuration::new(0, counters.clone());
            let sum: Vec<i64> = counters.iter().zip(&label).map(|(a, b)| a + b).collect();
            match apply_edge(sem, &c, &e) {
                Ok(out) => {
                    match sem {
                        Semantics::Z | Semantics::Vass => prop_assert_eq!(&out.counters, &sum),
                        Semantics::NonBlockingVass => {
                            for (o, s) in out.counters.iter().zip(&sum) {
                                prop_assert!(*o >= *s && *o >= 0);
                                if *s >= 0 { prop_assert_eq!(o, s); }
                            }
                        }
                    }
                    if sem.is_nonnegative() {
                        prop_assert!(out.counters.iter().all(|&x| x >= 0));
                    }
                }
                Err(_) => {
                    prop_assert_eq!(sem, Semantics::Vass);
                    prop_assert!(sum.iter().any(|&x| x < 0));
                }
            }
        }

        #[test]
        fn nonnegative_labels_always_enabled_in_vass(
            counters in proptest::collection::vec(0i64..4, 1),
            labels in proptest::collection::vec(0i64..3, 0..4),
        ) {
            let s = two_loc(1, &labels.iter().map(|&l| vec![l]).collect::<Vec<_>>());
            let c = Configuration::new(0, counters);
            let all: Vec<usize> = (0..labels.len()).collect();
            prop_assert_eq!(enabled_edges(&s, Semantics::Vass, &c), all.clone());
            prop_assert_eq!(enabled_edges(&s, Semantics::Z, &c), all.clone());
            prop_assert_eq!(enabled_edges(&s, Semantics::NonBlockingVass, &c), all);
        }
    }
}
