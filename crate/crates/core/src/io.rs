//! The `crg-v1` line format and a seeded instance generator.
//!
//! ```text
//! crg-v1
//! dim 1
//! semantics nbvass
//! loc q0 R
//! loc qf R
//! edge q0 qf 8
//! edge qf qf -1
//! init q0 0
//! objective single qf 0
//! ```
//!
//! `#` starts a comment that runs to the end of the line. `dim` must come
//! before any directive that carries counter values, and locations must be
//! declared before they are referenced.

use std::collections::{BTreeSet, HashMap};
use std::ops::RangeInclusive;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{GameError, ParseError, Result};
use crate::game::{Configuration, CounterSystem, GameInstance, Objective, Player, Semantics};

pub const HEADER: &str = "crg-v1";

struct Token<'a> {
    column: usize,
    text: &'a str,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let body = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in body.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push(Token {
                    column: s + 1,
                    text: &body[s..i],
                });
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(Token {
            column: s + 1,
            text: &body[s..],
        });
    }
    out
}

struct Parser {
    line: usize,
    system: Option<CounterSystem>,
    names: HashMap<String, usize>,
    semantics: Option<Semantics>,
    initial: Option<Configuration>,
    objective: Option<Objective>,
}

impl Parser {
    fn err(&self, column: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column,
            message: message.into(),
        }
    }

    fn system(&mut self, tok: &Token) -> std::result::Result<&mut CounterSystem, ParseError> {
        let line = self.line;
        self.system.as_mut().ok_or_else(|| ParseError {
            line,
            column: tok.column,
            message: format!("`{}` before `dim`", tok.text),
        })
    }

    fn location(&self, tok: &Token) -> std::result::Result<usize, ParseError> {
        self.names
            .get(tok.text)
            .copied()
            .ok_or_else(|| self.err(tok.column, format!("unknown location `{}`", tok.text)))
    }

    fn int(&self, tok: &Token) -> std::result::Result<i64, ParseError> {
        let digits = tok.text.strip_prefix('-').unwrap_or(tok.text);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(self.err(
                tok.column,
                format!("expected an integer, found `{}`", tok.text),
            ));
        }
        tok.text
            .parse()
            .map_err(|_| self.err(tok.column, format!("integer `{}` out of range", tok.text)))
    }

    fn vector(&self, head: &Token, toks: &[Token]) -> std::result::Result<Vec<i64>, ParseError> {
        let d = self.system.as_ref().map(|s| s.dimension).unwrap_or(0);
        if toks.len() != d {
            let column = toks.get(d).map(|t| t.column).unwrap_or(head.column);
            return Err(self.err(
                column,
                format!(
                    "`{}` expects {d} counter values, found {}",
                    head.text,
                    toks.len()
                ),
            ));
        }
        toks.iter().map(|t| self.int(t)).collect()
    }

    fn arity(&self, toks: &[Token], expected: usize) -> std::result::Result<(), ParseError> {
        if toks.len() != expected {
            let column = toks
                .get(expected)
                .map(|t| t.column)
                .unwrap_or(toks[0].column);
            return Err(self.err(
                column,
                format!(
                    "`{}` takes {} argument(s), found {}",
                    toks[0].text,
                    expected - 1,
                    toks.len() - 1
                ),
            ));
        }
        Ok(())
    }

    fn directive(&mut self, toks: &[Token]) -> std::result::Result<(), ParseError> {
        let head = &toks[0];
        match head.text {
            "dim" => {
                self.arity(toks, 2)?;
                if self.system.is_some() {
                    return Err(self.err(head.column, "duplicate `dim`"));
                }
                let d = self.int(&toks[1])?;
                if d < 1 {
                    return Err(self.err(toks[1].column, "dimension must be positive"));
                }
                self.system = Some(CounterSystem::new(d as usize));
            }
            "semantics" => {
                self.arity(toks, 2)?;
                if self.semantics.is_some() {
                    return Err(self.err(head.column, "duplicate `semantics`"));
                }
                let s = toks[1]
                    .text
                    .parse()
                    .map_err(|_| self.err(toks[1].column, "semantics must be z, vass or nbvass"))?;
                self.semantics = Some(s);
            }
            "loc" => {
                self.arity(toks, 3)?;
                let owner = match toks[2].text {
                    "R" => Player::Reacher,
                    "O" => Player::Opponent,
                    _ => return Err(self.err(toks[2].column, "owner must be R or O")),
                };
                let name = toks[1].text.to_string();
                if self.names.contains_key(&name) {
                    return Err(self.err(toks[1].column, format!("duplicate location `{name}`")));
                }
                let idx = self.system(head)?.add_location(name.clone(), owner);
                self.names.insert(name, idx);
            }
            "edge" => {
                if toks.len() < 3 {
                    return Err(
                        self.err(head.column, "`edge` needs a source, a target and a label")
                    );
                }
                self.system(head)?;
                let src = self.location(&toks[1])?;
                let dst = self.location(&toks[2])?;
                let label = self.vector(head, &toks[3..])?;
                self.system(head)?.add_edge(src, label, dst);
            }
            "init" => {
                if self.initial.is_some() {
                    return Err(self.err(head.column, "duplicate `init`"));
                }
                self.system(head)?;
                if toks.len() < 2 {
                    return Err(self.err(head.column, "`init` needs a location"));
                }
                let q = self.location(&toks[1])?;
                let x = self.vector(head, &toks[2..])?;
                self.initial = Some(Configuration::new(q, x));
            }
            "objective" => {
                if self.objective.is_some() {
                    return Err(self.err(head.column, "duplicate `objective`"));
                }
                self.system(head)?;
                let Some(kind) = toks.get(1) else {
                    return Err(self.err(head.column, "`objective` needs a kind"));
                };
                let objective = match kind.text {
                    "single" => {
                        let Some(loc) = toks.get(2) else {
                            return Err(self.err(kind.column, "`single` needs a location"));
                        };
                        let q = self.location(loc)?;
                        Objective::SingleConfig(Configuration::new(
                            q,
                            self.vector(head, &toks[3..])?,
                        ))
                    }
                    "zeroset" | "axiszero" => {
                        if toks.len() < 3 {
                            return Err(self.err(
                                kind.column,
                                format!("`{}` needs at least one location", kind.text),
                            ));
                        }
                        let mut set = BTreeSet::new();
                        for t in &toks[2..] {
                            if !set.insert(self.location(t)?) {
                                return Err(self
                                    .err(t.column, format!("location `{}` listed twice", t.text)));
                            }
                        }
                        if kind.text == "zeroset" {
                            Objective::LocationsAtZero(set)
                        } else {
                            Objective::AxisZero(set)
                        }
                    }
                    other => {
                        return Err(self.err(
                            kind.column,
                            format!(
                                "unknown objective kind `{other}` (single, zeroset or axiszero)"
                            ),
                        ))
                    }
                };
                self.objective = Some(objective);
            }
            other => return Err(self.err(head.column, format!("unknown directive `{other}`"))),
        }
        Ok(())
    }
}

/// Parses a `crg-v1` document and validates the resulting instance.
pub fn parse(text: &str) -> Result<GameInstance> {
    let mut p = Parser {
        line: 0,
        system: None,
        names: HashMap::new(),
        semantics: None,
        initial: None,
        objective: None,
    };
    let mut seen_header = false;
    for (i, line) in text.lines().enumerate() {
        p.line = i + 1;
        let toks = tokens(line);
        if toks.is_empty() {
            continue;
        }
        if !seen_header {
            if toks.len() != 1 || toks[0].text != HEADER {
                return Err(p
                    .err(toks[0].column, format!("expected header `{HEADER}`"))
                    .into());
            }
            seen_header = true;
            continue;
        }
        p.directive(&toks)?;
    }
    p.line += 1;
    if !seen_header {
        return Err(p.err(1, format!("missing header `{HEADER}`")).into());
    }
    let missing = |what: &str| GameError::from(p.err(1, format!("missing `{what}`")));
    let system = p.system.clone().ok_or_else(|| missing("dim"))?;
    let semantics = p.semantics.ok_or_else(|| missing("semantics"))?;
    let initial = p.initial.clone().ok_or_else(|| missing("init"))?;
    let objective = p.objective.clone().ok_or_else(|| missing("objective"))?;
    GameInstance::new(system, semantics, objective, initial)
}

fn push_vector(out: &mut String, v: &[i64]) {
    for x in v {
        out.push(' ');
        out.push_str(&x.to_string());
    }
}

/// Canonical text: header, dim, semantics, locations, edges, init, objective.
pub fn serialize(game: &GameInstance) -> String {
    let s = &game.system;
    let mut out = format!(
        "{HEADER}\ndim {}\nsemantics {}\n",
        s.dimension,
        game.semantics.keyword()
    );
    for loc in &s.locations {
        let owner = match loc.owner {
            Player::Reacher => 'R',
            Player::Opponent => 'O',
        };
        out.push_str(&format!("loc {} {owner}\n", loc.name));
    }
    for e in &s.edges {
        out.push_str(&format!("edge {} {}", s.name(e.src), s.name(e.dst)));
        push_vector(&mut out, &e.label);
        out.push('\n');
    }
    out.push_str(&format!("init {}", s.name(game.initial.location)));
    push_vector(&mut out, &game.initial.counters);
    out.push('\n');
    match &game.objective {
        Objective::SingleConfig(c) => {
            out.push_str(&format!("objective single {}", s.name(c.location)));
            push_vector(&mut out, &c.counters);
        }
        Objective::LocationsAtZero(set) | Objective::AxisZero(set) => {
            let kind = if matches!(game.objective, Objective::AxisZero(_)) {
                "axiszero"
            } else {
                "zeroset"
            };
            out.push_str(&format!("objective {kind}"));
            for &q in set {
                out.push(' ');
                out.push_str(s.name(q));
            }
        }
    }
    out.push('\n');
    out
}

/// Canonical text preceded by one `#` comment line per note.
pub fn serialize_with_notes(game: &GameInstance, notes: &[String]) -> String {
    let mut out = String::new();
    for note in notes {
        out.push_str("# ");
        out.push_str(&note.replace(['\n', '\r'], " "));
        out.push('\n');
    }
    out.push_str(&serialize(game));
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ObjectiveKind {
    /// Single configuration; owner of the objective location by coin flip.
    Single,
    /// Single configuration at a Reacher location.
    SingleReacher,
    /// Zero on a random nonempty location set.
    ZeroSet,
    /// Some counter zero on a random nonempty set of Reacher locations.
    AxisZero,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenParams {
    pub num_locations: RangeInclusive<usize>,
    pub dimension: usize,
    /// Largest absolute value of a label component.
    pub label_bound: i64,
    pub edges_per_location: RangeInclusive<usize>,
    pub semantics: Semantics,
    pub objective_kind: ObjectiveKind,
    pub reacher_fraction: f64,
    /// Largest absolute value of an initial or objective counter.
    pub value_bound: i64,
    /// Pins the counters of a single-configuration objective.
    pub objective_value: Option<Vec<i64>>,
}

impl GenParams {
    pub fn new(dimension: usize, semantics: Semantics) -> GenParams {
        GenParams {
            num_locations: 1..=4,
            dimension,
            label_bound: 1,
            edges_per_location: 1..=2,
            semantics,
            objective_kind: ObjectiveKind::Single,
            reacher_fraction: 0.5,
            value_bound: 4,
            objective_value: None,
        }
    }

    pub fn check(&self) -> Result<()> {
        let bad = |m: &str| Err(GameError::Usage(format!("bad generator parameters: {m}")));
        if *self.num_locations.start() < 1 || self.num_locations.is_empty() {
            return bad("num_locations must be a nonempty range of positive counts");
        }
        if self.dimension < 1 {
            return bad("dimension must be positive");
        }
        if self.label_bound < 0 || self.value_bound < 0 {
            return bad("bounds must be nonnegative");
        }
        if *self.edges_per_location.start() < 1 || self.edges_per_location.is_empty() {
            return bad("every location needs at least one outgoing edge");
        }
        if !(0.0..=1.0).contains(&self.reacher_fraction) {
            return bad("reacher_fraction must lie in [0, 1]");
        }
        if self.objective_kind == ObjectiveKind::AxisZero && self.dimension != 2 {
            return bad("axiszero objectives need dimension 2");
        }
        if let Some(v) = &self.objective_value {
            if v.len() != self.dimension {
                return bad("objective_value arity differs from dimension");
            }
            if self.semantics.is_nonnegative() && v.iter().any(|&x| x < 0) {
                return bad("objective_value must be nonnegative under this semantics");
            }
        }
        Ok(())
    }
}

fn random_vector(rng: &mut ChaCha8Rng, d: usize, bound: i64, nonnegative: bool) -> Vec<i64> {
    let lo = if nonnegative { 0 } else { -bound };
    (0..d).map(|_| rng.gen_range(lo..=bound)).collect()
}

fn random_subset(rng: &mut ChaCha8Rng, n: usize) -> BTreeSet<usize> {
    let mut all: Vec<usize> = (0..n).collect();
    all.shuffle(rng);
    let k = rng.gen_range(1..=n);
    all.into_iter().take(k).collect()
}

/// Deterministic in `(params, seed)`.
pub fn generate(params: &GenParams, seed: u64) -> Result<GameInstance> {
    params.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(params.num_locations.clone());
    let d = params.dimension;
    let mut system = CounterSystem::new(d);
    for q in 0..n {
        let owner = if rng.gen_bool(params.reacher_fraction) {
            Player::Reacher
        } else {
            Player::Opponent
        };
        system.add_location(format!("q{q}"), owner);
    }
    for q in 0..n {
        for _ in 0..rng.gen_range(params.edges_per_location.clone()) {
            let dst = rng.gen_range(0..n);
            let label = random_vector(&mut rng, d, params.label_bound, false);
            system.add_edge(q, label, dst);
        }
    }
    let nonneg = params.semantics.is_nonnegative();
    let objective = match params.objective_kind {
        ObjectiveKind::Single | ObjectiveKind::SingleReacher => {
            let q = rng.gen_range(0..n);
            let owner =
                if params.objective_kind == ObjectiveKind::SingleReacher || rng.gen_bool(0.5) {
                    Player::Reacher
                } else {
                    Player::Opponent
                };
            system.locations[q].owner = owner;
            let x = match &params.objective_value {
                Some(v) => v.clone(),
                None => random_vector(&mut rng, d, params.value_bound, nonneg),
            };
            Objective::SingleConfig(Configuration::new(q, x))
        }
        ObjectiveKind::ZeroSet => Objective::LocationsAtZero(random_subset(&mut rng, n)),
        ObjectiveKind::AxisZero => {
            let set = random_subset(&mut rng, n);
            for &q in &set {
                system.locations[q].owner = Player::Reacher;
            }
            Objective::AxisZero(set)
        }
    };
    let q0 = rng.gen_range(0..n);
    let x0 = random_vector(&mut rng, d, params.value_bound, nonneg);
    GameInstance::new(
        system,
        params.semantics,
        objective,
        Configuration::new(q0, x0),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::validate_instance;
    use proptest::prelude::*;

    const MINIMAL: &str =
        "crg-v1\ndim 1\nsemantics z\nloc a R\nedge a a 0\ninit a 0\nobjective single a 0\n";

    fn parse_err(text: &str) -> ParseError {
        match parse(text) {
            Err(GameError::Parse(e)) => e,
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn minimal_file() {
        let g = parse(MINIMAL).unwrap();
        assert_eq!(g.system.num_locations(), 1);
        assert_eq!(serialize(&g), MINIMAL);
    }

    #[test]
    fn label_arity_error_has_position() {
        let text = MINIMAL
            .replace("edge a a 0", "edge a b 1 2")
            .replace("loc a R", "loc a R\nloc b O");
        let e = parse_err(&text);
        assert_eq!(e.line, 6);
        assert_eq!(e.column, 12);
        assert!(e.message.contains("expects 1"));
    }

    #[test]
    fn strictness() {
        assert!(
            parse_err(&MINIMAL.replace("init a 0\n", "init a 0\ninit a 0\n"))
                .message
                .contains("duplicate")
        );
        assert!(parse_err(&MINIMAL.replace(
            "objective single a 0\n",
            "objective single a 0\nobjective single a 0\n"
        ))
        .message
        .contains("duplicate"));
        assert!(parse_err(&format!("{MINIMAL}frobnicate 3\n"))
            .message
            .contains("unknown directive"));
        assert!(parse_err(&MINIMAL.replace("crg-v1", "crg-v2"))
            .message
            .contains("header"));
        assert!(parse_err(&MINIMAL.replace("edge a a 0", "edge a a +1"))
            .message
            .contains("integer"));
        assert!(parse_err(&MINIMAL.replace("edge a a 0", "edge a zz 0"))
            .message
            .contains("unknown location"));
        assert!(parse_err(&MINIMAL.replace("loc a R", "loc a X"))
            .message
            .contains("owner"));
        assert_eq!(
            parse_err(&MINIMAL.replace("init a 0\n", "")).message,
            "missing `init`"
        );
        assert!(parse_err(&MINIMAL.replace("dim 1\n", ""))
            .message
            .contains("before `dim`"));
    }

    #[test]
    fn semantic_errors_are_diagnostics() {
        let text = MINIMAL
            .replace("semantics z", "semantics vass")
            .replace("init a 0", "init a -1");
        assert!(matches!(parse(&text), Err(GameError::Invalid(_))));
    }

    #[test]
    fn comments_and_notes() {
        let g = parse(MINIMAL).unwrap();
        let with = serialize_with_notes(&g, &["first note".into(), "two\nlines".into()]);
        assert!(with.starts_with("# first note\n# two lines\ncrg-v1\n"));
        assert_eq!(parse(&with).unwrap(), g);
        let trailing = MINIMAL.replace("edge a a 0", "edge a a 0   # loop");
        assert_eq!(parse(&trailing).unwrap(), g);
    }

    #[test]
    fn set_objectives_roundtrip() {
        let text = "crg-v1\ndim 2\nsemantics vass\nloc a R\nloc b O\nedge a b 1 -1\nedge b a 0 0\ninit b 3 1\nobjective axiszero a\n";
        assert_eq!(serialize(&parse(text).unwrap()), text);
        let z = text.replace("axiszero a", "zeroset a b");
        assert_eq!(serialize(&parse(&z).unwrap()), z);
    }

    #[test]
    fn generator_is_deterministic() {
        let p = GenParams::new(1, Semantics::Vass);
        assert_eq!(
            serialize(&generate(&p, 7).unwrap()),
            serialize(&generate(&p, 7).unwrap())
        );
        assert_ne!(
            serialize(&generate(&p, 7).unwrap()),
            serialize(&generate(&p, 8).unwrap())
        );
    }

    #[test]
    fn generator_respects_params_on_many_seeds() {
        for (d, sem, kind) in [
            (1, Semantics::Z, ObjectiveKind::Single),
            (1, Semantics::Vass, ObjectiveKind::SingleReacher),
            (1, Semantics::NonBlockingVass, ObjectiveKind::ZeroSet),
            (2, Semantics::Vass, ObjectiveKind::AxisZero),
            (3, Semantics::Z, ObjectiveKind::Single),
        ] {
            let mut p = GenParams::new(d, sem);
            p.objective_kind = kind;
            p.num_locations = 2..=5;
            for seed in 0..1000 {
                let g = generate(&p, seed).unwrap();
                assert!(validate_instance(&g).is_empty());
                let s = &g.system;
                assert!(p.num_locations.contains(&s.num_locations()));
                assert!(s.is_short_range());
                for q in 0..s.num_locations() {
                    assert!(p.edges_per_location.contains(&s.outgoing(q).count()));
                }
                if sem.is_nonnegative() {
                    assert!(g.initial.counters.iter().all(|&x| x >= 0));
                }
                match (&g.objective, kind) {
                    (Objective::SingleConfig(c), ObjectiveKind::SingleReacher) => {
                        assert_eq!(s.owner(c.location), Player::Reacher)
                    }
                    (Objective::AxisZero(set), _) => {
                        assert!(set.iter().all(|&q| s.owner(q) == Player::Reacher))
                    }
                    _ => {}
                }
            }
        }
    }

    #[test]
    fn pinned_objective_value() {
        let mut p = GenParams::new(1, Semantics::NonBlockingVass);
        p.objective_kind = ObjectiveKind::SingleReacher;
        p.objective_value = Some(vec![1]);
        let g = generate(&p, 3).unwrap();
        assert!(matches!(&g.objective, Objective::SingleConfig(c) if c.counters == [1]));
        p.objective_value = Some(vec![-1]);
        assert!(generate(&p, 3).is_err());
    }

    #[test]
    fn roundtrip_thousand_instances() {
        let mut p = GenParams::new(2, Semantics::Z);
        p.label_bound = 3;
        p.value_bound = 9;
        for seed in 0..1000 {
            let g = generate(&p, seed).unwrap();
            let text = serialize(&g);
            let back = parse(&text).unwrap();
            assert_eq!(back, g);
            assert_eq!(serialize(&back), text);
        }
    }

    proptest! {
        #[test]
        fn roundtrip_random_params(
            seed in any::<u64>(),
            d in 1usize..=3,
            sem in prop_oneof![Just(Semantics::Z), Just(Semantics::Vass), Just(Semantics::NonBlockingVass)],
            bound in 0i64..5,
        ) {
            let mut p = GenParams::new(d, sem);
            p.label_bound = bound;
            p.objective_kind = if seed % 2 == 0 { ObjectiveKind::Single } else { ObjectiveKind::ZeroSet };
            let g = generate(&p, seed).unwrap();
            prop_assert_eq!(parse(&serialize(&g)).unwrap(), g);
        }

        #[test]
        fn distinct_instances_serialize_differently(a in 0u64..200, b in 0u64..200) {
            let p = GenParams::new(1, Semantics::Z);
            let (ga, gb) = (generate(&p, a).unwrap(), generate(&p, b).unwrap());
            prop_assert_eq!(ga == gb, serialize(&ga) == serialize(&gb));
        }
    }
}
