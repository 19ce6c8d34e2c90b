//! Checks reductions by solving source and target instances with the bounded
//! oracle and comparing certain verdicts at the initial configurations.

use std::fmt::Write as _;

use crate::error::Result;
use crate::game::{GameInstance, Objective, Player, Semantics};
use crate::io::{generate, serialize, GenParams};
use crate::oracle::{certain_region, Verdict, Window};
use crate::reductions::{normalize_reacher_objective, GadgetVariant, Reduction, ReductionOutput};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TrialOutcome {
    Agree,
    Disagree,
    SkippedUnknown,
}

impl TrialOutcome {
    pub fn keyword(self) -> &'static str {
        match self {
            TrialOutcome::Agree => "agree",
            TrialOutcome::Disagree => "disagree",
            TrialOutcome::SkippedUnknown => "skipped",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialRecord {
    pub seed: Option<u64>,
    pub source_verdict: Verdict,
    pub target_verdict: Verdict,
    pub source_window: Window,
    pub target_window: Window,
    pub outcome: TrialOutcome,
    /// `(locations, edges)` of the source and target systems.
    pub source_size: (usize, usize),
    pub target_size: (usize, usize),
    pub target_short_range: bool,
    /// Both instances in `crg-v1`, kept for disagreements only.
    pub source_text: Option<String>,
    pub target_text: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub reduction: Reduction,
    pub variant: GadgetVariant,
    pub trials: usize,
    pub agreements: usize,
    pub disagreements: usize,
    pub skipped_unknown: usize,
    pub records: Vec<TrialRecord>,
}

impl VerificationReport {
    fn new(reduction: Reduction, variant: GadgetVariant) -> Self {
        VerificationReport {
            reduction,
            variant,
            trials: 0,
            agreements: 0,
            disagreements: 0,
            skipped_unknown: 0,
            records: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.disagreements == 0
    }

    pub fn push(&mut self, record: TrialRecord) {
        self.trials += 1;
        match record.outcome {
            TrialOutcome::Agree => self.agreements += 1,
            TrialOutcome::Disagree => self.disagreements += 1,
            TrialOutcome::SkippedUnknown => self.skipped_unknown += 1,
        }
        self.records.push(record);
    }

    /// `#` lines for people, `::` lines for scripts.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# verify {} (variant {})",
            self.reduction, self.variant
        );
        let _ = writeln!(
            out,
            "# {} trials: {} agree, {} disagree, {} skipped (unknown verdict)",
            self.trials, self.agreements, self.disagreements, self.skipped_unknown
        );
        for r in self
            .records
            .iter()
            .filter(|r| r.outcome == TrialOutcome::Disagree)
        {
            let seed = r.seed.map_or("-".to_string(), |s| s.to_string());
            let _ = writeln!(
                out,
                "# DISAGREEMENT seed {seed}: source {} on {}, target {} on {}",
                r.source_verdict.keyword(),
                r.source_window,
                r.target_verdict.keyword(),
                r.target_window
            );
            for (title, text) in [("source", &r.source_text), ("target", &r.target_text)] {
                let _ = writeln!(out, "# {title}:");
                for line in text.as_deref().unwrap_or("").lines() {
                    let _ = writeln!(out, "#   {line}");
                }
            }
        }
        let _ = writeln!(out, ":: reduction {}", self.reduction);
        let _ = writeln!(out, ":: variant {}", self.variant);
        let _ = writeln!(out, ":: trials {}", self.trials);
        let _ = writeln!(out, ":: agreements {}", self.agreements);
        let _ = writeln!(out, ":: disagreements {}", self.disagreements);
        let _ = writeln!(out, ":: skipped_unknown {}", self.skipped_unknown);
        for r in &self.records {
            let seed = r.seed.map_or("-".to_string(), |s| s.to_string());
            let _ = writeln!(
                out,
                ":: trial {seed} {} {} {} {} {}",
                r.source_verdict.keyword(),
                r.target_verdict.keyword(),
                r.source_window,
                r.target_window,
                r.outcome.keyword()
            );
        }
        let _ = writeln!(
            out,
            ":: status {}",
            if self.passed() { "pass" } else { "fail" }
        );
        out
    }
}

/// Window for the target instance that mirrors `source` under the reduction.
pub fn target_window(
    reduction: Reduction,
    source: &GameInstance,
    window: &Window,
    target: &GameInstance,
) -> Result<Window> {
    let w = match reduction {
        Reduction::ShiftObjectiveToZero => match &source.objective {
            Objective::SingleConfig(c) => window.shifted(&c.counters),
            _ => window.clone(),
        },
        Reduction::VassToZ => {
            let b = source.system.max_abs_label() + 1;
            Window::new(
                window
                    .bounds()
                    .iter()
                    .map(|&(lo, hi)| (lo - b, hi + b))
                    .collect(),
            )?
        }
        Reduction::ZToVass => {
            let (lo, hi) = window.bounds()[0];
            Window::uniform(1, 0, lo.abs().max(hi.abs()) + 1)?
        }
        Reduction::VassZeroToNbvassOne => Window::uniform(1, 0, window.bounds()[0].1 + 1)?,
        _ => window.clone(),
    };
    w.covering(target).forced_for(target.semantics)
}

fn needs_normalizing(reduction: Reduction, game: &GameInstance) -> bool {
    reduction.needs_reacher_objective()
        && matches!(&game.objective, Objective::SingleConfig(c) if game.owner(c.location) == Player::Opponent)
}

/// Applies the reduction, normalizing the objective owner first when the
/// construction requires it. The returned map goes from the original source.
pub fn apply_with_normalization(
    reduction: Reduction,
    variant: GadgetVariant,
    game: &GameInstance,
) -> Result<ReductionOutput> {
    if !needs_normalizing(reduction, game) {
        return reduction.apply(game, variant);
    }
    let first = normalize_reacher_objective(game)?;
    let mut second = reduction.apply(&first.game, variant)?;
    let inner = first.config_map.clone();
    let outer = second.config_map.clone();
    let mut notes = first.notes;
    notes.append(&mut second.notes);
    second.notes = notes;
    let mut fresh = first.fresh_names;
    fresh.append(&mut second.fresh_names);
    second.fresh_names = fresh;
    second.config_map = crate::reductions::ConfigMap::compose(inner, outer);
    Ok(second)
}

/// Solves one source instance and its reduction and compares the verdicts
/// at the initial configurations.
pub fn verify_instance(
    reduction: Reduction,
    variant: GadgetVariant,
    source: &GameInstance,
    window: Option<&Window>,
    seed: Option<u64>,
) -> Result<TrialRecord> {
    let out = apply_with_normalization(reduction, variant, source)?;
    let target = &out.game;
    let source_window = match window {
        Some(w) => w.covering(source),
        None => Window::default_for(source),
    }
    .forced_for(source.semantics)?;
    let target_window = target_window(reduction, source, &source_window, target)?;
    let verdict = |g: &GameInstance, w: &Window| -> Result<Verdict> {
        Ok(certain_region(g, w)?
            .verdict(&g.initial)
            .unwrap_or(Verdict::Unknown))
    };
    let source_verdict = verdict(source, &source_window)?;
    let target_verdict = verdict(target, &target_window)?;
    let outcome = if !source_verdict.is_certain() || !target_verdict.is_certain() {
        TrialOutcome::SkippedUnknown
    } else if source_verdict == target_verdict {
        TrialOutcome::Agree
    } else {
        TrialOutcome::Disagree
    };
    let keep = outcome == TrialOutcome::Disagree;
    Ok(TrialRecord {
        seed,
        source_verdict,
        target_verdict,
        source_window,
        target_window,
        outcome,
        source_size: (source.system.num_locations(), source.system.edges.len()),
        target_size: (target.system.num_locations(), target.system.edges.len()),
        target_short_range: target.system.is_short_range(),
        source_text: keep.then(|| serialize(source)),
        target_text: keep.then(|| serialize(target)),
    })
}

/// Runs `trials` seeded trials; trial `i` uses seed `seed + i`.
pub fn verify_reduction(
    reduction: Reduction,
    variant: GadgetVariant,
    params: &GenParams,
    trials: usize,
    window: Option<&Window>,
    seed: u64,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::new(reduction, variant);
    for i in 0..trials as u64 {
        let s = seed.wrapping_add(i);
        let source = generate(params, s)?;
        report.push(verify_instance(
            reduction,
            variant,
            &source,
            window,
            Some(s),
        )?);
    }
    Ok(report)
}

/// Generator parameters inside the precondition class of each reduction.
pub fn default_params(reduction: Reduction, dimension: usize) -> GenParams {
    use crate::io::ObjectiveKind;
    let mut p = GenParams::new(dimension, Semantics::Vass);
    match reduction {
        Reduction::NormalizeReacherObjective | Reduction::SplitToShortRange => {
            p.label_bound = 3;
        }
        Reduction::ShiftObjectiveToZero => {
            p.semantics = Semantics::Z;
        }
        Reduction::VassToZ => {
            p.objective_kind = ObjectiveKind::SingleReacher;
        }
        Reduction::AxisZeroToSingle => {
            p.dimension = 2;
            p.objective_kind = ObjectiveKind::AxisZero;
        }
        Reduction::ZToVass => {
            p.dimension = 1;
            p.semantics = Semantics::Z;
            p.objective_kind = ObjectiveKind::SingleReacher;
            p.objective_value = Some(vec![0]);
        }
        Reduction::NbvassOneToVassZero => {
            p.dimension = 1;
            p.semantics = Semantics::NonBlockingVass;
            p.objective_kind = ObjectiveKind::SingleReacher;
            p.objective_value = Some(vec![1]);
        }
        Reduction::VassZeroToNbvassOne => {
            p.dimension = 1;
            p.label_bound = 3;
            p.value_bound = 5;
            p.objective_kind = ObjectiveKind::SingleReacher;
            p.objective_value = Some(vec![0]);
        }
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_trials_pass() {
        let p = default_params(Reduction::VassToZ, 1);
        let r =
            verify_reduction(Reduction::VassToZ, GadgetVariant::Figure, &p, 0, None, 1).unwrap();
        assert_eq!(r.trials, 0);
        assert!(r.passed());
        assert!(r.render().contains(":: status pass"));
    }

    #[test]
    fn counts_add_up_and_render_is_stable() {
        for reduction in Reduction::ALL {
            let p = default_params(reduction, 1);
            let w = Window::uniform(p.dimension, 0, 6).unwrap();
            let w = if p.semantics == Semantics::Z {
                Window::uniform(p.dimension, -6, 6).unwrap()
            } else {
                w
            };
            let a =
                verify_reduction(reduction, GadgetVariant::Figure, &p, 12, Some(&w), 40).unwrap();
            let b =
                verify_reduction(reduction, GadgetVariant::Figure, &p, 12, Some(&w), 40).unwrap();
            assert_eq!(a.trials, a.agreements + a.disagreements + a.skipped_unknown);
            assert!(a.passed(), "{}", a.render());
            assert_eq!(a.render(), b.render());
        }
    }

    #[test]
    fn normalization_is_composed() {
        let mut p = default_params(Reduction::VassToZ, 1);
        p.objective_kind = crate::io::ObjectiveKind::Single;
        let w = Window::uniform(1, 0, 6).unwrap();
        let r = verify_reduction(
            Reduction::VassToZ,
            GadgetVariant::Figure,
            &p,
            30,
            Some(&w),
            0,
        )
        .unwrap();
        assert!(r.passed(), "{}", r.render());
        assert!(r.agreements > 0);
    }
}
