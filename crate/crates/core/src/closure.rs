//! Split-closure sequences and split closures.
//!
//! A closure run starts from an irreducible system `Σ_0` and repeatedly
//! replaces `Σ_i` by `(Σ_i ∪ θ(𝒜))⁻` for some nontrivial application of the
//! selected rule(s), until only trivial applications remain. In guarded
//! mode every `Σ_i` must be weakly compatible; the first one that is not
//! turns the result into [`ClosureResult::Omega`].

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::compat::{wc_violation, wc_violation_involving, WcWitness};
use crate::error::{Error, Result};
use crate::rules::{is_trivial_application, Rule, RuleApplication};
use crate::split::{PartialSplit, SplitSystem};
use crate::taxa::TaxonUniverse;

/// Default cap on the number of rule applications in one run.
pub const DEFAULT_STEP_CAP: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleKind {
    M,
    Y,
    /// Each step may use either the M- or the Y-rule.
    MY,
    Z,
}

/// Rule(s) driving a closure, and whether weak compatibility guards it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RuleSelector {
    kind: RuleKind,
    guarded: bool,
}

impl RuleSelector {
    /// Guarded Y-rule.
    pub fn y() -> Self {
        RuleSelector {
            kind: RuleKind::Y,
            guarded: true,
        }
    }

    /// M-rule; the closure is unique without a guard.
    pub fn m() -> Self {
        RuleSelector {
            kind: RuleKind::M,
            guarded: false,
        }
    }

    /// Guarded M/Y combination.
    pub fn my() -> Self {
        RuleSelector {
            kind: RuleKind::MY,
            guarded: true,
        }
    }

    /// Z-rule, always unguarded. Its closures are not order independent.
    pub fn z() -> Self {
        RuleSelector {
            kind: RuleKind::Z,
            guarded: false,
        }
    }

    pub fn new(kind: RuleKind) -> Self {
        match kind {
            RuleKind::M => Self::m(),
            RuleKind::Y => Self::y(),
            RuleKind::MY => Self::my(),
            RuleKind::Z => Self::z(),
        }
    }

    /// Sets the guard. Ignored for the Z-rule.
    pub fn guarded(mut self, guarded: bool) -> Self {
        self.guarded = guarded && self.kind != RuleKind::Z;
        self
    }

    pub fn unguarded(self) -> Self {
        self.guarded(false)
    }

    pub fn is_guarded(&self) -> bool {
        self.guarded
    }

    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    /// Only M, Y and M/Y closures are independent of application order.
    pub fn has_unique_closure(&self) -> bool {
        match self.kind {
            RuleKind::M => true,
            RuleKind::Y | RuleKind::MY => self.guarded,
            RuleKind::Z => false,
        }
    }
}

/// Order in which candidate applications are tried at each step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum OrderPolicy {
    /// First nontrivial candidate in lexicographic order of participant
    /// indices (pairs before their triple extensions), then orientation.
    #[default]
    Canonical,
    /// Candidates tried in a pseudo-random order drawn from the seed.
    SeededRandom(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClosureOptions {
    pub policy: OrderPolicy,
    pub want_trace: bool,
    pub step_cap: usize,
    /// Reduce a reducible input instead of rejecting it.
    pub auto_reduce: bool,
}

impl Default for ClosureOptions {
    fn default() -> Self {
        ClosureOptions {
            policy: OrderPolicy::Canonical,
            want_trace: false,
            step_cap: DEFAULT_STEP_CAP,
            auto_reduce: true,
        }
    }
}

impl ClosureOptions {
    pub fn with_policy(policy: OrderPolicy) -> Self {
        ClosureOptions {
            policy,
            ..Self::default()
        }
    }

    pub fn traced(mut self) -> Self {
        self.want_trace = true;
        self
    }
}

/// Failure of the weak-compatibility guard.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Omega {
    /// Index `i` of the first `Σ_i` that is not weakly compatible.
    pub step: usize,
    pub witness: WcWitness,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClosureResult {
    Closed(SplitSystem),
    Omega(Omega),
}

impl ClosureResult {
    pub fn system(&self) -> Option<&SplitSystem> {
        match self {
            ClosureResult::Closed(s) => Some(s),
            ClosureResult::Omega(_) => None,
        }
    }

    pub fn into_system(self) -> Option<SplitSystem> {
        match self {
            ClosureResult::Closed(s) => Some(s),
            ClosureResult::Omega(_) => None,
        }
    }

    pub fn is_omega(&self) -> bool {
        matches!(self, ClosureResult::Omega(_))
    }

    /// `⪯` extended by `Σ ⪯ ω` for every `Σ`; `ω` precedes only itself.
    pub fn preceq(&self, other: &ClosureResult) -> Result<bool> {
        match (self, other) {
            (_, ClosureResult::Omega(_)) => Ok(true),
            (ClosureResult::Omega(_), ClosureResult::Closed(_)) => Ok(false),
            (ClosureResult::Closed(a), ClosureResult::Closed(b)) => a.preceq(b),
        }
    }

    /// Equality with all `ω` values identified.
    pub fn same_as(&self, other: &ClosureResult) -> bool {
        match (self, other) {
            (ClosureResult::Omega(_), ClosureResult::Omega(_)) => true,
            (ClosureResult::Closed(a), ClosureResult::Closed(b)) => a == b,
            _ => false,
        }
    }
}

/// One step of a closure sequence: the application and the system `Σ_i`
/// it produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub step: usize,
    pub application: RuleApplication,
    pub system: SplitSystem,
}

impl TraceStep {
    /// `step=<i> rule=<M|Y|Z> inputs=<splits> orientation=<o> outputs=<splits>`
    ///
    /// Splits are written `a,b|c,d` and separated by `;`.
    pub fn to_line(&self, universe: &TaxonUniverse) -> String {
        format!(
            "step={} rule={} inputs={} orientation={} outputs={}",
            self.step,
            self.application.rule,
            trace_splits(universe, &self.application.inputs),
            self.application.orientation,
            trace_splits(universe, &self.application.outputs),
        )
    }
}

fn trace_splits(universe: &TaxonUniverse, splits: &[PartialSplit]) -> String {
    let mut out = String::new();
    for (i, s) in splits.iter().enumerate() {
        if i > 0 {
            out.push(';');
        }
        let _ = write!(
            out,
            "{}|{}",
            universe.join(s.first(), ","),
            universe.join(s.second(), ",")
        );
    }
    out
}

/// Renders a whole trace, one line per step.
pub fn format_trace(universe: &TaxonUniverse, trace: &[TraceStep]) -> String {
    trace.iter().map(|t| t.to_line(universe) + "\n").collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureOutcome {
    pub result: ClosureResult,
    pub trace: Option<Vec<TraceStep>>,
    /// Length `n` of the closure sequence `Σ_0, ..., Σ_n`.
    pub steps: usize,
}

/// `|Σ|·|X| − Σ_{A|B∈Σ} |A∪B|`: upper bound on the length of a guarded
/// Y-closure sequence.
pub fn y_length_bound(sigma: &SplitSystem) -> usize {
    let n = sigma.universe().len();
    sigma.iter().map(|s| n - s.support().len()).sum()
}

/// Runs a closure sequence for `sigma` to its end.
pub fn closure(
    sigma: &SplitSystem,
    rule: RuleSelector,
    options: &ClosureOptions,
) -> Result<ClosureOutcome> {
    let mut current = if sigma.is_irreducible() {
        sigma.clone()
    } else if options.auto_reduce {
        sigma.reduce()
    } else {
        return Err(Error::NotIrreducible);
    };

    let mut trace = options.want_trace.then(Vec::new);
    if rule.guarded {
        if let Some(witness) = wc_violation(&current) {
            return Ok(ClosureOutcome {
                result: ClosureResult::Omega(Omega { step: 0, witness }),
                trace,
                steps: 0,
            });
        }
    }

    let bound = (rule.kind == RuleKind::Y && rule.guarded).then(|| y_length_bound(&current));
    let mut rng = match options.policy {
        OrderPolicy::Canonical => None,
        OrderPolicy::SeededRandom(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
    };

    let mut steps = 0;
    while let Some(app) = next_application(&current, rule.kind, rng.as_mut()) {
        steps += 1;
        if steps > options.step_cap {
            return Err(Error::StepCapExceeded(options.step_cap));
        }
        #[cfg(debug_assertions)]
        let before = current.clone();
        let fresh = current.absorb(&app.outputs);
        // The sequence is strictly increasing with respect to ⪯.
        #[cfg(debug_assertions)]
        {
            assert!(!fresh.is_empty() && before != current);
            assert_eq!(before.preceq(&current), Ok(true));
        }
        if let Some(bound) = bound {
            debug_assert!(steps <= bound, "Y-closure sequence longer than its bound");
        }
        if let Some(t) = trace.as_mut() {
            t.push(TraceStep {
                step: steps,
                application: app,
                system: current.clone(),
            });
        }
        if rule.guarded {
            if let Some(witness) = wc_violation_involving(&current.to_vec(), &fresh) {
                return Ok(ClosureOutcome {
                    result: ClosureResult::Omega(Omega {
                        step: steps,
                        witness,
                    }),
                    trace,
                    steps,
                });
            }
        }
    }

    Ok(ClosureOutcome {
        result: ClosureResult::Closed(current),
        trace,
        steps,
    })
}

/// Closure with default options and the canonical order.
pub fn closure_of(sigma: &SplitSystem, rule: RuleSelector) -> Result<ClosureResult> {
    Ok(closure(sigma, rule, &ClosureOptions::default())?.result)
}

/// Whether every applicable candidate for `rule` is trivial on `sigma`.
pub fn is_closed(sigma: &SplitSystem, rule: RuleSelector) -> bool {
    next_application(sigma, rule.kind, None).is_none()
}

#[derive(Debug, Clone, Copy)]
enum Candidate {
    Pair(Rule, usize, usize),
    Triple(usize, usize, usize),
}

impl Candidate {
    fn applications(self, v: &[PartialSplit]) -> Vec<RuleApplication> {
        match self {
            Candidate::Pair(rule, i, j) => RuleApplication::all(rule, &[v[i], v[j]]),
            Candidate::Triple(i, j, k) => RuleApplication::all(Rule::Y, &[v[i], v[j], v[k]]),
        }
    }
}

/// Candidate participant tuples in lexicographic order of indices.
fn candidates(k: usize, kind: RuleKind) -> impl Iterator<Item = Candidate> {
    let with_m = matches!(kind, RuleKind::M | RuleKind::MY);
    let with_y = matches!(kind, RuleKind::Y | RuleKind::MY);
    let z = kind == RuleKind::Z;
    (0..k).flat_map(move |i| {
        (0..k).flat_map(move |j| {
            let pair = if z && i != j {
                Some(Candidate::Pair(Rule::Z, i, j))
            } else if with_m && i < j {
                Some(Candidate::Pair(Rule::M, i, j))
            } else {
                None
            };
            let triples = (with_y && i < j)
                .then(|| (j + 1..k).map(move |l| Candidate::Triple(i, j, l)))
                .into_iter()
                .flatten();
            pair.into_iter().chain(triples)
        })
    })
}

fn next_application(
    sigma: &SplitSystem,
    kind: RuleKind,
    rng: Option<&mut ChaCha8Rng>,
) -> Option<RuleApplication> {
    let v = sigma.to_vec();
    let nontrivial = |app: &RuleApplication| !is_trivial_application(sigma, app);
    match rng {
        None => candidates(v.len(), kind)
            .find_map(|c| c.applications(&v).into_iter().find(|a| nontrivial(a))),
        Some(rng) => {
            let mut all: Vec<Candidate> = candidates(v.len(), kind).collect();
            all.shuffle(rng);
            for c in all {
                let mut apps: Vec<RuleApplication> = c
                    .applications(&v)
                    .into_iter()
                    .filter(|a| nontrivial(a))
                    .collect();
                if !apps.is_empty() {
                    apps.shuffle(rng);
                    return apps.into_iter().next();
                }
            }
            None
        }
    }
}

/// Outcome of checking the closure-operator laws on a pair of systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClosureOperatorReport {
    /// `Σ ⪯ ⟨Σ⟩`.
    pub extensive: bool,
    /// `⟨Σ⟩ ⪯ ⟨Σ′⟩`; `None` when `Σ ⪯ Σ′` does not hold.
    pub monotone: Option<bool>,
    /// `⟨⟨Σ⟩⟩ = ⟨Σ⟩`.
    pub idempotent: bool,
}

impl ClosureOperatorReport {
    pub fn holds(&self) -> bool {
        self.extensive && self.monotone != Some(false) && self.idempotent
    }
}

/// Checks extensivity, monotonicity and idempotence of `⟨·⟩` for `rule`
/// on `sigma` and `other`, with `ω` absorbing.
pub fn closure_operator_check(
    sigma: &SplitSystem,
    other: &SplitSystem,
    rule: RuleSelector,
) -> Result<ClosureOperatorReport> {
    let sigma = sigma.reduce();
    let other = other.reduce();
    let below = sigma.preceq(&other)?;
    let cl = closure_of(&sigma, rule)?;
    let extensive = ClosureResult::Closed(sigma.clone()).preceq(&cl)?;
    let monotone = if below {
        Some(cl.preceq(&closure_of(&other, rule)?)?)
    } else {
        None
    };
    let idempotent = match &cl {
        ClosureResult::Omega(_) => true,
        ClosureResult::Closed(s) => closure_of(s, rule)?.same_as(&cl),
    };
    Ok(ClosureOperatorReport {
        extensive,
        monotone,
        idempotent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn sys(n: usize, splits: &[&str]) -> SplitSystem {
        SplitSystem::parse(Arc::new(TaxonUniverse::numbered(n).unwrap()), splits).unwrap()
    }

    fn worked() -> SplitSystem {
        sys(5, &["12|34", "23|14", "15|24", "45|13"])
    }

    #[test]
    fn guarded_y_worked_example() {
        let sigma = worked();
        let out = closure(
            &sigma,
            RuleSelector::y(),
            &ClosureOptions::default().traced(),
        )
        .unwrap();
        let want = SplitSystem::parse(
            sigma.universe().clone(),
            ["12|34", "145|23", "15|234", "45|123"],
        )
        .unwrap();
        assert_eq!(out.result, ClosureResult::Closed(want.clone()));
        assert!(out.steps <= y_length_bound(&sigma));
        assert_eq!(out.trace.as_ref().unwrap().len(), out.steps);
        assert!(is_closed(&want, RuleSelector::y()));
        assert!(!is_closed(&sigma, RuleSelector::y()));
    }

    #[test]
    fn guarded_y_rejects_non_wc_input() {
        let sigma = sys(6, &["235|146", "24|135", "21|346"]);
        let out = closure(&sigma, RuleSelector::y(), &ClosureOptions::default()).unwrap();
        match out.result {
            ClosureResult::Omega(o) => assert_eq!(o.step, 0),
            r => panic!("expected omega, got {r:?}"),
        }
    }

    #[test]
    fn length_bound_examples() {
        assert_eq!(y_length_bound(&worked()), 4);
        assert_eq!(y_length_bound(&sys(5, &["12|345", "123|45"])), 0);
        assert_eq!(y_length_bound(&sys(6, &["12|4"])), 3);
        let full = sys(5, &["12|345", "123|45"]);
        assert_eq!(
            closure(&full, RuleSelector::y(), &ClosureOptions::default())
                .unwrap()
                .steps,
            0
        );
    }

    #[test]
    fn single_split_is_closed() {
        let s = sys(5, &["12|34"]);
        for rule in [
            RuleSelector::y(),
            RuleSelector::m(),
            RuleSelector::my(),
            RuleSelector::z(),
        ] {
            assert!(is_closed(&s, rule));
        }
    }

    #[test]
    fn reducible_input_handling() {
        let s = sys(5, &["12|34", "12|345"]);
        let strict = ClosureOptions {
            auto_reduce: false,
            ..ClosureOptions::default()
        };
        assert_eq!(
            closure(&s, RuleSelector::m(), &strict),
            Err(Error::NotIrreducible)
        );
        assert!(closure(&s, RuleSelector::m(), &ClosureOptions::default()).is_ok());
    }

    #[test]
    fn step_cap_enforced() {
        let opts = ClosureOptions {
            step_cap: 1,
            ..ClosureOptions::default()
        };
        assert_eq!(
            closure(&worked(), RuleSelector::y(), &opts),
            Err(Error::StepCapExceeded(1))
        );
    }

    #[test]
    fn operator_laws_on_worked_example() {
        let sigma = worked();
        let closed = closure_of(&sigma, RuleSelector::y())
            .unwrap()
            .into_system()
            .unwrap();
        let r = closure_operator_check(&sigma, &closed, RuleSelector::y()).unwrap();
        assert_eq!(
            r,
            ClosureOperatorReport {
                extensive: true,
                monotone: Some(true),
                idempotent: true
            }
        );
        let r = closure_operator_check(&sigma, &sigma, RuleSelector::y()).unwrap();
        assert!(r.holds() && r.monotone == Some(true));

        let bad = sys(6, &["235|146", "24|135", "21|346"]);
        let r = closure_operator_check(&bad, &bad, RuleSelector::y()).unwrap();
        assert!(r.extensive && r.holds());
    }

    #[test]
    fn trace_lines() {
        let sigma = worked();
        let out = closure(
            &sigma,
            RuleSelector::y(),
            &ClosureOptions::default().traced(),
        )
        .unwrap();
        let text = format_trace(sigma.universe(), out.trace.as_ref().unwrap());
        let first = text.lines().next().unwrap();
        assert!(first.starts_with("step=1 rule=Y inputs="), "{first}");
        assert!(first.contains(" orientation=") && first.contains(" outputs="));
        assert_eq!(text.lines().count(), out.steps);
    }

    #[test]
    fn canonical_candidate_order() {
        let got: Vec<String> = candidates(3, RuleKind::MY)
            .map(|c| match c {
                Candidate::Pair(r, i, j) => format!("{r}{i}{j}"),
                Candidate::Triple(i, j, k) => format!("Y{i}{j}{k}"),
            })
            .collect();
        assert_eq!(got, ["M01", "Y012", "M02", "M12"]);
        assert_eq!(candidates(3, RuleKind::Z).count(), 6);
        assert_eq!(candidates(4, RuleKind::Y).count(), 4);
    }
}
