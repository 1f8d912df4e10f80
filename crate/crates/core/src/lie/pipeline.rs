use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{expand, scale_int, sl_member, LieAmbient, LieDerivation, LieProbe, LieProber, SlMembershipOracle};
use crate::derivation::{
    coefficient_tail, default_budget, difference, first_failure, off_diagonal, DecompositionReport,
    Halt, Outcome, ProbeFn, Status, TailResult, DEFAULT_MAX_SUPPORT,
};
use crate::diagnostic::Diagnostic;
use crate::matrix::{Accessor, FiniteMatrix, Index, Matrix, Operator, Window};
use crate::ring::{check_derivation_law, sample_elements, Ring};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieDecomposeConfig {
    pub seed: u64,
    pub trials: usize,
    pub i0: Index,
    /// Reservoir index for `sl_inf`; `None` picks twice the window bound.
    pub reservoir: Option<Index>,
    pub probe_budget: Option<usize>,
    pub max_support: usize,
}

impl Default for LieDecomposeConfig {
    fn default() -> Self {
        LieDecomposeConfig {
            seed: 0,
            trials: 8,
            i0: 0,
            reservoir: None,
            probe_budget: None,
            max_support: DEFAULT_MAX_SUPPORT,
        }
    }
}

fn refute(check: &str, witness: String) -> Halt {
    Halt::Refuted(Diagnostic::new(check, witness))
}

fn default_reservoir(w: Window) -> Index {
    2 * w.bound()
}

/// Window large enough to see the reservoir.
fn compare_window(w: Window, reservoir: Index) -> Window {
    Window::new(w.bound().max(reservoir + 2)).expect("nonzero")
}

/// `D(p)`, through the cache when `p` is a probe at `1`.
fn value<R: Ring>(p: &LieProber<R>, probe: &LieProbe<R>) -> Result<Matrix<R>, Halt> {
    let ring = p.derivation().ring();
    match probe {
        LieProbe::Unit(i, j, r) if ring.equal(r, &ring.one()) => p.unit_one(*i, *j),
        LieProbe::DiagDiff(k, w) => p.diag_diff(*k, *w),
        _ => p.probe(probe),
    }
}

/// Samples additivity and the Lie–Leibniz rule `D([x, y]) = [D(x), y] +
/// [x, D(y)]` on probe pairs whose bracket is again a combination of
/// probes; in `sl_inf` also checks that every probed value is in `sl_∞`.
pub fn lie_validate<R: Ring>(d: &LieDerivation<R>, w: Window, seed: u64, trials: usize) -> Vec<Diagnostic> {
    let p = LieProber::new(d, default_budget(w.bound(), trials), DEFAULT_MAX_SUPPORT);
    validate_with(&p, w, default_reservoir(w), seed, trials)
}

const VALIDATE_CHECKS: [&str; 3] = ["additivity", "lie_leibniz", "sl_membership"];

fn validate_with<R: Ring>(p: &LieProber<R>, w: Window, res: Index, seed: u64, trials: usize) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    for check in VALIDATE_CHECKS {
        let found = match check {
            "additivity" => additivity(p, w, res, seed, trials),
            "lie_leibniz" => leibniz(p, w, res, seed, trials),
            _ => membership(p, w, res),
        };
        match found {
            Ok(Some(witness)) => diags.push(Diagnostic::new(check, witness)),
            Ok(None) => {}
            Err(halt) => {
                let reason = match halt {
                    Halt::Inconclusive(r) => r,
                    Halt::Refuted(d) => d.to_string(),
                };
                diags.push(Diagnostic::new("probe", reason));
                break;
            }
        }
    }
    diags
}

fn random_unit<R: Ring>(ambient: LieAmbient, n: Index, rng: &mut ChaCha8Rng, r: R::Elem) -> LieProbe<R> {
    let i = rng.gen_range(0..n);
    let mut j = rng.gen_range(0..n);
    if ambient == LieAmbient::SlInf && i == j {
        j = (i + 1) % n;
    }
    LieProbe::Unit(i, j, r)
}

fn additivity<R: Ring>(p: &LieProber<R>, w: Window, res: Index, seed: u64, trials: usize) -> Result<Option<String>, Halt> {
    let d = p.derivation();
    let ring = d.ring();
    let n = w.bound();
    if d.ambient() == LieAmbient::SlInf && n < 2 {
        return Ok(None);
    }
    let pool = sample_elements(ring, seed, trials.max(6));
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x11e);
    let cmp = compare_window(w, res);
    for _ in 0..trials {
        let r = pool[rng.gen_range(0..pool.len())].clone();
        let s = pool[rng.gen_range(0..pool.len())].clone();
        let LieProbe::Unit(i, j, _) = random_unit::<R>(d.ambient(), n, &mut rng, ring.zero()) else {
            unreachable!()
        };
        let lhs = p.probe(&LieProbe::Unit(i, j, ring.add(&r, &s)))?;
        let rhs = p
            .probe(&LieProbe::Unit(i, j, r.clone()))?
            .add(&p.probe(&LieProbe::Unit(i, j, s.clone()))?)
            .expect("same ring");
        if let Some(at) = difference(&lhs, &rhs, cmp) {
            return Ok(Some(format!(
                "D(e_{i},{j}(r + s)) != D(e_{i},{j}(r)) + D(e_{i},{j}(s)) for r = {}, s = {}: {at}",
                ring.format(&r),
                ring.format(&s)
            )));
        }
    }
    Ok(None)
}

fn leibniz_pairs<R: Ring>(ring: &R, ambient: LieAmbient, w: Window, res: Index, seed: u64, trials: usize) -> Vec<(LieProbe<R>, LieProbe<R>)> {
    let n = w.bound();
    let one = ring.one();
    let u = |i, j| LieProbe::Unit(i, j, one.clone());
    let mut pairs = Vec::new();
    if n <= 8 {
        for i in 0..n {
            for k in 0..n {
                for j in 0..n {
                    let distinct = i != k && k != j && i != j;
                    if ambient != LieAmbient::SlInf || distinct {
                        pairs.push((u(i, k), u(k, j)));
                    }
                }
                if ambient == LieAmbient::SlInf {
                    for j in (0..n).filter(|&j| j != i) {
                        pairs.push((LieProbe::DiagDiff(k, res), u(i, j)));
                    }
                    if i < k {
                        pairs.push((u(i, k), u(k, i)));
                    }
                }
            }
        }
    }
    if ambient == LieAmbient::SlInf && n < 2 {
        return pairs;
    }
    let pool = sample_elements(ring, seed, trials.max(6));
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x11eb);
    for t in 0..2 * trials {
        let a = pool[rng.gen_range(0..pool.len())].clone();
        let b = pool[rng.gen_range(0..pool.len())].clone();
        let x = if ambient == LieAmbient::SlInf && t % 3 == 2 {
            LieProbe::DiagDiff(rng.gen_range(0..n), res)
        } else {
            random_unit(ambient, n, &mut rng, a)
        };
        // chain the second unit onto the first when possible
        let y = match &x {
            LieProbe::Unit(_, j, _) if t % 2 == 0 => {
                let k = rng.gen_range(0..n);
                match &x {
                    LieProbe::Unit(i, _, _) if ambient == LieAmbient::SlInf && (k == *i || k == *j) => {
                        random_unit(ambient, n, &mut rng, b)
                    }
                    _ => LieProbe::Unit(*j, k, b),
                }
            }
            _ => random_unit(ambient, n, &mut rng, b),
        };
        pairs.push((x, y));
    }
    pairs
}

fn leibniz<R: Ring>(p: &LieProber<R>, w: Window, res: Index, seed: u64, trials: usize) -> Result<Option<String>, Halt> {
    let d = p.derivation();
    let ring = d.ring();
    let cmp = compare_window(w, res);
    for (x, y) in leibniz_pairs(ring, d.ambient(), w, res, seed, trials) {
        let (xm, ym) = (Matrix::Finite(x.matrix(ring)), Matrix::Finite(y.matrix(ring)));
        let bracket = xm.bracket(&ym).expect("same ring");
        let Some(terms) = expand(ring, d.ambient(), bracket.as_finite().expect("finite")) else {
            continue;
        };
        let mut lhs = Matrix::zero(ring);
        for (term, m) in &terms {
            lhs = lhs.add(&scale_int(&value(p, term)?, *m)).expect("same ring");
        }
        let (dx, dy) = (value(p, &x)?, value(p, &y)?);
        let rhs = dx
            .bracket(&ym)
            .and_then(|a| a.add(&xm.bracket(&dy)?))
            .expect("same ring");
        if let Some(at) = difference(&lhs, &rhs, cmp) {
            return Ok(Some(format!(
                "x = {}, y = {}: D([x,y]) != [D(x),y] + [x,D(y)], {at}",
                x.describe(ring),
                y.describe(ring)
            )));
        }
    }
    Ok(None)
}

fn membership<R: Ring>(p: &LieProber<R>, w: Window, res: Index) -> Result<Option<String>, Halt> {
    let d = p.derivation();
    if d.ambient() != LieAmbient::SlInf {
        return Ok(None);
    }
    let Ok(oracle) = SlMembershipOracle::new(d.ring()) else {
        return Ok(None);
    };
    let mut probes: Vec<LieProbe<R>> = w
        .cells()
        .filter(|(i, j)| i != j)
        .map(|(i, j)| LieProbe::Unit(i, j, d.ring().one()))
        .collect();
    probes.extend(w.indices().map(|k| LieProbe::DiagDiff(k, res)));
    for probe in probes {
        let v = value(p, &probe)?;
        let Some(m) = v.as_finite() else { continue };
        if !sl_member(m, &oracle).unwrap_or(true) {
            return Ok(Some(format!(
                "D({}) has trace {} outside the commutator span",
                probe.describe(d.ring()),
                d.ring().format(&m.trace())
            )));
        }
    }
    Ok(None)
}

/// Off-diagonal part of the inner matrix on `w`.
///
/// In `sl_inf`, `v_ik` is entry `(i, k)` of `D(e_kk(1) - e_ww(1))` with
/// `w = reservoir ≥ w.bound()`; these values must vanish outside rows
/// and columns `k` and `w`. In `gl` ambients `D(e_kk(1))` is read
/// directly.
pub fn lie_extract_offdiag<R: Ring>(d: &LieDerivation<R>, w: Window, reservoir: Index) -> Result<FiniteMatrix<R>, Halt> {
    let p = LieProber::new(d, default_budget(w.bound(), 1), DEFAULT_MAX_SUPPORT);
    extract_with(&p, w, reservoir)
}

fn extract_with<R: Ring>(p: &LieProber<R>, w: Window, res: Index) -> Result<FiniteMatrix<R>, Halt> {
    let d = p.derivation();
    let ring = d.ring();
    let sl = d.ambient() == LieAmbient::SlInf;
    if sl && res < w.bound() {
        return Err(Halt::Inconclusive(format!(
            "reservoir {res} lies inside window {}",
            w.bound()
        )));
    }
    let cmp = compare_window(w, res);
    let mut v = FiniteMatrix::zero(ring);
    let mut reads = Vec::new();
    for k in w.indices() {
        let value = if sl { p.diag_diff(k, res)? } else { p.unit_one(k, k)? };
        let table = match &value {
            Matrix::Finite(m) => m.clone(),
            Matrix::Operator(_) => value.window_of(cmp),
        };
        let lines = if sl { vec![k, res] } else { vec![k] };
        let stray = table.iter().find(|&(i, j, _)| {
            let on_line = lines.contains(&i) || lines.contains(&j);
            !on_line || (i == j && lines.contains(&i))
        });
        if let Some((i, j, r)) = stray {
            let probe = if sl {
                format!("e_{k},{k}(1) - e_{res},{res}(1)")
            } else {
                format!("e_{k},{k}(1)")
            };
            return Err(refute(
                "extract_v",
                format!("D({probe}) has entry {} at ({i},{j})", ring.format(r)),
            ));
        }
        for i in w.indices().filter(|&i| i != k) {
            v.accumulate(i, k, value.entry(i, k));
        }
        reads.push(value);
    }
    let vm = Matrix::Finite(v.clone());
    for (k, value) in reads.iter().enumerate() {
        let rhs = vm
            .bracket(&Matrix::Finite(FiniteMatrix::unit(ring, k, k, ring.one())))
            .expect("same ring");
        if let Some(at) = difference(&Matrix::Finite(value.window_of(w)), &Matrix::Finite(rhs.window_of(w)), w) {
            return Err(refute("extract_v", format!("[v, e_{k},{k}(1)] disagrees on the window: {at}")));
        }
    }
    Ok(v)
}

/// `v` on all of `ℕ`, read lazily from the probes.
///
/// In `sl_inf` column `j` comes from `D(e_jj(1) - e_rr(1))` where `r` is
/// the reservoir (or the next index when `j` is the reservoir). That
/// value carries `2·v_rj` at `(r, j)`, so the entry there is halved; rows
/// are read the same way with a sign change.
fn probe_backed_v<R: Ring>(p: &Arc<LieProber<R>>, res: Index) -> Matrix<R> {
    let d = p.derivation();
    let ring = d.ring().clone();
    let ambient = d.ambient();
    if ambient != LieAmbient::SlInf {
        let pc = Arc::clone(p);
        let col: Accessor<R::Elem> = Arc::new(move |j: Index| match pc.unit_one(j, j) {
            Ok(v) => v.col(j).iter().filter(|(i, _)| *i != j).cloned().collect(),
            Err(_) => Vec::new(),
        });
        let row = (ambient == LieAmbient::GlRcf).then(|| {
            let (pr, r2) = (Arc::clone(p), ring.clone());
            Arc::new(move |i: Index| match pr.unit_one(i, i).map(|v| v.row(i)) {
                Ok(Some(line)) => line
                    .iter()
                    .filter(|(j, _)| *j != i)
                    .map(|(j, x)| (*j, r2.neg(x)))
                    .collect(),
                _ => Vec::new(),
            }) as Accessor<R::Elem>
        });
        return Matrix::Operator(Operator::derived(&ring, "v".into(), col, row));
    }
    let half = ring.half().expect("gated on half");
    let partner = move |k: Index| if k == res { res + 1 } else { res };
    let (pc, rc, hc) = (Arc::clone(p), ring.clone(), half.clone());
    let col: Accessor<R::Elem> = Arc::new(move |j: Index| {
        let r = partner(j);
        match pc.diag_diff(j, r) {
            Ok(v) => v
                .col(j)
                .iter()
                .filter(|(i, _)| *i != j)
                .map(|(i, x)| (*i, if *i == r { rc.mul(&hc, x) } else { x.clone() }))
                .filter(|(_, x)| !rc.is_zero(x))
                .collect(),
            Err(_) => Vec::new(),
        }
    });
    let (pr, rr) = (Arc::clone(p), ring.clone());
    let row: Accessor<R::Elem> = Arc::new(move |i: Index| {
        let r = partner(i);
        match pr.diag_diff(i, r).map(|v| v.row(i)) {
            Ok(Some(line)) => line
                .iter()
                .filter(|(j, _)| *j != i)
                .map(|(j, x)| {
                    let x = if *j == r { rr.mul(&half, x) } else { x.clone() };
                    (*j, rr.neg(&x))
                })
                .filter(|(_, x)| !rr.is_zero(x))
                .collect(),
            _ => Vec::new(),
        }
    });
    Matrix::Operator(Operator::derived(&ring, "v".into(), col, Some(row)))
}

pub(crate) const LIE_CHECKS: [&str; 11] = [
    "applicability",
    "additivity",
    "lie_leibniz",
    "sl_membership",
    "extract_v",
    "diagonal_units",
    "coefficient_support",
    "cocycle",
    "index_independence",
    "residual_derivation_law",
    "round_trip",
];

/// Splits `D` as `ad(v + diag(c)) + lift(u)` on `w`. Needs `½ ∈ R`;
/// without it the report is `unsupported`.
pub fn lie_decompose<R: Ring>(d: &LieDerivation<R>, w: Window, config: &LieDecomposeConfig) -> DecompositionReport<R> {
    let ring = d.ring();
    let sl = d.ambient() == LieAmbient::SlInf;
    let res = config.reservoir.unwrap_or_else(|| default_reservoir(w));
    let mut report = DecompositionReport::empty(ring, d.ambient().name(), w, config.i0);
    if sl {
        report.reservoir = Some(res);
    }
    report
        .notes
        .push(format!("all checks are scoped to window {}", w.bound()));
    let Some(h) = ring.half() else {
        report.applicability = Some("half absent".into());
        report.record("applicability", Outcome::Fail(format!("{} has no element 1/2", ring.name())));
        report.status = Status::Unsupported(format!(
            "half absent: the decomposition needs 1/2 in the ring, and {} has none",
            ring.name()
        ));
        for check in &LIE_CHECKS[1..] {
            report.record(check, Outcome::Skipped("half absent".into()));
        }
        report.finish_checks(&LIE_CHECKS);
        return report;
    };
    report.applicability = Some(format!("half present: 1/2 = {}", ring.format(&h)));
    report.record("applicability", Outcome::Pass);

    let budget = config
        .probe_budget
        .unwrap_or_else(|| default_budget(w.bound(), config.trials));
    let prober = Arc::new(LieProber::new(d, budget, config.max_support));
    let mut second: Option<Arc<LieProber<R>>> = None;
    let result = run(d, w, res, config, &prober, &mut second, &mut report);
    report.probes = prober.calls() + second.as_ref().map_or(0, |p| p.calls());
    report.status = match result {
        Ok(()) => Status::Decomposed,
        Err(Halt::Refuted(diag)) => {
            if report.check(&diag.check).is_none() {
                report.record(&diag.check, Outcome::Fail(diag.witness.clone()));
            }
            Status::Refuted(diag.to_string())
        }
        Err(Halt::Inconclusive(reason)) => Status::Inconclusive(reason),
    };
    report.finish_checks(&LIE_CHECKS);
    report
}

fn run<R: Ring>(
    d: &LieDerivation<R>,
    w: Window,
    res: Index,
    config: &LieDecomposeConfig,
    prober: &Arc<LieProber<R>>,
    second: &mut Option<Arc<LieProber<R>>>,
    report: &mut DecompositionReport<R>,
) -> Result<(), Halt> {
    let ring = d.ring();
    let sl = d.ambient() == LieAmbient::SlInf;
    let (seed, trials, i0) = (config.seed, config.trials, config.i0);
    if i0 >= w.bound() {
        return Err(Halt::Inconclusive(format!(
            "base index {i0} lies outside window {}",
            w.bound()
        )));
    }
    if sl && res < w.bound() {
        return Err(Halt::Inconclusive(format!(
            "reservoir {res} lies inside window {}",
            w.bound()
        )));
    }
    let cmp = compare_window(w, res);

    let diags = validate_with(prober, w, res, seed, trials);
    if let Some(probe) = diags.iter().find(|d| d.check == "probe") {
        return Err(Halt::Inconclusive(probe.witness.clone()));
    }
    for check in VALIDATE_CHECKS {
        let outcome = match diags.iter().find(|d| d.check == check) {
            Some(diag) => Outcome::Fail(diag.witness.clone()),
            None if check == "sl_membership" && !sl => Outcome::Skipped(format!("{} ambient", d.ambient())),
            None => Outcome::Pass,
        };
        report.record(check, outcome);
    }
    if let Some(first) = diags.first() {
        return Err(Halt::Refuted(first.clone()));
    }

    report.v_offdiag = extract_with(prober, w, res)?;
    report.record("extract_v", Outcome::Pass);
    let v = probe_backed_v(prober, res);
    if let Some(a) = d.provenance().inner_part(ring) {
        let off = off_diagonal(&a);
        if off.window_of(w) == report.v_offdiag {
            report.v_operator = Some(off);
        } else {
            report
                .notes
                .push("the structural inner part disagrees with the probed v".into());
        }
    }

    let d_prime = d.minus_inner(&v);
    let p2 = Arc::new(LieProber::new(&d_prime, prober.budget_left(), config.max_support));
    *second = Some(Arc::clone(&p2));
    let guard = |halt: Halt| match prober.failure() {
        Some(reason) => Halt::Inconclusive(reason),
        None => halt,
    };
    for k in w.indices() {
        let (value, what) = if sl {
            (p2.diag_diff(k, res), format!("e_{k},{k}(1) - e_{res},{res}(1)"))
        } else {
            (p2.unit_one(k, k), format!("e_{k},{k}(1)"))
        };
        let value = value.map_err(guard)?;
        if let Some(at) = difference(&value, &Matrix::zero(ring), cmp) {
            return Err(guard(refute("diagonal_units", format!("D'({what}) is not zero: {at}"))));
        }
    }
    report.record("diagonal_units", Outcome::Pass);

    let pp = Arc::clone(&p2);
    let probe: ProbeFn<R> = Arc::new(move |i, j, r| pp.probe(&LieProbe::Unit(i, j, r.clone())));
    let tail = coefficient_tail(&probe, ring, w, i0, seed, trials, report).map_err(guard)?;
    if let Some(reason) = prober.failure().or_else(|| p2.failure()) {
        return Err(Halt::Inconclusive(reason));
    }
    if tail.correction.iter().any(|c| !ring.is_zero(c)) {
        report.notes.push(
            "nonzero diagonal correction: D'_ij(1) != 0 for some i != j, so ad(diag(c)) was \
             removed before reading the residual"
                .into(),
        );
    }
    report.correction = tail.correction.clone();
    report.residual = Some(tail.residual.clone());
    report.residual_description = tail.description.clone();
    report.residual_samples = tail.samples.clone();

    let law = check_derivation_law(&tail.residual, seed, trials.max(1));
    if let Some(first) = law.first() {
        return Err(refute("residual_derivation_law", first.to_string()));
    }
    report.record("residual_derivation_law", Outcome::Pass);

    round_trip(prober, &v, &tail, report, w, res, seed, trials).map_err(guard)?;
    if let Some(reason) = prober.failure().or_else(|| p2.failure()) {
        return Err(Halt::Inconclusive(reason));
    }
    report.record("round_trip", Outcome::Pass);
    Ok(())
}

/// `D(p)` against `[v + diag(c), p] + lift(u)(p)` on every off-diagonal
/// unit (all units outside `sl_inf`) and every diagonal difference.
#[allow(clippy::too_many_arguments)]
fn round_trip<R: Ring>(
    prober: &LieProber<R>,
    v: &Matrix<R>,
    tail: &TailResult<R>,
    report: &DecompositionReport<R>,
    w: Window,
    res: Index,
    seed: u64,
    trials: usize,
) -> Result<(), Halt> {
    let d = prober.derivation();
    let ring = d.ring();
    let sl = d.ambient() == LieAmbient::SlInf;
    let cmp = compare_window(w, res);
    let pool = sample_elements(ring, seed ^ 0x2071, trials.max(1));
    let table = Matrix::Finite(report.inner_table());
    let cdiag = Matrix::Finite(FiniteMatrix::from_entries(
        ring,
        tail.correction.iter().enumerate().map(|(i, c)| (i, i, c.clone())),
    ));
    let mut probes: Vec<LieProbe<R>> = Vec::new();
    for (i, j) in w.cells().filter(|(i, j)| !sl || i != j) {
        probes.extend(pool.iter().map(|r| LieProbe::Unit(i, j, r.clone())));
    }
    if sl {
        probes.extend(w.indices().map(|k| LieProbe::DiagDiff(k, res)));
    }
    for k in w.indices().chain([res, res + 1]) {
        v.col(k);
        v.row(k);
    }
    let lift = |m: &FiniteMatrix<R>| {
        Matrix::Finite(FiniteMatrix::from_entries(
            ring,
            m.iter().map(|(i, j, r)| (i, j, tail.residual.apply(r))),
        ))
    };
    let check = |probe: &LieProbe<R>| -> Result<Option<String>, Halt> {
        let lhs = prober.probe(probe)?;
        let pm = probe.matrix(ring);
        let x = Matrix::Finite(pm.clone());
        let exact = v
            .bracket(&x)
            .and_then(|a| a.add(&cdiag.bracket(&x)?))
            .and_then(|a| a.add(&lift(&pm)))
            .expect("same ring");
        let windowed = table
            .bracket(&x)
            .and_then(|a| a.add(&lift(&pm)))
            .expect("same ring");
        let found = difference(&lhs, &exact, cmp).or_else(|| {
            difference(
                &Matrix::Finite(lhs.window_of(w)),
                &Matrix::Finite(windowed.window_of(w)),
                w,
            )
        });
        Ok(found.map(|at| format!("at {}: {at}", probe.describe(ring))))
    };
    match first_failure(&probes, d.is_concurrent(), check)? {
        Some(witness) => Err(refute("round_trip", witness)),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Operator;
    use crate::ring::{inner_ring_derivation, Integers, IntegersMod, Mat2};
    use num_bigint::BigInt;

    fn w(n: Index) -> Window {
        Window::new(n).unwrap()
    }

    #[test]
    fn validate_examples() {
        let z3 = IntegersMod::new(3).unwrap();
        let s = LieDerivation::ad(LieAmbient::SlInf, Operator::shift(&z3).into()).unwrap();
        assert!(lie_validate(&s, w(5), 0, 6).is_empty());
        let flipped = {
            let s = s.clone();
            LieDerivation::from_fn(&z3, LieAmbient::SlInf, "flipped", move |p| match p {
                LieProbe::Unit(0, 1, r) if *r == 1 => s.eval(p).neg(),
                _ => s.eval(p),
            })
        };
        let diags = lie_validate(&flipped, w(5), 0, 6);
        assert!(diags.iter().any(|d| d.check == "lie_leibniz"), "{diags:?}");
    }

    #[test]
    fn extract_examples() {
        let a: Matrix<Integers> = FiniteMatrix::unit(&Integers, 0, 1, BigInt::from(1)).into();
        let d = LieDerivation::ad(LieAmbient::SlInf, a).unwrap();
        let v = lie_extract_offdiag(&d, w(4), 10).unwrap();
        assert_eq!(v, FiniteMatrix::unit(&Integers, 0, 1, BigInt::from(1)));
        let dg = LieDerivation::ad(
            LieAmbient::SlInf,
            crate::matrix::diag(&Integers, BigInt::from),
        )
        .unwrap();
        assert!(lie_extract_offdiag(&dg, w(4), 10).unwrap().is_zero());
        assert!(matches!(lie_extract_offdiag(&dg, w(4), 2), Err(Halt::Inconclusive(_))));
    }

    #[test]
    fn shift_round_trip() {
        let z3 = IntegersMod::new(3).unwrap();
        let d = LieDerivation::ad(LieAmbient::SlInf, Operator::shift(&z3).into()).unwrap();
        let config = LieDecomposeConfig {
            reservoir: Some(16),
            trials: 4,
            ..LieDecomposeConfig::default()
        };
        let report = lie_decompose(&d, w(5), &config);
        assert!(report.is_decomposed(), "{:?}", report.checks);
        let expected = FiniteMatrix::from_entries(&z3, (0..4).map(|k| (k + 1, k, 1)));
        assert_eq!(report.v_offdiag, expected);
        assert_eq!(report.residual_description, "zero");
    }

    #[test]
    fn noncommutative_sum_round_trip() {
        let m = Mat2::new(3).unwrap();
        let a: Matrix<Mat2> = FiniteMatrix::unit(&m, 0, 1, m.one()).into();
        let u = inner_ring_derivation(&m, &[0, 1, 2, 0]).unwrap();
        let d = LieDerivation::ad(LieAmbient::SlInf, a)
            .unwrap()
            .sum(&LieDerivation::lift(LieAmbient::SlInf, u))
            .unwrap();
        let report = lie_decompose(&d, w(4), &LieDecomposeConfig::default());
        assert!(report.is_decomposed(), "{:?}", report.checks);
    }

    #[test]
    fn diagonal_inner_part_on_gl() {
        let z5 = IntegersMod::new(5).unwrap();
        let a = crate::matrix::diag(&z5, |i| (i % 5) as u64);
        for ambient in [LieAmbient::SlInf, LieAmbient::Gl, LieAmbient::GlRcf] {
            let d = LieDerivation::ad(ambient, a.clone()).unwrap();
            let report = lie_decompose(&d, w(4), &LieDecomposeConfig::default());
            assert!(report.is_decomposed(), "{ambient}: {:?}", report.checks);
            assert_eq!(report.correction, vec![0, 1, 2, 3]);
        }
    }

    #[test]
    fn no_half_is_unsupported() {
        let d = LieDerivation::ad(LieAmbient::SlInf, Operator::shift(&Integers).into()).unwrap();
        let report = lie_decompose(&d, w(4), &LieDecomposeConfig::default());
        assert!(matches!(report.status, Status::Unsupported(_)));
        assert_eq!(report.applicability.as_deref(), Some("half absent"));
    }
}
