use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{default_budget, difference, unit, Halt, MatrixDerivation, Prober, DEFAULT_MAX_SUPPORT};
use crate::diagnostic::Diagnostic;
use crate::matrix::{Index, Matrix, Window};
use crate::mutation::{self, Mutation};
use crate::ring::{sample_elements, Ring};

/// Samples the derivation law on `w`. An empty list means `d` is
/// consistent with being a derivation on the probed window.
///
/// Checks, each reporting its first failing instance:
/// additivity in the coefficient, the Leibniz rule on unit products,
/// the shape of `d(e_kk(1))` (nonzero only in row or column `k`, never
/// at `(k, k)`), and antisymmetry of the off-diagonal reads
/// `d(e_pp(1))_pq + d(e_qq(1))_pq = 0`.
pub fn validate_derivation<R: Ring>(
    d: &MatrixDerivation<R>,
    w: Window,
    seed: u64,
    trials: usize,
) -> Vec<Diagnostic> {
    let prober = Prober::new(d, default_budget(w.bound(), trials), DEFAULT_MAX_SUPPORT);
    validate_with(&prober, w, seed, trials)
}

pub(crate) const CHECKS: [&str; 4] = ["additivity", "leibniz", "lemma1_shape", "antisymmetry"];

pub(crate) fn validate_with<R: Ring>(
    prober: &Prober<R>,
    w: Window,
    seed: u64,
    trials: usize,
) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    let mut run = |check: &str| -> Result<(), Halt> {
        let found = match check {
            "additivity" => additivity(prober, w, seed, trials)?,
            "leibniz" => leibniz(prober, w, seed, trials)?,
            "lemma1_shape" => shape(prober, w)?,
            _ => {
                if mutation::active(Mutation::SkipAntisymmetry) {
                    None
                } else {
                    antisymmetry(prober, w)?
                }
            }
        };
        diags.extend(found.map(|witness| Diagnostic::new(check, witness)));
        Ok(())
    };
    for check in CHECKS {
        if let Err(halt) = run(check) {
            let reason = match halt {
                Halt::Inconclusive(reason) => reason,
                Halt::Refuted(d) => d.to_string(),
            };
            diags.push(Diagnostic::new("probe", reason));
            break;
        }
    }
    diags
}

fn additivity<R: Ring>(p: &Prober<R>, w: Window, seed: u64, trials: usize) -> Result<Option<String>, Halt> {
    let ring = p.derivation().ring();
    let pool = sample_elements(ring, seed, trials.max(6));
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xadd);
    let n = w.bound();
    for _ in 0..trials {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let r = &pool[rng.gen_range(0..pool.len())];
        let s = &pool[rng.gen_range(0..pool.len())];
        let lhs = p.probe(i, j, &ring.add(r, s))?;
        let rhs = p.probe(i, j, r)?.add(&p.probe(i, j, s)?).expect("same ring");
        if let Some(at) = difference(&lhs, &rhs, w) {
            return Ok(Some(format!(
                "d(e_{i},{j}(r + s)) != d(e_{i},{j}(r)) + d(e_{i},{j}(s)) for r = {}, s = {}: {at}",
                ring.format(r),
                ring.format(s)
            )));
        }
    }
    Ok(None)
}

/// `d(e_ik(a)·e_lj(b)) = d(e_ik(a))·e_lj(b) + e_ik(a)·d(e_lj(b))`, where
/// the product on the left is `e_ij(ab)` if `k = l` and zero otherwise.
#[allow(clippy::too_many_arguments)]
fn leibniz_instance<R: Ring>(
    p: &Prober<R>,
    w: Window,
    (i, k, l, j): (Index, Index, Index, Index),
    a: &R::Elem,
    b: &R::Elem,
    ones: bool,
) -> Result<Option<String>, Halt> {
    let ring = p.derivation().ring();
    let (da, db) = if ones {
        (p.probe_one(i, k)?, p.probe_one(l, j)?)
    } else {
        (p.probe(i, k, a)?, p.probe(l, j, b)?)
    };
    let lhs = if k == l {
        p.probe(i, j, &ring.mul(a, b))?
    } else {
        Matrix::zero(ring)
    };
    let rhs = da
        .mul(&unit(ring, l, j, b.clone()))
        .and_then(|x| x.add(&unit(ring, i, k, a.clone()).mul(&db)?))
        .expect("same ring");
    Ok(difference(&lhs, &rhs, w).map(|at| {
        format!(
            "x = e_{i},{k}({}), y = e_{l},{j}({}): d(xy) != d(x)y + xd(y), {at}",
            ring.format(a),
            ring.format(b)
        )
    }))
}

fn leibniz<R: Ring>(p: &Prober<R>, w: Window, seed: u64, trials: usize) -> Result<Option<String>, Halt> {
    let ring = p.derivation().ring();
    let n = w.bound();
    let one = ring.one();
    if n <= 8 {
        for i in 0..n {
            for k in 0..n {
                for j in 0..n {
                    if let Some(found) = leibniz_instance(p, w, (i, k, k, j), &one, &one, true)? {
                        return Ok(Some(found));
                    }
                }
            }
        }
    }
    let pool = sample_elements(ring, seed, trials.max(6));
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x1e1b);
    for t in 0..2 * trials {
        let (i, k, j) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
        let l = if t % 2 == 1 && n > 1 {
            (k + rng.gen_range(1..n)) % n
        } else {
            k
        };
        let a = &pool[rng.gen_range(0..pool.len())];
        let b = &pool[rng.gen_range(0..pool.len())];
        if let Some(found) = leibniz_instance(p, w, (i, k, l, j), a, b, false)? {
            return Ok(Some(found));
        }
    }
    Ok(None)
}

fn shape<R: Ring>(p: &Prober<R>, w: Window) -> Result<Option<String>, Halt> {
    let ring = p.derivation().ring();
    for k in w.indices() {
        let value = p.probe_one(k, k)?;
        if value.lemma1_shape_on(k, w) {
            continue;
        }
        let table = match &value {
            Matrix::Finite(m) => m.clone(),
            Matrix::Operator(_) => value.window_of(w),
        };
        let (i, j, r) = table
            .iter()
            .find(|&(i, j, _)| (i == k) == (j == k))
            .map(|(i, j, r)| (i, j, ring.format(r)))
            .unwrap_or((k, k, "?".into()));
        return Ok(Some(format!(
            "d(e_{k},{k}(1)) has entry {r} at ({i},{j}), outside row and column {k}"
        )));
    }
    Ok(None)
}

fn antisymmetry<R: Ring>(p: &Prober<R>, w: Window) -> Result<Option<String>, Halt> {
    let ring = p.derivation().ring();
    for (a, b) in w.cells().filter(|(a, b)| a != b) {
        let x = p.probe_one(a, a)?.entry(a, b);
        let y = p.probe_one(b, b)?.entry(a, b);
        if !ring.is_zero(&ring.add(&x, &y)) {
            return Ok(Some(format!(
                "entry ({a},{b}) of d(e_{a},{a}(1)) is {} and of d(e_{b},{b}(1)) is {}; they must cancel",
                ring.format(&x),
                ring.format(&y)
            )));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::Ambient;
    use crate::matrix::{FiniteMatrix, Operator};
    use crate::ring::{formal_derivative, Integers};

    fn w(n: Index) -> Window {
        Window::new(n).unwrap()
    }

    #[test]
    fn true_derivations_pass() {
        let s = MatrixDerivation::inner(Ambient::Inf, Operator::shift(&Integers).into()).unwrap();
        for n in [1, 3, 8, 10] {
            assert!(validate_derivation(&s, w(n), 5, 6).is_empty(), "window {n}");
        }
        let lift = MatrixDerivation::lift(Ambient::Inf, formal_derivative());
        assert!(validate_derivation(&lift, w(6), 1, 8).is_empty());
    }

    #[test]
    fn zeroed_unit_breaks_leibniz() {
        let s = MatrixDerivation::inner(Ambient::Inf, Operator::shift(&Integers).into()).unwrap();
        let box_ = MatrixDerivation::from_fn(&Integers, Ambient::Inf, "perturbed", move |i, j, r| {
            if (i, j) == (0, 0) {
                Matrix::zero(&Integers)
            } else {
                s.eval_unit(i, j, r)
            }
        });
        let diags = validate_derivation(&box_, w(4), 3, 6);
        assert!(diags.iter().any(|d| d.check == "leibniz"), "{diags:?}");
    }

    #[test]
    fn antisymmetry_violation_found_and_skippable() {
        let ring = Integers;
        let box_ = MatrixDerivation::from_fn(&ring, Ambient::Inf, "half", |i, j, r| {
            if i == j {
                unit(&Integers, i + 1, i, r.clone())
            } else {
                Matrix::zero(&Integers)
            }
        });
        let diags = validate_derivation(&box_, w(4), 3, 6);
        assert!(diags.iter().any(|d| d.check == "antisymmetry"), "{diags:?}");
        let skipped = mutation::with_mutation(Mutation::SkipAntisymmetry, || {
            validate_derivation(&box_, w(4), 3, 6)
        });
        assert!(skipped.iter().all(|d| d.check != "antisymmetry"));
    }

    #[test]
    fn shape_violation_reported() {
        let box_ = MatrixDerivation::from_fn(&Integers, Ambient::Inf, "diag", |i, j, r| {
            Matrix::Finite(FiniteMatrix::unit(&Integers, i, j, r.clone()))
        });
        let diags = validate_derivation(&box_, w(3), 0, 4);
        assert!(diags.iter().any(|d| d.check == "lemma1_shape"));
    }

    #[test]
    fn panicking_box_is_a_probe_failure() {
        let box_ = MatrixDerivation::from_fn(&Integers, Ambient::Inf, "panics", |i, _, _| {
            if i == 2 {
                panic!("boom");
            }
            Matrix::zero(&Integers)
        });
        let diags = validate_derivation(&box_, w(4), 0, 4);
        assert_eq!(diags.last().unwrap().check, "probe");
        assert!(diags.last().unwrap().witness.contains("panicked"));
    }
}
