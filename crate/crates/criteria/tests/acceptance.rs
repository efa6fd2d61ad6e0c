//! Acceptance criteria. Runs as a plain binary so every criterion prints one
//! verdict line; exits nonzero if any criterion fails.

use std::time::{Duration, Instant};

use num::{BigInt, BigRational, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qll_core::alethic::{Ext, Hardness, Value};
use qll_core::bayes::{conditional_odds, Density};
use qll_core::calculus::{Derivation, Theory};
use qll_core::corpus::{sequent_corpus, CutProofs};
use qll_core::fixtures;
use qll_core::prover::{Prover, ProverOptions};
use qll_core::rewrite::cut_eliminate_tree;
use qll_core::semantics::{
    check_softale_axioms, pointwise_softale, real_softale, soundness_gap, tuple_grid, Softale, Valuation,
};
use qll_core::syntax::{Formula, Sequent};

/// Decimal slack when comparing float gaps for monotonicity.
const GAP_SLACK: f64 = 1e-12;
/// Bound on the gap to the hard value at p = 16.
const GAP_AT_16: f64 = 0.2;
/// Agreement between the exact max-product bound and its float oracle.
const FLOAT_ORACLE_TOL: f64 = 1e-9;
/// Random instances per alethic law.
const LAW_SAMPLES: usize = 10_000;

type Criterion = (&'static str, fn() -> Verdict);

struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(ok: bool, detail: impl Into<String>) -> Verdict {
    Verdict { ok, detail: detail.into() }
}

fn h(s: &str) -> Hardness {
    Hardness::parse(s).unwrap()
}

fn seq(s: &str) -> Sequent {
    Sequent::parse(s).unwrap()
}

fn prov(s: &str, p: &Hardness) -> Value {
    Prover::new(p, &Theory::empty(p), &ProverOptions::default()).unwrap().value(&seq(s)).unwrap()
}

fn power(s: &str) -> Ext {
    Ext::parse_literal(s).unwrap()
}

fn within(start: Instant, limit: Duration) -> (bool, String) {
    let el = start.elapsed();
    (el < limit, format!("{:.2}s of {}s", el.as_secs_f64(), limit.as_secs()))
}

fn c1_idempotency() -> Verdict {
    let t0 = Instant::now();
    let v1 = prov("a + a |- a", &h("1"));
    let v2 = prov("a + a |- a", &h("2"));
    let (fast, time) = within(t0, Duration::from_secs(1));
    let ok = v1.power() == &power("1/2") && v2.power() == &power("1/2") && fast;
    verdict(ok, format!("p=1 {}, p=2 power {} ({}), {time}", v1.exact(), v2.power(), v2.describe()))
}

fn c2_soft_and_laws() -> Verdict {
    let t0 = Instant::now();
    let comm = prov("a & b |- b & a", &h("1"));
    let assoc = prov("(a & b) & c |- a & (b & c)", &h("1"));
    let (fast, time) = within(t0, Duration::from_secs(5));
    let ok = comm.power() == &power("1/2") && assoc.power() == &power("2/3") && fast;
    verdict(
        ok,
        format!("commutativity {} (want 1/2), associativity {} (want 2/3), {time}", comm.exact(), assoc.exact()),
    )
}

fn c3_consistency() -> Verdict {
    let vs: Vec<Value> = ["1", "inf"].iter().map(|p| prov("|- bot", &h(p))).collect();
    verdict(vs.iter().all(Value::is_zero), format!("p=1 {}, p=inf {}", vs[0].exact(), vs[1].exact()))
}

fn c4_injection() -> Verdict {
    let mut ok = true;
    let mut notes = Vec::new();
    for p in ["1", "2", "inf"].map(h) {
        let inj = prov("a |- (a + b)", &p);
        let refl = prov("a & b |- a & b", &p);
        let t = Theory::empty(&p);
        let eta = fixtures::reference_proofs(&p)["eta"].clone();
        let checks = eta.check(&p, &t).is_ok();
        let ev = eta.validity().unwrap();
        // 2^{-1/p} as a power coordinate is 1/2, and 1 at p = ∞.
        let want_eta = if p.is_infinite() { Ext::one() } else { power("1/2") };
        let good = inj == Value::one(&p) && refl == Value::one(&p) && checks && ev.power() == &want_eta;
        ok &= good;
        notes.push(format!("p={p}: inj {} refl {} eta {}", inj.exact(), refl.exact(), ev.exact()));
    }
    verdict(ok, notes.join("; "))
}

fn corpus_values(ps: &[Hardness]) -> (Vec<Sequent>, Vec<Vec<Value>>) {
    let corpus = sequent_corpus(200, 6, 20_251);
    let mut rows = vec![Vec::new(); corpus.len()];
    for p in ps {
        let mut pr = Prover::new(p, &Theory::empty(p), &ProverOptions::default()).unwrap();
        for (i, s) in corpus.iter().enumerate() {
            rows[i].push(pr.value(s).unwrap());
        }
    }
    (corpus, rows)
}

fn c5_cross_p() -> Verdict {
    let t0 = Instant::now();
    let (corpus, rows) = corpus_values(&[h("1"), h("inf")]);
    let bad: Vec<String> = corpus
        .iter()
        .zip(&rows)
        .filter(|(_, r)| (!r[0].is_zero()) != (r[1].power() >= &Ext::one()))
        .map(|(s, r)| format!("{s}: {} vs {}", r[0].exact(), r[1].exact()))
        .collect();
    let (fast, time) = within(t0, Duration::from_secs(120));
    let positive = rows.iter().filter(|r| !r[0].is_zero()).count();
    verdict(
        bad.is_empty() && fast,
        format!("{} sequents, {positive} positive, {} exceptions {:?}, {time}", corpus.len(), bad.len(), bad.first()),
    )
}

fn c6_approximation() -> Verdict {
    let ps: Vec<Hardness> = ["1", "2", "4", "8", "16", "inf"].map(h).to_vec();
    let (corpus, rows) = corpus_values(&ps);
    let mut considered = 0;
    let mut worst16: f64 = 0.0;
    let mut bad = Vec::new();
    for (s, r) in corpus.iter().zip(&rows) {
        if r.iter().any(|v| v.is_zero() || v.is_infinite()) {
            continue;
        }
        considered += 1;
        let hard = r[5].to_float();
        let gaps: Vec<f64> = r[..5].iter().map(|v| (v.to_float() - hard).abs()).collect();
        if gaps.windows(2).any(|w| w[1] > w[0] + GAP_SLACK) || gaps[4] >= GAP_AT_16 {
            bad.push(format!("{s}: {gaps:?}"));
        }
        worst16 = worst16.max(gaps[4]);
    }
    verdict(
        bad.is_empty() && considered > 0,
        format!(
            "{considered} finite positive sequents, max gap at p=16 {worst16:.4}, {} exceptions {:?}",
            bad.len(),
            bad.first()
        ),
    )
}

fn c7_cut_elimination() -> Verdict {
    let t0 = Instant::now();
    let mut r = ChaCha8Rng::seed_from_u64(77);
    let (mut steps, mut metric_bad, mut validity_bad, mut other_bad) = (0, 0, 0, Vec::new());
    let mut increased = 0;
    let mut stalled: Vec<&str> = Vec::new();
    for i in 0..100 {
        let p = [h("1"), h("2"), h("inf")][i % 3].clone();
        let t = if i % 2 == 0 {
            Theory::empty(&p)
        } else {
            Theory::empty(&p)
                .with_atom("a", Value::parse("2", &p).unwrap())
                .unwrap()
                .with_atom("b", Value::parse("1/3", &p).unwrap())
                .unwrap()
        };
        let mut gen = CutProofs::new(&p, &t).unwrap();
        let proof = gen.proof(&mut r, 3);
        let before = proof.power(&p);
        match cut_eliminate_tree(&proof, &p, &t) {
            Ok((out, trace)) => {
                steps += trace.steps.len();
                for s in trace.steps.iter().filter(|s| s.after >= s.before) {
                    metric_bad += 1;
                    if !stalled.contains(&s.case) {
                        stalled.push(s.case);
                    }
                }
                validity_bad +=
                    trace.steps.iter().filter(|s| s.validity_after.power() < s.validity_before.power()).count();
                let d = out.to_derivation();
                if !d.is_cut_free() || out.conclusion != proof.conclusion || d.check(&p, &t).is_err() {
                    other_bad.push(format!("proof {i}: bad output"));
                }
                if out.power(&p) < before {
                    other_bad.push(format!("proof {i}: validity dropped"));
                } else if out.power(&p) > before {
                    increased += 1;
                }
            }
            Err(e) => other_bad.push(format!("proof {i}: {e}")),
        }
    }
    let (fast, time) = within(t0, Duration::from_secs(60));
    verdict(
        metric_bad == 0 && validity_bad == 0 && other_bad.is_empty() && fast,
        format!(
            "100 proofs, {steps} steps, {metric_bad} steps without metric decrease {stalled:?}, {validity_bad} validity drops, \
             {increased} proofs gained validity, failures {:?}, {time}",
            other_bad.first()
        ),
    )
}

fn rational(r: &mut impl Rng) -> BigRational {
    BigRational::new(BigInt::from(r.gen_range(1..=60)), BigInt::from(r.gen_range(1..=60)))
}

fn ext(r: &mut impl Rng) -> Ext {
    match r.gen_range(0..8) {
        0 => Ext::Zero,
        1 => Ext::Inf,
        2 => Ext::one(),
        _ => Ext::from_rational(rational(r)),
    }
}

/// All corner tuples over {0, 1, ∞} followed by random tuples.
fn instances(n: usize, r: &mut impl Rng) -> Vec<Vec<Ext>> {
    let mut out = tuple_grid(&[Ext::Zero, Ext::one(), Ext::Inf], n);
    while out.len() < LAW_SAMPLES {
        out.push((0..n).map(|_| ext(r)).collect());
    }
    out
}

fn float_of(e: &Ext) -> f64 {
    match e {
        Ext::Zero => 0.0,
        Ext::Inf => f64::INFINITY,
        Ext::Pos(q) => q.to_f64().unwrap(),
    }
}

fn c8_alethic_laws() -> Verdict {
    let mut r = ChaCha8Rng::seed_from_u64(8);
    let mut failures: Vec<String> = Vec::new();
    let mut law = |name: &str, n: usize, r: &mut ChaCha8Rng, f: &dyn Fn(&[Ext], &Hardness) -> bool| {
        for xs in instances(n, r) {
            let p = [h("1"), h("2"), h("3/2"), h("inf")][r.gen_range(0..4)].clone();
            if !f(&xs, &p) {
                failures.push(format!("{name} at {xs:?} p={p}"));
                return;
            }
        }
    };
    let one = Ext::one();
    law("soft operations are monotone", 3, &mut r, &|x, p| {
        let (a, a2) = if x[0] <= x[1] { (&x[0], &x[1]) } else { (&x[1], &x[0]) };
        a.pcoadd(&x[2], p) <= a2.pcoadd(&x[2], p) && a.padd(&x[2], p) <= a2.padd(&x[2], p)
    });
    law("meet below, join above", 2, &mut r, &|x, p| x[0].pcoadd(&x[1], p) <= x[0] && x[0] <= x[0].padd(&x[1], p));
    law("tensor distributes over join", 3, &mut r, &|x, p| {
        x[0].tensor(&x[1]).padd(&x[0].tensor(&x[2]), p) == x[0].tensor(&x[1].padd(&x[2], p))
    });
    law("cotensor distributes over meet", 3, &mut r, &|x, p| {
        x[0].cotensor(&x[1]).pcoadd(&x[0].cotensor(&x[2]), p) == x[0].cotensor(&x[1].pcoadd(&x[2], p))
    });
    law("cotensor distributes over join", 3, &mut r, &|x, p| {
        x[0].cotensor(&x[1]).padd(&x[0].cotensor(&x[2]), p) == x[0].cotensor(&x[1].padd(&x[2], p))
    });
    law("tensor distributes over meet", 3, &mut r, &|x, p| {
        x[0].tensor(&x[1].pcoadd(&x[2], p)) == x[0].tensor(&x[1]).pcoadd(&x[0].tensor(&x[2]), p)
    });
    law("residual out of meets and joins", 3, &mut r, &|x, p| {
        let (a, b, c) = (&x[0], &x[1], &x[2]);
        c.residual(&a.pcoadd(b, p)) == c.residual(a).pcoadd(&c.residual(b), p)
            && a.padd(b, p).residual(c) == a.residual(c).pcoadd(&b.residual(c), p)
            && c.residual(&a.padd(b, p)) == c.residual(a).padd(&c.residual(b), p)
            && a.pcoadd(b, p).residual(c) == a.residual(c).padd(&b.residual(c), p)
    });
    law("generalized fractions", 4, &mut r, &|x, _| {
        let (a, b, c, d) = (&x[0], &x[1], &x[2], &x[3]);
        Ext::one() <= a.residual(a)
            && b.residual(a).tensor(&c.residual(b)) <= c.residual(a)
            && b.residual(a).tensor(&d.residual(c)) <= b.tensor(d).residual(&a.tensor(c))
            && a.residual(&b.residual(c)) == a.tensor(b).residual(c)
    });
    law("max-product bound", 4, &mut r, &|x, p| {
        let (a, b, c, d) = (&x[0], &x[1], &x[2], &x[3]);
        a.padd(b, p).tensor(&c.pcoadd(d, p)) <= a.tensor(c).max(b.tensor(d))
    });
    law("dual cancellation", 2, &mut r, &|x, p| {
        let lhs = one.padd(&x[0], p).pcoadd(&x[1].padd(&one, p), p);
        if p.is_infinite() {
            one <= lhs
        } else {
            (one <= lhs) == (x[0].dual() <= x[1])
        }
    });
    law("linear distributivity", 3, &mut r, &|x, _| {
        x[0].cotensor(&x[1]).tensor(&x[2]) <= x[0].cotensor(&x[1].tensor(&x[2]))
    });
    law("harder joins are smaller", 2, &mut r, &|x, _| {
        // Real magnitudes a, b; compare p-sums at p = 1, 2, 3 exactly.
        let pows = |k: i32| -> Option<BigRational> {
            let f = |e: &Ext| e.to_rational().map(|q| num::pow::pow(q, k as usize));
            Some(f(&x[0])? + f(&x[1])?)
        };
        match (pows(1), pows(2), pows(3)) {
            // s1 ≥ s2^{1/2} ≥ s3^{1/3}  ⇔  s1^2 ≥ s2 and s2^3 ≥ s3^2
            (Some(s1), Some(s2), Some(s3)) => {
                num::pow::pow(s1, 2) >= s2.clone() && num::pow::pow(s2, 3) >= num::pow::pow(s3, 2)
            }
            _ => true,
        }
    });
    // The max-product bound against a float evaluation on finite inputs.
    let mut worst: f64 = 0.0;
    for _ in 0..LAW_SAMPLES {
        let xs: Vec<BigRational> = (0..4).map(|_| rational(&mut r)).collect();
        let p = r.gen_range(1..=4) as f64;
        let hp = Hardness::integer(p as u32);
        let f: Vec<f64> = xs.iter().map(|q| float_of(&Ext::from_rational(q.clone()))).collect();
        let lhs_float = (f[0].powf(p) + f[1].powf(p)).powf(1.0 / p) * (f[2].powf(-p) + f[3].powf(-p)).powf(-1.0 / p);
        let pw: Vec<Ext> = xs.iter().map(|q| Ext::from_rational(num::pow::pow(q.clone(), p as usize))).collect();
        let lhs_exact = pw[0].padd(&pw[1], &hp).tensor(&pw[2].pcoadd(&pw[3], &hp)).root_f64(&hp);
        let rhs_float = (f[0] * f[2]).max(f[1] * f[3]);
        let rel = ((lhs_exact - lhs_float) / lhs_float).abs();
        worst = worst.max(rel);
        if rel > FLOAT_ORACLE_TOL || lhs_float > rhs_float * (1.0 + FLOAT_ORACLE_TOL) {
            failures.push(format!("float oracle at {f:?} p={p}: {lhs_exact} vs {lhs_float}, bound {rhs_float}"));
            break;
        }
    }
    verdict(
        failures.is_empty(),
        format!(
            "12 laws x {LAW_SAMPLES} instances, float oracle max rel err {worst:.1e}, failures {:?}",
            failures.first()
        ),
    )
}

fn random_valuation(r: &mut impl Rng, atoms: &[&str]) -> Valuation<Ext> {
    atoms
        .iter()
        .map(|a| {
            let v = match r.gen_range(0..10) {
                0 => Ext::Zero,
                1 => Ext::Inf,
                _ => Ext::from_ratio(r.gen_range(1..=12), r.gen_range(1..=12)),
            };
            (a.to_string(), v)
        })
        .collect()
}

fn c9_soundness() -> Verdict {
    let p = h("1");
    let s = real_softale(&p);
    let mut r = ChaCha8Rng::seed_from_u64(9);
    let mut checked = 0;
    let mut bad = Vec::new();
    let names = |xs: &[&str]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    for _ in 0..100 {
        let v = random_valuation(&mut r, &["a", "b", "c", "x", "y", "z"]);
        let mut proofs: Vec<(String, Derivation)> =
            fixtures::reference_proofs(&p).into_iter().map(|(k, d)| (k.to_string(), d)).collect();
        let mut t = Theory::empty(&p).with_mix_star(true);
        for x in ["x", "y", "z"] {
            t = t.with_atom(x, Value::from_power(v[x].clone(), &p)).unwrap();
        }
        let bp = fixtures::bayes_proof(&t, &names(&["x", "y"]), &names(&["y", "z"])).unwrap();
        proofs.push(("bayes".into(), bp.to_derivation()));
        for (name, d) in proofs {
            let (val, sem) = soundness_gap(&d, &v, &s).unwrap();
            checked += 1;
            if val.power() > sem.power() {
                bad.push(format!("{name} at {v:?}: {} > {}", val.exact(), sem.exact()));
            }
        }
    }
    verdict(bad.is_empty(), format!("{checked} proof/valuation pairs, {} exceptions {:?}", bad.len(), bad.first()))
}

/// The real softale with `0 ⊗ ∞ = ∞`.
struct Corrupted(qll_core::semantics::RealSoftale);

impl Softale for Corrupted {
    type Elem = Ext;
    fn hardness(&self) -> &Hardness {
        self.0.hardness()
    }
    fn order(&self, a: &Ext, b: &Ext) -> Ext {
        self.0.order(a, b)
    }
    fn tensor(&self, a: &Ext, b: &Ext) -> Ext {
        if (a.is_zero() && b.is_inf()) || (a.is_inf() && b.is_zero()) {
            Ext::Inf
        } else {
            self.0.tensor(a, b)
        }
    }
    fn dual(&self, a: &Ext) -> Ext {
        self.0.dual(a)
    }
    fn unit(&self) -> Ext {
        self.0.unit()
    }
    fn bot(&self) -> Ext {
        self.0.bot()
    }
    fn pjoin(&self, a: &Ext, b: &Ext) -> Ext {
        self.0.pjoin(a, b)
    }
    fn parse_elem(&self, text: &str) -> Result<Ext, qll_core::alethic::AlethicError> {
        self.0.parse_elem(text)
    }
    fn show(&self, a: &Ext) -> String {
        self.0.show(a)
    }
}

fn c10_softale_axioms() -> Verdict {
    let grid: Vec<Ext> = ["0", "1/3", "1/2", "1", "2", "3", "inf"].iter().map(|s| power(s)).collect();
    let r1 = check_softale_axioms(&real_softale(&h("1")), &grid);
    let rinf = check_softale_axioms(&real_softale(&h("inf")), &grid);
    let pw = pointwise_softale(2, &h("1"));
    let small: Vec<Ext> = ["0", "1/2", "1", "2", "inf"].iter().map(|s| power(s)).collect();
    let rp = check_softale_axioms(&pw, &tuple_grid(&small, 2));
    let rc = check_softale_axioms(&Corrupted(real_softale(&h("1"))), &grid);
    let witness = rp.prelinearity.first().map(|v| v.to_string()).unwrap_or_default();
    let corrupted = rc.violations.first().map(|v| v.axiom).unwrap_or("none");
    let ok = r1.passes()
        && rinf.passes()
        && r1.prelinear()
        && rinf.prelinear()
        && rp.passes()
        && !rp.prelinear()
        && !rc.passes();
    verdict(
        ok,
        format!(
            "real p=1 {} violations, real p=inf {}, pointwise {} (prelinearity witness: {witness}), corrupted tensor caught by {corrupted}",
            r1.violations.len(),
            rinf.violations.len(),
            rp.violations.len()
        ),
    )
}

fn odds_oracle(d: &Density, a: &[String], b: &[String]) -> Ext {
    let inter: Vec<String> = b.iter().filter(|x| a.contains(x)).cloned().collect();
    let pa = Ext::from_rational(d.probability(a).unwrap());
    let pab = Ext::from_rational(d.probability(&inter).unwrap());
    pa.residual(&pab)
}

fn c11_bayes() -> Verdict {
    let t0 = Instant::now();
    let p = h("1");
    let names = |xs: &[&str]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    let d = Density::new(names(&["x", "y", "z"]).into_iter().zip([q(1, 2), q(1, 3), q(1, 6)])).unwrap();
    let (a, b) = (names(&["x", "y"]), names(&["y", "z"]));
    let main = conditional_odds(&d, &a, &b, &p, None).unwrap().value;
    let mut ok = main.power() == &power("2/5") && main.power() == &odds_oracle(&d, &a, &b);
    let mut notes = vec![format!("main {}", main.exact())];
    let mut r = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5 {
        let n = r.gen_range(2..=3);
        let omega: Vec<String> = ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect();
        let mut left = 6;
        let mut masses = Vec::new();
        for i in 0..n {
            let m = if i + 1 == n { left } else { r.gen_range(0..=left) };
            left -= m;
            masses.push(q(m, 6));
        }
        let dens = Density::new(omega.clone().into_iter().zip(masses.clone())).unwrap();
        let pick = |r: &mut ChaCha8Rng, nonempty: bool| loop {
            let e: Vec<String> = omega.iter().filter(|_| r.gen_bool(0.5)).cloned().collect();
            if !nonempty || !e.is_empty() {
                return e;
            }
        };
        let (ea, eb) = (pick(&mut r, true), pick(&mut r, false));
        let got = conditional_odds(&dens, &ea, &eb, &p, None).unwrap().value;
        let want = odds_oracle(&dens, &ea, &eb);
        ok &= got.power() == &want;
        let ms: Vec<String> = masses.iter().map(|m| m.to_string()).collect();
        notes.push(format!("[{}] A={ea:?} B={eb:?} -> {} (oracle {want})", ms.join(","), got.exact()));
    }
    let (fast, time) = within(t0, Duration::from_secs(30));
    verdict(ok && fast, format!("{}; {time}", notes.join("; ")))
}

fn formulas_with(connectives: usize, leaves: &[Formula]) -> Vec<Formula> {
    if connectives == 0 {
        return leaves.to_vec();
    }
    let mut out = Vec::new();
    for l in 0..connectives {
        for a in formulas_with(l, leaves) {
            for b in formulas_with(connectives - 1 - l, leaves) {
                out.push(Formula::tensor(a.clone(), b.clone()));
                out.push(Formula::par(a.clone(), b.clone()));
                out.push(Formula::plor(a.clone(), b.clone()));
                out.push(Formula::pland(a.clone(), b.clone()));
            }
        }
    }
    out
}

fn c12_prelinearity() -> Verdict {
    let p = h("1");
    let t = Theory::empty(&p)
        .with_atom("a", Value::parse("2", &p).unwrap())
        .unwrap()
        .with_atom("b", Value::parse("3", &p).unwrap())
        .unwrap()
        .with_mix_star(true);
    let leaves = [Formula::atom("a"), Formula::atom("b"), Formula::neg_atom("a"), Formula::neg_atom("b")];
    let by_size: Vec<Vec<Formula>> = (0..=2).map(|k| formulas_with(k, &leaves)).collect();
    let mut pr = Prover::new(&p, &t, &ProverOptions::default()).unwrap();
    let (mut pairs, mut bad) = (0, Vec::new());
    for ka in 0..=2 {
        for kb in 0..=(2 - ka) {
            for a in &by_size[ka] {
                for b in &by_size[kb] {
                    let ab = pr
                        .value(&Sequent::new([a.clone()].into_iter().collect(), [b.clone()].into_iter().collect()))
                        .unwrap();
                    let ba = pr
                        .value(&Sequent::new([b.clone()].into_iter().collect(), [a.clone()].into_iter().collect()))
                        .unwrap();
                    pairs += 1;
                    if ab.dual().power() > ba.power() {
                        bad.push(format!("{a} / {b}: {} vs {}", ab.exact(), ba.exact()));
                    }
                }
            }
        }
    }
    verdict(bad.is_empty(), format!("{pairs} ordered pairs, {} exceptions {:?}", bad.len(), bad.first()))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("idempotency value", c1_idempotency),
        ("soft conjunction commutativity and associativity", c2_soft_and_laws),
        ("consistency", c3_consistency),
        ("injection and axiom shortcut", c4_injection),
        ("cross-hardness equivalence", c5_cross_p),
        ("approximation of the hard values", c6_approximation),
        ("cut elimination", c7_cut_elimination),
        ("alethic laws", c8_alethic_laws),
        ("soundness", c9_soundness),
        ("softale axiom checker", c10_softale_axioms),
        ("conditional odds", c11_bayes),
        ("prelinearity", c12_prelinearity),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let v = run();
        if !v.ok {
            failed += 1;
        }
        println!("criterion {:>2} {name}: {} ({})", i + 1, if v.ok { "PASS" } else { "FAIL" }, v.detail);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
