//! Seeded invariant suite behind `alphadiv selftest`.

use crate::centroid::{qa_centroid, CentroidOptions, Side};
use crate::conformal::{bregman_div, conformal_i1, ConvexGenerator};
use crate::densities::{
    parse_density, write_density, DensityFormat, DensityPair, DiscreteDensity, LoadOptions,
};
use crate::divergences::{fg_cross_entropy, fg_entropy, fg_kl, AlphaParam, QaPair};
use crate::means::{check_strict_comparability, default_grid, Generator};
use crate::power_family::{
    csiszar_div, homogeneity_check, power_alpha_div, PowerPair, RsGenerator,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;

pub const DEFAULT_SEED: u64 = 20240917;

/// Comparable generator pairs `(f, g)` exercised by the suite.
pub const FAMILIES: [(&str, &str); 6] = [
    ("identity", "log"),
    ("identity", "recip"),
    ("log", "recip"),
    ("pow:2", "pow:1"),
    ("pow:3", "pow:0.5"),
    ("pow:-0.5", "pow:-2"),
];

#[derive(Debug, Clone, Copy)]
pub struct SelftestOptions {
    pub seed: u64,
    pub cases: usize,
    /// Deliberately compares `I_α[p:q]` with `I_α[q:p]`; the duality property must catch it.
    pub break_duality: bool,
}

impl Default for SelftestOptions {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            cases: 200,
            break_duality: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PropertyOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    /// Largest observed error measure.
    pub worst: f64,
    pub first_failure: Option<String>,
}

impl PropertyOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

impl fmt::Display for PropertyOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<26} cases={:<5} worst={:.3e}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.cases,
            self.worst
        )?;
        if let Some(msg) = &self.first_failure {
            write!(f, " first failure: {}", msg)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SelftestReport {
    pub seed: u64,
    pub outcomes: Vec<PropertyOutcome>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(PropertyOutcome::passed)
    }

    pub fn failed_names(&self) -> Vec<&'static str> {
        self.outcomes
            .iter()
            .filter(|o| !o.passed())
            .map(|o| o.name)
            .collect()
    }
}

impl fmt::Display for SelftestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "selftest seed={}", self.seed)?;
        for o in &self.outcomes {
            writeln!(f, "{}", o)?;
        }
        let failed = self.failed_names();
        if failed.is_empty() {
            write!(f, "all {} properties passed", self.outcomes.len())
        } else {
            write!(f, "{} failed: {}", failed.len(), failed.join(", "))
        }
    }
}

struct Tally {
    outcome: PropertyOutcome,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Self {
            outcome: PropertyOutcome {
                name,
                cases: 0,
                failures: 0,
                worst: 0.0,
                first_failure: None,
            },
        }
    }

    /// Records one case whose error measure must not exceed `limit`.
    fn record(&mut self, err: f64, limit: f64, context: impl FnOnce() -> String) {
        self.outcome.cases += 1;
        let err = if err.is_nan() { f64::INFINITY } else { err };
        self.outcome.worst = self.outcome.worst.max(err);
        if err > limit {
            self.outcome.failures += 1;
            if self.outcome.first_failure.is_none() {
                self.outcome.first_failure = Some(context());
            }
        }
    }

    fn fail(&mut self, context: String) {
        self.record(f64::INFINITY, 0.0, || context);
    }

    fn finish(self) -> PropertyOutcome {
        self.outcome
    }
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

fn random_pair(rng: &mut ChaCha8Rng) -> DensityPair<f64> {
    let n = rng.gen_range(1..=8);
    let support: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let weights: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..2.0)).collect();
    let p: Vec<f64> = (0..n).map(|_| log_uniform(rng, 0.1, 10.0)).collect();
    let q: Vec<f64> = (0..n).map(|_| log_uniform(rng, 0.1, 10.0)).collect();
    DensityPair::new(
        DiscreteDensity::new(support.clone(), p, weights.clone()).expect("valid"),
        DiscreteDensity::new(support, q, weights).expect("valid"),
    )
    .expect("aligned")
}

fn random_family(rng: &mut ChaCha8Rng) -> QaPair<f64> {
    let (f, g) = FAMILIES[rng.gen_range(0..FAMILIES.len())];
    QaPair::new(
        Generator::from_id(f).expect("known"),
        Generator::from_id(g).expect("known"),
    )
    .expect("comparable")
}

fn mean_axioms(rng: &mut ChaCha8Rng, cases: usize) -> PropertyOutcome {
    let mut t = Tally::new("mean_axioms");
    let gens: Vec<Generator<f64>> = ["identity", "log", "recip", "pow:2", "pow:-0.5", "pow:3"]
        .iter()
        .map(|id| Generator::from_id(id).expect("known"))
        .collect();
    for _ in 0..cases {
        let g = &gens[rng.gen_range(0..gens.len())];
        let (x, y) = (log_uniform(rng, 0.01, 100.0), log_uniform(rng, 0.01, 100.0));
        let a: f64 = rng.gen_range(0.0..=1.0);
        let m = g.mean(a, x, y);
        let outside = (x.min(y) - m).max(m - x.max(y)).max(0.0);
        t.record(outside, 0.0, || {
            format!("{} innerness x={} y={} α={}", g.id(), x, y, a)
        });
        t.record(rel(g.mean(a, x, x), x), 0.0, || {
            format!("{} reflexivity x={}", g.id(), x)
        });
        t.record(rel(g.mean(a, x, y), g.mean(1.0 - a, y, x)), 1e-13, || {
            format!("{} symmetry x={} y={} α={}", g.id(), x, y, a)
        });
    }
    t.finish()
}

fn comparability(_: &mut ChaCha8Rng, _: usize) -> PropertyOutcome {
    let mut t = Tally::new("strict_comparability");
    let grid = default_grid::<f64>();
    for (f, g) in FAMILIES {
        let (f, g) = (
            Generator::from_id(f).expect("known"),
            Generator::from_id(g).expect("known"),
        );
        match check_strict_comparability(&f, &g, &grid) {
            Ok(c) if c.is_comparable() => t.record(0.0, 0.0, String::new),
            _ => t.fail(format!("({}, {}) not certified", f.id(), g.id())),
        }
        match check_strict_comparability(&g, &f, &grid) {
            Ok(c) if !c.is_comparable() => t.record(0.0, 0.0, String::new),
            _ => t.fail(format!("reversed ({}, {}) certified", g.id(), f.id())),
        }
    }
    t.finish()
}

fn axioms(rng: &mut ChaCha8Rng, cases: usize) -> (PropertyOutcome, PropertyOutcome) {
    let mut nonneg = Tally::new("nonnegativity");
    let mut indisc = Tally::new("identity_of_indiscernibles");
    for _ in 0..cases {
        let qa = random_family(rng);
        let pair = random_pair(rng);
        let alpha: f64 = rng.gen_range(0.0..=1.0);
        let r = qa.alpha_div(alpha, &pair).expect("valid");
        let tol = 1e-12 * r.n_points as f64;
        nonneg.record((-r.value).max(0.0), tol, || {
            format!(
                "({}, {}) α={} value={}",
                qa.f().id(),
                qa.g().id(),
                alpha,
                r.value
            )
        });
        let same = DensityPair::new(pair.p.clone(), pair.p.clone()).expect("aligned");
        let z = qa.alpha_div(alpha, &same).expect("valid").value;
        indisc.record(z.abs(), tol, || {
            format!("({}, {}) p=q gives {}", qa.f().id(), qa.g().id(), z)
        });
    }
    (nonneg.finish(), indisc.finish())
}

fn duality(rng: &mut ChaCha8Rng, cases: usize, broken: bool) -> PropertyOutcome {
    let mut t = Tally::new("reference_duality");
    for _ in 0..cases {
        let qa = random_family(rng);
        let pair = random_pair(rng);
        let alpha: f64 = rng.gen_range(0.0..=1.0);
        let a = qa.alpha_div(alpha, &pair).expect("valid").value;
        let dual_alpha = if broken { alpha } else { 1.0 - alpha };
        let b = qa
            .alpha_div(dual_alpha, &pair.swapped())
            .expect("valid")
            .value;
        t.record(rel(a, b), 1e-12, || {
            format!(
                "({}, {}) α={} {} vs {}",
                qa.f().id(),
                qa.g().id(),
                alpha,
                a,
                b
            )
        });
    }
    t.finish()
}

fn limits(rng: &mut ChaCha8Rng, cases: usize) -> PropertyOutcome {
    let mut t = Tally::new("limit_consistency");
    // the O(ε) constant grows with max(p/q, q/p); below a ratio of 5 it stays under 10
    let families: Vec<QaPair<f64>> = [
        ("identity", "log"),
        ("identity", "recip"),
        ("log", "recip"),
        ("pow:2", "pow:1"),
    ]
    .iter()
    .map(|(f, g)| {
        QaPair::new(
            Generator::from_id(f).expect("known"),
            Generator::from_id(g).expect("known"),
        )
        .expect("comparable")
    })
    .collect();
    for _ in 0..cases {
        let qa = &families[rng.gen_range(0..families.len())];
        let (p, q) = (log_uniform(rng, 0.5, 2.5), log_uniform(rng, 0.5, 2.5));
        let closed = qa.i1_pointwise(p, q);
        for eps in [1e-2, 1e-3, 1e-4] {
            let near = qa.pointwise(1.0 - eps, p, q);
            t.record(rel(near, closed) / eps, 10.0, || {
                format!(
                    "({}, {}) p={} q={} ε={}",
                    qa.f().id(),
                    qa.g().id(),
                    p,
                    q,
                    eps
                )
            });
        }
    }
    t.finish()
}

fn dominance(rng: &mut ChaCha8Rng, cases: usize) -> PropertyOutcome {
    let mut t = Tally::new("e_dominance");
    for _ in 0..cases * 10 {
        let qa = random_family(rng);
        let (p, q) = (log_uniform(rng, 0.01, 100.0), log_uniform(rng, 0.01, 100.0));
        let (ef, eg) = (qa.f().e_term(p, q), qa.g().e_term(p, q));
        let scale = ef.abs().max(eg.abs()).max(f64::MIN_POSITIVE);
        t.record(((eg - ef) / scale).max(0.0), 1e-14, || {
            format!(
                "({}, {}) p={} q={} E_f={} E_g={}",
                qa.f().id(),
                qa.g().id(),
                p,
                q,
                ef,
                eg
            )
        });
    }
    t.finish()
}

fn conformal(rng: &mut ChaCha8Rng, cases: usize) -> (PropertyOutcome, PropertyOutcome) {
    let mut t = Tally::new("conformal_identity");
    for _ in 0..cases {
        let qa = random_family(rng);
        let pair = random_pair(rng);
        let a = conformal_i1(qa.f(), qa.g(), &pair).expect("comparable");
        let b = qa.alpha_div(1.0, &pair).expect("valid").value;
        t.record(rel(a, b), 1e-10, || {
            format!("({}, {}) {} vs {}", qa.f().id(), qa.g().id(), a, b)
        });
    }
    let mut b = Tally::new("bregman_nonnegative");
    let gens = [ConvexGenerator::<f64>::square(), ConvexGenerator::exp()];
    for _ in 0..cases {
        let big_f = &gens[rng.gen_range(0..gens.len())];
        let (x, y) = (rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
        let v = bregman_div(big_f, x, y).expect("finite");
        let bad = if x == y {
            v.abs()
        } else if v > 0.0 {
            0.0
        } else {
            1.0
        };
        b.record(bad, 0.0, || {
            format!("B_{}({}:{}) = {}", big_f.id(), x, y, v)
        });
    }
    (t.finish(), b.finish())
}

fn decomposition(rng: &mut ChaCha8Rng, cases: usize) -> PropertyOutcome {
    let mut t = Tally::new("entropy_decomposition");
    for _ in 0..cases {
        let qa = random_family(rng);
        let pair = random_pair(rng);
        let (f, g) = (qa.f(), qa.g());
        let kl = fg_kl(f, g, &pair).expect("comparable");
        let split = fg_cross_entropy(f, g, &pair).expect("comparable")
            - fg_entropy(f, g, &pair.p).expect("comparable");
        t.record(if kl == split { 0.0 } else { 1.0 }, 0.0, || {
            format!("({}, {}) {} vs {}", f.id(), g.id(), kl, split)
        });
        let i1 = qa.alpha_div(1.0, &pair).expect("valid").value;
        // the difference of two entropies cancels; measure against their scale
        let scale = fg_cross_entropy(f, g, &pair)
            .expect("comparable")
            .abs()
            .max(i1);
        t.record((kl - i1).abs() / scale, 1e-10, || {
            format!("({}, {}) KL {} vs I₁ {}", f.id(), g.id(), kl, i1)
        });
    }
    t.finish()
}

fn power_family(rng: &mut ChaCha8Rng, cases: usize) -> (PropertyOutcome, PropertyOutcome) {
    let mut cs = Tally::new("csiszar_equivalence");
    let mut hom = Tally::new("homogeneity");
    let pairs = [(1.0, -1.0), (2.0, 1.0), (3.0, 0.5), (0.0, -1.0)];
    for _ in 0..cases {
        let (r, s) = pairs[rng.gen_range(0..pairs.len())];
        let rs = PowerPair::new(r, s).expect("r > s");
        let alpha = rng.gen_range(0.05..0.95);
        let pair = random_pair(rng);
        let a = power_alpha_div(&rs, alpha, &pair).expect("valid").value;
        let b = csiszar_div(&RsGenerator::new(rs, alpha).expect("open α"), &pair);
        cs.record(rel(a, b), 1e-10, || {
            format!("({}, {}) α={} {} vs {}", r, s, alpha, a, b)
        });
        let lambda = log_uniform(rng, 1e-3, 1e3);
        let e = homogeneity_check(&rs, alpha, &pair, lambda).expect("valid");
        hom.record(e, 1e-12, || {
            format!("({}, {}) α={} λ={}", r, s, alpha, lambda)
        });
    }
    (cs.finish(), hom.finish())
}

fn alpha_roundtrip(rng: &mut ChaCha8Rng, cases: usize) -> PropertyOutcome {
    let mut t = Tally::new("alpha_roundtrip");
    for _ in 0..cases {
        let a: f64 = rng.gen_range(0.0..=1.0);
        let back =
            AlphaParam::standard(a).to_convention(crate::divergences::AlphaConvention::Amari);
        let back = AlphaParam::amari(back.value()).alpha();
        t.record(rel(a, back), 1e-15, || {
            format!("α={} came back as {}", a, back)
        });
        let exact = AlphaParam::standard(a)
            .to_convention(crate::divergences::AlphaConvention::Amari)
            .to_convention(crate::divergences::AlphaConvention::Standard)
            .value();
        t.record(if exact == a { 0.0 } else { 1.0 }, 0.0, || {
            format!("α={} round trip gave {}", a, exact)
        });
    }
    t.finish()
}

fn io_roundtrip(rng: &mut ChaCha8Rng, cases: usize) -> PropertyOutcome {
    let mut t = Tally::new("density_io_roundtrip");
    for _ in 0..cases {
        let d = random_pair(rng).p;
        for format in [DensityFormat::Csv, DensityFormat::Json] {
            let Ok(text) = write_density(&d, format) else {
                t.fail(format!("{:?} write failed", format));
                continue;
            };
            match parse_density::<f64>(&text, format, LoadOptions::default()) {
                Ok(back) if back.density == d => t.record(0.0, 0.0, String::new),
                _ => t.fail(format!("{:?} round trip changed the density", format)),
            }
        }
    }
    t.finish()
}

fn centroid(rng: &mut ChaCha8Rng, cases: usize) -> PropertyOutcome {
    let mut t = Tally::new("centroid_monotone");
    for _ in 0..cases.div_ceil(10) {
        let qa = random_family(rng);
        let base = random_pair(rng);
        let k = rng.gen_range(1..=4);
        let ds: Vec<DiscreteDensity<f64>> = (0..k)
            .map(|_| {
                let values = base
                    .p
                    .values()
                    .iter()
                    .map(|_| log_uniform(rng, 0.1, 10.0))
                    .collect();
                base.p.with_values(values).expect("positive")
            })
            .collect();
        let ws: Vec<f64> = (0..k).map(|_| rng.gen_range(0.5..2.0)).collect();
        let mut opts = CentroidOptions::new(rng.gen_range(0.0..=1.0));
        opts.side = [Side::Left, Side::Right, Side::Jeffreys][rng.gen_range(0..3)];
        let r = qa_centroid(&qa, &ds, &ws, &opts).expect("valid");
        let rises = r.objective_trace.windows(2).filter(|w| w[1] > w[0]).count();
        t.record(rises as f64, 0.0, || {
            format!(
                "({}, {}) {:?} trace rises {} times",
                qa.f().id(),
                qa.g().id(),
                opts.side,
                rises
            )
        });
    }
    t.finish()
}

/// Runs every property on inputs drawn from a ChaCha8 stream seeded with `opts.seed`.
pub fn run_selftest(opts: &SelftestOptions) -> SelftestReport {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let n = opts.cases;
    let mut outcomes = vec![mean_axioms(&mut rng, n), comparability(&mut rng, n)];
    let (a, b) = axioms(&mut rng, n);
    outcomes.extend([a, b]);
    outcomes.push(duality(&mut rng, n, opts.break_duality));
    outcomes.push(limits(&mut rng, n));
    outcomes.push(dominance(&mut rng, n));
    let (a, b) = conformal(&mut rng, n);
    outcomes.extend([a, b]);
    outcomes.push(decomposition(&mut rng, n));
    let (a, b) = power_family(&mut rng, n);
    outcomes.extend([a, b]);
    outcomes.push(alpha_roundtrip(&mut rng, n));
    outcomes.push(io_roundtrip(&mut rng, n));
    outcomes.push(centroid(&mut rng, n));
    SelftestReport {
        seed: opts.seed,
        outcomes,
    }
}
