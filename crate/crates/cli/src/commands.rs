//! One function per subcommand. Each returns JSON data, an optional CSV
//! table, a human rendering and the verdict on its asserted inequalities.

use std::fmt::Write as _;

use anyhow::{bail, ensure, Context};
use serde::Serialize;
use serde_json::{json, Value};

use fhharm::construct::{
    assemble_truncated, default_dense_sequence, explicit_dense_sequence, index_set_b, select_ell, select_ell_relaxed,
    DensePlan, EllSequence, GrowthLemmaConstant, Scale,
};
use fhharm::kuran::{axial_harmonic, kuran_decompose, primitive, primitive_poly, KuranFamily, PrimitiveTerm};
use fhharm::numeric::{from_biguint, int, rat, PRECISION};
use fhharm::random::random_corpus;
use fhharm::report::{content_hash, to_json, write_csv, Envelope, PlanFile};
use fhharm::spheremeans::{inner_product, m2_mean_squared, poisson_constant};
use fhharm::verify::{
    boundary_profile, choose_n_max, exact_cross_check, fhc_residual, fhc_residual_expanded, fit_growth_constant, residual_n_max,
    growth_profile, is_nondecreasing, log_concavity_check, lower_density_raw, poisson_bound_check, skip_lemma_check,
    GrowthLemmaFit, SkipSequence,
};
use fhharm::{Exec, HomogeneousHarmonic, Polynomial, Radius};

use crate::config::{Format, RunConfig};
use crate::Command;

/// Largest relative gap tolerated between 256-bit and exact evaluation.
pub const CROSS_CHECK_TOL: f64 = 1e-50;
/// `c_3` must match `√(20/9)` to this.
pub const C3_TOL: f64 = 1e-9;

pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

pub struct Output {
    pub passed: Option<bool>,
    pub plan_hash: Option<String>,
    pub data: Value,
    pub table: Option<Table>,
    pub pretty: String,
}

impl Output {
    fn new(data: Value, pretty: String) -> Self {
        Output {
            passed: None,
            plan_hash: None,
            data,
            table: None,
            pretty,
        }
    }

    pub fn render(&self, cmd: &Command, config: &RunConfig, pretty: bool) -> anyhow::Result<String> {
        if pretty {
            let mut s = self.pretty.clone();
            if !s.ends_with('\n') {
                s.push('\n');
            }
            if let Some(p) = self.passed {
                let _ = writeln!(s, "{}", if p { "PASS" } else { "FAIL" });
            }
            return Ok(s);
        }
        #[derive(Serialize)]
        struct Echo<'a> {
            command: &'a Command,
            run: &'a RunConfig,
        }
        let echo = Echo { command: cmd, run: config };
        match config.format {
            Format::Json => {
                let mut env = Envelope::new(config.mode, &echo, &self.data).with_plan_hash(self.plan_hash.as_deref());
                if let Some(p) = self.passed {
                    env = env.with_verdict(p);
                }
                Ok(to_json(&env, false)?)
            }
            Format::Csv => {
                let Some(t) = &self.table else {
                    bail!("no CSV form for this subcommand; use --format json");
                };
                let mut header = vec![
                    ("mode", config.mode.as_str().to_string()),
                    ("precision_bits", PRECISION.to_string()),
                    ("config", serde_json::to_string(&echo)?),
                ];
                if let Some(h) = &self.plan_hash {
                    header.push(("plan_hash", h.clone()));
                }
                if let Some(p) = self.passed {
                    header.push(("passed", p.to_string()));
                }
                let mut rows = Vec::with_capacity(t.rows.len() + 1);
                rows.push(t.header.clone());
                rows.extend(t.rows.iter().cloned());
                let mut buf = Vec::new();
                write_csv(&header, &rows, &mut buf)?;
                Ok(String::from_utf8(buf)?)
            }
        }
    }
}

pub fn run(cmd: &Command, cfg: &RunConfig) -> anyhow::Result<Output> {
    match cmd {
        Command::Axial { m } => axial(cfg, *m),
        Command::Decompose { h } => decompose(cfg, h),
        Command::Primitive { h, k } => primitive_cmd(cfg, h, *k),
        Command::Plan => plan(cfg),
        Command::Density {
            k,
            ell,
            t,
            threshold,
            boundaries,
        } => density(cfg, *k, *ell, *t, *threshold, *boundaries),
        Command::Residual { k, n, s, r } => residual(cfg, *k, *n, *s, r),
        Command::Growth { exact_at } => growth(cfg, exact_at),
        Command::Lemmas { no_fit, poisson_corpus } => lemmas(cfg, *no_fit, *poisson_corpus),
        Command::Selftest => selftest(cfg),
    }
}

fn parse_poly(cfg: &RunConfig, s: &str) -> anyhow::Result<Polynomial> {
    let p = Polynomial::parse(s, Some(cfg.n)).with_context(|| format!("parsing {s:?}"))?;
    ensure!(p.is_harmonic(), "{s:?} is not harmonic");
    Ok(p)
}

fn axial(cfg: &RunConfig, m: u32) -> anyhow::Result<Output> {
    let a = axial_harmonic(m, cfg.n)?;
    let pretty = a.poly.poly().to_pretty();
    Ok(Output::new(serde_json::to_value(&a)?, pretty))
}

fn decompose(cfg: &RunConfig, h: &str) -> anyhow::Result<Output> {
    let p = parse_poly(cfg, h)?;
    let mut decs = Vec::new();
    let mut pretty = String::new();
    for c in p.homogeneous_components()? {
        let d = kuran_decompose(&c)?;
        let _ = writeln!(pretty, "degree {}:", d.degree());
        for (q, u) in d.nonzero_parts() {
            let _ = writeln!(pretty, "  u_{q} = {}", u.to_pretty());
        }
        decs.push(d);
    }
    Ok(Output::new(json!({ "H": p, "components": decs }), pretty))
}

fn primitive_cmd(cfg: &RunConfig, h: &str, k: u32) -> anyhow::Result<Output> {
    let p = parse_poly(cfg, h)?;
    let pk = primitive_poly(&p, k)?;
    let inverse = pk.differentiate(1, k)? == p;
    let mut out = Output::new(json!({ "H": p, "k": k, "P_k": pk, "inverse_holds": inverse }), pk.to_pretty());
    out.passed = Some(inverse);
    Ok(out)
}

/// A plan with its `ℓ` sequence and the fit that produced `C′`, if any.
pub struct Built {
    pub plan: DensePlan,
    pub ell: EllSequence,
    pub fit: Option<GrowthLemmaFit>,
    pub file: PlanFile,
    pub hash: String,
}

/// `None` when the configuration describes an empty plan.
pub fn build_plan(cfg: &RunConfig) -> anyhow::Result<Option<Built>> {
    let gens = cfg.generators()?;
    if cfg.k_max == 0 || gens.as_ref().is_some_and(Vec::is_empty) {
        return Ok(None);
    }
    let plan = match gens {
        Some(g) => explicit_dense_sequence(cfg.n, g, cfg.k_max)?,
        None => default_dense_sequence(cfg.n, cfg.dense.coefficient_height, cfg.dense.degree_cap, cfg.k_max)?,
    };
    let mut fit = None;
    let ell = match cfg.mode {
        Scale::Literal => {
            let cp = match &cfg.c_prime {
                Some(v) => GrowthLemmaConstant::new(fhharm::numeric::parse_rational(v)?, "given in the run configuration")?,
                None => {
                    let f = fit_growth_constant(&cfg.fit_grid, Exec::default())?;
                    let cp = GrowthLemmaConstant::new(f.certified.clone(), f.provenance())?;
                    fit = Some(f);
                    cp
                }
            };
            select_ell(&plan, &cfg.c_value()?, cp, cfg.k_max)?
        }
        Scale::Relaxed => {
            let ells = match &cfg.ells {
                Some(e) => e[..cfg.k_max as usize].to_vec(),
                None => select_ell_relaxed(cfg.k_max).ells().to_vec(),
            };
            EllSequence::relaxed(ells, cfg.block_threshold())?
        }
    };
    let file = PlanFile::new(&plan, &ell)?;
    let hash = content_hash(to_json(&file, false)?.as_bytes());
    Ok(Some(Built {
        plan,
        ell,
        fit,
        file,
        hash,
    }))
}

fn require_plan(cfg: &RunConfig) -> anyhow::Result<Built> {
    build_plan(cfg)?.context("the plan is empty (k_max = 0 or no generators)")
}

fn plan(cfg: &RunConfig) -> anyhow::Result<Output> {
    let b = require_plan(cfg)?;
    let mut pretty = format!(
        "N = {}, C = {}, mode = {}, threshold = {}\n k  m_k  ell_k  F_k\n",
        b.file.n,
        b.file.c,
        b.file.mode.as_str(),
        b.file.threshold
    );
    let mut rows = Vec::new();
    for e in &b.file.entries {
        let _ = writeln!(pretty, "{:>2}  {:>3}  {:>5}  {}", e.k, e.m_k, e.ell_k, e.f.to_pretty());
        rows.push(vec![
            e.k.to_string(),
            e.f.to_text(),
            e.m_k.to_string(),
            e.ell_k.to_string(),
            e.c_mk.to_text(),
            e.norm2.clone(),
        ]);
    }
    if let Some(cp) = &b.file.c_prime {
        let _ = writeln!(pretty, "C' = {} ({})", fhharm::numeric::rational_to_text(&cp.value), cp.provenance);
    }
    let mut data = serde_json::to_value(&b.file)?;
    if let Some(f) = &b.fit {
        data["growth_lemma_fit"] = serde_json::to_value(f)?;
    }
    let mut out = Output::new(data, pretty);
    out.table = Some(Table {
        header: ["k", "F_k", "m_k", "ell_k", "c_mk", "norm2"].map(String::from).to_vec(),
        rows,
    });
    out.plan_hash = Some(b.hash);
    Ok(out)
}

fn density(cfg: &RunConfig, k: u32, ell: u64, t: u64, threshold: Option<u64>, boundaries: usize) -> anyhow::Result<Output> {
    let thr = threshold.unwrap_or_else(|| cfg.block_threshold());
    let rep = lower_density_raw(k, ell, thr, t)?;
    let f = |r: &fhharm::Rational| num_traits_f64(r);
    let mut pretty = format!(
        "|B_{k} ∩ [0, {t}]| = {}, ratio = {:.6e}, target 1/(4 ell^2 2^k) = {:.6e}\n",
        rep.count,
        f(&rep.ratio),
        f(&rep.target)
    );
    let mut rows = vec![density_row(&rep)];
    let mut out_data = json!({ "report": rep });
    let mut passed = None;
    if boundaries > 0 {
        let prof = boundary_profile(k, ell, thr, boundaries)?;
        let mono = is_nondecreasing(&prof);
        let _ = writeln!(pretty, "{} boundary horizons, nondecreasing: {mono}", prof.len());
        rows.extend(prof.iter().map(density_row));
        out_data["boundaries"] = serde_json::to_value(&prof)?;
        out_data["nondecreasing"] = json!(mono);
        passed = Some(mono);
    }
    let mut out = Output::new(out_data, pretty);
    out.passed = passed;
    out.table = Some(Table {
        header: ["k", "ell", "threshold", "T", "count", "ratio", "target"].map(String::from).to_vec(),
        rows,
    });
    Ok(out)
}

fn num_traits_f64(r: &fhharm::Rational) -> f64 {
    fhharm::NormValue::Exact(r.clone()).to_f64()
}

fn density_row(r: &fhharm::verify::DensityReport) -> Vec<String> {
    use fhharm::numeric::rational_to_text as t;
    vec![
        r.k.to_string(),
        r.ell.to_string(),
        r.threshold.to_string(),
        r.horizon.to_string(),
        r.count.to_string(),
        t(&r.ratio),
        t(&r.target),
    ]
}

/// Smallest `n` with a nonempty window `B_{n,k}`.
fn first_window(b: &Built, k: u32) -> anyhow::Result<u64> {
    let l = b.ell.ell(k as u64)?;
    let start = (b.ell.threshold * l).max(1);
    (start..start + (l << (k + 2)) + 4)
        .find(|&n| index_set_b(n, k, &b.ell).is_ok_and(|w| !w.is_empty()))
        .with_context(|| format!("no admissible n found for k = {k}"))
}

fn residual(cfg: &RunConfig, k: u32, n: Option<u64>, s: Option<u64>, r: &str) -> anyhow::Result<Output> {
    let b = require_plan(cfg)?;
    let r = Radius::parse(r)?;
    let n = match n {
        Some(n) => n,
        None => first_window(&b, k)?,
    };
    let window = index_set_b(n, k, &b.ell)?;
    let orders = match s {
        Some(s) => {
            ensure!(window.contains(&s), "s = {s} is not in B_({n},{k})");
            vec![s]
        }
        None => window,
    };
    let reports = Exec::default().try_map(&orders, |&s| {
        let n_max = match cfg.n_max.fixed {
            Some(m) => m.max(n + 2),
            None => residual_n_max(&b.plan, &b.ell, k, n, s, &r)?,
        };
        fhc_residual(&b.plan, &b.ell, k, n, s, &r, n_max, Exec::Sequential)
    })?;
    let n_max = reports.iter().map(|x| x.n_max).max().unwrap_or(n + 2);
    let passed = reports.iter().all(|x| x.within_bound() && x.f_within() && x.g_within());
    let l = b.ell.ell(k as u64)?;
    let mut pretty = format!("k = {k}, n = {n}, ell_k = {l}, r = {r}, n_max = {n_max}, bound 1/ell^2 = {:.6e}\n", 1.0 / (l * l) as f64);
    let _ = writeln!(pretty, "{:>8}  {:>12}  {:>12}  {:>12}", "s", "residual^2", "F part", "G part");
    let mut rows = Vec::new();
    for x in &reports {
        let _ = writeln!(
            pretty,
            "{:>8}  {:>12.4e}  {:>12.4e}  {:>12.4e}",
            x.s,
            x.residual_upper.upper_f64(),
            x.f_part.to_f64(),
            x.g_upper().upper_f64()
        );
        rows.push(vec![
            x.k.to_string(),
            x.n.to_string(),
            x.s.to_string(),
            x.t.to_string(),
            x.residual_squared.to_text(),
            x.residual_upper.to_text(),
            x.f_part.to_text(),
            x.g_part_truncated.to_text(),
            x.g_tail.to_text(),
            fhharm::numeric::rational_to_text(&x.bound),
            (x.within_bound() && x.f_within() && x.g_within()).to_string(),
        ]);
    }
    let mut out = Output::new(json!({ "n_max": n_max, "reports": reports }), pretty);
    out.passed = Some(passed);
    out.plan_hash = Some(b.hash);
    out.table = Some(Table {
        header: ["k", "n", "s", "t", "residual_squared", "residual_upper", "f_part", "g_truncated", "g_tail", "bound", "within"]
            .map(String::from)
            .to_vec(),
        rows,
    });
    Ok(out)
}

fn growth(cfg: &RunConfig, exact_at: &[String]) -> anyhow::Result<Output> {
    let b = require_plan(cfg)?;
    let radii = cfg.radii()?;
    let c = cfg.c_value()?;
    let kg = b.plan.tail_constant();
    let n_max = match cfg.n_max.fixed {
        Some(n) => n,
        None => choose_n_max(kg, &c, cfg.n, radii.last().expect("validated"), cfg.n_max.floor)?,
    };
    let h = assemble_truncated(&b.plan, &b.ell, n_max)?;
    let table = growth_profile(&h, kg, &radii, &c, Exec::default())?;
    let mut checks = Vec::new();
    if !exact_at.is_empty() {
        let profile = h.profile(Exec::default())?;
        for s in exact_at {
            let r = Radius::parse(s)?;
            let gap = exact_cross_check(&profile, &r);
            checks.push(json!({ "r": r, "rel_gap": gap, "ok": gap <= CROSS_CHECK_TOL }));
        }
    }
    let checks_ok = checks.iter().all(|c| c["ok"] == json!(true));
    let passed = table.all_within() && checks_ok;
    let mut pretty = format!("N = {}, C = {}, n_max = {n_max}, {} blocks\n", cfg.n, cfg.c, h.blocks().len());
    let _ = writeln!(pretty, "{:>12}  {:>14}  {:>10}", "r", "ratio", "log10");
    let mut rows = Vec::new();
    for row in &table.rows {
        let _ = writeln!(pretty, "{:>12.6}  {:>14.6e}  {:>10.2}", row.r.to_f64(), row.ratio.to_f64(), row.log10_ratio);
        rows.push(vec![
            row.r.to_string(),
            row.m2.to_text(),
            row.tail_squared.to_text(),
            row.bound.to_text(),
            row.ratio.to_text(),
            format!("{:.6}", row.log10_ratio),
            row.within().to_string(),
        ]);
    }
    for c in &checks {
        let _ = writeln!(pretty, "exact vs 256-bit at r = {}: rel gap {}", c["r"], c["rel_gap"]);
    }
    let mut out = Output::new(json!({ "table": table, "exact_checks": checks }), pretty);
    out.passed = Some(passed);
    out.plan_hash = Some(b.hash);
    out.table = Some(Table {
        header: ["r", "m2", "tail_squared", "bound", "ratio", "log10_ratio", "within"].map(String::from).to_vec(),
        rows,
    });
    Ok(out)
}

fn lemmas(cfg: &RunConfig, no_fit: bool, poisson_corpus: usize) -> anyhow::Result<Output> {
    let mut pretty = String::new();
    let mut data = json!({});
    let mut passed = true;

    if !no_fit {
        let fit = fit_growth_constant(&cfg.fit_grid, Exec::default())?;
        let _ = writeln!(
            pretty,
            "growth lemma: fitted {:.6}, certified C' = {}, stability {:.3}",
            fit.fitted,
            fhharm::numeric::rational_to_text(&fit.certified),
            fit.stability
        );
        passed &= fit.is_stable();
        data["growth_lemma"] = serde_json::to_value(&fit)?;
    }

    let mut skip = Vec::new();
    for q in [rat(1, 2), rat(1, 3), rat(9, 10)] {
        for l in 1..=6 {
            for u in 0..l {
                skip.push(skip_lemma_check(&SkipSequence::Geometric(q.clone()), l, u)?);
            }
        }
    }
    for r in [int(2), int(5), rat(17, 2)] {
        let seq = SkipSequence::bessel_like(&r, 80);
        for l in 2..=6 {
            for u in 0..l {
                skip.push(skip_lemma_check(&seq, l, u)?);
            }
        }
    }
    let skip_ok = skip.iter().all(|s| s.holds);
    let _ = writeln!(pretty, "skip lemma: {} cases, all hold: {skip_ok}", skip.len());
    passed &= skip_ok;
    data["skip"] = serde_json::to_value(&skip)?;

    let mut conc = Vec::new();
    for n in 2..=6 {
        for r in [2.0, 10.0, 50.0] {
            conc.push(log_concavity_check(n, r, 1, 500)?);
        }
    }
    let max_onset = conc.iter().map(|c| c.onset).max().unwrap_or(0);
    let _ = writeln!(pretty, "log-concavity: finite onset in all {} cases, largest {max_onset}", conc.len());
    data["concavity"] = serde_json::to_value(&conc)?;

    let c3 = poisson_constant(3, 1e-11)?;
    let c3_gap = (c3.to_f64() - (20f64 / 9.0).sqrt()).abs();
    let c3_ok = c3_gap <= C3_TOL;
    let dims = [2usize, 3, 4];
    let cs = dims.iter().map(|&n| poisson_constant(n, 1e-10)).collect::<Result<Vec<_>, _>>()?;
    let polys = random_corpus(cfg.seed, poisson_corpus, &dims, 4, 10);
    let half = Radius::from_ratio(1, 2)?;
    let reps = Exec::default().try_map(&polys, |h| poisson_bound_check(h, &half, cfg.samples, &cs[h.dim() - 2]))?;
    let poisson_ok = reps.iter().all(|r| r.passes());
    let min_margin = reps.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
    let _ = writeln!(
        pretty,
        "poisson: c_3 = {:.12} (gap to sqrt(20/9) {c3_gap:.1e}), {} polynomials, min margin {min_margin:.4e}",
        c3.to_f64(),
        reps.len()
    );
    passed &= c3_ok && poisson_ok;
    data["poisson"] = json!({ "c_3": c3, "c_3_gap": c3_gap, "reports": reps });

    let mut out = Output::new(data, pretty);
    out.passed = Some(passed);
    Ok(out)
}

#[derive(Default, Serialize)]
struct Tally {
    checks: usize,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

/// Largest truncation expanded by the self-test.
const SELFTEST_N_MAX: u64 = 4;

fn selftest(cfg: &RunConfig) -> anyhow::Result<Output> {
    ensure!(
        cfg.mode == Scale::Relaxed,
        "selftest expands every block and only runs on the relaxed scale (pass --relaxed)"
    );
    let mut t = Tally::default();
    let radii = [Radius::one(), Radius::from_ratio(3, 2)?, Radius::from_ratio(2, 7)?];

    let Some(b) = build_plan(cfg)? else {
        let out = Output::new(serde_json::to_value(&t)?, "empty plan: nothing to check\n".into());
        return Ok(Output { passed: Some(true), ..out });
    };

    // primitives and Kuran identities on a small random corpus
    let corpus = random_corpus(cfg.seed, 24, &[cfg.n], 4, 10);
    for f in &corpus {
        for h in f.homogeneous_components()? {
            kuran_checks(&mut t, &h)?;
        }
        let fam = KuranFamily::new(f)?;
        for k in 0..=6u64 {
            let term = PrimitiveTerm::new(fam.clone(), k);
            let e = term.expand()?;
            for r in &radii {
                t.check(term.norm_squared(r) == m2_mean_squared(&e, r), || format!("block norm of P_{k}({f}) at r = {r}"));
            }
        }
    }

    // truncations and residuals of the plan
    for n_max in 1..=SELFTEST_N_MAX {
        let h = assemble_truncated(&b.plan, &b.ell, n_max)?;
        let e = h.expand()?;
        for r in &radii {
            t.check(h.m2_squared(r, Exec::default())? == m2_mean_squared(&e, r), || {
                format!("M2^2(h_T) with n_max = {n_max} at r = {r}")
            });
        }
    }
    for k in 1..=b.ell.k_max().min(8) as u32 {
        for n in 1..=SELFTEST_N_MAX - 2 {
            let Ok(window) = index_set_b(n, k, &b.ell) else { continue };
            for s in window {
                for r in &radii[..2] {
                    let rep = fhc_residual(&b.plan, &b.ell, k, n, s, r, SELFTEST_N_MAX, Exec::Sequential)?;
                    let direct = fhc_residual_expanded(&b.plan, &b.ell, k, n, s, r, SELFTEST_N_MAX)?;
                    t.check(rep.residual_squared.as_rational() == Some(&direct), || {
                        format!("residual k = {k}, n = {n}, s = {s}, r = {r}")
                    });
                }
            }
        }
    }

    let pretty = if t.failures.is_empty() {
        format!("{} checks, all passed\n", t.checks)
    } else {
        format!("{} checks, {} failed:\n  {}\n", t.checks, t.failures.len(), t.failures.join("\n  "))
    };
    let passed = t.failures.is_empty();
    let mut out = Output::new(serde_json::to_value(&t)?, pretty);
    out.passed = Some(passed);
    out.plan_hash = Some(b.hash);
    Ok(out)
}

fn kuran_checks(t: &mut Tally, h: &HomogeneousHarmonic) -> anyhow::Result<()> {
    let one = Radius::one();
    let dec = kuran_decompose(h)?;
    t.check(&dec.recombine()? == h.poly(), || format!("recombination of {}", h.poly()));
    let terms: Vec<(u32, Polynomial)> = dec.nonzero_parts().map(|(p, _)| Ok((p, dec.term(p)?))).collect::<anyhow::Result<_>>()?;
    for (i, (p, a)) in terms.iter().enumerate() {
        for (q, b) in &terms[i + 1..] {
            t.check(inner_product(a, b, &one)? == fhharm::Rational::from_integer(0.into()), || {
                format!("orthogonality of parts {p}, {q} of {}", h.poly())
            });
        }
        let d = from_biguint(fhharm::kuran::dim_harmonic((h.degree() - p) as u64, (h.dim() + 2 * *p as usize) as u64));
        t.check(d * m2_mean_squared(a, &one) == m2_mean_squared(dec.part(*p), &one), || {
            format!("d * M2^2 identity for part {p} of {}", h.poly())
        });
    }
    for k in 0..=4 {
        let pk = primitive(h, k)?;
        t.check(&pk.poly().differentiate(1, k)? == h.poly(), || format!("d^{k} P_{k}({})", h.poly()));
        for l in 0..=4 {
            t.check(primitive(&pk, l)? == primitive(h, k + l)?, || format!("P_{l} P_{k}({})", h.poly()));
        }
    }
    Ok(())
}
