use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::time::Instant;

use isogeny_forge::checkers::{
    global2_check, global2_prime_filter, main1_check, main2_check, supersingular_scan, ProductFactor,
};
use isogeny_forge::elliptic::{rational_points_mod_p, TwoTorsionCurve};
use isogeny_forge::exactnum::BigInt;
use isogeny_forge::kgroup::prove_skew;
use isogeny_forge::pontryagin::{aug_filtration, FinAbGroup};
use isogeny_forge::reduction::classify_reduction;
use isogeny_forge::scholten::{
    build_scholten, parameter_search, read_parameter_grid, scholten_family, verify_split_jacobian_against,
    SearchPredicate, SearchRanges,
};
use serde_json::{json, Value};

use crate::cache::ConductorCache;
use crate::plan::{Command, CurveSpec, Global2Target, GroupSpec, ParamSource, RunPlan, SearchGrid, Sink};
use crate::record::{RecordWriter, ResultRecord};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// Records written and how many of them report a failure.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Outcome {
    pub records: usize,
    pub failures: usize,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.failures == 0 {
            EXIT_OK
        } else {
            EXIT_FAILURE
        }
    }
}

#[derive(Debug)]
pub enum ExecError {
    Io(io::Error),
    /// Input that passed argument parsing but cannot be used, e.g. a
    /// malformed CSV row.
    Input(String),
}

impl ExecError {
    pub fn exit_code(&self) -> i32 {
        match self {
            ExecError::Io(_) => EXIT_IO,
            ExecError::Input(_) => EXIT_USAGE,
        }
    }
}

impl std::fmt::Display for ExecError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExecError::Io(e) => write!(f, "I/O error: {e}"),
            ExecError::Input(m) => write!(f, "invalid input: {m}"),
        }
    }
}

impl From<io::Error> for ExecError {
    fn from(e: io::Error) -> Self {
        ExecError::Io(e)
    }
}

/// Runs the plan, writing records to its sink. Diagnostics go to stderr.
pub fn execute_plan(plan: &RunPlan) -> i32 {
    let result = match &plan.sink {
        Sink::Stdout => execute_plan_to(plan, BufWriter::new(io::stdout())),
        Sink::File(path) => match File::create(path) {
            Ok(f) => execute_plan_to(plan, BufWriter::new(f)),
            Err(e) => Err(ExecError::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display())))),
        },
    };
    match result {
        Ok(outcome) => {
            if outcome.failures > 0 {
                eprintln!("isogeny-forge: {} of {} records report a failure", outcome.failures, outcome.records);
            }
            outcome.exit_code()
        }
        Err(e) => {
            eprintln!("isogeny-forge: {e}");
            e.exit_code()
        }
    }
}

/// Runs the plan against an arbitrary writer.
pub fn execute_plan_to<W: Write + Send>(plan: &RunPlan, out: W) -> Result<Outcome, ExecError> {
    let mut cache = match &plan.cache_dir {
        Some(dir) => ConductorCache::open(dir)
            .map_err(|e| ExecError::Io(io::Error::new(e.kind(), format!("cache {}: {e}", dir.display()))))?,
        None => ConductorCache::in_memory(),
    };
    let mut writer = RecordWriter::new(out);
    let mut run = Run { writer: &mut writer, cache: &mut cache, failures: 0 };
    match plan.jobs {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build().map_err(io::Error::other)?;
            pool.install(|| run.command(&plan.command))?;
        }
        None => run.command(&plan.command)?,
    }
    let failures = run.failures;
    cache.flush()?;
    let records = writer.written();
    writer.finish()?;
    Ok(Outcome { records, failures })
}

struct Run<'a, W: Write> {
    writer: &'a mut RecordWriter<W>,
    cache: &'a mut ConductorCache,
    failures: usize,
}

fn strs(v: &[BigInt]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn load_params(source: &ParamSource) -> Result<Vec<[BigInt; 4]>, ExecError> {
    match source {
        ParamSource::Inline(p) => Ok(vec![p.clone()]),
        ParamSource::Csv(path) => read_grid(path),
    }
}

fn read_grid(path: &std::path::Path) -> Result<Vec<[BigInt; 4]>, ExecError> {
    let f = File::open(path).map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", path.display())))?;
    read_parameter_grid(f).map_err(|e| ExecError::Input(format!("{}: {e}", path.display())))
}

impl<W: Write> Run<'_, W> {
    fn emit(&mut self, kind: &str, inputs: Value, outputs: impl serde::Serialize, start: Instant, ok: bool) -> io::Result<()> {
        if !ok {
            self.failures += 1;
        }
        self.writer.emit(&ResultRecord::new(kind, inputs, outputs, start.elapsed()))
    }

    /// Emits an `error` record for an analysis that could not run.
    fn emit_error(&mut self, inputs: Value, e: isogeny_forge::Error, start: Instant) -> io::Result<()> {
        self.emit("error", inputs, json!({ "error": e.to_string() }), start, false)
    }

    fn command(&mut self, cmd: &Command) -> Result<(), ExecError> {
        match cmd {
            Command::AnalyzeCurve { curve, primes } => self.analyze(curve, &primes.primes())?,
            Command::ScholtenBuild { source } => {
                for [a, b, c, d] in load_params(source)? {
                    let start = Instant::now();
                    let s = build_scholten(&a, &b, &c, &d);
                    let inputs = json!({ "params": strs(&[a, b, c, d]) });
                    let ic = s.curve().map(|h| h.igusa_clebsch().expect("smooth"));
                    let key = ic.as_ref().map(|i| i.absolute_key());
                    self.emit("scholten-curve", inputs, json!({ "curve": s, "igusa_clebsch": ic, "class_key": key }), start, true)?;
                }
            }
            Command::ScholtenFamily { source } => {
                for [a, b, c, d] in load_params(source)? {
                    let start = Instant::now();
                    let inputs = json!({ "params": strs(&[a.clone(), b.clone(), c.clone(), d.clone()]) });
                    match scholten_family(&a, &b, &c, &d) {
                        Ok(f) => {
                            let out = json!({ "class_count": f.class_count(), "family": f });
                            self.emit("scholten-family", inputs, out, start, true)?
                        }
                        Err(e) => self.emit_error(inputs, e, start)?,
                    }
                }
            }
            Command::ScholtenVerify { source, primes, e1, e2 } => {
                let primes = primes.primes();
                for params in load_params(source)? {
                    self.verify(params, &primes, e1.as_ref().map(|p| (&p.0, &p.1)), e2.as_ref().map(|p| (&p.0, &p.1)))?;
                }
            }
            Command::ScholtenSearch { grid, main1, split_primes } => {
                let start = Instant::now();
                let mut predicates = Vec::new();
                if let Some(p) = main1 {
                    predicates.push(SearchPredicate::Main1At(*p));
                }
                if let Some(ps) = split_primes {
                    predicates.push(SearchPredicate::SplitJacobian(ps.primes()));
                }
                let labels: Vec<String> = predicates.iter().map(SearchPredicate::label).collect();
                let (grid_label, params): (Value, Vec<[BigInt; 4]>) = match grid {
                    SearchGrid::Symmetric(k) => (json!({ "range": k }), SearchRanges::symmetric(*k).grid().collect()),
                    SearchGrid::Csv(path) => (json!({ "grid": path.display().to_string() }), read_grid(path)?),
                };
                let inputs = json!({ "grid": grid_label, "predicates": labels });
                let mut hits = Vec::new();
                let summary = parameter_search(params, &predicates, |rec| {
                    hits.push(rec);
                    Ok(())
                });
                match summary {
                    Ok(summary) => {
                        for hit in hits {
                            let hit_inputs = json!({ "params": strs(hit.curve.params()) });
                            self.emit("search-hit", hit_inputs, &hit, start, true)?;
                        }
                        self.emit("search-summary", inputs, summary, start, true)?;
                    }
                    Err(e) => self.emit_error(inputs, e, start)?,
                }
            }
            Command::CheckMain1 { curves, p } => {
                let start = Instant::now();
                let inputs = json!({ "curves": curves.iter().map(CurveSpec::label).collect::<Vec<_>>(), "p": p });
                match curves.iter().map(CurveSpec::model).collect::<isogeny_forge::Result<Vec<_>>>() {
                    Ok(models) => self.emit("hypothesis-verdict", inputs, main1_check(&models, *p), start, true)?,
                    Err(e) => self.emit_error(inputs, e, start)?,
                }
            }
            Command::CheckMain2 { factors, p, unramified, all_good } => {
                let start = Instant::now();
                let labels: Vec<Value> = factors
                    .iter()
                    .map(|f| json!({ "curves": f.curves.iter().map(CurveSpec::label).collect::<Vec<_>>(), "degree": f.degree }))
                    .collect();
                let inputs = json!({ "factors": labels, "p": p, "unramified": unramified, "all_good": all_good });
                let built: isogeny_forge::Result<Vec<ProductFactor>> = factors
                    .iter()
                    .map(|f| {
                        let curves = f.curves.iter().map(CurveSpec::model).collect::<isogeny_forge::Result<_>>()?;
                        Ok(ProductFactor { curves, degree: f.degree })
                    })
                    .collect();
                match built {
                    Ok(fs) => self.emit("hypothesis-verdict", inputs, main2_check(&fs, *p, *unramified, *all_good), start, true)?,
                    Err(e) => self.emit_error(inputs, e, start)?,
                }
            }
            Command::CheckGlobal2 { curve, deg, target } => {
                let start = Instant::now();
                let mut inputs = json!({ "curve": curve.label(), "deg_phi": deg });
                let result = curve.model().and_then(|m| match target {
                    Global2Target::Prime(p) => {
                        inputs["p"] = json!(p);
                        global2_check(&m, *deg, *p).map(|v| ("hypothesis-verdict", serde_json::to_value(v).expect("json")))
                    }
                    Global2Target::Bound(b) => {
                        inputs["bound"] = json!(b);
                        global2_prime_filter(&m, *deg, *b).map(|ps| ("global2-primes", json!({ "primes": ps })))
                    }
                });
                match result {
                    Ok((kind, out)) => self.emit(kind, inputs, out, start, true)?,
                    Err(e) => self.emit_error(inputs, e, start)?,
                }
            }
            Command::ScanSupersingular { curve, bound } => {
                let start = Instant::now();
                let inputs = json!({ "curve": curve.label(), "bound": bound });
                match curve.model() {
                    Ok(m) => self.emit("supersingular-scan", inputs, supersingular_scan(&m, *bound), start, true)?,
                    Err(e) => self.emit_error(inputs, e, start)?,
                }
            }
            Command::ProveSkew { curve, q, r, tail, conventions, certificates } => {
                for &conv in conventions {
                    let start = Instant::now();
                    let inputs = json!({
                        "curve": curve.label(),
                        "q": q,
                        "r": r,
                        "tail": tail.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                        "convention": conv,
                    });
                    let proof = curve.model().and_then(|m| rational_points_mod_p(&m, *q)).and_then(|g| prove_skew(&g, *r, tail, conv));
                    match proof {
                        Ok(proof) => {
                            if *certificates {
                                for rec in &proof.records {
                                    self.emit("skew-proof", inputs.clone(), rec, start, true)?;
                                }
                            }
                            let ok = proof.report.success;
                            self.emit("skew-report", inputs, &proof.report, start, ok)?;
                        }
                        Err(e) => self.emit_error(inputs, e, start)?,
                    }
                }
            }
            Command::Filtration { group, r_max } => {
                let start = Instant::now();
                let (inputs, g) = match group {
                    GroupSpec::Moduli(m) => (json!({ "group": m, "r_max": r_max }), FinAbGroup::new(m)),
                    GroupSpec::Curve(c, q) => (
                        json!({ "curve": c.label(), "q": q, "r_max": r_max }),
                        c.model().and_then(|m| rational_points_mod_p(&m, *q)).map(|g| FinAbGroup::from_curve_group(&g)),
                    ),
                };
                match g.and_then(|g| aug_filtration(&g, *r_max)) {
                    Ok(rep) => {
                        let ok = rep.exactness();
                        self.emit("filtration", inputs, json!({ "exact": ok, "report": rep }), start, ok)?
                    }
                    Err(e) => self.emit_error(inputs, e, start)?,
                }
            }
        }
        Ok(())
    }

    fn analyze(&mut self, curve: &CurveSpec, primes: &[u64]) -> Result<(), ExecError> {
        let start = Instant::now();
        let inputs = json!({ "curve": curve.label() });
        let model = match curve.model() {
            Ok(m) => m,
            Err(e) => return Ok(self.emit_error(inputs, e, start)?),
        };
        let conductor = match curve {
            CurveSpec::Pair(a, b) => {
                let e = TwoTorsionCurve::new(a.clone(), b.clone()).expect("model built");
                self.cache.conductor(&e).map(|c| json!({ "conductor": c.conductor, "exponents": c.exponents }))
            }
            CurveSpec::Ainvs(_) => isogeny_forge::reduction::conductor(&model).map(|n| {
                json!({
                    "conductor": n.to_string(),
                    "exponents": isogeny_forge::reduction::local_conductor_exponents(&model),
                })
            }),
        };
        match conductor {
            Ok(mut out) => {
                out["model"] = json!(model);
                out["j_invariant"] = json!(model.j_invariant().to_string());
                out["discriminant"] = json!(model.discriminant().to_string());
                self.emit("conductor", inputs.clone(), out, start, true)?;
            }
            Err(e) => self.emit_error(inputs.clone(), e, start)?,
        }
        for &p in primes {
            let start = Instant::now();
            let mut prime_inputs = inputs.clone();
            prime_inputs["p"] = json!(p);
            match classify_reduction(&model, p) {
                Ok(rep) => self.emit("reduction", prime_inputs, rep, start, true)?,
                Err(e) => self.emit_error(prime_inputs, e, start)?,
            }
        }
        Ok(())
    }

    fn verify(
        &mut self,
        params: [BigInt; 4],
        primes: &[u64],
        e1: Option<(&BigInt, &BigInt)>,
        e2: Option<(&BigInt, &BigInt)>,
    ) -> Result<(), ExecError> {
        let start = Instant::now();
        let [a, b, c, d] = &params;
        let mut inputs = json!({ "params": strs(&params), "primes": primes });
        if let Some((x, y)) = e1 {
            inputs["e1"] = json!([x.to_string(), y.to_string()]);
        }
        if let Some((x, y)) = e2 {
            inputs["e2"] = json!([x.to_string(), y.to_string()]);
        }
        let s = build_scholten(a, b, c, d);
        let pick = |over: Option<(&BigInt, &BigInt)>, own: Option<&TwoTorsionCurve>, which: &str| match over {
            Some((x, y)) => TwoTorsionCurve::new(x.clone(), y.clone()),
            None => own.cloned().ok_or_else(|| {
                isogeny_forge::Error::DegenerateCurve(format!("{which} is degenerate"))
            }),
        };
        let factors = pick(e1, s.e1(), "E1").and_then(|f1| Ok((f1, pick(e2, s.e2(), "E2")?)));
        let cert = factors.and_then(|(f1, f2)| {
            let cert = verify_split_jacobian_against(&s, &f1, &f2, primes)?;
            let n1 = self.cache.conductor(&f1)?;
            let n2 = self.cache.conductor(&f2)?;
            Ok((cert, n1.conductor, n2.conductor))
        });
        match cert {
            Ok((cert, n1, n2)) => {
                let ok = cert.verdict;
                let failures: Vec<u64> = cert.failures().map(|k| k.p).collect();
                let out = json!({
                    "verdict": if ok { "pass" } else { "fail" },
                    "failed_primes": failures,
                    "conductor_e1": n1,
                    "conductor_e2": n2,
                    "certificate": cert,
                });
                self.emit("split-jacobian-certificate", inputs, out, start, ok)?;
            }
            Err(e) => self.emit_error(inputs, e, start)?,
        }
        Ok(())
    }
}
