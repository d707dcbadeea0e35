use std::collections::BTreeMap;
use std::io::Write;

use pshosc::bergman::{self, Method, WeightSpec};
use pshosc::fit::log_grid;
use pshosc::grammar::{parse_complex_list, parse_function, parse_real_list, parse_region};
use pshosc::quad::QuadratureSpec;
use pshosc::{gammaremez, jn, osc, verify, AnisotropicBox, ComplexVector, Polydisc, PshFunction, Region, C64};
use serde::Serialize;
use serde_json::{json, Value};

use crate::cli::{BergmanCmd, Command, GammaCmd, JnCmd, MethodArg, OscCmd, RemezCmd, VerifyArgs, WeightArgs};
use crate::report::{num, Outcome, Table};

/// Why a command could not produce a verdict.
#[derive(Debug)]
pub enum Failure {
    /// Malformed input: exit 64.
    Usage(String),
    /// Non-convergence, divergence, ill-conditioning: exit 2.
    Numerical(String),
}

impl From<pshosc::Error> for Failure {
    fn from(e: pshosc::Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Res<T> = std::result::Result<T, Failure>;

pub struct Ctx<'a> {
    pub spec: QuadratureSpec,
    pub seed: u64,
    pub function: Option<String>,
    pub region: Option<String>,
    pub params: BTreeMap<String, String>,
    /// Progress lines (one per criterion in `verify-all`).
    pub err: &'a mut (dyn Write + Send),
}

impl Ctx<'_> {
    fn param(&mut self, k: &str, v: impl ToString) {
        self.params.insert(k.to_string(), v.to_string());
    }

    fn paramf(&mut self, k: &str, v: f64) {
        self.params.insert(k.to_string(), num(v));
    }

    fn function(&mut self, flag: &Option<String>) -> Res<PshFunction> {
        if flag.is_some() {
            self.function = flag.clone();
        }
        let s = self.function.clone().ok_or_else(|| Failure::Usage("missing --fn".into()))?;
        Ok(parse_function(&s)?)
    }

    fn region(&mut self, flag: &Option<String>) -> Res<Option<Region>> {
        if flag.is_some() {
            self.region = flag.clone();
        }
        Ok(self.region.as_deref().map(parse_region).transpose()?)
    }

    fn required_region(&mut self, flag: &Option<String>) -> Res<Region> {
        self.region(flag)?.ok_or_else(|| Failure::Usage("missing --region".into()))
    }
}

pub fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Osc(o) => match o {
            OscCmd::Uo { .. } => "osc uo",
            OscCmd::Harnack { .. } => "osc harnack",
            OscCmd::LelongClass { .. } => "osc lelong-class",
            OscCmd::Counterexample { .. } => "osc counterexample",
            OscCmd::LelongNumber { .. } => "osc lelong-number",
            OscCmd::DiscSweep { .. } => "osc disc-sweep",
        },
        Command::Gamma(GammaCmd::Solve { .. }) => "gamma solve",
        Command::Remez(r) => match r {
            RemezCmd::Sweep { .. } => "remez sweep",
            RemezCmd::Sharpness { .. } => "remez sharpness",
            RemezCmd::Check { .. } => "remez check",
        },
        Command::Bergman(b) => match b {
            BergmanCmd::Kernel { .. } => "bergman kernel",
            BergmanCmd::Ot { .. } => "bergman ot",
            BergmanCmd::Sandwich { .. } => "bergman sandwich",
            BergmanCmd::Hessian { .. } => "bergman hessian",
            BergmanCmd::LelongPreserve { .. } => "bergman lelong-preserve",
        },
        Command::Jn(j) => match j {
            JnCmd::Decay { .. } => "jn decay",
            JnCmd::Eps0 { .. } => "jn eps0",
        },
        Command::VerifyAll(_) => "verify-all",
    }
}

fn outcome(results: impl Serialize, pass: bool, summary: String, table: Option<Table>) -> Res<Outcome> {
    Ok(Outcome { results: serde_json::to_value(results)?, pass, summary, table, numerical: false, timings: Vec::new() })
}

fn reals(s: &str, what: &str) -> Res<Vec<f64>> {
    parse_real_list(s).map_err(|_| Failure::Usage(format!("cannot parse {what} from `{s}`")))
}

fn polydisc_of(r: &Region) -> Res<Polydisc> {
    r.as_polydisc().ok_or_else(|| Failure::Usage("this command needs a disc, polydisc or box".into()))
}

pub fn run(cmd: &Command, ctx: &mut Ctx) -> Res<Outcome> {
    match cmd {
        Command::Osc(c) => osc_cmd(c, ctx),
        Command::Gamma(GammaCmd::Solve { tol }) => {
            ctx.paramf("tol", *tol);
            let g = gammaremez::gamma_constant(*tol)?;
            let pass = g.residual <= tol.max(1e-12) && g.gamma > 1.278 && g.gamma < 1.279;
            outcome(g, pass, format!("gamma = {:.14} (residual {:.1e})", g.gamma, g.residual), None)
        }
        Command::Remez(c) => remez_cmd(c, ctx),
        Command::Bergman(c) => bergman_cmd(c, ctx),
        Command::Jn(c) => jn_cmd(c, ctx),
        Command::VerifyAll(v) => verify_all(v, ctx),
    }
}

fn osc_cmd(c: &OscCmd, ctx: &mut Ctx) -> Res<Outcome> {
    let spec = ctx.spec;
    match c {
        OscCmd::Uo { f, region } => {
            let f = ctx.function(&f.function)?;
            let r = ctx.required_region(&region.region)?;
            let rep = osc::oscillation(&f, &r, &spec)?;
            let tol = 4.0 * rep.total_error() + 1e-9;
            let pass = rep.uo >= -tol && rep.mo <= 2.0 * rep.uo + tol;
            let summary = format!("UO = {:.10}, MO = {:.10}", rep.uo, rep.mo);
            outcome(rep, pass, summary, None)
        }
        OscCmd::Harnack { f, region } => {
            let f = ctx.function(&f.function)?;
            let p = polydisc_of(&ctx.required_region(&region.region)?)?;
            let d = osc::harnack_decomposition(&f, &p, &spec)?;
            let pass = d.holds(1e-8 + d.error);
            let summary =
                format!("I1 = {:.6e} vs 3^n J1 = {:.6e}; I2 = {:.6e} vs J2 = {:.6e}", d.i1, 3f64.powi(d.n as i32) * d.j1, d.i2, d.j2);
            outcome(d, pass, summary, None)
        }
        OscCmd::LelongClass { f, count } => {
            let f = ctx.function(&f.function)?;
            ctx.param("count", count);
            let fam = verify::lelong_family(f.dim, *count, ctx.seed)?;
            let rep = osc::lelong_class_check(&f, &fam, &spec.with_seed(ctx.seed))?;
            let mut t = Table::new(&["index", "uo"]);
            for (k, u) in rep.uo_values.iter().enumerate() {
                t.push(vec![k.to_string(), num(*u)]);
            }
            let summary = format!("max UO {:.6} against 3^n = {}", rep.max_uo, rep.bound);
            let pass = rep.pass;
            outcome(json!({ "family": fam, "report": rep }), pass, summary, Some(t))
        }
        OscCmd::Counterexample { x } => {
            let xs = match x {
                Some(s) => reals(s, "x-values")?,
                None => verify::COUNTEREXAMPLE_X.to_vec(),
            };
            ctx.param("x", xs.iter().map(|v| num(*v)).collect::<Vec<_>>().join(";"));
            let rows = osc::counterexample_scan(&xs, &spec)?;
            let mut t = Table::new(&["x", "gap", "UO", "MO_lower"]);
            for r in &rows {
                t.push(vec![num(r.x), num(r.gap), num(r.uo), num(r.mo_lower)]);
            }
            let gaps_ok = rows.iter().all(|r| (r.gap - r.gap_closed_form).abs() <= 1e-12 * r.gap_closed_form.abs().max(1.0));
            let best = rows.iter().map(|r| r.mo_lower).fold(f64::NEG_INFINITY, f64::max);
            outcome(&rows, gaps_ok, format!("gap closed form matches: {gaps_ok}; largest MO lower bound {best:.6}"), Some(t))
        }
        OscCmd::LelongNumber { f, a, r_max, r_min, r_count } => {
            let f = ctx.function(&f.function)?;
            ctx.param("a", a);
            ctx.param("r_grid", format!("{};{};{r_count}", num(*r_max), num(*r_min)));
            let a = reals(a, "exponents")?;
            let grid = log_grid(*r_max, *r_min, *r_count);
            let fit = osc::directional_lelong(&f, &a, &grid, &spec)?;
            let mut t = Table::new(&["r", "sup"]);
            for (r, v) in fit.r_values.iter().zip(&fit.values) {
                t.push(vec![num(*r), num(*v)]);
            }
            let summary = format!("slope {:.8} (asymptotic: {})", fit.slope, fit.asymptotic);
            outcome(fit, true, summary, Some(t))
        }
        OscCmd::DiscSweep { step } => {
            ctx.paramf("step", *step);
            if !(*step > 0.0 && *step < 0.5) {
                return Err(Failure::Usage("step must lie in (0, 0.5)".into()));
            }
            let k = (1.0 / step).round() as usize;
            let xs: Vec<f64> = (1..k).map(|i| i as f64 * step).collect();
            let rows = osc::disc_log_uo_sweep(&xs, &spec)?;
            let mut t = Table::new(&["x", "UO"]);
            for (x, u) in &rows {
                t.push(vec![num(*x), num(*u)]);
            }
            let (xm, um) = rows.iter().copied().fold((0.0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
            let results: Vec<Value> = rows.iter().map(|(x, u)| json!({ "x": x, "uo": u })).collect();
            outcome(json!({ "rows": results, "max_uo": um, "argmax": xm }), true, format!("max UO {um:.6} at x = {xm}"), Some(t))
        }
    }
}

fn remez_table(reps: &[gammaremez::RemezReport]) -> Table {
    let mut t = Table::new(&["polynomial_id", "region_id", "n", "degree", "uo", "mo", "ratio", "error", "pass"]);
    for r in reps {
        t.push(vec![
            r.polynomial_id.clone(),
            r.region_id.clone(),
            r.n.to_string(),
            r.degree.to_string(),
            num(r.uo),
            num(r.mo),
            num(r.ratio),
            num(r.error),
            r.pass.to_string(),
        ]);
    }
    t
}

fn remez_cmd(c: &RemezCmd, ctx: &mut Ctx) -> Res<Outcome> {
    let g = gammaremez::gamma().gamma;
    match c {
        RemezCmd::Sweep { count, deg_max, n_max } => {
            ctx.param("count", count);
            ctx.param("deg_max", deg_max);
            ctx.param("n_max", n_max);
            let reps = gammaremez::remez_sweep(*count, ctx.seed, *deg_max, *n_max, &ctx.spec.with_seed(ctx.seed))?;
            let fails = reps.iter().filter(|r| !r.pass).count();
            let max = reps.iter().map(|r| r.ratio).fold(f64::NEG_INFINITY, f64::max);
            let t = remez_table(&reps);
            outcome(&reps, fails == 0, format!("{fails}/{count} above gamma; max ratio {max:.6} (gamma {g:.6})"), Some(t))
        }
        RemezCmd::Sharpness { deltas, degrees } => {
            ctx.param("deltas", deltas);
            ctx.param("degrees", degrees);
            let d = reals(deltas, "deltas")?;
            let k: Vec<u32> = reals(degrees, "degrees")?.iter().map(|x| *x as u32).collect();
            let reps = gammaremez::sharpness_family(&d, &k, &ctx.spec)?;
            let best = reps.iter().map(|r| r.ratio).fold(f64::NEG_INFINITY, f64::max);
            let t = remez_table(&reps);
            outcome(&reps, best >= g - 1e-3, format!("best ratio {best:.8} (gamma {g:.8})"), Some(t))
        }
        RemezCmd::Check { f, region } => {
            let f = ctx.function(&f.function)?;
            let p = match &f.kind {
                pshosc::catalog::Kind::LogPoly(p) => p.clone(),
                _ => return Err(Failure::Usage("remez check needs a log_poly function".into())),
            };
            let r = ctx.required_region(&region.region)?;
            let rep = gammaremez::remez_check(&p, &r, &ctx.spec)?;
            let summary = format!("UO/deg = {:.8} (gamma {g:.8})", rep.ratio);
            let pass = rep.pass;
            outcome(&rep, pass, summary, Some(remez_table(std::slice::from_ref(&rep))))
        }
    }
}

fn weight(w: &WeightArgs, ctx: &mut Ctx) -> Res<WeightSpec> {
    let phi = ctx.function(&w.f.function)?;
    ctx.paramf("eps", w.eps);
    if let Some(n) = w.n {
        ctx.param("n", n);
        if n != phi.dim {
            return Err(Failure::Usage(format!("--n {n} but the function lives in dimension {}", phi.dim)));
        }
    }
    Ok(WeightSpec::new(phi, w.eps)?)
}

fn bergman_cmd(c: &BergmanCmd, ctx: &mut Ctx) -> Res<Outcome> {
    let spec = ctx.spec;
    match c {
        BergmanCmd::Kernel { w, region, method } => {
            let ws = weight(w, ctx)?;
            let p = match ctx.region(&region.region)? {
                Some(r) => polydisc_of(&r)?,
                None => Polydisc::unit(ws.dim()),
            };
            ctx.param("method", format!("{method:?}").to_lowercase());
            let m = match method {
                MethodArg::Auto => None,
                MethodArg::Circular => Some(Method::Circular),
                MethodArg::Gram => Some(Method::Gram),
            };
            let k = bergman::bergman_origin(&ws, &p, m, &spec)?;
            let summary = format!("K(0) = {:.12} via {:?}", k.value, k.method);
            outcome(k, true, summary, None)
        }
        BergmanCmd::Ot { w } => {
            let ws = weight(w, ctx)?;
            let r = bergman::ot_check(&ws, &spec)?;
            let summary = format!("K(0) = {:.9}, bound {:.9}, margin {:.3e}", r.kernel.value, r.bound, r.margin);
            let pass = r.pass;
            outcome(r, pass, summary, None)
        }
        BergmanCmd::Sandwich { w, region } => {
            let ws = weight(w, ctx)?;
            let p = match ctx.region(&region.region)? {
                Some(r) => polydisc_of(&r)?,
                None => Polydisc::unit(ws.dim()),
            };
            let r = bergman::sandwich_check(&ws, &p, &spec)?;
            let summary = format!("{:.9} <= {:.9} <= {:.9}", r.lower, r.middle, r.upper);
            let pass = r.pass;
            outcome(r, pass, summary, None)
        }
        BergmanCmd::Hessian { w, h } => {
            let ws = weight(w, ctx)?;
            ctx.param("h", h);
            let hs = reals(h, "steps")?;
            let r = bergman::hessian_limit_check(&ws, &hs, &spec)?;
            let n = r.target.len();
            let pass = (0..n).all(|j| {
                (0..n).all(|k| {
                    let e = r.extrapolated[j][k];
                    if j == k {
                        (e.re - r.target[j][j]).abs() <= 0.02 * r.target[j][j].abs() + 1e-9
                    } else {
                        e.norm() <= 0.05
                    }
                })
            });
            let mut t = Table::new(&["h", "j", "k", "re", "im"]);
            for (hv, m) in r.h_values.iter().zip(&r.matrices) {
                for (j, row) in m.iter().enumerate() {
                    for (k, z) in row.iter().enumerate() {
                        t.push(vec![num(*hv), j.to_string(), k.to_string(), num(z.re), num(z.im)]);
                    }
                }
            }
            let summary = format!("max |extrapolated - target| = {:.3e}", r.max_abs_dev);
            outcome(r, pass, summary, Some(t))
        }
        BergmanCmd::LelongPreserve { f, a, eps_values, r_max, r_min, r_count } => {
            let phi = ctx.function(&f.function)?;
            ctx.param("a", a);
            ctx.param("eps_values", eps_values);
            ctx.param("r_grid", format!("{};{};{r_count}", num(*r_max), num(*r_min)));
            let a = reals(a, "exponents")?;
            let eps = reals(eps_values, "eps values")?;
            let grid = log_grid(*r_max, *r_min, *r_count);
            let r = bergman::lelong_preservation_check(&phi, &a, &eps, &grid, &spec)?;
            let mut t = Table::new(&["epsilon", "r", "value"]);
            for v in r.rhs_slope.r_values.iter().zip(&r.rhs_slope.values) {
                t.push(vec!["phi".into(), num(*v.0), num(*v.1)]);
            }
            for s in &r.lhs {
                if let Some(fit) = &s.fit {
                    for v in fit.r_values.iter().zip(&fit.values) {
                        t.push(vec![num(s.epsilon), num(*v.0), num(*v.1)]);
                    }
                }
            }
            let summary = format!("phi slope {:.6}; agreeing eps {:?}", r.rhs_slope.slope, r.eps_used);
            let pass = r.pass;
            outcome(r, pass, summary, Some(t))
        }
    }
}

fn jn_cmd(c: &JnCmd, ctx: &mut Ctx) -> Res<Outcome> {
    let spec = ctx.spec;
    match c {
        JnCmd::Decay { f, region, t_grid } => {
            let f = ctx.function(&f.function)?;
            let b0 = match ctx.region(&region.region)? {
                Some(Region::AnisotropicBox(b)) => b,
                Some(r) => {
                    let p = polydisc_of(&r)?;
                    if p.radii.iter().any(|x| *x != p.radii[0]) {
                        return Err(Failure::Usage("jn decay needs a box or an equal-radius polydisc".into()));
                    }
                    AnisotropicBox::new(p.center.clone(), p.radii[0], vec![1.0; p.dim()])?
                }
                None => AnisotropicBox::new(ComplexVector::zeros(f.dim), 1.0, vec![1.0; f.dim])?,
            };
            let grid = match t_grid {
                Some(s) => {
                    ctx.param("t_grid", s);
                    reals(s, "t-grid")?
                }
                None => jn::default_t_grid(),
            };
            let d = jn::distribution_estimate(&f, &b0, &grid, &spec, ctx.seed)?;
            let mut t = Table::new(&["t", "log_measure"]);
            for (x, y) in d.t_values.iter().zip(&d.log_measures) {
                t.push(vec![num(*x), num(*y)]);
            }
            let pass = d.log_measures.windows(2).all(|w| w[1] <= w[0]);
            let summary = format!("fitted slope {} (intercept {})", d.fitted_slope, d.fitted_intercept);
            outcome(d, pass, summary, Some(t))
        }
        JnCmd::Eps0 { f, a, center, count, eps, threshold } => {
            let f = ctx.function(&f.function)?;
            ctx.param("a", a);
            ctx.param("count", count);
            ctx.param("eps", eps);
            ctx.paramf("threshold", *threshold);
            let a = reals(a, "exponents")?;
            let center = match center {
                Some(s) => {
                    ctx.param("center", s);
                    parse_complex_list(s)?
                }
                None => vec![C64::new(0.0, 0.0); a.len()],
            };
            let fam = jn::shrinking_family(&center, &a, *count)?;
            let e = reals(eps, "eps values")?;
            let r = jn::epsilon0_search(&f, &fam, &e, *threshold, &spec)?;
            let mut t = Table::new(&["epsilon", "r", "mean"]);
            for row in &r.rows {
                for (b, m) in fam.iter().zip(&row.means) {
                    t.push(vec![num(row.epsilon), num(b.scale), m.map_or("divergent".into(), num)]);
                }
            }
            let monotone = r.sup_means.windows(2).all(|w| match (w[0], w[1]) {
                (Some(x), Some(y)) => y >= x * (1.0 - 1e-9),
                _ => true,
            });
            let summary = format!("eps0 estimate {:?}", r.eps0_estimate);
            outcome(r, monotone, summary, Some(t))
        }
    }
}

fn verify_all(v: &VerifyArgs, ctx: &mut Ctx) -> Res<Outcome> {
    let ids: Vec<String> = match &v.only {
        Some(s) => {
            ctx.param("only", s);
            s.split(',').map(|x| x.trim().to_ascii_uppercase()).filter(|x| !x.is_empty()).collect()
        }
        None => verify::CRITERIA.iter().map(|c| c.0.to_string()).collect(),
    };
    let mut outcomes = Vec::new();
    for id in &ids {
        let o = verify::run_criterion(id, ctx.seed)?;
        let _ = writeln!(ctx.err, "{}", o.summary_line());
        outcomes.push(o);
    }
    let numerical = outcomes.iter().any(|o| o.numerical_failure);
    let failed: Vec<&str> = outcomes.iter().filter(|o| !o.pass).map(|o| o.id.as_str()).collect();
    let mut t = Table::new(&["id", "title", "pass", "detail"]);
    for o in &outcomes {
        t.push(vec![o.id.clone(), o.title.clone(), o.pass.to_string(), o.detail.clone()]);
    }
    let summary = if failed.is_empty() {
        format!("all {} criteria passed", outcomes.len())
    } else {
        format!("{} of {} criteria failed: {}", failed.len(), outcomes.len(), failed.join(", "))
    };
    let mut out = outcome(&outcomes, failed.is_empty() && !numerical, summary, Some(t))?;
    out.numerical = numerical;
    out.timings = outcomes.iter().map(|o| (o.id.clone(), o.elapsed, o.budget)).collect();
    Ok(out)
}
