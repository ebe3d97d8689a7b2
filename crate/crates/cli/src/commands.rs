use curv_core::asymptotics::{growth_series_with_budget, stable_norm_with_budget, verify_negative_curvature_growth_with_budget, ChainCheck};
use curv_core::ball::{enumerate_ball_with_budget, norm_targeted_with_budget};
use curv_core::conjugacy::{conjugacy_graph_boundary, exits_per_sphere_with_budget, orbit, reduce_conjugate};
use curv_core::curvature::{annulus_sum, census_with_budget, delta_at, kappa, kappa_bar, kappa_numerator, pair_cancellation};
use curv_core::genset::{conjugation_closure, conjugation_invariance_violations, dinf_extension_genset, verify_flat_with_budget};
use curv_core::{restrict_to_kernel, BallTable, CurvError, Element, Family, GroupSpec, KernelSpec, Rational, Result};
use serde_json::{json, Value};

use crate::args::Command;
use crate::report::{Plot, Report, Table};

/// Closure budget when `--budget` is absent.
pub const DEFAULT_CLOSURE_BUDGET: usize = 10_000;

pub struct Context {
    pub spec: GroupSpec,
    pub kernel: Option<KernelSpec>,
    /// Element budget for ball-building searches.
    pub budget: usize,
    /// `--budget` as given, for commands that read it differently.
    pub explicit_budget: Option<usize>,
    pub genset_given: bool,
}

fn rat(r: Rational) -> String {
    r.to_string()
}

impl Context {
    fn render(&self, x: &Element) -> String {
        self.spec.render(x)
    }

    fn table(&self, radius: u32) -> Result<BallTable> {
        let t = enumerate_ball_with_budget(&self.spec, radius, self.budget)?;
        match &self.kernel {
            Some(k) => restrict_to_kernel(&t, k),
            None => Ok(t),
        }
    }

    fn norm(&self, x: &Element, limit: u32) -> Result<u32> {
        norm_targeted_with_budget(&self.spec, x, limit, self.budget)
    }
}

fn chain_table(checks: &[ChainCheck]) -> Table {
    let mut t = Table::new("chain", &["n", "lhs", "rhs", "holds"]);
    for c in checks {
        t.push([c.n.to_string(), c.lhs.to_string(), c.rhs.to_string(), c.holds.to_string()]);
    }
    t
}

fn series(name: &str, values: impl IntoIterator<Item = (i64, i64)>) -> Plot {
    Plot { name: name.into(), points: values.into_iter().collect() }
}

pub fn run(ctx: &Context, cmd: &Command, report: &mut Report) -> Result<()> {
    let spec = &ctx.spec;
    match cmd {
        Command::Ball { radius } => {
            let t = ctx.table(*radius)?;
            let mut tab = Table::new("ball", &["canonical_key", "norm", "in_kernel"]);
            for n in 0..=t.radius() {
                for x in t.full_sphere(n) {
                    tab.push([ctx.render(x), n.to_string(), t.in_kernel(x).unwrap_or(true).to_string()]);
                }
            }
            let sizes: Vec<usize> = (0..=t.radius()).map(|n| t.sphere(n).len()).collect();
            report.data = json!({
                "radius": t.radius(),
                "saturated": t.is_saturated(),
                "sphere_sizes": sizes,
                "ball_size": t.ball_size(t.radius()),
                "elements_enumerated": t.key_count(),
            });
            report.plots.push(series("sphere_sizes", sizes.iter().enumerate().map(|(n, &s)| (n as i64, s as i64))));
            report.tables.push(tab);
        }

        Command::Kappa { element, radius, limit } => {
            let x = spec.parse(element)?;
            let r = match radius {
                Some(r) => *r,
                None => ctx.norm(&x, *limit)? + 2,
            };
            let t = ctx.table(r)?;
            let n = t.norm(&x)?;
            if n + 2 > t.radius() && !t.is_saturated() {
                return Err(CurvError::Precondition(format!("κ at norm {n} needs a table of radius {}", n + 2)));
            }
            let mut tab = Table::new("deltas", &["generator", "conjugate", "conjugate_norm", "delta"]);
            for (i, s) in spec.generators().iter().enumerate() {
                let c = spec.conjugate(s, &x)?;
                tab.push([ctx.render(s), ctx.render(&c), t.norm(&c)?.to_string(), delta_at(&t, i, &x)?.to_string()]);
            }
            let bar = match kappa_bar(&t, &x) {
                Ok(v) => Value::String(rat(v)),
                Err(CurvError::Undefined(_)) => Value::Null,
                Err(e) => return Err(e),
            };
            report.data = json!({
                "element": ctx.render(&x),
                "norm": n,
                "kappa": rat(kappa(&t, &x)?),
                "kappa_bar": bar,
                "delta_sum": kappa_numerator(&t, &x)?,
                "generators": spec.generators().len(),
            });
            report.tables.push(tab);
        }

        Command::Census { radius, witnesses } => {
            let c = census_with_budget(spec, *radius, ctx.kernel.as_ref(), *witnesses, ctx.budget)?;
            let mut counts = Table::new("census", &["sphere", "pos", "zero", "neg"]);
            let mut wit = Table::new("witnesses", &["sphere", "sign", "element", "kappa"]);
            for s in &c.spheres {
                counts.push([s.sphere, s.positive as u32, s.zero as u32, s.negative as u32]);
                for (sign, list) in [("+", &s.positive_witnesses), ("-", &s.negative_witnesses)] {
                    for (x, k) in list {
                        wit.push([s.sphere.to_string(), sign.into(), ctx.render(x), rat(*k)]);
                    }
                }
            }
            let spheres: Vec<Value> = c
                .spheres
                .iter()
                .map(|s| json!({"sphere": s.sphere, "pos": s.positive, "zero": s.zero, "neg": s.negative}))
                .collect();
            report.data = json!({
                "radius": c.radius,
                "filtered": c.filter.is_some(),
                "spheres": spheres,
                "total_positive": c.total_positive(),
                "total_zero": c.total_zero(),
                "total_negative": c.total_negative(),
                "flat": c.is_flat(),
            });
            for (name, f) in [
                ("positive", (|s: &curv_core::curvature::SphereCensus| s.positive) as fn(&_) -> usize),
                ("zero", |s| s.zero),
                ("negative", |s| s.negative),
            ] {
                report.plots.push(series(name, c.spheres.iter().map(|s| (s.sphere as i64, f(s) as i64))));
            }
            report.tables.push(counts);
            report.tables.push(wit);
        }

        Command::Annulus { r1, r2 } => {
            let t = ctx.table(r2 + 2)?;
            let a = annulus_sum(&t, *r1, *r2)?;
            let p = pair_cancellation(&t, *r1, *r2)?;
            for (name, ys) in [("y1", &a.y1), ("y2", &a.y2)] {
                let mut tab = Table::new(name, &["generator", "element", "delta"]);
                for (i, x) in ys {
                    tab.push([ctx.render(spec.generators().get(*i)), ctx.render(x), delta_at(&t, *i, x)?.to_string()]);
                }
                report.tables.push(tab);
            }
            report.data = json!({
                "r1": a.r1,
                "r2": a.r2,
                "annulus_size": a.annulus_size,
                "lhs": rat(a.lhs),
                "rhs": rat(a.rhs),
                "identity_holds": a.identity_holds(),
                "y1": a.y1.len(),
                "y2": a.y2.len(),
                "bound": rat(a.bound),
                "bound_holds": a.bound_holds(),
                "pairs_checked": p.checked,
                "pair_violations": p.violations.len(),
            });
            if !a.identity_holds() {
                return Err(CurvError::InvariantBreach(format!(
                    "annulus identity fails: Σκ = {} but boundary sum = {}",
                    a.lhs, a.rhs
                )));
            }
            if let Some((i, x)) = p.violations.first() {
                return Err(CurvError::InvariantBreach(format!(
                    "pair cancellation fails at generator {} and {}",
                    ctx.render(spec.generators().get(*i)),
                    ctx.render(x)
                )));
            }
        }

        Command::Orbit { element, bound } => {
            let x = spec.parse(element)?;
            let t = ctx.table(bound + 1)?;
            let o = orbit(&t, &x, *bound)?;
            let mut tab = Table::new("orbit", &["element", "norm"]);
            for m in &o.members {
                tab.push([ctx.render(m), t.norm(m)?.to_string()]);
            }
            report.data = json!({
                "seed": ctx.render(&o.seed),
                "bound": o.bound,
                "size": o.members.len(),
                "frontier_escaped": o.frontier_escaped,
                "verdict": o.verdict.as_str(),
            });
            report.tables.push(tab);
        }

        Command::Exits { radius, k } => {
            let rep = exits_per_sphere_with_budget(spec, *radius, *k, ctx.budget)?;
            let mut tab = Table::new("exits", &["sphere", "size", "exits", "k_step_exits", "boundary"]);
            for (s, y) in rep.spheres.iter().zip(&rep.boundary_sizes) {
                tab.push([s.sphere as usize, s.size, s.exits, s.k_step_exits, *y]);
            }
            report.data = json!({
                "radius": rep.radius,
                "k": rep.k,
                "exit_bound": rep.exit_bound,
                "k_step_bound": rep.k_step_bound,
                "bounded": rep.bounded(1),
                "exits": rep.spheres.iter().map(|s| s.exits).collect::<Vec<_>>(),
            });
            report.plots.push(series("exits", rep.spheres.iter().map(|s| (s.sphere as i64, s.exits as i64))));
            report.tables.push(tab);
        }

        Command::Reduce { element, radius, limit } => {
            let x = spec.parse(element)?;
            let r = match radius {
                Some(r) => *r,
                None => ctx.norm(&x, *limit)?,
            };
            let t = ctx.table(r)?;
            let red = reduce_conjugate(&t, &x)?;
            let mut tab = Table::new("descent", &["step", "generator", "element", "norm"]);
            tab.push(["0".into(), String::new(), ctx.render(&x), red.norms[0].to_string()]);
            let mut cur = x.clone();
            for (i, (s, n)) in red.chain.iter().zip(&red.norms[1..]).enumerate() {
                cur = spec.conjugate(s, &cur)?;
                tab.push([(i + 1).to_string(), ctx.render(s), ctx.render(&cur), n.to_string()]);
            }
            report.data = json!({
                "element": ctx.render(&x),
                "minimal": ctx.render(&red.minimal),
                "chain": red.chain.iter().map(|s| ctx.render(s)).collect::<Vec<_>>(),
                "norms": red.norms,
            });
            report.tables.push(tab);
        }

        Command::BoundaryProfile { element, u, v, m, limit } => {
            let (x, u, v) = (spec.parse(element)?, spec.parse(u)?, spec.parse(v)?);
            let prof = conjugacy_graph_boundary(spec, &x, &u, &v, m, *limit, ctx.budget)?;
            let mut tab = Table::new("boundary", &["m", "vertices", "boundary"]);
            for e in &prof.entries {
                tab.push([e.m as usize, e.vertices, e.boundary]);
            }
            let inj: Vec<Value> = prof
                .injectivity_violations
                .iter()
                .map(|w| json!({"element": ctx.render(&w.element), "first": w.first, "second": w.second}))
                .collect();
            report.data = json!({
                "element": ctx.render(&x),
                "u": ctx.render(&u),
                "v": ctx.render(&v),
                "entries": prof.entries.iter().map(|e| json!({"m": e.m, "vertices": e.vertices, "boundary": e.boundary})).collect::<Vec<_>>(),
                "injectivity_violations": inj,
                "lipschitz_bound": prof.lipschitz_bound,
                "lipschitz_checked": prof.lipschitz_checked,
                "lipschitz_violations": prof.lipschitz_violations,
            });
            report.plots.push(series("boundary", prof.entries.iter().map(|e| (e.m as i64, e.boundary as i64))));
            report.tables.push(tab);
        }

        Command::StableNorm { element, nmax, limit } => {
            let x = spec.parse(element)?;
            let est = stable_norm_with_budget(spec, &x, *nmax, *limit, ctx.budget)?;
            let mut tab = Table::new("powers", &["n", "norm"]);
            for (n, v) in &est.samples {
                tab.push([n.to_string(), v.map(|v| v.to_string()).unwrap_or_default()]);
            }
            report.data = json!({
                "element": ctx.render(&est.element),
                "norm": est.norm,
                "n_max": nmax,
                "upper": est.upper.map(rat),
                "lower": rat(est.lower),
                "growth_exponent": est.growth_exponent,
                "missing_samples": est.missing(),
                "subadditivity_violations": est.subadditivity_violations,
                "verdict": est.verdict.as_str(),
            });
            report.plots.push(series(
                "powers",
                est.samples.iter().filter_map(|(n, v)| v.map(|v| (*n as i64, v as i64))),
            ));
            report.tables.push(tab);
        }

        Command::Growth { radius } => {
            let g = growth_series_with_budget(spec, *radius, ctx.kernel.as_ref(), ctx.budget)?;
            let mut tab = Table::new("growth", &["n", "ball_size"]);
            for (n, b) in g.ball_sizes.iter().enumerate() {
                tab.push([n as u64, *b]);
            }
            report.data = json!({
                "radius": g.radius,
                "filtered": g.filtered,
                "ball_sizes": g.ball_sizes,
                "fitted_base": g.fitted_base,
                "guaranteed_base_squared": rat(g.guaranteed_base_squared),
                "guaranteed_base": g.guaranteed_base,
                "r_kappa": g.r_kappa,
                "chain_holds": g.chain_holds(),
            });
            report.plots.push(series("ball_sizes", g.ball_sizes.iter().enumerate().map(|(n, &b)| (n as i64, b as i64))));
            report.tables.push(tab);
            report.tables.push(chain_table(&g.chain));
        }

        Command::VerifyGrowth { rkappa, radius } => {
            let v = verify_negative_curvature_growth_with_budget(spec, ctx.kernel.as_ref(), *rkappa, *radius, ctx.budget)?;
            report.data = json!({
                "r_kappa": v.r_kappa,
                "radius": v.radius,
                "hypothesis_holds": v.hypothesis_holds,
                "chain_holds": v.chain_holds,
                "base_squared": rat(v.base_squared),
                "base": v.base,
            });
            report.tables.push(chain_table(&v.checks));
        }

        Command::Closure { emit_genset } => {
            let budget = ctx.explicit_budget.unwrap_or(DEFAULT_CLOSURE_BUDGET);
            let c = conjugation_closure(spec, budget)?;
            let mut tab = Table::new("closure", &["index", "element", "original"]);
            for (i, x) in c.elements.iter().enumerate() {
                tab.push([i.to_string(), ctx.render(x), c.original.contains(x).to_string()]);
            }
            let literals: Vec<String> = c.elements.iter().map(|x| ctx.render(x)).collect();
            let invariant = if c.terminated {
                let closed = spec.with_generators(c.closed(spec.family())?);
                Some(conjugation_invariance_violations(&closed)?.is_empty())
            } else {
                None
            };
            report.data = json!({
                "original_size": c.original.len(),
                "size": c.elements.len(),
                "terminated": c.terminated,
                "orbit_sizes": c.orbit_sizes,
                "conjugation_invariant": invariant,
                "elements": literals,
            });
            report.tables.push(tab);
            if let Some(path) = emit_genset {
                c.closed(spec.family())?;
                let text = serde_json::to_string_pretty(&literals).expect("list serialises");
                std::fs::write(path, text + "\n")
                    .map_err(|e| CurvError::Config(format!("{}: {e}", path.display())))?;
            }
        }

        Command::FlatCheck { cutoff, radius } => {
            let gens = match spec.family() {
                Family::FiniteByDihedral(_) if !ctx.genset_given => dinf_extension_genset(spec)?,
                _ => spec.generators().clone(),
            };
            let f = verify_flat_with_budget(spec, &gens, *radius, *cutoff, ctx.budget)?;
            report.data = json!({
                "generators": gens.iter().map(|g| ctx.render(g)).collect::<Vec<_>>(),
                "cutoff": cutoff,
                "radius": radius,
                "flat": f.flat,
                "checked": f.checked,
                "counterexample": f.counterexample.as_ref().map(|(x, k)| json!({"element": ctx.render(x), "kappa": rat(*k)})),
            });
        }
    }
    Ok(())
}
