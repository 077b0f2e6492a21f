use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use torsor::exact::module::FinModule;
use torsor::exact::presentation::{ModulePresentation, RingRef};
use torsor::exact::{FiniteRing, Ideal, RingMap};
use torsor::homotopy::graded::Window;
use torsor::homotopy::local_cohomology::{ext_local_cohomology, local_cohomology};
use torsor::idempotents::derived::{continuity_check, DPair};
use torsor::idempotents::{coreflection_check, hom_pairs, is_idempotent, DerivedContext};
use torsor::support::{
    base_of_stable_set, base_to_sos, inverse_image_stable, meet_sos, sos_to_base, support_module, AnyRingMap,
    PolyMap, SpecModel, StableSet,
};
use torsor::torsion::{gamma, gamma_by_support, AnyIdeal};
use torsor::{suite, Error, Result};

macro_rules! to_value {
    ($x:expr) => {
        serde_json::to_value($x).expect("serializable")
    };
}

/// Torsion functors, local cohomology and idempotent pairs, with JSON output.
#[derive(Parser)]
#[command(name = "torsor", version)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Pretty,
}

#[derive(Subcommand)]
enum Command {
    /// Reduced Gröbner basis of an ideal, optionally with a normal form.
    Groebner {
        #[command(flatten)]
        ideal: IdealArgs,
        /// Polynomial to reduce modulo the ideal.
        #[arg(long)]
        reduce: Option<String>,
    },
    /// Binary ideal operations and radical containment.
    Ideal {
        #[arg(value_enum)]
        op: IdealVerb,
        #[command(flatten)]
        ideal: IdealArgs,
        /// Generators of the second ideal.
        #[arg(long = "other", required = true)]
        other: Vec<String>,
    },
    /// The torsion submodule of a module.
    Gamma {
        #[arg(long)]
        ring: String,
        /// Ideal generators; omit when `--stable-set` is given.
        #[arg(long)]
        ideal: Vec<String>,
        #[arg(long)]
        module: String,
        /// Compute the sections supported in a stable set instead.
        #[arg(long, conflicts_with = "ideal")]
        stable_set: Option<String>,
    },
    /// Local cohomology modules.
    Localcoh {
        #[command(flatten)]
        ideal: IdealArgs,
        #[arg(long)]
        module: String,
        /// A single cohomological degree; defaults to all degrees up to the
        /// number of generators.
        #[arg(long)]
        degree: Option<i64>,
        /// Multidegree window `lo,hi` or `lo1:hi1,lo2:hi2` for graded modules.
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        #[arg(long, value_enum, default_value_t = Route::Cech)]
        route: Route,
    },
    /// Stable sets, support bases and support systems.
    #[command(subcommand)]
    Sos(SosCommand),
    /// Idempotent pairs in the derived category of a finite ring.
    #[command(subcommand)]
    Idem(IdemCommand),
    /// Run the acceptance criteria.
    Suite {
        /// Criterion numbers; all when omitted.
        #[arg(long = "criterion")]
        criteria: Vec<u32>,
    },
}

#[derive(Args)]
struct IdealArgs {
    #[arg(long)]
    ring: String,
    /// Ideal generator; repeat for several.
    #[arg(long = "ideal", required = true)]
    gens: Vec<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum IdealVerb {
    Sum,
    Product,
    Intersection,
    Quotient,
    Saturation,
    RadicalContains,
}

#[derive(Clone, Copy, ValueEnum)]
enum Route {
    Cech,
    Ext,
    Both,
}

#[derive(Subcommand)]
enum SosCommand {
    /// Support of a module.
    Support {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        module: String,
    },
    /// The stable set cut out by an ideal, with its base and system forms.
    Base {
        #[command(flatten)]
        ideal: IdealArgs,
    },
    /// Intersection of stable sets.
    Meet {
        #[arg(long)]
        ring: String,
        #[arg(long = "stable-set", required = true, num_args = 1)]
        sets: Vec<String>,
    },
    /// Preimage of a stable set along a ring map.
    InverseImage {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long)]
        stable_set: String,
    },
}

#[derive(Args)]
struct MapArgs {
    /// Source ring.
    #[arg(long)]
    ring: String,
    /// Target ring.
    #[arg(long)]
    target: String,
    /// Comma-separated images of the source basis (finite rings) or of the
    /// source variables (polynomial rings).
    #[arg(long)]
    map: String,
}

#[derive(Subcommand)]
enum IdemCommand {
    /// Check the idempotent axioms for a Čech pair or the pair of a stable set.
    Check {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        ideal: Vec<String>,
        #[arg(long, conflicts_with = "ideal")]
        stable_set: Option<String>,
    },
    /// Every idempotent pair up to isomorphism, with its order.
    Classify {
        #[arg(long)]
        ring: String,
    },
    /// Compare two idempotent pairs given by stable sets.
    Leq {
        #[arg(long)]
        ring: String,
        /// The smaller candidate.
        #[arg(long)]
        lower: String,
        #[arg(long)]
        upper: String,
    },
    /// The equivalent continuity conditions for a ring map.
    Continuity {
        #[command(flatten)]
        map: MapArgs,
        /// Stable set of the source.
        #[arg(long)]
        stable_set: String,
        /// Stable set of the target.
        #[arg(long)]
        target_set: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (value, code) = match run(&cli.command) {
        Ok((v, ok)) => (v, if ok { 0 } else { 1 }),
        Err(e) => {
            let code = if e.is_input_error() { 2 } else { 1 };
            (json!({"error": {"code": e.code(), "message": e.to_string()}}), code)
        }
    };
    let text = match cli.format {
        Format::Json => serde_json::to_string(&value),
        Format::Pretty => serde_json::to_string_pretty(&value),
    }
    .expect("JSON values serialize");
    println!("{text}");
    ExitCode::from(code)
}

/// The result and whether the request succeeded.
fn run(cmd: &Command) -> Result<(Value, bool)> {
    let v = match cmd {
        Command::Groebner { ideal, reduce } => groebner(ideal, reduce.as_deref())?,
        Command::Ideal { op, ideal, other } => ideal_op(*op, ideal, other)?,
        Command::Gamma {
            ring,
            ideal,
            module,
            stable_set,
        } => gamma_cmd(ring, ideal, module, stable_set.as_deref())?,
        Command::Localcoh {
            ideal,
            module,
            degree,
            window,
            route,
        } => localcoh(ideal, module, *degree, window.as_deref(), *route)?,
        Command::Sos(c) => sos(c)?,
        Command::Idem(c) => idem(c)?,
        Command::Suite { criteria } => return Ok(suite_cmd(criteria)),
    };
    Ok((v, true))
}

fn strs(v: &[String]) -> Vec<&str> {
    v.iter().map(|s| s.as_str()).collect()
}

fn poly_ideal(args: &IdealArgs) -> Result<Ideal> {
    match RingRef::parse(&args.ring)? {
        RingRef::Poly(r) => Ideal::parse(&r, &strs(&args.gens)),
        RingRef::Finite(_) => Err(Error::UnsupportedBackend("Gröbner bases need a polynomial ring".into())),
    }
}

fn finite_ring(spec: &str) -> Result<Arc<FiniteRing>> {
    match RingRef::parse(spec)? {
        RingRef::Finite(r) => Ok(r),
        RingRef::Poly(_) => Err(Error::UnsupportedBackend("idempotent pairs need a finite ring".into())),
    }
}

fn groebner(args: &IdealArgs, reduce: Option<&str>) -> Result<Value> {
    let i = poly_ideal(args)?;
    let basis: Vec<String> = i.groebner().iter().map(|g| g.to_string()).collect();
    let mut out = json!({"ideal": to_value!(&i.to_json()), "groebner": basis});
    if let Some(f) = reduce {
        let nf = i.normal_form(&i.ring.parse(f)?)?;
        out["normal_form"] = json!(nf.to_string());
    }
    Ok(out)
}

fn ideal_op(op: IdealVerb, args: &IdealArgs, other: &[String]) -> Result<Value> {
    let i = poly_ideal(args)?;
    let j = Ideal::parse(&i.ring, &strs(other))?;
    let kind = match op {
        IdealVerb::RadicalContains => return Ok(json!({"radical_contains": i.radical_contains(&j)?})),
        IdealVerb::Sum => "sum",
        IdealVerb::Product => "product",
        IdealVerb::Intersection => "intersection",
        IdealVerb::Quotient => "quotient",
        IdealVerb::Saturation => "saturation",
    };
    let r = i.op(kind.parse()?, &j)?.with_groebner_gens();
    Ok(json!({"op": kind, "result": to_value!(&r.to_json())}))
}

fn gamma_cmd(ring: &str, ideal: &[String], module: &str, stable_set: Option<&str>) -> Result<Value> {
    let r = RingRef::parse(ring)?;
    let m = ModulePresentation::parse(&r, module)?;
    let (sub, stable_index) = match stable_set {
        Some(z) => (gamma_by_support(&StableSet::parse(&SpecModel::of(&r), z)?, &m)?, None),
        None => {
            if ideal.is_empty() {
                return Err(Error::InvalidInput("gamma needs --ideal or --stable-set".into()));
            }
            let chain = gamma(&AnyIdeal::parse(&r, &strs(ideal))?, &m)?;
            (chain.result().clone(), Some(chain.stable_index))
        }
    };
    let mut out = json!({
        "ring": r.spec(),
        "ambient": module,
        "generators": sub.generator_strings(),
    });
    if let Some(t) = stable_index {
        out["stable_index"] = json!(t);
    }
    if let Some(els) = sub.element_strings(256) {
        out["elements"] = json!(els);
    }
    Ok(out)
}

fn localcoh(args: &IdealArgs, module: &str, degree: Option<i64>, window: Option<&str>, route: Route) -> Result<Value> {
    let r = RingRef::parse(&args.ring)?;
    let i = AnyIdeal::parse(&r, &strs(&args.gens))?;
    let m = ModulePresentation::parse(&r, module)?;
    let window = match (window, &r) {
        (Some(w), RingRef::Poly(p)) => Some(Window::parse(w, p.nvars())?),
        (Some(_), RingRef::Finite(_)) => return Err(Error::InvalidInput("windows apply to graded modules".into())),
        (None, _) => None,
    };
    let degrees: Vec<i64> = match degree {
        Some(d) => vec![d],
        None => (0..=args.gens.len() as i64).collect(),
    };
    let mut h = Vec::new();
    for d in degrees {
        let entry = match route {
            Route::Cech => to_value!(&local_cohomology(&i, &m, d, window.as_ref())?.to_json()),
            Route::Ext => to_value!(&ext_local_cohomology(&i, &m, d)?.to_json()),
            Route::Both => {
                let a = local_cohomology(&i, &m, d, window.as_ref())?;
                let b = ext_local_cohomology(&i, &m, d)?;
                if a.profile() != b.profile() {
                    return Err(Error::InconsistentSupport(format!("Čech and Ext routes differ in degree {d}")));
                }
                to_value!(&a.to_json())
            }
        };
        h.push(entry);
    }
    Ok(json!({"H": h}))
}

fn stable_json(z: &StableSet) -> Value {
    to_value!(&z.to_json())
}

fn sos(cmd: &SosCommand) -> Result<Value> {
    match cmd {
        SosCommand::Support { ring, module } => {
            let r = RingRef::parse(ring)?;
            let m = ModulePresentation::parse(&r, module)?;
            Ok(json!({"support": stable_json(&support_module(&m)?)}))
        }
        SosCommand::Base { ideal } => {
            let r = RingRef::parse(&ideal.ring)?;
            let z = zero_set(&r, &ideal.gens)?;
            let base = base_of_stable_set(&z);
            let back = sos_to_base(&base_to_sos(&base));
            Ok(json!({
                "stable_set": stable_json(&z),
                "base": base.representative_strings(),
                "round_trip": back.same_as(&base)?,
            }))
        }
        SosCommand::Meet { ring, sets } => {
            let model = SpecModel::of(&RingRef::parse(ring)?);
            let parsed = sets
                .iter()
                .map(|s| StableSet::parse(&model, s))
                .collect::<Result<Vec<_>>>()?;
            let mut acc = torsor::support::from_stable_set(&parsed[0]);
            for z in &parsed[1..] {
                acc = meet_sos(&acc, &torsor::support::from_stable_set(z))?;
            }
            Ok(json!({"meet": stable_json(&acc.stable_set())}))
        }
        SosCommand::InverseImage { map, stable_set } => {
            let (psi, model) = ring_map(map)?;
            let z = StableSet::parse(&model, stable_set)?;
            Ok(json!({"inverse_image": stable_json(&inverse_image_stable(&psi, &z)?)}))
        }
    }
}

/// `Z(gens)` over a finite ring, where generators are ring elements.
fn zero_set(r: &RingRef, gens: &[String]) -> Result<StableSet> {
    match r {
        RingRef::Finite(f) => {
            let g = gens.iter().map(|s| f.parse_element(s)).collect::<Result<Vec<_>>>()?;
            Ok(StableSet::zero_set_finite(f, &g))
        }
        RingRef::Poly(p) => Ok(StableSet::Closed(Ideal::parse(p, &strs(gens))?)),
    }
}

/// The map and the spectrum model of its source.
fn ring_map(args: &MapArgs) -> Result<(AnyRingMap, SpecModel)> {
    match (RingRef::parse(&args.ring)?, RingRef::parse(&args.target)?) {
        (RingRef::Finite(s), RingRef::Finite(t)) => {
            Ok((AnyRingMap::Finite(RingMap::parse(&s, &t, &args.map)?), SpecModel::Finite(s)))
        }
        (RingRef::Poly(s), RingRef::Poly(t)) => {
            let images = args
                .map
                .split(',')
                .map(|p| t.parse(p.trim()))
                .collect::<Result<Vec<_>>>()?;
            Ok((AnyRingMap::Poly(PolyMap::new(&s, &t, images)?), SpecModel::Symbolic(s)))
        }
        _ => Err(Error::BackendMismatch("source and target use different backends".into())),
    }
}

fn pair_of(ctx: &DerivedContext, ideal: &[String], stable_set: Option<&str>) -> Result<DPair> {
    match stable_set {
        Some(z) => ctx.topology_to_idempotent(&StableSet::parse(&SpecModel::Finite(ctx.ring.clone()), z)?),
        None => {
            if ideal.is_empty() {
                return Err(Error::InvalidInput("idem check needs --ideal or --stable-set".into()));
            }
            let t = ideal
                .iter()
                .map(|s| ctx.ring.parse_element(s))
                .collect::<Result<Vec<_>>>()?;
            ctx.cech_pair(&t)
        }
    }
}

fn prime_names(ring: &FiniteRing, z: &StableSet) -> Result<Vec<String>> {
    Ok(z.prime_list()?.iter().map(|&k| ring.prime_name(k)).collect())
}

fn idem(cmd: &IdemCommand) -> Result<Value> {
    match cmd {
        IdemCommand::Check { ring, ideal, stable_set } => {
            let ctx = DerivedContext::new(&finite_ring(ring)?)?;
            let p = pair_of(&ctx, ideal, stable_set.as_deref())?;
            let report = is_idempotent(&ctx, &p)?;
            let samples = suite::principal_generators(&ctx.ring)
                .into_iter()
                .map(|g| ctx.module_object(&FinModule::ring_quotient(&ctx.ring, &[g]).module))
                .collect::<Result<Vec<_>>>()?;
            let coreflection = coreflection_check(&ctx, &p, &samples)?;
            let mut out = json!({"report": to_value!(&report), "coreflection_violations": coreflection});
            if report.idempotent {
                out["support"] = stable_json(&ctx.idempotent_support(&p)?);
            }
            Ok(out)
        }
        IdemCommand::Classify { ring } => {
            let ctx = DerivedContext::new(&finite_ring(ring)?)?;
            let c = ctx.classify()?;
            let classes = c
                .classes
                .iter()
                .map(|k| {
                    Ok(json!({
                        "support": prime_names(&ctx.ring, &k.stable_set)?,
                        "idempotent": k.idempotent,
                        "round_trip": k.round_trip,
                    }))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(json!({
                "ring": ctx.ring.spec,
                "count": c.classes.len(),
                "classes": classes,
                "le": c.le,
                "pairwise_distinct": c.pairwise_distinct(),
                "order_matches_supports": c.order_matches_supports()?,
            }))
        }
        IdemCommand::Leq { ring, lower, upper } => {
            let ctx = DerivedContext::new(&finite_ring(ring)?)?;
            let b = pair_of(&ctx, &[], Some(lower))?;
            let a = pair_of(&ctx, &[], Some(upper))?;
            Ok(json!({
                "leq": ctx.leq_checked(&b, &a)?,
                "hom_pairs": hom_pairs(&ctx, &b, &a)?.len(),
            }))
        }
        IdemCommand::Continuity {
            map,
            stable_set,
            target_set,
        } => {
            let (psi, model) = ring_map(map)?;
            let AnyRingMap::Finite(f) = psi else {
                return Err(Error::UnsupportedBackend("continuity is checked over finite rings".into()));
            };
            let z_s = StableSet::parse(&model, stable_set)?;
            let z_t = StableSet::parse(&SpecModel::Finite(f.target.clone()), target_set)?;
            let report = continuity_check(&f, &z_s, &z_t)?;
            let mut out = to_value!(&report);
            out["continuous"] = json!(report.continuous());
            Ok(out)
        }
    }
}

fn suite_cmd(criteria: &[u32]) -> (Value, bool) {
    let outcomes = if criteria.is_empty() {
        suite::run_all()
    } else {
        criteria.iter().map(|&c| suite::run(c)).collect()
    };
    let passed = outcomes.iter().all(|o| o.passed);
    let table: Vec<Value> = outcomes
        .iter()
        .map(|o| {
            json!({
                "id": o.id,
                "name": o.name,
                "passed": o.passed,
                "cases": o.cases,
                "failures": o.failures,
            })
        })
        .collect();
    (json!({"criteria": table, "passed": passed}), passed)
}
