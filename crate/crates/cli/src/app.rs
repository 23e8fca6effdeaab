use std::path::PathBuf;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use cloneforge_core::cloning::{check, CheckReport, Property, Verdict};
use cloneforge_core::cocycle::{caret_norm_sq, cocycle, norm_sq, properness_census};
use cloneforge_core::intmap::{
    centralizer_certificate, embed_f, from_tree_pair, pingpong_certificate, to_f_pair, to_tree_pair,
    weak_malnormality_certificate,
};
use cloneforge_core::tlgroup::parse_pair_fields;
use cloneforge_core::{
    Certificate, CloningSystem, DAdic, GroupElement, Integers, PLMap, ProductEndoSystem, ProductVariant,
    SymmetricSystem, ThompsonGroup, TrivialSystem,
};
use serde_json::{json, Value};

use crate::expr::{parse_element, Expr};
use crate::render::{to_dot, to_svg, Diagram};

pub const SCHEMA: &str = "cloneforge/1";

#[derive(Parser, Debug)]
#[command(
    name = "cloneforge",
    version,
    about = "Cloning systems, Thompson-like groups and interval maps"
)]
#[command(
    after_help = "Elements are `pair ...` forms, map text such as `0/2^1->0/2^2; 2/2^2->1/2^2; 3/2^2->1/2^1`, \
or words such as `A*B^-1*C`. Words compose like functions (X*Y applies Y first) and use the names \
A, B, C, pi0 (d = 2 only), x0, x1, h1, h2, rot, v<n> and id."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Arity of the trees.
    #[arg(long, global = true, default_value_t = 2)]
    pub d: u32,
    #[arg(long, global = true, value_enum, default_value_t = SystemKind::Symmetric)]
    pub system: SystemKind,
    #[arg(long, global = true, default_value_t = 4)]
    pub max_level: usize,
    /// Elements drawn per level when a level is too large to enumerate.
    #[arg(long, global = true, default_value_t = 2000)]
    pub budget: usize,
    /// Seed for every sampled check; recorded in reports.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 128)]
    pub max_leaves: usize,
    #[arg(long, global = true, value_enum, alias = "report")]
    pub emit: Option<Emit>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check cloning axioms and properties of a system.
    Check {
        #[arg(long, value_enum)]
        property: Option<PropertyArg>,
    },
    /// Print an element as a map, or evaluate it at points.
    Eval {
        #[arg(long)]
        element: String,
        #[arg(long)]
        at: Vec<String>,
    },
    /// Product of the elements, composed like a word: the last acts first.
    Mul {
        #[arg(long = "element", required = true)]
        elements: Vec<String>,
    },
    Inv {
        #[arg(long)]
        element: String,
    },
    /// Reduced tree-pair form.
    Canon {
        #[arg(long)]
        element: String,
    },
    /// The cocycle vector of an element and its squared norm.
    Cocycle {
        #[arg(long)]
        element: String,
    },
    /// Elements whose partition count is below the radius.
    Census {
        #[arg(long)]
        radius_sq: usize,
    },
    /// Run certificate suites and emit one JSON bundle.
    Certify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 4)]
        max_n: usize,
    },
    /// Draw the reduced tree pair of an element.
    Render {
        #[arg(long)]
        element: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SystemKind {
    Trivial,
    Symmetric,
    Hat,
    Cyclic,
    Endo,
}

impl SystemKind {
    fn from_name(name: &str) -> Option<SystemKind> {
        SystemKind::from_str(name, false).ok()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Text,
    Json,
    Dot,
    Svg,
    Tsv,
    Norm,
    Vector,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PropertyArg {
    C1,
    C2,
    C3,
    FullyCompatible,
    Pure,
    SlightlyPure,
    Uniform,
}

impl From<PropertyArg> for Property {
    fn from(p: PropertyArg) -> Property {
        match p {
            PropertyArg::C1 => Property::C1,
            PropertyArg::C2 => Property::C2,
            PropertyArg::C3 => Property::C3,
            PropertyArg::FullyCompatible => Property::FullyCompatible,
            PropertyArg::Pure => Property::Pure,
            PropertyArg::SlightlyPure => Property::SlightlyPure,
            PropertyArg::Uniform => Property::Uniform,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Pingpong,
    Malnormality,
    Centralizer,
    Ac,
    Axioms,
}

/// What a command printed and whether everything it checked holds.
#[derive(Debug)]
pub struct Outcome {
    pub output: String,
    pub ok: bool,
}

impl Outcome {
    fn ok(output: String) -> Outcome {
        Outcome { output, ok: true }
    }
}

/// Systems whose groups accept interval maps as elements.
trait Lift: CloningSystem {
    fn lift(g: &ThompsonGroup<Self>, m: &PLMap) -> cloneforge_core::Result<GroupElement<Self::Elem>>;
}

impl Lift for SymmetricSystem {
    fn lift(g: &ThompsonGroup<Self>, m: &PLMap) -> cloneforge_core::Result<GroupElement<Self::Elem>> {
        let v = ThompsonGroup::new(SymmetricSystem::full(g.arity())?).with_max_leaves(g.max_leaves());
        g.element(to_tree_pair(&v, m)?.into_pair())
    }
}

impl Lift for TrivialSystem {
    fn lift(g: &ThompsonGroup<Self>, m: &PLMap) -> cloneforge_core::Result<GroupElement<()>> {
        to_f_pair(g, m)
    }
}

impl Lift for ProductEndoSystem<Integers> {
    fn lift(g: &ThompsonGroup<Self>, m: &PLMap) -> cloneforge_core::Result<GroupElement<Self::Elem>> {
        embed_f(g, m)
    }
}

/// Runs `$body` with `$g` bound to the group of the given system.
macro_rules! with_group {
    ($kind:expr, $d:expr, $leaves:expr, $g:ident => $body:expr) => {{
        let d = $d as usize;
        match $kind {
            SystemKind::Symmetric => {
                let $g = ThompsonGroup::new(SymmetricSystem::full(d)?).with_max_leaves($leaves);
                $body
            }
            SystemKind::Hat => {
                let $g = ThompsonGroup::new(SymmetricSystem::hat(d)?).with_max_leaves($leaves);
                $body
            }
            SystemKind::Cyclic => {
                let $g = ThompsonGroup::new(SymmetricSystem::cyclic(d)?).with_max_leaves($leaves);
                $body
            }
            SystemKind::Trivial => {
                let $g = ThompsonGroup::new(TrivialSystem::new(d)?).with_max_leaves($leaves);
                $body
            }
            SystemKind::Endo => {
                let sys = ProductEndoSystem::identities(Integers::default(), d, ProductVariant::Full)?;
                let $g = ThompsonGroup::new(sys).with_max_leaves($leaves);
                $body
            }
        }
    }};
}

pub fn run_args<I, T>(argv: I) -> anyhow::Result<Outcome>
where
    I: IntoIterator<Item = T>,
    T: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let cli = Cli::try_parse_from(&argv)?;
    run(&cli, &argv)
}

pub fn run(cli: &Cli, argv: &[String]) -> anyhow::Result<Outcome> {
    let env = Env { cli, argv };
    match &cli.command {
        Command::Check { property } => env.check(*property),
        Command::Eval { element, at } => env.eval(element, at),
        Command::Mul { elements } => env.pair_verb(elements, Verb::Mul),
        Command::Inv { element } => env.pair_verb(std::slice::from_ref(element), Verb::Inv),
        Command::Canon { element } => env.pair_verb(std::slice::from_ref(element), Verb::Canon),
        Command::Cocycle { element } => env.cocycle(element),
        Command::Census { radius_sq } => env.census(*radius_sq),
        Command::Certify { suite, samples, max_n } => env.certify(*suite, *samples, *max_n),
        Command::Render { element, out } => env.render(element, out.as_ref()),
    }
}

#[derive(Clone, Copy)]
enum Verb {
    Mul,
    Inv,
    Canon,
}

struct Env<'a> {
    cli: &'a Cli,
    argv: &'a [String],
}

impl Env<'_> {
    fn emit(&self, default: Emit) -> Emit {
        self.cli.emit.unwrap_or(default)
    }

    fn envelope(&self, body: Value) -> String {
        let mut v = json!({ "schema": SCHEMA, "command": self.argv.get(1..).unwrap_or_default() });
        if let (Value::Object(dst), Value::Object(src)) = (&mut v, body) {
            dst.extend(src);
        }
        serde_json::to_string_pretty(&v).unwrap() + "\n"
    }

    fn parse(&self, text: &str) -> anyhow::Result<Expr> {
        parse_element(text, self.cli.d).with_context(|| format!("in element {text:?}"))
    }

    /// System and arity of an element: those named in a pair form, else the flags.
    fn system_of(&self, e: &Expr) -> anyhow::Result<(SystemKind, u32)> {
        let Expr::Pair(text) = e else {
            return Ok((self.cli.system, self.cli.d));
        };
        let fields = parse_pair_fields(text)?;
        let get = |k: &str| fields.iter().find(|f| f.0 == k).map(|f| f.1.clone());
        let kind = match get("sys") {
            Some(name) => SystemKind::from_name(&name).ok_or_else(|| anyhow!("unknown system {name:?}"))?,
            None if get("perm").is_some() => SystemKind::Symmetric,
            None if get("dec").is_some() => SystemKind::Endo,
            None => SystemKind::Trivial,
        };
        let d = match get("d") {
            Some(d) => d.parse().map_err(|_| anyhow!("bad arity {d:?}"))?,
            None => self.cli.d,
        };
        Ok((kind, d))
    }

    fn to_map(&self, e: &Expr) -> anyhow::Result<PLMap> {
        match e {
            Expr::Map(m) => Ok(m.clone()),
            Expr::Pair(text) => {
                let (kind, d) = self.system_of(e)?;
                with_group!(kind, d, self.cli.max_leaves, g => Ok(from_tree_pair(&g, &g.parse_pair(text)?)?))
            }
        }
    }

    fn check(&self, property: Option<PropertyArg>) -> anyhow::Result<Outcome> {
        let (reports, expected) =
            with_group!(self.cli.system, self.cli.d, self.cli.max_leaves, g => self.run_checks(g.system(), property)?);
        let ok = reports.iter().zip(&expected).all(|(r, e)| r.holds() == *e);
        let rows: Vec<Value> = reports
            .iter()
            .zip(&expected)
            .map(|(r, e)| json!({ "report": r, "expected": e, "agrees": r.holds() == *e }))
            .collect();
        let output = match self.emit(Emit::Text) {
            Emit::Json => self.envelope(json!({
                "system": self.cli.system.to_possible_value().unwrap().get_name(),
                "d": self.cli.d,
                "max_level": self.cli.max_level,
                "budget": self.cli.budget,
                "seed": self.cli.seed,
                "checks": rows,
                "ok": ok,
            })),
            _ => {
                let mut s = String::new();
                for (r, e) in reports.iter().zip(&expected) {
                    let mark = if r.holds() == *e { "ok" } else { "MISMATCH" };
                    s += &format!(
                        "{:<17} {:<14} expected {:<5} {:>8} cases  {mark}\n",
                        r.property,
                        format!("{:?}", r.verdict),
                        e,
                        r.cases
                    );
                    if let (Some(w), Verdict::Fails) = (&r.witness, r.verdict) {
                        s += &format!("  witness at level {}: {}\n", w.level, w.detail);
                    }
                }
                s
            }
        };
        Ok(Outcome { output, ok })
    }

    fn run_checks<S: CloningSystem>(
        &self,
        sys: &S,
        property: Option<PropertyArg>,
    ) -> anyhow::Result<(Vec<CheckReport>, Vec<bool>)> {
        let props: Vec<Property> = match property {
            Some(p) => vec![p.into()],
            None => Property::ALL.to_vec(),
        };
        let claims = sys.properties();
        let mut reports = Vec::new();
        let mut expected = Vec::new();
        for p in props {
            reports.push(check(sys, p, self.cli.max_level, self.cli.budget, self.cli.seed));
            expected.push(match p {
                Property::C1 | Property::C2 | Property::C3 => true,
                Property::FullyCompatible => claims.fully_compatible,
                Property::Pure => claims.pure,
                Property::SlightlyPure => claims.slightly_pure,
                Property::Uniform => claims.uniform,
            });
        }
        // a single requested property must hold outright
        if property.is_some() {
            expected = vec![true];
        }
        Ok((reports, expected))
    }

    fn eval(&self, element: &str, at: &[String]) -> anyhow::Result<Outcome> {
        let m = self.to_map(&self.parse(element)?)?;
        let d = m.base();
        let mut images = Vec::new();
        for x in at {
            let p = DAdic::parse(x, d)?;
            images.push((p.clone(), m.evaluate(&p)?));
        }
        let output = match self.emit(Emit::Text) {
            Emit::Json => self.envelope(json!({
                "d": d,
                "map": m.to_string(),
                "points": images.iter().map(|(x, y)| json!({"x": x.to_string(), "image": y.to_string()})).collect::<Vec<_>>(),
            })),
            Emit::Tsv => images.iter().map(|(x, y)| format!("{x}\t{y}\n")).collect(),
            _ if images.is_empty() => format!("{m}\n"),
            _ => images.iter().map(|(x, y)| format!("{x} -> {y}\n")).collect(),
        };
        Ok(Outcome::ok(output))
    }

    fn pair_verb(&self, elements: &[String], verb: Verb) -> anyhow::Result<Outcome> {
        let exprs = elements
            .iter()
            .map(|t| self.parse(t))
            .collect::<anyhow::Result<Vec<_>>>()?;
        let (kind, d) = match exprs.iter().find(|e| matches!(e, Expr::Pair(_))) {
            Some(e) => self.system_of(e)?,
            None => (self.cli.system, self.cli.d),
        };
        with_group!(kind, d, self.cli.max_leaves, g => self.pair_verb_in(&g, &exprs, verb))
    }

    fn pair_verb_in<S: Lift>(&self, g: &ThompsonGroup<S>, exprs: &[Expr], verb: Verb) -> anyhow::Result<Outcome> {
        let resolve = |e: &Expr| -> anyhow::Result<GroupElement<S::Elem>> {
            Ok(match e {
                Expr::Map(m) => S::lift(g, m)?,
                Expr::Pair(text) => g.parse_pair(text)?,
            })
        };
        let elems = exprs.iter().map(resolve).collect::<anyhow::Result<Vec<_>>>()?;
        let result = match verb {
            // the tree-pair product acts left factor first, so a word multiplies in reverse
            Verb::Mul => elems
                .iter()
                .rev()
                .try_fold(g.identity(), |acc, x| g.multiply(&acc, x))?,
            Verb::Inv => g.invert(&elems[0]),
            Verb::Canon => g.canonical_form(elems[0].pair().clone()),
        };
        let map = from_tree_pair(g, &result)?;
        let output = match self.emit(Emit::Text) {
            Emit::Json => self.envelope(json!({
                "pair": g.to_record(result.pair()),
                "text": g.format_pair(result.pair()),
                "map": map.to_string(),
                "leaves": result.pair().level(),
            })),
            _ => format!("{}\n", g.display(&result)),
        };
        Ok(Outcome::ok(output))
    }

    fn cocycle(&self, element: &str) -> anyhow::Result<Outcome> {
        let m = self.to_map(&self.parse(element)?)?;
        let c = cocycle(&m)?;
        let norm = c.norm_sq();
        let output = match self.emit(Emit::Text) {
            Emit::Norm => format!("norm² = {norm}\n"),
            Emit::Vector | Emit::Tsv => c.entries().map(|(h, x)| format!("{h}\t{x}\n")).collect(),
            Emit::Json => self.envelope(json!({
                "d": m.base(),
                "map": m.to_string(),
                "norm_sq": norm,
                "carets": caret_norm_sq(&m),
                "partition_points": norm_sq(&m),
                "entries": c.to_records(),
            })),
            _ => {
                let mut s = format!("map: {m}\n");
                for (h, x) in c.entries() {
                    s += &format!("{x:+} {h}\n");
                }
                s + &format!("norm² = {norm}\n")
            }
        };
        Ok(Outcome::ok(output))
    }

    fn census(&self, radius_sq: usize) -> anyhow::Result<Outcome> {
        let c = properness_census(self.cli.d, radius_sq)?;
        let output = match self.emit(Emit::Text) {
            Emit::Json => self.envelope(json!({
                "d": c.d,
                "radius_sq": c.radius_sq,
                "depth_bound": c.depth_bound,
                "count": c.count(),
                "elements": c.elements.iter().map(|(n, v)| json!({"norm_sq": n, "map": v.to_string()})).collect::<Vec<_>>(),
            })),
            Emit::Tsv => c.elements.iter().map(|(n, v)| format!("{n}\t{v}\n")).collect(),
            _ => {
                let mut s = format!("count = {} (d = {}, radius² = {})\n", c.count(), c.d, c.radius_sq);
                for (n, v) in &c.elements {
                    s += &format!("{n:>3}  {v}\n");
                }
                s
            }
        };
        Ok(Outcome::ok(output))
    }

    fn certify(&self, suite: Suite, samples: usize, max_n: usize) -> anyhow::Result<Outcome> {
        let d = self.cli.d;
        let seed = self.cli.seed;
        let wants = |s: Suite| suite == Suite::All || suite == s;
        let mut certs: Vec<Certificate> = Vec::new();
        if wants(Suite::Axioms) {
            certs.push(with_group!(self.cli.system, d, self.cli.max_leaves, g => self.axiom_certificate(g.system())?));
        }
        if wants(Suite::Pingpong) {
            certs.push(pingpong_certificate(d, 8)?);
        }
        if wants(Suite::Malnormality) {
            certs.push(weak_malnormality_certificate(d)?);
        }
        if wants(Suite::Centralizer) {
            certs.push(centralizer_certificate(d, samples, max_n as u32, seed)?);
        }
        if wants(Suite::Ac) {
            let n = max_n.min(5);
            let leaves = self.cli.max_leaves;
            certs.push(
                ThompsonGroup::new(TrivialSystem::new(d as usize)?)
                    .with_max_leaves(leaves)
                    .ac_certificate(n, samples, seed)?,
            );
            certs.push(
                ThompsonGroup::new(SymmetricSystem::hat(d as usize)?)
                    .with_max_leaves(leaves)
                    .ac_certificate(n, samples, seed)?,
            );
        }
        let ok = certs.iter().all(|c| c.passed);
        let output = match self.emit(Emit::Json) {
            Emit::Text => {
                let mut s = String::new();
                for c in &certs {
                    s += &format!("[{}] {}\n", if c.passed { "pass" } else { "FAIL" }, c.claim);
                    for f in &c.facts {
                        s += &format!("  {} {}: {}\n", if f.holds { "ok  " } else { "FAIL" }, f.name, f.detail);
                    }
                    for flag in &c.flags {
                        s += &format!("  note: {flag}\n");
                    }
                }
                s
            }
            _ => self.envelope(json!({ "d": d, "seed": seed, "suites": certs, "passed": ok })),
        };
        Ok(Outcome { output, ok })
    }

    fn axiom_certificate<S: CloningSystem>(&self, sys: &S) -> anyhow::Result<Certificate> {
        let mut cert = Certificate::new("cloning_axioms")
            .param("system", sys.name())
            .param("d", sys.arity())
            .param("max_level", self.cli.max_level)
            .param("budget", self.cli.budget)
            .param("seed", self.cli.seed);
        for p in [Property::C1, Property::C2, Property::C3] {
            let r = check(sys, p, self.cli.max_level, self.cli.budget, self.cli.seed);
            let detail = match &r.witness {
                Some(w) => format!("{:?}: {}", r.verdict, w.detail),
                None => format!("{:?}, {} cases", r.verdict, r.cases),
            };
            cert.fact(p.name(), r.holds(), detail);
        }
        Ok(cert)
    }

    fn render(&self, element: &str, out: Option<&PathBuf>) -> anyhow::Result<Outcome> {
        let e = self.parse(element)?;
        let (kind, d) = self.system_of(&e)?;
        let text = with_group!(kind, d, self.cli.max_leaves, g => self.render_in(&g, &e, element))?;
        match out {
            Some(path) => {
                std::fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
                Ok(Outcome::ok(format!("wrote {}\n", path.display())))
            }
            None => Ok(Outcome::ok(text)),
        }
    }

    fn render_in<S: Lift>(&self, g: &ThompsonGroup<S>, e: &Expr, source: &str) -> anyhow::Result<String> {
        let elem = match e {
            Expr::Map(m) => S::lift(g, m)?,
            Expr::Pair(text) => g.parse_pair(text)?,
        };
        let p = elem.pair();
        let sigma = g.system().rho(p.level(), &p.decoration);
        let caption = match g.system().decoration_key() {
            Some(key) => format!("{source}  ({key} {})", g.system().format_elem(p.level(), &p.decoration)),
            None => source.to_string(),
        };
        let diag = Diagram {
            top: &p.top,
            sigma: &sigma,
            bottom: &p.bottom,
            caption,
        };
        Ok(match self.emit(Emit::Dot) {
            Emit::Svg => to_svg(&diag),
            Emit::Dot => to_dot(&diag),
            other => bail!("render emits dot or svg, not {other:?}"),
        })
    }
}
