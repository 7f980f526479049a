//! Batch command-line interface: load named values from JSON files, run one
//! computation or check, and emit a report.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value as Json};

use crate::adjoint::{
    beck_chevalley_cell, construct_right_adjoint, default_apex_bound, is_left_adjoint,
    search_adjoint, verify_adjunction, CommutingSquare,
};
use crate::bar::{
    bar_truncation, forgetful_cobase_change_check, pushout_algebra, verify_bar_cocone,
};
use crate::cospan::{hcompose, tensor, Cospan};
use crate::envbm::{envbm_compose, envbm_generation_check, envbm_hom};
use crate::error::{Error, Result};
use crate::frobenius::{
    canonical_algebra, classify_unital_multiplications, self_duality, transpose, verify_frobenius,
    verify_rigid, AlgebraDatum,
};
use crate::json::{
    algebra_json, cell_json, cospan_json, envbm_mor_json, fn_json, set_json, Workspace,
};
use crate::selftest::{run_all, SelftestConfig, DEFAULT_SEED};

const TRUNCATION_NOTE: &str =
    "algebra axioms are compared up to 2-isomorphism only; higher coherences are not checked";

#[derive(Parser, Debug)]
#[command(
    name = "cospans",
    version,
    about = "Computations in the 2-category of cospans of finite sets"
)]
pub struct Cli {
    /// Workspace files binding names to values; may be repeated.
    #[arg(short, long = "input", global = true)]
    pub inputs: Vec<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Include wall-clock timing (makes output run-dependent).
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Args, Debug)]
pub struct Pair {
    #[arg(long)]
    pub left: String,
    #[arg(long)]
    pub right: String,
}

#[derive(Args, Debug)]
pub struct OneCospan {
    #[arg(long)]
    pub cospan: String,
}

#[derive(Args, Debug)]
pub struct Object {
    /// A set; its canonical algebra is used.
    #[arg(long)]
    pub object: String,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct AlgebraChoice {
    /// A set; its canonical algebra is used.
    #[arg(long)]
    pub object: Option<String>,
    /// An algebra binding.
    #[arg(long)]
    pub algebra: Option<String>,
}

#[derive(Args, Debug)]
pub struct Span {
    /// `f : A → B`.
    #[arg(long)]
    pub f: String,
    /// `g : A → C`.
    #[arg(long)]
    pub g: String,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// `left ∘ right` (right first).
    Compose(Pair),
    Tensor(Pair),
    Mirror(OneCospan),
    CheckLeftAdjoint(OneCospan),
    /// Right adjoint with unit and counit, verified.
    DeriveAdjoint(OneCospan),
    /// Bounded brute-force search for a right adjoint.
    SearchAdjoint {
        #[arg(long)]
        cospan: String,
        #[arg(long)]
        apex_bound: Option<usize>,
    },
    /// Beck–Chevalley cell of a square; without `--g-prime`/`--f-prime` the
    /// pushout square of `f, g` is used.
    BcCheck {
        #[command(flatten)]
        span: Span,
        #[arg(long)]
        g_prime: Option<String>,
        #[arg(long)]
        f_prime: Option<String>,
    },
    CheckFrobenius(AlgebraChoice),
    CheckRigid(AlgebraChoice),
    Classify {
        #[arg(long)]
        object: String,
        #[arg(long, default_value_t = 3)]
        apex_bound: usize,
    },
    Transpose(OneCospan),
    SelfDuality(Object),
    EnvbmHom {
        #[arg(long)]
        dom: String,
        #[arg(long)]
        cod: String,
    },
    /// `left ∘ right` (right first).
    EnvbmCompose(Pair),
    EnvbmGenerate {
        #[arg(long, alias = "max-size", default_value_t = 3)]
        bound: usize,
    },
    BarCheck {
        #[command(flatten)]
        span: Span,
        #[arg(long, default_value_t = 3)]
        level: usize,
    },
    PushoutAlgebra(Span),
    ForgetfulBcCheck(Span),
    Selftest {
        #[arg(long, default_value_t = 3)]
        max_size: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Compose(_) => "compose",
            Command::Tensor(_) => "tensor",
            Command::Mirror(_) => "mirror",
            Command::CheckLeftAdjoint(_) => "check-left-adjoint",
            Command::DeriveAdjoint(_) => "derive-adjoint",
            Command::SearchAdjoint { .. } => "search-adjoint",
            Command::BcCheck { .. } => "bc-check",
            Command::CheckFrobenius(_) => "check-frobenius",
            Command::CheckRigid(_) => "check-rigid",
            Command::Classify { .. } => "classify",
            Command::Transpose(_) => "transpose",
            Command::SelfDuality(_) => "self-duality",
            Command::EnvbmHom { .. } => "envbm-hom",
            Command::EnvbmCompose(_) => "envbm-compose",
            Command::EnvbmGenerate { .. } => "envbm-generate",
            Command::BarCheck { .. } => "bar-check",
            Command::PushoutAlgebra(_) => "pushout-algebra",
            Command::ForgetfulBcCheck(_) => "forgetful-bc-check",
            Command::Selftest { .. } => "selftest",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: BTreeMap<String, Json>,
    pub verdict: Verdict,
    pub witnesses: BTreeMap<String, Json>,
    pub diagnostics: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<BTreeMap<String, f64>>,
}

impl Report {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "command: {}\nverdict: {}\n",
            self.command,
            match self.verdict {
                Verdict::Pass => "pass",
                Verdict::Fail => "fail",
            }
        );
        for (k, v) in &self.inputs {
            out += &format!("input {k}: {v}\n");
        }
        for (k, v) in &self.witnesses {
            out += &format!("witness {k}: {v}\n");
        }
        for d in &self.diagnostics {
            out += &format!("diagnostic: {d}\n");
        }
        if let Some(t) = &self.timing {
            for (k, v) in t {
                out += &format!("time {k}: {v:.3}s\n");
            }
        }
        out
    }
}

struct Builder<'w> {
    ws: &'w Workspace,
    report: Report,
}

impl<'w> Builder<'w> {
    fn input(&mut self, role: &str, name: &str, value: Json) {
        self.report
            .inputs
            .insert(role.to_string(), json!({ "name": name, "value": value }));
    }

    fn cospan(&mut self, role: &str, name: &str) -> Result<&'w Cospan> {
        let c = self.ws.cospan(name)?;
        self.input(role, name, cospan_json(c));
        Ok(c)
    }

    fn set(&mut self, role: &str, name: &str) -> Result<&'w crate::FinSet> {
        let s = self.ws.set(name)?;
        self.input(role, name, set_json(s));
        Ok(s)
    }

    fn function(&mut self, role: &str, name: &str) -> Result<&'w crate::FinFn> {
        let f = self.ws.function(name)?;
        self.input(role, name, fn_json(f));
        Ok(f)
    }

    fn algebra(&mut self, choice: &AlgebraChoice) -> Result<AlgebraDatum> {
        match (&choice.object, &choice.algebra) {
            (Some(name), _) => Ok(canonical_algebra(self.set("object", name)?)),
            (None, Some(name)) => {
                let a = self.ws.algebra(name)?;
                self.input("algebra", name, algebra_json(a));
                Ok(a.clone())
            }
            (None, None) => Err(Error::TypeMismatch(
                "an object or an algebra is required".into(),
            )),
        }
    }

    fn witness(&mut self, key: &str, value: Json) {
        self.report.witnesses.insert(key.to_string(), value);
    }

    fn fail(&mut self, diagnostic: impl Into<String>) {
        self.report.verdict = Verdict::Fail;
        self.report.diagnostics.push(diagnostic.into());
    }

    fn note(&mut self, diagnostic: impl Into<String>) {
        self.report.diagnostics.push(diagnostic.into());
    }
}

/// Runs one command against a workspace. Input errors are returned; check
/// failures are reported through the verdict.
pub fn execute(command: &Command, ws: &Workspace, timing: bool) -> Result<Report> {
    let start = Instant::now();
    let mut b = Builder {
        ws,
        report: Report {
            command: command.name().to_string(),
            inputs: BTreeMap::new(),
            verdict: Verdict::Pass,
            witnesses: BTreeMap::new(),
            diagnostics: Vec::new(),
            timing: None,
        },
    };
    if !ws.sources().is_empty() {
        b.report.inputs.insert("files".into(), json!(ws.sources()));
    }
    let mut timings = BTreeMap::new();
    match command {
        Command::Compose(p) => {
            let (l, r) = (b.cospan("left", &p.left)?, b.cospan("right", &p.right)?);
            b.witness("composite", cospan_json(&hcompose(l, r)?));
        }
        Command::Tensor(p) => {
            let (l, r) = (b.cospan("left", &p.left)?, b.cospan("right", &p.right)?);
            b.witness("tensor", cospan_json(&tensor(l, r)));
        }
        Command::Mirror(c) => {
            let c = b.cospan("cospan", &c.cospan)?;
            b.witness("mirror", cospan_json(&c.mirror()));
        }
        Command::CheckLeftAdjoint(c) => {
            let c = b.cospan("cospan", &c.cospan)?;
            b.witness("wrong_way_leg", fn_json(c.right()));
            if !is_left_adjoint(c) {
                b.fail("the wrong-way leg is not a bijection");
            }
        }
        Command::DeriveAdjoint(c) => {
            let c = b.cospan("cospan", &c.cospan)?;
            match construct_right_adjoint(c) {
                Ok(w) => {
                    let report = verify_adjunction(&w)?;
                    b.witness("right", cospan_json(&w.right));
                    b.witness("unit", cell_json(&w.unit));
                    b.witness("counit", cell_json(&w.counit));
                    for d in report.diagnostics {
                        b.fail(d);
                    }
                }
                Err(Error::NotLeftAdjoint) => b.fail(Error::NotLeftAdjoint.to_string()),
                Err(e) => return Err(e),
            }
        }
        Command::SearchAdjoint { cospan, apex_bound } => {
            let c = b.cospan("cospan", cospan)?;
            let bound = apex_bound.unwrap_or_else(|| default_apex_bound(c));
            b.witness("apex_bound", json!(bound));
            match search_adjoint(c, bound) {
                Some(w) => {
                    b.witness("right", cospan_json(&w.right));
                    b.witness("unit", cell_json(&w.unit));
                    b.witness("counit", cell_json(&w.counit));
                }
                None => b.fail(format!("no witness with apex size at most {bound}")),
            }
        }
        Command::BcCheck {
            span,
            g_prime,
            f_prime,
        } => {
            let f = b.function("f", &span.f)?.clone();
            let g = b.function("g", &span.g)?.clone();
            let sq = match (g_prime, f_prime) {
                (Some(gp), Some(fp)) => {
                    let gp = b.function("g_prime", gp)?.clone();
                    let fp = b.function("f_prime", fp)?.clone();
                    CommutingSquare::new(f, g, gp, fp)?
                }
                (None, None) => CommutingSquare::pushout_of(&f, &g)?,
                _ => {
                    return Err(Error::TypeMismatch(
                        "give both --g-prime and --f-prime, or neither".into(),
                    ))
                }
            };
            let cell = beck_chevalley_cell(&sq)?;
            b.witness("beck_chevalley_cell", cell_json(&cell));
            if !cell.is_invertible() {
                b.fail(format!(
                    "Beck–Chevalley map {:?} is not a bijection",
                    cell.map()
                ));
            }
        }
        Command::CheckFrobenius(choice) => {
            let d = b.algebra(choice)?;
            match verify_frobenius(&d) {
                Ok(fd) => {
                    b.witness("counit", cospan_json(&fd.counit));
                    b.witness("comult", cospan_json(&fd.comult));
                    b.witness("left_counitality", cell_json(&fd.left_counit));
                    b.witness("right_counitality", cell_json(&fd.right_counit));
                }
                Err(e @ (Error::CounitalityFailed(_) | Error::NotRigidCandidate(_))) => {
                    b.fail(e.to_string())
                }
                Err(e) => return Err(e),
            }
            b.note(TRUNCATION_NOTE);
        }
        Command::CheckRigid(choice) => {
            let d = b.algebra(choice)?;
            let report = verify_rigid(&d);
            b.witness("unit_left_adjoint", json!(report.unit_left_adjoint));
            b.witness("mult_left_adjoint", json!(report.mult_left_adjoint));
            if let Some(cell) = &report.projection_formula {
                b.witness("projection_formula", cell_json(cell));
            }
            let missing = d.witnesses.missing();
            if !missing.is_empty() {
                b.note(format!("axioms without a witness: {}", missing.join(", ")));
            }
            let rigid = report.is_rigid();
            for diag in report.diagnostics {
                b.note(diag);
            }
            if !rigid {
                b.report.verdict = Verdict::Fail;
            }
            b.note(TRUNCATION_NOTE);
        }
        Command::Classify { object, apex_bound } => {
            let a = b.set("object", object)?;
            b.witness("apex_bound", json!(apex_bound));
            match classify_unital_multiplications(a, *apex_bound) {
                Ok(found) => {
                    let list: Vec<Json> = found
                        .iter()
                        .map(|c| json!({ "mult": cospan_json(&c.mult), "to_fold": cell_json(&c.to_fold) }))
                        .collect();
                    if list.is_empty() {
                        b.fail("no unital multiplication within the bound");
                    }
                    b.witness("classes", json!(list));
                }
                Err(e @ Error::ClassificationCounterexample(_)) => b.fail(e.to_string()),
                Err(e) => return Err(e),
            }
            b.note(TRUNCATION_NOTE);
        }
        Command::Transpose(c) => {
            let c = b.cospan("cospan", &c.cospan)?;
            let t = transpose(c)?;
            b.witness("transpose", cospan_json(&t));
            match crate::cospan::find_two_iso(&t, &c.mirror())? {
                Some(iso) => b.witness("iso_to_mirror", cell_json(&iso)),
                None => b.fail("transpose is not 2-isomorphic to the mirror"),
            }
        }
        Command::SelfDuality(o) => {
            let a = b.set("object", &o.object)?;
            let d = self_duality(a)?;
            b.witness("ev", cospan_json(&d.ev));
            b.witness("coev", cospan_json(&d.coev));
            b.witness("left_zigzag", cell_json(&d.left_zigzag));
            b.witness("right_zigzag", cell_json(&d.right_zigzag));
        }
        Command::EnvbmHom { dom, cod } => {
            let x = ws.envbm_obj(dom)?;
            let y = ws.envbm_obj(cod)?;
            b.input("dom", dom, crate::json::envbm_obj_json(x));
            b.input("cod", cod, crate::json::envbm_obj_json(y));
            let hom = envbm_hom(x, y);
            b.witness("count", json!(hom.len()));
            b.witness(
                "morphisms",
                Json::Array(hom.iter().map(envbm_mor_json).collect()),
            );
        }
        Command::EnvbmCompose(p) => {
            let g = ws.envbm_mor(&p.left)?;
            let f = ws.envbm_mor(&p.right)?;
            b.input("left", &p.left, envbm_mor_json(g));
            b.input("right", &p.right, envbm_mor_json(f));
            let gf = envbm_compose(g, f)?;
            let violations = gf.violations();
            b.witness("composite", envbm_mor_json(&gf));
            for v in violations {
                b.fail(v);
            }
        }
        Command::EnvbmGenerate { bound } => {
            b.witness("bound", json!(bound));
            match envbm_generation_check(*bound) {
                Ok(total) => b.witness("morphisms", json!(total)),
                Err(e @ Error::GenerationGap(_)) => b.fail(e.to_string()),
                Err(e) => return Err(e),
            }
        }
        Command::BarCheck { span, level } => {
            let f = b.function("f", &span.f)?;
            let g = b.function("g", &span.g)?;
            match bar_truncation(f, g, *level) {
                Ok(t) => {
                    let p = pushout_algebra(f, g)?;
                    let cocone = verify_bar_cocone(&t, &p)?;
                    let sizes: Vec<usize> = t.levels.iter().map(|l| l.len()).collect();
                    b.witness("level_sizes", json!(sizes));
                    b.witness("cocone_squares", json!(cocone.squares));
                    b.witness("coequalizer", json!(cocone.coequalizer));
                    for failure in cocone.failures {
                        b.fail(format!("cocone square fails: {failure}"));
                    }
                    if !cocone.coequalizer {
                        b.fail("level 0 does not coequalize onto the pushout");
                    }
                }
                Err(e @ Error::SimplicialIdentityFailure(_)) => b.fail(e.to_string()),
                Err(e) => return Err(e),
            }
        }
        Command::PushoutAlgebra(span) => {
            let f = b.function("f", &span.f)?;
            let g = b.function("g", &span.g)?;
            let p = pushout_algebra(f, g)?;
            b.witness("algebra", algebra_json(&p.algebra));
            b.witness("from_b", cospan_json(&p.from_b));
            b.witness("from_c", cospan_json(&p.from_c));
            b.witness("square", cell_json(&p.square));
            if !p.rigidity.is_rigid() {
                b.fail("pushout algebra is not rigid");
            }
            b.note(TRUNCATION_NOTE);
        }
        Command::ForgetfulBcCheck(span) => {
            let f = b.function("f", &span.f)?;
            let g = b.function("g", &span.g)?;
            if !forgetful_cobase_change_check(f, g)? {
                b.fail("Beck–Chevalley map of the pushout square is not a bijection");
            }
        }
        Command::Selftest { max_size, seed } => {
            let cfg = SelftestConfig::for_max_size(*max_size, *seed);
            b.witness("max_size", json!(max_size));
            b.witness("seed", json!(seed));
            for o in run_all(&cfg) {
                b.witness(
                    o.name,
                    json!({ "passed": o.passed, "instances": o.instances }),
                );
                timings.insert(o.name.to_string(), o.seconds);
                if !o.passed {
                    b.fail(format!("{}: {}", o.name, o.detail));
                }
            }
        }
    }
    if timing {
        timings.insert("total".into(), start.elapsed().as_secs_f64());
        b.report.timing = Some(timings);
    }
    Ok(b.report)
}

/// Parses arguments, runs, writes the report, and returns the exit code:
/// 0 for pass, 1 for fail, 2 for usage or input errors.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let report = Workspace::load(&cli.inputs).and_then(|ws| execute(&cli.command, &ws, cli.timing));
    let report = match report {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let rendered = match cli.format {
        Format::Json => report.to_json_string(),
        Format::Text => report.to_text(),
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &rendered) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return 2;
            }
        }
        None => print!("{rendered}"),
    }
    match report.verdict {
        Verdict::Pass => 0,
        Verdict::Fail => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const WS: &str = r#"{
        "A": {"set": {"elements": ["a0", "a1"]}},
        "B": {"set": {"elements": ["b0", "b1"]}},
        "P": {"set": {"elements": ["p"]}},
        "f": {"fn": {"dom": "A", "cod": "B", "map": {"a0": "b0", "a1": "b0"}}},
        "g": {"fn": {"dom": "A", "cod": "P", "map": {"a0": "p", "a1": "p"}}},
        "rw": {"cospan": {"src": "A", "tgt": "B", "apex": "B",
                           "left": {"a0": "b0", "a1": "b0"}, "right": {"b0": "b0", "b1": "b1"}}},
        "ww": {"cospan": {"src": "B", "tgt": "A", "apex": "B",
                           "left": {"b0": "b0", "b1": "b1"}, "right": {"a0": "b0", "a1": "b0"}}}
    }"#;

    fn run_cmd(args: &[&str]) -> Report {
        let ws = Workspace::parse_str(WS, "inline").unwrap();
        let cli =
            Cli::try_parse_from(std::iter::once("cospans").chain(args.iter().copied())).unwrap();
        execute(&cli.command, &ws, false).unwrap()
    }

    #[test]
    fn compose_delegates_to_hcompose() {
        let r = run_cmd(&["compose", "--left", "ww", "--right", "rw"]);
        assert_eq!(r.verdict, Verdict::Pass);
        assert!(r.witnesses.contains_key("composite"));
    }

    #[test]
    fn rigidity_of_pair_passes() {
        let r = run_cmd(&["check-rigid", "--object", "A"]);
        assert_eq!(r.verdict, Verdict::Pass, "{:?}", r.diagnostics);
        assert!(r.witnesses.contains_key("projection_formula"));
    }

    #[test]
    fn left_adjoint_checks() {
        assert_eq!(
            run_cmd(&["check-left-adjoint", "--cospan", "rw"]).verdict,
            Verdict::Pass
        );
        let ww = run_cmd(&["check-left-adjoint", "--cospan", "ww"]);
        assert_eq!(ww.verdict, Verdict::Fail);
        assert_eq!(
            run_cmd(&["derive-adjoint", "--cospan", "ww"]).verdict,
            Verdict::Fail
        );
        assert_eq!(
            run_cmd(&["search-adjoint", "--cospan", "ww"]).verdict,
            Verdict::Fail
        );
        assert_eq!(
            run_cmd(&["search-adjoint", "--cospan", "rw"]).verdict,
            Verdict::Pass
        );
    }

    #[test]
    fn square_commands() {
        assert_eq!(
            run_cmd(&["bc-check", "--f", "f", "--g", "g"]).verdict,
            Verdict::Pass
        );
        assert_eq!(
            run_cmd(&["forgetful-bc-check", "--f", "f", "--g", "g"]).verdict,
            Verdict::Pass
        );
        assert_eq!(
            run_cmd(&["bar-check", "--f", "f", "--g", "g", "--level", "2"]).verdict,
            Verdict::Pass
        );
        assert_eq!(
            run_cmd(&["pushout-algebra", "--f", "f", "--g", "g"]).verdict,
            Verdict::Pass
        );
    }

    #[test]
    fn reports_are_repeatable() {
        let a = run_cmd(&["transpose", "--cospan", "rw"]).to_json_string();
        let b = run_cmd(&["transpose", "--cospan", "rw"]).to_json_string();
        assert_eq!(a, b);
        assert!(!a.contains("timing"));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(["cospans", "no-such-command"]), 2);
        assert_eq!(
            run([
                "cospans",
                "mirror",
                "--cospan",
                "x",
                "-i",
                "/nonexistent.json"
            ]),
            2
        );
    }
}
