mod graph;
mod premises;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use subfib::fibration::vertical_opposite;
use subfib::funty::{check_fun_structure, derive_fun_subtyping, derive_lam_typing, heyting_fun_structure, subobject_fun_structure};
use subfib::gcwf::{check_gcwf, check_sigma_faithful, rule_sbsm, rule_sbst, rule_trans, rule_wkn, Gcwf, Judgement};
use subfib::io::{load_model, Model, ModelError};
use subfib::models::{
    doctrine_gcwf, finset_skeleton, heyting_sample, kernel_pair_gcwf_in, subobject_gcwf, ArrowClass,
};
use subfib::monad::{check_monad_laws_fib, check_monad_laws_gcwf, t_fib, t_gcwf};
use subfib::Report;

use crate::premises::Premise;

/// Finite fibrations, gcwfs and subtyping judgements.
#[derive(Parser)]
#[command(name = "subfib", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load a model file and validate every entity in it.
    Validate { file: PathBuf },
    /// Build a model and write it as JSON.
    Build {
        #[command(subcommand)]
        what: Build,
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
    /// Apply a structural rule to premises and print the transcript.
    Derive {
        rule: Rule,
        #[command(flatten)]
        sel: Select,
        /// Premises, e.g. `x0|0 <= x0|m`, `t :< A @ w` or a type name.
        #[arg(long, num_args = 1.., required = true)]
        premises: Vec<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run a check suite and print its report.
    Check {
        suite: Suite,
        #[command(flatten)]
        sel: Select,
        /// Fail when the pullback stage of `fun-structure` fails.
        #[arg(long)]
        require_stage2: bool,
    },
    /// Write a dot digraph of a category or the total category of a fibration.
    Graph {
        file: PathBuf,
        /// Fibration or category to draw; defaults to the only one present.
        #[arg(long)]
        entity: Option<String>,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Subcommand)]
enum Build {
    /// Skeleton of finite sets `{0..n}`.
    Finset { n: usize },
    /// The arrow-category gcwf over finite sets with kernel pairs as extension.
    KernelPair {
        n: usize,
        /// Restrict types to monomorphisms.
        #[arg(long)]
        monos: bool,
    },
    /// The subobject gcwf over `{0..n}` with its function types.
    Subobject { n: usize },
    /// The Heyting-algebra doctrine with implication as function type.
    Doctrine,
    /// The comma fibration of a fibration in a model.
    Comma(Source),
    /// The lift of a gcwf along the subtyping monad.
    TGcwf(Source),
    /// The vertical opposite of a fibration.
    Vop(Source),
}

#[derive(Args)]
struct Source {
    #[arg(long)]
    model: PathBuf,
    /// Entity to use; defaults to the only one present.
    #[arg(long)]
    entity: Option<String>,
}

#[derive(Args)]
struct Select {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    gcwf: Option<String>,
    #[arg(long)]
    fun: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Rule {
    Sbsm,
    Trans,
    Wkn,
    Sbst,
    FunSub,
    Lam,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Gcwf,
    Faithful,
    MonadLaws,
    FunStructure,
}

/// A failure that maps to exit status 1.
#[derive(Debug)]
struct Failed(String);

impl std::fmt::Display for Failed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Failed {}

fn failed(e: subfib::Error) -> anyhow::Error {
    anyhow::Error::new(Failed(e.to_string()))
}

fn load(path: &Path) -> Result<Model> {
    load_model(path).map_err(anyhow::Error::new)
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("cannot write `{}`", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn build(what: &Build) -> Result<Model> {
    let mut m = Model::default();
    match what {
        Build::Finset { n } => {
            let c = finset_skeleton(*n).map_err(failed)?;
            m.add_category(&format!("finset{n}"), Arc::new(c));
        }
        Build::KernelPair { n, monos } => {
            let c = Arc::new(finset_skeleton(*n).map_err(failed)?);
            let class = if *monos { ArrowClass::Monos } else { ArrowClass::All };
            let kp = kernel_pair_gcwf_in(c, class).map_err(failed)?;
            m.add_gcwf("kp", &kp.gcwf);
        }
        Build::Subobject { n } => {
            let s = subobject_gcwf(*n).map_err(failed)?;
            let fs = subobject_fun_structure(&s).map_err(failed)?;
            m.add_gcwf("sub", &s.gcwf);
            m.add_fun_structure("sub.imp", "sub", &fs);
        }
        Build::Doctrine => {
            let (p, spec) = heyting_sample();
            let d = doctrine_gcwf(&p).map_err(failed)?;
            let fs = heyting_fun_structure(&d, &spec).map_err(failed)?;
            m.add_gcwf("doc", &d.gcwf);
            m.add_fun_structure("doc.imp", "doc", &fs);
        }
        Build::Comma(src) => {
            let model = load(&src.model)?;
            let p = fibration(&model, src.entity.as_deref())?;
            let t = t_fib(p).map_err(failed)?;
            m.add_fibration("comma", "comma.base", &t.fibration);
        }
        Build::TGcwf(src) => {
            let model = load(&src.model)?;
            let g = model.gcwf(src.entity.as_deref())?;
            let t = t_gcwf(g).map_err(failed)?;
            m.add_gcwf("t", &t.t_object);
        }
        Build::Vop(src) => {
            let model = load(&src.model)?;
            let p = fibration(&model, src.entity.as_deref())?;
            let v = vertical_opposite(p).map_err(failed)?;
            m.add_fibration("vop", "vop.base", &v.fibration);
        }
    }
    Ok(m)
}

/// A named fibration, the types of a named gcwf, or the only fibration of the model.
fn fibration<'a>(m: &'a Model, name: Option<&str>) -> Result<&'a subfib::fibration::Fibration> {
    if let Some(n) = name {
        if let Some(g) = m.gcwfs.get(n) {
            return Ok(&g.gcwf.u);
        }
    } else if m.gcwfs.len() == 1 {
        return Ok(&m.gcwfs.values().next().unwrap().gcwf.u);
    }
    Ok(m.fibration(name)?)
}

fn derive(rule: Rule, sel: &Select, premises: &[String]) -> Result<String> {
    let model = load(&sel.model)?;
    let ps = premises.iter().map(|p| premises::parse(p)).collect::<Result<Vec<Premise>>>()?;
    let want = match rule {
        Rule::Lam => 3,
        _ => 2,
    };
    if ps.len() != want {
        bail!("{} expects {want} premises, got {}", rule.name(), ps.len());
    }
    let fs = match rule {
        Rule::FunSub | Rule::Lam => Some(model.fun_structure(sel.fun.as_deref())?),
        _ => None,
    };
    let g: &Gcwf = match fs {
        Some(fs) => &fs.owner,
        None => model.gcwf(sel.gcwf.as_deref())?,
    };
    let js = ps.iter().map(|p| p.judgement(g)).collect::<Result<Vec<Judgement>>>()?;
    let out = match rule {
        Rule::Sbsm => rule_sbsm(g, &js[0], &js[1]),
        // premises in reading order: A'' <= A', then A' <= A
        Rule::Trans => rule_trans(g, &js[1], &js[0]),
        Rule::Wkn => rule_wkn(g, &js[0], ps[1].ty(g)?),
        Rule::Sbst => rule_sbst(g, &js[0], &js[1]),
        Rule::FunSub => derive_fun_subtyping(fs.unwrap(), &js[0], &js[1]),
        Rule::Lam => derive_lam_typing(fs.unwrap(), ps[0].ty(g)?, ps[1].ty(g)?, &js[2]),
    }
    .map_err(failed)?;
    let mut t = String::new();
    for j in &js {
        t.push_str("# premise\n");
        t.push_str(&g.render(j));
        t.push('\n');
    }
    t.push_str(&format!("# {}\n{}\n", rule.name(), g.render(&out)));
    Ok(t)
}

impl Rule {
    fn name(self) -> &'static str {
        match self {
            Rule::Sbsm => "sbsm",
            Rule::Trans => "trans",
            Rule::Wkn => "wkn",
            Rule::Sbst => "sbst",
            Rule::FunSub => "fun-sub",
            Rule::Lam => "lam",
        }
    }
}

fn check(suite: Suite, sel: &Select, require_stage2: bool) -> Result<i32> {
    let model = load(&sel.model)?;
    let (report, code) = match suite {
        Suite::Gcwf => {
            let r = check_gcwf(model.gcwf(sel.gcwf.as_deref())?);
            let c = r.exit_code();
            (r, c)
        }
        Suite::Faithful => {
            let r = check_sigma_faithful(model.gcwf(sel.gcwf.as_deref())?);
            let c = r.exit_code();
            (r, c)
        }
        Suite::MonadLaws => {
            let mut r = Report::new("monad-laws");
            if model.gcwfs.is_empty() {
                r.absorb("fib", check_monad_laws_fib(model.fibration(None)?));
            } else {
                let g = model.gcwf(sel.gcwf.as_deref())?;
                r.absorb("fib", check_monad_laws_fib(&g.u));
                r.absorb("gcwf", check_monad_laws_gcwf(g));
            }
            let c = r.exit_code();
            (r, c)
        }
        Suite::FunStructure => {
            let r = check_fun_structure(model.fun_structure(sel.fun.as_deref())?);
            let failed_in = |p: &str| r.failures().any(|e| e.id.starts_with(p));
            let c = i32::from(failed_in("stage1.") || require_stage2 && failed_in("stage2."));
            (r, c)
        }
    };
    println!("{report}");
    Ok(code)
}

fn graph(file: &Path, entity: Option<&str>, output: &Path) -> Result<()> {
    let model = load(file)?;
    let text = match entity {
        Some(n) if model.categories.contains_key(n) && !model.fibrations.contains_key(n) => {
            graph::dot(n, &model.categories[n], |_| false)
        }
        _ => {
            let p = if entity.is_none() && model.gcwfs.is_empty() && model.fibrations.is_empty() {
                let mut it = model.categories.iter();
                match (it.next(), it.next()) {
                    (Some((n, c)), None) => return write_out(Some(output), &graph::dot(n, c, |_| false)),
                    _ => bail!("model has no single category to draw; pass --entity"),
                }
            } else {
                fibration(&model, entity)?
            };
            graph::dot(entity.unwrap_or("total"), p.total(), |m| p.is_vertical(m))
        }
    };
    write_out(Some(output), &text)
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Validate { file } => {
            let m = load(&file)?;
            println!(
                "ok: {} categories, {} functors, {} transformations, {} fibrations, {} gcwfs, {} function-type structures",
                m.categories.len(),
                m.functors.len(),
                m.transformations.len(),
                m.fibrations.len(),
                m.gcwfs.len(),
                m.fun_structures.len()
            );
            Ok(0)
        }
        Command::Build { what, output } => {
            let m = build(&what)?;
            write_out(output.as_deref(), &m.to_json())?;
            Ok(0)
        }
        Command::Derive { rule, sel, premises, output } => {
            let t = derive(rule, &sel, &premises)?;
            write_out(output.as_deref(), &t)?;
            Ok(0)
        }
        Command::Check { suite, sel, require_stage2 } => check(suite, &sel, require_stage2),
        Command::Graph { file, entity, output } => {
            graph(&file, entity.as_deref(), &output)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            let code = if let Some(ModelError::Invalid { report, .. }) = e.downcast_ref::<ModelError>() {
                eprintln!("{report}");
                1
            } else if e.downcast_ref::<Failed>().is_some() {
                1
            } else {
                2
            };
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}
