use std::ffi::OsString;
use std::io::Write;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use effects_core::interp::DEFAULT_MAX_DERIVATIONS;
use effects_core::laws::render_table;
use effects_core::model::ModelFile;
use effects_core::syntax::{print_tree, tokenize};
use effects_core::value::render;
use effects_core::{enumerate_trees, CombineConfig};

use crate::service::{
    to_wire, CombineRequest, ConfigChoice, Dedup, InterpretRequest, LawsQuery, Service,
};

#[derive(Debug, Parser)]
#[command(
    name = "effects",
    version,
    about = "Type-driven composition with effects: combine types, interpret trees, check laws"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List every mode combining two types.
    Combine(CombineArgs),
    /// Derive (and optionally evaluate) every interpretation of a tree.
    Interpret(InterpretArgs),
    /// Check the functor, applicative, monad and adjunction laws.
    Laws(LawsArgs),
    /// Print every binary bracketing of a token string.
    Enumerate(EnumerateArgs),
    /// Run the JSON service.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
struct ConfigArgs {
    /// Starting rule set.
    #[arg(long, env = "EFFECTS_PRESET", default_value = "default",
          value_parser = ["basic", "ch2", "ch3", "ch4", "full", "default"])]
    preset: String,
    /// Disable a rule (FA, BA, PM, FC, RR, MAP, AP, UNIT, JN, CU, EJECT, DN).
    #[arg(long, value_name = "RULE", env = "EFFECTS_OFF", value_delimiter = ',')]
    off: Vec<String>,
    /// Enable a rule.
    #[arg(long, value_name = "RULE", env = "EFFECTS_ON", value_delimiter = ',')]
    on: Vec<String>,
    /// Largest result type, counted in type constructors.
    #[arg(long, env = "EFFECTS_MAX_TYPE_SIZE")]
    max_type_size: Option<usize>,
    /// Repeat the unary phase on join and lowering output until it is stable.
    #[arg(long, env = "EFFECTS_CHAIN_UNARY")]
    chain_unary: bool,
}

impl ConfigArgs {
    fn config(&self) -> anyhow::Result<CombineConfig> {
        let mut cfg = CombineConfig::preset(&self.preset)?;
        for r in &self.on {
            cfg.set_rule(r, true)?;
        }
        for r in &self.off {
            cfg.set_rule(r, false)?;
        }
        if let Some(n) = self.max_type_size {
            cfg.max_result_type_size = n;
        }
        cfg.chain_unary |= self.chain_unary;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
struct CombineArgs {
    left: String,
    right: String,
    #[command(flatten)]
    config: ConfigArgs,
    /// Print the service's JSON instead of text.
    #[arg(long, env = "EFFECTS_JSON")]
    json: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DedupArg {
    Semantic,
}

#[derive(Debug, Args)]
struct InterpretArgs {
    /// Bracketed tree, e.g. "[jupiter [followed [the moon]]]".
    tree: String,
    #[arg(long, env = "EFFECTS_FRAGMENT")]
    fragment: String,
    /// Evaluate each derivation.
    #[arg(long)]
    denote: bool,
    /// Model file replacing the fragment's own model.
    #[arg(long, env = "EFFECTS_MODEL")]
    model: Option<PathBuf>,
    #[arg(long, value_enum)]
    dedup: Option<DedupArg>,
    /// Keep going past the derivation cap and mark the output truncated.
    #[arg(long, env = "EFFECTS_TRUNCATE")]
    truncate: bool,
    /// Derivations kept per tree node.
    #[arg(long, env = "EFFECTS_MAX_DERIVATIONS", default_value_t = DEFAULT_MAX_DERIVATIONS)]
    max_derivations: usize,
    #[command(flatten)]
    config: ConfigArgs,
    #[arg(long, env = "EFFECTS_JSON")]
    json: bool,
}

#[derive(Debug, Args)]
struct LawsArgs {
    /// Check a single effect, e.g. "S" or "W[e]". Default: the whole suite.
    #[arg(long, env = "EFFECTS_EFFECT")]
    effect: Option<String>,
    /// Entities in the model the laws range over.
    #[arg(long, env = "EFFECTS_ENTITIES", default_value_t = 2)]
    entities: usize,
    #[arg(long, env = "EFFECTS_JSON")]
    json: bool,
}

#[derive(Debug, Args)]
struct EnumerateArgs {
    /// Whitespace-separated tokens.
    tokens: String,
    #[arg(long, env = "EFFECTS_MAX_TOKENS", default_value_t = 10)]
    max_tokens: usize,
    #[arg(long, env = "EFFECTS_JSON")]
    json: bool,
}

#[derive(Debug, Args)]
struct ServeArgs {
    #[arg(long, env = "EFFECTS_PORT", default_value_t = 8080)]
    port: u16,
    #[arg(long, env = "EFFECTS_HOST", default_value = "127.0.0.1")]
    host: std::net::IpAddr,
    /// Default cap for requests that do not set one.
    #[arg(long, env = "EFFECTS_MAX_DERIVATIONS", default_value_t = DEFAULT_MAX_DERIVATIONS)]
    max_derivations: usize,
}

/// Runs one command line. Returns the process exit status.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                1
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            1
        }
    }
}

fn execute(cli: Cli, out: &mut dyn Write) -> anyhow::Result<i32> {
    match cli.command {
        Command::Combine(a) => {
            let req = CombineRequest {
                left: a.left,
                right: a.right,
                config: Some(ConfigChoice::Flags(a.config.config()?)),
            };
            let resp = Service::default().combine(&req)?;
            if a.json {
                writeln!(out, "{}", to_wire(&resp))?;
            } else {
                for r in &resp.results {
                    writeln!(out, "{}  ⊢  {}", r.mode, r.result)?;
                }
            }
            Ok(0)
        }
        Command::Interpret(a) => {
            let model = match &a.model {
                Some(path) => {
                    let text = std::fs::read_to_string(path)
                        .with_context(|| format!("reading {}", path.display()))?;
                    let file: ModelFile = serde_json::from_str(&text)
                        .with_context(|| format!("parsing {}", path.display()))?;
                    Some(file)
                }
                None => None,
            };
            let req = InterpretRequest {
                tree: a.tree,
                fragment: a.fragment,
                config: Some(ConfigChoice::Flags(a.config.config()?)),
                denote: a.denote,
                model,
                dedup: a.dedup.map(|DedupArg::Semantic| Dedup::Semantic),
                truncate: a.truncate,
                max_derivations: Some(a.max_derivations),
            };
            let interp = Service::default().interpretation(&req)?;
            if a.json {
                writeln!(out, "{}", to_wire(&interp.response()))?;
                return Ok(0);
            }
            for (sem, val) in &interp.items {
                writeln!(out, "{sem}  ⊢  {}", sem.ty())?;
                match (a.denote, val) {
                    (true, Some(Ok(v))) => writeln!(out, "    = {}", render(v, &interp.model))?,
                    (true, Some(Err(e))) => writeln!(out, "    ! {e}")?,
                    _ => {}
                }
            }
            if interp.truncated {
                writeln!(
                    out,
                    "(truncated: at most {} derivations per node)",
                    a.max_derivations
                )?;
            }
            Ok(0)
        }
        Command::Laws(a) => {
            let q = LawsQuery {
                preset: None,
                effect: a.effect,
                entities: Some(a.entities),
            };
            let reports = Service::default().laws(&q)?;
            if a.json {
                writeln!(out, "{}", to_wire(&reports))?;
            } else {
                write!(out, "{}", render_table(&reports))?;
            }
            Ok(if reports.iter().all(|r| r.passed) {
                0
            } else {
                1
            })
        }
        Command::Enumerate(a) => {
            let tokens = tokenize(&a.tokens);
            let trees: Vec<String> = enumerate_trees(&tokens, a.max_tokens)?
                .iter()
                .map(print_tree)
                .collect();
            if a.json {
                writeln!(out, "{}", to_wire(&trees))?;
            } else {
                for t in &trees {
                    writeln!(out, "{t}")?;
                }
            }
            Ok(0)
        }
        Command::Serve(a) => {
            if a.max_derivations == 0 {
                bail!("--max-derivations must be positive");
            }
            let service = Arc::new(Service::new(a.max_derivations)?);
            let addr = SocketAddr::new(a.host, a.port);
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(async move {
                let listener = tokio::net::TcpListener::bind(addr)
                    .await
                    .with_context(|| format!("binding {addr}"))?;
                eprintln!("listening on http://{}", listener.local_addr()?);
                crate::api::serve(listener, service).await?;
                Ok::<_, anyhow::Error>(())
            })?;
            Ok(0)
        }
    }
}
