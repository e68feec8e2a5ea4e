use std::io::{BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use aeroqa::app::{cmd_build, render_response, serve, AppConfig, Engine, ProviderSpec, ReaderSpec, SystemMode, DEFAULT_PORT};
use aeroqa::fusion_eval::{evaluate, load_testset, render_table, DEFAULT_TAU};
use aeroqa::reader::{ReaderMode, RetrieverKind};
use aeroqa::retrieval::DEFAULT_K;

#[derive(Parser)]
#[command(name = "aeroqa", version, about = "Question answering over aviation accident reports")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the knowledge graph and passage files from a report directory.
    Build {
        #[arg(long)]
        reports: PathBuf,
        #[arg(long)]
        patterns: PathBuf,
        #[arg(long)]
        taxonomy: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Answer one question, or read questions from stdin when none is given.
    Ask {
        question: Option<String>,
        #[command(flatten)]
        opts: EngineOpts,
        #[arg(long)]
        json: bool,
        /// Print the generated SPARQL query before the answers.
        #[arg(long)]
        explain: bool,
        /// Answer with one module only.
        #[arg(long, value_parser = ["kg", "dl", "hybrid"], default_value = "hybrid")]
        system: String,
    },
    /// Score the KGQA, DLQA and hybrid systems on a test set.
    Eval {
        #[arg(long)]
        testset: PathBuf,
        #[command(flatten)]
        opts: EngineOpts,
        /// Report JSON; the text table goes next to it with a .txt extension.
        #[arg(long)]
        out: PathBuf,
    },
    /// Serve /health and /ask over HTTP.
    Serve {
        #[command(flatten)]
        opts: EngineOpts,
        #[arg(long, default_value_t = DEFAULT_PORT)]
        port: u16,
    },
}

#[derive(Args)]
struct EngineOpts {
    #[arg(long)]
    data: PathBuf,
    /// hashed, file:PATH, remote or remote:URL
    #[arg(long, default_value = "hashed")]
    provider: String,
    /// fallback, remote or remote:URL
    #[arg(long, default_value = "fallback")]
    reader: String,
    #[arg(long, default_value = "extractive")]
    reader_mode: String,
    #[arg(long, value_parser = ["bm25", "dense"], default_value = "bm25")]
    retriever: String,
    #[arg(long, default_value_t = DEFAULT_K)]
    k: usize,
    #[arg(long, default_value_t = DEFAULT_TAU)]
    tau: f64,
    #[arg(long)]
    theta_link: Option<f64>,
}

impl EngineOpts {
    fn config(&self) -> Result<AppConfig> {
        let mut c = AppConfig::new(&self.data);
        c.provider = self.provider.parse::<ProviderSpec>()?;
        c.reader = self.reader.parse::<ReaderSpec>()?;
        c.reader_mode = self.reader_mode.parse::<ReaderMode>()?;
        c.dlqa.retriever = self.retriever.parse::<RetrieverKind>()?;
        c.dlqa.k = self.k;
        c.tau = self.tau;
        if let Some(t) = self.theta_link {
            c.kgqa.theta_link = t;
        }
        c.validate()?;
        Ok(c)
    }
}

fn mode(name: &str) -> SystemMode {
    match name {
        "kg" => SystemMode::Kg,
        "dl" => SystemMode::Dl,
        _ => SystemMode::Hybrid,
    }
}

fn ask(engine: &Engine, question: &str, json: bool, explain: bool, system: SystemMode) -> Result<()> {
    if explain {
        let t = engine.kgqa().translate(question, engine.graph())?;
        match &t.query_text {
            Some(q) => eprintln!("{} question\n{q}", t.qtype),
            None => eprintln!("{} question, no valid triple", t.qtype),
        }
    }
    let resp = engine.respond(question, system)?;
    if json {
        println!("{}", serde_json::to_string(&resp)?);
    } else {
        print!("{}", render_response(&resp));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Build { reports, patterns, taxonomy, out } => {
            let outcome = cmd_build(&reports, &patterns, taxonomy.as_deref(), &out)?;
            for f in &outcome.failures {
                eprintln!("error: {}: {}", f.path.display(), f.error);
            }
            println!("{} reports, {} passages", outcome.reports, outcome.passages);
            print!("{}", outcome.stats.to_table());
            Ok(if outcome.failures.is_empty() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Ask { question, opts, json, explain, system } => {
            let engine = Engine::load(&opts.config()?)?;
            let system = mode(&system);
            match question {
                Some(q) => ask(&engine, &q, json, explain, system)?,
                None => {
                    let stdin = std::io::stdin();
                    loop {
                        eprint!("> ");
                        std::io::stderr().flush()?;
                        let mut line = String::new();
                        if stdin.lock().read_line(&mut line)? == 0 {
                            break;
                        }
                        let q = line.trim();
                        if q.is_empty() {
                            continue;
                        }
                        if let Err(e) = ask(&engine, q, json, explain, system) {
                            eprintln!("error: {e}");
                        }
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Eval { testset, opts, out } => {
            let config = opts.config()?;
            let tests = load_testset(&testset).with_context(|| format!("loading {}", testset.display()))?;
            let engine = Engine::load(&config)?;
            let reports = [SystemMode::Kg, SystemMode::Dl, SystemMode::Hybrid]
                .into_iter()
                .map(|m| evaluate(&engine.system(m), &tests, engine.provider(), config.tau))
                .collect::<aeroqa::Result<Vec<_>>>()?;
            let table = render_table(&reports);
            std::fs::write(&out, serde_json::to_string_pretty(&reports)?)?;
            std::fs::write(out.with_extension("txt"), &table)?;
            print!("{table}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Serve { opts, port } => {
            let engine = Arc::new(Engine::load(&opts.config()?)?);
            serve(engine, port)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
