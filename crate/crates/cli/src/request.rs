//! Command-line flags resolved into a typed request.

use brauer_core::brauer::BrauerClass;
use brauer_core::cdvf::CdvfModel;
use brauer_core::differentials::Omega2Form;
use brauer_core::milnor::SymbolSum;
use brauer_core::{FieldDescriptor, RatFunc};
use clap::{Parser, ValueEnum};
use serde::Serialize;

use crate::grammar::{self, ParseError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    /// Decide whether a sum of residue-field symbols vanishes in k2.
    K2Vanish,
    /// Decompose a 2-form along the differentials of generators.
    OmegaCert,
    /// Normal form of a class in br_1 of the p = 2 model.
    NormalForm,
    /// Radical splitting field of the model.
    SplitField,
    /// Bounds on the index of a class.
    IndexBounds,
    /// Interval for the Brauer p-dimension of the model.
    Brdim,
    /// Run the acceptance suite.
    Selftest,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::K2Vanish => "k2-vanish",
            CommandKind::OmegaCert => "omega-cert",
            CommandKind::NormalForm => "normal-form",
            CommandKind::SplitField => "split-field",
            CommandKind::IndexBounds => "index-bounds",
            CommandKind::Brdim => "brdim",
            CommandKind::Selftest => "selftest",
        }
    }

    /// Commands that work over the mixed-characteristic model.
    pub fn needs_model(self) -> bool {
        matches!(
            self,
            CommandKind::NormalForm
                | CommandKind::SplitField
                | CommandKind::IndexBounds
                | CommandKind::Brdim
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

/// Batch calculator for period-p Brauer classes over complete discretely
/// valued fields with residue field F_p(t1, ..., tn).
#[derive(Debug, Parser)]
#[command(name = "brauer", version)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: CommandKind,
    /// Input expression: a symbol sum, a 2-form or a class.
    pub input: Option<String>,
    /// Residue characteristic.
    #[arg(long, default_value_t = 2)]
    pub p: u32,
    /// Comma-separated variable names of the residue field.
    #[arg(long, default_value = "")]
    pub vars: String,
    /// Work modulo pi^precision (model commands only).
    #[arg(long)]
    pub precision: Option<u32>,
    /// Seed for sampled checks.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Emit a JSON report (the default).
    #[arg(long, conflicts_with = "text")]
    pub json: bool,
    /// Emit a plain-text report.
    #[arg(long)]
    pub text: bool,
    /// omega-cert: comma-separated generators a_1, ..., a_k.
    #[arg(long)]
    pub gens: Option<String>,
    /// omega-cert: scalars for the paired lower-bound check.
    #[arg(long)]
    pub lambdas: Option<String>,
    /// normal-form: first move the class into br_1 by base change.
    #[arg(long)]
    pub reduce: bool,
    /// normal-form: number of sampled 2-adic specialization checks.
    #[arg(long, default_value_t = 20)]
    pub points: usize,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Flags(#[from] clap::Error),
    #[error("{0}")]
    Usage(String),
    #[error("cannot parse {what}: {source}")]
    Parse {
        what: &'static str,
        #[source]
        source: ParseError,
    },
    #[error(transparent)]
    Core(#[from] brauer_core::Error),
}

#[derive(Clone, Debug)]
pub enum Payload {
    Symbols {
        field: FieldDescriptor,
        sum: SymbolSum,
    },
    Form {
        field: FieldDescriptor,
        form: Omega2Form,
        gens: Vec<RatFunc>,
        lambdas: Option<Vec<RatFunc>>,
    },
    Class(BrauerClass),
    Model(CdvfModel),
    Suite,
}

/// Echo of the request as written in reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RequestEcho {
    pub p: u32,
    pub vars: Vec<String>,
    pub precision: Option<u32>,
    pub seed: u64,
    pub input: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gens: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambdas: Option<String>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub reduce: bool,
}

#[derive(Clone, Debug)]
pub struct Request {
    pub command: CommandKind,
    pub format: Format,
    pub points: usize,
    pub echo: RequestEcho,
    pub payload: Payload,
}

fn parse<T>(what: &'static str, r: Result<T, ParseError>) -> Result<T, CliError> {
    r.map_err(|source| CliError::Parse { what, source })
}

fn require(input: &Option<String>, command: CommandKind) -> Result<&str, CliError> {
    input
        .as_deref()
        .ok_or_else(|| CliError::Usage(format!("{} needs an input expression", command.name())))
}

fn split_vars(vars: &str) -> Vec<String> {
    vars.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect()
}

/// Parses argv (including the program name) into a request.
pub fn parse_request<I, T>(args: I) -> Result<Request, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    resolve(Cli::try_parse_from(args)?)
}

pub fn resolve(cli: Cli) -> Result<Request, CliError> {
    let command = cli.command;
    let vars = split_vars(&cli.vars);
    let field = FieldDescriptor::new(cli.p, &vars)?;
    if command.needs_model() && cli.p != 2 {
        return Err(brauer_core::Error::UnsupportedPrime(cli.p).into());
    }
    if cli.precision.is_some() && !command.needs_model() {
        return Err(CliError::Usage(format!(
            "--precision does not apply to {}",
            command.name()
        )));
    }
    if (cli.gens.is_some() || cli.lambdas.is_some()) && command != CommandKind::OmegaCert {
        return Err(CliError::Usage(
            "--gens and --lambdas belong to omega-cert".into(),
        ));
    }
    if cli.reduce && command != CommandKind::NormalForm {
        return Err(CliError::Usage("--reduce belongs to normal-form".into()));
    }
    if matches!(command, CommandKind::Brdim | CommandKind::Selftest) && cli.input.is_some() {
        return Err(CliError::Usage(format!(
            "{} takes no input expression",
            command.name()
        )));
    }
    let model = if command.needs_model() {
        Some(match cli.precision {
            Some(l) => CdvfModel::with_precision(field.clone(), l)?,
            None => CdvfModel::new(field.clone())?,
        })
    } else {
        None
    };

    let payload = match command {
        CommandKind::K2Vanish => {
            let src = require(&cli.input, command)?;
            let sum = parse("symbol sum", grammar::parse_symbol_sum(src, &field))?;
            Payload::Symbols { field, sum }
        }
        CommandKind::OmegaCert => {
            let src = require(&cli.input, command)?;
            let form = parse("2-form", grammar::parse_omega2(src, &field))?;
            let gens_src = cli
                .gens
                .as_deref()
                .ok_or_else(|| CliError::Usage("omega-cert needs --gens".into()))?;
            let gens = parse("--gens", grammar::parse_list(gens_src, &field))?;
            if gens.is_empty() {
                return Err(CliError::Usage("--gens is empty".into()));
            }
            let lambdas = cli
                .lambdas
                .as_deref()
                .map(|s| parse("--lambdas", grammar::parse_list(s, &field)))
                .transpose()?;
            Payload::Form {
                field,
                form,
                gens,
                lambdas,
            }
        }
        CommandKind::NormalForm | CommandKind::IndexBounds => {
            let src = require(&cli.input, command)?;
            let model = model.expect("model commands build a model");
            Payload::Class(parse("class", grammar::parse_class(src, &model))?)
        }
        CommandKind::SplitField => {
            let model = model.expect("model commands build a model");
            match cli.input.as_deref() {
                Some(src) => Payload::Class(parse("class", grammar::parse_class(src, &model))?),
                None => Payload::Class(BrauerClass::new(model)),
            }
        }
        CommandKind::Brdim => Payload::Model(model.expect("model commands build a model")),
        CommandKind::Selftest => Payload::Suite,
    };

    Ok(Request {
        command,
        format: if cli.text { Format::Text } else { Format::Json },
        points: cli.points,
        echo: RequestEcho {
            p: cli.p,
            vars,
            precision: cli.precision,
            seed: cli.seed,
            input: cli.input,
            gens: cli.gens,
            lambdas: cli.lambdas,
            reduce: cli.reduce,
        },
        payload,
    })
}
