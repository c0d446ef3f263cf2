//! Command-line front end for the `linecones` library.
//!
//! Exit codes: 0 success, 1 verification failure (report includes the
//! witness), 2 usage error or violated hypothesis, 3 resource cap.

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use linecones::contact::ContactError;
use linecones::grobner::GrobnerError;
use linecones::polar::PolarError;
use linecones::sampler::SamplerError;

use args::Cli;
use commands::{Ctx, Verdict};

fn is_resource_cap(err: &anyhow::Error) -> bool {
    let cap = |g: &GrobnerError| matches!(g, GrobnerError::StepCap { .. });
    err.chain().any(|e| {
        if let Some(g) = e.downcast_ref::<GrobnerError>() {
            return cap(g);
        }
        if let Some(s) = e.downcast_ref::<SamplerError>() {
            return s.is_resource_cap();
        }
        if let Some(ContactError::Grobner(g)) = e.downcast_ref::<ContactError>() {
            return cap(g);
        }
        if let Some(p) = e.downcast_ref::<PolarError>() {
            return match p {
                PolarError::Grobner(g) | PolarError::Contact(ContactError::Grobner(g)) => cap(g),
                _ => false,
            };
        }
        false
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.global.format;
    let ctx = match Ctx::new(cli.global) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    match commands::run(&ctx, &cli.command) {
        Ok((report, verdict)) => {
            match output::render(&report, format) {
                Ok(s) => print!("{s}"),
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            }
            match verdict {
                Verdict::Ok => ExitCode::SUCCESS,
                Verdict::HardFail => ExitCode::from(1),
                Verdict::ResourceCap => ExitCode::from(3),
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            if is_resource_cap(&e) {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
