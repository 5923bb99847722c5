use anyhow::Context;
use reflector::lexicon::bundled_file;
use reflector::reasoner::{PromptDb, RawPromptDb};

use crate::{Format, LintArgs, Status};

pub fn run(args: &LintArgs) -> anyhow::Result<Status> {
    let (name, text) = match &args.path {
        Some(path) => (
            path.display().to_string(),
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?,
        ),
        None => (
            "bundled prompts".to_string(),
            bundled_file(PromptDb::FILE).context("bundled prompt database missing")?.to_string(),
        ),
    };
    let raw = RawPromptDb::from_json(&text).with_context(|| format!("parsing {name}"))?;
    let report = raw.lint();
    match args.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report)?),
        Format::Text => {
            for issue in &report.errors {
                println!("error: {issue}");
            }
            for issue in &report.warnings {
                println!("warning: {issue}");
            }
            println!(
                "{name}: {} records, {} error(s), {} warning(s)",
                raw.records.len(),
                report.errors.len(),
                report.warnings.len()
            );
        }
    }
    Ok(if report.is_ok() { Status::Ok } else { Status::Rejected })
}
