use std::collections::BTreeMap;

use anyhow::Context;
use reflector::metrics::{evaluate_run, EvalConfig, EvalReport};
use serde::Serialize;

use crate::{EvalArgs, Format, Status};

#[derive(Serialize)]
struct Output<'a> {
    #[serde(flatten)]
    report: &'a EvalReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    delta: Option<BTreeMap<String, f64>>,
}

pub fn run(args: &EvalArgs) -> anyhow::Result<Status> {
    let mut config = EvalConfig::default();
    if let Some(size) = args.scheme_size {
        config.emotion_scheme_size = size;
    }
    let report = evaluate_run(&args.gold, &args.predictions, args.task, &config)?;
    let delta = match &args.baseline {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let baseline: EvalReport =
                serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
            Some(report.delta(&baseline))
        }
        None => None,
    };
    match args.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&Output { report: &report, delta: delta.as_ref().cloned() })?),
        Format::Text => {
            println!("task: {}  scheme: {}  samples: {}", report.task, report.label_scheme, report.sample_count);
            println!("{:<20} {:>8}{}", "metric", "value", if delta.is_some() { "    delta" } else { "" });
            for (name, value) in &report.metrics {
                match delta.as_ref().and_then(|d| d.get(name)) {
                    Some(d) => println!("{name:<20} {value:>8.4} {d:>+8.4}"),
                    None => println!("{name:<20} {value:>8.4}"),
                }
            }
        }
    }
    Ok(Status::Ok)
}
