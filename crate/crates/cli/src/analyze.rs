use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use anyhow::Context;
use reflector::gate::GateReason;
use reflector::reasoner::{FeedbackResponse, FEATURE_LABELS};
use reflector::{AnalyzeError, AnalyzeOptions, Engine};
use reflector_service::{load_engine, ServiceConfig};
use serde::Serialize;

use crate::{AnalyzeArgs, Format, Status};

#[derive(Debug, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
enum Report {
    Feedback { path: String, response: Box<FeedbackResponse> },
    RevisionRequest { path: String, reasons: Vec<GateReason> },
    Error { path: String, message: String },
}

impl Report {
    fn status(&self) -> Status {
        match self {
            Report::Feedback { .. } => Status::Ok,
            Report::RevisionRequest { .. } => Status::Rejected,
            Report::Error { .. } => Status::InputError,
        }
    }
}

fn describe_reason(reason: &GateReason) -> String {
    match reason {
        GateReason::TooShort { sentences, required } => {
            format!("too_short ({sentences} sentence(s), at least {required} needed)")
        }
        GateReason::ForbiddenSequence { matched } => format!("forbidden_sequence ({matched:?})"),
    }
}

fn render_text(report: &Report) -> String {
    let mut out = String::new();
    match report {
        Report::Feedback { path, response } => {
            let _ = writeln!(out, "== {path} ==");
            let _ = writeln!(
                out,
                "language: {} (input {}), reflective level: {}, seed: {}",
                response.language,
                response.input_language,
                response.reflective_level.ordinal(),
                response.plan.seed
            );
            let _ = writeln!(out, "\n{}\n", response.text);
            let _ = writeln!(out, "features (v{}):", response.vector_version);
            for (label, value) in FEATURE_LABELS.iter().zip(&response.feature_vector) {
                let _ = writeln!(out, "  {label:<22}{value:.3}");
            }
            let _ = writeln!(out, "sentences:");
            for a in &response.annotations {
                let span = a.span.map_or("-".to_string(), |s| format!("{}..{}", s.start, s.end));
                let tags: Vec<String> =
                    a.tags.iter().map(|t| format!("{:?}={}", t.model, t.label).to_lowercase()).collect();
                let _ = writeln!(out, "  [{}] {span} {}", a.index, tags.join(" "));
            }
        }
        Report::RevisionRequest { path, reasons } => {
            let _ = writeln!(out, "== {path} ==");
            let _ = writeln!(out, "revision requested:");
            for r in reasons {
                let _ = writeln!(out, "  {}", describe_reason(r));
            }
        }
        Report::Error { path, message } => {
            let _ = writeln!(out, "== {path} ==\nerror: {message}");
        }
    }
    out
}

fn analyze_file(engine: &Engine, path: &Path, options: &AnalyzeOptions) -> Report {
    let display = path.display().to_string();
    let text = match std::fs::read_to_string(path) {
        Ok(text) => text,
        Err(e) => return Report::Error { path: display, message: e.to_string() },
    };
    let start = Instant::now();
    let outcome = engine.analyze(&text, options);
    eprintln!("{display}: {:.1} ms", start.elapsed().as_secs_f64() * 1000.0);
    match outcome {
        Ok(response) => Report::Feedback { path: display, response: Box::new(response) },
        Err(AnalyzeError::GateRejected(gate)) => {
            Report::RevisionRequest { path: display, reasons: gate.reasons }
        }
        Err(e) => Report::Error { path: display, message: e.to_string() },
    }
}

fn output_path(dir: &Path, input: &Path, index: usize, format: Format) -> PathBuf {
    let stem = input.file_stem().map_or_else(|| format!("input{index}"), |s| s.to_string_lossy().into_owned());
    let ext = match format {
        Format::Text => "txt",
        Format::Json => "json",
    };
    dir.join(format!("{index:03}-{stem}.{ext}"))
}

pub fn run(config: &ServiceConfig, args: &AnalyzeArgs) -> anyhow::Result<Status> {
    let engine = load_engine(config)?;
    let options = AnalyzeOptions {
        seed: args.seed,
        clustering: args.clustering,
        feedback_language: args.lang.clone(),
    };

    // Files are analyzed in parallel; reports keep input order.
    let reports: Vec<Mutex<Option<Report>>> = args.files.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = config.worker_count().min(args.files.len()).max(1);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(path) = args.files.get(i) else { break };
                let report = analyze_file(&engine, path, &options);
                *reports[i].lock().expect("report slot") = Some(report);
            });
        }
    });

    if let Some(dir) = &args.out {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let mut status = Status::Ok;
    for (i, slot) in reports.into_iter().enumerate() {
        let report = slot.into_inner().expect("report slot").expect("every file analyzed");
        status = status.max(report.status());
        let rendered = match args.format {
            Format::Text => render_text(&report),
            Format::Json => serde_json::to_string_pretty(&report)? + "\n",
        };
        match &args.out {
            Some(dir) => {
                let path = output_path(dir, &args.files[i], i, args.format);
                std::fs::write(&path, rendered).with_context(|| format!("writing {}", path.display()))?;
            }
            None => print!("{rendered}"),
        }
    }
    Ok(status)
}
