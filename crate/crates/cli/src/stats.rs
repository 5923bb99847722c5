use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::Context;
use reflector::classifiers::GibbsPhase;
use reflector::LanguageCode;
use reflector_service::{load_engine, ServiceConfig};
use serde::Serialize;

use crate::{Format, StatsArgs, Status};

#[derive(Debug, Default, Serialize)]
struct CorpusStats {
    files: usize,
    sentences: usize,
    words: usize,
    mean_sentences_per_file: f64,
    gate_rejections: usize,
    languages: BTreeMap<String, usize>,
    /// Sentences per Gibbs phase by argmax, over files in native languages.
    gibbs_histogram: BTreeMap<GibbsPhase, usize>,
    reflective_levels: BTreeMap<u8, usize>,
}

fn collect_txt(dir: &Path, out: &mut Vec<PathBuf>) -> std::io::Result<()> {
    for entry in std::fs::read_dir(dir)? {
        let path = entry?.path();
        if path.is_dir() {
            collect_txt(&path, out)?;
        } else if path.extension().is_some_and(|e| e == "txt") {
            out.push(path);
        }
    }
    Ok(())
}

pub fn run(config: &ServiceConfig, args: &StatsArgs) -> anyhow::Result<Status> {
    let mut files = Vec::new();
    collect_txt(&args.dir, &mut files).with_context(|| format!("reading {}", args.dir.display()))?;
    files.sort();
    let engine = load_engine(config)?;
    let mut stats = CorpusStats {
        gibbs_histogram: GibbsPhase::ALL.iter().map(|p| (*p, 0)).collect(),
        ..CorpusStats::default()
    };
    for path in &files {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        stats.files += 1;
        stats.words += text.split_whitespace().count();
        let sentences = engine.processor().segment_sentences(&text).map_or(0, |s| s.len());
        stats.sentences += sentences;
        if !engine.validate(&text).accepted() {
            stats.gate_rejections += 1;
        }
        let lang = engine.detect_language(&text).unwrap_or(LanguageCode::Other("und".into()));
        *stats.languages.entry(lang.to_string()).or_insert(0) += 1;
        if lang.is_native() && sentences > 0 {
            let doc = engine
                .analyze_document(&text, &lang, engine.config().clustering)
                .with_context(|| format!("analyzing {}", path.display()))?;
            for a in &doc.analyses {
                *stats.gibbs_histogram.entry(a.gibbs.argmax()).or_insert(0) += 1;
            }
            if let Some(level) = doc.level {
                *stats.reflective_levels.entry(level.ordinal()).or_insert(0) += 1;
            }
        }
    }
    if stats.files > 0 {
        stats.mean_sentences_per_file = stats.sentences as f64 / stats.files as f64;
    }
    match args.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&stats)?),
        Format::Text => {
            println!("files: {}  sentences: {}  words: {}", stats.files, stats.sentences, stats.words);
            println!("mean sentences per file: {:.2}", stats.mean_sentences_per_file);
            println!("gate rejections: {}", stats.gate_rejections);
            println!("languages:");
            for (lang, n) in &stats.languages {
                println!("  {lang:<6}{n}");
            }
            println!("gibbs phases (argmax):");
            for (phase, n) in &stats.gibbs_histogram {
                println!("  {:<14}{n}", phase.to_string());
            }
            println!("reflective levels:");
            for (level, n) in &stats.reflective_levels {
                println!("  {level:<6}{n}");
            }
        }
    }
    Ok(Status::Ok)
}
