//! Append-only reflection history.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use reflector::classifiers::ReflectiveLevel;
use reflector::reasoner::FeedbackResponse;
use reflector::LanguageCode;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoredReflection {
    pub id: u64,
    pub author_id: String,
    pub text: String,
    pub response: FeedbackResponse,
    /// Milliseconds since the Unix epoch.
    pub submitted_at: u64,
    pub stored_at: u64,
    pub pipeline_version: String,
}

/// What a caller supplies; the store assigns the id and `stored_at`.
#[derive(Debug, Clone, PartialEq)]
pub struct NewReflection {
    pub author_id: String,
    pub text: String,
    pub response: FeedbackResponse,
    pub submitted_at: u64,
    pub pipeline_version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReflectionSummary {
    pub id: u64,
    pub submitted_at: u64,
    pub language: LanguageCode,
    pub reflective_level: ReflectiveLevel,
    pub feedback: String,
    pub feature_vector: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
}

impl ReflectionSummary {
    fn of(r: &StoredReflection, include_text: bool) -> Self {
        ReflectionSummary {
            id: r.id,
            submitted_at: r.submitted_at,
            language: r.response.language.clone(),
            reflective_level: r.response.reflective_level,
            feedback: r.response.text.clone(),
            feature_vector: r.response.feature_vector.clone(),
            text: include_text.then(|| r.text.clone()),
        }
    }
}

pub const DEFAULT_PAGE_SIZE: usize = 20;
pub const MAX_PAGE_SIZE: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Page {
    pub offset: usize,
    pub limit: usize,
    pub include_text: bool,
}

impl Default for Page {
    fn default() -> Self {
        Page { offset: 0, limit: DEFAULT_PAGE_SIZE, include_text: false }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}:{line}: corrupt record: {message}", path.display())]
    Corrupt { path: PathBuf, line: usize, message: String },
    #[error("store lock poisoned")]
    Poisoned,
    #[error("{0}")]
    Unavailable(String),
}

/// Persistence port for analyzed reflections.
pub trait ReflectionStore: Send + Sync {
    fn append(&self, new: NewReflection) -> Result<StoredReflection, StoreError>;
    /// Newest first.
    fn history(&self, author_id: &str, page: Page) -> Result<Vec<ReflectionSummary>, StoreError>;
    fn get(&self, id: u64) -> Result<Option<StoredReflection>, StoreError>;
}

pub fn now_millis() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map_or(0, |d| d.as_millis() as u64)
}

struct Index {
    records: Vec<StoredReflection>,
    by_author: HashMap<String, Vec<usize>>,
    next_id: u64,
}

impl Index {
    fn push(&mut self, record: StoredReflection) {
        self.next_id = self.next_id.max(record.id + 1);
        self.by_author
            .entry(record.author_id.clone())
            .or_default()
            .push(self.records.len());
        self.records.push(record);
    }
}

struct Inner {
    file: File,
    index: Index,
}

/// One JSON record per line. Writes go through a single mutex-guarded
/// writer; the whole file is replayed into memory on open.
pub struct JsonlStore {
    path: PathBuf,
    inner: Mutex<Inner>,
}

impl JsonlStore {
    pub fn open(path: impl AsRef<Path>) -> Result<Self, StoreError> {
        let path = path.as_ref().to_path_buf();
        let io = |source| StoreError::Io { path: path.clone(), source };
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            std::fs::create_dir_all(parent).map_err(io)?;
        }
        let mut index = Index { records: Vec::new(), by_author: HashMap::new(), next_id: 1 };
        if path.exists() {
            let reader = BufReader::new(File::open(&path).map_err(io)?);
            for (i, line) in reader.lines().enumerate() {
                let line = line.map_err(io)?;
                if line.trim().is_empty() {
                    continue;
                }
                let record: StoredReflection =
                    serde_json::from_str(&line).map_err(|e| StoreError::Corrupt {
                        path: path.clone(),
                        line: i + 1,
                        message: e.to_string(),
                    })?;
                index.push(record);
            }
        }
        let file = OpenOptions::new().create(true).append(true).open(&path).map_err(io)?;
        Ok(JsonlStore { path, inner: Mutex::new(Inner { file, index }) })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.inner.lock().map_or(0, |i| i.index.records.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl ReflectionStore for JsonlStore {
    fn append(&self, new: NewReflection) -> Result<StoredReflection, StoreError> {
        let mut inner = self.inner.lock().map_err(|_| StoreError::Poisoned)?;
        let record = StoredReflection {
            id: inner.index.next_id,
            author_id: new.author_id,
            text: new.text,
            response: new.response,
            submitted_at: new.submitted_at,
            stored_at: now_millis(),
            pipeline_version: new.pipeline_version,
        };
        let mut line = serde_json::to_string(&record)
            .map_err(|e| StoreError::Unavailable(e.to_string()))?;
        line.push('\n');
        let io = |source| StoreError::Io { path: self.path.clone(), source };
        inner.file.write_all(line.as_bytes()).map_err(io)?;
        inner.file.flush().map_err(io)?;
        inner.index.push(record.clone());
        Ok(record)
    }

    fn history(&self, author_id: &str, page: Page) -> Result<Vec<ReflectionSummary>, StoreError> {
        let inner = self.inner.lock().map_err(|_| StoreError::Poisoned)?;
        let Some(positions) = inner.index.by_author.get(author_id) else {
            return Ok(Vec::new());
        };
        Ok(positions
            .iter()
            .rev()
            .skip(page.offset)
            .take(page.limit.min(MAX_PAGE_SIZE))
            .map(|i| ReflectionSummary::of(&inner.index.records[*i], page.include_text))
            .collect())
    }

    fn get(&self, id: u64) -> Result<Option<StoredReflection>, StoreError> {
        let inner = self.inner.lock().map_err(|_| StoreError::Poisoned)?;
        Ok(inner.index.records.iter().find(|r| r.id == id).cloned())
    }
}
