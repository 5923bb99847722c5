use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{ClassifierError, ClusteringId, TopicAssigner};
use crate::lang::LanguageCode;
use crate::lexicon::{rows, CueLexicon, DataSource, LexiconError};
use crate::textproc::Sentence;

/// A sentence's topic within one clustering.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicAssignment {
    pub clustering_id: ClusteringId,
    /// Index into the catalog; `None` when no keyword matched.
    pub topic_id: Option<usize>,
    pub topic: Option<String>,
    pub matched_terms: Vec<String>,
}

impl TopicAssignment {
    pub fn none(clustering_id: ClusteringId) -> Self {
        TopicAssignment {
            clustering_id,
            topic_id: None,
            topic: None,
            matched_terms: Vec::new(),
        }
    }
}

/// Named topics with weighted keywords. Topic ids follow the order in which
/// topic names first appear in the keyword file.
#[derive(Debug, Clone)]
pub struct TopicCatalog {
    pub clustering: ClusteringId,
    names: Vec<String>,
    keywords: CueLexicon<String>,
}

impl TopicCatalog {
    pub fn parse(clustering: ClusteringId, file: &str, text: &str) -> Result<Self, LexiconError> {
        let mut names: Vec<String> = Vec::new();
        for (_, cols) in rows(text) {
            if let Some(name) = cols.get(1) {
                if !names.iter().any(|n| n == name) {
                    names.push(name.to_string());
                }
            }
        }
        Ok(TopicCatalog {
            clustering,
            names,
            keywords: CueLexicon::parse(file, text)?,
        })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn id_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Highest weighted keyword overlap; ties go to the lower topic id.
    pub fn assign(&self, sentence: &Sentence) -> TopicAssignment {
        let mut scores: HashMap<usize, f64> = HashMap::new();
        let mut matched: HashMap<usize, Vec<String>> = HashMap::new();
        for token in sentence.words() {
            for (name, weight) in self.keywords.lookup(&token.lemma) {
                let id = self.id_of(name).expect("names collected from the same file");
                *scores.entry(id).or_insert(0.0) += weight;
                let terms = matched.entry(id).or_default();
                if !terms.contains(&token.lemma) {
                    terms.push(token.lemma.clone());
                }
            }
        }
        let best = scores
            .iter()
            .filter(|(_, s)| **s > 0.0)
            .max_by(|(ia, sa), (ib, sb)| sa.total_cmp(sb).then(ib.cmp(ia)))
            .map(|(id, _)| *id);
        match best {
            Some(id) => TopicAssignment {
                clustering_id: self.clustering,
                topic_id: Some(id),
                topic: Some(self.names[id].clone()),
                matched_terms: matched.remove(&id).unwrap_or_default(),
            },
            None => TopicAssignment::none(self.clustering),
        }
    }
}

/// Keyword-overlap topic assignment against bundled catalogs. Keywords are
/// shared across languages.
#[derive(Debug, Clone)]
pub struct KeywordTopicAssigner {
    catalogs: Vec<TopicCatalog>,
}

impl KeywordTopicAssigner {
    pub fn load(src: &DataSource) -> Result<Self, LexiconError> {
        let catalogs = ClusteringId::ALL
            .iter()
            .map(|id| {
                let name = format!("topics.{id}.tsv");
                TopicCatalog::parse(*id, &name, &src.read(&name)?)
            })
            .collect::<Result<_, _>>()?;
        Ok(KeywordTopicAssigner { catalogs })
    }

    pub fn from_catalogs(catalogs: Vec<TopicCatalog>) -> Self {
        KeywordTopicAssigner { catalogs }
    }

    pub fn catalog(&self, clustering: ClusteringId) -> Option<&TopicCatalog> {
        self.catalogs.iter().find(|c| c.clustering == clustering)
    }
}

impl TopicAssigner for KeywordTopicAssigner {
    fn assign_topic(
        &self,
        sentence: &Sentence,
        _lang: &LanguageCode,
        clustering: ClusteringId,
    ) -> Result<TopicAssignment, ClassifierError> {
        if sentence.tokens.is_empty() {
            return Err(ClassifierError::EmptySentence);
        }
        let catalog = self
            .catalog(clustering)
            .ok_or_else(|| ClassifierError::UnknownClustering(clustering.to_string()))?;
        Ok(catalog.assign(sentence))
    }
}
