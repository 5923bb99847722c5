//! Rule-based sentence segmentation.

use std::collections::HashSet;

use super::{Sentence, Span, TextError};

fn is_terminator(c: char) -> bool {
    matches!(c, '.' | '!' | '?' | '…')
}

fn is_closer(c: char) -> bool {
    matches!(c, '"' | '\'' | '”' | '’' | '»' | '“' | ')' | ']')
}

fn is_opener(c: char) -> bool {
    matches!(c, '"' | '\'' | '„' | '“' | '«' | '‘' | '(' | '[')
}

/// Splits `text` into sentences at `.`, `!`, `?` and `…` followed by
/// whitespace or end of input, except where the period closes an entry of
/// `abbreviations` (lowercase, with trailing period). A trailing fragment
/// without terminator is its own sentence.
pub fn segment_sentences(
    text: &str,
    abbreviations: &HashSet<String>,
) -> Result<Vec<Sentence>, TextError> {
    if text.trim().is_empty() {
        return Err(TextError::EmptyInput);
    }
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut spans = Vec::new();
    let mut start: Option<usize> = None;
    let mut i = 0;
    while i < chars.len() {
        let (byte, c) = chars[i];
        if start.is_none() {
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            start = Some(byte);
        }
        if !is_terminator(c) {
            i += 1;
            continue;
        }
        let mut j = i + 1;
        while j < chars.len() && (is_terminator(chars[j].1) || is_closer(chars[j].1)) {
            j += 1;
        }
        let end = chars.get(j).map_or(text.len(), |&(b, _)| b);
        let at_boundary = chars.get(j).is_none_or(|&(_, c)| c.is_whitespace());
        let single_period = c == '.' && !chars[i + 1..j].iter().any(|&(_, c)| is_terminator(c));
        let sentence_start = start.expect("start set above");
        if at_boundary
            && !(single_period && closes_abbreviation(text, sentence_start, end, abbreviations))
        {
            spans.push(Span::new(sentence_start, end));
            start = None;
        }
        i = j;
    }
    if let Some(s) = start {
        spans.push(Span::new(s, s + text[s..].trim_end().len()));
    }
    Ok(spans
        .into_iter()
        .enumerate()
        .map(|(index, span)| Sentence {
            index,
            span,
            tokens: Vec::new(),
        })
        .collect())
}

/// Whether the whitespace-delimited chunk ending at `end` is an abbreviation.
fn closes_abbreviation(
    text: &str,
    sentence_start: usize,
    end: usize,
    abbreviations: &HashSet<String>,
) -> bool {
    let before = &text[sentence_start..end];
    let chunk = before
        .rsplit(char::is_whitespace)
        .next()
        .unwrap_or(before)
        .trim_start_matches(is_opener)
        .trim_end_matches(is_closer);
    abbreviations.contains(&chunk.to_lowercase())
}
