//! Translation port.

use crate::lang::LanguageCode;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TranslateError {
    #[error("nothing to translate")]
    EmptyInput,
    #[error("translator unavailable: {0}")]
    Unavailable(String),
}

/// A machine-translation backend.
pub trait TranslatorPort: Send + Sync {
    fn name(&self) -> &str;

    fn translate(
        &self,
        text: &str,
        from: &LanguageCode,
        to: &LanguageCode,
    ) -> Result<String, TranslateError>;
}

/// Prefix the stub backend puts in front of text it was asked to translate.
pub fn untranslated_marker(from: &LanguageCode, to: &LanguageCode) -> String {
    format!("⟦untranslated:{from}→{to}⟧")
}

/// Offline backend: returns the input behind a routing marker.
#[derive(Debug, Clone, Copy, Default)]
pub struct StubTranslator;

impl TranslatorPort for StubTranslator {
    fn name(&self) -> &str {
        "stub"
    }

    fn translate(
        &self,
        text: &str,
        from: &LanguageCode,
        to: &LanguageCode,
    ) -> Result<String, TranslateError> {
        Ok(format!("{}{text}", untranslated_marker(from, to)))
    }
}

/// Translates through `port`; identity when both languages agree.
pub fn translate(
    port: &dyn TranslatorPort,
    text: &str,
    from: &LanguageCode,
    to: &LanguageCode,
) -> Result<String, TranslateError> {
    if text.trim().is_empty() {
        return Err(TranslateError::EmptyInput);
    }
    if from == to {
        return Ok(text.to_string());
    }
    port.translate(text, from, to)
}

/// Like [`translate`], but falls back to the stub when the backend is
/// unreachable. The flag reports whether the fallback was used.
pub fn translate_or_stub(
    port: &dyn TranslatorPort,
    text: &str,
    from: &LanguageCode,
    to: &LanguageCode,
) -> Result<(String, bool), TranslateError> {
    match translate(port, text, from, to) {
        Ok(out) => Ok((out, false)),
        Err(TranslateError::Unavailable(_)) => {
            translate(&StubTranslator, text, from, to).map(|out| (out, true))
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Down;

    impl TranslatorPort for Down {
        fn name(&self) -> &str {
            "down"
        }

        fn translate(&self, _: &str, _: &LanguageCode, _: &LanguageCode) -> Result<String, TranslateError> {
            Err(TranslateError::Unavailable("connection refused".into()))
        }
    }

    #[test]
    fn identity_when_languages_match() {
        let out = translate(&StubTranslator, "Guten Tag", &LanguageCode::De, &LanguageCode::De);
        assert_eq!(out.unwrap(), "Guten Tag");
    }

    #[test]
    fn stub_prefixes_marker() {
        let fr = LanguageCode::Other("fr".into());
        let out = translate(&StubTranslator, "Guten Tag", &LanguageCode::De, &fr).unwrap();
        assert_eq!(out, "⟦untranslated:de→fr⟧Guten Tag");
    }

    #[test]
    fn empty_text_is_an_error() {
        let out = translate(&StubTranslator, "", &LanguageCode::De, &LanguageCode::En);
        assert_eq!(out, Err(TranslateError::EmptyInput));
    }

    #[test]
    fn unavailable_backend_falls_back_to_stub() {
        let (out, fell_back) =
            translate_or_stub(&Down, "Hallo", &LanguageCode::De, &LanguageCode::En).unwrap();
        assert!(fell_back);
        assert_eq!(out, "⟦untranslated:de→en⟧Hallo");
    }
}
