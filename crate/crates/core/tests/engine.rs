use reflector::gate::{GateReason, GateVerdict};
use reflector::reasoner::{FEATURE_VECTOR_LEN, Trigger};
use reflector::textproc::untranslated_marker;
use reflector::{AnalyzeError, AnalyzeOptions, Engine, LanguageCode};

const GERMAN: &str = "Letzte Woche habe ich zum ersten Mal eine Unterrichtsstunde in der fünften Klasse gehalten. \
Ich war sehr nervös, aber auch neugierig, wie die Schüler reagieren würden. \
Die Gruppenarbeit hat gut funktioniert, weil die Aufgaben klar formuliert waren. \
Allerdings habe ich die Zeit für die Sicherungsphase unterschätzt, deshalb blieb die Besprechung oberflächlich. \
Beim nächsten Mal werde ich einen genaueren Zeitplan erstellen.";

#[test]
fn german_essay_gets_feedback_and_vector() {
    let engine = Engine::bundled().unwrap();
    let response = engine.analyze(GERMAN, &AnalyzeOptions::default()).unwrap();
    assert_eq!(response.language, LanguageCode::De);
    assert_eq!(response.feature_vector.len(), FEATURE_VECTOR_LEN);
    assert!(response.feature_vector.iter().all(|v| (0.0..=1.0).contains(v)));
    assert!(!response.text.is_empty());
    assert_eq!(response.annotations.len(), 5);
    assert!(response.annotations.iter().all(|a| a.span.is_some()));
    let gibbs = response
        .plan
        .triggers()
        .filter(|t| matches!(t, Trigger::GibbsMissing(_)))
        .count();
    assert_eq!(gibbs, 3);
    let counters = engine.counters();
    assert_eq!((counters.analyses_started, counters.analyses_completed), (1, 1));
}

#[test]
fn same_seed_same_text() {
    let engine = Engine::bundled().unwrap();
    let options = AnalyzeOptions { seed: Some(7), ..AnalyzeOptions::default() };
    let a = engine.analyze(GERMAN, &options).unwrap();
    let b = engine.analyze(GERMAN, &options).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn rejected_text_does_no_analysis_work() {
    let engine = Engine::bundled().unwrap();
    let err = engine.analyze("Nur ein Satz.", &AnalyzeOptions::default()).unwrap_err();
    let AnalyzeError::GateRejected(gate) = err else { panic!("{err:?}") };
    assert_eq!(gate.verdict, GateVerdict::RevisionRequest);
    assert!(matches!(gate.reasons[0], GateReason::TooShort { sentences: 1, .. }));
    let counters = engine.counters();
    assert_eq!((counters.gate_rejections, counters.analyses_started), (1, 0));
}

#[test]
fn french_input_is_routed_through_german() {
    let engine = Engine::bundled().unwrap();
    let text = "La semaine dernière, j'ai donné mon premier cours devant une classe de cinquième. \
J'étais très nerveux, mais aussi curieux de voir comment les élèves allaient réagir. \
Le travail en groupe a bien fonctionné parce que les consignes étaient claires. \
La prochaine fois, je vais préparer un meilleur plan pour la fin du cours.";
    let response = engine.analyze(text, &AnalyzeOptions::default()).unwrap();
    assert_eq!(response.language, LanguageCode::Other("fr".into()));
    assert!(response.translated_input);
    assert!(response
        .text
        .starts_with(&untranslated_marker(&LanguageCode::De, &LanguageCode::Other("fr".into()))));
    assert!(response.annotations.iter().all(|a| a.span.is_none()));
}

#[test]
fn requested_feedback_language_wins() {
    let engine = Engine::bundled().unwrap();
    let options = AnalyzeOptions {
        feedback_language: Some(LanguageCode::Es),
        ..AnalyzeOptions::default()
    };
    let response = engine.analyze(GERMAN, &options).unwrap();
    assert_eq!(response.language, LanguageCode::Es);
    assert!(response.text.starts_with("¡Gracias"));
}
