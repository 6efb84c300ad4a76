use std::sync::Mutex;

use founderseg_core::ingest::FounderRecord;
use founderseg_core::llm_gateway::{FnGateway, GatewayError, MockBackend};
use founderseg_core::segmentation::{
    ChainSettings, PromptKind, PromptSet, Segmenter, Stage, StageErrorKind, BASE_LEVELS,
};

const AIRTABLE_SUMMARY: &str = include_str!("fixtures/airtable_summary.txt");

fn record(id: &str) -> FounderRecord {
    FounderRecord {
        founder_id: id.to_string(),
        linkedin_doc: format!(r#"{{"note":"founder-id={id}","education":[{{"school":"Duke University","degree_name":"BSE"}}]}}"#),
        org_name: "Airtable".to_string(),
        success: true,
    }
}

/// Mock keyed by founder: the summary carries the marker so the three
/// labelling prompts can be recognized too.
fn mock_for(id: &str, level: &str, personas: &str, flags: &str) -> MockBackend {
    MockBackend::new()
        .with_founder(PromptKind::Summary, id, format!("founder-id={id}\n{AIRTABLE_SUMMARY}"))
        .with_founder(PromptKind::LevelLabel, id, level)
        .with_founder(PromptKind::PersonaLabel, id, personas)
        .with_founder(PromptKind::FlagsLabel, id, flags)
}

const ZEROS: &str = "[0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0]";

#[test]
fn happy_path_is_four_calls() {
    let prompts = PromptSet::builtin();
    let settings = ChainSettings::default();
    let gw = mock_for("f1", "L3", "Final assignment: [K, M, N]", ZEROS);
    let out = Segmenter::new(&gw, &prompts, &settings).run_chain(&record("f1"));
    assert!(out.is_complete(), "{:?}", out.errors);
    assert_eq!(gw.calls(), 4);
    let labels = out.labels().unwrap();
    assert_eq!(labels.level.value(), 3);
    assert_eq!(labels.personas.to_string(), "[K, M, N]");
    assert!(labels.flags.iter().all(|f| !f));
    let s = out.summary.unwrap();
    assert_eq!(s.prior_experience_years(), Some(4.33));
    let unis = s.universities.unwrap();
    assert_eq!((unis[0].name.as_str(), unis[0].qs_rank), ("Duke University", Some(50)));
    assert_eq!(s.prior_companies, Some(vec![]));
}

#[test]
fn summary_prompt_substitutes_record() {
    let prompts = PromptSet::builtin();
    let settings = ChainSettings::default();
    let gw = MockBackend::new();
    let seg = Segmenter::new(&gw, &prompts, &settings);
    let r = record("f1");
    let p = seg.render_summary_prompt(&r).unwrap();
    assert!(p.contains("BEFORE they founded Airtable"));
    assert!(p.contains(&format!("###\n{}\n###", r.linkedin_doc)) || p.contains(&r.linkedin_doc));
    assert!(!p.contains("{org_name}") && !p.contains("{linkedin_json}"));
    assert_eq!(p, seg.render_summary_prompt(&r).unwrap());
}

#[test]
fn prompts_reach_the_gateway_unmodified() {
    let prompts = PromptSet::builtin();
    let settings = ChainSettings::default();
    let seen = Mutex::new(Vec::new());
    let gw = FnGateway(|req: &founderseg_core::LlmRequest| {
        seen.lock().unwrap().push(req.prompt.clone());
        Ok(match PromptKind::detect(&req.prompt) {
            Some(PromptKind::Summary) => "the summary".to_string(),
            Some(PromptKind::LevelLabel) => "L9".to_string(),
            Some(PromptKind::PersonaLabel) => "[T]".to_string(),
            _ => ZEROS.to_string(),
        })
    });
    let r = record("x");
    let seg = Segmenter::new(&gw, &prompts, &settings);
    let out = seg.run_chain(&r);
    assert!(out.is_complete());
    let seen = seen.lock().unwrap().clone();
    assert_eq!(seen.len(), 4);
    assert_eq!(seen[0], seg.render_summary_prompt(&r).unwrap());
    let level_prompt = prompts.level_label.render(&[("summary", "the summary")]).unwrap();
    assert_eq!(seen[1], level_prompt);
}

#[test]
fn one_corrective_retry_then_error() {
    let prompts = PromptSet::builtin();
    let settings = ChainSettings::default();
    let calls = Mutex::new(0usize);
    let gw = FnGateway(|req: &founderseg_core::LlmRequest| {
        *calls.lock().unwrap() += 1;
        let retry = req.prompt.contains("Previous answer:");
        Ok(match PromptKind::detect(&req.prompt) {
            Some(PromptKind::Summary) => "s".into(),
            // level recovers on the corrective prompt
            Some(PromptKind::LevelLabel) if retry => "L6".into(),
            Some(PromptKind::LevelLabel) => "somewhere around six".into(),
            Some(PromptKind::PersonaLabel) => "[A, B, L]".into(),
            // flags never recover
            _ => "[1,0,1]".into(),
        })
    });
    let out = Segmenter::new(&gw, &prompts, &settings).run_chain(&record("r1"));
    assert_eq!(*calls.lock().unwrap(), 6);
    assert_eq!(out.level.unwrap().value(), 6);
    assert_eq!(out.personas.unwrap().to_string(), "[A, B, L]");
    assert!(out.flags.is_none());
    assert_eq!(out.errors.len(), 1);
    let e = &out.errors[0];
    assert_eq!((e.founder_id.as_str(), e.stage), ("r1", Stage::Flags));
    assert!(matches!(e.kind, StageErrorKind::Parse(_)));
    assert!(e.to_string().contains("r1"));
}

#[test]
fn failed_summary_skips_the_rest() {
    let prompts = PromptSet::builtin();
    let settings = ChainSettings::default();
    let gw = FnGateway(|_: &founderseg_core::LlmRequest| Err(GatewayError::Timeout));
    let out = Segmenter::new(&gw, &prompts, &settings).run_chain(&record("t"));
    assert!(out.summary.is_none() && out.labels().is_none());
    let stages: Vec<Stage> = out.errors.iter().map(|e| e.stage).collect();
    assert_eq!(stages, Stage::ALL);
    assert!(matches!(out.errors[0].kind, StageErrorKind::Gateway(GatewayError::Timeout)));
    assert!(out.errors[1..].iter().all(|e| e.kind == StageErrorKind::Skipped));
}

#[test]
fn mock_miss_is_an_error() {
    let prompts = PromptSet::builtin();
    let settings = ChainSettings::default();
    let gw = MockBackend::new();
    let out = Segmenter::new(&gw, &prompts, &settings).run_chain(&record("nobody"));
    assert!(matches!(
        out.errors[0].kind,
        StageErrorKind::Gateway(GatewayError::MockMiss { .. })
    ));
}

#[test]
fn taxonomy_proposal() {
    let prompts = PromptSet::builtin();
    let settings = ChainSettings::default();
    let gw = FnGateway(|req: &founderseg_core::LlmRequest| {
        assert_eq!(PromptKind::detect(&req.prompt), Some(PromptKind::LevelProposal));
        Ok("Level 10 (L10): ...".to_string())
    });
    let seg = Segmenter::new(&gw, &prompts, &settings);
    let many: Vec<String> = (0..50).map(|i| format!("founder {i}")).collect();
    assert!(!seg.propose_taxonomy(&many, BASE_LEVELS, 10).unwrap().is_empty());
    assert!(!seg.propose_taxonomy(&many[..1], BASE_LEVELS, 10).unwrap().is_empty());
    assert!(!seg.propose_taxonomy(&many, "A: x\nB: y", 20).unwrap().is_empty());
    assert_eq!(seg.propose_taxonomy(&[], BASE_LEVELS, 10), Err(StageErrorKind::EmptySummary));

    let empty = FnGateway(|_: &founderseg_core::LlmRequest| Ok("  ".to_string()));
    let seg = Segmenter::new(&empty, &prompts, &settings);
    assert_eq!(seg.propose_taxonomy(&many, BASE_LEVELS, 10), Err(StageErrorKind::EmptyCompletion));
}
