use founderseg_core::segmentation::{render_proposal_prompt, PromptKind, PromptSet, BASE_LEVELS};

const ORIGINAL_PROPOSAL: &str = include_str!("fixtures/level_proposal_original.txt");

#[test]
fn default_proposal_render_is_byte_identical() {
    let prompts = PromptSet::builtin();
    let summaries = vec!["founder one".to_string(), "founder \"two\"".to_string()];
    let got = render_proposal_prompt(&prompts, &summaries, BASE_LEVELS, 10).unwrap();
    let joined = serde_json::to_string(&summaries).unwrap();
    let want = ORIGINAL_PROPOSAL.replace("{summaries}", &joined);
    assert_eq!(got, want);
}

#[test]
fn persona_analogue_changes_only_parameters() {
    let prompts = PromptSet::builtin();
    let base = "A: one\nB: two\nC: three";
    let got = render_proposal_prompt(&prompts, &["s".into()], base, 20).unwrap();
    assert!(got.contains("one of twenty different categories"));
    assert!(got.contains("we only have three categories"));
    assert!(got.contains("\nA: one\nB: two\nC: three\n"));
}

#[test]
fn every_template_detects_as_its_own_kind() {
    let prompts = PromptSet::builtin();
    for kind in PromptKind::ALL {
        let t = prompts.get(kind);
        assert_eq!(PromptKind::detect(t.body()), Some(kind), "{}", kind.name());
        assert!(!t.placeholders().is_empty());
    }
    assert_eq!(PromptKind::detect("hello"), None);
}

#[test]
fn label_templates_take_only_the_summary() {
    let prompts = PromptSet::builtin();
    for kind in [PromptKind::LevelLabel, PromptKind::PersonaLabel, PromptKind::FlagsLabel] {
        assert_eq!(prompts.get(kind).placeholders(), ["summary"]);
        let out = prompts.get(kind).render(&[("summary", "SUMMARY-TEXT")]).unwrap();
        assert!(out.contains("SUMMARY-TEXT"));
        assert!(!out.contains("{summary}"));
    }
    assert!(prompts.get(PromptKind::LevelLabel).render(&[]).is_err());
}

#[test]
fn flag_prompt_lists_every_flag() {
    let body = PromptSet::builtin().get(PromptKind::FlagsLabel).body().to_string();
    for name in founderseg_core::segmentation::FLAG_NAMES {
        assert!(body.contains(name), "{name} missing");
    }
    assert!(body.contains("a list of length 23"));
}
