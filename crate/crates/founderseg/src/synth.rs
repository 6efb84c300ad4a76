//! Deterministic synthetic founders for offline runs.
//!
//! Writes `successful.csv`, `unsuccessful.csv`, `mock.jsonl` and a
//! `config.toml` that wires them together with the mock backend. Labels
//! depend on a hidden quality score that is higher for successful founders,
//! so the downstream models have signal to find. Each table also carries a
//! few rows that ingestion must reject.

use std::path::{Path, PathBuf};

use founderseg_core::llm_gateway::MOCK_FOUNDER_MARKER;
use founderseg_core::segmentation::{PromptKind, FLAG_COUNT, PERSONA_COUNT};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::artifacts::write_atomic;
use crate::error::Result;
use crate::gateway::{write_mock_fixtures, MockFixture};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthSpec {
    /// Well-formed founders per class.
    pub valid_per_class: usize,
    pub seed: u64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        Self {
            valid_per_class: 160,
            seed: 2024,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthFiles {
    pub successful: PathBuf,
    pub unsuccessful: PathBuf,
    pub mock: PathBuf,
    pub config: PathBuf,
}

const UNIVERSITIES: [(&str, u32); 8] = [
    ("Duke University", 50),
    ("Stanford University", 5),
    ("University of Waterloo", 112),
    ("Arizona State University", 200),
    ("Massachusetts Institute of Technology", 1),
    ("University of Michigan", 33),
    ("Ohio State University", 151),
    ("National University of Singapore", 8),
];

// (degree text, field text); weaker founders draw from the front.
const BACHELORS: [(&str, &str); 5] = [
    ("BA", "History"),
    ("Bachelor of Science", "Economics"),
    ("BS", "Computer Science"),
    ("BSE", "Electrical and Computer Engineering"),
    ("Bachelor of Arts", "Psychology"),
];
const MASTERS: [(&str, &str); 4] = [
    ("MBA", "Business Administration"),
    ("MS", "Statistics"),
    ("Master of Engineering", "Mechanical Engineering"),
    ("MSc", "Biology"),
];
const DOCTORATES: [(&str, &str); 3] = [("PhD", "Physics"), ("Ph.D.", "Computer Science"), ("MD", "Medicine")];

/// Flags whose probability tracks quality; the rest are noise.
const INFORMATIVE_FLAGS: [usize; 9] = [0, 2, 3, 5, 8, 11, 14, 17, 20];

struct Founder {
    id: String,
    org: String,
    doc: String,
    summary: String,
    level: u8,
    personas: Vec<char>,
    flags: [u8; FLAG_COUNT],
}

fn founder(rng: &mut ChaCha8Rng, num: usize, success: bool) -> Founder {
    let id = format!("syn-{num:04}");
    let org = format!("Org {num:04} Labs");
    let q: f64 = if success {
        rng.gen_range(0.3..1.0)
    } else {
        rng.gen_range(0.0..0.7)
    };

    let level = (1.0 + q * 9.0 + rng.gen_range(-1.5..1.5)).round().clamp(1.0, 10.0) as u8;

    let n_personas = rng.gen_range(1..=3);
    let mut personas: Vec<char> = Vec::new();
    while personas.len() < n_personas {
        // Letters near the front of the alphabet go to stronger founders.
        let centre = (1.0 - q) * (PERSONA_COUNT - 1) as f64;
        let idx = (centre + rng.gen_range(-5.0..5.0)).round().clamp(0.0, (PERSONA_COUNT - 1) as f64) as u8;
        let c = char::from(b'A' + idx);
        if !personas.contains(&c) {
            personas.push(c);
        }
    }
    personas.sort_unstable();

    let mut flags = [0u8; FLAG_COUNT];
    for (i, f) in flags.iter_mut().enumerate() {
        let p = if INFORMATIVE_FLAGS.contains(&i) { 0.1 + 0.7 * q } else { 0.3 };
        *f = u8::from(rng.gen_bool(p));
    }

    let mut education = Vec::new();
    let (uni, rank) = UNIVERSITIES[rng.gen_range(0..UNIVERSITIES.len())];
    let start = rng.gen_range(1995..2012);
    let (deg, field) = BACHELORS[((q * 3.0) as usize + rng.gen_range(0..2)).min(BACHELORS.len() - 1)];
    education.push(json!({
        "school": uni, "degree_name": deg, "field_of_study": field,
        "starts_at": {"year": start}, "ends_at": {"year": start + 4}
    }));
    let mut degrees = vec![format!("{deg} in {field}")];
    if rng.gen_bool(0.2 + 0.5 * q) {
        let (d, f) = *MASTERS.choose(rng).expect("non-empty");
        education.push(json!({"school": uni, "degree_name": d, "field_of_study": f,
            "starts_at": {"year": start + 5}, "ends_at": {"year": start + 7}}));
        degrees.push(format!("{d} in {f}"));
    }
    if rng.gen_bool(0.05 + 0.3 * q) {
        let (d, f) = *DOCTORATES.choose(rng).expect("non-empty");
        education.push(json!({"school": uni, "degree_name": d, "field_of_study": f}));
        degrees.push(format!("{d} in {f}"));
    }
    let years = rng.gen_range(0..15);
    let doc = json!({
        "full_name": format!("Founder {num:04}"),
        "headline": format!("Co-founder at {org} ({MOCK_FOUNDER_MARKER}{id})"),
        "education": education,
        "experiences": [{"company": format!("Prior Co {}", num % 37), "title": "Engineer", "years": years}],
    })
    .to_string();

    let summary = format!(
        "{MOCK_FOUNDER_MARKER}{id}\n\
         The founder co-founded {org}. They studied at {uni} ({}) and worked for {years} years before founding.\n\n\
         1) The universities where the founder studied, along with their global rankings according to the latest QS World University Rankings (university, #ranking):\n   {uni}, #{rank}.\n\n\
         2) The total time period of work experience (in years) BEFORE the founding:\n   {years} years.\n\n\
         3) The companies the founder worked at before, with their status and net worth:\n   Prior Co {}, private, $10 million.\n",
        degrees.join("; "),
        num % 37
    );

    Founder {
        id,
        org,
        doc,
        summary,
        level,
        personas,
        flags,
    }
}

fn table_csv(rows: &[Founder], broken: &[(String, String, String)]) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["founder_id", "org_name", "linkedin_json"]).expect("in-memory csv");
    for f in rows {
        w.write_record([f.id.as_str(), f.org.as_str(), f.doc.as_str()]).expect("in-memory csv");
    }
    for (id, org, doc) in broken {
        w.write_record([id, org, doc]).expect("in-memory csv");
    }
    w.into_inner().expect("in-memory csv")
}

const PROPOSAL_DEFAULT: &str = "L1: Entry-level founders with limited experience\n\
L2: Early-career founders with some domain exposure\n\
L3: Founders with a strong technical or business degree\n\
L4: Founders with prior startup employment\n\
L5: Founders with management experience at growing companies\n\
L6: Founders with senior roles at large companies\n\
L7: Founders with a prior acquisition or notable exit\n\
L8: Founders with several successful ventures\n\
L9: Founders with a prior large exit\n\
L10: Founders who built companies worth billions\n";

/// Generates the synthetic inputs into `dir`.
pub fn generate(dir: &Path, spec: &SynthSpec) -> Result<SynthFiles> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.valid_per_class;
    let successful: Vec<Founder> = (1..=n).map(|i| founder(&mut rng, i, true)).collect();
    let unsuccessful: Vec<Founder> = (n + 1..=2 * n).map(|i| founder(&mut rng, i, false)).collect();

    let broken = |base: usize| {
        vec![
            (format!("bad-{base:04}"), "Broken Doc Inc".to_string(), "{\"education\": [".to_string()),
            (format!("bad-{:04}", base + 1), "Empty Doc Inc".to_string(), String::new()),
            (format!("bad-{:04}", base + 2), "Array Doc Inc".to_string(), "[1, 2, 3]".to_string()),
            (format!("bad-{:04}", base + 3), String::new(), "{}".to_string()),
        ]
    };
    let files = SynthFiles {
        successful: dir.join("successful.csv"),
        unsuccessful: dir.join("unsuccessful.csv"),
        mock: dir.join("mock.jsonl"),
        config: dir.join("config.toml"),
    };
    write_atomic(&files.successful, &table_csv(&successful, &broken(1)))?;
    write_atomic(&files.unsuccessful, &table_csv(&unsuccessful, &broken(5)))?;

    let mut fixtures = Vec::with_capacity(4 * 2 * n + 1);
    for f in successful.iter().chain(&unsuccessful) {
        let mut add = |kind: PromptKind, completion: String| {
            fixtures.push(MockFixture {
                kind: Some(kind.name().to_string()),
                founder_id: Some(f.id.clone()),
                prompt_sha256: None,
                completion,
            })
        };
        add(PromptKind::Summary, f.summary.clone());
        add(PromptKind::LevelLabel, format!("L{}", f.level));
        let letters: Vec<String> = f.personas.iter().map(char::to_string).collect();
        add(PromptKind::PersonaLabel, format!("[{}]", letters.join(", ")));
        let flags: Vec<String> = f.flags.iter().map(u8::to_string).collect();
        add(PromptKind::FlagsLabel, format!("[{}]", flags.join(",")));
    }
    fixtures.push(MockFixture {
        kind: Some(PromptKind::LevelProposal.name().to_string()),
        founder_id: None,
        prompt_sha256: None,
        completion: PROPOSAL_DEFAULT.to_string(),
    });
    write_mock_fixtures(&files.mock, &fixtures)?;

    let config = format!(
        "# Synthetic run; paths are relative to this file.\n\
         successful = \"successful.csv\"\n\
         unsuccessful = \"unsuccessful.csv\"\n\
         n_per_class = {}\n\
         out_dir = \"run\"\n\n\
         [seeds]\nsample = 7\nsplit = 11\nmodels = 13\n\n\
         [llm]\nbackend = \"mock\"\nmock_fixtures = \"mock.jsonl\"\n",
        n.min(150)
    );
    write_atomic(&files.config, config.as_bytes())?;
    Ok(files)
}
