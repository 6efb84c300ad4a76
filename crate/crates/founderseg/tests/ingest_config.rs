use std::io::Write;

use founderseg::config::{BackendChoice, RunConfig};
use founderseg::csv_ingest::load_founder_table;
use founderseg::Error;

fn write(dir: &std::path::Path, name: &str, body: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::File::create(&p).unwrap().write_all(body.as_bytes()).unwrap();
    p
}

#[test]
fn row_without_org_is_skipped_and_reported() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        dir.path(),
        "s.csv",
        "founder_id,org_name,linkedin_json\n\
         a1,Acme,\"{\"\"x\"\":1}\"\n\
         a2,,\"{}\"\n\
         a3,Beta,\"{}\"\n",
    );
    let t = load_founder_table(&p, true).unwrap();
    assert_eq!(t.dataset.len(), 2);
    assert_eq!(t.skipped.len(), 1);
    assert_eq!(t.skipped[0].row, 2);
    let ids: Vec<&str> = t.dataset.records().iter().map(|r| r.founder_id.as_str()).collect();
    assert_eq!(ids, ["a1", "a3"]);
    assert_eq!(t.dataset.records()[0].linkedin_doc, "{\"x\":1}");
    assert!(t.dataset.records().iter().all(|r| r.success));
}

#[test]
fn missing_founder_id_column_uses_file_and_row() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "u.csv", "org_name,linkedin_json\nAcme,{}\nBeta,{}\n");
    let t = load_founder_table(&p, false).unwrap();
    let ids: Vec<&str> = t.dataset.records().iter().map(|r| r.founder_id.as_str()).collect();
    assert_eq!(ids, ["u.csv:1", "u.csv:2"]);
}

#[test]
fn missing_file_names_path() {
    let err = load_founder_table(std::path::Path::new("/no/such/founders.csv"), true).unwrap_err();
    assert!(err.to_string().contains("/no/such/founders.csv"), "{err}");
}

#[test]
fn missing_required_column() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "s.csv", "founder_id,org_name\na,Acme\n");
    let err = load_founder_table(&p, true).unwrap_err();
    assert!(matches!(err, Error::MissingColumn { column: "linkedin_json", .. }), "{err}");
}

#[test]
fn duplicate_ids_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "s.csv", "founder_id,org_name,linkedin_json\na,X,{}\na,Y,{}\n");
    assert!(matches!(load_founder_table(&p, true), Err(Error::Ingest(_))));
}

#[test]
fn config_from_toml_with_relative_paths() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        dir.path(),
        "c.toml",
        "successful = \"data/s.csv\"\nn_per_class = 20\n[seeds]\nsample = 3\n[llm]\nbackend = \"live\"\nmax_in_flight = 2\n[models.forest]\nn_trees = 10\n",
    );
    let c = RunConfig::load(&p).unwrap();
    assert_eq!(c.successful.as_deref(), Some(dir.path().join("data/s.csv").as_path()));
    assert_eq!(c.n_per_class, 20);
    assert_eq!(c.seeds.sample, 3);
    assert_eq!(c.seeds.split, RunConfig::default().seeds.split);
    assert_eq!(c.llm.backend, BackendChoice::Live);
    assert_eq!(c.llm.max_in_flight, 2);
    assert_eq!(c.models.forest.n_trees, 10);
    assert_eq!(c.models.forest.max_depth, 8);
    assert_eq!(c.out_dir, dir.path().join("run"));
    c.validate().unwrap();
}

#[test]
fn config_rejects_unknown_keys_and_bad_values() {
    assert!(matches!(RunConfig::from_toml("n_per_clas = 3\n"), Err(Error::Config(_))));
    let zero = RunConfig {
        n_per_class: 0,
        ..Default::default()
    };
    assert!(matches!(zero.validate(), Err(Error::Config(_))));
    let mut bad = RunConfig::default();
    bad.models.threshold = 1.5;
    assert!(bad.validate().is_err());
}

#[test]
fn defaults() {
    let c = RunConfig::default();
    assert_eq!(c.n_per_class, 150);
    assert_eq!(c.llm.max_in_flight, 4);
    assert_eq!(c.llm.temperature, 0.0);
    assert_eq!(c.llm.retry.max_attempts, 5);
    assert_eq!(c.llm.retry.base_delay_ms, 1000);
    assert_eq!(c.failure_tolerance, 0.0);
    assert_eq!(c.models.gbt.rounds, 200);
    assert_eq!(c.models.forest.n_trees, 100);
}

#[test]
fn model_seed_reaches_both_ensembles() {
    let mut c = RunConfig::default();
    c.seeds.models = 99;
    let p = c.effective_models();
    assert_eq!((p.forest.seed, p.gbt.seed), (99, 99));
    c.seeds.split = 5;
    assert_eq!(c.effective_split().seed, 5);
}

#[test]
fn location_free_view_ignores_directories() {
    let mut a = RunConfig::default();
    a.successful = Some("/x/y/s.csv".into());
    a.out_dir = "/x/run".into();
    let mut b = a.clone();
    b.successful = Some("/other/s.csv".into());
    b.out_dir = "/elsewhere".into();
    assert_eq!(a.location_free(), b.location_free());
}
