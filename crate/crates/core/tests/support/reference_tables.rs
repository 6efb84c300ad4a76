//! Reference success-rate and metric tables, and a 300-founder matrix built
//! to match them. Success counts are recovered from the printed totals and
//! rounded rates by exhaustive search.

#![allow(dead_code)]

use founderseg_core::features::{build_feature_vector, EduFeatures, LabeledMatrix, MatrixRow};
use founderseg_core::segmentation::{FlagVector, LevelLabel, Persona, PersonaSet, SegmentLabels, FLAG_COUNT, FLAG_NAMES};

/// (level, total, printed rate)
pub const LEVELS: [(u8, usize, &str); 10] = [
    (1, 16, "37.5"),
    (2, 57, "35.1"),
    (3, 58, "29.3"),
    (4, 79, "40.5"),
    (5, 1, "100"),
    (6, 37, "64.9"),
    (7, 14, "92.9"),
    (8, 12, "91.7"),
    (9, 25, "100"),
    (10, 1, "100"),
];

/// (persona, total, printed rate)
pub const PERSONAS: [(char, usize, &str); 20] = [
    ('A', 41, "56.1"),
    ('B', 21, "71.4"),
    ('C', 6, "50.0"),
    ('D', 38, "44.7"),
    ('E', 56, "60.7"),
    ('F', 96, "43.8"),
    ('G', 28, "50.0"),
    ('H', 19, "57.9"),
    ('I', 73, "63.0"),
    ('J', 81, "42.0"),
    ('K', 31, "54.8"),
    ('L', 87, "51.7"),
    ('M', 11, "27.3"),
    ('N', 52, "48.1"),
    ('O', 9, "22.2"),
    ('P', 9, "0.0"),
    ('Q', 5, "100.0"),
    ('R', 10, "90.0"),
    ('S', 6, "16.7"),
    ('T', 11, "45.5"),
];

/// (flag, No total, No rate, Yes total, Yes rate)
pub const FLAGS: [(&str, usize, &str, usize, &str); 16] = [
    ("is_researcher", 232, "46.98", 68, "60.29"),
    ("is_phd", 241, "47.72", 59, "59.32"),
    ("is_scholarship", 297, "49.83", 3, "66.67"),
    ("is_young_grad", 295, "50.17", 5, "40.00"),
    ("is_dropout", 298, "49.66", 2, "100.00"),
    ("top_tier_uni", 178, "41.57", 122, "62.30"),
    ("entrepreneurship_education", 280, "51.07", 20, "35.00"),
    ("few_years_experience", 154, "45.45", 146, "54.79"),
    ("decade_experience", 174, "54.02", 126, "44.44"),
    ("big_tech_experience", 270, "47.04", 30, "76.67"),
    ("comm_experience", 246, "54.88", 54, "27.78"),
    ("exec_experience", 105, "45.71", 195, "52.31"),
    ("is_investor", 259, "48.26", 41, "60.98"),
    ("is_top_tier_consultant", 292, "49.32", 8, "75.00"),
    ("is_top_tier_banker", 293, "49.49", 7, "71.43"),
    ("founded_under_30", 207, "47.83", 93, "54.84"),
];

/// (row, accuracy, precision, f1, tpr) as printed.
pub const METRICS: [(&str, f64, f64, f64, f64); 6] = [
    ("linear test1", 0.700, 0.182, 0.308, 1.000),
    ("linear test2", 0.567, 0.571, 0.552, 0.533),
    ("forest test1", 0.667, 0.1, 0.167, 0.500),
    ("forest test2", 0.733, 0.706, 0.750, 0.800),
    ("gbt test1", 0.667, 0.1, 0.167, 0.500),
    ("gbt test2", 0.667, 0.647, 0.688, 0.733),
];

/// Half a unit in the last printed place of `printed`.
pub fn half_ulp(printed: &str) -> f64 {
    let decimals = printed.split_once('.').map_or(0, |(_, d)| d.len());
    0.5 * 10f64.powi(-(decimals as i32))
}

/// The unique success count `k` in `0..=total` whose rate rounds to the
/// printed value. Panics if there is none or more than one.
pub fn successes(total: usize, printed: &str) -> usize {
    let rate: f64 = printed.parse().unwrap();
    let tol = half_ulp(printed) + 1e-9;
    let hits: Vec<usize> = (0..=total)
        .filter(|&k| (100.0 * k as f64 / total as f64 - rate).abs() <= tol)
        .collect();
    assert_eq!(hits.len(), 1, "{printed}% of {total}: candidates {hits:?}");
    hits[0]
}

pub const N: usize = 300;
pub const N_SUCCESS: usize = 150;

/// Row `i < 150` is successful. Levels, personas and flags are laid out
/// independently so each published table is reproduced exactly.
pub fn reference_matrix() -> LabeledMatrix {
    let mut level = [0u8; N];
    let (mut s_at, mut f_at) = (0, N_SUCCESS);
    for (l, total, rate) in LEVELS {
        let s = successes(total, rate);
        for _ in 0..s {
            level[s_at] = l;
            s_at += 1;
        }
        for _ in 0..total - s {
            level[f_at] = l;
            f_at += 1;
        }
    }
    assert_eq!((s_at, f_at), (N_SUCCESS, N), "level table does not split 150/150");

    // Cyclic blocks: a persona with s successes takes the next s successful
    // rows (wrapping), so no row gets the same persona twice and every row
    // gets at least one.
    let mut personas: Vec<Vec<Persona>> = vec![Vec::new(); N];
    let (mut s_cur, mut f_cur) = (0usize, 0usize);
    for (letter, total, rate) in PERSONAS {
        let p = Persona::from_letter(letter).unwrap();
        let s = successes(total, rate);
        for _ in 0..s {
            personas[s_cur % N_SUCCESS].push(p);
            s_cur += 1;
        }
        for _ in 0..total - s {
            personas[N_SUCCESS + f_cur % (N - N_SUCCESS)].push(p);
            f_cur += 1;
        }
    }

    let mut flags = vec![[false; FLAG_COUNT]; N];
    for (name, no_total, no_rate, yes_total, yes_rate) in FLAGS {
        assert_eq!(no_total + yes_total, N);
        let col = FLAG_NAMES.iter().position(|n| *n == name).unwrap();
        let s_yes = successes(yes_total, yes_rate);
        let s_no = successes(no_total, no_rate);
        assert_eq!(s_yes + s_no, N_SUCCESS, "{name}");
        for row in flags.iter_mut().take(s_yes) {
            row[col] = true;
        }
        for row in flags.iter_mut().skip(N_SUCCESS).take(yes_total - s_yes) {
            row[col] = true;
        }
    }

    let rows = (0..N)
        .map(|i| {
            let labels = SegmentLabels {
                founder_id: format!("p{i:03}"),
                level: LevelLabel::new(level[i]).unwrap(),
                personas: PersonaSet::new(personas[i].iter().copied()).expect("every row has a persona"),
                flags: FlagVector::new(flags[i]),
            };
            MatrixRow {
                founder_id: labels.founder_id.clone(),
                features: build_feature_vector(&EduFeatures::default(), &labels),
                success: i < N_SUCCESS,
            }
        })
        .collect();
    LabeledMatrix::new(rows).unwrap()
}
