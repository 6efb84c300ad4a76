//! Education strings with their expected codes.

#![allow(dead_code)]

use founderseg_core::edu_features::{fields_of_study, map_degree, map_field, EducationEntry};

/// Degree strings and their expected code. The first block lists every
/// exemplar printed in the degree mapping table.
pub const DEGREE_CASES: &[(&str, u8)] = &[
    ("", 0),
    ("BA", 1),
    ("BS", 1),
    ("MA", 2),
    ("MS", 2),
    ("MBA", 2),
    ("PhD", 3),
    ("MD", 3),
    ("JD", 3),
    // common spellings
    ("Bachelor of Arts", 1),
    ("Bachelor's degree", 1),
    ("B.S.", 1),
    ("BSE", 1),
    ("BEng", 1),
    ("Master of Science", 2),
    ("Master's degree", 2),
    ("M.S.", 2),
    ("MSc", 2),
    ("Ph.D.", 3),
    ("Doctor of Philosophy", 3),
    ("Doctor of Medicine (M.D.)", 3),
    ("PhD in Bioengineering", 3),
    ("JD/MBA", 3),
    ("High School Diploma", 0),
    ("Associate of Arts", 0),
    ("Certificate", 0),
];

/// Single-field strings. Every category exemplar from the field mapping
/// table appears here.
pub const FIELD_CASES: &[(&str, Option<u8>)] = &[
    ("Math", Some(0)),
    ("Mathematics", Some(0)),
    ("Quantitative Methods", Some(0)),
    ("Biology", Some(1)),
    ("Chemistry", Some(1)),
    ("Medicine", Some(1)),
    ("Psychology", Some(1)),
    ("Physiology", Some(1)),
    ("Anatomy", Some(1)),
    ("Immunology", Some(1)),
    ("Genetics", Some(1)),
    ("Accounting", Some(2)),
    ("Banking", Some(2)),
    ("Actuarial Science", Some(2)),
    ("Finance", Some(2)),
    ("Economics", Some(2)),
    ("Business", Some(3)),
    ("Management", Some(3)),
    ("Entrepreneurship", Some(3)),
    ("Leadership", Some(3)),
    ("Sales", Some(4)),
    ("Distribution", Some(4)),
    ("Marketing", Some(4)),
    ("Computer Science", Some(5)),
    ("Computer Engineering", Some(5)),
    ("machine learning", Some(5)),
    ("Artificial Intelligence", Some(5)),
    ("HCI", Some(5)),
    ("English", Some(6)),
    ("Media Studies", Some(6)),
    ("Film", Some(6)),
    ("History", Some(6)),
    ("Journalism", Some(6)),
    ("Philosophy", Some(6)),
    ("Liberal Arts", Some(6)),
    ("Visual Arts", Some(6)),
    ("Political Science", Some(7)),
    ("Sociology", Some(7)),
    ("Law", Some(7)),
    ("Consulting", Some(7)),
    ("Architecture", Some(8)),
    ("Design", Some(8)),
    ("Urban Planning", Some(8)),
    ("Engineering", Some(9)),
    ("Robotics", Some(9)),
    ("Physics", Some(9)),
    // multi-category strings resolve by priority
    ("Financial Engineering", Some(2)),
    ("Quantitative Finance", Some(2)),
    ("Biomedical Engineering", Some(1)),
    ("Mechanical Engineering", Some(9)),
    ("Electrical and Computer Engineering", Some(9)),
    ("Business Administration and Management, General", Some(3)),
    ("Underwater Basket Weaving", None),
    ("", None),
];

/// Compound strings that name several fields.
pub const COMPOUND_CASES: &[(&str, &[u8])] = &[
    ("Electrical and Computer Engineering, Economics", &[2, 9]),
    ("Mathematics and Computer Science", &[0, 5]),
    ("Economics/Philosophy", &[2, 6]),
    ("Physics; Finance", &[2, 9]),
    ("Management Science and Engineering", &[3, 9]),
    ("Underwater Basket Weaving, Economics", &[2]),
];

pub fn case_count() -> usize {
    DEGREE_CASES.len() + FIELD_CASES.len() + COMPOUND_CASES.len()
}

/// One line per case whose mapping differs from the expected code.
pub fn disagreements() -> Vec<String> {
    let mut out = Vec::new();
    for (text, want) in DEGREE_CASES {
        let got = map_degree(text).value();
        if got != *want {
            out.push(format!("degree {text:?}: got {got}, want {want}"));
        }
    }
    for (text, want) in FIELD_CASES {
        let got = map_field(text);
        if got != *want {
            out.push(format!("field {text:?}: got {got:?}, want {want:?}"));
        }
    }
    for (text, want) in COMPOUND_CASES {
        let got: Vec<u8> = fields_of_study(&[EducationEntry::new("U", "", *text, None, None)]).iter().collect();
        if got != *want {
            out.push(format!("compound {text:?}: got {got:?}, want {want:?}"));
        }
    }
    out
}
