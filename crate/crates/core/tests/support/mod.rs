pub mod edu_corpus;
pub mod reference_tables;
pub mod parser_gen;
