//! Every example runs to completion.

#[allow(dead_code)]
#[path = "../examples/build_model.rs"]
mod build_model;
#[allow(dead_code)]
#[path = "../examples/classification_table.rs"]
mod classification_table;
#[allow(dead_code)]
#[path = "../examples/delta_report.rs"]
mod delta_report;
#[allow(dead_code)]
#[path = "../examples/hilbert_series.rs"]
mod hilbert_series;
#[allow(dead_code)]
#[path = "../examples/liu_screen.rs"]
mod liu_screen;
#[allow(dead_code)]
#[path = "../examples/recipe_file.rs"]
mod recipe_file;
#[allow(dead_code)]
#[path = "../examples/zariski_chambers.rs"]
mod zariski_chambers;

#[test]
fn build_model_runs() {
    build_model::run_example().unwrap();
}

#[test]
fn classification_table_runs() {
    classification_table::run_example().unwrap();
}

#[test]
fn delta_report_runs() {
    delta_report::run_example().unwrap();
}

#[test]
fn hilbert_series_runs() {
    hilbert_series::run_example().unwrap();
}

#[test]
fn liu_screen_runs() {
    liu_screen::run_example();
}

#[test]
fn recipe_file_runs() {
    recipe_file::run_example().unwrap();
}

#[test]
fn zariski_chambers_runs() {
    zariski_chambers::run_example().unwrap();
}
