//! Exports a catalog recipe as JSON, parses it back and rebuilds the model.

use kdelta::catalog::{recipes, ConfigName};
use kdelta::rational::format;
use kdelta::{RecipeFile, Result};

pub fn run_example() -> Result<()> {
    for (label, recipe, flag) in recipes(ConfigName::S427) {
        let text = recipe.to_json();
        let parsed = RecipeFile::parse(&text)?;
        assert_eq!(parsed, recipe);
        let model = parsed.build()?;
        println!(
            "{label}: {} steps, {} bytes of JSON, flag {:?}, (-K)^2 = {}",
            recipe.steps.len(),
            text.len(),
            flag,
            format(&model.degree()?)
        );
    }
    let broken =
        r#"{"format_version": "1", "name": "broken", "steps": [{"kind": "seed_wps", "n": }]}"#;
    match RecipeFile::parse(broken) {
        Err(e) => println!("malformed input: {e}"),
        Ok(_) => unreachable!("malformed JSON parsed"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
