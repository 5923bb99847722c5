//! Prints the feedback for a text read from stdin.

use std::io::Read;

use reflector::{AnalyzeOptions, Engine};

fn main() {
    let mut text = String::new();
    std::io::stdin().read_to_string(&mut text).expect("read stdin");
    let engine = Engine::bundled().expect("bundled resources load");
    match engine.analyze(&text, &AnalyzeOptions::default()) {
        Ok(response) => println!("{}", serde_json::to_string_pretty(&response).unwrap()),
        Err(e) => eprintln!("{e}"),
    }
}
