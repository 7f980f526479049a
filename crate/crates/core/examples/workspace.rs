//! Loads a JSON workspace of named values and runs a few CLI commands on it.
//!
//! Run with `cargo run --example workspace -- [path]`; without a path the
//! bundled `examples/data/workspace.json` is used.

use cospans::cli::{execute, Command, Pair};
use cospans::json::Workspace;

fn main() -> cospans::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| {
        concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/workspace.json").into()
    });
    let ws = Workspace::load(&[path])?;
    for (name, value) in ws.bindings() {
        println!("{name}: {}", value.kind());
    }

    let report = execute(
        &Command::Compose(Pair {
            left: "ww".into(),
            right: "rw".into(),
        }),
        &ws,
        false,
    )?;
    print!("{}", report.to_json_string());
    Ok(())
}
