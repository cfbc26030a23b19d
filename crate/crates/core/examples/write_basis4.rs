//! Regenerates `data/basis4.json` and prints its SHA-256.

use cornertree::profile::{sha256_hex, Basis4};

fn main() -> std::io::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/basis4.json").to_string());
    let text = Basis4::generate().to_json_string();
    std::fs::write(&path, &text)?;
    println!("{}  {path}", sha256_hex(text.as_bytes()));
    Ok(())
}
