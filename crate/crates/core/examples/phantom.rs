//! Writes the synthetic test phantom as a PGM.
//!
//! cargo run -p sftlp --example phantom -- phantom.pgm [size]

use sftlp::{phantom, write_pgm};

fn main() -> sftlp::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| "phantom.pgm".into());
    let size = args
        .next()
        .map_or(256, |s| s.parse().expect("size must be an integer"));
    write_pgm(&phantom::piecewise_smooth(size), &path)
}
