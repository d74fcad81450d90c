//! Writes the six figure tables as CSV files into a directory.
//!
//! `cargo run --example figure_data -- <dir>`; defaults to the current directory.

use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use gk_coherent::cli::{figure_table, FigureId, Settings};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args_os()
        .nth(1)
        .map_or_else(|| PathBuf::from("."), PathBuf::from);
    for id in 1..=6 {
        let table = figure_table(FigureId::new(id)?, &Settings::default())?;
        let path = dir.join(format!("figure{id}.csv"));
        table.write_csv(&mut BufWriter::new(File::create(&path)?))?;
        println!(
            "{} ({} rows, columns {})",
            path.display(),
            table.rows.len(),
            table.header.join(",")
        );
    }
    Ok(())
}
