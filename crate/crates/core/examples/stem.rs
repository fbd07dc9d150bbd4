//! Prints the engine's lemma for each word read from stdin, one per line.

use std::io::{self, BufRead, Write};

fn main() -> io::Result<()> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    for line in io::stdin().lock().lines() {
        writeln!(out, "{}", goalspot_core::textpipe::stem(line?.trim()))?;
    }
    Ok(())
}
