//! Recomputes the nine reference correlation values.
//!
//!     cargo run --example reference_table

use paircorr::cli::reference_table;

fn main() -> paircorr::Result<()> {
    println!("{:<4} {:<16} {:>20} {:>20} {:>10}", "row", "type", "C2", "exact", "error");
    for cell in reference_table()? {
        println!(
            "{:<4} {:<16} {:>20.16} {:>20.16} {:>10.1e}",
            cell.row, cell.column, cell.computed, cell.exact, cell.error
        );
    }
    Ok(())
}
