//! CSV samples of the lattice sum on a rectangle of the slice through j.

use slice_regular::{grid_csv, GridSpec, ImaginaryUnit, ZSum};

fn main() -> slice_regular::Result<()> {
    let spec = GridSpec::new(ImaginaryUnit::J, (-2.0, 2.0), (0.0, 1.5), 5, 4)?;
    let csv = grid_csv(&ZSum::default(), &spec)?;
    print!("{csv}");
    Ok(())
}
