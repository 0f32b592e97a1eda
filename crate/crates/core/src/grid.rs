//! Slice grids for plotting: values of `f` on a rectangle of `L_I`.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::SliceFunction;
use crate::quat::{ImaginaryUnit, Quaternion};

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "SLICE_REGULAR_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub unit: ImaginaryUnit,
    pub x: (f64, f64),
    pub y: (f64, f64),
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn new(unit: ImaginaryUnit, x: (f64, f64), y: (f64, f64), nx: usize, ny: usize) -> Result<Self> {
        if nx < 2 || ny < 2 {
            return Err(Error::InvalidInput(format!("grid resolution must be at least 2x2, got {nx}x{ny}")));
        }
        if !(x.0.is_finite() && x.1.is_finite() && y.0.is_finite() && y.1.is_finite()) {
            return Err(Error::InvalidInput("grid bounds must be finite".into()));
        }
        Ok(GridSpec { unit, x, y, nx, ny })
    }

    /// Cell coordinates, rows ordered by `y` then `x`.
    pub fn cells(&self) -> Vec<(f64, f64)> {
        let step = |(a, b): (f64, f64), n: usize, k: usize| a + (b - a) * k as f64 / (n - 1) as f64;
        (0..self.ny)
            .flat_map(|j| (0..self.nx).map(move |i| (step(self.x, self.nx, i), step(self.y, self.ny, j))))
            .collect()
    }
}

fn pool() -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|s| s.parse::<usize>().ok()) {
        b = b.num_threads(n.max(1));
    }
    b.build().map_err(|e| Error::InvalidInput(e.to_string()))
}

/// Values on the grid; `None` marks poles.
pub fn sample_grid<F: SliceFunction + ?Sized>(f: &F, spec: &GridSpec) -> Result<Vec<(f64, f64, Option<Quaternion>)>> {
    let cells = spec.cells();
    pool()?.install(|| {
        cells
            .par_iter()
            .map(|&(x, y)| match f.eval(Quaternion::real(x) + spec.unit.as_quat() * y) {
                Ok(v) => Ok((x, y, Some(v))),
                Err(Error::Pole(..)) => Ok((x, y, None)),
                Err(e) => Err(e),
            })
            .collect()
    })
}

/// CSV with header `x,y,f0,f1,f2,f3,abs`, 17 significant digits, `NaN` at poles.
pub fn grid_csv<F: SliceFunction + ?Sized>(f: &F, spec: &GridSpec) -> Result<String> {
    let rows = sample_grid(f, spec)?;
    let mut out = String::from("x,y,f0,f1,f2,f3,abs\n");
    for (x, y, v) in rows {
        let vals = match v {
            Some(v) => [v.x0, v.x1, v.x2, v.x3, v.norm()],
            None => [f64::NAN; 5],
        };
        write!(out, "{x:.16e},{y:.16e}").expect("string write");
        for c in vals {
            write!(out, ",{c:.16e}").expect("string write");
        }
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series_examples::ZSum;
    use crate::star_poly::StarPoly;

    #[test]
    fn two_by_two() {
        let spec = GridSpec::new(ImaginaryUnit::I, (0.0, 1.0), (0.0, 1.0), 2, 2).unwrap();
        let csv = grid_csv(&StarPoly::constant("1-k".parse().unwrap()), &spec).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[0], "x,y,f0,f1,f2,f3,abs");
        assert_eq!(
            lines[2],
            "1.0000000000000000e0,0.0000000000000000e0,1.0000000000000000e0,0.0000000000000000e0,0.0000000000000000e0,-1.0000000000000000e0,1.4142135623730951e0"
        );
        assert!(GridSpec::new(ImaginaryUnit::I, (0.0, 1.0), (0.0, 1.0), 1, 2).is_err());
    }

    #[test]
    fn poles_become_nan() {
        let spec = GridSpec::new(ImaginaryUnit::J, (-1.0, 1.0), (0.0, 1.0), 3, 2).unwrap();
        let csv = grid_csv(&ZSum::default(), &spec).unwrap();
        // (0, 1) is on the sphere 0 + 𝕊
        let row = csv.lines().nth(5).unwrap();
        assert!(row.starts_with("0.0000000000000000e0,1.0000000000000000e0,NaN"), "{row}");
        assert_eq!(csv, grid_csv(&ZSum::default(), &spec).unwrap());
    }
}
