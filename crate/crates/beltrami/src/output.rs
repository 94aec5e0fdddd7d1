//! Output directory, tolerance headers, and CSV / VTK field writers.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use beltrami_core::solutions::FlowSample;
use beltrami_core::Point3;

use crate::error::{CliError, CliResult};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "BELTRAMI_OUT_DIR";

/// Column header of exported field CSV files.
pub const FIELD_CSV_HEADER: &str = "t,x1,x2,x3,u1,u2,u3,p,w1,w2,w3";

/// `--out-dir`, else `$BELTRAMI_OUT_DIR`, else the working directory.
/// The directory is created if missing.
pub fn out_dir(flag: Option<&Path>) -> CliResult<PathBuf> {
    let dir = match flag {
        Some(p) => p.to_path_buf(),
        None => std::env::var_os(OUT_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from(".")),
    };
    std::fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
    Ok(dir)
}

pub fn write(path: &Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

/// Named tolerances with their effective values.
#[derive(Clone, Debug, PartialEq)]
pub struct TolSet(pub Vec<(&'static str, f64)>);

impl TolSet {
    /// Applies `name=value` overrides in order; later ones win.
    pub fn apply(&mut self, overrides: &[String]) -> CliResult<()> {
        for o in overrides {
            let (name, value) = o
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("--tolerance expects NAME=VALUE, got '{o}'")))?;
            let (name, value) = (name.trim().replace('-', "_"), value.trim());
            let v: f64 = value
                .parse()
                .ok()
                .filter(|v: &f64| *v >= 0.0 && v.is_finite())
                .ok_or_else(|| CliError::Usage(format!("--tolerance {name}: '{value}' is not a finite value >= 0")))?;
            let known: Vec<&str> = self.0.iter().map(|e| e.0).collect();
            let slot = self.0.iter_mut().find(|e| e.0 == name).ok_or_else(|| {
                CliError::Usage(format!("unknown tolerance '{name}'; known: {}", known.join(", ")))
            })?;
            slot.1 = v;
        }
        Ok(())
    }

    pub fn get(&self, name: &str) -> f64 {
        self.0.iter().find(|e| e.0 == name).map(|e| e.1).expect("tolerance names are fixed")
    }

    /// `# tolerance.NAME=VALUE` lines.
    pub fn header(&self) -> String {
        let mut s = String::new();
        for (n, v) in &self.0 {
            let _ = writeln!(s, "# tolerance.{n}={v:?}");
        }
        s
    }
}

/// Axis-aligned box sampled at `dims` points per axis, x fastest.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub dims: [usize; 3],
    pub lo: [f64; 3],
    pub hi: [f64; 3],
}

impl Grid {
    pub fn new(dims: [usize; 3], bounds: [f64; 6]) -> CliResult<Self> {
        if dims.contains(&0) {
            return Err(CliError::Usage(format!("--grid needs at least one point per axis, got {dims:?}")));
        }
        let lo = [bounds[0], bounds[2], bounds[4]];
        let hi = [bounds[1], bounds[3], bounds[5]];
        for i in 0..3 {
            if !(hi[i] >= lo[i]) {
                return Err(CliError::Usage(format!("--box: axis {} has upper bound below lower bound", i + 1)));
            }
        }
        Ok(Grid { dims, lo, hi })
    }

    pub fn len(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn spacing(&self) -> [f64; 3] {
        core::array::from_fn(|i| if self.dims[i] > 1 { (self.hi[i] - self.lo[i]) / (self.dims[i] - 1) as f64 } else { 0.0 })
    }

    pub fn point(&self, k: usize) -> Point3 {
        let [nx, ny, _] = self.dims;
        let idx = [k % nx, (k / nx) % ny, k / (nx * ny)];
        let h = self.spacing();
        Point3::new(self.lo[0] + idx[0] as f64 * h[0], self.lo[1] + idx[1] as f64 * h[1], self.lo[2] + idx[2] as f64 * h[2])
    }
}

/// Field CSV; masked (`None`) points are left out.
pub fn field_csv(t: f64, grid: &Grid, samples: &[Option<FlowSample>]) -> String {
    let mut s = String::with_capacity(64 * samples.len());
    s.push_str(FIELD_CSV_HEADER);
    s.push('\n');
    for (k, smp) in samples.iter().enumerate() {
        let Some(v) = smp else { continue };
        let x = grid.point(k);
        let _ = writeln!(
            s,
            "{t:?},{:?},{:?},{:?},{:?},{:?},{:?},{:?},{:?},{:?},{:?}",
            x[0], x[1], x[2], v.u[0], v.u[1], v.u[2], v.p, v.w[0], v.w[1], v.w[2]
        );
    }
    s
}

/// Legacy ASCII structured-points VTK. Masked points carry zeros and
/// `mask = 0`.
pub fn field_vtk(t: f64, grid: &Grid, samples: &[Option<FlowSample>]) -> String {
    let mut s = String::with_capacity(96 * samples.len());
    let h = grid.spacing();
    let spacing: [f64; 3] = core::array::from_fn(|i| if grid.dims[i] > 1 { h[i] } else { 1.0 });
    let _ = writeln!(s, "# vtk DataFile Version 3.0");
    let _ = writeln!(s, "beltrami field t={t:?}");
    let _ = writeln!(s, "ASCII");
    let _ = writeln!(s, "DATASET STRUCTURED_POINTS");
    let _ = writeln!(s, "DIMENSIONS {} {} {}", grid.dims[0], grid.dims[1], grid.dims[2]);
    let _ = writeln!(s, "ORIGIN {:?} {:?} {:?}", grid.lo[0], grid.lo[1], grid.lo[2]);
    let _ = writeln!(s, "SPACING {:?} {:?} {:?}", spacing[0], spacing[1], spacing[2]);
    let _ = writeln!(s, "POINT_DATA {}", samples.len());
    let zero = FlowSample::default();
    let get = |k: usize| samples[k].as_ref().unwrap_or(&zero);
    let _ = writeln!(s, "VECTORS velocity double");
    for k in 0..samples.len() {
        let u = get(k).u;
        let _ = writeln!(s, "{:?} {:?} {:?}", u[0], u[1], u[2]);
    }
    let _ = writeln!(s, "SCALARS pressure double 1");
    let _ = writeln!(s, "LOOKUP_TABLE default");
    for k in 0..samples.len() {
        let _ = writeln!(s, "{:?}", get(k).p);
    }
    let _ = writeln!(s, "VECTORS vorticity double");
    for k in 0..samples.len() {
        let w = get(k).w;
        let _ = writeln!(s, "{:?} {:?} {:?}", w[0], w[1], w[2]);
    }
    let _ = writeln!(s, "SCALARS mask int 1");
    let _ = writeln!(s, "LOOKUP_TABLE default");
    for smp in samples {
        let _ = writeln!(s, "{}", u8::from(smp.is_some()));
    }
    s
}
