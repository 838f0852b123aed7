use std::f64::consts::{PI, TAU};
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use super::svg::render_svg;
use super::Format;
use crate::analytic::{antiderivative_continuous, speed_from_angle, theta_density, SpeedProfile};
use crate::dynamics::format_f64;

/// One sampled curve `value(theta)` on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub name: &'static str,
    pub eps: f64,
    pub theta: Vec<f64>,
    pub value: Vec<f64>,
}

fn grid(end: f64, samples: usize) -> Vec<f64> {
    let last = (samples - 1) as f64;
    (0..samples).map(|i| end * i as f64 / last).collect()
}

/// The three curves of one eccentricity: the angular density and the
/// continuous time law on `[0, 3 pi]`, the speed (with `C / p = 1`) on
/// `[0, 2 pi]`.
pub fn figure_curves(eps: f64, samples: usize) -> [Curve; 3] {
    let wide = grid(3.0 * PI, samples);
    let full = grid(TAU, samples);
    let profile = SpeedProfile::new(eps, 1.0).expect("eps validated by caller");
    [
        Curve {
            name: "theta_density",
            eps,
            value: wide.iter().map(|&t| theta_density(t, eps)).collect(),
            theta: wide.clone(),
        },
        Curve {
            name: "time_law",
            eps,
            value: wide.iter().map(|&t| antiderivative_continuous(t, eps)).collect(),
            theta: wide,
        },
        Curve {
            name: "speed",
            eps,
            value: full.iter().map(|&t| speed_from_angle(t, &profile)).collect(),
            theta: full,
        },
    ]
}

/// `<curve>_<eps>.<ext>`, e.g. `time_law_0.3.csv`.
pub fn figure_file_name(curve: &str, eps: f64, format: Format) -> String {
    let ext = match format {
        Format::Csv => "csv",
        Format::Svg => "svg",
    };
    format!("{curve}_{eps}.{ext}")
}

fn write_csv<W: Write>(curve: &Curve, mut out: W) -> io::Result<()> {
    writeln!(out, "theta,value")?;
    for (t, v) in curve.theta.iter().zip(&curve.value) {
        writeln!(out, "{},{}", format_f64(*t), format_f64(*v))?;
    }
    Ok(())
}

pub(super) fn write_figures(eps: f64, samples: usize, format: Format, dir: &Path) -> io::Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    for curve in figure_curves(eps, samples) {
        let path = dir.join(figure_file_name(curve.name, eps, format));
        let mut out = BufWriter::new(File::create(&path)?);
        match format {
            Format::Csv => write_csv(&curve, &mut out)?,
            Format::Svg => out.write_all(render_svg(&curve).as_bytes())?,
        }
        out.flush()?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints() {
        let g = grid(3.0 * PI, 7);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[6], 3.0 * PI);
    }

    #[test]
    fn density_extrema_on_grid() {
        let [density, time_law, speed] = figure_curves(0.3, 1001);
        let max = density.value.iter().cloned().fold(f64::MIN, f64::max);
        let min = density.value.iter().cloned().fold(f64::MAX, f64::min);
        assert!((max - 1.0 / 0.49).abs() < 1e-12);
        assert!((min - 1.0 / 1.69).abs() < 1e-5);
        assert!(time_law.value.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(*speed.theta.last().unwrap(), TAU);
    }

    #[test]
    fn file_names() {
        assert_eq!(figure_file_name("time_law", 0.3, Format::Csv), "time_law_0.3.csv");
        assert_eq!(figure_file_name("speed", 0.0, Format::Svg), "speed_0.svg");
    }
}
