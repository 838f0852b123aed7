//! Orbital eccentricities of the eight planets.

/// One row of the planet table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanetRecord {
    pub name: &'static str,
    pub eps: f64,
    /// The eccentricity exactly as tabulated.
    pub eps_text: &'static str,
}

macro_rules! planet {
    ($name:literal, $eps:literal) => {
        PlanetRecord { name: $name, eps: $eps, eps_text: stringify!($eps) }
    };
}

static PLANETS: [PlanetRecord; 8] = [
    planet!("Mercury", 0.20563069),
    planet!("Venus", 0.00677323),
    planet!("Earth", 0.01671022),
    planet!("Mars", 0.09341233),
    planet!("Jupiter", 0.04839266),
    planet!("Saturn", 0.05415060),
    planet!("Uranus", 0.04716771),
    planet!("Neptune", 0.00858587),
];

/// The eight planets, Mercury to Neptune.
pub fn load_planets() -> &'static [PlanetRecord] {
    &PLANETS
}

/// Ratio of the speed at the near apsis to the speed at the far apsis,
/// `(1 + eps) / (1 - eps)`.
pub fn planet_speed_ratio(rec: &PlanetRecord) -> f64 {
    (1.0 + rec.eps) / (1.0 - rec.eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{speed_from_angle, SpeedProfile};
    use std::f64::consts::PI;

    #[test]
    fn table_rows() {
        let planets = load_planets();
        assert_eq!(planets.len(), 8);
        assert_eq!((planets[0].name, planets[0].eps), ("Mercury", 0.20563069));
        assert_eq!((planets[2].name, planets[2].eps), ("Earth", 0.01671022));
        assert_eq!((planets[7].name, planets[7].eps), ("Neptune", 0.00858587));
        assert_eq!(planets[5].eps_text, "0.05415060");
        for p in planets {
            assert_eq!(p.eps_text.parse::<f64>().unwrap(), p.eps);
        }
    }

    #[test]
    fn names_unique_and_small_eccentricities() {
        let planets = load_planets();
        for (i, a) in planets.iter().enumerate() {
            for b in &planets[i + 1..] {
                assert_ne!(a.name, b.name);
            }
            assert!(a.eps < 0.21);
            assert_eq!(a.eps < 0.1, a.name != "Mercury");
        }
    }

    #[test]
    fn speed_ratio_matches_speed_profile() {
        let oracle = |eps: f64| {
            let profile = SpeedProfile::new(eps, 1.0).unwrap();
            speed_from_angle(PI, &profile) / speed_from_angle(0.0, &profile)
        };
        let venus = &load_planets()[1];
        assert!((planet_speed_ratio(venus) - oracle(venus.eps)).abs() < 1e-12);
        assert!((planet_speed_ratio(venus) - 1.01364).abs() < 1e-5);
        let mercury = &load_planets()[0];
        assert!((planet_speed_ratio(mercury) - oracle(mercury.eps)).abs() < 1e-12);
        assert!((planet_speed_ratio(mercury) - 1.51772).abs() < 1e-5);
        let circle = PlanetRecord { name: "x", eps: 0.0, eps_text: "0" };
        assert_eq!(planet_speed_ratio(&circle), 1.0);
    }

    #[test]
    fn speed_ratio_increases_with_eccentricity() {
        let mut rows: Vec<_> = load_planets().to_vec();
        rows.sort_by(|a, b| a.eps.total_cmp(&b.eps));
        for w in rows.windows(2) {
            assert!(planet_speed_ratio(&w[0]) < planet_speed_ratio(&w[1]));
        }
    }
}
