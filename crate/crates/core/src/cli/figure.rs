use super::{Axis, Scale, Settings, Table};
use crate::axioms::{sigma_weight, WeightFunction};
use crate::error::{invalid, Result};
use crate::observables::formal;
use crate::states::ModelParams;

/// Figure number, 1 to 6.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FigureId(u8);

impl FigureId {
    pub fn new(id: u8) -> Result<Self> {
        if (1..=6).contains(&id) {
            Ok(Self(id))
        } else {
            Err(invalid(
                "id",
                format!("figures are numbered 1 to 6, got {id}"),
            ))
        }
    }

    pub fn get(self) -> u8 {
        self.0
    }
}

/// Which parameter varies from column to column.
#[derive(Debug, Clone, Copy)]
enum Family {
    M(&'static [u32]),
    Epsilon(&'static [f64]),
    Alpha(&'static [f64]),
}

#[derive(Debug, Clone, Copy)]
enum Curve {
    Sigma,
    Mandel,
}

/// Fixed parameters, the varied family and the default axis of one figure.
struct Recipe {
    curve: Curve,
    alpha: f64,
    epsilon: f64,
    m: u32,
    family: Family,
    axis: Axis,
}

const DEFAULT_POINTS: usize = 400;

fn linear_axis() -> Axis {
    // s_i = 20·i/400 for i = 1..=400; s = 0 is the analytic limit Q = -1
    Axis {
        s_min: 20.0 / DEFAULT_POINTS as f64,
        s_max: 20.0,
        points: DEFAULT_POINTS,
        scale: Scale::Linear,
    }
}

fn recipe(id: FigureId) -> Recipe {
    let log_axis = |s_max: f64| Axis {
        s_min: 1e-2,
        s_max,
        points: DEFAULT_POINTS,
        scale: Scale::Log,
    };
    match id.get() {
        1 => Recipe {
            curve: Curve::Sigma,
            alpha: 10.0,
            epsilon: 0.07,
            m: 0,
            family: Family::M(&[1, 3, 12]),
            axis: log_axis(1e2),
        },
        2 => Recipe {
            curve: Curve::Mandel,
            alpha: 10.0,
            epsilon: 0.07,
            m: 0,
            family: Family::Epsilon(&[0.01, 0.07, 0.15]),
            axis: linear_axis(),
        },
        3 => Recipe {
            curve: Curve::Mandel,
            alpha: 10.0,
            epsilon: 0.07,
            m: 0,
            family: Family::Alpha(&[10.0, 15.0, 20.0]),
            axis: linear_axis(),
        },
        4 => Recipe {
            curve: Curve::Mandel,
            alpha: 3.0,
            epsilon: 0.07,
            m: 2,
            family: Family::Epsilon(&[0.01, 0.07, 0.15]),
            axis: linear_axis(),
        },
        5 => Recipe {
            curve: Curve::Mandel,
            alpha: 3.0,
            epsilon: 0.07,
            m: 2,
            family: Family::Alpha(&[3.0, 5.0, 7.0]),
            axis: linear_axis(),
        },
        // the sign changes of Q for m = 2, 5, 7 lie near s ~ 1e9..1e11
        _ => Recipe {
            curve: Curve::Mandel,
            alpha: 3.0,
            epsilon: 0.07,
            m: 0,
            family: Family::M(&[2, 5, 7]),
            axis: log_axis(1e12),
        },
    }
}

/// Data table of figure `id`. Fixed parameters may be overridden through
/// `settings`; the varied one always takes the recipe values.
pub fn figure_table(id: FigureId, settings: &Settings) -> Result<Table> {
    let r = recipe(id);
    let axis = r.axis.with_overrides(settings)?;
    let base_alpha = settings.alpha.unwrap_or(r.alpha);
    let base_epsilon = settings.epsilon.unwrap_or(r.epsilon);
    let base_m = settings.m.unwrap_or(r.m);
    let omega = settings.omega.unwrap_or(1.0);

    let members: Vec<(String, ModelParams, u32)> = match r.family {
        Family::M(ms) => ms
            .iter()
            .map(|&m| {
                Ok((
                    format!("m={m}"),
                    ModelParams::new(base_alpha, base_epsilon, omega)?,
                    m,
                ))
            })
            .collect::<Result<_>>()?,
        Family::Epsilon(es) => es
            .iter()
            .map(|&e| {
                Ok((
                    format!("epsilon={e}"),
                    ModelParams::new(base_alpha, e, omega)?,
                    base_m,
                ))
            })
            .collect::<Result<_>>()?,
        Family::Alpha(alphas) => alphas
            .iter()
            .map(|&a| {
                Ok((
                    format!("alpha={a}"),
                    ModelParams::new(a, base_epsilon, omega)?,
                    base_m,
                ))
            })
            .collect::<Result<_>>()?,
    };

    let mut header = vec!["s".to_owned()];
    header.extend(members.iter().map(|(name, _, _)| name.clone()));
    let rows = axis
        .values()
        .into_iter()
        .map(|s| {
            let mut row = vec![s];
            for (_, p, m) in &members {
                row.push(match r.curve {
                    Curve::Sigma => sigma_weight(&WeightFunction::from_params(p, *m), s)?,
                    Curve::Mandel => formal::mandel_q(p, s, *m),
                });
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    Ok(Table { header, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn headers_and_shape() {
        let t = figure_table(FigureId::new(1).unwrap(), &Settings::default()).unwrap();
        assert_eq!(t.header, ["s", "m=1", "m=3", "m=12"]);
        assert_eq!(t.rows.len(), 400);
        let t = figure_table(FigureId::new(2).unwrap(), &Settings::default()).unwrap();
        assert_eq!(
            t.header,
            ["s", "epsilon=0.01", "epsilon=0.07", "epsilon=0.15"]
        );
        let t = figure_table(FigureId::new(5).unwrap(), &Settings::default()).unwrap();
        assert_eq!(t.header, ["s", "alpha=3", "alpha=5", "alpha=7"]);
        assert!(FigureId::new(0).is_err() && FigureId::new(7).is_err());
    }

    #[test]
    fn point_override() {
        let settings = Settings {
            points: Some(7),
            ..Settings::default()
        };
        let t = figure_table(FigureId::new(3).unwrap(), &settings).unwrap();
        assert_eq!(t.rows.len(), 7);
    }
}
