use clap::ValueEnum;

use super::{Axis, Scale, Settings, Table};
use crate::axioms::{action_identity, sigma_weight, WeightFunction};
use crate::error::Result;
use crate::observables::{self, formal, EvalMode, Observable};
use crate::states::{ModelParams, StateLabel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    Sigma,
    Mandel,
    G2,
    QuadDisp,
    Amp2Disp,
    Action,
}

impl Quantity {
    fn name(self) -> &'static str {
        match self {
            Self::Sigma => "sigma",
            Self::Mandel => "mandel",
            Self::G2 => "g2",
            Self::QuadDisp => "quad_disp",
            Self::Amp2Disp => "amp2_disp",
            Self::Action => "action",
        }
    }

    /// The observable behind a quantity that has formal and exact forms.
    fn observable(self) -> Option<Observable> {
        match self {
            Self::Mandel => Some(Observable::Mandel),
            Self::G2 => Some(Observable::G2),
            Self::QuadDisp => Some(Observable::QuadratureDispersion),
            Self::Amp2Disp => Some(Observable::AmpSquaredDispersion),
            Self::Sigma | Self::Action => None,
        }
    }
}

/// One sweep of a quantity against `s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub quantity: Quantity,
    pub axis: Axis,
    pub params: ModelParams,
    pub m: u32,
    pub gamma: f64,
    pub mode: EvalMode,
}

impl SweepSpec {
    /// Defaults: `α = 10`, `ε = 0.07`, `m = 0`, log axis over `[1e-2, 1e2]`
    /// with 400 points, exact mode.
    pub fn from_settings(quantity: Quantity, settings: &Settings) -> Result<Self> {
        let axis = Axis::new(
            settings.s_min.unwrap_or(1e-2),
            settings.s_max.unwrap_or(1e2),
            settings.points.unwrap_or(400),
            settings.scale.unwrap_or(Scale::Log),
        )?;
        Ok(Self {
            quantity,
            axis,
            params: settings.params(10.0, 0.07)?,
            m: settings.m.unwrap_or(0),
            gamma: settings.gamma.unwrap_or(0.0),
            mode: settings.mode.unwrap_or(EvalMode::Exact),
        })
    }
}

/// Columns: `s,<quantity>` for `sigma` and `action`; `s,formal` in formal
/// mode; `s,formal,exact,correction_ratio` in exact mode.
pub fn sweep_table(spec: &SweepSpec) -> Result<Table> {
    let p = &spec.params;
    let header: Vec<String> = match (spec.quantity.observable(), spec.mode) {
        (None, _) => vec!["s", spec.quantity.name()],
        (Some(_), EvalMode::Formal) => vec!["s", "formal"],
        (Some(_), EvalMode::Exact) => vec!["s", "formal", "exact", "correction_ratio"],
    }
    .into_iter()
    .map(str::to_owned)
    .collect();

    let rows = spec
        .axis
        .values()
        .into_iter()
        .map(|s| -> Result<Vec<f64>> {
            let value = match spec.quantity {
                Quantity::Sigma => vec![sigma_weight(&WeightFunction::from_params(p, spec.m), s)?],
                Quantity::Action => vec![action_identity(p, spec.m, s)?],
                q => {
                    // formal values take s itself so that they match figure columns bit for bit
                    let obs = q.observable().expect("observable quantity");
                    let formal = formal::evaluate(p, s, spec.m, obs);
                    match spec.mode {
                        EvalMode::Formal => vec![formal],
                        EvalMode::Exact => {
                            let label = StateLabel::new(s, spec.gamma, spec.m)?;
                            let exact = observables::evaluate(p, &label, obs, EvalMode::Exact)?;
                            vec![formal, exact, exact / formal]
                        }
                    }
                }
            };
            Ok(std::iter::once(s).chain(value).collect())
        })
        .collect::<Result<_>>()?;
    Ok(Table { header, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(quantity: Quantity, mode: EvalMode) -> SweepSpec {
        let settings = Settings {
            points: Some(50),
            mode: Some(mode),
            ..Settings::default()
        };
        SweepSpec::from_settings(quantity, &settings).unwrap()
    }

    #[test]
    fn column_layout() {
        assert_eq!(
            sweep_table(&spec(Quantity::Sigma, EvalMode::Exact))
                .unwrap()
                .header,
            ["s", "sigma"]
        );
        assert_eq!(
            sweep_table(&spec(Quantity::G2, EvalMode::Formal))
                .unwrap()
                .header,
            ["s", "formal"]
        );
        assert_eq!(
            sweep_table(&spec(Quantity::Mandel, EvalMode::Exact))
                .unwrap()
                .header,
            ["s", "formal", "exact", "correction_ratio"]
        );
    }

    #[test]
    fn action_monotone_and_g2_flat() {
        let t = sweep_table(&spec(Quantity::Action, EvalMode::Exact)).unwrap();
        let j = t.column("action").unwrap();
        assert!(j.windows(2).all(|w| w[1] > w[0]));
        let t = sweep_table(&spec(Quantity::G2, EvalMode::Exact)).unwrap();
        assert!(t
            .column("formal")
            .unwrap()
            .iter()
            .all(|&g| (g - 1.0).abs() < 1e-14));
    }
}
