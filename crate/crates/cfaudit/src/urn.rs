//! Urn fixtures as one-liners.
//!
//! An urn spec like `1W2B,2W1B;draws=2;replace=false` describes a family of
//! urns (white/black counts per urn, uniform prior over urns), a number of
//! sequential draws, and whether draws are replaced. [`UrnSpec::to_model`]
//! expands it to an explicit joint over the variables `urn` (outcomes
//! `1..=k`) and `draw1..drawN` (outcomes `W`, `B`).

use std::fmt;

use thiserror::Error;

use crate::joint::{JointError, JointModel, Variable};

#[derive(Debug, Error, PartialEq)]
pub enum UrnSpecError {
    #[error("empty urn list")]
    NoUrns,
    #[error("malformed urn composition '{0}', expected like '1W2B'")]
    BadComposition(String),
    #[error("malformed option '{0}', expected 'draws=N' or 'replace=true|false'")]
    BadOption(String),
    #[error("draws must be at least 1")]
    NoDraws,
    #[error("urn {urn} holds {balls} balls but {draws} draws without replacement were requested")]
    NotEnoughBalls {
        urn: usize,
        balls: usize,
        draws: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UrnComposition {
    pub white: usize,
    pub black: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UrnSpec {
    pub urns: Vec<UrnComposition>,
    pub draws: usize,
    pub replace: bool,
}

impl UrnSpec {
    pub fn new(
        urns: Vec<UrnComposition>,
        draws: usize,
        replace: bool,
    ) -> Result<Self, UrnSpecError> {
        if urns.is_empty() {
            return Err(UrnSpecError::NoUrns);
        }
        if draws == 0 {
            return Err(UrnSpecError::NoDraws);
        }
        if !replace {
            for (i, urn) in urns.iter().enumerate() {
                let balls = urn.white + urn.black;
                if balls < draws {
                    return Err(UrnSpecError::NotEnoughBalls {
                        urn: i + 1,
                        balls,
                        draws,
                    });
                }
            }
        }
        Ok(UrnSpec {
            urns,
            draws,
            replace,
        })
    }

    /// Parses `"<w>W<b>B,...;draws=N;replace=true|false"`. Draws default to 2
    /// and replacement to true when the options are omitted.
    pub fn parse(spec: &str) -> Result<Self, UrnSpecError> {
        let mut sections = spec.split(';');
        let urn_list = sections.next().unwrap_or("");
        let mut urns = Vec::new();
        for piece in urn_list.split(',').filter(|p| !p.trim().is_empty()) {
            urns.push(parse_composition(piece.trim())?);
        }
        let mut draws = 2usize;
        let mut replace = true;
        for option in sections {
            let option = option.trim();
            if option.is_empty() {
                continue;
            }
            match option.split_once('=') {
                Some(("draws", n)) => {
                    draws = n
                        .trim()
                        .parse()
                        .map_err(|_| UrnSpecError::BadOption(option.to_string()))?;
                }
                Some(("replace", flag)) => {
                    replace = match flag.trim() {
                        "true" => true,
                        "false" => false,
                        _ => return Err(UrnSpecError::BadOption(option.to_string())),
                    };
                }
                _ => return Err(UrnSpecError::BadOption(option.to_string())),
            }
        }
        UrnSpec::new(urns, draws, replace)
    }

    /// Expands the spec into an explicit joint distribution. The weight of a
    /// full assignment is the uniform urn prior times the product of
    /// per-draw color probabilities along the sequence (hypergeometric when
    /// drawing without replacement).
    pub fn to_model(&self) -> Result<JointModel, JointError> {
        let mut variables = vec![Variable::new(
            "urn",
            (1..=self.urns.len()).map(|i| i.to_string()),
        )?];
        for d in 1..=self.draws {
            variables.push(Variable::new(format!("draw{d}"), ["W", "B"])?);
        }
        let prior = 1.0 / self.urns.len() as f64;
        let urns = self.urns.clone();
        let replace = self.replace;
        JointModel::from_fn(variables, move |assignment| {
            let urn = urns[assignment[0]];
            let (mut white, mut black) = (urn.white as f64, urn.black as f64);
            let mut weight = prior;
            for &color in &assignment[1..] {
                let total = white + black;
                if total <= 0.0 {
                    return 0.0;
                }
                let drawn_white = color == 0;
                let p = if drawn_white {
                    white / total
                } else {
                    black / total
                };
                weight *= p;
                if !replace {
                    if drawn_white {
                        white -= 1.0;
                    } else {
                        black -= 1.0;
                    }
                }
            }
            weight
        })
    }
}

impl fmt::Display for UrnSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let urns: Vec<String> = self
            .urns
            .iter()
            .map(|u| format!("{}W{}B", u.white, u.black))
            .collect();
        write!(
            f,
            "{};draws={};replace={}",
            urns.join(","),
            self.draws,
            self.replace
        )
    }
}

fn parse_composition(piece: &str) -> Result<UrnComposition, UrnSpecError> {
    let bad = || UrnSpecError::BadComposition(piece.to_string());
    let upper = piece.to_ascii_uppercase();
    let w_pos = upper.find('W').ok_or_else(bad)?;
    let b_pos = upper.find('B').ok_or_else(bad)?;
    if b_pos != upper.len() - 1 || w_pos >= b_pos {
        return Err(bad());
    }
    let white = upper[..w_pos].parse().map_err(|_| bad())?;
    let black = upper[w_pos + 1..b_pos].parse().map_err(|_| bad())?;
    Ok(UrnComposition { white, black })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::joint::Event;

    #[test]
    fn parses_the_three_fixtures() {
        let two = UrnSpec::parse("1W2B,2W1B;draws=2;replace=true").unwrap();
        assert_eq!(two.urns.len(), 2);
        assert!(two.replace);

        let three = UrnSpec::parse("1W1B,2W0B,0W2B;draws=2;replace=true").unwrap();
        assert_eq!(three.urns[1], UrnComposition { white: 2, black: 0 });

        let without = UrnSpec::parse("1W2B,2W1B;draws=2;replace=false").unwrap();
        assert!(!without.replace);
    }

    #[test]
    fn defaults_and_errors() {
        let spec = UrnSpec::parse("1W2B,2W1B").unwrap();
        assert_eq!(spec.draws, 2);
        assert!(spec.replace);
        assert_eq!(UrnSpec::parse(""), Err(UrnSpecError::NoUrns));
        assert!(matches!(
            UrnSpec::parse("1W2B;draws=zero"),
            Err(UrnSpecError::BadOption(_))
        ));
        assert!(matches!(
            UrnSpec::parse("2B1W"),
            Err(UrnSpecError::BadComposition(_))
        ));
        assert_eq!(
            UrnSpec::parse("1W0B;draws=2;replace=false"),
            Err(UrnSpecError::NotEnoughBalls {
                urn: 1,
                balls: 1,
                draws: 2
            })
        );
    }

    #[test]
    fn with_replacement_model_matches_hand_numbers() {
        let m = UrnSpec::parse("1W2B,2W1B;draws=1;replace=true")
            .unwrap()
            .to_model()
            .unwrap();
        let w = Event::var_eq("draw1", "W");
        let h1 = Event::var_eq("urn", "1");
        assert!((m.conditional(&w, &h1).unwrap() - 1.0 / 3.0).abs() < 1e-12);
        assert!((m.probability(&w).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn without_replacement_uses_hypergeometric_paths() {
        let m = UrnSpec::parse("1W2B,2W1B;draws=2;replace=false")
            .unwrap()
            .to_model()
            .unwrap();
        // Urn 1 (1W2B): both draws black has probability (2/3)(1/2) = 1/3.
        let both_black = Event::and(vec![
            Event::var_eq("urn", "1"),
            Event::var_eq("draw1", "B"),
            Event::var_eq("draw2", "B"),
        ]);
        assert!((m.probability(&both_black).unwrap() - 0.5 * (2.0 / 3.0) * 0.5).abs() < 1e-12);
        // Drawing two whites from urn 1 is impossible (only one white ball).
        let both_white = Event::and(vec![
            Event::var_eq("urn", "1"),
            Event::var_eq("draw1", "W"),
            Event::var_eq("draw2", "W"),
        ]);
        assert_eq!(m.probability(&both_white).unwrap(), 0.0);
    }

    #[test]
    fn display_round_trips() {
        for text in [
            "1W2B,2W1B;draws=2;replace=true",
            "1W1B,2W0B,0W2B;draws=3;replace=true",
        ] {
            let spec = UrnSpec::parse(text).unwrap();
            assert_eq!(UrnSpec::parse(&spec.to_string()).unwrap(), spec);
        }
    }
}
