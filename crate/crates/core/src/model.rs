//! Step-weight tables: parsing, validation, and pattern classification.

use std::fmt;

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, qi, to_f64, Q};

/// The nine steps in row-major order: `(i, j)` for `i` then `j` in `-1, 0, 1`.
pub const STEPS: [(i8, i8); 9] = [(-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 0), (0, 1), (1, -1), (1, 0), (1, 1)];

/// A validated table of step weights `d(i, j)` summing to one.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightTable {
    d: [[Q; 3]; 3],
}

impl WeightTable {
    /// Validates raw non-negative weights and rescales them to sum 1.
    pub fn new(raw: [[Q; 3]; 3]) -> Result<Self> {
        let mut total = Q::zero();
        let mut moving = false;
        for (i, j) in STEPS {
            let v = &raw[(i + 1) as usize][(j + 1) as usize];
            if v.is_negative() {
                return Err(Error::NegativeWeight { i, j });
            }
            if (i, j) != (0, 0) && !v.is_zero() {
                moving = true;
            }
            total += v;
        }
        if !moving {
            return Err(Error::AllZeroWeights);
        }
        let d = raw.map(|row| row.map(|v| v / &total));
        Ok(WeightTable { d })
    }

    /// Builds a table from `(i, j, raw weight)` triples; unlisted steps are 0.
    pub fn from_steps(steps: &[(i8, i8, Q)]) -> Result<Self> {
        let mut raw: [[Q; 3]; 3] = Default::default();
        for (i, j, v) in steps {
            check_step(*i, *j)?;
            raw[(i + 1) as usize][(j + 1) as usize] += v;
        }
        Self::new(raw)
    }

    /// Shorthand for integer raw weights.
    pub fn from_int_steps(steps: &[(i8, i8, i64)]) -> Result<Self> {
        let v: Vec<_> = steps.iter().map(|&(i, j, n)| (i, j, qi(n))).collect();
        Self::from_steps(&v)
    }

    pub fn get(&self, i: i8, j: i8) -> &Q {
        &self.d[(i + 1) as usize][(j + 1) as usize]
    }

    pub fn getf(&self, i: i8, j: i8) -> f64 {
        to_f64(self.get(i, j))
    }

    pub fn is_zero(&self, i: i8, j: i8) -> bool {
        self.get(i, j).is_zero()
    }

    /// The table with the roles of the two coordinates exchanged.
    pub fn transposed(&self) -> Self {
        let mut d: [[Q; 3]; 3] = Default::default();
        for (i, j) in STEPS {
            d[(j + 1) as usize][(i + 1) as usize] = self.get(i, j).clone();
        }
        WeightTable { d }
    }

    /// Mean step `(Σ i·d(i,j), Σ j·d(i,j))`.
    pub fn drift(&self) -> (Q, Q) {
        let mut dx = Q::zero();
        let mut dy = Q::zero();
        for (i, j) in STEPS {
            dx += self.get(i, j) * qi(i as i64);
            dy += self.get(i, j) * qi(j as i64);
        }
        (dx, dy)
    }

    /// Steps with nonzero weight, excluding the stationary step.
    pub fn support(&self) -> Vec<(i8, i8)> {
        STEPS.iter().copied().filter(|&(i, j)| (i, j) != (0, 0) && !self.is_zero(i, j)).collect()
    }

    pub fn has_stationary_weight(&self) -> bool {
        !self.is_zero(0, 0)
    }

    /// Canonical document: all nine keys in row-major order, reduced fractions.
    pub fn to_json(&self) -> String {
        let body: Vec<String> =
            STEPS.iter().map(|&(i, j)| format!("\"d{i},{j}\":\"{}\"", format_rational(self.get(i, j)))).collect();
        format!("{{{}}}", body.join(","))
    }

    pub fn entries(&self) -> Vec<(String, String)> {
        STEPS.iter().map(|&(i, j)| (format!("d{i},{j}"), format_rational(self.get(i, j)))).collect()
    }
}

impl fmt::Display for WeightTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json())
    }
}

fn check_step(i: i8, j: i8) -> Result<()> {
    if (-1..=1).contains(&i) && (-1..=1).contains(&j) {
        Ok(())
    } else {
        Err(Error::Document(format!("step ({i},{j}) is not a small step")))
    }
}

fn parse_key(key: &str) -> Option<(i8, i8)> {
    let (i, j) = key.strip_prefix('d')?.split_once(',')?;
    let i: i8 = i.parse().ok()?;
    let j: i8 = j.parse().ok()?;
    check_step(i, j).ok()?;
    // reject spellings like "d+1,0" or "d01,0" so keys stay canonical
    (format!("d{i},{j}") == key).then_some((i, j))
}

/// Parses a JSON model document of the form `{"d-1,0": "1/3", "d1,1": 2, ...}`.
pub fn parse_model(text: &str) -> Result<WeightTable> {
    let doc: Value = serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))?;
    let obj = doc.as_object().ok_or_else(|| Error::Document("expected a JSON object".into()))?;
    let mut raw: [[Q; 3]; 3] = Default::default();
    for (key, value) in obj {
        let (i, j) = parse_key(key).ok_or_else(|| Error::Document(format!("unknown key {key:?}")))?;
        let v = match value {
            Value::String(s) => parse_rational(s)?,
            Value::Number(n) => match n.as_i64() {
                Some(k) => qi(k),
                None => match n.as_u64() {
                    Some(k) => Q::from_integer(k.into()),
                    None => return Err(Error::MalformedRational(n.to_string())),
                },
            },
            other => return Err(Error::MalformedRational(other.to_string())),
        };
        raw[(i + 1) as usize][(j + 1) as usize] = v;
    }
    WeightTable::new(raw)
}

/// The eight non-stationary directions in counter-clockwise order from east.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    E,
    NE,
    N,
    NW,
    W,
    SW,
    S,
    SE,
}

impl Direction {
    pub const CYCLE: [Direction; 8] = [
        Direction::E,
        Direction::NE,
        Direction::N,
        Direction::NW,
        Direction::W,
        Direction::SW,
        Direction::S,
        Direction::SE,
    ];

    pub fn step(self) -> (i8, i8) {
        match self {
            Direction::E => (1, 0),
            Direction::NE => (1, 1),
            Direction::N => (0, 1),
            Direction::NW => (-1, 1),
            Direction::W => (-1, 0),
            Direction::SW => (-1, -1),
            Direction::S => (0, -1),
            Direction::SE => (1, -1),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DegenerateCase {
    /// Support inside {NE, SW} or inside {NW, SE} (plus the stationary step).
    DiagonalOrAntidiagonal,
    /// No step with x-component +1, or none with x-component -1.
    HalfSpaceX,
    /// No step with y-component +1, or none with y-component -1.
    HalfSpaceY,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PatternClass {
    NonSingular,
    Degenerate(DegenerateCase),
    /// Three consecutive directions carry no weight; the field is the middle
    /// one of the empty window.
    GenusZeroConfig(Direction),
}

pub fn pattern_class(w: &WeightTable) -> PatternClass {
    let support = w.support();
    let within = |set: &[(i8, i8)]| support.iter().all(|s| set.contains(s));
    if within(&[(1, 1), (-1, -1)]) || within(&[(-1, 1), (1, -1)]) {
        return PatternClass::Degenerate(DegenerateCase::DiagonalOrAntidiagonal);
    }
    for side in [-1, 1] {
        if (-1..=1).all(|j| w.is_zero(side, j)) {
            return PatternClass::Degenerate(DegenerateCase::HalfSpaceX);
        }
    }
    for side in [-1, 1] {
        if (-1..=1).all(|i| w.is_zero(i, side)) {
            return PatternClass::Degenerate(DegenerateCase::HalfSpaceY);
        }
    }
    let empty = |d: Direction| {
        let (i, j) = d.step();
        w.is_zero(i, j)
    };
    let cyc = Direction::CYCLE;
    for k in 0..8 {
        if (0..3).all(|o| empty(cyc[(k + o) % 8])) {
            return PatternClass::GenusZeroConfig(cyc[(k + 1) % 8]);
        }
    }
    PatternClass::NonSingular
}

/// Models that recur in tests, examples and documentation.
pub mod named {
    use super::WeightTable;

    fn table(steps: &[(i8, i8, i64)]) -> WeightTable {
        WeightTable::from_int_steps(steps).expect("valid built-in model")
    }

    pub fn simple_walk() -> WeightTable {
        table(&[(1, 0, 1), (-1, 0, 1), (0, 1, 1), (0, -1, 1)])
    }

    pub fn kreweras() -> WeightTable {
        table(&[(-1, 0, 1), (0, -1, 1), (1, 1, 1)])
    }

    pub fn gessel() -> WeightTable {
        table(&[(1, 0, 1), (1, 1, 1), (-1, 0, 1), (-1, -1, 1)])
    }

    /// NW weight 1/2, W, S and NE weight 1/6 each.
    pub fn nw_heavy() -> WeightTable {
        table(&[(-1, 1, 3), (-1, 0, 1), (0, -1, 1), (1, 1, 1)])
    }

    /// W, E, S, NW weight 1/6 each, N weight 1/3.
    pub fn north_heavy() -> WeightTable {
        table(&[(-1, 0, 1), (1, 0, 1), (0, -1, 1), (-1, 1, 1), (0, 1, 2)])
    }

    /// NW weight 1/3, E, SE, W, S weight 1/6 each.
    pub fn no_north() -> WeightTable {
        table(&[(-1, 1, 2), (1, 0, 1), (1, -1, 1), (-1, 0, 1), (0, -1, 1)])
    }

    /// NW, NE, SE, S weight 1/4 each.
    pub fn four_corner() -> WeightTable {
        table(&[(-1, 1, 1), (1, 1, 1), (1, -1, 1), (0, -1, 1)])
    }

    /// The three weighted models with a group of order 10.
    pub fn order_ten() -> [WeightTable; 3] {
        [
            table(&[(-1, 1, 1), (1, 1, 1), (1, -1, 1), (-1, 0, 1), (0, -1, 1), (1, 0, 2), (0, 1, 2)]),
            table(&[(-1, 1, 1), (-1, -1, 1), (1, 0, 1), (1, -1, 1), (0, 1, 1), (-1, 0, 2), (0, -1, 2)]),
            table(&[(-1, 1, 1), (1, 1, 1), (1, 0, 1), (-1, -1, 1), (0, -1, 1), (-1, 0, 2), (0, 1, 2)]),
        ]
    }

    /// East drift 3/8, north drift 1/8.
    pub fn biased() -> WeightTable {
        table(&[(1, 0, 4), (0, 1, 2), (-1, 0, 1), (0, -1, 1)])
    }
}
