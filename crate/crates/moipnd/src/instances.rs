//! Instance plumbing: the text file format, a deterministic random instance
//! generator, point-set instances with a prescribed objective image, and the
//! brute-force oracle used to certify solver output.
//!
//! # Problem file format
//!
//! Line-oriented text, whitespace-separated tokens, `#` starts a comment,
//! blank lines are ignored:
//!
//! ```text
//! MOIP <num_vars> <num_constraints> <num_objectives>
//! <num_objectives lines: one integer objective row each>
//! <num_constraints lines: row coefficients, then one of "<=" ">=" "=", then rhs>
//! <num_vars lines: "<lower> <upper>" integer variable bounds>
//! ```
//!
//! Constraint coefficients and right-hand sides are rationals written as
//! `3`, `-7`, or `1/2`.
//!
//! # Nondominated-set format
//!
//! A header `ND <count> <k>` followed by one vector per line (`k` integers),
//! in ascending lexicographic order.

use std::fmt::Write as _;

use thiserror::Error;

use crate::model::{
    filter_nondominated, Constraint, ModelError, NDSet, ObjectiveVector, Problem, Rational, Sense,
};

/// Parameters of the random instance family: `rows` covering-style `>=`
/// constraints over `cols` binary variables, with every objective and
/// constraint coefficient drawn uniformly from `[1, coeff_max]`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct GeneratorConfig {
    /// Number of decision variables (binary).
    pub cols: usize,
    /// Number of constraints.
    pub rows: usize,
    /// Number of objectives.
    pub objectives: usize,
    /// Upper end of the uniform integer coefficient range `[1, coeff_max]`.
    pub coeff_max: i64,
    /// Seed; equal configurations generate identical instances.
    pub seed: u64,
}

/// What the brute-force oracle saw.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    /// The nondominated set of the full feasible objective image.
    pub nd: NDSet,
    /// How many points of the variable box were feasible.
    pub feasible_points_enumerated: u64,
    /// Number of distinct objective vectors among feasible points.
    pub image_size: usize,
}

/// A text-format violation, attributed to a 1-based input line.
/// Line 0 marks whole-file validation failures.
#[derive(Debug, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    /// 1-based line number (0 for whole-file errors).
    pub line: usize,
    /// Human-readable description.
    pub message: String,
}

impl ParseError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

/// Refusals of the brute-force oracle.
#[derive(Debug, Error)]
pub enum OracleError {
    /// The variable box holds more points than the caller allowed.
    #[error("variable box holds {required} points, over the oracle budget of {budget}")]
    BudgetExceeded {
        /// Points the box actually holds.
        required: u128,
        /// The caller's limit.
        budget: u64,
    },
}

/// Deterministic 64-bit generator (SplitMix64 steps), splittable into
/// independent streams so that coefficient groups can be drawn separately.
/// Instances are reproducible from the seed alone.
#[derive(Clone, Debug)]
pub struct StreamRng {
    state: u64,
}

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl StreamRng {
    /// Stream `stream` of the generator seeded with `seed`. Starting states
    /// pass through the output mixer so that streams of one seed do not run
    /// along shifted copies of the same sequence.
    pub fn new(seed: u64, stream: u64) -> Self {
        StreamRng {
            state: mix(seed ^ stream.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)),
        }
    }

    /// Next raw 64-bit draw.
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix(self.state)
    }

    /// Uniform integer in `[lo, hi]` (modulo draw; the ranges used here are
    /// tiny relative to 2^64, so the bias is negligible and determinism is
    /// what matters).
    pub fn uniform(&mut self, lo: i64, hi: i64) -> i64 {
        assert!(lo <= hi, "empty range");
        let span = (hi - lo) as u64 + 1;
        lo + (self.next_u64() % span) as i64
    }
}

/// Generates a random instance: binary variables, all-`>=` constraint rows
/// at 50% tightness (rhs is half the row sum, rounded half up), coefficients
/// uniform in `[1, coeff_max]`. The all-ones point always satisfies every
/// row, so generated instances are feasible by construction.
///
/// Stream 0 of the seed drives objective coefficients (row-major), stream 1
/// drives constraint coefficients (row-major).
pub fn generate_random(cfg: &GeneratorConfig) -> Result<Problem, ModelError> {
    assert!(
        cfg.cols >= 1 && cfg.rows >= 1 && cfg.objectives >= 1,
        "generator dimensions must be positive"
    );
    assert!(cfg.coeff_max >= 1, "coeff_max must be positive");
    let mut obj_rng = StreamRng::new(cfg.seed, 0);
    let objective_coeffs: Vec<Vec<i64>> = (0..cfg.objectives)
        .map(|_| (0..cfg.cols).map(|_| obj_rng.uniform(1, cfg.coeff_max)).collect())
        .collect();

    let mut con_rng = StreamRng::new(cfg.seed, 1);
    let constraints: Vec<Constraint> = (0..cfg.rows)
        .map(|_| {
            let coeffs: Vec<i64> = (0..cfg.cols).map(|_| con_rng.uniform(1, cfg.coeff_max)).collect();
            let row_sum: i64 = coeffs.iter().sum();
            // Half the row sum rounded half up; the average upper bound of
            // binary variables is 1, so no further scaling applies.
            let rhs = (row_sum + 1) / 2;
            debug_assert!(rhs <= row_sum, "all-ones point must stay feasible");
            Constraint::integral(&coeffs, Sense::Ge, rhs)
        })
        .collect();

    Problem::new(objective_coeffs, constraints, vec![(0, 1); cfg.cols])
}

/// Builds a selection instance whose feasible objective image is exactly the
/// given vectors: one binary variable per vector, a single constraint pinning
/// the selection to one variable, and objective columns equal to the vectors.
pub fn build_point_instance(vectors: &[ObjectiveVector]) -> Result<Problem, ModelError> {
    let first = vectors.first().ok_or(ModelError::Empty)?;
    let k = first.len();
    if k == 0 {
        return Err(ModelError::Empty);
    }
    for v in vectors {
        if v.len() != k {
            return Err(ModelError::MixedLengths {
                first: k,
                second: v.len(),
            });
        }
    }
    let n = vectors.len();
    let objective_coeffs: Vec<Vec<i64>> = (0..k)
        .map(|i| vectors.iter().map(|v| v.values()[i]).collect())
        .collect();
    let pick_one = Constraint::integral(&vec![1; n], Sense::Eq, 1);
    Problem::new(objective_coeffs, vec![pick_one], vec![(0, 1); n])
}

/// Enumerates every integer point of the variable box, keeps the feasible
/// ones, and filters their objective images down to the nondominated set.
///
/// Refuses (never truncates) if the box holds more than `budget` points.
/// Independent of the solver stack: feasibility and evaluation come straight
/// from [`Problem`].
pub fn brute_force_nd(p: &Problem, budget: u64) -> Result<OracleReport, OracleError> {
    let required = p.box_point_count();
    if required > budget as u128 {
        return Err(OracleError::BudgetExceeded { required, budget });
    }
    let bounds = p.var_bounds();
    let mut x: Vec<i64> = bounds.iter().map(|&(lo, _)| lo).collect();
    let mut feasible = 0u64;
    let mut image = std::collections::BTreeSet::new();
    'points: loop {
        if p.is_feasible(&x) {
            feasible += 1;
            image.insert(p.evaluate(&x));
        }
        for j in 0..x.len() {
            if x[j] < bounds[j].1 {
                x[j] += 1;
                continue 'points;
            }
            x[j] = bounds[j].0;
        }
        break;
    }
    let image_size = image.len();
    Ok(OracleReport {
        nd: filter_nondominated(image),
        feasible_points_enumerated: feasible,
        image_size,
    })
}

/// Parses the problem file format. Errors carry the offending line number.
pub fn parse_problem(text: &str) -> Result<Problem, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, raw)| {
            let body = raw.split('#').next().unwrap_or("");
            (i + 1, body.split_whitespace().collect::<Vec<&str>>())
        })
        .filter(|(_, tokens)| !tokens.is_empty());

    let (line, header) = lines
        .next()
        .ok_or_else(|| ParseError::new(0, "empty file"))?;
    if header.len() != 4 || header[0] != "MOIP" {
        return Err(ParseError::new(
            line,
            "expected header \"MOIP <num_vars> <num_constraints> <num_objectives>\"",
        ));
    }
    let n: usize = parse_token(line, header[1], "variable count")?;
    let m: usize = parse_token(line, header[2], "constraint count")?;
    let k: usize = parse_token(line, header[3], "objective count")?;
    if n == 0 || k == 0 {
        return Err(ParseError::new(
            line,
            "need at least one variable and one objective",
        ));
    }

    let mut objective_coeffs = Vec::with_capacity(k);
    for row in 0..k {
        let (line, tokens) = lines.next().ok_or_else(|| {
            ParseError::new(0, format!("missing objective row {} of {k}", row + 1))
        })?;
        if tokens.len() != n {
            return Err(ParseError::new(
                line,
                format!(
                    "expected {n} objective coefficients, found {}",
                    tokens.len()
                ),
            ));
        }
        let coeffs = tokens
            .iter()
            .map(|t| parse_token::<i64>(line, t, "integer objective coefficient"))
            .collect::<Result<Vec<_>, _>>()?;
        objective_coeffs.push(coeffs);
    }

    let mut constraints = Vec::with_capacity(m);
    for index in 0..m {
        let (line, tokens) = lines.next().ok_or_else(|| {
            ParseError::new(0, format!("missing constraint {} of {m}", index + 1))
        })?;
        if tokens.len() != n + 2 {
            return Err(ParseError::new(
                line,
                format!(
                    "expected {n} coefficients, a sense, and a right-hand side, found {} tokens",
                    tokens.len()
                ),
            ));
        }
        let coeffs = tokens[..n]
            .iter()
            .map(|t| parse_rational(line, t))
            .collect::<Result<Vec<_>, _>>()?;
        let sense = match tokens[n] {
            "<=" => Sense::Le,
            ">=" => Sense::Ge,
            "=" => Sense::Eq,
            other => {
                return Err(ParseError::new(
                    line,
                    format!("unknown sense {other:?}, expected \"<=\", \">=\" or \"=\""),
                ))
            }
        };
        let rhs = parse_rational(line, tokens[n + 1])?;
        constraints.push(Constraint::new(coeffs, sense, rhs));
    }

    let mut var_bounds = Vec::with_capacity(n);
    for index in 0..n {
        let (line, tokens) = lines.next().ok_or_else(|| {
            ParseError::new(
                0,
                format!("missing bounds for variable {} of {n}", index + 1),
            )
        })?;
        if tokens.len() != 2 {
            return Err(ParseError::new(
                line,
                format!("expected \"<lower> <upper>\", found {} tokens", tokens.len()),
            ));
        }
        let lower: i64 = parse_token(line, tokens[0], "integer lower bound")?;
        let upper: i64 = parse_token(line, tokens[1], "integer upper bound")?;
        if lower > upper {
            return Err(ParseError::new(
                line,
                format!("empty bound range [{lower}, {upper}]"),
            ));
        }
        var_bounds.push((lower, upper));
    }

    if let Some((line, _)) = lines.next() {
        return Err(ParseError::new(line, "unexpected content after bounds"));
    }

    Problem::new(objective_coeffs, constraints, var_bounds)
        .map_err(|e| ParseError::new(0, e.to_string()))
}

/// Writes the problem file format; `parse_problem` round-trips it exactly.
pub fn write_problem(p: &Problem) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "MOIP {} {} {}",
        p.num_vars(),
        p.constraints().len(),
        p.num_objectives()
    );
    for row in p.objective_coeffs() {
        let _ = writeln!(out, "{}", join_display(row));
    }
    for c in p.constraints() {
        let _ = writeln!(out, "{} {} {}", join_display(&c.coeffs), c.sense, c.rhs);
    }
    for &(lo, hi) in p.var_bounds() {
        let _ = writeln!(out, "{lo} {hi}");
    }
    out
}

/// Writes the nondominated-set format. `k` fixes the header for empty sets.
pub fn write_nd(nd: &NDSet, k: usize) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "ND {} {k}", nd.len());
    for v in nd {
        debug_assert_eq!(v.len(), k);
        let _ = writeln!(out, "{v}");
    }
    out
}

/// Parses the nondominated-set format back into vectors plus the declared
/// objective count.
pub fn parse_nd(text: &str) -> Result<(Vec<ObjectiveVector>, usize), ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, raw)| {
            let body = raw.split('#').next().unwrap_or("");
            (i + 1, body.split_whitespace().collect::<Vec<&str>>())
        })
        .filter(|(_, tokens)| !tokens.is_empty());
    let (line, header) = lines
        .next()
        .ok_or_else(|| ParseError::new(0, "empty file"))?;
    if header.len() != 3 || header[0] != "ND" {
        return Err(ParseError::new(line, "expected header \"ND <count> <k>\""));
    }
    let count: usize = parse_token(line, header[1], "vector count")?;
    let k: usize = parse_token(line, header[2], "objective count")?;
    let mut vectors = Vec::with_capacity(count);
    for _ in 0..count {
        let (line, tokens) = lines
            .next()
            .ok_or_else(|| ParseError::new(0, format!("expected {count} vectors")))?;
        if tokens.len() != k {
            return Err(ParseError::new(
                line,
                format!("expected {k} values, found {}", tokens.len()),
            ));
        }
        let values = tokens
            .iter()
            .map(|t| parse_token::<i64>(line, t, "integer objective value"))
            .collect::<Result<Vec<_>, _>>()?;
        vectors.push(ObjectiveVector::new(values));
    }
    if let Some((line, _)) = lines.next() {
        return Err(ParseError::new(line, "unexpected content after vectors"));
    }
    Ok((vectors, k))
}

fn parse_token<T: std::str::FromStr>(
    line: usize,
    token: &str,
    what: &str,
) -> Result<T, ParseError> {
    token
        .parse()
        .map_err(|_| ParseError::new(line, format!("invalid {what}: {token:?}")))
}

fn parse_rational(line: usize, token: &str) -> Result<Rational, ParseError> {
    token
        .parse()
        .map_err(|_| ParseError::new(line, format!("invalid rational: {token:?}")))
}

fn join_display<T: std::fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}
