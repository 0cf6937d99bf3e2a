//! Synthetic two-segment bank and effectiveness scoring.
//!
//! Every case joins two optimal segments of equal chessboard length `l` at a
//! known vertex. The first has slope `k/43`, the second is turned a further
//! `delta` degrees counter-clockwise. The full grid is 44 slopes x 45 angles
//! x 410 lengths = 811,800 cases.
//!
//! Case points are never stored: the bank keeps one 430-step template per
//! first slope and per (slope, angle) pair and slices them on demand.

mod oracle;

pub use oracle::oracle_is_dss;

use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;
use std::ops::RangeInclusive;

use rayon::prelude::*;

use crate::error::Result;
use crate::gen::{generate_optimal, optimal_rise};
use crate::geometry::{d8, GridPoint, SlopeValue};
use crate::rational::Rational;
use crate::recognizer::{SegmentationResult, VertexCause};

pub const SLOPE_DENOMINATOR: i64 = 43;
pub const NUMERATORS: RangeInclusive<i64> = 0..=43;
pub const DELTAS: RangeInclusive<u32> = 1..=45;
pub const LENGTHS: RangeInclusive<usize> = 21..=430;
pub const BANK_SIZE: usize = 811_800;

/// Length-to-period ratios used to bucket the report.
pub const LENGTH_BUCKETS: [f64; 11] = [0.5, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0];

/// Which part of the full grid to build.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BankSpec {
    pub numerators: Vec<i64>,
    pub deltas: Vec<u32>,
    pub lengths: Vec<usize>,
}

impl Default for BankSpec {
    fn default() -> Self {
        BankSpec {
            numerators: NUMERATORS.collect(),
            deltas: DELTAS.collect(),
            lengths: LENGTHS.collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BenchmarkCase {
    pub id: usize,
    /// Numerator of the first slope `k/43`.
    pub numerator: i64,
    pub delta_deg: u32,
    pub length: usize,
}

impl BenchmarkCase {
    pub fn m1(&self) -> Rational {
        Rational::new(self.numerator, SLOPE_DENOMINATOR)
    }

    /// Index of the true vertex in the case's point sequence.
    pub fn true_vertex_index(&self) -> usize {
        self.length
    }
}

/// Direction of the second segment after turning by `delta`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SecondDirection {
    /// Slope in `[0, 1]`, rasterized along x.
    Shallow(SlopeValue),
    /// Steeper than the diagonal: `Δx/Δy` in `[0, 1)`, rasterized along y.
    Steep(SlopeValue),
    Vertical,
}

/// Direction of the second segment for first slope `k/43` turned by `delta_deg`.
///
/// A 45 degree turn keeps the slope rational, `(43+k)/(43-k)`, so it is
/// handled exactly; every other integer turn gives an irrational slope.
pub fn second_direction(numerator: i64, delta_deg: u32) -> SecondDirection {
    let den = SLOPE_DENOMINATOR;
    if delta_deg == 45 {
        return match numerator {
            0 => SecondDirection::Shallow(SlopeValue::Exact(Rational::ONE)),
            k if k == den => SecondDirection::Vertical,
            k => SecondDirection::Steep(SlopeValue::Exact(Rational::new(den - k, den + k))),
        };
    }
    let theta = (numerator as f64 / den as f64).atan() + (delta_deg as f64).to_radians();
    if theta <= std::f64::consts::FRAC_PI_4 {
        SecondDirection::Shallow(SlopeValue::Approximate(theta.tan()))
    } else {
        SecondDirection::Steep(SlopeValue::Approximate((FRAC_PI_2 - theta).tan()))
    }
}

/// Offsets from the vertex for `1..=n` steps along `dir`.
fn second_offsets(dir: SecondDirection, n: usize) -> Result<Vec<(i64, i64)>> {
    (1..=n as i64)
        .map(|t| {
            Ok(match dir {
                SecondDirection::Shallow(m) => (t, optimal_rise(m, t)?),
                SecondDirection::Steep(m) => (optimal_rise(m, t)?, t),
                SecondDirection::Vertical => (0, t),
            })
        })
        .collect()
}

/// A case with its points materialized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratedCase {
    pub case: BenchmarkCase,
    pub points: Vec<GridPoint>,
    pub true_vertex_index: usize,
}

impl GeneratedCase {
    pub fn true_vertex(&self) -> GridPoint {
        self.points[self.true_vertex_index]
    }

    pub fn first_segment(&self) -> &[GridPoint] {
        &self.points[..=self.true_vertex_index]
    }

    pub fn second_segment(&self) -> &[GridPoint] {
        &self.points[self.true_vertex_index..]
    }
}

pub struct Bank {
    spec: BankSpec,
    cases: Vec<BenchmarkCase>,
    first: Vec<Vec<GridPoint>>,
    second: Vec<Vec<(i64, i64)>>,
    directions: Vec<SecondDirection>,
}

/// The full 811,800-case bank.
pub fn build_bank() -> Result<Bank> {
    build_bank_with(BankSpec::default())
}

/// A sub-grid of the bank. Case ids follow (numerator, delta, length) order.
///
/// Fails with a precision error if any irrational slope lands too close to a
/// rounding boundary.
pub fn build_bank_with(spec: BankSpec) -> Result<Bank> {
    let max_len = spec.lengths.iter().copied().max().unwrap_or(0);
    let first = spec
        .numerators
        .iter()
        .map(|&k| {
            let m = Rational::new(k, SLOPE_DENOMINATOR);
            Ok(generate_optimal(GridPoint::ORIGIN, m, max_len)?.points)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut directions = Vec::with_capacity(spec.numerators.len() * spec.deltas.len());
    for &k in &spec.numerators {
        for &delta in &spec.deltas {
            directions.push(second_direction(k, delta));
        }
    }
    let second = directions
        .iter()
        .map(|&dir| second_offsets(dir, max_len))
        .collect::<Result<Vec<_>>>()?;

    let mut cases =
        Vec::with_capacity(spec.numerators.len() * spec.deltas.len() * spec.lengths.len());
    for &numerator in &spec.numerators {
        for &delta_deg in &spec.deltas {
            for &length in &spec.lengths {
                cases.push(BenchmarkCase {
                    id: cases.len(),
                    numerator,
                    delta_deg,
                    length,
                });
            }
        }
    }
    Ok(Bank {
        spec,
        cases,
        first,
        second,
        directions,
    })
}

impl Bank {
    pub fn spec(&self) -> &BankSpec {
        &self.spec
    }

    pub fn cases(&self) -> &[BenchmarkCase] {
        &self.cases
    }

    pub fn len(&self) -> usize {
        self.cases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cases.is_empty()
    }

    fn slot(&self, case: &BenchmarkCase) -> (usize, usize) {
        let n = case.id / (self.spec.deltas.len() * self.spec.lengths.len());
        let d = (case.id / self.spec.lengths.len()) % self.spec.deltas.len();
        (n, n * self.spec.deltas.len() + d)
    }

    pub fn direction(&self, case: &BenchmarkCase) -> SecondDirection {
        self.directions[self.slot(case).1]
    }

    pub fn generate(&self, case: &BenchmarkCase) -> GeneratedCase {
        let (fi, si) = self.slot(case);
        let l = case.length;
        let mut points = Vec::with_capacity(2 * l + 1);
        points.extend_from_slice(&self.first[fi][..=l]);
        let v = points[l];
        points.extend(
            self.second[si][..l]
                .iter()
                .map(|&(dx, dy)| v.offset(dx, dy)),
        );
        GeneratedCase {
            case: *case,
            points,
            true_vertex_index: l,
        }
    }
}

/// Chessboard distance between true and found vertex over the segment
/// length, capped at 1; a missing vertex scores 1.
pub fn effectiveness(true_v: GridPoint, found_v: Option<GridPoint>, length: usize) -> f64 {
    assert!(length >= 1, "length must be positive");
    match found_v {
        Some(f) => (d8(true_v, f) as f64 / length as f64).min(1.0),
        None => 1.0,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EffectivenessRecord {
    pub case_id: usize,
    pub found_vertex_index: Option<usize>,
    pub effectiveness: f64,
    pub cause: Option<VertexCause>,
}

/// Scores the reported vertex nearest (in D8) to the true one; ties go to the
/// earlier vertex.
pub fn score_case(case: &GeneratedCase, result: &SegmentationResult) -> EffectivenessRecord {
    let truth = case.true_vertex();
    let nearest = result
        .vertices
        .iter()
        .min_by_key(|v| (d8(truth, v.point), v.index));
    EffectivenessRecord {
        case_id: case.case.id,
        found_vertex_index: nearest.map(|v| v.index),
        effectiveness: effectiveness(truth, nearest.map(|v| v.point), case.case.length),
        cause: nearest.map(|v| v.cause),
    }
}

/// Tally of detection causes for the scored vertex.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CauseCounts {
    pub chain_property_1: usize,
    pub chain_property_2: usize,
    pub slope_envelope: usize,
    pub direction_flip: usize,
    pub none: usize,
}

impl CauseCounts {
    fn add(&mut self, cause: Option<VertexCause>) {
        match cause {
            Some(VertexCause::ChainProperty1) => self.chain_property_1 += 1,
            Some(VertexCause::ChainProperty2) => self.chain_property_2 += 1,
            Some(VertexCause::SlopeEnvelope) => self.slope_envelope += 1,
            Some(VertexCause::DirectionFlip) => self.direction_flip += 1,
            None => self.none += 1,
        }
    }

    pub fn chain_property(&self) -> usize {
        self.chain_property_1 + self.chain_property_2
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeltaSummary {
    pub delta_deg: u32,
    pub cases: usize,
    pub mean_effectiveness: f64,
    /// Mean over cases at least one period (43) long.
    pub mean_effectiveness_long: Option<f64>,
    pub perfect: usize,
    pub causes: CauseCounts,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BucketSummary {
    pub delta_deg: u32,
    pub periods: f64,
    pub cases: usize,
    pub mean_effectiveness: f64,
    pub causes: CauseCounts,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub per_delta: Vec<DeltaSummary>,
    pub per_bucket: Vec<BucketSummary>,
}

pub struct BankRun {
    pub records: Vec<EffectivenessRecord>,
    pub report: Report,
}

/// Nearest entry of [`LENGTH_BUCKETS`] to `length / 43`.
pub fn length_bucket(length: usize) -> f64 {
    let ratio = length as f64 / SLOPE_DENOMINATOR as f64;
    LENGTH_BUCKETS
        .iter()
        .copied()
        .min_by(|a, b| (a - ratio).abs().total_cmp(&(b - ratio).abs()))
        .expect("non-empty bucket list")
}

/// Runs `recognizer` on every case (in parallel on the current rayon pool)
/// and aggregates the scores. Output order follows case ids.
pub fn run_bank<F>(bank: &Bank, recognizer: F) -> Result<BankRun>
where
    F: Fn(&[GridPoint]) -> Result<SegmentationResult> + Sync,
{
    let records = bank
        .cases()
        .par_iter()
        .map(|case| {
            let generated = bank.generate(case);
            let result = recognizer(&generated.points)?;
            Ok(score_case(&generated, &result))
        })
        .collect::<Result<Vec<_>>>()?;
    let report = aggregate(bank, &records);
    Ok(BankRun { records, report })
}

#[derive(Default)]
struct Acc {
    cases: usize,
    sum: f64,
    long_cases: usize,
    long_sum: f64,
    perfect: usize,
    causes: CauseCounts,
}

/// Groups records by angle and by (angle, length bucket). Sums run in case
/// order so the floating-point results are reproducible.
pub fn aggregate(bank: &Bank, records: &[EffectivenessRecord]) -> Report {
    let deltas = &bank.spec().deltas;
    let mut per_delta: Vec<Acc> = deltas.iter().map(|_| Acc::default()).collect();
    let mut per_bucket: Vec<Vec<Acc>> = deltas
        .iter()
        .map(|_| LENGTH_BUCKETS.iter().map(|_| Acc::default()).collect())
        .collect();

    for rec in records {
        let case = &bank.cases()[rec.case_id];
        let di = deltas
            .iter()
            .position(|&d| d == case.delta_deg)
            .expect("delta in spec");
        let bucket = length_bucket(case.length);
        let bi = LENGTH_BUCKETS
            .iter()
            .position(|&b| b == bucket)
            .expect("bucket exists");
        for acc in [&mut per_delta[di], &mut per_bucket[di][bi]] {
            acc.cases += 1;
            acc.sum += rec.effectiveness;
            acc.causes.add(rec.cause);
            if rec.effectiveness == 0.0 {
                acc.perfect += 1;
            }
            if case.length >= SLOPE_DENOMINATOR as usize {
                acc.long_cases += 1;
                acc.long_sum += rec.effectiveness;
            }
        }
    }

    let mean = |sum: f64, n: usize| if n == 0 { 0.0 } else { sum / n as f64 };
    Report {
        per_delta: deltas
            .iter()
            .zip(&per_delta)
            .map(|(&delta_deg, a)| DeltaSummary {
                delta_deg,
                cases: a.cases,
                mean_effectiveness: mean(a.sum, a.cases),
                mean_effectiveness_long: (a.long_cases > 0).then(|| mean(a.long_sum, a.long_cases)),
                perfect: a.perfect,
                causes: a.causes,
            })
            .collect(),
        per_bucket: deltas
            .iter()
            .zip(&per_bucket)
            .flat_map(|(&delta_deg, row)| {
                LENGTH_BUCKETS
                    .iter()
                    .zip(row)
                    .filter(|(_, a)| a.cases > 0)
                    .map(move |(&periods, a)| BucketSummary {
                        delta_deg,
                        periods,
                        cases: a.cases,
                        mean_effectiveness: mean(a.sum, a.cases),
                        causes: a.causes,
                    })
            })
            .collect(),
    }
}

const CAUSE_COLUMNS: &str =
    "chain_property_1,chain_property_2,slope_envelope,direction_flip,no_vertex";

fn cause_cells(c: &CauseCounts) -> String {
    format!(
        "{},{},{},{},{}",
        c.chain_property_1, c.chain_property_2, c.slope_envelope, c.direction_flip, c.none
    )
}

impl Report {
    /// One row per angle.
    pub fn summary_csv(&self) -> String {
        let mut out = String::from("# scoring: nearest reported vertex to the true vertex (D8)\n");
        writeln!(
            out,
            "delta_deg,cases,mean_effectiveness,mean_effectiveness_long,perfect,{CAUSE_COLUMNS}"
        )
        .unwrap();
        for row in &self.per_delta {
            let long = row
                .mean_effectiveness_long
                .map_or(String::new(), |v| format!("{v:.6}"));
            writeln!(
                out,
                "{},{},{:.6},{},{},{}",
                row.delta_deg,
                row.cases,
                row.mean_effectiveness,
                long,
                row.perfect,
                cause_cells(&row.causes)
            )
            .unwrap();
        }
        out
    }

    /// One row per (angle, length bucket).
    pub fn bucket_csv(&self) -> String {
        let mut out = format!("delta_deg,periods,cases,mean_effectiveness,{CAUSE_COLUMNS}\n");
        for row in &self.per_bucket {
            writeln!(
                out,
                "{},{},{},{:.6},{}",
                row.delta_deg,
                row.periods,
                row.cases,
                row.mean_effectiveness,
                cause_cells(&row.causes)
            )
            .unwrap();
        }
        out
    }

    pub fn delta(&self, delta_deg: u32) -> Option<&DeltaSummary> {
        self.per_delta.iter().find(|d| d.delta_deg == delta_deg)
    }
}

pub const RECORDS_HEADER: &str =
    "case_id,m1,delta_deg,length,true_vertex_index,found_vertex_index,effectiveness,cause";

/// One CSV line (without newline) for a record.
pub fn record_csv_line(bank: &Bank, rec: &EffectivenessRecord) -> String {
    let case = &bank.cases()[rec.case_id];
    format!(
        "{},{}/{},{},{},{},{},{:.6},{}",
        rec.case_id,
        case.numerator,
        SLOPE_DENOMINATOR,
        case.delta_deg,
        case.length,
        case.true_vertex_index(),
        rec.found_vertex_index
            .map_or(String::new(), |i| i.to_string()),
        rec.effectiveness,
        rec.cause.map_or("none", |c| c.as_str()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::octant_normalize;
    use crate::recognizer::segment;

    fn small_spec() -> BankSpec {
        BankSpec {
            numerators: vec![0, 7, 21, 42, 43],
            deltas: vec![1, 10, 30, 44, 45],
            lengths: vec![21, 43, 100],
        }
    }

    #[test]
    fn effectiveness_examples() {
        let p = GridPoint::new(3, 4);
        assert_eq!(effectiveness(p, Some(p), 20), 0.0);
        assert_eq!(effectiveness(p, Some(p.offset(20, 0)), 20), 1.0);
        assert_eq!(effectiveness(p, Some(p.offset(5, -2)), 20), 0.25);
        assert_eq!(effectiveness(p, None, 20), 1.0);
        assert_eq!(effectiveness(p, Some(p.offset(0, 90)), 20), 1.0);
    }

    #[test]
    fn effectiveness_symmetric_and_scale_covariant() {
        let a = GridPoint::new(0, 0);
        let b = GridPoint::new(3, 1);
        assert_eq!(effectiveness(a, Some(b), 17), effectiveness(b, Some(a), 17));
        assert_eq!(
            effectiveness(a, Some(b), 17),
            effectiveness(a, Some(GridPoint::new(6, 2)), 34)
        );
    }

    #[test]
    fn full_grid_size() {
        let s = BankSpec::default();
        assert_eq!(
            s.numerators.len() * s.deltas.len() * s.lengths.len(),
            BANK_SIZE
        );
        assert_eq!(s.lengths.len(), 410);
    }

    #[test]
    fn forty_five_degrees_from_flat_is_diagonal() {
        assert_eq!(
            second_direction(0, 45),
            SecondDirection::Shallow(SlopeValue::Exact(Rational::ONE))
        );
        assert_eq!(second_direction(43, 45), SecondDirection::Vertical);
        assert_eq!(
            second_direction(1, 45),
            SecondDirection::Steep(SlopeValue::Exact(Rational::new(21, 22)))
        );
        let bank = build_bank_with(BankSpec {
            numerators: vec![0],
            deltas: vec![45],
            lengths: vec![43],
        })
        .unwrap();
        let g = bank.generate(&bank.cases()[0]);
        assert!(g
            .second_segment()
            .windows(2)
            .all(|w| w[1] == w[0].offset(1, 1)));
    }

    #[test]
    fn second_direction_matches_turned_angle() {
        for k in [0, 5, 30, 43] {
            for delta in [1, 17, 44] {
                let theta = (k as f64 / 43.0).atan() + (delta as f64).to_radians();
                let got = match second_direction(k, delta) {
                    SecondDirection::Shallow(m) => m.to_f64().atan(),
                    SecondDirection::Steep(m) => FRAC_PI_2 - m.to_f64().atan(),
                    SecondDirection::Vertical => FRAC_PI_2,
                };
                assert!((got - theta).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn generated_cases_are_two_dss() {
        let bank = build_bank_with(small_spec()).unwrap();
        assert_eq!(bank.len(), 75);
        for case in bank.cases() {
            let g = bank.generate(case);
            assert_eq!(g.points.len(), 2 * case.length + 1);
            assert_eq!(d8(g.points[0], g.true_vertex()), case.length as i64);
            assert_eq!(
                d8(g.true_vertex(), *g.points.last().unwrap()),
                case.length as i64
            );
            assert!(oracle_is_dss(g.first_segment()).unwrap());
            let (second, _) = octant_normalize(g.second_segment()).unwrap();
            let origin = second[0];
            let shifted: Vec<_> = second
                .iter()
                .map(|p| GridPoint::new(p.x - origin.x, p.y - origin.y))
                .collect();
            assert!(oracle_is_dss(&shifted).unwrap(), "{case:?}");
        }
    }

    #[test]
    fn case_ids_are_stable() {
        let a = build_bank_with(small_spec()).unwrap();
        let b = build_bank_with(small_spec()).unwrap();
        assert_eq!(a.cases(), b.cases());
        assert!(a.cases().iter().enumerate().all(|(i, c)| c.id == i));
        let c = a.cases()[17];
        assert_eq!((c.numerator, c.delta_deg, c.length), (7, 1, 100));
    }

    #[test]
    fn nearest_vertex_is_scored() {
        use crate::recognizer::Vertex;
        let bank = build_bank_with(BankSpec {
            numerators: vec![0],
            deltas: vec![45],
            lengths: vec![30],
        })
        .unwrap();
        let g = bank.generate(&bank.cases()[0]);
        let mk = |index: usize, cause| Vertex {
            index,
            point: g.points[index],
            cause,
        };
        let result = SegmentationResult {
            vertices: vec![
                mk(5, VertexCause::SlopeEnvelope),
                mk(33, VertexCause::ChainProperty2),
            ],
            segments: vec![],
            heuristic_segments: vec![],
        };
        let rec = score_case(&g, &result);
        assert_eq!(rec.found_vertex_index, Some(33));
        assert_eq!(rec.cause, Some(VertexCause::ChainProperty2));
        assert_eq!(rec.effectiveness, 3.0 / 30.0);
        let none = score_case(&g, &SegmentationResult::default());
        assert_eq!((none.effectiveness, none.cause), (1.0, None));
    }

    #[test]
    fn buckets() {
        assert_eq!(length_bucket(21), 0.5);
        assert_eq!(length_bucket(43), 1.0);
        assert_eq!(length_bucket(430), 10.0);
        assert_eq!(length_bucket(150), 3.0);
    }

    #[test]
    fn small_run_is_deterministic() {
        let bank = build_bank_with(small_spec()).unwrap();
        let a = run_bank(&bank, segment).unwrap();
        let b = run_bank(&bank, segment).unwrap();
        assert_eq!(a.records, b.records);
        assert_eq!(a.report.summary_csv(), b.report.summary_csv());
        assert_eq!(a.report.per_delta.len(), 5);
        assert!(a
            .records
            .iter()
            .all(|r| (0.0..=1.0).contains(&r.effectiveness)));
        let lines: Vec<_> = a
            .report
            .summary_csv()
            .lines()
            .skip(2)
            .map(String::from)
            .collect();
        assert_eq!(lines.len(), 5);
        assert!(a.report.bucket_csv().starts_with("delta_deg,periods"));
        assert!(record_csv_line(&bank, &a.records[0]).starts_with("0,0/43,1,21,21,"));
    }
}
