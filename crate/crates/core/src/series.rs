//! Truncated Fourier expansions `f(z) = sum c(n) W_{n,k,R}(z)` and their CSV form.
//!
//! A series stores a contiguous block of coefficients `c(n_min..=n_max)`.
//! Indices outside the block are unknown, not zero; operators and relation
//! checks treat a fetch outside the block as missing information.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;

use crate::arith::check_weight;
use crate::whittaker::basis_w_weighted;
use crate::{Error, Result};

/// Which basis a series is expanded in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// `W_{n,k,R}`, frequencies `n + k/12` (multiplier `v`)
    V,
    /// `W*_{n,k,R}`, frequencies `n - k/12` (multiplier `v-bar`)
    VBar,
}

impl Orientation {
    pub fn flipped(self) -> Self {
        match self {
            Orientation::V => Orientation::VBar,
            Orientation::VBar => Orientation::V,
        }
    }

    pub fn is_star(self) -> bool {
        self == Orientation::VBar
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Orientation::V => "V",
            Orientation::VBar => "VBar",
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Orientation {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "V" => Ok(Orientation::V),
            "VBar" => Ok(Orientation::VBar),
            _ => Err(format!("unknown orientation `{s}` (expected V or VBar)")),
        }
    }
}

/// Which coefficient was fixed to 1, if any.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Normalization {
    C0,
    C1,
    None,
}

impl Normalization {
    pub fn as_str(self) -> &'static str {
        match self {
            Normalization::C0 => "C0",
            Normalization::C1 => "C1",
            Normalization::None => "None",
        }
    }

    /// The index fixed to 1.
    pub fn index(self) -> Option<i64> {
        match self {
            Normalization::C0 => Some(0),
            Normalization::C1 => Some(1),
            Normalization::None => None,
        }
    }
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Normalization {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "C0" | "c0" => Ok(Normalization::C0),
            "C1" | "c1" => Ok(Normalization::C1),
            "None" | "none" => Ok(Normalization::None),
            _ => Err(format!("unknown normalization `{s}` (expected C0, C1 or None)")),
        }
    }
}

/// A truncated two-sided Fourier coefficient sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientSeries {
    k: u32,
    weight: i32,
    r: f64,
    orientation: Orientation,
    normalization: Normalization,
    n_min: i64,
    coeffs: Vec<Complex64>,
}

impl CoefficientSeries {
    /// Series with coefficients `coeffs[j] = c(n_min + j)`.
    pub fn new(k: u32, r: f64, orientation: Orientation, n_min: i64, coeffs: Vec<Complex64>) -> Result<Self> {
        let k = check_weight(i64::from(k))?;
        Ok(CoefficientSeries { k, weight: k as i32, r, orientation, normalization: Normalization::None, n_min, coeffs })
    }

    /// Series on `n_min..=n_max` with `c(n) = f(n)`.
    pub fn from_fn(
        k: u32,
        r: f64,
        orientation: Orientation,
        n_min: i64,
        n_max: i64,
        f: impl FnMut(i64) -> Complex64,
    ) -> Result<Self> {
        Self::new(k, r, orientation, n_min, (n_min..=n_max).map(f).collect())
    }

    /// `c(n) = 1` at `n = index`, zero elsewhere on `n_min..=n_max`.
    pub fn unit(k: u32, r: f64, orientation: Orientation, index: i64, n_min: i64, n_max: i64) -> Result<Self> {
        Self::from_fn(k, r, orientation, n_min, n_max, |n| {
            if n == index {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn with_normalization(mut self, normalization: Normalization) -> Self {
        self.normalization = normalization;
        self
    }

    /// Same data at a different Laplacian weight (used by the raising/lowering chain).
    pub fn with_weight(mut self, weight: i32) -> Self {
        self.weight = weight;
        self
    }

    /// Same metadata, new coefficient block.
    pub fn with_coeffs(&self, orientation: Orientation, n_min: i64, coeffs: Vec<Complex64>) -> Self {
        CoefficientSeries {
            k: self.k,
            weight: self.weight,
            r: self.r,
            orientation,
            normalization: Normalization::None,
            n_min,
            coeffs,
        }
    }

    /// Weight of the multiplier system; fixes the frequency shift `k/12`.
    pub fn k(&self) -> u32 {
        self.k
    }

    /// Laplacian weight; equals `k` except inside the raising/lowering chain.
    pub fn weight(&self) -> i32 {
        self.weight
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn n_min(&self) -> i64 {
        self.n_min
    }

    pub fn n_max(&self) -> i64 {
        self.n_min + self.coeffs.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn contains(&self, n: i64) -> bool {
        n >= self.n_min && n <= self.n_max()
    }

    /// `c(n)`, or `None` when `n` is outside the known block.
    pub fn get(&self, n: i64) -> Option<Complex64> {
        if self.contains(n) {
            Some(self.coeffs[(n - self.n_min) as usize])
        } else {
            None
        }
    }

    /// `c(n)`, or an error naming the missing index.
    pub fn require(&self, n: i64) -> Result<Complex64> {
        self.get(n).ok_or(Error::MissingCoefficient(n))
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs.iter().enumerate().map(move |(j, c)| (self.n_min + j as i64, *c))
    }

    /// Multiply every coefficient by `s`.
    pub fn scaled(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|c| *c *= s);
        out.normalization = Normalization::None;
        out
    }

    /// Restrict to the window `lo..=hi` (intersected with the known block).
    pub fn restricted(&self, lo: i64, hi: i64) -> Self {
        let lo = lo.max(self.n_min);
        let hi = hi.min(self.n_max());
        let coeffs =
            if lo <= hi { self.coeffs[(lo - self.n_min) as usize..=(hi - self.n_min) as usize].to_vec() } else { Vec::new() };
        let mut out = self.with_coeffs(self.orientation, lo, coeffs);
        out.normalization = self.normalization;
        out
    }

    /// Truncated sum `sum_n c(n) W_{n,k,R}(z)` over the known block.
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        let star = self.orientation.is_star();
        let mut acc = Complex64::new(0.0, 0.0);
        for (n, c) in self.iter() {
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            acc += c * basis_w_weighted(n, self.k, self.weight, self.r, z, star)?;
        }
        Ok(acc)
    }

    /// Parse the CSV text format.
    pub fn parse_csv(text: &str) -> Result<Self> {
        parse_csv(text)
    }

    pub fn read_csv(path: impl AsRef<Path>) -> Result<Self> {
        parse_csv(&fs::read_to_string(path)?)
    }

    pub fn to_csv_string(&self) -> String {
        let mut out =
            format!("# k={} R={} orientation={} normalization={}", self.k, self.r, self.orientation, self.normalization);
        if self.weight != self.k as i32 {
            out.push_str(&format!(" weight={}", self.weight));
        }
        out.push_str("\nn,c_pos,c_neg\n");
        let hi = self.n_max().abs().max(self.n_min.abs());
        if !self.is_empty() {
            for n in 0..=hi {
                let pos = self.get(n).map(format_complex).unwrap_or_default();
                let neg = if n == 0 { String::new() } else { self.get(-n).map(format_complex).unwrap_or_default() };
                if pos.is_empty() && neg.is_empty() && !self.contains(n) && !self.contains(-n) && n != 0 {
                    continue;
                }
                out.push_str(&format!("{n},{pos},{neg}\n"));
            }
        }
        out
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_csv_string())?;
        Ok(())
    }
}

/// Shortest round-trip decimal form; complex values as `a+bi`.
pub fn format_complex(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{:?}", c.re)
    } else if c.im.is_sign_negative() {
        format!("{:?}-{:?}i", c.re, -c.im)
    } else {
        format!("{:?}+{:?}i", c.re, c.im)
    }
}

/// Parse `a`, `a+bi` or `a-bi` with decimal or scientific parts.
pub fn parse_complex(cell: &str) -> std::result::Result<Complex64, String> {
    let cell = cell.trim();
    let bad = || format!("cannot parse coefficient `{cell}`");
    if let Some(body) = cell.strip_suffix('i') {
        // split at the last sign that is not part of an exponent
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&j| (bytes[j] == b'+' || bytes[j] == b'-') && !matches!(bytes[j - 1], b'e' | b'E'))
            .ok_or_else(bad)?;
        let re = body[..split].trim().parse::<f64>().map_err(|_| bad())?;
        let im = body[split..].trim().parse::<f64>().map_err(|_| bad())?;
        Ok(Complex64::new(re, im))
    } else {
        cell.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad())
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_csv(text: &str) -> Result<CoefficientSeries> {
    let mut lines = text.lines().enumerate().map(|(j, l)| (j + 1, l.trim())).filter(|(_, l)| !l.is_empty());

    let (lno, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let meta = header.strip_prefix('#').ok_or_else(|| {
        parse_err(lno, "first line must be `# k=<int> R=<decimal> orientation=<V|VBar> normalization=<C0|C1|None>`")
    })?;
    let (mut k, mut r, mut orientation, mut normalization, mut weight) = (None, None, None, Normalization::None, None);
    for tok in meta.split_whitespace() {
        let (key, value) = tok.split_once('=').ok_or_else(|| parse_err(lno, format!("malformed header field `{tok}`")))?;
        match key {
            "k" => k = Some(value.parse::<i64>().map_err(|_| parse_err(lno, format!("bad weight `{value}`")))?),
            "R" => r = Some(value.parse::<f64>().map_err(|_| parse_err(lno, format!("bad spectral parameter `{value}`")))?),
            "orientation" => orientation = Some(value.parse::<Orientation>().map_err(|e| parse_err(lno, e))?),
            "normalization" => normalization = value.parse::<Normalization>().map_err(|e| parse_err(lno, e))?,
            "weight" => weight = Some(value.parse::<i32>().map_err(|_| parse_err(lno, format!("bad weight `{value}`")))?),
            _ => return Err(parse_err(lno, format!("unknown header field `{key}`"))),
        }
    }
    let k = check_weight(k.ok_or_else(|| parse_err(lno, "header is missing k="))?)?;
    let r = r.ok_or_else(|| parse_err(lno, "header is missing R="))?;
    let orientation = orientation.ok_or_else(|| parse_err(lno, "header is missing orientation="))?;

    let (lno, cols) = lines.next().ok_or_else(|| parse_err(lno + 1, "missing column header `n,c_pos,c_neg`"))?;
    let cols: Vec<&str> = cols.split(',').map(str::trim).collect();
    if cols != ["n", "c_pos", "c_neg"] {
        return Err(parse_err(lno, "column header must be `n,c_pos,c_neg`"));
    }

    let mut entries: Vec<(i64, Complex64)> = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for (lno, line) in lines {
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if cells.is_empty() || cells.len() > 3 {
            return Err(parse_err(lno, format!("expected `n, c(n), c(-n)`, got {} cells", cells.len())));
        }
        let n: i64 = cells[0].parse().map_err(|_| parse_err(lno, format!("bad index `{}`", cells[0])))?;
        if n < 0 {
            return Err(parse_err(lno, "row index must be non-negative"));
        }
        if !seen.insert(n) {
            return Err(parse_err(lno, format!("duplicate row n={n}")));
        }
        if let Some(cell) = cells.get(1).filter(|c| !c.is_empty()) {
            entries.push((n, parse_complex(cell).map_err(|e| parse_err(lno, e))?));
        }
        if let Some(cell) = cells.get(2).filter(|c| !c.is_empty()) {
            if n == 0 {
                return Err(parse_err(lno, "the c_neg cell of row n=0 must be empty"));
            }
            entries.push((-n, parse_complex(cell).map_err(|e| parse_err(lno, e))?));
        }
    }
    if entries.is_empty() {
        return Err(parse_err(lno, "no coefficients"));
    }
    entries.sort_by_key(|(n, _)| *n);
    for w in entries.windows(2) {
        if w[1].0 != w[0].0 + 1 {
            return Err(parse_err(0, format!("non-contiguous indices: c({}) is known but c({}) is not", w[0].0, w[0].0 + 1)));
        }
    }
    let n_min = entries[0].0;
    let series = CoefficientSeries::new(k, r, orientation, n_min, entries.into_iter().map(|(_, c)| c).collect())?
        .with_normalization(normalization);
    Ok(match weight {
        Some(w) => series.with_weight(w),
        None => series,
    })
}

/// How a relation residual is measured.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ResidualConvention {
    /// `|lhs - rhs|`
    Absolute,
    /// `|lhs / rhs - 1|`
    Ratio,
}

impl ResidualConvention {
    pub fn residual(self, lhs: Complex64, rhs: Complex64) -> f64 {
        match self {
            ResidualConvention::Absolute => (lhs - rhs).norm(),
            ResidualConvention::Ratio => {
                if rhs == Complex64::new(0.0, 0.0) {
                    f64::INFINITY
                } else {
                    (lhs / rhs - 1.0).norm()
                }
            }
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ResidualConvention::Absolute => "abs",
            ResidualConvention::Ratio => "ratio",
        }
    }
}

/// Why a relation was not judged.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SkipReason {
    /// the relation reads `c(n)` outside the known block
    MissingIndex(i64),
    /// the relation reads data flagged as inconsistent
    FixtureAnomaly,
    /// a second reading of a misprinted relation, reported for comparison only
    AlternateReading,
    /// nothing to compare (empty window)
    Empty,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Pass,
    Fail,
    Skipped(SkipReason),
}

impl Status {
    pub fn is_fail(self) -> bool {
        self == Status::Fail
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Pass => f.write_str("Pass"),
            Status::Fail => f.write_str("Fail"),
            Status::Skipped(SkipReason::MissingIndex(n)) => write!(f, "Skipped(missing c({n}))"),
            Status::Skipped(SkipReason::FixtureAnomaly) => f.write_str("Skipped(fixture anomaly)"),
            Status::Skipped(SkipReason::AlternateReading) => f.write_str("Skipped(alternate reading)"),
            Status::Skipped(SkipReason::Empty) => f.write_str("Skipped(empty window)"),
        }
    }
}

/// One checked instance of a coefficient or operator identity.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationReport {
    pub relation_id: String,
    pub lhs: Option<Complex64>,
    pub rhs: Option<Complex64>,
    pub residual: Option<f64>,
    pub convention: ResidualConvention,
    pub status: Status,
    pub note: String,
}

impl RelationReport {
    /// Judge `lhs` against `rhs` with tolerance `tol`.
    pub fn judged(relation_id: String, lhs: Complex64, rhs: Complex64, convention: ResidualConvention, tol: f64) -> Self {
        let residual = convention.residual(lhs, rhs);
        RelationReport {
            relation_id,
            lhs: Some(lhs),
            rhs: Some(rhs),
            residual: Some(residual),
            convention,
            status: if residual < tol { Status::Pass } else { Status::Fail },
            note: String::new(),
        }
    }

    pub fn skipped(relation_id: String, convention: ResidualConvention, reason: SkipReason) -> Self {
        RelationReport {
            relation_id,
            lhs: None,
            rhs: None,
            residual: None,
            convention,
            status: Status::Skipped(reason),
            note: String::new(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    /// Keep the computed values but mark the report as not judged.
    pub fn demoted(mut self, reason: SkipReason) -> Self {
        self.status = Status::Skipped(reason);
        self
    }

    pub const CSV_HEADER: &'static str = "relation,lhs,rhs,residual,convention,status,note";

    pub fn to_csv_row(&self) -> String {
        let c = |v: Option<Complex64>| v.map(format_complex_sci).unwrap_or_default();
        let residual = self.residual.map(|r| format!("{r:.16e}")).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{}",
            csv_field(&self.relation_id),
            c(self.lhs),
            c(self.rhs),
            residual,
            self.convention.as_str(),
            self.status,
            csv_field(&self.note)
        )
    }
}

/// Scientific form with 16 fractional digits; complex values as `a+bi`.
pub fn format_complex_sci(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{:.16e}", c.re)
    } else if c.im.is_sign_negative() {
        format!("{:.16e}-{:.16e}i", c.re, -c.im)
    } else {
        format!("{:.16e}+{:.16e}i", c.re, c.im)
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const K2_HEAD: &str = "# k=2 R=2.95645894117486 orientation=V normalization=C1\nn,c_pos,c_neg\n0,1.230701624761,\n1, 1.000000000000, 18.203610985364\n";

    #[test]
    fn reads_fixture_rows() {
        let s = CoefficientSeries::parse_csv(K2_HEAD).unwrap();
        assert_eq!(s.k(), 2);
        assert_eq!(s.normalization(), Normalization::C1);
        assert_eq!((s.n_min(), s.n_max()), (-1, 1));
        assert_eq!(s.get(1).unwrap().re, 1.0);
        assert_eq!(s.get(-1).unwrap().re, 18.203610985364);
        assert_eq!(s.get(0).unwrap().re, 1.230701624761);
        assert_eq!(s.get(2), None);
    }

    #[test]
    fn scientific_notation() {
        let s =
            CoefficientSeries::parse_csv("# k=6 R=3.7 orientation=V normalization=C0\nn,c_pos,c_neg\n0,1.000000000000E+00,\n")
                .unwrap();
        assert_eq!(s.get(0).unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn parse_errors() {
        let cases = [
            ("k=2 R=1 orientation=V\nn,c_pos,c_neg\n0,1,\n", "first line"),
            ("# k=2 R=1 orientation=V\nn,c,c_neg\n0,1,\n", "column header"),
            ("# k=2 R=1 orientation=V\nn,c_pos,c_neg\n0,1,\n0,2,\n", "duplicate"),
            ("# k=2 R=1 orientation=V\nn,c_pos,c_neg\n0,1,\n2,1,\n", "non-contiguous"),
            ("# k=2 R=1 orientation=V\nn,c_pos,c_neg\n0,1,5\n", "must be empty"),
            ("# k=12 R=1 orientation=V\nn,c_pos,c_neg\n0,1,\n", "outside"),
            ("# k=2 R=1 orientation=W\nn,c_pos,c_neg\n0,1,\n", "orientation"),
            ("# k=2 R=1 orientation=V\nn,c_pos,c_neg\n0,abc,\n", "cannot parse"),
        ];
        for (text, needle) in cases {
            let err = CoefficientSeries::parse_csv(text).unwrap_err().to_string();
            assert!(err.contains(needle), "{err} should mention {needle}");
        }
    }

    #[test]
    fn asymmetric_blocks_roundtrip() {
        let s = CoefficientSeries::from_fn(5, 3.5, Orientation::VBar, 2, 6, |n| Complex64::new(n as f64, -0.5))
            .unwrap()
            .with_weight(-3);
        let back = CoefficientSeries::parse_csv(&s.to_csv_string()).unwrap();
        assert_eq!(back, s);
        let s = CoefficientSeries::from_fn(5, 3.5, Orientation::V, -7, -3, |n| Complex64::new(n as f64, 0.0)).unwrap();
        assert_eq!(CoefficientSeries::parse_csv(&s.to_csv_string()).unwrap(), s);
    }

    #[test]
    fn residual_conventions() {
        let (a, b) = (Complex64::new(2.0, 0.0), Complex64::new(1.0, 0.0));
        assert_eq!(ResidualConvention::Absolute.residual(a, b), 1.0);
        assert_eq!(ResidualConvention::Ratio.residual(a, b), 1.0);
        assert_eq!(ResidualConvention::Ratio.residual(a, Complex64::new(0.0, 0.0)), f64::INFINITY);
        let r = RelationReport::judged("x".into(), a, b, ResidualConvention::Ratio, 1e-6);
        assert_eq!(r.status, Status::Fail);
        assert!(r.to_csv_row().starts_with("x,2.0000000000000000e0,"));
        let r = RelationReport::skipped("a, b".into(), ResidualConvention::Absolute, SkipReason::MissingIndex(40));
        assert_eq!(r.to_csv_row(), "\"a, b\",,,,abs,Skipped(missing c(40)),");
    }

    #[test]
    fn zero_and_unit_evaluation() {
        let z = Complex64::new(0.1, 0.9);
        let zero = CoefficientSeries::from_fn(2, 3.0, Orientation::V, -5, 5, |_| Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(zero.evaluate(z).unwrap(), Complex64::new(0.0, 0.0));
        let unit = CoefficientSeries::unit(2, 3.0, Orientation::V, 1, -5, 5).unwrap();
        let direct = crate::whittaker::basis_w(1, 2, 3.0, z, false).unwrap();
        assert_eq!(unit.evaluate(z).unwrap(), direct);
    }

    fn arb_series() -> impl Strategy<Value = CoefficientSeries> {
        (1u32..=11, -20i64..=5, prop::collection::vec((-1e6f64..1e6, -1e3f64..1e3, any::<bool>()), 1..30), any::<bool>())
            .prop_map(|(k, n_min, vals, vbar)| {
                let coeffs = vals.into_iter().map(|(re, im, real)| Complex64::new(re, if real { 0.0 } else { im })).collect();
                let o = if vbar { Orientation::VBar } else { Orientation::V };
                CoefficientSeries::new(k, 3.70330780105981, o, n_min, coeffs).unwrap().with_normalization(Normalization::C0)
            })
    }

    proptest! {
        #[test]
        fn csv_roundtrip(s in arb_series()) {
            let back = CoefficientSeries::parse_csv(&s.to_csv_string()).unwrap();
            prop_assert_eq!(back, s);
        }

        #[test]
        fn evaluation_is_linear(
            a in prop::collection::vec(-2.0f64..2.0, 11),
            b in prop::collection::vec(-2.0f64..2.0, 11),
            x in -0.5f64..0.5, y in 0.6f64..1.5,
        ) {
            let z = Complex64::new(x, y);
            let f = CoefficientSeries::from_fn(3, 3.3, Orientation::V, -5, 5, |n| Complex64::new(a[(n + 5) as usize], 0.0)).unwrap();
            let g = CoefficientSeries::from_fn(3, 3.3, Orientation::V, -5, 5, |n| Complex64::new(0.0, b[(n + 5) as usize])).unwrap();
            let h = CoefficientSeries::from_fn(3, 3.3, Orientation::V, -5, 5, |n| Complex64::new(a[(n + 5) as usize], b[(n + 5) as usize])).unwrap();
            let lhs = h.evaluate(z).unwrap();
            let rhs = f.evaluate(z).unwrap() + g.evaluate(z).unwrap();
            prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()));
        }
    }
}
