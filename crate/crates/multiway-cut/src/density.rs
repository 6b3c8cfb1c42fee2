//! Piecewise-polynomial probability densities on [0, 1].
//!
//! Houses the three published threshold distributions and the uniform
//! family, together with exact evaluation, integration, CDF and
//! inverse-CDF sampling. Pieces are polynomials of degree at most 3 and
//! are evaluated half-open: a point on a breakpoint belongs to the piece
//! on its right, except at 1.0 which belongs to the last piece.

use crate::error::Error;
use crate::Result;
use serde::{Deserialize, Serialize};

/// Mass tolerance for the exact closed-form families.
pub const EXACT_MASS_TOL: f64 = 1e-12;
/// Mass tolerance for the published five-piece cubic, whose coefficients
/// are rounded in print.
pub const ROUNDED_MASS_TOL: f64 = 2e-3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub lo: f64,
    pub hi: f64,
    /// Coefficients in ascending degree: c0 + c1 u + c2 u^2 + c3 u^3.
    pub coeffs: [f64; 4],
}

impl Piece {
    fn eval(&self, u: f64) -> f64 {
        let c = &self.coeffs;
        ((c[3] * u + c[2]) * u + c[1]) * u + c[0]
    }

    /// Antiderivative with F(0) = 0.
    fn antiderivative(&self, u: f64) -> f64 {
        let c = &self.coeffs;
        (((c[3] / 4.0 * u + c[2] / 3.0) * u + c[1] / 2.0) * u + c[0]) * u
    }

    fn mass_below(&self, u: f64) -> f64 {
        self.antiderivative(u) - self.antiderivative(self.lo)
    }

    fn mass(&self) -> f64 {
        self.mass_below(self.hi)
    }

    fn is_linear(&self) -> bool {
        self.coeffs[2] == 0.0 && self.coeffs[3] == 0.0
    }
}

/// A nonnegative piecewise-polynomial density on [0, 1].
///
/// `target_mass` declares what the total integral is supposed to be
/// (1 for genuine probability densities; the folded variable p2*phi
/// integrates to p2 instead) and construction checks it within the
/// per-instance tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseDensity {
    pieces: Vec<Piece>,
    total_mass: f64,
    target_mass: f64,
}

impl PiecewiseDensity {
    pub fn new(
        pieces: Vec<(f64, f64, [f64; 4])>,
        target_mass: f64,
        mass_tol: f64,
    ) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::InvalidDensity("no pieces".into()));
        }
        let pieces: Vec<Piece> = pieces
            .into_iter()
            .map(|(lo, hi, coeffs)| Piece { lo, hi, coeffs })
            .collect();
        if pieces[0].lo != 0.0 || pieces[pieces.len() - 1].hi != 1.0 {
            return Err(Error::InvalidDensity(
                "pieces must tile [0, 1] starting at 0 and ending at 1".into(),
            ));
        }
        for w in pieces.windows(2) {
            if w[0].hi != w[1].lo {
                return Err(Error::InvalidDensity(format!(
                    "gap or overlap between pieces at {} vs {}",
                    w[0].hi, w[1].lo
                )));
            }
        }
        for p in &pieces {
            if !(p.hi > p.lo) {
                return Err(Error::InvalidDensity(format!(
                    "empty piece [{}, {}]",
                    p.lo, p.hi
                )));
            }
            // Nonnegativity probe at 1024 points per piece.
            for s in 0..=1024 {
                let u = p.lo + (p.hi - p.lo) * s as f64 / 1024.0;
                if p.eval(u) < -1e-9 {
                    return Err(Error::InvalidDensity(format!(
                        "density negative ({:.3e}) at u = {u}",
                        p.eval(u)
                    )));
                }
            }
        }
        let total_mass: f64 = pieces.iter().map(Piece::mass).sum();
        if (total_mass - target_mass).abs() > mass_tol {
            return Err(Error::InvalidDensity(format!(
                "total mass {total_mass} deviates from target {target_mass} by more than {mass_tol}"
            )));
        }
        Ok(PiecewiseDensity {
            pieces,
            total_mass,
            target_mass,
        })
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// The exact total integral over [0, 1].
    pub fn mass(&self) -> f64 {
        self.total_mass
    }

    pub fn target_mass(&self) -> f64 {
        self.target_mass
    }

    fn piece_at(&self, u: f64) -> &Piece {
        debug_assert!((0.0..=1.0).contains(&u));
        // Half-open [lo, hi) pieces; the last piece is closed at 1.
        for p in &self.pieces {
            if u < p.hi {
                return p;
            }
        }
        self.pieces.last().unwrap()
    }

    /// Density value at `u` in [0, 1].
    pub fn evaluate(&self, u: f64) -> f64 {
        assert!(
            (0.0..=1.0).contains(&u),
            "density evaluated outside [0,1]: {u}"
        );
        self.piece_at(u).eval(u)
    }

    /// Exact integral over [lo, hi], 0 <= lo <= hi <= 1.
    pub fn integrate(&self, lo: f64, hi: f64) -> f64 {
        assert!(
            0.0 <= lo && lo <= hi && hi <= 1.0,
            "bad integration range [{lo}, {hi}]"
        );
        let mut total = 0.0;
        for p in &self.pieces {
            let a = lo.max(p.lo);
            let b = hi.min(p.hi);
            if b > a {
                total += p.antiderivative(b) - p.antiderivative(a);
            }
        }
        total
    }

    /// Cumulative mass below `u`.
    pub fn cdf(&self, u: f64) -> f64 {
        self.integrate(0.0, u)
    }

    /// Inverse-CDF sample: returns F^-1(u01 * mass), i.e. the density is
    /// re-normalized by its own integral when that integral is not 1.
    /// Closed form on linear pieces, bisection to 1e-12 on cubic pieces.
    pub fn sample(&self, uniform01: f64) -> f64 {
        assert!(
            (0.0..1.0).contains(&uniform01),
            "uniform01 must be in [0, 1), got {uniform01}"
        );
        let target = uniform01 * self.total_mass;
        let mut acc = 0.0;
        for p in &self.pieces {
            let m = p.mass();
            if acc + m > target {
                return invert_within_piece(p, target - acc);
            }
            acc += m;
        }
        1.0
    }
}

/// Solve mass_below(x) = want for x in [p.lo, p.hi].
fn invert_within_piece(p: &Piece, want: f64) -> f64 {
    if want <= 0.0 {
        return p.lo;
    }
    if p.is_linear() {
        // F(x) - F(lo) = c0 (x - lo) + c1/2 (x^2 - lo^2) = want.
        let c0 = p.coeffs[0];
        let c1 = p.coeffs[1];
        if c1 == 0.0 {
            return if c0 == 0.0 { p.lo } else { p.lo + want / c0 };
        }
        // (c1/2) x^2 + c0 x - (want + c0 lo + c1/2 lo^2) = 0
        let a = c1 / 2.0;
        let b = c0;
        let c = -(want + c0 * p.lo + c1 / 2.0 * p.lo * p.lo);
        let disc = (b * b - 4.0 * a * c).max(0.0);
        let root = (-b + disc.sqrt()) / (2.0 * a);
        return root.clamp(p.lo, p.hi);
    }
    let mut lo = p.lo;
    let mut hi = p.hi;
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if p.mass_below(mid) < want {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The sqrt(5) constants of the two-piece linear threshold density.
pub fn params_1309() -> (f64, f64, f64) {
    let s5 = 5f64.sqrt();
    let a = (4.0 + 2.0 * s5) / 3.0;
    let b = s5 - 2.0;
    let p = (5.0 + 3.0 * s5) / 20.0;
    (a, b, p)
}

/// Threshold density for the 1.309017 mixture: a*u on [0, b], then
/// (a/2)(u + b) on [b, 1], with a = (4 + 2*sqrt(5))/3 and b = sqrt(5) - 2.
/// Integrates to exactly 1: (a/4)(-b^2 + 2b + 1) = 1.
pub fn phi_1309() -> PiecewiseDensity {
    let (a, b, _) = params_1309();
    PiecewiseDensity::new(
        vec![
            (0.0, b, [0.0, a, 0.0, 0.0]),
            (b, 1.0, [a * b / 2.0, a / 2.0, 0.0, 0.0]),
        ],
        1.0,
        EXACT_MASS_TOL,
    )
    .expect("closed-form density is valid")
}

/// Closed-form parameters of the 1.30217 mixture.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Params1302 {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub a_tilde: f64,
    pub c_tilde: f64,
    pub d_tilde: f64,
    pub b: f64,
}

pub fn params_1302() -> Params1302 {
    let s3 = 3f64.sqrt();
    Params1302 {
        p1: (6.0 + 5.0 * s3) / 26.0,
        p2: (19.0 - 8.0 * s3) / 13.0,
        // The /26 denominator: it is the value consistent with the
        // normalization p1 + p2 + p3 = 1 and with p3 = (b^2/3) * c_tilde.
        p3: (11.0 * s3 - 18.0) / 26.0,
        a_tilde: (12.0 + 10.0 * s3) / 39.0,
        c_tilde: (6.0 + 5.0 * s3) / 26.0,
        d_tilde: (4.0 - s3) / 13.0,
        b: 2.0 * s3 - 3.0,
    }
}

/// Threshold density for the 1.30217 mixture: a*u on [0, b], then c*u + d
/// on (b, 1], where a, c, d are the tilde parameters divided by p2.
pub fn phi_1302() -> PiecewiseDensity {
    let p = params_1302();
    let a = p.a_tilde / p.p2;
    let c = p.c_tilde / p.p2;
    let d = p.d_tilde / p.p2;
    PiecewiseDensity::new(
        vec![
            (0.0, p.b, [0.0, a, 0.0, 0.0]),
            (p.b, 1.0, [d, c, 0.0, 0.0]),
        ],
        1.0,
        1e-9,
    )
    .expect("closed-form density is valid")
}

/// Published mixing weights of the four-scheme 1.2965 algorithm.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Params1296 {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub p4: f64,
    pub b: f64,
}

pub fn params_1296() -> Params1296 {
    Params1296 {
        p1: 0.31052,
        p2: 0.305782,
        p3: 0.015338,
        p4: 0.36836,
        b: 6.0 / 11.0,
    }
}

/// The folded single-threshold variable of the 1.2965 mixture: the
/// five-piece cubic equal to p2 * phi, kept verbatim with its published
/// rounded coefficients. Its integral is close to p2 = 0.305782, not 1,
/// and it has a small discontinuity at 0.23 that is deliberately not
/// smoothed; re-normalize (see [`PiecewiseDensity::sample`]) before using
/// it as a sampling distribution.
pub fn phi_tilde_1296() -> PiecewiseDensity {
    let b = 6.0 / 11.0;
    PiecewiseDensity::new(
        vec![
            (0.0, 0.23, [0.0, 0.14957, -0.0478, 0.45]),
            (0.23, b, [-0.00484, 0.1995, -0.1067, 0.158]),
            (b, 0.61, [0.47639, 0.21685, -0.02388, -0.021]),
            (0.61, 0.77, [0.47368, 0.2816, -0.18365, 0.079]),
            (0.77, 1.0, [0.32195, 0.75, -0.6476, 0.2239]),
        ],
        params_1296().p2,
        ROUNDED_MASS_TOL,
    )
    .expect("published density is valid")
}

/// Uniform density on [0, b]: 1/b below b, 0 above.
pub fn uniform_density(b: f64) -> Result<PiecewiseDensity> {
    if !(b > 0.0 && b <= 1.0) {
        return Err(Error::InvalidDensity(format!(
            "uniform support bound must be in (0, 1], got {b}"
        )));
    }
    if b == 1.0 {
        return PiecewiseDensity::new(vec![(0.0, 1.0, [1.0, 0.0, 0.0, 0.0])], 1.0, EXACT_MASS_TOL);
    }
    PiecewiseDensity::new(
        vec![
            (0.0, b, [1.0 / b, 0.0, 0.0, 0.0]),
            (b, 1.0, [0.0, 0.0, 0.0, 0.0]),
        ],
        1.0,
        EXACT_MASS_TOL,
    )
}

/// Serialize to the text format: one line per piece, `lo hi c0 c1 c2 c3`.
pub fn to_text(d: &PiecewiseDensity) -> String {
    let mut out = String::new();
    for p in d.pieces() {
        out.push_str(&format!(
            "{} {} {} {} {} {}\n",
            p.lo, p.hi, p.coeffs[0], p.coeffs[1], p.coeffs[2], p.coeffs[3]
        ));
    }
    out
}

/// Parse the text format. The declared mass target is the parsed pieces'
/// own integral, so any valid sub-density round-trips.
pub fn from_text(text: &str) -> Result<PiecewiseDensity> {
    let mut pieces = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 6 {
            return Err(Error::Parse {
                line: idx + 1,
                message: format!("expected 6 fields `lo hi c0 c1 c2 c3`, got {}", fields.len()),
            });
        }
        let mut vals = [0.0f64; 6];
        for (i, f) in fields.iter().enumerate() {
            vals[i] = f.parse().map_err(|_| Error::Parse {
                line: idx + 1,
                message: format!("bad number `{f}`"),
            })?;
        }
        pieces.push((vals[0], vals[1], [vals[2], vals[3], vals[4], vals[5]]));
    }
    let probe = PiecewiseDensity::new(pieces.clone(), 0.0, f64::INFINITY)?;
    let mass = probe.mass();
    PiecewiseDensity::new(pieces, mass, 1e-9)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_1309_values() {
        let d = phi_1309();
        let (a, b, _) = params_1309();
        assert_eq!(d.evaluate(0.0), 0.0);
        // Closed-form normalization identity (a/4)(-b^2 + 2b + 1) = 1.
        assert!((0.25 * a * (-b * b + 2.0 * b + 1.0) - 1.0).abs() < 1e-12);
        assert!((d.mass() - 1.0).abs() < 1e-12);
        // Value at the breakpoint: a*b = 2/3 exactly, and both pieces agree.
        assert!((a * b - 2.0 / 3.0).abs() < 1e-15);
        assert!((d.evaluate(b) - 2.0 / 3.0).abs() < 1e-12);
        assert!(((a / 2.0) * (b + b) - a * b).abs() < 1e-15);
    }

    #[test]
    fn phi_1302_values() {
        let d = phi_1302();
        let p = params_1302();
        assert_eq!(d.evaluate(0.0), 0.0);
        assert!((d.mass() - 1.0).abs() < 1e-9);
        // phi(1) = (c~ + d~)/p2 = 1 + sqrt(3)/2.
        let expect = 1.0 + 3f64.sqrt() / 2.0;
        assert!((d.evaluate(1.0) - expect).abs() < 1e-9);
        assert!((expect - 1.86603).abs() < 1e-5);
        // Normalization of the mixture weights.
        assert!((p.p1 + p.p2 + p.p3 - 1.0).abs() < 1e-12);
        // Parameter identities used by the closed-form derivation.
        assert!((p.p1 - p.c_tilde).abs() < 1e-15);
        assert!((p.p3 - p.b * p.b / 3.0 * p.c_tilde).abs() < 1e-15);
        assert!((p.a_tilde - 4.0 / 3.0 * p.c_tilde).abs() < 1e-15);
        assert!((p.d_tilde - 2.0 / 3.0 * p.b * p.c_tilde).abs() < 1e-15);
    }

    #[test]
    fn phi_tilde_1296_values() {
        let d = phi_tilde_1296();
        assert_eq!(d.evaluate(0.0), 0.0);
        // Published coefficients leave a small jump at 0.23; keep it.
        let left = d.pieces()[0].eval(0.23);
        let right = d.evaluate(0.23);
        assert!((left - 0.037348).abs() < 1e-6);
        assert!((right - 0.037323).abs() < 1e-6);
        assert!(left != right);
        // Integral is close to p2, not 1.
        assert!((d.mass() - 0.305782).abs() < 2e-3);
    }

    #[test]
    fn uniform_density_values() {
        let d = uniform_density(1.0).unwrap();
        assert_eq!(d.evaluate(0.3), 1.0);
        assert_eq!(d.evaluate(1.0), 1.0);

        let b = 6.0 / 11.0;
        let d = uniform_density(b).unwrap();
        assert!((d.evaluate(0.1) - 11.0 / 6.0).abs() < 1e-15);
        assert_eq!(d.evaluate(0.9), 0.0);
        assert!((d.cdf(b / 2.0) - 0.5).abs() < 1e-12);

        assert!(uniform_density(0.0).is_err());
        assert!(uniform_density(1.5).is_err());
    }

    #[test]
    fn sample_examples() {
        let d = uniform_density(0.5).unwrap();
        assert!((d.sample(0.5) - 0.25).abs() < 1e-12);

        let d = phi_1309();
        assert_eq!(d.sample(0.0), 0.0);
        // Mass of the left linear piece is a b^2 / 2 = b/3; its right edge is b.
        let (a, b, _) = params_1309();
        let left_mass = 0.5 * a * b * b;
        assert!((left_mass - b / 3.0).abs() < 1e-15);
        assert!((d.sample(left_mass) - b).abs() < 1e-9);
    }

    #[test]
    fn cdf_endpoints_and_additivity() {
        for d in [phi_1309(), phi_1302(), phi_tilde_1296()] {
            assert_eq!(d.cdf(0.0), 0.0);
            assert!((d.cdf(1.0) - d.mass()).abs() < 1e-15);
            let whole = d.integrate(0.1, 0.9);
            let split = d.integrate(0.1, 0.4) + d.integrate(0.4, 0.9);
            assert!((whole - split).abs() < 1e-12);
        }
    }

    #[test]
    fn sample_inverts_cdf() {
        // sample(cdf(u)) == u on the support interior of strictly positive
        // densities.
        for d in [phi_1309(), phi_1302(), uniform_density(1.0).unwrap()] {
            for i in 1..50 {
                let u = i as f64 / 50.0;
                let round = d.sample(d.cdf(u) / d.mass());
                assert!(
                    (round - u).abs() < 1e-9,
                    "sample(cdf({u})) = {round}"
                );
            }
        }
    }

    #[test]
    fn histogram_matches_density() {
        // 10^6 inverse-CDF samples of phi_1309 against per-bin masses,
        // 64 bins, 4 standard errors.
        use crate::rng::RandomSource;
        let d = phi_1309();
        let n = 1_000_000usize;
        let bins = 64usize;
        let mut counts = vec![0u32; bins];
        let rs = RandomSource::new(20_240_001);
        let mut rng = rs.rng();
        use rand::Rng;
        for _ in 0..n {
            let x = d.sample(rng.random::<f64>());
            let idx = ((x * bins as f64) as usize).min(bins - 1);
            counts[idx] += 1;
        }
        for i in 0..bins {
            let lo = i as f64 / bins as f64;
            let hi = (i + 1) as f64 / bins as f64;
            let p = d.integrate(lo, hi);
            let se = (p * (1.0 - p) / n as f64).sqrt();
            let freq = counts[i] as f64 / n as f64;
            assert!(
                (freq - p).abs() <= 4.0 * se + 1e-12,
                "bin {i}: freq {freq} vs mass {p} (se {se})"
            );
        }
    }

    #[test]
    fn text_round_trip() {
        for d in [phi_1309(), phi_tilde_1296(), uniform_density(0.25).unwrap()] {
            let text = to_text(&d);
            let back = from_text(&text).unwrap();
            assert_eq!(d.pieces(), back.pieces());
            assert!((d.mass() - back.mass()).abs() < 1e-15);
        }
        assert!(from_text("0 1 1").is_err());
        assert!(from_text("0 0.5 1 0 0 0\n0.6 1 1 0 0 0").is_err());
    }

    #[test]
    fn rejects_negative_density() {
        let r = PiecewiseDensity::new(vec![(0.0, 1.0, [-0.5, 2.0, 0.0, 0.0])], 0.75, 1.0);
        assert!(r.is_err());
    }
}
