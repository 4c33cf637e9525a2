//! The time-elastic product engine.
//!
//! A time-elastic product assigns a scalar to a pair of series through the
//! recursion
//!
//! ```text
//! M[p][q] = alpha * M[p-1][q]
//!         + beta  * M[p-1][q-1] + f(a(p), b(q)) * g(t_a(p), t_b(q))
//!         + alpha * M[p][q-1]
//! ```
//!
//! with border values `M[0][.] = M[.][0] = xi`. Here `f` is a product on the
//! value space and `g` a non-negative symmetric time kernel. The inner-product
//! instance `teip` fixes `alpha = 1`, `beta = -1`, `xi = 0`, `f` the Euclidean
//! dot product and `g(t, t') = exp(-nu * |t - t'|)`; with those constants the
//! recursion collapses to the cumulative double sum of all pairwise terms,
//! which makes it bilinear over the series algebra and positive definite.
//! `twip1` and `twip2` are weighted relatives whose inner-product guarantees
//! only hold on uniformly sampled series of equal length.
//!
//! Evaluation is a dynamic program over the implicit table, rolled to two
//! rows of length `min(|A|, |B|) + 1`. The cell update adds the two
//! `alpha`-weighted neighbours as `side * (up + left)`; together with the
//! symmetric source term this makes the computed value bit-identical under
//! operand swap, so the products are exactly symmetric in floating point.

use crate::algebra::{check_dimensions, ominus};
use crate::error::{Error, Result};
use crate::series::TimeSeries;

/// Input-size cap for [`tep_naive`].
pub const NAIVE_SIZE_LIMIT: usize = 24;

/// Which named recursion a [`TepConfig`] stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TepVariant {
    /// The inner product on the unrestricted series space: `alpha = 1`,
    /// `beta = -1`, `xi = 0`.
    Teip,
    /// All three recursion branches weighted by `1/3`.
    Twip1,
    /// Off-diagonal branches weighted by `exp(-nu)`, the whole sum by
    /// `1 / (1 + 2 exp(-nu))`.
    Twip2,
    /// Free constants; useful for experiments, not an inner product unless
    /// it happens to satisfy the `Teip` constraints.
    Custom,
}

/// The time distance fed to the exponential time kernel.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TimeDistance {
    /// `d(t, t') = |t - t'|`.
    #[default]
    Absolute,
    /// `d(t, t') = (t - t')^2`.
    Squared,
}

/// The product on the value space.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SpaceProduct {
    /// Euclidean dot product.
    #[default]
    Dot,
}

/// Parameters of a time-elastic product.
///
/// Use the named constructors; they pin the constants that each variant
/// requires, so a `Teip` config always is an inner product.
#[derive(Clone, Debug, PartialEq)]
pub struct TepConfig {
    variant: TepVariant,
    alpha: f64,
    beta: f64,
    xi: f64,
    nu: f64,
    time_distance: TimeDistance,
    space_product: SpaceProduct,
}

impl TepConfig {
    /// The inner-product instance with time stiffness `nu >= 0`.
    pub fn teip(nu: f64) -> Result<Self> {
        check_nu(nu)?;
        Ok(TepConfig {
            variant: TepVariant::Teip,
            alpha: 1.0,
            beta: -1.0,
            xi: 0.0,
            nu,
            time_distance: TimeDistance::Absolute,
            space_product: SpaceProduct::Dot,
        })
    }

    pub fn twip1(nu: f64) -> Result<Self> {
        check_nu(nu)?;
        Ok(TepConfig {
            variant: TepVariant::Twip1,
            alpha: 1.0,
            beta: 1.0,
            xi: 0.0,
            nu,
            time_distance: TimeDistance::Absolute,
            space_product: SpaceProduct::Dot,
        })
    }

    pub fn twip2(nu: f64) -> Result<Self> {
        check_nu(nu)?;
        Ok(TepConfig {
            variant: TepVariant::Twip2,
            alpha: (-nu).exp(),
            beta: 1.0,
            xi: 0.0,
            nu,
            time_distance: TimeDistance::Absolute,
            space_product: SpaceProduct::Dot,
        })
    }

    /// Free constants. The result is a plain bilinear-form-like recursion;
    /// nothing is guaranteed about it.
    pub fn custom(alpha: f64, beta: f64, xi: f64, nu: f64) -> Result<Self> {
        check_nu(nu)?;
        for v in [alpha, beta, xi] {
            if !v.is_finite() {
                return Err(Error::NonFiniteScalar { value: v });
            }
        }
        Ok(TepConfig {
            variant: TepVariant::Custom,
            alpha,
            beta,
            xi,
            nu,
            time_distance: TimeDistance::Absolute,
            space_product: SpaceProduct::Dot,
        })
    }

    pub fn with_time_distance(mut self, time_distance: TimeDistance) -> Self {
        self.time_distance = time_distance;
        self
    }

    pub fn variant(&self) -> TepVariant {
        self.variant
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn time_distance(&self) -> TimeDistance {
        self.time_distance
    }

    pub fn space_product(&self) -> SpaceProduct {
        self.space_product
    }

    /// Time kernel `g(t, t') = exp(-nu * d(t, t'))`.
    pub(crate) fn time_kernel(&self, t_a: f64, t_b: f64) -> f64 {
        if self.nu == 0.0 {
            return 1.0;
        }
        let d = match self.time_distance {
            TimeDistance::Absolute => (t_a - t_b).abs(),
            TimeDistance::Squared => (t_a - t_b) * (t_a - t_b),
        };
        (-self.nu * d).exp()
    }

    fn weights(&self) -> DpWeights {
        match self.variant {
            TepVariant::Teip | TepVariant::Custom => DpWeights {
                scale: 1.0,
                side: self.alpha,
                diag: self.beta,
                xi: self.xi,
            },
            TepVariant::Twip1 => DpWeights {
                scale: 1.0 / 3.0,
                side: 1.0,
                diag: 1.0,
                xi: 0.0,
            },
            TepVariant::Twip2 => {
                let e = (-self.nu).exp();
                DpWeights {
                    scale: 1.0 / (1.0 + 2.0 * e),
                    side: e,
                    diag: 1.0,
                    xi: 0.0,
                }
            }
        }
    }
}

fn check_nu(nu: f64) -> Result<()> {
    if !nu.is_finite() || nu < 0.0 {
        return Err(Error::InvalidStiffness { value: nu });
    }
    Ok(())
}

/// Cell weights of the rolled dynamic program:
/// `M[i][j] = scale * (side * (up + left) + (diag * diagonal + source))`.
pub(crate) struct DpWeights {
    pub scale: f64,
    pub side: f64,
    pub diag: f64,
    pub xi: f64,
}

/// Runs the recursion over a `rows x cols` table with source term
/// `source(i, j)` (0-based), keeping two rows of length `cols + 1`.
pub(crate) fn run_dp<F>(rows: usize, cols: usize, w: &DpWeights, mut source: F) -> f64
where
    F: FnMut(usize, usize) -> f64,
{
    if rows == 0 || cols == 0 {
        return w.xi;
    }
    let mut prev = vec![w.xi; cols + 1];
    let mut cur = vec![0.0; cols + 1];
    for i in 0..rows {
        cur[0] = w.xi;
        for j in 0..cols {
            let up_left = prev[j + 1] + cur[j];
            let local = w.diag * prev[j] + source(i, j);
            cur[j + 1] = w.scale * (w.side * up_left + local);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[cols]
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

/// Evaluates the configured time-elastic product of two series.
///
/// Cost is `O(|A| * |B| * d)` time and `O(min(|A|, |B|))` memory. The value
/// is deterministic and invariant under swapping the operands, bit for bit.
pub fn tep(a: &TimeSeries, b: &TimeSeries, cfg: &TepConfig) -> Result<f64> {
    check_dimensions(a, b)?;
    // roll over the shorter side; the cell update is transpose-symmetric
    let (rows, cols) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let (rs, cs) = (rows.samples(), cols.samples());
    let w = cfg.weights();
    Ok(run_dp(rs.len(), cs.len(), &w, |i, j| {
        let f = match cfg.space_product {
            SpaceProduct::Dot => dot(&rs[i].value, &cs[j].value),
        };
        f * cfg.time_kernel(rs[i].timestamp, cs[j].timestamp)
    }))
}

/// Literal top-down evaluation of the recursion, memoized, for cross-checking
/// the dynamic program on small inputs (`|A| + |B| <=` [`NAIVE_SIZE_LIMIT`]).
pub fn tep_naive(a: &TimeSeries, b: &TimeSeries, cfg: &TepConfig) -> Result<f64> {
    check_dimensions(a, b)?;
    let total = a.len() + b.len();
    if total > NAIVE_SIZE_LIMIT {
        return Err(Error::SizeLimitExceeded {
            limit: NAIVE_SIZE_LIMIT,
            actual: total,
        });
    }
    let w = cfg.weights();
    let (sa, sb) = (a.samples(), b.samples());
    let mut memo = vec![None; (sa.len() + 1) * (sb.len() + 1)];

    fn rec(
        p: usize,
        q: usize,
        sa: &[crate::series::Sample],
        sb: &[crate::series::Sample],
        cfg: &TepConfig,
        w: &DpWeights,
        memo: &mut [Option<f64>],
    ) -> f64 {
        if p == 0 || q == 0 {
            return w.xi;
        }
        let idx = p * (sb.len() + 1) + q;
        if let Some(v) = memo[idx] {
            return v;
        }
        let f = match cfg.space_product {
            SpaceProduct::Dot => dot(&sa[p - 1].value, &sb[q - 1].value),
        };
        let source = f * cfg.time_kernel(sa[p - 1].timestamp, sb[q - 1].timestamp);
        let up = w.side * rec(p - 1, q, sa, sb, cfg, w, memo);
        let diag = w.diag * rec(p - 1, q - 1, sa, sb, cfg, w, memo) + source;
        let left = w.side * rec(p, q - 1, sa, sb, cfg, w, memo);
        let v = w.scale * (up + diag + left);
        memo[idx] = Some(v);
        v
    }

    Ok(rec(sa.len(), sb.len(), sa, sb, cfg, &w, &mut memo))
}

/// The time-elastic inner product with stiffness `nu`.
pub fn teip(a: &TimeSeries, b: &TimeSeries, nu: f64) -> Result<f64> {
    tep(a, b, &TepConfig::teip(nu)?)
}

/// Result of a `twip` evaluation.
///
/// The inner-product guarantees of the `twip` recursions only hold when both
/// inputs are uniformly sampled, share their timestamps, and have equal
/// length; `restriction_met` reports whether that was the case. The value is
/// computed either way.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwipValue {
    pub value: f64,
    pub restriction_met: bool,
}

pub fn twip1(a: &TimeSeries, b: &TimeSeries, nu: f64) -> Result<TwipValue> {
    Ok(TwipValue {
        value: tep(a, b, &TepConfig::twip1(nu)?)?,
        restriction_met: uniform_equal_length(a, b),
    })
}

pub fn twip2(a: &TimeSeries, b: &TimeSeries, nu: f64) -> Result<TwipValue> {
    Ok(TwipValue {
        value: tep(a, b, &TepConfig::twip2(nu)?)?,
        restriction_met: uniform_equal_length(a, b),
    })
}

/// True when the pair is uniformly sampled on a shared grid with equal
/// lengths (checked to 1e-9 relative on the timestamp scale).
pub fn uniform_equal_length(a: &TimeSeries, b: &TimeSeries) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let (sa, sb) = (a.samples(), b.samples());
    let scale = sa
        .iter()
        .chain(sb)
        .map(|s| s.timestamp.abs())
        .fold(1.0, f64::max);
    let tol = 1e-9 * scale;
    if sa
        .iter()
        .zip(sb)
        .any(|(x, y)| (x.timestamp - y.timestamp).abs() > tol)
    {
        return false;
    }
    if sa.len() >= 3 {
        let step = sa[1].timestamp - sa[0].timestamp;
        for w in sa.windows(2) {
            if ((w[1].timestamp - w[0].timestamp) - step).abs() > tol {
                return false;
            }
        }
    }
    true
}

/// Norm induced by the inner product: `sqrt(<A, A>)`. Zero only for the
/// empty series.
pub fn norm(a: &TimeSeries, nu: f64) -> Result<f64> {
    let s = teip(a, a, nu)?;
    if s < 0.0 {
        return Err(Error::NegativeSquare { value: s });
    }
    Ok(s.sqrt())
}

/// Distance induced by the inner product: the norm of `A ⊖ B`.
pub fn distance(a: &TimeSeries, b: &TimeSeries, nu: f64) -> Result<f64> {
    norm(&ominus(a, b)?, nu)
}

/// Cosine of two nonempty series in the induced geometry; lies in `[-1, 1]`
/// up to rounding.
pub fn elastic_cosine(a: &TimeSeries, b: &TimeSeries, nu: f64) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySeries);
    }
    Ok(teip(a, b, nu)? / (norm(a, nu)? * norm(b, nu)?))
}
