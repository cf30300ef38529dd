//! Symplectic translations and their weighted superpositions.
//!
//! τ_Y is the anti-Wick quantization of a_Y(Z, Z̄) = exp(i(YZ̄ + ȲZ) + ½|Y|²),
//! which anti-normal ordering identifies as the displacement operator
//! exp(i(Y·a + Ȳ·a*)). Matrix elements come from the Gaussian-moment
//! expansion of the exponential symbol, summed with a certified geometric
//! tail bound. Under the identification Y = y + iη the group law
//!
//!   τ_{Y₁} τ_{Y₂} = e^{-iσ(Y₁,Y₂)} τ_{Y₁+Y₂}
//!
//! holds for σ(Y₁, Y₂) = η₁·y₂ - y₁·η₂ = Im(Y₁·Ȳ₂); the matrix oracle in
//! the tests pins this sign (the transposed convention fails it by a factor
//! 2|sin σ|).
//!
//! A weight m ∈ L¹(R^{2n}) yields F = ∫ τ_Y m(Y) dY with ‖F‖ ≤ ∫|m|;
//! superpositions are built by tensor-grid quadrature with refinement
//! doubling, and compositions of weights go through the twisted convolution
//!
//!   m₃(Y₃) = ∫ m₁(½Y₃+Y₄) m₂(½Y₃-Y₄) e^{iσ(Y₃,Y₄)} dY₄,
//!
//! evaluated by direct absolutely-convergent quadrature on Gaussian-tagged
//! weights (the contour-deformation route is proof apparatus, not needed at
//! desk scale).

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, WickError};
use crate::fock::{factorial, ln_factorial, FockBasis, FockOperator, TruncationParams};
use crate::quad::Kahan;
use crate::quantize::{
    antiwick_quantize_radial, radial_eigenvalues, Exactness, QuantizationResult,
};
use crate::symbols::RadialSymbol;

/// Series cutoff for translation matrix elements.
const SERIES_TOL: f64 = 1e-15;

/// Phase-space point Y ∈ C^n ≅ R^n ⊕ R^n.
pub type PhasePoint = Vec<Complex64>;

/// σ(Y₁, Y₂) = Σ_j (η₁y₂ - y₁η₂)_j = Im Σ_j Y₁_j conj(Y₂_j).
///
/// This is the sign under which the measured group law carries exactly the
/// phase e^{-iσ(Y₁,Y₂)}; it is the transpose of the other common choice
/// y₁η₂ - η₁y₂, and the group-law test keeps it honest.
pub fn symplectic_form(y1: &[Complex64], y2: &[Complex64]) -> f64 {
    y1.iter().zip(y2).map(|(a, b)| (a * b.conj()).im).sum()
}

/// |Y|² = Σ_j |Y_j|².
pub fn phase_norm_sqr(y: &[Complex64]) -> f64 {
    y.iter().map(|c| c.norm_sqr()).sum()
}

/// 1D displacement matrix element ⟨τ_y u_a, u_b⟩ = ⟨b|D(ξ)|a⟩ with ξ = iȳ:
///
///   √(p!/q!) ξ^{b-a}-type prefactor · e^{-|ξ|²/2} · L_p^{(q-p)}(|ξ|²),
///
/// p = min(a,b), q = max(a,b). The associated-Laguerre recurrence keeps the
/// evaluation stable at large |y| where the raw Gaussian-moment series loses
/// ~e^{|y|²} digits to cancellation (that series survives in the tests as a
/// small-|y| oracle).
fn translation_element_1d(y: Complex64, a: u32, b: u32) -> Complex64 {
    let x = y.norm_sqr();
    if x == 0.0 {
        return if a == b {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        };
    }
    let xi = Complex64::new(0.0, 1.0) * y.conj();
    let (p, d, shift) = if b >= a {
        (a, b - a, xi)
    } else {
        (b, a - b, -xi.conj())
    };
    let ln_mag = 0.5 * (ln_factorial(p as u64) - ln_factorial((p + d) as u64))
        + d as f64 * x.sqrt().ln()
        - x / 2.0;
    let phase = if d == 0 {
        Complex64::new(1.0, 0.0)
    } else {
        (shift / x.sqrt()).powu(d)
    };
    phase * ln_mag.exp() * assoc_laguerre(p, d as f64, x)
}

/// L_k^{(α)}(x) by the upward three-term recurrence.
fn assoc_laguerre(k: u32, alpha: f64, x: f64) -> f64 {
    let mut prev = 1.0f64;
    if k == 0 {
        return prev;
    }
    let mut curr = 1.0 + alpha - x;
    for m in 1..k {
        let mf = m as f64;
        let next = ((2.0 * mf + 1.0 + alpha - x) * curr - (mf + alpha) * prev) / (mf + 1.0);
        prev = curr;
        curr = next;
    }
    curr
}

/// The raw Gaussian-moment series for the same element; exact but loses
/// precision like e^{|y|²}, kept as the independent oracle for tests.
#[doc(hidden)]
pub fn translation_element_series(y: Complex64, a: u32, b: u32) -> Complex64 {
    let y_sq = y.norm_sqr();
    if y_sq == 0.0 {
        return if a == b {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        };
    }
    let delta0 = b.saturating_sub(a);
    let gamma0 = delta0 + a - b; // = max(0, a-b)
    // first term: (iy)^{γ0} (i ȳ)^{δ0} (δ0+a)!/(γ0! δ0! √(a! b!))
    let iy = Complex64::new(0.0, 1.0) * y;
    let iyc = Complex64::new(0.0, 1.0) * y.conj();
    let ln_mag = ln_factorial((delta0 + a) as u64)
        - ln_factorial(gamma0 as u64)
        - ln_factorial(delta0 as u64)
        - 0.5 * (ln_factorial(a as u64) + ln_factorial(b as u64));
    let prefactor = iy.powu(gamma0) * iyc.powu(delta0) * ln_mag.exp();
    // successive terms differ by the real ratio -y_sq (δ+a+1)/((γ+1)(δ+1)),
    // so the sum is prefactor times a real series
    let mut series = Kahan::default();
    let mut term = 1.0f64;
    series.add(term);
    let mut delta = delta0;
    let mut gamma = gamma0;
    for _ in 0..10_000 {
        let ratio = y_sq * (delta + a + 1) as f64 / (((gamma + 1) * (delta + 1)) as f64);
        term *= -ratio;
        series.add(term);
        delta += 1;
        gamma += 1;
        // once the ratio falls below 1/2 the tail is dominated geometrically
        let next_ratio = y_sq * (delta + a + 1) as f64 / (((gamma + 1) * (delta + 1)) as f64);
        if next_ratio < 0.5 {
            let tail = term.abs() * next_ratio / (1.0 - next_ratio);
            if tail < SERIES_TOL * (1.0 + series.value().abs()) {
                break;
            }
        }
    }
    prefactor * series.value() * (y_sq / 2.0).exp()
}

/// Build τ_Y without the accuracy-radius guard (superposition quadratures
/// integrate over all of phase space and weight the far nodes themselves).
pub fn translation_matrix(y: &[Complex64], params: TruncationParams) -> FockOperator {
    assert_eq!(y.len(), params.n, "phase point dimension mismatch");
    let basis = FockBasis::new(params);
    let dim = basis.len();
    // per-coordinate element tables; the n-dim element is their product
    let tables: Vec<DMatrix<Complex64>> = (0..params.n)
        .map(|j| {
            let side = params.degree_max as usize + 1;
            DMatrix::from_fn(side, side, |b, a| {
                translation_element_1d(y[j], a as u32, b as u32)
            })
        })
        .collect();
    let mut matrix = DMatrix::<Complex64>::zeros(dim, dim);
    for (col, alpha) in basis.indices().iter().enumerate() {
        for (row, beta) in basis.indices().iter().enumerate() {
            let mut value = Complex64::new(1.0, 0.0);
            for (j, table) in tables.iter().enumerate() {
                value *= table[(beta.exponents()[j] as usize, alpha.exponents()[j] as usize)];
                if value.norm_sqr() == 0.0 {
                    break;
                }
            }
            matrix[(row, col)] = value;
        }
    }
    let shift = params.degree_max as i32;
    FockOperator::new(params, matrix, (-shift, shift)).expect("square by construction")
}

/// Symplectic translation with the truncation-accuracy guard |Y|² ≤ N/8.
pub fn translation_op(y: &[Complex64], params: TruncationParams) -> Result<QuantizationResult> {
    let y_sq = phase_norm_sqr(y);
    let radius = params.degree_max as f64 / 8.0;
    if y_sq > radius {
        return Err(WickError::InvalidConfig(format!(
            "|Y|² = {y_sq:.3} exceeds the accuracy radius N/8 = {radius:.3}"
        )));
    }
    Ok(QuantizationResult {
        operator: translation_matrix(y, params),
        exactness: Exactness::Quadrature(SERIES_TOL),
        symbol_provenance: format!("translation |Y|²={y_sq:.6}"),
    })
}

/// τ_{Y₁} ∘ τ_{Y₂} as a matrix product, plus the group-law phase
/// e^{-iσ(Y₁,Y₂)} it must carry relative to τ_{Y₁+Y₂}.
pub fn compose_translations(
    y1: &[Complex64],
    y2: &[Complex64],
    params: TruncationParams,
) -> Result<(FockOperator, Complex64)> {
    let t1 = translation_op(y1, params)?;
    let t2 = translation_op(y2, params)?;
    let product = t1.operator.compose(&t2.operator)?;
    let phase = Complex64::from_polar(1.0, -symplectic_form(y1, y2));
    Ok((product, phase))
}

/// Sampled weight on a uniform phase-space grid (the output format of
/// `compose_weights`).
#[derive(Clone, Debug)]
pub struct PhaseGrid {
    pub n: usize,
    /// lower corner of the grid over the 2n real coordinates (re₁, im₁, ...)
    pub origin: Vec<f64>,
    pub step: Vec<f64>,
    pub shape: Vec<usize>,
    /// values in odometer order (first coordinate fastest)
    pub values: Vec<Complex64>,
}

impl PhaseGrid {
    pub fn cell_volume(&self) -> f64 {
        self.step.iter().product()
    }

    pub fn point(&self, flat: usize) -> Vec<Complex64> {
        let mut rest = flat;
        let mut coords = vec![0.0f64; 2 * self.n];
        for (d, coord) in coords.iter_mut().enumerate() {
            let i = rest % self.shape[d];
            rest /= self.shape[d];
            *coord = self.origin[d] + self.step[d] * i as f64;
        }
        (0..self.n)
            .map(|j| Complex64::new(coords[2 * j], coords[2 * j + 1]))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Riemann ∫|m|.
    pub fn l1_norm(&self) -> f64 {
        let vol = self.cell_volume();
        self.values.iter().map(|v| v.norm() * vol).sum()
    }
}

/// Integrable weight m(Y) on phase space.
#[derive(Clone, Debug)]
pub enum TranslationWeight {
    /// mass · (2πσ²)^{-n} exp(-|Y-c|²/(2σ²)); ∫ m = mass.
    Gaussian {
        n: usize,
        center: PhasePoint,
        width: f64,
        mass: f64,
    },
    /// The weight reproducing χ^{anti-Wick} for the Gaussian cutoff
    /// χ(Z) = exp(-|Z|²/(2 s²)): m(Y) = π^{-2n} e^{-½|Y|²} χ̃(Y)
    ///      = (2s²/π)^n exp(-(½+2s²)|Y|²).
    CutoffFourier { n: usize, chi_width: f64 },
    /// Sampled weight with grid interpolation (nearest-cell Riemann sum).
    Sampled(PhaseGrid),
}

impl TranslationWeight {
    pub fn dim(&self) -> usize {
        match self {
            Self::Gaussian { n, .. } | Self::CutoffFourier { n, .. } => *n,
            Self::Sampled(grid) => grid.n,
        }
    }

    pub fn eval(&self, y: &[Complex64]) -> Complex64 {
        match self {
            Self::Gaussian {
                n,
                center,
                width,
                mass,
            } => {
                let dist_sq: f64 = y
                    .iter()
                    .zip(center)
                    .map(|(a, b)| (a - b).norm_sqr())
                    .sum();
                let norm = (2.0 * std::f64::consts::PI * width * width).powi(*n as i32);
                Complex64::new(mass / norm * (-dist_sq / (2.0 * width * width)).exp(), 0.0)
            }
            Self::CutoffFourier { n, chi_width } => {
                let s2 = chi_width * chi_width;
                let rate = 0.5 + 2.0 * s2;
                let scale = (2.0 * s2 / std::f64::consts::PI).powi(*n as i32);
                Complex64::new(scale * (-rate * phase_norm_sqr(y)).exp(), 0.0)
            }
            Self::Sampled(_) => unimplemented!("sampled weights are integrated on their own grid"),
        }
    }

    /// ∫ |m(Y)| dY (closed form for the tagged families).
    pub fn l1_norm(&self) -> f64 {
        match self {
            Self::Gaussian { mass, .. } => mass.abs(),
            Self::CutoffFourier { n, chi_width } => {
                let s2 = chi_width * chi_width;
                (2.0 * s2 / (0.5 + 2.0 * s2)).powi(*n as i32)
            }
            Self::Sampled(grid) => grid.l1_norm(),
        }
    }

    /// ∫ |∇m| dY for the remainder bound (Gaussian tag only):
    /// |mass| √2 Γ(n+½)/(σ Γ(n)).
    pub fn grad_l1_norm(&self) -> Result<f64> {
        match self {
            Self::Gaussian {
                n, width, mass, ..
            } => {
                let nf = *n as f64;
                let gamma_ratio = (statrs::function::gamma::ln_gamma(nf + 0.5)
                    - statrs::function::gamma::ln_gamma(nf))
                .exp();
                Ok(mass.abs() * std::f64::consts::SQRT_2 * gamma_ratio / width)
            }
            _ => Err(WickError::InvalidConfig(
                "gradient L¹ norm is only available for Gaussian-tagged weights".into(),
            )),
        }
    }

    /// Quadrature nodes and complex weights (m(Y)·cell volume) at a
    /// refinement level; levels double the per-axis resolution.
    fn quadrature_nodes(&self, level: u32) -> Vec<(PhasePoint, Complex64)> {
        match self {
            Self::Gaussian {
                n, center, width, ..
            } => {
                let per_axis = 16usize << level;
                let half = 6.0 * width;
                let origin: Vec<f64> = (0..2 * n)
                    .map(|d| {
                        let c = if d % 2 == 0 {
                            center[d / 2].re
                        } else {
                            center[d / 2].im
                        };
                        c - half
                    })
                    .collect();
                let step = 2.0 * half / per_axis as f64;
                grid_nodes(*n, &origin, step, per_axis, |y| self.eval(y))
            }
            Self::CutoffFourier { n, chi_width } => {
                let s2 = chi_width * chi_width;
                let sigma_eff = 1.0 / (2.0 * (0.5 + 2.0 * s2)).sqrt();
                let per_axis = 16usize << level;
                let half = 6.0 * sigma_eff;
                let origin = vec![-half; 2 * n];
                let step = 2.0 * half / per_axis as f64;
                grid_nodes(*n, &origin, step, per_axis, |y| self.eval(y))
            }
            Self::Sampled(grid) => {
                // the grid is its own quadrature; levels do not refine it
                let vol = grid.cell_volume();
                (0..grid.len())
                    .map(|flat| (grid.point(flat), grid.values[flat] * vol))
                    .collect()
            }
        }
    }
}

fn grid_nodes(
    n: usize,
    origin: &[f64],
    step: f64,
    per_axis: usize,
    eval: impl Fn(&[Complex64]) -> Complex64,
) -> Vec<(PhasePoint, Complex64)> {
    let dims = 2 * n;
    let total = per_axis.pow(dims as u32);
    let vol = step.powi(dims as i32);
    let mut out = Vec::with_capacity(total);
    let mut point = vec![Complex64::new(0.0, 0.0); n];
    for flat in 0..total {
        let mut rest = flat;
        for j in 0..n {
            let re_i = rest % per_axis;
            rest /= per_axis;
            let im_i = rest % per_axis;
            rest /= per_axis;
            point[j] = Complex64::new(
                origin[2 * j] + step * (re_i as f64 + 0.5),
                origin[2 * j + 1] + step * (im_i as f64 + 0.5),
            );
        }
        let value = eval(&point);
        if value.norm_sqr() > 0.0 {
            out.push((point.clone(), value * vol));
        }
    }
    out
}

/// F = ∫ τ_Y m(Y) dY by grid quadrature with refinement doubling; the
/// reported norm obeys ‖F‖ ≤ ∫|m| + tolerance.
pub fn weighted_superposition(
    weight: &TranslationWeight,
    params: TruncationParams,
    tol: f64,
) -> Result<QuantizationResult> {
    if weight.dim() != params.n {
        return Err(WickError::DimensionMismatch {
            expected: params.n,
            got: weight.dim(),
            context: "weight dimension vs truncation".into(),
        });
    }
    let mut previous: Option<FockOperator> = None;
    let mut disagreement = f64::INFINITY;
    let max_level = if matches!(weight, TranslationWeight::Sampled(_)) {
        0
    } else {
        3
    };
    for level in 0..=max_level {
        let current = superpose_at_level(weight, params, level);
        if let Some(prev) = &previous {
            disagreement = current.max_entry_difference(prev);
            if disagreement <= tol {
                return Ok(QuantizationResult {
                    operator: current,
                    exactness: Exactness::Quadrature(disagreement),
                    symbol_provenance: format!("superposition of {weight:?}"),
                });
            }
        }
        previous = Some(current);
    }
    if max_level == 0 {
        // sampled grids carry their own resolution; no doubling possible
        return Ok(QuantizationResult {
            operator: previous.expect("level 0 ran"),
            exactness: Exactness::Quadrature(f64::NAN),
            symbol_provenance: "superposition of sampled weight".into(),
        });
    }
    Err(WickError::QuadratureNonconvergence {
        context: "weighted superposition".into(),
        disagreement,
        tolerance: tol,
    })
}

fn superpose_at_level(
    weight: &TranslationWeight,
    params: TruncationParams,
    level: u32,
) -> FockOperator {
    let nodes = weight.quadrature_nodes(level);
    let dim = params.basis_size();
    // compensated accumulation per entry keeps the sum order-insensitive
    let mut acc_re = vec![Kahan::default(); dim * dim];
    let mut acc_im = vec![Kahan::default(); dim * dim];
    for (y, w) in &nodes {
        let tau = translation_matrix(y, params);
        let m = tau.matrix();
        for (idx, value) in m.iter().enumerate() {
            let contrib = value * w;
            acc_re[idx].add(contrib.re);
            acc_im[idx].add(contrib.im);
        }
    }
    let matrix = DMatrix::from_iterator(
        dim,
        dim,
        acc_re
            .iter()
            .zip(&acc_im)
            .map(|(re, im)| Complex64::new(re.value(), im.value())),
    );
    let shift = params.degree_max as i32;
    FockOperator::new(params, matrix, (-shift, shift)).expect("square by construction")
}

/// Twisted convolution m₃(Y₃) = ∫ m₁(½Y₃+Y₄) m₂(½Y₃-Y₄) e^{iσ(Y₃,Y₄)} dY₄
/// sampled on an output grid sized from the operand widths. Only n = 1
/// Gaussian-tagged weights are supported; the convergence flag compares two
/// inner-quadrature resolutions.
pub fn compose_weights(
    m1: &TranslationWeight,
    m2: &TranslationWeight,
    out_per_axis: usize,
    tol: f64,
) -> Result<(TranslationWeight, bool, f64)> {
    let n = m1.dim();
    if n != m2.dim() {
        return Err(WickError::DimensionMismatch {
            expected: n,
            got: m2.dim(),
            context: "weight composition dimensions".into(),
        });
    }
    if n != 1 {
        return Err(WickError::InvalidConfig(
            "compose_weights supports n = 1".into(),
        ));
    }
    let (c1, s1) = gaussian_tag(m1)?;
    let (c2, s2) = gaussian_tag(m2)?;
    // output support: centers add, spreads add in quadrature
    let center = [c1[0] + c2[0]];
    let spread = (s1 * s1 + s2 * s2).sqrt();
    let half = 6.0 * spread;
    let origin = vec![center[0].re - half, center[0].im - half];
    let step = 2.0 * half / out_per_axis as f64;

    let coarse = twisted_convolution_grid(m1, m2, &origin, step, out_per_axis, 32);
    let fine = twisted_convolution_grid(m1, m2, &origin, step, out_per_axis, 64);
    let disagreement = coarse
        .iter()
        .zip(&fine)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    let grid = PhaseGrid {
        n: 1,
        origin,
        step: vec![step, step],
        shape: vec![out_per_axis, out_per_axis],
        values: fine,
    };
    Ok((
        TranslationWeight::Sampled(grid),
        disagreement <= tol,
        disagreement,
    ))
}

fn gaussian_tag(m: &TranslationWeight) -> Result<(PhasePoint, f64)> {
    match m {
        TranslationWeight::Gaussian { center, width, .. } => Ok((center.clone(), *width)),
        _ => Err(WickError::InvalidConfig(
            "compose_weights needs Gaussian-tagged operands".into(),
        )),
    }
}

fn twisted_convolution_grid(
    m1: &TranslationWeight,
    m2: &TranslationWeight,
    origin: &[f64],
    step: f64,
    per_axis: usize,
    inner_per_axis: usize,
) -> Vec<Complex64> {
    let (c1, s1) = gaussian_tag(m1).expect("checked by caller");
    let (c2, s2) = gaussian_tag(m2).expect("checked by caller");
    // Integrate over the argument of the narrower Gaussian so its scale is
    // always resolved: with u the narrow argument,
    //   m₃(Y₃) = ∫ m₁(Y₃-u) m₂(u) e^{-iσ(Y₃,u)} du          (m₂ narrower)
    //   m₃(Y₃) = ∫ m₁(u) m₂(Y₃-u) e^{+iσ(Y₃,u)} du          (m₁ narrower)
    // (substituting Y₄ = ±(u - ½Y₃) in the defining integral; σ(Y₃,Y₃) = 0
    // kills the half-shift term).
    let narrow_is_second = s2 <= s1;
    let (inner_center, inner_width) = if narrow_is_second {
        (c2[0], s2)
    } else {
        (c1[0], s1)
    };
    let inner_half = 6.0 * inner_width;
    let inner_step = 2.0 * inner_half / inner_per_axis as f64;
    let inner_vol = inner_step * inner_step;

    let mut out = Vec::with_capacity(per_axis * per_axis);
    for iy in 0..per_axis {
        for ix in 0..per_axis {
            // odometer order: first (re) coordinate fastest
            let y3 = Complex64::new(
                origin[0] + step * ix as f64,
                origin[1] + step * iy as f64,
            );
            let mut acc = Complex64::new(0.0, 0.0);
            for jy in 0..inner_per_axis {
                for jx in 0..inner_per_axis {
                    let u = inner_center
                        + Complex64::new(
                            -inner_half + inner_step * (jx as f64 + 0.5),
                            -inner_half + inner_step * (jy as f64 + 0.5),
                        );
                    let sigma = symplectic_form(&[y3], &[u]);
                    let (v1, v2, phase) = if narrow_is_second {
                        (
                            m1.eval(&[y3 - u]),
                            m2.eval(&[u]),
                            Complex64::from_polar(1.0, -sigma),
                        )
                    } else {
                        (
                            m1.eval(&[u]),
                            m2.eval(&[y3 - u]),
                            Complex64::from_polar(1.0, sigma),
                        )
                    };
                    acc += v1 * v2 * phase * inner_vol;
                }
            }
            out.push(acc);
        }
    }
    out
}

/// R = F(m₁)∘F(m₂) - F(m₁ * m₂) (ordinary convolution as the leading term)
/// together with the product bound Π (∫|∇m| + ∫|m|) it is measured against.
pub struct RemainderReport {
    pub remainder: FockOperator,
    /// sobolev_operator_norm(R, 0, 1) restricted to inputs of degree ≤ N/2
    pub measured_norm: f64,
    pub bound_product: f64,
}

pub fn first_order_remainder(
    m1: &TranslationWeight,
    m2: &TranslationWeight,
    params: TruncationParams,
    tol: f64,
) -> Result<RemainderReport> {
    let (c1, s1) = gaussian_tag(m1)?;
    let (c2, s2) = gaussian_tag(m2)?;
    let (mass1, mass2) = match (m1, m2) {
        (
            TranslationWeight::Gaussian { mass: a, .. },
            TranslationWeight::Gaussian { mass: b, .. },
        ) => (*a, *b),
        _ => unreachable!("gaussian_tag checked"),
    };
    let f1 = weighted_superposition(m1, params, tol)?;
    let f2 = weighted_superposition(m2, params, tol)?;
    // convolution of Gaussians: mass product, centers add, widths add in
    // quadrature
    let leading_weight = TranslationWeight::Gaussian {
        n: params.n,
        center: vec![c1[0] + c2[0]],
        width: (s1 * s1 + s2 * s2).sqrt(),
        mass: mass1 * mass2,
    };
    let leading = weighted_superposition(&leading_weight, params, tol)?;
    let remainder = f1.operator.compose(&f2.operator)?.sub(&leading.operator)?;
    // measure on the truncation-safe half block
    let safe = restrict_columns(&remainder, params.degree_max / 2);
    let measured_norm = crate::quantize::sobolev_operator_norm(&safe, 0.0, 1.0);
    let bound_product = (m1.grad_l1_norm()? + m1.l1_norm()) * (m2.grad_l1_norm()? + m2.l1_norm());
    Ok(RemainderReport {
        remainder,
        measured_norm,
        bound_product,
    })
}

/// Zero out the columns of input degree > `max_degree` (restriction of the
/// operator to the safe input block).
pub fn restrict_columns(op: &FockOperator, max_degree: u32) -> FockOperator {
    let basis = FockBasis::new(op.params());
    let mut matrix = op.matrix().clone();
    for col in 0..matrix.ncols() {
        if basis.degree_at(col) > max_degree {
            for row in 0..matrix.nrows() {
                matrix[(row, col)] = Complex64::new(0.0, 0.0);
            }
        }
    }
    FockOperator::new(op.params(), matrix, op.degree_shift_range()).expect("same dims")
}

/// The displayed cutoff-operator norm bound for a sup-bounded symbol
/// supported in |z| < ρ√n: sup|χ| · (nρ²)^n / (2n · 2^n · Γ(n)), i.e.
/// R^{2n} Ω_{2n-1}/(2n 2^n π^n) evaluated with Ω_{2n-1} = π^n/Γ(n).
pub fn cutoff_norm_bound(rho: f64, n: usize, sup_bound: f64) -> f64 {
    let nf = n as f64;
    let r2 = nf * rho * rho;
    sup_bound * r2.powi(n as i32) / (2.0 * nf * 2f64.powi(n as i32) * factorial(n as u64 - 1))
}

/// The Stirling envelope k^n ρ^{2n} with k = e that dominates the bound.
pub fn cutoff_norm_envelope(rho: f64, n: usize) -> f64 {
    (std::f64::consts::E * rho * rho).powi(n as i32)
}

/// Measured operator norm of the quantization of a radial cutoff: for a
/// diagonal operator this is max_k |λ_k|.
pub fn measured_cutoff_norm(chi: &RadialSymbol, params: TruncationParams) -> Result<f64> {
    let (eigenvalues, _) = radial_eigenvalues(chi, params)?;
    Ok(eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs())))
}

/// Dense-path variant for cross-checks: quantize and take the largest
/// singular value.
pub fn measured_cutoff_norm_dense(chi: &RadialSymbol, params: TruncationParams) -> Result<f64> {
    let q = antiwick_quantize_radial(chi, params)?;
    Ok(crate::quantize::l2_operator_norm(&q.operator))
}

/// Parameters of the phase-space zone decomposition.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ZoneConfig {
    /// spectral parameter Λ ≥ 1
    pub lambda: f64,
    /// transverse codimension parameter d ≥ 1
    pub d: f64,
    /// microlocalization constant C (radius of E_C is C√Λ)
    pub c_micro: f64,
    /// inner zone constant c₀
    pub c0: f64,
    /// outer zone constant C₀
    pub c_big: f64,
}

/// Radius intervals (in |z|) of the active zones plus the disjointness and
/// regime flags.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ZoneReport {
    /// E_C ∩ E₂ = ∅, i.e. C√Λ < ½ c₀ √d (strict)
    pub disjoint: bool,
    /// Λ/d ≤ 1/C₁ with the effective C₁ = (2C/c₀)²
    pub regime_ok: bool,
    pub c1_effective: f64,
    pub lambda_over_d: f64,
    /// E₃ = {|z| ≤ c₀√d}
    pub e3: (f64, f64),
    /// E₂ = {c₀√d ≤ |z| ≤ C₀√d}
    pub e2: (f64, f64),
    /// E_I = {|z| ≥ C₀√d}
    pub e_i: (f64, f64),
    /// E_C = {|z| ≤ C√Λ}
    pub e_c: (f64, f64),
}

/// Evaluate the zone inequalities exactly (pure arithmetic).
pub fn zone_planner(cfg: &ZoneConfig) -> ZoneReport {
    assert!(cfg.lambda >= 1.0 && cfg.d >= 1.0, "Λ, d must be ≥ 1");
    assert!(
        cfg.c_micro > 0.0 && cfg.c0 > 0.0 && cfg.c_big > 0.0,
        "zone constants must be positive"
    );
    let sqrt_d = cfg.d.sqrt();
    let lhs = cfg.c_micro * cfg.lambda.sqrt();
    let rhs = 0.5 * cfg.c0 * sqrt_d;
    let c1_effective = (2.0 * cfg.c_micro / cfg.c0).powi(2);
    let lambda_over_d = cfg.lambda / cfg.d;
    ZoneReport {
        disjoint: lhs < rhs,
        regime_ok: lambda_over_d <= 1.0 / c1_effective,
        c1_effective,
        lambda_over_d,
        e3: (0.0, cfg.c0 * sqrt_d),
        e2: (cfg.c0 * sqrt_d, cfg.c_big * sqrt_d),
        e_i: (cfg.c_big * sqrt_d, f64::INFINITY),
        e_c: (0.0, lhs),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{FockVector, MultiIndex};
    use crate::quad::gauss_hermite;
    use crate::quantize::{antiwick_quantize_radial, l2_operator_norm};
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn c64(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn sigma_convention() {
        // adopted sign: σ((y₁,η₁),(y₂,η₂)) = η₁y₂ - y₁η₂ (bilinear
        // antisymmetric; the group-law oracle fixes the overall sign)
        let y1 = [c64(0.3, 0.0)];
        let y2 = [c64(0.0, 0.2)];
        assert_abs_diff_eq!(symplectic_form(&y1, &y2), -0.06, epsilon = 1e-15);
        assert_abs_diff_eq!(symplectic_form(&y2, &y1), 0.06, epsilon = 1e-15);
        assert_abs_diff_eq!(symplectic_form(&y1, &y1), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn translation_at_origin_is_identity() {
        let params = TruncationParams::new(2, 4);
        let q = translation_op(&[c64(0.0, 0.0), c64(0.0, 0.0)], params).unwrap();
        let id = FockOperator::identity(params);
        assert!(q.operator.max_entry_difference(&id) < 1e-15);
    }

    #[test]
    fn vacuum_element_matches_quadrature_oracle() {
        // ⟨τ_Y e₀, e₀⟩ = e^{|Y|²/2} ∫ e^{i(Y w̄ + Ȳ w)} dν'(w), computed by a
        // 2D Gauss-Hermite rule with no series in sight
        let params = TruncationParams::new(1, 30);
        let y = c64(0.3, 0.0);
        let q = translation_op(&[y], params).unwrap();
        let element = q.operator.matrix()[(0, 0)];

        let rule = gauss_hermite(32);
        let mut acc = c64(0.0, 0.0);
        for (&x, &wx) in rule.0.iter().zip(&rule.1) {
            for (&v, &wv) in rule.0.iter().zip(&rule.1) {
                let w = c64(x, v);
                let phase = Complex64::i() * (y * w.conj() + y.conj() * w);
                acc += phase.exp() * (wx * wv);
            }
        }
        acc /= std::f64::consts::PI;
        acc *= (y.norm_sqr() / 2.0).exp();
        assert_abs_diff_eq!((element - acc).norm(), 0.0, epsilon = 1e-12);
        // closed form e^{-|Y|²/2}
        assert_abs_diff_eq!(element.re, (-y.norm_sqr() / 2.0).exp(), epsilon = 1e-12);
    }

    #[test]
    fn matrix_elements_match_laguerre_closed_form() {
        // τ_Y = exp(i(Y a + Ȳ a*)) = D(ξ) with ξ = i Ȳ, and
        // ⟨b|D(ξ)|a⟩ = √(a!/b!) ξ^{b-a} e^{-|ξ|²/2} L_a^{(b-a)}(|ξ|²)
        fn assoc_laguerre(k: u32, alpha: i64, x: f64) -> f64 {
            let mut prev = 1.0f64;
            if k == 0 {
                return prev;
            }
            let mut curr = 1.0 + alpha as f64 - x;
            for m in 1..k {
                let mf = m as f64;
                let next = ((2.0 * mf + 1.0 + alpha as f64 - x) * curr
                    - (mf + alpha as f64) * prev)
                    / (mf + 1.0);
                prev = curr;
                curr = next;
            }
            curr
        }
        let params = TruncationParams::new(1, 12);
        let y = c64(0.4, -0.3);
        let xi = Complex64::i() * y.conj();
        let q = translation_op(&[y], params).unwrap();
        for a in 0..=12u32 {
            for b in a..=12u32 {
                let expect = (factorial(a as u64) / factorial(b as u64)).sqrt()
                    * xi.powu(b - a)
                    * (-xi.norm_sqr() / 2.0).exp()
                    * assoc_laguerre(a, (b - a) as i64, xi.norm_sqr());
                let got = q.operator.matrix()[(b as usize, a as usize)];
                assert_abs_diff_eq!((got - expect).norm(), 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn elements_match_moment_series_oracle() {
        // the Gaussian-moment series is exact at small |Y|; the production
        // recurrence path must reproduce it there, including all phases
        for y in [c64(0.3, 0.0), c64(0.2, -0.5), c64(-0.7, 0.4)] {
            for a in 0..=10u32 {
                for b in 0..=10u32 {
                    let fast = translation_matrix(&[y], TruncationParams::new(1, 10)).matrix()
                        [(b as usize, a as usize)];
                    let oracle = translation_element_series(y, a, b);
                    assert_abs_diff_eq!((fast - oracle).norm(), 0.0, epsilon = 1e-11);
                }
            }
        }
    }

    #[test]
    fn truncated_translation_is_nearly_unitary_on_low_degrees() {
        let params = TruncationParams::new(1, 40);
        let q = translation_op(&[c64(0.3, 0.0)], params).unwrap();
        let basis = FockBasis::new(params);
        for k in [0u32, 5, 10, 20] {
            let e = FockVector::basis_vector(&basis, &MultiIndex::new(vec![k]));
            let image = q.operator.apply(&e).unwrap();
            assert_abs_diff_eq!(image.norm(), 1.0, epsilon = 1e-8);
        }
    }

    #[test]
    fn group_law_with_phase() {
        let params = TruncationParams::new(1, 40);
        let y1 = [c64(0.3, 0.0)];
        let y2 = [c64(0.0, 0.2)];
        let (product, phase) = compose_translations(&y1, &y2, params).unwrap();
        let direct = translation_op(&[y1[0] + y2[0]], params).unwrap();
        let predicted = direct.operator.scale(phase);
        // compare on the degree ≤ 10 block
        let defect = restrict_columns(&product.sub(&predicted).unwrap(), 10);
        let block_max: f64 = defect
            .matrix()
            .iter()
            .map(|x| x.norm())
            .fold(0.0, f64::max);
        assert!(block_max < 1e-6, "group-law defect {block_max}");

        // negative control: flipped σ misses by a visible margin
        let flipped = direct
            .operator
            .scale(Complex64::from_polar(1.0, symplectic_form(&y1, &y2)));
        let wrong = restrict_columns(&product.sub(&flipped).unwrap(), 10);
        let wrong_max: f64 = wrong.matrix().iter().map(|x| x.norm()).fold(0.0, f64::max);
        assert!(wrong_max > 1e-2, "sign flip undetected: {wrong_max}");

        // order swap conjugates the phase
        let (_, phase_swapped) = compose_translations(&y2, &y1, params).unwrap();
        assert_abs_diff_eq!((phase_swapped - phase.conj()).norm(), 0.0, epsilon = 1e-15);

        // Y₂ = 0 degenerates to τ_{Y₁} with unit phase
        let (product0, phase0) = compose_translations(&y1, &[c64(0.0, 0.0)], params).unwrap();
        let t1 = translation_op(&y1, params).unwrap();
        assert!(product0.max_entry_difference(&t1.operator) < 1e-12);
        assert_abs_diff_eq!((phase0 - c64(1.0, 0.0)).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn accuracy_radius_guard() {
        let params = TruncationParams::new(1, 8);
        assert!(translation_op(&[c64(2.0, 0.0)], params).is_err());
    }

    #[test]
    fn narrow_gaussian_superposition_is_near_identity() {
        let params = TruncationParams::new(1, 16);
        let weight = TranslationWeight::Gaussian {
            n: 1,
            center: vec![c64(0.0, 0.0)],
            width: 0.01,
            mass: 1.0,
        };
        let q = weighted_superposition(&weight, params, 1e-8).unwrap();
        let id = FockOperator::identity(params);
        let defect = restrict_columns(&q.operator.sub(&id).unwrap(), 8);
        let max: f64 = defect.matrix().iter().map(|x| x.norm()).fold(0.0, f64::max);
        assert!(max < 5e-3, "narrow superposition defect {max}");
    }

    #[test]
    fn superposition_norm_bounded_by_l1() {
        let params = TruncationParams::new(1, 20);
        let weight = TranslationWeight::Gaussian {
            n: 1,
            center: vec![c64(0.2, -0.1)],
            width: 0.5,
            mass: 0.7,
        };
        let q = weighted_superposition(&weight, params, 1e-7).unwrap();
        let norm = l2_operator_norm(&q.operator);
        assert!(
            norm <= weight.l1_norm() + 1e-6,
            "norm {norm} exceeds ∫|m| = {}",
            weight.l1_norm()
        );
    }

    #[test]
    fn cutoff_fourier_weight_reproduces_antiwick_quantization() {
        // three-way agreement: superposition grid vs radial quadrature vs
        // the closed form λ_k = (1 + 1/(2s²))^{-(k+1)} at n = 1
        let params = TruncationParams::new(1, 10);
        let s = 0.9f64;
        let weight = TranslationWeight::CutoffFourier { n: 1, chi_width: s };
        let q = weighted_superposition(&weight, params, 1e-7).unwrap();
        let radial = antiwick_quantize_radial(&RadialSymbol::gaussian(1, s), params).unwrap();
        let defect = q.operator.max_entry_difference(&radial.operator);
        assert!(defect < 1e-5, "construction paths disagree by {defect}");
        for k in 0..=10usize {
            let closed = (1.0 + 1.0 / (2.0 * s * s)).powi(-(k as i32 + 1));
            assert_relative_eq!(
                radial.operator.matrix()[(k, k)].re,
                closed,
                max_relative = 1e-9
            );
        }
    }

    #[test]
    fn compose_weights_identity_limit() {
        // m₂ → point mass: m₃ ≈ m₁ in the superposition it generates
        let params = TruncationParams::new(1, 12);
        let m1 = TranslationWeight::Gaussian {
            n: 1,
            center: vec![c64(0.1, 0.05)],
            width: 0.4,
            mass: 0.8,
        };
        let m2 = TranslationWeight::Gaussian {
            n: 1,
            center: vec![c64(0.0, 0.0)],
            width: 0.02,
            mass: 1.0,
        };
        let (m3, converged, _) = compose_weights(&m1, &m2, 48, 1e-4).unwrap();
        assert!(converged);
        let f3 = weighted_superposition(&m3, params, 1e-6).unwrap();
        let f1 = weighted_superposition(&m1, params, 1e-6).unwrap();
        let defect = restrict_columns(&f3.operator.sub(&f1.operator).unwrap(), 6);
        let max: f64 = defect.matrix().iter().map(|x| x.norm()).fold(0.0, f64::max);
        assert!(max < 2e-2, "identity-limit defect {max}");
    }

    #[test]
    fn zone_planner_witnesses() {
        let report = zone_planner(&ZoneConfig {
            lambda: 10.0,
            d: 1e4,
            c_micro: 1.0,
            c0: 1.0,
            c_big: 2.0,
        });
        assert!(report.disjoint); // 3.16 < 50
        let report = zone_planner(&ZoneConfig {
            lambda: 100.0,
            d: 25.0,
            c_micro: 1.0,
            c0: 1.0,
            c_big: 2.0,
        });
        assert!(!report.disjoint); // 10 ≥ 2.5
        // boundary: CΛ^{1/2} = ½ c₀ d^{1/2} exactly → not disjoint
        let report = zone_planner(&ZoneConfig {
            lambda: 1.0,
            d: 4.0,
            c_micro: 1.0,
            c0: 1.0,
            c_big: 2.0,
        });
        assert!(!report.disjoint);
        assert!(report.regime_ok); // the non-strict Λ/d ≤ 1/C₁ holds at the boundary
    }

    #[test]
    fn zone_flags_monotone() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for _ in 0..200 {
            let lambda = rng.gen_range(1.0..1e4);
            let d = rng.gen_range(1.0..1e6);
            let cfg = ZoneConfig {
                lambda,
                d,
                c_micro: 1.0,
                c0: 1.0,
                c_big: 2.0,
            };
            let base = zone_planner(&cfg).disjoint;
            let more_d = zone_planner(&ZoneConfig { d: d * 2.0, ..cfg }).disjoint;
            let more_lambda = zone_planner(&ZoneConfig {
                lambda: lambda * 2.0,
                ..cfg
            })
            .disjoint;
            if base {
                assert!(more_d, "monotone in d violated");
            }
            if more_lambda {
                assert!(base, "antitone in Λ violated");
            }
        }
    }

    #[test]
    fn cutoff_bound_examples() {
        // n=2, ρ=0.4: (nρ²)^{2n}-style arithmetic gives 0.0064
        assert_relative_eq!(cutoff_norm_bound(0.4, 2, 1.0), 0.0064, max_relative = 1e-12);
        // ρ → 0 sends the bound to 0
        assert!(cutoff_norm_bound(1e-6, 3, 1.0) < 1e-30);
        // Stirling envelope dominates for k = e, all n ≤ 12, ρ ≤ 1
        for n in 1..=12usize {
            for i in 1..=10 {
                let rho = i as f64 / 10.0;
                assert!(
                    cutoff_norm_bound(rho, n, 1.0) <= cutoff_norm_envelope(rho, n) + 1e-15,
                    "envelope violated at n={n} ρ={rho}"
                );
            }
        }
    }

    #[test]
    fn measured_cutoff_norm_paths_agree() {
        let params = TruncationParams::new(2, 14);
        let chi = RadialSymbol::cutoff_reference_bump(2, 0.4);
        let fast = measured_cutoff_norm(&chi, params).unwrap();
        let dense = measured_cutoff_norm_dense(&chi, params).unwrap();
        assert_relative_eq!(fast, dense, max_relative = 1e-9);
    }
}
