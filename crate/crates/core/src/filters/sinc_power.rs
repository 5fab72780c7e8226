//! Integrals of `sinc(s x)^p` by Gauss-Legendre panels aligned to sinc zeros.

use crate::quadrature::GaussLegendre;
use crate::real::Real;

const GL_ORDER: usize = 20;
const SUBPANELS: usize = 2;
const MAX_PANELS: usize = 100_000;

/// Tabulated antiderivative `Phi(x) = int_0^x sinc(scale u)^power du`.
#[derive(Debug, Clone)]
pub struct SincPowerIntegral<S> {
    scale: S,
    power: usize,
    subpanels: usize,
    gl: GaussLegendre<S>,
    /// `prefix[q] = Phi(q / scale)`.
    prefix: Vec<S>,
}

impl<S: Real> SincPowerIntegral<S> {
    pub fn new(scale: S, power: usize) -> Self {
        Self::with_refinement(scale, power, 1)
    }

    /// Same rule with `refine` times more subpanels per sinc lobe.
    pub fn with_refinement(scale: S, power: usize, refine: usize) -> Self {
        assert!(power >= 1 && scale > S::zero());
        let gl = GaussLegendre::new(GL_ORDER);
        let subpanels = SUBPANELS * refine.max(1);
        let panels = panel_count(power);
        let mut prefix = Vec::with_capacity(panels + 1);
        prefix.push(S::zero());
        let mut acc = S::zero();
        let mut tmp = Self {
            scale,
            power,
            subpanels,
            gl,
            prefix: Vec::new(),
        };
        for q in 0..panels {
            acc = acc + tmp.panel(q);
            prefix.push(acc);
        }
        tmp.prefix = prefix;
        tmp
    }

    pub fn scale(&self) -> S {
        self.scale
    }

    pub fn power(&self) -> usize {
        self.power
    }

    /// `sinc(scale u)^power`.
    #[inline]
    pub fn integrand(&self, u: S) -> S {
        (self.scale * u).sinc().powi(self.power as i32)
    }

    fn panel_bounds(&self, q: usize) -> (S, S) {
        let lo = S::lit(q as f64) / self.scale;
        let hi = S::lit((q + 1) as f64) / self.scale;
        (lo, hi)
    }

    fn panel(&self, q: usize) -> S {
        let (lo, hi) = self.panel_bounds(q);
        self.piece(lo, hi)
    }

    fn piece(&self, lo: S, hi: S) -> S {
        self.gl.integrate_panels(lo, hi, self.subpanels, |u| self.integrand(u))
    }

    /// `int_0^inf`, up to the truncated tail.
    pub fn half_total(&self) -> S {
        *self.prefix.last().unwrap()
    }

    /// `Phi(x)` for any real `x` (odd in `x`).
    pub fn antiderivative(&self, x: S) -> S {
        if x < S::zero() {
            return -self.antiderivative(-x);
        }
        let pos = x * self.scale;
        let q = pos.floor().to_usize().unwrap_or(usize::MAX);
        if q >= self.prefix.len() - 1 {
            return self.half_total();
        }
        let (lo, _) = self.panel_bounds(q);
        self.prefix[q] + self.piece(lo, x)
    }

    /// `int_a^b sinc(scale u)^power du`, accurate relative to its own size
    /// when the window lies in the tail.
    pub fn integral(&self, a: S, b: S) -> S {
        if b < a {
            return -self.integral(b, a);
        }
        if b <= S::zero() {
            return self.integral(-b, -a);
        }
        if a < S::zero() {
            return self.antiderivative(b) + self.antiderivative(-a);
        }
        if a * self.scale < S::one() {
            return self.antiderivative(b) - self.antiderivative(a);
        }
        // both ends in the tail: sum lobes directly from `a` outward
        let mut acc = S::zero();
        let mut lo = a;
        let mut small = 0;
        while lo < b {
            let next_edge = ((lo * self.scale).floor() + S::one()) / self.scale;
            let hi = if next_edge < b { next_edge } else { b };
            let part = self.piece(lo, hi);
            acc = acc + part;
            if part.abs() <= acc.abs() * S::epsilon() * S::lit(1e-2) {
                small += 1;
                if small >= 4 {
                    break;
                }
            } else {
                small = 0;
            }
            lo = hi;
        }
        acc
    }
}

fn panel_count(power: usize) -> usize {
    // tail beyond q lobes is below (pi q)^(1 - p) / (p - 1); aim for 1e-20
    if power <= 1 {
        return MAX_PANELS;
    }
    let p = power as f64;
    let mut q = 8usize;
    while q < MAX_PANELS {
        let tail = (std::f64::consts::PI * q as f64).powf(1.0 - p) / (p - 1.0);
        if tail < 1e-20 {
            break;
        }
        q *= 2;
    }
    q
}
