//! Adaptive composite Simpson quadrature.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveSimpson {
    pub abs_tol: f64,
    /// The effective target is min(abs_tol, rel_tol·|I|), so small integrals keep their relative accuracy.
    pub rel_tol: f64,
    pub initial_panels: usize,
    pub max_panels: usize,
}

impl Default for AdaptiveSimpson {
    fn default() -> Self {
        Self { abs_tol: 1e-10, rel_tol: 1e-11, initial_panels: 32, max_panels: 1 << 20 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error_estimate: f64,
    pub panels: usize,
    pub evaluations: usize,
    pub converged: bool,
}

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
}

impl AdaptiveSimpson {
    pub fn with_panels(initial_panels: usize) -> Self {
        Self { initial_panels: initial_panels.max(1), ..Self::default() }
    }

    pub fn integrate<F, E>(&self, a: f64, b: f64, mut f: F) -> Result<Integral, E>
    where
        F: FnMut(f64) -> Result<f64, E>,
    {
        if b <= a {
            return Ok(Integral { value: 0.0, error_estimate: 0.0, panels: 0, evaluations: 0, converged: true });
        }
        let n0 = self.initial_panels.max(1);
        let width = b - a;
        let h = width / n0 as f64;
        let mut evaluations = 0usize;
        let mut eval = |x: f64, evaluations: &mut usize| {
            *evaluations += 1;
            f(x)
        };

        let mut stack = Vec::with_capacity(n0);
        let mut fa = eval(a, &mut evaluations)?;
        let mut coarse = 0.0;
        for i in 0..n0 {
            let pa = a + h * i as f64;
            let pb = if i + 1 == n0 { b } else { a + h * (i + 1) as f64 };
            let fm = eval(0.5 * (pa + pb), &mut evaluations)?;
            let fb = eval(pb, &mut evaluations)?;
            let whole = (pb - pa) / 6.0 * (fa + 4.0 * fm + fb);
            coarse += whole;
            stack.push(Panel { a: pa, b: pb, fa, fm, fb, whole });
            fa = fb;
        }
        stack.reverse();

        let target = if coarse == 0.0 { self.abs_tol } else { self.abs_tol.min(self.rel_tol * coarse.abs()) };
        let min_width = width * 1e-13;
        let mut panels = n0;
        let mut value = 0.0;
        let mut compensation = 0.0;
        let mut error_estimate = 0.0;
        let mut converged = true;

        while let Some(p) = stack.pop() {
            let m = 0.5 * (p.a + p.b);
            let lm = 0.5 * (p.a + m);
            let rm = 0.5 * (m + p.b);
            let flm = eval(lm, &mut evaluations)?;
            let frm = eval(rm, &mut evaluations)?;
            let left = (m - p.a) / 6.0 * (p.fa + 4.0 * flm + p.fm);
            let right = (p.b - m) / 6.0 * (p.fm + 4.0 * frm + p.fb);
            let delta = left + right - p.whole;
            let local_tol = target * (p.b - p.a) / width;
            let exhausted = panels >= self.max_panels || (p.b - p.a) < min_width;
            if delta.abs() <= 15.0 * local_tol || exhausted {
                if exhausted && delta.abs() > 15.0 * local_tol {
                    converged = false;
                }
                // Kahan summation keeps the running total independent of panel count.
                let y = left + right + delta / 15.0 - compensation;
                let t = value + y;
                compensation = (t - value) - y;
                value = t;
                error_estimate += delta.abs() / 15.0;
            } else {
                panels += 1;
                stack.push(Panel { a: m, b: p.b, fa: p.fm, fm: frm, fb: p.fb, whole: right });
                stack.push(Panel { a: p.a, b: m, fa: p.fa, fm: flm, fb: p.fm, whole: left });
            }
        }

        Ok(Integral { value, error_estimate, panels, evaluations, converged })
    }
}
