//! One-dimensional minimization over a closed interval.
//!
//! The objectives here are smooth but not known to be unimodal, so the
//! search first evaluates a uniform grid, then refines the best grid cell
//! with golden-section search.
//!
//! ```text
//!   lo   x[i-1]   x[i]   x[i+1]        hi
//!   |------|-------*-------|----- ... ---|
//!          \___ refine ____/
//! ```

/// `(√5 − 1) / 2`
const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct ScanGolden {
    /// Number of grid cells; the scan evaluates `cells + 1` points.
    pub cells: usize,
    /// Golden-section stops once the bracket is narrower than this.
    pub xtol: f64,
    pub max_iter: usize,
}

impl Default for ScanGolden {
    fn default() -> Self {
        ScanGolden {
            cells: 4096,
            xtol: 1e-12,
            max_iter: 200,
        }
    }
}

impl ScanGolden {
    /// Minimize `f` over `[lo, hi]`. A degenerate interval (`hi <= lo`)
    /// returns `lo` directly.
    pub fn minimize<F>(&self, f: F, lo: f64, hi: f64) -> Minimum
    where
        F: Fn(f64) -> f64,
    {
        if hi <= lo {
            return Minimum { x: lo, value: f(lo) };
        }
        let cells = self.cells.max(2);
        let step = (hi - lo) / cells as f64;
        let at = |i: usize| if i == cells { hi } else { lo + step * i as f64 };

        let mut best = Minimum { x: lo, value: f(lo) };
        let mut best_i = 0;
        for i in 1..=cells {
            let x = at(i);
            let value = f(x);
            if value < best.value {
                best = Minimum { x, value };
                best_i = i;
            }
        }

        let left = at(best_i.saturating_sub(1));
        let right = at((best_i + 1).min(cells));
        let refined = golden_section(&f, left, right, self.xtol, self.max_iter);
        if refined.value < best.value {
            refined
        } else {
            best
        }
    }
}

/// Golden-section search on `[a, b]`, assuming a single basin inside.
pub fn golden_section<F>(f: F, a: f64, b: f64, xtol: f64, max_iter: usize) -> Minimum
where
    F: Fn(f64) -> f64,
{
    let (mut a, mut b) = (a, b);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut iter = 0;
    while (b - a) > xtol && iter < max_iter {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        iter += 1;
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    // The midpoint is not always the best point seen.
    [(x, fx), (c, fc), (d, fd)]
        .into_iter()
        .fold(Minimum { x, value: fx }, |m, (x, v)| {
            if v < m.value {
                Minimum { x, value: v }
            } else {
                m
            }
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic() {
        let m = ScanGolden::default().minimize(|x| (x - 0.3).powi(2) + 1.0, -2.0, 5.0);
        assert!((m.x - 0.3).abs() < 1e-7);
        assert!((m.value - 1.0).abs() < 1e-14);
    }

    #[test]
    fn finds_the_deeper_of_two_basins() {
        // Local minimum near -1 at 0.5, global near 2 at 0.
        let f = |x: f64| ((x + 1.0).powi(2) + 0.5).min((x - 2.0).powi(2) * 4.0);
        let m = ScanGolden::default().minimize(f, -3.0, 3.0);
        assert!((m.x - 2.0).abs() < 1e-6, "{m:?}");
    }

    #[test]
    fn minimum_at_endpoint() {
        let m = ScanGolden::default().minimize(|x| x, 1.0, 2.0);
        assert_eq!(m.x, 1.0);
        let m = ScanGolden::default().minimize(|x| -x, 1.0, 2.0);
        assert_eq!(m.x, 2.0);
    }

    #[test]
    fn degenerate_interval() {
        let m = ScanGolden::default().minimize(|x| x * x, 0.5, 0.5);
        assert_eq!(m, Minimum { x: 0.5, value: 0.25 });
    }

    #[test]
    fn golden_converges_to_tolerance() {
        let m = golden_section(|x: f64| (x - 1.0).abs(), 0.0, 3.0, 1e-12, 500);
        assert!((m.x - 1.0).abs() < 1e-11);
    }
}
