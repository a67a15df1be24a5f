use std::str::FromStr;

/// An inclusive, evenly spaced γ grid written `lo:hi:steps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaGrid {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl GammaGrid {
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.lo];
        }
        let step = (self.hi - self.lo) / (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.hi
                } else {
                    self.lo + step * i as f64
                }
            })
            .collect()
    }
}

impl FromStr for GammaGrid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, steps] = parts[..] else {
            return Err(format!("expected lo:hi:steps, got {s:?}"));
        };
        let lo: f64 = lo.trim().parse().map_err(|e| format!("lo {lo:?}: {e}"))?;
        let hi: f64 = hi.trim().parse().map_err(|e| format!("hi {hi:?}: {e}"))?;
        let steps: usize = steps
            .trim()
            .parse()
            .map_err(|e| format!("steps {steps:?}: {e}"))?;
        if steps == 0 {
            return Err("the grid is empty (steps = 0)".into());
        }
        if !(lo.is_finite() && hi.is_finite() && lo > 0.0) {
            return Err("bounds must be finite and lo > 0".into());
        }
        if steps == 1 && hi < lo {
            return Err("hi must not be below lo".into());
        }
        if steps > 1 && hi <= lo {
            return Err("hi must exceed lo when steps > 1".into());
        }
        Ok(GammaGrid { lo, hi, steps })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_spans_endpoints() {
        let g: GammaGrid = "0.2:60:100".parse().unwrap();
        let v = g.values();
        assert_eq!(v.len(), 100);
        assert_eq!((v[0], v[99]), (0.2, 60.0));
        assert!(v.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn single_point() {
        let g: GammaGrid = "1.5:1.5:1".parse().unwrap();
        assert_eq!(g.values(), vec![1.5]);
    }

    #[test]
    fn rejects_bad_specs() {
        for s in ["1:2", "1:2:0", "2:1:5", "0:1:3", "a:1:2", "1:1:2"] {
            assert!(s.parse::<GammaGrid>().is_err(), "{s}");
        }
    }
}
