//! Downhill simplex minimization.

/// Stopping rules for [`nelder_mead`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NelderMeadOptions {
    pub max_evaluations: usize,
    /// Stop once the spread of function values over the simplex drops below this.
    pub tolerance: f64,
    /// Edge length of the initial simplex.
    pub initial_step: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            max_evaluations: 2000,
            tolerance: 1e-12,
            initial_step: 0.05,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Minimum {
    pub point: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    /// The evaluation budget ran out before the tolerance was met.
    pub exhausted: bool,
}

/// Standard coefficients: reflection 1, expansion 2, contraction ½, shrink ½.
pub fn nelder_mead(f: impl Fn(&[f64]) -> f64, start: &[f64], options: NelderMeadOptions) -> Minimum {
    let n = start.len();
    let evaluations = std::cell::Cell::new(0usize);
    let eval = |x: &[f64]| {
        evaluations.set(evaluations.get() + 1);
        f(x)
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((start.to_vec(), eval(start)));
    for k in 0..n {
        let mut x = start.to_vec();
        x[k] += options.initial_step;
        let v = eval(&x);
        simplex.push((x, v));
    }
    let mut exhausted = false;
    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = simplex[n].1 - simplex[0].1;
        if spread.abs() <= options.tolerance {
            break;
        }
        if evaluations.get() >= options.max_evaluations {
            exhausted = true;
            break;
        }
        let centroid: Vec<f64> = (0..n)
            .map(|k| simplex[..n].iter().map(|(x, _)| x[k]).sum::<f64>() / n as f64)
            .collect();
        let toward = |t: f64, worst: &[f64]| -> Vec<f64> {
            (0..n).map(|k| centroid[k] + t * (worst[k] - centroid[k])).collect()
        };
        let worst = simplex[n].0.clone();
        let reflected = toward(-1.0, &worst);
        let fr = eval(&reflected);
        if fr < simplex[0].1 {
            let expanded = toward(-2.0, &worst);
            let fe = eval(&expanded);
            simplex[n] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (reflected, fr);
        } else {
            let (candidate, fc) = if fr < simplex[n].1 {
                let c = toward(-0.5, &worst);
                let v = eval(&c);
                (c, v)
            } else {
                let c = toward(0.5, &worst);
                let v = eval(&c);
                (c, v)
            };
            if fc < simplex[n].1.min(fr) {
                simplex[n] = (candidate, fc);
            } else {
                let best = simplex[0].0.clone();
                for vertex in simplex.iter_mut().skip(1) {
                    let x: Vec<f64> = (0..n).map(|k| best[k] + 0.5 * (vertex.0[k] - best[k])).collect();
                    let v = eval(&x);
                    *vertex = (x, v);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (point, value) = simplex.swap_remove(0);
    Minimum {
        point,
        value,
        evaluations: evaluations.get(),
        exhausted,
    }
}
