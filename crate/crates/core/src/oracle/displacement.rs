//! Number-basis matrix elements of `D(β) = exp(βc† - β*c)`.
//!
//! For `m ≥ n`,
//! `⟨m|D(β)|n⟩ = e^{-|β|²/2} β^{m-n} √(n!/m!) L_n^{(m-n)}(|β|²)`,
//! and `⟨m|D(β)|n⟩ = conj⟨n|D(-β)|m⟩` covers the upper triangle. Each
//! diagonal is generated by a normalized three-term Laguerre recurrence with
//! the prefactor carried in log space.

use ndarray::Array2;

use crate::C64;

fn ln_factorials(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    out.push(0.0);
    for i in 1..=n {
        acc += (i as f64).ln();
        out.push(acc);
    }
    out
}

/// Values `e^{-x/2} |β|^a √(n!/(n+a)!) L_n^{(a)}(x)` for `n = 0..len`.
fn diagonal(a: usize, x: f64, ln_abs_beta: f64, ln_fact: &[f64], len: usize, out: &mut Vec<f64>) {
    out.clear();
    if len == 0 {
        return;
    }
    let ln_pref = if a == 0 { -0.5 * x } else { -0.5 * x + a as f64 * ln_abs_beta - 0.5 * ln_fact[a] };
    if ln_pref == f64::NEG_INFINITY {
        out.resize(len, 0.0);
        return;
    }
    const BIG: f64 = 1e150;
    let ln_big = BIG.ln();
    let af = a as f64;
    let mut scale = ln_pref;
    let (mut prev, mut cur) = (0.0_f64, 1.0_f64);
    out.push(scale.exp());
    for n in 0..len - 1 {
        let nf = n as f64;
        let next = ((2.0 * nf + 1.0 + af - x) * cur - (nf * (nf + af)).sqrt() * prev)
            / ((nf + 1.0) * (nf + 1.0 + af)).sqrt();
        prev = cur;
        cur = next;
        if cur.abs() > BIG {
            cur /= BIG;
            prev /= BIG;
            scale += ln_big;
        } else if cur.abs() < 1.0 / BIG && prev.abs() < 1.0 / BIG && cur != 0.0 {
            cur *= BIG;
            prev *= BIG;
            scale -= ln_big;
        }
        out.push(cur * scale.exp());
    }
}

/// Columns `0..n_cols` of the `(n_max + 1)`-row truncated displacement matrix.
pub fn displacement_columns(beta: C64, n_max: usize, n_cols: usize) -> Array2<C64> {
    let rows = n_max + 1;
    let n_cols = n_cols.min(rows);
    let mut d = Array2::<C64>::zeros((rows, n_cols));
    let x = beta.norm_sqr();
    let r = beta.norm();
    let ln_r = r.ln();
    let unit = if r > 0.0 { beta / r } else { C64::new(1.0, 0.0) };
    let ln_fact = ln_factorials(rows);
    let mut buf = Vec::new();

    // lower triangle and diagonal: m = n + a
    for a in 0..rows {
        let len = n_cols.min(rows - a);
        if len == 0 {
            break;
        }
        diagonal(a, x, ln_r, &ln_fact, len, &mut buf);
        let phase = unit.powu(a as u32);
        for (n, v) in buf.iter().enumerate() {
            d[[n + a, n]] = phase * *v;
        }
    }
    // upper triangle: n = m + a, phase (-β*/|β|)^a
    let upper_unit = -unit.conj();
    for a in 1..n_cols {
        let len = n_cols - a;
        diagonal(a, x, ln_r, &ln_fact, len, &mut buf);
        let phase = upper_unit.powu(a as u32);
        for (m, v) in buf.iter().enumerate() {
            d[[m, m + a]] = phase * *v;
        }
    }
    d
}

/// The full `(n_max + 1)²` truncated displacement matrix.
pub fn displacement_matrix(beta: C64, n_max: usize) -> Array2<C64> {
    displacement_columns(beta, n_max, n_max + 1)
}
