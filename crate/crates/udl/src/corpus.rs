//! Seeded generator of well-dimensioned UDL programs.
//!
//! The benchmark harness and the evaluator-equivalence tests both need
//! programs that are dimensionally correct by construction but otherwise
//! varied. Every generated expression keeps each axis exponent in [-2, 2]
//! at every node (print conversions may reach +/-4), so the programs check
//! cleanly under vectors, strict packed codes, and compat packed codes
//! alike. All leaf values are positive, which keeps sqrt and fractional
//! powers inside their domains.
//!
//! Composite subexpressions are always parenthesized when embedded, so the
//! parsed tree is exactly the generated tree and evaluation order is fully
//! determined by the generator.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Dim3 = [i64; 3];

const HEADER: &str = "\
dim length;
dim mass;
dim time;
unit m = base(length, 1.0);
unit g = base(mass, 1e-3);
unit s = base(time, 1.0);
unit cm = m / 100;
unit kg = 1000 * g;
";

const LITS: &[&str] = &["0.25", "0.5", "1.25", "1.5", "2", "2.5", "3", "4", "9.81", "10"];

/// Exponents drawn for binding dimensions, biased toward small values.
const TARGET_EXPS: &[i64] = &[-2, -1, -1, 0, 0, 0, 0, 1, 1, 2];

/// Generates one program. The same seed always yields the same text.
pub fn generate_program(seed: u64) -> String {
    let mut gen = Generator {
        rng: ChaCha8Rng::seed_from_u64(seed),
        vars: Vec::new(),
        consts: Vec::new(),
    };
    gen.program()
}

struct Generator {
    rng: ChaCha8Rng,
    vars: Vec<(String, Dim3)>,
    consts: Vec<(String, Dim3)>,
}

impl Generator {
    fn program(&mut self) -> String {
        let mut out = String::from(HEADER);
        let n_consts = self.rng.gen_range(0..=2);
        for i in 0..n_consts {
            let dim = self.target_dim();
            let (text, _) = self.expr(dim, 2, false);
            let name = format!("c{i}");
            out.push_str(&format!("const {name} = {text};\n"));
            self.consts.push((name, dim));
        }
        let n_lets = self.rng.gen_range(3..=6);
        for i in 0..n_lets {
            let dim = self.target_dim();
            let depth = self.rng.gen_range(2..=3);
            let (text, _) = self.expr(dim, depth, true);
            let annotation = self.unit_product(dim);
            let suffix = match self.rng.gen_range(0..10) {
                0 | 1 => " @single",
                2 => " @double",
                _ => "",
            };
            let name = format!("v{i}");
            out.push_str(&format!("let {name} : {annotation}{suffix} = {text};\n"));
            self.vars.push((name, dim));
        }
        for _ in 0..self.rng.gen_range(1..=3) {
            let (expr, dim) = self.print_expr();
            let unit = self.unit_product(dim);
            out.push_str(&format!("print {expr} in {unit};\n"));
        }
        out
    }

    fn target_dim(&mut self) -> Dim3 {
        let mut dim = [0i64; 3];
        for e in &mut dim {
            *e = TARGET_EXPS[self.rng.gen_range(0..TARGET_EXPS.len())];
        }
        dim
    }

    fn print_expr(&mut self) -> (String, Dim3) {
        let (a_name, a_dim) = self.vars[self.rng.gen_range(0..self.vars.len())].clone();
        if self.rng.gen_bool(0.4) && self.vars.len() > 1 {
            let (b_name, b_dim) = self.vars[self.rng.gen_range(0..self.vars.len())].clone();
            let dim = [a_dim[0] + b_dim[0], a_dim[1] + b_dim[1], a_dim[2] + b_dim[2]];
            (format!("{a_name} * {b_name}"), dim)
        } else {
            (a_name, a_dim)
        }
    }

    /// An expression of the given dimension. Returns the text and whether it
    /// is composite (needs parentheses when embedded).
    fn expr(&mut self, dim: Dim3, depth: u32, allow_vars: bool) -> (String, bool) {
        if depth == 0 {
            return self.atom(dim, allow_vars);
        }
        let next = depth - 1;
        match self.rng.gen_range(0..100) {
            0..=19 => {
                let l = self.expr(dim, next, allow_vars);
                let r = self.expr(dim, next, allow_vars);
                (format!("{} + {}", wrap(l), wrap(r)), true)
            }
            20..=54 => {
                let (d1, d2) = self.mul_split(dim);
                let l = self.expr(d1, next, allow_vars);
                let r = self.expr(d2, next, allow_vars);
                (format!("{} * {}", wrap(l), wrap(r)), true)
            }
            55..=74 => {
                let (d1, d2) = self.div_split(dim);
                let l = self.expr(d1, next, allow_vars);
                let r = self.expr(d2, next, allow_vars);
                (format!("{} / {}", wrap(l), wrap(r)), true)
            }
            75..=84 if dim.iter().all(|e| e.abs() <= 1) => {
                let base = [dim[0] * 2, dim[1] * 2, dim[2] * 2];
                let (inner, _) = self.expr(base, next, allow_vars);
                (format!("sqrt({inner})"), false)
            }
            85..=92 => {
                let k = self.rng.gen_range(2..=3);
                if dim.iter().all(|e| e % k == 0) {
                    let base = [dim[0] / k, dim[1] / k, dim[2] / k];
                    let b = self.expr(base, next, allow_vars);
                    (format!("{}^{k}", wrap_always(b)), true)
                } else {
                    self.atom(dim, allow_vars)
                }
            }
            _ => {
                // A rational power p/q whose base dimension dim*q/p stays
                // integral and inside the exponent budget.
                let choices: &[(i64, i64)] = &[(1, 2), (1, 3), (2, 1), (3, 1), (3, 2), (2, 3)];
                let pick = choices
                    .iter()
                    .find(|(p, q)| {
                        dim.iter().all(|e| (e * q) % p == 0 && (e * q / p).abs() <= 2)
                    })
                    .copied();
                match pick {
                    Some((p, q)) => {
                        let base = [dim[0] * q / p, dim[1] * q / p, dim[2] * q / p];
                        let (inner, _) = self.expr(base, next, allow_vars);
                        (format!("pow({inner}, {p}, {q})"), false)
                    }
                    None => self.atom(dim, allow_vars),
                }
            }
        }
    }

    fn mul_split(&mut self, dim: Dim3) -> (Dim3, Dim3) {
        let mut d1 = [0i64; 3];
        for i in 0..3 {
            let lo = (dim[i] - 2).max(-2);
            let hi = (dim[i] + 2).min(2);
            d1[i] = self.rng.gen_range(lo..=hi);
        }
        (d1, [dim[0] - d1[0], dim[1] - d1[1], dim[2] - d1[2]])
    }

    fn div_split(&mut self, dim: Dim3) -> (Dim3, Dim3) {
        let mut d2 = [0i64; 3];
        for i in 0..3 {
            let lo = (-2 - dim[i]).max(-2);
            let hi = (2 - dim[i]).min(2);
            d2[i] = self.rng.gen_range(lo..=hi);
        }
        ([dim[0] + d2[0], dim[1] + d2[1], dim[2] + d2[2]], d2)
    }

    fn atom(&mut self, dim: Dim3, allow_vars: bool) -> (String, bool) {
        let mut pool: Vec<String> = Vec::new();
        if allow_vars {
            pool.extend(self.vars.iter().filter(|(_, d)| *d == dim).map(|(n, _)| n.clone()));
        }
        pool.extend(self.consts.iter().filter(|(_, d)| *d == dim).map(|(n, _)| n.clone()));
        if !pool.is_empty() && self.rng.gen_bool(0.35) {
            let name = pool[self.rng.gen_range(0..pool.len())].clone();
            return (name, false);
        }
        let lit = LITS[self.rng.gen_range(0..LITS.len())];
        if dim == [0, 0, 0] {
            (lit.to_string(), false)
        } else {
            (format!("{lit} * {}", self.unit_product(dim)), true)
        }
    }

    /// A unit expression spelling the dimension, like `m^2 * kg / s^2`.
    fn unit_product(&mut self, dim: Dim3) -> String {
        let choices: [[&str; 2]; 3] = [["m", "cm"], ["g", "kg"], ["s", "s"]];
        let mut numerator = Vec::new();
        let mut denominator = Vec::new();
        for axis in 0..3 {
            let e = dim[axis];
            if e == 0 {
                continue;
            }
            let unit = choices[axis][self.rng.gen_range(0..2)];
            if e > 0 {
                numerator.push(pow_text(unit, e));
            } else {
                denominator.push(pow_text(unit, -e));
            }
        }
        let mut text = if numerator.is_empty() { "1".to_string() } else { numerator.join(" * ") };
        for part in denominator {
            text.push_str(&format!(" / {part}"));
        }
        text
    }
}

fn pow_text(unit: &str, exp: i64) -> String {
    if exp == 1 {
        unit.to_string()
    } else {
        format!("{unit}^{exp}")
    }
}

fn wrap((text, composite): (String, bool)) -> String {
    if composite {
        format!("({text})")
    } else {
        text
    }
}

fn wrap_always((text, _): (String, bool)) -> String {
    format!("({text})")
}
