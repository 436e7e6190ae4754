//! The builtin claim ledger and the line-oriented ledger format.
//!
//! Exponents are in units of log T0 with x1 = T0^mu; a bound R << T0^a is written as `a`.
//! The targets are 1 + mu*(5/4 - 2*s) for R and 1 + mu*(13/4 - 4*s) for R*.

use super::claim::Claim;
use crate::error::{Error, Result};

pub const BUILTIN_LEDGER: &str = r#"
# two long factors
long.two.a | 1/2 - 1/2 + mu*(1-s) | mu*(1-s) | all | all | | two long factors, mean value side
long.two.b | 5/4 - 1/4 + mu*(5/4-2*s) | 1 + mu*(5/4-2*s) | all | all | | two long factors, fourfold Hoelder split
long.one | 2/7 + mu*12*(1-s)/7 - 6/7*(3/5)*mu; 8/7 + mu*(6/7-12*s/7) | 1 + mu*(5/4-2*s) | all | all | | one factor longer than x1^(3/5)

# sigma <= 3/4
low.trivial | 1 | 1 + mu*(5/4-2*s) | 1/2, 5/8 | all | | trivial count R <= T0
low.mont.a | (3-3*s)/(2-s) | 1 + mu*(5/4-2*s) | 5/8, 7/10 | 4/3, 2 | | Montgomery exponent, mu <= 2
low.mont.b | (3-3*s)/(2-s) | 1 + mu*(5/4-2*s) | 7/10, 3/4 | 4/3, 8/5 | | Montgomery exponent, mu <= 8/5
low.hb | (15-16*s)/2 | 1 + mu*(13/4-4*s) | 1/2, 3/4 | 2, 19/9 | | Heath-Brown R* exponent, mu >= 2
low.case1 | 1/2 - s | 5/4 - 2*s | 1/2, 3/4 | all | | balanced split, short long factor
low.case2a.mu | (2*s-1/2)*mu | 2 | 1/2, 3/4 | 4/3, 2 | | energy case, range of mu
low.case2a | mu*(4-4*s) | 2 + mu*(9/2-6*s) | 1/2, 3/4 | 4/3, 2 | | energy case, R R* product
low.case2a.split | (1 + mu*(5/4-2*s)) + (1 + mu*(13/4-4*s)) | 2 + mu*(9/2-6*s) | all | all | | R R* product splits into both targets
low.case2.rm | (1 + mu*(2-2*s) - (2*mu*(1-s)/3 + 1/3))/2 | 2*mu*(1-s)/3 + 1/3 | 1/2, 3/4 | 4/3, 2 | | R <= M above threshold
low.case2.rm4 | (1 + mu*(2-2*s) - (2*mu*(1-s)/9 + 5/9))/2 | 4*(2*mu*(1-s)/9 + 5/9) - 2 | 1/2, 3/4 | 4/3, 2 | | R <= M^4 T0^-2 above threshold
low.case2b | mu*7*(1-s)/2 - 5/4*(mu*(2*s+1)/5 - 1/5) + 3/4 | 1 + mu*(13/4-4*s) | 1/2, 3/4 | 4/3, 2 | | R^(5/2) term at its threshold
low.case2c | mu*16*(1-s)/5 + 2/5 - 4/5*(mu*(s-1/16) - 3/4) | 1 + mu*(13/4-4*s) | 1/2, 3/4 | 4/3, 2 | | R^(8/5) term at its threshold
low.mu53 | mu - 1 | 2*mu/5 | 1/2, 3/4 | 4/3, 5/3 | | combination lower bound min(x1/T0, x1^(2/5))
low.combine | 2*(1/2) | 3*mu/5 | all | 5/3, 19/9 | | two factors of length <= T0^(1/2) cannot overshoot
low.thr.c | mu*(s-1/16) - 3/4 | 2*mu/5 | 7/10, 3/4 | 5/3, 2 | | x1^(2/5) above the R^(8/5) threshold
low.thr.b | mu*(2*s+1)/5 - 1/5 | 2*mu/5 | 7/10, 3/4 | 5/3, 2 | | x1^(2/5) above the R^(5/2) threshold
low.thr.b.flat | mu/2 - 1/5 | 2*mu/5 | 7/10, 3/4 | 5/3, 2 | | same with the sigma = 3/4 exponent 1/2
low.thr.c.flat | mu*11/16 - 3/4 | 2*mu/5 | 7/10, 3/4 | 5/3, 2 | | same with the sigma = 3/4 exponent 11/16
low.thr.rm4 | 2*mu*(1-s)/9 + 5/9 | 2*mu/5 | 7/10, 3/4 | 5/3, 2 | | x1^(2/5) above the R <= M^4 T0^-2 threshold
low.thr.rm | 2*mu*(1-s)/3 + 1/3 | 2*mu/5 | 7/10, 3/4 | 5/3, 2 | | x1^(2/5) above the R <= M threshold

# sigma >= 3/4, mu <= 4/(4 sigma - 1)
high.hb | (12-12*s)/(4*s-1) | 1 + mu*(13/4-4*s) | 13/16, 1 | 4/3, 4/(4*s-1) | | Heath-Brown R* exponent
high.hux.range | 8/5 | (6*s-4)/((3*s-1)*(2*s-5/4)) | 3/4, 13/16 | all | | Huxley region contains mu <= 8/5
high.hux | (3-3*s)/(3*s-1) | 1 + mu*(5/4-2*s) | 3/4, 13/16 | 4/3, 8/5 | | Huxley exponent, mu <= 8/5
high.case1 | 2 - 3*s | 5/4 - 2*s | 3/4, 1 | all | | both factors in the Huxley range
high.case2 | 1/2 + mu*(1-2*s) + mu/2 | 1 + mu*(5/4-2*s) | 3/4, 13/16 | 4/3, 4/(4*s-1) | | one factor in each range
high.case2.len | mu/2 | 1 | 3/4, 1 | 4/3, 4/(4*s-1) | | shorter factor below T0
high.case3 | mu*(1-s) | 1 + mu*(5/4-2*s) | 3/4, 1 | 4/3, 4/(4*s-1) | | both factors in the mean value range
high.case4a | mu*(4-4*s) | 2 + mu*(9/2-6*s) | 3/4, 1 | 4/3, 4/(4*s-1) | | energy case, R R* product
high.case4.rm | (1 + mu*(6-6*s) - 2*(mu*(1-s) + 1/6))/4 | mu*(1-s) + 1/6 | 3/4, 13/16 | 4/3, 4/(4*s-1) | | R <= M above threshold
high.case4.rm54 | (1 + mu*(6-6*s) - 2*(mu*(1-s)/3 + 1/2))/16 | mu*(1-s)/3 + 1/2 - 1/2 | 3/4, 13/16 | 4/3, 4/(4*s-1) | | R^(5/4) T0^(1/2) <= R M above threshold
high.case4b | mu*17*(1-s)/4 - 5/4*(mu*(4-s)/5 - 1/2) + 3/8 | 1 + mu*(13/4-4*s) | 3/4, 13/16 | 4/3, 4/(4*s-1) | | R^(5/2) term at its threshold
high.case4c | mu*16*(1-s)/5 + 2/5 - 4/5*(mu*(s-1/16) - 3/4) | 1 + mu*(13/4-4*s) | 3/4, 13/16 | 4/3, 4/(4*s-1) | | R^(8/5) term at its threshold
high.thr.a | mu*(1-s) + 1/6 | 2*mu/5 | 3/4, 13/16 | 8/5, 4/(4*s-1) | | x1^(2/5) above the R <= M threshold
high.thr.b | mu*(1-s)/3 + 1/2 | 2*mu/5 | 3/4, 13/16 | 8/5, 4/(4*s-1) | | x1^(2/5) above the R^(5/4) threshold
high.thr.c | mu*(4-s)/5 - 1/2 | 2*mu/5 | 3/4, 13/16 | 8/5, 4/(4*s-1) | | x1^(2/5) above the R^(5/2) threshold
high.thr.d | mu*(s-1/16) - 3/4 | 2*mu/5 | 3/4, 13/16 | 8/5, 4/(4*s-1) | | x1^(2/5) above the R^(8/5) threshold
high.thr.e | mu*(1-s) + 1/6; mu*(4-s)/5 - 1/2; mu*(s-1/16) - 3/4 | mu - 1 | 3/4, 13/16 | 8/5, 4/(4*s-1) | | x1/T0 above three thresholds
high.thr.mu9 | mu*(1-s)/3 + 1/2 | mu - 1 | 3/4, 13/16 | 9/(4+2*s), 4/(4*s-1) | | x1/T0 above the R^(5/4) threshold once mu >= 9/(4+2 sigma)
high.window | mu*(2*s-1/4) - 3/2 | mu - 1 | 3/4, 13/16 | 4/3, 2/(8*s-5) | | M window empty unless mu >= 2/(8 sigma - 5)
high.53.68 | 9/(4+2*s) | 2/(8*s-5) | 3/4, 53/68 | all | | mu window empty below sigma = 53/68
high.hux2 | (3-3*s)/(3*s-1) | 1 + mu*(5/4-2*s) | 3/4, 13/16 | 4/3, 8*(3*s-2)/((8*s-5)*(3*s-1)) | | Huxley exponent on its full mu region
high.crossing | 9/(4+2*s) | 8*(3*s-2)/((8*s-5)*(3*s-1)) | root(168*s^2-271*s+109; 257/336, 43/56), 13/16 | all | | Huxley region covers the window above the crossing
high.sqrt193 | s | 53/68 | root(168*s^2-271*s+109; 257/336, 43/56), root(168*s^2-271*s+109; 257/336, 43/56) | all | strict | crossing point (271 - sqrt 193)/336 below 53/68

# 3/4 <= sigma < 1, mu >= 4/(4 sigma - 1)
big.hb.low | (12-12*s)/(4*s-1) | 1 + mu*(13/4-4*s) | 3/4, 13/16 | 4/(4*s-1), 19/9 | | Heath-Brown R* exponent below 13/16
big.hb2 | (4-4*s)/(4*s-1) | mu*(1-s) | 25/28, 1 | 4/(4*s-1), 19/9 | | Heath-Brown exponent above 25/28 gives condition (i)
big.hb1 | (3-3*s)/(10*s-7) | mu*(1-s) | 16/19, 25/28 | 3/(10*s-7), 19/9 | | Heath-Brown exponent gives condition (i) once mu >= 3/(10 sigma - 7)
big.case1a | (2/(4*s-1))*(2-2*s) | mu*(1-s) | 3/4, 1 | 4/(4*s-1), 19/9 | | raised polynomial in the mean value range
big.case1b.exps | 8-10*s; (23-34*s)/2; (44-64*s)/5 | 0 | 13/16, 25/28 | all | | all M2 exponents negative
big.case1b.cond | 1 + (4-6*s)/(3*s-1); (1 + (4-6*s)/(3*s-1))/4 + 1/2 | 1/(3*s-1) | 13/16, 25/28 | all | | R <= M2 and R^(5/4) T0^(1/2) <= R M2
big.case1b | (7-7*s)/(3*s-1); (18-19*s)/(6*s-2); (34-34*s)/(15*s-5) | 1 + (3/(10*s-7))*((13-16*s)/4) | 13/16, 25/28 | all | | three-term maximum
big.case1c.exps | -(7-7*s); -(18-19*s)/2; -(36-40*s)/5; -(71-79*s)/8 | 0 | 13/16, 25/28 | all | | first four M2 exponents positive
big.case1c | (7-7*s)/(3*s-1); (18-19*s)/(6*s-2); (34-34*s)/(15*s-5); (69-73*s)/(24*s-8); (31-31*s)/(15*s-5); (128-124*s)/(60*s-15) | 1 + ((13-16*s)/4)*(3/(10*s-7)) | 13/16, 25/28 | all | | six-term maximum
big.case1.target | 1 + (3/(10*s-7))*((13-16*s)/4) | 1 + mu*(13/4-4*s) | 13/16, 25/28 | 4/3, 3/(10*s-7) | | R* target at the largest mu
big.case2 | 2 - 6*(2*s-1)/(4*s-1) | mu*(1-s) | 3/4, 1 | 4/(4*s-1), 19/9 | | one long zeta-type factor

# sigma close to 1
close.y | 1 | 9*(4*s-2)/16 | 17/18, 1 | all | | Y^(4 sigma - 2) >= T0
close.r | (5/8)*(2-2*s) | mu*15*(1-s)/16 | 17/18, 1 | all | | Y^(2 - 2 sigma) below x1^(15(1-sigma)/16)
close.k60 | 3*mu/120 | 1/16 | all | all | | k = 60 keeps pieces short

# catalog spot checks
cat.mont.at | (3-3*s)/(2-s) | 1 | 3/4, 3/4 | all | | Montgomery exponent at 3/4
cat.hux.mont | (3-3*s)/(3*s-1) | (3-3*s)/(2-s) | 3/4, 1 | all | | Huxley no worse than Montgomery above 3/4
cat.hb.star | (12-12*s)/(4*s-1) | 3*(3-3*s)/(3*s-1) | 3/4, 1 | all | | R* exponent below three R exponents
"#;

/// The tight claims whose rhs is lowered by 1/100 in mutation checks.
pub const MUTATION_TARGETS: [&str; 5] = ["low.mont.b", "low.hb", "high.hux", "high.hb", "long.one"];

/// Parse ledger text; `#` starts a comment line.
pub fn parse_ledger(text: &str) -> Result<Vec<Claim>> {
    let mut out: Vec<Claim> = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let c = Claim::parse_line(t).map_err(|e| Error::Parse(format!("line {}: {e}", n + 1)))?;
        if out.iter().any(|o| o.id == c.id) {
            return Err(Error::Parse(format!("line {}: duplicate claim id {}", n + 1, c.id)));
        }
        out.push(c);
    }
    Ok(out)
}

pub fn builtin_ledger() -> Vec<Claim> {
    parse_ledger(BUILTIN_LEDGER).expect("builtin ledger parses")
}

#[cfg(test)]
mod tests {
    use super::super::claim::{recheck, verify_claim};
    use super::super::poly::q;
    use super::*;

    #[test]
    fn builtin_ledger_verifies() {
        let ledger = builtin_ledger();
        assert!(ledger.len() >= 20);
        for c in &ledger {
            let v = verify_claim(c).unwrap_or_else(|e| panic!("{}: {e}", c.id));
            assert!(v.holds, "{} fails: {:?}", c.id, v.certificate);
            assert!(recheck(c, &v), "{}", c.id);
        }
    }

    #[test]
    fn tight_claims_flip() {
        let ledger = builtin_ledger();
        let mut flipped = Vec::new();
        for c in &ledger {
            let v = verify_claim(&c.mutated(&q(1, 100))).unwrap();
            if !v.holds {
                flipped.push(c.id.clone());
            }
        }
        for t in MUTATION_TARGETS {
            assert!(flipped.iter().any(|f| f == t), "{t} not tight: {flipped:?}");
        }
    }
}
