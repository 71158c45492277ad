/// One scanned divisor `k1 omega + <c, Omega>`.
#[derive(Clone, Debug, PartialEq)]
pub struct DivisorTuple {
    pub k1: i32,
    /// Integer combination of the transverse frequencies.
    pub combo: Vec<i32>,
    pub value: f64,
}

/// Result of the nonresonance scan.
#[derive(Clone, Debug, PartialEq)]
pub struct MelnikovReport {
    /// Smallest divisor modulus found.
    pub alpha: f64,
    pub worst_offender: DivisorTuple,
    pub delta_min: f64,
    pub pass: bool,
}

/// Scan `|omega|`, `|k1 omega ± Omega_j|` for `|k1| <= K` and
/// `|k1 omega ± Omega_l ± Omega_k|` for `1 <= |k1| <= K`.
pub fn check_melnikov(omega: f64, big_omega: &[f64], k_max: i32, delta_min: f64) -> MelnikovReport {
    let n2 = big_omega.len();
    let mut best = DivisorTuple {
        k1: 1,
        combo: vec![0; n2],
        value: omega.abs(),
    };
    let mut consider = |k1: i32, combo: Vec<i32>| {
        let v = (k1 as f64 * omega
            + combo.iter().zip(big_omega).map(|(&c, &w)| c as f64 * w).sum::<f64>())
        .abs();
        if v < best.value {
            best = DivisorTuple { k1, combo, value: v };
        }
    };
    for k1 in -k_max..=k_max {
        for j in 0..n2 {
            for sj in [-1, 1] {
                let mut c = vec![0; n2];
                c[j] = sj;
                consider(k1, c);
            }
        }
        if k1 == 0 {
            continue;
        }
        for l in 0..n2 {
            for k in l..n2 {
                for sl in [-1, 1] {
                    for sk in [-1, 1] {
                        let mut c = vec![0; n2];
                        c[l] += sl;
                        c[k] += sk;
                        consider(k1, c);
                    }
                }
            }
        }
    }
    MelnikovReport {
        alpha: best.value,
        pass: best.value > delta_min,
        worst_offender: best,
        delta_min,
    }
}
