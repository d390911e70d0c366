//! Pairwise-coprime denominators: M_0 = 1, M_i = 1 + N_i * prod_{k<i} M_k.

use rug::Integer;
use serde::Serialize;

use crate::error::{CftError, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoprimeSeq {
    #[serde(serialize_with = "crate::report::ser_ints")]
    pub inputs: Vec<Integer>,
    #[serde(serialize_with = "crate::report::ser_ints")]
    pub outputs: Vec<Integer>,
}

impl CoprimeSeq {
    /// Checks M_i >= 1 + N_i, gcd(M_i, N_i) = 1 and gcd(M_i, M_j) = 1.
    pub fn verify(&self) -> Result<()> {
        for (i, (n, m)) in self.inputs.iter().zip(&self.outputs).enumerate() {
            if *m < Integer::from(n + 1u32) {
                return Err(CftError::VerificationFailed(format!("M_{} < 1 + N_{}", i + 1, i + 1)));
            }
            if Integer::from(m.gcd_ref(n)) != 1 {
                return Err(CftError::VerificationFailed(format!("gcd(M_{0}, N_{0}) != 1", i + 1)));
            }
            for (j, other) in self.outputs.iter().enumerate().skip(i + 1) {
                if Integer::from(m.gcd_ref(other)) != 1 {
                    return Err(CftError::VerificationFailed(format!(
                        "gcd(M_{}, M_{}) != 1",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(())
    }
}

pub fn coprime_seq(inputs: &[Integer]) -> Result<CoprimeSeq> {
    if inputs.is_empty() {
        return Err(CftError::EmptyInput);
    }
    if inputs.iter().any(|n| *n < 0) {
        return Err(CftError::InvalidArgument("inputs must be nonnegative".into()));
    }
    let mut prod = Integer::from(1);
    let mut outputs = Vec::with_capacity(inputs.len());
    for n in inputs {
        let m = Integer::from(n * &prod) + 1u32;
        prod *= &m;
        outputs.push(m);
    }
    let seq = CoprimeSeq {
        inputs: inputs.to_vec(),
        outputs,
    };
    seq.verify()?;
    Ok(seq)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Integer> {
        v.iter().map(|&x| Integer::from(x)).collect()
    }

    #[test]
    fn examples() {
        assert_eq!(coprime_seq(&ints(&[2, 3])).unwrap().outputs, ints(&[3, 10]));
        assert_eq!(coprime_seq(&ints(&[0])).unwrap().outputs, ints(&[1]));
        assert_eq!(coprime_seq(&ints(&[1, 1, 1])).unwrap().outputs, ints(&[2, 3, 7]));
        assert_eq!(coprime_seq(&[]).unwrap_err(), CftError::EmptyInput);
        assert!(coprime_seq(&ints(&[-1])).is_err());
    }

    #[test]
    fn zeros_give_ones() {
        let s = coprime_seq(&ints(&[4, 0, 1, 3])).unwrap();
        assert_eq!(s.outputs, ints(&[5, 1, 6, 91]));
    }
}
