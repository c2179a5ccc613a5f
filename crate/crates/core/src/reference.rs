//! Printed reference values for χ₄ (the odd character mod 4), stored exactly
//! as printed so comparisons show the raw differences.
//!
//! In the γ table the `gamma_hat` and `gamma` columns hold each other's
//! values for n ≥ 100: the certified γ(n) equals the printed `gamma_hat`
//! entry there, while at n = 10 it equals the printed `gamma` entry.

#[derive(Clone, Copy, Debug)]
pub struct GammaRow {
    pub n: u64,
    pub gamma_hat: &'static str,
    pub gamma: &'static str,
    pub ratio: &'static str,
}

pub const CHI4_GAMMA_TABLE: [GammaRow; 5] = [
    GammaRow { n: 10, gamma_hat: "8.6123842782e-14", gamma: "8.5921206983e-14", ratio: "0.997647158" },
    GammaRow { n: 100, gamma_hat: "1.0054943805e-174", gamma: "1.0057597216e-174", ratio: "0.9997361785" },
    GammaRow { n: 1000, gamma_hat: "1.7838444188e-2350", gamma: "1.7838866878e-2350", ratio: "0.9999763051" },
    GammaRow { n: 10000, gamma_hat: "1.7271165350e-30650", gamma: "1.7271200653e-30650", ratio: "0.9999979560" },
    GammaRow { n: 100000, gamma_hat: "8.1291521235e-384416", gamma: "8.1291531304e-384416", ratio: "0.9999998761" },
];

/// Monic normalized Jensen polynomials, constant term first.
#[derive(Clone, Copy, Debug)]
pub struct JensenRow {
    pub n: u64,
    pub d2: [f64; 3],
    pub d3: [f64; 4],
}

pub const CHI4_JENSEN_TABLE: [JensenRow; 4] = [
    JensenRow { n: 100, d2: [-1.9985, 0.3332, 1.0], d3: [-1.3254, -5.8678, 0.8306, 1.0] },
    JensenRow { n: 1000, d2: [-1.9997, 0.1136, 1.0], d3: [-0.4414, -5.9847, 0.2839, 1.0] },
    JensenRow { n: 10000, d2: [-1.9999, 0.0375, 1.0], d3: [-0.1435, -5.9984, 0.0936, 1.0] },
    JensenRow { n: 100000, d2: [-1.9999, 0.0012, 1.0], d3: [-0.0444, -5.9998, 0.0304, 1.0] },
];

pub fn gamma_row(n: u64) -> Option<&'static GammaRow> {
    CHI4_GAMMA_TABLE.iter().find(|r| r.n == n)
}

pub fn jensen_row(n: u64) -> Option<&'static JensenRow> {
    CHI4_JENSEN_TABLE.iter().find(|r| r.n == n)
}

impl JensenRow {
    pub fn coeffs(&self, d: usize) -> Option<&[f64]> {
        match d {
            2 => Some(&self.d2),
            3 => Some(&self.d3),
            _ => None,
        }
    }
}
