//! First-order radio model.
//!
//! Transmitting `k` bits over `d` meters costs `E_elec*k + eps_fs*k*d^2` below
//! the crossover distance `d0 = sqrt(eps_fs / eps_mp)` and
//! `E_elec*k + eps_mp*k*d^4` at or beyond it. Receiving costs `E_elec*k`;
//! aggregating costs `E_DA` per input bit.

use alloc::string::ToString;

use crate::error::InvalidParameter;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadioParams {
    /// Electronics energy, J/bit.
    pub e_elec: f64,
    /// Free-space amplifier, J/bit/m^2.
    pub eps_fs: f64,
    /// Multipath amplifier, J/bit/m^4.
    pub eps_mp: f64,
    /// Data aggregation, J/bit.
    pub e_da: f64,
    /// Size of every control message.
    pub ctrl_bits: u64,
}

impl Default for RadioParams {
    fn default() -> Self {
        Self {
            e_elec: 50e-9,
            eps_fs: 10e-12,
            eps_mp: 0.0013e-12,
            e_da: 5e-9,
            ctrl_bits: 100,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChargeKind {
    TxData,
    RxData,
    TxCtrl,
    RxCtrl,
    Aggregate,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergyCharge {
    pub joules: f64,
    pub kind: ChargeKind,
}

impl RadioParams {
    pub fn validate(&self) -> Result<(), InvalidParameter> {
        let positive = |key: &'static str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(InvalidParameter {
                    key,
                    reason: "must be a positive finite number".to_string(),
                })
            }
        };
        positive("radio.e_elec", self.e_elec)?;
        positive("radio.eps_fs", self.eps_fs)?;
        positive("radio.eps_mp", self.eps_mp)?;
        positive("radio.e_da", self.e_da)?;
        if self.ctrl_bits == 0 {
            return Err(InvalidParameter {
                key: "radio.ctrl_bits",
                reason: "must be positive".to_string(),
            });
        }
        Ok(())
    }

    /// Crossover distance between the free-space and multipath regimes.
    pub fn d0(&self) -> f64 {
        libm::sqrt(self.eps_fs / self.eps_mp)
    }

    pub fn tx_cost(&self, bits: u64, distance: f64) -> f64 {
        let k = bits as f64;
        let d2 = distance * distance;
        let amp = if distance < self.d0() {
            self.eps_fs * k * d2
        } else {
            self.eps_mp * k * d2 * d2
        };
        self.e_elec * k + amp
    }

    pub fn rx_cost(&self, bits: u64) -> f64 {
        self.e_elec * bits as f64
    }

    pub fn agg_cost(&self, input_bits: u64) -> f64 {
        self.e_da * input_bits as f64
    }

    pub fn tx_data(&self, bits: u64, distance: f64) -> EnergyCharge {
        EnergyCharge {
            joules: self.tx_cost(bits, distance),
            kind: ChargeKind::TxData,
        }
    }

    pub fn rx_data(&self, bits: u64) -> EnergyCharge {
        EnergyCharge {
            joules: self.rx_cost(bits),
            kind: ChargeKind::RxData,
        }
    }

    pub fn tx_ctrl(&self, distance: f64) -> EnergyCharge {
        EnergyCharge {
            joules: self.tx_cost(self.ctrl_bits, distance),
            kind: ChargeKind::TxCtrl,
        }
    }

    pub fn rx_ctrl(&self) -> EnergyCharge {
        EnergyCharge {
            joules: self.rx_cost(self.ctrl_bits),
            kind: ChargeKind::RxCtrl,
        }
    }

    pub fn aggregate(&self, input_bits: u64) -> EnergyCharge {
        EnergyCharge {
            joules: self.agg_cost(input_bits),
            kind: ChargeKind::Aggregate,
        }
    }
}

/// Outcome of taking a charge from a battery.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Debit {
    pub remaining: f64,
    /// Energy actually removed from the battery (the charge, capped at what was left).
    pub drawn: f64,
    pub died: bool,
}

/// Takes `charge` from `energy`. A battery that cannot cover the charge still
/// completes the action, ends at exactly zero and is dead.
pub fn debit(energy: f64, charge: f64) -> Debit {
    let after = energy - charge;
    if after <= 0.0 {
        Debit {
            remaining: 0.0,
            drawn: energy.max(0.0),
            died: true,
        }
    } else {
        Debit {
            remaining: after,
            drawn: charge,
            died: false,
        }
    }
}
