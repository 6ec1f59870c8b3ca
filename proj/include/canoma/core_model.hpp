#pragma once

#include "canoma/detail/two_user_kernel.hpp"
#include "canoma/types.hpp"

namespace canoma {

// SINR under independent reception: each user simply sums what it receives
// from every BS, with no interference between users.
SinrVector independent_sinr(const AllocationMatrix& f, const ChannelGains& gains,
                            const NormalizedPowers& powers);

// max_i w_i / log_b(1 + x_i): the (scaled) completion time of the slowest
// user. Any x_i <= 0 would exclude that user from the cluster and is an error.
double target_independent(const SinrVector& x, const Weights& w, double log_base = 2.0);

// Limiting SINRs of the two-user two-BS system, written out as the six
// closed forms (one pair per SIC order). Kept as literal expressions; the
// general rule below must reproduce them exactly and is tested against this.
SinrVector limiting_sinr_two_user(const AllocationMatrix& f, const ChannelGains& gains,
                                  const NormalizedPowers& powers, const DecodingOrder& order);

// General limiting-SINR rule for any N, M: user i's signal must be decoded
// at user i and at every user placed after i in the SIC order; at each such
// receiver the interference is the sum of the not-yet-cancelled signals.
// eta_i is the minimum of those SINRs. Without SIC nothing is cancelled and
// only user i itself decodes.
SinrVector limiting_sinr_general(const AllocationMatrix& f, const ChannelGains& gains,
                                 const NormalizedPowers& powers, const DecodingOrder& order);

// max_i w_i / log_b(1 + eta_i), the NOMA counterpart of target_independent.
double target_noma(const SinrVector& eta, const Weights& w, double log_base = 2.0);

// Two-phase completion time when BSs may re-point their power: both users
// transmit under allocation f until the faster one finishes, then the
// remaining user gets the full power of both BSs, interference-free.
double target_dynamic_two_user(const AllocationMatrix& f, const ChannelGains& gains,
                               const NormalizedPowers& powers, const Weights& w,
                               const DecodingOrder& order, double log_base = 2.0);

struct OrderedTarget {
    double value;
    DecodingOrder order;
};

// Minimum of the target over all SIC orders (no-SIC plus every permutation;
// the three classic orders for N=2), with the achieving order. Ties prefer
// no-SIC, then the lexicographically smaller permutation. Throws when every
// order leaves some user with zero SINR.
OrderedTarget best_over_sic_orders(const AllocationMatrix& f, const ChannelGains& gains,
                                   const NormalizedPowers& powers, const Weights& w,
                                   TargetKind kind, double log_base = 2.0);

}  // namespace canoma
