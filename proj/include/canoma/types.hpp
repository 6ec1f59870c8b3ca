#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace canoma {

// Squared channel magnitudes |h_{i,j}|^2, one row per user, one column per BS.
struct ChannelGains {
    Eigen::MatrixXd g;

    Eigen::Index n_users() const { return g.rows(); }
    Eigen::Index n_bs() const { return g.cols(); }
};

// Per-BS transmit power divided by noise power (dimensionless).
struct NormalizedPowers {
    Eigen::VectorXd p;

    Eigen::Index n_bs() const { return p.size(); }
};

// Power fractions f_{i,j}: share of BS j's power given to user i.
struct AllocationMatrix {
    Eigen::MatrixXd f;

    Eigen::Index n_users() const { return f.rows(); }
    Eigen::Index n_bs() const { return f.cols(); }
};

// Relative throughput coefficients (SLA weights), one per user.
struct Weights {
    Eigen::VectorXd w;

    Eigen::Index n_users() const { return w.size(); }
};

using SinrVector = Eigen::VectorXd;

// SIC decoding order. kind==no_sic: every receiver decodes only its own
// signal, all other signals interfere. kind==ordered: `order` lists user
// indices from first-decoded to last-decoded; each receiver cancels the
// signals of all users placed before its own.
struct DecodingOrder {
    enum class Kind { no_sic, ordered };

    Kind kind = Kind::no_sic;
    std::vector<int> order;  // empty when kind == no_sic

    static DecodingOrder none() { return DecodingOrder{}; }

    static DecodingOrder sequence(std::vector<int> users) {
        DecodingOrder d;
        d.kind = Kind::ordered;
        d.order = std::move(users);
        return d;
    }
};

bool operator==(const DecodingOrder& a, const DecodingOrder& b);

// The three orders of the two-user system: code 0 = no SIC, code 1 = user 0
// decoded first, code 2 = user 1 decoded first.
DecodingOrder two_user_order(int code);
int two_user_code(const DecodingOrder& order);
std::string order_label(const DecodingOrder& order);

void validate_gains(const ChannelGains& gains, bool require_positive = false);
void validate_powers(const NormalizedPowers& powers);
void validate_weights(const Weights& weights);

// Entries in [0,1] and unit column sums (each BS spends exactly its power).
void validate_allocation(const AllocationMatrix& f, double column_sum_tol = 1e-9);

void check_dimensions(const AllocationMatrix& f, const ChannelGains& gains,
                      const NormalizedPowers& powers);

}  // namespace canoma
