#include "canoma/types.hpp"

#include <algorithm>
#include <cmath>

namespace canoma {

bool operator==(const DecodingOrder& a, const DecodingOrder& b) {
    return a.kind == b.kind && a.order == b.order;
}

DecodingOrder two_user_order(int code) {
    switch (code) {
        case 0: return DecodingOrder::none();
        case 1: return DecodingOrder::sequence({0, 1});
        case 2: return DecodingOrder::sequence({1, 0});
        default: throw std::invalid_argument("two_user_order: code must be 0, 1, or 2");
    }
}

int two_user_code(const DecodingOrder& order) {
    if (order.kind == DecodingOrder::Kind::no_sic) return 0;
    if (order.order == std::vector<int>{0, 1}) return 1;
    if (order.order == std::vector<int>{1, 0}) return 2;
    throw std::invalid_argument("two_user_code: not a two-user order");
}

std::string order_label(const DecodingOrder& order) {
    if (order.kind == DecodingOrder::Kind::no_sic) return "no_sic";
    std::string s = "sic";
    for (int u : order.order) s += "_" + std::to_string(u + 1);
    return s;  // e.g. "sic_1_2": user 1 decoded first, cancelled by user 2
}

void validate_gains(const ChannelGains& gains, bool require_positive) {
    if (gains.g.size() == 0) throw std::invalid_argument("gains: empty matrix");
    for (Eigen::Index i = 0; i < gains.g.rows(); ++i) {
        for (Eigen::Index j = 0; j < gains.g.cols(); ++j) {
            const double v = gains.g(i, j);
            if (!std::isfinite(v) || v < 0.0)
                throw std::invalid_argument("gains: entries must be finite and >= 0");
            if (require_positive && v == 0.0)
                throw std::invalid_argument("gains: entries must be > 0 for this operation");
        }
    }
}

void validate_powers(const NormalizedPowers& powers) {
    if (powers.p.size() == 0) throw std::invalid_argument("powers: empty vector");
    for (Eigen::Index j = 0; j < powers.p.size(); ++j) {
        const double v = powers.p(j);
        if (!std::isfinite(v) || v <= 0.0)
            throw std::invalid_argument("powers: entries must be finite and > 0");
    }
}

void validate_weights(const Weights& weights) {
    if (weights.w.size() == 0) throw std::invalid_argument("weights: empty vector");
    for (Eigen::Index i = 0; i < weights.w.size(); ++i) {
        const double v = weights.w(i);
        if (!std::isfinite(v) || v <= 0.0)
            throw std::invalid_argument("weights: entries must be finite and > 0");
    }
}

void validate_allocation(const AllocationMatrix& f, double column_sum_tol) {
    if (f.f.size() == 0) throw std::invalid_argument("allocation: empty matrix");
    for (Eigen::Index i = 0; i < f.f.rows(); ++i) {
        for (Eigen::Index j = 0; j < f.f.cols(); ++j) {
            const double v = f.f(i, j);
            if (!std::isfinite(v) || v < 0.0 || v > 1.0)
                throw std::invalid_argument("allocation: entries must lie in [0, 1]");
        }
    }
    for (Eigen::Index j = 0; j < f.f.cols(); ++j) {
        const double s = f.f.col(j).sum();
        if (std::abs(s - 1.0) > column_sum_tol)
            throw std::invalid_argument("allocation: column " + std::to_string(j) +
                                        " sums to " + std::to_string(s) + ", expected 1");
    }
}

void check_dimensions(const AllocationMatrix& f, const ChannelGains& gains,
                      const NormalizedPowers& powers) {
    if (f.f.rows() != gains.g.rows() || f.f.cols() != gains.g.cols())
        throw std::invalid_argument("allocation/gains dimension mismatch");
    if (powers.p.size() != gains.g.cols())
        throw std::invalid_argument("powers/gains dimension mismatch");
}

}  // namespace canoma
