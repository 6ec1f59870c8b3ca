#include "canoma/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace canoma {

namespace {

void check_order(const DecodingOrder& order, Eigen::Index n) {
    if (order.kind == DecodingOrder::Kind::no_sic) {
        if (!order.order.empty())
            throw std::invalid_argument("no_sic order must not carry a permutation");
        return;
    }
    if (static_cast<Eigen::Index>(order.order.size()) != n)
        throw std::invalid_argument("decoding order length must equal the user count");
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (int u : order.order) {
        if (u < 0 || u >= n || seen[static_cast<std::size_t>(u)])
            throw std::invalid_argument("decoding order must be a permutation of the users");
        seen[static_cast<std::size_t>(u)] = true;
    }
}

}  // namespace

SinrVector independent_sinr(const AllocationMatrix& f, const ChannelGains& gains,
                            const NormalizedPowers& powers) {
    check_dimensions(f, gains, powers);
    return gains.g.cwiseProduct(f.f) * powers.p;
}

double target_independent(const SinrVector& x, const Weights& w, double log_base) {
    if (x.size() != w.w.size())
        throw std::invalid_argument("sinr/weights dimension mismatch");
    validate_weights(w);
    const double scale = detail::weight_scale_for_base(log_base);
    double best = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (!(x(i) > 0.0))
            throw std::domain_error("user excluded from cluster: zero SINR for user " +
                                    std::to_string(i + 1));
        const double t = (w.w(i) * scale) / std::log2(1.0 + x(i));
        if (t > best) best = t;
    }
    return best;
}

SinrVector limiting_sinr_two_user(const AllocationMatrix& f, const ChannelGains& gains,
                                  const NormalizedPowers& powers, const DecodingOrder& order) {
    check_dimensions(f, gains, powers);
    if (gains.n_users() != 2 || gains.n_bs() != 2)
        throw std::invalid_argument("limiting_sinr_two_user requires 2 users and 2 BSs");
    const auto& g = gains.g;
    const auto& p = powers.p;
    const auto& F = f.f;

    // s_{uv}: power of user v's signal as received at user u.
    const double s11 = g(0, 0) * p(0) * F(0, 0) + g(0, 1) * p(1) * F(0, 1);
    const double s12 = g(0, 0) * p(0) * F(1, 0) + g(0, 1) * p(1) * F(1, 1);
    const double s21 = g(1, 0) * p(0) * F(0, 0) + g(1, 1) * p(1) * F(0, 1);
    const double s22 = g(1, 0) * p(0) * F(1, 0) + g(1, 1) * p(1) * F(1, 1);

    SinrVector eta(2);
    switch (two_user_code(order)) {
        case 0:  // no SIC: the other user's signal is plain interference
            eta(0) = s11 / (s12 + 1.0);
            eta(1) = s22 / (s21 + 1.0);
            break;
        case 1:  // user 1 decoded first: user 2 must decode it, then runs clean
            eta(0) = std::min(s11 / (s12 + 1.0), s21 / (s22 + 1.0));
            eta(1) = s22;
            break;
        default:  // user 2 decoded first: mirror case
            eta(0) = s11;
            eta(1) = std::min(s22 / (s21 + 1.0), s12 / (s11 + 1.0));
            break;
    }
    return eta;
}

SinrVector limiting_sinr_general(const AllocationMatrix& f, const ChannelGains& gains,
                                 const NormalizedPowers& powers, const DecodingOrder& order) {
    check_dimensions(f, gains, powers);
    const Eigen::Index n = gains.n_users();
    const Eigen::Index m = gains.n_bs();
    check_order(order, n);

    // Power of user v's signal as received at user u.
    const auto recv = [&](Eigen::Index u, Eigen::Index v) {
        double s = 0.0;
        for (Eigen::Index j = 0; j < m; ++j) s += gains.g(u, j) * powers.p(j) * f.f(v, j);
        return s;
    };

    SinrVector eta(n);
    if (order.kind == DecodingOrder::Kind::no_sic) {
        for (Eigen::Index i = 0; i < n; ++i) {
            double den = 0.0;
            for (Eigen::Index v = 0; v < n; ++v)
                if (v != i) den += recv(i, v);
            eta(i) = recv(i, i) / (den + 1.0);
        }
        return eta;
    }

    std::vector<Eigen::Index> pos(static_cast<std::size_t>(n));
    for (std::size_t q = 0; q < order.order.size(); ++q)
        pos[static_cast<std::size_t>(order.order[q])] = static_cast<Eigen::Index>(q);

    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index pi = pos[static_cast<std::size_t>(i)];
        // At any receiver decoding signal i, the signals placed after i in
        // the order are not yet cancelled and interfere.
        const auto sinr_at = [&](Eigen::Index u) {
            double den = 0.0;
            for (Eigen::Index q = pi + 1; q < n; ++q)
                den += recv(u, order.order[static_cast<std::size_t>(q)]);
            return recv(u, i) / (den + 1.0);
        };
        // Signal i must be decodable at user i and at everyone after i.
        double e = sinr_at(i);
        for (Eigen::Index q = pi + 1; q < n; ++q)
            e = std::min(e, sinr_at(order.order[static_cast<std::size_t>(q)]));
        eta(i) = e;
    }
    return eta;
}

double target_noma(const SinrVector& eta, const Weights& w, double log_base) {
    // Same max-of-ratios form as the independent target, evaluated at the
    // limiting SINRs.
    return target_independent(eta, w, log_base);
}

double target_dynamic_two_user(const AllocationMatrix& f, const ChannelGains& gains,
                               const NormalizedPowers& powers, const Weights& w,
                               const DecodingOrder& order, double log_base) {
    const SinrVector eta = limiting_sinr_two_user(f, gains, powers, order);
    if (!(eta(0) > 0.0 && eta(1) > 0.0))
        throw std::domain_error("user excluded from cluster: zero limiting SINR");
    const auto L = detail::make_two_user_link(gains, powers, w, TargetKind::dynamic_alloc, log_base);
    return detail::value_from_rates(L, std::log2(1.0 + eta(0)), std::log2(1.0 + eta(1)));
}

OrderedTarget best_over_sic_orders(const AllocationMatrix& f, const ChannelGains& gains,
                                   const NormalizedPowers& powers, const Weights& w,
                                   TargetKind kind, double log_base) {
    check_dimensions(f, gains, powers);
    if (w.n_users() != gains.n_users())
        throw std::invalid_argument("weights/gains dimension mismatch");
    const Eigen::Index n = gains.n_users();

    if (n == 2 && gains.n_bs() == 2) {
        const auto L = detail::make_two_user_link(gains, powers, w, kind, log_base);
        const auto e =
            detail::eval_two_user_point(L, f.f(0, 0), f.f(0, 1), f.f(1, 0), f.f(1, 1));
        if (!e.feasible)
            throw std::domain_error("infeasible allocation for all orders");
        return {e.value, two_user_order(e.order_code)};
    }

    if (kind == TargetKind::dynamic_alloc)
        throw std::invalid_argument("dynamic target requires the two-user two-BS model");

    // General N: no-SIC first, then every permutation in lexicographic order,
    // keeping the first strict minimum (same tie rule as the two-user path).
    double best = 0.0;
    DecodingOrder best_order;
    bool found = false;
    const auto consider = [&](const DecodingOrder& ord) {
        const SinrVector eta = limiting_sinr_general(f, gains, powers, ord);
        for (Eigen::Index i = 0; i < n; ++i)
            if (!(eta(i) > 0.0)) return;
        const double v = target_noma(eta, w, log_base);
        if (!found || v < best) {
            best = v;
            best_order = ord;
            found = true;
        }
    };

    consider(DecodingOrder::none());
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    do {
        consider(DecodingOrder::sequence(perm));
    } while (std::next_permutation(perm.begin(), perm.end()));

    if (!found) throw std::domain_error("infeasible allocation for all orders");
    return {best, best_order};
}

}  // namespace canoma
