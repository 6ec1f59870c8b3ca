#pragma once

#include <cmath>

#include "canoma/types.hpp"

namespace canoma {

enum class TargetKind { static_alloc, dynamic_alloc };

namespace detail {

// Targets are defined with a configurable logarithm base b:
//   w / log_b(1 + x) == (w * log2(b)) / log2(1 + x),
// so a single pre-scaling of the weights covers every base. Base 2 maps to
// scale 1.0 exactly, keeping the default path free of extra rounding.
inline double weight_scale_for_base(double log_base) {
    if (!(log_base > 0.0) || log_base == 1.0)
        throw std::invalid_argument("log_base must be positive and != 1");
    return log_base == 2.0 ? 1.0 : std::log2(log_base);
}

// Per-(instance, weights, target) constants for two-user point evaluations.
// The grid searches evaluate millions of points against one of these, and
// best_over_sic_orders builds the identical struct, so both routes produce
// bit-identical values by construction.
struct TwoUserLink {
    double a, b, c, d;            // g(i,j) * p(j), row-major
    double ws1, ws2;              // weights pre-scaled for the log base
    double lr_full1, lr_full2;    // log2(1 + full-power SINR), dynamic tail rates
    bool dynamic = false;
};

inline TwoUserLink make_two_user_link(const ChannelGains& gains, const NormalizedPowers& powers,
                                      const Weights& w, TargetKind kind, double log_base) {
    if (gains.n_users() != 2 || gains.n_bs() != 2 || powers.n_bs() != 2 || w.n_users() != 2)
        throw std::invalid_argument("two-user kernel requires 2 users and 2 BSs");
    const double scale = weight_scale_for_base(log_base);
    TwoUserLink L;
    L.a = gains.g(0, 0) * powers.p(0);
    L.b = gains.g(0, 1) * powers.p(1);
    L.c = gains.g(1, 0) * powers.p(0);
    L.d = gains.g(1, 1) * powers.p(1);
    L.ws1 = w.w(0) * scale;
    L.ws2 = w.w(1) * scale;
    L.lr_full1 = std::log2(1.0 + (L.a + L.b));
    L.lr_full2 = std::log2(1.0 + (L.c + L.d));
    L.dynamic = (kind == TargetKind::dynamic_alloc);
    return L;
}

// Completion-time value for one SIC order given both users' rates
// r_i = log2(1 + eta_i). Static: the slower user's weighted time. Dynamic:
// the faster user finishes, then the remaining user gets the full power of
// both BSs (rate lr_full) for the rest of its payload.
inline double value_from_rates(const TwoUserLink& L, double r1, double r2) {
    const double t1 = L.ws1 / r1;
    const double t2 = L.ws2 / r2;
    if (!L.dynamic) return t1 < t2 ? t2 : t1;
    return t1 < t2 ? t1 + (L.ws2 - t1 * r2) / L.lr_full2
                   : t2 + (L.ws1 - t2 * r1) / L.lr_full1;
}

struct PointEval {
    double value;
    int order_code;   // 0 = no SIC, 1 = user 1 decoded first, 2 = user 2 first
    bool feasible;
};

// Best target over the three SIC orders at one allocation point, ties broken
// toward the lower order code. Infeasible means some user receives nothing
// under every order (only the all-to-one-user corners, given positive gains).
inline PointEval eval_two_user_point(const TwoUserLink& L, double f11, double f12,
                                     double f21, double f22) {
    const double s11 = L.a * f11 + L.b * f12;  // own signal at user 1
    const double s12 = L.a * f21 + L.b * f22;  // user 2's signal heard at user 1
    const double s21 = L.c * f11 + L.d * f12;  // user 1's signal heard at user 2
    const double s22 = L.c * f21 + L.d * f22;  // own signal at user 2

    if (!(s11 > 0.0 && s22 > 0.0)) return {0.0, 0, false};

    const double x1 = s11 / (s12 + 1.0);
    const double x2 = s22 / (s21 + 1.0);
    const double l1 = std::log2(1.0 + x1);
    const double l2 = std::log2(1.0 + x2);

    double best = value_from_rates(L, l1, l2);
    int code = 0;

    if (s21 > 0.0) {  // user 1 decoded first; user 2 must decode it too
        const double x3 = s21 / (s22 + 1.0);
        const double r1 = x3 < x1 ? std::log2(1.0 + x3) : l1;
        const double v = value_from_rates(L, r1, std::log2(1.0 + s22));
        if (v < best) { best = v; code = 1; }
    }
    if (s12 > 0.0) {  // user 2 decoded first; user 1 must decode it too
        const double x4 = s12 / (s11 + 1.0);
        const double r2 = x4 < x2 ? std::log2(1.0 + x4) : l2;
        const double v = value_from_rates(L, std::log2(1.0 + s11), r2);
        if (v < best) { best = v; code = 2; }
    }
    return {best, code, true};
}

}  // namespace detail
}  // namespace canoma
