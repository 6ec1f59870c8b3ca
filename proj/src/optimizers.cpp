#include "canoma/optimizers.hpp"

#include <algorithm>
#include <cmath>

namespace canoma {

namespace {

struct Candidate {
    double value = 0.0;
    double f11 = 0.0, f12 = 0.0;
    double f21 = 0.0, f22 = 0.0;
    int order_code = 0;
    bool found = false;
};

// Order-independent reduction: smaller value wins, exact value ties prefer
// smaller (f11, f12), re-offers of the incumbent point change nothing.
void offer(Candidate& best, double value, double f11, double f12, double f21, double f22,
           int order_code) {
    if (best.found) {
        if (value > best.value) return;
        if (value == best.value) {
            if (f11 > best.f11) return;
            if (f11 == best.f11 && f12 >= best.f12) return;
        }
    }
    best = Candidate{value, f11, f12, f21, f22, order_code, true};
}

void check_two_user_inputs(const ScenarioInstance& instance, const Weights& w) {
    if (instance.gains.n_users() != 2 || instance.gains.n_bs() != 2)
        throw std::invalid_argument("two-user search requires a 2x2 gain matrix");
    validate_gains(instance.gains);
    validate_powers(instance.powers);
    if (instance.powers.n_bs() != 2)
        throw std::invalid_argument("two-user search requires 2 BS powers");
    validate_weights(w);
    if (w.n_users() != 2) throw std::invalid_argument("two-user search requires 2 weights");
}

OptimizationResult make_result(const Candidate& c, std::size_t evaluations) {
    OptimizationResult r;
    r.f_opt.f.resize(2, 2);
    r.f_opt.f << c.f11, c.f12, c.f21, c.f22;
    r.value = c.value;
    r.order = two_user_order(c.order_code);
    r.on_edge = c.f11 == 0.0 || c.f11 == 1.0 || c.f12 == 0.0 || c.f12 == 1.0;
    r.evaluations = evaluations;
    return r;
}

constexpr int refine_points = 21;

// Local pass on a one-coarse-cell window around the incumbent. Off-grid
// coordinates are fine here: the result stores whatever was evaluated, and
// match statistics are only defined for refine=off runs.
void refine_2d(Candidate& best, const detail::TwoUserLink& L, double step, std::size_t& evals) {
    const double lo1 = std::max(0.0, best.f11 - step);
    const double hi1 = std::min(1.0, best.f11 + step);
    const double lo2 = std::max(0.0, best.f12 - step);
    const double hi2 = std::min(1.0, best.f12 + step);
    const double den = static_cast<double>(refine_points - 1);
    for (int a = 0; a < refine_points; ++a) {
        const double f11 = lo1 + (hi1 - lo1) * (static_cast<double>(a) / den);
        const double f21 = 1.0 - f11;
        for (int b = 0; b < refine_points; ++b) {
            const double f12 = lo2 + (hi2 - lo2) * (static_cast<double>(b) / den);
            const auto e = detail::eval_two_user_point(L, f11, f12, f21, 1.0 - f12);
            if (e.feasible) offer(best, e.value, f11, f12, f21, 1.0 - f12, e.order_code);
        }
    }
    evals += static_cast<std::size_t>(refine_points) * refine_points * 3;
}

void refine_edge(Candidate& best, const detail::TwoUserLink& L, const PinnedEdge& edge,
                 double step, std::size_t& evals) {
    const double t0 = edge.coord == 0 ? best.f12 : best.f11;
    const double lo = std::max(0.0, t0 - step);
    const double hi = std::min(1.0, t0 + step);
    const double den = static_cast<double>(refine_points - 1);
    for (int a = 0; a < refine_points; ++a) {
        const double t = lo + (hi - lo) * (static_cast<double>(a) / den);
        double f11, f12;
        if (edge.coord == 0) {
            f11 = edge.value;
            f12 = t;
        } else {
            f11 = t;
            f12 = edge.value;
        }
        const double f21 = 1.0 - f11;
        const double f22 = 1.0 - f12;
        const auto e = detail::eval_two_user_point(L, f11, f12, f21, f22);
        if (e.feasible) offer(best, e.value, f11, f12, f21, f22, e.order_code);
    }
    evals += static_cast<std::size_t>(refine_points) * 3;
}

}  // namespace

void validate_grid(const GridSpec& spec) {
    if (spec.points_2d < 2 || spec.points_edge < 2)
        throw std::invalid_argument("grid: point counts must be >= 2");
}

OptimizationResult grid_oracle_two_user(const ScenarioInstance& instance, const Weights& w,
                                        const GridSpec& spec, TargetKind kind, double log_base) {
    check_two_user_inputs(instance, w);
    validate_grid(spec);
    const auto L = detail::make_two_user_link(instance.gains, instance.powers, w, kind, log_base);

    const int n = spec.points_2d;
    const double den = static_cast<double>(n - 1);
    Candidate best;
    for (int i = 0; i < n; ++i) {
        const double f11 = static_cast<double>(i) / den;
        const double f21 = static_cast<double>(n - 1 - i) / den;
        for (int j = 0; j < n; ++j) {
            const double f12 = static_cast<double>(j) / den;
            const double f22 = static_cast<double>(n - 1 - j) / den;
            const auto e = detail::eval_two_user_point(L, f11, f12, f21, f22);
            if (!e.feasible) continue;  // the all-to-one-user corners
            offer(best, e.value, f11, f12, f21, f22, e.order_code);
        }
    }
    if (!best.found) throw std::domain_error("no feasible allocation on the grid");

    std::size_t evals = static_cast<std::size_t>(n) * static_cast<std::size_t>(n) * 3;
    if (spec.refine) refine_2d(best, L, 1.0 / den, evals);
    return make_result(best, evals);
}

OptimizationResult edge_search_two_user(const ScenarioInstance& instance, const Weights& w,
                                        const GridSpec& spec, TargetKind kind, double log_base) {
    check_two_user_inputs(instance, w);
    validate_grid(spec);
    const auto sub = edge_subspace_two_user(instance.gains);
    const auto L = detail::make_two_user_link(instance.gains, instance.powers, w, kind, log_base);

    const int n = spec.points_edge;
    const double den = static_cast<double>(n - 1);
    Candidate best;
    for (const auto& edge : sub.edges) {
        const double pinned = edge.value;
        const double pinned_c = 1.0 - edge.value;  // exact: pinned is 0.0 or 1.0
        for (int k = 0; k < n; ++k) {
            const double t = static_cast<double>(k) / den;
            const double tc = static_cast<double>(n - 1 - k) / den;
            double f11, f12, f21, f22;
            if (edge.coord == 0) {
                f11 = pinned;
                f21 = pinned_c;
                f12 = t;
                f22 = tc;
            } else {
                f12 = pinned;
                f22 = pinned_c;
                f11 = t;
                f21 = tc;
            }
            const auto e = detail::eval_two_user_point(L, f11, f12, f21, f22);
            if (!e.feasible) continue;
            offer(best, e.value, f11, f12, f21, f22, e.order_code);
        }
    }
    if (!best.found) throw std::domain_error("no feasible allocation on the edges");

    std::size_t evals = 2 * static_cast<std::size_t>(n) * 3;
    if (spec.refine)
        for (const auto& edge : sub.edges) refine_edge(best, L, edge, 1.0 / den, evals);
    return make_result(best, evals);
}

namespace {

// All length-n integer vectors with the given sum, lexicographically
// ascending: the per-column fraction patterns of the simplex grid.
std::vector<std::vector<int>> compositions(int n, int sum) {
    std::vector<std::vector<int>> out;
    std::vector<int> current(static_cast<std::size_t>(n), 0);
    const auto rec = [&](auto&& self, int index, int remaining) -> void {
        if (index == n - 1) {
            current[static_cast<std::size_t>(index)] = remaining;
            out.push_back(current);
            return;
        }
        for (int v = 0; v <= remaining; ++v) {
            current[static_cast<std::size_t>(index)] = v;
            self(self, index + 1, remaining - v);
        }
    };
    rec(rec, 0, sum);
    return out;
}

}  // namespace

IndependentSearchResult brute_force_independent(const ChannelGains& gains,
                                                const NormalizedPowers& powers, const Weights& w,
                                                int grid_points_per_axis, double log_base) {
    if (gains.n_bs() != 2)
        throw std::invalid_argument("brute_force_independent requires exactly 2 BSs");
    validate_gains(gains);
    validate_powers(powers);
    validate_weights(w);
    if (w.n_users() != gains.n_users())
        throw std::invalid_argument("weights/gains dimension mismatch");
    if (powers.n_bs() != 2) throw std::invalid_argument("powers/gains dimension mismatch");
    if (grid_points_per_axis < 2)
        throw std::invalid_argument("grid_points_per_axis must be >= 2");

    const int n = static_cast<int>(gains.n_users());
    const double den = static_cast<double>(grid_points_per_axis - 1);
    const double scale = detail::weight_scale_for_base(log_base);

    Eigen::MatrixXd gp = gains.g;  // gains pre-scaled by the BS powers
    gp.col(0) *= powers.p(0);
    gp.col(1) *= powers.p(1);
    Eigen::VectorXd ws = w.w * scale;

    const auto comps = compositions(n, grid_points_per_axis - 1);
    std::vector<std::vector<double>> frac(comps.size());
    for (std::size_t c = 0; c < comps.size(); ++c) {
        frac[c].resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            frac[c][static_cast<std::size_t>(i)] = static_cast<double>(comps[c][static_cast<std::size_t>(i)]) / den;
    }

    double best = 0.0;
    std::size_t best_c1 = 0, best_c2 = 0;
    bool found = false;
    for (std::size_t c1 = 0; c1 < comps.size(); ++c1) {
        for (std::size_t c2 = 0; c2 < comps.size(); ++c2) {
            double value = 0.0;
            bool feasible = true;
            for (int i = 0; i < n; ++i) {
                const auto iu = static_cast<std::size_t>(i);
                const double x = gp(i, 0) * frac[c1][iu] + gp(i, 1) * frac[c2][iu];
                if (!(x > 0.0)) {
                    feasible = false;  // user excluded from the cluster
                    break;
                }
                const double t = ws(i) / std::log2(1.0 + x);
                if (t > value) value = t;
            }
            // Lexicographic iteration + strict improvement = deterministic ties.
            if (feasible && (!found || value < best)) {
                best = value;
                best_c1 = c1;
                best_c2 = c2;
                found = true;
            }
        }
    }
    if (!found) throw std::domain_error("no feasible allocation on the simplex grid");

    IndependentSearchResult r;
    r.f_opt.f.resize(n, 2);
    for (int i = 0; i < n; ++i) {
        r.f_opt.f(i, 0) = frac[best_c1][static_cast<std::size_t>(i)];
        r.f_opt.f(i, 1) = frac[best_c2][static_cast<std::size_t>(i)];
    }
    r.value = best;
    r.evaluations = comps.size() * comps.size();
    return r;
}

MatchOutcome compare_results(const OptimizationResult& method, const OptimizationResult& oracle,
                             double match_rel_tol) {
    if (!(oracle.value > 0.0))
        throw std::domain_error("compare_results: oracle value must be positive");
    if (!(match_rel_tol >= 0.0))
        throw std::invalid_argument("compare_results: tolerance must be >= 0");
    double gap = (method.value - oracle.value) / oracle.value;
    if (gap < 0.0) gap = 0.0;  // finer edge grids may undercut the oracle
    return {gap <= match_rel_tol, gap};
}

}  // namespace canoma
