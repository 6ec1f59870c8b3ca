#include "canoma/comparative_advantage.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace canoma {

namespace {

void require_positive_entry(const ChannelGains& gains, int i, int j) {
    if (i < 0 || j < 0 || i >= gains.n_users() || j >= gains.n_bs())
        throw std::invalid_argument("gain index out of range");
    const double v = gains.g(i, j);
    if (!std::isfinite(v) || v <= 0.0)
        throw std::domain_error("criterion requires strictly positive gains");
}

}  // namespace

bool pairwise_criterion(const ChannelGains& gains, int i1, int i2, int j1, int j2) {
    require_positive_entry(gains, i1, j1);
    require_positive_entry(gains, i1, j2);
    require_positive_entry(gains, i2, j1);
    require_positive_entry(gains, i2, j2);
    return gains.g(i1, j1) * gains.g(i2, j2) > gains.g(i2, j1) * gains.g(i1, j2);
}

std::vector<int> order_users_by_advantage(const ChannelGains& gains) {
    if (gains.n_bs() != 2)
        throw std::invalid_argument("order_users_by_advantage requires exactly 2 BSs");
    validate_gains(gains, /*require_positive=*/true);
    const Eigen::Index n = gains.n_users();

    // Ratio keys give a guaranteed total order for the sort; stable_sort
    // keeps original indices on exact ties.
    std::vector<double> ratio(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i)
        ratio[static_cast<std::size_t>(i)] = gains.g(i, 0) / gains.g(i, 1);

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return ratio[static_cast<std::size_t>(a)] > ratio[static_cast<std::size_t>(b)];
    });
    return order;
}

EdgeSubspace edge_subspace_two_user(const ChannelGains& gains) {
    if (gains.n_users() != 2 || gains.n_bs() != 2)
        throw std::invalid_argument("edge_subspace_two_user requires 2 users and 2 BSs");
    validate_gains(gains, /*require_positive=*/true);

    const bool favors = gains.g(0, 0) / gains.g(0, 1) > gains.g(1, 0) / gains.g(1, 1);
    EdgeSubspace sub;
    sub.bs1_favors_user1 = favors;
    if (favors) {
        // User 1 leans on BS 1: walk f11=1 and f12=0 (shared corner (1,0)).
        sub.edges = {PinnedEdge{0, 1.0}, PinnedEdge{1, 0.0}};
    } else {
        // Ties land here too: walk f11=0 and f12=1 (shared corner (0,1)).
        sub.edges = {PinnedEdge{0, 0.0}, PinnedEdge{1, 1.0}};
    }
    return sub;
}

double normalized_advantage(const ChannelGains& gains) {
    if (gains.n_users() != 2 || gains.n_bs() != 2)
        throw std::invalid_argument("normalized_advantage requires 2 users and 2 BSs");
    validate_gains(gains);
    const double a = gains.g(0, 0) * gains.g(1, 1);
    const double b = gains.g(0, 1) * gains.g(1, 0);
    const double sum = a + b;
    if (sum == 0.0) throw std::domain_error("degenerate channel: both cross-products are zero");
    return std::abs(a - b) / sum;
}

SupportPattern split_search_space(const std::vector<int>& order, int split_index, int n_users) {
    if (n_users < 1) throw std::invalid_argument("split_search_space: n_users must be >= 1");
    if (split_index < 1 || split_index > n_users)
        throw std::invalid_argument("split_search_space: split index out of range");
    if (static_cast<int>(order.size()) != n_users)
        throw std::invalid_argument("split_search_space: order length mismatch");
    std::vector<bool> seen(static_cast<std::size_t>(n_users), false);
    for (int u : order) {
        if (u < 0 || u >= n_users || seen[static_cast<std::size_t>(u)])
            throw std::invalid_argument("split_search_space: order must be a permutation");
        seen[static_cast<std::size_t>(u)] = true;
    }

    SupportPattern pattern(n_users, 2);
    for (int k = 0; k < n_users; ++k) {
        const int user = order[static_cast<std::size_t>(k)];
        const int rank = k + 1;  // 1-based position in the advantage order
        pattern(user, 0) = rank <= split_index;
        pattern(user, 1) = rank >= split_index;
    }
    return pattern;
}

}  // namespace canoma
