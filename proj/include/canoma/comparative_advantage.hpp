#pragma once

#include <Eigen/Dense>

#include <array>
#include <utility>
#include <vector>

#include "canoma/types.hpp"

namespace canoma {

// One boundary segment of the (f11, f12) unit square: one coordinate pinned
// to 0 or 1, the other free in [0, 1].
struct PinnedEdge {
    int coord;     // 0: f11 pinned, 1: f12 pinned
    double value;  // 0.0 or 1.0
};

inline std::pair<double, double> point_on_edge(const PinnedEdge& edge, double t) {
    return edge.coord == 0 ? std::pair{edge.value, t} : std::pair{t, edge.value};
}

// The two edges selected by the advantage direction; they share one corner.
struct EdgeSubspace {
    std::array<PinnedEdge, 2> edges;
    bool bs1_favors_user1;  // true when user 1's relative gain toward BS 1 is strictly larger
};

// True iff user i1 holds a strict comparative advantage at BS j1 over user i2:
// g[i1][j1] * g[i2][j2] > g[i2][j1] * g[i1][j2] (cross-multiplied ratio test;
// the BS powers cancel and never enter).
bool pairwise_criterion(const ChannelGains& gains, int i1, int i2, int j1, int j2);

// Users sorted by descending g[i][0] / g[i][1]; exact ties keep the original
// index order. Two-BS systems only.
std::vector<int> order_users_by_advantage(const ChannelGains& gains);

// Picks {f11=1, f12=0} when user 1 has the strictly larger BS-1 advantage,
// {f11=0, f12=1} otherwise (ties included): the one-dimensional subspace the
// reduced search walks.
EdgeSubspace edge_subspace_two_user(const ChannelGains& gains);

// alpha = |A - B| / (A + B) with A = g11*g22 and B = g12*g21 (the stored
// gains are already squared magnitudes, so the products need no squaring).
// 0 for perfectly balanced channels, 1 when one cross-product vanishes.
double normalized_advantage(const ChannelGains& gains);

// Which (user, BS) entries of an allocation may be nonzero under a split at
// position I (1-based, over the advantage-ordered users): earlier users are
// BS-1 only, later users BS-2 only, the split user may use both.
using SupportPattern = Eigen::Array<bool, Eigen::Dynamic, 2>;
SupportPattern split_search_space(const std::vector<int>& order, int split_index, int n_users);

}  // namespace canoma
