#include "canoma/channel_model.hpp"

#include <cmath>

namespace canoma {

double free_space_reference_gain(double carrier_hz) {
    if (!(carrier_hz > 0.0))
        throw std::invalid_argument("carrier frequency must be > 0");
    constexpr double c = 299792458.0;  // m/s
    const double lambda = c / carrier_hz;
    const double x = lambda / (4.0 * M_PI);
    return x * x;
}

void validate_geometry(const Geometry& geometry) {
    if (!(geometry.area_width > 0.0) || !(geometry.area_height > 0.0))
        throw std::invalid_argument("geometry: area extents must be > 0");
    if (geometry.bs_positions.size() < 2)
        throw std::invalid_argument("geometry: need at least 2 BSs for the two-cell workflows");
    for (const auto& bs : geometry.bs_positions) {
        if (!(bs.x() >= 0.0 && bs.x() <= geometry.area_width && bs.y() >= 0.0 &&
              bs.y() <= geometry.area_height))
            throw std::invalid_argument("geometry: BS position outside the area");
    }
}

void validate_radio(const RadioParams& radio) {
    if (!(radio.tx_power_per_bs_w > 0.0) || !(radio.noise_power_w > 0.0) ||
        !(radio.bandwidth_hz > 0.0) || !(radio.carrier_hz > 0.0))
        throw std::invalid_argument("radio: all parameters must be > 0");
}

std::vector<Eigen::Vector2d> place_users(std::mt19937_64& rng, const Geometry& geometry,
                                         int n_users) {
    if (n_users < 1) throw std::invalid_argument("place_users: n_users must be >= 1");
    if (!(geometry.area_width >= 0.0) || !(geometry.area_height >= 0.0))
        throw std::invalid_argument("place_users: area extents must be non-negative");
    std::vector<Eigen::Vector2d> positions;
    positions.reserve(static_cast<std::size_t>(n_users));
    for (int i = 0; i < n_users; ++i) {
        const double x = uniform01(rng) * geometry.area_width;
        const double y = uniform01(rng) * geometry.area_height;
        positions.emplace_back(x, y);
    }
    return positions;
}

namespace {

double deterministic_gain(const Eigen::Vector2d& user_pos, const Eigen::Vector2d& bs_pos,
                          const PathLossParams& params) {
    if (!(params.exponent > 0.0) || !(params.reference_gain > 0.0))
        throw std::invalid_argument("path loss: exponent and reference_gain must be > 0");
    const double d = (user_pos - bs_pos).norm();
    if (d == 0.0) throw std::domain_error("coincident positions");
    return params.reference_gain * std::pow(d, -params.exponent);
}

}  // namespace

double path_gain(const Eigen::Vector2d& user_pos, const Eigen::Vector2d& bs_pos,
                 const PathLossParams& params) {
    if (params.fading != Fading::none)
        throw std::invalid_argument("path_gain: fading draws need a random source");
    return deterministic_gain(user_pos, bs_pos, params);
}

double path_gain(const Eigen::Vector2d& user_pos, const Eigen::Vector2d& bs_pos,
                 const PathLossParams& params, std::mt19937_64& rng) {
    double g = deterministic_gain(user_pos, bs_pos, params);
    if (params.fading == Fading::rayleigh) {
        // Rayleigh amplitude <=> unit-mean exponential power factor. The open
        // interval keeps the factor, and hence the gain, strictly positive.
        g *= -std::log(uniform01_open(rng));
    }
    return g;
}

ScenarioInstance generate_instance(std::mt19937_64& rng, const ScenarioConfig& config,
                                   std::uint64_t seed_record) {
    validate_geometry(config.geometry);
    validate_radio(config.radio);
    if (config.n_users < 1) throw std::invalid_argument("scenario: n_users must be >= 1");

    ScenarioInstance inst;
    inst.seed_record = seed_record;
    inst.user_positions = place_users(rng, config.geometry, config.n_users);

    const auto n = static_cast<Eigen::Index>(config.n_users);
    const auto m = static_cast<Eigen::Index>(config.geometry.bs_positions.size());
    inst.gains.g.resize(n, m);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < m; ++j)
            inst.gains.g(i, j) =
                path_gain(inst.user_positions[static_cast<std::size_t>(i)],
                          config.geometry.bs_positions[static_cast<std::size_t>(j)],
                          config.path_loss, rng);

    const double pj = config.radio.tx_power_per_bs_w / config.radio.noise_power_w;
    inst.powers.p = Eigen::VectorXd::Constant(m, pj);
    return inst;
}

}  // namespace canoma
