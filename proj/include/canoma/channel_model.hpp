#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <vector>

#include "canoma/rng.hpp"
#include "canoma/types.hpp"

namespace canoma {

// Free-space power gain at 1 m, (wavelength / 4 pi)^2. About 5.7e-4 at 1 GHz.
double free_space_reference_gain(double carrier_hz);

struct Geometry {
    double area_width = 1000.0;   // meters
    double area_height = 500.0;   // meters
    std::vector<Eigen::Vector2d> bs_positions = {{250.0, 250.0}, {750.0, 250.0}};
};

// Strict config-level checks: positive extents, >= 2 BSs, BSs inside the area.
void validate_geometry(const Geometry& geometry);

enum class Fading { none, rayleigh };

struct PathLossParams {
    double exponent = 3.0;
    double reference_gain = 5.6914336571434502e-4;  // free_space_reference_gain(1e9)
    // Slow-fading channel: per-link unit-mean exponential power factor drawn
    // once per instance. fading=none gives the bare distance law.
    Fading fading = Fading::rayleigh;
};

struct RadioParams {
    double tx_power_per_bs_w = 10.0;
    double noise_power_w = 5e-11;
    double bandwidth_hz = 20e6;  // recorded for documentation, not used in SINRs
    double carrier_hz = 1e9;     // sets reference_gain when configured as free space
};

void validate_radio(const RadioParams& radio);

struct ScenarioConfig {
    int n_users = 2;
    Geometry geometry;
    PathLossParams path_loss;
    RadioParams radio;
};

struct ScenarioInstance {
    std::vector<Eigen::Vector2d> user_positions;
    ChannelGains gains;        // gains(i, j) = path gain user i <- BS j
    NormalizedPowers powers;   // p_j = tx_power_per_bs / noise_power
    std::uint64_t seed_record = 0;
};

// Independent uniform positions over [0, width] x [0, height]; x drawn before
// y, users in index order. Degenerate zero extents collapse to that edge.
std::vector<Eigen::Vector2d> place_users(std::mt19937_64& rng, const Geometry& geometry,
                                         int n_users);

// reference_gain * d^-exponent. Deterministic form; rejects fading=rayleigh
// because that needs a random source (overload below).
double path_gain(const Eigen::Vector2d& user_pos, const Eigen::Vector2d& bs_pos,
                 const PathLossParams& params);

// Same, with a unit-mean exponential fading factor when fading=rayleigh
// (one draw per call; no draw consumed when fading=none).
double path_gain(const Eigen::Vector2d& user_pos, const Eigen::Vector2d& bs_pos,
                 const PathLossParams& params, std::mt19937_64& rng);

// Draws positions, fills the gain matrix row-major (user-major, BS-minor),
// and normalizes powers by the noise. (seed, config) determine everything.
ScenarioInstance generate_instance(std::mt19937_64& rng, const ScenarioConfig& config,
                                   std::uint64_t seed_record = 0);

}  // namespace canoma
