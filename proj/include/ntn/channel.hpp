#pragma once

// Link budget of the satellite-UE link: free-space path loss, atmospheric
// and scintillation losses, log-normal shadowing, received power, SNR and
// Ergodic (Shannon) capacity.

#include <cmath>
#include <concepts>
#include <vector>

#include <Eigen/Core>

#include "ntn/errors.hpp"
#include "ntn/geometry.hpp"
#include "ntn/random.hpp"

namespace ntn {

inline constexpr double kBoltzmann = 1.380649e-23; // J/K

struct LinkBudgetParams {
    double tx_power_dbw = -6.0;
    double total_antenna_gain_dbi = 24.0; // G_tx + G_rx
    double carrier_freq_ghz = 28.0;
    double bandwidth_mhz = 200.0;
    double noise_temperature_k = 290.0;
    double noise_figure_db = 5.0;
    double calibration_gain_db = 0.0;

    void validate() const;
    double bandwidth_hz() const { return bandwidth_mhz * 1e6; }
};

/// Elevation-bucketed loss table. A query returns the row whose tabulated
/// elevation is nearest to the requested one (ties resolve upwards).
class ChannelProfile {
public:
    struct Row {
        double elevation_deg;
        double atmospheric_loss_db;
        double scintillation_loss_db;
        double shadowing_sigma_db;
    };

    ChannelProfile() : ChannelProfile(zero_loss()) {}
    explicit ChannelProfile(std::vector<Row> rows);

    /// All losses and the shadowing spread are zero.
    static ChannelProfile zero_loss();
    /// Urban LOS Ka-band defaults (10-degree buckets).
    static ChannelProfile urban_ka_band();

    const Row& lookup(double elevation_deg) const;
    double atmospheric_loss(double elevation_deg) const { return lookup(elevation_deg).atmospheric_loss_db; }
    double scintillation_loss(double elevation_deg) const { return lookup(elevation_deg).scintillation_loss_db; }
    double shadowing_sigma(double elevation_deg) const { return lookup(elevation_deg).shadowing_sigma_db; }

    const std::vector<Row>& rows() const { return rows_; }

private:
    std::vector<Row> rows_;
};

struct LinkQuality {
    double path_loss_db = 0.0;
    double shadowing_db = 0.0;
    double rx_power_dbw = 0.0;
    double snr_db = 0.0;
    double capacity_mbps = 0.0;
};

/// Free-space path loss, f in GHz and d in km.
template <std::floating_point Scalar>
Scalar fspl(Scalar freq_ghz, Scalar distance_km) {
    if (!(freq_ghz > 0) || !(distance_km > 0))
        throw DomainError("fspl needs positive frequency and distance");
    return Scalar(92.45) + 20 * std::log10(freq_ghz) + 20 * std::log10(distance_km);
}

template <typename Derived>
Eigen::Array<typename Derived::Scalar, Eigen::Dynamic, 1>
fspl(typename Derived::Scalar freq_ghz, const Eigen::ArrayBase<Derived>& distance_km) {
    using Scalar = typename Derived::Scalar;
    if (!(freq_ghz > 0) || !(distance_km > Scalar(0)).all())
        throw DomainError("fspl needs positive frequency and distance");
    return Scalar(92.45) + 20 * std::log10(freq_ghz) + 20 * distance_km.log10();
}

template <std::floating_point Scalar>
constexpr Scalar path_loss(Scalar fspl_db, Scalar atmospheric_db, Scalar scintillation_db, Scalar shadowing_db) {
    return fspl_db + atmospheric_db + scintillation_db + shadowing_db;
}

/// 10 log10(k T B), B in Hz.
template <std::floating_point Scalar>
Scalar noise_floor_dbw(Scalar temperature_k, Scalar bandwidth_hz) {
    if (!(temperature_k > 0) || !(bandwidth_hz > 0))
        throw DomainError("noise floor needs positive temperature and bandwidth");
    return 10 * std::log10(Scalar(kBoltzmann) * temperature_k * bandwidth_hz);
}

/// Shannon rate in Mbps for a bandwidth in MHz.
template <std::floating_point Scalar>
Scalar ergodic_capacity_mbps(Scalar snr_db, Scalar bandwidth_mhz) {
    return bandwidth_mhz * std::log2(1 + std::pow(Scalar(10), snr_db / 10));
}

template <typename Derived>
Eigen::Array<typename Derived::Scalar, Eigen::Dynamic, 1>
ergodic_capacity_mbps(const Eigen::ArrayBase<Derived>& snr_db, typename Derived::Scalar bandwidth_mhz) {
    using Scalar = typename Derived::Scalar;
    const auto linear = (snr_db * Scalar(std::log(10.0) / 10.0)).exp();
    return bandwidth_mhz * (1 + linear).log() / Scalar(std::log(2.0));
}

/// One N(0, sigma^2) draw in dB. Always consumes one normal variate so the
/// stream position does not depend on sigma.
double sample_shadowing(double sigma_db, RandomStream& rng);

/// Full per-UE chain: FSPL, table losses, shadowing draw, received power,
/// SNR and capacity.
LinkQuality link_quality(const UeGeometry& ue, const LinkBudgetParams& params,
                         const ChannelProfile& profile, RandomStream& rng);

/// Deterministic variant with an externally supplied shadowing value.
LinkQuality link_quality(const UeGeometry& ue, const LinkBudgetParams& params,
                         const ChannelProfile& profile, double shadowing_db);

} // namespace ntn
