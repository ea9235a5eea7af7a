#pragma once

// Satellite/UE geometry: slant range from elevation angle and altitude,
// one-way propagation delay, and delay extremes of a UE population.
//
// Scalar functions are templated on the floating-point type; the
// Eigen::ArrayBase overloads evaluate a whole population coefficient-wise.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "ntn/errors.hpp"

namespace ntn {

inline constexpr double kSpeedOfLightKmPerS = 299792.458;
inline constexpr double kEarthRadiusKm = 6371.0;

template <std::floating_point Scalar = double>
struct SatelliteGeometry {
    Scalar altitude_km{};
    Scalar earth_radius_km = Scalar(kEarthRadiusKm);

    void validate() const {
        if (!(altitude_km > 0)) throw DomainError("satellite altitude must be > 0 km");
        if (!(earth_radius_km > 0)) throw DomainError("earth radius must be > 0 km");
    }
};

struct UeGeometry {
    int ue_id = 0;
    double elevation_deg = 90.0;
    double slant_range_km = 0.0;
    double delay_ms = 0.0;
};

struct DelayExtremes {
    double tau_min_ms = 0.0;
    double tau_max_ms = 0.0;

    double spread_ms() const { return tau_max_ms - tau_min_ms; }
};

namespace detail {

template <std::floating_point Scalar>
constexpr Scalar deg_to_rad(Scalar deg) {
    return deg * Scalar(3.14159265358979323846) / Scalar(180);
}

} // namespace detail

/// Distance from a ground UE to the satellite for elevation `alpha_deg` in (0, 90].
template <std::floating_point Scalar>
Scalar slant_range(Scalar alpha_deg, const SatelliteGeometry<Scalar>& geom) {
    if (!(alpha_deg > 0 && alpha_deg <= 90))
        throw DomainError("elevation angle must lie in (0, 90] degrees");
    geom.validate();
    const Scalar re = geom.earth_radius_km;
    const Scalar h = geom.altitude_km;
    const Scalar re_sin = re * std::sin(detail::deg_to_rad(alpha_deg));
    return std::sqrt(re_sin * re_sin + h * h + 2 * h * re) - re_sin;
}

template <typename Derived>
Eigen::Array<typename Derived::Scalar, Eigen::Dynamic, 1>
slant_range(const Eigen::ArrayBase<Derived>& alpha_deg,
            const SatelliteGeometry<typename Derived::Scalar>& geom) {
    using Scalar = typename Derived::Scalar;
    if (!((alpha_deg > Scalar(0)) && (alpha_deg <= Scalar(90))).all())
        throw DomainError("elevation angle must lie in (0, 90] degrees");
    geom.validate();
    const Scalar re = geom.earth_radius_km;
    const Scalar h = geom.altitude_km;
    const auto re_sin = (alpha_deg * Scalar(3.14159265358979323846 / 180.0)).sin() * re;
    return (re_sin.square() + (h * h + 2 * h * re)).sqrt() - re_sin;
}

/// One-way delay in ms for a slant range in km.
template <std::floating_point Scalar>
Scalar propagation_delay(Scalar distance_km) {
    if (!(distance_km > 0)) throw DomainError("slant range must be > 0 km");
    return distance_km / Scalar(kSpeedOfLightKmPerS) * Scalar(1000);
}

template <typename Derived>
Eigen::Array<typename Derived::Scalar, Eigen::Dynamic, 1>
propagation_delay(const Eigen::ArrayBase<Derived>& distance_km) {
    using Scalar = typename Derived::Scalar;
    if (!(distance_km > Scalar(0)).all()) throw DomainError("slant range must be > 0 km");
    return distance_km * Scalar(1000.0 / kSpeedOfLightKmPerS);
}

/// Twice the longest one-way delay: the guard a TA frame must leave between DL and UL.
template <std::floating_point Scalar>
Scalar round_trip(Scalar tau_ms) {
    return 2 * tau_ms;
}

inline DelayExtremes delay_extremes(std::span<const UeGeometry> ues) {
    if (ues.empty()) throw DomainError("delay_extremes needs at least one UE");
    const auto [lo, hi] = std::minmax_element(
        ues.begin(), ues.end(),
        [](const UeGeometry& a, const UeGeometry& b) { return a.delay_ms < b.delay_ms; });
    return {lo->delay_ms, hi->delay_ms};
}

/// Builds UE records (ids 0..n-1) for a vector of elevations.
inline std::vector<UeGeometry> make_ues(const Eigen::ArrayXd& elevation_deg,
                                        const SatelliteGeometry<double>& geom) {
    const Eigen::ArrayXd range = slant_range(elevation_deg, geom);
    const Eigen::ArrayXd delay = propagation_delay(range);
    std::vector<UeGeometry> ues(static_cast<std::size_t>(elevation_deg.size()));
    for (Eigen::Index i = 0; i < elevation_deg.size(); ++i)
        ues[static_cast<std::size_t>(i)] = {static_cast<int>(i), elevation_deg(i), range(i), delay(i)};
    return ues;
}

} // namespace ntn
