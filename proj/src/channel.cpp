#include "ntn/channel.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace ntn {

void LinkBudgetParams::validate() const {
    if (!(bandwidth_mhz > 0)) throw DomainError("bandwidth must be > 0");
    if (!(noise_temperature_k > 0)) throw DomainError("noise temperature must be > 0");
    if (!(carrier_freq_ghz > 0)) throw DomainError("carrier frequency must be > 0");
    for (double v : {tx_power_dbw, total_antenna_gain_dbi, noise_figure_db, calibration_gain_db})
        if (!std::isfinite(v)) throw DomainError("link budget terms must be finite");
}

ChannelProfile::ChannelProfile(std::vector<Row> rows) : rows_(std::move(rows)) {
    if (rows_.empty()) throw DomainError("channel profile needs at least one row");
    std::sort(rows_.begin(), rows_.end(),
              [](const Row& a, const Row& b) { return a.elevation_deg < b.elevation_deg; });
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        const Row& r = rows_[i];
        if (!(r.elevation_deg > 0 && r.elevation_deg <= 90))
            throw DomainError("profile elevation must lie in (0, 90]");
        if (i > 0 && r.elevation_deg == rows_[i - 1].elevation_deg)
            throw DomainError("duplicate profile elevation");
        for (double v : {r.atmospheric_loss_db, r.scintillation_loss_db, r.shadowing_sigma_db})
            if (!std::isfinite(v) || v < 0)
                throw DomainError("profile losses and sigma must be finite and non-negative");
    }
}

ChannelProfile ChannelProfile::zero_loss() {
    return ChannelProfile(std::vector<Row>{{90.0, 0.0, 0.0, 0.0}});
}

ChannelProfile ChannelProfile::urban_ka_band() {
    // Gaseous absorption ~0.35 dB at zenith scaled by 1/sin(elevation);
    // Ka-band scintillation; urban LOS shadowing spread.
    return ChannelProfile(std::vector<Row>{
        {10.0, 2.02, 1.08, 4.0},
        {20.0, 1.02, 0.48, 4.0},
        {30.0, 0.70, 0.30, 4.0},
        {40.0, 0.54, 0.22, 4.0},
        {50.0, 0.46, 0.17, 4.0},
        {60.0, 0.40, 0.13, 4.0},
        {70.0, 0.37, 0.12, 4.0},
        {80.0, 0.36, 0.11, 4.0},
        {90.0, 0.35, 0.11, 4.0},
    });
}

const ChannelProfile::Row& ChannelProfile::lookup(double elevation_deg) const {
    if (!(elevation_deg > 0 && elevation_deg <= 90))
        throw DomainError("elevation angle must lie in (0, 90] degrees");
    auto upper = std::lower_bound(rows_.begin(), rows_.end(), elevation_deg,
                                  [](const Row& r, double e) { return r.elevation_deg < e; });
    if (upper == rows_.begin()) return *upper;
    if (upper == rows_.end()) return rows_.back();
    auto lower = std::prev(upper);
    return (elevation_deg - lower->elevation_deg < upper->elevation_deg - elevation_deg) ? *lower : *upper;
}

double sample_shadowing(double sigma_db, RandomStream& rng) {
    if (!(sigma_db >= 0)) throw DomainError("shadowing sigma must be >= 0");
    std::normal_distribution<double> standard(0.0, 1.0);
    const double z = standard(rng);
    return sigma_db == 0.0 ? 0.0 : sigma_db * z;
}

LinkQuality link_quality(const UeGeometry& ue, const LinkBudgetParams& params,
                         const ChannelProfile& profile, double shadowing_db) {
    params.validate();
    LinkQuality q;
    const auto& row = profile.lookup(ue.elevation_deg);
    q.shadowing_db = shadowing_db;
    q.path_loss_db = path_loss(fspl(params.carrier_freq_ghz, ue.slant_range_km),
                               row.atmospheric_loss_db, row.scintillation_loss_db, shadowing_db);
    q.rx_power_dbw = params.tx_power_dbw + params.total_antenna_gain_dbi + params.calibration_gain_db -
                     q.path_loss_db;
    q.snr_db = q.rx_power_dbw - noise_floor_dbw(params.noise_temperature_k, params.bandwidth_hz()) -
               params.noise_figure_db;
    q.capacity_mbps = ergodic_capacity_mbps(q.snr_db, params.bandwidth_mhz);
    return q;
}

LinkQuality link_quality(const UeGeometry& ue, const LinkBudgetParams& params,
                         const ChannelProfile& profile, RandomStream& rng) {
    const double sf = sample_shadowing(profile.shadowing_sigma(ue.elevation_deg), rng);
    return link_quality(ue, params, profile, sf);
}

} // namespace ntn
