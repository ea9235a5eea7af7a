#pragma once

// Evaluation metrics of a slot timeline and the Monte Carlo aggregation.

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "ntn/channel.hpp"
#include "ntn/scheduler.hpp"
#include "ntn/tdd_schedule.hpp"

namespace ntn {

inline constexpr int kMetricCount = 7;
using MetricVector = Eigen::Array<double, kMetricCount, 1>;

/// Field names in MetricVector order.
inline constexpr std::array<std::string_view, kMetricCount> kMetricNames = {
    "avg_guard_period_ms", "channel_usage_pct", "dl_usage_pct", "ul_usage_pct",
    "avg_capacity_mbps",   "dl_capacity_mbps",  "ul_capacity_mbps",
};

struct MetricsReport {
    double avg_guard_period_ms = 0.0;
    double channel_usage_pct = 0.0;
    double dl_usage_pct = 0.0;
    double ul_usage_pct = 0.0;
    double avg_capacity_mbps = 0.0;
    double dl_capacity_mbps = 0.0;
    double ul_capacity_mbps = 0.0;
    int n_runs = 1;
    std::optional<MetricVector> ci95_halfwidth; // present when n_runs >= 2

    MetricVector values() const;
    static MetricsReport from_values(const MetricVector& v, int n_runs = 1);
};

struct ChannelUsage {
    double total_pct = 0.0;
    double dl_pct = 0.0;
    double ul_pct = 0.0;
};

struct CapacitySplit {
    double total_mbps = 0.0;
    double dl_mbps = 0.0;
    double ul_mbps = 0.0;
};

/// Mean idle time between the end of one DL block and the start of the next,
/// over transmissions inside the measurement window.
double guard_period(const SlotTimeline& timeline);

/// Allocated slots over all slots of the measurement window, split by type.
ChannelUsage channel_usage(const SlotTimeline& timeline);

/// Mean per-UE capacity of the selected set weighted by the DL and UL slot shares.
CapacitySplit capacity(const SelectionResult& selection, std::span<const LinkQuality> links,
                       const ChannelUsage& usage);

MetricsReport evaluate(const SlotTimeline& timeline, const SelectionResult& selection,
                       std::span<const LinkQuality> links);

/// Streaming mean/variance over reports. merge() is the parallel combination
/// of two partial accumulators.
class MetricsAccumulator {
public:
    void add(const MetricsReport& report);
    void merge(const MetricsAccumulator& other);
    int count() const { return count_; }
    MetricsReport result() const;

private:
    int count_ = 0;
    MetricVector mean_ = MetricVector::Zero();
    MetricVector m2_ = MetricVector::Zero();
};

/// Per-field mean and 95% normal-approximation half-width (absent for one run).
MetricsReport aggregate(std::span<const MetricsReport> reports);

} // namespace ntn
