#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "ntn/errors.hpp"
#include "ntn/scheduler.hpp"

using namespace ntn;

namespace {

struct Optimum {
    double best_min_snr = -std::numeric_limits<double>::infinity();
    double best_spread = std::numeric_limits<double>::infinity();
};

// Exhaustive search over all subsets of size k (|U| <= 15).
Optimum brute_force(const std::vector<UeCandidate>& ues, int k) {
    Optimum o;
    const int n = static_cast<int>(ues.size());
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (std::popcount(mask) != k) continue;
        double lo_snr = std::numeric_limits<double>::infinity();
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (int i = 0; i < n; ++i) {
            if (!(mask >> i & 1u)) continue;
            lo_snr = std::min(lo_snr, ues[static_cast<std::size_t>(i)].snr_db);
            lo = std::min(lo, ues[static_cast<std::size_t>(i)].delay_ms);
            hi = std::max(hi, ues[static_cast<std::size_t>(i)].delay_ms);
        }
        o.best_min_snr = std::max(o.best_min_snr, lo_snr);
        o.best_spread = std::min(o.best_spread, hi - lo);
    }
    return o;
}

std::vector<UeCandidate> random_ues(std::mt19937_64& rng, int n, bool grid_values) {
    std::uniform_real_distribution<double> snr(-10.0, 40.0), tau(1.0, 3.5);
    std::uniform_int_distribution<int> q(0, 4096);
    std::vector<UeCandidate> out;
    for (int i = 0; i < n; ++i) {
        if (grid_values)
            out.push_back({i, q(rng) / 1024.0, q(rng) / 1024.0});
        else
            out.push_back({i, snr(rng), tau(rng)});
    }
    return out;
}

} // namespace

TEST_CASE("MG picks the strongest UEs") {
    const std::vector<UeCandidate> ues = {{0, 10, 2.0}, {1, 30, 2.5}, {2, 20, 2.2}, {3, 30, 1.9}};
    const auto r = select_mg(ues, 2);
    CHECK(r.selected_ids == std::vector<int>{1, 3});
    CHECK(r.min_snr_db == 30.0);
    CHECK(r.tau_min_ms == 1.9);
    CHECK(r.tau_max_ms == 2.5);
    CHECK(r.delay_spread_ms == doctest::Approx(0.6));
    CHECK(r.method == SchedulerKind::MG);
    // Tie at the boundary goes to the smaller id.
    CHECK(select_mg(ues, 1).selected_ids == std::vector<int>{1});
}

TEST_CASE("MS picks the tightest delay window") {
    const std::vector<UeCandidate> ues = {{0, 10, 2.0}, {1, 30, 2.5}, {2, 20, 2.05}, {3, 5, 1.2}, {4, 6, 2.48}};
    const auto r = select_ms(ues, 2);
    CHECK(r.selected_ids == std::vector<int>{1, 4});
    CHECK(r.delay_spread_ms == doctest::Approx(0.02));
    CHECK(r.min_snr_db == 6.0);
    CHECK(select(SchedulerKind::MS, ues, 5).selected_ids.size() == 5);
}

TEST_CASE("selection errors") {
    const std::vector<UeCandidate> ues = {{0, 1, 1}, {1, 2, 2}};
    CHECK_THROWS_AS(select_mg(ues, 0), DomainError);
    CHECK_THROWS_AS(select_ms(ues, 3), DomainError);
    CHECK_THROWS_AS(select_mg({}, 1), DomainError);
    CHECK(parse_scheduler("ms") == SchedulerKind::MS);
    CHECK_THROWS_AS(parse_scheduler("rr"), DomainError);
}

TEST_CASE("selections match exhaustive optima") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + trial % 12;
        const int k = 1 + static_cast<int>(rng() % static_cast<unsigned>(n));
        const auto ues = random_ues(rng, n, trial % 2 == 0);
        const auto opt = brute_force(ues, k);
        const auto mg = select_mg(ues, k);
        const auto ms = select_ms(ues, k);
        CHECK(mg.selected_ids.size() == static_cast<std::size_t>(k));
        CHECK(ms.selected_ids.size() == static_cast<std::size_t>(k));
        CHECK(mg.min_snr_db == opt.best_min_snr);
        CHECK(ms.delay_spread_ms == opt.best_spread);
        CHECK(std::is_sorted(mg.selected_ids.begin(), mg.selected_ids.end()));
    }
}

TEST_CASE("MS selection is contiguous in delay order") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        const auto ues = random_ues(rng, 30, false);
        const auto r = select_ms(ues, 7);
        for (const auto& u : ues) {
            const bool inside = u.delay_ms >= r.tau_min_ms && u.delay_ms <= r.tau_max_ms;
            const bool chosen = std::binary_search(r.selected_ids.begin(), r.selected_ids.end(), u.ue_id);
            CHECK(inside == chosen);
        }
    }
}

TEST_CASE("selection is invariant to positive scaling") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 100; ++trial) {
        auto ues = random_ues(rng, 20, true);
        for (double c : {2.0, 0.5, 8.0}) {
            auto scaled = ues;
            for (auto& u : scaled) {
                u.snr_db *= c;
                u.delay_ms *= c;
            }
            CHECK(select_mg(ues, 5).selected_ids == select_mg(scaled, 5).selected_ids);
            CHECK(select_ms(ues, 5).selected_ids == select_ms(scaled, 5).selected_ids);
        }
    }
}

TEST_CASE("MG has the higher minimum SNR and MS the smaller spread") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        const auto ues = random_ues(rng, 50, false);
        const auto mg = select_mg(ues, 10);
        const auto ms = select_ms(ues, 10);
        CHECK(mg.min_snr_db >= ms.min_snr_db);
        CHECK(ms.delay_spread_ms <= mg.delay_spread_ms);
    }
}
