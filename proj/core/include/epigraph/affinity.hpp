#pragma once

#include "epigraph/data_model.hpp"

#include <Eigen/Core>

#include <filesystem>
#include <string>

namespace epigraph {

/// Weighted adjacency over cities: symmetric, nonnegative, zero diagonal.
/// `label` identifies the construction ("A0", "A(t)", "C0", "C(t)").
struct AffinityMatrix {
    Eigen::MatrixXd weights;
    std::string label;

    int n() const { return static_cast<int>(weights.rows()); }
};

/// Entries smaller than this are truncated to exactly 0 so the edge set is
/// well defined for degree computations.
inline constexpr double kWeightFloor = 1e-12;

/// Scales the i->j commuter flow by the isolation of the destination city
/// (the default) or of the origin city.
enum class IsolationAttribution { destination, origin };

/// A0: total daily commuters between each pair, both directions, work + school.
AffinityMatrix build_static_commute(const MobilityData& mobility);

/// Isolation relative to the pre-pandemic baseline, clamped to [0,1]:
/// 0 means at-or-below baseline, 1 means full isolation.
double relative_isolation(const TimeSeriesPanel& panel, int city, int week);

/// A(t): commuter affinity with each directed flow damped by the relative
/// isolation of the attributed city that week.
AffinityMatrix build_isolation_adjusted(
    const MobilityData& mobility, const TimeSeriesPanel& panel, int week,
    IsolationAttribution attribution = IsolationAttribution::destination);

/// C0: difference in total ICU beds at week 0, divided by road distance.
/// `smoothing_km` keeps very small distances from dominating.
AffinityMatrix build_icu_static(const MobilityData& mobility, const TimeSeriesPanel& panel,
                                double smoothing_km = 10.0);

/// C(t): need-weighted difference in available ICU beds at the given week.
/// A city with no free beds has urgency 1 and is pulled toward nearby cities
/// with spare capacity.
AffinityMatrix build_icu_dynamic(const MobilityData& mobility, const TimeSeriesPanel& panel,
                                 int week, double smoothing_km = 10.0);

void write_affinity_csv(const AffinityMatrix& matrix, const std::filesystem::path& path);
AffinityMatrix read_affinity_csv(const std::filesystem::path& path);

} // namespace epigraph
