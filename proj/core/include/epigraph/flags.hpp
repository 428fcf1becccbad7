#pragma once

#include "epigraph/clustering.hpp"
#include "epigraph/data_model.hpp"

#include <array>
#include <filesystem>
#include <string>
#include <vector>

namespace epigraph {

/// Risk flags, ordered by severity. Stored as ints 1..4 so they can be
/// averaged when combining index bands into a region score.
enum Flag : int { kYellow = 1, kOrange = 2, kRed = 3, kBlack = 4 };

std::string flag_name(int flag);

enum class IndexLevel { region, statewide };

/// Fixed vocabulary of index computations. Every metric is oriented so that
/// a larger value means higher risk, which the ascending band thresholds and
/// the score monotonicity guarantee rely on.
enum class IndexMetric {
    active_cases_per_100k,     // trailing two weeks of reported cases, per 100k
    case_growth,               // week-over-week ratio of reported cases
    icu_occupancy_change,      // week-over-week ratio of occupied ICU beds
    deaths_per_100k,           // weekly deaths per 100k
    icu_occupancy_rate,        // occupied / total ICU beds
    inhabitants_per_icu_bed,   // population per total ICU bed (capacity scarcity)
    cases_per_available_bed,   // trailing two-week cases per free ICU bed
};

IndexMetric parse_metric(const std::string& name);
std::string metric_name(IndexMetric metric);

struct IndexSpec {
    std::string id;
    IndexMetric metric = IndexMetric::active_cases_per_100k;
    IndexLevel level = IndexLevel::region;
    double weight = 0.0;
    std::array<double, 3> thresholds{};  // strictly ascending band edges
};

/// The scoring formula: a weighted set of banded indices plus the thresholds
/// mapping the weighted band average to the final flag.
struct FlagConfig {
    std::vector<IndexSpec> indices;
    std::array<double, 3> final_thresholds{1.5, 2.5, 3.5};

    void validate() const;
    static FlagConfig from_json_file(const std::filesystem::path& path);
    static FlagConfig defaults();
};

/// Per-region values of every configured index at one week, plus the
/// region-of-city map the values were aggregated under.
struct RegionIndexTable {
    int week = 0;
    int region_count = 0;
    std::vector<std::string> index_ids;
    Eigen::MatrixXd values;  // region x index
    std::vector<int> region_of_city;
};

RegionIndexTable compute_region_indices(const Partition& partition, const Dataset& data, int week,
                                        const FlagConfig& config);

struct FlagAssignment {
    int week = 0;
    std::vector<int> region_of_city;
    std::vector<double> region_score;
    std::vector<int> region_flag;  // 1..4
    std::vector<int> city_flag;    // inherited from the region
};

/// Bands each index value (<= t1 -> 1, <= t2 -> 2, <= t3 -> 3, else 4; a
/// missing value is the worst band), averages the bands with the configured
/// weights, and thresholds the score into the final flag.
FlagAssignment assign_flags(const RegionIndexTable& indices, const FlagConfig& config);

struct FlagComparison {
    int lower = 0;   // cities whose dynamic flag is lower-risk than static
    int higher = 0;
    int same = 0;
    std::vector<int> delta;  // per-city dynamic flag minus static flag
};

FlagComparison compare_assignments(const FlagAssignment& static_assign,
                                   const FlagAssignment& dynamic_assign);

} // namespace epigraph
