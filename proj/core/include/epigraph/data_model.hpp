#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace epigraph {

/// One municipality. `id` is the dense 0..n-1 index assigned in file order;
/// `code` is the stable identifier carried by the input file.
struct City {
    int id = 0;
    long long code = 0;
    std::string name;
    double population = 0.0;
    double latitude = 0.0;
    double longitude = 0.0;
    int fixed_region = 0;
};

struct CityTable {
    std::vector<City> entries;
    int region_count = 0;

    int n() const { return static_cast<int>(entries.size()); }
    Eigen::VectorXd populations() const;
};

/// Daily commuter matrices (work and school) plus road distances, all n x n.
struct MobilityData {
    Eigen::MatrixXd commute;    // t_ij: residents of i working in j, persons/day
    Eigen::MatrixXd education;  // e_ij: residents of i studying in j, persons/day
    Eigen::MatrixXd distance;   // d_ij: road distance in km, symmetric
};

/// Weekly per-city series. Each panel is optional; a present matrix is n x N.
/// Epidemiological weeks run Saturday through Friday.
struct TimeSeriesPanel {
    int weeks = 0;

    std::optional<Eigen::MatrixXd> isolation;            // beta_i(t) in [0,1]
    std::optional<Eigen::VectorXd> baseline_isolation;   // pre-pandemic mean, in [0,1)
    std::optional<Eigen::MatrixXd> icu_total;            // u_i(t)
    std::optional<Eigen::MatrixXd> icu_available;        // l_i(t) <= u_i(t)
    std::optional<Eigen::MatrixXd> cases;                // reported cases per week
    std::optional<Eigen::MatrixXd> deaths;               // reported deaths per week

    bool has_isolation() const { return isolation.has_value() && baseline_isolation.has_value(); }
    bool has_icu() const { return icu_total.has_value() && icu_available.has_value(); }
    bool has_cases() const { return cases.has_value(); }
    bool has_deaths() const { return deaths.has_value(); }
};

/// Epidemic simulation parameters. The literal compartment bookkeeping uses
/// `incubation_offset` (days after infection at which exposed become
/// infectious in the update rule); `removal_offset()` is the day the disease
/// has run its course.
struct SimConfig {
    double r0 = 2.4;
    double meetings_per_day = 25.0;  // documentation of the derivation; cancels out
    int incubation_days = 4;
    int infectious_days = 5;
    int convalescent_days = 5;
    int horizon_days = 44;
    double new_case_seed_fraction = 0.10;
    int incubation_offset = 2;

    int removal_offset() const { return incubation_days + infectious_days + convalescent_days - 1; }
    int history_days() const { return removal_offset() + 1; }
    void validate() const;
};

struct Dataset {
    CityTable cities;
    MobilityData mobility;
    TimeSeriesPanel panel;

    int n() const { return cities.n(); }
};

/// File locations for one dataset. `for_directory` fills in the conventional
/// names; optional panels whose file is missing are simply left unset.
struct DatasetPaths {
    std::filesystem::path cities;
    std::filesystem::path commute;
    std::filesystem::path education;
    std::filesystem::path distance;
    std::optional<std::filesystem::path> isolation;
    std::optional<std::filesystem::path> baseline_isolation;
    std::optional<std::filesystem::path> icu_total;
    std::optional<std::filesystem::path> icu_available;
    std::optional<std::filesystem::path> cases;
    std::optional<std::filesystem::path> deaths;

    static DatasetPaths for_directory(const std::filesystem::path& dir);
};

struct LoadOptions {
    // The source inclusion rule (population >= 10000) is a warning by default
    // so that small synthetic fixtures stay loadable.
    bool enforce_min_population = false;
    std::ostream* warnings = nullptr;
};

Dataset load_dataset(const DatasetPaths& paths, const LoadOptions& options = {});
void write_dataset(const Dataset& data, const std::filesystem::path& dir);

/// Checks every structural invariant, throwing ValidationError on the first
/// violation. Called by load_dataset; public so synthetic/test data can be
/// validated the same way.
void validate_dataset(const Dataset& data, const LoadOptions& options = {});

/// Deterministic fixture generator: commute/education matrices with `blocks`
/// planted heavy blocks, plausible panels, six weeks of data.
Dataset generate_synthetic(int n, int blocks, std::uint64_t seed);

/// Planted block label of each city for a generate_synthetic dataset.
std::vector<int> synthetic_block_labels(int n, int blocks);

} // namespace epigraph
