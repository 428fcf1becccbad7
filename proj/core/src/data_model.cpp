#include "epigraph/data_model.hpp"

#include "epigraph/csv.hpp"
#include "epigraph/errors.hpp"
#include "epigraph/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <unordered_map>

namespace epigraph {

namespace fs = std::filesystem;

Eigen::VectorXd CityTable::populations() const {
    Eigen::VectorXd p(n());
    for (const auto& c : entries) p(c.id) = c.population;
    return p;
}

void SimConfig::validate() const {
    if (r0 <= 0.0) throw ValidationError("SimConfig: R0 must be positive");
    if (incubation_days < 1 || infectious_days < 1 || convalescent_days < 1)
        throw ValidationError("SimConfig: all stage durations must be >= 1 day");
    if (new_case_seed_fraction <= 0.0 || new_case_seed_fraction >= 1.0)
        throw ValidationError("SimConfig: new_case_seed_fraction must lie in (0,1)");
    if (incubation_offset < 0 || incubation_offset >= removal_offset())
        throw ValidationError("SimConfig: incubation_offset out of range");
}

DatasetPaths DatasetPaths::for_directory(const fs::path& dir) {
    DatasetPaths p;
    p.cities = dir / "cities.csv";
    p.commute = dir / "commute.csv";
    p.education = dir / "education.csv";
    p.distance = dir / "distance.csv";
    auto optional_file = [&dir](const char* name) -> std::optional<fs::path> {
        fs::path f = dir / name;
        if (fs::exists(f)) return f;
        return std::nullopt;
    };
    p.isolation = optional_file("isolation.csv");
    p.baseline_isolation = optional_file("baseline_isolation.csv");
    p.icu_total = optional_file("icu_total.csv");
    p.icu_available = optional_file("icu_available.csv");
    p.cases = optional_file("cases.csv");
    p.deaths = optional_file("deaths.csv");
    return p;
}

namespace {

const char* kCityHeader = "id,name,population,lat,lon,region";

CityTable load_cities(const fs::path& path) {
    csv::Table table = csv::read_table(path);
    if (table.rows.empty()) throw ValidationError(path.filename().string() + ": no city rows");

    std::size_t first_row = 0;
    if (!table.rows.front().empty() && table.rows.front().front() == "id") {
        first_row = 1;
    }

    CityTable cities;
    std::unordered_map<long long, int> seen_codes;
    for (std::size_t r = first_row; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        if (row.size() != 6) {
            throw ValidationError(path.filename().string() + ":" + std::to_string(r + 1) +
                                  ": expected 6 columns (" + kCityHeader + "), got " +
                                  std::to_string(row.size()));
        }
        City city;
        city.id = static_cast<int>(cities.entries.size());
        city.code = csv::parse_int(row[0], path, r + 1, 1);
        city.name = row[1];
        city.population = csv::parse_double(row[2], path, r + 1, 3);
        city.latitude = csv::parse_double(row[3], path, r + 1, 4);
        city.longitude = csv::parse_double(row[4], path, r + 1, 5);
        city.fixed_region = static_cast<int>(csv::parse_int(row[5], path, r + 1, 6));

        if (!seen_codes.emplace(city.code, city.id).second) {
            throw ValidationError(path.filename().string() + ":" + std::to_string(r + 1) +
                                  ": duplicate city id " + std::to_string(city.code));
        }
        cities.entries.push_back(std::move(city));
    }

    int max_region = 0;
    for (const auto& c : cities.entries) max_region = std::max(max_region, c.fixed_region);
    cities.region_count = max_region + 1;
    return cities;
}

Eigen::MatrixXd load_square_matrix(const fs::path& path, int n, const char* what) {
    Eigen::MatrixXd m = csv::read_matrix(path);
    if (m.rows() != n || m.cols() != n) {
        throw ValidationError(std::string(what) + " matrix " + path.filename().string() +
                              " is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                              ", expected " + std::to_string(n) + "x" + std::to_string(n));
    }
    return m;
}

Eigen::MatrixXd load_panel_matrix(const fs::path& path, int n, int& weeks, const char* what) {
    Eigen::MatrixXd m = csv::read_matrix(path);
    if (m.rows() != n) {
        throw ValidationError(std::string(what) + " panel " + path.filename().string() + " has " +
                              std::to_string(m.rows()) + " rows, expected one per city (" +
                              std::to_string(n) + ")");
    }
    if (weeks == 0) {
        weeks = static_cast<int>(m.cols());
    } else if (m.cols() != weeks) {
        throw ValidationError(std::string(what) + " panel " + path.filename().string() + " has " +
                              std::to_string(m.cols()) + " weeks, other panels have " +
                              std::to_string(weeks));
    }
    return m;
}

void check_nonnegative(const Eigen::MatrixXd& m, const char* what) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            if (m(i, j) < 0.0)
                throw ValidationError(std::string(what) + " has negative entry at city " +
                                      std::to_string(i) + ", column " + std::to_string(j));
}

void check_zero_diagonal(const Eigen::MatrixXd& m, const char* what) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        if (m(i, i) != 0.0)
            throw ValidationError(std::string(what) + " has nonzero diagonal at city " +
                                  std::to_string(i));
}

} // namespace

void validate_dataset(const Dataset& data, const LoadOptions& options) {
    const int n = data.n();
    if (n == 0) throw ValidationError("dataset has no cities");

    std::vector<bool> region_present(static_cast<std::size_t>(data.cities.region_count), false);
    for (const auto& c : data.cities.entries) {
        if (c.population <= 0.0)
            throw ValidationError("city " + std::to_string(c.id) + " (" + c.name +
                                  ") has non-positive population");
        if (c.population < 10000.0) {
            if (options.enforce_min_population)
                throw ValidationError("city " + std::to_string(c.id) + " (" + c.name +
                                      ") violates the population >= 10000 inclusion rule");
            if (options.warnings)
                *options.warnings << "warning: city " << c.id << " (" << c.name
                                  << ") has population below 10000\n";
        }
        if (c.fixed_region < 0 || c.fixed_region >= data.cities.region_count)
            throw ValidationError("city " + std::to_string(c.id) + " has region " +
                                  std::to_string(c.fixed_region) + " outside 0.." +
                                  std::to_string(data.cities.region_count - 1));
        region_present[static_cast<std::size_t>(c.fixed_region)] = true;
    }
    for (int r = 0; r < data.cities.region_count; ++r)
        if (!region_present[static_cast<std::size_t>(r)])
            throw ValidationError("fixed_region values are not contiguous: region " +
                                  std::to_string(r) + " has no cities");

    const auto& mob = data.mobility;
    if (mob.commute.rows() != n || mob.commute.cols() != n ||
        mob.education.rows() != n || mob.education.cols() != n ||
        mob.distance.rows() != n || mob.distance.cols() != n)
        throw ValidationError("mobility matrices must all be n x n");

    check_nonnegative(mob.commute, "commute");
    check_nonnegative(mob.education, "education");
    check_nonnegative(mob.distance, "distance");
    check_zero_diagonal(mob.commute, "commute");
    check_zero_diagonal(mob.education, "education");
    check_zero_diagonal(mob.distance, "distance");
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (mob.distance(i, j) != mob.distance(j, i))
                throw ValidationError("distance matrix is not symmetric at (" + std::to_string(i) +
                                      "," + std::to_string(j) + ")");
            if (i != j && mob.distance(i, j) <= 0.0)
                throw ValidationError("distance between cities " + std::to_string(i) + " and " +
                                      std::to_string(j) + " must be positive");
        }
        const double out = mob.commute.row(i).sum() + mob.education.row(i).sum();
        const double pop = data.cities.entries[static_cast<std::size_t>(i)].population;
        if (out > pop)
            throw ValidationError("commuter total " + csv::format_double(out) + " exceeds population " +
                                  csv::format_double(pop) + " for city " + std::to_string(i));
    }

    const auto& panel = data.panel;
    auto check_panel_shape = [&](const std::optional<Eigen::MatrixXd>& m, const char* what) {
        if (!m) return;
        if (m->rows() != n || m->cols() != panel.weeks)
            throw ValidationError(std::string(what) + " panel must be " + std::to_string(n) + "x" +
                                  std::to_string(panel.weeks));
    };
    check_panel_shape(panel.isolation, "isolation");
    check_panel_shape(panel.icu_total, "icu_total");
    check_panel_shape(panel.icu_available, "icu_available");
    check_panel_shape(panel.cases, "cases");
    check_panel_shape(panel.deaths, "deaths");

    if (panel.isolation.has_value() != panel.baseline_isolation.has_value())
        throw ValidationError("isolation and baseline_isolation panels must be provided together");
    if (panel.icu_total.has_value() != panel.icu_available.has_value())
        throw ValidationError("icu_total and icu_available panels must be provided together");

    if (panel.has_isolation()) {
        if (panel.baseline_isolation->size() != n)
            throw ValidationError("baseline_isolation must have one row per city");
        for (int i = 0; i < n; ++i) {
            const double b = (*panel.baseline_isolation)(i);
            if (b < 0.0 || b >= 1.0)
                throw ValidationError("baseline isolation for city " + std::to_string(i) +
                                      " must lie in [0,1)");
            for (int t = 0; t < panel.weeks; ++t) {
                const double v = (*panel.isolation)(i, t);
                if (v < 0.0 || v > 1.0)
                    throw ValidationError("isolation for city " + std::to_string(i) + " at week " +
                                          std::to_string(t) + " must lie in [0,1]");
            }
        }
    }
    if (panel.has_icu()) {
        for (int i = 0; i < n; ++i)
            for (int t = 0; t < panel.weeks; ++t) {
                const double u = (*panel.icu_total)(i, t);
                const double l = (*panel.icu_available)(i, t);
                if (u < 0.0 || l < 0.0)
                    throw ValidationError("ICU counts must be nonnegative (city " +
                                          std::to_string(i) + ", week " + std::to_string(t) + ")");
                if (l > u)
                    throw ValidationError("icu_available exceeds icu_total for city " +
                                          std::to_string(i) + " at week " + std::to_string(t));
            }
    }
    if (panel.cases) check_nonnegative(*panel.cases, "cases");
    if (panel.deaths) check_nonnegative(*panel.deaths, "deaths");
}

Dataset load_dataset(const DatasetPaths& paths, const LoadOptions& options) {
    Dataset data;
    data.cities = load_cities(paths.cities);
    const int n = data.n();

    data.mobility.commute = load_square_matrix(paths.commute, n, "commute");
    data.mobility.education = load_square_matrix(paths.education, n, "education");
    data.mobility.distance = load_square_matrix(paths.distance, n, "distance");

    int weeks = 0;
    auto& panel = data.panel;
    if (paths.isolation) panel.isolation = load_panel_matrix(*paths.isolation, n, weeks, "isolation");
    if (paths.icu_total) panel.icu_total = load_panel_matrix(*paths.icu_total, n, weeks, "icu_total");
    if (paths.icu_available)
        panel.icu_available = load_panel_matrix(*paths.icu_available, n, weeks, "icu_available");
    if (paths.cases) panel.cases = load_panel_matrix(*paths.cases, n, weeks, "cases");
    if (paths.deaths) panel.deaths = load_panel_matrix(*paths.deaths, n, weeks, "deaths");
    if (paths.baseline_isolation) {
        Eigen::MatrixXd b = csv::read_matrix(*paths.baseline_isolation);
        if (b.rows() != n || b.cols() != 1)
            throw ValidationError("baseline_isolation.csv must be " + std::to_string(n) + " rows x 1 column");
        panel.baseline_isolation = b.col(0);
    }
    panel.weeks = weeks;

    validate_dataset(data, options);
    return data;
}

void write_dataset(const Dataset& data, const fs::path& dir) {
    fs::create_directories(dir);

    std::ofstream out(dir / "cities.csv");
    if (!out) throw ValidationError("cannot write " + (dir / "cities.csv").string());
    out << kCityHeader << '\n';
    for (const auto& c : data.cities.entries) {
        out << c.code << ',' << c.name << ',' << csv::format_double(c.population) << ','
            << csv::format_double(c.latitude) << ',' << csv::format_double(c.longitude) << ','
            << c.fixed_region << '\n';
    }
    out.close();

    csv::write_matrix(dir / "commute.csv", data.mobility.commute);
    csv::write_matrix(dir / "education.csv", data.mobility.education);
    csv::write_matrix(dir / "distance.csv", data.mobility.distance);

    const auto& panel = data.panel;
    if (panel.isolation) csv::write_matrix(dir / "isolation.csv", *panel.isolation);
    if (panel.baseline_isolation)
        csv::write_matrix(dir / "baseline_isolation.csv", *panel.baseline_isolation);
    if (panel.icu_total) csv::write_matrix(dir / "icu_total.csv", *panel.icu_total);
    if (panel.icu_available) csv::write_matrix(dir / "icu_available.csv", *panel.icu_available);
    if (panel.cases) csv::write_matrix(dir / "cases.csv", *panel.cases);
    if (panel.deaths) csv::write_matrix(dir / "deaths.csv", *panel.deaths);
}

std::vector<int> synthetic_block_labels(int n, int blocks) {
    std::vector<int> labels(static_cast<std::size_t>(n));
    const int base = n / blocks;
    const int extra = n % blocks;
    int city = 0;
    for (int b = 0; b < blocks; ++b) {
        const int size = base + (b < extra ? 1 : 0);
        for (int s = 0; s < size; ++s) labels[static_cast<std::size_t>(city++)] = b;
    }
    return labels;
}

Dataset generate_synthetic(int n, int blocks, std::uint64_t seed) {
    if (blocks < 1) throw ValidationError("generate_synthetic: blocks must be >= 1");
    if (n < blocks)
        throw ValidationError("generate_synthetic: n (" + std::to_string(n) +
                              ") must be >= blocks (" + std::to_string(blocks) + ")");

    std::mt19937_64 rng(splitmix64(seed));
    const std::vector<int> block = synthetic_block_labels(n, blocks);
    const int weeks = 6;

    Dataset data;
    data.cities.region_count = blocks;
    data.cities.entries.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        City c;
        c.id = i;
        c.code = 430000 + 5LL * i;
        char name[32];
        std::snprintf(name, sizeof(name), "synth-%03d", i);
        c.name = name;
        c.population = std::floor(uniform(rng, 30000.0, 120000.0));
        const int b = block[static_cast<std::size_t>(i)];
        c.latitude = -32.0 + 1.5 * b + uniform(rng, -0.4, 0.4);
        c.longitude = -54.0 + 1.2 * b + uniform(rng, -0.4, 0.4);
        c.fixed_region = b;
        data.cities.entries.push_back(std::move(c));
    }

    auto same_block = [&block](int i, int j) {
        return block[static_cast<std::size_t>(i)] == block[static_cast<std::size_t>(j)];
    };

    Eigen::MatrixXd commute = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd education = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            commute(i, j) = same_block(i, j) ? uniform(rng, 120.0, 280.0) : uniform(rng, 0.5, 2.0);
            education(i, j) = same_block(i, j) ? uniform(rng, 25.0, 60.0) : uniform(rng, 0.1, 0.7);
        }

    Eigen::MatrixXd distance = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double d = same_block(i, j) ? uniform(rng, 12.0, 45.0) : uniform(rng, 120.0, 280.0);
            distance(i, j) = d;
            distance(j, i) = d;
        }

    data.mobility = MobilityData{std::move(commute), std::move(education), std::move(distance)};

    TimeSeriesPanel panel;
    panel.weeks = weeks;
    Eigen::VectorXd baseline(n);
    Eigen::MatrixXd isolation(n, weeks), icu_total(n, weeks), icu_available(n, weeks),
        cases(n, weeks), deaths(n, weeks);
    for (int i = 0; i < n; ++i) {
        baseline(i) = uniform(rng, 0.24, 0.36);
        const double icu_base = 18.0 + 12.0 * block[static_cast<std::size_t>(i)] + uniform(rng, 0.0, 10.0);
        double weekly_cases = std::floor(uniform(rng, 3.0, 15.0));
        for (int t = 0; t < weeks; ++t) {
            isolation(i, t) = std::min(baseline(i) + uniform(rng, 0.04, 0.37), 0.97);
            icu_total(i, t) = std::floor(icu_base + t);
            icu_available(i, t) = std::floor(icu_total(i, t) * uniform(rng, 0.15, 0.75));
            cases(i, t) = weekly_cases;
            deaths(i, t) = std::floor(weekly_cases * 0.025 + 0.5);
            weekly_cases = std::floor(weekly_cases * uniform(rng, 1.05, 1.3) + 0.5);
        }
    }
    panel.baseline_isolation = std::move(baseline);
    panel.isolation = std::move(isolation);
    panel.icu_total = std::move(icu_total);
    panel.icu_available = std::move(icu_available);
    panel.cases = std::move(cases);
    panel.deaths = std::move(deaths);
    data.panel = std::move(panel);

    validate_dataset(data);
    return data;
}

} // namespace epigraph
