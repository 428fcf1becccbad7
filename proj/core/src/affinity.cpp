#include "epigraph/affinity.hpp"

#include "epigraph/csv.hpp"
#include "epigraph/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace epigraph {

namespace {

void truncate_floor(Eigen::MatrixXd& w) {
    for (Eigen::Index i = 0; i < w.rows(); ++i)
        for (Eigen::Index j = 0; j < w.cols(); ++j)
            if (w(i, j) < kWeightFloor) w(i, j) = 0.0;
}

void require_week(const TimeSeriesPanel& panel, int week) {
    if (week < 0 || week >= panel.weeks)
        throw std::out_of_range("week " + std::to_string(week) + " outside panel range 0.." +
                                std::to_string(panel.weeks - 1));
}

} // namespace

AffinityMatrix build_static_commute(const MobilityData& mobility) {
    const auto& t = mobility.commute;
    const auto& e = mobility.education;
    Eigen::MatrixXd w = t + t.transpose() + e + e.transpose();
    w.diagonal().setZero();
    truncate_floor(w);
    return {std::move(w), "A0"};
}

double relative_isolation(const TimeSeriesPanel& panel, int city, int week) {
    if (!panel.has_isolation())
        throw ValidationError("isolation panel required");
    require_week(panel, week);
    const int n = static_cast<int>(panel.isolation->rows());
    if (city < 0 || city >= n)
        throw std::out_of_range("city " + std::to_string(city) + " outside 0.." + std::to_string(n - 1));
    const double beta = (*panel.isolation)(city, week);
    const double base = (*panel.baseline_isolation)(city);
    return std::max((beta - base) / (1.0 - base), 0.0);
}

AffinityMatrix build_isolation_adjusted(const MobilityData& mobility, const TimeSeriesPanel& panel,
                                        int week, IsolationAttribution attribution) {
    if (!panel.has_isolation())
        throw ValidationError("isolation panel required");
    require_week(panel, week);

    const int n = static_cast<int>(mobility.commute.rows());
    Eigen::VectorXd damp(n);
    for (int i = 0; i < n; ++i) damp(i) = 1.0 - relative_isolation(panel, i, week);

    const Eigen::MatrixXd flow = mobility.commute + mobility.education;
    Eigen::MatrixXd w(n, n);
    for (int i = 0; i < n; ++i) {
        w(i, i) = 0.0;
        for (int j = i + 1; j < n; ++j) {
            double a;
            if (attribution == IsolationAttribution::destination) {
                a = damp(j) * flow(i, j) + damp(i) * flow(j, i);
            } else {
                a = damp(i) * flow(i, j) + damp(j) * flow(j, i);
            }
            w(i, j) = a;
            w(j, i) = a;
        }
    }
    truncate_floor(w);
    return {std::move(w), "A(t)"};
}

AffinityMatrix build_icu_static(const MobilityData& mobility, const TimeSeriesPanel& panel,
                                double smoothing_km) {
    if (!panel.has_icu())
        throw ValidationError("icu panel required");
    if (smoothing_km <= 0.0)
        throw ValidationError("distance smoothing constant must be positive");

    const Eigen::VectorXd beds = panel.icu_total->col(0);
    const int n = static_cast<int>(beds.size());
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double g = std::abs(beds(i) - beds(j)) / (mobility.distance(i, j) + smoothing_km);
            w(i, j) = g;
            w(j, i) = g;
        }
    truncate_floor(w);
    return {std::move(w), "C0"};
}

AffinityMatrix build_icu_dynamic(const MobilityData& mobility, const TimeSeriesPanel& panel,
                                 int week, double smoothing_km) {
    if (!panel.has_icu())
        throw ValidationError("icu panel required");
    if (smoothing_km <= 0.0)
        throw ValidationError("distance smoothing constant must be positive");
    require_week(panel, week);

    const Eigen::VectorXd total = panel.icu_total->col(week);
    const Eigen::VectorXd avail = panel.icu_available->col(week);
    const int n = static_cast<int>(total.size());

    // Urgency: 1 with no beds or none free, decreasing as spare capacity grows.
    Eigen::VectorXd urgency(n);
    for (int i = 0; i < n; ++i) urgency(i) = (total(i) - avail(i) + 1.0) / (total(i) + 1.0);

    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double inv_d = 1.0 / (mobility.distance(i, j) + smoothing_km);
            const double need_ij = urgency(i) * (avail(j) - avail(i)) * inv_d;
            const double need_ji = urgency(j) * (avail(i) - avail(j)) * inv_d;
            const double c = std::max(need_ij, need_ji);
            w(i, j) = c;
            w(j, i) = c;
        }
    truncate_floor(w);
    return {std::move(w), "C(t)"};
}

void write_affinity_csv(const AffinityMatrix& matrix, const std::filesystem::path& path) {
    csv::write_matrix(path, matrix.weights, {" label=" + matrix.label});
}

AffinityMatrix read_affinity_csv(const std::filesystem::path& path) {
    csv::Table table = csv::read_table(path);
    std::string label;
    for (const auto& c : table.comments) {
        const auto pos = c.find("label=");
        if (pos != std::string::npos) label = c.substr(pos + 6);
    }
    Eigen::MatrixXd w = csv::read_matrix(path);
    if (w.rows() != w.cols())
        throw ValidationError(path.filename().string() + ": affinity matrix must be square");
    return {std::move(w), std::move(label)};
}

} // namespace epigraph
