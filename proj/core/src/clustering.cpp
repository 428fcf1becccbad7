#include "epigraph/clustering.hpp"

#include "epigraph/errors.hpp"
#include "epigraph/rng.hpp"
#include "epigraph/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace epigraph {

Partition Partition::from_labels(std::vector<int> labels) {
    if (labels.empty()) throw ValidationError("partition must cover at least one vertex");
    std::vector<int> remap;  // old label -> canonical label, by first appearance
    for (int& l : labels) {
        if (l < 0) throw ValidationError("negative cluster label");
        auto it = std::find(remap.begin(), remap.end(), l);
        if (it == remap.end()) {
            remap.push_back(l);
            l = static_cast<int>(remap.size()) - 1;
        } else {
            l = static_cast<int>(it - remap.begin());
        }
    }
    Partition p;
    p.labels = std::move(labels);
    p.k = static_cast<int>(remap.size());
    return p;
}

double ncut(const AffinityMatrix& w, const Partition& p) {
    const int n = w.n();
    if (p.n() != n) throw ValidationError("partition size does not match affinity matrix");

    std::vector<double> volume(static_cast<std::size_t>(p.k), 0.0);
    std::vector<double> internal(static_cast<std::size_t>(p.k), 0.0);
    const Eigen::VectorXd degrees = w.weights.rowwise().sum();
    for (int i = 0; i < n; ++i) {
        volume[static_cast<std::size_t>(p.labels[static_cast<std::size_t>(i)])] += degrees(i);
        for (int j = 0; j < n; ++j)
            if (p.labels[static_cast<std::size_t>(i)] == p.labels[static_cast<std::size_t>(j)])
                internal[static_cast<std::size_t>(p.labels[static_cast<std::size_t>(i)])] +=
                    w.weights(i, j);
    }

    double total = 0.0;
    for (int c = 0; c < p.k; ++c) {
        const double vol = volume[static_cast<std::size_t>(c)];
        if (vol <= 0.0)
            throw NumericalError("cluster " + std::to_string(c) + " has zero volume");
        total += (vol - internal[static_cast<std::size_t>(c)]) / vol;
    }
    return total;
}

namespace {

double squared_distance(const Eigen::MatrixXd& points, int row, const Eigen::VectorXd& center) {
    return (points.row(row).transpose() - center).squaredNorm();
}

Eigen::MatrixXd careful_seed_centers(const Eigen::MatrixXd& points, int k, std::mt19937_64& rng) {
    const int n = static_cast<int>(points.rows());
    Eigen::MatrixXd centers(k, points.cols());
    centers.row(0) = points.row(static_cast<Eigen::Index>(uniform_index(rng, n)));

    Eigen::VectorXd min_sq(n);
    for (int i = 0; i < n; ++i) min_sq(i) = squared_distance(points, i, centers.row(0).transpose());

    for (int c = 1; c < k; ++c) {
        const double total = min_sq.sum();
        int chosen = 0;
        if (total > 0.0) {
            const double target = uniform01(rng) * total;
            double acc = 0.0;
            chosen = n - 1;
            for (int i = 0; i < n; ++i) {
                acc += min_sq(i);
                if (acc >= target) {
                    chosen = i;
                    break;
                }
            }
        } else {
            chosen = static_cast<int>(uniform_index(rng, n));
        }
        centers.row(c) = points.row(chosen);
        for (int i = 0; i < n; ++i)
            min_sq(i) = std::min(min_sq(i), squared_distance(points, i, centers.row(c).transpose()));
    }
    return centers;
}

} // namespace

Partition kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed) {
    const int n = static_cast<int>(points.rows());
    if (k < 1) throw ValidationError("kmeans: k must be >= 1");
    if (n < k)
        throw ValidationError("kmeans: " + std::to_string(n) + " points cannot form " +
                              std::to_string(k) + " clusters");

    std::mt19937_64 rng(splitmix64(seed));
    Eigen::MatrixXd centers = careful_seed_centers(points, k, rng);
    std::vector<int> assign(static_cast<std::size_t>(n), 0);

    constexpr int kMaxIterations = 300;
    for (int iter = 0; iter < kMaxIterations; ++iter) {
        bool changed = false;
        for (int i = 0; i < n; ++i) {
            int best = 0;
            double best_d = squared_distance(points, i, centers.row(0).transpose());
            for (int c = 1; c < k; ++c) {
                const double d = squared_distance(points, i, centers.row(c).transpose());
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (assign[static_cast<std::size_t>(i)] != best) {
                assign[static_cast<std::size_t>(i)] = best;
                changed = true;
            }
        }

        std::vector<int> count(static_cast<std::size_t>(k), 0);
        centers.setZero();
        for (int i = 0; i < n; ++i) {
            centers.row(assign[static_cast<std::size_t>(i)]) += points.row(i);
            ++count[static_cast<std::size_t>(assign[static_cast<std::size_t>(i)])];
        }

        // Repair empty clusters: move the farthest point out of the
        // largest-inertia cluster.
        for (int c = 0; c < k; ++c) {
            if (count[static_cast<std::size_t>(c)] > 0) continue;
            std::vector<double> inertia(static_cast<std::size_t>(k), 0.0);
            for (int i = 0; i < n; ++i) {
                const int a = assign[static_cast<std::size_t>(i)];
                if (count[static_cast<std::size_t>(a)] == 0) continue;
                const Eigen::VectorXd mean =
                    centers.row(a).transpose() / count[static_cast<std::size_t>(a)];
                inertia[static_cast<std::size_t>(a)] += squared_distance(points, i, mean);
            }
            int donor = -1;
            for (int a = 0; a < k; ++a) {
                if (count[static_cast<std::size_t>(a)] < 2) continue;
                if (donor < 0 || inertia[static_cast<std::size_t>(a)] > inertia[static_cast<std::size_t>(donor)] ||
                    (inertia[static_cast<std::size_t>(a)] == inertia[static_cast<std::size_t>(donor)] &&
                     count[static_cast<std::size_t>(a)] > count[static_cast<std::size_t>(donor)]))
                    donor = a;
            }
            int moved = -1;
            double far_d = -1.0;
            const Eigen::VectorXd donor_mean =
                centers.row(donor).transpose() / count[static_cast<std::size_t>(donor)];
            for (int i = 0; i < n; ++i) {
                if (assign[static_cast<std::size_t>(i)] != donor) continue;
                const double d = squared_distance(points, i, donor_mean);
                if (d > far_d) {
                    far_d = d;
                    moved = i;
                }
            }
            centers.row(donor) -= points.row(moved);
            --count[static_cast<std::size_t>(donor)];
            centers.row(c) = points.row(moved);
            count[static_cast<std::size_t>(c)] = 1;
            assign[static_cast<std::size_t>(moved)] = c;
            changed = true;
        }

        for (int c = 0; c < k; ++c) centers.row(c) /= count[static_cast<std::size_t>(c)];
        if (!changed && iter > 0) break;
    }
    return Partition::from_labels(assign);
}

ClusteringReport shi_malik(const AffinityMatrix& w, int k, int restarts, std::uint64_t seed,
                           RowNormalization row_norm) {
    const int n = w.n();
    if (k < 2) throw ValidationError("shi_malik: k must be >= 2");
    if (n < k) throw ValidationError("shi_malik: need at least k vertices");
    if (restarts < 1) throw ValidationError("shi_malik: restarts must be >= 1");

    const Eigen::MatrixXd lap = normalized_laplacian(w);
    const SpectralEmbedding emb = smallest_eigenpairs(lap, k);

    Eigen::MatrixXd rows = emb.vectors;
    for (int i = 0; i < n; ++i) {
        const double norm = (row_norm == RowNormalization::euclidean)
                                ? rows.row(i).norm()
                                : rows.row(i).sum();
        if (std::abs(norm) > kZeroEigenvalueTol) rows.row(i) /= norm;
    }

    ClusteringReport report;
    report.restarts = restarts;
    report.relaxed_bound = relaxed_ncut_bound(emb);

    std::vector<Partition> produced;
    produced.reserve(static_cast<std::size_t>(restarts));
    double best_value = std::numeric_limits<double>::infinity();
    int best_index = -1;
    for (int s = 0; s < restarts; ++s) {
        Partition p = kmeans(rows, k, derive_stream(seed, static_cast<std::uint64_t>(s)));
        const double value = ncut(w, p);
        produced.push_back(std::move(p));
        if (value < best_value) {
            best_value = value;
            best_index = s;
        }
    }

    report.best = produced[static_cast<std::size_t>(best_index)];
    report.ncut_value = best_value;
    report.stability_count = static_cast<int>(
        std::count(produced.begin(), produced.end(), report.best));
    if (report.relaxed_bound < kZeroEigenvalueTol) {
        report.quality_ratio = (report.ncut_value < kZeroEigenvalueTol)
                                   ? 1.0
                                   : std::numeric_limits<double>::infinity();
    } else {
        report.quality_ratio = report.ncut_value / report.relaxed_bound;
    }
    return report;
}

namespace {

/// O(m^3) Hungarian algorithm, minimizing total cost over a square matrix.
/// Row/column potentials with the shortest augmenting path formulation.
double hungarian_min_cost(const Eigen::MatrixXd& cost) {
    const int m = static_cast<int>(cost.rows());
    std::vector<double> u(static_cast<std::size_t>(m + 1), 0.0);
    std::vector<double> v(static_cast<std::size_t>(m + 1), 0.0);
    std::vector<int> match(static_cast<std::size_t>(m + 1), 0);  // column -> row (1-based)
    std::vector<int> way(static_cast<std::size_t>(m + 1), 0);

    for (int i = 1; i <= m; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<double> min_v(static_cast<std::size_t>(m + 1),
                                  std::numeric_limits<double>::infinity());
        std::vector<bool> used(static_cast<std::size_t>(m + 1), false);
        do {
            used[static_cast<std::size_t>(j0)] = true;
            const int i0 = match[static_cast<std::size_t>(j0)];
            double delta = std::numeric_limits<double>::infinity();
            int j1 = 0;
            for (int j = 1; j <= m; ++j) {
                if (used[static_cast<std::size_t>(j)]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] -
                                   v[static_cast<std::size_t>(j)];
                if (cur < min_v[static_cast<std::size_t>(j)]) {
                    min_v[static_cast<std::size_t>(j)] = cur;
                    way[static_cast<std::size_t>(j)] = j0;
                }
                if (min_v[static_cast<std::size_t>(j)] < delta) {
                    delta = min_v[static_cast<std::size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= m; ++j) {
                if (used[static_cast<std::size_t>(j)]) {
                    u[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])] += delta;
                    v[static_cast<std::size_t>(j)] -= delta;
                } else {
                    min_v[static_cast<std::size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (match[static_cast<std::size_t>(j0)] != 0);
        do {
            const int j1 = way[static_cast<std::size_t>(j0)];
            match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }

    double total = 0.0;
    for (int j = 1; j <= m; ++j)
        total += cost(match[static_cast<std::size_t>(j)] - 1, j - 1);
    return total;
}

} // namespace

int partition_distance(const Partition& p, const Partition& q) {
    const int n = p.n();
    if (q.n() != n) throw ValidationError("partition_distance: partitions cover different sets");

    const int m = std::max(p.k, q.k);
    Eigen::MatrixXd overlap = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < n; ++i)
        overlap(p.labels[static_cast<std::size_t>(i)], q.labels[static_cast<std::size_t>(i)]) += 1.0;

    // Maximize matched vertices = minimize negated overlap.
    const double matched = -hungarian_min_cost(-overlap);
    return n - static_cast<int>(std::llround(matched));
}

AffinityMeasure parse_measure(const std::string& tag) {
    if (tag == "a0") return AffinityMeasure::static_commute;
    if (tag == "at") return AffinityMeasure::isolation_adjusted;
    if (tag == "c0") return AffinityMeasure::icu_static;
    if (tag == "ct") return AffinityMeasure::icu_dynamic;
    throw ValidationError("unknown affinity measure \"" + tag + "\" (expected a0, at, c0 or ct)");
}

std::string measure_label(AffinityMeasure measure) {
    switch (measure) {
        case AffinityMeasure::static_commute: return "a0";
        case AffinityMeasure::isolation_adjusted: return "at";
        case AffinityMeasure::icu_static: return "c0";
        case AffinityMeasure::icu_dynamic: return "ct";
    }
    return "?";
}

AffinityMatrix build_affinity(AffinityMeasure measure, const Dataset& data, int week,
                              IsolationAttribution attribution, double smoothing_km) {
    switch (measure) {
        case AffinityMeasure::static_commute:
            return build_static_commute(data.mobility);
        case AffinityMeasure::isolation_adjusted:
            return build_isolation_adjusted(data.mobility, data.panel, week, attribution);
        case AffinityMeasure::icu_static:
            return build_icu_static(data.mobility, data.panel, smoothing_km);
        case AffinityMeasure::icu_dynamic:
            return build_icu_dynamic(data.mobility, data.panel, week, smoothing_km);
    }
    throw ValidationError("unknown affinity measure");
}

WeeklyClustering weekly_partitions(AffinityMeasure measure, const Dataset& data, int k,
                                   int restarts, std::uint64_t seed, RowNormalization row_norm,
                                   IsolationAttribution attribution) {
    WeeklyClustering out;
    const bool dynamic = measure == AffinityMeasure::isolation_adjusted ||
                         measure == AffinityMeasure::icu_dynamic;
    if (!dynamic) {
        const AffinityMatrix w = build_affinity(measure, data, 0, attribution);
        out.reports.emplace_back(0, shi_malik(w, k, restarts, seed, row_norm));
        return out;
    }
    for (int week = 0; week < data.panel.weeks; ++week) {
        const AffinityMatrix w = build_affinity(measure, data, week, attribution);
        out.reports.emplace_back(week, shi_malik(w, k, restarts, seed, row_norm));
        if (week > 0)
            out.week_over_week_distance.push_back(
                partition_distance(out.reports[static_cast<std::size_t>(week) - 1].second.best,
                                   out.reports[static_cast<std::size_t>(week)].second.best));
    }
    return out;
}

} // namespace epigraph
