#pragma once

#include "epigraph/affinity.hpp"
#include "epigraph/data_model.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <utility>
#include <vector>

namespace epigraph {

/// Assignment of n vertices to clusters 0..k-1, every cluster non-empty.
/// Canonical labeling: clusters are numbered by first appearance, which is
/// the same as ascending smallest member index.
struct Partition {
    std::vector<int> labels;
    int k = 0;

    static Partition from_labels(std::vector<int> labels);

    int n() const { return static_cast<int>(labels.size()); }
    bool operator==(const Partition& other) const = default;
};

/// Sum over clusters of (weight leaving the cluster) / (cluster volume).
/// Lies in [0, k]; 0 exactly when every cluster is a union of components.
double ncut(const AffinityMatrix& w, const Partition& p);

/// Lloyd iterations with careful seeding (new centers drawn with probability
/// proportional to squared distance from the chosen ones). Deterministic for
/// a fixed seed. Empty clusters are repaired by splitting the cluster with
/// the largest inertia.
Partition kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed);

enum class RowNormalization { euclidean, row_sum };

struct ClusteringReport {
    Partition best;
    double ncut_value = 0.0;
    double relaxed_bound = 0.0;
    double quality_ratio = 1.0;  // ncut_value / relaxed_bound, >= 1 up to rounding
    int stability_count = 0;     // restarts that produced `best`
    int restarts = 0;
};

/// Spectral partitioning: normalized Laplacian, k smallest eigenvectors,
/// row normalization, k-means over the embedded rows, repeated `restarts`
/// times keeping the minimum-NCut partition (ties to the earlier restart).
/// Restart s draws from an RNG stream derived from (seed, s), so the result
/// does not depend on execution order.
ClusteringReport shi_malik(const AffinityMatrix& w, int k, int restarts, std::uint64_t seed,
                           RowNormalization row_norm = RowNormalization::euclidean);

/// Minimum number of vertices to relabel so the partitions coincide
/// (label-permutation invariant; optimal cluster matching on the confusion
/// matrix). A metric on canonical partitions.
int partition_distance(const Partition& p, const Partition& q);

enum class AffinityMeasure { static_commute, isolation_adjusted, icu_static, icu_dynamic };

AffinityMeasure parse_measure(const std::string& tag);  // "a0" | "at" | "c0" | "ct"
std::string measure_label(AffinityMeasure measure);

struct WeeklyClustering {
    // One (week, report) entry per clustered week; a single entry at week 0
    // for the static measures.
    std::vector<std::pair<int, ClusteringReport>> reports;
    // Hamming-style distance between the partitions of consecutive weeks.
    std::vector<int> week_over_week_distance;
};

AffinityMatrix build_affinity(AffinityMeasure measure, const Dataset& data, int week,
                              IsolationAttribution attribution = IsolationAttribution::destination,
                              double smoothing_km = 10.0);

WeeklyClustering weekly_partitions(AffinityMeasure measure, const Dataset& data, int k,
                                   int restarts, std::uint64_t seed,
                                   RowNormalization row_norm = RowNormalization::euclidean,
                                   IsolationAttribution attribution = IsolationAttribution::destination);

} // namespace epigraph
