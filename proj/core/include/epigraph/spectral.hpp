#pragma once

#include "epigraph/affinity.hpp"

#include <Eigen/Core>

#include <filesystem>
#include <vector>

namespace epigraph {

/// Tolerances used throughout the spectral pipeline (double precision,
/// n up to a few thousand).
inline constexpr double kSymmetryTol = 1e-10;
inline constexpr double kResidualTol = 1e-8;
inline constexpr double kZeroEigenvalueTol = 1e-12;

struct DegreeProfile {
    Eigen::VectorXd degrees;     // d_i = sum_j w_ij
    std::vector<int> isolated;   // indices with d_i = 0
};

DegreeProfile degree_profile(const AffinityMatrix& w);

/// D^(-1/2) (D - W) D^(-1/2). Unit diagonal, -w_ij/sqrt(d_i d_j) off it.
/// Isolated vertices make the cut volumes ill-defined, so they are a hard
/// error listing the offending city ids; callers must prune first.
Eigen::MatrixXd normalized_laplacian(const AffinityMatrix& w);

/// The k smallest eigenpairs of a symmetric matrix, ascending, with unit,
/// mutually orthogonal vectors. Sign convention: the first coordinate with
/// magnitude above kZeroEigenvalueTol is positive, so output is reproducible.
struct SpectralEmbedding {
    Eigen::VectorXd eigenvalues;  // ascending, size k
    Eigen::MatrixXd vectors;      // n x k, column j pairs with eigenvalues(j)
    int k = 0;
};

SpectralEmbedding smallest_eigenpairs(const Eigen::MatrixXd& symmetric, int k);

/// max_j ||M v_j - lambda_j v_j||_2 for an embedding of M.
double max_eigen_residual(const Eigen::MatrixXd& m, const SpectralEmbedding& embedding);

/// Sum of the k smallest eigenvalues: lower bound on the normalized cut of
/// any k-partition of the same graph.
double relaxed_ncut_bound(const SpectralEmbedding& embedding);

struct KSuggestion {
    int k = 0;
    double gap_ratio = 0.0;  // lambda_{k+1}/lambda_k; +inf when lambda_k ~ 0
};

/// Candidate cluster counts k = 2..max_k ranked by descending eigengap ratio.
/// A ratio with lambda_k below kZeroEigenvalueTol is infinite; among those the
/// largest k (the component count) ranks first. Finite ties rank smaller k first.
std::vector<KSuggestion> suggest_k(const Eigen::VectorXd& ascending_eigenvalues, int max_k);

/// CSV export: `eigenvalue_rank,lambda` rows followed by the n x k vector block.
void write_embedding_csv(const SpectralEmbedding& embedding, const std::filesystem::path& path);

} // namespace epigraph
