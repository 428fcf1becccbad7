#include "epigraph/spectral.hpp"

#include "epigraph/csv.hpp"
#include "epigraph/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

namespace epigraph {

DegreeProfile degree_profile(const AffinityMatrix& w) {
    DegreeProfile profile;
    profile.degrees = w.weights.rowwise().sum();
    for (int i = 0; i < w.n(); ++i)
        if (profile.degrees(i) == 0.0) profile.isolated.push_back(i);
    return profile;
}

Eigen::MatrixXd normalized_laplacian(const AffinityMatrix& w) {
    const DegreeProfile profile = degree_profile(w);
    if (!profile.isolated.empty()) {
        std::string ids;
        for (int i : profile.isolated) {
            if (!ids.empty()) ids += ", ";
            ids += std::to_string(i);
        }
        throw ValidationError("graph has isolated cities (zero degree): " + ids);
    }
    const int n = w.n();
    const Eigen::VectorXd inv_sqrt_d = profile.degrees.cwiseSqrt().cwiseInverse();
    Eigen::MatrixXd lap(n, n);
    for (int i = 0; i < n; ++i) {
        lap(i, i) = 1.0;
        for (int j = i + 1; j < n; ++j) {
            const double v = -w.weights(i, j) * inv_sqrt_d(i) * inv_sqrt_d(j);
            lap(i, j) = v;
            lap(j, i) = v;
        }
    }
    return lap;
}

SpectralEmbedding smallest_eigenpairs(const Eigen::MatrixXd& symmetric, int k) {
    const int n = static_cast<int>(symmetric.rows());
    if (symmetric.cols() != n) throw ValidationError("eigendecomposition input must be square");
    if (k < 1 || k > n)
        throw ValidationError("k must lie in 1.." + std::to_string(n) + ", got " + std::to_string(k));
    const double asym = (symmetric - symmetric.transpose()).cwiseAbs().maxCoeff();
    if (asym > kSymmetryTol)
        throw ValidationError("matrix is not symmetric (max |A_ij - A_ji| = " +
                              csv::format_double(asym) + ")");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric);
    if (solver.info() != Eigen::Success)
        throw NumericalError("symmetric eigendecomposition failed to converge");

    SpectralEmbedding emb;
    emb.k = k;
    emb.eigenvalues = solver.eigenvalues().head(k);
    emb.vectors = solver.eigenvectors().leftCols(k);

    // Fixed sign: first coordinate of meaningful magnitude made positive.
    for (int j = 0; j < k; ++j) {
        for (int i = 0; i < n; ++i) {
            const double v = emb.vectors(i, j);
            if (std::abs(v) > kZeroEigenvalueTol) {
                if (v < 0.0) emb.vectors.col(j) = -emb.vectors.col(j);
                break;
            }
        }
    }
    return emb;
}

double max_eigen_residual(const Eigen::MatrixXd& m, const SpectralEmbedding& embedding) {
    double worst = 0.0;
    for (int j = 0; j < embedding.k; ++j) {
        const double r =
            (m * embedding.vectors.col(j) - embedding.eigenvalues(j) * embedding.vectors.col(j))
                .norm();
        worst = std::max(worst, r);
    }
    return worst;
}

double relaxed_ncut_bound(const SpectralEmbedding& embedding) {
    return embedding.eigenvalues.sum();
}

std::vector<KSuggestion> suggest_k(const Eigen::VectorXd& ascending_eigenvalues, int max_k) {
    const int m = static_cast<int>(ascending_eigenvalues.size());
    if (m < 2) throw ValidationError("suggest_k needs at least 2 eigenvalues");
    if (max_k < 2) throw ValidationError("suggest_k: max_k must be >= 2");
    if (m < max_k + 1)
        throw ValidationError("suggest_k: need max_k+1 = " + std::to_string(max_k + 1) +
                              " eigenvalues, got " + std::to_string(m));
    for (int i = 1; i < m; ++i)
        if (ascending_eigenvalues(i) + kZeroEigenvalueTol < ascending_eigenvalues(i - 1))
            throw ValidationError("suggest_k: eigenvalues must be ascending");

    std::vector<KSuggestion> out;
    for (int k = 2; k <= max_k; ++k) {
        const double lam_k = ascending_eigenvalues(k - 1);
        const double lam_next = ascending_eigenvalues(k);
        KSuggestion s;
        s.k = k;
        s.gap_ratio = (lam_k < kZeroEigenvalueTol) ? std::numeric_limits<double>::infinity()
                                                   : lam_next / lam_k;
        out.push_back(s);
    }
    std::stable_sort(out.begin(), out.end(), [](const KSuggestion& a, const KSuggestion& b) {
        const bool ia = std::isinf(a.gap_ratio);
        const bool ib = std::isinf(b.gap_ratio);
        if (ia != ib) return ia;
        if (ia && ib) return a.k > b.k;  // component count first
        if (a.gap_ratio != b.gap_ratio) return a.gap_ratio > b.gap_ratio;
        return a.k < b.k;
    });
    return out;
}

void write_embedding_csv(const SpectralEmbedding& embedding, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write file: " + path.string());
    out << "eigenvalue_rank,lambda\n";
    for (int j = 0; j < embedding.k; ++j)
        out << (j + 1) << ',' << csv::format_double(embedding.eigenvalues(j)) << '\n';
    out << "# eigenvectors: row i = city i, column j = eigenvector j\n";
    for (Eigen::Index i = 0; i < embedding.vectors.rows(); ++i) {
        for (int j = 0; j < embedding.k; ++j) {
            if (j > 0) out << ',';
            out << csv::format_double(embedding.vectors(i, j));
        }
        out << '\n';
    }
}

} // namespace epigraph
