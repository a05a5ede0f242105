#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "qrabi/operators.hpp"

namespace qrabi {

struct EigenPair {
    double value;
    Eigen::VectorXcd vector;
};

namespace detail {

// Deterministic xorshift start vectors: identical inputs give identical runs
// (and therefore byte-identical downstream reports).
inline Eigen::VectorXcd seeded_unit_vector(long dim, std::uint64_t seed) {
    Eigen::VectorXcd v(dim);
    std::uint64_t s = seed * 6364136223846793005ULL + 1442695040888963407ULL;
    auto next = [&s]() {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return static_cast<double>(s >> 11) / 9007199254740992.0 - 0.5;
    };
    for (long i = 0; i < dim; ++i) v[i] = cplx(next(), next());
    v.normalize();
    return v;
}

// Krylov + Rayleigh-Ritz with thick restart, targeting the smallest
// eigenvalue orthogonal to `locked`. New directions are orthogonalized
// against the locked vectors and the current basis with drop-triggered
// re-orthogonalization, and once more AFTER normalization: near-breakdown
// steps divide by a tiny norm, which would otherwise amplify the cancelled
// components back to order one and let the iteration tunnel into the locked
// subspace. Restarting keeps the lowest Ritz vectors plus the residual of
// the target pair. Residuals are computed explicitly from H*x, never from
// tridiagonal bounds.
struct KrylovSmallest {
    const SparseC& H;
    const std::vector<Eigen::VectorXcd>& locked;
    double tol;
    double& norm_est;

    bool run(std::uint64_t seed, int step_budget, EigenPair& out, double& achieved) const {
        const long dim = H.rows();
        const int mcap = static_cast<int>(std::min<long>(dim - static_cast<long>(locked.size()), 80));
        if (mcap < 4) return false;  // complement too thin for restarted iteration
        Eigen::MatrixXcd Q(dim, mcap), W(dim, mcap);
        int j = 0;

        auto clean = [&](Eigen::VectorXcd& v) {
            for (const auto& q : locked) v -= q.dot(v) * q;
            if (j > 0) {
                Eigen::VectorXcd c = Q.leftCols(j).adjoint() * v;
                v.noalias() -= Q.leftCols(j) * c;
            }
        };
        // Column j <- v orthonormalized against locked + basis; false when v
        // carries no numerically trustworthy new direction.
        auto insert_direction = [&](Eigen::VectorXcd v) {
            const double before = v.norm();
            if (!(before > 0.0)) return false;
            clean(v);
            if (v.norm() < 0.5 * before) clean(v);
            if (v.norm() <= 1e-8 * before) return false;
            v /= v.norm();
            clean(v);  // residue is now O(eps) absolute, not O(eps/b)
            const double b = v.norm();
            if (b < 0.99) return false;
            Q.col(j) = v / b;
            W.col(j) = H * Q.col(j);
            return true;
        };

        std::uint64_t reseed = seed;
        if (!insert_direction(seeded_unit_vector(dim, reseed++))) return false;
        j = 1;
        int steps = 0;
        achieved = std::numeric_limits<double>::infinity();

        while (steps < step_budget) {
            // expand the basis with Krylov directions
            while (j < mcap && steps < step_budget) {
                if (!insert_direction(W.col(j - 1)) &&
                    !insert_direction(seeded_unit_vector(dim, reseed++)))
                    break;  // complement numerically exhausted
                ++j;
                ++steps;
            }

            // Rayleigh-Ritz on span(Q[:, :j])
            Eigen::MatrixXcd S = Q.leftCols(j).adjoint() * W.leftCols(j);
            S = 0.5 * (S + S.adjoint()).eval();
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(S);
            norm_est = std::max({norm_est, std::abs(es.eigenvalues()(0)),
                                 std::abs(es.eigenvalues()(j - 1))});

            Eigen::VectorXcd x = Q.leftCols(j) * es.eigenvectors().col(0);
            Eigen::VectorXcd hx = W.leftCols(j) * es.eigenvectors().col(0);  // = H x
            const double mu = es.eigenvalues()(0);
            achieved = std::min(achieved, (hx - mu * x).norm());
            if ((hx - mu * x).norm() <= tol * std::max(norm_est, 1e-300)) {
                for (const auto& q : locked) x -= q.dot(x) * q;
                const double nx = x.norm();
                if (nx < 0.9) return false;  // collapsed onto the locked space
                x /= nx;
                out = EigenPair{x.dot(H * x).real(), std::move(x)};
                return true;
            }
            if (j >= mcap) {
                // thick restart: keep the lowest Ritz vectors (H-images come
                // for free), then append the target pair's residual direction
                // so the continued Krylov chain keeps working on the pair
                // being extracted rather than on the last kept Ritz vector.
                const int l = std::max(1, std::min(10, j - 2));
                Eigen::MatrixXcd Y = es.eigenvectors().leftCols(l);
                Eigen::MatrixXcd Qk = Q.leftCols(j) * Y;
                Eigen::MatrixXcd Wk = W.leftCols(j) * Y;
                Q.leftCols(l) = Qk;
                W.leftCols(l) = Wk;
                j = l;
                if (j < mcap && insert_direction(hx - mu * x)) {
                    ++j;
                    ++steps;
                }
            } else if (j < 2) {
                return false;  // could not expand at all
            }
        }
        return false;
    }
};

}  // namespace detail

// `count` smallest eigenvalues in nondecreasing order with unit eigenvectors,
// each with residual ||Hv - Ev|| <= tol * ||H||. Dense solve below dim 512.
// Above it, one eigenpair is extracted at a time and deflated; every pair
// starts from a fresh deterministic random vector, so degenerate eigenvalues
// are found with their full multiplicity.
inline std::vector<EigenPair> lowest_eigenpairs(const Operator& H, int count, double tol = 1e-10) {
    require(H.hermitian, "lowest_eigenpairs requires a hermitian operator");
    const long dim = H.dim();
    require(count >= 1 && count <= dim, "eigenpair count out of range");

    if (dim < 512) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense_matrix(H));
        require(es.info() == Eigen::Success, "dense eigensolver failed");
        std::vector<EigenPair> out;
        out.reserve(count);
        for (int i = 0; i < count; ++i)
            out.push_back({es.eigenvalues()(i), es.eigenvectors().col(i)});
        return out;
    }

    std::vector<EigenPair> out;
    std::vector<Eigen::VectorXcd> locked;
    double norm_est = 1e-300;
    for (int p = 0; p < count; ++p) {
        detail::KrylovSmallest solver{H.mat, locked, tol, norm_est};
        EigenPair pair;
        double achieved = 0.0, best = std::numeric_limits<double>::infinity();
        bool ok = false;
        for (std::uint64_t attempt = 0; attempt < 3 && !ok; ++attempt) {
            ok = solver.run(0x9e3779b97f4a7c15ULL + 977u * p + attempt, 2500, pair, achieved);
            best = std::min(best, achieved);
        }
        require(ok, "eigensolver failed to converge for eigenpair " + std::to_string(p) +
                        "; achieved residual " + format_g12(best));
        locked.push_back(pair.vector);
        out.push_back(std::move(pair));
    }
    std::sort(out.begin(), out.end(),
              [](const EigenPair& x, const EigenPair& y) { return x.value < y.value; });
    return out;
}

// Indices grouped into clusters of eigenvalues closer than `tol` (input must
// be sorted nondecreasing); used for degeneracy counting and for resolving
// symmetry labels inside degenerate clusters.
inline std::vector<std::vector<int>> cluster_indices(const std::vector<double>& values,
                                                     double tol) {
    std::vector<std::vector<int>> clusters;
    for (int i = 0; i < static_cast<int>(values.size()); ++i) {
        if (clusters.empty() || values[i] - values[clusters.back().back()] > tol)
            clusters.push_back({i});
        else
            clusters.back().push_back(i);
    }
    return clusters;
}

}  // namespace qrabi
