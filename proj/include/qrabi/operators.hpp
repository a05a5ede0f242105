#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <cmath>
#include <utility>
#include <vector>

#include "qrabi/common.hpp"
#include "qrabi/space.hpp"

namespace qrabi {

using SparseC = Eigen::SparseMatrix<cplx>;
using Triplet = Eigen::Triplet<cplx>;

// Model parameters: boson frequency Omega, magnetic amplitude B, magnetic
// phase phi (radians), qutrit-boson coupling lambda. The magnetic term is
// always B(e^{i phi} Z + e^{-i phi} Z^dag).
struct ModelParams {
    double omega = 1.0;
    double b_field = 0.1;
    double phi = 7.0 * pi / 6.0;
    double lambda = 0.5;
};

inline void validate(const ModelParams& p) {
    require_valid(std::isfinite(p.omega) && std::isfinite(p.b_field) && std::isfinite(p.phi) &&
                      std::isfinite(p.lambda),
                  "model parameters must be finite");
    require_valid(p.omega > 0.0, "omega must be positive");
    require_valid(p.b_field >= 0.0, "b_field must be nonnegative");
    require_valid(p.lambda >= 0.0, "lambda must be nonnegative");
}

inline double max_abs(const SparseC& m) {
    double mx = 0.0;
    for (int k = 0; k < m.outerSize(); ++k)
        for (SparseC::InnerIterator it(m, k); it; ++it) mx = std::max(mx, std::abs(it.value()));
    return mx;
}

// Sparse complex square matrix bound to its Hilbert space. The hermitian flag
// is metadata verified at construction: max|M - M^dag| <= 1e-12 * max|M|.
struct Operator {
    HilbertSpace space;
    SparseC mat;
    bool hermitian = false;

    long dim() const { return mat.rows(); }
};

inline Operator make_operator(HilbertSpace space, SparseC mat, bool hermitian = false) {
    require(mat.rows() == mat.cols(), "operator matrix must be square");
    require(mat.rows() == space.dim(), "operator dimension does not match space");
    mat.makeCompressed();
    if (hermitian) {
        SparseC diff = SparseC(mat.adjoint()) - mat;
        const double dev = max_abs(diff);
        require(dev <= 1e-12 * std::max(1e-300, max_abs(mat)),
                "hermitian flag set but max|M - M^dag| = " + format_g12(dev));
    }
    return Operator{std::move(space), std::move(mat), hermitian};
}

inline Operator identity_op(const HilbertSpace& space) {
    SparseC id(space.dim(), space.dim());
    id.setIdentity();
    return Operator{space, std::move(id), true};
}

// Adjoint; exact on the stored sparsity pattern, so (M^dag)^dag == M.
inline Operator adjoint_op(const Operator& op) {
    return Operator{op.space, SparseC(op.mat.adjoint()), op.hermitian};
}

// --- algebra on matching spaces (hermitian flag recomputed by make_operator
//     only where a builder asks for it; raw results carry flag = false) ---

inline Operator operator+(const Operator& x, const Operator& y) {
    require(x.space == y.space, "operator space mismatch in +");
    return Operator{x.space, SparseC(x.mat + y.mat), false};
}

inline Operator operator-(const Operator& x, const Operator& y) {
    require(x.space == y.space, "operator space mismatch in -");
    return Operator{x.space, SparseC(x.mat - y.mat), false};
}

inline Operator operator*(const cplx& c, const Operator& x) {
    return Operator{x.space, SparseC(c * x.mat), false};
}

inline Operator operator*(double c, const Operator& x) { return cplx(c, 0.0) * x; }

inline Operator operator*(const Operator& x, const Operator& y) {
    require(x.space == y.space, "operator space mismatch in *");
    return Operator{x.space, SparseC(x.mat * y.mat), false};
}

inline Operator commutator(const Operator& x, const Operator& y) {
    return x * y - y * x;
}

inline Eigen::MatrixXcd dense_matrix(const Operator& op) { return Eigen::MatrixXcd(op.mat); }

// Dense state vector on a HilbertSpace.
struct StateVector {
    HilbertSpace space;
    Eigen::VectorXcd amplitudes;

    double norm() const { return amplitudes.norm(); }
};

// --- single-factor building blocks -------------------------------------

// <n-1| a |n> = sqrt(n) on one truncated mode, embedded on the full space.
inline Operator fock_annihilation(const HilbertSpace& space, int mode_index) {
    require(mode_index >= 0 && mode_index < space.nfactors(), "mode index out of range");
    require(space.factors[mode_index].kind == Factor::Fock, "factor is not a Fock mode");
    const int nmax = space.factors[mode_index].nmax;
    const long before = [&] {
        long b = 1;
        for (int i = 0; i < mode_index; ++i) b *= space.factors[i].dim();
        return b;
    }();
    const long stride = space.stride(mode_index);
    const long dim = space.dim();
    std::vector<Triplet> trips;
    trips.reserve(static_cast<size_t>(before * nmax * stride));
    for (long l = 0; l < before; ++l)
        for (int n = 1; n <= nmax; ++n)
            for (long r = 0; r < stride; ++r) {
                const long col = (l * (nmax + 1) + n) * stride + r;
                const long row = (l * (nmax + 1) + (n - 1)) * stride + r;
                trips.emplace_back(row, col, cplx(std::sqrt(double(n)), 0.0));
            }
    SparseC a(dim, dim);
    a.setFromTriplets(trips.begin(), trips.end());
    return Operator{space, std::move(a), false};
}

inline Operator fock_number(const HilbertSpace& space, int mode_index) {
    Operator a = fock_annihilation(space, mode_index);
    Operator n = adjoint_op(a) * a;
    n.hermitian = true;
    return n;
}

// Single-factor convention space for n-level clock/shift algebra: the qutrit
// factor for n = 3, an n-dimensional Fock factor otherwise.
inline HilbertSpace qudit_space(int n) {
    require(n >= 2, "qudit dimension must be >= 2");
    return n == 3 ? HilbertSpace{qutrit()} : HilbertSpace{fock(n - 1)};
}

// Clock Z = diag(omega^j) and shift X|j> = |j+1 mod n>, with ZX = omega XZ.
inline std::pair<Operator, Operator> qudit_clock_shift(int n) {
    HilbertSpace sp = qudit_space(n);
    std::vector<Triplet> zt, xt;
    for (int j = 0; j < n; ++j) {
        // exact table roots for n = 3 keep Z^3 = I to the last bit
        const cplx root = (n == 3) ? omega_pow(j) : std::polar(1.0, 2.0 * pi * j / n);
        zt.emplace_back(j, j, root);
        xt.emplace_back((j + 1) % n, j, cplx(1.0, 0.0));
    }
    SparseC z(n, n), x(n, n);
    z.setFromTriplets(zt.begin(), zt.end());
    x.setFromTriplets(xt.begin(), xt.end());
    return {Operator{sp, std::move(z), false}, Operator{sp, std::move(x), false}};
}

// |omega^k> = (1/sqrt(n)) sum_j omega^{kj} |j>, eigenvector X|omega^k> = omega^{-k}|omega^k>.
inline StateVector fourier_state(int n, int k) {
    require(n >= 2, "qudit dimension must be >= 2");
    require(k >= 0 && k < n, "fourier index out of range");
    Eigen::VectorXcd v(n);
    const double s = 1.0 / std::sqrt(double(n));
    for (int j = 0; j < n; ++j)
        v[j] = (n == 3 ? omega_pow(static_cast<long long>(k) * j)
                       : std::polar(1.0, 2.0 * pi * k * j / n)) *
               s;
    return StateVector{qudit_space(n), std::move(v)};
}

// op on `slot`, identity on all other factors, row-major layout respected.
inline Operator embed(const Operator& op, const HilbertSpace& space, int slot) {
    require(slot >= 0 && slot < space.nfactors(), "embed slot out of range");
    const int d = space.factors[slot].dim();
    require(op.dim() == d, "embed: operator dimension does not match factor");
    long before = 1;
    for (int i = 0; i < slot; ++i) before *= space.factors[i].dim();
    const long stride = space.stride(slot);
    std::vector<Triplet> trips;
    trips.reserve(static_cast<size_t>(op.mat.nonZeros()) * before * stride);
    for (int k = 0; k < op.mat.outerSize(); ++k)
        for (SparseC::InnerIterator it(op.mat, k); it; ++it)
            for (long l = 0; l < before; ++l)
                for (long r = 0; r < stride; ++r) {
                    const long row = (l * d + it.row()) * stride + r;
                    const long col = (l * d + it.col()) * stride + r;
                    trips.emplace_back(row, col, it.value());
                }
    SparseC m(space.dim(), space.dim());
    m.setFromTriplets(trips.begin(), trips.end());
    return Operator{space, std::move(m), op.hermitian};
}

}  // namespace qrabi
