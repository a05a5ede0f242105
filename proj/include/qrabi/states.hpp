#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "qrabi/operators.hpp"

namespace qrabi {

// Truncation needed to hold amplitudes of magnitude `absz` with the Fock tail
// below ~1e-11 (used both for states and for phase-space evaluation points).
inline int required_truncation(double absz) {
    return static_cast<int>(std::ceil(absz * absz + 8.0 * absz + 10.0));
}

inline void check_amplitude_guard(int nmax, double absz, const std::string& what) {
    require_valid(std::isfinite(absz), what + " must be finite");
    if (nmax < required_truncation(absz))
        fail_valid(what + " of magnitude " + format_g12(absz) + " needs truncation >= " +
                   std::to_string(required_truncation(absz)) + ", got " + std::to_string(nmax));
}

// |alpha> on a single truncated mode, renormalized after truncation (the
// guard keeps the discarded tail below ~1e-11 in norm).
inline StateVector coherent_state(int nmax, cplx alpha) {
    check_amplitude_guard(nmax, std::abs(alpha), "coherent amplitude");
    Eigen::VectorXcd v(nmax + 1);
    v[0] = 1.0;
    for (int n = 0; n < nmax; ++n) v[n + 1] = v[n] * alpha / std::sqrt(double(n + 1));
    v.normalize();
    return StateVector{HilbertSpace{fock(nmax)}, std::move(v)};
}

namespace detail {

inline Eigen::VectorXcd kron_vec(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    Eigen::VectorXcd out(a.size() * b.size());
    for (long i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a[i] * b;
    return out;
}

inline Eigen::VectorXcd qutrit_fourier(int l) {
    return fourier_state(3, ((l % 3) + 3) % 3).amplitudes;
}

}  // namespace detail

// Superpositions of rotated coherent states that diagonalize the relevant
// parity:
//   Z2 : |alpha> + (-1)^k |-alpha> on one mode (k = 0 even, 1 odd)
//   QB1: sum_l omega^(-l k) |omega^l alpha> (x) |omega_l>_Q on qutrit + mode,
//        a parity-omega^k eigenstate of the one-mode model
//   Q2B: sum_l omega^(l k) |omega^-l alpha>_1 |omega^l alpha>_2 (x)
//        |omega_-l>_Q, a parity-omega^k eigenstate of the two-mode model
//   B2 : sum_l omega^(l k) |omega^-l alpha>_1 |omega^l alpha>_2, boson only
// All are Gram-normalized exactly (components are not orthogonal at small
// alpha). Layout is qutrit first, then mode 1, then mode 2.
enum class CatKind { Z2, QB1, Q2B, B2 };

inline StateVector cat_state(CatKind kind, int nmax, cplx alpha, int k) {
    check_amplitude_guard(nmax, std::abs(alpha), "cat amplitude");
    const int kmax = kind == CatKind::Z2 ? 1 : 2;
    require_valid(k >= 0 && k <= kmax, "cat index k out of range");

    HilbertSpace space{fock(nmax)};
    Eigen::VectorXcd v;
    switch (kind) {
        case CatKind::Z2: {
            v = coherent_state(nmax, alpha).amplitudes +
                (k == 0 ? 1.0 : -1.0) * coherent_state(nmax, -alpha).amplitudes;
            break;
        }
        case CatKind::QB1: {
            space = HilbertSpace{qutrit(), fock(nmax)};
            v = Eigen::VectorXcd::Zero(space.dim());
            for (int l = 0; l < 3; ++l)
                v += omega_pow(-static_cast<long long>(l) * k) *
                     detail::kron_vec(detail::qutrit_fourier(l),
                                      coherent_state(nmax, omega_pow(l) * alpha).amplitudes);
            break;
        }
        case CatKind::Q2B: {
            space = HilbertSpace{qutrit(), fock(nmax), fock(nmax)};
            v = Eigen::VectorXcd::Zero(space.dim());
            for (int l = 0; l < 3; ++l)
                v += omega_pow(static_cast<long long>(l) * k) *
                     detail::kron_vec(
                         detail::qutrit_fourier(-l),
                         detail::kron_vec(coherent_state(nmax, omega_pow(-l) * alpha).amplitudes,
                                          coherent_state(nmax, omega_pow(l) * alpha).amplitudes));
            break;
        }
        case CatKind::B2: {
            space = HilbertSpace{fock(nmax), fock(nmax)};
            v = Eigen::VectorXcd::Zero(space.dim());
            for (int l = 0; l < 3; ++l)
                v += omega_pow(static_cast<long long>(l) * k) *
                     detail::kron_vec(coherent_state(nmax, omega_pow(-l) * alpha).amplitudes,
                                      coherent_state(nmax, omega_pow(l) * alpha).amplitudes);
            break;
        }
    }
    const double norm = v.norm();
    require(norm > 1e-12, "cat state has vanishing norm");
    v /= norm;
    return StateVector{std::move(space), std::move(v)};
}

// rho = sum_r w_r |f_r><f_r| with unit factors and nonnegative weights; kept
// factored so phase-space evaluation never materializes a dim^2 matrix.
struct DensityMatrix {
    HilbertSpace space;
    std::vector<double> weights;
    std::vector<Eigen::VectorXcd> factors;

    long dim() const { return space.dim(); }
    int rank() const { return static_cast<int>(factors.size()); }
    double trace() const {
        double t = 0.0;
        for (double w : weights) t += w;
        return t;
    }
    double purity() const {  // Tr rho^2, exact in the factored form
        double s = 0.0;
        for (size_t r = 0; r < factors.size(); ++r)
            for (size_t t = 0; t < factors.size(); ++t) {
                const double ov = std::norm(factors[r].dot(factors[t]));
                s += weights[r] * weights[t] * ov;
            }
        return s;
    }
    Eigen::MatrixXcd dense(long max_dim = 4096) const {
        require(dim() <= max_dim, "density matrix too large to materialize");
        Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim(), dim());
        for (size_t r = 0; r < factors.size(); ++r)
            rho.noalias() += weights[r] * factors[r] * factors[r].adjoint();
        return rho;
    }
};

inline DensityMatrix pure_density(const StateVector& s) {
    Eigen::VectorXcd v = s.amplitudes;
    const double n = v.norm();
    require(n > 1e-12, "cannot form a density from the zero vector");
    v /= n;
    return DensityMatrix{s.space, {1.0}, {std::move(v)}};
}

// Reference two-mode + qutrit densities at equal footing with the Q2B cat:
//   Cat    : the pure Q2B cat itself
//   Mix    : equal-weight classical mixture of the three rotated components
//            with the qutrit wave mirrored, (1/3) sum_i |omega^-i a>_1
//            |omega^i a>_2 |omega_+i>_Q <...| - no coherences
//   Product: 2B boson cat tensor the qutrit wave |omega_0>, fully separable
//            between qutrit and bosons
enum class ReferenceKind { Cat, Mix, Product };

inline DensityMatrix reference_density(ReferenceKind kind, int nmax, cplx alpha, int k) {
    switch (kind) {
        case ReferenceKind::Cat: return pure_density(cat_state(CatKind::Q2B, nmax, alpha, k));
        case ReferenceKind::Mix: {
            check_amplitude_guard(nmax, std::abs(alpha), "cat amplitude");
            const HilbertSpace space{qutrit(), fock(nmax), fock(nmax)};
            DensityMatrix rho{space, {}, {}};
            for (int i = 0; i < 3; ++i) {
                Eigen::VectorXcd f = detail::kron_vec(
                    detail::qutrit_fourier(i),
                    detail::kron_vec(coherent_state(nmax, omega_pow(-i) * alpha).amplitudes,
                                     coherent_state(nmax, omega_pow(i) * alpha).amplitudes));
                rho.weights.push_back(1.0 / 3.0);
                rho.factors.push_back(std::move(f));
            }
            return rho;
        }
        case ReferenceKind::Product: {
            const StateVector cat = cat_state(CatKind::B2, nmax, alpha, k);
            const HilbertSpace space{qutrit(), fock(nmax), fock(nmax)};
            Eigen::VectorXcd f = detail::kron_vec(detail::qutrit_fourier(0), cat.amplitudes);
            return DensityMatrix{space, {1.0}, {std::move(f)}};
        }
    }
    fail("bad reference kind");
}

// Partial trace over all boson modes; factor 0 must be the qutrit.
inline Eigen::Matrix3cd qutrit_reduced(const DensityMatrix& rho) {
    require(rho.space.nfactors() >= 2 && rho.space.factors[0].kind == Factor::Qutrit,
            "expected a qutrit-first composite space");
    const long D = rho.dim() / 3;
    Eigen::Matrix3cd out = Eigen::Matrix3cd::Zero();
    for (size_t r = 0; r < rho.factors.size(); ++r) {
        Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> F(
            rho.factors[r].data(), 3, D);
        out.noalias() += rho.weights[r] * (F * F.adjoint());
    }
    return out;
}

// Partial trace over the qutrit: each factor splits into its three qutrit
// slabs, which enter as independent weighted pure factors on the boson space.
inline DensityMatrix boson_reduced(const DensityMatrix& rho) {
    require(rho.space.nfactors() >= 2 && rho.space.factors[0].kind == Factor::Qutrit,
            "expected a qutrit-first composite space");
    const long D = rho.dim() / 3;
    HilbertSpace bspace{std::vector<Factor>(rho.space.factors.begin() + 1,
                                            rho.space.factors.end())};
    DensityMatrix out{std::move(bspace), {}, {}};
    for (size_t r = 0; r < rho.factors.size(); ++r)
        for (int j = 0; j < 3; ++j) {
            Eigen::VectorXcd slab = rho.factors[r].segment(j * D, D);
            const double p = slab.squaredNorm();
            if (p < 1e-300) continue;
            out.weights.push_back(rho.weights[r] * p);
            out.factors.push_back(slab / std::sqrt(p));
        }
    return out;
}

}  // namespace qrabi
