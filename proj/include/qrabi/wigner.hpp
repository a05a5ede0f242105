#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "qrabi/states.hpp"
#include "qrabi/threads.hpp"

namespace qrabi {

// <m|D(beta)|n> on a truncated mode, built by the exact two-term recurrences
//   f(0,0)     = exp(-|beta|^2/2)
//   f(m+1,0)   = beta f(m,0)/sqrt(m+1)
//   f(m,n+1)   = (sqrt(m) f(m-1,n) - conj(beta) f(m,n))/sqrt(n+1)
// which follow from commuting a and a^dag through D. Entries are elementwise
// exact up to roundoff, so truncation error enters only through the state the
// kernel is traced against.
inline Eigen::MatrixXcd displacement_kernel(int nmax, cplx beta) {
    const int d = nmax + 1;
    Eigen::MatrixXcd f(d, d);
    f(0, 0) = std::exp(-0.5 * std::norm(beta));
    for (int m = 0; m < nmax; ++m) f(m + 1, 0) = beta * f(m, 0) / std::sqrt(double(m + 1));
    for (int n = 0; n < nmax; ++n)
        for (int m = 0; m < d; ++m) {
            const cplx up = m > 0 ? std::sqrt(double(m)) * f(m - 1, n) : cplx(0.0);
            f(m, n + 1) = (up - std::conj(beta) * f(m, n)) / std::sqrt(double(n + 1));
        }
    return f;
}

// Public displacement operator; guards its own amplitude against truncation.
inline Operator displacement(int nmax, cplx z) {
    check_amplitude_guard(nmax, std::abs(z), "displacement amplitude");
    return make_operator(HilbertSpace{fock(nmax)}, displacement_kernel(nmax, z).sparseView(),
                         false);
}

// Qutrit phase-space machinery over the order-3 clock and shift pair.
// D_Q(a, b) = omega^(-ab/2) Z^b X^a with the half interpreted mod 3
// (1/2 = 2), so omega^(-ab/2) = omega^(ab). Pi_Q maps |i> -> |-i mod 3>.
inline Eigen::Matrix3cd qutrit_displacement(int a, int b) {
    Eigen::Matrix3cd m = Eigen::Matrix3cd::Zero();
    for (int j = 0; j < 3; ++j) {
        const int i = ((j + a) % 3 + 3) % 3;
        m(i, j) = omega_pow(static_cast<long long>(a) * b + static_cast<long long>(b) * i);
    }
    return m;
}

inline Eigen::Matrix3cd qutrit_parity_matrix() {
    Eigen::Matrix3cd m = Eigen::Matrix3cd::Zero();
    for (int j = 0; j < 3; ++j) m(((3 - j) % 3), j) = 1.0;
    return m;
}

// The nine displaced-parity point operators A(a, b) = D_Q(2a, 2b) Pi_Q; the
// qutrit quasi-distribution of rho_Q at (a, b) is (1/3) Tr[rho_Q A(a, b)].
inline const std::array<Eigen::Matrix3cd, 9>& qutrit_point_ops() {
    static const std::array<Eigen::Matrix3cd, 9> ops = [] {
        std::array<Eigen::Matrix3cd, 9> o;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                o[a * 3 + b] = qutrit_displacement(2 * a, 2 * b) * qutrit_parity_matrix();
        return o;
    }();
    return ops;
}

namespace detail {

// D(2z) Pi on one mode: parity folds in as alternating column signs.
inline Eigen::MatrixXcd displaced_parity(int nmax, cplx z) {
    Eigen::MatrixXcd B = displacement_kernel(nmax, 2.0 * z);
    for (int n = 1; n <= nmax; n += 2) B.col(n) *= -1.0;
    return B;
}

struct SpaceShape {
    bool has_qutrit;
    std::vector<int> mode_nmax;  // per boson mode, in slot order
};

inline SpaceShape classify_space(const HilbertSpace& space) {
    SpaceShape s{false, {}};
    for (int i = 0; i < space.nfactors(); ++i) {
        if (space.factors[i].kind == Factor::Qutrit) {
            require(i == 0 && !s.has_qutrit, "expected at most one qutrit, in slot 0");
            s.has_qutrit = true;
        } else {
            s.mode_nmax.push_back(space.factors[i].nmax);
        }
    }
    require(!s.mode_nmax.empty() && s.mode_nmax.size() <= 2,
            "phase-space evaluation supports one or two boson modes");
    return s;
}

inline void check_point_guards(const SpaceShape& shape, const std::vector<cplx>& z) {
    require(z.size() == shape.mode_nmax.size(), "one phase-space point per boson mode");
    for (size_t i = 0; i < z.size(); ++i)
        check_amplitude_guard(shape.mode_nmax[i], std::abs(z[i]), "phase-space point");
}

// sum_r w_r M^(r) with M^(r)_ij = <S_i, K_boson S_j> over the qutrit slabs of
// each factor: the only state-dependent quantity, shared by all nine panels.
inline Eigen::Matrix3cd qutrit_moment(const DensityMatrix& rho, const SpaceShape& shape,
                                      const std::vector<Eigen::MatrixXcd>& B) {
    Eigen::Matrix3cd M = Eigen::Matrix3cd::Zero();
    const long D = rho.dim() / 3;
    if (shape.mode_nmax.size() == 1) {
        for (size_t r = 0; r < rho.factors.size(); ++r) {
            std::array<Eigen::VectorXcd, 3> S, T;
            for (int j = 0; j < 3; ++j) {
                S[j] = rho.factors[r].segment(j * D, D);
                T[j] = B[0] * S[j];
            }
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) M(i, j) += rho.weights[r] * S[i].dot(T[j]);
        }
        return M;
    }
    const long d1 = shape.mode_nmax[0] + 1, d2 = shape.mode_nmax[1] + 1;
    using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const Eigen::MatrixXcd B2t = B[1].transpose();
    for (size_t r = 0; r < rho.factors.size(); ++r) {
        std::array<Eigen::MatrixXcd, 3> S, T;
        for (int j = 0; j < 3; ++j) {
            S[j] = Eigen::Map<const RowMat>(rho.factors[r].data() + j * D, d1, d2);
            T[j] = B[0] * S[j] * B2t;
        }
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                M(i, j) += rho.weights[r] * (S[i].conjugate().cwiseProduct(T[j])).sum();
    }
    return M;
}

inline double boson_expectation(const DensityMatrix& rho, const SpaceShape& shape,
                                const std::vector<Eigen::MatrixXcd>& B) {
    cplx acc = 0.0;
    if (shape.mode_nmax.size() == 1) {
        for (size_t r = 0; r < rho.factors.size(); ++r)
            acc += rho.weights[r] * rho.factors[r].dot(B[0] * rho.factors[r]);
    } else {
        const long d1 = shape.mode_nmax[0] + 1, d2 = shape.mode_nmax[1] + 1;
        using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
        const Eigen::MatrixXcd B2t = B[1].transpose();
        for (size_t r = 0; r < rho.factors.size(); ++r) {
            Eigen::Map<const RowMat> S(rho.factors[r].data(), d1, d2);
            acc += rho.weights[r] * (S.conjugate().cwiseProduct(B[0] * S * B2t)).sum();
        }
    }
    return acc.real();
}

inline std::vector<Eigen::MatrixXcd> mode_kernels(const SpaceShape& shape,
                                                  const std::vector<cplx>& z) {
    std::vector<Eigen::MatrixXcd> B;
    B.reserve(z.size());
    for (size_t i = 0; i < z.size(); ++i) B.push_back(displaced_parity(shape.mode_nmax[i], z[i]));
    return B;
}

}  // namespace detail

// Joint quasi-distribution of a qutrit-first density at boson phase-space
// point(s) z and all nine qutrit points (a, b):
//   W(a, b; z) = (1/3)(1/pi)^modes Tr[rho A(a,b) (x) D(2z1)Pi ... ]
// Row index a, column index b.
inline Eigen::Matrix3d wigner_panels(const DensityMatrix& rho, const std::vector<cplx>& z) {
    const detail::SpaceShape shape = detail::classify_space(rho.space);
    require(shape.has_qutrit, "wigner_panels needs a qutrit factor");
    detail::check_point_guards(shape, z);
    const Eigen::Matrix3cd M =
        detail::qutrit_moment(rho, shape, detail::mode_kernels(shape, z));
    const double pref = (1.0 / 3.0) * std::pow(1.0 / pi, double(z.size()));
    Eigen::Matrix3d out;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            out(a, b) = pref * qutrit_point_ops()[a * 3 + b].cwiseProduct(M).sum().real();
    return out;
}

// Quasi-distribution of a boson-only density (one value per point), or one
// qutrit panel of a joint density.
inline double wigner_value(const DensityMatrix& rho, const std::vector<cplx>& z, int a = 0,
                           int b = 0) {
    const detail::SpaceShape shape = detail::classify_space(rho.space);
    require(a >= 0 && a <= 2 && b >= 0 && b <= 2, "qutrit panel indices must be 0, 1 or 2");
    if (shape.has_qutrit) return wigner_panels(rho, z)(a, b);
    require(a == 0 && b == 0, "boson-only density has no qutrit panels");
    detail::check_point_guards(shape, z);
    const double pref = std::pow(1.0 / pi, double(z.size()));
    return pref * detail::boson_expectation(rho, shape, detail::mode_kernels(shape, z));
}

namespace detail {

// <beta| D(2z) Pi |gamma> for exact (untruncated) coherent kets; the engine
// behind the closed-form cat values.
inline cplx coherent_point_kernel(cplx beta, cplx gamma, cplx z) {
    return std::exp(-2.0 * std::norm(z) + 2.0 * std::conj(z) * gamma +
                    2.0 * std::conj(beta) * z - std::conj(beta) * gamma - 0.5 * std::norm(beta) -
                    0.5 * std::norm(gamma));
}

inline cplx coherent_overlap(cplx beta, cplx gamma) {
    return std::exp(-0.5 * std::norm(beta) - 0.5 * std::norm(gamma) + std::conj(beta) * gamma);
}

}  // namespace detail

// Closed-form quasi-distribution of the cat families, evaluated through exact
// coherent-state algebra (no truncation anywhere): the reference the numerics
// are tested against. Panel indices apply to the kinds carrying a qutrit.
inline double analytic_cat_wigner(CatKind kind, cplx alpha, int k, const std::vector<cplx>& z,
                                  int a = 0, int b = 0) {
    require(a >= 0 && a <= 2 && b >= 0 && b <= 2, "qutrit panel indices must be 0, 1 or 2");
    switch (kind) {
        case CatKind::Z2: {
            require_valid(k == 0 || k == 1, "cat index k out of range");
            require(z.size() == 1, "one phase-space point expected");
            require(a == 0 && b == 0, "boson-only cat has no qutrit panels");
            const double sign = k == 0 ? 1.0 : -1.0;
            const cplx s[2] = {alpha, -alpha};
            const double c[2] = {1.0, sign};
            cplx num = 0.0, den = 0.0;
            for (int u = 0; u < 2; ++u)
                for (int v = 0; v < 2; ++v) {
                    num += c[u] * c[v] * detail::coherent_point_kernel(s[u], s[v], z[0]);
                    den += c[u] * c[v] * detail::coherent_overlap(s[u], s[v]);
                }
            return (num / den).real() / pi;
        }
        case CatKind::QB1: {
            require_valid(k >= 0 && k <= 2, "cat index k out of range");
            require(z.size() == 1, "one phase-space point expected");
            const Eigen::Matrix3cd& A = qutrit_point_ops()[a * 3 + b];
            cplx num = 0.0;
            for (int lp = 0; lp < 3; ++lp)
                for (int l = 0; l < 3; ++l) {
                    const cplx c = omega_pow(-static_cast<long long>(l) * k) *
                                   std::conj(omega_pow(-static_cast<long long>(lp) * k));
                    const cplx q = detail::qutrit_fourier(lp).dot(
                        Eigen::VectorXcd(A * detail::qutrit_fourier(l)));
                    num += c * q *
                           detail::coherent_point_kernel(omega_pow(lp) * alpha,
                                                         omega_pow(l) * alpha, z[0]);
                }
            return (num / 3.0).real() / (3.0 * pi);
        }
        case CatKind::Q2B: {
            require_valid(k >= 0 && k <= 2, "cat index k out of range");
            require(z.size() == 2, "two phase-space points expected");
            const Eigen::Matrix3cd& A = qutrit_point_ops()[a * 3 + b];
            cplx num = 0.0;
            for (int lp = 0; lp < 3; ++lp)
                for (int l = 0; l < 3; ++l) {
                    const cplx c = omega_pow(static_cast<long long>(l) * k) *
                                   std::conj(omega_pow(static_cast<long long>(lp) * k));
                    const cplx q = detail::qutrit_fourier(-lp).dot(
                        Eigen::VectorXcd(A * detail::qutrit_fourier(-l)));
                    num += c * q *
                           detail::coherent_point_kernel(omega_pow(-lp) * alpha,
                                                         omega_pow(-l) * alpha, z[0]) *
                           detail::coherent_point_kernel(omega_pow(lp) * alpha,
                                                         omega_pow(l) * alpha, z[1]);
                }
            return (num / 3.0).real() / (3.0 * pi * pi);
        }
        case CatKind::B2: {
            require_valid(k >= 0 && k <= 2, "cat index k out of range");
            require(z.size() == 2, "two phase-space points expected");
            require(a == 0 && b == 0, "boson-only cat has no qutrit panels");
            cplx num = 0.0, den = 0.0;
            for (int lp = 0; lp < 3; ++lp)
                for (int l = 0; l < 3; ++l) {
                    const cplx c = omega_pow(static_cast<long long>(l - lp) * k);
                    num += c *
                           detail::coherent_point_kernel(omega_pow(-lp) * alpha,
                                                         omega_pow(-l) * alpha, z[0]) *
                           detail::coherent_point_kernel(omega_pow(lp) * alpha,
                                                         omega_pow(l) * alpha, z[1]);
                    den += c *
                           detail::coherent_overlap(omega_pow(-lp) * alpha,
                                                    omega_pow(-l) * alpha) *
                           detail::coherent_overlap(omega_pow(lp) * alpha, omega_pow(l) * alpha);
                }
            return (num / den).real() / (pi * pi);
        }
    }
    fail("bad cat kind");
}

// Two-dimensional sections w -> (z1, z2) of the four-dimensional two-mode
// phase space. Diag pairs conjugate points so that all rotated coherent
// centers land in the cut (scale s is exposed: s = 1/sqrt(2) keeps |w| equal
// to the phase-space radius, s = 1 matches the convention where z1 = w).
// Fringe(b) is the real two-plane through the interference midpoint of the
// b-family, rotated so both the corner and midpoint Gaussians sit in it.
struct PlaneSection {
    enum class Kind { Diag, Fringe };
    Kind kind = Kind::Diag;
    double scale = 1.0 / std::sqrt(2.0);
    int b = 0;

    static PlaneSection diag(double s) {
        require_valid(std::isfinite(s) && s > 0.0, "diag scale must be positive");
        return PlaneSection{Kind::Diag, s, 0};
    }
    static PlaneSection fringe(int bb) {
        require_valid(bb >= 0 && bb <= 2, "fringe family index must be 0, 1 or 2");
        return PlaneSection{Kind::Fringe, 1.0, bb};
    }

    std::array<cplx, 2> map(cplx w) const {
        if (kind == Kind::Diag) return {scale * w, scale * std::conj(w)};
        const double cp = std::cos(pi / 4.0 + theta3 * b), sp = std::sin(pi / 4.0 + theta3 * b);
        const double cm = std::cos(pi / 4.0 - theta3 * b), sm = std::sin(pi / 4.0 - theta3 * b);
        const cplx z1 = omega_pow(b) * (cp * w.real() + sp * w.imag());
        const cplx z2 = omega_pow(-b) * (cm * w.real() - sm * w.imag());
        return {z1, z2};
    }

    std::string describe() const {
        if (kind == Kind::Diag)
            return "section diag: z1 = s*w, z2 = s*conj(w), s = " + format_g12(scale);
        return "section fringe: z1 = omega^b*(cos(pi/4 + 2*pi*b/3)*Re(w) + sin(pi/4 + "
               "2*pi*b/3)*Im(w)), z2 = omega^(-b)*(cos(pi/4 - 2*pi*b/3)*Re(w) - sin(pi/4 - "
               "2*pi*b/3)*Im(w)), b = " +
               std::to_string(b);
    }
};

// Square grid of section points: w = x + i y, x and y on [-extent, extent]
// with `resolution` samples each; y varies in the outer loop, x in the inner.
// For a joint density all nine panels are filled; for a boson-only density
// only `values`. Rows are evaluated in parallel.
struct WignerGrid {
    PlaneSection section;
    double extent = 0.0;
    int resolution = 0;
    std::vector<cplx> w;
    std::vector<std::array<double, 9>> panels;  // panel index a*3 + b
    std::vector<double> values;
};

inline WignerGrid wigner_grid(const DensityMatrix& rho, const PlaneSection& section,
                              double extent, int resolution) {
    require_valid(std::isfinite(extent) && extent > 0.0, "grid extent must be positive");
    require_valid(resolution >= 2, "grid resolution must be >= 2");
    const detail::SpaceShape shape = detail::classify_space(rho.space);
    require(shape.mode_nmax.size() == 2, "plane sections live in a two-mode phase space");
    // section maps are linear in (Re w, Im w): corner points bound |z_i|
    for (double sx : {-extent, extent})
        for (double sy : {-extent, extent})
            detail::check_point_guards(shape, {section.map(cplx(sx, sy))[0],
                                               section.map(cplx(sx, sy))[1]});

    WignerGrid grid;
    grid.section = section;
    grid.extent = extent;
    grid.resolution = resolution;
    const long n = static_cast<long>(resolution) * resolution;
    grid.w.resize(n);
    if (shape.has_qutrit)
        grid.panels.resize(n);
    else
        grid.values.resize(n);
    auto coord = [&](int idx) { return -extent + 2.0 * extent * double(idx) / (resolution - 1); };

    parallel_for(resolution, [&](long iy) {
        for (int ix = 0; ix < resolution; ++ix) {
            const long at = iy * resolution + ix;
            const cplx w(coord(ix), coord(static_cast<int>(iy)));
            grid.w[at] = w;
            const auto zz = section.map(w);
            const std::vector<cplx> z{zz[0], zz[1]};
            if (shape.has_qutrit) {
                const Eigen::Matrix3d p = wigner_panels(rho, z);
                for (int a = 0; a < 3; ++a)
                    for (int b = 0; b < 3; ++b) grid.panels[at][a * 3 + b] = p(a, b);
            } else {
                grid.values[at] = wigner_value(rho, z);
            }
        }
    });
    return grid;
}

}  // namespace qrabi
