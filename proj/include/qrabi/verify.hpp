#pragma once

#include <cctype>
#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "qrabi/models.hpp"
#include "qrabi/perturbation.hpp"
#include "qrabi/states.hpp"
#include "qrabi/wigner.hpp"

namespace qrabi {

struct VerifyCheck {
    std::string name;
    bool pass;
    double value;
    double tol;
    std::string context;
};

struct VerifyReport {
    std::vector<VerifyCheck> checks;

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }

    std::string render() const {
        std::string out;
        int passed = 0;
        for (const auto& c : checks) {
            passed += c.pass ? 1 : 0;
            out += "check.name=" + c.name + "; status=" + (c.pass ? "PASS" : "FAIL") +
                   "; value=" + format_g12(c.value) + "; tol=" + format_g12(c.tol) +
                   "; context=" + c.context + "\n";
        }
        out += std::string("overall.status=") + (all_pass() ? "PASS" : "FAIL") +
               "; overall.passed=" + std::to_string(passed) +
               "; overall.total=" + std::to_string(checks.size()) + "\n";
        return out;
    }
};

namespace detail {

inline double xorshift_unit(std::uint64_t& s) {  // deterministic, in [-1, 1)
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    return static_cast<double>(s >> 11) / 4503599627370496.0 - 1.0;
}

inline std::string lower_name(ModelId m) {
    std::string s = model_name(m);
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

// Eigenvalues of a hermitian operator, lowest `count`, via a dense solve
// (verification-scale spaces only).
inline std::vector<double> dense_lowest_values(const Operator& H, int count) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense_matrix(H),
                                                       Eigen::EigenvaluesOnly);
    require(es.info() == Eigen::Success, "dense eigensolver failed");
    std::vector<double> v(count);
    for (int i = 0; i < count; ++i) v[i] = es.eigenvalues()(i);
    return v;
}

inline std::vector<double> values_of(const std::vector<EigenPair>& pairs) {
    std::vector<double> v;
    v.reserve(pairs.size());
    for (const auto& p : pairs) v.push_back(p.value);
    return v;
}

}  // namespace detail

// Deterministic self-check battery at the given parameters. Every check is a
// named scalar against a tolerance; the rendered report is byte-stable for
// identical inputs.
inline VerifyReport run_verification(const ModelParams& p, int truncation) {
    validate(p);
    require_valid(truncation >= 20, "verification needs truncation >= 20");
    const int N = truncation;
    const double alpha_v = 1.0;  // safely inside the truncation guard for N >= 20
    const std::vector<ModelId> all_models{ModelId::R1, ModelId::R2, ModelId::R2P, ModelId::ALT};

    VerifyReport rep;
    auto add = [&rep](std::string name, double value, double tol, std::string context) {
        rep.checks.push_back({std::move(name), value <= tol, value, tol, std::move(context)});
    };

    // clock/shift algebra: Z^3 = X^3 = I and ZX = omega XZ
    {
        auto [Z, X] = qudit_clock_shift(3);
        const SparseC I3 = identity_op(qudit_space(3)).mat;
        double v = max_abs(SparseC(Z.mat * Z.mat * Z.mat - I3));
        v = std::max(v, max_abs(SparseC(X.mat * X.mat * X.mat - I3)));
        v = std::max(v, max_abs(SparseC(Z.mat * X.mat - omega3() * SparseC(X.mat * Z.mat))));
        add("clock_shift_algebra", v, 1e-12, "Z^3=I, X^3=I, ZX=omega XZ");
    }

    // parity commutes with each Hamiltonian (R2P: below the truncation shell)
    for (ModelId m : all_models) {
        const Operator H = build_hamiltonian(m, p, N);
        const Operator P = build_parity(m, N);
        SparseC C = H.mat * P.mat - P.mat * H.mat;
        std::string ctx = "sup|HP - PH| / sup|H|";
        if (m == ModelId::R2P) {
            const SparseC Pi = subshell_projector(H.space, N).mat;
            C = Pi * C * Pi;
            ctx = "projected to total occupation <= truncation; scaled by sup|H|";
        }
        add("parity_commutator_" + detail::lower_name(m), max_abs(C) / max_abs(H.mat), 1e-10,
            ctx);
    }

    // parity is order three
    {
        double v = 0.0;
        for (ModelId m : all_models) {
            const Operator P = build_parity(m, N);
            SparseC eye(P.dim(), P.dim());
            eye.setIdentity();
            v = std::max(v, max_abs(SparseC(P.mat * P.mat * P.mat - eye)));
        }
        add("parity_order3", v, 1e-10, "max over r1, r2, r2p, alt");
    }

    // sector projectors resolve the identity and are hermitian idempotents
    {
        double v = 0.0;
        for (ModelId m : all_models) {
            std::vector<Operator> Pk;
            for (int k = 0; k < 3; ++k) Pk.push_back(sector_projector(m, N, k));
            SparseC sum = Pk[0].mat + Pk[1].mat + Pk[2].mat;
            SparseC eye(sum.rows(), sum.cols());
            eye.setIdentity();
            v = std::max(v, max_abs(SparseC(sum - eye)));
            for (int k = 0; k < 3; ++k) {
                v = std::max(v, max_abs(SparseC(Pk[k].mat * Pk[k].mat - Pk[k].mat)));
                v = std::max(v, max_abs(SparseC(SparseC(Pk[k].mat.adjoint()) - Pk[k].mat)));
            }
        }
        add("sector_completeness", v, 1e-10, "sum_k P_k = I, P_k^2 = P_k = P_k^dag; all models");
    }

    // no Hamiltonian matrix elements between different sectors
    {
        double v = 0.0;
        for (ModelId m : {ModelId::R1, ModelId::R2}) {
            const Operator H = build_hamiltonian(m, p, N);
            std::vector<Operator> Pk;
            for (int k = 0; k < 3; ++k) Pk.push_back(sector_projector(m, N, k));
            for (int k = 0; k < 3; ++k)
                for (int kp = 0; kp < 3; ++kp)
                    if (k != kp)
                        v = std::max(
                            v, max_abs(SparseC(Pk[kp].mat * H.mat * Pk[k].mat)) /
                                   max_abs(H.mat));
        }
        add("sector_block_offdiag", v, 1e-10, "P_k' H P_k for k' != k; r1 and r2");
    }

    // restricting the full Hamiltonian to a sector reproduces the transformed
    // boson-only Hamiltonian entry by entry
    for (ModelId m : {ModelId::R1, ModelId::R2}) {
        const Operator H = build_hamiltonian(m, p, N);
        double v = 0.0;
        for (int k = 0; k < 3; ++k) {
            const SparseC B = sector_isometry(m, N, k);
            const SparseC R = SparseC(B.adjoint()) * H.mat * B;
            const Operator Hk = build_transformed_hamiltonian(m, p, N, k);
            v = std::max(v, max_abs(SparseC(R - Hk.mat)));
        }
        add("frame_equivalence_" + detail::lower_name(m), v, 1e-12,
            "isometry-restricted full Hamiltonian vs sector Hamiltonian, all k");
    }

    // quadrature-form two-mode model has the same low spectrum as R2
    {
        std::vector<double> r2vals;
        for (int k = 0; k < 3; ++k) {
            const Operator Hk = build_transformed_hamiltonian(ModelId::R2, p, N, k);
            for (double e : detail::dense_lowest_values(Hk, 10)) r2vals.push_back(e);
        }
        std::sort(r2vals.begin(), r2vals.end());
        const Operator Hp = build_hamiltonian(ModelId::R2P, p, N);
        const std::vector<double> pv = detail::values_of(lowest_eigenpairs(Hp, 10, 1e-9));
        double v = 0.0;
        for (int i = 0; i < 10; ++i) v = std::max(v, std::abs(pv[i] - r2vals[i]));
        add("quadrature_frame_spectra", v, 1e-6,
            "10 lowest of the quadrature-form model vs sector-resolved R2");
    }

    // the symmetric-combination model reduces to a sqrt(2)-rescaled one-mode
    // model: identical distinct level values at zero field, but different
    // multiplicities (the decoupled mode adds a free ladder)
    {
        ModelParams p0 = p;
        p0.b_field = 0.0;
        ModelParams pr = p0;
        pr.lambda *= std::sqrt(2.0);
        const std::vector<double> av =
            detail::values_of(lowest_eigenpairs(build_hamiltonian(ModelId::ALT, p0, N), 12, 1e-9));
        const std::vector<double> rv =
            detail::values_of(lowest_eigenpairs(build_hamiltonian(ModelId::R1, pr, N), 9, 1e-9));
        const auto ac = cluster_indices(av, 1e-6 * p.omega);
        const auto rc = cluster_indices(rv, 1e-6 * p.omega);
        double v = 0.0;
        for (size_t c = 0; c < std::min<size_t>({ac.size(), rc.size(), 3}); ++c)
            v = std::max(v, std::abs(av[ac[c].front()] - rv[rc[c].front()]));
        add("symmetric_mode_distinct_values", v, 1e-6,
            "distinct low levels at zero field, two-mode vs rescaled one-mode");
        const double mult =
            std::abs(double(ac.size() > 1 ? ac[1].size() : 0) - 6.0) +
            std::abs(double(rc.size() > 1 ? rc[1].size() : 0) - 3.0);
        add("symmetric_mode_multiplicity", mult, 0.5,
            "first excited level: multiplicity 6 in the two-mode model vs 3");
    }

    // at nonzero field the lowest triplets still coincide under the map
    {
        ModelParams pr = p;
        pr.lambda *= std::sqrt(2.0);
        const std::vector<double> av =
            detail::values_of(lowest_eigenpairs(build_hamiltonian(ModelId::ALT, p, N), 3, 1e-9));
        const std::vector<double> rv =
            detail::values_of(lowest_eigenpairs(build_hamiltonian(ModelId::R1, pr, N), 3, 1e-9));
        double v = 0.0;
        for (int i = 0; i < 3; ++i) v = std::max(v, std::abs(av[i] - rv[i]));
        add("symmetric_mode_triplet", v, 1e-6, "lowest triplet at default field");
    }

    // isotropic two-mode oscillator: ladder Om(n+1) with degeneracy n+1
    {
        const HilbertSpace bs{fock(N), fock(N)};
        const Operator H2d = make_operator(
            bs,
            SparseC(p.omega * fock_number(bs, 0).mat + p.omega * fock_number(bs, 1).mat +
                    p.omega * identity_op(bs).mat),
            true);
        const std::vector<double> ev = detail::dense_lowest_values(H2d, 21);
        const auto clusters = cluster_indices(ev, 1e-6 * p.omega);
        double dcount = 0.0, dlevel = 0.0;
        for (int n = 0; n < 6; ++n) {
            if (n < static_cast<int>(clusters.size())) {
                dcount = std::max(dcount,
                                  std::abs(double(clusters[n].size()) - double(n + 1)));
                dlevel = std::max(dlevel,
                                  std::abs(ev[clusters[n].front()] - p.omega * (n + 1)));
            } else {
                dcount = std::max(dcount, double(n + 1));
            }
        }
        add("planar_ladder_degeneracy", dcount, 0.5, "level n holds n+1 states, n = 0..5");
        add("planar_ladder_levels", dlevel, 1e-8, "ladder values Om(n+1) including zero point");

        const Su2Generators g = su2_generators(N);
        const SparseC Pi = subshell_projector(bs, N).mat;
        auto projected_norm = [&Pi](const Operator& x, const Operator& y, const Operator& t) {
            const SparseC diff = commutator(x, y).mat - SparseC(cplx(0, 2) * t.mat);
            return max_abs(SparseC(Pi * diff * Pi));
        };
        double v = projected_norm(g.l1, g.l2, g.l3);
        v = std::max(v, projected_norm(g.l2, g.l3, g.l1));
        v = std::max(v, projected_norm(g.l3, g.l1, g.l2));
        for (const Operator* L : {&g.l1, &g.l2, &g.l3})
            v = std::max(v, max_abs(commutator(H2d, *L).mat));
        add("planar_su2_closure", v, 1e-8,
            "[L1,L2]=2iL3 and cyclic below the truncation shell; [H,Li]=0");
    }

    // zero-field ground triplet sits exactly at the well depth
    {
        ModelParams p0 = p;
        p0.b_field = 0.0;
        const std::vector<double> ev =
            detail::values_of(lowest_eigenpairs(build_hamiltonian(ModelId::R1, p0, N), 3, 1e-10));
        double v = 0.0;
        for (double e : ev) v = std::max(v, std::abs(e + p.lambda * p.lambda / p.omega));
        add("b0_ground_triplet", v, 1e-8, "triplet at -lambda^2/Om when the field is off");
    }

    // first-order splitting: displaced-vacuum average of the three-level term
    // equals the closed form
    {
        const double a = p.lambda / p.omega;
        std::vector<double> w(N + 1);
        w[0] = std::exp(-a * a);
        for (int n = 0; n < N; ++n) w[n + 1] = w[n] * a * a / double(n + 1);
        double v1 = 0.0, v2 = 0.0;
        for (int k = 0; k < 3; ++k) {
            double s1 = 0.0;
            for (int n = 0; n <= N; ++n)
                s1 += w[n] * 2.0 * p.b_field * std::cos(theta3 * (n - k) - p.phi);
            v1 = std::max(v1, std::abs(s1 - perturbative_correction(ModelId::R1, p, k)));
            double s2 = 0.0;
            for (int n1 = 0; n1 <= N; ++n1)
                for (int n2 = 0; n2 <= N; ++n2)
                    s2 += w[n1] * w[n2] * 2.0 * p.b_field *
                          std::cos(theta3 * (n1 - n2 - k) - p.phi);
            v2 = std::max(v2, std::abs(s2 - perturbative_correction(ModelId::R2, p, k)));
        }
        add("pert_first_order_r1", v1, 1e-10, "coherent average vs closed form, all k");
        add("pert_first_order_r2", v2, 1e-10, "two-mode coherent average vs closed form, all k");
    }

    // cat superpositions are exact parity eigenvectors with eigenvalue omega^k
    {
        double v = 0.0;
        const Operator P1 = build_parity(ModelId::R1, N);
        const Operator P2 = build_parity(ModelId::R2, N);
        for (int k = 0; k < 3; ++k) {
            const StateVector c1 = cat_state(CatKind::QB1, N, alpha_v, k);
            v = std::max(v,
                         (P1.mat * c1.amplitudes - omega_pow(k) * c1.amplitudes).norm());
            const StateVector c2 = cat_state(CatKind::Q2B, N, alpha_v, k);
            v = std::max(v,
                         (P2.mat * c2.amplitudes - omega_pow(k) * c2.amplitudes).norm());
        }
        add("cat_parity", v, 1e-10, "one- and two-mode superpositions, all k");
    }

    // coherent-state moments: <a> = alpha, <n> = |alpha|^2, unit norm
    {
        const StateVector c = coherent_state(N, cplx(alpha_v, 0.0));
        const Operator a = fock_annihilation(c.space, 0);
        const cplx mean_a = c.amplitudes.dot(a.mat * c.amplitudes);
        const cplx mean_n = c.amplitudes.dot(adjoint_op(a).mat * (a.mat * c.amplitudes));
        const double v = std::abs(mean_a - cplx(alpha_v, 0.0)) +
                         std::abs(mean_n - cplx(alpha_v * alpha_v, 0.0)) +
                         std::abs(c.norm() - 1.0);
        add("coherent_moments", v, 1e-10, "ladder expectation values at the probe amplitude");
    }

    // the nine qutrit point operators resolve 3*identity
    {
        Eigen::Matrix3cd s = Eigen::Matrix3cd::Zero();
        for (const auto& A : qutrit_point_ops()) s += A;
        s -= 3.0 * Eigen::Matrix3cd::Identity();
        add("wigner_kernel_completeness", s.cwiseAbs().maxCoeff(), 1e-12,
            "sum of displaced-parity points equals 3I");
    }

    const DensityMatrix cat = pure_density(cat_state(CatKind::Q2B, N, alpha_v, 0));

    // qutrit marginals of the reduced qutrit state
    {
        const Eigen::Matrix3cd rq = qutrit_reduced(cat);
        Eigen::Matrix3d wq;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                wq(a, b) = (qutrit_point_ops()[a * 3 + b].transpose().cwiseProduct(rq))
                               .sum()
                               .real() /
                           3.0;
        double v = 0.0;
        for (int b = 0; b < 3; ++b) {
            const Eigen::VectorXcd fb = detail::qutrit_fourier(b);
            v = std::max(v, std::abs(wq.col(b).sum() - fb.dot(rq * fb).real()));
        }
        for (int a = 0; a < 3; ++a)
            v = std::max(v, std::abs(wq.row(a).sum() - rq(a, a).real()));
        add("qutrit_marginals", v, 1e-12, "column sums give wave populations, row sums basis");
    }

    // numerical joint quasi-distribution against the closed form: one global
    // calibration constant fitted, then pointwise residuals
    {
        std::uint64_t s = 0x2545f4914f6cdd1dULL;
        double num_dot_ana = 0.0, ana_dot_ana = 0.0;
        std::vector<std::pair<std::vector<cplx>, Eigen::Matrix3d>> samples;
        for (int t = 0; t < 15; ++t) {
            const cplx z1(0.7 * detail::xorshift_unit(s), 0.7 * detail::xorshift_unit(s));
            const cplx z2(0.7 * detail::xorshift_unit(s), 0.7 * detail::xorshift_unit(s));
            const std::vector<cplx> z{z1, z2};
            const Eigen::Matrix3d num = wigner_panels(cat, z);
            Eigen::Matrix3d ana;
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b)
                    ana(a, b) = analytic_cat_wigner(CatKind::Q2B, alpha_v, 0, z, a, b);
            samples.push_back({z, ana});
            num_dot_ana += (num.cwiseProduct(ana)).sum();
            ana_dot_ana += (ana.cwiseProduct(ana)).sum();
        }
        const double C = num_dot_ana / ana_dot_ana;
        add("wigner_calibration", std::abs(C - 1.0), 1e-8,
            "fitted scale between numerics and closed form, C = " + format_g12(C));
        double resid = 0.0;
        for (const auto& [z, ana] : samples) {
            const Eigen::Matrix3d num = wigner_panels(cat, z);
            resid = std::max(resid, (num - C * ana).cwiseAbs().maxCoeff());
        }
        add("wigner_residual", resid, 1e-10, "max panel deviation after calibration");
    }

    // even one-mode superposition: exact origin value 1/pi at any amplitude
    {
        const double w0 = analytic_cat_wigner(CatKind::Z2, cplx(3.0, 0.0), 0, {cplx(0.0)});
        add("z2_cat_value", std::abs(w0 - 1.0 / pi), 1e-12,
            "even two-component superposition at the origin");
    }

    // summing the nine qutrit panels reduces to the boson-only distribution
    {
        const DensityMatrix rb = boson_reduced(cat);
        std::uint64_t s = 0x9e3779b97f4a7c15ULL;
        double v = 0.0;
        for (int t = 0; t < 5; ++t) {
            const cplx z1(0.7 * detail::xorshift_unit(s), 0.7 * detail::xorshift_unit(s));
            const cplx z2(0.7 * detail::xorshift_unit(s), 0.7 * detail::xorshift_unit(s));
            const std::vector<cplx> z{z1, z2};
            v = std::max(v, std::abs(wigner_panels(cat, z).sum() - wigner_value(rb, z)));
        }
        add("joint_reduction", v, 1e-10, "panel sum vs qutrit-traced two-mode distribution");
    }

    return rep;
}

}  // namespace qrabi
