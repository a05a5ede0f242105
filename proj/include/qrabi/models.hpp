#pragma once

#include <cctype>
#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "qrabi/eigensolver.hpp"
#include "qrabi/operators.hpp"

namespace qrabi {

// R1: one boson mode + qutrit. R2: two modes, counter-rotating pairing.
// R2P: two-mode quadrature form of R2 (related by a normal-mode rotation).
// ALT: two modes coupled through their symmetric combination only.
enum class ModelId { R1, R2, R2P, ALT };

inline std::string model_name(ModelId m) {
    switch (m) {
        case ModelId::R1: return "R1";
        case ModelId::R2: return "R2";
        case ModelId::R2P: return "R2P";
        case ModelId::ALT: return "ALT";
    }
    fail("bad model id");
}

inline ModelId parse_model(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (s == "R1") return ModelId::R1;
    if (s == "R2") return ModelId::R2;
    if (s == "R2P") return ModelId::R2P;
    if (s == "ALT") return ModelId::ALT;
    fail_valid("unknown model: " + s + " (expected r1, r2, r2p or alt)");
}

inline int boson_mode_count(ModelId m) { return m == ModelId::R1 ? 1 : 2; }

// Qutrit first, then the boson mode(s); row-major composite index.
inline HilbertSpace model_space(ModelId m, int nmax) {
    if (m == ModelId::R1) return HilbertSpace{qutrit(), fock(nmax)};
    return HilbertSpace{qutrit(), fock(nmax), fock(nmax)};
}

namespace detail {

// B (e^{i phi} Z + e^{-i phi} Z^dag) embedded at the qutrit slot.
inline SparseC magnetic_term(const HilbertSpace& space, double b_field, double phi) {
    const Operator Z = qudit_clock_shift(3).first;
    const cplx u = b_field * std::polar(1.0, phi);
    const Operator m = u * Z + std::conj(u) * adjoint_op(Z);
    return embed(m, space, 0).mat;
}

}  // namespace detail

// Full-space Hamiltonian in the qutrit-first layout.
//   R1 : Om n + B-term - lam (a X + a^dag X^dag)
//   R2 : Om (n1+n2) + B-term - lam (a1 + a2^dag) X - lam (a1^dag + a2) X^dag
//   R2P: Om (n1+n2) + B-term - lam (x1 + i x2) X - lam (x1 - i x2) X^dag,
//        x_i = (a_i + a_i^dag)/sqrt(2)
//   ALT: Om (n1+n2) + B-term - lam [(a1+a2) X + (a1^dag+a2^dag) X^dag]
inline Operator build_hamiltonian(ModelId m, const ModelParams& p, int nmax) {
    validate(p);
    const HilbertSpace space = model_space(m, nmax);
    const SparseC X = embed(qudit_clock_shift(3).second, space, 0).mat;

    SparseC H = detail::magnetic_term(space, p.b_field, p.phi);
    for (int mode = 1; mode <= boson_mode_count(m); ++mode)
        H = H + p.omega * fock_number(space, mode).mat;

    const SparseC a1 = fock_annihilation(space, 1).mat;
    const SparseC a1d = a1.adjoint();
    switch (m) {
        case ModelId::R1: {
            SparseC c = a1 * X;
            H = H - p.lambda * (c + SparseC(c.adjoint()));
            break;
        }
        case ModelId::R2: {
            const SparseC a2 = fock_annihilation(space, 2).mat;
            SparseC c = (a1 + SparseC(a2.adjoint())) * X;
            H = H - p.lambda * (c + SparseC(c.adjoint()));
            break;
        }
        case ModelId::R2P: {
            const SparseC a2 = fock_annihilation(space, 2).mat;
            const double s = 1.0 / std::sqrt(2.0);
            SparseC x1 = s * (a1 + SparseC(a1.adjoint()));
            SparseC x2 = s * (a2 + SparseC(a2.adjoint()));
            SparseC c = (x1 + cplx(0, 1) * x2) * X;
            H = H - p.lambda * (c + SparseC(c.adjoint()));
            break;
        }
        case ModelId::ALT: {
            const SparseC a2 = fock_annihilation(space, 2).mat;
            SparseC c = (a1 + a2) * X;
            H = H - p.lambda * (c + SparseC(c.adjoint()));
            break;
        }
    }
    return make_operator(space, H, true);
}

namespace detail {

// Two-mode boson factor of the R2P symmetry: exp(-i theta L2) with
// L2 = x1 p2 - x2 p1 = -i a1^dag a2 + i a2^dag a1. The minus sign pairs with
// Z = diag(1, w, w^2), X|j> = |j+1>: conjugation sends (x1 + i x2) to
// e^{-i theta}(x1 + i x2) and X to wX, so the coupling is invariant. L2
// conserves the total occupation and is diagonalized shell by shell; its
// eigenvalues on complete shells are exact integers, and on
// truncation-distorted partial shells they are rounded to the nearest
// integer so that the operator cubes to the identity exactly.
inline SparseC r2p_boson_parity(int nmax) {
    const int d = nmax + 1;
    std::vector<Triplet> trips;
    for (int N = 0; N <= 2 * nmax; ++N) {
        const int lo = std::max(0, N - nmax);
        const int hi = std::min(N, nmax);
        const int sz = hi - lo + 1;
        Eigen::MatrixXcd L2 = Eigen::MatrixXcd::Zero(sz, sz);
        for (int r = 0; r + 1 < sz; ++r) {
            const int n1 = lo + r, n2 = N - n1;  // couples to (n1+1, n2-1)
            const double amp = std::sqrt(double(n1 + 1) * double(n2));
            // -L2 restricted to the shell
            L2(r + 1, r) = cplx(0, amp);
            L2(r, r + 1) = cplx(0, -amp);
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(L2);
        Eigen::VectorXcd phases(sz);
        for (int t = 0; t < sz; ++t) phases[t] = omega_pow(std::llround(es.eigenvalues()(t)));
        Eigen::MatrixXcd block =
            es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
        for (int r = 0; r < sz; ++r)
            for (int c = 0; c < sz; ++c) {
                const long row = long(lo + r) * d + (N - lo - r);
                const long col = long(lo + c) * d + (N - lo - c);
                trips.emplace_back(row, col, block(r, c));
            }
    }
    SparseC P(long(d) * d, long(d) * d);
    P.setFromTriplets(trips.begin(), trips.end());
    return P;
}

}  // namespace detail

// Generalized-parity unitary P with P^3 = I and [H, P] = 0 (for R2P the
// commutator holds on states supported below the truncation shell):
//   R1 : exp(i theta n) Z              -> diagonal omega^(j + n)
//   R2 : exp(i theta (n1 - n2)) Z      -> diagonal omega^(j + n1 - n2)
//   R2P: exp(-i theta L2) Z, L2 = x1 p2 - x2 p1
//   ALT: exp(i theta (n1 + n2)) Z      -> diagonal omega^(j + n1 + n2)
inline Operator build_parity(ModelId m, int nmax) {
    const HilbertSpace space = model_space(m, nmax);
    const long dim = space.dim();
    std::vector<Triplet> trips;
    trips.reserve(dim);
    if (m == ModelId::R2P) {
        const SparseC pb = detail::r2p_boson_parity(nmax);
        const long D = pb.rows();
        for (int j = 0; j < 3; ++j)
            for (int c = 0; c < pb.outerSize(); ++c)
                for (SparseC::InnerIterator it(pb, c); it; ++it)
                    trips.emplace_back(j * D + it.row(), j * D + it.col(),
                                       omega_pow(j) * it.value());
    } else {
        for (long i = 0; i < dim; ++i) {
            const std::vector<int> occ = space.unflatten(i);
            long long e = occ[0];  // qutrit exponent from Z
            if (m == ModelId::R1) e += occ[1];
            if (m == ModelId::R2) e += occ[1] - occ[2];
            if (m == ModelId::ALT) e += occ[1] + occ[2];
            trips.emplace_back(i, i, omega_pow(e));
        }
    }
    SparseC P(dim, dim);
    P.setFromTriplets(trips.begin(), trips.end());
    return make_operator(space, P, false);
}

// P_k = (1/3) sum_j omega^(-k j) P^j, the orthogonal projector onto the
// symmetry sector with parity eigenvalue omega^k. Verifies P^3 = I.
inline Operator sector_projector(ModelId m, int nmax, int k) {
    require(k >= 0 && k <= 2, "sector index must be 0, 1 or 2");
    const Operator P = build_parity(m, nmax);
    const SparseC P2 = P.mat * P.mat;
    SparseC cube = P2 * P.mat;
    SparseC eye(P.dim(), P.dim());
    eye.setIdentity();
    require(max_abs(SparseC(cube - eye)) <= 1e-10, "parity does not cube to identity");
    SparseC proj = (1.0 / 3.0) * (eye + omega_pow(-k) * P.mat + omega_pow(-2 * k) * P2);
    return make_operator(P.space, proj, true);
}

// The sector space a model's symmetry block lives in after eliminating the
// qutrit: one mode for R1, two for R2.
inline HilbertSpace sector_space(ModelId m, int nmax) {
    require(m == ModelId::R1 || m == ModelId::R2, "sector basis is defined for R1 and R2");
    if (m == ModelId::R1) return HilbertSpace{fock(nmax)};
    return HilbertSpace{fock(nmax), fock(nmax)};
}

// Isometry from the sector space into the full space: the sector-k basis ket
// for boson occupation n (or n1,n2) carries the unique qutrit state making
// the parity eigenvalue omega^k, namely j = (k - n) mod 3 for R1 and
// j = (k - n1 + n2) mod 3 for R2. Columns follow the sector-space ordering,
// so conjugating the full Hamiltonian with this isometry reproduces the
// transformed sector Hamiltonian entry by entry.
inline SparseC sector_isometry(ModelId m, int nmax, int k) {
    require(k >= 0 && k <= 2, "sector index must be 0, 1 or 2");
    const HilbertSpace full = model_space(m, nmax);
    const HilbertSpace sec = sector_space(m, nmax);
    const long cols = sec.dim();
    std::vector<Triplet> trips;
    trips.reserve(cols);
    for (long c = 0; c < cols; ++c) {
        const std::vector<int> occ = sec.unflatten(c);
        const long long shift = m == ModelId::R1 ? occ[0] : occ[0] - occ[1];
        const int j = static_cast<int>((((k - shift) % 3) + 3) % 3);
        std::vector<int> focc;
        focc.push_back(j);
        focc.insert(focc.end(), occ.begin(), occ.end());
        trips.emplace_back(full.flatten(focc), c, cplx(1.0, 0.0));
    }
    SparseC B(full.dim(), cols);
    B.setFromTriplets(trips.begin(), trips.end());
    return B;
}

// Hamiltonian restricted to sector k, written on the boson-only sector space.
// The qutrit is gone: the interaction becomes plain mode displacement and the
// three-level term becomes an occupation-dependent potential,
//   R1: Om n - lam (a + a^dag) + 2B cos(theta (n - k) - phi)
//   R2: Om (n1+n2) - lam sum_i (a_i + a_i^dag)
//       + 2B cos(theta (n1 - n2 - k) - phi)
inline Operator build_transformed_hamiltonian(ModelId m, const ModelParams& p, int nmax, int k) {
    validate(p);
    require(k >= 0 && k <= 2, "sector index must be 0, 1 or 2");
    require(m == ModelId::R1 || m == ModelId::R2,
            "transformed Hamiltonian is defined for R1 and R2");
    const HilbertSpace space = sector_space(m, nmax);
    SparseC H(space.dim(), space.dim());
    for (int mode = 0; mode < space.nfactors(); ++mode) {
        const SparseC a = fock_annihilation(space, mode).mat;
        H = H + p.omega * fock_number(space, mode).mat - p.lambda * (a + SparseC(a.adjoint()));
    }
    std::vector<Triplet> pot;
    for (long i = 0; i < space.dim(); ++i) {
        const std::vector<int> occ = space.unflatten(i);
        const long long shift = m == ModelId::R1 ? occ[0] : occ[0] - occ[1];
        pot.emplace_back(i, i, 2.0 * p.b_field * std::cos(theta3 * double(shift - k) - p.phi));
    }
    SparseC V(space.dim(), space.dim());
    V.setFromTriplets(pot.begin(), pot.end());
    return make_operator(space, H + V, true);
}

// Angular-momentum-like bilinears on a two-mode space:
//   L1 = a1^dag a2 + a2^dag a1, L2 = i a1^dag a2 - i a2^dag a1, L3 = n1 - n2.
// They close into each other ([L1, L2] = 2i L3 and cyclic) on states below
// the truncation shell.
struct Su2Generators {
    Operator l1, l2, l3;
};

inline Su2Generators su2_generators(int nmax) {
    const HilbertSpace space{fock(nmax), fock(nmax)};
    const SparseC a1 = fock_annihilation(space, 0).mat;
    const SparseC a2 = fock_annihilation(space, 1).mat;
    const SparseC up = SparseC(a1.adjoint()) * a2;  // a1^dag a2
    const SparseC dn = SparseC(a2.adjoint()) * a1;
    // L2 = x1 p2 - x2 p1 = -i a1^dag a2 + i a2^dag a1, so that [L1, L2] = 2i L3
    // and cyclic (right-handed closure at twice the spin-1/2 normalization).
    return Su2Generators{
        make_operator(space, up + dn, true),
        make_operator(space, cplx(0, -1) * up + cplx(0, 1) * dn, true),
        make_operator(space, fock_number(space, 0).mat - fock_number(space, 1).mat, true)};
}

// Diagonal projector onto total boson occupation <= max_total (all qutrit
// values pass). Truncation-artifact-free identities hold inside its range.
inline Operator subshell_projector(const HilbertSpace& space, int max_total) {
    std::vector<Triplet> trips;
    for (long i = 0; i < space.dim(); ++i) {
        const std::vector<int> occ = space.unflatten(i);
        long total = 0;
        for (int s = 0; s < space.nfactors(); ++s)
            if (space.factors[s].kind == Factor::Fock) total += occ[s];
        if (total <= max_total) trips.emplace_back(i, i, cplx(1.0, 0.0));
    }
    SparseC P(space.dim(), space.dim());
    P.setFromTriplets(trips.begin(), trips.end());
    return make_operator(space, P, true);
}

// Labels each eigenpair with its symmetry sector k from <v|P|v>. Pairs inside
// a degenerate cluster (values closer than cluster_tol) are first rotated to
// simultaneous parity eigenvectors by diagonalizing the cluster's parity
// block, so arbitrary solver mixtures within a degenerate level still get
// clean labels. Input must be sorted by value; vectors are updated in place.
inline std::vector<int> assign_sectors(std::vector<EigenPair>& pairs, const Operator& parity,
                                       double cluster_tol) {
    auto nearest_k = [](cplx mu) {
        int best = 0;
        double dist = std::abs(mu - omega_pow(0));
        for (int k = 1; k < 3; ++k)
            if (std::abs(mu - omega_pow(k)) < dist) {
                dist = std::abs(mu - omega_pow(k));
                best = k;
            }
        return best;
    };
    std::vector<double> values;
    values.reserve(pairs.size());
    for (const auto& p : pairs) values.push_back(p.value);
    std::vector<int> labels(pairs.size(), 0);
    for (const auto& cluster : cluster_indices(values, cluster_tol)) {
        const int r = static_cast<int>(cluster.size());
        if (r == 1) {
            const auto& v = pairs[cluster[0]].vector;
            labels[cluster[0]] = nearest_k(v.dot(parity.mat * v));
            continue;
        }
        Eigen::MatrixXcd M(r, r);
        std::vector<Eigen::VectorXcd> pv(r);
        for (int t = 0; t < r; ++t) pv[t] = parity.mat * pairs[cluster[t]].vector;
        for (int u = 0; u < r; ++u)
            for (int t = 0; t < r; ++t) M(u, t) = pairs[cluster[u]].vector.dot(pv[t]);
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M);
        require(es.info() == Eigen::Success, "parity block diagonalization failed");
        std::vector<Eigen::VectorXcd> rotated(r);
        for (int t = 0; t < r; ++t) {
            Eigen::VectorXcd w = Eigen::VectorXcd::Zero(pairs[cluster[0]].vector.size());
            for (int u = 0; u < r; ++u) w += es.eigenvectors()(u, t) * pairs[cluster[u]].vector;
            w.normalize();
            rotated[t] = std::move(w);
            labels[cluster[t]] = nearest_k(es.eigenvalues()(t));
        }
        for (int t = 0; t < r; ++t) pairs[cluster[t]].vector = std::move(rotated[t]);
    }
    return labels;
}

}  // namespace qrabi
