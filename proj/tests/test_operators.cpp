// Algebra of the building blocks: clock/shift pairs, tensor embeddings,
// truncated ladder operators, composite-space indexing, config parsing and
// the small utility layer.

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>

#include "qrabi/io.hpp"
#include "qrabi/operators.hpp"
#include "qrabi/threads.hpp"

using namespace qrabi;
namespace fs = std::filesystem;

namespace {

Eigen::MatrixXcd dense(const Operator& op) { return dense_matrix(op); }

fs::path temp_dir(const std::string& tag) {
    fs::path dir = fs::temp_directory_path() / ("qrabi_test_" + tag);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("clock and shift obey the discrete Weyl algebra") {
    auto [Z, X] = qudit_clock_shift(3);
    const Eigen::MatrixXcd z = dense(Z), x = dense(X);
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(3, 3);
    // table-exact cube roots: Z^3 and X^3 are the identity to the last bit
    REQUIRE((z * z * z - id).cwiseAbs().maxCoeff() < 1e-15);
    REQUIRE((x * x * x - id).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE((z * x - omega3() * x * z).cwiseAbs().maxCoeff() < 1e-15);

    auto [Z5, X5] = qudit_clock_shift(5);
    const Eigen::MatrixXcd z5 = dense(Z5), x5 = dense(X5);
    const cplx w5 = std::polar(1.0, 2.0 * pi / 5.0);
    REQUIRE((z5 * x5 - w5 * x5 * z5).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("fourier vectors are shift eigenvectors") {
    auto [Z, X] = qudit_clock_shift(3);
    for (int k = 0; k < 3; ++k) {
        const StateVector f = fourier_state(3, k);
        const Eigen::VectorXcd lhs = X.mat * f.amplitudes;
        REQUIRE((lhs - omega_pow(-k) * f.amplitudes).norm() < 1e-15);
    }
}

TEST_CASE("embedding acts on a single tensor slot") {
    const HilbertSpace sp{qutrit(), fock(1)};
    auto [Z, X] = qudit_clock_shift(3);
    const Operator ze = embed(Z, sp, 0);
    Eigen::VectorXcd expected(6);
    expected << 1.0, 1.0, omega_pow(1), omega_pow(1), omega_pow(2), omega_pow(2);
    REQUIRE((dense(ze).diagonal() - expected).norm() < 1e-15);
    REQUIRE((dense(ze) - Eigen::MatrixXcd(expected.asDiagonal())).cwiseAbs().maxCoeff() <
            1e-15);

    const Operator ae = fock_annihilation(sp, 1);
    REQUIRE(max_abs(commutator(ze, ae).mat) < 1e-15);
}

TEST_CASE("truncated ladder commutator is the identity inside the cutoff") {
    const int N = 5;
    const HilbertSpace sp{fock(N)};
    const Operator a = fock_annihilation(sp, 0);
    const Eigen::MatrixXcd c = dense(commutator(a, adjoint_op(a)));
    for (int n = 0; n < N; ++n) REQUIRE(std::abs(c(n, n) - 1.0) < 1e-14);
    REQUIRE(std::abs(c(N, N) + double(N)) < 1e-14);  // top-row defect of the cutoff
    REQUIRE((c - Eigen::MatrixXcd(c.diagonal().asDiagonal())).cwiseAbs().maxCoeff() < 1e-15);

    const Eigen::MatrixXcd n_op = dense(fock_number(sp, 0));
    for (int n = 0; n <= N; ++n) REQUIRE(std::abs(n_op(n, n) - double(n)) < 1e-14);
}

TEST_CASE("two-mode ladders act independently") {
    const HilbertSpace sp{qutrit(), fock(3), fock(3)};
    const Operator a1 = fock_annihilation(sp, 1);
    const Operator a2 = fock_annihilation(sp, 2);
    REQUIRE(max_abs(commutator(a1, a2).mat) < 1e-15);
    REQUIRE(max_abs(commutator(a1, adjoint_op(a2)).mat) < 1e-15);

    // row-major flatten/unflatten round trip with the documented strides
    REQUIRE(sp.dim() == 48);
    REQUIRE(sp.stride(0) == 16);
    REQUIRE(sp.stride(1) == 4);
    REQUIRE(sp.stride(2) == 1);
    for (long idx = 0; idx < sp.dim(); ++idx) {
        const std::vector<int> occ = sp.unflatten(idx);
        REQUIRE(sp.flatten(occ) == idx);
    }
    REQUIRE(sp.flatten({2, 1, 3}) == 2 * 16 + 1 * 4 + 3);
}

TEST_CASE("hermiticity metadata is enforced at construction") {
    const HilbertSpace sp{fock(4)};
    Operator a = fock_annihilation(sp, 0);
    REQUIRE_THROWS_AS(make_operator(sp, a.mat, true), Error);
    const Operator n = fock_number(sp, 0);
    REQUIRE(n.hermitian);
}

TEST_CASE("parameter and space validation raises typed errors") {
    REQUIRE_THROWS_AS(fock(0), ValidationError);
    ModelParams p;
    p.omega = 0.0;
    REQUIRE_THROWS_AS(validate(p), ValidationError);
    p = ModelParams{};
    p.b_field = -0.1;
    REQUIRE_THROWS_AS(validate(p), ValidationError);
    p = ModelParams{};
    p.lambda = -1.0;
    REQUIRE_THROWS_AS(validate(p), ValidationError);
    REQUIRE_NOTHROW(validate(ModelParams{}));
}

TEST_CASE("fixed-precision formatting round trips and rejects non-finite values") {
    REQUIRE(format_g12(0.1) == "0.1");
    REQUIRE(format_g12(0.0) == "0");
    const double third = 1.0 / 3.0;
    // twelve significant digits: round trip is exact to ~0.5 ulp of the 12th digit
    REQUIRE(std::abs(std::stod(format_g12(third)) - third) < 1e-12);
    REQUIRE_THROWS_AS(format_g12(std::nan("")), Error);
    REQUIRE_THROWS_AS(format_g12(std::numeric_limits<double>::infinity()), Error);
}

TEST_CASE("exact cube roots of unity") {
    REQUIRE(omega_pow(0) == cplx(1.0, 0.0));
    REQUIRE(omega_pow(3) == cplx(1.0, 0.0));
    REQUIRE(omega_pow(-1) == std::conj(omega_pow(1)));
    REQUIRE(omega_pow(2) == omega_pow(-1));
    REQUIRE(std::abs(omega_pow(1) - std::polar(1.0, theta3)) < 1e-15);
    REQUIRE(omega_pow(1) + omega_pow(2) == cplx(-1.0, 0.0));
}

TEST_CASE("atomic text writes replace files whole") {
    const fs::path dir = temp_dir("io");
    const fs::path f = dir / "x.txt";
    write_text_atomic(f, "one\n");
    write_text_atomic(f, "two\n");
    std::ifstream in(f);
    std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    REQUIRE(s == "two\n");
    for (const auto& e : fs::directory_iterator(dir))
        REQUIRE(e.path().filename() == "x.txt");  // no stray temp files
}

TEST_CASE("flat config grammar: comments, blanks, trimming, last key wins") {
    const fs::path dir = temp_dir("cfg");
    const fs::path f = dir / "run.cfg";
    write_text_atomic(f,
                      "# header comment\n"
                      "\n"
                      "model = r2\n"
                      "  lambda=0.25  \n"
                      "model=alt\n");
    const auto kv = parse_config_file(f);
    REQUIRE(kv.size() == 2);
    REQUIRE(kv.at("model") == "alt");
    REQUIRE(kv.at("lambda") == "0.25");

    write_text_atomic(f, "model r2\n");  // no separator
    REQUIRE_THROWS_AS(parse_config_file(f), ValidationError);
    REQUIRE_THROWS_AS(parse_config_file(dir / "missing.cfg"), ValidationError);
}

TEST_CASE("parallel loops cover every index and propagate exceptions") {
    std::vector<int> hits(257, 0);
    parallel_for(257, [&](long i) { hits[static_cast<size_t>(i)] += 1; });
    for (int h : hits) REQUIRE(h == 1);
    REQUIRE_THROWS_AS(parallel_for(8,
                                   [&](long i) {
                                       if (i == 5) fail("boom");
                                   }),
                      Error);
    REQUIRE(thread_budget() >= 1);
}
