// ============================================================
// Dense linear-algebra kernels
// ============================================================

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include <ssvp/numerics.hpp>
#include <ssvp/rational.hpp>

#include "fixtures.hpp"
#include "oracles.hpp"

using ssvp::DenseMatrix;
using ssvp::Error;
using ssvp::SigmaList;

namespace {

DenseMatrix random_skew(std::mt19937_64& rng, int n, double scale) {
    std::uniform_real_distribution<double> dist(-scale, scale);
    DenseMatrix K(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            K(i, j) = dist(rng);
            K(j, i) = -K(i, j);
        }
    return K;
}

}  // namespace

TEST_CASE("singular values of small knowns") {
    const SigmaList si = ssvp::singular_values(DenseMatrix::identity(2));
    REQUIRE(si.size() == 2);
    CHECK(si[0] == Catch::Approx(1.0).margin(1e-14));
    CHECK(si[1] == Catch::Approx(1.0).margin(1e-14));

    // Rank-one column scaling: gram matrix has trace 25.
    const SigmaList sc = ssvp::singular_values(DenseMatrix{{3, 0}, {4, 0}});
    REQUIRE(sc.size() == 2);
    CHECK(sc[0] == Catch::Approx(5.0).margin(1e-12));
    CHECK(sc[1] == Catch::Approx(0.0).margin(1e-12));

    DenseMatrix bad(1, 2);
    bad(0, 1) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(ssvp::singular_values(bad), Error);
}

TEST_CASE("bordered orthogonal block has the golden-ratio spectrum") {
    const DenseMatrix A = fx::bordered_q();
    const SigmaList s = ssvp::singular_values(A);
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    REQUIRE(s.size() == 6);
    CHECK(std::abs(s[0] - phi) <= 1e-12);
    for (int i = 1; i <= 4; ++i) CHECK(std::abs(s[i] - 1.0) <= 1e-12);
    CHECK(std::abs(s[5] - 1.0 / phi) <= 1e-12);

    // Equivalent quadratic form of the extremes.
    CHECK(std::abs(s[0] * s[0] - (3.0 + std::sqrt(5.0)) / 2.0) <= 1e-12);
    CHECK(std::abs(s[5] * s[5] - (3.0 - std::sqrt(5.0)) / 2.0) <= 1e-12);
}

TEST_CASE("singular values are transpose invariant") {
    std::mt19937_64 rng(1001);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (int trial = 0; trial < 25; ++trial) {
        const int m = 1 + static_cast<int>(rng() % 5);
        const int n = 1 + static_cast<int>(rng() % 5);
        DenseMatrix A(m, n);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) A(i, j) = dist(rng);
        const SigmaList s = ssvp::singular_values(A);
        const SigmaList t = ssvp::singular_values(A.transpose());
        const int k = std::min(m, n);
        for (int i = 0; i < k; ++i)
            CHECK(std::abs(s[i] - t[i]) <= 1e-12 * std::max(1.0, s[0]));
    }
}

TEST_CASE("svd factors reconstruct the matrix") {
    const DenseMatrix A{{1, 2, 0}, {0, -1, 3}};
    const ssvp::SvdFactors f = ssvp::svd_factors(A);
    DenseMatrix D(2, 3);
    D(0, 0) = f.S[0];
    D(1, 1) = f.S[1];
    const DenseMatrix R = f.U * D * f.V.transpose();
    CHECK(R.approx_equal(A, 1e-12));
}

TEST_CASE("numerical rank on knowns and fixtures") {
    CHECK(ssvp::rank(DenseMatrix(3, 4)) == 0);
    CHECK(ssvp::rank(DenseMatrix::identity(5)) == 5);
    CHECK(ssvp::rank(DenseMatrix(2, 2, 1.0)) == 1);
    CHECK(ssvp::rank(fx::psi_a()) == 9);
    CHECK(ssvp::rank(fx::phi_a()) == 6);
    CHECK(ssvp::rank(fx::phi_b()) == 6);
}

TEST_CASE("numerical rank matches exact rank on an integer sweep") {
    std::mt19937_64 rng(4242);
    for (int trial = 0; trial < 1000; ++trial) {
        const int m = 1 + static_cast<int>(rng() % 8);
        const int n = 1 + static_cast<int>(rng() % 8);
        const DenseMatrix A = oracle::random_int_matrix(rng, m, n, -3, 3);
        const int exact = ssvp::exact_rank(ssvp::RationalMatrix::from_dense(A));
        CHECK(ssvp::rank(A) == exact);
    }
}

TEST_CASE("nullspace basics") {
    CHECK(ssvp::nullspace(DenseMatrix::identity(2)).cols() == 0);

    const DenseMatrix N = ssvp::nullspace(DenseMatrix{{1, 1}});
    REQUIRE(N.cols() == 1);
    CHECK(N(0, 0) == Catch::Approx(1.0 / std::sqrt(2.0)));
    CHECK(N(1, 0) == Catch::Approx(-1.0 / std::sqrt(2.0)));

    CHECK_THROWS_AS(ssvp::nullspace(DenseMatrix::identity(2), -1.0), Error);
}

TEST_CASE("nullspace of the dependent fixture contains the known vector") {
    // The nullspace is 2-dimensional; the known violating vector
    // must lie in its span, i.e. keep its norm under projection.
    const DenseMatrix N = ssvp::nullspace(fx::phi_b());
    REQUIRE(N.cols() == 2);
    const std::vector<double> v = fx::null_vector_b();
    std::vector<double> proj(8, 0.0);
    for (int c = 0; c < N.cols(); ++c) {
        double dot = 0.0;
        for (int i = 0; i < 8; ++i) dot += N(i, c) * v[i];
        for (int i = 0; i < 8; ++i) proj[i] += dot * N(i, c);
    }
    double vn = 0.0, pn = 0.0;
    for (int i = 0; i < 8; ++i) {
        vn += v[i] * v[i];
        pn += proj[i] * proj[i];
    }
    CHECK(std::sqrt(pn) == Catch::Approx(std::sqrt(vn)).epsilon(1e-12));

    // Each basis vector annihilates the matrix.
    const DenseMatrix prod = fx::phi_b() * N;
    CHECK(prod.max_abs() <= 1e-12);
}

TEST_CASE("symmetric eigenvalues ascend") {
    const std::vector<double> ev = ssvp::symmetric_eigenvalues(DenseMatrix{{2, 1}, {1, 2}});
    REQUIRE(ev.size() == 2);
    CHECK(ev[0] == Catch::Approx(1.0));
    CHECK(ev[1] == Catch::Approx(3.0));
    CHECK_THROWS_AS(ssvp::symmetric_eigenvalues(DenseMatrix(2, 3)), Error);
}

TEST_CASE("skew exponential on knowns") {
    CHECK(ssvp::expm_skew(DenseMatrix(3, 3)).approx_equal(DenseMatrix::identity(3), 1e-15));

    const double theta = std::acos(-1.0) / 2.0;
    DenseMatrix K(2, 2);
    K(0, 1) = theta;
    K(1, 0) = -theta;
    const DenseMatrix R = ssvp::expm_skew(K);
    CHECK(std::abs(R(0, 0)) <= 1e-14);
    CHECK(std::abs(R(0, 1) - 1.0) <= 1e-14);
    CHECK(std::abs(R(1, 0) + 1.0) <= 1e-14);
    CHECK(std::abs(R(1, 1)) <= 1e-14);

    CHECK_THROWS_AS(ssvp::expm_skew(DenseMatrix{{0, 1}, {1, 0}}), Error);
    CHECK_THROWS_AS(ssvp::expm_skew(DenseMatrix(2, 3)), Error);
}

TEST_CASE("skew exponential invariants and oracle agreement") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 5);
        const DenseMatrix K = random_skew(rng, n, 2.0);
        const DenseMatrix Q = ssvp::expm_skew(K);

        const DenseMatrix G = Q.transpose() * Q - DenseMatrix::identity(n);
        CHECK(G.frobenius_norm() <= 1e-12 * n);

        const DenseMatrix Qi = ssvp::expm_skew(K * -1.0);
        CHECK((Q * Qi).approx_equal(DenseMatrix::identity(n), 1e-12));

        const DenseMatrix T = oracle::oracle_expm(K);
        CHECK(Q.approx_equal(T, 1e-11 * std::max(1.0, T.max_abs())));
    }
}

TEST_CASE("polar factor restores orthogonality") {
    std::mt19937_64 rng(8);
    const DenseMatrix K = random_skew(rng, 4, 1.0);
    DenseMatrix Q = ssvp::expm_skew(K);
    // Contaminate and repair.
    Q(0, 0) += 1e-4;
    const DenseMatrix P = ssvp::polar_orthogonal(Q);
    CHECK((P.transpose() * P).approx_equal(DenseMatrix::identity(4), 1e-12));
    CHECK((P - Q).max_abs() <= 1e-3);
}

TEST_CASE("jacobi reconstruction on knowns") {
    DenseMatrix one(1, 1);
    one(0, 0) = 1.0;
    CHECK(ssvp::lanczos_jacobi({1.0}, one)(0, 0) == Catch::Approx(1.0));

    DenseMatrix start(2, 1);
    start(0, 0) = start(1, 0) = 1.0 / std::sqrt(2.0);
    const DenseMatrix T = ssvp::lanczos_jacobi({0.0, 2.0}, start);
    CHECK(T(0, 0) == Catch::Approx(1.0).margin(1e-12));
    CHECK(T(0, 1) == Catch::Approx(1.0).margin(1e-12));
    CHECK(T(1, 0) == Catch::Approx(1.0).margin(1e-12));
    CHECK(T(1, 1) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("jacobi reconstruction recovers a requested spectrum") {
    const std::vector<double> eigs{9.0, 4.0, 1.0, 0.0};
    DenseMatrix start(4, 1, 0.5);
    const DenseMatrix T = ssvp::lanczos_jacobi(eigs, start);

    // Tridiagonal with positive off-diagonal.
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (std::abs(i - j) > 1) CHECK(std::abs(T(i, j)) <= 1e-12);
    for (int i = 0; i + 1 < 4; ++i) {
        CHECK(T(i, i + 1) > 0.0);
        CHECK(T(i, i + 1) == Catch::Approx(T(i + 1, i)));
    }

    std::vector<double> got = ssvp::symmetric_eigenvalues(T);
    std::sort(got.rbegin(), got.rend());
    for (int i = 0; i < 4; ++i) CHECK(std::abs(got[i] - eigs[i]) <= 1e-10 * 9.0);
}

TEST_CASE("jacobi reconstruction rejects bad input") {
    DenseMatrix start(2, 1);
    start(0, 0) = start(1, 0) = 1.0 / std::sqrt(2.0);
    CHECK_THROWS_AS(ssvp::lanczos_jacobi({}, DenseMatrix(0, 1)), Error);
    try {
        ssvp::lanczos_jacobi({1.0, 1.0}, start);
        FAIL("expected a throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ssvp::errkind::degenerate_spectrum);
    }
    DenseMatrix zero_entry(2, 1);
    zero_entry(0, 0) = 1.0;
    CHECK_THROWS_AS(ssvp::lanczos_jacobi({1.0, 2.0}, zero_entry), Error);
    DenseMatrix long_start(2, 1, 1.0);
    CHECK_THROWS_AS(ssvp::lanczos_jacobi({1.0, 2.0}, long_start), Error);
    CHECK_THROWS_AS(ssvp::lanczos_jacobi({1.0, 2.0}, DenseMatrix(3, 1, 0.5)), Error);
}

TEST_CASE("commuting dimension counts matching eigenvalue pairs") {
    const DenseMatrix I2 = DenseMatrix::identity(2);
    CHECK(ssvp::sylvester_commuting_dim(I2, I2, 1e-9) == 4);
    CHECK(ssvp::sylvester_commuting_dim(DenseMatrix{{1, 0}, {0, 2}}, DenseMatrix{{3, 0}, {0, 4}},
                                        1e-9) == 0);
    CHECK(ssvp::sylvester_commuting_dim(DenseMatrix{{1, 0}, {0, 2}}, DenseMatrix{{2, 0}, {0, 5}},
                                        1e-9) == 1);
}

TEST_CASE("finite-difference jacobian") {
    const ssvp::VectorFn ident = [](const std::vector<double>& x) { return x; };
    const DenseMatrix J = ssvp::fd_jacobian(ident, {1.0, 2.0, 3.0}, 1e-6);
    CHECK(J.approx_equal(DenseMatrix::identity(3), 1e-9));

    const ssvp::VectorFn square = [](const std::vector<double>& x) {
        return std::vector<double>{x[0] * x[0]};
    };
    const DenseMatrix Js = ssvp::fd_jacobian(square, {3.0}, 1e-5);
    CHECK(std::abs(Js(0, 0) - 6.0) <= 1e-9);

    CHECK_THROWS_AS(ssvp::fd_jacobian(ident, {1.0}, 0.0), Error);
}

TEST_CASE("finite differences match the analytic exponential derivative") {
    // f maps the below-diagonal coordinates of a skew K to
    // vec(e^K A); at K = O the derivative in the t-th coordinate is
    // vec((E_ij - E_ji) A).
    const DenseMatrix A{{1, 2, 0, 1}, {0, 1, 3, 0}, {2, 0, 1, 1}};
    const int m = A.rows(), n = A.cols();
    const ssvp::VectorFn f = [&](const std::vector<double>& x) {
        DenseMatrix K(m, m);
        int t = 0;
        for (int j = 0; j < m; ++j)
            for (int i = j + 1; i < m; ++i, ++t) {
                K(i, j) = x[t];
                K(j, i) = -x[t];
            }
        const DenseMatrix X = ssvp::expm_skew(K) * A;
        std::vector<double> out(static_cast<std::size_t>(m) * n);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(i) * n + j] = X(i, j);
        return out;
    };
    const DenseMatrix J = ssvp::fd_jacobian(f, std::vector<double>(3, 0.0), 1e-6);
    int t = 0;
    for (int j = 0; j < m; ++j)
        for (int i = j + 1; i < m; ++i, ++t) {
            DenseMatrix K(m, m);
            K(i, j) = 1.0;
            K(j, i) = -1.0;
            const DenseMatrix dA = K * A;
            for (int r = 0; r < m; ++r)
                for (int c = 0; c < n; ++c) CHECK(std::abs(J(r * n + c, t) - dA(r, c)) <= 1e-6);
        }
}
