// ============================================================
// Acceptance harness: one PASS/FAIL line per shipped guarantee
// ============================================================
//
// Each criterion is timed and independent; the process exit code
// is the number of failed criteria.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <ssvp/classify.hpp>
#include <ssvp/error.hpp>
#include <ssvp/flow.hpp>
#include <ssvp/matrix.hpp>
#include <ssvp/numerics.hpp>
#include <ssvp/pattern.hpp>
#include <ssvp/rational.hpp>
#include <ssvp/realize.hpp>
#include <ssvp/verify.hpp>

#include "fixtures.hpp"

namespace {

using ssvp::CheckMode;
using ssvp::DenseMatrix;
using ssvp::Pattern;
using ssvp::SigmaList;

struct Failure {
    std::string msg;
};

void require(bool ok, const std::string& msg) {
    if (!ok) throw Failure{msg};
}

int g_failures = 0;

void criterion(int number, const char* name, double budget_seconds,
               const std::function<void()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    std::string note;
    try {
        body();
    } catch (const Failure& f) {
        pass = false;
        note = f.msg;
    } catch (const ssvp::Error& e) {
        pass = false;
        note = e.kind() + ": " + e.what();
    } catch (const std::exception& e) {
        pass = false;
        note = e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (pass && budget_seconds > 0.0 && elapsed > budget_seconds) {
        std::ostringstream os;
        os << "took " << elapsed << "s, budget " << budget_seconds << "s";
        pass = false;
        note = os.str();
    }
    std::printf("%s  [%7.3fs]  %02d  %s%s%s\n", pass ? "PASS" : "FAIL", elapsed, number, name,
                note.empty() ? "" : "  -- ", note.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

bool bitwise_equal(const DenseMatrix& X, const DenseMatrix& Y) {
    if (X.rows() != Y.rows() || X.cols() != Y.cols()) return false;
    for (int i = 0; i < X.rows(); ++i)
        for (int j = 0; j < X.cols(); ++j)
            if (X(i, j) != Y(i, j)) return false;
    return true;
}

double max_abs_diff(const DenseMatrix& X, const DenseMatrix& Y) {
    double worst = 0.0;
    for (int i = 0; i < X.rows(); ++i)
        for (int j = 0; j < X.cols(); ++j) worst = std::max(worst, std::abs(X(i, j) - Y(i, j)));
    return worst;
}

DenseMatrix random_integer_matrix(std::mt19937& rng, int max_rows, int max_cols) {
    std::uniform_int_distribution<int> rows(1, max_rows), cols(1, max_cols), entry(-2, 2);
    DenseMatrix A(rows(rng), cols(rng));
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j) A(i, j) = entry(rng);
    return A;
}

std::vector<int> random_permutation(std::mt19937& rng, int n) {
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
    return p;
}

std::vector<int> random_signs(std::mt19937& rng, int n) {
    std::uniform_int_distribution<int> coin(0, 1);
    std::vector<int> s(static_cast<std::size_t>(n));
    for (int& v : s) v = coin(rng) ? 1 : -1;
    return s;
}

ssvp::EquivalenceOp random_op(std::mt19937& rng, const DenseMatrix& A, int kind) {
    switch (kind) {
        case 0: return ssvp::EquivalenceOp::transpose();
        case 1: return ssvp::EquivalenceOp::row_perm(random_permutation(rng, A.rows()));
        case 2: return ssvp::EquivalenceOp::col_perm(random_permutation(rng, A.cols()));
        case 3: return ssvp::EquivalenceOp::row_signs(random_signs(rng, A.rows()));
        default: return ssvp::EquivalenceOp::col_signs(random_signs(rng, A.cols()));
    }
}

// ------------------------------------------------------------
// Criteria bodies
// ------------------------------------------------------------

void verification_matrices_match() {
    require(bitwise_equal(ssvp::build_psi(fx::example_a()).matrix, fx::psi_a()),
            "psi of example A differs from the worked table");
    require(bitwise_equal(ssvp::build_phi(fx::example_a()).matrix, fx::phi_a()),
            "phi of example A differs from the worked table");
    require(bitwise_equal(ssvp::build_psi(fx::example_b()).matrix, fx::psi_b()),
            "psi of example B differs from the worked table");
    require(bitwise_equal(ssvp::build_phi(fx::example_b()).matrix, fx::phi_b()),
            "phi of example B differs from the worked table");
}

void example_b_refuted_exactly() {
    const DenseMatrix B = fx::example_b();
    const ssvp::SsvpCertificate cert = ssvp::check_ssvp(B, CheckMode::exact);
    require(!cert.has_ssvp, "example B was not refuted");
    for (double r : cert.residuals) require(r == 0.0, "a residual is not exactly zero");

    // The violating matrix must span the same line as the known
    // null direction scattered into the zero positions of B.
    const std::vector<double> v = fx::null_vector_b();
    DenseMatrix W(B.rows(), B.cols());
    std::size_t k = 0;
    for (int i = 0; i < B.rows(); ++i)
        for (int j = 0; j < B.cols(); ++j)
            if (B(i, j) == 0.0) W(i, j) = v.at(k++);
    double dot = 0.0, wnorm = 0.0, ynorm = 0.0;
    for (int i = 0; i < B.rows(); ++i)
        for (int j = 0; j < B.cols(); ++j) {
            dot += cert.Y(i, j) * W(i, j);
            wnorm += W(i, j) * W(i, j);
            ynorm += cert.Y(i, j) * cert.Y(i, j);
        }
    const double cosine = std::abs(dot) / std::sqrt(wnorm * ynorm);
    require(cosine >= 1.0 - 1e-12, "violating matrix is not parallel to the known direction");
}

void example_a_pivot_rows() {
    const ssvp::SsvpCertificate cert = ssvp::check_ssvp(fx::example_a(), CheckMode::exact);
    require(cert.has_ssvp, "example A was not confirmed");
    const std::vector<int> want{1, 2, 3, 4, 5, 7};
    require(cert.pivot_rows == want, "pivot rows differ from {1,2,3,4,5,7}");

    const DenseMatrix phi = fx::phi_a();
    require(ssvp::exact_rank(ssvp::RationalMatrix::from_dense(phi)) == 6,
            "phi of example A does not have rank 6");
    DenseMatrix sub(6, 6);
    for (int r = 0; r < 6; ++r)
        for (int c = 0; c < 6; ++c) sub(r, c) = phi(want[static_cast<std::size_t>(r)] - 1, c);
    require(ssvp::exact_rank(ssvp::RationalMatrix::from_dense(sub)) == 6,
            "pivot row submatrix is singular");
}

void rules_agree_with_decision() {
    std::mt19937 rng(20240814u);
    int decided = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const DenseMatrix A = random_integer_matrix(rng, 4, 5);
        const ssvp::SsvpCertificate cert = ssvp::check_ssvp(A);
        const ssvp::ClosedFormVerdict v = ssvp::classify_ssvp(A);
        if (v.verdict != ssvp::Verdict::no_rule) {
            ++decided;
            const bool rule_says_has = v.verdict == ssvp::Verdict::has_ssvp;
            if (rule_says_has != cert.has_ssvp) {
                std::ostringstream os;
                os << "trial " << trial << ": rule " << v.rule << " says "
                   << to_string(v.verdict) << " but the decision procedure says "
                   << cert.verdict();
                require(false, os.str());
            }
        }
        if (cert.has_ssvp) {
            const Pattern P = ssvp::pattern_of(A);
            require(ssvp::term_rank(P) == std::min(A.rows(), A.cols()),
                    "a matrix with the property has deficient term rank");
        }
    }
    require(decided >= 700, "rule chain decided fewer than 700 of 1000 matrices");
}

void equivalence_preserves_verdict() {
    std::mt19937 rng(777001u);
    for (int trial = 0; trial < 200; ++trial) {
        const DenseMatrix A = random_integer_matrix(rng, 4, 4);
        const bool before = ssvp::check_ssvp(A).has_ssvp;
        const int kind = trial % 5;
        const DenseMatrix T = ssvp::equivalence_transform(A, random_op(rng, A, kind));
        require(ssvp::check_ssvp(T).has_ssvp == before,
                "verdict changed under an equivalence operation");
    }
    for (int trial = 0; trial < 3; ++trial) {
        DenseMatrix A = random_integer_matrix(rng, 4, 4);
        const bool before = ssvp::check_ssvp(A).has_ssvp;
        std::uniform_int_distribution<int> pick(0, 4);
        for (int step = 0; step < 4; ++step)
            A = ssvp::equivalence_transform(A, random_op(rng, A, pick(rng)));
        require(ssvp::check_ssvp(A).has_ssvp == before,
                "verdict changed under a composite of equivalence operations");
    }
}

void path_realizations() {
    std::mt19937 rng(61803u);
    std::uniform_int_distribution<int> size(1, 8);
    std::uniform_real_distribution<double> value(0.1, 10.0);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = size(rng);
        std::vector<double> vals;
        while (static_cast<int>(vals.size()) < n) {
            const double x = value(rng);
            bool fresh = true;
            for (double y : vals) fresh = fresh && std::abs(x - y) > 1e-3;
            if (fresh) vals.push_back(x);
        }
        std::sort(vals.rbegin(), vals.rend());
        const ssvp::RealizationResult res = ssvp::realize_path(SigmaList(vals));
        require(res.sigma_error <= 1e-10, "path realization missed the requested values");
        require(res.pattern_ok, "path realization left the bidiagonal pattern");
        const DenseMatrix& B = res.matrix;
        const DenseMatrix G = B.transpose() * B;
        double scale = 0.0;
        for (int i = 0; i < B.rows(); ++i)
            for (int j = 0; j < B.cols(); ++j) scale += B(i, j) * B(i, j);
        for (int i = 0; i < G.rows(); ++i)
            for (int j = 0; j < G.cols(); ++j)
                if (std::abs(i - j) > 1)
                    require(std::abs(G(i, j)) <= 1e-10 * scale, "Gram matrix is not tridiagonal");
    }
}

void cycle3_realizations() {
    const Pattern c6 = ssvp::c6_pattern();
    const std::vector<std::vector<double>> feasible{
        {3, 2, 1}, {2, 1, 0}, {1, 1, 0}, {2, 1, 1}, {2, 2, 1}};
    for (const auto& vals : feasible) {
        const ssvp::RealizationResult res = ssvp::realize_c6(SigmaList(vals));
        require(res.sigma_error <= 1e-8, "feasible list missed by more than 1e-8");
        require(ssvp::pattern_of(res.matrix) == c6, "realization left the cycle pattern");
    }
    const std::vector<std::pair<std::vector<double>, std::string>> infeasible{
        {{1, 1, 1}, "sigma1 == sigma3"},
        {{1, 0, 0}, "sigma2 == 0"},
        {{2, 1.5, 2}, "sigma1 == sigma3"}};
    for (const auto& [vals, msg] : infeasible) {
        try {
            ssvp::realize_c6(SigmaList(vals));
            require(false, "an infeasible list was accepted");
        } catch (const ssvp::Error& e) {
            require(e.kind() == ssvp::errkind::infeasible, "wrong error kind");
            require(e.what() == msg, "wrong refusal message: " + std::string(e.what()));
        }
    }
}

void superpattern_fills_bordered_diagonal() {
    const DenseMatrix base{{1, 0, 0, 0}, {0, 2, 0, 0}, {0, 0, 3, 0}};
    const Pattern full = Pattern::full(3, 4);
    const ssvp::RealizationResult res = ssvp::superpattern_realize(base, full);
    require(res.pattern_ok, "result does not carry the full pattern");
    require(ssvp::pattern_of(res.matrix) == full, "result has a residual zero entry");
    require(res.sigma_error <= 1e-8, "singular values moved by more than 1e-8");
    require(res.iterations <= 100, "solver needed more than 100 iterations");
}

void bordered_block_splits_multiplicities() {
    const DenseMatrix Q = fx::bordered_q();
    const double gold = (1.0 + std::sqrt(5.0)) / 2.0;
    const SigmaList sig = ssvp::singular_values(Q);
    const std::vector<double> expected{gold, 1.0, 1.0, 1.0, 1.0, 1.0 / gold};
    for (std::size_t i = 0; i < expected.size(); ++i)
        require(std::abs(sig[i] - expected[i]) <= 1e-12,
                "bordered block has unexpected singular values");

    const ssvp::RealizationResult one =
        ssvp::bifurcate(Q, SigmaList{gold, 1.02, 1.0, 1.0, 1.0, 1.0 / gold});
    require(one.pattern_ok, "first split left the pattern");
    require(one.sigma_error <= 1e-8, "first split missed its target");
    require(one.achieved_sigmas.multiplicity_list(1e-6) == std::vector<int>{1, 1, 3, 1},
            "first split has the wrong multiplicity list");

    const ssvp::RealizationResult two =
        ssvp::bifurcate(Q, SigmaList{gold, 1.06, 1.03, 1.00, 0.97, 1.0 / gold});
    require(two.pattern_ok, "second split left the pattern");
    require(two.sigma_error <= 1e-8, "second split missed its target");
    require(two.achieved_sigmas.multiplicity_list(1e-6) == std::vector<int>{1, 1, 1, 1, 1, 1},
            "second split has the wrong multiplicity list");
}

void tangent_test_agrees() {
    std::mt19937 rng(515253u);
    for (int trial = 0; trial < 500; ++trial) {
        const DenseMatrix A = random_integer_matrix(rng, 5, 6);
        const bool via_tangent = ssvp::ssvp_via_tangent(A);
        const bool via_columns = ssvp::check_ssvp(A).has_ssvp;
        if (via_tangent != via_columns) {
            std::ostringstream os;
            os << "trial " << trial << ": tangent test says " << (via_tangent ? "has" : "lacks")
               << ", column test says " << (via_columns ? "has" : "lacks");
            require(false, os.str());
        }
    }
}

void superpattern_refuses_without_property() {
    const DenseMatrix base = DenseMatrix::identity(2);
    const Pattern target = ssvp::parse_pattern("11\n01");
    try {
        ssvp::superpattern_realize(base, target);
        require(false, "embedding from a base without the property was accepted");
    } catch (const ssvp::Error& e) {
        require(e.kind() == ssvp::errkind::ssvp_required,
                "wrong error kind: " + std::string(e.kind()));
    }
}

void closed_form_directions_liberate() {
    std::mt19937 rng(112358u);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double a = coeff(rng), b = coeff(rng), c = coeff(rng), d = coeff(rng);
        const DenseMatrix N{{a, b, 0}, {0, 0, c}, {0, 0, d}};
        const DenseMatrix K{{0, (d * d - b * b) * c, (a * a - c * c) * d},
                            {(b * b - d * d) * c, 0, 0},
                            {(c * c - a * a) * d, 0, 0}};
        const DenseMatrix L{{0, 0, (b * b - d * d) * a},
                            {0, 0, (c * c - a * a) * b},
                            {(d * d - b * b) * a, (a * a - c * c) * b, 0}};
        const double t = a * a + b * b - c * c - d * d;
        const DenseMatrix want{{0, 0, 0}, {0, t * b * c, 0}, {-t * a * d, 0, 0}};
        require(max_abs_diff(K * N + N * L, want) <= 1e-12,
                "two-zero-column direction identity failed");
    }
    for (int trial = 0; trial < 20; ++trial) {
        double a = coeff(rng);
        while (std::abs(a) < 0.2) a = coeff(rng);
        const double b = coeff(rng), c = coeff(rng);
        const DenseMatrix M{{a, b, 0}, {0, c, 0}, {0, 0, 1}};
        const DenseMatrix K{{0, 0, -1}, {0, 0, 0}, {1, 0, 0}};
        const DenseMatrix L{{0, 0, (1 - b * b) / a},
                            {0, 0, b},
                            {(b * b - 1) / a, -b, 0}};
        const DenseMatrix want{{0, 0, 0}, {0, 0, b * c}, {(a * a + b * b - 1) / a, 0, 0}};
        require(max_abs_diff(K * M + M * L, want) <= 1e-12,
                "triangular-block direction identity failed");
    }

    const Pattern c6 = ssvp::c6_pattern();

    const DenseMatrix N0{{2, 1, 0}, {0, 0, 1}, {0, 0, 1}};
    const Pattern wanted = ssvp::parse_pattern("000\n010\n100");
    const DenseMatrix D = ssvp::liberation_direction(N0, wanted);
    const ssvp::RealizationResult walkN = ssvp::liberate(N0, D);
    require(walkN.pattern_ok && ssvp::pattern_of(walkN.matrix) == c6,
            "liberation from the two-zero-column form missed the cycle pattern");
    require(walkN.sigma_error <= 1e-8,
            "liberation from the two-zero-column form moved the singular values");

    const DenseMatrix M0{{2, 1, 0}, {0, 3, 0}, {0, 0, 1}};
    const DenseMatrix D4{{0, 0, 0}, {0, 0, 3}, {2, 0, 0}};
    const ssvp::RealizationResult walkM = ssvp::liberate(M0, D4);
    require(walkM.pattern_ok && ssvp::pattern_of(walkM.matrix) == c6,
            "liberation from the triangular form missed the cycle pattern");
    require(walkM.sigma_error <= 1e-8,
            "liberation from the triangular form moved the singular values");
}

}  // namespace

int main() {
    std::printf("ssvp acceptance checks\n");
    std::printf("----------------------\n");
    criterion(1, "verification matrices match the worked 3x4 examples bit for bit", 0.1,
              verification_matrices_match);
    criterion(2, "worked example B is refuted exactly along the known null direction", 0.0,
              example_b_refuted_exactly);
    criterion(3, "exact elimination confirms example A with pivot rows {1,2,3,4,5,7}", 0.0,
              example_a_pivot_rows);
    criterion(4, "closed-form rules agree with the decision procedure on 1000 matrices", 30.0,
              rules_agree_with_decision);
    criterion(5, "equivalence operations preserve the verdict", 0.0,
              equivalence_preserves_verdict);
    criterion(6, "bidiagonal path realizations hit prescribed singular values", 5.0,
              path_realizations);
    criterion(7, "3x3 cycle realizations solve exactly the feasible lists", 0.0,
              cycle3_realizations);
    criterion(8, "superpattern embedding fills a bordered diagonal to a full pattern", 1.0,
              superpattern_fills_bordered_diagonal);
    criterion(9, "bordered orthogonal block splits singular value multiplicities on demand", 0.0,
              bordered_block_splits_multiplicities);
    criterion(10, "tangent-space dimension test agrees with the decision procedure", 0.0,
              tangent_test_agrees);
    criterion(11, "superpattern embedding refuses a base without the property", 0.0,
              superpattern_refuses_without_property);
    criterion(12, "closed-form tangent directions drive liberation onto the cycle pattern", 0.0,
              closed_form_directions_liberate);
    std::printf("----------------------\n");
    std::printf("%d of 12 criteria passed\n", 12 - g_failures);
    return g_failures;
}
