#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <ssvp/error.hpp>
#include <ssvp/flow.hpp>
#include <ssvp/matrix.hpp>
#include <ssvp/numerics.hpp>
#include <ssvp/pattern.hpp>

namespace ssvp {

// ============================================================
// Canonical patterns
// ============================================================

/**
 * Staircase pattern of the n x (n+1) path realizer: ones at
 * (i, i) and (i, i+1), whose bigraph is a path on 2n+1 vertices.
 */
inline Pattern path_pattern(int n) {
    if (n < 1) throw Error(errkind::invalid_input, "path pattern order must be at least 1");
    Pattern p(n, n + 1);
    for (int i = 0; i < n; ++i) {
        p(i, i) = 1;
        p(i, i + 1) = 1;
    }
    return p;
}

/** The 3x3 pattern whose bigraph is a 6-cycle. */
inline Pattern c6_pattern() {
    return Pattern{{1, 1, 0}, {0, 1, 1}, {1, 0, 1}};
}

/**
 * The n x n staircase cycle pattern, n >= 2: ones at (i, i) and
 * (i+1, i) down the first n-1 columns, plus (n-1, n-1) and (0, n-1).
 * Every row and column holds exactly two ones and the bigraph is a
 * single 2n-cycle.
 */
inline Pattern cycle_pattern(int n) {
    if (n < 2) throw Error(errkind::invalid_input, "cycle pattern order must be at least 2");
    Pattern p(n, n);
    for (int i = 0; i + 1 < n; ++i) {
        p(i, i) = 1;
        p(i + 1, i) = 1;
    }
    p(n - 1, n - 1) = 1;
    p(0, n - 1) = 1;
    return p;
}

namespace detail {

/** Rejects lists with a nonpositive or relatively repeated value. */
inline void require_distinct_positive(const SigmaList& sig, const char* who) {
    const int n = static_cast<int>(sig.size());
    double vmax = 0.0;
    for (int i = 0; i < n; ++i) {
        if (!std::isfinite(sig[i]))
            throw Error(errkind::invalid_input, std::string(who) + ": values must be finite");
        if (!(sig[i] > 0.0))
            throw Error(errkind::infeasible, std::string(who) + ": values must all be positive");
        vmax = std::max(vmax, sig[i]);
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(sig[i] - sig[j]) <= 1e-12 * vmax)
                throw Error(errkind::infeasible, std::string(who) + ": values must be distinct");
}

}  // namespace detail

// ============================================================
// Path realizer
// ============================================================

/**
 * Builds the n x (n+1) staircase matrix with the requested singular
 * values, which must be distinct and positive.
 *
 * The spectrum {sigma_i^2} plus an appended 0 is turned into a Jacobi
 * matrix M by lanczos_jacobi from a uniform unit start vector.  M then
 * factors as B^T B with B in staircase form: with d_i the leading i x i
 * principal minor of M (three-term recurrence d_i = m_ii d_{i-1} -
 * m_{i,i-1}^2 d_{i-2}), the entries are b_ii = sqrt(d_i / d_{i-1}) and
 * b_{i,i+1} = m_{i,i+1} / b_ii.  The appended zero eigenvalue makes the
 * truncation after row n exact, so B has exactly the requested values.
 */
inline RealizationResult realize_path(const SigmaList& sigmas) {
    const int n = static_cast<int>(sigmas.size());
    if (n == 0) throw Error(errkind::invalid_input, "realize_path needs at least one value");
    detail::require_distinct_positive(sigmas, "realize_path");

    std::vector<double> eigs(static_cast<std::size_t>(n) + 1, 0.0);
    for (int i = 0; i < n; ++i) eigs[static_cast<std::size_t>(i)] = sigmas[i] * sigmas[i];
    DenseMatrix start(n + 1, 1);
    const double u = 1.0 / std::sqrt(static_cast<double>(n + 1));
    for (int i = 0; i <= n; ++i) start(i, 0) = u;
    const DenseMatrix M = lanczos_jacobi(eigs, start);

    std::vector<double> d(static_cast<std::size_t>(n) + 1, 1.0);
    d[1] = M(0, 0);
    for (int i = 2; i <= n; ++i)
        d[static_cast<std::size_t>(i)] = M(i - 1, i - 1) * d[static_cast<std::size_t>(i) - 1] -
                                         M(i - 1, i - 2) * M(i - 1, i - 2) *
                                             d[static_cast<std::size_t>(i) - 2];

    DenseMatrix B(n, n + 1);
    for (int i = 1; i <= n; ++i) {
        const double ratio = d[static_cast<std::size_t>(i)] / d[static_cast<std::size_t>(i) - 1];
        if (!(ratio > 0.0))
            throw Error(errkind::numerical_breakdown,
                        "nonpositive principal minor ratio in the path factorization");
        B(i - 1, i - 1) = std::sqrt(ratio);
        B(i - 1, i) = M(i - 1, i) / B(i - 1, i - 1);
    }

    RealizationResult out;
    out.matrix = B;
    out.achieved_sigmas = singular_values(B);
    out.sigma_error = out.achieved_sigmas.max_relative_deviation(sigmas.sorted());
    out.method = "path";
    try {
        out.pattern_ok = (pattern_of(B) == path_pattern(n));
    } catch (const Error&) {
        out.pattern_ok = false;
    }
    return out;
}

// ============================================================
// Row-orthonormal scaling
// ============================================================

/**
 * Returns D * Q with D = diag(sigmas) for a row-orthonormal Q.  Since
 * (DQ)(DQ)^T = D^2, the singular values are exactly the sigmas, and
 * positive scaling leaves the pattern of Q untouched.
 */
inline RealizationResult realize_orthonormal_scaled(const DenseMatrix& Q,
                                                    const SigmaList& sigmas) {
    if (Q.rows() == 0 || Q.cols() == 0)
        throw Error(errkind::invalid_input, "empty matrix");
    detail::require_finite(Q, "matrix");
    const int m = Q.rows();
    if (static_cast<int>(sigmas.size()) != m)
        throw Error(errkind::dimension_mismatch, "need one singular value per row of Q");

    double dev = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            double dot = 0.0;
            for (int k = 0; k < Q.cols(); ++k) dot += Q(i, k) * Q(j, k);
            dev = std::max(dev, std::abs(dot - (i == j ? 1.0 : 0.0)));
        }
    if (dev > 1e-10)
        throw Error(errkind::invalid_input, "matrix rows are not orthonormal");
    for (int i = 0; i < m; ++i)
        if (!std::isfinite(sigmas[i]) || !(sigmas[i] > 0.0))
            throw Error(errkind::invalid_input, "scaling values must be positive");

    DenseMatrix out(m, Q.cols());
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < Q.cols(); ++j) out(i, j) = sigmas[i] * Q(i, j);

    RealizationResult res;
    res.matrix = out;
    res.achieved_sigmas = singular_values(out);
    res.sigma_error = res.achieved_sigmas.max_relative_deviation(sigmas.sorted());
    res.method = "orthonormal-scaled";
    try {
        res.pattern_ok = (pattern_of(out) == pattern_of(Q));
    } catch (const Error&) {
        res.pattern_ok = false;
    }
    return res;
}

/**
 * A k x k orthogonal matrix with no zero entries: [1] for k = 1, the
 * normalized two-point sign matrix for k = 2, and the reflection
 * I - (2/k)J for k >= 3, whose entries 1 - 2/k and -2/k never vanish.
 */
inline DenseMatrix nowhere_zero_orthogonal(int k) {
    if (k < 1) throw Error(errkind::invalid_input, "order must be at least 1");
    if (k == 1) {
        DenseMatrix q(1, 1);
        q(0, 0) = 1.0;
        return q;
    }
    if (k == 2) {
        const double s = 1.0 / std::sqrt(2.0);
        return DenseMatrix{{s, s}, {s, -s}};
    }
    DenseMatrix q(k, k);
    const double off = -2.0 / static_cast<double>(k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) q(i, j) = (i == j ? 1.0 + off : off);
    return q;
}

// ============================================================
// Distinct-value realizer for term-rank-full patterns
// ============================================================

/**
 * Realizes distinct positive singular values on any pattern whose
 * term-rank equals the short dimension.  A maximum matching carries
 * diag(sigmas) placed entry by entry, which is a row-and-column
 * permutation of a bordered diagonal and therefore has the SSVP; the
 * continuation solver then spreads it over the full pattern.
 */
inline RealizationResult realize_distinct(const Pattern& P, const SigmaList& sigmas,
                                          const SolverConfig& config = {}) {
    if (P.rows() > P.cols()) {
        RealizationResult res = realize_distinct(P.transpose(), sigmas, config);
        res.matrix = res.matrix.transpose();
        res.achieved_sigmas = singular_values(res.matrix);
        try {
            res.pattern_ok = (pattern_of(res.matrix) == P);
        } catch (const Error&) {
            res.pattern_ok = false;
        }
        return res;
    }
    const int m = P.rows();
    if (static_cast<int>(sigmas.size()) != m)
        throw Error(errkind::dimension_mismatch,
                    "need exactly one singular value per row of the pattern");
    detail::require_distinct_positive(sigmas, "realize_distinct");

    const TermRankResult tr = term_rank_with_matching(P);
    if (tr.value < m)
        throw Error(errkind::infeasible,
                    "pattern term-rank " + std::to_string(tr.value) +
                        " is below the number of singular values " + std::to_string(m));

    const SigmaList want = sigmas.sorted();
    DenseMatrix A0(m, P.cols());
    int k = 0;
    for (const auto& [r, c] : tr.matching) A0(r, c) = want[k++];

    RealizationResult res = superpattern_realize(A0, P, config);
    res.method = "distinct";
    res.sigma_error = res.achieved_sigmas.max_relative_deviation(want);
    return res;
}

// ============================================================
// The 6-cycle pattern
// ============================================================

/**
 * Realizes sigma_1, sigma_2, sigma_3 on the 6-cycle pattern.  The list
 * is taken positionally: it is infeasible exactly when sigma_2 = 0 or
 * sigma_1 = sigma_3 (relative tolerance 1e-12).  Four constructions
 * cover the feasible lists, dispatched on the sorted values: distinct
 * positive values delegate to realize_distinct; one zero with distinct
 * positives walks a tangent liberation from a two-block start; an equal
 * pair with a zero is an explicit closed form; and an equal positive
 * pair liberates a scaled bidiagonal-plus-identity block.
 */
inline RealizationResult realize_c6(const SigmaList& sigmas, const SolverConfig& config = {}) {
    if (sigmas.size() != 3)
        throw Error(errkind::dimension_mismatch, "the 6-cycle pattern takes exactly three values");
    for (int i = 0; i < 3; ++i)
        if (!std::isfinite(sigmas[i]) || sigmas[i] < 0.0)
            throw Error(errkind::invalid_input, "singular values must be finite and nonnegative");

    const double s1 = sigmas[0], s2 = sigmas[1], s3 = sigmas[2];
    const double smax = std::max({s1, s2, s3});
    if (smax == 0.0 || s2 <= 1e-12 * smax) throw Error(errkind::infeasible, "sigma2 == 0");
    if (std::abs(s1 - s3) <= 1e-12 * smax) throw Error(errkind::infeasible, "sigma1 == sigma3");

    const SigmaList want = sigmas.sorted();
    const double w1 = want[0], w2 = want[1], w3 = want[2];
    const double tol = 1e-12 * w1;
    const Pattern target = c6_pattern();

    RealizationResult res;
    if (w3 <= tol) {
        if (w1 - w2 <= tol) {
            // Equal top pair with a zero: exact closed form.
            const double s = w1 / std::sqrt(3.0);
            res.matrix = DenseMatrix{{s, s, 0.0}, {0.0, s, s}, {-s, 0.0, s}};
            res.method = "c6-equal-pair";
        } else {
            // One zero below two distinct positives: split w1, w2 over a
            // 2 + 1 column block and liberate along the tangent direction
            // supported on the two missing cycle positions.
            double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
            bool found = false;
            for (int k = 0; k < 5 && !found; ++k) {
                const double theta = std::numbers::pi / 5.0 + k * std::numbers::pi / 23.0;
                const double phi = std::numbers::pi / 3.0 + k * std::numbers::pi / 29.0;
                a = w1 * std::cos(theta);
                b = w1 * std::sin(theta);
                c = w2 * std::cos(phi);
                d = w2 * std::sin(phi);
                found = std::abs(a * a - c * c) >= 1e-6 * w1 * w1;
            }
            if (!found)
                throw Error(errkind::numerical_breakdown,
                            "could not separate the split parameters");
            const DenseMatrix N{{a, b, 0.0}, {0.0, 0.0, c}, {0.0, 0.0, d}};
            const double f = w1 * w1 - w2 * w2;
            const DenseMatrix D{{0.0, 0.0, 0.0}, {0.0, f * b * c, 0.0}, {-f * a * d, 0.0, 0.0}};
            res = liberate(N, D, config);
            res.method = "c6-liberation";
        }
    } else {
        const bool low_pair = (w2 - w3 <= tol);
        const bool high_pair = (w1 - w2 <= tol);
        if (!low_pair && !high_pair) {
            res = realize_distinct(target, want, config);
            res.method = "c6-distinct";
        } else {
            // One repeated positive pair: scale so the values read
            // (sg, 1, 1) with sg != 1, realize the 2x2 block with values
            // sg and 1 in closed form, and liberate the direct sum with
            // the identity block along the printed tangent direction.
            const double scale = low_pair ? w2 : w1;
            const double sg = low_pair ? w1 / w2 : w3 / w1;
            const double a = std::sqrt(sg);
            const double b = std::abs(sg - 1.0);
            const double c = std::sqrt(sg);
            const DenseMatrix M{{scale * a, scale * b, 0.0},
                                {0.0, scale * c, 0.0},
                                {0.0, 0.0, scale}};
            const DenseMatrix D{{0.0, 0.0, 0.0},
                                {0.0, 0.0, scale * b * c},
                                {scale * (a * a + b * b - 1.0) / a, 0.0, 0.0}};
            res = liberate(M, D, config);
            res.method = "c6-liberation";
        }
    }

    res.achieved_sigmas = singular_values(res.matrix);
    res.sigma_error = res.achieved_sigmas.max_relative_deviation(want);
    try {
        res.pattern_ok = (pattern_of(res.matrix) == target);
    } catch (const Error&) {
        res.pattern_ok = false;
    }
    return res;
}

// ============================================================
// Cycle patterns with a prescribed zero
// ============================================================

/**
 * Realizes a list with exactly one zero and otherwise distinct values
 * on the staircase 2n-cycle pattern.  Order 1 is accepted as an alias
 * for the 2x2 all-ones block, whose list has two entries; orders n >= 2
 * take n entries.  For n <= 2 the answer is the explicit rank-one
 * matrix (sigma/2)J.  For n >= 3 the middle values ride a transposed
 * path realizer, the largest value takes a single bridging row scaled
 * by 1/sqrt(2), and a tangent liberation fills the two positions that
 * close the cycle; the tall path block contributes the zero.
 */
inline RealizationResult realize_cycle_with_zero(int n, const SigmaList& sigmas,
                                                 const SolverConfig& config = {}) {
    if (n < 1) throw Error(errkind::invalid_input, "cycle order must be at least 1");
    const int order = std::max(n, 2);
    if (static_cast<int>(sigmas.size()) != order)
        throw Error(errkind::dimension_mismatch,
                    "a cycle of order " + std::to_string(n) + " takes " + std::to_string(order) +
                        " singular values");

    double smax = 0.0;
    for (int i = 0; i < order; ++i) {
        if (!std::isfinite(sigmas[i]) || sigmas[i] < 0.0)
            throw Error(errkind::invalid_input, "singular values must be finite and nonnegative");
        smax = std::max(smax, sigmas[i]);
    }
    if (smax == 0.0)
        throw Error(errkind::infeasible, "cycle realization needs distinct values");
    int zeros = 0;
    std::vector<double> positive;
    for (int i = 0; i < order; ++i) {
        if (sigmas[i] <= 1e-12 * smax)
            ++zeros;
        else
            positive.push_back(sigmas[i]);
    }
    if (zeros == 0)
        throw Error(errkind::infeasible, "cycle realization needs exactly one zero value");
    if (zeros > 1)
        throw Error(errkind::infeasible, "cycle realization needs distinct values");
    for (std::size_t i = 0; i < positive.size(); ++i)
        for (std::size_t j = i + 1; j < positive.size(); ++j)
            if (std::abs(positive[i] - positive[j]) <= 1e-12 * smax)
                throw Error(errkind::infeasible, "cycle realization needs distinct values");

    const SigmaList want = sigmas.sorted();
    const Pattern target = cycle_pattern(order);

    RealizationResult res;
    if (order == 2) {
        const double s = want[0] / 2.0;
        res.matrix = DenseMatrix{{s, s}, {s, s}};
        res.method = "cycle";
        res.iterations = 0;
    } else {
        std::vector<double> middles;
        for (int i = 1; i + 1 < order; ++i) middles.push_back(want[i]);
        const RealizationResult path = realize_path(SigmaList(middles));

        DenseMatrix A0(order, order);
        for (int i = 0; i + 2 < order; ++i)
            for (int j = 0; j + 1 < order; ++j) A0(j, i) = path.matrix(i, j);
        const double bridge = want[0] / std::sqrt(2.0);
        A0(order - 1, order - 2) = bridge;
        A0(order - 1, order - 1) = bridge;

        Pattern wanted(order, order);
        wanted(order - 2, order - 2) = 1;
        wanted(0, order - 1) = 1;
        const DenseMatrix D = liberation_direction(A0, wanted);
        DenseMatrix Dc(order, order);
        Dc(order - 2, order - 2) = D(order - 2, order - 2);
        Dc(0, order - 1) = D(0, order - 1);

        res = liberate(A0, Dc, config);
        res.method = "cycle";
        bool filled = false;
        try {
            filled = (pattern_of(res.matrix) == target);
        } catch (const Error&) {
            filled = false;
        }
        if (!filled) {
            const int walked = res.iterations;
            res = superpattern_realize(res.matrix, target, config);
            res.method = "cycle";
            res.iterations += walked;
        }
    }

    res.achieved_sigmas = singular_values(res.matrix);
    res.sigma_error = res.achieved_sigmas.max_relative_deviation(want);
    try {
        res.pattern_ok = (pattern_of(res.matrix) == target);
    } catch (const Error&) {
        res.pattern_ok = false;
    }
    return res;
}

// ============================================================
// Zero-with-distinct feasibility for full-term-rank patterns
// ============================================================

/**
 * Decides whether a square pattern of full term-rank allows singular
 * values 0 = sigma_1 < sigma_2 < ... < sigma_m.  After permuting a
 * maximum matching onto the diagonal, the answer is whether the
 * off-diagonal digraph contains a cycle; acyclic patterns are
 * permutationally triangular, so every matrix with such a pattern is
 * invertible.
 */
inline bool allows_zero_with_distinct(const Pattern& P) {
    if (P.rows() != P.cols())
        throw Error(errkind::invalid_input, "zero-with-distinct test needs a square pattern");
    const TermRankResult tr = term_rank_with_matching(P);
    if (tr.value < P.rows())
        throw Error(errkind::invalid_input,
                    "zero-with-distinct test needs a pattern of full term-rank");
    std::vector<int> row_of_col(static_cast<std::size_t>(P.cols()), 0);
    for (const auto& [r, c] : tr.matching) row_of_col[static_cast<std::size_t>(c)] = r;
    std::vector<int> cols(static_cast<std::size_t>(P.cols()));
    std::iota(cols.begin(), cols.end(), 0);
    return digraph_has_cycle(P.select(row_of_col, cols));
}

}  // namespace ssvp
