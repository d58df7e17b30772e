#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <ssvp/error.hpp>
#include <ssvp/matrix.hpp>
#include <ssvp/numerics.hpp>
#include <ssvp/pattern.hpp>
#include <ssvp/rational.hpp>
#include <ssvp/verify.hpp>

namespace ssvp {

// ============================================================
// Closed-form verdicts
// ============================================================

enum class Verdict { has_ssvp, lacks_ssvp, no_rule };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::has_ssvp: return "has-SSVP";
        case Verdict::lacks_ssvp: return "lacks-SSVP";
        case Verdict::no_rule: return "no-rule-applies";
    }
    return "no-rule-applies";
}

/**
 * Result of the rule chain.  rule is one of the fixed catalog
 * names (zero-row-or-column, term-rank, nowhere-zero, single-line,
 * diagonal, bordered-zeros, two-by-n-canonical, direct-sum) or
 * "none" when no rule matched; detail is a short justification.
 */
struct ClosedFormVerdict {
    Verdict verdict = Verdict::no_rule;
    std::string rule = "none";
    std::string detail;
};

inline constexpr double kCoincidenceGap = 1e-9;

// ============================================================
// Equivalence transforms
// ============================================================

/**
 * One of the five operations that preserve the property: they
 * permute or negate rows/columns or transpose, so verdicts can be
 * transported to a convenient canonical form.
 */
struct EquivalenceOp {
    enum class Kind { transpose, row_perm, col_perm, row_signs, col_signs };
    Kind kind = Kind::transpose;
    std::vector<int> perm;   // 0-based; output line i is input line perm[i]
    std::vector<int> signs;  // one of -1, +1 per line

    static EquivalenceOp transpose() { return {Kind::transpose, {}, {}}; }
    static EquivalenceOp row_perm(std::vector<int> p) { return {Kind::row_perm, std::move(p), {}}; }
    static EquivalenceOp col_perm(std::vector<int> p) { return {Kind::col_perm, std::move(p), {}}; }
    static EquivalenceOp row_signs(std::vector<int> s) {
        return {Kind::row_signs, {}, std::move(s)};
    }
    static EquivalenceOp col_signs(std::vector<int> s) {
        return {Kind::col_signs, {}, std::move(s)};
    }
};

namespace detail {

inline void require_permutation(const std::vector<int>& perm, int n, const char* what) {
    if (static_cast<int>(perm.size()) != n)
        throw Error(errkind::invalid_input, std::string(what) + " permutation has wrong length");
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (int v : perm) {
        if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)])
            throw Error(errkind::invalid_input, std::string(what) + " permutation is malformed");
        seen[static_cast<std::size_t>(v)] = 1;
    }
}

inline void require_signs(const std::vector<int>& signs, int n, const char* what) {
    if (static_cast<int>(signs.size()) != n)
        throw Error(errkind::invalid_input, std::string(what) + " sign list has wrong length");
    for (int s : signs)
        if (s != 1 && s != -1)
            throw Error(errkind::invalid_input, std::string(what) + " signs must be +1 or -1");
}

}  // namespace detail

inline DenseMatrix equivalence_transform(const DenseMatrix& A, const EquivalenceOp& op) {
    switch (op.kind) {
        case EquivalenceOp::Kind::transpose: return A.transpose();
        case EquivalenceOp::Kind::row_perm:
            detail::require_permutation(op.perm, A.rows(), "row");
            return A.select_rows(op.perm);
        case EquivalenceOp::Kind::col_perm:
            detail::require_permutation(op.perm, A.cols(), "column");
            return A.select_cols(op.perm);
        case EquivalenceOp::Kind::row_signs: {
            detail::require_signs(op.signs, A.rows(), "row");
            DenseMatrix B = A;
            for (int i = 0; i < A.rows(); ++i)
                if (op.signs[static_cast<std::size_t>(i)] < 0)
                    for (int j = 0; j < A.cols(); ++j) B(i, j) = -B(i, j);
            return B;
        }
        case EquivalenceOp::Kind::col_signs: {
            detail::require_signs(op.signs, A.cols(), "column");
            DenseMatrix B = A;
            for (int j = 0; j < A.cols(); ++j)
                if (op.signs[static_cast<std::size_t>(j)] < 0)
                    for (int i = 0; i < A.rows(); ++i) B(i, j) = -B(i, j);
            return B;
        }
    }
    throw Error(errkind::invalid_input, "unknown equivalence operation");
}

// ============================================================
// Direct-sum conditions
// ============================================================

/**
 * The four conditions under which A (+) B inherits the property,
 * plus their conjunction.  When the stacked pair is taller than
 * wide both blocks are transposed first, which changes nothing
 * about the property and restores the wide-or-square form the
 * characterization is stated for.
 */
struct DirectSumReport {
    bool shapes_wide = false;        // (a) each block has rows <= cols
    bool both_ssvp = false;          // (b) both blocks pass check_ssvp
    bool disjoint_sigmas = false;    // (c) no common nonzero singular value
    bool rows_independent = false;   // (d) both row-independent, or one square invertible
    Verdict verdict = Verdict::lacks_ssvp;
    std::string detail;
};

namespace detail {

inline bool rows_independent_exact(const DenseMatrix& M) {
    return exact_rank(RationalMatrix::from_dense(M)) == M.rows();
}

inline bool square_invertible_exact(const DenseMatrix& M) {
    return M.rows() == M.cols() && exact_rank(RationalMatrix::from_dense(M)) == M.rows();
}

}  // namespace detail

inline DirectSumReport check_direct_sum_conditions(const DenseMatrix& A, const DenseMatrix& B,
                                                   double tol = kCoincidenceGap) {
    if (A.rows() + B.rows() > A.cols() + B.cols())
        return check_direct_sum_conditions(A.transpose(), B.transpose(), tol);

    DirectSumReport rep;
    rep.shapes_wide = A.rows() <= A.cols() && B.rows() <= B.cols();
    rep.both_ssvp = check_ssvp(A).has_ssvp && check_ssvp(B).has_ssvp;

    const SigmaList sa = singular_values(A);
    const SigmaList sb = singular_values(B);
    double smax = 0.0;
    for (int i = 0; i < sa.size(); ++i) smax = std::max(smax, sa[i]);
    for (int i = 0; i < sb.size(); ++i) smax = std::max(smax, sb[i]);
    rep.disjoint_sigmas = true;
    for (int i = 0; i < sa.size(); ++i) {
        if (sa[i] <= tol * smax) continue;
        for (int j = 0; j < sb.size(); ++j) {
            if (sb[j] <= tol * smax) continue;
            if (std::abs(sa[i] - sb[j]) <= tol * smax) rep.disjoint_sigmas = false;
        }
    }

    const bool ind_a = detail::rows_independent_exact(A);
    const bool ind_b = detail::rows_independent_exact(B);
    rep.rows_independent = (ind_a && ind_b) || detail::square_invertible_exact(A) ||
                           detail::square_invertible_exact(B);

    const bool all_hold =
        rep.shapes_wide && rep.both_ssvp && rep.disjoint_sigmas && rep.rows_independent;
    rep.verdict = all_hold ? Verdict::has_ssvp : Verdict::lacks_ssvp;
    std::string failed;
    if (!rep.shapes_wide) failed += " (a)";
    if (!rep.both_ssvp) failed += " (b)";
    if (!rep.disjoint_sigmas) failed += " (c)";
    if (!rep.rows_independent) failed += " (d)";
    rep.detail = all_hold ? "conditions (a)-(d) all hold" : "failed conditions:" + failed;
    return rep;
}

// ============================================================
// Pattern-level characterizations
// ============================================================

/**
 * True iff every list of min-dimension positive values is the
 * singular value list of some realization of P: the nonzero
 * columns must form an all-ones block of width >= m (so P is
 * [J | O] up to permutation), which the column shape test plus
 * term rank m capture.  Requires rows <= cols.
 */
inline bool allows_all_nonzero_lists(const Pattern& P) {
    if (P.rows() > P.cols())
        throw Error(errkind::invalid_input, "allows_all_nonzero_lists needs rows <= cols");
    for (int j = 0; j < P.cols(); ++j) {
        int ones = 0;
        for (int i = 0; i < P.rows(); ++i) ones += P(i, j);
        if (ones != 0 && ones != P.rows()) return false;
    }
    return term_rank(P) == P.rows();
}

/** True iff only the all-zero singular value list is realizable. */
inline bool zero_pattern_only(const Pattern& P) { return P.count_ones() == 0; }

// ============================================================
// Rule chain
// ============================================================

namespace detail {

inline std::string shape_string(const DenseMatrix& A) {
    return std::to_string(A.rows()) + "x" + std::to_string(A.cols());
}

/** Diagonal-rule verdict for a square matrix with no off-diagonal nonzeros. */
inline ClosedFormVerdict classify_diagonal(const DenseMatrix& A) {
    const int n = A.rows();
    double dmax = 0.0;
    for (int i = 0; i < n; ++i) dmax = std::max(dmax, std::abs(A(i, i)));
    for (int i = 0; i < n; ++i)
        if (A(i, i) == 0.0)
            return {Verdict::lacks_ssvp, "diagonal",
                    "diagonal entry " + std::to_string(i + 1) + " is zero"};
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(std::abs(A(i, i)) - std::abs(A(j, j))) <= kCoincidenceGap * dmax)
                return {Verdict::lacks_ssvp, "diagonal",
                        "entries " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                            " have equal absolute value"};
    return {Verdict::has_ssvp, "diagonal", "diagonal entries have distinct absolute values"};
}

/** Rule for a 2 x n matrix (n >= 2) without zero columns. */
inline ClosedFormVerdict classify_two_rows(const DenseMatrix& A) {
    int n1 = 0, n2 = 0, n3 = 0;
    double cc = 0.0, dd = 0.0;
    for (int j = 0; j < A.cols(); ++j) {
        const bool top = A(0, j) != 0.0;
        const bool bottom = A(1, j) != 0.0;
        if (top && bottom) {
            ++n1;
        } else if (top) {
            ++n2;
            cc += A(0, j) * A(0, j);
        } else if (bottom) {
            ++n3;
            dd += A(1, j) * A(1, j);
        }
    }
    const std::string classes = "column classes n1=" + std::to_string(n1) +
                                ", n2=" + std::to_string(n2) + ", n3=" + std::to_string(n3);
    if (n1 > 0)
        return {Verdict::has_ssvp, "two-by-n-canonical", classes};
    if (n2 > 0 && n3 > 0) {
        if (std::abs(cc - dd) <= kCoincidenceGap * std::max(cc, dd))
            return {Verdict::lacks_ssvp, "two-by-n-canonical",
                    classes + "; the two single-support square sums coincide"};
        return {Verdict::has_ssvp, "two-by-n-canonical",
                classes + "; the two single-support square sums differ"};
    }
    // A zero row, which the zero-line rule catches before this one.
    return {Verdict::lacks_ssvp, "two-by-n-canonical", classes + "; a row is zero"};
}

}  // namespace detail

/**
 * Applies the closed-form characterizations in the fixed order:
 * zero line, term rank, nowhere zero, single line, diagonal,
 * bordered zero columns, 2 x n canonical form, direct sum.  When
 * none matches the verifier must decide, and no-rule-applies is
 * returned.
 */
inline ClosedFormVerdict classify_ssvp(const DenseMatrix& A) {
    const int m = A.rows(), n = A.cols();
    const Pattern P = pattern_of(A);

    // Zero line: a zero row of a wide-or-square matrix, or a zero
    // column of a tall-or-square one, kills the property.
    if (m <= n)
        for (int i = 0; i < m; ++i)
            if (P.row_is_zero(i))
                return {Verdict::lacks_ssvp, "zero-row-or-column",
                        "row " + std::to_string(i + 1) + " is zero and rows <= cols"};
    if (n <= m)
        for (int j = 0; j < n; ++j)
            if (P.col_is_zero(j))
                return {Verdict::lacks_ssvp, "zero-row-or-column",
                        "column " + std::to_string(j + 1) + " is zero and cols <= rows"};

    // Term rank below min dimension is an obstruction.
    const int tr = term_rank(P);
    if (tr < std::min(m, n))
        return {Verdict::lacks_ssvp, "term-rank",
                "term rank " + std::to_string(tr) + " < min dimension " +
                    std::to_string(std::min(m, n))};

    // Nowhere-zero matrices always have the property.
    if (P.count_ones() == m * n)
        return {Verdict::has_ssvp, "nowhere-zero", "every entry is nonzero"};

    // A single nonzero row or column vector.
    if (std::min(m, n) == 1)
        return {Verdict::has_ssvp, "single-line", "nonzero vector"};

    // Square diagonal matrices.
    bool diagonal = m == n;
    for (int i = 0; diagonal && i < m; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && P(i, j)) {
                diagonal = false;
                break;
            }
    if (diagonal) return detail::classify_diagonal(A);

    const bool has_zero_col = [&] {
        for (int j = 0; j < n; ++j)
            if (P.col_is_zero(j)) return true;
        return false;
    }();
    const bool has_zero_row = [&] {
        for (int i = 0; i < m; ++i)
            if (P.row_is_zero(i)) return true;
        return false;
    }();

    // Bordered form: zero columns can be stripped if the remaining
    // rows are independent; with dependent rows the property fails.
    if (has_zero_col || has_zero_row) {
        const DenseMatrix W = has_zero_col ? A : A.transpose();
        std::vector<int> keep;
        for (int j = 0; j < W.cols(); ++j) {
            bool zero = true;
            for (int i = 0; i < W.rows(); ++i)
                if (W(i, j) != 0.0) zero = false;
            if (!zero) keep.push_back(j);
        }
        std::vector<int> all_rows(static_cast<std::size_t>(W.rows()));
        for (int i = 0; i < W.rows(); ++i) all_rows[static_cast<std::size_t>(i)] = i;
        const DenseMatrix B = W.submatrix(all_rows, keep);
        if (!detail::rows_independent_exact(B))
            return {Verdict::lacks_ssvp, "bordered-zeros",
                    "rows are dependent after stripping zero " +
                        std::string(has_zero_col ? "columns" : "rows")};
        const ClosedFormVerdict inner = classify_ssvp(B);
        if (inner.verdict != Verdict::no_rule)
            return {inner.verdict, "bordered-zeros",
                    "after stripping zero " + std::string(has_zero_col ? "columns" : "rows") +
                        ", " + inner.rule + ": " + inner.detail};
        return inner;  // no closed form for the core either
    }

    // 2 x n canonical form (no zero columns remain here).
    if (m == 2 && n >= 2) return detail::classify_two_rows(A);
    if (n == 2 && m >= 2) return detail::classify_two_rows(A.transpose());

    // Direct sums, detected as bigraph components.
    const std::vector<BigraphComponent> comps = bigraph_components(P);
    if (comps.size() >= 2) {
        const bool wide = m <= n;
        bool all_hold = true;
        std::string failures;
        DenseMatrix prefix(0, 0);
        for (std::size_t k = 0; k < comps.size(); ++k) {
            DenseMatrix block = A.submatrix(comps[k].rows, comps[k].cols);
            if (!wide) block = block.transpose();
            if (k == 0) {
                prefix = block;
                continue;
            }
            const DirectSumReport rep = check_direct_sum_conditions(prefix, block);
            if (rep.verdict != Verdict::has_ssvp) {
                all_hold = false;
                failures = rep.detail;
                break;
            }
            prefix = DenseMatrix::direct_sum(prefix, block);
        }
        if (all_hold)
            return {Verdict::has_ssvp, "direct-sum",
                    std::to_string(comps.size()) + " summands, conditions (a)-(d) hold pairwise"};
        return {Verdict::lacks_ssvp, "direct-sum",
                std::to_string(comps.size()) + " summands; " + failures};
    }

    return {};
}

}  // namespace ssvp
