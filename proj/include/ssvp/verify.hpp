#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <ssvp/error.hpp>
#include <ssvp/matrix.hpp>
#include <ssvp/numerics.hpp>
#include <ssvp/pattern.hpp>
#include <ssvp/rational.hpp>

namespace ssvp {

// ============================================================
// Skew-entry stacking
// ============================================================

/**
 * Below-diagonal entries of a square matrix, stacked column-major:
 * (2,1),(3,1),...,(s,1),(3,2),...,(s,s-1).  Length C(s,2).
 */
inline std::vector<double> vec_lower(const DenseMatrix& S) {
    if (S.rows() != S.cols())
        throw Error(errkind::invalid_input, "vec_lower needs a square matrix");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(S.rows()) * (S.rows() - 1) / 2);
    for (int j = 0; j < S.cols(); ++j)
        for (int i = j + 1; i < S.rows(); ++i) out.push_back(S(i, j));
    return out;
}

// ============================================================
// Verification matrix
// ============================================================

/**
 * Label of one linear equation: the below-diagonal position (i,j),
 * i > j, 1-based, of either A^T X - X^T A (block 0, an n x n skew
 * matrix) or X A^T - A X^T (block 1, m x m).
 */
struct SkewRowLabel {
    int block = 0;
    int i = 0;
    int j = 0;

    friend bool operator==(const SkewRowLabel& a, const SkewRowLabel& b) {
        return a.block == b.block && a.i == b.i && a.j == b.j;
    }
};

/**
 * The coefficient matrix of the linear system that pins X to zero:
 * one row per independent skew entry, one column per unknown x_pq.
 * Row block order is the n x n block first, then the m x m block;
 * columns run row-major over (p,q).
 */
struct VerificationMatrix {
    DenseMatrix matrix;
    std::vector<SkewRowLabel> row_index;
    std::vector<std::pair<int, int>> col_index;  // 1-based (p,q)
};

/**
 * Column (p,q) holds vec_lower(A^T E_pq - E_qp A) stacked over
 * vec_lower(E_pq A^T - A E_qp): the coefficients of x_pq in the
 * symmetry equations for A^T X and X A^T.
 */
inline VerificationMatrix build_psi(const DenseMatrix& A) {
    const int m = A.rows(), n = A.cols();
    if (m == 0 || n == 0) throw Error(errkind::invalid_input, "build_psi needs a nonempty matrix");
    VerificationMatrix out{DenseMatrix(n * (n - 1) / 2 + m * (m - 1) / 2, m * n), {}, {}};
    for (int j = 1; j <= n; ++j)
        for (int i = j + 1; i <= n; ++i) out.row_index.push_back({0, i, j});
    for (int j = 1; j <= m; ++j)
        for (int i = j + 1; i <= m; ++i) out.row_index.push_back({1, i, j});
    const DenseMatrix At = A.transpose();
    int c = 0;
    for (int p = 0; p < m; ++p)
        for (int q = 0; q < n; ++q, ++c) {
            out.col_index.emplace_back(p + 1, q + 1);
            const DenseMatrix Epq = DenseMatrix::unit(m, n, p, q);
            const DenseMatrix Eqp = DenseMatrix::unit(n, m, q, p);
            const std::vector<double> top = vec_lower(At * Epq - Eqp * A);
            const std::vector<double> bottom = vec_lower(Epq * At - A * Eqp);
            int r = 0;
            for (double v : top) out.matrix(r++, c) = v;
            for (double v : bottom) out.matrix(r++, c) = v;
        }
    return out;
}

namespace detail {

inline VerificationMatrix select_psi_columns(const VerificationMatrix& psi,
                                             const std::vector<int>& keep) {
    VerificationMatrix out{DenseMatrix(psi.matrix.rows(), static_cast<int>(keep.size())),
                           psi.row_index,
                           {}};
    for (std::size_t c = 0; c < keep.size(); ++c) {
        out.col_index.push_back(psi.col_index[keep[c]]);
        for (int r = 0; r < psi.matrix.rows(); ++r)
            out.matrix(r, static_cast<int>(c)) = psi.matrix(r, keep[c]);
    }
    return out;
}

}  // namespace detail

/** Columns of build_psi(A) at the exact-zero entries of A. */
inline VerificationMatrix build_phi(const DenseMatrix& A) {
    const VerificationMatrix psi = build_psi(A);
    std::vector<int> keep;
    for (std::size_t c = 0; c < psi.col_index.size(); ++c) {
        const auto [p, q] = psi.col_index[c];
        if (A(p - 1, q - 1) == 0.0) keep.push_back(static_cast<int>(c));
    }
    return detail::select_psi_columns(psi, keep);
}

/**
 * Columns of build_psi(A) at the zero positions of S, for deciding
 * the property relative to a superpattern S of A's pattern.
 */
inline VerificationMatrix build_phi_wrt(const DenseMatrix& A, const Pattern& S) {
    if (S.rows() != A.rows() || S.cols() != A.cols())
        throw Error(errkind::not_a_superpattern, "pattern dimensions do not match the matrix");
    if (!is_superpattern(S, pattern_of(A)))
        throw Error(errkind::not_a_superpattern,
                    "pattern is not a superpattern of the matrix's pattern");
    const VerificationMatrix psi = build_psi(A);
    std::vector<int> keep;
    for (std::size_t c = 0; c < psi.col_index.size(); ++c) {
        const auto [p, q] = psi.col_index[c];
        if (!S(p - 1, q - 1)) keep.push_back(static_cast<int>(c));
    }
    return detail::select_psi_columns(psi, keep);
}

// ============================================================
// SSVP decision
// ============================================================

enum class CheckMode { numeric, exact_when_rational, exact };

inline const char* to_string(CheckMode m) {
    switch (m) {
        case CheckMode::numeric: return "numeric";
        case CheckMode::exact_when_rational: return "exact-when-rational";
        case CheckMode::exact: return "exact";
    }
    return "exact-when-rational";
}

/**
 * Outcome of the independence test on the verification columns.
 * A positive verdict carries the 1-based pivot rows of an
 * invertible square subsystem; a negative verdict carries a unit
 * violating matrix Y with its three symmetry/support residuals
 * (||A^T Y - Y^T A||, ||Y A^T - A Y^T||, ||A o Y||, Frobenius).
 */
struct SsvpCertificate {
    bool has_ssvp = false;
    std::vector<int> pivot_rows;
    DenseMatrix Y;
    std::array<double, 3> residuals{0.0, 0.0, 0.0};

    const char* verdict() const { return has_ssvp ? "has-SSVP" : "lacks-SSVP"; }
};

inline constexpr double kCertificateSignTol = 1e-8;
inline constexpr double kCertificateResidualTol = 1e-10;
inline constexpr double kBorderlineRatio = 1e3;

namespace detail {

/** Unit norm; first coordinate of magnitude > 1e-8 made positive. */
inline void normalize_certificate(std::vector<double>& y) {
    double norm = 0.0;
    for (double v : y) norm += v * v;
    norm = std::sqrt(norm);
    if (norm == 0.0) return;
    for (double& v : y) v /= norm;
    for (double v : y) {
        if (std::abs(v) > kCertificateSignTol) {
            if (v < 0.0)
                for (double& w : y) w = -w;
            break;
        }
    }
}

inline DenseMatrix matrix_from_coords(int m, int n,
                                      const std::vector<std::pair<int, int>>& col_index,
                                      const std::vector<double>& y) {
    DenseMatrix Y(m, n);
    for (std::size_t l = 0; l < col_index.size(); ++l)
        Y(col_index[l].first - 1, col_index[l].second - 1) = y[l];
    return Y;
}

inline std::array<double, 3> certificate_residuals(const DenseMatrix& A, const DenseMatrix& Y) {
    const DenseMatrix At = A.transpose();
    const DenseMatrix Yt = Y.transpose();
    const DenseMatrix s1 = At * Y - Yt * A;
    const DenseMatrix s2 = Y * At - A * Yt;
    return {s1.frobenius_norm(), s2.frobenius_norm(), A.hadamard(Y).frobenius_norm()};
}

inline SsvpCertificate decide_ssvp(const DenseMatrix& A, const VerificationMatrix& phi,
                                   CheckMode mode) {
    const int k = phi.matrix.cols();
    SsvpCertificate cert;
    cert.Y = DenseMatrix(A.rows(), A.cols());
    if (k == 0) {
        cert.has_ssvp = true;
        return cert;
    }

    bool use_exact = mode == CheckMode::exact;
    bool numeric_full = false;
    if (!use_exact) {
        const SigmaList s = singular_values(phi.matrix);
        const int num_rank = rank(phi.matrix);
        const bool borderline = num_rank == k - 1 && num_rank > 0 && num_rank < s.size() &&
                                s[num_rank] > 0.0 &&
                                s[num_rank - 1] / s[num_rank] < kBorderlineRatio;
        if (borderline) {
            if (mode == CheckMode::numeric)
                throw Error(errkind::borderline_rank,
                            "numeric column rank is ambiguous; rerun with exact arithmetic");
            use_exact = true;
        } else {
            numeric_full = num_rank == k;
        }
    }

    if (!use_exact && !numeric_full) {
        // Match the rank threshold so nullity + rank = column count.
        const double null_tol =
            kDefaultRankTol * std::max(phi.matrix.rows(), phi.matrix.cols());
        const DenseMatrix basis = nullspace(phi.matrix, null_tol);
        std::vector<double> y(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) y[static_cast<std::size_t>(i)] = basis(i, 0);
        normalize_certificate(y);
        cert.has_ssvp = false;
        cert.Y = matrix_from_coords(A.rows(), A.cols(), phi.col_index, y);
        cert.residuals = certificate_residuals(A, cert.Y);
        return cert;
    }

    // The independence witness is always extracted exactly; every
    // finite double is a rational, so the elimination is lossless.
    const RationalMatrix R = RationalMatrix::from_dense(phi.matrix);
    const ExactElimination elim = exact_eliminate(R);
    if (elim.rank == k) {
        cert.has_ssvp = true;
        cert.pivot_rows.reserve(elim.pivot_rows.size());
        for (int r : elim.pivot_rows) cert.pivot_rows.push_back(r + 1);
        std::sort(cert.pivot_rows.begin(), cert.pivot_rows.end());
        return cert;
    }
    const std::vector<std::vector<Rational>> basis = exact_nullspace(R);
    const std::vector<Rational>& yr = basis.front();
    std::vector<double> y(yr.size());
    for (std::size_t i = 0; i < yr.size(); ++i) y[i] = static_cast<double>(yr[i]);
    normalize_certificate(y);
    cert.has_ssvp = false;
    cert.Y = matrix_from_coords(A.rows(), A.cols(), phi.col_index, y);
    // phi * y = 0 exactly forces both skew matrices and the support
    // product to vanish identically, so the residuals are true zeros.
    cert.residuals = {0.0, 0.0, 0.0};
    return cert;
}

}  // namespace detail

/**
 * Decides whether X = O is the only matrix making X A^T and A^T X
 * symmetric with A o X = O, by testing the columns of build_phi(A)
 * for independence.  The numeric route errors (or, in the default
 * mode, escalates to exact rational elimination) when the rank
 * decision is within one of full and the singular value on the
 * retained side is fewer than three decades above the discarded one.
 */
inline SsvpCertificate check_ssvp(const DenseMatrix& A,
                                  CheckMode mode = CheckMode::exact_when_rational) {
    return detail::decide_ssvp(A, build_phi(A), mode);
}

/** Same decision relative to a superpattern S of A's pattern. */
inline SsvpCertificate check_ssvp_wrt(const DenseMatrix& A, const Pattern& S,
                                      CheckMode mode = CheckMode::exact_when_rational) {
    return detail::decide_ssvp(A, build_phi_wrt(A, S), mode);
}

// ============================================================
// Certificate validation
// ============================================================

struct CertificateCheck {
    bool valid = false;
    std::array<double, 3> residuals{0.0, 0.0, 0.0};
};

/**
 * Re-derives the three residuals of a claimed violating matrix Y
 * against A and a pattern S (support residual = ||S o Y||): valid
 * iff Y is nonzero and all residuals are at most 1e-10 ||A|| ||Y||.
 */
inline CertificateCheck validate_certificate(const DenseMatrix& A, const DenseMatrix& Y,
                                             const Pattern& S) {
    if (Y.rows() != A.rows() || Y.cols() != A.cols() || S.rows() != A.rows() ||
        S.cols() != A.cols())
        throw Error(errkind::dimension_mismatch, "certificate shapes do not match");
    CertificateCheck out;
    out.residuals = detail::certificate_residuals(A, Y);
    double masked = 0.0;
    for (int i = 0; i < Y.rows(); ++i)
        for (int j = 0; j < Y.cols(); ++j)
            if (S(i, j)) masked += Y(i, j) * Y(i, j);
    out.residuals[2] = std::sqrt(masked);
    const double bound = kCertificateResidualTol * A.frobenius_norm() * Y.frobenius_norm();
    out.valid = Y.frobenius_norm() > 0.0 && out.residuals[0] <= bound &&
                out.residuals[1] <= bound && out.residuals[2] <= bound;
    return out;
}

}  // namespace ssvp
