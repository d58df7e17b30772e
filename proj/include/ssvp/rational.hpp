#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include <ssvp/error.hpp>
#include <ssvp/matrix.hpp>

namespace ssvp {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// ============================================================
// RationalMatrix
// ============================================================

/**
 * Exact m×n rational matrix.  Doubles convert losslessly (every
 * finite double is a binary rational), which makes this the exact
 * oracle for any computation whose inputs came in as doubles.
 */
class RationalMatrix {
public:
    RationalMatrix() = default;

    RationalMatrix(int rows, int cols)
        : rows_(rows), cols_(cols),
          entries_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
        if (rows < 0 || cols < 0)
            throw Error(errkind::invalid_input, "matrix dimensions must be nonnegative");
    }

    static RationalMatrix from_dense(const DenseMatrix& M) {
        if (!M.all_finite())
            throw Error(errkind::invalid_input, "non-finite entry in matrix");
        RationalMatrix out(M.rows(), M.cols());
        for (int i = 0; i < M.rows(); ++i)
            for (int j = 0; j < M.cols(); ++j) out(i, j) = Rational(M(i, j));
        return out;
    }

    DenseMatrix to_dense() const {
        DenseMatrix out(rows_, cols_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j)
                out(i, j) = static_cast<double>((*this)(i, j));
        return out;
    }

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }

    Rational& operator()(int i, int j) {
        return entries_[static_cast<std::size_t>(i) * cols_ + j];
    }
    const Rational& operator()(int i, int j) const {
        return entries_[static_cast<std::size_t>(i) * cols_ + j];
    }

    RationalMatrix transpose() const {
        RationalMatrix T(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) T(j, i) = (*this)(i, j);
        return T;
    }

    RationalMatrix operator*(const RationalMatrix& rhs) const {
        if (cols_ != rhs.rows_)
            throw Error(errkind::dimension_mismatch, "matrix product dimension mismatch");
        RationalMatrix out(rows_, rhs.cols_);
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < cols_; ++k) {
                const Rational& a = (*this)(i, k);
                if (a == 0) continue;
                for (int j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(k, j);
            }
        return out;
    }

    RationalMatrix operator-(const RationalMatrix& rhs) const {
        if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
            throw Error(errkind::dimension_mismatch, "matrix shape mismatch");
        RationalMatrix out = *this;
        for (std::size_t k = 0; k < entries_.size(); ++k) out.entries_[k] -= rhs.entries_[k];
        return out;
    }

    bool is_zero() const {
        for (const Rational& v : entries_)
            if (v != 0) return false;
        return true;
    }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<Rational> entries_;
};

// ============================================================
// Exact elimination
// ============================================================

/**
 * Mathematically exact rank via fraction-free (Bareiss) Gaussian
 * elimination.  Rows are first scaled to integers by their
 * denominator LCM (rank-preserving), then eliminated over cpp_int
 * with the Bareiss division, which stays exact with no rational
 * normalization in the inner loop.
 */
inline int exact_rank(const RationalMatrix& M) {
    const int m = M.rows(), n = M.cols();
    std::vector<std::vector<BigInt>> a(static_cast<std::size_t>(m),
                                       std::vector<BigInt>(static_cast<std::size_t>(n)));
    for (int i = 0; i < m; ++i) {
        BigInt scale = 1;
        for (int j = 0; j < n; ++j)
            scale = boost::multiprecision::lcm(scale, denominator(M(i, j)));
        for (int j = 0; j < n; ++j) {
            const Rational v = M(i, j) * Rational(scale);
            a[i][j] = numerator(v);
        }
    }

    BigInt prev = 1;
    int rank = 0;
    int row = 0;
    for (int col = 0; col < n && row < m; ++col) {
        int pivot = -1;
        for (int r = row; r < m; ++r)
            if (a[r][col] != 0) { pivot = r; break; }
        if (pivot < 0) continue;
        std::swap(a[row], a[pivot]);
        for (int r = row + 1; r < m; ++r) {
            for (int c = col + 1; c < n; ++c)
                a[r][c] = (a[row][col] * a[r][c] - a[r][col] * a[row][c]) / prev;
            a[r][col] = 0;
        }
        prev = a[row][col];
        ++rank;
        ++row;
    }
    return rank;
}

/** Result of exact reduced row echelon elimination. */
struct ExactElimination {
    int rank = 0;
    std::vector<int> pivot_rows;   // original row index used as the pivot of each pivot column
    std::vector<int> pivot_cols;
    std::vector<int> free_cols;
    RationalMatrix rref;           // reduced form, rows in original order kept by bookkeeping
};

/**
 * Rational Gauss-Jordan elimination.  Per column, the pivot is the
 * not-yet-used row of smallest original index with a nonzero entry,
 * which makes the reported pivot-row witness deterministic.
 */
inline ExactElimination exact_eliminate(const RationalMatrix& M) {
    ExactElimination out;
    out.rref = M;
    const int m = M.rows(), n = M.cols();
    std::vector<bool> used(static_cast<std::size_t>(m), false);
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int r = 0; r < m; ++r)
            if (!used[r] && out.rref(r, col) != 0) { pivot = r; break; }
        if (pivot < 0) {
            out.free_cols.push_back(col);
            continue;
        }
        used[pivot] = true;
        out.pivot_rows.push_back(pivot);
        out.pivot_cols.push_back(col);
        const Rational inv = Rational(1) / out.rref(pivot, col);
        for (int c = 0; c < n; ++c) out.rref(pivot, c) *= inv;
        for (int r = 0; r < m; ++r) {
            if (r == pivot || out.rref(r, col) == 0) continue;
            const Rational factor = out.rref(r, col);
            for (int c = 0; c < n; ++c) out.rref(r, c) -= factor * out.rref(pivot, c);
        }
    }
    out.rank = static_cast<int>(out.pivot_rows.size());
    return out;
}

/**
 * Exact right-nullspace basis, one vector per free column of the
 * reduced form.  Empty when the columns are independent.
 */
inline std::vector<std::vector<Rational>> exact_nullspace(const RationalMatrix& M) {
    const ExactElimination e = exact_eliminate(M);
    std::vector<std::vector<Rational>> basis;
    for (int fc : e.free_cols) {
        std::vector<Rational> v(static_cast<std::size_t>(M.cols()));
        v[static_cast<std::size_t>(fc)] = 1;
        for (std::size_t k = 0; k < e.pivot_cols.size(); ++k)
            v[static_cast<std::size_t>(e.pivot_cols[k])] = -e.rref(e.pivot_rows[k], fc);
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace ssvp
