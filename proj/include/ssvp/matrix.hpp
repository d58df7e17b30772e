#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <ssvp/error.hpp>

namespace ssvp {

// ============================================================
// DenseMatrix
// ============================================================

/**
 * Real m×n matrix with row-major storage.  Indices are 0-based in
 * code; positions in reports and labels are 1-based to match the
 * usual linear-algebra conventions.
 */
class DenseMatrix {
public:
    DenseMatrix() = default;

    DenseMatrix(int rows, int cols, double fill = 0.0) : rows_(rows), cols_(cols) {
        if (rows < 0 || cols < 0)
            throw Error(errkind::invalid_input, "matrix dimensions must be nonnegative");
        entries_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill);
    }

    DenseMatrix(int rows, int cols, std::vector<double> entries)
        : rows_(rows), cols_(cols), entries_(std::move(entries)) {
        if (rows < 0 || cols < 0)
            throw Error(errkind::invalid_input, "matrix dimensions must be nonnegative");
        if (entries_.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))
            throw Error(errkind::invalid_input, "entry count does not match dimensions");
    }

    DenseMatrix(std::initializer_list<std::initializer_list<double>> init) {
        rows_ = static_cast<int>(init.size());
        if (rows_ == 0) throw Error(errkind::invalid_input, "empty matrix literal");
        cols_ = static_cast<int>(init.begin()->size());
        entries_.reserve(static_cast<std::size_t>(rows_) * cols_);
        for (const auto& row : init) {
            if (static_cast<int>(row.size()) != cols_)
                throw Error(errkind::invalid_input, "ragged matrix literal");
            entries_.insert(entries_.end(), row.begin(), row.end());
        }
    }

    static DenseMatrix identity(int n) {
        DenseMatrix I(n, n);
        for (int i = 0; i < n; ++i) I(i, i) = 1.0;
        return I;
    }

    static DenseMatrix unit(int rows, int cols, int i, int j) {
        DenseMatrix E(rows, cols);
        E(i, j) = 1.0;
        return E;
    }

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }

    double& operator()(int i, int j) { return entries_[static_cast<std::size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const {
        return entries_[static_cast<std::size_t>(i) * cols_ + j];
    }

    const std::vector<double>& data() const noexcept { return entries_; }
    std::vector<double>& data() noexcept { return entries_; }

    bool all_finite() const {
        return std::all_of(entries_.begin(), entries_.end(),
                           [](double v) { return std::isfinite(v); });
    }

    DenseMatrix transpose() const {
        DenseMatrix T(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) T(j, i) = (*this)(i, j);
        return T;
    }

    DenseMatrix operator*(const DenseMatrix& rhs) const {
        if (cols_ != rhs.rows_)
            throw Error(errkind::dimension_mismatch, "matrix product dimension mismatch");
        DenseMatrix out(rows_, rhs.cols_);
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < cols_; ++k) {
                const double a = (*this)(i, k);
                if (a == 0.0) continue;
                for (int j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(k, j);
            }
        return out;
    }

    DenseMatrix operator+(const DenseMatrix& rhs) const {
        check_same_shape(rhs);
        DenseMatrix out = *this;
        for (std::size_t k = 0; k < entries_.size(); ++k) out.entries_[k] += rhs.entries_[k];
        return out;
    }

    DenseMatrix operator-(const DenseMatrix& rhs) const {
        check_same_shape(rhs);
        DenseMatrix out = *this;
        for (std::size_t k = 0; k < entries_.size(); ++k) out.entries_[k] -= rhs.entries_[k];
        return out;
    }

    DenseMatrix operator*(double s) const {
        DenseMatrix out = *this;
        for (double& v : out.entries_) v *= s;
        return out;
    }

    friend DenseMatrix operator*(double s, const DenseMatrix& M) { return M * s; }

    /** Schur (entrywise) product. */
    DenseMatrix hadamard(const DenseMatrix& rhs) const {
        check_same_shape(rhs);
        DenseMatrix out = *this;
        for (std::size_t k = 0; k < entries_.size(); ++k) out.entries_[k] *= rhs.entries_[k];
        return out;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (double v : entries_) s += v * v;
        return std::sqrt(s);
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : entries_) m = std::max(m, std::abs(v));
        return m;
    }

    bool operator==(const DenseMatrix& rhs) const {
        return rows_ == rhs.rows_ && cols_ == rhs.cols_ && entries_ == rhs.entries_;
    }

    bool approx_equal(const DenseMatrix& rhs, double tol) const {
        if (rows_ != rhs.rows_ || cols_ != rhs.cols_) return false;
        for (std::size_t k = 0; k < entries_.size(); ++k)
            if (std::abs(entries_[k] - rhs.entries_[k]) > tol) return false;
        return true;
    }

    DenseMatrix submatrix(const std::vector<int>& row_idx, const std::vector<int>& col_idx) const {
        DenseMatrix out(static_cast<int>(row_idx.size()), static_cast<int>(col_idx.size()));
        for (std::size_t i = 0; i < row_idx.size(); ++i)
            for (std::size_t j = 0; j < col_idx.size(); ++j)
                out(static_cast<int>(i), static_cast<int>(j)) = (*this)(row_idx[i], col_idx[j]);
        return out;
    }

    /** Rows permuted so output row i is input row perm[i]. */
    DenseMatrix select_rows(const std::vector<int>& perm) const {
        DenseMatrix out(static_cast<int>(perm.size()), cols_);
        for (std::size_t i = 0; i < perm.size(); ++i)
            for (int j = 0; j < cols_; ++j) out(static_cast<int>(i), j) = (*this)(perm[i], j);
        return out;
    }

    /** Columns permuted so output column j is input column perm[j]. */
    DenseMatrix select_cols(const std::vector<int>& perm) const {
        DenseMatrix out(rows_, static_cast<int>(perm.size()));
        for (int i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < perm.size(); ++j)
                out(i, static_cast<int>(j)) = (*this)(i, perm[j]);
        return out;
    }

    static DenseMatrix direct_sum(const DenseMatrix& A, const DenseMatrix& B) {
        DenseMatrix out(A.rows() + B.rows(), A.cols() + B.cols());
        for (int i = 0; i < A.rows(); ++i)
            for (int j = 0; j < A.cols(); ++j) out(i, j) = A(i, j);
        for (int i = 0; i < B.rows(); ++i)
            for (int j = 0; j < B.cols(); ++j) out(A.rows() + i, A.cols() + j) = B(i, j);
        return out;
    }

    std::string to_string() const {
        std::ostringstream os;
        for (int i = 0; i < rows_; ++i) {
            for (int j = 0; j < cols_; ++j) os << (j ? " " : "") << (*this)(i, j);
            os << '\n';
        }
        return os.str();
    }

private:
    void check_same_shape(const DenseMatrix& rhs) const {
        if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
            throw Error(errkind::dimension_mismatch, "matrix shape mismatch");
    }

    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> entries_;
};

// ============================================================
// SigmaList
// ============================================================

/**
 * A list of prospective or computed singular values.  Most
 * operations require the canonical form: sorted non-increasing,
 * every value >= 0.  Construction does not reorder, so callers
 * can detect (and warn about, or reject) unsorted input.
 */
class SigmaList {
public:
    SigmaList() = default;
    explicit SigmaList(std::vector<double> values) : values_(std::move(values)) {}
    SigmaList(std::initializer_list<double> values) : values_(values) {}

    int size() const noexcept { return static_cast<int>(values_.size()); }
    double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& values() const noexcept { return values_; }

    bool is_sorted_non_increasing() const {
        return std::is_sorted(values_.rbegin(), values_.rend());
    }

    bool all_nonnegative() const {
        return std::all_of(values_.begin(), values_.end(), [](double v) { return v >= 0.0; });
    }

    bool is_canonical() const { return is_sorted_non_increasing() && all_nonnegative(); }

    SigmaList sorted() const {
        std::vector<double> v = values_;
        std::sort(v.rbegin(), v.rend());
        return SigmaList(std::move(v));
    }

    /** Largest relative deviation against another list of equal length. */
    double max_relative_deviation(const SigmaList& other) const {
        if (size() != other.size())
            throw Error(errkind::dimension_mismatch, "sigma list length mismatch");
        double scale = 0.0;
        for (double v : values_) scale = std::max(scale, std::abs(v));
        for (double v : other.values_) scale = std::max(scale, std::abs(v));
        if (scale == 0.0) return 0.0;
        double dev = 0.0;
        for (int i = 0; i < size(); ++i)
            dev = std::max(dev, std::abs(values_[i] - other.values_[i]) / scale);
        return dev;
    }

    /**
     * Multiplicities of the distinct values in non-increasing value
     * order; two values are merged when they differ by at most
     * tol relative to the largest value.
     */
    std::vector<int> multiplicity_list(double tol = 1e-8) const {
        std::vector<int> mult;
        if (values_.empty()) return mult;
        const double scale = std::abs(values_.front());
        mult.push_back(1);
        for (int i = 1; i < size(); ++i) {
            if (std::abs(values_[i] - values_[i - 1]) <= tol * std::max(1.0, scale))
                ++mult.back();
            else
                mult.push_back(1);
        }
        return mult;
    }

private:
    std::vector<double> values_;
};

}  // namespace ssvp
