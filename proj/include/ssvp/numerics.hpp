#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include <ssvp/error.hpp>
#include <ssvp/matrix.hpp>

namespace ssvp {

// ============================================================
// Eigen bridging
// ============================================================

namespace detail {

inline Eigen::MatrixXd to_eigen(const DenseMatrix& M) {
    Eigen::MatrixXd out(M.rows(), M.cols());
    for (int i = 0; i < M.rows(); ++i)
        for (int j = 0; j < M.cols(); ++j) out(i, j) = M(i, j);
    return out;
}

inline DenseMatrix from_eigen(const Eigen::MatrixXd& M) {
    DenseMatrix out(static_cast<int>(M.rows()), static_cast<int>(M.cols()));
    for (int i = 0; i < M.rows(); ++i)
        for (int j = 0; j < M.cols(); ++j) out(i, j) = M(i, j);
    return out;
}

inline void require_finite(const DenseMatrix& M, const char* what) {
    if (!M.all_finite())
        throw Error(errkind::invalid_input, std::string("non-finite entry in ") + what);
}

}  // namespace detail

inline constexpr double kDefaultRankTol = 1e-12;

// ============================================================
// Spectral kernels
// ============================================================

/** Singular values, non-increasing, all min(m,n) of them. */
inline SigmaList singular_values(const DenseMatrix& M) {
    detail::require_finite(M, "singular_values input");
    if (M.rows() == 0 || M.cols() == 0) return SigmaList(std::vector<double>{});
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(detail::to_eigen(M));
    const auto& s = svd.singularValues();
    std::vector<double> out(s.data(), s.data() + s.size());
    return SigmaList(std::move(out));
}

/** Full singular value decomposition M = U diag(S) V^T. */
struct SvdFactors {
    DenseMatrix U;
    SigmaList S;
    DenseMatrix V;
};

inline SvdFactors svd_factors(const DenseMatrix& M) {
    detail::require_finite(M, "svd input");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(detail::to_eigen(M),
                                          Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    return SvdFactors{detail::from_eigen(svd.matrixU()),
                      SigmaList(std::vector<double>(s.data(), s.data() + s.size())),
                      detail::from_eigen(svd.matrixV())};
}

/** Numerical rank: singular values above tol * max(m,n) * sigma_max. */
inline int rank(const DenseMatrix& M, double tol = kDefaultRankTol) {
    const SigmaList s = singular_values(M);
    if (s.size() == 0) return 0;
    const double thresh = tol * std::max(M.rows(), M.cols()) * s[0];
    int r = 0;
    for (int i = 0; i < s.size(); ++i)
        if (s[i] > thresh) ++r;
    return r;
}

/**
 * Orthonormal basis of {x : ||Mx|| <= tol * ||M|| * ||x||} taken
 * from the right singular vectors of the smallest singular values.
 * Deterministic sign: the first entry of each basis vector with
 * magnitude above tol is made positive.  Returns a cols×k matrix;
 * a trivial nullspace yields a cols×0 matrix.
 */
inline DenseMatrix nullspace(const DenseMatrix& M, double tol = kDefaultRankTol) {
    if (tol < 0.0) throw Error(errkind::invalid_input, "nullspace tolerance must be >= 0");
    detail::require_finite(M, "nullspace input");
    if (M.cols() == 0) return DenseMatrix(0, 0);
    if (M.rows() == 0) return DenseMatrix::identity(M.cols());
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(detail::to_eigen(M), Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double smax = s.size() ? s(0) : 0.0;
    const Eigen::MatrixXd V = svd.matrixV();
    std::vector<int> keep;
    for (int j = 0; j < V.cols(); ++j) {
        const double sj = j < s.size() ? s(j) : 0.0;
        if (sj <= tol * smax) keep.push_back(j);
    }
    if (keep.empty()) return DenseMatrix(M.cols(), 0);
    DenseMatrix out(M.cols(), static_cast<int>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k) {
        double sign = 1.0;
        for (int i = 0; i < M.cols(); ++i) {
            const double v = V(i, keep[k]);
            if (std::abs(v) > tol) {
                sign = v > 0.0 ? 1.0 : -1.0;
                break;
            }
        }
        for (int i = 0; i < M.cols(); ++i) out(i, static_cast<int>(k)) = sign * V(i, keep[k]);
    }
    return out;
}

/** Eigenvalues of a symmetric matrix, ascending. */
inline std::vector<double> symmetric_eigenvalues(const DenseMatrix& A) {
    if (A.rows() != A.cols())
        throw Error(errkind::invalid_input, "symmetric eigenvalues need a square matrix");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(detail::to_eigen(A));
    const auto& v = es.eigenvalues();
    return std::vector<double>(v.data(), v.data() + v.size());
}

// ============================================================
// Matrix exponential of a skew-symmetric matrix
// ============================================================

/**
 * e^K for skew-symmetric K via scaling-and-squaring with the
 * order-13 Pade approximant (the classic fixed-degree variant:
 * K is scaled so ||K||_1 <= theta_13, the [13/13] approximant is
 * evaluated, and the result is repeatedly squared).  The output of
 * a skew input is orthogonal to machine precision.
 */
inline DenseMatrix expm_skew(const DenseMatrix& K) {
    if (K.rows() != K.cols())
        throw Error(errkind::invalid_input, "expm_skew needs a square matrix");
    detail::require_finite(K, "expm_skew input");
    const int n = K.rows();
    const double knorm = K.frobenius_norm();
    double skew_defect = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) skew_defect += (K(i, j) + K(j, i)) * (K(i, j) + K(j, i));
    skew_defect = std::sqrt(skew_defect);
    if (skew_defect > 1e-12 * std::max(1.0, knorm))
        throw Error(errkind::invalid_input, "expm_skew input is not skew-symmetric");

    Eigen::MatrixXd A = detail::to_eigen(K);
    const double theta13 = 5.371920351148152;
    double norm1 = 0.0;
    for (int j = 0; j < n; ++j) norm1 = std::max(norm1, A.cwiseAbs().col(j).sum());
    int squarings = 0;
    if (norm1 > theta13) {
        squarings = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
        A /= std::pow(2.0, squarings);
    }

    static const double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                               1187353796428800.0,  129060195264000.0,   10559470521600.0,
                               670442572800.0,      33522128640.0,       1323241920.0,
                               40840800.0,          960960.0,            16380.0,
                               182.0,               1.0};
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd A2 = A * A;
    const Eigen::MatrixXd A4 = A2 * A2;
    const Eigen::MatrixXd A6 = A4 * A2;
    const Eigen::MatrixXd U =
        A * (A6 * (b[13] * A6 + b[11] * A4 + b[9] * A2) + b[7] * A6 + b[5] * A4 + b[3] * A2 +
             b[1] * I);
    const Eigen::MatrixXd V =
        A6 * (b[12] * A6 + b[10] * A4 + b[8] * A2) + b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I;
    Eigen::MatrixXd F = (V - U).partialPivLu().solve(V + U);
    for (int s = 0; s < squarings; ++s) F = F * F;
    return detail::from_eigen(F);
}

/** Nearest orthogonal matrix (polar factor) of a square matrix. */
inline DenseMatrix polar_orthogonal(const DenseMatrix& Q) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(detail::to_eigen(Q),
                                          Eigen::ComputeFullU | Eigen::ComputeFullV);
    return detail::from_eigen(Eigen::MatrixXd(svd.matrixU() * svd.matrixV().transpose()));
}

// ============================================================
// Jacobi inverse eigenvalue reconstruction
// ============================================================

/**
 * Builds the symmetric tridiagonal (Jacobi) matrix whose
 * eigenvalues are the given distinct list and whose first
 * eigenvector-basis coordinates are the given nowhere-zero unit
 * start vector, by running the Lanczos recurrence on diag(values)
 * with full reorthogonalization.  Off-diagonals come out as norms,
 * hence nonnegative; the spectrum forces them strictly positive.
 */
inline DenseMatrix lanczos_jacobi(const std::vector<double>& eigenvalues,
                                  const DenseMatrix& start) {
    const int k = static_cast<int>(eigenvalues.size());
    if (k == 0) throw Error(errkind::invalid_input, "empty eigenvalue list");
    if (start.rows() != k || start.cols() != 1)
        throw Error(errkind::invalid_input, "start vector shape must be k x 1");
    double lo = eigenvalues[0], hi = eigenvalues[0];
    for (double v : eigenvalues) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double spread = hi - lo;
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
            if (std::abs(eigenvalues[i] - eigenvalues[j]) <= 1e-12 * std::max(1.0, spread))
                throw Error(errkind::degenerate_spectrum, "repeated eigenvalues");
    double norm = 0.0;
    for (int i = 0; i < k; ++i) {
        if (start(i, 0) == 0.0)
            throw Error(errkind::invalid_input, "start vector must be nowhere zero");
        norm += start(i, 0) * start(i, 0);
    }
    if (std::abs(std::sqrt(norm) - 1.0) > 1e-10)
        throw Error(errkind::invalid_input, "start vector must have unit norm");

    Eigen::VectorXd lambda(k);
    for (int i = 0; i < k; ++i) lambda(i) = eigenvalues[i];
    Eigen::MatrixXd Q(k, k);
    for (int i = 0; i < k; ++i) Q(i, 0) = start(i, 0);
    Q.col(0).normalize();

    DenseMatrix T(k, k);
    Eigen::VectorXd r(k);
    for (int j = 0; j < k; ++j) {
        const Eigen::VectorXd qj = Q.col(j);
        r = lambda.asDiagonal() * qj;
        const double alpha = qj.dot(r);
        T(j, j) = alpha;
        r -= alpha * qj;
        if (j > 0) r -= T(j, j - 1) * Q.col(j - 1);
        for (int pass = 0; pass < 2; ++pass)
            for (int c = 0; c <= j; ++c) r -= Q.col(c).dot(r) * Q.col(c);
        if (j + 1 == k) break;
        const double beta = r.norm();
        if (beta <= 1e-12 * std::max(1.0, spread))
            throw Error(errkind::numerical_breakdown, "Lanczos off-diagonal vanished");
        T(j, j + 1) = beta;
        T(j + 1, j) = beta;
        Q.col(j + 1) = r / beta;
    }
    return T;
}

// ============================================================
// Commuting-solution dimension of A X = X B
// ============================================================

/**
 * dim{X : A X = X B} for symmetric A, B equals the number of
 * eigenvalue pairs (lambda_i, mu_j) with |lambda_i - mu_j| <= tol,
 * counted with multiplicity.
 */
inline int sylvester_commuting_dim(const DenseMatrix& Asym, const DenseMatrix& Bsym, double tol) {
    const std::vector<double> lam = symmetric_eigenvalues(Asym);
    const std::vector<double> mu = symmetric_eigenvalues(Bsym);
    int dim = 0;
    for (double l : lam)
        for (double m : mu)
            if (std::abs(l - m) <= tol) ++dim;
    return dim;
}

// ============================================================
// Finite differences
// ============================================================

using VectorFn = std::function<std::vector<double>(const std::vector<double>&)>;

/** Central-difference Jacobian of f at x with step h. */
inline DenseMatrix fd_jacobian(const VectorFn& f, const std::vector<double>& x, double h) {
    if (h <= 0.0) throw Error(errkind::invalid_input, "finite-difference step must be positive");
    const int n = static_cast<int>(x.size());
    std::vector<double> xp = x, xm = x;
    const std::vector<double> f0 = f(x);
    const int m = static_cast<int>(f0.size());
    DenseMatrix J(m, n);
    for (int j = 0; j < n; ++j) {
        xp[j] = x[j] + h;
        xm[j] = x[j] - h;
        const std::vector<double> fp = f(xp);
        const std::vector<double> fm = f(xm);
        for (int i = 0; i < m; ++i) J(i, j) = (fp[i] - fm[i]) / (2.0 * h);
        xp[j] = x[j];
        xm[j] = x[j];
    }
    return J;
}

}  // namespace ssvp
