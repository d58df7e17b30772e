#pragma once

// ============================================================
// Numerical realization engine.  All solvers here move a matrix
// along the isospectral manifold {e^K A e^L} with K, L skew,
// optionally combined with an additive correction B, using a
// damped Gauss-Newton (Levenberg-Marquardt) iteration over the
// below-diagonal coordinates of K and L.  The tangent space of
// the manifold at A, Tan_A = {KA + AL}, doubles as an exact
// certificate: together with the coordinate matrices supported
// on A it spans all of R^{m x n} precisely when A has the SSVP.
// ============================================================

#include "ssvp/error.hpp"
#include "ssvp/matrix.hpp"
#include "ssvp/numerics.hpp"
#include "ssvp/pattern.hpp"
#include "ssvp/verify.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <ostream>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace ssvp {

// ============================================================
// Configuration and result types
// ============================================================

/**
 * Knobs for the damped Gauss-Newton solvers.  epsilon_seed sets
 * the magnitude of values planted on new pattern positions as a
 * fraction of the smallest nonzero singular value; damping is
 * the initial Levenberg-Marquardt parameter (multiplied by 10 on
 * a rejected step, divided by 10 on an accepted one); the
 * backtrack factor shrinks the liberation walk parameter after a
 * failed attempt.  An optional trace stream receives one JSON
 * line per accepted iteration.
 */
struct SolverConfig {
    double epsilon_seed = 0.05;
    int max_iters = 100;
    double residual_tol = 1e-12;
    double damping = 1e-3;
    double step_backtrack = 0.5;
    std::uint64_t rng_seed = 42;
    std::ostream* trace = nullptr;
};

/** Span of {K*A + A*L : K, L skew-symmetric} as an orthonormal list. */
struct TangentSpace {
    std::vector<DenseMatrix> basis;
    int dimension = 0;
};

/**
 * Outcome of a realization routine.  pattern_ok reports whether
 * the matrix carries exactly the requested pattern; sigma_error
 * is the largest relative deviation of achieved_sigmas from the
 * requested list.
 */
struct RealizationResult {
    DenseMatrix matrix;
    SigmaList achieved_sigmas;
    double sigma_error = 0.0;
    bool pattern_ok = false;
    std::string method;
    int iterations = 0;
};

namespace detail {

inline void require_config(const SolverConfig& cfg) {
    if (!(cfg.epsilon_seed > 0.0) || !(cfg.damping > 0.0) || cfg.max_iters <= 0)
        throw Error(errkind::invalid_input, "solver configuration fields must be positive");
    if (!(cfg.residual_tol >= 1e-14))
        throw Error(errkind::invalid_input, "residual tolerance must be at least 1e-14");
    if (!(cfg.step_backtrack > 0.0) || !(cfg.step_backtrack < 1.0))
        throw Error(errkind::invalid_input, "step backtrack factor must lie in (0,1)");
}

/** Skew matrix from below-diagonal coordinates in column-major order. */
inline DenseMatrix skew_from_coords(const Eigen::VectorXd& x, int offset, int s) {
    DenseMatrix K(s, s, 0.0);
    int t = offset;
    for (int j = 0; j < s; ++j)
        for (int i = j + 1; i < s; ++i, ++t) {
            K(i, j) = x(t);
            K(j, i) = -x(t);
        }
    return K;
}

/**
 * Columns are the derivatives of (K, L) -> e^K X e^L at the
 * identity, one per skew coordinate: vec((E_ij - E_ji) X) for
 * the left factor followed by vec(X (E_ij - E_ji)) for the
 * right, with vec in row-major order.  These columns also
 * generate the tangent space {KX + XL}.
 */
inline DenseMatrix tangent_generators(const DenseMatrix& X) {
    const int m = X.rows();
    const int n = X.cols();
    const int kd = m * (m - 1) / 2;
    const int ld = n * (n - 1) / 2;
    DenseMatrix G(m * n, kd + ld, 0.0);
    int t = 0;
    for (int j = 0; j < m; ++j)
        for (int i = j + 1; i < m; ++i, ++t)
            for (int c = 0; c < n; ++c) {
                G(i * n + c, t) = X(j, c);
                G(j * n + c, t) = -X(i, c);
            }
    for (int j = 0; j < n; ++j)
        for (int i = j + 1; i < n; ++i, ++t)
            for (int r = 0; r < m; ++r) {
                G(r * n + j, t) = X(r, i);
                G(r * n + i, t) = -X(r, j);
            }
    return G;
}

/** Minimum-norm damped step: -V diag(s/(s^2+lambda)) U^T r. */
inline Eigen::VectorXd lm_step(const Eigen::MatrixXd& J, const Eigen::VectorXd& r,
                               double lambda) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(J, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    Eigen::VectorXd coeff = svd.matrixU().transpose() * r;
    for (int i = 0; i < s.size(); ++i) coeff(i) *= s(i) / (s(i) * s(i) + lambda);
    return -(svd.matrixV() * coeff);
}

inline void trace_line(std::ostream* os, int iter, double residual, double damping,
                       double step_norm) {
    if (!os) return;
    (*os) << "{\"iter\":" << iter << ",\"residual\":" << residual << ",\"damping\":" << damping
          << ",\"step_norm\":" << step_norm << "}\n";
}

/** Hooks a solver hands to the shared Levenberg-Marquardt loop. */
struct LmCallbacks {
    std::function<Eigen::VectorXd()> residual;
    std::function<Eigen::MatrixXd()> jacobian;
    std::function<void(const Eigen::VectorXd&)> advance;
    std::function<void()> save;
    std::function<void()> restore;
};

struct LmOutcome {
    bool converged = false;
    double residual_norm = 0.0;
    int iterations = 0;
};

/**
 * Damped Gauss-Newton driver.  Each outer iteration performs at
 * most one accepted step; rejected trial steps raise the damping
 * by 10x and retry until either a step shrinks the residual or
 * the damping overflows its budget.
 */
inline LmOutcome lm_drive(const LmCallbacks& cb, const SolverConfig& cfg) {
    double lambda = cfg.damping;
    Eigen::VectorXd r = cb.residual();
    double rn = r.norm();
    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        if (rn <= cfg.residual_tol) return {true, rn, iter};
        const Eigen::MatrixXd J = cb.jacobian();
        bool accepted = false;
        while (lambda <= 1e12) {
            const Eigen::VectorXd step = lm_step(J, r, lambda);
            cb.save();
            cb.advance(step);
            const Eigen::VectorXd rc = cb.residual();
            const double rcn = rc.norm();
            if (rcn < rn) {
                trace_line(cfg.trace, iter + 1, rcn, lambda, step.norm());
                r = rc;
                rn = rcn;
                lambda = std::max(lambda / 10.0, 1e-14);
                accepted = true;
                break;
            }
            cb.restore();
            lambda *= 10.0;
        }
        if (!accepted) return {rn <= cfg.residual_tol, rn, iter};
    }
    return {rn <= cfg.residual_tol, rn, cfg.max_iters};
}

/** Positions (row-major order) where the pattern has a one. */
inline std::vector<std::pair<int, int>> pattern_positions(const Pattern& P) {
    std::vector<std::pair<int, int>> pos;
    for (int i = 0; i < P.rows(); ++i)
        for (int j = 0; j < P.cols(); ++j)
            if (P(i, j) == 1) pos.emplace_back(i, j);
    return pos;
}

}  // namespace detail

// ============================================================
// Tangent space of the isospectral manifold
// ============================================================

/**
 * Orthonormal basis of {K*A + A*L : K skew m x m, L skew n x n},
 * obtained from the left singular vectors of the stacked
 * generator columns.  The dimension is the numerical rank of the
 * generator matrix at the given tolerance.
 */
inline TangentSpace tangent_basis(const DenseMatrix& A, double tol = kDefaultRankTol) {
    detail::require_finite(A, "tangent_basis input");
    TangentSpace out;
    const DenseMatrix G = detail::tangent_generators(A);
    if (G.cols() == 0) return out;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(detail::to_eigen(G), Eigen::ComputeThinU);
    const auto& s = svd.singularValues();
    const double smax = s.size() > 0 ? s(0) : 0.0;
    const double thresh = tol * std::max(G.rows(), G.cols()) * smax;
    const int m = A.rows();
    const int n = A.cols();
    for (int j = 0; j < s.size(); ++j) {
        if (!(s(j) > thresh)) break;
        DenseMatrix Bj(m, n);
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < n; ++c) Bj(r, c) = svd.matrixU()(r * n + c, j);
        out.basis.push_back(Bj);
    }
    out.dimension = static_cast<int>(out.basis.size());
    return out;
}

/**
 * SSVP decided through the tangent space: the property holds iff
 * Tan_A together with the unit matrices at the nonzero positions
 * of A spans all of R^{m x n}.  Agrees with check_ssvp.
 */
inline bool ssvp_via_tangent(const DenseMatrix& A) {
    detail::require_finite(A, "ssvp_via_tangent input");
    const int m = A.rows();
    const int n = A.cols();
    if (m == 0 || n == 0) throw Error(errkind::invalid_input, "matrix must be nonempty");
    const DenseMatrix G = detail::tangent_generators(A);
    std::vector<std::pair<int, int>> supp;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j)
            if (A(i, j) != 0.0) supp.emplace_back(i, j);
    DenseMatrix S(m * n, G.cols() + static_cast<int>(supp.size()), 0.0);
    for (int r = 0; r < G.rows(); ++r)
        for (int c = 0; c < G.cols(); ++c) S(r, c) = G(r, c);
    for (std::size_t t = 0; t < supp.size(); ++t)
        S(supp[t].first * n + supp[t].second, G.cols() + static_cast<int>(t)) = 1.0;
    return rank(S) == m * n;
}

// ============================================================
// Superpattern realization
// ============================================================

/**
 * Fills the requested superpattern P while keeping the singular
 * values of A: solves e^K A e^L + B = A_hat with B supported on
 * P, where A_hat plants epsilon-sized seeds on the new
 * positions.  On success returns A_hat - B = e^K A e^L, which
 * has the exact singular values of A up to orthogonal-factor
 * roundoff and pattern P.  Seeds are halved and re-jittered on
 * retry when the solve stalls or an output entry lands in the
 * pattern ambiguity band.
 */
inline RealizationResult superpattern_realize(const DenseMatrix& A, const Pattern& P,
                                              const SolverConfig& cfg = {}) {
    detail::require_config(cfg);
    detail::require_finite(A, "superpattern input");
    const int m = A.rows();
    const int n = A.cols();
    if (m == 0 || n == 0) throw Error(errkind::invalid_input, "matrix must be nonempty");
    if (P.rows() != m || P.cols() != n)
        throw Error(errkind::dimension_mismatch, "pattern and matrix dimensions differ");
    const Pattern pa = pattern_of(A);
    if (!is_superpattern(P, pa))
        throw Error(errkind::not_a_superpattern,
                    "requested pattern does not contain the pattern of the matrix");
    const SsvpCertificate cert = check_ssvp(A);
    if (!cert.has_ssvp)
        throw Error(errkind::ssvp_required,
                    "superpattern realization requires a base matrix with the SSVP");
    const SigmaList sig = singular_values(A);
    if (P == pa) return {A, sig, 0.0, true, "superpattern", 0};

    double sref = 0.0;
    for (int i = 0; i < sig.size(); ++i)
        if (sig[i] > kDefaultRankTol * std::max(m, n) * sig[0]) sref = sig[i];

    const std::vector<std::pair<int, int>> support = detail::pattern_positions(P);
    std::vector<std::pair<int, int>> newpos;
    for (const auto& [p, q] : support)
        if (pa(p, q) == 0) newpos.emplace_back(p, q);

    const int kd = m * (m - 1) / 2;
    const int ld = n * (n - 1) / 2;
    double best_resid = std::numeric_limits<double>::infinity();
    bool pattern_failed = false;
    for (int attempt = 0; attempt <= 6; ++attempt) {
        const double eps = cfg.epsilon_seed / static_cast<double>(1 << attempt);
        std::mt19937_64 rng(cfg.rng_seed + static_cast<std::uint64_t>(attempt));
        std::uniform_real_distribution<double> jitter(0.75, 1.25);
        DenseMatrix Ahat = A;
        for (const auto& [p, q] : newpos)
            Ahat(p, q) = eps * sref * (attempt == 0 ? 1.0 : jitter(rng));

        DenseMatrix Ql = DenseMatrix::identity(m);
        DenseMatrix Qr = DenseMatrix::identity(n);
        DenseMatrix B(m, n, 0.0);
        DenseMatrix sQl = Ql, sQr = Qr, sB = B;

        detail::LmCallbacks cb;
        cb.residual = [&]() {
            const DenseMatrix X = Ql * A * Qr;
            Eigen::VectorXd r(m * n);
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < n; ++j) r(i * n + j) = X(i, j) + B(i, j) - Ahat(i, j);
            return r;
        };
        cb.jacobian = [&]() {
            const DenseMatrix X = Ql * A * Qr;
            const DenseMatrix G = detail::tangent_generators(X);
            Eigen::MatrixXd J(m * n, G.cols() + static_cast<int>(support.size()));
            J.setZero();
            for (int r = 0; r < G.rows(); ++r)
                for (int c = 0; c < G.cols(); ++c) J(r, c) = G(r, c);
            for (std::size_t t = 0; t < support.size(); ++t)
                J(support[t].first * n + support[t].second,
                  G.cols() + static_cast<Eigen::Index>(t)) = 1.0;
            return J;
        };
        cb.advance = [&](const Eigen::VectorXd& step) {
            Ql = polar_orthogonal(expm_skew(detail::skew_from_coords(step, 0, m)) * Ql);
            Qr = polar_orthogonal(Qr * expm_skew(detail::skew_from_coords(step, kd, n)));
            for (std::size_t t = 0; t < support.size(); ++t)
                B(support[t].first, support[t].second) +=
                    step(kd + ld + static_cast<Eigen::Index>(t));
        };
        cb.save = [&]() {
            sQl = Ql;
            sQr = Qr;
            sB = B;
        };
        cb.restore = [&]() {
            Ql = sQl;
            Qr = sQr;
            B = sB;
        };

        const detail::LmOutcome outcome = detail::lm_drive(cb, cfg);
        if (!outcome.converged) {
            best_resid = std::min(best_resid, outcome.residual_norm);
            continue;
        }
        const DenseMatrix out = Ahat - B;
        bool ok = false;
        try {
            ok = pattern_of(out) == P;
        } catch (const Error&) {
            ok = false;
        }
        if (!ok) {
            pattern_failed = true;
            continue;
        }
        const SigmaList achieved = singular_values(out);
        return {out, achieved, achieved.max_relative_deviation(sig), true, "superpattern",
                outcome.iterations};
    }
    if (pattern_failed)
        throw Error(errkind::ambiguous_pattern,
                    "output entries kept landing in the pattern ambiguity band after 6 retries");
    throw Error(errkind::no_convergence,
                "superpattern solve did not converge; best residual " +
                    std::to_string(best_resid));
}

// ============================================================
// Singular value bifurcation
// ============================================================

/**
 * Moves the singular values of A to the target list while
 * keeping the pattern: solves e^K (A + B) e^L = U diag(target)
 * V^T with B supported on the pattern of A, where U, V come from
 * the SVD of A.  Targets beyond a relative distance of 0.1 from
 * the spectrum of A are approached through a 10-stage linear
 * homotopy of sigma lists.
 */
inline RealizationResult bifurcate(const DenseMatrix& A, const SigmaList& target,
                                   const SolverConfig& cfg = {}) {
    detail::require_config(cfg);
    detail::require_finite(A, "bifurcate input");
    const int m = A.rows();
    const int n = A.cols();
    if (m == 0 || n == 0) throw Error(errkind::invalid_input, "matrix must be nonempty");
    const int k = std::min(m, n);
    if (target.size() != k)
        throw Error(errkind::dimension_mismatch,
                    "target list must have min(m, n) = " + std::to_string(k) + " entries");
    for (int i = 0; i < target.size(); ++i) {
        if (!std::isfinite(target[i]) || target[i] < 0.0)
            throw Error(errkind::invalid_input, "target singular values must be finite and >= 0");
    }
    const SsvpCertificate cert = check_ssvp(A);
    if (!cert.has_ssvp)
        throw Error(errkind::ssvp_required, "bifurcation requires a base matrix with the SSVP");

    const SigmaList want = target.sorted();
    const SvdFactors f = svd_factors(A);
    const double smax = f.S[0];
    double maxrel = 0.0;
    for (int i = 0; i < k; ++i) maxrel = std::max(maxrel, std::abs(want[i] - f.S[i]) / smax);
    const int stages = maxrel <= 0.1 ? 1 : 10;

    const Pattern pa = pattern_of(A);
    const std::vector<std::pair<int, int>> support = detail::pattern_positions(pa);
    const int kd = m * (m - 1) / 2;

    DenseMatrix Ql = DenseMatrix::identity(m);
    DenseMatrix Qr = DenseMatrix::identity(n);
    DenseMatrix B(m, n, 0.0);
    DenseMatrix sQl = Ql, sQr = Qr, sB = B;
    DenseMatrix M(m, n, 0.0);

    detail::LmCallbacks cb;
    cb.residual = [&]() {
        const DenseMatrix X = Ql * (A + B) * Qr;
        Eigen::VectorXd r(m * n);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) r(i * n + j) = X(i, j) - M(i, j);
        return r;
    };
    cb.jacobian = [&]() {
        const DenseMatrix X = Ql * (A + B) * Qr;
        const DenseMatrix G = detail::tangent_generators(X);
        Eigen::MatrixXd J(m * n, G.cols() + static_cast<int>(support.size()));
        J.setZero();
        for (int r = 0; r < G.rows(); ++r)
            for (int c = 0; c < G.cols(); ++c) J(r, c) = G(r, c);
        for (std::size_t t = 0; t < support.size(); ++t) {
            const int p = support[t].first;
            const int q = support[t].second;
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < n; ++j)
                    J(i * n + j, G.cols() + static_cast<Eigen::Index>(t)) = Ql(i, p) * Qr(q, j);
        }
        return J;
    };
    cb.advance = [&](const Eigen::VectorXd& step) {
        Ql = polar_orthogonal(expm_skew(detail::skew_from_coords(step, 0, m)) * Ql);
        Qr = polar_orthogonal(Qr * expm_skew(detail::skew_from_coords(step, kd, n)));
        for (std::size_t t = 0; t < support.size(); ++t)
            B(support[t].first, support[t].second) +=
                step(kd + n * (n - 1) / 2 + static_cast<Eigen::Index>(t));
    };
    cb.save = [&]() {
        sQl = Ql;
        sQr = Qr;
        sB = B;
    };
    cb.restore = [&]() {
        Ql = sQl;
        Qr = sQr;
        B = sB;
    };

    int total_iters = 0;
    for (int stage = 1; stage <= stages; ++stage) {
        DenseMatrix D(m, n, 0.0);
        for (int i = 0; i < k; ++i)
            D(i, i) = f.S[i] + (want[i] - f.S[i]) * static_cast<double>(stage) /
                               static_cast<double>(stages);
        M = f.U * D * f.V.transpose();
        const detail::LmOutcome outcome = detail::lm_drive(cb, cfg);
        total_iters += outcome.iterations;
        if (!outcome.converged) {
            if (stages > 1)
                throw Error(errkind::target_too_far,
                            "homotopy stage " + std::to_string(stage) + " of 10 stalled at residual " +
                                std::to_string(outcome.residual_norm) +
                                "; target too far from the spectrum for a local bifurcation");
            throw Error(errkind::no_convergence,
                        "bifurcation solve did not converge; residual " +
                            std::to_string(outcome.residual_norm));
        }
    }

    const DenseMatrix out = A + B;
    const SsvpCertificate recheck = check_ssvp(out);
    if (!recheck.has_ssvp)
        throw Error(errkind::no_convergence, "bifurcated matrix failed the SSVP recheck");
    bool pattern_ok = false;
    try {
        pattern_ok = pattern_of(out) == pa;
    } catch (const Error&) {
        pattern_ok = false;
    }
    const SigmaList achieved = singular_values(out);
    return {out, achieved, achieved.max_relative_deviation(want), pattern_ok, "bifurcate",
            total_iters};
}

// ============================================================
// Matrix liberation
// ============================================================

/**
 * Direction finder for liberation: a unit tangent direction D
 * supported on the wanted positions (and possibly the support of
 * A) while vanishing on every other zero position of A.  Among
 * all feasible directions the returned one maximizes the norm
 * achieved on the wanted positions per unit of generator
 * coefficients, which suppresses arbitrary components over the
 * support.  Throws infeasible when no such direction exists.
 */
inline DenseMatrix liberation_direction(const DenseMatrix& A, const Pattern& wanted) {
    detail::require_finite(A, "liberation_direction input");
    const int m = A.rows();
    const int n = A.cols();
    if (wanted.rows() != m || wanted.cols() != n)
        throw Error(errkind::dimension_mismatch, "wanted pattern dimensions differ from matrix");
    std::vector<std::pair<int, int>> want;
    std::vector<std::pair<int, int>> others;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) {
            if (wanted(i, j) == 1) {
                if (A(i, j) != 0.0)
                    throw Error(errkind::invalid_input,
                                "wanted position overlaps the support of the matrix");
                want.emplace_back(i, j);
            } else if (A(i, j) == 0.0) {
                others.emplace_back(i, j);
            }
        }
    if (want.empty())
        throw Error(errkind::invalid_input, "wanted pattern selects no positions");

    const DenseMatrix G = detail::tangent_generators(A);
    const int g = G.cols();
    if (g == 0) throw Error(errkind::infeasible, "matrix has no tangent directions");

    const int w = static_cast<int>(want.size());
    DenseMatrix W(w, g, 0.0);
    for (int t = 0; t < w; ++t)
        for (int c = 0; c < g; ++c) W(t, c) = G(want[t].first * n + want[t].second, c);
    if (rank(W) < w)
        throw Error(errkind::infeasible,
                    "tangent space does not project onto all wanted positions");

    DenseMatrix C(static_cast<int>(others.size()), g, 0.0);
    for (std::size_t t = 0; t < others.size(); ++t)
        for (int c = 0; c < g; ++c)
            C(static_cast<int>(t), c) = G(others[t].first * n + others[t].second, c);
    const DenseMatrix Nc = others.empty() ? DenseMatrix::identity(g) : nullspace(C);
    if (Nc.cols() == 0)
        throw Error(errkind::infeasible,
                    "no tangent direction vanishes on the remaining zero positions");

    const DenseMatrix What = W * Nc;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(detail::to_eigen(What), Eigen::ComputeFullV);
    const double top = svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
    if (top <= 1e-10 * (1.0 + A.max_abs()))
        throw Error(errkind::infeasible,
                    "constrained tangent space does not reach the wanted positions");
    Eigen::VectorXd y = svd.matrixV().col(0);

    const Eigen::VectorXd c = detail::to_eigen(Nc) * y;
    const Eigen::VectorXd d = detail::to_eigen(G) * c;
    DenseMatrix D(m, n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) D(i, j) = d(i * n + j);

    double wn = 0.0;
    for (const auto& [p, q] : want) wn += D(p, q) * D(p, q);
    wn = std::sqrt(wn);
    if (wn <= 1e-12 * (1.0 + D.max_abs()))
        throw Error(errkind::infeasible, "direction vanishes on the wanted positions");
    D = D * (1.0 / wn);

    for (const auto& [p, q] : others)
        if (std::abs(D(p, q)) > 1e-10 * std::max(1.0, D.max_abs()))
            throw Error(errkind::infeasible,
                        "direction cannot vanish on all other zero positions");
    for (const auto& [p, q] : want)
        if (std::abs(D(p, q)) <= 1e-8)
            throw Error(errkind::infeasible, "direction vanishes at a wanted position");
    for (const auto& [p, q] : want) {
        if (std::abs(D(p, q)) > 1e-8) {
            if (D(p, q) < 0.0) D = D * -1.0;
            break;
        }
    }
    return D;
}

/**
 * Walks A a short distance t along the tangent direction D,
 * landing on a matrix with the same singular values whose
 * pattern is the union of the pattern of A and the support of D.
 * The walk parameter starts at 0.1 and backtracks on failure;
 * each attempt seeds e^{tK0} A e^{tL0} from the least-squares
 * skew pair generating D and polishes with Gauss-Newton on the
 * zero positions of the union pattern.
 */
inline RealizationResult liberate(const DenseMatrix& A, const DenseMatrix& D,
                                  const SolverConfig& cfg = {}) {
    detail::require_config(cfg);
    detail::require_finite(A, "liberate input");
    detail::require_finite(D, "liberate direction");
    const int m = A.rows();
    const int n = A.cols();
    if (m == 0 || n == 0) throw Error(errkind::invalid_input, "matrix must be nonempty");
    if (D.rows() != m || D.cols() != n)
        throw Error(errkind::dimension_mismatch, "direction dimensions differ from matrix");

    const SigmaList sig = singular_values(A);
    if (D.max_abs() == 0.0) {
        bool pok = true;
        return {A, sig, 0.0, pok, "liberate", 0};
    }

    // The direction must lie in the tangent space; recover a
    // minimum-norm generating skew pair from it.
    const DenseMatrix G = detail::tangent_generators(A);
    Eigen::VectorXd d(m * n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) d(i * n + j) = D(i, j);
    Eigen::VectorXd c;
    double resid = d.norm();
    if (G.cols() > 0) {
        const Eigen::MatrixXd Ge = detail::to_eigen(G);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(Ge, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const auto& s = svd.singularValues();
        const double thresh =
            kDefaultRankTol * std::max(G.rows(), G.cols()) * (s.size() > 0 ? s(0) : 0.0);
        Eigen::VectorXd coeff = svd.matrixU().transpose() * d;
        for (int i = 0; i < s.size(); ++i) coeff(i) = s(i) > thresh ? coeff(i) / s(i) : 0.0;
        c = svd.matrixV() * coeff;
        resid = (Ge * c - d).norm();
    }
    if (resid > 1e-10 * std::max(1.0, d.norm()))
        throw Error(errkind::invalid_input, "direction is not in the tangent space of the matrix");

    // Union pattern: support of A plus support of D.
    const Pattern pd = pattern_of(D);
    Pattern S(m, n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) S(i, j) = (A(i, j) != 0.0 || pd(i, j) == 1) ? 1 : 0;

    const SsvpCertificate wrt = check_ssvp_wrt(A, S);
    if (!wrt.has_ssvp)
        throw Error(errkind::ssvp_wrt_required,
                    "liberation requires the SSVP with respect to the union pattern");

    std::vector<std::pair<int, int>> zeros;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j)
            if (S(i, j) == 0) zeros.emplace_back(i, j);

    const int kd = m * (m - 1) / 2;
    const DenseMatrix K0 = detail::skew_from_coords(c, 0, m);
    const DenseMatrix L0 = detail::skew_from_coords(c, kd, n);

    double t = 0.1;
    double best_resid = std::numeric_limits<double>::infinity();
    for (int walk = 0; walk <= 12; ++walk, t *= cfg.step_backtrack) {
        DenseMatrix Ql = polar_orthogonal(expm_skew(K0 * t));
        DenseMatrix Qr = polar_orthogonal(expm_skew(L0 * t));
        DenseMatrix sQl = Ql, sQr = Qr;

        detail::LmCallbacks cb;
        cb.residual = [&]() {
            const DenseMatrix X = Ql * A * Qr;
            Eigen::VectorXd r(static_cast<Eigen::Index>(zeros.size()));
            for (std::size_t z = 0; z < zeros.size(); ++z)
                r(static_cast<Eigen::Index>(z)) = X(zeros[z].first, zeros[z].second);
            return r;
        };
        cb.jacobian = [&]() {
            const DenseMatrix X = Ql * A * Qr;
            const DenseMatrix Gx = detail::tangent_generators(X);
            Eigen::MatrixXd J(static_cast<Eigen::Index>(zeros.size()), Gx.cols());
            for (std::size_t z = 0; z < zeros.size(); ++z)
                for (int col = 0; col < Gx.cols(); ++col)
                    J(static_cast<Eigen::Index>(z), col) =
                        Gx(zeros[z].first * n + zeros[z].second, col);
            return J;
        };
        cb.advance = [&](const Eigen::VectorXd& step) {
            Ql = polar_orthogonal(expm_skew(detail::skew_from_coords(step, 0, m)) * Ql);
            Qr = polar_orthogonal(Qr * expm_skew(detail::skew_from_coords(step, kd, n)));
        };
        cb.save = [&]() {
            sQl = Ql;
            sQr = Qr;
        };
        cb.restore = [&]() {
            Ql = sQl;
            Qr = sQr;
        };

        const detail::LmOutcome outcome = detail::lm_drive(cb, cfg);
        if (!outcome.converged) {
            best_resid = std::min(best_resid, outcome.residual_norm);
            continue;
        }
        const DenseMatrix X = Ql * A * Qr;
        bool ok = false;
        try {
            ok = pattern_of(X) == S;
        } catch (const Error&) {
            ok = false;
        }
        if (!ok) continue;
        if (!check_ssvp(X).has_ssvp) continue;
        const SigmaList achieved = singular_values(X);
        return {X, achieved, achieved.max_relative_deviation(sig), true, "liberate",
                outcome.iterations};
    }
    throw Error(errkind::no_convergence,
                "liberation walk exhausted its backtracking budget; best residual " +
                    std::to_string(best_resid));
}

}  // namespace ssvp
