#pragma once

// ============================================================
// Frozen test fixtures
// ============================================================
//
// Small matrices with hand-checked decision data, shared across the
// suite.  The expected verification matrices were derived entry by
// entry from the defining bilinear forms and are pinned here as
// integer data so any construction drift fails loudly.

#include <vector>

#include <ssvp/matrix.hpp>
#include <ssvp/pattern.hpp>
#include <ssvp/realize.hpp>

namespace fx {

/** 3x4 staircase with full-length diagonal; has the SSVP. */
inline ssvp::DenseMatrix example_a() {
    return ssvp::DenseMatrix{{1, 1, 0, 0}, {0, 1, 1, 0}, {0, 0, 1, 1}};
}

/** Same staircase with the last row zeroed; lacks the SSVP. */
inline ssvp::DenseMatrix example_b() {
    return ssvp::DenseMatrix{{1, 1, 0, 0}, {0, 1, 1, 0}, {0, 0, 0, 0}};
}

/** Full 9x12 coefficient matrix of example_a. */
inline ssvp::DenseMatrix psi_a() {
    return ssvp::DenseMatrix{
        {1, -1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0},  {0, 0, -1, 0, 1, 0, 0, 0, 1, 0, 0, 0},
        {0, 0, 0, -1, 0, 0, 0, 0, 1, 0, 0, 0},  {0, 0, -1, 0, 0, 1, -1, 0, 0, 1, 0, 0},
        {0, 0, 0, -1, 0, 0, 0, -1, 0, 1, 0, 0}, {0, 0, 0, 0, 0, 0, 0, -1, 0, 0, 1, -1},
        {0, -1, -1, 0, 1, 1, 0, 0, 0, 0, 0, 0}, {0, 0, -1, -1, 0, 0, 0, 0, 1, 1, 0, 0},
        {0, 0, 0, 0, 0, 0, -1, -1, 0, 1, 1, 0}};
}

/** Columns of psi_a at the zero positions of example_a. */
inline ssvp::DenseMatrix phi_a() {
    return ssvp::DenseMatrix{{0, 0, 1, 0, 0, 0},  {-1, 0, 1, 0, 1, 0}, {0, -1, 0, 0, 1, 0},
                             {-1, 0, 0, 0, 0, 1}, {0, -1, 0, -1, 0, 1}, {0, 0, 0, -1, 0, 0},
                             {-1, 0, 1, 0, 0, 0}, {-1, -1, 0, 0, 1, 1}, {0, 0, 0, -1, 0, 1}};
}

/** Full 9x12 coefficient matrix of example_b. */
inline ssvp::DenseMatrix psi_b() {
    return ssvp::DenseMatrix{
        {1, -1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0},  {0, 0, -1, 0, 1, 0, 0, 0, 0, 0, 0, 0},
        {0, 0, 0, -1, 0, 0, 0, 0, 0, 0, 0, 0},  {0, 0, -1, 0, 0, 1, -1, 0, 0, 0, 0, 0},
        {0, 0, 0, -1, 0, 0, 0, -1, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 0, 0, -1, 0, 0, 0, 0},
        {0, -1, -1, 0, 1, 1, 0, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0},
        {0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0}};
}

/**
 * Columns of psi_b at the zero positions of example_b, i.e. columns
 * 3, 4, 5, 8, 9, 10, 11, 12 (1-based) of psi_b.
 */
inline ssvp::DenseMatrix phi_b() {
    return ssvp::DenseMatrix{{0, 0, 1, 0, 0, 0, 0, 0},   {-1, 0, 1, 0, 0, 0, 0, 0},
                             {0, -1, 0, 0, 0, 0, 0, 0},  {-1, 0, 0, 0, 0, 0, 0, 0},
                             {0, -1, 0, -1, 0, 0, 0, 0}, {0, 0, 0, -1, 0, 0, 0, 0},
                             {-1, 0, 1, 0, 0, 0, 0, 0},  {0, 0, 0, 0, 1, 1, 0, 0},
                             {0, 0, 0, 0, 0, 1, 1, 0}};
}

/** Known nullspace member of phi_b. */
inline std::vector<double> null_vector_b() { return {0, 0, 0, 0, 1, -1, 1, 0}; }

/** The violating matrix reconstructed from null_vector_b. */
inline ssvp::DenseMatrix certificate_y_b() {
    return ssvp::DenseMatrix{{0, 0, 0, 0}, {0, 0, 0, 0}, {1, -1, 1, 0}};
}

/**
 * 6x6 bordered orthogonal block: the nowhere-zero 5x5 reflection with
 * a unit bottom-right corner and a single coupling row.  Its singular
 * values are ((1+sqrt 5)/2, 1, 1, 1, 1, (sqrt 5 - 1)/2), so the
 * multiplicity list is (1, 4, 1).
 */
inline ssvp::DenseMatrix bordered_q() {
    ssvp::DenseMatrix A(6, 6);
    const ssvp::DenseMatrix Q = ssvp::nowhere_zero_orthogonal(5);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) A(i, j) = Q(i, j);
    A(5, 4) = 1.0;
    A(5, 5) = 1.0;
    return A;
}

}  // namespace fx
