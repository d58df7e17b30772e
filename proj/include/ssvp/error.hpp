#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace ssvp {

// ============================================================
// Error reporting
// ============================================================

/**
 * Every library failure is thrown as an Error carrying a stable
 * machine-readable kind next to the human-readable message.
 *
 * Kinds in use:
 *   invalid-input, parse-error, dimension-mismatch,
 *   degenerate-spectrum, numerical-breakdown, ambiguous-pattern,
 *   not-a-superpattern, borderline-rank, infeasible,
 *   ssvp-required, ssvp-wrt-required, no-convergence, target-too-far
 */
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

namespace errkind {
inline constexpr const char* invalid_input = "invalid-input";
inline constexpr const char* parse_error = "parse-error";
inline constexpr const char* dimension_mismatch = "dimension-mismatch";
inline constexpr const char* degenerate_spectrum = "degenerate-spectrum";
inline constexpr const char* numerical_breakdown = "numerical-breakdown";
inline constexpr const char* ambiguous_pattern = "ambiguous-pattern";
inline constexpr const char* not_a_superpattern = "not-a-superpattern";
inline constexpr const char* borderline_rank = "borderline-rank";
inline constexpr const char* infeasible = "infeasible";
inline constexpr const char* ssvp_required = "ssvp-required";
inline constexpr const char* ssvp_wrt_required = "ssvp-wrt-required";
inline constexpr const char* no_convergence = "no-convergence";
inline constexpr const char* target_too_far = "target-too-far";
}  // namespace errkind

}  // namespace ssvp
