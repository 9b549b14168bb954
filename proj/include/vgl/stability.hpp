#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "vgl/env.hpp"
#include "vgl/learners.hpp"
#include "vgl/matrix2.hpp"

namespace vgl {

enum class Verdict { Stable, Unstable, Marginal };

[[nodiscard]] std::string_view to_string(Verdict verdict);

/// Eigenvalues ordered by decreasing real part (positive imaginary part first for a conjugate pair).
using EigenPair = std::array<std::complex<double>, 2>;

/// Band around zero, on the largest real part, inside which a system is reported Marginal.
inline constexpr double kMarginalTolerance = 1e-12;

/**
 * Jacobian of the value-gradient update of (w1, w2) along the greedy trajectory from x0 = 0:
 * sum_t dG/dw (G'_t - G_t) = A (w1, w2)^T. Only valid for gamma = 1.
 */
[[nodiscard]] Matrix2 assemble_A(const ProblemConstants& consts);

/// F^T A F, or F^T D A F when D is given.
[[nodiscard]] Matrix2 transform(const Matrix2& F, const Matrix2& A, const std::optional<Matrix2>& D = std::nullopt);

/// Roots of mu^2 - tr(M) mu + det(M) = 0 in closed form.
[[nodiscard]] EigenPair eigenvalues_2x2(const Matrix2& M);

/// D = diag(Omega_1, Omega_2) for the inverse-Q-curvature weighting.
[[nodiscard]] Matrix2 omega_matrix(const ProblemConstants& consts);

struct OmegaFactors {
    Matrix2 D;
    Matrix2 E;
    Matrix2 B;
};

/**
 * Factors of the lambda = 1 update matrix, A = 2 E B E D, where D is the Omega matrix,
 * E = diag(1/(c2+k), 1) and B is symmetric with negative trace and determinant
 * k(k+2)(k+c2)^2. The factorisation is checked against assemble_A at lambda = 1 and a
 * std::runtime_error is thrown if it does not hold to 1e-12 relative.
 */
[[nodiscard]] OmegaFactors assemble_omega_appendix(const ProblemConstants& consts);

[[nodiscard]] Verdict classify_eigenvalues(const EigenPair& eigenvalues, double tol = kMarginalTolerance);

/**
 * Largest alpha for which the discrete iteration p <- (I + alpha M) p contracts, i.e. every
 * |1 + alpha mu| < 1. Only defined when all eigenvalues have negative real part.
 */
[[nodiscard]] std::optional<double> max_stable_alpha(const EigenPair& eigenvalues);

struct StabilityReport {
    ProblemConstants consts;
    Matrix2 F;
    OmegaMode omega_mode = OmegaMode::Identity;
    Matrix2 A;
    std::optional<Matrix2> D;
    Matrix2 transformed;
    EigenPair eigenvalues{};
    Verdict verdict = Verdict::Marginal;
    std::optional<double> max_stable_alpha;
};

[[nodiscard]] StabilityReport classify(const ProblemConstants& consts, const Matrix2& F, OmegaMode mode);

[[nodiscard]] std::string to_text(const StabilityReport& report);
[[nodiscard]] nlohmann::json to_json(const StabilityReport& report);

}  // namespace vgl
