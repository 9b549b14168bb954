#include "vgl/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace vgl {

std::string_view to_string(Verdict verdict) {
    switch (verdict) {
        case Verdict::Stable: return "Stable";
        case Verdict::Unstable: return "Unstable";
        case Verdict::Marginal: return "Marginal";
    }
    return "Unknown";
}

Matrix2 assemble_A(const ProblemConstants& consts) {
    consts.validate();
    if (consts.gamma != 1.0) {
        throw std::domain_error("the closed-form update matrix assumes gamma = 1");
    }
    const double c1 = consts.c1;
    const double c2 = consts.c2;
    const double k = consts.k;
    const double lambda = consts.lambda;
    const double s1 = c1 + k;
    const double s2 = c2 + k;
    return {
        -k * (k * lambda + c2 * c2 + k * (1.0 - lambda) * c2) / (s1 * s2 * s2) - k / s1,
        k * (c2 + k - lambda * (k + 1.0)) / (s2 * s2),
        k * (c2 - 1.0) / (s2 * s1),
        (-1.0 - k) / s2,
    };
}

Matrix2 transform(const Matrix2& F, const Matrix2& A, const std::optional<Matrix2>& D) {
    const Matrix2 Ft = F.transposed();
    return D ? Ft * *D * A * F : Ft * A * F;
}

EigenPair eigenvalues_2x2(const Matrix2& M) {
    const double half_trace = 0.5 * M.trace();
    const double det = M.determinant();
    const double disc = half_trace * half_trace - det;
    if (disc < 0.0) {
        const double im = std::sqrt(-disc);
        return {std::complex<double>{half_trace, im}, std::complex<double>{half_trace, -im}};
    }
    // Avoid cancellation: take the root of larger magnitude first, then use det = mu1 * mu2.
    const double q = half_trace + std::copysign(std::sqrt(disc), half_trace);
    const double r1 = q;
    const double r2 = q != 0.0 ? det / q : 0.0;
    return {std::complex<double>{std::max(r1, r2), 0.0}, std::complex<double>{std::min(r1, r2), 0.0}};
}

Matrix2 omega_matrix(const ProblemConstants& consts) {
    return Matrix2::diagonal(1.0 / (2.0 * (consts.gamma * consts.c1 + consts.k)),
                             1.0 / (2.0 * (consts.gamma * consts.c2 + consts.k)));
}

OmegaFactors assemble_omega_appendix(const ProblemConstants& consts) {
    ProblemConstants monte_carlo = consts;
    monte_carlo.lambda = 1.0;
    const double c2 = consts.c2;
    const double k = consts.k;
    const double s2 = c2 + k;
    OmegaFactors f;
    f.D = omega_matrix(monte_carlo);
    f.E = Matrix2::diagonal(1.0 / s2, 1.0);
    f.B = {-k * (k + c2 * c2 + s2 * s2), k * (c2 - 1.0), k * (c2 - 1.0), -1.0 - k};

    const Matrix2 A = assemble_A(monte_carlo);
    const Matrix2 rebuilt = 2.0 * (f.E * f.B * f.E * f.D);
    const double scale = std::max({std::abs(A.m11), std::abs(A.m12), std::abs(A.m21), std::abs(A.m22)});
    const Matrix2 diff = A - rebuilt;
    const double err = std::max({std::abs(diff.m11), std::abs(diff.m12), std::abs(diff.m21), std::abs(diff.m22)});
    if (err > 1e-12 * scale) {
        throw std::runtime_error("A = 2 E B E D factorisation check failed");
    }
    return f;
}

Verdict classify_eigenvalues(const EigenPair& eigenvalues, double tol) {
    const double max_real = std::max(eigenvalues[0].real(), eigenvalues[1].real());
    if (max_real > tol) return Verdict::Unstable;
    if (max_real < -tol) return Verdict::Stable;
    return Verdict::Marginal;
}

std::optional<double> max_stable_alpha(const EigenPair& eigenvalues) {
    double bound = std::numeric_limits<double>::infinity();
    for (const auto& mu : eigenvalues) {
        if (!(mu.real() < 0.0)) return std::nullopt;
        bound = std::min(bound, -2.0 * mu.real() / std::norm(mu));
    }
    return bound;
}

StabilityReport classify(const ProblemConstants& consts, const Matrix2& F, OmegaMode mode) {
    StabilityReport report;
    report.consts = consts;
    report.F = F;
    report.omega_mode = mode;
    report.A = assemble_A(consts);
    if (mode == OmegaMode::InverseQCurvature) report.D = omega_matrix(consts);
    report.transformed = transform(F, report.A, report.D);
    report.eigenvalues = eigenvalues_2x2(report.transformed);
    report.verdict = classify_eigenvalues(report.eigenvalues);
    if (report.verdict == Verdict::Stable) report.max_stable_alpha = max_stable_alpha(report.eigenvalues);
    return report;
}

namespace {

std::string format_complex(const std::complex<double>& z) {
    std::ostringstream os;
    os.precision(10);
    os << z.real();
    if (z.imag() != 0.0) os << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
    return os.str();
}

nlohmann::json matrix_json(const Matrix2& m) { return {{m.m11, m.m12}, {m.m21, m.m22}}; }

}  // namespace

std::string to_text(const StabilityReport& r) {
    std::ostringstream os;
    os.precision(10);
    os << "constants: c1=" << r.consts.c1 << " c2=" << r.consts.c2 << " k=" << r.consts.k
       << " gamma=" << r.consts.gamma << " lambda=" << r.consts.lambda << '\n';
    os << "omega: " << (r.omega_mode == OmegaMode::Identity ? "identity" : "inverse-q-curvature") << '\n';
    os << "F = " << r.F << '\n';
    os << "A = " << r.A << '\n';
    if (r.D) os << "D = " << *r.D << '\n';
    os << (r.D ? "F^T D A F = " : "F^T A F = ") << r.transformed << '\n';
    os << "eigenvalues: " << format_complex(r.eigenvalues[0]) << ", " << format_complex(r.eigenvalues[1]) << '\n';
    os << "verdict: " << to_string(r.verdict) << '\n';
    if (r.max_stable_alpha) os << "max stable alpha: " << *r.max_stable_alpha << '\n';
    return os.str();
}

nlohmann::json to_json(const StabilityReport& r) {
    nlohmann::json j;
    j["constants"] = {{"c1", r.consts.c1},
                      {"c2", r.consts.c2},
                      {"k", r.consts.k},
                      {"gamma", r.consts.gamma},
                      {"lambda", r.consts.lambda}};
    j["omega"] = r.omega_mode == OmegaMode::Identity ? "identity" : "inverse-q-curvature";
    j["F"] = matrix_json(r.F);
    j["A"] = matrix_json(r.A);
    j["D"] = r.D ? matrix_json(*r.D) : nlohmann::json(nullptr);
    j["transformed"] = matrix_json(r.transformed);
    j["eigenvalues"] = nlohmann::json::array();
    for (const auto& mu : r.eigenvalues) j["eigenvalues"].push_back({{"re", mu.real()}, {"im", mu.imag()}});
    j["verdict"] = std::string(to_string(r.verdict));
    j["max_stable_alpha"] = r.max_stable_alpha ? nlohmann::json(*r.max_stable_alpha) : nlohmann::json(nullptr);
    return j;
}

}  // namespace vgl
