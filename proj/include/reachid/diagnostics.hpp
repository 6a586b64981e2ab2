#pragma once

// Numerical surrogates for the genericity hypotheses behind the uniqueness
// guarantees: invertible A, distinct eigenvalues of A and of A^2, b^T eta != 0
// for every left eigenvector eta, and controllability.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "reachid/linalg.hpp"
#include "reachid/reach.hpp"

namespace reachid {

enum class Verdict { GenericAsymmetricOK, GenericSymmetricOK, NonGeneric };

constexpr std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::GenericAsymmetricOK: return "GenericAsymmetricOK";
        case Verdict::GenericSymmetricOK: return "GenericSymmetricOK";
        case Verdict::NonGeneric: return "NonGeneric";
    }
    return "Unknown";
}

/// Which uniqueness statement the verdict is judged against.
enum class InputKind { Asymmetric, Symmetric };

struct Flag {
    bool ok = false;
    double margin = 0.0;
};

struct GenericityReport {
    Flag a_invertible;     // margin: smallest relative pivot of A
    Flag eigs_distinct_A;  // margin: min |lambda_i - lambda_j|
    Flag eigs_distinct_A2;
    Flag b_eta_nonzero;    // margin: min |b^T eta_i| / |b|
    Flag controllable;     // margin: smallest relative pivot of [b, Ab, ...]
    bool asymmetric_ok = false;
    bool symmetric_ok = false;
    Verdict verdict = Verdict::NonGeneric;
    std::vector<Complex> eigenvalues;
};

namespace detail {

inline Flag distinct_flag(const std::vector<Complex>& eigs, double tol) {
    double gap = std::numeric_limits<double>::infinity();
    double biggest = 0.0;
    for (std::size_t i = 0; i < eigs.size(); ++i) {
        biggest = std::max(biggest, std::abs(eigs[i]));
        for (std::size_t j = i + 1; j < eigs.size(); ++j) gap = std::min(gap, std::abs(eigs[i] - eigs[j]));
    }
    if (eigs.size() < 2) gap = std::numeric_limits<double>::infinity();
    return {gap > tol * (1.0 + biggest), gap};
}

inline Matrix controllability_matrix(const LinearSystem& sys) {
    std::vector<Vector> cols{sys.b()};
    for (std::size_t k = 1; k < sys.n(); ++k) cols.push_back(sys.A() * cols.back());
    return Matrix::from_columns(cols);
}

}  // namespace detail

/// Evaluates every hypothesis with its margin. Asymmetric inputs need an
/// invertible A with distinct eigenvalues and b^T eta_i != 0; symmetric inputs
/// additionally need distinct eigenvalues of A^2. The verdict reports the
/// hypotheses relevant to `kind`.
inline GenericityReport genericity_check(const LinearSystem& sys, double tol = 1e-7,
                                         InputKind kind = InputKind::Asymmetric) {
    if (!(tol > 0.0)) fail(ErrorKind::InvalidArgument, "genericity tolerance must be positive");
    GenericityReport r;
    const Matrix& A = sys.A();

    const double pivot = min_relative_pivot(A);
    r.a_invertible = {pivot > tol, pivot};

    r.eigenvalues = eigenvalues(A);
    r.eigs_distinct_A = detail::distinct_flag(r.eigenvalues, tol);
    r.eigs_distinct_A2 = detail::distinct_flag(eigenvalues(A * A), tol);

    const double bnorm = sys.b().norm();
    double min_proj = std::numeric_limits<double>::infinity();
    for (const auto& lambda : r.eigenvalues) {
        const auto eta = left_eigenvector(A, lambda);
        Complex proj = 0.0;
        for (std::size_t i = 0; i < sys.n(); ++i) proj += sys.b()[i] * eta[i];
        min_proj = std::min(min_proj, std::abs(proj) / bnorm);
    }
    r.b_eta_nonzero = {min_proj > tol, min_proj};

    const double cpivot = min_relative_pivot(detail::controllability_matrix(sys));
    r.controllable = {cpivot > tol, cpivot};

    r.asymmetric_ok = r.a_invertible.ok && r.eigs_distinct_A.ok && r.b_eta_nonzero.ok;
    r.symmetric_ok = r.asymmetric_ok && r.eigs_distinct_A2.ok;
    if (kind == InputKind::Asymmetric)
        r.verdict = r.asymmetric_ok ? Verdict::GenericAsymmetricOK : Verdict::NonGeneric;
    else
        r.verdict = r.symmetric_ok ? Verdict::GenericSymmetricOK : Verdict::NonGeneric;
    return r;
}

}  // namespace reachid
