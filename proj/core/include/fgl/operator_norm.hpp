#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "fgl/grid.hpp"

namespace fgl {

/// A Hermitian positive semi-definite operator on C^n, e.g. A*A.
using NormalOperator = std::function<std::vector<cplx>(const std::vector<cplx>&)>;

enum class EigenMethod { power, lanczos };

struct EigenOptions {
    EigenMethod method = EigenMethod::lanczos;
    double tol = 1e-8;
    /// Cap on operator applications.
    int max_iterations = 10000;
    std::uint64_t seed = 12345;
    /// Krylov dimension per Lanczos restart.
    int krylov_dim = 80;
    /// Eigenvalues at or below this absolute level count as an exact zero.
    double zero_floor = 0.0;
    /// Start vector. Empty means a seeded Gaussian random vector.
    std::vector<cplx> start;
};

struct EigenEstimate {
    double value = 0.0;        ///< dominant eigenvalue
    int iterations = 0;        ///< operator applications
    double residual = 0.0;     ///< ||B v - value v|| / value for the returned vector
    bool converged = false;
    std::vector<cplx> vector;  ///< unit eigenvector estimate
};

/// Dominant eigenvalue of a Hermitian PSD operator.
///
/// Power iteration stops once successive Rayleigh quotients differ by less
/// than tol (relative) and the residual is below 100 tol. Lanczos keeps a
/// fully reorthogonalised Krylov basis and restarts from the Ritz vector
/// until the residual is below tol. Throws Error(non_convergence) when the
/// iteration cap is hit.
EigenEstimate dominant_eigenvalue(const NormalOperator& op, std::size_t n, const EigenOptions& options);

std::vector<cplx> random_unit_vector(std::size_t n, std::uint64_t seed);

}  // namespace fgl
