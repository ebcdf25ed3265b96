#include "fgl/operator_norm.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>
#include <sstream>

#include "fgl/error.hpp"

namespace fgl {

namespace {

double vnorm(const std::vector<cplx>& v) {
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return std::sqrt(s);
}

cplx vdot(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    cplx s{};
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

void scale(std::vector<cplx>& v, double s) {
    for (auto& z : v) z *= s;
}

// ||w - lambda v|| / |lambda|, with the convention 0 for the zero operator.
double relative_residual(const std::vector<cplx>& w, const std::vector<cplx>& v, double lambda) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += std::norm(w[i] - lambda * v[i]);
    const double r = std::sqrt(s);
    if (lambda == 0.0) return r;
    return r / std::abs(lambda);
}

std::vector<cplx> initial_vector(std::size_t n, const EigenOptions& options) {
    if (options.start.empty()) return random_unit_vector(n, options.seed);
    if (options.start.size() != n) throw Error(ErrorKind::invalid_argument, "start vector has the wrong size");
    auto v = options.start;
    const double nv = vnorm(v);
    if (nv == 0.0) throw Error(ErrorKind::invalid_argument, "start vector is zero");
    scale(v, 1.0 / nv);
    return v;
}

[[noreturn]] void fail(const char* method, int iterations, double residual) {
    std::ostringstream os;
    os << method << " did not converge within " << iterations << " operator applications (residual "
       << residual << ")";
    throw Error(ErrorKind::non_convergence, os.str());
}

EigenEstimate power_method(const NormalOperator& op, std::size_t n, const EigenOptions& options) {
    EigenEstimate est;
    auto v = initial_vector(n, options);
    double previous = 0.0;
    for (int it = 1; it <= options.max_iterations; ++it) {
        auto w = op(v);
        const double rq = vdot(v, w).real();
        const double res = relative_residual(w, v, rq);
        est.iterations = it;
        est.value = rq;
        est.residual = res;
        const double nw = vnorm(w);
        if (nw == 0.0 || rq <= options.zero_floor) {
            // v lies in the kernel; for a PSD operator with a random start this
            // means the operator vanishes.
            est.value = 0.0;
            est.residual = 0.0;
            est.converged = true;
            est.vector = std::move(v);
            return est;
        }
        if (it > 1 && std::abs(rq - previous) <= options.tol * std::abs(rq) && res <= 100.0 * options.tol) {
            est.converged = true;
            est.vector = std::move(v);
            return est;
        }
        previous = rq;
        scale(w, 1.0 / nw);
        v = std::move(w);
    }
    fail("power iteration", options.max_iterations, est.residual);
}

EigenEstimate lanczos_method(const NormalOperator& op, std::size_t n, const EigenOptions& options) {
    EigenEstimate est;
    auto v = initial_vector(n, options);
    const int m = static_cast<int>(std::min<std::size_t>(n, static_cast<std::size_t>(std::max(2, options.krylov_dim))));
    double previous = -1.0;
    int applications = 0;

    while (applications < options.max_iterations) {
        std::vector<std::vector<cplx>> basis{v};
        std::vector<double> alpha;
        std::vector<double> beta;
        for (int j = 0; j < m; ++j) {
            auto w = op(basis[j]);
            ++applications;
            alpha.push_back(vdot(basis[j], w).real());
            // Full reorthogonalisation, twice.
            for (int pass = 0; pass < 2; ++pass) {
                for (const auto& q : basis) {
                    const cplx c = vdot(q, w);
                    for (std::size_t i = 0; i < n; ++i) w[i] -= c * q[i];
                }
            }
            const double b = vnorm(w);
            if (j + 1 == m || b <= 1e-14 * std::max(1.0, std::abs(alpha.back()))) break;
            beta.push_back(b);
            scale(w, 1.0 / b);
            basis.push_back(std::move(w));
        }

        const int k = static_cast<int>(alpha.size());
        Eigen::VectorXd diag(k);
        Eigen::VectorXd sub(std::max(0, k - 1));
        for (int i = 0; i < k; ++i) diag(i) = alpha[i];
        for (int i = 0; i + 1 < k; ++i) sub(i) = beta[i];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
        tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
        const Eigen::VectorXd y = tri.eigenvectors().col(k - 1);

        std::vector<cplx> ritz(n, cplx{});
        for (int i = 0; i < k; ++i)
            for (std::size_t r = 0; r < n; ++r) ritz[r] += y(i) * basis[i][r];
        const double nr = vnorm(ritz);
        scale(ritz, 1.0 / nr);

        auto bw = op(ritz);
        ++applications;
        const double rq = vdot(ritz, bw).real();
        const double res = relative_residual(bw, ritz, rq);
        est.iterations = applications;
        est.residual = res;
        est.vector = ritz;

        if (rq <= options.zero_floor || vnorm(bw) == 0.0) {
            est.value = 0.0;
            est.residual = 0.0;
            est.converged = true;
            return est;
        }
        est.value = rq;
        const bool steady = previous >= 0.0 && std::abs(rq - previous) <= options.tol * std::abs(rq);
        if (res <= options.tol || (steady && res <= 100.0 * options.tol)) {
            est.converged = true;
            return est;
        }
        previous = rq;
        v = std::move(ritz);
    }
    fail("Lanczos iteration", applications, est.residual);
}

}  // namespace

std::vector<cplx> random_unit_vector(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<cplx> v(n);
    for (auto& z : v) z = gauss(rng);
    scale(v, 1.0 / vnorm(v));
    return v;
}

EigenEstimate dominant_eigenvalue(const NormalOperator& op, std::size_t n, const EigenOptions& options) {
    if (n == 0) throw Error(ErrorKind::invalid_argument, "empty operator");
    if (!(options.tol > 0.0 && options.tol < 1.0))
        throw Error(ErrorKind::invalid_argument, "eigen tolerance must lie in (0, 1)");
    if (options.max_iterations < 1) throw Error(ErrorKind::invalid_argument, "max_iterations must be positive");
    return options.method == EigenMethod::power ? power_method(op, n, options) : lanczos_method(op, n, options);
}

}  // namespace fgl
