#include "fgl/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fgl/error.hpp"

namespace fgl {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::corrupt_state: return "corrupt_state";
    case ErrorKind::blowup_exceeded: return "blowup_exceeded";
    case ErrorKind::singular_substep: return "singular_substep";
    case ErrorKind::step_underflow: return "step_underflow";
    case ErrorKind::non_convergence: return "non_convergence";
    case ErrorKind::capacity: return "capacity";
    case ErrorKind::refused: return "refused";
    case ErrorKind::unstable: return "unstable";
    }
    return "unknown";
}

GridSpec::GridSpec(double half_length, std::size_t points, int dim)
    : half_length_(half_length), points_(points), dim_(dim), dx_(0.0) {
    if (!(half_length > 0.0) || !std::isfinite(half_length)) {
        std::ostringstream os;
        os << "grid half-length must be positive and finite, got " << half_length;
        throw Error(ErrorKind::invalid_argument, os.str());
    }
    if (points < 4 || points % 2 != 0) {
        std::ostringstream os;
        os << "grid needs an even number of points >= 4, got " << points;
        throw Error(ErrorKind::invalid_argument, os.str());
    }
    if (dim < 1 || dim > 2) {
        throw Error(ErrorKind::invalid_argument, "grid dimension must be 1 or 2");
    }
    dx_ = 2.0 * half_length / static_cast<double>(points);
}

GridSpec make_grid(double half_length, std::size_t points, int dim) {
    return GridSpec(half_length, points, dim);
}

std::size_t GridSpec::size() const noexcept {
    return dim_ == 1 ? points_ : points_ * points_;
}

double GridSpec::cell_volume() const noexcept {
    return dim_ == 1 ? dx_ : dx_ * dx_;
}

std::vector<double> GridSpec::nodes() const {
    std::vector<double> x(points_);
    for (std::size_t m = 0; m < points_; ++m) x[m] = node(m);
    return x;
}

long GridSpec::mode(std::size_t m) const noexcept {
    const auto n = static_cast<long>(points_);
    const auto j = static_cast<long>(m);
    return j < n / 2 ? j : j - n;
}

double GridSpec::wavenumber(std::size_t m) const noexcept {
    return static_cast<double>(mode(m)) * std::numbers::pi / half_length_;
}

std::vector<double> GridSpec::wavenumbers() const {
    std::vector<double> k(points_);
    for (std::size_t m = 0; m < points_; ++m) k[m] = wavenumber(m);
    return k;
}

std::size_t GridSpec::axis_index(std::size_t flat, int axis) const noexcept {
    if (dim_ == 1) return flat;
    return axis == 0 ? flat / points_ : flat % points_;
}

double GridSpec::coordinate(std::size_t flat, int axis) const noexcept {
    return node(axis_index(flat, axis));
}

double GridSpec::radius(std::size_t flat) const noexcept {
    if (dim_ == 1) return std::abs(node(flat));
    return std::hypot(coordinate(flat, 0), coordinate(flat, 1));
}

double GridSpec::frequency_magnitude(std::size_t flat) const noexcept {
    if (dim_ == 1) return std::abs(wavenumber(flat));
    return std::hypot(wavenumber(axis_index(flat, 0)), wavenumber(axis_index(flat, 1)));
}

FieldState::FieldState(GridSpec g) : grid(g), values(g.size(), cplx{}) {}

FieldState::FieldState(GridSpec g, std::vector<cplx> v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.size()) {
        throw Error(ErrorKind::invalid_argument, "field sample count does not match its grid");
    }
}

bool FieldState::finite() const noexcept {
    return std::all_of(values.begin(), values.end(),
                       [](const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

namespace {
void require_same_grid(const GridSpec& a, const GridSpec& b) {
    if (!(a == b)) throw Error(ErrorKind::invalid_argument, "fields live on different grids");
}
}  // namespace

FieldState& FieldState::operator*=(double s) {
    for (auto& z : values) z *= s;
    return *this;
}

FieldState& FieldState::operator+=(const FieldState& other) {
    require_same_grid(grid, other.grid);
    for (std::size_t i = 0; i < values.size(); ++i) values[i] += other.values[i];
    return *this;
}

FieldState& FieldState::operator-=(const FieldState& other) {
    require_same_grid(grid, other.grid);
    for (std::size_t i = 0; i < values.size(); ++i) values[i] -= other.values[i];
    return *this;
}

FieldState operator*(double s, FieldState f) { return f *= s; }
FieldState operator+(FieldState a, const FieldState& b) { return a += b; }
FieldState operator-(FieldState a, const FieldState& b) { return a -= b; }

FieldState pointwise_multiply(FieldState f, std::span<const double> w) {
    if (w.size() != f.size()) throw Error(ErrorKind::invalid_argument, "weight/field size mismatch");
    for (std::size_t i = 0; i < f.size(); ++i) f[i] *= w[i];
    return f;
}

FieldState pointwise_divide(FieldState f, std::span<const double> w) {
    if (w.size() != f.size()) throw Error(ErrorKind::invalid_argument, "weight/field size mismatch");
    for (std::size_t i = 0; i < f.size(); ++i) f[i] /= w[i];
    return f;
}

double max_abs_diff(const FieldState& a, const FieldState& b) {
    require_same_grid(a.grid, b.grid);
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

void require_dim(const GridSpec& grid, int dim, const char* where) {
    if (grid.dim() != dim) {
        std::ostringstream os;
        os << where << ": needs a " << dim << "-D grid, got " << grid.dim() << "-D";
        throw Error(ErrorKind::invalid_argument, os.str());
    }
}

void require_finite(const FieldState& f, const char* where) {
    if (!f.finite()) {
        throw Error(ErrorKind::corrupt_state, std::string(where) + ": field contains NaN or Inf");
    }
}

}  // namespace fgl
