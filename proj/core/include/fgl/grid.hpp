#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <type_traits>
#include <vector>

namespace fgl {

using cplx = std::complex<double>;

/// Periodic uniform grid on [-L, L)^dim with N points per axis.
///
/// Node m along an axis sits at x_m = -L + m dx, dx = 2L/N. Frequencies are
/// stored in FFT order: storage index m maps to the integer mode
/// j = m for m < N/2 and j = m - N otherwise, with wavenumber k_j = j pi / L.
/// The mode j = -N/2 has no partner.
class GridSpec {
public:
    /// Throws Error(invalid_argument) unless L > 0, N >= 4 even, 1 <= dim <= 2.
    GridSpec(double half_length, std::size_t points, int dim = 1);

    double half_length() const noexcept { return half_length_; }
    std::size_t points() const noexcept { return points_; }
    int dim() const noexcept { return dim_; }
    double dx() const noexcept { return dx_; }

    /// Total number of samples, N^dim.
    std::size_t size() const noexcept;

    /// Cell volume dx^dim used by the rectangle rule.
    double cell_volume() const noexcept;

    double node(std::size_t m) const noexcept { return -half_length_ + static_cast<double>(m) * dx_; }
    std::vector<double> nodes() const;

    /// Signed integer mode of storage index m.
    long mode(std::size_t m) const noexcept;
    double wavenumber(std::size_t m) const noexcept;
    std::vector<double> wavenumbers() const;
    bool is_unpaired(std::size_t m) const noexcept { return m == points_ / 2; }

    /// Euclidean |x| and |k| at a flat storage index (row-major for dim 2).
    double radius(std::size_t flat) const noexcept;
    double frequency_magnitude(std::size_t flat) const noexcept;
    /// Coordinate along `axis` of the flat index.
    double coordinate(std::size_t flat, int axis) const noexcept;
    std::size_t axis_index(std::size_t flat, int axis) const noexcept;

    friend bool operator==(const GridSpec&, const GridSpec&) = default;

private:
    double half_length_;
    std::size_t points_;
    int dim_;
    double dx_;
};

GridSpec make_grid(double half_length, std::size_t points, int dim = 1);

/// Complex grid function with value semantics.
struct FieldState {
    GridSpec grid;
    std::vector<cplx> values;

    explicit FieldState(GridSpec g);
    FieldState(GridSpec g, std::vector<cplx> v);

    std::size_t size() const noexcept { return values.size(); }
    bool finite() const noexcept;

    cplx& operator[](std::size_t i) { return values[i]; }
    const cplx& operator[](std::size_t i) const { return values[i]; }

    FieldState& operator*=(double s);
    FieldState& operator+=(const FieldState& other);
    FieldState& operator-=(const FieldState& other);
};

FieldState operator*(double s, FieldState f);
FieldState operator+(FieldState a, const FieldState& b);
FieldState operator-(FieldState a, const FieldState& b);

/// Pointwise product with a real weight sampled on the same grid.
FieldState pointwise_multiply(FieldState f, std::span<const double> w);
FieldState pointwise_divide(FieldState f, std::span<const double> w);

/// max_m |a_m - b_m|; grids must match.
double max_abs_diff(const FieldState& a, const FieldState& b);

/// Throws Error(invalid_argument) unless grid.dim() == dim.
void require_dim(const GridSpec& grid, int dim, const char* where);

/// Throws Error(corrupt_state) naming `where` if any entry is NaN or Inf.
void require_finite(const FieldState& f, const char* where);

/// Samples fn(x) on a 1-D grid or fn(x, y) on a 2-D grid.
template <class Fn>
FieldState sample(const GridSpec& grid, Fn&& fn) {
    FieldState f(grid);
    if constexpr (std::is_invocable_v<Fn&, double>) {
        require_dim(grid, 1, "sample");
        for (std::size_t m = 0; m < grid.points(); ++m) f[m] = fn(grid.node(m));
    } else {
        require_dim(grid, 2, "sample");
        for (std::size_t i = 0; i < grid.size(); ++i)
            f[i] = fn(grid.coordinate(i, 0), grid.coordinate(i, 1));
    }
    return f;
}

}  // namespace fgl
