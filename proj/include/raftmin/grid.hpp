#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace raftmin {

enum class BoundaryKind { neumann, periodic };

std::string to_string(BoundaryKind kind);
BoundaryKind boundary_from_string(const std::string& name);

/// One axis of a rectangular grid. Neumann axes are sampled at cell centers
/// (origin + (i+1/2)*h), periodic axes at nodes (origin + i*h).
struct AxisSpec {
    double origin = 0.0;
    double length = 0.0;
    int n = 0;
    BoundaryKind boundary = BoundaryKind::neumann;
};

/// Immutable rectangular grid with a spectral basis diagonalizing -Laplace.
///
/// Neumann axes use the cosine basis cos(pi k (x-origin)/length) with 1D
/// eigenvalue factor lambda_k = pi k / length; periodic axes use the full
/// trigonometric basis with lambda_k = 2 pi k / length. Quadrature weight is
/// uniform (cell volume), which makes the sampled basis discretely
/// orthonormal, so Parseval holds exactly up to roundoff.
class Grid {
public:
    /// Centered box: axis i covers (-extent_i/2, extent_i/2).
    static std::shared_ptr<const Grid> make(const std::vector<double>& extents,
                                            const std::vector<int>& n,
                                            BoundaryKind boundary);

    /// Fully general constructor (mixed boundary kinds, explicit origins).
    static std::shared_ptr<const Grid> make_axes(std::vector<AxisSpec> axes);

    int dims() const { return static_cast<int>(axes_.size()); }
    const AxisSpec& axis(int a) const { return axes_.at(static_cast<std::size_t>(a)); }
    const std::vector<AxisSpec>& axes() const { return axes_; }

    /// True when every axis has the same boundary kind.
    bool uniform_boundary() const;
    BoundaryKind boundary() const;  // throws if mixed

    std::size_t size() const { return size_; }
    double cell_volume() const { return cell_volume_; }
    double volume() const { return volume_; }

    double coordinate(int axis, int index) const;
    double spacing(int axis) const;

    /// 1D eigenvalue factor for a harmonic index (0, 1, 2, ...), strictly
    /// increasing in the harmonic.
    double axis_eigenvalue(int axis, int harmonic) const;

    /// 1D eigenvalue factor by storage slot of the spectral layout
    /// (DCT-II index for neumann, halfcomplex index for periodic).
    double slot_eigenvalue(int axis, int slot) const;

    /// Harmonic index of a storage slot.
    int slot_harmonic(int axis, int slot) const;

    /// lambda^2 per multi-slot in storage (row-major) order.
    const std::vector<double>& eigenvalue_sq() const { return lambda_sq_; }

    bool same_layout(const Grid& other) const;

private:
    explicit Grid(std::vector<AxisSpec> axes);

    std::vector<AxisSpec> axes_;
    std::size_t size_ = 0;
    double cell_volume_ = 1.0;
    double volume_ = 1.0;
    std::vector<double> lambda_sq_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Real-space field sampled on a grid, row-major.
class ScalarField {
public:
    ScalarField(GridPtr grid, std::vector<double> values);
    static ScalarField zeros(GridPtr grid);
    static ScalarField constant(GridPtr grid, double value);
    static ScalarField from_function(
        GridPtr grid, const std::function<double(std::span<const double>)>& fn);

    const GridPtr& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }
    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }

private:
    GridPtr grid_;
    std::vector<double> values_;
};

/// Coefficients with respect to the grid's orthonormal basis, stored in the
/// transform's natural slot order.
class SpectralField {
public:
    SpectralField(GridPtr grid, std::vector<double> coefficients);

    const GridPtr& grid() const { return grid_; }
    std::size_t size() const { return coefficients_.size(); }
    std::span<const double> coefficients() const { return coefficients_; }
    std::span<double> coefficients() { return coefficients_; }
    double operator[](std::size_t i) const { return coefficients_[i]; }
    double& operator[](std::size_t i) { return coefficients_[i]; }

private:
    GridPtr grid_;
    std::vector<double> coefficients_;
};

SpectralField transform(const ScalarField& field);
ScalarField inverse_transform(const SpectralField& field);

double integrate(const ScalarField& field);
double inner(const ScalarField& f, const ScalarField& g);

/// Product of per-axis eigenfunctions, one harmonic index per axis:
/// neumann axis -> cos(pi k (x-o)/l), periodic axis -> cos(2 pi k (x-o)/l).
ScalarField cosine_mode(GridPtr grid, const std::vector<int>& harmonics);

/// psi_n(x) = cos(2 pi n x) on a 1D grid over (-1,1): the plane-wave family
/// used throughout the single-mode analysis. Works on both boundary kinds;
/// the internal harmonic is 2n (periodic) or 4n (neumann).
ScalarField paper_mode(GridPtr grid, int n);
int paper_mode_harmonic(const Grid& grid, int n);

/// Storage index helpers (row-major).
std::size_t flat_index(const Grid& grid, std::span<const int> idx);

namespace detail {
/// Runs fn(i) for i in [0,count), fanning out over at most RAFTMIN_THREADS
/// threads (default: hardware concurrency). Results must be written to
/// per-index slots; ordering across indices is not observable.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);
int max_threads();
}  // namespace detail

}  // namespace raftmin
