#include "raftmin/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <numbers>
#include <thread>

#include "spectral_internal.hpp"

namespace raftmin {

namespace {

constexpr double kPi = std::numbers::pi;

void check_finite(std::span<const double> values, const char* what) {
    for (double v : values) {
        if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + ": non-finite entry");
    }
}

}  // namespace

std::string to_string(BoundaryKind kind) {
    return kind == BoundaryKind::neumann ? "neumann" : "periodic";
}

BoundaryKind boundary_from_string(const std::string& name) {
    if (name == "neumann") return BoundaryKind::neumann;
    if (name == "periodic") return BoundaryKind::periodic;
    throw std::invalid_argument("unknown boundary kind: " + name);
}

Grid::Grid(std::vector<AxisSpec> axes) : axes_(std::move(axes)) {
    if (axes_.empty() || axes_.size() > 3) {
        throw std::invalid_argument("grid dimension must be 1, 2, or 3");
    }
    size_ = 1;
    for (const AxisSpec& ax : axes_) {
        if (!(ax.length > 0.0) || !std::isfinite(ax.length) || !std::isfinite(ax.origin)) {
            throw std::invalid_argument("axis extent must be positive and finite");
        }
        if (ax.n < 4) throw std::invalid_argument("need at least 4 points per axis");
        size_ *= static_cast<std::size_t>(ax.n);
        cell_volume_ *= ax.length / ax.n;
        volume_ *= ax.length;
    }

    lambda_sq_.assign(size_, 0.0);
    std::vector<int> idx(axes_.size(), 0);
    for (std::size_t flat = 0; flat < size_; ++flat) {
        double sum = 0.0;
        for (int a = 0; a < dims(); ++a) {
            const double l = slot_eigenvalue(a, idx[static_cast<std::size_t>(a)]);
            sum += l * l;
        }
        lambda_sq_[flat] = sum;
        for (int a = dims() - 1; a >= 0; --a) {
            auto ua = static_cast<std::size_t>(a);
            if (++idx[ua] < axes_[ua].n) break;
            idx[ua] = 0;
        }
    }
}

std::shared_ptr<const Grid> Grid::make(const std::vector<double>& extents,
                                       const std::vector<int>& n, BoundaryKind boundary) {
    if (extents.size() != n.size()) {
        throw std::invalid_argument("extents and point counts must have equal length");
    }
    std::vector<AxisSpec> axes(extents.size());
    for (std::size_t a = 0; a < extents.size(); ++a) {
        axes[a] = AxisSpec{-extents[a] / 2.0, extents[a], n[a], boundary};
    }
    return make_axes(std::move(axes));
}

std::shared_ptr<const Grid> Grid::make_axes(std::vector<AxisSpec> axes) {
    return std::shared_ptr<const Grid>(new Grid(std::move(axes)));
}

bool Grid::uniform_boundary() const {
    return std::all_of(axes_.begin(), axes_.end(),
                       [&](const AxisSpec& ax) { return ax.boundary == axes_[0].boundary; });
}

BoundaryKind Grid::boundary() const {
    if (!uniform_boundary()) throw std::logic_error("grid has mixed boundary kinds");
    return axes_[0].boundary;
}

double Grid::spacing(int axis) const {
    const AxisSpec& ax = this->axis(axis);
    return ax.length / ax.n;
}

double Grid::coordinate(int axis, int index) const {
    const AxisSpec& ax = this->axis(axis);
    const double h = ax.length / ax.n;
    return ax.boundary == BoundaryKind::neumann ? ax.origin + (index + 0.5) * h
                                                : ax.origin + index * h;
}

double Grid::axis_eigenvalue(int axis, int harmonic) const {
    const AxisSpec& ax = this->axis(axis);
    if (harmonic < 0) throw std::invalid_argument("harmonic must be nonnegative");
    if (ax.boundary == BoundaryKind::neumann) {
        if (harmonic >= ax.n) throw std::invalid_argument("harmonic beyond basis size");
        return kPi * harmonic / ax.length;
    }
    if (harmonic > ax.n / 2) throw std::invalid_argument("harmonic beyond basis size");
    return 2.0 * kPi * harmonic / ax.length;
}

int Grid::slot_harmonic(int axis, int slot) const {
    const AxisSpec& ax = this->axis(axis);
    if (slot < 0 || slot >= ax.n) throw std::invalid_argument("slot out of range");
    if (ax.boundary == BoundaryKind::neumann) return slot;
    return slot <= ax.n / 2 ? slot : ax.n - slot;
}

double Grid::slot_eigenvalue(int axis, int slot) const {
    return axis_eigenvalue(axis, slot_harmonic(axis, slot));
}

bool Grid::same_layout(const Grid& other) const {
    if (dims() != other.dims()) return false;
    for (int a = 0; a < dims(); ++a) {
        const AxisSpec& x = axes_[static_cast<std::size_t>(a)];
        const AxisSpec& y = other.axes_[static_cast<std::size_t>(a)];
        if (x.n != y.n || x.boundary != y.boundary || x.origin != y.origin ||
            x.length != y.length) {
            return false;
        }
    }
    return true;
}

ScalarField::ScalarField(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_) throw std::invalid_argument("null grid");
    if (values_.size() != grid_->size()) throw std::invalid_argument("value count mismatch");
    check_finite(values_, "ScalarField");
}

ScalarField ScalarField::zeros(GridPtr grid) { return constant(std::move(grid), 0.0); }

ScalarField ScalarField::constant(GridPtr grid, double value) {
    std::vector<double> v(grid->size(), value);
    return ScalarField(std::move(grid), std::move(v));
}

ScalarField ScalarField::from_function(
    GridPtr grid, const std::function<double(std::span<const double>)>& fn) {
    std::vector<double> values(grid->size());
    const int d = grid->dims();
    std::vector<int> idx(static_cast<std::size_t>(d), 0);
    std::vector<double> x(static_cast<std::size_t>(d), 0.0);
    for (std::size_t flat = 0; flat < values.size(); ++flat) {
        for (int a = 0; a < d; ++a) x[static_cast<std::size_t>(a)] = grid->coordinate(a, idx[static_cast<std::size_t>(a)]);
        values[flat] = fn(x);
        for (int a = d - 1; a >= 0; --a) {
            auto ua = static_cast<std::size_t>(a);
            if (++idx[ua] < grid->axis(a).n) break;
            idx[ua] = 0;
        }
    }
    return ScalarField(std::move(grid), std::move(values));
}

SpectralField::SpectralField(GridPtr grid, std::vector<double> coefficients)
    : grid_(std::move(grid)), coefficients_(std::move(coefficients)) {
    if (!grid_) throw std::invalid_argument("null grid");
    if (coefficients_.size() != grid_->size()) throw std::invalid_argument("coefficient count mismatch");
}

std::size_t flat_index(const Grid& grid, std::span<const int> idx) {
    std::size_t flat = 0;
    for (int a = 0; a < grid.dims(); ++a) {
        flat = flat * static_cast<std::size_t>(grid.axis(a).n) +
               static_cast<std::size_t>(idx[static_cast<std::size_t>(a)]);
    }
    return flat;
}

namespace detail {

namespace {

fftw_r2r_kind to_fftw(R2rKind kind) {
    switch (kind) {
        case R2rKind::dct2: return FFTW_REDFT10;
        case R2rKind::dct3: return FFTW_REDFT01;
        case R2rKind::dst3: return FFTW_RODFT01;
        case R2rKind::r2hc: return FFTW_R2HC;
        case R2rKind::hc2r: return FFTW_HC2R;
    }
    throw std::logic_error("unreachable");
}

struct PlanKey {
    int n = 0;
    int stride = 0;
    int outer = 0;
    int outer_dist = 0;
    int kind = 0;
    auto operator<=>(const PlanKey&) const = default;
};

// FFTW planning is not thread-safe; executing a cached plan on fresh arrays
// is. Plans are created with FFTW_UNALIGNED so any double buffer works.
class PlanCache {
public:
    fftw_plan get(const PlanKey& key) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;

        const std::size_t total =
            static_cast<std::size_t>(key.outer) * static_cast<std::size_t>(key.outer_dist);
        scratch_in_.resize(std::max(scratch_in_.size(), total));
        scratch_out_.resize(std::max(scratch_out_.size(), total));

        fftw_iodim dim{key.n, key.stride, key.stride};
        fftw_iodim howmany[2] = {{key.outer, key.outer_dist, key.outer_dist},
                                 {key.stride, 1, 1}};
        fftw_r2r_kind kind = static_cast<fftw_r2r_kind>(key.kind);
        fftw_plan plan = fftw_plan_guru_r2r(1, &dim, 2, howmany, scratch_in_.data(),
                                            scratch_out_.data(), &kind,
                                            FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!plan) throw std::runtime_error("fftw plan creation failed");
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<PlanKey, fftw_plan> plans_;
    std::vector<double> scratch_in_;
    std::vector<double> scratch_out_;
};

PlanCache& plan_cache() {
    static PlanCache cache;
    return cache;
}

}  // namespace

void axis_r2r(const Grid& grid, int axis, R2rKind kind, const double* in, double* out) {
    int stride = 1;
    for (int a = axis + 1; a < grid.dims(); ++a) stride *= grid.axis(a).n;
    int outer = 1;
    for (int a = 0; a < axis; ++a) outer *= grid.axis(a).n;
    const int n = grid.axis(axis).n;

    PlanKey key{n, stride, outer, n * stride, to_fftw(kind)};
    fftw_plan plan = plan_cache().get(key);
    fftw_execute_r2r(plan, const_cast<double*>(in), out);
}

R2rKind axis_forward_kind(const AxisSpec& axis) {
    return axis.boundary == BoundaryKind::neumann ? R2rKind::dct2 : R2rKind::r2hc;
}

R2rKind axis_inverse_kind(const AxisSpec& axis) {
    return axis.boundary == BoundaryKind::neumann ? R2rKind::dct3 : R2rKind::hc2r;
}

std::vector<double> forward_scale(const AxisSpec& axis) {
    const int n = axis.n;
    const double l = axis.length;
    std::vector<double> s(static_cast<std::size_t>(n));
    if (axis.boundary == BoundaryKind::neumann) {
        s[0] = std::sqrt(l) / (2.0 * n);
        for (int k = 1; k < n; ++k) s[static_cast<std::size_t>(k)] = std::sqrt(2.0 * l) / (2.0 * n);
    } else {
        s[0] = std::sqrt(l) / n;
        for (int j = 1; j < n; ++j) {
            if (2 * j == n) {
                s[static_cast<std::size_t>(j)] = std::sqrt(l) / n;  // Nyquist cosine
            } else if (j < n - j) {
                s[static_cast<std::size_t>(j)] = std::sqrt(2.0 * l) / n;  // cosine slot
            } else {
                s[static_cast<std::size_t>(j)] = -std::sqrt(2.0 * l) / n;  // sine slot
            }
        }
    }
    return s;
}

std::vector<double> inverse_scale(const AxisSpec& axis) {
    const int n = axis.n;
    const double l = axis.length;
    std::vector<double> s(static_cast<std::size_t>(n));
    if (axis.boundary == BoundaryKind::neumann) {
        s[0] = 1.0 / std::sqrt(l);
        for (int k = 1; k < n; ++k) s[static_cast<std::size_t>(k)] = 1.0 / std::sqrt(2.0 * l);
    } else {
        s[0] = 1.0 / std::sqrt(l);
        for (int j = 1; j < n; ++j) {
            if (2 * j == n) {
                s[static_cast<std::size_t>(j)] = 1.0 / std::sqrt(l);
            } else if (j < n - j) {
                s[static_cast<std::size_t>(j)] = 1.0 / std::sqrt(2.0 * l);
            } else {
                s[static_cast<std::size_t>(j)] = -1.0 / std::sqrt(2.0 * l);
            }
        }
    }
    return s;
}

int max_threads() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    if (const char* env = std::getenv("RAFTMIN_THREADS")) {
        const int bound = std::atoi(env);
        if (bound >= 1) hw = std::min(hw, bound);
    }
    return hw;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
    const int threads = std::min<std::size_t>(static_cast<std::size_t>(max_threads()), count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t i = static_cast<std::size_t>(t); i < count;
                 i += static_cast<std::size_t>(threads)) {
                fn(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace detail

namespace {

// Multiplies each multi-slot by the product of per-axis scale tables.
void apply_axis_scales(const Grid& grid, std::span<double> data,
                       const std::vector<std::vector<double>>& scales) {
    const int d = grid.dims();
    std::vector<int> idx(static_cast<std::size_t>(d), 0);
    for (std::size_t flat = 0; flat < data.size(); ++flat) {
        double s = 1.0;
        for (int a = 0; a < d; ++a) s *= scales[static_cast<std::size_t>(a)][static_cast<std::size_t>(idx[static_cast<std::size_t>(a)])];
        data[flat] *= s;
        for (int a = d - 1; a >= 0; --a) {
            auto ua = static_cast<std::size_t>(a);
            if (++idx[ua] < grid.axis(a).n) break;
            idx[ua] = 0;
        }
    }
}

}  // namespace

SpectralField transform(const ScalarField& field) {
    const Grid& grid = *field.grid();
    std::vector<double> work(field.values().begin(), field.values().end());
    std::vector<double> scratch(work.size());
    std::vector<std::vector<double>> scales(static_cast<std::size_t>(grid.dims()));
    for (int a = 0; a < grid.dims(); ++a) {
        detail::axis_r2r(grid, a, detail::axis_forward_kind(grid.axis(a)), work.data(),
                         scratch.data());
        work.swap(scratch);
        scales[static_cast<std::size_t>(a)] = detail::forward_scale(grid.axis(a));
    }
    apply_axis_scales(grid, work, scales);
    return SpectralField(field.grid(), std::move(work));
}

ScalarField inverse_transform(const SpectralField& field) {
    const Grid& grid = *field.grid();
    std::vector<double> work(field.coefficients().begin(), field.coefficients().end());
    std::vector<double> scratch(work.size());
    std::vector<std::vector<double>> scales(static_cast<std::size_t>(grid.dims()));
    for (int a = 0; a < grid.dims(); ++a) scales[static_cast<std::size_t>(a)] = detail::inverse_scale(grid.axis(a));
    apply_axis_scales(grid, work, scales);
    for (int a = 0; a < grid.dims(); ++a) {
        detail::axis_r2r(grid, a, detail::axis_inverse_kind(grid.axis(a)), work.data(),
                         scratch.data());
        work.swap(scratch);
    }
    return ScalarField(field.grid(), std::move(work));
}

double integrate(const ScalarField& field) {
    double sum = 0.0;
    for (double v : field.values()) sum += v;
    return sum * field.grid()->cell_volume();
}

double inner(const ScalarField& f, const ScalarField& g) {
    if (!f.grid()->same_layout(*g.grid())) throw std::invalid_argument("grid mismatch");
    double sum = 0.0;
    std::span<const double> a = f.values();
    std::span<const double> b = g.values();
    for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
    return sum * f.grid()->cell_volume();
}

ScalarField cosine_mode(GridPtr grid, const std::vector<int>& harmonics) {
    if (static_cast<int>(harmonics.size()) != grid->dims()) {
        throw std::invalid_argument("one harmonic per axis required");
    }
    std::vector<double> freq(harmonics.size());
    std::vector<double> origin(harmonics.size());
    for (int a = 0; a < grid->dims(); ++a) {
        freq[static_cast<std::size_t>(a)] = grid->axis_eigenvalue(a, harmonics[static_cast<std::size_t>(a)]);
        origin[static_cast<std::size_t>(a)] = grid->axis(a).origin;
    }
    return ScalarField::from_function(grid, [&](std::span<const double> x) {
        double v = 1.0;
        for (std::size_t a = 0; a < x.size(); ++a) v *= std::cos(freq[a] * (x[a] - origin[a]));
        return v;
    });
}

int paper_mode_harmonic(const Grid& grid, int n) {
    if (grid.dims() != 1) throw std::invalid_argument("paper modes are one-dimensional");
    if (n < 0) throw std::invalid_argument("mode index must be nonnegative");
    const AxisSpec& ax = grid.axis(0);
    const double target = 2.0 * kPi * n;
    const double per_harmonic = grid.axis_eigenvalue(0, 1);
    const double ratio = target / per_harmonic;
    const int harmonic = static_cast<int>(std::lround(ratio));
    if (std::abs(ratio - harmonic) > 1e-9) {
        throw std::invalid_argument("cos(2 pi n x) is not a basis mode of this grid");
    }
    const int limit = ax.boundary == BoundaryKind::neumann ? ax.n - 1 : ax.n / 2;
    if (harmonic > limit) throw std::invalid_argument("paper mode beyond grid resolution");
    return harmonic;
}

ScalarField paper_mode(GridPtr grid, int n) {
    (void)paper_mode_harmonic(*grid, n);
    return ScalarField::from_function(grid, [n](std::span<const double> x) {
        return std::cos(2.0 * kPi * n * x[0]);
    });
}

}  // namespace raftmin
