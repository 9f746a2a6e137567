#include "raftmin/gamma.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "raftmin/operators.hpp"

namespace raftmin {

namespace {

constexpr double kPi = std::numbers::pi;

double bump_unnormalized(double r_sq) {
    return r_sq < 1.0 ? std::exp(-1.0 / (1.0 - r_sq)) : 0.0;
}

double simpson(const std::function<double(double)>& f, double lo, double hi, int panels) {
    const double h = (hi - lo) / (2 * panels);
    double sum = f(lo) + f(hi);
    for (int i = 1; i < 2 * panels; ++i) sum += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

// Cross-sectional marginal of the d-dimensional unit bump at offset t.
double bump_marginal_raw(int dims, double t, int panels = 256) {
    const double t_sq = t * t;
    if (t_sq >= 1.0) return 0.0;
    const double s = std::sqrt(1.0 - t_sq);
    switch (dims) {
        case 1: return bump_unnormalized(t_sq);
        case 2:
            return simpson([&](double u) { return bump_unnormalized(t_sq + u * u); }, -s, s,
                           panels);
        case 3:
            return 2.0 * kPi *
                   simpson([&](double rho) { return rho * bump_unnormalized(t_sq + rho * rho); },
                           0.0, s, panels);
        default: throw std::invalid_argument("dims must be 1, 2, or 3");
    }
}

// Cumulative slab profile M(t) = 1 - 2 Int_{-1}^{t} marginal, tabulated once
// per dimension and normalized so M(1) = -1 exactly.
class SlabMollifierTable {
public:
    explicit SlabMollifierTable(int dims) : dims_(dims) {
        const int n = 16384;
        table_.resize(static_cast<std::size_t>(n) + 1);
        std::vector<double> marg(static_cast<std::size_t>(n) + 1);
        for (int i = 0; i <= n; ++i) {
            marg[static_cast<std::size_t>(i)] = bump_marginal_raw(dims, -1.0 + 2.0 * i / n);
        }
        double acc = 0.0;
        table_[0] = 0.0;
        for (int i = 1; i <= n; ++i) {
            acc += (marg[static_cast<std::size_t>(i - 1)] + marg[static_cast<std::size_t>(i)]) *
                   (1.0 / n);
            table_[static_cast<std::size_t>(i)] = acc;
        }
        total_ = acc;
    }

    double value(double t) const {
        if (t <= -1.0) return 1.0;
        if (t >= 1.0) return -1.0;
        const double pos = (t + 1.0) / 2.0 * (table_.size() - 1);
        const auto i = static_cast<std::size_t>(pos);
        const double frac = pos - static_cast<double>(i);
        const double cum = table_[i] * (1.0 - frac) + table_[std::min(i + 1, table_.size() - 1)] * frac;
        return 1.0 - 2.0 * cum / total_;
    }

private:
    int dims_;
    std::vector<double> table_;
    double total_ = 1.0;
};

const SlabMollifierTable& slab_table(int dims) {
    static SlabMollifierTable t1(1), t2(2), t3(3);
    switch (dims) {
        case 1: return t1;
        case 2: return t2;
        default: return t3;
    }
}

struct ProfileSeries {
    std::vector<double> coeffs;
    double origin = -0.5;
    double length = 1.0;

    explicit ProfileSeries(const CellProfile& p) {
        SpectralField spec = transform(p.field());
        coeffs.assign(spec.coefficients().begin(), spec.coefficients().end());
        origin = p.grid->axis(0).origin;
        length = p.grid->axis(0).length;
    }

    double operator()(double t) const {
        double v = coeffs[0] / std::sqrt(length);
        const double norm = std::sqrt(2.0 / length);
        for (std::size_t k = 1; k < coeffs.size(); ++k) {
            v += coeffs[k] * norm * std::cos(kPi * static_cast<double>(k) * (t - origin) / length);
        }
        return v;
    }
};

std::vector<char> clamp_mask_of(const Grid& grid, double clamp_width) {
    const double lo = grid.axis(0).origin;
    const double hi = lo + grid.axis(0).length;
    std::vector<char> mask(grid.size(), 0);
    std::vector<int> idx(static_cast<std::size_t>(grid.dims()), 0);
    for (std::size_t flat = 0; flat < mask.size(); ++flat) {
        const double x = grid.coordinate(0, idx[0]);
        if (x <= lo + clamp_width) mask[flat] = 1;
        if (x >= hi - clamp_width) mask[flat] = 2;
        for (int a = grid.dims() - 1; a >= 0; --a) {
            auto ua = static_cast<std::size_t>(a);
            if (++idx[ua] < grid.axis(a).n) break;
            idx[ua] = 0;
        }
    }
    return mask;
}

void apply_clamps(ScalarField& v, const std::vector<char>& mask) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (mask[i] == 1) v[i] = 1.0;
        if (mask[i] == 2) v[i] = -1.0;
    }
}

// Projected preconditioned descent of F_eps over clamped fields. The stiff
// sextic/quartic parts of the variational derivative make explicit steps
// useless, so trial directions are smoothed by the positive spectral symbol
// of the linearized flow; monotonicity comes from backtracking and any
// accepted iterate is admissible, hence a valid upper bound on the cell value.
double cell_descend(ScalarField& v, const std::vector<char>& clamp, const EnergyParams& p,
                    const Potential& pot, int max_iters, double grad_tol) {
    apply_clamps(v, clamp);
    double energy = f_v(v, p, pot).total;

    const double eps = p.epsilon;
    const double e2 = eps * eps;
    const double well_curvature = std::max(pot.d2(1.0), 1.0);
    auto symbol = [&](double lam_sq) {
        const double t = e2 * lam_sq;
        const double linear = -2.0 * eps * p.q * lam_sq +
                              2.0 * (1.0 - 2.0 * p.q) * e2 * eps * lam_sq * lam_sq +
                              2.0 * (1.0 - p.q) * e2 * e2 * eps * lam_sq * lam_sq * lam_sq;
        return std::max(linear, 0.0) + well_curvature / eps * (1.0 + t) * (1.0 + t);
    };

    double dt = 1.0;
    const double dt_min = 1e-14;
    double grad_scale = -1.0;

    for (int iter = 0; iter < max_iters; ++iter) {
        ScalarField g = f_v_gradient(v, p, pot);
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (clamp[i]) g[i] = 0.0;
        }
        double gn = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) gn += g[i] * g[i];
        gn = std::sqrt(gn * v.grid()->cell_volume());
        if (grad_scale < 0.0) grad_scale = gn;
        if (gn <= grad_tol * (1.0 + grad_scale)) break;

        bool accepted = false;
        while (dt >= dt_min) {
            ScalarField dir = apply_multiplier(
                g, [&](double lam_sq) { return 1.0 / (1.0 + dt * symbol(lam_sq)); });
            ScalarField trial = v;
            for (std::size_t i = 0; i < trial.size(); ++i) {
                if (!clamp[i]) trial[i] -= dt * dir[i];
            }
            apply_clamps(trial, clamp);
            const double trial_energy = f_v(trial, p, pot).total;
            if (std::isfinite(trial_energy) && trial_energy <= energy) {
                v = std::move(trial);
                energy = trial_energy;
                accepted = true;
                dt = std::min(dt * 1.5, 1e4);
                break;
            }
            dt *= 0.5;
        }
        if (!accepted) break;
    }
    return energy;
}

}  // namespace

double smoothstep3(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double t4 = t * t * t * t;
    return t4 * (35.0 - 84.0 * t + 70.0 * t * t - 20.0 * t * t * t);
}

double CellProfile::evaluate(double t) const { return ProfileSeries(*this)(t); }

CellProfile clamped_tanh_profile(GridPtr grid, double width, double clamp_width) {
    if (grid->dims() != 1) throw std::invalid_argument("cell profiles are one-dimensional");
    CellProfile p;
    p.grid = grid;
    p.clamp_width = clamp_width;
    const double center = grid->axis(0).origin + 0.5 * grid->axis(0).length;
    p.samples.resize(grid->size());
    for (int i = 0; i < grid->axis(0).n; ++i) {
        p.samples[static_cast<std::size_t>(i)] =
            -std::tanh((grid->coordinate(0, i) - center) / width);
    }
    ScalarField f(grid, p.samples);
    apply_clamps(f, clamp_mask_of(*grid, clamp_width));
    p.samples.assign(f.values().begin(), f.values().end());
    return p;
}

double cell_energy(const CellProfile& profile, double epsilon, double q, const Potential& pot) {
    return f_v(profile.field(), EnergyParams{epsilon, q}, pot).total;
}

std::vector<double> default_eps_grid(int points, double lo, double hi) {
    std::vector<double> eps(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        const double f = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
        eps[static_cast<std::size_t>(i)] = lo * std::pow(hi / lo, f);
    }
    return eps;
}

CellEstimate estimate_md(const Potential& pot, double q, const CellOptions& opts) {
    CellEstimate est{};
    est.eps_grid = opts.eps_grid.empty() ? default_eps_grid() : opts.eps_grid;
    std::sort(est.eps_grid.begin(), est.eps_grid.end());
    for (double e : est.eps_grid) {
        if (!(e > 0.0) || e > 1.0) throw std::invalid_argument("cell eps grid must lie in (0, 1]");
    }

    GridPtr grid = Grid::make({1.0}, {opts.profile_dofs}, BoundaryKind::neumann);
    const std::vector<char> clamp = clamp_mask_of(*grid, opts.clamp_width);
    const double dx = grid->spacing(0);

    est.values.assign(est.eps_grid.size(), 0.0);
    est.profiles.assign(est.eps_grid.size(), CellProfile{});

    std::optional<ScalarField> warm;
    for (std::size_t i = est.eps_grid.size(); i-- > 0;) {  // large eps first
        const double eps = est.eps_grid[i];
        const EnergyParams p{eps, q};

        std::vector<ScalarField> starts;
        if (warm) starts.push_back(*warm);
        starts.push_back(
            clamped_tanh_profile(grid, std::max(eps, 3.0 * dx), opts.clamp_width).field());

        double best = std::numeric_limits<double>::infinity();
        ScalarField best_field = starts.back();
        for (ScalarField& s : starts) {
            ScalarField candidate = s;
            const double value =
                cell_descend(candidate, clamp, p, pot, opts.max_iters, opts.grad_tol);
            if (value < best) {
                best = value;
                best_field = std::move(candidate);
            }
        }

        est.values[i] = best;
        CellProfile prof;
        prof.grid = grid;
        prof.clamp_width = opts.clamp_width;
        prof.samples.assign(best_field.values().begin(), best_field.values().end());
        est.profiles[i] = std::move(prof);
        warm = best_field;
    }

    est.argmin_index = static_cast<std::size_t>(
        std::min_element(est.values.begin(), est.values.end()) - est.values.begin());
    est.md_hat = est.values[est.argmin_index];
    est.argmin_epsilon = est.eps_grid[est.argmin_index];
    return est;
}

double probe_cell_2d(const Potential& pot, double q, double epsilon, int normal_axis,
                     const Cell2dOptions& opts) {
    if (normal_axis < 0 || normal_axis > 1) throw std::invalid_argument("normal axis must be 0 or 1");

    std::vector<AxisSpec> axes(2);
    axes[static_cast<std::size_t>(normal_axis)] =
        AxisSpec{-0.5, 1.0, opts.normal_dofs, BoundaryKind::neumann};
    axes[static_cast<std::size_t>(1 - normal_axis)] =
        AxisSpec{-0.5, 1.0, opts.transverse_dofs, BoundaryKind::periodic};
    GridPtr grid = Grid::make_axes(axes);

    // clamp zones are full transverse planes at the +/- normal ends
    std::vector<char> clamp(grid->size(), 0);
    {
        std::vector<int> idx(2, 0);
        for (std::size_t flat = 0; flat < clamp.size(); ++flat) {
            const double xn = grid->coordinate(normal_axis, idx[static_cast<std::size_t>(normal_axis)]);
            if (xn <= -0.5 + opts.clamp_width) clamp[flat] = 1;
            if (xn >= 0.5 - opts.clamp_width) clamp[flat] = 2;
            for (int a = 1; a >= 0; --a) {
                auto ua = static_cast<std::size_t>(a);
                if (++idx[ua] < grid->axis(a).n) break;
                idx[ua] = 0;
            }
        }
    }

    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    const double width = std::max(epsilon, 3.0 * grid->spacing(normal_axis));
    ScalarField v = ScalarField::from_function(grid, [&](std::span<const double> x) {
        return -std::tanh(x[static_cast<std::size_t>(normal_axis)] / width);
    });
    if (opts.perturbation > 0.0) {
        ScalarField noise = ScalarField::from_function(grid, [&](std::span<const double> x) {
            const double envelope =
                std::exp(-std::pow(x[static_cast<std::size_t>(normal_axis)] / 0.15, 2));
            return envelope * std::cos(2.0 * kPi * x[static_cast<std::size_t>(1 - normal_axis)]);
        });
        for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] += opts.perturbation * noise[i] * uni(rng);
        }
    }

    return cell_descend(v, clamp, EnergyParams{epsilon, q}, pot, opts.max_iters, opts.grad_tol);
}

InterfaceGeometry InterfaceGeometry::slab(int axis, double offset) {
    InterfaceGeometry g;
    g.kind = GeometryKind::flat_slab;
    g.normal_axis = axis;
    g.offset = offset;
    return g;
}

InterfaceGeometry InterfaceGeometry::polygon(std::vector<std::array<double, 2>> vertices) {
    if (vertices.size() < 3) throw std::invalid_argument("polygon needs at least 3 vertices");
    InterfaceGeometry g;
    g.kind = GeometryKind::polygon_2d;
    g.vertices = std::move(vertices);
    return g;
}

namespace {

bool point_in_polygon(const std::vector<std::array<double, 2>>& poly, double x, double y) {
    bool inside = false;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const bool crosses = (poly[i][1] > y) != (poly[j][1] > y);
        if (crosses) {
            const double t = (y - poly[j][1]) / (poly[i][1] - poly[j][1]);
            const double xc = poly[j][0] + t * (poly[i][0] - poly[j][0]);
            if (x < xc) inside = !inside;
        }
    }
    return inside;
}

// Length of the segment clipped to [lo0,hi0]x[lo1,hi1] (Liang-Barsky).
double clipped_segment_length(std::array<double, 2> a, std::array<double, 2> b,
                              const std::array<double, 2>& lo, const std::array<double, 2>& hi) {
    double t0 = 0.0, t1 = 1.0;
    const double dx = b[0] - a[0];
    const double dy = b[1] - a[1];
    const double p[4] = {-dx, dx, -dy, dy};
    const double q_arr[4] = {a[0] - lo[0], hi[0] - a[0], a[1] - lo[1], hi[1] - a[1]};
    for (int k = 0; k < 4; ++k) {
        if (p[k] == 0.0) {
            if (q_arr[k] < 0.0) return 0.0;
        } else {
            const double r = q_arr[k] / p[k];
            if (p[k] < 0.0) {
                t0 = std::max(t0, r);
            } else {
                t1 = std::min(t1, r);
            }
        }
    }
    if (t0 >= t1) return 0.0;
    return (t1 - t0) * std::hypot(dx, dy);
}

double signed_distance_to_segment(const std::array<double, 2>& a, const std::array<double, 2>& b,
                                  double x, double y, double* tangential, double* edge_len) {
    const double ex = b[0] - a[0];
    const double ey = b[1] - a[1];
    const double len = std::hypot(ex, ey);
    const double px = x - a[0];
    const double py = y - a[1];
    *tangential = (px * ex + py * ey) / len;
    *edge_len = len;
    return (px * ey - py * ex) / len;  // positive on the right of a->b
}

}  // namespace

double perimeter(const InterfaceGeometry& geometry, const Grid& domain) {
    if (geometry.kind == GeometryKind::flat_slab) {
        const AxisSpec& ax = domain.axis(geometry.normal_axis);
        if (geometry.offset <= ax.origin || geometry.offset >= ax.origin + ax.length) {
            throw std::invalid_argument("slab offset outside the domain");
        }
        double cross = 1.0;
        for (int a = 0; a < domain.dims(); ++a) {
            if (a != geometry.normal_axis) cross *= domain.axis(a).length;
        }
        return cross;
    }
    if (domain.dims() != 2) throw std::invalid_argument("polygon perimeter needs a 2D domain");
    const std::array<double, 2> lo{domain.axis(0).origin, domain.axis(1).origin};
    const std::array<double, 2> hi{domain.axis(0).origin + domain.axis(0).length,
                                   domain.axis(1).origin + domain.axis(1).length};
    double sum = 0.0;
    const auto& v = geometry.vertices;
    for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
        sum += clipped_segment_length(v[j], v[i], lo, hi);
    }
    return sum;
}

ScalarField sharp_interface(const InterfaceGeometry& geometry, GridPtr grid) {
    if (geometry.kind == GeometryKind::flat_slab) {
        const int axis = geometry.normal_axis;
        const double offset = geometry.offset;
        return ScalarField::from_function(grid, [axis, offset](std::span<const double> x) {
            return x[static_cast<std::size_t>(axis)] < offset ? 1.0 : -1.0;
        });
    }
    const auto& verts = geometry.vertices;
    return ScalarField::from_function(grid, [&verts](std::span<const double> x) {
        return point_in_polygon(verts, x[0], x[1]) ? 1.0 : -1.0;
    });
}

double bump_kernel_raw_mass(int dims, int panels) {
    switch (dims) {
        case 1:
            return simpson([](double y) { return bump_unnormalized(y * y); }, -1.0, 1.0, panels);
        case 2:
            return 2.0 * kPi *
                   simpson([](double r) { return r * bump_unnormalized(r * r); }, 0.0, 1.0,
                           panels);
        case 3:
            return 4.0 * kPi *
                   simpson([](double r) { return r * r * bump_unnormalized(r * r); }, 0.0, 1.0,
                           panels);
        default: throw std::invalid_argument("dims must be 1, 2, or 3");
    }
}

ScalarField mollify_indicator(const InterfaceGeometry& geometry, GridPtr grid, double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");

    if (geometry.kind == GeometryKind::flat_slab) {
        const SlabMollifierTable& table = slab_table(grid->dims());
        const int axis = geometry.normal_axis;
        const double offset = geometry.offset;
        return ScalarField::from_function(grid, [&, axis, offset](std::span<const double> x) {
            return table.value((x[static_cast<std::size_t>(axis)] - offset) / epsilon);
        });
    }

    if (grid->dims() != 2) throw std::invalid_argument("polygon mollification needs a 2D grid");
    const auto& verts = geometry.vertices;
    if (verts.size() < 3) throw std::invalid_argument("degenerate polygon");
    {
        double area2 = 0.0;
        for (std::size_t i = 0, j = verts.size() - 1; i < verts.size(); j = i++) {
            area2 += verts[j][0] * verts[i][1] - verts[i][0] * verts[j][1];
        }
        if (std::abs(area2) < 1e-14) throw std::invalid_argument("degenerate polygon");
    }

    // Tensor midpoint rule over the kernel support, weights normalized to
    // unit mass so values stay inside [-1, 1] exactly.
    const int K = 96;
    std::vector<double> node(static_cast<std::size_t>(K));
    for (int i = 0; i < K; ++i) node[static_cast<std::size_t>(i)] = -1.0 + (2.0 * i + 1.0) / K;
    std::vector<double> weight(static_cast<std::size_t>(K) * K);
    double wsum = 0.0;
    for (int i = 0; i < K; ++i) {
        for (int j = 0; j < K; ++j) {
            const double w = bump_unnormalized(node[static_cast<std::size_t>(i)] * node[static_cast<std::size_t>(i)] +
                                               node[static_cast<std::size_t>(j)] * node[static_cast<std::size_t>(j)]);
            weight[static_cast<std::size_t>(i) * K + static_cast<std::size_t>(j)] = w;
            wsum += w;
        }
    }
    for (double& w : weight) w /= wsum;

    return ScalarField::from_function(grid, [&](std::span<const double> x) {
        // quick reject: farther than eps from every edge keeps the sharp sign
        double min_dist = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0, j = verts.size() - 1; i < verts.size(); j = i++) {
            double tang = 0.0, len = 0.0;
            const double dn = signed_distance_to_segment(verts[j], verts[i], x[0], x[1], &tang, &len);
            const double along = std::clamp(tang, 0.0, len);
            const double cx = verts[j][0] + (verts[i][0] - verts[j][0]) * along / len;
            const double cy = verts[j][1] + (verts[i][1] - verts[j][1]) * along / len;
            min_dist = std::min(min_dist, std::hypot(x[0] - cx, x[1] - cy));
            (void)dn;
        }
        if (min_dist > epsilon) return point_in_polygon(verts, x[0], x[1]) ? 1.0 : -1.0;

        double acc = 0.0;
        for (int i = 0; i < K; ++i) {
            for (int j = 0; j < K; ++j) {
                const double sx = x[0] - epsilon * node[static_cast<std::size_t>(i)];
                const double sy = x[1] - epsilon * node[static_cast<std::size_t>(j)];
                const double s = point_in_polygon(verts, sx, sy) ? 1.0 : -1.0;
                acc += weight[static_cast<std::size_t>(i) * K + static_cast<std::size_t>(j)] * s;
            }
        }
        return acc;
    });
}

ScalarField build_recovery(const InterfaceGeometry& slab, const CellProfile& profile,
                           double eps0, double epsilon, GridPtr grid) {
    if (slab.kind != GeometryKind::flat_slab) throw std::invalid_argument("recovery needs a slab");
    if (!(eps0 > 0.0) || !(epsilon > 0.0)) throw std::invalid_argument("scales must be positive");

    const int axis = slab.normal_axis;
    const AxisSpec& ax = grid->axis(axis);
    const double half_width = epsilon / (2.0 * eps0);
    const double wall = std::min(slab.offset - ax.origin, ax.origin + ax.length - slab.offset);
    if (half_width > wall) throw std::invalid_argument("recovery slab exceeds the domain");

    const ProfileSeries series(profile);
    const double offset = slab.offset;
    return ScalarField::from_function(grid, [&, axis, offset](std::span<const double> x) {
        const double t = eps0 * (x[static_cast<std::size_t>(axis)] - offset) / epsilon;
        if (t <= -0.5) return 1.0;
        if (t >= 0.5) return -1.0;
        return series(t);
    });
}

GammaCompareResult gamma_compare(const InterfaceGeometry& geometry, const Potential& pot,
                                 double q, const std::vector<double>& eps_list, GridPtr grid,
                                 const CellOptions& cell_opts, double beta) {
    if (geometry.kind != GeometryKind::flat_slab) {
        throw std::invalid_argument("gamma_compare runs on flat slabs");
    }
    GammaCompareResult out{};
    const CellEstimate cell = estimate_md(pot, q, cell_opts);
    out.md_hat = cell.md_hat;
    out.perimeter_value = perimeter(geometry, *grid);

    const AxisSpec& ax = grid->axis(geometry.normal_axis);
    const double wall =
        std::min(geometry.offset - ax.origin, ax.origin + ax.length - geometry.offset);

    for (double eps : eps_list) {
        // diagonal scale selection: eps0 ~ beta sqrt(eps), kept large enough
        // that the rescaled slab fits inside the domain
        const double eps0_fit = eps / (1.8 * wall);
        const double eps0_target = std::max(beta * std::sqrt(eps), eps0_fit);
        std::size_t idx = 0;
        double best_gap = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < cell.eps_grid.size(); ++i) {
            if (cell.eps_grid[i] < eps0_fit) continue;
            const double gap = std::abs(std::log(cell.eps_grid[i] / eps0_target));
            if (gap < best_gap) {
                best_gap = gap;
                idx = i;
            }
        }
        if (!std::isfinite(best_gap)) throw std::invalid_argument("no feasible cell scale");

        const double eps0 = cell.eps_grid[idx];
        ScalarField w_n = build_recovery(geometry, cell.profiles[idx], eps0, eps, grid);
        const double energy = f_v(w_n, EnergyParams{eps, q}, pot).total;

        GammaRow row{};
        row.epsilon = eps;
        row.eps0 = eps0;
        row.energy = energy;
        row.md_times_per = out.md_hat * out.perimeter_value;
        row.ratio = energy / row.md_times_per;
        out.rows.push_back(row);
    }

    if (out.rows.size() >= 2) {
        const double last = std::abs(out.rows.back().ratio - 1.0);
        const double prev = std::abs(out.rows[out.rows.size() - 2].ratio - 1.0);
        out.trend_ok = last <= prev + 1e-12;
        out.final_gap = last;
    }
    return out;
}

PolygonRecoveryReport polygon_recovery_check(const InterfaceGeometry& polygon,
                                             const Potential& pot, double q, double epsilon,
                                             double delta, GridPtr grid,
                                             const CellOptions& cell_opts) {
    if (polygon.kind != GeometryKind::polygon_2d) throw std::invalid_argument("needs a polygon");
    if (grid->dims() != 2) throw std::invalid_argument("needs a 2D grid");

    const CellEstimate cell = estimate_md(pot, q, cell_opts);

    // Edge slabs of half-width >= 1.5 eps so the mollified indicator is
    // already +/-1 where the slab field takes over.
    const double half_width = std::max(0.1, 1.6 * epsilon);
    const double eps0_target = epsilon / (2.0 * half_width);
    std::size_t idx = 0;
    double best_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < cell.eps_grid.size(); ++i) {
        const double gap = std::abs(std::log(cell.eps_grid[i] / eps0_target));
        if (gap < best_gap) {
            best_gap = gap;
            idx = i;
        }
    }
    const double eps0 = cell.eps_grid[idx];
    const ProfileSeries series(cell.profiles[idx]);
    const double hw = epsilon / (2.0 * eps0);

    ScalarField phi = mollify_indicator(polygon, grid, epsilon);
    const auto& verts = polygon.vertices;

    ScalarField v = ScalarField::zeros(grid);
    {
        std::vector<int> gidx(2, 0);
        for (std::size_t flat = 0; flat < v.size(); ++flat) {
            const double x = grid->coordinate(0, gidx[0]);
            const double y = grid->coordinate(1, gidx[1]);

            // nearest edge in normal distance, with its tangential position
            double best_abs = std::numeric_limits<double>::infinity();
            double dn = 0.0, tang = 0.0, elen = 0.0;
            for (std::size_t i = 0, j = verts.size() - 1; i < verts.size(); j = i++) {
                double t = 0.0, len = 0.0;
                const double d = signed_distance_to_segment(verts[j], verts[i], x, y, &t, &len);
                if (t >= 0.0 && t <= len && std::abs(d) < best_abs) {
                    best_abs = std::abs(d);
                    dn = d;
                    tang = t;
                    elen = len;
                }
            }

            double value;
            if (best_abs <= hw && elen > 0.0) {
                // signed distance: make positive mean outside P
                const bool inside = point_in_polygon(verts, x, y);
                const double d_out = inside ? -best_abs : best_abs;
                (void)dn;
                const double t_cell = eps0 * d_out / epsilon;
                const double slab_value = t_cell <= -0.5   ? 1.0
                                          : t_cell >= 0.5 ? -1.0
                                                          : series(t_cell);
                const double vertex_dist = std::min(tang, elen - tang);
                const double eta = smoothstep3((vertex_dist - delta) / delta);
                value = eta * slab_value + (1.0 - eta) * phi[flat];
            } else {
                value = phi[flat];
            }
            v[flat] = value;

            for (int a = 1; a >= 0; --a) {
                auto ua = static_cast<std::size_t>(a);
                if (++gidx[ua] < grid->axis(a).n) break;
                gidx[ua] = 0;
            }
        }
    }

    PolygonRecoveryReport rep{};
    rep.energy = f_v(v, EnergyParams{epsilon, q}, pot).total;
    rep.md_hat = cell.md_hat;
    rep.rho = cell.values[idx] - cell.md_hat;
    rep.perimeter_value = perimeter(polygon, *grid);
    rep.bound_without_overhead = (rep.md_hat + rep.rho) * rep.perimeter_value;
    rep.overhead = std::max(0.0, rep.energy - rep.bound_without_overhead);
    rep.delta = delta;
    return rep;
}

}  // namespace raftmin
