#include "raftmin/operators.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "spectral_internal.hpp"

namespace raftmin {

namespace {

constexpr double kPi = std::numbers::pi;

// Walks every 1D line along `axis`, invoking fn(base, stride) once per line.
template <typename Fn>
void for_each_line(const Grid& grid, int axis, Fn&& fn) {
    std::size_t stride = 1;
    for (int a = axis + 1; a < grid.dims(); ++a) stride *= static_cast<std::size_t>(grid.axis(a).n);
    std::size_t outer = 1;
    for (int a = 0; a < axis; ++a) outer *= static_cast<std::size_t>(grid.axis(a).n);
    const std::size_t n = static_cast<std::size_t>(grid.axis(axis).n);
    for (std::size_t o = 0; o < outer; ++o) {
        for (std::size_t i = 0; i < stride; ++i) fn(o * n * stride + i, stride);
    }
}

ScalarField derivative_neumann(const ScalarField& field, int axis) {
    const Grid& grid = *field.grid();
    const AxisSpec& ax = grid.axis(axis);
    const int n = ax.n;
    const double l = ax.length;

    std::vector<double> spec(field.size());
    detail::axis_r2r(grid, axis, detail::R2rKind::dct2, field.values().data(), spec.data());

    // Shift cosine harmonic k to sine slot k-1 with factor -pi k / (2 n l).
    std::vector<double> shifted(field.size());
    for_each_line(grid, axis, [&](std::size_t base, std::size_t stride) {
        for (int m = 0; m < n - 1; ++m) {
            const double factor = -kPi * (m + 1) / (l * 2.0 * n);
            shifted[base + static_cast<std::size_t>(m) * stride] =
                factor * spec[base + static_cast<std::size_t>(m + 1) * stride];
        }
        shifted[base + static_cast<std::size_t>(n - 1) * stride] = 0.0;
    });

    std::vector<double> out(field.size());
    detail::axis_r2r(grid, axis, detail::R2rKind::dst3, shifted.data(), out.data());
    return ScalarField(field.grid(), std::move(out));
}

ScalarField derivative_periodic(const ScalarField& field, int axis) {
    const Grid& grid = *field.grid();
    const AxisSpec& ax = grid.axis(axis);
    const int n = ax.n;

    std::vector<double> spec(field.size());
    detail::axis_r2r(grid, axis, detail::R2rKind::r2hc, field.values().data(), spec.data());

    std::vector<double> rotated(field.size(), 0.0);
    for_each_line(grid, axis, [&](std::size_t base, std::size_t stride) {
        for (int k = 1; 2 * k < n; ++k) {
            const double omega = 2.0 * kPi * k / ax.length;
            const double yc = spec[base + static_cast<std::size_t>(k) * stride];
            const double ys = spec[base + static_cast<std::size_t>(n - k) * stride];
            rotated[base + static_cast<std::size_t>(k) * stride] = -omega * ys;
            rotated[base + static_cast<std::size_t>(n - k) * stride] = omega * yc;
        }
        // constant and Nyquist slots stay zero
    });

    std::vector<double> out(field.size());
    detail::axis_r2r(grid, axis, detail::R2rKind::hc2r, rotated.data(), out.data());
    for (double& v : out) v /= n;
    return ScalarField(field.grid(), std::move(out));
}

}  // namespace

ScalarField derivative(const ScalarField& field, int axis) {
    if (axis < 0 || axis >= field.grid()->dims()) throw std::invalid_argument("axis out of range");
    return field.grid()->axis(axis).boundary == BoundaryKind::neumann
               ? derivative_neumann(field, axis)
               : derivative_periodic(field, axis);
}

ScalarField second_derivative(const ScalarField& field, int axis) {
    const Grid& grid = *field.grid();
    const AxisSpec& ax = grid.axis(axis);
    const int n = ax.n;

    std::vector<double> spec(field.size());
    detail::axis_r2r(grid, axis, detail::axis_forward_kind(ax), field.values().data(),
                     spec.data());

    std::vector<double> lam_sq(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) {
        const double lam = grid.slot_eigenvalue(axis, s);
        lam_sq[static_cast<std::size_t>(s)] = lam * lam;
    }
    const double norm = ax.boundary == BoundaryKind::neumann ? 2.0 * n : n;
    for_each_line(grid, axis, [&](std::size_t base, std::size_t stride) {
        for (int s = 0; s < n; ++s) {
            spec[base + static_cast<std::size_t>(s) * stride] *=
                -lam_sq[static_cast<std::size_t>(s)] / norm;
        }
    });

    std::vector<double> out(field.size());
    detail::axis_r2r(grid, axis, detail::axis_inverse_kind(ax), spec.data(), out.data());
    return ScalarField(field.grid(), std::move(out));
}

ScalarField apply_multiplier(const ScalarField& field,
                             const std::function<double(double)>& multiplier) {
    SpectralField spec = transform(field);
    const std::vector<double>& lam_sq = field.grid()->eigenvalue_sq();
    std::span<double> c = spec.coefficients();
    for (std::size_t i = 0; i < c.size(); ++i) c[i] *= multiplier(lam_sq[i]);
    return inverse_transform(spec);
}

ScalarField laplacian(const ScalarField& field) {
    return apply_multiplier(field, [](double lam_sq) { return -lam_sq; });
}

ScalarField gradient_sq(const ScalarField& field) {
    ScalarField out = ScalarField::zeros(field.grid());
    for (int a = 0; a < field.grid()->dims(); ++a) {
        ScalarField da = derivative(field, a);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += da[i] * da[i];
    }
    return out;
}

ScalarField hessian_sq(const ScalarField& field) {
    const int d = field.grid()->dims();
    ScalarField out = ScalarField::zeros(field.grid());
    for (int a = 0; a < d; ++a) {
        ScalarField daa = second_derivative(field, a);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += daa[i] * daa[i];
    }
    for (int a = 0; a < d; ++a) {
        ScalarField da = derivative(field, a);
        for (int b = a + 1; b < d; ++b) {
            ScalarField dab = derivative(da, b);
            for (std::size_t i = 0; i < out.size(); ++i) out[i] += 2.0 * dab[i] * dab[i];
        }
    }
    return out;
}

ScalarField grad_laplacian_sq(const ScalarField& field) {
    return gradient_sq(laplacian(field));
}

ScalarField helmholtz_inverse(const ScalarField& u, double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    const double eps_sq = epsilon * epsilon;
    return apply_multiplier(u, [eps_sq](double lam_sq) { return 1.0 / (1.0 + eps_sq * lam_sq); });
}

}  // namespace raftmin
