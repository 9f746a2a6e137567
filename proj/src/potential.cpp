#include "raftmin/potential.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace raftmin {

namespace {

// C^2 quadratic tail A(|s|-B)^2 + C matched to (1-s^2)^2 at |s| = s0.
struct QuarticTail {
    double a, b, c;
};

QuarticTail match_tail(double s0) {
    const double w = (1.0 - s0 * s0) * (1.0 - s0 * s0);
    const double w1 = 4.0 * s0 * s0 * s0 - 4.0 * s0;
    const double w2 = 12.0 * s0 * s0 - 4.0;
    QuarticTail t{};
    t.a = w2 / 2.0;
    t.b = s0 - w1 / (2.0 * t.a);
    t.c = w - t.a * (s0 - t.b) * (s0 - t.b);
    return t;
}

std::vector<double> sample_grid(double lo, double hi, int count) {
    std::vector<double> s(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        s[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (count - 1);
    }
    return s;
}

}  // namespace

Potential Potential::quartic_truncated(double s0) {
    if (!(s0 > 1.0)) throw std::invalid_argument("crossover s0 must exceed 1");
    const QuarticTail tail = match_tail(s0);
    Potential p;
    p.kind_ = PotentialKind::quartic_truncated;
    p.s0_ = s0;
    p.name_ = "quartic_truncated";
    p.w_ = [s0, tail](double s) {
        const double a = std::abs(s);
        if (a <= s0) {
            const double t = 1.0 - s * s;
            return t * t;
        }
        return tail.a * (a - tail.b) * (a - tail.b) + tail.c;
    };
    p.w1_ = [s0, tail](double s) {
        const double a = std::abs(s);
        if (a <= s0) return 4.0 * s * s * s - 4.0 * s;
        const double sign = s > 0.0 ? 1.0 : -1.0;
        return sign * 2.0 * tail.a * (a - tail.b);
    };
    p.w2_ = [s0, tail](double s) {
        const double a = std::abs(s);
        if (a <= s0) return 12.0 * s * s - 4.0;
        return 2.0 * tail.a;
    };
    return p;
}

double physical_f(double s, double a2, double a4) {
    return 0.5 * a2 * s * s + 0.25 * a4 * s * s * s * s;
}

Potential Potential::physical_quartic(double a2, double a4, double kappa, double lambda,
                                      bool shift_wells_to_zero) {
    if (!(a4 > 0.0)) throw std::invalid_argument("a4 must be positive");
    if (!(kappa > 0.0) || lambda == 0.0) throw std::invalid_argument("need kappa > 0, Lambda != 0");
    const double scale = 2.0 * kappa / (lambda * lambda);

    NormalizationReport report{};
    report.double_well = a2 < 0.0;
    report.wells_at_unit = a2 == -a4;
    report.well_location = report.double_well ? std::sqrt(-a2 / a4) : 0.0;
    const double f_well = report.double_well ? -a2 * a2 / (4.0 * a4) : 0.0;
    report.well_value = scale * f_well;
    report.shift = shift_wells_to_zero ? -scale * f_well : 0.0;
    report.barrier = scale * (0.0 - f_well);

    const double shift = report.shift;
    Potential p;
    p.kind_ = PotentialKind::physical_quartic;
    p.name_ = "physical_quartic";
    p.normalization_ = report;
    p.w_ = [a2, a4, scale, shift](double s) { return scale * physical_f(s, a2, a4) + shift; };
    p.w1_ = [a2, a4, scale](double s) { return scale * (a2 * s + a4 * s * s * s); };
    p.w2_ = [a2, a4, scale](double s) { return scale * (a2 + 3.0 * a4 * s * s); };
    return p;
}

Potential to_w(double a2, double a4, double kappa, double lambda, bool shift_wells_to_zero) {
    return Potential::physical_quartic(a2, a4, kappa, lambda, shift_wells_to_zero);
}

Potential Potential::custom(std::function<double(double)> w, std::function<double(double)> w1,
                            std::function<double(double)> w2, std::string name) {
    Potential p;
    p.kind_ = PotentialKind::custom;
    p.name_ = std::move(name);
    p.w_ = std::move(w);
    p.w1_ = std::move(w1);
    p.w2_ = std::move(w2);
    return p;
}

WellConstants estimate_constants(const Potential& pot) {
    // Dense grid on [-10 s0, 10 s0]; the quadratic tail makes wider scans
    // redundant for the built-in families.
    const double reach = 10.0 * std::max(pot.crossover(), 1.0);
    const int count = 20001;
    const std::vector<double> grid = sample_grid(-reach, reach, count);

    WellConstants out{};
    double c_w = std::numeric_limits<double>::infinity();
    double big_c = 0.0;
    double k_w = 0.0;
    for (double s : grid) {
        const double w = pot.value(s);
        const double w1 = pot.d1(s);
        const double w2 = std::abs(pot.d2(s));
        k_w = std::max(k_w, w2);

        const double well = s >= 0.0 ? 1.0 : -1.0;
        const double gap = s - well;
        if (std::abs(gap) > 1e-6) c_w = std::min(c_w, w / (gap * gap));

        if (w > 1e-14) {
            big_c = std::max(big_c, std::abs(w1) / std::sqrt(w));
        } else {
            // near a well |W'|/sqrt(W) -> sqrt(2 W''); use the limit value
            if (w2 > 0.0) big_c = std::max(big_c, std::sqrt(2.0 * w2));
        }
    }

    out.c_w = c_w;
    out.C_w = big_c;
    out.K_w = k_w;
    out.c_w_valid = std::isfinite(c_w) && c_w > 0.0;
    out.C_w_valid = std::isfinite(big_c) && big_c > 0.0;

    // K_w is a global sup; probe the tail growth of W'' before trusting the
    // grid maximum (a pure quartic fails here).
    const double tail_probe = std::abs(pot.d2(4.0 * reach));
    out.K_w_valid = std::isfinite(k_w) && tail_probe <= k_w * (1.0 + 1e-9);
    return out;
}

const WellConstants& Potential::constants() const {
    if (!constants_) constants_ = estimate_constants(*this);
    return *constants_;
}

HypothesesReport Potential::check_hypotheses() const {
    HypothesesReport rep{};
    rep.constants = constants();

    const double reach = 10.0 * std::max(s0_, 1.0);
    const std::vector<double> grid = sample_grid(-reach, reach, 20001);

    rep.positive_away_from_wells = true;
    for (double s : grid) {
        if (std::min(std::abs(s - 1.0), std::abs(s + 1.0)) > 1e-6 && !(value(s) > 0.0)) {
            rep.positive_away_from_wells = false;
            break;
        }
    }
    rep.zero_at_wells = std::abs(value(1.0)) < 1e-12 && std::abs(value(-1.0)) < 1e-12;

    rep.quadratic_well_bound = rep.constants.c_w_valid;
    if (rep.quadratic_well_bound) {
        for (double s : grid) {
            const double well = s >= 0.0 ? 1.0 : -1.0;
            const double gap = s - well;
            if (value(s) + 1e-12 < rep.constants.c_w * gap * gap * (1.0 - 1e-9)) {
                rep.quadratic_well_bound = false;
                break;
            }
        }
    }
    rep.derivative_bounds = rep.constants.C_w_valid && rep.constants.K_w_valid;
    return rep;
}

}  // namespace raftmin
