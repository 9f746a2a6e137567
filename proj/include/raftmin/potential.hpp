#pragma once

#include <functional>
#include <optional>
#include <string>

namespace raftmin {

enum class PotentialKind { quartic_truncated, physical_quartic, custom };

/// Estimated double-well constants over a dense sampling grid. `valid` is
/// false when an inf/sup degenerates (pure quartics have unbounded W'').
struct WellConstants {
    double c_w = 0.0;  // inf W(s)/(s -/+ 1)^2 over +/- s >= 0
    double C_w = 0.0;  // sup |W'|/sqrt(W)
    double K_w = 0.0;  // sup |W''|
    bool c_w_valid = false;
    bool C_w_valid = false;
    bool K_w_valid = false;
    bool valid() const { return c_w_valid && C_w_valid && K_w_valid; }
};

struct HypothesesReport {
    bool positive_away_from_wells = false;  // W > 0 for s != +/-1
    bool zero_at_wells = false;             // W(+/-1) = 0
    bool quadratic_well_bound = false;      // W(s) >= c_w (s -/+ 1)^2
    bool derivative_bounds = false;         // |W'| <= C_w sqrt(W), |W''| <= K_w
    WellConstants constants;
    bool all() const {
        return positive_away_from_wells && zero_at_wells && quadratic_well_bound &&
               derivative_bounds;
    }
};

/// How a physical quartic relates to the normalized double-well form.
struct NormalizationReport {
    double well_location = 1.0;   // sqrt(-a2/a4)
    double well_value = 0.0;      // W at the wells before shifting
    double shift = 0.0;           // constant added so W(wells) = 0
    bool wells_at_unit = false;   // a2 == -a4
    bool double_well = false;     // a2 < 0
    double barrier = 0.0;         // W(0) - W(well) after shift
};

/// Double-well potential. The default quartic_truncated family is
/// (1-s^2)^2 for |s| <= s0 glued C^2 to a quadratic beyond, which keeps W''
/// bounded and gives quadratic growth at infinity. physical_quartic carries
/// (2 kappa / Lambda^2) f with f(s) = (a2/2) s^2 + (a4/4) s^4, optionally
/// shifted so the wells sit at zero energy.
class Potential {
public:
    static Potential quartic_truncated(double s0 = 2.0);
    static Potential physical_quartic(double a2, double a4, double kappa, double lambda,
                                      bool shift_wells_to_zero = true);
    static Potential custom(std::function<double(double)> w, std::function<double(double)> w1,
                            std::function<double(double)> w2, std::string name = "custom");

    double operator()(double s) const { return w_(s); }
    double value(double s) const { return w_(s); }
    double d1(double s) const { return w1_(s); }
    double d2(double s) const { return w2_(s); }

    PotentialKind kind() const { return kind_; }
    double crossover() const { return s0_; }
    const std::string& name() const { return name_; }

    /// Present for physical_quartic only.
    const std::optional<NormalizationReport>& normalization() const { return normalization_; }

    /// Numerically estimated hypothesis constants (cached after first call).
    const WellConstants& constants() const;

    HypothesesReport check_hypotheses() const;

private:
    Potential() = default;

    PotentialKind kind_ = PotentialKind::custom;
    double s0_ = 2.0;
    std::string name_;
    std::function<double(double)> w_, w1_, w2_;
    std::optional<NormalizationReport> normalization_;
    mutable std::optional<WellConstants> constants_;
};

/// f(s) = (a2/2) s^2 + (a4/4) s^4.
double physical_f(double s, double a2, double a4);

/// Builds W = (2 kappa / Lambda^2) f as a Potential (see physical_quartic).
Potential to_w(double a2, double a4, double kappa, double lambda,
               bool shift_wells_to_zero = true);

WellConstants estimate_constants(const Potential& pot);

}  // namespace raftmin
