#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace chemotax {

/// Motility coefficient gamma(s) on (0,inf) with analytic first and second
/// derivatives. Presets only; see preset().
struct MotilityFunction {
    std::string name;
    std::function<double(double)> eval;
    std::function<double(double)> deriv;
    std::function<double(double)> deriv2;
    bool nondecreasing = false;   // gamma' >= 0 on all of (0,inf)
    bool claims_unbounded = false; // limsup gamma = inf

    double operator()(double s) const { return eval(s); }

    /// true if deriv(s) >= 0 on [lo,hi], probed on n uniformly spaced points.
    bool is_nondecreasing_on(double lo, double hi, int n = 1000) const;
    /// true if deriv2(s) <= 0 on [lo,hi], probed likewise.
    bool is_concave_on(double lo, double hi, int n = 1000) const;
};

/// Named motility presets:
///   power_decay  (k>0)     gamma(s) = s^-k
///   power_growth (k>0)     gamma(s) = s^k
///   exp_growth   (chi>0)   gamma(s) = exp(chi*s)
///   exp_decay    (chi>0)   gamma(s) = exp(-chi*s)
///   log_concave             gamma(s) = log(1+s)
///   sqrt                    gamma(s) = sqrt(s)
///   wobble (0<a<1, b)       gamma(s) = s*(1 + a*sin(b*s))
struct MotilityParams {
    double k = 1.0;
    double chi = 1.0;
    double a = 0.5;
    double b = 1.0;
};

MotilityFunction preset(const std::string& name, const MotilityParams& params = {});

/// Anchor s* with gamma(s*) = max over [v_star, s*] of gamma, s* >= vin_sup.
/// Scans expanding intervals [v_star, j*vin_sup], picks the largest
/// maximizer, stops at the first j whose maximizer reaches vin_sup, and
/// refines by golden-section search. Throws NoSStarFoundError when the
/// scan hits s_cap without success.
double find_s_star(const MotilityFunction& gamma, double v_star, double vin_sup,
                   double s_cap);

double default_s_cap(double vin_sup);

/// Monotone splitting of gamma above the anchor s*:
///   gamma_i(s) = int_{s*}^{s} max(gamma',0)   (s >= s*, else 0)
///   gamma_d(s) = int_{s*}^{s} min(gamma',0)   (s >= s*, else 0)
///   Gamma_d(s) = int_{s*}^{s} gamma_d
/// so that gamma(s) = gamma(s*) + gamma_i(s) + gamma_d(s) for s >= s*.
/// Cumulative values are memoized eagerly on a lattice over [v_star, s_cap];
/// evaluation adds an adaptive-Simpson tail from the nearest lower lattice
/// node, keeping the absolute error at eps_quad everywhere.
class SplitMotility {
public:
    SplitMotility(MotilityFunction gamma, double s_star, double v_star, double s_cap);

    double s_star() const { return s_star_; }
    double v_star() const { return v_star_; }
    double s_cap() const { return s_cap_; }
    double gamma_at_s_star() const { return gamma_s_star_; }
    const MotilityFunction& gamma() const { return gamma_; }

    double gamma_i(double s) const;
    double gamma_d(double s) const;
    double Gamma_d(double s) const;

    static constexpr double eps_quad = 1e-8;

private:
    double node(std::size_t k) const { return s_star_ + static_cast<double>(k) * spacing_; }
    std::size_t lower_node(double s) const;

    MotilityFunction gamma_;
    double s_star_;
    double v_star_;
    double s_cap_;
    double gamma_s_star_;
    double spacing_;
    std::vector<double> gi_;  // cumulative int of (gamma')_+ at lattice nodes
    std::vector<double> gd_;  // cumulative int of -(gamma')_- at lattice nodes
    std::vector<double> Gd_;  // cumulative int of gamma_d at lattice nodes
};

/// Adaptive Simpson quadrature to absolute tolerance tol; throws
/// QuadratureFailureError past the recursion-depth cap.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol);

constexpr double kEpsOpt = 1e-6; // s* refinement tolerance

} // namespace chemotax
