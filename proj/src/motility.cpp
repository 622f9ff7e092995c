#include "chemotax/motility.hpp"
#include "chemotax/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace chemotax {

bool MotilityFunction::is_nondecreasing_on(double lo, double hi, int n) const {
    for (int i = 0; i < n; ++i) {
        const double s = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
        if (deriv(s) < 0.0) return false;
    }
    return true;
}

bool MotilityFunction::is_concave_on(double lo, double hi, int n) const {
    for (int i = 0; i < n; ++i) {
        const double s = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
        if (deriv2(s) > 0.0) return false;
    }
    return true;
}

MotilityFunction preset(const std::string& name, const MotilityParams& p) {
    MotilityFunction m;
    m.name = name;
    if (name == "power_decay") {
        if (!(p.k > 0.0)) throw ConfigError("power_decay requires k > 0");
        const double k = p.k;
        m.eval = [k](double s) { return std::pow(s, -k); };
        m.deriv = [k](double s) { return -k * std::pow(s, -k - 1.0); };
        m.deriv2 = [k](double s) { return k * (k + 1.0) * std::pow(s, -k - 2.0); };
    } else if (name == "power_growth") {
        if (!(p.k > 0.0)) throw ConfigError("power_growth requires k > 0");
        const double k = p.k;
        m.eval = [k](double s) { return std::pow(s, k); };
        m.deriv = [k](double s) { return k * std::pow(s, k - 1.0); };
        m.deriv2 = [k](double s) { return k * (k - 1.0) * std::pow(s, k - 2.0); };
        m.nondecreasing = true;
        m.claims_unbounded = true;
    } else if (name == "exp_growth") {
        if (!(p.chi > 0.0)) throw ConfigError("exp_growth requires chi > 0");
        const double c = p.chi;
        m.eval = [c](double s) { return std::exp(c * s); };
        m.deriv = [c](double s) { return c * std::exp(c * s); };
        m.deriv2 = [c](double s) { return c * c * std::exp(c * s); };
        m.nondecreasing = true;
        m.claims_unbounded = true;
    } else if (name == "exp_decay") {
        if (!(p.chi > 0.0)) throw ConfigError("exp_decay requires chi > 0");
        const double c = p.chi;
        m.eval = [c](double s) { return std::exp(-c * s); };
        m.deriv = [c](double s) { return -c * std::exp(-c * s); };
        m.deriv2 = [c](double s) { return c * c * std::exp(-c * s); };
    } else if (name == "log_concave") {
        m.eval = [](double s) { return std::log1p(s); };
        m.deriv = [](double s) { return 1.0 / (1.0 + s); };
        m.deriv2 = [](double s) { return -1.0 / ((1.0 + s) * (1.0 + s)); };
        m.nondecreasing = true;
        m.claims_unbounded = true;
    } else if (name == "sqrt") {
        m.eval = [](double s) { return std::sqrt(s); };
        m.deriv = [](double s) { return 0.5 / std::sqrt(s); };
        m.deriv2 = [](double s) { return -0.25 / (s * std::sqrt(s)); };
        m.nondecreasing = true;
        m.claims_unbounded = true;
    } else if (name == "wobble") {
        if (!(p.a > 0.0 && p.a < 1.0))
            throw ConfigError("wobble requires 0 < a < 1 (positivity of gamma)");
        if (!(p.b > 0.0)) throw ConfigError("wobble requires b > 0");
        const double a = p.a, b = p.b;
        m.eval = [a, b](double s) { return s * (1.0 + a * std::sin(b * s)); };
        m.deriv = [a, b](double s) {
            return 1.0 + a * std::sin(b * s) + a * b * s * std::cos(b * s);
        };
        m.deriv2 = [a, b](double s) {
            return 2.0 * a * b * std::cos(b * s) - a * b * b * s * std::sin(b * s);
        };
        m.claims_unbounded = true;
    } else {
        throw ConfigError("unknown motility preset '" + name + "'");
    }
    return m;
}

namespace {

double simpson_rec(const std::function<double(double)>& f, double a, double b,
                   double fa, double fm, double fb, double whole, double tol, int depth) {
    if (depth > 48) throw QuadratureFailureError("adaptive Simpson recursion cap hit");
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

// Golden-section search for a maximizer of f on [a,b], interval tolerance tol.
double golden_max(const std::function<double(double)>& f, double a, double b, double tol) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2; f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1; f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

} // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol) {
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 0);
}

double default_s_cap(double vin_sup) { return std::max(1e3, 100.0 * vin_sup); }

double find_s_star(const MotilityFunction& gamma, double v_star, double vin_sup,
                   double s_cap) {
    if (!(v_star > 0.0 && v_star <= vin_sup))
        throw SimError("find_s_star requires 0 < v_star <= vin_sup");
    if (gamma.nondecreasing) return vin_sup; // the maximizer over [v*, vin_sup] is vin_sup

    const double samples_per_unit = 4096.0;
    for (int j = 1;; ++j) {
        const double hi = std::min(static_cast<double>(j) * vin_sup, s_cap);
        const std::size_t n =
            std::max<std::size_t>(4096, static_cast<std::size_t>((hi - v_star) * samples_per_unit));
        const double step = (hi - v_star) / static_cast<double>(n);
        double best = -std::numeric_limits<double>::infinity();
        std::size_t best_i = 0;
        for (std::size_t i = 0; i <= n; ++i) {
            const double s = v_star + step * static_cast<double>(i);
            const double val = gamma.eval(s);
            // ties resolved toward the largest maximizer
            if (val >= best) { best = val; best_i = i; }
        }
        const double lo_b = v_star + step * static_cast<double>(best_i > 0 ? best_i - 1 : 0);
        const double hi_b = v_star + step * static_cast<double>(std::min(best_i + 1, n));
        double s_j = golden_max(gamma.eval, lo_b, hi_b, kEpsOpt);
        if (gamma.eval(hi) >= gamma.eval(s_j)) s_j = hi; // boundary maximizer
        if (s_j >= vin_sup - kEpsOpt) return std::max(s_j, vin_sup);
        if (hi >= s_cap)
            throw NoSStarFoundError(
                "no s* found up to s_cap: gamma appears bounded and non-monotone "
                "(hypothesis limsup gamma = inf not observed)");
    }
}

std::size_t SplitMotility::lower_node(double s) const {
    const double r = (s - s_star_) / spacing_;
    std::size_t k = static_cast<std::size_t>(std::max(0.0, std::floor(r)));
    if (k >= gi_.size()) k = gi_.size() - 1;
    return k;
}

SplitMotility::SplitMotility(MotilityFunction gamma, double s_star, double v_star,
                             double s_cap)
    : gamma_(std::move(gamma)), s_star_(s_star), v_star_(v_star), s_cap_(s_cap) {
    if (!(v_star > 0.0) || !(s_star >= v_star) || !(s_cap > s_star))
        throw SimError("SplitMotility requires 0 < v_star <= s_star < s_cap");
    gamma_s_star_ = gamma_.eval(s_star_);
    // lattice spacing from a 2^14 subdivision of [v*, s_cap], snapped so the
    // nodes cover [s*, s_cap] exactly
    const double nominal = (s_cap_ - v_star_) / 16384.0;
    const std::size_t n_int = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil((s_cap_ - s_star_) / nominal)));
    spacing_ = (s_cap_ - s_star_) / static_cast<double>(n_int);
    const std::size_t nodes = n_int + 1;
    gi_.assign(nodes, 0.0);
    gd_.assign(nodes, 0.0);
    Gd_.assign(nodes, 0.0);
    const auto dpos = [this](double s) { return std::max(gamma_.deriv(s), 0.0); };
    const auto dneg = [this](double s) { return std::min(gamma_.deriv(s), 0.0); };
    const double tol_cell = 0.5 * eps_quad / static_cast<double>(nodes);
    for (std::size_t k = 1; k < nodes; ++k) {
        const double a = node(k - 1), b = std::min(node(k), s_cap_);
        gi_[k] = gi_[k - 1] + adaptive_simpson(dpos, a, b, tol_cell);
        gd_[k] = gd_[k - 1] + adaptive_simpson(dneg, a, b, tol_cell);
        const double gd_a = gd_[k - 1];
        const auto gd_local = [&](double s) {
            return gd_a + adaptive_simpson(dneg, a, s, 0.01 * tol_cell);
        };
        Gd_[k] = Gd_[k - 1] + adaptive_simpson(gd_local, a, b, tol_cell);
    }
}

double SplitMotility::gamma_i(double s) const {
    if (s <= s_star_) return 0.0;
    if (s > s_cap_) throw SimError("gamma_i evaluated beyond s_cap");
    const std::size_t k = lower_node(s);
    const auto dpos = [this](double t) { return std::max(gamma_.deriv(t), 0.0); };
    return gi_[k] + adaptive_simpson(dpos, node(k), s, 0.5 * eps_quad);
}

double SplitMotility::gamma_d(double s) const {
    if (s <= s_star_) return 0.0;
    if (s > s_cap_) throw SimError("gamma_d evaluated beyond s_cap");
    const std::size_t k = lower_node(s);
    const auto dneg = [this](double t) { return std::min(gamma_.deriv(t), 0.0); };
    return gd_[k] + adaptive_simpson(dneg, node(k), s, 0.5 * eps_quad);
}

double SplitMotility::Gamma_d(double s) const {
    if (s <= s_star_) return 0.0;
    if (s > s_cap_) throw SimError("Gamma_d evaluated beyond s_cap");
    const std::size_t k = lower_node(s);
    const double a = node(k);
    const double gd_a = gd_[k];
    const auto dneg = [this](double t) { return std::min(gamma_.deriv(t), 0.0); };
    const auto gd_local = [&](double t) {
        return gd_a + adaptive_simpson(dneg, a, t, 0.005 * eps_quad);
    };
    return Gd_[k] + adaptive_simpson(gd_local, a, s, 0.5 * eps_quad);
}

} // namespace chemotax
