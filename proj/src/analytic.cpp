#include "zeno/analytic.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace zeno {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kLogSpaceAbove = 500;
constexpr double kDegenerateGap = 1e-12;

void require_cycles(int n) {
    if (n < 1) {
        throw std::invalid_argument("cycle count must be >= 1, got " + std::to_string(n));
    }
}

void require_probability(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument(std::string(what) + " must be in [0, 1], got " +
                                    std::to_string(p));
    }
}

double step(int n) { return std::numbers::pi / (2.0 * n); }

}  // namespace

LossyModelParams LossyModelParams::from_components(int n_cycles, double t_empty, double t_obj,
                                                   double t_qwp, double r_mirror) {
    require_probability(t_qwp, "t_qwp");
    require_probability(r_mirror, "r_mirror");
    LossyModelParams p{n_cycles, t_empty, t_obj, t_qwp * t_qwp * r_mirror};
    p.validate();
    return p;
}

void LossyModelParams::validate() const {
    require_cycles(n_cycles);
    require_probability(t_empty, "t_empty");
    require_probability(t_obj, "t_obj");
    require_probability(t_rec, "t_rec");
}

ZenoProbabilities lossless(int n_cycles) {
    require_cycles(n_cycles);
    const double c = std::cos(step(n_cycles));
    const double p_qi = std::pow(c * c, n_cycles);
    return {p_qi, 1.0 - p_qi};
}

ZenoProbabilities lossless_asymptotic(int n_cycles) {
    require_cycles(n_cycles);
    const double p_abs = std::numbers::pi * std::numbers::pi / (4.0 * n_cycles);
    return {1.0 - p_abs, p_abs};
}

ClosedFormResult lossy_closed_form(const LossyModelParams& params) {
    params.validate();
    const int n = params.n_cycles;
    const double s = std::sin(step(n));
    const double sin2 = s * s;
    const double cos2 = 1.0 - sin2;

    double p_qi = 0.0;
    double geometric = 0.0;  // (1 - q^N) / (1 - q)
    // 1 - q = (1 - te tr) + te tr sin^2, without cancellation
    const double through = params.t_empty * params.t_rec;
    const double gap = (1.0 - through) + through * sin2;

    if (n <= kLogSpaceAbove) {
        p_qi = std::pow(params.t_empty * cos2, n) * std::pow(params.t_rec, n - 1);
        const double q = through * cos2;
        geometric = gap < kDegenerateGap ? n : (1.0 - std::pow(q, n)) / gap;
    } else {
        const double log_cos2 = std::log1p(-sin2);
        p_qi = std::exp(n * (std::log(params.t_empty) + log_cos2) +
                        (n - 1) * std::log(params.t_rec));
        const double log_q = std::log(through) + log_cos2;
        geometric = gap < kDegenerateGap ? n : -std::expm1(n * log_q) / gap;
    }

    const double p_abs = params.t_obj * sin2 * geometric;
    const double denom = p_qi + p_abs;
    return {p_qi, p_abs, denom > 0.0 ? p_qi / denom : kNaN};
}

double efficiency(double p_qi, double p_abs) {
    if (p_qi < 0.0 || p_abs < 0.0) {
        throw std::invalid_argument("efficiency: probabilities must be non-negative");
    }
    if (p_qi + p_abs == 0.0) {
        throw std::domain_error("efficiency: undefined when P(QI) and P(abs) are both zero");
    }
    return p_qi / (p_qi + p_abs);
}

double detector_adjust(double eta_observed, double epsilon) {
    require_probability(eta_observed, "observed efficiency");
    if (!(epsilon > 0.0 && epsilon <= 1.0)) {
        throw std::invalid_argument("detection efficiency must be in (0, 1], got " +
                                    std::to_string(epsilon));
    }
    return eta_observed * epsilon / (1.0 - eta_observed * (1.0 - epsilon));
}

double detector_inverse(double eta_adjusted, double epsilon) {
    require_probability(eta_adjusted, "adjusted efficiency");
    if (!(epsilon > 0.0 && epsilon <= 1.0)) {
        throw std::invalid_argument("detection efficiency must be in (0, 1], got " +
                                    std::to_string(epsilon));
    }
    return eta_adjusted / (epsilon + eta_adjusted * (1.0 - epsilon));
}

double ev_efficiency(double t1) {
    require_probability(t1, "t1");
    return t1 / (1.0 + t1);
}

ClosedFormResult resonance_efficiency(const ResonanceParams& params) {
    const double r = params.mirror_reflectivity;
    require_probability(r, "mirror reflectivity");
    return {r, 1.0 - r, r};
}

double noise_threshold_n(double crosstalk) {
    if (!(crosstalk > 0.0 && crosstalk < 1.0)) {
        throw std::invalid_argument("crosstalk must be in (0, 1)");
    }
    return std::numbers::pi / (2.0 * std::asin(std::sqrt(crosstalk)));
}

}  // namespace zeno
