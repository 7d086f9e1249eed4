#include "zeno/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>

#include <boost/math/tools/minima.hpp>

namespace zeno {

namespace {

void require_probability(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument(std::string(what) + " must be in [0, 1], got " +
                                    std::to_string(p));
    }
}

constexpr int kFitGridPoints = 101;

}  // namespace

CycleOptimum optimal_cycles(const LossBudget& losses, int n_max) {
    if (n_max < 1) {
        throw std::invalid_argument("n_max must be >= 1, got " + std::to_string(n_max));
    }
    CycleOptimum best{1, -std::numeric_limits<double>::infinity(), false};
    for (int n = 1; n <= n_max; ++n) {
        const double eta = lossy_closed_form(losses.at(n)).eta;
        if (eta > best.eta_star) {
            best.n_star = n;
            best.eta_star = eta;
        }
    }
    best.at_boundary = best.n_star == n_max;
    return best;
}

void ComponentSpecs::validate() const {
    require_probability(pockels_single_pass_t, "Pockels transmission");
    require_probability(recycling_mirror_r, "recycling mirror reflectivity");
    require_probability(surface_loss, "surface loss");
    require_probability(detector_eff, "detector efficiency");
    if (qwp_encounters < 0 || pbs_encounters < 0 || object_arm_encounters < 0) {
        throw std::invalid_argument("surface encounter counts must be non-negative");
    }
}

LossBudget specs_to_params(const ComponentSpecs& specs) {
    specs.validate();
    const double surface = 1.0 - specs.surface_loss;
    LossBudget losses;
    losses.t_empty = specs.pockels_single_pass_t * specs.pockels_single_pass_t *
                     std::pow(surface, specs.pbs_encounters);
    losses.t_rec = std::pow(surface, specs.qwp_encounters) * specs.recycling_mirror_r;
    losses.t_obj = std::pow(surface, specs.object_arm_encounters);
    return losses;
}

std::vector<FeasibilityRow> feasibility_scan(std::span<const ComponentSpecs> grid, int n_max) {
    if (grid.empty()) {
        throw std::invalid_argument("feasibility scan needs at least one spec row");
    }
    std::vector<FeasibilityRow> rows;
    rows.reserve(grid.size());
    for (const ComponentSpecs& specs : grid) {
        FeasibilityRow row{specs, specs_to_params(specs), {}, 0.0};
        row.optimum = optimal_cycles(row.losses, n_max);
        row.eta_adjusted = detector_adjust(row.optimum.eta_star, specs.detector_eff);
        rows.push_back(row);
    }
    return rows;
}

double model_efficiency(int n_cycles, double t_cycl, const FitOptions& options) {
    const LossyModelParams params{n_cycles, std::pow(t_cycl, 1.0 - options.rec_share),
                                  options.t_obj, std::pow(t_cycl, options.rec_share)};
    return lossy_closed_form(params).eta;
}

FitResult fit_losses(std::span<const EfficiencyPoint> data, const FitOptions& options) {
    require_probability(options.t_obj, "t_obj");
    require_probability(options.rec_share, "rec_share");
    if (!(options.lower >= 0.0 && options.lower < options.upper && options.upper <= 1.0)) {
        throw std::invalid_argument("fit bounds must satisfy 0 <= lower < upper <= 1");
    }
    std::set<int> distinct;
    for (const EfficiencyPoint& p : data) {
        if (p.n_cycles < 1) {
            throw std::invalid_argument("fit data: cycle counts must be >= 1");
        }
        if (!(p.sigma > 0.0)) {
            throw std::invalid_argument("fit data: sigma must be positive");
        }
        distinct.insert(p.n_cycles);
    }
    if (distinct.size() < 2) {
        throw std::invalid_argument("fit data: need at least two distinct cycle counts");
    }

    auto chi2 = [&](double t) {
        double sum = 0.0;
        for (const EfficiencyPoint& p : data) {
            const double r = (model_efficiency(p.n_cycles, t, options) - p.eta) / p.sigma;
            sum += r * r;
        }
        return sum;
    };

    // Coarse grid first so Brent only has to polish a bracketed minimum.
    const double width = (options.upper - options.lower) / (kFitGridPoints - 1);
    int best = 0;
    double best_chi2 = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kFitGridPoints; ++i) {
        const double value = chi2(options.lower + i * width);
        if (value < best_chi2) {
            best_chi2 = value;
            best = i;
        }
    }
    const double lo = options.lower + std::max(best - 1, 0) * width;
    const double hi = options.lower + std::min(best + 1, kFitGridPoints - 1) * width;

    std::uintmax_t iterations = static_cast<std::uintmax_t>(options.max_iterations);
    const auto [t_hat, rss] = boost::math::tools::brent_find_minima(
        chi2, lo, hi, std::numeric_limits<double>::digits, iterations);
    if (iterations >= static_cast<std::uintmax_t>(options.max_iterations)) {
        throw std::runtime_error("fit_losses: minimizer did not converge in " +
                                 std::to_string(options.max_iterations) + " iterations");
    }

    // Gauss-Newton curvature: 1/sigma_t^2 = sum (d eta/dt / sigma)^2
    const double h = 1e-6;
    const double t_lo = std::max(options.lower, t_hat - h);
    const double t_hi = std::min(options.upper, t_hat + h);
    double information = 0.0;
    for (const EfficiencyPoint& p : data) {
        const double slope = (model_efficiency(p.n_cycles, t_hi, options) -
                              model_efficiency(p.n_cycles, t_lo, options)) /
                             (t_hi - t_lo);
        information += (slope / p.sigma) * (slope / p.sigma);
    }

    FitResult result;
    result.t_cycl = t_hat;
    result.residual_sum_squares = rss;
    result.uncertainty = information > 0.0 ? 1.0 / std::sqrt(information)
                                           : std::numeric_limits<double>::infinity();
    result.iterations = static_cast<int>(iterations);
    return result;
}

}  // namespace zeno
