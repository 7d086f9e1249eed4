// Experiment design on top of the closed-form model: best cycle count,
// component-spec feasibility scans, and loss fitting from measured
// efficiency curves.

#pragma once

#include <span>
#include <vector>

#include "zeno/analytic.hpp"

namespace zeno {

/// Per-cycle transmissions, independent of the cycle count.
struct LossBudget {
    double t_empty = 1.0;
    double t_obj = 1.0;
    double t_rec = 1.0;

    LossyModelParams at(int n_cycles) const { return {n_cycles, t_empty, t_obj, t_rec}; }

    friend bool operator==(const LossBudget&, const LossBudget&) = default;
};

struct CycleOptimum {
    int n_star = 0;
    double eta_star = 0.0;
    /// The argmax sits at n_max, i.e. the scan never saw the curve turn over.
    bool at_boundary = false;
};

/// Exhaustive scan over N in [1, n_max]; ties go to the smaller N.
CycleOptimum optimal_cycles(const LossBudget& losses, int n_max);

/// Catalogue values for the optical components in one cycle.
///
/// The Pockels cell is crossed twice per cycle. Each QWP and PBS surface
/// encounter loses `surface_loss`; the default counts are a double pass
/// through two surfaces per element.
struct ComponentSpecs {
    double pockels_single_pass_t = 1.0;
    double recycling_mirror_r = 1.0;
    double surface_loss = 0.0;
    int qwp_encounters = 4;
    int pbs_encounters = 4;
    int object_arm_encounters = 2;
    double detector_eff = 1.0;

    void validate() const;

    friend bool operator==(const ComponentSpecs&, const ComponentSpecs&) = default;
};

/// t_empty = T_pockels^2 (1 - s)^pbs
/// t_rec   = (1 - s)^qwp R_mirror
/// t_obj   = (1 - s)^object_arm
LossBudget specs_to_params(const ComponentSpecs& specs);

struct FeasibilityRow {
    ComponentSpecs specs;
    LossBudget losses;
    CycleOptimum optimum;
    double eta_adjusted = 0.0;
};

/// specs_to_params -> optimal_cycles -> detector_adjust for every row, in
/// input order. Throws std::invalid_argument on an empty grid.
std::vector<FeasibilityRow> feasibility_scan(std::span<const ComponentSpecs> grid, int n_max);

struct EfficiencyPoint {
    int n_cycles = 1;
    double eta = 0.0;
    double sigma = 1.0;
};

struct FitOptions {
    /// Object-arm transmission held fixed during the fit.
    double t_obj = 1.0;
    /// How the fitted product is split: t_rec = t_cycl^rec_share,
    /// t_empty = t_cycl^(1 - rec_share).
    double rec_share = 0.5;
    double lower = 0.5;
    double upper = 1.0;
    int max_iterations = 200;
};

struct FitResult {
    /// Fitted per-cycle survival product t_empty * t_rec.
    double t_cycl = 0.0;
    double residual_sum_squares = 0.0;
    /// One-sigma uncertainty of t_cycl from the curvature of the chi^2.
    double uncertainty = 0.0;
    int iterations = 0;
};

/// Model efficiency for a given survival product, split as in `options`.
double model_efficiency(int n_cycles, double t_cycl, const FitOptions& options);

/// Weighted least squares over t_cycl. Throws std::invalid_argument for
/// fewer than two distinct cycle counts or non-positive sigmas, and
/// std::runtime_error if the minimizer hits its iteration cap.
FitResult fit_losses(std::span<const EfficiencyPoint> data, const FitOptions& options = {});

}  // namespace zeno
