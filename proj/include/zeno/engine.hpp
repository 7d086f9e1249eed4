// N-cycle recycled polarization interferometer.
//
// One cycle: the recycling waveplates rotate the polarization, the PBS splits
// it into the empty (H, transmitted) arm and the object (V, reflected) arm,
// the arms recombine at the PBS, and the photon travels back through the
// recycling arm. After the last cycle the photon is switched out and its
// polarization read.

#pragma once

#include <cstdint>
#include <optional>

#include "zeno/polarization.hpp"

namespace zeno {

struct CycleParams {
    double dtheta = std::numbers::pi / 4;
    double t_empty = 1.0;    ///< empty (H) arm, per cycle
    double t_obj_arm = 1.0;  ///< object-arm optics, applied before the object
    double t_rec = 1.0;      ///< recycling arm, per cycle
    PbsModel pbs;
    double interferometer_phase = 0.0;  ///< extra phase on the reflected arm
    ObjectSpec object = ObjectSpec::opaque();

    /// Throws std::invalid_argument on out-of-range fields.
    void validate() const;

    friend bool operator==(const CycleParams&, const CycleParams&) = default;
};

struct SystemConfig {
    int n_cycles = 1;
    /// `cycle.dtheta` is ignored; see rotation_step().
    CycleParams cycle;
    /// When set, replaces the default pi/(2N) rotation step.
    std::optional<double> dtheta_override;
    double detector_eff = 1.0;
    double filter_t = 1.0;

    double rotation_step() const;
    /// `cycle` with dtheta filled in from rotation_step().
    CycleParams cycle_params() const;
    /// Net detection efficiency used for the adjusted efficiency.
    double net_detection() const { return detector_eff * filter_t; }

    void validate() const;

    friend bool operator==(const SystemConfig&, const SystemConfig&) = default;
};

struct CycleResult {
    JonesState survivor;
    double absorbed = 0.0;
    double lost = 0.0;
};

struct OutcomeErrors {
    double p_qi = 0.0;
    double p_abs = 0.0;
    double p_loss = 0.0;
    double p_wrong = 0.0;

    friend bool operator==(const OutcomeErrors&, const OutcomeErrors&) = default;
};

/// Probability ledger of a run.
///
/// With an object present, p_qi is the probability the photon exits with the
/// "object" polarization and p_wrong the probability it exits with the
/// "no object" one. With no object the roles swap: p_qi holds the correct
/// "no object" exit and p_wrong the false "object" signal.
struct RunOutcome {
    double p_qi = 0.0;
    double p_abs = 0.0;
    double p_loss = 0.0;
    double p_wrong = 0.0;
    double eta = 0.0;           ///< NaN when p_qi + p_abs == 0
    double eta_adjusted = 0.0;  ///< NaN when eta is
    std::optional<OutcomeErrors> std_err;

    double total() const { return p_qi + p_abs + p_loss + p_wrong; }

    friend bool operator==(const RunOutcome&, const RunOutcome&) = default;
};

/// One pass: rotate, split, arm losses and object, recombine with the
/// interferometer phase, then the recycling arm (skipped when
/// `apply_recycling` is false, as on the final cycle).
CycleResult run_cycle(const JonesState& state, const CycleParams& params,
                      bool apply_recycling = true);

/// Exact probability-flow propagation from an H input.
RunOutcome run_exact(const SystemConfig& config);

struct MonteCarloOptions {
    std::uint64_t trials = 100000;
    std::uint64_t seed = 0;
    /// 0 picks std::thread::hardware_concurrency().
    unsigned threads = 0;
};

/// Samples independent photon trajectories. Trial i draws from an mt19937_64
/// seeded from (seed, i), so the result does not depend on the thread count.
/// Throws std::invalid_argument for no-object configs with crosstalk.
RunOutcome run_monte_carlo(const SystemConfig& config, const MonteCarloOptions& options);

/// False-"object" probability of a no-object run. Throws
/// std::invalid_argument if the config has an object.
double noise_run(const SystemConfig& config);

}  // namespace zeno
