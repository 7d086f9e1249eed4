#include "zeno/engine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "zeno/analytic.hpp"

namespace zeno {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_probability(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument(std::string(what) + " must be in [0, 1], got " +
                                    std::to_string(p));
    }
}

void fill_efficiencies(RunOutcome& outcome, double epsilon) {
    const double denom = outcome.p_qi + outcome.p_abs;
    if (denom > 0.0) {
        outcome.eta = outcome.p_qi / denom;
        outcome.eta_adjusted = detector_adjust(std::clamp(outcome.eta, 0.0, 1.0), epsilon);
    } else {
        outcome.eta = kNaN;
        outcome.eta_adjusted = kNaN;
    }
}

// Conditional branch probabilities for a photon that has survived k cycles.
// The surviving state after k cycles is the same for every trajectory, so
// the table is built once and each trial only draws uniforms against it.
struct TrajectoryTable {
    std::vector<double> absorb;     // P(absorbed in cycle k | alive at k)
    std::vector<double> lose;       // P(lost in cycle k | alive at k)
    double exit_qi = 0.0;           // P(QI exit | alive after the last cycle)
};

TrajectoryTable build_table(const SystemConfig& config) {
    const CycleParams params = config.cycle_params();
    TrajectoryTable table;
    table.absorb.reserve(config.n_cycles);
    table.lose.reserve(config.n_cycles);

    JonesState state = JonesState::horizontal();
    bool alive = true;
    for (int k = 0; k < config.n_cycles; ++k) {
        if (!alive) {
            table.absorb.push_back(0.0);
            table.lose.push_back(1.0);
            continue;
        }
        const CycleResult r = run_cycle(state, params, k + 1 < config.n_cycles);
        const double n_in = state.norm2();
        const double absorb = std::clamp(r.absorbed / n_in, 0.0, 1.0);
        const double lose = std::clamp(r.lost / n_in, 0.0, 1.0 - absorb);
        table.absorb.push_back(absorb);
        table.lose.push_back(lose);
        if (r.survivor.norm2() > 0.0) {
            state = r.survivor.normalized();
        } else {
            alive = false;
        }
    }
    if (alive) {
        const bool present = params.object.present();
        table.exit_qi = present ? state.h_probability() : state.v_probability();
    }
    return table;
}

enum Tally : std::size_t { kQi, kAbs, kLoss, kWrong, kTallies };
using Counts = std::array<std::uint64_t, kTallies>;

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
    // splitmix64 finalizer over the pair, so neighbouring trials get
    // unrelated mt19937_64 seeds
    std::uint64_t z = seed * 0x9e3779b97f4a7c15ULL + trial + 0x632be59bd9b4e019ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Tally sample_trial(const TrajectoryTable& table, std::mt19937_64& rng) {
    for (std::size_t k = 0; k < table.absorb.size(); ++k) {
        const double u = uniform01(rng);
        if (u < table.absorb[k]) {
            return kAbs;
        }
        if (u < table.absorb[k] + table.lose[k]) {
            return kLoss;
        }
    }
    return uniform01(rng) < table.exit_qi ? kQi : kWrong;
}

Counts sample_range(const TrajectoryTable& table, std::uint64_t seed, std::uint64_t begin,
                    std::uint64_t end) {
    Counts counts{};
    for (std::uint64_t i = begin; i < end; ++i) {
        std::mt19937_64 rng(trial_seed(seed, i));
        ++counts[sample_trial(table, rng)];
    }
    return counts;
}

}  // namespace

void CycleParams::validate() const {
    if (!(dtheta > 0.0 && dtheta <= std::numbers::pi / 2)) {
        throw std::invalid_argument("dtheta must be in (0, pi/2], got " + std::to_string(dtheta));
    }
    require_probability(t_empty, "t_empty");
    require_probability(t_obj_arm, "t_obj_arm");
    require_probability(t_rec, "t_rec");
    if (!std::isfinite(interferometer_phase)) {
        throw std::invalid_argument("interferometer phase must be finite");
    }
}

double SystemConfig::rotation_step() const {
    return dtheta_override.value_or(std::numbers::pi / (2.0 * n_cycles));
}

CycleParams SystemConfig::cycle_params() const {
    CycleParams params = cycle;
    params.dtheta = rotation_step();
    return params;
}

void SystemConfig::validate() const {
    if (n_cycles < 1) {
        throw std::invalid_argument("n_cycles must be >= 1, got " + std::to_string(n_cycles));
    }
    cycle_params().validate();
    if (!(detector_eff > 0.0 && detector_eff <= 1.0)) {
        throw std::invalid_argument("detector efficiency must be in (0, 1]");
    }
    if (!(filter_t > 0.0 && filter_t <= 1.0)) {
        throw std::invalid_argument("filter transmission must be in (0, 1]");
    }
}

CycleResult run_cycle(const JonesState& state, const CycleParams& params, bool apply_recycling) {
    const JonesState rotated = rotate(state, params.dtheta);
    const PbsOutput split = pbs_split(rotated, params.pbs);

    const JonesState empty_arm = attenuate(split.transmitted, params.t_empty);
    const Interaction hit =
        object_interact(attenuate(split.reflected, params.t_obj_arm), params.object);
    const JonesState object_arm = phase_shift(hit.surviving, params.interferometer_phase);

    JonesState out = pbs_combine(empty_arm, object_arm, params.pbs);
    if (apply_recycling) {
        out = attenuate(out, params.t_rec);
    }
    // everything that is neither absorbed nor still circulating was lost
    const double lost = state.norm2() - out.norm2() - hit.absorbed;
    return {out, hit.absorbed, lost};
}

RunOutcome run_exact(const SystemConfig& config) {
    config.validate();
    const CycleParams params = config.cycle_params();

    RunOutcome outcome;
    JonesState state = JonesState::horizontal();
    for (int k = 0; k < config.n_cycles; ++k) {
        const CycleResult r = run_cycle(state, params, k + 1 < config.n_cycles);
        outcome.p_abs += r.absorbed;
        outcome.p_loss += r.lost;
        state = r.survivor;
    }

    // The switch-out flips H and V before the analyser; the labels below are
    // the pre-switch polarizations.
    if (params.object.present()) {
        outcome.p_qi = state.h_probability();
        outcome.p_wrong = state.v_probability();
    } else {
        outcome.p_qi = state.v_probability();
        outcome.p_wrong = state.h_probability();
    }
    fill_efficiencies(outcome, config.net_detection());
    return outcome;
}

RunOutcome run_monte_carlo(const SystemConfig& config, const MonteCarloOptions& options) {
    config.validate();
    if (options.trials < 1) {
        throw std::invalid_argument("Monte Carlo needs at least one trial");
    }
    if (!config.cycle.object.present() && config.cycle.pbs.crosstalk() > 0.0) {
        throw std::invalid_argument(
            "Monte Carlo sampling needs an object in the interferometer when the PBS has "
            "crosstalk; use the exact engine");
    }

    const TrajectoryTable table = build_table(config);

    unsigned threads = options.threads != 0 ? options.threads : std::thread::hardware_concurrency();
    threads = std::max(1U, threads);
    threads = static_cast<unsigned>(
        std::min<std::uint64_t>(threads, std::max<std::uint64_t>(1, options.trials / 1024)));

    std::vector<Counts> partial(threads);
    {
        std::vector<std::jthread> workers;
        const std::uint64_t chunk = options.trials / threads;
        for (unsigned t = 0; t < threads; ++t) {
            const std::uint64_t begin = t * chunk;
            const std::uint64_t end = t + 1 == threads ? options.trials : begin + chunk;
            workers.emplace_back([&, t, begin, end] {
                partial[t] = sample_range(table, options.seed, begin, end);
            });
        }
    }

    Counts counts{};
    for (const Counts& c : partial) {
        for (std::size_t i = 0; i < kTallies; ++i) {
            counts[i] += c[i];
        }
    }

    const double n = static_cast<double>(options.trials);
    auto freq = [&](Tally t) { return static_cast<double>(counts[t]) / n; };
    auto err = [&](double p) { return std::sqrt(p * (1.0 - p) / n); };

    RunOutcome outcome;
    outcome.p_qi = freq(kQi);
    outcome.p_abs = freq(kAbs);
    outcome.p_loss = freq(kLoss);
    outcome.p_wrong = freq(kWrong);
    outcome.std_err = OutcomeErrors{err(outcome.p_qi), err(outcome.p_abs), err(outcome.p_loss),
                                    err(outcome.p_wrong)};
    fill_efficiencies(outcome, config.net_detection());
    return outcome;
}

double noise_run(const SystemConfig& config) {
    if (config.cycle.object.present()) {
        throw std::invalid_argument("noise_run expects a configuration without an object");
    }
    return run_exact(config).p_wrong;
}

}  // namespace zeno
