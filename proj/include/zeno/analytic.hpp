// Closed-form efficiency models.

#pragma once

namespace zeno {

struct ZenoProbabilities {
    double p_qi = 0.0;
    double p_abs = 0.0;
};

struct ClosedFormResult {
    double p_qi = 0.0;
    double p_abs = 0.0;
    double eta = 0.0;  ///< NaN when p_qi + p_abs == 0
};

/// Per-cycle transmissions of the lossy model plus the cycle count.
struct LossyModelParams {
    int n_cycles = 1;
    double t_empty = 1.0;
    double t_obj = 1.0;
    double t_rec = 1.0;

    /// Recycling transmission composed from a double pass through the
    /// waveplate and one bounce off the recycling mirror.
    static LossyModelParams from_components(int n_cycles, double t_empty, double t_obj,
                                            double t_qwp, double r_mirror);

    void validate() const;
};

struct ResonanceParams {
    double mirror_reflectivity = 1.0;
};

/// Ideal polarizer chain: p_qi = cos^{2N}(pi/2N). Throws for N < 1.
ZenoProbabilities lossless(int n_cycles);

/// Large-N approximation: p_abs = pi^2/(4N).
ZenoProbabilities lossless_asymptotic(int n_cycles);

/// Recycled interferometer with per-cycle losses and an opaque object.
///
///   p_qi  = (t_empty cos^2)^N t_rec^(N-1)
///   p_abs = t_obj sin^2 (1 - q^N) / (1 - q),  q = t_empty t_rec cos^2
///
/// The geometric ratio falls back to its limit N when 1 - q < 1e-12, and
/// everything is done in log space for N > 500.
ClosedFormResult lossy_closed_form(const LossyModelParams& params);

/// p_qi / (p_qi + p_abs). Throws std::domain_error when both are zero.
double efficiency(double p_qi, double p_abs);

/// Efficiency corrected for a net detection efficiency epsilon in (0, 1]:
/// eta eps / (1 - eta (1 - eps)).
double detector_adjust(double eta_observed, double epsilon);

/// Inverse of detector_adjust in its first argument.
double detector_inverse(double eta_adjusted, double epsilon);

/// Elitzur-Vaidman interferometer with first-beamsplitter transmission t1
/// (probability of entering the object-free arm) and the second splitter
/// set for a dark port. With the object in place
///   P(QI) = t1 (1 - t1),  P(abs) = 1 - t1,
/// so eta = t1 / (1 + t1), which stays below 1/2 for every t1 < 1.
double ev_efficiency(double t1);

ClosedFormResult resonance_efficiency(const ResonanceParams& params);

/// Real N at which the per-cycle rotation probability sin^2(pi/2N) drops to
/// the PBS crosstalk x.
double noise_threshold_n(double crosstalk);

}  // namespace zeno
