// Jones-calculus primitives for a single photon in the H/V basis.
//
// States are sub-normalized: the squared norm of a JonesState is the
// probability that the photon is still in the apparatus. Every element here
// either preserves that norm or strictly reduces it; probability that leaves
// the state is reported to the caller as a scalar.

#pragma once

#include <complex>
#include <numbers>

namespace zeno {

using Amplitude = std::complex<double>;

/// Slack allowed above unit norm before a state is rejected.
inline constexpr double kNormSlack = 1e-12;

class JonesState {
public:
    /// Zero state (photon gone).
    JonesState() = default;

    /// Throws std::invalid_argument if |h|^2 + |v|^2 exceeds 1 + kNormSlack
    /// or an amplitude is not finite.
    JonesState(Amplitude h, Amplitude v);

    static JonesState horizontal() { return {1.0, 0.0}; }
    static JonesState vertical() { return {0.0, 1.0}; }

    Amplitude h() const { return h_; }
    Amplitude v() const { return v_; }

    double h_probability() const { return std::norm(h_); }
    double v_probability() const { return std::norm(v_); }
    double norm2() const { return std::norm(h_) + std::norm(v_); }

    /// Unit-norm copy. Precondition: norm2() > 0.
    JonesState normalized() const;

    friend bool operator==(const JonesState&, const JonesState&) = default;

private:
    Amplitude h_{};
    Amplitude v_{};
};

enum class ObjectKind { Absent, Opaque, Partial };

/// What sits in the reflected (V) arm of the interferometer.
class ObjectSpec {
public:
    static ObjectSpec absent() { return ObjectSpec(ObjectKind::Absent, 1.0, 0.0); }
    static ObjectSpec opaque() { return ObjectSpec(ObjectKind::Opaque, 0.0, 0.0); }
    /// amplitude_transmission in [0, 1]; phase in radians.
    static ObjectSpec partial(double amplitude_transmission, double phase = 0.0);

    ObjectKind kind() const { return kind_; }
    bool present() const { return kind_ != ObjectKind::Absent; }
    double amplitude_transmission() const { return t_; }
    double phase() const { return phase_; }

    friend bool operator==(const ObjectSpec&, const ObjectSpec&) = default;

private:
    ObjectSpec(ObjectKind kind, double t, double phase) : kind_(kind), t_(t), phase_(phase) {}

    ObjectKind kind_;
    double t_;
    double phase_;
};

/// Polarizing beamsplitter with symmetric crosstalk.
///
/// A fraction `crosstalk` of the H intensity is reflected and the same
/// fraction of the V intensity is transmitted. The leaked amplitudes carry
/// the phases `transmit_leak_phase` (V into the transmitted port) and
/// `reflect_leak_phase` (H into the reflected port).
///
/// With both leak phases equal the balanced interferometer is exactly
/// transparent and crosstalk becomes invisible. The default puts the
/// reflected leak in quadrature so that crosstalk produces the polarization
/// dependent loss seen in real cubes.
class PbsModel {
public:
    static constexpr double kDefaultTransmitLeakPhase = 0.0;
    static constexpr double kDefaultReflectLeakPhase = std::numbers::pi / 2;

    /// Ideal PBS.
    PbsModel() = default;

    /// Throws std::invalid_argument unless crosstalk is in [0, 0.5).
    explicit PbsModel(double crosstalk,
                      double transmit_leak_phase = kDefaultTransmitLeakPhase,
                      double reflect_leak_phase = kDefaultReflectLeakPhase);

    double crosstalk() const { return x_; }
    double transmit_leak_phase() const { return chi_t_; }
    double reflect_leak_phase() const { return chi_r_; }

    friend bool operator==(const PbsModel&, const PbsModel&) = default;

private:
    double x_ = 0.0;
    double chi_t_ = kDefaultTransmitLeakPhase;
    double chi_r_ = kDefaultReflectLeakPhase;
};

struct PbsOutput {
    JonesState transmitted;
    JonesState reflected;
};

struct Interaction {
    JonesState surviving;
    double absorbed = 0.0;
};

/// Rotates H toward V by `dtheta` radians: [[cos, -sin], [sin, cos]].
JonesState rotate(const JonesState& state, double dtheta);

PbsOutput pbs_split(const JonesState& state, const PbsModel& pbs);

/// Second pass through the same cube on the way back from the two arms.
/// Keeps only the amplitude returned toward the input port; whatever is
/// routed to the other port is dropped and shows up as a norm deficit.
JonesState pbs_combine(const JonesState& transmitted_arm, const JonesState& reflected_arm,
                       const PbsModel& pbs);

/// Scales both amplitudes by sqrt(transmission). Throws unless transmission
/// is in [0, 1].
JonesState attenuate(const JonesState& state, double transmission);

/// Multiplies both amplitudes by exp(i*phase).
JonesState phase_shift(const JonesState& state, double phase);

Interaction object_interact(const JonesState& reflected_arm, const ObjectSpec& object);

}  // namespace zeno
