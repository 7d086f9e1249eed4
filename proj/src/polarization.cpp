#include "zeno/polarization.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace zeno {

namespace {

void require_probability(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument(std::string(what) + " must be in [0, 1], got " +
                                    std::to_string(p));
    }
}

}  // namespace

JonesState::JonesState(Amplitude h, Amplitude v) : h_(h), v_(v) {
    const double n = norm2();
    if (!std::isfinite(n)) {
        throw std::invalid_argument("JonesState: non-finite amplitude");
    }
    if (n > 1.0 + kNormSlack) {
        throw std::invalid_argument("JonesState: squared norm " + std::to_string(n) +
                                    " exceeds 1");
    }
}

JonesState JonesState::normalized() const {
    const double n = std::sqrt(norm2());
    if (n == 0.0) {
        throw std::domain_error("JonesState: cannot normalize the zero state");
    }
    return {h_ / n, v_ / n};
}

ObjectSpec ObjectSpec::partial(double amplitude_transmission, double phase) {
    require_probability(amplitude_transmission, "object amplitude transmission");
    if (!std::isfinite(phase)) {
        throw std::invalid_argument("object phase must be finite");
    }
    return ObjectSpec(ObjectKind::Partial, amplitude_transmission, phase);
}

PbsModel::PbsModel(double crosstalk, double transmit_leak_phase, double reflect_leak_phase)
    : x_(crosstalk), chi_t_(transmit_leak_phase), chi_r_(reflect_leak_phase) {
    if (!(crosstalk >= 0.0 && crosstalk < 0.5)) {
        throw std::invalid_argument("PBS crosstalk must be in [0, 0.5), got " +
                                    std::to_string(crosstalk));
    }
    if (!std::isfinite(transmit_leak_phase) || !std::isfinite(reflect_leak_phase)) {
        throw std::invalid_argument("PBS leak phases must be finite");
    }
}

JonesState rotate(const JonesState& state, double dtheta) {
    const double c = std::cos(dtheta);
    const double s = std::sin(dtheta);
    return {c * state.h() - s * state.v(), s * state.h() + c * state.v()};
}

PbsOutput pbs_split(const JonesState& state, const PbsModel& pbs) {
    const double x = pbs.crosstalk();
    const double main = std::sqrt(1.0 - x);
    const double leak = std::sqrt(x);
    const Amplitude leak_t = leak * std::polar(1.0, pbs.transmit_leak_phase());
    const Amplitude leak_r = leak * std::polar(1.0, pbs.reflect_leak_phase());
    return {
        JonesState(main * state.h(), leak_t * state.v()),
        JonesState(leak_r * state.h(), main * state.v()),
    };
}

JonesState pbs_combine(const JonesState& transmitted_arm, const JonesState& reflected_arm,
                       const PbsModel& pbs) {
    const double x = pbs.crosstalk();
    const double main = std::sqrt(1.0 - x);
    const double leak = std::sqrt(x);
    const Amplitude leak_t = leak * std::polar(1.0, pbs.transmit_leak_phase());
    const Amplitude leak_r = leak * std::polar(1.0, pbs.reflect_leak_phase());
    // Each output row has unit norm, so the result never exceeds the input
    // probability of the two arms combined.
    return {main * transmitted_arm.h() + leak_r * reflected_arm.h(),
            leak_t * transmitted_arm.v() + main * reflected_arm.v()};
}

JonesState attenuate(const JonesState& state, double transmission) {
    require_probability(transmission, "transmission");
    const double a = std::sqrt(transmission);
    return {a * state.h(), a * state.v()};
}

JonesState phase_shift(const JonesState& state, double phase) {
    if (phase == 0.0) {
        return state;
    }
    const Amplitude p = std::polar(1.0, phase);
    return {p * state.h(), p * state.v()};
}

Interaction object_interact(const JonesState& reflected_arm, const ObjectSpec& object) {
    switch (object.kind()) {
        case ObjectKind::Absent:
            return {reflected_arm, 0.0};
        case ObjectKind::Opaque:
            return {JonesState(), reflected_arm.norm2()};
        case ObjectKind::Partial:
            break;
    }
    const double t = object.amplitude_transmission();
    if (t == 0.0) {
        return {JonesState(), reflected_arm.norm2()};
    }
    const Amplitude factor = t * std::polar(1.0, object.phase());
    return {JonesState(factor * reflected_arm.h(), factor * reflected_arm.v()),
            (1.0 - t * t) * reflected_arm.norm2()};
}

}  // namespace zeno
