#include "sixpp/tschmac.hpp"

#include <stdexcept>

namespace sixpp {

namespace {

// Floor division, exact for negative numerators.
inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}

}  // namespace

std::int64_t ClockModel::local_of_true(SimTime t) const {
    const std::int64_t tt = std::int64_t(t);
    return tt + floor_div(tt * drift_ppm, 1'000'000) + offset_us;
}

std::int64_t ClockModel::true_of_local(std::int64_t local_us) const {
    const std::int64_t y = local_us - offset_us;
    std::int64_t t = floor_div(y * 1'000'000, 1'000'000 + drift_ppm);
    // local_of_true is monotone; correct the rounding estimate to the exact
    // floor preimage.
    while (local_of_true(SimTime(t + 1)) <= local_us)
        ++t;
    while (t > 0 && local_of_true(SimTime(t)) > local_us)
        --t;
    return t;
}

const char* mac_mode_name(MacMode mode) {
    return mode == MacMode::SIXPP ? "sixpp" : "baseline";
}

std::int64_t predicted_boundary_true(const ClockModel& clock, const SyncAnchor& anchor, Asn asn,
                                     std::uint64_t slot_duration_us) {
    const std::int64_t delta_slots = std::int64_t(asn) - std::int64_t(anchor.asn);
    const std::int64_t local = anchor.local_us + delta_slots * std::int64_t(slot_duration_us);
    return clock.true_of_local(local);
}

std::int64_t sync_error_us(const ClockModel& clock, const SyncAnchor& anchor, Asn asn,
                           std::uint64_t slot_duration_us, std::int64_t reference_boundary_true) {
    return predicted_boundary_true(clock, anchor, asn, slot_duration_us) - reference_boundary_true;
}

void apply_backoff(TschNodeState& state, const MacParams& params, const Rng& rng, NodeId node) {
    const std::uint64_t window = 1ull << state.backoff_exponent;
    state.backoff_counter =
        unsigned(rng.uniform_int(window, node, Draw::Backoff, state.backoff_draws++));
    if (state.backoff_exponent < params.backoff_exponent_max)
        ++state.backoff_exponent;
}

void reset_backoff(TschNodeState& state, const MacParams& params) {
    state.backoff_exponent = params.backoff_exponent_min;
    state.backoff_counter = 0;
}

}  // namespace sixpp
