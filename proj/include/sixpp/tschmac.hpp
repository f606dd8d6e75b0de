#pragma once

#include <cstdint>
#include <deque>
#include <optional>

#include "sixpp/core.hpp"
#include "sixpp/schedule.hpp"

namespace sixpp {

// Affine local clock: local(t) = t * (1 + drift_ppm * 1e-6) + offset,
// evaluated in integer microseconds. |drift_ppm| <= 200.
struct ClockModel {
    std::int32_t drift_ppm = 0;
    std::int64_t offset_us = 0;

    std::int64_t local_of_true(SimTime t) const;
    // Largest true time whose local image is <= local_us (inverse mapping).
    std::int64_t true_of_local(std::int64_t local_us) const;
};

enum class MacMode : std::uint8_t { BASELINE_6TISCH_MINIMAL, SIXPP };

const char* mac_mode_name(MacMode mode);

struct MacParams {
    std::uint64_t guard_us = 1000;
    std::uint64_t eb_period_us = 4'000'000;
    double eb_jitter_frac = 0.10;
    std::uint64_t ka_period_us = 10'000'000;
    unsigned max_retries = 3;
    unsigned backoff_exponent_min = 1;
    unsigned backoff_exponent_max = 7;
    bool resync_enabled = true;
};

// Local time of a slot boundary the node believes in, anchored at a synced
// reference boundary.
struct SyncAnchor {
    std::int64_t local_us = 0;
    Asn asn = 0;
};

// True time at which the node's clock predicts the boundary of `asn`.
std::int64_t predicted_boundary_true(const ClockModel& clock, const SyncAnchor& anchor, Asn asn,
                                     std::uint64_t slot_duration_us);

// Signed error (node prediction minus reference boundary) in true
// microseconds. `reference_boundary_true` is where the coordinator actually
// places the boundary of `asn`.
std::int64_t sync_error_us(const ClockModel& clock, const SyncAnchor& anchor, Asn asn,
                           std::uint64_t slot_duration_us, std::int64_t reference_boundary_true);

struct TschNodeState {
    bool associated = false;
    SyncAnchor anchor;
    SimTime last_sync_at = 0;
    SimTime associated_at = 0;
    // Shared-slot contention.
    unsigned backoff_exponent = 1;
    unsigned backoff_counter = 0;
    std::uint64_t backoff_draws = 0;  // draw counter for the backoff substream
};

// Exponential backoff after a failed shared-slot attempt: BE grows by one
// (capped), the counter is drawn uniformly from [0, 2^BE - 1] eligible
// shared slots.
void apply_backoff(TschNodeState& state, const MacParams& params, const Rng& rng, NodeId node);
void reset_backoff(TschNodeState& state, const MacParams& params);

}  // namespace sixpp
