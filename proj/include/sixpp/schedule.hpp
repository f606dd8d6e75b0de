#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sixpp/core.hpp"

namespace sixpp {

using Asn = std::uint64_t;

// One CT window: floods_per_frame back-to-back floods, each spanning
// n_tx + n_h micro-slots of t_slot_us.
struct CtWindow {
    unsigned n_tx = 2;
    unsigned n_h = 1;
    std::uint64_t t_slot_us = 0;
    unsigned floods_per_frame = 1;

    unsigned micro_slots_per_flood() const { return n_tx + n_h; }
    std::uint64_t flood_span_us() const { return std::uint64_t(micro_slots_per_flood()) * t_slot_us; }
    std::uint64_t delta_ct_us() const { return flood_span_us() * floods_per_frame; }
};

struct SlotframeLayout {
    std::uint64_t slot_duration_us = 10'000;
    unsigned total_slots = 1;
    unsigned ct_reserved_slots = 0;  // at the start of every slotframe
    unsigned shared_slots = 1;

    std::uint64_t tau_sf_us() const { return std::uint64_t(total_slots) * slot_duration_us; }
};

// ct_reserved = ceil(delta_ct / slot_duration); the rest is shared.
// No window (or a window of zero floods) disables the CT region.
// Throws when the window does not fit the slotframe or parameters are invalid.
SlotframeLayout build_layout(unsigned total_slots, const std::optional<CtWindow>& window,
                             std::uint64_t slot_duration_us);

enum class SlotRole : std::uint8_t { CT, SHARED };

SlotRole slot_role(const SlotframeLayout& layout, Asn asn);

struct HoppingConfig {
    // IEEE 802.15.4 channels for the TSCH plane, BLE advertising channels for
    // the CT plane by default.
    std::vector<unsigned> tsch_channels = {11, 12, 13, 14, 15, 16, 17, 18,
                                           19, 20, 21, 22, 23, 24, 25, 26};
    std::vector<unsigned> ct_channels = {37, 38, 39};
    unsigned tsch_offset = 0;
    unsigned ct_offset = 0;
};

// Channel of a TSCH slot: list[(asn + offset) mod len].
unsigned tsch_channel(const HoppingConfig& hopping, Asn asn);

// Channel of a CT flood, constant for the whole flood:
// list[(flood_index + offset) mod len].
unsigned ct_channel(const HoppingConfig& hopping, std::uint64_t flood_index);

}  // namespace sixpp
