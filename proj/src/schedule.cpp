#include "sixpp/schedule.hpp"

#include <stdexcept>

namespace sixpp {

SlotframeLayout build_layout(unsigned total_slots, const std::optional<CtWindow>& window,
                             std::uint64_t slot_duration_us) {
    if (total_slots == 0)
        throw std::invalid_argument("layout: total_slots must be >= 1");
    if (slot_duration_us == 0)
        throw std::invalid_argument("layout: slot duration must be positive");
    SlotframeLayout layout;
    layout.slot_duration_us = slot_duration_us;
    layout.total_slots = total_slots;
    std::uint64_t delta_ct = 0;
    if (window && window->floods_per_frame > 0) {
        if (window->n_tx == 0 || window->n_h == 0 || window->t_slot_us == 0)
            throw std::invalid_argument("layout: ct window needs n_tx, n_h and t_slot >= 1");
        delta_ct = window->delta_ct_us();
    }
    const unsigned ct_reserved = unsigned((delta_ct + slot_duration_us - 1) / slot_duration_us);
    if (ct_reserved > total_slots)
        throw std::invalid_argument("layout: ct window does not fit the slotframe");
    layout.ct_reserved_slots = ct_reserved;
    layout.shared_slots = total_slots - ct_reserved;
    return layout;
}

SlotRole slot_role(const SlotframeLayout& layout, Asn asn) {
    return (asn % layout.total_slots) < layout.ct_reserved_slots ? SlotRole::CT : SlotRole::SHARED;
}

unsigned tsch_channel(const HoppingConfig& hopping, Asn asn) {
    if (hopping.tsch_channels.empty())
        throw std::invalid_argument("hopping: tsch channel list is empty");
    return hopping.tsch_channels[(asn + hopping.tsch_offset) % hopping.tsch_channels.size()];
}

unsigned ct_channel(const HoppingConfig& hopping, std::uint64_t flood_index) {
    if (hopping.ct_channels.empty())
        throw std::invalid_argument("hopping: ct channel list is empty");
    return hopping.ct_channels[(flood_index + hopping.ct_offset) % hopping.ct_channels.size()];
}

}  // namespace sixpp
