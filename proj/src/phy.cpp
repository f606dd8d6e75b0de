#include "sixpp/phy.hpp"

#include <sstream>
#include <stdexcept>

namespace sixpp {

std::uint64_t data_rate_bps(PhyMode phy) {
    switch (phy) {
        case PhyMode::LE_2M: return 2'000'000;
        case PhyMode::LE_1M: return 1'000'000;
        case PhyMode::LE_CODED_500K: return 500'000;
        case PhyMode::LE_CODED_125K: return 125'000;
        case PhyMode::IEEE802154_250K: return 250'000;
    }
    throw std::invalid_argument("unknown phy mode");
}

const char* phy_name(PhyMode phy) {
    switch (phy) {
        case PhyMode::LE_2M: return "LE_2M";
        case PhyMode::LE_1M: return "LE_1M";
        case PhyMode::LE_CODED_500K: return "LE_CODED_500K";
        case PhyMode::LE_CODED_125K: return "LE_CODED_125K";
        case PhyMode::IEEE802154_250K: return "IEEE802154_250K";
    }
    return "?";
}

std::optional<PhyMode> phy_from_name(std::string_view name) {
    for (PhyMode phy : all_phy_modes())
        if (name == phy_name(phy))
            return phy;
    return std::nullopt;
}

const std::vector<PhyMode>& all_phy_modes() {
    static const std::vector<PhyMode> modes = {
        PhyMode::LE_2M,         PhyMode::LE_1M,          PhyMode::LE_CODED_500K,
        PhyMode::LE_CODED_125K, PhyMode::IEEE802154_250K,
    };
    return modes;
}

std::uint64_t on_air_time_us(PhyMode phy, std::uint64_t total_bytes) {
    const std::uint64_t rate = data_rate_bps(phy);
    const std::uint64_t bits_scaled = total_bytes * 8u * 1'000'000u;
    return (bits_scaled + rate - 1) / rate;
}

std::uint64_t ct_micro_slot_duration_us(const CtTiming& timing) {
    return timing.ramp_up_us + on_air_time_us(timing.phy, timing.frame_bytes());
}

std::uint64_t messages_per_slotframe(std::uint64_t t_sf_us, const CtTiming& timing, unsigned n_tx,
                                     unsigned n_h) {
    if (t_sf_us == 0)
        throw std::invalid_argument("messages_per_slotframe: slotframe duration must be positive");
    if (n_tx == 0 || n_h == 0)
        throw std::invalid_argument("messages_per_slotframe: n_tx and n_h must be >= 1");
    const std::uint64_t per_message = ct_micro_slot_duration_us(timing) * (n_tx + n_h);
    return t_sf_us / per_message;
}

std::vector<CapacityRow> capacity_sweep(std::uint64_t t_sf_us, unsigned payload_bytes,
                                        const std::vector<PhyMode>& phys, unsigned n_tx_lo,
                                        unsigned n_tx_hi, unsigned n_h_lo, unsigned n_h_hi,
                                        std::uint64_t ramp_up_us, unsigned overhead_bytes) {
    if (n_tx_lo == 0 || n_h_lo == 0 || n_tx_hi < n_tx_lo || n_h_hi < n_h_lo)
        throw std::invalid_argument("capacity_sweep: bad n_tx/n_h range");
    std::vector<CapacityRow> rows;
    for (PhyMode phy : phys) {
        CtTiming timing{phy, ramp_up_us, overhead_bytes, payload_bytes};
        const std::uint64_t t_slot = ct_micro_slot_duration_us(timing);
        for (unsigned n_tx = n_tx_lo; n_tx <= n_tx_hi; ++n_tx)
            for (unsigned n_h = n_h_lo; n_h <= n_h_hi; ++n_h)
                rows.push_back({phy, n_tx, n_h, payload_bytes, t_slot,
                                messages_per_slotframe(t_sf_us, timing, n_tx, n_h)});
    }
    return rows;
}

std::string capacity_csv(const std::vector<CapacityRow>& rows, std::uint64_t config_hash,
                         std::uint64_t seed) {
    std::ostringstream out;
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(config_hash));
    out << "# config=" << hash << " seed=" << seed << "\n";
    out << "phy,n_tx,n_h,payload_bytes,t_slot_us,messages\n";
    for (const CapacityRow& r : rows) {
        out << phy_name(r.phy) << ',' << r.n_tx << ',' << r.n_h << ',' << r.payload_bytes << ','
            << r.t_slot_us << ',' << r.messages << '\n';
    }
    return out.str();
}

}  // namespace sixpp
