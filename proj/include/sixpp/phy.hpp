#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sixpp {

enum class PhyMode : std::uint8_t {
    LE_2M,
    LE_1M,
    LE_CODED_500K,
    LE_CODED_125K,
    IEEE802154_250K,
};

std::uint64_t data_rate_bps(PhyMode phy);
const char* phy_name(PhyMode phy);
std::optional<PhyMode> phy_from_name(std::string_view name);
const std::vector<PhyMode>& all_phy_modes();

// Timing parameters of one CT micro-slot. The airtime model is pure
// bits-over-rate; preamble, CRC and FEC expansion are folded into
// overhead_bytes rather than modelled per PHY.
struct CtTiming {
    PhyMode phy = PhyMode::LE_2M;
    std::uint64_t ramp_up_us = 40;
    unsigned overhead_bytes = 6;
    unsigned payload_bytes = 64;

    unsigned frame_bytes() const { return payload_bytes + overhead_bytes; }
};

// Ceiling of bytes*8 / rate in microseconds. 0 bytes -> 0.
std::uint64_t on_air_time_us(PhyMode phy, std::uint64_t total_bytes);

// ramp_up + on-air time of payload + overhead.
std::uint64_t ct_micro_slot_duration_us(const CtTiming& timing);

// How many CT flood messages fit in one slotframe:
//   floor(t_sf / (t_slot * (n_tx + n_h)))
// Throws std::invalid_argument on t_sf == 0, n_tx == 0 or n_h == 0.
std::uint64_t messages_per_slotframe(std::uint64_t t_sf_us, const CtTiming& timing, unsigned n_tx,
                                     unsigned n_h);

struct CapacityRow {
    PhyMode phy;
    unsigned n_tx;
    unsigned n_h;
    unsigned payload_bytes;
    std::uint64_t t_slot_us;
    std::uint64_t messages;
};

std::vector<CapacityRow> capacity_sweep(std::uint64_t t_sf_us, unsigned payload_bytes,
                                        const std::vector<PhyMode>& phys, unsigned n_tx_lo,
                                        unsigned n_tx_hi, unsigned n_h_lo, unsigned n_h_hi,
                                        std::uint64_t ramp_up_us = 40, unsigned overhead_bytes = 6);

// CSV with header `phy,n_tx,n_h,payload_bytes,t_slot_us,messages` and a
// leading comment row carrying the config hash and seed.
std::string capacity_csv(const std::vector<CapacityRow>& rows, std::uint64_t config_hash,
                         std::uint64_t seed);

}  // namespace sixpp
