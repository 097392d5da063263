#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ddx/common.hpp"
#include "ddx/flow.hpp"

namespace ddx::traffic {

struct IntRange {
    std::int64_t lo = 0, hi = 0;  // inclusive
    std::int64_t draw(Rng& rng) const { return rng.int_range(lo, hi); }
};

// Inter-arrival model: a draw is "bursty" with probability burst_prob and
// comes from burst_us, otherwise from normal_us.
struct IatModel {
    double burst_prob = 0.0;
    IntRange burst_us{0, 0};
    IntRange normal_us{0, 0};
    std::int64_t draw(Rng& rng) const {
        return rng.bernoulli(burst_prob) ? burst_us.draw(rng) : normal_us.draw(rng);
    }
};

struct TrafficProfile {
    enum class Kind { benign, dos_slowloris_like };

    Kind kind = Kind::benign;
    int n_flows = 1;
    std::uint64_t seed = 0;
    std::string label = "benign";

    IntRange fwd_pkt_cnt{3, 30};
    IntRange bwd_pkt_cnt{2, 8};
    IntRange fwd_payload_len{0, 1460};
    std::vector<std::int64_t> fwd_hdr_choices{20, 32, 40, 52, 60};
    // backward packet length: either wide uniform, or near-constant
    // base +/- uniform{0..jitter}
    bool bwd_len_constant = false;
    IntRange bwd_len_wide{60, 1500};
    std::int64_t bwd_len_base = 60;
    std::int64_t bwd_len_jitter = 2;
    std::vector<std::int64_t> bwd_hdr_choices{20, 32, 40, 52, 60};
    IatModel fwd_iat;
    IntRange bwd_delay_us{200, 2000};
    double psh_prob = 0.3;
    double fin_prob = 0.7;
    IntRange init_win{8192, 65535};
    IntRange start_offset_us{0, 60'000'000};
    std::string src_net = "192.168";  // first two octets of per-flow client address
    std::string dst_ip = "172.31.0.1";
    std::uint16_t dst_port = 80;

    static TrafficProfile benign(int n_flows, std::uint64_t seed);
    static TrafficProfile dos_slowloris_like(int n_flows, std::uint64_t seed);

    void validate() const;
};

/// Generates a deterministic, time-sorted packet stream for one profile.
/// Each flow draws from its own seed substream, so flow i's packets are
/// unaffected by n_flows.
std::vector<flow::PacketRecord> generate(const TrafficProfile& profile);

/// Merges several generated streams into one time-sorted stream.
std::vector<flow::PacketRecord> merge_streams(
    std::vector<std::vector<flow::PacketRecord>> streams);

}  // namespace ddx::traffic
