#include "ddx/trafficgen.hpp"

#include <algorithm>

namespace ddx::traffic {

using flow::PacketRecord;
using flow::TcpFlag;

TrafficProfile TrafficProfile::benign(int n_flows, std::uint64_t seed) {
    TrafficProfile p;
    p.kind = Kind::benign;
    p.n_flows = n_flows;
    p.seed = seed;
    p.label = "benign";
    p.fwd_pkt_cnt = {2, 30};
    // sporadic arrivals with occasional in-page bursts, so short benign
    // flows and long attack flows overlap in duration
    p.fwd_iat = IatModel{0.35, {500, 10'000}, {5'000, 250'000}};
    p.src_net = "192.168";
    return p;
}

TrafficProfile TrafficProfile::dos_slowloris_like(int n_flows, std::uint64_t seed) {
    TrafficProfile p;
    p.kind = Kind::dos_slowloris_like;
    p.n_flows = n_flows;
    p.seed = seed;
    p.label = "dos";
    p.fwd_pkt_cnt = {2, 30};
    p.bwd_pkt_cnt = {5, 40};             // server keeps answering held connections
    p.fwd_hdr_choices = {20};            // minimal constant forward header
    p.bwd_len_constant = true;           // uniform small responses
    p.bwd_hdr_choices = {40};
    p.fwd_iat = IatModel{1.0, {100, 20'000}, {100, 20'000}};  // rapid
    p.psh_prob = 0.3;
    p.fin_prob = 0.0;                    // connections held open, never finished
    p.init_win = {1024, 4096};
    p.src_net = "10.77";
    return p;
}

void TrafficProfile::validate() const {
    if (n_flows < 1) throw ValidationError("traffic profile needs n_flows >= 1");
    auto check_range = [](const IntRange& r, const char* what) {
        if (r.lo > r.hi || r.hi < 0)
            throw ValidationError(std::string("invalid range for ") + what);
    };
    check_range(fwd_pkt_cnt, "fwd_pkt_cnt");
    check_range(bwd_pkt_cnt, "bwd_pkt_cnt");
    check_range(fwd_payload_len, "fwd_payload_len");
    check_range(bwd_len_wide, "bwd_len_wide");
    check_range(bwd_delay_us, "bwd_delay_us");
    check_range(init_win, "init_win");
    if (fwd_pkt_cnt.lo < 1) throw ValidationError("flows need at least one forward packet");
    if (fwd_hdr_choices.empty() || bwd_hdr_choices.empty())
        throw ValidationError("header choice lists must be non-empty");
    if (fwd_iat.normal_us.lo <= 0 || fwd_iat.burst_us.lo <= 0)
        throw ValidationError("inter-arrival times must be strictly positive");
    if (bwd_len_constant && bwd_len_base - bwd_len_jitter <= 0)
        throw ValidationError("constant backward length must stay positive");
    if (label.empty()) throw ValidationError("profile label must be non-empty");
}

namespace {

struct TimedPacket {
    PacketRecord pkt;
    std::int64_t seq;  // per-flow emission order, for stable tie-breaks
};

std::string client_ip(const std::string& net, int flow_index) {
    return net + "." + std::to_string((flow_index >> 8) & 255) + "." +
           std::to_string(flow_index & 255);
}

std::vector<TimedPacket> generate_flow(const TrafficProfile& p, int flow_index, Rng rng) {
    const std::string src = client_ip(p.src_net, flow_index);
    const std::uint16_t src_port =
        static_cast<std::uint16_t>(1024 + (flow_index * 7) % 50000);

    const int n_fwd = static_cast<int>(p.fwd_pkt_cnt.draw(rng));
    const int n_bwd = static_cast<int>(p.bwd_pkt_cnt.draw(rng));
    const std::int64_t fwd_win = p.init_win.draw(rng);
    const std::int64_t bwd_win = p.init_win.draw(rng);
    const bool finish = rng.bernoulli(p.fin_prob);

    std::vector<TimedPacket> out;
    out.reserve(static_cast<std::size_t>(n_fwd + n_bwd));
    std::int64_t seq = 0;

    std::vector<std::int64_t> fwd_times(n_fwd);
    std::int64_t t = 0;
    for (int i = 0; i < n_fwd; ++i) {
        if (i > 0) t += p.fwd_iat.draw(rng);
        fwd_times[i] = t;

        PacketRecord pk;
        pk.ts_us = t;
        pk.src_ip = src;
        pk.dst_ip = p.dst_ip;
        pk.src_port = src_port;
        pk.dst_port = p.dst_port;
        pk.proto = flow::kProtoTcp;
        pk.hdr_len = rng.pick(p.fwd_hdr_choices);
        pk.payload_len = (i == 0) ? 0 : p.fwd_payload_len.draw(rng);  // bare SYN first
        pk.total_len = pk.hdr_len + pk.payload_len;
        pk.tcp_window = fwd_win;
        if (i == 0) pk.set_flag(TcpFlag::syn);
        else pk.set_flag(TcpFlag::ack);
        if (pk.payload_len > 0 && rng.bernoulli(p.psh_prob)) pk.set_flag(TcpFlag::psh);
        pk.label = p.label;
        out.push_back({std::move(pk), seq++});
    }

    std::int64_t last_ts = fwd_times.empty() ? 0 : fwd_times.back();
    for (int j = 0; j < n_bwd; ++j) {
        const std::int64_t anchor = fwd_times[j % n_fwd];
        const std::int64_t delay = p.bwd_delay_us.draw(rng) * (1 + j / n_fwd);
        const std::int64_t ts = anchor + delay;
        last_ts = std::max(last_ts, ts);

        PacketRecord pk;
        pk.ts_us = ts;
        pk.src_ip = p.dst_ip;
        pk.dst_ip = src;
        pk.src_port = p.dst_port;
        pk.dst_port = src_port;
        pk.proto = flow::kProtoTcp;
        if (p.bwd_len_constant) {
            const std::int64_t off = rng.int_range(0, p.bwd_len_jitter);
            const std::int64_t sign = rng.bernoulli(0.5) ? 1 : -1;
            pk.total_len = p.bwd_len_base + sign * off;
        } else {
            pk.total_len = p.bwd_len_wide.draw(rng);
        }
        pk.hdr_len = rng.pick(p.bwd_hdr_choices);
        if (pk.hdr_len > pk.total_len) pk.hdr_len = pk.total_len;
        pk.payload_len = pk.total_len - pk.hdr_len;
        pk.tcp_window = bwd_win;
        pk.set_flag(TcpFlag::ack);
        if (pk.payload_len > 0 && rng.bernoulli(p.psh_prob)) pk.set_flag(TcpFlag::psh);
        pk.label = p.label;
        out.push_back({std::move(pk), seq++});
    }

    if (finish) {
        // orderly close: FIN in each direction, nothing afterwards
        PacketRecord fin_fwd;
        fin_fwd.ts_us = last_ts + p.bwd_delay_us.draw(rng);
        fin_fwd.src_ip = src;
        fin_fwd.dst_ip = p.dst_ip;
        fin_fwd.src_port = src_port;
        fin_fwd.dst_port = p.dst_port;
        fin_fwd.proto = flow::kProtoTcp;
        fin_fwd.hdr_len = rng.pick(p.fwd_hdr_choices);
        fin_fwd.total_len = fin_fwd.hdr_len;
        fin_fwd.tcp_window = fwd_win;
        fin_fwd.set_flag(TcpFlag::fin);
        fin_fwd.set_flag(TcpFlag::ack);
        fin_fwd.label = p.label;

        PacketRecord fin_bwd;
        fin_bwd.ts_us = fin_fwd.ts_us + p.bwd_delay_us.draw(rng);
        fin_bwd.src_ip = p.dst_ip;
        fin_bwd.dst_ip = src;
        fin_bwd.src_port = p.dst_port;
        fin_bwd.dst_port = src_port;
        fin_bwd.proto = flow::kProtoTcp;
        fin_bwd.hdr_len = rng.pick(p.bwd_hdr_choices);
        fin_bwd.total_len = fin_bwd.hdr_len;
        fin_bwd.tcp_window = bwd_win;
        fin_bwd.set_flag(TcpFlag::fin);
        fin_bwd.set_flag(TcpFlag::ack);
        fin_bwd.label = p.label;

        out.push_back({std::move(fin_fwd), seq++});
        out.push_back({std::move(fin_bwd), seq++});
    }

    const std::int64_t start = p.start_offset_us.draw(rng);
    for (auto& tp : out) tp.pkt.ts_us += start;
    std::stable_sort(out.begin(), out.end(), [](const TimedPacket& a, const TimedPacket& b) {
        if (a.pkt.ts_us != b.pkt.ts_us) return a.pkt.ts_us < b.pkt.ts_us;
        return a.seq < b.seq;
    });
    return out;
}

}  // namespace

std::vector<PacketRecord> generate(const TrafficProfile& profile) {
    profile.validate();
    std::vector<std::pair<PacketRecord, std::pair<int, std::int64_t>>> all;
    for (int i = 0; i < profile.n_flows; ++i) {
        auto pkts = generate_flow(profile, i, Rng::substream(profile.seed, i));
        for (auto& tp : pkts)
            all.emplace_back(std::move(tp.pkt), std::make_pair(i, tp.seq));
    }
    std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
        if (a.first.ts_us != b.first.ts_us) return a.first.ts_us < b.first.ts_us;
        return a.second < b.second;
    });
    std::vector<PacketRecord> out;
    out.reserve(all.size());
    for (auto& [pkt, ord] : all) out.push_back(std::move(pkt));
    return out;
}

std::vector<PacketRecord> merge_streams(std::vector<std::vector<PacketRecord>> streams) {
    std::vector<std::pair<PacketRecord, std::pair<std::size_t, std::size_t>>> all;
    for (std::size_t s = 0; s < streams.size(); ++s)
        for (std::size_t i = 0; i < streams[s].size(); ++i)
            all.emplace_back(std::move(streams[s][i]), std::make_pair(s, i));
    std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
        if (a.first.ts_us != b.first.ts_us) return a.first.ts_us < b.first.ts_us;
        return a.second < b.second;
    });
    std::vector<PacketRecord> out;
    out.reserve(all.size());
    for (auto& [pkt, ord] : all) out.push_back(std::move(pkt));
    return out;
}

}  // namespace ddx::traffic
