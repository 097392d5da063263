#include "ddx/flow.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ddx::flow {

using nlohmann::json;

namespace {

constexpr const char* kFlagLetters = "FSRPAUCE";

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace

void PacketRecord::validate() const {
    if (proto != kProtoTcp && proto != kProtoUdp)
        throw ValidationError("packet proto must be 6 (TCP) or 17 (UDP), got " +
                              std::to_string(int(proto)));
    if (total_len < 0 || hdr_len < 0 || payload_len < 0)
        throw ValidationError("packet lengths must be non-negative");
    if (payload_len + hdr_len > total_len)
        throw ValidationError("packet payload_len + hdr_len exceeds total_len");
    if (proto != kProtoTcp && tcp_flags != 0)
        throw ValidationError("tcp_flags set on non-TCP packet");
    if (src_ip.empty() || dst_ip.empty())
        throw ValidationError("packet addresses must be non-empty");
}

std::uint8_t flags_from_letters(const std::string& letters) {
    std::uint8_t out = 0;
    for (char c : letters) {
        const char* p = std::strchr(kFlagLetters, c);
        if (p == nullptr || c == '\0')
            throw ValidationError(std::string("unknown TCP flag letter '") + c +
                                  "' (expected subset of FSRPAUCE)");
        out |= static_cast<std::uint8_t>(1u << (p - kFlagLetters));
    }
    return out;
}

std::string flags_to_letters(std::uint8_t flags) {
    std::string out;
    for (int i = 0; i < 8; ++i)
        if (flags & (1u << i)) out.push_back(kFlagLetters[i]);
    return out;
}

FlowKey FlowKey::of(const PacketRecord& p) {
    FlowKey k;
    k.proto = p.proto;
    const bool src_is_a = std::tie(p.src_ip, p.src_port) <= std::tie(p.dst_ip, p.dst_port);
    if (src_is_a) {
        k.ip_a = p.src_ip; k.port_a = p.src_port;
        k.ip_b = p.dst_ip; k.port_b = p.dst_port;
    } else {
        k.ip_a = p.dst_ip; k.port_a = p.dst_port;
        k.ip_b = p.src_ip; k.port_b = p.src_port;
    }
    k.first_packet_was_a = src_is_a;
    return k;
}

bool FlowKey::same_conversation(const FlowKey& o) const {
    return proto == o.proto && ip_a == o.ip_a && port_a == o.port_a &&
           ip_b == o.ip_b && port_b == o.port_b;
}

bool FlowKey::is_forward(const PacketRecord& p) const {
    if (first_packet_was_a) return p.src_ip == ip_a && p.src_port == port_a;
    return p.src_ip == ip_b && p.src_port == port_b;
}

std::string FlowKey::id() const {
    return ip_a + ":" + std::to_string(port_a) + "-" + ip_b + ":" +
           std::to_string(port_b) + "-" + std::to_string(int(proto));
}

void FlowAssemblyConfig::validate() const {
    if (idle_timeout_us <= 0 || active_timeout_us <= 0 || activity_gap_us <= 0 ||
        bulk_min_packets <= 0 || bulk_gap_us <= 0)
        throw ValidationError("flow assembly config values must be strictly positive");
    if (idle_timeout_us > active_timeout_us)
        throw ValidationError("idle_timeout_us must not exceed active_timeout_us");
}

FeatureSchema::FeatureSchema(std::string version, std::vector<FeatureDef> features)
    : version_(std::move(version)), features_(std::move(features)) {
    for (std::size_t i = 0; i < features_.size(); ++i) {
        auto [it, inserted] = index_.emplace(features_[i].name, i);
        if (!inserted)
            throw ValidationError("duplicate feature name in schema: " + features_[i].name);
    }
}

std::optional<std::size_t> FeatureSchema::find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::string> FeatureSchema::names() const {
    std::vector<std::string> out;
    out.reserve(features_.size());
    for (const auto& f : features_) out.push_back(f.name);
    return out;
}

std::string FeatureSchema::fingerprint() const {
    std::uint64_t h = hash_string(version_);
    for (const auto& f : features_) h = hash_combine(h, hash_string(f.name));
    return to_hex(h);
}

FeatureSchema FeatureSchema::subset(std::span<const std::size_t> keep) const {
    std::vector<FeatureDef> fs;
    fs.reserve(keep.size());
    for (std::size_t i : keep) fs.push_back(features_.at(i));
    return FeatureSchema(version_, std::move(fs));
}

const FeatureSchema& feature_schema() {
    // Statistic families are ordered mean, std, max, min with totals last,
    // matching the IAT and active/idle table conventions of the source data.
    static const FeatureSchema schema = [] {
        std::vector<FeatureDef> f;
        auto add = [&f](const char* name, const char* unit, const char* group) {
            f.push_back({name, unit, group});
        };
        add("flow_duration", "us", "duration");

        add("pkt_len_mean", "bytes", "length");
        add("pkt_len_std", "bytes", "length");
        add("pkt_len_var", "bytes^2", "length");
        add("pkt_len_max", "bytes", "length");
        add("pkt_len_min", "bytes", "length");
        add("fwd_pkt_cnt", "count", "length");
        add("fwd_non_empty_pkt_cnt", "count", "length");
        add("fwd_pkt_len_mean", "bytes", "length");
        add("fwd_pkt_len_std", "bytes", "length");
        add("fwd_pkt_len_max", "bytes", "length");
        add("fwd_pkt_len_min", "bytes", "length");
        add("fwd_pkt_len_tot", "bytes", "length");
        add("bwd_pkt_cnt", "count", "length");
        add("bwd_non_empty_pkt_cnt", "count", "length");
        add("bwd_pkt_len_mean", "bytes", "length");
        add("bwd_pkt_len_std", "bytes", "length");
        add("bwd_pkt_len_max", "bytes", "length");
        add("bwd_pkt_len_min", "bytes", "length");
        add("bwd_pkt_len_tot", "bytes", "length");

        add("bytes_per_s", "bytes/s", "throughput");
        add("pkt_per_s", "pkt/s", "throughput");
        add("fwd_pkt_per_s", "pkt/s", "throughput");
        add("bwd_pkt_per_s", "pkt/s", "throughput");

        add("iat_mean", "us", "iat");
        add("iat_std", "us", "iat");
        add("iat_max", "us", "iat");
        add("iat_min", "us", "iat");
        add("fwd_iat_tot", "us", "iat");
        add("fwd_iat_mean", "us", "iat");
        add("fwd_iat_std", "us", "iat");
        add("fwd_iat_max", "us", "iat");
        add("fwd_iat_min", "us", "iat");
        add("bwd_iat_tot", "us", "iat");
        add("bwd_iat_mean", "us", "iat");
        add("bwd_iat_std", "us", "iat");
        add("bwd_iat_max", "us", "iat");
        add("bwd_iat_min", "us", "iat");

        add("flag_fin", "count", "flags");
        add("flag_syn", "count", "flags");
        add("flag_rst", "count", "flags");
        add("flag_psh", "count", "flags");
        add("flag_ack", "count", "flags");
        add("flag_urg", "count", "flags");
        add("flag_cwr", "count", "flags");
        add("flag_ece", "count", "flags");
        add("fwd_flag_psh", "count", "flags");
        add("fwd_flag_urg", "count", "flags");
        add("bwd_flag_psh", "count", "flags");
        add("bwd_flag_urg", "count", "flags");

        add("fwd_pkt_hdr_len_tot", "bytes", "header");
        add("fwd_pkt_hdr_len_min", "bytes", "header");
        add("bwd_pkt_hdr_len_tot", "bytes", "header");
        add("bwd_pkt_hdr_len_min", "bytes", "header");

        add("fwd_bulk_bytes_mean", "bytes", "bulk");
        add("fwd_bulk_pkt_mean", "count", "bulk");
        add("fwd_bulk_rate_mean", "bytes/s", "bulk");
        add("bwd_bulk_bytes_mean", "bytes", "bulk");
        add("bwd_bulk_pkt_mean", "count", "bulk");
        add("bwd_bulk_rate_mean", "bytes/s", "bulk");

        add("fwd_subflow_bytes_mean", "bytes", "subflow");
        add("fwd_subflow_pkt_mean", "count", "subflow");
        add("bwd_subflow_bytes_mean", "bytes", "subflow");
        add("bwd_subflow_pkt_mean", "count", "subflow");

        add("fwd_tcp_init_win_bytes", "bytes", "window");
        add("bwd_tcp_init_win_bytes", "bytes", "window");

        add("active_mean", "us", "activity");
        add("active_max", "us", "activity");
        add("active_std", "us", "activity");
        add("active_min", "us", "activity");
        add("idle_mean", "us", "activity");
        add("idle_max", "us", "activity");
        add("idle_std", "us", "activity");
        add("idle_min", "us", "activity");

        add("down_up_ratio", "ratio", "ratio");

        return FeatureSchema("ddx-flow-features/1", std::move(f));
    }();
    return schema;
}

namespace {

struct OpenFlow {
    RawFlow flow;
    std::int64_t first_ts = 0;
    std::int64_t last_ts = 0;
    bool fin_fwd = false;
    bool fin_bwd = false;
    bool closed = false;  // FIN both directions or RST seen
};

}  // namespace

std::vector<RawFlow> assemble_flows(std::span<const PacketRecord> packets,
                                    const FlowAssemblyConfig& cfg) {
    cfg.validate();
    std::vector<OpenFlow> flows;                      // creation order
    std::unordered_map<std::string, std::size_t> open;  // conversation id -> index

    std::int64_t prev_ts = std::numeric_limits<std::int64_t>::min();
    for (std::size_t i = 0; i < packets.size(); ++i) {
        const PacketRecord& p = packets[i];
        p.validate();
        if (p.ts_us < prev_ts)
            throw ValidationError("packet stream not sorted by timestamp at index " +
                                  std::to_string(i));
        prev_ts = p.ts_us;

        FlowKey key = FlowKey::of(p);
        const std::string conv = key.id();
        auto it = open.find(conv);
        bool start_new = true;
        if (it != open.end()) {
            OpenFlow& of = flows[it->second];
            const bool expired = of.closed ||
                                 p.ts_us - of.last_ts > cfg.idle_timeout_us ||
                                 p.ts_us - of.first_ts > cfg.active_timeout_us;
            if (!expired) {
                start_new = false;
                Direction dir = of.flow.key.is_forward(p) ? Direction::fwd : Direction::bwd;
                of.flow.packets.emplace_back(p, dir);
                of.last_ts = p.ts_us;
                if (p.has_flag(TcpFlag::fin))
                    (dir == Direction::fwd ? of.fin_fwd : of.fin_bwd) = true;
                if (p.has_flag(TcpFlag::rst) || (of.fin_fwd && of.fin_bwd))
                    of.closed = true;
            }
        }
        if (start_new) {
            OpenFlow of;
            of.flow.key = key;
            of.flow.label = p.label;
            of.flow.packets.emplace_back(p, Direction::fwd);
            of.first_ts = of.last_ts = p.ts_us;
            if (p.has_flag(TcpFlag::fin)) of.fin_fwd = true;
            if (p.has_flag(TcpFlag::rst)) of.closed = true;
            flows.push_back(std::move(of));
            open[conv] = flows.size() - 1;
        }
    }

    std::vector<RawFlow> out;
    out.reserve(flows.size());
    for (auto& of : flows) out.push_back(std::move(of.flow));
    return out;
}

namespace {

struct BulkStats {
    double bytes_mean = 0, pkt_mean = 0, rate_mean = 0;
};

// A bulk is a run of >= bulk_min_packets same-direction packets, all with
// positive payload, separated by gaps <= bulk_gap_us.
BulkStats bulk_stats(const std::vector<std::int64_t>& ts,
                     const std::vector<std::int64_t>& payload,
                     const FlowAssemblyConfig& cfg) {
    std::vector<double> bytes, pkts, rates;
    std::size_t run_start = 0;
    std::size_t n = ts.size();
    auto flush = [&](std::size_t begin, std::size_t end) {  // [begin, end)
        const std::size_t count = end - begin;
        if (count < static_cast<std::size_t>(cfg.bulk_min_packets)) return;
        double b = 0;
        for (std::size_t j = begin; j < end; ++j) b += static_cast<double>(payload[j]);
        const std::int64_t dur = std::max<std::int64_t>(ts[end - 1] - ts[begin], 1);
        bytes.push_back(b);
        pkts.push_back(static_cast<double>(count));
        rates.push_back(b * 1e6 / static_cast<double>(dur));
    };
    std::size_t j = 0;
    while (j < n) {
        if (payload[j] <= 0) {
            flush(run_start, j);
            run_start = j + 1;
        } else if (j > run_start && ts[j] - ts[j - 1] > cfg.bulk_gap_us) {
            flush(run_start, j);
            run_start = j;
        }
        ++j;
    }
    flush(run_start, n);

    BulkStats s;
    s.bytes_mean = SummaryStats::of(bytes).mean;
    s.pkt_mean = SummaryStats::of(pkts).mean;
    s.rate_mean = SummaryStats::of(rates).mean;
    return s;
}

}  // namespace

FeatureVector compute_features(const RawFlow& f, const FlowAssemblyConfig& cfg) {
    cfg.validate();
    if (f.packets.empty()) throw ValidationError("flow has no packets");

    const FeatureSchema& schema = feature_schema();
    std::vector<double> v(schema.size(), std::numeric_limits<double>::quiet_NaN());
    auto set = [&](const char* name, double value) {
        auto idx = schema.find(name);
        if (!idx) throw std::logic_error(std::string("feature not in schema: ") + name);
        v[*idx] = value;
    };

    std::vector<double> all_len, fwd_len, bwd_len;
    std::vector<std::int64_t> all_ts, fwd_ts, bwd_ts;
    std::vector<std::int64_t> fwd_payload, bwd_payload;
    std::vector<double> fwd_hdr, bwd_hdr;
    std::int64_t fwd_non_empty = 0, bwd_non_empty = 0;
    double fwd_init_win = 0, bwd_init_win = 0;
    bool fwd_win_seen = false, bwd_win_seen = false;
    std::int64_t flag_counts[8] = {};
    std::int64_t fwd_psh = 0, fwd_urg = 0, bwd_psh = 0, bwd_urg = 0;

    for (const auto& [p, dir] : f.packets) {
        all_len.push_back(static_cast<double>(p.total_len));
        all_ts.push_back(p.ts_us);
        for (int b = 0; b < 8; ++b)
            if (p.tcp_flags & (1u << b)) ++flag_counts[b];
        const bool fwd = dir == Direction::fwd;
        auto& len = fwd ? fwd_len : bwd_len;
        auto& ts = fwd ? fwd_ts : bwd_ts;
        auto& hdr = fwd ? fwd_hdr : bwd_hdr;
        auto& payload = fwd ? fwd_payload : bwd_payload;
        len.push_back(static_cast<double>(p.total_len));
        ts.push_back(p.ts_us);
        hdr.push_back(static_cast<double>(p.hdr_len));
        payload.push_back(p.payload_len);
        if (p.payload_len > 0) ++(fwd ? fwd_non_empty : bwd_non_empty);
        if (p.proto == kProtoTcp && p.tcp_window && !(fwd ? fwd_win_seen : bwd_win_seen)) {
            (fwd ? fwd_init_win : bwd_init_win) = static_cast<double>(*p.tcp_window);
            (fwd ? fwd_win_seen : bwd_win_seen) = true;
        }
        if (p.has_flag(TcpFlag::psh)) ++(fwd ? fwd_psh : bwd_psh);
        if (p.has_flag(TcpFlag::urg)) ++(fwd ? fwd_urg : bwd_urg);
    }

    const std::int64_t dur_us = all_ts.back() - all_ts.front();
    const double dur_floor = static_cast<double>(std::max<std::int64_t>(dur_us, 1));
    set("flow_duration", static_cast<double>(dur_us));

    const SummaryStats all_s = SummaryStats::of(all_len);
    set("pkt_len_mean", all_s.mean);
    set("pkt_len_std", all_s.stdev);
    set("pkt_len_var", all_s.var);
    set("pkt_len_max", all_s.max);
    set("pkt_len_min", all_s.min);

    const SummaryStats fwd_s = SummaryStats::of(fwd_len);
    set("fwd_pkt_cnt", static_cast<double>(fwd_len.size()));
    set("fwd_non_empty_pkt_cnt", static_cast<double>(fwd_non_empty));
    set("fwd_pkt_len_mean", fwd_s.mean);
    set("fwd_pkt_len_std", fwd_s.stdev);
    set("fwd_pkt_len_max", fwd_s.max);
    set("fwd_pkt_len_min", fwd_s.min);
    set("fwd_pkt_len_tot", fwd_s.tot);

    const SummaryStats bwd_s = SummaryStats::of(bwd_len);
    set("bwd_pkt_cnt", static_cast<double>(bwd_len.size()));
    set("bwd_non_empty_pkt_cnt", static_cast<double>(bwd_non_empty));
    set("bwd_pkt_len_mean", bwd_s.mean);
    set("bwd_pkt_len_std", bwd_s.stdev);
    set("bwd_pkt_len_max", bwd_s.max);
    set("bwd_pkt_len_min", bwd_s.min);
    set("bwd_pkt_len_tot", bwd_s.tot);

    set("bytes_per_s", (fwd_s.tot + bwd_s.tot) * 1e6 / dur_floor);
    set("pkt_per_s", static_cast<double>(all_ts.size()) * 1e6 / dur_floor);
    set("fwd_pkt_per_s", static_cast<double>(fwd_ts.size()) * 1e6 / dur_floor);
    set("bwd_pkt_per_s", static_cast<double>(bwd_ts.size()) * 1e6 / dur_floor);

    auto iats = [](const std::vector<std::int64_t>& ts) {
        std::vector<double> d;
        for (std::size_t i = 1; i < ts.size(); ++i)
            d.push_back(static_cast<double>(ts[i] - ts[i - 1]));
        return d;
    };
    const SummaryStats iat_s = SummaryStats::of(iats(all_ts));
    set("iat_mean", iat_s.mean);
    set("iat_std", iat_s.stdev);
    set("iat_max", iat_s.max);
    set("iat_min", iat_s.min);
    const SummaryStats fwd_iat = SummaryStats::of(iats(fwd_ts));
    set("fwd_iat_tot", fwd_iat.tot);
    set("fwd_iat_mean", fwd_iat.mean);
    set("fwd_iat_std", fwd_iat.stdev);
    set("fwd_iat_max", fwd_iat.max);
    set("fwd_iat_min", fwd_iat.min);
    const SummaryStats bwd_iat = SummaryStats::of(iats(bwd_ts));
    set("bwd_iat_tot", bwd_iat.tot);
    set("bwd_iat_mean", bwd_iat.mean);
    set("bwd_iat_std", bwd_iat.stdev);
    set("bwd_iat_max", bwd_iat.max);
    set("bwd_iat_min", bwd_iat.min);

    static const char* flag_names[8] = {"flag_fin", "flag_syn", "flag_rst", "flag_psh",
                                        "flag_ack", "flag_urg", "flag_cwr", "flag_ece"};
    for (int b = 0; b < 8; ++b) set(flag_names[b], static_cast<double>(flag_counts[b]));
    set("fwd_flag_psh", static_cast<double>(fwd_psh));
    set("fwd_flag_urg", static_cast<double>(fwd_urg));
    set("bwd_flag_psh", static_cast<double>(bwd_psh));
    set("bwd_flag_urg", static_cast<double>(bwd_urg));

    const SummaryStats fwd_hdr_s = SummaryStats::of(fwd_hdr);
    const SummaryStats bwd_hdr_s = SummaryStats::of(bwd_hdr);
    set("fwd_pkt_hdr_len_tot", fwd_hdr_s.tot);
    set("fwd_pkt_hdr_len_min", fwd_hdr_s.min);
    set("bwd_pkt_hdr_len_tot", bwd_hdr_s.tot);
    set("bwd_pkt_hdr_len_min", bwd_hdr_s.min);

    const BulkStats fwd_bulk = bulk_stats(fwd_ts, fwd_payload, cfg);
    const BulkStats bwd_bulk = bulk_stats(bwd_ts, bwd_payload, cfg);
    set("fwd_bulk_bytes_mean", fwd_bulk.bytes_mean);
    set("fwd_bulk_pkt_mean", fwd_bulk.pkt_mean);
    set("fwd_bulk_rate_mean", fwd_bulk.rate_mean);
    set("bwd_bulk_bytes_mean", bwd_bulk.bytes_mean);
    set("bwd_bulk_pkt_mean", bwd_bulk.pkt_mean);
    set("bwd_bulk_rate_mean", bwd_bulk.rate_mean);

    // Subflow and active/idle segmentation both cut the flow at inter-packet
    // gaps larger than activity_gap_us.
    std::vector<double> active, idle;
    std::size_t n_sub = 1;
    std::size_t seg_start = 0;
    for (std::size_t i = 1; i <= all_ts.size(); ++i) {
        const bool end_of_flow = i == all_ts.size();
        if (end_of_flow || all_ts[i] - all_ts[i - 1] > cfg.activity_gap_us) {
            active.push_back(static_cast<double>(all_ts[i - 1] - all_ts[seg_start]));
            if (!end_of_flow) {
                idle.push_back(static_cast<double>(all_ts[i] - all_ts[i - 1]));
                ++n_sub;
                seg_start = i;
            }
        }
    }
    const double n_sub_d = static_cast<double>(n_sub);
    set("fwd_subflow_bytes_mean", fwd_s.tot / n_sub_d);
    set("fwd_subflow_pkt_mean", static_cast<double>(fwd_len.size()) / n_sub_d);
    set("bwd_subflow_bytes_mean", bwd_s.tot / n_sub_d);
    set("bwd_subflow_pkt_mean", static_cast<double>(bwd_len.size()) / n_sub_d);

    set("fwd_tcp_init_win_bytes", fwd_init_win);
    set("bwd_tcp_init_win_bytes", bwd_init_win);

    const SummaryStats active_s = SummaryStats::of(active);
    set("active_mean", active_s.mean);
    set("active_max", active_s.max);
    set("active_std", active_s.stdev);
    set("active_min", active_s.min);
    const SummaryStats idle_s = SummaryStats::of(idle);
    set("idle_mean", idle_s.mean);
    set("idle_max", idle_s.max);
    set("idle_std", idle_s.stdev);
    set("idle_min", idle_s.min);

    set("down_up_ratio", fwd_len.empty() ? 0.0
                                         : static_cast<double>(bwd_len.size()) /
                                               static_cast<double>(fwd_len.size()));

    for (std::size_t i = 0; i < v.size(); ++i)
        if (std::isnan(v[i]))
            throw std::logic_error("feature left unset: " + schema.at(i).name);

    FeatureVector fv;
    fv.values = std::move(v);
    fv.label = f.label;
    return fv;
}

// --- JSONL / CSV ---

std::vector<PacketRecord> parse_packets_jsonl(const std::string& text) {
    std::vector<PacketRecord> out;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw ValidationError("packet JSONL line " + std::to_string(lineno) +
                                  ": " + e.what());
        }
        try {
            PacketRecord p;
            p.ts_us = std::llround(j.at("ts").get<double>() * 1e6);
            p.src_ip = j.at("src_ip").get<std::string>();
            p.dst_ip = j.at("dst_ip").get<std::string>();
            p.src_port = j.at("src_port").get<std::uint16_t>();
            p.dst_port = j.at("dst_port").get<std::uint16_t>();
            p.proto = j.at("proto").get<std::uint8_t>();
            p.total_len = j.at("len").get<std::int64_t>();
            p.hdr_len = j.at("hdr_len").get<std::int64_t>();
            p.payload_len = j.at("payload_len").get<std::int64_t>();
            if (j.contains("flags")) p.tcp_flags = flags_from_letters(j["flags"].get<std::string>());
            if (j.contains("win") && !j["win"].is_null())
                p.tcp_window = j["win"].get<std::int64_t>();
            if (j.contains("label") && !j["label"].is_null())
                p.label = j["label"].get<std::string>();
            p.validate();
            out.push_back(std::move(p));
        } catch (const json::exception& e) {
            throw ValidationError("packet JSONL line " + std::to_string(lineno) +
                                  ": " + e.what());
        } catch (const ValidationError& e) {
            throw ValidationError("packet JSONL line " + std::to_string(lineno) +
                                  ": " + e.what());
        }
    }
    return out;
}

std::vector<PacketRecord> read_packets_jsonl(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open packet file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_packets_jsonl(ss.str());
}

std::string packets_to_jsonl(std::span<const PacketRecord> packets) {
    std::string out;
    for (const PacketRecord& p : packets) {
        json j;
        j["ts"] = static_cast<double>(p.ts_us) / 1e6;
        j["src_ip"] = p.src_ip;
        j["dst_ip"] = p.dst_ip;
        j["src_port"] = p.src_port;
        j["dst_port"] = p.dst_port;
        j["proto"] = p.proto;
        j["len"] = p.total_len;
        j["hdr_len"] = p.hdr_len;
        j["payload_len"] = p.payload_len;
        j["flags"] = flags_to_letters(p.tcp_flags);
        if (p.tcp_window) j["win"] = *p.tcp_window;
        if (p.label) j["label"] = *p.label;
        out += j.dump();
        out += '\n';
    }
    return out;
}

void write_packets_jsonl(const std::string& path, std::span<const PacketRecord> packets) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write packet file: " + path);
    out << packets_to_jsonl(packets);
}

std::string flows_to_csv(const FeatureSchema& schema, std::span<const FeatureVector> rows) {
    std::string out;
    bool first = true;
    for (const auto& f : schema.features()) {
        if (!first) out += ',';
        out += f.name;
        first = false;
    }
    out += ",label\n";
    for (const FeatureVector& r : rows) {
        if (r.values.size() != schema.size())
            throw ValidationError("feature vector length does not match schema");
        for (std::size_t i = 0; i < r.values.size(); ++i) {
            if (i) out += ',';
            out += format_double(r.values[i]);
        }
        out += ',';
        if (r.label) {
            if (r.label->find_first_of(",\n\r") != std::string::npos)
                throw ValidationError("flow label may not contain commas or newlines");
            out += *r.label;
        }
        out += '\n';
    }
    return out;
}

void write_flows_csv(const std::string& path, const FeatureSchema& schema,
                     std::span<const FeatureVector> rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write flow CSV: " + path);
    out << flows_to_csv(schema, rows);
}

}  // namespace ddx::flow
