#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ddx/common.hpp"

namespace ddx::flow {

// TCP flag bits; JSONL letters are, in order, "FSRPAUCE".
enum class TcpFlag : std::uint8_t {
    fin = 1 << 0,
    syn = 1 << 1,
    rst = 1 << 2,
    psh = 1 << 3,
    ack = 1 << 4,
    urg = 1 << 5,
    cwr = 1 << 6,
    ece = 1 << 7,
};

inline constexpr std::uint8_t kProtoTcp = 6;
inline constexpr std::uint8_t kProtoUdp = 17;

/// One observed packet event.
struct PacketRecord {
    std::int64_t ts_us = 0;  // microseconds since epoch
    std::string src_ip;
    std::string dst_ip;
    std::uint16_t src_port = 0;
    std::uint16_t dst_port = 0;
    std::uint8_t proto = kProtoTcp;
    std::int64_t total_len = 0;
    std::int64_t hdr_len = 0;
    std::int64_t payload_len = 0;
    std::uint8_t tcp_flags = 0;  // bitmask of TcpFlag
    std::optional<std::int64_t> tcp_window;
    std::optional<std::string> label;  // ground-truth class, if known

    bool has_flag(TcpFlag f) const {
        return (tcp_flags & static_cast<std::uint8_t>(f)) != 0;
    }
    void set_flag(TcpFlag f) { tcp_flags |= static_cast<std::uint8_t>(f); }

    // Enforces field invariants; throws ValidationError.
    void validate() const;
};

std::uint8_t flags_from_letters(const std::string& letters);
std::string flags_to_letters(std::uint8_t flags);

/// Canonical bidirectional flow key: both directions of one conversation
/// map to the same key. Forward = direction of the first packet seen.
struct FlowKey {
    std::string ip_a, ip_b;
    std::uint16_t port_a = 0, port_b = 0;
    std::uint8_t proto = 0;
    bool first_packet_was_a = true;  // orientation: fwd endpoint is (ip_a,port_a)?

    static FlowKey of(const PacketRecord& p);
    bool same_conversation(const FlowKey& o) const;
    // true when p travels in the flow's forward direction
    bool is_forward(const PacketRecord& p) const;
    std::string id() const;
};

enum class Direction { fwd, bwd };

struct RawFlow {
    FlowKey key;
    std::vector<std::pair<PacketRecord, Direction>> packets;  // time-ordered
    std::optional<std::string> label;
};

struct FlowAssemblyConfig {
    std::int64_t idle_timeout_us = 120'000'000;
    std::int64_t active_timeout_us = 3'600'000'000;
    std::int64_t activity_gap_us = 1'000'000;
    int bulk_min_packets = 4;
    std::int64_t bulk_gap_us = 1'000'000;

    void validate() const;
};

struct FeatureDef {
    std::string name;
    std::string unit;
    std::string group;
};

/// Fixed, versioned, ordered feature schema.
class FeatureSchema {
public:
    FeatureSchema() = default;
    FeatureSchema(std::string version, std::vector<FeatureDef> features);

    const std::string& version() const { return version_; }
    std::size_t size() const { return features_.size(); }
    const FeatureDef& at(std::size_t i) const { return features_[i]; }
    const std::vector<FeatureDef>& features() const { return features_; }
    std::optional<std::size_t> find(const std::string& name) const;
    std::vector<std::string> names() const;
    std::string fingerprint() const;

    // schema restricted to a subset of columns, preserving order
    FeatureSchema subset(std::span<const std::size_t> keep) const;

private:
    std::string version_;
    std::vector<FeatureDef> features_;
    std::unordered_map<std::string, std::size_t> index_;
};

struct FeatureVector {
    std::vector<double> values;  // aligned to the schema
    std::optional<std::string> label;
};

/// The canonical flow feature schema (stable across calls).
const FeatureSchema& feature_schema();

/// Groups a time-sorted packet stream into bidirectional flows. A flow closes
/// on an idle gap, on exceeding the active timeout, or on TCP FIN in both
/// directions / RST in either; later packets with the same key open new flows.
std::vector<RawFlow> assemble_flows(std::span<const PacketRecord> packets,
                                    const FlowAssemblyConfig& cfg = {});

/// Computes every schema feature for one flow. Degenerate statistics
/// (empty sets, single packets) follow the all-zeros policy; never NaN.
FeatureVector compute_features(const RawFlow& f, const FlowAssemblyConfig& cfg = {});

// --- packet JSONL and flow CSV formats ---

std::vector<PacketRecord> parse_packets_jsonl(const std::string& text);
std::vector<PacketRecord> read_packets_jsonl(const std::string& path);
std::string packets_to_jsonl(std::span<const PacketRecord> packets);
void write_packets_jsonl(const std::string& path, std::span<const PacketRecord> packets);

std::string flows_to_csv(const FeatureSchema& schema, std::span<const FeatureVector> rows);
void write_flows_csv(const std::string& path, const FeatureSchema& schema,
                     std::span<const FeatureVector> rows);

}  // namespace ddx::flow
