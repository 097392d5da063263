#include <doctest.h>

#include <cmath>

#include "ddx/dataset.hpp"
#include "ddx/flow.hpp"
#include "ddx/trafficgen.hpp"

using namespace ddx;
using namespace ddx::traffic;

TEST_CASE("generate: same profile and seed give byte-identical streams") {
    auto p = TrafficProfile::benign(40, 1234);
    const auto a = generate(p);
    const auto b = generate(p);
    REQUIRE(a.size() == b.size());
    CHECK(flow::packets_to_jsonl(a) == flow::packets_to_jsonl(b));

    auto q = TrafficProfile::benign(40, 1235);
    CHECK(flow::packets_to_jsonl(generate(q)) != flow::packets_to_jsonl(a));
}

TEST_CASE("generate: earlier flows unchanged when the flow count grows") {
    auto small = TrafficProfile::dos_slowloris_like(10, 42);
    auto large = TrafficProfile::dos_slowloris_like(25, 42);
    const auto fa = flow::assemble_flows(generate(small));
    const auto fb = flow::assemble_flows(generate(large));
    REQUIRE(fb.size() == 25);
    // match flows by conversation id; the shared prefix must be identical
    for (const auto& f : fa) {
        bool found = false;
        for (const auto& g : fb) {
            if (g.key.id() != f.key.id()) continue;
            found = true;
            REQUIRE(g.packets.size() == f.packets.size());
            for (std::size_t i = 0; i < f.packets.size(); ++i) {
                CHECK(g.packets[i].first.ts_us == f.packets[i].first.ts_us);
                CHECK(g.packets[i].first.total_len == f.packets[i].first.total_len);
            }
        }
        CHECK(found);
    }
}

TEST_CASE("generate: output assembles cleanly with full label coverage") {
    auto benign = TrafficProfile::benign(120, 7);
    auto dos = TrafficProfile::dos_slowloris_like(120, 8);
    std::vector<std::vector<flow::PacketRecord>> streams;
    streams.push_back(generate(benign));
    streams.push_back(generate(dos));
    const auto packets = merge_streams(std::move(streams));
    const auto flows = flow::assemble_flows(packets);  // throws on invalid input
    CHECK(flows.size() == 240);
    std::size_t labeled_benign = 0, labeled_dos = 0;
    for (const auto& f : flows) {
        REQUIRE(f.label.has_value());
        if (*f.label == "benign") ++labeled_benign;
        if (*f.label == "dos") ++labeled_dos;
    }
    CHECK(labeled_benign == 120);
    CHECK(labeled_dos == 120);
}

TEST_CASE("generate: dos responses are uniform and small, benign wide") {
    auto benign = TrafficProfile::benign(500, 7);
    auto dos = TrafficProfile::dos_slowloris_like(500, 8);
    auto collect = [](const TrafficProfile& p) {
        std::vector<double> means;
        for (const auto& f : flow::assemble_flows(generate(p))) {
            auto fv = flow::compute_features(f);
            means.push_back(fv.values[*flow::feature_schema().find("bwd_pkt_len_mean")]);
        }
        return SummaryStats::of(means);
    };
    const auto b = collect(benign);
    const auto d = collect(dos);
    CHECK(d.stdev < b.stdev);
    CHECK(d.mean < b.mean);
}

TEST_CASE("generate: dos forward header length is the configured constant") {
    auto dos = TrafficProfile::dos_slowloris_like(60, 99);
    const auto& schema = flow::feature_schema();
    for (const auto& f : flow::assemble_flows(generate(dos))) {
        auto fv = flow::compute_features(f);
        CHECK(fv.values[*schema.find("fwd_pkt_hdr_len_min")] ==
              static_cast<double>(dos.fwd_hdr_choices[0]));
    }
}

TEST_CASE("generate: invalid profile parameters are rejected") {
    auto p = TrafficProfile::benign(10, 1);
    p.fwd_iat.normal_us = {0, 0};
    CHECK_THROWS_AS(generate(p), ValidationError);
    auto q = TrafficProfile::benign(0, 1);
    CHECK_THROWS_AS(generate(q), ValidationError);
}
