#include "addrhash/errors.hpp"
#include "addrhash/hash_functions.hpp"
#include "addrhash/trace.hpp"

#include <doctest.h>

#include <map>
#include <random>
#include <set>
#include <sstream>

using namespace addrhash;

namespace {

Trace parse(const std::string& text) {
    std::istringstream in(text);
    return parse_trace(in);
}

}  // namespace

TEST_CASE("parse_trace accepts both separators and counts distinct") {
    const Trace t = parse("aa:aa:aa:aa:aa:aa\naa-aa-aa-aa-aa-aa\n");
    CHECK(t.frame_count() == 2);
    CHECK(t.distinct_count() == 1);
    CHECK(t.counts() == std::vector<std::uint64_t>{2});

    const Trace one = parse("01:02:03:04:05:06");
    CHECK(one.frame_count() == 1);
    CHECK(one.distinct_count() == 1);
}

TEST_CASE("parse_trace skips comments and blanks, tolerates CRLF") {
    const Trace t = parse("# header\r\n\r\n01:02:03:04:05:06\r\n   \n  # indented comment\n"
                          "01-02-03-04-05-07\r\n");
    CHECK(t.frame_count() == 2);
    CHECK(t.distinct_count() == 2);
}

TEST_CASE("parse_trace errors") {
    try {
        parse("zz:00:00:00:00:00\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
        CHECK(e.text() == "zz:00:00:00:00:00");
    }
    try {
        parse("# ok\n01:02:03:04:05:06\n\n01:02:03:04:05\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 4);
    }
    CHECK_THROWS_AS(parse(""), EmptyTraceError);
    CHECK_THROWS_AS(parse("# only comments\n\n"), EmptyTraceError);
    CHECK_THROWS_AS(read_trace_file("/nonexistent/trace.txt"), std::runtime_error);
}

TEST_CASE("distinct count matches a brute-force set on random traces") {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 50; ++t) {
        std::vector<Address> refs;
        const auto pool = 1 + rng() % 40;
        const auto len = 1 + rng() % 300;
        for (std::uint64_t i = 0; i < len; ++i) refs.push_back(Address::from_u64(rng() % pool));
        const std::set<Address> brute(refs.begin(), refs.end());
        const Trace trace(refs);
        REQUIRE(trace.distinct_count() == brute.size());
        REQUIRE(std::vector<Address>(brute.begin(), brute.end()) == trace.distinct());
        std::uint64_t total = 0;
        for (auto c : trace.counts()) total += c;
        REQUIRE(total == trace.frame_count());
    }
}

TEST_CASE("write then parse is the identity") {
    SynthConfig config;
    config.stations = 40;
    config.frames = 400;
    config.seed = 4;
    config.prefixes = {{0x00000C, 1}, {0xAA0004, 3}};
    const Trace trace = synthesize(config);
    std::ostringstream out;
    write_trace(out, trace);
    CHECK(parse(out.str()) == trace);
    CHECK(parse(out.str()).refs() == trace.refs());
}

TEST_CASE("synthesize basics") {
    SynthConfig config;
    config.stations = 1;
    config.frames = 5;
    const Trace one = synthesize(config);
    CHECK(one.frame_count() == 5);
    CHECK(one.distinct_count() == 1);

    config.stations = 300;
    config.frames = 3000;
    config.prefixes = {{0x08002B, 1}};
    const Trace t = synthesize(config);
    CHECK(t.frame_count() == 3000);
    CHECK(t.distinct_count() == 300);
    const auto prefix = bit_extract(t.distinct().front(), {0, 16}).bits;
    for (const Address& a : t.distinct()) {
        REQUIRE(bit_extract(a, {0, 16}).bits == prefix);
        REQUIRE(bit_extract(a, {16, 8}).bits == 0x2B);
    }
}

TEST_CASE("synthesize is deterministic in its seed") {
    SynthConfig config;
    config.stations = 200;
    config.frames = 5000;
    config.seed = 77;
    config.prefixes = {{0x00AA00, 2}, {0x080020, 1}, {0x00000C, 1}};
    std::ostringstream a, b;
    write_trace(a, synthesize(config));
    write_trace(b, synthesize(config));
    CHECK(a.str() == b.str());

    config.seed = 78;
    std::ostringstream c;
    write_trace(c, synthesize(config));
    CHECK(a.str() != c.str());
}

TEST_CASE("uniform skew gives near-uniform reference counts") {
    SynthConfig config;
    config.stations = 10;
    config.frames = 200000;
    config.skew = 0;
    const Trace t = synthesize(config);
    // Expected 20000 each, sd ~ 134; 6 sd bound.
    for (auto c : t.counts()) CHECK(std::abs(static_cast<double>(c) - 20000.0) < 800.0);
}

TEST_CASE("large skew concentrates references") {
    SynthConfig config;
    config.stations = 100;
    config.frames = 50000;
    config.skew = 2.0;
    const auto stats = trace_stats(synthesize(config));
    // Rank-1 share of a Zipf(2) law over 100 ranks is about 1/1.635 = 0.61.
    CHECK(stats.top1_share > 0.55);
    CHECK(stats.top1_share < 0.67);
    CHECK(stats.stations_for_half == 1);
}

TEST_CASE("serial runs place stations at nearby serial numbers") {
    SynthConfig config;
    config.stations = 400;
    config.frames = 400;
    auto close_pairs = [](const Trace& t) {
        int close = 0;
        for (std::size_t i = 1; i < t.distinct().size(); ++i)
            close += t.distinct()[i].to_u64() - t.distinct()[i - 1].to_u64() <= 3;
        return close;
    };
    config.serial_run = 1;
    CHECK(close_pairs(synthesize(config)) < 5);
    config.serial_run = 10;
    const Trace runs = synthesize(config);
    CHECK(runs.distinct_count() == 400);
    // about 9 in 10 stations continue a run
    CHECK(close_pairs(runs) > 300);
    config.serial_run = 0.5;
    CHECK_THROWS_AS(synthesize(config), std::invalid_argument);
}

TEST_CASE("synthesize validates its config") {
    SynthConfig config;
    config.stations = 0;
    CHECK_THROWS_AS(synthesize(config), std::invalid_argument);
    config.stations = 10;
    config.frames = 9;
    CHECK_THROWS_AS(synthesize(config), std::invalid_argument);
    config.frames = 10;
    config.skew = -1;
    CHECK_THROWS_AS(synthesize(config), std::invalid_argument);
    config.skew = 1;
    config.prefixes = {{0x000001, 0}};
    CHECK_THROWS_AS(synthesize(config), std::invalid_argument);

    config.prefixes = {{0x000001, 1}, {0x000001, 2}};
    config.stations = (std::uint64_t{1} << 24) + 1;
    config.frames = config.stations;
    CHECK_THROWS_AS(synthesize(config), CapacityError);
}

TEST_CASE("vendor prefix and config parsing") {
    const auto p = VendorPrefix::parse("08:00:2b@2.5");
    CHECK(p.oui == 0x08002B);
    CHECK(p.weight == 2.5);
    CHECK(VendorPrefix::parse("aa-bb-cc").weight == 1.0);
    CHECK_THROWS_AS(VendorPrefix::parse("aa:bb"), ParseError);
    CHECK_THROWS_AS(VendorPrefix::parse("aa:bb:cc@0"), ParseError);
    CHECK_THROWS_AS(VendorPrefix::parse("aa:bb:cc@x"), ParseError);

    std::istringstream in("# synthetic\nstations = 12\nframes=99\nskew = 0.5\nseed = 3 # trailing\n"
                          "prefix = 00:00:0c@1\nprefix = 08:00:20@3\nserial_run = 4\n");
    const auto c = parse_synth_config(in);
    CHECK(c.stations == 12);
    CHECK(c.frames == 99);
    CHECK(c.skew == 0.5);
    CHECK(c.seed == 3);
    CHECK(c.serial_run == 4);
    REQUIRE(c.prefixes.size() == 2);
    CHECK(c.prefixes[1].oui == 0x080020);
    CHECK(c.prefixes[1].weight == 3);

    std::istringstream bad("stations = 1\nbogus = 2\n");
    try {
        parse_synth_config(bad);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
    std::istringstream bad_value("frames = ten\n");
    CHECK_THROWS_AS(parse_synth_config(bad_value), ParseError);
}

TEST_CASE("trace_stats") {
    const Trace single(std::vector<Address>(7, Address::from_u64(42)));
    const auto s = trace_stats(single);
    CHECK(s.frames == 7);
    CHECK(s.distinct == 1);
    REQUIRE(s.top.size() == 1);
    CHECK(s.top[0].second == 7);
    CHECK(s.top1_share == 1.0);

    // counts 5, 3, 1, 1 over four addresses
    std::vector<Address> refs;
    for (int i = 0; i < 5; ++i) refs.push_back(Address::from_u64(4));
    for (int i = 0; i < 3; ++i) refs.push_back(Address::from_u64(9));
    refs.push_back(Address::from_u64(1));
    refs.push_back(Address::from_u64(2));
    const auto u = trace_stats(Trace(refs), 3);
    REQUIRE(u.top.size() == 3);
    CHECK(u.top[0].first == Address::from_u64(4));
    CHECK(u.top[1].first == Address::from_u64(9));
    CHECK(u.top[2].first == Address::from_u64(1));
    CHECK(u.top10_share == 1.0);
    CHECK(u.stations_for_half == 1);
    CHECK(u.stations_for_90 == 3);

    SynthConfig config;
    config.stations = 50;
    config.frames = 1000;
    const auto a = trace_stats(synthesize(config));
    const auto b = trace_stats(synthesize(config));
    CHECK(a.top == b.top);
    CHECK(a.top1_share == b.top1_share);
}
