#include "addrhash/cli.hpp"
#include "addrhash/trace.hpp"

#include <doctest.h>

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using addrhash::cli::run;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args, const std::string& input = {}) {
    std::istringstream in(input);
    std::ostringstream out, err;
    const int code = run(args, in, out, err);
    return {code, out.str(), err.str()};
}

class TempDir {
public:
    TempDir() : path_(fs::temp_directory_path() / ("addrhash_cli_" + std::to_string(::getpid()))) {
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    fs::path path_;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t count_lines(const std::string& s) {
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST_CASE("schemes lists names and widths") {
    const auto r = invoke({"schemes"});
    CHECK(r.code == 0);
    CHECK(r.out.find("crc32 32\n") != std::string::npos);
    CHECK(r.out.find("bits 48\n") != std::string::npos);
    CHECK(r.out.find("xor 8\n") != std::string::npos);
}

TEST_CASE("usage errors exit 1") {
    CHECK(invoke({}).code == 1);
    CHECK(invoke({"frobnicate"}).code == 1);
    const auto r = invoke({"schemes", "--bogus"});
    CHECK(r.code == 1);
    CHECK(r.err.find("--bogus") != std::string::npos);
    CHECK(invoke({"info", "--trace", "-", "--scheme", "xor"}).code == 1);
    CHECK(invoke({"info", "--trace", "-", "--scheme", "nope", "--window", "0:8"}, "01:02:03:04:05:06\n").code == 1);
    CHECK(invoke({"info", "--trace", "-", "--scheme", "xor", "--window", "0-8"}, "01:02:03:04:05:06\n").code == 1);
    CHECK(invoke({"info", "--trace", "-", "--scheme", "xor", "--window", "4:8"}, "01:02:03:04:05:06\n").code == 1);
    CHECK(invoke({"mask", "--analytic", "--approx"}).code == 1);
    CHECK(invoke({"synth", "--stations", "10", "--frames", "5"}).code == 1);
    CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("data errors exit 2 with context") {
    TempDir dir;
    const auto empty = dir.file("empty.txt");
    std::ofstream(empty) << "# nothing here\n";
    const auto r = invoke({"info", "--scheme", "xor", "--window", "0:8", "--trace", empty});
    CHECK(r.code == 2);
    CHECK(r.err.find("empty trace") != std::string::npos);

    const auto bad = dir.file("bad.txt");
    std::ofstream(bad) << "01:02:03:04:05:06\nnot an address\n";
    const auto b = invoke({"stats", "--trace", bad});
    CHECK(b.code == 2);
    CHECK(b.err.find("bad.txt") != std::string::npos);
    CHECK(b.err.find("line 2") != std::string::npos);

    CHECK(invoke({"stats", "--trace", dir.file("missing.txt")}).code == 2);
    CHECK(invoke({"mask", "--target", "1.0", "--k", "10"}).code == 2);
}

TEST_CASE("synth, stats, info, lookup round trip") {
    TempDir dir;
    const auto trace = dir.file("t.txt");
    auto r = invoke({"synth", "--stations", "50", "--frames", "2000", "--seed", "3", "--prefix",
                     "08:00:2b@2", "--prefix", "00:00:0c", "--out", trace});
    REQUIRE(r.code == 0);
    const std::string first = slurp(trace);
    CHECK(count_lines(first) == 2000);

    r = invoke({"synth", "--stations", "50", "--frames", "2000", "--seed", "3", "--prefix",
                "08:00:2b@2", "--prefix", "00:00:0c"});
    CHECK(r.out == first);

    r = invoke({"stats", "--trace", trace});
    CHECK(r.code == 0);
    CHECK(r.out.find("frames: 2000\n") != std::string::npos);
    CHECK(r.out.find("distinct: 50\n") != std::string::npos);

    r = invoke({"info", "--trace", trace, "--scheme", "crc32", "--window", "0:4"});
    CHECK(r.code == 0);
    CHECK(r.out.find("info_bits: ") != std::string::npos);
    CHECK(r.out.find("cells: 16\n") != std::string::npos);

    r = invoke({"lookup", "--trace", "-", "--scheme", "xor", "--window", "0:8"}, first);
    CHECK(r.code == 0);
    CHECK(r.out.find("saved_per_frame: ") != std::string::npos);
}

TEST_CASE("synth reads a config file and flags override it") {
    TempDir dir;
    const auto cfg = dir.file("synth.conf");
    std::ofstream(cfg) << "stations = 20\nframes = 100\nskew = 0.5\nseed = 8\nprefix = aa:00:04@1\n";
    auto r = invoke({"synth", "--config", cfg});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    const auto t = addrhash::parse_trace(in);
    CHECK(t.frame_count() == 100);
    CHECK(t.distinct_count() == 20);
    CHECK(t.refs().front().octet(1) == 0xAA);

    r = invoke({"synth", "--config", cfg, "--frames", "300"});
    REQUIRE(r.code == 0);
    CHECK(count_lines(r.out) == 300);

    std::ofstream(cfg) << "stations = many\n";
    CHECK(invoke({"synth", "--config", cfg}).code == 2);
}

TEST_CASE("sweep writes the CSV for m = 1..8 over i = 0..31") {
    TempDir dir;
    const auto trace = dir.file("t.txt");
    REQUIRE(invoke({"synth", "--stations", "100", "--frames", "1000", "--out", trace}).code == 0);
    const auto csv = dir.file("sweep.csv");
    const auto svg = dir.file("sweep.svg");
    auto r = invoke({"sweep", "--scheme", "crc32", "--trace", trace, "--m", "1..8", "--out", csv,
                     "--svg", svg});
    REQUIRE(r.code == 0);
    const auto text = slurp(csv);
    CHECK(text.rfind("scheme,start_bit,window_len,info_bits\n", 0) == 0);
    CHECK(count_lines(text) == 1 + 32 + 31 + 30 + 29 + 28 + 27 + 26 + 25);
    CHECK(text.find("crc32,0,1,") != std::string::npos);
    CHECK(text.find("crc32,31,1,") != std::string::npos);
    CHECK(text.find("crc32,24,8,") != std::string::npos);
    CHECK(slurp(svg).find("</svg>") != std::string::npos);

    r = invoke({"sweep", "--scheme", "crc32", "--trace", trace, "--m", "1..8"});
    CHECK(r.out == text);

    CHECK(invoke({"sweep", "--scheme", "xor", "--trace", trace, "--m", "8", "--i", "3..7"}).code == 2);
    CHECK(invoke({"sweep", "--scheme", "xor", "--trace", trace, "--m", "x"}).code == 1);
}

TEST_CASE("mask verbs") {
    auto r = invoke({"mask", "--analytic", "--k", "10", "--M", "8"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("0.263", 0) == 0);

    r = invoke({"mask", "--approx", "--k", "10", "--M", "512"});
    CHECK(r.out == "0.980469\n");

    r = invoke({"mask", "--target", "0.8", "--k", "10"});
    CHECK(r.code == 0);
    CHECK(r.out.find("M: 64\n") != std::string::npos);
    CHECK(r.out.find("linear_M: 50\n") != std::string::npos);

    r = invoke({"mask", "--empirical", "--k", "10", "--M", "8", "--trials", "2000", "--seed", "4"});
    CHECK(r.code == 0);
    CHECK(r.out.find("+/-") != std::string::npos);

    r = invoke({"mask", "--k", "1..4"});
    CHECK(r.code == 0);
    CHECK(count_lines(r.out) == 1 + 8 * 4);
    CHECK(r.out.find("analytic,512,4,") != std::string::npos);

    TempDir dir;
    const auto wanted = dir.file("wanted.txt");
    std::ofstream(wanted) << "00:00:00:00:00:00\n80:00:00:00:00:00\n";
    r = invoke({"mask", "--wanted", wanted, "--scheme", "bits", "--window", "0:3"});
    CHECK(r.code == 0);
    CHECK(r.out.find("mask: 88\n") != std::string::npos);
    CHECK(r.out.find("set_bits: 2\n") != std::string::npos);
}
