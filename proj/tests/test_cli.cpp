// SPDX-License-Identifier: Apache-2.0
#include "silent_tracker/cli.hpp"
#include "silent_tracker/config_json.hpp"
#include "silent_tracker/engine.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

using namespace silent_tracker;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("st_cli_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

int run(const std::vector<std::string>& args, std::string* out_text = nullptr,
        std::string* err_text = nullptr) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    if (out_text)
        *out_text = out.str();
    if (err_text)
        *err_text = err.str();
    return code;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string write_walk_config(const TempDir& dir) {
    std::string path = dir.file("walk.json");
    std::ofstream(path) << config_to_json(default_config("walk"));
    return path;
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("simulate writes a report plus traces and is seed-deterministic") {
    TempDir dir;
    std::string cfg = write_walk_config(dir);

    std::string out1 = dir.file("a.json");
    std::string out2 = dir.file("b.json");
    CHECK(run({"simulate", "--config", cfg, "--seed", "7", "--out", out1}) == kExitOk);
    CHECK(run({"simulate", "--config", cfg, "--seed", "7", "--out", out2}) == kExitOk);
    CHECK(slurp(out1) == slurp(out2));
    CHECK(slurp(dir.file("a.trace.csv")) == slurp(dir.file("b.trace.csv")));
    CHECK(slurp(dir.file("a.actions.csv")) == slurp(dir.file("b.actions.csv")));
    CHECK(slurp(out1).find("\"outcome\"") != std::string::npos);
}

TEST_CASE("missing config file exits with the config code") {
    std::string err;
    CHECK(run({"simulate", "--config", "/nonexistent/cfg.json"}, nullptr, &err) ==
          kExitConfig);
    CHECK(err.find("config error") != std::string::npos);
}

TEST_CASE("sweep emits the plot csv with one row per cell") {
    TempDir dir;
    std::string cfg = write_walk_config(dir);
    std::string out = dir.file("sweep.json");
    CHECK(run({"sweep", "--config", cfg, "--scenarios", "walk", "--beamwidths",
               "20,60,omni", "--trials", "3", "--out", out}) == kExitOk);
    std::string csv = slurp(dir.file("sweep.csv"));
    int rows = 0;
    for (char c : csv)
        rows += c == '\n' ? 1 : 0;
    CHECK(rows == 4); // header + 3 codebooks
    CHECK(csv.find("walk,20deg,") != std::string::npos);
    CHECK(csv.find("walk,omni,") != std::string::npos);
}

TEST_CASE("sweep rejects zero trials") {
    TempDir dir;
    std::string cfg = write_walk_config(dir);
    CHECK(run({"sweep", "--config", cfg, "--scenarios", "walk", "--beamwidths", "20",
               "--trials", "0"}) == kExitConfig);
}

TEST_CASE("replay of an empty trace writes an empty action log") {
    TempDir dir;
    std::string trace = dir.file("empty.csv");
    std::ofstream(trace) << "t_ms,cell_id,tx_beam,rx_beam,rss_dbm\n";
    std::string out = dir.file("log.csv");
    CHECK(run({"replay", "--trace", trace, "--out", out}) == kExitOk);
    CHECK(slurp(out) == "t_ms,phase,action,cell_id,beam_id\n");
}

TEST_CASE("replay rejects corrupt traces with the config exit code") {
    TempDir dir;
    std::string trace = dir.file("bad.csv");
    std::ofstream(trace) << "t_ms,cell_id,tx_beam,rx_beam,rss_dbm\n0,0,x,9,-50\n";
    std::string err;
    CHECK(run({"replay", "--trace", trace}, nullptr, &err) == kExitConfig);
    CHECK(err.find(":2:") != std::string::npos); // line number in the message
}

TEST_CASE("validate-config accepts good configs and rejects bad ones") {
    TempDir dir;
    std::string cfg = write_walk_config(dir);
    CHECK(run({"validate-config", "--config", cfg}) == kExitOk);

    std::string bad = dir.file("bad.json");
    std::ofstream(bad) << R"({"cells": [], "mobile": {}, "duration_s": 1})";
    std::string err;
    CHECK(run({"validate-config", "--config", bad}, nullptr, &err) == kExitConfig);
    CHECK(err.find("cells") != std::string::npos);
}

} // TEST_SUITE
