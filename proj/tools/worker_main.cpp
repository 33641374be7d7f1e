// Reference worker for the line-delimited JSON evaluation protocol. Answers
// each {"x": [...]} request with the default synthetic landscape value, so an
// external-objective run reproduces the in-process one.
//
// Fault modes (first argument) exercise the adapter's error paths:
//   ok                normal operation (default)
//   oneshot           answer one request, then exit cleanly
//   exit              exit(1) immediately at startup
//   garbage           reply with a non-JSON line
//   error             reply {"error": ...}
//   negative          reply {"kwh": -5}
//   hang              read a request and never reply
//   quota FILE N      reply normally for the first N requests counted across
//                     all worker processes sharing FILE, then reply errors

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>

#include <json.hpp>

#include "shapebench/objective.hpp"

namespace {

bool quota_exhausted(const std::string& counter_path, long limit) {
    long used = 0;
    {
        std::ifstream in(counter_path);
        in >> used;
    }
    ++used;
    std::ofstream out(counter_path, std::ios::trunc);
    out << used;
    return used > limit;
}

nlohmann::json answer(const std::string& line) {
    try {
        const nlohmann::json request = nlohmann::json::parse(line);
        const std::vector<double> x = request.at("x").get<std::vector<double>>();
        shapebench::SyntheticParams params;
        params.target = shapebench::SyntheticParams::default_target(static_cast<int>(x.size()));
        return {{"kwh", shapebench::synthetic_value(params, shapebench::ShapeVector{x})}};
    } catch (const std::exception& e) {
        return {{"error", e.what()}};
    }
}

}  // namespace

int main(int argc, char** argv) {
    const std::string mode = argc > 1 ? argv[1] : "ok";
    if (mode == "exit") return 1;

    std::string counter_path;
    long quota_limit = 0;
    if (mode == "quota") {
        if (argc < 4) {
            std::cerr << "quota mode needs a counter file and a limit\n";
            return 2;
        }
        counter_path = argv[2];
        quota_limit = std::strtol(argv[3], nullptr, 10);
    }

    std::string line;
    while (std::getline(std::cin, line)) {
        if (mode == "hang") {
            std::this_thread::sleep_for(std::chrono::hours(1));
            return 0;
        }
        if (mode == "garbage") {
            std::cout << "not json" << std::endl;
            continue;
        }
        if (mode == "error") {
            std::cout << nlohmann::json{{"error", "simulated failure"}}.dump() << std::endl;
            continue;
        }
        if (mode == "negative") {
            std::cout << nlohmann::json{{"kwh", -5.0}}.dump() << std::endl;
            continue;
        }
        if (mode == "quota" && quota_exhausted(counter_path, quota_limit)) {
            std::cout << nlohmann::json{{"error", "simulation quota exhausted"}}.dump()
                      << std::endl;
            continue;
        }

        std::cout << answer(line).dump() << std::endl;
        if (mode == "oneshot") return 0;
    }
    return 0;
}
