#pragma once

#include <memory>
#include <string>
#include <vector>

#include "shapebench/objective.hpp"

namespace shapebench {

/// Slot where a real simulation pipeline attaches: a resident child process
/// answering one JSON line per evaluation.
struct ExternalObjectiveConfig {
    std::vector<std::string> command;  // executable path + arguments
    double timeout_sec = 30.0;         // per-request response deadline
    bool restart_on_crash = true;      // one respawn per evaluation, then fail
    void validate() const;
};

/// Wire protocol (line-delimited, text, one pair per evaluation):
///   request:  {"x": [x1, ..., xn]}        components at full double precision
///   response: {"kwh": <non-negative number>}
///             {"error": "<message>"}      surfaced as ProtocolError
/// The child stays resident between evaluations; closing its standard input
/// signals shutdown.
class ExternalObjective final : public Objective {
public:
    explicit ExternalObjective(ExternalObjectiveConfig cfg);
    ~ExternalObjective() override;

private:
    Kwh do_evaluate(const ShapeVector& x) override;

    struct Child;
    void ensure_child();
    void shutdown_child() noexcept;

    ExternalObjectiveConfig cfg_;
    std::unique_ptr<Child> child_;
};

}  // namespace shapebench
