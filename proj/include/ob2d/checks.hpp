#pragma once

#include <functional>
#include <string>
#include <vector>

namespace ob2d {

enum class CheckLevel { quick, full };

struct CheckOutcome {
    std::string id;     // "AC1" ... "AC11"
    std::string title;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

using CheckCallback = std::function<void(const CheckOutcome&)>;

/// Runs the acceptance suite in order, AC1 to AC11. Full level uses the
/// reference sizes; quick level shrinks grids, horizons and sample counts but
/// keeps every tolerance. The callback sees each outcome as soon as it is known.
std::vector<CheckOutcome> run_acceptance(CheckLevel level, const CheckCallback& on_result = {});

/// One line per outcome: "PASS AC1 <title>: <detail> (<seconds> s)".
std::string format_outcome(const CheckOutcome& outcome);

} // namespace ob2d
