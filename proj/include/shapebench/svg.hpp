#pragma once

#include <string>
#include <vector>

#include "shapebench/metrics.hpp"

namespace shapebench {

struct BoxplotSeries {
    std::string label;
    BoxplotStats stats;
};

/// Minimal static boxplot: per series a q1-q3 box with a median line and
/// whiskers (with caps) out to min/max, plus a value axis. Pure function of
/// its arguments, so emitted markup is byte-stable.
std::string boxplot_svg(const std::string& title, const std::string& value_label,
                        const std::vector<BoxplotSeries>& series);

}  // namespace shapebench
