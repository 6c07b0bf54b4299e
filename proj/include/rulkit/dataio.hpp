#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rulkit/linalg.hpp"

namespace rulkit {

/// Per-cycle health index of one battery: percentage charge capacity
/// relative to the rated capacity, with the fault threshold eta.
struct DegradationSeries {
    std::string battery_id;
    std::vector<int> cycles; // contiguous, starting at 1
    Vec hi;                  // percent of rated capacity
    Vec capacity_ah;         // raw values as loaded, kept for exact re-export
    double eta = 70.0;
    std::optional<int> failure_cycle; // first cycle with hi <= eta

    std::size_t size() const { return hi.size(); }
};

std::optional<int> find_failure_cycle(const std::vector<int>& cycles, const Vec& hi, double eta);

/// Loads a `cycle,capacity_ah` CSV (one row per discharge cycle) and converts
/// capacity to percentage of the rated value. Rows may arrive unsorted; they
/// are sorted by cycle and must then form the contiguous sequence 1..n.
DegradationSeries load_capacity(const std::filesystem::path& path, double rated_ah = 2.0,
                                double eta = 70.0);

/// Writes the series back in the same CSV schema at full float precision.
void save_capacity(const std::filesystem::path& path, const DegradationSeries& series,
                   double rated_ah = 2.0);

} // namespace rulkit
