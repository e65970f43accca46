#pragma once

#include <span>

#include "estq/records.hpp"

namespace estq {

// Arithmetic means over completed records; per-class means over their
// subsets (empty subset -> absent, never zero). Throws on an incomplete
// record.
Aggregates aggregate(std::span<const JobRecord> records);

// ratio of point estimates; throws when the baseline is zero
double normalize_against_baseline(double target_estimate, double baseline_estimate);

}  // namespace estq
