#pragma once

#include "dayahead/core.hpp"

#include <istream>
#include <string>

namespace dayahead::cli {

/**
 * Metric CSV: a header `timestamp,<dim_1>,...,<dim_p>` followed by one row
 * per sampling instant. Timestamps are ISO-8601 (`YYYY-MM-DDTHH:MM:SS`,
 * optional `Z` or `+HH:MM` offset). Every cell must be present; the sampling
 * interval must be constant to within 1%.
 */
core::MultiSeries read_csv(std::istream& in, const std::string& source = "<stream>");
core::MultiSeries ingest_csv(const std::string& path);

/// Values are written with 12 significant digits.
void write_csv(std::ostream& out, const core::MultiSeries& series);
void write_csv_file(const std::string& path, const core::MultiSeries& series);

core::Timestamp parse_timestamp(const std::string& text);
std::string format_timestamp(core::Timestamp ts);

/// Interval used when a series carries no timestamps (five minutes).
inline constexpr core::Timestamp kDefaultStepSeconds = 300;

} // namespace dayahead::cli
