#include "dayahead/cli/csv.hpp"

#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace dayahead::cli {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        fields.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        fields.emplace_back();
    }
    return fields;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

} // namespace

core::Timestamp parse_timestamp(const std::string& text) {
    int y = 0, mo = 0, d = 0, hh = 0, mm = 0, ss = 0;
    char sep = 0;
    int consumed = 0;
    if (std::sscanf(text.c_str(), "%4d-%2d-%2d%c%2d:%2d:%2d%n", &y, &mo, &d, &sep, &hh, &mm, &ss,
                    &consumed) != 7 ||
        (sep != 'T' && sep != ' ')) {
        throw DataError("invalid ISO-8601 timestamp '" + text + "'");
    }
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(mo)},
                                          std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || hh > 23 || mm > 59 || ss > 60) {
        throw DataError("invalid calendar date in timestamp '" + text + "'");
    }
    std::string rest = text.substr(static_cast<std::size_t>(consumed));
    // Fractional seconds are accepted but ignored.
    if (!rest.empty() && rest.front() == '.') {
        std::size_t i = 1;
        while (i < rest.size() && std::isdigit(static_cast<unsigned char>(rest[i]))) {
            ++i;
        }
        rest = rest.substr(i);
    }
    long offset = 0;
    if (rest == "Z" || rest.empty()) {
        offset = 0;
    } else if ((rest.front() == '+' || rest.front() == '-') && rest.size() == 6 && rest[3] == ':') {
        const int oh = std::atoi(rest.substr(1, 2).c_str());
        const int om = std::atoi(rest.substr(4, 2).c_str());
        offset = (rest.front() == '+' ? 1 : -1) * (oh * 3600L + om * 60L);
    } else {
        throw DataError("invalid timezone suffix in timestamp '" + text + "'");
    }
    const auto days = std::chrono::sys_days{ymd}.time_since_epoch().count();
    return static_cast<core::Timestamp>(days) * 86400 + hh * 3600 + mm * 60 + ss - offset;
}

std::string format_timestamp(core::Timestamp ts) {
    const auto day_count = static_cast<long>(std::floor(static_cast<double>(ts) / 86400.0));
    const core::Timestamp secs = ts - static_cast<core::Timestamp>(day_count) * 86400;
    const std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{day_count}}};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(secs / 3600), static_cast<int>((secs % 3600) / 60),
                  static_cast<int>(secs % 60));
    return buf;
}

core::MultiSeries read_csv(std::istream& in, const std::string& source) {
    std::string line;
    if (!std::getline(in, line)) {
        throw DataError(source + ": empty file");
    }
    auto header = split_fields(line);
    for (auto& h : header) {
        h = trim(h);
    }
    if (header.size() < 2 || header.front() != "timestamp") {
        throw DataError(source + ": header must be 'timestamp,<dim_1>,...,<dim_p>'");
    }
    const std::vector<std::string> names(header.begin() + 1, header.end());
    const std::size_t p = names.size();

    std::vector<double> values;
    std::vector<core::Timestamp> stamps;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto fields = split_fields(line);
        if (fields.size() > p + 1) {
            throw DataError(source + ": line " + std::to_string(line_no) + " has " +
                            std::to_string(fields.size()) + " cells, expected " + std::to_string(p + 1));
        }
        for (std::size_t c = 0; c <= p; ++c) {
            const std::string cell = c < fields.size() ? trim(fields[c]) : std::string{};
            if (cell.empty()) {
                throw DataError(source + ": missing value at line " + std::to_string(line_no) +
                                ", column '" + header[c] + "'");
            }
            if (c == 0) {
                try {
                    stamps.push_back(parse_timestamp(cell));
                } catch (const DataError& e) {
                    throw DataError(source + ": line " + std::to_string(line_no) + ": " + e.what());
                }
                continue;
            }
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str() || *end != '\0' || !std::isfinite(v)) {
                throw DataError(source + ": non-numeric value '" + cell + "' at line " +
                                std::to_string(line_no) + ", column '" + header[c] + "'");
            }
            values.push_back(v);
        }
    }
    const std::size_t n = stamps.size();
    if (n == 0) {
        throw DataError(source + ": no data rows");
    }
    for (std::size_t t = 1; t < n; ++t) {
        if (stamps[t] <= stamps[t - 1]) {
            throw DataError(source + ": timestamps are not strictly increasing at data row " +
                            std::to_string(t + 1) + " (" + format_timestamp(stamps[t]) + ")");
        }
    }
    if (n > 2) {
        const double step = static_cast<double>(stamps[1] - stamps[0]);
        for (std::size_t t = 2; t < n; ++t) {
            const double dt = static_cast<double>(stamps[t] - stamps[t - 1]);
            if (std::abs(dt - step) > 0.01 * step) {
                throw DataError(source + ": irregular sampling interval at data row " +
                                std::to_string(t + 1) + " (" + std::to_string(stamps[t] - stamps[t - 1]) +
                                " s, expected " + std::to_string(stamps[1] - stamps[0]) + " s)");
            }
        }
    }
    return core::MultiSeries(n, p, std::move(values), names, std::move(stamps));
}

core::MultiSeries ingest_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open input file " + path);
    }
    return read_csv(in, path);
}

void write_csv(std::ostream& out, const core::MultiSeries& series) {
    out << "timestamp";
    for (const auto& name : series.dim_names()) {
        out << ',' << name;
    }
    out << '\n';
    char buf[40];
    for (std::size_t t = 0; t < series.n(); ++t) {
        const core::Timestamp ts = series.has_timestamps()
                                       ? series.timestamps()[t]
                                       : static_cast<core::Timestamp>(t) * kDefaultStepSeconds;
        out << format_timestamp(ts);
        for (std::size_t j = 0; j < series.p(); ++j) {
            std::snprintf(buf, sizeof buf, "%.12g", series.at(t, j));
            out << ',' << buf;
        }
        out << '\n';
    }
}

void write_csv_file(const std::string& path, const core::MultiSeries& series) {
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write " + path);
    }
    write_csv(out, series);
}

} // namespace dayahead::cli
