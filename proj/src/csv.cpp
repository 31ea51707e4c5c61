#include "pbbf/csv.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace pbbf::csv {

namespace {

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) {
        fields.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        fields.emplace_back();
    }
    return fields;
}

void expect_header(const Table& t, const char* header)
{
    if (t.header != split(header)) {
        throw std::runtime_error(std::string("csv: expected header ") + header);
    }
}

double to_double(const std::string& s)
{
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) {
        throw std::runtime_error("csv: bad number '" + s + "'");
    }
    return v;
}

long long to_int(const std::string& s)
{
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size()) {
        throw std::runtime_error("csv: bad integer '" + s + "'");
    }
    return v;
}

}  // namespace

std::string format_double(double value)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    std::string s(buf);
    if (s.find_first_of(".eEn") == std::string::npos) {
        s += ".0";
    }
    return s;
}

void write_convergence(std::ostream& out, const std::vector<TrajectoryRow>& rows)
{
    out << kConvergenceHeader << '\n';
    for (const auto& r : rows) {
        out << r.realization << ',' << r.frame << ',' << format_double(r.snr_normalized) << ','
            << format_double(r.gap) << ',' << r.feedback_bit << '\n';
    }
}

void write_gap_cdf(std::ostream& out, const std::vector<GapCdfRow>& rows)
{
    out << kGapCdfHeader << '\n';
    for (const auto& r : rows) {
        out << r.frames << ',' << format_double(r.gap_threshold) << ','
            << format_double(r.fraction) << '\n';
    }
}

void write_ber(std::ostream& out, const std::vector<BerRow>& rows)
{
    out << kBerHeader << '\n';
    for (const auto& r : rows) {
        out << r.scheme << ',' << format_double(r.snr_db) << ',' << r.bits << ',' << r.errors
            << ',' << format_double(r.ber) << '\n';
    }
}

void write_tracking(std::ostream& out, const std::vector<TrackingRow>& rows)
{
    out << kTrackingHeader << '\n';
    for (const auto& r : rows) {
        out << r.scheme << ',' << format_double(r.beta) << ','
            << format_double(r.normalized_doppler) << ',' << r.bits << ',' << r.errors << ','
            << format_double(r.ber) << '\n';
    }
}

Table read(std::istream& in)
{
    Table t;
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("csv: empty input");
    }
    t.header = split(line);
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        auto fields = split(line);
        if (fields.size() != t.header.size()) {
            throw std::runtime_error("csv: row width does not match header");
        }
        t.rows.push_back(std::move(fields));
    }
    return t;
}

std::vector<TrajectoryRow> parse_convergence(const Table& t)
{
    expect_header(t, kConvergenceHeader);
    std::vector<TrajectoryRow> rows;
    for (const auto& f : t.rows) {
        rows.push_back(TrajectoryRow{static_cast<int>(to_int(f[0])), static_cast<int>(to_int(f[1])),
                                     to_double(f[2]), to_double(f[3]),
                                     static_cast<int>(to_int(f[4]))});
    }
    return rows;
}

std::vector<GapCdfRow> parse_gap_cdf(const Table& t)
{
    expect_header(t, kGapCdfHeader);
    std::vector<GapCdfRow> rows;
    for (const auto& f : t.rows) {
        rows.push_back(GapCdfRow{static_cast<int>(to_int(f[0])), to_double(f[1]), to_double(f[2])});
    }
    return rows;
}

std::vector<BerRow> parse_ber(const Table& t)
{
    expect_header(t, kBerHeader);
    std::vector<BerRow> rows;
    for (const auto& f : t.rows) {
        rows.push_back(BerRow{f[0], to_double(f[1]), to_int(f[2]), to_int(f[3]), to_double(f[4])});
    }
    return rows;
}

std::vector<TrackingRow> parse_tracking(const Table& t)
{
    expect_header(t, kTrackingHeader);
    std::vector<TrackingRow> rows;
    for (const auto& f : t.rows) {
        rows.push_back(TrackingRow{f[0], to_double(f[1]), to_double(f[2]), to_int(f[3]),
                                   to_int(f[4]), to_double(f[5])});
    }
    return rows;
}

}  // namespace pbbf::csv
