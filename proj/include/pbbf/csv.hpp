#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pbbf/experiments.hpp"

namespace pbbf::csv {

inline constexpr const char* kConvergenceHeader = "realization,frame,snr_normalized,gap,feedback_bit";
inline constexpr const char* kGapCdfHeader = "frames,gap_threshold,fraction";
inline constexpr const char* kBerHeader = "scheme,snr_db,bits,errors,ber";
inline constexpr const char* kTrackingHeader = "scheme,beta,normalized_doppler,bits,errors,ber";

// 17 significant digits; integral values keep a trailing ".0".
std::string format_double(double value);

void write_convergence(std::ostream& out, const std::vector<TrajectoryRow>& rows);
void write_gap_cdf(std::ostream& out, const std::vector<GapCdfRow>& rows);
void write_ber(std::ostream& out, const std::vector<BerRow>& rows);
void write_tracking(std::ostream& out, const std::vector<TrackingRow>& rows);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

Table read(std::istream& in);

std::vector<TrajectoryRow> parse_convergence(const Table& t);
std::vector<GapCdfRow> parse_gap_cdf(const Table& t);
std::vector<BerRow> parse_ber(const Table& t);
std::vector<TrackingRow> parse_tracking(const Table& t);

}  // namespace pbbf::csv
