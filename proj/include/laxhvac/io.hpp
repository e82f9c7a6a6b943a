#pragma once

#include "laxhvac/env.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>

namespace laxhvac {

/// Column names of an exogenous CSV file.
struct ColumnMap {
    std::string timestamp = "timestamp";
    std::string price = "price";
    std::string x_out = "x_out";
};

/// Seconds since the epoch for "YYYY-MM-DD HH:MM[:SS]" (a 'T' separator and a
/// trailing 'Z' are accepted; always UTC), "YYYY-MM-DD", or a plain integer.
/// Throws DataError.
std::int64_t parse_timestamp(const std::string& text);
/// "YYYY-MM-DD HH:MM:SS".
std::string format_timestamp(std::int64_t seconds);

/// Reads a header row then one row per timestep. Rows must be exactly
/// `step_hours` apart. Errors name the file row (1 = header).
ExogenousSeries read_exogenous_csv(std::istream& in, const ColumnMap& columns,
                                   double step_hours = 1.0);
ExogenousSeries load_csv(const std::string& path, const ColumnMap& columns,
                         double step_hours = 1.0);
void write_exogenous_csv(std::ostream& out, const ExogenousSeries& series);

/// Points with from <= timestamp < to.
ExogenousSeries slice(const ExogenousSeries& series, std::int64_t from, std::int64_t to);

/// Synthetic hourly data: a daily cosine for the outdoor temperature and a
/// base price with two Gaussian daily peaks, plus independent Gaussian noise.
struct SynthSpec {
    std::size_t hours = 24 * 28;
    std::int64_t start = 1675209600;  ///< 2023-02-01 00:00 UTC
    double step_hours = 1.0;
    double temp_mean = 8.0;
    double temp_amplitude = 5.0;
    double temp_peak_hour = 15.0;
    double temp_noise = 0.5;
    double price_base = 0.08;
    double price_peak = 0.10;
    double morning_peak_hour = 8.0;
    double evening_peak_hour = 19.0;
    double peak_width = 2.0;  ///< hours (standard deviation)
    double price_noise = 0.005;
    /// Extra day-to-day variation: each day's temperature mean is shifted by
    /// a uniform draw in [-day_shift, day_shift].
    double day_shift = 2.0;

    void validate() const;
};

ExogenousSeries synth_series(const SynthSpec& spec, std::uint64_t seed);

}  // namespace laxhvac
