#include "laxhvac/io.hpp"

#include "laxhvac/error.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

namespace laxhvac {

std::int64_t parse_timestamp(const std::string& text) {
    using namespace std::chrono;
    std::string s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.pop_back();
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.erase(s.begin());
    }
    if (s.empty()) {
        throw DataError("empty timestamp");
    }
    if (s.find('-', 1) == std::string::npos) {
        std::size_t used = 0;
        try {
            const long long v = std::stoll(s, &used);
            if (used == s.size()) {
                return v;
            }
        } catch (const std::exception&) {
        }
        throw DataError("unparseable timestamp '" + text + "'");
    }
    if (s.back() == 'Z') {
        s.pop_back();
    }
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
    char sep = ' ';
    int consumed = 0;
    const int got = std::sscanf(s.c_str(), "%d-%d-%d%n%c%d:%d%n:%d%n", &y, &mo, &d, &consumed, &sep,
                                &h, &mi, &consumed, &sec, &consumed);
    const bool shape = got == 3 || ((got == 6 || got == 7) && (sep == ' ' || sep == 'T'));
    if (!shape || consumed != static_cast<int>(s.size())) {
        throw DataError("unparseable timestamp '" + text + "'");
    }
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                             day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || h < 0 || h > 23 || mi < 0 || mi > 59 || sec < 0 || sec > 60) {
        throw DataError("invalid date or time in '" + text + "'");
    }
    const auto days = sys_days{ymd}.time_since_epoch().count();
    return static_cast<std::int64_t>(days) * 86400 + h * 3600 + mi * 60 + sec;
}

std::string format_timestamp(std::int64_t seconds) {
    using namespace std::chrono;
    const auto days = static_cast<int>(std::floor(static_cast<double>(seconds) / 86400.0));
    const std::int64_t rest = seconds - static_cast<std::int64_t>(days) * 86400;
    const year_month_day ymd{sys_days{std::chrono::days{days}}};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u %02d:%02d:%02d", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(rest / 3600), static_cast<int>(rest / 60 % 60),
                  static_cast<int>(rest % 60));
    return buf;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    bool quoted = false;
    for (const char c : line) {
        if (c == '"') {
            quoted = !quoted;
        } else if (c == ',' && !quoted) {
            out.push_back(cell);
            cell.clear();
        } else if (c != '\r') {
            cell += c;
        }
    }
    out.push_back(cell);
    for (auto& s : out) {
        const auto b = s.find_first_not_of(" \t");
        const auto e = s.find_last_not_of(" \t");
        s = b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    }
    return out;
}

double parse_double(const std::string& cell, const std::string& column, int row) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(cell, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != cell.size() || !std::isfinite(v)) {
        throw DataError("row " + std::to_string(row) + ": column '" + column +
                        "': unparseable number '" + cell + "'");
    }
    return v;
}

}  // namespace

ExogenousSeries read_exogenous_csv(std::istream& in, const ColumnMap& columns, double step_hours) {
    if (!(step_hours > 0.0)) {
        throw PreconditionError("read_exogenous_csv: step must be > 0");
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw DataError("row 1: missing header");
    }
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
        line.erase(0, 3);
    }
    const auto header = split_csv(line);
    auto find = [&](const std::string& name) {
        for (std::size_t k = 0; k < header.size(); ++k) {
            if (header[k] == name) {
                return k;
            }
        }
        throw DataError("row 1: missing column '" + name + "'");
    };
    const auto ct = find(columns.timestamp);
    const auto cp = find(columns.price);
    const auto cx = find(columns.x_out);
    const auto step = static_cast<std::int64_t>(std::llround(step_hours * 3600.0));

    ExogenousSeries out;
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        const auto cells = split_csv(line);
        if (cells.size() != header.size()) {
            throw DataError("row " + std::to_string(row) + ": expected " +
                            std::to_string(header.size()) + " fields, found " +
                            std::to_string(cells.size()));
        }
        std::int64_t ts = 0;
        try {
            ts = parse_timestamp(cells[ct]);
        } catch (const DataError& e) {
            throw DataError("row " + std::to_string(row) + ": column '" + columns.timestamp +
                            "': " + e.what());
        }
        if (!out.timestamps.empty()) {
            const auto gap = ts - out.timestamps.back();
            if (gap != step) {
                std::ostringstream msg;
                msg << "row " << row << ": " << (gap > step ? "gap, " : "") << "timestamp "
                    << format_timestamp(ts) << " is " << static_cast<double>(gap) / 3600.0 << " h after the previous row, expected "
                    << step_hours << " h";
                throw DataError(msg.str());
            }
        }
        out.timestamps.push_back(ts);
        out.price.push_back(parse_double(cells[cp], columns.price, row));
        out.x_out.push_back(parse_double(cells[cx], columns.x_out, row));
    }
    if (out.size() == 0) {
        throw DataError("no data rows");
    }
    return out;
}

ExogenousSeries load_csv(const std::string& path, const ColumnMap& columns, double step_hours) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open '" + path + "'");
    }
    try {
        return read_exogenous_csv(in, columns, step_hours);
    } catch (const DataError& e) {
        throw DataError(path + ": " + e.what());
    }
}

void write_exogenous_csv(std::ostream& out, const ExogenousSeries& series) {
    series.validate();
    out << "timestamp,price,x_out\n" << std::setprecision(17);
    for (std::size_t k = 0; k < series.size(); ++k) {
        if (series.timestamps.empty()) {
            out << k * 3600;
        } else {
            out << format_timestamp(series.timestamps[k]);
        }
        out << ',' << series.price[k] << ',' << series.x_out[k] << '\n';
    }
}

ExogenousSeries slice(const ExogenousSeries& series, std::int64_t from, std::int64_t to) {
    if (series.timestamps.size() != series.size()) {
        throw PreconditionError("slice: series has no timestamps");
    }
    ExogenousSeries out;
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto ts = series.timestamps[k];
        if (ts >= from && ts < to) {
            out.timestamps.push_back(ts);
            out.price.push_back(series.price[k]);
            out.x_out.push_back(series.x_out[k]);
        }
    }
    return out;
}

void SynthSpec::validate() const {
    if (hours == 0) {
        throw ConfigError("synthetic.hours: must be >= 1");
    }
    if (!(step_hours > 0.0)) {
        throw ConfigError("synthetic.step_hours: must be > 0");
    }
    if (!(peak_width > 0.0)) {
        throw ConfigError("synthetic.peak_width: must be > 0");
    }
    if (temp_noise < 0.0 || price_noise < 0.0 || day_shift < 0.0) {
        throw ConfigError("synthetic: noise levels must be >= 0");
    }
}

ExogenousSeries synth_series(const SynthSpec& spec, std::uint64_t seed) {
    spec.validate();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> shift(-1.0, 1.0);
    const double two_pi = 2.0 * std::numbers::pi;

    auto bump = [&](double hour, double centre) {
        double d = std::fmod(std::abs(hour - centre), 24.0);
        d = std::min(d, 24.0 - d);
        return std::exp(-0.5 * (d / spec.peak_width) * (d / spec.peak_width));
    };

    ExogenousSeries out;
    int day = -1;
    double offset = 0.0;
    for (std::size_t k = 0; k < spec.hours; ++k) {
        const double hour = static_cast<double>(k) * spec.step_hours;
        const auto today = static_cast<int>(std::floor(hour / 24.0));
        if (today != day) {
            day = today;
            offset = spec.day_shift > 0.0 ? spec.day_shift * shift(rng) : 0.0;
        }
        const double t_noise = spec.temp_noise > 0.0 ? spec.temp_noise * normal(rng) : 0.0;
        const double p_noise = spec.price_noise > 0.0 ? spec.price_noise * normal(rng) : 0.0;
        const double hod = std::fmod(hour, 24.0);
        out.timestamps.push_back(spec.start + static_cast<std::int64_t>(std::llround(hour * 3600.0)));
        out.x_out.push_back(spec.temp_mean + offset +
                            spec.temp_amplitude * std::cos(two_pi * (hod - spec.temp_peak_hour) / 24.0) +
                            t_noise);
        out.price.push_back(spec.price_base +
                            spec.price_peak * (bump(hod, spec.morning_peak_hour) +
                                               bump(hod, spec.evening_peak_hour)) +
                            p_noise);
    }
    return out;
}

}  // namespace laxhvac
