#include "fieldguard/error_table.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fieldguard/errors.hpp"

namespace fieldguard {
namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::optional<double> to_double(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        return std::nullopt;
    }
    return v;
}

std::string fixed(double v, int decimals, bool sign = false) {
    char buf[64];
    std::snprintf(buf, sizeof buf, sign ? "%+.*f" : "%.*f", decimals, v);
    return buf;
}

}  // namespace

std::vector<ErrorRecord> read_error_csv(std::istream& input) {
    std::vector<ErrorRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(input, line)) {
        ++line_no;
        const std::string_view row = trim(line);
        if (row.empty() || row.front() == '#') continue;

        std::vector<std::string_view> fields;
        std::size_t start = 0;
        for (std::size_t comma; (comma = row.find(',', start)) != std::string_view::npos; start = comma + 1) {
            fields.push_back(trim(row.substr(start, comma - start)));
        }
        fields.push_back(trim(row.substr(start)));

        const std::string where = "line " + std::to_string(line_no);
        if (fields.size() != 3) {
            throw ProtocolError(where + ": expected label,obtained,actual", 0);
        }
        const auto obtained = to_double(fields[1]);
        const auto actual = to_double(fields[2]);
        if (!obtained || !actual) {
            if (records.empty() && !obtained) {
                continue;  // header
            }
            throw ProtocolError(where + ": obtained and actual must be numbers", 0);
        }
        try {
            records.emplace_back(std::string(fields[0]), *obtained, *actual);
        } catch (const DomainError& e) {
            throw ProtocolError(where + ": " + e.what(), 0);
        }
    }
    return records;
}

std::vector<ErrorRecord> read_error_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ProtocolError("cannot open " + path.string(), 0);
    }
    return read_error_csv(in);
}

std::string format_error_report(const std::vector<ErrorRecord>& records,
                                const ErrorSummary& summary) {
    std::size_t label_width = 9;
    for (const auto& r : records) label_width = std::max(label_width, r.label().size());

    std::ostringstream out;
    const auto pad = [&](std::string s, std::size_t w) {
        if (s.size() < w) s.append(w - s.size(), ' ');
        return s;
    };
    const auto lpad = [](std::string s, std::size_t w) {
        if (s.size() < w) s.insert(0, w - s.size(), ' ');
        return s;
    };
    out << pad("Test Case", label_width) << "  " << lpad("Obtained", 10) << "  " << lpad("Actual", 10)
        << "  " << lpad("% Error", 9) << "\n";
    for (const auto& r : records) {
        out << pad(r.label(), label_width) << "  " << lpad(fixed(r.obtained_m(), 2), 10) << "  "
            << lpad(fixed(r.actual_m(), 2), 10) << "  " << lpad(fixed(r.percent_error(), 2, true), 9)
            << "\n";
    }
    out << "\nmean positive error: "
        << (summary.mean_positive ? fixed(*summary.mean_positive, 2, true) + " %" : "n/a") << " ("
        << summary.positive_count << (summary.positive_count == 1 ? " row)\n" : " rows)\n");
    out << "mean negative error: "
        << (summary.mean_negative ? fixed(*summary.mean_negative, 2, true) + " %" : "n/a") << " ("
        << summary.negative_count << (summary.negative_count == 1 ? " row)\n" : " rows)\n");
    return out.str();
}

}  // namespace fieldguard
