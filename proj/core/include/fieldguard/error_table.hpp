#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "fieldguard/ranging.hpp"

namespace fieldguard {

/// Rows of `label,obtained,actual`; an optional header row whose second
/// field is not numeric is skipped, as are blank and `#` lines. Throws
/// ProtocolError naming the offending line.
std::vector<ErrorRecord> read_error_csv(std::istream& input);
std::vector<ErrorRecord> read_error_csv(const std::filesystem::path& path);

/// Fixed-width table of the records followed by the summary lines.
std::string format_error_report(const std::vector<ErrorRecord>& records,
                                const ErrorSummary& summary);

}  // namespace fieldguard
