#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mmc/channel.hpp"

// Text formats used by the command-line tool.
//
// Channel file: '#' starts a comment line, the first data line is "nx ny",
// then nx lines of ny probabilities.
//
// Distribution file: same comment rules, first data line is the size n, then
// n probabilities spread over any number of lines.
namespace mmc::io {

/// Parse errors name the source and the 1-based line number.
Channel parse_channel(std::istream& in, const std::string& source);
Channel load_channel(const std::string& path);

std::vector<double> parse_distribution(std::istream& in, const std::string& source);
std::vector<double> load_distribution(const std::string& path);

/// Fixed 12-significant-digit formatting, independent of the locale.
std::string format_number(double v);

void write_channel(std::ostream& out, const Channel& w);

/// A "# label" comment followed by a "1 n" header and one row of values.
void write_block(std::ostream& out, std::string_view label, std::span<const double> values);

}  // namespace mmc::io
