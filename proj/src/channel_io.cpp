#include "mmc/channel_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <utility>

namespace mmc::io {

namespace {

constexpr double kFileTol = 1e-9;

struct Token {
  std::string_view text;
  std::size_t line = 0;
};

class Lexer {
 public:
  Lexer(std::istream& in, const std::string& source) : source_(source) {
    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
      ++no;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
      lines_.push_back({std::move(line), no});
    }
    for (const auto& [text, ln] : lines_) {
      std::size_t i = 0;
      while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t j = i;
        while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
        if (j > i) tokens_.push_back({std::string_view(text).substr(i, j - i), ln});
        i = j;
      }
    }
  }

  bool done() const { return pos_ == tokens_.size(); }
  std::size_t line() const { return done() ? last_line() : tokens_[pos_].line; }

  [[noreturn]] void fail(std::size_t line, const std::string& what) const {
    throw Error(ErrorKind::ParseError, source_ + ":" + std::to_string(line) + ": " + what);
  }

  std::size_t next_size(const char* what) {
    const Token t = take(what);
    std::size_t v = 0;
    const auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || p != t.text.data() + t.text.size() || v == 0) {
      fail(t.line, std::string("expected a positive integer for ") + what + ", got '" +
                       std::string(t.text) + "'");
    }
    return v;
  }

  double next_probability() {
    const Token t = take("a probability");
    double v = 0.0;
    const auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || p != t.text.data() + t.text.size() || !std::isfinite(v)) {
      fail(t.line, "not a number: '" + std::string(t.text) + "'");
    }
    if (v < 0.0) fail(t.line, "negative probability " + std::string(t.text));
    return v;
  }

  // Line of the token that would be read next, used to tag whole rows.
  std::size_t peek_line() const { return line(); }

 private:
  Token take(const char* what) {
    if (done()) fail(last_line(), std::string("unexpected end of input, expected ") + what);
    return tokens_[pos_++];
  }

  std::size_t last_line() const { return lines_.empty() ? 1 : lines_.back().second; }

  std::string source_;
  std::vector<std::pair<std::string, std::size_t>> lines_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

std::ifstream open(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::IoError, "cannot open " + path);
  return f;
}

}  // namespace

Channel parse_channel(std::istream& in, const std::string& source) {
  Lexer lex(in, source);
  const std::size_t header = lex.peek_line();
  const std::size_t nx = lex.next_size("nx");
  const std::size_t ny = lex.next_size("ny");
  if (!lex.done() && lex.peek_line() == header) lex.fail(header, "header must be \"nx ny\"");

  std::vector<std::vector<double>> rows(nx, std::vector<double>(ny));
  for (std::size_t x = 0; x < nx; ++x) {
    const std::size_t ln = lex.peek_line();
    double sum = 0.0;
    for (std::size_t y = 0; y < ny; ++y) {
      if (!lex.done() && lex.peek_line() != ln) lex.fail(ln, "row " + std::to_string(x) + " has too few entries");
      rows[x][y] = lex.next_probability();
      sum += rows[x][y];
    }
    if (!lex.done() && lex.peek_line() == ln) lex.fail(ln, "row " + std::to_string(x) + " has too many entries");
    if (std::abs(sum - 1.0) > kFileTol) {
      std::ostringstream os;
      os.precision(17);
      os << "row " << x << " sums to " << sum;
      lex.fail(ln, os.str());
    }
  }
  if (!lex.done()) lex.fail(lex.peek_line(), "trailing data after " + std::to_string(nx) + " rows");
  return make_channel(rows, kFileTol);
}

Channel load_channel(const std::string& path) {
  std::ifstream f = open(path);
  return parse_channel(f, path);
}

std::vector<double> parse_distribution(std::istream& in, const std::string& source) {
  Lexer lex(in, source);
  const std::size_t n = lex.next_size("the size");
  std::vector<double> p(n);
  double sum = 0.0;
  for (double& v : p) {
    v = lex.next_probability();
    sum += v;
  }
  if (!lex.done()) lex.fail(lex.peek_line(), "trailing data after " + std::to_string(n) + " entries");
  if (std::abs(sum - 1.0) > kFileTol) {
    lex.fail(lex.peek_line(), "probabilities sum to " + format_number(sum));
  }
  return ProbVector::from(std::move(p), kFileTol).vec();
}

std::vector<double> load_distribution(const std::string& path) {
  std::ifstream f = open(path);
  return parse_distribution(f, path);
}

std::string format_number(double v) {
  // snprintf with %g ignores the C++ locale; the C locale is never changed here.
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
  return buf;
}

void write_channel(std::ostream& out, const Channel& w) {
  out << w.nx() << ' ' << w.ny() << '\n';
  for (std::size_t x = 0; x < w.nx(); ++x) {
    for (std::size_t y = 0; y < w.ny(); ++y) out << (y ? " " : "") << format_number(w(x, y));
    out << '\n';
  }
}

void write_block(std::ostream& out, std::string_view label, std::span<const double> values) {
  out << "# " << label << '\n' << "1 " << values.size() << '\n';
  for (std::size_t i = 0; i < values.size(); ++i) out << (i ? " " : "") << format_number(values[i]);
  out << '\n';
}

}  // namespace mmc::io
