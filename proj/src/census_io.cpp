#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "gramlab/error.hpp"
#include "gramlab/zeros.hpp"

namespace gramlab {
namespace {

constexpr const char* kHeader = "# gramlab-zeros v1";
constexpr const char* kColumns = "index,t,bracket_width,flag";

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw CacheError(fmt::format("census line {}: bad number '{}'", line_no, s));
  }
}

long long parse_int(const std::string& s, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw CacheError(fmt::format("census line {}: bad integer '{}'", line_no, s));
  }
}

}  // namespace

void write_census(std::ostream& out, const ZeroCensus& census) {
  out << kHeader << '\n';
  out << fmt::format("# t_lo={:.17g},t_hi={:.17g},expected_count={},audit_passed={},s_lo={:.17g},s_hi={:.17g}\n",
                     census.t_lo, census.t_hi, census.expected_count, census.audit_passed ? 1 : 0, census.s_lo,
                     census.s_hi);
  out << kColumns << '\n';
  std::size_t index = 0;
  for (const auto& z : census.zeros) {
    out << fmt::format("{},{:.17g},{:.17g},{}\n", index++, z.t, z.width,
                       z.flag == ZeroFlag::ok ? "ok" : "near_tangency");
  }
}

std::string census_to_string(const ZeroCensus& census) {
  std::ostringstream ss;
  write_census(ss, census);
  return ss.str();
}

ZeroCensus read_census(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line) || line != kHeader) throw CacheError("census: missing '# gramlab-zeros v1' header");

  ZeroCensus census;
  ++line_no;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0) throw CacheError("census: missing metadata line");
  bool seen[6] = {};
  for (const auto& field : split(line.substr(2), ',')) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) throw CacheError("census: malformed metadata field '" + field + "'");
    const std::string key = field.substr(0, eq);
    const std::string value = field.substr(eq + 1);
    if (key == "t_lo") {
      census.t_lo = parse_double(value, line_no);
      seen[0] = true;
    } else if (key == "t_hi") {
      census.t_hi = parse_double(value, line_no);
      seen[1] = true;
    } else if (key == "expected_count") {
      census.expected_count = parse_int(value, line_no);
      seen[2] = true;
    } else if (key == "audit_passed") {
      census.audit_passed = parse_int(value, line_no) != 0;
      seen[3] = true;
    } else if (key == "s_lo") {
      census.s_lo = parse_double(value, line_no);
      seen[4] = true;
    } else if (key == "s_hi") {
      census.s_hi = parse_double(value, line_no);
      seen[5] = true;
    } else {
      throw CacheError("census: unknown metadata key '" + key + "'");
    }
  }
  for (bool s : seen) {
    if (!s) throw CacheError("census: incomplete metadata line");
  }
  if (!(census.t_lo < census.t_hi)) throw CacheError("census: t_lo >= t_hi");

  ++line_no;
  if (!std::getline(in, line) || line != kColumns) throw CacheError("census: missing column header");

  long long expected_index = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cols = split(line, ',');
    if (cols.size() != 4) throw CacheError(fmt::format("census line {}: expected 4 columns", line_no));
    if (parse_int(cols[0], line_no) != expected_index++) {
      throw CacheError(fmt::format("census line {}: index out of sequence", line_no));
    }
    ZeroOrdinate z;
    z.t = parse_double(cols[1], line_no);
    z.width = parse_double(cols[2], line_no);
    if (cols[3] == "ok") {
      z.flag = ZeroFlag::ok;
    } else if (cols[3] == "near_tangency") {
      z.flag = ZeroFlag::near_tangency;
    } else {
      throw CacheError(fmt::format("census line {}: unknown flag '{}'", line_no, cols[3]));
    }
    if (!(z.width >= 0.0)) throw CacheError(fmt::format("census line {}: negative bracket width", line_no));
    z.bracket_lo = z.t - 0.5 * z.width;
    z.bracket_hi = z.t + 0.5 * z.width;
    if (!census.zeros.empty() && !(z.t > census.zeros.back().t)) {
      throw CacheError(fmt::format("census line {}: ordinates not strictly increasing", line_no));
    }
    if (z.t < census.t_lo || z.t > census.t_hi) {
      throw CacheError(fmt::format("census line {}: ordinate outside census range", line_no));
    }
    census.zeros.push_back(z);
  }
  return census;
}

}  // namespace gramlab
