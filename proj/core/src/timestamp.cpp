#include <charconv>
#include <chrono>
#include <regex>
#include <string>

#include "fsd/error.hpp"
#include "fsd/ingest.hpp"

namespace fsd {
namespace {

int to_int(const std::ssub_match& m) {
  int value = 0;
  const std::string s = m.str();
  std::from_chars(s.data(), s.data() + s.size(), value);
  return value;
}

bool is_integer(std::string_view text) {
  std::size_t i = text.starts_with('-') || text.starts_with('+') ? 1 : 0;
  if (i == text.size()) return false;
  for (; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9') return false;
  }
  return true;
}

}  // namespace

Timestamp parse_timestamp(std::string_view text) {
  const std::string quoted = "\"" + std::string(text) + "\"";
  if (is_integer(text)) {
    Timestamp value = 0;
    const char* first = text.data() + (text.starts_with('+') ? 1 : 0);
    auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw Error(ErrorCode::kParseError, "timestamp out of range: " + quoted);
    }
    return value;
  }

  static const std::regex kIso(
      R"(^(\d{4})-(\d{2})-(\d{2})(?:[Tt ](\d{2}):(\d{2})(?::(\d{2})(?:[.,]\d+)?)?)?)"
      R"((?:([Zz])|([+-])(\d{2})(?::?(\d{2}))?)?$)");
  std::smatch m;
  const std::string s(text);
  if (!std::regex_match(s, m, kIso)) {
    throw Error(ErrorCode::kParseError, "unrecognized timestamp " + quoted);
  }
  const bool has_zone = m[7].matched || m[8].matched;
  if (!has_zone) {
    throw Error(ErrorCode::kAmbiguousTimestamp, "timestamp without time zone " + quoted);
  }

  using namespace std::chrono;
  const year_month_day date{year{to_int(m[1])}, month{static_cast<unsigned>(to_int(m[2]))},
                            day{static_cast<unsigned>(to_int(m[3]))}};
  const int hh = m[4].matched ? to_int(m[4]) : 0;
  const int mm = m[5].matched ? to_int(m[5]) : 0;
  const int ss = m[6].matched ? to_int(m[6]) : 0;
  int offset = 0;
  if (m[8].matched) {
    const int oh = to_int(m[9]);
    const int om = m[10].matched ? to_int(m[10]) : 0;
    if (oh > 23 || om > 59) throw Error(ErrorCode::kParseError, "bad zone offset in " + quoted);
    offset = (m[8].str() == "-" ? -1 : 1) * (oh * 3600 + om * 60);
  }
  if (!date.ok() || hh > 23 || mm > 59 || ss > 59) {
    throw Error(ErrorCode::kParseError, "invalid date or time in " + quoted);
  }
  const Timestamp days = sys_days(date).time_since_epoch().count();
  return days * 86400 + hh * 3600 + mm * 60 + ss - offset;
}

}  // namespace fsd
