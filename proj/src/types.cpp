#include "cyclarb/types.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>

namespace cyclarb {

std::string_view to_string(Chain c) {
  switch (c) {
    case Chain::Ethereum: return "ethereum";
    case Chain::Arbitrum: return "arbitrum";
    case Chain::Base: return "base";
    case Chain::Optimism: return "optimism";
  }
  return "unknown";
}

Chain parse_chain(std::string_view s) {
  for (Chain c : kAllChains) {
    if (s == to_string(c)) return c;
  }
  throw Error("unknown chain: '" + std::string(s) + "'");
}

std::string_view to_string(CallType c) {
  switch (c) {
    case CallType::Call: return "CALL";
    case CallType::StaticCall: return "STATICCALL";
    case CallType::DelegateCall: return "DELEGATECALL";
    case CallType::CallCode: return "CALLCODE";
    case CallType::Create: return "CREATE";
  }
  return "UNKNOWN";
}

CallType parse_call_type(std::string_view s) {
  std::string up(s);
  std::transform(up.begin(), up.end(), up.begin(),
                 [](unsigned char ch) { return std::toupper(ch); });
  if (up == "CALL") return CallType::Call;
  if (up == "STATICCALL") return CallType::StaticCall;
  if (up == "DELEGATECALL") return CallType::DelegateCall;
  if (up == "CALLCODE") return CallType::CallCode;
  if (up == "CREATE" || up == "CREATE2") return CallType::Create;
  throw Error("unknown call type: '" + std::string(s) + "'");
}

namespace {

bool is_hex_digit(char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}

uint8_t hex_nibble(char c) {
  if (c >= '0' && c <= '9') return static_cast<uint8_t>(c - '0');
  if (c >= 'a' && c <= 'f') return static_cast<uint8_t>(c - 'a' + 10);
  return static_cast<uint8_t>(c - 'A' + 10);
}

std::string normalize_hex_id(std::string_view s, size_t nibbles, const char* what) {
  if (s.size() != nibbles + 2 || s[0] != '0' || (s[1] != 'x' && s[1] != 'X')) {
    throw Error(std::string(what) + ": expected 0x-prefixed " +
                std::to_string(nibbles) + "-digit hex, got '" + std::string(s) + "'");
  }
  std::string out;
  out.reserve(s.size());
  out += "0x";
  for (size_t i = 2; i < s.size(); ++i) {
    char c = s[i];
    if (!is_hex_digit(c)) {
      throw Error(std::string(what) + ": invalid hex digit in '" + std::string(s) + "'");
    }
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

}  // namespace

Address Address::parse(std::string_view s) {
  Address a;
  a.hex_ = normalize_hex_id(s, 40, "address");
  return a;
}

TxHash TxHash::parse(std::string_view s) {
  TxHash h;
  h.hex_ = normalize_hex_id(s, 64, "tx hash");
  return h;
}

// ---------------------------------------------------------------------------
// Civil-date arithmetic (proleptic Gregorian, Howard Hinnant's algorithms).
// ---------------------------------------------------------------------------

namespace {

int32_t days_from_civil(int y, unsigned m, unsigned d) {
  y -= m <= 2;
  const int era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<int32_t>(doe) - 719468;
}

void civil_from_days(int32_t z, int& y, unsigned& m, unsigned& d) {
  z += 719468;
  const int era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<int>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y += m <= 2;
}

bool valid_ymd(int y, unsigned m, unsigned d) {
  if (m < 1 || m > 12 || d < 1) return false;
  static constexpr unsigned lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  unsigned len = lengths[m - 1];
  const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
  if (m == 2 && leap) len = 29;
  return d <= len;
}

unsigned parse_fixed_uint(std::string_view s, size_t pos, size_t len, const char* what) {
  unsigned v = 0;
  if (pos + len > s.size()) throw Error(std::string(what) + ": truncated '" + std::string(s) + "'");
  for (size_t i = pos; i < pos + len; ++i) {
    if (s[i] < '0' || s[i] > '9') {
      throw Error(std::string(what) + ": expected digit in '" + std::string(s) + "'");
    }
    v = v * 10 + static_cast<unsigned>(s[i] - '0');
  }
  return v;
}

}  // namespace

Date Date::from_ymd(int year, unsigned month, unsigned day) {
  if (!valid_ymd(year, month, day)) {
    throw Error("invalid calendar date " + std::to_string(year) + "-" +
                std::to_string(month) + "-" + std::to_string(day));
  }
  return Date(days_from_civil(year, month, day));
}

Date Date::parse(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') {
    throw Error("date: expected YYYY-MM-DD, got '" + std::string(s) + "'");
  }
  const int y = static_cast<int>(parse_fixed_uint(s, 0, 4, "date"));
  const unsigned m = parse_fixed_uint(s, 5, 2, "date");
  const unsigned d = parse_fixed_uint(s, 8, 2, "date");
  return from_ymd(y, m, d);
}

Date Date::from_timestamp(int64_t utc_seconds) {
  int64_t days = utc_seconds / 86400;
  if (utc_seconds % 86400 < 0) --days;
  return Date(static_cast<int32_t>(days));
}

std::string Date::to_string() const {
  int y;
  unsigned m, d;
  civil_from_days(days_, y, m, d);
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", y, m, d);
  return buf;
}

int64_t parse_iso8601_utc(std::string_view s) {
  // YYYY-MM-DD[T ]HH:MM:SS[.frac][Z|+00:00]
  if (s.size() < 19) throw Error("timestamp: too short '" + std::string(s) + "'");
  const Date date = Date::parse(s.substr(0, 10));
  if (s[10] != 'T' && s[10] != ' ') {
    throw Error("timestamp: expected 'T' separator in '" + std::string(s) + "'");
  }
  if (s[13] != ':' || s[16] != ':') {
    throw Error("timestamp: expected HH:MM:SS in '" + std::string(s) + "'");
  }
  const unsigned hh = parse_fixed_uint(s, 11, 2, "timestamp");
  const unsigned mm = parse_fixed_uint(s, 14, 2, "timestamp");
  const unsigned ss = parse_fixed_uint(s, 17, 2, "timestamp");
  if (hh > 23 || mm > 59 || ss > 60) {
    throw Error("timestamp: out-of-range time in '" + std::string(s) + "'");
  }
  size_t pos = 19;
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    const size_t start = pos;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
    if (pos == start) throw Error("timestamp: empty fraction in '" + std::string(s) + "'");
  }
  const std::string_view tail = s.substr(pos);
  if (!tail.empty() && tail != "Z" && tail != "+00:00" && tail != "+0000" && tail != "-00:00") {
    throw Error("timestamp: expected UTC ('Z' or +00:00) in '" + std::string(s) + "'");
  }
  return static_cast<int64_t>(date.days()) * 86400 + hh * 3600 + mm * 60 + ss;
}

std::string format_iso8601_utc(int64_t utc_seconds) {
  const Date date = Date::from_timestamp(utc_seconds);
  int64_t rem = utc_seconds - static_cast<int64_t>(date.days()) * 86400;
  char buf[16];
  std::snprintf(buf, sizeof buf, "T%02d:%02d:%02dZ", static_cast<int>(rem / 3600),
                static_cast<int>(rem / 60 % 60), static_cast<int>(rem % 60));
  return date.to_string() + buf;
}

std::vector<uint8_t> parse_hex_bytes(std::string_view s) {
  if (s.size() < 2 || s[0] != '0' || (s[1] != 'x' && s[1] != 'X')) {
    throw Error("hex: expected 0x prefix in '" + std::string(s) + "'");
  }
  if ((s.size() - 2) % 2 != 0) {
    throw Error("hex: odd number of digits in '" + std::string(s) + "'");
  }
  std::vector<uint8_t> out;
  out.reserve((s.size() - 2) / 2);
  for (size_t i = 2; i < s.size(); i += 2) {
    if (!is_hex_digit(s[i]) || !is_hex_digit(s[i + 1])) {
      throw Error("hex: invalid digit in '" + std::string(s) + "'");
    }
    out.push_back(static_cast<uint8_t>(hex_nibble(s[i]) << 4 | hex_nibble(s[i + 1])));
  }
  return out;
}

std::string to_hex(const std::vector<uint8_t>& bytes) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out = "0x";
  out.reserve(2 + bytes.size() * 2);
  for (uint8_t b : bytes) {
    out += digits[b >> 4];
    out += digits[b & 0xf];
  }
  return out;
}

}  // namespace cyclarb
