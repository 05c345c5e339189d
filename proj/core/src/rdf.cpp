#include "kbqa/rdf.hpp"

#include <cctype>
#include <chrono>
#include <cstdio>
#include <regex>

namespace kbqa::rdf {

namespace {

constexpr std::int64_t kMicrosPerSecond = 1'000'000;
constexpr std::int64_t kMicrosPerDay = 86'400 * kMicrosPerSecond;

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t days_from_civil(std::int64_t y, int m, int d) {
  using namespace std::chrono;
  return sys_days{year{static_cast<int>(y)} / month{static_cast<unsigned>(m)} /
                  day{static_cast<unsigned>(d)}}
      .time_since_epoch()
      .count();
}

// Local wall-clock microseconds, ignoring the timezone.
std::int64_t local_micros(const DateTime& d) {
  return days_from_civil(d.year, d.month, d.day) * kMicrosPerDay +
         ((d.hour * 60 + d.minute) * 60 + d.second) * kMicrosPerSecond + d.micros;
}

class Cursor {
 public:
  explicit Cursor(std::string_view s) : s_(s) {}
  bool done() const { return i_ >= s_.size(); }
  bool eat(char c) {
    if (!done() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }
  char peek() const { return done() ? '\0' : s_[i_]; }
  // Reads at least `min` digits (exactly `min` when `exact`).
  std::optional<std::int64_t> digits(std::size_t min, bool exact, std::size_t* count = nullptr) {
    std::size_t start = i_;
    std::int64_t v = 0;
    while (!done() && std::isdigit(static_cast<unsigned char>(s_[i_])) &&
           (!exact || i_ - start < min)) {
      if (v > 100'000'000'000'000LL) return std::nullopt;
      v = v * 10 + (s_[i_] - '0');
      ++i_;
    }
    if (i_ - start < min) return std::nullopt;
    if (count) *count = i_ - start;
    return v;
  }

 private:
  std::string_view s_;
  std::size_t i_ = 0;
};

}  // namespace

std::string xsd(std::string_view local) { return std::string(kXsd) + std::string(local); }

Term Term::literal(std::string lexical, std::string datatype, std::string lang) {
  if (!lang.empty()) datatype = std::string(kLangString);
  return {TermKind::Literal, std::move(lexical), std::move(datatype), std::move(lang)};
}

Term Term::integer(std::int64_t v) { return literal(std::to_string(v), xsd("integer")); }

std::string to_ntriples(const Term& t) {
  switch (t.kind) {
    case TermKind::Iri: return "<" + t.value + ">";
    case TermKind::Blank: return "_:" + t.value;
    case TermKind::Literal: break;
  }
  std::string out = "\"";
  for (char c : t.value) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += "\"";
  if (!t.lang.empty()) return out + "@" + t.lang;
  if (t.datatype.empty() || t.datatype == xsd("string")) return out;
  return out + "^^<" + t.datatype + ">";
}

std::int64_t days_in_month(std::int64_t y, int m) {
  using namespace std::chrono;
  return static_cast<unsigned>(
      (year{static_cast<int>(y)} / month{static_cast<unsigned>(m)} / last).day());
}

std::int64_t DateTime::instant() const {
  return local_micros(*this) - static_cast<std::int64_t>(tz_minutes.value_or(0)) * 60 *
                                   kMicrosPerSecond;
}

DateTime datetime_from_instant(std::int64_t micros) {
  using namespace std::chrono;
  std::int64_t days = floor_div(micros, kMicrosPerDay);
  std::int64_t rest = micros - days * kMicrosPerDay;
  year_month_day ymd{sys_days{std::chrono::days{days}}};
  DateTime d;
  d.year = static_cast<int>(ymd.year());
  d.month = static_cast<int>(static_cast<unsigned>(ymd.month()));
  d.day = static_cast<int>(static_cast<unsigned>(ymd.day()));
  std::int64_t secs = rest / kMicrosPerSecond;
  d.micros = static_cast<int>(rest % kMicrosPerSecond);
  d.hour = static_cast<int>(secs / 3600);
  d.minute = static_cast<int>(secs / 60 % 60);
  d.second = static_cast<int>(secs % 60);
  d.tz_minutes = 0;
  return d;
}

std::optional<DateTime> parse_datetime(std::string_view lexical) {
  Cursor c(lexical);
  DateTime d;
  bool negative = c.eat('-');
  if (!negative) c.eat('+');
  auto y = c.digits(4, false);
  if (!y || !c.eat('-')) return std::nullopt;
  auto mo = c.digits(2, true);
  if (!mo || !c.eat('-')) return std::nullopt;
  auto da = c.digits(2, true);
  if (!da) return std::nullopt;
  d.year = negative ? -*y : *y;
  d.month = static_cast<int>(*mo);
  d.day = static_cast<int>(*da);
  if (d.year < -9999 || d.year > 99999) return std::nullopt;
  if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > days_in_month(d.year, d.month))
    return std::nullopt;
  if (c.eat('T')) {
    auto h = c.digits(2, true);
    if (!h || !c.eat(':')) return std::nullopt;
    auto mi = c.digits(2, true);
    if (!mi || !c.eat(':')) return std::nullopt;
    auto s = c.digits(2, true);
    if (!s) return std::nullopt;
    if (*h > 23 || *mi > 59 || *s > 59) return std::nullopt;
    d.hour = static_cast<int>(*h);
    d.minute = static_cast<int>(*mi);
    d.second = static_cast<int>(*s);
    if (c.eat('.')) {
      std::size_t n = 0;
      auto frac = c.digits(1, false, &n);
      if (!frac) return std::nullopt;
      std::int64_t v = *frac;
      for (; n < 6; ++n) v *= 10;
      for (; n > 6; --n) v /= 10;
      d.micros = static_cast<int>(v);
    }
  }
  if (c.eat('Z')) {
    d.tz_minutes = 0;
  } else if (c.peek() == '+' || c.peek() == '-') {
    int sign = c.eat('-') ? -1 : (c.eat('+'), 1);
    auto th = c.digits(2, true);
    if (!th || !c.eat(':')) return std::nullopt;
    auto tm = c.digits(2, true);
    if (!tm || *th > 14 || *tm > 59) return std::nullopt;
    d.tz_minutes = sign * static_cast<int>(*th * 60 + *tm);
  }
  if (!c.done()) return std::nullopt;
  return d;
}

std::string format_datetime(const DateTime& d) {
  char buf[64];
  std::int64_t y = d.year < 0 ? -d.year : d.year;
  std::snprintf(buf, sizeof buf, "%s%04lld-%02d-%02dT%02d:%02d:%02d", d.year < 0 ? "-" : "",
                static_cast<long long>(y), d.month, d.day, d.hour, d.minute, d.second);
  std::string out = buf;
  if (d.micros) {
    std::snprintf(buf, sizeof buf, ".%06d", d.micros);
    std::string frac = buf;
    while (frac.back() == '0') frac.pop_back();
    out += frac;
  }
  if (d.tz_minutes) {
    int tz = *d.tz_minutes;
    if (tz == 0) {
      out += "Z";
    } else {
      std::snprintf(buf, sizeof buf, "%c%02d:%02d", tz < 0 ? '-' : '+', std::abs(tz) / 60,
                    std::abs(tz) % 60);
      out += buf;
    }
  }
  return out;
}

std::strong_ordering compare(const DateTime& a, const DateTime& b) {
  return a.instant() <=> b.instant();
}

std::optional<Duration> parse_duration(std::string_view lexical) {
  static const std::regex kDuration(
      R"((-)?P(?:(\d+)Y)?(?:(\d+)M)?(?:(\d+)D)?(?:T(?:(\d+)H)?(?:(\d+)M)?(?:(\d+)(?:\.(\d+))?S)?)?)");
  std::match_results<std::string_view::const_iterator> m;
  if (!std::regex_match(lexical.begin(), lexical.end(), m, kDuration)) return std::nullopt;
  bool any_date = m[2].matched || m[3].matched || m[4].matched;
  bool any_time = m[5].matched || m[6].matched || m[7].matched;
  if (!any_date && !any_time) return std::nullopt;
  if (lexical.find('T') != std::string_view::npos && !any_time) return std::nullopt;
  auto num = [&](int i) -> std::int64_t {
    if (!m[i].matched || m[i].length() > 12) return 0;
    return std::stoll(m[i].str());
  };
  for (int i = 2; i <= 7; ++i)
    if (m[i].matched && m[i].length() > 12) return std::nullopt;
  Duration d;
  d.negative = m[1].matched;
  d.months = num(2) * 12 + num(3);
  d.days = num(4);
  d.micros = ((num(5) * 60 + num(6)) * 60 + num(7)) * kMicrosPerSecond;
  if (m[8].matched) {
    std::string frac = m[8].str().substr(0, 6);
    while (frac.size() < 6) frac += '0';
    d.micros += std::stoll(frac);
  }
  return d;
}

std::string format_duration(const Duration& d) {
  std::string out = d.negative ? "-P" : "P";
  if (d.months / 12) out += std::to_string(d.months / 12) + "Y";
  if (d.months % 12) out += std::to_string(d.months % 12) + "M";
  if (d.days) out += std::to_string(d.days) + "D";
  if (d.micros) {
    std::int64_t secs = d.micros / kMicrosPerSecond;
    std::int64_t frac = d.micros % kMicrosPerSecond;
    out += "T";
    if (secs / 3600) out += std::to_string(secs / 3600) + "H";
    if (secs / 60 % 60) out += std::to_string(secs / 60 % 60) + "M";
    if (secs % 60 || frac) {
      out += std::to_string(secs % 60);
      if (frac) {
        char buf[16];
        std::snprintf(buf, sizeof buf, ".%06lld", static_cast<long long>(frac));
        std::string f = buf;
        while (f.back() == '0') f.pop_back();
        out += f;
      }
      out += "S";
    }
  }
  if (out == "P" || out == "-P") out += "0D";
  return out;
}

DateTime add(const DateTime& d, const Duration& dur) {
  std::int64_t sign = dur.negative ? -1 : 1;
  std::int64_t total = d.year * 12 + (d.month - 1) + sign * dur.months;
  DateTime shifted = d;
  shifted.year = floor_div(total, 12);
  shifted.month = static_cast<int>(total - shifted.year * 12) + 1;
  shifted.day = static_cast<int>(
      std::min<std::int64_t>(d.day, days_in_month(shifted.year, shifted.month)));
  std::int64_t local = local_micros(shifted) + sign * (dur.days * kMicrosPerDay + dur.micros);
  DateTime out = datetime_from_instant(local);
  out.tz_minutes = d.tz_minutes;
  return out;
}

bool valid_lexical(std::string_view lexical, std::string_view datatype) {
  static const std::regex kInteger(R"([+-]?\d+)");
  static const std::regex kDecimal(R"([+-]?(\d+(\.\d*)?|\.\d+))");
  static const std::regex kDouble(R"([+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?|[+-]?INF|NaN)");
  std::string s(lexical);
  if (datatype == xsd("integer") || datatype == xsd("int") || datatype == xsd("long"))
    return std::regex_match(s, kInteger);
  if (datatype == xsd("decimal")) return std::regex_match(s, kDecimal);
  if (datatype == xsd("double") || datatype == xsd("float")) return std::regex_match(s, kDouble);
  if (datatype == xsd("boolean")) return s == "true" || s == "false" || s == "1" || s == "0";
  if (datatype == xsd("dateTime")) {
    auto d = parse_datetime(s);
    return d && s.find('T') != std::string::npos;
  }
  if (datatype == xsd("date"))
    return parse_datetime(s).has_value() && s.find('T') == std::string::npos;
  if (datatype == xsd("duration")) return parse_duration(s).has_value();
  return true;
}

}  // namespace kbqa::rdf
