#ifndef WCOH_DATE_HPP
#define WCOH_DATE_HPP

#include <compare>
#include <cstdint>
#include <string>

namespace wcoh {

// A calendar day stored as a serial count of days since 1970-01-01.
// Proleptic Gregorian, no time-of-day, no timezone.
struct Date {
  std::int32_t serial = 0;

  auto operator<=>(const Date&) const = default;

  Date operator+(std::int32_t days) const { return Date{serial + days}; }
  Date operator-(std::int32_t days) const { return Date{serial - days}; }
  std::int32_t operator-(const Date& other) const { return serial - other.serial; }
  Date& operator++() { ++serial; return *this; }

  static Date from_ymd(int year, int month, int day);
  // Parses strict ISO-8601 "YYYY-MM-DD". Throws data_error on malformed input.
  static Date parse(const std::string& iso);
  std::string iso() const;
};

}  // namespace wcoh

#endif
