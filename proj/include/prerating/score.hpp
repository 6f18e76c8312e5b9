// Copyright 2026 The prerating Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <charconv>
#include <cmath>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace prerating {

/// Game points held as an integer number of micro-points.
///
/// Half points and any decimal with at most six fractional digits are
/// represented exactly, so totals such as m == k compare bit-exactly no
/// matter how many games were summed.
class Score {
 public:
  static constexpr std::int64_t kUnitsPerPoint = 1'000'000;
  static constexpr int kMaxDecimals = 6;

  constexpr Score() = default;

  static constexpr Score from_units(std::int64_t units) { return Score(units); }
  static constexpr Score points(std::int64_t whole) { return Score(whole * kUnitsPerPoint); }
  static constexpr Score half() { return Score(kUnitsPerPoint / 2); }
  static constexpr Score one() { return points(1); }

  /// Rounds to the nearest micro-point.
  static Score from_double(double pts) {
    if (!std::isfinite(pts)) throw std::invalid_argument("score is not finite");
    return Score(static_cast<std::int64_t>(std::llround(pts * kUnitsPerPoint)));
  }

  /// Parses a plain decimal ("1", "0.5", ".25", "-1.0"). Returns nullopt on
  /// anything else, including more than six fractional digits.
  static std::optional<Score> parse(std::string_view text) {
    if (text.empty()) return std::nullopt;
    bool negative = false;
    if (text.front() == '-' || text.front() == '+') {
      negative = text.front() == '-';
      text.remove_prefix(1);
    }
    const auto dot = text.find('.');
    const std::string_view whole = text.substr(0, dot);
    const std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
    if (whole.empty() && frac.empty()) return std::nullopt;
    if (frac.size() > static_cast<std::size_t>(kMaxDecimals)) return std::nullopt;
    auto all_digits = [](std::string_view s) {
      for (char ch : s)
        if (ch < '0' || ch > '9') return false;
      return true;
    };
    if (!all_digits(whole) || !all_digits(frac)) return std::nullopt;

    std::int64_t w = 0;
    if (!whole.empty()) {
      if (whole.size() > 12) return std::nullopt;
      std::from_chars(whole.data(), whole.data() + whole.size(), w);
    }
    std::int64_t f = 0;
    for (std::size_t i = 0; i < static_cast<std::size_t>(kMaxDecimals); ++i)
      f = f * 10 + (i < frac.size() ? frac[i] - '0' : 0);
    const std::int64_t units = w * kUnitsPerPoint + f;
    return Score(negative ? -units : units);
  }

  constexpr std::int64_t units() const { return units_; }
  constexpr double value() const { return static_cast<double>(units_) / kUnitsPerPoint; }

  /// Shortest decimal form: "18.5", "15", "0.25".
  std::string to_string() const {
    const std::int64_t mag = units_ < 0 ? -units_ : units_;
    std::string out = units_ < 0 ? "-" : "";
    out += std::to_string(mag / kUnitsPerPoint);
    std::int64_t frac = mag % kUnitsPerPoint;
    if (frac != 0) {
      std::string digits = std::to_string(frac);
      digits.insert(0, kMaxDecimals - digits.size(), '0');
      while (digits.back() == '0') digits.pop_back();
      out += '.';
      out += digits;
    }
    return out;
  }

  /// True when the score is a whole multiple of half a point.
  constexpr bool is_half_multiple() const { return units_ % (kUnitsPerPoint / 2) == 0; }

  constexpr Score& operator+=(Score other) {
    units_ += other.units_;
    return *this;
  }
  constexpr Score& operator-=(Score other) {
    units_ -= other.units_;
    return *this;
  }
  friend constexpr Score operator+(Score a, Score b) { return a += b; }
  friend constexpr Score operator-(Score a, Score b) { return a -= b; }
  friend constexpr auto operator<=>(Score, Score) = default;

 private:
  constexpr explicit Score(std::int64_t units) : units_(units) {}

  std::int64_t units_ = 0;
};

}  // namespace prerating
