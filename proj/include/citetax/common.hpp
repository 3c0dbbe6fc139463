// Copyright 2026 The citetax Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CITETAX_COMMON_HPP_
#define CITETAX_COMMON_HPP_

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace citetax {

// Dense document index assigned at ingestion.
using DocIndex = std::uint32_t;

inline constexpr int kNoCluster = -1;

// Input data is malformed or inconsistent (CLI exit code 2).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller misused an API or CLI flag (CLI exit code 1).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Closed interval of publication years.
struct YearRange {
  int first = 0;
  int last = 0;

  bool contains(int year) const { return year >= first && year <= last; }
  bool contains(const std::optional<int>& year) const {
    return year && contains(*year);
  }
  bool empty() const { return last < first; }
  friend bool operator==(const YearRange&, const YearRange&) = default;
};

// Parses "1996-2012" or a single year "2010".
YearRange parse_year_range(std::string_view text);
std::string to_string(const YearRange& range);

// Shortest round-trip decimal representation; identical bits give identical
// text, which keeps every output file byte-stable.
std::string format_number(double value);

// Fixed-precision rendering for report columns.
std::string format_fixed(double value, int digits);

// Splits one TSV line on tabs; a trailing '\r' is stripped first.
std::vector<std::string_view> split_tabs(std::string_view line);

std::optional<long long> parse_int(std::string_view text);
std::optional<double> parse_double(std::string_view text);

// Number of workers to use when the caller passes 0.
unsigned default_thread_count();

// Runs body(i) for i in [0, n) on up to `threads` workers. Work is split
// into contiguous blocks so callers that write to slot i stay deterministic.
void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t)>& body);

// 64-bit mixing function (splitmix64 finalizer).
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace citetax

#endif  // CITETAX_COMMON_HPP_
