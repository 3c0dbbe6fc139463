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

#ifndef CITETAX_TESTS_SUPPORT_HPP_
#define CITETAX_TESTS_SUPPORT_HPP_

#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "citetax/corpus.hpp"
#include "citetax/network.hpp"

namespace citetax::testing {

inline LoadedCorpus load_text(const std::string& docs, const std::string& cites,
                              IngestionConfig config = {}) {
  std::istringstream d(docs), c(cites);
  return load_corpus(d, c, config);
}

inline Corpus corpus_from(const std::string& docs, const std::string& cites) {
  return load_text(docs, cites).corpus;
}

// Source article row for docs.tsv.
inline std::string article(const std::string& id, int year, const std::string& journal = "",
                           const std::string& type = "article") {
  return id + "\t" + std::to_string(year) + "\t" + type + "\t" + journal + "\t1\n";
}

inline Network network(int n, const std::vector<std::tuple<int, int, double>>& edges,
                       QualityKind kind = QualityKind::kCPM,
                       std::vector<std::uint64_t> keys = {}) {
  std::vector<LocalEdge> e;
  for (auto [u, v, w] : edges) e.push_back({u, v, w});
  return Network::from_edges(n, e, kind, std::move(keys));
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("citetax_test_" + std::to_string(rd()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& s) const { return path_ / s; }

 private:
  std::filesystem::path path_;
};

}  // namespace citetax::testing

#endif  // CITETAX_TESTS_SUPPORT_HPP_
