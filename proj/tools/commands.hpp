/*
Copyright 2026 The dipsad Authors. All rights reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/
// The dipsad command line: detect, score, dump-dist and synth.

#pragma once

#include <cstddef>
#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace dipsad::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitPartial = 1;  // some inputs failed
inline constexpr int kExitConfig = 2;   // bad flags, no inputs

// "id<TAB>audio[<TAB>reference]" per line; '#' lines and blank lines are
// skipped. Relative paths are taken relative to the manifest's directory.
struct ManifestEntry {
  std::string id;
  std::filesystem::path audio;
  std::filesystem::path reference;  // empty when absent
};
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);

// Histogram of the values over [min, max] followed by the ECDF at each
// distinct value, as two '#'-headed TSV sections.
void write_distribution(std::ostream& out, std::span<const double> values, std::size_t bins);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dipsad::cli
