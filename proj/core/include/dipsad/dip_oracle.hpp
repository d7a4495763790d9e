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
#pragma once

#include <cstddef>
#include <span>

namespace dipsad {

inline constexpr std::size_t kDefaultOracleCap = 200;

// Dip by exhaustive search over candidate modal intervals [v_i, v_j] of the
// distinct sample values. For each candidate the fit is: convex minorant of
// F(x-) on the left shifted up by d/2, a straight segment from
// (v_i, F(v_i-) + d/2) to (v_j, F(v_j) - d/2), and the concave majorant of
// F on the right shifted down by d/2. The smallest d for which that
// composite is a unimodal distribution function within d/2 of F is the
// candidate's cost; the dip is half the minimum cost (floored at 1/(2N)).
//
// Cost is O(m^3) in the number of distinct values; samples larger than
// `cap` throw dipsad::Error. Intended for tests and diagnostics.
double brute_force_dip(std::span<const double> sorted,
                       std::size_t cap = kDefaultOracleCap);

}  // namespace dipsad
