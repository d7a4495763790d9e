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
// Cyclic Jacobi eigensolver for small dense symmetric matrices. Slow and
// simple on purpose: it shares no code with the library's eigensolver.
#pragma once

#include <vector>

namespace dipsad::testing {

struct SymEigen {
  std::vector<double> values;                // descending
  std::vector<std::vector<double>> vectors;  // vectors[k] pairs with values[k]
};

SymEigen jacobi_eigen(std::vector<std::vector<double>> a, int max_sweeps = 100);

}  // namespace dipsad::testing
